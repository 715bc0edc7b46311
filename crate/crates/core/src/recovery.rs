//! Recovering the abelian group and probability measure behind a cube.
//!
//! The main route matches every column `a_{i,j}` against the columns of
//! `A_1`, which makes state 1 the identity, reads the measure off
//! `a_{1,1}`, and certifies the answer by re-deriving the cube and
//! comparing it entry for entry. A `Recovered` outcome is never produced
//! without that comparison passing.
//!
//! Gates run in a fixed order and the first failure names the rejection:
//! validation, commutativity, associativity, condition (A), column
//! matching, group axioms, measure expansion, certification.

use std::collections::BTreeMap;
use std::fmt;

use serde::Serialize;
use thiserror::Error;

use crate::checks::{Checker, ConditionAReport};
use crate::cube::{validate_cube, CoreError, MeasureVector, StructureCube};
use crate::derivation::{derive_cube, mixture_matrix};
use crate::groups::{verify_group_axioms, CayleyTable, InvariantFactors};
use crate::rational::{format_rational, Rational};
use crate::report::Witness;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "reason", rename_all = "PascalCase")]
pub enum RejectionReason {
    FailsValidation {
        detail: String,
    },
    NotCommutative {
        witness: Witness,
    },
    NotAssociative {
        witness: Witness,
    },
    FailsConditionA {
        report: ConditionAReport,
    },
    /// No column of `A_1` equals `a_{i,j}` (1-based).
    ColumnMatchFailure {
        i: usize,
        j: usize,
    },
    GroupAxiomFailure {
        detail: String,
    },
    /// First entry `a[i][j][k]` (1-based) where the candidate's derived cube
    /// differs from the input.
    RoundTripMismatch {
        i: usize,
        j: usize,
        k: usize,
        expected: String,
        actual: String,
    },
}

impl RejectionReason {
    pub fn name(&self) -> &'static str {
        match self {
            Self::FailsValidation { .. } => "FailsValidation",
            Self::NotCommutative { .. } => "NotCommutative",
            Self::NotAssociative { .. } => "NotAssociative",
            Self::FailsConditionA { .. } => "FailsConditionA",
            Self::ColumnMatchFailure { .. } => "ColumnMatchFailure",
            Self::GroupAxiomFailure { .. } => "GroupAxiomFailure",
            Self::RoundTripMismatch { .. } => "RoundTripMismatch",
        }
    }
}

impl fmt::Display for RejectionReason {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.name())?;
        match self {
            Self::FailsValidation { detail } | Self::GroupAxiomFailure { detail } => write!(f, ": {detail}"),
            Self::NotCommutative { witness } | Self::NotAssociative { witness } => write!(f, ": {witness}"),
            Self::FailsConditionA { report } => write!(f, ": {report}"),
            Self::ColumnMatchFailure { i, j } => write!(f, ": column a[{i}][{j}] matches no column of A_1"),
            Self::RoundTripMismatch {
                i,
                j,
                k,
                expected,
                actual,
            } => {
                write!(f, ": a[{i}][{j}][{k}] expected {expected}, re-derived {actual}")
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum RecoveryResult {
    Recovered {
        table: CayleyTable,
        measure: MeasureVector,
        factors: InvariantFactors,
    },
    NotDerived(RejectionReason),
}

impl RecoveryResult {
    pub fn is_recovered(&self) -> bool {
        matches!(self, Self::Recovered { .. })
    }

    pub fn rejection(&self) -> Option<&RejectionReason> {
        match self {
            Self::NotDerived(reason) => Some(reason),
            Self::Recovered { .. } => None,
        }
    }
}

/// A group and measure proposed by column matching, before certification.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Candidate {
    pub table: CayleyTable,
    pub measure: MeasureVector,
}

/// Validates a raw nested array first, then runs [`recover`].
pub fn recover_raw(raw: Vec<Vec<Vec<Rational>>>) -> RecoveryResult {
    match validate_cube(raw) {
        Ok(cube) => recover(&cube),
        Err(e) => RecoveryResult::NotDerived(RejectionReason::FailsValidation { detail: e.to_string() }),
    }
}

pub fn recover(cube: &StructureCube) -> RecoveryResult {
    recover_with_candidate_hook(cube, |_| {})
}

/// [`recover`] with a hook that may alter the candidate just before
/// certification. Used to exercise the certification gate.
#[doc(hidden)]
pub fn recover_with_candidate_hook(cube: &StructureCube, hook: impl FnOnce(&mut Candidate)) -> RecoveryResult {
    match run_gates(cube, hook) {
        Ok(result) => result,
        Err(reason) => RecoveryResult::NotDerived(reason),
    }
}

fn run_gates(cube: &StructureCube, hook: impl FnOnce(&mut Candidate)) -> Result<RecoveryResult, RejectionReason> {
    let checker = Checker::new(1);
    let report = checker.is_commutative(cube);
    if let Some(witness) = report.witnesses.into_iter().next() {
        return Err(RejectionReason::NotCommutative { witness });
    }
    let report = checker.is_associative_matrix(cube);
    if let Some(witness) = report.witnesses.into_iter().next() {
        return Err(RejectionReason::NotAssociative { witness });
    }
    let report = checker.satisfies_condition_a(cube);
    if !report.holds {
        return Err(RejectionReason::FailsConditionA { report });
    }

    let rows = match_columns(cube)?;
    let axioms = verify_group_axioms(&rows);
    if !axioms.holds() {
        return Err(RejectionReason::GroupAxiomFailure {
            detail: axioms.summary(),
        });
    }
    let table = CayleyTable::new(rows).map_err(|e| RejectionReason::GroupAxiomFailure { detail: e.to_string() })?;

    let measure = recover_measure_from_a1(cube, &table).map_err(|e| match e {
        MeasureRecoveryError::InconsistentExpansion {
            row,
            col,
            expected,
            actual,
        } => {
            // A_1[row][col] is a[1][col][row]
            RejectionReason::RoundTripMismatch {
                i: 1,
                j: col,
                k: row,
                expected,
                actual,
            }
        }
        MeasureRecoveryError::Dimension(e) => RejectionReason::GroupAxiomFailure { detail: e.to_string() },
    })?;

    let mut candidate = Candidate { table, measure };
    hook(&mut candidate);
    certify(cube, &candidate)?;
    let factors = candidate.table.factors();
    Ok(RecoveryResult::Recovered {
        table: candidate.table,
        measure: candidate.measure,
        factors,
    })
}

/// `T[i][j] = k` where `a_{1,k} = a_{i,j}`. Needs the columns of `A_1` to be
/// pairwise distinct, which condition (A) guarantees.
fn match_columns(cube: &StructureCube) -> Result<Vec<Vec<usize>>, RejectionReason> {
    let n = cube.n();
    let index: BTreeMap<&[Rational], usize> = (0..n).map(|k| (cube.column(0, k), k)).collect();
    (0..n)
        .map(|i| {
            (0..n)
                .map(|j| {
                    index
                        .get(cube.column(i, j))
                        .copied()
                        .ok_or(RejectionReason::ColumnMatchFailure { i: i + 1, j: j + 1 })
                })
                .collect()
        })
        .collect()
}

/// Re-derives the cube from the candidate and compares exactly.
pub fn certify(cube: &StructureCube, candidate: &Candidate) -> Result<(), RejectionReason> {
    let n = cube.n();
    let mismatch =
        |i: usize, j: usize, k: usize, expected: String, actual: String| RejectionReason::RoundTripMismatch {
            i: i + 1,
            j: j + 1,
            k: k + 1,
            expected,
            actual,
        };
    let derived = derive_cube(&candidate.table, &candidate.measure)
        .map_err(|e| mismatch(0, 0, 0, format!("order {n}"), e.to_string()))?;
    let position = cube.entries().iter().zip(derived.entries()).position(|(a, b)| a != b);
    match position {
        None => Ok(()),
        Some(p) => Err(mismatch(
            p / (n * n),
            (p / n) % n,
            p % n,
            format_rational(&cube.entries()[p]),
            format_rational(&derived.entries()[p]),
        )),
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MeasureRecoveryError {
    /// `A_1 ≠ Σ_k m_k G_k`; first differing entry, 1-based.
    #[error("A_1 differs from the expansion at [{row}][{col}]: expected {expected}, got {actual}")]
    InconsistentExpansion {
        row: usize,
        col: usize,
        expected: String,
        actual: String,
    },
    #[error(transparent)]
    Dimension(#[from] CoreError),
}

/// Reads `m = a_{1,1}` and verifies `A_1 = Σ_k m_k G_k` exactly against the
/// regular representation of `table`.
pub fn recover_measure_from_a1(
    cube: &StructureCube,
    table: &CayleyTable,
) -> Result<MeasureVector, MeasureRecoveryError> {
    if table.n() != cube.n() {
        return Err(CoreError::DimensionMismatch {
            expected: cube.n(),
            found: table.n(),
        }
        .into());
    }
    let measure = MeasureVector::new(cube.column(0, 0).to_vec())?;
    let expansion = mixture_matrix(table, &measure)?.matrix;
    let a1 = cube.left(0);
    match a1.first_difference(&expansion) {
        None => Ok(measure),
        Some((r, c)) => Err(MeasureRecoveryError::InconsistentExpansion {
            row: r + 1,
            col: c + 1,
            expected: format_rational(&expansion[(r, c)]),
            actual: format_rational(&a1[(r, c)]),
        }),
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ExtractionFailure {
    #[error("value does not occur in the cube")]
    ValueAbsent,
    /// Pair `(i, j)` (1-based) has `count` positions holding the value.
    #[error("value occurs {count} times in column a[{i}][{j}]")]
    NotFunctional { i: usize, j: usize, count: usize },
    #[error("{0}")]
    GroupAxiomFailure(String),
}

/// Reads the positions of one scalar value `v` as a binary operation
/// `i ∘ j = k` iff `a[i][j][k] = v`, then relabels so its identity is state
/// 1. Meaningful when every value occurs once per column.
pub fn extract_group_by_value(cube: &StructureCube, v: &Rational) -> Result<CayleyTable, ExtractionFailure> {
    let n = cube.n();
    if !cube.entries().contains(v) {
        return Err(ExtractionFailure::ValueAbsent);
    }
    let mut rows = vec![vec![0; n]; n];
    for (i, row) in rows.iter_mut().enumerate() {
        for (j, slot) in row.iter_mut().enumerate() {
            let hits: Vec<usize> = cube
                .column(i, j)
                .iter()
                .enumerate()
                .filter(|(_, x)| *x == v)
                .map(|(k, _)| k)
                .collect();
            if hits.len() != 1 {
                return Err(ExtractionFailure::NotFunctional {
                    i: i + 1,
                    j: j + 1,
                    count: hits.len(),
                });
            }
            *slot = hits[0];
        }
    }
    let report = verify_group_axioms(&rows);
    if !report.holds() {
        return Err(ExtractionFailure::GroupAxiomFailure(report.summary()));
    }
    let e = report
        .identity
        .ok_or_else(|| ExtractionFailure::GroupAxiomFailure("no identity element".into()))?
        .zero_based();
    let mut perm: Vec<usize> = (0..n).collect();
    perm.swap(0, e);
    let mut relabeled = vec![vec![0; n]; n];
    for a in 0..n {
        for b in 0..n {
            relabeled[perm[a]][perm[b]] = perm[rows[a][b]];
        }
    }
    CayleyTable::new(relabeled).map_err(|e| ExtractionFailure::GroupAxiomFailure(e.to_string()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cube::tests::{raw, z2_cube};
    use crate::groups::{cayley_table, enumerate_abelian_groups};
    use crate::rational::{int, ratio};

    fn group(f: &[usize]) -> CayleyTable {
        cayley_table(&InvariantFactors::new(f.to_vec()).unwrap())
    }

    fn measure(v: &[(i64, i64)]) -> MeasureVector {
        MeasureVector::new(v.iter().map(|&(a, b)| ratio(a, b)).collect()).unwrap()
    }

    #[test]
    fn recovers_z2() {
        match recover(&z2_cube()) {
            RecoveryResult::Recovered {
                table,
                measure: m,
                factors,
            } => {
                assert_eq!(table, group(&[2]));
                assert_eq!(m, measure(&[(3, 4), (1, 4)]));
                assert_eq!(factors.factors(), &[2]);
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn recovers_point_mass_z3() {
        let t = group(&[3]);
        let cube = derive_cube(&t, &MeasureVector::point_mass(3, 0)).unwrap();
        assert_eq!(
            recover(&cube),
            RecoveryResult::Recovered {
                table: t,
                measure: MeasureVector::point_mass(3, 0),
                factors: InvariantFactors::new(vec![3]).unwrap(),
            }
        );
    }

    #[test]
    fn rejects_semilattice_and_non_associative() {
        let (e1, e2) = ([int(1), int(0)], [int(0), int(1)]);
        let semilattice = validate_cube(raw(&[&[&e1, &e1], &[&e1, &e2]])).unwrap();
        assert_eq!(recover(&semilattice).rejection().unwrap().name(), "FailsConditionA");
        let bad = validate_cube(raw(&[&[&e2, &e1], &[&e1, &e1]])).unwrap();
        assert_eq!(recover(&bad).rejection().unwrap().name(), "NotAssociative");
        let skew = validate_cube(raw(&[&[&e1, &e1], &[&e2, &e2]])).unwrap();
        assert_eq!(recover(&skew).rejection().unwrap().name(), "NotCommutative");
    }

    #[test]
    fn raw_input_is_validated() {
        let short = vec![ratio(1, 2), ratio(2, 5)];
        let ok = vec![int(1), int(0)];
        let result = recover_raw(vec![vec![short, ok.clone()], vec![ok.clone(), ok]]);
        assert_eq!(result.rejection().unwrap().name(), "FailsValidation");
    }

    #[test]
    fn degenerate_measures_are_rejected() {
        let z4 = group(&[4]);
        for m in [
            measure(&[(1, 2), (1, 4), (0, 1), (1, 4)]),
            measure(&[(1, 2), (0, 1), (1, 2), (0, 1)]),
        ] {
            let cube = derive_cube(&z4, &m).unwrap();
            assert_eq!(recover(&cube).rejection().unwrap().name(), "FailsConditionA");
        }
    }

    #[test]
    fn tampered_candidate_fails_certification() {
        let result = recover_with_candidate_hook(&z2_cube(), |c| {
            c.measure = measure(&[(1, 4), (3, 4)]);
        });
        match result.rejection() {
            Some(RejectionReason::RoundTripMismatch {
                i: 1,
                j: 1,
                k: 1,
                expected,
                actual,
            }) => {
                assert_eq!(expected, "3/4");
                assert_eq!(actual, "1/4");
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn measure_from_a1() {
        let cube = z2_cube();
        assert_eq!(
            recover_measure_from_a1(&cube, &group(&[2])).unwrap(),
            measure(&[(3, 4), (1, 4)])
        );
        let z4 = group(&[4]);
        let pm = derive_cube(&z4, &MeasureVector::point_mass(4, 0)).unwrap();
        assert_eq!(
            recover_measure_from_a1(&pm, &z4).unwrap(),
            MeasureVector::point_mass(4, 0)
        );
        // the Klein table cannot expand a Z_4 cube
        let m = measure(&[(1, 2), (1, 4), (1, 8), (1, 8)]);
        let cube = derive_cube(&z4, &m).unwrap();
        assert!(matches!(
            recover_measure_from_a1(&cube, &group(&[2, 2])),
            Err(MeasureRecoveryError::InconsistentExpansion { .. })
        ));
        assert!(matches!(
            recover_measure_from_a1(&cube, &group(&[2])),
            Err(MeasureRecoveryError::Dimension(_))
        ));
    }

    #[test]
    fn value_extraction() {
        let cube = z2_cube();
        assert_eq!(extract_group_by_value(&cube, &ratio(3, 4)).unwrap(), group(&[2]));
        assert_eq!(extract_group_by_value(&cube, &ratio(1, 4)).unwrap(), group(&[2]));
        assert_eq!(
            extract_group_by_value(&cube, &ratio(1, 3)),
            Err(ExtractionFailure::ValueAbsent)
        );

        let z3 = derive_cube(&group(&[3]), &measure(&[(1, 2), (1, 4), (1, 4)])).unwrap();
        assert!(matches!(
            extract_group_by_value(&z3, &ratio(1, 4)),
            Err(ExtractionFailure::NotFunctional { count: 2, .. })
        ));
    }

    #[test]
    fn value_extraction_agrees_with_column_matching() {
        for n in 2..=8 {
            for f in enumerate_abelian_groups(n) {
                let t = cayley_table(&f);
                // weights 1, 2, 4, …: distinct, and no signed sum of them vanishes
                let total = (1i64 << n) - 1;
                let m = MeasureVector::new((0..n).map(|k| ratio(1 << k, total)).collect()).unwrap();
                let cube = derive_cube(&t, &m).unwrap();
                let recovered = match recover(&cube) {
                    RecoveryResult::Recovered { factors, .. } => factors,
                    other => panic!("{f}: {other:?}"),
                };
                assert_eq!(recovered, f);
                for v in m.values() {
                    let extracted = extract_group_by_value(&cube, v).unwrap();
                    assert_eq!(extracted.factors(), f);
                }
            }
        }
    }
}
