//! Exact property checks on structure cubes: commutativity, associativity
//! (two independent routes), condition (A), and the structural identities
//! every cube built from a group satisfies.
//!
//! The structural identities are diagnostics and run on any cube. Witness
//! ordering is lexicographic in the reported indices.

use std::collections::BTreeSet;
use std::fmt;

use num_traits::Zero;
use serde::Serialize;

use crate::cube::StructureCube;
use crate::matrix::RationalMatrix;
use crate::rational::{format_rational, format_vector, Rational};
use crate::report::{Property, PropertyReport, ReportBuilder, Witness, DEFAULT_WITNESS_CAP};
use crate::scaled::ScaledCube;

/// Distinct-column count and per-matrix ranks of a cube. `holds` is true iff
/// there are exactly `n` distinct columns and every `A_i`, `B_i` is invertible.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ConditionAReport {
    pub distinct_columns: usize,
    pub left_ranks: Vec<usize>,
    pub right_ranks: Vec<usize>,
    pub holds: bool,
}

impl fmt::Display for ConditionAReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let n = self.left_ranks.len();
        write!(
            f,
            "condition-a: {} (distinct columns {} of expected {n})",
            if self.holds { "holds" } else { "FAILS" },
            self.distinct_columns
        )?;
        for (side, ranks) in [("A", &self.left_ranks), ("B", &self.right_ranks)] {
            for (i, &r) in ranks.iter().enumerate() {
                if r != n {
                    write!(f, "\n    rank({side}_{}) = {r} < {n}", i + 1)?;
                }
            }
        }
        Ok(())
    }
}

/// Property checks with a configurable witness cap.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Checker {
    pub witness_cap: usize,
}

impl Default for Checker {
    fn default() -> Self {
        Self {
            witness_cap: DEFAULT_WITNESS_CAP,
        }
    }
}

fn sum_columns<'a>(n: usize, terms: impl Iterator<Item = (&'a Rational, &'a [Rational])>) -> Vec<Rational> {
    let mut out = vec![Rational::zero(); n];
    for (w, col) in terms {
        if w.is_zero() {
            continue;
        }
        for (acc, v) in out.iter_mut().zip(col) {
            if !v.is_zero() {
                *acc += w * v;
            }
        }
    }
    out
}

fn sorted(values: &[Rational]) -> Vec<Rational> {
    let mut v = values.to_vec();
    v.sort();
    v
}

impl Checker {
    pub fn new(witness_cap: usize) -> Self {
        Self { witness_cap }
    }

    fn builder(&self, property: Property) -> ReportBuilder {
        ReportBuilder::new(property, self.witness_cap)
    }

    pub fn is_commutative(&self, cube: &StructureCube) -> PropertyReport {
        let n = cube.n();
        let mut report = self.builder(Property::Commutativity);
        for i in 0..n {
            for j in i + 1..n {
                let (ij, ji) = (cube.column(i, j), cube.column(j, i));
                if ij != ji {
                    report.push_with(|| Witness::new(vec![i + 1, j + 1], format_vector(ji), format_vector(ij)));
                }
            }
        }
        report.finish()
    }

    /// Compares `(e_i*e_j)*e_m = Σ_k a_{i,j}(k) a_{k,m}` with
    /// `e_i*(e_j*e_m) = Σ_p a_{j,m}(p) a_{i,p}` for every triple.
    pub fn is_associative_bruteforce(&self, cube: &StructureCube) -> PropertyReport {
        let n = cube.n();
        let mut report = self.builder(Property::AssociativityBruteforce);
        ScaledCube::new(cube).triple_mismatches(|i, j, m| {
            report.push_with(|| {
                let left = sum_columns(
                    n,
                    cube.column(i, j)
                        .iter()
                        .enumerate()
                        .map(|(k, w)| (w, cube.column(k, m))),
                );
                let right = sum_columns(
                    n,
                    cube.column(j, m)
                        .iter()
                        .enumerate()
                        .map(|(p, w)| (w, cube.column(i, p))),
                );
                Witness::new(vec![i + 1, j + 1, m + 1], format_vector(&left), format_vector(&right))
            })
        });
        report.finish()
    }

    /// Checks `A_i A_j = Σ_k a_{i,j}(k) A_k` for every pair; the witness
    /// carries the first differing matrix entry.
    pub fn is_associative_matrix(&self, cube: &StructureCube) -> PropertyReport {
        let mut report = self.builder(Property::AssociativityMatrix);
        ScaledCube::new(cube).pair_mismatches(|i, j, r, c| {
            report.push_with(|| {
                let product = cube.left(i).mul(&cube.left(j)).expect("square matrices");
                let mut combination = RationalMatrix::zeros(cube.n(), cube.n());
                for (k, w) in cube.column(i, j).iter().enumerate() {
                    combination.add_scaled(w, &cube.left(k)).expect("square matrices");
                }
                Witness::new(
                    vec![i + 1, j + 1],
                    format!("[{}][{}] = {}", r + 1, c + 1, format_rational(&combination[(r, c)])),
                    format!("[{}][{}] = {}", r + 1, c + 1, format_rational(&product[(r, c)])),
                )
            })
        });
        report.finish()
    }

    pub fn satisfies_condition_a(&self, cube: &StructureCube) -> ConditionAReport {
        let n = cube.n();
        let distinct: BTreeSet<&[Rational]> = (0..n)
            .flat_map(|i| (0..n).map(move |j| (i, j)))
            .map(|(i, j)| cube.column(i, j))
            .collect();
        let left_ranks: Vec<usize> = (0..n).map(|i| cube.left(i).rank()).collect();
        let right_ranks: Vec<usize> = (0..n).map(|i| cube.right(i).rank()).collect();
        let holds = distinct.len() == n && left_ranks.iter().all(|&r| r == n) && right_ranks.iter().all(|&r| r == n);
        ConditionAReport {
            distinct_columns: distinct.len(),
            left_ranks,
            right_ranks,
            holds,
        }
    }

    /// The four structural reports, in order: column multisets, constant
    /// diagonals, row/column multisets, square expansion.
    pub fn check_corollaries(&self, cube: &StructureCube) -> Vec<PropertyReport> {
        vec![
            self.column_multisets(cube),
            self.constant_diagonals(cube),
            self.row_column_multisets(cube),
            self.square_expansion(cube),
        ]
    }

    pub fn column_multisets(&self, cube: &StructureCube) -> PropertyReport {
        let n = cube.n();
        let mut report = self.builder(Property::ColumnMultisets);
        let reference = sorted(cube.column(0, 0));
        for i in 0..n {
            for j in 0..n {
                let here = sorted(cube.column(i, j));
                if here != reference {
                    report.push_with(|| {
                        Witness::new(vec![i + 1, j + 1], format_vector(&reference), format_vector(&here))
                    });
                }
            }
        }
        let scalars: BTreeSet<&Rational> = cube.entries().iter().collect();
        if scalars.len() > n {
            report.push_with(|| {
                Witness::new(
                    vec![],
                    format!("at most {n} distinct scalars"),
                    format!("{} distinct scalars", scalars.len()),
                )
            });
        }
        report.finish()
    }

    pub fn constant_diagonals(&self, cube: &StructureCube) -> PropertyReport {
        let n = cube.n();
        let mut report = self.builder(Property::ConstantDiagonals);
        for i in 0..n {
            let first = cube.get(i, 0, 0);
            for j in 1..n {
                let d = cube.get(i, j, j);
                if d != first {
                    report.push_with(|| Witness::new(vec![i + 1, j + 1], format_rational(first), format_rational(d)));
                }
            }
        }
        report.finish()
    }

    /// In each `A_i`, every row and every column has the multiset of column 1.
    pub fn row_column_multisets(&self, cube: &StructureCube) -> PropertyReport {
        let n = cube.n();
        let mut report = self.builder(Property::RowColumnMultisets);
        for i in 0..n {
            let a = cube.left(i);
            let reference = sorted(&a.column(0));
            for c in 1..n {
                let col = sorted(&a.column(c));
                if col != reference {
                    report.push_with(|| {
                        Witness::new(
                            vec![i + 1, c + 1],
                            format_vector(&reference),
                            format!("column {}", format_vector(&col)),
                        )
                    });
                }
            }
            for r in 0..n {
                let row = sorted(a.row(r));
                if row != reference {
                    report.push_with(|| {
                        Witness::new(
                            vec![i + 1, r + 1],
                            format_vector(&reference),
                            format!("row {}", format_vector(&row)),
                        )
                    });
                }
            }
        }
        report.finish()
    }

    /// `Σ_i a_{k,j}(i) a_{k,i} = Σ_i a_{k,k}(i) a_{i,j}` for every `(k, j)`:
    /// the `j`-th column of `A_k A_k` expanded two ways.
    pub fn square_expansion(&self, cube: &StructureCube) -> PropertyReport {
        let n = cube.n();
        let mut report = self.builder(Property::SquareExpansion);
        ScaledCube::new(cube).square_mismatches(|k, j| {
            report.push_with(|| {
                let kk = cube.column(k, k);
                let left = sum_columns(
                    n,
                    cube.column(k, j)
                        .iter()
                        .enumerate()
                        .map(|(i, w)| (w, cube.column(k, i))),
                );
                let right = sum_columns(n, kk.iter().enumerate().map(|(i, w)| (w, cube.column(i, j))));
                Witness::new(vec![k + 1, j + 1], format_vector(&left), format_vector(&right))
            })
        });
        report.finish()
    }
}

pub fn is_commutative(cube: &StructureCube) -> PropertyReport {
    Checker::default().is_commutative(cube)
}

pub fn is_associative_bruteforce(cube: &StructureCube) -> PropertyReport {
    Checker::default().is_associative_bruteforce(cube)
}

pub fn is_associative_matrix(cube: &StructureCube) -> PropertyReport {
    Checker::default().is_associative_matrix(cube)
}

pub fn satisfies_condition_a(cube: &StructureCube) -> ConditionAReport {
    Checker::default().satisfies_condition_a(cube)
}

pub fn check_corollaries(cube: &StructureCube) -> Vec<PropertyReport> {
    Checker::default().check_corollaries(cube)
}
