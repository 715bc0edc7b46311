//! Finite abelian groups: enumeration by invariant factors, explicit Cayley
//! tables, regular permutation representations, axiom verification and
//! isomorphism-class identification.
//!
//! Tables are stored 0-based with the identity at state 0 (reported as
//! state 1). A group `Z_{d_1} × … × Z_{d_m}` is laid out in mixed radix
//! with the first factor as the least significant digit.

use std::collections::BTreeMap;
use std::fmt;

use num_traits::One;
use serde::Serialize;
use thiserror::Error;

use crate::cube::StateIndex;
use crate::matrix::RationalMatrix;
use crate::rational::Rational;
use crate::report::{Property, PropertyReport, ReportBuilder, Witness, DEFAULT_WITNESS_CAP};

/// Default upper bound on group orders handled by the CLI and harnesses.
pub const DEFAULT_ORDER_CAP: usize = 256;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GroupError {
    #[error("invalid invariant factors {0:?}: each must be >= 2 and divide the next")]
    InvalidFactors(Vec<usize>),
    #[error("invalid Cayley table: {0}")]
    InvalidTable(String),
    #[error("table is not a group: {0}")]
    NotAGroup(String),
    #[error("group is not abelian: {0}")]
    NotAbelian(String),
    #[error("order {n} exceeds the cap {cap}")]
    OrderTooLarge { n: usize, cap: usize },
    #[error("order must be at least 1")]
    ZeroOrder,
}

pub fn check_order(n: usize, cap: usize) -> Result<(), GroupError> {
    match n {
        0 => Err(GroupError::ZeroOrder),
        n if n > cap => Err(GroupError::OrderTooLarge { n, cap }),
        _ => Ok(()),
    }
}

/// `d_1 | d_2 | … | d_m`, each `d_t >= 2`; the empty list is the trivial group.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(transparent)]
pub struct InvariantFactors(Vec<usize>);

impl InvariantFactors {
    pub fn new(factors: Vec<usize>) -> Result<Self, GroupError> {
        let ok = factors.iter().all(|&d| d >= 2) && factors.windows(2).all(|w| w[1] % w[0] == 0);
        if !ok {
            return Err(GroupError::InvalidFactors(factors));
        }
        Ok(Self(factors))
    }

    pub fn factors(&self) -> &[usize] {
        &self.0
    }

    pub fn order(&self) -> usize {
        self.0.iter().product()
    }
}

impl fmt::Display for InvariantFactors {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(ToString::to_string).collect();
        write!(f, "[{}]", parts.join(","))
    }
}

fn factorize(mut n: usize) -> Vec<(usize, u32)> {
    let mut out = Vec::new();
    let mut p = 2;
    while p * p <= n {
        let mut e = 0;
        while n.is_multiple_of(p) {
            n /= p;
            e += 1;
        }
        if e > 0 {
            out.push((p, e));
        }
        p += 1;
    }
    if n > 1 {
        out.push((n, 1));
    }
    out
}

/// Partitions of `n` as non-increasing part lists.
fn partitions(n: u32) -> Vec<Vec<u32>> {
    fn go(remaining: u32, max: u32, current: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if remaining == 0 {
            out.push(current.clone());
            return;
        }
        for part in (1..=remaining.min(max)).rev() {
            current.push(part);
            go(remaining - part, part, current, out);
            current.pop();
        }
    }
    let mut out = Vec::new();
    go(n, n, &mut Vec::new(), &mut out);
    out
}

/// One invariant-factor list per isomorphism class of abelian groups of
/// order `n`, sorted in descending lexicographic order (`[8]`, `[2,4]`,
/// `[2,2,2]`). Returns an empty list for `n = 0`.
pub fn enumerate_abelian_groups(n: usize) -> Vec<InvariantFactors> {
    if n == 0 {
        return Vec::new();
    }
    let primes = factorize(n);
    let mut combos: Vec<Vec<usize>> = vec![Vec::new()];
    for &(p, e) in &primes {
        let mut next = Vec::new();
        for combo in &combos {
            for part in partitions(e) {
                // largest prime power goes to the largest invariant factor
                let width = combo.len().max(part.len());
                let mut merged = vec![1usize; width];
                for (t, &d) in combo.iter().rev().enumerate() {
                    merged[width - 1 - t] = d;
                }
                for (t, &k) in part.iter().enumerate() {
                    merged[width - 1 - t] *= p.pow(k);
                }
                next.push(merged);
            }
        }
        combos = next;
    }
    let mut out: Vec<InvariantFactors> = combos
        .into_iter()
        .map(|c| InvariantFactors::new(c).expect("divisibility chain by construction"))
        .collect();
    out.sort_by(|a, b| b.cmp(a));
    out
}

/// Multiplication table of a finite abelian group with identity at state 0.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct CayleyTable {
    n: usize,
    table: Vec<usize>,
}

impl CayleyTable {
    /// Validates a 0-based table: Latin square, associative, commutative,
    /// identity at state 0.
    pub fn new(rows: Vec<Vec<usize>>) -> Result<Self, GroupError> {
        let report = verify_group_axioms(&rows);
        if !report.holds() {
            return Err(GroupError::InvalidTable(report.summary()));
        }
        if report.identity != Some(StateIndex::from_zero_based(0)) {
            return Err(GroupError::InvalidTable(format!(
                "identity is state {}, expected state 1",
                report.identity.map_or(0, StateIndex::get)
            )));
        }
        let n = rows.len();
        Ok(Self {
            n,
            table: rows.into_iter().flatten().collect(),
        })
    }

    /// Same as [`CayleyTable::new`] for 1-based labels.
    pub fn from_one_based(rows: &[Vec<usize>]) -> Result<Self, GroupError> {
        let zero: Option<Vec<Vec<usize>>> = rows
            .iter()
            .map(|r| r.iter().map(|&v| v.checked_sub(1)).collect())
            .collect();
        let zero = zero.ok_or_else(|| GroupError::InvalidTable("state label 0".into()))?;
        Self::new(zero)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Product of 0-based states.
    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.table[a * self.n + b]
    }

    pub fn inverse(&self, a: usize) -> usize {
        (0..self.n).find(|&b| self.mul(a, b) == 0).expect("group has inverses")
    }

    pub fn order_of(&self, a: usize) -> usize {
        element_order(|x, y| self.mul(x, y), 0, a, self.n).expect("group element has finite order")
    }

    /// States of the cyclic subgroup generated by `a`, sorted.
    pub fn cyclic_subgroup(&self, a: usize) -> Vec<usize> {
        let mut out = vec![0];
        let mut x = a;
        while x != 0 {
            out.push(x);
            x = self.mul(x, a);
        }
        out.sort_unstable();
        out
    }

    pub fn rows(&self) -> Vec<Vec<usize>> {
        self.table.chunks(self.n).map(<[usize]>::to_vec).collect()
    }

    pub fn rows_one_based(&self) -> Vec<Vec<usize>> {
        self.table
            .chunks(self.n)
            .map(|r| r.iter().map(|v| v + 1).collect())
            .collect()
    }

    /// Relabels by a 0-based permutation that must fix state 0.
    pub fn relabel(&self, perm: &[usize]) -> Result<Self, GroupError> {
        let n = self.n;
        let mut rows = vec![vec![0; n]; n];
        for a in 0..n {
            for b in 0..n {
                rows[perm[a]][perm[b]] = perm[self.mul(a, b)];
            }
        }
        Self::new(rows)
    }

    pub fn factors(&self) -> InvariantFactors {
        canonical_form(&self.rows()).expect("validated abelian group")
    }
}

impl fmt::Debug for CayleyTable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "CayleyTable{:?}", self.rows_one_based())
    }
}

/// Table of `Z_{d_1} × … × Z_{d_m}` in mixed radix, componentwise addition.
pub fn cayley_table(factors: &InvariantFactors) -> CayleyTable {
    let radices = factors.factors();
    let n = factors.order();
    let digits = |mut x: usize| -> Vec<usize> {
        radices
            .iter()
            .map(|&d| {
                let r = x % d;
                x /= d;
                r
            })
            .collect()
    };
    let encode = |ds: &[usize]| -> usize {
        ds.iter()
            .zip(radices)
            .rev()
            .fold(0, |acc, (&digit, &d)| acc * d + digit)
    };
    let mut table = Vec::with_capacity(n * n);
    for a in 0..n {
        let da = digits(a);
        for b in 0..n {
            let sum: Vec<usize> = digits(b)
                .iter()
                .zip(&da)
                .zip(radices)
                .map(|((x, y), d)| (x + y) % d)
                .collect();
            table.push(encode(&sum));
        }
    }
    CayleyTable { n, table }
}

/// Regular representation: `G_i` maps basis vector `q` to `i·q`, so
/// `G_i[p][q] = 1` iff `table[i][q] = p`.
#[derive(Clone, PartialEq, Eq)]
pub struct PermutationRep {
    n: usize,
    images: Vec<usize>,
}

pub fn regular_representation(table: &CayleyTable) -> PermutationRep {
    PermutationRep {
        n: table.n,
        images: table.table.clone(),
    }
}

impl PermutationRep {
    pub fn n(&self) -> usize {
        self.n
    }

    /// Image of basis vector `q` under `G_i` (0-based).
    pub fn image(&self, i: usize, q: usize) -> usize {
        self.images[i * self.n + q]
    }

    pub fn matrix(&self, i: usize) -> RationalMatrix {
        let mut m = RationalMatrix::zeros(self.n, self.n);
        for q in 0..self.n {
            m[(self.image(i, q), q)] = Rational::one();
        }
        m
    }

    pub fn matrices(&self) -> Vec<RationalMatrix> {
        (0..self.n).map(|i| self.matrix(i)).collect()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum GroupAxiom {
    /// Every row and column is a permutation of the states (solvability).
    LatinSquare,
    Associativity,
    Commutativity,
}

impl fmt::Display for GroupAxiom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Self::LatinSquare => "latin-square",
            Self::Associativity => "associativity",
            Self::Commutativity => "commutativity",
        })
    }
}

/// Result of [`verify_group_axioms`]: the first failing axiom (if any), its
/// witnesses, and the located identity element.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct GroupAxiomReport {
    #[serde(flatten)]
    pub report: PropertyReport,
    pub failed_axiom: Option<GroupAxiom>,
    pub identity: Option<StateIndex>,
}

impl GroupAxiomReport {
    pub fn holds(&self) -> bool {
        self.report.holds
    }

    pub fn summary(&self) -> String {
        match self.failed_axiom {
            None => "group axioms hold".into(),
            Some(axiom) => {
                let first = self
                    .report
                    .witnesses
                    .first()
                    .map(|w| format!(" at {w}"))
                    .unwrap_or_default();
                format!("{axiom} fails{first}")
            }
        }
    }
}

fn element_order(mul: impl Fn(usize, usize) -> usize, e: usize, a: usize, n: usize) -> Option<usize> {
    let mut x = a;
    for k in 1..=n {
        if x == e {
            return Some(k);
        }
        x = mul(x, a);
    }
    None
}

/// Checks a 0-based `n × n` table for the Latin-square property,
/// associativity and commutativity, in that order, reporting witnesses for
/// the first axiom that fails. A Latin square that is associative is a
/// group, so its identity is always located.
pub fn verify_group_axioms(rows: &[Vec<usize>]) -> GroupAxiomReport {
    verify_group_axioms_with_cap(rows, DEFAULT_WITNESS_CAP)
}

pub fn verify_group_axioms_with_cap(rows: &[Vec<usize>], cap: usize) -> GroupAxiomReport {
    let n = rows.len();
    let identity = find_identity(rows);
    let done = |builder: ReportBuilder, axiom: Option<GroupAxiom>| {
        let report = builder.finish();
        GroupAxiomReport {
            failed_axiom: if report.holds { None } else { axiom },
            report,
            identity,
        }
    };

    let mut latin = ReportBuilder::new(Property::GroupAxioms, cap);
    if n == 0 {
        latin.push_with(|| Witness::new(vec![], "at least one state", "empty table"));
        return done(latin, Some(GroupAxiom::LatinSquare));
    }
    for (i, row) in rows.iter().enumerate() {
        if row.len() != n {
            latin.push_with(|| Witness::new(vec![i + 1], format!("{n} entries"), format!("{} entries", row.len())));
        }
    }
    if latin.has_violations() {
        return done(latin, Some(GroupAxiom::LatinSquare));
    }
    for i in 0..n {
        let mut seen_row = vec![None; n];
        let mut seen_col = vec![None; n];
        for j in 0..n {
            for (seen, v, line, kind) in [
                (&mut seen_row, rows[i][j], (i, j), "row"),
                (&mut seen_col, rows[j][i], (j, i), "column"),
            ] {
                if v >= n {
                    if kind == "row" {
                        latin.push_with(|| {
                            Witness::new(
                                vec![line.0 + 1, line.1 + 1],
                                format!("a state in 1..={n}"),
                                (v + 1).to_string(),
                            )
                        });
                    }
                    continue;
                }
                if let Some(first) = seen[v] {
                    latin.push_with(|| {
                        Witness::new(
                            vec![line.0 + 1, line.1 + 1],
                            format!("{kind} {} without repeats", i + 1),
                            format!("{} repeats (first at position {})", v + 1, first + 1),
                        )
                    });
                } else {
                    seen[v] = Some(j);
                }
            }
        }
    }
    if latin.has_violations() {
        return done(latin, Some(GroupAxiom::LatinSquare));
    }

    let mut assoc = ReportBuilder::new(Property::GroupAxioms, cap);
    for i in 0..n {
        for j in 0..n {
            let ij = rows[i][j];
            for k in 0..n {
                let left = rows[ij][k];
                let right = rows[i][rows[j][k]];
                if left != right {
                    assoc.push_with(|| {
                        Witness::new(
                            vec![i + 1, j + 1, k + 1],
                            (left + 1).to_string(),
                            (right + 1).to_string(),
                        )
                    });
                }
            }
        }
    }
    if assoc.has_violations() {
        return done(assoc, Some(GroupAxiom::Associativity));
    }

    let mut comm = ReportBuilder::new(Property::GroupAxioms, cap);
    for i in 0..n {
        for j in i + 1..n {
            if rows[i][j] != rows[j][i] {
                comm.push_with(|| {
                    Witness::new(
                        vec![i + 1, j + 1],
                        (rows[j][i] + 1).to_string(),
                        (rows[i][j] + 1).to_string(),
                    )
                });
            }
        }
    }
    done(comm, Some(GroupAxiom::Commutativity))
}

/// Two-sided identity of a square table, if one exists.
pub fn find_identity(rows: &[Vec<usize>]) -> Option<StateIndex> {
    let n = rows.len();
    (0..n)
        .find(|&e| {
            rows[e].len() == n && (0..n).all(|j| rows[e][j] == j && rows.get(j).and_then(|r| r.get(e)) == Some(&j))
        })
        .map(StateIndex::from_zero_based)
}

fn order_profile(mul: impl Fn(usize, usize) -> usize, e: usize, n: usize) -> Option<Vec<usize>> {
    let mut orders: Vec<usize> = (0..n).map(|a| element_order(&mul, e, a, n)).collect::<Option<_>>()?;
    orders.sort_unstable();
    Some(orders)
}

/// Isomorphism class of an abelian group table (0-based, identity anywhere),
/// found by matching the multiset of element orders against the enumerated
/// candidates of the same order.
pub fn canonical_form(rows: &[Vec<usize>]) -> Result<InvariantFactors, GroupError> {
    let report = verify_group_axioms(rows);
    match report.failed_axiom {
        None => {}
        Some(GroupAxiom::Commutativity) => return Err(GroupError::NotAbelian(report.summary())),
        Some(_) => return Err(GroupError::NotAGroup(report.summary())),
    }
    let n = rows.len();
    let e = report.identity.expect("groups have an identity").zero_based();
    let profile = order_profile(|a, b| rows[a][b], e, n).expect("finite group");
    let by_profile: BTreeMap<Vec<usize>, InvariantFactors> = enumerate_abelian_groups(n)
        .into_iter()
        .map(|f| {
            let t = cayley_table(&f);
            (order_profile(|a, b| t.mul(a, b), 0, n).expect("finite group"), f)
        })
        .collect();
    by_profile
        .get(&profile)
        .cloned()
        .ok_or_else(|| GroupError::NotAGroup("no abelian group matches the element orders".into()))
}
