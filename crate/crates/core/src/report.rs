//! Property reports shared by the axiom checks and the group verifier.

use std::fmt;

use serde::Serialize;

/// Default number of witnesses kept per report.
pub const DEFAULT_WITNESS_CAP: usize = 16;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Property {
    Commutativity,
    /// Triple-by-triple comparison of `(e_i*e_j)*e_m` and `e_i*(e_j*e_m)`.
    AssociativityBruteforce,
    /// `A_i A_j = Σ_k a_{i,j}(k) A_k` for all pairs.
    AssociativityMatrix,
    /// Every column is a rearrangement of `a_{1,1}`, and the cube holds at
    /// most `n` distinct scalars.
    ColumnMultisets,
    /// Each `A_i` has a constant diagonal.
    ConstantDiagonals,
    /// Rows of each `A_i` are rearrangements of its columns.
    RowColumnMultisets,
    /// Column `j` of `A_k A_k` equals `Σ_i a_{k,k}(i) a_{i,j}`.
    SquareExpansion,
    GroupAxioms,
}

impl Property {
    pub fn name(self) -> &'static str {
        match self {
            Self::Commutativity => "commutativity",
            Self::AssociativityBruteforce => "associativity-bruteforce",
            Self::AssociativityMatrix => "associativity-matrix",
            Self::ColumnMultisets => "column-multisets",
            Self::ConstantDiagonals => "constant-diagonals",
            Self::RowColumnMultisets => "row-column-multisets",
            Self::SquareExpansion => "square-expansion",
            Self::GroupAxioms => "group-axioms",
        }
    }
}

impl fmt::Display for Property {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// A violating index tuple (1-based) with the expected and observed values
/// rendered canonically.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Witness {
    pub indices: Vec<usize>,
    pub expected: String,
    pub actual: String,
}

impl Witness {
    pub fn new(indices: Vec<usize>, expected: impl Into<String>, actual: impl Into<String>) -> Self {
        Self {
            indices,
            expected: expected.into(),
            actual: actual.into(),
        }
    }
}

impl fmt::Display for Witness {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if !self.indices.is_empty() {
            let idx: Vec<String> = self.indices.iter().map(ToString::to_string).collect();
            write!(f, "({}): ", idx.join(", "))?;
        }
        write!(f, "expected {}, got {}", self.expected, self.actual)
    }
}

/// Outcome of one property check. `holds` is true exactly when no witness
/// was found; `violations` counts all of them even past the witness cap.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PropertyReport {
    pub property: Property,
    pub holds: bool,
    pub violations: usize,
    pub witnesses: Vec<Witness>,
}

impl fmt::Display for PropertyReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.holds {
            return write!(f, "{}: holds", self.property);
        }
        write!(f, "{}: FAILS ({} violation(s))", self.property, self.violations)?;
        for w in &self.witnesses {
            write!(f, "\n    {w}")?;
        }
        if self.witnesses.len() < self.violations {
            write!(f, "\n    ... {} more", self.violations - self.witnesses.len())?;
        }
        Ok(())
    }
}

pub(crate) struct ReportBuilder {
    property: Property,
    cap: usize,
    violations: usize,
    witnesses: Vec<Witness>,
}

impl ReportBuilder {
    pub(crate) fn new(property: Property, cap: usize) -> Self {
        Self {
            property,
            cap: cap.max(1),
            violations: 0,
            witnesses: Vec::new(),
        }
    }

    /// Records a violation; the witness closure only runs while under the cap.
    pub(crate) fn push_with(&mut self, witness: impl FnOnce() -> Witness) {
        self.violations += 1;
        if self.witnesses.len() < self.cap {
            self.witnesses.push(witness());
        }
    }

    pub(crate) fn has_violations(&self) -> bool {
        self.violations > 0
    }

    pub(crate) fn finish(self) -> PropertyReport {
        PropertyReport {
            property: self.property,
            holds: self.violations == 0,
            violations: self.violations,
            witnesses: self.witnesses,
        }
    }
}
