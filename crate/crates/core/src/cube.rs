//! Structure cubes, probability measures and the regular-representation
//! matrix views of a cube.
//!
//! A cube of order `n` stores the convolution coefficients `a[i][j][k]`:
//! the probability that states `i` and `j` combine to state `k`. Storage
//! is 0-based and dense; every human-facing index is 1-based.

use std::fmt;

use num_traits::{One, Zero};
use serde::Serialize;
use thiserror::Error;

use crate::matrix::RationalMatrix;
use crate::rational::{format_rational, format_vector, is_negative, Rational};

/// 1-based label of a state `e_1, …, e_n`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(transparent)]
pub struct StateIndex(usize);

impl StateIndex {
    /// Checks `1 <= value <= n`.
    pub fn new(value: usize, n: usize) -> Result<Self, CoreError> {
        if value == 0 || value > n {
            return Err(CoreError::IndexOutOfRange { index: value, n });
        }
        Ok(Self(value))
    }

    pub fn from_zero_based(index: usize) -> Self {
        Self(index + 1)
    }

    pub fn get(self) -> usize {
        self.0
    }

    pub fn zero_based(self) -> usize {
        self.0 - 1
    }
}

impl fmt::Display for StateIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CoreError {
    #[error("state index {index} out of range 1..={n}")]
    IndexOutOfRange { index: usize, n: usize },
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("invalid measure: {0}")]
    InvalidMeasure(String),
}

/// One violation found by [`validate_cube`], 1-based indices.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum CubeViolation {
    ShapeMismatch {
        detail: String,
    },
    NegativeEntry {
        i: usize,
        j: usize,
        k: usize,
        #[serde(serialize_with = "crate::formats::serialize_rational")]
        value: Rational,
    },
    ColumnSumNotOne {
        i: usize,
        j: usize,
        #[serde(serialize_with = "crate::formats::serialize_rational")]
        sum: Rational,
    },
}

impl fmt::Display for CubeViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::ShapeMismatch { detail } => write!(f, "shape mismatch: {detail}"),
            Self::NegativeEntry { i, j, k, value } => {
                write!(f, "negative entry a[{i}][{j}][{k}] = {}", format_rational(value))
            }
            Self::ColumnSumNotOne { i, j, sum } => {
                write!(f, "column a[{i}][{j}] sums to {}, not 1", format_rational(sum))
            }
        }
    }
}

/// Every problem found in a raw cube.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub struct ValidationError {
    pub violations: Vec<CubeViolation>,
}

impl fmt::Display for ValidationError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.violations.iter().map(ToString::to_string).collect();
        write!(f, "{}", parts.join("; "))
    }
}

/// Validated `n × n × n` column-stochastic array of structure constants.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct StructureCube {
    n: usize,
    entries: Vec<Rational>,
}

/// Checks shape, nonnegativity and exact unit column sums. All violations
/// are collected rather than stopping at the first.
pub fn validate_cube(raw: Vec<Vec<Vec<Rational>>>) -> Result<StructureCube, ValidationError> {
    let n = raw.len();
    let shape_error = |detail: String| ValidationError {
        violations: vec![CubeViolation::ShapeMismatch { detail }],
    };
    if n == 0 {
        return Err(shape_error("cube has no states".into()));
    }
    for (i, plane) in raw.iter().enumerate() {
        if plane.len() != n {
            return Err(shape_error(format!(
                "a[{}] has {} columns, expected {n}",
                i + 1,
                plane.len()
            )));
        }
        for (j, column) in plane.iter().enumerate() {
            if column.len() != n {
                return Err(shape_error(format!(
                    "a[{}][{}] has {} entries, expected {n}",
                    i + 1,
                    j + 1,
                    column.len()
                )));
            }
        }
    }

    let mut violations = Vec::new();
    for (i, plane) in raw.iter().enumerate() {
        for (j, column) in plane.iter().enumerate() {
            for (k, value) in column.iter().enumerate() {
                if is_negative(value) {
                    violations.push(CubeViolation::NegativeEntry {
                        i: i + 1,
                        j: j + 1,
                        k: k + 1,
                        value: value.clone(),
                    });
                }
            }
            let sum: Rational = column.iter().sum();
            if !sum.is_one() {
                violations.push(CubeViolation::ColumnSumNotOne {
                    i: i + 1,
                    j: j + 1,
                    sum,
                });
            }
        }
    }
    if !violations.is_empty() {
        return Err(ValidationError { violations });
    }
    Ok(StructureCube {
        n,
        entries: raw.into_iter().flatten().flatten().collect(),
    })
}

impl StructureCube {
    pub fn n(&self) -> usize {
        self.n
    }

    /// `a[i][j][k]`, 0-based.
    pub fn get(&self, i: usize, j: usize, k: usize) -> &Rational {
        &self.entries[(i * self.n + j) * self.n + k]
    }

    /// The column `a_{i,j}`: the distribution of `e_i * e_j`, 0-based.
    pub fn column(&self, i: usize, j: usize) -> &[Rational] {
        let start = (i * self.n + j) * self.n;
        &self.entries[start..start + self.n]
    }

    pub fn entries(&self) -> &[Rational] {
        &self.entries
    }

    /// Nested `[i][j][k]` copy, the inverse of [`validate_cube`].
    pub fn to_nested(&self) -> Vec<Vec<Vec<Rational>>> {
        (0..self.n)
            .map(|i| (0..self.n).map(|j| self.column(i, j).to_vec()).collect())
            .collect()
    }

    /// Left regular matrix `A_i`: column `j` is `a_{i,j}`.
    pub fn left_matrix(&self, i: StateIndex) -> Result<RationalMatrix, CoreError> {
        self.check_index(i)?;
        Ok(self.left(i.zero_based()))
    }

    /// Right regular matrix `B_i`: column `j` is `a_{j,i}`.
    pub fn right_matrix(&self, i: StateIndex) -> Result<RationalMatrix, CoreError> {
        self.check_index(i)?;
        Ok(self.right(i.zero_based()))
    }

    pub(crate) fn left(&self, i: usize) -> RationalMatrix {
        let cols: Vec<&[Rational]> = (0..self.n).map(|j| self.column(i, j)).collect();
        RationalMatrix::from_columns(&cols).expect("square slice")
    }

    pub(crate) fn right(&self, i: usize) -> RationalMatrix {
        let cols: Vec<&[Rational]> = (0..self.n).map(|j| self.column(j, i)).collect();
        RationalMatrix::from_columns(&cols).expect("square slice")
    }

    fn check_index(&self, i: StateIndex) -> Result<(), CoreError> {
        StateIndex::new(i.get(), self.n).map(|_| ())
    }

    /// Bilinear extension of the convolution: `Σ_{i,j} x_i y_j a_{i,j}`.
    pub fn convolve(&self, x: &MeasureVector, y: &MeasureVector) -> Result<MeasureVector, CoreError> {
        for m in [x, y] {
            if m.n() != self.n {
                return Err(CoreError::DimensionMismatch {
                    expected: self.n,
                    found: m.n(),
                });
            }
        }
        let mut out = vec![Rational::zero(); self.n];
        for (i, xi) in x.values().iter().enumerate() {
            if xi.is_zero() {
                continue;
            }
            for (j, yj) in y.values().iter().enumerate() {
                if yj.is_zero() {
                    continue;
                }
                let w = xi * yj;
                for (acc, a) in out.iter_mut().zip(self.column(i, j)) {
                    if !a.is_zero() {
                        *acc += &w * a;
                    }
                }
            }
        }
        Ok(MeasureVector { values: out })
    }

    /// Applies a state relabeling `σ` to all three axes:
    /// `b[σ(i)][σ(j)][σ(k)] = a[i][j][k]`. `perm` is 0-based.
    pub fn relabel(&self, perm: &[usize]) -> Self {
        let n = self.n;
        let mut entries = vec![Rational::zero(); n * n * n];
        for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    entries[(perm[i] * n + perm[j]) * n + perm[k]] = self.get(i, j, k).clone();
                }
            }
        }
        Self { n, entries }
    }
}

impl fmt::Debug for StructureCube {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "StructureCube(n = {})", self.n)?;
        for i in 0..self.n {
            for j in 0..self.n {
                writeln!(f, "  a[{}][{}] = {}", i + 1, j + 1, format_vector(self.column(i, j)))?;
            }
        }
        Ok(())
    }
}

/// Convenience wrapper for [`StructureCube::convolve`].
pub fn convolve_measures(
    cube: &StructureCube,
    x: &MeasureVector,
    y: &MeasureVector,
) -> Result<MeasureVector, CoreError> {
    cube.convolve(x, y)
}

/// Nonnegative rational vector with exact unit sum.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct MeasureVector {
    values: Vec<Rational>,
}

impl MeasureVector {
    pub fn new(values: Vec<Rational>) -> Result<Self, CoreError> {
        if values.is_empty() {
            return Err(CoreError::InvalidMeasure("empty measure".into()));
        }
        if let Some(k) = values.iter().position(is_negative) {
            return Err(CoreError::InvalidMeasure(format!(
                "m[{}] = {} is negative",
                k + 1,
                format_rational(&values[k])
            )));
        }
        let total: Rational = values.iter().sum();
        if !total.is_one() {
            return Err(CoreError::InvalidMeasure(format!(
                "values sum to {}, not 1",
                format_rational(&total)
            )));
        }
        Ok(Self { values })
    }

    /// Point mass at a 0-based state.
    pub fn point_mass(n: usize, at: usize) -> Self {
        let mut values = vec![Rational::zero(); n];
        values[at] = Rational::one();
        Self { values }
    }

    /// Uniform measure over the given 0-based states.
    pub fn uniform_on(n: usize, support: &[usize]) -> Result<Self, CoreError> {
        if support.is_empty() {
            return Err(CoreError::InvalidMeasure("empty support".into()));
        }
        let weight = Rational::new(1.into(), support.len().into());
        let mut values = vec![Rational::zero(); n];
        for &s in support {
            if s >= n {
                return Err(CoreError::IndexOutOfRange { index: s + 1, n });
            }
            values[s] = weight.clone();
        }
        Self::new(values)
    }

    pub fn n(&self) -> usize {
        self.values.len()
    }

    pub fn values(&self) -> &[Rational] {
        &self.values
    }

    pub fn into_values(self) -> Vec<Rational> {
        self.values
    }
}

impl fmt::Debug for MeasureVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "MeasureVector{}", format_vector(&self.values))
    }
}

impl fmt::Display for MeasureVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", format_vector(&self.values))
    }
}
