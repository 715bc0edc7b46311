//! Building the semihypergroup whose states are the translates `m·g_i` of a
//! probability measure `m` on an abelian group.
//!
//! Everything is driven by the mixture matrix `M = Σ_k m_k G_k`: its column
//! `j` is the translate `m·g_j`, and the cube's left matrices are
//! `A_i = G_i M`. Condition (A) on the derived cube holds exactly when the
//! columns of `M` are distinct and `M` is invertible.

use std::fmt;

use num_traits::Zero;
use serde::Serialize;

use crate::cube::{validate_cube, CoreError, MeasureVector, StateIndex, StructureCube};
use crate::groups::CayleyTable;
use crate::matrix::RationalMatrix;
use crate::rational::{format_vector, Rational};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MixtureMatrix {
    pub matrix: RationalMatrix,
    pub table: CayleyTable,
    pub measure: MeasureVector,
}

impl MixtureMatrix {
    /// The translate `m·g_j` (column `j`, 0-based).
    pub fn translate(&self, j: usize) -> Vec<Rational> {
        self.matrix.column(j)
    }
}

fn check_dims(table: &CayleyTable, m: &MeasureVector) -> Result<(), CoreError> {
    if table.n() != m.n() {
        return Err(CoreError::DimensionMismatch {
            expected: table.n(),
            found: m.n(),
        });
    }
    Ok(())
}

/// `M = Σ_k m_k G_k`, so `M[p][q] = m_k` summed over `k` with `k·q = p`.
pub fn mixture_matrix(table: &CayleyTable, m: &MeasureVector) -> Result<MixtureMatrix, CoreError> {
    check_dims(table, m)?;
    let n = table.n();
    let mut matrix = RationalMatrix::zeros(n, n);
    for (k, mk) in m.values().iter().enumerate() {
        if mk.is_zero() {
            continue;
        }
        for q in 0..n {
            matrix[(table.mul(k, q), q)] += mk;
        }
    }
    Ok(MixtureMatrix {
        matrix,
        table: table.clone(),
        measure: m.clone(),
    })
}

/// Cube of `{e_i = m·g_i}`: `a[i][j][k] = m(g_k · (g_i g_j)^{-1})`, i.e. the
/// column `a_{i,j}` is the translate `m·(g_i g_j)`.
pub fn derive_cube(table: &CayleyTable, m: &MeasureVector) -> Result<StructureCube, CoreError> {
    check_dims(table, m)?;
    let n = table.n();
    let mut raw = vec![vec![vec![Rational::zero(); n]; n]; n];
    for (i, plane) in raw.iter_mut().enumerate() {
        for (j, column) in plane.iter_mut().enumerate() {
            let s = table.mul(i, j);
            for (p, mp) in m.values().iter().enumerate() {
                column[table.mul(p, s)] = mp.clone();
            }
        }
    }
    Ok(validate_cube(raw).expect("translates of a measure are column-stochastic"))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum DegeneracyVerdict {
    NonDegenerate,
    /// `m·h = m` for a non-identity `h`: two columns of `M` coincide.
    RepeatedTranslates {
        witness: StateIndex,
    },
    /// Columns of `M` are distinct but linearly dependent; `M · kernel = 0`.
    SingularMixture {
        #[serde(serialize_with = "crate::formats::serialize_rationals")]
        kernel: Vec<Rational>,
    },
}

impl DegeneracyVerdict {
    pub fn is_degenerate(&self) -> bool {
        !matches!(self, Self::NonDegenerate)
    }

    pub fn name(&self) -> &'static str {
        match self {
            Self::NonDegenerate => "NonDegenerate",
            Self::RepeatedTranslates { .. } => "RepeatedTranslates",
            Self::SingularMixture { .. } => "SingularMixture",
        }
    }
}

impl fmt::Display for DegeneracyVerdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::NonDegenerate => write!(f, "NonDegenerate"),
            Self::RepeatedTranslates { witness } => {
                write!(f, "RepeatedTranslates (m is invariant under state {witness})")
            }
            Self::SingularMixture { kernel } => {
                write!(f, "SingularMixture (kernel vector {})", format_vector(kernel))
            }
        }
    }
}

/// Classifies `m` by the column structure and rank of its mixture matrix.
pub fn degeneracy_check(table: &CayleyTable, m: &MeasureVector) -> Result<DegeneracyVerdict, CoreError> {
    let mixture = mixture_matrix(table, m)?;
    Ok(classify(&mixture.matrix))
}

pub(crate) fn classify(matrix: &RationalMatrix) -> DegeneracyVerdict {
    // any repeated pair of translates yields a repeat with the first column
    let first = matrix.column(0);
    if let Some(h) = (1..matrix.cols()).find(|&h| matrix.column(h) == first) {
        return DegeneracyVerdict::RepeatedTranslates {
            witness: StateIndex::from_zero_based(h),
        };
    }
    match matrix.kernel_vector() {
        Some(kernel) => DegeneracyVerdict::SingularMixture { kernel },
        None => DegeneracyVerdict::NonDegenerate,
    }
}
