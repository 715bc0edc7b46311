//! Integer image of a cube for the quadratic identities.
//!
//! Multiplying every entry by the lcm `L` of all denominators scales both
//! sides of each bilinear identity by `L²`, so equality can be decided on
//! integers. Entries up to 2^40 use `i128` (sums of at most 2^20 products
//! stay below 2^101); anything larger falls back to `BigInt`.

use std::ops::{AddAssign, Mul};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};

use crate::cube::StructureCube;

const SMALL_ENTRY_LIMIT: i128 = 1 << 40;
const SMALL_ORDER_LIMIT: usize = 1 << 20;

pub(crate) enum ScaledCube {
    Small { n: usize, v: Vec<i128> },
    Big { n: usize, v: Vec<BigInt> },
}

trait Exact: Clone + Zero + PartialEq + AddAssign {}

impl<T: Clone + Zero + PartialEq + AddAssign> Exact for T {}

impl ScaledCube {
    pub(crate) fn new(cube: &StructureCube) -> Self {
        let n = cube.n();
        let lcm = cube.entries().iter().fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
        let big: Vec<BigInt> = cube.entries().iter().map(|x| x.numer() * (&lcm / x.denom())).collect();
        if n <= SMALL_ORDER_LIMIT {
            let small: Option<Vec<i128>> = big
                .iter()
                .map(|x| x.to_i128().filter(|v| v.abs() <= SMALL_ENTRY_LIMIT))
                .collect();
            if let Some(v) = small {
                return Self::Small { n, v };
            }
        }
        Self::Big { n, v: big }
    }

    /// Calls `f(i, j, m)` for every triple where the two bracketings differ.
    pub(crate) fn triple_mismatches(&self, f: impl FnMut(usize, usize, usize)) {
        match self {
            Self::Small { n, v } => triples(*n, v, f),
            Self::Big { n, v } => triples(*n, v, f),
        }
    }

    /// Calls `f(i, j, r, c)` with the first (row-major) entry where
    /// `A_i A_j` and `Σ_k a_{i,j}(k) A_k` differ, for every failing pair.
    pub(crate) fn pair_mismatches(&self, f: impl FnMut(usize, usize, usize, usize)) {
        match self {
            Self::Small { n, v } => pairs(*n, v, f),
            Self::Big { n, v } => pairs(*n, v, f),
        }
    }

    /// Calls `f(k, j)` where column `j` of `A_k A_k` disagrees with
    /// `Σ_i a_{k,k}(i) a_{i,j}`.
    pub(crate) fn square_mismatches(&self, f: impl FnMut(usize, usize)) {
        match self {
            Self::Small { n, v } => squares(*n, v, f),
            Self::Big { n, v } => squares(*n, v, f),
        }
    }
}

fn column<T>(v: &[T], n: usize, i: usize, j: usize) -> &[T] {
    let start = (i * n + j) * n;
    &v[start..start + n]
}

/// `Σ_t weights[t] · column(t)` for columns selected by `pick`.
fn combine<'a, T>(n: usize, weights: &[T], pick: impl Fn(usize) -> &'a [T]) -> Vec<T>
where
    T: Exact + 'a,
    for<'x> &'x T: Mul<&'x T, Output = T>,
{
    let mut out = vec![T::zero(); n];
    for (t, w) in weights.iter().enumerate() {
        if w.is_zero() {
            continue;
        }
        for (acc, x) in out.iter_mut().zip(pick(t)) {
            if !x.is_zero() {
                *acc += w * x;
            }
        }
    }
    out
}

fn triples<T>(n: usize, v: &[T], mut f: impl FnMut(usize, usize, usize))
where
    T: Exact,
    for<'x> &'x T: Mul<&'x T, Output = T>,
{
    for i in 0..n {
        for j in 0..n {
            let ij = column(v, n, i, j);
            for m in 0..n {
                let left = combine(n, ij, |k| column(v, n, k, m));
                let right = combine(n, column(v, n, j, m), |p| column(v, n, i, p));
                if left != right {
                    f(i, j, m);
                }
            }
        }
    }
}

fn pairs<T>(n: usize, v: &[T], mut f: impl FnMut(usize, usize, usize, usize))
where
    T: Exact,
    for<'x> &'x T: Mul<&'x T, Output = T>,
{
    // A_i[r][c] = a[i][c][r]
    let at = |i: usize, r: usize, c: usize| &v[(i * n + c) * n + r];
    for i in 0..n {
        for j in 0..n {
            let weights = column(v, n, i, j);
            'entries: for r in 0..n {
                for c in 0..n {
                    let mut product = T::zero();
                    let mut mixed = T::zero();
                    for k in 0..n {
                        let (x, y) = (at(i, r, k), at(j, k, c));
                        if !x.is_zero() && !y.is_zero() {
                            product += x * y;
                        }
                        let (w, z) = (&weights[k], at(k, r, c));
                        if !w.is_zero() && !z.is_zero() {
                            mixed += w * z;
                        }
                    }
                    if product != mixed {
                        f(i, j, r, c);
                        break 'entries;
                    }
                }
            }
        }
    }
}

fn squares<T>(n: usize, v: &[T], mut f: impl FnMut(usize, usize))
where
    T: Exact,
    for<'x> &'x T: Mul<&'x T, Output = T>,
{
    for k in 0..n {
        let kk = column(v, n, k, k);
        for j in 0..n {
            let left = combine(n, column(v, n, k, j), |i| column(v, n, k, i));
            let right = combine(n, kk, |i| column(v, n, i, j));
            if left != right {
                f(k, j);
            }
        }
    }
}
