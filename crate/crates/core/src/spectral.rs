//! Substitution matrices and their Perron-Frobenius data.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::Serialize;

use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SubstitutionMatrix {
    /// `entries[i][j]`: number of type-`j` tiles in the substitution of a
    /// type-`i` tile.
    pub entries: Vec<Vec<u64>>,
}

impl SubstitutionMatrix {
    pub fn new(entries: Vec<Vec<u64>>) -> Self {
        SubstitutionMatrix { entries }
    }

    pub fn size(&self) -> usize {
        self.entries.len()
    }

    pub fn row_sums(&self) -> Vec<u64> {
        self.entries.iter().map(|r| r.iter().sum()).collect()
    }

    pub fn transpose(&self) -> SubstitutionMatrix {
        let n = self.size();
        SubstitutionMatrix::new((0..n).map(|i| (0..n).map(|j| self.entries[j][i]).collect()).collect())
    }

    /// `A·v`.
    pub fn apply(&self, v: &[BigRational]) -> Vec<BigRational> {
        self.entries
            .iter()
            .map(|row| row.iter().zip(v).fold(BigRational::zero(), |acc, (&a, x)| acc + x * rat(a)))
            .collect()
    }

    /// `vᵀ·A`.
    pub fn apply_left(&self, v: &[BigRational]) -> Vec<BigRational> {
        self.transpose().apply(v)
    }

    /// Smallest `k ≤ limit` with `A^k` entrywise positive.
    pub fn primitivity_exponent(&self, limit: usize) -> Option<usize> {
        let n = self.size();
        let base: Vec<Vec<bool>> = self.entries.iter().map(|r| r.iter().map(|&x| x > 0).collect()).collect();
        let mut cur = base.clone();
        for k in 1..=limit {
            if cur.iter().all(|r| r.iter().all(|&x| x)) {
                return Some(k);
            }
            cur = (0..n)
                .map(|i| (0..n).map(|j| (0..n).any(|m| cur[i][m] && base[m][j])).collect())
                .collect();
        }
        None
    }
}

fn rat(n: u64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

/// Nonzero vector spanning the kernel of `m` (rows × cols), assuming it is
/// one-dimensional.
fn kernel_vector(mut m: Vec<Vec<BigRational>>) -> Result<Vec<BigRational>> {
    let rows = m.len();
    let cols = m.first().map_or(0, Vec::len);
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        let Some(p) = (r..rows).find(|&i| !m[i][c].is_zero()) else { continue };
        m.swap(r, p);
        let inv = m[r][c].recip();
        for x in m[r].iter_mut() {
            *x = &*x * &inv;
        }
        for i in 0..rows {
            if i != r && !m[i][c].is_zero() {
                let f = m[i][c].clone();
                for j in 0..cols {
                    let d = &f * &m[r][j];
                    m[i][j] = &m[i][j] - d;
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    let free: Vec<usize> = (0..cols).filter(|c| !pivots.contains(c)).collect();
    if free.len() != 1 {
        return Err(Error::Invariant(format!("eigenspace has dimension {}", free.len())));
    }
    let f = free[0];
    let mut v = vec![BigRational::zero(); cols];
    v[f] = BigRational::one();
    for (i, &c) in pivots.iter().enumerate() {
        v[c] = -m[i][f].clone();
    }
    Ok(v)
}

fn shifted(a: &SubstitutionMatrix, lambda: i64) -> Vec<Vec<BigRational>> {
    let n = a.size();
    (0..n)
        .map(|i| {
            (0..n)
                .map(|j| {
                    let mut x = rat(a.entries[i][j]);
                    if i == j {
                        x -= BigRational::from_integer(lambda.into());
                    }
                    x
                })
                .collect()
        })
        .collect()
}

fn normalize(v: Vec<BigRational>) -> Vec<BigRational> {
    let s: BigRational = v.iter().cloned().sum();
    v.into_iter().map(|x| x / &s).collect()
}

/// Exact `v` with `vᵀA = λvᵀ`, entries summing to one.
pub fn exact_left_eigenvector(a: &SubstitutionMatrix, lambda: i64) -> Result<Vec<BigRational>> {
    Ok(normalize(kernel_vector(shifted(&a.transpose(), lambda))?))
}

/// Exact `v` with `Av = λv`, entries summing to one.
pub fn exact_right_eigenvector(a: &SubstitutionMatrix, lambda: i64) -> Result<Vec<BigRational>> {
    Ok(normalize(kernel_vector(shifted(a, lambda))?))
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SpectralResult {
    pub perron: f64,
    /// Right eigenvector scaled so the smallest entry is one.
    pub right: Vec<f64>,
    /// Left eigenvector normalized to sum one.
    pub left: Vec<f64>,
    pub iterations: usize,
}

fn power(rows: &[Vec<f64>], tol: f64, max_iter: usize) -> Result<(f64, Vec<f64>, usize)> {
    let n = rows.len();
    let mut v = vec![1.0 / n as f64; n];
    let mut lambda = 0.0;
    for it in 1..=max_iter {
        let w: Vec<f64> = rows.iter().map(|r| r.iter().zip(&v).map(|(a, b)| a * b).sum()).collect();
        let s: f64 = w.iter().sum();
        let next: Vec<f64> = w.iter().map(|x| x / s).collect();
        let delta = next.iter().zip(&v).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
        v = next;
        if (s - lambda).abs() < tol && delta < tol {
            return Ok((s, v, it));
        }
        lambda = s;
    }
    Err(Error::NoConvergence(max_iter))
}

/// Power iteration on both sides. Iterates `(A + I)/2`, which has the same
/// eigenvectors and is aperiodic for any irreducible `A`.
pub fn perron(a: &SubstitutionMatrix) -> Result<SpectralResult> {
    let n = a.size();
    let damp = |m: &SubstitutionMatrix| -> Vec<Vec<f64>> {
        (0..n)
            .map(|i| (0..n).map(|j| (m.entries[i][j] as f64 + if i == j { 1.0 } else { 0.0 }) / 2.0).collect())
            .collect()
    };
    let (mu, right, it1) = power(&damp(a), 1e-13, 100_000)?;
    let (_, left, it2) = power(&damp(&a.transpose()), 1e-13, 100_000)?;
    let min = right.iter().cloned().fold(f64::INFINITY, f64::min);
    Ok(SpectralResult {
        perron: 2.0 * mu - 1.0,
        right: right.iter().map(|x| x / min).collect(),
        left,
        iterations: it1.max(it2),
    })
}

/// Spectral data of a fractile catalog, exact where the rule allows.
#[derive(Clone, Debug, PartialEq)]
pub struct CatalogSpectrum {
    pub matrix: SubstitutionMatrix,
    pub perron: f64,
    /// Class areas; `A·areas = 5·areas` exactly.
    pub areas: Vec<BigRational>,
    /// Frequencies from power iteration, summing to one.
    pub frequencies: Vec<f64>,
    /// Exact frequencies; `freqᵀA = 5·freqᵀ`.
    pub exact_frequencies: Vec<BigRational>,
    pub primitivity_exponent: Option<usize>,
}

pub fn build_matrix(cat: &crate::fractile::Catalog, chiral: bool) -> SubstitutionMatrix {
    cat.matrix(chiral)
}

/// `A·v == λ·v`.
pub fn is_right_eigenvector(a: &SubstitutionMatrix, v: &[BigRational], lambda: i64) -> bool {
    let l = BigRational::from_integer(lambda.into());
    a.apply(v).iter().zip(v).all(|(x, y)| *x == &l * y)
}

/// `vᵀ·A == λ·vᵀ`.
pub fn is_left_eigenvector(a: &SubstitutionMatrix, v: &[BigRational], lambda: i64) -> bool {
    is_right_eigenvector(&a.transpose(), v, lambda)
}

pub fn catalog_spectrum(cat: &crate::fractile::Catalog, chiral: bool) -> Result<CatalogSpectrum> {
    let a = build_matrix(cat, chiral);
    let p = perron(&a)?;
    let areas = if chiral { cat.chiral_areas() } else { cat.areas() };
    if !is_right_eigenvector(&a, &areas, 5) {
        return Err(Error::Invariant("class areas are not an eigenvector for 5".into()));
    }
    let exact_frequencies = exact_left_eigenvector(&a, 5)?;
    Ok(CatalogSpectrum {
        perron: p.perron,
        areas,
        frequencies: p.left,
        exact_frequencies,
        primitivity_exponent: a.primitivity_exponent(64),
        matrix: a,
    })
}

pub fn to_f64(x: &BigRational) -> f64 {
    let (n, d) = (x.numer(), x.denom());
    let s = if x.is_negative() { -1.0 } else { 1.0 };
    let n: f64 = n.abs().to_string().parse().unwrap_or(f64::NAN);
    let d: f64 = d.to_string().parse().unwrap_or(f64::NAN);
    s * n / d
}

#[cfg(test)]
mod tests {
    use super::*;

    fn fib() -> SubstitutionMatrix {
        SubstitutionMatrix::new(vec![vec![1, 1], vec![1, 0]])
    }

    #[test]
    fn power_iteration_on_fibonacci() {
        let r = perron(&fib()).unwrap();
        assert!((r.perron - (1.0 + 5f64.sqrt()) / 2.0).abs() < 1e-9);
    }

    #[test]
    fn exact_eigenvectors() {
        let a = SubstitutionMatrix::new(vec![vec![2, 1], vec![3, 0]]);
        // λ = 3: right (1, 1), left (3, 1)
        let r = exact_right_eigenvector(&a, 3).unwrap();
        assert_eq!(r, vec![BigRational::new(1.into(), 2.into()), BigRational::new(1.into(), 2.into())]);
        let l = exact_left_eigenvector(&a, 3).unwrap();
        assert_eq!(l, vec![BigRational::new(3.into(), 4.into()), BigRational::new(1.into(), 4.into())]);
        assert!(exact_left_eigenvector(&a, 4).is_err());
    }

    #[test]
    fn primitivity() {
        assert_eq!(fib().primitivity_exponent(10), Some(2));
        let perm = SubstitutionMatrix::new(vec![vec![0, 1], vec![1, 0]]);
        assert_eq!(perm.primitivity_exponent(10), None);
    }
}
