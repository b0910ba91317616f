//! Hermite-Padé polynomial fitting.
//!
//! For a series `f` and degrees `p_0..p_N`, we look for polynomials
//! `P_n(z) = Σ_{j=0..p_n} p_{n,j} z^j` satisfying the order condition
//!
//! ```text
//! P_0(z) + P_1(z) f(z) + … + P_N(z) f(z)^N = O(z^M),   M = N + Σ p_n.
//! ```
//!
//! Matching coefficients of `z^0..z^{M-1}` gives M linear equations in the
//! M + 1 unknowns `p_{n,j}`; fixing one coefficient to 1 (the normalization)
//! leaves a square system solved by Gaussian elimination. The solution is
//! unique up to overall scale whenever the square system is nonsingular, so
//! different normalizations agree after rescaling.

use crate::series::{pow_raw, PowerSeries};
use std::error::Error;
use std::fmt;

const PIVOT_RATIO: f64 = 1e-12;
// Acceptance tolerance for a candidate normalization: the assembled
// coefficients must satisfy the full order system to this fraction of the
// largest matrix entry. Solves that "succeed" numerically but violate this
// are treated as singular and the sweep moves on.
const SOLVE_RESIDUAL_TOL: f64 = 1e-8;

/// Failures while building or solving the order-condition system.
#[derive(Debug, Clone, PartialEq)]
pub enum FitError {
    /// Malformed degree specification (see [`DegreeSpec::new`]).
    InvalidSpec(String),
    /// The input series is shorter than the M coefficients the fit consumes.
    InsufficientCoefficients { needed: usize, got: usize },
    /// Every candidate normalization led to a numerically singular system.
    SingularSystem,
}

impl fmt::Display for FitError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FitError::InvalidSpec(msg) => write!(f, "invalid degree spec: {}", msg),
            FitError::InsufficientCoefficients { needed, got } => write!(
                f,
                "insufficient coefficients: fit consumes {} but only {} given",
                needed, got
            ),
            FitError::SingularSystem => write!(f, "order-condition system is singular"),
        }
    }
}

impl Error for FitError {}

/// Shape of the approximant family: the algebraic degree `N ≥ 1` and the
/// polynomial degrees `p_0..p_N`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DegreeSpec {
    n: usize,
    degrees: Vec<usize>,
}

impl DegreeSpec {
    pub fn new(n: usize, degrees: Vec<usize>) -> Result<Self, FitError> {
        if n < 1 {
            return Err(FitError::InvalidSpec("N must be at least 1".into()));
        }
        if degrees.len() != n + 1 {
            return Err(FitError::InvalidSpec(format!(
                "expected {} polynomial degrees for N = {}, got {}",
                n + 1,
                n,
                degrees.len()
            )));
        }
        Ok(DegreeSpec { n, degrees })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn degrees(&self) -> &[usize] {
        &self.degrees
    }

    /// Number of series coefficients the fit consumes: `M = N + Σ p_n`.
    pub fn required_input_length(&self) -> usize {
        self.n + self.degrees.iter().sum::<usize>()
    }

    /// The unknowns `(n, j)` in system column order: all coefficients of
    /// `P_0`, then of `P_1`, and so on.
    pub fn unknowns(&self) -> Vec<(usize, usize)> {
        let mut cols = Vec::with_capacity(self.required_input_length() + 1);
        for (n, &d) in self.degrees.iter().enumerate() {
            for j in 0..=d {
                cols.push((n, j));
            }
        }
        cols
    }
}

/// A fitted (or hand-built) set of polynomials `P_0..P_N`.
///
/// `polys[n][j]` is `p_{n,j}`. When the set came out of [`solve_hpp`],
/// `normalization = Some((n, j))` names the coefficient fixed at exactly 1.
/// Invariant either way: at least one coefficient is nonzero.
#[derive(Debug, Clone, PartialEq)]
pub struct PolynomialSet {
    pub polys: Vec<Vec<f64>>,
    pub normalization: Option<(usize, usize)>,
}

impl PolynomialSet {
    /// Algebraic degree N (number of polynomials minus one).
    pub fn n(&self) -> usize {
        self.polys.len() - 1
    }

    pub fn degrees(&self) -> Vec<usize> {
        self.polys.iter().map(|p| p.len() - 1).collect()
    }

    pub fn spec(&self) -> DegreeSpec {
        DegreeSpec {
            n: self.n(),
            degrees: self.degrees(),
        }
    }

    /// Series coefficients a fit of this shape consumes.
    pub fn required_input_length(&self) -> usize {
        self.n() + self.degrees().iter().sum::<usize>()
    }

    /// Same set rescaled so `polys[n][j]` becomes 1; `None` when that
    /// coefficient is zero. Solutions under different normalizations are
    /// compared this way.
    pub fn rescaled(&self, n: usize, j: usize) -> Option<PolynomialSet> {
        let pivot = *self.polys.get(n)?.get(j)?;
        if pivot == 0.0 {
            return None;
        }
        let polys = self
            .polys
            .iter()
            .map(|p| p.iter().map(|c| c / pivot).collect())
            .collect();
        Some(PolynomialSet {
            polys,
            normalization: Some((n, j)),
        })
    }
}

/// Dense order-condition matrix, M rows by M+1 columns.
///
/// Row m, column (n, j) — in [`DegreeSpec::unknowns`] order — holds the
/// coefficient of `z^{m-j}` in `f^n` (zero for j > m), i.e. the factor
/// multiplying `p_{n,j}` in the coefficient of `z^m` of `Σ P_n f^n`.
pub fn build_system(f: &PowerSeries, spec: &DegreeSpec) -> Result<Vec<Vec<f64>>, FitError> {
    let m = spec.required_input_length();
    if f.len() < m {
        return Err(FitError::InsufficientCoefficients {
            needed: m,
            got: f.len(),
        });
    }
    let fm = &f.coeffs()[..m];
    let powers: Vec<Vec<f64>> = (0..=spec.n).map(|n| pow_raw(fm, n, m)).collect();
    let cols = spec.unknowns();
    let rows = (0..m)
        .map(|row| {
            cols.iter()
                .map(|&(n, j)| if j <= row { powers[n][row - j] } else { 0.0 })
                .collect()
        })
        .collect();
    Ok(rows)
}

/// Solve `A x = b` by Gaussian elimination with partial pivoting.
///
/// A pivot counts as zero when its magnitude is at most `1e-12` times the
/// largest entry the pivot column had in the initial matrix; that surfaces
/// as [`FitError::SingularSystem`] rather than a garbage solution.
pub fn dense_solve(a: &[Vec<f64>], b: &[f64]) -> Result<Vec<f64>, FitError> {
    let n = a.len();
    assert!(a.iter().all(|row| row.len() == n), "matrix must be square");
    assert_eq!(b.len(), n, "right-hand side length must match");
    let mut a: Vec<Vec<f64>> = a.to_vec();
    let mut b = b.to_vec();

    let col_scale: Vec<f64> = (0..n)
        .map(|k| a.iter().map(|row| row[k].abs()).fold(0.0, f64::max))
        .collect();

    for k in 0..n {
        let pivot_row = (k..n)
            .max_by(|&i, &j| a[i][k].abs().total_cmp(&a[j][k].abs()))
            .unwrap();
        let scale = if col_scale[k] > 0.0 { col_scale[k] } else { 1.0 };
        if a[pivot_row][k].abs() <= PIVOT_RATIO * scale {
            return Err(FitError::SingularSystem);
        }
        a.swap(k, pivot_row);
        b.swap(k, pivot_row);
        for i in k + 1..n {
            let (upper, lower) = a.split_at_mut(i);
            let pivot = &upper[k];
            let row = &mut lower[0];
            let factor = row[k] / pivot[k];
            if factor != 0.0 {
                for (x, &p) in row[k..].iter_mut().zip(&pivot[k..]) {
                    *x -= factor * p;
                }
                b[i] -= factor * b[k];
            }
        }
    }

    let mut x = vec![0.0; n];
    for i in (0..n).rev() {
        let mut acc = b[i];
        for j in i + 1..n {
            acc -= a[i][j] * x[j];
        }
        x[i] = acc / a[i][i];
    }
    Ok(x)
}

/// Fit the polynomial set for `f` under `spec`.
///
/// Normalizations are tried in a fixed sweep — `p_{0,0} = 1, …, p_{N,0} = 1`,
/// then the degree-1 coefficients in the same polynomial order, and so on up
/// the degrees — and the first candidate whose square system is nonsingular
/// *and* whose solution actually satisfies the order equations is returned,
/// with the choice recorded in `normalization`.
pub fn solve_hpp(f: &PowerSeries, spec: &DegreeSpec) -> Result<PolynomialSet, FitError> {
    let a = build_system(f, spec)?;
    let mut saw_candidate = false;
    for (n, j) in normalization_candidates(spec) {
        saw_candidate = true;
        match try_normalization(&a, spec, n, j) {
            Some(set) => return Ok(set),
            None => continue,
        }
    }
    debug_assert!(saw_candidate);
    Err(FitError::SingularSystem)
}

/// Like [`solve_hpp`] but with the normalized coefficient `p_{n,j} = 1`
/// imposed rather than swept for.
pub fn solve_hpp_with_normalization(
    f: &PowerSeries,
    spec: &DegreeSpec,
    n: usize,
    j: usize,
) -> Result<PolynomialSet, FitError> {
    if n > spec.n || j > spec.degrees[n] {
        return Err(FitError::InvalidSpec(format!(
            "normalization p[{}][{}] outside the degree spec",
            n, j
        )));
    }
    let a = build_system(f, spec)?;
    try_normalization(&a, spec, n, j).ok_or(FitError::SingularSystem)
}

fn normalization_candidates(spec: &DegreeSpec) -> Vec<(usize, usize)> {
    let max_degree = *spec.degrees.iter().max().unwrap();
    let mut cands = Vec::new();
    for j in 0..=max_degree {
        for (n, &d) in spec.degrees.iter().enumerate() {
            if j <= d {
                cands.push((n, j));
            }
        }
    }
    cands
}

fn try_normalization(
    a: &[Vec<f64>],
    spec: &DegreeSpec,
    norm_n: usize,
    norm_j: usize,
) -> Option<PolynomialSet> {
    let cols = spec.unknowns();
    let ci = cols.iter().position(|&c| c == (norm_n, norm_j)).unwrap();
    let square: Vec<Vec<f64>> = a
        .iter()
        .map(|row| {
            row.iter()
                .enumerate()
                .filter(|&(c, _)| c != ci)
                .map(|(_, &v)| v)
                .collect()
        })
        .collect();
    let rhs: Vec<f64> = a.iter().map(|row| -row[ci]).collect();
    let x = dense_solve(&square, &rhs).ok()?;

    let mut polys: Vec<Vec<f64>> = spec.degrees.iter().map(|&d| vec![0.0; d + 1]).collect();
    polys[norm_n][norm_j] = 1.0;
    let mut xi = 0;
    for (idx, &(n, j)) in cols.iter().enumerate() {
        if idx == ci {
            continue;
        }
        polys[n][j] = x[xi];
        xi += 1;
    }

    // Reject solutions that slipped past the pivot test but do not satisfy
    // the order equations.
    let full: Vec<f64> = cols.iter().map(|&(n, j)| polys[n][j]).collect();
    let entry_scale = a
        .iter()
        .flat_map(|row| row.iter())
        .fold(0.0f64, |acc, v| acc.max(v.abs()));
    let worst = a
        .iter()
        .map(|row| {
            row.iter()
                .zip(&full)
                .map(|(aij, xj)| aij * xj)
                .sum::<f64>()
                .abs()
        })
        .fold(0.0, f64::max);
    if worst > SOLVE_RESIDUAL_TOL * entry_scale.max(1e-300) {
        return None;
    }

    Some(PolynomialSet {
        polys,
        normalization: Some((norm_n, norm_j)),
    })
}

/// Residuals of the order condition: entry m is the coefficient of `z^m` in
/// `Σ_n P_n(z) f(z)^n` for m = 0..M-1. All of them vanish (to roundoff) for
/// a valid fit; the caller picks the tolerance.
pub fn verify_order(f: &PowerSeries, set: &PolynomialSet, spec: &DegreeSpec) -> Vec<f64> {
    let m = spec.required_input_length();
    let len = f.len().min(m);
    let mut fm = f.coeffs()[..len].to_vec();
    fm.resize(m, 0.0);
    let mut total = vec![0.0; m];
    for (n, poly) in set.polys.iter().enumerate() {
        let power = pow_raw(&fm, n, m);
        let term = crate::series::conv(poly, &power, m);
        for (t, v) in total.iter_mut().zip(term) {
            *t += v;
        }
    }
    total
}
