//! Truncated formal power-series arithmetic.
//!
//! A series is a finite coefficient list `f_0..f_{L-1}` standing for
//! `f(z) = Σ_j f_j z^j`; index j is always the coefficient of `z^j`.
//! Every operation takes an explicit truncation length `L` and returns
//! exactly `L` coefficients, treating missing input coefficients as zero.
//! Products are plain Cauchy convolutions,
//!
//! ```text
//! (s·t)_j = Σ_{i=0..j} s_i t_{j-i}
//! ```
//!
//! dense and O(L²); that is all the fitter and predictor need.

use std::error::Error;
use std::fmt;

/// Validation failures when constructing a [`PowerSeries`].
#[derive(Debug, Clone, PartialEq)]
pub enum SeriesError {
    /// A series must carry at least one coefficient.
    Empty,
    /// Coefficient at `index` is NaN or infinite.
    NonFinite { index: usize },
}

impl fmt::Display for SeriesError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SeriesError::Empty => write!(f, "power series needs at least one coefficient"),
            SeriesError::NonFinite { index } => {
                write!(f, "coefficient {} is not finite", index)
            }
        }
    }
}

impl Error for SeriesError {}

/// Finite prefix of a formal power series, `coeffs[j]` = coefficient of `z^j`.
///
/// Invariants: nonempty, all entries finite. Constructors enforce both, so
/// downstream arithmetic never has to re-check.
#[derive(Debug, Clone, PartialEq)]
pub struct PowerSeries {
    coeffs: Vec<f64>,
}

impl PowerSeries {
    pub fn new(coeffs: Vec<f64>) -> Result<Self, SeriesError> {
        if coeffs.is_empty() {
            return Err(SeriesError::Empty);
        }
        for (index, c) in coeffs.iter().enumerate() {
            if !c.is_finite() {
                return Err(SeriesError::NonFinite { index });
            }
        }
        Ok(PowerSeries { coeffs })
    }

    pub fn coeffs(&self) -> &[f64] {
        &self.coeffs
    }

    pub fn len(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_empty(&self) -> bool {
        false // invariant: nonempty
    }

    /// Coefficient of `z^j`, reading past the stored prefix as zero.
    pub fn get(&self, j: usize) -> f64 {
        self.coeffs.get(j).copied().unwrap_or(0.0)
    }

    pub fn into_vec(self) -> Vec<f64> {
        self.coeffs
    }
}

/// First `L` coefficients of `s`, zero-padded when `L > s.len()`.
pub fn truncate(s: &PowerSeries, l: usize) -> PowerSeries {
    assert!(l >= 1, "truncation length must be at least 1");
    let mut out = s.coeffs[..s.len().min(l)].to_vec();
    out.resize(l, 0.0);
    PowerSeries { coeffs: out }
}

/// Truncated product: coefficient j of the result is `Σ_{i=0..j} s_i t_{j-i}`
/// for j = 0..L-1.
pub fn mul(s: &PowerSeries, t: &PowerSeries, l: usize) -> PowerSeries {
    assert!(l >= 1, "truncation length must be at least 1");
    PowerSeries {
        coeffs: conv(&s.coeffs, &t.coeffs, l),
    }
}

/// `s^n` truncated to `L` terms by iterated multiplication; `n = 0` gives
/// the constant series 1. Iteration (rather than binary powering) keeps the
/// intermediate truncations identical to n-fold `mul`, and n stays tiny here.
pub fn pow(s: &PowerSeries, n: usize, l: usize) -> PowerSeries {
    assert!(l >= 1, "truncation length must be at least 1");
    PowerSeries {
        coeffs: pow_raw(&s.coeffs, n, l),
    }
}

/// Product of a finite polynomial (coefficient list, ascending degree) with a
/// series, truncated to `L` terms.
pub fn poly_times_series(p: &[f64], s: &PowerSeries, l: usize) -> PowerSeries {
    assert!(l >= 1, "truncation length must be at least 1");
    PowerSeries {
        coeffs: conv(p, &s.coeffs, l),
    }
}

/// Raw truncated Cauchy convolution on slices. Shared by the public wrappers
/// and by the hot prediction loop, which works on bare coefficient vectors.
pub(crate) fn conv(a: &[f64], b: &[f64], l: usize) -> Vec<f64> {
    let mut out = vec![0.0; l];
    let amax = a.len().min(l);
    for (i, &ai) in a.iter().enumerate().take(amax) {
        if ai == 0.0 {
            continue;
        }
        let bmax = b.len().min(l - i);
        for (j, &bj) in b.iter().enumerate().take(bmax) {
            out[i + j] += ai * bj;
        }
    }
    out
}

pub(crate) fn pow_raw(s: &[f64], n: usize, l: usize) -> Vec<f64> {
    let mut out = vec![0.0; l];
    out[0] = 1.0;
    for _ in 0..n {
        out = conv(&out, s, l);
    }
    out
}
