//! Recursive coefficient prediction from a fitted polynomial set.
//!
//! Once `P_0..P_N` satisfy the order condition through `z^{M-1}`, demanding
//! that the coefficient of `z^J` of `Σ_n P_n(z) a(z)^n` also vanish for
//! J = M, M+1, … determines one new coefficient per order. Each such
//! coefficient enters linearly: writing `S(z)` for the partial sum through
//! `z^{J-1}`,
//!
//! ```text
//! 0 = R_J = D_J + a_J·C,
//! C   = Σ_{n=1..N} n · p_{n,0} · a_0^{n-1}            (fixed denominator),
//! D_J = [z^J] Σ_{n=1..N} P_n(z) · S(z)^n              (everything else),
//! ```
//!
//! so `a_J = -D_J / C`. The polynomial set is frozen for the whole run; no
//! refitting happens here. `D_J` is re-expanded from scratch every step,
//! O(N·J²), which keeps each value directly traceable to the formula above;
//! the quadratic N = 2, degrees (1,1,1) family additionally gets the O(J)
//! closed form [`PredictionState::predict_quadratic_fast`].

use crate::hermite_pade::{DegreeSpec, PolynomialSet};
use crate::series::{conv, PowerSeries};
use std::error::Error;
use std::fmt;

// C is declared hopeless when it cancels to below this fraction of the sum
// of its terms' magnitudes; every prediction would divide by noise.
const C_CANCELLATION_RATIO: f64 = 1e-13;

/// Failures while constructing or advancing a prediction.
#[derive(Debug, Clone, PartialEq)]
pub enum PredictError {
    /// The denominator C vanished (or cancelled below noise level).
    ZeroDenominator,
    /// Predicted coefficient at `index` left the representable range.
    Overflow { index: usize },
    /// The fast path was invoked on a spec it does not cover.
    SpecMismatch,
    /// Fewer seed coefficients than the spec consumes.
    InsufficientSeeds { needed: usize, got: usize },
}

impl fmt::Display for PredictError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PredictError::ZeroDenominator => {
                write!(f, "prediction denominator C is zero to working precision")
            }
            PredictError::Overflow { index } => {
                write!(f, "predicted coefficient a_{} overflowed", index)
            }
            PredictError::SpecMismatch => write!(
                f,
                "fast path requires N = 2 with degrees (1,1,1)"
            ),
            PredictError::InsufficientSeeds { needed, got } => write!(
                f,
                "prediction needs {} seed coefficients but only {} given",
                needed, got
            ),
        }
    }
}

impl Error for PredictError {}

/// The constant denominator `C = Σ_{n=1..N} n · p_{n,0} · f_0^{n-1}`.
///
/// Rejected as [`PredictError::ZeroDenominator`] when the terms cancel to
/// within 1e-13 of their combined magnitude — a C of pure roundoff would
/// poison every later division.
pub fn compute_c(set: &PolynomialSet, f0: f64) -> Result<f64, PredictError> {
    let mut c = 0.0;
    let mut magnitude = 0.0;
    for n in 1..=set.n() {
        let term = n as f64 * set.polys[n][0] * f0.powi(n as i32 - 1);
        c += term;
        magnitude += term.abs();
    }
    if c.abs() <= C_CANCELLATION_RATIO * magnitude {
        return Err(PredictError::ZeroDenominator);
    }
    Ok(c)
}

/// A prediction in progress: the coefficients `a_0..a_{J-1}` (seeds first,
/// predictions appended behind them) plus the cached denominator C.
///
/// Seeds and predictions are arithmetically indistinguishable once stored;
/// only reporting distinguishes them, via [`PredictionState::seed_len`].
#[derive(Debug, Clone)]
pub struct PredictionState {
    set: PolynomialSet,
    coeffs: Vec<f64>,
    c: f64,
    seed_len: usize,
}

impl PredictionState {
    /// Seed with exactly the M coefficients the fit consumed.
    pub fn new(
        f: &PowerSeries,
        spec: &DegreeSpec,
        set: &PolynomialSet,
    ) -> Result<Self, PredictError> {
        Self::with_seed_len(f, spec, set, spec.required_input_length())
    }

    /// Seed with the first `seed_len ≥ M` known coefficients — the sweep
    /// workflow predicts one step ahead of ever-longer known prefixes.
    pub fn with_seed_len(
        f: &PowerSeries,
        spec: &DegreeSpec,
        set: &PolynomialSet,
        seed_len: usize,
    ) -> Result<Self, PredictError> {
        let m = spec.required_input_length();
        assert!(seed_len >= m, "seed length must cover the fitted prefix");
        debug_assert_eq!(
            spec.degrees(),
            set.degrees(),
            "polynomial set must come from the same degree spec"
        );
        if f.len() < seed_len {
            return Err(PredictError::InsufficientSeeds {
                needed: seed_len,
                got: f.len(),
            });
        }
        let c = compute_c(set, f.coeffs()[0])?;
        Ok(PredictionState {
            set: set.clone(),
            coeffs: f.coeffs()[..seed_len].to_vec(),
            c,
            seed_len,
        })
    }

    pub fn c(&self) -> f64 {
        self.c
    }

    /// All coefficients so far: seeds, then predictions.
    pub fn coeffs(&self) -> &[f64] {
        &self.coeffs
    }

    pub fn seed_len(&self) -> usize {
        self.seed_len
    }

    /// Index the next prediction will fill.
    pub fn next_index(&self) -> usize {
        self.coeffs.len()
    }

    /// `D_J`: the coefficient of `z^J` in `Σ_{n=1..N} P_n(z)·S(z)^n` with
    /// `S` the partial sum through `z^{J-1}`, expanded at truncation J+1.
    /// `j` must equal the current coefficient count (a_J is still unknown).
    pub fn compute_dj(&self, j: usize) -> f64 {
        assert_eq!(
            j,
            self.coeffs.len(),
            "D_J is defined with exactly a_0..a_{{J-1}} known"
        );
        let l = j + 1;
        let mut s = self.coeffs.clone();
        s.resize(l, 0.0);
        self.order_coefficient(&s, j)
    }

    /// Advance one step: append and return `a_J = -D_J / C`.
    pub fn predict_next(&mut self) -> Result<f64, PredictError> {
        let j = self.coeffs.len();
        let dj = self.compute_dj(j);
        let aj = -dj / self.c;
        if !aj.is_finite() {
            return Err(PredictError::Overflow { index: j });
        }
        self.coeffs.push(aj);
        Ok(aj)
    }

    /// The full order-J residual `R_J`: like `D_J` but with `a_J` included
    /// in the partial sum, plus the `p_{0,J}` term when J lies within
    /// `P_0`'s degree. By construction `R_J = D_J + a_J·C`, so it vanishes
    /// identically at every predicted index — a cheap self-check that the
    /// recursion did what the algebra says.
    pub fn residual_rj(&self, j: usize) -> f64 {
        assert!(
            self.coeffs.len() > j,
            "R_J needs a_0..a_J to be present"
        );
        let l = j + 1;
        let s = &self.coeffs[..l];
        let mut total = self.order_coefficient(s, j);
        if j < self.set.polys[0].len() {
            total += self.set.polys[0][j];
        }
        total
    }

    // Coefficient of z^j in Σ_{n>=1} P_n(z)·s(z)^n at truncation j+1.
    fn order_coefficient(&self, s: &[f64], j: usize) -> f64 {
        let l = j + 1;
        let mut total = 0.0;
        let mut power = s.to_vec();
        for n in 1..=self.set.n() {
            if n > 1 {
                power = conv(&power, s, l);
            }
            let poly = &self.set.polys[n];
            let mut cj = 0.0;
            for (i, &pi) in poly.iter().enumerate().take(j + 1) {
                cj += pi * power[j - i];
            }
            total += cj;
        }
        total
    }

    /// O(J) closed form for the quadratic family N = 2, degrees (1,1,1):
    ///
    /// ```text
    /// a_J = -( p_{1,1} a_{J-1}
    ///        + p_{2,1} Σ_{k=0..J-1} a_{J-k-1} a_k
    ///        + p_{2,0} Σ_{k=1..J-1} a_k a_{J-k} ) / (p_{1,0} + 2 p_{2,0} a_0)
    /// ```
    ///
    /// Bit-for-bit this is a different code path from [`predict_next`]; the
    /// two agree to roundoff and the test suite holds them to 1e-13.
    pub fn predict_quadratic_fast(&mut self) -> Result<f64, PredictError> {
        if self.set.n() != 2 || self.set.degrees() != [1, 1, 1] {
            return Err(PredictError::SpecMismatch);
        }
        let j = self.coeffs.len();
        let a = &self.coeffs;
        let p11 = self.set.polys[1][1];
        let p20 = self.set.polys[2][0];
        let p21 = self.set.polys[2][1];
        let mut shifted = 0.0; // Σ_{k=0..J-1} a_{J-k-1} a_k
        for k in 0..j {
            shifted += a[j - 1 - k] * a[k];
        }
        let mut centered = 0.0; // Σ_{k=1..J-1} a_k a_{J-k}
        for k in 1..j {
            centered += a[k] * a[j - k];
        }
        let numerator = p11 * a[j - 1] + p21 * shifted + p20 * centered;
        let aj = -numerator / self.c;
        if !aj.is_finite() {
            return Err(PredictError::Overflow { index: j });
        }
        self.coeffs.push(aj);
        Ok(aj)
    }
}

/// Predict `a_M..a_{M+k-1}` from the seed series under a frozen set.
pub fn predict_k(
    f: &PowerSeries,
    spec: &DegreeSpec,
    set: &PolynomialSet,
    k: usize,
) -> Result<Vec<f64>, PredictError> {
    let mut state = PredictionState::new(f, spec, set)?;
    let mut out = Vec::with_capacity(k);
    for _ in 0..k {
        out.push(state.predict_next()?);
    }
    Ok(out)
}
