//! Algebraic-series prediction: fit Hermite-Padé polynomials to a truncated
//! power series, then recycle the fitted relation as a recursion that
//! predicts the coefficients the truncation cut off.
//!
//! Given `M` coefficients of `f(z) = Σ a_j z^j` and a degree vector
//! `(p_0, …, p_N)` with `M = N + Σ p_n`, the fit finds polynomials `P_n` of
//! those degrees, not all zero, with
//!
//! ```text
//! P_0(z) + P_1(z) f(z) + … + P_N(z) f(z)^N = O(z^M).
//! ```
//!
//! Pretending the remainder is exactly zero turns the relation into a linear
//! recursion for `a_M, a_{M+1}, …`: each new coefficient appears through the
//! constant `C = Σ n p_{n,0} a_0^{n-1}` alone, so `a_J = -D_J / C` where
//! `D_J` collects the already-known terms. The same fitted polynomials
//! define an algebraic approximant — the root `w(z)` of
//! `Σ P_n(z) w^n = 0` closest to the series — usable beyond the radius of
//! convergence of the series itself.
//!
//! Module map:
//!
//! * [`series`] — truncated power-series arithmetic (`mul`, `pow`, …).
//! * [`hermite_pade`] — the linear system, its solver, and normalization.
//! * [`predictor`] — the coefficient recursion, residual checks, and the
//!   `O(J)` fast path for the quadratic `(1,1,1)` family.
//! * [`approximant`] — evaluate the algebraic approximant at a point by
//!   polynomial root-finding plus branch selection.
//! * [`oracle`] — closed-form reference series (binomial, rational,
//!   `e^z`-products, sums, scalings) and the error-table builder.
//! * [`cli`] — the `algser` command-line interface over all of the above.

pub mod approximant;
pub mod cli;
pub mod hermite_pade;
pub mod oracle;
pub mod predictor;
pub mod series;
