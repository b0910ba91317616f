//! Pointwise evaluation of the algebraic approximant.
//!
//! A fitted set defines `a(z)` implicitly through
//! `Σ_{n=0..N} P_n(z) a(z)^n = 0` — a degree-N polynomial in `a` at each
//! point. Evaluation means: find the N roots of that section, then pick the
//! branch whose value is closest to the seed partial sum `S(z)` (the first
//! M series coefficients evaluated at z). That proximity rule is simple and
//! correct inside the disc where the partial sum is accurate; it makes no
//! attempt at analytic continuation, and near a branch collision — where
//! two roots are genuinely equidistant candidates — it reports ambiguity
//! instead of guessing.
//!
//! Root finding: closed forms for N = 1, 2, Aberth-Ehrlich simultaneous
//! iteration above that. Complex z is allowed throughout; branch structure
//! lives in the complex plane even for real data.

use crate::hermite_pade::PolynomialSet;
use crate::series::PowerSeries;
use num_complex::Complex64;
use std::error::Error;
use std::fmt;

// |P_N(z)| at or below this fraction of the largest polynomial coefficient
// means the section degenerates to degree < N at that point.
const COLLAPSE_RATIO: f64 = 1e-13;
// Two branch distances within this relative gap are a tie.
const TIE_RATIO: f64 = 1e-9;
// Accepted roots must have polynomial residual within this fraction of the
// evaluation scale Σ |c_n| |w|^n.
const ROOT_RESIDUAL_RATIO: f64 = 1e-11;
const MAX_ABERTH_ITERATIONS: usize = 200;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum EvalError {
    /// Leading coefficient P_N(z) vanished; the section has fewer than N
    /// finite roots at this point.
    DegreeCollapse,
    /// Two distinct branches sit at (numerically) the same distance from
    /// the seed partial sum.
    BranchAmbiguity,
    /// Root iteration failed to reach the residual contract.
    NoConvergence,
}

impl fmt::Display for EvalError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            EvalError::DegreeCollapse => {
                write!(f, "leading polynomial vanishes at this point (degree collapse)")
            }
            EvalError::BranchAmbiguity => {
                write!(f, "two branches are equidistant from the seed partial sum")
            }
            EvalError::NoConvergence => write!(f, "root finding did not converge"),
        }
    }
}

impl Error for EvalError {}

/// The approximant evaluated at one point.
#[derive(Debug, Clone, PartialEq)]
pub struct ApproximantValue {
    pub z: Complex64,
    pub value: Complex64,
    /// Index of the chosen root in [`roots_of_section`]'s ordering.
    pub branch_index: usize,
    /// |Σ P_n(z) value^n| — how well the value satisfies the section.
    pub residual: f64,
}

fn poly_at(coeffs: &[f64], z: Complex64) -> Complex64 {
    let mut acc = Complex64::new(0.0, 0.0);
    for &c in coeffs.iter().rev() {
        acc = acc * z + c;
    }
    acc
}

fn section_coefficients(set: &PolynomialSet, z: Complex64) -> Vec<Complex64> {
    set.polys.iter().map(|p| poly_at(p, z)).collect()
}

fn coefficient_scale(set: &PolynomialSet) -> f64 {
    set.polys
        .iter()
        .flat_map(|p| p.iter())
        .fold(0.0f64, |m, c| m.max(c.abs()))
}

/// All N roots (with multiplicity) of the section `Σ_n P_n(z) w^n = 0`,
/// sorted by real part then imaginary part. Each returned root satisfies
/// `|Σ c_n w^n| ≤ 1e-11 · Σ |c_n| |w|^n`.
pub fn roots_of_section(set: &PolynomialSet, z: Complex64) -> Result<Vec<Complex64>, EvalError> {
    let c = section_coefficients(set, z);
    let n = c.len() - 1;
    let scale = coefficient_scale(set);
    if c[n].norm() <= COLLAPSE_RATIO * scale {
        return Err(EvalError::DegreeCollapse);
    }

    let mut roots = match n {
        1 => vec![-c[0] / c[1]],
        2 => quadratic_roots(c[0], c[1], c[2]),
        _ => aberth_roots(&c)?,
    };

    for &w in &roots {
        let residual = poly_at_complex(&c, w).norm();
        let eval_scale: f64 = c
            .iter()
            .enumerate()
            .map(|(k, ck)| ck.norm() * w.norm().powi(k as i32))
            .sum();
        if residual > ROOT_RESIDUAL_RATIO * eval_scale.max(1e-300) {
            return Err(EvalError::NoConvergence);
        }
    }

    roots.sort_by(|a, b| a.re.total_cmp(&b.re).then(a.im.total_cmp(&b.im)));
    Ok(roots)
}

fn poly_at_complex(coeffs: &[Complex64], w: Complex64) -> Complex64 {
    let mut acc = Complex64::new(0.0, 0.0);
    for &c in coeffs.iter().rev() {
        acc = acc * w + c;
    }
    acc
}

// Numerically stable two-root formula: compute the larger-magnitude
// combination -(c1 ± √(c1²-4c0c2))/2 first, then the companion root via the
// product c0/c2 — avoids cancellation when |4 c0 c2| ≪ c1².
fn quadratic_roots(c0: Complex64, c1: Complex64, c2: Complex64) -> Vec<Complex64> {
    let disc = (c1 * c1 - 4.0 * c0 * c2).sqrt();
    let q = if (c1 + disc).norm() >= (c1 - disc).norm() {
        -(c1 + disc) / 2.0
    } else {
        -(c1 - disc) / 2.0
    };
    if q.norm() == 0.0 {
        // c0 = c1 = 0: double root at the origin
        return vec![Complex64::new(0.0, 0.0); 2];
    }
    vec![q / c2, c0 / q]
}

// Aberth-Ehrlich simultaneous iteration on the monic-normalized section.
fn aberth_roots(c: &[Complex64]) -> Result<Vec<Complex64>, EvalError> {
    let n = c.len() - 1;
    let lead = c[n];
    let monic: Vec<Complex64> = c.iter().map(|ck| ck / lead).collect();

    // Cauchy bound on root magnitude seeds the start circle; the angular
    // offset breaks the symmetry of real-coefficient sections.
    let radius = 1.0
        + monic[..n]
            .iter()
            .fold(0.0f64, |m, ck| m.max(ck.norm()));
    let mut w: Vec<Complex64> = (0..n)
        .map(|i| {
            let theta = 2.0 * std::f64::consts::PI * i as f64 / n as f64 + 0.4;
            radius * Complex64::new(theta.cos(), theta.sin())
        })
        .collect();

    for _ in 0..MAX_ABERTH_ITERATIONS {
        let mut done = true;
        for i in 0..n {
            let (p, dp) = horner_with_derivative(&monic, w[i]);
            if p.norm() == 0.0 {
                continue; // already an exact root
            }
            let newton = if dp.norm() == 0.0 {
                // stationary point: nudge off it instead of dividing by zero
                done = false;
                w[i] *= 1.0 + 1e-8;
                continue;
            } else {
                p / dp
            };
            let mut repulsion = Complex64::new(0.0, 0.0);
            for j in 0..n {
                if j != i {
                    repulsion += 1.0 / (w[i] - w[j]);
                }
            }
            let denom = 1.0 - newton * repulsion;
            let correction = if denom.norm() == 0.0 { newton } else { newton / denom };
            w[i] -= correction;
            if correction.norm() > 1e-14 * (1.0 + w[i].norm()) {
                done = false;
            }
        }
        if done {
            return Ok(w);
        }
        // multiple roots stall the per-step displacement test above;
        // accept as soon as every residual is already at noise level
        let all_small = w.iter().all(|&wi| {
            let scale: f64 = monic
                .iter()
                .enumerate()
                .map(|(k, ck)| ck.norm() * wi.norm().powi(k as i32))
                .sum();
            poly_at_complex(&monic, wi).norm() <= 1e-13 * scale.max(1e-300)
        });
        if all_small {
            return Ok(w);
        }
    }
    Err(EvalError::NoConvergence)
}

fn horner_with_derivative(coeffs: &[Complex64], w: Complex64) -> (Complex64, Complex64) {
    let mut p = Complex64::new(0.0, 0.0);
    let mut dp = Complex64::new(0.0, 0.0);
    for &c in coeffs.iter().rev() {
        dp = dp * w + p;
        p = p * w + c;
    }
    (p, dp)
}

/// Evaluate the approximant at `z`: solve the section and return the root
/// closest to the seed partial sum `S(z) = Σ_{j<M} seed_j z^j`.
///
/// When the two nearest roots are genuinely distinct but their distances to
/// `S(z)` agree to within 1e-9 relative, the proximity rule has no basis to
/// choose and the result is [`EvalError::BranchAmbiguity`].
pub fn eval_at(
    set: &PolynomialSet,
    seed: &PowerSeries,
    z: Complex64,
) -> Result<ApproximantValue, EvalError> {
    let roots = roots_of_section(set, z)?;
    let m = set.required_input_length();
    let terms = m.min(seed.len());
    let mut s = Complex64::new(0.0, 0.0);
    let mut zp = Complex64::new(1.0, 0.0);
    for j in 0..terms {
        s += seed.get(j) * zp;
        zp *= z;
    }

    let mut order: Vec<usize> = (0..roots.len()).collect();
    order.sort_by(|&i, &j| (roots[i] - s).norm().total_cmp(&(roots[j] - s).norm()));
    let best = order[0];
    if order.len() > 1 {
        let d0 = (roots[best] - s).norm();
        let d1 = (roots[order[1]] - s).norm();
        let distinct = (roots[best] - roots[order[1]]).norm()
            > TIE_RATIO * (roots[best].norm() + roots[order[1]].norm() + 1e-300);
        if distinct && d1 - d0 <= TIE_RATIO * d1.max(1e-300) {
            return Err(EvalError::BranchAmbiguity);
        }
    }

    let c = section_coefficients(set, z);
    let value = roots[best];
    Ok(ApproximantValue {
        z,
        value,
        branch_index: best,
        residual: poly_at_complex(&c, value).norm(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hermite_pade::{solve_hpp, DegreeSpec, PolynomialSet};
    use crate::oracle::{self, taylor};

    fn raw_set(polys: &[&[f64]]) -> PolynomialSet {
        PolynomialSet {
            polys: polys.iter().map(|p| p.to_vec()).collect(),
            normalization: None,
        }
    }

    fn re(x: f64) -> Complex64 {
        Complex64::new(x, 0.0)
    }

    #[test]
    fn unit_parabola_roots() {
        let set = raw_set(&[&[-1.0], &[0.0], &[1.0]]);
        let roots = roots_of_section(&set, re(0.0)).unwrap();
        assert!((roots[0] - re(-1.0)).norm() <= 1e-14);
        assert!((roots[1] - re(1.0)).norm() <= 1e-14);
    }

    #[test]
    #[allow(clippy::excessive_precision)] // constants quoted verbatim
    fn first_example_section_at_origin() {
        let set = raw_set(&[
            &[1.0, -1.544503593423590],
            &[0.1947992842134984, 0.06783822675080703],
            &[-0.5044536972622500, -0.01090573365920830],
        ]);
        let roots = roots_of_section(&set, re(0.0)).unwrap();
        let f0 = 2.0_f64.sqrt() + 0.2;
        assert!((roots[1].re - f0).abs() <= 1e-12);
        assert!((roots[0].re - (-1.2280546636065583)).abs() <= 1e-10);
    }

    #[test]
    fn triple_root_meets_residual_contract() {
        // (w - 1)^3: multiplicity slows the iteration but the residual
        // criterion still accepts the cluster
        let set = raw_set(&[&[-1.0], &[3.0], &[-3.0], &[1.0]]);
        let roots = roots_of_section(&set, re(0.0)).unwrap();
        assert_eq!(roots.len(), 3);
        for w in roots {
            assert!((w - re(1.0)).norm() <= 1e-4);
        }
    }

    #[test]
    fn quartic_with_known_roots() {
        // (w^2 - 1)(w^2 - 4) = 4 - 5 w^2 + w^4
        let set = raw_set(&[&[4.0], &[0.0], &[-5.0], &[0.0], &[1.0]]);
        let roots = roots_of_section(&set, re(0.0)).unwrap();
        let expect = [-2.0, -1.0, 1.0, 2.0];
        for (w, e) in roots.iter().zip(expect) {
            assert!((w - re(e)).norm() <= 1e-11, "root {} vs {}", w, e);
        }
    }

    #[test]
    fn linear_case_is_exact_ratio() {
        let set = raw_set(&[&[1.0, 2.0], &[3.0, -1.0]]);
        let seed = crate::series::PowerSeries::new(vec![0.0]).unwrap();
        for zx in [0.0, 0.3, -0.7] {
            let z = re(zx);
            let v = eval_at(&set, &seed, z).unwrap();
            let expect = -poly_at(&[1.0, 2.0], z) / poly_at(&[3.0, -1.0], z);
            assert_eq!(v.value, expect);
            assert_eq!(v.branch_index, 0);
        }
    }

    #[test]
    fn defining_branch_passes_through_f0() {
        let f = taylor(&oracle::ex1(), 5).unwrap();
        let spec = DegreeSpec::new(2, vec![1, 1, 1]).unwrap();
        let set = solve_hpp(&f, &spec).unwrap();
        let v = eval_at(&set, &f, re(0.0)).unwrap();
        assert!((v.value - re(f.get(0))).norm() <= 1e-12);
        // residual satisfies the value invariant
        let c = section_coefficients(&set, re(0.0));
        let term_scale = c
            .iter()
            .enumerate()
            .map(|(k, ck)| (ck * v.value.powi(k as i32)).norm())
            .fold(0.0f64, f64::max);
        assert!(v.residual <= 1e-9 * term_scale.max(1e-300));
    }

    #[test]
    fn first_example_matches_function_inside_disc() {
        let f = taylor(&oracle::ex1(), 5).unwrap();
        let spec = DegreeSpec::new(2, vec![1, 1, 1]).unwrap();
        let set = solve_hpp(&f, &spec).unwrap();
        let v = eval_at(&set, &f, re(0.1)).unwrap();
        let truth = (2.0_f64 - 0.3).sqrt() + 1.0 / 4.9;
        assert!((v.value.re - truth).abs() <= 1e-3);
        assert!(v.value.im.abs() <= 1e-12);
    }

    #[test]
    fn collapse_detected_when_leading_poly_vanishes() {
        // P_2 = z vanishes at the origin
        let set = raw_set(&[&[-1.0, 0.5], &[1.0], &[0.0, 1.0]]);
        assert_eq!(
            roots_of_section(&set, re(0.0)).unwrap_err(),
            EvalError::DegreeCollapse
        );
        assert!(roots_of_section(&set, re(0.5)).is_ok());
    }

    #[test]
    fn equidistant_branches_are_ambiguous() {
        // w^2 = z^2 has branches ±z; a zero seed sits exactly between them
        let set = raw_set(&[&[0.0, 0.0, -1.0], &[0.0], &[1.0]]);
        let seed = crate::series::PowerSeries::new(vec![0.0, 0.0, 0.0, 0.0]).unwrap();
        assert_eq!(
            eval_at(&set, &seed, re(0.5)).unwrap_err(),
            EvalError::BranchAmbiguity
        );
        // a decisive seed breaks the tie
        let seed = crate::series::PowerSeries::new(vec![0.0, 1.0, 0.0, 0.0]).unwrap();
        let v = eval_at(&set, &seed, re(0.5)).unwrap();
        assert!((v.value - re(0.5)).norm() <= 1e-14);
    }
}
