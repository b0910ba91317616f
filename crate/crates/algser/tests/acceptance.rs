//! Acceptance gates for the fit → predict → evaluate pipeline.
//!
//! One test per criterion, so `cargo test --test acceptance` prints one
//! pass/fail line for each. Every prediction in this file goes through
//! [`predict_checked`], which enforces the order-residual identity
//! `|R_J| <= 1e-12 |C·a_J| + 1e-300` after each step; criterion 7 then
//! reports the worst ratio observed on the bundled examples.

use std::time::{Duration, Instant};

use algser::approximant::eval_at;
use algser::hermite_pade::{solve_hpp, DegreeSpec, PolynomialSet};
use algser::oracle::{self, reference_errors, taylor, OracleSpec};
use algser::predictor::PredictionState;
use algser::series::{truncate, PowerSeries};

// ---------------------------------------------------------------- helpers

/// Fit `spec` to the first M coefficients of `truth`.
fn fit(truth: &PowerSeries, n: usize, degrees: &[usize]) -> (PowerSeries, DegreeSpec, PolynomialSet) {
    let spec = DegreeSpec::new(n, degrees.to_vec()).unwrap();
    let f = truncate(truth, spec.required_input_length());
    let set = solve_hpp(&f, &spec).unwrap();
    (f, spec, set)
}

/// Advance `k` steps, asserting the residual identity after every one.
/// Returns the predictions and the worst residual-to-bound ratio.
fn predict_checked(state: &mut PredictionState, k: usize) -> (Vec<f64>, f64) {
    let mut out = Vec::with_capacity(k);
    let mut worst = 0.0f64;
    for _ in 0..k {
        let j = state.next_index();
        let a = state.predict_next().expect("prediction step failed");
        let r = state.residual_rj(j).abs();
        let bound = 1e-12 * (state.c() * a).abs() + 1e-300;
        assert!(
            r <= bound,
            "residual {:+e} exceeds bound {:+e} at index {}",
            r,
            bound,
            j
        );
        worst = worst.max(r / bound);
        out.push(a);
    }
    (out, worst)
}

/// Schoolbook power-series long division, independent of the predictor.
fn long_division(num: &[f64], den: &[f64], count: usize) -> Vec<f64> {
    assert!(den[0] != 0.0);
    let mut q: Vec<f64> = Vec::with_capacity(count);
    for j in 0..count {
        let mut s = num.get(j).copied().unwrap_or(0.0);
        for i in 1..=j.min(den.len() - 1) {
            s -= den[i] * q[j - i];
        }
        q.push(s / den[0]);
    }
    q
}

fn polymul(a: &[f64], b: &[f64]) -> Vec<f64> {
    let mut out = vec![0.0; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        for (j, &y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    out
}

// ------------------------------------------------------------- criteria

/// ex1 = sqrt(2-3z) + 1/(5-z), fit N=2 degrees (1,1,1) on five
/// coefficients: the six predictions and their percentage errors must land
/// on the reference table.
#[test]
fn criterion_01_ex1_prediction_table() {
    let truth = taylor(&oracle::ex1(), 11).unwrap();
    let t0 = Instant::now();
    let (f, spec, set) = fit(&truth, 2, &[1, 1, 1]);
    let mut state = PredictionState::new(&f, &spec, &set).unwrap();
    let (preds, _) = predict_checked(&mut state, 6);
    let elapsed = t0.elapsed();

    let expect_a = [-0.294, -0.332, -0.392, -0.478, -0.599, -0.765];
    let expect_rel = [0.18, 0.38, 0.58, 0.76, 0.93, 1.10];
    let rows = reference_errors(&truth, &preds, 5).unwrap();
    let mut max_da = 0.0f64;
    let mut max_dr = 0.0f64;
    for (i, row) in rows.iter().enumerate() {
        let da = (row.predicted - expect_a[i]).abs();
        let dr = (row.rel_err_pct.unwrap() - expect_rel[i]).abs();
        assert!(da <= 0.001, "a_{}: {} vs {}", row.j, row.predicted, expect_a[i]);
        assert!(dr <= 0.01, "rel_{}: {:?} vs {}", row.j, row.rel_err_pct, expect_rel[i]);
        max_da = max_da.max(da);
        max_dr = max_dr.max(dr);
    }
    assert!(elapsed < Duration::from_millis(100), "took {:?}", elapsed);
    println!(
        "criterion 1: PASS — ex1 table (max |Δa| {:.1e}, max |Δrel| {:.1e}, {:?})",
        max_da, max_dr, elapsed
    );
}

/// ex2 = 17(1-2z)^(-1/3) + z/(2-z), same family: predictions to the last
/// printed digit and percentage errors to ±0.01.
#[test]
fn criterion_02_ex2_prediction_table() {
    let truth = taylor(&oracle::ex2(), 11).unwrap();
    let t0 = Instant::now();
    let (f, spec, set) = fit(&truth, 2, &[1, 1, 1]);
    let mut state = PredictionState::new(&f, &spec, &set).unwrap();
    let (preds, _) = predict_checked(&mut state, 6);
    let elapsed = t0.elapsed();

    let expect_a = [68.212, 122.291, 224.194, 418.053, 790.063, 1509.437];
    let expect_rel = [0.40, 1.29, 2.62, 4.38, 6.53, 9.03];
    let rows = reference_errors(&truth, &preds, 5).unwrap();
    let mut max_da = 0.0f64;
    for (i, row) in rows.iter().enumerate() {
        let da = (row.predicted - expect_a[i]).abs();
        assert!(da <= 0.001, "a_{}: {} vs {}", row.j, row.predicted, expect_a[i]);
        let dr = (row.rel_err_pct.unwrap() - expect_rel[i]).abs();
        assert!(dr <= 0.01, "rel_{}: {:?} vs {}", row.j, row.rel_err_pct, expect_rel[i]);
        max_da = max_da.max(da);
    }
    assert!(elapsed < Duration::from_millis(100), "took {:?}", elapsed);
    println!(
        "criterion 2: PASS — ex2 table (max |Δa| {:.1e}, {:?})",
        max_da, elapsed
    );
}

/// ex3 = e^z (2-3z)^(-1/3) + 1/(5-z), fit N=2 degrees (2,2,2) on eight
/// coefficients: a_8..a_13 to 1e-5.
#[test]
fn criterion_03_ex3_prediction_table() {
    let truth = taylor(&oracle::ex3(), 14).unwrap();
    let t0 = Instant::now();
    let (f, spec, set) = fit(&truth, 2, &[2, 2, 2]);
    let mut state = PredictionState::new(&f, &spec, &set).unwrap();
    let (preds, _) = predict_checked(&mut state, 6);
    let elapsed = t0.elapsed();

    let expect_a = [3.878509, 5.301047, 7.275227, 10.006950, 13.781978, 18.995972];
    let mut max_da = 0.0f64;
    for (i, &a) in preds.iter().enumerate() {
        let da = (a - expect_a[i]).abs();
        assert!(da <= 1e-5, "a_{}: {} vs {}", 8 + i, a, expect_a[i]);
        max_da = max_da.max(da);
    }
    assert!(elapsed < Duration::from_millis(100), "took {:?}", elapsed);
    println!(
        "criterion 3: PASS — ex3 predictions (max |Δa| {:.1e}, {:?})",
        max_da, elapsed
    );
}

/// The fitted polynomial coefficients themselves, after rescaling to the
/// reference normalization, match the reference fits to 1e-9 relative.
#[test]
#[allow(clippy::excessive_precision)] // reference constants quoted verbatim
fn criterion_04_fitted_polynomial_coefficients() {
    struct Case {
        oracle: OracleSpec,
        degrees: &'static [usize],
        norm: (usize, usize),
        polys: [&'static [f64]; 3],
    }
    let cases = [
        Case {
            oracle: oracle::ex1(),
            degrees: &[1, 1, 1],
            norm: (0, 0),
            polys: [
                &[1.0, -1.544503593423590],
                &[0.1947992842134984, 0.06783822675080703],
                &[-0.5044536972622500, -0.01090573365920830],
            ],
        },
        Case {
            oracle: oracle::ex2(),
            degrees: &[1, 1, 1],
            norm: (1, 0),
            polys: [
                &[-49.52369318166839, -6.946105600281359],
                &[1.0, 1.695055482965655],
                &[0.1125387307324166, -0.2732915349762758],
            ],
        },
        Case {
            oracle: oracle::ex3(),
            degrees: &[2, 2, 2],
            norm: (0, 0),
            polys: [
                &[1.0, -1.027576803009053, 0.02070967420422950],
                &[2.617867885747464, -0.6563757889994458, -3.118191126500581],
                &[-3.647182626894738, 7.471780741166546, -3.356878399103086],
            ],
        },
    ];

    let mut worst = 0.0f64;
    for (idx, case) in cases.iter().enumerate() {
        let m = 2 + case.degrees.iter().sum::<usize>();
        let truth = taylor(&case.oracle, m).unwrap();
        let (_, _, set) = fit(&truth, 2, case.degrees);
        let rescaled = set.rescaled(case.norm.0, case.norm.1).unwrap();
        for (n, want_poly) in case.polys.iter().enumerate() {
            for (j, &want) in want_poly.iter().enumerate() {
                let got = rescaled.polys[n][j];
                let rel = (got - want).abs() / want.abs();
                assert!(
                    rel <= 1e-9,
                    "ex{} p[{}][{}]: {} vs {} (rel {:e})",
                    idx + 1, n, j, got, want, rel
                );
                worst = worst.max(rel);
            }
        }
    }
    println!(
        "criterion 4: PASS — fitted coefficients match references (worst rel {:.1e})",
        worst
    );
}

/// 100 seeded random rational functions, N=1 families (0,1), (1,1), (1,2):
/// the recursion must agree with long division of the fitted -P_0/P_1 to
/// 1e-11 for 20 predicted coefficients each.
#[test]
fn criterion_05_rational_functions_reduce_to_long_division() {
    struct Lcg(u64);
    impl Lcg {
        fn uniform(&mut self) -> f64 {
            self.0 = self
                .0
                .wrapping_mul(6364136223846793005)
                .wrapping_add(1442695040888963407);
            (self.0 >> 11) as f64 / (1u64 << 53) as f64
        }
        fn weight(&mut self) -> f64 {
            0.5 + self.uniform()
        }
    }

    let mut rng = Lcg(20260816);
    let families = [(0usize, 1usize), (1, 1), (1, 2)];
    let mut worst = 0.0f64;
    for case in 0..100 {
        let (p0, p1) = families[case % 3];
        // Poles of one sign, magnitude >= 1.25, so the test series stay tame.
        let sign = if rng.uniform() < 0.5 { -1.0 } else { 1.0 };
        let mut den = vec![rng.weight()];
        for _ in 0..p1 {
            let rho = sign * (1.25 + 3.0 * rng.uniform());
            den = polymul(&den, &[1.0, -1.0 / rho]);
        }
        let num: Vec<f64> = (0..=p0).map(|_| rng.weight()).collect();

        let m = 1 + p0 + p1;
        let f = PowerSeries::new(long_division(&num, &den, m)).unwrap();
        let spec = DegreeSpec::new(1, vec![p0, p1]).unwrap();
        let set = solve_hpp(&f, &spec)
            .unwrap_or_else(|e| panic!("case {} failed to fit: {}", case, e));
        let mut state = PredictionState::new(&f, &spec, &set).unwrap();
        let (preds, _) = predict_checked(&mut state, 20);

        let minus_p0: Vec<f64> = set.polys[0].iter().map(|c| -c).collect();
        let expansion = long_division(&minus_p0, &set.polys[1], m + 20);
        for (k, &a) in preds.iter().enumerate() {
            let want = expansion[m + k];
            let dev = (a - want).abs() / want.abs().max(1e-300);
            assert!(
                dev <= 1e-11,
                "case {} ({},{}): a_{} = {} vs {}",
                case, p0, p1, m + k, a, want
            );
            worst = worst.max(dev);
        }
    }
    println!(
        "criterion 5: PASS — 100 rational fits reduce to long division (worst dev {:.1e})",
        worst
    );
}

/// Closed forms whose relation is exact: sqrt(1+z) under N=2 (1,0,0) and
/// 1/(1-z) under N=1 (0,1) must be predicted to 1e-10 for 50 steps.
#[test]
fn criterion_06_exact_relations_predict_exactly() {
    // sqrt(1+z): w^2 - (1+z) = 0.
    let truth = taylor(
        &OracleSpec::Binomial { a: 1.0, b: 1.0, alpha: 0.5 },
        53,
    )
    .unwrap();
    let (f, spec, set) = fit(&truth, 2, &[1, 0, 0]);
    let mut state = PredictionState::new(&f, &spec, &set).unwrap();
    let (preds, _) = predict_checked(&mut state, 50);
    let mut worst = 0.0f64;
    for (k, &a) in preds.iter().enumerate() {
        let want = truth.get(3 + k);
        let rel = (a - want).abs() / want.abs();
        assert!(rel <= 1e-10, "sqrt(1+z) a_{}: {} vs {}", 3 + k, a, want);
        worst = worst.max(rel);
    }

    // 1/(1-z): every coefficient is exactly 1.
    let geo = PowerSeries::new(vec![1.0, 1.0]).unwrap();
    let spec = DegreeSpec::new(1, vec![0, 1]).unwrap();
    let set = solve_hpp(&geo, &spec).unwrap();
    let mut state = PredictionState::new(&geo, &spec, &set).unwrap();
    let (preds, _) = predict_checked(&mut state, 50);
    for (k, &a) in preds.iter().enumerate() {
        let rel = (a - 1.0).abs();
        assert!(rel <= 1e-10, "1/(1-z) a_{}: {}", 2 + k, a);
        worst = worst.max(rel);
    }
    println!(
        "criterion 6: PASS — exact relations stay exact for 50 steps (worst rel {:.1e})",
        worst
    );
}

/// The residual identity R_J = D_J + a_J C = 0 holds to
/// |R_J| <= 1e-12 |C a_J| + 1e-300 after every predicted step. Enforced by
/// `predict_checked` throughout this file; measured here on the examples.
#[test]
fn criterion_07_residual_identity() {
    let mut worst = 0.0f64;
    for (oracle_spec, degrees, seeds) in [
        (oracle::ex1(), vec![1, 1, 1], 5usize),
        (oracle::ex2(), vec![1, 1, 1], 5),
        (oracle::ex3(), vec![2, 2, 2], 8),
    ] {
        let truth = taylor(&oracle_spec, seeds).unwrap();
        let (f, spec, set) = fit(&truth, 2, &degrees);
        let mut state = PredictionState::new(&f, &spec, &set).unwrap();
        let (_, ratio) = predict_checked(&mut state, 20);
        worst = worst.max(ratio);
    }
    println!(
        "criterion 7: PASS — residuals within bound on every step (worst ratio {:.1e})",
        worst
    );
}

/// The O(J) quadratic fast path agrees with the general recursion to 1e-13
/// on ex1 and ex2 for J = 5..=20.
#[test]
fn criterion_08_fast_path_agreement() {
    let mut worst = 0.0f64;
    for oracle_spec in [oracle::ex1(), oracle::ex2()] {
        let truth = taylor(&oracle_spec, 5).unwrap();
        let (f, spec, set) = fit(&truth, 2, &[1, 1, 1]);
        let mut slow = PredictionState::new(&f, &spec, &set).unwrap();
        let mut fast = slow.clone();
        for j in 5..=20usize {
            let a = slow.predict_next().unwrap();
            let b = fast.predict_quadratic_fast().unwrap();
            let dev = (a - b).abs() / a.abs().max(1e-300);
            assert!(dev <= 1e-13, "J={}: {} vs {}", j, a, b);
            worst = worst.max(dev);
        }
    }
    println!(
        "criterion 8: PASS — fast path matches general recursion (worst dev {:.1e})",
        worst
    );
}

/// Evaluating the ex1 approximant off the series: it must agree with the
/// 25-term predicted partial sum to 1e-8 at z = 0.01, 0.05, 0.1, and with
/// the true function to 1e-3 at z = 0.1.
#[test]
fn criterion_09_approximant_evaluation() {
    let truth = taylor(&oracle::ex1(), 5).unwrap();
    let (f, spec, set) = fit(&truth, 2, &[1, 1, 1]);
    let mut state = PredictionState::new(&f, &spec, &set).unwrap();
    predict_checked(&mut state, 20);
    let series = state.coeffs(); // a_0..a_24

    let mut worst_series = 0.0f64;
    let mut diff_truth_at_01 = 0.0f64;
    for &z in &[0.01, 0.05, 0.1] {
        let val = eval_at(&set, &f, z.into()).unwrap();
        let partial: f64 = series
            .iter()
            .rev()
            .fold(0.0, |acc, &c| acc * z + c);
        let d = (val.value - partial).norm();
        assert!(d <= 1e-8, "z={}: approximant {} vs series {}", z, val.value, partial);
        worst_series = worst_series.max(d);

        let f_true = (2.0 - 3.0 * z).sqrt() + 1.0 / (5.0 - z);
        if z == 0.1 {
            diff_truth_at_01 = (val.value - f_true).norm();
            assert!(
                diff_truth_at_01 <= 1e-3,
                "z=0.1: approximant {} vs true {}",
                val.value,
                f_true
            );
        }
    }
    println!(
        "criterion 9: PASS — approximant tracks series ({:.1e}) and truth at z=0.1 ({:.1e})",
        worst_series, diff_truth_at_01
    );
}

/// Throughput: 100 predicted coefficients under an exact quartic relation
/// (N=4, degrees (8,8,8,7,7), M=42) in under one second, all finite, and
/// matching the closed form.
#[test]
fn criterion_10_quartic_throughput() {
    // Construct an exactly-satisfiable quartic relation for w = sqrt(u),
    // u = 2 - 3z: with arbitrary q0, q1, q2,
    //   (-u q0) + (-u q1) w + (q0 - u q2) w^2 + q1 w^3 + q2 w^4
    //     = (w^2 - u)(q0 + q1 w + q2 w^2) = 0.
    let u = [2.0, -3.0];
    let q = |offset: usize| -> Vec<f64> {
        (0..8)
            .map(|j| if j == 0 { 1.0 } else { 1.0 / ((j + offset) as f64).powi(2) })
            .collect()
    };
    let (q0, q1, q2) = (q(1), q(2), q(3));
    let neg = |v: Vec<f64>| -> Vec<f64> { v.into_iter().map(|c| -c).collect() };
    let p0 = neg(polymul(&u, &q0));
    let p1 = neg(polymul(&u, &q1));
    let mut p2 = neg(polymul(&u, &q2));
    for (j, &c) in q0.iter().enumerate() {
        p2[j] += c;
    }
    let set = PolynomialSet {
        polys: vec![p0, p1, p2, q1.clone(), q2.clone()],
        normalization: None,
    };
    let spec = DegreeSpec::new(4, vec![8, 8, 8, 7, 7]).unwrap();
    assert_eq!(spec.required_input_length(), 42);

    let truth = taylor(
        &OracleSpec::Binomial { a: 2.0, b: -3.0, alpha: 0.5 },
        142,
    )
    .unwrap();
    let f = truncate(&truth, 42);

    let t0 = Instant::now();
    let mut state = PredictionState::new(&f, &spec, &set).unwrap();
    let (preds, _) = predict_checked(&mut state, 100);
    let elapsed = t0.elapsed();

    assert!((state.c() - 12.485281374238575).abs() <= 1e-12);
    let mut worst = 0.0f64;
    for (k, &a) in preds.iter().enumerate() {
        assert!(a.is_finite());
        let want = truth.get(42 + k);
        let rel = (a - want).abs() / want.abs();
        assert!(rel <= 1e-12, "a_{}: {} vs {}", 42 + k, a, want);
        worst = worst.max(rel);
    }
    assert!(elapsed < Duration::from_secs(1), "took {:?}", elapsed);
    println!(
        "criterion 10: PASS — 100 quartic coefficients in {:?} (worst rel {:.1e})",
        elapsed, worst
    );
}
