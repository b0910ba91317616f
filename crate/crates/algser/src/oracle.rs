//! Taylor-coefficient oracles for the bundled test functions.
//!
//! The regression examples need arbitrarily many reference coefficients, far
//! beyond what any table prints. A small combinator algebra covers all three
//! bundled functions:
//!
//! ```text
//! ex1 = (2 - 3z)^(1/2) + 1/(5 - z)
//! ex2 = 17·(1 - 2z)^(-1/3) + z/(2 - z)
//! ex3 = exp(z)·(2 - 3z)^(-1/3) + 1/(5 - z)
//! ```
//!
//! Coefficients come from stable forward recurrences (binomial ratio,
//! geometric ratio, 1/j! convolution), not symbolic differentiation; over
//! the index ranges in play the forward error stays near machine epsilon.

use crate::series::{conv, PowerSeries};
use serde::Serialize;
use std::error::Error;
use std::fmt;

#[derive(Debug, Clone, PartialEq)]
pub enum OracleError {
    /// Spec violates a structural invariant (zero base, empty sum, …).
    InvalidSpec(String),
    /// Combinator expression text could not be parsed.
    Parse(String),
    /// Fewer true coefficients than the requested error report covers.
    InsufficientTruth { needed: usize, got: usize },
}

impl fmt::Display for OracleError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            OracleError::InvalidSpec(msg) => write!(f, "invalid oracle spec: {}", msg),
            OracleError::Parse(msg) => write!(f, "cannot parse oracle expression: {}", msg),
            OracleError::InsufficientTruth { needed, got } => write!(
                f,
                "error report needs {} true coefficients but only {} given",
                needed, got
            ),
        }
    }
}

impl Error for OracleError {}

/// Numerator choice for the rational building block `num/(c + d z)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Numerator {
    One,
    Z,
}

/// A closed combinator algebra over the building blocks the bundled
/// functions need — deliberately not a general expression engine.
#[derive(Debug, Clone, PartialEq)]
pub enum OracleSpec {
    /// `(a + b z)^alpha`, a > 0.
    Binomial { a: f64, b: f64, alpha: f64 },
    /// `1/(c + d z)` or `z/(c + d z)`, c ≠ 0.
    Rational { c: f64, d: f64, numerator: Numerator },
    /// `exp(z)` times the inner oracle.
    ExpProduct(Box<OracleSpec>),
    /// Pointwise sum of one or more oracles.
    Sum(Vec<OracleSpec>),
    /// Scalar multiple of the inner oracle.
    Scale(f64, Box<OracleSpec>),
}

/// First `L` Taylor coefficients of the oracle at z = 0.
pub fn taylor(spec: &OracleSpec, l: usize) -> Result<PowerSeries, OracleError> {
    if l == 0 {
        return Err(OracleError::InvalidSpec(
            "coefficient count must be at least 1".into(),
        ));
    }
    let coeffs = taylor_raw(spec, l)?;
    PowerSeries::new(coeffs)
        .map_err(|e| OracleError::InvalidSpec(format!("oracle produced invalid series: {}", e)))
}

fn taylor_raw(spec: &OracleSpec, l: usize) -> Result<Vec<f64>, OracleError> {
    match spec {
        OracleSpec::Binomial { a, b, alpha } => {
            if *a <= 0.0 {
                return Err(OracleError::InvalidSpec(format!(
                    "binomial base must be positive, got {}",
                    a
                )));
            }
            // c_0 = a^alpha, c_{j+1} = c_j · (b/a) · (alpha - j)/(j + 1)
            let mut out = Vec::with_capacity(l);
            let mut c = a.powf(*alpha);
            let ratio = b / a;
            for j in 0..l {
                out.push(c);
                c *= ratio * (alpha - j as f64) / (j as f64 + 1.0);
            }
            Ok(out)
        }
        OracleSpec::Rational { c, d, numerator } => {
            if *c == 0.0 {
                return Err(OracleError::InvalidSpec(
                    "rational denominator constant must be nonzero".into(),
                ));
            }
            // 1/(c + dz) = (1/c) Σ (-d/c)^j z^j
            let ratio = -d / c;
            let mut out = Vec::with_capacity(l);
            if *numerator == Numerator::Z {
                out.push(0.0);
            }
            let mut r = 1.0 / c;
            while out.len() < l {
                out.push(r);
                r *= ratio;
            }
            Ok(out)
        }
        OracleSpec::ExpProduct(inner) => {
            let inner = taylor_raw(inner, l)?;
            let mut exp = Vec::with_capacity(l);
            let mut e = 1.0;
            for j in 0..l {
                exp.push(e);
                e /= j as f64 + 1.0;
            }
            Ok(conv(&exp, &inner, l))
        }
        OracleSpec::Sum(parts) => {
            if parts.is_empty() {
                return Err(OracleError::InvalidSpec(
                    "sum needs at least one operand".into(),
                ));
            }
            let mut out = vec![0.0; l];
            for part in parts {
                for (o, v) in out.iter_mut().zip(taylor_raw(part, l)?) {
                    *o += v;
                }
            }
            Ok(out)
        }
        OracleSpec::Scale(k, inner) => {
            if !k.is_finite() {
                return Err(OracleError::InvalidSpec("scale factor must be finite".into()));
            }
            Ok(taylor_raw(inner, l)?.into_iter().map(|v| k * v).collect())
        }
    }
}

/// `(2 - 3z)^(1/2) + 1/(5 - z)`
pub fn ex1() -> OracleSpec {
    OracleSpec::Sum(vec![
        OracleSpec::Binomial { a: 2.0, b: -3.0, alpha: 0.5 },
        OracleSpec::Rational { c: 5.0, d: -1.0, numerator: Numerator::One },
    ])
}

/// `17·(1 - 2z)^(-1/3) + z/(2 - z)`
pub fn ex2() -> OracleSpec {
    OracleSpec::Sum(vec![
        OracleSpec::Scale(
            17.0,
            Box::new(OracleSpec::Binomial { a: 1.0, b: -2.0, alpha: -1.0 / 3.0 }),
        ),
        OracleSpec::Rational { c: 2.0, d: -1.0, numerator: Numerator::Z },
    ])
}

/// `exp(z)·(2 - 3z)^(-1/3) + 1/(5 - z)`
pub fn ex3() -> OracleSpec {
    OracleSpec::Sum(vec![
        OracleSpec::ExpProduct(Box::new(OracleSpec::Binomial {
            a: 2.0,
            b: -3.0,
            alpha: -1.0 / 3.0,
        })),
        OracleSpec::Rational { c: 5.0, d: -1.0, numerator: Numerator::One },
    ])
}

/// Look up a bundled example by name.
pub fn by_name(name: &str) -> Option<OracleSpec> {
    match name {
        "ex1" => Some(ex1()),
        "ex2" => Some(ex2()),
        "ex3" => Some(ex3()),
        _ => None,
    }
}

/// Parse a combinator expression such as
/// `sum(binomial(2,-3,1/2), rational(5,-1,one))`.
///
/// Grammar: `binomial(a, b, alpha)`, `rational(c, d, one|z)`,
/// `exp_product(expr)`, `sum(expr, expr, …)`, `scale(k, expr)`; numbers are
/// decimals or fractions `p/q`; whitespace is free.
pub fn parse(text: &str) -> Result<OracleSpec, OracleError> {
    let mut p = Parser { text, pos: 0 };
    let spec = p.expr()?;
    p.skip_ws();
    if p.pos != p.text.len() {
        return Err(OracleError::Parse(format!(
            "trailing input at byte {}: {:?}",
            p.pos,
            &p.text[p.pos..]
        )));
    }
    Ok(spec)
}

struct Parser<'a> {
    text: &'a str,
    pos: usize,
}

impl<'a> Parser<'a> {
    fn skip_ws(&mut self) {
        while self.text[self.pos..].starts_with(|c: char| c.is_whitespace()) {
            self.pos += 1;
        }
    }

    fn expect(&mut self, ch: char) -> Result<(), OracleError> {
        self.skip_ws();
        if self.text[self.pos..].starts_with(ch) {
            self.pos += ch.len_utf8();
            Ok(())
        } else {
            Err(OracleError::Parse(format!(
                "expected '{}' at byte {}",
                ch, self.pos
            )))
        }
    }

    fn ident(&mut self) -> Result<&'a str, OracleError> {
        self.skip_ws();
        let rest = &self.text[self.pos..];
        let end = rest
            .find(|c: char| !(c.is_ascii_alphanumeric() || c == '_'))
            .unwrap_or(rest.len());
        if end == 0 {
            return Err(OracleError::Parse(format!(
                "expected a name at byte {}",
                self.pos
            )));
        }
        self.pos += end;
        Ok(&rest[..end])
    }

    fn number(&mut self) -> Result<f64, OracleError> {
        self.skip_ws();
        let rest = &self.text[self.pos..];
        let end = rest
            .find(|c: char| !(c.is_ascii_digit() || "+-./eE".contains(c)))
            .unwrap_or(rest.len());
        let token = &rest[..end];
        if token.is_empty() {
            return Err(OracleError::Parse(format!(
                "expected a number at byte {}",
                self.pos
            )));
        }
        self.pos += end;
        if let Some((num, den)) = token.split_once('/') {
            let n: f64 = num
                .trim()
                .parse()
                .map_err(|_| OracleError::Parse(format!("bad fraction numerator {:?}", num)))?;
            let d: f64 = den
                .trim()
                .parse()
                .map_err(|_| OracleError::Parse(format!("bad fraction denominator {:?}", den)))?;
            if d == 0.0 {
                return Err(OracleError::Parse("fraction denominator is zero".into()));
            }
            Ok(n / d)
        } else {
            token
                .parse()
                .map_err(|_| OracleError::Parse(format!("bad number {:?}", token)))
        }
    }

    fn expr(&mut self) -> Result<OracleSpec, OracleError> {
        let name = self.ident()?;
        self.expect('(')?;
        let spec = match name {
            "binomial" => {
                let a = self.number()?;
                self.expect(',')?;
                let b = self.number()?;
                self.expect(',')?;
                let alpha = self.number()?;
                OracleSpec::Binomial { a, b, alpha }
            }
            "rational" => {
                let c = self.number()?;
                self.expect(',')?;
                let d = self.number()?;
                self.expect(',')?;
                let numerator = match self.ident()? {
                    "one" => Numerator::One,
                    "z" => Numerator::Z,
                    other => {
                        return Err(OracleError::Parse(format!(
                            "rational numerator must be 'one' or 'z', got {:?}",
                            other
                        )))
                    }
                };
                OracleSpec::Rational { c, d, numerator }
            }
            "exp_product" => OracleSpec::ExpProduct(Box::new(self.expr()?)),
            "sum" => {
                let mut parts = vec![self.expr()?];
                loop {
                    self.skip_ws();
                    if self.text[self.pos..].starts_with(',') {
                        self.pos += 1;
                        parts.push(self.expr()?);
                    } else {
                        break;
                    }
                }
                OracleSpec::Sum(parts)
            }
            "scale" => {
                let k = self.number()?;
                self.expect(',')?;
                OracleSpec::Scale(k, Box::new(self.expr()?))
            }
            other => {
                return Err(OracleError::Parse(format!(
                    "unknown combinator {:?}",
                    other
                )))
            }
        };
        self.expect(')')?;
        Ok(spec)
    }
}

/// One line of a prediction report, in the reference tables' column order.
///
/// `truth`, `abs_err` are present when true coefficients were supplied;
/// `rel_err_pct` additionally requires the true value to be nonzero (a zero
/// truth makes the relative error undefined, and such rows carry `None`
/// there as the flag).
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ReportRow {
    pub j: usize,
    #[serde(rename = "f_j")]
    pub truth: Option<f64>,
    #[serde(rename = "a_j")]
    pub predicted: f64,
    pub abs_err: Option<f64>,
    pub rel_err_pct: Option<f64>,
}

/// Compare predictions against true coefficients, reporting per index the
/// absolute error and the relative error in percent — the tables' layout.
pub fn reference_errors(
    true_coeffs: &PowerSeries,
    predicted: &[f64],
    start_index: usize,
) -> Result<Vec<ReportRow>, OracleError> {
    let needed = start_index + predicted.len();
    if true_coeffs.len() < needed {
        return Err(OracleError::InsufficientTruth {
            needed,
            got: true_coeffs.len(),
        });
    }
    Ok(predicted
        .iter()
        .enumerate()
        .map(|(i, &a)| {
            let j = start_index + i;
            let t = true_coeffs.get(j);
            let abs = (t - a).abs();
            ReportRow {
                j,
                truth: Some(t),
                predicted: a,
                abs_err: Some(abs),
                rel_err_pct: if t != 0.0 { Some(100.0 * abs / t.abs()) } else { None },
            }
        })
        .collect())
}
