//! Log-factorials, the binomial asymptotic behind the entropy function, exact
//! multibinomial identities and the real 4-term residual.

use std::f64::consts::PI;

use num_bigint::BigUint;
use num_rational::Ratio;
use num_traits::One;
use serde::Serialize;
use thiserror::Error;

use crate::entropy::real_regulator;
use num_complex::Complex64;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum AsymptoticsError {
    #[error("{0}")]
    Domain(String),
}

fn domain<T>(msg: String) -> Result<T, AsymptoticsError> {
    Err(AsymptoticsError::Domain(msg))
}

/// Below this the argument of the series is raised by the recurrence.
pub const SERIES_THRESHOLD: f64 = 10.0;

/// Integers up to this are summed exactly.
pub const EXACT_SUM_LIMIT: u32 = 20;

/// `log Gamma(x)` for `x >= 10` from the Stirling series through `1/x^5`.
fn log_gamma_series(x: f64) -> f64 {
    let inv = 1.0 / x;
    let inv2 = inv * inv;
    (x - 0.5) * x.ln() - x
        + 0.5 * (2.0 * PI).ln()
        + inv * (1.0 / 12.0 - inv2 * (1.0 / 360.0 - inv2 / 1260.0))
}

/// `log m! = log Gamma(m + 1)` for real `m > 0`.
pub fn log_factorial(m: f64) -> Result<f64, AsymptoticsError> {
    if m.is_nan() || m <= 0.0 || !m.is_finite() {
        return domain(format!("log_factorial needs a finite m > 0, got {m}"));
    }
    if m.fract() == 0.0 && m <= EXACT_SUM_LIMIT as f64 {
        return Ok((2..=m as u32).map(|k| (k as f64).ln()).sum());
    }
    let mut x = m + 1.0;
    let mut shift = 0.0;
    while x < SERIES_THRESHOLD {
        shift += x.ln();
        x += 1.0;
    }
    Ok(log_gamma_series(x) - shift)
}

/// Exact and asymptotic `log binom(an, bn)` over a list of `n`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AsymptoticReport {
    pub a: f64,
    pub b: f64,
    pub n_values: Vec<u64>,
    pub exact_log: Vec<f64>,
    pub approx_log: Vec<f64>,
    /// `n * |exact - approx|`.
    pub scaled_errors: Vec<f64>,
}

impl AsymptoticReport {
    pub fn abs_errors(&self) -> Vec<f64> {
        self.scaled_errors
            .iter()
            .zip(&self.n_values)
            .map(|(s, &n)| s / n as f64)
            .collect()
    }

    pub fn max_scaled_error(&self) -> f64 {
        self.scaled_errors.iter().copied().fold(0.0, f64::max)
    }
}

/// `Phi(b/a)` on `(0, 1)`.
fn entropy_real(x: f64) -> f64 {
    real_regulator(Complex64::new(x, 0.0)).expect("argument lies in (0, 1)")
}

/// Compares `log binom(an, bn)`, computed from log-factorials, with
/// `n a Phi(b/a) + log(a / (2 pi b (a - b) n)) / 2`.
pub fn binomial_asymptotic_check(
    a: f64,
    b: f64,
    ns: &[u64],
) -> Result<AsymptoticReport, AsymptoticsError> {
    if !(a > b && b > 0.0) || !a.is_finite() {
        return domain(format!("need a > b > 0, got a = {a}, b = {b}"));
    }
    let mut report = AsymptoticReport {
        a,
        b,
        n_values: Vec::with_capacity(ns.len()),
        exact_log: Vec::with_capacity(ns.len()),
        approx_log: Vec::with_capacity(ns.len()),
        scaled_errors: Vec::with_capacity(ns.len()),
    };
    for &n in ns {
        if n < 10 {
            return domain(format!("n must be at least 10, got {n}"));
        }
        let nf = n as f64;
        let exact = log_factorial(a * nf)? - log_factorial(b * nf)? - log_factorial((a - b) * nf)?;
        let approx = nf * a * entropy_real(b / a) + 0.5 * (a / (2.0 * PI * b * (a - b) * nf)).ln();
        report.n_values.push(n);
        report.exact_log.push(exact);
        report.approx_log.push(approx);
        report.scaled_errors.push(nf * (exact - approx).abs());
    }
    Ok(report)
}

/// Limit of the scaled error: `|1/a - 1/b - 1/(a - b)| / 12`.
pub fn leading_correction(a: f64, b: f64) -> f64 {
    ((1.0 / a - 1.0 / b - 1.0 / (a - b)) / 12.0).abs()
}

fn factorial(n: u64) -> BigUint {
    (2..=n).fold(BigUint::one(), |acc, k| acc * k)
}

/// `binom(n, k)` as an exact integer.
pub fn binomial(n: u64, k: u64) -> BigUint {
    if k > n {
        return BigUint::from(0u32);
    }
    let k = k.min(n - k);
    let mut acc = BigUint::one();
    for i in 0..k {
        acc = acc * (n - i) / (i + 1);
    }
    acc
}

fn scaled(r: Ratio<i64>, n: u64, name: &str) -> Result<u64, AsymptoticsError> {
    if *r.numer() <= 0 {
        return domain(format!("{name} must be positive, got {r}"));
    }
    let v = r * Ratio::from_integer(n as i64);
    if !v.is_integer() {
        return domain(format!("{name}*n = {v} is not an integer"));
    }
    Ok(*v.numer() as u64)
}

/// The three multibinomial expressions for `(a, b, c, n)`, all exact.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Multibinomials {
    /// `binom((a+b+c)n, an) * binom((b+c)n, bn)`.
    pub first: String,
    /// `binom((a+b+c)n, bn) * binom((a+c)n, an)`.
    pub second: String,
    /// `((a+b+c)n)! / ((an)! (bn)! (cn)!)`.
    pub multinomial: String,
}

/// Evaluates both products of binomials and the multinomial coefficient.
pub fn multibinomials(
    a: Ratio<i64>,
    b: Ratio<i64>,
    c: Ratio<i64>,
    n: u64,
) -> Result<Multibinomials, AsymptoticsError> {
    let (an, bn, cn) = (scaled(a, n, "a")?, scaled(b, n, "b")?, scaled(c, n, "c")?);
    let total = an + bn + cn;
    let first = binomial(total, an) * binomial(bn + cn, bn);
    let second = binomial(total, bn) * binomial(an + cn, an);
    let multinomial = factorial(total) / (factorial(an) * factorial(bn) * factorial(cn));
    Ok(Multibinomials {
        first: first.to_string(),
        second: second.to_string(),
        multinomial: multinomial.to_string(),
    })
}

/// Whether the three multibinomial expressions agree exactly.
pub fn associativity_check(
    a: Ratio<i64>,
    b: Ratio<i64>,
    c: Ratio<i64>,
    n: u64,
) -> Result<bool, AsymptoticsError> {
    let m = multibinomials(a, b, c, n)?;
    Ok(m.first == m.second && m.second == m.multinomial)
}

/// `|Phi(b) - Phi(a) + (1-b) Phi(a/(1-b)) - (1-a) Phi(b/(1-a))|` for
/// `a, b, a + b` in `(0, 1)`.
pub fn entropy_4term_check(a: f64, b: f64) -> Result<f64, AsymptoticsError> {
    let inside = |v: f64| v > 0.0 && v < 1.0;
    if !(inside(a) && inside(b) && inside(a + b)) {
        return domain(format!("need a, b, a + b in (0, 1), got a = {a}, b = {b}"));
    }
    let v = entropy_real(b) - entropy_real(a) + (1.0 - b) * entropy_real(a / (1.0 - b))
        - (1.0 - a) * entropy_real(b / (1.0 - a));
    Ok(v.abs())
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn rel(a: f64, b: f64) -> f64 {
        (a - b).abs() / b.abs()
    }

    #[test]
    fn small_factorials() {
        assert!((log_factorial(5.0).unwrap() - 120f64.ln()).abs() < 1e-14);
        assert!((log_factorial(10.0).unwrap() - 3628800f64.ln()).abs() < 1e-13);
        assert_eq!(log_factorial(1.0).unwrap(), 0.0);
        assert!(log_factorial(0.0).is_err());
        assert!(log_factorial(-1.5).is_err());
    }

    #[test]
    fn half_integers_match_gamma_of_half() {
        // Gamma(3/2) = sqrt(pi)/2, Gamma(7/2) = 15 sqrt(pi)/8.
        assert!((log_factorial(0.5).unwrap() - (PI.sqrt() / 2.0).ln()).abs() < 1e-10);
        assert!((log_factorial(2.5).unwrap() - (15.0 * PI.sqrt() / 8.0).ln()).abs() < 1e-10);
    }

    #[test]
    fn recurrence() {
        for m in [15.0, 100.0, 1000.0] {
            let d = log_factorial(m).unwrap() - log_factorial(m - 1.0).unwrap();
            assert!(rel(d, f64::ln(m)) < 1e-12, "m = {m}");
        }
    }

    #[test]
    fn large_half_integer_against_downward_recurrence() {
        // log Gamma(1001.5) from log Gamma(1001.5 + 4000) by peeling factors.
        let m = 1000.5;
        let k = 4000;
        let mut v = log_gamma_series(m + 1.0 + k as f64);
        for j in 0..k {
            v -= (m + 1.0 + j as f64).ln();
        }
        assert!(rel(log_factorial(m).unwrap(), v) < 1e-10);
    }

    #[test]
    fn central_binomial_specialisation() {
        let rep = binomial_asymptotic_check(2.0, 1.0, &[100]).unwrap();
        let expected = 200.0 * 2f64.ln() - 0.5 * (PI * 100.0).ln();
        assert!((rep.approx_log[0] - expected).abs() < 1e-10);
    }

    #[test]
    fn scaled_errors_approach_leading_correction() {
        for (a, b) in [(2.0, 1.0), (1.0, 1.0 / 3.0), (3.0, 1.0)] {
            let rep = binomial_asymptotic_check(a, b, &[100, 1000, 10000]).unwrap();
            let lim = leading_correction(a, b);
            for s in &rep.scaled_errors {
                assert!((s - lim).abs() < 0.01 * lim, "({a}, {b}): {s} vs {lim}");
            }
        }
        let rep = binomial_asymptotic_check(1.0, 1.0 / 3.0, &[3000]).unwrap();
        assert!((rep.exact_log[0] - rep.approx_log[0]).abs() < 1e-3);
        assert!(binomial_asymptotic_check(1.0, 2.0, &[100]).is_err());
        assert!(binomial_asymptotic_check(2.0, 1.0, &[5]).is_err());
    }

    #[test]
    fn multibinomial_examples() {
        let one = Ratio::from_integer(1);
        let m = multibinomials(one, one, one, 5).unwrap();
        assert_eq!(m.multinomial, "756756");
        assert!(associativity_check(one, one, one, 5).unwrap());
        assert_eq!(multibinomials(one, one, one, 1).unwrap().multinomial, "6");
        assert!(associativity_check(Ratio::from_integer(2), one, one, 3).unwrap());
        assert!(associativity_check(Ratio::new(1, 2), one, one, 3).is_err());
    }

    #[test]
    fn four_term_residuals() {
        assert!(entropy_4term_check(0.25, 0.5).unwrap() < 1e-12);
        assert!(entropy_4term_check(1.0 / 3.0, 1.0 / 3.0).unwrap() < 1e-15);
        assert!(entropy_4term_check(0.5, 0.5).is_err());
    }

    proptest! {
        #[test]
        fn four_term_antisymmetric_at_equal_arguments(a in 0.01f64..0.49) {
            prop_assert!(entropy_4term_check(a, a).unwrap() < 1e-15);
        }

        #[test]
        fn binomial_symmetry(n in 0u64..60, k in 0u64..60) {
            prop_assume!(k <= n);
            prop_assert_eq!(binomial(n, k), binomial(n, n - k));
        }
    }
}
