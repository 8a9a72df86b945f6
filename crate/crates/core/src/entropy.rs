//! The entropy function `-z log z - (1 - z) log(1 - z)` on the cut plane and
//! on the universal abelian cover, the real regulator, and analytic
//! continuation along curves.
//!
//! On the cover the value at `(z; p, q)` is
//! `Phi(z) - i*pi*p*z + i*pi*q*(1 - z)`, with `Phi` the principal-branch value.
//! Principal logarithms have their cut on `(-inf, 0]`; a point on a cut takes
//! the limit from the side recorded in its [`CutPoint`].

use std::f64::consts::PI;

use num_complex::Complex64;
use thiserror::Error;

use crate::cover::{CoverError, CoverPoint, Curve, Cut, CutPoint, PolyPath, PuncturedPoint, Side};

/// Numeric evaluation refuses points closer than this to `0` or `1`.
pub const NEAR_PUNCTURE: f64 = 1e-10;

/// Upper bound on the number of samples used by step-wise continuation.
pub const MAX_CONTINUATION_SAMPLES: usize = 1 << 20;

/// Largest admissible change of either logarithm between two samples.
pub const MAX_LOG_STEP: f64 = std::f64::consts::FRAC_PI_2;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum EntropyError {
    #[error("{0} is within {NEAR_PUNCTURE:e} of a puncture")]
    NearPuncture(Complex64),
    #[error("{0} is not real")]
    NotReal(Complex64),
    #[error("continuation needs more than {MAX_CONTINUATION_SAMPLES} samples to track the branch")]
    StepResolution,
    #[error(transparent)]
    Cover(#[from] CoverError),
}

const I_PI: Complex64 = Complex64::new(0.0, PI);

fn guard(z: Complex64) -> Result<(), EntropyError> {
    if z.norm() < NEAR_PUNCTURE || (Complex64::new(1.0, 0.0) - z).norm() < NEAR_PUNCTURE {
        Err(EntropyError::NearPuncture(z))
    } else {
        Ok(())
    }
}

/// Principal logarithm with argument in `(-pi, pi]`, independent of the sign
/// of a zero imaginary part.
pub fn principal_log(w: Complex64) -> Complex64 {
    if w.im == 0.0 {
        if w.re < 0.0 {
            Complex64::new((-w.re).ln(), PI)
        } else {
            Complex64::new(w.re.ln(), 0.0)
        }
    } else {
        w.ln()
    }
}

/// `Log z` at a cut-plane point, taking the side limit on `(-inf, 0)`.
pub fn log_z(base: &CutPoint) -> Complex64 {
    let z = base.z();
    match (base.cut(), base.side()) {
        (Some(Cut::Negative), Side::FromBelow) => Complex64::new((-z.re).ln(), -PI),
        (Some(Cut::Negative), _) => Complex64::new((-z.re).ln(), PI),
        _ => principal_log(z),
    }
}

/// `Log(1 - z)` at a cut-plane point, taking the side limit on `(1, inf)`.
/// Approaching `x > 1` from above means `1 - z` approaches `1 - x < 0` from
/// below.
pub fn log_one_minus_z(base: &CutPoint) -> Complex64 {
    let z = base.z();
    match (base.cut(), base.side()) {
        (Some(Cut::BeyondOne), Side::FromAbove) => Complex64::new((z.re - 1.0).ln(), -PI),
        (Some(Cut::BeyondOne), _) => Complex64::new((z.re - 1.0).ln(), PI),
        _ => principal_log(Complex64::new(1.0, 0.0) - z),
    }
}

fn entropy_from_logs(z: Complex64, log_z: Complex64, log_one_minus_z: Complex64) -> Complex64 {
    -z * log_z - (Complex64::new(1.0, 0.0) - z) * log_one_minus_z
}

/// `-z Log z - (1 - z) Log(1 - z)` with principal logarithms.
pub fn entropy_principal(z: PuncturedPoint) -> Result<Complex64, EntropyError> {
    let z = z.z();
    guard(z)?;
    let w = Complex64::new(1.0, 0.0) - z;
    Ok(entropy_from_logs(z, principal_log(z), principal_log(w)))
}

/// Principal-branch entropy at a cut-plane point, respecting its side.
pub fn entropy_cut(base: &CutPoint) -> Result<Complex64, EntropyError> {
    guard(base.z())?;
    Ok(entropy_from_logs(
        base.z(),
        log_z(base),
        log_one_minus_z(base),
    ))
}

/// The entropy on the cover: `Phi(z) - i*pi*p*z + i*pi*q*(1 - z)`.
pub fn entropy_cover(pt: &CoverPoint) -> Result<Complex64, EntropyError> {
    let z = pt.z();
    let phi = entropy_cut(&pt.base())?;
    Ok(phi - I_PI * (pt.p() as f64) * z + I_PI * (pt.q() as f64) * (Complex64::new(1.0, 0.0) - z))
}

/// `-x log|x| - (1 - x) log|1 - x|` for real `x` outside `{0, 1}`.
pub fn real_regulator(x: Complex64) -> Result<f64, EntropyError> {
    if x.im != 0.0 {
        return Err(EntropyError::NotReal(x));
    }
    PuncturedPoint::new(x)?;
    guard(x)?;
    let x = x.re;
    Ok(-x * x.abs().ln() - (1.0 - x) * (1.0 - x).abs().ln())
}

/// A determination of `(log z, log(1 - z))` at some point, i.e. a point of the
/// cover seen through its two logarithms.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct LogPair {
    pub log_z: Complex64,
    pub log_one_minus_z: Complex64,
}

impl LogPair {
    /// The logarithms of a cover point: `Log z + i*pi*p` and
    /// `Log(1 - z) - i*pi*q`.
    pub fn of(pt: &CoverPoint) -> LogPair {
        let base = pt.base();
        LogPair {
            log_z: log_z(&base) + I_PI * (pt.p() as f64),
            log_one_minus_z: log_one_minus_z(&base) - I_PI * (pt.q() as f64),
        }
    }

    /// `-z log z - (1 - z) log(1 - z)` with these logarithms.
    pub fn entropy(&self, z: Complex64) -> Complex64 {
        entropy_from_logs(z, self.log_z, self.log_one_minus_z)
    }

    /// Branch integers `(p, q)` of this determination relative to the
    /// principal one at `base`, rounded to the nearest even integers.
    pub fn branch_at(&self, base: &CutPoint) -> (i64, i64) {
        let p = ((self.log_z - log_z(base)).im / PI).round() as i64;
        let q = (-(self.log_one_minus_z - log_one_minus_z(base)).im / PI).round() as i64;
        (p, q)
    }
}

fn nearest_branch(previous: Complex64, w: Complex64) -> Complex64 {
    let l = principal_log(w);
    let k = ((previous.im - l.im) / std::f64::consts::TAU).round();
    l + Complex64::new(0.0, std::f64::consts::TAU * k)
}

fn try_continue<C: Curve>(
    start: LogPair,
    curve: &C,
    steps: usize,
) -> Result<Option<LogPair>, EntropyError> {
    let mut logs = start;
    for piece in 0..curve.pieces() {
        for j in 1..=steps {
            let z = curve.point(piece, j as f64 / steps as f64);
            guard(z)?;
            let next_z = nearest_branch(logs.log_z, z);
            let next_w = nearest_branch(logs.log_one_minus_z, Complex64::new(1.0, 0.0) - z);
            if (next_z - logs.log_z).norm() >= MAX_LOG_STEP
                || (next_w - logs.log_one_minus_z).norm() >= MAX_LOG_STEP
            {
                return Ok(None);
            }
            logs = LogPair {
                log_z: next_z,
                log_one_minus_z: next_w,
            };
        }
    }
    Ok(Some(logs))
}

/// Continues both logarithms along `curve` from `start`, choosing at every
/// sample the branch nearest the previous value.
///
/// Each piece is first cut into `steps` samples; the count doubles until no
/// step changes a logarithm by `pi/2` or more, or
/// [`MAX_CONTINUATION_SAMPLES`] would be exceeded.
pub fn continue_logs<C: Curve>(
    start: LogPair,
    curve: &C,
    steps: usize,
) -> Result<LogPair, EntropyError> {
    guard(curve.start())?;
    let mut steps = steps.max(1);
    loop {
        if steps.saturating_mul(curve.pieces()) > MAX_CONTINUATION_SAMPLES {
            return Err(EntropyError::StepResolution);
        }
        if let Some(logs) = try_continue(start, curve, steps)? {
            return Ok(logs);
        }
        steps *= 2;
    }
}

/// The entropy analytically continued along `path` from `start`.
///
/// This is an independent route to the value at the lifted endpoint: it
/// never looks at cut crossings, only at the continuity of the logarithms.
pub fn continue_entropy(
    start: &CoverPoint,
    path: &PolyPath,
    steps: usize,
) -> Result<Complex64, EntropyError> {
    if (path.first() - start.z()).norm() > crate::cover::VERTEX_MATCH_TOLERANCE {
        return Err(CoverError::StartMismatch {
            path_start: path.first(),
            point: start.z(),
        }
        .into());
    }
    let logs = continue_logs(LogPair::of(start), path, steps)?;
    Ok(logs.entropy(path.last()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cover::{circular_loop, continue_point, DeckVector};

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn pp(re: f64, im: f64) -> PuncturedPoint {
        PuncturedPoint::new(c(re, im)).unwrap()
    }

    fn close(a: Complex64, b: Complex64, tol: f64) -> bool {
        (a - b).norm() <= tol
    }

    #[test]
    fn principal_values() {
        let ln2 = std::f64::consts::LN_2;
        assert!(close(
            entropy_principal(pp(0.5, 0.0)).unwrap(),
            c(ln2, 0.0),
            1e-15
        ));
        let z = c(0.3, 0.4);
        let a = entropy_principal(PuncturedPoint::new(z).unwrap()).unwrap();
        let b = entropy_principal(PuncturedPoint::new(c(1.0, 0.0) - z).unwrap()).unwrap();
        assert!(close(a, b, 1e-15));
        assert!(entropy_principal(pp(1e-11, 0.0)).is_err());
    }

    #[test]
    fn second_derivative_matches_rational_function() {
        let h = 1e-5;
        for z in [c(0.2, 0.0), c(0.37, 0.0), c(0.5, 0.25), c(1.0 / 3.0, 0.0)] {
            let f = |w: Complex64| entropy_principal(PuncturedPoint::new(w).unwrap()).unwrap();
            let fd = (f(z + h) - f(z) * 2.0 + f(z - h)) / (h * h);
            let exact = -(c(1.0, 0.0) / z) - c(1.0, 0.0) / (c(1.0, 0.0) - z);
            assert!(
                (fd - exact).norm() / exact.norm() < 1e-5,
                "{z}: {fd} vs {exact}"
            );
        }
    }

    #[test]
    fn cover_values() {
        let ln2 = std::f64::consts::LN_2;
        let at = |re: f64, im: f64, p: i64, q: i64| {
            entropy_cover(&CoverPoint::at(c(re, im), p, q).unwrap()).unwrap()
        };
        assert!(close(at(0.5, 0.0, 0, 0), c(ln2, 0.0), 1e-15));
        assert!(close(at(0.5, 0.0, 2, 0), c(ln2, -PI), 1e-15));
        let d = at(0.3, 0.1, 2, -2) - at(0.3, 0.1, 0, 0);
        assert!(close(d, c(0.0, -2.0 * PI), 1e-12));
    }

    #[test]
    fn cover_symmetry_and_deck_shifts() {
        for &(re, im) in &[(0.3, 0.4), (-1.2, 0.7), (2.5, -0.3)] {
            let z = c(re, im);
            for p in (-4..=4).step_by(2) {
                for q in (-4..=4).step_by(2) {
                    let v = entropy_cover(&CoverPoint::at(z, p, q).unwrap()).unwrap();
                    let w =
                        entropy_cover(&CoverPoint::at(c(1.0, 0.0) - z, -q, -p).unwrap()).unwrap();
                    assert!(close(v, w, 1e-12));
                    let vp = entropy_cover(&CoverPoint::at(z, p + 2, q).unwrap()).unwrap();
                    assert!(close(vp - v, c(0.0, -2.0 * PI) * z, 1e-12));
                    let vq = entropy_cover(&CoverPoint::at(z, p, q + 2).unwrap()).unwrap();
                    assert!(close(vq - v, c(0.0, 2.0 * PI) * (c(1.0, 0.0) - z), 1e-12));
                }
            }
        }
    }

    #[test]
    fn cut_sides_agree_with_identification() {
        for x in [-3.0, -0.7, 1.5, 4.0] {
            let above =
                CoverPoint::new(CutPoint::new(c(x, 0.0), Side::FromAbove).unwrap(), 0, 0).unwrap();
            let below_shift = if x < 0.0 {
                DeckVector::new(2, 0)
            } else {
                DeckVector::new(0, 2)
            }
            .unwrap();
            let below = CoverPoint::new(CutPoint::new(c(x, 0.0), Side::FromBelow).unwrap(), 0, 0)
                .unwrap()
                .deck_act(below_shift);
            let a = entropy_cover(&above).unwrap();
            let b = entropy_cover(&below).unwrap();
            assert!(close(a, b, 1e-12), "x = {x}: {a} vs {b}");
            // The side limit agrees with evaluation just off the axis.
            let eps = 1e-9;
            let near = entropy_principal(pp(x, eps)).unwrap();
            assert!(close(a, near, 1e-7));
        }
    }

    #[test]
    fn real_regulator_values() {
        let ln2 = std::f64::consts::LN_2;
        assert!((real_regulator(c(0.5, 0.0)).unwrap() - ln2).abs() < 1e-15);
        assert!((real_regulator(c(2.0, 0.0)).unwrap() + 2.0 * ln2).abs() < 1e-15);
        assert!(matches!(
            real_regulator(c(0.5, 0.1)),
            Err(EntropyError::NotReal(_))
        ));
        assert!(real_regulator(c(1.0, 0.0)).is_err());
        let r = real_regulator(c(-0.7, 0.0)).unwrap();
        for side in [Side::FromAbove, Side::FromBelow] {
            for p in (-6..=6).step_by(2) {
                for q in (-6..=6).step_by(2) {
                    let pt =
                        CoverPoint::new(CutPoint::new(c(-0.7, 0.0), side).unwrap(), p, q).unwrap();
                    assert!((entropy_cover(&pt).unwrap().re - r).abs() < 1e-12);
                }
            }
        }
    }

    #[test]
    fn continuation_along_loops_matches_closed_form() {
        let start = CoverPoint::at(c(0.5, 0.0), 0, 0).unwrap();
        let constant = PolyPath::constant(c(0.5, 0.0)).unwrap();
        let v = continue_entropy(&start, &constant, 4).unwrap();
        assert!(close(v, c(std::f64::consts::LN_2, 0.0), 1e-15));

        // A counterclockwise turn around 0 lands on (0.5; 2, 0).
        let ccw = circular_loop(c(0.5, 0.0), c(0.0, 0.0), 0.25, 1, 64).unwrap();
        let v = continue_entropy(&start, &ccw, 4).unwrap();
        assert!(close(v, c(std::f64::consts::LN_2, -PI), 1e-12));
        let lifted = continue_point(&start, &ccw).unwrap();
        assert_eq!(lifted, CoverPoint::at(c(0.5, 0.0), 2, 0).unwrap());

        // A clockwise turn goes the other way.
        let cw = circular_loop(c(0.5, 0.0), c(0.0, 0.0), 0.25, -1, 64).unwrap();
        let v = continue_entropy(&start, &cw, 4).unwrap();
        assert!(close(v, c(std::f64::consts::LN_2, PI), 1e-12));
    }

    #[test]
    fn continuation_refines_coarse_steps() {
        let start = CoverPoint::at(c(0.5, 0.0), 0, 0).unwrap();
        let big = PolyPath::new(vec![
            c(0.5, 0.0),
            c(0.5, 3.0),
            c(-3.0, 0.5),
            c(-3.0, -0.5),
            c(0.5, -3.0),
            c(0.5, 0.0),
        ])
        .unwrap();
        let v = continue_entropy(&start, &big, 1).unwrap();
        let end = continue_point(&start, &big).unwrap();
        assert!(close(v, entropy_cover(&end).unwrap(), 1e-10));
    }

    #[test]
    fn continuation_rejects_mismatched_start() {
        let start = CoverPoint::at(c(0.4, 0.0), 0, 0).unwrap();
        let p = PolyPath::constant(c(0.5, 0.0)).unwrap();
        assert!(matches!(
            continue_entropy(&start, &p, 4),
            Err(EntropyError::Cover(CoverError::StartMismatch { .. }))
        ));
    }

    #[test]
    fn log_pair_recovers_branch() {
        let pt = CoverPoint::at(c(-0.4, 0.3), 4, -6).unwrap();
        assert_eq!(LogPair::of(&pt).branch_at(&pt.base()), (4, -6));
    }
}
