//! Maps out of and into the extended group: the regulator, the projection
//! `pi` to `beta_2`, the inclusion `chi` of the kernel, and the named kernel
//! elements.

use num_complex::Complex64;

use super::{Coefficient, FormalSum, Generator, Group, ModuleError};
use crate::entropy::entropy_cover;

/// Argument at which `chi` places its kernel element.
pub const CHI_BASE: (i64, i64) = (1, 2);

fn require_ext<K: Coefficient>(sum: &FormalSum<K>) -> Result<(), ModuleError> {
    if sum.group() != Group::ExtBeta2 {
        return Err(ModuleError::GroupMismatch {
            expected: Group::ExtBeta2,
            found: sum.group(),
        });
    }
    Ok(())
}

/// The regulator `sum c_i <z_i;p_i,q_i>  |->  sum c_i Phi(z_i;p_i,q_i)`.
pub fn regulator<K: Coefficient>(sum: &FormalSum<K>) -> Result<Complex64, ModuleError> {
    require_ext(sum)?;
    let mut total = Complex64::new(0.0, 0.0);
    for (g, c) in sum.terms() {
        let pt = g
            .cover_point()
            .ok_or_else(|| ModuleError::DegenerateArgument(g.to_string()))?;
        total += c.to_complex() * entropy_cover(&pt)?;
    }
    Ok(total)
}

/// `<x;p,q>  |->  <x>`.
pub fn pi_map<K: Coefficient>(sum: &FormalSum<K>) -> Result<FormalSum<K>, ModuleError> {
    require_ext(sum)?;
    let mut out = FormalSum::zero(Group::Beta2);
    for (g, c) in sum.terms() {
        out.add_term(Generator::beta2(g.arg().clone())?, c.clone())?;
    }
    Ok(out)
}

/// `c_x = <x;2,-2> - <x;0,0>`.
pub fn kernel_c<K: Coefficient>(x: K) -> Result<FormalSum<K>, ModuleError> {
    FormalSum::from_terms(
        Group::ExtBeta2,
        [
            (K::one(), Generator::ext(x.clone(), 2, -2)?),
            (-K::one(), Generator::ext(x, 0, 0)?),
        ],
    )
}

/// `z * c_x` at the fixed argument `x = 1/2`.
pub fn chi_map<K: Coefficient>(z: K) -> FormalSum<K> {
    let base = K::from_ratio(CHI_BASE.0, CHI_BASE.1);
    kernel_c(base).expect("1/2 is a valid argument").scale(&z)
}

/// `{x} = -(<x;0,2> - <x;0,0>) / (1 - x)`.
pub fn bracket<K: Coefficient>(x: K) -> Result<FormalSum<K>, ModuleError> {
    let diff = FormalSum::from_terms(
        Group::ExtBeta2,
        [
            (K::one(), Generator::ext(x.clone(), 0, 2)?),
            (-K::one(), Generator::ext(x.clone(), 0, 0)?),
        ],
    )?;
    Ok(diff.scale(&(-K::one() / (K::one() - x))))
}

/// `<x;p,q>` written in the basis `<x;2,2>, <x;2,0>, <x;0,2>, <x;0,0>`:
/// `(pq <x;2,2> - p(q-2) <x;2,0> - q(p-2) <x;0,2> + (pq-2p-2q+4) <x;0,0>) / 4`.
pub fn lemma2_expand<K: Coefficient>(x: K, p: i64, q: i64) -> Result<FormalSum<K>, ModuleError> {
    if p % 2 != 0 || q % 2 != 0 {
        return Err(ModuleError::OddBranch { p, q });
    }
    let c = |n: i64| K::from_ratio(n, 4);
    FormalSum::from_terms(
        Group::ExtBeta2,
        [
            (c(p * q), Generator::ext(x.clone(), 2, 2)?),
            (c(-p * (q - 2)), Generator::ext(x.clone(), 2, 0)?),
            (c(-q * (p - 2)), Generator::ext(x.clone(), 0, 2)?),
            (c(p * q - 2 * p - 2 * q + 4), Generator::ext(x, 0, 0)?),
        ],
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::modules::GaussRat;
    use std::f64::consts::PI;

    fn r(n: i64, d: i64) -> GaussRat {
        GaussRat::real(n, d)
    }

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn regulator_basics() {
        let half = FormalSum::single(Generator::ext(r(1, 2), 0, 0).unwrap(), r(1, 1));
        assert!((regulator(&half).unwrap() - c(2f64.ln(), 0.0)).norm() < 1e-15);
        let cx = kernel_c(r(1, 3)).unwrap();
        assert!((regulator(&cx).unwrap() - c(0.0, -2.0 * PI)).norm() < 1e-12);
        let b2 = FormalSum::single(Generator::beta2(r(1, 2)).unwrap(), r(1, 1));
        assert!(regulator(&b2).is_err());
    }

    #[test]
    fn pi_kills_kernel_and_forgets_branches() {
        let g = FormalSum::single(Generator::ext(r(1, 3), 2, -2).unwrap(), r(1, 1));
        assert_eq!(
            pi_map(&g).unwrap(),
            FormalSum::single(Generator::beta2(r(1, 3)).unwrap(), r(1, 1))
        );
        assert!(pi_map(&kernel_c(r(1, 3)).unwrap()).unwrap().is_zero());
        let z = GaussRat::from_parts(3, 1, 2, 1);
        assert!(pi_map(&chi_map(z)).unwrap().is_zero());
    }

    #[test]
    fn chi_of_one() {
        let s = chi_map(r(1, 1));
        assert_eq!(s, kernel_c(r(1, 2)).unwrap());
        assert!((regulator(&s).unwrap() - c(0.0, -2.0 * PI)).norm() < 1e-12);
    }

    #[test]
    fn bracket_regulates_like_c() {
        for x in [c(0.3, 0.0), c(-1.5, 0.0), c(2.5, 0.0), c(0.2, 0.7)] {
            let v = regulator(&bracket(x).unwrap()).unwrap();
            assert!((v - c(0.0, -2.0 * PI)).norm() < 1e-12, "{x}: {v}");
        }
    }

    #[test]
    fn lemma2_examples() {
        let x = r(1, 3);
        let g = |p, q| Generator::ext(x.clone(), p, q).unwrap();
        assert_eq!(
            lemma2_expand(x.clone(), 0, 0).unwrap(),
            FormalSum::single(g(0, 0), r(1, 1))
        );
        assert_eq!(
            lemma2_expand(x.clone(), 2, 2).unwrap(),
            FormalSum::single(g(2, 2), r(1, 1))
        );
        let e = lemma2_expand(x.clone(), 4, 2).unwrap();
        let expected =
            FormalSum::from_terms(Group::ExtBeta2, [(r(2, 1), g(2, 2)), (r(-1, 1), g(0, 2))])
                .unwrap();
        assert_eq!(e, expected);
    }

    #[test]
    fn lemma2_expansion_has_equal_regulator() {
        let x = c(0.4, -0.3);
        for p in (-6..=6).step_by(2) {
            for q in (-6..=6).step_by(2) {
                let lhs = FormalSum::single(Generator::ext(x, p, q).unwrap(), c(1.0, 0.0));
                let d =
                    regulator(&lhs).unwrap() - regulator(&lemma2_expand(x, p, q).unwrap()).unwrap();
                assert!(d.norm() < 1e-12);
            }
        }
    }
}
