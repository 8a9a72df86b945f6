//! 4-term tuples `(y, x, x/(1-y), y/(1-x))`, their lifts to the cover, the
//! lattice of branch shifts, and monodromy transport.
//!
//! The lift of a tuple with all four coordinates in the upper half-plane (or
//! real with `0 < y < x < x + y < 1`) at zero branch data lies on the component
//! where the entropy satisfies the 4-term relation. Every other point of that
//! component over the same base tuple is obtained by a branch shift
//!
//! ```text
//! ((p0, q0), (p1, q1), (q0 + p1, r - q0), (p0 + q1, r - q1))
//! ```
//!
//! with `p0, q0, p1, q1, r` even. These are exactly the shifts reached by
//! moving `y` around `0`, `1` and `1 - x`, then `x` around `0` and `1`; see
//! [`monodromy_paths`] and [`transport_numerically`].

use num_complex::Complex64;
use rand::Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::cover::{circular_loop, CoverError, CoverPoint, Curve, DeckVector, PolyPath};
use crate::entropy::{continue_logs, EntropyError, LogPair};
use crate::modules::{Coefficient, FormalSum, Generator, Group, ModuleError};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum FourTermError {
    #[error("degenerate 4-term tuple ({x0}, {x1}): a coordinate hits 0, 1 or a pole")]
    Degenerate { x0: String, x1: String },
    #[error("base tuple is neither in the upper half-plane nor in the real ordered chamber")]
    OutsideBaseRegion,
    #[error("lattice parameters must be even")]
    OddParameter,
    #[error(transparent)]
    Cover(#[from] CoverError),
    #[error(transparent)]
    Entropy(#[from] EntropyError),
    #[error(transparent)]
    Module(#[from] ModuleError),
}

/// A 4-term tuple given by its generating pair `(x0, x1) = (y, x)`. The other
/// two coordinates are always recomputed.
#[derive(Debug, Clone, PartialEq)]
pub struct FourTuple<K = Complex64> {
    x0: K,
    x1: K,
}

impl<K: Coefficient> FourTuple<K> {
    pub fn new(x0: K, x1: K) -> Result<Self, FourTermError> {
        let one = K::one();
        let bad = x0.is_zero()
            || x0.is_one()
            || x1.is_zero()
            || x1.is_one()
            || (one - x0.clone() - x1.clone()).is_zero();
        if bad {
            return Err(FourTermError::Degenerate {
                x0: x0.to_string(),
                x1: x1.to_string(),
            });
        }
        Ok(FourTuple { x0, x1 })
    }

    pub fn x0(&self) -> &K {
        &self.x0
    }

    pub fn x1(&self) -> &K {
        &self.x1
    }

    /// `x1 / (1 - x0)`.
    pub fn x2(&self) -> K {
        self.x1.clone() / (K::one() - self.x0.clone())
    }

    /// `x0 / (1 - x1)`.
    pub fn x3(&self) -> K {
        self.x0.clone() / (K::one() - self.x1.clone())
    }

    pub fn coords(&self) -> [K; 4] {
        [self.x0.clone(), self.x1.clone(), self.x2(), self.x3()]
    }

    /// Coefficients of the relation: `1, -1, 1 - x0, -(1 - x1)`.
    pub fn relation_coefficients(&self) -> [K; 4] {
        [
            K::one(),
            -K::one(),
            K::one() - self.x0.clone(),
            -(K::one() - self.x1.clone()),
        ]
    }

    pub fn to_complex(&self) -> FourTuple<Complex64> {
        FourTuple {
            x0: self.x0.to_complex(),
            x1: self.x1.to_complex(),
        }
    }
}

/// `x0, x1` real with `0 < x0 < x1 < x0 + x1 < 1`.
pub fn in_4t0<K: Coefficient>(t: &FourTuple<K>) -> bool {
    let (a, b) = (t.x0.to_complex(), t.x1.to_complex());
    a.im == 0.0 && b.im == 0.0 && 0.0 < a.re && a.re < b.re && a.re + b.re < 1.0
}

/// All four coordinates have strictly positive imaginary part.
pub fn in_4t_plus<K: Coefficient>(t: &FourTuple<K>) -> bool {
    t.coords().iter().all(|c| c.to_complex().im > 0.0)
}

/// Even integers `p0, q0, p1, q1, r` parametrising the branch lattice.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
pub struct LatticeParams {
    pub p0: i64,
    pub q0: i64,
    pub p1: i64,
    pub q1: i64,
    pub r: i64,
}

/// Branch data of the four coordinates.
pub type Branch = [DeckVector; 4];

/// Sign pattern for the first entries of the third and fourth slots.
///
/// Only [`LatticeForm::PlusPlus`] is the branch lattice of the relation; the
/// other two are kept so that the alternatives can be evaluated side by side.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum LatticeForm {
    /// `(q0 + p1, r - q0)`, `(p0 + q1, r - q1)`.
    PlusPlus,
    /// `(-q0 + p1, r - q0)`, `(p0 + q1, r - q1)`.
    MinusPlus,
    /// `(-q0 + p1, r - q0)`, `(p0 - q1, r - q1)`.
    MinusMinus,
}

impl LatticeForm {
    pub const ALL: [LatticeForm; 3] = [
        LatticeForm::PlusPlus,
        LatticeForm::MinusPlus,
        LatticeForm::MinusMinus,
    ];
}

impl LatticeParams {
    pub fn new(p0: i64, q0: i64, p1: i64, q1: i64, r: i64) -> Result<Self, FourTermError> {
        if [p0, q0, p1, q1, r].iter().any(|v| v % 2 != 0) {
            return Err(FourTermError::OddParameter);
        }
        Ok(LatticeParams { p0, q0, p1, q1, r })
    }

    pub fn is_even(&self) -> bool {
        [self.p0, self.q0, self.p1, self.q1, self.r]
            .iter()
            .all(|v| v % 2 == 0)
    }

    pub fn branch(&self, form: LatticeForm) -> Branch {
        let LatticeParams { p0, q0, p1, q1, r } = *self;
        let (s2, s3) = match form {
            LatticeForm::PlusPlus => (1, 1),
            LatticeForm::MinusPlus => (-1, 1),
            LatticeForm::MinusMinus => (-1, -1),
        };
        let d = |a: i64, b: i64| DeckVector::new(a, b).expect("even parameters give even entries");
        [
            d(p0, q0),
            d(p1, q1),
            d(s2 * q0 + p1, r - q0),
            d(p0 + s3 * q1, r - q1),
        ]
    }

    /// Every parameter drawn uniformly from the even integers in `[-bound, bound]`.
    pub fn sample<R: Rng + ?Sized>(rng: &mut R, bound: i64) -> LatticeParams {
        let half = bound.abs() / 2;
        let mut e = || 2 * rng.gen_range(-half..=half);
        LatticeParams {
            p0: e(),
            q0: e(),
            p1: e(),
            q1: e(),
            r: e(),
        }
    }
}

/// The lattice vector for `params`.
pub fn lattice_vector(params: &LatticeParams) -> Branch {
    params.branch(LatticeForm::PlusPlus)
}

/// Recovers the parameters of a branch shift, or `None` if it is not in the
/// lattice.
pub fn lattice_params_of(branch: &Branch) -> Option<LatticeParams> {
    let (p0, q0) = (branch[0].dp(), branch[0].dq());
    let (p1, q1) = (branch[1].dp(), branch[1].dq());
    let r = branch[2].dq() + q0;
    let params = LatticeParams::new(p0, q0, p1, q1, r).ok()?;
    (lattice_vector(&params) == *branch).then_some(params)
}

/// A 4-term tuple lifted to the component of the relation.
#[derive(Debug, Clone, PartialEq)]
pub struct ExtendedFourTuple<K = Complex64> {
    base: FourTuple<K>,
    branch: Branch,
}

impl<K: Coefficient> ExtendedFourTuple<K> {
    pub fn base(&self) -> &FourTuple<K> {
        &self.base
    }

    pub fn branch(&self) -> &Branch {
        &self.branch
    }

    pub fn params(&self) -> LatticeParams {
        lattice_params_of(&self.branch).expect("branch data stays in the lattice")
    }
}

/// Lifts `t` at zero branch data and shifts it by `params`.
///
/// The base must lie in the upper half-plane chamber or in the real ordered
/// chamber; lifts over other parts of the preimage are not produced.
pub fn extended_tuple<K: Coefficient>(
    t: &FourTuple<K>,
    params: &LatticeParams,
) -> Result<ExtendedFourTuple<K>, FourTermError> {
    if !params.is_even() {
        return Err(FourTermError::OddParameter);
    }
    if !(in_4t_plus(t) || in_4t0(t)) {
        return Err(FourTermError::OutsideBaseRegion);
    }
    Ok(ExtendedFourTuple {
        base: t.clone(),
        branch: lattice_vector(params),
    })
}

/// `<x0;b0> - <x1;b1> + (1 - x0)<x2;b2> - (1 - x1)<x3;b3>` for arbitrary
/// branch data, whether or not it is a relation.
pub fn relation_sum_with_branch<K: Coefficient>(
    t: &FourTuple<K>,
    branch: &Branch,
) -> Result<FormalSum<K>, FourTermError> {
    let mut sum = FormalSum::zero(Group::ExtBeta2);
    for ((x, c), b) in t
        .coords()
        .into_iter()
        .zip(t.relation_coefficients())
        .zip(branch)
    {
        sum.add_term(Generator::ext(x, b.dp(), b.dq())?, c)?;
    }
    Ok(sum)
}

/// The extended 4-term relation of `et`, as a formal sum that vanishes in the
/// extended group.
pub fn relation_sum<K: Coefficient>(et: &ExtendedFourTuple<K>) -> FormalSum<K> {
    relation_sum_with_branch(&et.base, &et.branch).expect("validated tuple gives valid generators")
}

/// Which branch integer a transfer relation moves.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum TransferKind {
    /// `<x;p,q> - <x;p',q> = <x;p-2,q> - <x;p'-2,q>`.
    P,
    /// `<x;p,q> - <x;p,q'> = <x;p,q-2> - <x;p,q'-2>`.
    Q,
}

/// The transfer relation at `x`; `other` is `p'` for [`TransferKind::P`] and
/// `q'` for [`TransferKind::Q`].
pub fn transfer_relation_sum<K: Coefficient>(
    x: &K,
    kind: TransferKind,
    p: i64,
    q: i64,
    other: i64,
) -> Result<FormalSum<K>, ModuleError> {
    let g = |p: i64, q: i64| Generator::ext(x.clone(), p, q);
    let one = K::one;
    let terms = match kind {
        TransferKind::P => [
            (one(), g(p, q)?),
            (-one(), g(other, q)?),
            (-one(), g(p - 2, q)?),
            (one(), g(other - 2, q)?),
        ],
        TransferKind::Q => [
            (one(), g(p, q)?),
            (-one(), g(p, other)?),
            (-one(), g(p, q - 2)?),
            (one(), g(p, other - 2)?),
        ],
    };
    FormalSum::from_terms(Group::ExtBeta2, terms)
}

/// Samples a tuple with `x0, x1` uniform in `[0.1, 0.9] + [0.1, 0.9] i`,
/// rejecting until all four coordinates lie in the upper half-plane.
pub fn sample_upper_tuple<R: Rng + ?Sized>(rng: &mut R) -> FourTuple<Complex64> {
    loop {
        let mut draw = || Complex64::new(rng.gen_range(0.1..=0.9), rng.gen_range(0.1..=0.9));
        let (x0, x1) = (draw(), draw());
        if let Ok(t) = FourTuple::new(x0, x1) {
            if in_4t_plus(&t) {
                return t;
            }
        }
    }
}

/// Segments per turn of the circular loops used for transport.
pub const LOOP_SEGMENTS: usize = 64;

fn loop_radius(anchor: Complex64, center: Complex64, others: &[Complex64]) -> f64 {
    let mut d = (anchor - center).norm();
    for &o in others {
        d = d.min((center - o).norm());
    }
    0.25 * d
}

fn loop_sequence(
    anchor: Complex64,
    loops: &[(Complex64, i64)],
    branch_points: &[Complex64],
) -> Result<PolyPath, CoverError> {
    let mut path = PolyPath::constant(anchor)?;
    for &(center, turns) in loops {
        if turns == 0 {
            continue;
        }
        let others: Vec<_> = branch_points
            .iter()
            .copied()
            .filter(|&b| b != center)
            .collect();
        let radius = loop_radius(anchor, center, &others);
        path = path.concat(&circular_loop(
            anchor,
            center,
            radius,
            turns,
            LOOP_SEGMENTS,
        )?)?;
    }
    Ok(path)
}

/// Closed paths realising `loops` as motions of the generating pair.
///
/// The first path moves `x0` with `x1` fixed: `p0/2` counterclockwise turns
/// around `0`, then `q0/2` clockwise turns around `1`, then `r/2` clockwise
/// turns around `1 - x1`. The second moves `x1` with `x0` fixed: `p1/2`
/// counterclockwise turns around `0`, then `q1/2` clockwise turns around `1`.
/// Each turn is a small circle reached along a straight spoke from the base
/// point.
pub fn monodromy_paths(
    t: &FourTuple<Complex64>,
    loops: &LatticeParams,
) -> Result<(PolyPath, PolyPath), FourTermError> {
    if !loops.is_even() {
        return Err(FourTermError::OddParameter);
    }
    let one = Complex64::new(1.0, 0.0);
    let zero = Complex64::new(0.0, 0.0);
    let (x0, x1) = (t.x0, t.x1);
    let first = loop_sequence(
        x0,
        &[
            (zero, loops.p0 / 2),
            (one, -loops.q0 / 2),
            (one - x1, -loops.r / 2),
        ],
        &[zero, one, one - x1],
    )?;
    let second = loop_sequence(
        x1,
        &[(zero, loops.p1 / 2), (one, -loops.q1 / 2)],
        &[zero, one, one - x0],
    )?;
    Ok((first, second))
}

/// Branch data reached by transporting the zero lift of `t` along the loops
/// described by `loops` (see [`monodromy_paths`]).
pub fn monodromy_transport<K: Coefficient>(
    t: &FourTuple<K>,
    loops: &LatticeParams,
) -> Result<ExtendedFourTuple<K>, FourTermError> {
    extended_tuple(t, loops)
}

/// Continues `(log, log(1 - .))` of all four coordinates of `t`, starting at
/// their principal values, while `x0` and then `x1` run along the paths of
/// [`monodromy_paths`]. Uses only step-wise branch tracking.
pub fn transport_numerically(
    t: &FourTuple<Complex64>,
    loops: &LatticeParams,
    steps: usize,
) -> Result<[LogPair; 4], FourTermError> {
    let (first, second) = monodromy_paths(t, loops)?;
    let one = Complex64::new(1.0, 0.0);
    let (x0, x1) = (t.x0, t.x1);
    let mut cur = [LogPair::default(); 4];
    for (slot, z) in cur.iter_mut().zip(t.coords()) {
        *slot = LogPair::of(&CoverPoint::at(z, 0, 0)?);
    }

    // Phase one: x0 moves.
    cur[0] = continue_logs(cur[0], &first, steps)?;
    cur[2] = continue_logs(cur[2], &(&first).map(move |y| x1 / (one - y)), steps)?;
    cur[3] = continue_logs(cur[3], &(&first).map(move |y| y / (one - x1)), steps)?;
    // Phase two: x1 moves, x0 is back at its base point.
    cur[1] = continue_logs(cur[1], &second, steps)?;
    cur[2] = continue_logs(cur[2], &(&second).map(move |x| x / (one - x0)), steps)?;
    cur[3] = continue_logs(cur[3], &(&second).map(move |x| x0 / (one - x)), steps)?;
    Ok(cur)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::entropy::entropy_cover;
    use crate::modules::{regulator, GaussRat};
    use rand::SeedableRng;
    use rand_xoshiro::Xoshiro256PlusPlus;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn d(a: i64, b: i64) -> DeckVector {
        DeckVector::new(a, b).unwrap()
    }

    #[test]
    fn chamber_membership() {
        assert!(in_4t0(&FourTuple::new(c(0.2, 0.0), c(0.3, 0.0)).unwrap()));
        assert!(!in_4t0(&FourTuple::new(c(0.3, 0.0), c(0.2, 0.0)).unwrap()));
        assert!(!in_4t0(&FourTuple::new(c(0.2, 0.1), c(0.3, 0.0)).unwrap()));
        let t = FourTuple::new(c(0.2, 0.2), c(0.3, 0.2)).unwrap();
        // x2 = (0.2 + 0.22i)/0.68 and x3 = (0.2 + 0.2i)(0.7 + 0.2i)/0.53.
        assert!((t.x2() - c(0.2 / 0.68, 0.22 / 0.68)).norm() < 1e-15);
        assert!((t.x3() - c(0.1 / 0.53, 0.18 / 0.53)).norm() < 1e-15);
        assert!(in_4t_plus(&t));
        assert!(!in_4t_plus(
            &FourTuple::new(c(0.2, 0.0), c(0.3, 0.0)).unwrap()
        ));
        assert!(!in_4t_plus(
            &FourTuple::new(c(0.2, 0.2), c(0.3, -0.2)).unwrap()
        ));
    }

    #[test]
    fn degenerate_tuples_are_rejected() {
        assert!(FourTuple::new(c(0.0, 0.0), c(0.3, 0.0)).is_err());
        assert!(FourTuple::new(c(0.4, 0.0), c(0.6, 0.0)).is_err());
        assert!(FourTuple::new(GaussRat::real(1, 3), GaussRat::real(2, 3)).is_err());
    }

    #[test]
    fn lattice_vectors() {
        let v = |p0, q0, p1, q1, r| lattice_vector(&LatticeParams::new(p0, q0, p1, q1, r).unwrap());
        assert_eq!(v(0, 0, 0, 0, 0), [DeckVector::ZERO; 4]);
        assert_eq!(v(2, 0, 0, 0, -2), [d(2, 0), d(0, 0), d(0, -2), d(2, -2)]);
        assert_eq!(v(0, 2, 0, 0, 2), [d(0, 2), d(0, 0), d(2, 0), d(0, 2)]);
        let p = LatticeParams::new(0, 2, 0, 0, 2).unwrap();
        assert_eq!(
            p.branch(LatticeForm::MinusMinus),
            [d(0, 2), d(0, 0), d(-2, 0), d(0, 2)]
        );
        assert_eq!(
            lattice_params_of(&v(4, -2, 6, 2, -8)),
            Some(LatticeParams::new(4, -2, 6, 2, -8).unwrap())
        );
        assert_eq!(
            lattice_params_of(&[d(0, 2), d(0, 0), d(-2, 0), d(-2, 0)]),
            None
        );
        assert!(LatticeParams::new(1, 0, 0, 0, 0).is_err());
    }

    #[test]
    fn extended_tuple_requires_base_region() {
        let t = FourTuple::new(c(0.2, 0.2), c(0.3, 0.2)).unwrap();
        let zero = LatticeParams::default();
        assert_eq!(
            extended_tuple(&t, &zero).unwrap().branch(),
            &[DeckVector::ZERO; 4]
        );
        let p = LatticeParams::new(2, 0, 0, 0, -2).unwrap();
        assert_eq!(
            extended_tuple(&t, &p).unwrap().branch(),
            &[d(2, 0), d(0, 0), d(0, -2), d(2, -2)]
        );
        let low = FourTuple::new(c(0.2, -0.2), c(0.3, 0.2)).unwrap();
        assert_eq!(
            extended_tuple(&low, &zero),
            Err(FourTermError::OutsideBaseRegion)
        );
    }

    #[test]
    fn relation_sum_coefficients_and_regulator() {
        let t = FourTuple::new(c(0.2, 0.2), c(0.3, 0.2)).unwrap();
        let et = extended_tuple(&t, &LatticeParams::default()).unwrap();
        let s = relation_sum(&et);
        let coords = t.coords();
        let expected = [
            c(1.0, 0.0),
            c(-1.0, 0.0),
            c(1.0, 0.0) - coords[0],
            -(c(1.0, 0.0) - coords[1]),
        ];
        for (x, k) in coords.iter().zip(expected) {
            assert_eq!(s.coefficient(&Generator::ext(*x, 0, 0).unwrap()), k);
        }
        assert!(regulator(&s).unwrap().norm() < 1e-12);

        let et = extended_tuple(&t, &LatticeParams::new(0, 2, 0, 0, 2).unwrap()).unwrap();
        assert_eq!(et.branch(), &[d(0, 2), d(0, 0), d(2, 0), d(0, 2)]);
        assert!(regulator(&relation_sum(&et)).unwrap().norm() < 1e-12);
    }

    #[test]
    fn only_plus_plus_form_is_annihilated() {
        let t = FourTuple::new(c(0.25, 0.3), c(0.4, 0.15)).unwrap();
        let p = LatticeParams::new(2, 4, -2, 2, 6).unwrap();
        for form in LatticeForm::ALL {
            let s = relation_sum_with_branch(&t, &p.branch(form)).unwrap();
            let r = regulator(&s).unwrap().norm();
            assert_eq!(r < 1e-10, form == LatticeForm::PlusPlus, "{form:?}: {r}");
        }
    }

    #[test]
    fn derived_coordinates_satisfy_their_definitions() {
        let mut rng = Xoshiro256PlusPlus::seed_from_u64(7);
        for _ in 0..200 {
            let t = sample_upper_tuple(&mut rng);
            let one = c(1.0, 0.0);
            let (x0, x1) = (*t.x0(), *t.x1());
            assert!((t.x2() * (one - x0) - x1).norm() <= 1e-14 * x1.norm());
            assert!((t.x3() * (one - x1) - x0).norm() <= 1e-14 * x0.norm());
        }
    }

    #[test]
    fn transfer_sums() {
        let x = GaussRat::real(1, 2);
        let s = transfer_relation_sum(&x, TransferKind::Q, 0, 2, 0).unwrap();
        let g = |p, q| Generator::ext(x.clone(), p, q).unwrap();
        // <x;0,2> - <x;0,0> - <x;0,0> + <x;0,-2>
        assert_eq!(s.len(), 3);
        assert_eq!(s.coefficient(&g(0, 2)), GaussRat::one());
        assert_eq!(s.coefficient(&g(0, 0)), GaussRat::from_i64(-2));
        assert_eq!(s.coefficient(&g(0, -2)), GaussRat::one());
        assert!(transfer_relation_sum(&x, TransferKind::P, 4, 2, 4)
            .unwrap()
            .is_zero());
        for kind in [TransferKind::P, TransferKind::Q] {
            let s = transfer_relation_sum(&c(-0.3, 0.8), kind, 4, -2, -6).unwrap();
            assert!(regulator(&s).unwrap().norm() < 1e-12);
        }
    }

    #[test]
    fn transport_without_second_phase_moves_only_expected_slots() {
        let t = FourTuple::new(c(0.3, 0.25), c(0.35, 0.2)).unwrap();
        let p = LatticeParams::new(2, 0, 0, 0, 0).unwrap();
        let logs = transport_numerically(&t, &p, 8).unwrap();
        let coords = t.coords();
        let got: Vec<_> = (0..4)
            .map(|i| {
                let (p, q) =
                    logs[i].branch_at(&crate::cover::CutPoint::off_cut(coords[i]).unwrap());
                d(p, q)
            })
            .collect();
        assert_eq!(got, vec![d(2, 0), d(0, 0), d(0, 0), d(2, 0)]);
    }

    #[test]
    fn transport_matches_lattice_formula() {
        let mut rng = Xoshiro256PlusPlus::seed_from_u64(11);
        for _ in 0..6 {
            let t = sample_upper_tuple(&mut rng);
            let loops = LatticeParams::sample(&mut rng, 4);
            let et = monodromy_transport(&t, &loops).unwrap();
            let logs = transport_numerically(&t, &loops, 8).unwrap();
            for (i, z) in t.coords().into_iter().enumerate() {
                let b = et.branch()[i];
                let pt = CoverPoint::at(z, b.dp(), b.dq()).unwrap();
                let closed = entropy_cover(&pt).unwrap();
                assert!(
                    (logs[i].entropy(z) - closed).norm() < 1e-8,
                    "slot {i}, loops {loops:?}"
                );
            }
        }
    }
}
