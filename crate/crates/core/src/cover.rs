//! The doubly-punctured plane `C \ {0, 1}`, its cut model and the universal
//! abelian cover.
//!
//! The plane is slit along `(-inf, 0)` and `(1, inf)`. A point of the cover is
//! a cut-plane point together with two even integers `(p, q)`; the two copies
//! `x + 0i` and `x - 0i` of a slit real number are glued by
//!
//! ```text
//! (x + 0i; p, q) ~ (x - 0i; p + 2, q)    for x < 0
//! (x + 0i; p, q) ~ (x - 0i; p, q + 2)    for x > 1
//! ```
//!
//! so a path crossing `(-inf, 0)` from the upper to the lower half-plane picks
//! up `+2` in `p`, and one crossing `(1, inf)` from the upper to the lower
//! half-plane picks up `+2` in `q`. In terms of loops based in `(0, 1)`: one
//! counterclockwise turn around `0` adds `2` to `p`, one clockwise turn around
//! `1` adds `2` to `q`. The lifted logarithms are then
//! `log z = Log z + i*pi*p` and `log(1 - z) = Log(1 - z) - i*pi*q`.

use std::fmt;
use std::ops::{Add, AddAssign, Neg, Sub};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Vertices and segments closer than this to `0` or `1` are rejected.
pub const PUNCTURE_TOLERANCE: f64 = 1e-12;

/// Tolerance used when matching a path's first vertex against a start point.
pub const VERTEX_MATCH_TOLERANCE: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum CoverError {
    #[error("coordinate {0} is not finite")]
    NonFinite(Complex64),
    #[error("{0} is a puncture of C \\ {{0, 1}}")]
    Puncture(Complex64),
    #[error("branch integers must be even, got ({p}, {q})")]
    OddBranch { p: i64, q: i64 },
    #[error("{0} lies on a cut and needs a side annotation")]
    SideRequired(Complex64),
    #[error("{0} is not on a cut, so it cannot carry a side annotation")]
    UnexpectedSide(Complex64),
    #[error("a path needs at least two vertices, got {0}")]
    TooShort(usize),
    #[error("vertex {index} is within {PUNCTURE_TOLERANCE:e} of a puncture")]
    VertexNearPuncture { index: usize },
    #[error("segment {index} passes within {PUNCTURE_TOLERANCE:e} of a puncture")]
    SegmentThroughPuncture { index: usize },
    #[error("segment {index} runs along a cut")]
    AlongCut { index: usize },
    #[error("interior vertex {index} lies on a cut")]
    VertexOnCut { index: usize },
    #[error("path is not closed")]
    OpenPath,
    #[error("path starts at {path_start} but the point projects to {point}")]
    StartMismatch {
        path_start: Complex64,
        point: Complex64,
    },
}

/// Which of the two slits a real number lies on, if any.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Cut {
    /// `(-inf, 0)`, the cut of `log z`.
    Negative,
    /// `(1, inf)`, the cut of `log(1 - z)`.
    BeyondOne,
}

/// Returns the cut `z` lies on. Only exactly real points can lie on a cut.
pub fn cut_of(z: Complex64) -> Option<Cut> {
    if z.im != 0.0 {
        None
    } else if z.re < 0.0 {
        Some(Cut::Negative)
    } else if z.re > 1.0 {
        Some(Cut::BeyondOne)
    } else {
        None
    }
}

fn check_finite(z: Complex64) -> Result<(), CoverError> {
    if z.re.is_finite() && z.im.is_finite() {
        Ok(())
    } else {
        Err(CoverError::NonFinite(z))
    }
}

/// A point of `C \ {0, 1}`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PuncturedPoint(Complex64);

impl PuncturedPoint {
    pub fn new(z: Complex64) -> Result<Self, CoverError> {
        check_finite(z)?;
        if z == Complex64::new(0.0, 0.0) || z == Complex64::new(1.0, 0.0) {
            return Err(CoverError::Puncture(z));
        }
        Ok(Self(z))
    }

    pub fn real(x: f64) -> Result<Self, CoverError> {
        Self::new(Complex64::new(x, 0.0))
    }

    pub fn z(&self) -> Complex64 {
        self.0
    }
}

/// Side from which a point on a cut is approached.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
pub enum Side {
    #[default]
    #[serde(rename = "none")]
    NotOnCut,
    #[serde(rename = "above")]
    FromAbove,
    #[serde(rename = "below")]
    FromBelow,
}

/// A point of the cut plane: slit real numbers carry the side they are
/// approached from.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CutPoint {
    z: Complex64,
    side: Side,
}

impl CutPoint {
    pub fn new(z: Complex64, side: Side) -> Result<Self, CoverError> {
        PuncturedPoint::new(z)?;
        match (cut_of(z), side) {
            (Some(_), Side::NotOnCut) => Err(CoverError::SideRequired(z)),
            (None, Side::FromAbove | Side::FromBelow) => Err(CoverError::UnexpectedSide(z)),
            _ => Ok(Self { z, side }),
        }
    }

    /// A point that must not lie on a cut.
    pub fn off_cut(z: Complex64) -> Result<Self, CoverError> {
        Self::new(z, Side::NotOnCut)
    }

    pub fn z(&self) -> Complex64 {
        self.z
    }

    pub fn side(&self) -> Side {
        self.side
    }

    pub fn cut(&self) -> Option<Cut> {
        cut_of(self.z)
    }
}

impl From<PuncturedPoint> for Complex64 {
    fn from(p: PuncturedPoint) -> Self {
        p.0
    }
}

/// A covering transformation: shifts of the branch integers by even amounts.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
pub struct DeckVector {
    dp: i64,
    dq: i64,
}

impl DeckVector {
    pub const ZERO: DeckVector = DeckVector { dp: 0, dq: 0 };

    pub fn new(dp: i64, dq: i64) -> Result<Self, CoverError> {
        if dp % 2 != 0 || dq % 2 != 0 {
            return Err(CoverError::OddBranch { p: dp, q: dq });
        }
        Ok(Self { dp, dq })
    }

    pub fn dp(&self) -> i64 {
        self.dp
    }

    pub fn dq(&self) -> i64 {
        self.dq
    }
}

impl Add for DeckVector {
    type Output = DeckVector;
    fn add(self, rhs: DeckVector) -> DeckVector {
        DeckVector {
            dp: self.dp + rhs.dp,
            dq: self.dq + rhs.dq,
        }
    }
}

impl AddAssign for DeckVector {
    fn add_assign(&mut self, rhs: DeckVector) {
        *self = *self + rhs;
    }
}

impl Sub for DeckVector {
    type Output = DeckVector;
    fn sub(self, rhs: DeckVector) -> DeckVector {
        self + (-rhs)
    }
}

impl Neg for DeckVector {
    type Output = DeckVector;
    fn neg(self) -> DeckVector {
        DeckVector {
            dp: -self.dp,
            dq: -self.dq,
        }
    }
}

impl std::iter::Sum for DeckVector {
    fn sum<I: Iterator<Item = DeckVector>>(iter: I) -> Self {
        iter.fold(DeckVector::ZERO, Add::add)
    }
}

impl fmt::Display for DeckVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.dp, self.dq)
    }
}

/// A point `(z; p, q)` of the universal abelian cover.
///
/// Equality respects the gluing of the two sides of each cut, so
/// `(-2 above; 0, 0) == (-2 below; 2, 0)`.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
#[serde(try_from = "CoverPointRepr", into = "CoverPointRepr")]
pub struct CoverPoint {
    base: CutPoint,
    p: i64,
    q: i64,
}

impl CoverPoint {
    pub fn new(base: CutPoint, p: i64, q: i64) -> Result<Self, CoverError> {
        DeckVector::new(p, q)?;
        Ok(Self { base, p, q })
    }

    /// Shorthand for a point whose base is off the cuts.
    pub fn at(z: Complex64, p: i64, q: i64) -> Result<Self, CoverError> {
        Self::new(CutPoint::off_cut(z)?, p, q)
    }

    pub fn base(&self) -> CutPoint {
        self.base
    }

    pub fn z(&self) -> Complex64 {
        self.base.z
    }

    pub fn p(&self) -> i64 {
        self.p
    }

    pub fn q(&self) -> i64 {
        self.q
    }

    /// Projection to `C \ {0, 1}`.
    pub fn project(&self) -> PuncturedPoint {
        PuncturedPoint(self.base.z)
    }

    pub fn deck_act(&self, v: DeckVector) -> CoverPoint {
        CoverPoint {
            base: self.base,
            p: self.p + v.dp,
            q: self.q + v.dq,
        }
    }

    /// The same point written with every on-cut base approached from above.
    pub fn canonical(&self) -> CoverPoint {
        match (self.base.cut(), self.base.side) {
            (Some(Cut::Negative), Side::FromBelow) => CoverPoint {
                base: CutPoint {
                    z: self.base.z,
                    side: Side::FromAbove,
                },
                p: self.p - 2,
                q: self.q,
            },
            (Some(Cut::BeyondOne), Side::FromBelow) => CoverPoint {
                base: CutPoint {
                    z: self.base.z,
                    side: Side::FromAbove,
                },
                p: self.p,
                q: self.q - 2,
            },
            _ => *self,
        }
    }
}

impl PartialEq for CoverPoint {
    fn eq(&self, other: &Self) -> bool {
        let a = self.canonical();
        let b = other.canonical();
        a.base == b.base && a.p == b.p && a.q == b.q
    }
}

impl fmt::Display for CoverPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let side = match self.base.side {
            Side::NotOnCut => "",
            Side::FromAbove => "+0i",
            Side::FromBelow => "-0i",
        };
        write!(f, "({}{}; {}, {})", self.base.z, side, self.p, self.q)
    }
}

#[derive(Serialize, Deserialize)]
struct CoverPointRepr {
    re: f64,
    im: f64,
    #[serde(default)]
    side: Side,
    p: i64,
    q: i64,
}

impl TryFrom<CoverPointRepr> for CoverPoint {
    type Error = CoverError;
    fn try_from(r: CoverPointRepr) -> Result<Self, CoverError> {
        CoverPoint::new(CutPoint::new(Complex64::new(r.re, r.im), r.side)?, r.p, r.q)
    }
}

impl From<CoverPoint> for CoverPointRepr {
    fn from(pt: CoverPoint) -> Self {
        CoverPointRepr {
            re: pt.base.z.re,
            im: pt.base.z.im,
            side: pt.base.side,
            p: pt.p,
            q: pt.q,
        }
    }
}

/// A curve made of finitely many pieces, each parametrised by `s` in `[0, 1]`.
/// Consecutive pieces must share endpoints.
pub trait Curve {
    fn pieces(&self) -> usize;
    fn point(&self, piece: usize, s: f64) -> Complex64;

    fn start(&self) -> Complex64 {
        self.point(0, 0.0)
    }

    fn end(&self) -> Complex64 {
        self.point(self.pieces() - 1, 1.0)
    }

    /// The image of this curve under `f`.
    fn map<F>(self, f: F) -> MappedCurve<Self, F>
    where
        Self: Sized,
        F: Fn(Complex64) -> Complex64,
    {
        MappedCurve { inner: self, f }
    }
}

impl<C: Curve + ?Sized> Curve for &C {
    fn pieces(&self) -> usize {
        (**self).pieces()
    }
    fn point(&self, piece: usize, s: f64) -> Complex64 {
        (**self).point(piece, s)
    }
}

pub struct MappedCurve<C, F> {
    inner: C,
    f: F,
}

impl<C: Curve, F: Fn(Complex64) -> Complex64> Curve for MappedCurve<C, F> {
    fn pieces(&self) -> usize {
        self.inner.pieces()
    }
    fn point(&self, piece: usize, s: f64) -> Complex64 {
        (self.f)(self.inner.point(piece, s))
    }
}

fn distance_to_segment(c: Complex64, a: Complex64, b: Complex64) -> f64 {
    let d = b - a;
    let len2 = d.norm_sqr();
    if len2 == 0.0 {
        return (c - a).norm();
    }
    let t = ((c - a).re * d.re + (c - a).im * d.im) / len2;
    let t = t.clamp(0.0, 1.0);
    (a + d * t - c).norm()
}

/// A polygonal path in `C \ {0, 1}`.
///
/// Construction checks finiteness and distance to the punctures. Conditions
/// involving the cuts are checked when branch data is computed, because the
/// numerical continuation of the entropy does not need them.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Vec<[f64; 2]>", into = "Vec<[f64; 2]>")]
pub struct PolyPath {
    vertices: Vec<Complex64>,
}

impl PolyPath {
    pub fn new(vertices: Vec<Complex64>) -> Result<Self, CoverError> {
        if vertices.len() < 2 {
            return Err(CoverError::TooShort(vertices.len()));
        }
        let punctures = [Complex64::new(0.0, 0.0), Complex64::new(1.0, 0.0)];
        for (index, &v) in vertices.iter().enumerate() {
            check_finite(v)?;
            if punctures
                .iter()
                .any(|&c| (v - c).norm() <= PUNCTURE_TOLERANCE)
            {
                return Err(CoverError::VertexNearPuncture { index });
            }
        }
        for (index, w) in vertices.windows(2).enumerate() {
            if punctures
                .iter()
                .any(|&c| distance_to_segment(c, w[0], w[1]) <= PUNCTURE_TOLERANCE)
            {
                return Err(CoverError::SegmentThroughPuncture { index });
            }
        }
        Ok(Self { vertices })
    }

    /// The path that stays at `z`.
    pub fn constant(z: Complex64) -> Result<Self, CoverError> {
        Self::new(vec![z, z])
    }

    pub fn vertices(&self) -> &[Complex64] {
        &self.vertices
    }

    pub fn first(&self) -> Complex64 {
        self.vertices[0]
    }

    pub fn last(&self) -> Complex64 {
        self.vertices[self.vertices.len() - 1]
    }

    pub fn is_closed(&self) -> bool {
        (self.first() - self.last()).norm() <= VERTEX_MATCH_TOLERANCE
    }

    pub fn reversed(&self) -> PolyPath {
        let mut vertices = self.vertices.clone();
        vertices.reverse();
        PolyPath { vertices }
    }

    /// `self` followed by `other`; `other` must start where `self` ends.
    pub fn concat(&self, other: &PolyPath) -> Result<PolyPath, CoverError> {
        if (self.last() - other.first()).norm() > VERTEX_MATCH_TOLERANCE {
            return Err(CoverError::StartMismatch {
                path_start: other.first(),
                point: self.last(),
            });
        }
        let mut vertices = self.vertices.clone();
        vertices.extend_from_slice(&other.vertices[1..]);
        Ok(PolyPath { vertices })
    }
}

impl Curve for PolyPath {
    fn pieces(&self) -> usize {
        self.vertices.len() - 1
    }

    fn point(&self, piece: usize, s: f64) -> Complex64 {
        let a = self.vertices[piece];
        let b = self.vertices[piece + 1];
        if s >= 1.0 {
            b
        } else {
            a + (b - a) * s
        }
    }
}

impl TryFrom<Vec<[f64; 2]>> for PolyPath {
    type Error = CoverError;
    fn try_from(v: Vec<[f64; 2]>) -> Result<Self, CoverError> {
        PolyPath::new(
            v.into_iter()
                .map(|[re, im]| Complex64::new(re, im))
                .collect(),
        )
    }
}

impl From<PolyPath> for Vec<[f64; 2]> {
    fn from(p: PolyPath) -> Self {
        p.vertices.into_iter().map(|z| [z.re, z.im]).collect()
    }
}

fn side_sign(side: Side) -> i8 {
    match side {
        Side::FromAbove => 1,
        Side::FromBelow => -1,
        Side::NotOnCut => 0,
    }
}

fn im_sign(z: Complex64) -> i8 {
    if z.im > 0.0 {
        1
    } else if z.im < 0.0 {
        -1
    } else {
        0
    }
}

/// Signed cut crossings along `path`, starting on `start_side` if the first
/// vertex lies on a cut. Returns the accumulated shift and the side on which
/// the last vertex is reached (`NotOnCut` unless it lies on a cut).
fn crossings(path: &PolyPath, start_side: Side) -> Result<(DeckVector, Side), CoverError> {
    let v = &path.vertices;
    let n = v.len();
    for (index, &z) in v.iter().enumerate().take(n - 1).skip(1) {
        if cut_of(z).is_some() {
            return Err(CoverError::VertexOnCut { index });
        }
    }
    if cut_of(v[0]).is_some() && start_side == Side::NotOnCut {
        return Err(CoverError::SideRequired(v[0]));
    }

    let mut shift = DeckVector::ZERO;
    let mut end_side = Side::NotOnCut;
    for (index, w) in v.windows(2).enumerate() {
        let (a, b) = (w[0], w[1]);
        if a.im == 0.0 && b.im == 0.0 {
            if a == b {
                // Only a two-vertex constant path can sit on a cut here.
                if index + 1 == n - 1 && cut_of(b).is_some() {
                    end_side = start_side;
                }
                continue;
            }
            // Collinear with the real axis: only harmless inside (0, 1).
            if a.re.min(b.re) < 0.0 || a.re.max(b.re) > 1.0 {
                return Err(CoverError::AlongCut { index });
            }
            continue;
        }
        let sa = if index == 0 && cut_of(a).is_some() {
            side_sign(start_side)
        } else {
            im_sign(a)
        };
        let sb = im_sign(b);
        if index + 1 == n - 1 && cut_of(b).is_some() {
            end_side = if a.im > 0.0 {
                Side::FromAbove
            } else {
                Side::FromBelow
            };
        }
        if sa == 0 || sb == 0 || sa == sb {
            continue;
        }
        let x = if a.im == 0.0 {
            a.re
        } else {
            a.re + (b.re - a.re) * (-a.im) / (b.im - a.im)
        };
        let step = if sa > 0 { 2 } else { -2 };
        if x < 0.0 {
            shift.dp += step;
        } else if x > 1.0 {
            shift.dq += step;
        }
    }
    Ok((shift, end_side))
}

/// Branch data picked up along a closed path.
///
/// `dp / 2` is the number of counterclockwise turns around `0` and `dq / 2`
/// the number of clockwise turns around `1`, counted through signed
/// transversal crossings of the two cuts.
pub fn winding_data(path: &PolyPath) -> Result<DeckVector, CoverError> {
    if !path.is_closed() {
        return Err(CoverError::OpenPath);
    }
    let v = &path.vertices;
    let start_side = if cut_of(v[0]).is_some() {
        // A loop based on a cut starts on the side it returns from.
        let before = v[..v.len() - 1]
            .iter()
            .rev()
            .find(|z| **z != v[0])
            .copied()
            .unwrap_or(v[0]);
        match im_sign(before) {
            1 => Side::FromAbove,
            -1 => Side::FromBelow,
            _ => return Err(CoverError::AlongCut { index: v.len() - 2 }),
        }
    } else {
        Side::NotOnCut
    };
    crossings(path, start_side).map(|(shift, _)| shift)
}

/// Lift of `path` to the cover starting at `start`; returns the endpoint.
pub fn continue_point(start: &CoverPoint, path: &PolyPath) -> Result<CoverPoint, CoverError> {
    if (path.first() - start.z()).norm() > VERTEX_MATCH_TOLERANCE {
        return Err(CoverError::StartMismatch {
            path_start: path.first(),
            point: start.z(),
        });
    }
    let (shift, end_side) = crossings(path, start.base.side)?;
    let base = CutPoint::new(path.last(), end_side)?;
    Ok(CoverPoint {
        base,
        p: start.p + shift.dp,
        q: start.q + shift.dq,
    })
}

/// A closed polygonal loop based at `anchor` that turns `turns` times around
/// `center` (positive is counterclockwise) on a circle of radius `radius`
/// discretised with `segments` edges per turn.
///
/// The loop runs straight from `anchor` to the circle, goes around, and
/// returns along the same segment.
pub fn circular_loop(
    anchor: Complex64,
    center: Complex64,
    radius: f64,
    turns: i64,
    segments: usize,
) -> Result<PolyPath, CoverError> {
    let offset = anchor - center;
    let start_angle = offset.arg();
    let entry = center + Complex64::from_polar(radius, start_angle);
    let mut vertices = vec![anchor, entry];
    let total = segments * turns.unsigned_abs() as usize;
    let dir = if turns >= 0 { 1.0 } else { -1.0 };
    // Interior vertices sit half a segment off the entry angle, so a loop
    // anchored on the real axis never puts a vertex on a cut.
    for k in 0..total {
        let theta =
            start_angle + dir * std::f64::consts::TAU * (k as f64 + 0.5) / (segments as f64);
        vertices.push(center + Complex64::from_polar(radius, theta));
    }
    if total > 0 {
        vertices.push(entry);
    }
    vertices.push(anchor);
    PolyPath::new(vertices)
}
