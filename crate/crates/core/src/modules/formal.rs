//! Generators and finite formal linear combinations of them.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;

use serde::ser::SerializeMap;
use serde::{Serialize, Serializer};

use super::scalar::Coefficient;
use super::ModuleError;
use crate::cover::{cut_of, CoverPoint, CutPoint, Side};

/// Which presented module a generator or sum belongs to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Group {
    /// The additive group `beta_2`, a module over the field.
    Beta2,
    /// The group `TB_2`, a module over the multiplicative group.
    Tb2,
    /// The extended group, generated by points of the cover.
    ExtBeta2,
}

/// A generator symbol.
///
/// `Tb2` generators carry a formal multiplicative weight `w` standing for
/// `w * <a>` under the action of the multiplicative group; it is part of the
/// symbol, not an additive coefficient.
///
/// An `ExtBeta2` argument on a cut is read as approached from above; points
/// approached from below are rewritten through the gluing rule.
#[derive(Debug, Clone)]
pub enum Generator<K> {
    Beta2 { arg: K },
    Tb2 { weight: K, arg: K },
    ExtBeta2 { arg: K, p: i64, q: i64 },
}

fn check_arg<K: Coefficient>(arg: &K) -> Result<(), ModuleError> {
    if arg.is_zero() || arg.is_one() {
        return Err(ModuleError::DegenerateArgument(arg.to_string()));
    }
    Ok(())
}

impl<K: Coefficient> Generator<K> {
    pub fn beta2(arg: K) -> Result<Self, ModuleError> {
        check_arg(&arg)?;
        Ok(Generator::Beta2 {
            arg: arg.normalized(),
        })
    }

    pub fn tb2(weight: K, arg: K) -> Result<Self, ModuleError> {
        check_arg(&arg)?;
        if weight.is_zero() {
            return Err(ModuleError::DegenerateArgument(format!("weight {weight}")));
        }
        Ok(Generator::Tb2 {
            weight: weight.normalized(),
            arg: arg.normalized(),
        })
    }

    pub fn ext(arg: K, p: i64, q: i64) -> Result<Self, ModuleError> {
        check_arg(&arg)?;
        if p % 2 != 0 || q % 2 != 0 {
            return Err(ModuleError::OddBranch { p, q });
        }
        Ok(Generator::ExtBeta2 {
            arg: arg.normalized(),
            p,
            q,
        })
    }

    pub fn group(&self) -> Group {
        match self {
            Generator::Beta2 { .. } => Group::Beta2,
            Generator::Tb2 { .. } => Group::Tb2,
            Generator::ExtBeta2 { .. } => Group::ExtBeta2,
        }
    }

    pub fn arg(&self) -> &K {
        match self {
            Generator::Beta2 { arg }
            | Generator::Tb2 { arg, .. }
            | Generator::ExtBeta2 { arg, .. } => arg,
        }
    }

    /// The cover point named by an `ExtBeta2` generator.
    pub fn cover_point(&self) -> Option<CoverPoint> {
        match self {
            Generator::ExtBeta2 { arg, p, q } => {
                let z = arg.to_complex();
                let side = if cut_of(z).is_some() {
                    Side::FromAbove
                } else {
                    Side::NotOnCut
                };
                CutPoint::new(z, side)
                    .ok()
                    .and_then(|b| CoverPoint::new(b, *p, *q).ok())
            }
            _ => None,
        }
    }

    fn rank(&self) -> u8 {
        match self {
            Generator::Beta2 { .. } => 0,
            Generator::Tb2 { .. } => 1,
            Generator::ExtBeta2 { .. } => 2,
        }
    }
}

impl Generator<num_complex::Complex64> {
    /// The generator for a cover point, rewriting a below-side base into its
    /// above-side representative.
    pub fn from_cover_point(pt: &CoverPoint) -> Result<Self, ModuleError> {
        let c = pt.canonical();
        Generator::ext(c.z(), c.p(), c.q())
    }
}

impl<K: Coefficient> PartialEq for Generator<K> {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}

impl<K: Coefficient> Eq for Generator<K> {}

impl<K: Coefficient> PartialOrd for Generator<K> {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Group first, then argument, then branch integers (or weight for `Tb2`).
impl<K: Coefficient> Ord for Generator<K> {
    fn cmp(&self, other: &Self) -> Ordering {
        self.rank()
            .cmp(&other.rank())
            .then_with(|| match (self, other) {
                (Generator::Beta2 { arg: a }, Generator::Beta2 { arg: b }) => a.key_cmp(b),
                (Generator::Tb2 { weight: wa, arg: a }, Generator::Tb2 { weight: wb, arg: b }) => {
                    a.key_cmp(b).then_with(|| wa.key_cmp(wb))
                }
                (
                    Generator::ExtBeta2 {
                        arg: a,
                        p: pa,
                        q: qa,
                    },
                    Generator::ExtBeta2 {
                        arg: b,
                        p: pb,
                        q: qb,
                    },
                ) => a.key_cmp(b).then(pa.cmp(pb)).then(qa.cmp(qb)),
                _ => unreachable!("ranks already differ"),
            })
    }
}

impl<K: Coefficient> fmt::Display for Generator<K> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Generator::Beta2 { arg } => write!(f, "<{arg}>"),
            Generator::Tb2 { weight, arg } if weight.is_one() => write!(f, "<{arg}>"),
            Generator::Tb2 { weight, arg } => write!(f, "({weight})*<{arg}>"),
            Generator::ExtBeta2 { arg, p, q } => write!(f, "<{arg};{p},{q}>"),
        }
    }
}

impl<K: Coefficient + Serialize> Serialize for Generator<K> {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let mut m = s.serialize_map(None)?;
        m.serialize_entry("group", &self.group())?;
        m.serialize_entry("arg", self.arg())?;
        match self {
            Generator::Tb2 { weight, .. } => m.serialize_entry("weight", weight)?,
            Generator::ExtBeta2 { p, q, .. } => {
                m.serialize_entry("p", p)?;
                m.serialize_entry("q", q)?;
            }
            Generator::Beta2 { .. } => {}
        }
        m.end()
    }
}

/// A finite linear combination of generators of one group. Zero coefficients
/// are never stored.
#[derive(Debug, Clone, PartialEq)]
pub struct FormalSum<K: Coefficient> {
    group: Group,
    terms: BTreeMap<Generator<K>, K>,
}

impl<K: Coefficient> FormalSum<K> {
    pub fn zero(group: Group) -> Self {
        FormalSum {
            group,
            terms: BTreeMap::new(),
        }
    }

    pub fn single(generator: Generator<K>, coeff: K) -> Self {
        let mut s = FormalSum::zero(generator.group());
        s.push(generator, coeff);
        s
    }

    /// Builds a sum from `(coefficient, generator)` pairs of one group.
    pub fn from_terms<I>(group: Group, terms: I) -> Result<Self, ModuleError>
    where
        I: IntoIterator<Item = (K, Generator<K>)>,
    {
        let mut s = FormalSum::zero(group);
        for (c, g) in terms {
            s.add_term(g, c)?;
        }
        Ok(s)
    }

    pub fn group(&self) -> Group {
        self.group
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Generator<K>, &K)> {
        self.terms.iter()
    }

    pub fn coefficient(&self, g: &Generator<K>) -> K {
        self.terms.get(g).cloned().unwrap_or_else(K::zero)
    }

    fn push(&mut self, g: Generator<K>, c: K) {
        let merged = match self.terms.remove(&g) {
            Some(old) => old + c,
            None => c,
        };
        if !merged.is_zero() {
            self.terms.insert(g, merged);
        }
    }

    /// Adds `coeff * generator`.
    pub fn add_term(&mut self, generator: Generator<K>, coeff: K) -> Result<(), ModuleError> {
        if generator.group() != self.group {
            return Err(ModuleError::GroupMismatch {
                expected: self.group,
                found: generator.group(),
            });
        }
        self.push(generator, coeff);
        Ok(())
    }

    pub fn checked_add(&self, other: &FormalSum<K>) -> Result<FormalSum<K>, ModuleError> {
        let mut out = self.clone();
        out.add_scaled(other, &K::one())?;
        Ok(out)
    }

    pub fn checked_sub(&self, other: &FormalSum<K>) -> Result<FormalSum<K>, ModuleError> {
        let mut out = self.clone();
        out.add_scaled(other, &-K::one())?;
        Ok(out)
    }

    /// `self += factor * other`.
    pub fn add_scaled(&mut self, other: &FormalSum<K>, factor: &K) -> Result<(), ModuleError> {
        if other.group != self.group {
            return Err(ModuleError::GroupMismatch {
                expected: self.group,
                found: other.group,
            });
        }
        for (g, c) in &other.terms {
            self.push(g.clone(), c.clone() * factor.clone());
        }
        Ok(())
    }

    pub fn scale(&self, factor: &K) -> FormalSum<K> {
        let mut out = FormalSum::zero(self.group);
        for (g, c) in &self.terms {
            out.push(g.clone(), c.clone() * factor.clone());
        }
        out
    }

    pub fn neg(&self) -> FormalSum<K> {
        self.scale(&-K::one())
    }
}

impl<K: Coefficient> fmt::Display for FormalSum<K> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (i, (g, c)) in self.terms.iter().enumerate() {
            if i > 0 {
                write!(f, " + ")?;
            }
            if c.is_one() {
                write!(f, "{g}")?;
            } else {
                write!(f, "({c}){g}")?;
            }
        }
        Ok(())
    }
}

/// Serialised as `{"group": ..., "terms": [{"coeff": ..., "generator": ...}]}`.
impl<K: Coefficient + Serialize> Serialize for FormalSum<K> {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        #[derive(Serialize)]
        struct Term<'a, K: Coefficient + Serialize> {
            coeff: &'a K,
            generator: &'a Generator<K>,
        }
        let terms: Vec<_> = self
            .terms
            .iter()
            .map(|(g, c)| Term {
                coeff: c,
                generator: g,
            })
            .collect();
        let mut m = s.serialize_map(Some(2))?;
        m.serialize_entry("group", &self.group)?;
        m.serialize_entry("terms", &terms)?;
        m.end()
    }
}
