//! Exact certificates: a target formal sum written as a Gaussian-rational
//! combination of relation instances.
//!
//! The solver runs Gaussian elimination with generators as coordinates,
//! ordered as in [`Generator`]'s `Ord`. Pool instances are inserted one at a
//! time into a row-echelon basis whose pivot is the smallest generator of each
//! row; every basis row remembers which pool instances it is made of.

use std::collections::BTreeMap;
use std::ops::Bound;

use serde::Serialize;

use super::relations::{RelationInstance, RelationParams, Schema};
use super::{Coefficient, FormalSum, GaussRat, Generator, ModuleError};
use crate::fourterm::TransferKind;

type Vector = BTreeMap<Generator<GaussRat>, GaussRat>;
type Combination = BTreeMap<usize, GaussRat>;

/// `sum coeff * instance.sum == target`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Certificate {
    pub entries: Vec<CertificateEntry>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CertificateEntry {
    pub coeff: GaussRat,
    pub instance: RelationInstance<GaussRat>,
}

impl Certificate {
    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// `sum coeff * instance.sum`, or `None` for an empty certificate.
    pub fn combination(&self) -> Result<Option<FormalSum<GaussRat>>, ModuleError> {
        let mut iter = self.entries.iter();
        let Some(first) = iter.next() else {
            return Ok(None);
        };
        let mut total = first.instance.sum().scale(&first.coeff);
        for e in iter {
            total.add_scaled(e.instance.sum(), &e.coeff)?;
        }
        Ok(Some(total))
    }
}

struct Row {
    vector: Vector,
    combination: Combination,
}

#[derive(Default)]
struct Echelon {
    rows: BTreeMap<Generator<GaussRat>, Row>,
}

fn axpy<K: Ord + Clone>(
    dst: &mut BTreeMap<K, GaussRat>,
    src: &BTreeMap<K, GaussRat>,
    f: &GaussRat,
) {
    for (k, c) in src {
        let v = c.clone() * f.clone();
        match dst.remove(k) {
            Some(old) => {
                let merged = old + v;
                if !merged.is_zero() {
                    dst.insert(k.clone(), merged);
                }
            }
            None => {
                dst.insert(k.clone(), v);
            }
        }
    }
}

impl Echelon {
    /// Eliminates every pivot from `v`, recording `combination -= f * row`
    /// alongside each `v -= f * row`.
    fn reduce(&self, v: &mut Vector, combination: &mut Combination) {
        let mut cursor: Option<Generator<GaussRat>> = None;
        loop {
            let next = match &cursor {
                None => v.keys().next().cloned(),
                Some(c) => v
                    .range((Bound::Excluded(c), Bound::Unbounded))
                    .next()
                    .map(|(k, _)| k.clone()),
            };
            let Some(g) = next else { break };
            if let Some(row) = self.rows.get(&g) {
                let f = -v[&g].clone();
                axpy(v, &row.vector, &f);
                axpy(combination, &row.combination, &f);
            }
            cursor = Some(g);
        }
    }

    fn insert(&mut self, index: usize, sum: &FormalSum<GaussRat>) {
        let mut v: Vector = sum.terms().map(|(g, c)| (g.clone(), c.clone())).collect();
        let mut combination = Combination::from([(index, GaussRat::one())]);
        self.reduce(&mut v, &mut combination);
        let Some((pivot, lead)) = v.iter().next().map(|(g, c)| (g.clone(), c.clone())) else {
            return;
        };
        let inv = GaussRat::one() / lead;
        for c in v.values_mut() {
            *c = c.clone() * inv.clone();
        }
        for c in combination.values_mut() {
            *c = c.clone() * inv.clone();
        }
        self.rows.insert(
            pivot,
            Row {
                vector: v,
                combination,
            },
        );
    }
}

/// Expresses `target` as a combination of `pool` instances.
///
/// `Ok(None)` means the target is not in the span of this pool; it says
/// nothing about the target in the module itself.
pub fn find_certificate(
    target: &FormalSum<GaussRat>,
    pool: &[RelationInstance<GaussRat>],
) -> Result<Option<Certificate>, ModuleError> {
    for inst in pool {
        if inst.sum().group() != target.group() {
            return Err(ModuleError::GroupMismatch {
                expected: target.group(),
                found: inst.sum().group(),
            });
        }
    }
    if target.is_zero() {
        return Ok(Some(Certificate {
            entries: Vec::new(),
        }));
    }
    let mut basis = Echelon::default();
    for (i, inst) in pool.iter().enumerate() {
        basis.insert(i, inst.sum());
    }
    let mut v: Vector = target
        .terms()
        .map(|(g, c)| (g.clone(), c.clone()))
        .collect();
    let mut combination = Combination::new();
    basis.reduce(&mut v, &mut combination);
    if !v.is_empty() {
        return Ok(None);
    }
    // target - sum f_i row_i = 0 was tracked as `combination = -sum f_i row_i`.
    let entries = combination
        .into_iter()
        .map(|(i, c)| CertificateEntry {
            coeff: -c,
            instance: pool[i].clone(),
        })
        .collect();
    Ok(Some(Certificate { entries }))
}

/// Re-derives every instance from its schema and parameters and checks that
/// the combination equals `target` term by term.
pub fn verify_certificate(target: &FormalSum<GaussRat>, cert: &Certificate) -> bool {
    if !cert
        .entries
        .iter()
        .all(|e| instance_is_genuine(&e.instance))
    {
        return false;
    }
    match cert.combination() {
        Ok(None) => target.is_zero(),
        Ok(Some(total)) => total
            .checked_sub(target)
            .map(|d| d.is_zero())
            .unwrap_or(false),
        Err(_) => false,
    }
}

fn instance_is_genuine(inst: &RelationInstance<GaussRat>) -> bool {
    let rebuilt = match (inst.schema(), inst.params().clone()) {
        (Schema::Beta2FourTerm, RelationParams::FourTerm { a, b }) => {
            RelationInstance::beta2_four_term(a, b)
        }
        (Schema::Tb2FourTerm, RelationParams::FourTerm { a, b }) => {
            RelationInstance::tb2_four_term(a, b)
        }
        (Schema::ExtFourTerm, RelationParams::Ext { x0, x1, lattice }) => {
            RelationInstance::ext_four_term(x0, x1, lattice)
        }
        (Schema::TransferP, RelationParams::Transfer { x, p, q, other }) => {
            RelationInstance::transfer(x, TransferKind::P, p, q, other)
        }
        (Schema::TransferQ, RelationParams::Transfer { x, p, q, other }) => {
            RelationInstance::transfer(x, TransferKind::Q, p, q, other)
        }
        _ => return false,
    };
    rebuilt.map(|r| r == *inst).unwrap_or(false)
}
