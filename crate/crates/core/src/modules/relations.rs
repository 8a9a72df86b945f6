//! Relation instances: formal sums that vanish by definition in one of the
//! three modules, tagged with the schema and parameters that produced them.

use serde::ser::SerializeMap;
use serde::{Serialize, Serializer};

use super::{Coefficient, FormalSum, Generator, Group, ModuleError};
use crate::fourterm::{
    extended_tuple, relation_sum, transfer_relation_sum, FourTuple, LatticeParams, TransferKind,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Schema {
    /// `<a> - <b> + a*<b/a> + (1-a)*<(1-b)/(1-a)>` in `TB_2`.
    Tb2FourTerm,
    /// `<a> - <b> + a<b/a> + (1-a)<(1-b)/(1-a)>` in `beta_2`.
    Beta2FourTerm,
    /// The extended 4-term relation.
    ExtFourTerm,
    /// `<x;p,q> - <x;p',q> - <x;p-2,q> + <x;p'-2,q>`.
    TransferP,
    /// `<x;p,q> - <x;p,q'> - <x;p,q-2> + <x;p,q'-2>`.
    TransferQ,
}

/// Free parameters of a relation schema.
#[derive(Debug, Clone, PartialEq)]
pub enum RelationParams<K> {
    FourTerm {
        a: K,
        b: K,
    },
    Ext {
        x0: K,
        x1: K,
        lattice: LatticeParams,
    },
    Transfer {
        x: K,
        p: i64,
        q: i64,
        other: i64,
    },
}

#[derive(Debug, Clone, PartialEq)]
pub struct RelationInstance<K: Coefficient> {
    schema: Schema,
    params: RelationParams<K>,
    sum: FormalSum<K>,
}

impl<K: Coefficient> RelationInstance<K> {
    pub fn schema(&self) -> Schema {
        self.schema
    }

    pub fn params(&self) -> &RelationParams<K> {
        &self.params
    }

    pub fn sum(&self) -> &FormalSum<K> {
        &self.sum
    }

    /// The `beta_2` relation at `(a, b)`. Needs `a, b` outside `{0, 1}` and
    /// `a != b`, so that `b/a` and `(1-b)/(1-a)` are admissible arguments.
    pub fn beta2_four_term(a: K, b: K) -> Result<Self, ModuleError> {
        let [ga, gb, g2, g3] = four_term_args(&a, &b)?;
        let one = K::one();
        let sum = FormalSum::from_terms(
            Group::Beta2,
            [
                (one.clone(), Generator::beta2(ga)?),
                (-one.clone(), Generator::beta2(gb)?),
                (a.clone(), Generator::beta2(g2)?),
                (one - a.clone(), Generator::beta2(g3)?),
            ],
        )?;
        Ok(RelationInstance {
            schema: Schema::Beta2FourTerm,
            params: RelationParams::FourTerm { a, b },
            sum,
        })
    }

    /// The `TB_2` relation at `(a, b)`; the multiplicative action is recorded
    /// as the generator weight and every additive coefficient is `+-1`.
    pub fn tb2_four_term(a: K, b: K) -> Result<Self, ModuleError> {
        let [ga, gb, g2, g3] = four_term_args(&a, &b)?;
        let one = K::one;
        let sum = FormalSum::from_terms(
            Group::Tb2,
            [
                (one(), Generator::tb2(one(), ga)?),
                (-one(), Generator::tb2(one(), gb)?),
                (one(), Generator::tb2(a.clone(), g2)?),
                (one(), Generator::tb2(one() - a.clone(), g3)?),
            ],
        )?;
        Ok(RelationInstance {
            schema: Schema::Tb2FourTerm,
            params: RelationParams::FourTerm { a, b },
            sum,
        })
    }

    /// The extended relation over the tuple `(x0, x1)` with branch shift
    /// `lattice`.
    pub fn ext_four_term(x0: K, x1: K, lattice: LatticeParams) -> Result<Self, ModuleError> {
        let t = FourTuple::new(x0.clone(), x1.clone())?;
        let sum = relation_sum(&extended_tuple(&t, &lattice)?);
        Ok(RelationInstance {
            schema: Schema::ExtFourTerm,
            params: RelationParams::Ext { x0, x1, lattice },
            sum,
        })
    }

    /// A transfer relation; `other` is `p'` or `q'` depending on `kind`.
    pub fn transfer(
        x: K,
        kind: TransferKind,
        p: i64,
        q: i64,
        other: i64,
    ) -> Result<Self, ModuleError> {
        let sum = transfer_relation_sum(&x, kind, p, q, other)?;
        let schema = match kind {
            TransferKind::P => Schema::TransferP,
            TransferKind::Q => Schema::TransferQ,
        };
        Ok(RelationInstance {
            schema,
            params: RelationParams::Transfer { x, p, q, other },
            sum,
        })
    }
}

fn four_term_args<K: Coefficient>(a: &K, b: &K) -> Result<[K; 4], ModuleError> {
    if a == b {
        return Err(ModuleError::Domain(format!(
            "4-term relation needs a != b, got a = b = {a}"
        )));
    }
    for v in [a, b] {
        if v.is_zero() || v.is_one() {
            return Err(ModuleError::DegenerateArgument(v.to_string()));
        }
    }
    let one = K::one();
    let r2 = b.clone() / a.clone();
    let r3 = (one.clone() - b.clone()) / (one - a.clone());
    Ok([a.clone(), b.clone(), r2, r3])
}

impl<K: Coefficient + Serialize> Serialize for RelationInstance<K> {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let mut m = s.serialize_map(None)?;
        m.serialize_entry("schema", &self.schema)?;
        match &self.params {
            RelationParams::FourTerm { a, b } => {
                m.serialize_entry("a", a)?;
                m.serialize_entry("b", b)?;
            }
            RelationParams::Ext { x0, x1, lattice } => {
                m.serialize_entry("x0", x0)?;
                m.serialize_entry("x1", x1)?;
                m.serialize_entry("lattice", lattice)?;
            }
            RelationParams::Transfer { x, p, q, other } => {
                m.serialize_entry("x", x)?;
                m.serialize_entry("p", p)?;
                m.serialize_entry("q", q)?;
                m.serialize_entry("other", other)?;
            }
        }
        m.serialize_entry("sum", &self.sum)?;
        m.end()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::modules::{regulator, GaussRat};
    use num_complex::Complex64;

    fn r(n: i64, d: i64) -> GaussRat {
        GaussRat::real(n, d)
    }

    #[test]
    fn beta2_instance_at_quarter_half() {
        let inst = RelationInstance::beta2_four_term(r(1, 4), r(1, 2)).unwrap();
        let g = |n, d| Generator::beta2(r(n, d)).unwrap();
        let s = inst.sum();
        assert_eq!(s.len(), 4);
        assert_eq!(s.coefficient(&g(1, 4)), r(1, 1));
        assert_eq!(s.coefficient(&g(1, 2)), r(-1, 1));
        assert_eq!(s.coefficient(&g(2, 1)), r(1, 4));
        assert_eq!(s.coefficient(&g(2, 3)), r(3, 4));
    }

    #[test]
    fn tb2_instance_keeps_weights_in_symbols() {
        let inst = RelationInstance::tb2_four_term(r(1, 4), r(1, 2)).unwrap();
        let s = inst.sum();
        assert_eq!(s.group(), Group::Tb2);
        assert_eq!(
            s.coefficient(&Generator::tb2(r(1, 4), r(2, 1)).unwrap()),
            r(1, 1)
        );
        assert_eq!(
            s.coefficient(&Generator::tb2(r(3, 4), r(2, 3)).unwrap()),
            r(1, 1)
        );
        assert_eq!(
            s.coefficient(&Generator::tb2(r(1, 1), r(1, 2)).unwrap()),
            r(-1, 1)
        );
    }

    #[test]
    fn four_term_domain() {
        assert!(RelationInstance::beta2_four_term(r(1, 3), r(1, 3)).is_err());
        assert!(RelationInstance::beta2_four_term(r(1, 1), r(1, 3)).is_err());
        assert!(RelationInstance::tb2_four_term(r(0, 1), r(1, 3)).is_err());
    }

    #[test]
    fn transfer_q_instance() {
        let inst = RelationInstance::transfer(r(1, 3), TransferKind::Q, 0, 4, 2).unwrap();
        let g = |p, q| Generator::ext(r(1, 3), p, q).unwrap();
        let s = inst.sum();
        assert_eq!(inst.schema(), Schema::TransferQ);
        assert_eq!(s.coefficient(&g(0, 4)), r(1, 1));
        assert_eq!(s.coefficient(&g(0, 2)), r(-2, 1));
        assert_eq!(s.coefficient(&g(0, 0)), r(1, 1));
        assert_eq!(s.len(), 3);
    }

    #[test]
    fn ext_instance_on_real_chamber() {
        let inst =
            RelationInstance::ext_four_term(r(1, 5), r(1, 3), LatticeParams::default()).unwrap();
        let s = inst.sum();
        let g = |n, d| Generator::ext(r(n, d), 0, 0).unwrap();
        // x2 = (1/3)/(4/5) = 5/12, x3 = (1/5)/(2/3) = 3/10
        assert_eq!(s.coefficient(&g(1, 5)), r(1, 1));
        assert_eq!(s.coefficient(&g(1, 3)), r(-1, 1));
        assert_eq!(s.coefficient(&g(5, 12)), r(4, 5));
        assert_eq!(s.coefficient(&g(3, 10)), r(-2, 3));
        let approx = RelationInstance::ext_four_term(
            Complex64::new(0.2, 0.0),
            Complex64::new(1.0 / 3.0, 0.0),
            LatticeParams::default(),
        )
        .unwrap();
        assert!(regulator(approx.sum()).unwrap().norm() < 1e-12);
    }

    #[test]
    fn serialises_exact_parameters() {
        let inst = RelationInstance::transfer(r(1, 3), TransferKind::P, 2, 0, 0).unwrap();
        let v = serde_json::to_value(&inst).unwrap();
        assert_eq!(v["schema"], "transfer-p");
        assert_eq!(v["x"], serde_json::json!(["1/3", "0"]));
    }
}
