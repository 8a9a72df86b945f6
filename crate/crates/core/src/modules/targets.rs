//! Named certificate targets and the instance pools searched for them.
//!
//! A pool is described by a [`PoolSpec`]: boxes of lattice parameters over
//! given base tuples for the extended 4-term relation, boxes of branch
//! integers for the transfer relations, and argument sets for the `beta_2`
//! 4-term relation.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::certificate::{find_certificate, verify_certificate, Certificate};
use super::relations::RelationInstance;
use super::{
    bracket, kernel_c, lemma2_expand, Coefficient, FormalSum, GaussRat, Generator, Group,
    ModuleError,
};
use crate::fourterm::{LatticeParams, TransferKind};

/// Inclusive range of even integers.
pub type EvenRange = [i64; 2];

/// Default range for transfer branch integers.
pub const DEFAULT_TRANSFER_RANGE: EvenRange = [-6, 8];

fn evens(range: EvenRange) -> impl Iterator<Item = i64> {
    let lo = range[0] + range[0].rem_euclid(2);
    (lo..=range[1]).step_by(2)
}

fn parse_arg(s: &str) -> Result<GaussRat, ModuleError> {
    s.parse().map_err(ModuleError::Domain)
}

/// Extended 4-term instances over one base tuple, for every lattice parameter
/// in the box.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExtBox {
    pub tuple: [String; 2],
    pub p0: EvenRange,
    pub q0: EvenRange,
    pub p1: EvenRange,
    pub q1: EvenRange,
    pub r: EvenRange,
}

/// Transfer instances at one argument. Without `other`, only neighbouring
/// pairs `p' = p - 2` (resp. `q' = q - 2`) inside the range are used; every
/// other transfer relation is a telescoping sum of those.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TransferBox {
    pub arg: String,
    #[serde(default = "default_range")]
    pub p: EvenRange,
    #[serde(default = "default_range")]
    pub q: EvenRange,
    #[serde(default)]
    pub other: Option<EvenRange>,
}

fn default_range() -> EvenRange {
    DEFAULT_TRANSFER_RANGE
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct PoolSpec {
    #[serde(default)]
    pub ext: Vec<ExtBox>,
    #[serde(default)]
    pub transfer: Vec<TransferBox>,
    /// `beta_2` 4-term instances at all ordered pairs of distinct arguments.
    #[serde(default)]
    pub beta2_args: Vec<String>,
}

impl PoolSpec {
    pub fn build(&self) -> Result<Vec<RelationInstance<GaussRat>>, ModuleError> {
        let mut pool = Vec::new();
        for b in &self.ext {
            let (x0, x1) = (parse_arg(&b.tuple[0])?, parse_arg(&b.tuple[1])?);
            for p0 in evens(b.p0) {
                for q0 in evens(b.q0) {
                    for p1 in evens(b.p1) {
                        for q1 in evens(b.q1) {
                            for r in evens(b.r) {
                                let lattice = LatticeParams { p0, q0, p1, q1, r };
                                pool.push(RelationInstance::ext_four_term(
                                    x0.clone(),
                                    x1.clone(),
                                    lattice,
                                )?);
                            }
                        }
                    }
                }
            }
        }
        for b in &self.transfer {
            let x = parse_arg(&b.arg)?;
            for (kind, moving, fixed) in [(TransferKind::P, b.p, b.q), (TransferKind::Q, b.q, b.p)]
            {
                for m in evens(moving) {
                    for f in evens(fixed) {
                        let others: Vec<i64> = match b.other {
                            Some(range) => evens(range).collect(),
                            None if m - 2 >= moving[0] => vec![m - 2],
                            None => vec![],
                        };
                        for o in others {
                            let (p, q) = match kind {
                                TransferKind::P => (m, f),
                                TransferKind::Q => (f, m),
                            };
                            let inst = RelationInstance::transfer(x.clone(), kind, p, q, o)?;
                            if !inst.sum().is_zero() {
                                pool.push(inst);
                            }
                        }
                    }
                }
            }
        }
        let args: Vec<GaussRat> = self
            .beta2_args
            .iter()
            .map(|s| parse_arg(s))
            .collect::<Result<_, _>>()?;
        for a in &args {
            for b in &args {
                if a != b {
                    pool.push(RelationInstance::beta2_four_term(a.clone(), b.clone())?);
                }
            }
        }
        Ok(pool)
    }
}

/// Names accepted by [`cases`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TargetName {
    /// `<y;p0-2,q0+2> - <y;p0,q0> - <x;p1-2,q1+2> + <x;p1,q1>`.
    Lemma1,
    /// `<x;2,2> - <x;2,0> - <x;0,2> + <x;0,0>`.
    Eq2t3,
    /// `<x;p,q>` minus its expansion in the four basis symbols.
    Lemma2 { p: i64, q: i64 },
    /// `{x} - c_x`.
    KernelC,
    /// `<a> - <1-a>` in `beta_2`; searched but not required to succeed.
    Beta2Symmetry,
    /// `<1/a> + (1/a)<a>` in `beta_2`; searched but not required to succeed.
    Beta2Inversion,
}

impl FromStr for TargetName {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "lemma1" => Ok(TargetName::Lemma1),
            "eq2t3" => Ok(TargetName::Eq2t3),
            "kernel-c" => Ok(TargetName::KernelC),
            "beta2-sym" => Ok(TargetName::Beta2Symmetry),
            "beta2-inv" => Ok(TargetName::Beta2Inversion),
            _ => {
                let rest = s
                    .strip_prefix("lemma2:")
                    .ok_or_else(|| format!("unknown target {s:?}"))?;
                let (p, q) = rest
                    .split_once(',')
                    .ok_or_else(|| format!("expected lemma2:<p>,<q>, got {s:?}"))?;
                let n = |v: &str| {
                    v.trim()
                        .parse::<i64>()
                        .map_err(|e| format!("bad integer {v:?}: {e}"))
                };
                let (p, q) = (n(p)?, n(q)?);
                if p % 2 != 0 || q % 2 != 0 {
                    return Err(format!("lemma2 needs even integers, got ({p}, {q})"));
                }
                Ok(TargetName::Lemma2 { p, q })
            }
        }
    }
}

impl fmt::Display for TargetName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TargetName::Lemma1 => write!(f, "lemma1"),
            TargetName::Eq2t3 => write!(f, "eq2t3"),
            TargetName::Lemma2 { p, q } => write!(f, "lemma2:{p},{q}"),
            TargetName::KernelC => write!(f, "kernel-c"),
            TargetName::Beta2Symmetry => write!(f, "beta2-sym"),
            TargetName::Beta2Inversion => write!(f, "beta2-inv"),
        }
    }
}

/// One target instance with the pool searched for it.
#[derive(Debug, Clone)]
pub struct CertifyCase {
    pub label: String,
    pub target: FormalSum<GaussRat>,
    pub pool: PoolSpec,
    /// Whether failing to find a certificate counts as a failed check.
    pub required: bool,
}

fn r(n: i64, d: i64) -> GaussRat {
    GaussRat::real(n, d)
}

fn ext_sum(terms: &[(i64, &GaussRat, i64, i64)]) -> Result<FormalSum<GaussRat>, ModuleError> {
    let mut s = FormalSum::zero(Group::ExtBeta2);
    for &(c, x, p, q) in terms {
        s.add_term(Generator::ext(x.clone(), p, q)?, GaussRat::from_i64(c))?;
    }
    Ok(s)
}

fn transfers_at(arg: &str) -> TransferBox {
    TransferBox {
        arg: arg.to_string(),
        p: DEFAULT_TRANSFER_RANGE,
        q: DEFAULT_TRANSFER_RANGE,
        other: None,
    }
}

fn around(v: i64, shift: i64) -> EvenRange {
    if shift < 0 {
        [v + shift, v]
    } else {
        [v, v + shift]
    }
}

/// Lemma 1 at `(y, x)` and `(p0, q0, p1, q1)`.
pub fn lemma1_case(
    y: &str,
    x: &str,
    p0: i64,
    q0: i64,
    p1: i64,
    q1: i64,
) -> Result<CertifyCase, ModuleError> {
    let (gy, gx) = (parse_arg(y)?, parse_arg(x)?);
    let target = ext_sum(&[
        (1, &gy, p0 - 2, q0 + 2),
        (-1, &gy, p0, q0),
        (-1, &gx, p1 - 2, q1 + 2),
        (1, &gx, p1, q1),
    ])?;
    let pool = PoolSpec {
        ext: vec![ExtBox {
            tuple: [y.to_string(), x.to_string()],
            p0: around(p0, -2),
            q0: around(q0, 2),
            p1: around(p1, -2),
            q1: around(q1, 2),
            r: [0, 2],
        }],
        transfer: vec![transfers_at(y), transfers_at(x)],
        beta2_args: Vec::new(),
    };
    Ok(CertifyCase {
        label: format!("lemma1 y={y} x={x} p0={p0} q0={q0} p1={p1} q1={q1}"),
        target,
        pool,
        required: true,
    })
}

/// `<x;2,2> - <x;2,0> - <x;0,2> + <x;0,0>`, searched over extended instances
/// on the tuple `(y, x)` and transfers at `x`.
pub fn eq2t3_case(y: &str, x: &str) -> Result<CertifyCase, ModuleError> {
    let gx = parse_arg(x)?;
    let target = ext_sum(&[
        (1, &gx, 2, 2),
        (-1, &gx, 2, 0),
        (-1, &gx, 0, 2),
        (1, &gx, 0, 0),
    ])?;
    let pool = PoolSpec {
        ext: vec![ExtBox {
            tuple: [y.to_string(), x.to_string()],
            p0: [-2, 0],
            q0: [0, 2],
            p1: [-2, 2],
            q1: [0, 2],
            r: [0, 2],
        }],
        transfer: vec![transfers_at(x)],
        beta2_args: Vec::new(),
    };
    Ok(CertifyCase {
        label: format!("eq2t3 x={x} (tuple y={y})"),
        target,
        pool,
        required: true,
    })
}

pub fn lemma2_case(x: &str, p: i64, q: i64) -> Result<CertifyCase, ModuleError> {
    let gx = parse_arg(x)?;
    let target = FormalSum::single(Generator::ext(gx.clone(), p, q)?, GaussRat::one())
        .checked_sub(&lemma2_expand(gx, p, q)?)?;
    let pool = PoolSpec {
        ext: Vec::new(),
        transfer: vec![transfers_at(x)],
        beta2_args: Vec::new(),
    };
    Ok(CertifyCase {
        label: format!("lemma2 x={x} p={p} q={q}"),
        target,
        pool,
        required: true,
    })
}

/// `{x} - c_x`. The pool holds extended instances on `(y, x)`, which tie `{x}`
/// to `c_w` for `w = y/(1-x)`, and on `(w, x)`, which tie `c_w` to `c_x`.
pub fn kernel_c_case(y: &str, x: &str) -> Result<CertifyCase, ModuleError> {
    let (gy, gx) = (parse_arg(y)?, parse_arg(x)?);
    let w = gy / (GaussRat::one() - gx.clone());
    let target = bracket(gx.clone())?.checked_sub(&kernel_c(gx)?)?;
    let [wr, wi] = w.to_strings();
    let w = if wi == "0" { wr } else { format!("{wr},{wi}") };
    let pool = PoolSpec {
        ext: vec![
            ExtBox {
                tuple: [y.to_string(), x.to_string()],
                p0: [0, 0],
                q0: [0, 0],
                p1: [0, 0],
                q1: [0, 2],
                r: [0, 2],
            },
            ExtBox {
                tuple: [w.clone(), x.to_string()],
                p0: [0, 2],
                q0: [-2, 0],
                p1: [0, 2],
                q1: [-2, 0],
                r: [0, 2],
            },
        ],
        transfer: Vec::new(),
        beta2_args: Vec::new(),
    };
    Ok(CertifyCase {
        label: format!("kernel-c x={x} (via y={y}, w={w})"),
        target,
        pool,
        required: true,
    })
}

/// Arguments for the `beta_2` search: the orbit of `1/3` and of `-1` under
/// `a -> 1 - a` and `a -> 1/a`.
const BETA2_ARGS: [&str; 9] = ["1/3", "2/3", "3", "3/2", "-1/2", "-2", "-1", "2", "1/2"];

fn beta2_case(inversion: bool) -> Result<CertifyCase, ModuleError> {
    let a = r(1, 3);
    let g = |v: GaussRat| Generator::beta2(v);
    let target = if inversion {
        let inv = GaussRat::one() / a.clone();
        FormalSum::from_terms(
            Group::Beta2,
            [(GaussRat::one(), g(inv.clone())?), (inv, g(a)?)],
        )?
    } else {
        FormalSum::from_terms(
            Group::Beta2,
            [
                (GaussRat::one(), g(a.clone())?),
                (-GaussRat::one(), g(GaussRat::one() - a)?),
            ],
        )?
    };
    let pool = PoolSpec {
        beta2_args: BETA2_ARGS.iter().map(|s| s.to_string()).collect(),
        ..PoolSpec::default()
    };
    let label = if inversion {
        "beta2 <1/a> = -(1/a)<a> at a=1/3"
    } else {
        "beta2 <a> = <1-a> at a=1/3"
    };
    Ok(CertifyCase {
        label: label.to_string(),
        target,
        pool,
        required: false,
    })
}

/// The standard instances of a named target.
pub fn cases(name: TargetName) -> Result<Vec<CertifyCase>, ModuleError> {
    match name {
        TargetName::Lemma1 => Ok(vec![
            lemma1_case("1/5", "1/3", 0, 0, 0, 0)?,
            lemma1_case("1/7", "1/5", 2, -2, 2, -2)?,
            lemma1_case("1/5", "2/7", 4, 2, -2, 0)?,
        ]),
        TargetName::Eq2t3 => Ok(vec![
            eq2t3_case("1/5", "1/3")?,
            eq2t3_case("1/7", "1/5")?,
            eq2t3_case("1/5", "2/7")?,
        ]),
        TargetName::Lemma2 { p, q } => Ok(vec![lemma2_case("1/3", p, q)?]),
        TargetName::KernelC => Ok(vec![
            kernel_c_case("1/5", "1/3")?,
            kernel_c_case("1/5", "2/7")?,
        ]),
        TargetName::Beta2Symmetry => Ok(vec![beta2_case(false)?]),
        TargetName::Beta2Inversion => Ok(vec![beta2_case(true)?]),
    }
}

/// Outcome of one certificate search.
#[derive(Debug, Clone, Serialize)]
pub struct CaseReport {
    pub label: String,
    pub required: bool,
    pub target: FormalSum<GaussRat>,
    pub pool_size: usize,
    pub found: bool,
    pub verified: bool,
    pub certificate: Option<Certificate>,
}

impl CaseReport {
    /// A required case passes only with a verified certificate; an optional
    /// one only fails if a certificate was produced but does not verify.
    pub fn passed(&self) -> bool {
        if self.required {
            self.found && self.verified
        } else {
            !self.found || self.verified
        }
    }
}

/// Builds the pool (or `pool_override`), searches and verifies.
pub fn run_case(
    case: &CertifyCase,
    pool_override: Option<&PoolSpec>,
) -> Result<CaseReport, ModuleError> {
    let pool = pool_override.unwrap_or(&case.pool).build()?;
    let certificate = find_certificate(&case.target, &pool)?;
    let verified = certificate
        .as_ref()
        .map(|c| verify_certificate(&case.target, c))
        .unwrap_or(false);
    Ok(CaseReport {
        label: case.label.clone(),
        required: case.required,
        target: case.target.clone(),
        pool_size: pool.len(),
        found: certificate.is_some(),
        verified,
        certificate,
    })
}
