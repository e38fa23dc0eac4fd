//! Expression language for ledger steps.
//!
//! Each proof step carries a comparison between sums of zeta-family terms,
//! aggregate quantities and decimal literals. Evaluation is exact: literals
//! parse to rationals and every term evaluates through the zeta module.

use serde::{Deserialize, Serialize};

use crate::mustar::MuStarTable;
use crate::rat::{Rat, Thresholds};
use crate::zeta::{self, Signature};
use crate::EngineError;

/// A term of a ledger comparison. Inside a `ForAllD` check, a `d` field of 0
/// denotes the bound variable.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub enum Term {
    /// literal constant, decimal or fraction
    C(String),
    /// zeta(d)
    Z(u64),
    /// zeta_{s...}(d)
    Zs(u64, Vec<u64>),
    /// zeta*(d)
    Zst(u64),
    /// zeta*_{s...}(d)
    Zsts(u64, Vec<u64>),
    /// zeta^t(d); requires the step's dimension context
    Zt(u64, u64),
    /// A of a signature
    A(Vec<u64>),
    /// S of a signature under the run thresholds
    S(Vec<u64>),
    /// aggregate upper bound (2 + eps0)/(1 - 1/p - eps)
    ABound,
    /// characteristic upper bound A/((1 - eps)A - (2 + eps0)), literal A
    PBound(String),
    /// tuple-length upper bound (4 + 2 eps0) p/((1 - 2 eps) p - 1)
    RBound,
    Sum(Vec<Term>),
    Scaled(String, Box<Term>),
    Max(Vec<Term>),
    Min(Vec<Term>),
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Rel {
    Lt,
    Le,
    Gt,
    Ge,
    Eq,
}

impl Rel {
    pub fn holds(&self, lhs: &Rat, rhs: &Rat) -> bool {
        match self {
            Rel::Lt => lhs < rhs,
            Rel::Le => lhs <= rhs,
            Rel::Gt => lhs > rhs,
            Rel::Ge => lhs >= rhs,
            Rel::Eq => lhs == rhs,
        }
    }

    pub fn symbol(&self) -> &'static str {
        match self {
            Rel::Lt => "<",
            Rel::Le => "<=",
            Rel::Gt => ">",
            Rel::Ge => ">=",
            Rel::Eq => "=",
        }
    }
}

/// Evaluation context for one step.
pub struct Ctx<'a> {
    pub p: u64,
    pub n: Option<u64>,
    pub th: &'a Thresholds,
    pub mu: &'a MuStarTable,
}

impl Term {
    pub fn eval(&self, ctx: &Ctx<'_>, d_var: Option<u64>) -> Result<Rat, EngineError> {
        let resolve = |d: u64| -> Result<u64, EngineError> {
            if d == 0 {
                d_var.ok_or_else(|| {
                    EngineError::Domain("d placeholder outside ForAllD".into())
                })
            } else {
                Ok(d)
            }
        };
        Ok(match self {
            Term::C(s) => Rat::parse(s)?,
            Term::Z(d) => zeta::zeta(resolve(*d)?, ctx.p),
            Term::Zs(d, s) => zeta::zeta_s(resolve(*d)?, ctx.p, s),
            Term::Zst(d) => zeta::zeta_star(resolve(*d)?, ctx.p, ctx.mu),
            Term::Zsts(d, s) => zeta::zeta_star_s(resolve(*d)?, ctx.p, s, ctx.mu),
            Term::Zt(d, t) => {
                let n = ctx.n.ok_or_else(|| {
                    EngineError::Domain("Zt term requires dimension context".into())
                })?;
                zeta::zeta_t_power(resolve(*d)?, ctx.p, n, *t)
            }
            Term::A(sig) => {
                let resolved: Vec<u64> =
                    sig.iter().map(|&d| resolve(d)).collect::<Result<_, _>>()?;
                Signature::new(resolved)?.a_of()
            }
            Term::S(sig) => {
                let resolved: Vec<u64> =
                    sig.iter().map(|&d| resolve(d)).collect::<Result<_, _>>()?;
                Signature::new(resolved)?.s_of(ctx.th)
            }
            Term::ABound => aggregate_bound(ctx.p, ctx.th)?,
            Term::PBound(a) => characteristic_bound(&Rat::parse(a)?, ctx.th)?,
            Term::RBound => tuple_length_bound(ctx.p, ctx.th)?,
            Term::Sum(ts) => {
                let mut acc = Rat::zero();
                for t in ts {
                    acc += &t.eval(ctx, d_var)?;
                }
                acc
            }
            Term::Scaled(c, t) => Rat::parse(c)? * t.eval(ctx, d_var)?,
            Term::Max(ts) => {
                let mut vals = Vec::new();
                for t in ts {
                    vals.push(t.eval(ctx, d_var)?);
                }
                vals.into_iter().max().ok_or_else(|| {
                    EngineError::Domain("empty Max".into())
                })?
            }
            Term::Min(ts) => {
                let mut vals = Vec::new();
                for t in ts {
                    vals.push(t.eval(ctx, d_var)?);
                }
                vals.into_iter().min().ok_or_else(|| {
                    EngineError::Domain("empty Min".into())
                })?
            }
        })
    }

    /// True if the term's value at fixed exponents is non-increasing in p,
    /// so a check at the evaluation prime transfers to larger primes.
    pub fn monotone_in_p(&self) -> bool {
        match self {
            Term::C(_) | Term::A(_) | Term::S(_) => true,
            Term::Z(_) | Term::Zs(..) | Term::Zt(..) => true,
            // starred terms change exponents with p through mu*
            Term::Zst(_) | Term::Zsts(..) => false,
            Term::ABound | Term::PBound(_) | Term::RBound => false,
            Term::Sum(ts) | Term::Max(ts) | Term::Min(ts) => {
                ts.iter().all(|t| t.monotone_in_p())
            }
            Term::Scaled(_, t) => t.monotone_in_p(),
        }
    }
}

/// A < (2 + eps0)/(1 - 1/p - eps); at the default thresholds this is the
/// familiar 2.0002 p/(.99 p - 1).
pub fn aggregate_bound(p: u64, th: &Thresholds) -> Result<Rat, EngineError> {
    let denom = Rat::one() - Rat::new(1, p as i64) - th.eps.clone();
    if !denom.is_positive() {
        return Err(EngineError::Domain(format!(
            "aggregate bound inapplicable at p={p}"
        )));
    }
    Ok((Rat::from_int(2) + th.eps0.clone()) / denom)
}

/// p < A/((1 - eps) A - (2 + eps0)).
pub fn characteristic_bound(a: &Rat, th: &Thresholds) -> Result<Rat, EngineError> {
    let denom = (Rat::one() - th.eps.clone()) * a - (Rat::from_int(2) + th.eps0.clone());
    if !denom.is_positive() {
        return Err(EngineError::Domain(
            "characteristic bound inapplicable: denominator <= 0".into(),
        ));
    }
    Ok(a / &denom)
}

/// r < (4 + 2 eps0) p/((1 - 2 eps) p - 1).
pub fn tuple_length_bound(p: u64, th: &Thresholds) -> Result<Rat, EngineError> {
    let denom = (Rat::one() - Rat::from_int(2) * th.eps.clone()) * Rat::from_int(p as i64)
        - Rat::one();
    if !denom.is_positive() {
        return Err(EngineError::Domain(format!(
            "tuple-length bound inapplicable at p={p}"
        )));
    }
    Ok((Rat::from_int(4) + Rat::from_int(2) * th.eps0.clone()) * Rat::from_int(p as i64) / denom)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn generalized_bounds_match_default_constants() {
        let th = Thresholds::default();
        // 2.0002 p / (.99 p - 1)
        for p in [11u64, 23, 97] {
            let got = aggregate_bound(p, &th).unwrap();
            let expect = Rat::parse("2.0002").unwrap() * Rat::from_int(p as i64)
                / (Rat::parse(".99").unwrap() * Rat::from_int(p as i64) - Rat::one());
            assert_eq!(got, expect);
        }
        // 4.0004 p / (.98 p - 1)
        for p in [2u64, 3, 5, 7] {
            let got = tuple_length_bound(p, &th).unwrap();
            let expect = Rat::parse("4.0004").unwrap() * Rat::from_int(p as i64)
                / (Rat::parse(".98").unwrap() * Rat::from_int(p as i64) - Rat::one());
            assert_eq!(got, expect);
        }
        // A/(.99A - 2.0002)
        let a = Rat::new(13, 6);
        let got = characteristic_bound(&a, &th).unwrap();
        let expect = &a
            / &(Rat::parse(".99").unwrap() * &a - Rat::parse("2.0002").unwrap());
        assert_eq!(got, expect);
        assert!(got < Rat::from_int(17));
    }

    #[test]
    fn term_evaluation() {
        let th = Thresholds::default();
        let mu = MuStarTable::new(23);
        let ctx = Ctx {
            p: 23,
            n: None,
            th: &th,
            mu: &mu,
        };
        let t = Term::Sum(vec![
            Term::Zs(2, vec![2]),
            Term::Zs(3, vec![3]),
            Term::Zs(7, vec![3]),
        ]);
        let v = t.eval(&ctx, None).unwrap();
        assert!(v < Rat::parse(".9786").unwrap());
        assert!(Term::S(vec![2, 3, 7]).eval(&ctx, None).unwrap() > Rat::parse(".9795").unwrap());
    }
}
