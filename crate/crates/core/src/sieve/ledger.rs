//! Proof ledger: versioned data records of inequality steps, loaded from
//! RON shipped with the crate and re-verified exactly at run time.

use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;

use crate::mustar::MuStarTable;
use crate::rat::{Rat, Thresholds};
use crate::sieve::expr::{Ctx, Rel, Term};
use crate::zeta;
use crate::EngineError;

#[derive(Clone, Debug, Serialize, Deserialize)]
pub enum Check {
    /// one comparison
    Cmp(Term, Rel, Term),
    /// for every d in lo..=hi (striding by `step`): lhs(d) rel rhs, with d
    /// substituting for the 0 placeholder in terms
    ForAllD {
        lo: u64,
        hi: u64,
        #[serde(default)]
        step: Option<u64>,
        lhs: Term,
        rel: Rel,
        rhs: Term,
    },
    /// zeta*(d, p) < bound for all d >= d_min: exact sweep to 1000 plus the
    /// certified global-coefficient closure beyond
    StarTail { d_min: u64, below: String },
    /// structural fact justified outside the numeric engine; recorded in
    /// trails as assumed, never counted as verified
    External(String),
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct Step {
    pub id: String,
    /// evaluation prime for zeta terms
    pub p: u64,
    /// all primes this step must cover; empty means just `p`
    #[serde(default)]
    pub covers: Vec<u64>,
    /// dimension context for Zt terms
    #[serde(default)]
    pub n: Option<u64>,
    pub check: Check,
    pub note: String,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct PropSteps {
    pub id: String,
    pub steps: Vec<Step>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct Ledger {
    pub version: u32,
    pub props: Vec<PropSteps>,
}

pub const LEDGER_RON: &str = include_str!("../../data/ledger.ron");

impl Ledger {
    pub fn builtin() -> Result<Self, EngineError> {
        ron::from_str(LEDGER_RON)
            .map_err(|e| EngineError::Parse(format!("ledger data: {e}")))
    }

    pub fn step_count(&self) -> usize {
        self.props.iter().map(|p| p.steps.len()).sum()
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum StepOutcome {
    Verified,
    Assumed,
}

/// Result of verifying one proposition's steps.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct PropReport {
    pub id: String,
    pub checked: usize,
    pub verified: usize,
    pub assumed: usize,
}

/// Verifies ledger steps on demand and remembers outcomes; every failed
/// comparison is a hard error carrying the step id.
pub struct Checker<'a> {
    ledger: &'a Ledger,
    th: &'a Thresholds,
    mu_tables: BTreeMap<u64, MuStarTable>,
    index: BTreeMap<(String, String), Step>,
    outcomes: BTreeMap<(String, String), StepOutcome>,
}

impl<'a> Checker<'a> {
    pub fn new(ledger: &'a Ledger, th: &'a Thresholds) -> Self {
        let mut index = BTreeMap::new();
        for prop in &ledger.props {
            for s in &prop.steps {
                let key = (prop.id.clone(), s.id.clone());
                assert!(
                    index.insert(key, s.clone()).is_none(),
                    "duplicate ledger step {}/{}",
                    prop.id,
                    s.id
                );
            }
        }
        Checker {
            ledger,
            th,
            mu_tables: BTreeMap::new(),
            index,
            outcomes: BTreeMap::new(),
        }
    }

    fn mu(&mut self, p: u64) -> &MuStarTable {
        self.mu_tables.entry(p).or_insert_with(|| MuStarTable::new(p))
    }

    /// Verify one step by `(prop, id)`. Returns its outcome, caching the
    /// verdict; a failing check aborts with the offending comparison.
    pub fn check(&mut self, prop: &str, id: &str) -> Result<StepOutcome, EngineError> {
        let key = (prop.to_string(), id.to_string());
        if let Some(o) = self.outcomes.get(&key) {
            return Ok(o.clone());
        }
        let step = self
            .index
            .get(&key)
            .ok_or_else(|| {
                EngineError::Verification(format!("missing ledger step {prop}/{id}"))
            })?
            .clone();
        let outcome = self.verify_step(&step)?;
        self.outcomes.insert(key, outcome.clone());
        Ok(outcome)
    }

    fn verify_step(&mut self, step: &Step) -> Result<StepOutcome, EngineError> {
        if let Check::External(_) = step.check {
            return Ok(StepOutcome::Assumed);
        }
        let mut primes = vec![step.p];
        for &q in &step.covers {
            if !primes.contains(&q) {
                primes.push(q);
            }
        }
        for p in primes {
            self.verify_at(step, p)?;
        }
        Ok(StepOutcome::Verified)
    }

    fn verify_at(&mut self, step: &Step, p: u64) -> Result<(), EngineError> {
        // take the table out to satisfy the borrow checker; tables are cheap
        self.mu(p);
        let mu = self.mu_tables.get(&p).unwrap();
        let ctx = Ctx {
            p,
            n: step.n,
            th: self.th,
            mu,
        };
        let fail = |detail: String| {
            Err(EngineError::Verification(format!(
                "ledger step {} failed at p={p}: {detail} ({})",
                step.id, step.note
            )))
        };
        match &step.check {
            Check::Cmp(lhs, rel, rhs) => {
                let lv = lhs.eval(&ctx, None)?;
                let rv = rhs.eval(&ctx, None)?;
                if !rel.holds(&lv, &rv) {
                    return fail(format!("{lv} {} {rv} is false", rel.symbol()));
                }
            }
            Check::ForAllD {
                lo,
                hi,
                step: stride,
                lhs,
                rel,
                rhs,
            } => {
                let stride = stride.unwrap_or(1).max(1);
                let mut d = *lo;
                while d <= *hi {
                    let lv = lhs.eval(&ctx, Some(d))?;
                    let rv = rhs.eval(&ctx, Some(d))?;
                    if !rel.holds(&lv, &rv) {
                        return fail(format!(
                            "at d={d}: {lv} {} {rv} is false",
                            rel.symbol()
                        ));
                    }
                    d += stride;
                }
            }
            Check::StarTail { d_min, below } => {
                let bound = Rat::parse(below)?;
                if !zeta::zeta_star_tail_below(p, *d_min, &bound, mu) {
                    return fail(format!("zeta* tail from d={d_min} not below {below}"));
                }
            }
            Check::External(_) => unreachable!(),
        }
        Ok(())
    }

    /// Verify every step of every proposition, in ledger order.
    pub fn verify_all(&mut self) -> Result<Vec<PropReport>, EngineError> {
        let props: Vec<(String, Vec<String>)> = self
            .ledger
            .props
            .iter()
            .map(|p| (p.id.clone(), p.steps.iter().map(|s| s.id.clone()).collect()))
            .collect();
        let mut reports = Vec::new();
        for (pid, ids) in props {
            let mut verified = 0;
            let mut assumed = 0;
            for sid in &ids {
                match self.check(&pid, sid)? {
                    StepOutcome::Verified => verified += 1,
                    StepOutcome::Assumed => assumed += 1,
                }
            }
            reports.push(PropReport {
                id: pid,
                checked: ids.len(),
                verified,
                assumed,
            });
        }
        Ok(reports)
    }
}
