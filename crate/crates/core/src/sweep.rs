//! Randomized porism sweeps over many configurations.
//!
//! Trial `i` draws everything from a generator seeded by `(seed, i)`, so
//! the records do not depend on how trials are scheduled.

use std::collections::BTreeMap;
use std::time::Instant;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

use crate::error::Result;
use crate::field::Field;
use crate::gen::random_pair_of_type;
use crate::io::pair_to_json;
use crate::par;
use crate::poncelet::{porism_check, Outcome, PonceletConfig};
use crate::projective::{Conic, IntersectionType};

#[derive(Clone, Debug)]
pub struct SweepOptions {
    pub field: Field,
    /// `None` cycles through all five types.
    pub itype: Option<IntersectionType>,
    pub trials: usize,
    pub num_starts: usize,
    pub max_steps: u64,
    pub seed: u64,
}

#[derive(Clone, Debug)]
pub struct SweepRecord {
    pub index: usize,
    pub seed: u64,
    pub field: Field,
    pub c: Conic,
    pub d: Conic,
    pub itype: IntersectionType,
    /// Period → number of starts closing with it.
    pub periods: BTreeMap<u64, usize>,
    pub open: usize,
    pub degenerate: usize,
    pub pass: bool,
    pub reason: Option<String>,
    pub elapsed_ms: f64,
}

/// The generator seed of trial `index`.
pub fn trial_seed(seed: u64, index: usize) -> u64 {
    seed ^ (index as u64).wrapping_add(1).wrapping_mul(0x9e37_79b9_7f4a_7c15)
}

/// Checks the outcomes of one configuration against the closure theorem:
/// one common behaviour for all starts, and period `p` for osculating
/// pairs in characteristic `p`.
pub fn verdict(field: &Field, itype: IntersectionType, outcomes: &[Outcome]) -> Option<String> {
    if let Some(step) = outcomes.iter().find_map(|o| match o {
        Outcome::HitDegenerate { step } => Some(*step),
        _ => None,
    }) {
        return Some(format!("a start reached a tangency point after {step} steps"));
    }
    let periods: Vec<Option<u64>> = outcomes.iter().map(|o| o.period()).collect();
    if periods.windows(2).any(|w| w[0] != w[1]) {
        return Some("starts disagree".into());
    }
    if itype.is_osculating() {
        let p = field.characteristic();
        let want = (p != 0).then_some(p);
        if let Some(got) = periods.first() {
            if *got != want {
                return Some(format!("osculating pair closed with {got:?}, expected {want:?}"));
            }
        }
    }
    None
}

pub fn run_trial(opts: &SweepOptions, index: usize) -> Result<SweepRecord> {
    let started = Instant::now();
    let seed = trial_seed(opts.seed, index);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let itype = opts
        .itype
        .unwrap_or(IntersectionType::ALL[index % IntersectionType::ALL.len()]);
    let (c, d) = random_pair_of_type(&opts.field, itype, &mut rng)?;
    let cfg = PonceletConfig::new(c.clone(), d.clone())?;
    let report = porism_check(&cfg, opts.num_starts, opts.max_steps, seed)?;
    let outcomes: Vec<Outcome> = report.runs.iter().map(|r| r.result.outcome).collect();
    let mut periods = BTreeMap::new();
    let (mut open, mut degenerate) = (0, 0);
    for o in &outcomes {
        match o {
            Outcome::Closed { period } => *periods.entry(*period).or_insert(0) += 1,
            Outcome::Open { .. } => open += 1,
            Outcome::HitDegenerate { .. } => degenerate += 1,
        }
    }
    let reason = verdict(&opts.field, cfg.intersection_type(), &outcomes);
    Ok(SweepRecord {
        index,
        seed,
        field: opts.field.clone(),
        c,
        d,
        itype: cfg.intersection_type(),
        periods,
        open,
        degenerate,
        pass: reason.is_none(),
        reason,
        elapsed_ms: started.elapsed().as_secs_f64() * 1e3,
    })
}

/// All trials, in index order.
pub fn sweep(opts: &SweepOptions) -> Vec<Result<SweepRecord>> {
    let idx: Vec<usize> = (0..opts.trials).collect();
    par::map(&idx, |&i| run_trial(opts, i))
}

impl SweepRecord {
    /// The JSON-lines record; timing only when asked, since it is the one
    /// field that varies between identical runs.
    pub fn to_json(&self, timing: bool) -> Value {
        let periods: BTreeMap<String, usize> =
            self.periods.iter().map(|(k, v)| (k.to_string(), *v)).collect();
        let mut o = json!({
            "index": self.index,
            "seed": self.seed,
            "field": self.field.to_string(),
            "pair": pair_to_json(&self.c, &self.d),
            "type": self.itype.to_string(),
            "periods": periods,
            "open": self.open,
            "degenerate": self.degenerate,
            "result": if self.pass { "PASS" } else { "FAIL" },
        });
        if let Some(r) = &self.reason {
            o["reason"] = json!(r);
        }
        if timing {
            o["elapsed_ms"] = json!(self.elapsed_ms);
        }
        o
    }
}
