//! The Poncelet process on a pair of smooth conics.
//!
//! A state is a pair `(c, d)` with `c ∈ C`, `d ∈ D` and `c` on the tangent
//! of `D` at `d`. One step replaces `c` by the second point of `C` on that
//! tangent, then `d` by the second point of `D` on the polar of the new `c`.
//! Both are second roots of quadratics with one known root, so after the
//! first state every step stays in the same field.

use std::fmt;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::field::{Embedding, Field};
use crate::par;
use crate::projective::{
    intersection_multiplicities, is_tangency_point, tangency_points, Conic, IntersectionType,
    P1Point, PointSet, ProjPoint,
};

/// Longest orbit kept in a [`ProcessResult`].
pub const ORBIT_LIMIT: usize = 64;

/// Which of the two admissible `d₁` to start from, in canonical order.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash)]
pub enum Branch {
    #[default]
    Min,
    Max,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PonceletConfig {
    c: Conic,
    d: Conic,
    itype: IntersectionType,
    tangency: PointSet,
}

impl PonceletConfig {
    pub fn new(c: Conic, d: Conic) -> Result<PonceletConfig> {
        if c.field().characteristic() == 2 {
            return Err(Error::Unsupported(
                "the Poncelet process is undefined in characteristic 2: every tangent of a \
                 conic passes through its strange point"
                    .into(),
            ));
        }
        let itype = IntersectionType::from_multiplicities(&intersection_multiplicities(&c, &d)?)?;
        let tangency = tangency_points(&c, &d)?;
        Ok(PonceletConfig {
            c,
            d,
            itype,
            tangency,
        })
    }

    pub fn c(&self) -> &Conic {
        &self.c
    }

    pub fn d(&self) -> &Conic {
        &self.d
    }

    pub fn field(&self) -> &Field {
        self.c.field()
    }

    pub fn intersection_type(&self) -> IntersectionType {
        self.itype
    }

    /// Tangency points over their own field of definition.
    pub fn tangency(&self) -> &PointSet {
        &self.tangency
    }

    pub fn is_tangency(&self, p: &ProjPoint) -> bool {
        is_tangency_point(&self.c, &self.d, p)
    }

    /// The same configuration over a larger field.
    pub fn map(&self, emb: &Embedding) -> PonceletConfig {
        PonceletConfig {
            c: self.c.map(emb),
            d: self.d.map(emb),
            itype: self.itype,
            tangency: self.tangency.clone(),
        }
    }

    fn is_valid(&self, s: &PonceletState) -> bool {
        self.c.contains(&s.c)
            && self.d.contains(&s.d)
            && self.d.polarization(s.d.coords(), s.c.coords()).is_zero()
    }
}

/// `(cᵢ, dᵢ)`; equality ignores the step index.
#[derive(Clone, Debug)]
pub struct PonceletState {
    pub c: ProjPoint,
    pub d: ProjPoint,
    pub index: u64,
}

impl PartialEq for PonceletState {
    fn eq(&self, other: &Self) -> bool {
        self.c == other.c && self.d == other.d
    }
}

impl Eq for PonceletState {}

impl fmt::Display for PonceletState {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "#{} c={} d={}", self.index, self.c, self.d)
    }
}

/// The configuration and first state, lifted one quadratic step when the
/// two candidates for `d₁` are conjugate.
#[derive(Clone, Debug)]
pub struct Started {
    pub config: PonceletConfig,
    pub state: PonceletState,
    pub lifted: bool,
}

pub fn start(cfg: &PonceletConfig, c1: &ProjPoint, branch: Branch) -> Result<Started> {
    if c1.field() != cfg.field() {
        return Err(Error::FieldMismatch(cfg.field().to_string(), c1.field().to_string()));
    }
    if !cfg.c.contains(c1) {
        return Err(Error::NotOnConic);
    }
    if cfg.is_tangency(c1) {
        return Ok(Started {
            config: cfg.clone(),
            state: PonceletState {
                c: c1.clone(),
                d: c1.clone(),
                index: 1,
            },
            lifted: false,
        });
    }
    let hits = cfg.d.intersect_line(&cfg.d.polar(c1)?)?;
    let chosen = match branch {
        Branch::Min => hits.points.first(),
        Branch::Max => hits.points.last(),
    }
    .map(|(p, _)| p.clone())
    .ok_or_else(|| Error::Invariant("the polar misses D".into()))?;
    let lifted = !hits.embedding.is_identity();
    let config = if lifted { cfg.map(&hits.embedding) } else { cfg.clone() };
    Ok(Started {
        config,
        state: PonceletState {
            c: c1.map(&hits.embedding),
            d: chosen,
            index: 1,
        },
        lifted,
    })
}

fn checked(cfg: &PonceletConfig, s: PonceletState) -> Result<PonceletState> {
    if cfg.is_valid(&s) {
        Ok(s)
    } else {
        Err(Error::Invariant(format!("state {s} left E")))
    }
}

/// `ν = σ ∘ τ`.
pub fn step(cfg: &PonceletConfig, s: &PonceletState) -> Result<PonceletState> {
    let c = cfg.c.other_intersection(&cfg.d.tangent_at(&s.d)?, &s.c)?;
    let d = cfg.d.other_intersection(&cfg.d.polar(&c)?, &s.d)?;
    checked(cfg, PonceletState { c, d, index: s.index + 1 })
}

/// `ν⁻¹ = τ ∘ σ`.
pub fn step_back(cfg: &PonceletConfig, s: &PonceletState) -> Result<PonceletState> {
    let d = cfg.d.other_intersection(&cfg.d.polar(&s.c)?, &s.d)?;
    let c = cfg.c.other_intersection(&cfg.d.tangent_at(&d)?, &s.c)?;
    checked(cfg, PonceletState { c, d, index: s.index.saturating_sub(1) })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Outcome {
    /// `(c_{n+1}, d_{n+1}) = (c₁, d₁)` for the least such `n`.
    Closed { period: u64 },
    /// No return within the step budget.
    Open { steps: u64 },
    /// A state that started off the tangency set reached it.
    HitDegenerate { step: u64 },
}

impl fmt::Display for Outcome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Outcome::Closed { period } => write!(f, "closed, period {period}"),
            Outcome::Open { steps } => write!(f, "open after {steps} steps"),
            Outcome::HitDegenerate { step } => write!(f, "reached a tangency point at step {step}"),
        }
    }
}

impl Outcome {
    pub fn period(self) -> Option<u64> {
        match self {
            Outcome::Closed { period } => Some(period),
            _ => None,
        }
    }
}

#[derive(Clone, Debug)]
pub struct ProcessResult {
    pub outcome: Outcome,
    /// The first states of the orbit, at most [`ORBIT_LIMIT`].
    pub orbit: Vec<PonceletState>,
    /// Whether `orbit` is the whole cycle.
    pub orbit_complete: bool,
    /// Whether starting required a quadratic extension.
    pub lifted: bool,
    /// The field the orbit lives in.
    pub field: Field,
}

/// `10·q` over a finite field of order `q`, `10 000` in characteristic 0.
pub fn default_max_steps(field: &Field) -> u64 {
    match field.order() {
        Some(q) => u64::try_from(q.saturating_mul(10)).unwrap_or(u64::MAX),
        None => 10_000,
    }
}

pub fn run(
    cfg: &PonceletConfig,
    c1: &ProjPoint,
    branch: Branch,
    max_steps: u64,
) -> Result<ProcessResult> {
    let Started {
        config,
        state: first,
        lifted,
    } = start(cfg, c1, branch)?;
    let field = config.field().clone();
    let mut orbit = vec![first.clone()];
    let mut s = first.clone();
    let tangent_start = config.is_tangency(&first.c);
    let mut outcome = Outcome::Open { steps: max_steps };
    for i in 1..=max_steps {
        s = step(&config, &s)?;
        if s == first {
            outcome = Outcome::Closed { period: i };
            break;
        }
        if !tangent_start && s.c == s.d && config.is_tangency(&s.c) {
            outcome = Outcome::HitDegenerate { step: i };
            break;
        }
        if orbit.len() < ORBIT_LIMIT {
            orbit.push(s.clone());
        }
    }
    let orbit_complete = matches!(outcome, Outcome::Closed { period } if period as usize <= ORBIT_LIMIT);
    Ok(ProcessResult {
        outcome,
        orbit,
        orbit_complete,
        lifted,
        field,
    })
}

#[derive(Clone, Debug)]
pub struct StartRecord {
    pub c1: ProjPoint,
    pub result: ProcessResult,
}

#[derive(Clone, Debug)]
pub struct PorismReport {
    pub itype: IntersectionType,
    pub runs: Vec<StartRecord>,
    /// Whether every non-tangency point of `C` over the field was used.
    pub exhaustive: bool,
    pub pass: bool,
}

impl PorismReport {
    /// Observed periods, `None` for runs that stayed open.
    pub fn periods(&self) -> Vec<Option<u64>> {
        self.runs.iter().map(|r| r.result.outcome.period()).collect()
    }

    /// The common period when the report passes with closed runs.
    pub fn period(&self) -> Option<u64> {
        if !self.pass {
            return None;
        }
        self.runs.first().and_then(|r| r.result.outcome.period())
    }
}

/// Whether the outcomes agree: all closed with one period, or all open.
pub fn outcomes_agree(outcomes: &[Outcome]) -> bool {
    if outcomes.iter().any(|o| matches!(o, Outcome::HitDegenerate { .. })) {
        return false;
    }
    let periods: Vec<Option<u64>> = outcomes.iter().map(|o| o.period()).collect();
    periods.windows(2).all(|w| w[0] == w[1])
}

/// Starting points in `C ∖ T` over the configuration's field: all of them
/// when there are at most `num_starts`, else a seeded sample.
pub fn sample_starts(cfg: &PonceletConfig, num_starts: usize, seed: u64) -> Result<(Vec<ProjPoint>, bool)> {
    let field = cfg.field().clone();
    let par = cfg.c.parametrize(&cfg.c.find_point(seed)?)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let admissible = |p: &ProjPoint| !cfg.is_tangency(p);
    if let Some(q) = field.order() {
        if q <= 4 * num_starts as u128 + 64 {
            let mut params: Vec<P1Point> = field.elements()?.into_iter().map(P1Point::affine).collect();
            params.push(P1Point::infinity(&field));
            let mut pts: Vec<ProjPoint> = params.iter().map(|t| par.point_at(t)).filter(admissible).collect();
            if pts.len() <= num_starts {
                return Ok((pts, true));
            }
            pts.shuffle(&mut rng);
            pts.truncate(num_starts);
            return Ok((pts, false));
        }
    }
    let mut pts: Vec<ProjPoint> = Vec::new();
    let mut attempts = 0;
    while pts.len() < num_starts && attempts < 100 * num_starts + 100 {
        attempts += 1;
        let u = if field.is_finite() {
            field.random(&mut rng)
        } else {
            let n: i64 = rng.gen_range(-50..=50);
            let d: i64 = rng.gen_range(1..=20);
            &field.from_i64(n) / &field.from_i64(d)
        };
        let p = par.point_at(&P1Point::affine(u));
        if admissible(&p) && !pts.contains(&p) {
            pts.push(p);
        }
    }
    Ok((pts, false))
}

/// Runs the process from several starts in `C ∖ T` and checks that the
/// outcomes agree.
pub fn porism_check(
    cfg: &PonceletConfig,
    num_starts: usize,
    max_steps: u64,
    seed: u64,
) -> Result<PorismReport> {
    let (starts, exhaustive) = sample_starts(cfg, num_starts, seed)?;
    let results = par::map(&starts, |c1| run(cfg, c1, Branch::Min, max_steps));
    let mut runs = Vec::with_capacity(starts.len());
    for (c1, r) in starts.into_iter().zip(results) {
        runs.push(StartRecord { c1, result: r? });
    }
    let outcomes: Vec<Outcome> = runs.iter().map(|r| r.result.outcome).collect();
    Ok(PorismReport {
        itype: cfg.itype,
        pass: outcomes_agree(&outcomes),
        runs,
        exhaustive,
    })
}

/// The parameter of `c₁` that `porism_check` would sample first; exposed
/// for reproducing a reported run.
pub fn first_start(cfg: &PonceletConfig, seed: u64) -> Result<Option<ProjPoint>> {
    Ok(sample_starts(cfg, 1, seed)?.0.into_iter().next())
}
