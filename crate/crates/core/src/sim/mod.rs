//! Monte Carlo world behind an observability shield.
//!
//! Each entity has an objective two-valued state per trial. A shield decides,
//! per entity and trial, whether the observer receives that state; blocked
//! entities are recorded as `U`. The collected frequencies are exactly what a
//! shielded observer could measure, so conditioned frequencies estimate
//! relative probabilities.

pub mod rng;

use std::collections::BTreeMap;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::prob::check_n;
use crate::tfu::{tfu_state, RelEvent, TfuJoint, TfuState};

/// RNG stream for objective dynamics.
pub const STREAM_DYNAMICS: u64 = 0;
/// RNG stream for shield decisions.
pub const STREAM_SHIELD: u64 = 1;
/// RNG stream for fresh oscillator phases.
pub const STREAM_PHASE: u64 = 2;
/// Entity coordinate used for table-driven joint draws.
pub const TABLE_ENTITY: u64 = u64::MAX;

/// World configuration, loadable from JSON.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WorldSpec {
    pub n_entities: usize,
    pub dynamics: Dynamics,
    /// One shield per entity.
    pub shields: Vec<Shield>,
    #[serde(default)]
    pub seed: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Dynamics {
    /// Each entity follows its own process.
    Independent { entities: Vec<Process> },
    /// One joint draw per trial. Keys are strings over `T`, `F`, `t`, `f`:
    /// the letter is the entity's value, lowercase marks it concealed (for
    /// example, oriented away from the observer).
    Table { weights: BTreeMap<String, f64> },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Process {
    /// I.i.d. draws, `T` with probability `bias`.
    Coin { bias: f64 },
    /// Deterministic square wave: `T` for the first `high` steps of every
    /// `period` (default `period / 2`).
    Periodic {
        period: u64,
        #[serde(default)]
        high: Option<u64>,
        #[serde(default)]
        phase: Phase,
    },
}

/// Where an oscillator sits in its cycle at each trial.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Phase {
    /// Step `(trial + offset) mod period`: the cycle runs on between trials.
    Persistent { offset: u64 },
    /// An independent uniform step each trial.
    Fresh,
}

impl Default for Phase {
    fn default() -> Self {
        Phase::Persistent { offset: 0 }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Shield {
    /// Always observable.
    Open,
    /// Never observable.
    Closed,
    /// Blocked with probability `block`, independent of the state.
    Bernoulli { block: f64 },
    /// Blocked with a probability that depends on the objective value.
    ValueDependent { block_true: f64, block_false: f64 },
    /// Blocked exactly when a table draw marks the entity concealed.
    Concealed,
}

impl Shield {
    fn is_state_independent(&self) -> bool {
        matches!(
            self,
            Shield::Open | Shield::Closed | Shield::Bernoulli { .. }
        )
    }
}

/// What the observer records for each entity in one trial.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct TrialRecord {
    pub outcomes: Vec<TfuState>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
struct Objective {
    value: bool,
    concealed: bool,
}

#[derive(Debug, Clone)]
struct TableCell {
    cumulative: f64,
    states: Vec<Objective>,
}

fn check_probability(name: &str, p: f64) -> Result<()> {
    if !(0.0..=1.0).contains(&p) {
        return Err(Error::InvalidWorld(format!(
            "{name} = {p} is not a probability"
        )));
    }
    Ok(())
}

fn symbol_rank(c: char) -> Option<(usize, Objective)> {
    match c {
        'T' => Some((
            0,
            Objective {
                value: true,
                concealed: false,
            },
        )),
        'F' => Some((
            1,
            Objective {
                value: false,
                concealed: false,
            },
        )),
        't' => Some((
            2,
            Objective {
                value: true,
                concealed: true,
            },
        )),
        'f' => Some((
            3,
            Objective {
                value: false,
                concealed: true,
            },
        )),
        _ => None,
    }
}

/// A validated world ready to generate trials.
#[derive(Debug, Clone)]
pub struct World {
    spec: WorldSpec,
    table: Vec<TableCell>,
}

impl World {
    pub fn new(spec: WorldSpec) -> Result<Self> {
        let n = spec.n_entities;
        check_n(n).map_err(|e| Error::InvalidWorld(e.to_string()))?;
        if spec.shields.len() != n {
            return Err(Error::InvalidWorld(format!(
                "{} shields for {n} entities",
                spec.shields.len()
            )));
        }
        for shield in &spec.shields {
            match *shield {
                Shield::Bernoulli { block } => check_probability("block", block)?,
                Shield::ValueDependent {
                    block_true,
                    block_false,
                } => {
                    check_probability("block_true", block_true)?;
                    check_probability("block_false", block_false)?;
                }
                _ => {}
            }
        }
        let table = match &spec.dynamics {
            Dynamics::Independent { entities } => {
                if entities.len() != n {
                    return Err(Error::InvalidWorld(format!(
                        "{} processes for {n} entities",
                        entities.len()
                    )));
                }
                for process in entities {
                    match *process {
                        Process::Coin { bias } => check_probability("bias", bias)?,
                        Process::Periodic { period, high, .. } => {
                            if period == 0 || high.is_some_and(|h| h > period) {
                                return Err(Error::InvalidWorld(format!(
                                    "periodic process needs period >= 1 and high <= period (period {period}, high {high:?})"
                                )));
                            }
                        }
                    }
                }
                if spec.shields.contains(&Shield::Concealed) {
                    return Err(Error::InvalidWorld(
                        "the concealed shield needs table-driven dynamics".into(),
                    ));
                }
                Vec::new()
            }
            Dynamics::Table { weights } => Self::compile_table(n, weights)?,
        };
        Ok(Self { spec, table })
    }

    /// Cells sorted by symbol order `T < F < t < f`, first entity most
    /// significant; zero-weight cells dropped.
    fn compile_table(n: usize, weights: &BTreeMap<String, f64>) -> Result<Vec<TableCell>> {
        let mut cells = Vec::new();
        for (key, &w) in weights {
            if key.chars().count() != n {
                return Err(Error::InvalidWorld(format!(
                    "table key {key:?} has wrong length"
                )));
            }
            if w.is_nan() || w < 0.0 {
                return Err(Error::InvalidWorld(format!("table weight {w} for {key:?}")));
            }
            let mut rank = 0usize;
            let mut states = Vec::with_capacity(n);
            for c in key.chars() {
                let (r, o) = symbol_rank(c).ok_or_else(|| {
                    Error::InvalidWorld(format!("table key {key:?}: symbols must be T, F, t, f"))
                })?;
                rank = rank * 4 + r;
                states.push(o);
            }
            if w > 0.0 {
                cells.push((rank, w, states));
            }
        }
        let total: f64 = cells.iter().map(|c| c.1).sum();
        if (total - 1.0).abs() > crate::prob::LOAD_TOL {
            return Err(Error::InvalidWorld(format!("table weights sum to {total}")));
        }
        cells.sort_by_key(|c| c.0);
        let mut cumulative = 0.0;
        Ok(cells
            .into_iter()
            .map(|(_, w, states)| {
                cumulative += w / total;
                TableCell { cumulative, states }
            })
            .collect())
    }

    pub fn spec(&self) -> &WorldSpec {
        &self.spec
    }

    pub fn n(&self) -> usize {
        self.spec.n_entities
    }

    /// Whether every shield ignores the objective state.
    pub fn shields_state_independent(&self) -> bool {
        self.spec.shields.iter().all(Shield::is_state_independent)
    }

    fn objective(&self, entity: usize, trial: u64, table_cell: Option<&TableCell>) -> Objective {
        let seed = self.spec.seed;
        if let Some(cell) = table_cell {
            return cell.states[entity];
        }
        let Dynamics::Independent { entities } = &self.spec.dynamics else {
            unreachable!("table dynamics always supply a cell");
        };
        let value = match entities[entity] {
            Process::Coin { bias } => {
                rng::uniform(seed, entity as u64, trial, STREAM_DYNAMICS) < bias
            }
            Process::Periodic {
                period,
                high,
                phase,
            } => {
                let step = match phase {
                    Phase::Persistent { offset } => trial.wrapping_add(offset) % period,
                    Phase::Fresh => {
                        let x = rng::draw(seed, entity as u64, trial, STREAM_PHASE);
                        ((x as u128 * period as u128) >> 64) as u64
                    }
                };
                step < high.unwrap_or(period / 2)
            }
        };
        Objective {
            value,
            concealed: false,
        }
    }

    fn blocked(&self, entity: usize, trial: u64, state: Objective) -> bool {
        let u = || rng::uniform(self.spec.seed, entity as u64, trial, STREAM_SHIELD);
        match self.spec.shields[entity] {
            Shield::Open => false,
            Shield::Closed => true,
            Shield::Bernoulli { block } => u() < block,
            Shield::ValueDependent {
                block_true,
                block_false,
            } => u() < if state.value { block_true } else { block_false },
            Shield::Concealed => state.concealed,
        }
    }

    fn table_cell(&self, trial: u64) -> Option<&TableCell> {
        if self.table.is_empty() {
            return None;
        }
        let u = rng::uniform(self.spec.seed, TABLE_ENTITY, trial, STREAM_DYNAMICS);
        let i = self.table.partition_point(|c| c.cumulative <= u);
        Some(&self.table[i.min(self.table.len() - 1)])
    }

    fn outcome(&self, entity: usize, trial: u64, cell: Option<&TableCell>) -> TfuState {
        let state = self.objective(entity, trial, cell);
        if self.blocked(entity, trial, state) {
            TfuState::U
        } else if state.value {
            TfuState::T
        } else {
            TfuState::F
        }
    }

    pub fn trial(&self, trial: u64) -> TrialRecord {
        let cell = self.table_cell(trial);
        TrialRecord {
            outcomes: (0..self.n())
                .map(|e| self.outcome(e, trial, cell))
                .collect(),
        }
    }

    /// Joint-state index of one trial's record.
    fn trial_index(&self, trial: u64) -> usize {
        let cell = self.table_cell(trial);
        (0..self.n()).fold(0, |acc, e| acc * 3 + self.outcome(e, trial, cell).digit())
    }

    /// Counts over `trials` trials, evaluated in parallel and summed.
    pub fn run(&self, trials: u64) -> EmpiricalCounts {
        let dim = 3usize.pow(self.n() as u32);
        let counts = (0..trials)
            .into_par_iter()
            .fold(
                || vec![0u64; dim],
                |mut acc, t| {
                    acc[self.trial_index(t)] += 1;
                    acc
                },
            )
            .reduce(
                || vec![0u64; dim],
                |mut a, b| {
                    a.iter_mut().zip(b).for_each(|(x, y)| *x += y);
                    a
                },
            );
        EmpiricalCounts {
            n: self.n(),
            counts,
            trials,
        }
    }
}

/// Validates `spec` and runs it.
pub fn run(spec: &WorldSpec, trials: u64) -> Result<EmpiricalCounts> {
    if trials == 0 {
        return Err(Error::InvalidWorld("at least one trial is required".into()));
    }
    Ok(World::new(spec.clone())?.run(trials))
}

/// Outcome counts over `{T,F,U}^n`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EmpiricalCounts {
    n: usize,
    counts: Vec<u64>,
    trials: u64,
}

impl EmpiricalCounts {
    pub fn from_counts(n: usize, counts: Vec<u64>) -> Result<Self> {
        check_n(n)?;
        let dim = 3usize.pow(n as u32);
        if counts.len() != dim {
            return Err(Error::WrongLength {
                expected: dim,
                found: counts.len(),
            });
        }
        let trials = counts.iter().sum();
        if trials == 0 {
            return Err(Error::InsufficientData);
        }
        Ok(Self { n, counts, trials })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn counts(&self) -> &[u64] {
        &self.counts
    }

    pub fn trials(&self) -> u64 {
        self.trials
    }

    /// Frequencies `count / trials`.
    pub fn joint(&self) -> TfuJoint {
        let t = self.trials as f64;
        let weights = self.counts.iter().map(|&c| c as f64 / t).collect();
        TfuJoint::new(self.n, weights).expect("frequencies of a nonempty run are normalized")
    }

    /// Count of trials in which entity `prop` was recorded as `U`.
    pub fn u_count(&self, prop: usize) -> u64 {
        self.counts
            .iter()
            .enumerate()
            .filter(|(i, _)| tfu_state(*i, self.n, prop) == TfuState::U)
            .map(|(_, c)| c)
            .sum()
    }
}

/// Plug-in estimate from counts.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Estimate {
    pub value: f64,
    pub numerator: u64,
    pub denominator: u64,
}

impl Estimate {
    /// Binomial standard error `√(p(1−p)/denominator)` at true value `p`.
    pub fn sigma(&self, p: f64) -> f64 {
        (p * (1.0 - p) / self.denominator as f64).sqrt()
    }
}

/// Estimates `[e]` or `[e]_given` from observed counts.
pub fn empirical_relative(
    data: &EmpiricalCounts,
    e: &RelEvent,
    given: Option<&RelEvent>,
) -> Result<Estimate> {
    e.validate(data.n)?;
    if let Some(g) = given {
        g.validate(data.n)?;
    }
    let (mut numerator, mut denominator) = (0u64, 0u64);
    for (i, &c) in data.counts.iter().enumerate() {
        if given.is_some_and(|g| !g.holds(i, data.n)) || !e.observable(i, data.n) {
            continue;
        }
        denominator += c;
        if e.holds(i, data.n) {
            numerator += c;
        }
    }
    if denominator == 0 {
        return Err(Error::InsufficientData);
    }
    Ok(Estimate {
        value: numerator as f64 / denominator as f64,
        numerator,
        denominator,
    })
}

/// Table-driven world realizing the white/black joint: `T`/`F` are white and
/// black, and `t` marks an entity turned away from the observer.
pub fn white_black_world(seed: u64) -> WorldSpec {
    let w = crate::tfu::WhiteBlack::EXAMPLE;
    WorldSpec {
        n_entities: 2,
        dynamics: Dynamics::Table {
            weights: [
                ("TT", w.pi),
                ("Tt", w.eps),
                ("TF", w.wb),
                ("FT", w.bw),
                ("FF", w.bb),
            ]
            .into_iter()
            .map(|(k, v)| (k.to_string(), v))
            .collect(),
        },
        shields: vec![Shield::Concealed, Shield::Concealed],
        seed,
    }
}
