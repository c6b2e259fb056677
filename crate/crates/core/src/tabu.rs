//! One-flip tabu search.
//!
//! Every iteration applies the best admissible one-flip move, even a worsening
//! one. A flipped index stays tabu for `size / 20 + rand(0..=10)` iterations,
//! where `size` is `m` for x-moves and `n` for y-moves. A tabu move is still
//! admissible when it would produce a value strictly above the best found so
//! far. The search stops once the best value has not improved for
//! `tabu_depth` consecutive iterations.

use crate::delta::{DeltaState, Move, Side};
use crate::error::{Error, Result};
use crate::model::{Instance, Solution};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::time::Instant;

/// How often (in iterations) the deadline is polled.
const DEADLINE_POLL: u64 = 64;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TabuParams {
    /// Stagnation limit; `None` means `10 * (m + n)`.
    pub tabu_depth: Option<u64>,
    pub tenure_base_divisor: usize,
    pub tenure_rand_span: usize,
    pub rng_seed: u64,
}

impl Default for TabuParams {
    fn default() -> Self {
        Self {
            tabu_depth: None,
            tenure_base_divisor: 20,
            tenure_rand_span: 10,
            rng_seed: 0,
        }
    }
}

impl TabuParams {
    pub fn with_seed(mut self, seed: u64) -> Self {
        self.rng_seed = seed;
        self
    }

    pub fn with_depth(mut self, depth: u64) -> Self {
        self.tabu_depth = Some(depth);
        self
    }

    pub fn depth_for(&self, inst: &Instance) -> u64 {
        self.tabu_depth
            .unwrap_or(10 * (inst.m() + inst.n()) as u64)
    }

    pub fn validate(&self) -> Result<()> {
        if self.tabu_depth == Some(0) {
            return Err(Error::Param("tabu depth must be at least 1".into()));
        }
        if self.tenure_base_divisor == 0 {
            return Err(Error::Param("tenure divisor must be at least 1".into()));
        }
        Ok(())
    }
}

/// Expiry iteration per index; an index is tabu while its expiry exceeds the
/// current iteration.
#[derive(Clone, Debug)]
pub struct TabuList {
    expiry_x: Vec<u64>,
    expiry_y: Vec<u64>,
    iteration: u64,
}

impl TabuList {
    pub fn new(m: usize, n: usize) -> Self {
        Self {
            expiry_x: vec![0; m],
            expiry_y: vec![0; n],
            iteration: 0,
        }
    }

    pub fn iteration(&self) -> u64 {
        self.iteration
    }

    #[inline]
    pub fn is_tabu(&self, mv: Move) -> bool {
        let expiry = match mv.side {
            Side::X => self.expiry_x[mv.index],
            Side::Y => self.expiry_y[mv.index],
        };
        expiry > self.iteration
    }

    /// Forbids `mv` for the next `tenure` iterations and advances the clock.
    pub fn record(&mut self, mv: Move, tenure: u64) {
        let expiry = self.iteration + tenure + 1;
        match mv.side {
            Side::X => self.expiry_x[mv.index] = expiry,
            Side::Y => self.expiry_y[mv.index] = expiry,
        }
        self.iteration += 1;
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TabuOutcome {
    pub best: Solution,
    pub value: i64,
    pub iterations: u64,
}

/// One applied move, reported to the observer of [`run_tabu_observed`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct TabuStep {
    pub iteration: u64,
    pub mv: Move,
    pub gain: i64,
    pub tenure: u64,
    /// The move was tabu and admitted only by aspiration.
    pub aspirated: bool,
    /// Every move was tabu and none aspirated; the best move was taken anyway.
    pub forced: bool,
    pub value_after: i64,
}

struct Choice {
    mv: Move,
    gain: i64,
    tabu: bool,
}

/// Best admissible move; ties go to the lowest index, x before y.
fn select(state: &DeltaState<'_>, tabu: &TabuList, best_value: i64) -> (Choice, bool) {
    let current = state.objective();
    let mut admissible: Option<Choice> = None;
    let mut overall: Option<Choice> = None;
    let candidates = state
        .dx()
        .iter()
        .enumerate()
        .map(|(i, &g)| (Move::x(i), g))
        .chain(state.dy().iter().enumerate().map(|(j, &g)| (Move::y(j), g)));
    for (mv, gain) in candidates {
        let is_tabu = tabu.is_tabu(mv);
        if overall.as_ref().map_or(true, |c| gain > c.gain) {
            overall = Some(Choice { mv, gain, tabu: is_tabu });
        }
        let ok = !is_tabu || current + gain > best_value;
        if ok && admissible.as_ref().map_or(true, |c| gain > c.gain) {
            admissible = Some(Choice { mv, gain, tabu: is_tabu });
        }
    }
    match admissible {
        Some(c) => (c, false),
        None => (overall.expect("m + n >= 2 candidate moves"), true),
    }
}

/// Runs tabu search from `start` and returns the best solution visited.
pub fn run_tabu(
    inst: &Instance,
    start: &Solution,
    params: &TabuParams,
    deadline: Option<Instant>,
) -> Result<TabuOutcome> {
    run_tabu_observed(inst, start, params, deadline, |_| {})
}

/// [`run_tabu`] with a callback invoked after every applied move.
pub fn run_tabu_observed<F>(
    inst: &Instance,
    start: &Solution,
    params: &TabuParams,
    deadline: Option<Instant>,
    mut observe: F,
) -> Result<TabuOutcome>
where
    F: FnMut(&TabuStep),
{
    params.validate()?;
    let mut state = DeltaState::new(inst, start)?;
    let mut tabu = TabuList::new(inst.m(), inst.n());
    let mut rng = ChaCha8Rng::seed_from_u64(params.rng_seed);
    let depth = params.depth_for(inst);
    let base_x = (inst.m() / params.tenure_base_divisor) as u64;
    let base_y = (inst.n() / params.tenure_base_divisor) as u64;
    let span = params.tenure_rand_span as u64;

    let mut best = start.clone();
    let mut best_value = state.objective();
    let mut stagnation = 0u64;

    while stagnation < depth {
        let iteration = tabu.iteration();
        if let Some(limit) = deadline {
            if iteration % DEADLINE_POLL == 0 && Instant::now() >= limit {
                break;
            }
        }
        let (choice, forced) = select(&state, &tabu, best_value);
        state.apply(choice.mv);
        let base = match choice.mv.side {
            Side::X => base_x,
            Side::Y => base_y,
        };
        let tenure = base + rng.gen_range(0..=span);
        tabu.record(choice.mv, tenure);

        if state.objective() > best_value {
            best_value = state.objective();
            best.x.copy_from_slice(state.x());
            best.y.copy_from_slice(state.y());
            stagnation = 0;
        } else {
            stagnation += 1;
        }
        observe(&TabuStep {
            iteration,
            mv: choice.mv,
            gain: choice.gain,
            tenure,
            aspirated: choice.tabu && !forced,
            forced,
            value_after: state.objective(),
        });
    }

    Ok(TabuOutcome {
        best,
        value: best_value,
        iterations: tabu.iteration(),
    })
}
