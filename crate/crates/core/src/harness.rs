//! Multi-start driver and run statistics.
//!
//! Restart `k` draws its start solution (and its tabu seed) from a stream
//! derived from `(master_seed, k)` alone, so serial and parallel execution
//! visit the same starts. Per-restart results are folded with an associative,
//! commutative merge; under a restart budget the report is reproducible
//! regardless of worker count.

use crate::error::{Error, Result};
use crate::flipfloat::run_coordinate;
use crate::hybrid::{run_hybrid, HybridParams};
use crate::model::{Instance, Solution};
use crate::tabu::{run_tabu, TabuParams};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::fmt;
use std::str::FromStr;
use std::sync::atomic::{AtomicU64, Ordering};
use std::sync::Mutex;
use std::time::{Duration, Instant};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Algo {
    Tabu,
    FlipFloat,
    Hybrid,
}

impl Algo {
    pub fn as_str(self) -> &'static str {
        match self {
            Algo::Tabu => "tabu",
            Algo::FlipFloat => "flipfloat",
            Algo::Hybrid => "hybrid",
        }
    }
}

impl fmt::Display for Algo {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Algo {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "tabu" => Ok(Algo::Tabu),
            "flipfloat" => Ok(Algo::FlipFloat),
            "hybrid" => Ok(Algo::Hybrid),
            other => Err(Error::Param(format!(
                "unknown algorithm `{other}` (expected tabu, flipfloat or hybrid)"
            ))),
        }
    }
}

/// Stopping rule for [`multi_start`]; checked between restarts.
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct Budget {
    pub wall_seconds: Option<f64>,
    pub max_restarts: Option<u64>,
}

impl Budget {
    pub fn restarts(k: u64) -> Self {
        Self {
            wall_seconds: None,
            max_restarts: Some(k),
        }
    }

    pub fn seconds(s: f64) -> Self {
        Self {
            wall_seconds: Some(s),
            max_restarts: None,
        }
    }

    pub fn validate(&self) -> Result<()> {
        match (self.wall_seconds, self.max_restarts) {
            (None, None) => Err(Error::Budget("set a time limit or a restart count")),
            (Some(s), _) if !(s.is_finite() && s > 0.0) => {
                Err(Error::Budget("time limit must be a positive number of seconds"))
            }
            (_, Some(0)) => Err(Error::Budget("restart count must be at least 1")),
            _ => Ok(()),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct RunReport {
    pub instance: String,
    pub algo: Algo,
    pub best_value: i64,
    pub best_solution: Solution,
    /// Number of initial solutions tried.
    pub n_init: u64,
    /// Number of restarts that ended exactly at `best_value`.
    pub n_hit: u64,
    /// Elapsed time at the last detection of `best_value`, divided by `n_hit`.
    pub time_to_best: f64,
    pub total_elapsed: f64,
    pub seed: u64,
}

impl RunReport {
    pub const FIELDS: [&'static str; 8] = [
        "instance",
        "algo",
        "best_value",
        "n_init",
        "n_hit",
        "time_to_best_s",
        "elapsed_s",
        "seed",
    ];

    fn values(&self) -> [String; 8] {
        [
            self.instance.clone(),
            self.algo.to_string(),
            self.best_value.to_string(),
            self.n_init.to_string(),
            self.n_hit.to_string(),
            format!("{:.6}", self.time_to_best),
            format!("{:.6}", self.total_elapsed),
            self.seed.to_string(),
        ]
    }

    /// One tab-separated record, fields in [`RunReport::FIELDS`] order.
    pub fn to_tsv(&self) -> String {
        self.values().join("\t")
    }

    /// `name: value` lines, fields in [`RunReport::FIELDS`] order.
    pub fn to_block(&self) -> String {
        Self::FIELDS
            .iter()
            .zip(self.values())
            .map(|(k, v)| format!("{k}: {v}\n"))
            .collect()
    }

    /// The report with wall-clock fields zeroed.
    pub fn without_timing(&self) -> Self {
        Self {
            time_to_best: 0.0,
            total_elapsed: 0.0,
            ..self.clone()
        }
    }
}

/// SplitMix64 finalizer.
fn mix(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// Seed of the stream used by restart (or sample) `index`.
pub fn derive_seed(master_seed: u64, index: u64) -> u64 {
    mix(mix(master_seed) ^ index.wrapping_mul(0xd6e8_feb8_6659_fd93))
}

/// Uniform random solution: every bit is 1 with probability 1/2.
pub fn random_solution<R: Rng + ?Sized>(m: usize, n: usize, rng: &mut R) -> Solution {
    Solution::new((0..m).map(|_| rng.gen()).collect(), (0..n).map(|_| rng.gen()).collect())
}

/// All coefficients drawn independently and uniformly from `[lo, hi]`.
pub fn generate_random_instance(m: usize, n: usize, lo: i64, hi: i64, seed: u64) -> Result<Instance> {
    if lo > hi {
        return Err(Error::Param(format!("empty coefficient range [{lo}, {hi}]")));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut draw = |len: usize| -> Vec<i64> { (0..len).map(|_| rng.gen_range(lo..=hi)).collect() };
    let q = draw(m * n);
    let c = draw(m);
    let d = draw(n);
    Instance::new(m, n, q, c, d)
}

/// Outcome of one restart.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RestartRecord {
    pub index: u64,
    pub value: i64,
}

/// Runs `algo` from restart `index`'s start solution.
pub fn run_restart(
    inst: &Instance,
    algo: Algo,
    tabu: &TabuParams,
    master_seed: u64,
    index: u64,
    deadline: Option<Instant>,
) -> Result<(Solution, i64)> {
    let mut rng = ChaCha8Rng::seed_from_u64(derive_seed(master_seed, index));
    let start = random_solution(inst.m(), inst.n(), &mut rng);
    let tabu = tabu.clone().with_seed(rng.gen());
    Ok(match algo {
        Algo::Tabu => {
            let out = run_tabu(inst, &start, &tabu, deadline)?;
            (out.best, out.value)
        }
        Algo::FlipFloat => {
            let out = run_coordinate(inst, &start, deadline)?;
            (out.solution, out.value)
        }
        Algo::Hybrid => {
            let out = run_hybrid(inst, &start, &HybridParams { tabu, deadline })?;
            (out.solution, out.value)
        }
    })
}

/// Running statistics; merging is associative and commutative.
#[derive(Clone, Debug, Default)]
struct Tally {
    best: Option<(i64, u64, Solution)>,
    n_init: u64,
    n_hit: u64,
    last_hit: Duration,
}

impl Tally {
    fn add(&mut self, index: u64, value: i64, sol: Solution, finished: Duration) {
        self.n_init += 1;
        match &self.best {
            Some((v, _, _)) if value < *v => {}
            Some((v, i, _)) if value == *v => {
                self.n_hit += 1;
                self.last_hit = self.last_hit.max(finished);
                if index < *i {
                    self.best = Some((value, index, sol));
                }
            }
            _ => {
                self.best = Some((value, index, sol));
                self.n_hit = 1;
                self.last_hit = finished;
            }
        }
    }

    fn merge(mut self, other: Tally) -> Tally {
        self.n_init += other.n_init;
        let Some((ov, oi, osol)) = other.best else {
            return self;
        };
        match &self.best {
            Some((v, _, _)) if ov < *v => {}
            Some((v, i, _)) if ov == *v => {
                self.n_hit += other.n_hit;
                self.last_hit = self.last_hit.max(other.last_hit);
                if oi < *i {
                    self.best = Some((ov, oi, osol));
                }
            }
            _ => {
                self.best = Some((ov, oi, osol));
                self.n_hit = other.n_hit;
                self.last_hit = other.last_hit;
            }
        }
        self
    }
}

/// Multi-start run of `algo` under `budget` with `jobs` worker threads.
pub fn multi_start(
    inst: &Instance,
    algo: Algo,
    tabu: &TabuParams,
    budget: &Budget,
    master_seed: u64,
    jobs: usize,
) -> Result<RunReport> {
    multi_start_logged(inst, algo, tabu, budget, master_seed, jobs, |_| {})
}

/// [`multi_start`] that also reports every finished restart to `log`.
///
/// With several workers `log` is called from worker threads in completion order.
pub fn multi_start_logged<L>(
    inst: &Instance,
    algo: Algo,
    tabu: &TabuParams,
    budget: &Budget,
    master_seed: u64,
    jobs: usize,
    log: L,
) -> Result<RunReport>
where
    L: Fn(&RestartRecord) + Sync,
{
    budget.validate()?;
    tabu.validate()?;
    if jobs == 0 {
        return Err(Error::Param("worker count must be at least 1".into()));
    }
    let started = Instant::now();
    let deadline = budget
        .wall_seconds
        .map(|s| started + Duration::from_secs_f64(s));
    let limit = budget.max_restarts.unwrap_or(u64::MAX);
    let next = AtomicU64::new(0);

    // Restart 0 always runs, so every report covers at least one start.
    let worker = || -> Result<Tally> {
        let mut tally = Tally::default();
        loop {
            let index = next.fetch_add(1, Ordering::Relaxed);
            if index >= limit || (index > 0 && deadline.is_some_and(|d| Instant::now() >= d)) {
                return Ok(tally);
            }
            let (sol, value) = run_restart(inst, algo, tabu, master_seed, index, deadline)?;
            log(&RestartRecord { index, value });
            tally.add(index, value, sol, started.elapsed());
        }
    };

    let tally = if jobs == 1 {
        worker()?
    } else {
        let results = Mutex::new(Vec::with_capacity(jobs));
        std::thread::scope(|scope| {
            for _ in 0..jobs {
                scope.spawn(|| {
                    let r = worker();
                    results.lock().unwrap().push(r);
                });
            }
        });
        let mut merged = Tally::default();
        for r in results.into_inner().unwrap() {
            merged = merged.merge(r?);
        }
        merged
    };

    let total_elapsed = started.elapsed().as_secs_f64();
    let (best_value, _, best_solution) = tally.best.expect("at least one restart runs");
    Ok(RunReport {
        instance: inst.name.clone().unwrap_or_else(|| "-".into()),
        algo,
        best_value,
        best_solution,
        n_init: tally.n_init,
        n_hit: tally.n_hit,
        time_to_best: tally.last_hit.as_secs_f64() / tally.n_hit as f64,
        total_elapsed,
        seed: master_seed,
    })
}
