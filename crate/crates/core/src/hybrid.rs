//! Alternates tabu search and the flip-float coordinate method until a
//! coordinate phase fails to improve on the tabu result.

use crate::error::Result;
use crate::flipfloat::run_coordinate;
use crate::model::{Instance, Solution};
use crate::tabu::{run_tabu, TabuParams};
use std::time::Instant;

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct HybridParams {
    pub tabu: TabuParams,
    pub deadline: Option<Instant>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HybridOutcome {
    pub solution: Solution,
    pub value: i64,
    /// Number of tabu + coordinate passes performed.
    pub rounds: u32,
}

pub fn run_hybrid(inst: &Instance, start: &Solution, params: &HybridParams) -> Result<HybridOutcome> {
    let mut tabu_params = params.tabu.clone();
    let mut current = start.clone();
    let mut rounds = 0u32;
    loop {
        rounds += 1;
        let tabu = run_tabu(inst, &current, &tabu_params, params.deadline)?;
        let coord = run_coordinate(inst, &tabu.best, params.deadline)?;
        let improved = coord.value > tabu.value;
        current = coord.solution;
        let expired = params.deadline.is_some_and(|d| Instant::now() >= d);
        if !improved || expired {
            return Ok(HybridOutcome {
                solution: current,
                value: coord.value,
                rounds,
            });
        }
        // fresh tenure draws for the next pass
        tabu_params.rng_seed = tabu_params.rng_seed.wrapping_add(1);
    }
}
