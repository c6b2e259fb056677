#![allow(dead_code)]

use bbqp::delta::{DeltaState, Move};
use bbqp::flipfloat::{delta_flip_x_float_y, delta_flip_y_float_x, init_sum_x, init_sum_y};
use bbqp::harness::{generate_random_instance, random_solution};
use bbqp::model::{best_response_x, best_response_y, evaluate};
use bbqp::{Instance, Solution};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::time::Instant;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn instance(m: usize, n: usize, seed: u64) -> Instance {
    generate_random_instance(m, n, -100, 100, seed).unwrap()
}

pub fn solution(m: usize, n: usize, rng: &mut ChaCha8Rng) -> Solution {
    random_solution(m, n, rng)
}

pub fn random_moves(m: usize, n: usize, count: usize, rng: &mut ChaCha8Rng) -> Vec<Move> {
    (0..count)
        .map(|_| {
            if rng.gen_range(0..m + n) < m {
                Move::x(rng.gen_range(0..m))
            } else {
                Move::y(rng.gen_range(0..n))
            }
        })
        .collect()
}

/// Best per-move time (seconds) over `batches` runs of `moves`.
pub fn per_move_seconds(inst: &Instance, moves: &[Move], batches: usize) -> f64 {
    let mut r = rng(1);
    let mut state = DeltaState::new(inst, &solution(inst.m(), inst.n(), &mut r)).unwrap();
    // warm-up
    for &mv in moves.iter().take(moves.len() / 4) {
        state.apply(mv);
    }
    let mut best = f64::INFINITY;
    for _ in 0..batches {
        let t = Instant::now();
        for &mv in moves {
            state.apply(mv);
        }
        let elapsed = t.elapsed().as_secs_f64();
        std::hint::black_box(state.objective());
        best = best.min(elapsed / moves.len() as f64);
    }
    best
}

/// `F_{y*}(x)` through the best response and the plain objective.
pub fn f_ystar_by_definition(inst: &Instance, x: &[bool]) -> i64 {
    let y = best_response_y(inst, x).unwrap();
    evaluate(inst, &Solution::new(x.to_vec(), y)).unwrap()
}

/// `F_{x*}(y)` through the best response and the plain objective.
pub fn f_xstar_by_definition(inst: &Instance, y: &[bool]) -> i64 {
    let x = best_response_x(inst, y).unwrap();
    evaluate(inst, &Solution::new(x, y.to_vec())).unwrap()
}

/// True when no flip-float move on either side has a positive gain.
pub fn certified_flip_float_optimum(inst: &Instance, sol: &Solution) -> bool {
    let sx = init_sum_x(inst, &sol.x).unwrap();
    let sy = init_sum_y(inst, &sol.y).unwrap();
    (0..inst.m()).all(|i| delta_flip_x_float_y(inst, &sol.x, &sx, i).unwrap() <= 0)
        && (0..inst.n()).all(|j| delta_flip_y_float_x(inst, &sol.y, &sy, j).unwrap() <= 0)
}

/// Exhaustive BQP optimum of `x^T Q' x + c' x`.
pub fn bqp_brute_force(q: &[i64], c: &[i64]) -> i64 {
    let n = c.len();
    (0u32..1 << n)
        .map(|mask| {
            let bit = |k: usize| mask >> k & 1 == 1;
            let mut f = 0;
            for a in (0..n).filter(|&a| bit(a)) {
                f += c[a];
                for b in (0..n).filter(|&b| bit(b)) {
                    f += q[a * n + b];
                }
            }
            f
        })
        .max()
        .unwrap()
}
