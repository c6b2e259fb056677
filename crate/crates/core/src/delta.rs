//! Incremental one-flip gain arrays.
//!
//! `dx[i]` is the change of `f` caused by flipping `x_i`, `dy[j]` the change
//! caused by flipping `y_j`. Both arrays cost `O(mn)` to build and `O(m + n)`
//! to maintain per move.

use crate::error::Result;
use crate::model::{column_sums, evaluate_unchecked, row_sums, Instance, Solution};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Side {
    X,
    Y,
}

/// A one-flip move. The direction (0 -> 1 or 1 -> 0) follows from the current bit.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Move {
    pub side: Side,
    pub index: usize,
}

impl Move {
    pub fn x(index: usize) -> Self {
        Self { side: Side::X, index }
    }

    pub fn y(index: usize) -> Self {
        Self { side: Side::Y, index }
    }
}

#[inline]
fn sign(bit: bool) -> i64 {
    // (x' - x) for a flip of `bit`
    1 - 2 * bit as i64
}

/// `gains[k] += dir * (1 - 2 bits[k]) * coupling[k]`, written as a masked
/// negation so the loop vectorizes.
#[inline]
fn adjust(gains: &mut [i64], coupling: &[i64], bits: &[bool], dir: i64) {
    for ((g, &q), &b) in gains.iter_mut().zip(coupling).zip(bits) {
        let mask = -(b as i64);
        let t = if dir > 0 { q } else { -q };
        *g += (t ^ mask) - mask;
    }
}

/// Current solution together with its one-flip gains and objective value.
#[derive(Clone, Debug)]
pub struct DeltaState<'a> {
    inst: &'a Instance,
    x: Vec<bool>,
    y: Vec<bool>,
    dx: Vec<i64>,
    dy: Vec<i64>,
    objective: i64,
}

impl PartialEq for DeltaState<'_> {
    fn eq(&self, other: &Self) -> bool {
        std::ptr::eq(self.inst, other.inst)
            && self.x == other.x
            && self.y == other.y
            && self.dx == other.dx
            && self.dy == other.dy
            && self.objective == other.objective
    }
}

impl<'a> DeltaState<'a> {
    /// Builds the gain arrays from scratch.
    pub fn new(inst: &'a Instance, sol: &Solution) -> Result<Self> {
        inst.check_solution(sol)?;
        let dx = row_sums(inst, &sol.y)
            .into_iter()
            .zip(&sol.x)
            .map(|(s, &b)| sign(b) * s)
            .collect();
        let dy = column_sums(inst, &sol.x)
            .into_iter()
            .zip(&sol.y)
            .map(|(s, &b)| sign(b) * s)
            .collect();
        Ok(Self {
            inst,
            x: sol.x.clone(),
            y: sol.y.clone(),
            dx,
            dy,
            objective: evaluate_unchecked(inst, &sol.x, &sol.y),
        })
    }

    pub fn instance(&self) -> &'a Instance {
        self.inst
    }

    pub fn x(&self) -> &[bool] {
        &self.x
    }

    pub fn y(&self) -> &[bool] {
        &self.y
    }

    pub fn dx(&self) -> &[i64] {
        &self.dx
    }

    pub fn dy(&self) -> &[i64] {
        &self.dy
    }

    pub fn objective(&self) -> i64 {
        self.objective
    }

    pub fn solution(&self) -> Solution {
        Solution::new(self.x.clone(), self.y.clone())
    }

    /// Gain the move would realise if applied now.
    #[inline]
    pub fn gain(&self, mv: Move) -> i64 {
        match mv.side {
            Side::X => self.dx[mv.index],
            Side::Y => self.dy[mv.index],
        }
    }

    /// Flips one bit and updates both gain arrays in `O(m + n)`.
    ///
    /// The index must be in range for its side.
    pub fn apply(&mut self, mv: Move) {
        let gain = match mv.side {
            Side::X => {
                let i = mv.index;
                let dir = sign(self.x[i]);
                adjust(&mut self.dy, self.inst.row(i), &self.y, dir);
                let gain = self.dx[i];
                self.dx[i] = -gain;
                self.x[i] = !self.x[i];
                gain
            }
            Side::Y => {
                let j = mv.index;
                let dir = sign(self.y[j]);
                adjust(&mut self.dx, self.inst.col(j), &self.x, dir);
                let gain = self.dy[j];
                self.dy[j] = -gain;
                self.y[j] = !self.y[j];
                gain
            }
        };
        self.objective += gain;
    }
}

/// Builds a fresh [`DeltaState`] for `sol`.
pub fn init_deltas<'a>(inst: &'a Instance, sol: &Solution) -> Result<DeltaState<'a>> {
    DeltaState::new(inst, sol)
}
