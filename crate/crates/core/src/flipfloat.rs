//! Flip-float neighbourhood and the coordinate ascent built on it.
//!
//! A flip-x-float-y move flips one bit of `x` and then replaces `y` by its best
//! response. Its gain is evaluated in `O(n)` from the column sums
//! `sum_x[j] = d_j + sum_i x_i q_ij`, since `F_{y*}(x) = c x + sum_j max(0, sum_x[j])`.
//! The y-side move is the mirror image using the row sums
//! `sum_y[i] = c_i + sum_j y_j q_ij`.

use crate::error::{Error, Result};
use crate::model::{column_sums, row_sums, Instance, Solution};
use std::collections::HashSet;
use std::time::Instant;

/// Direction of a single flip.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Direction {
    /// 0 -> 1
    Up,
    /// 1 -> 0
    Down,
}

impl Direction {
    /// Direction of flipping a bit that currently holds `bit`.
    pub fn flipping(bit: bool) -> Self {
        if bit {
            Direction::Down
        } else {
            Direction::Up
        }
    }

    #[inline]
    fn sign(self) -> i64 {
        match self {
            Direction::Up => 1,
            Direction::Down => -1,
        }
    }
}

/// Column sums (`sum_x`, length `n`) and row sums (`sum_y`, length `m`),
/// each tagged with whether it matches the current solution.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SumState {
    sum_x: Vec<i64>,
    sum_y: Vec<i64>,
    x_valid: bool,
    y_valid: bool,
}

impl SumState {
    pub fn sum_x(&self) -> Option<&[i64]> {
        self.x_valid.then_some(self.sum_x.as_slice())
    }

    pub fn sum_y(&self) -> Option<&[i64]> {
        self.y_valid.then_some(self.sum_y.as_slice())
    }

    pub fn invalidate_x(&mut self) {
        self.x_valid = false;
    }

    pub fn invalidate_y(&mut self) {
        self.y_valid = false;
    }

    /// Recomputes `sum_x` for `x`, leaving `sum_y` untouched.
    pub fn refresh_x(&mut self, inst: &Instance, x: &[bool]) -> Result<()> {
        inst.check_x(x)?;
        self.sum_x = column_sums(inst, x);
        self.x_valid = true;
        Ok(())
    }

    /// Recomputes `sum_y` for `y`, leaving `sum_x` untouched.
    pub fn refresh_y(&mut self, inst: &Instance, y: &[bool]) -> Result<()> {
        inst.check_y(y)?;
        self.sum_y = row_sums(inst, y);
        self.y_valid = true;
        Ok(())
    }

    fn valid_x(&self, inst: &Instance) -> Result<&[i64]> {
        match self.sum_x() {
            Some(s) if s.len() == inst.n() => Ok(s),
            _ => Err(Error::StaleState("column sums do not describe the current x")),
        }
    }

    fn valid_y(&self, inst: &Instance) -> Result<&[i64]> {
        match self.sum_y() {
            Some(s) if s.len() == inst.m() => Ok(s),
            _ => Err(Error::StaleState("row sums do not describe the current y")),
        }
    }
}

/// Builds `sum_x[j] = d_j + sum_i x_i q_ij` in `O(mn)`.
pub fn init_sum_x(inst: &Instance, x: &[bool]) -> Result<SumState> {
    inst.check_x(x)?;
    Ok(SumState {
        sum_x: column_sums(inst, x),
        sum_y: Vec::new(),
        x_valid: true,
        y_valid: false,
    })
}

/// Builds `sum_y[i] = c_i + sum_j y_j q_ij` in `O(mn)`.
pub fn init_sum_y(inst: &Instance, y: &[bool]) -> Result<SumState> {
    inst.check_y(y)?;
    Ok(SumState {
        sum_x: Vec::new(),
        sum_y: row_sums(inst, y),
        x_valid: false,
        y_valid: true,
    })
}

/// `F_{y*}(x) = sum_i c_i x_i + sum_j max(0, sum_x[j])`.
pub fn f_ystar(inst: &Instance, x: &[bool], sums: &SumState) -> Result<i64> {
    inst.check_x(x)?;
    let sum_x = sums.valid_x(inst)?;
    Ok(linear(inst.c(), x) + positive_part(sum_x))
}

/// `F_{x*}(y) = sum_j d_j y_j + sum_i max(0, sum_y[i])`.
pub fn f_xstar(inst: &Instance, y: &[bool], sums: &SumState) -> Result<i64> {
    inst.check_y(y)?;
    let sum_y = sums.valid_y(inst)?;
    Ok(linear(inst.d(), y) + positive_part(sum_y))
}

fn linear(coef: &[i64], bits: &[bool]) -> i64 {
    coef.iter().zip(bits).filter(|(_, &b)| b).map(|(&v, _)| v).sum()
}

fn positive_part(sums: &[i64]) -> i64 {
    sums.iter().map(|&s| s.max(0)).sum()
}

/// Gain of flipping one bit and floating the other side, in `O(len)`.
///
/// `coupling` is the row (x side) or column (y side) of `Q` belonging to the
/// flipped index and `sums` are the current sums of the side being floated.
#[inline]
fn float_gain(dir: i64, linear_coef: i64, coupling: &[i64], sums: &[i64]) -> i64 {
    let mut delta = dir * linear_coef;
    for (&q, &sum) in coupling.iter().zip(sums) {
        let step = dir * q;
        let new_sum = sum + step;
        if step > 0 && new_sum > 0 {
            delta += step.min(new_sum);
        } else if step < 0 && sum > 0 {
            delta -= (-step).min(sum);
        }
    }
    delta
}

/// `F_{y*}(x xor e_i) - F_{y*}(x)`, evaluated in `O(n)` from the column sums.
pub fn delta_flip_x_float_y(inst: &Instance, x: &[bool], sums: &SumState, i: usize) -> Result<i64> {
    inst.check_x(x)?;
    let sum_x = sums.valid_x(inst)?;
    if i >= inst.m() {
        return Err(Error::Shape(format!("row index {i} out of range for m = {}", inst.m())));
    }
    let dir = Direction::flipping(x[i]).sign();
    Ok(float_gain(dir, inst.c()[i], inst.row(i), sum_x))
}

/// `F_{x*}(y xor e_j) - F_{x*}(y)`, evaluated in `O(m)` from the row sums.
pub fn delta_flip_y_float_x(inst: &Instance, y: &[bool], sums: &SumState, j: usize) -> Result<i64> {
    inst.check_y(y)?;
    let sum_y = sums.valid_y(inst)?;
    if j >= inst.n() {
        return Err(Error::Shape(format!("column index {j} out of range for n = {}", inst.n())));
    }
    let dir = Direction::flipping(y[j]).sign();
    Ok(float_gain(dir, inst.d()[j], inst.col(j), sum_y))
}

/// Adds `(x'_i - x_i) q_ij` to every `sum_x[j]`.
pub fn update_sums_after_flip_x(sums: &mut SumState, inst: &Instance, i: usize, dir: Direction) -> Result<()> {
    sums.valid_x(inst)?;
    if i >= inst.m() {
        return Err(Error::Shape(format!("row index {i} out of range for m = {}", inst.m())));
    }
    let s = dir.sign();
    for (sum, &q) in sums.sum_x.iter_mut().zip(inst.row(i)) {
        *sum += s * q;
    }
    Ok(())
}

/// Adds `(y'_j - y_j) q_ij` to every `sum_y[i]`.
pub fn update_sums_after_flip_y(sums: &mut SumState, inst: &Instance, j: usize, dir: Direction) -> Result<()> {
    sums.valid_y(inst)?;
    if j >= inst.n() {
        return Err(Error::Shape(format!("column index {j} out of range for n = {}", inst.n())));
    }
    let s = dir.sign();
    for (sum, &q) in sums.sum_y.iter_mut().zip(inst.col(j)) {
        *sum += s * q;
    }
    Ok(())
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CoordinateOutcome {
    pub solution: Solution,
    pub value: i64,
}

/// Progress report of [`run_coordinate_observed`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CoordinateEvent {
    /// The floated side was replaced by its best response.
    Refloat { side: FloatSide, value: i64 },
    /// An improving flip-float move was accepted.
    Flip {
        side: FloatSide,
        index: usize,
        gain: i64,
        value: i64,
    },
}

/// The side whose bit is flipped (the other side floats).
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FloatSide {
    X,
    Y,
}

/// Runs the flip-float coordinate method from `start`.
pub fn run_coordinate(inst: &Instance, start: &Solution, deadline: Option<Instant>) -> Result<CoordinateOutcome> {
    run_coordinate_observed(inst, start, deadline, |_| {})
}

fn expired(deadline: Option<Instant>) -> bool {
    deadline.is_some_and(|limit| Instant::now() >= limit)
}

/// First-improvement scan over one side. `flipped`/`floated` are the bits of
/// the flipped and floated side, `sums` the sums of the floated side.
/// Returns whether any move was accepted.
#[allow(clippy::too_many_arguments)]
fn improve_side<'q, F>(
    side: FloatSide,
    linear_coef: &[i64],
    coupling: impl Fn(usize) -> &'q [i64],
    flipped: &mut [bool],
    floated: &mut [bool],
    sums: &mut [i64],
    value: &mut i64,
    deadline: Option<Instant>,
    observe: &mut F,
) -> bool
where
    F: FnMut(CoordinateEvent),
{
    let mut moved = false;
    'scan: loop {
        for idx in 0..flipped.len() {
            let dir = Direction::flipping(flipped[idx]).sign();
            let row = coupling(idx);
            let gain = float_gain(dir, linear_coef[idx], row, sums);
            if gain > 0 {
                flipped[idx] = !flipped[idx];
                for ((sum, &q), bit) in sums.iter_mut().zip(row).zip(floated.iter_mut()) {
                    *sum += dir * q;
                    *bit = *sum > 0;
                }
                *value += gain;
                moved = true;
                observe(CoordinateEvent::Flip {
                    side,
                    index: idx,
                    gain,
                    value: *value,
                });
                if expired(deadline) {
                    return moved;
                }
                continue 'scan;
            }
        }
        return moved;
    }
}

/// [`run_coordinate`] with a callback invoked after every refloat and every
/// accepted move.
pub fn run_coordinate_observed<F>(
    inst: &Instance,
    start: &Solution,
    deadline: Option<Instant>,
    mut observe: F,
) -> Result<CoordinateOutcome>
where
    F: FnMut(CoordinateEvent),
{
    inst.check_solution(start)?;
    let mut x = start.x.clone();
    let mut y = start.y.clone();
    let mut value;
    // x vectors seen at round starts without a strict gain; guards plateaus
    let mut plateau: HashSet<Vec<bool>> = HashSet::new();
    let mut plateau_value = i64::MIN;

    loop {
        let mut sum_x = column_sums(inst, &x);
        for (bit, &s) in y.iter_mut().zip(&sum_x) {
            *bit = s > 0;
        }
        value = linear(inst.c(), &x) + positive_part(&sum_x);
        observe(CoordinateEvent::Refloat {
            side: FloatSide::Y,
            value,
        });

        if value > plateau_value {
            plateau.clear();
            plateau_value = value;
        }
        if !plateau.insert(x.clone()) {
            break;
        }

        improve_side(
            FloatSide::X,
            inst.c(),
            |i| inst.row(i),
            &mut x,
            &mut y,
            &mut sum_x,
            &mut value,
            deadline,
            &mut observe,
        );
        if expired(deadline) {
            break;
        }
        let x_after_phase = x.clone();

        let mut sum_y = row_sums(inst, &y);
        for (bit, &s) in x.iter_mut().zip(&sum_y) {
            *bit = s > 0;
        }
        value = linear(inst.d(), &y) + positive_part(&sum_y);
        observe(CoordinateEvent::Refloat {
            side: FloatSide::X,
            value,
        });

        let y_moved = improve_side(
            FloatSide::Y,
            inst.d(),
            |j| inst.col(j),
            &mut y,
            &mut x,
            &mut sum_y,
            &mut value,
            deadline,
            &mut observe,
        );
        if expired(deadline) || (!y_moved && x == x_after_phase) {
            break;
        }
    }

    Ok(CoordinateOutcome {
        solution: Solution::new(x, y),
        value,
    })
}
