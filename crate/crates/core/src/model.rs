//! Problem data, objective evaluation and the exact oracle.
//!
//! An instance is `max f(x, y) = x^T Q y + c x + d y` over binary `x` (length `m`)
//! and binary `y` (length `n`). Every coefficient is an integer and all objective
//! accounting is exact `i64` arithmetic; [`Instance::new`] refuses inputs whose
//! worst-case objective magnitude could exceed `2^62`.

use crate::error::{Error, Result};

/// Largest admissible bound on `|f(x, y)|`.
pub const MAGNITUDE_LIMIT: u128 = 1 << 62;

/// Cap on `m + n` for [`brute_force_opt`].
pub const BRUTE_FORCE_CAP: usize = 30;

/// A BBQP instance. Immutable once built.
///
/// `Q` is kept twice, row-major and column-major, so that both x-side and
/// y-side updates walk contiguous memory.
#[derive(Clone, Debug)]
pub struct Instance {
    m: usize,
    n: usize,
    rows: Vec<i64>,
    cols: Vec<i64>,
    c: Vec<i64>,
    d: Vec<i64>,
    pub name: Option<String>,
}

impl PartialEq for Instance {
    fn eq(&self, other: &Self) -> bool {
        self.m == other.m
            && self.n == other.n
            && self.rows == other.rows
            && self.c == other.c
            && self.d == other.d
            && self.name == other.name
    }
}

impl Eq for Instance {}

impl Instance {
    /// Builds an instance from a row-major `m x n` matrix and the linear terms.
    pub fn new(m: usize, n: usize, q: Vec<i64>, c: Vec<i64>, d: Vec<i64>) -> Result<Self> {
        if m == 0 || n == 0 {
            return Err(Error::Shape(format!("dimensions must be positive, got {m}x{n}")));
        }
        if q.len() != m * n {
            return Err(Error::Shape(format!(
                "Q has {} entries, expected {m}x{n} = {}",
                q.len(),
                m * n
            )));
        }
        if c.len() != m {
            return Err(Error::Shape(format!("c has length {}, expected {m}", c.len())));
        }
        if d.len() != n {
            return Err(Error::Shape(format!("d has length {}, expected {n}", d.len())));
        }
        let bound = magnitude_bound(m, n, &q, &c, &d);
        if bound > MAGNITUDE_LIMIT {
            return Err(Error::Overflow(bound));
        }
        let mut cols = vec![0; m * n];
        for i in 0..m {
            for j in 0..n {
                cols[j * m + i] = q[i * n + j];
            }
        }
        Ok(Self {
            m,
            n,
            rows: q,
            cols,
            c,
            d,
            name: None,
        })
    }

    /// Convenience constructor from nested rows.
    pub fn from_rows(q: &[Vec<i64>], c: Vec<i64>, d: Vec<i64>) -> Result<Self> {
        let m = q.len();
        let n = q.first().map_or(0, Vec::len);
        if let Some((i, row)) = q.iter().enumerate().find(|(_, r)| r.len() != n) {
            return Err(Error::Shape(format!(
                "row {i} has {} entries, expected {n}",
                row.len()
            )));
        }
        Self::new(m, n, q.concat(), c, d)
    }

    pub fn with_name(mut self, name: impl Into<String>) -> Self {
        self.name = Some(name.into());
        self
    }

    #[inline]
    pub fn m(&self) -> usize {
        self.m
    }

    #[inline]
    pub fn n(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn q(&self, i: usize, j: usize) -> i64 {
        self.rows[i * self.n + j]
    }

    /// Row `i` of `Q` (length `n`).
    #[inline]
    pub fn row(&self, i: usize) -> &[i64] {
        &self.rows[i * self.n..(i + 1) * self.n]
    }

    /// Column `j` of `Q` (length `m`).
    #[inline]
    pub fn col(&self, j: usize) -> &[i64] {
        &self.cols[j * self.m..(j + 1) * self.m]
    }

    #[inline]
    pub fn c(&self) -> &[i64] {
        &self.c
    }

    #[inline]
    pub fn d(&self) -> &[i64] {
        &self.d
    }

    /// Row-major view of `Q`.
    pub fn q_row_major(&self) -> &[i64] {
        &self.rows
    }

    pub(crate) fn check_x(&self, x: &[bool]) -> Result<()> {
        if x.len() != self.m {
            return Err(Error::Shape(format!("x has length {}, expected m = {}", x.len(), self.m)));
        }
        Ok(())
    }

    pub(crate) fn check_y(&self, y: &[bool]) -> Result<()> {
        if y.len() != self.n {
            return Err(Error::Shape(format!("y has length {}, expected n = {}", y.len(), self.n)));
        }
        Ok(())
    }

    pub(crate) fn check_solution(&self, sol: &Solution) -> Result<()> {
        self.check_x(&sol.x)?;
        self.check_y(&sol.y)
    }
}

fn magnitude_bound(m: usize, n: usize, q: &[i64], c: &[i64], d: &[i64]) -> u128 {
    let max_abs = |v: &[i64]| v.iter().map(|a| a.unsigned_abs() as u128).max().unwrap_or(0);
    (m as u128) * (n as u128) * max_abs(q) + (m as u128) * max_abs(c) + (n as u128) * max_abs(d)
}

/// A candidate assignment `(x, y)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Solution {
    pub x: Vec<bool>,
    pub y: Vec<bool>,
}

impl Solution {
    pub fn new(x: Vec<bool>, y: Vec<bool>) -> Self {
        Self { x, y }
    }

    pub fn zeros(m: usize, n: usize) -> Self {
        Self {
            x: vec![false; m],
            y: vec![false; n],
        }
    }

    /// Builds a solution from two `0`/`1` strings, e.g. `Solution::from_bits("01", "11")`.
    ///
    /// Panics on characters other than `0` and `1`; meant for literals.
    pub fn from_bits(x: &str, y: &str) -> Self {
        let conv = |s: &str| {
            s.chars()
                .map(|ch| match ch {
                    '0' => false,
                    '1' => true,
                    other => panic!("not a bit: {other:?}"),
                })
                .collect()
        };
        Self { x: conv(x), y: conv(y) }
    }

    pub fn m(&self) -> usize {
        self.x.len()
    }

    pub fn n(&self) -> usize {
        self.y.len()
    }
}

/// Renders a bit vector as a contiguous `0`/`1` string.
pub fn bits_to_string(bits: &[bool]) -> String {
    bits.iter().map(|&b| if b { '1' } else { '0' }).collect()
}

/// Exact objective value `f(x, y)`.
pub fn evaluate(inst: &Instance, sol: &Solution) -> Result<i64> {
    inst.check_solution(sol)?;
    Ok(evaluate_unchecked(inst, &sol.x, &sol.y))
}

pub(crate) fn evaluate_unchecked(inst: &Instance, x: &[bool], y: &[bool]) -> i64 {
    let mut value: i64 = y.iter().zip(inst.d()).filter(|(&b, _)| b).map(|(_, &v)| v).sum();
    for (i, &xi) in x.iter().enumerate() {
        if !xi {
            continue;
        }
        let row_sum: i64 = inst
            .row(i)
            .iter()
            .zip(y)
            .filter(|(_, &b)| b)
            .map(|(&q, _)| q)
            .sum();
        value += inst.c()[i] + row_sum;
    }
    value
}

/// `d_j + sum_i x_i q_ij` for every column `j`.
pub(crate) fn column_sums(inst: &Instance, x: &[bool]) -> Vec<i64> {
    let mut sums = inst.d().to_vec();
    for (i, _) in x.iter().enumerate().filter(|(_, &b)| b) {
        for (s, &q) in sums.iter_mut().zip(inst.row(i)) {
            *s += q;
        }
    }
    sums
}

/// `c_i + sum_j y_j q_ij` for every row `i`.
pub(crate) fn row_sums(inst: &Instance, y: &[bool]) -> Vec<i64> {
    let mut sums = inst.c().to_vec();
    for (j, _) in y.iter().enumerate().filter(|(_, &b)| b) {
        for (s, &q) in sums.iter_mut().zip(inst.col(j)) {
            *s += q;
        }
    }
    sums
}

/// Optimal `y` for a fixed `x`: `y_j = 1` iff `d_j + sum_i x_i q_ij > 0`.
pub fn best_response_y(inst: &Instance, x: &[bool]) -> Result<Vec<bool>> {
    inst.check_x(x)?;
    Ok(column_sums(inst, x).into_iter().map(|s| s > 0).collect())
}

/// Optimal `x` for a fixed `y`: `x_i = 1` iff `c_i + sum_j y_j q_ij > 0`.
pub fn best_response_x(inst: &Instance, y: &[bool]) -> Result<Vec<bool>> {
    inst.check_y(y)?;
    Ok(row_sums(inst, y).into_iter().map(|s| s > 0).collect())
}

/// Hamming distance over the concatenation of `x` and `y`.
pub fn hamming(a: &Solution, b: &Solution) -> Result<usize> {
    if a.m() != b.m() || a.n() != b.n() {
        return Err(Error::Shape(format!(
            "cannot compare {}x{} with {}x{}",
            a.m(),
            a.n(),
            b.m(),
            b.n()
        )));
    }
    let diff = |u: &[bool], v: &[bool]| u.iter().zip(v).filter(|(p, q)| p != q).count();
    Ok(diff(&a.x, &b.x) + diff(&a.y, &b.y))
}

/// Smallest `M` accepted by [`reduce_bqp`]: `1 + n * max|q'| + max|c'|`.
pub fn reduction_guard(qp: &[i64], cp: &[i64]) -> i64 {
    let n = cp.len() as i64;
    let max_q = qp.iter().map(|v| v.abs()).max().unwrap_or(0);
    let max_c = cp.iter().map(|v| v.abs()).max().unwrap_or(0);
    1 + n * max_q + max_c
}

/// Rewrites a BQP `max x^T Q' x + c' x` (row-major `n x n`) as a BBQP whose
/// optimum is twice the BQP optimum and is attained only with `x = y`.
///
/// Uses `Q = 2Q' + 4MI`, `c = d = c' - 2Me`, i.e. the usual penalty reduction
/// multiplied through by two so every coefficient stays integral.
pub fn reduce_bqp(qp: &[i64], cp: &[i64], big_m: i64) -> Result<Instance> {
    let n = cp.len();
    if n == 0 || qp.len() != n * n {
        return Err(Error::Shape(format!(
            "BQP matrix has {} entries, expected {n}x{n}",
            qp.len()
        )));
    }
    let required = reduction_guard(qp, cp);
    if big_m < required {
        return Err(Error::MTooSmall {
            given: big_m,
            required,
        });
    }
    let penalty = big_m
        .checked_mul(4)
        .ok_or(Error::Overflow(big_m.unsigned_abs() as u128 * 4))?;
    let mut q: Vec<i64> = qp.iter().map(|&v| 2 * v).collect();
    for k in 0..n {
        q[k * n + k] += penalty;
    }
    let lin: Vec<i64> = cp.iter().map(|&v| v - 2 * big_m).collect();
    Instance::new(n, n, q, lin.clone(), lin)
}

/// Exhaustive maximization for `m + n <= 30`.
///
/// Enumerates the shorter side and floats the other one. Among all optima the
/// lexicographically smallest `(x, y)` pair is returned.
pub fn brute_force_opt(inst: &Instance) -> Result<(Solution, i64)> {
    let (m, n) = (inst.m(), inst.n());
    if m + n > BRUTE_FORCE_CAP {
        return Err(Error::TooLarge(m + n));
    }
    let mut best: Option<(Solution, i64)> = None;
    let enumerate_x = m <= n;
    let free = if enumerate_x { m } else { n };
    for mask in 0u64..(1u64 << free) {
        // bit k of the mask drives position free-1-k so that masks ascend
        // in lexicographic string order
        let bits: Vec<bool> = (0..free).map(|k| mask >> (free - 1 - k) & 1 == 1).collect();
        let sol = if enumerate_x {
            let y = column_sums(inst, &bits).into_iter().map(|s| s > 0).collect();
            Solution::new(bits, y)
        } else {
            let x = row_sums(inst, &bits).into_iter().map(|s| s > 0).collect();
            Solution::new(x, bits)
        };
        let value = evaluate_unchecked(inst, &sol.x, &sol.y);
        let better = match &best {
            None => true,
            Some((b, v)) => value > *v || (value == *v && sol < *b),
        };
        if better {
            best = Some((sol, value));
        }
    }
    Ok(best.expect("at least one assignment is enumerated"))
}
