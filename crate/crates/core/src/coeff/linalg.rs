//! Linear systems over `Z/ℓ^k`.
//!
//! `Z/ℓ^k` is a local principal ideal ring, so a matrix can be brought to
//! Smith form `L·A·Q = diag(ℓ^{v_0}, ℓ^{v_1}, …)` by choosing, at every step,
//! a pivot of minimal ℓ-adic valuation in the remaining block: every other
//! entry is then divisible by the pivot. Unit pivots are the common case and
//! reduce to ordinary Gaussian elimination.

use crate::coeff::ModulusContext;
use crate::error::{Error, Result};

/// Dense row-major matrix of canonical representatives.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Matrix {
    ctx: ModulusContext,
    rows: usize,
    cols: usize,
    data: Vec<u64>,
}

impl Matrix {
    pub fn zeros(ctx: ModulusContext, rows: usize, cols: usize) -> Self {
        Matrix { ctx, rows, cols, data: vec![0; rows * cols] }
    }

    pub fn identity(ctx: ModulusContext, n: usize) -> Self {
        let mut m = Self::zeros(ctx, n, n);
        for i in 0..n {
            m.data[i * n + i] = 1 % ctx.modulus();
        }
        m
    }

    pub fn from_rows(ctx: ModulusContext, rows: &[Vec<u64>]) -> Result<Self> {
        let cols = rows.first().map_or(0, |r| r.len());
        if rows.iter().any(|r| r.len() != cols) {
            return Err(Error::DimensionMismatch("ragged matrix rows".into()));
        }
        let data = rows.iter().flatten().map(|&v| v % ctx.modulus()).collect();
        Ok(Matrix { ctx, rows: rows.len(), cols, data })
    }

    pub fn context(&self) -> ModulusContext {
        self.ctx
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> u64 {
        self.data[i * self.cols + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: u64) {
        self.data[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> &[u64] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn mul_vec(&self, x: &[u64]) -> Vec<u64> {
        assert_eq!(x.len(), self.cols);
        (0..self.rows)
            .map(|i| {
                self.row(i)
                    .iter()
                    .zip(x)
                    .fold(0, |acc, (&a, &b)| self.ctx.mul_add(acc, a, b))
            })
            .collect()
    }

    /// `y·A` for a row vector `y`.
    pub fn left_mul_vec(&self, y: &[u64]) -> Vec<u64> {
        assert_eq!(y.len(), self.rows);
        let mut out = vec![0; self.cols];
        for (i, &yi) in y.iter().enumerate() {
            if yi == 0 {
                continue;
            }
            for (o, &a) in out.iter_mut().zip(self.row(i)) {
                *o = self.ctx.mul_add(*o, yi, a);
            }
        }
        out
    }

    pub fn mul(&self, other: &Matrix) -> Matrix {
        assert_eq!(self.cols, other.rows);
        let mut out = Matrix::zeros(self.ctx, self.rows, other.cols);
        for i in 0..self.rows {
            for t in 0..self.cols {
                let a = self.get(i, t);
                if a == 0 {
                    continue;
                }
                for j in 0..other.cols {
                    let v = self.ctx.mul_add(out.get(i, j), a, other.get(t, j));
                    out.set(i, j, v);
                }
            }
        }
        out
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a != b {
            for j in 0..self.cols {
                self.data.swap(a * self.cols + j, b * self.cols + j);
            }
        }
    }

    fn swap_cols(&mut self, a: usize, b: usize) {
        if a != b {
            for i in 0..self.rows {
                self.data.swap(i * self.cols + a, i * self.cols + b);
            }
        }
    }

    fn scale_row(&mut self, i: usize, s: u64) {
        let ctx = self.ctx;
        for v in &mut self.data[i * self.cols..(i + 1) * self.cols] {
            *v = ctx.mul(*v, s);
        }
    }

    /// row[dst] -= q * row[src]
    fn sub_row(&mut self, dst: usize, src: usize, q: u64) {
        let ctx = self.ctx;
        for j in 0..self.cols {
            let s = self.data[src * self.cols + j];
            if s != 0 {
                let d = &mut self.data[dst * self.cols + j];
                *d = ctx.sub(*d, ctx.mul(q, s));
            }
        }
    }

    /// col[dst] -= q * col[src]
    fn sub_col(&mut self, dst: usize, src: usize, q: u64) {
        let ctx = self.ctx;
        for i in 0..self.rows {
            let s = self.data[i * self.cols + src];
            if s != 0 {
                let d = &mut self.data[i * self.cols + dst];
                *d = ctx.sub(*d, ctx.mul(q, s));
            }
        }
    }
}

/// Smith decomposition `left · A · right = diag(ℓ^{valuations[i]})`.
#[derive(Clone, Debug)]
pub struct Smith {
    pub left: Matrix,
    pub right: Matrix,
    /// Valuations of the nonzero diagonal entries, in pivot order.
    pub valuations: Vec<u32>,
}

impl Smith {
    pub fn rank(&self) -> usize {
        self.valuations.len()
    }
}

fn divide_exact(a: u64, ell_pow: u64) -> u64 {
    debug_assert_eq!(a % ell_pow, 0);
    a / ell_pow
}

pub fn smith(a: &Matrix) -> Smith {
    let ctx = a.ctx;
    let mut w = a.clone();
    let mut left = Matrix::identity(ctx, a.rows);
    let mut right = Matrix::identity(ctx, a.cols);
    let mut valuations = Vec::new();
    let steps = a.rows.min(a.cols);

    for t in 0..steps {
        let mut best: Option<(u32, usize, usize)> = None;
        'search: for i in t..w.rows {
            for j in t..w.cols {
                let v = w.get(i, j);
                if v == 0 {
                    continue;
                }
                let val = ctx.valuation(v);
                if best.map_or(true, |(b, _, _)| val < b) {
                    best = Some((val, i, j));
                    if val == 0 {
                        break 'search;
                    }
                }
            }
        }
        let Some((val, pi, pj)) = best else { break };

        w.swap_rows(t, pi);
        left.swap_rows(t, pi);
        w.swap_cols(t, pj);
        right.swap_cols(t, pj);

        let ell_pow = ctx.pow(ctx.ell(), val as u64);
        let unit = divide_exact(w.get(t, t), ell_pow);
        let unit_inv = ctx.inv(unit).expect("minimal-valuation pivot has a unit part");
        w.scale_row(t, unit_inv);
        left.scale_row(t, unit_inv);

        for i in t + 1..w.rows {
            let e = w.get(i, t);
            if e != 0 {
                let q = divide_exact(e, ell_pow);
                w.sub_row(i, t, q);
                left.sub_row(i, t, q);
            }
        }
        for j in t + 1..w.cols {
            let e = w.get(t, j);
            if e != 0 {
                let q = divide_exact(e, ell_pow);
                w.sub_col(j, t, q);
                right.sub_col(j, t, q);
            }
        }
        valuations.push(val);
    }

    Smith { left, right, valuations }
}

/// Outcome of solving `A·x = b`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Solution {
    Solved(Vec<u64>),
    /// A row vector `y` with `y·A = 0` and `y·b ≠ 0`.
    Inconsistent(Vec<u64>),
}

impl Solution {
    pub fn solution(&self) -> Option<&[u64]> {
        match self {
            Solution::Solved(x) => Some(x),
            Solution::Inconsistent(_) => None,
        }
    }
}

/// A Smith decomposition kept around to solve `A·x = b` for many `b`.
#[derive(Clone, Debug)]
pub struct PreparedSystem {
    ctx: ModulusContext,
    rows: usize,
    cols: usize,
    smith: Smith,
}

impl PreparedSystem {
    pub fn new(a: &Matrix) -> Self {
        PreparedSystem { ctx: a.ctx, rows: a.rows, cols: a.cols, smith: smith(a) }
    }

    pub fn smith(&self) -> &Smith {
        &self.smith
    }

    pub fn has_left_inverse(&self) -> bool {
        self.smith.rank() == self.cols && self.smith.valuations.iter().all(|&v| v == 0)
    }

    pub fn solve(&self, b: &[u64]) -> Result<Solution> {
        if b.len() != self.rows {
            return Err(Error::DimensionMismatch(format!(
                "right-hand side has length {}, matrix has {} rows",
                b.len(),
                self.rows
            )));
        }
        let ctx = self.ctx;
        let s = &self.smith;
        let rhs = s.left.mul_vec(b);
        let mut y = vec![0u64; self.cols];
        let k = ctx.k();

        for (t, &val) in s.valuations.iter().enumerate() {
            if ctx.valuation(rhs[t]) < val {
                let scale = ctx.pow(ctx.ell(), (k - val) as u64);
                let cert = s.left.row(t).iter().map(|&v| ctx.mul(v, scale)).collect();
                return Ok(Solution::Inconsistent(cert));
            }
            y[t] = divide_exact(rhs[t], ctx.pow(ctx.ell(), val as u64));
        }
        for t in s.rank()..self.rows {
            if rhs[t] != 0 {
                return Ok(Solution::Inconsistent(s.left.row(t).to_vec()));
            }
        }
        Ok(Solution::Solved(s.right.mul_vec(&y)))
    }
}

pub fn solve(a: &Matrix, b: &[u64]) -> Result<Solution> {
    PreparedSystem::new(a).solve(b)
}

/// True when the columns of `a` span a free direct summand, i.e. `a` has a left inverse.
pub fn has_left_inverse(a: &Matrix) -> bool {
    PreparedSystem::new(a).has_left_inverse()
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn ctx(ell: u64, k: u32) -> ModulusContext {
        ModulusContext::new(ell, k).unwrap()
    }

    fn random_matrix(ctx: ModulusContext, rows: usize, cols: usize, seed: &[u64]) -> Matrix {
        let data = (0..rows * cols)
            .map(|i| seed[i % seed.len()].wrapping_mul(2654435761).wrapping_add(i as u64) % ctx.modulus())
            .collect();
        Matrix { ctx, rows, cols, data }
    }

    #[test]
    fn smith_reconstructs_diagonal() {
        let c = ctx(3, 2);
        let a = Matrix::from_rows(c, &[vec![3, 6, 0], vec![0, 9, 3], vec![6, 3, 3]]).unwrap();
        let s = smith(&a);
        let d = s.left.mul(&a).mul(&s.right);
        for i in 0..3 {
            for j in 0..3 {
                let expected = match s.valuations.get(i) {
                    Some(&v) if i == j => c.pow(3, v as u64),
                    _ => 0,
                };
                assert_eq!(d.get(i, j), expected, "entry ({i},{j})");
            }
        }
    }

    #[test]
    fn non_unit_pivots_are_handled() {
        // 3x = 6 over Z/9 has solutions x ∈ {2, 5, 8}; 3x = 1 has none.
        let c = ctx(3, 2);
        let a = Matrix::from_rows(c, &[vec![3]]).unwrap();
        let x = solve(&a, &[6]).unwrap();
        assert_eq!(a.mul_vec(x.solution().unwrap()), vec![6]);
        match solve(&a, &[1]).unwrap() {
            Solution::Inconsistent(y) => {
                assert!(a.left_mul_vec(&y).iter().all(|&v| v == 0));
                assert_ne!(y[0] % 9, 0);
            }
            other => panic!("expected inconsistency, got {other:?}"),
        }
    }

    #[test]
    fn left_inverse_detection() {
        let c = ctx(5, 1);
        let good = Matrix::from_rows(c, &[vec![1, 0], vec![0, 1], vec![4, 0]]).unwrap();
        let bad = Matrix::from_rows(c, &[vec![1, 2], vec![2, 4]]).unwrap();
        assert!(has_left_inverse(&good));
        assert!(!has_left_inverse(&bad));
        let c2 = ctx(5, 2);
        let torsion = Matrix::from_rows(c2, &[vec![5]]).unwrap();
        assert!(!has_left_inverse(&torsion));
    }

    proptest! {
        #[test]
        fn consistent_systems_are_solved(
            ell in prop::sample::select(vec![2u64, 3, 5]),
            k in 1u32..4,
            rows in 1usize..7,
            cols in 1usize..7,
            seed in prop::collection::vec(0u64..1_000_000, 1..12),
            xseed in prop::collection::vec(0u64..1_000_000, 1..8),
        ) {
            let c = ctx(ell, k);
            let a = random_matrix(c, rows, cols, &seed);
            let x0: Vec<u64> = (0..cols).map(|i| xseed[i % xseed.len()] % c.modulus()).collect();
            let b = a.mul_vec(&x0);
            let sol = solve(&a, &b).unwrap();
            let x = sol.solution().expect("system built from a solution");
            prop_assert_eq!(a.mul_vec(x), b);
        }

        #[test]
        fn certificates_are_valid(
            ell in prop::sample::select(vec![2u64, 3, 5]),
            k in 1u32..4,
            rows in 1usize..7,
            cols in 1usize..5,
            seed in prop::collection::vec(0u64..1_000_000, 1..12),
            b in prop::collection::vec(0u64..1_000_000, 7),
        ) {
            let c = ctx(ell, k);
            let a = random_matrix(c, rows, cols, &seed);
            let b: Vec<u64> = b[..rows].iter().map(|v| v % c.modulus()).collect();
            match solve(&a, &b).unwrap() {
                Solution::Solved(x) => prop_assert_eq!(a.mul_vec(&x), b),
                Solution::Inconsistent(y) => {
                    prop_assert!(a.left_mul_vec(&y).iter().all(|&v| v == 0));
                    let yb = y.iter().zip(&b).fold(0, |acc, (&p, &q)| c.mul_add(acc, p, q));
                    prop_assert_ne!(yb, 0);
                }
            }
        }
    }
}
