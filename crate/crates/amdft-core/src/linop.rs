//! Layered sparse linear operators over complex numbers.
//!
//! Every additive stage (module pre/post maps, bilinear input/output maps,
//! polynomial transforms) is a `LinearOp`: a chain of sparse layers applied
//! right to left. Keeping the factorization is what makes add counts honest.

use alloc::vec;
use alloc::vec::Vec;
use core::ops::{Add, AddAssign, Mul};

use num_complex::Complex64;
use num_traits::Zero;

use crate::error::{consistency, Result};

/// Real multiplications and real additions.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Hash)]
pub struct Ops {
    pub mults: u64,
    pub adds: u64,
}

impl Ops {
    pub const ZERO: Ops = Ops { mults: 0, adds: 0 };
    pub fn new(mults: u64, adds: u64) -> Self {
        Ops { mults, adds }
    }
}

impl Add for Ops {
    type Output = Ops;
    fn add(self, o: Ops) -> Ops {
        Ops { mults: self.mults + o.mults, adds: self.adds + o.adds }
    }
}

impl AddAssign for Ops {
    fn add_assign(&mut self, o: Ops) {
        *self = *self + o;
    }
}

impl Mul<u64> for Ops {
    type Output = Ops;
    fn mul(self, k: u64) -> Ops {
        Ops { mults: self.mults * k, adds: self.adds * k }
    }
}

/// Tolerance for treating a constant as one of 1, -1, j, -j.
pub const TRIVIAL_TOL: f64 = 1e-12;
const PURE_TOL: f64 = 1e-11;

/// Kind of a scalar constant for cost purposes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ConstKind {
    Zero,
    /// 1, -1, j or -j
    Trivial,
    /// Gaussian integer with one zero part and magnitude `k >= 2`.
    SmallInt(u64),
    /// Purely real or purely imaginary.
    Pure,
    General,
}

pub fn classify(c: Complex64) -> ConstKind {
    let mag = c.norm();
    if mag < 1e-300 {
        return ConstKind::Zero;
    }
    for t in [Complex64::new(1.0, 0.0), Complex64::new(-1.0, 0.0), Complex64::new(0.0, 1.0), Complex64::new(0.0, -1.0)] {
        if (c - t).norm() < TRIVIAL_TOL {
            return ConstKind::Trivial;
        }
    }
    let (re, im) = (c.re.abs(), c.im.abs());
    let pure = im <= PURE_TOL * mag || re <= PURE_TOL * mag;
    if pure {
        let v = re.max(im);
        let r = libm::round(v);
        if (v - r).abs() < TRIVIAL_TOL && r >= 2.0 && r < 1e15 {
            return ConstKind::SmallInt(r as u64);
        }
        ConstKind::Pure
    } else {
        ConstKind::General
    }
}

/// Snap a constant onto 0, +-1 or +-j when it is within [`TRIVIAL_TOL`].
pub fn snap(c: Complex64) -> Complex64 {
    match classify(c) {
        ConstKind::Zero => Complex64::zero(),
        ConstKind::Trivial => Complex64::new(libm::round(c.re), libm::round(c.im)),
        _ => {
            let mag = c.norm();
            if c.im.abs() <= PURE_TOL * mag {
                Complex64::new(c.re, 0.0)
            } else if c.re.abs() <= PURE_TOL * mag {
                Complex64::new(0.0, c.im)
            } else {
                c
            }
        }
    }
}

/// Cost of multiplying a complex datum by `c` when it is a multiplier.
pub fn mult_cost(c: Complex64) -> Ops {
    match classify(c) {
        ConstKind::Zero | ConstKind::Trivial => Ops::ZERO,
        ConstKind::SmallInt(_) | ConstKind::Pure => Ops::new(2, 0),
        ConstKind::General => Ops::new(3, 3),
    }
}

/// Cost of a coefficient inside a linear combination. Integer coefficients
/// are expanded into repeated additions.
pub fn coeff_cost(c: Complex64) -> Ops {
    match classify(c) {
        ConstKind::Zero | ConstKind::Trivial => Ops::ZERO,
        ConstKind::SmallInt(k) => Ops::new(0, 2 * (k - 1)),
        ConstKind::Pure => Ops::new(2, 0),
        ConstKind::General => Ops::new(3, 3),
    }
}

/// One sparse layer in CSR form.
#[derive(Debug, Clone, PartialEq)]
pub struct Layer {
    in_len: usize,
    row_ptr: Vec<usize>,
    cols: Vec<usize>,
    vals: Vec<Complex64>,
}

impl Layer {
    pub fn from_rows(in_len: usize, rows: Vec<Vec<(usize, Complex64)>>) -> Layer {
        let mut row_ptr = vec![0];
        let mut cols = Vec::new();
        let mut vals = Vec::new();
        for row in rows {
            let mut row = row;
            row.sort_by_key(|e| e.0);
            let mut merged: Vec<(usize, Complex64)> = Vec::with_capacity(row.len());
            for (c, v) in row {
                assert!(c < in_len, "column {c} out of range {in_len}");
                match merged.last_mut() {
                    Some(last) if last.0 == c => last.1 += v,
                    _ => merged.push((c, v)),
                }
            }
            for (c, v) in merged {
                let v = snap(v);
                if !v.is_zero() {
                    cols.push(c);
                    vals.push(v);
                }
            }
            row_ptr.push(cols.len());
        }
        Layer { in_len, row_ptr, cols, vals }
    }

    pub fn identity(n: usize) -> Layer {
        Layer::from_rows(n, (0..n).map(|i| vec![(i, Complex64::new(1.0, 0.0))]).collect())
    }

    pub fn in_len(&self) -> usize {
        self.in_len
    }

    pub fn out_len(&self) -> usize {
        self.row_ptr.len() - 1
    }

    pub fn row(&self, r: usize) -> impl Iterator<Item = (usize, Complex64)> + '_ {
        (self.row_ptr[r]..self.row_ptr[r + 1]).map(move |k| (self.cols[k], self.vals[k]))
    }

    pub fn rows(&self) -> Vec<Vec<(usize, Complex64)>> {
        (0..self.out_len()).map(|r| self.row(r).collect()).collect()
    }

    pub fn cost(&self) -> Ops {
        let mut ops = Ops::ZERO;
        for r in 0..self.out_len() {
            let nnz = (self.row_ptr[r + 1] - self.row_ptr[r]) as u64;
            if nnz > 1 {
                ops.adds += 2 * (nnz - 1);
            }
            for (_, v) in self.row(r) {
                ops += coeff_cost(v);
            }
        }
        ops
    }

    fn is_identity(&self) -> bool {
        self.in_len == self.out_len()
            && (0..self.out_len()).all(|r| {
                self.row_ptr[r + 1] - self.row_ptr[r] == 1
                    && self.cols[self.row_ptr[r]] == r
                    && self.vals[self.row_ptr[r]] == Complex64::new(1.0, 0.0)
            })
    }

    pub fn apply(&self, x: &[Complex64], y: &mut [Complex64]) {
        debug_assert_eq!(x.len(), self.in_len);
        debug_assert_eq!(y.len(), self.out_len());
        for (r, out) in y.iter_mut().enumerate() {
            let mut acc = Complex64::zero();
            for k in self.row_ptr[r]..self.row_ptr[r + 1] {
                acc += x[self.cols[k]] * self.vals[k];
            }
            *out = acc;
        }
    }
}

/// Chain of sparse layers, applied first to last.
#[derive(Debug, Clone, PartialEq)]
pub struct LinearOp {
    in_len: usize,
    layers: Vec<Layer>,
}

impl LinearOp {
    pub fn identity(n: usize) -> LinearOp {
        LinearOp { in_len: n, layers: Vec::new() }
    }

    pub fn from_layer(layer: Layer) -> LinearOp {
        LinearOp { in_len: layer.in_len, layers: vec![layer] }
    }

    pub fn from_rows(in_len: usize, rows: Vec<Vec<(usize, Complex64)>>) -> LinearOp {
        Self::from_layer(Layer::from_rows(in_len, rows))
    }

    /// Single layer from a dense integer matrix.
    pub fn from_int_matrix(in_len: usize, m: &[Vec<i64>]) -> LinearOp {
        let rows = m
            .iter()
            .map(|r| r.iter().enumerate().filter(|e| *e.1 != 0).map(|(c, &v)| (c, Complex64::new(v as f64, 0.0))).collect())
            .collect();
        Self::from_rows(in_len, rows)
    }

    pub fn from_dense(in_len: usize, m: &[Vec<Complex64>]) -> LinearOp {
        let rows = m.iter().map(|r| r.iter().enumerate().filter(|e| !e.1.is_zero()).map(|(c, &v)| (c, v)).collect()).collect();
        Self::from_rows(in_len, rows)
    }

    /// Output `i` takes input `src[i]` (gather permutation or selection).
    pub fn gather(in_len: usize, src: &[usize]) -> LinearOp {
        Self::from_rows(in_len, src.iter().map(|&s| vec![(s, Complex64::new(1.0, 0.0))]).collect())
    }

    pub fn diagonal(d: &[Complex64]) -> LinearOp {
        Self::from_rows(d.len(), d.iter().enumerate().map(|(i, &v)| vec![(i, v)]).collect())
    }

    pub fn in_len(&self) -> usize {
        self.in_len
    }

    pub fn out_len(&self) -> usize {
        self.layers.last().map_or(self.in_len, |l| l.out_len())
    }

    pub fn layers(&self) -> &[Layer] {
        &self.layers
    }

    /// `next` applied after `self`.
    pub fn then(mut self, next: LinearOp) -> Result<LinearOp> {
        if next.in_len != self.out_len() {
            return Err(consistency!("operator chain mismatch: {} -> {}", self.out_len(), next.in_len));
        }
        self.layers.extend(next.layers);
        Ok(self)
    }

    /// Block-diagonal sum. Shorter chains are padded with identity layers.
    pub fn block_diag(ops: &[LinearOp]) -> LinearOp {
        let depth = ops.iter().map(|o| o.layers.len()).max().unwrap_or(0);
        let in_len = ops.iter().map(|o| o.in_len).sum();
        let mut layers = Vec::with_capacity(depth);
        let mut cur_lens: Vec<usize> = ops.iter().map(|o| o.in_len).collect();
        for d in 0..depth {
            let total_in: usize = cur_lens.iter().sum();
            let mut rows = Vec::new();
            let mut offset = 0;
            for (k, op) in ops.iter().enumerate() {
                match op.layers.get(d) {
                    Some(l) => {
                        for r in 0..l.out_len() {
                            rows.push(l.row(r).map(|(c, v)| (c + offset, v)).collect());
                        }
                        offset += cur_lens[k];
                        cur_lens[k] = l.out_len();
                    }
                    None => {
                        for i in 0..cur_lens[k] {
                            rows.push(vec![(offset + i, Complex64::new(1.0, 0.0))]);
                        }
                        offset += cur_lens[k];
                    }
                }
            }
            layers.push(Layer::from_rows(total_in, rows));
        }
        LinearOp { in_len, layers }
    }

    pub fn cost(&self) -> Ops {
        self.layers.iter().fold(Ops::ZERO, |a, l| a + l.cost())
    }

    /// Drop rows whose values never reach an output, and identity layers.
    pub fn prune(mut self) -> LinearOp {
        let mut needed_next: Option<Vec<bool>> = None;
        for li in (0..self.layers.len()).rev() {
            let layer = &self.layers[li];
            let keep: Vec<bool> = needed_next.clone().unwrap_or_else(|| vec![true; layer.out_len()]);
            let mut needed = vec![false; layer.in_len];
            let mut new_rows = Vec::new();
            let mut remap = vec![usize::MAX; layer.out_len()];
            for r in 0..layer.out_len() {
                if keep[r] {
                    remap[r] = new_rows.len();
                    let row: Vec<(usize, Complex64)> = layer.row(r).collect();
                    for &(c, _) in &row {
                        needed[c] = true;
                    }
                    new_rows.push(row);
                }
            }
            let new_layer = Layer::from_rows(layer.in_len, new_rows);
            self.layers[li] = new_layer;
            if li + 1 < self.layers.len() {
                let next = &self.layers[li + 1];
                let rows = next.rows().into_iter().map(|row| row.into_iter().map(|(c, v)| (remap[c], v)).collect()).collect();
                self.layers[li + 1] = Layer::from_rows(self.layers[li].out_len(), rows);
            }
            needed_next = Some(needed);
        }
        // The first layer must keep its input width; unused inputs are fine.
        self.layers.retain(|l| !l.is_identity());
        self
    }

    pub fn apply(&self, x: &[Complex64]) -> Vec<Complex64> {
        let mut cur = x.to_vec();
        let mut next = Vec::new();
        for l in &self.layers {
            next.clear();
            next.resize(l.out_len(), Complex64::zero());
            l.apply(&cur, &mut next);
            core::mem::swap(&mut cur, &mut next);
        }
        cur
    }

    /// Apply with caller-owned scratch to avoid allocation in hot loops.
    pub fn apply_into(&self, x: &[Complex64], out: &mut Vec<Complex64>, scratch: &mut Vec<Complex64>) {
        out.clear();
        out.extend_from_slice(x);
        for l in &self.layers {
            scratch.clear();
            scratch.resize(l.out_len(), Complex64::zero());
            l.apply(out, scratch);
            core::mem::swap(out, scratch);
        }
    }

    pub fn to_dense(&self) -> Vec<Vec<Complex64>> {
        let n = self.in_len;
        let mut cols = Vec::with_capacity(n);
        for j in 0..n {
            let mut e = vec![Complex64::zero(); n];
            e[j] = Complex64::new(1.0, 0.0);
            cols.push(self.apply(&e));
        }
        let m = self.out_len();
        (0..m).map(|i| (0..n).map(|j| cols[j][i]).collect()).collect()
    }

    /// True when every coefficient is a Gaussian integer.
    pub fn is_integral(&self) -> bool {
        self.layers.iter().all(|l| {
            l.vals.iter().all(|v| (v.re - libm::round(v.re)).abs() < TRIVIAL_TOL && (v.im - libm::round(v.im)).abs() < TRIVIAL_TOL)
        })
    }

    /// Count of coefficients that would need a multiplier.
    pub fn nontrivial_coeffs(&self) -> usize {
        self.layers
            .iter()
            .flat_map(|l| l.vals.iter())
            .filter(|v| matches!(classify(**v), ConstKind::Pure | ConstKind::General))
            .count()
    }
}

/// Dense complex matrix product `a * b`.
pub fn mat_mul(a: &[Vec<Complex64>], b: &[Vec<Complex64>]) -> Vec<Vec<Complex64>> {
    let inner = b.len();
    let cols = b.first().map_or(0, |r| r.len());
    a.iter()
        .map(|row| {
            (0..cols)
                .map(|j| (0..inner).fold(Complex64::zero(), |acc, k| acc + row[k] * b[k][j]))
                .collect()
        })
        .collect()
}

/// Inverse of a square complex matrix by Gauss-Jordan with partial pivoting.
pub fn mat_inv(a: &[Vec<Complex64>]) -> Result<Vec<Vec<Complex64>>> {
    let n = a.len();
    let mut m: Vec<Vec<Complex64>> = a
        .iter()
        .enumerate()
        .map(|(i, r)| {
            let mut row = r.clone();
            row.extend((0..n).map(|j| if i == j { Complex64::new(1.0, 0.0) } else { Complex64::zero() }));
            row
        })
        .collect();
    for col in 0..n {
        let piv = (col..n)
            .max_by(|&x, &y| m[x][col].norm().partial_cmp(&m[y][col].norm()).unwrap_or(core::cmp::Ordering::Equal))
            .unwrap_or(col);
        if m[piv][col].norm() < 1e-12 {
            return Err(consistency!("singular matrix"));
        }
        m.swap(col, piv);
        let inv = m[col][col].inv();
        for v in m[col].iter_mut() {
            *v *= inv;
        }
        let pivot_row = m[col].clone();
        for (r, row) in m.iter_mut().enumerate() {
            if r != col {
                let f = row[col];
                if !f.is_zero() {
                    for (x, p) in row.iter_mut().zip(&pivot_row) {
                        *x -= f * p;
                    }
                }
            }
        }
    }
    Ok(m.into_iter().map(|r| r[n..].to_vec()).collect())
}
