//! Multidimensional residue products `A * H mod P_{n_1}(Z_1) ... P_{n_r}(Z_r)`
//! with a fixed operand `H`, as a sequence of tensor stages.

use alloc::vec;
use alloc::vec::Vec;

use num_complex::Complex64;

use crate::error::{invalid, Error, Result};
use crate::linop::{mult_cost, snap, LinearOp, Ops};
use crate::ntheory::totient;

use super::bilinear::{alg1f, alg2, alg2_default_size, table_alg, BilinearAlg};
use super::ptransform::ReducedPt;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum StrategyKind {
    BilinearTable,
    Alg1fReducedDft,
    Alg2Wraparound,
    Alg3PolyTransform,
}

impl StrategyKind {
    pub fn name(self) -> &'static str {
        match self {
            StrategyKind::BilinearTable => "bilinear",
            StrategyKind::Alg1fReducedDft => "alg1f",
            StrategyKind::Alg2Wraparound => "alg2",
            StrategyKind::Alg3PolyTransform => "alg3",
        }
    }

    pub fn from_name(s: &str) -> Option<StrategyKind> {
        [Self::BilinearTable, Self::Alg1fReducedDft, Self::Alg2Wraparound, Self::Alg3PolyTransform]
            .into_iter()
            .find(|k| k.name() == s)
    }
}

/// Strategy for one product. `inner` is the 1-D engine used by ALG3 for the
/// surviving dimensions; `fft_size` overrides the ALG2 utility FFT size.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct ProductStrategy {
    pub kind: StrategyKind,
    pub inner: StrategyKind,
    pub fft_size: Option<usize>,
}

impl ProductStrategy {
    pub const fn bilinear() -> Self {
        ProductStrategy { kind: StrategyKind::BilinearTable, inner: StrategyKind::BilinearTable, fft_size: None }
    }
    pub const fn alg1f() -> Self {
        ProductStrategy { kind: StrategyKind::Alg1fReducedDft, inner: StrategyKind::Alg1fReducedDft, fft_size: None }
    }
    pub const fn alg2(fft_size: Option<usize>) -> Self {
        ProductStrategy { kind: StrategyKind::Alg2Wraparound, inner: StrategyKind::Alg2Wraparound, fft_size }
    }
    pub const fn alg3(inner: StrategyKind) -> Self {
        ProductStrategy { kind: StrategyKind::Alg3PolyTransform, inner, fft_size: None }
    }
}

/// 1-D engine for `P_n` under a non-ALG3 kind. The table falls back to ALG2.
pub fn axis_alg(n: u64, kind: StrategyKind, fft_size: Option<usize>) -> Result<BilinearAlg> {
    if totient(n) == 1 {
        return table_alg(n);
    }
    match kind {
        StrategyKind::BilinearTable | StrategyKind::Alg3PolyTransform => match table_alg(n) {
            Err(Error::Capability(_)) => alg2(n, alg2_default_size(n)),
            r => r,
        },
        StrategyKind::Alg1fReducedDft => alg1f(n),
        StrategyKind::Alg2Wraparound => alg2(n, fft_size.unwrap_or_else(|| alg2_default_size(n))),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StageKind {
    /// polynomial transform or its inverse
    Transform,
    /// data-side pre-additions of a 1-D engine
    Pre,
    /// output-side post-additions of a 1-D engine
    Post,
}

#[derive(Debug, Clone)]
pub struct Stage {
    pub kind: StageKind,
    pub axes: Vec<usize>,
    pub out_dims: Vec<usize>,
    pub op: LinearOp,
}

/// Per-stage-kind operation totals of a block.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct BlockCost {
    pub transforms: Ops,
    pub pre: Ops,
    pub pointwise: Ops,
    pub post: Ops,
}

impl BlockCost {
    pub fn total(&self) -> Ops {
        self.transforms + self.pre + self.pointwise + self.post
    }
}

#[derive(Debug, Clone)]
pub struct BlockEngine {
    indices: Vec<u64>,
    dims: Vec<usize>,
    strategy: ProductStrategy,
    /// (absorbed, survivor) axis pairs for ALG3
    pairs: Vec<(usize, usize)>,
    pre: Vec<Stage>,
    weights: Vec<Complex64>,
    post: Vec<Stage>,
}

fn strides(shape: &[usize]) -> Vec<usize> {
    let mut s = vec![1; shape.len()];
    for i in (0..shape.len().saturating_sub(1)).rev() {
        s[i] = s[i + 1] * shape[i + 1];
    }
    s
}

fn sub_offsets(axes: &[usize], dims: &[usize], st: &[usize]) -> Vec<usize> {
    let mut offs = vec![0usize];
    for (&a, &d) in axes.iter().zip(dims) {
        offs = offs.iter().flat_map(|&o| (0..d).map(move |i| o + i * st[a])).collect();
    }
    offs
}

/// Apply `stage` to a row-major tensor of `shape`; `shape` is updated.
pub fn apply_stage(x: &[Complex64], shape: &mut [usize], stage: &Stage) -> Vec<Complex64> {
    let in_st = strides(shape);
    let in_dims: Vec<usize> = stage.axes.iter().map(|&a| shape[a]).collect();
    for (&a, &d) in stage.axes.iter().zip(&stage.out_dims) {
        shape[a] = d;
    }
    let out_st = strides(shape);
    let in_off = sub_offsets(&stage.axes, &in_dims, &in_st);
    let out_off = sub_offsets(&stage.axes, &stage.out_dims, &out_st);
    let others: Vec<usize> = (0..shape.len()).filter(|a| !stage.axes.contains(a)).collect();
    let outer: Vec<usize> = others.iter().map(|&a| shape[a]).collect();
    let count: usize = outer.iter().product();
    let mut out = vec![Complex64::new(0.0, 0.0); shape.iter().product()];
    let (mut buf, mut y, mut scratch) = (vec![Complex64::new(0.0, 0.0); in_off.len()], Vec::new(), Vec::new());
    for mut r in 0..count {
        let (mut bi, mut bo) = (0, 0);
        for (j, &a) in others.iter().enumerate().rev() {
            let i = r % outer[j];
            r /= outer[j];
            bi += i * in_st[a];
            bo += i * out_st[a];
        }
        for (b, &o) in buf.iter_mut().zip(&in_off) {
            *b = x[bi + o];
        }
        stage.op.apply_into(&buf, &mut y, &mut scratch);
        for (v, &o) in y.iter().zip(&out_off) {
            out[bo + o] = *v;
        }
    }
    out
}

/// Cost of `stage` on a tensor of `shape`; `shape` is updated.
pub fn stage_cost(stage: &Stage, shape: &mut [usize]) -> Ops {
    let total: usize = shape.iter().product();
    let inner: usize = stage.axes.iter().map(|&a| shape[a]).product();
    for (&a, &d) in stage.axes.iter().zip(&stage.out_dims) {
        shape[a] = d;
    }
    stage.op.cost() * (total / inner.max(1)) as u64
}

/// Greedy pairing: axes in descending index order; each one is absorbed by
/// the first survivor whose index it divides. Rank-1 axes are left alone.
pub fn alg3_pairs(indices: &[u64]) -> Vec<(usize, usize)> {
    let mut order: Vec<usize> = (0..indices.len()).filter(|&i| totient(indices[i]) > 1).collect();
    order.sort_by(|&a, &b| indices[b].cmp(&indices[a]).then(a.cmp(&b)));
    let mut survivors: Vec<usize> = Vec::new();
    let mut pairs = Vec::new();
    for i in order {
        match survivors.iter().find(|&&t| indices[t] % indices[i] == 0) {
            Some(&t) => pairs.push((i, t)),
            None => survivors.push(i),
        }
    }
    pairs
}

/// Order of single-axis stages with the fewest total operations.
fn best_order(axes: &[usize], shape: &[usize], ops: &[LinearOp], out: &[usize]) -> Vec<usize> {
    let k = axes.len();
    let mut best: Option<(u64, u64, Vec<usize>)> = None;
    let mut perm: Vec<usize> = (0..k).collect();
    let mut c = vec![0usize; k];
    let mut eval = |perm: &[usize]| {
        let mut sh = shape.to_vec();
        let mut tot = Ops::ZERO;
        for &p in perm {
            let total: usize = sh.iter().product();
            tot += ops[p].cost() * (total / sh[axes[p]].max(1)) as u64;
            sh[axes[p]] = out[p];
        }
        let key = (tot.mults, tot.adds);
        if best.as_ref().map_or(true, |b| key < (b.0, b.1)) {
            best = Some((key.0, key.1, perm.to_vec()));
        }
    };
    eval(&perm);
    // Heap's algorithm
    let mut i = 0;
    while i < k {
        if c[i] < i {
            if i % 2 == 0 {
                perm.swap(0, i);
            } else {
                perm.swap(c[i], i);
            }
            eval(&perm);
            c[i] += 1;
            i = 0;
        } else {
            c[i] = 0;
            i += 1;
        }
    }
    best.map(|b| b.2).unwrap_or_default()
}

impl BlockEngine {
    /// Compile the product for cyclotomic `indices` and a fixed operand
    /// given as a row-major tensor of residue coefficients.
    pub fn new(indices: &[u64], fixed: &[Complex64], strategy: ProductStrategy) -> Result<BlockEngine> {
        let dims: Vec<usize> = indices.iter().map(|&n| totient(n) as usize).collect();
        if indices.iter().any(|&n| n == 0) {
            return Err(invalid!("cyclotomic index must be positive"));
        }
        let size: usize = dims.iter().product();
        if fixed.len() != size {
            return Err(invalid!("fixed operand has {} entries, block size is {size}", fixed.len()));
        }
        let (pairs, kind) = match strategy.kind {
            StrategyKind::Alg3PolyTransform => (alg3_pairs(indices), strategy.inner),
            k => (Vec::new(), k),
        };
        let absorbed: Vec<usize> = pairs.iter().map(|p| p.0).collect();
        let mut pre = Vec::new();
        let mut post = Vec::new();
        let mut h = fixed.to_vec();
        let mut hshape = dims.clone();
        for &(s, t) in &pairs {
            let pt = ReducedPt::new(indices[s], indices[t])?;
            let axes = vec![s, t];
            let od = vec![dims[s], dims[t]];
            let fwd = Stage { kind: StageKind::Transform, axes: axes.clone(), out_dims: od.clone(), op: pt.forward.clone() };
            h = apply_stage(&h, &mut hshape, &fwd);
            let fold = Stage { kind: StageKind::Transform, axes: axes.clone(), out_dims: od.clone(), op: pt.fold_op() };
            h = apply_stage(&h, &mut hshape, &fold);
            pre.push(fwd);
            post.push(Stage { kind: StageKind::Transform, axes, out_dims: od, op: pt.inverse.clone() });
        }
        post.reverse();

        let active: Vec<usize> = (0..indices.len()).filter(|a| !absorbed.contains(a)).collect();
        let mut algs = Vec::new();
        for &a in &active {
            let alg = axis_alg(indices[a], kind, strategy.fft_size)?;
            let b = LinearOp::from_dense(dims[a], &alg.b);
            h = apply_stage(&h, &mut hshape, &Stage { kind: StageKind::Pre, axes: vec![a], out_dims: vec![alg.mults()], op: b });
            algs.push(alg);
        }
        let weights: Vec<Complex64> = h.into_iter().map(snap).collect();

        // skip identity stages, order the rest
        let keep: Vec<usize> = (0..active.len()).filter(|&i| algs[i].mults() > 1 || algs[i].a.cost() != Ops::ZERO || algs[i].c.cost() != Ops::ZERO).collect();
        let axes: Vec<usize> = keep.iter().map(|&i| active[i]).collect();
        let mids: Vec<usize> = keep.iter().map(|&i| algs[i].mults()).collect();
        let a_ops: Vec<LinearOp> = keep.iter().map(|&i| algs[i].a.clone()).collect();
        let c_ops: Vec<LinearOp> = keep.iter().map(|&i| algs[i].c.clone()).collect();
        for p in best_order(&axes, &dims, &a_ops, &mids) {
            pre.push(Stage { kind: StageKind::Pre, axes: vec![axes[p]], out_dims: vec![mids[p]], op: a_ops[p].clone() });
        }
        let mut post_c = Vec::new();
        let phis: Vec<usize> = axes.iter().map(|&a| dims[a]).collect();
        for p in best_order(&axes, &hshape, &c_ops, &phis) {
            post_c.push(Stage { kind: StageKind::Post, axes: vec![axes[p]], out_dims: vec![phis[p]], op: c_ops[p].clone() });
        }
        post_c.extend(post);
        Ok(BlockEngine { indices: indices.to_vec(), dims, strategy, pairs, pre, weights, post: post_c })
    }

    pub fn indices(&self) -> &[u64] {
        &self.indices
    }
    pub fn dims(&self) -> &[usize] {
        &self.dims
    }
    pub fn size(&self) -> usize {
        self.dims.iter().product()
    }
    pub fn strategy(&self) -> ProductStrategy {
        self.strategy
    }
    pub fn pairs(&self) -> &[(usize, usize)] {
        &self.pairs
    }
    pub fn weights(&self) -> &[Complex64] {
        &self.weights
    }
    pub fn stages(&self) -> impl Iterator<Item = &Stage> {
        self.pre.iter().chain(&self.post)
    }

    /// Number of pointwise multipliers that are not free.
    pub fn nontrivial_multipliers(&self) -> usize {
        self.weights.iter().filter(|&&w| mult_cost(w) != Ops::ZERO).count()
    }

    pub fn cost(&self) -> BlockCost {
        let mut c = BlockCost::default();
        let mut shape = self.dims.clone();
        for s in &self.pre {
            let o = stage_cost(s, &mut shape);
            match s.kind {
                StageKind::Transform => c.transforms += o,
                _ => c.pre += o,
            }
        }
        for &w in &self.weights {
            c.pointwise += mult_cost(w);
        }
        for s in &self.post {
            let o = stage_cost(s, &mut shape);
            match s.kind {
                StageKind::Transform => c.transforms += o,
                _ => c.post += o,
            }
        }
        c
    }

    pub fn apply(&self, a: &[Complex64]) -> Vec<Complex64> {
        let mut shape = self.dims.clone();
        let mut x = a.to_vec();
        for s in &self.pre {
            x = apply_stage(&x, &mut shape, s);
        }
        for (v, w) in x.iter_mut().zip(&self.weights) {
            *v *= w;
        }
        for s in &self.post {
            x = apply_stage(&x, &mut shape, s);
        }
        x
    }
}

/// Schoolbook product modulo `P_{n_1}(Z_1) ... P_{n_r}(Z_r)` (reference path).
pub fn ring_mul_nd(indices: &[u64], a: &[Complex64], b: &[Complex64]) -> Vec<Complex64> {
    let dims: Vec<usize> = indices.iter().map(|&n| totient(n) as usize).collect();
    let reds: Vec<Vec<Vec<i64>>> = indices
        .iter()
        .zip(&dims)
        .map(|(&n, &d)| crate::poly::reduction_table(n, 2 * d - 1).expect("valid index"))
        .collect();
    let st = strides(&dims);
    let size: usize = dims.iter().product();
    let unflat = |mut r: usize| -> Vec<usize> {
        let mut v = vec![0; dims.len()];
        for j in (0..dims.len()).rev() {
            v[j] = r % dims[j];
            r /= dims[j];
        }
        v
    };
    let mut out = vec![Complex64::new(0.0, 0.0); size];
    for i in 0..size {
        if a[i] == Complex64::new(0.0, 0.0) {
            continue;
        }
        let ui = unflat(i);
        for j in 0..size {
            let p = a[i] * b[j];
            let uj = unflat(j);
            // expand the reduced monomial product axis by axis
            let mut terms: Vec<(usize, i64)> = vec![(0, 1)];
            for ax in 0..dims.len() {
                let sa = st[ax];
                let row = &reds[ax][ui[ax] + uj[ax]];
                terms = terms
                    .iter()
                    .flat_map(|&(o, c)| row.iter().enumerate().filter(|(_, &r)| r != 0).map(move |(t, &r)| (o + t * sa, c * r)))
                    .collect();
            }
            for (o, c) in terms {
                out[o] += p * c as f64;
            }
        }
    }
    out
}

fn check_len(n: u64, v: &[Complex64]) -> Result<()> {
    let phi = totient(n) as usize;
    if v.len() != phi {
        return Err(invalid!("operand has {} coefficients, P_{n} has rank {phi}", v.len()));
    }
    Ok(())
}

/// Product mod `P_n` through the fixed bilinear table.
pub fn product_bilinear(n: u64, a: &[Complex64], b: &[Complex64]) -> Result<Vec<Complex64>> {
    check_len(n, a)?;
    check_len(n, b)?;
    let alg = table_alg(n)?;
    Ok(alg.apply(a, &alg.weights(b)))
}

/// Product mod `P_n` by reduced-DFT diagonalization.
pub fn product_alg1f(n: u64, a: &[Complex64], b: &[Complex64]) -> Result<Vec<Complex64>> {
    check_len(n, a)?;
    check_len(n, b)?;
    let alg = alg1f(n)?;
    Ok(alg.apply(a, &alg.weights(b)))
}

/// Product mod `P_n` through a wraparound utility FFT of size `fft_size`.
pub fn product_alg2(n: u64, a: &[Complex64], b: &[Complex64], fft_size: usize) -> Result<Vec<Complex64>> {
    check_len(n, a)?;
    check_len(n, b)?;
    let alg = alg2(n, fft_size)?;
    Ok(alg.apply(a, &alg.weights(b)))
}

/// Two-dimensional product mod `P_{n1}(Z1) P_{n2}(Z2)` with `n1 | n2`, through a
/// polynomial transform along the first dimension. Operands are row-major
/// `phi(n1) x phi(n2)`.
pub fn product_alg3(n1: u64, n2: u64, a: &[Complex64], b: &[Complex64], inner: StrategyKind) -> Result<Vec<Complex64>> {
    if n1 == 0 || n2 == 0 || n2 % n1 != 0 {
        return Err(invalid!("polynomial transform product needs n1 | n2, got ({n1}, {n2})"));
    }
    if inner == StrategyKind::Alg3PolyTransform {
        return Err(invalid!("inner engine must be one-dimensional"));
    }
    let size = (totient(n1) * totient(n2)) as usize;
    if a.len() != size {
        return Err(invalid!("operand has {} entries, expected {size}", a.len()));
    }
    let e = BlockEngine::new(&[n1, n2], b, ProductStrategy::alg3(inner))?;
    Ok(e.apply(a))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn vals(seed: u64, n: usize) -> Vec<Complex64> {
        let mut s = seed.wrapping_mul(0x9e3779b97f4a7c15) | 1;
        (0..n)
            .map(|_| {
                s ^= s << 13;
                s ^= s >> 7;
                s ^= s << 17;
                let re = ((s % 2001) as f64 - 1000.0) / 250.0;
                let im = (((s >> 20) % 2001) as f64 - 1000.0) / 250.0;
                Complex64::new(re, im)
            })
            .collect()
    }

    fn err(x: &[Complex64], y: &[Complex64]) -> f64 {
        let n: f64 = y.iter().map(|v| v.norm_sqr()).sum::<f64>().sqrt().max(1e-300);
        x.iter().zip(y).map(|(a, b)| (a - b).norm_sqr()).sum::<f64>().sqrt() / n
    }

    #[test]
    fn one_dimensional_engines_agree() {
        for n in [1u64, 2, 3, 4, 5, 6, 7, 8, 9, 12, 13, 16, 18] {
            let phi = totient(n) as usize;
            for t in 0..10 {
                let (a, b) = (vals(t, phi), vals(t + 100, phi));
                let r = ring_mul_nd(&[n], &a, &b);
                assert!(err(&product_bilinear(n, &a, &b).unwrap(), &r) < 1e-10, "n={n}");
                assert!(err(&product_alg1f(n, &a, &b).unwrap(), &r) < 1e-10);
                let f = alg2_default_size(n);
                assert!(err(&product_alg2(n, &a, &b, f).unwrap(), &r) < 1e-10);
            }
        }
        let one = [Complex64::new(1.0, 0.0), Complex64::new(0.0, 0.0)];
        let a = vals(3, 2);
        assert!(err(&product_alg1f(4, &a, &one).unwrap(), &a) < 1e-14);
        assert!(product_alg2(9, &vals(1, 6), &vals(2, 6), 10).is_err());
        assert!(product_alg2(9, &vals(1, 6), &vals(2, 6), 12).is_ok());
    }

    #[test]
    fn alg3_matches_brute_force() {
        for (n1, n2) in [(2u64, 2u64), (3, 9), (4, 8), (4, 4), (3, 3), (8, 16), (3, 12), (4, 12), (6, 12), (2, 6)] {
            let size = (totient(n1) * totient(n2)) as usize;
            for t in 0..5 {
                let (a, b) = (vals(t, size), vals(t + 7, size));
                let r = ring_mul_nd(&[n1, n2], &a, &b);
                for inner in [StrategyKind::BilinearTable, StrategyKind::Alg1fReducedDft, StrategyKind::Alg2Wraparound] {
                    let y = product_alg3(n1, n2, &a, &b, inner).unwrap();
                    assert!(err(&y, &r) < 1e-10, "({n1},{n2}) {inner:?}");
                }
            }
        }
        assert!(product_alg3(3, 8, &[], &[], StrategyKind::BilinearTable).is_err());
    }

    #[test]
    fn kronecker_and_multiway() {
        for idx in [vec![4u64, 3], vec![8, 9, 7], vec![4, 4, 8], vec![2, 6, 4, 12], vec![16, 3, 4]] {
            let size: usize = idx.iter().map(|&n| totient(n) as usize).product();
            let (a, b) = (vals(5, size), vals(6, size));
            let r = ring_mul_nd(&idx, &a, &b);
            for s in [ProductStrategy::bilinear(), ProductStrategy::alg1f(), ProductStrategy::alg2(None), ProductStrategy::alg3(StrategyKind::BilinearTable)] {
                let e = BlockEngine::new(&idx, &b, s).unwrap();
                assert!(err(&e.apply(&a), &r) < 1e-10, "{idx:?} {s:?}");
            }
        }
    }

    #[test]
    fn alg3_counts() {
        // real fixed operand keeps every weight pure
        let real = |n: usize| -> Vec<Complex64> { vals(9, n).iter().map(|c| Complex64::new(c.re + 0.01, 0.0)).collect() };
        let e = BlockEngine::new(&[4, 4], &real(4), ProductStrategy::alg3(StrategyKind::BilinearTable)).unwrap();
        assert_eq!(e.weights().len(), 6);
        assert_eq!(e.cost().transforms.mults, 0);
        assert_eq!(e.cost().pre.adds + e.cost().post.adds + e.cost().transforms.adds, 28);
        let e = BlockEngine::new(&[4, 8], &real(8), ProductStrategy::alg3(StrategyKind::BilinearTable)).unwrap();
        assert_eq!(e.weights().len(), 2 * table_alg(8).unwrap().mults());
        assert_eq!(e.cost().transforms.mults, 0);
        let k = BlockEngine::new(&[4, 8], &real(8), ProductStrategy::bilinear()).unwrap();
        assert_eq!(k.weights().len(), 27);
        assert_eq!(alg3_pairs(&[4, 9, 5, 8, 3, 13]), vec![(0, 3), (4, 1)]);
    }

    #[test]
    fn circular_shift_identity() {
        let n = 5usize;
        let x = vals(42, n * n);
        let dft2 = |x: &[Complex64]| -> Vec<Complex64> {
            let mut out = vec![Complex64::new(0.0, 0.0); n * n];
            for k1 in 0..n {
                for k2 in 0..n {
                    for a in 0..n {
                        for b in 0..n {
                            out[k1 * n + k2] += x[a * n + b] * crate::engine::twiddle(n as u64, ((a * k1 + b * k2) % n) as u64);
                        }
                    }
                }
            }
            out
        };
        let xf = dft2(&x);
        for k1 in 0..n {
            // y(n2) = sum_{n1} x(n1, n2 - k1 n1)
            for k2 in 0..n {
                let mut acc = Complex64::new(0.0, 0.0);
                for n2 in 0..n {
                    let mut y = Complex64::new(0.0, 0.0);
                    for n1 in 0..n {
                        y += x[n1 * n + (n2 + n * n - k1 * n1) % n];
                    }
                    acc += y * crate::engine::twiddle(n as u64, ((k2 * n2) % n) as u64);
                }
                let want = xf[((k2 * k1) % n) * n + k2];
                assert!((acc - want).norm() < 1e-11 * want.norm().max(1.0));
            }
        }
    }
}
