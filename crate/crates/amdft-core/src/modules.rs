//! Small DFT modules with the structure `T = E * H * D`.
//!
//! `D` and `E` are integer butterfly networks. `H` is block diagonal, each
//! block a ring multiplication modulo one cyclotomic polynomial. The builders
//! below only produce `D`, `E` and the block layout; the fixed operands are
//! recovered by solving `H = E^-1 T D^-1` numerically and checking that every
//! block really is a ring multiplication. That keeps the CRT scale factors
//! out of hand-written code.

use alloc::collections::BTreeMap;
use alloc::vec;
use alloc::vec::Vec;

use num_complex::Complex64;
use num_traits::Zero;

use crate::engine::twiddle;
use crate::error::{capability, consistency, invalid, Result};
use crate::linop::{classify, mat_inv, mat_mul, snap, ConstKind, LinearOp};
use crate::ntheory::{divisors, factorize, inv_mod, is_prime, pow_mod, primitive_root, totient};
use crate::poly::{cyclotomic_i64, reduction_table, Poly};

/// Sizes with a module; sorted.
pub const SUPPORTED: [u64; 12] = [2, 3, 4, 5, 7, 8, 9, 13, 16, 17, 32, 64];

pub fn list_supported() -> Vec<u64> {
    SUPPORTED.to_vec()
}

pub fn is_supported(q: u64) -> bool {
    SUPPORTED.contains(&q)
}

/// One multiplicative block of a module.
#[derive(Debug, Clone, PartialEq)]
pub struct ModuleBlock {
    /// Cyclotomic index `n` of the ring `Q[Z]/P_n`.
    pub index: u64,
    pub offset: usize,
    pub size: usize,
    /// Fixed operand, `size` coefficients.
    pub kernel: Vec<Complex64>,
    /// Size one with a constant in {1, -1, j, -j}.
    pub trivial: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct DftModule {
    q: u64,
    pre: LinearOp,
    post: LinearOp,
    blocks: Vec<ModuleBlock>,
}

impl DftModule {
    pub fn size(&self) -> u64 {
        self.q
    }
    pub fn pre(&self) -> &LinearOp {
        &self.pre
    }
    pub fn post(&self) -> &LinearOp {
        &self.post
    }
    pub fn blocks(&self) -> &[ModuleBlock] {
        &self.blocks
    }
    pub fn trivial_blocks(&self) -> usize {
        self.blocks.iter().filter(|b| b.trivial).count()
    }

    /// `E * H * D * x`.
    pub fn apply(&self, x: &[Complex64]) -> Vec<Complex64> {
        let mut t = self.pre.apply(x);
        for b in &self.blocks {
            let seg = &t[b.offset..b.offset + b.size];
            let y = ring_mul(b.index, seg, &b.kernel);
            t[b.offset..b.offset + b.size].copy_from_slice(&y);
        }
        self.post.apply(&t)
    }
}

/// Product modulo `P_n` by the schoolbook rule (reference path).
pub fn ring_mul(n: u64, a: &[Complex64], b: &[Complex64]) -> Vec<Complex64> {
    let phi = a.len();
    if phi == 1 {
        return vec![a[0] * b[0]];
    }
    let red = reduction_table(n, 2 * phi - 1).expect("valid index");
    let mut out = vec![Complex64::zero(); phi];
    for (i, &ai) in a.iter().enumerate() {
        for (j, &bj) in b.iter().enumerate() {
            let p = ai * bj;
            for (k, &c) in red[i + j].iter().enumerate() {
                if c != 0 {
                    out[k] += p * c as f64;
                }
            }
        }
    }
    out
}

/// Matrix of multiplication by `h` modulo `P_n`.
pub fn ring_mul_matrix(n: u64, h: &[Complex64]) -> Vec<Vec<Complex64>> {
    let phi = h.len();
    let red = reduction_table(n, 2 * phi).expect("valid index");
    let mut m = vec![vec![Complex64::zero(); phi]; phi];
    for j in 0..phi {
        for (t, &ht) in h.iter().enumerate() {
            for (i, &c) in red[t + j].iter().enumerate() {
                if c != 0 {
                    m[i][j] += ht * c as f64;
                }
            }
        }
    }
    m
}

type IPoly = Poly<i64>;

fn cyc(d: u64) -> IPoly {
    IPoly::new(cyclotomic_i64(d).expect("positive index"))
}

fn prod_cyc(set: &[u64]) -> IPoly {
    set.iter().fold(IPoly::from_i64s(&[1]), |acc, &d| &acc * &cyc(d))
}

fn valuation(mut n: u64, p: u64) -> u32 {
    let mut v = 0;
    while n % p == 0 {
        n /= p;
        v += 1;
    }
    v
}

/// Reduction and reconstruction networks for `prod_{d in set} P_d`.
pub struct CrtTree {
    pub reduce: LinearOp,
    pub recon: LinearOp,
    /// Leaf indices in network order.
    pub leaves: Vec<u64>,
}

impl CrtTree {
    /// Coefficient offset of each leaf in the reduced vector.
    pub fn leaf_offsets(&self) -> Vec<usize> {
        let mut off = 0;
        self.leaves
            .iter()
            .map(|&d| {
                let o = off;
                off += totient(d) as usize;
                o
            })
            .collect()
    }
}

/// Split on the smallest prime whose valuation varies; the top valuation
/// goes right. For `Z^M - 1` the first cut is `(Z^{M/2} - 1)(Z^{M/2} + 1)`.
fn split_set(s: &[u64]) -> (Vec<u64>, Vec<u64>) {
    let mut primes: Vec<u64> = s.iter().flat_map(|&d| factorize(d).expect("d > 0").into_iter().map(|f| f.0)).collect();
    primes.sort_unstable();
    primes.dedup();
    for p in primes {
        let vals: Vec<u32> = s.iter().map(|&d| valuation(d, p)).collect();
        let (lo, hi) = (*vals.iter().min().unwrap(), *vals.iter().max().unwrap());
        if lo != hi {
            let s2: Vec<u64> = s.iter().zip(&vals).filter(|e| *e.1 == hi).map(|e| *e.0).collect();
            let s1: Vec<u64> = s.iter().zip(&vals).filter(|e| *e.1 != hi).map(|e| *e.0).collect();
            return (s1, s2);
        }
    }
    unreachable!("distinct divisors always differ in some valuation")
}

pub fn crt_tree(set: &[u64]) -> CrtTree {
    if set.len() == 1 {
        let deg = totient(set[0]) as usize;
        return CrtTree { reduce: LinearOp::identity(deg), recon: LinearOp::identity(deg), leaves: set.to_vec() };
    }
    let (s1, s2) = split_set(set);
    let (f1, f2) = (prod_cyc(&s1), prod_cyc(&s2));
    let d1 = f1.degree().unwrap();
    let d2 = f2.degree().unwrap();
    let deg = d1 + d2;
    let mut red = vec![vec![0i64; deg]; deg];
    for j in 0..deg {
        let z = IPoly::monomial(j, 1);
        let r1 = z.rem_monic(&f1).unwrap();
        let r2 = z.rem_monic(&f2).unwrap();
        for i in 0..d1 {
            red[i][j] = r1.coeff(i);
        }
        for i in 0..d2 {
            red[d1 + i][j] = r2.coeff(i);
        }
    }
    let mut rec = vec![vec![0i64; deg]; deg];
    for i in 0..d1 {
        let c = &f2 * &IPoly::monomial(i, 1);
        for (r, row) in rec.iter_mut().enumerate() {
            row[i] = c.coeff(r);
        }
    }
    for i in 0..d2 {
        let c = &f1 * &IPoly::monomial(i, 1);
        for (r, row) in rec.iter_mut().enumerate() {
            row[d1 + i] = c.coeff(r);
        }
    }
    let c1 = crt_tree(&s1);
    let c2 = crt_tree(&s2);
    let reduce = LinearOp::from_int_matrix(deg, &red).then(LinearOp::block_diag(&[c1.reduce, c2.reduce])).unwrap();
    let recon = LinearOp::block_diag(&[c1.recon, c2.recon]).then(LinearOp::from_int_matrix(deg, &rec)).unwrap();
    let mut leaves = c1.leaves;
    leaves.extend(c2.leaves);
    CrtTree { reduce, recon, leaves }
}

/// Additive stages and block layout before the operands are solved for.
struct Skeleton {
    pre: LinearOp,
    post: LinearOp,
    indices: Vec<u64>,
}

fn one() -> Complex64 {
    Complex64::new(1.0, 0.0)
}

fn int(k: i64) -> Complex64 {
    Complex64::new(k as f64, 0.0)
}

fn pass_rows(range: core::ops::Range<usize>) -> Vec<Vec<(usize, Complex64)>> {
    range.map(|i| vec![(i, one())]).collect()
}

/// Odd prime: Rader convolution on `x(g^-n)` split by the CRT tree of
/// `Z^{q-1} - 1`; `X(0) = x(0) + t` reuses the `P_1` residue `t`.
fn prime_skeleton(q: u64) -> Result<Skeleton> {
    let m = (q - 1) as usize;
    let g = primitive_root(q)?;
    let ginv = inv_mod(g, q).expect("unit");
    let mut src = vec![0usize];
    src.extend((0..m as u64).map(|n| pow_mod(ginv, n, q) as usize));
    let tree = crt_tree(&divisors(q - 1));
    let offs = tree.leaf_offsets();
    let p1 = 1 + offs[tree.leaves.iter().position(|&d| d == 1).unwrap()];
    let mut fin = vec![vec![(0, one()), (p1, one())]];
    fin.extend(pass_rows(1..q as usize));
    let pre = LinearOp::gather(q as usize, &src)
        .then(LinearOp::block_diag(&[LinearOp::identity(1), tree.reduce]))?
        .then(LinearOp::from_rows(q as usize, fin))?;
    let mut first = vec![vec![(0, one())]];
    for i in 1..q as usize {
        if i == p1 {
            first.push(vec![(0, one()), (i, one())]);
        } else {
            first.push(vec![(i, one())]);
        }
    }
    let mut dlog = vec![0usize; q as usize];
    for k in 0..m as u64 {
        dlog[pow_mod(g, k, q) as usize] = k as usize;
    }
    let out: Vec<usize> = (0..q as usize).map(|b| if b == 0 { 0 } else { 1 + dlog[b] }).collect();
    let post = LinearOp::from_rows(q as usize, first)
        .then(LinearOp::block_diag(&[LinearOp::identity(1), tree.recon]))?
        .then(LinearOp::gather(q as usize, &out))?;
    let mut indices = vec![1];
    indices.extend(tree.leaves);
    Ok(Skeleton { pre, post, indices })
}

/// 2^r points: split into even/odd halves; the odd half is organized by the
/// 2-adic level of the sample index, each level a product in
/// `Z1^2 - 1` (split at once) times `Z2^{2^{s-3}} + 1`.
fn pow2_skeleton(r: u32) -> Result<Skeleton> {
    if r == 1 {
        let bf = LinearOp::from_int_matrix(2, &[vec![1, 1], vec![1, -1]]);
        return Ok(Skeleton { pre: bf, post: LinearOp::identity(2), indices: vec![1, 2] });
    }
    let n = 1usize << r;
    let h = n / 2;
    let mut split = Vec::with_capacity(n);
    for i in 0..h {
        split.push(vec![(i, one()), (i + h, one())]);
    }
    for i in 0..h {
        split.push(vec![(i, one()), (i + h, int(-1))]);
    }
    let even = pow2_skeleton(r - 1)?;
    let odd = pow2_odd(r)?;
    let pre = LinearOp::from_rows(n, split).then(LinearOp::block_diag(&[even.pre, odd.pre]))?;
    let inter: Vec<usize> = (0..n).map(|k| if k % 2 == 0 { k / 2 } else { h + k / 2 }).collect();
    let post = LinearOp::block_diag(&[even.post, odd.post]).then(LinearOp::gather(n, &inter))?;
    let mut indices = even.indices;
    indices.extend(odd.indices);
    Ok(Skeleton { pre, post, indices })
}

#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Debug)]
enum Slot {
    T(usize),
    M2,
    /// level s, branch b, position l
    Hat(u32, usize, usize),
}

fn pow2_odd(r: u32) -> Result<Skeleton> {
    let h = 1usize << (r - 1);
    let mut pre_rows = vec![vec![(0usize, one())], vec![(h / 2, one())]];
    let mut indices = vec![1u64, 1];
    for s in 3..=r {
        let modulus = 1u64 << s;
        let half = modulus / 2;
        let mm = 1usize << (s - 3);
        let scale = 1usize << (r - s);
        let five_inv = inv_mod(5, modulus).expect("odd");
        // antiperiodic extension of y over odd residues mod 2^s
        let ytilde = |u: u64| -> (usize, f64) {
            let u = u % modulus;
            let sign = if u >= half { -1.0 } else { 1.0 };
            (scale * (u % half) as usize, sign)
        };
        for branch in [1.0, -1.0] {
            for i in 0..mm {
                let u0 = pow_mod(five_inv, i as u64, modulus);
                let u1 = modulus - u0;
                let (a, sa) = ytilde(u0);
                let (b, sb) = ytilde(u1);
                pre_rows.push(vec![(a, int(sa as i64)), (b, int((sb * branch) as i64))]);
            }
            indices.push(1u64 << (s - 2));
        }
    }
    let pre = LinearOp::from_rows(h, pre_rows);

    // post: butterflies per level, then the accumulation tree over levels
    let mut layout: Vec<Slot> = vec![Slot::T(0), Slot::M2];
    let mut rows: Vec<Vec<(usize, Complex64)>> = vec![vec![(0, one())], vec![(1, one())]];
    let mut base = 2usize;
    for s in 3..=r {
        let mm = 1usize << (s - 3);
        for b in 0..2 {
            for l in 0..mm {
                let sign = if b == 0 { 1 } else { -1 };
                rows.push(vec![(base + l, one()), (base + mm + l, int(sign))]);
                layout.push(Slot::Hat(s, b, l));
            }
        }
        base += 2 * mm;
    }
    let mut post = LinearOp::from_rows(h, rows);
    for s in 2..=r {
        let pos: BTreeMap<Slot, usize> = layout.iter().enumerate().map(|(i, &sl)| (sl, i)).collect();
        let modulus = 1u64 << s;
        let count = 1usize << (s - 1);
        let mut new_layout = Vec::new();
        let mut rows = Vec::new();
        // decomposition k = (-1)^b 5^lf mod 2^s
        let mut dec = BTreeMap::new();
        if s >= 3 {
            for b in 0..2u64 {
                for lf in 0..(1u64 << (s - 2)) {
                    let v = pow_mod(5, lf, modulus);
                    let k = if b == 0 { v } else { modulus - v };
                    dec.insert(k, (b as usize, lf as usize));
                }
            }
        }
        for j in 0..count {
            let k = 2 * j as u64 + 1;
            let parent = pos[&Slot::T(((k % (modulus / 2)) as usize - 1) / 2)];
            let leaf = if s == 2 {
                (pos[&Slot::M2], if k == 1 { 1 } else { -1 })
            } else {
                let mm = 1usize << (s - 3);
                let (b, lf) = dec[&k];
                let (l, c) = (lf % mm, lf / mm);
                (pos[&Slot::Hat(s, b, l)], if c == 0 { 1 } else { -1 })
            };
            rows.push(vec![(parent, one()), (leaf.0, int(leaf.1))]);
            new_layout.push(Slot::T(j));
        }
        for (i, sl) in layout.iter().enumerate() {
            if let Slot::Hat(ls, _, _) = sl {
                if *ls > s {
                    rows.push(vec![(i, one())]);
                    new_layout.push(*sl);
                }
            }
        }
        post = post.then(LinearOp::from_rows(layout.len(), rows))?;
        layout = new_layout;
    }
    Ok(Skeleton { pre, post, indices })
}

/// Odd `p^2`: coset sums feed the p-point module, the `x(p t)` samples give
/// the unit bins a period-(p-1) part placed in the `d | p-1` slots, and the
/// unit samples give a convolution of length p(p-1) of which only the
/// `p | d` residues are needed.
fn prime_square_skeleton(p: u64) -> Result<Skeleton> {
    let q = p * p;
    let qs = q as usize;
    let ps = p as usize;
    let m = (p * (p - 1)) as usize;
    let g = primitive_root(q)?;
    let ginv = inv_mod(g, q).expect("unit");
    let inner = prime_skeleton(p)?;

    // layer 0 rows over x
    let mut rows: Vec<Vec<(usize, Complex64)>> = Vec::new();
    for j in 0..ps {
        rows.push((0..ps).map(|t| (j + ps * t, one())).collect());
    }
    rows.push(vec![(0, one())]);
    for n in 0..(p - 1) {
        let r = pow_mod(ginv % p, n, p) as usize;
        rows.push(vec![(ps * r, one())]);
    }
    for n in 0..m as u64 {
        rows.push(vec![(pow_mod(ginv, n, q) as usize, one())]);
    }
    let layer0 = LinearOp::from_rows(qs, rows);

    let lower = crt_tree(&divisors(p - 1));
    let loffs = lower.leaf_offsets();
    let mut lfin = Vec::new();
    for (i, &d) in lower.leaves.iter().enumerate() {
        for c in 0..totient(d) as usize {
            let pos = 1 + loffs[i] + c;
            if d == 1 {
                lfin.push(vec![(0, int(p as i64 - 1)), (pos, int(-1))]);
            } else {
                lfin.push(vec![(pos, one())]);
            }
        }
    }
    let lower_op = LinearOp::block_diag(&[LinearOp::identity(1), lower.reduce])
        .then(LinearOp::from_rows(ps, lfin))?;

    let level0 = crt_tree(&divisors(m as u64));
    let offs0 = level0.leaf_offsets();
    let mut keep = Vec::new();
    let mut kept_idx = Vec::new();
    for (i, &d) in level0.leaves.iter().enumerate() {
        if d % p == 0 {
            keep.extend(offs0[i]..offs0[i] + totient(d) as usize);
            kept_idx.push(d);
        }
    }
    let l0op = level0.reduce.clone().then(LinearOp::gather(m, &keep))?.prune();
    let pre = layer0.then(LinearOp::block_diag(&[inner.pre, lower_op, l0op]))?;

    // post
    let lower_len = (p - 1) as usize;
    let kept_len = keep.len();
    let mut assemble = Vec::new();
    let mut kept_pos = 0usize;
    for &d in level0.leaves.iter() {
        let phi = totient(d) as usize;
        if d % p == 0 {
            for c in 0..phi {
                assemble.push(lower_len + kept_pos + c);
            }
            kept_pos += phi;
        } else {
            let li = lower.leaves.iter().position(|&e| e == d).expect("d | p-1");
            for c in 0..phi {
                assemble.push(loffs[li] + c);
            }
        }
    }
    let unit = LinearOp::gather(lower_len + kept_len, &assemble).then(level0.recon)?;
    let mut dlog = vec![usize::MAX; qs];
    for k in 0..m as u64 {
        dlog[pow_mod(g, k, q) as usize] = k as usize;
    }
    let out: Vec<usize> = (0..qs).map(|b| if b % ps == 0 { b / ps } else { ps + dlog[b] }).collect();
    let post = LinearOp::block_diag(&[inner.post, unit]).then(LinearOp::gather(qs, &out))?;

    let mut indices = inner.indices;
    indices.extend(lower.leaves.iter().copied());
    indices.extend(kept_idx);
    Ok(Skeleton { pre, post, indices })
}

fn skeleton(q: u64) -> Result<Skeleton> {
    let f = factorize(q)?;
    match f.as_slice() {
        [(2, r)] => pow2_skeleton(*r),
        [(p, 1)] if is_prime(*p) => prime_skeleton(*p),
        [(p, 2)] => prime_square_skeleton(*p),
        _ => Err(capability!("no module construction for {q}")),
    }
}

fn dft_matrix(q: u64) -> Vec<Vec<Complex64>> {
    (0..q).map(|k| (0..q).map(|n| twiddle(q, n * k % q)).collect()).collect()
}

const STRUCT_TOL: f64 = 1e-9;

/// Build the module for a supported prime power.
pub fn build_module(q: u64) -> Result<DftModule> {
    if !is_supported(q) {
        return Err(capability!("no DFT module of size {q}; supported sizes: {:?}", SUPPORTED));
    }
    let sk = skeleton(q)?;
    let pre = sk.pre.prune();
    let post = sk.post.prune();
    if pre.in_len() != q as usize || pre.out_len() != q as usize || post.out_len() != q as usize {
        return Err(consistency!("module {q}: stage shapes are wrong"));
    }
    let dinv = mat_inv(&pre.to_dense())?;
    let einv = mat_inv(&post.to_dense())?;
    let hm = mat_mul(&mat_mul(&einv, &dft_matrix(q)), &dinv);
    let mut blocks = Vec::new();
    let mut owner = vec![usize::MAX; q as usize];
    let mut off = 0usize;
    for (bi, &idx) in sk.indices.iter().enumerate() {
        let size = totient(idx) as usize;
        for o in owner.iter_mut().skip(off).take(size) {
            *o = bi;
        }
        let kernel: Vec<Complex64> = (0..size).map(|i| snap(hm[off + i][off])).collect();
        let expect = ring_mul_matrix(idx, &kernel);
        for i in 0..size {
            for j in 0..size {
                if (expect[i][j] - hm[off + i][off + j]).norm() > STRUCT_TOL {
                    return Err(consistency!("module {q}: block {bi} (P_{idx}) is not a ring multiplication"));
                }
            }
        }
        let trivial = size == 1 && classify(kernel[0]) == ConstKind::Trivial;
        blocks.push(ModuleBlock { index: idx, offset: off, size, kernel, trivial });
        off += size;
    }
    if off != q as usize {
        return Err(consistency!("module {q}: block sizes sum to {off}"));
    }
    for i in 0..q as usize {
        for j in 0..q as usize {
            if owner[i] != owner[j] && hm[i][j].norm() > STRUCT_TOL {
                return Err(consistency!("module {q}: coupling between blocks at ({i}, {j})"));
            }
        }
    }
    Ok(DftModule { q, pre, post, blocks })
}

/// Residue of the Rader kernel `sum_j W_q^{g^j} Z^j` modulo the block's
/// cyclotomic for an odd prime `q`; the DC block gives 1. For prime-power
/// modules the block operand itself is returned.
pub fn module_kernel_residue(module: &DftModule, block: usize) -> Result<Vec<Complex64>> {
    let b = module.blocks.get(block).ok_or_else(|| invalid!("block {block} out of range"))?;
    let q = module.q;
    if !(q > 2 && is_prime(q)) {
        return Ok(b.kernel.clone());
    }
    if block == 0 {
        return Ok(vec![one()]);
    }
    let g = primitive_root(q)?;
    let kern: Vec<Complex64> = (0..q - 1).map(|j| twiddle(q, pow_mod(g, j, q))).collect();
    let red = reduction_table(b.index, kern.len())?;
    let mut out = vec![Complex64::zero(); b.size];
    for (j, &k) in kern.iter().enumerate() {
        for (i, &c) in red[j].iter().enumerate() {
            out[i] += k * c as f64;
        }
    }
    Ok(out.into_iter().map(snap).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::engine::naive_dft;

    fn rel_err(a: &[Complex64], b: &[Complex64]) -> f64 {
        let e: f64 = a.iter().zip(b).map(|(x, y)| (x - y).norm_sqr()).sum();
        let n: f64 = b.iter().map(|y| y.norm_sqr()).sum();
        (e / n).sqrt()
    }

    #[test]
    fn all_supported_build_and_match() {
        for q in list_supported() {
            let m = build_module(q).unwrap_or_else(|e| panic!("{q}: {e}"));
            let sizes: usize = m.blocks().iter().map(|b| b.size).sum();
            assert_eq!(sizes, q as usize);
            for t in 0..20 {
                let x: Vec<Complex64> =
                    (0..q).map(|i| Complex64::new(((i * 7 + t) as f64).sin(), ((i * 3 + 2 * t) as f64).cos())).collect();
                assert!(rel_err(&m.apply(&x), &naive_dft(&x)) < 1e-12, "q = {q}");
            }
            assert!(m.pre().is_integral() && m.post().is_integral());
        }
    }

    #[test]
    fn inventories() {
        let idx = |q| build_module(q).unwrap().blocks().iter().map(|b| b.index).collect::<Vec<_>>();
        let sizes = |q| build_module(q).unwrap().blocks().iter().map(|b| b.size).collect::<Vec<_>>();
        assert_eq!(sizes(3), [1, 1, 1]);
        let mut s5 = sizes(5);
        s5.sort();
        assert_eq!(s5, [1, 1, 1, 2]);
        assert!(idx(17).contains(&16));
        assert_eq!(build_module(16).unwrap().trivial_blocks(), 8);
        assert_eq!(build_module(8).unwrap().trivial_blocks(), 6);
        for q in [3, 5, 7, 9, 13] {
            assert_eq!(build_module(q).unwrap().trivial_blocks(), 1, "q = {q}");
        }
        let mut i16 = idx(16);
        i16.sort();
        assert_eq!(i16, [1, 1, 1, 1, 1, 1, 1, 2, 2, 2, 2, 2, 4, 4]);
    }

    #[test]
    fn additive_costs() {
        let adds = |q| {
            let m = build_module(q).unwrap();
            (m.pre().cost() + m.post().cost()).adds / 2
        };
        assert_eq!(adds(3), 6);
        assert_eq!(adds(4), 8);
        // the P4 block adds 3 more inside the bilinear product
        assert_eq!(adds(5), 14);
        assert_eq!(adds(9), 40);
        assert_eq!(adds(8), 26);
        // plus 3 + 3 inside the two P4 blocks
        assert_eq!(adds(16), 68);
        for q in list_supported() {
            let m = build_module(q).unwrap();
            assert_eq!((m.pre().cost() + m.post().cost()).mults, 0, "q = {q}");
        }
    }

    #[test]
    fn kernel_residues() {
        let m3 = build_module(3).unwrap();
        let p1 = m3.blocks().iter().position(|b| b.index == 1 && !b.trivial).unwrap();
        let p2 = m3.blocks().iter().position(|b| b.index == 2).unwrap();
        assert!((module_kernel_residue(&m3, p1).unwrap()[0] - int(-1)).norm() < 1e-12);
        let r = module_kernel_residue(&m3, p2).unwrap()[0];
        assert!((r - Complex64::new(0.0, -(3f64).sqrt())).norm() < 1e-12);
        assert_eq!(module_kernel_residue(&build_module(5).unwrap(), 0).unwrap(), [one()]);
    }

    #[test]
    fn unsupported_size() {
        assert!(matches!(build_module(11), Err(crate::Error::Capability(_))));
        assert!(!list_supported().contains(&6));
    }
}
