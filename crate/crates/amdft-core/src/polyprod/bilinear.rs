//! One-dimensional bilinear algorithms for products modulo `P_n`:
//! the fixed table, the reduced-DFT form and the FFT wraparound form.

use alloc::vec;
use alloc::vec::Vec;

use num_complex::Complex64;
use num_traits::Zero;

use crate::engine::twiddle;
use crate::error::{capability, invalid, Result};
use crate::linop::{mat_inv, mult_cost, LinearOp, Ops};
use crate::ntheory::{factorize, gcd, totient};
use crate::poly::reduction_table;

/// `y = C (A a .* B b)` computing `a * b mod P_n` for a fixed `b`.
#[derive(Debug, Clone, PartialEq)]
pub struct BilinearAlg {
    pub n: u64,
    pub phi: usize,
    /// data side, `phi -> m`
    pub a: LinearOp,
    /// fixed side, dense `m x phi`
    pub b: Vec<Vec<Complex64>>,
    /// output side, `m -> phi`
    pub c: LinearOp,
}

fn one() -> Complex64 {
    Complex64::new(1.0, 0.0)
}

fn int(k: i64) -> Complex64 {
    Complex64::new(k as f64, 0.0)
}

fn dense_mul(a: &[Vec<Complex64>], b: &[Vec<Complex64>]) -> Vec<Vec<Complex64>> {
    crate::linop::mat_mul(a, b)
}

fn dense_from_int(m: &[Vec<i64>]) -> Vec<Vec<Complex64>> {
    m.iter().map(|r| r.iter().map(|&v| int(v)).collect()).collect()
}

impl BilinearAlg {
    pub fn mults(&self) -> usize {
        self.b.len()
    }

    /// Pointwise weights for a fixed operand.
    pub fn weights(&self, fixed: &[Complex64]) -> Vec<Complex64> {
        self.b.iter().map(|row| row.iter().zip(fixed).map(|(x, y)| x * y).sum()).collect()
    }

    pub fn apply(&self, a: &[Complex64], weights: &[Complex64]) -> Vec<Complex64> {
        let t: Vec<Complex64> = self.a.apply(a).iter().zip(weights).map(|(x, w)| x * w).collect();
        self.c.apply(&t)
    }

    /// Additive cost plus the multiplier cost for the given weights.
    pub fn cost(&self, weights: &[Complex64]) -> Ops {
        let mut ops = self.a.cost() + self.c.cost();
        for &w in weights {
            ops += mult_cost(w);
        }
        ops
    }

    /// Multiplication by `sign` substitution `Z -> -Z` (maps `P_m` to `P_{2m}` for odd m).
    fn negate_variable(&self, n: u64) -> BilinearAlg {
        let s: Vec<Complex64> = (0..self.phi).map(|i| if i % 2 == 0 { one() } else { int(-1) }).collect();
        let sdiag = LinearOp::diagonal(&s);
        let a = sdiag.clone().then(self.a.clone()).unwrap();
        let c = self.c.clone().then(sdiag).unwrap();
        let b = self.b.iter().map(|r| r.iter().zip(&s).map(|(x, y)| x * y).collect()).collect();
        BilinearAlg { n, phi: self.phi, a: collapse(a), b, c: collapse(c) }
    }
}

/// Fold pure sign layers into their neighbours so costs stay honest.
fn collapse(op: LinearOp) -> LinearOp {
    let layers = op.layers();
    if layers.len() < 2 {
        return op;
    }
    let mut out: Vec<crate::linop::Layer> = Vec::new();
    for l in layers {
        let is_signed_perm = (0..l.out_len()).all(|r| {
            let row: Vec<_> = l.row(r).collect();
            row.len() == 1 && (row[0].1.re.abs() - 1.0).abs() < 1e-15 && row[0].1.im == 0.0
        });
        match out.last() {
            Some(prev) if is_signed_perm => {
                let rows = (0..l.out_len())
                    .map(|r| {
                        let (c, s) = l.row(r).next().unwrap();
                        prev.row(c).map(|(cc, v)| (cc, v * s)).collect()
                    })
                    .collect();
                let merged = crate::linop::Layer::from_rows(prev.in_len(), rows);
                *out.last_mut().unwrap() = merged;
            }
            _ => out.push(l.clone()),
        }
    }
    // a leading sign layer is folded forward into the next one
    if out.len() >= 2 {
        let first = &out[0];
        let is_signed_perm = (0..first.out_len()).all(|r| first.row(r).count() == 1);
        if is_signed_perm {
            let second = &out[1];
            let rows = (0..second.out_len())
                .map(|r| {
                    second
                        .row(r)
                        .map(|(c, v)| {
                            let (cc, s) = first.row(c).next().unwrap();
                            (cc, v * s)
                        })
                        .collect()
                })
                .collect();
            let merged = crate::linop::Layer::from_rows(first.in_len(), rows);
            out.remove(0);
            out[0] = merged;
        }
    }
    let mut res = LinearOp::identity(op.in_len());
    for l in out {
        res = res.then(LinearOp::from_layer(l)).unwrap();
    }
    res
}

fn scalar() -> BilinearAlg {
    BilinearAlg { n: 1, phi: 1, a: LinearOp::identity(1), b: vec![vec![one()]], c: LinearOp::identity(1) }
}

fn p3() -> BilinearAlg {
    // m1 = (a0 - a1) b0, m2 = a0 b1, m3 = a1 (b0 - b1); y0 = m1 + m3, y1 = m2 + m3
    BilinearAlg {
        n: 3,
        phi: 2,
        a: LinearOp::from_int_matrix(2, &[vec![1, -1], vec![1, 0], vec![0, 1]]),
        b: dense_from_int(&[vec![1, 0], vec![0, 1], vec![1, -1]]),
        c: LinearOp::from_int_matrix(3, &[vec![1, 0, 1], vec![0, 1, 1]]),
    }
}

/// `P_n(Z) = P_{n/2}(Z^2)` for `4 | n`: split into even and odd parts and
/// use three products over the half-size ring.
fn quadratic(n: u64, sub: &BilinearAlg) -> BilinearAlg {
    let h = sub.phi;
    let phi = 2 * h;
    let ms = sub.mults();
    let mut l1 = Vec::with_capacity(3 * h);
    for i in 0..h {
        l1.push(vec![(2 * i, one()), (2 * i + 1, one())]);
    }
    for i in 0..h {
        l1.push(vec![(2 * i, one())]);
    }
    for i in 0..h {
        l1.push(vec![(2 * i + 1, one())]);
    }
    let a = LinearOp::from_rows(phi, l1)
        .then(LinearOp::block_diag(&[sub.a.clone(), sub.a.clone(), sub.a.clone()]))
        .unwrap();
    // fixed side: b_e, b_o - b_e, Y b_o - b_e
    let red = reduction_table(n / 2, h + 1).unwrap();
    let mut be = vec![vec![Complex64::zero(); phi]; h];
    let mut bo = vec![vec![Complex64::zero(); phi]; h];
    let mut ybo = vec![vec![Complex64::zero(); phi]; h];
    for i in 0..h {
        be[i][2 * i] = one();
        bo[i][2 * i + 1] = one();
    }
    for j in 0..h {
        for (i, &c) in red[j + 1].iter().enumerate() {
            ybo[i][2 * j + 1] += int(c);
        }
    }
    let diff = |x: &Vec<Vec<Complex64>>| -> Vec<Vec<Complex64>> {
        x.iter().zip(&be).map(|(r, e)| r.iter().zip(e).map(|(p, q)| p - q).collect()).collect()
    };
    let mut b = dense_mul(&sub.b, &be);
    b.extend(dense_mul(&sub.b, &diff(&bo)));
    b.extend(dense_mul(&sub.b, &diff(&ybo)));
    let mut l2 = vec![Vec::new(); phi];
    for i in 0..h {
        l2[2 * i] = vec![(i, one()), (2 * h + i, one())];
        l2[2 * i + 1] = vec![(i, one()), (h + i, one())];
    }
    let c = LinearOp::block_diag(&[sub.c.clone(), sub.c.clone(), sub.c.clone()])
        .then(LinearOp::from_rows(3 * h, l2))
        .unwrap();
    debug_assert_eq!(b.len(), 3 * ms);
    BilinearAlg { n, phi, a, b, c }
}

/// Bilinear algorithm for linear convolution of two length-`len` sequences.
struct LinConv {
    a: LinearOp,
    b: Vec<Vec<Complex64>>,
    c: LinearOp,
}

fn lin_conv(len: usize) -> LinConv {
    if len == 1 {
        return LinConv { a: LinearOp::identity(1), b: vec![vec![one()]], c: LinearOp::identity(1) };
    }
    if len % 2 == 0 {
        let h = len / 2;
        let sub = lin_conv(h);
        let mut l1 = Vec::new();
        for i in 0..h {
            l1.push(vec![(i, one())]);
        }
        for i in 0..h {
            l1.push(vec![(h + i, one())]);
        }
        for i in 0..h {
            l1.push(vec![(i, one()), (h + i, one())]);
        }
        let a = LinearOp::from_rows(len, l1).then(LinearOp::block_diag(&[sub.a.clone(), sub.a.clone(), sub.a.clone()])).unwrap();
        let sel = |lo: usize, both: bool| -> Vec<Vec<Complex64>> {
            (0..h)
                .map(|i| {
                    let mut r = vec![Complex64::zero(); len];
                    r[lo + i] = one();
                    if both {
                        r[h + i] = one();
                    }
                    r
                })
                .collect()
        };
        let mut b = dense_mul(&sub.b, &sel(0, false));
        b.extend(dense_mul(&sub.b, &sel(h, false)));
        b.extend(dense_mul(&sub.b, &sel(0, true)));
        let pl = 2 * h - 1;
        let mut rows = vec![Vec::new(); 2 * len - 1];
        for i in 0..pl {
            rows[i].push((i, one()));
            rows[i + h].push((2 * pl + i, one()));
            rows[i + h].push((i, int(-1)));
            rows[i + h].push((pl + i, int(-1)));
            rows[i + 2 * h].push((pl + i, one()));
        }
        let c = LinearOp::block_diag(&[sub.c.clone(), sub.c.clone(), sub.c.clone()]).then(LinearOp::from_rows(3 * pl, rows)).unwrap();
        return LinConv { a, b, c };
    }
    if len % 3 == 0 {
        let t = len / 3;
        let sub = lin_conv(t);
        // products: 00, 11, 22, (0+1)(0+1), (0+2)(0+2), (1+2)(1+2)
        let parts: [&[usize]; 6] = [&[0], &[1], &[2], &[0, 1], &[0, 2], &[1, 2]];
        let mut l1 = Vec::new();
        let mut b = Vec::new();
        for p in parts.iter() {
            for i in 0..t {
                l1.push(p.iter().map(|&s| (s * t + i, one())).collect());
            }
            let sel: Vec<Vec<Complex64>> = (0..t)
                .map(|i| {
                    let mut r = vec![Complex64::zero(); len];
                    for &s in p.iter() {
                        r[s * t + i] = one();
                    }
                    r
                })
                .collect();
            b.extend(dense_mul(&sub.b, &sel));
        }
        let subs: Vec<LinearOp> = (0..6).map(|_| sub.a.clone()).collect();
        let a = LinearOp::from_rows(len, l1).then(LinearOp::block_diag(&subs)).unwrap();
        let pl = 2 * t - 1;
        let mut rows = vec![Vec::new(); 2 * len - 1];
        // coefficient blocks of the result in powers of Z^t
        let terms: [(usize, &[(usize, i64)]); 5] = [
            (0, &[(0, 1)]),
            (1, &[(3, 1), (0, -1), (1, -1)]),
            (2, &[(4, 1), (0, -1), (2, -1), (1, 1)]),
            (3, &[(5, 1), (1, -1), (2, -1)]),
            (4, &[(2, 1)]),
        ];
        for (shift, combo) in terms.iter() {
            for i in 0..pl {
                for &(prod, sgn) in combo.iter() {
                    rows[shift * t + i].push((prod * pl + i, int(sgn)));
                }
            }
        }
        let cs: Vec<LinearOp> = (0..6).map(|_| sub.c.clone()).collect();
        let c = LinearOp::block_diag(&cs).then(LinearOp::from_rows(6 * pl, rows)).unwrap();
        return LinConv { a, b, c };
    }
    // pad by one
    let big = lin_conv(len + 1);
    let pad = LinearOp::from_rows(len, (0..=len).map(|i| if i < len { vec![(i, one())] } else { Vec::new() }).collect());
    let a = pad.then(big.a).unwrap();
    let b = big.b.iter().map(|r| r[..len].to_vec()).collect();
    let c = big.c.then(LinearOp::gather(2 * len + 1, &(0..2 * len - 1).collect::<Vec<_>>())).unwrap();
    LinConv { a, b, c }
}

/// `phi x (2 phi - 1)` reduction of a linear product modulo `P_n`.
fn reduction_op(n: u64, phi: usize, len: usize) -> LinearOp {
    let red = reduction_table(n, len).unwrap();
    let rows: Vec<Vec<(usize, Complex64)>> = (0..phi)
        .map(|i| (0..len).filter(|&j| red[j][i] != 0).map(|j| (j, int(red[j][i]))).collect())
        .collect();
    LinearOp::from_rows(len, rows)
}

fn generic_odd(n: u64) -> BilinearAlg {
    let phi = totient(n) as usize;
    let lc = lin_conv(phi);
    let c = lc.c.then(reduction_op(n, phi, 2 * phi - 1)).unwrap().prune();
    BilinearAlg { n, phi, a: lc.a.prune(), b: lc.b, c }
}

/// Odd parts covered by the fixed table.
const TABLE_ODD: [u64; 6] = [1, 3, 5, 7, 9, 13];

/// Fixed bilinear algorithm for `P_n`. Indices are covered when their odd
/// part is one of 1, 3, 5, 7, 9, 13; anything else is a capability error.
pub fn table_alg(n: u64) -> Result<BilinearAlg> {
    if n == 0 {
        return Err(invalid!("cyclotomic index must be positive"));
    }
    let v2 = n.trailing_zeros();
    let odd = n >> v2;
    if !TABLE_ODD.contains(&odd) || n > 1 << 12 {
        return Err(capability!("no table entry for P_{n}"));
    }
    Ok(match (v2, odd) {
        (0, 1) => scalar(),
        (1, 1) => BilinearAlg { n: 2, ..scalar() },
        (0, 3) => p3(),
        (0, _) => generic_odd(n),
        (1, _) => table_alg(odd)?.negate_variable(n),
        _ => quadratic(n, &table_alg(n / 2)?),
    })
}

/// Indices of `k` coprime to `n`, ascending.
pub fn coprime_bins(n: u64) -> Vec<u64> {
    (0..n.max(1)).filter(|&k| gcd(k, n) == 1).collect()
}

/// Reduced DFT matrix: rows are bins coprime to `n`, columns are powers.
pub fn reduced_dft_matrix(n: u64) -> Vec<Vec<Complex64>> {
    let phi = totient(n);
    coprime_bins(n).iter().map(|&k| (0..phi).map(|j| twiddle(n, k * j % n)).collect()).collect()
}

/// `X(k) = x(W_n^k)` for every k coprime to n; the input is a residue of
/// degree below `phi(n)`.
pub fn reduced_dft(n: u64, x: &[Complex64]) -> Result<Vec<Complex64>> {
    let phi = totient(n) as usize;
    if x.len() > phi {
        return Err(invalid!("residue has {} coefficients, ring rank is {phi}", x.len()));
    }
    let m = reduced_dft_matrix(n);
    Ok(m.iter().map(|row| row.iter().zip(x).map(|(w, v)| w * v).sum()).collect())
}

/// Reduced-DFT diagonalization as a bilinear algorithm.
pub fn alg1f(n: u64) -> Result<BilinearAlg> {
    let phi = totient(n) as usize;
    let v = reduced_dft_matrix(n);
    let vinv = mat_inv(&v)?;
    Ok(BilinearAlg { n, phi, a: LinearOp::from_dense(phi, &v), b: v, c: LinearOp::from_dense(phi, &vinv) })
}

fn is_smooth23(mut f: usize) -> bool {
    if f == 0 {
        return false;
    }
    while f % 2 == 0 {
        f /= 2;
    }
    while f % 3 == 0 {
        f /= 3;
    }
    f == 1
}

/// Smallest utility FFT size usable for `P_n`.
pub fn alg2_default_size(n: u64) -> usize {
    let need = 2 * totient(n) as usize - 1;
    (need..).find(|&f| is_smooth23(f)).unwrap()
}

/// Mixed-radix (2, 3) DFT as a layered operator; `inverse` conjugates the kernel
/// without scaling.
pub fn utility_fft(f: usize, inverse: bool) -> Result<LinearOp> {
    if !is_smooth23(f) {
        return Err(capability!("utility FFT supports sizes 2^a 3^b, got {f}"));
    }
    Ok(fft_rec(f, inverse))
}

fn fft_rec(f: usize, inverse: bool) -> LinearOp {
    if f == 1 {
        return LinearOp::identity(1);
    }
    let w = |n: usize, k: usize| {
        let t = twiddle(n as u64, k as u64);
        if inverse {
            t.conj()
        } else {
            t
        }
    };
    let r = if f % 3 == 0 { 3 } else { 2 };
    let s = f / r;
    if s == 1 {
        let rows = (0..r).map(|k| (0..r).map(|n| (n, w(r, n * k % r))).collect()).collect();
        return LinearOp::from_rows(r, rows);
    }
    // decimation in time: sub-sequence n1 holds x[r n2 + n1]
    let perm: Vec<usize> = (0..f).map(|p| r * (p % s) + p / s).collect();
    let sub = fft_rec(s, inverse);
    let subs: Vec<LinearOp> = (0..r).map(|_| sub.clone()).collect();
    let tw: Vec<Complex64> = (0..f).map(|p| w(f, (p / s) * (p % s))).collect();
    let rows = (0..f)
        .map(|out| {
            let (k, k2) = (out % s, out / s);
            (0..r).map(|n1| (n1 * s + k, w(r, n1 * k2 % r))).collect()
        })
        .collect();
    LinearOp::gather(f, &perm)
        .then(LinearOp::block_diag(&subs))
        .unwrap()
        .then(LinearOp::diagonal(&tw))
        .unwrap()
        .then(LinearOp::from_rows(f, rows))
        .unwrap()
        .prune()
}

/// Wraparound product through a utility FFT of size `f >= 2 phi - 1`.
pub fn alg2(n: u64, f: usize) -> Result<BilinearAlg> {
    let phi = totient(n) as usize;
    if f < 2 * phi - 1 {
        return Err(invalid!("FFT size {f} is below 2*phi({n})-1 = {}; the product would alias", 2 * phi - 1));
    }
    let fwd = utility_fft(f, false)?;
    let inv = utility_fft(f, true)?;
    let pad = LinearOp::from_rows(phi, (0..f).map(|i| if i < phi { vec![(i, one())] } else { Vec::new() }).collect());
    let a = pad.then(fwd.clone())?;
    let scale = 1.0 / f as f64;
    let b: Vec<Vec<Complex64>> = (0..f).map(|k| (0..phi).map(|j| twiddle(f as u64, (k * j % f) as u64) * scale).collect()).collect();
    let c = inv
        .then(LinearOp::gather(f, &(0..2 * phi - 1).collect::<Vec<_>>()))?
        .then(reduction_op(n, phi, 2 * phi - 1))?
        .prune();
    Ok(BilinearAlg { n, phi, a, b, c })
}

/// Is `n` a valid cyclotomic index for a table lookup (used for messages).
pub fn table_covers(n: u64) -> bool {
    table_alg(n).is_ok() && factorize(n).is_ok()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::modules::ring_mul;

    fn rnd(seed: usize, len: usize) -> Vec<Complex64> {
        (0..len).map(|i| Complex64::new(((seed * 31 + i * 7) as f64).sin(), ((seed * 17 + i * 13) as f64).cos())).collect()
    }

    fn check(alg: &BilinearAlg) {
        for s in 0..10 {
            let a = rnd(s, alg.phi);
            let b = rnd(s + 100, alg.phi);
            let got = alg.apply(&a, &alg.weights(&b));
            let want = ring_mul(alg.n, &a, &b);
            for (x, y) in got.iter().zip(&want) {
                assert!((x - y).norm() < 1e-10, "P_{}", alg.n);
            }
        }
    }

    #[test]
    fn table_entries_are_correct() {
        for n in [1, 2, 3, 4, 5, 6, 7, 8, 9, 10, 12, 13, 14, 16, 18, 24, 26, 32] {
            check(&table_alg(n).unwrap());
        }
        assert!(table_alg(11).is_err());
    }

    #[test]
    fn table_counts() {
        let mc = |n| {
            let t = table_alg(n).unwrap();
            (t.mults(), (t.a.cost() + t.c.cost()).adds / 2)
        };
        assert_eq!(mc(1), (1, 0));
        assert_eq!(mc(3), (3, 3));
        assert_eq!(mc(4), (3, 3));
        assert_eq!(mc(6), (3, 3));
        assert_eq!(mc(8), (9, 15));
        assert_eq!(mc(12).0, 9);
        assert_eq!(mc(16), (27, 57));
    }

    #[test]
    fn other_engines() {
        for n in [1, 3, 4, 5, 8, 9, 12, 16] {
            check(&alg1f(n).unwrap());
            check(&alg2(n, alg2_default_size(n)).unwrap());
        }
        assert_eq!(alg2_default_size(9), 12);
        assert!(alg2(9, 8).is_err());
        assert!(alg2(9, 11).is_err());
        check(&alg2(4, 4).unwrap());
    }

    #[test]
    fn fft_matches_dft() {
        for f in [2, 3, 4, 6, 8, 9, 12, 18, 24, 27, 32] {
            let x = rnd(f, f);
            let y = utility_fft(f, false).unwrap().apply(&x);
            let z = crate::engine::naive_dft(&x);
            for (a, b) in y.iter().zip(&z) {
                assert!((a - b).norm() < 1e-11, "f = {f}");
            }
        }
    }

    #[test]
    fn reduced_dft_examples() {
        let c = Complex64::new(2.5, -1.0);
        assert_eq!(reduced_dft(4, &[c]).unwrap(), [c, c]);
        let z4 = [Complex64::zero(), Complex64::zero(), Complex64::zero(), Complex64::zero()];
        // Z^4 = -1 mod P_8, represented by the constant -1
        let mut m1 = z4.to_vec();
        m1[0] = Complex64::new(-1.0, 0.0);
        for v in reduced_dft(8, &m1).unwrap() {
            assert!((v + one()).norm() < 1e-15);
        }
    }
}
