//! Polynomial transforms over `Q[Z]/P_{n2}` with kernel `Z^{n2/n1}`.

use alloc::vec;
use alloc::vec::Vec;
use core::ops::Div;

use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::error::{consistency, invalid, Result};
use crate::linop::LinearOp;
use crate::ntheory::totient;
use crate::poly::{cyclotomic, rat_to_f64, reduction_table, Coeff, RatPoly};

use super::bilinear::coprime_bins;

/// Transform of length `n1` over the ring modulo `P_{n2}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PolyTransform {
    n1: u64,
    n2: u64,
}

impl PolyTransform {
    pub fn new(n1: u64, n2: u64) -> Result<PolyTransform> {
        if n1 == 0 || n2 == 0 || n2 % n1 != 0 {
            return Err(invalid!("polynomial transform needs n1 | n2, got ({n1}, {n2})"));
        }
        Ok(PolyTransform { n1, n2 })
    }
    pub fn length(&self) -> u64 {
        self.n1
    }
    pub fn ring_index(&self) -> u64 {
        self.n2
    }
    /// Exponent `e` of the kernel `Z^e`.
    pub fn kernel_exponent(&self) -> u64 {
        self.n2 / self.n1
    }

    /// Multiplicative order of the kernel in the residue ring.
    pub fn kernel_order(&self) -> u64 {
        let phi = totient(self.n2) as usize;
        let red = reduction_table(self.n2, self.n2 as usize).expect("valid index");
        let e = self.kernel_exponent() as usize;
        let mut one = vec![0i64; phi];
        one[0] = 1;
        (1..=self.n2).find(|&k| red[(e * k as usize) % self.n2 as usize] == one).unwrap_or(0)
    }
}

fn rotate<T: Coeff>(v: &[T], e: usize, red: &[Vec<i64>]) -> Vec<T> {
    let n = red.len();
    let phi = v.len();
    let mut out = vec![T::zero(); phi];
    for (i, c) in v.iter().enumerate() {
        if c.is_zero() {
            continue;
        }
        for (t, &r) in red[(i + e) % n].iter().enumerate() {
            if r != 0 {
                out[t] = out[t].clone() + c.clone() * T::from_i64(r);
            }
        }
    }
    out
}

fn check_rows<T>(t: &PolyTransform, rows: &[Vec<T>]) -> Result<usize> {
    let phi = totient(t.n2) as usize;
    if rows.len() != t.n1 as usize || rows.iter().any(|r| r.len() != phi) {
        return Err(invalid!("expected {} rows of {phi} coefficients", t.n1));
    }
    Ok(phi)
}

/// `X_k = sum_n x_n Z^{e k n} mod P_{n2}` for `k < n1`. Rotations and adds only.
pub fn poly_transform_forward<T: Coeff>(t: &PolyTransform, rows: &[Vec<T>]) -> Result<Vec<Vec<T>>> {
    let phi = check_rows(t, rows)?;
    let red = reduction_table(t.n2, t.n2 as usize)?;
    let (n1, e, n2) = (t.n1 as usize, t.kernel_exponent() as usize, t.n2 as usize);
    Ok((0..n1)
        .map(|k| {
            let mut acc = vec![T::zero(); phi];
            for (n, row) in rows.iter().enumerate() {
                let r = rotate(row, e * k * n % n2, &red);
                for (a, b) in acc.iter_mut().zip(r) {
                    *a = a.clone() + b;
                }
            }
            acc
        })
        .collect())
}

/// Inverse without the `1/n1` factor: returns `n1 * x`.
pub fn poly_transform_inverse_unscaled<T: Coeff>(t: &PolyTransform, rows: &[Vec<T>]) -> Result<Vec<Vec<T>>> {
    let phi = check_rows(t, rows)?;
    let red = reduction_table(t.n2, t.n2 as usize)?;
    let (n1, e, n2) = (t.n1 as usize, t.kernel_exponent() as usize, t.n2 as usize);
    Ok((0..n1)
        .map(|n| {
            let mut acc = vec![T::zero(); phi];
            for (k, row) in rows.iter().enumerate() {
                let r = rotate(row, (n2 - e * k * n % n2) % n2, &red);
                for (a, b) in acc.iter_mut().zip(r) {
                    *a = a.clone() + b;
                }
            }
            acc
        })
        .collect())
}

/// Exact inverse. In product engines the `1/n1` factor lives in the fixed
/// operand instead, see [`ReducedPt`].
pub fn poly_transform_inverse<T: Coeff + Div<Output = T>>(t: &PolyTransform, rows: &[Vec<T>]) -> Result<Vec<Vec<T>>> {
    let un = poly_transform_inverse_unscaled(t, rows)?;
    let d = T::from_i64(t.n1 as i64);
    Ok(un.into_iter().map(|r| r.into_iter().map(|c| c / d.clone()).collect()).collect())
}

/// Reduced polynomial transform used inside two-dimensional products
/// modulo `P_{n1}(Z1) P_{n2}(Z2)`: evaluate `Z1` at `Z2^{e k}` for k coprime
/// to `n1`, multiply, interpolate back.
///
/// Data layout is row-major `(i, t)`: `i` is the `Z1` power (or the bin
/// after the forward map) and `t` the `Z2` coefficient.
#[derive(Debug, Clone)]
pub struct ReducedPt {
    pub n1: u64,
    pub n2: u64,
    pub forward: LinearOp,
    /// Integer interpolation; the per-bin ring constants are in `folds`.
    pub inverse: LinearOp,
    /// Constant `c_k` (coefficients mod `P_{n2}`) to multiply into the fixed
    /// operand of bin `k`.
    pub folds: Vec<Vec<Complex64>>,
}

struct Field {
    modulus: RatPoly,
}

impl Field {
    fn mul(&self, a: &RatPoly, b: &RatPoly) -> RatPoly {
        (a * b).rem(&self.modulus).unwrap()
    }
    fn inv(&self, a: &RatPoly) -> Result<RatPoly> {
        a.inverse_mod(&self.modulus)
    }
}

fn monomial_mod(exp: usize, red: &[Vec<i64>]) -> RatPoly {
    RatPoly::from_i64s(&red[exp % red.len()])
}

fn mul_matrix(p: &RatPoly, red: &[Vec<i64>], phi: usize) -> Vec<Vec<BigRational>> {
    // column j = p * Z^j mod P
    let mut m = vec![vec![BigRational::zero(); phi]; phi];
    for j in 0..phi {
        for (s, c) in p.coeffs().iter().enumerate() {
            for (i, &r) in red[(s + j) % red.len()].iter().enumerate() {
                if r != 0 {
                    m[i][j] += c.clone() * BigRational::from_integer(r.into());
                }
            }
        }
    }
    m
}

impl ReducedPt {
    pub fn new(n1: u64, n2: u64) -> Result<ReducedPt> {
        let t = PolyTransform::new(n1, n2)?;
        let (phi1, phi2) = (totient(n1) as usize, totient(n2) as usize);
        let red = reduction_table(n2, n2 as usize)?;
        let e = t.kernel_exponent() as usize;
        let bins = coprime_bins(n1);
        let fld = Field { modulus: RatPoly::from_int(&cyclotomic(n2)?) };

        // forward: X_k[t'] = sum_i sum_t a_i[t] R[(e k i + t)][t']
        let mut rows = vec![Vec::new(); phi1 * phi2];
        for (kk, &k) in bins.iter().enumerate() {
            for i in 0..phi1 {
                let sh = e * k as usize * i;
                for tt in 0..phi2 {
                    for (tp, &r) in red[(sh + tt) % n2 as usize].iter().enumerate() {
                        if r != 0 {
                            rows[kk * phi2 + tp].push((i * phi2 + tt, Complex64::new(r as f64, 0.0)));
                        }
                    }
                }
            }
        }
        let forward = LinearOp::from_rows(phi1 * phi2, rows);

        // V[k][i] = w_k^i over the field; invert by Gauss-Jordan
        let mut v: Vec<Vec<RatPoly>> =
            bins.iter().map(|&k| (0..phi1).map(|i| monomial_mod(e * k as usize * i, &red)).collect()).collect();
        let mut inv: Vec<Vec<RatPoly>> = (0..phi1)
            .map(|r| (0..phi1).map(|c| if r == c { RatPoly::from_i64s(&[1]) } else { RatPoly::zero() }).collect())
            .collect();
        for col in 0..phi1 {
            let piv = (col..phi1).find(|&r| !v[r][col].is_zero()).ok_or_else(|| consistency!("singular transform"))?;
            v.swap(col, piv);
            inv.swap(col, piv);
            let pinv = fld.inv(&v[col][col])?;
            for j in 0..phi1 {
                v[col][j] = fld.mul(&v[col][j], &pinv);
                inv[col][j] = fld.mul(&inv[col][j], &pinv);
            }
            for r in 0..phi1 {
                if r != col && !v[r][col].is_zero() {
                    let f = v[r][col].clone();
                    for j in 0..phi1 {
                        let a = fld.mul(&f, &v[col][j]);
                        v[r][j] = &v[r][j] - &a;
                        let b = fld.mul(&f, &inv[col][j]);
                        inv[r][j] = &inv[r][j] - &b;
                    }
                }
            }
        }
        // inv[i][k]: coefficient i from bin k. Normalize each bin column by
        // its first entry when that leaves integers, else by the largest
        // common denominator.
        let mut folds = Vec::with_capacity(phi1);
        let mut w_int: Vec<Vec<Vec<Vec<i64>>>> = vec![Vec::new(); phi1];
        for k in 0..phi1 {
            let lead = inv[0][k].clone();
            let lead_inv = fld.inv(&lead)?;
            let cand: Vec<RatPoly> = (0..phi1).map(|i| fld.mul(&inv[i][k], &lead_inv)).collect();
            let (fold, col) = if cand.iter().all(crate::poly::is_integral) {
                (lead, cand)
            } else {
                let mut den = num_bigint::BigInt::one();
                for p in (0..phi1).map(|i| &inv[i][k]) {
                    for c in p.coeffs() {
                        den = num_integer::Integer::lcm(&den, c.denom());
                    }
                }
                let d = BigRational::from_integer(den.clone());
                let col: Vec<RatPoly> = (0..phi1).map(|i| inv[i][k].scale(&d)).collect();
                (RatPoly::from_i64s(&[1]).scale(&d.recip()), col)
            };
            folds.push(fold.padded(phi2).iter().map(|c| Complex64::new(rat_to_f64(c), 0.0)).collect());
            for (i, p) in col.iter().enumerate() {
                let m = mul_matrix(p, &red, phi2);
                let mi: Vec<Vec<i64>> = m
                    .iter()
                    .map(|r| r.iter().map(|c| num_traits::ToPrimitive::to_i64(&c.to_integer()).unwrap()).collect())
                    .collect();
                if w_int[i].is_empty() {
                    w_int[i] = vec![Vec::new(); phi1];
                }
                w_int[i][k] = mi;
            }
        }
        let mut rows = vec![Vec::new(); phi1 * phi2];
        for i in 0..phi1 {
            for k in 0..phi1 {
                let m = &w_int[i][k];
                for tp in 0..phi2 {
                    for s in 0..phi2 {
                        if m[tp][s] != 0 {
                            rows[i * phi2 + tp].push((k * phi2 + s, Complex64::new(m[tp][s] as f64, 0.0)));
                        }
                    }
                }
            }
        }
        let inverse = LinearOp::from_rows(phi1 * phi2, rows);
        Ok(ReducedPt { n1, n2, forward, inverse, folds })
    }

    /// Fold matrices as one block-diagonal dense operator over `(k, t)`.
    pub fn fold_op(&self) -> LinearOp {
        let ops: Vec<LinearOp> = self
            .folds
            .iter()
            .map(|c| {
                let m = crate::modules::ring_mul_matrix(self.n2, c);
                LinearOp::from_dense(c.len(), &m)
            })
            .collect();
        LinearOp::block_diag(&ops)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(k: i64) -> BigRational {
        BigRational::from_integer(k.into())
    }

    #[test]
    fn forward_examples() {
        let t = PolyTransform::new(3, 9).unwrap();
        let v: Vec<BigRational> = [1, -2, 3, 0, 5, 7].iter().map(|&k| q(k)).collect();
        let zero = vec![q(0); 6];
        let imp = poly_transform_forward(&t, &[v.clone(), zero.clone(), zero.clone()]).unwrap();
        assert!(imp.iter().all(|r| *r == v));
        let same = poly_transform_forward(&t, &[v.clone(), v.clone(), v.clone()]).unwrap();
        assert_eq!(same[0], v.iter().map(|c| c * q(3)).collect::<Vec<_>>());
        assert_eq!(same[1], zero);
        assert_eq!(same[2], zero);
        let back = poly_transform_inverse(&t, &imp).unwrap();
        assert_eq!(back, [v, zero.clone(), zero]);
    }

    #[test]
    fn roundtrip_small() {
        let t = PolyTransform::new(2, 4).unwrap();
        for seed in 0..20i64 {
            let rows = vec![vec![q(seed - 3), q(2 * seed + 1)], vec![q(7 - seed), q(seed * seed % 11)]];
            let f = poly_transform_forward(&t, &rows).unwrap();
            assert_eq!(poly_transform_inverse(&t, &f).unwrap(), rows);
        }
        let z = vec![vec![q(0); 2]; 2];
        assert_eq!(poly_transform_inverse(&t, &z).unwrap(), z);
    }

    #[test]
    fn kernel_orders() {
        for (a, b) in [(2, 2), (2, 4), (4, 4), (4, 8), (3, 9), (4, 12), (3, 6), (8, 16), (6, 12), (2, 6)] {
            assert_eq!(PolyTransform::new(a, b).unwrap().kernel_order(), a, "({a}, {b})");
        }
        assert!(PolyTransform::new(3, 8).is_err());
    }

    #[test]
    fn reduced_costs() {
        let pt = ReducedPt::new(4, 4).unwrap();
        assert_eq!((pt.forward.cost().adds + pt.inverse.cost().adds) / 2, 8);
        assert_eq!(pt.forward.cost().mults + pt.inverse.cost().mults, 0);
        for (a, b) in [(3, 3), (3, 9), (4, 8), (4, 12), (8, 16), (6, 12), (3, 6)] {
            let pt = ReducedPt::new(a, b).unwrap();
            assert_eq!(pt.forward.cost().mults + pt.inverse.cost().mults, 0, "({a}, {b})");
        }
    }
}
