//! Dense univariate polynomials, cyclotomic polynomials and CRT over Q[Z].

use alloc::vec;
use alloc::vec::Vec;
use core::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{invalid, Result};
use crate::ntheory::divisors;

/// Coefficient ring used by [`Poly`].
pub trait Coeff:
    Clone
    + PartialEq
    + Zero
    + One
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Neg<Output = Self>
{
    fn from_i64(k: i64) -> Self;
}

impl Coeff for i64 {
    fn from_i64(k: i64) -> Self {
        k
    }
}
impl Coeff for f64 {
    fn from_i64(k: i64) -> Self {
        k as f64
    }
}
impl Coeff for BigInt {
    fn from_i64(k: i64) -> Self {
        BigInt::from(k)
    }
}
impl Coeff for BigRational {
    fn from_i64(k: i64) -> Self {
        BigRational::from_integer(BigInt::from(k))
    }
}
impl Coeff for Complex64 {
    fn from_i64(k: i64) -> Self {
        Complex64::new(k as f64, 0.0)
    }
}

/// Polynomial with coefficients in ascending degree. Trailing zeros are trimmed,
/// so the zero polynomial has no coefficients.
#[derive(Debug, Clone, PartialEq)]
pub struct Poly<T> {
    coeffs: Vec<T>,
}

pub type IntPoly = Poly<BigInt>;
pub type RatPoly = Poly<BigRational>;
pub type ComplexPoly = Poly<Complex64>;

impl<T: Coeff> Poly<T> {
    pub fn new(mut coeffs: Vec<T>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        Poly { coeffs }
    }

    pub fn zero() -> Self {
        Poly { coeffs: Vec::new() }
    }

    pub fn monomial(deg: usize, c: T) -> Self {
        let mut v = vec![T::zero(); deg + 1];
        v[deg] = c;
        Self::new(v)
    }

    pub fn from_i64s(c: &[i64]) -> Self {
        Self::new(c.iter().map(|&k| T::from_i64(k)).collect())
    }

    pub fn coeffs(&self) -> &[T] {
        &self.coeffs
    }

    /// Coefficients padded (or truncated) to exactly `len` entries.
    pub fn padded(&self, len: usize) -> Vec<T> {
        let mut v: Vec<T> = self.coeffs.iter().take(len).cloned().collect();
        v.resize(len, T::zero());
        v
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree, or `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn coeff(&self, i: usize) -> T {
        self.coeffs.get(i).cloned().unwrap_or_else(T::zero)
    }

    pub fn lead(&self) -> T {
        self.coeffs.last().cloned().unwrap_or_else(T::zero)
    }

    pub fn scale(&self, k: &T) -> Self {
        Self::new(self.coeffs.iter().map(|c| c.clone() * k.clone()).collect())
    }

    pub fn map<U: Coeff>(&self, f: impl Fn(&T) -> U) -> Poly<U> {
        Poly::new(self.coeffs.iter().map(f).collect())
    }

    /// Remainder modulo a monic polynomial. Only ring operations are needed.
    pub fn rem_monic(&self, m: &Poly<T>) -> Result<Self> {
        let dm = m.degree().ok_or_else(|| invalid!("division by zero polynomial"))?;
        if !m.lead().is_one() {
            return Err(invalid!("modulus is not monic"));
        }
        let mut r = self.coeffs.clone();
        while r.len() > dm {
            let top = r.len() - 1;
            let c = r[top].clone();
            if !c.is_zero() {
                for (j, mj) in m.coeffs.iter().enumerate() {
                    let idx = top - dm + j;
                    r[idx] = r[idx].clone() - c.clone() * mj.clone();
                }
            }
            r.pop();
        }
        Ok(Self::new(r))
    }

    /// Value at `z`.
    pub fn eval(&self, z: &T) -> T {
        let mut acc = T::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * z.clone() + c.clone();
        }
        acc
    }
}

impl<T: Coeff> Add for &Poly<T> {
    type Output = Poly<T>;
    fn add(self, o: &Poly<T>) -> Poly<T> {
        let n = self.coeffs.len().max(o.coeffs.len());
        Poly::new((0..n).map(|i| self.coeff(i) + o.coeff(i)).collect())
    }
}

impl<T: Coeff> Sub for &Poly<T> {
    type Output = Poly<T>;
    fn sub(self, o: &Poly<T>) -> Poly<T> {
        let n = self.coeffs.len().max(o.coeffs.len());
        Poly::new((0..n).map(|i| self.coeff(i) - o.coeff(i)).collect())
    }
}

impl<T: Coeff> Mul for &Poly<T> {
    type Output = Poly<T>;
    fn mul(self, o: &Poly<T>) -> Poly<T> {
        if self.is_zero() || o.is_zero() {
            return Poly::zero();
        }
        let mut r = vec![T::zero(); self.coeffs.len() + o.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in o.coeffs.iter().enumerate() {
                r[i + j] = r[i + j].clone() + a.clone() * b.clone();
            }
        }
        Poly::new(r)
    }
}

impl<T: Coeff> Neg for &Poly<T> {
    type Output = Poly<T>;
    fn neg(self) -> Poly<T> {
        Poly::new(self.coeffs.iter().map(|c| -c.clone()).collect())
    }
}

impl RatPoly {
    pub fn from_int(p: &IntPoly) -> Self {
        p.map(|c| BigRational::from_integer(c.clone()))
    }

    /// Quotient and remainder over Q.
    pub fn div_rem(&self, d: &RatPoly) -> Result<(RatPoly, RatPoly)> {
        let dd = d.degree().ok_or_else(|| invalid!("division by zero polynomial"))?;
        let lead_inv = d.lead().recip();
        let mut r = self.coeffs.clone();
        let mut q = vec![BigRational::zero(); r.len().saturating_sub(dd)];
        while r.len() > dd {
            let top = r.len() - 1;
            let c = r[top].clone() * lead_inv.clone();
            if !c.is_zero() {
                for (j, dj) in d.coeffs.iter().enumerate() {
                    let idx = top - dd + j;
                    r[idx] = r[idx].clone() - c.clone() * dj.clone();
                }
            }
            q[top - dd] = c;
            r.pop();
        }
        Ok((Poly::new(q), Poly::new(r)))
    }

    pub fn rem(&self, d: &RatPoly) -> Result<RatPoly> {
        Ok(self.div_rem(d)?.1)
    }

    /// Inverse of `self` modulo `m`, if the two are coprime.
    pub fn inverse_mod(&self, m: &RatPoly) -> Result<RatPoly> {
        let (mut r0, mut r1) = (m.clone(), self.rem(m)?);
        let (mut t0, mut t1) = (RatPoly::zero(), RatPoly::monomial(0, BigRational::one()));
        while !r1.is_zero() {
            let (q, r) = r0.div_rem(&r1)?;
            let t = &t0 - &(&q * &t1);
            r0 = r1;
            r1 = r;
            t0 = t1;
            t1 = t;
        }
        if r0.degree() != Some(0) {
            return Err(invalid!("polynomials are not coprime"));
        }
        let inv = r0.lead().recip();
        t0.scale(&inv).rem(m)
    }

    /// Nearest-float image.
    pub fn to_complex(&self) -> ComplexPoly {
        self.map(|c| Complex64::new(rat_to_f64(c), 0.0))
    }
}

pub fn rat_to_f64(r: &BigRational) -> f64 {
    r.to_f64().unwrap_or_else(|| {
        let n = r.numer().to_f64().unwrap_or(f64::NAN);
        let d = r.denom().to_f64().unwrap_or(f64::NAN);
        n / d
    })
}

fn mobius(n: u64) -> i32 {
    let f = crate::ntheory::factorize(n).expect("n > 0");
    if f.iter().any(|&(_, e)| e > 1) {
        0
    } else if f.len() % 2 == 0 {
        1
    } else {
        -1
    }
}

/// Coefficients of the n-th cyclotomic polynomial as machine integers.
pub fn cyclotomic_i64(n: u64) -> Result<Vec<i64>> {
    if n == 0 {
        return Err(invalid!("cyclotomic index must be positive"));
    }
    // prod_{d|n} (Z^d - 1)^mu(n/d); multiply first, then divide exactly.
    let ds = divisors(n);
    let deg = crate::ntheory::totient(n) as usize;
    let len: usize = 1 + ds.iter().filter(|&&d| mobius(n / d) == 1).map(|&d| d as usize).sum::<usize>();
    let mut p = vec![0i128; len];
    p[0] = 1;
    for &d in &ds {
        if mobius(n / d) == 1 {
            let d = d as usize;
            for i in (0..len).rev() {
                let lower = if i >= d { p[i - d] } else { 0 };
                p[i] = lower - p[i];
            }
        }
    }
    for &d in &ds {
        if mobius(n / d) == -1 {
            // divide by (Z^d - 1): q[i] = q[i-d] - p[i]
            let d = d as usize;
            let mut q = vec![0i128; len];
            for i in 0..len {
                let prev = if i >= d { q[i - d] } else { 0 };
                q[i] = prev - p[i];
            }
            p = q;
        }
    }
    p.truncate(deg + 1);
    let p: Vec<i64> = p
        .into_iter()
        .map(|c| i64::try_from(c).map_err(|_| invalid!("cyclotomic coefficient overflow for n = {n}")))
        .collect::<Result<_>>()?;
    debug_assert_eq!(p[deg], 1);
    Ok(p)
}

/// The n-th cyclotomic polynomial.
pub fn cyclotomic(n: u64) -> Result<IntPoly> {
    Ok(IntPoly::from_i64s(&cyclotomic_i64(n)?))
}

/// Cyclotomic polynomial in any coefficient ring.
pub fn cyclotomic_in<T: Coeff>(n: u64) -> Result<Poly<T>> {
    Ok(Poly::from_i64s(&cyclotomic_i64(n)?))
}

/// Reduce `a` modulo the n-th cyclotomic polynomial.
pub fn poly_mod<T: Coeff>(a: &Poly<T>, n: u64) -> Result<Poly<T>> {
    a.rem_monic(&cyclotomic_in(n)?)
}

/// `Z^j mod P_n` for `j < len`, each as a vector of length phi(n).
pub fn reduction_table(n: u64, len: usize) -> Result<Vec<Vec<i64>>> {
    let p = cyclotomic_i64(n)?;
    let deg = p.len() - 1;
    let mut out = Vec::with_capacity(len);
    let mut cur = vec![0i64; deg.max(1)];
    if deg == 0 {
        return Err(invalid!("degree zero modulus"));
    }
    cur[0] = 1;
    for _ in 0..len {
        out.push(cur.clone());
        // multiply by Z and reduce
        let top = cur[deg - 1];
        for i in (1..deg).rev() {
            cur[i] = cur[i - 1] - top * p[i];
        }
        cur[0] = -top * p[0];
    }
    Ok(out)
}

/// CRT reconstruction over Q[Z]: the unique polynomial of degree below
/// `deg(prod moduli)` with the given residues. Moduli must be pairwise coprime.
pub fn crt_poly_reconstruct(residues: &[RatPoly], moduli: &[RatPoly]) -> Result<RatPoly> {
    if residues.len() != moduli.len() || moduli.is_empty() {
        return Err(invalid!("residue and modulus lists must be non-empty and equally long"));
    }
    let mut prod = RatPoly::monomial(0, BigRational::one());
    for m in moduli {
        prod = &prod * m;
    }
    let mut acc = RatPoly::zero();
    for (r, m) in residues.iter().zip(moduli) {
        let co = prod.div_rem(m)?.0;
        let inv = co.inverse_mod(m)?;
        let term = &(&r.rem(m)? * &inv).rem(m)? * &co;
        acc = &acc + &term;
    }
    acc.rem(&prod)
}

/// True when every coefficient is an integer.
pub fn is_integral(p: &RatPoly) -> bool {
    p.coeffs().iter().all(|c| c.is_integer())
}

pub fn to_int_poly(p: &RatPoly) -> Option<IntPoly> {
    is_integral(p).then(|| p.map(|c| c.to_integer()))
}

/// Largest absolute coefficient (0 for the zero polynomial).
pub fn max_abs_int(p: &IntPoly) -> BigInt {
    p.coeffs().iter().map(|c| c.abs()).max().unwrap_or_else(BigInt::zero)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ntheory::totient;

    #[test]
    fn small_cyclotomics() {
        assert_eq!(cyclotomic_i64(1).unwrap(), [-1, 1]);
        assert_eq!(cyclotomic_i64(2).unwrap(), [1, 1]);
        assert_eq!(cyclotomic_i64(3).unwrap(), [1, 1, 1]);
        assert_eq!(cyclotomic_i64(4).unwrap(), [1, 0, 1]);
        assert_eq!(cyclotomic_i64(6).unwrap(), [1, -1, 1]);
        assert_eq!(cyclotomic_i64(8).unwrap(), [1, 0, 0, 0, 1]);
        assert_eq!(cyclotomic_i64(9).unwrap(), [1, 0, 0, 1, 0, 0, 1]);
        assert_eq!(cyclotomic_i64(12).unwrap(), [1, 0, -1, 0, 1]);
        let p105 = cyclotomic_i64(105).unwrap();
        assert_eq!(p105[7], -2);
    }

    #[test]
    fn divisor_product_identity() {
        for n in 1..=60u64 {
            let mut prod = IntPoly::from_i64s(&[1]);
            for d in divisors(n) {
                prod = &prod * &cyclotomic(d).unwrap();
            }
            let mut expect = vec![0i64; n as usize + 1];
            expect[0] = -1;
            expect[n as usize] = 1;
            assert_eq!(prod, IntPoly::from_i64s(&expect), "n = {n}");
            assert_eq!(cyclotomic(n).unwrap().degree(), Some(totient(n) as usize));
        }
    }

    #[test]
    fn reduction_table_matches_rem() {
        let t = reduction_table(9, 20).unwrap();
        for (j, row) in t.iter().enumerate() {
            let z = IntPoly::monomial(j, BigInt::one());
            let r = poly_mod(&z, 9).unwrap();
            let want: Vec<i64> = r.padded(6).iter().map(|c| c.to_i64().unwrap()).collect();
            assert_eq!(row, &want);
        }
    }

    #[test]
    fn crt_roundtrip() {
        let m: Vec<RatPoly> = [1u64, 2, 3, 6].iter().map(|&d| RatPoly::from_int(&cyclotomic(d).unwrap())).collect();
        let x = RatPoly::from_i64s(&[3, -1, 4, 1, -5, 9]);
        let res: Vec<RatPoly> = m.iter().map(|mi| x.rem(mi).unwrap()).collect();
        assert_eq!(crt_poly_reconstruct(&res, &m).unwrap(), x);
    }

    #[test]
    fn inverse_mod_works() {
        let p3 = RatPoly::from_int(&cyclotomic(3).unwrap());
        let a = RatPoly::from_i64s(&[-1, 1]);
        let inv = a.inverse_mod(&p3).unwrap();
        let one = (&a * &inv).rem(&p3).unwrap();
        assert_eq!(one, RatPoly::from_i64s(&[1]));
    }
}
