//! Primes of the form `1 + 2^{s_1} p_2^{s_2} ... p_m^{s_m}` grouped by rank,
//! the `2^i 3^j + 1` primality map and the `N_max` growth series.

use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use num_bigint::BigUint;
use num_traits::{One, ToPrimitive, Zero};

use crate::error::{invalid, Result};
use crate::ntheory::{is_prime_big, log2_bigproduct};

/// Prime basis of a family: `{2}`, `{2,3}`, `{2,3,5}` or `{2,3,5,7}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FamilyClass(u8);

const BASIS: [u64; 4] = [2, 3, 5, 7];

/// Fermat primes; the `{2}` family is taken to be exactly these.
pub const FERMAT_PRIMES: [u64; 5] = [3, 5, 17, 257, 65537];

impl FamilyClass {
    pub const Q2: FamilyClass = FamilyClass(1);
    pub const Q23: FamilyClass = FamilyClass(2);
    pub const Q235: FamilyClass = FamilyClass(3);
    pub const Q2357: FamilyClass = FamilyClass(4);

    pub fn new(m: u8) -> Result<FamilyClass> {
        if (1..=4).contains(&m) {
            Ok(FamilyClass(m))
        } else {
            Err(invalid!("family class must be 1..=4, got {m}"))
        }
    }
    pub fn m(self) -> u8 {
        self.0
    }
    pub fn basis(self) -> &'static [u64] {
        &BASIS[..self.0 as usize]
    }
    pub fn name(self) -> String {
        let mut s = String::from("q");
        for p in self.basis() {
            s.push_str(&alloc::format!("{p}"));
        }
        s
    }
    pub fn from_name(s: &str) -> Option<FamilyClass> {
        (1..=4).map(FamilyClass).find(|c| c.name() == s)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PrimeFamilyRecord {
    pub class: FamilyClass,
    /// exponent of each basis prime
    pub exponents: Vec<u32>,
    pub value: BigUint,
    /// smallest `u` with `s_1 <= u + 1` and `s_i <= u`
    pub rank: u32,
}

/// Minimal rank admitting an exponent vector.
pub fn minimal_rank(exponents: &[u32]) -> u32 {
    let mut r = exponents.first().map_or(0, |&s1| s1.saturating_sub(1));
    for &s in &exponents[1.min(exponents.len())..] {
        r = r.max(s);
    }
    r
}

fn family_value(basis: &[u64], exps: &[u32]) -> BigUint {
    let mut v = BigUint::one();
    for (&p, &e) in basis.iter().zip(exps) {
        v *= BigUint::from(p).pow(e);
    }
    v + 1u32
}

/// All family primes of rank at most `u_max`, sorted by value.
pub fn enumerate_family(class: FamilyClass, u_max: u32) -> Vec<PrimeFamilyRecord> {
    enumerate_family_with(class, u_max, &mut |v| is_prime_big(v))
}

/// As [`enumerate_family`] with a caller-supplied primality test (for caching).
pub fn enumerate_family_with(
    class: FamilyClass,
    u_max: u32,
    is_prime: &mut dyn FnMut(&BigUint) -> bool,
) -> Vec<PrimeFamilyRecord> {
    let mut out = Vec::new();
    if class == FamilyClass::Q2 {
        for f in FERMAT_PRIMES {
            let s1 = (f - 1).trailing_zeros();
            let exponents = vec![s1];
            let rank = minimal_rank(&exponents);
            if rank <= u_max {
                out.push(PrimeFamilyRecord { class, exponents, value: BigUint::from(f), rank });
            }
        }
        return out;
    }
    let basis = class.basis();
    let k = basis.len();
    // odometer over s_1 in 1..=u+1, s_i in 0..=u
    let mut e = vec![0u32; k];
    e[0] = 1;
    loop {
        let value = family_value(basis, &e);
        if is_prime(&value) {
            out.push(PrimeFamilyRecord { class, exponents: e.clone(), value, rank: minimal_rank(&e) });
        }
        let mut i = 0;
        loop {
            if i == k {
                out.sort_by(|a, b| a.value.cmp(&b.value));
                return out;
            }
            let lim = if i == 0 { u_max + 1 } else { u_max };
            if e[i] < lim {
                e[i] += 1;
                break;
            }
            e[i] = if i == 0 { 1 } else { 0 };
            i += 1;
        }
    }
}

/// One cell of the `2^i 3^j + 1` map.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Fig1Cell {
    pub i: u32,
    pub j: u32,
    pub value: BigUint,
    pub is_prime: bool,
}

/// Primality of `2^i 3^j + 1` for `1 <= i <= i_max`, `0 <= j <= j_max`,
/// row-major in `i`.
pub fn fig1_map(i_max: u32, j_max: u32) -> Vec<Fig1Cell> {
    let mut out = Vec::new();
    for i in 1..=i_max {
        for j in 0..=j_max {
            let value = family_value(&[2, 3], &[i, j]);
            let is_prime = is_prime_big(&value);
            out.push(Fig1Cell { i, j, value, is_prime });
        }
    }
    out
}

/// Primes of the map whose minimal rank is exactly `u`.
pub fn fig1_frontier(u: u32) -> Vec<Fig1Cell> {
    fig1_map(u + 1, u).into_iter().filter(|c| c.is_prime && minimal_rank(&[c.i, c.j]) == u).collect()
}

/// Text rendering: one line per `i`, `Y` for prime and `n` otherwise.
pub fn fig1_ascii(cells: &[Fig1Cell]) -> String {
    let mut s = String::new();
    let mut row = None;
    for c in cells {
        if row != Some(c.i) {
            if row.is_some() {
                s.push('\n');
            }
            s.push_str(&alloc::format!("{:>3} ", c.i));
            row = Some(c.i);
        }
        s.push(if c.is_prime { 'Y' } else { 'n' });
    }
    if row.is_some() {
        s.push('\n');
    }
    s
}

/// `log2` of a big integer, accurate to double precision.
pub fn log2_big(v: &BigUint) -> f64 {
    if v.is_zero() {
        return f64::NEG_INFINITY;
    }
    let bits = v.bits();
    if bits <= 64 {
        return libm::log2(v.to_u64().unwrap() as f64);
    }
    let shift = bits - 64;
    let top = (v >> shift).to_u64().unwrap();
    libm::log2(top as f64) + shift as f64
}

#[derive(Debug, Clone, PartialEq)]
pub struct RankSummary {
    pub u: u32,
    pub new_primes: Vec<BigUint>,
    /// family primes of rank at most `u`
    pub cumulative: usize,
    /// prime-power factors `2^{u+3}` and `p^{u+1}`
    pub extras: Vec<(u64, u64)>,
    pub log2_nmax: f64,
    pub mmax_bound: Option<BigUint>,
    /// growth reference `4u^2`, `6u^3` or `10u^4`
    pub reference: Option<f64>,
}

/// Reference growth curve for a class.
pub fn reference_curve(class: FamilyClass, u: u32) -> Option<f64> {
    let u = u as f64;
    match class.m() {
        2 => Some(4.0 * u * u),
        3 => Some(6.0 * u * u * u),
        4 => Some(10.0 * u * u * u * u),
        _ => None,
    }
}

/// `N_max` per rank: all family primes of rank `<= u` times the extras
/// `2^{u+3}` and `p_i^{u+1}`; a family prime already inside an extra is
/// counted once, at the extra's power.
pub fn nmax_series(class: FamilyClass, u_max: u32) -> Vec<RankSummary> {
    nmax_series_with(class, u_max, &mut |v| is_prime_big(v))
}

pub fn nmax_series_with(
    class: FamilyClass,
    u_max: u32,
    is_prime: &mut dyn FnMut(&BigUint) -> bool,
) -> Vec<RankSummary> {
    let recs = enumerate_family_with(class, u_max, is_prime);
    let basis: Vec<BigUint> = class.basis().iter().map(|&p| BigUint::from(p)).collect();
    let mut out = Vec::new();
    for u in 0..=u_max {
        let mut extras = vec![(2u64, u as u64 + 3)];
        extras.extend(class.basis()[1..].iter().map(|&p| (p, u as u64 + 1)));
        let mut terms: Vec<f64> = vec![log2_bigproduct(&extras)];
        let mut cumulative = 0;
        let mut new_primes = Vec::new();
        for r in recs.iter().filter(|r| r.rank <= u) {
            cumulative += 1;
            if r.rank == u {
                new_primes.push(r.value.clone());
            }
            if !basis.contains(&r.value) {
                terms.push(log2_big(&r.value));
            }
        }
        out.push(RankSummary {
            u,
            new_primes,
            cumulative,
            extras,
            log2_nmax: neumaier(&terms),
            mmax_bound: mmax_class_bound(class, u).ok(),
            reference: reference_curve(class, u),
        });
    }
    out
}

fn neumaier(v: &[f64]) -> f64 {
    let (mut s, mut c) = (0.0f64, 0.0f64);
    for &x in v {
        let t = s + x;
        c += if libm::fabs(s) >= libm::fabs(x) { (s - t) + x } else { (x - t) + s };
        s = t;
    }
    s + c
}

/// Upper bound on `M_max` for a class at rank `u`: `(2/3) 6^u`,
/// `(8/15) 30^u` or `(48/105) 105^u`; 1 at `u = 0`.
pub fn mmax_class_bound(class: FamilyClass, u: u32) -> Result<BigUint> {
    let (num, den, base) = match class.m() {
        2 => (2u32, 3u32, 6u32),
        3 => (8, 15, 30),
        4 => (48, 105, 105),
        m => return Err(invalid!("no M_max bound for class {m}")),
    };
    if u == 0 {
        return Ok(BigUint::one());
    }
    Ok(BigUint::from(base).pow(u) * num / den)
}

#[derive(Debug, Clone, PartialEq)]
pub struct DensityReport {
    pub candidates: usize,
    /// `sum 1 / ln v` over the candidates
    pub estimate: f64,
    pub actual: usize,
    /// `actual / estimate`, 0 when the estimate is 0
    pub ratio: f64,
}

/// Compare the heuristic `sum 1/ln v` with the true prime count of a series.
pub fn density_diagnostic(series: &[BigUint]) -> Result<DensityReport> {
    if series.is_empty() {
        return Err(invalid!("empty series"));
    }
    let mut estimate = 0.0;
    let mut actual = 0;
    for v in series {
        if *v >= BigUint::from(2u32) {
            estimate += 1.0 / (log2_big(v) * core::f64::consts::LN_2);
        }
        if is_prime_big(v) {
            actual += 1;
        }
    }
    let ratio = if estimate > 0.0 { actual as f64 / estimate } else { 0.0 };
    Ok(DensityReport { candidates: series.len(), estimate, actual, ratio })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn vals(r: &[PrimeFamilyRecord]) -> Vec<u64> {
        r.iter().map(|x| x.value.to_u64().unwrap()).collect()
    }

    #[test]
    fn families() {
        assert_eq!(vals(&enumerate_family(FamilyClass::Q23, 1)), [3, 5, 7, 13]);
        assert_eq!(vals(&enumerate_family(FamilyClass::Q2, 0)), [3]);
        assert_eq!(vals(&enumerate_family(FamilyClass::Q2, 64)), FERMAT_PRIMES);
        let q235 = vals(&enumerate_family(FamilyClass::Q235, 1));
        for p in [11, 31, 61] {
            assert!(q235.contains(&p));
        }
    }

    #[test]
    fn frontier() {
        let f = fig1_frontier(10);
        let v: Vec<(u32, u32)> = f.iter().map(|c| (c.i, c.j)).collect();
        assert_eq!(v, [(3, 10), (11, 2), (11, 6), (11, 10)]);
        assert_eq!(f[0].value, BigUint::from(472393u32));
    }

    #[test]
    fn nmax() {
        let s = nmax_series(FamilyClass::Q23, 64);
        assert!((s[0].log2_nmax - libm::log2(24.0)).abs() < 1e-12);
        assert!((s[64].log2_nmax - 16582.2).abs() <= 2.0, "{}", s[64].log2_nmax);
        assert!(s.windows(2).all(|w| w[1].log2_nmax > w[0].log2_nmax));
    }

    #[test]
    fn bounds_and_density() {
        assert_eq!(mmax_class_bound(FamilyClass::Q23, 1).unwrap(), BigUint::from(4u32));
        assert_eq!(mmax_class_bound(FamilyClass::Q235, 1).unwrap(), BigUint::from(16u32));
        assert_eq!(mmax_class_bound(FamilyClass::Q23, 2).unwrap(), BigUint::from(24u32));
        assert_eq!(mmax_class_bound(FamilyClass::Q23, 0).unwrap(), BigUint::one());
        let series: Vec<BigUint> = (0..=10).map(|j| family_value(&[2, 3], &[11, j])).collect();
        assert_eq!(density_diagnostic(&series).unwrap().actual, 3);
        let d = density_diagnostic(&[BigUint::from(3u32)]).unwrap();
        assert!((d.estimate - 0.910).abs() < 1e-3);
        assert_eq!(d.actual, 1);
        let evens: Vec<BigUint> = (2..20u32).map(|k| BigUint::from(2 * k)).collect();
        assert_eq!(density_diagnostic(&evens).unwrap().actual, 0);
    }
}
