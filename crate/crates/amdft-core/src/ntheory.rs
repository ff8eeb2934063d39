//! Integer helpers: primality, factorization, totients, primitive roots.

use alloc::vec::Vec;
use num_bigint::BigUint;
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};

use crate::error::{invalid, Result};

pub fn gcd(a: u64, b: u64) -> u64 {
    a.gcd(&b)
}

pub fn lcm(a: u64, b: u64) -> u64 {
    a.lcm(&b)
}

pub fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

pub fn pow_mod(mut b: u64, mut e: u64, m: u64) -> u64 {
    if m == 1 {
        return 0;
    }
    let mut r = 1u64;
    b %= m;
    while e > 0 {
        if e & 1 == 1 {
            r = mul_mod(r, b, m);
        }
        b = mul_mod(b, b, m);
        e >>= 1;
    }
    r
}

/// Inverse of `a` modulo `m`, if it exists.
pub fn inv_mod(a: u64, m: u64) -> Option<u64> {
    let (a, m) = (a as i128 % m as i128, m as i128);
    let ext = a.extended_gcd(&m);
    if ext.gcd != 1 {
        return None;
    }
    Some(ext.x.rem_euclid(m) as u64)
}

const MR_BASES_64: [u64; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];

/// Deterministic Miller-Rabin for 64-bit inputs.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for &p in &MR_BASES_64 {
        if n % p == 0 {
            return n == p;
        }
    }
    let s = (n - 1).trailing_zeros();
    let d = (n - 1) >> s;
    'witness: for &a in &MR_BASES_64 {
        let mut x = pow_mod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

/// Number of Miller-Rabin rounds used above 2^64. The error probability is
/// bounded by 4^-rounds for a composite input.
pub const BIG_MR_ROUNDS: usize = 48;

/// Primality for arbitrary size. Exact below 2^64, probabilistic above with
/// the first [`BIG_MR_ROUNDS`] primes as fixed witnesses.
pub fn is_prime_big(n: &BigUint) -> bool {
    if let Some(small) = n.to_u64() {
        return is_prime(small);
    }
    let witnesses = small_primes(BIG_MR_ROUNDS);
    for &p in witnesses.iter().chain(SIEVE_EXTRA.iter()) {
        if (n % p).is_zero() {
            return false;
        }
    }
    let one = BigUint::one();
    let nm1 = n - &one;
    let s = nm1.trailing_zeros().unwrap_or(0);
    let d = &nm1 >> s;
    'witness: for &a in &witnesses {
        let mut x = BigUint::from(a).modpow(&d, n);
        if x == one || x == nm1 {
            continue;
        }
        for _ in 1..s {
            x = (&x * &x) % n;
            if x == nm1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

const SIEVE_EXTRA: [u64; 8] = [227, 229, 233, 239, 241, 251, 257, 263];

/// The first `k` primes.
pub fn small_primes(k: usize) -> Vec<u64> {
    let mut out = Vec::with_capacity(k);
    let mut c = 2u64;
    while out.len() < k {
        if is_prime(c) {
            out.push(c);
        }
        c += 1;
    }
    out
}

/// Prime factorization as ascending `(prime, exponent)` pairs.
pub fn factorize(mut n: u64) -> Result<Vec<(u64, u32)>> {
    if n == 0 {
        return Err(invalid!("cannot factor 0"));
    }
    let mut out = Vec::new();
    let mut p = 2u64;
    while p.saturating_mul(p) <= n {
        if n % p == 0 {
            let mut e = 0;
            while n % p == 0 {
                n /= p;
                e += 1;
            }
            out.push((p, e));
        }
        p += if p == 2 { 1 } else { 2 };
    }
    if n > 1 {
        out.push((n, 1));
    }
    Ok(out)
}

/// Prime-power components of `n`, ascending by prime.
pub fn prime_power_parts(n: u64) -> Result<Vec<u64>> {
    Ok(factorize(n)?.into_iter().map(|(p, e)| p.pow(e)).collect())
}

pub fn totient(n: u64) -> u64 {
    if n == 0 {
        return 0;
    }
    let mut r = n;
    for (p, _) in factorize(n).expect("n > 0") {
        r = r / p * (p - 1);
    }
    r
}

/// All positive divisors in ascending order.
pub fn divisors(n: u64) -> Vec<u64> {
    let mut out = alloc::vec![1u64];
    if n == 0 {
        return out;
    }
    for (p, e) in factorize(n).expect("n > 0") {
        let len = out.len();
        let mut pk = 1;
        for _ in 0..e {
            pk *= p;
            for i in 0..len {
                out.push(out[i] * pk);
            }
        }
    }
    out.sort_unstable();
    out
}

/// Multiplicative order of `a` modulo `m` (requires gcd(a, m) = 1).
pub fn mult_order(a: u64, m: u64) -> Option<u64> {
    if m == 1 {
        return Some(1);
    }
    if gcd(a, m) != 1 {
        return None;
    }
    let t = totient(m);
    divisors(t).into_iter().find(|&d| pow_mod(a, d, m) == 1)
}

/// Smallest generator of the unit group modulo `m`. The group is cyclic for
/// m = 2, 4, p^k and 2p^k; anything else is rejected.
pub fn primitive_root(m: u64) -> Result<u64> {
    if m < 2 {
        return Err(invalid!("no primitive root modulo {m}"));
    }
    if m <= 4 {
        return Ok(m - 1);
    }
    let f = factorize(m)?;
    let cyclic = match f.as_slice() {
        [(p, _)] => *p != 2,
        [(2, 1), (_, _)] => true,
        _ => false,
    };
    if !cyclic {
        return Err(invalid!("unit group modulo {m} is not cyclic"));
    }
    let t = totient(m);
    let tf = factorize(t)?;
    (2..m)
        .find(|&g| gcd(g, m) == 1 && tf.iter().all(|&(p, _)| pow_mod(g, t / p, m) != 1))
        .ok_or_else(|| invalid!("no primitive root modulo {m}"))
}

/// Base-2 logarithm of `prod base^exp` without forming the product.
/// Uses Neumaier compensated summation.
pub fn log2_bigproduct(factors: &[(u64, u64)]) -> f64 {
    let mut sum = 0.0f64;
    let mut comp = 0.0f64;
    for &(b, e) in factors {
        if b <= 1 || e == 0 {
            continue;
        }
        let term = e as f64 * libm::log2(b as f64);
        let t = sum + term;
        if libm::fabs(sum) >= libm::fabs(term) {
            comp += (sum - t) + term;
        } else {
            comp += (term - t) + sum;
        }
        sum = t;
    }
    sum + comp
}

/// Exact product, handy for cross-checking [`log2_bigproduct`].
pub fn bigproduct(factors: &[(u64, u64)]) -> BigUint {
    let mut r = BigUint::one();
    for &(b, e) in factors {
        r *= BigUint::from(b).pow(e as u32);
    }
    r
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn primes_small() {
        let ps: Vec<u64> = (0..60).filter(|&n| is_prime(n)).collect();
        assert_eq!(ps, [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53, 59]);
        assert!(is_prime(65537));
        assert!(!is_prime(3215031751));
        assert!(is_prime(18446744073709551557));
    }

    #[test]
    fn big_primality() {
        let m127 = (BigUint::one() << 127) - BigUint::one();
        assert!(is_prime_big(&m127));
        let comp = &m127 * BigUint::from(3u32);
        assert!(!is_prime_big(&comp));
        assert!(!is_prime_big(&((BigUint::one() << 128) + BigUint::one())));
    }

    #[test]
    fn roots_and_totients() {
        assert_eq!(primitive_root(7).unwrap(), 3);
        assert_eq!(primitive_root(9).unwrap(), 2);
        assert_eq!(primitive_root(13).unwrap(), 2);
        assert_eq!(primitive_root(17).unwrap(), 3);
        assert!(primitive_root(8).is_err());
        assert_eq!(totient(5040), 1152);
        assert_eq!(divisors(12), [1, 2, 3, 4, 6, 12]);
        assert_eq!(factorize(65520).unwrap(), [(2, 4), (3, 2), (5, 1), (7, 1), (13, 1)]);
        assert_eq!(inv_mod(3, 7), Some(5));
        assert_eq!(mult_order(5, 16), Some(4));
    }

    #[test]
    fn log_product() {
        let f = [(2u64, 67u64), (3, 65), (5, 65)];
        let exact = bigproduct(&f);
        let bits = exact.bits() as f64;
        let l = log2_bigproduct(&f);
        assert!(l <= bits && l > bits - 1.0);
    }
}
