//! Plan execution, the naive DFT oracle and accuracy measurement.

use alloc::string::String;
use alloc::vec::Vec;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{invalid, Result};
use crate::ntheory::gcd;
use crate::planner::Plan;

/// `W_N^k = exp(-2 pi i k / N)` from the reduced fraction `k/N`.
pub fn twiddle(n: u64, k: u64) -> Complex64 {
    let n = n.max(1);
    let k = k % n;
    if k == 0 {
        return Complex64::new(1.0, 0.0);
    }
    let g = gcd(k, n);
    let (k, n) = (k / g, n / g);
    match (k, n) {
        (1, 2) => return Complex64::new(-1.0, 0.0),
        (1, 4) => return Complex64::new(0.0, -1.0),
        (3, 4) => return Complex64::new(0.0, 1.0),
        _ => {}
    }
    // signed numerator in (-n/2, n/2]
    let num = if 2 * k > n { k as f64 - n as f64 } else { k as f64 };
    let angle = -2.0 * core::f64::consts::PI * num / n as f64;
    Complex64::new(libm::cos(angle), libm::sin(angle))
}

/// `O(N^2)` definition formula with a shared twiddle table.
pub fn naive_dft(x: &[Complex64]) -> Vec<Complex64> {
    let n = x.len();
    let w: Vec<Complex64> = (0..n as u64).map(|k| twiddle(n as u64, k)).collect();
    (0..n)
        .map(|k| {
            let mut acc = Complex64::new(0.0, 0.0);
            let mut idx = 0usize;
            for &xv in x {
                acc += xv * w[idx];
                idx += k;
                if idx >= n {
                    idx -= n;
                }
            }
            acc
        })
        .collect()
}

/// Direct cyclic convolution (oracle for the Rader path).
pub fn cyclic_convolution(a: &[Complex64], b: &[Complex64]) -> Vec<Complex64> {
    let n = a.len();
    (0..n)
        .map(|k| (0..n).map(|i| a[i] * b[(k + n - i) % n]).sum())
        .collect()
}

/// Length and finiteness checks shared by every entry point.
pub fn check_input(plan: &Plan, x: &[Complex64]) -> Result<()> {
    if x.len() != plan.size() {
        return Err(invalid!("signal has {} samples, plan size is {}", x.len(), plan.size()));
    }
    if let Some(i) = x.iter().position(|v| !v.re.is_finite() || !v.im.is_finite()) {
        return Err(invalid!("sample {i} is not finite"));
    }
    Ok(())
}

/// Forward DFT through a compiled plan.
pub fn execute(plan: &Plan, x: &[Complex64]) -> Result<Vec<Complex64>> {
    check_input(plan, x)?;
    Ok(plan.forward(x))
}

/// Inverse DFT by conjugation: `conj(F(conj(X))) / N`.
pub fn execute_inverse(plan: &Plan, y: &[Complex64]) -> Result<Vec<Complex64>> {
    check_input(plan, y)?;
    let c: Vec<Complex64> = y.iter().map(|v| v.conj()).collect();
    let s = 1.0 / plan.size() as f64;
    Ok(plan.forward(&c).into_iter().map(|v| v.conj() * s).collect())
}

/// `||a - b|| / ||b||`; zero when both vanish.
pub fn relative_l2(a: &[Complex64], b: &[Complex64]) -> f64 {
    let num: f64 = a.iter().zip(b).map(|(x, y)| (x - y).norm_sqr()).sum();
    let den: f64 = b.iter().map(|v| v.norm_sqr()).sum();
    if num == 0.0 {
        0.0
    } else {
        libm::sqrt(num / den)
    }
}

pub fn max_abs_error(a: &[Complex64], b: &[Complex64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y).norm()).fold(0.0, f64::max)
}

/// Seeded signal with components uniform in `[-1, 1)`.
pub fn random_signal(n: usize, rng: &mut impl Rng) -> Vec<Complex64> {
    (0..n).map(|_| Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))).collect()
}

#[derive(Debug, Clone, PartialEq)]
pub struct AccuracyReport {
    pub n: usize,
    pub plan_id: String,
    /// `seed=<s> trials=<t>` or a file name
    pub input: String,
    pub rel_l2: f64,
    pub max_abs: f64,
}

/// Worst errors against the naive DFT over seeded random trials.
pub fn verify(plan: &Plan, trials: usize, seed: u64) -> AccuracyReport {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let (mut rel, mut abs) = (0.0f64, 0.0f64);
    for _ in 0..trials {
        let x = random_signal(plan.size(), &mut rng);
        let y = plan.forward(&x);
        let r = naive_dft(&x);
        rel = rel.max(relative_l2(&y, &r));
        abs = abs.max(max_abs_error(&y, &r));
    }
    AccuracyReport {
        n: plan.size(),
        plan_id: plan.id(),
        input: alloc::format!("seed={seed} trials={trials}"),
        rel_l2: rel,
        max_abs: abs,
    }
}

/// Error of one given signal against the naive DFT.
pub fn verify_signal(plan: &Plan, x: &[Complex64], label: &str) -> Result<AccuracyReport> {
    let y = execute(plan, x)?;
    let r = naive_dft(x);
    Ok(AccuracyReport {
        n: plan.size(),
        plan_id: plan.id(),
        input: String::from(label),
        rel_l2: relative_l2(&y, &r),
        max_abs: max_abs_error(&y, &r),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::planner::{build_plan, Policy};

    #[test]
    fn naive_examples() {
        let c = |r: f64, i: f64| Complex64::new(r, i);
        let y = naive_dft(&[c(1.0, 0.0), c(2.0, 0.0), c(3.0, 0.0), c(4.0, 0.0)]);
        let want = [c(10.0, 0.0), c(-2.0, 2.0), c(-2.0, 0.0), c(-2.0, -2.0)];
        for (a, b) in y.iter().zip(&want) {
            assert!((a - b).norm() < 1e-12);
        }
        assert_eq!(naive_dft(&[c(3.0, 1.0)]), [c(3.0, 1.0)]);
    }

    #[test]
    fn execute_examples() {
        let p = build_plan(24, Policy::Auto).unwrap();
        let mut e0 = alloc::vec![Complex64::new(0.0, 0.0); 24];
        e0[0] = Complex64::new(1.0, 0.0);
        let y = execute(&p, &e0).unwrap();
        assert!(y.iter().all(|v| (v - Complex64::new(1.0, 0.0)).norm() < 1e-13));
        let ones = alloc::vec![Complex64::new(1.0, 0.0); 24];
        let y = execute(&p, &ones).unwrap();
        assert!((y[0] - Complex64::new(24.0, 0.0)).norm() < 1e-12);
        assert!(y[1..].iter().all(|v| v.norm() < 1e-12));
        let back = execute_inverse(&p, &y).unwrap();
        assert!(relative_l2(&back, &ones) < 1e-14);
        assert!(execute(&p, &ones[1..]).is_err());
        let mut bad = ones.clone();
        bad[3].re = f64::NAN;
        assert!(execute(&p, &bad).is_err());
    }

    #[test]
    fn verify_is_reproducible() {
        let p = build_plan(120, Policy::Auto).unwrap();
        let a = verify(&p, 20, 7);
        assert!(a.rel_l2 < 1e-11);
        assert_eq!(a, verify(&p, 20, 7));
        let one = verify(&build_plan(1, Policy::Auto).unwrap(), 5, 1);
        assert_eq!(one.rel_l2, 0.0);
    }
}
