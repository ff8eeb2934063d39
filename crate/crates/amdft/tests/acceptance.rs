//! Acceptance checks, one PASS/FAIL line each. Runs without the libtest
//! harness so the lines always reach the console.

use std::time::Instant;

use amdft::cache::PrimalityCache;
use amdft_core::atlas::{enumerate_family, fig1_frontier, nmax_series_with, FamilyClass};
use amdft_core::engine::verify;
use amdft_core::ntheory::totient;
use amdft_core::opcount::{asymptotic_coeff, count, mu_and_am, saldo, theorem1_bound, yardstick, TABLE_I};
use amdft_core::planner::{build_plan, m_max, Policy};
use amdft_core::polyprod::*;
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Check = Result<String, String>;

const CORRECTNESS_SIZES: [u64; 17] = [1, 3, 5, 7, 13, 15, 24, 35, 45, 48, 63, 120, 240, 504, 1008, 2520, 5040];

fn correctness() -> Check {
    let t = Instant::now();
    let mut worst = 0.0f64;
    let mut built = 0;
    for n in CORRECTNESS_SIZES {
        let plan = build_plan(n, Policy::Auto).map_err(|e| format!("N={n}: {e}"))?;
        let r = verify(&plan, 50, n);
        if r.rel_l2 >= 1e-10 {
            return Err(format!("N={n}: rel_l2 {:e}", r.rel_l2));
        }
        worst = worst.max(r.rel_l2);
        built += 1;
    }
    let secs = t.elapsed().as_secs_f64();
    if secs >= 60.0 {
        return Err(format!("took {secs:.1} s"));
    }
    Ok(format!("{built} sizes x 50 trials, worst rel_l2 {worst:.1e}, {secs:.1} s"))
}

fn table_counts() -> Check {
    let mut notes = Vec::new();
    for (n, m, a) in [(24, 36, 252), (48, 92, 636), (120, 276, 2076), (240, 596, 4836), (504, 1380, 13532)] {
        let c = count(&build_plan(n, Policy::Auto).map_err(|e| e.to_string())?);
        let mult_ok = if n == 504 { (c.real_mults as f64 - m as f64).abs() <= 0.05 * m as f64 } else { c.real_mults == m };
        let add_dev = (c.real_adds as f64 - a as f64) / a as f64;
        if !mult_ok || add_dev.abs() > 0.05 {
            let stages: Vec<String> = c.breakdown.iter().map(|(k, o)| format!("{k}={}/{}", o.mults, o.adds)).collect();
            return Err(format!("N={n}: {}/{} vs {m}/{a}; {}", c.real_mults, c.real_adds, stages.join(" ")));
        }
        notes.push(format!("{n}:{}/{}({:+.1}%)", c.real_mults, c.real_adds, 100.0 * add_dev));
    }
    Ok(notes.join(" "))
}

fn yardstick_rows() -> Check {
    for r in &TABLE_I {
        let (m, a) = yardstick(r.0).map_err(|e| e.to_string())?;
        if (m, a) != (r.4, r.5) {
            return Err(format!("N={}: {m}/{a} vs {}/{}", r.0, r.4, r.5));
        }
        let s = saldo(r.2, r.3, r.4, r.5);
        if (s - r.6).abs() > 0.01 {
            return Err(format!("N={}: saldo {s:.3} vs {}", r.0, r.6));
        }
    }
    Ok(format!("{} rows exact, saldo within 0.01", TABLE_I.len()))
}

fn bounds() -> Check {
    let b = (theorem1_bound(65520).map_err(|e| e.to_string())?, theorem1_bound(504).map_err(|e| e.to_string())?);
    if b != (217556, 1380) {
        return Err(format!("got {b:?}"));
    }
    let mut sizes: Vec<u64> = CORRECTNESS_SIZES.to_vec();
    sizes.extend([840, 1680, 16, 17, 32, 64, 2040]);
    for n in sizes {
        let plan = build_plan(n, Policy::Auto).map_err(|e| e.to_string())?;
        let (bound, m) = (theorem1_bound(n).unwrap(), count(&plan).real_mults);
        if bound > m {
            return Err(format!("N={n}: bound {bound} > counted {m}"));
        }
    }
    Ok("217556 at 65520, 1380 at 504, below every counted plan".into())
}

fn mmax() -> Check {
    let t = Instant::now();
    let v = (m_max(56653).map_err(|e| e.to_string())?, m_max(3455833).map_err(|e| e.to_string())?);
    let secs = t.elapsed().as_secs_f64();
    if v != (1152, 1152) || secs >= 1.0 {
        return Err(format!("got {v:?} in {secs:.3} s"));
    }
    Ok(format!("1152 and 1152 in {:.1} ms", secs * 1e3))
}

fn operands(rng: &mut ChaCha8Rng, len: usize) -> Vec<Complex64> {
    (0..len).map(|_| Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))).collect()
}

fn close(y: &[Complex64], r: &[Complex64]) -> bool {
    y.len() == r.len() && y.iter().zip(r).all(|(p, q)| (p - q).norm() <= 1e-10)
}

fn engines() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let one_d = [3u64, 4, 5, 7, 8, 9, 13, 16];
    for n in one_d {
        let phi = totient(n) as usize;
        for _ in 0..50 {
            let (a, b) = (operands(&mut rng, phi), operands(&mut rng, phi));
            let r = ring_mul_nd(&[n], &a, &b);
            let ys = [
                product_bilinear(n, &a, &b),
                product_alg1f(n, &a, &b),
                product_alg2(n, &a, &b, alg2_default_size(n)),
            ];
            for (y, name) in ys.into_iter().zip(["bilinear", "alg1f", "alg2"]) {
                if !close(&y.map_err(|e| e.to_string())?, &r) {
                    return Err(format!("{name} disagrees mod P_{n}"));
                }
            }
        }
    }
    let two_d = [(3u64, 3u64), (3, 9), (4, 8), (4, 16), (8, 16), (5, 5), (7, 7), (13, 13)];
    for (n1, n2) in two_d {
        let len = (totient(n1) * totient(n2)) as usize;
        for _ in 0..50 {
            let (a, b) = (operands(&mut rng, len), operands(&mut rng, len));
            let r = ring_mul_nd(&[n1, n2], &a, &b);
            for inner in [StrategyKind::BilinearTable, StrategyKind::Alg1fReducedDft] {
                let y = product_alg3(n1, n2, &a, &b, inner).map_err(|e| e.to_string())?;
                if !close(&y, &r) {
                    return Err(format!("alg3/{} disagrees mod P_{n1} P_{n2}", inner.name()));
                }
            }
            let e = BlockEngine::new(&[n1, n2], &b, ProductStrategy::alg3(StrategyKind::BilinearTable)).unwrap();
            if e.cost().transforms.mults != 0 {
                return Err(format!("transform stages of ({n1}, {n2}) multiply"));
            }
        }
    }
    let plan = build_plan(5040, Policy::PtransformMax).map_err(|e| e.to_string())?;
    if let Some(b) = plan.blocks().iter().find(|b| b.engine.cost().transforms.mults != 0) {
        return Err(format!("block {:?} of 5040 has multiplying transform stages", b.indices));
    }
    Ok(format!("{} moduli and {} index pairs x 50 operand pairs; transform stages 0 mults", one_d.len(), two_d.len()))
}

fn atlas() -> Check {
    let frontier: Vec<String> = fig1_frontier(10).iter().filter(|c| c.is_prime).map(|c| c.value.to_string()).collect();
    if frontier != ["472393", "18433", "1492993", "120932353"] {
        return Err(format!("frontier {frontier:?}"));
    }
    let small: Vec<String> = enumerate_family(FamilyClass::Q23, 1).iter().map(|r| r.value.to_string()).collect();
    if small != ["3", "5", "7", "13"] {
        return Err(format!("rank 1 family {small:?}"));
    }
    let t = Instant::now();
    let mut cache = PrimalityCache::memory();
    let series = nmax_series_with(FamilyClass::Q23, 64, &mut |v| cache.is_prime(v));
    let secs = t.elapsed().as_secs_f64();
    let end = series.last().map(|s| s.log2_nmax).unwrap_or(0.0);
    if (end - 16582.2).abs() > 2.0 || secs >= 600.0 {
        return Err(format!("log2 N_max {end:.2} in {secs:.1} s"));
    }
    Ok(format!("frontier {}, log2 N_max(64) = {end:.1} in {secs:.2} s", frontier.join(" ")))
}

fn coefficients() -> Check {
    let mut got = Vec::new();
    for (p, want) in [(2u64, 4.00), (3, 5.89), (5, 7.92), (7, 9.57)] {
        let c = asymptotic_coeff(p).map_err(|e| e.to_string())?;
        if (c - want).abs() > 0.01 {
            return Err(format!("p={p}: {c:.3}"));
        }
        got.push(format!("{c:.2}"));
    }
    Ok(got.join(" "))
}

fn mu() -> Check {
    let (fixture, _) = mu_and_am(262820, 65520).map_err(|e| e.to_string())?;
    if (fixture - 4.011).abs() > 0.001 {
        return Err(format!("fixture mu {fixture:.4}"));
    }
    let note = match build_plan(65520, Policy::Auto) {
        Ok(plan) => {
            let (m, _) = mu_and_am(count(&plan).real_mults, 65520).unwrap();
            let flag = if (m - 4.01).abs() <= 0.005 { "" } else { " (deviates)" };
            format!(", counted {m:.3}{flag}")
        }
        Err(e) => format!(", plan not built: {e}"),
    };
    Ok(format!("fixture {fixture:.3}{note}"))
}

fn main() {
    let checks: [(&str, fn() -> Check); 9] = [
        ("correctness", correctness),
        ("table counts", table_counts),
        ("yardstick", yardstick_rows),
        ("bounds", bounds),
        ("m_max", mmax),
        ("engine equivalence", engines),
        ("prime atlas", atlas),
        ("asymptotic coefficients", coefficients),
        ("mu", mu),
    ];
    let mut failed = 0;
    for (i, (name, f)) in checks.iter().enumerate() {
        match f() {
            Ok(s) => println!("PASS {} {name}: {s}", i + 1),
            Err(s) => {
                failed += 1;
                println!("FAIL {} {name}: {s}", i + 1)
            }
        }
    }
    if failed > 0 {
        eprintln!("{failed} acceptance criteria failed");
        std::process::exit(1);
    }
}
