use amdft_core::atlas::{enumerate_family, fig1_map, FamilyClass};
use amdft_core::engine::verify;
use amdft_core::opcount::{count, theorem1_bound};
use amdft_core::planner::{build_plan, m_max, pfa_resplit, Policy};
use num_traits::ToPrimitive;

const Q23: [u64; 10] = [24, 48, 120, 240, 504, 840, 1008, 1680, 2520, 5040];

#[test]
fn auto_never_needs_more_multiplications() {
    for n in Q23 {
        let auto = count(&build_plan(n, Policy::Auto).unwrap());
        let bil = count(&build_plan(n, Policy::Bilinear).unwrap());
        assert!(auto.real_mults <= bil.real_mults, "N={n}");
        assert!(theorem1_bound(n).unwrap() <= auto.real_mults, "N={n}");
    }
}

#[test]
fn partitions_and_transform_stages() {
    for n in [1u64, 6, 35, 504, 1008] {
        for policy in Policy::ALL {
            let p = build_plan(n, policy).unwrap();
            assert_eq!(p.blocks().iter().map(|b| b.size()).sum::<usize>(), n as usize);
            let c = count(&p);
            assert_eq!(c.breakdown["blocks/transforms"].mults, 0);
            assert_eq!(c.breakdown.values().map(|o| o.mults).sum::<u64>(), c.real_mults);
            for s in p.pre_stages().iter().chain(p.post_stages()) {
                assert_eq!(s.op.cost().mults, 0);
            }
        }
    }
}

#[test]
fn m_max_against_products() {
    // M_max never exceeds the product of the block ranks and equals it
    // when the convolution lengths share no factor
    for n in [15u64, 21, 35, 56653, 3455833, 63, 5 * 13] {
        let f = amdft_core::ntheory::factorize(n).unwrap();
        let lens: Vec<u64> = f.iter().map(|&(p, k)| (p - 1) * p.pow(k - 1)).collect();
        let prod: u64 = lens.iter().map(|&l| amdft_core::ntheory::totient(l)).product();
        let m = m_max(n).unwrap();
        assert!(m <= prod);
        assert_eq!(m, pfa_resplit(&lens).unwrap().residual_rank());
    }
}

#[test]
fn larger_sizes_verify() {
    let r = verify(&build_plan(5040, Policy::Auto).unwrap(), 3, 11);
    assert!(r.rel_l2 < 1e-10, "{}", r.rel_l2);
}

fn trial_division(v: u64) -> bool {
    v >= 2 && (2..).take_while(|d| d * d <= v).all(|d| v % d != 0)
}

#[test]
fn fig1_cells_rechecked() {
    for c in fig1_map(11, 10) {
        assert_eq!(c.is_prime, trial_division(c.value.to_u64().unwrap()), "{}", c.value);
    }
}

#[test]
fn family_is_exhaustive() {
    // every prime q with q - 1 = 2^a 3^b inside the rank box shows up
    let u = 6u32;
    let got: Vec<u64> = enumerate_family(FamilyClass::Q23, u).iter().map(|r| r.value.to_u64().unwrap()).collect();
    let limit = 2u64.pow(u + 1) * 3u64.pow(u) + 1;
    let mut want = Vec::new();
    for q in 3..=limit {
        let mut m = q - 1;
        let (mut a, mut b) = (0, 0);
        while m % 2 == 0 {
            m /= 2;
            a += 1;
        }
        while m % 3 == 0 {
            m /= 3;
            b += 1;
        }
        if m == 1 && a >= 1 && a <= u + 1 && b <= u && trial_division(q) {
            want.push(q);
        }
    }
    assert_eq!(got, want);
    let per_rank = got.len() as f64 / (u + 1) as f64;
    assert!((1.0..=10.0).contains(&per_rank));
}
