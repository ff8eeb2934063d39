use amdft_core::engine::{execute, naive_dft, relative_l2};
use amdft_core::mappings::{crt_input_map, output_map, MultiIndexShape};
use amdft_core::ntheory::totient;
use amdft_core::planner::{build_plan, Policy};
use amdft_core::polyprod::*;
use num_complex::Complex64;
use proptest::prelude::*;

fn signal(len: usize) -> impl Strategy<Value = Vec<Complex64>> {
    prop::collection::vec((-1.0f64..1.0, -1.0f64..1.0).prop_map(|(a, b)| Complex64::new(a, b)), len)
}

const SIZES: [u64; 8] = [3, 8, 15, 24, 35, 45, 63, 120];

proptest! {
    #![proptest_config(ProptestConfig::with_cases(40))]

    #[test]
    fn matches_naive(k in 0..SIZES.len(), seed in any::<u64>()) {
        let n = SIZES[k] as usize;
        let plan = build_plan(n as u64, Policy::Auto).unwrap();
        let x: Vec<Complex64> = (0..n).map(|i| {
            let t = (seed ^ (i as u64).wrapping_mul(0x9e37_79b9_7f4a_7c15)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
            Complex64::new((t >> 11) as f64 / (1u64 << 53) as f64 - 0.5, (t & 0xffff) as f64 / 65536.0 - 0.5)
        }).collect();
        prop_assert!(relative_l2(&execute(&plan, &x).unwrap(), &naive_dft(&x)) < 1e-11);
    }

    #[test]
    fn linearity((x, y) in (signal(120), signal(120)), a in -2.0f64..2.0, b in -2.0f64..2.0) {
        let plan = build_plan(120, Policy::Auto).unwrap();
        let z: Vec<Complex64> = x.iter().zip(&y).map(|(u, v)| u * a + v * b).collect();
        let fx = execute(&plan, &x).unwrap();
        let fy = execute(&plan, &y).unwrap();
        let want: Vec<Complex64> = fx.iter().zip(&fy).map(|(u, v)| u * a + v * b).collect();
        prop_assert!(relative_l2(&execute(&plan, &z).unwrap(), &want) < 1e-11);
    }

    #[test]
    fn parseval(x in signal(63)) {
        let plan = build_plan(63, Policy::Auto).unwrap();
        let y = execute(&plan, &x).unwrap();
        let ex: f64 = x.iter().map(|v| v.norm_sqr()).sum();
        let ey: f64 = y.iter().map(|v| v.norm_sqr()).sum();
        prop_assert!((ey - 63.0 * ex).abs() <= 1e-10 * ey.max(1e-300));
    }

    #[test]
    fn engines_agree(k in 0..8usize, seed in 0u64..1000) {
        let n = [3u64, 4, 5, 7, 8, 9, 13, 16][k];
        let phi = totient(n) as usize;
        let v = |s: u64| -> Vec<Complex64> {
            (0..phi).map(|i| Complex64::new(((s + 7 * i as u64) % 13) as f64 - 6.0, ((s * 3 + i as u64) % 11) as f64 - 5.0)).collect()
        };
        let (a, b) = (v(seed), v(seed + 1));
        let r = ring_mul_nd(&[n], &a, &b);
        let scale = r.iter().map(|c| c.norm()).fold(1.0, f64::max);
        for y in [
            product_bilinear(n, &a, &b).unwrap(),
            product_alg1f(n, &a, &b).unwrap(),
            product_alg2(n, &a, &b, alg2_default_size(n)).unwrap(),
        ] {
            prop_assert!(y.iter().zip(&r).all(|(p, q)| (p - q).norm() <= 1e-10 * scale));
        }
    }

    #[test]
    fn index_maps_are_bijections(k in 0..4usize) {
        let dims = [vec![8, 3], vec![16, 9, 5], vec![7, 4], vec![5, 13, 9]][k].clone();
        let shape = MultiIndexShape::new(dims).unwrap();
        let n = shape.size();
        let mut seen = vec![false; n];
        for i in 0..n {
            let j = crt_input_map(&shape).get(i);
            prop_assert!(!seen[j]);
            seen[j] = true;
        }
        let o = output_map(&shape);
        for i in 0..n {
            prop_assert_eq!(o.inv(o.get(i)), i);
        }
    }
}
