//! Operation accounting for plans, the split-radix yardstick and the
//! lower bound on multiplications.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec::Vec;

use crate::error::{invalid, Result};
use crate::linop::Ops;
use crate::ntheory::{factorize, totient};
use crate::planner::{block_multipliers, build_plan, for_each_nested_block, lcm_all, Plan, Policy};
use crate::polyprod::{axis_alg, StrategyKind};

/// Real multiplications and additions of a plan, with a per-stage split.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct OpCount {
    pub real_mults: u64,
    pub real_adds: u64,
    /// stage id to counts; the totals are the sums of these
    pub breakdown: BTreeMap<String, Ops>,
}

impl OpCount {
    fn add(&mut self, id: String, ops: Ops) {
        self.real_mults += ops.mults;
        self.real_adds += ops.adds;
        *self.breakdown.entry(id).or_insert(Ops::ZERO) += ops;
    }
}

/// Tally the arithmetic of a plan. Permutations are free.
pub fn count(plan: &Plan) -> OpCount {
    let mut c = OpCount::default();
    let (pre, post) = plan.stage_costs();
    for ((q, d), e) in plan.factors().iter().zip(pre).zip(post) {
        c.add(format!("module{q}/pre"), d);
        c.add(format!("module{q}/post"), e);
    }
    for b in plan.blocks() {
        let bc = b.engine.cost();
        c.add("blocks/transforms".to_string(), bc.transforms);
        c.add("blocks/pre".to_string(), bc.pre);
        c.add("blocks/pointwise".to_string(), bc.pointwise);
        c.add("blocks/post".to_string(), bc.post);
    }
    c
}

/// Multiplier count of the fixed table for `P_n` (ALG2 fallback outside it).
pub fn table_mults(n: u64) -> u64 {
    axis_alg(n, StrategyKind::BilinearTable, None).map(|a| a.mults() as u64).unwrap_or(u64::MAX)
}

/// Real multiplications predicted from the factorization alone, with
/// whole-index greedy pairing in every block. Every nontrivial multiplier
/// is taken as real or imaginary (2 real multiplications).
pub fn count_analysis(n: u64) -> Result<u64> {
    let f = factorize(n)?;
    let mut cache: BTreeMap<u64, u64> = BTreeMap::new();
    let mut m = |k: u64| *cache.entry(k).or_insert_with(|| table_mults(k));
    let mut total = 0u64;
    let mut trivial = 0u64;
    for_each_nested_block(&f, |idx, triv| {
        total += block_multipliers(idx, &mut m);
        if triv {
            trivial += 1;
        }
    });
    Ok(2 * (total - trivial))
}

/// Lower bound on real multiplications: each block tuple with lcm index `L`
/// splits into `prod phi(n_i) / phi(L)` products modulo `P_L`, each needing at
/// least `2 phi(L) - 1` multipliers; trivial blocks are free and every other
/// multiplier costs two real multiplications.
pub fn theorem1_bound(n: u64) -> Result<u64> {
    if n == 0 {
        return Err(invalid!("transform size must be positive"));
    }
    let f = factorize(n)?;
    let mut total = 0u64;
    let mut trivial = 0u64;
    for_each_nested_block(&f, |idx, triv| {
        let l = lcm_all(idx);
        let pl = totient(l);
        let size: u64 = idx.iter().map(|&k| totient(k)).product();
        total += size / pl * (2 * pl - 1);
        if triv {
            trivial += 1;
        }
    });
    Ok(2 * (total - trivial))
}

/// Split-radix yardstick `(mfft, afft)`, each rounded to nearest.
pub fn yardstick(n: u64) -> Result<(u64, u64)> {
    if n < 2 {
        return Err(invalid!("yardstick needs N >= 2"));
    }
    let nf = n as f64;
    let nl = nf * libm::log2(nf);
    let m = nl - 3.0 * nf + 4.0;
    // afft rounds the exact sum, not the rounded mfft
    let a = libm::round(2.0 * nl + m);
    Ok((libm::round(m).max(0.0) as u64, a as u64))
}

/// Percent difference of the total against the yardstick total.
pub fn saldo(mults: u64, adds: u64, mfft: u64, afft: u64) -> f64 {
    let ours = (mults + adds) as f64;
    let base = (mfft + afft) as f64;
    (ours - base) / base * 100.0
}

/// `(mu, a_M) = (M/N, M/(N log2 N))`.
pub fn mu_and_am(mults: u64, n: u64) -> Result<(f64, f64)> {
    if n < 2 {
        return Err(invalid!("mu needs N >= 2"));
    }
    let mu = mults as f64 / n as f64;
    Ok((mu, mu / libm::log2(n as f64)))
}

/// `4 (p^2 - 2) / (p log2 p)`.
pub fn asymptotic_coeff(p: u64) -> Result<f64> {
    if !crate::ntheory::is_prime(p) {
        return Err(invalid!("{p} is not prime"));
    }
    let pf = p as f64;
    Ok(4.0 * (pf * pf - 2.0) / (pf * libm::log2(pf)))
}

#[derive(Debug, Clone, PartialEq)]
pub struct YardstickRow {
    pub n: u64,
    pub mults: u64,
    pub adds: u64,
    pub mfft: u64,
    pub afft: u64,
    pub saldo_percent: f64,
}

impl YardstickRow {
    pub fn new(n: u64, mults: u64, adds: u64) -> Result<YardstickRow> {
        let (mfft, afft) = yardstick(n)?;
        Ok(YardstickRow { n, mults, adds, mfft, afft, saldo_percent: saldo(mults, adds, mfft, afft) })
    }
}

/// One reference row: `(N, divisors, mults, adds, mfft, afft, saldo %)`.
pub type TableRow = (u64, &'static str, u64, u64, u64, u64, f64);

/// Reference counts (Rader-Winograd modules only; the FFT-module
/// variants of the Fermat rows are left out).
pub const TABLE_I: [TableRow; 20] = [
    (24, "8x3", 36, 252, 42, 262, -5.26),
    (48, "16x3", 92, 636, 128, 664, -8.08),
    (120, "8x3x5", 276, 2076, 473, 2130, -9.64),
    (240, "16x3x5", 596, 4836, 1182, 4977, -11.80),
    (504, "8x9x7", 1380, 13532, 3017, 12066, -1.13),
    (840, "8x3x5x7", 2580, 23460, 5644, 21964, -5.68),
    (1008, "16x9x7", 3116, 30124, 7037, 27151, -2.77),
    (1680, "16x3x5x7", 5492, 51924, 12964, 48964, -7.29),
    (2520, "8x9x5x7", 8340, 85948, 20918, 77866, -4.55),
    (5040, "16x9x5x7", 17732, 187124, 46872, 170848, -5.91),
    (6552, "8x9x7x13", 23460, 276812, 63412, 229541, 2.50),
    (10920, "8x3x5x7x13", 41028, 471156, 113732, 406709, -1.59),
    (13104, "16x9x7x13", 49484, 592972, 139925, 498391, 0.65),
    (21840, "16x3x5x7x13", 84620, 1007796, 249301, 878934, -3.17),
    (32760, "8x9x5x7x13", 127572, 1620076, 393112, 1375889, -1.21),
    (65520, "16x9x5x7x13", 262820, 3436820, 851741, 2948335, -2.64),
    (2040, "8x3x5x17", 10212, 68844, 16312, 61169, 2.03),
    (4080, "16x3x5x17", 20540, 151668, 36701, 134575, 0.54),
    (8160, "32x3x5x17", 42208, 327264, 81558, 293626, -1.52),
    (16320, "64x3x5x17", 91416, 719904, 179432, 636208, -0.53),
];

/// Reference row for `n`, if there is one.
pub fn table1_reference(n: u64) -> Option<&'static TableRow> {
    TABLE_I.iter().find(|r| r.0 == n)
}

/// Relative tolerance on additions (and on multiplications above 240).
pub const COUNT_TOLERANCE: f64 = 0.05;

#[derive(Debug, Clone, PartialEq)]
pub struct ReportRow {
    pub divisors: String,
    pub row: Option<YardstickRow>,
    pub reference: Option<(u64, u64)>,
    /// empty when the counts agree with the reference
    pub deviation: String,
    pub count: Option<OpCount>,
}

fn divisors_label(n: u64) -> String {
    match factorize(n) {
        Ok(f) if !f.is_empty() => f.iter().map(|&(p, k)| format!("{}", p.pow(k))).collect::<Vec<_>>().join("x"),
        _ => "1".to_string(),
    }
}

fn within(x: u64, r: u64, tol: f64) -> bool {
    (x as f64 - r as f64).abs() <= tol * r as f64
}

/// Judge counted values against a reference row.
pub fn deviation_flag(n: u64, mults: u64, adds: u64, reference: (u64, u64)) -> String {
    let mult_ok = if n <= 240 { mults == reference.0 } else { within(mults, reference.0, COUNT_TOLERANCE) };
    let mut flags = Vec::new();
    if mults != reference.0 {
        flags.push(if mult_ok { "mults~" } else { "mults" });
    }
    if !within(adds, reference.1, COUNT_TOLERANCE) {
        flags.push("adds");
    } else if adds != reference.1 {
        flags.push("adds~");
    }
    flags.join("+")
}

/// Counted rows for `sizes` (sorted by N) against the embedded reference.
/// Unbuildable sizes are flagged, not fatal.
pub fn table1_report(sizes: &[u64], policy: Policy) -> Vec<(u64, ReportRow)> {
    let mut sizes = sizes.to_vec();
    sizes.sort_unstable();
    sizes.dedup();
    sizes
        .into_iter()
        .map(|n| {
            let reference = table1_reference(n).map(|r| (r.2, r.3));
            let row = match build_plan(n, policy) {
                Err(e) => ReportRow {
                    divisors: divisors_label(n),
                    row: None,
                    reference,
                    deviation: format!("unbuildable: {e}"),
                    count: None,
                },
                Ok(plan) => {
                    let c = count(&plan);
                    let deviation = match reference {
                        Some(r) => deviation_flag(n, c.real_mults, c.real_adds, r),
                        None => String::new(),
                    };
                    ReportRow {
                        divisors: divisors_label(n),
                        row: YardstickRow::new(n, c.real_mults, c.real_adds).ok(),
                        reference,
                        deviation,
                        count: Some(c),
                    }
                }
            };
            (n, row)
        })
        .collect()
}
