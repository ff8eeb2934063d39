//! CSV and JSON renderings of counts, accuracy and atlas results.

use std::collections::BTreeMap;
use std::io::Write;

use amdft_core::atlas::{Fig1Cell, PrimeFamilyRecord, RankSummary};
use amdft_core::engine::AccuracyReport;
use amdft_core::opcount::ReportRow;
use serde::Serialize;

pub const COUNT_HEADER: [&str; 10] =
    ["N", "divisors", "mults", "adds", "mfft", "afft", "saldo_pct", "ref_mults", "ref_adds", "deviation_flag"];

fn opt<T: ToString>(v: Option<T>) -> String {
    v.map(|x| x.to_string()).unwrap_or_default()
}

/// Rows in ascending N; the reference columns stay empty without a reference.
pub fn write_count_csv(w: impl Write, rows: &[(u64, ReportRow)]) -> csv::Result<()> {
    let mut wr = csv::Writer::from_writer(w);
    wr.write_record(COUNT_HEADER)?;
    for (n, r) in rows {
        let y = r.row.as_ref();
        wr.write_record([
            n.to_string(),
            r.divisors.clone(),
            opt(y.map(|y| y.mults)),
            opt(y.map(|y| y.adds)),
            opt(y.map(|y| y.mfft)),
            opt(y.map(|y| y.afft)),
            opt(y.map(|y| format!("{:.2}", y.saldo_percent))),
            opt(r.reference.map(|x| x.0)),
            opt(r.reference.map(|x| x.1)),
            r.deviation.clone(),
        ])?;
    }
    wr.flush()?;
    Ok(())
}

#[derive(Serialize)]
struct OpsJson {
    mults: u64,
    adds: u64,
}

#[derive(Serialize)]
struct CountJson<'a> {
    #[serde(rename = "N")]
    n: u64,
    divisors: &'a str,
    mults: Option<u64>,
    adds: Option<u64>,
    mfft: Option<u64>,
    afft: Option<u64>,
    saldo_pct: Option<f64>,
    ref_mults: Option<u64>,
    ref_adds: Option<u64>,
    deviation_flag: &'a str,
    breakdown: BTreeMap<&'a str, OpsJson>,
}

pub fn count_json(rows: &[(u64, ReportRow)]) -> String {
    let v: Vec<CountJson> = rows
        .iter()
        .map(|(n, r)| {
            let y = r.row.as_ref();
            CountJson {
                n: *n,
                divisors: &r.divisors,
                mults: y.map(|y| y.mults),
                adds: y.map(|y| y.adds),
                mfft: y.map(|y| y.mfft),
                afft: y.map(|y| y.afft),
                saldo_pct: y.map(|y| (y.saldo_percent * 100.0).round() / 100.0),
                ref_mults: r.reference.map(|x| x.0),
                ref_adds: r.reference.map(|x| x.1),
                deviation_flag: &r.deviation,
                breakdown: r
                    .count
                    .iter()
                    .flat_map(|c| c.breakdown.iter())
                    .map(|(k, o)| (k.as_str(), OpsJson { mults: o.mults, adds: o.adds }))
                    .collect(),
            }
        })
        .collect();
    serde_json::to_string_pretty(&v).expect("count rows serialize")
}

#[derive(Serialize)]
struct AccuracyJson<'a> {
    #[serde(rename = "N")]
    n: usize,
    plan_id: &'a str,
    input: &'a str,
    rel_l2: f64,
    max_abs: f64,
    threshold: f64,
    pass: bool,
}

pub fn accuracy_json(r: &AccuracyReport, threshold: f64) -> String {
    serde_json::to_string_pretty(&AccuracyJson {
        n: r.n,
        plan_id: &r.plan_id,
        input: &r.input,
        rel_l2: r.rel_l2,
        max_abs: r.max_abs,
        threshold,
        pass: r.rel_l2 < threshold,
    })
    .expect("accuracy report serializes")
}

pub fn write_fig1_csv(w: impl Write, cells: &[Fig1Cell]) -> csv::Result<()> {
    let mut wr = csv::Writer::from_writer(w);
    wr.write_record(["i", "j", "value", "is_prime"])?;
    for c in cells {
        wr.write_record([c.i.to_string(), c.j.to_string(), c.value.to_string(), c.is_prime.to_string()])?;
    }
    wr.flush()?;
    Ok(())
}

pub fn write_nmax_csv(w: impl Write, series: &[RankSummary]) -> csv::Result<()> {
    let mut wr = csv::Writer::from_writer(w);
    wr.write_record(["u", "new_primes", "log2_nmax", "reference_curve"])?;
    for s in series {
        wr.write_record([
            s.u.to_string(),
            s.new_primes.len().to_string(),
            format!("{:.3}", s.log2_nmax),
            opt(s.reference.map(|r| format!("{r:.1}"))),
        ])?;
    }
    wr.flush()?;
    Ok(())
}

pub fn write_family_csv(w: impl Write, recs: &[PrimeFamilyRecord]) -> csv::Result<()> {
    let mut wr = csv::Writer::from_writer(w);
    wr.write_record(["value", "rank", "exponents"])?;
    for r in recs {
        let e: Vec<String> = r.exponents.iter().map(|x| x.to_string()).collect();
        wr.write_record([r.value.to_string(), r.rank.to_string(), e.join(" ")])?;
    }
    wr.flush()?;
    Ok(())
}
