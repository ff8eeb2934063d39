//! Portable plan documents. A document stores derivation parameters only;
//! the fixed operands are rebuilt when it is parsed.

use amdft_core::modules::is_supported;
use amdft_core::ntheory::{factorize, primitive_root};
use amdft_core::planner::{build_plan_with, plan_factors, Plan, Policy, MODULE_VERSION};
use amdft_core::polyprod::{ProductStrategy, StrategyKind};
use serde::{Deserialize, Serialize};

pub const DOC_VERSION: u32 = 1;

#[derive(Debug, thiserror::Error)]
pub enum DocError {
    #[error("{path}: {msg}")]
    Schema { path: String, msg: String },
    #[error("{0}")]
    Build(#[from] amdft_core::Error),
}

fn schema(path: impl Into<String>, msg: impl Into<String>) -> DocError {
    DocError::Schema { path: path.into(), msg: msg.into() }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StrategyDoc {
    pub kind: String,
    pub inner: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub fft_size: Option<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BlockDoc {
    /// block number inside each factor's module
    pub dims: Vec<usize>,
    pub moduli: Vec<u64>,
    pub offsets: Vec<usize>,
    pub sizes: Vec<usize>,
    pub strategy: StrategyDoc,
}

/// Field order here is the serialized order.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PlanDoc {
    pub version: u32,
    #[serde(rename = "N")]
    pub n: u64,
    pub factors: Vec<u64>,
    pub strategy_policy: String,
    pub module_version: u32,
    pub blocks: Vec<BlockDoc>,
    /// generator used for the index permutation of each factor, 0 when the
    /// group of units is not cyclic
    pub seeds: Vec<u64>,
}

fn strategy_doc(s: ProductStrategy) -> StrategyDoc {
    StrategyDoc { kind: s.kind.name().into(), inner: s.inner.name().into(), fft_size: s.fft_size }
}

fn seed(q: u64) -> u64 {
    primitive_root(q).unwrap_or(0)
}

pub fn to_doc(plan: &Plan) -> PlanDoc {
    PlanDoc {
        version: DOC_VERSION,
        n: plan.size() as u64,
        factors: plan.factors().to_vec(),
        strategy_policy: plan.policy().name().into(),
        module_version: plan.provenance().module_version,
        blocks: plan
            .blocks()
            .iter()
            .map(|b| BlockDoc {
                dims: b.module_blocks.clone(),
                moduli: b.indices.clone(),
                offsets: b.offsets.clone(),
                sizes: b.engine.dims().to_vec(),
                strategy: strategy_doc(b.strategy()),
            })
            .collect(),
        seeds: plan.factors().iter().map(|&q| seed(q)).collect(),
    }
}

/// Canonical text form; byte-stable for a given plan.
pub fn serialize_plan(plan: &Plan) -> String {
    let mut s = serde_json::to_string_pretty(&to_doc(plan)).expect("plan documents serialize");
    s.push('\n');
    s
}

fn kind(path: &str, s: &str) -> Result<StrategyKind, DocError> {
    StrategyKind::from_name(s).ok_or_else(|| schema(path, format!("unknown strategy `{s}`")))
}

/// Reject documents whose block segments overlap or leave holes.
fn check_tiling(doc: &PlanDoc) -> Result<(), DocError> {
    let dims: Vec<usize> = doc.factors.iter().map(|&q| q as usize).collect();
    let total: usize = dims.iter().product();
    let mut seen = vec![false; total];
    for (b, blk) in doc.blocks.iter().enumerate() {
        let path = format!("blocks[{b}]");
        if blk.offsets.len() != dims.len() || blk.sizes.len() != dims.len() {
            return Err(schema(&path, "offsets and sizes need one entry per factor"));
        }
        for (i, (&o, &s)) in blk.offsets.iter().zip(&blk.sizes).enumerate() {
            if o + s > dims[i] {
                return Err(schema(format!("{path}.offsets[{i}]"), "segment runs past the factor"));
            }
        }
        let mut pos = vec![0usize];
        for (i, (&o, &s)) in blk.offsets.iter().zip(&blk.sizes).enumerate() {
            let stride: usize = dims[i + 1..].iter().product();
            pos = pos.iter().flat_map(|&p| (o..o + s).map(move |j| p + j * stride)).collect();
        }
        for p in pos {
            if std::mem::replace(&mut seen[p], true) {
                return Err(schema(&path, "block segments overlap"));
            }
        }
    }
    if seen.iter().any(|&s| !s) {
        return Err(schema("blocks", "block segments do not cover the transform"));
    }
    Ok(())
}

/// Validate a document and rebuild the plan it describes.
pub fn plan_from_doc(doc: &PlanDoc) -> Result<Plan, DocError> {
    if doc.version != DOC_VERSION {
        return Err(schema("version", format!("expected {DOC_VERSION}, found {}", doc.version)));
    }
    if doc.module_version != MODULE_VERSION {
        return Err(schema("module_version", format!("expected {MODULE_VERSION}, found {}", doc.module_version)));
    }
    let policy = Policy::from_name(&doc.strategy_policy).ok_or_else(|| schema("strategy_policy", "unknown policy"))?;
    for (i, &q) in doc.factors.iter().enumerate() {
        if !is_supported(q) || factorize(q).map(|f| f.len()) != Ok(1) {
            return Err(schema(format!("factors[{i}]"), format!("{q} is not a supported prime power")));
        }
    }
    if doc.factors != plan_factors(doc.n)? {
        return Err(schema("factors", format!("do not match the factorization of {}", doc.n)));
    }
    if doc.seeds.len() != doc.factors.len() {
        return Err(schema("seeds", "one seed per factor"));
    }
    for (i, (&s, &q)) in doc.seeds.iter().zip(&doc.factors).enumerate() {
        if s != seed(q) {
            return Err(schema(format!("seeds[{i}]"), format!("expected {} for factor {q}", seed(q))));
        }
    }
    check_tiling(doc)?;
    let mut strategies = Vec::with_capacity(doc.blocks.len());
    for (b, blk) in doc.blocks.iter().enumerate() {
        let p = format!("blocks[{b}].strategy");
        strategies.push(ProductStrategy {
            kind: kind(&format!("{p}.kind"), &blk.strategy.kind)?,
            inner: kind(&format!("{p}.inner"), &blk.strategy.inner)?,
            fft_size: blk.strategy.fft_size,
        });
    }
    let plan = build_plan_with(doc.n, policy, Some(&strategies))?;
    let rebuilt = to_doc(&plan);
    for (b, (got, want)) in doc.blocks.iter().zip(&rebuilt.blocks).enumerate() {
        let path = format!("blocks[{b}]");
        if got.dims != want.dims {
            return Err(schema(format!("{path}.dims"), "block order differs from the module inventories"));
        }
        if got.moduli != want.moduli {
            return Err(schema(format!("{path}.moduli"), format!("expected {:?}", want.moduli)));
        }
        if got.offsets != want.offsets || got.sizes != want.sizes {
            return Err(schema(&path, "segment differs from the module layout"));
        }
    }
    Ok(plan)
}

/// Parse a document from text; schema errors carry the JSON path.
pub fn parse_plan(text: &str) -> Result<Plan, DocError> {
    let de = &mut serde_json::Deserializer::from_str(text);
    let doc: PlanDoc = serde_path_to_error::deserialize(de).map_err(|e| {
        let path = e.path().to_string();
        schema(if path == "." { "$".to_string() } else { path }, e.into_inner().to_string())
    })?;
    plan_from_doc(&doc)
}
