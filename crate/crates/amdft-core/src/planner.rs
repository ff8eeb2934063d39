//! Plan compilation: factorization, module selection, nested blocks and the
//! per-block product strategy. Also the analysis-mode helpers that work on
//! factor arithmetic alone (block inventories, `M_max`, PFA re-splitting).

use alloc::collections::BTreeMap;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use num_bigint::BigUint;
use num_complex::Complex64;

use crate::error::{capability, consistency, invalid, Result};
use crate::linop::Ops;
use crate::mappings::{crt_input_map, output_map, IndexMap, MultiIndexShape};
use crate::modules::{build_module, is_supported, DftModule, SUPPORTED};
use crate::ntheory::{divisors, factorize, lcm, totient};
use crate::polyprod::{alg3_pairs, apply_stage, stage_cost, BlockEngine, ProductStrategy, Stage, StageKind};

/// Bumped whenever a module's stage layout changes.
pub const MODULE_VERSION: u32 = 1;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Policy {
    /// cheaper of Kronecker nesting and polynomial transforms, per block
    Auto,
    Bilinear,
    Alg1f,
    Alg2,
    /// polynomial transforms wherever a divisibility pair exists
    PtransformMax,
}

impl Policy {
    pub const ALL: [Policy; 5] = [Policy::Auto, Policy::Bilinear, Policy::Alg1f, Policy::Alg2, Policy::PtransformMax];

    pub fn name(self) -> &'static str {
        match self {
            Policy::Auto => "auto",
            Policy::Bilinear => "bilinear",
            Policy::Alg1f => "alg1f",
            Policy::Alg2 => "alg2",
            Policy::PtransformMax => "ptransform-max",
        }
    }

    pub fn from_name(s: &str) -> Option<Policy> {
        Policy::ALL.into_iter().find(|p| p.name() == s)
    }
}

/// Kronecker product of one block from each factor's module.
#[derive(Debug, Clone)]
pub struct NestedBlock {
    /// block number inside each factor's module
    pub module_blocks: Vec<usize>,
    /// cyclotomic index per dimension
    pub indices: Vec<u64>,
    /// offset of the block inside each dimension
    pub offsets: Vec<usize>,
    /// start of the block in block-major order
    pub segment: usize,
    pub trivial: bool,
    pub engine: BlockEngine,
}

impl NestedBlock {
    pub fn size(&self) -> usize {
        self.engine.size()
    }
    pub fn strategy(&self) -> ProductStrategy {
        self.engine.strategy()
    }
    /// Largest product left after polynomial-transform pairing.
    pub fn irreducible_size(&self) -> usize {
        let absorbed: Vec<usize> = self.engine.pairs().iter().map(|p| p.0).collect();
        self.engine.dims().iter().enumerate().filter(|(a, _)| !absorbed.contains(a)).map(|(_, &d)| d).product()
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Provenance {
    pub module_version: u32,
    pub policy: Policy,
    pub crate_version: &'static str,
}

#[derive(Debug, Clone)]
pub struct Plan {
    n: usize,
    factors: Vec<u64>,
    modules: Vec<DftModule>,
    input_map: IndexMap,
    output_map: IndexMap,
    pre: Vec<Stage>,
    post: Vec<Stage>,
    blocks: Vec<NestedBlock>,
    /// tensor positions of every block, block-major
    gather: Vec<usize>,
    provenance: Provenance,
}

/// Prime-power factors of `n` in ascending order of prime, checked against
/// the module registry.
pub fn plan_factors(n: u64) -> Result<Vec<u64>> {
    if n == 0 {
        return Err(invalid!("transform size must be positive"));
    }
    let mut out = Vec::new();
    for (p, k) in factorize(n)? {
        let q = p.pow(k);
        if !is_supported(q) {
            return Err(capability!("factor {q} of {n} has no DFT module; supported prime powers: {:?}", SUPPORTED));
        }
        out.push(q);
    }
    Ok(out)
}

fn choose(indices: &[u64], fixed: &[Complex64], policy: Policy) -> Result<BlockEngine> {
    let alg3 = || ProductStrategy::alg3(crate::polyprod::StrategyKind::BilinearTable);
    let has_pairs = !alg3_pairs(indices).is_empty();
    match policy {
        Policy::Bilinear => BlockEngine::new(indices, fixed, ProductStrategy::bilinear()),
        Policy::Alg1f => BlockEngine::new(indices, fixed, ProductStrategy::alg1f()),
        Policy::Alg2 => BlockEngine::new(indices, fixed, ProductStrategy::alg2(None)),
        Policy::PtransformMax if has_pairs => BlockEngine::new(indices, fixed, alg3()),
        Policy::PtransformMax => BlockEngine::new(indices, fixed, ProductStrategy::bilinear()),
        Policy::Auto => {
            let k = BlockEngine::new(indices, fixed, ProductStrategy::bilinear())?;
            if !has_pairs {
                return Ok(k);
            }
            let p = BlockEngine::new(indices, fixed, alg3())?;
            let (ck, cp) = (k.cost().total(), p.cost().total());
            Ok(if (cp.mults, cp.adds) < (ck.mults, ck.adds) { p } else { k })
        }
    }
}

fn kron(parts: &[&[Complex64]]) -> Vec<Complex64> {
    let mut out = vec![Complex64::new(1.0, 0.0)];
    for p in parts {
        out = out.iter().flat_map(|&a| p.iter().map(move |&b| a * b)).collect();
    }
    out
}

/// Compile a plan for size `n`.
pub fn build_plan(n: u64, policy: Policy) -> Result<Plan> {
    build_plan_with(n, policy, None)
}

/// Compile a plan with an explicit strategy per block (block-major order),
/// as stored in a plan document.
pub fn build_plan_with(n: u64, policy: Policy, strategies: Option<&[ProductStrategy]>) -> Result<Plan> {
    let factors = plan_factors(n)?;
    let modules: Vec<DftModule> = factors.iter().map(|&q| build_module(q)).collect::<Result<_>>()?;
    let dims: Vec<usize> = factors.iter().map(|&q| q as usize).collect();
    let shape = MultiIndexShape::new(if dims.is_empty() { vec![1] } else { dims.clone() })?;
    let input_map = crt_input_map(&shape);
    let output_map = output_map(&shape);

    let stage = |i: usize, kind, op: &crate::linop::LinearOp| Stage { kind, axes: vec![i], out_dims: vec![dims[i]], op: op.clone() };
    let pre = modules.iter().enumerate().map(|(i, m)| stage(i, StageKind::Pre, m.pre())).collect();
    let post = modules.iter().enumerate().map(|(i, m)| stage(i, StageKind::Post, m.post())).collect();

    let counts: Vec<usize> = modules.iter().map(|m| m.blocks().len()).collect();
    let total: usize = counts.iter().product();
    if let Some(s) = strategies {
        if s.len() != total {
            return Err(invalid!("plan for {n} has {total} blocks, {} strategies given", s.len()));
        }
    }
    let strides: Vec<usize> = {
        let mut s = vec![1usize; dims.len()];
        for i in (0..dims.len().saturating_sub(1)).rev() {
            s[i] = s[i + 1] * dims[i + 1];
        }
        s
    };
    let mut blocks = Vec::with_capacity(total);
    let mut gather = Vec::with_capacity(n as usize);
    for b in 0..total {
        let mut ids = vec![0usize; counts.len()];
        let mut r = b;
        for i in (0..counts.len()).rev() {
            ids[i] = r % counts[i];
            r /= counts[i];
        }
        let mbs: Vec<_> = ids.iter().zip(&modules).map(|(&id, m)| &m.blocks()[id]).collect();
        let indices: Vec<u64> = mbs.iter().map(|mb| mb.index).collect();
        let offsets: Vec<usize> = mbs.iter().map(|mb| mb.offset).collect();
        let kernels: Vec<&[Complex64]> = mbs.iter().map(|mb| mb.kernel.as_slice()).collect();
        let fixed = kron(&kernels);
        let engine = match strategies {
            Some(s) => BlockEngine::new(&indices, &fixed, s[b])?,
            None => choose(&indices, &fixed, policy)?,
        };
        let segment = gather.len();
        let mut pos = vec![offsets.iter().zip(&strides).map(|(o, s)| o * s).sum::<usize>()];
        for (mb, &st) in mbs.iter().zip(&strides) {
            pos = pos.iter().flat_map(|&p| (0..mb.size).map(move |j| p + j * st)).collect();
        }
        gather.extend(pos);
        blocks.push(NestedBlock {
            module_blocks: ids,
            trivial: mbs.iter().all(|mb| mb.trivial),
            indices,
            offsets,
            segment,
            engine,
        });
    }
    let plan = Plan {
        n: n as usize,
        factors,
        modules,
        input_map,
        output_map,
        pre,
        post,
        blocks,
        gather,
        provenance: Provenance { module_version: MODULE_VERSION, policy, crate_version: env!("CARGO_PKG_VERSION") },
    };
    plan.validate()?;
    Ok(plan)
}

impl Plan {
    pub fn size(&self) -> usize {
        self.n
    }
    pub fn factors(&self) -> &[u64] {
        &self.factors
    }
    pub fn modules(&self) -> &[DftModule] {
        &self.modules
    }
    pub fn blocks(&self) -> &[NestedBlock] {
        &self.blocks
    }
    pub fn input_map(&self) -> &IndexMap {
        &self.input_map
    }
    pub fn output_map(&self) -> &IndexMap {
        &self.output_map
    }
    pub fn pre_stages(&self) -> &[Stage] {
        &self.pre
    }
    pub fn post_stages(&self) -> &[Stage] {
        &self.post
    }
    pub fn provenance(&self) -> &Provenance {
        &self.provenance
    }
    pub fn policy(&self) -> Policy {
        self.provenance.policy
    }
    pub fn id(&self) -> String {
        alloc::format!("{}/{}", self.n, self.provenance.policy.name())
    }
    pub fn strategies(&self) -> Vec<ProductStrategy> {
        self.blocks.iter().map(|b| b.strategy()).collect()
    }
    /// Tensor positions read and written by block `b`.
    pub fn block_positions(&self, b: usize) -> &[usize] {
        let blk = &self.blocks[b];
        &self.gather[blk.segment..blk.segment + blk.size()]
    }

    /// Largest irreducible block of this plan.
    pub fn m_max(&self) -> usize {
        self.blocks.iter().map(|b| b.irreducible_size()).max().unwrap_or(1)
    }

    /// Block sizes add up to N, and the segments tile the intermediate vector.
    pub fn validate(&self) -> Result<()> {
        let total: usize = self.blocks.iter().map(|b| b.size()).sum();
        if total != self.n {
            return Err(consistency!("block sizes add up to {total}, expected {}", self.n));
        }
        let mut seen = vec![false; self.n];
        for &p in &self.gather {
            if p >= self.n || core::mem::replace(&mut seen[p], true) {
                return Err(consistency!("block segments overlap at position {p}"));
            }
        }
        Ok(())
    }

    /// Input vector to the pre-added tensor.
    pub fn stage_in(&self, x: &[Complex64]) -> Vec<Complex64> {
        let mut t: Vec<Complex64> = (0..self.n).map(|i| x[self.input_map.get(i)]).collect();
        let mut shape: Vec<usize> = self.factors.iter().map(|&q| q as usize).collect();
        for s in &self.pre {
            t = apply_stage(&t, &mut shape, s);
        }
        t
    }

    /// Product of block `b` on the pre-added tensor.
    pub fn run_block(&self, b: usize, t: &[Complex64]) -> Vec<Complex64> {
        let seg: Vec<Complex64> = self.block_positions(b).iter().map(|&p| t[p]).collect();
        self.blocks[b].engine.apply(&seg)
    }

    /// Post-additions and output permutation.
    pub fn stage_out(&self, mut t: Vec<Complex64>) -> Vec<Complex64> {
        let mut shape: Vec<usize> = self.factors.iter().map(|&q| q as usize).collect();
        for s in &self.post {
            t = apply_stage(&t, &mut shape, s);
        }
        let mut out = vec![Complex64::new(0.0, 0.0); self.n];
        for (i, v) in t.into_iter().enumerate() {
            out[self.output_map.get(i)] = v;
        }
        out
    }

    /// Sequential forward transform; no input checks.
    pub fn forward(&self, x: &[Complex64]) -> Vec<Complex64> {
        let t = self.stage_in(x);
        let mut u = t.clone();
        for b in 0..self.blocks.len() {
            let y = self.run_block(b, &t);
            for (&p, v) in self.block_positions(b).iter().zip(y) {
                u[p] = v;
            }
        }
        self.stage_out(u)
    }

    /// Operation totals of the additive stages along each dimension.
    pub fn stage_costs(&self) -> (Vec<Ops>, Vec<Ops>) {
        let shape: Vec<usize> = self.factors.iter().map(|&q| q as usize).collect();
        let f = |v: &[Stage]| v.iter().map(|s| stage_cost(s, &mut shape.clone())).collect();
        (f(&self.pre), f(&self.post))
    }
}

// ---- analysis mode ----

/// Block inventory `(index, trivial)` of a prime-power module, by factor
/// arithmetic only. Matches [`build_module`] on the registry sizes.
pub fn analysis_inventory(p: u64, k: u32) -> Vec<(u64, bool)> {
    if p == 2 {
        let mut inv = vec![(1, true), (2, true)];
        for s in 2..=k {
            inv.push((1, true));
            inv.push((1, true));
            for j in 1..=s.saturating_sub(2) {
                inv.push((1 << j, false));
                inv.push((1 << j, false));
            }
        }
        if k == 0 {
            inv.truncate(1);
        }
        return inv;
    }
    let mut inv = vec![(1, true)];
    for s in 1..=k {
        let phi = (p - 1) * p.pow(s - 1);
        inv.extend(divisors(phi).into_iter().map(|d| (d, false)));
    }
    inv
}

/// Top (largest) cyclotomic index of a prime-power module.
fn top_index(p: u64, k: u32) -> u64 {
    match (p, k) {
        (_, 0) => 1,
        (2, k) if k <= 2 => 1,
        (2, k) => 1 << (k - 2),
        (p, k) => (p - 1) * p.pow(k - 1),
    }
}

/// `M_max` from the factorization: totient of the lcm of the top indices,
/// which is what maximal pairing after re-splitting leaves over.
pub fn m_max_factored(factors: &[(u64, u32)]) -> Result<BigUint> {
    let mut lcm_exp: BTreeMap<u64, u32> = BTreeMap::new();
    for &(p, k) in factors {
        let top = top_index(p, k);
        for (r, e) in factorize(top)? {
            let v = lcm_exp.entry(r).or_insert(0);
            *v = (*v).max(e);
        }
    }
    let mut out = BigUint::from(1u32);
    for (r, e) in lcm_exp {
        out *= BigUint::from(r - 1) * BigUint::from(r).pow(e - 1);
    }
    Ok(out)
}

/// `M_max(N)` in analysis mode; no module is needed.
pub fn m_max(n: u64) -> Result<u64> {
    if n == 0 {
        return Err(invalid!("transform size must be positive"));
    }
    let f = factorize(n)?;
    let m = m_max_factored(&f)?;
    m.try_into().map_err(|_| invalid!("M_max overflows u64"))
}

/// Result of splitting convolution lengths into prime-power components.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Resplit {
    /// `(small, large)` with `small | large`; the small one is absorbed
    pub pairs: Vec<(u64, u64)>,
    /// components left after pairing, ascending by prime
    pub residual: Vec<u64>,
}

impl Resplit {
    /// Size of the product left after pairing.
    pub fn residual_rank(&self) -> u64 {
        self.residual.iter().map(|&c| totient(c)).product()
    }
}

/// Split each length into coprime prime-power components and pair the
/// components of every prime: all of them are absorbed by the largest.
pub fn pfa_resplit(dims: &[u64]) -> Result<Resplit> {
    let mut by_prime: BTreeMap<u64, Vec<u64>> = BTreeMap::new();
    for &d in dims {
        if d == 0 {
            return Err(invalid!("zero length"));
        }
        for (p, e) in factorize(d)? {
            by_prime.entry(p).or_default().push(p.pow(e));
        }
    }
    let mut pairs = Vec::new();
    let mut residual = Vec::new();
    for (_, mut comps) in by_prime {
        comps.sort_unstable_by(|a, b| b.cmp(a));
        let top = comps[0];
        pairs.extend(comps[1..].iter().map(|&c| (c, top)));
        residual.push(top);
    }
    Ok(Resplit { pairs, residual })
}

/// Whole-index greedy pairing cost of one block in complex multipliers:
/// `prod m(survivor) * prod phi(absorbed)`.
pub fn block_multipliers(indices: &[u64], m: &mut dyn FnMut(u64) -> u64) -> u64 {
    let absorbed: Vec<usize> = alg3_pairs(indices).iter().map(|p| p.0).collect();
    indices
        .iter()
        .enumerate()
        .map(|(i, &n)| if absorbed.contains(&i) { totient(n) } else { m(n) })
        .product()
}

/// Common ancestor of the inventories of all factors; `f` is called with
/// each nested block's `(indices, trivial)`.
pub fn for_each_nested_block(factors: &[(u64, u32)], mut f: impl FnMut(&[u64], bool)) {
    let invs: Vec<Vec<(u64, bool)>> = factors.iter().map(|&(p, k)| analysis_inventory(p, k)).collect();
    let counts: Vec<usize> = invs.iter().map(|v| v.len()).collect();
    let total: usize = counts.iter().product();
    let mut idx = vec![0u64; invs.len()];
    for b in 0..total {
        let mut r = b;
        let mut triv = true;
        for i in (0..invs.len()).rev() {
            let (n, t) = invs[i][r % counts[i]];
            r /= counts[i];
            idx[i] = n;
            triv &= t;
        }
        f(&idx, triv);
    }
}

/// `lcm` of a list of indices.
pub fn lcm_all(v: &[u64]) -> u64 {
    v.iter().fold(1, |a, &b| lcm(a, b))
}
