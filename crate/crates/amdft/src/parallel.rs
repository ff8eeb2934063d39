//! Block-parallel execution. Each block owns its segment and runs in a
//! fixed order, so the output matches the sequential path bit for bit.

use amdft_core::engine::check_input;
use amdft_core::planner::Plan;
use num_complex::Complex64;

pub fn execute_parallel(plan: &Plan, x: &[Complex64], threads: usize) -> amdft_core::Result<Vec<Complex64>> {
    check_input(plan, x)?;
    let threads = threads.max(1);
    let nb = plan.blocks().len();
    if threads == 1 || nb < 2 {
        return Ok(plan.forward(x));
    }
    let t = plan.stage_in(x);
    let chunk = nb.div_ceil(threads);
    let results: Vec<Vec<(usize, Vec<Complex64>)>> = std::thread::scope(|s| {
        let handles: Vec<_> = (0..nb)
            .step_by(chunk)
            .map(|start| {
                let t = &t;
                s.spawn(move || (start..(start + chunk).min(nb)).map(|b| (b, plan.run_block(b, t))).collect())
            })
            .collect();
        handles.into_iter().map(|h| h.join().expect("block worker panicked")).collect()
    });
    let mut u = t.clone();
    for (b, y) in results.into_iter().flatten() {
        for (&p, v) in plan.block_positions(b).iter().zip(y) {
            u[p] = v;
        }
    }
    Ok(plan.stage_out(u))
}
