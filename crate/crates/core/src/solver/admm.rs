use nalgebra::DMatrix;
use rayon::prelude::*;

use super::train::{AdmmRecord, SolverState};
use super::{lipschitz_bound, solve_z_row, update_c, BundledKernel, SolverError};

/// `Λ' = Λ + μ(Z − C)`.
pub fn update_multiplier(lambda: &DMatrix<f64>, z: &DMatrix<f64>, c: &DMatrix<f64>, mu: f64) -> DMatrix<f64> {
    lambda + (z - c) * mu
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AdmmOutcome {
    pub iterations: u32,
    pub converged: bool,
    /// `‖Z − C‖_∞` at exit.
    pub primal: f64,
    /// `‖Z⁽ᵗ⁺¹⁾ − Z⁽ᵗ⁾‖_∞` at exit.
    pub dz: f64,
    pub clamped: usize,
    pub inner_cap_hits: usize,
}

fn max_abs_diff(a: &DMatrix<f64>, b: &DMatrix<f64>) -> f64 {
    a.iter().zip(b.iter()).fold(0.0f64, |m, (x, y)| m.max((x - y).abs()))
}

/// Every row of `Z` solved independently (rows are contiguous columns of the
/// transposed operands). Row-parallel; results do not depend on worker count.
fn z_step(state: &SolverState) -> (DMatrix<f64>, usize, usize) {
    let h = &state.hyper;
    let d_bar = state.z.ncols();
    let z_t = state.z.transpose();
    let c_t = state.c.transpose();
    let l_t = state.lambda.transpose();
    let mut out = DMatrix::zeros(d_bar, state.z.nrows());
    let stats: Vec<(usize, bool)> = out
        .as_mut_slice()
        .par_chunks_mut(d_bar)
        .enumerate()
        .map(|(j, row)| {
            let r = solve_z_row(
                z_t.column(j).as_slice(),
                c_t.column(j).as_slice(),
                l_t.column(j).as_slice(),
                h.mu,
                h.lambda1,
                h.eps_reweight,
                h.tol_inner_row,
                h.max_inner_row,
            );
            row.copy_from_slice(&r.z);
            (r.clamped, r.converged)
        })
        .collect();
    let clamped = stats.iter().map(|s| s.0).sum();
    let cap_hits = stats.iter().filter(|s| !s.1).count();
    (out.transpose(), clamped, cap_hits)
}

/// Inner ADMM for the selection block with `W` held fixed. Stops when both
/// `‖Z − C‖_∞` and `‖ΔZ‖_∞` reach `tol_admm`, or after `max_admm`
/// iterations. Updates `state.z`, `state.c`, `state.lambda` and appends to
/// the residual trace.
pub fn admm_solve_z(
    state: &mut SolverState,
    k: &BundledKernel,
    y: &DMatrix<f64>,
) -> Result<AdmmOutcome, SolverError> {
    let h = state.hyper;
    let lipschitz = lipschitz_bound(k, &state.w, h.mu)?;
    let outer = state.objective_trace.len();
    let mut outcome = AdmmOutcome {
        iterations: 0,
        converged: false,
        primal: f64::INFINITY,
        dz: f64::INFINITY,
        clamped: 0,
        inner_cap_hits: 0,
    };
    for t in 1..=h.max_admm {
        let (z_next, clamped, cap_hits) = z_step(state);
        outcome.clamped += clamped;
        outcome.inner_cap_hits += cap_hits;
        let c_next = update_c(&state.c, &z_next, &state.lambda, &state.w, k, y, h.mu, lipschitz)?;
        state.lambda = update_multiplier(&state.lambda, &z_next, &c_next, h.mu);

        outcome.dz = max_abs_diff(&z_next, &state.z);
        outcome.primal = max_abs_diff(&z_next, &c_next);
        outcome.iterations = t;
        state.z = z_next;
        state.c = c_next;
        state.admm_trace.push(AdmmRecord {
            outer,
            t,
            primal: outcome.primal,
            dz: outcome.dz,
        });
        if outcome.primal <= h.tol_admm && outcome.dz <= h.tol_admm {
            outcome.converged = true;
            break;
        }
    }
    if outcome.clamped > 0 {
        log::warn!(
            "{} Z-step denominators clamped to the floor (mu = {}, lambda1 = {})",
            outcome.clamped,
            h.mu,
            h.lambda1
        );
    }
    Ok(outcome)
}
