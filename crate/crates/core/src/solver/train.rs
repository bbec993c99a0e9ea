use std::time::Instant;

use nalgebra::DMatrix;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{admm_solve_z, build_bundled_kernel, exclusivity_penalty, objective, update_w, BundledKernel, SolverError};
use crate::data::{
    build_group_weights, DescriptorDataset, Hyperparameters, ModelMeta, ProjectionMatrix,
    PrototypeModel, Selection, SelectionMatrix,
};

/// One outer (block coordinate descent) iteration.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OuterRecord {
    /// Outer iteration index; 0 is the initial point.
    pub k: usize,
    pub objective: f64,
    /// Exclusivity penalty of `C`.
    pub exclusivity: f64,
    /// `‖Z − C‖_∞` after the selection block.
    pub primal_residual: f64,
    pub admm_iterations: u32,
    pub admm_converged: bool,
    /// Seconds since training started.
    pub elapsed: f64,
}

/// One inner ADMM iteration.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AdmmRecord {
    pub outer: usize,
    pub t: u32,
    pub primal: f64,
    pub dz: f64,
}

/// Solver iterates and traces.
///
/// `c` keeps simplex columns at every outer boundary; `z` is its
/// unconstrained ADMM twin and may leave the simplex by up to `tol_admm`.
#[derive(Debug, Clone)]
pub struct SolverState {
    pub z: DMatrix<f64>,
    pub c: DMatrix<f64>,
    pub lambda: DMatrix<f64>,
    pub w: DMatrix<f64>,
    pub hyper: Hyperparameters,
    pub objective_trace: Vec<OuterRecord>,
    pub admm_trace: Vec<AdmmRecord>,
    /// Outer loop stopped on the objective-change test.
    pub converged: bool,
    /// Outer iterations whose inner ADMM hit its cap.
    pub admm_cap_hits: usize,
    pub inner_cap_hits: usize,
    pub clamped: usize,
}

impl SolverState {
    pub fn objective_values(&self) -> Vec<f64> {
        self.objective_trace.iter().map(|r| r.objective).collect()
    }

    /// The last ADMM call converged.
    pub fn last_admm_converged(&self) -> bool {
        self.objective_trace.last().is_some_and(|r| r.admm_converged)
    }

    /// True when any iteration cap was reached.
    pub fn caps_hit(&self) -> bool {
        !self.converged || self.admm_cap_hits > 0
    }
}

#[derive(Debug, Clone)]
pub struct Trained {
    pub model: PrototypeModel,
    pub state: SolverState,
}

/// Starting selection: columns of positive weights drawn uniformly from
/// `[0.5, 1.5]`, normalized to the simplex.
///
/// A perfectly uniform start is a symmetric point that the updates never
/// leave (all prototypes stay identical), so the seed jitters it.
pub fn initial_selection(n: usize, d_bar: usize, seed: u32) -> DMatrix<f64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed as u64);
    let mut c = DMatrix::from_fn(n, d_bar, |_, _| 0.5 + rng.random::<f64>());
    for mut col in c.column_iter_mut() {
        let s = col.sum();
        col /= s;
    }
    c
}

/// Supervised training over every sample.
pub fn train(ds: &DescriptorDataset, hyper: &Hyperparameters) -> Result<Trained, SolverError> {
    let y = ds.responses().ok_or(SolverError::MissingResponses)?.clone();
    let groups = build_group_weights(ds.partition())?;
    let k = build_bundled_kernel(ds, &groups, false)?;
    run(ds, hyper, &k, y)
}

/// Semi-supervised training: regression terms over labeled samples only,
/// prototypes drawn from every descriptor.
pub fn train_semi(ds: &DescriptorDataset, hyper: &Hyperparameters) -> Result<Trained, SolverError> {
    let labeled = ds.labeled_indices().ok_or(SolverError::MissingMask)?;
    let y_all = ds.responses().ok_or(SolverError::MissingResponses)?;
    let y = DMatrix::from_fn(labeled.len(), y_all.ncols(), |r, c| y_all[(labeled[r], c)]);
    let groups = build_group_weights(ds.partition())?;
    let k = build_bundled_kernel(ds, &groups, true)?;
    run(ds, hyper, &k, y)
}

fn run(
    ds: &DescriptorDataset,
    hyper: &Hyperparameters,
    k: &BundledKernel,
    y: DMatrix<f64>,
) -> Result<Trained, SolverError> {
    let start = Instant::now();
    let n = ds.n_descriptors();
    hyper.validate(n)?;
    let h = *hyper;
    if h.lambda1 >= h.mu / 4.0 {
        // With selection entries far below eps_reweight the re-weighting
        // diagonal sits near -1, the Z-update denominator near mu - 2 lambda1,
        // and the multiplier recursion contracts only while lambda1 < mu / 4.
        log::warn!(
            "lambda1 = {} >= mu / 4 = {}: inner ADMM may oscillate or diverge; consider mu > 4 lambda1",
            h.lambda1,
            h.mu / 4.0
        );
    }

    let c0 = initial_selection(n, h.d_bar, h.seed);
    let excl0 = exclusivity_penalty(&c0);
    let w0 = update_w(k, &c0, &y, h.lambda2)?;
    let j0 = objective(&c0, &w0, k, &y, h.lambda1, h.lambda2)?;
    if !j0.is_finite() {
        return Err(SolverError::NonFiniteObjective { outer: 0, value: j0 });
    }
    let mut state = SolverState {
        z: c0.clone(),
        c: c0,
        lambda: DMatrix::zeros(n, h.d_bar),
        w: w0,
        hyper: h,
        objective_trace: vec![OuterRecord {
            k: 0,
            objective: j0,
            exclusivity: excl0,
            primal_residual: 0.0,
            admm_iterations: 0,
            admm_converged: true,
            elapsed: start.elapsed().as_secs_f64(),
        }],
        admm_trace: Vec::new(),
        converged: false,
        admm_cap_hits: 0,
        inner_cap_hits: 0,
        clamped: 0,
    };

    let mut previous = j0;
    for outer in 1..=h.max_outer as usize {
        let admm = admm_solve_z(&mut state, k, &y)?;
        if !admm.converged {
            state.admm_cap_hits += 1;
        }
        state.inner_cap_hits += admm.inner_cap_hits;
        state.clamped += admm.clamped;
        state.w = update_w(k, &state.c, &y, h.lambda2)?;
        let j = objective(&state.c, &state.w, k, &y, h.lambda1, h.lambda2)?;
        if !j.is_finite() {
            return Err(SolverError::NonFiniteObjective { outer, value: j });
        }
        state.objective_trace.push(OuterRecord {
            k: outer,
            objective: j,
            exclusivity: exclusivity_penalty(&state.c),
            primal_residual: admm.primal,
            admm_iterations: admm.iterations,
            admm_converged: admm.converged,
            elapsed: start.elapsed().as_secs_f64(),
        });
        log::debug!(
            "outer {outer}: objective {j:.6e}, admm {} iterations, |Z-C| {:.2e}",
            admm.iterations,
            admm.primal
        );
        if (previous - j).abs() < h.tol_outer {
            state.converged = true;
            break;
        }
        previous = j;
    }

    let c = SelectionMatrix::new(state.c.clone())?;
    let model = PrototypeModel {
        prototype_book: ds.descriptors() * c.as_matrix(),
        projection: ProjectionMatrix::new(state.w.clone())?,
        hyper: h,
        final_objective: previous_objective(&state),
        selection: Some(Selection::new(c)),
        meta: ModelMeta {
            dim: ds.dim(),
            n_descriptors: n,
            n_samples: ds.n_samples(),
            n_outputs: y.ncols(),
        },
    };
    Ok(Trained { model, state })
}

fn previous_objective(state: &SolverState) -> f64 {
    state.objective_trace.last().map_or(f64::NAN, |r| r.objective)
}
