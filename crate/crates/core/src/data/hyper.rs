use super::DataError;

/// Model and solver settings.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Hyperparameters {
    /// Exclusivity weight `λ₁`.
    pub lambda1: f64,
    /// Ridge weight `λ₂` on the projection.
    pub lambda2: f64,
    /// ADMM penalty `μ`, fixed for the whole run.
    pub mu: f64,
    /// Number of prototypes `d̄`.
    pub d_bar: usize,
    /// Denominator guard of the re-weighting diagonal.
    pub eps_reweight: f64,
    pub tol_inner_row: f64,
    pub tol_admm: f64,
    /// Absolute change of the objective that ends the outer loop.
    pub tol_outer: f64,
    pub max_inner_row: u32,
    pub max_admm: u32,
    pub max_outer: u32,
    /// Seeds the symmetry-breaking jitter of the initial selection.
    pub seed: u32,
}

impl Default for Hyperparameters {
    fn default() -> Self {
        Hyperparameters {
            lambda1: 0.1,
            lambda2: 1.0,
            mu: 1.0,
            d_bar: 2,
            eps_reweight: 0.1,
            tol_inner_row: 1e-6,
            tol_admm: 1e-4,
            tol_outer: 0.1,
            max_inner_row: 50,
            max_admm: 200,
            max_outer: 50,
            seed: 0,
        }
    }
}

impl Hyperparameters {
    /// Checks the settings against a dataset of `n_descriptors` columns.
    pub fn validate(&self, n_descriptors: usize) -> Result<(), DataError> {
        let bad = |msg: String| Err(DataError::Hyperparameters(msg));
        if !(self.lambda1 >= 0.0 && self.lambda1.is_finite()) {
            return bad(format!("lambda1 must be finite and >= 0, got {}", self.lambda1));
        }
        if !(self.lambda2 >= 0.0 && self.lambda2.is_finite()) {
            return bad(format!("lambda2 must be finite and >= 0, got {}", self.lambda2));
        }
        if !(self.mu > 0.0 && self.mu.is_finite()) {
            return bad(format!("mu must be finite and > 0, got {}", self.mu));
        }
        if self.d_bar == 0 || self.d_bar > n_descriptors {
            return bad(format!(
                "d_bar must lie in 1..={n_descriptors}, got {}",
                self.d_bar
            ));
        }
        for (name, v) in [
            ("eps_reweight", self.eps_reweight),
            ("tol_inner_row", self.tol_inner_row),
            ("tol_admm", self.tol_admm),
            ("tol_outer", self.tol_outer),
        ] {
            if !(v > 0.0) {
                return bad(format!("{name} must be > 0, got {v}"));
            }
        }
        if !self.eps_reweight.is_finite() {
            return bad("eps_reweight must be finite".into());
        }
        for (name, v) in [
            ("max_inner_row", self.max_inner_row),
            ("max_admm", self.max_admm),
            ("max_outer", self.max_outer),
        ] {
            if v == 0 {
                return bad(format!("{name} must be >= 1"));
            }
        }
        Ok(())
    }
}
