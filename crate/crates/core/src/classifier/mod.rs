//! Mechanism classification by simulation.
//!
//! For each candidate mechanism the query is compared against simulated
//! networks: a two-stage grid search finds the parameter whose simulations
//! sit closest to the query, a null ensemble is simulated at that value,
//! and a KS test asks whether the query-to-null distances look like the
//! null-to-null distances.

mod ks;
mod roc;

pub use ks::{kolmogorov_survival, ks_statistic, ks_two_sample, KsResult};
pub use roc::{auc_rank, roc_curve, roc_evaluate, trapezoid_auc, LabeledPValues, RocConfig, RocCurve, RocPoint, RocReport};

use serde::{Deserialize, Serialize};

use crate::distance::{EnsembleWeights, FeatureProfile};
use crate::error::{Error, Result};
use crate::exec;
use crate::features::extract_features;
use crate::generators::{grow, linspace, MechanismKind, MechanismSpec};
use crate::graph::Graph;
use crate::rng::SeededRng;

pub const DEFAULT_ALPHA: f64 = 0.05;
const MIN_QUERY_NODES: usize = 4;
const ESTIMATE_EPSILON: f64 = 1e-9;

/// Simulation budget shared by the classification procedures.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SimConfig {
    /// Replicate networks per grid value.
    pub replicates: usize,
    pub coarse_grid: usize,
    pub refine_grid: usize,
    /// Null networks simulated at the best-fit parameter.
    pub null_size: usize,
    /// Grid resolution for distance-weighted parameter estimation.
    pub estimate_grid: usize,
}

impl Default for SimConfig {
    fn default() -> Self {
        SimConfig { replicates: 3, coarse_grid: 10, refine_grid: 10, null_size: 50, estimate_grid: 100 }
    }
}

impl SimConfig {
    pub fn validate(&self) -> Result<()> {
        if self.replicates == 0 || self.coarse_grid < 2 || self.refine_grid < 2 || self.estimate_grid == 0 {
            return Err(Error::validation("replicate and grid counts must be positive (grids ≥ 2)"));
        }
        if self.null_size < 5 {
            return Err(Error::validation("null ensemble needs at least 5 networks"));
        }
        Ok(())
    }
}

/// A network prepared for comparison.
#[derive(Debug, Clone)]
pub struct Query {
    n: usize,
    profile: FeatureProfile,
}

impl Query {
    pub fn new(g: &Graph) -> Result<Self> {
        if g.n() < MIN_QUERY_NODES {
            return Err(Error::validation(format!(
                "query network needs at least {MIN_QUERY_NODES} nodes (got {})",
                g.n()
            )));
        }
        Ok(Query { n: g.n(), profile: FeatureProfile::new(&extract_features(g)?) })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn profile(&self) -> &FeatureProfile {
        &self.profile
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MechanismTest {
    pub mechanism: MechanismKind,
    pub best_param: f64,
    pub ks_statistic: f64,
    pub p_value: f64,
    pub consistent: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ClassificationReport {
    pub alpha: f64,
    pub nodes: usize,
    pub tests: Vec<MechanismTest>,
    /// Mechanisms the query is consistent with; empty means none of them.
    pub verdict: Vec<MechanismKind>,
}

/// Runs simulations against fixed ensemble weights.
#[derive(Debug, Clone)]
pub struct Simulator<'w> {
    weights: &'w EnsembleWeights,
    config: SimConfig,
}

impl<'w> Simulator<'w> {
    pub fn new(weights: &'w EnsembleWeights, config: SimConfig) -> Result<Self> {
        config.validate()?;
        weights.validate()?;
        Ok(Simulator { weights, config })
    }

    pub fn config(&self) -> &SimConfig {
        &self.config
    }

    pub fn weights(&self) -> &EnsembleWeights {
        self.weights
    }

    fn profile(&self, spec: MechanismSpec, n: usize, rng: SeededRng) -> FeatureProfile {
        let g = grow(spec, n, rng).expect("grid values are in range");
        FeatureProfile::new(&extract_features(&g).expect("n ≥ 3"))
    }

    fn distance(&self, a: &FeatureProfile, b: &FeatureProfile) -> f64 {
        self.weights.combine(&a.distances(b))
    }

    /// Mean distance from the query to `replicates` simulations per value.
    fn mean_distances(&self, query: &Query, kind: MechanismKind, values: &[f64], rng: SeededRng) -> Vec<f64> {
        let reps = self.config.replicates;
        let d = exec::map_range(values.len() * reps, |job| {
            let (vi, r) = (job / reps, job % reps);
            let spec = MechanismSpec { kind, param: values[vi] };
            let p = self.profile(spec, query.n, rng.derive(vi as u64).derive(r as u64));
            self.distance(&query.profile, &p)
        });
        d.chunks(reps).map(|c| c.iter().sum::<f64>() / reps as f64).collect()
    }

    /// Coarse grid over the parameter range, then one refinement pass
    /// spanning the coarse minimum's two neighbors.
    pub fn best_fit_param(&self, query: &Query, kind: MechanismKind, rng: SeededRng) -> f64 {
        let coarse = kind.grid(self.config.coarse_grid);
        let coarse_d = self.mean_distances(query, kind, &coarse, rng.derive_named("coarse"));
        let i = argmin(&coarse_d);
        let lo = coarse[i.saturating_sub(1)];
        let hi = coarse[(i + 1).min(coarse.len() - 1)];
        let fine: Vec<f64> = linspace(lo, hi, self.config.refine_grid).into_iter().map(|p| kind.clamp(p)).collect();
        let fine_d = self.mean_distances(query, kind, &fine, rng.derive_named("refine"));
        fine[argmin(&fine_d)]
    }

    /// Best fit plus the KS comparison against a simulated null at it.
    pub fn test_mechanism(&self, query: &Query, kind: MechanismKind, alpha: f64, rng: SeededRng) -> Result<MechanismTest> {
        let best = self.best_fit_param(query, kind, rng.derive_named("fit"));
        let spec = MechanismSpec::new(kind, best)?;
        let null_rng = rng.derive_named("null");
        let nulls = exec::map_range(self.config.null_size, |k| self.profile(spec, query.n, null_rng.derive(k as u64)));
        let within: Vec<f64> = exec::upper_triangle(nulls.len(), |i, j| self.distance(&nulls[i], &nulls[j]))
            .into_iter()
            .flatten()
            .collect();
        let to_query: Vec<f64> = nulls.iter().map(|p| self.distance(&query.profile, p)).collect();
        let ks = ks_two_sample(&within, &to_query)?;
        Ok(MechanismTest {
            mechanism: kind,
            best_param: best,
            ks_statistic: ks.statistic,
            p_value: ks.p_value,
            consistent: ks.p_value >= alpha,
        })
    }

    /// Tests the query against each candidate; the verdict lists every
    /// consistent mechanism (no multiple-testing correction).
    pub fn classify(&self, query: &Query, candidates: &[MechanismKind], alpha: f64, rng: SeededRng) -> Result<ClassificationReport> {
        if candidates.is_empty() {
            return Err(Error::validation("at least one candidate mechanism is required"));
        }
        if !(alpha > 0.0 && alpha <= 1.0) {
            return Err(Error::validation(format!("alpha must be in (0, 1], got {alpha}")));
        }
        let tests = exec::map_slice(candidates, |&kind| {
            self.test_mechanism(query, kind, alpha, rng.derive_named(kind.name()))
        })
        .into_iter()
        .collect::<Result<Vec<_>>>()?;
        let verdict = tests.iter().filter(|t| t.consistent).map(|t| t.mechanism).collect();
        Ok(ClassificationReport { alpha, nodes: query.n, tests, verdict })
    }

    /// Inverse-distance weighted mean of the parameter grid:
    /// `Σ p_i/(d_i+ε) / Σ 1/(d_i+ε)` over every grid replicate.
    pub fn estimate_param(&self, query: &Query, kind: MechanismKind, rng: SeededRng) -> f64 {
        let grid = kind.grid(self.config.estimate_grid);
        let reps = self.config.replicates;
        let d = exec::map_range(grid.len() * reps, |job| {
            let (vi, r) = (job / reps, job % reps);
            let p = self.profile(MechanismSpec { kind, param: grid[vi] }, query.n, rng.derive(vi as u64).derive(r as u64));
            self.distance(&query.profile, &p)
        });
        let params: Vec<f64> = (0..d.len()).map(|job| grid[job / reps]).collect();
        inverse_distance_mean(&params, &d)
    }
}

pub(crate) fn inverse_distance_mean(values: &[f64], distances: &[f64]) -> f64 {
    let (num, den) = values.iter().zip(distances).fold((0.0, 0.0), |(num, den), (v, d)| {
        let w = 1.0 / (d + ESTIMATE_EPSILON);
        (num + w * v, den + w)
    });
    num / den
}

fn argmin(v: &[f64]) -> usize {
    v.iter()
        .enumerate()
        .fold((0, f64::INFINITY), |(bi, bv), (i, &x)| if x < bv { (i, x) } else { (bi, bv) })
        .0
}
