//! Functional properties of mixture networks: normalized Ascendency, its
//! nearest-neighbor prediction in the state space, and the
//! composition-identifiability experiment.

mod ascendency;

pub use ascendency::{ascendency, AscendencyResult};

use rand::seq::SliceRandom;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::distance::{EnsembleWeights, FeatureProfile};
use crate::error::{Error, Result};
use crate::exec;
use crate::features::{extract_features, FeatureSet};
use crate::generators::{grow_mixture, MechanismKind, MechanismSpec, MixtureAssignment};
use crate::rng::SeededRng;

pub const DEFAULT_NEIGHBORS: usize = 10;
const EPSILON: f64 = 1e-9;

/// Parameters used for every mechanism in the identifiability experiment.
pub const REPRESENTATIVE_PARAMS: [(MechanismKind, f64); 5] = [
    (MechanismKind::Er, 0.1),
    (MechanismKind::Dd, 0.5),
    (MechanismKind::Niche, 0.15),
    (MechanismKind::Pa, 2.0),
    (MechanismKind::Sw, 0.1),
];

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MixturePanelEntry {
    pub id: String,
    /// Fraction of nodes per mechanism, in [`MechanismKind::ALL`] order.
    pub proportions: [f64; 5],
    /// Governing parameter per mechanism, same order.
    pub params: [f64; 5],
    pub normalized_ascendency: f64,
    pub features: FeatureSet,
}

/// Uniform draw from the simplex via normalized exponentials.
fn simplex_point<R: Rng>(dim: usize, rng: &mut R) -> Vec<f64> {
    let e: Vec<f64> = (0..dim).map(|_| -(1.0 - rng.random::<f64>()).ln()).collect();
    let total: f64 = e.iter().sum();
    e.iter().map(|x| x / total).collect()
}

fn random_param<R: Rng>(kind: MechanismKind, rng: &mut R) -> f64 {
    let (lo, hi) = kind.range();
    kind.clamp(lo + (hi - lo) * rng.random::<f64>())
}

/// Mixture of `specs` with uniformly random proportions.
fn random_mixture(specs: &[MechanismSpec], nodes: usize, rng: SeededRng) -> Result<MixtureAssignment> {
    let mut r = rng.rng();
    let weights = simplex_point(specs.len(), &mut r);
    let parts: Vec<(MechanismSpec, f64)> = specs.iter().copied().zip(weights).collect();
    MixtureAssignment::from_proportions(&parts, nodes, &mut r)
}

/// `size` grow-mixture networks over all five mechanisms, each with random
/// proportions and a random governing parameter per mechanism.
pub fn generate_mixture_panel(size: usize, nodes: usize, rng: SeededRng) -> Result<Vec<MixturePanelEntry>> {
    exec::map_range(size, |i| {
        let stream = rng.derive(i as u64);
        let mut r = stream.derive_named("params").rng();
        let specs: Vec<MechanismSpec> =
            MechanismKind::ALL.iter().map(|&k| MechanismSpec { kind: k, param: random_param(k, &mut r) }).collect();
        let assignment = random_mixture(&specs, nodes, stream.derive_named("mixture"))?;
        let g = grow_mixture(&assignment, stream.derive_named("grow"))?;
        let mut params = [0.0; 5];
        params.iter_mut().zip(&specs).for_each(|(p, s)| *p = s.param);
        Ok(MixturePanelEntry {
            id: format!("mix{i:04}"),
            proportions: assignment.proportions(),
            params,
            normalized_ascendency: ascendency(&g).normalized,
            features: extract_features(&g)?,
        })
    })
    .into_iter()
    .collect()
}

fn weighted_neighbors(distances: &[(usize, f64)], targets: &[f64], k: usize) -> f64 {
    let mut sorted = distances.to_vec();
    sorted.sort_by(|a, b| a.1.total_cmp(&b.1).then(a.0.cmp(&b.0)));
    let (num, den) = sorted.iter().take(k).fold((0.0, 0.0), |(num, den), &(i, d)| {
        let w = 1.0 / (d + EPSILON);
        (num + w * targets[i], den + w)
    });
    num / den
}

/// Inverse-distance weighted mean ascendency of the `k` nearest panel entries.
pub fn predict_function(query: &FeatureSet, panel: &[MixturePanelEntry], k: usize, w: &EnsembleWeights) -> Result<f64> {
    if panel.is_empty() {
        return Err(Error::validation("prediction panel is empty"));
    }
    if k == 0 {
        return Err(Error::validation("k must be at least 1"));
    }
    let q = FeatureProfile::new(query);
    let targets: Vec<f64> = panel.iter().map(|e| e.normalized_ascendency).collect();
    let distances: Vec<(usize, f64)> = exec::map_slice(panel, |e| w.combine(&q.distances(&FeatureProfile::new(&e.features))))
        .into_iter()
        .enumerate()
        .collect();
    Ok(weighted_neighbors(&distances, &targets, k.min(panel.len())))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LooReport {
    pub pearson_r: f64,
    pub rmse: f64,
    /// `(predicted, actual)` per panel entry.
    pub pairs: Vec<(f64, f64)>,
}

/// Leave-one-out prediction of every panel entry from the rest.
pub fn loo_evaluate(panel: &[MixturePanelEntry], k: usize, w: &EnsembleWeights) -> Result<LooReport> {
    if panel.len() < 2 || k == 0 {
        return Err(Error::validation("leave-one-out needs at least 2 entries and k ≥ 1"));
    }
    let profiles = exec::map_slice(panel, |e| FeatureProfile::new(&e.features));
    let dist = crate::distance::distance_matrix(&profiles, w);
    let targets: Vec<f64> = panel.iter().map(|e| e.normalized_ascendency).collect();
    let pairs: Vec<(f64, f64)> = (0..panel.len())
        .map(|i| {
            let others: Vec<(usize, f64)> = (0..panel.len()).filter(|&j| j != i).map(|j| (j, dist[i][j])).collect();
            (weighted_neighbors(&others, &targets, k.min(others.len())), targets[i])
        })
        .collect();
    let (pred, actual): (Vec<f64>, Vec<f64>) = pairs.iter().copied().unzip();
    let rmse = (pairs.iter().map(|(p, a)| (p - a) * (p - a)).sum::<f64>() / pairs.len() as f64).sqrt();
    Ok(LooReport { pearson_r: pearson(&pred, &actual).unwrap_or(0.0), rmse, pairs })
}

/// Pearson correlation; `None` when either side has zero variance.
pub fn pearson(x: &[f64], y: &[f64]) -> Option<f64> {
    let n = x.len().min(y.len());
    if n < 2 {
        return None;
    }
    let mx = x[..n].iter().sum::<f64>() / n as f64;
    let my = y[..n].iter().sum::<f64>() / n as f64;
    let (mut sxy, mut sxx, mut syy) = (0.0, 0.0, 0.0);
    for (a, b) in x[..n].iter().zip(&y[..n]) {
        sxy += (a - mx) * (b - my);
        sxx += (a - mx) * (a - mx);
        syy += (b - my) * (b - my);
    }
    if sxx <= 0.0 || syy <= 0.0 {
        return None;
    }
    Some(sxy / (sxx * syy).sqrt())
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IdentifiabilityResult {
    pub n_mechanisms: usize,
    pub mechanisms: Vec<MechanismKind>,
    pub correlation: f64,
    /// True when the correlation was undefined (zero variance) and reported as 0.
    pub degenerate: bool,
}

/// Correlation, over all pairs of a panel, between ensemble distance and
/// L1 distance of the panel entries' proportion vectors.
pub fn composition_correlation(profiles: &[FeatureProfile], proportions: &[[f64; 5]], w: &EnsembleWeights) -> (f64, bool) {
    let dist = crate::distance::distance_matrix(profiles, w);
    let (mut ens, mut comp) = (Vec::new(), Vec::new());
    for i in 0..profiles.len() {
        for j in (i + 1)..profiles.len() {
            ens.push(dist[i][j]);
            comp.push(proportions[i].iter().zip(&proportions[j]).map(|(a, b)| (a - b).abs()).sum::<f64>());
        }
    }
    match pearson(&ens, &comp) {
        Some(r) => (r, false),
        None => (0.0, true),
    }
}

/// Grows `size` mixtures over `n_mechanisms` randomly chosen mechanisms
/// (random proportions, representative parameters) and measures how well
/// state-space distance tracks composition distance.
pub fn identifiability_experiment(
    n_mechanisms: usize,
    size: usize,
    nodes: usize,
    w: &EnsembleWeights,
    rng: SeededRng,
) -> Result<IdentifiabilityResult> {
    if !(2..=5).contains(&n_mechanisms) {
        return Err(Error::validation("identifiability uses 2 to 5 mechanisms"));
    }
    if size < 3 {
        return Err(Error::validation("identifiability panel needs at least 3 networks"));
    }
    let mut chosen: Vec<(MechanismKind, f64)> = REPRESENTATIVE_PARAMS.to_vec();
    chosen.shuffle(&mut rng.derive_named("choose").rng());
    chosen.truncate(n_mechanisms);
    chosen.sort_by_key(|(k, _)| *k);
    let specs: Vec<MechanismSpec> = chosen.iter().map(|&(kind, param)| MechanismSpec { kind, param }).collect();

    let panel = exec::map_range(size, |i| -> Result<(FeatureProfile, [f64; 5])> {
        let stream = rng.derive(i as u64);
        let assignment = random_mixture(&specs, nodes, stream.derive_named("mixture"))?;
        let g = grow_mixture(&assignment, stream.derive_named("grow"))?;
        Ok((FeatureProfile::new(&extract_features(&g)?), assignment.proportions()))
    })
    .into_iter()
    .collect::<Result<Vec<_>>>()?;
    let (profiles, props): (Vec<_>, Vec<_>) = panel.into_iter().unzip();
    let (correlation, degenerate) = composition_correlation(&profiles, &props, w);
    Ok(IdentifiabilityResult {
        n_mechanisms,
        mechanisms: specs.iter().map(|s| s.kind).collect(),
        correlation,
        degenerate,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::Graph;

    fn entry(g: &Graph, asc: f64) -> MixturePanelEntry {
        MixturePanelEntry {
            id: "x".into(),
            proportions: [1.0, 0.0, 0.0, 0.0, 0.0],
            params: [0.1, 0.0, 0.1, 0.0, 0.0],
            normalized_ascendency: asc,
            features: extract_features(g).unwrap(),
        }
    }

    fn graphs() -> Vec<Graph> {
        (0..6)
            .map(|k| Graph::from_pairs(8, (0..8).map(|i| (i, (i + 1 + k) % 8)).chain([(0, 4)])).unwrap())
            .chain([Graph::from_pairs(8, [(0, 1), (1, 2), (2, 3), (3, 0), (4, 5)]).unwrap()])
            .collect()
    }

    #[test]
    fn simplex_points_sum_to_one() {
        let mut rng = SeededRng::new(1).rng();
        for _ in 0..100 {
            let p = simplex_point(5, &mut rng);
            assert!((p.iter().sum::<f64>() - 1.0).abs() < 1e-12);
            assert!(p.iter().all(|&x| x >= 0.0));
        }
    }

    #[test]
    fn query_in_panel_returns_its_value() {
        let w = EnsembleWeights::uniform();
        let gs = graphs();
        let panel: Vec<_> = gs.iter().enumerate().map(|(i, g)| entry(g, 0.1 * i as f64)).collect();
        let query = extract_features(&gs[6]).unwrap();
        let p = predict_function(&query, &panel, 3, &w).unwrap();
        assert!((p - 0.6).abs() < 1e-6, "{p}");
    }

    #[test]
    fn constant_target_is_returned() {
        let w = EnsembleWeights::uniform();
        let gs = graphs();
        let panel: Vec<_> = gs.iter().map(|g| entry(g, 0.37)).collect();
        let q = extract_features(&gs[2]).unwrap();
        assert!((predict_function(&q, &panel, 10, &w).unwrap() - 0.37).abs() < 1e-12);
        assert!(predict_function(&q, &[], 10, &w).is_err());
    }

    #[test]
    fn prediction_is_convex_combination() {
        let w = EnsembleWeights::uniform();
        let gs = graphs();
        let panel: Vec<_> = gs.iter().enumerate().map(|(i, g)| entry(g, (i as f64 * 0.37).sin().abs())).collect();
        let q = extract_features(&Graph::from_pairs(8, [(0, 1), (1, 0), (2, 3)]).unwrap()).unwrap();
        for k in 1..=panel.len() {
            let p = predict_function(&q, &panel, k, &w).unwrap();
            let lo = panel.iter().map(|e| e.normalized_ascendency).fold(f64::INFINITY, f64::min);
            let hi = panel.iter().map(|e| e.normalized_ascendency).fold(f64::NEG_INFINITY, f64::max);
            assert!(p >= lo - 1e-12 && p <= hi + 1e-12);
        }
    }

    #[test]
    fn loo_on_identical_graphs_is_exact() {
        let w = EnsembleWeights::uniform();
        let g = Graph::from_pairs(6, [(0, 1), (1, 2), (2, 0), (3, 4)]).unwrap();
        let a = ascendency(&g).normalized;
        let panel: Vec<_> = (0..20).map(|_| entry(&g, a)).collect();
        let r = loo_evaluate(&panel, 10, &w).unwrap();
        assert_eq!(r.rmse, 0.0);
    }

    #[test]
    fn degenerate_proportions_flagged() {
        let w = EnsembleWeights::uniform();
        let gs = graphs();
        let profiles: Vec<_> = gs.iter().map(|g| FeatureProfile::new(&extract_features(g).unwrap())).collect();
        let props = vec![[0.5, 0.5, 0.0, 0.0, 0.0]; profiles.len()];
        assert_eq!(composition_correlation(&profiles, &props, &w), (0.0, true));
    }

    #[test]
    fn pearson_basics() {
        assert!((pearson(&[1.0, 2.0, 3.0], &[2.0, 4.0, 6.0]).unwrap() - 1.0).abs() < 1e-12);
        assert!(pearson(&[1.0, 1.0], &[2.0, 3.0]).is_none());
    }

    #[test]
    fn experiment_rejects_bad_counts() {
        let w = EnsembleWeights::uniform();
        assert!(identifiability_experiment(1, 10, 20, &w, SeededRng::new(0)).is_err());
        assert!(identifiability_experiment(6, 10, 20, &w, SeededRng::new(0)).is_err());
    }
}
