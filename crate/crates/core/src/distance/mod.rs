//! Ensemble distance between networks and state-space assembly.
//!
//! Each of the 18 properties contributes a nonnegative distance: absolute
//! difference for scalars, Euclidean distance for vectors. Degree and
//! PageRank vectors are first resampled at 64 evenly spaced quantiles so
//! networks of different sizes compare; census vectors become proportions
//! of their total. The ensemble distance is the weighted sum of the
//! scaled per-property distances.

mod mds;
mod weights;

pub use mds::{classical_mds, mds_project};
pub use weights::{fit_weights, principal_axis_weights, EnsembleWeights, Moments, SCALE_FLOOR};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exec;
use crate::features::{extract_features, FeatureSet, Properties, PROPERTY_COUNT};
use crate::generators::MechanismSpec;
use crate::graph::Graph;

pub const QUANTILES: usize = 64;

/// Per-property distances in [`crate::features::PROPERTY_NAMES`] order.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PropertyDistances(pub [f64; PROPERTY_COUNT]);

#[derive(Debug, Clone, PartialEq)]
enum Part {
    Scalar(f64),
    Vector(Vec<f64>),
}

impl Part {
    fn distance(&self, other: &Part) -> f64 {
        match (self, other) {
            (Part::Scalar(a), Part::Scalar(b)) => (a - b).abs(),
            (Part::Vector(a), Part::Vector(b)) => {
                a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum::<f64>().sqrt()
            }
            _ => unreachable!("profiles share a layout"),
        }
    }
}

/// Comparison-ready form of a [`FeatureSet`]: quantile-resampled vectors
/// and size-normalized censuses. Build once, compare many times.
#[derive(Debug, Clone, PartialEq)]
pub struct FeatureProfile {
    parts: Vec<Part>,
}

impl FeatureProfile {
    pub fn new(f: &FeatureSet) -> Self {
        let mut parts = Vec::with_capacity(PROPERTY_COUNT);
        for p in [&f.direct, &f.markov5] {
            push_parts(&mut parts, p);
        }
        FeatureProfile { parts }
    }

    pub fn distances(&self, other: &FeatureProfile) -> PropertyDistances {
        let mut out = [0.0; PROPERTY_COUNT];
        for (o, (a, b)) in out.iter_mut().zip(self.parts.iter().zip(&other.parts)) {
            *o = a.distance(b);
        }
        PropertyDistances(out)
    }
}

fn push_parts(parts: &mut Vec<Part>, p: &Properties) {
    let share = |counts: &[u64]| -> Vec<f64> {
        let total = counts.iter().sum::<u64>() as f64;
        counts.iter().map(|&c| if total > 0.0 { c as f64 / total } else { 0.0 }).collect()
    };
    parts.push(Part::Vector(quantile_resample(&p.in_degrees, QUANTILES)));
    parts.push(Part::Vector(quantile_resample(&p.out_degrees, QUANTILES)));
    parts.push(Part::Scalar(p.entropy_in));
    parts.push(Part::Scalar(p.entropy_out));
    parts.push(Part::Scalar(p.clustering));
    parts.push(Part::Vector(quantile_resample(&p.pagerank, QUANTILES)));
    parts.push(Part::Scalar(p.n_communities as f64));
    parts.push(Part::Vector(share(&p.triad_census)));
    parts.push(Part::Vector(share(&p.four_motifs)));
}

/// Linear interpolation of ascending `sorted` at `count` evenly spaced
/// quantile levels `k/(count−1)`.
pub fn quantile_resample(sorted: &[f64], count: usize) -> Vec<f64> {
    if sorted.is_empty() {
        return vec![0.0; count];
    }
    let last = (sorted.len() - 1) as f64;
    (0..count)
        .map(|k| {
            let level = if count > 1 { k as f64 / (count - 1) as f64 } else { 0.5 };
            let pos = level * last;
            let lo = pos.floor() as usize;
            let hi = (lo + 1).min(sorted.len() - 1);
            let frac = pos - lo as f64;
            sorted[lo] + frac * (sorted[hi] - sorted[lo])
        })
        .collect()
}

pub fn property_distances(a: &FeatureSet, b: &FeatureSet) -> PropertyDistances {
    FeatureProfile::new(a).distances(&FeatureProfile::new(b))
}

/// `d(a, b) = Σ_j w_j · dist_j / scale_j`
pub fn ensemble_distance(a: &FeatureSet, b: &FeatureSet, w: &EnsembleWeights) -> f64 {
    w.combine(&property_distances(a, b))
}

/// A graph with an id and optional known mechanism.
#[derive(Debug, Clone)]
pub struct LabeledGraph {
    pub id: String,
    pub graph: Graph,
    pub label: Option<MechanismSpec>,
}

/// Networks with their pairwise ensemble distances.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct StateSpace {
    pub ids: Vec<String>,
    pub labels: Vec<Option<MechanismSpec>>,
    #[serde(skip)]
    pub features: Vec<FeatureSet>,
    pub distances: Vec<Vec<f64>>,
    pub weights: EnsembleWeights,
}

impl StateSpace {
    pub fn len(&self) -> usize {
        self.ids.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ids.is_empty()
    }
}

/// Extracts features, fits weights on the graphs themselves unless `w` is
/// given, and fills the symmetric distance matrix.
pub fn build_state_space(graphs: &[LabeledGraph], w: Option<&EnsembleWeights>) -> Result<StateSpace> {
    if graphs.len() < 2 {
        return Err(Error::validation("a state space needs at least 2 networks"));
    }
    let features = exec::map_slice(graphs, |lg| extract_features(&lg.graph))
        .into_iter()
        .collect::<Result<Vec<_>>>()?;
    let weights = match w {
        Some(w) => w.clone(),
        None => fit_weights(&features)?,
    };
    let profiles = exec::map_slice(&features, FeatureProfile::new);
    let distances = distance_matrix(&profiles, &weights);
    Ok(StateSpace {
        ids: graphs.iter().map(|g| g.id.clone()).collect(),
        labels: graphs.iter().map(|g| g.label).collect(),
        features,
        distances,
        weights,
    })
}

/// Full symmetric ensemble-distance matrix with zero diagonal.
pub fn distance_matrix(profiles: &[FeatureProfile], w: &EnsembleWeights) -> Vec<Vec<f64>> {
    let n = profiles.len();
    let upper = exec::upper_triangle(n, |i, j| w.combine(&profiles[i].distances(&profiles[j])));
    let mut m = vec![vec![0.0; n]; n];
    for (i, row) in upper.into_iter().enumerate() {
        for (off, d) in row.into_iter().enumerate() {
            let j = i + 1 + off;
            m[i][j] = d;
            m[j][i] = d;
        }
    }
    m
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::features::extract_features;

    fn feats(pairs: &[(usize, usize)], n: usize) -> FeatureSet {
        extract_features(&Graph::from_pairs(n, pairs.iter().copied()).unwrap()).unwrap()
    }

    #[test]
    fn identical_sets_have_zero_distances() {
        let f = feats(&[(0, 1), (1, 2), (2, 0), (3, 0)], 5);
        assert_eq!(property_distances(&f, &f).0, [0.0; PROPERTY_COUNT]);
    }

    #[test]
    fn clustering_component() {
        let tri = feats(&[(0, 1), (1, 2), (2, 0)], 3);
        let path = feats(&[(0, 1), (1, 2)], 3);
        assert_eq!(tri.direct.clustering, 1.0);
        assert_eq!(path.direct.clustering, 0.0);
        assert_eq!(property_distances(&tri, &path).0[4], 1.0);
    }

    #[test]
    fn resample_endpoints_and_interpolation() {
        let r = quantile_resample(&[1.0, 2.0, 3.0], 5);
        assert_eq!(r, vec![1.0, 1.5, 2.0, 2.5, 3.0]);
        let c = quantile_resample(&[7.0], 4);
        assert_eq!(c, vec![7.0; 4]);
    }

    #[test]
    fn state_space_of_identical_graphs_is_zero() {
        let g = Graph::from_pairs(5, [(0, 1), (1, 2), (2, 3), (3, 4)]).unwrap();
        let graphs: Vec<LabeledGraph> = (0..2)
            .map(|i| LabeledGraph { id: format!("g{i}"), graph: g.clone(), label: None })
            .collect();
        let s = build_state_space(&graphs, None).unwrap();
        assert_eq!(s.distances, vec![vec![0.0, 0.0], vec![0.0, 0.0]]);
        assert!((s.weights.weights.iter().sum::<f64>() - 1.0).abs() < 1e-12);
    }
}
