use std::collections::BTreeMap;

use nalgebra::{DMatrix, SymmetricEigen};
use serde::{Deserialize, Serialize};

use super::{FeatureProfile, PropertyDistances};
use crate::error::{Error, Result};
use crate::exec;
use crate::features::{FeatureSet, PROPERTY_COUNT, PROPERTY_NAMES};

/// Smallest per-property scale; columns at the floor get zero weight.
pub const SCALE_FLOOR: f64 = 1e-12;

/// Property weights (summing to 1) and normalization scales.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "NamedWeights", into = "NamedWeights")]
pub struct EnsembleWeights {
    pub weights: [f64; PROPERTY_COUNT],
    pub scales: [f64; PROPERTY_COUNT],
}

impl EnsembleWeights {
    /// Equal weights, unit scales.
    pub fn uniform() -> Self {
        EnsembleWeights { weights: [1.0 / PROPERTY_COUNT as f64; PROPERTY_COUNT], scales: [1.0; PROPERTY_COUNT] }
    }

    pub fn combine(&self, d: &PropertyDistances) -> f64 {
        self.weights
            .iter()
            .zip(&self.scales)
            .zip(&d.0)
            .filter(|((w, _), _)| **w > 0.0)
            .map(|((w, s), x)| w * x / s)
            .sum()
    }

    pub fn validate(&self) -> Result<()> {
        let sum: f64 = self.weights.iter().sum();
        if self.weights.iter().any(|w| !(*w >= 0.0)) || (sum - 1.0).abs() > 1e-9 {
            return Err(Error::validation("weights must be nonnegative and sum to 1"));
        }
        if self.scales.iter().any(|s| !(*s > 0.0) || !s.is_finite()) {
            return Err(Error::validation("scales must be positive"));
        }
        Ok(())
    }

    pub fn from_json(text: &str) -> Result<Self> {
        Ok(serde_json::from_str(text)?)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("weights serialize")
    }
}

#[derive(Serialize, Deserialize)]
struct NamedWeights {
    weights: BTreeMap<String, f64>,
    scales: BTreeMap<String, f64>,
}

impl From<EnsembleWeights> for NamedWeights {
    fn from(w: EnsembleWeights) -> Self {
        let named = |v: &[f64; PROPERTY_COUNT]| {
            PROPERTY_NAMES.iter().zip(v).map(|(k, x)| (k.to_string(), *x)).collect()
        };
        NamedWeights { weights: named(&w.weights), scales: named(&w.scales) }
    }
}

impl TryFrom<NamedWeights> for EnsembleWeights {
    type Error = Error;

    fn try_from(n: NamedWeights) -> Result<Self> {
        let pick = |m: &BTreeMap<String, f64>, what: &str| -> Result<[f64; PROPERTY_COUNT]> {
            let mut out = [0.0; PROPERTY_COUNT];
            for (o, name) in out.iter_mut().zip(PROPERTY_NAMES) {
                *o = *m
                    .get(name)
                    .ok_or_else(|| Error::validation(format!("{what} missing property {name}")))?;
            }
            Ok(out)
        };
        let w = EnsembleWeights { weights: pick(&n.weights, "weights")?, scales: pick(&n.scales, "scales")? };
        w.validate()?;
        Ok(w)
    }
}

/// Streaming first and second moments of row vectors, accumulated relative
/// to a fixed shift so constant columns come out with exactly zero variance.
#[derive(Debug, Clone)]
pub struct Moments {
    shift: Vec<f64>,
    count: usize,
    sum: Vec<f64>,
    cross: Vec<f64>,
}

impl Moments {
    pub fn new(shift: Vec<f64>) -> Self {
        let p = shift.len();
        Moments { shift, count: 0, sum: vec![0.0; p], cross: vec![0.0; p * p] }
    }

    pub fn push(&mut self, row: &[f64]) {
        let p = self.shift.len();
        let y: Vec<f64> = row.iter().zip(&self.shift).map(|(x, s)| x - s).collect();
        for j in 0..p {
            self.sum[j] += y[j];
            if y[j] == 0.0 {
                continue;
            }
            for k in j..p {
                self.cross[j * p + k] += y[j] * y[k];
            }
        }
        self.count += 1;
    }

    /// Adds another accumulator built with the same shift.
    pub fn merge(&mut self, other: &Moments) {
        debug_assert_eq!(self.shift, other.shift);
        self.count += other.count;
        self.sum.iter_mut().zip(&other.sum).for_each(|(a, b)| *a += b);
        self.cross.iter_mut().zip(&other.cross).for_each(|(a, b)| *a += b);
    }

    pub fn count(&self) -> usize {
        self.count
    }

    /// Sample covariance matrix (row-major, p×p).
    pub fn covariance(&self) -> Vec<f64> {
        let p = self.shift.len();
        let n = self.count as f64;
        let denom = (n - 1.0).max(1.0);
        let mut cov = vec![0.0; p * p];
        for j in 0..p {
            for k in j..p {
                let c = (self.cross[j * p + k] - self.sum[j] * self.sum[k] / n) / denom;
                cov[j * p + k] = c;
                cov[k * p + j] = c;
            }
        }
        cov
    }
}

/// Weights from the first principal axis of the standardized columns.
///
/// Returns `(weights, scales)`: scales are column standard deviations
/// floored at [`SCALE_FLOOR`]; weights are the absolute loadings on the
/// leading eigenvector of the correlation matrix, normalized to sum 1.
/// Floored columns get weight 0. If every column is floored the weights
/// are uniform.
pub fn principal_axis_weights(m: &Moments) -> (Vec<f64>, Vec<f64>) {
    let p = m.shift.len();
    let cov = m.covariance();
    let sd: Vec<f64> = (0..p).map(|j| cov[j * p + j].max(0.0).sqrt()).collect();
    let live: Vec<bool> = sd.iter().map(|&s| s > SCALE_FLOOR).collect();
    let scales: Vec<f64> = sd.iter().map(|&s| s.max(SCALE_FLOOR)).collect();

    if !live.iter().any(|&l| l) {
        return (vec![1.0 / p as f64; p], scales);
    }
    let corr = DMatrix::from_fn(p, p, |j, k| {
        if live[j] && live[k] {
            cov[j * p + k] / (sd[j] * sd[k])
        } else {
            0.0
        }
    });
    let eig = SymmetricEigen::new(corr);
    let top = (0..p)
        .max_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]).then(b.cmp(&a)))
        .expect("p ≥ 1");
    let mut weights: Vec<f64> =
        (0..p).map(|j| if live[j] { eig.eigenvectors[(j, top)].abs() } else { 0.0 }).collect();
    let total: f64 = weights.iter().sum();
    weights.iter_mut().for_each(|w| *w /= total);
    (weights, scales)
}

/// Fits ensemble weights on all pairwise property distances of a panel.
pub fn fit_weights(panel: &[FeatureSet]) -> Result<EnsembleWeights> {
    if panel.len() < 2 {
        return Err(Error::validation("weight fitting needs at least 2 networks"));
    }
    let profiles = exec::map_slice(panel, FeatureProfile::new);
    let shift = profiles[0].distances(&profiles[1]).0.to_vec();
    let n = profiles.len();
    let partials = exec::map_range(n, |i| {
        let mut m = Moments::new(shift.clone());
        for j in (i + 1)..n {
            m.push(&profiles[i].distances(&profiles[j]).0);
        }
        m
    });
    let mut total = Moments::new(shift);
    for part in &partials {
        total.merge(part);
    }
    let (w, s) = principal_axis_weights(&total);
    let mut weights = [0.0; PROPERTY_COUNT];
    let mut scales = [0.0; PROPERTY_COUNT];
    weights.copy_from_slice(&w);
    scales.copy_from_slice(&s);
    Ok(EnsembleWeights { weights, scales })
}
