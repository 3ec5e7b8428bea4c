//! Self-validation: classify labeled simulated networks and summarize each
//! mechanism's p-values as an ROC curve.

use serde::{Deserialize, Serialize};

use super::{Query, Simulator};
use crate::error::{Error, Result};
use crate::exec;
use crate::generators::{grow, kind_index, MechanismKind, MechanismSpec};
use crate::rng::SeededRng;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RocConfig {
    pub per_mechanism: usize,
    pub nodes: usize,
    pub mechanisms: Vec<MechanismKind>,
}

impl RocConfig {
    pub fn new(per_mechanism: usize, nodes: usize) -> Self {
        RocConfig { per_mechanism, nodes, mechanisms: MechanismKind::ALL.to_vec() }
    }
}

/// One labeled panel network and its p-value under every candidate.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LabeledPValues {
    pub label: MechanismKind,
    pub param: f64,
    pub p_values: Vec<(MechanismKind, f64)>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RocPoint {
    pub threshold: f64,
    pub fpr: f64,
    pub tpr: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RocCurve {
    pub mechanism: MechanismKind,
    pub points: Vec<RocPoint>,
    pub auc: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RocReport {
    pub networks: Vec<LabeledPValues>,
    pub curves: Vec<RocCurve>,
}

impl RocReport {
    pub fn auc(&self, kind: MechanismKind) -> Option<f64> {
        self.curves.iter().find(|c| c.mechanism == kind).map(|c| c.auc)
    }

    /// `mechanism,threshold,fpr,tpr,auc` rows.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("mechanism,threshold,fpr,tpr,auc\n");
        for c in &self.curves {
            for p in &c.points {
                out.push_str(&format!("{},{},{},{},{}\n", c.mechanism, p.threshold, p.fpr, p.tpr, c.auc));
            }
        }
        out
    }
}

/// `P(p_pos > p_neg) + ½·P(p_pos = p_neg)`.
pub fn auc_rank(positives: &[f64], negatives: &[f64]) -> f64 {
    if positives.is_empty() || negatives.is_empty() {
        return f64::NAN;
    }
    let mut score = 0.0;
    for &p in positives {
        for &q in negatives {
            score += match p.total_cmp(&q) {
                std::cmp::Ordering::Greater => 1.0,
                std::cmp::Ordering::Equal => 0.5,
                std::cmp::Ordering::Less => 0.0,
            };
        }
    }
    score / (positives.len() * negatives.len()) as f64
}

/// Decision rule "positive iff p ≥ t", swept over every observed p-value
/// from high to low. Starts at (0, 0) and ends at (1, 1).
pub fn roc_curve(positives: &[f64], negatives: &[f64]) -> Vec<RocPoint> {
    let mut thresholds: Vec<f64> = positives.iter().chain(negatives).copied().collect();
    thresholds.sort_by(|a, b| b.total_cmp(a));
    thresholds.dedup();
    let rate = |xs: &[f64], t: f64| xs.iter().filter(|&&x| x >= t).count() as f64 / xs.len().max(1) as f64;
    let mut points = vec![RocPoint { threshold: f64::INFINITY, fpr: 0.0, tpr: 0.0 }];
    points.extend(thresholds.into_iter().map(|t| RocPoint { threshold: t, fpr: rate(negatives, t), tpr: rate(positives, t) }));
    points
}

pub fn trapezoid_auc(points: &[RocPoint]) -> f64 {
    points.windows(2).map(|w| (w[1].fpr - w[0].fpr) * (w[1].tpr + w[0].tpr) / 2.0).sum()
}

/// Simulates `per_mechanism` labeled networks for each mechanism (parameter
/// swept across its range in groups of `replicates`), classifies each one
/// with its own independent simulations, and builds per-mechanism ROC curves.
pub fn roc_evaluate(config: &RocConfig, sim: &Simulator<'_>, rng: SeededRng) -> Result<RocReport> {
    if config.per_mechanism < 2 || config.mechanisms.len() < 2 {
        return Err(Error::validation("ROC needs at least 2 networks for each of at least 2 mechanisms"));
    }
    let reps = sim.config().replicates;
    let values_per = config.per_mechanism.div_ceil(reps);
    let jobs: Vec<(MechanismKind, usize)> = config
        .mechanisms
        .iter()
        .flat_map(|&k| (0..config.per_mechanism).map(move |i| (k, i)))
        .collect();
    let networks = exec::map_slice(&jobs, |&(kind, i)| -> Result<LabeledPValues> {
        let param = kind.grid(values_per)[i / reps];
        let key = kind_index(kind) as u64;
        let g = grow(MechanismSpec::new(kind, param)?, config.nodes, rng.derive_named("panel").derive(key).derive(i as u64))?;
        let query = Query::new(&g)?;
        let report = sim.classify(&query, &config.mechanisms, super::DEFAULT_ALPHA, rng.derive_named("classify").derive(key).derive(i as u64))?;
        Ok(LabeledPValues {
            label: kind,
            param,
            p_values: report.tests.iter().map(|t| (t.mechanism, t.p_value)).collect(),
        })
    })
    .into_iter()
    .collect::<Result<Vec<_>>>()?;

    let curves = config
        .mechanisms
        .iter()
        .map(|&m| {
            let (mut pos, mut neg) = (Vec::new(), Vec::new());
            for net in &networks {
                let p = net.p_values.iter().find(|(k, _)| *k == m).map(|(_, p)| *p).expect("tested");
                if net.label == m {
                    pos.push(p);
                } else {
                    neg.push(p);
                }
            }
            RocCurve { mechanism: m, points: roc_curve(&pos, &neg), auc: auc_rank(&pos, &neg) }
        })
        .collect();
    Ok(RocReport { networks, curves })
}
