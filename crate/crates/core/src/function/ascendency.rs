use serde::{Deserialize, Serialize};

use crate::graph::Graph;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AscendencyResult {
    pub ascendency: f64,
    pub capacity: f64,
    /// `ascendency / capacity`, or 0 when the capacity is 0.
    pub normalized: f64,
}

// Sums in value order so the result does not depend on node labels.
fn ordered_sum(mut v: Vec<f64>) -> f64 {
    v.sort_by(f64::total_cmp);
    v.iter().sum()
}

/// Ascendency and development capacity (bits) with edge weights as flows.
pub fn ascendency(g: &Graph) -> AscendencyResult {
    let n = g.n();
    let mut rows: Vec<Vec<f64>> = vec![Vec::new(); n];
    let mut cols: Vec<Vec<f64>> = vec![Vec::new(); n];
    let flows: Vec<(usize, usize, f64)> = g.edges().filter(|&(_, _, w)| w > 0.0).collect();
    if flows.is_empty() {
        return AscendencyResult { ascendency: 0.0, capacity: 0.0, normalized: 0.0 };
    }
    for &(i, j, w) in &flows {
        rows[i].push(w);
        cols[j].push(w);
    }
    let out: Vec<f64> = rows.into_iter().map(ordered_sum).collect();
    let inn: Vec<f64> = cols.into_iter().map(ordered_sum).collect();
    let total = ordered_sum(flows.iter().map(|e| e.2).collect());

    let a_terms = flows.iter().map(|&(i, j, t)| t * (t * total / (out[i] * inn[j])).log2()).collect();
    let c_terms = flows.iter().map(|&(_, _, t)| -t * (t / total).log2()).collect();
    let capacity = ordered_sum(c_terms).max(0.0);
    // A is a scaled mutual information, so 0 ≤ A ≤ C up to rounding
    let ascendency = ordered_sum(a_terms).clamp(0.0, capacity);
    let normalized = if capacity > 0.0 { ascendency / capacity } else { 0.0 };
    AscendencyResult { ascendency, capacity, normalized }
}
