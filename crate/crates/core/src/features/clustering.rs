use crate::graph::Graph;

/// Global transitivity `3·triangles / connected triples` on the symmetrized
/// graph; 0 when there are no connected triples.
pub fn clustering_coefficient(g: &Graph) -> f64 {
    let adj = g.undirected();
    let n = adj.n();
    let mut closed = 0u64; // Σ_e t_e = 3 × triangles
    let mut triples = 0u64;
    for u in 0..n {
        let d = adj.degree(u) as u64;
        triples += d * d.saturating_sub(1) / 2;
        for v in adj.neighbors(u).filter(|&v| v > u) {
            closed += adj.common(u, v) as u64;
        }
    }
    if triples == 0 {
        0.0
    } else {
        closed as f64 / triples as f64
    }
}
