use crate::graph::{Graph, TransitionMatrix};

pub const DEFAULT_DAMPING: f64 = 0.85;
const TOLERANCE: f64 = 1e-10;
const MAX_ITERATIONS: usize = 200;

/// PageRank on the weighted, dangling-fixed transition matrix of `g`.
pub fn pagerank(g: &Graph, damping: f64) -> Vec<f64> {
    pagerank_matrix(&TransitionMatrix::from_graph(g), damping)
}

/// Power iteration `x ← (1−d)/n + d·xP` until the L1 change drops below
/// 1e-10 or 200 sweeps. Output sums to 1.
pub fn pagerank_matrix(p: &TransitionMatrix, damping: f64) -> Vec<f64> {
    let n = p.n();
    let teleport = (1.0 - damping) / n as f64;
    let mut x = vec![1.0 / n as f64; n];
    let mut next = vec![0.0; n];
    for _ in 0..MAX_ITERATIONS {
        next.fill(teleport);
        for (i, &xi) in x.iter().enumerate() {
            let mass = damping * xi;
            if mass == 0.0 {
                continue;
            }
            for (acc, pij) in next.iter_mut().zip(p.row(i)) {
                *acc += mass * pij;
            }
        }
        let change: f64 = x.iter().zip(&next).map(|(a, b)| (a - b).abs()).sum();
        std::mem::swap(&mut x, &mut next);
        if change < TOLERANCE {
            break;
        }
    }
    let total: f64 = x.iter().sum();
    x.iter_mut().for_each(|v| *v /= total);
    x
}
