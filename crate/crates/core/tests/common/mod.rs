//! Brute-force reference implementations shared by the integration and
//! acceptance tests. Deliberately naive: every value is recomputed from
//! the definition, with no shared code paths into the library.
#![allow(dead_code)]

use nalgebra::{DMatrix, DVector};
use netclass::graph::Graph;
use rand::Rng;

/// Directed graph with each ordered pair (no self-loops) present with probability `p`.
pub fn random_graph<R: Rng>(n: usize, p: f64, rng: &mut R) -> Graph {
    let pairs: Vec<(usize, usize)> =
        (0..n).flat_map(|i| (0..n).map(move |j| (i, j))).filter(|&(i, j)| i != j).collect();
    Graph::from_pairs(n, pairs.into_iter().filter(|_| rng.random::<f64>() < p)).unwrap()
}

/// As [`random_graph`], with weights uniform in (0.1, 5) and optional self-loops.
pub fn random_weighted_graph<R: Rng>(n: usize, p: f64, loops: bool, rng: &mut R) -> Graph {
    let mut g = Graph::new(n).unwrap();
    for i in 0..n {
        for j in 0..n {
            if (i != j || loops) && rng.random::<f64>() < p {
                g.add_edge(i, j, 0.1 + 4.9 * rng.random::<f64>()).unwrap();
            }
        }
    }
    g
}

fn arc(g: &Graph, a: usize, b: usize) -> bool {
    a != b && g.has_edge(a, b)
}

/// Holland–Leinhardt class of one triple, from its dyad counts and shape.
pub fn triad_class(g: &Graph, t: [usize; 3]) -> usize {
    let pairs = [(t[0], t[1]), (t[0], t[2]), (t[1], t[2])];
    let (mut mutual, mut asym) = (0, 0);
    for &(a, b) in &pairs {
        match (arc(g, a, b), arc(g, b, a)) {
            (true, true) => mutual += 1,
            (true, false) | (false, true) => asym += 1,
            _ => {}
        }
    }
    // out/in counts over asymmetric dyads only
    let asym_out = |v: usize| t.iter().filter(|&&u| u != v && arc(g, v, u) && !arc(g, u, v)).count();
    let asym_in = |v: usize| t.iter().filter(|&&u| u != v && arc(g, u, v) && !arc(g, v, u)).count();
    let null_vertex = |v: usize| t.iter().filter(|&&u| u != v && !arc(g, u, v) && !arc(g, v, u)).count();
    match (mutual, asym) {
        (0, 0) => 0,
        (0, 1) => 1,
        (1, 0) => 2,
        (0, 2) => {
            if t.iter().any(|&v| asym_out(v) == 2) {
                3 // 021D
            } else if t.iter().any(|&v| asym_in(v) == 2) {
                4 // 021U
            } else {
                5 // 021C
            }
        }
        (1, 1) => {
            // the vertex outside the mutual dyad has one null and one asymmetric dyad
            let outsider = *t.iter().find(|&&v| null_vertex(v) == 1 && asym_in(v) + asym_out(v) == 1).unwrap();
            if asym_out(outsider) == 1 {
                6 // 111D: A<->B<-C
            } else {
                7 // 111U: A<->B->C
            }
        }
        (0, 3) => {
            if t.iter().all(|&v| asym_out(v) == 1) {
                9 // 030C
            } else {
                8 // 030T
            }
        }
        (2, 0) => 10,
        (1, 2) => {
            let outsider = *t.iter().find(|&&v| asym_in(v) + asym_out(v) == 2).unwrap();
            match asym_out(outsider) {
                2 => 11, // 120D
                0 => 12, // 120U
                _ => 13, // 120C
            }
        }
        (2, 1) => 14,
        (3, 0) => 15,
        _ => unreachable!(),
    }
}

pub fn brute_triad_census(g: &Graph) -> [u64; 16] {
    let n = g.n();
    let mut c = [0u64; 16];
    for a in 0..n {
        for b in a + 1..n {
            for d in b + 1..n {
                c[triad_class(g, [a, b, d])] += 1;
            }
        }
    }
    c
}

/// Induced connected 4-node classes of the symmetrized graph:
/// [path4, star3, cycle4, tailed_triangle, diamond, clique4].
pub fn brute_four_motifs(g: &Graph) -> [u64; 6] {
    let n = g.n();
    let adj = |a: usize, b: usize| arc(g, a, b) || arc(g, b, a);
    let mut c = [0u64; 6];
    for a in 0..n {
        for b in a + 1..n {
            for x in b + 1..n {
                for y in x + 1..n {
                    let q = [a, b, x, y];
                    let mut deg = [0usize; 4];
                    let mut edges = 0;
                    for i in 0..4 {
                        for j in i + 1..4 {
                            if adj(q[i], q[j]) {
                                deg[i] += 1;
                                deg[j] += 1;
                                edges += 1;
                            }
                        }
                    }
                    deg.sort_unstable();
                    let class = match (edges, deg) {
                        (3, [1, 1, 2, 2]) => Some(0),
                        (3, [1, 1, 1, 3]) => Some(1),
                        (4, [2, 2, 2, 2]) => Some(2),
                        (4, [1, 2, 2, 3]) => Some(3),
                        (5, _) => Some(4),
                        (6, _) => Some(5),
                        _ => None,
                    };
                    if let Some(k) = class {
                        c[k] += 1;
                    }
                }
            }
        }
    }
    c
}

/// Solves `(I − d·Pᵀ) x = (1−d)/n · 1` directly.
pub fn dense_pagerank(g: &Graph, damping: f64) -> Vec<f64> {
    let n = g.n();
    let mut p = DMatrix::<f64>::zeros(n, n);
    for i in 0..n {
        let total: f64 = (0..n).filter_map(|j| g.weight(i, j)).sum();
        for j in 0..n {
            p[(i, j)] = if total > 0.0 { g.weight(i, j).unwrap_or(0.0) / total } else { 1.0 / n as f64 };
        }
    }
    let a = DMatrix::<f64>::identity(n, n) - p.transpose() * damping;
    let b = DVector::<f64>::from_element(n, (1.0 - damping) / n as f64);
    a.lu().solve(&b).unwrap().iter().copied().collect()
}

/// Evaluates both ECDFs at every observed value.
pub fn brute_ks_statistic(x: &[f64], y: &[f64]) -> f64 {
    let ecdf = |s: &[f64], t: f64| s.iter().filter(|&&v| v <= t).count() as f64 / s.len() as f64;
    x.iter().chain(y).map(|&t| (ecdf(x, t) - ecdf(y, t)).abs()).fold(0.0, f64::max)
}

/// Ascendency and capacity straight from the flow-matrix definition.
pub fn brute_ascendency(g: &Graph) -> (f64, f64) {
    let n = g.n();
    let t = |i: usize, j: usize| g.weight(i, j).unwrap_or(0.0);
    let total: f64 = (0..n).flat_map(|i| (0..n).map(move |j| (i, j))).map(|(i, j)| t(i, j)).sum();
    let row = |i: usize| (0..n).map(|j| t(i, j)).sum::<f64>();
    let col = |j: usize| (0..n).map(|i| t(i, j)).sum::<f64>();
    let (mut a, mut c) = (0.0, 0.0);
    for i in 0..n {
        for j in 0..n {
            let f = t(i, j);
            if f > 0.0 {
                a += f * (f * total / (row(i) * col(j))).log2();
                c -= f * (f / total).log2();
            }
        }
    }
    (a, c)
}
