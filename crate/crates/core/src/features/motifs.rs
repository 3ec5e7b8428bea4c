//! Connected undirected 4-node subgraph counts on the symmetrized graph.
//!
//! Non-induced pattern counts come from degree, triangle and common-neighbor
//! sums; induced counts follow by inverting the containment matrix
//! (how many copies of each pattern each 4-node class contains).

use crate::graph::Graph;

pub const FOUR_MOTIF_CLASSES: [&str; 6] =
    ["path4", "star3", "cycle4", "tailed_triangle", "diamond", "clique4"];

/// Induced counts in [`FOUR_MOTIF_CLASSES`] order. Self-loops are ignored.
pub fn four_motif_counts(g: &Graph) -> [u64; 6] {
    let adj = g.undirected();
    let n = adj.n();
    let deg: Vec<i128> = (0..n).map(|v| adj.degree(v) as i128).collect();

    let mut paths_edges = 0i128; // Σ_e (d_u−1)(d_v−1)
    let mut diamonds = 0i128; // Σ_e C(t_e, 2)
    let mut tri_at = vec![0i128; n]; // 2 × triangles at each node
    let mut tri_edge_sum = 0i128; // Σ_e t_e = 3T
    let mut cliques = 0i128;

    for u in 0..n {
        for v in adj.neighbors(u).filter(|&v| v > u) {
            let t = adj.common(u, v) as i128;
            paths_edges += (deg[u] - 1) * (deg[v] - 1);
            diamonds += t * (t - 1) / 2;
            tri_at[u] += t;
            tri_at[v] += t;
            tri_edge_sum += t;
            // K4s with u < v < w < x
            let ru = adj.row(u);
            let rv = adj.row(v);
            for w in adj.neighbors(u).filter(|&w| w > v && adj.get(v, w)) {
                let rw = adj.row(w);
                for k in 0..ru.len() {
                    let mut common = ru[k] & rv[k] & rw[k];
                    // keep x > w
                    let lo = k * 64;
                    if w + 1 > lo {
                        let shift = (w + 1 - lo).min(64);
                        common = if shift == 64 { 0 } else { common & (!0u64 << shift) };
                    }
                    cliques += common.count_ones() as i128;
                }
            }
        }
    }
    let triangles = tri_edge_sum / 3;
    let stars: i128 = deg.iter().map(|&d| d * (d - 1) * (d - 2) / 6).sum();
    let tailed: i128 = (0..n).map(|v| tri_at[v] / 2 * (deg[v] - 2).max(0)).sum();
    let mut cycles2 = 0i128; // 2 × non-induced 4-cycles
    for a in 0..n {
        for b in (a + 1)..n {
            let c = adj.common(a, b) as i128;
            cycles2 += c * (c - 1) / 2;
        }
    }
    let cycles = cycles2 / 2;
    let paths = paths_edges - 3 * triangles;

    let k4 = cliques;
    let dia = diamonds - 6 * k4;
    let c4 = cycles - dia - 3 * k4;
    let tt = tailed - 4 * dia - 12 * k4;
    let s3 = stars - tt - 2 * dia - 4 * k4;
    let p4 = paths - 2 * tt - 4 * c4 - 6 * dia - 12 * k4;
    [p4, s3, c4, tt, dia, k4].map(|x| {
        debug_assert!(x >= 0);
        x as u64
    })
}
