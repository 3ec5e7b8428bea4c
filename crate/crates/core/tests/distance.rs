//! Ensemble distance, weight fitting and state-space checks.

use netclass::distance::{
    build_state_space, ensemble_distance, fit_weights, principal_axis_weights, quantile_resample, EnsembleWeights,
    LabeledGraph, Moments,
};
use netclass::features::{extract_features, FeatureSet, Properties, PROPERTY_COUNT};
use netclass::generators::{grow, MechanismKind, MechanismSpec};
use netclass::graph::Graph;
use netclass::rng::SeededRng;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

#[test]
fn quantile_resampling_matches_numpy_linear_quantiles() {
    let a = quantile_resample(&[1.0, 2.0, 3.0], 64);
    let b = quantile_resample(&[1.0, 2.0, 3.0, 4.0], 64);
    let d = a.iter().zip(&b).map(|(x, y)| (x - y) * (x - y)).sum::<f64>().sqrt();
    // numpy.quantile(..., linspace(0, 1, 64)) with the default linear method
    assert!((d - 4.637094510859737).abs() < 1e-12, "{d}");
}

/// Leading eigenvector of the correlation matrix by plain power iteration.
fn power_iteration_weights(rows: &[Vec<f64>]) -> Vec<f64> {
    let (n, p) = (rows.len() as f64, rows[0].len());
    let mean: Vec<f64> = (0..p).map(|j| rows.iter().map(|r| r[j]).sum::<f64>() / n).collect();
    let sd: Vec<f64> =
        (0..p).map(|j| (rows.iter().map(|r| (r[j] - mean[j]).powi(2)).sum::<f64>() / (n - 1.0)).sqrt()).collect();
    let corr: Vec<Vec<f64>> = (0..p)
        .map(|j| {
            (0..p)
                .map(|k| {
                    rows.iter().map(|r| (r[j] - mean[j]) * (r[k] - mean[k])).sum::<f64>() / (n - 1.0) / (sd[j] * sd[k])
                })
                .collect()
        })
        .collect();
    let mut v = vec![1.0; p];
    for _ in 0..20_000 {
        let next: Vec<f64> = (0..p).map(|j| (0..p).map(|k| corr[j][k] * v[k]).sum()).collect();
        let norm = next.iter().map(|x| x * x).sum::<f64>().sqrt();
        v = next.iter().map(|x| x / norm).collect();
    }
    let total: f64 = v.iter().map(|x| x.abs()).sum();
    v.iter().map(|x| x.abs() / total).collect()
}

#[test]
fn principal_axis_matches_power_iteration() {
    let mut rng = ChaCha8Rng::seed_from_u64(21);
    for _ in 0..5 {
        let loadings: Vec<f64> = (0..PROPERTY_COUNT).map(|_| rng.random::<f64>() * 2.0 - 1.0).collect();
        let rows: Vec<Vec<f64>> = (0..100)
            .map(|_| {
                let f: f64 = rng.random::<f64>() * 4.0;
                loadings.iter().map(|l| l * f + rng.random::<f64>()).collect()
            })
            .collect();
        let mut m = Moments::new(rows[0].clone());
        rows.iter().for_each(|r| m.push(r));
        let (w, _) = principal_axis_weights(&m);
        for (a, b) in w.iter().zip(power_iteration_weights(&rows)) {
            assert!((a - b).abs() < 1e-6, "{a} vs {b}");
        }
    }
}

fn panel(per: usize, nodes: usize, seed: u64) -> Vec<LabeledGraph> {
    MechanismKind::ALL
        .iter()
        .flat_map(|&k| {
            k.grid(per).into_iter().enumerate().map(move |(i, p)| {
                let spec = MechanismSpec::new(k, p).unwrap();
                let rng = SeededRng::new(seed).derive(k as u64).derive(i as u64);
                LabeledGraph { id: format!("{k}{i}"), graph: grow(spec, nodes, rng).unwrap(), label: Some(spec) }
            })
        })
        .collect()
}

#[test]
fn fitted_weights_are_valid() {
    let graphs = panel(8, 30, 22);
    let feats: Vec<FeatureSet> = graphs.iter().map(|g| extract_features(&g.graph).unwrap()).collect();
    let w = fit_weights(&feats).unwrap();
    w.validate().unwrap();
    assert!((w.weights.iter().sum::<f64>() - 1.0).abs() < 1e-12);
    assert_eq!(EnsembleWeights::from_json(&w.to_json()).unwrap(), w);
}

#[test]
fn mechanisms_separate_in_state_space() {
    let graphs = panel(20, 50, 23);
    let space = build_state_space(&graphs, Some(netclass::reference::reference_weights())).unwrap();
    let kind = |i: usize| space.labels[i].unwrap().kind;
    for k in MechanismKind::ALL {
        let (mut within, mut between) = (vec![], vec![]);
        for i in 0..space.len() {
            for j in i + 1..space.len() {
                if kind(i) == k && kind(j) == k {
                    within.push(space.distances[i][j]);
                } else if kind(i) == k || kind(j) == k {
                    between.push(space.distances[i][j]);
                }
            }
        }
        let mean = |v: &[f64]| v.iter().sum::<f64>() / v.len() as f64;
        assert!(mean(&within) < mean(&between), "{k}: {} vs {}", mean(&within), mean(&between));
    }
}

#[test]
fn state_space_matrix_shape() {
    let g = Graph::from_pairs(5, [(0, 1), (1, 2), (2, 0), (3, 4)]).unwrap();
    let twins = vec![
        LabeledGraph { id: "a".into(), graph: g.clone(), label: None },
        LabeledGraph { id: "b".into(), graph: g, label: None },
    ];
    let space = build_state_space(&twins, Some(&EnsembleWeights::uniform())).unwrap();
    assert_eq!(space.distances, vec![vec![0.0, 0.0], vec![0.0, 0.0]]);

    let graphs = panel(2, 12, 24);
    let w = EnsembleWeights::uniform();
    let space = build_state_space(&graphs[..3], Some(&w)).unwrap();
    for i in 0..3 {
        for j in 0..3 {
            let d = ensemble_distance(&space.features[i], &space.features[j], &w);
            assert_eq!(space.distances[i][j], d);
        }
    }
}

/// The weighted sum recomputed from the raw feature fields, with its own
/// quantile interpolation and census normalization.
fn manual_distance(a: &FeatureSet, b: &FeatureSet, w: &EnsembleWeights) -> f64 {
    fn interp(v: &[f64], k: usize) -> f64 {
        let pos = k as f64 / 63.0 * (v.len() - 1) as f64;
        let (lo, frac) = (pos.floor() as usize, pos - pos.floor());
        if lo + 1 < v.len() { v[lo] * (1.0 - frac) + v[lo + 1] * frac } else { v[lo] }
    }
    fn vec_dist(x: &[f64], y: &[f64]) -> f64 {
        (0..64).map(|k| (interp(x, k) - interp(y, k)).powi(2)).sum::<f64>().sqrt()
    }
    fn census_dist(x: &[u64], y: &[u64]) -> f64 {
        let (sx, sy) = (x.iter().sum::<u64>() as f64, y.iter().sum::<u64>() as f64);
        let px = |c: u64| if sx > 0.0 { c as f64 / sx } else { 0.0 };
        let py = |c: u64| if sy > 0.0 { c as f64 / sy } else { 0.0 };
        x.iter().zip(y).map(|(&p, &q)| (px(p) - py(q)).powi(2)).sum::<f64>().sqrt()
    }
    fn parts(p: &Properties, q: &Properties) -> [f64; 9] {
        [
            vec_dist(&p.in_degrees, &q.in_degrees),
            vec_dist(&p.out_degrees, &q.out_degrees),
            (p.entropy_in - q.entropy_in).abs(),
            (p.entropy_out - q.entropy_out).abs(),
            (p.clustering - q.clustering).abs(),
            vec_dist(&p.pagerank, &q.pagerank),
            (p.n_communities as f64 - q.n_communities as f64).abs(),
            census_dist(&p.triad_census, &q.triad_census),
            census_dist(&p.four_motifs, &q.four_motifs),
        ]
    }
    let all: Vec<f64> = parts(&a.direct, &b.direct).into_iter().chain(parts(&a.markov5, &b.markov5)).collect();
    all.iter().enumerate().map(|(j, d)| w.weights[j] * d / w.scales[j]).sum()
}

#[test]
fn ensemble_distance_matches_manual_sum() {
    let w = netclass::reference::reference_weights();
    let a = extract_features(&Graph::from_pairs(5, [(0, 1), (1, 2), (2, 3), (3, 4), (4, 0)]).unwrap()).unwrap();
    let b = extract_features(&Graph::from_pairs(5, [(0, 1), (1, 2), (2, 0), (0, 3), (3, 4), (4, 3)]).unwrap()).unwrap();
    assert!((ensemble_distance(&a, &b, w) - manual_distance(&a, &b, w)).abs() < 1e-12);

    let mut rng = ChaCha8Rng::seed_from_u64(25);
    let graphs = panel(4, 20, 26);
    for _ in 0..50 {
        let i = rng.random_range(0..graphs.len());
        let j = rng.random_range(0..graphs.len());
        let (fa, fb) = (extract_features(&graphs[i].graph).unwrap(), extract_features(&graphs[j].graph).unwrap());
        assert!((ensemble_distance(&fa, &fb, w) - manual_distance(&fa, &fb, w)).abs() < 1e-10);
    }
}

#[test]
fn distance_relabeling_invariance() {
    use rand::seq::SliceRandom;
    let w = netclass::reference::reference_weights();
    let mut rng = ChaCha8Rng::seed_from_u64(27);
    let graphs = panel(3, 25, 28);
    for lg in &graphs {
        let mut perm: Vec<usize> = (0..lg.graph.n()).collect();
        perm.shuffle(&mut rng);
        let a = extract_features(&lg.graph).unwrap();
        let b = extract_features(&lg.graph.relabel(&perm).unwrap()).unwrap();
        assert_eq!(ensemble_distance(&a, &b, w), 0.0);
        let c = extract_features(&graphs[0].graph).unwrap();
        assert_eq!(ensemble_distance(&a, &c, w), ensemble_distance(&b, &c, w));
    }
}
