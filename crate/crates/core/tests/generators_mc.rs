//! Monte-Carlo checks of the growth rules against their analytic targets.

use netclass::exec;
use netclass::generators::{grow, grow_mixture, MechanismKind, MechanismSpec, MixtureAssignment};
use netclass::rng::SeededRng;
use statrs::distribution::{ChiSquared, ContinuousCDF};

fn mean_sd(v: &[f64]) -> (f64, f64) {
    let m = v.iter().sum::<f64>() / v.len() as f64;
    let var = v.iter().map(|x| (x - m) * (x - m)).sum::<f64>() / (v.len() - 1) as f64;
    (m, var.sqrt())
}

#[test]
fn niche_connectance_hits_target() {
    let n = 50;
    let root = SeededRng::new(11);
    for c in [0.05, 0.15, 0.3] {
        let spec = MechanismSpec::new(MechanismKind::Niche, c).unwrap();
        let conn = exec::map_range(500, |i| grow(spec, n, root.derive(i as u64)).unwrap().edge_count() as f64 / (n * n) as f64);
        let (m, _) = mean_sd(&conn);
        assert!((m - c).abs() <= 0.03, "target {c}: mean connectance {m}");
    }
}

#[test]
fn pa_alpha_zero_attaches_uniformly() {
    let n = 30;
    let spec = MechanismSpec::new(MechanismKind::Pa, 0.0).unwrap();
    let root = SeededRng::new(12);
    let mut counts = vec![0u64; n - 1];
    for rep in 0..2000 {
        let g = grow(spec, n, root.derive(rep)).unwrap();
        let targets: Vec<usize> = g.out_edges(n - 1).map(|(t, _)| t).collect();
        assert_eq!(targets.len(), 2);
        targets.iter().for_each(|&t| counts[t] += 1);
    }
    let expected = 4000.0 / (n - 1) as f64;
    let chi2: f64 = counts.iter().map(|&c| (c as f64 - expected).powi(2) / expected).sum();
    let p = 1.0 - ChiSquared::new((n - 2) as f64).unwrap().cdf(chi2);
    assert!(p > 0.001, "chi2 {chi2}, p {p}");
}

#[test]
fn pa_high_alpha_concentrates_on_hubs() {
    let n = 50;
    let root = SeededRng::new(13);
    let max_in = |alpha: f64| {
        let spec = MechanismSpec::new(MechanismKind::Pa, alpha).unwrap();
        let v = exec::map_range(100, |i| *grow(spec, n, root.derive(i as u64)).unwrap().in_degrees().iter().max().unwrap() as f64);
        mean_sd(&v).0
    };
    assert!(max_in(3.0) > 2.0 * max_in(0.0));
}

#[test]
fn dd_zero_children_replicate_a_parent() {
    let spec = MechanismSpec::new(MechanismKind::Dd, 0.0).unwrap();
    for rep in 0..50 {
        let g = grow(spec, 40, SeededRng::new(14).derive(rep)).unwrap();
        for v in 3..40 {
            let out: Vec<usize> = g.out_edges(v).map(|(t, _)| t).collect();
            let found = (0..v).any(|u| {
                let mut expect: Vec<usize> = g.out_edges(u).map(|(t, _)| t).chain([u]).collect();
                expect.sort_unstable();
                expect == out
            });
            assert!(found, "replicate {rep}, node {v}");
        }
    }
}

#[test]
fn er_mixture_matches_analytic_edge_count() {
    let (n, p) = (50usize, 0.1);
    let spec = MechanismSpec::new(MechanismKind::Er, p).unwrap();
    let assignment = MixtureAssignment::uniform(spec, n).unwrap();
    let edges = exec::map_range(200, |i| grow_mixture(&assignment, SeededRng::new(15).derive(i as u64)).unwrap().edge_count() as f64);
    let (m, sd) = mean_sd(&edges);
    let se = sd / (edges.len() as f64).sqrt();
    // every ordered pair is drawn once, seed nodes included
    let nominal = (n * (n - 1)) as f64 * p;
    assert!((m - nominal).abs() < 3.0 * se, "mean {m}, nominal {nominal}, se {se}");
}

#[test]
fn pure_mixture_equals_single_mechanism_growth() {
    for kind in MechanismKind::ALL {
        let spec = MechanismSpec::new(kind, kind.range().1 / 3.0).unwrap();
        let a = MixtureAssignment::uniform(spec, 25).unwrap();
        let rng = SeededRng::new(16);
        assert_eq!(grow_mixture(&a, rng).unwrap(), grow(spec, 25, rng).unwrap(), "{kind}");
    }
}
