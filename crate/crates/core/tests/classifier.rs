//! Monte-Carlo behavior of fitting, testing and estimation.

use netclass::classifier::{Query, SimConfig, Simulator};
use netclass::exec;
use netclass::generators::{grow, MechanismKind, MechanismSpec};
use netclass::graph::Graph;
use netclass::reference::reference_weights;
use netclass::rng::SeededRng;

use MechanismKind::*;

fn query(kind: MechanismKind, param: f64, rng: SeededRng) -> Query {
    Query::new(&grow(MechanismSpec::new(kind, param).unwrap(), 50, rng).unwrap()).unwrap()
}

fn sim() -> Simulator<'static> {
    Simulator::new(reference_weights(), SimConfig::default()).unwrap()
}

fn fraction(hits: &[bool]) -> f64 {
    hits.iter().filter(|&&h| h).count() as f64 / hits.len() as f64
}

#[test]
fn best_fit_recovers_small_world_zero() {
    let s = sim();
    let hits = exec::map_range(50, |i| {
        let r = SeededRng::new(31).derive(i as u64);
        s.best_fit_param(&query(Sw, 0.0, r.derive(0)), Sw, r.derive(1)).abs() <= 0.1
    });
    assert!(fraction(&hits) >= 0.9, "{}", fraction(&hits));
}

#[test]
fn best_fit_recovers_random_density() {
    let s = sim();
    let hits = exec::map_range(50, |i| {
        let r = SeededRng::new(32).derive(i as u64);
        (s.best_fit_param(&query(Er, 0.3, r.derive(0)), Er, r.derive(1)) - 0.3).abs() <= 0.1
    });
    assert!(fraction(&hits) >= 0.8, "{}", fraction(&hits));
}

#[test]
fn best_fit_stays_in_range() {
    let s = sim();
    for (i, kind) in MechanismKind::ALL.into_iter().enumerate() {
        // deliberately mismatched query
        let q = query(ALL_OTHER[i], ALL_OTHER[i].range().1 / 2.0, SeededRng::new(33).derive(i as u64));
        let b = s.best_fit_param(&q, kind, SeededRng::new(34));
        assert!(kind.contains(b), "{kind}: {b}");
    }
}

const ALL_OTHER: [MechanismKind; 5] = [Pa, Niche, Sw, Er, Dd];

#[test]
fn random_network_is_not_a_niche_web() {
    let s = sim();
    let rejected = exec::map_range(50, |i| {
        let r = SeededRng::new(35).derive(i as u64);
        s.classify(&query(Er, 0.2, r.derive(0)), &[Niche], 0.05, r.derive(1)).unwrap().verdict.is_empty()
    });
    assert!(fraction(&rejected) >= 0.9, "{}", fraction(&rejected));
}

#[test]
fn alpha_one_accepts_only_identical_samples() {
    let s = sim();
    let q = query(Pa, 2.0, SeededRng::new(36));
    let report = s.classify(&q, &MechanismKind::ALL, 1.0, SeededRng::new(37)).unwrap();
    for t in &report.tests {
        assert_eq!(t.consistent, t.p_value >= 1.0);
        assert_eq!(report.verdict.contains(&t.mechanism), t.consistent);
    }
}

#[test]
fn classify_is_deterministic() {
    let s = sim();
    let q = query(Dd, 0.4, SeededRng::new(38));
    let a = s.classify(&q, &MechanismKind::ALL, 0.05, SeededRng::new(39)).unwrap();
    let b = s.classify(&q, &MechanismKind::ALL, 0.05, SeededRng::new(39)).unwrap();
    assert_eq!(a, b);
    for t in &a.tests {
        assert!((0.0..=1.0).contains(&t.p_value) && (0.0..=1.0).contains(&t.ks_statistic));
        assert!(t.mechanism.contains(t.best_param));
    }
}

#[test]
fn estimate_recovers_mid_range_rewiring() {
    let s = sim();
    let hits = exec::map_range(50, |i| {
        let r = SeededRng::new(40).derive(i as u64);
        (s.estimate_param(&query(Sw, 0.5, r.derive(0)), Sw, r.derive(1)) - 0.5).abs() <= 0.15
    });
    assert!(fraction(&hits) >= 0.8, "{}", fraction(&hits));
}

#[test]
fn estimate_stays_in_range() {
    let s = sim();
    let small = SimConfig { estimate_grid: 10, ..SimConfig::default() };
    let s2 = Simulator::new(reference_weights(), small).unwrap();
    let q = query(Pa, 1.0, SeededRng::new(41));
    for kind in MechanismKind::ALL {
        assert!(kind.contains(s2.estimate_param(&q, kind, SeededRng::new(42))));
    }
    let _ = s;
}

#[test]
fn query_must_have_four_nodes() {
    let g = Graph::from_pairs(3, [(0, 1), (1, 2)]).unwrap();
    assert!(Query::new(&g).is_err());
    let s = sim();
    let q = query(Er, 0.2, SeededRng::new(43));
    assert!(s.classify(&q, &[], 0.05, SeededRng::new(0)).is_err());
    assert!(s.classify(&q, &[Er], 0.0, SeededRng::new(0)).is_err());
}
