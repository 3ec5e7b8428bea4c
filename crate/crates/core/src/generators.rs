//! Node-by-node growth under the five candidate mechanisms, per-node
//! mixtures of them, and in-place "stirring" of a random network.
//!
//! Every growth starts from a directed 3-cycle `0→2→1→0` so that each seed
//! node points at its ring predecessor. ER needs no prior degrees, so an ER
//! seed node skips its cycle edge and draws like any other node; pure ER
//! growth is therefore plain `G(n, p)`. Node `v ≥ 3` attaches to the
//! already-grown nodes under its own rule:
//!
//! * `ER(p)`: for every existing `u`, edge `v→u` with probability `p` and
//!   edge `u→v` with probability `p`, independently.
//! * `DD(q)`: copy each out-edge of a uniform random parent with probability
//!   `1−q`, link to the parent with probability `1−q`; a node left without
//!   edges gets one uniform random out-edge.
//! * `NICHE(C)`: niche value `η~U(0,1)`, range `r = η·x` with
//!   `x~Beta(1, (1−2C)/(2C))`, center `c~U(r/2, η)`; eat every node whose
//!   niche value falls in `[c−r/2, c+r/2]`.
//! * `PA(α)`: two out-edges, targets drawn without replacement with
//!   probability `∝ (in_degree+1)^α`.
//! * `SW(β)`: link to the two nearest ring predecessors, rewiring each link
//!   to a uniform random non-neighbor with probability `β`.

use std::fmt;
use std::str::FromStr;

use rand::seq::SliceRandom;
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::rng::SeededRng;

/// Default network size for simulation-backed procedures.
pub const DEFAULT_NODES: usize = 50;
/// Edge density of the random network that `stir_mixture` starts from.
pub const DEFAULT_STIR_DENSITY: f64 = 0.2;

const PA_OUT_EDGES: usize = 2;
const SW_LATTICE_DEGREE: usize = 2;
const SEED_NODES: usize = 3;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum MechanismKind {
    #[serde(alias = "ER")]
    Er,
    #[serde(alias = "DD")]
    Dd,
    #[serde(alias = "NICHE")]
    Niche,
    #[serde(alias = "PA")]
    Pa,
    #[serde(alias = "SW")]
    Sw,
}

impl MechanismKind {
    pub const ALL: [MechanismKind; 5] = [
        MechanismKind::Er,
        MechanismKind::Dd,
        MechanismKind::Niche,
        MechanismKind::Pa,
        MechanismKind::Sw,
    ];

    pub fn name(self) -> &'static str {
        match self {
            MechanismKind::Er => "er",
            MechanismKind::Dd => "dd",
            MechanismKind::Niche => "niche",
            MechanismKind::Pa => "pa",
            MechanismKind::Sw => "sw",
        }
    }

    /// Closed range of the governing parameter. NICHE excludes 0.
    pub fn range(self) -> (f64, f64) {
        match self {
            MechanismKind::Er | MechanismKind::Dd | MechanismKind::Sw => (0.0, 1.0),
            MechanismKind::Niche => (0.0, 0.5),
            MechanismKind::Pa => (0.0, 4.0),
        }
    }

    pub fn contains(self, param: f64) -> bool {
        let (lo, hi) = self.range();
        match self {
            MechanismKind::Niche => param > lo && param <= hi,
            _ => param >= lo && param <= hi,
        }
    }

    /// `count` evenly spaced parameter values covering the range.
    pub fn grid(self, count: usize) -> Vec<f64> {
        let (lo, hi) = self.range();
        match (self, count) {
            (_, 0) => Vec::new(),
            (MechanismKind::Niche, _) => (1..=count).map(|k| hi * k as f64 / count as f64).collect(),
            (_, 1) => vec![0.5 * (lo + hi)],
            _ => linspace(lo, hi, count),
        }
    }

    /// Clamps `param` into the valid range.
    pub fn clamp(self, param: f64) -> f64 {
        let (lo, hi) = self.range();
        match self {
            MechanismKind::Niche => param.clamp(hi / 1000.0, hi),
            _ => param.clamp(lo, hi),
        }
    }
}

pub(crate) fn linspace(lo: f64, hi: f64, count: usize) -> Vec<f64> {
    match count {
        0 => Vec::new(),
        1 => vec![lo],
        _ => (0..count)
            .map(|k| {
                if k + 1 == count {
                    hi
                } else {
                    lo + (hi - lo) * k as f64 / (count - 1) as f64
                }
            })
            .collect(),
    }
}

impl fmt::Display for MechanismKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for MechanismKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "er" => Ok(MechanismKind::Er),
            "dd" => Ok(MechanismKind::Dd),
            "niche" => Ok(MechanismKind::Niche),
            "pa" => Ok(MechanismKind::Pa),
            "sw" => Ok(MechanismKind::Sw),
            other => Err(Error::validation(format!("unknown mechanism {other:?}"))),
        }
    }
}

/// One mechanism together with its governing parameter.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MechanismSpec {
    pub kind: MechanismKind,
    pub param: f64,
}

impl MechanismSpec {
    pub fn new(kind: MechanismKind, param: f64) -> Result<Self> {
        let spec = MechanismSpec { kind, param };
        spec.validate()?;
        Ok(spec)
    }

    pub fn validate(&self) -> Result<()> {
        if self.param.is_finite() && self.kind.contains(self.param) {
            Ok(())
        } else {
            let (lo, hi) = self.kind.range();
            Err(Error::validation(format!(
                "{} parameter {} outside [{lo}, {hi}]",
                self.kind, self.param
            )))
        }
    }
}

/// Per-node mechanism assignment for mixture networks.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct MixtureAssignment(Vec<MechanismSpec>);

impl MixtureAssignment {
    pub fn new(specs: Vec<MechanismSpec>) -> Result<Self> {
        let a = MixtureAssignment(specs);
        a.validate()?;
        Ok(a)
    }

    pub fn uniform(spec: MechanismSpec, n: usize) -> Result<Self> {
        MixtureAssignment::new(vec![spec; n])
    }

    /// Node counts proportional to `weights` (largest remainder), placed in
    /// random node order.
    pub fn from_proportions(parts: &[(MechanismSpec, f64)], n: usize, rng: &mut ChaCha8Rng) -> Result<Self> {
        if parts.is_empty() {
            return Err(Error::validation("mixture needs at least one mechanism"));
        }
        let total: f64 = parts.iter().map(|(_, w)| *w).sum();
        if !(total > 0.0) || parts.iter().any(|(_, w)| !(*w >= 0.0)) {
            return Err(Error::validation("mixture proportions must be nonnegative with positive sum"));
        }
        let exact: Vec<f64> = parts.iter().map(|(_, w)| w / total * n as f64).collect();
        let mut counts: Vec<usize> = exact.iter().map(|x| x.floor() as usize).collect();
        let mut order: Vec<usize> = (0..parts.len()).collect();
        order.sort_by(|&a, &b| {
            let ra = exact[a] - counts[a] as f64;
            let rb = exact[b] - counts[b] as f64;
            rb.total_cmp(&ra).then(a.cmp(&b))
        });
        let assigned: usize = counts.iter().sum();
        for &i in order.iter().take(n - assigned) {
            counts[i] += 1;
        }
        let mut specs: Vec<MechanismSpec> = parts
            .iter()
            .zip(&counts)
            .flat_map(|((spec, _), &c)| std::iter::repeat_n(*spec, c))
            .collect();
        specs.shuffle(rng);
        MixtureAssignment::new(specs)
    }

    pub fn validate(&self) -> Result<()> {
        if self.0.len() < SEED_NODES {
            return Err(Error::validation("mixture assignment needs at least 3 nodes"));
        }
        self.0.iter().try_for_each(MechanismSpec::validate)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn specs(&self) -> &[MechanismSpec] {
        &self.0
    }

    /// Fraction of nodes governed by each kind, in [`MechanismKind::ALL`] order.
    pub fn proportions(&self) -> [f64; 5] {
        let mut p = [0.0; 5];
        for s in &self.0 {
            p[kind_index(s.kind)] += 1.0;
        }
        p.map(|c| c / self.0.len() as f64)
    }
}

pub(crate) fn kind_index(kind: MechanismKind) -> usize {
    MechanismKind::ALL.iter().position(|&k| k == kind).expect("listed kind")
}

#[derive(Clone, Copy)]
enum Mode {
    /// Attach against nodes `0..v`.
    Grow,
    /// Attach against every other node; only out-edges are created.
    Stir,
}

struct Builder {
    g: Graph,
    in_deg: Vec<usize>,
    eta: Vec<f64>,
    diet: Vec<Option<(f64, f64)>>,
}

impl Builder {
    fn new(n: usize) -> Self {
        Builder {
            g: Graph::new(n).expect("n ≥ 3"),
            in_deg: vec![0; n],
            eta: vec![0.0; n],
            diet: vec![None; n],
        }
    }

    fn from_graph(g: Graph) -> Self {
        let n = g.n();
        let in_deg = g.in_degrees();
        Builder { g, in_deg, eta: vec![0.0; n], diet: vec![None; n] }
    }

    fn link(&mut self, s: usize, t: usize) {
        if !self.g.has_edge(s, t) {
            self.g.insert_unit(s, t);
            self.in_deg[t] += 1;
        }
    }

    fn clear_out(&mut self, v: usize) {
        let targets: Vec<usize> = self.g.out_edges(v).map(|(t, _)| t).collect();
        for t in targets {
            self.in_deg[t] -= 1;
        }
        self.g.clear_out_edges(v);
    }

    /// Draws the niche value, plus the feeding interval for NICHE nodes.
    fn draw_niche(&mut self, v: usize, spec: &MechanismSpec, rng: &mut ChaCha8Rng) {
        self.eta[v] = rng.random::<f64>();
        if spec.kind == MechanismKind::Niche {
            let c = spec.param;
            let shape = (1.0 - 2.0 * c) / (2.0 * c);
            let u: f64 = rng.random();
            // inverse CDF of Beta(1, shape)
            let x = if shape > 0.0 { 1.0 - (1.0 - u).powf(1.0 / shape) } else { 1.0 };
            let eta = self.eta[v];
            let r = eta * x;
            let center = r / 2.0 + rng.random::<f64>() * (eta - r / 2.0).max(0.0);
            self.diet[v] = Some((center - r / 2.0, center + r / 2.0));
        }
    }

    fn eats(&self, predator: usize, prey: usize) -> bool {
        self.diet[predator].is_some_and(|(lo, hi)| self.eta[prey] >= lo && self.eta[prey] <= hi)
    }

    fn attach(&mut self, v: usize, spec: &MechanismSpec, mode: Mode, rng: &mut ChaCha8Rng) {
        let n = self.g.n();
        let candidates: Vec<usize> = match mode {
            Mode::Grow => (0..v).collect(),
            Mode::Stir => (0..n).filter(|&u| u != v).collect(),
        };
        match spec.kind {
            MechanismKind::Er => {
                let p = spec.param;
                for &u in &candidates {
                    if rng.random::<f64>() < p {
                        self.link(v, u);
                    }
                    if matches!(mode, Mode::Grow) && rng.random::<f64>() < p {
                        self.link(u, v);
                    }
                }
            }
            MechanismKind::Dd => {
                let keep = 1.0 - spec.param;
                let parent = candidates[rng.random_range(0..candidates.len())];
                let inherited: Vec<usize> = self.g.out_edges(parent).map(|(t, _)| t).filter(|&t| t != v).collect();
                for t in inherited {
                    if rng.random::<f64>() < keep {
                        self.link(v, t);
                    }
                }
                if rng.random::<f64>() < keep {
                    self.link(v, parent);
                }
                if self.g.out_degree(v) == 0 {
                    let t = candidates[rng.random_range(0..candidates.len())];
                    self.link(v, t);
                }
            }
            MechanismKind::Niche => {
                for &u in &candidates {
                    if self.eats(v, u) {
                        self.link(v, u);
                    }
                    if matches!(mode, Mode::Grow) && self.eats(u, v) {
                        self.link(u, v);
                    }
                }
            }
            MechanismKind::Pa => {
                let alpha = spec.param;
                let mut pool = candidates;
                let mut weights: Vec<f64> =
                    pool.iter().map(|&u| (self.in_deg[u] as f64 + 1.0).powf(alpha)).collect();
                for _ in 0..PA_OUT_EDGES.min(pool.len()) {
                    let idx = weighted_index(&weights, rng);
                    let t = pool.swap_remove(idx);
                    weights.swap_remove(idx);
                    self.link(v, t);
                }
            }
            MechanismKind::Sw => {
                let lattice: Vec<usize> = (1..=SW_LATTICE_DEGREE)
                    .map(|k| match mode {
                        Mode::Grow => v - k,
                        Mode::Stir => (v + n - k % n) % n,
                    })
                    .collect();
                let mut targets = lattice.clone();
                for slot in 0..targets.len() {
                    if rng.random::<f64>() < spec.param {
                        let free: Vec<usize> =
                            candidates.iter().copied().filter(|u| !targets.contains(u)).collect();
                        if !free.is_empty() {
                            targets[slot] = free[rng.random_range(0..free.len())];
                        }
                    }
                }
                for t in targets {
                    self.link(v, t);
                }
            }
        }
    }
}

fn weighted_index(weights: &[f64], rng: &mut ChaCha8Rng) -> usize {
    let total: f64 = weights.iter().sum();
    if !(total > 0.0) || !total.is_finite() {
        return rng.random_range(0..weights.len());
    }
    let mut x = rng.random::<f64>() * total;
    for (i, w) in weights.iter().enumerate() {
        if x < *w {
            return i;
        }
        x -= w;
    }
    // rounding fallthrough: last positive weight
    weights.iter().rposition(|&w| w > 0.0).unwrap_or(weights.len() - 1)
}

/// Grows an `n`-node network under a single mechanism.
pub fn grow(spec: MechanismSpec, n: usize, rng: SeededRng) -> Result<Graph> {
    spec.validate()?;
    if n < SEED_NODES {
        return Err(Error::validation("networks need at least 3 nodes"));
    }
    grow_mixture(&MixtureAssignment(vec![spec; n]), rng)
}

/// Grows a network where node `i` attaches under `assignment[i]`.
pub fn grow_mixture(assignment: &MixtureAssignment, rng: SeededRng) -> Result<Graph> {
    assignment.validate()?;
    let specs = assignment.specs();
    let n = specs.len();
    let mut rng = rng.rng();
    let mut b = Builder::new(n);
    for (v, spec) in specs.iter().enumerate() {
        b.draw_niche(v, spec, &mut rng);
        if v >= SEED_NODES || spec.kind == MechanismKind::Er {
            b.attach(v, spec, Mode::Grow, &mut rng);
        } else {
            b.link(v, (v + SEED_NODES - 1) % SEED_NODES);
        }
    }
    Ok(b.g)
}

/// Starts from a random ER network and rewires every node once, in random
/// order, under its assigned mechanism.
pub fn stir_mixture(assignment: &MixtureAssignment, rng: SeededRng) -> Result<Graph> {
    stir_mixture_with_density(assignment, DEFAULT_STIR_DENSITY, rng)
}

pub fn stir_mixture_with_density(assignment: &MixtureAssignment, density: f64, rng: SeededRng) -> Result<Graph> {
    assignment.validate()?;
    let specs = assignment.specs();
    let n = specs.len();
    let initial = grow(MechanismSpec::new(MechanismKind::Er, density)?, n, rng.derive_named("initial"))?;
    let mut rng = rng.derive_named("stir").rng();
    let mut b = Builder::from_graph(initial);
    for (v, spec) in specs.iter().enumerate() {
        b.draw_niche(v, spec, &mut rng);
    }
    let mut order: Vec<usize> = (0..n).collect();
    order.shuffle(&mut rng);
    for v in order {
        b.clear_out(v);
        b.attach(v, &specs[v], Mode::Stir, &mut rng);
    }
    Ok(b.g)
}
