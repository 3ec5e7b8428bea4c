//! The 18-property feature set: nine structural properties measured on the
//! network itself and again on its order-5 Markov version.

mod clustering;
mod community;
mod entropy;
mod motifs;
mod pagerank;
mod triads;

pub use clustering::clustering_coefficient;
pub use community::{count_communities, scaled_modularity};
pub use entropy::{binned_entropy, degree_entropy, strength_entropy, ENTROPY_BINS};
pub use motifs::{four_motif_counts, FOUR_MOTIF_CLASSES};
pub use pagerank::{pagerank, pagerank_matrix, DEFAULT_DAMPING};
pub use triads::{triad_census, TRIAD_CLASSES};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{binarize, markov_power, Graph, TransitionMatrix};

pub const MARKOV_ORDER: u32 = 5;
pub const PROPERTY_COUNT: usize = 18;

/// Property names in the fixed order used by distances and weights.
pub const PROPERTY_NAMES: [&str; PROPERTY_COUNT] = [
    "direct.in_degrees",
    "direct.out_degrees",
    "direct.entropy_in",
    "direct.entropy_out",
    "direct.clustering",
    "direct.pagerank",
    "direct.n_communities",
    "direct.triad_census",
    "direct.four_motifs",
    "markov5.in_degrees",
    "markov5.out_degrees",
    "markov5.entropy_in",
    "markov5.entropy_out",
    "markov5.clustering",
    "markov5.pagerank",
    "markov5.n_communities",
    "markov5.triad_census",
    "markov5.four_motifs",
];

/// The nine properties of one network version.
///
/// Degree and PageRank vectors are sorted ascending, so the whole struct is
/// invariant under node relabeling.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Properties {
    pub in_degrees: Vec<f64>,
    pub out_degrees: Vec<f64>,
    pub entropy_in: f64,
    pub entropy_out: f64,
    pub clustering: f64,
    pub pagerank: Vec<f64>,
    pub n_communities: usize,
    pub triad_census: [u64; 16],
    pub four_motifs: [u64; 6],
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FeatureSet {
    pub n: usize,
    pub direct: Properties,
    pub markov5: Properties,
}

// Real-valued outputs are snapped to a 2^-40 grid. Summation order depends
// on node labels, and this removes the last-bit noise that would otherwise
// break exact relabeling invariance and the 1/n binarization threshold.
const GRID: f64 = (1u64 << 40) as f64;

fn snap(x: f64) -> f64 {
    (x * GRID).round() / GRID
}

fn sorted(mut v: Vec<f64>) -> Vec<f64> {
    v.sort_by(f64::total_cmp);
    v
}

/// Extracts all 18 properties. Requires `n ≥ 3`.
pub fn extract_features(g: &Graph) -> Result<FeatureSet> {
    if g.n() < 3 {
        return Err(Error::validation("feature extraction needs at least 3 nodes"));
    }
    let direct = direct_properties(g);
    let markov = markov_power(g, MARKOV_ORDER).map_entries(snap);
    let markov5 = markov_properties(&markov);
    Ok(FeatureSet { n: g.n(), direct, markov5 })
}

fn direct_properties(g: &Graph) -> Properties {
    let in_s = sorted(g.in_strengths().into_iter().map(snap).collect());
    let out_s = sorted(g.out_strengths().into_iter().map(snap).collect());
    let pr = sorted(pagerank(g, DEFAULT_DAMPING).into_iter().map(snap).collect());
    Properties {
        entropy_in: strength_entropy(&in_s),
        entropy_out: strength_entropy(&out_s),
        in_degrees: in_s,
        out_degrees: out_s,
        clustering: clustering_coefficient(g),
        pagerank: pr,
        n_communities: count_communities(g),
        triad_census: triad_census(g),
        four_motifs: four_motif_counts(g),
    }
}

fn markov_properties(t: &TransitionMatrix) -> Properties {
    let in_s = sorted(t.column_sums().into_iter().map(snap).collect());
    // rows are stochastic up to snapping error; a coarser grid recovers 1.0
    let out_s = sorted(t.row_sums().into_iter().map(|x| (x * 16_777_216.0).round() / 16_777_216.0).collect());
    let pr = sorted(pagerank_matrix(t, DEFAULT_DAMPING).into_iter().map(snap).collect());
    let b = binarize(t, snap(1.0 / t.n() as f64));
    Properties {
        entropy_in: binned_entropy(&in_s, ENTROPY_BINS),
        entropy_out: binned_entropy(&out_s, ENTROPY_BINS),
        in_degrees: in_s,
        out_degrees: out_s,
        clustering: clustering_coefficient(&b),
        pagerank: pr,
        n_communities: count_communities(&b),
        triad_census: triad_census(&b),
        four_motifs: four_motif_counts(&b),
    }
}
