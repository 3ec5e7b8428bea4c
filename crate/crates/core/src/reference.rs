//! Canonical reference panel and the ensemble weights fitted on it.
//!
//! The weights shipped in `data/reference_weights.json` were produced by
//! [`fit_reference_weights`] with [`ReferencePanel::default`]; the
//! `netclass fit-weights` command regenerates them.

use std::sync::OnceLock;

use serde::{Deserialize, Serialize};

use crate::distance::{fit_weights, EnsembleWeights, LabeledGraph};
use crate::error::Result;
use crate::exec;
use crate::features::extract_features;
use crate::generators::{grow, kind_index, MechanismKind, MechanismSpec, DEFAULT_NODES};
use crate::rng::SeededRng;

const EMBEDDED: &str = include_str!("../data/reference_weights.json");

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ReferencePanel {
    /// Parameter values per mechanism, evenly spaced over its range.
    pub values: usize,
    pub replicates: usize,
    pub nodes: usize,
    pub seed: u64,
}

impl Default for ReferencePanel {
    fn default() -> Self {
        ReferencePanel { values: 100, replicates: 3, nodes: DEFAULT_NODES, seed: 1500 }
    }
}

impl ReferencePanel {
    /// Every (mechanism, grid value, replicate) network of the panel.
    pub fn graphs(&self) -> Result<Vec<LabeledGraph>> {
        let jobs: Vec<(MechanismKind, usize, usize)> = MechanismKind::ALL
            .iter()
            .flat_map(|&k| (0..self.values).flat_map(move |v| (0..self.replicates).map(move |r| (k, v, r))))
            .collect();
        let root = SeededRng::new(self.seed).derive_named("reference");
        exec::map_slice(&jobs, |&(kind, v, r)| {
            let spec = MechanismSpec::new(kind, kind.grid(self.values)[v])?;
            let rng = root.derive(kind_index(kind) as u64).derive(v as u64).derive(r as u64);
            Ok(LabeledGraph { id: format!("{kind}-{v:03}-{r}"), graph: grow(spec, self.nodes, rng)?, label: Some(spec) })
        })
        .into_iter()
        .collect()
    }
}

pub fn fit_reference_weights(panel: &ReferencePanel) -> Result<EnsembleWeights> {
    let graphs = panel.graphs()?;
    let features = exec::map_slice(&graphs, |g| extract_features(&g.graph)).into_iter().collect::<Result<Vec<_>>>()?;
    fit_weights(&features)
}

/// The shipped canonical weights.
pub fn reference_weights() -> &'static EnsembleWeights {
    static CELL: OnceLock<EnsembleWeights> = OnceLock::new();
    CELL.get_or_init(|| EnsembleWeights::from_json(EMBEDDED).expect("embedded weights are valid"))
}
