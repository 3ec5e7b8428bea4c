//! Directed weighted graphs, edgelist I/O and the row-normalized Markov
//! power transform.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::io::Read;

use crate::error::{Error, Result};

/// Directed, optionally weighted network on nodes `0..n`.
///
/// At most one edge per ordered pair; self-loops are representable.
#[derive(Debug, Clone, PartialEq)]
pub struct Graph {
    out: Vec<BTreeMap<usize, f64>>,
}

impl Graph {
    pub fn new(n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::validation("graph must have at least one node"));
        }
        Ok(Graph { out: vec![BTreeMap::new(); n] })
    }

    /// Graph from an edge list. Later duplicates overwrite earlier ones.
    pub fn from_edges<I>(n: usize, edges: I) -> Result<Self>
    where
        I: IntoIterator<Item = (usize, usize, f64)>,
    {
        let mut g = Graph::new(n)?;
        for (s, t, w) in edges {
            g.add_edge(s, t, w)?;
        }
        Ok(g)
    }

    /// Unit-weight graph from `(src, dst)` pairs.
    pub fn from_pairs<I>(n: usize, pairs: I) -> Result<Self>
    where
        I: IntoIterator<Item = (usize, usize)>,
    {
        Graph::from_edges(n, pairs.into_iter().map(|(s, t)| (s, t, 1.0)))
    }

    pub fn n(&self) -> usize {
        self.out.len()
    }

    pub fn edge_count(&self) -> usize {
        self.out.iter().map(BTreeMap::len).sum()
    }

    pub fn add_edge(&mut self, src: usize, dst: usize, weight: f64) -> Result<()> {
        let n = self.n();
        if src >= n || dst >= n {
            return Err(Error::validation(format!(
                "edge ({src}, {dst}) references a node outside 0..{n}"
            )));
        }
        if !weight.is_finite() || weight < 0.0 {
            return Err(Error::validation(format!(
                "edge ({src}, {dst}) has invalid weight {weight}"
            )));
        }
        self.out[src].insert(dst, weight);
        Ok(())
    }

    pub(crate) fn insert_unit(&mut self, src: usize, dst: usize) {
        self.out[src].insert(dst, 1.0);
    }

    pub fn remove_edge(&mut self, src: usize, dst: usize) -> Option<f64> {
        self.out.get_mut(src)?.remove(&dst)
    }

    /// Removes every out-edge of `v`.
    pub fn clear_out_edges(&mut self, v: usize) {
        self.out[v].clear();
    }

    pub fn has_edge(&self, src: usize, dst: usize) -> bool {
        self.out.get(src).is_some_and(|m| m.contains_key(&dst))
    }

    pub fn weight(&self, src: usize, dst: usize) -> Option<f64> {
        self.out.get(src)?.get(&dst).copied()
    }

    /// Out-neighbors of `v` with weights, ascending by target.
    pub fn out_edges(&self, v: usize) -> impl Iterator<Item = (usize, f64)> + '_ {
        self.out[v].iter().map(|(&t, &w)| (t, w))
    }

    pub fn out_degree(&self, v: usize) -> usize {
        self.out[v].len()
    }

    /// All edges in ascending `(src, dst)` order.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize, f64)> + '_ {
        self.out
            .iter()
            .enumerate()
            .flat_map(|(s, m)| m.iter().map(move |(&t, &w)| (s, t, w)))
    }

    pub fn in_degrees(&self) -> Vec<usize> {
        let mut deg = vec![0; self.n()];
        for (_, t, _) in self.edges() {
            deg[t] += 1;
        }
        deg
    }

    pub fn out_degrees(&self) -> Vec<usize> {
        self.out.iter().map(BTreeMap::len).collect()
    }

    pub fn in_strengths(&self) -> Vec<f64> {
        let mut s = vec![0.0; self.n()];
        for (_, t, w) in self.edges() {
            s[t] += w;
        }
        s
    }

    pub fn out_strengths(&self) -> Vec<f64> {
        self.out.iter().map(|m| m.values().sum()).collect()
    }

    /// Copy of the graph with node `v` renamed to `perm[v]`.
    pub fn relabel(&self, perm: &[usize]) -> Result<Graph> {
        let n = self.n();
        let mut seen = vec![false; n];
        if perm.len() != n || perm.iter().any(|&p| p >= n || std::mem::replace(&mut seen[p], true)) {
            return Err(Error::validation("relabeling must be a permutation of 0..n"));
        }
        Graph::from_edges(n, self.edges().map(|(s, t, w)| (perm[s], perm[t], w)))
    }

    /// Symmetrized simple-graph adjacency as bitsets; self-loops dropped.
    pub fn undirected(&self) -> BitAdjacency {
        let mut adj = BitAdjacency::new(self.n());
        for (s, t, _) in self.edges() {
            if s != t {
                adj.set(s, t);
                adj.set(t, s);
            }
        }
        adj
    }

    /// Directed adjacency as bitsets; self-loops dropped.
    pub fn directed_bits(&self) -> BitAdjacency {
        let mut adj = BitAdjacency::new(self.n());
        for (s, t, _) in self.edges() {
            if s != t {
                adj.set(s, t);
            }
        }
        adj
    }
}

/// Dense bitset adjacency used by the counting kernels.
#[derive(Debug, Clone)]
pub struct BitAdjacency {
    n: usize,
    words: usize,
    bits: Vec<u64>,
}

impl BitAdjacency {
    pub fn new(n: usize) -> Self {
        let words = n.div_ceil(64).max(1);
        BitAdjacency { n, words, bits: vec![0; n * words] }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize) {
        self.bits[i * self.words + j / 64] |= 1 << (j % 64);
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> bool {
        self.bits[i * self.words + j / 64] >> (j % 64) & 1 == 1
    }

    #[inline]
    pub fn row(&self, i: usize) -> &[u64] {
        &self.bits[i * self.words..(i + 1) * self.words]
    }

    pub fn degree(&self, i: usize) -> usize {
        self.row(i).iter().map(|w| w.count_ones() as usize).sum()
    }

    /// `|N(i) ∩ N(j)|`
    pub fn common(&self, i: usize, j: usize) -> usize {
        self.row(i)
            .iter()
            .zip(self.row(j))
            .map(|(a, b)| (a & b).count_ones() as usize)
            .sum()
    }

    /// Neighbors of `i`, ascending.
    pub fn neighbors(&self, i: usize) -> impl Iterator<Item = usize> + '_ {
        self.row(i).iter().enumerate().flat_map(|(wi, &w)| {
            let mut w = w;
            std::iter::from_fn(move || {
                if w == 0 {
                    return None;
                }
                let b = w.trailing_zeros() as usize;
                w &= w - 1;
                Some(wi * 64 + b)
            })
        })
    }

    pub fn edge_count(&self) -> usize {
        self.bits.iter().map(|w| w.count_ones() as usize).sum()
    }
}

/// Row-stochastic dense matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct TransitionMatrix {
    n: usize,
    data: Vec<f64>,
}

impl TransitionMatrix {
    /// Row-normalized adjacency. Rows without outgoing weight become uniform.
    pub fn from_graph(g: &Graph) -> Self {
        let n = g.n();
        let mut data = vec![0.0; n * n];
        for v in 0..n {
            let row = &mut data[v * n..(v + 1) * n];
            let total: f64 = g.out_edges(v).map(|(_, w)| w).sum();
            if total > 0.0 {
                for (t, w) in g.out_edges(v) {
                    row[t] = w / total;
                }
            } else {
                row.fill(1.0 / n as f64);
            }
        }
        TransitionMatrix { n, data }
    }

    /// Wraps a dense row-major matrix, checking it is row-stochastic.
    pub fn from_rows(n: usize, data: Vec<f64>) -> Result<Self> {
        if n == 0 || data.len() != n * n {
            return Err(Error::validation("matrix must be n×n with n ≥ 1"));
        }
        for row in data.chunks(n) {
            let sum: f64 = row.iter().sum();
            if row.iter().any(|&x| !(0.0..=1.0).contains(&x)) || (sum - 1.0).abs() > 1e-9 {
                return Err(Error::validation("rows must be probability vectors"));
            }
        }
        Ok(TransitionMatrix { n, data })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.data[i * self.n + j]
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.data[i * self.n..(i + 1) * self.n]
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.data
    }

    pub fn multiply(&self, other: &TransitionMatrix) -> TransitionMatrix {
        let n = self.n;
        let mut out = vec![0.0; n * n];
        for i in 0..n {
            let dst = &mut out[i * n..(i + 1) * n];
            for k in 0..n {
                let a = self.data[i * n + k];
                if a == 0.0 {
                    continue;
                }
                for (d, b) in dst.iter_mut().zip(other.row(k)) {
                    *d += a * b;
                }
            }
        }
        TransitionMatrix { n, data: out }
    }

    /// Applies `f` to every entry. Used to canonicalize floating noise.
    pub(crate) fn map_entries(&self, f: impl Fn(f64) -> f64) -> TransitionMatrix {
        TransitionMatrix { n: self.n, data: self.data.iter().map(|&x| f(x)).collect() }
    }

    pub fn column_sums(&self) -> Vec<f64> {
        let mut s = vec![0.0; self.n];
        for row in self.data.chunks(self.n) {
            for (acc, x) in s.iter_mut().zip(row) {
                *acc += x;
            }
        }
        s
    }

    pub fn row_sums(&self) -> Vec<f64> {
        self.data.chunks(self.n).map(|r| r.iter().sum()).collect()
    }
}

/// `order`-th power of the row-normalized adjacency matrix.
pub fn markov_power(g: &Graph, order: u32) -> TransitionMatrix {
    let base = TransitionMatrix::from_graph(g);
    let mut acc = base.clone();
    for _ in 1..order.max(1) {
        acc = acc.multiply(&base);
    }
    acc
}

/// Unit-weight graph with an edge wherever the entry strictly exceeds `threshold`.
/// Diagonal entries become self-loops.
pub fn binarize(t: &TransitionMatrix, threshold: f64) -> Graph {
    let n = t.n();
    let mut g = Graph { out: vec![BTreeMap::new(); n] };
    for i in 0..n {
        for (j, &x) in t.row(i).iter().enumerate() {
            if x > threshold {
                g.insert_unit(i, j);
            }
        }
    }
    g
}

/// [`binarize`] at the "above uniform" threshold `1/n`.
pub fn binarize_above_uniform(t: &TransitionMatrix) -> Graph {
    binarize(t, 1.0 / t.n() as f64)
}

/// Parses a whitespace-separated `src dst [weight]` edgelist.
///
/// `#` lines are comments, except a `# nodes=K` header which fixes the
/// node count. Duplicate pairs keep the last weight.
pub fn read_edgelist<R: Read>(mut reader: R) -> Result<Graph> {
    let mut text = String::new();
    reader.read_to_string(&mut text)?;
    parse_edgelist(&text)
}

pub fn parse_edgelist(text: &str) -> Result<Graph> {
    let mut header_nodes: Option<usize> = None;
    let mut edges: Vec<(usize, usize, f64)> = Vec::new();
    let mut max_id: Option<usize> = None;

    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = raw.trim();
        if line.is_empty() {
            continue;
        }
        if let Some(comment) = line.strip_prefix('#') {
            if let Some(k) = parse_nodes_header(comment) {
                let k = k.map_err(|message| Error::Parse { line: line_no, message })?;
                header_nodes = Some(k);
            }
            continue;
        }
        let mut tokens = line.split_whitespace();
        let parse_id = |tok: Option<&str>, what: &str| -> Result<usize> {
            let tok = tok.ok_or_else(|| Error::Parse {
                line: line_no,
                message: format!("missing {what} node id"),
            })?;
            tok.parse::<usize>().map_err(|_| Error::Parse {
                line: line_no,
                message: format!("invalid {what} node id {tok:?}"),
            })
        };
        let src = parse_id(tokens.next(), "source")?;
        let dst = parse_id(tokens.next(), "target")?;
        let weight = match tokens.next() {
            None => 1.0,
            Some(tok) => {
                let w: f64 = tok.parse().map_err(|_| Error::Parse {
                    line: line_no,
                    message: format!("invalid weight {tok:?}"),
                })?;
                if !w.is_finite() {
                    return Err(Error::Parse { line: line_no, message: format!("non-finite weight {tok:?}") });
                }
                if w < 0.0 {
                    return Err(Error::validation(format!("line {line_no}: negative weight {w}")));
                }
                w
            }
        };
        if let Some(extra) = tokens.next() {
            return Err(Error::Parse { line: line_no, message: format!("unexpected token {extra:?}") });
        }
        max_id = Some(max_id.map_or(src.max(dst), |m| m.max(src).max(dst)));
        edges.push((src, dst, weight));
    }

    let implied = max_id.map(|m| m + 1);
    let n = match (header_nodes, implied) {
        (Some(k), Some(m)) if k < m => {
            return Err(Error::validation(format!("header declares {k} nodes but ids reach {}", m - 1)))
        }
        (Some(k), _) => k,
        (None, Some(m)) => m,
        (None, None) => return Err(Error::validation("edgelist has no edges and no `# nodes=K` header")),
    };
    Graph::from_edges(n, edges)
}

fn parse_nodes_header(comment: &str) -> Option<std::result::Result<usize, String>> {
    let rest = comment.trim().strip_prefix("nodes")?.trim_start();
    let value = rest.strip_prefix('=')?.trim();
    Some(value.parse::<usize>().map_err(|_| format!("invalid node count {value:?}")))
}

/// Serializes with a `# nodes=K` header and one `src dst weight` line per
/// edge in ascending order; weights carry 9 significant digits.
pub fn write_edgelist(g: &Graph) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "# nodes={}", g.n());
    for (s, t, w) in g.edges() {
        let _ = writeln!(out, "{s} {t} {}", format_sig9(w));
    }
    out
}

/// `%.9g`-style formatting.
pub(crate) fn format_sig9(x: f64) -> String {
    if x == 0.0 {
        return "0".to_string();
    }
    let sci = format!("{x:.8e}");
    let (mantissa, exp) = sci.split_once('e').expect("scientific format");
    let exp: i32 = exp.parse().expect("exponent");
    if !(-5..9).contains(&exp) {
        let mantissa = trim_zeros(mantissa);
        return format!("{mantissa}e{exp}");
    }
    let decimals = (8 - exp).max(0) as usize;
    trim_zeros(&format!("{x:.decimals$}")).to_string()
}

fn trim_zeros(s: &str) -> &str {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.')
    } else {
        s
    }
}
