//! The domain sentiment graph: a pairwise Markov random field whose nodes
//! are collected words and whose edges carry typed correlation potentials.

use std::collections::BTreeMap;
use std::ops::{Add, Mul};

use serde::{Deserialize, Serialize};

use crate::collection::{Origin, SentimentWordSet};
use crate::correlation::{CorrelationCounts, CorrelationKind, EpsilonTable, WordPair};
use crate::error::{Error, Result};

/// Index of the positive state in every 2-vector and 2x2 matrix.
pub const POS: usize = 0;
/// Index of the negative state.
pub const NEG: usize = 1;

/// A distribution `[p(+), p(-)]` over the two polarity states.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NodePotential(pub [f64; 2]);

impl NodePotential {
    /// `[p, 1 - p]`.
    pub fn new(p: f64) -> Self {
        Self([p, 1.0 - p])
    }

    pub fn uniform() -> Self {
        Self([0.5, 0.5])
    }

    pub fn p(&self) -> f64 {
        self.0[POS]
    }

    /// `[1 - p, p]`, obtained by swapping the components.
    pub fn flipped(&self) -> Self {
        Self([self.0[NEG], self.0[POS]])
    }
}

/// A 2x2 state compatibility matrix indexed `[x_i][x_j]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EdgePotential(pub [[f64; 2]; 2]);

impl EdgePotential {
    pub const ZERO: EdgePotential = EdgePotential([[0.0; 2]; 2]);

    /// `[[0.5 + eps, 0.5 - eps], [0.5 - eps, 0.5 + eps]]`.
    pub fn from_epsilon(epsilon: f64) -> Result<Self> {
        if epsilon.is_nan() || epsilon.abs() >= 0.5 {
            return Err(Error::InvalidEpsilon {
                kind: "edge".into(),
                value: epsilon,
            });
        }
        let same = 0.5 + epsilon;
        let diff = 0.5 - epsilon;
        Ok(Self([[same, diff], [diff, same]]))
    }

    pub fn get(&self, from: usize, to: usize) -> f64 {
        self.0[from][to]
    }

    pub fn is_symmetric(&self) -> bool {
        self.0[0][1] == self.0[1][0]
    }

    /// True when every entry is equal, so the edge carries no information.
    pub fn is_constant(&self) -> bool {
        let v = self.0[0][0];
        self.0.iter().flatten().all(|x| *x == v)
    }
}

impl Add for EdgePotential {
    type Output = EdgePotential;

    fn add(self, rhs: Self) -> Self {
        let mut out = self;
        for (row, r) in out.0.iter_mut().zip(rhs.0) {
            for (x, y) in row.iter_mut().zip(r) {
                *x += y;
            }
        }
        out
    }
}

impl Mul<f64> for EdgePotential {
    type Output = EdgePotential;

    fn mul(self, k: f64) -> Self {
        EdgePotential(self.0.map(|row| row.map(|x| x * k)))
    }
}

/// The transition matrix for one correlation kind.
pub fn edge_potential(kind: CorrelationKind, epsilons: &EpsilonTable) -> Result<EdgePotential> {
    EdgePotential::from_epsilon(epsilons.get(kind)).map_err(|_| Error::InvalidEpsilon {
        kind: kind.to_string(),
        value: epsilons.get(kind),
    })
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum EdgeWeighting {
    /// Each kind present on an edge contributes its matrix once.
    #[default]
    Presence,
    /// Each kind contributes its matrix scaled by its occurrence count.
    CountWeighted,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct GraphConfig {
    pub epsilons: EpsilonTable,
    pub min_edge_count: usize,
    pub weighting: EdgeWeighting,
}

impl Default for GraphConfig {
    fn default() -> Self {
        Self {
            epsilons: EpsilonTable::default(),
            min_edge_count: 1,
            weighting: EdgeWeighting::Presence,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Node {
    pub form: String,
    pub prior: NodePotential,
    pub origin: Option<Origin>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Edge {
    /// Endpoints as node indices, `a < b`.
    pub a: usize,
    pub b: usize,
    pub kinds: BTreeMap<CorrelationKind, usize>,
    /// Effective (type-summed) potential.
    pub potential: EdgePotential,
}

impl Edge {
    pub fn other(&self, node: usize) -> usize {
        if node == self.a {
            self.b
        } else {
            self.a
        }
    }
}

/// Entrywise sum of the per-kind matrices present on an edge.
pub fn effective_edge_potential(
    kinds: &BTreeMap<CorrelationKind, usize>,
    epsilons: &EpsilonTable,
    weighting: EdgeWeighting,
) -> Result<EdgePotential> {
    let mut total = EdgePotential::ZERO;
    for (&kind, &count) in kinds {
        let m = edge_potential(kind, epsilons)?;
        total = total
            + match weighting {
                EdgeWeighting::Presence => m,
                EdgeWeighting::CountWeighted => m * count as f64,
            };
    }
    Ok(total)
}

/// Undirected typed word graph. Nodes are kept in lexicographic form order.
#[derive(Debug, Clone, PartialEq)]
pub struct SentimentGraph {
    nodes: Vec<Node>,
    index: BTreeMap<String, usize>,
    edges: Vec<Edge>,
    adjacency: Vec<Vec<usize>>,
    config: GraphConfig,
}

impl SentimentGraph {
    pub fn builder(config: GraphConfig) -> GraphBuilder {
        GraphBuilder {
            config,
            nodes: BTreeMap::new(),
            relations: BTreeMap::new(),
        }
    }

    pub fn nodes(&self) -> &[Node] {
        &self.nodes
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn node_index(&self, form: &str) -> Option<usize> {
        self.index.get(form).copied()
    }

    pub fn node(&self, form: &str) -> Option<&Node> {
        self.node_index(form).map(|i| &self.nodes[i])
    }

    /// Edge indices incident to `node`.
    pub fn incident(&self, node: usize) -> &[usize] {
        &self.adjacency[node]
    }

    pub fn config(&self) -> &GraphConfig {
        &self.config
    }

    pub fn edge_between(&self, a: &str, b: &str) -> Option<&Edge> {
        let (i, j) = (self.node_index(a)?, self.node_index(b)?);
        self.adjacency[i]
            .iter()
            .map(|&e| &self.edges[e])
            .find(|e| e.other(i) == j)
    }

    /// The same graph with every prior `[p, 1 - p]` replaced by `[1 - p, p]`.
    pub fn with_flipped_priors(&self) -> Self {
        let mut out = self.clone();
        for node in &mut out.nodes {
            node.prior = node.prior.flipped();
        }
        out
    }

    /// TSV rows `form<TAB>p`.
    pub fn nodes_tsv(&self) -> String {
        self.nodes
            .iter()
            .map(|n| format!("{}\t{}\n", n.form, n.prior.p()))
            .collect()
    }

    /// TSV rows `w1<TAB>w2<TAB>kind<TAB>count`, one per kind on each edge.
    pub fn edges_tsv(&self) -> String {
        let mut out = String::new();
        for edge in &self.edges {
            let (a, b) = (&self.nodes[edge.a].form, &self.nodes[edge.b].form);
            for (kind, count) in &edge.kinds {
                out.push_str(&format!("{a}\t{b}\t{kind}\t{count}\n"));
            }
        }
        out
    }

    /// Rebuilds a graph from [`SentimentGraph::nodes_tsv`] and
    /// [`SentimentGraph::edges_tsv`] output.
    pub fn from_tsv(nodes: &str, edges: &str, config: GraphConfig) -> Result<Self> {
        let mut builder = Self::builder(config);
        for (idx, line) in nodes.lines().enumerate() {
            let line_no = idx + 1;
            if line.trim().is_empty() {
                continue;
            }
            let Some((form, p)) = line.split_once('\t') else {
                return Err(Error::malformed(line_no, "expected form<TAB>p"));
            };
            let p: f64 = p
                .trim()
                .parse()
                .map_err(|_| Error::malformed(line_no, format!("bad prior {p:?}")))?;
            if !(0.0..=1.0).contains(&p) {
                return Err(Error::malformed(line_no, "prior must lie in [0, 1]"));
            }
            builder.add_node(form, NodePotential::new(p), None);
        }
        for (idx, line) in edges.lines().enumerate() {
            let line_no = idx + 1;
            if line.trim().is_empty() {
                continue;
            }
            let cols: Vec<&str> = line.split('\t').collect();
            if cols.len() != 4 {
                return Err(Error::malformed(line_no, "expected w1, w2, kind, count"));
            }
            let kind = cols[2].parse().map_err(|e| Error::malformed(line_no, e))?;
            let count = cols[3]
                .parse()
                .map_err(|_| Error::malformed(line_no, format!("bad count {:?}", cols[3])))?;
            for w in [cols[0], cols[1]] {
                if !builder.nodes.contains_key(w) {
                    return Err(Error::malformed(
                        line_no,
                        format!("edge references unknown node {w:?}"),
                    ));
                }
            }
            if cols[0] == cols[1] {
                return Err(Error::malformed(line_no, "self-loop edge"));
            }
            builder.add_relation(cols[0], cols[1], kind, count);
        }
        builder.build()
    }
}

pub struct GraphBuilder {
    config: GraphConfig,
    nodes: BTreeMap<String, (NodePotential, Option<Origin>)>,
    relations: BTreeMap<WordPair, BTreeMap<CorrelationKind, usize>>,
}

impl GraphBuilder {
    pub fn add_node(
        &mut self,
        form: &str,
        prior: NodePotential,
        origin: Option<Origin>,
    ) -> &mut Self {
        self.nodes.insert(form.to_string(), (prior, origin));
        self
    }

    pub fn add_relation(
        &mut self,
        a: &str,
        b: &str,
        kind: CorrelationKind,
        count: usize,
    ) -> &mut Self {
        let (pair, _) = WordPair::new(a, b);
        *self
            .relations
            .entry(pair)
            .or_default()
            .entry(kind)
            .or_insert(0) += count;
        self
    }

    pub fn build(self) -> Result<SentimentGraph> {
        self.config.epsilons.validate()?;
        let mut nodes = Vec::with_capacity(self.nodes.len());
        let mut index = BTreeMap::new();
        for (form, (prior, origin)) in self.nodes {
            index.insert(form.clone(), nodes.len());
            nodes.push(Node {
                form,
                prior,
                origin,
            });
        }

        let mut edges = Vec::new();
        let mut adjacency = vec![Vec::new(); nodes.len()];
        for (pair, kinds) in self.relations {
            if pair.first == pair.second {
                return Err(Error::Invariant(format!("self-loop on {:?}", pair.first)));
            }
            let lookup = |w: &str| {
                index.get(w).copied().ok_or_else(|| {
                    Error::Invariant(format!("relation references uncollected word {w:?}"))
                })
            };
            let (a, b) = (lookup(&pair.first)?, lookup(&pair.second)?);
            let threshold = self.config.min_edge_count.max(1);
            if !kinds.values().any(|&c| c >= threshold) {
                continue;
            }
            let potential =
                effective_edge_potential(&kinds, &self.config.epsilons, self.config.weighting)?;
            adjacency[a].push(edges.len());
            adjacency[b].push(edges.len());
            edges.push(Edge {
                a: a.min(b),
                b: a.max(b),
                kinds,
                potential,
            });
        }

        Ok(SentimentGraph {
            nodes,
            index,
            edges,
            adjacency,
            config: self.config,
        })
    }
}

/// Builds the graph from collected words and aggregated correlation counts.
pub fn build_graph(
    words: &SentimentWordSet,
    counts: &CorrelationCounts,
    config: GraphConfig,
) -> Result<SentimentGraph> {
    let mut builder = SentimentGraph::builder(config);
    for w in words.iter() {
        builder.add_node(&w.form, NodePotential::new(w.prior_p), Some(w.origin));
    }
    for (pair, kind, count) in counts.iter() {
        for form in [&pair.first, &pair.second] {
            if !words.contains(form) {
                return Err(Error::Invariant(format!(
                    "relation references uncollected word {form:?}"
                )));
            }
        }
        builder.add_relation(&pair.first, &pair.second, kind, count);
    }
    builder.build()
}
