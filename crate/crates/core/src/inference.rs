//! Loopy belief propagation over a [`SentimentGraph`], plus exact marginals
//! by enumeration for small graphs.
//!
//! Messages are updated with a synchronous (flooding) schedule: every
//! directed message of iteration `t + 1` is computed from the messages of
//! iteration `t`. Messages start uniform and are normalized after each
//! update, which also keeps long products from underflowing.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::mrf::{SentimentGraph, NEG, POS};

/// Largest graph [`exact_marginals`] will enumerate.
pub const EXACT_NODE_CAP: usize = 20;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct InferenceParams {
    pub max_iterations: usize,
    /// Stop once the largest change of any message entry falls below this.
    pub tolerance: f64,
    /// `new = damping * old + (1 - damping) * update`.
    pub damping: f64,
}

impl Default for InferenceParams {
    fn default() -> Self {
        Self {
            max_iterations: 100,
            tolerance: 1e-6,
            damping: 0.0,
        }
    }
}

impl InferenceParams {
    pub fn validate(&self) -> Result<()> {
        if self.max_iterations < 1 {
            return Err(Error::Config("max_iterations must be at least 1".into()));
        }
        if self.tolerance.is_nan() || self.tolerance <= 0.0 {
            return Err(Error::Config("tolerance must be positive".into()));
        }
        if !(0.0..1.0).contains(&self.damping) {
            return Err(Error::Config("damping must lie in [0, 1)".into()));
        }
        Ok(())
    }
}

/// Inferred distribution `[b(+), b(-)]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BeliefVector(pub [f64; 2]);

impl BeliefVector {
    pub fn positive(&self) -> f64 {
        self.0[POS]
    }

    pub fn negative(&self) -> f64 {
        self.0[NEG]
    }

    pub fn margin(&self) -> f64 {
        (self.0[POS] - self.0[NEG]).abs()
    }

    pub fn favors_positive(&self) -> bool {
        self.0[POS] >= self.0[NEG]
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ConvergenceReport {
    pub iterations: usize,
    pub final_delta: f64,
    pub converged: bool,
}

impl ConvergenceReport {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes") + "\n"
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Inference {
    pub beliefs: BTreeMap<String, BeliefVector>,
    pub report: ConvergenceReport,
}

impl Inference {
    pub fn belief(&self, form: &str) -> Option<BeliefVector> {
        self.beliefs.get(form).copied()
    }
}

/// TSV rows `form<TAB>b_pos<TAB>b_neg`.
pub fn beliefs_tsv(beliefs: &BTreeMap<String, BeliefVector>) -> String {
    beliefs
        .iter()
        .map(|(form, b)| format!("{form}\t{}\t{}\n", b.positive(), b.negative()))
        .collect()
}

pub fn beliefs_from_tsv(text: &str) -> Result<BTreeMap<String, BeliefVector>> {
    let mut out = BTreeMap::new();
    for (idx, line) in text.lines().enumerate() {
        let line_no = idx + 1;
        if line.trim().is_empty() {
            continue;
        }
        let cols: Vec<&str> = line.split('\t').collect();
        if cols.len() != 3 {
            return Err(Error::malformed(line_no, "expected form, b_pos, b_neg"));
        }
        let parse = |s: &str| {
            s.parse::<f64>()
                .ok()
                .filter(|v| (0.0..=1.0).contains(v))
                .ok_or_else(|| Error::malformed(line_no, format!("bad belief {s:?}")))
        };
        out.insert(
            cols[0].to_string(),
            BeliefVector([parse(cols[1])?, parse(cols[2])?]),
        );
    }
    Ok(out)
}

fn normalize(v: [f64; 2]) -> [f64; 2] {
    let z = v[0] + v[1];
    [v[0] / z, v[1] / z]
}

/// Index of the message travelling along `edge` into `node`.
fn incoming(graph: &SentimentGraph, edge: usize, node: usize) -> usize {
    if graph.edges()[edge].b == node {
        2 * edge
    } else {
        2 * edge + 1
    }
}

/// Runs typed loopy belief propagation and reads out normalized beliefs.
///
/// Non-convergence is not an error: the report carries `converged: false`
/// and the beliefs of the last iteration are returned.
pub fn propagate(graph: &SentimentGraph, params: &InferenceParams) -> Result<Inference> {
    params.validate()?;
    let edges = graph.edges();
    let nodes = graph.nodes();

    // messages[2e] flows a -> b along edge e, messages[2e + 1] flows b -> a.
    let mut messages = vec![[0.5, 0.5]; 2 * edges.len()];
    let mut next = messages.clone();
    let mut report = ConvergenceReport {
        iterations: 0,
        final_delta: 0.0,
        converged: false,
    };

    for iteration in 1..=params.max_iterations {
        let mut delta: f64 = 0.0;
        for (e, edge) in edges.iter().enumerate() {
            for (slot, from, _) in [(2 * e, edge.a, edge.b), (2 * e + 1, edge.b, edge.a)] {
                let mut h = nodes[from].prior.0;
                for &other in graph.incident(from) {
                    if other == e {
                        continue;
                    }
                    let m = messages[incoming(graph, other, from)];
                    h = normalize([h[POS] * m[POS], h[NEG] * m[NEG]]);
                }
                let psi = |x_from: usize, x_to: usize| {
                    if from == edge.a {
                        edge.potential.get(x_from, x_to)
                    } else {
                        edge.potential.get(x_to, x_from)
                    }
                };
                let update = normalize([
                    psi(POS, POS) * h[POS] + psi(NEG, POS) * h[NEG],
                    psi(POS, NEG) * h[POS] + psi(NEG, NEG) * h[NEG],
                ]);
                let old = messages[slot];
                let value = if params.damping > 0.0 {
                    let l = params.damping;
                    normalize([
                        l * old[POS] + (1.0 - l) * update[POS],
                        l * old[NEG] + (1.0 - l) * update[NEG],
                    ])
                } else {
                    update
                };
                delta = delta
                    .max((value[POS] - old[POS]).abs())
                    .max((value[NEG] - old[NEG]).abs());
                next[slot] = value;
            }
        }
        std::mem::swap(&mut messages, &mut next);
        report.iterations = iteration;
        report.final_delta = delta;
        if delta < params.tolerance {
            report.converged = true;
            break;
        }
    }

    let mut beliefs = BTreeMap::new();
    for (i, node) in nodes.iter().enumerate() {
        let incident = graph.incident(i);
        let belief = if incident.is_empty() {
            node.prior.0
        } else {
            let mut b = node.prior.0;
            for &e in incident {
                let m = messages[incoming(graph, e, i)];
                b = normalize([b[POS] * m[POS], b[NEG] * m[NEG]]);
            }
            b
        };
        beliefs.insert(node.form.clone(), BeliefVector(belief));
    }

    Ok(Inference { beliefs, report })
}

/// Exact per-node marginals of the joint
/// `prod_i prior_i(x_i) * prod_edges potential(x_a, x_b)`, by enumerating
/// all `2^n` assignments.
pub fn exact_marginals(graph: &SentimentGraph) -> Result<BTreeMap<String, BeliefVector>> {
    let n = graph.nodes().len();
    if n > EXACT_NODE_CAP {
        return Err(Error::TooManyNodes {
            nodes: n,
            cap: EXACT_NODE_CAP,
        });
    }
    // Bit i of an assignment set means node i is negative.
    let state = |mask: u32, i: usize| ((mask >> i) & 1) as usize;
    let mut marginals = vec![[0.0f64; 2]; n];
    let mut total = 0.0;
    for mask in 0u32..(1u32 << n) {
        let mut weight = 1.0;
        for (i, node) in graph.nodes().iter().enumerate() {
            weight *= node.prior.0[state(mask, i)];
        }
        for edge in graph.edges() {
            weight *= edge.potential.get(state(mask, edge.a), state(mask, edge.b));
        }
        total += weight;
        for (i, m) in marginals.iter_mut().enumerate() {
            m[state(mask, i)] += weight;
        }
    }
    Ok(graph
        .nodes()
        .iter()
        .zip(marginals)
        .map(|(node, m)| {
            (
                node.form.clone(),
                BeliefVector([m[POS] / total, m[NEG] / total]),
            )
        })
        .collect())
}
