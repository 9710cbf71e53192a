//! Reachable state enumeration, jump graph, recurrent domain and the CTMC
//! generator matrix.
//!
//! Every potential a neuron can hold is either a tail of its initial value or
//! a finite sum of incoming weights, clipped at the ceiling, so the closure
//! of any state under the jump map is finite. Enumeration is a deterministic
//! breadth-first search (discovery order, neuron index as tie-break); the
//! recurrent domain is the union of closed strongly-connected components of
//! the jump digraph.

use std::collections::HashMap;

use crate::error::{Error, Result};
use crate::model::{NeuronModel, State};

/// Default cap on the number of enumerated states.
pub const DEFAULT_STATE_CAP: usize = 200_000;

/// Enumerated reachable set with its jump graph.
#[derive(Debug, Clone)]
pub struct StateSpace {
    states: Vec<State>,
    index: HashMap<State, usize>,
    /// `edges[u][i]` = index of the state reached when neuron `i` spikes in
    /// state `u` (may equal `u`).
    edges: Vec<Vec<usize>>,
    /// Closed strongly-connected components, each sorted ascending.
    closed_classes: Vec<Vec<usize>>,
    recurrent_mask: Vec<bool>,
}

impl StateSpace {
    /// Breadth-first closure of `x0` under the jump map. Index 0 is `x0`.
    pub fn enumerate(model: &NeuronModel, x0: &State, cap: usize) -> Result<Self> {
        let n = model.n();
        let mut states = vec![x0.clone()];
        let mut index = HashMap::new();
        index.insert(x0.clone(), 0usize);
        let mut edges: Vec<Vec<usize>> = Vec::new();
        let mut head = 0usize;
        while head < states.len() {
            let current = states[head].clone();
            let mut row = Vec::with_capacity(n);
            for i in 0..n {
                let target = model.apply_jump(&current, i)?;
                let id = match index.get(&target) {
                    Some(&id) => id,
                    None => {
                        let id = states.len();
                        if id >= cap {
                            return Err(Error::StateSpaceTooLarge { cap });
                        }
                        index.insert(target.clone(), id);
                        states.push(target);
                        id
                    }
                };
                row.push(id);
            }
            edges.push(row);
            head += 1;
        }
        let closed_classes = closed_classes(states.len(), &edges);
        let mut recurrent_mask = vec![false; states.len()];
        for class in &closed_classes {
            for &u in class {
                recurrent_mask[u] = true;
            }
        }
        Ok(StateSpace {
            states,
            index,
            edges,
            closed_classes,
            recurrent_mask,
        })
    }

    pub fn len(&self) -> usize {
        self.states.len()
    }

    pub fn is_empty(&self) -> bool {
        self.states.is_empty()
    }

    pub fn states(&self) -> &[State] {
        &self.states
    }

    pub fn state(&self, u: usize) -> &State {
        &self.states[u]
    }

    pub fn index_of(&self, x: &State) -> Option<usize> {
        self.index.get(x).copied()
    }

    pub fn edges(&self) -> &[Vec<usize>] {
        &self.edges
    }

    /// Target of the jump of neuron `i` from state `u`.
    pub fn jump_target(&self, u: usize, i: usize) -> usize {
        self.edges[u][i]
    }

    pub fn is_recurrent(&self, u: usize) -> bool {
        self.recurrent_mask[u]
    }

    /// Indices of the recurrent domain (union of closed classes), ascending.
    pub fn recurrent_indices(&self) -> Vec<usize> {
        (0..self.len()).filter(|&u| self.recurrent_mask[u]).collect()
    }

    pub fn closed_classes(&self) -> &[Vec<usize>] {
        &self.closed_classes
    }

    /// The unique closed class, or `MultipleClosedClasses` when the jump
    /// graph has several.
    pub fn single_closed_class(&self) -> Result<&[usize]> {
        if self.closed_classes.len() == 1 {
            Ok(&self.closed_classes[0])
        } else {
            Err(Error::MultipleClosedClasses {
                count: self.closed_classes.len(),
            })
        }
    }

    /// States reachable from `u` (including `u`) in the jump digraph.
    pub fn reachable_from(&self, u: usize) -> Vec<bool> {
        let mut seen = vec![false; self.len()];
        seen[u] = true;
        let mut stack = vec![u];
        while let Some(v) = stack.pop() {
            for &w in &self.edges[v] {
                if !seen[w] {
                    seen[w] = true;
                    stack.push(w);
                }
            }
        }
        seen
    }
}

/// Closed strongly-connected components of the jump digraph, by Kosaraju's
/// two-pass sweep (iterative; the graph is shallow but wide).
fn closed_classes(n: usize, edges: &[Vec<usize>]) -> Vec<Vec<usize>> {
    // Pass 1: finish order on the forward graph.
    let mut visited = vec![false; n];
    let mut order = Vec::with_capacity(n);
    for root in 0..n {
        if visited[root] {
            continue;
        }
        let mut stack = vec![(root, 0usize)];
        visited[root] = true;
        while let Some(&mut (u, ref mut next)) = stack.last_mut() {
            if *next < edges[u].len() {
                let v = edges[u][*next];
                *next += 1;
                if !visited[v] {
                    visited[v] = true;
                    stack.push((v, 0));
                }
            } else {
                order.push(u);
                stack.pop();
            }
        }
    }
    // Pass 2: components on the transposed graph in reverse finish order.
    let mut rev: Vec<Vec<usize>> = vec![Vec::new(); n];
    for (u, row) in edges.iter().enumerate() {
        for &v in row {
            rev[v].push(u);
        }
    }
    let mut comp = vec![usize::MAX; n];
    let mut n_comp = 0usize;
    for &root in order.iter().rev() {
        if comp[root] != usize::MAX {
            continue;
        }
        let mut stack = vec![root];
        comp[root] = n_comp;
        while let Some(u) = stack.pop() {
            for &v in &rev[u] {
                if comp[v] == usize::MAX {
                    comp[v] = n_comp;
                    stack.push(v);
                }
            }
        }
        n_comp += 1;
    }
    // A component is closed when no edge leaves it.
    let mut members: Vec<Vec<usize>> = vec![Vec::new(); n_comp];
    for u in 0..n {
        members[comp[u]].push(u);
    }
    let mut closed = Vec::new();
    for class in members {
        let is_closed = class
            .iter()
            .all(|&u| edges[u].iter().all(|&v| comp[v] == comp[u]));
        if is_closed {
            let mut c = class;
            c.sort_unstable();
            closed.push(c);
        }
    }
    closed.sort_by_key(|c| c[0]);
    closed
}

/// Sparse CTMC generator over an enumerated state space. Off-diagonal
/// entries aggregate every neuron whose jump maps `u` to the same target;
/// jumps with `jump_i(u) = u` contribute nothing.
#[derive(Debug, Clone)]
pub struct RateMatrix {
    n_states: usize,
    /// Off-diagonal entries per row: `(target, rate)`, target-sorted.
    rows: Vec<Vec<(usize, f64)>>,
    diag: Vec<f64>,
    /// Uniformization rate: `max(max_u |Q[u][u]|, n * phi(m))`.
    uniform_rate: f64,
}

impl RateMatrix {
    pub fn n_states(&self) -> usize {
        self.n_states
    }

    pub fn off_diagonal(&self, u: usize) -> &[(usize, f64)] {
        &self.rows[u]
    }

    pub fn diagonal(&self, u: usize) -> f64 {
        self.diag[u]
    }

    pub fn uniform_rate(&self) -> f64 {
        self.uniform_rate
    }

    pub fn entry(&self, u: usize, v: usize) -> f64 {
        if u == v {
            self.diag[u]
        } else {
            self.rows[u]
                .iter()
                .find(|&&(w, _)| w == v)
                .map_or(0.0, |&(_, r)| r)
        }
    }

    /// `(Qf)(u)` for a vector of observable values.
    pub fn apply_to(&self, f: &[f64]) -> Vec<f64> {
        let mut out = vec![0.0; self.n_states];
        for u in 0..self.n_states {
            let mut acc = self.diag[u] * f[u];
            for &(v, r) in &self.rows[u] {
                acc += r * f[v];
            }
            out[u] = acc;
        }
        out
    }

    /// Build a rate matrix directly from rows of off-diagonal entries.
    /// Used for hand-crafted chains in diagnostics and tests; diagonals are
    /// set to minus the row sums.
    pub fn from_off_diagonal(rows: Vec<Vec<(usize, f64)>>) -> Self {
        let n_states = rows.len();
        let mut diag = vec![0.0; n_states];
        let mut rows = rows;
        for (u, row) in rows.iter_mut().enumerate() {
            row.sort_by_key(|&(v, _)| v);
            diag[u] = -row.iter().map(|&(_, r)| r).sum::<f64>();
        }
        let uniform_rate = diag.iter().map(|d| d.abs()).fold(0.0, f64::max);
        RateMatrix {
            n_states,
            rows,
            diag,
            uniform_rate: uniform_rate.max(f64::MIN_POSITIVE),
        }
    }
}

/// Assemble the generator of the jump process over `space`:
/// `Q[u][v] = sum of phi(u_i) over neurons i with jump_i(u) = v` for -
/// `v != u`, and `Q[u][u] = -` (row sum of the off-diagonal part).
pub fn build_rate_matrix(model: &NeuronModel, space: &StateSpace) -> RateMatrix {
    let n_states = space.len();
    let mut rows: Vec<Vec<(usize, f64)>> = Vec::with_capacity(n_states);
    let mut diag = vec![0.0; n_states];
    for u in 0..n_states {
        let rates = model.intensities(space.state(u));
        let mut acc: HashMap<usize, f64> = HashMap::new();
        for (i, &rate) in rates.iter().enumerate() {
            let v = space.jump_target(u, i);
            if v != u {
                *acc.entry(v).or_insert(0.0) += rate;
            }
        }
        let mut row: Vec<(usize, f64)> = acc.into_iter().collect();
        row.sort_by_key(|&(v, _)| v);
        diag[u] = -row.iter().map(|&(_, r)| r).sum::<f64>();
        rows.push(row);
    }
    let max_exit = diag.iter().map(|d| d.abs()).fold(0.0, f64::max);
    RateMatrix {
        n_states,
        rows,
        diag,
        uniform_rate: max_exit.max(model.rate_bound()),
    }
}
