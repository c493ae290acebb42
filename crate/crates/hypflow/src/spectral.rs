//! Recurrent components of the automaton graph, Perron-Frobenius eigendata,
//! growth rates, and Parry chains.
//!
//! The shift space is edge-indexed: the adjacency matrix is over edges,
//! with `A(e, e') = 1` when the terminus of `e` is the origin of `e'`.
//! Recurrent components are computed from the state graph and carried as
//! edge sets.

use serde::Serialize;

use crate::automaton::{state_sccs, Automaton};
use crate::error::{Error, Result};
use crate::tol;

/// A maximal recurrent subgraph, carried as the set of automaton edges with
/// both endpoints in one nontrivial strongly connected component.
#[derive(Clone, Debug)]
pub struct Component {
    /// Position in the deterministic component ordering (lowest edge id
    /// first).
    pub id: usize,
    /// States of the underlying state-graph component, ascending.
    pub states: Vec<u32>,
    /// Automaton edge ids, ascending; these index the component's
    /// edge-level adjacency.
    pub edge_ids: Vec<u32>,
    /// gcd of cycle lengths.
    pub period: u32,
}

impl Component {
    pub fn edge_count(&self) -> usize {
        self.edge_ids.len()
    }

    /// Dense 0/1 edge adjacency: entry (i, j) is 1 when local edge i feeds
    /// local edge j.
    pub fn adjacency(&self, a: &Automaton) -> Vec<Vec<f64>> {
        let succ = self.edge_successors(a);
        let n = self.edge_count();
        let mut m = vec![vec![0.0; n]; n];
        for (i, row) in succ.iter().enumerate() {
            for &j in row {
                m[i][j as usize] = 1.0;
            }
        }
        m
    }

    /// Local successor lists: for each local edge index, the local indices
    /// of edges that can follow it.
    pub fn edge_successors(&self, a: &Automaton) -> Vec<Vec<u32>> {
        let local: std::collections::HashMap<u32, u32> = self
            .edge_ids
            .iter()
            .enumerate()
            .map(|(i, &e)| (e, i as u32))
            .collect();
        self.edge_ids
            .iter()
            .map(|&ei| {
                let to = a.edge(ei).to;
                a.out_edges(to)
                    .iter()
                    .filter_map(|&fj| local.get(&fj).copied())
                    .collect()
            })
            .collect()
    }

    /// Local predecessor lists, transposing `edge_successors`.
    pub fn edge_predecessors(&self, a: &Automaton) -> Vec<Vec<u32>> {
        let succ = self.edge_successors(a);
        let mut pred = vec![Vec::new(); succ.len()];
        for (i, row) in succ.iter().enumerate() {
            for &j in row {
                pred[j as usize].push(i as u32);
            }
        }
        pred
    }
}

/// Perron eigendata of an irreducible nonnegative matrix.
#[derive(Clone, Debug, Serialize)]
pub struct PerronData {
    pub eigenvalue: f64,
    /// Right eigenvector, strictly positive, normalized to sum 1.
    pub right: Vec<f64>,
    /// Left eigenvector, strictly positive, normalized so left . right = 1.
    pub left: Vec<f64>,
    /// Final `max_i |(M h - rho h)_i| / rho`.
    pub residual: f64,
}

/// A finite-state Markov chain over component edges.
#[derive(Clone, Debug, Serialize)]
pub struct MarkovChain {
    /// Row-stochastic transition matrix (dense, local edge indices).
    pub transition: Vec<Vec<f64>>,
    /// Stationary probability vector.
    pub stationary: Vec<f64>,
}

impl MarkovChain {
    pub fn len(&self) -> usize {
        self.stationary.len()
    }

    pub fn is_empty(&self) -> bool {
        self.stationary.is_empty()
    }

    pub fn check_invariants(&self) -> Result<()> {
        for row in &self.transition {
            let s: f64 = row.iter().sum();
            if (s - 1.0).abs() > tol::ROW_STOCHASTIC {
                return Err(Error::InvalidData(format!(
                    "transition row sums to {s}, not 1"
                )));
            }
        }
        for (j, &pj) in self.stationary.iter().enumerate() {
            if pj <= 0.0 {
                return Err(Error::InvalidData(format!("stationary[{j}] = {pj} <= 0")));
            }
            let mut t = 0.0;
            for (i, row) in self.transition.iter().enumerate() {
                t += self.stationary[i] * row[j];
            }
            if (t - pj).abs() > tol::STATIONARY {
                return Err(Error::InvalidData(format!(
                    "stationary defect {} at {j}",
                    (t - pj).abs()
                )));
            }
        }
        Ok(())
    }
}

/// All recurrent components of the edge graph, with periods. Deterministic
/// order: ascending lowest edge id.
pub fn scc_decompose(a: &Automaton) -> Vec<Component> {
    let mut comps = Vec::new();
    for scc in state_sccs(a) {
        let mut states = scc.clone();
        states.sort_unstable();
        let inside: std::collections::HashSet<u32> = states.iter().copied().collect();
        let mut edge_ids: Vec<u32> = (0..a.edges().len() as u32)
            .filter(|&ei| {
                let e = a.edge(ei);
                inside.contains(&e.from) && inside.contains(&e.to)
            })
            .collect();
        edge_ids.sort_unstable();
        if edge_ids.is_empty() {
            continue;
        }
        // A single state with no self-loop is not recurrent.
        if states.len() == 1 && !edge_ids.iter().any(|&ei| a.edge(ei).from == a.edge(ei).to) {
            continue;
        }
        let period = component_period(a, &states);
        comps.push(Component {
            id: 0,
            states,
            edge_ids,
            period,
        });
    }
    comps.sort_by_key(|c| c.edge_ids[0]);
    for (i, c) in comps.iter_mut().enumerate() {
        c.id = i;
    }
    comps
}

/// gcd of cycle lengths, from BFS level differences along intra-component
/// edges.
fn component_period(a: &Automaton, states: &[u32]) -> u32 {
    let inside: std::collections::HashSet<u32> = states.iter().copied().collect();
    let mut level: std::collections::HashMap<u32, i64> = std::collections::HashMap::new();
    let root = states[0];
    level.insert(root, 0);
    let mut queue = std::collections::VecDeque::new();
    queue.push_back(root);
    let mut g: i64 = 0;
    while let Some(v) = queue.pop_front() {
        let lv = level[&v];
        for &ei in a.out_edges(v) {
            let e = a.edge(ei);
            if !inside.contains(&e.to) {
                continue;
            }
            match level.get(&e.to) {
                None => {
                    level.insert(e.to, lv + 1);
                    queue.push_back(e.to);
                }
                Some(&lt) => {
                    g = gcd(g, (lv + 1 - lt).abs());
                }
            }
        }
    }
    g.max(1) as u32
}

fn gcd(a: i64, b: i64) -> i64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

/// Sparse nonnegative matrix in successor-list form, the shape all Perron
/// solves here consume.
pub struct SparseMatrix {
    pub n: usize,
    /// `succ[i]` lists (j, weight) with `M[i][j] = weight`.
    pub succ: Vec<Vec<(u32, f64)>>,
}

impl SparseMatrix {
    pub fn from_dense(m: &[Vec<f64>]) -> Self {
        let n = m.len();
        let succ = m
            .iter()
            .map(|row| {
                row.iter()
                    .enumerate()
                    .filter(|(_, &w)| w != 0.0)
                    .map(|(j, &w)| (j as u32, w))
                    .collect()
            })
            .collect();
        SparseMatrix { n, succ }
    }

    fn matvec_left(&self, x: &[f64], out: &mut [f64]) {
        // out = x^T M
        out.iter_mut().for_each(|v| *v = 0.0);
        for (i, row) in self.succ.iter().enumerate() {
            let xi = x[i];
            if xi == 0.0 {
                continue;
            }
            for &(j, w) in row {
                out[j as usize] += xi * w;
            }
        }
    }

    fn matvec_right(&self, x: &[f64], out: &mut [f64]) {
        // out = M x
        for (i, row) in self.succ.iter().enumerate() {
            let mut acc = 0.0;
            for &(j, w) in row {
                acc += w * x[j as usize];
            }
            out[i] = acc;
        }
    }

    /// Boolean reachability closure test for irreducibility.
    pub fn is_irreducible(&self) -> bool {
        if self.n == 0 {
            return false;
        }
        let reach_all = |forward: bool| -> bool {
            let mut seen = vec![false; self.n];
            let mut stack = vec![0u32];
            seen[0] = true;
            let mut pred: Vec<Vec<u32>> = vec![Vec::new(); self.n];
            if !forward {
                for (i, row) in self.succ.iter().enumerate() {
                    for &(j, _) in row {
                        pred[j as usize].push(i as u32);
                    }
                }
            }
            while let Some(v) = stack.pop() {
                let nexts: Vec<u32> = if forward {
                    self.succ[v as usize].iter().map(|&(j, _)| j).collect()
                } else {
                    pred[v as usize].clone()
                };
                for j in nexts {
                    if !seen[j as usize] {
                        seen[j as usize] = true;
                        stack.push(j);
                    }
                }
            }
            seen.into_iter().all(|b| b)
        };
        reach_all(true) && reach_all(false)
    }
}

#[derive(Clone, Copy, Debug)]
pub struct PerronOptions {
    pub tol: f64,
    pub max_iters: u64,
}

impl Default for PerronOptions {
    fn default() -> Self {
        PerronOptions {
            tol: tol::PERRON_TOL,
            max_iters: tol::PERRON_MAX_ITERS,
        }
    }
}

/// Power iteration with Collatz-Wielandt bracketing. For period p > 1 the
/// iteration runs on the p-th power of the matrix (block-primitive), and
/// the eigenvector is reassembled by averaging one period.
pub fn perron(m: &SparseMatrix, component_period: u32, opts: &PerronOptions) -> Result<PerronData> {
    if !m.is_irreducible() {
        return Err(Error::NotIrreducible);
    }
    let right = perron_vector(m, component_period, opts, false)?;
    let left = perron_vector(m, component_period, opts, true)?;
    let eigenvalue = right.1;
    let mut h = right.0;
    let mut l = left.0;
    // Normalize: sum h = 1, l . h = 1.
    let hs: f64 = h.iter().sum();
    h.iter_mut().for_each(|v| *v /= hs);
    let lh: f64 = l.iter().zip(&h).map(|(a, b)| a * b).sum();
    l.iter_mut().for_each(|v| *v /= lh);
    // Residual in the scale of the eigenvalue.
    let mut mh = vec![0.0; m.n];
    m.matvec_right(&h, &mut mh);
    let residual = mh
        .iter()
        .zip(&h)
        .map(|(a, b)| (a - eigenvalue * b).abs())
        .fold(0.0f64, f64::max)
        / eigenvalue;
    Ok(PerronData {
        eigenvalue,
        right: h,
        left: l,
        residual,
    })
}

/// Returns (eigenvector, eigenvalue, trace of per-sweep residuals).
fn perron_vector(
    m: &SparseMatrix,
    period: u32,
    opts: &PerronOptions,
    transpose: bool,
) -> Result<(Vec<f64>, f64)> {
    let n = m.n;
    let p = period.max(1) as u64;
    let mut x = vec![1.0f64; n];
    let mut tmp = vec![0.0f64; n];
    let mut iters = 0u64;
    let mut last_spread = f64::INFINITY;
    loop {
        // One application of M^p.
        let mut y = x.clone();
        for _ in 0..p {
            if transpose {
                m.matvec_left(&y, &mut tmp);
            } else {
                m.matvec_right(&y, &mut tmp);
            }
            std::mem::swap(&mut y, &mut tmp);
        }
        // Collatz-Wielandt bounds for the p-step map.
        let mut lo = f64::INFINITY;
        let mut hi = 0.0f64;
        for i in 0..n {
            if x[i] > 0.0 {
                let r = y[i] / x[i];
                lo = lo.min(r);
                hi = hi.max(r);
            }
            if y[i] <= 0.0 {
                return Err(Error::NotIrreducible);
            }
        }
        let lambda_p = (lo * hi).sqrt();
        let spread = (hi - lo) / lambda_p;
        let scale: f64 = y.iter().sum::<f64>();
        y.iter_mut().for_each(|v| *v /= scale);
        x = y;
        iters += p;
        if spread <= opts.tol {
            let lambda = lambda_p.powf(1.0 / p as f64);
            // For p > 1 average one period so the vector is a genuine
            // eigenvector of M rather than of M^p.
            if p > 1 {
                let mut acc = x.clone();
                let mut z = x.clone();
                for j in 1..p {
                    if transpose {
                        m.matvec_left(&z, &mut tmp);
                    } else {
                        m.matvec_right(&z, &mut tmp);
                    }
                    std::mem::swap(&mut z, &mut tmp);
                    let lp = lambda.powi(j as i32);
                    for (a, b) in acc.iter_mut().zip(&z) {
                        *a += b / lp;
                    }
                }
                x = acc;
            }
            return Ok((x, lambda));
        }
        if iters >= opts.max_iters {
            return Err(Error::NoConvergence {
                budget: opts.max_iters,
                residual: last_spread,
            });
        }
        last_spread = spread;
    }
}

/// Exponential growth rate: log of the largest component Perron eigenvalue
/// of the (unweighted) edge adjacency.
pub fn growth_rate(a: &Automaton) -> Result<f64> {
    growth_rate_with(a, &PerronOptions::default())
}

pub fn growth_rate_with(a: &Automaton, opts: &PerronOptions) -> Result<f64> {
    let comps = scc_decompose(a);
    if comps.is_empty() {
        return Err(Error::NoCycles);
    }
    let mut best = f64::NEG_INFINITY;
    for c in &comps {
        let m = component_matrix(a, &c);
        let pd = perron(&m, c.period, opts)?;
        best = best.max(pd.eigenvalue.ln());
    }
    Ok(best)
}

pub fn component_matrix(a: &Automaton, c: &Component) -> SparseMatrix {
    let succ = c
        .edge_successors(a)
        .into_iter()
        .map(|row| row.into_iter().map(|j| (j, 1.0)).collect())
        .collect();
    SparseMatrix {
        n: c.edge_count(),
        succ,
    }
}

/// Components whose Perron eigenvalue ties the maximum within a relative
/// tolerance; deterministic order (lowest edge id first).
pub fn maximal_components(a: &Automaton) -> Result<Vec<Component>> {
    maximal_components_with(a, &PerronOptions::default(), tol::MAXIMAL_COMPONENT_TIE)
}

pub fn maximal_components_with(
    a: &Automaton,
    opts: &PerronOptions,
    tie_tol: f64,
) -> Result<Vec<Component>> {
    let comps = scc_decompose(a);
    if comps.is_empty() {
        return Err(Error::NoCycles);
    }
    let mut eigs = Vec::new();
    for c in &comps {
        let m = component_matrix(a, c);
        eigs.push(perron(&m, c.period, opts)?.eigenvalue);
    }
    let best = eigs.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    Ok(comps
        .into_iter()
        .zip(eigs)
        .filter(|(_, e)| (best - e) / best <= tie_tol)
        .map(|(c, _)| c)
        .collect())
}

/// The maximal-entropy Markov chain of a component:
/// `P(e, e') = A(e, e') h(e') / (rho h(e))`, stationary `pi ~ l h`.
pub fn parry_chain(a: &Automaton, c: &Component) -> Result<MarkovChain> {
    parry_chain_with(a, c, &PerronOptions::default())
}

pub fn parry_chain_with(
    a: &Automaton,
    c: &Component,
    opts: &PerronOptions,
) -> Result<MarkovChain> {
    let m = component_matrix(a, c);
    let pd = perron(&m, c.period, opts)?;
    Ok(chain_from_perron(&m, &pd))
}

/// Markov chain of a weighted component matrix from its Perron data.
pub fn chain_from_perron(m: &SparseMatrix, pd: &PerronData) -> MarkovChain {
    let n = m.n;
    let mut transition = vec![vec![0.0; n]; n];
    for (i, row) in m.succ.iter().enumerate() {
        for &(j, w) in row {
            transition[i][j as usize] = w * pd.right[j as usize] / (pd.eigenvalue * pd.right[i]);
        }
        // Remove the residual row defect so downstream sampling sees exact
        // distributions.
        let s: f64 = transition[i].iter().sum();
        transition[i].iter_mut().for_each(|v| *v /= s);
    }
    let mut stationary: Vec<f64> = pd.left.iter().zip(&pd.right).map(|(l, h)| l * h).collect();
    let z: f64 = stationary.iter().sum();
    stationary.iter_mut().for_each(|v| *v /= z);
    MarkovChain {
        transition,
        stationary,
    }
}

/// Structured per-component record for reports.
#[derive(Debug, Clone, Serialize)]
pub struct ComponentRecord {
    pub id: usize,
    pub states: usize,
    pub edges: usize,
    pub period: u32,
    pub log_eigenvalue: f64,
}

pub fn component_records(a: &Automaton, opts: &PerronOptions) -> Result<Vec<ComponentRecord>> {
    scc_decompose(a)
        .iter()
        .map(|c| {
            let m = component_matrix(a, c);
            let pd = perron(&m, c.period, opts)?;
            Ok(ComponentRecord {
                id: c.id,
                states: c.states.len(),
                edges: c.edge_count(),
                period: c.period,
                log_eigenvalue: pd.eigenvalue.ln(),
            })
        })
        .collect()
}
