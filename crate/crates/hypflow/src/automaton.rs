//! Strongly Markov automatic structures: deterministic labeled graphs whose
//! paths from the initial state spell geodesic normal forms, one per group
//! element.

use std::collections::HashMap;
use std::fmt::Write as _;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::words::{Ball, BallOptions, Letter, Presentation, Word, NO_ELEMENT};

#[derive(Copy, Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Edge {
    pub from: u32,
    pub to: u32,
    pub letter: Letter,
}

/// A finite deterministic labeled graph with a distinguished initial state.
///
/// Invariants enforced at construction: labels are deterministic per state,
/// every state is reachable from the initial state, and no edge enters the
/// initial state (a fresh initial state is spliced in when an ingested
/// automaton violates this; the accepted language is unchanged).
#[derive(Clone, Debug)]
pub struct Automaton {
    name: String,
    state_count: u32,
    initial: u32,
    edges: Vec<Edge>,
    /// Outgoing edge ids per state.
    out: Vec<Vec<u32>>,
}

#[derive(Debug, Clone, Serialize)]
pub struct ValidationReport {
    pub max_verified_radius: u32,
    pub condition1_ok: bool,
    pub condition2_ok: bool,
    pub condition3_ok: bool,
    /// Present whenever a condition fails.
    pub counterexample: Option<String>,
    /// Sphere sizes vs accepted path counts per radius.
    pub path_counts: Vec<(u32, u64, u64)>,
    /// State counts of the nontrivial strongly connected components of the
    /// state graph, for reports.
    pub state_scc_sizes: Vec<usize>,
}

impl ValidationReport {
    pub fn all_ok(&self) -> bool {
        self.condition1_ok && self.condition2_ok && self.condition3_ok
    }
}

impl Automaton {
    pub fn new(name: &str, state_count: u32, initial: u32, edges: Vec<Edge>) -> Result<Self> {
        if initial >= state_count {
            return Err(Error::InvalidData(format!(
                "initial state {initial} out of range"
            )));
        }
        let mut needs_fresh_initial = false;
        for e in &edges {
            if e.from >= state_count || e.to >= state_count {
                return Err(Error::InvalidData(format!(
                    "edge {} -> {} out of range",
                    e.from, e.to
                )));
            }
            if e.to == initial {
                needs_fresh_initial = true;
            }
        }
        let (state_count, initial, edges) = if needs_fresh_initial {
            // Splice in a fresh initial state copying the old one's
            // outgoing edges; the accepted language does not change.
            let fresh = state_count;
            let mut all = edges.clone();
            for e in &edges {
                if e.from == initial {
                    all.push(Edge {
                        from: fresh,
                        to: e.to,
                        letter: e.letter,
                    });
                }
            }
            (state_count + 1, fresh, all)
        } else {
            (state_count, initial, edges)
        };

        let mut out: Vec<Vec<u32>> = vec![Vec::new(); state_count as usize];
        let mut seen: HashMap<(u32, Letter), ()> = HashMap::new();
        for (i, e) in edges.iter().enumerate() {
            if seen.insert((e.from, e.letter), ()).is_some() {
                return Err(Error::NondeterministicLabel {
                    state: e.from,
                    label: format!("{:?}", e.letter),
                });
            }
            out[e.from as usize].push(i as u32);
        }
        let a = Automaton {
            name: name.to_string(),
            state_count,
            initial,
            edges,
            out,
        };
        if let Some(s) = a.unreachable_state() {
            return Err(Error::UnreachableState(s));
        }
        Ok(a)
    }

    fn unreachable_state(&self) -> Option<u32> {
        let mut seen = vec![false; self.state_count as usize];
        let mut stack = vec![self.initial];
        seen[self.initial as usize] = true;
        while let Some(v) = stack.pop() {
            for &ei in &self.out[v as usize] {
                let t = self.edges[ei as usize].to;
                if !seen[t as usize] {
                    seen[t as usize] = true;
                    stack.push(t);
                }
            }
        }
        seen.iter().position(|&b| !b).map(|i| i as u32)
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn state_count(&self) -> u32 {
        self.state_count
    }

    pub fn initial(&self) -> u32 {
        self.initial
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn out_edges(&self, state: u32) -> &[u32] {
        &self.out[state as usize]
    }

    pub fn edge(&self, id: u32) -> Edge {
        self.edges[id as usize]
    }

    /// Follows a label from a state, if an edge exists.
    pub fn step(&self, state: u32, l: Letter) -> Option<u32> {
        self.out[state as usize]
            .iter()
            .map(|&ei| self.edges[ei as usize])
            .find(|e| e.letter == l)
            .map(|e| e.to)
    }

    /// Number of accepted paths (= accepted words) per length `0..=n`.
    pub fn path_counts(&self, n: u32) -> Vec<u64> {
        let mut counts = vec![1u64];
        let mut cur = vec![0u64; self.state_count as usize];
        cur[self.initial as usize] = 1;
        for _ in 1..=n {
            let mut next = vec![0u64; self.state_count as usize];
            for e in &self.edges {
                next[e.to as usize] += cur[e.from as usize];
            }
            counts.push(next.iter().sum());
            cur = next;
        }
        counts
    }

    /// Parses the line-based text format:
    /// `states: N`, `initial: i`, and one `edge: origin target label` line
    /// per edge, with labels like `s2` or `s2^-1`.
    pub fn parse_file(text: &str) -> Result<Self> {
        let mut name = "automaton".to_string();
        let mut states: Option<u32> = None;
        let mut initial: Option<u32> = None;
        let mut labels: Vec<String> = Vec::new();
        let mut edges: Vec<Edge> = Vec::new();
        let label_index = |tok: &str, labels: &mut Vec<String>| -> Letter {
            let (base, inv) = match tok.strip_suffix("^-1") {
                Some(b) => (b, true),
                None => (tok, false),
            };
            let gi = match labels.iter().position(|l| l == base) {
                Some(i) => i,
                None => {
                    labels.push(base.to_string());
                    labels.len() - 1
                }
            };
            Letter::new(gi as u8, inv)
        };
        for (ln, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let (key, rest) = line
                .split_once(':')
                .ok_or_else(|| Error::parse(ln + 1, 1, "expected `key: value`"))?;
            let rest = rest.trim();
            match key.trim() {
                "name" => name = rest.to_string(),
                "states" => {
                    states = Some(rest.parse().map_err(|_| {
                        Error::parse(ln + 1, 1, "states must be an integer")
                    })?)
                }
                "initial" => {
                    initial = Some(rest.parse().map_err(|_| {
                        Error::parse(ln + 1, 1, "initial must be an integer")
                    })?)
                }
                "edge" => {
                    let parts: Vec<&str> = rest.split_whitespace().collect();
                    if parts.len() != 3 {
                        return Err(Error::parse(ln + 1, 1, "expected `edge: origin target label`"));
                    }
                    let from: u32 = parts[0]
                        .parse()
                        .map_err(|_| Error::parse(ln + 1, 1, "bad origin state"))?;
                    let to: u32 = parts[1]
                        .parse()
                        .map_err(|_| Error::parse(ln + 1, 1, "bad target state"))?;
                    let letter = label_index(parts[2], &mut labels);
                    edges.push(Edge { from, to, letter });
                }
                other => return Err(Error::parse(ln + 1, 1, format!("unknown key `{other}`"))),
            }
        }
        let states = states.ok_or_else(|| Error::parse(1, 1, "missing `states:`"))?;
        let initial = initial.ok_or_else(|| Error::parse(1, 1, "missing `initial:`"))?;
        Automaton::new(&name, states, initial, edges)
    }

    /// Serializes in the same line-based format; `parse_file . to_file` is
    /// the identity on the output of `to_file`.
    pub fn to_file(&self, p: &Presentation) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "name: {}", self.name);
        let _ = writeln!(out, "states: {}", self.state_count);
        let _ = writeln!(out, "initial: {}", self.initial);
        for e in &self.edges {
            let _ = writeln!(out, "edge: {} {} {}", e.from, e.to, p.letter_token(e.letter));
        }
        out
    }

    /// Checks the three strongly-Markov conditions exhaustively to radius
    /// `r` against the brute-force ball oracle.
    pub fn validate(&self, p: &Presentation, r: u32) -> Result<ValidationReport> {
        let ball = Ball::build(p, r, &BallOptions::default())?;
        Ok(self.validate_against(p, &ball))
    }

    /// Validation against a prebuilt ball (must carry transitions).
    pub fn validate_against(&self, p: &Presentation, ball: &Ball) -> ValidationReport {
        let r = ball.radius();
        let condition1_ok = self.unreachable_state().is_none();
        let mut condition2_ok = true;
        let mut condition3_ok = true;
        let mut counterexample: Option<Word> = None;

        // Walk all accepted paths of length <= r while tracking the group
        // element each path evaluates to; check geodesy (element depth ==
        // path length) and injectivity, then compare counts per sphere.
        let mut landed: Vec<bool> = vec![false; ball.len()];
        let mut per_depth_paths: Vec<u64> = vec![0; r as usize + 1];
        per_depth_paths[0] = 1;
        landed[ball.identity() as usize] = true;

        // Iterative DFS over (state, element, depth).
        let mut stack: Vec<(u32, u32, u32, Word)> = vec![(
            self.initial,
            ball.identity(),
            0,
            Word::empty(),
        )];
        'dfs: while let Some((state, elem, depth, word)) = stack.pop() {
            if depth == r {
                continue;
            }
            for &ei in self.out_edges(state).iter() {
                let e = self.edge(ei);
                let next_elem = ball.step(elem, e.letter);
                let mut w = word.clone();
                w.push(e.letter);
                if next_elem == NO_ELEMENT || ball.depth_of(next_elem) != depth + 1 {
                    // Accepted word is not geodesic.
                    condition2_ok = false;
                    counterexample = Some(w);
                    break 'dfs;
                }
                if landed[next_elem as usize] {
                    // Two accepted paths hit one element.
                    condition3_ok = false;
                    counterexample = Some(w);
                    break 'dfs;
                }
                landed[next_elem as usize] = true;
                per_depth_paths[(depth + 1) as usize] += 1;
                stack.push((e.to, next_elem, depth + 1, w));
            }
        }

        let mut path_counts = Vec::new();
        if condition2_ok && condition3_ok {
            for d in 0..=r {
                let paths = per_depth_paths[d as usize];
                let sphere = ball.sphere_count(d);
                path_counts.push((d, paths, sphere));
                if paths != sphere {
                    condition3_ok = false;
                    if counterexample.is_none() {
                        // Some element of this sphere was never landed on.
                        counterexample = ball
                            .sphere_ids(d)
                            .find(|&id| !landed[id as usize])
                            .map(|id| ball.normal_form(id));
                    }
                }
            }
        }

        ValidationReport {
            max_verified_radius: r,
            condition1_ok,
            condition2_ok,
            condition3_ok,
            counterexample: counterexample.map(|w| w.display(p)),
            path_counts,
            state_scc_sizes: self.state_scc_sizes(),
        }
    }

    /// Sizes of the nontrivial strongly connected components of the state
    /// graph (a single state counts only with a self-loop).
    pub fn state_scc_sizes(&self) -> Vec<usize> {
        let sccs = state_sccs(self);
        let mut sizes: Vec<usize> = sccs
            .iter()
            .filter(|scc| {
                scc.len() > 1
                    || self.out[scc[0] as usize]
                        .iter()
                        .any(|&ei| self.edges[ei as usize].to == scc[0])
            })
            .map(|scc| scc.len())
            .collect();
        sizes.sort_unstable_by(|a, b| b.cmp(a));
        sizes
    }
}

/// Tarjan over the state graph; returns components in reverse topological
/// order.
pub(crate) fn state_sccs(a: &Automaton) -> Vec<Vec<u32>> {
    let n = a.state_count as usize;
    let mut index_of = vec![u32::MAX; n];
    let mut low = vec![0u32; n];
    let mut on_stack = vec![false; n];
    let mut stack: Vec<u32> = Vec::new();
    let mut sccs: Vec<Vec<u32>> = Vec::new();
    let mut next_index = 0u32;

    // Iterative Tarjan with an explicit call frame.
    enum Frame {
        Enter(u32),
        Resume(u32, usize),
    }
    for root in 0..n as u32 {
        if index_of[root as usize] != u32::MAX {
            continue;
        }
        let mut frames = vec![Frame::Enter(root)];
        while let Some(f) = frames.pop() {
            match f {
                Frame::Enter(v) => {
                    index_of[v as usize] = next_index;
                    low[v as usize] = next_index;
                    next_index += 1;
                    stack.push(v);
                    on_stack[v as usize] = true;
                    frames.push(Frame::Resume(v, 0));
                }
                Frame::Resume(v, mut ei) => {
                    let out = &a.out[v as usize];
                    let mut descended = false;
                    while ei < out.len() {
                        let w = a.edges[out[ei] as usize].to;
                        if index_of[w as usize] == u32::MAX {
                            frames.push(Frame::Resume(v, ei + 1));
                            frames.push(Frame::Enter(w));
                            descended = true;
                            break;
                        }
                        if on_stack[w as usize] {
                            low[v as usize] = low[v as usize].min(index_of[w as usize]);
                        }
                        ei += 1;
                    }
                    if descended {
                        continue;
                    }
                    if low[v as usize] == index_of[v as usize] {
                        let mut scc = Vec::new();
                        loop {
                            let w = stack.pop().unwrap();
                            on_stack[w as usize] = false;
                            scc.push(w);
                            if w == v {
                                break;
                            }
                        }
                        sccs.push(scc);
                    } else if let Some(Frame::Resume(parent, _)) = frames.last() {
                        let p = *parent as usize;
                        low[p] = low[p].min(low[v as usize]);
                    }
                }
            }
        }
    }
    sccs
}

/// Builds the geodesic normal-form acceptor of `Z/p * Z/q`: alternating
/// syllables with least-length coset exponents, ties at `p/2` resolved to
/// the positive power.
pub fn build_freeproduct_automaton(p: u32, q: u32) -> Result<Automaton> {
    if p < 2 {
        return Err(Error::InvalidOrder(p));
    }
    if q < 2 {
        return Err(Error::InvalidOrder(q));
    }
    // States: initial, plus per factor a chain of "positive power" states
    // and a chain of "negative power" states.
    let pos_len = |n: u32| (n / 2) as usize; // exponents 1..=floor(n/2)
    let neg_len = |n: u32| ((n - 1) / 2) as usize; // exponents -1..=-(ceil(n/2)-1)
    let a_pos = pos_len(p);
    let a_neg = neg_len(p);
    let b_pos = pos_len(q);
    let b_neg = neg_len(q);
    let state_count = 1 + a_pos + a_neg + b_pos + b_neg;

    // State numbering: 0 = initial, then a+ chain, a- chain, b+ chain, b- chain.
    let a_pos_base = 1;
    let a_neg_base = a_pos_base + a_pos;
    let b_pos_base = a_neg_base + a_neg;
    let b_neg_base = b_pos_base + b_pos;

    let la = Letter::new(0, false);
    let la_inv = Letter::new(0, true);
    let lb = Letter::new(1, false);
    let lb_inv = Letter::new(1, true);

    let mut edges = Vec::new();
    let mut add = |from: usize, to: usize, letter: Letter| {
        edges.push(Edge {
            from: from as u32,
            to: to as u32,
            letter,
        });
    };

    // Entering a factor's first syllable letter.
    let enter_a = |edges_add: &mut dyn FnMut(usize, usize, Letter), from: usize| {
        if a_pos > 0 {
            edges_add(from, a_pos_base, la);
        }
        if a_neg > 0 {
            edges_add(from, a_neg_base, la_inv);
        }
    };
    let enter_b = |edges_add: &mut dyn FnMut(usize, usize, Letter), from: usize| {
        if b_pos > 0 {
            edges_add(from, b_pos_base, lb);
        }
        if b_neg > 0 {
            edges_add(from, b_neg_base, lb_inv);
        }
    };

    enter_a(&mut add, 0);
    enter_b(&mut add, 0);
    // Extending syllables within a factor.
    for i in 0..a_pos.saturating_sub(1) {
        add(a_pos_base + i, a_pos_base + i + 1, la);
    }
    for i in 0..a_neg.saturating_sub(1) {
        add(a_neg_base + i, a_neg_base + i + 1, la_inv);
    }
    for i in 0..b_pos.saturating_sub(1) {
        add(b_pos_base + i, b_pos_base + i + 1, lb);
    }
    for i in 0..b_neg.saturating_sub(1) {
        add(b_neg_base + i, b_neg_base + i + 1, lb_inv);
    }
    // Switching factors from any syllable state.
    for i in 0..a_pos {
        enter_b(&mut add, a_pos_base + i);
    }
    for i in 0..a_neg {
        enter_b(&mut add, a_neg_base + i);
    }
    for i in 0..b_pos {
        enter_a(&mut add, b_pos_base + i);
    }
    for i in 0..b_neg {
        enter_a(&mut add, b_neg_base + i);
    }

    Automaton::new(
        &format!("z{p}z{q}"),
        state_count as u32,
        0,
        edges,
    )
}

/// Builds a normal-form acceptor from scratch by classifying prefixes of
/// the breadth-first shortlex language by their depth-`k` extension trees
/// (cone types). The construction is certified by `validate`; `k` below the
/// relator half-length merges states unsoundly and is reported as an error.
pub fn build_conetype_automaton(p: &Presentation, k: u32, radius: u32) -> Result<Automaton> {
    let ball = Ball::build(p, radius, &BallOptions::default())?;
    let aut = conetype_from_ball(p, &ball, k)?;
    let report = aut.validate_against(p, &ball);
    if !report.all_ok() {
        return Err(Error::ConeTypeUnsound {
            k,
            reason: format!(
                "conditions (1,2,3) = ({}, {}, {}), counterexample {:?}",
                report.condition1_ok, report.condition2_ok, report.condition3_ok,
                report.counterexample
            ),
        });
    }
    Ok(aut)
}

pub fn conetype_from_ball(p: &Presentation, ball: &Ball, k: u32) -> Result<Automaton> {
    if k < 1 || k > ball.radius() {
        return Err(Error::InvalidData(format!(
            "profile depth k = {k} must be in 1..=radius"
        )));
    }
    let alphabet = p.alphabet_size();
    // A cone type is the k-ball of geodesic extensions together with the
    // pattern of coincidences among their endpoints. It is fully visible
    // only for elements of depth <= radius - k.
    let max_prefix = ball.radius() - k;

    // Serializes the geodesic k-ball of `id`: a DFS over extension words,
    // recording for each geodesic extension the first-visit index of its
    // endpoint within this profile (the coincidence pattern).
    fn profile_of(ball: &Ball, root: u32, k: u32, alphabet: usize) -> Vec<u32> {
        let mut out = Vec::new();
        let mut first_visit: HashMap<u32, u32> = HashMap::new();
        let mut counter = 0u32;
        fn rec(
            ball: &Ball,
            id: u32,
            depth_left: u32,
            alphabet: usize,
            out: &mut Vec<u32>,
            first_visit: &mut HashMap<u32, u32>,
            counter: &mut u32,
        ) {
            if depth_left == 0 {
                return;
            }
            for l in 0..alphabet {
                let t = ball.step(id, Letter(l as u8));
                let geodesic = t != NO_ELEMENT && ball.depth_of(t) == ball.depth_of(id) + 1;
                if !geodesic {
                    out.push(u32::MAX);
                    continue;
                }
                let mark = *first_visit.entry(t).or_insert_with(|| {
                    let m = *counter;
                    *counter += 1;
                    m
                });
                out.push(mark);
                rec(ball, t, depth_left - 1, alphabet, out, first_visit, counter);
            }
        }
        rec(
            ball,
            root,
            k,
            alphabet,
            &mut out,
            &mut first_visit,
            &mut counter,
        );
        out
    }

    fn is_child_form(ball: &Ball, parent: u32, child: u32, letter: u8) -> bool {
        let pf = ball.normal_form(parent);
        let cf = ball.normal_form(child);
        cf.len() == pf.len() + 1
            && cf.0[..pf.len()] == pf.0[..]
            && cf.0[pf.len()] == Letter(letter)
    }

    let mut profile_ids: HashMap<Vec<u32>, u32> = HashMap::new();
    let mut state_of_elem: HashMap<u32, u32> = HashMap::new();
    let mut transitions: HashMap<(u32, u8), u32> = HashMap::new();
    // Walk language elements in breadth-first order up to max_prefix.
    for d in 0..=max_prefix {
        for id in ball.sphere_ids(d) {
            let prof = profile_of(ball, id, k, alphabet);
            let next = profile_ids.len() as u32;
            let sid = *profile_ids.entry(prof).or_insert(next);
            state_of_elem.insert(id, sid);
        }
    }
    // Transitions between classified prefixes; consistency failures mean k
    // is too small.
    for d in 0..max_prefix {
        for id in ball.sphere_ids(d) {
            let from = state_of_elem[&id];
            for l in 0..alphabet as u8 {
                let t = ball.step(id, Letter(l));
                if t == NO_ELEMENT || ball.depth_of(t) != d + 1 || !is_child_form(ball, id, t, l) {
                    continue;
                }
                let to = state_of_elem[&t];
                if let Some(&prev) = transitions.get(&(from, l)) {
                    if prev != to {
                        return Err(Error::ConeTypeUnsound {
                            k,
                            reason: format!(
                                "profile {from} maps ambiguously on letter {l} ({prev} vs {to})"
                            ),
                        });
                    }
                } else {
                    transitions.insert((from, l), to);
                }
            }
        }
    }
    let initial = state_of_elem[&ball.identity()];
    let edges: Vec<Edge> = transitions
        .into_iter()
        .map(|((from, l), to)| Edge {
            from,
            to,
            letter: Letter(l),
        })
        .collect();
    let mut edges = edges;
    edges.sort_by_key(|e| (e.from, e.letter));
    Automaton::new(
        &format!("conetype-k{k}"),
        profile_ids.len() as u32,
        initial,
        edges,
    )
}
