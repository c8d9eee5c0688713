//! Breadth-first enumeration of B- and C-patterns up to permutation, with
//! periodicity, finiteness and sign-coherence reporting, conjecture checkers,
//! dual mutation and the third duality.
//!
//! Only one representative per class is expanded, and the direction that
//! led to a node is never applied again from it (that would step back).

use crate::matrix::{Matrix, Permutation};
use crate::mutation::{check_dualities, is_column_sign_coherent, mutate_b, vector_sign, DualityReport, Node};
use crate::scalar::Scalar;
use rayon::prelude::*;
use serde_json::{json, Value};
use std::cmp::Ordering;
use std::collections::HashMap;
use std::fmt::Write as _;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ExploreError {
    #[error("row {0} of G has no tropical sign")]
    UndefinedTau(usize),
    #[error("direction {0} is out of range")]
    BadDirection(usize),
}

/// How a matrix transforms under a permutation.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Action {
    /// `σA`: rows and columns.
    Both,
    /// `σ̃A`: columns only.
    Columns,
}

/// Canonical form of a tuple of matrices under a simultaneous permutation
/// action, with the permutation `π` that produces it from the input.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct CanonicalKey {
    pub key: Vec<Scalar>,
    pub perm: Permutation,
}

fn lex_cmp(a: &[Scalar], b: &[Scalar]) -> Ordering {
    for (x, y) in a.iter().zip(b) {
        if x != y {
            return x.cmp_value(y);
        }
    }
    a.len().cmp(&b.len())
}

fn acted(parts: &[(&Matrix, Action)], s: &Permutation) -> Vec<Scalar> {
    let mut v = Vec::new();
    for (m, act) in parts {
        let a = match act {
            Action::Both => s.act(m),
            Action::Columns => s.act_columns(m),
        };
        v.extend_from_slice(a.entries());
    }
    v
}

/// Minimum over all `n!` permutations, by entrywise value order.
pub fn canonicalize(parts: &[(&Matrix, Action)]) -> CanonicalKey {
    let n = parts[0].0.cols();
    let mut best: Option<CanonicalKey> = None;
    for s in Permutation::all(n) {
        let v = acted(parts, &s);
        let better = match &best {
            None => true,
            Some(b) => lex_cmp(&v, &b.key) == Ordering::Less,
        };
        if better {
            best = Some(CanonicalKey { key: v, perm: s });
        }
    }
    best.expect("at least one permutation")
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PatternKind {
    /// Classes of `B_t` under `σ`.
    B,
    /// Classes of `(B_t, C_t)` under `(σ, σ̃)`.
    C,
}

impl PatternKind {
    fn key(self, node: &Node) -> CanonicalKey {
        match self {
            PatternKind::B => canonicalize(&[(&node.b, Action::Both)]),
            PatternKind::C => canonicalize(&[(&node.b, Action::Both), (&node.c, Action::Columns)]),
        }
    }

    fn label(self) -> &'static str {
        match self {
            PatternKind::B => "B",
            PatternKind::C => "C",
        }
    }
}

/// `(word, σ, target)`: the node at `word` relates to the representative at
/// `target` by `X^{target} = σ X^{word}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Periodicity {
    pub word: Vec<usize>,
    pub perm: Permutation,
    pub target: Vec<usize>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Finiteness {
    /// Every class appears within this many mutations.
    Finite(usize),
    /// New classes still appear at the depth limit.
    Undeterminable,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Coherence {
    CoherentUpTo(usize),
    Incoherent(Vec<Vec<usize>>),
}

impl Coherence {
    pub fn is_coherent(&self) -> bool {
        matches!(self, Coherence::CoherentUpTo(_))
    }
}

#[derive(Clone, Debug, Default)]
pub struct ExploreOptions {
    /// Check the duality identities at every generated node with this symmetrizer.
    pub symmetrizer: Option<Vec<Scalar>>,
}

#[derive(Clone, Debug)]
pub struct ExplorationReport {
    pub kind: PatternKind,
    pub depth: usize,
    pub initial: Matrix,
    /// Class representatives in BFS order.
    pub entries: Vec<Node>,
    pub periodicities: Vec<Periodicity>,
    pub finiteness: Finiteness,
    /// Present for C-patterns.
    pub coherence: Option<Coherence>,
    /// Nodes where a duality identity failed.
    pub duality_failures: Vec<(Vec<usize>, DualityReport)>,
    /// Number of nodes generated, representatives included.
    pub nodes_generated: usize,
}

impl ExplorationReport {
    pub fn size(&self) -> usize {
        self.entries.len()
    }

    pub fn max_depth(&self) -> usize {
        self.entries.iter().map(Node::depth).max().unwrap_or(0)
    }

    /// Index of the representative for `word`, if it is one.
    pub fn find(&self, word: &[usize]) -> Option<&Node> {
        self.entries.iter().find(|e| e.word == word)
    }

    fn shown(&self, node: &Node) -> Matrix {
        match self.kind {
            PatternKind::B => node.b.clone(),
            PatternKind::C => node.c.clone(),
        }
    }

    /// Plain-text layout: pattern, periodicity, finiteness, size, coherence.
    pub fn render_text(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "{}-pattern", self.kind.label());
        for e in &self.entries {
            let _ = writeln!(s, "{}", fmt_word(&e.word));
            s.push_str(&self.shown(e).render());
        }
        let _ = writeln!(s, "\nPeriodicity");
        for p in &self.periodicities {
            let _ = writeln!(s, "{} : {} same as {}", fmt_word(&p.word), p.perm, fmt_word(&p.target));
        }
        let _ = writeln!(s, "\nFiniteness");
        match self.finiteness {
            Finiteness::Finite(d) => {
                let _ = writeln!(s, "finite, maximum depth = {d}");
            }
            Finiteness::Undeterminable => s.push_str("undeterminable\n"),
        }
        let _ = writeln!(s, "\nSize\n{}", self.size());
        if let Some(c) = &self.coherence {
            let _ = writeln!(s, "\nCoherence");
            match c {
                Coherence::CoherentUpTo(l) => {
                    let _ = writeln!(s, "sign-coherent up to {l}");
                }
                Coherence::Incoherent(ws) => {
                    let list: Vec<String> = ws.iter().map(|w| fmt_word(w)).collect();
                    let _ = writeln!(s, "incoherent\n{}", list.join("\n"));
                }
            }
        }
        s
    }

    pub fn to_json(&self) -> Value {
        let entries: Vec<Value> = self.entries.iter().map(|e| e.to_json(None)).collect();
        let periodicities: Vec<Value> = self
            .periodicities
            .iter()
            .map(|p| json!({ "word": p.word, "permutation": p.perm.one_based(), "same_as": p.target }))
            .collect();
        let finiteness = match self.finiteness {
            Finiteness::Finite(d) => json!({ "finite": true, "max_depth": d }),
            Finiteness::Undeterminable => json!({ "finite": false }),
        };
        let coherence = match &self.coherence {
            None => Value::Null,
            Some(Coherence::CoherentUpTo(l)) => json!({ "coherent": true, "up_to": l }),
            Some(Coherence::Incoherent(ws)) => json!({ "coherent": false, "words": ws }),
        };
        json!({
            "kind": self.kind.label(),
            "depth": self.depth,
            "initial": self.initial.to_json(),
            "entries": entries,
            "periodicities": periodicities,
            "finiteness": finiteness,
            "size": self.size(),
            "coherence": coherence,
            "duality_failures": self.duality_failures.iter().map(|(w, _)| json!(w)).collect::<Vec<_>>(),
        })
    }
}

/// `[2, 1]` style, 1-based.
pub fn fmt_word(word: &[usize]) -> String {
    let parts: Vec<String> = word.iter().map(usize::to_string).collect();
    format!("[{}]", parts.join(", "))
}

fn explore(b0: &Matrix, depth: usize, kind: PatternKind, opts: &ExploreOptions) -> ExplorationReport {
    let n = b0.n();
    let root = Node::initial(b0);
    let root_key = kind.key(&root);
    let mut index: HashMap<Vec<Scalar>, (usize, Permutation)> = HashMap::new();
    index.insert(root_key.key, (0, root_key.perm));
    let mut entries = vec![root];
    let mut periodicities = Vec::new();
    let mut duality_failures = Vec::new();
    let mut frontier = vec![0usize];
    let mut nodes_generated = 1;
    let mut last_new_depth = 0;
    let mut new_at_limit = depth == 0;
    for level in 1..=depth {
        let tasks: Vec<(usize, usize)> = frontier
            .iter()
            .flat_map(|&p| {
                let last = entries[p].word.last().copied();
                (1..=n).filter(move |&k| Some(k) != last).map(move |k| (p, k))
            })
            .collect();
        let children: Vec<(Node, CanonicalKey, Option<DualityReport>)> = tasks
            .par_iter()
            .map(|&(p, k)| {
                let child = entries[p].mutate(b0, k);
                let key = kind.key(&child);
                let dual = opts.symmetrizer.as_ref().map(|d| check_dualities(&child, b0, d));
                (child, key, dual)
            })
            .collect();
        nodes_generated += children.len();
        let mut next = Vec::new();
        for (child, key, dual) in children {
            if let Some(rep) = dual.filter(|r| !r.passed()) {
                duality_failures.push((child.word.clone(), rep));
            }
            match index.get(&key.key) {
                Some((idx, perm)) => {
                    // π_rep·X_rep = π_child·X_child, so X_rep = (π_rep⁻¹ π_child) X_child.
                    let sigma = perm.inverse().compose(&key.perm);
                    periodicities.push(Periodicity { word: child.word.clone(), perm: sigma, target: entries[*idx].word.clone() });
                }
                None => {
                    index.insert(key.key, (entries.len(), key.perm));
                    next.push(entries.len());
                    entries.push(child);
                    last_new_depth = level;
                    if level == depth {
                        new_at_limit = true;
                    }
                }
            }
        }
        frontier = next;
        if frontier.is_empty() {
            break;
        }
    }
    let finiteness = if new_at_limit { Finiteness::Undeterminable } else { Finiteness::Finite(last_new_depth) };
    let coherence = (kind == PatternKind::C).then(|| {
        let bad: Vec<Vec<usize>> = entries.iter().filter(|e| !is_column_sign_coherent(&e.c)).map(|e| e.word.clone()).collect();
        if bad.is_empty() {
            Coherence::CoherentUpTo(depth)
        } else {
            Coherence::Incoherent(bad)
        }
    });
    ExplorationReport {
        kind,
        depth,
        initial: b0.clone(),
        entries,
        periodicities,
        finiteness,
        coherence,
        duality_failures,
        nodes_generated,
    }
}

/// Distinct B-matrices up to `σ` within `depth` mutations.
pub fn enumerate_b_pattern(b0: &Matrix, depth: usize) -> ExplorationReport {
    explore(b0, depth, PatternKind::B, &ExploreOptions::default())
}

/// Distinct `(B, C)` pairs up to `(σ, σ̃)` within `depth` mutations.
pub fn enumerate_c_pattern(b0: &Matrix, depth: usize) -> ExplorationReport {
    explore(b0, depth, PatternKind::C, &ExploreOptions::default())
}

pub fn enumerate_with(b0: &Matrix, depth: usize, kind: PatternKind, opts: &ExploreOptions) -> ExplorationReport {
    explore(b0, depth, kind, opts)
}

/// Classes of whole nodes `(B, C, G)` under a simultaneous permutation, with
/// the mutation adjacency between them. Every exchange-graph relation is
/// coarser than this one, so exchange graphs are quotients of it.
#[derive(Clone, Debug)]
pub struct StateSpace {
    pub initial: Matrix,
    pub depth: usize,
    pub states: Vec<Node>,
    /// `adjacency[s][k-1]` is the state reached from `s` in direction `k`,
    /// or `None` if that lies beyond the depth limit.
    pub adjacency: Vec<Vec<Option<usize>>>,
}

impl StateSpace {
    /// True when every state has all `n` neighbours inside the ball.
    pub fn is_complete(&self) -> bool {
        self.adjacency.iter().all(|row| row.iter().all(Option::is_some))
    }

    pub fn n(&self) -> usize {
        self.initial.n()
    }
}

fn state_key(node: &Node) -> CanonicalKey {
    canonicalize(&[(&node.b, Action::Both), (&node.c, Action::Columns), (&node.g, Action::Columns)])
}

/// Explores node classes up to `depth` mutations from the root.
pub fn explore_states(b0: &Matrix, depth: usize) -> StateSpace {
    let n = b0.n();
    let root = Node::initial(b0);
    let mut index: HashMap<Vec<Scalar>, usize> = HashMap::new();
    index.insert(state_key(&root).key, 0);
    let mut states = vec![root];
    let mut level_of = vec![0usize];
    let mut adjacency: Vec<Vec<Option<usize>>> = vec![vec![None; n]];
    let mut frontier = vec![0usize];
    let mut level = 0;
    while !frontier.is_empty() {
        let tasks: Vec<(usize, usize)> = frontier.iter().flat_map(|&s| (1..=n).map(move |k| (s, k))).collect();
        let children: Vec<(Node, Vec<Scalar>)> = tasks
            .par_iter()
            .map(|&(s, k)| {
                let child = states[s].mutate(b0, k);
                let key = state_key(&child).key;
                (child, key)
            })
            .collect();
        let mut next = Vec::new();
        for ((s, k), (child, key)) in tasks.into_iter().zip(children) {
            let target = match index.get(&key) {
                Some(&t) => Some(t),
                None if level < depth => {
                    let t = states.len();
                    index.insert(key, t);
                    states.push(child);
                    level_of.push(level + 1);
                    adjacency.push(vec![None; n]);
                    next.push(t);
                    Some(t)
                }
                None => None,
            };
            adjacency[s][k - 1] = target;
        }
        frontier = next;
        level += 1;
    }
    StateSpace { initial: b0.clone(), depth, states, adjacency }
}

/// Outcome of running a C-pattern from one mutation-equivalent matrix.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HypothesisEntry {
    /// Word of the matrix in the B-pattern of the input.
    pub word: Vec<usize>,
    pub transposed: bool,
    pub negated: bool,
    pub size: usize,
    pub finiteness: Finiteness,
    pub coherent: bool,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HypothesisReport {
    pub entries: Vec<HypothesisEntry>,
}

impl HypothesisReport {
    pub fn passed(&self) -> bool {
        self.entries.iter().all(|e| e.coherent)
    }
}

/// Runs the C-pattern from every distinct matrix of the B-pattern, and
/// optionally from their transposes and negatives.
pub fn check_standard_hypothesis(b0: &Matrix, depth: usize, transposes: bool, negatives: bool) -> HypothesisReport {
    let bp = enumerate_b_pattern(b0, depth);
    let mut jobs = Vec::new();
    for e in &bp.entries {
        jobs.push((e.word.clone(), false, false, e.b.clone()));
        if transposes {
            jobs.push((e.word.clone(), true, false, e.b.transpose()));
        }
        if negatives {
            jobs.push((e.word.clone(), false, true, e.b.neg()));
        }
    }
    let entries = jobs
        .into_iter()
        .map(|(word, transposed, negated, b)| {
            let r = enumerate_c_pattern(&b, depth);
            HypothesisEntry {
                word,
                transposed,
                negated,
                size: r.size(),
                finiteness: r.finiteness,
                coherent: r.coherence.as_ref().is_some_and(Coherence::is_coherent),
            }
        })
        .collect();
    HypothesisReport { entries }
}

/// One axis-parallel c-vector `c_i = α e_j` and its g-row witness `β = (g_i)_j`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DiscretenessWitness {
    pub word: Vec<usize>,
    /// Column index of the c-vector (1-based).
    pub i: usize,
    /// Axis index (1-based).
    pub j: usize,
    pub alpha: Scalar,
    pub beta: Scalar,
    /// `α² d_j = d_i`, `αβ = d_i / d_j` and the other g-vectors vanish at `j`.
    pub passed: bool,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DiscretenessReport {
    pub witnesses: Vec<DiscretenessWitness>,
    /// Incoherent nodes are outside the statement and only counted.
    pub skipped_incoherent: usize,
}

impl DiscretenessReport {
    pub fn passed(&self) -> bool {
        self.witnesses.iter().all(|w| w.passed)
    }
}

/// Axis-parallel c-vectors of one node, checked square-root-free.
pub fn discreteness_at(node: &Node, d: &[Scalar]) -> Vec<DiscretenessWitness> {
    let n = node.n();
    let mut out = Vec::new();
    for i in 0..n {
        let col = node.c.column(i);
        let support: Vec<usize> = (0..n).filter(|&r| !col[r].is_zero()).collect();
        let [j] = support[..] else { continue };
        let alpha = col[j].clone();
        let beta = node.g.get(j, i).clone();
        let others_vanish = (0..n).all(|l| l == i || node.g.get(j, l).is_zero());
        let passed = &alpha * &alpha * &d[j] == d[i] && &alpha * &beta == &d[i] / &d[j] && others_vanish;
        out.push(DiscretenessWitness { word: node.word.clone(), i: i + 1, j: j + 1, alpha, beta, passed });
    }
    out
}

/// Discreteness checks over every C-pattern representative within `depth`.
pub fn check_discreteness(b0: &Matrix, depth: usize, d: &[Scalar]) -> DiscretenessReport {
    let report = enumerate_c_pattern(b0, depth);
    let mut witnesses = Vec::new();
    let mut skipped_incoherent = 0;
    for node in &report.entries {
        if !node.is_sign_coherent() {
            skipped_incoherent += 1;
            continue;
        }
        witnesses.extend(discreteness_at(node, d));
    }
    DiscretenessReport { witnesses, skipped_incoherent }
}

/// Moves the initial vertex from `t0` to its `k`-neighbour `t1`, for the C-
/// and G-matrices of a fixed vertex `t`. `b_t0` is the exchange matrix at `t0`.
pub fn dual_mutate(c: &Matrix, g: &Matrix, b_t0: &Matrix, k: usize) -> Result<(Matrix, Matrix), ExploreError> {
    let n = b_t0.n();
    if k == 0 || k > n {
        return Err(ExploreError::BadDirection(k));
    }
    let kk = k - 1;
    let tau = vector_sign(&g.row(kk)).ok_or(ExploreError::UndefinedTau(k))?;
    let t = Scalar::from_int(i64::from(tau));
    // (J_k + [−τB]₊^{k•}) C: only row k changes.
    let c_new = Matrix::from_fn(n, n, |i, j| {
        if i != kk {
            return c.get(i, j).clone();
        }
        let mut v = -c.get(kk, j);
        for l in 0..n {
            if l != kk {
                let w = (-(&t * b_t0.get(kk, l))).pos();
                if !w.is_zero() {
                    v += &(&w * c.get(l, j));
                }
            }
        }
        v
    });
    // (J_k + [τB]₊^{•k}) G: row k flips, other rows gain a multiple of row k.
    let g_new = Matrix::from_fn(n, n, |i, j| {
        if i == kk {
            return -g.get(kk, j);
        }
        let w = (&t * b_t0.get(i, kk)).pos();
        g.get(i, j) + &w * g.get(kk, j)
    });
    Ok((c_new, g_new))
}

/// Checks the dual mutation at the node reached from `b_t0` by `word`, in
/// direction `k`, against a fresh replay from `μ_k(b_t0)` along `[k] + word`.
pub fn dual_mutation_agrees(b_t0: &Matrix, word: &[usize], k: usize) -> Result<bool, ExploreError> {
    let node = Node::replay(b_t0, word);
    let (c1, g1) = dual_mutate(&node.c, &node.g, b_t0, k)?;
    let b_t1 = mutate_b(b_t0, k);
    let mut w = vec![k];
    w.extend_from_slice(word);
    let fresh = Node::replay(&b_t1, &w);
    Ok(fresh.c == c1 && fresh.g == g1)
}

/// `C^{t0}_t = (G̃^{t}_{t0})ᵀ` and `G^{t0}_t = (C̃^{t}_{t0})ᵀ`, where the tilde
/// pattern starts at `t` from `B_tᵀ` and walks the word back to `t0`.
pub fn third_duality_holds(b_t0: &Matrix, word: &[usize]) -> bool {
    let node = Node::replay(b_t0, word);
    let back: Vec<usize> = word.iter().rev().copied().collect();
    let tilde = Node::replay(&node.b.transpose(), &back);
    node.c == tilde.g.transpose() && node.g == tilde.c.transpose()
}

/// Result of comparing C-periodicity with G-periodicity over a state space.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SynchronicityReport {
    pub pairs_checked: usize,
    /// State pairs where only one of `C' = σ̃C`, `G' = σ̃G` holds.
    pub violations: Vec<(Vec<usize>, Vec<usize>)>,
}

impl SynchronicityReport {
    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }
}

/// The permutation `σ` with `b = σ̃a`, when the columns of `a` are distinct.
pub fn column_permutation(a: &Matrix, b: &Matrix) -> Option<Permutation> {
    let ca = a.columns();
    let cb = b.columns();
    let mut images = Vec::with_capacity(ca.len());
    let mut used = vec![false; ca.len()];
    for col in &ca {
        let j = (0..cb.len()).find(|&j| !used[j] && cb[j] == *col)?;
        used[j] = true;
        images.push(j);
    }
    Some(Permutation::new(images))
}

fn sorted_columns(m: &Matrix) -> Vec<Vec<Scalar>> {
    let mut cols = m.columns();
    cols.sort_by(|x, y| lex_cmp(x, y));
    cols
}

/// `C_{t'} = σ̃C_t ⇔ G_{t'} = σ̃G_t` for every pair of states, same `σ`.
pub fn check_synchronicity(space: &StateSpace) -> SynchronicityReport {
    let mut violations = Vec::new();
    let mut pairs_checked = 0;
    for (mat_of, other_of) in [
        (Box::new(|n: &Node| n.c.clone()) as Box<dyn Fn(&Node) -> Matrix>, Box::new(|n: &Node| n.g.clone()) as Box<dyn Fn(&Node) -> Matrix>),
        (Box::new(|n: &Node| n.g.clone()), Box::new(|n: &Node| n.c.clone())),
    ] {
        let mut groups: HashMap<Vec<Vec<Scalar>>, Vec<usize>> = HashMap::new();
        for (s, node) in space.states.iter().enumerate() {
            groups.entry(sorted_columns(&mat_of(node))).or_default().push(s);
        }
        let mut keys: Vec<&Vec<usize>> = groups.values().collect();
        keys.sort();
        for members in keys {
            for (x, &a) in members.iter().enumerate() {
                for &b in &members[x + 1..] {
                    pairs_checked += 1;
                    let (na, nb) = (&space.states[a], &space.states[b]);
                    let ok = column_permutation(&mat_of(na), &mat_of(nb))
                        .is_some_and(|s| s.act_columns(&other_of(na)) == other_of(nb));
                    if !ok {
                        violations.push((na.word.clone(), nb.word.clone()));
                    }
                }
            }
        }
    }
    SynchronicityReport { pairs_checked, violations }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::chebyshev_value;

    fn h3_initial() -> Matrix {
        let p = chebyshev_value(5);
        let z = Scalar::zero;
        Matrix::from_rows(vec![
            vec![z(), -&p, z()],
            vec![p.clone(), z(), -Scalar::one()],
            vec![z(), Scalar::one(), z()],
        ])
    }

    #[test]
    fn canonical_key_brute_force() {
        let b = h3_initial();
        let c = Node::replay(&b, &[1, 2]).c;
        let key = canonicalize(&[(&b, Action::Both), (&c, Action::Columns)]);
        for s in Permutation::all(3) {
            let b2 = s.act(&b);
            let c2 = s.act_columns(&c);
            let k2 = canonicalize(&[(&b2, Action::Both), (&c2, Action::Columns)]);
            assert_eq!(k2.key, key.key);
            let mut v = k2.perm.act(&b2).entries().to_vec();
            v.extend_from_slice(k2.perm.act_columns(&c2).entries());
            assert_eq!(v, k2.key);
        }
    }

    #[test]
    fn h3_b_pattern() {
        let r = enumerate_b_pattern(&h3_initial(), 7);
        let words: Vec<Vec<usize>> = r.entries.iter().map(|e| e.word.clone()).collect();
        assert_eq!(words, vec![vec![], vec![1], vec![2], vec![3], vec![1, 3], vec![2, 1]]);
        assert_eq!(r.finiteness, Finiteness::Finite(2));
        for p in &r.periodicities {
            let x = Node::replay(&h3_initial(), &p.word).b;
            let y = r.find(&p.target).unwrap().b.clone();
            assert_eq!(p.perm.act(&x), y);
        }
    }

    #[test]
    fn zero_matrix() {
        let r = enumerate_b_pattern(&Matrix::zeros(2, 2), 3);
        assert_eq!(r.size(), 1);
        assert_eq!(r.finiteness, Finiteness::Finite(0));
    }

    #[test]
    fn incoherent_rank2() {
        let b0 = Matrix::from_rows(vec![
            vec![Scalar::zero(), Scalar::from_ratio(1, 2)],
            vec![Scalar::from_ratio(-1, 2), Scalar::zero()],
        ]);
        let r = enumerate_c_pattern(&b0, 2);
        assert_eq!(r.coherence, Some(Coherence::Incoherent(vec![vec![1, 2]])));
    }

    #[test]
    fn dual_mutation_rank2() {
        let b0 = Matrix::from_rows(vec![
            vec![Scalar::zero(), Scalar::from_ratio(-1, 2)],
            vec![Scalar::from_int(2), Scalar::zero()],
        ]);
        assert!(dual_mutation_agrees(&b0, &[1, 2], 1).unwrap());
        assert!(dual_mutation_agrees(&b0, &[], 2).unwrap());
        assert!(third_duality_holds(&b0, &[1, 2, 1]));
        assert!(third_duality_holds(&b0, &[]));
    }

    #[test]
    fn discreteness_axis_witness() {
        let b0 = Matrix::from_rows(vec![
            vec![Scalar::zero(), Scalar::from_ratio(-1, 2)],
            vec![Scalar::from_int(2), Scalar::zero()],
        ]);
        let d = vec![Scalar::from_int(4), Scalar::one()];
        let node = Node::replay(&b0, &[1, 2, 1, 2, 1]);
        let w = discreteness_at(&node, &d);
        assert_eq!(w.len(), 2);
        assert!(w.iter().all(|x| x.passed));
        assert_eq!((w[0].i, w[0].j, w[0].alpha.clone()), (1, 2, Scalar::from_int(2)));
        assert_eq!((w[1].i, w[1].j, w[1].alpha.clone()), (2, 1, Scalar::from_ratio(1, 2)));
    }
}
