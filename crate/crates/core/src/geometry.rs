//! G-cones, rays, exact fan verification by Fourier–Motzkin elimination,
//! modified-pattern equivalence and exchange graphs.

use crate::explore::{column_permutation, StateSpace};
use crate::matrix::{Matrix, Permutation};
use crate::mutation::{is_row_sign_coherent, vector_sign, Node};
use crate::scalar::Scalar;
use serde_json::{json, Value};
use std::cmp::Ordering;
use std::collections::{BTreeSet, HashMap};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GeometryError {
    #[error("node {0:?} is not sign-coherent")]
    IncoherentNode(Vec<usize>),
    #[error("the pattern is not sign-coherent at {0:?}")]
    IncoherentPattern(Vec<usize>),
}

fn lex(a: &[Scalar], b: &[Scalar]) -> Ordering {
    for (x, y) in a.iter().zip(b) {
        if x != y {
            return x.cmp_value(y);
        }
    }
    a.len().cmp(&b.len())
}

fn inner(x: &[Scalar], y: &[Scalar], d: &[Scalar]) -> Scalar {
    let mut s = Scalar::zero();
    for i in 0..x.len() {
        if !x[i].is_zero() && !y[i].is_zero() {
            s += &(&x[i] * &d[i] * &y[i]);
        }
    }
    s
}

/// A nonzero vector up to positive scaling, stored with its first nonzero
/// coordinate equal to ±1.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Ray(Vec<Scalar>);

impl Ray {
    pub fn new(v: &[Scalar]) -> Option<Ray> {
        let lead = v.iter().find(|x| !x.is_zero())?.abs();
        Some(Ray(v.iter().map(|x| x / &lead).collect()))
    }

    pub fn coords(&self) -> &[Scalar] {
        &self.0
    }

    /// The positive factor `μ` with `v = μ·ray`.
    pub fn scale_of(v: &[Scalar]) -> Option<Scalar> {
        v.iter().find(|x| !x.is_zero()).map(Scalar::abs)
    }
}

fn sorted_rays(cols: &[Vec<Scalar>]) -> Vec<Ray> {
    let mut rays: Vec<Ray> = cols.iter().map(|c| Ray::new(c).expect("nonzero generator")).collect();
    rays.sort_by(|a, b| lex(&a.0, &b.0));
    rays
}

/// A simplicial cone spanned by g-vectors, cut out by c-vector halfspaces.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GCone {
    pub word: Vec<usize>,
    pub generators: Vec<Vec<Scalar>>,
    pub normals: Vec<Vec<Scalar>>,
    pub weight: Vec<Scalar>,
}

impl GCone {
    pub fn dim(&self) -> usize {
        self.weight.len()
    }

    /// `⟨x, c_j⟩_D ≥ 0` for every normal.
    pub fn contains(&self, x: &[Scalar]) -> bool {
        self.normals.iter().all(|c| !inner(x, c, &self.weight).is_negative())
    }

    /// Membership by solving `Gλ = x` and testing `λ ≥ 0`.
    pub fn contains_by_generators(&self, x: &[Scalar]) -> bool {
        let g = Matrix::from_columns(&self.generators);
        let inv = g.inverse().expect("generators form a basis");
        let xm = Matrix::from_columns(&[x.to_vec()]);
        inv.mul(&xm).entries().iter().all(|l| !l.is_negative())
    }

    pub fn rays(&self) -> Vec<Ray> {
        sorted_rays(&self.generators)
    }

    pub fn to_json(&self) -> Value {
        let vecs = |vs: &[Vec<Scalar>]| -> Value {
            Value::Array(vs.iter().map(|v| Value::Array(v.iter().map(Scalar::to_json).collect())).collect())
        };
        json!({ "word": self.word, "generators": vecs(&self.generators), "normals": vecs(&self.normals) })
    }
}

/// The G-cone of a sign-coherent node.
pub fn g_cone(node: &Node, d: &[Scalar]) -> Result<GCone, GeometryError> {
    if !node.is_sign_coherent() {
        return Err(GeometryError::IncoherentNode(node.word.clone()));
    }
    Ok(GCone { word: node.word.clone(), generators: node.g.columns(), normals: node.c.columns(), weight: d.to_vec() })
}

/// Distinct rays among all generators.
pub fn count_rays(cones: &[GCone]) -> usize {
    let mut rays: Vec<Ray> = cones.iter().flat_map(GCone::rays).collect();
    rays.sort_by(|a, b| lex(&a.0, &b.0));
    rays.dedup();
    rays.len()
}

/// Cones of every state, with equal cones (same ray set) listed once.
pub fn fan_of(space: &StateSpace, d: &[Scalar]) -> Result<Vec<GCone>, GeometryError> {
    let mut seen = std::collections::HashSet::new();
    let mut out = Vec::new();
    for node in &space.states {
        let cone = g_cone(node, d).map_err(|_| GeometryError::IncoherentPattern(node.word.clone()))?;
        if seen.insert(cone.rays()) {
            out.push(cone);
        }
    }
    Ok(out)
}

/// A homogeneous linear inequality `a·λ ≥ 0`, or `> 0` when strict.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
struct Ineq {
    coeffs: Vec<Scalar>,
    strict: bool,
}

impl Ineq {
    fn normalized(mut self) -> Ineq {
        if let Some(lead) = self.coeffs.iter().find(|x| !x.is_zero()).map(Scalar::abs) {
            self.coeffs = self.coeffs.iter().map(|x| x / &lead).collect();
        }
        self
    }
}

/// Feasibility of a homogeneous system by Fourier–Motzkin elimination.
fn fm_feasible(mut cons: Vec<Ineq>, nvars: usize) -> bool {
    for v in 0..nvars {
        let (mut pos, mut neg, mut rest) = (Vec::new(), Vec::new(), Vec::new());
        for c in cons {
            match c.coeffs[v].sign() {
                1 => pos.push(c),
                -1 => neg.push(c),
                _ => rest.push(c),
            }
        }
        for p in &pos {
            for q in &neg {
                let (a, b) = (&p.coeffs[v], -&q.coeffs[v]);
                let coeffs: Vec<Scalar> = p.coeffs.iter().zip(&q.coeffs).map(|(x, y)| x * &b + y * a).collect();
                rest.push(Ineq { coeffs, strict: p.strict || q.strict });
            }
        }
        let mut next = Vec::new();
        let mut seen = std::collections::HashSet::new();
        for c in rest {
            if c.coeffs.iter().all(Scalar::is_zero) {
                if c.strict {
                    return false;
                }
                continue;
            }
            let c = c.normalized();
            if seen.insert(c.clone()) {
                next.push(c);
            }
        }
        cons = next;
    }
    true
}

/// Is there `x` in cone `a` with positive coordinate on generator `i` that
/// also lies in cone `b`?
fn escapes(a: &GCone, i: usize, b: &GCone) -> bool {
    let n = a.dim();
    let mut cons = Vec::new();
    for l in 0..n {
        let mut e = vec![Scalar::zero(); n];
        e[l] = Scalar::one();
        cons.push(Ineq { coeffs: e, strict: l == i });
    }
    // ⟨Σ λ_l g_l, c⟩_D ≥ 0 for every normal c of b.
    for c in &b.normals {
        let coeffs = a.generators.iter().map(|g| inner(g, c, &b.weight)).collect();
        cons.push(Ineq { coeffs, strict: false });
    }
    fm_feasible(cons, n)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum FanVerdict {
    Pass,
    /// Indices of two cones whose intersection is not a common face.
    Fail { first: usize, second: usize },
    /// Dimension above the exact limit; only sampled points were checked.
    Partial,
}

/// Largest dimension handled by exact elimination.
pub const EXACT_FAN_DIM: usize = 4;

/// Checks that every pairwise intersection is the cone over the shared rays.
pub fn fan_verify(cones: &[GCone]) -> FanVerdict {
    let Some(first) = cones.first() else { return FanVerdict::Pass };
    if first.dim() > EXACT_FAN_DIM {
        return sampled_fan_check(cones);
    }
    let rays: Vec<Vec<Ray>> = cones.iter().map(|c| c.generators.iter().map(|g| Ray::new(g).expect("nonzero")).collect()).collect();
    for a in 0..cones.len() {
        for b in 0..cones.len() {
            if a == b {
                continue;
            }
            for i in 0..cones[a].dim() {
                if rays[b].contains(&rays[a][i]) {
                    continue;
                }
                if escapes(&cones[a], i, &cones[b]) {
                    return FanVerdict::Fail { first: a.min(b), second: a.max(b) };
                }
            }
        }
    }
    FanVerdict::Pass
}

fn sampled_fan_check(cones: &[GCone]) -> FanVerdict {
    // The generator sum is interior to its cone; it must not lie in another cone.
    let rays: Vec<Vec<Ray>> = cones.iter().map(GCone::rays).collect();
    for (a, ca) in cones.iter().enumerate() {
        let n = ca.dim();
        let center: Vec<Scalar> = (0..n).map(|r| ca.generators.iter().fold(Scalar::zero(), |s, g| s + &g[r])).collect();
        for (b, cb) in cones.iter().enumerate() {
            if a != b && rays[a] != rays[b] && cb.contains(&center) {
                return FanVerdict::Fail { first: a.min(b), second: a.max(b) };
            }
        }
    }
    FanVerdict::Partial
}

/// `C(G_t)` lies in the closed orthant given by the row signs of `G_t`.
pub fn orthant_confined(cone: &GCone) -> bool {
    let g = Matrix::from_columns(&cone.generators);
    is_row_sign_coherent(&g)
}

/// `C(G_t) ∩ O₊` is the face of the orthant spanned by the `e_j` inside the cone.
pub fn orthant_face_property(cone: &GCone) -> bool {
    let n = cone.dim();
    let unit = |j: usize| (0..n).map(|r| Scalar::from_int(i64::from(r == j))).collect::<Vec<_>>();
    let inside: Vec<bool> = (0..n).map(|j| cone.contains(&unit(j))).collect();
    for j in (0..n).filter(|&j| !inside[j]) {
        // No x = Gλ with λ ≥ 0, x ≥ 0 and x_j > 0.
        let mut cons = Vec::new();
        for l in 0..n {
            let mut e = vec![Scalar::zero(); n];
            e[l] = Scalar::one();
            cons.push(Ineq { coeffs: e, strict: false });
        }
        for r in 0..n {
            let coeffs = cone.generators.iter().map(|g| g[r].clone()).collect();
            cons.push(Ineq { coeffs, strict: r == j });
        }
        if fm_feasible(cons, n) {
            return false;
        }
    }
    true
}

/// Each normal hyperplane misses the open positive and negative orthants.
pub fn avoids_open_orthants(cone: &GCone) -> bool {
    cone.normals.iter().all(|c| vector_sign(c).is_some())
}

/// Square-root-free test of `X̃_{t'} = σ̃X̃_t` for `X̃ = X D^{-1/2}`:
/// `x'_{σ(i)} = λ_i x_i` with `λ_i > 0` and `λ_i² d_i = d_{σ(i)}`.
pub fn modified_match(x: &Matrix, y: &Matrix, d: &[Scalar]) -> Option<(Permutation, Vec<Scalar>)> {
    let n = x.cols();
    let xs = x.columns();
    let ys = y.columns();
    let mut images = Vec::with_capacity(n);
    let mut lambdas = Vec::with_capacity(n);
    let mut used = vec![false; n];
    for (i, xi) in xs.iter().enumerate() {
        let ray = Ray::new(xi)?;
        let mu = Ray::scale_of(xi)?;
        let hit = (0..n).find(|&j| {
            !used[j] && Ray::new(&ys[j]).as_ref() == Some(&ray) && {
                let lam = Ray::scale_of(&ys[j]).expect("nonzero") / &mu;
                &lam * &lam * &d[i] == d[j]
            }
        })?;
        used[hit] = true;
        images.push(hit);
        lambdas.push(Ray::scale_of(&ys[hit]).expect("nonzero") / &mu);
    }
    Some((Permutation::new(images), lambdas))
}

/// Modified equality of two sign-coherent nodes, checked on C and on G.
///
/// Returns the permutation and factors from the C side. Panics if the two
/// sides disagree, which would contradict the modified synchronicity.
pub fn modified_equal(a: &Node, b: &Node, d: &[Scalar]) -> Option<(Permutation, Vec<Scalar>)> {
    let on_c = modified_match(&a.c, &b.c, d);
    let on_g = modified_match(&a.g, &b.g, d);
    assert_eq!(
        on_c.as_ref().map(|x| &x.0),
        on_g.as_ref().map(|x| &x.0),
        "modified C and G periodicity disagree for {:?} and {:?}",
        a.word,
        b.word
    );
    on_c
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum GraphKind {
    C,
    G,
    Fan,
    ModC,
    ModG,
}

impl GraphKind {
    pub fn parse(s: &str) -> Option<GraphKind> {
        match s {
            "C" | "c" => Some(GraphKind::C),
            "G" | "g" => Some(GraphKind::G),
            "fan" | "Fan" => Some(GraphKind::Fan),
            "modC" | "modc" => Some(GraphKind::ModC),
            "modG" | "modg" => Some(GraphKind::ModG),
            _ => None,
        }
    }

    pub fn label(self) -> &'static str {
        match self {
            GraphKind::C => "C",
            GraphKind::G => "G",
            GraphKind::Fan => "fan",
            GraphKind::ModC => "modC",
            GraphKind::ModG => "modG",
        }
    }
}

/// Class invariant of a state under one of the five relations.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
enum ClassKey {
    Columns(Vec<Vec<Scalar>>),
    Rays(Vec<Ray>),
    Modified(Vec<(Ray, Scalar)>),
}

fn sorted_columns(m: &Matrix) -> Vec<Vec<Scalar>> {
    let mut cols = m.columns();
    cols.sort_by(|a, b| lex(a, b));
    cols
}

fn modified_key(m: &Matrix, d: &[Scalar]) -> Vec<(Ray, Scalar)> {
    // c̃_i = (μ_i/√d_i)·ray_i is determined by the ray and μ_i²/d_i.
    let mut v: Vec<(Ray, Scalar)> = m
        .columns()
        .iter()
        .enumerate()
        .map(|(i, c)| {
            let mu = Ray::scale_of(c).expect("nonzero column");
            (Ray::new(c).expect("nonzero column"), &mu * &mu / &d[i])
        })
        .collect();
    v.sort_by(|a, b| lex(&a.0 .0, &b.0 .0).then_with(|| a.1.cmp_value(&b.1)));
    v
}

/// Quotient of an explored ball by one of the five relations.
#[derive(Clone, Debug)]
pub struct ExchangeGraph {
    pub kind: String,
    /// Representative word of each class (first in BFS order).
    pub words: Vec<Vec<usize>>,
    /// Class of every state.
    pub class_of: Vec<usize>,
    /// Neighbouring classes, self-loops included.
    pub adjacency: Vec<BTreeSet<usize>>,
    /// All states have every neighbour inside the ball.
    pub complete: bool,
}

impl ExchangeGraph {
    pub fn len(&self) -> usize {
        self.words.len()
    }

    pub fn is_empty(&self) -> bool {
        self.words.is_empty()
    }

    pub fn has_loops(&self) -> bool {
        self.adjacency.iter().enumerate().any(|(v, nb)| nb.contains(&v))
    }

    /// Loop-free with every degree equal to `n`; only meaningful when complete.
    pub fn is_regular(&self, n: usize) -> bool {
        self.complete && !self.has_loops() && self.adjacency.iter().all(|nb| nb.len() == n)
    }

    /// A single cycle through all `len` vertices.
    pub fn is_cycle(&self, len: usize) -> bool {
        if self.len() != len || len < 3 || !self.is_regular(2) {
            return false;
        }
        let mut prev = 0;
        let mut cur = *self.adjacency[0].iter().next().expect("degree 2");
        let mut steps = 1;
        while cur != 0 {
            let next = *self.adjacency[cur].iter().find(|&&x| x != prev).expect("degree 2");
            prev = cur;
            cur = next;
            steps += 1;
        }
        steps == len
    }

    pub fn to_json(&self) -> Value {
        let adj: Vec<Value> = self
            .adjacency
            .iter()
            .enumerate()
            .map(|(v, nb)| {
                json!({
                    "vertex": self.words[v],
                    "neighbors": nb.iter().map(|&u| json!(self.words[u])).collect::<Vec<_>>(),
                })
            })
            .collect();
        json!({ "kind": self.kind, "vertices": self.len(), "complete": self.complete, "adjacency": adj })
    }
}

fn quotient(space: &StateSpace, kind: String, keys: Vec<ClassKey>) -> ExchangeGraph {
    let mut ids: HashMap<ClassKey, usize> = HashMap::new();
    let mut words = Vec::new();
    let mut class_of = Vec::with_capacity(keys.len());
    for (s, key) in keys.into_iter().enumerate() {
        let next = ids.len();
        let id = *ids.entry(key).or_insert_with(|| {
            words.push(space.states[s].word.clone());
            next
        });
        class_of.push(id);
    }
    let mut adjacency = vec![BTreeSet::new(); words.len()];
    for (s, row) in space.adjacency.iter().enumerate() {
        for t in row.iter().flatten() {
            adjacency[class_of[s]].insert(class_of[*t]);
        }
    }
    ExchangeGraph { kind, words, class_of, adjacency, complete: space.is_complete() }
}

/// Exchange graph of the given kind over an explored state space.
pub fn build_exchange_graph(space: &StateSpace, kind: GraphKind, d: &[Scalar]) -> Result<ExchangeGraph, GeometryError> {
    if matches!(kind, GraphKind::Fan | GraphKind::ModC | GraphKind::ModG) {
        if let Some(bad) = space.states.iter().find(|s| !s.is_sign_coherent()) {
            return Err(GeometryError::IncoherentPattern(bad.word.clone()));
        }
    }
    let keys = space
        .states
        .iter()
        .map(|s| match kind {
            GraphKind::C => ClassKey::Columns(sorted_columns(&s.c)),
            GraphKind::G => ClassKey::Columns(sorted_columns(&s.g)),
            GraphKind::Fan => ClassKey::Rays(sorted_rays(&s.g.columns())),
            GraphKind::ModC => ClassKey::Modified(modified_key(&s.c, d)),
            GraphKind::ModG => ClassKey::Modified(modified_key(&s.g, d)),
        })
        .collect();
    Ok(quotient(space, kind.label().to_string(), keys))
}

/// The `≈` quotient of a C- or G-graph: classes with the same column rays merge.
pub fn ray_quotient(space: &StateSpace, g: &ExchangeGraph, use_c: bool) -> ExchangeGraph {
    let keys = space
        .states
        .iter()
        .map(|s| ClassKey::Rays(sorted_rays(&if use_c { s.c.columns() } else { s.g.columns() })))
        .collect();
    quotient(space, format!("{}/≈", g.kind), keys)
}

/// The canonical isomorphism: both graphs induce the same partition of states.
/// Returns the vertex bijection from `a` to `b`.
pub fn graphs_isomorphic(a: &ExchangeGraph, b: &ExchangeGraph) -> Option<Vec<usize>> {
    if a.class_of.len() != b.class_of.len() || a.len() != b.len() {
        return None;
    }
    let mut map = vec![usize::MAX; a.len()];
    let mut back = vec![usize::MAX; b.len()];
    for (&x, &y) in a.class_of.iter().zip(&b.class_of) {
        if map[x] == usize::MAX && back[y] == usize::MAX {
            map[x] = y;
            back[y] = x;
        } else if map[x] != y || back[y] != x {
            return None;
        }
    }
    let edges_agree = a.adjacency.iter().enumerate().all(|(v, nb)| {
        let mapped: BTreeSet<usize> = nb.iter().map(|&u| map[u]).collect();
        mapped == b.adjacency[map[v]]
    });
    edges_agree.then_some(map)
}

/// Plain periodicity `X_{t'} = σ̃X_t`, as used by the C and G graphs.
pub fn plain_match(x: &Matrix, y: &Matrix) -> Option<Permutation> {
    column_permutation(x, y)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::explore::explore_states;

    fn q(p: i64, d: i64) -> Scalar {
        Scalar::from_ratio(p, d)
    }

    fn v(xs: &[i64]) -> Vec<Scalar> {
        xs.iter().map(|&x| Scalar::from_int(x)).collect()
    }

    fn cone(gens: Vec<Vec<Scalar>>) -> GCone {
        // Normals from the dual basis, D = I.
        let g = Matrix::from_columns(&gens);
        let inv = g.inverse().unwrap().transpose();
        let n = gens.len();
        GCone { word: vec![], generators: gens, normals: inv.columns(), weight: vec![Scalar::one(); n] }
    }

    fn split_fan_matrix() -> Matrix {
        Matrix::from_rows(vec![vec![q(0, 1), q(-1, 2)], vec![q(2, 1), q(0, 1)]])
    }

    #[test]
    fn overlapping_cones_fail() {
        let a = cone(vec![v(&[1, 0]), v(&[0, 1])]);
        let b = cone(vec![v(&[1, 1]), v(&[-1, 1])]);
        assert!(matches!(fan_verify(&[a.clone(), b]), FanVerdict::Fail { .. }));
        let c = cone(vec![v(&[0, 1]), v(&[-1, 0])]);
        assert_eq!(fan_verify(&[a, c]), FanVerdict::Pass);
    }

    #[test]
    fn membership_agrees() {
        let b0 = split_fan_matrix();
        let d = vec![q(4, 1), q(1, 1)];
        let node = Node::replay(&b0, &[1, 2, 1]);
        let c = g_cone(&node, &d).unwrap();
        for x in -3..=3 {
            for y in -3..=3 {
                let p = v(&[x, y]);
                assert_eq!(c.contains(&p), c.contains_by_generators(&p));
            }
        }
    }

    #[test]
    fn split_fan_graphs() {
        let b0 = split_fan_matrix();
        let d = vec![q(4, 1), q(1, 1)];
        let space = explore_states(&b0, 12);
        assert!(space.is_complete());
        let eg = |k| build_exchange_graph(&space, k, &d).unwrap();
        assert!(eg(GraphKind::G).is_cycle(10));
        assert!(eg(GraphKind::C).is_cycle(10));
        assert!(eg(GraphKind::Fan).is_cycle(5));
        assert!(graphs_isomorphic(&eg(GraphKind::ModC), &eg(GraphKind::Fan)).is_some());
        assert!(graphs_isomorphic(&eg(GraphKind::ModG), &eg(GraphKind::Fan)).is_some());
        assert!(graphs_isomorphic(&eg(GraphKind::C), &eg(GraphKind::G)).is_some());
        assert!(graphs_isomorphic(&eg(GraphKind::C), &eg(GraphKind::Fan)).is_none());
        let root = Node::initial(&b0);
        let boxed = Node::replay(&b0, &[1, 2, 1, 2, 1]);
        let (s, lam) = modified_equal(&root, &boxed, &d).unwrap();
        assert_eq!(s, Permutation::from_one_based(&[2, 1]));
        assert_eq!(lam, vec![q(1, 2), q(2, 1)]);
        let cone = g_cone(&boxed, &d).unwrap();
        assert_eq!(cone.rays(), g_cone(&root, &d).unwrap().rays());
        let fan = fan_of(&space, &d).unwrap();
        assert_eq!(fan.len(), 5);
        assert_eq!(fan_verify(&fan), FanVerdict::Pass);
        for c in &fan {
            assert!(orthant_confined(c) && orthant_face_property(c) && avoids_open_orthants(c));
        }
    }
}
