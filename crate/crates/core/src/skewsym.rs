//! Skew-symmetrizers, the Sk map, positive conjugation and quivers.
//!
//! Vertex labels reported to callers (cycles, witnesses) are 1-based.

use crate::matrix::Matrix;
use crate::scalar::{Scalar, ScalarError};
use num_integer::Integer;
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde_json::{json, Value};
use std::collections::VecDeque;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SkewError {
    #[error("matrix is not square")]
    NotSquare,
    #[error("entries ({0},{1}) and ({1},{0}) violate sign-skew-symmetry")]
    NotSignSkewSymmetric(usize, usize),
    #[error("no skew-symmetrizer: cycle {0:?} has unbalanced products")]
    CycleInconsistent(Vec<usize>),
    #[error("quiver weights must satisfy q_ij = -q_ji with a zero diagonal; fails at ({0},{1})")]
    NotSkewSymmetric(usize, usize),
    #[error(transparent)]
    Scalar(#[from] ScalarError),
}

fn check_sign_skew(b: &Matrix) -> Result<usize, SkewError> {
    if !b.is_square() {
        return Err(SkewError::NotSquare);
    }
    let n = b.n();
    for i in 0..n {
        for j in i..n {
            if b.get(i, j).sign() != -b.get(j, i).sign() {
                return Err(SkewError::NotSignSkewSymmetric(i + 1, j + 1));
            }
        }
    }
    Ok(n)
}

/// Connected components of the graph with an edge wherever `b_ij ≠ 0`, each
/// listed in BFS order from its smallest vertex, with BFS parents.
fn components(b: &Matrix) -> (Vec<Vec<usize>>, Vec<Option<usize>>) {
    let n = b.n();
    let mut parent = vec![None; n];
    let mut seen = vec![false; n];
    let mut comps = Vec::new();
    for root in 0..n {
        if seen[root] {
            continue;
        }
        seen[root] = true;
        let mut order = vec![root];
        let mut queue = VecDeque::from([root]);
        while let Some(i) = queue.pop_front() {
            for j in 0..n {
                if !seen[j] && !b.get(i, j).is_zero() {
                    seen[j] = true;
                    parent[j] = Some(i);
                    order.push(j);
                    queue.push_back(j);
                }
            }
        }
        comps.push(order);
    }
    (comps, parent)
}

fn path_to_root(mut v: usize, parent: &[Option<usize>]) -> Vec<usize> {
    let mut path = vec![v];
    while let Some(p) = parent[v] {
        path.push(p);
        v = p;
    }
    path
}

/// Cycle closed by the non-tree edge `(i, j)`, as 1-based labels.
fn witness_cycle(i: usize, j: usize, parent: &[Option<usize>]) -> Vec<usize> {
    let pi = path_to_root(i, parent);
    let pj = path_to_root(j, parent);
    let common = pi.iter().find(|v| pj.contains(v)).copied().expect("same component");
    let mut cycle: Vec<usize> = pi.iter().copied().take_while(|&v| v != common).collect();
    cycle.push(common);
    let back: Vec<usize> = pj.iter().copied().take_while(|&v| v != common).collect();
    cycle.extend(back.into_iter().rev());
    cycle.into_iter().map(|v| v + 1).collect()
}

/// A positive diagonal `D` with `DB` skew-symmetric.
///
/// Each connected component is scaled to a primitive integer vector when all
/// ratios are rational; otherwise its first vertex gets `d = 1`.
pub fn find_skew_symmetrizer(b: &Matrix) -> Result<Vec<Scalar>, SkewError> {
    let n = check_sign_skew(b)?;
    b.field()?;
    let (comps, parent) = components(b);
    let mut d = vec![Scalar::one(); n];
    for comp in &comps {
        for &j in &comp[1..] {
            let i = parent[j].expect("non-root has a parent");
            d[j] = -(&d[i] * b.get(i, j) / b.get(j, i));
        }
    }
    for i in 0..n {
        for j in i + 1..n {
            if b.get(i, j).is_zero() {
                continue;
            }
            if &d[i] * b.get(i, j) != -(&d[j] * b.get(j, i)) {
                return Err(SkewError::CycleInconsistent(witness_cycle(i, j, &parent)));
            }
        }
    }
    for comp in &comps {
        let rats: Option<Vec<BigRational>> = comp.iter().map(|&i| d[i].as_rational().cloned()).collect();
        let Some(rats) = rats else { continue };
        let mut den = BigInt::one();
        let mut num = BigInt::zero();
        for r in &rats {
            den = den.lcm(r.denom());
        }
        for r in &rats {
            num = num.gcd(&(r * BigRational::from_integer(den.clone())).to_integer());
        }
        let factor = BigRational::new(den, num);
        for (&i, r) in comp.iter().zip(rats) {
            d[i] = Scalar::from_rational(r * &factor);
        }
    }
    Ok(d)
}

/// Entries `sign(b_ij)·√|b_ij b_ji|`, which may span several quadratic fields.
fn sk_entries(b: &Matrix) -> Result<Matrix, SkewError> {
    find_skew_symmetrizer(b)?;
    let n = b.n();
    let mut out = Matrix::zeros(n, n);
    for i in 0..n {
        for j in 0..n {
            let bij = b.get(i, j);
            if bij.is_zero() {
                continue;
            }
            let root = (bij * b.get(j, i)).abs().sqrt_nonneg()?;
            out.set(i, j, if bij.is_negative() { -root } else { root });
        }
    }
    Ok(out)
}

/// `Sk(B) = D^{1/2} B D^{-1/2}` as an exchange matrix over a single field.
pub fn sk(b: &Matrix) -> Result<Matrix, SkewError> {
    let out = sk_entries(b)?;
    if let Err(ScalarError::FieldMismatch(x, y)) = out.field() {
        return Err(SkewError::Scalar(ScalarError::UnsupportedTower(format!(
            "Sk(B) mixes {x} and {y}"
        ))));
    }
    Ok(out)
}

/// The quiver of `Sk(B)`; its weights may come from different quadratic fields.
pub fn sk_quiver(b: &Matrix) -> Result<Quiver, SkewError> {
    Quiver::new(sk_entries(b)?)
}

/// `H B H⁻¹` for a positive diagonal `H = diag(h)`.
pub fn positive_conjugate(b: &Matrix, h: &[Scalar]) -> Matrix {
    let n = b.n();
    assert_eq!(h.len(), n, "diagonal length mismatch");
    assert!(h.iter().all(Scalar::is_positive), "conjugating diagonal must be positive");
    Matrix::from_fn(n, n, |i, j| &h[i] * b.get(i, j) / &h[j])
}

/// A real-weighted quiver, stored as its skew-symmetric weight matrix.
///
/// `q_ij > 0` means an arrow `i → j` of weight `q_ij`. Entries may mix
/// quadratic fields, since only their absolute values and signs matter.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Quiver {
    weights: Matrix,
}

impl Quiver {
    pub fn new(weights: Matrix) -> Result<Self, SkewError> {
        if !weights.is_square() {
            return Err(SkewError::NotSquare);
        }
        let n = weights.n();
        for i in 0..n {
            for j in i..n {
                if weights.get(i, j) != &-weights.get(j, i) {
                    return Err(SkewError::NotSkewSymmetric(i + 1, j + 1));
                }
            }
        }
        Ok(Quiver { weights })
    }

    pub fn n(&self) -> usize {
        self.weights.n()
    }

    pub fn weights(&self) -> &Matrix {
        &self.weights
    }

    pub fn weight(&self, i: usize, j: usize) -> &Scalar {
        self.weights.get(i, j)
    }

    /// Underlying undirected graph: `adj[i][j]` iff `q_ij ≠ 0`.
    pub fn graph(&self) -> Vec<Vec<bool>> {
        let n = self.n();
        (0..n).map(|i| (0..n).map(|j| !self.weights.get(i, j).is_zero()).collect()).collect()
    }

    pub fn chordless_cycles(&self) -> Vec<Vec<usize>> {
        chordless_cycles(&self.graph())
    }

    /// Arrow list JSON with 1-based endpoints.
    pub fn to_json(&self) -> Value {
        let n = self.n();
        let mut arrows = Vec::new();
        for i in 0..n {
            for j in 0..n {
                let w = self.weights.get(i, j);
                if w.is_positive() {
                    arrows.push(json!({ "from": i + 1, "to": j + 1, "weight": w.to_json() }));
                }
            }
        }
        json!({ "n": n, "arrows": arrows })
    }

    pub fn from_json(v: &Value) -> Result<Quiver, SkewError> {
        let bad = |m: String| SkewError::Scalar(ScalarError::Parse(m));
        let n = v.get("n").and_then(Value::as_u64).ok_or_else(|| bad("quiver needs n".into()))? as usize;
        let arrows = v.get("arrows").and_then(Value::as_array).ok_or_else(|| bad("quiver needs arrows".into()))?;
        let mut w = Matrix::zeros(n, n);
        for a in arrows {
            let end = |key: &str| {
                a.get(key)
                    .and_then(Value::as_u64)
                    .map(|x| x as usize)
                    .filter(|&x| x >= 1 && x <= n)
                    .ok_or_else(|| bad(format!("arrow {key} must be a vertex in 1..={n}")))
            };
            let (i, j) = (end("from")? - 1, end("to")? - 1);
            if i == j {
                return Err(bad(format!("loop at vertex {}", i + 1)));
            }
            let weight = match a.get("weight") {
                Some(x) => Scalar::from_json(x)?,
                None => Scalar::one(),
            };
            if !w.get(i, j).is_zero() {
                return Err(bad(format!("duplicate arrow between {} and {}", i + 1, j + 1)));
            }
            w.set(i, j, weight.clone());
            w.set(j, i, -weight);
        }
        Quiver::new(w)
    }
}

/// Every chordless cycle of an undirected graph, once each, as 1-based
/// vertex lists starting at their smallest vertex.
pub fn chordless_cycles(adj: &[Vec<bool>]) -> Vec<Vec<usize>> {
    let n = adj.len();
    let mut out = Vec::new();
    for v0 in 0..n {
        let mut path = vec![v0];
        extend_path(adj, &mut path, &mut out);
    }
    out
}

fn extend_path(adj: &[Vec<bool>], path: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
    let v0 = path[0];
    let last = *path.last().expect("nonempty path");
    for w in v0 + 1..adj.len() {
        if !adj[last][w] || path.contains(&w) {
            continue;
        }
        // A neighbour among the interior vertices would be a chord.
        if path.len() >= 2 && path[1..path.len() - 1].iter().any(|&u| adj[u][w]) {
            continue;
        }
        if path.len() >= 2 && adj[v0][w] {
            // Closing edge; the orientation test keeps one of the two traversals.
            if path[1] < w {
                let mut cycle: Vec<usize> = path.iter().map(|v| v + 1).collect();
                cycle.push(w + 1);
                out.push(cycle);
            }
            continue;
        }
        path.push(w);
        extend_path(adj, path, out);
        path.pop();
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(p: i64, d: i64) -> Scalar {
        Scalar::from_ratio(p, d)
    }

    #[test]
    fn symmetrizer_examples() {
        let b = Matrix::from_rows(vec![vec![q(0, 1), q(-1, 2)], vec![q(2, 1), q(0, 1)]]);
        assert_eq!(find_skew_symmetrizer(&b).unwrap(), vec![q(4, 1), q(1, 1)]);
        let s = Matrix::from_ints(&[&[0, 1, -1], &[-1, 0, 1], &[1, -1, 0]]);
        assert_eq!(find_skew_symmetrizer(&s).unwrap(), vec![q(1, 1); 3]);
        let bad = Matrix::from_ints(&[&[0, 1, -1], &[-1, 0, 1], &[2, -1, 0]]);
        match find_skew_symmetrizer(&bad) {
            Err(SkewError::CycleInconsistent(c)) => assert_eq!(c.len(), 3),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn sk_examples() {
        let b = Matrix::from_ints(&[&[0, -2], &[1, 0]]);
        let r2 = Scalar::sqrt_int(2);
        assert_eq!(sk(&b).unwrap(), Matrix::from_rows(vec![vec![q(0, 1), -&r2], vec![r2.clone(), q(0, 1)]]));
        let b = Matrix::from_rows(vec![vec![q(0, 1), q(-1, 2)], vec![q(2, 1), q(0, 1)]]);
        assert_eq!(sk(&b).unwrap(), Matrix::from_ints(&[&[0, -1], &[1, 0]]));
        let s = sk(&b).unwrap();
        assert_eq!(sk(&s).unwrap(), s);
    }

    #[test]
    fn conjugation() {
        let b = Matrix::from_ints(&[&[0, -1], &[1, 0]]);
        assert_eq!(positive_conjugate(&b, &[q(1, 1), q(1, 1)]), b);
        let c = positive_conjugate(&b, &[q(2, 1), q(1, 1)]);
        assert_eq!(c, Matrix::from_rows(vec![vec![q(0, 1), q(-2, 1)], vec![q(1, 2), q(0, 1)]]));
    }

    fn brute_force_chordless(adj: &[Vec<bool>]) -> Vec<Vec<usize>> {
        // A vertex subset spans a chordless cycle iff its induced subgraph is a cycle.
        let n = adj.len();
        let mut out = Vec::new();
        for mask in 1u32..(1 << n) {
            let vs: Vec<usize> = (0..n).filter(|&i| mask >> i & 1 == 1).collect();
            if vs.len() < 3 {
                continue;
            }
            let deg2 = vs.iter().all(|&v| vs.iter().filter(|&&u| adj[v][u]).count() == 2);
            if !deg2 {
                continue;
            }
            // Connected check by walking.
            let mut seen = vec![vs[0]];
            let mut stack = vec![vs[0]];
            while let Some(v) = stack.pop() {
                for &u in &vs {
                    if adj[v][u] && !seen.contains(&u) {
                        seen.push(u);
                        stack.push(u);
                    }
                }
            }
            if seen.len() == vs.len() {
                out.push(vs.iter().map(|v| v + 1).collect());
            }
        }
        out.sort();
        out
    }

    #[test]
    fn chordless_matches_brute_force() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        for _ in 0..300 {
            let n = rng.gen_range(3..=8);
            let mut adj = vec![vec![false; n]; n];
            let pairs: Vec<(usize, usize)> = (0..n).flat_map(|i| (i + 1..n).map(move |j| (i, j))).collect();
            for (i, j) in pairs {
                let e = rng.gen_bool(0.45);
                adj[i][j] = e;
                adj[j][i] = e;
            }
            let mut got: Vec<Vec<usize>> = chordless_cycles(&adj)
                .into_iter()
                .map(|mut c| {
                    c.sort();
                    c
                })
                .collect();
            got.sort();
            assert_eq!(got, brute_force_chordless(&adj));
        }
    }

    #[test]
    fn triangle_and_tree() {
        let t = vec![vec![false, true, true], vec![true, false, true], vec![true, true, false]];
        assert_eq!(chordless_cycles(&t), vec![vec![1, 2, 3]]);
        let path = vec![vec![false, true, false], vec![true, false, true], vec![false, true, false]];
        assert!(chordless_cycles(&path).is_empty());
    }

    #[test]
    fn quiver_json() {
        let v: Value = serde_json::from_str(r#"{"n":3,"arrows":[{"from":1,"to":2,"weight":1},{"from":3,"to":2,"weight":{"cos":5}}]}"#).unwrap();
        let quiver = Quiver::from_json(&v).unwrap();
        assert!(quiver.weight(0, 1).is_positive());
        assert!(quiver.weight(1, 2).is_negative());
        assert_eq!(Quiver::from_json(&quiver.to_json()).unwrap(), quiver);
    }
}
