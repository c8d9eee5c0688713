//! Exchange matrices, mutation of B-, C- and G-matrices, tropical signs,
//! duality checks and restriction to sub-patterns.
//!
//! Directions and mutation words are 1-based throughout the public API.

use crate::matrix::Matrix;
use crate::scalar::{Scalar, ScalarError};
use serde_json::{json, Value};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum MutationError {
    #[error("matrix is not square ({0}x{1})")]
    NotSquare(usize, usize),
    #[error("rank must be at least 1")]
    Empty,
    #[error("entries ({0},{1}) and ({1},{0}) violate sign-skew-symmetry")]
    NotSignSkewSymmetric(usize, usize),
    #[error("skew-symmetrizer fails at ({0},{1})")]
    BadSymmetrizer(usize, usize),
    #[error("direction {0} is out of range")]
    BadDirection(usize),
    #[error("column {0} of C is not sign-coherent")]
    IncoherentColumn(usize),
    #[error("mutation word uses direction {0} outside the index subset")]
    WordLeavesJ(usize),
    #[error("restricted pattern disagrees with the pattern of the restricted matrix")]
    RestrictionMismatch,
    #[error(transparent)]
    Scalar(#[from] ScalarError),
}

fn check_direction(n: usize, k: usize) {
    assert!(k >= 1 && k <= n, "direction {k} out of range 1..={n}");
}

/// Mutation of an exchange matrix in direction `k` (1-based).
pub fn mutate_b(b: &Matrix, k: usize) -> Matrix {
    let n = b.n();
    check_direction(n, k);
    let k = k - 1;
    Matrix::from_fn(n, n, |i, j| {
        let bij = b.get(i, j);
        if i == k || j == k {
            return -bij;
        }
        let (bik, bkj) = (b.get(i, k), b.get(k, j));
        // b_ij + [b_ik]₊[b_kj]₊ − [−b_ik]₊[−b_kj]₊
        match (bik.sign(), bkj.sign()) {
            (1, 1) => bij + bik * bkj,
            (-1, -1) => bij - bik * bkj,
            _ => bij.clone(),
        }
    })
}

/// Joint mutation of `(B, C, G)` using the ε-expression with `eps = ±1`.
///
/// `b0` is the initial exchange matrix, which the G recursion needs.
pub fn mutate_cg(b: &Matrix, c: &Matrix, g: &Matrix, b0: &Matrix, k: usize, eps: i8) -> (Matrix, Matrix, Matrix) {
    let n = b.n();
    check_direction(n, k);
    assert!(eps == 1 || eps == -1, "eps must be ±1");
    let e = Scalar::from_int(i64::from(eps));
    let kk = k - 1;
    // C' = C J_k + C[εB]₊^{k•} + [−εC]₊^{•k} B
    let c_new = Matrix::from_fn(n, n, |i, j| {
        let cik = c.get(i, kk);
        if j == kk {
            return -cik;
        }
        let mut v = c.get(i, j).clone();
        let ebkj = (&e * b.get(kk, j)).pos();
        if !ebkj.is_zero() {
            v += &(cik * &ebkj);
        }
        let ecik = (-(&e * cik)).pos();
        if !ecik.is_zero() {
            v += &(&ecik * b.get(kk, j));
        }
        v
    });
    // G' = G J_k + G[−εB]₊^{•k} − B₀[−εC]₊^{•k}
    let g_new = Matrix::from_fn(n, n, |i, j| {
        if j != kk {
            return g.get(i, j).clone();
        }
        let mut v = -g.get(i, kk);
        for l in 0..n {
            let x = (-(&e * b.get(l, kk))).pos();
            if !x.is_zero() {
                v += &(g.get(i, l) * &x);
            }
            let y = (-(&e * c.get(l, kk))).pos();
            if !y.is_zero() {
                v -= &(b0.get(i, l) * &y);
            }
        }
        v
    });
    (mutate_b(b, k), c_new, g_new)
}

/// Common sign of a vector: `Some(±1)` if nonzero and sign-coherent.
pub fn vector_sign(v: &[Scalar]) -> Option<i8> {
    let mut s = 0i8;
    for x in v {
        let t = x.sign();
        if t == 0 {
            continue;
        }
        if s == 0 {
            s = t;
        } else if s != t {
            return None;
        }
    }
    (s != 0).then_some(s)
}

/// Tropical signs: `epsilon[j]` for column `j` of C, `tau[i]` for row `i` of G.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TropicalSigns {
    pub epsilon: Vec<Option<i8>>,
    pub tau: Vec<Option<i8>>,
}

impl TropicalSigns {
    pub fn of(c: &Matrix, g: &Matrix) -> Self {
        TropicalSigns {
            epsilon: (0..c.cols()).map(|j| vector_sign(&c.column(j))).collect(),
            tau: (0..g.rows()).map(|i| vector_sign(&g.row(i))).collect(),
        }
    }
}

/// True when every column is nonzero with entries of one sign.
pub fn is_column_sign_coherent(c: &Matrix) -> bool {
    (0..c.cols()).all(|j| vector_sign(&c.column(j)).is_some())
}

/// True when every row is nonzero with entries of one sign.
pub fn is_row_sign_coherent(g: &Matrix) -> bool {
    (0..g.rows()).all(|i| vector_sign(&g.row(i)).is_some())
}

/// `C(J_k + [ε_k B]₊^{k•})`, valid when column `k` of `C` has tropical sign `ε_k`.
pub fn mutate_c_coherent(c: &Matrix, b: &Matrix, k: usize) -> Result<Matrix, MutationError> {
    let n = b.n();
    check_direction(n, k);
    let kk = k - 1;
    let eps = vector_sign(&c.column(kk)).ok_or(MutationError::IncoherentColumn(k))?;
    let e = Scalar::from_int(i64::from(eps));
    Ok(Matrix::from_fn(n, n, |i, j| {
        let cik = c.get(i, kk);
        if j == kk {
            -cik
        } else {
            c.get(i, j) + cik * (&e * b.get(kk, j)).pos()
        }
    }))
}

/// `G(J_k + [−ε_k B]₊^{•k})` with `ε_k` the tropical sign of column `k` of `C`.
pub fn mutate_g_coherent(g: &Matrix, c: &Matrix, b: &Matrix, k: usize) -> Result<Matrix, MutationError> {
    let n = b.n();
    check_direction(n, k);
    let kk = k - 1;
    let eps = vector_sign(&c.column(kk)).ok_or(MutationError::IncoherentColumn(k))?;
    let e = Scalar::from_int(i64::from(eps));
    Ok(Matrix::from_fn(n, n, |i, j| {
        if j != kk {
            return g.get(i, j).clone();
        }
        let mut v = -g.get(i, kk);
        for l in 0..n {
            v += &(g.get(i, l) * (-(&e * b.get(l, kk))).pos());
        }
        v
    }))
}

/// A square matrix checked for sign-skew-symmetry, with an optional skew-symmetrizer.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExchangeMatrix {
    matrix: Matrix,
    symmetrizer: Option<Vec<Scalar>>,
}

impl ExchangeMatrix {
    /// Validates shape, field and sign-skew-symmetry, and looks for a skew-symmetrizer.
    pub fn new(matrix: Matrix) -> Result<Self, MutationError> {
        if !matrix.is_square() {
            return Err(MutationError::NotSquare(matrix.rows(), matrix.cols()));
        }
        if matrix.rows() == 0 {
            return Err(MutationError::Empty);
        }
        matrix.field()?;
        let n = matrix.n();
        for i in 0..n {
            for j in i..n {
                if matrix.get(i, j).sign() != -matrix.get(j, i).sign() {
                    return Err(MutationError::NotSignSkewSymmetric(i + 1, j + 1));
                }
            }
        }
        let symmetrizer = crate::skewsym::find_skew_symmetrizer(&matrix).ok();
        Ok(ExchangeMatrix { matrix, symmetrizer })
    }

    /// Like [`ExchangeMatrix::new`] but with a caller-supplied symmetrizer, which is verified.
    pub fn with_symmetrizer(matrix: Matrix, d: Vec<Scalar>) -> Result<Self, MutationError> {
        let mut em = ExchangeMatrix::new(matrix)?;
        check_symmetrizer(&em.matrix, &d)?;
        em.symmetrizer = Some(d);
        Ok(em)
    }

    pub fn matrix(&self) -> &Matrix {
        &self.matrix
    }

    pub fn symmetrizer(&self) -> Option<&[Scalar]> {
        self.symmetrizer.as_deref()
    }

    pub fn n(&self) -> usize {
        self.matrix.n()
    }

    /// Mutation keeps the same skew-symmetrizer.
    pub fn mutate(&self, k: usize) -> ExchangeMatrix {
        ExchangeMatrix { matrix: mutate_b(&self.matrix, k), symmetrizer: self.symmetrizer.clone() }
    }
}

/// Checks `d_i b_ij = −d_j b_ji` and `d_i > 0` exactly.
pub fn check_symmetrizer(b: &Matrix, d: &[Scalar]) -> Result<(), MutationError> {
    let n = b.n();
    if d.len() != n {
        return Err(MutationError::BadSymmetrizer(0, 0));
    }
    for i in 0..n {
        if !d[i].is_positive() {
            return Err(MutationError::BadSymmetrizer(i + 1, i + 1));
        }
        for j in 0..n {
            let lhs = d[i].try_mul(b.get(i, j))?;
            let rhs = -(d[j].try_mul(b.get(j, i))?);
            if lhs != rhs {
                return Err(MutationError::BadSymmetrizer(i + 1, j + 1));
            }
        }
    }
    Ok(())
}

/// One vertex of the explored tree: the word from the root and `(B_t, C_t, G_t)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Node {
    pub word: Vec<usize>,
    pub b: Matrix,
    pub c: Matrix,
    pub g: Matrix,
}

impl Node {
    pub fn initial(b0: &Matrix) -> Node {
        let n = b0.n();
        Node { word: Vec::new(), b: b0.clone(), c: Matrix::identity(n), g: Matrix::identity(n) }
    }

    /// Child in direction `k`, via the ε = +1 expression.
    ///
    /// In debug builds the ε = −1 expression is evaluated too and must agree.
    pub fn mutate(&self, b0: &Matrix, k: usize) -> Node {
        let (b, c, g) = mutate_cg(&self.b, &self.c, &self.g, b0, k, 1);
        #[cfg(debug_assertions)]
        {
            let (_, c2, g2) = mutate_cg(&self.b, &self.c, &self.g, b0, k, -1);
            assert!(c == c2 && g == g2, "eps-independence violated at {:?} + {k}", self.word);
        }
        let mut word = self.word.clone();
        word.push(k);
        Node { word, b, c, g }
    }

    pub fn replay(b0: &Matrix, word: &[usize]) -> Node {
        word.iter().fold(Node::initial(b0), |node, &k| node.mutate(b0, k))
    }

    pub fn depth(&self) -> usize {
        self.word.len()
    }

    pub fn n(&self) -> usize {
        self.b.n()
    }

    pub fn signs(&self) -> TropicalSigns {
        TropicalSigns::of(&self.c, &self.g)
    }

    pub fn is_sign_coherent(&self) -> bool {
        is_column_sign_coherent(&self.c)
    }

    pub fn to_json(&self, d: Option<&[Scalar]>) -> Value {
        let mut v = json!({
            "word": self.word,
            "B": self.b.to_json(),
            "C": self.c.to_json(),
            "G": self.g.to_json(),
        });
        if let Some(d) = d {
            v["D"] = Value::Array(d.iter().map(Scalar::to_json).collect());
        }
        v
    }

    pub fn from_json(v: &Value) -> Result<(Node, Option<Vec<Scalar>>), ScalarError> {
        let bad = |m: &str| ScalarError::Parse(m.to_string());
        let word = v
            .get("word")
            .and_then(Value::as_array)
            .ok_or_else(|| bad("node needs a word"))?
            .iter()
            .map(|k| k.as_u64().map(|k| k as usize).ok_or_else(|| bad("word entries are positive integers")))
            .collect::<Result<Vec<_>, _>>()?;
        let get = |key: &str| v.get(key).ok_or_else(|| bad(&format!("node needs {key}"))).and_then(Matrix::from_json);
        let node = Node { word, b: get("B")?, c: get("C")?, g: get("G")? };
        let d = match v.get("D") {
            Some(Value::Array(a)) => Some(a.iter().map(Scalar::from_json).collect::<Result<Vec<_>, _>>()?),
            _ => None,
        };
        Ok((node, d))
    }
}

/// Outcome of one exact identity check.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Check {
    Pass,
    /// First offending entry, 1-based.
    Fail { row: usize, col: usize },
    /// The identity needs sign-coherence, which the node lacks.
    NotApplicable,
}

impl Check {
    fn compare(lhs: &Matrix, rhs: &Matrix) -> Check {
        match lhs.first_difference(rhs) {
            None => Check::Pass,
            Some((i, j)) => Check::Fail { row: i + 1, col: j + 1 },
        }
    }

    pub fn failed(&self) -> bool {
        matches!(self, Check::Fail { .. })
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DualityReport {
    /// `G_t B_t = B₀ C_t`
    pub first: Check,
    /// `D⁻¹ G_tᵀ D C_t = I`
    pub second: Check,
    /// `D B_t = C_tᵀ D B₀ C_t`
    pub b_from_c: Check,
}

impl DualityReport {
    pub fn passed(&self) -> bool {
        !(self.first.failed() || self.second.failed() || self.b_from_c.failed())
    }
}

/// Checks the three duality identities at `node` exactly.
pub fn check_dualities(node: &Node, b0: &Matrix, d: &[Scalar]) -> DualityReport {
    let first = Check::compare(&node.g.mul(&node.b), &b0.mul(&node.c));
    if !node.is_sign_coherent() {
        return DualityReport { first, second: Check::NotApplicable, b_from_c: Check::NotApplicable };
    }
    let dm = Matrix::diagonal(d);
    let dinv = Matrix::diagonal(&d.iter().map(|x| Scalar::one() / x).collect::<Vec<_>>());
    let second = Check::compare(&dinv.mul(&node.g.transpose()).mul(&dm).mul(&node.c), &Matrix::identity(node.n()));
    let b_from_c = Check::compare(&dm.mul(&node.b), &node.c.transpose().mul(&dm).mul(b0).mul(&node.c));
    DualityReport { first, second, b_from_c }
}

/// `⟨g_i, c_j⟩_D = d_i δ_ij`, i.e. `Gᵀ D C = D`.
pub fn check_orthogonality(node: &Node, d: &[Scalar]) -> Check {
    let dm = Matrix::diagonal(d);
    Check::compare(&node.g.transpose().mul(&dm).mul(&node.c), &dm)
}

/// Restricts `node` to the 1-based index subset `subset`.
///
/// The word must only use directions in `subset`; the result is the node of
/// the restricted pattern, and it is checked against the submatrices.
pub fn restrict(node: &Node, b0: &Matrix, subset: &[usize]) -> Result<Node, MutationError> {
    let n = b0.n();
    let mut idx: Vec<usize> = subset.to_vec();
    idx.sort_unstable();
    idx.dedup();
    if idx.is_empty() {
        return Err(MutationError::Empty);
    }
    if let Some(&bad) = idx.iter().find(|&&i| i == 0 || i > n) {
        return Err(MutationError::BadDirection(bad));
    }
    let pos = |k: usize| idx.iter().position(|&i| i == k);
    let word = node
        .word
        .iter()
        .map(|&k| pos(k).map(|p| p + 1).ok_or(MutationError::WordLeavesJ(k)))
        .collect::<Result<Vec<_>, _>>()?;
    let zero_based: Vec<usize> = idx.iter().map(|i| i - 1).collect();
    let sub0 = b0.submatrix(&zero_based);
    let small = Node::replay(&sub0, &word);
    let agrees = small.b == node.b.submatrix(&zero_based)
        && small.c == node.c.submatrix(&zero_based)
        && small.g == node.g.submatrix(&zero_based);
    if !agrees {
        return Err(MutationError::RestrictionMismatch);
    }
    Ok(small)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(p: i64, d: i64) -> Scalar {
        Scalar::from_ratio(p, d)
    }

    fn m(rows: &[&[(i64, i64)]]) -> Matrix {
        Matrix::from_rows(rows.iter().map(|r| r.iter().map(|&(p, d)| q(p, d)).collect()).collect())
    }

    // Oracle: (J_k + [−B]₊^{•k}) B (J_k + [B]₊^{k•}).
    fn mutate_b_product(b: &Matrix, k: usize) -> Matrix {
        let n = b.n();
        let kk = k - 1;
        let mut left = Matrix::identity(n);
        let mut right = Matrix::identity(n);
        left.set(kk, kk, q(-1, 1));
        right.set(kk, kk, q(-1, 1));
        for i in 0..n {
            if i != kk {
                left.set(i, kk, (-b.get(i, kk)).pos());
                right.set(kk, i, b.get(kk, i).pos());
            }
        }
        left.mul(b).mul(&right)
    }

    #[test]
    fn rank2_sign_flip() {
        let b = m(&[&[(0, 1), (-1, 2)], &[(2, 1), (0, 1)]]);
        assert_eq!(mutate_b(&b, 1), m(&[&[(0, 1), (1, 2)], &[(-2, 1), (0, 1)]]));
    }

    #[test]
    fn h3_word_21() {
        let p = crate::scalar::chebyshev_value(5);
        let z = Scalar::zero;
        let one = Scalar::one;
        let b0 = Matrix::from_rows(vec![
            vec![z(), -&p, z()],
            vec![p.clone(), z(), -one()],
            vec![z(), one(), z()],
        ]);
        let b = mutate_b(&mutate_b(&b0, 2), 1);
        let expect = Matrix::from_rows(vec![
            vec![z(), -&p, p.clone()],
            vec![p.clone(), z(), -&p],
            vec![-&p, p.clone(), z()],
        ]);
        assert_eq!(b, expect);
        for k in 1..=3 {
            assert_eq!(mutate_b(&b0, k), mutate_b_product(&b0, k));
            assert_eq!(mutate_b(&mutate_b(&b0, k), k), b0);
        }
    }

    #[test]
    fn incoherent_example() {
        let b0 = m(&[&[(0, 1), (1, 2)], &[(-1, 2), (0, 1)]]);
        let n1 = Node::replay(&b0, &[1]);
        assert_eq!(n1.c, m(&[&[(-1, 1), (1, 2)], &[(0, 1), (1, 1)]]));
        let n12 = Node::replay(&b0, &[1, 2]);
        assert_eq!(n12.c, m(&[&[(-3, 4), (-1, 2)], &[(1, 2), (-1, 1)]]));
        assert!(!n12.is_sign_coherent());
        assert_eq!(Node::replay(&b0, &[]).c, Matrix::identity(2));
    }

    #[test]
    fn coherent_recursion_boxed_and_cycle() {
        let b0 = m(&[&[(0, 1), (-1, 2)], &[(2, 1), (0, 1)]]);
        let mut node = Node::initial(&b0);
        for step in 0..10 {
            let k = if step % 2 == 0 { 1 } else { 2 };
            let c = mutate_c_coherent(&node.c, &node.b, k).unwrap();
            let g = mutate_g_coherent(&node.g, &node.c, &node.b, k).unwrap();
            node = node.mutate(&b0, k);
            assert_eq!(c, node.c);
            assert_eq!(g, node.g);
            if step == 4 {
                assert_eq!(node.c, m(&[&[(0, 1), (1, 2)], &[(2, 1), (0, 1)]]));
            }
        }
        assert_eq!(node.c, Matrix::identity(2));
    }

    #[test]
    fn h3_last_c_matrix() {
        let p = crate::scalar::chebyshev_value(5);
        let z = Scalar::zero;
        let b0 = Matrix::from_rows(vec![
            vec![z(), -&p, p.clone()],
            vec![p.clone(), z(), -&p],
            vec![-&p, p.clone(), z()],
        ]);
        let node = Node::replay(&b0, &[1, 2, 1, 3, 2, 1]);
        assert_eq!(node.c, Matrix::from_ints(&[&[-1, 0, 0], &[0, 0, -1], &[0, -1, 0]]));
    }

    #[test]
    fn dualities_and_corruption() {
        let b0 = m(&[&[(0, 1), (-1, 2)], &[(2, 1), (0, 1)]]);
        let d = vec![q(4, 1), q(1, 1)];
        let node = Node::replay(&b0, &[1, 2, 1]);
        assert!(check_dualities(&node, &b0, &d).passed());
        assert_eq!(check_orthogonality(&node, &d), Check::Pass);
        let root = Node::initial(&b0);
        assert_eq!(check_dualities(&root, &b0, &d).first, Check::Pass);
        let mut bad = node.clone();
        bad.c.set(1, 0, &bad.c.get(1, 0).clone() + &q(1, 1));
        let rep = check_dualities(&bad, &b0, &d);
        assert!(matches!(rep.first, Check::Fail { .. }));
    }

    #[test]
    fn restriction() {
        let p = crate::scalar::chebyshev_value(5);
        let z = Scalar::zero;
        let b0 = Matrix::from_rows(vec![
            vec![z(), -&p, z()],
            vec![p.clone(), z(), -Scalar::one()],
            vec![z(), Scalar::one(), z()],
        ]);
        let node = Node::replay(&b0, &[1, 2, 1]);
        let r = restrict(&node, &b0, &[1, 2]).unwrap();
        assert_eq!(r.c, Node::replay(&b0.submatrix(&[0, 1]), &[1, 2, 1]).c);
        assert_eq!(restrict(&node, &b0, &[1, 2, 3]).unwrap(), node);
        let n3 = Node::replay(&b0, &[3]);
        assert_eq!(restrict(&n3, &b0, &[1, 2]), Err(MutationError::WordLeavesJ(3)));
    }

    #[test]
    fn exchange_matrix_validation() {
        let bad = m(&[&[(0, 1), (1, 1)], &[(1, 1), (0, 1)]]);
        assert!(matches!(ExchangeMatrix::new(bad), Err(MutationError::NotSignSkewSymmetric(1, 2))));
        let b = m(&[&[(0, 1), (-1, 2)], &[(2, 1), (0, 1)]]);
        let em = ExchangeMatrix::new(b).unwrap();
        assert_eq!(em.symmetrizer().unwrap(), &[q(4, 1), q(1, 1)]);
        assert_eq!(em.mutate(1).mutate(1), em);
    }
}
