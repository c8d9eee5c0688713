//! Quasi-integer quivers: classification and the integer certificate.
//!
//! A quiver is of quasi-integer type when it is `Sk(B)` for some integer
//! skew-symmetrizable `B`. That happens exactly when every weight squares to
//! an integer and every chordless cycle has an integer weight product. The
//! certificate is built vertex by vertex, splitting each square-free part
//! `a_ij` into a coprime pair `ã_ij·ã_ji` compatible with a growing symmetrizer.

use crate::matrix::Matrix;
use crate::scalar::{is_square_free, square_free_split, Scalar, ScalarError, SquareFreePair};
use crate::skewsym::{self, Quiver, SkewError};
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde_json::{json, Value};
use std::collections::VecDeque;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum QuasiError {
    #[error("quiver is not of quasi-integer type: {0}")]
    NotQuasiInteger(String),
    #[error(transparent)]
    Skew(#[from] SkewError),
    #[error(transparent)]
    Scalar(#[from] ScalarError),
}

/// `q_ij = m_ij·√a_ij` entrywise.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QuasiDecomposition {
    /// Integer skew-symmetric part.
    pub m: Vec<Vec<BigInt>>,
    /// Symmetric square-free parts, zero off the support.
    pub a: Vec<Vec<u64>>,
}

/// Why a quiver fails to be of quasi-integer type (1-based labels).
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum NonQuasiWitness {
    Weight { i: usize, j: usize, weight: String, square: String },
    Cycle { cycle: Vec<usize>, product: String },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum QuasiVerdict {
    QuasiInteger(QuasiDecomposition),
    Not(NonQuasiWitness),
}

impl QuasiVerdict {
    pub fn is_quasi_integer(&self) -> bool {
        matches!(self, QuasiVerdict::QuasiInteger(_))
    }
}

fn decompose(q: &Quiver) -> Result<QuasiDecomposition, NonQuasiWitness> {
    let n = q.n();
    let mut m = vec![vec![BigInt::zero(); n]; n];
    let mut a = vec![vec![0u64; n]; n];
    for i in 0..n {
        for j in 0..n {
            let w = q.weight(i, j);
            match w.square_free_decompose() {
                Ok(SquareFreePair { m: mm, a: aa }) => {
                    m[i][j] = mm;
                    a[i][j] = aa;
                }
                Err(_) => {
                    return Err(NonQuasiWitness::Weight {
                        i: i + 1,
                        j: j + 1,
                        weight: w.to_string(),
                        square: (w * w).to_string(),
                    })
                }
            }
        }
    }
    Ok(QuasiDecomposition { m, a })
}

/// Decides quasi-integer type of `Sk(b)`; skew-symmetric input is used as is.
pub fn classify_quasi_integer(b: &Matrix) -> Result<QuasiVerdict, QuasiError> {
    let quiver = match Quiver::new(b.clone()) {
        Ok(q) => q,
        Err(_) => skewsym::sk_quiver(b)?,
    };
    Ok(classify_quiver(&quiver))
}

pub fn classify_quiver(q: &Quiver) -> QuasiVerdict {
    let dec = match decompose(q) {
        Ok(d) => d,
        Err(w) => return QuasiVerdict::Not(w),
    };
    for cycle in q.chordless_cycles() {
        let mut coeff = BigInt::one();
        let mut radicand = BigInt::one();
        for (t, &u) in cycle.iter().enumerate() {
            let v = cycle[(t + 1) % cycle.len()];
            coeff *= dec.m[u - 1][v - 1].abs();
            radicand *= BigInt::from(dec.a[u - 1][v - 1]);
        }
        let (free, root) = match radicand.to_u64() {
            Some(r) => square_free_split(r),
            None => (0, 0),
        };
        if free != 1 {
            let product = if free == 0 {
                format!("{coeff}*sqrt({radicand})")
            } else {
                format!("{}*sqrt({free})", coeff * BigInt::from(root))
            };
            return QuasiVerdict::Not(NonQuasiWitness::Cycle { cycle, product });
        }
    }
    QuasiVerdict::QuasiInteger(dec)
}

/// Integer skew-symmetrizable matrix realizing a quasi-integer quiver.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IntegerCertificate {
    /// Integer exchange matrix in the quiver's own labeling.
    pub b: Matrix,
    /// Positive integer skew-symmetrizer of `b`.
    pub d: Vec<BigInt>,
    /// Symmetrizable matrix with `ã_ij·ã_ji = a_ij`.
    pub atilde: Vec<Vec<BigInt>>,
    /// Processing order as 1-based vertex labels.
    pub perm: Vec<usize>,
    /// `D` symmetrizes `b` and `Sk(b)` equals the input quiver.
    pub verified: bool,
}

impl IntegerCertificate {
    pub fn to_json(&self) -> Value {
        let ints = |v: &[BigInt]| v.iter().map(|x| json!(x.to_i64().map_or_else(|| json!(x.to_string()), |y| json!(y)))).collect::<Vec<_>>();
        let rows: Vec<Value> = (0..self.b.rows())
            .map(|i| Value::Array(ints(&self.b.row(i).iter().map(|x| x.as_integer().expect("integer entry")).collect::<Vec<_>>())))
            .collect();
        json!({
            "B": rows,
            "D": ints(&self.d),
            "perm": self.perm,
            "verified": self.verified,
        })
    }
}

/// BFS order from the smallest vertex of each component, neighbours ascending.
fn bfs_order(adj: &[Vec<bool>]) -> Vec<Vec<usize>> {
    let n = adj.len();
    let mut seen = vec![false; n];
    let mut comps = Vec::new();
    for root in 0..n {
        if seen[root] {
            continue;
        }
        seen[root] = true;
        let mut order = vec![root];
        let mut queue = VecDeque::from([root]);
        while let Some(v) = queue.pop_front() {
            for w in 0..n {
                if adj[v][w] && !seen[w] {
                    seen[w] = true;
                    order.push(w);
                    queue.push_back(w);
                }
            }
        }
        comps.push(order);
    }
    comps
}

/// Builds the integer certificate for a quasi-integer quiver.
pub fn construct_integer_matrix(q: &Quiver) -> Result<IntegerCertificate, QuasiError> {
    let dec = match classify_quiver(q) {
        QuasiVerdict::QuasiInteger(d) => d,
        QuasiVerdict::Not(w) => return Err(QuasiError::NotQuasiInteger(format!("{w:?}"))),
    };
    let n = q.n();
    let a = |i: usize, j: usize| BigInt::from(dec.a[i][j]);
    let mut at = vec![vec![BigInt::zero(); n]; n];
    let mut d = vec![BigInt::one(); n];
    let comps = bfs_order(&q.graph());
    for comp in &comps {
        if comp.len() < 2 {
            continue;
        }
        // Seed: (α, β) = (a_12, 1), with ã_12 = β and ã_21 = α.
        let (p1, p2) = (comp[0], comp[1]);
        at[p1][p2] = BigInt::one();
        at[p2][p1] = a(p1, p2);
        d[p1] = a(p1, p2);
        d[p2] = BigInt::one();
        for s in 2..comp.len() {
            let new = comp[s];
            let mut d_new: Option<BigInt> = None;
            for &i in &comp[..s] {
                let aij = a(i, new);
                if aij.is_zero() {
                    continue;
                }
                let g = d[i].gcd(&aij);
                let gbar = &aij / &g;
                let cand = &d[i] * &gbar / &g;
                at[i][new] = gbar;
                at[new][i] = g;
                match &d_new {
                    None => d_new = Some(cand),
                    Some(prev) if *prev != cand => {
                        return Err(QuasiError::NotQuasiInteger(format!(
                            "symmetrizer entry for vertex {} depends on the neighbour ({prev} vs {cand})",
                            new + 1
                        )))
                    }
                    Some(_) => {}
                }
            }
            d[new] = d_new.expect("BFS order keeps every prefix connected");
        }
    }
    let b = Matrix::from_fn(n, n, |i, j| Scalar::from_rational((&dec.m[i][j] * &at[i][j]).into()));
    let perm = comps.iter().flatten().map(|v| v + 1).collect();
    let verified = verify_certificate(&b, &d, q);
    Ok(IntegerCertificate { b, d, atilde: at, perm, verified })
}

/// `D` is a skew-symmetrizer of `b` and `Sk(b)` equals `q` entrywise.
pub fn verify_certificate(b: &Matrix, d: &[BigInt], q: &Quiver) -> bool {
    let ds: Vec<Scalar> = d.iter().map(|x| Scalar::from_rational(x.clone().into())).collect();
    if crate::mutation::check_symmetrizer(b, &ds).is_err() {
        return false;
    }
    matches!(skewsym::sk_quiver(b), Ok(s) if s == *q)
}

/// Identities relating square-free `u`, `x` and `y = xu / gcd(x,u)²`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct InversionReport {
    pub y: u64,
    /// `x = yu / gcd(y,u)²`
    pub recovers_x: bool,
    /// `u = gcd(x,u)·gcd(y,u)`
    pub factors_u: bool,
    /// `y` is square-free
    pub y_square_free: bool,
}

impl InversionReport {
    pub fn passed(&self) -> bool {
        self.recovers_x && self.factors_u && self.y_square_free
    }
}

pub fn square_free_inversion_check(u: u64, x: u64) -> InversionReport {
    let gxu = x.gcd(&u);
    let y = x / gxu * (u / gxu);
    let gyu = y.gcd(&u);
    InversionReport {
        y,
        recovers_x: y / gyu * (u / gyu) == x,
        factors_u: gxu * gyu == u,
        y_square_free: is_square_free(y),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn s(c: i64, d: u64) -> Scalar {
        Scalar::from_int(c) * Scalar::sqrt_int(d)
    }

    pub(crate) fn five_vertex_quiver() -> Quiver {
        let z = Scalar::zero;
        Quiver::new(Matrix::from_rows(vec![
            vec![z(), s(2, 3), s(-2, 6), z(), s(-2, 15)],
            vec![s(-2, 3), z(), s(-4, 2), s(3, 5), s(-2, 5)],
            vec![s(2, 6), s(4, 2), z(), z(), z()],
            vec![z(), s(-3, 5), z(), z(), Scalar::from_int(-4)],
            vec![s(2, 15), s(2, 5), z(), Scalar::from_int(4), z()],
        ]))
        .unwrap()
    }

    #[test]
    fn five_vertex_certificate() {
        let q = five_vertex_quiver();
        assert!(classify_quiver(&q).is_quasi_integer());
        let cert = construct_integer_matrix(&q).unwrap();
        let d: Vec<i64> = cert.d.iter().map(|x| x.to_i64().unwrap()).collect();
        assert_eq!(d, vec![3, 1, 2, 5, 5]);
        let expect = Matrix::from_ints(&[
            &[0, 2, -4, 0, -10],
            &[-6, 0, -8, 15, -10],
            &[6, 4, 0, 0, 0],
            &[0, -3, 0, 0, -4],
            &[6, 2, 0, 4, 0],
        ]);
        assert_eq!(cert.b, expect);
        assert!(cert.verified);
        let at3: Vec<Vec<i64>> = (0..3).map(|i| (0..3).map(|j| cert.atilde[i][j].to_i64().unwrap()).collect()).collect();
        assert_eq!(at3, vec![vec![0, 1, 2], vec![3, 0, 2], vec![3, 1, 0]]);
    }

    #[test]
    fn non_quasi_examples() {
        let b = Matrix::from_rows(vec![
            vec![Scalar::zero(), Scalar::from_ratio(1, 2)],
            vec![Scalar::from_ratio(-1, 2), Scalar::zero()],
        ]);
        match classify_quasi_integer(&b).unwrap() {
            QuasiVerdict::Not(NonQuasiWitness::Weight { square, .. }) => assert_eq!(square, "1/4"),
            other => panic!("{other:?}"),
        }
        let r = Scalar::sqrt_int(2);
        let z = Scalar::zero;
        let tri = Matrix::from_rows(vec![
            vec![z(), r.clone(), -&r],
            vec![-&r, z(), r.clone()],
            vec![r.clone(), -&r, z()],
        ]);
        match classify_quasi_integer(&tri).unwrap() {
            QuasiVerdict::Not(NonQuasiWitness::Cycle { product, .. }) => assert_eq!(product, "2*sqrt(2)"),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn rank2_and_integer_quivers() {
        let r = Scalar::sqrt_int(2);
        let q = Quiver::new(Matrix::from_rows(vec![vec![Scalar::zero(), -&r], vec![r.clone(), Scalar::zero()]])).unwrap();
        let cert = construct_integer_matrix(&q).unwrap();
        assert_eq!(cert.b, Matrix::from_ints(&[&[0, -1], &[2, 0]]));
        assert!(cert.verified);
        let int_q = Quiver::new(Matrix::from_ints(&[&[0, 1, 0], &[-1, 0, -2], &[0, 2, 0]])).unwrap();
        let cert = construct_integer_matrix(&int_q).unwrap();
        assert_eq!(&cert.b, int_q.weights());
        assert!(cert.d.iter().all(|x| x.is_one()));
    }

    #[test]
    fn inversion_identities() {
        let r = square_free_inversion_check(6, 3);
        assert_eq!(r.y, 2);
        assert!(r.passed());
        assert_eq!(square_free_inversion_check(1, 15).y, 15);
        let sf: Vec<u64> = (1..=200).filter(|&v| is_square_free(v)).collect();
        for &u in &sf {
            for &x in &sf {
                assert!(square_free_inversion_check(u, x).passed(), "u={u} x={x}");
            }
        }
    }

    #[test]
    fn random_conjugated_integer_matrices() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(11);
        for _ in 0..100 {
            let n = rng.gen_range(2..=6);
            let dvals: Vec<i64> = (0..n).map(|_| rng.gen_range(1..=6)).collect();
            let mut b = Matrix::zeros(n, n);
            for i in 0..n {
                for j in i + 1..n {
                    if rng.gen_bool(0.5) {
                        continue;
                    }
                    let t = rng.gen_range(1..=2) * if rng.gen_bool(0.5) { 1 } else { -1 };
                    // d_i b_ij = t d_i d_j = −d_j b_ji
                    b.set(i, j, Scalar::from_int(t * dvals[j]));
                    b.set(j, i, Scalar::from_int(-t * dvals[i]));
                }
            }
            let q = skewsym::sk_quiver(&b).unwrap();
            assert!(classify_quiver(&q).is_quasi_integer());
            let cert = construct_integer_matrix(&q).unwrap();
            assert!(cert.verified);
            for x in &cert.d {
                assert!(is_square_free(x.to_u64().unwrap()));
            }
            for i in 0..n {
                for j in 0..n {
                    let (x, y) = (&cert.atilde[i][j], &cert.atilde[j][i]);
                    if !x.is_zero() {
                        assert!(x.gcd(y).is_one());
                    }
                }
            }
        }
    }
}
