//! Rank-2 theory: Chebyshev recursion, closed-form C-matrices, the
//! sign-coherence classification and rank-2 G-fans.

use crate::explore::explore_states;
use crate::geometry::{fan_of, g_cone, GCone, GeometryError};
use crate::matrix::Matrix;
use crate::mutation::{vector_sign, Node};
use crate::scalar::{chebyshev_value, Field, Scalar, ScalarError};
use serde_json::{json, Value};
use std::f64::consts::PI;
use std::fmt::Write as _;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Rank2Error {
    #[error("entries must be nonnegative")]
    NegativeEntry,
    #[error("exactly one of a, b is zero; the matrix is not skew-symmetrizable")]
    NotSkewSymmetrizable,
    #[error("closed form hypothesis fails at step {0}")]
    HypothesisFails(usize),
    #[error("the C-pattern is not sign-coherent: {0}")]
    IncoherentInput(String),
    #[error(transparent)]
    Scalar(#[from] ScalarError),
    #[error(transparent)]
    Geometry(#[from] GeometryError),
}

/// Memoized `u_n(p)` for `n ≥ −2`.
#[derive(Clone, Debug)]
pub struct ChebyshevSeq {
    p: Scalar,
    // values[k] = u_{k-2}
    values: Vec<Scalar>,
}

impl ChebyshevSeq {
    pub fn new(p: Scalar) -> Self {
        ChebyshevSeq { p, values: vec![Scalar::from_int(-1), Scalar::zero()] }
    }

    pub fn p(&self) -> &Scalar {
        &self.p
    }

    pub fn get(&mut self, n: i64) -> Scalar {
        assert!(n >= -2, "u_n is defined for n >= -2");
        let idx = (n + 2) as usize;
        while self.values.len() <= idx {
            let k = self.values.len();
            let next = &self.p * &self.values[k - 1] - &self.values[k - 2];
            self.values.push(next);
        }
        self.values[idx].clone()
    }
}

pub fn chebyshev_u(n: i64, p: &Scalar) -> Scalar {
    ChebyshevSeq::new(p.clone()).get(n)
}

/// Which alternating mutation path from the initial vertex.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Branch {
    /// Starts with direction 2: words 2, 2 1, 2 1 2, ...
    StartTwo,
    /// Starts with direction 1: words 1, 1 2, 1 2 1, ...
    StartOne,
}

impl Branch {
    pub fn word(self, len: usize) -> Vec<usize> {
        let (first, second) = match self {
            Branch::StartTwo => (2, 1),
            Branch::StartOne => (1, 2),
        };
        (0..len).map(|i| if i % 2 == 0 { first } else { second }).collect()
    }
}

pub fn skew_rank2(p: &Scalar) -> Matrix {
    Matrix::from_rows(vec![vec![Scalar::zero(), -p], vec![p.clone(), Scalar::zero()]])
}

fn mat2(a: Scalar, b: Scalar, c: Scalar, d: Scalar) -> Matrix {
    Matrix::from_rows(vec![vec![a, b], vec![c, d]])
}

/// The u-matrix formula for `C` at step `i`, without hypothesis checks.
fn formula(i: usize, branch: Branch, u: &mut ChebyshevSeq) -> Matrix {
    let i = i as i64;
    let even = i % 2 == 0;
    match branch {
        Branch::StartTwo if even => mat2(-u.get(i - 2), u.get(i - 1), -u.get(i - 1), u.get(i)),
        Branch::StartTwo => mat2(u.get(i - 1), -u.get(i - 2), u.get(i), -u.get(i - 1)),
        Branch::StartOne if i == 0 => Matrix::identity(2),
        Branch::StartOne if i == 1 => Matrix::from_ints(&[&[-1, 0], &[0, 1]]),
        Branch::StartOne if even => mat2(-u.get(i - 2), u.get(i - 3), -u.get(i - 3), u.get(i - 4)),
        Branch::StartOne => mat2(u.get(i - 3), -u.get(i - 2), u.get(i - 4), -u.get(i - 3)),
    }
}

/// Tropical signs the closed form assumes at step `j`.
fn expected_signs(j: usize, branch: Branch) -> [i8; 2] {
    match (branch, j) {
        (_, 0) => [1, 1],
        (Branch::StartOne, 1) => [-1, 1],
        (Branch::StartOne, 2) => [-1, -1],
        (_, j) if j % 2 == 1 => [1, -1],
        _ => [-1, 1],
    }
}

/// Closed-form `C` for `B = [[0,−p],[p,0]]` after `i` alternating mutations.
///
/// Errors with `HypothesisFails(j)` when the formula's own matrix at an
/// earlier step `j` lacks the tropical signs the formula relies on.
pub fn closed_form_c(i: usize, branch: Branch, p: &Scalar) -> Result<Matrix, Rank2Error> {
    let mut u = ChebyshevSeq::new(p.clone());
    for j in 0..i {
        let c = formula(j, branch, &mut u);
        let signs: Vec<Option<i8>> = c.columns().iter().map(|col| vector_sign(col)).collect();
        let want = expected_signs(j, branch);
        if signs[0] != Some(want[0]) || signs[1] != Some(want[1]) {
            return Err(Rank2Error::HypothesisFails(j));
        }
    }
    Ok(formula(i, branch, &mut u))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Rank2Verdict {
    CoxeterFinite(u32),
    CoherentInfinite,
    /// First incoherent node, with its first mixed-sign column.
    Incoherent { word: Vec<usize>, column: Vec<Scalar> },
}

impl Rank2Verdict {
    pub fn is_coherent(&self) -> bool {
        !matches!(self, Rank2Verdict::Incoherent { .. })
    }

    pub fn to_json(&self) -> Value {
        match self {
            Rank2Verdict::CoxeterFinite(m) => json!({ "verdict": "CoxeterFinite", "m": m }),
            Rank2Verdict::CoherentInfinite => json!({ "verdict": "CoherentInfinite" }),
            Rank2Verdict::Incoherent { word, column } => json!({
                "verdict": "Incoherent",
                "depth": word.len(),
                "word": word,
                "column": column.iter().map(Scalar::to_json).collect::<Vec<_>>(),
            }),
        }
    }
}

pub fn rank2_matrix(a: &Scalar, b: &Scalar) -> Matrix {
    Matrix::from_rows(vec![vec![Scalar::zero(), -a], vec![b.clone(), Scalar::zero()]])
}

fn field_degree(x: &Scalar) -> usize {
    match x.field() {
        Field::Rational => 1,
        Field::Quadratic(_) => 2,
        Field::Algebraic(f) => f.degree(),
    }
}

/// Largest `m` worth testing: `(2cos π/m)²` has degree `φ(m)/2`, which must
/// not exceed the degree of `ab`, and `φ(m) ≥ √(m/2)`.
fn coxeter_bound(ab: &Scalar) -> u32 {
    let k = field_degree(ab) as u32;
    (8 * k * k).max(30)
}

/// Sign-coherence class of `[[0,−a],[b,0]]`.
pub fn classify_rank2(a: &Scalar, b: &Scalar) -> Result<Rank2Verdict, Rank2Error> {
    if a.is_negative() || b.is_negative() {
        return Err(Rank2Error::NegativeEntry);
    }
    if a.is_zero() != b.is_zero() {
        return Err(Rank2Error::NotSkewSymmetrizable);
    }
    if a.is_zero() {
        return Ok(Rank2Verdict::CoxeterFinite(2));
    }
    let ab = a.try_mul(b)?;
    if ab.cmp_value(&Scalar::from_int(4)) != std::cmp::Ordering::Less {
        return Ok(Rank2Verdict::CoherentInfinite);
    }
    if let Some(m) = coxeter_index(&ab) {
        return Ok(Rank2Verdict::CoxeterFinite(m));
    }
    Ok(first_incoherence(&rank2_matrix(a, b), &ab))
}

/// The `m` with `ab = (2cos π/m)²`, for `0 < ab < 4`.
fn coxeter_index(ab: &Scalar) -> Option<u32> {
    // ab = 4cos²θ; the only candidate is the m nearest π/θ.
    let theta = (ab.to_f64().sqrt() / 2.0).clamp(-1.0, 1.0).acos();
    let guess = (PI / theta).round() as u32;
    let bound = coxeter_bound(ab);
    (guess.saturating_sub(1).max(3)..=(guess + 1).min(bound)).find(|&m| {
        let c = chebyshev_value(m);
        (&c * &c).value_eq(ab)
    })
}

fn first_incoherence(b0: &Matrix, ab: &Scalar) -> Rank2Verdict {
    // With √(ab) = 2cos θ and π/(m+1) < θ < π/m, a mixed column shows up
    // within m+1 steps along one of the two paths.
    let theta = (ab.to_f64().sqrt() / 2.0).acos();
    let limit = (PI / theta).floor() as usize + 3;
    let mut nodes = [Node::initial(b0), Node::initial(b0)];
    let mut depth = 0;
    loop {
        depth += 1;
        for (slot, branch) in [Branch::StartOne, Branch::StartTwo].into_iter().enumerate() {
            let k = branch.word(depth)[depth - 1];
            nodes[slot] = nodes[slot].mutate(b0, k);
            let node = &nodes[slot];
            if let Some(col) = node.c.columns().into_iter().find(|c| vector_sign(c).is_none()) {
                return Rank2Verdict::Incoherent { word: node.word.clone(), column: col };
            }
        }
        assert!(depth <= limit.max(64), "no incoherent column found within the proven bound");
    }
}

/// Maximal cones of a coherent rank-2 G-fan, plus the uncovered region.
#[derive(Clone, Debug)]
pub struct Rank2Fan {
    pub a: Scalar,
    pub b: Scalar,
    pub verdict: Rank2Verdict,
    pub cones: Vec<GCone>,
    /// Boundary rays of the region the fan never covers (`ab ≥ 4`), in
    /// floating point for drawing.
    pub uncovered: Option<[(f64, f64); 2]>,
}

/// Cones of the rank-2 fan. Finite types are explored to completion;
/// otherwise both alternating paths are followed to `depth`.
pub fn rank2_fan(a: &Scalar, b: &Scalar, depth: usize) -> Result<Rank2Fan, Rank2Error> {
    let verdict = classify_rank2(a, b)?;
    if let Rank2Verdict::Incoherent { word, .. } = &verdict {
        return Err(Rank2Error::IncoherentInput(format!("first incoherent word {word:?}")));
    }
    let b0 = rank2_matrix(a, b);
    // d = (b, a) skew-symmetrizes [[0,−a],[b,0]].
    let d = if a.is_zero() { vec![Scalar::one(), Scalar::one()] } else { vec![b.clone(), a.clone()] };
    let cones = match verdict {
        Rank2Verdict::CoxeterFinite(m) => {
            let space = explore_states(&b0, m as usize + 3);
            fan_of(&space, &d)?
        }
        _ => {
            let mut cones = vec![g_cone(&Node::initial(&b0), &d)?];
            for branch in [Branch::StartOne, Branch::StartTwo] {
                let mut node = Node::initial(&b0);
                for k in branch.word(depth) {
                    node = node.mutate(&b0, k);
                    cones.push(g_cone(&node, &d)?);
                }
            }
            cones
        }
    };
    let uncovered = (verdict == Rank2Verdict::CoherentInfinite).then(|| {
        // Limit rays (p ∓ √(p²−4), −2) of the skew-symmetric form, pulled back
        // by diag(√b, √a).
        let (af, bf) = (a.to_f64(), b.to_f64());
        let p = (af * bf).sqrt();
        let r = (p * p - 4.0).max(0.0).sqrt();
        let back = |x: f64, y: f64| (x / bf.sqrt(), y / af.sqrt());
        [back(p - r, -2.0), back(p + r, -2.0)]
    });
    Ok(Rank2Fan { a: a.clone(), b: b.clone(), verdict, cones, uncovered })
}

impl Rank2Fan {
    pub fn to_json(&self) -> Value {
        json!({
            "a": self.a.to_json(),
            "b": self.b.to_json(),
            "classification": self.verdict.to_json(),
            "cones": self.cones.iter().map(GCone::to_json).collect::<Vec<_>>(),
            "rays": crate::geometry::count_rays(&self.cones),
            "uncovered": self.uncovered.map(|[u, v]| json!([[u.0, u.1], [v.0, v.1]])),
        })
    }

    /// Deterministic drawing: fixed 400×400 viewport, rays sorted by angle.
    pub fn svg(&self) -> String {
        const C: f64 = 200.0;
        const R: f64 = 180.0;
        let unit = |(x, y): (f64, f64)| {
            let n = (x * x + y * y).sqrt();
            (C + R * x / n, C - R * y / n)
        };
        let mut rays: Vec<(f64, f64)> = Vec::new();
        for cone in &self.cones {
            for g in &cone.generators {
                let v = (g[0].to_f64(), g[1].to_f64());
                if !rays.iter().any(|w| (w.0 * v.1 - w.1 * v.0).abs() < 1e-12 && w.0 * v.0 + w.1 * v.1 > 0.0) {
                    rays.push(v);
                }
            }
        }
        rays.sort_by(|u, v| u.1.atan2(u.0).total_cmp(&v.1.atan2(v.0)));
        let mut s = String::new();
        s.push_str("<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"400\" height=\"400\" viewBox=\"0 0 400 400\">\n");
        s.push_str("<rect width=\"400\" height=\"400\" fill=\"white\"/>\n");
        s.push_str("<line x1=\"0\" y1=\"200\" x2=\"400\" y2=\"200\" stroke=\"#ccc\"/>\n");
        s.push_str("<line x1=\"200\" y1=\"0\" x2=\"200\" y2=\"400\" stroke=\"#ccc\"/>\n");
        if let Some([u, v]) = self.uncovered {
            let (ux, uy) = unit(u);
            let (vx, vy) = unit(v);
            let _ = writeln!(
                s,
                "<polygon points=\"{C:.3},{C:.3} {ux:.3},{uy:.3} {vx:.3},{vy:.3}\" fill=\"#eee\" stroke=\"black\" stroke-dasharray=\"4 3\"/>"
            );
        }
        for v in &rays {
            let (x, y) = unit(*v);
            let _ = writeln!(s, "<line x1=\"{C:.3}\" y1=\"{C:.3}\" x2=\"{x:.3}\" y2=\"{y:.3}\" stroke=\"blue\"/>");
        }
        s.push_str("</svg>\n");
        s
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(p: i64, d: i64) -> Scalar {
        Scalar::from_ratio(p, d)
    }

    #[test]
    fn chebyshev_values() {
        let p = q(7, 3);
        assert_eq!(chebyshev_u(0, &p), Scalar::one());
        assert_eq!(chebyshev_u(1, &p), p);
        assert_eq!(chebyshev_u(2, &p), &p * &p - Scalar::one());
        assert_eq!(chebyshev_u(3, &p), &p * &p * &p - &p * &Scalar::from_int(2));
        let mut two = ChebyshevSeq::new(Scalar::from_int(2));
        for n in 0..=20 {
            assert_eq!(two.get(n), Scalar::from_int(n + 1));
        }
    }

    #[test]
    fn golden_closed_form() {
        let p = chebyshev_value(5);
        let c = closed_form_c(2, Branch::StartTwo, &p).unwrap();
        let want = Matrix::from_rows(vec![vec![-Scalar::one(), p.clone()], vec![-&p, p.clone()]]);
        assert_eq!(c, want);
        assert_eq!(closed_form_c(0, Branch::StartOne, &p).unwrap(), Matrix::identity(2));
    }

    #[test]
    fn closed_form_matches_engine() {
        for p in [q(1, 1), Scalar::sqrt_int(2), chebyshev_value(5), q(2, 1), q(5, 2)] {
            let b0 = skew_rank2(&p);
            for branch in [Branch::StartOne, Branch::StartTwo] {
                for i in 0..=15 {
                    match closed_form_c(i, branch, &p) {
                        Ok(c) => assert_eq!(c, Node::replay(&b0, &branch.word(i)).c, "p={p} {branch:?} i={i}"),
                        Err(Rank2Error::HypothesisFails(_)) => assert!(p.to_f64() < 2.0),
                        Err(e) => panic!("{e}"),
                    }
                }
            }
        }
    }

    #[test]
    fn classification_examples() {
        assert_eq!(classify_rank2(&q(1, 1), &q(1, 1)).unwrap(), Rank2Verdict::CoxeterFinite(3));
        assert_eq!(classify_rank2(&q(1, 1), &q(4, 1)).unwrap(), Rank2Verdict::CoherentInfinite);
        assert_eq!(classify_rank2(&q(0, 1), &q(0, 1)).unwrap(), Rank2Verdict::CoxeterFinite(2));
        assert_eq!(classify_rank2(&q(1, 1), &q(2, 1)).unwrap(), Rank2Verdict::CoxeterFinite(4));
        assert_eq!(classify_rank2(&q(1, 1), &q(3, 1)).unwrap(), Rank2Verdict::CoxeterFinite(6));
        let c7 = chebyshev_value(7);
        assert_eq!(classify_rank2(&c7, &c7).unwrap(), Rank2Verdict::CoxeterFinite(7));
        match classify_rank2(&q(6, 5), &q(6, 5)).unwrap() {
            Rank2Verdict::Incoherent { word, column } => {
                assert_eq!(word, vec![2, 1, 2]);
                assert_eq!(column, vec![q(11, 25), q(-84, 125)]);
            }
            v => panic!("{v:?}"),
        }
        assert!(matches!(classify_rank2(&q(-1, 1), &q(1, 1)), Err(Rank2Error::NegativeEntry)));
    }

    #[test]
    fn fans() {
        for m in 3..=8u32 {
            let p = chebyshev_value(m);
            let fan = rank2_fan(&p, &p, 0).unwrap();
            assert_eq!(fan.cones.len(), m as usize + 2);
            assert_eq!(crate::geometry::count_rays(&fan.cones), m as usize + 2);
        }
        let fan = rank2_fan(&q(2, 1), &q(2, 1), 20).unwrap();
        assert_eq!(fan.cones.len(), 41);
        let svg = fan.svg();
        assert_eq!(svg, fan.svg());
        assert!(svg.contains("stroke-dasharray"));
    }
}
