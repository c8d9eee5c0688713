//! Exact ordered-field scalars.
//!
//! A [`Scalar`] is a rational, an element `c0 + c1·√d` of a real quadratic
//! field, or an element of a simple real algebraic extension `Q(θ)`. Arithmetic
//! is closed inside one field; combining two different irrational fields is an
//! error rather than an implicit promotion. Rationals mix with everything.

mod field;
mod json;
pub use json::parse_rational;
pub mod poly;

pub use field::NumberField;

use num_bigint::{BigInt, Sign};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use poly::Poly;
use std::cmp::Ordering;
use std::collections::HashMap;
use std::fmt;
use std::hash::{Hash, Hasher};
use std::sync::{Arc, Mutex, OnceLock};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ScalarError {
    #[error("mixed-field arithmetic between {0} and {1}")]
    FieldMismatch(String, String),
    #[error("the square root of {0} leaves the supported scalar tower")]
    UnsupportedTower(String),
    #[error("{weight} is not a quasi-integer weight: its square {square} is not an integer")]
    NotQuasiWeight { weight: String, square: String },
    #[error("square root of the negative value {0}")]
    NegativeRadicand(String),
    #[error("division by zero")]
    DivisionByZero,
    #[error("invalid algebraic number: {0}")]
    InvalidAlgebraic(String),
    #[error("malformed scalar: {0}")]
    Parse(String),
}

/// `c0 + c1·√d` with `d ≥ 2` square-free and `c1 ≠ 0`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Quadratic {
    c0: BigRational,
    c1: BigRational,
    d: u64,
}

impl Quadratic {
    pub fn c0(&self) -> &BigRational {
        &self.c0
    }
    pub fn c1(&self) -> &BigRational {
        &self.c1
    }
    pub fn d(&self) -> u64 {
        self.d
    }
}

/// A polynomial in the generator of `field`, reduced below its degree.
#[derive(Clone, Debug)]
pub struct Algebraic {
    field: Arc<NumberField>,
    coeffs: Vec<BigRational>,
}

impl Algebraic {
    pub fn field(&self) -> &Arc<NumberField> {
        &self.field
    }
    pub fn coeffs(&self) -> &[BigRational] {
        &self.coeffs
    }
    fn poly(&self) -> Poly {
        Poly::new(self.coeffs.clone())
    }
}

impl PartialEq for Algebraic {
    fn eq(&self, other: &Self) -> bool {
        self.coeffs == other.coeffs && self.field.same_as(&other.field)
    }
}
impl Eq for Algebraic {}
impl Hash for Algebraic {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.field.hash(state);
        self.coeffs.hash(state);
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Scalar {
    Rational(BigRational),
    Quadratic(Quadratic),
    Algebraic(Algebraic),
}

/// The field a scalar lives in.
#[derive(Clone, Debug)]
pub enum Field {
    Rational,
    Quadratic(u64),
    Algebraic(Arc<NumberField>),
}

impl PartialEq for Field {
    fn eq(&self, other: &Self) -> bool {
        match (self, other) {
            (Field::Rational, Field::Rational) => true,
            (Field::Quadratic(a), Field::Quadratic(b)) => a == b,
            (Field::Algebraic(a), Field::Algebraic(b)) => a.same_as(b),
            _ => false,
        }
    }
}

impl fmt::Display for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Field::Rational => write!(f, "Q"),
            Field::Quadratic(d) => write!(f, "Q(sqrt({d}))"),
            Field::Algebraic(k) => write!(f, "Q(root of {:?})", k.minpoly()),
        }
    }
}

impl Field {
    /// Smallest field containing both, if one contains the other.
    pub fn join(&self, other: &Field) -> Result<Field, ScalarError> {
        match (self, other) {
            (Field::Rational, x) | (x, Field::Rational) => Ok(x.clone()),
            (a, b) if a == b => Ok(a.clone()),
            (a, b) => Err(ScalarError::FieldMismatch(a.to_string(), b.to_string())),
        }
    }
}

/// `q = m·√a` with `a` square-free; `(0, 0)` encodes zero.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct SquareFreePair {
    pub m: BigInt,
    pub a: u64,
}

impl fmt::Display for SquareFreePair {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.a {
            0 | 1 => write!(f, "{}", self.m),
            a => write!(f, "{}*sqrt({a})", self.m),
        }
    }
}

fn rat(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

/// Square-free part and square root of the square part, by trial division.
pub fn square_free_split(n: u64) -> (u64, u64) {
    if n == 0 {
        return (0, 0);
    }
    let (mut rest, mut root, mut free) = (n, 1u64, 1u64);
    let mut p = 2u64;
    while p.saturating_mul(p) <= rest {
        let mut e = 0;
        while rest % p == 0 {
            rest /= p;
            e += 1;
        }
        root *= p.pow(e / 2);
        if e % 2 == 1 {
            free *= p;
        }
        p += if p == 2 { 1 } else { 2 };
    }
    (free * rest, root)
}

pub fn is_square_free(n: u64) -> bool {
    n > 0 && square_free_split(n).1 == 1
}

fn rational_sqrt(x: &BigRational) -> Option<BigRational> {
    if x.is_negative() {
        return None;
    }
    let (p, q) = (x.numer(), x.denom());
    let (sp, sq) = (p.sqrt(), q.sqrt());
    (&sp * &sp == *p && &sq * &sq == *q).then(|| BigRational::new(sp, sq))
}

impl Scalar {
    pub fn zero() -> Self {
        Scalar::Rational(BigRational::zero())
    }

    pub fn one() -> Self {
        Scalar::Rational(BigRational::one())
    }

    pub fn from_int(n: i64) -> Self {
        Scalar::Rational(rat(n))
    }

    pub fn from_ratio(p: i64, q: i64) -> Self {
        Scalar::Rational(BigRational::new(p.into(), q.into()))
    }

    pub fn from_rational(r: BigRational) -> Self {
        Scalar::Rational(r)
    }

    /// `c0 + c1·√d` for any positive `d`; square factors of `d` are absorbed.
    pub fn quadratic(c0: BigRational, c1: BigRational, d: u64) -> Self {
        let (free, root) = square_free_split(d);
        if free <= 1 || c1.is_zero() {
            let extra = if free == 1 { c1 * BigRational::from_integer(root.into()) } else { BigRational::zero() };
            return Scalar::Rational(c0 + extra);
        }
        let c1 = c1 * BigRational::from_integer(root.into());
        Scalar::Quadratic(Quadratic { c0, c1, d: free })
    }

    /// `√n` for a non-negative integer `n`.
    pub fn sqrt_int(n: u64) -> Self {
        Scalar::quadratic(BigRational::zero(), BigRational::one(), n)
    }

    /// Element of `field` with the given coefficients in powers of the generator.
    pub fn algebraic(field: Arc<NumberField>, coeffs: &[BigRational]) -> Self {
        let reduced = field.reduce(&Poly::new(coeffs.to_vec()));
        Self::from_reduced(field, reduced)
    }

    fn from_reduced(field: Arc<NumberField>, coeffs: Vec<BigRational>) -> Self {
        if coeffs.iter().skip(1).all(|c| c.is_zero()) {
            return Scalar::Rational(coeffs.first().cloned().unwrap_or_else(BigRational::zero));
        }
        Scalar::Algebraic(Algebraic { field, coeffs })
    }

    /// The generator `θ` of `field`.
    pub fn generator(field: Arc<NumberField>) -> Self {
        Self::algebraic(field, &[BigRational::zero(), BigRational::one()])
    }

    pub fn field(&self) -> Field {
        match self {
            Scalar::Rational(_) => Field::Rational,
            Scalar::Quadratic(q) => Field::Quadratic(q.d),
            Scalar::Algebraic(a) => Field::Algebraic(a.field.clone()),
        }
    }

    pub fn as_rational(&self) -> Option<&BigRational> {
        match self {
            Scalar::Rational(r) => Some(r),
            _ => None,
        }
    }

    pub fn is_rational(&self) -> bool {
        matches!(self, Scalar::Rational(_))
    }

    /// Integer value if this is a rational with denominator one.
    pub fn as_integer(&self) -> Option<BigInt> {
        self.as_rational().filter(|r| r.is_integer()).map(|r| r.to_integer())
    }

    pub fn is_zero(&self) -> bool {
        matches!(self, Scalar::Rational(r) if r.is_zero())
    }

    pub fn is_one(&self) -> bool {
        matches!(self, Scalar::Rational(r) if r.is_one())
    }

    fn quad_parts(&self) -> (BigRational, BigRational) {
        match self {
            Scalar::Rational(r) => (r.clone(), BigRational::zero()),
            Scalar::Quadratic(q) => (q.c0.clone(), q.c1.clone()),
            Scalar::Algebraic(_) => unreachable!("quadratic view of an algebraic scalar"),
        }
    }

    fn alg_poly(&self) -> Poly {
        match self {
            Scalar::Rational(r) => Poly::constant(r.clone()),
            Scalar::Algebraic(a) => a.poly(),
            Scalar::Quadratic(_) => unreachable!("algebraic view of a quadratic scalar"),
        }
    }

    pub fn try_add(&self, other: &Scalar) -> Result<Scalar, ScalarError> {
        if let (Scalar::Rational(a), Scalar::Rational(b)) = (self, other) {
            return Ok(Scalar::Rational(a + b));
        }
        match self.field().join(&other.field())? {
            Field::Rational => unreachable!(),
            Field::Quadratic(d) => {
                let (a0, a1) = self.quad_parts();
                let (b0, b1) = other.quad_parts();
                Ok(Scalar::quad_norm(a0 + b0, a1 + b1, d))
            }
            Field::Algebraic(k) => {
                let p = self.alg_poly().add(&other.alg_poly());
                let r = k.reduce(&p);
                Ok(Scalar::from_reduced(k, r))
            }
        }
    }

    pub fn try_sub(&self, other: &Scalar) -> Result<Scalar, ScalarError> {
        self.try_add(&other.neg_ref())
    }

    pub fn try_mul(&self, other: &Scalar) -> Result<Scalar, ScalarError> {
        if let (Scalar::Rational(a), Scalar::Rational(b)) = (self, other) {
            return Ok(Scalar::Rational(a * b));
        }
        match self.field().join(&other.field())? {
            Field::Rational => unreachable!(),
            Field::Quadratic(d) => {
                let (a0, a1) = self.quad_parts();
                let (b0, b1) = other.quad_parts();
                let dr = BigRational::from_integer(d.into());
                let c0 = &a0 * &b0 + &a1 * &b1 * dr;
                let c1 = a0 * b1 + a1 * b0;
                Ok(Scalar::quad_norm(c0, c1, d))
            }
            Field::Algebraic(k) => {
                let p = self.alg_poly().mul(&other.alg_poly());
                let r = k.reduce(&p);
                Ok(Scalar::from_reduced(k, r))
            }
        }
    }

    pub fn try_div(&self, other: &Scalar) -> Result<Scalar, ScalarError> {
        let inv = other.try_recip()?;
        self.try_mul(&inv)
    }

    pub fn try_recip(&self) -> Result<Scalar, ScalarError> {
        match self {
            Scalar::Rational(r) => {
                if r.is_zero() {
                    Err(ScalarError::DivisionByZero)
                } else {
                    Ok(Scalar::Rational(r.recip()))
                }
            }
            Scalar::Quadratic(q) => {
                let dr = BigRational::from_integer(q.d.into());
                let norm = &q.c0 * &q.c0 - &q.c1 * &q.c1 * dr;
                Ok(Scalar::quad_norm(&q.c0 / &norm, -(&q.c1 / &norm), q.d))
            }
            Scalar::Algebraic(a) => {
                let inv = a
                    .poly()
                    .inverse_mod(a.field.modulus())
                    .ok_or_else(|| ScalarError::InvalidAlgebraic("minimal polynomial is reducible".into()))?;
                let r = a.field.reduce(&inv);
                Ok(Scalar::from_reduced(a.field.clone(), r))
            }
        }
    }

    fn quad_norm(c0: BigRational, c1: BigRational, d: u64) -> Scalar {
        if c1.is_zero() {
            Scalar::Rational(c0)
        } else {
            Scalar::Quadratic(Quadratic { c0, c1, d })
        }
    }

    fn neg_ref(&self) -> Scalar {
        match self {
            Scalar::Rational(r) => Scalar::Rational(-r),
            Scalar::Quadratic(q) => Scalar::Quadratic(Quadratic { c0: -&q.c0, c1: -&q.c1, d: q.d }),
            Scalar::Algebraic(a) => Scalar::Algebraic(Algebraic {
                field: a.field.clone(),
                coeffs: a.coeffs.iter().map(|c| -c).collect(),
            }),
        }
    }

    /// Exact sign as -1, 0 or +1.
    pub fn sign(&self) -> i8 {
        match self.sign_ord() {
            Ordering::Less => -1,
            Ordering::Equal => 0,
            Ordering::Greater => 1,
        }
    }

    fn sign_ord(&self) -> Ordering {
        let zero = BigRational::zero();
        match self {
            Scalar::Rational(r) => r.cmp(&zero),
            Scalar::Quadratic(q) => {
                let s1 = q.c1.cmp(&zero);
                let s0 = q.c0.cmp(&zero);
                if s0 == Ordering::Equal || s0 == s1 {
                    return s1;
                }
                let lhs = &q.c0 * &q.c0;
                let rhs = &q.c1 * &q.c1 * BigRational::from_integer(q.d.into());
                if lhs > rhs {
                    s0
                } else {
                    s1
                }
            }
            Scalar::Algebraic(a) => a.field.sign_of(&a.poly()),
        }
    }

    pub fn is_positive(&self) -> bool {
        self.sign() > 0
    }

    pub fn is_negative(&self) -> bool {
        self.sign() < 0
    }

    pub fn abs(&self) -> Scalar {
        if self.is_negative() {
            -self
        } else {
            self.clone()
        }
    }

    /// `[x]₊ = max(x, 0)`.
    pub fn pos(&self) -> Scalar {
        if self.is_positive() {
            self.clone()
        } else {
            Scalar::zero()
        }
    }

    /// Exact comparison of two real numbers.
    ///
    /// Scalars from different irrational fields are compared by refining
    /// enclosures, after an exact equality test through minimal polynomials.
    pub fn cmp_value(&self, other: &Scalar) -> Ordering {
        if let Ok(diff) = self.try_sub(other) {
            return diff.sign_ord();
        }
        if self.value_eq(other) {
            return Ordering::Equal;
        }
        let mut bits = 32;
        loop {
            let (alo, ahi) = self.enclosure(bits);
            let (blo, bhi) = other.enclosure(bits);
            if ahi < blo {
                return Ordering::Less;
            }
            if bhi < alo {
                return Ordering::Greater;
            }
            bits *= 2;
        }
    }

    /// Numerical equality, valid across fields.
    pub fn value_eq(&self, other: &Scalar) -> bool {
        if let Ok(diff) = self.try_sub(other) {
            return diff.is_zero();
        }
        // Both irrational and in different fields from here on.
        let mp = self.minimal_polynomial();
        if mp != other.minimal_polynomial() {
            return false;
        }
        let mut bits = 32;
        loop {
            let (alo, ahi) = self.enclosure(bits);
            let (blo, bhi) = other.enclosure(bits);
            if ahi < blo || bhi < alo {
                return false;
            }
            let lo = (&alo).min(&blo).clone();
            let hi = (&ahi).max(&bhi).clone();
            if !mp.eval(&lo).is_zero() && !mp.eval(&hi).is_zero() && mp.count_roots(&lo, &hi) == 1 {
                return true;
            }
            bits *= 2;
        }
    }

    /// Rational enclosure `[lo, hi]` whose width shrinks as `bits` grows.
    pub fn enclosure(&self, bits: u32) -> (BigRational, BigRational) {
        match self {
            Scalar::Rational(r) => (r.clone(), r.clone()),
            Scalar::Quadratic(q) => {
                let scale = BigInt::one() << bits;
                let s = (BigInt::from(q.d) * &scale * &scale).sqrt();
                let lo_root = BigRational::new(s.clone(), scale.clone());
                let hi_root = BigRational::new(s + 1, scale);
                let a = &q.c0 + &q.c1 * &lo_root;
                let b = &q.c0 + &q.c1 * &hi_root;
                if a <= b {
                    (a, b)
                } else {
                    (b, a)
                }
            }
            Scalar::Algebraic(a) => {
                let width = BigRational::new(BigInt::one(), BigInt::one() << bits);
                a.field.enclose(&a.poly(), &width)
            }
        }
    }

    /// Floating-point approximation; for display and plotting only.
    pub fn to_f64(&self) -> f64 {
        let (lo, hi) = self.enclosure(64);
        let mid = (lo + hi) / rat(2);
        mid.to_f64().unwrap_or(f64::NAN)
    }

    /// Monic minimal polynomial over the rationals.
    pub fn minimal_polynomial(&self) -> Poly {
        match self {
            Scalar::Rational(r) => Poly::new(vec![-r.clone(), BigRational::one()]),
            Scalar::Quadratic(q) => {
                let dr = BigRational::from_integer(q.d.into());
                Poly::new(vec![
                    &q.c0 * &q.c0 - &q.c1 * &q.c1 * dr,
                    -(rat(2) * &q.c0),
                    BigRational::one(),
                ])
            }
            Scalar::Algebraic(a) => algebraic_minpoly(a),
        }
    }

    /// Non-negative square root, when it stays inside the scalar tower.
    pub fn sqrt_nonneg(&self) -> Result<Scalar, ScalarError> {
        if self.is_negative() {
            return Err(ScalarError::NegativeRadicand(self.to_string()));
        }
        match self {
            Scalar::Rational(r) => {
                // p/q = p·q / q², so √(p/q) = √(p·q) / q.
                let pq = (r.numer() * r.denom())
                    .to_u64()
                    .ok_or_else(|| ScalarError::UnsupportedTower(self.to_string()))?;
                let (free, root) = square_free_split(pq);
                let coeff = BigRational::new(BigInt::from(root), r.denom().clone());
                Ok(Scalar::quadratic(BigRational::zero(), coeff, free.max(1)))
            }
            Scalar::Quadratic(q) => {
                // (u + v√d)² = u² + d v² + 2uv√d.
                let dr = BigRational::from_integer(q.d.into());
                let norm = &q.c0 * &q.c0 - &q.c1 * &q.c1 * &dr;
                let s = rational_sqrt(&norm).ok_or_else(|| ScalarError::UnsupportedTower(self.to_string()))?;
                for cand in [(&q.c0 + &s) / rat(2), (&q.c0 - &s) / rat(2)] {
                    if let Some(u) = rational_sqrt(&cand).filter(|u| !u.is_zero()) {
                        let v = &q.c1 / (rat(2) * &u);
                        let y = Scalar::quad_norm(u, v, q.d);
                        return Ok(if y.is_negative() { -y } else { y });
                    }
                }
                Err(ScalarError::UnsupportedTower(self.to_string()))
            }
            Scalar::Algebraic(_) => Err(ScalarError::UnsupportedTower(self.to_string())),
        }
    }

    /// Writes `q = m·√a` with `a` square-free; requires `q²` to be an integer.
    pub fn square_free_decompose(&self) -> Result<SquareFreePair, ScalarError> {
        let sq = self * self;
        let bad = || ScalarError::NotQuasiWeight { weight: self.to_string(), square: sq.to_string() };
        let n = sq.as_integer().ok_or_else(bad)?;
        if n.is_zero() {
            return Ok(SquareFreePair { m: BigInt::zero(), a: 0 });
        }
        let n = n.to_u64().ok_or_else(bad)?;
        let (free, root) = square_free_split(n);
        let m = BigInt::from(root) * BigInt::from(self.sign());
        Ok(SquareFreePair { m, a: free })
    }

    /// Integer power.
    pub fn pow(&self, e: u32) -> Scalar {
        let mut acc = Scalar::one();
        for _ in 0..e {
            acc = &acc * self;
        }
        acc
    }
}

fn algebraic_minpoly(a: &Algebraic) -> Poly {
    let n = a.field.degree();
    let base = a.poly();
    // Powers of the element as coordinate vectors in the power basis.
    let mut powers: Vec<Vec<BigRational>> = vec![a.field.one_coeffs()];
    let mut cur = Poly::constant(BigRational::one());
    for k in 1..=n {
        cur = cur.mul(&base).rem(a.field.modulus());
        let target = a.field.reduce(&cur);
        if let Some(sol) = solve_combination(&powers, &target) {
            let mut coeffs: Vec<BigRational> = sol.into_iter().map(|c| -c).collect();
            coeffs.push(BigRational::one());
            debug_assert_eq!(coeffs.len(), k + 1);
            return Poly::new(coeffs);
        }
        powers.push(target);
    }
    unreachable!("n+1 vectors in an n-dimensional space are dependent")
}

/// Solves `Σ x_j · cols[j] = target` exactly, if consistent.
fn solve_combination(cols: &[Vec<BigRational>], target: &[BigRational]) -> Option<Vec<BigRational>> {
    let rows = target.len();
    let k = cols.len();
    let mut m: Vec<Vec<BigRational>> = (0..rows)
        .map(|r| {
            let mut row: Vec<BigRational> = cols.iter().map(|c| c[r].clone()).collect();
            row.push(target[r].clone());
            row
        })
        .collect();
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..k {
        let Some(p) = (r..rows).find(|&i| !m[i][c].is_zero()) else { continue };
        m.swap(r, p);
        let inv = m[r][c].recip();
        for x in m[r].iter_mut() {
            *x *= &inv;
        }
        for i in 0..rows {
            if i != r && !m[i][c].is_zero() {
                let f = m[i][c].clone();
                #[allow(clippy::needless_range_loop)] // rows i and r are both borrowed
                for j in 0..=k {
                    let v = &f * &m[r][j];
                    m[i][j] -= v;
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    if m[r..].iter().any(|row| !row[k].is_zero()) {
        return None;
    }
    let mut x = vec![BigRational::zero(); k];
    for (i, &c) in pivots.iter().enumerate() {
        x[c] = m[i][k].clone();
    }
    Some(x)
}

/// Chebyshev-type polynomial `V_m` with `V_m(2cos θ) = 2cos(mθ)`.
fn chebyshev_v(m: u32) -> Poly {
    let mut prev = Poly::constant(rat(2));
    let mut cur = Poly::x();
    if m == 0 {
        return prev;
    }
    for _ in 1..m {
        let next = Poly::x().mul(&cur).sub(&prev);
        prev = cur;
        cur = next;
    }
    cur
}

/// Minimal polynomial of `2cos(π/m)` over the rationals.
///
/// Every root of `V_m + 2` has the form `2cos((2j+1)π/m)`; those whose reduced
/// fraction has a smaller denominator `m/g` (with `g` an odd divisor of `m`)
/// are stripped by gcds against `V_{m/g} + 2`.
pub fn cos_minpoly(m: u32) -> Poly {
    assert!(m >= 2, "2cos(pi/m) needs m >= 2");
    let two = Poly::constant(rat(2));
    let mut f = chebyshev_v(m).add(&two).square_free();
    for g in (3..=m).step_by(2).filter(|g| m.is_multiple_of(*g)) {
        let other = chebyshev_v(m / g).add(&two).square_free();
        let common = f.gcd(&other);
        if common.degree().unwrap_or(0) > 0 {
            f = f.div_rem(&common).0.monic();
        }
    }
    f
}

/// Exact `2cos(π/m)`.
pub fn chebyshev_value(m: u32) -> Scalar {
    static CACHE: OnceLock<Mutex<HashMap<u32, Scalar>>> = OnceLock::new();
    let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
    if let Some(v) = cache.lock().expect("cache poisoned").get(&m) {
        return v.clone();
    }
    let v = build_cos(m);
    cache.lock().expect("cache poisoned").insert(m, v.clone());
    v
}

fn build_cos(m: u32) -> Scalar {
    let f = cos_minpoly(m);
    let c = f.coeffs();
    match f.degree() {
        Some(1) => Scalar::Rational(-c[0].clone()),
        Some(2) => {
            // Largest root of x² + b x + c.
            let disc = &c[1] * &c[1] - rat(4) * &c[0];
            let root = Scalar::Rational(disc).sqrt_nonneg().expect("rational radicand");
            (root - Scalar::Rational(c[1].clone())) * Scalar::from_ratio(1, 2)
        }
        _ => {
            let approx = 2.0 * (std::f64::consts::PI / f64::from(m)).cos();
            let center = BigRational::from_float(approx).expect("finite cosine");
            let mut delta = BigRational::new(BigInt::one(), BigInt::from(1u64 << 20));
            let ints = f.integer_primitive();
            loop {
                let lo = &center - &delta;
                let hi = &center + &delta;
                if let Ok(k) = NumberField::new(ints.clone(), lo, hi) {
                    return Scalar::generator(Arc::new(k));
                }
                delta /= rat(16);
            }
        }
    }
}

impl Default for Scalar {
    fn default() -> Self {
        Scalar::zero()
    }
}

impl From<i64> for Scalar {
    fn from(n: i64) -> Self {
        Scalar::from_int(n)
    }
}

impl From<BigRational> for Scalar {
    fn from(r: BigRational) -> Self {
        Scalar::Rational(r)
    }
}

macro_rules! binop {
    ($trait:ident, $method:ident, $try:ident) => {
        impl std::ops::$trait<&Scalar> for &Scalar {
            type Output = Scalar;
            fn $method(self, rhs: &Scalar) -> Scalar {
                self.$try(rhs).unwrap_or_else(|e| panic!("{e}"))
            }
        }
        impl std::ops::$trait<Scalar> for Scalar {
            type Output = Scalar;
            fn $method(self, rhs: Scalar) -> Scalar {
                (&self).$try(&rhs).unwrap_or_else(|e| panic!("{e}"))
            }
        }
        impl std::ops::$trait<&Scalar> for Scalar {
            type Output = Scalar;
            fn $method(self, rhs: &Scalar) -> Scalar {
                (&self).$try(rhs).unwrap_or_else(|e| panic!("{e}"))
            }
        }
        impl std::ops::$trait<Scalar> for &Scalar {
            type Output = Scalar;
            fn $method(self, rhs: Scalar) -> Scalar {
                self.$try(&rhs).unwrap_or_else(|e| panic!("{e}"))
            }
        }
    };
}

binop!(Add, add, try_add);
binop!(Sub, sub, try_sub);
binop!(Mul, mul, try_mul);
binop!(Div, div, try_div);

impl std::ops::Neg for &Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        self.neg_ref()
    }
}

impl std::ops::Neg for Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        self.neg_ref()
    }
}

impl std::ops::AddAssign<&Scalar> for Scalar {
    fn add_assign(&mut self, rhs: &Scalar) {
        *self = &*self + rhs;
    }
}

impl std::ops::SubAssign<&Scalar> for Scalar {
    fn sub_assign(&mut self, rhs: &Scalar) {
        *self = &*self - rhs;
    }
}

fn fmt_rat(r: &BigRational) -> String {
    if r.is_integer() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Scalar::Rational(r) => write!(f, "{}", fmt_rat(r)),
            Scalar::Quadratic(q) => {
                let root = format!("sqrt({})", q.d);
                let tail = if q.c1.is_one() {
                    root
                } else if (-&q.c1).is_one() {
                    format!("-{root}")
                } else {
                    format!("{}*{root}", fmt_rat(&q.c1))
                };
                if q.c0.is_zero() {
                    write!(f, "{tail}")
                } else if tail.starts_with('-') {
                    write!(f, "{}{tail}", fmt_rat(&q.c0))
                } else {
                    write!(f, "{}+{tail}", fmt_rat(&q.c0))
                }
            }
            Scalar::Algebraic(a) => {
                let mut terms = Vec::new();
                for (i, c) in a.coeffs.iter().enumerate() {
                    if c.is_zero() {
                        continue;
                    }
                    let t = match i {
                        0 => fmt_rat(c),
                        1 => format!("{}*t", fmt_rat(c)),
                        _ => format!("{}*t^{i}", fmt_rat(c)),
                    };
                    terms.push(t);
                }
                write!(f, "({})", terms.join("+").replace("+-", "-"))
            }
        }
    }
}

/// Sign of a big integer as -1, 0, 1; shared by callers doing integer work.
pub fn bigint_sign(n: &BigInt) -> i8 {
    match n.sign() {
        Sign::Minus => -1,
        Sign::NoSign => 0,
        Sign::Plus => 1,
    }
}

/// Greatest common divisor of two non-negative integers.
pub fn gcd_u64(a: u64, b: u64) -> u64 {
    a.gcd(&b)
}
