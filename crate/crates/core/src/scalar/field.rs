//! Simple real algebraic extensions `Q(θ)` where `θ` is the unique root of an
//! irreducible integer polynomial inside a rational isolating interval.

use super::poly::Poly;
use super::ScalarError;
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use std::cmp::Ordering;
use std::hash::{Hash, Hasher};
use std::sync::Mutex;

#[derive(Debug)]
pub struct NumberField {
    minpoly: Vec<BigInt>,
    modulus: Poly,
    interval: (BigRational, BigRational),
    // Bisection cache for sign decisions; never affects identity or encoding.
    refined: Mutex<(BigRational, BigRational)>,
}

impl NumberField {
    /// Validates the defining data.
    ///
    /// Irreducibility is checked up to the absence of rational roots and repeated
    /// factors; the cosine constructor only ever produces irreducible polynomials.
    pub fn new(
        minpoly: Vec<BigInt>,
        lo: BigRational,
        hi: BigRational,
    ) -> Result<Self, ScalarError> {
        let modulus = Poly::from_ints(&minpoly).monic();
        let deg = modulus
            .degree()
            .filter(|d| *d >= 1)
            .ok_or_else(|| ScalarError::InvalidAlgebraic("minimal polynomial must be non-constant".into()))?;
        if lo > hi {
            return Err(ScalarError::InvalidAlgebraic("interval endpoints out of order".into()));
        }
        if modulus.square_free().degree() != Some(deg) {
            return Err(ScalarError::InvalidAlgebraic("minimal polynomial has a repeated factor".into()));
        }
        if deg >= 2 && !modulus.rational_roots().is_empty() {
            return Err(ScalarError::InvalidAlgebraic("minimal polynomial has a rational root".into()));
        }
        let at_lo = modulus.eval(&lo).is_zero();
        let count = modulus.count_roots(&lo, &hi) + usize::from(at_lo);
        if count != 1 {
            return Err(ScalarError::InvalidAlgebraic(format!(
                "interval contains {count} roots instead of exactly one"
            )));
        }
        let refined = Mutex::new((lo.clone(), hi.clone()));
        Ok(NumberField { minpoly, modulus, interval: (lo, hi), refined })
    }

    pub fn degree(&self) -> usize {
        self.modulus.degree().unwrap_or(0)
    }

    pub fn minpoly(&self) -> &[BigInt] {
        &self.minpoly
    }

    pub fn modulus(&self) -> &Poly {
        &self.modulus
    }

    pub fn interval(&self) -> &(BigRational, BigRational) {
        &self.interval
    }

    /// True when both describe the same real root of the same polynomial.
    pub fn same_as(&self, other: &NumberField) -> bool {
        if std::ptr::eq(self, other) {
            return true;
        }
        if self.modulus != other.modulus {
            return false;
        }
        if self.interval == other.interval {
            return true;
        }
        let lo = (&self.interval.0).max(&other.interval.0).clone();
        let hi = (&self.interval.1).min(&other.interval.1).clone();
        if lo > hi {
            return false;
        }
        self.modulus.eval(&lo).is_zero() || self.modulus.count_roots(&lo, &hi) > 0
    }

    /// Reduces a polynomial in `θ` to a coefficient vector of length `degree`.
    pub fn reduce(&self, p: &Poly) -> Vec<BigRational> {
        let r = p.rem(&self.modulus);
        let mut out = r.coeffs().to_vec();
        out.resize(self.degree(), BigRational::zero());
        out
    }

    /// An enclosure of `θ` of width at most `width`.
    pub fn root_enclosure(&self, width: &BigRational) -> (BigRational, BigRational) {
        let mut guard = self.refined.lock().expect("refinement cache poisoned");
        while &guard.1 - &guard.0 > *width {
            Self::bisect(&self.modulus, &mut guard);
        }
        guard.clone()
    }

    fn bisect(f: &Poly, iv: &mut (BigRational, BigRational)) {
        let two = BigRational::from_integer(2.into());
        let mid = (&iv.0 + &iv.1) / &two;
        let s_mid = f.sign_at(&mid);
        if s_mid == Ordering::Equal {
            *iv = (mid.clone(), mid);
            return;
        }
        let s_lo = f.sign_at(&iv.0);
        if s_lo == Ordering::Equal {
            iv.1 = iv.0.clone();
        } else if s_lo == s_mid {
            iv.0 = mid;
        } else {
            iv.1 = mid;
        }
    }

    /// Exact sign of `a(θ)` for a reduced, provably nonzero coefficient polynomial.
    pub fn sign_of(&self, a: &Poly) -> Ordering {
        if a.degree().unwrap_or(0) == 0 {
            return a.leading().cmp(&BigRational::zero());
        }
        let mut guard = self.refined.lock().expect("refinement cache poisoned");
        loop {
            let (lo, hi) = a.eval_interval(&guard.0, &guard.1);
            if lo > BigRational::zero() {
                return Ordering::Greater;
            }
            if hi < BigRational::zero() {
                return Ordering::Less;
            }
            if guard.0 == guard.1 {
                // Degenerate rational root; the enclosure is a point.
                return a.eval(&guard.0).cmp(&BigRational::zero());
            }
            Self::bisect(&self.modulus, &mut guard);
        }
    }

    /// Enclosure of `a(θ)` after refining `θ` below `width`.
    pub fn enclose(&self, a: &Poly, width: &BigRational) -> (BigRational, BigRational) {
        let (lo, hi) = self.root_enclosure(width);
        a.eval_interval(&lo, &hi)
    }

    pub fn one_coeffs(&self) -> Vec<BigRational> {
        let mut v = vec![BigRational::zero(); self.degree()];
        if let Some(c) = v.first_mut() {
            *c = BigRational::one();
        }
        v
    }
}

impl PartialEq for NumberField {
    fn eq(&self, other: &Self) -> bool {
        self.same_as(other)
    }
}

impl Eq for NumberField {}

impl Hash for NumberField {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.modulus.hash(state);
    }
}
