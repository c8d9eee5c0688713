//! Coxeter quivers of finite type (plus two affine ones), with edge
//! weights `[m] = 2cos(π/m)`.
//!
//! Every drawn arrow `u → v` of weight `w` is stored as `b_uv = −w`,
//! `b_vu = w`, so that `A2` is `[[0,−1],[1,0]]`.

use crate::matrix::Matrix;
use crate::scalar::chebyshev_value;
use crate::skewsym::Quiver;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CatalogError {
    #[error("unknown Coxeter type {0:?}")]
    UnknownType(String),
}

/// Parsed type name.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CoxeterType {
    A(usize),
    B(usize),
    D(usize),
    E(usize),
    F4,
    H3,
    H4,
    I2(u32),
    AffineA(usize),
    AffineF4,
}

impl CoxeterType {
    /// Accepts `A3`, `B4`, `C4`, `D5`, `E6`, `F4`, `H3`, `I2(7)`, `I2_7`,
    /// `A~2` and `F~4`, case-insensitively.
    pub fn parse(name: &str) -> Result<CoxeterType, CatalogError> {
        let unknown = || CatalogError::UnknownType(name.to_string());
        let s = name.trim().to_ascii_uppercase().replace(['_', ' '], "");
        if let Some(rest) = s.strip_prefix("I2") {
            let m: u32 = rest.trim_start_matches('(').trim_end_matches(')').parse().map_err(|_| unknown())?;
            return if m >= 2 { Ok(CoxeterType::I2(m)) } else { Err(unknown()) };
        }
        let (head, affine) = match s.find('~') {
            Some(pos) => (s[..pos].to_string() + &s[pos + 1..], true),
            None => (s, false),
        };
        let letter = head.chars().next().ok_or_else(unknown)?;
        let n: usize = head[1..].parse().map_err(|_| unknown())?;
        let t = match (letter, n, affine) {
            ('A', n, false) if n >= 1 => CoxeterType::A(n),
            ('B' | 'C', n, false) if n >= 2 => CoxeterType::B(n),
            ('D', n, false) if n >= 4 => CoxeterType::D(n),
            ('E', 6..=8, false) => CoxeterType::E(n),
            ('F', 4, false) => CoxeterType::F4,
            ('H', 3, false) => CoxeterType::H3,
            ('H', 4, false) => CoxeterType::H4,
            ('A', n, true) if n >= 2 => CoxeterType::AffineA(n),
            ('F', 4, true) => CoxeterType::AffineF4,
            _ => return Err(unknown()),
        };
        Ok(t)
    }

    pub fn rank(self) -> usize {
        match self {
            CoxeterType::A(n) | CoxeterType::B(n) | CoxeterType::D(n) | CoxeterType::E(n) => n,
            CoxeterType::F4 | CoxeterType::H4 => 4,
            CoxeterType::H3 => 3,
            CoxeterType::I2(_) => 2,
            CoxeterType::AffineA(n) => n + 1,
            CoxeterType::AffineF4 => 5,
        }
    }

    pub fn is_finite(self) -> bool {
        !matches!(self, CoxeterType::AffineA(_) | CoxeterType::AffineF4)
    }

    /// Depth that suffices for the C-pattern to close up.
    pub fn default_depth(self) -> usize {
        match self {
            CoxeterType::H3 => 7,
            CoxeterType::H4 => 11,
            CoxeterType::I2(m) => m as usize + 3,
            t => 2 * t.rank() + 3,
        }
    }

    /// Weighted arrows `(from, to, m)` with 1-based vertices.
    fn arrows(self) -> Vec<(usize, usize, u32)> {
        let path = |n: usize| (1..n).map(|i| (i, i + 1, 3)).collect::<Vec<_>>();
        match self {
            CoxeterType::A(n) => path(n),
            CoxeterType::B(n) => {
                let mut a = path(n);
                a.last_mut().expect("n >= 2").2 = 4;
                a
            }
            CoxeterType::D(n) => {
                // Two leaves 1, 2 point into 3, then the path 3 → … → n.
                let mut a = vec![(1, 3, 3), (2, 3, 3)];
                a.extend((3..n).map(|i| (i, i + 1, 3)));
                a
            }
            CoxeterType::E(n) => {
                // Path 1 → … → n−1, with vertex n pointing into 3.
                let mut a = path(n - 1);
                a.push((n, 3, 3));
                a
            }
            CoxeterType::F4 => vec![(1, 2, 3), (2, 3, 4), (3, 4, 3)],
            CoxeterType::H3 => vec![(1, 2, 3), (2, 3, 5)],
            CoxeterType::H4 => vec![(1, 2, 3), (2, 3, 3), (3, 4, 5)],
            CoxeterType::I2(m) => vec![(1, 2, m)],
            CoxeterType::AffineA(n) => {
                let mut a = path(n + 1);
                a.push((1, n + 1, 3));
                a
            }
            CoxeterType::AffineF4 => vec![(1, 2, 3), (2, 3, 3), (3, 4, 4), (4, 5, 3)],
        }
    }

    pub fn quiver(self) -> Quiver {
        let n = self.rank();
        let mut w = Matrix::zeros(n, n);
        for (u, v, m) in self.arrows() {
            let weight = chebyshev_value(m);
            w.set(u - 1, v - 1, -&weight);
            w.set(v - 1, u - 1, weight);
        }
        Quiver::new(w).expect("catalog quivers are skew-symmetric")
    }

    pub fn matrix(self) -> Matrix {
        self.quiver().weights().clone()
    }
}

pub fn catalog(name: &str) -> Result<Quiver, CatalogError> {
    Ok(CoxeterType::parse(name)?.quiver())
}

/// Integer skew-symmetrizable F4 whose image under Sk is the F4 quiver.
pub fn f4_integer() -> Matrix {
    Matrix::from_ints(&[&[0, -1, 0, 0], &[1, 0, -2, 0], &[0, 1, 0, -1], &[0, 0, 1, 0]])
}

/// Known names, for help output.
pub const NAMES: &[&str] = &["An", "Bn", "Cn", "Dn", "E6", "E7", "E8", "F4", "H3", "H4", "I2(m)", "A~n", "F~4"];
