//! Vectors of the flat neutral space of signature (+, +, -, -).
//!
//! Coordinates are always stored with respect to the orthonormal basis
//! `e1..e4`, where `<e1,e1> = <e2,e2> = 1` and `<e3,e3> = <e4,e4> = -1`.
//! Vectors written in the pseudo-orthonormal basis `{e1, e4, xi1, xi2}` are
//! converted on construction (see [`MVec4::from_null_basis`]).

use std::fmt;
use std::ops::{Add, AddAssign, Index, Mul, Neg, Sub};

use serde::{Deserialize, Serialize};

/// Default tolerance used by [`causal_character`], relative to the Euclidean
/// square norm of the vector.
pub const NULL_TOL: f64 = 1e-12;

/// Signature of the metric on the orthonormal basis.
pub const SIGNATURE: [f64; 4] = [1.0, 1.0, -1.0, -1.0];

#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct MVec4(pub [f64; 4]);

impl MVec4 {
    pub const ZERO: MVec4 = MVec4([0.0; 4]);

    pub const fn new(c1: f64, c2: f64, c3: f64, c4: f64) -> Self {
        MVec4([c1, c2, c3, c4])
    }

    /// The orthonormal basis vector `e_i`, `i` in `1..=4`.
    pub fn basis(i: usize) -> Self {
        assert!((1..=4).contains(&i), "basis index {i} out of range 1..=4");
        let mut c = [0.0; 4];
        c[i - 1] = 1.0;
        MVec4(c)
    }

    /// Builds `a e1 + b e4 + p xi1 + q xi2`.
    pub fn from_null_basis(a: f64, b: f64, p: f64, q: f64) -> Self {
        let s = std::f64::consts::FRAC_1_SQRT_2;
        MVec4([a, s * (p - q), s * (p + q), b])
    }

    /// Inverse of [`MVec4::from_null_basis`]: returns `(a, b, p, q)`.
    pub fn to_null_basis(self) -> (f64, f64, f64, f64) {
        let s = std::f64::consts::FRAC_1_SQRT_2;
        let [c1, c2, c3, c4] = self.0;
        (c1, c4, s * (c2 + c3), s * (c3 - c2))
    }

    pub fn coords(self) -> [f64; 4] {
        self.0
    }

    pub fn norm_sq(self) -> f64 {
        inner(self, self)
    }

    pub fn euclid_norm_sq(self) -> f64 {
        self.0.iter().map(|c| c * c).sum()
    }

    pub fn euclid_norm(self) -> f64 {
        self.euclid_norm_sq().sqrt()
    }

    pub fn max_abs(self) -> f64 {
        self.0.iter().fold(0.0_f64, |m, c| m.max(c.abs()))
    }

    pub fn is_finite(self) -> bool {
        self.0.iter().all(|c| c.is_finite())
    }
}

impl Index<usize> for MVec4 {
    type Output = f64;

    fn index(&self, i: usize) -> &f64 {
        &self.0[i]
    }
}

impl Add for MVec4 {
    type Output = MVec4;

    fn add(self, rhs: MVec4) -> MVec4 {
        MVec4(std::array::from_fn(|i| self.0[i] + rhs.0[i]))
    }
}

impl AddAssign for MVec4 {
    fn add_assign(&mut self, rhs: MVec4) {
        *self = *self + rhs;
    }
}

impl Sub for MVec4 {
    type Output = MVec4;

    fn sub(self, rhs: MVec4) -> MVec4 {
        MVec4(std::array::from_fn(|i| self.0[i] - rhs.0[i]))
    }
}

impl Neg for MVec4 {
    type Output = MVec4;

    fn neg(self) -> MVec4 {
        MVec4(self.0.map(|c| -c))
    }
}

impl Mul<MVec4> for f64 {
    type Output = MVec4;

    fn mul(self, rhs: MVec4) -> MVec4 {
        MVec4(rhs.0.map(|c| self * c))
    }
}

impl Mul<f64> for MVec4 {
    type Output = MVec4;

    fn mul(self, rhs: f64) -> MVec4 {
        rhs * self
    }
}

impl fmt::Display for MVec4 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let [a, b, c, d] = self.0;
        write!(f, "({a}, {b}, {c}, {d})")
    }
}

/// The neutral inner product `a1 b1 + a2 b2 - a3 b3 - a4 b4`.
#[inline]
pub fn inner(a: MVec4, b: MVec4) -> f64 {
    a.0[0] * b.0[0] + a.0[1] * b.0[1] - a.0[2] * b.0[2] - a.0[3] * b.0[3]
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Causal {
    Spacelike,
    Timelike,
    Lightlike,
    Zero,
}

impl fmt::Display for Causal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Causal::Spacelike => "spacelike",
            Causal::Timelike => "timelike",
            Causal::Lightlike => "lightlike",
            Causal::Zero => "zero",
        };
        f.write_str(s)
    }
}

/// Causal character with the default tolerance [`NULL_TOL`].
pub fn causal_character(v: MVec4) -> Causal {
    causal_character_tol(v, NULL_TOL)
}

/// Classifies `v` by the sign of `<v,v>`.
///
/// The threshold is `tol * |v|^2` (Euclidean), so the answer does not depend
/// on the overall scale of `v`. A vector whose Euclidean square norm is at or
/// below `tol` is the zero vector, never lightlike.
pub fn causal_character_tol(v: MVec4, tol: f64) -> Causal {
    let e2 = v.euclid_norm_sq();
    if e2 <= tol {
        return Causal::Zero;
    }
    let q = v.norm_sq();
    let thresh = tol * e2;
    if q > thresh {
        Causal::Spacelike
    } else if q < -thresh {
        Causal::Timelike
    } else {
        Causal::Lightlike
    }
}

/// The lightlike pair `xi1 = (e2 + e3)/sqrt 2`, `xi2 = (-e2 + e3)/sqrt 2`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct NullPair {
    pub xi1: MVec4,
    pub xi2: MVec4,
}

pub fn null_pair() -> NullPair {
    NullPair { xi1: MVec4::from_null_basis(0.0, 0.0, 1.0, 0.0), xi2: MVec4::from_null_basis(0.0, 0.0, 0.0, 1.0) }
}

/// Gram matrix `<v_i, v_j>` of a list of vectors.
pub fn gram<const N: usize>(vs: [MVec4; N]) -> [[f64; N]; N] {
    std::array::from_fn(|i| std::array::from_fn(|j| inner(vs[i], vs[j])))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    const S: f64 = std::f64::consts::FRAC_1_SQRT_2;

    #[test]
    fn basis_inner_products() {
        assert_eq!(inner(MVec4::basis(1), MVec4::basis(1)), 1.0);
        let g = gram([1, 2, 3, 4].map(MVec4::basis));
        for (i, row) in g.iter().enumerate() {
            for (j, &x) in row.iter().enumerate() {
                let want = if i == j { SIGNATURE[i] } else { 0.0 };
                assert_eq!(x, want);
            }
        }
    }

    #[test]
    fn null_pair_values() {
        let NullPair { xi1, xi2 } = null_pair();
        assert_eq!(xi1, MVec4::new(0.0, S, S, 0.0));
        assert_eq!(xi2, MVec4::new(0.0, -S, S, 0.0));
        assert!(inner(xi1, xi1).abs() < 1e-16);
        assert!(inner(xi2, xi2).abs() < 1e-16);
        assert!((inner(xi1, xi2) + 1.0).abs() < 1e-15);
        assert!((inner(xi1 + xi2, xi1 + xi2) + 2.0).abs() < 1e-15);
    }

    #[test]
    fn pseudo_orthonormal_gram() {
        let NullPair { xi1, xi2 } = null_pair();
        let g = gram([MVec4::basis(1), MVec4::basis(4), xi1, xi2]);
        let want = [[1.0, 0.0, 0.0, 0.0], [0.0, -1.0, 0.0, 0.0], [0.0, 0.0, 0.0, -1.0], [0.0, 0.0, -1.0, 0.0]];
        for i in 0..4 {
            for j in 0..4 {
                assert!((g[i][j] - want[i][j]).abs() < 1e-15, "({i},{j}) = {}", g[i][j]);
            }
        }
    }

    #[test]
    fn causal_examples() {
        assert_eq!(causal_character(MVec4::basis(1)), Causal::Spacelike);
        assert_eq!(causal_character(MVec4::basis(3)), Causal::Timelike);
        assert_eq!(causal_character(null_pair().xi1), Causal::Lightlike);
        assert_eq!(causal_character(MVec4::ZERO), Causal::Zero);
        // scale-free: a tiny lightlike vector is still lightlike
        assert_eq!(causal_character(1e-3 * null_pair().xi2), Causal::Lightlike);
    }

    #[test]
    fn null_basis_round_trip() {
        let v = MVec4::from_null_basis(0.3, -1.2, 2.5, 0.7);
        let (a, b, p, q) = v.to_null_basis();
        assert!((a - 0.3).abs() < 1e-15);
        assert!((b + 1.2).abs() < 1e-15);
        assert!((p - 2.5).abs() < 1e-15);
        assert!((q - 0.7).abs() < 1e-15);
        // a^2 - b^2 - 2pq
        assert!((v.norm_sq() - (0.09 - 1.44 - 2.0 * 2.5 * 0.7)).abs() < 1e-14);
    }

    fn vec4() -> impl Strategy<Value = MVec4> {
        prop::array::uniform4(-10.0f64..10.0).prop_map(MVec4)
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(1000))]

        #[test]
        fn inner_symmetric_bilinear(a in vec4(), b in vec4(), c in vec4(), s in -5.0f64..5.0) {
            let scale = a.euclid_norm() * b.euclid_norm() + 1.0;
            prop_assert!((inner(a, b) - inner(b, a)).abs() <= 1e-14 * scale);
            let lhs = inner(s * a + c, b);
            let rhs = s * inner(a, b) + inner(c, b);
            let scale = (s.abs() * a.euclid_norm() + c.euclid_norm()) * b.euclid_norm() + 1.0;
            prop_assert!((lhs - rhs).abs() <= 1e-14 * scale);
            prop_assert_eq!(inner(a, MVec4::ZERO), 0.0);
        }
    }
}
