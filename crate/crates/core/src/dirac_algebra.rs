//! Dirac matrices in 2+1 dimensions, the eigenprojections `Π±(ξ)` of the
//! symbol `ξ·α`, the null-form symbol `Π±₂(η−ξ) β Π±₁(η)` and angles.

use std::f64::consts::PI;
use std::ops::{Add, Mul, Neg, Sub};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);
const I: Complex64 = Complex64::new(0.0, 1.0);

/// Complex 2×2 matrix, row-major.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Mat2(pub [[Complex64; 2]; 2]);

impl Mat2 {
    pub const ZERO: Mat2 = Mat2([[ZERO, ZERO], [ZERO, ZERO]]);
    pub const IDENTITY: Mat2 = Mat2([[ONE, ZERO], [ZERO, ONE]]);

    pub fn new(a: Complex64, b: Complex64, c: Complex64, d: Complex64) -> Self {
        Mat2([[a, b], [c, d]])
    }

    pub fn scale(self, k: Complex64) -> Self {
        let m = self.0;
        Mat2([[m[0][0] * k, m[0][1] * k], [m[1][0] * k, m[1][1] * k]])
    }

    pub fn scale_re(self, k: f64) -> Self {
        self.scale(Complex64::new(k, 0.0))
    }

    pub fn adjoint(self) -> Self {
        let m = self.0;
        Mat2([[m[0][0].conj(), m[1][0].conj()], [m[0][1].conj(), m[1][1].conj()]])
    }

    pub fn det(self) -> Complex64 {
        let m = self.0;
        m[0][0] * m[1][1] - m[0][1] * m[1][0]
    }

    pub fn frobenius_sq(self) -> f64 {
        self.0.iter().flatten().map(|z| z.norm_sqr()).sum()
    }

    /// Largest entrywise modulus.
    pub fn max_abs(self) -> f64 {
        self.0.iter().flatten().fold(0.0, |m, z| m.max(z.norm()))
    }

    pub fn is_hermitian(self, tol: f64) -> bool {
        (self - self.adjoint()).max_abs() <= tol
    }

    /// Largest singular value from `σ² = (‖A‖_F² ± √(‖A‖_F⁴ − 4|det A|²))/2`.
    pub fn op_norm(self) -> f64 {
        let f = self.frobenius_sq();
        let d = self.det().norm_sqr();
        let disc = (f * f - 4.0 * d).max(0.0).sqrt();
        ((f + disc) / 2.0).sqrt()
    }

    pub fn apply(self, v: [Complex64; 2]) -> [Complex64; 2] {
        let m = self.0;
        [
            m[0][0] * v[0] + m[0][1] * v[1],
            m[1][0] * v[0] + m[1][1] * v[1],
        ]
    }

    /// Anticommutator `AB + BA`.
    pub fn anticommutator(self, other: Mat2) -> Mat2 {
        self * other + other * self
    }
}

impl Add for Mat2 {
    type Output = Mat2;
    fn add(self, rhs: Mat2) -> Mat2 {
        let (a, b) = (self.0, rhs.0);
        Mat2([
            [a[0][0] + b[0][0], a[0][1] + b[0][1]],
            [a[1][0] + b[1][0], a[1][1] + b[1][1]],
        ])
    }
}

impl Sub for Mat2 {
    type Output = Mat2;
    fn sub(self, rhs: Mat2) -> Mat2 {
        self + (-rhs)
    }
}

impl Neg for Mat2 {
    type Output = Mat2;
    fn neg(self) -> Mat2 {
        self.scale_re(-1.0)
    }
}

impl Mul for Mat2 {
    type Output = Mat2;
    fn mul(self, rhs: Mat2) -> Mat2 {
        let (a, b) = (self.0, rhs.0);
        Mat2([
            [
                a[0][0] * b[0][0] + a[0][1] * b[1][0],
                a[0][0] * b[0][1] + a[0][1] * b[1][1],
            ],
            [
                a[1][0] * b[0][0] + a[1][1] * b[1][0],
                a[1][0] * b[0][1] + a[1][1] * b[1][1],
            ],
        ])
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct DiracMatrices {
    pub alpha1: Mat2,
    pub alpha2: Mat2,
    pub beta: Mat2,
}

/// `α¹ = [[0,1],[1,0]]`, `α² = [[0,−i],[i,0]]`, `β = [[1,0],[0,−1]]`.
pub fn dirac_matrices() -> DiracMatrices {
    DiracMatrices {
        alpha1: Mat2::new(ZERO, ONE, ONE, ZERO),
        alpha2: Mat2::new(ZERO, -I, I, ZERO),
        beta: beta(),
    }
}

pub fn beta() -> Mat2 {
    Mat2::new(ONE, ZERO, ZERO, -ONE)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Sign {
    Plus,
    Minus,
}

impl Sign {
    pub fn value(self) -> f64 {
        match self {
            Sign::Plus => 1.0,
            Sign::Minus => -1.0,
        }
    }

    pub fn flip(self) -> Sign {
        match self {
            Sign::Plus => Sign::Minus,
            Sign::Minus => Sign::Plus,
        }
    }

    pub fn symbol(self) -> char {
        match self {
            Sign::Plus => '+',
            Sign::Minus => '-',
        }
    }

    pub const BOTH: [Sign; 2] = [Sign::Plus, Sign::Minus];
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct SignPair {
    pub s1: Sign,
    pub s2: Sign,
}

impl SignPair {
    pub const fn new(s1: Sign, s2: Sign) -> Self {
        Self { s1, s2 }
    }

    pub const ALL: [SignPair; 4] = [
        SignPair::new(Sign::Plus, Sign::Plus),
        SignPair::new(Sign::Plus, Sign::Minus),
        SignPair::new(Sign::Minus, Sign::Plus),
        SignPair::new(Sign::Minus, Sign::Minus),
    ];

    pub fn label(self) -> String {
        format!("({},{})", self.s1.symbol(), self.s2.symbol())
    }
}

fn norm2(v: [f64; 2]) -> f64 {
    v[0].hypot(v[1])
}

/// `ξ·α = ξ₁α¹ + ξ₂α²`.
pub fn dirac_symbol(xi: [f64; 2]) -> Mat2 {
    let d = dirac_matrices();
    d.alpha1.scale_re(xi[0]) + d.alpha2.scale_re(xi[1])
}

/// `Π±(ξ) = ½(I ± (ξ/|ξ|)·α)`, with `Π±(0) = ½I`.
pub fn projection(xi: [f64; 2], sign: Sign) -> Mat2 {
    let r = norm2(xi);
    if r == 0.0 {
        return Mat2::IDENTITY.scale_re(0.5);
    }
    let unit = dirac_symbol([xi[0] / r, xi[1] / r]);
    (Mat2::IDENTITY + unit.scale_re(sign.value())).scale_re(0.5)
}

/// Angle between nonzero vectors, in `[0, π]`.
pub fn angle(u: [f64; 2], v: [f64; 2]) -> Result<f64> {
    let (nu, nv) = (norm2(u), norm2(v));
    if nu == 0.0 || nv == 0.0 {
        return Err(Error::Domain("angle of a zero vector".into()));
    }
    let c = (u[0] * v[0] + u[1] * v[1]) / (nu * nv);
    Ok(c.clamp(-1.0, 1.0).acos())
}

/// Angle `∠(±₁η, ±₂(η−ξ))` entering the null-form bound.
pub fn nullform_angle(eta: [f64; 2], xi: [f64; 2], signs: SignPair) -> Result<f64> {
    let (a, b) = (signs.s1.value(), signs.s2.value());
    angle(
        [a * eta[0], a * eta[1]],
        [b * (eta[0] - xi[0]), b * (eta[1] - xi[1])],
    )
}

/// `Π±₂(η−ξ) β Π±₁(η)`; vanishes when `±₁η` and `±₂(η−ξ)` point the same way.
pub fn nullform_symbol(eta: [f64; 2], xi: [f64; 2], signs: SignPair) -> Result<Mat2> {
    let diff = [eta[0] - xi[0], eta[1] - xi[1]];
    if norm2(eta) == 0.0 || norm2(diff) == 0.0 {
        return Err(Error::Domain("null-form symbol needs η ≠ 0 and η − ξ ≠ 0".into()));
    }
    Ok(projection(diff, signs.s2) * beta() * projection(eta, signs.s1))
}

/// `sin(θ/2)`: exact operator norm of the null-form symbol at angle `θ`.
pub fn nullform_norm_closed_form(theta: f64) -> f64 {
    (theta / 2.0).sin()
}

/// Returns `π` as the worst-case angle; handy for documentation of bounds.
pub const MAX_ANGLE: f64 = PI;

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn close(a: Mat2, b: Mat2, tol: f64) -> bool {
        (a - b).max_abs() <= tol
    }

    #[test]
    fn clifford_relations_hold_exactly() {
        let d = dirac_matrices();
        let id = Mat2::IDENTITY;
        assert_eq!(d.beta * d.beta, id);
        assert_eq!(d.alpha1 * d.alpha1, id);
        assert_eq!(d.alpha2 * d.alpha2, id);
        assert_eq!(d.alpha1.anticommutator(d.beta), Mat2::ZERO);
        assert_eq!(d.alpha2.anticommutator(d.beta), Mat2::ZERO);
        assert_eq!(d.alpha1.anticommutator(d.alpha2), Mat2::ZERO);
        for m in [d.alpha1, d.alpha2, d.beta] {
            assert!(m.is_hermitian(0.0));
        }
    }

    #[test]
    fn projection_examples() {
        let p = projection([1.0, 0.0], Sign::Plus);
        let half = Complex64::new(0.5, 0.0);
        assert_eq!(p, Mat2::new(half, half, half, half));

        let m = projection([0.0, 2.0], Sign::Minus);
        let expected = Mat2::new(half, Complex64::new(0.0, 0.5), Complex64::new(0.0, -0.5), half);
        assert!(close(m, expected, 1e-15));

        assert_eq!(projection([0.0, 0.0], Sign::Plus), Mat2::IDENTITY.scale_re(0.5));
    }

    #[test]
    fn projection_identities_on_random_frequencies() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let b = beta();
        for _ in 0..10_000 {
            let xi = [rng.random_range(-50.0..50.0), rng.random_range(-50.0..50.0)];
            let (p, m) = (projection(xi, Sign::Plus), projection(xi, Sign::Minus));
            assert!(close(p * p, p, 1e-12));
            assert!(close(m * m, m, 1e-12));
            assert!(close(p + m, Mat2::IDENTITY, 1e-12));
            assert!(close(p * m, Mat2::ZERO, 1e-12));
            assert!(close(p * b, b * m, 1e-12));
            assert!(p.is_hermitian(1e-12) && m.is_hermitian(1e-12));
            let r = xi[0].hypot(xi[1]);
            assert!(close(dirac_symbol(xi), (p - m).scale_re(r), 1e-12));
        }
    }

    #[test]
    fn dirac_symbol_eigenvalues() {
        assert_eq!(dirac_symbol([0.0, 0.0]), Mat2::ZERO);
        assert_eq!(dirac_symbol([1.0, 0.0]), dirac_matrices().alpha1);
        // Hermitian, traceless: eigenvalues ±√(−det) = ±|ξ|.
        let m = dirac_symbol([3.0, 4.0]);
        let tr = m.0[0][0] + m.0[1][1];
        assert!(tr.norm() < 1e-15);
        assert!(((-m.det()).re.sqrt() - 5.0).abs() < 1e-14);
        assert!((m.op_norm() - 5.0).abs() < 1e-14);
    }

    #[test]
    fn angle_examples_and_domain() {
        assert_eq!(angle([1.0, 0.0], [1.0, 0.0]).unwrap(), 0.0);
        assert!((angle([1.0, 0.0], [0.0, 1.0]).unwrap() - PI / 2.0).abs() < 1e-15);
        assert!((angle([1.0, 0.0], [-1.0, 1.0]).unwrap() - 3.0 * PI / 4.0).abs() < 1e-15);
        assert!(angle([0.0, 0.0], [1.0, 0.0]).is_err());
        // Clamping keeps nearly parallel inputs in range.
        assert!(angle([1.0, 1e-9], [1.0, 1e-9]).unwrap().is_finite());
    }

    #[test]
    fn nullform_examples() {
        let pp = SignPair::new(Sign::Plus, Sign::Plus);
        let m = nullform_symbol([1.0, 0.0], [0.0, 0.0], pp).unwrap();
        assert!(m.max_abs() < 1e-15);
        let m = nullform_symbol([1.0, 0.0], [2.0, 0.0], pp).unwrap();
        assert!(m.op_norm() <= 1.0 + 1e-15);
        assert!((nullform_angle([1.0, 0.0], [2.0, 0.0], pp).unwrap() - PI).abs() < 1e-15);
        assert!(nullform_symbol([0.0, 0.0], [1.0, 0.0], pp).is_err());
        assert!(nullform_symbol([1.0, 0.0], [1.0, 0.0], pp).is_err());
        let pm = SignPair::new(Sign::Plus, Sign::Minus);
        let m = nullform_symbol([1.0, 0.0], [1.0, -1.0], pm).unwrap();
        let theta = nullform_angle([1.0, 0.0], [1.0, -1.0], pm).unwrap();
        assert!(m.op_norm() / theta < 0.5 + 1e-12);
    }

    #[test]
    fn nullform_norm_is_half_angle_sine() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for _ in 0..2000 {
            let eta = [rng.random_range(-9.0..9.0), rng.random_range(-9.0..9.0)];
            let xi = [rng.random_range(-9.0..9.0), rng.random_range(-9.0..9.0)];
            for signs in SignPair::ALL {
                let m = nullform_symbol(eta, xi, signs).unwrap();
                let theta = nullform_angle(eta, xi, signs).unwrap();
                assert!((m.op_norm() - nullform_norm_closed_form(theta)).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn op_norm_matches_power_iteration() {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        for _ in 0..200 {
            let mut z = || Complex64::new(rng.random_range(-2.0..2.0), rng.random_range(-2.0..2.0));
            let a = Mat2::new(z(), z(), z(), z());
            let ata = a.adjoint() * a;
            let mut v = [Complex64::new(1.0, 0.3), Complex64::new(-0.2, 0.9)];
            for _ in 0..500 {
                let w = ata.apply(v);
                let n = (w[0].norm_sqr() + w[1].norm_sqr()).sqrt();
                v = [w[0] / n, w[1] / n];
            }
            let w = a.apply(v);
            let sigma = (w[0].norm_sqr() + w[1].norm_sqr()).sqrt();
            assert!((sigma - a.op_norm()).abs() < 1e-9 * (1.0 + sigma));
        }
    }
}
