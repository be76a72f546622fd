//! Monopole spherical harmonics `Y_{jmμ}(θ, φ)` written through Jacobi
//! polynomials with (generally negative) parameters:
//!
//! ```text
//! Y_{jmμ} = N (1-x)^{-(m+μ)/2} (1+x)^{-(m-μ)/2} P_{j+m}^{(-m-μ, -m+μ)}(x) e^{i(m+μ)φ}
//! N       = 2^m sqrt((2j+1)(j-m)!(j+m)! / (4π (j-μ)!(j+μ)!))
//! ```
//!
//! with `x = cos θ` and `μ = eg` the charge-monopole product.
//!
//! This normalization is exactly unit on the sphere, and the functions agree
//! identically with `sqrt((2j+1)/4π) d^j_{m,-μ}(θ) e^{i(m+μ)φ}`; for `μ = 0`
//! they are the Condon-Shortley spherical harmonics.

use std::f64::consts::PI;

use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::ToPrimitive;

use crate::error::{domain, Result};
use crate::exact::{factorial_q, generalized_binomial, HalfInt, SignedSqrtRational};
use crate::quadrature::SphereGrid;

/// A point strictly inside the open sphere chart: `0 < θ < π`, `0 <= φ < 2π`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SphericalPoint {
    theta: f64,
    phi: f64,
}

impl SphericalPoint {
    /// Fails at the poles; `phi` is reduced into `[0, 2π)`.
    pub fn new(theta: f64, phi: f64) -> Result<Self> {
        if !(theta > 0.0 && theta < PI) {
            return domain(format!(
                "theta={theta} is not strictly between 0 and π (poles are excluded)"
            ));
        }
        if !phi.is_finite() {
            return domain(format!("phi={phi} is not finite"));
        }
        Ok(Self::new_unchecked(theta, phi))
    }

    pub(crate) fn new_unchecked(theta: f64, phi: f64) -> Self {
        let mut phi = phi.rem_euclid(2.0 * PI);
        if phi >= 2.0 * PI {
            phi = 0.0;
        }
        SphericalPoint { theta, phi }
    }

    pub fn theta(&self) -> f64 {
        self.theta
    }

    pub fn phi(&self) -> f64 {
        self.phi
    }

    /// Point reflection `θ -> π - θ`, `φ -> φ + π`.
    pub fn reflected(&self) -> Self {
        Self::new_unchecked(PI - self.theta, self.phi + PI)
    }

    /// Unit vector.
    pub fn unit_vector(&self) -> [f64; 3] {
        let (st, ct) = self.theta.sin_cos();
        let (sp, cp) = self.phi.sin_cos();
        [st * cp, st * sp, ct]
    }
}

/// Validated `(j, m, μ)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct MonopoleHarmonicIndex {
    j: HalfInt,
    m: HalfInt,
    mu: HalfInt,
}

impl MonopoleHarmonicIndex {
    pub fn new(j: HalfInt, m: HalfInt, mu: HalfInt) -> Result<Self> {
        if m.abs() > j {
            return domain(format!("|m| exceeds j (j={j}, m={m})"));
        }
        if mu.abs() > j {
            return domain(format!("|mu| exceeds j (j={j}, mu={mu})"));
        }
        if !(j - m).is_integer() {
            return domain(format!("j - m is not an integer (j={j}, m={m})"));
        }
        if !(j - mu).is_integer() {
            return domain(format!("j - mu is not an integer (j={j}, mu={mu})"));
        }
        Ok(MonopoleHarmonicIndex { j, m, mu })
    }

    pub fn from_twice(j: i64, m: i64, mu: i64) -> Result<Self> {
        Self::new(
            HalfInt::from_twice(j),
            HalfInt::from_twice(m),
            HalfInt::from_twice(mu),
        )
    }

    pub fn j(&self) -> HalfInt {
        self.j
    }

    pub fn m(&self) -> HalfInt {
        self.m
    }

    pub fn mu(&self) -> HalfInt {
        self.mu
    }

    /// Same `(j, m)` with `μ -> -μ`.
    pub fn charge_conjugate(&self) -> Self {
        MonopoleHarmonicIndex {
            mu: -self.mu,
            ..*self
        }
    }

    /// All valid indices with `|μ| <= j <= j_max`, ordered by `j` then `m`.
    pub fn all_up_to(j_max: HalfInt, mu: HalfInt) -> Vec<Self> {
        let mut out = Vec::new();
        let mut j = mu.abs();
        while j <= j_max {
            for m in j.projections() {
                out.push(MonopoleHarmonicIndex { j, m, mu });
            }
            j = j + HalfInt::ONE;
        }
        out
    }
}

impl std::fmt::Display for MonopoleHarmonicIndex {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "(j={}, m={}, mu={})", self.j, self.m, self.mu)
    }
}

fn q_half(h: HalfInt) -> BigRational {
    BigRational::new(BigInt::from(h.twice()), BigInt::from(2))
}

/// `P_n^{(α,β)}(x)` by the finite sum
/// `Σ_s C(n+α, n-s) C(n+β, s) ((x-1)/2)^s ((x+1)/2)^{n-s}`
/// with exact generalized binomials. Valid for any rational `α`, `β`.
pub fn jacobi_polynomial(n: u32, alpha: &BigRational, beta: &BigRational, x: f64) -> f64 {
    jacobi_coefficients(n, alpha, beta)
        .iter()
        .enumerate()
        .map(|(s, c)| {
            c * ((x - 1.0) / 2.0).powi(s as i32) * ((x + 1.0) / 2.0).powi((n - s as u32) as i32)
        })
        .sum()
}

fn jacobi_coefficients(n: u32, alpha: &BigRational, beta: &BigRational) -> Vec<f64> {
    let nn = BigRational::from_integer(BigInt::from(n));
    let upper_a = &nn + alpha;
    let upper_b = &nn + beta;
    (0..=n)
        .map(|s| {
            let c = generalized_binomial(&upper_a, (n - s) as u64)
                * generalized_binomial(&upper_b, s as u64);
            c.to_f64().expect("finite binomial product")
        })
        .collect()
}

/// The exact square of `N / 2^m`, times `4π`:
/// `(2j+1)(j-m)!(j+m)! / ((j-μ)!(j+μ)!)`.
fn normalization_radicand(idx: &MonopoleHarmonicIndex) -> Result<BigRational> {
    let f = |h: HalfInt| match h.to_int() {
        Some(n) => factorial_q(n),
        None => domain(format!("factorial of non-integer {h}")),
    };
    let (j, m, mu) = (idx.j, idx.m, idx.mu);
    let dim = BigRational::from_integer(BigInt::from(j.twice() + 1));
    Ok(dim * f(j - m)? * f(j + m)? / (f(j - mu)? * f(j + mu)?))
}

/// `N` of the harmonic, from exact factorials; `2^m` for half-integer `m` is
/// the real power.
pub fn normalization_constant(idx: &MonopoleHarmonicIndex) -> Result<f64> {
    let root = SignedSqrtRational::new(1, normalization_radicand(idx)?).to_f64();
    Ok(2f64.powf(idx.m.to_f64()) * root / (4.0 * PI).sqrt())
}

/// A harmonic prepared for repeated evaluation.
#[derive(Clone, Debug)]
pub struct MonopoleHarmonic {
    index: MonopoleHarmonicIndex,
    norm: f64,
    degree: u32,
    coefficients: Vec<f64>,
}

impl MonopoleHarmonic {
    pub fn new(index: MonopoleHarmonicIndex) -> Result<Self> {
        let degree = (index.j + index.m)
            .to_int()
            .expect("j + m is an integer for a valid index") as u32;
        let alpha = q_half(-index.m - index.mu);
        let beta = q_half(-index.m + index.mu);
        Ok(MonopoleHarmonic {
            index,
            norm: normalization_constant(&index)?,
            degree,
            coefficients: jacobi_coefficients(degree, &alpha, &beta),
        })
    }

    pub fn index(&self) -> MonopoleHarmonicIndex {
        self.index
    }

    pub fn normalization(&self) -> f64 {
        self.norm
    }

    pub fn eval(&self, p: SphericalPoint) -> Complex64 {
        let (half_sin, half_cos) = (p.theta / 2.0).sin_cos();
        // 1 - x = 2 sin²(θ/2), 1 + x = 2 cos²(θ/2)
        let one_minus = 2.0 * half_sin * half_sin;
        let one_plus = 2.0 * half_cos * half_cos;
        let (lower, upper) = (-half_sin * half_sin, half_cos * half_cos);
        let n = self.degree;
        let jacobi: f64 = self
            .coefficients
            .iter()
            .enumerate()
            .map(|(s, c)| c * lower.powi(s as i32) * upper.powi((n - s as u32) as i32))
            .sum();
        let (m, mu) = (self.index.m.to_f64(), self.index.mu.to_f64());
        let envelope = (-(m + mu) / 2.0 * one_minus.ln() - (m - mu) / 2.0 * one_plus.ln()).exp();
        let azimuth = Complex64::from_polar(1.0, (m + mu) * p.phi);
        azimuth * (self.norm * envelope * jacobi)
    }
}

/// `Y_{jmμ}(θ, φ)`.
pub fn monopole_harmonic(idx: &MonopoleHarmonicIndex, p: SphericalPoint) -> Result<Complex64> {
    Ok(MonopoleHarmonic::new(*idx)?.eval(p))
}

/// Result of applying the point reflection to a harmonic.
#[derive(Clone, Copy, Debug)]
pub struct ParityImage {
    pub index: MonopoleHarmonicIndex,
    pub point: SphericalPoint,
    /// `Y_{j m -μ}(reflected) / Y_{j m μ}(p)`. Carries `e^{-2iμφ}`.
    pub ratio: Complex64,
    /// `ratio · e^{2iμφ}`: the ratio with the azimuthal gauge factor of the
    /// reflection matrix removed. Independent of the point.
    pub phase: Complex64,
}

/// Reflects `p`, flips the sign of `μ`, and reports how the harmonic maps.
pub fn parity_map(idx: &MonopoleHarmonicIndex, p: SphericalPoint) -> Result<ParityImage> {
    let image_index = idx.charge_conjugate();
    let reflected = p.reflected();
    let before = monopole_harmonic(idx, p)?;
    let after = monopole_harmonic(&image_index, reflected)?;
    if before.norm() == 0.0 {
        return domain(format!(
            "harmonic {idx} vanishes at theta={}, phi={}",
            p.theta, p.phi
        ));
    }
    let ratio = after / before;
    let gauge = Complex64::from_polar(1.0, 2.0 * idx.mu.to_f64() * p.phi);
    Ok(ParityImage {
        index: image_index,
        point: reflected,
        ratio,
        phase: ratio * gauge,
    })
}

/// Summary of the Gram matrix `<Y_a, Y_b>` over all states with `j <= j_max`.
#[derive(Clone, Debug, PartialEq)]
pub struct GramReport {
    pub j_max: HalfInt,
    pub mu: HalfInt,
    pub states: usize,
    pub max_off_diagonal: f64,
    pub diagonal_min: f64,
    pub diagonal_max: f64,
    /// Largest `|<Y_a, Y_a> - 1|`.
    pub max_diagonal_defect: f64,
}

impl GramReport {
    pub fn diagonal_spread(&self) -> f64 {
        self.diagonal_max - self.diagonal_min
    }
}

pub fn gram_check(j_max: HalfInt, mu: HalfInt, grid: &SphereGrid) -> Result<GramReport> {
    let states = MonopoleHarmonicIndex::all_up_to(j_max, mu);
    if states.is_empty() {
        return domain(format!("no states with |mu|={} <= j <= {j_max}", mu.abs()));
    }
    let samples: Vec<Vec<Complex64>> = states
        .iter()
        .map(|idx| {
            let h = MonopoleHarmonic::new(*idx)?;
            Ok(grid.sample(|p| h.eval(p)))
        })
        .collect::<Result<_>>()?;
    let mut report = GramReport {
        j_max,
        mu,
        states: states.len(),
        max_off_diagonal: 0.0,
        diagonal_min: f64::INFINITY,
        diagonal_max: f64::NEG_INFINITY,
        max_diagonal_defect: 0.0,
    };
    for (a, fa) in samples.iter().enumerate() {
        for (b, fb) in samples.iter().enumerate().skip(a) {
            let g = grid.inner(fa, fb)?;
            if a == b {
                report.diagonal_min = report.diagonal_min.min(g.re);
                report.diagonal_max = report.diagonal_max.max(g.re);
                report.max_diagonal_defect = report.max_diagonal_defect.max((g - 1.0).norm());
            } else {
                report.max_off_diagonal = report.max_off_diagonal.max(g.norm());
            }
        }
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    fn idx(j: i64, m: i64, mu: i64) -> MonopoleHarmonicIndex {
        MonopoleHarmonicIndex::from_twice(j, m, mu).unwrap()
    }

    #[test]
    fn point_validation() {
        assert!(SphericalPoint::new(0.0, 0.0).is_err());
        assert!(SphericalPoint::new(PI, 0.0).is_err());
        assert!(SphericalPoint::new(1.0, f64::NAN).is_err());
        let p = SphericalPoint::new(1.0, -0.5).unwrap();
        assert!((p.phi() - (2.0 * PI - 0.5)).abs() < 1e-15);
        let r = SphericalPoint::new(PI / 2.0, 0.0).unwrap().reflected();
        assert!((r.theta() - PI / 2.0).abs() < 1e-15 && (r.phi() - PI).abs() < 1e-15);
    }

    #[test]
    fn index_validation() {
        assert!(MonopoleHarmonicIndex::from_twice(1, 3, 1).is_err());
        assert!(MonopoleHarmonicIndex::from_twice(0, 0, 1).is_err());
        assert!(MonopoleHarmonicIndex::from_twice(2, 1, 0).is_err());
        assert!(MonopoleHarmonicIndex::from_twice(2, 0, 1).is_err());
        let all = MonopoleHarmonicIndex::all_up_to(HalfInt::from_twice(9), HalfInt::HALF);
        assert_eq!(all.len(), 2 + 4 + 6 + 8 + 10);
    }

    #[test]
    fn jacobi_low_degrees() {
        let (a, b) = (q(-3, 2), q(5, 7));
        for x in [-0.9, -0.2, 0.0, 0.4, 1.0] {
            assert_eq!(jacobi_polynomial(0, &a, &b, x), 1.0);
            let closed = (-0.5) + (-3.0 / 2.0 + 5.0 / 7.0 + 2.0) * (x - 1.0) / 2.0;
            assert!((jacobi_polynomial(1, &a, &b, x) - closed).abs() < 1e-15);
        }
    }

    #[test]
    fn normalization_values() {
        let n0 = normalization_constant(&idx(0, 0, 0)).unwrap();
        assert!((n0 - 1.0 / (4.0 * PI).sqrt()).abs() < 1e-16);
        // N for (1, 0, 0): 2^0 sqrt(3 * 1 * 1 / (4π))
        let n1 = normalization_constant(&idx(2, 0, 0)).unwrap();
        assert!((n1 - (3.0 / (4.0 * PI)).sqrt()).abs() < 1e-15);
        // (1/2, 1/2, 1/2): 2^{1/2} sqrt(2 * 0! * 1! / (4π 0! 1!)) = sqrt(4 / 4π)
        let nh = normalization_constant(&idx(1, 1, 1)).unwrap();
        assert!((nh - (1.0 / PI).sqrt()).abs() < 1e-15);
    }

    #[test]
    fn constant_and_equatorial_values() {
        let p = SphericalPoint::new(1.0, 0.5).unwrap();
        let y00 = monopole_harmonic(&idx(0, 0, 0), p).unwrap();
        assert!((y00 - Complex64::new(1.0 / (4.0 * PI).sqrt(), 0.0)).norm() < 1e-16);
        let eq = SphericalPoint::new(PI / 2.0, 0.3).unwrap();
        assert!(monopole_harmonic(&idx(2, 0, 0), eq).unwrap().norm() < 1e-15);
    }

    #[test]
    fn parity_of_y10() {
        let p = SphericalPoint::new(0.8, 1.9).unwrap();
        let img = parity_map(&idx(2, 0, 0), p).unwrap();
        assert!((img.ratio + 1.0).norm() < 1e-12);
        assert!((img.phase + 1.0).norm() < 1e-12);
        assert_eq!(img.index, idx(2, 0, 0));
    }
}
