//! Non-abelian side of the monopole: the Wu-Yang potential, the Dirac
//! potential, the gauge matrices `S` and `S_p` that abelianize one into the
//! other, their ratio `R = S_p S⁻¹`, and the redefined parity `P' = R P`.
//!
//! Conventions (coupling `e = 1` unless passed explicitly):
//! * su(2) fields are `A_k = A_k^a σ_a / 2`.
//! * A gauge matrix field `U` acts from the right:
//!   `A_k -> U⁻¹ A_k U + (i/e) U⁻¹ ∂_k U`. With this action `S` diagonalizes
//!   the Wu-Yang hedgehog (`S⁻¹ (σ·r̂) S = σ₃`).
//! * The Dirac potential is `(r × n) / (|r| (|r| - r·n))`, singular on the
//!   half-line along `n`. `S` is multivalued at the south pole, so the
//!   abelianized potential has its string along `n = -ẑ`.

use std::f64::consts::PI;
use std::ops::{Add, Mul, Neg, Sub};

use num_complex::Complex64;

use crate::error::{domain, Error, Result};
use crate::harmonics::{MonopoleHarmonic, MonopoleHarmonicIndex, SphericalPoint};
use crate::quadrature::SphereGrid;
use crate::rng::SplitMix64;
use crate::HalfInt;

/// Half-angle of the cone around a Dirac string inside which potentials are
/// not evaluated.
pub const STRING_EXCLUSION_ANGLE: f64 = 1e-6;

/// Generator normalization: `T_a = GENERATOR_SCALE * σ_a`.
pub const GENERATOR_SCALE: f64 = 0.5;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);
const I: Complex64 = Complex64::new(0.0, 1.0);

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Vector3 {
    pub x: f64,
    pub y: f64,
    pub z: f64,
}

impl Vector3 {
    pub const fn new(x: f64, y: f64, z: f64) -> Self {
        Vector3 { x, y, z }
    }

    pub const fn unit_z() -> Self {
        Vector3::new(0.0, 0.0, 1.0)
    }

    pub fn from_point(p: SphericalPoint, radius: f64) -> Self {
        let [x, y, z] = p.unit_vector();
        Vector3::new(radius * x, radius * y, radius * z)
    }

    pub fn to_array(self) -> [f64; 3] {
        [self.x, self.y, self.z]
    }

    pub fn dot(self, o: Self) -> f64 {
        self.x * o.x + self.y * o.y + self.z * o.z
    }

    pub fn cross(self, o: Self) -> Self {
        Vector3::new(
            self.y * o.z - self.z * o.y,
            self.z * o.x - self.x * o.z,
            self.x * o.y - self.y * o.x,
        )
    }

    pub fn norm(self) -> f64 {
        self.dot(self).sqrt()
    }

    pub fn scale(self, s: f64) -> Self {
        Vector3::new(self.x * s, self.y * s, self.z * s)
    }

    /// `(r, θ, φ)` with `φ` in `[0, 2π)`.
    pub fn spherical(self) -> (f64, f64, f64) {
        let r = self.norm();
        let theta = (self.x.hypot(self.y)).atan2(self.z);
        let phi = self.y.atan2(self.x).rem_euclid(2.0 * PI);
        (r, theta, phi)
    }
}

impl Add for Vector3 {
    type Output = Vector3;
    fn add(self, o: Vector3) -> Vector3 {
        Vector3::new(self.x + o.x, self.y + o.y, self.z + o.z)
    }
}

impl Sub for Vector3 {
    type Output = Vector3;
    fn sub(self, o: Vector3) -> Vector3 {
        Vector3::new(self.x - o.x, self.y - o.y, self.z - o.z)
    }
}

impl Neg for Vector3 {
    type Output = Vector3;
    fn neg(self) -> Vector3 {
        self.scale(-1.0)
    }
}

/// Complex 2x2 matrix, row-major.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Mat2(pub [[Complex64; 2]; 2]);

impl Mat2 {
    pub const fn new(a: Complex64, b: Complex64, c: Complex64, d: Complex64) -> Self {
        Mat2([[a, b], [c, d]])
    }

    pub const fn zero() -> Self {
        Mat2::new(ZERO, ZERO, ZERO, ZERO)
    }

    pub const fn identity() -> Self {
        Mat2::new(ONE, ZERO, ZERO, ONE)
    }

    /// Pauli matrix `σ_{a+1}` for `a` in `0..3`.
    pub fn pauli(a: usize) -> Self {
        match a {
            0 => Mat2::new(ZERO, ONE, ONE, ZERO),
            1 => Mat2::new(ZERO, -I, I, ZERO),
            2 => Mat2::new(ONE, ZERO, ZERO, -ONE),
            _ => panic!("pauli index {a} out of range"),
        }
    }

    pub fn sigma3() -> Self {
        Mat2::pauli(2)
    }

    pub fn get(&self, i: usize, j: usize) -> Complex64 {
        self.0[i][j]
    }

    pub fn scale(&self, s: Complex64) -> Self {
        Mat2(self.0.map(|row| row.map(|v| v * s)))
    }

    pub fn adjoint(&self) -> Self {
        let m = &self.0;
        Mat2::new(
            m[0][0].conj(),
            m[1][0].conj(),
            m[0][1].conj(),
            m[1][1].conj(),
        )
    }

    pub fn det(&self) -> Complex64 {
        self.0[0][0] * self.0[1][1] - self.0[0][1] * self.0[1][0]
    }

    pub fn trace(&self) -> Complex64 {
        self.0[0][0] + self.0[1][1]
    }

    pub fn inverse(&self) -> Self {
        let d = self.det();
        let m = &self.0;
        Mat2::new(m[1][1] / d, -m[0][1] / d, -m[1][0] / d, m[0][0] / d)
    }

    /// Frobenius norm.
    pub fn norm(&self) -> f64 {
        self.0
            .iter()
            .flatten()
            .map(|v| v.norm_sqr())
            .sum::<f64>()
            .sqrt()
    }

    pub fn off_diagonal_norm(&self) -> f64 {
        (self.0[0][1].norm_sqr() + self.0[1][0].norm_sqr()).sqrt()
    }

    /// `‖M M† - I‖`.
    pub fn unitarity_defect(&self) -> f64 {
        (*self * self.adjoint() - Mat2::identity()).norm()
    }

    pub fn apply(&self, v: [Complex64; 2]) -> [Complex64; 2] {
        [
            self.0[0][0] * v[0] + self.0[0][1] * v[1],
            self.0[1][0] * v[0] + self.0[1][1] * v[1],
        ]
    }
}

impl Mul for Mat2 {
    type Output = Mat2;
    fn mul(self, o: Mat2) -> Mat2 {
        let (a, b) = (&self.0, &o.0);
        let e = |i: usize, j: usize| a[i][0] * b[0][j] + a[i][1] * b[1][j];
        Mat2::new(e(0, 0), e(0, 1), e(1, 0), e(1, 1))
    }
}

impl Add for Mat2 {
    type Output = Mat2;
    fn add(self, o: Mat2) -> Mat2 {
        let (a, b) = (&self.0, &o.0);
        Mat2::new(
            a[0][0] + b[0][0],
            a[0][1] + b[0][1],
            a[1][0] + b[1][0],
            a[1][1] + b[1][1],
        )
    }
}

impl Sub for Mat2 {
    type Output = Mat2;
    fn sub(self, o: Mat2) -> Mat2 {
        self + o.scale(-ONE)
    }
}

/// One sample of an su(2)-valued spatial vector field: `components[k]` is
/// the traceless Hermitian matrix `A_k`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Su2VectorField {
    pub components: [Mat2; 3],
}

impl Su2VectorField {
    /// From real coefficients `coeff[k][a] = A_k^a`.
    pub fn from_coefficients(coeff: [[f64; 3]; 3]) -> Self {
        let components = coeff.map(|row| {
            (0..3).fold(Mat2::zero(), |acc, a| {
                acc + Mat2::pauli(a).scale(Complex64::new(GENERATOR_SCALE * row[a], 0.0))
            })
        });
        Su2VectorField { components }
    }

    pub fn max_trace(&self) -> f64 {
        self.components
            .iter()
            .map(|c| c.trace().norm())
            .fold(0.0, f64::max)
    }

    pub fn max_off_diagonal(&self) -> f64 {
        self.components
            .iter()
            .map(Mat2::off_diagonal_norm)
            .fold(0.0, f64::max)
    }
}

fn levi_civita(a: usize, b: usize, c: usize) -> f64 {
    match (a, b, c) {
        (0, 1, 2) | (1, 2, 0) | (2, 0, 1) => 1.0,
        (0, 2, 1) | (2, 1, 0) | (1, 0, 2) => -1.0,
        _ => 0.0,
    }
}

/// `A_k^a = ε_{akm} r_m / r²`, returned as `[k][a]`.
pub fn wu_yang_coefficients(r: Vector3) -> Result<[[f64; 3]; 3]> {
    let r2 = r.dot(r);
    if r2 == 0.0 {
        return domain("Wu-Yang potential is singular at the origin");
    }
    let rv = r.to_array();
    let mut out = [[0.0; 3]; 3];
    for (k, row) in out.iter_mut().enumerate() {
        for (a, entry) in row.iter_mut().enumerate() {
            *entry = (0..3).map(|m| levi_civita(a, k, m) * rv[m]).sum::<f64>() / r2;
        }
    }
    Ok(out)
}

pub fn wu_yang_potential(r: Vector3) -> Result<Su2VectorField> {
    Ok(Su2VectorField::from_coefficients(wu_yang_coefficients(r)?))
}

/// `(r × n) / (|r| (|r| - r·n))`, the monopole potential with its string
/// along `n`. Fails inside the string cone of half-angle
/// [`STRING_EXCLUSION_ANGLE`].
pub fn dirac_potential(r: Vector3, n: Vector3) -> Result<Vector3> {
    let rn = r.norm();
    if rn == 0.0 {
        return domain("Dirac potential is singular at the origin");
    }
    let cross = r.cross(n);
    let angle = cross.norm().atan2(r.dot(n));
    if angle < STRING_EXCLUSION_ANGLE {
        return Err(Error::Singular(format!(
            "point {:?} is within {STRING_EXCLUSION_ANGLE} rad of the Dirac string along {:?}",
            r.to_array(),
            n.to_array()
        )));
    }
    Ok(cross.scale(1.0 / (rn * (rn - r.dot(n)))))
}

/// String direction of the potential produced by [`gauge_matrix_s`].
pub const fn abelian_string_direction() -> Vector3 {
    Vector3::new(0.0, 0.0, -1.0)
}

fn half_angles(theta: f64) -> (f64, f64) {
    let (s, c) = (theta / 2.0).sin_cos();
    (c, s)
}

/// `S = ((cos θ/2, -sin θ/2 e^{-iφ}), (sin θ/2 e^{iφ}, cos θ/2))`.
pub fn gauge_matrix_s(p: SphericalPoint) -> Mat2 {
    s_at(p.theta(), p.phi())
}

fn s_at(theta: f64, phi: f64) -> Mat2 {
    let (c, s) = half_angles(theta);
    let e = Complex64::from_polar(1.0, phi);
    Mat2::new(c.into(), -e.conj() * s, e * s, c.into())
}

/// `S_p = ((sin θ/2, cos θ/2 e^{-iφ}), (-cos θ/2 e^{iφ}, sin θ/2))`.
pub fn gauge_matrix_sp(p: SphericalPoint) -> Mat2 {
    sp_at(p.theta(), p.phi())
}

fn sp_at(theta: f64, phi: f64) -> Mat2 {
    let (c, s) = half_angles(theta);
    let e = Complex64::from_polar(1.0, phi);
    Mat2::new(s.into(), e.conj() * c, -e * c, s.into())
}

/// `R(φ) = S_p S⁻¹ = ((0, e^{-iφ}), (-e^{iφ}, 0))`, independent of θ.
pub fn r_matrix(phi: f64) -> Mat2 {
    let e = Complex64::from_polar(1.0, phi);
    Mat2::new(ZERO, e.conj(), -e, ZERO)
}

/// The factorized form `σ₁ · diag(-e^{iφ}, e^{-iφ})`.
pub fn r_matrix_factorized(phi: f64) -> Mat2 {
    let e = Complex64::from_polar(1.0, phi);
    Mat2::pauli(0) * Mat2::new(-e, ZERO, ZERO, e.conj())
}

/// `R̂(φ) = ((0, e^{-2iμφ}), (-e^{2iμφ}, 0))` for charge product `μ`.
pub fn r_hat_matrix(phi: f64, mu: HalfInt) -> Mat2 {
    let e = Complex64::from_polar(1.0, 2.0 * mu.to_f64() * phi);
    Mat2::new(ZERO, e.conj(), -e, ZERO)
}

/// A position-dependent gauge matrix with a known gradient.
pub trait GaugeField {
    fn value(&self, r: Vector3) -> Mat2;
    /// `∂_k U` for `k = x, y, z`.
    fn gradient(&self, r: Vector3) -> [Mat2; 3];
}

/// Angular derivatives `(∂_θ U, ∂_φ U)` chained to Cartesian components.
fn chain_to_cartesian(r: Vector3, d_theta: Mat2, d_phi: Mat2) -> [Mat2; 3] {
    let (rn, theta, phi) = r.spherical();
    let (st, ct) = theta.sin_cos();
    let (sp, cp) = phi.sin_cos();
    let theta_hat = [ct * cp, ct * sp, -st];
    let phi_hat = [-sp, cp, 0.0];
    [0, 1, 2].map(|k| {
        d_theta.scale((theta_hat[k] / rn).into()) + d_phi.scale((phi_hat[k] / (rn * st)).into())
    })
}

/// `S` of [`gauge_matrix_s`] as a field over space.
#[derive(Clone, Copy, Debug, Default)]
pub struct AbelianizingGauge;

impl GaugeField for AbelianizingGauge {
    fn value(&self, r: Vector3) -> Mat2 {
        let (_, theta, phi) = r.spherical();
        s_at(theta, phi)
    }

    fn gradient(&self, r: Vector3) -> [Mat2; 3] {
        let (_, theta, phi) = r.spherical();
        let (c, s) = half_angles(theta);
        let e = Complex64::from_polar(1.0, phi);
        let d_theta = Mat2::new(
            (-s / 2.0).into(),
            -e.conj() * (c / 2.0),
            e * (c / 2.0),
            (-s / 2.0).into(),
        );
        let d_phi = Mat2::new(ZERO, I * e.conj() * s, I * e * s, ZERO);
        chain_to_cartesian(r, d_theta, d_phi)
    }
}

/// `S_p` of [`gauge_matrix_sp`] as a field over space.
#[derive(Clone, Copy, Debug, Default)]
pub struct ReflectedGauge;

impl GaugeField for ReflectedGauge {
    fn value(&self, r: Vector3) -> Mat2 {
        let (_, theta, phi) = r.spherical();
        sp_at(theta, phi)
    }

    fn gradient(&self, r: Vector3) -> [Mat2; 3] {
        let (_, theta, phi) = r.spherical();
        let (c, s) = half_angles(theta);
        let e = Complex64::from_polar(1.0, phi);
        let d_theta = Mat2::new(
            (c / 2.0).into(),
            -e.conj() * (s / 2.0),
            e * (s / 2.0),
            (c / 2.0).into(),
        );
        let d_phi = Mat2::new(ZERO, -I * e.conj() * c, -I * e * c, ZERO);
        chain_to_cartesian(r, d_theta, d_phi)
    }
}

/// A position-independent gauge matrix.
#[derive(Clone, Copy, Debug)]
pub struct ConstantGauge(pub Mat2);

impl GaugeField for ConstantGauge {
    fn value(&self, _r: Vector3) -> Mat2 {
        self.0
    }

    fn gradient(&self, _r: Vector3) -> [Mat2; 3] {
        [Mat2::zero(); 3]
    }
}

/// `A_k -> U⁻¹ A_k U + (i/e) U⁻¹ ∂_k U` at position `r`.
pub fn gauge_transform(
    a: &Su2VectorField,
    u: &dyn GaugeField,
    r: Vector3,
    e: f64,
) -> Su2VectorField {
    let value = u.value(r);
    let inv = value.inverse();
    let grad = u.gradient(r);
    let coupling = I / e;
    let mut components = [Mat2::zero(); 3];
    for k in 0..3 {
        components[k] = inv * a.components[k] * value + (inv * grad[k]).scale(coupling);
    }
    Su2VectorField { components }
}

/// Which side of the parity pair is checked.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum AbelianizationVariant {
    /// `S` at `r`, compared with `A^D(r, n)`.
    Direct,
    /// `S_p` at `r`, compared with `A^D(-r, n)`.
    Parity,
}

impl AbelianizationVariant {
    pub fn name(self) -> &'static str {
        match self {
            AbelianizationVariant::Direct => "direct",
            AbelianizationVariant::Parity => "parity",
        }
    }
}

impl std::str::FromStr for AbelianizationVariant {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "direct" => Ok(AbelianizationVariant::Direct),
            "parity" => Ok(AbelianizationVariant::Parity),
            other => Err(Error::Parse {
                arg: other.to_string(),
                reason: "variant must be direct or parity".to_string(),
            }),
        }
    }
}

/// Residuals of the abelianized Wu-Yang potential at one point.
#[derive(Clone, Copy, Debug)]
pub struct AbelianizationSample {
    /// Largest off-diagonal Frobenius norm over the three components.
    pub off_diagonal: f64,
    /// Least-squares `c` in `diag = c A^D σ₃`.
    pub c: f64,
    /// `‖diag - c A^D σ₃‖` over all components.
    pub fit_residual: f64,
    pub transformed: Su2VectorField,
}

/// Transforms the Wu-Yang potential at `radius · p` and fits the diagonal
/// against the Dirac potential.
pub fn abelianization_residual(
    p: SphericalPoint,
    variant: AbelianizationVariant,
    radius: f64,
) -> Result<AbelianizationSample> {
    let r = Vector3::from_point(p, radius);
    let n = abelian_string_direction();
    let (gauge, target): (&dyn GaugeField, Vector3) = match variant {
        AbelianizationVariant::Direct => (&AbelianizingGauge, dirac_potential(r, n)?),
        AbelianizationVariant::Parity => (&ReflectedGauge, dirac_potential(-r, n)?),
    };
    let transformed = gauge_transform(&wu_yang_potential(r)?, gauge, r, 1.0);
    let target = target.to_array();

    let upper: Vec<f64> = transformed
        .components
        .iter()
        .map(|c| c.get(0, 0).re)
        .collect();
    let denom: f64 = target.iter().map(|t| t * t).sum();
    let c = upper.iter().zip(&target).map(|(d, t)| d * t).sum::<f64>() / denom;
    let fit_residual = transformed
        .components
        .iter()
        .zip(&target)
        .map(|(m, t)| {
            let expected = Mat2::sigma3().scale((c * t).into());
            let diff = *m - expected;
            diff.get(0, 0).norm_sqr() + diff.get(1, 1).norm_sqr()
        })
        .sum::<f64>()
        .sqrt();
    Ok(AbelianizationSample {
        off_diagonal: transformed.max_off_diagonal(),
        c,
        fit_residual,
        transformed,
    })
}

/// Aggregate of [`abelianization_residual`] over seeded random points.
#[derive(Clone, Debug, PartialEq)]
pub struct AbelianizationReport {
    pub variant: AbelianizationVariant,
    pub samples: usize,
    pub seed: u64,
    pub max_off_diagonal: f64,
    pub c_mean: f64,
    pub c_min: f64,
    pub c_max: f64,
    pub max_fit_residual: f64,
}

impl AbelianizationReport {
    pub fn c_spread(&self) -> f64 {
        self.c_max - self.c_min
    }

    pub fn passes(&self, tolerance: f64) -> bool {
        self.max_off_diagonal <= tolerance
            && self.c_spread() <= tolerance
            && self.max_fit_residual <= tolerance
    }
}

/// Seeded sample of points outside both string cones, with radii in `[0.5, 2)`.
/// Each point draws `cos θ`, `φ`, and the radius, in that order.
pub fn sample_points(n: usize, seed: u64) -> Vec<(SphericalPoint, f64)> {
    let mut rng = SplitMix64::new(seed);
    let mut out = Vec::with_capacity(n);
    while out.len() < n {
        let cos_theta = rng.uniform(-1.0, 1.0);
        let phi = rng.uniform(0.0, 2.0 * PI);
        let radius = rng.uniform(0.5, 2.0);
        let theta = cos_theta.acos();
        if theta < STRING_EXCLUSION_ANGLE || PI - theta < STRING_EXCLUSION_ANGLE {
            continue;
        }
        out.push((SphericalPoint::new_unchecked(theta, phi), radius));
    }
    out
}

pub fn abelianization_check(
    n_samples: usize,
    seed: u64,
    variant: AbelianizationVariant,
) -> Result<AbelianizationReport> {
    if n_samples == 0 {
        return domain("at least one sample is required");
    }
    let mut report = AbelianizationReport {
        variant,
        samples: n_samples,
        seed,
        max_off_diagonal: 0.0,
        c_mean: 0.0,
        c_min: f64::INFINITY,
        c_max: f64::NEG_INFINITY,
        max_fit_residual: 0.0,
    };
    let mut c_sum = 0.0;
    for (p, radius) in sample_points(n_samples, seed) {
        let s = abelianization_residual(p, variant, radius)?;
        report.max_off_diagonal = report.max_off_diagonal.max(s.off_diagonal);
        report.max_fit_residual = report.max_fit_residual.max(s.fit_residual);
        report.c_min = report.c_min.min(s.c);
        report.c_max = report.c_max.max(s.c);
        c_sum += s.c;
    }
    report.c_mean = c_sum / n_samples as f64;
    Ok(report)
}

/// Two-component wave function on the sphere.
pub type Spinor = [Complex64; 2];

/// `(P' f)(p) = R(φ) f(θ → π - θ, φ → φ + π)`.
pub fn parity_prime<F>(f: &F, p: SphericalPoint) -> Spinor
where
    F: Fn(SphericalPoint) -> Spinor + ?Sized,
{
    r_matrix(p.phi()).apply(f(p.reflected()))
}

/// `(S P S† f)(p) = S(p) S(reflected p)† f(reflected p)`.
pub fn conjugated_parity<F>(f: &F, p: SphericalPoint) -> Spinor
where
    F: Fn(SphericalPoint) -> Spinor + ?Sized,
{
    let q = p.reflected();
    (gauge_matrix_s(p) * gauge_matrix_s(q).adjoint()).apply(f(q))
}

/// Random complex polynomial of degree <= 2 in the Cartesian coordinates
/// of the unit vector, per component.
#[derive(Clone, Debug)]
pub struct PolynomialSpinor {
    coefficients: [[Complex64; 10]; 2],
}

impl PolynomialSpinor {
    pub fn random(rng: &mut SplitMix64) -> Self {
        let mut coefficients = [[ZERO; 10]; 2];
        for row in coefficients.iter_mut() {
            for c in row.iter_mut() {
                *c = Complex64::new(rng.uniform(-1.0, 1.0), rng.uniform(-1.0, 1.0));
            }
        }
        PolynomialSpinor { coefficients }
    }

    pub fn constant(value: Spinor) -> Self {
        let mut coefficients = [[ZERO; 10]; 2];
        coefficients[0][0] = value[0];
        coefficients[1][0] = value[1];
        PolynomialSpinor { coefficients }
    }

    pub fn eval(&self, p: SphericalPoint) -> Spinor {
        let [x, y, z] = p.unit_vector();
        let monomials = [1.0, x, y, z, x * x, y * y, z * z, x * y, y * z, z * x];
        self.coefficients.map(|row| {
            row.iter()
                .zip(monomials)
                .fold(ZERO, |acc, (c, mono)| acc + c * mono)
        })
    }
}

/// Findings for `P' = R P`.
#[derive(Clone, Debug)]
pub struct ParityOperatorReport {
    /// `max ‖S S_p⁻¹ - R⁻¹‖` over sampled points.
    pub s_sp_inverse_vs_r_inverse: f64,
    /// `S S_p⁻¹ R⁻¹` at the first sample; equal to `-I` since `R² = -I`.
    pub s_sp_inverse_over_r: Mat2,
    /// `max |S P S† f - R⁻¹ P f|` over sampled points and test functions.
    pub conjugated_vs_r_inverse_action: f64,
    /// `max |P'(P' f) - f|` over sampled points and test functions.
    pub involution_residual: f64,
    /// `max |<P'f, g> - <f, P'g>|` under sphere quadrature.
    pub hermiticity_residual: f64,
    /// Per `j`: the mean of `(P'² Ψ)/Ψ` over sampled points and its spread.
    pub square_phases: Vec<(HalfInt, Complex64, f64)>,
    /// `R(φ) R(φ + π)` at the first sample.
    pub r_product: Mat2,
    /// `max ‖R(φ) R(φ + π) - s I‖` with `s = ±1` read from the first sample.
    pub r_product_defect: f64,
    /// `R̂(φ, μ = 1/2) R(φ)⁻¹` at the first sample.
    pub r_hat_over_r: Mat2,
    pub max_r_hat_defect: f64,
}

impl ParityOperatorReport {
    pub fn max_square_phase_spread(&self) -> f64 {
        self.square_phases
            .iter()
            .map(|(_, _, s)| *s)
            .fold(0.0, f64::max)
    }
}

/// Verifies the algebra of `P'` on `n_functions` random smooth spinors (the
/// first one constant) and on the spinor harmonics
/// `(Y_{j m μ}, Y_{j m -μ})` with `μ = 1/2` and `j <= 3/2`.
pub fn parity_operator_check(
    grid: &SphereGrid,
    n_functions: usize,
    seed: u64,
) -> Result<ParityOperatorReport> {
    let mut rng = SplitMix64::new(seed);
    let mut functions = vec![PolynomialSpinor::constant([
        ONE,
        Complex64::new(0.5, -0.25),
    ])];
    while functions.len() < n_functions.max(2) {
        functions.push(PolynomialSpinor::random(&mut rng));
    }
    let points: Vec<SphericalPoint> = (0..64)
        .map(|_| {
            let theta = rng.uniform(-1.0, 1.0).acos();
            SphericalPoint::new_unchecked(theta.clamp(1e-3, PI - 1e-3), rng.uniform(0.0, 2.0 * PI))
        })
        .collect();

    let first = points[0];
    let conj_ratio = gauge_matrix_s(first) * gauge_matrix_sp(first).inverse();
    let s_sp_inverse_over_r = conj_ratio * r_matrix(first.phi()).inverse();
    let r_product = r_matrix(first.phi()) * r_matrix(first.phi() + PI);
    let product_sign = r_product.get(0, 0).re.signum();
    let r_hat_over_r = r_hat_matrix(first.phi(), HalfInt::HALF) * r_matrix(first.phi()).inverse();

    let mut report = ParityOperatorReport {
        s_sp_inverse_vs_r_inverse: 0.0,
        s_sp_inverse_over_r,
        conjugated_vs_r_inverse_action: 0.0,
        involution_residual: 0.0,
        hermiticity_residual: 0.0,
        square_phases: Vec::new(),
        r_product,
        r_product_defect: 0.0,
        r_hat_over_r,
        max_r_hat_defect: 0.0,
    };

    let spinor_diff =
        |a: Spinor, b: Spinor| ((a[0] - b[0]).norm_sqr() + (a[1] - b[1]).norm_sqr()).sqrt();
    for &p in &points {
        let ratio = gauge_matrix_s(p) * gauge_matrix_sp(p).inverse();
        let r_inv = r_matrix(p.phi()).inverse();
        report.s_sp_inverse_vs_r_inverse =
            report.s_sp_inverse_vs_r_inverse.max((ratio - r_inv).norm());
        let prod = r_matrix(p.phi()) * r_matrix(p.phi() + PI);
        report.r_product_defect = report
            .r_product_defect
            .max((prod - Mat2::identity().scale(product_sign.into())).norm());
        let hat = r_hat_matrix(p.phi(), HalfInt::HALF);
        report.max_r_hat_defect = report
            .max_r_hat_defect
            .max((hat - r_matrix(p.phi())).norm());

        for f in &functions {
            let eval = |q: SphericalPoint| f.eval(q);
            let conj = conjugated_parity(&eval, p);
            let via_r_inv = r_inv.apply(f.eval(p.reflected()));
            report.conjugated_vs_r_inverse_action = report
                .conjugated_vs_r_inverse_action
                .max(spinor_diff(conj, via_r_inv));
            let once = |q: SphericalPoint| parity_prime(&eval, q);
            let twice = parity_prime(&once, p);
            report.involution_residual = report
                .involution_residual
                .max(spinor_diff(twice, f.eval(p)));
        }
    }

    // <P'f, g> against <f, P'g> on the grid
    let sample_spinor =
        |f: &(dyn Fn(SphericalPoint) -> Spinor + Sync)| -> (Vec<Complex64>, Vec<Complex64>) {
            let upper = grid.sample(|p| f(p)[0]);
            let lower = grid.sample(|p| f(p)[1]);
            (upper, lower)
        };
    let inner = |a: &(Vec<Complex64>, Vec<Complex64>),
                 b: &(Vec<Complex64>, Vec<Complex64>)|
     -> Result<Complex64> { Ok(grid.inner(&a.0, &b.0)? + grid.inner(&a.1, &b.1)?) };
    for pair in functions.windows(2) {
        let (f, g) = (&pair[0], &pair[1]);
        let fe = |q: SphericalPoint| f.eval(q);
        let ge = |q: SphericalPoint| g.eval(q);
        let pf = sample_spinor(&|q| parity_prime(&fe, q));
        let pg = sample_spinor(&|q| parity_prime(&ge, q));
        let fs = sample_spinor(&fe);
        let gs = sample_spinor(&ge);
        let lhs = inner(&pf, &gs)?;
        let rhs = inner(&fs, &pg)?;
        report.hermiticity_residual = report.hermiticity_residual.max((lhs - rhs).norm());
    }

    // P'² on spinor harmonics
    let mu = HalfInt::HALF;
    let mut j = mu;
    while j <= HalfInt::from_twice(3) {
        let mut ratios = Vec::new();
        for m in j.projections() {
            let up = MonopoleHarmonic::new(MonopoleHarmonicIndex::new(j, m, mu)?)?;
            let down = MonopoleHarmonic::new(MonopoleHarmonicIndex::new(j, m, -mu)?)?;
            let psi = |q: SphericalPoint| [up.eval(q), down.eval(q)];
            let once = |q: SphericalPoint| parity_prime(&psi, q);
            for &p in &points {
                let twice = parity_prime(&once, p);
                let orig = psi(p);
                let k = if orig[0].norm() >= orig[1].norm() {
                    0
                } else {
                    1
                };
                if orig[k].norm() > 1e-6 {
                    ratios.push(twice[k] / orig[k]);
                }
            }
        }
        let mean = ratios.iter().sum::<Complex64>() / ratios.len() as f64;
        let spread = ratios.iter().map(|r| (r - mean).norm()).fold(0.0, f64::max);
        report.square_phases.push((j, mean, spread));
        j = j + HalfInt::ONE;
    }
    Ok(report)
}
