//! Tensor-product quadrature on the unit sphere: Gauss-Legendre in
//! `x = cos θ` and the uniform rule in `φ`.

use std::f64::consts::PI;

use num_complex::Complex64;
use rayon::prelude::*;

use crate::error::{domain, Error, Result};
use crate::harmonics::SphericalPoint;

pub const DEFAULT_N_THETA: usize = 64;
pub const DEFAULT_N_PHI: usize = 64;

/// Gauss-Legendre nodes and weights on `[-1, 1]`, ascending in `x`.
pub fn gauss_legendre(n: usize) -> Vec<(f64, f64)> {
    let mut out = vec![(0.0, 0.0); n];
    for i in 0..n.div_ceil(2) {
        // Tricomi initial guess, then Newton on P_n
        let mut x = ((4 * i + 3) as f64 * PI / (4 * n + 2) as f64).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (p, d) = legendre_with_derivative(n, x);
            dp = d;
            let dx = p / d;
            x -= dx;
            if dx.abs() < 1e-16 {
                let (_, d) = legendre_with_derivative(n, x);
                dp = d;
                break;
            }
        }
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        out[n - 1 - i] = (x, w);
        out[i] = (-x, w);
    }
    out
}

fn legendre_with_derivative(n: usize, x: f64) -> (f64, f64) {
    let (mut p0, mut p1) = (1.0, x);
    for k in 2..=n {
        let p2 = ((2 * k - 1) as f64 * x * p1 - (k - 1) as f64 * p0) / k as f64;
        p0 = p1;
        p1 = p2;
    }
    let dp = n as f64 * (x * p1 - p0) / (x * x - 1.0);
    (p1, dp)
}

/// Product grid over the sphere. Node order is theta-major.
#[derive(Clone, Debug)]
pub struct SphereGrid {
    theta_nodes: Vec<(f64, f64)>,
    n_phi: usize,
}

impl SphereGrid {
    pub fn new(n_theta: usize, n_phi: usize) -> Result<Self> {
        if n_theta < 2 || n_phi < 2 {
            return domain(format!(
                "grid sizes must be at least 2 (got n_theta={n_theta}, n_phi={n_phi})"
            ));
        }
        Ok(SphereGrid {
            theta_nodes: gauss_legendre(n_theta),
            n_phi,
        })
    }

    pub fn n_theta(&self) -> usize {
        self.theta_nodes.len()
    }

    pub fn n_phi(&self) -> usize {
        self.n_phi
    }

    pub fn len(&self) -> usize {
        self.n_theta() * self.n_phi
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    fn phi_weight(&self) -> f64 {
        2.0 * PI / self.n_phi as f64
    }

    /// `(point, weight)` of node `index`.
    pub fn node(&self, index: usize) -> (SphericalPoint, f64) {
        let (x, w) = self.theta_nodes[index / self.n_phi];
        let k = index % self.n_phi;
        let phi = 2.0 * PI * k as f64 / self.n_phi as f64;
        (
            SphericalPoint::new_unchecked(x.acos(), phi),
            w * self.phi_weight(),
        )
    }

    pub fn nodes(&self) -> impl Iterator<Item = (SphericalPoint, f64)> + '_ {
        (0..self.len()).map(|i| self.node(i))
    }

    pub fn points(&self) -> Vec<SphericalPoint> {
        self.nodes().map(|(p, _)| p).collect()
    }

    pub fn weights(&self) -> Vec<f64> {
        self.nodes().map(|(_, w)| w).collect()
    }

    /// `f` at every node, in node order.
    pub fn sample<F>(&self, f: F) -> Vec<Complex64>
    where
        F: Fn(SphericalPoint) -> Complex64 + Sync,
    {
        (0..self.len())
            .into_par_iter()
            .map(|i| f(self.node(i).0))
            .collect()
    }

    /// Weighted sum of pre-sampled values.
    pub fn integrate_samples(&self, values: &[Complex64]) -> Result<Complex64> {
        assert_eq!(values.len(), self.len(), "one sample per node");
        let mut weighted = Vec::with_capacity(values.len());
        for (i, v) in values.iter().enumerate() {
            if !(v.re.is_finite() && v.im.is_finite()) {
                let (p, _) = self.node(i);
                return Err(Error::NonFinite {
                    theta: p.theta(),
                    phi: p.phi(),
                });
            }
            weighted.push(v * self.node(i).1);
        }
        Ok(pairwise_sum(&weighted))
    }

    /// `∫ f dΩ`.
    pub fn integrate<F>(&self, f: F) -> Result<Complex64>
    where
        F: Fn(SphericalPoint) -> Complex64 + Sync,
    {
        self.integrate_samples(&self.sample(f))
    }

    /// `∫ conj(f) g dΩ` over pre-sampled values.
    pub fn inner(&self, f: &[Complex64], g: &[Complex64]) -> Result<Complex64> {
        let prod: Vec<Complex64> = f.iter().zip(g).map(|(a, b)| a.conj() * b).collect();
        self.integrate_samples(&prod)
    }
}

/// Pairwise summation; the split points depend only on the length.
fn pairwise_sum(values: &[Complex64]) -> Complex64 {
    if values.len() <= 8 {
        return values.iter().fold(Complex64::new(0.0, 0.0), |a, b| a + b);
    }
    let mid = values.len() / 2;
    pairwise_sum(&values[..mid]) + pairwise_sum(&values[mid..])
}

/// Same as [`SphereGrid::new`].
pub fn build_grid(n_theta: usize, n_phi: usize) -> Result<SphereGrid> {
    SphereGrid::new(n_theta, n_phi)
}
