mod common;

use std::f64::consts::PI;

use common::{h, js, small_d, standard_ylm};
use monopole_core::harmonics::{
    gram_check, monopole_harmonic, normalization_constant, parity_map, MonopoleHarmonicIndex,
    SphericalPoint,
};
use monopole_core::quadrature::SphereGrid;
use monopole_core::rng::SplitMix64;
use num_complex::Complex64;

fn random_points(n: usize, seed: u64) -> Vec<SphericalPoint> {
    let mut rng = SplitMix64::new(seed);
    (0..n)
        .map(|_| {
            let theta = rng.uniform(-0.999, 0.999).acos();
            SphericalPoint::new(theta, rng.uniform(0.0, 2.0 * PI)).unwrap()
        })
        .collect()
}

#[test]
fn integer_charge_free_case_is_standard_ylm() {
    for l in 0..=4 {
        for m in -l..=l {
            let idx = MonopoleHarmonicIndex::from_twice(2 * l, 2 * m, 0).unwrap();
            for p in random_points(25, 7) {
                let got = monopole_harmonic(&idx, p).unwrap();
                let want = standard_ylm(l, m, p.theta(), p.phi());
                assert!((got - want).norm() < 1e-12, "l={l} m={m}: {got} vs {want}");
            }
        }
    }
}

#[test]
fn matches_rotation_matrix_form() {
    // Y_{jmμ} = sqrt((2j+1)/4π) d^j_{m,-μ}(θ) e^{i(m+μ)φ}
    for mu in [h(-1), h(1), h(2), h(-3)] {
        for j in js(mu.abs().twice(), 9) {
            for m in j.projections() {
                let idx = MonopoleHarmonicIndex::new(j, m, mu).unwrap();
                for p in random_points(10, 11) {
                    let d = small_d(j, m, -mu, p.theta());
                    let want = Complex64::from_polar(
                        ((j.twice() + 1) as f64 / (4.0 * PI)).sqrt() * d,
                        (m + mu).to_f64() * p.phi(),
                    );
                    let got = monopole_harmonic(&idx, p).unwrap();
                    assert!((got - want).norm() < 1e-11, "{idx}: {got} vs {want}");
                }
            }
        }
    }
}

#[test]
fn orthonormal_and_converged_under_refinement() {
    let coarse = gram_check(h(9), h(1), &SphereGrid::new(32, 32).unwrap()).unwrap();
    let fine = gram_check(h(9), h(1), &SphereGrid::new(64, 64).unwrap()).unwrap();
    let finer = gram_check(h(9), h(1), &SphereGrid::new(128, 128).unwrap()).unwrap();
    for r in [&coarse, &fine, &finer] {
        assert_eq!(r.states, 30);
        assert!(r.max_off_diagonal < 1e-12, "{r:?}");
        assert!(r.max_diagonal_defect < 1e-12, "{r:?}");
    }
    assert!((fine.diagonal_max - finer.diagonal_max).abs() < 1e-12);
}

#[test]
fn normalization_constant_reference_values() {
    let n = normalization_constant(&MonopoleHarmonicIndex::from_twice(1, 1, 1).unwrap()).unwrap();
    // 2^{1/2} sqrt(2 · 0! 1! / (4π · 0! 1!))
    assert!((n - 2f64.sqrt() * (2.0 / (4.0 * PI)).sqrt()).abs() < 1e-15);
}

#[test]
fn bounded_towards_the_poles() {
    for mu in [h(-1), h(1), h(3)] {
        for j in js(mu.abs().twice(), 9) {
            for m in j.projections() {
                let idx = MonopoleHarmonicIndex::new(j, m, mu).unwrap();
                let bound = ((j.twice() + 1) as f64 / (4.0 * PI)).sqrt();
                for k in 1..=12 {
                    let eps = 10f64.powi(-k);
                    for theta in [eps, PI - eps] {
                        let v = monopole_harmonic(&idx, SphericalPoint::new(theta, 0.4).unwrap())
                            .unwrap();
                        assert!(
                            v.norm().is_finite() && v.norm() <= bound * (1.0 + 1e-12),
                            "{idx} θ={theta}: {v}"
                        );
                    }
                }
            }
        }
    }
}

#[test]
fn azimuthal_periodicity() {
    for mu in [h(0), h(1), h(-1), h(2)] {
        for j in js(mu.abs().twice(), 7) {
            for m in j.projections() {
                let idx = MonopoleHarmonicIndex::new(j, m, mu).unwrap();
                let factor = Complex64::from_polar(1.0, 2.0 * PI * (m + mu).to_f64());
                for p in random_points(5, 3) {
                    let shifted = SphericalPoint::new(p.theta(), p.phi() + 2.0 * PI).unwrap();
                    let a = monopole_harmonic(&idx, shifted).unwrap();
                    let b = factor * monopole_harmonic(&idx, p).unwrap();
                    assert!((a - b).norm() < 1e-12);
                }
            }
        }
    }
}

#[test]
fn parity_phase_is_constant_over_the_sphere() {
    for mu in [h(0), h(1), h(-1)] {
        for j in js(mu.abs().twice(), 7) {
            for m in j.projections() {
                let idx = MonopoleHarmonicIndex::new(j, m, mu).unwrap();
                let images: Vec<_> = random_points(100, 99)
                    .into_iter()
                    .filter_map(|p| parity_map(&idx, p).ok())
                    .collect();
                assert!(images.len() > 90);
                let first = images[0].phase;
                assert!((first.norm() - 1.0).abs() < 1e-9, "{idx}: {first}");
                for img in &images {
                    assert!(
                        (img.phase - first).norm() < 1e-8,
                        "{idx}: {} vs {first}",
                        img.phase
                    );
                    assert_eq!(img.index, idx.charge_conjugate());
                }
                // (-1)^{j+m} e^{i(m-μ)π}
                let want = Complex64::from_polar(1.0, ((j + m).to_f64() + (m - mu).to_f64()) * PI);
                assert!((first - want).norm() < 1e-8, "{idx}: {first} vs {want}");
            }
        }
    }
}

#[test]
fn uncompensated_ratio_varies_for_nonzero_charge() {
    let idx = MonopoleHarmonicIndex::from_twice(1, 1, 1).unwrap();
    let a = parity_map(&idx, SphericalPoint::new(1.0, 0.2).unwrap()).unwrap();
    let b = parity_map(&idx, SphericalPoint::new(1.0, 1.7).unwrap()).unwrap();
    assert!((a.ratio - b.ratio).norm() > 0.1);
}
