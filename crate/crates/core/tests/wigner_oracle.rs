mod common;

use common::{h, small_d};
use monopole_core::exact::BigRational;
use monopole_core::wigner::{
    clebsch_gordan_oracle, three_j, three_j_column_negation, wigner_small_d, ClebschGordanTable,
    ThreeJArgs,
};
use monopole_core::{HalfInt, SignedSqrtRational};
use num_traits::{One, Zero};

fn all_args(twice_max: i64) -> Vec<ThreeJArgs> {
    let mut out = Vec::new();
    for t1 in 0..=twice_max {
        for t2 in 0..=twice_max {
            for t3 in (t1 - t2).abs()..=(t1 + t2).min(twice_max) {
                if (t1 + t2 + t3) % 2 != 0 {
                    continue;
                }
                for m1 in h(t1).projections() {
                    for m2 in h(t2).projections() {
                        let m3 = -(m1 + m2);
                        if m3.abs() <= h(t3) {
                            out.push(ThreeJArgs::new([h(t1), h(t2), h(t3)], [m1, m2, m3]).unwrap());
                        }
                    }
                }
            }
        }
    }
    out
}

#[test]
fn racah_matches_ladder_oracle_up_to_j_2() {
    let mut checked = 0;
    for args in all_args(4) {
        let table = ClebschGordanTable::new(args.j[0], args.j[1], args.j[2]).unwrap();
        assert_eq!(
            three_j(&args),
            table.three_j(args.m[0], args.m[1], args.m[2]),
            "{args:?}"
        );
        checked += 1;
    }
    assert!(checked > 300, "{checked}");
}

#[test]
fn symmetries() {
    for args in all_args(5) {
        let v = three_j(&args);
        let sign = three_j_column_negation(&args).unwrap();
        let odd_sign = if sign == 1 { v.clone() } else { -v.clone() };
        assert_eq!(three_j(&args.negated()), odd_sign);
        // odd permutation carries the same sign
        assert_eq!(three_j(&args.swapped(0, 1)), odd_sign);
        assert_eq!(three_j(&args.swapped(1, 2)), odd_sign);
        // cyclic permutation is free
        assert_eq!(three_j(&args.swapped(0, 1).swapped(1, 2)), v);
    }
}

#[test]
fn orthogonality_in_exact_arithmetic() {
    // Σ_{m1 m2} (2j3+1) (j1 j2 j3; m1 m2 m3)(j1 j2 j3'; m1 m2 m3) = δ
    for (t1, t2) in [(2, 2), (3, 2), (4, 3), (4, 4)] {
        let (j1, j2) = (h(t1), h(t2));
        for t3 in (t1 - t2).abs()..=t1 + t2 {
            if (t1 + t2 + t3) % 2 != 0 {
                continue;
            }
            let m3 = h(t3 % 2);
            let mut sum = BigRational::zero();
            for m1 in j1.projections() {
                let m2 = -(m1 + m3);
                if m2.abs() > j2 {
                    continue;
                }
                let a = ThreeJArgs::new([j1, j2, h(t3)], [m1, m2, m3]).unwrap();
                sum += three_j(&a).radicand();
            }
            assert_eq!(
                sum * BigRational::from_integer((t3 + 1).into()),
                BigRational::one(),
                "{t1} {t2} {t3}"
            );
        }
    }
}

#[test]
fn oracle_rejects_bad_projection() {
    assert!(clebsch_gordan_oracle(h(1), h(1), h(2), h(3), h(1)).is_err());
    assert!(ClebschGordanTable::new(h(1), h(1), h(4)).is_err());
    let v = clebsch_gordan_oracle(h(1), h(1), h(0), h(1), h(-1)).unwrap();
    assert_eq!(
        v,
        SignedSqrtRational::new(1, BigRational::new(1.into(), 2.into()))
    );
}

#[test]
fn small_d_matches_matrix_exponential() {
    for t in 0..=8 {
        let j = h(t);
        for beta in [0.0, 0.3, 1.1, 2.0, 3.0] {
            for m1 in j.projections() {
                for m2 in j.projections() {
                    let got = wigner_small_d(j, m1, m2, beta).unwrap();
                    let want = small_d(j, m1, m2, beta);
                    assert!(
                        (got - want).abs() < 1e-12,
                        "j={j} m1={m1} m2={m2} beta={beta}: {got} vs {want}"
                    );
                }
            }
        }
    }
}

#[test]
fn small_d_domain() {
    assert!(wigner_small_d(h(1), h(3), h(1), 0.5).is_err());
    assert!(wigner_small_d(HalfInt::ONE, HalfInt::ZERO, HalfInt::ZERO, 0.0).unwrap() == 1.0);
}
