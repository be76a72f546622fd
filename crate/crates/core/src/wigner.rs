//! Wigner 3-j symbols in exact arithmetic, with an independent
//! Clebsch-Gordan construction by ladder operators and the Wigner small-d
//! function.
//!
//! Phases follow the Condon-Shortley convention throughout.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{domain, Result};
use crate::exact::{factorial_q, HalfInt, SignedSqrtRational};

/// Arguments of a 3-j symbol `(j1 j2 j3; m1 m2 m3)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct ThreeJArgs {
    pub j: [HalfInt; 3],
    pub m: [HalfInt; 3],
}

impl ThreeJArgs {
    pub fn new(j: [HalfInt; 3], m: [HalfInt; 3]) -> Result<Self> {
        for (ji, mi) in j.iter().zip(&m) {
            check_projection(*ji, *mi)?;
        }
        Ok(ThreeJArgs { j, m })
    }

    /// Shorthand taking doubled values.
    pub fn from_twice(j: [i64; 3], m: [i64; 3]) -> Result<Self> {
        Self::new(j.map(HalfInt::from_twice), m.map(HalfInt::from_twice))
    }

    pub fn negated(&self) -> Self {
        ThreeJArgs {
            j: self.j,
            m: self.m.map(|m| -m),
        }
    }

    /// Exchange columns `a` and `b`.
    pub fn swapped(&self, a: usize, b: usize) -> Self {
        let mut out = *self;
        out.j.swap(a, b);
        out.m.swap(a, b);
        out
    }

    fn triangle_ok(&self) -> bool {
        let [a, b, c] = self.j;
        (a - b).abs() <= c && c <= a + b && (a + b + c).is_integer()
    }
}

fn check_projection(j: HalfInt, m: HalfInt) -> Result<()> {
    if j < HalfInt::ZERO {
        return domain(format!("negative angular momentum j={j}"));
    }
    if m.abs() > j {
        return domain(format!("|m| exceeds j (j={j}, m={m})"));
    }
    if !(j - m).is_integer() {
        return domain(format!("j - m is not an integer (j={j}, m={m})"));
    }
    Ok(())
}

fn int(h: HalfInt) -> i64 {
    h.to_int()
        .expect("integer combination of validated quantum numbers")
}

fn sign_pow(exponent: i64) -> i32 {
    if exponent.rem_euclid(2) == 0 {
        1
    } else {
        -1
    }
}

/// Exact 3-j symbol by the Racah single-sum formula.
///
/// Returns zero when the projections do not sum to zero or the triangle
/// condition fails.
pub fn three_j(args: &ThreeJArgs) -> SignedSqrtRational {
    let [j1, j2, j3] = args.j;
    let [m1, m2, m3] = args.m;
    if m1 + m2 + m3 != HalfInt::ZERO || !args.triangle_ok() {
        return SignedSqrtRational::zero();
    }
    let f = |h: HalfInt| factorial_q(int(h)).expect("non-negative under triangle rule");

    let triangle =
        f(j1 + j2 - j3) * f(j1 - j2 + j3) * f(-j1 + j2 + j3) / f(j1 + j2 + j3 + HalfInt::ONE);
    let projections = f(j1 + m1) * f(j1 - m1) * f(j2 + m2) * f(j2 - m2) * f(j3 + m3) * f(j3 - m3);

    // every factorial argument in the sum must be >= 0
    let k_min = [0, int(j2 - j3 - m1), int(j1 - j3 + m2)]
        .into_iter()
        .max()
        .unwrap();
    let k_max = [int(j1 + j2 - j3), int(j1 - m1), int(j2 + m2)]
        .into_iter()
        .min()
        .unwrap();

    let mut sum = BigRational::zero();
    for k in k_min..=k_max {
        let kk = HalfInt::from_int(k);
        let denom = f(kk)
            * f(j3 - j2 + kk + m1)
            * f(j3 - j1 + kk - m2)
            * f(j1 + j2 - j3 - kk)
            * f(j1 - kk - m1)
            * f(j2 - kk + m2);
        let term = BigRational::one() / denom;
        if k % 2 == 0 {
            sum += term;
        } else {
            sum -= term;
        }
    }
    if sum.is_zero() {
        return SignedSqrtRational::zero();
    }
    let phase = sign_pow(int(j1 - j2 - m3));
    let sign = phase * if sum.is_negative() { -1 } else { 1 };
    SignedSqrtRational::new(sign, triangle * projections * &sum * &sum)
}

/// `(-1)^(j1+j2+j3)`: the factor relating `three_j` at negated projections to
/// `three_j` at the original ones. The same factor governs an odd permutation
/// of columns.
pub fn three_j_column_negation(args: &ThreeJArgs) -> Result<i32> {
    let [a, b, c] = args.j;
    match (a + b + c).to_int() {
        Some(n) => Ok(sign_pow(n)),
        None => domain(format!("j1 + j2 + j3 = {} is not an integer", a + b + c)),
    }
}

/// Clebsch-Gordan coefficients `<j1 m1; j2 m2 | j M>` for one coupled
/// multiplet, built from the highest-weight state by ladder operators.
///
/// States are expanded in the unnormalized product basis
/// `u_m = J_-^(j-m) |j j>`, in which `J_-` has unit matrix elements and `J_+`
/// has rational ones, so every coefficient is rational until the final
/// normalization.
#[derive(Clone, Debug)]
pub struct ClebschGordanTable {
    j1: HalfInt,
    j2: HalfInt,
    j: HalfInt,
    /// keyed by (2M, 2m1)
    values: BTreeMap<(i64, i64), SignedSqrtRational>,
}

impl ClebschGordanTable {
    pub fn new(j1: HalfInt, j2: HalfInt, j: HalfInt) -> Result<Self> {
        for (name, v) in [("j1", j1), ("j2", j2), ("j", j)] {
            if v < HalfInt::ZERO {
                return domain(format!("{name}={v} is negative"));
            }
        }
        if j < (j1 - j2).abs() || j > j1 + j2 || !(j1 + j2 - j).is_integer() {
            return domain(format!("cannot couple {j1} and {j2} to {j}"));
        }

        let q = |n: i64| BigRational::from_integer(BigInt::from(n));
        // J_+ u_m = (j - m)(j + m + 1) u_{m+1}
        let raise = |jj: HalfInt, m: HalfInt| q(int(jj - m)) * q(int(jj + m + HalfInt::ONE));
        // <u_m | u_m> = (2j)! (j - m)! / (j + m)!
        let norm = |jj: HalfInt, m: HalfInt| {
            factorial_q(jj.twice()).unwrap() * factorial_q(int(jj - m)).unwrap()
                / factorial_q(int(jj + m)).unwrap()
        };

        // highest weight: J_+ |j j> = 0 fixes the coefficients up to scale;
        // Condon-Shortley makes the m1 = j1 coefficient positive.
        let mut top: BTreeMap<i64, BigRational> = BTreeMap::new();
        let lowest_m1 = std::cmp::max(-j1, j - j2);
        let mut m1 = j1;
        let mut c = BigRational::one();
        top.insert(m1.twice(), c.clone());
        while m1 > lowest_m1 {
            let below = m1 - HalfInt::ONE;
            c = -c * raise(j2, j - m1) / raise(j1, below);
            top.insert(below.twice(), c.clone());
            m1 = below;
        }

        let mut values = BTreeMap::new();
        let mut state = top;
        let mut big_m = j;
        loop {
            let norm_sq: BigRational = state
                .iter()
                .map(|(&t1, cf)| {
                    let m1 = HalfInt::from_twice(t1);
                    cf * cf * norm(j1, m1) * norm(j2, big_m - m1)
                })
                .fold(BigRational::zero(), |a, b| a + b);
            for (&t1, cf) in &state {
                let m1 = HalfInt::from_twice(t1);
                let weight = norm(j1, m1) * norm(j2, big_m - m1) / &norm_sq;
                values.insert(
                    (big_m.twice(), t1),
                    SignedSqrtRational::new(
                        if cf.is_negative() { -1 } else { 1 },
                        cf * cf * weight,
                    ),
                );
            }
            if big_m == -j {
                break;
            }
            // J_- u_m = u_{m-1}, vanishing below -j
            let lowered_m = big_m - HalfInt::ONE;
            let mut next: BTreeMap<i64, BigRational> = BTreeMap::new();
            for (&t1, cf) in &state {
                let m1 = HalfInt::from_twice(t1);
                let m2 = big_m - m1;
                if m1 > -j1 {
                    *next
                        .entry((m1 - HalfInt::ONE).twice())
                        .or_insert_with(BigRational::zero) += cf;
                }
                if m2 > -j2 {
                    *next.entry(t1).or_insert_with(BigRational::zero) += cf;
                }
            }
            next.retain(|_, v| !v.is_zero());
            state = next;
            big_m = lowered_m;
        }

        Ok(ClebschGordanTable { j1, j2, j, values })
    }

    /// `<j1 m1; j2 m2 | j (m1 + m2)>`, zero outside the multiplet.
    pub fn get(&self, m1: HalfInt, m2: HalfInt) -> SignedSqrtRational {
        let big_m = m1 + m2;
        if m1.abs() > self.j1 || m2.abs() > self.j2 || big_m.abs() > self.j {
            return SignedSqrtRational::zero();
        }
        self.values
            .get(&(big_m.twice(), m1.twice()))
            .cloned()
            .unwrap_or_else(SignedSqrtRational::zero)
    }

    /// The 3-j symbol `(j1 j2 j; m1 m2 m3)` recovered from this table:
    /// `(-1)^(j1-j2-m3) / sqrt(2j+1) <j1 m1; j2 m2 | j -m3>`.
    pub fn three_j(&self, m1: HalfInt, m2: HalfInt, m3: HalfInt) -> SignedSqrtRational {
        if m1 + m2 + m3 != HalfInt::ZERO {
            return SignedSqrtRational::zero();
        }
        let cg = self.get(m1, m2);
        let phase = sign_pow(int(self.j1 - self.j2 - m3));
        let dim = BigRational::from_integer(BigInt::from(self.j.twice() + 1));
        let scale = SignedSqrtRational::new(phase, BigRational::one() / dim);
        &cg * &scale
    }
}

/// `<j1 m1; j2 m2 | j M>` with `M = m1 + m2`, by the ladder-operator
/// construction. Zero when `|M| > j`.
pub fn clebsch_gordan_oracle(
    j1: HalfInt,
    j2: HalfInt,
    j: HalfInt,
    m1: HalfInt,
    m2: HalfInt,
) -> Result<SignedSqrtRational> {
    check_projection(j1, m1)?;
    check_projection(j2, m2)?;
    Ok(ClebschGordanTable::new(j1, j2, j)?.get(m1, m2))
}

/// Wigner small-d matrix element `d^j_{m1 m2}(beta)` by the explicit
/// factorial sum.
pub fn wigner_small_d(j: HalfInt, m1: HalfInt, m2: HalfInt, beta: f64) -> Result<f64> {
    check_projection(j, m1)?;
    check_projection(j, m2)?;
    let fact = |h: HalfInt| factorial_q(int(h)).unwrap().to_f64().unwrap();
    let prefactor = (fact(j + m1) * fact(j - m1) * fact(j + m2) * fact(j - m2)).sqrt();
    let (c, s) = ((beta / 2.0).cos(), (beta / 2.0).sin());

    let s_min = std::cmp::max(0, int(m2 - m1));
    let s_max = std::cmp::min(int(j + m2), int(j - m1));
    let mut sum = 0.0;
    for k in s_min..=s_max {
        let kk = HalfInt::from_int(k);
        let denom = fact(j + m2 - kk) * fact(kk) * fact(m1 - m2 + kk) * fact(j - m1 - kk);
        let cos_pow = int(j + j + m2 - m1 - kk - kk) as i32;
        let sin_pow = int(m1 - m2 + kk + kk) as i32;
        let term = c.powi(cos_pow) * s.powi(sin_pow) / denom;
        sum += sign_pow(int(m1 - m2 + kk)) as f64 * term;
    }
    Ok(prefactor * sum)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn h(twice: i64) -> HalfInt {
        HalfInt::from_twice(twice)
    }

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    #[test]
    fn trivial_zeros() {
        let msum = ThreeJArgs::from_twice([2, 2, 2], [2, 2, 2]).unwrap();
        assert!(three_j(&msum).is_zero());
        let triangle = ThreeJArgs::from_twice([2, 2, 6], [0, 0, 0]).unwrap();
        assert!(three_j(&triangle).is_zero());
        // (1 1 1; 0 0 0) vanishes by the odd-sum parity rule
        let odd = ThreeJArgs::from_twice([2, 2, 2], [0, 0, 0]).unwrap();
        assert!(three_j(&odd).is_zero());
    }

    #[test]
    fn known_values() {
        // (1/2 1/2 1; 1/2 -1/2 0) = 1/sqrt(6)
        let a = ThreeJArgs::from_twice([1, 1, 2], [1, -1, 0]).unwrap();
        assert_eq!(three_j(&a), SignedSqrtRational::new(1, q(1, 6)));
        // (1 1 0; 1 -1 0) = 1/sqrt(3)
        let b = ThreeJArgs::from_twice([2, 2, 0], [2, -2, 0]).unwrap();
        assert_eq!(three_j(&b), SignedSqrtRational::new(1, q(1, 3)));
        // (1 1 2; 0 0 0) = sqrt(2/15)
        let c = ThreeJArgs::from_twice([2, 2, 4], [0, 0, 0]).unwrap();
        assert_eq!(three_j(&c), SignedSqrtRational::new(1, q(2, 15)));
    }

    #[test]
    fn half_one_half_matches_oracle() {
        let args = ThreeJArgs::from_twice([1, 2, 1], [-1, 0, 1]).unwrap();
        let table = ClebschGordanTable::new(h(1), h(2), h(1)).unwrap();
        assert_eq!(three_j(&args), table.three_j(h(-1), h(0), h(1)));
        assert!(!three_j(&args).is_zero());
    }

    #[test]
    fn malformed_args_rejected() {
        assert!(ThreeJArgs::from_twice([1, 2, 1], [3, 0, 1]).is_err());
        assert!(ThreeJArgs::from_twice([-2, 2, 2], [0, 0, 0]).is_err());
        assert!(ThreeJArgs::from_twice([2, 2, 2], [1, 0, 1]).is_err());
    }

    #[test]
    fn column_negation_signs() {
        let s = |j: [i64; 3]| {
            three_j_column_negation(&ThreeJArgs {
                j: j.map(h),
                m: [HalfInt::ZERO; 3],
            })
        };
        assert_eq!(s([3, 2, 1]).unwrap(), -1);
        assert_eq!(s([1, 2, 1]).unwrap(), 1);
        assert_eq!(s([2, 2, 4]).unwrap(), 1);
        assert!(s([1, 2, 2]).is_err());
    }

    #[test]
    fn cg_highest_weight_and_selection() {
        let one = clebsch_gordan_oracle(h(3), h(2), h(5), h(3), h(2)).unwrap();
        assert_eq!(one, SignedSqrtRational::one());
        let table = ClebschGordanTable::new(h(1), h(1), h(2)).unwrap();
        // M = 1/2 + 1/2 = 1 but asking for m1 + m2 = 0 under j = 1 is fine;
        // m1 + m2 outside the multiplet gives zero
        assert!(ClebschGordanTable::new(h(1), h(1), h(0))
            .unwrap()
            .get(h(1), h(1))
            .is_zero());
        // <1/2 1/2; 1/2 -1/2 | 1 0> = 1/sqrt(2)
        assert_eq!(table.get(h(1), h(-1)), SignedSqrtRational::new(1, q(1, 2)));
        let via_three_j = &three_j(&ThreeJArgs::from_twice([1, 1, 2], [1, -1, 0]).unwrap())
            * &SignedSqrtRational::new(1, q(3, 1));
        assert_eq!(table.get(h(1), h(-1)), via_three_j);
        assert!(ClebschGordanTable::new(h(1), h(1), h(4)).is_err());
    }

    #[test]
    fn small_d_closed_forms() {
        for beta in [0.0, 0.3, 1.7, 3.0] {
            let d = wigner_small_d(h(1), h(1), h(1), beta).unwrap();
            assert!((d - (beta / 2.0).cos()).abs() < 1e-15);
        }
        for t in 0..=8 {
            for m in h(t).projections() {
                assert!((wigner_small_d(h(t), m, m, 0.0).unwrap() - 1.0).abs() < 1e-15);
            }
        }
        assert!(wigner_small_d(h(2), h(4), h(0), 0.1).is_err());
    }
}
