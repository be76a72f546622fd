use std::sync::OnceLock;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::error::{domain, Result};

pub const DEFAULT_FACTORIAL_CAP: usize = 200;

/// Precomputed factorials `0!..=cap!`. Larger arguments are computed on demand,
/// so the cap only bounds the memo, never the result.
#[derive(Clone, Debug)]
pub struct FactorialTable {
    table: Vec<BigInt>,
}

impl FactorialTable {
    pub fn new(cap: usize) -> Self {
        let mut table = Vec::with_capacity(cap + 1);
        let mut acc = BigInt::one();
        table.push(acc.clone());
        for k in 1..=cap {
            acc *= k;
            table.push(acc.clone());
        }
        FactorialTable { table }
    }

    pub fn cap(&self) -> usize {
        self.table.len() - 1
    }

    pub fn get(&self, n: i64) -> Result<BigInt> {
        if n < 0 {
            return domain(format!("factorial of negative argument {n}"));
        }
        let n = n as usize;
        if let Some(v) = self.table.get(n) {
            return Ok(v.clone());
        }
        let mut acc = self.table[self.cap()].clone();
        for k in self.cap() + 1..=n {
            acc *= k;
        }
        Ok(acc)
    }
}

fn shared_table() -> &'static FactorialTable {
    static TABLE: OnceLock<FactorialTable> = OnceLock::new();
    TABLE.get_or_init(|| FactorialTable::new(DEFAULT_FACTORIAL_CAP))
}

/// `n!` for `n >= 0`.
pub fn factorial(n: i64) -> Result<BigInt> {
    shared_table().get(n)
}

pub(crate) fn factorial_q(n: i64) -> Result<BigRational> {
    factorial(n).map(BigRational::from_integer)
}

/// `a (a-1) ... (a-k+1) / k!` for arbitrary rational `a`.
pub fn generalized_binomial(a: &BigRational, k: u64) -> BigRational {
    let mut acc = BigRational::one();
    let mut falling = a.clone();
    for i in 1..=k {
        if falling.is_zero() {
            return BigRational::zero();
        }
        acc = acc * &falling / BigRational::from_integer(BigInt::from(i));
        falling -= BigRational::one();
    }
    acc
}
