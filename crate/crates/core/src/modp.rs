//! The prime field F_p and binomial coefficients mod p.

use crate::error::{AlgebraError, Result};

/// A residue in [0, p).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct ModPScalar {
    pub value: u64,
    pub p: u64,
}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

pub fn check_odd_prime(p: u64) -> Result<()> {
    if p < 3 || p % 2 == 0 || !is_prime(p) {
        return Err(AlgebraError::Config(format!("{p} is not an odd prime")));
    }
    Ok(())
}

impl ModPScalar {
    pub fn new(value: i64, p: u64) -> Self {
        ModPScalar {
            value: value.rem_euclid(p as i64) as u64,
            p,
        }
    }

    pub fn zero(p: u64) -> Self {
        ModPScalar { value: 0, p }
    }

    pub fn one(p: u64) -> Self {
        ModPScalar { value: 1 % p, p }
    }

    pub fn is_zero(&self) -> bool {
        self.value == 0
    }

    pub fn add(&self, rhs: &Self) -> Self {
        debug_assert_eq!(self.p, rhs.p);
        ModPScalar {
            value: (self.value + rhs.value) % self.p,
            p: self.p,
        }
    }

    pub fn sub(&self, rhs: &Self) -> Self {
        debug_assert_eq!(self.p, rhs.p);
        ModPScalar {
            value: (self.value + self.p - rhs.value) % self.p,
            p: self.p,
        }
    }

    pub fn mul(&self, rhs: &Self) -> Self {
        debug_assert_eq!(self.p, rhs.p);
        ModPScalar {
            value: (self.value as u128 * rhs.value as u128 % self.p as u128) as u64,
            p: self.p,
        }
    }

    pub fn neg(&self) -> Self {
        ModPScalar {
            value: (self.p - self.value) % self.p,
            p: self.p,
        }
    }

    pub fn inv(&self) -> Result<Self> {
        if self.value == 0 {
            return Err(AlgebraError::DivisionByZero);
        }
        Ok(self.pow(self.p - 2))
    }

    pub fn pow(&self, mut e: u64) -> Self {
        let mut base = *self;
        let mut acc = ModPScalar::one(self.p);
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base);
            }
            base = base.mul(&base);
            e >>= 1;
        }
        acc
    }
}

/// binom(n, k) mod p by Lucas' theorem; negative tops go through the
/// falling-factorial reflection binom(n, k) = (-1)^k binom(k - n - 1, k).
pub fn binom_mod_p(n: i64, k: u64, p: u64) -> ModPScalar {
    if n < 0 {
        let v = binom_mod_p(k as i64 - n - 1, k, p);
        return if k % 2 == 1 { v.neg() } else { v };
    }
    let digits = digit_table(p);
    let mut n = n as u64;
    let mut k = k;
    let mut acc = 1u64;
    while k > 0 || n > 0 {
        let nd = n % p;
        let kd = k % p;
        if kd > nd {
            return ModPScalar::zero(p);
        }
        acc = acc * digits[(nd * p + kd) as usize] % p;
        n /= p;
        k /= p;
    }
    ModPScalar {
        value: acc,
        p,
    }
}

/// Pascal triangles of the digit binomials, one per prime, built on first use.
fn digit_table(p: u64) -> std::sync::Arc<Vec<u64>> {
    use std::collections::HashMap;
    use std::sync::{Arc, Mutex, OnceLock};
    static TABLES: OnceLock<Mutex<HashMap<u64, Arc<Vec<u64>>>>> = OnceLock::new();
    let tables = TABLES.get_or_init(|| Mutex::new(HashMap::new()));
    let mut guard = tables.lock().unwrap();
    Arc::clone(guard.entry(p).or_insert_with(|| {
        let n = p as usize;
        let mut t = vec![0u64; n * n];
        for i in 0..n {
            t[i * n] = 1;
            for j in 1..=i {
                t[i * n + j] = (t[(i - 1) * n + j - 1] + t[(i - 1) * n + j]) % p;
            }
        }
        Arc::new(t)
    }))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qbinom::int_binomial;

    #[test]
    fn negative_one_top_alternates() {
        for p in [3u64, 5, 7] {
            for k in 0..10 {
                let expected = if k % 2 == 0 { 1 } else { p - 1 };
                assert_eq!(binom_mod_p(-1, k, p).value, expected);
            }
        }
    }

    #[test]
    fn row_p_vanishes_strictly_inside() {
        for p in [3u64, 5, 7] {
            for j in 1..p {
                assert!(binom_mod_p(p as i64, j, p).is_zero());
            }
            assert_eq!(binom_mod_p(p as i64, 0, p).value, 1);
            assert_eq!(binom_mod_p(p as i64, p, p).value, 1);
        }
    }

    #[test]
    fn six_choose_three_mod_three() {
        // Lucas digits: binom(2,1) * binom(0,0) = 2; direct factorial gives 20 = 2 mod 3.
        assert_eq!(binom_mod_p(6, 3, 3).value, 2);
    }

    #[test]
    fn lucas_matches_big_integer_binomials() {
        for p in [3u64, 5] {
            for n in -12i64..=24 {
                for k in 0u64..=12 {
                    let big = int_binomial(n, k);
                    let expected = ModPScalar::new(
                        (&big % num_bigint::BigInt::from(p)).try_into().unwrap_or_else(|_| {
                            let m: i64 = (&big % num_bigint::BigInt::from(p)).try_into().unwrap();
                            m
                        }),
                        p,
                    );
                    assert_eq!(binom_mod_p(n, k, p), expected, "n={n} k={k} p={p}");
                }
            }
        }
    }

    #[test]
    fn field_ops() {
        let a = ModPScalar::new(4, 7);
        assert_eq!(a.inv().unwrap().mul(&a).value, 1);
        assert!(ModPScalar::zero(7).inv().is_err());
        assert!(check_odd_prime(9).is_err());
        assert!(check_odd_prime(2).is_err());
        assert!(check_odd_prime(7).is_ok());
    }
}
