//! Integer Laurent polynomials in v, used to compute Gaussian binomials
//! generically in Z[v, v^-1] before reduction mod Phi_l.

use num_bigint::BigInt;
use num_traits::{One, Zero};

/// coeffs[i] is the coefficient of v^(offset + i); normalized so the first and
/// last coefficients are nonzero (or the vector is empty for zero).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Laurent {
    pub offset: i64,
    pub coeffs: Vec<BigInt>,
}

impl Laurent {
    pub fn zero() -> Self {
        Laurent {
            offset: 0,
            coeffs: vec![],
        }
    }

    pub fn one() -> Self {
        Laurent {
            offset: 0,
            coeffs: vec![BigInt::one()],
        }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// c * v^e
    pub fn monomial(c: i64, e: i64) -> Self {
        if c == 0 {
            return Self::zero();
        }
        Laurent {
            offset: e,
            coeffs: vec![BigInt::from(c)],
        }
    }

    /// v^a - v^b with a != b.
    pub fn power_difference(a: i64, b: i64) -> Self {
        assert_ne!(a, b);
        let (lo, hi, lo_sign) = if a < b {
            (a, b, BigInt::one())
        } else {
            (b, a, -BigInt::one())
        };
        let mut coeffs = vec![BigInt::zero(); (hi - lo) as usize + 1];
        coeffs[0] = lo_sign.clone();
        *coeffs.last_mut().unwrap() = -lo_sign;
        Laurent { offset: lo, coeffs }
    }

    fn normalize(mut self) -> Self {
        while self.coeffs.last().map_or(false, Zero::is_zero) {
            self.coeffs.pop();
        }
        let lead_zeros = self.coeffs.iter().take_while(|c| c.is_zero()).count();
        if lead_zeros > 0 {
            self.coeffs.drain(..lead_zeros);
            self.offset += lead_zeros as i64;
        }
        if self.coeffs.is_empty() {
            self.offset = 0;
        }
        self
    }

    pub fn mul(&self, rhs: &Laurent) -> Laurent {
        if self.is_zero() || rhs.is_zero() {
            return Laurent::zero();
        }
        let mut coeffs = vec![BigInt::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                let t = a * b;
                coeffs[i + j] += t;
            }
        }
        Laurent {
            offset: self.offset + rhs.offset,
            coeffs,
        }
        .normalize()
    }

    /// Exact division; returns None if the remainder is nonzero.
    pub fn div_exact(&self, rhs: &Laurent) -> Option<Laurent> {
        assert!(!rhs.is_zero(), "division by zero Laurent polynomial");
        if self.is_zero() {
            return Some(Laurent::zero());
        }
        if self.coeffs.len() < rhs.coeffs.len() {
            return None;
        }
        let mut rem = self.coeffs.clone();
        let dd = rhs.coeffs.len() - 1;
        let n = rem.len() - 1 - dd;
        let lead = rhs.coeffs[dd].clone();
        let mut quot = vec![BigInt::zero(); n + 1];
        for k in (0..=n).rev() {
            let (q, r) = num_integer::Integer::div_rem(&rem[k + dd], &lead);
            if !r.is_zero() {
                return None;
            }
            if !q.is_zero() {
                for j in 0..=dd {
                    let t = &rhs.coeffs[j] * &q;
                    rem[k + j] -= t;
                }
            }
            quot[k] = q;
        }
        if rem.iter().any(|c| !c.is_zero()) {
            return None;
        }
        Some(
            Laurent {
                offset: self.offset - rhs.offset,
                coeffs: quot,
            }
            .normalize(),
        )
    }
}
