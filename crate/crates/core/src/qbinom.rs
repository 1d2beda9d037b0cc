//! Gaussian binomial coefficients.
//!
//! `gauss_binomial` computes [n choose k] generically in Z[v, v^-1] by exact
//! division and only then reduces mod Phi_l.  Dividing inside the quotient
//! ring is never attempted: v^h - v^-h is a zero divisor there whenever l | h.
//!
//! `QBinomTable` caches reduced values over an integer range of tops, extended
//! row by row with the q-Pascal identity
//!     [m choose t] = v^t [m-1 choose t] + v^(t-m) [m-1 choose t-1],
//! which is division-free and so stays valid in the quotient.

use std::collections::HashMap;
use std::sync::{Arc, Mutex};

use num_bigint::BigInt;

use crate::cyclo::{CycloScalar, RootParams};
use crate::laurent::Laurent;

/// [n choose k] with v_i = v^d, computed in the generic ring and reduced.
pub fn gauss_binomial(ring: &Arc<RootParams>, n: i64, k: u64, d: u64) -> CycloScalar {
    let lau = gauss_binomial_laurent(n, k, d);
    laurent_to_scalar(ring, &lau)
}

/// The generic [n choose k] as a Laurent polynomial: the product
/// prod_{s=1}^{k} (v_d^(n-s+1) - v_d^(-(n-s+1))) / (v_d^s - v_d^(-s)).
pub fn gauss_binomial_laurent(n: i64, k: u64, d: u64) -> Laurent {
    let d = d as i64;
    let mut num = Laurent::one();
    let mut den = Laurent::one();
    for s in 1..=k as i64 {
        let e = n - s + 1;
        if e == 0 {
            // v^0 - v^0 = 0 annihilates the product.
            return Laurent::zero();
        }
        num = num.mul(&Laurent::power_difference(d * e, -d * e));
        den = den.mul(&Laurent::power_difference(d * s, -d * s));
    }
    num.div_exact(&den)
        .expect("generic Gaussian binomial division is always exact")
}

pub fn laurent_to_scalar(ring: &Arc<RootParams>, lau: &Laurent) -> CycloScalar {
    let mut acc = ring.zero();
    for (i, c) in lau.coeffs.iter().enumerate() {
        if num_traits::Zero::is_zero(c) {
            continue;
        }
        let mono = &ring.q_power(lau.offset + i as i64) * &ring.from_bigint(c.clone());
        acc += &mono;
    }
    acc
}

/// Ordinary (integer) binomial coefficient with integer top, possibly negative.
pub fn int_binomial(n: i64, k: u64) -> BigInt {
    if n >= 0 {
        let n = n as u64;
        if k > n {
            return BigInt::from(0);
        }
        let mut acc = BigInt::from(1);
        for s in 0..k {
            acc = acc * BigInt::from(n - s) / BigInt::from(s + 1);
        }
        acc
    } else {
        // binom(n, k) = (-1)^k binom(k - n - 1, k)
        let v = int_binomial(k as i64 - n - 1, k);
        if k % 2 == 1 {
            -v
        } else {
            v
        }
    }
}

/// Cache of reduced Gaussian binomials [m choose t] (d = 1), m ranging over a
/// growable integer interval, t bounded per row on demand.
pub struct QBinomTable {
    ring: Arc<RootParams>,
    rows: Mutex<HashMap<i64, Vec<CycloScalar>>>,
}

impl QBinomTable {
    pub fn new(ring: Arc<RootParams>) -> Self {
        QBinomTable {
            ring,
            rows: Mutex::new(HashMap::new()),
        }
    }

    pub fn ring(&self) -> &Arc<RootParams> {
        &self.ring
    }

    /// Reduced [m choose t].
    pub fn get(&self, m: i64, t: u64) -> CycloScalar {
        if t == 0 {
            return self.ring.one();
        }
        if m >= 0 && (t as i64) > m {
            return self.ring.zero();
        }
        let t = t as usize;
        let mut rows = self.rows.lock().unwrap();
        self.ensure(&mut rows, m, t);
        rows.get(&m).unwrap()[t].clone()
    }

    fn ensure(&self, rows: &mut HashMap<i64, Vec<CycloScalar>>, m: i64, t: usize) {
        if rows.get(&m).map_or(false, |r| r.len() > t) {
            return;
        }
        if m == 0 {
            let mut row = vec![self.ring.zero(); t + 1];
            row[0] = self.ring.one();
            rows.insert(0, row);
            return;
        }
        if m > 0 {
            self.ensure(rows, m - 1, t);
            let prev = rows.get(&(m - 1)).unwrap().clone();
            let row = self.row_up(m, &prev, t);
            rows.insert(m, row);
        } else {
            self.ensure(rows, m + 1, t);
            let upper = rows.get(&(m + 1)).unwrap().clone();
            let row = self.row_down(m, &upper, t);
            rows.insert(m, row);
        }
    }

    /// Row m from row m-1 by the q-Pascal identity.
    fn row_up(&self, m: i64, prev: &[CycloScalar], t_max: usize) -> Vec<CycloScalar> {
        let mut row = Vec::with_capacity(t_max + 1);
        row.push(self.ring.one());
        for t in 1..=t_max {
            let a = &self.ring.q_power(t as i64) * &prev[t];
            let b = &self.ring.q_power(t as i64 - m) * &prev[t - 1];
            row.push(&a + &b);
        }
        row
    }

    /// Row m from row m+1: [m choose t] = v^(-t) ([m+1 choose t] - v^(t-m-1) [m choose t-1]).
    fn row_down(&self, m: i64, upper: &[CycloScalar], t_max: usize) -> Vec<CycloScalar> {
        let mut row: Vec<CycloScalar> = Vec::with_capacity(t_max + 1);
        row.push(self.ring.one());
        for t in 1..=t_max {
            let sub = &self.ring.q_power(t as i64 - m - 1) * &row[t - 1];
            let diff = &upper[t] - &sub;
            row.push(&self.ring.q_power(-(t as i64)) * &diff);
        }
        row
    }

    /// chi_M value of the bracket: the Gaussian binomial with half-integer top
    /// N/2 expressed through the sign-twist at odd N,
    ///   G(N, t) = [N/2 choose t]          for N even,
    ///   G(N, t) = (-1)^t [(N-l)/2 choose t] for N odd.
    pub fn half_top(&self, n2: i64, t: u64) -> CycloScalar {
        if n2.rem_euclid(2) == 0 {
            self.get(n2 / 2, t)
        } else {
            let m = (n2 - self.ring.l() as i64) / 2;
            let v = self.get(m, t);
            if t % 2 == 1 {
                -v
            } else {
                v
            }
        }
    }
}
