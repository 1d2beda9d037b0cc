//! Exact arithmetic in Q[v]/Phi_l and its 2-integral subring B = Z[1/2][v]/Phi_l.
//!
//! Elements are stored in the power basis {1, v, ..., v^(d-1)} of the quotient
//! by the l-th cyclotomic polynomial, with integer numerators over a single
//! positive denominator.  All operations are exact; reduction mod Phi_l is a
//! pure integer-linear step driven by a precomputed table of v^k for k >= d.

use std::fmt;
use std::sync::Arc;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{AlgebraError, Result};

/// Fixed data of the coefficient ring: l, Phi_l, and the chosen square root of q.
///
/// The square root is pinned to q^(1/2) = -q^((1-l)/2), which squares to q
/// because l is odd.
#[derive(Debug)]
pub struct RootParams {
    l: u64,
    /// Coefficients of Phi_l, ascending, monic of degree `deg`.
    phi: Vec<BigInt>,
    deg: usize,
    /// reduction[k] = coordinates of v^(deg+k) mod Phi_l, for k in 0..deg-1.
    reduction: Vec<Vec<BigInt>>,
    /// Exponent e with q^(1/2) = -q^e, i.e. e = (1-l)/2 reduced into [0, l).
    half_exp: u64,
}

/// Integer polynomial division of v^l - 1 by the product of the proper
/// cyclotomic factors; exact by construction.
fn cyclotomic_poly(l: u64) -> Vec<BigInt> {
    // x^l - 1
    let mut num: Vec<BigInt> = vec![BigInt::zero(); l as usize + 1];
    num[0] = -BigInt::one();
    num[l as usize] = BigInt::one();
    for d in 1..l {
        if l % d == 0 {
            let phi_d = cyclotomic_poly_raw(d);
            num = poly_div_exact(&num, &phi_d);
        }
    }
    num
}

fn cyclotomic_poly_raw(l: u64) -> Vec<BigInt> {
    if l == 1 {
        return vec![-BigInt::one(), BigInt::one()];
    }
    cyclotomic_poly(l)
}

/// Exact division of integer polynomials (ascending coefficients); panics on a
/// nonzero remainder, which would signal a bug rather than a user error.
fn poly_div_exact(num: &[BigInt], den: &[BigInt]) -> Vec<BigInt> {
    let dn = num.len() - 1;
    let dd = den.len() - 1;
    assert!(den[dd].is_one(), "divisor must be monic");
    let mut rem = num.to_vec();
    let mut quot = vec![BigInt::zero(); dn - dd + 1];
    for k in (0..=dn - dd).rev() {
        let c = rem[k + dd].clone();
        quot[k] = c.clone();
        for j in 0..=dd {
            let t = &den[j] * &c;
            rem[k + j] -= t;
        }
    }
    assert!(rem.iter().all(Zero::is_zero), "division was not exact");
    quot
}

impl RootParams {
    pub fn new(l: u64) -> Result<Arc<Self>> {
        if l < 3 || l % 2 == 0 {
            return Err(AlgebraError::Config(format!(
                "order of the root of unity must be odd and >= 3, got {l}"
            )));
        }
        let phi = cyclotomic_poly(l);
        let deg = phi.len() - 1;
        // v^deg = -(phi_0 + phi_1 v + ... + phi_{deg-1} v^{deg-1}); shift repeatedly.
        let mut reduction: Vec<Vec<BigInt>> = Vec::with_capacity(deg.saturating_sub(1));
        let first: Vec<BigInt> = (0..deg).map(|i| -phi[i].clone()).collect();
        reduction.push(first);
        for k in 1..deg {
            let prev = &reduction[k - 1];
            let mut next = vec![BigInt::zero(); deg];
            let lead = prev[deg - 1].clone();
            for i in 1..deg {
                next[i] = prev[i - 1].clone();
            }
            if !lead.is_zero() {
                for i in 0..deg {
                    let t = &reduction[0][i] * &lead;
                    next[i] += t;
                }
            }
            reduction.push(next);
        }
        // (1-l)/2 mod l; l odd makes (1-l)/2 an integer.
        let e = (1i64 - l as i64) / 2;
        let half_exp = e.rem_euclid(l as i64) as u64;
        Ok(Arc::new(RootParams {
            l,
            phi,
            deg,
            reduction,
            half_exp,
        }))
    }

    pub fn l(&self) -> u64 {
        self.l
    }

    pub fn degree(&self) -> usize {
        self.deg
    }

    pub fn phi_coeffs(&self) -> &[BigInt] {
        &self.phi
    }

    pub fn zero(self: &Arc<Self>) -> CycloScalar {
        CycloScalar {
            num: vec![BigInt::zero(); self.deg],
            den: BigInt::one(),
            ring: Arc::clone(self),
        }
    }

    pub fn one(self: &Arc<Self>) -> CycloScalar {
        self.from_int(1)
    }

    pub fn from_int(self: &Arc<Self>, n: i64) -> CycloScalar {
        self.from_bigint(BigInt::from(n))
    }

    pub fn from_bigint(self: &Arc<Self>, n: BigInt) -> CycloScalar {
        let mut num = vec![BigInt::zero(); self.deg];
        num[0] = n;
        CycloScalar {
            num,
            den: BigInt::one(),
            ring: Arc::clone(self),
        }
    }

    /// n/d as a constant.
    pub fn from_ratio(self: &Arc<Self>, n: i64, d: i64) -> CycloScalar {
        assert!(d != 0);
        let mut num = vec![BigInt::zero(); self.deg];
        num[0] = BigInt::from(n);
        let mut s = CycloScalar {
            num,
            den: BigInt::from(d),
            ring: Arc::clone(self),
        };
        s.normalize();
        s
    }

    /// q^e for an integer exponent; exponents reduce mod l.
    pub fn q_power(self: &Arc<Self>, e: i64) -> CycloScalar {
        let e = e.rem_euclid(self.l as i64) as usize;
        let mut num = vec![BigInt::zero(); self.deg];
        if e < self.deg {
            num[e] = BigInt::one();
            CycloScalar {
                num,
                den: BigInt::one(),
                ring: Arc::clone(self),
            }
        } else {
            num.clone_from(&self.reduction[e - self.deg]);
            CycloScalar {
                num,
                den: BigInt::one(),
                ring: Arc::clone(self),
            }
        }
    }

    pub fn q(self: &Arc<Self>) -> CycloScalar {
        self.q_power(1)
    }

    /// (q^(1/2))^n = (-1)^n q^(n(1-l)/2).
    pub fn zeta_power(self: &Arc<Self>, n: i64) -> CycloScalar {
        let q = self.q_power(n.wrapping_mul(self.half_exp as i64));
        if n.rem_euclid(2) == 1 {
            -q
        } else {
            q
        }
    }

    /// q^(e/2) for a half-integer exponent given in units of 1/2.
    pub fn q_half_power(self: &Arc<Self>, e_halves: i64) -> CycloScalar {
        self.zeta_power(e_halves)
    }
}

impl PartialEq for RootParams {
    fn eq(&self, other: &Self) -> bool {
        self.l == other.l
    }
}
impl Eq for RootParams {}

/// An exact element of Q[v]/Phi_l: integer coordinates in the power basis over
/// one shared positive denominator, kept in lowest terms.
#[derive(Clone)]
pub struct CycloScalar {
    num: Vec<BigInt>,
    den: BigInt,
    ring: Arc<RootParams>,
}

impl CycloScalar {
    pub fn ring(&self) -> &Arc<RootParams> {
        &self.ring
    }

    pub fn numerators(&self) -> &[BigInt] {
        &self.num
    }

    pub fn denominator(&self) -> &BigInt {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.iter().all(Zero::is_zero)
    }

    pub fn is_one(&self) -> bool {
        self.den.is_one() && self.num[0].is_one() && self.num[1..].iter().all(Zero::is_zero)
    }

    /// Membership in B = Z[1/2][v]/Phi_l: the normalized denominator is a power of two.
    pub fn is_dyadic(&self) -> bool {
        let mut d = self.den.clone();
        while d.is_even() {
            d /= 2;
        }
        d.is_one()
    }

    fn normalize(&mut self) {
        if self.den.is_negative() {
            self.den = -self.den.clone();
            for c in &mut self.num {
                *c = -c.clone();
            }
        }
        let mut g = self.den.clone();
        for c in &self.num {
            if g.is_one() {
                break;
            }
            g = g.gcd(c);
        }
        if !g.is_one() && !g.is_zero() {
            self.den /= &g;
            for c in &mut self.num {
                *c /= &g;
            }
        }
        if self.is_zero() {
            self.den = BigInt::one();
        }
    }

    /// Reduce raw coordinates of length up to 2*deg-1 into the power basis.
    fn reduce_raw(ring: &Arc<RootParams>, raw: Vec<BigInt>, den: BigInt) -> CycloScalar {
        let deg = ring.deg;
        let mut num = vec![BigInt::zero(); deg];
        for (k, c) in raw.into_iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            if k < deg {
                num[k] += c;
            } else {
                let row = &ring.reduction[k - deg];
                for i in 0..deg {
                    let t = &row[i] * &c;
                    num[i] += t;
                }
            }
        }
        let mut s = CycloScalar {
            num,
            den,
            ring: Arc::clone(ring),
        };
        s.normalize();
        s
    }

    pub fn checked_add(&self, rhs: &CycloScalar) -> Result<CycloScalar> {
        if self.ring.l != rhs.ring.l {
            return Err(AlgebraError::RingMismatch(self.ring.l, rhs.ring.l));
        }
        Ok(self + rhs)
    }

    pub fn checked_mul(&self, rhs: &CycloScalar) -> Result<CycloScalar> {
        if self.ring.l != rhs.ring.l {
            return Err(AlgebraError::RingMismatch(self.ring.l, rhs.ring.l));
        }
        Ok(self * rhs)
    }

    /// Inverse via the extended Euclidean algorithm against Phi_l over Q;
    /// Phi_l is irreducible, so every nonzero element is invertible.
    pub fn inv(&self) -> Result<CycloScalar> {
        if self.is_zero() {
            return Err(AlgebraError::DivisionByZero);
        }
        let deg = self.ring.deg;
        let to_rat = |p: &CycloScalar| -> Vec<BigRational> {
            p.num
                .iter()
                .map(|c| BigRational::new(c.clone(), p.den.clone()))
                .collect()
        };
        let phi_rat: Vec<BigRational> = self
            .ring
            .phi
            .iter()
            .map(|c| BigRational::from_integer(c.clone()))
            .collect();

        // Invariant: r0 = s0 * self (mod Phi), r1 = s1 * self (mod Phi).
        let mut r0 = phi_rat;
        let mut r1 = to_rat(self);
        trim(&mut r1);
        let mut s0: Vec<BigRational> = vec![];
        let mut s1: Vec<BigRational> = vec![BigRational::one()];
        while !r1.is_empty() {
            let (q, r) = rat_poly_divmod(&r0, &r1);
            let s_new = rat_poly_sub(&s0, &rat_poly_mul(&q, &s1));
            r0 = r1;
            r1 = r;
            s0 = s1;
            s1 = s_new;
        }
        // r0 is a nonzero constant gcd.
        assert!(r0.len() == 1, "Phi_l must be coprime to any nonzero element");
        let c = r0[0].clone();
        let inv_coeffs: Vec<BigRational> = s0.iter().map(|x| x / &c).collect();
        // Common denominator.
        let mut den = BigInt::one();
        for x in &inv_coeffs {
            den = den.lcm(x.denom());
        }
        let mut num = vec![BigInt::zero(); deg];
        for (i, x) in inv_coeffs.iter().enumerate() {
            num[i] = x.numer() * (&den / x.denom());
        }
        let mut out = CycloScalar {
            num,
            den,
            ring: Arc::clone(&self.ring),
        };
        out.normalize();
        debug_assert!((&out * self).is_one());
        Ok(out)
    }

    /// Image under q -> 1 (sum of the numerator coordinates over the denominator).
    pub fn eval_at_one(&self) -> (BigInt, BigInt) {
        let n: BigInt = self.num.iter().sum();
        (n, self.den.clone())
    }

    /// Render as a polynomial in q, lowest degree first.
    pub fn to_poly_string(&self) -> String {
        if self.is_zero() {
            return "0".into();
        }
        let mut terms: Vec<String> = Vec::new();
        for (i, c) in self.num.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let mono = match i {
                0 => String::new(),
                1 => "q".into(),
                _ => format!("q^{i}"),
            };
            let t = if mono.is_empty() {
                format!("{c}")
            } else if c.is_one() {
                mono
            } else if (-c).is_one() {
                format!("-{mono}")
            } else {
                format!("{c}{mono}")
            };
            terms.push(t);
        }
        let joined = terms.join(" + ").replace("+ -", "- ");
        if self.den.is_one() {
            joined
        } else {
            format!("({joined})/{}", self.den)
        }
    }
}

fn trim(p: &mut Vec<BigRational>) {
    while p.last().map_or(false, Zero::is_zero) {
        p.pop();
    }
}

fn rat_poly_divmod(num: &[BigRational], den: &[BigRational]) -> (Vec<BigRational>, Vec<BigRational>) {
    let mut rem = num.to_vec();
    trim(&mut rem);
    let dd = den.len() - 1;
    if rem.len() <= dd {
        return (vec![], rem);
    }
    let mut quot = vec![BigRational::zero(); rem.len() - dd];
    let lead = den[dd].clone();
    for k in (0..quot.len()).rev() {
        let c = &rem[k + dd] / &lead;
        if !c.is_zero() {
            for j in 0..=dd {
                let t = &den[j] * &c;
                rem[k + j] -= t;
            }
        }
        quot[k] = c;
    }
    trim(&mut rem);
    (quot, rem)
}

fn rat_poly_mul(a: &[BigRational], b: &[BigRational]) -> Vec<BigRational> {
    if a.is_empty() || b.is_empty() {
        return vec![];
    }
    let mut out = vec![BigRational::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        if x.is_zero() {
            continue;
        }
        for (j, y) in b.iter().enumerate() {
            let t = x * y;
            out[i + j] += t;
        }
    }
    out
}

fn rat_poly_sub(a: &[BigRational], b: &[BigRational]) -> Vec<BigRational> {
    let n = a.len().max(b.len());
    let mut out = vec![BigRational::zero(); n];
    for (i, x) in a.iter().enumerate() {
        out[i] += x;
    }
    for (i, y) in b.iter().enumerate() {
        out[i] -= y;
    }
    trim(&mut out);
    out
}

impl PartialEq for CycloScalar {
    fn eq(&self, other: &Self) -> bool {
        self.ring.l == other.ring.l && self.den == other.den && self.num == other.num
    }
}
impl Eq for CycloScalar {}

impl fmt::Debug for CycloScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_poly_string())
    }
}

impl fmt::Display for CycloScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_poly_string())
    }
}

impl std::ops::Add for &CycloScalar {
    type Output = CycloScalar;
    fn add(self, rhs: &CycloScalar) -> CycloScalar {
        debug_assert_eq!(self.ring.l, rhs.ring.l);
        let deg = self.ring.deg;
        let mut num = Vec::with_capacity(deg);
        for i in 0..deg {
            num.push(&self.num[i] * &rhs.den + &rhs.num[i] * &self.den);
        }
        let mut out = CycloScalar {
            num,
            den: &self.den * &rhs.den,
            ring: Arc::clone(&self.ring),
        };
        out.normalize();
        out
    }
}

impl std::ops::Sub for &CycloScalar {
    type Output = CycloScalar;
    fn sub(self, rhs: &CycloScalar) -> CycloScalar {
        self + &(-rhs.clone())
    }
}

impl std::ops::Neg for CycloScalar {
    type Output = CycloScalar;
    fn neg(mut self) -> CycloScalar {
        for c in &mut self.num {
            *c = -c.clone();
        }
        self
    }
}

impl std::ops::Mul for &CycloScalar {
    type Output = CycloScalar;
    fn mul(self, rhs: &CycloScalar) -> CycloScalar {
        debug_assert_eq!(self.ring.l, rhs.ring.l);
        let deg = self.ring.deg;
        let mut raw = vec![BigInt::zero(); 2 * deg - 1];
        for i in 0..deg {
            if self.num[i].is_zero() {
                continue;
            }
            for j in 0..deg {
                if rhs.num[j].is_zero() {
                    continue;
                }
                let t = &self.num[i] * &rhs.num[j];
                raw[i + j] += t;
            }
        }
        CycloScalar::reduce_raw(&self.ring, raw, &self.den * &rhs.den)
    }
}

impl std::ops::Add for CycloScalar {
    type Output = CycloScalar;
    fn add(self, rhs: CycloScalar) -> CycloScalar {
        &self + &rhs
    }
}
impl std::ops::Sub for CycloScalar {
    type Output = CycloScalar;
    fn sub(self, rhs: CycloScalar) -> CycloScalar {
        &self - &rhs
    }
}
impl std::ops::Mul for CycloScalar {
    type Output = CycloScalar;
    fn mul(self, rhs: CycloScalar) -> CycloScalar {
        &self * &rhs
    }
}

impl std::ops::AddAssign<&CycloScalar> for CycloScalar {
    fn add_assign(&mut self, rhs: &CycloScalar) {
        *self = &*self + rhs;
    }
}
