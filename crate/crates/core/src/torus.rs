//! The Cartan subalgebras at a root of unity.
//!
//! Two pictures coexist here.  The small torus is the span of the group-likes
//! K^i, i in [0, 2l), with cyclic-convolution multiplication (K^(2l) = 1).  The
//! big torus is the divided-power lattice with basis K^delta [K;c;t], delta in
//! {0,1}, t in N, truncated at a configured bound.
//!
//! Big-torus arithmetic is done by evaluation and interpolation against the
//! characters K |-> zeta^M on the half-exponent lattice (zeta = q^(1/2),
//! M in Z).  Integer weights lambda sit at the even points M = 2*lambda; the
//! odd points are reached through the sign-twist automorphism K |-> -K and are
//! what makes the odd idempotents kappa'_n visible: they evaluate to zero at
//! every integer weight.

use std::collections::{BTreeMap, HashMap};
use std::sync::{Arc, Mutex};

use crate::cyclo::{CycloScalar, RootParams};
use crate::error::{AlgebraError, Result};
use crate::linalg::{Lu, Matrix};
use crate::qbinom::QBinomTable;

/// An element of B[K]/(K^(2l) - 1) in coordinates over {K^i}.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SmallTorusElement {
    coords: Vec<CycloScalar>,
}

/// A truncated element of the divided-power torus in the basis
/// {K^delta [K; c_shift; t]}.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BigTorusElement {
    pub c_shift: i64,
    pub coords: BTreeMap<(u8, u32), CycloScalar>,
}

impl BigTorusElement {
    pub fn zero(c_shift: i64) -> Self {
        BigTorusElement {
            c_shift,
            coords: BTreeMap::new(),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.coords.is_empty()
    }

    pub fn t_degree(&self) -> Option<u32> {
        self.coords.keys().map(|&(_, t)| t).max()
    }

    /// Every coordinate lies in B = Z[1/2][v]/Phi_l.
    pub fn assert_dyadic(&self) -> Result<()> {
        for (_, v) in &self.coords {
            if !v.is_dyadic() {
                return Err(AlgebraError::NotDyadic(v.denominator().to_string()));
            }
        }
        Ok(())
    }
}

/// Shared evaluation/interpolation state for one ring and truncation bound.
pub struct TorusContext {
    ring: Arc<RootParams>,
    pub qbinom: QBinomTable,
    t_cap: usize,
    interps: Mutex<HashMap<(i64, usize), Arc<Interp>>>,
}

struct Interp {
    ms: Vec<i64>,
    cols: Vec<(u8, u32)>,
    lu: Lu<CycloScalar>,
}

impl TorusContext {
    pub fn new(ring: Arc<RootParams>, t_cap: usize) -> Arc<Self> {
        Arc::new(TorusContext {
            qbinom: QBinomTable::new(ring.clone()),
            ring,
            t_cap,
            interps: Mutex::new(HashMap::new()),
        })
    }

    pub fn ring(&self) -> &Arc<RootParams> {
        &self.ring
    }

    pub fn l(&self) -> u64 {
        self.ring.l()
    }

    pub fn t_cap(&self) -> usize {
        self.t_cap
    }

    /// chi_M(K^delta [K;c;t]) = zeta^(M*delta) * G(M + 2c, t).
    pub fn eval_basis(&self, m: i64, delta: u8, c: i64, t: u32) -> CycloScalar {
        let g = self.qbinom.half_top(m + 2 * c, t as u64);
        if delta == 0 {
            g
        } else {
            &self.ring.zeta_power(m) * &g
        }
    }

    pub fn eval_big(&self, x: &BigTorusElement, m: i64) -> CycloScalar {
        let mut acc = self.ring.zero();
        for (&(delta, t), coef) in &x.coords {
            acc += &(coef * &self.eval_basis(m, delta, x.c_shift, t));
        }
        acc
    }

    /// Integer-weight character: K |-> q^lambda, [K;c;t] |-> [lambda + c choose t].
    pub fn eval_big_weight(&self, x: &BigTorusElement, lambda: i64) -> CycloScalar {
        self.eval_big(x, 2 * lambda)
    }

    fn interp(&self, c: i64, t_bound: usize) -> Result<Arc<Interp>> {
        let key = (c, t_bound);
        {
            let cache = self.interps.lock().unwrap();
            if let Some(found) = cache.get(&key) {
                return Ok(Arc::clone(found));
            }
        }
        let built = Arc::new(self.build_interp(c, t_bound)?);
        self.interps
            .lock()
            .unwrap()
            .insert(key, Arc::clone(&built));
        Ok(built)
    }

    fn build_interp(&self, c: i64, t_bound: usize) -> Result<Interp> {
        let n = 2 * (t_bound + 1);
        let cols: Vec<(u8, u32)> = (0..=t_bound as u32)
            .flat_map(|t| [(0u8, t), (1u8, t)])
            .collect();
        // the consecutive window works in practice; factor it directly and
        // only fall back to pivot-row selection over a larger pool if not
        let ms: Vec<i64> = (0..n as i64).collect();
        let rows: Vec<Vec<CycloScalar>> = ms
            .iter()
            .map(|&m| {
                cols.iter()
                    .map(|&(d, t)| self.eval_basis(m, d, c, t))
                    .collect()
            })
            .collect();
        if let Ok(lu) = Lu::factor(&Matrix::from_rows(rows)) {
            return Ok(Interp { ms, cols, lu });
        }
        let twol = 2 * self.ring.l() as usize;
        for retry in 1..=3usize {
            let pool: Vec<i64> = (0..(n + retry * twol) as i64).collect();
            if let Some(ms) = self.select_rows(&pool, c, &cols) {
                let rows: Vec<Vec<CycloScalar>> = ms
                    .iter()
                    .map(|&m| {
                        cols.iter()
                            .map(|&(d, t)| self.eval_basis(m, d, c, t))
                            .collect()
                    })
                    .collect();
                let lu = Lu::factor(&Matrix::from_rows(rows))?;
                return Ok(Interp { ms, cols, lu });
            }
        }
        Err(AlgebraError::SingularWindow(n))
    }

    /// Greedy pivot-row selection over the candidate point pool.
    fn select_rows(&self, pool: &[i64], c: i64, cols: &[(u8, u32)]) -> Option<Vec<i64>> {
        let n = cols.len();
        let mut work: Vec<(i64, Vec<CycloScalar>)> = pool
            .iter()
            .map(|&m| {
                (
                    m,
                    cols.iter()
                        .map(|&(d, t)| self.eval_basis(m, d, c, t))
                        .collect(),
                )
            })
            .collect();
        let mut chosen: Vec<i64> = Vec::with_capacity(n);
        let mut used = vec![false; work.len()];
        for col in 0..n {
            let mut pivot = None;
            for (idx, (_, row)) in work.iter().enumerate() {
                if !used[idx] && !row[col].is_zero() {
                    pivot = Some(idx);
                    break;
                }
            }
            let p = pivot?;
            used[p] = true;
            chosen.push(work[p].0);
            let inv = work[p].1[col].inv().ok()?;
            let pivot_row = work[p].1.clone();
            for (idx, (_, row)) in work.iter_mut().enumerate() {
                if used[idx] || row[col].is_zero() {
                    continue;
                }
                let factor = &row[col] * &inv;
                for j in col..n {
                    let t = &pivot_row[j] * &factor;
                    row[j] = &row[j] - &t;
                }
            }
        }
        Some(chosen)
    }

    /// Interpolate chi_M values into the c-shifted basis, with t <= t_bound.
    /// The solution is verified on extra evaluation points beyond the window;
    /// a mismatch means the values do not come from an element within the bound.
    pub fn interpolate_fn(
        &self,
        c: i64,
        t_bound: usize,
        f: &dyn Fn(i64) -> CycloScalar,
    ) -> Result<BigTorusElement> {
        if t_bound > self.t_cap {
            return Err(AlgebraError::Truncation {
                needed: t_bound,
                bound: self.t_cap,
            });
        }
        let interp = self.interp(c, t_bound)?;
        let rhs: Vec<CycloScalar> = interp.ms.iter().map(|&m| f(m)).collect();
        let sol = interp.lu.solve(&rhs);
        let mut coords = BTreeMap::new();
        for (i, &(d, t)) in interp.cols.iter().enumerate() {
            if !sol[i].is_zero() {
                coords.insert((d, t), sol[i].clone());
            }
        }
        let out = BigTorusElement { c_shift: c, coords };
        let check_from = interp.ms.iter().copied().max().unwrap_or(0) + 1;
        let extra = (self.ring.l() as i64).max(4);
        for m in check_from..check_from + extra {
            if self.eval_big(&out, m) != f(m) {
                return Err(AlgebraError::InconsistentValues);
            }
        }
        Ok(out)
    }

    /// Interpolation from explicit (point, value) pairs; points are on the
    /// half-exponent lattice (integer weights lambda sit at M = 2*lambda).
    pub fn interpolate(
        &self,
        values: &[(i64, CycloScalar)],
        t_bound: usize,
    ) -> Result<BigTorusElement> {
        let n = 2 * (t_bound + 1);
        if values.len() < n {
            return Err(AlgebraError::SingularWindow(values.len()));
        }
        let cols: Vec<(u8, u32)> = (0..=t_bound as u32)
            .flat_map(|t| [(0u8, t), (1u8, t)])
            .collect();
        let pool: Vec<i64> = values.iter().map(|&(m, _)| m).collect();
        let by_m: HashMap<i64, &CycloScalar> = values.iter().map(|(m, v)| (*m, v)).collect();
        let ms = self
            .select_rows(&pool, 0, &cols)
            .ok_or(AlgebraError::SingularWindow(values.len()))?;
        let rows: Vec<Vec<CycloScalar>> = ms
            .iter()
            .map(|&m| cols.iter().map(|&(d, t)| self.eval_basis(m, d, 0, t)).collect())
            .collect();
        let lu = Lu::factor(&Matrix::from_rows(rows))?;
        let rhs: Vec<CycloScalar> = ms.iter().map(|&m| by_m[&m].clone()).collect();
        let sol = lu.solve(&rhs);
        let mut coords = BTreeMap::new();
        for (i, &(d, t)) in cols.iter().enumerate() {
            if !sol[i].is_zero() {
                coords.insert((d, t), sol[i].clone());
            }
        }
        let out = BigTorusElement { c_shift: 0, coords };
        // all supplied values must be reproduced, not only the pivot ones
        for &(m, ref v) in values {
            if &self.eval_big(&out, m) != v {
                return Err(AlgebraError::InconsistentValues);
            }
        }
        Ok(out)
    }

    /// [K; c; t] rewritten in the c = 0 basis.
    pub fn expand_shifted(&self, c: i64, t: u32, t_bound: usize) -> Result<BigTorusElement> {
        if (t as usize) > t_bound {
            return Err(AlgebraError::Truncation {
                needed: t as usize,
                bound: t_bound,
            });
        }
        self.interpolate_fn(0, t as usize, &|m| self.qbinom.half_top(m + 2 * c, t as u64))
    }

    /// A small-torus element in big-torus coordinates (t <= l - 1 always).
    pub fn small_to_big(&self, x: &SmallTorusElement) -> Result<BigTorusElement> {
        let t_bound = (self.ring.l() - 1) as usize;
        self.interpolate_fn(0, t_bound, &|m| self.eval_small(x, m))
    }

    pub fn eval_small(&self, x: &SmallTorusElement, m: i64) -> CycloScalar {
        let mut acc = self.ring.zero();
        for (i, coef) in x.coords.iter().enumerate() {
            if coef.is_zero() {
                continue;
            }
            acc += &(coef * &self.ring.zeta_power(m * i as i64));
        }
        acc
    }

    /// Integer-weight character on the small torus: K |-> q^lambda.
    pub fn eval_small_weight(&self, x: &SmallTorusElement, lambda: i64) -> CycloScalar {
        self.eval_small(x, 2 * lambda)
    }

    /// Round a truncation bound up so factorization sizes are shared.
    pub fn round8(&self, t_bound: usize) -> usize {
        let rounded = (t_bound + 7) & !7;
        if rounded <= self.t_cap {
            rounded
        } else {
            t_bound
        }
    }

    /// kappa_{-s} * [K; 2s - la - lb; s] in the c = 0 basis; the statement
    /// under test is that this vanishes whenever l does not divide s.
    pub fn kappa_bracket_product(&self, s: u32, la: u64, lb: u64) -> Result<BigTorusElement> {
        let l = self.ring.l();
        let c = 2 * s as i64 - la as i64 - lb as i64;
        let t_bound = self.round8(s as usize + l as usize);
        self.interpolate_fn(0, t_bound, &|m| {
            if (m + 4 * s as i64).rem_euclid(2 * l as i64) == 0 {
                self.qbinom.half_top(m + 2 * c, s as u64)
            } else {
                self.ring.zero()
            }
        })
    }
}

impl SmallTorusElement {
    pub fn zero(ring: &Arc<RootParams>) -> Self {
        let n = 2 * ring.l() as usize;
        SmallTorusElement {
            coords: vec![ring.zero(); n],
        }
    }

    pub fn one(ring: &Arc<RootParams>) -> Self {
        Self::k_power(ring, 0)
    }

    pub fn k_power(ring: &Arc<RootParams>, i: i64) -> Self {
        let n = 2 * ring.l() as usize;
        let mut coords = vec![ring.zero(); n];
        let idx = i.rem_euclid(n as i64) as usize;
        coords[idx] = ring.one();
        SmallTorusElement { coords }
    }

    pub fn from_coords(coords: Vec<CycloScalar>) -> Self {
        SmallTorusElement { coords }
    }

    pub fn coords(&self) -> &[CycloScalar] {
        &self.coords
    }

    pub fn ring(&self) -> &Arc<RootParams> {
        self.coords[0].ring()
    }

    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(CycloScalar::is_zero)
    }

    pub fn add(&self, rhs: &Self) -> Self {
        let coords = self
            .coords
            .iter()
            .zip(&rhs.coords)
            .map(|(a, b)| a + b)
            .collect();
        SmallTorusElement { coords }
    }

    pub fn sub(&self, rhs: &Self) -> Self {
        let coords = self
            .coords
            .iter()
            .zip(&rhs.coords)
            .map(|(a, b)| a - b)
            .collect();
        SmallTorusElement { coords }
    }

    pub fn scale(&self, c: &CycloScalar) -> Self {
        SmallTorusElement {
            coords: self.coords.iter().map(|a| a * c).collect(),
        }
    }

    /// Cyclic convolution in B[K]/(K^(2l) - 1).
    pub fn mul(&self, rhs: &Self) -> Self {
        let n = self.coords.len();
        debug_assert_eq!(n, rhs.coords.len());
        let ring = self.ring().clone();
        let mut out = vec![ring.zero(); n];
        for (i, a) in self.coords.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coords.iter().enumerate() {
                if b.is_zero() {
                    continue;
                }
                out[(i + j) % n] += &(a * b);
            }
        }
        SmallTorusElement { coords: out }
    }

    /// K |-> -K.
    pub fn substitute_k_to_minus_k(&self) -> Self {
        let coords = self
            .coords
            .iter()
            .enumerate()
            .map(|(i, a)| if i % 2 == 1 { -a.clone() } else { a.clone() })
            .collect();
        SmallTorusElement { coords }
    }
}

/// kappa_n = (1/2l) sum_i q^(-2ni) K^i; depends only on n mod l.
pub fn kappa(ring: &Arc<RootParams>, n: i64) -> SmallTorusElement {
    let twol = 2 * ring.l() as usize;
    let inv_2l = ring.from_ratio(1, 2 * ring.l() as i64);
    let coords = (0..twol)
        .map(|i| &ring.q_power(-2 * n * i as i64) * &inv_2l)
        .collect();
    SmallTorusElement::from_coords(coords)
}

/// kappa'_n = (1/2l) sum_i zeta^(-ni) K^i; depends only on n mod 2l.
pub fn kappa_prime(ring: &Arc<RootParams>, n: i64) -> SmallTorusElement {
    let twol = 2 * ring.l() as usize;
    let inv_2l = ring.from_ratio(1, 2 * ring.l() as i64);
    let coords = (0..twol)
        .map(|i| &ring.zeta_power(-n * i as i64) * &inv_2l)
        .collect();
    SmallTorusElement::from_coords(coords)
}

/// kappa_bar_n = (1/2l) sum_i q^(-2ni) (-K)^i, the K |-> -K image of kappa_n.
pub fn kappa_bar(ring: &Arc<RootParams>, n: i64) -> SmallTorusElement {
    kappa(ring, n).substitute_k_to_minus_k()
}

/// The counit on the small torus: K^i |-> 1.
pub fn counit(x: &SmallTorusElement) -> CycloScalar {
    let mut acc = x.ring().zero();
    for c in x.coords() {
        acc += c;
    }
    acc
}

/// The closed form kappa_n = (1/2) sum_{i<l} (-1)^i [K;-2n;i](q^i + q^(-i-2n) K),
/// expanded in the small torus.  Bracket denominators are invertible because
/// i stays below l.
pub fn kappa_closed_form(ring: &Arc<RootParams>, n: i64) -> SmallTorusElement {
    closed_form(ring, n, true)
}

/// kappa_bar_n = (1/2) sum_{i<l} [K;-2n;i](q^i - q^(-i-2n) K).
pub fn kappa_bar_closed_form(ring: &Arc<RootParams>, n: i64) -> SmallTorusElement {
    closed_form(ring, n, false)
}

fn closed_form(ring: &Arc<RootParams>, n: i64, plain: bool) -> SmallTorusElement {
    let l = ring.l() as i64;
    let half = ring.from_ratio(1, 2);
    let mut acc = SmallTorusElement::zero(ring);
    for i in 0..l {
        let bracket = shifted_bracket_small(ring, -2 * n, i as u32);
        let ki = SmallTorusElement::k_power(ring, 1).scale(&ring.q_power(-i - 2 * n));
        let unit = SmallTorusElement::one(ring).scale(&ring.q_power(i));
        let inner = if plain { unit.add(&ki) } else { unit.sub(&ki) };
        let sign = if plain && i % 2 == 1 { -half.clone() } else { half.clone() };
        acc = acc.add(&bracket.mul(&inner).scale(&sign));
    }
    acc
}

/// [K; c; t] as an element of the small torus, valid for t < l.
pub fn shifted_bracket_small(ring: &Arc<RootParams>, c: i64, t: u32) -> SmallTorusElement {
    let mut acc = SmallTorusElement::one(ring);
    for h in 1..=t as i64 {
        let denom = (&ring.q_power(h) - &ring.q_power(-h))
            .inv()
            .expect("bracket denominators are nonzero below l");
        let factor = SmallTorusElement::k_power(ring, 1)
            .scale(&ring.q_power(c - h + 1))
            .sub(&SmallTorusElement::k_power(ring, -1).scale(&ring.q_power(-(c - h + 1))));
        acc = acc.mul(&factor.scale(&denom));
    }
    acc
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ctx(l: u64, t_cap: usize) -> Arc<TorusContext> {
        TorusContext::new(RootParams::new(l).unwrap(), t_cap)
    }

    #[test]
    fn kappa_periodicity_mod_l() {
        let r = RootParams::new(5).unwrap();
        for n in -3i64..8 {
            assert_eq!(kappa(&r, n), kappa(&r, n.rem_euclid(5)));
        }
        assert_eq!(kappa_bar(&r, 2), kappa_bar(&r, 7));
    }

    #[test]
    fn kappa_prime_periodicity_mod_2l() {
        let r = RootParams::new(3).unwrap();
        assert_eq!(kappa_prime(&r, 1), kappa_prime(&r, 7));
        assert_ne!(kappa_prime(&r, 1), kappa_prime(&r, 4));
        assert_eq!(kappa_prime(&r, 0), kappa(&r, 0));
    }

    #[test]
    fn kappa_absorbs_k_powers() {
        let r = RootParams::new(7).unwrap();
        let k = SmallTorusElement::k_power(&r, 1);
        let k0 = kappa(&r, 0);
        assert_eq!(k0.mul(&k), k0);
        // kappa_n * K = q^(2n) kappa_n
        let k2 = kappa(&r, 2);
        assert_eq!(k2.mul(&k), k2.scale(&r.q_power(4)));
    }

    #[test]
    fn kappa_orthogonality_and_idempotence() {
        for l in [3u64, 5] {
            let r = RootParams::new(l).unwrap();
            for n in 0..l as i64 {
                for m in 0..l as i64 {
                    let prod = kappa(&r, n).mul(&kappa(&r, m));
                    if n == m {
                        assert_eq!(prod, kappa(&r, n));
                    } else {
                        assert!(prod.is_zero());
                    }
                }
            }
        }
    }

    #[test]
    fn kappa_prime_partition_of_unity() {
        for l in [3u64, 5] {
            let r = RootParams::new(l).unwrap();
            let mut acc = SmallTorusElement::zero(&r);
            for n in 0..2 * l as i64 {
                acc = acc.add(&kappa_prime(&r, n));
            }
            assert_eq!(acc, SmallTorusElement::one(&r));
        }
    }

    #[test]
    fn k_power_expansion_over_primed_idempotents() {
        // K^m = sum_n zeta^(mn) kappa'_n, checked coordinatewise at l = 3, m = 1.
        let r = RootParams::new(3).unwrap();
        let mut acc = SmallTorusElement::zero(&r);
        for n in 0..6i64 {
            acc = acc.add(&kappa_prime(&r, n).scale(&r.zeta_power(n)));
        }
        assert_eq!(acc, SmallTorusElement::k_power(&r, 1));
    }

    #[test]
    fn closed_form_matches_average_form() {
        for l in [3u64, 5] {
            let r = RootParams::new(l).unwrap();
            for n in 0..l as i64 {
                assert_eq!(kappa_closed_form(&r, n), kappa(&r, n), "kappa l={l} n={n}");
                assert_eq!(kappa_bar_closed_form(&r, n), kappa_bar(&r, n), "bar l={l} n={n}");
            }
        }
    }

    #[test]
    fn kappa_prime_splits_by_parity() {
        // kappa'_n = kappa_{n/4} for even n, kappa_bar_{n/4} for odd n, where
        // /4 is inversion of 4 mod l.
        for l in [3u64, 5, 7] {
            let r = RootParams::new(l).unwrap();
            let li = l as i64;
            let inv4 = (0..li).find(|x| (4 * x) % li == 1).unwrap();
            for n in 0..2 * li {
                let idx = n * inv4;
                let expected = if n % 2 == 0 {
                    kappa(&r, idx)
                } else {
                    kappa_bar(&r, idx)
                };
                assert_eq!(kappa_prime(&r, n), expected, "l={l} n={n}");
            }
        }
    }

    #[test]
    fn kappa_bar_evaluates_to_zero_on_integer_weights() {
        let r = RootParams::new(5).unwrap();
        let c = ctx(5, 12);
        let kb = kappa_bar(&r, 0);
        for lambda in 0..10 {
            assert!(c.eval_small_weight(&kb, lambda).is_zero());
        }
        assert!(!kb.is_zero());
    }

    #[test]
    fn kappa_even_sum_has_even_support_at_l3() {
        let r = RootParams::new(3).unwrap();
        let s = kappa_bar(&r, 0).add(&kappa(&r, 0));
        for (i, coef) in s.coords().iter().enumerate() {
            if i % 2 == 1 {
                assert!(coef.is_zero());
            }
        }
    }

    #[test]
    fn counit_invariance_characterizes_kappa() {
        // x * kappa_0 = counit(x) * kappa_0 for anything in the K-span.
        let r = RootParams::new(5).unwrap();
        let k0 = kappa(&r, 0);
        for i in 0..10 {
            let x = SmallTorusElement::k_power(&r, i).scale(&r.q_power(i));
            let lhs = x.mul(&k0);
            let rhs = k0.scale(&counit(&x));
            assert_eq!(lhs, rhs);
        }
    }

    #[test]
    fn eval_char_on_basis_elements() {
        let c = ctx(3, 8);
        let r = c.ring().clone();
        // K at weight 1 gives q.
        let k = SmallTorusElement::k_power(&r, 1);
        assert_eq!(c.eval_small_weight(&k, 1), r.q());
        // [K; 0; l] at weight l gives [l choose l] = 1.
        let l = 3;
        assert!(c.qbinom.get(l, l as u64).is_one());
        // kappa_0 at weight lambda: 1 if l | lambda else 0.
        let k0 = kappa(&r, 0);
        for lambda in 0..9i64 {
            let v = c.eval_small_weight(&k0, lambda);
            if lambda % 3 == 0 {
                assert!(v.is_one());
            } else {
                assert!(v.is_zero());
            }
        }
    }

    #[test]
    fn interpolate_recovers_basis_element_k() {
        let c = ctx(5, 6);
        let r = c.ring().clone();
        let values: Vec<(i64, CycloScalar)> = (0..20)
            .map(|m| (m, c.eval_basis(m, 1, 0, 0)))
            .collect();
        let x = c.interpolate(&values, 3).unwrap();
        assert_eq!(x.coords.len(), 1);
        assert!(x.coords.get(&(1, 0)).unwrap().is_one());
        let _ = r;
    }

    #[test]
    fn interpolate_round_trip_on_small_torus() {
        let c = ctx(3, 8);
        let r = c.ring().clone();
        for i in 0..6 {
            let x = SmallTorusElement::k_power(&r, i).scale(&r.from_ratio(3, 4));
            let big = c.small_to_big(&x).unwrap();
            for m in 0..14 {
                assert_eq!(c.eval_big(&big, m), c.eval_small(&x, m));
            }
        }
    }

    #[test]
    fn k_squared_expansion_matches_recurrence() {
        // K^2 [K;0;0] = a_0(0) K [K;0;1] + b_0(0), with
        // a_c(t) = q^(t-c)(q^(t+1) - q^(-t-1)), b_c(t) = q^(2(t-c)).
        let c = ctx(5, 4);
        let r = c.ring().clone();
        let big = c
            .interpolate_fn(0, 1, &|m| {
                &c.eval_basis(m, 0, 0, 0) * &c.ring().zeta_power(2 * m)
            })
            .unwrap();
        let a00 = &r.one() * &(&r.q() - &r.q_power(-1));
        let b00 = r.one();
        assert_eq!(big.coords.get(&(1, 1)), Some(&a00));
        assert_eq!(big.coords.get(&(0, 0)), Some(&b00));
        assert_eq!(big.coords.len(), 2);
    }

    #[test]
    fn expand_shifted_eval_consistency() {
        let c = ctx(5, 10);
        for (cc, t) in [(0i64, 2u32), (2, 3), (-4, 4), (7, 1)] {
            let big = c.expand_shifted(cc, t, 8).unwrap();
            assert_eq!(big.c_shift, 0);
            for lambda in -5..12 {
                let direct = c.qbinom.get(lambda + cc, t as u64);
                assert_eq!(c.eval_big_weight(&big, lambda), direct, "c={cc} t={t} lambda={lambda}");
            }
        }
    }

    #[test]
    fn expand_shifted_at_c_zero_is_identity() {
        let c = ctx(3, 6);
        let big = c.expand_shifted(0, 2, 4).unwrap();
        assert_eq!(big.coords.len(), 1);
        assert!(big.coords.get(&(0, 2)).unwrap().is_one());
    }

    #[test]
    fn shifted_interpolation_reproduces_kappa_closed_coefficients() {
        // In the c = -2n shifted basis the coordinates of kappa_n are
        // (-1)^i q^i / 2 at (0, i) and (-1)^i q^(-i-2n) / 2 at (1, i).
        for l in [3u64, 5] {
            let c = ctx(l, 2 * l as usize);
            let r = c.ring().clone();
            for n in 0..l as i64 {
                let kap = kappa(&r, n);
                let big = c
                    .interpolate_fn(-2 * n, (l - 1) as usize, &|m| c.eval_small(&kap, m))
                    .unwrap();
                big.assert_dyadic().unwrap();
                let half = r.from_ratio(1, 2);
                for i in 0..l as i64 {
                    let sign = if i % 2 == 1 { -half.clone() } else { half.clone() };
                    let c0 = &r.q_power(i) * &sign;
                    let c1 = &r.q_power(-i - 2 * n) * &sign;
                    assert_eq!(big.coords.get(&(0, i as u32)), Some(&c0), "l={l} n={n} i={i}");
                    assert_eq!(big.coords.get(&(1, i as u32)), Some(&c1), "l={l} n={n} i={i}");
                }
            }
        }
    }

    #[test]
    fn fundamental_vanishing_at_l3() {
        let c = ctx(3, 12);
        // a = b = 1: s in {1, 2} vanish, s = 3 survives.
        for s in [1u32, 2] {
            let prod = c.kappa_bracket_product(s, 3, 3).unwrap();
            assert!(prod.is_zero(), "s={s} should vanish");
        }
        let surv = c.kappa_bracket_product(3, 3, 3).unwrap();
        assert!(!surv.is_zero());
    }

    #[test]
    fn inconsistent_interpolation_detected() {
        let c = ctx(3, 6);
        let r = c.ring().clone();
        // values of [K;0;3] cannot be captured with t_bound 2
        let res = c.interpolate_fn(0, 2, &|m| c.qbinom.half_top(m, 3));
        assert!(matches!(res, Err(AlgebraError::InconsistentValues)));
        let _ = r;
    }
}
