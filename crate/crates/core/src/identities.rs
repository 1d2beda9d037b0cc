//! Complete homogeneous symmetric sums S_{d,n} evaluated at roots of unity,
//! their closed forms, the vanishing identities they satisfy, and the coefficient
//! families that drive the torus expansions of K^m [K;c;t].

use std::sync::Arc;

use crate::cyclo::{CycloScalar, RootParams};
use crate::error::{AlgebraError, Result};
use crate::qbinom::int_binomial;
use crate::report::Check;
use crate::torus::TorusContext;

/// Evaluation point: a tuple of scalars, usually l-th roots of unity.
#[derive(Clone, Debug)]
pub struct EvalPoint {
    pub values: Vec<CycloScalar>,
}

impl EvalPoint {
    pub fn new(values: Vec<CycloScalar>) -> Self {
        EvalPoint { values }
    }

    pub fn q_powers(ring: &Arc<RootParams>, exponents: &[i64]) -> Self {
        EvalPoint {
            values: exponents.iter().map(|&e| ring.q_power(e)).collect(),
        }
    }

    fn pairwise_distinct(&self) -> bool {
        for i in 0..self.values.len() {
            for j in (i + 1)..self.values.len() {
                if self.values[i] == self.values[j] {
                    return false;
                }
            }
        }
        true
    }
}

/// S_{d,n} = sum over weakly increasing tuples i_1 <= ... <= i_d of
/// x_{i_1} ... x_{i_d}, by literal enumeration.  The number of terms is
/// binom(n+d-1, d), so this is only for small d and n; the suites use the
/// recurrence-based evaluation below and cross-check against this one.
pub fn s_poly_direct(d: u64, pt: &EvalPoint) -> CycloScalar {
    let ring = pt.values[0].ring().clone();
    let n = pt.values.len();
    let mut acc = ring.zero();
    let mut tuple: Vec<usize> = vec![0; d as usize];
    loop {
        let mut term = ring.one();
        for &i in &tuple {
            term = &term * &pt.values[i];
        }
        acc += &term;
        // next weakly increasing tuple
        let mut pos = d as usize;
        loop {
            if pos == 0 {
                return acc;
            }
            pos -= 1;
            if tuple[pos] + 1 < n {
                let v = tuple[pos] + 1;
                for slot in &mut tuple[pos..] {
                    *slot = v;
                }
                break;
            }
        }
    }
}

/// Number of monomials in S_{d,n}.
pub fn s_poly_term_count(d: u64, n: u64) -> num_bigint::BigInt {
    int_binomial((n + d - 1) as i64, d)
}

/// All of S_{0,n}, ..., S_{dmax,n} by the recurrence
/// S_{d,n} = sum_i x_n^i S_{d-i,n-1}; one dynamic-programming sweep.
pub fn s_poly_table(dmax: u64, pt: &EvalPoint) -> Vec<CycloScalar> {
    let ring = pt.values[0].ring().clone();
    let mut row: Vec<CycloScalar> = vec![ring.zero(); dmax as usize + 1];
    row[0] = ring.one();
    for x in &pt.values {
        // S_{d, k} = sum_{i=0}^{d} x^i S_{d-i, k-1}, computed in place:
        // S_{d,k} = S_{d,k-1} + x * S_{d-1,k}
        for d in 1..row.len() {
            let t = x * &row[d - 1];
            row[d] = &row[d] + &t;
        }
    }
    row
}

pub fn s_poly(d: u64, pt: &EvalPoint) -> CycloScalar {
    s_poly_table(d, pt)[d as usize].clone()
}

/// The divided-difference closed form: S_{d,n} is the Newton divided
/// difference of t^(d+n-1) over the n points, built from the successive
/// quotients (x_j^(d+n-1) - x_i^(d+n-1)) / (x_j - x_i).
pub fn s_poly_quotient(d: u64, pt: &EvalPoint) -> Result<CycloScalar> {
    if !pt.pairwise_distinct() {
        return Err(AlgebraError::Config(
            "divided-difference form needs pairwise distinct points".into(),
        ));
    }
    let n = pt.values.len();
    let e = d + n as u64 - 1;
    let mut table: Vec<CycloScalar> = pt
        .values
        .iter()
        .map(|x| {
            let mut acc = x.ring().one();
            for _ in 0..e {
                acc = &acc * x;
            }
            acc
        })
        .collect();
    for level in 1..n {
        for i in 0..(n - level) {
            let num = &table[i + 1] - &table[i];
            let den = (&pt.values[i + level] - &pt.values[i]).inv()?;
            table[i] = &num * &den;
        }
    }
    Ok(table[0].clone())
}

/// a_c(t) = q^(t-c) (q^(t+1) - q^(-t-1)); b_c(t) = q^(2(t-c)).
pub fn coeff_a(ring: &Arc<RootParams>, c: i64, t: i64) -> CycloScalar {
    &ring.q_power(t - c) * &(&ring.q_power(t + 1) - &ring.q_power(-t - 1))
}

pub fn coeff_b(ring: &Arc<RootParams>, c: i64, t: i64) -> CycloScalar {
    ring.q_power(2 * (t - c))
}

/// The coordinates of K^m [K;c;t] over the basis K^delta [K;c;n], from the
/// closed recursions: for 0 <= i <= ceil(m/2) - 1,
///   alpha_(1, t+m-1-2i) = a_c(t+m-2-2i) prod_{j<m-2-2i} a_c(t+j)
///                          * S_{i, m-2i}(b_c(t), ..., b_c(t+m-1-2i)),
///   alpha_(0, t+m-2-2i) = b_c(t+m-2-2i) prod_{j<m-2-2i} a_c(t+j)
///                          * S_{i, m-2i-1}(b_c(t), ..., b_c(t+m-2-2i)),
/// plus alpha_(1, t) = b_c(t)^((m-1)/2) when m is odd, and the trivial cases
/// m = 0, 1.
pub fn alpha_coefficients(
    ring: &Arc<RootParams>,
    m: u64,
    t: u64,
    c: i64,
) -> Vec<((u8, u32), CycloScalar)> {
    let t = t as i64;
    let mut out = Vec::new();
    if m == 0 {
        out.push(((0, t as u32), ring.one()));
        return out;
    }
    if m == 1 {
        out.push(((1, t as u32), ring.one()));
        return out;
    }
    let m = m as i64;
    let half = if m % 2 == 0 { m / 2 } else { (m - 1) / 2 };
    for i in 0..half {
        let prod_a = |upper: i64| -> CycloScalar {
            let mut acc = ring.one();
            for j in 0..=upper {
                acc = &acc * &coeff_a(ring, c, t + j);
            }
            acc
        };
        // delta = 1 coordinate at t + m - 1 - 2i
        {
            let pts = EvalPoint::new(
                (0..(m - 2 * i))
                    .map(|k| coeff_b(ring, c, t + k))
                    .collect(),
            );
            let s = s_poly(i as u64, &pts);
            let lead = coeff_a(ring, c, t + m - 2 - 2 * i);
            let tail = prod_a(m - 3 - 2 * i);
            out.push((
                (1, (t + m - 1 - 2 * i) as u32),
                &(&lead * &tail) * &s,
            ));
        }
        // delta = 0 coordinate at t + m - 2 - 2i
        {
            let pts = EvalPoint::new(
                (0..(m - 2 * i - 1))
                    .map(|k| coeff_b(ring, c, t + k))
                    .collect(),
            );
            let s = s_poly(i as u64, &pts);
            let lead = coeff_b(ring, c, t + m - 2 - 2 * i);
            let tail = prod_a(m - 3 - 2 * i);
            out.push((
                (0, (t + m - 2 - 2 * i) as u32),
                &(&lead * &tail) * &s,
            ));
        }
    }
    if m % 2 == 1 {
        // alpha_(1, t) = S_((m-1)/2, 1)(b_c(t)) = b_c(t)^((m-1)/2)
        let mut acc = ring.one();
        for _ in 0..(m - 1) / 2 {
            acc = &acc * &coeff_b(ring, c, t);
        }
        out.push(((1, t as u32), acc));
    }
    out.retain(|(_, v)| !v.is_zero());
    out
}

/// The vanishing suite over one root order: the S_(d,n) vanishing for
/// d + n >= l + 1 at distinct l-th roots, the full-sum vanishing away from 1,
/// and the closed value l / prod (1 - q^(2k)) at the standard point.
pub fn vanishing_suite(ring: &Arc<RootParams>) -> Vec<Check> {
    let l = ring.l();
    let mut checks = Vec::new();

    // S_{d,n}(q^0, q^2, ..., q^(2(n-1))) = 0 for 1 <= d <= l-1, 2 <= n <= l, d+n >= l+1
    let mut bad = Vec::new();
    for n in 2..=l {
        let pts = EvalPoint::q_powers(ring, &(0..n as i64).map(|i| 2 * i).collect::<Vec<_>>());
        let table = s_poly_table(l - 1, &pts);
        for d in 1..=(l - 1) {
            if d + n < l + 1 {
                continue;
            }
            if !table[d as usize].is_zero() {
                bad.push(format!("(d={d}, n={n}) -> {}", table[d as usize]));
            }
        }
    }
    checks.push(Check::of(
        format!("s_vanishing_l{l}"),
        format!("S_(d,n) = 0 at distinct {l}-th roots for d+n >= {l}+1, exhaustive"),
        bad.is_empty(),
        bad.join("; "),
    ));

    // sum_{d=0}^{l-1} S_{d,n} = 0 at distinct roots all different from 1
    let mut bad = Vec::new();
    for n in 1..=(l - 1) {
        let pts = EvalPoint::q_powers(ring, &(1..=n as i64).map(|i| 2 * i).collect::<Vec<_>>());
        let table = s_poly_table(l - 1, &pts);
        let mut total = ring.zero();
        for v in &table {
            total += v;
        }
        if !total.is_zero() {
            bad.push(format!("n={n} -> {total}"));
        }
    }
    checks.push(Check::of(
        format!("s_full_sum_vanishing_l{l}"),
        format!("sum_(d<{l}) S_(d,n) = 0 at distinct roots != 1"),
        bad.is_empty(),
        bad.join("; "),
    ));

    // sum_{d=0}^{l-1} S_{d,n}(1, q^2, ..., q^(2(n-1))) = l / prod_(k<n) (1 - q^(2k))
    let mut bad = Vec::new();
    for n in 1..=(l - 1) {
        let pts = EvalPoint::q_powers(ring, &(0..n as i64).map(|i| 2 * i).collect::<Vec<_>>());
        let table = s_poly_table(l - 1, &pts);
        let mut total = ring.zero();
        for v in &table {
            total += v;
        }
        let mut denom = ring.one();
        for k in 1..n as i64 {
            denom = &denom * &(&ring.one() - &ring.q_power(2 * k));
        }
        match denom.inv() {
            Ok(inv) => {
                let expected = &ring.from_int(l as i64) * &inv;
                if total != expected {
                    bad.push(format!("n={n}: {total} != {expected}"));
                }
            }
            Err(_) => bad.push(format!("n={n}: denominator not invertible")),
        }
    }
    checks.push(Check::of(
        format!("s_closed_value_l{l}"),
        format!("sum_(d<{l}) S_(d,n)(1, q^2, ...) = {l} / prod (1 - q^(2k))"),
        bad.is_empty(),
        bad.join("; "),
    ));

    checks
}

/// The five coordinate families of kappa_(-s) [K; 2s-la-lb; s], evaluated
/// literally; each must vanish for l not dividing s.  The arguments of the
/// symmetric sums are b_(2s)(s), b_(2s)(s+1), ... with b_(2s)(t) = q^(2(t-2s)).
pub fn nullity_families(ring: &Arc<RootParams>, s: u64) -> Vec<(String, CycloScalar)> {
    let l = ring.l() as i64;
    let s = s as i64;
    let b = |t: i64| ring.q_power(2 * (t - 2 * s));
    let a = |t: i64| coeff_a(ring, 2 * s, t);
    let spoints = |n: i64| EvalPoint::new((0..n).map(|k| b(s + k)).collect());
    let weighted_sum = |n: i64, dmax: i64| -> CycloScalar {
        // 1 + q^(4s) S_(1,n) + q^(8s) S_(2,n) + ... + q^(4 dmax s) S_(dmax, n)
        let table = s_poly_table(dmax as u64, &spoints(n));
        let mut acc = ring.zero();
        for (d, v) in table.iter().enumerate() {
            acc += &(&ring.q_power(4 * d as i64 * s) * v);
        }
        acc
    };
    let prod_a = |upper: i64| -> CycloScalar {
        let mut acc = ring.one();
        for k in 0..=upper {
            acc = &acc * &a(s + k);
        }
        acc
    };

    let mut out = Vec::new();
    // alpha_(0, s): 1 + q^(4s) S_(1,1) + ... + q^(4(l-1)s) S_(l-1,1)
    out.push(("alpha_0_s".to_string(), weighted_sum(1, l - 1)));
    // odd i: alpha_(1, s+i-1), i = 2j+1 in [1, 2l-1]
    for j in 0..l {
        let i = 2 * j + 1;
        if i > 2 * l - 1 {
            break;
        }
        let v = &(&ring.q_power(2 * s * i) * &prod_a(i - 2)) * &weighted_sum(i, l - 1 - j);
        out.push((format!("alpha_1_s+{}_odd", i - 1), v));
    }
    // odd i: alpha_(0, s+i), i = 2j+1 in [1, 2l-3]
    for j in 0..l {
        let i = 2 * j + 1;
        if i > 2 * l - 3 {
            break;
        }
        let v = &(&(&ring.q_power(2 * s * (i + 2)) * &b(s + i)) * &prod_a(i - 1))
            * &weighted_sum(i + 1, l - 2 - j);
        out.push((format!("alpha_0_s+{i}_odd"), v));
    }
    // even i: alpha_(1, s+i-1), i = 2j in [2, 2l-2]
    for j in 1..l {
        let i = 2 * j;
        if i > 2 * l - 2 {
            break;
        }
        let v = &(&ring.q_power(2 * s * i) * &prod_a(i - 2)) * &weighted_sum(i, l - 1 - j);
        out.push((format!("alpha_1_s+{}_even", i - 1), v));
    }
    // even i: alpha_(0, s+i), i = 2j in [2, 2l-4]
    for j in 1..l {
        let i = 2 * j;
        if i > 2 * l - 4 {
            break;
        }
        let v = &(&(&ring.q_power(2 * s * (i + 2)) * &b(s + i)) * &prod_a(i - 1))
            * &weighted_sum(i + 1, l - 2 - j);
        out.push((format!("alpha_0_s+{i}_even"), v));
    }
    out
}

/// Nullity of all five families for every s in [1, min(la, lb)] not divisible
/// by l, cross-checked against the torus-side product.
pub fn nullity_suite(ctx: &TorusContext, a: u64, b: u64) -> Result<Vec<Check>> {
    let ring = ctx.ring();
    let l = ring.l();
    let la = l * a;
    let lb = l * b;
    let mut checks = Vec::new();
    for s in 1..=la.min(lb) {
        if s % l == 0 {
            continue;
        }
        let fams = nullity_families(ring, s);
        let bad: Vec<String> = fams
            .iter()
            .filter(|(_, v)| !v.is_zero())
            .map(|(name, v)| format!("{name} = {v}"))
            .collect();
        checks.push(Check::of(
            format!("nullity_families_l{l}_s{s}"),
            format!("all coordinate families of kappa_(-{s}) [K; 2*{s}-{la}-{lb}; {s}] vanish"),
            bad.is_empty(),
            bad.join("; "),
        ));
        let torus_side = ctx.kappa_bracket_product(s as u32, la, lb)?;
        checks.push(Check::of(
            format!("nullity_torus_cross_check_l{l}_s{s}"),
            format!("torus product kappa_(-{s}) [K; ...; {s}] has zero coordinates"),
            torus_side.is_zero(),
            format!("{:?}", torus_side.coords),
        ));
    }
    Ok(checks)
}
