//! Named verification suites over one configuration, producing check reports.
//! Each suite pins the identities it runs and the bounds it needs; randomized
//! parts draw from a seeded generator so reports are reproducible.

use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::bridge::reduction_from_quantum;
use crate::cyclo::RootParams;
use crate::error::Result;
use crate::hyper::{HyperAlgebra, PrimeField};
use crate::identities::{nullity_suite, vanishing_suite};
use crate::modp::check_odd_prime;
use crate::pbw::{classical_algebra, phi, verify_fundamental_vanishing, PBWElement, UqContext};
use crate::report::Check;
use crate::repr::{
    check_module_relations, classical_weyl_module, contract, find_intertwiner, frobenius_twist,
    ideal_dimension_check, tensor, tensor_classical, weyl_module,
};
use crate::tensor::{coproduct, coproduct_classical, TensorElement};
use crate::torus::{kappa, kappa_bar, kappa_bar_closed_form, kappa_closed_form, kappa_prime,
    SmallTorusElement, TorusContext};

#[derive(Clone, Debug)]
pub struct SuiteConfig {
    pub l: u64,
    pub p: Option<u64>,
    pub seed: u64,
    pub samples: usize,
    /// Replace the seeded pair samples by the full bounded sweep.
    pub exhaustive: bool,
}

impl SuiteConfig {
    pub fn new(l: u64) -> Self {
        SuiteConfig {
            l,
            p: None,
            seed: 0x5eed,
            samples: 64,
            exhaustive: false,
        }
    }

    pub fn with_p(mut self, p: u64) -> Self {
        self.p = Some(p);
        self
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }

    pub fn with_samples(mut self, samples: usize) -> Self {
        self.samples = samples;
        self
    }

    pub fn with_exhaustive(mut self, exhaustive: bool) -> Self {
        self.exhaustive = exhaustive;
        self
    }

    /// Pairs of basis indices for the multiplicativity properties: either the
    /// seeded sample or the full sweep with indices <= 2.
    fn index_pairs(&self) -> Vec<((u32, u32, u32), (u32, u32, u32))> {
        if self.exhaustive {
            let mut out = Vec::new();
            for a1 in 0..3u32 {
                for i1 in 0..3u32 {
                    for c1 in 0..3u32 {
                        for a2 in 0..3u32 {
                            for i2 in 0..3u32 {
                                for c2 in 0..3u32 {
                                    out.push(((a1, i1, c1), (a2, i2, c2)));
                                }
                            }
                        }
                    }
                }
            }
            out
        } else {
            let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
            (0..self.samples)
                .map(|_| {
                    (
                        (
                            rng.gen_range(0..3u32),
                            rng.gen_range(0..3u32),
                            rng.gen_range(0..3u32),
                        ),
                        (
                            rng.gen_range(0..3u32),
                            rng.gen_range(0..3u32),
                            rng.gen_range(0..3u32),
                        ),
                    )
                })
                .collect()
        }
    }
}

pub const SUITE_NAMES: &[&str] = &[
    "torus",
    "splitting",
    "vanishing",
    "identities",
    "modular",
    "bridge",
    "hopf",
    "contraction",
    "blocks",
];

pub fn run_suite(name: &str, cfg: &SuiteConfig) -> Result<Vec<Check>> {
    match name {
        "torus" => torus_suite(cfg),
        "splitting" => splitting_suite(cfg),
        "vanishing" => vanishing_bracket_suite(cfg),
        "identities" => identities_suite(cfg),
        "modular" => modular_suite(cfg),
        "bridge" => bridge_suite(cfg),
        "hopf" => hopf_suite(cfg),
        "contraction" => contraction_suite(cfg),
        "blocks" => blocks_suite(cfg),
        other => Err(crate::error::AlgebraError::Config(format!(
            "unknown suite '{other}'; available: {}",
            SUITE_NAMES.join(", ")
        ))),
    }
}

fn splitting_context(l: u64) -> Result<Arc<UqContext>> {
    let ring = RootParams::new(l)?;
    let torus = TorusContext::new(ring, 12 * l as usize + 6);
    Ok(UqContext::new(torus, 8 * l as u32))
}

/// Idempotent partition, orthogonality, integrality, and the closed forms.
pub fn torus_suite(cfg: &SuiteConfig) -> Result<Vec<Check>> {
    let l = cfg.l;
    let ring = RootParams::new(l)?;
    let ctx = TorusContext::new(ring.clone(), 2 * l as usize);
    let mut checks = Vec::new();

    // sum of the primed idempotents is 1
    let mut acc = SmallTorusElement::zero(&ring);
    for n in 0..2 * l as i64 {
        acc = acc.add(&kappa_prime(&ring, n));
    }
    checks.push(Check::of(
        format!("kappa_prime_partition_l{l}"),
        "sum over n in [0,2l) of kappa'_n = 1",
        acc == SmallTorusElement::one(&ring),
        "sum differs from 1",
    ));

    // pairwise orthogonal idempotents
    let mut orth_ok = true;
    let mut witness = String::new();
    for n in 0..2 * l as i64 {
        for m in 0..2 * l as i64 {
            let prod = kappa_prime(&ring, n).mul(&kappa_prime(&ring, m));
            let expected = if n == m {
                kappa_prime(&ring, n)
            } else {
                SmallTorusElement::zero(&ring)
            };
            if prod != expected {
                orth_ok = false;
                witness = format!("(n, m) = ({n}, {m})");
            }
        }
    }
    checks.push(Check::of(
        format!("kappa_prime_orthogonality_l{l}"),
        "kappa'_n kappa'_m = delta_nm kappa'_n",
        orth_ok,
        witness,
    ));

    // unprimed family: kappa_n kappa_m = kappa_n iff n = m mod l
    let mut orth_ok = true;
    let mut witness = String::new();
    for n in 0..l as i64 {
        for m in 0..l as i64 {
            let prod = kappa(&ring, n).mul(&kappa(&ring, m));
            let expected = if n == m {
                kappa(&ring, n)
            } else {
                SmallTorusElement::zero(&ring)
            };
            if prod != expected {
                orth_ok = false;
                witness = format!("(n, m) = ({n}, {m})");
            }
        }
    }
    checks.push(Check::of(
        format!("kappa_orthogonality_l{l}"),
        "kappa_n kappa_m = [n = m mod l] kappa_n",
        orth_ok,
        witness,
    ));

    // closed forms match the averaged forms, and every divided-power
    // coordinate is 2-integral
    let mut closed_ok = true;
    let mut dyadic_ok = true;
    let mut pattern_ok = true;
    let mut witness = String::new();
    for n in 0..l as i64 {
        if kappa_closed_form(&ring, n) != kappa(&ring, n)
            || kappa_bar_closed_form(&ring, n) != kappa_bar(&ring, n)
        {
            closed_ok = false;
            witness = format!("n = {n}");
        }
        for x in [kappa(&ring, n), kappa_bar(&ring, n)] {
            let big = ctx.small_to_big(&x)?;
            if big.assert_dyadic().is_err() {
                dyadic_ok = false;
                witness = format!("n = {n}");
            }
        }
        // shifted-basis coefficients reproduce the (-1)^i/2 (q^i, q^(-i-2n)) pattern
        let kap = kappa(&ring, n);
        let shifted = ctx.interpolate_fn(-2 * n, (l - 1) as usize, &|m| ctx.eval_small(&kap, m))?;
        let half = ring.from_ratio(1, 2);
        for i in 0..l as i64 {
            let sign = if i % 2 == 1 { -half.clone() } else { half.clone() };
            let c0 = &ring.q_power(i) * &sign;
            let c1 = &ring.q_power(-i - 2 * n) * &sign;
            if shifted.coords.get(&(0, i as u32)) != Some(&c0)
                || shifted.coords.get(&(1, i as u32)) != Some(&c1)
            {
                pattern_ok = false;
                witness = format!("n = {n}, i = {i}");
            }
        }
    }
    for n in 0..2 * l as i64 {
        let big = ctx.small_to_big(&kappa_prime(&ring, n))?;
        if big.assert_dyadic().is_err() {
            dyadic_ok = false;
            witness = format!("kappa'_{n}");
        }
    }
    checks.push(Check::of(
        format!("kappa_closed_form_l{l}"),
        "averaged and closed forms of kappa_n and kappa_bar_n coincide",
        closed_ok,
        witness.clone(),
    ));
    checks.push(Check::of(
        format!("kappa_integrality_l{l}"),
        "every divided-power coordinate of kappa_n, kappa_bar_n, kappa'_n is 2-integral",
        dyadic_ok,
        witness.clone(),
    ));
    checks.push(Check::of(
        format!("kappa_shifted_pattern_l{l}"),
        "shifted-basis coordinates of kappa_n are (-1)^i/2 (q^i, q^(-i-2n))",
        pattern_ok,
        witness,
    ));

    // K^m = sum_n zeta^(mn) kappa'_n
    let mut expansion_ok = true;
    for m in 0..2 * l as i64 {
        let mut acc = SmallTorusElement::zero(&ring);
        for n in 0..2 * l as i64 {
            acc = acc.add(&kappa_prime(&ring, n).scale(&ring.zeta_power(m * n)));
        }
        if acc != SmallTorusElement::k_power(&ring, m) {
            expansion_ok = false;
        }
    }
    checks.push(Check::of(
        format!("k_power_expansion_l{l}"),
        "K^m = sum_n zeta^(mn) kappa'_n",
        expansion_ok,
        "expansion failed",
    ));

    // counit invariance: x kappa_0 = counit(x) kappa_0 on seeded samples
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let k0 = kappa(&ring, 0);
    let mut invariance_ok = true;
    for _ in 0..cfg.samples {
        let x = random_small_torus(&ring, &mut rng);
        let lhs = x.mul(&k0);
        let rhs = k0.scale(&crate::torus::counit(&x));
        if lhs != rhs {
            invariance_ok = false;
        }
    }
    checks.push(Check::of(
        format!("kappa_invariance_l{l}"),
        "x kappa = counit(x) kappa for x in the K-span",
        invariance_ok,
        "invariance failed on a sample",
    ));

    // characters are multiplicative on seeded pairs
    let mut char_ok = true;
    for _ in 0..cfg.samples {
        let x = random_small_torus(&ring, &mut rng);
        let y = random_small_torus(&ring, &mut rng);
        let m = rng.gen_range(-20..20);
        let lhs = ctx.eval_small(&x.mul(&y), m);
        let rhs = &ctx.eval_small(&x, m) * &ctx.eval_small(&y, m);
        if lhs != rhs {
            char_ok = false;
        }
    }
    checks.push(Check::of(
        format!("character_multiplicative_l{l}"),
        "chi_M(xy) = chi_M(x) chi_M(y) on seeded pairs",
        char_ok,
        "character failed to be multiplicative",
    ));

    Ok(checks)
}

fn random_small_torus(ring: &Arc<RootParams>, rng: &mut ChaCha8Rng) -> SmallTorusElement {
    let mut acc = SmallTorusElement::zero(ring);
    for _ in 0..3 {
        let i = rng.gen_range(0..2 * ring.l() as i64);
        let e = rng.gen_range(0..ring.l() as i64);
        let den: i64 = [1, 2, 4][rng.gen_range(0..3)];
        let coef = &ring.q_power(e) * &ring.from_ratio(1, den);
        acc = acc.add(&SmallTorusElement::k_power(ring, i).scale(&coef));
    }
    acc
}

/// Fr(phi(x)) = x on the classical basis, and phi(xy) = phi(x) phi(y) on
/// seeded random basis pairs.
pub fn splitting_suite(cfg: &SuiteConfig) -> Result<Vec<Check>> {
    let l = cfg.l;
    let ctx = splitting_context(l)?;
    let alg = classical_algebra(&ctx);
    let mut checks = Vec::new();

    let mut retract_ok = true;
    let mut witness = String::new();
    for a in 0..=2u32 {
        for i in 0..=2u32 {
            for c in 0..=2u32 {
                let x = alg.basis(a, i, c);
                let img = phi(&ctx, &x)?;
                img.assert_dyadic()?;
                let back = img.frobenius(&ctx)?;
                if back != x {
                    retract_ok = false;
                    witness = format!("({a}, {i}, {c})");
                }
            }
        }
    }
    checks.push(Check::of(
        format!("fr_splits_phi_l{l}"),
        "Fr(phi(x)) = x for every basis element with indices <= 2",
        retract_ok,
        witness,
    ));

    let mut mult_ok = true;
    let mut witness = String::new();
    // the splitting is linear, so images of basis elements are shared
    let mut phi_cache: std::collections::HashMap<(u32, u32, u32), PBWElement> =
        std::collections::HashMap::new();
    let mut phi_of = |idx: (u32, u32, u32)| -> Result<PBWElement> {
        if let Some(found) = phi_cache.get(&idx) {
            return Ok(found.clone());
        }
        let img = phi(&ctx, &alg.basis(idx.0, idx.1, idx.2))?;
        phi_cache.insert(idx, img.clone());
        Ok(img)
    };
    let pairs = cfg.index_pairs();
    let pair_count = pairs.len();
    for (ix, iy) in pairs {
        let x = alg.basis(ix.0, ix.1, ix.2);
        let y = alg.basis(iy.0, iy.1, iy.2);
        let product = alg.mul(&x, &y)?;
        let mut lhs = PBWElement::zero();
        for (&(a, i, c), coef) in &product.coords {
            lhs = lhs.add(&phi_of((a, i, c))?.scale(coef));
        }
        let rhs = phi_of(ix)?.mul(&ctx, &phi_of(iy)?)?;
        if lhs != rhs {
            mult_ok = false;
            witness = format!("{ix:?} * {iy:?}");
            break;
        }
    }
    checks.push(Check::of(
        format!("phi_multiplicative_l{l}"),
        format!(
            "phi(xy) = phi(x) phi(y) on {pair_count} {} basis pairs",
            if cfg.exhaustive { "exhaustively swept" } else { "seeded" }
        ),
        mult_ok,
        witness,
    ));

    // kappa is a two-sided unit of the image
    let kap = PBWElement::from_torus_block(ctx.kappa_block(), 0, 0);
    let mut unit_ok = true;
    for (a, i, c) in [(1u32, 0u32, 0u32), (0, 1, 0), (0, 0, 1), (1, 1, 1)] {
        let img = phi(&ctx, &alg.basis(a, i, c))?;
        if img.mul(&ctx, &kap)? != img || kap.mul(&ctx, &img)? != img {
            unit_ok = false;
        }
    }
    checks.push(Check::of(
        format!("kappa_unit_of_image_l{l}"),
        "kappa phi(x) = phi(x) kappa = phi(x)",
        unit_ok,
        "kappa failed to act as the unit",
    ));

    Ok(checks)
}

/// The bracket vanishing behind the splitting, for all degrees <= 2.
pub fn vanishing_bracket_suite(cfg: &SuiteConfig) -> Result<Vec<Check>> {
    let ctx = splitting_context(cfg.l)?;
    let mut checks = Vec::new();
    for a in 1..=2u32 {
        for b in a..=2u32 {
            checks.extend(verify_fundamental_vanishing(&ctx, a, b)?);
        }
    }
    Ok(checks)
}

/// Symmetric-sum identities and the coordinate nullity families.
pub fn identities_suite(cfg: &SuiteConfig) -> Result<Vec<Check>> {
    let l = cfg.l;
    let ring = RootParams::new(l)?;
    let mut checks = vanishing_suite(&ring);
    let ctx = TorusContext::new(ring.clone(), 4 * l as usize + 4);
    checks.extend(nullity_suite(&ctx, 1, 1)?);

    // the successive-quotient closed form agrees with direct summation;
    // the points q^0, ..., q^(n-1) stay distinct only while n <= l
    let mut quotient_ok = true;
    let mut witness = String::new();
    for n in 2..=4usize.min(l as usize) {
        let pts = crate::identities::EvalPoint::q_powers(
            &ring,
            &(0..n as i64).collect::<Vec<_>>(),
        );
        for d in 0..=l {
            let direct = crate::identities::s_poly(d, &pts);
            match crate::identities::s_poly_quotient(d, &pts) {
                Ok(q) if q == direct => {}
                other => {
                    quotient_ok = false;
                    witness = format!("d={d} n={n}: {other:?} vs {direct}");
                }
            }
        }
    }
    checks.push(Check::of(
        format!("s_quotient_form_l{l}"),
        "the divided-difference closed form of S_(d,n) equals direct summation",
        quotient_ok,
        witness,
    ));

    // closed recursion coefficients agree with interpolation
    let mut alpha_ok = true;
    let mut witness = String::new();
    'outer: for c in [0i64, 2, -2] {
        for m in 0..=(2 * l) {
            for t in 0..=l.min(4) {
                let alpha = crate::identities::alpha_coefficients(&ring, m, t, c);
                let direct = ctx.interpolate_fn(c, ctx.round8((t + m) as usize), &|mm| {
                    &ring.zeta_power(mm * m as i64) * &ctx.qbinom.half_top(mm + 2 * c, t)
                })?;
                let expected: std::collections::BTreeMap<(u8, u32), _> =
                    alpha.into_iter().collect();
                if direct.coords != expected {
                    alpha_ok = false;
                    witness = format!("m={m} t={t} c={c}");
                    break 'outer;
                }
            }
        }
    }
    checks.push(Check::of(
        format!("alpha_closed_recursion_l{l}"),
        "closed coefficients of K^m [K;c;t] match evaluation/interpolation",
        alpha_ok,
        witness,
    ));
    Ok(checks)
}

/// The mu-idempotents, base changes, tower rule, Frobenius retraction, and
/// the multiplicativity of the modular splitting.
pub fn modular_suite(cfg: &SuiteConfig) -> Result<Vec<Check>> {
    let p = cfg.p.unwrap_or(cfg.l);
    check_odd_prime(p)?;
    let alg = HyperAlgebra::new(PrimeField(p), (4 * p * p * p) as u32);
    let mut checks = Vec::new();

    for r in 1..=2u32 {
        let pr = p.pow(r) as i64;
        let mut sum = crate::hyper::HyperElement::zero();
        let mut orth_ok = true;
        let mut two_routes_ok = true;
        for n in 0..pr {
            sum = alg.add(&sum, &alg.mu_hyper(n, r));
            if alg.mu(n, r) != alg.mu_via_definition(n, r) {
                two_routes_ok = false;
            }
            for m in 0..pr {
                let prod = alg.mul(&alg.mu_hyper(n, r), &alg.mu_hyper(m, r))?;
                let expected = if n == m {
                    alg.mu_hyper(n, r)
                } else {
                    crate::hyper::HyperElement::zero()
                };
                if prod != expected {
                    orth_ok = false;
                }
            }
        }
        checks.push(Check::of(
            format!("mu_partition_p{p}_r{r}"),
            format!("sum over n < p^{r} of mu_n^({r}) = 1 with pairwise orthogonality"),
            sum == alg.one() && orth_ok,
            "partition failed",
        ));
        checks.push(Check::of(
            format!("mu_two_routes_p{p}_r{r}"),
            "base-change and alternating-sum constructions of mu agree",
            two_routes_ok,
            "routes disagree",
        ));

        // base-change matrices are mutual inverses: the (n, i) entries are
        // binom(p^r-1-n, p^r-1-i) one way and binom(i, n) back
        let mut inverse_ok = true;
        for a in 0..pr {
            for b in 0..pr {
                let mut acc = crate::modp::ModPScalar::zero(p);
                for k in 0..pr {
                    let fwd = crate::modp::binom_mod_p(pr - 1 - a, (pr - 1 - k) as u64, p);
                    let bwd = crate::modp::binom_mod_p(b, k as u64, p);
                    acc = acc.add(&fwd.mul(&bwd));
                }
                let expected = u64::from(a == b);
                if acc.value != expected {
                    inverse_ok = false;
                }
            }
        }
        checks.push(Check::of(
            format!("mu_base_change_p{p}_r{r}"),
            "the matrices binom(p^r-1-n, p^r-1-i) and binom(i, n) are mutual inverses",
            inverse_ok,
            "matrices are not inverse",
        ));

        // Fr^r(mu_n^(r)) = delta_(n,0)
        let mut fr_ok = true;
        for n in 0..pr {
            let mut x = alg.mu_hyper(n, r);
            for _ in 0..r {
                x = alg.fr(&x);
            }
            let expected = if n == 0 {
                alg.one()
            } else {
                crate::hyper::HyperElement::zero()
            };
            if x != expected {
                fr_ok = false;
            }
        }
        checks.push(Check::of(
            format!("fr_kills_mu_p{p}_r{r}"),
            format!("Fr^{r}(mu_n^({r})) = [n = 0]"),
            fr_ok,
            "Frobenius image wrong",
        ));
    }

    // tower rule mu_(m+np)^(r+1) = mu_m Fr'(mu_n^(r))
    let mut tower_ok = true;
    for m in 0..p as i64 {
        for n in 0..p as i64 {
            let lhs = alg.mu_hyper(m + n * p as i64, 2);
            let rhs = alg.mul(&alg.mu_hyper(m, 1), &alg.fr_prime(&alg.mu_hyper(n, 1))?)?;
            if lhs != rhs {
                tower_ok = false;
            }
        }
    }
    checks.push(Check::of(
        format!("mu_tower_p{p}"),
        "mu_(m+np)^(r+1) = mu_m Fr'(mu_n^(r))",
        tower_ok,
        "tower rule failed",
    ));

    // Fr(phi(x)) = x for all basis indices < p^2
    let mut retract_ok = true;
    let mut witness = String::new();
    let bound = (p * p) as u32;
    'retract: for a in 0..bound {
        for i in 0..bound {
            for c in 0..bound {
                let x = alg.basis(a, i, c);
                if alg.fr(&alg.phi_modular(&x)?) != x {
                    retract_ok = false;
                    witness = format!("({a}, {i}, {c})");
                    break 'retract;
                }
            }
        }
    }
    checks.push(Check::of(
        format!("fr_splits_phi_modular_p{p}"),
        format!("Fr(phi(x)) = x on all basis elements with indices < {bound}"),
        retract_ok,
        witness,
    ));

    // phi multiplicative on seeded pairs (or the bounded exhaustive sweep)
    let mut mult_ok = true;
    let pairs: Vec<((u32, u32, u32), (u32, u32, u32))> = if cfg.exhaustive {
        cfg.index_pairs()
    } else {
        let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
        (0..cfg.samples)
            .map(|_| {
                (
                    (
                        rng.gen_range(0..p * p) as u32,
                        rng.gen_range(0..p * p) as u32,
                        rng.gen_range(0..p * p) as u32,
                    ),
                    (
                        rng.gen_range(0..p * p) as u32,
                        rng.gen_range(0..p * p) as u32,
                        rng.gen_range(0..p * p) as u32,
                    ),
                )
            })
            .collect()
    };
    let pair_count = pairs.len();
    for (ix, iy) in pairs {
        let x = alg.basis(ix.0, ix.1, ix.2);
        let y = alg.basis(iy.0, iy.1, iy.2);
        let lhs = alg.phi_modular(&alg.mul(&x, &y)?)?;
        let rhs = alg.mul(&alg.phi_modular(&x)?, &alg.phi_modular(&y)?)?;
        if lhs != rhs {
            mult_ok = false;
        }
    }
    checks.push(Check::of(
        format!("phi_modular_multiplicative_p{p}"),
        format!("phi(xy) = phi(x) phi(y) on {pair_count} pairs"),
        mult_ok,
        "splitting not multiplicative",
    ));

    // commutation of the mu family on a few instances
    for (a, b, c) in [(1u32, 0i64, 1u32), (2, 1, 1), (0, 2, 0)] {
        checks.extend(alg.commute_mu(a, b, c, 1)?);
    }

    Ok(checks)
}

/// Reduction mod p intertwines the quantum and modular splittings.
pub fn bridge_suite(cfg: &SuiteConfig) -> Result<Vec<Check>> {
    let p = cfg.p.unwrap_or(cfg.l);
    check_odd_prime(p)?;
    if p != cfg.l {
        return Err(crate::error::AlgebraError::Config(format!(
            "bridge suite needs l = p, got l = {} and p = {p}",
            cfg.l
        )));
    }
    let ctx = splitting_context(p)?;
    let alg = HyperAlgebra::new(PrimeField(p), (8 * p * p) as u32);
    let cl = classical_algebra(&ctx);
    let ring = ctx.torus.ring().clone();
    let mut checks = Vec::new();

    let mut kappa_ok = true;
    let mut witness = String::new();
    for n in 0..p as i64 {
        let kap = PBWElement::from_small_torus(&ctx, &kappa(&ring, n))?;
        let image = reduction_from_quantum(&ctx, &alg, &kap)?;
        if image != alg.mu_hyper(2 * n, 1) {
            kappa_ok = false;
            witness = format!("n = {n}");
        }
    }
    checks.push(Check::of(
        format!("kappa_reduces_to_mu_p{p}"),
        "reduction(kappa_n) = mu_(2n)",
        kappa_ok,
        witness,
    ));

    let mut intertwine_ok = true;
    let mut witness = String::new();
    for (a, i, c) in [(0u32, 0u32, 0u32), (1, 0, 0), (0, 1, 0), (0, 0, 1)] {
        let lhs = reduction_from_quantum(&ctx, &alg, &phi(&ctx, &cl.basis(a, i, c))?)?;
        let rhs = alg.phi_modular(&alg.basis(a, i, c))?;
        if lhs != rhs {
            intertwine_ok = false;
            witness = format!("({a}, {i}, {c})");
        }
    }
    checks.push(Check::of(
        format!("reduction_intertwines_phi_p{p}"),
        "reduction(phi_quantum(g)) = phi_modular(reduction(g)) on generators",
        intertwine_ok,
        witness,
    ));

    Ok(checks)
}

/// Comultiplication compatibilities.
pub fn hopf_suite(cfg: &SuiteConfig) -> Result<Vec<Check>> {
    let l = cfg.l;
    let ctx = splitting_context(l)?;
    let mut checks = Vec::new();

    let mut fr_delta_ok = true;
    let mut witness = String::new();
    for n in 1..=2 * l as u32 {
        for (tag, gen) in [
            ("E", PBWElement::e_power(&ctx, n)?),
            ("F", PBWElement::f_power(&ctx, n)?),
        ] {
            let lhs = coproduct(&ctx, &gen)?.frobenius_both(&ctx)?;
            let rhs = coproduct_classical(&gen.frobenius(&ctx)?);
            if lhs != rhs {
                fr_delta_ok = false;
                witness = format!("{tag}^({n})");
            }
        }
    }
    let k = PBWElement::k_gen(&ctx);
    let lhs = coproduct(&ctx, &k)?.frobenius_both(&ctx)?;
    let rhs = coproduct_classical(&k.frobenius(&ctx)?);
    if lhs != rhs {
        fr_delta_ok = false;
        witness = "K".into();
    }
    checks.push(Check::of(
        format!("fr_tensor_delta_l{l}"),
        format!("(Fr x Fr) Delta = Delta Fr on divided powers up to degree {}", 2 * l),
        fr_delta_ok,
        witness,
    ));

    let kap = PBWElement::from_torus_block(ctx.kappa_block(), 0, 0);
    let kk = TensorElement::of(&kap, &kap);
    let absorbed = coproduct(&ctx, &kap)?.mul(&ctx, &kk)?;
    checks.push(Check::of(
        format!("delta_kappa_absorption_l{l}"),
        "Delta(kappa)(kappa x kappa) = kappa x kappa",
        absorbed == kk,
        "absorption failed",
    ));

    let omega_psi = kap.psi(&ctx)?.omega(&ctx)?;
    checks.push(Check::of(
        format!("omega_psi_kappa_l{l}"),
        "Omega(Psi(kappa)) = kappa",
        omega_psi == kap,
        "kappa not fixed",
    ));

    Ok(checks)
}

/// Contraction dimensions, characters, and the tensor compatibility.
pub fn contraction_suite(cfg: &SuiteConfig) -> Result<Vec<Check>> {
    let l = cfg.l;
    let ring = RootParams::new(l)?;
    let mut checks = Vec::new();

    let mut dims_ok = true;
    let mut witness = String::new();
    for s in 1..=3u32 {
        let big = weyl_module(&ring, l as u32 * s)?;
        let rel = check_module_relations(&big, l as usize);
        if !crate::report::all_passed(&rel) {
            dims_ok = false;
            witness = format!("relations failed on V({})", l as u32 * s);
        }
        let small = contract(&big)?;
        let expected: Vec<i64> = {
            let mut w: Vec<i64> = (0..=s as i64).map(|j| s as i64 - 2 * j).collect();
            w.sort_unstable();
            w
        };
        if small.dim() != s as usize + 1 || small.character() != expected {
            dims_ok = false;
            witness = format!("s = {s}");
        }
    }
    checks.push(Check::of(
        format!("contraction_dims_l{l}"),
        "contract(V(l s)) has dimension s+1 with weights {s, s-2, ..., -s}",
        dims_ok,
        witness,
    ));

    let v = weyl_module(&ring, l as u32)?;
    let m = classical_weyl_module(&ring, 1)?;
    let mfr = frobenius_twist(&m);
    let lhs = contract(&tensor(&v, &mfr)?)?;
    let rhs = tensor_classical(&contract(&v)?, &m)?;
    let straight = lhs.character() == rhs.character() && find_intertwiner(&lhs, &rhs)?.is_some();
    let lhs_m = contract(&tensor(&mfr, &v)?)?;
    let rhs_m = tensor_classical(&m, &contract(&v)?)?;
    let mirrored =
        lhs_m.character() == rhs_m.character() && find_intertwiner(&lhs_m, &rhs_m)?.is_some();
    checks.push(Check::of(
        format!("tensor_contraction_l{l}"),
        "(V x M^Fr)^phi = V^phi x M and its mirror, by character and explicit intertwiner",
        straight && mirrored,
        format!("straight {straight}, mirrored {mirrored}"),
    ));

    Ok(checks)
}

/// Ideal ranks in the small quantum algebra and the modular block dimensions.
pub fn blocks_suite(cfg: &SuiteConfig) -> Result<Vec<Check>> {
    let l = cfg.l;
    let ring = RootParams::new(l)?;
    let torus = TorusContext::new(ring, 8 * l as usize);
    let ctx = UqContext::new(torus, 4 * l as u32);
    let mut checks = Vec::new();
    for n in 0..2 * l as i64 {
        checks.extend(ideal_dimension_check(&ctx, n)?);
    }
    if let Some(p) = cfg.p {
        let alg = HyperAlgebra::new(PrimeField(p), (p * p * p) as u32);
        checks.extend(alg.block_decomposition_check(1, 1)?);
    }
    Ok(checks)
}
