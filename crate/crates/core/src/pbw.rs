//! The divided-power quantum algebra of sl2 at a root of unity, in the PBW
//! normal form F^(a) K^delta [K;0;t] E^(b).
//!
//! Products are normalized in three moves:
//!   E^(b) F^(a) = sum_s F^(a-s) [K; 2s-a-b; s] E^(b-s),
//!   torus elements slide past F^(m) and E^(m) by shifting their evaluation
//!   point (K picks up q^(-2m) when crossing F^(m) to the right),
//!   equal divided powers merge with Gaussian binomial coefficients.
//! The middle torus factors are multiplied pointwise on the character lattice
//! and interpolated back into the divided-power basis, so the vanishing
//! kappa_(-s) [K; 2s-la-lb; s] = 0 for l not dividing s is a literal zero of
//! stored coordinates.

use std::cell::RefCell;
use std::collections::{BTreeMap, HashMap};
use std::sync::{Arc, OnceLock};

use crate::cyclo::CycloScalar;
use crate::error::{AlgebraError, Result};
use crate::hyper::{CycloRing, HyperAlgebra, HyperElement};
use crate::report::Check;
use crate::torus::{kappa, BigTorusElement, SmallTorusElement, TorusContext};

/// Basis index (a, delta, t, b) for F^(a) K^delta [K;0;t] E^(b).
pub type PbwIdx = (u32, u8, u32, u32);

#[derive(Clone, Debug, PartialEq)]
pub struct PBWElement {
    pub coords: BTreeMap<PbwIdx, CycloScalar>,
}

/// Torus coordinates (delta, t) of one F/E bidegree.
pub type TorusBlock = BTreeMap<(u8, u32), CycloScalar>;

/// Shared state: the torus machinery plus divided-power degree bounds.
pub struct UqContext {
    pub torus: Arc<TorusContext>,
    pub a_max: u32,
    kappa_block: OnceLock<TorusBlock>,
}

impl UqContext {
    pub fn new(torus: Arc<TorusContext>, a_max: u32) -> Arc<Self> {
        Arc::new(UqContext {
            torus,
            a_max,
            kappa_block: OnceLock::new(),
        })
    }

    /// Default bounds: divided-power degree 3l, truncation 2l.
    pub fn with_default_bounds(ring: Arc<crate::cyclo::RootParams>) -> Arc<Self> {
        let l = ring.l();
        let torus = TorusContext::new(ring, 2 * l as usize);
        Self::new(torus, 3 * l as u32)
    }

    pub fn l(&self) -> u64 {
        self.torus.l()
    }

    /// kappa = kappa_0 in divided-power coordinates; all coordinates are
    /// 2-integral, which is asserted on first use.
    pub fn kappa_block(&self) -> &TorusBlock {
        self.kappa_block.get_or_init(|| {
            let k = kappa(self.torus.ring(), 0);
            let big = self
                .torus
                .small_to_big(&k)
                .expect("kappa expands in the divided-power basis");
            big.assert_dyadic()
                .expect("kappa has 2-integral coordinates");
            big.coords
        })
    }
}

fn block_t_max(block: &TorusBlock) -> u32 {
    block.keys().map(|&(_, t)| t).max().unwrap_or(0)
}

fn block_has_k(block: &TorusBlock) -> bool {
    block.keys().any(|&(d, _)| d == 1)
}

/// Memoized character evaluation of one torus block.
struct BlockEval<'a> {
    ctx: &'a TorusContext,
    block: &'a TorusBlock,
    memo: RefCell<HashMap<i64, CycloScalar>>,
}

impl<'a> BlockEval<'a> {
    fn new(ctx: &'a TorusContext, block: &'a TorusBlock) -> Self {
        BlockEval {
            ctx,
            block,
            memo: RefCell::new(HashMap::new()),
        }
    }

    fn eval(&self, m: i64) -> CycloScalar {
        if let Some(v) = self.memo.borrow().get(&m) {
            return v.clone();
        }
        let mut acc = self.ctx.ring().zero();
        for (&(delta, t), coef) in self.block {
            acc += &(coef * &self.ctx.eval_basis(m, delta, 0, t));
        }
        self.memo.borrow_mut().insert(m, acc.clone());
        acc
    }
}

impl PBWElement {
    pub fn zero() -> Self {
        PBWElement {
            coords: BTreeMap::new(),
        }
    }

    pub fn one(ctx: &UqContext) -> Self {
        let mut coords = BTreeMap::new();
        coords.insert((0, 0, 0, 0), ctx.torus.ring().one());
        PBWElement { coords }
    }

    pub fn e_power(ctx: &UqContext, n: u32) -> Result<Self> {
        check_degree(ctx, n)?;
        let mut coords = BTreeMap::new();
        coords.insert((0, 0, 0, n), ctx.torus.ring().one());
        Ok(PBWElement { coords })
    }

    pub fn f_power(ctx: &UqContext, n: u32) -> Result<Self> {
        check_degree(ctx, n)?;
        let mut coords = BTreeMap::new();
        coords.insert((n, 0, 0, 0), ctx.torus.ring().one());
        Ok(PBWElement { coords })
    }

    pub fn k_gen(ctx: &UqContext) -> Self {
        let mut coords = BTreeMap::new();
        coords.insert((0, 1, 0, 0), ctx.torus.ring().one());
        PBWElement { coords }
    }

    pub fn bracket(ctx: &UqContext, t: u32) -> Result<Self> {
        if t as usize > ctx.torus.t_cap() {
            return Err(AlgebraError::Truncation {
                needed: t as usize,
                bound: ctx.torus.t_cap(),
            });
        }
        let mut coords = BTreeMap::new();
        coords.insert((0, 0, t, 0), ctx.torus.ring().one());
        Ok(PBWElement { coords })
    }

    /// A pure torus element placed between F^(a) and E^(b).
    pub fn from_torus_block(block: &TorusBlock, a: u32, b: u32) -> Self {
        let mut coords = BTreeMap::new();
        for (&(d, t), v) in block {
            coords.insert((a, d, t, b), v.clone());
        }
        PBWElement { coords }
    }

    pub fn from_big_torus(big: &BigTorusElement) -> Self {
        assert_eq!(big.c_shift, 0, "PBW torus coordinates use the unshifted basis");
        let mut coords = BTreeMap::new();
        for (&(d, t), v) in &big.coords {
            coords.insert((0, d, t, 0), v.clone());
        }
        PBWElement { coords }
    }

    pub fn from_small_torus(ctx: &UqContext, x: &SmallTorusElement) -> Result<Self> {
        Ok(Self::from_big_torus(&ctx.torus.small_to_big(x)?))
    }

    pub fn is_zero(&self) -> bool {
        self.coords.is_empty()
    }

    pub fn scale(&self, s: &CycloScalar) -> Self {
        let mut out = PBWElement::zero();
        for (idx, v) in &self.coords {
            let sv = v * s;
            if !sv.is_zero() {
                out.coords.insert(*idx, sv);
            }
        }
        out
    }

    pub fn add(&self, rhs: &Self) -> Self {
        let mut out = self.clone();
        for (idx, v) in &rhs.coords {
            accumulate(&mut out.coords, *idx, v.clone());
        }
        out
    }

    pub fn sub(&self, rhs: &Self) -> Self {
        let mut out = self.clone();
        for (idx, v) in &rhs.coords {
            accumulate(&mut out.coords, *idx, -v.clone());
        }
        out
    }

    /// Group coordinates by F/E bidegree.
    pub fn torus_blocks(&self) -> BTreeMap<(u32, u32), TorusBlock> {
        let mut out: BTreeMap<(u32, u32), TorusBlock> = BTreeMap::new();
        for (&(a, d, t, b), v) in &self.coords {
            out.entry((a, b)).or_default().insert((d, t), v.clone());
        }
        out
    }

    /// Normal-form product.
    pub fn mul(&self, ctx: &UqContext, rhs: &Self) -> Result<Self> {
        let xb = self.torus_blocks();
        let yb = rhs.torus_blocks();
        let x_blocks: Vec<(&(u32, u32), &TorusBlock)> = xb.iter().collect();
        let y_blocks: Vec<(&(u32, u32), &TorusBlock)> = yb.iter().collect();
        let x_evals: Vec<BlockEval> = x_blocks
            .iter()
            .map(|(_, bl)| BlockEval::new(&ctx.torus, bl))
            .collect();
        let y_evals: Vec<BlockEval> = y_blocks
            .iter()
            .map(|(_, bl)| BlockEval::new(&ctx.torus, bl))
            .collect();

        struct Term {
            coef: CycloScalar,
            ix: usize,
            shift1: i64,
            s: u32,
            c_mid: i64,
            iy: usize,
            shift2: i64,
        }
        let mut buckets: BTreeMap<(u32, u32), (Vec<Term>, u32)> = BTreeMap::new();

        for (ix, (&(a1, b1), bl1)) in x_blocks.iter().enumerate() {
            let t1 = block_t_max(bl1);
            let k1 = block_has_k(bl1);
            for (iy, (&(a2, b2), bl2)) in y_blocks.iter().enumerate() {
                let t2 = block_t_max(bl2);
                let k2 = block_has_k(bl2);
                for s in 0..=b1.min(a2) {
                    let a_out = a1 + a2 - s;
                    let b_out = b1 + b2 - s;
                    check_degree(ctx, a_out.max(b_out))?;
                    let coef = &ctx.torus.qbinom.get(a_out as i64, a1 as u64)
                        * &ctx.torus.qbinom.get(b_out as i64, b2 as u64);
                    if coef.is_zero() {
                        continue;
                    }
                    let t_term = t1 + t2 + s + u32::from(k1 && k2);
                    let entry = buckets.entry((a_out, b_out)).or_insert_with(|| (Vec::new(), 0));
                    entry.0.push(Term {
                        coef,
                        ix,
                        shift1: 4 * (a2 - s) as i64,
                        s,
                        c_mid: 2 * s as i64 - a2 as i64 - b1 as i64,
                        iy,
                        shift2: 4 * (b1 - s) as i64,
                    });
                    entry.1 = entry.1.max(t_term);
                }
            }
        }

        let mut out = PBWElement::zero();
        for ((a_out, b_out), (terms, t_bound)) in buckets {
            // round the bound up so factorizations are shared across buckets
            let t_bound = round_bound(ctx, t_bound as usize);
            let big = ctx.torus.interpolate_fn(0, t_bound, &|m| {
                let mut acc = ctx.torus.ring().zero();
                for term in &terms {
                    let mut v = term.coef.clone();
                    v = &v * &x_evals[term.ix].eval(m - term.shift1);
                    if v.is_zero() {
                        continue;
                    }
                    if term.s > 0 {
                        v = &v * &ctx.torus.qbinom.half_top(m + 2 * term.c_mid, term.s as u64);
                        if v.is_zero() {
                            continue;
                        }
                    }
                    v = &v * &y_evals[term.iy].eval(m - term.shift2);
                    acc += &v;
                }
                acc
            })?;
            for ((d, t), v) in big.coords {
                accumulate(&mut out.coords, (a_out, d, t, b_out), v);
            }
        }
        Ok(out)
    }

    /// The sign-twist automorphism: E |-> -E, F |-> F, K |-> -K.
    pub fn tilde(&self) -> Self {
        let mut out = PBWElement::zero();
        for (&(a, d, t, b), v) in &self.coords {
            let sign_flips = (b + d as u32 + t) % 2 == 1;
            let nv = if sign_flips { -v.clone() } else { v.clone() };
            out.coords.insert((a, d, t, b), nv);
        }
        out
    }

    /// Omega: the algebra involution E <-> F, K -> K^(-1).
    pub fn omega(&self, ctx: &UqContext) -> Result<Self> {
        let mut out = PBWElement::zero();
        for ((a, b), block) in self.torus_blocks() {
            let tau = conjugate_torus_block(ctx, &block)?;
            let term = PBWElement::e_power(ctx, a)?
                .mul(ctx, &PBWElement::from_torus_block(&tau, 0, 0))?
                .mul(ctx, &PBWElement::f_power(ctx, b)?)?;
            out = out.add(&term);
        }
        Ok(out)
    }

    /// Psi: the anti-involution fixing E and F, inverting K.
    pub fn psi(&self, ctx: &UqContext) -> Result<Self> {
        let mut out = PBWElement::zero();
        for ((a, b), block) in self.torus_blocks() {
            let tau = conjugate_torus_block(ctx, &block)?;
            let term = PBWElement::e_power(ctx, b)?
                .mul(ctx, &PBWElement::from_torus_block(&tau, 0, 0))?
                .mul(ctx, &PBWElement::f_power(ctx, a)?)?;
            out = out.add(&term);
        }
        Ok(out)
    }

    /// The antipode, with S(E^(n)) = (-1)^n v^(n(n-1)) K^(-n) E^(n),
    /// S(F^(n)) = (-1)^n v^(-n(n-1)) F^(n) K^n, S(K) = K^(-1).
    pub fn antipode(&self, ctx: &UqContext) -> Result<Self> {
        let ring = ctx.torus.ring().clone();
        let mut out = PBWElement::zero();
        for ((a, b), block) in self.torus_blocks() {
            let tau = conjugate_torus_block(ctx, &block)?;
            let k_minus_b = ctx.torus.small_to_big(&SmallTorusElement::k_power(&ring, -(b as i64)))?;
            let k_plus_a = ctx.torus.small_to_big(&SmallTorusElement::k_power(&ring, a as i64))?;
            let mut head = PBWElement::from_big_torus(&k_minus_b);
            head = ext_e(head, b); // K^(-b) E^(b)
            let mut tail = PBWElement::from_big_torus(&k_plus_a);
            tail = ext_f(tail, a); // F^(a) K^(a)
            let sign = if (a + b) % 2 == 1 { -ring.one() } else { ring.one() };
            let power = ring.q_power(b as i64 * (b as i64 - 1) - a as i64 * (a as i64 - 1));
            let term = head
                .mul(ctx, &PBWElement::from_torus_block(&tau, 0, 0))?
                .mul(ctx, &tail)?
                .scale(&(&sign * &power));
            out = out.add(&term);
        }
        Ok(out)
    }

    /// The quantum Frobenius: E^(n), F^(n), [K;t] survive only on indices
    /// divisible by l, where they map onto the classical divided powers.
    pub fn frobenius(&self, ctx: &UqContext) -> Result<HyperElement<CycloScalar>> {
        let l = ctx.l() as u32;
        let alg = classical_algebra(ctx);
        let mut out = HyperElement::zero();
        for (&(a, d, t, b), v) in &self.coords {
            let _ = d; // K^delta maps to 1
            if a % l != 0 || t % l != 0 || b % l != 0 {
                continue;
            }
            // Y^(a/l) binom(H, t/l) X^(b/l), renormalized to X-H-Y order
            let term = alg.mul(
                &alg.mul(&alg.basis(0, 0, a / l), &alg.basis(0, t / l, 0))?,
                &alg.basis(b / l, 0, 0),
            )?;
            out = alg.add(&out, &alg.scale(&term, v));
        }
        Ok(out)
    }

    pub fn assert_dyadic(&self) -> Result<()> {
        for v in self.coords.values() {
            if !v.is_dyadic() {
                return Err(AlgebraError::NotDyadic(v.denominator().to_string()));
            }
        }
        Ok(())
    }
}

fn accumulate(coords: &mut BTreeMap<PbwIdx, CycloScalar>, idx: PbwIdx, v: CycloScalar) {
    if v.is_zero() {
        return;
    }
    match coords.get_mut(&idx) {
        Some(cur) => {
            let s = &*cur + &v;
            if s.is_zero() {
                coords.remove(&idx);
            } else {
                *cur = s;
            }
        }
        None => {
            coords.insert(idx, v);
        }
    }
}

fn check_degree(ctx: &UqContext, n: u32) -> Result<()> {
    if n > ctx.a_max {
        return Err(AlgebraError::DegreeOverflow {
            needed: n as usize,
            bound: ctx.a_max as usize,
        });
    }
    Ok(())
}

fn round_bound(ctx: &UqContext, t_bound: usize) -> usize {
    let rounded = (t_bound + 7) & !7;
    if rounded <= ctx.torus.t_cap() {
        rounded
    } else {
        t_bound
    }
}

/// K |-> K^(-1) on a torus block: evaluate at -M and re-expand.
fn conjugate_torus_block(ctx: &UqContext, block: &TorusBlock) -> Result<TorusBlock> {
    if block.is_empty() {
        return Ok(TorusBlock::new());
    }
    let ev = BlockEval::new(&ctx.torus, block);
    let t_bound = block_t_max(block) as usize
        + if block_has_k(block) {
            ctx.l() as usize - 1
        } else {
            0
        };
    let big = ctx
        .torus
        .interpolate_fn(0, round_bound(ctx, t_bound), &|m| ev.eval(-m))?;
    Ok(big.coords)
}

fn ext_e(mut x: PBWElement, b: u32) -> PBWElement {
    let coords = std::mem::take(&mut x.coords);
    for ((a, d, t, b0), v) in coords {
        debug_assert_eq!(b0, 0);
        x.coords.insert((a, d, t, b), v);
    }
    x
}

fn ext_f(mut x: PBWElement, a: u32) -> PBWElement {
    let coords = std::mem::take(&mut x.coords);
    for ((a0, d, t, b), v) in coords {
        debug_assert_eq!(a0, 0);
        x.coords.insert((a, d, t, b), v);
    }
    x
}

pub fn classical_algebra(ctx: &UqContext) -> HyperAlgebra<CycloRing> {
    HyperAlgebra::new(CycloRing(ctx.torus.ring().clone()), ctx.a_max)
}

/// The multiplicative splitting: X^(n) |-> E^(ln) kappa, Y^(n) |-> F^(ln) kappa,
/// binom(H,n) |-> [K; ln] kappa, extended basis-elementwise through the
/// normal-form product.
pub fn phi(ctx: &UqContext, x: &HyperElement<CycloScalar>) -> Result<PBWElement> {
    let l = ctx.l() as u32;
    let kappa_block = ctx.kappa_block().clone();
    let mut out = PBWElement::zero();
    for (&(a, i, c), coef) in &x.coords {
        check_degree(ctx, l * a.max(c))?;
        // E^(la) kappa = kappa E^(la): pure torus times E
        let head = PBWElement::from_torus_block(&kappa_block, 0, l * a);
        // [K; li] kappa as one interpolated torus product
        let mid_block = if i == 0 {
            kappa_block.clone()
        } else {
            let t_bound = round_bound(ctx, (l * i + l - 1) as usize);
            let big = ctx.torus.interpolate_fn(0, t_bound, &|m| {
                if m.rem_euclid(2 * ctx.l() as i64) == 0 {
                    ctx.torus.qbinom.half_top(m, (l * i) as u64)
                } else {
                    ctx.torus.ring().zero()
                }
            })?;
            big.coords
        };
        let mid = PBWElement::from_torus_block(&mid_block, 0, 0);
        let tail = PBWElement::from_torus_block(&kappa_block, l * c, 0);
        let term = head.mul(ctx, &mid)?.mul(ctx, &tail)?;
        out = out.add(&term.scale(coef));
    }
    Ok(out)
}

/// For s in [1, min(la, lb)]: kappa_(-s) [K; 2s-la-lb; s] must vanish exactly
/// when l does not divide s, and survive when it does.
pub fn verify_fundamental_vanishing(ctx: &UqContext, a: u32, b: u32) -> Result<Vec<Check>> {
    let l = ctx.l() as u32;
    let la = l * a;
    let lb = l * b;
    let mut checks = Vec::new();
    for s in 1..=la.min(lb) {
        let prod = ctx.torus.kappa_bracket_product(s, la as u64, lb as u64)?;
        if s % l == 0 {
            checks.push(Check::of(
                format!("bracket_survivor_l{l}_a{a}_b{b}_s{s}"),
                format!("kappa_(-{s}) [K; {}; {s}] is nonzero (l | s)", 2 * s as i64 - la as i64 - lb as i64),
                !prod.is_zero(),
                "product vanished unexpectedly".to_string(),
            ));
        } else {
            checks.push(Check::of(
                format!("bracket_vanishing_l{l}_a{a}_b{b}_s{s}"),
                format!("kappa_(-{s}) [K; {}; {s}] = 0", 2 * s as i64 - la as i64 - lb as i64),
                prod.is_zero(),
                format!("nonzero coordinates {:?}", prod.coords),
            ));
        }
    }
    Ok(checks)
}
