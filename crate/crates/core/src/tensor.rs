//! Tensor squares and the comultiplication.
//!
//! On generators,
//!   Delta(E^(n)) = sum_j v^(j(n-j)) E^(n-j) K^j (x) E^(j),
//!   Delta(F^(n)) = sum_j v^(-j(n-j)) F^(j) (x) K^(-j) F^(n-j),
//!   Delta(K) = K (x) K.
//! On the divided-power torus the coproduct is dual to addition of weights:
//! chi_M (x) chi_N of Delta(tau) equals chi_(M+N)(tau), which pins down the
//! tensor coordinates through a two-stage interpolation.

use std::collections::BTreeMap;

use crate::cyclo::CycloScalar;
use crate::error::Result;
use crate::hyper::{HyperElement, HyperIdx};
use crate::pbw::{PbwIdx, PBWElement, TorusBlock, UqContext};

/// Finite-support element of the tensor square of the quantum algebra.
#[derive(Clone, Debug, PartialEq)]
pub struct TensorElement {
    pub coords: BTreeMap<(PbwIdx, PbwIdx), CycloScalar>,
}

impl TensorElement {
    pub fn zero() -> Self {
        TensorElement {
            coords: BTreeMap::new(),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.coords.is_empty()
    }

    pub fn of(x: &PBWElement, y: &PBWElement) -> Self {
        let mut out = TensorElement::zero();
        for (ix, vx) in &x.coords {
            for (iy, vy) in &y.coords {
                let v = vx * vy;
                if !v.is_zero() {
                    out.coords.insert((*ix, *iy), v);
                }
            }
        }
        out
    }

    fn accumulate(&mut self, idx: (PbwIdx, PbwIdx), v: CycloScalar) {
        if v.is_zero() {
            return;
        }
        match self.coords.get_mut(&idx) {
            Some(cur) => {
                let s = &*cur + &v;
                if s.is_zero() {
                    self.coords.remove(&idx);
                } else {
                    *cur = s;
                }
            }
            None => {
                self.coords.insert(idx, v);
            }
        }
    }

    pub fn add(&self, rhs: &Self) -> Self {
        let mut out = self.clone();
        for (idx, v) in &rhs.coords {
            out.accumulate(*idx, v.clone());
        }
        out
    }

    pub fn scale(&self, s: &CycloScalar) -> Self {
        let mut out = TensorElement::zero();
        for (idx, v) in &self.coords {
            let sv = v * s;
            if !sv.is_zero() {
                out.coords.insert(*idx, sv);
            }
        }
        out
    }

    /// Componentwise normal-form product.
    pub fn mul(&self, ctx: &UqContext, rhs: &Self) -> Result<Self> {
        let mut out = TensorElement::zero();
        for ((lx, ly), v) in &self.coords {
            let left = single(ctx, *lx);
            let right = single(ctx, *ly);
            for ((rx, ry), w) in &rhs.coords {
                let coef = v * w;
                if coef.is_zero() {
                    continue;
                }
                let p1 = left.mul(ctx, &single(ctx, *rx))?;
                let p2 = right.mul(ctx, &single(ctx, *ry))?;
                for (i1, c1) in &p1.coords {
                    for (i2, c2) in &p2.coords {
                        out.accumulate((*i1, *i2), &(&coef * c1) * c2);
                    }
                }
            }
        }
        Ok(out)
    }

    /// Apply the quantum Frobenius on both legs.
    pub fn frobenius_both(&self, ctx: &UqContext) -> Result<ClassicalTensor> {
        let mut out = ClassicalTensor::zero();
        for ((lx, ly), v) in &self.coords {
            let f1 = single(ctx, *lx).frobenius(ctx)?;
            let f2 = single(ctx, *ly).frobenius(ctx)?;
            for (i1, c1) in &f1.coords {
                for (i2, c2) in &f2.coords {
                    out.accumulate((*i1, *i2), &(v * c1) * c2);
                }
            }
        }
        Ok(out)
    }
}

fn single(ctx: &UqContext, idx: PbwIdx) -> PBWElement {
    let mut coords = BTreeMap::new();
    coords.insert(idx, ctx.torus.ring().one());
    PBWElement { coords }
}

/// Tensor square of the classical divided-power algebra.
#[derive(Clone, Debug, PartialEq)]
pub struct ClassicalTensor {
    pub coords: BTreeMap<(HyperIdx, HyperIdx), CycloScalar>,
}

impl ClassicalTensor {
    pub fn zero() -> Self {
        ClassicalTensor {
            coords: BTreeMap::new(),
        }
    }

    fn accumulate(&mut self, idx: (HyperIdx, HyperIdx), v: CycloScalar) {
        if v.is_zero() {
            return;
        }
        match self.coords.get_mut(&idx) {
            Some(cur) => {
                let s = &*cur + &v;
                if s.is_zero() {
                    self.coords.remove(&idx);
                } else {
                    *cur = s;
                }
            }
            None => {
                self.coords.insert(idx, v);
            }
        }
    }
}

/// Comultiplication on the quantum side, landing in tensor normal form.
pub fn coproduct(ctx: &UqContext, x: &PBWElement) -> Result<TensorElement> {
    let ring = ctx.torus.ring().clone();
    let mut out = TensorElement::zero();
    for ((a, b), block) in x.torus_blocks() {
        // Delta(tau): two-stage interpolation of (M, N) |-> chi_(M+N)(tau)
        let tau_tensor = coproduct_torus(ctx, &block)?;
        for jf in 0..=a {
            for je in 0..=b {
                let coef = ring.q_power(
                    je as i64 * (b - je) as i64 - jf as i64 * (a - jf) as i64,
                );
                // leg1: F^(jf) tau1 E^(b-je) K^(je); leg2: K^(-jf) F^(a-jf) tau2 E^(je)
                for (((d1, t1), (d2, t2)), tv) in &tau_tensor {
                    let leg1 = assemble_leg(ctx, jf, (*d1, *t1), b - je, je as i64)?;
                    let leg2 = assemble_leg_with_front_k(ctx, -(jf as i64), a - jf, (*d2, *t2), je)?;
                    let scale = &coef * tv;
                    for (i1, c1) in &leg1.coords {
                        for (i2, c2) in &leg2.coords {
                            out.accumulate((*i1, *i2), &(&scale * c1) * c2);
                        }
                    }
                }
            }
        }
    }
    Ok(out)
}

/// Coordinates of Delta(tau) over (K^d1 [K;t1]) (x) (K^d2 [K;t2]).
type TorusTensor = Vec<(((u8, u32), (u8, u32)), CycloScalar)>;

fn coproduct_torus(ctx: &UqContext, block: &TorusBlock) -> Result<TorusTensor> {
    let t_max = block.keys().map(|&(_, t)| t).max().unwrap_or(0) as usize;
    let second_points: Vec<i64> = (0..2 * (t_max + 1) as i64 + ctx.l() as i64).collect();
    // stage 1: for each fixed N, interpolate M |-> chi_(M+N)(tau) in M
    let mut per_n: Vec<(i64, BTreeMap<(u8, u32), CycloScalar>)> = Vec::new();
    for &n in &second_points {
        let big = ctx.torus.interpolate_fn(0, t_max, &|m| {
            let mut acc = ctx.torus.ring().zero();
            for (&(d, t), coef) in block {
                acc += &(coef * &ctx.torus.eval_basis(m + n, d, 0, t));
            }
            acc
        })?;
        per_n.push((n, big.coords));
    }
    // stage 2: interpolate each first-leg coordinate as a function of N
    let mut keys: std::collections::BTreeSet<(u8, u32)> = std::collections::BTreeSet::new();
    for (_, coords) in &per_n {
        keys.extend(coords.keys().copied());
    }
    let mut out = TorusTensor::new();
    for key in keys {
        let values: Vec<(i64, CycloScalar)> = per_n
            .iter()
            .map(|(n, coords)| {
                (
                    *n,
                    coords.get(&key).cloned().unwrap_or_else(|| ctx.torus.ring().zero()),
                )
            })
            .collect();
        let second = ctx.torus.interpolate(&values, t_max)?;
        for ((d2, t2), v) in second.coords {
            out.push(((key, (d2, t2)), v));
        }
    }
    Ok(out)
}

/// F^(jf) K^d [K;t] E^(e) K^(ke) in normal form.
fn assemble_leg(ctx: &UqContext, jf: u32, torus: (u8, u32), e: u32, ke: i64) -> Result<PBWElement> {
    let mut x = PBWElement::f_power(ctx, jf)?;
    let mut block = TorusBlock::new();
    block.insert(torus, ctx.torus.ring().one());
    x = x.mul(ctx, &PBWElement::from_torus_block(&block, 0, 0))?;
    x = x.mul(ctx, &PBWElement::e_power(ctx, e)?)?;
    if ke != 0 {
        let kp = crate::torus::SmallTorusElement::k_power(ctx.torus.ring(), ke);
        x = x.mul(ctx, &PBWElement::from_small_torus(ctx, &kp)?)?;
    }
    Ok(x)
}

/// K^(kf) F^(f) K^d [K;t] E^(e) in normal form.
fn assemble_leg_with_front_k(
    ctx: &UqContext,
    kf: i64,
    f: u32,
    torus: (u8, u32),
    e: u32,
) -> Result<PBWElement> {
    let mut x = if kf != 0 {
        let kp = crate::torus::SmallTorusElement::k_power(ctx.torus.ring(), kf);
        PBWElement::from_small_torus(ctx, &kp)?
    } else {
        PBWElement::one(ctx)
    };
    x = x.mul(ctx, &PBWElement::f_power(ctx, f)?)?;
    let mut block = TorusBlock::new();
    block.insert(torus, ctx.torus.ring().one());
    x = x.mul(ctx, &PBWElement::from_torus_block(&block, 0, 0))?;
    x = x.mul(ctx, &PBWElement::e_power(ctx, e)?)?;
    Ok(x)
}

/// Classical comultiplication: every generator is divided-power primitive.
pub fn coproduct_classical(x: &HyperElement<CycloScalar>) -> ClassicalTensor {
    let mut out = ClassicalTensor::zero();
    for (&(a, i, c), v) in &x.coords {
        for u1 in 0..=a {
            for u2 in 0..=i {
                for u3 in 0..=c {
                    out.accumulate(
                        ((u1, u2, u3), (a - u1, i - u2, c - u3)),
                        v.clone(),
                    );
                }
            }
        }
    }
    out
}
