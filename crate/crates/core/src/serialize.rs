//! JSON wire formats.  Scalars serialize as {"num": [...], "den": n} with
//! arbitrary-precision integer literals; elements serialize as sparse
//! coordinate lists.  Deserialization binds coordinates back to a ring
//! supplied by the caller.

use std::str::FromStr;
use std::sync::Arc;

use num_bigint::BigInt;
use serde::{Deserialize, Serialize};
use serde_json::Number;

use crate::cyclo::{CycloScalar, RootParams};
use crate::error::{AlgebraError, Result};
use crate::hyper::HyperElement;
use crate::modp::ModPScalar;
use crate::pbw::PBWElement;
use crate::torus::{BigTorusElement, SmallTorusElement};

fn bigint_to_number(x: &BigInt) -> Number {
    Number::from_str(&x.to_string()).expect("integer literal parses as a JSON number")
}

fn number_to_bigint(n: &Number) -> Result<BigInt> {
    BigInt::from_str(&n.to_string())
        .map_err(|_| AlgebraError::Config(format!("not an integer literal: {n}")))
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ScalarData {
    pub num: Vec<Number>,
    pub den: Number,
}

impl ScalarData {
    pub fn from_scalar(x: &CycloScalar) -> Self {
        ScalarData {
            num: x.numerators().iter().map(bigint_to_number).collect(),
            den: bigint_to_number(x.denominator()),
        }
    }

    pub fn into_scalar(&self, ring: &Arc<RootParams>) -> Result<CycloScalar> {
        if self.num.len() != ring.degree() {
            return Err(AlgebraError::Config(format!(
                "scalar has {} coordinates, ring of degree {}",
                self.num.len(),
                ring.degree()
            )));
        }
        let den = number_to_bigint(&self.den)?;
        let mut acc = ring.zero();
        for (i, n) in self.num.iter().enumerate() {
            let c = number_to_bigint(n)?;
            acc = &acc + &(&ring.q_power(i as i64) * &ring.from_bigint(c));
        }
        let den_inv = ring.from_bigint(den).inv()?;
        Ok(&acc * &den_inv)
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct RootParamsData {
    pub l: u64,
    pub phi: Vec<Number>,
}

impl RootParamsData {
    pub fn from_params(p: &RootParams) -> Self {
        RootParamsData {
            l: p.l(),
            phi: p.phi_coeffs().iter().map(bigint_to_number).collect(),
        }
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct SmallTorusData {
    pub l: u64,
    /// coords[i] is the coefficient of K^i, i in [0, 2l).
    pub coords: Vec<ScalarData>,
}

impl SmallTorusData {
    pub fn from_element(l: u64, x: &SmallTorusElement) -> Self {
        SmallTorusData {
            l,
            coords: x.coords().iter().map(ScalarData::from_scalar).collect(),
        }
    }

    pub fn into_element(&self, ring: &Arc<RootParams>) -> Result<SmallTorusElement> {
        if self.coords.len() != 2 * ring.l() as usize {
            return Err(AlgebraError::Config("wrong number of coordinates".into()));
        }
        let coords = self
            .coords
            .iter()
            .map(|c| c.into_scalar(ring))
            .collect::<Result<Vec<_>>>()?;
        Ok(SmallTorusElement::from_coords(coords))
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct BigTorusData {
    pub c_shift: i64,
    /// entries keyed by (delta, t)
    pub coords: Vec<(u8, u32, ScalarData)>,
}

impl BigTorusData {
    pub fn from_element(x: &BigTorusElement) -> Self {
        BigTorusData {
            c_shift: x.c_shift,
            coords: x
                .coords
                .iter()
                .map(|(&(d, t), v)| (d, t, ScalarData::from_scalar(v)))
                .collect(),
        }
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct PbwData {
    pub l: u64,
    /// entries keyed by (a, delta, t, b) for F^(a) K^delta [K;t] E^(b)
    pub coords: Vec<(u32, u8, u32, u32, ScalarData)>,
}

impl PbwData {
    pub fn from_element(l: u64, x: &PBWElement) -> Self {
        PbwData {
            l,
            coords: x
                .coords
                .iter()
                .map(|(&(a, d, t, b), v)| (a, d, t, b, ScalarData::from_scalar(v)))
                .collect(),
        }
    }

    pub fn into_element(&self, ring: &Arc<RootParams>) -> Result<PBWElement> {
        let mut out = PBWElement::zero();
        for (a, d, t, b, sc) in &self.coords {
            let v = sc.into_scalar(ring)?;
            if !v.is_zero() {
                out.coords.insert((*a, *d, *t, *b), v);
            }
        }
        Ok(out)
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ClassicalData {
    pub l: u64,
    /// entries keyed by (a, i, c) for X^(a) binom(H,i) Y^(c)
    pub coords: Vec<(u32, u32, u32, ScalarData)>,
}

impl ClassicalData {
    pub fn from_element(l: u64, x: &HyperElement<CycloScalar>) -> Self {
        ClassicalData {
            l,
            coords: x
                .coords
                .iter()
                .map(|(&(a, i, c), v)| (a, i, c, ScalarData::from_scalar(v)))
                .collect(),
        }
    }

    pub fn into_element(&self, ring: &Arc<RootParams>) -> Result<HyperElement<CycloScalar>> {
        let mut out = HyperElement::zero();
        for (a, i, c, sc) in &self.coords {
            let v = sc.into_scalar(ring)?;
            if !v.is_zero() {
                out.coords.insert((*a, *i, *c), v);
            }
        }
        Ok(out)
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ModularData {
    pub p: u64,
    pub coords: Vec<(u32, u32, u32, u64)>,
}

impl ModularData {
    pub fn from_element(p: u64, x: &HyperElement<ModPScalar>) -> Self {
        ModularData {
            p,
            coords: x
                .coords
                .iter()
                .map(|(&(a, i, c), v)| (a, i, c, v.value))
                .collect(),
        }
    }

    pub fn into_element(&self) -> HyperElement<ModPScalar> {
        let mut out = HyperElement::zero();
        for &(a, i, c, v) in &self.coords {
            let s = ModPScalar::new(v as i64, self.p);
            if !s.is_zero() {
                out.coords.insert((a, i, c), s);
            }
        }
        out
    }
}
