//! The rank-ell torus: commuting copies K_1, ..., K_ell with K_i^(2l) = 1,
//! the per-factor idempotents kappa_{i,j}, and their products.

use std::collections::BTreeMap;
use std::sync::Arc;

use crate::cyclo::{CycloScalar, RootParams};
use crate::error::{AlgebraError, Result};
use crate::torus::{kappa_prime, SmallTorusElement};

/// Symmetrizable finite-type Cartan data with the coprimality condition on l.
#[derive(Clone, Debug)]
pub struct CartanData {
    pub rank: usize,
    pub matrix: Vec<Vec<i64>>,
    pub symmetrizers: Vec<u64>,
}

impl CartanData {
    pub fn new(matrix: Vec<Vec<i64>>, l: u64) -> Result<Self> {
        let rank = matrix.len();
        if rank == 0 || matrix.iter().any(|row| row.len() != rank) {
            return Err(AlgebraError::Config("Cartan matrix must be square".into()));
        }
        for i in 0..rank {
            if matrix[i][i] != 2 {
                return Err(AlgebraError::Config("Cartan diagonal entries must be 2".into()));
            }
            for j in 0..rank {
                if i != j {
                    if matrix[i][j] > 0 || matrix[i][j] < -3 {
                        return Err(AlgebraError::Config(
                            "off-diagonal Cartan entries must lie in {0,-1,-2,-3}".into(),
                        ));
                    }
                    if (matrix[i][j] == 0) != (matrix[j][i] == 0) {
                        return Err(AlgebraError::Config("Cartan zero pattern must be symmetric".into()));
                    }
                }
                let e = matrix[i][j].unsigned_abs();
                if e != 0 && num_integer::gcd(l, e) != 1 {
                    return Err(AlgebraError::Config(format!(
                        "l = {l} must be coprime to every Cartan entry, found {}",
                        matrix[i][j]
                    )));
                }
            }
        }
        let symmetrizers = symmetrize(&matrix)
            .ok_or_else(|| AlgebraError::Config("Cartan matrix is not symmetrizable".into()))?;
        Ok(CartanData {
            rank,
            matrix,
            symmetrizers,
        })
    }

    pub fn rank_one() -> Self {
        CartanData {
            rank: 1,
            matrix: vec![vec![2]],
            symmetrizers: vec![1],
        }
    }
}

/// Minimal positive d_i with d_i a_ij = d_j a_ji; propagated as exact
/// fractions along the Dynkin graph and scaled to integers per component.
fn symmetrize(a: &[Vec<i64>]) -> Option<Vec<u64>> {
    let n = a.len();
    let mut d: Vec<Option<(i64, i64)>> = vec![None; n]; // (num, den), both positive
    for start in 0..n {
        if d[start].is_some() {
            continue;
        }
        d[start] = Some((1, 1));
        let mut component = vec![start];
        let mut stack = vec![start];
        while let Some(i) = stack.pop() {
            let (ni, di) = d[i].unwrap();
            for j in 0..n {
                if i == j || a[i][j] == 0 {
                    continue;
                }
                // d_j / d_i = a_ij / a_ji, both entries negative off-diagonal
                let num = ni * a[i][j].abs();
                let den = di * a[j][i].abs();
                let g = num_integer::gcd(num, den);
                let val = (num / g, den / g);
                match d[j] {
                    None => {
                        d[j] = Some(val);
                        component.push(j);
                        stack.push(j);
                    }
                    Some(existing) => {
                        if existing != val {
                            return None;
                        }
                    }
                }
            }
        }
        let scale = component
            .iter()
            .map(|&i| d[i].unwrap().1)
            .fold(1i64, num_integer::lcm);
        let mut vals: Vec<i64> = component
            .iter()
            .map(|&i| {
                let (num, den) = d[i].unwrap();
                num * (scale / den)
            })
            .collect();
        let g = vals.iter().fold(0i64, |acc, &x| num_integer::gcd(acc, x));
        if g > 1 {
            for v in &mut vals {
                *v /= g;
            }
        }
        for (&i, &v) in component.iter().zip(&vals) {
            d[i] = Some((v, 1));
        }
    }
    Some(d.into_iter().map(|x| x.unwrap().0 as u64).collect())
}

/// Finite-support element of the rank-ell small torus over the basis
/// prod_j K_j^(i_j), i_j in [0, 2l).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MultiTorusElement {
    pub rank: usize,
    ring: Arc<RootParams>,
    coords: BTreeMap<Vec<u16>, CycloScalar>,
}

impl MultiTorusElement {
    pub fn zero(ring: &Arc<RootParams>, rank: usize) -> Self {
        MultiTorusElement {
            rank,
            ring: Arc::clone(ring),
            coords: BTreeMap::new(),
        }
    }

    pub fn one(ring: &Arc<RootParams>, rank: usize) -> Self {
        let mut out = Self::zero(ring, rank);
        out.coords.insert(vec![0; rank], ring.one());
        out
    }

    pub fn k_power(ring: &Arc<RootParams>, rank: usize, axis: usize, e: i64) -> Self {
        let twol = 2 * ring.l() as i64;
        let mut idx = vec![0u16; rank];
        idx[axis] = e.rem_euclid(twol) as u16;
        let mut out = Self::zero(ring, rank);
        out.coords.insert(idx, ring.one());
        out
    }

    pub fn coords(&self) -> &BTreeMap<Vec<u16>, CycloScalar> {
        &self.coords
    }

    pub fn is_zero(&self) -> bool {
        self.coords.is_empty()
    }

    fn insert(&mut self, idx: Vec<u16>, v: CycloScalar) {
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
            out.insert(idx.clone(), v.clone());
        }
        out
    }

    pub fn mul(&self, rhs: &Self) -> Self {
        let twol = 2 * self.ring.l() as u16;
        let mut out = Self::zero(&self.ring, self.rank);
        for (ia, va) in &self.coords {
            for (ib, vb) in &rhs.coords {
                let idx: Vec<u16> = ia.iter().zip(ib).map(|(a, b)| (a + b) % twol).collect();
                out.insert(idx, va * vb);
            }
        }
        out
    }

    /// Tensor of rank-one elements placed on each axis.
    pub fn from_factors(ring: &Arc<RootParams>, factors: &[SmallTorusElement]) -> Self {
        let rank = factors.len();
        let mut out = Self::one(ring, rank);
        for (axis, f) in factors.iter().enumerate() {
            let mut step = Self::zero(ring, rank);
            for (i, coef) in f.coords().iter().enumerate() {
                if coef.is_zero() {
                    continue;
                }
                let mut idx = vec![0u16; rank];
                idx[axis] = i as u16;
                step.insert(idx, coef.clone());
            }
            out = out.mul(&step);
        }
        out
    }
}

/// prod_i kappa_{i, j_i} as a rank-ell torus element.
pub fn product_kappa_multi(
    ring: &Arc<RootParams>,
    cartan: &CartanData,
    j: &[i64],
) -> Result<MultiTorusElement> {
    if j.len() != cartan.rank {
        return Err(AlgebraError::Config(format!(
            "expected {} residues, got {}",
            cartan.rank,
            j.len()
        )));
    }
    let factors: Vec<SmallTorusElement> = j.iter().map(|&ji| kappa_prime(ring, ji)).collect();
    Ok(MultiTorusElement::from_factors(ring, &factors))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn a2() -> Vec<Vec<i64>> {
        vec![vec![2, -1], vec![-1, 2]]
    }

    #[test]
    fn cartan_validation() {
        assert!(CartanData::new(a2(), 5).is_ok());
        // G2 has an entry -3, not coprime to l = 3
        let g2 = vec![vec![2, -1], vec![-3, 2]];
        assert!(CartanData::new(g2.clone(), 3).is_err());
        let g2d = CartanData::new(g2, 5).unwrap();
        assert_eq!(g2d.symmetrizers, vec![3, 1]);
        // B2 symmetrizers
        let b2 = CartanData::new(vec![vec![2, -2], vec![-1, 2]], 5).unwrap();
        assert_eq!(b2.symmetrizers, vec![1, 2]);
        assert!(CartanData::new(vec![vec![2, 1], vec![1, 2]], 5).is_err());
    }

    #[test]
    fn rank_one_degenerates_to_primed_family() {
        let r = RootParams::new(5).unwrap();
        let cartan = CartanData::rank_one();
        for n in 0..10i64 {
            let multi = product_kappa_multi(&r, &cartan, &[n]).unwrap();
            let single = kappa_prime(&r, n);
            for (i, coef) in single.coords().iter().enumerate() {
                let idx = vec![i as u16];
                match multi.coords().get(&idx) {
                    Some(v) => assert_eq!(v, coef),
                    None => assert!(coef.is_zero()),
                }
            }
        }
    }

    #[test]
    fn a2_partition_of_unity_at_l5() {
        let l = 5u64;
        let r = RootParams::new(l).unwrap();
        let cartan = CartanData::new(a2(), l).unwrap();
        let mut acc = MultiTorusElement::zero(&r, 2);
        for j0 in 0..2 * l as i64 {
            for j1 in 0..2 * l as i64 {
                acc = acc.add(&product_kappa_multi(&r, &cartan, &[j0, j1]).unwrap());
            }
        }
        assert_eq!(acc, MultiTorusElement::one(&r, 2));
    }

    #[test]
    fn product_kappa_is_idempotent_and_absorbs_k() {
        let l = 5u64;
        let r = RootParams::new(l).unwrap();
        let cartan = CartanData::new(a2(), l).unwrap();
        let kap = product_kappa_multi(&r, &cartan, &[0, 0]).unwrap();
        assert_eq!(kap.mul(&kap), kap);
        for axis in 0..2 {
            let k = MultiTorusElement::k_power(&r, 2, axis, 1);
            assert_eq!(k.mul(&kap), kap);
        }
    }

    #[test]
    fn diagonal_product_kappas_are_orthogonal() {
        let l = 3u64;
        let r = RootParams::new(l).unwrap();
        let cartan = CartanData::new(a2(), l).unwrap();
        let a = product_kappa_multi(&r, &cartan, &[0, 0]).unwrap();
        let b = product_kappa_multi(&r, &cartan, &[1, 0]).unwrap();
        assert!(a.mul(&b).is_zero());
    }
}
