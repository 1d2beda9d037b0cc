//! The reduction from the quantum algebra at l = p to the hyperalgebra over
//! F_p: q -> 1, K -> 1, E^(n) -> X^(n), F^(n) -> Y^(n), [K;t] -> binom(H,t),
//! with 2-integral coefficients reduced mod p.

use crate::error::{AlgebraError, Result};
use crate::hyper::{reduce_scalar_mod_p, HyperAlgebra, HyperElement, PrimeField};
use crate::modp::{check_odd_prime, ModPScalar};
use crate::pbw::{PBWElement, UqContext};

/// Reduce a quantum element; requires l prime and all coordinates 2-integral.
pub fn reduction_from_quantum(
    ctx: &UqContext,
    alg: &HyperAlgebra<PrimeField>,
    x: &PBWElement,
) -> Result<HyperElement<ModPScalar>> {
    let p = alg.p();
    if ctx.l() != p {
        return Err(AlgebraError::Unsupported(format!(
            "reduction needs l = p, got l = {} and p = {}",
            ctx.l(),
            p
        )));
    }
    check_odd_prime(p)?;
    let mut out = HyperElement::zero();
    for (&(a, _delta, t, b), v) in &x.coords {
        let scalar = reduce_scalar_mod_p(v, p)?;
        if scalar.is_zero() {
            continue;
        }
        // F^(a) K^delta [K;t] E^(b) -> Y^(a) binom(H,t) X^(b), renormalized
        let term = alg.mul(
            &alg.mul(&alg.basis(0, 0, a), &alg.basis(0, t, 0))?,
            &alg.basis(b, 0, 0),
        )?;
        let scaled = alg.scale(&term, &scalar);
        out = alg.add(&out, &scaled);
    }
    Ok(out)
}
