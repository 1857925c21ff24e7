//! Shared elimination helpers: radical generators of single-variable
//! elimination ideals (with a zero-dimensional fast path) and
//! two-variable eliminants.

use super::DiscError;
use crate::budget::Budget;
use crate::groebner::{
    codim1_part, eliminate, groebner_basis, radical_generator_uni, GroebnerError, ZeroDimSystem,
};
use crate::polyring::{MonomialOrder, Poly, Var, VarRegistry};
use std::sync::Arc;

/// Registry of exactly the variables occurring in `gens` plus `keep`.
fn sub_registry(gens: &[Poly], keep: &[Var]) -> (Arc<VarRegistry>, Vec<Poly>) {
    let reg = gens[0].registry().clone();
    let mut present = vec![false; reg.len()];
    for g in gens {
        for v in g.support_vars() {
            present[v.idx()] = true;
        }
    }
    for v in keep {
        present[v.idx()] = true;
    }
    let names: Vec<String> = reg
        .vars()
        .filter(|v| present[v.idx()])
        .map(|v| reg.name(v).to_string())
        .collect();
    let refs: Vec<&str> = names.iter().map(|s| s.as_str()).collect();
    let sub = VarRegistry::new(&[("w", &refs[..])]);
    let moved = gens
        .iter()
        .map(|g| g.transport(&sub).expect("support is present"))
        .collect();
    (sub, moved)
}

/// Squarefree generator of `<gens> ∩ Q[x]`, canonical. Returns the zero
/// polynomial for the zero elimination ideal and `1` for the unit ideal.
///
/// When the ideal is zero-dimensional over its occurring variables the
/// generator is the squarefree part of the minimal polynomial of `x` on
/// the quotient; otherwise a block-order elimination runs.
pub(crate) fn elim_radical_single(
    gens: &[Poly],
    x: Var,
    budget: &Budget,
) -> Result<Poly, DiscError> {
    let reg = gens[0].registry().clone();
    let live: Vec<Poly> = gens.iter().filter(|g| !g.is_zero()).cloned().collect();
    if live.is_empty() {
        return Ok(Poly::zero(&reg));
    }
    let (sub, moved) = sub_registry(&live, &[x]);
    let xs = sub.var(reg.name(x)).unwrap();
    let gb = groebner_basis(&moved, MonomialOrder::GrevLex, budget)?;
    if gb.generators.len() == 1 && gb.generators[0].is_constant() {
        return Ok(Poly::one(&reg));
    }
    match ZeroDimSystem::new(&gb, budget) {
        Ok(zd) => {
            let mp = zd.minimal_polynomial(xs)?;
            let sf = mp.squarefree_part().map_err(GroebnerError::Poly)?;
            Ok(sf.to_poly(&reg, x).canonicalize())
        }
        Err(GroebnerError::NotZeroDimensional) => {
            // positive-dimensional: honest block elimination
            let elim = eliminate(&moved, &[xs], budget)?;
            if elim.is_empty() {
                return Ok(Poly::zero(&reg));
            }
            let gen = radical_generator_uni(&elim, xs)?;
            Ok(gen.transport(&reg)?)
        }
        Err(e) => Err(e.into()),
    }
}

/// Codimension-1 generator of `<gens> ∩ Q[x, y]` (no radical beyond the
/// squarefree/gcd part).
pub(crate) fn elim_pair_codim1(
    gens: &[Poly],
    x: Var,
    y: Var,
    budget: &Budget,
) -> Result<Poly, DiscError> {
    let reg = gens[0].registry().clone();
    let live: Vec<Poly> = gens.iter().filter(|g| !g.is_zero()).cloned().collect();
    if live.is_empty() {
        return Ok(Poly::zero(&reg));
    }
    let (sub, moved) = sub_registry(&live, &[x, y]);
    let xs = sub.var(reg.name(x)).unwrap();
    let ys = sub.var(reg.name(y)).unwrap();
    let elim = eliminate(&moved, &[xs, ys], budget)?;
    if elim.is_empty() {
        return Ok(Poly::zero(&reg));
    }
    let g = codim1_part(&elim)?;
    Ok(g.transport(&reg)?)
}
