//! Buchberger-based Gröbner bases with elimination orders, radical
//! generators of univariate elimination ideals, and codimension-1 parts.

mod engine;
mod fglm;

pub use fglm::{solve_square, ZeroDimSystem};

use crate::budget::{Budget, BudgetError};
use crate::polyring::{
    as_univariate, poly_gcd, squarefree_part_multi, MonomialOrder, Poly, PolyError, Var,
};
use engine::GPoly;

#[derive(Debug, Clone, thiserror::Error)]
pub enum GroebnerError {
    #[error(transparent)]
    Budget(#[from] BudgetError),
    #[error(transparent)]
    Poly(#[from] PolyError),
    #[error("the zero ideal has no codimension-1 part")]
    ZeroIdeal,
    #[error("no generators given")]
    EmptyInput,
    #[error("ideal is not zero-dimensional")]
    NotZeroDimensional,
}

/// A generating set together with the order it was computed under.
#[derive(Debug, Clone)]
pub struct IdealBasis {
    pub generators: Vec<Poly>,
    pub order: MonomialOrder,
    pub reduced: bool,
}

/// Reduced Gröbner basis of the ideal spanned by `gens` under `order`.
pub fn groebner_basis(
    gens: &[Poly],
    order: MonomialOrder,
    budget: &Budget,
) -> Result<IdealBasis, GroebnerError> {
    let reg = gens
        .first()
        .map(|g| g.registry().clone())
        .ok_or(GroebnerError::EmptyInput)?;
    let input: Vec<GPoly> = gens
        .iter()
        .filter_map(|g| GPoly::from_poly(g, &order))
        .collect();
    if input.is_empty() {
        // all generators zero: the zero ideal
        return Ok(IdealBasis {
            generators: vec![],
            order,
            reduced: true,
        });
    }
    let basis = engine::buchberger(input, &order, budget)?;
    let generators = basis.iter().map(|g| g.to_poly(&reg)).collect();
    Ok(IdealBasis {
        generators,
        order,
        reduced: true,
    })
}

/// Normal form of `f` against a reduced basis, canonical up to the exact
/// rational scaling recorded during reduction (the returned polynomial is
/// the true normal form).
pub fn normal_form(f: &Poly, basis: &IdealBasis, budget: &Budget) -> Result<Poly, GroebnerError> {
    let reg = f.registry().clone();
    let Some(g) = GPoly::from_poly(f, &basis.order) else {
        return Ok(Poly::zero(&reg));
    };
    let gb: Vec<GPoly> = basis
        .generators
        .iter()
        .filter_map(|p| GPoly::from_poly(p, &basis.order))
        .collect();
    let (red, _) = engine::reduce_full(g.terms, &gb, None, &basis.order, budget)?;
    Ok(red.map_or_else(|| Poly::zero(&reg), |h| h.to_poly(&reg)))
}

/// Generators of the elimination ideal onto the `keep` variables, via a
/// block order with everything else in front.
pub fn eliminate(gens: &[Poly], keep: &[Var], budget: &Budget) -> Result<Vec<Poly>, GroebnerError> {
    let reg = gens
        .first()
        .map(|g| g.registry().clone())
        .ok_or(GroebnerError::EmptyInput)?;
    let mut keep_mask = vec![false; reg.len()];
    for v in keep {
        keep_mask[v.idx()] = true;
    }
    let front: Vec<Var> = reg.vars().filter(|v| !keep_mask[v.idx()]).collect();
    let order = MonomialOrder::block(reg.len(), &front);
    let basis = groebner_basis(gens, order, budget)?;
    Ok(basis
        .generators
        .into_iter()
        .filter(|g| g.terms().iter().all(|(m, _)| m.supported_on(&keep_mask)))
        .collect())
}

/// Squarefree generator of the radical of a univariate elimination ideal:
/// the constant `1` for the unit ideal, `0` for the zero ideal.
pub fn radical_generator_uni(elim_gens: &[Poly], x: Var) -> Result<Poly, GroebnerError> {
    let Some(first) = elim_gens.first() else {
        return Err(GroebnerError::EmptyInput);
    };
    let reg = first.registry().clone();
    let nonzero: Vec<&Poly> = elim_gens.iter().filter(|g| !g.is_zero()).collect();
    if nonzero.is_empty() {
        return Ok(Poly::zero(&reg));
    }
    let mut g = crate::polyring::UniPoly::zero();
    for p in nonzero {
        if p.is_constant() {
            return Ok(Poly::one(&reg));
        }
        let u = as_univariate(p, x)?;
        g = g.gcd(&u);
        if g.degree() == 0 {
            return Ok(Poly::one(&reg));
        }
    }
    let sf = g.squarefree_part()?;
    Ok(sf.to_poly(&reg, x).canonicalize())
}

/// Codimension-1 part of the variety of an elimination ideal: squarefree
/// part of the gcd of the generators, `1` when that gcd is constant
/// (codimension at least two), error on the zero ideal.
pub fn codim1_part(elim_gens: &[Poly]) -> Result<Poly, GroebnerError> {
    let Some(first) = elim_gens.first() else {
        return Err(GroebnerError::ZeroIdeal);
    };
    let reg = first.registry().clone();
    let nonzero: Vec<&Poly> = elim_gens.iter().filter(|g| !g.is_zero()).collect();
    if nonzero.is_empty() {
        return Err(GroebnerError::ZeroIdeal);
    }
    let mut g = Poly::zero(&reg);
    for p in nonzero {
        g = poly_gcd(&g, p);
        if g.is_constant() {
            return Ok(Poly::one(&reg));
        }
    }
    Ok(squarefree_part_multi(&g))
}

/// True iff the ideal is the whole ring.
pub fn is_unit_ideal(gens: &[Poly], budget: &Budget) -> Result<bool, GroebnerError> {
    if gens.iter().all(|g| g.is_zero()) {
        return Ok(false);
    }
    if gens.iter().any(|g| {
        g.constant_value()
            .map_or(false, |c| !num_traits::Zero::is_zero(c))
    }) {
        return Ok(true);
    }
    let basis = groebner_basis(gens, MonomialOrder::GrevLex, budget)?;
    Ok(basis.generators.len() == 1 && basis.generators[0].is_constant())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::polyring::{parse_poly, resultant, VarRegistry};
    use num_rational::BigRational;
    use std::sync::Arc;

    fn reg() -> Arc<VarRegistry> {
        VarRegistry::new(&[("x", &["x", "y", "z"]), ("u", &["u"])])
    }

    fn p(r: &Arc<VarRegistry>, s: &str) -> Poly {
        parse_poly(r, s).unwrap()
    }

    fn b() -> Budget {
        Budget::unlimited()
    }

    #[test]
    fn buchberger_by_hand() {
        let r = reg();
        // {x^2 - y, y} under lex x>y gives {x^2, y}
        let basis =
            groebner_basis(&[p(&r, "x^2 - y"), p(&r, "y")], MonomialOrder::Lex, &b()).unwrap();
        assert_eq!(basis.generators, vec![p(&r, "y"), p(&r, "x^2")]);
        // unit ideal
        let basis =
            groebner_basis(&[p(&r, "1"), p(&r, "x + y")], MonomialOrder::GrevLex, &b()).unwrap();
        assert_eq!(basis.generators, vec![p(&r, "1")]);
        // single generator comes back normalized
        let basis = groebner_basis(&[p(&r, "2*x - 2*y")], MonomialOrder::GrevLex, &b()).unwrap();
        assert_eq!(basis.generators, vec![p(&r, "x - y")]);
    }

    #[test]
    fn s_polynomials_reduce_to_zero() {
        let r = reg();
        let gens = [
            p(&r, "x^2 + y*z - 1"),
            p(&r, "x*y + z"),
            p(&r, "y^2 - z^2 + x"),
        ];
        let basis = groebner_basis(&gens, MonomialOrder::GrevLex, &b()).unwrap();
        for i in 0..basis.generators.len() {
            for j in i + 1..basis.generators.len() {
                let f = &basis.generators[i];
                let g = &basis.generators[j];
                let (fm, fc) = f.leading().unwrap();
                let (gm, gc) = g.leading().unwrap();
                let l = fm.lcm(gm);
                let sf = f.mul_monomial(&fm.div_into(&l), &fc.recip());
                let sg = g.mul_monomial(&gm.div_into(&l), &gc.recip());
                let s = &sf - &sg;
                let nf = normal_form(&s, &basis, &b()).unwrap();
                assert!(nf.is_zero(), "S({i},{j}) did not reduce to zero");
            }
        }
        for g in &gens {
            assert!(normal_form(g, &basis, &b()).unwrap().is_zero());
        }
    }

    #[test]
    fn deterministic_reruns() {
        let r = reg();
        let gens = [
            p(&r, "x^2*y - z^3 + 1"),
            p(&r, "x*z - y^2"),
            p(&r, "y*z^2 - x - 7"),
        ];
        let b1 = groebner_basis(&gens, MonomialOrder::GrevLex, &b()).unwrap();
        let b2 = groebner_basis(&gens, MonomialOrder::GrevLex, &b()).unwrap();
        assert_eq!(b1.generators, b2.generators);
        let s1: Vec<String> = b1.generators.iter().map(|g| g.to_string()).collect();
        let s2: Vec<String> = b2.generators.iter().map(|g| g.to_string()).collect();
        assert_eq!(s1, s2);
    }

    #[test]
    fn eliminate_linear_chain() {
        let r = reg();
        let out =
            eliminate(&[p(&r, "x - y"), p(&r, "y - 3")], &[r.var("x").unwrap()], &b()).unwrap();
        assert_eq!(out, vec![p(&r, "x - 3")]);
    }

    #[test]
    fn radical_generator_examples() {
        let r = reg();
        let x = r.var("x").unwrap();
        assert!(radical_generator_uni(&[p(&r, "1")], x).unwrap().is_one());
        let g = radical_generator_uni(&[p(&r, "(x-1)^2"), p(&r, "(x-1)^3")], x).unwrap();
        assert_eq!(g, p(&r, "x - 1"));
        assert!(radical_generator_uni(&[Poly::zero(&r)], x).unwrap().is_zero());
    }

    #[test]
    fn codim1_examples() {
        let r = reg();
        let d = p(&r, "(x + y)^2 * z");
        assert_eq!(codim1_part(&[d]).unwrap(), p(&r, "(x + y)*z").canonicalize());
        assert_eq!(
            codim1_part(&[p(&r, "x*y"), p(&r, "x*z")]).unwrap(),
            p(&r, "x")
        );
        assert!(codim1_part(&[p(&r, "x"), p(&r, "y")]).unwrap().is_one());
        assert!(codim1_part(&[Poly::zero(&r)]).is_err());
    }

    #[test]
    fn unit_ideal_checks() {
        let r = reg();
        assert!(is_unit_ideal(&[p(&r, "1")], &b()).unwrap());
        assert!(is_unit_ideal(&[p(&r, "x"), p(&r, "x + 1")], &b()).unwrap());
        assert!(!is_unit_ideal(&[p(&r, "x"), p(&r, "y")], &b()).unwrap());
    }

    #[test]
    fn elimination_matches_resultant_on_bivariate_toys() {
        use rand::{Rng, SeedableRng};
        let r = reg();
        let x = r.var("x").unwrap();
        let u = r.var("u").unwrap();
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        let mut checked = 0;
        while checked < 50 {
            // f monic in x so the projection never degenerates
            let df = rng.gen_range(1..=4usize);
            let dg = rng.gen_range(1..=4usize);
            let mut ftxt = format!("x^{df}");
            for e in 0..df {
                let c: i64 = rng.gen_range(-5..=5);
                let eu = rng.gen_range(0..=2u32);
                ftxt += &format!(" + ({c})*x^{e}*u^{eu}");
            }
            let mut gtxt = String::from("0");
            for e in 0..=dg {
                let c: i64 = rng.gen_range(-5..=5);
                let eu = rng.gen_range(0..=2u32);
                gtxt += &format!(" + ({c})*x^{e}*u^{eu}");
            }
            let f = p(&r, &ftxt);
            let g = p(&r, &gtxt);
            if g.degree_in(x) == 0 {
                continue;
            }
            checked += 1;
            let elim = eliminate(&[f.clone(), g.clone()], &[u], &b()).unwrap();
            let res = resultant(&f, &g, x).unwrap();
            if res.is_zero() {
                // common factor: the projection is everything
                assert!(elim.iter().all(|e| e.is_zero()) || elim.is_empty(), "f={f} g={g}");
            } else {
                let gen = radical_generator_uni(&elim, u).unwrap();
                let uni = as_univariate(&res, u).unwrap();
                let res_sf = uni.squarefree_part().unwrap().to_poly(&r, u).canonicalize();
                assert_eq!(gen, res_sf, "f={f} g={g}");
            }
        }
    }
}
