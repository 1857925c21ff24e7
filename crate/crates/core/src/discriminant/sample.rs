//! Sampling: restrictions of the system to a parameter line through one
//! distinguished parameter, with and without the Jacobian in the main
//! elimination (Strategy 3 trades it for a resultant plus membership
//! filtering).

use super::elim::elim_radical_single;
use super::DiscError;
use crate::budget::Budget;
use crate::likelihood::PolySystem;
use crate::polyring::{as_univariate, Poly, UniPoly, Var};
use std::collections::HashMap;

/// Why a sample point was rejected; the caller redraws.
#[derive(Debug, Clone, thiserror::Error)]
pub enum SampleDefect {
    #[error("sample produced the unit ideal")]
    UnitIdeal,
    #[error("sample produced the zero elimination ideal")]
    ZeroIdeal,
    #[error("section degree {got} below the expected {want}")]
    DegreeDrop { got: u32, want: u32 },
    #[error("eliminant degree in the primary unknown differs from the ML degree")]
    ShapeFailure,
    #[error("{0}")]
    Disc(String),
}

impl From<DiscError> for SampleDefect {
    fn from(e: DiscError) -> Self {
        SampleDefect::Disc(e.to_string())
    }
}

fn bind_values(sys: &PolySystem, free: &[Var], values: &[i64]) -> HashMap<Var, Poly> {
    free.iter()
        .zip(values)
        .map(|(&v, &c)| (v, Poly::int(&sys.reg, c)))
        .collect()
}

/// The squarefree generator of the restriction ideal
/// `<F_0, F*_1..F*_n, F_{n+1}.., J> ∩ Q[dist]`, monic, checked to have the
/// expected degree. This is the basic sampling step.
pub fn intersect_at(
    sys: &PolySystem,
    dist: Var,
    free: &[Var],
    values: &[i64],
    expected_degree: Option<u32>,
    budget: &Budget,
) -> Result<UniPoly, SampleDefect> {
    let spec = sys
        .substituted(&bind_values(sys, free, values))
        .map_err(|e| SampleDefect::Disc(e.to_string()))?;
    let gens = spec
        .gens_with_jac()
        .map_err(|e| SampleDefect::Disc(e.to_string()))?;
    let a = elim_radical_single(&gens, dist, budget)?;
    if a.is_zero() {
        return Err(SampleDefect::ZeroIdeal);
    }
    if a.is_constant() {
        return Err(SampleDefect::UnitIdeal);
    }
    let uni = as_univariate(&a, dist).map_err(|e| SampleDefect::Disc(e.to_string()))?;
    if let Some(want) = expected_degree {
        if (uni.degree() as u32) != want {
            return Err(SampleDefect::DegreeDrop {
                got: uni.degree() as u32,
                want,
            });
        }
    }
    Ok(uni.monic())
}

/// `intersect` with the distinguished parameter being the system's first
/// parameter and the rest bound to `values` in order.
pub fn intersect(
    sys: &PolySystem,
    values: &[i64],
    expected_degree: Option<u32>,
    budget: &Budget,
) -> Result<UniPoly, SampleDefect> {
    let dist = sys.params[0];
    intersect_at(sys, dist, &sys.params[1..], values, expected_degree, budget)
}

/// Strategy-3 sampling: eliminate without `J` down to `(dist, y_0)`, take
/// the resultant of the eliminant with its `y_0`-derivative, then let the
/// membership test against `<F*, J, G>` decide which factors stay. The
/// retained divisor is the elimination-ideal generator itself, so mixed
/// factors are handled exactly.
pub fn intersect_s3_at(
    sys: &PolySystem,
    dist: Var,
    free: &[Var],
    values: &[i64],
    ml_degree: u32,
    expected_degree: Option<u32>,
    budget: &Budget,
) -> Result<UniPoly, SampleDefect> {
    let spec = sys
        .substituted(&bind_values(sys, free, values))
        .map_err(|e| SampleDefect::Disc(e.to_string()))?;
    let g = super::elim::elim_pair_codim1(&spec.equations, dist, sys.primary, budget)?;
    if g.is_zero() || g.is_constant() {
        return Err(SampleDefect::ZeroIdeal);
    }
    if g.degree_in(sys.primary) != ml_degree {
        return Err(SampleDefect::ShapeFailure);
    }
    let gy = g.derivative(sys.primary);
    if gy.is_zero() {
        return Err(SampleDefect::ShapeFailure);
    }
    let res = crate::polyring::resultant(&g, &gy, sys.primary)
        .map_err(|e| SampleDefect::Disc(e.to_string()))?;
    if res.is_zero() {
        return Err(SampleDefect::ShapeFailure);
    }
    let res_uni = as_univariate(&res, dist).map_err(|e| SampleDefect::Disc(e.to_string()))?;

    let membership_gens = {
        let mut gens = spec
            .gens_with_jac()
            .map_err(|e| SampleDefect::Disc(e.to_string()))?;
        gens.push(Poly::zero(&sys.reg)); // placeholder slot for the factor
        gens
    };
    let mut retained = UniPoly::one();
    for piece in factor_pieces(&res_uni) {
        let mut gens = membership_gens.clone();
        let idx = gens.len() - 1;
        gens[idx] = piece.to_poly(&sys.reg, dist);
        let h = elim_radical_single(&gens, dist, budget)?;
        if !h.is_constant() && !h.is_zero() {
            let hu = as_univariate(&h, dist).map_err(|e| SampleDefect::Disc(e.to_string()))?;
            retained = retained.mul(&hu);
        }
    }
    if retained.degree() == 0 {
        return Err(SampleDefect::UnitIdeal);
    }
    let out = retained
        .squarefree_part()
        .map_err(|e| SampleDefect::Disc(e.to_string()))?
        .monic();
    if let Some(want) = expected_degree {
        if (out.degree() as u32) != want {
            return Err(SampleDefect::DegreeDrop {
                got: out.degree() as u32,
                want,
            });
        }
    }
    Ok(out)
}

/// Strategy-3 sampling over the trailing parameters.
pub fn intersect_s3(
    sys: &PolySystem,
    values: &[i64],
    ml_degree: u32,
    expected_degree: Option<u32>,
    budget: &Budget,
) -> Result<UniPoly, SampleDefect> {
    let dist = sys.params[0];
    intersect_s3_at(
        sys,
        dist,
        &sys.params[1..],
        values,
        ml_degree,
        expected_degree,
        budget,
    )
}

/// Split a univariate polynomial into candidate divisor pieces: its
/// squarefree factors, each further split into rational-root linear
/// factors plus the remaining cofactor. Pieces are pairwise coprime.
pub(crate) fn factor_pieces(a: &UniPoly) -> Vec<UniPoly> {
    let mut out = Vec::new();
    let factors = match a.squarefree_factorization() {
        Ok(f) => f,
        Err(_) => return out,
    };
    for (f, _mult) in factors {
        let mut rest = f.primitive();
        for root in f.rational_roots() {
            // x - root, cleared to integer form
            let lin = UniPoly::new(vec![-root.clone(), num_rational::BigRational::from_integer(1.into())])
                .primitive();
            out.push(lin.clone());
            rest = rest.div_exact(&lin).primitive();
        }
        if rest.degree() > 0 {
            out.push(rest);
        }
    }
    out
}

/// Evaluate one closure over many inputs on a bounded worker pool,
/// aggregating results in input order so the outcome is independent of
/// scheduling.
pub(crate) fn eval_batch<I, O, F>(items: Vec<I>, threads: usize, f: F) -> Vec<O>
where
    I: Send + Sync,
    O: Send,
    F: Fn(&I) -> O + Sync,
{
    use rayon::prelude::*;
    if threads <= 1 || items.len() <= 1 {
        return items.iter().map(|i| f(i)).collect();
    }
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build()
        .expect("worker pool");
    pool.install(|| items.par_iter().map(|i| f(i)).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_rational::BigRational;

    #[test]
    fn factor_pieces_split_linear_and_rest() {
        // (x-1)^2 (2x+3) (x^2+1)
        let f = UniPoly::from_ints(&[-1, 1])
            .mul(&UniPoly::from_ints(&[-1, 1]))
            .mul(&UniPoly::from_ints(&[3, 2]))
            .mul(&UniPoly::from_ints(&[1, 0, 1]));
        let pieces = factor_pieces(&f);
        assert_eq!(pieces.len(), 3);
        assert!(pieces.contains(&UniPoly::from_ints(&[-1, 1])));
        assert!(pieces.contains(&UniPoly::from_ints(&[3, 2])));
        assert!(pieces.contains(&UniPoly::from_ints(&[1, 0, 1])));
        // pairwise coprime
        for i in 0..pieces.len() {
            for j in i + 1..pieces.len() {
                assert_eq!(pieces[i].gcd(&pieces[j]).degree(), 0);
            }
        }
        let _ = BigRational::from_integer(1.into());
    }
}
