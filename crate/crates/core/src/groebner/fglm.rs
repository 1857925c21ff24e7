//! Linear algebra over the quotient ring of a zero-dimensional ideal:
//! staircase bases, multiplication maps, minimal polynomials of ring
//! elements and shape-position parametrizations.

use super::engine::{reduce_full, GPoly};
use super::{GroebnerError, IdealBasis};
use crate::budget::Budget;
use crate::polyring::{Monomial, MonomialOrder, Poly, UniPoly, Var, VarRegistry};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use std::collections::HashMap;
use std::sync::Arc;

/// A zero-dimensional ideal presented by a reduced Gröbner basis, with the
/// staircase (standard monomial) basis of its quotient ring.
pub struct ZeroDimSystem {
    reg: Arc<VarRegistry>,
    order: MonomialOrder,
    gb: Vec<GPoly>,
    staircase: Vec<Monomial>,
    index: HashMap<Monomial, usize>,
    budget: Budget,
}

impl ZeroDimSystem {
    /// Check zero-dimensionality (every registry variable has a pure power
    /// among the leading monomials) and enumerate the staircase.
    pub fn new(basis: &IdealBasis, budget: &Budget) -> Result<ZeroDimSystem, GroebnerError> {
        let reg = basis
            .generators
            .first()
            .map(|g| g.registry().clone())
            .ok_or(GroebnerError::EmptyInput)?;
        let gb: Vec<GPoly> = basis
            .generators
            .iter()
            .filter_map(|g| GPoly::from_poly(g, &basis.order))
            .collect();
        if gb.is_empty() {
            return Err(GroebnerError::NotZeroDimensional);
        }
        let lms: Vec<Monomial> = gb.iter().map(|g| g.lm().clone()).collect();
        // pure-power bound per variable
        let mut bound = vec![None::<u16>; reg.len()];
        for lm in &lms {
            let powers: Vec<(Var, u16)> = lm.powers().collect();
            if powers.len() == 1 {
                let (v, e) = powers[0];
                let b = &mut bound[v.idx()];
                *b = Some(b.map_or(e, |x| x.min(e)));
            }
            if lm.is_one() {
                // unit ideal: empty staircase
                return Ok(ZeroDimSystem {
                    reg,
                    order: basis.order.clone(),
                    gb,
                    staircase: vec![],
                    index: HashMap::new(),
                    budget: budget.clone(),
                });
            }
        }
        if bound.iter().any(|b| b.is_none()) {
            return Err(GroebnerError::NotZeroDimensional);
        }
        // enumerate monomials under the staircase
        let mut stack = vec![Monomial::one(reg.len())];
        let mut seen: HashMap<Monomial, ()> = HashMap::new();
        seen.insert(stack[0].clone(), ());
        let mut staircase = vec![stack[0].clone()];
        while let Some(m) = stack.pop() {
            for v in reg.vars() {
                let cand = m.mul_var(v, 1);
                if seen.contains_key(&cand) {
                    continue;
                }
                if lms.iter().any(|lm| lm.divides(&cand)) {
                    continue;
                }
                seen.insert(cand.clone(), ());
                staircase.push(cand.clone());
                stack.push(cand);
            }
        }
        staircase.sort_by(|a, b| basis.order.cmp(a, b));
        let index = staircase
            .iter()
            .enumerate()
            .map(|(i, m)| (m.clone(), i))
            .collect();
        Ok(ZeroDimSystem {
            reg,
            order: basis.order.clone(),
            gb,
            staircase,
            index,
            budget: budget.clone(),
        })
    }

    /// Vector-space dimension of the quotient ring (number of solutions
    /// counted with multiplicity).
    pub fn dimension(&self) -> usize {
        self.staircase.len()
    }

    pub fn registry(&self) -> &Arc<VarRegistry> {
        &self.reg
    }

    /// Normal-form coordinates of a monomial in the staircase basis.
    fn nf_vector(&self, m: &Monomial) -> Result<Vec<BigRational>, GroebnerError> {
        let start = vec![(m.clone(), BigInt::one())];
        let (red, mult) = reduce_full(start, &self.gb, None, &self.order, &self.budget)?;
        let mut v = vec![BigRational::zero(); self.staircase.len()];
        if let Some(h) = red {
            for (mm, c) in h.terms {
                let idx = self.index.get(&mm).copied().expect("NF lies on staircase");
                v[idx] = BigRational::new(c, mult.clone());
            }
        }
        Ok(v)
    }

    /// Coordinates of `poly` (an arbitrary element) in the staircase basis.
    pub fn nf_vector_of_poly(&self, poly: &Poly) -> Result<Vec<BigRational>, GroebnerError> {
        let mut v = vec![BigRational::zero(); self.staircase.len()];
        for (m, c) in poly.terms() {
            let w = self.nf_vector(m)?;
            for (i, wi) in w.into_iter().enumerate() {
                v[i] += wi * c;
            }
        }
        Ok(v)
    }

    /// Matrix of multiplication by `v` on the quotient, as columns indexed
    /// by staircase position.
    fn mult_matrix(&self, v: Var) -> Result<Vec<Vec<BigRational>>, GroebnerError> {
        let mut cols = Vec::with_capacity(self.staircase.len());
        for b in &self.staircase {
            cols.push(self.nf_vector(&b.mul_var(v, 1))?);
        }
        Ok(cols)
    }

    /// Minimal polynomial of the image of variable `v` in the quotient
    /// ring; its squarefree part generates the radical of the elimination
    /// ideal onto `v`.
    pub fn minimal_polynomial(&self, v: Var) -> Result<UniPoly, GroebnerError> {
        if self.staircase.is_empty() {
            // unit ideal
            return Ok(UniPoly::one());
        }
        let mv = self.mult_matrix(v)?;
        let dim = self.staircase.len();
        let mut w = vec![BigRational::zero(); dim];
        let one_idx = self.index[&Monomial::one(self.reg.len())];
        w[one_idx] = BigRational::one();
        let mut solver = LinSpan::new(dim);
        let mut powers: Vec<Vec<BigRational>> = Vec::new();
        loop {
            match solver.insert(w.clone()) {
                Ok(()) => {
                    powers.push(w.clone());
                    w = mat_vec(&mv, &w);
                }
                Err(combo) => {
                    // w = sum combo_k * powers[k]  =>  minpoly = x^n - sum combo_k x^k
                    let mut coeffs = vec![BigRational::zero(); powers.len() + 1];
                    for (k, c) in combo.into_iter().enumerate() {
                        coeffs[k] = -c;
                    }
                    coeffs[powers.len()] = BigRational::one();
                    return Ok(UniPoly::new(coeffs));
                }
            }
        }
    }

    /// Shape-position parametrization with respect to the primary variable:
    /// for every other variable `y`, a univariate `q` with `y = q(primary)`
    /// modulo the ideal. Returns `None` when some variable does not lie in
    /// the span of the primary's powers (shape failure).
    pub fn shape_parametrization(
        &self,
        primary: Var,
    ) -> Result<Option<(UniPoly, Vec<(Var, UniPoly)>)>, GroebnerError> {
        let g = self.minimal_polynomial(primary)?;
        let deg = g.degree();
        if self.staircase.is_empty() {
            return Ok(Some((g, vec![])));
        }
        let mv = self.mult_matrix(primary)?;
        let dim = self.staircase.len();
        let one_idx = self.index[&Monomial::one(self.reg.len())];
        // columns: NF(primary^k), k < deg g
        let mut pow = vec![BigRational::zero(); dim];
        pow[one_idx] = BigRational::one();
        let mut cols = Vec::with_capacity(deg);
        for _ in 0..deg {
            cols.push(pow.clone());
            pow = mat_vec(&mv, &pow);
        }
        let mut out = Vec::new();
        for v in self.reg.vars() {
            if v == primary {
                continue;
            }
            let target = self.nf_vector(&Monomial::var(self.reg.len(), v, 1))?;
            match solve_dense(&cols, &target) {
                Some(sol) => out.push((v, UniPoly::new(sol))),
                None => return Ok(None),
            }
        }
        Ok(Some((g, out)))
    }
}

fn mat_vec(cols: &[Vec<BigRational>], v: &[BigRational]) -> Vec<BigRational> {
    let dim = cols.first().map_or(0, |c| c.len());
    let mut out = vec![BigRational::zero(); dim];
    for (j, c) in v.iter().enumerate() {
        if c.is_zero() {
            continue;
        }
        for i in 0..dim {
            if !cols[j][i].is_zero() {
                out[i] += &cols[j][i] * c;
            }
        }
    }
    out
}

/// Incremental row space with expression tracking: inserting a dependent
/// vector yields its coordinates over the previously inserted ones.
struct LinSpan {
    dim: usize,
    rows: Vec<Vec<BigRational>>,
    exprs: Vec<Vec<BigRational>>,
    pivots: Vec<usize>,
    count: usize,
}

impl LinSpan {
    fn new(dim: usize) -> Self {
        LinSpan {
            dim,
            rows: vec![],
            exprs: vec![],
            pivots: vec![],
            count: 0,
        }
    }

    fn insert(&mut self, mut v: Vec<BigRational>) -> Result<(), Vec<BigRational>> {
        let mut expr = vec![BigRational::zero(); self.count];
        for (k, row) in self.rows.iter().enumerate() {
            let piv = self.pivots[k];
            if v[piv].is_zero() {
                continue;
            }
            let f = v[piv].clone();
            for i in 0..self.dim {
                if !row[i].is_zero() {
                    let d = &row[i] * &f;
                    v[i] -= d;
                }
            }
            for (i, e) in self.exprs[k].iter().enumerate() {
                if !e.is_zero() {
                    expr[i] += e * &f;
                }
            }
        }
        match v.iter().position(|c| !c.is_zero()) {
            None => Err(expr),
            Some(p) => {
                let lead = v[p].clone();
                for c in v.iter_mut() {
                    *c = &*c / &lead;
                }
                // remaining = input - sum f_k row_k, so previous inputs enter
                // the stored row's expression with a flipped sign
                let mut e: Vec<BigRational> = expr.into_iter().map(|c| -c).collect();
                e.push(BigRational::one());
                for c in e.iter_mut() {
                    *c = &*c / &lead;
                }
                // expr rows track: row_k = sum_j exprs[k][j] * input_j
                self.rows.push(v);
                self.exprs.push(e);
                self.pivots.push(p);
                self.count += 1;
                Ok(())
            }
        }
    }
}

/// Solve `cols * x = target` exactly; `None` if inconsistent.
fn solve_dense(cols: &[Vec<BigRational>], target: &[BigRational]) -> Option<Vec<BigRational>> {
    let n = cols.len();
    let dim = target.len();
    // Gaussian elimination on the augmented [cols | target] over rows
    let mut a: Vec<Vec<BigRational>> = (0..dim)
        .map(|i| {
            let mut row: Vec<BigRational> = cols.iter().map(|c| c[i].clone()).collect();
            row.push(target[i].clone());
            row
        })
        .collect();
    let mut rank_rows = Vec::new();
    let mut col = 0;
    let mut row = 0;
    let mut pivot_of_col = vec![None; n];
    while row < dim && col < n {
        let piv = (row..dim).find(|&r| !a[r][col].is_zero());
        match piv {
            None => {
                col += 1;
                continue;
            }
            Some(pr) => {
                a.swap(row, pr);
                let lead = a[row][col].clone();
                for c in a[row].iter_mut() {
                    *c = &*c / &lead;
                }
                for r in 0..dim {
                    if r != row && !a[r][col].is_zero() {
                        let f = a[r][col].clone();
                        for c in 0..=n {
                            let d = &a[row][c] * &f;
                            a[r][c] -= d;
                        }
                    }
                }
                pivot_of_col[col] = Some(row);
                rank_rows.push(row);
                row += 1;
                col += 1;
            }
        }
    }
    // inconsistency: a zero row with nonzero rhs
    for r in row..dim {
        if !a[r][n].is_zero() {
            return None;
        }
    }
    let mut x = vec![BigRational::zero(); n];
    for (c, p) in pivot_of_col.iter().enumerate() {
        if let Some(r) = p {
            x[c] = a[*r][n].clone();
        }
    }
    // verify (free columns may make the nominal solution wrong only if the
    // system was inconsistent, which we checked; still, exactness is cheap)
    for i in 0..dim {
        let mut s = BigRational::zero();
        for (j, xj) in x.iter().enumerate() {
            if !xj.is_zero() {
                s += &cols[j][i] * xj;
            }
        }
        if s != target[i] {
            return None;
        }
    }
    Some(x)
}

/// Exact dense linear solve for square systems (interpolation matrices).
/// Returns `None` when singular.
pub fn solve_square(matrix: &[Vec<BigRational>], rhs: &[BigRational]) -> Option<Vec<BigRational>> {
    let n = rhs.len();
    let cols: Vec<Vec<BigRational>> = (0..n)
        .map(|j| (0..n).map(|i| matrix[i][j].clone()).collect())
        .collect();
    // square: demand full rank
    let mut a: Vec<Vec<BigRational>> = (0..n)
        .map(|i| {
            let mut row = matrix[i].clone();
            row.push(rhs[i].clone());
            row
        })
        .collect();
    for col in 0..n {
        let piv = (col..n).find(|&r| !a[r][col].is_zero())?;
        a.swap(col, piv);
        let lead = a[col][col].clone();
        for c in a[col].iter_mut() {
            *c = &*c / &lead;
        }
        for r in 0..n {
            if r != col && !a[r][col].is_zero() {
                let f = a[r][col].clone();
                for c in 0..=n {
                    let d = &a[col][c] * &f;
                    a[r][c] -= d;
                }
            }
        }
    }
    let x: Vec<BigRational> = (0..n).map(|i| a[i][n].clone()).collect();
    let _ = cols;
    Some(x)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::groebner::groebner_basis;
    use crate::polyring::parse_poly;

    fn b() -> Budget {
        Budget::unlimited()
    }

    #[test]
    fn staircase_and_minpoly() {
        let r = VarRegistry::flat(&["x", "y"]);
        let gens = [
            parse_poly(&r, "x^2 - 2").unwrap(),
            parse_poly(&r, "y - x").unwrap(),
        ];
        let gb = groebner_basis(&gens, MonomialOrder::GrevLex, &b()).unwrap();
        let sys = ZeroDimSystem::new(&gb, &b()).unwrap();
        assert_eq!(sys.dimension(), 2);
        let mp = sys.minimal_polynomial(r.var("y").unwrap()).unwrap();
        assert_eq!(mp, UniPoly::from_ints(&[-2, 0, 1]).monic());
    }

    #[test]
    fn shape_parametrization_works() {
        let r = VarRegistry::flat(&["x", "y"]);
        // solutions (1,2) and (2,3): y = x + 1
        let gens = [
            parse_poly(&r, "(x - 1)*(x - 2)").unwrap(),
            parse_poly(&r, "y - x - 1").unwrap(),
        ];
        let gb = groebner_basis(&gens, MonomialOrder::GrevLex, &b()).unwrap();
        let sys = ZeroDimSystem::new(&gb, &b()).unwrap();
        let (g, qs) = sys
            .shape_parametrization(r.var("x").unwrap())
            .unwrap()
            .unwrap();
        assert_eq!(g.monic(), UniPoly::from_ints(&[2, -3, 1]).monic());
        assert_eq!(qs.len(), 1);
        assert_eq!(qs[0].1, UniPoly::from_ints(&[1, 1]));
    }

    #[test]
    fn shape_failure_detected() {
        let r = VarRegistry::flat(&["x", "y"]);
        // {x^2 - 1, y^2 - 1}: y not a function of x
        let gens = [
            parse_poly(&r, "x^2 - 1").unwrap(),
            parse_poly(&r, "y^2 - 1").unwrap(),
        ];
        let gb = groebner_basis(&gens, MonomialOrder::GrevLex, &b()).unwrap();
        let sys = ZeroDimSystem::new(&gb, &b()).unwrap();
        assert!(sys
            .shape_parametrization(r.var("x").unwrap())
            .unwrap()
            .is_none());
    }

    #[test]
    fn not_zero_dim_detected() {
        let r = VarRegistry::flat(&["x", "y"]);
        let gens = [parse_poly(&r, "x*y - 1").unwrap()];
        let gb = groebner_basis(&gens, MonomialOrder::GrevLex, &b()).unwrap();
        assert!(matches!(
            ZeroDimSystem::new(&gb, &b()),
            Err(GroebnerError::NotZeroDimensional)
        ));
    }
}
