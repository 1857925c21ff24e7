//! Buchberger engine over primitive integer polynomials.
//!
//! Pair bookkeeping follows Gebauer–Möller; pair selection is the normal
//! strategy (smallest lcm in the active order). Reduction is fraction-free
//! pseudo-reduction with periodic integer content stripping, which keeps
//! the whole run inside ℤ[x].

use crate::budget::{Budget, BudgetError};
use crate::polyring::{Monomial, MonomialOrder, Poly};
use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use std::cmp::Ordering;

/// Internal polynomial: integer coefficients, terms descending under the
/// run's order, primitive with positive leading coefficient.
#[derive(Debug, Clone)]
pub(crate) struct GPoly {
    pub terms: Vec<(Monomial, BigInt)>,
}

impl GPoly {
    pub fn lm(&self) -> &Monomial {
        &self.terms[0].0
    }

    pub fn lc(&self) -> &BigInt {
        &self.terms[0].1
    }

    pub fn is_constant(&self) -> bool {
        self.terms.len() == 1 && self.terms[0].0.is_one()
    }

    pub fn from_poly(f: &Poly, ord: &MonomialOrder) -> Option<GPoly> {
        if f.is_zero() {
            return None;
        }
        let mut den = BigInt::one();
        for (_, c) in f.terms() {
            den = den.lcm(c.denom());
        }
        let mut terms: Vec<(Monomial, BigInt)> = f
            .terms()
            .iter()
            .map(|(m, c)| (m.clone(), c.numer() * (&den / c.denom())))
            .collect();
        terms.sort_by(|a, b| ord.cmp(&b.0, &a.0));
        let mut g = GPoly { terms };
        g.normalize();
        Some(g)
    }

    pub fn to_poly(&self, reg: &std::sync::Arc<crate::polyring::VarRegistry>) -> Poly {
        Poly::from_terms(
            reg,
            self.terms
                .iter()
                .map(|(m, c)| (m.clone(), BigRational::from_integer(c.clone())))
                .collect(),
        )
    }

    /// Divide by integer content, force positive leading coefficient.
    fn normalize(&mut self) {
        let mut g = BigInt::zero();
        for (_, c) in &self.terms {
            g = g.gcd(c);
            if g.is_one() {
                break;
            }
        }
        if self.terms[0].1.is_negative() {
            g = -g;
        }
        if !g.is_one() {
            for (_, c) in &mut self.terms {
                *c = &*c / &g;
            }
        }
    }
}

/// Merge `a - mono*c*b` where terms are descending under `ord`.
fn sub_mul(
    a: &[(Monomial, BigInt)],
    b: &[(Monomial, BigInt)],
    mono: &Monomial,
    c: &BigInt,
    ord: &MonomialOrder,
) -> Vec<(Monomial, BigInt)> {
    let mut out = Vec::with_capacity(a.len() + b.len());
    let (mut i, mut j) = (0, 0);
    while i < a.len() && j < b.len() {
        let bm = b[j].0.mul(mono);
        match ord.cmp(&a[i].0, &bm) {
            Ordering::Greater => {
                out.push(a[i].clone());
                i += 1;
            }
            Ordering::Less => {
                out.push((bm, -(&b[j].1 * c)));
                j += 1;
            }
            Ordering::Equal => {
                let v = &a[i].1 - &b[j].1 * c;
                if !v.is_zero() {
                    out.push((a[i].0.clone(), v));
                }
                i += 1;
                j += 1;
            }
        }
    }
    out.extend_from_slice(&a[i..]);
    while j < b.len() {
        out.push((b[j].0.mul(mono), -(&b[j].1 * c)));
        j += 1;
    }
    out
}

fn scale_in_place(v: &mut [(Monomial, BigInt)], c: &BigInt) {
    if c.is_one() {
        return;
    }
    for (_, a) in v.iter_mut() {
        *a = &*a * c;
    }
}

/// Full normal form of `f` against `basis`. Returns the reduced polynomial
/// (a scalar multiple of the true normal form) together with the integer
/// multiplier applied to `f` along the way, so callers can recover exact
/// rational normal forms.
pub(crate) fn reduce_full(
    f: Vec<(Monomial, BigInt)>,
    basis: &[GPoly],
    alive: Option<&[bool]>,
    ord: &MonomialOrder,
    budget: &Budget,
) -> Result<(Option<GPoly>, BigInt), BudgetError> {
    let mut work = f;
    let mut done: Vec<(Monomial, BigInt)> = Vec::new();
    let mut multiplier = BigInt::one();
    let mut steps = 0usize;
    'outer: while let Some((m, c)) = work.first().cloned() {
        if steps % 64 == 0 {
            budget.check()?;
        }
        steps += 1;
        for (gi, g) in basis.iter().enumerate() {
            if alive.map_or(false, |a| !a[gi]) {
                continue;
            }
            if g.lm().divides(&m) {
                let d = c.gcd(g.lc());
                let alpha = g.lc() / &d;
                let beta = &c / &d;
                if !alpha.is_one() {
                    scale_in_place(&mut work, &alpha);
                    scale_in_place(&mut done, &alpha);
                    multiplier *= &alpha;
                }
                let q = g.lm().div_into(&m);
                work = sub_mul(&work, &g.terms, &q, &beta, ord);
                if steps % 16 == 0 {
                    let before = multiplier.clone();
                    strip_joint(&mut work, &mut done, &mut multiplier);
                    debug_assert!(!before.is_zero());
                }
                continue 'outer;
            }
        }
        done.push((m, c));
        work.remove(0);
    }
    if done.is_empty() {
        return Ok((None, multiplier));
    }
    strip_joint(&mut work, &mut done, &mut multiplier);
    Ok((Some(GPoly { terms: done }), multiplier))
}

/// Strip shared integer content of head+tail, folding it out of the
/// multiplier when it divides evenly (it always does by construction,
/// because content enters through the alpha scalings).
fn strip_joint(
    work: &mut Vec<(Monomial, BigInt)>,
    done: &mut Vec<(Monomial, BigInt)>,
    multiplier: &mut BigInt,
) {
    let mut g = BigInt::zero();
    for (_, c) in work.iter().chain(done.iter()) {
        g = g.gcd(c);
        if g.is_one() {
            return;
        }
    }
    if g.is_zero() || g.is_one() {
        return;
    }
    // only remove the part of the content that is also in the multiplier;
    // that keeps multiplier * original ≡ work + done exact
    let h = g.gcd(multiplier);
    if h.is_one() {
        return;
    }
    for (_, c) in work.iter_mut().chain(done.iter_mut()) {
        *c = &*c / &h;
    }
    *multiplier = &*multiplier / &h;
}

fn spoly(f: &GPoly, g: &GPoly, ord: &MonomialOrder) -> Vec<(Monomial, BigInt)> {
    let l = f.lm().lcm(g.lm());
    let d = f.lc().gcd(g.lc());
    let mf = f.lm().div_into(&l);
    let mg = g.lm().div_into(&l);
    let cf = g.lc() / &d;
    let cg = f.lc() / &d;
    // cf * mf * f  -  cg * mg * g
    let lhs: Vec<(Monomial, BigInt)> = f
        .terms
        .iter()
        .map(|(m, c)| (m.mul(&mf), c * &cf))
        .collect();
    sub_mul(&lhs, &g.terms, &mg, &cg, ord)
}

#[derive(Debug, Clone)]
struct Pair {
    i: usize,
    j: usize,
    lcm: Monomial,
}

/// Buchberger with the Gebauer–Möller update. Returns the reduced basis
/// (ascending leading monomials, primitive, positive leading coefficients).
pub(crate) fn buchberger(
    input: Vec<GPoly>,
    ord: &MonomialOrder,
    budget: &Budget,
) -> Result<Vec<GPoly>, BudgetError> {
    let mut basis: Vec<GPoly> = Vec::new();
    let mut alive: Vec<bool> = Vec::new();
    let mut pairs: Vec<Pair> = Vec::new();

    let add = |h: GPoly,
                   basis: &mut Vec<GPoly>,
                   alive: &mut Vec<bool>,
                   pairs: &mut Vec<Pair>| {
        let t = basis.len();
        // candidate pairs (i, t) for alive i, filtered by Gebauer–Möller
        let mut cand: Vec<Pair> = (0..t)
            .filter(|&i| alive[i])
            .map(|i| Pair {
                i,
                j: t,
                lcm: basis[i].lm().lcm(h.lm()),
            })
            .collect();
        // M criterion: drop (i,t) when another candidate's lcm strictly divides
        let mut keep = vec![true; cand.len()];
        for a in 0..cand.len() {
            if !keep[a] {
                continue;
            }
            for b in 0..cand.len() {
                if a == b || !keep[b] {
                    continue;
                }
                if cand[b].lcm.divides(&cand[a].lcm) && cand[b].lcm != cand[a].lcm {
                    keep[a] = false;
                    break;
                }
            }
        }
        // F criterion: among equal lcms keep the first
        for a in 0..cand.len() {
            if !keep[a] {
                continue;
            }
            for b in a + 1..cand.len() {
                if keep[b] && cand[b].lcm == cand[a].lcm {
                    keep[b] = false;
                }
            }
        }
        // B criterion on old pairs
        pairs.retain(|p| {
            let lcm_it = basis[p.i].lm().lcm(h.lm());
            let lcm_jt = basis[p.j].lm().lcm(h.lm());
            !(h.lm().divides(&p.lcm) && lcm_it != p.lcm && lcm_jt != p.lcm)
        });
        // product criterion last: coprime leading monomials reduce to zero
        for (k, p) in cand.drain(..).enumerate() {
            if keep[k] && !basis[p.i].lm().coprime(h.lm()) {
                pairs.push(p);
            }
        }
        // new generator supersedes basis elements whose lm it divides
        for i in 0..t {
            if alive[i] && h.lm().divides(basis[i].lm()) && basis[i].lm() != h.lm() {
                alive[i] = false;
            }
        }
        basis.push(h);
        alive.push(true);
    };

    // deterministic seeding: insert inputs sorted ascending by lm
    let mut input = input;
    input.sort_by(|a, b| ord.cmp(a.lm(), b.lm()));
    for f in input {
        if f.is_constant() {
            return Ok(vec![GPoly {
                terms: vec![(Monomial::one(f.lm().nvars()), BigInt::one())],
            }]);
        }
        add(f, &mut basis, &mut alive, &mut pairs);
    }

    while !pairs.is_empty() {
        budget.check()?;
        // normal strategy: smallest lcm, ties by indices
        let mut best = 0;
        for k in 1..pairs.len() {
            match ord.cmp(&pairs[k].lcm, &pairs[best].lcm) {
                Ordering::Less => best = k,
                Ordering::Equal => {
                    if (pairs[k].i, pairs[k].j) < (pairs[best].i, pairs[best].j) {
                        best = k;
                    }
                }
                Ordering::Greater => {}
            }
        }
        let p = pairs.swap_remove(best);
        let s = spoly(&basis[p.i], &basis[p.j], ord);
        let (red, _) = reduce_full(s, &basis, Some(&alive), ord, budget)?;
        if let Some(mut h) = red {
            h.normalize();
            if h.is_constant() {
                return Ok(vec![GPoly {
                    terms: vec![(Monomial::one(h.lm().nvars()), BigInt::one())],
                }]);
            }
            log::trace!(
                "basis {} pairs {} new lm deg {}",
                basis.len(),
                pairs.len(),
                h.lm().total_deg()
            );
            add(h, &mut basis, &mut alive, &mut pairs);
        }
    }

    // minimize: drop elements whose lm is divisible by another alive lm
    let n = basis.len();
    for i in 0..n {
        if !alive[i] {
            continue;
        }
        for j in 0..n {
            if i != j
                && alive[j]
                && basis[j].lm().divides(basis[i].lm())
                && (basis[j].lm() != basis[i].lm() || j < i)
            {
                alive[i] = false;
                break;
            }
        }
    }
    // tail-reduce each survivor against the others
    let mut kept: Vec<GPoly> = Vec::new();
    let order_idx: Vec<usize> = {
        let mut idx: Vec<usize> = (0..n).filter(|&i| alive[i]).collect();
        idx.sort_by(|&a, &b| ord.cmp(basis[a].lm(), basis[b].lm()));
        idx
    };
    for &i in &order_idx {
        let others: Vec<GPoly> = order_idx
            .iter()
            .filter(|&&j| j != i)
            .map(|&j| basis[j].clone())
            .collect();
        let (red, _) = reduce_full(basis[i].terms.clone(), &others, None, ord, budget)?;
        let mut h = red.expect("minimal basis element cannot vanish");
        h.normalize();
        kept.push(h);
    }
    kept.sort_by(|a, b| ord.cmp(a.lm(), b.lm()));
    Ok(kept)
}
