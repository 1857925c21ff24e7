//! Dense univariate polynomials over ℚ: Euclidean arithmetic, gcd by
//! primitive remainder sequences, squarefree machinery and Sturm chains.

use super::poly::Poly;
use super::registry::{Var, VarRegistry};
use super::PolyError;
use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use std::sync::Arc;

/// Coefficients in ascending degree order; no trailing zeros, zero is the
/// empty vector.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct UniPoly {
    pub coeffs: Vec<BigRational>,
}

impl UniPoly {
    pub fn new(mut coeffs: Vec<BigRational>) -> Self {
        while coeffs.last().map_or(false, |c| c.is_zero()) {
            coeffs.pop();
        }
        UniPoly { coeffs }
    }

    pub fn zero() -> Self {
        UniPoly { coeffs: vec![] }
    }

    pub fn one() -> Self {
        UniPoly {
            coeffs: vec![BigRational::one()],
        }
    }

    pub fn from_ints(c: &[i64]) -> Self {
        UniPoly::new(
            c.iter()
                .map(|&x| BigRational::from_integer(x.into()))
                .collect(),
        )
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree; zero polynomial reports 0 alongside `is_zero`.
    pub fn degree(&self) -> usize {
        self.coeffs.len().saturating_sub(1)
    }

    pub fn leading(&self) -> BigRational {
        self.coeffs.last().cloned().unwrap_or_else(BigRational::zero)
    }

    pub fn coeff(&self, k: usize) -> BigRational {
        self.coeffs.get(k).cloned().unwrap_or_else(BigRational::zero)
    }

    pub fn monic(&self) -> UniPoly {
        if self.is_zero() {
            return self.clone();
        }
        let lc = self.leading();
        UniPoly::new(self.coeffs.iter().map(|c| c / &lc).collect())
    }

    pub fn add(&self, o: &UniPoly) -> UniPoly {
        let n = self.coeffs.len().max(o.coeffs.len());
        UniPoly::new((0..n).map(|i| self.coeff(i) + o.coeff(i)).collect())
    }

    pub fn sub(&self, o: &UniPoly) -> UniPoly {
        let n = self.coeffs.len().max(o.coeffs.len());
        UniPoly::new((0..n).map(|i| self.coeff(i) - o.coeff(i)).collect())
    }

    pub fn neg(&self) -> UniPoly {
        UniPoly {
            coeffs: self.coeffs.iter().map(|c| -c.clone()).collect(),
        }
    }

    pub fn mul(&self, o: &UniPoly) -> UniPoly {
        if self.is_zero() || o.is_zero() {
            return UniPoly::zero();
        }
        let mut out = vec![BigRational::zero(); self.coeffs.len() + o.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in o.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        UniPoly::new(out)
    }

    pub fn scale(&self, c: &BigRational) -> UniPoly {
        UniPoly::new(self.coeffs.iter().map(|a| a * c).collect())
    }

    /// Euclidean division; divisor must be nonzero.
    pub fn div_rem(&self, d: &UniPoly) -> (UniPoly, UniPoly) {
        assert!(!d.is_zero(), "division by zero polynomial");
        let mut rem = self.coeffs.clone();
        let dd = d.degree();
        if self.is_zero() || self.degree() < dd {
            return (UniPoly::zero(), self.clone());
        }
        let mut quot = vec![BigRational::zero(); self.degree() - dd + 1];
        let lc = d.leading();
        for k in (dd..rem.len()).rev() {
            if rem[k].is_zero() {
                continue;
            }
            let q = &rem[k] / &lc;
            quot[k - dd] = q.clone();
            rem[k] = BigRational::zero();
            for (j, c) in d.coeffs.iter().enumerate().take(dd) {
                rem[k - dd + j] -= &q * c;
            }
        }
        (UniPoly::new(quot), UniPoly::new(rem))
    }

    pub fn rem(&self, d: &UniPoly) -> UniPoly {
        self.div_rem(d).1
    }

    /// Exact division; panics if not divisible (internal use).
    pub fn div_exact(&self, d: &UniPoly) -> UniPoly {
        let (q, r) = self.div_rem(d);
        assert!(r.is_zero(), "inexact univariate division");
        q
    }

    pub fn derivative(&self) -> UniPoly {
        if self.coeffs.len() <= 1 {
            return UniPoly::zero();
        }
        UniPoly::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, c)| c * BigRational::from_integer(BigInt::from(i)))
                .collect(),
        )
    }

    pub fn eval(&self, x: &BigRational) -> BigRational {
        let mut acc = BigRational::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * x + c;
        }
        acc
    }

    pub fn sign_at(&self, x: &BigRational) -> i32 {
        let v = self.eval(x);
        if v.is_zero() {
            0
        } else if v.is_positive() {
            1
        } else {
            -1
        }
    }

    /// Integer-primitive form with positive leading coefficient; the scale
    /// factor is dropped.
    pub fn primitive(&self) -> UniPoly {
        if self.is_zero() {
            return self.clone();
        }
        let mut den = BigInt::one();
        for c in &self.coeffs {
            den = den.lcm(c.denom());
        }
        let ints: Vec<BigInt> = self.coeffs.iter().map(|c| c.numer() * (&den / c.denom())).collect();
        let mut g = BigInt::zero();
        for n in &ints {
            g = g.gcd(n);
            if g.is_one() {
                break;
            }
        }
        if ints.last().unwrap().is_negative() {
            g = -g;
        }
        UniPoly::new(
            ints.into_iter()
                .map(|n| BigRational::from_integer(n / &g))
                .collect(),
        )
    }

    /// Gcd, normalized primitive with positive leading coefficient.
    pub fn gcd(&self, other: &UniPoly) -> UniPoly {
        let mut a = self.primitive();
        let mut b = other.primitive();
        if a.is_zero() {
            return b;
        }
        if b.is_zero() {
            return a;
        }
        if a.degree() < b.degree() {
            std::mem::swap(&mut a, &mut b);
        }
        while !b.is_zero() {
            // primitive PRS keeps coefficient growth in check
            let r = a.rem(&b).primitive();
            a = b;
            b = r;
        }
        a.primitive()
    }

    /// `f / gcd(f, f')`, primitive with positive leading coefficient.
    pub fn squarefree_part(&self) -> Result<UniPoly, PolyError> {
        if self.is_zero() {
            return Err(PolyError::ZeroPolynomial);
        }
        if self.degree() == 0 {
            return Ok(UniPoly::one());
        }
        let g = self.gcd(&self.derivative());
        Ok(self.div_exact(&g).primitive())
    }

    /// Yun's squarefree decomposition: pairwise-coprime squarefree factors
    /// with multiplicities whose weighted product is `self` up to a
    /// rational unit.
    pub fn squarefree_factorization(&self) -> Result<Vec<(UniPoly, u32)>, PolyError> {
        if self.is_zero() {
            return Err(PolyError::ZeroPolynomial);
        }
        let f = self.primitive();
        if f.degree() == 0 {
            return Ok(vec![]);
        }
        let fp = f.derivative();
        let a0 = f.gcd(&fp);
        let mut b = f.div_exact(&a0);
        let mut c = fp.div_exact(&a0);
        let mut d = c.sub(&b.derivative());
        let mut out = Vec::new();
        let mut i = 1u32;
        loop {
            let a = b.gcd(&d);
            if a.degree() > 0 {
                out.push((a.primitive(), i));
            }
            b = b.div_exact(&a);
            if b.degree() == 0 {
                break;
            }
            c = d.div_exact(&a);
            d = c.sub(&b.derivative());
            i += 1;
        }
        Ok(out)
    }

    /// Rational roots via the rational-root theorem (requires nonzero input).
    pub fn rational_roots(&self) -> Vec<BigRational> {
        let f = self.primitive();
        if f.is_zero() || f.degree() == 0 {
            return vec![];
        }
        // strip x^k first
        let mut shift = 0;
        while f.coeffs[shift].is_zero() {
            shift += 1;
        }
        let mut roots = Vec::new();
        if shift > 0 {
            roots.push(BigRational::zero());
        }
        let body = UniPoly::new(f.coeffs[shift..].to_vec());
        if body.degree() == 0 {
            return roots;
        }
        let a0 = body.coeffs[0].numer().abs();
        let an = body.leading().numer().abs();
        for p in divisors(&a0) {
            for q in divisors(&an) {
                for sign in [1i64, -1] {
                    let cand = BigRational::new(&p * BigInt::from(sign), q.clone());
                    if body.eval(&cand).is_zero() && !roots.contains(&cand) {
                        roots.push(cand);
                    }
                }
            }
        }
        roots.sort();
        roots
    }

    /// Sturm chain of the squarefree part (signs preserved: only positive
    /// scalars are stripped).
    pub fn sturm_chain(&self) -> Vec<UniPoly> {
        let mut chain = vec![self.clone(), self.derivative()];
        loop {
            let n = chain.len();
            if chain[n - 1].is_zero() {
                chain.pop();
                return chain;
            }
            let r = chain[n - 2].rem(&chain[n - 1]);
            if r.is_zero() {
                return chain;
            }
            chain.push(positive_primitive(&r.neg()));
        }
    }

    /// Cauchy root bound: all real roots lie in (-M, M).
    pub fn root_bound(&self) -> BigRational {
        if self.is_zero() || self.degree() == 0 {
            return BigRational::one();
        }
        let lc = self.leading().abs();
        let mut m = BigRational::zero();
        for c in &self.coeffs[..self.coeffs.len() - 1] {
            let r = c.abs() / &lc;
            if r > m {
                m = r;
            }
        }
        m + BigRational::one()
    }

    /// Promote to a sparse multivariate polynomial in variable `v`.
    pub fn to_poly(&self, reg: &Arc<VarRegistry>, v: Var) -> Poly {
        let mut acc = Poly::zero(reg);
        for (k, c) in self.coeffs.iter().enumerate() {
            if !c.is_zero() {
                let m = Poly::monomial(
                    reg,
                    super::monomial::Monomial::var(reg.len(), v, k as u16),
                    c.clone(),
                );
                acc = &acc + &m;
            }
        }
        acc
    }
}

/// Positive-scalar-primitive form: divides by positive integer content only,
/// keeping the sign. Sturm chains need sign preservation.
fn positive_primitive(f: &UniPoly) -> UniPoly {
    if f.is_zero() {
        return f.clone();
    }
    let mut den = BigInt::one();
    for c in &f.coeffs {
        den = den.lcm(c.denom());
    }
    let ints: Vec<BigInt> = f.coeffs.iter().map(|c| c.numer() * (&den / c.denom())).collect();
    let mut g = BigInt::zero();
    for n in &ints {
        g = g.gcd(n);
        if g.is_one() {
            break;
        }
    }
    UniPoly::new(
        ints.into_iter()
            .map(|n| BigRational::from_integer(n / &g))
            .collect(),
    )
}

fn divisors(n: &BigInt) -> Vec<BigInt> {
    // small desk-scale constants only: trial division
    let mut out = vec![BigInt::one()];
    let mut m = n.abs();
    let mut p = BigInt::from(2);
    while &p * &p <= m {
        if (&m % &p).is_zero() {
            let mut pe = Vec::new();
            while (&m % &p).is_zero() {
                m /= &p;
                pe.push(p.clone());
            }
            let mut next = Vec::new();
            for d in &out {
                let mut acc = d.clone();
                next.push(acc.clone());
                for q in &pe {
                    acc = &acc * q;
                    next.push(acc.clone());
                }
            }
            out = next;
        }
        p += 1;
    }
    if m > BigInt::one() {
        let mut next = Vec::new();
        for d in &out {
            next.push(d.clone());
            next.push(d * &m);
        }
        out = next;
    }
    out.sort();
    out.dedup();
    out
}

/// View a sparse polynomial as univariate in `v`; fails if any other
/// variable occurs.
pub fn as_univariate(f: &Poly, v: Var) -> Result<UniPoly, PolyError> {
    let mut coeffs = vec![BigRational::zero(); f.degree_in(v) as usize + 1];
    for (m, c) in f.terms() {
        let e = m.exp(v);
        if m.total_deg() != e as u32 {
            return Err(PolyError::NotUnivariate("as_univariate"));
        }
        coeffs[e as usize] = c.clone();
    }
    Ok(UniPoly::new(coeffs))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn squarefree_examples() {
        // (x-1)^2 (x+2) -> (x-1)(x+2)
        let f = UniPoly::from_ints(&[-1, 1]).mul(&UniPoly::from_ints(&[-1, 1])).mul(&UniPoly::from_ints(&[2, 1]));
        assert_eq!(
            f.squarefree_part().unwrap(),
            UniPoly::from_ints(&[-1, 1]).mul(&UniPoly::from_ints(&[2, 1])).primitive()
        );
        // idempotence on a squarefree input
        let g = UniPoly::from_ints(&[2, 0, 1]);
        assert_eq!(g.squarefree_part().unwrap(), g);
        // x^4 - 2x^2 + 1 -> x^2 - 1 (gcd with derivative by Euclid)
        let h = UniPoly::from_ints(&[1, 0, -2, 0, 1]);
        assert_eq!(h.squarefree_part().unwrap(), UniPoly::from_ints(&[-1, 0, 1]));
    }

    #[test]
    fn yun_decomposition() {
        let x_minus_1 = UniPoly::from_ints(&[-1, 1]);
        let x_plus_2 = UniPoly::from_ints(&[2, 1]);
        let f = x_minus_1.mul(&x_minus_1).mul(&x_plus_2);
        let fac = f.squarefree_factorization().unwrap();
        assert_eq!(fac, vec![(x_plus_2.clone(), 1), (x_minus_1.clone(), 2)]);
        // x^6 -> [(x, 6)]
        let x6 = UniPoly::new({
            let mut v = vec![BigRational::zero(); 7];
            v[6] = BigRational::one();
            v
        });
        assert_eq!(
            x6.squarefree_factorization().unwrap(),
            vec![(UniPoly::from_ints(&[0, 1]), 6)]
        );
        // irreducible stays put with multiplicity 1
        let q = UniPoly::from_ints(&[1, 0, 0, 0, 1]);
        assert_eq!(q.squarefree_factorization().unwrap(), vec![(q.clone(), 1)]);
    }

    #[test]
    fn gcd_divides_exactly() {
        let a = UniPoly::from_ints(&[-2, 1]).mul(&UniPoly::from_ints(&[3, 2, 1]));
        let b = UniPoly::from_ints(&[-2, 1]).mul(&UniPoly::from_ints(&[5, 1]));
        let g = a.gcd(&b);
        assert_eq!(g, UniPoly::from_ints(&[-2, 1]));
        assert!(a.rem(&g).is_zero());
        assert!(b.rem(&g).is_zero());
    }

    #[test]
    fn rational_roots_found() {
        // (2x-3)(x+5)(x^2+1)
        let f = UniPoly::from_ints(&[-3, 2]).mul(&UniPoly::from_ints(&[5, 1])).mul(&UniPoly::from_ints(&[1, 0, 1]));
        let roots = f.rational_roots();
        assert_eq!(
            roots,
            vec![
                BigRational::from_integer((-5).into()),
                BigRational::new(3.into(), 2.into())
            ]
        );
    }
}
