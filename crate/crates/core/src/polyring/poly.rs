//! Sparse multivariate polynomials with rational coefficients.

use super::monomial::{Monomial, MonomialOrder};
use super::registry::{same_registry, Var, VarRegistry};
use super::PolyError;
use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use std::cmp::Ordering;
use std::collections::HashMap;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::Arc;

/// A polynomial over ℚ in the variables of a shared registry.
///
/// Terms are kept sorted in descending graded-reverse-lex order with no
/// zero coefficients; the zero polynomial has an empty term list. Values
/// are immutable after construction and safe to share across threads.
#[derive(Debug, Clone)]
pub struct Poly {
    reg: Arc<VarRegistry>,
    terms: Vec<(Monomial, BigRational)>,
}

impl PartialEq for Poly {
    fn eq(&self, other: &Self) -> bool {
        same_registry(&self.reg, &other.reg) && self.terms == other.terms
    }
}
impl Eq for Poly {}

impl Poly {
    pub fn zero(reg: &Arc<VarRegistry>) -> Self {
        Poly {
            reg: reg.clone(),
            terms: Vec::new(),
        }
    }

    pub fn constant(reg: &Arc<VarRegistry>, c: BigRational) -> Self {
        if c.is_zero() {
            return Poly::zero(reg);
        }
        Poly {
            reg: reg.clone(),
            terms: vec![(Monomial::one(reg.len()), c)],
        }
    }

    pub fn int(reg: &Arc<VarRegistry>, c: i64) -> Self {
        Poly::constant(reg, BigRational::from_integer(c.into()))
    }

    pub fn one(reg: &Arc<VarRegistry>) -> Self {
        Poly::int(reg, 1)
    }

    pub fn var(reg: &Arc<VarRegistry>, v: Var) -> Self {
        Poly {
            reg: reg.clone(),
            terms: vec![(Monomial::var(reg.len(), v, 1), BigRational::one())],
        }
    }

    pub fn var_pow(reg: &Arc<VarRegistry>, v: Var, e: u16) -> Self {
        if e == 0 {
            return Poly::one(reg);
        }
        Poly {
            reg: reg.clone(),
            terms: vec![(Monomial::var(reg.len(), v, e), BigRational::one())],
        }
    }

    pub fn monomial(reg: &Arc<VarRegistry>, m: Monomial, c: BigRational) -> Self {
        debug_assert_eq!(m.nvars(), reg.len());
        if c.is_zero() {
            return Poly::zero(reg);
        }
        Poly {
            reg: reg.clone(),
            terms: vec![(m, c)],
        }
    }

    /// Build from unsorted `(monomial, coefficient)` pairs, combining
    /// duplicates and dropping zeros.
    pub fn from_terms(reg: &Arc<VarRegistry>, terms: Vec<(Monomial, BigRational)>) -> Self {
        let mut terms = terms;
        let o = MonomialOrder::GrevLex;
        terms.sort_by(|a, b| o.cmp(&b.0, &a.0));
        let mut out: Vec<(Monomial, BigRational)> = Vec::with_capacity(terms.len());
        for (m, c) in terms {
            if let Some(last) = out.last_mut() {
                if last.0 == m {
                    last.1 += c;
                    if last.1.is_zero() {
                        out.pop();
                    }
                    continue;
                }
            }
            if !c.is_zero() {
                out.push((m, c));
            }
        }
        Poly {
            reg: reg.clone(),
            terms: out,
        }
    }

    pub fn registry(&self) -> &Arc<VarRegistry> {
        &self.reg
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.terms.len() <= 1 && self.terms.iter().all(|(m, _)| m.is_one())
    }

    pub fn is_one(&self) -> bool {
        self.terms.len() == 1 && self.terms[0].0.is_one() && self.terms[0].1.is_one()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    /// Terms in descending graded-reverse-lex order.
    pub fn terms(&self) -> &[(Monomial, BigRational)] {
        &self.terms
    }

    /// Leading term under the canonical (grevlex) order.
    pub fn leading(&self) -> Option<&(Monomial, BigRational)> {
        self.terms.first()
    }

    pub fn constant_value(&self) -> Option<&BigRational> {
        match self.terms.len() {
            0 => None,
            1 if self.terms[0].0.is_one() => Some(&self.terms[0].1),
            _ => None,
        }
    }

    pub fn coeff_of(&self, m: &Monomial) -> BigRational {
        self.terms
            .iter()
            .find(|(mm, _)| mm == m)
            .map(|(_, c)| c.clone())
            .unwrap_or_else(BigRational::zero)
    }

    fn check_reg(&self, other: &Poly) -> Result<(), PolyError> {
        if same_registry(&self.reg, &other.reg) {
            Ok(())
        } else {
            Err(PolyError::RegistryMismatch)
        }
    }

    fn merge(&self, other: &Poly, negate: bool) -> Poly {
        let o = MonomialOrder::GrevLex;
        let mut out = Vec::with_capacity(self.terms.len() + other.terms.len());
        let (mut i, mut j) = (0, 0);
        while i < self.terms.len() && j < other.terms.len() {
            match o.cmp(&self.terms[i].0, &other.terms[j].0) {
                Ordering::Greater => {
                    out.push(self.terms[i].clone());
                    i += 1;
                }
                Ordering::Less => {
                    let (m, c) = &other.terms[j];
                    out.push((m.clone(), if negate { -c.clone() } else { c.clone() }));
                    j += 1;
                }
                Ordering::Equal => {
                    let c = if negate {
                        &self.terms[i].1 - &other.terms[j].1
                    } else {
                        &self.terms[i].1 + &other.terms[j].1
                    };
                    if !c.is_zero() {
                        out.push((self.terms[i].0.clone(), c));
                    }
                    i += 1;
                    j += 1;
                }
            }
        }
        out.extend_from_slice(&self.terms[i..]);
        for (m, c) in &other.terms[j..] {
            out.push((m.clone(), if negate { -c.clone() } else { c.clone() }));
        }
        Poly {
            reg: self.reg.clone(),
            terms: out,
        }
    }

    pub fn try_add(&self, other: &Poly) -> Result<Poly, PolyError> {
        self.check_reg(other)?;
        Ok(self.merge(other, false))
    }

    pub fn try_sub(&self, other: &Poly) -> Result<Poly, PolyError> {
        self.check_reg(other)?;
        Ok(self.merge(other, true))
    }

    pub fn try_mul(&self, other: &Poly) -> Result<Poly, PolyError> {
        self.check_reg(other)?;
        if self.is_zero() || other.is_zero() {
            return Ok(Poly::zero(&self.reg));
        }
        let mut acc: HashMap<Monomial, BigRational> =
            HashMap::with_capacity(self.terms.len() * other.terms.len());
        for (ma, ca) in &self.terms {
            for (mb, cb) in &other.terms {
                let m = ma.mul(mb);
                let c = ca * cb;
                match acc.entry(m) {
                    std::collections::hash_map::Entry::Occupied(mut e) => {
                        *e.get_mut() += c;
                        if e.get().is_zero() {
                            e.remove();
                        }
                    }
                    std::collections::hash_map::Entry::Vacant(e) => {
                        e.insert(c);
                    }
                }
            }
        }
        Ok(Poly::from_terms(&self.reg, acc.into_iter().collect()))
    }

    pub fn pow(&self, k: u32) -> Poly {
        let mut acc = Poly::one(&self.reg);
        for _ in 0..k {
            acc = acc.try_mul(self).expect("same registry");
        }
        acc
    }

    pub fn scale(&self, c: &BigRational) -> Poly {
        if c.is_zero() {
            return Poly::zero(&self.reg);
        }
        Poly {
            reg: self.reg.clone(),
            terms: self.terms.iter().map(|(m, a)| (m.clone(), a * c)).collect(),
        }
    }

    pub fn mul_monomial(&self, m: &Monomial, c: &BigRational) -> Poly {
        if c.is_zero() {
            return Poly::zero(&self.reg);
        }
        Poly {
            reg: self.reg.clone(),
            terms: self
                .terms
                .iter()
                .map(|(mm, a)| (mm.mul(m), a * c))
                .collect(),
        }
    }

    /// Total degree and per-variable degrees. Errors on the zero polynomial,
    /// whose degree is undefined.
    pub fn degrees(&self) -> Result<(u32, HashMap<Var, u32>), PolyError> {
        if self.is_zero() {
            return Err(PolyError::ZeroPolynomial);
        }
        let mut total = 0;
        let mut per: HashMap<Var, u32> = HashMap::new();
        for (m, _) in &self.terms {
            total = total.max(m.total_deg());
            for (v, e) in m.powers() {
                let d = per.entry(v).or_insert(0);
                *d = (*d).max(e as u32);
            }
        }
        Ok((total, per))
    }

    pub fn total_degree(&self) -> u32 {
        self.terms
            .iter()
            .map(|(m, _)| m.total_deg())
            .max()
            .unwrap_or(0)
    }

    pub fn degree_in(&self, v: Var) -> u32 {
        self.terms
            .iter()
            .map(|(m, _)| m.exp(v) as u32)
            .max()
            .unwrap_or(0)
    }

    /// All terms share one total degree.
    pub fn is_homogeneous(&self) -> bool {
        match self.terms.first() {
            None => true,
            Some((m0, _)) => {
                let d = m0.total_deg();
                self.terms.iter().all(|(m, _)| m.total_deg() == d)
            }
        }
    }

    /// Homogeneous in a subset of the variables: total degree restricted to
    /// `vars` is the same across terms.
    pub fn is_homogeneous_on(&self, vars: &[Var]) -> bool {
        match self.terms.first() {
            None => true,
            Some((m0, _)) => {
                let d = m0.deg_on(vars);
                self.terms.iter().all(|(m, _)| m.deg_on(vars) == d)
            }
        }
    }

    /// Variables occurring with nonzero exponent.
    pub fn support_vars(&self) -> Vec<Var> {
        let mut present = vec![false; self.reg.len()];
        for (m, _) in &self.terms {
            for (v, _) in m.powers() {
                present[v.idx()] = true;
            }
        }
        present
            .iter()
            .enumerate()
            .filter(|(_, &p)| p)
            .map(|(i, _)| Var(i as u32))
            .collect()
    }

    /// Simultaneous substitution of polynomials for variables; unbound
    /// variables are left unchanged.
    pub fn substitute(&self, bindings: &HashMap<Var, Poly>) -> Result<Poly, PolyError> {
        for p in bindings.values() {
            self.check_reg(p)?;
        }
        let mut pow_cache: HashMap<(Var, u16), Poly> = HashMap::new();
        let mut acc = Poly::zero(&self.reg);
        for (m, c) in &self.terms {
            let mut term = Poly::constant(&self.reg, c.clone());
            let mut plain = Monomial::one(self.reg.len());
            for (v, e) in m.powers() {
                if bindings.contains_key(&v) {
                    let key = (v, e);
                    if !pow_cache.contains_key(&key) {
                        let p = bindings[&v].pow(e as u32);
                        pow_cache.insert(key.clone(), p);
                    }
                    term = term.try_mul(&pow_cache[&key])?;
                } else {
                    plain = plain.mul_var(v, e);
                }
            }
            if !plain.is_one() {
                term = term.mul_monomial(&plain, &BigRational::one());
            }
            acc = acc.try_add(&term)?;
        }
        Ok(acc)
    }

    /// Exact evaluation; every variable occurring in the polynomial must be
    /// bound.
    pub fn evaluate(&self, point: &HashMap<Var, BigRational>) -> Result<BigRational, PolyError> {
        let mut acc = BigRational::zero();
        let mut pow_cache: HashMap<(Var, u16), BigRational> = HashMap::new();
        for (m, c) in &self.terms {
            let mut val = c.clone();
            for (v, e) in m.powers() {
                let x = point
                    .get(&v)
                    .ok_or_else(|| PolyError::UnboundVariable(self.reg.name(v).to_string()))?;
                let p = pow_cache
                    .entry((v, e))
                    .or_insert_with(|| num_traits::pow::pow(x.clone(), e as usize));
                val *= &*p;
            }
            acc += val;
        }
        Ok(acc)
    }

    pub fn derivative(&self, v: Var) -> Poly {
        let mut terms = Vec::new();
        for (m, c) in &self.terms {
            let e = m.exp(v);
            if e > 0 {
                let mut exps = m.exps().to_vec();
                exps[v.idx()] = e - 1;
                terms.push((
                    Monomial::from_exps(&exps),
                    c * BigRational::from_integer(BigInt::from(e)),
                ));
            }
        }
        Poly::from_terms(&self.reg, terms)
    }

    /// Content-free integer form with positive leading coefficient under
    /// grevlex: the canonical representative of the scaling class.
    pub fn canonicalize(&self) -> Poly {
        if self.is_zero() {
            return self.clone();
        }
        let mut den = BigInt::one();
        for (_, c) in &self.terms {
            den = den.lcm(c.denom());
        }
        let mut num_gcd = BigInt::zero();
        let nums: Vec<BigInt> = self
            .terms
            .iter()
            .map(|(_, c)| c.numer() * (&den / c.denom()))
            .collect();
        for n in &nums {
            num_gcd = num_gcd.gcd(n);
            if num_gcd.is_one() {
                break;
            }
        }
        if nums[0].is_negative() {
            num_gcd = -num_gcd;
        }
        let terms = self
            .terms
            .iter()
            .zip(nums)
            .map(|((m, _), n)| (m.clone(), BigRational::from_integer(n / &num_gcd)))
            .collect();
        Poly {
            reg: self.reg.clone(),
            terms,
        }
    }

    /// Monic under grevlex.
    pub fn monic(&self) -> Poly {
        match self.leading() {
            None => self.clone(),
            Some((_, lc)) => {
                let inv = lc.recip();
                self.scale(&inv)
            }
        }
    }

    /// Exact division by a single divisor; returns `None` when not
    /// divisible. Single-divisor multivariate division leaves a zero
    /// remainder exactly when the dividend lies in the principal ideal.
    pub fn div_exact(&self, d: &Poly) -> Option<Poly> {
        if self.is_zero() {
            return Some(self.clone());
        }
        if d.is_zero() {
            return None;
        }
        let o = MonomialOrder::GrevLex;
        let (dm, dc) = d.leading().unwrap();
        let mut rem = self.clone();
        let mut quot: Vec<(Monomial, BigRational)> = Vec::new();
        while let Some((m, c)) = rem.leading() {
            if !dm.divides(m) {
                return None;
            }
            let qm = dm.div_into(m);
            let qc = c / dc;
            let sub = d.mul_monomial(&qm, &qc);
            quot.push((qm, qc));
            rem = rem.merge(&sub, true);
        }
        let _ = o;
        Some(Poly::from_terms(&self.reg, quot))
    }

    /// Move the polynomial to another registry via a name map. Every
    /// occurring variable must resolve in the target.
    pub fn transport(&self, target: &Arc<VarRegistry>) -> Result<Poly, PolyError> {
        let mut map: Vec<Option<Var>> = Vec::with_capacity(self.reg.len());
        for v in self.reg.vars() {
            map.push(target.var(self.reg.name(v)));
        }
        let mut terms = Vec::with_capacity(self.terms.len());
        for (m, c) in &self.terms {
            let mut exps = vec![0u16; target.len()];
            for (v, e) in m.powers() {
                let tv = map[v.idx()]
                    .ok_or_else(|| PolyError::UnknownVariable(self.reg.name(v).to_string()))?;
                exps[tv.idx()] = e;
            }
            terms.push((Monomial::from_exps(&exps), c.clone()));
        }
        Ok(Poly::from_terms(target, terms))
    }
}

impl Neg for &Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        Poly {
            reg: self.reg.clone(),
            terms: self
                .terms
                .iter()
                .map(|(m, c)| (m.clone(), -c.clone()))
                .collect(),
        }
    }
}

macro_rules! ring_op {
    ($trait:ident, $m:ident, $f:ident) => {
        impl $trait for &Poly {
            type Output = Poly;
            fn $m(self, rhs: &Poly) -> Poly {
                self.$f(rhs).expect("registry mismatch")
            }
        }
    };
}
ring_op!(Add, add, try_add);
ring_op!(Sub, sub, try_sub);
ring_op!(Mul, mul, try_mul);

#[cfg(test)]
mod tests {
    use super::*;
    use crate::polyring::parse_poly;

    fn reg4() -> Arc<VarRegistry> {
        VarRegistry::new(&[("u", &["u0", "u1", "u2", "u3"]), ("p", &["p0", "p1"])])
    }

    fn p(reg: &Arc<VarRegistry>, s: &str) -> Poly {
        parse_poly(reg, s).unwrap()
    }

    #[test]
    fn cancellation_and_binomial() {
        let reg = reg4();
        let a = p(&reg, "p0 + p1");
        let b = p(&reg, "-p1");
        assert_eq!(&a + &b, p(&reg, "p0"));
        assert_eq!(a.pow(2), p(&reg, "p0^2 + 2*p0*p1 + p1^2"));
        let f = p(&reg, "u0*p0^3 + u3");
        assert_eq!(f.try_mul(&Poly::one(&reg)).unwrap(), f);
    }

    #[test]
    fn registry_mismatch_detected() {
        let r1 = reg4();
        let r2 = reg4();
        let a = Poly::var(&r1, Var(0));
        let b = Poly::var(&r2, Var(0));
        assert!(matches!(a.try_add(&b), Err(PolyError::RegistryMismatch)));
    }

    #[test]
    fn substitute_examples() {
        let reg = reg4();
        // empty binding is the identity
        let f = p(&reg, "p0");
        assert_eq!(f.substitute(&HashMap::new()).unwrap(), f);
        // linear substitution expanded by hand: u0 -> p0 - 2*p1, u1 -> p0
        let f = p(&reg, "u0 + u1");
        let mut b = HashMap::new();
        b.insert(reg.var("u0").unwrap(), p(&reg, "p0 - 2*p1"));
        b.insert(reg.var("u1").unwrap(), p(&reg, "p0"));
        assert_eq!(f.substitute(&b).unwrap(), p(&reg, "2*p0 - 2*p1"));
    }

    #[test]
    fn degrees_and_zero() {
        let reg = reg4();
        let f = p(&reg, "p0");
        let (d, per) = f.degrees().unwrap();
        assert_eq!(d, 1);
        assert_eq!(per[&reg.var("p0").unwrap()], 1);
        assert!(Poly::zero(&reg).degrees().is_err());
    }

    #[test]
    fn evaluate_examples() {
        let reg = reg4();
        let f = p(&reg, "u0*u1*u2*u3");
        let pt: HashMap<Var, BigRational> = ["u0", "u1", "u2", "u3"]
            .iter()
            .zip(1i64..)
            .map(|(n, v)| (reg.var(n).unwrap(), BigRational::from_integer(v.into())))
            .collect();
        assert_eq!(f.evaluate(&pt).unwrap(), BigRational::from_integer(24.into()));
        // all-zeros point gives the constant term
        let g = p(&reg, "u0^2 + 7");
        let zero: HashMap<Var, BigRational> = reg
            .vars()
            .map(|v| (v, BigRational::zero()))
            .collect();
        assert_eq!(g.evaluate(&zero).unwrap(), BigRational::from_integer(7.into()));
    }

    #[test]
    fn canonicalize_scaling_class() {
        let reg = reg4();
        let f = p(&reg, "2*u0^2 - 4*u1");
        let g = p(&reg, "-3*u0^2 + 6*u1");
        assert_eq!(f.canonicalize(), g.canonicalize());
        assert_eq!(f.canonicalize(), p(&reg, "u0^2 - 2*u1"));
        let h = p(&reg, "1/2*u0 + 1/3");
        assert_eq!(h.canonicalize(), p(&reg, "3*u0 + 2"));
    }

    #[test]
    fn transport_between_registries() {
        let reg = reg4();
        let small = VarRegistry::flat(&["p0", "p1"]);
        let f = p(&reg, "p0^2 - p1");
        let g = f.transport(&small).unwrap();
        assert_eq!(g, parse_poly(&small, "p0^2 - p1").unwrap());
        assert!(p(&reg, "u0").transport(&small).is_err());
    }
}
