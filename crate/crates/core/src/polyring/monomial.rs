//! Monomials and monomial orders.

use super::registry::Var;
use smallvec::SmallVec;
use std::cmp::Ordering;
use std::sync::Arc;

type Exps = SmallVec<[u16; 16]>;

/// A power product, stored as a dense exponent vector over the registry
/// with the total degree cached.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Monomial {
    exps: Exps,
    deg: u32,
}

impl Monomial {
    pub fn one(nvars: usize) -> Self {
        Monomial {
            exps: smallvec::smallvec![0; nvars],
            deg: 0,
        }
    }

    pub fn var(nvars: usize, v: Var, e: u16) -> Self {
        let mut m = Monomial::one(nvars);
        m.exps[v.idx()] = e;
        m.deg = e as u32;
        m
    }

    pub fn from_exps(exps: &[u16]) -> Self {
        let deg = exps.iter().map(|&e| e as u32).sum();
        Monomial {
            exps: SmallVec::from_slice(exps),
            deg,
        }
    }

    #[inline]
    pub fn nvars(&self) -> usize {
        self.exps.len()
    }

    #[inline]
    pub fn total_deg(&self) -> u32 {
        self.deg
    }

    #[inline]
    pub fn exp(&self, v: Var) -> u16 {
        self.exps[v.idx()]
    }

    #[inline]
    pub fn is_one(&self) -> bool {
        self.deg == 0
    }

    pub fn exps(&self) -> &[u16] {
        &self.exps
    }

    /// Iterator over `(variable, exponent)` pairs with nonzero exponent.
    pub fn powers(&self) -> impl Iterator<Item = (Var, u16)> + '_ {
        self.exps
            .iter()
            .enumerate()
            .filter(|(_, &e)| e != 0)
            .map(|(i, &e)| (Var(i as u32), e))
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        debug_assert_eq!(self.nvars(), other.nvars());
        let exps: Exps = self
            .exps
            .iter()
            .zip(&other.exps)
            .map(|(&a, &b)| a.checked_add(b).expect("exponent overflow"))
            .collect();
        Monomial {
            exps,
            deg: self.deg + other.deg,
        }
    }

    pub fn mul_var(&self, v: Var, e: u16) -> Monomial {
        let mut m = self.clone();
        m.exps[v.idx()] = m.exps[v.idx()].checked_add(e).expect("exponent overflow");
        m.deg += e as u32;
        m
    }

    pub fn divides(&self, other: &Monomial) -> bool {
        self.deg <= other.deg && self.exps.iter().zip(&other.exps).all(|(&a, &b)| a <= b)
    }

    /// `other / self`, assuming divisibility.
    pub fn div_into(&self, other: &Monomial) -> Monomial {
        debug_assert!(self.divides(other));
        let exps: Exps = other.exps.iter().zip(&self.exps).map(|(&b, &a)| b - a).collect();
        Monomial {
            exps,
            deg: other.deg - self.deg,
        }
    }

    pub fn lcm(&self, other: &Monomial) -> Monomial {
        let exps: Exps = self
            .exps
            .iter()
            .zip(&other.exps)
            .map(|(&a, &b)| a.max(b))
            .collect();
        let deg = exps.iter().map(|&e| e as u32).sum();
        Monomial { exps, deg }
    }

    pub fn coprime(&self, other: &Monomial) -> bool {
        self.exps.iter().zip(&other.exps).all(|(&a, &b)| a == 0 || b == 0)
    }

    /// Total degree restricted to a set of variables.
    pub fn deg_on(&self, vars: &[Var]) -> u32 {
        vars.iter().map(|v| self.exps[v.idx()] as u32).sum()
    }

    /// True when every variable with a nonzero exponent lies in `vars`.
    pub fn supported_on(&self, mask: &[bool]) -> bool {
        self.exps
            .iter()
            .enumerate()
            .all(|(i, &e)| e == 0 || mask[i])
    }
}

/// A total, multiplicative well-order on monomials.
#[derive(Debug, Clone)]
pub enum MonomialOrder {
    /// Graded reverse lexicographic; the default working order.
    GrevLex,
    /// Lexicographic with earlier registry variables larger.
    Lex,
    /// Block elimination order: the `front` variables dominate, graded
    /// reverse lex inside each block. A basis under this order intersected
    /// with the back block yields the elimination ideal.
    Block { front: Arc<Vec<bool>> },
}

impl MonomialOrder {
    pub fn block(nvars: usize, front_vars: &[Var]) -> Self {
        let mut mask = vec![false; nvars];
        for v in front_vars {
            mask[v.idx()] = true;
        }
        MonomialOrder::Block {
            front: Arc::new(mask),
        }
    }

    pub fn cmp(&self, a: &Monomial, b: &Monomial) -> Ordering {
        match self {
            MonomialOrder::GrevLex => grevlex(a.exps(), b.exps(), a.deg, b.deg),
            MonomialOrder::Lex => lex(a.exps(), b.exps()),
            MonomialOrder::Block { front } => {
                let (da, db) = (masked_deg(a, front, true), masked_deg(b, front, true));
                match grevlex_masked(a.exps(), b.exps(), front, true, da, db) {
                    Ordering::Equal => {
                        let (da, db) = (masked_deg(a, front, false), masked_deg(b, front, false));
                        grevlex_masked(a.exps(), b.exps(), front, false, da, db)
                    }
                    ord => ord,
                }
            }
        }
    }
}

#[inline]
fn lex(a: &[u16], b: &[u16]) -> Ordering {
    for (x, y) in a.iter().zip(b) {
        match x.cmp(y) {
            Ordering::Equal => {}
            ord => return ord,
        }
    }
    Ordering::Equal
}

#[inline]
fn grevlex(a: &[u16], b: &[u16], da: u32, db: u32) -> Ordering {
    match da.cmp(&db) {
        Ordering::Equal => {}
        ord => return ord,
    }
    // ties: the rightmost differing exponent decides, smaller exponent wins
    for (x, y) in a.iter().zip(b).rev() {
        match x.cmp(y) {
            Ordering::Equal => {}
            ord => return ord.reverse(),
        }
    }
    Ordering::Equal
}

#[inline]
fn masked_deg(m: &Monomial, mask: &[bool], front: bool) -> u32 {
    m.exps()
        .iter()
        .zip(mask)
        .filter(|(_, &f)| f == front)
        .map(|(&e, _)| e as u32)
        .sum()
}

#[inline]
fn grevlex_masked(a: &[u16], b: &[u16], mask: &[bool], front: bool, da: u32, db: u32) -> Ordering {
    match da.cmp(&db) {
        Ordering::Equal => {}
        ord => return ord,
    }
    for i in (0..a.len()).rev() {
        if mask[i] == front && a[i] != b[i] {
            return a[i].cmp(&b[i]).reverse();
        }
    }
    Ordering::Equal
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(e: &[u16]) -> Monomial {
        Monomial::from_exps(e)
    }

    #[test]
    fn grevlex_basics() {
        let o = MonomialOrder::GrevLex;
        // x^2 > xy > y^2 > x > y > 1 in two variables x, y
        let seq = [
            m(&[2, 0]),
            m(&[1, 1]),
            m(&[0, 2]),
            m(&[1, 0]),
            m(&[0, 1]),
            m(&[0, 0]),
        ];
        for w in seq.windows(2) {
            assert_eq!(o.cmp(&w[0], &w[1]), Ordering::Greater);
        }
        // grevlex separates xz vs y^2 by degree-then-rightmost rule: x z < y^2
        assert_eq!(
            MonomialOrder::GrevLex.cmp(&m(&[1, 0, 1]), &m(&[0, 2, 0])),
            Ordering::Less
        );
    }

    #[test]
    fn lex_and_block() {
        let o = MonomialOrder::Lex;
        assert_eq!(o.cmp(&m(&[1, 0]), &m(&[0, 5])), Ordering::Greater);
        // block: eliminate var0; any positive power of var0 beats var1^k
        let b = MonomialOrder::block(2, &[Var(0)]);
        assert_eq!(b.cmp(&m(&[1, 0]), &m(&[0, 9])), Ordering::Greater);
        assert_eq!(b.cmp(&m(&[0, 2]), &m(&[0, 1])), Ordering::Greater);
    }

    #[test]
    fn multiplicative() {
        let o = MonomialOrder::GrevLex;
        let (a, b, c) = (m(&[1, 2, 0]), m(&[0, 1, 2]), m(&[3, 0, 1]));
        let ord = o.cmp(&a, &b);
        assert_eq!(o.cmp(&a.mul(&c), &b.mul(&c)), ord);
    }
}
