//! Multivariate gcd by primitive remainder sequences, plus the squarefree
//! part derived from it. Desk-scale inputs only; no modular tricks.

use super::poly::Poly;
use super::registry::Var;
use super::resultant::{prem, XPoly};

/// Gcd of two polynomials, canonical (content-free, positive leading
/// coefficient). `gcd(0, g) = canonical g`.
pub fn poly_gcd(f: &Poly, g: &Poly) -> Poly {
    let reg = f.registry().clone();
    if f.is_zero() {
        return g.canonicalize();
    }
    if g.is_zero() {
        return f.canonicalize();
    }
    if f.is_constant() || g.is_constant() {
        return Poly::one(&reg);
    }
    // main variable: highest-index variable occurring in either
    let vf = f.support_vars();
    let vg = g.support_vars();
    let x = *vf.iter().chain(vg.iter()).max().unwrap();
    let f_has = vf.contains(&x);
    let g_has = vg.contains(&x);
    if f_has && !g_has {
        let (cf, _) = content_pp(f, x);
        return poly_gcd(&cf, g);
    }
    if g_has && !f_has {
        let (cg, _) = content_pp(g, x);
        return poly_gcd(f, &cg);
    }
    let (cf, pf) = content_pp(f, x);
    let (cg, pg) = content_pp(g, x);
    let c = poly_gcd(&cf, &cg);

    let mut a = XPoly::decompose(&pf, x);
    let mut b = XPoly::decompose(&pg, x);
    if a.deg() < b.deg() {
        std::mem::swap(&mut a, &mut b);
    }
    let pp_gcd = loop {
        let r = prem(&a, &b);
        if r.is_zero() {
            break primitive_wrt(&b, x);
        }
        if r.deg() == 0 {
            break Poly::one(&reg);
        }
        a = b;
        b = XPoly::decompose(&primitive_wrt(&r, x), x);
    };
    c.try_mul(&pp_gcd).expect("same registry").canonicalize()
}

/// Content (gcd of the coefficients with respect to `x`) and primitive part.
fn content_pp(f: &Poly, x: Var) -> (Poly, Poly) {
    let xp = XPoly::decompose(f, x);
    let mut c = Poly::zero(f.registry());
    for coeff in &xp.coeffs {
        if !coeff.is_zero() {
            c = poly_gcd(&c, coeff);
            if c.is_one() {
                break;
            }
        }
    }
    let pp = f.div_exact(&c).expect("content divides");
    (c, pp)
}

fn primitive_wrt(f: &XPoly, x: Var) -> Poly {
    let p = f.recompose(x);
    let (_, pp) = content_pp(&p, x);
    pp.canonicalize()
}

/// Squarefree part: `f` divided by the gcd of `f` with all its partial
/// derivatives, canonical.
pub fn squarefree_part_multi(f: &Poly) -> Poly {
    if f.is_zero() || f.is_constant() {
        return f.canonicalize();
    }
    let mut g = f.canonicalize();
    for v in f.support_vars() {
        let d = f.derivative(v);
        if d.is_zero() {
            continue;
        }
        g = poly_gcd(&g, &d);
        if g.is_one() {
            break;
        }
    }
    f.div_exact(&g).expect("gcd divides").canonicalize()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::polyring::{parse_poly, VarRegistry};
    use std::sync::Arc;

    fn r() -> Arc<VarRegistry> {
        VarRegistry::flat(&["x", "y", "z"])
    }

    fn p(reg: &Arc<VarRegistry>, s: &str) -> Poly {
        parse_poly(reg, s).unwrap()
    }

    #[test]
    fn gcd_of_products() {
        let reg = r();
        let a = p(&reg, "(x + y)*(x - z)^2");
        let b = p(&reg, "(x + y)*(y + z)");
        assert_eq!(poly_gcd(&a, &b), p(&reg, "x + y"));
        // coprime
        assert!(poly_gcd(&p(&reg, "x*y"), &p(&reg, "z")).is_one());
        // {x*y, x*z} -> x (codim-1 example oracle)
        assert_eq!(poly_gcd(&p(&reg, "x*y"), &p(&reg, "x*z")), p(&reg, "x"));
    }

    #[test]
    fn squarefree_multi() {
        let reg = r();
        let f = p(&reg, "(x + y)^2*(x - z)");
        let s = squarefree_part_multi(&f);
        let expected = p(&reg, "(x + y)*(x - z)").canonicalize();
        assert_eq!(s, expected);
    }
}
