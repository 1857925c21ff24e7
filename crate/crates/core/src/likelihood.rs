//! Statistical models, Lagrange likelihood systems, Jacobian determinants
//! and ML degrees.

use crate::budget::Budget;
use crate::groebner::{groebner_basis, GroebnerError, ZeroDimSystem};
use crate::polyring::{determinant, MonomialOrder, Poly, PolyError, Var, VarRegistry};
use num_rational::BigRational;
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use std::collections::HashMap;
use std::sync::{Arc, OnceLock};

#[derive(Debug, Clone, thiserror::Error)]
pub enum ModelError {
    #[error("model needs at least one invariant")]
    NoInvariants,
    #[error("invariant `{0}` is not homogeneous in the probability variables")]
    NotHomogeneous(String),
    #[error("codimension {0} out of range 1..={1}")]
    CodimOutOfRange(usize, usize),
    #[error("{0} general invariants given, codimension is {1}")]
    GeneralInvariantCount(usize, usize),
    #[error("generated variable name `{0}` collides with a declared one")]
    NameCollision(String),
    #[error(transparent)]
    Poly(#[from] PolyError),
    #[error(transparent)]
    Groebner(#[from] GroebnerError),
    #[error("ML degree probes kept disagreeing (genericity failure)")]
    GenericityFailure,
    #[error("specialized system is not zero-dimensional")]
    NotZeroDimensional,
}

/// An algebraic statistical model: probability variables, homogeneous
/// model invariants and a declared codimension.
#[derive(Debug, Clone)]
pub struct StatModel {
    pub reg: Arc<VarRegistry>,
    pub prob_vars: Vec<Var>,
    pub invariants: Vec<Poly>,
    pub general_invariants: Vec<Poly>,
    pub codim: usize,
}

/// Build a model over a fresh probability-variable registry.
///
/// `general` overrides the set of general invariants (defaults to the
/// first `codim` invariants). Each invariant must be homogeneous.
pub fn build_model(
    prob_var_names: &[&str],
    invariant_texts: &[&str],
    codim: usize,
    general_texts: Option<&[&str]>,
) -> Result<StatModel, ModelError> {
    let reg = VarRegistry::new(&[("p", prob_var_names)]);
    let parse = |texts: &[&str]| -> Result<Vec<Poly>, ModelError> {
        texts
            .iter()
            .map(|t| {
                crate::polyring::parse_poly(&reg, t)
                    .map_err(|e| ModelError::Poly(PolyError::Domain(e.to_string())))
            })
            .collect()
    };
    let invariants = parse(invariant_texts)?;
    let general = general_texts.map(parse).transpose()?;
    build_model_from_polys(reg, invariants, codim, general)
}

/// Model construction from already-parsed invariants.
pub fn build_model_from_polys(
    reg: Arc<VarRegistry>,
    invariants: Vec<Poly>,
    codim: usize,
    general: Option<Vec<Poly>>,
) -> Result<StatModel, ModelError> {
    if invariants.is_empty() {
        return Err(ModelError::NoInvariants);
    }
    for g in &invariants {
        if g.is_zero() || !g.is_homogeneous() {
            return Err(ModelError::NotHomogeneous(g.to_string()));
        }
    }
    if codim == 0 || codim > invariants.len() {
        return Err(ModelError::CodimOutOfRange(codim, invariants.len()));
    }
    let general_invariants = match general {
        None => invariants[..codim].to_vec(),
        Some(h) => {
            if h.len() != codim {
                return Err(ModelError::GeneralInvariantCount(h.len(), codim));
            }
            h
        }
    };
    let prob_vars = reg.vars().collect();
    Ok(StatModel {
        reg,
        prob_vars,
        invariants,
        general_invariants,
        codim,
    })
}

/// How the Jacobian determinant of a system is assembled.
#[derive(Debug, Clone)]
enum JacSpec {
    /// The (n+k+2)-square matrix of the Lagrange system: rows of
    /// likelihood-equation partials, the all-ones simplex row, and the
    /// general-invariant rows.
    Likelihood { n: usize, h: Vec<Poly> },
    /// Determinant of the Jacobian of the equations with respect to the
    /// unknowns (square raw systems, e.g. toy ideals).
    Raw,
}

/// A parametric polynomial system `F_0..F_m` with a Jacobian determinant:
/// the common input shape of every discriminant algorithm. Likelihood
/// systems are the main source; raw square systems (toy fixtures) also
/// qualify.
#[derive(Debug, Clone)]
pub struct PolySystem {
    pub reg: Arc<VarRegistry>,
    pub equations: Vec<Poly>,
    pub params: Vec<Var>,
    pub unknowns: Vec<Var>,
    /// Unknown of interest ("y_0"); eliminants and shape bases use it.
    pub primary: Var,
    /// Reserved auxiliary variable for restrictions to a line.
    pub line_var: Var,
    jac_spec: JacSpec,
    jac: OnceLock<Poly>,
}

impl PolySystem {
    /// Raw square system: as many equations as unknowns; `J` is the
    /// determinant of the Jacobian with respect to the unknowns.
    pub fn raw(
        reg: Arc<VarRegistry>,
        equations: Vec<Poly>,
        params: Vec<Var>,
        unknowns: Vec<Var>,
        line_var: Var,
    ) -> Result<PolySystem, ModelError> {
        if equations.len() != unknowns.len() {
            return Err(ModelError::Poly(PolyError::Domain(
                "raw system must be square to form a Jacobian".into(),
            )));
        }
        let primary = unknowns[0];
        Ok(PolySystem {
            reg,
            equations,
            params,
            unknowns,
            primary,
            line_var,
            jac_spec: JacSpec::Raw,
            jac: OnceLock::new(),
        })
    }

    /// The symbolic Jacobian determinant, computed on first use.
    pub fn jac_det(&self) -> Result<&Poly, ModelError> {
        if let Some(j) = self.jac.get() {
            return Ok(j);
        }
        let j = match &self.jac_spec {
            JacSpec::Raw => {
                let m: Vec<Vec<Poly>> = self
                    .equations
                    .iter()
                    .map(|f| self.unknowns.iter().map(|&v| f.derivative(v)).collect())
                    .collect();
                determinant(&m)?
            }
            JacSpec::Likelihood { n, h } => {
                let nn = *n;
                let mut rows: Vec<Vec<Poly>> = Vec::new();
                for f in &self.equations[..=nn] {
                    rows.push(self.unknowns.iter().map(|&v| f.derivative(v)).collect());
                }
                let ones: Vec<Poly> = self
                    .unknowns
                    .iter()
                    .enumerate()
                    .map(|(i, _)| {
                        if i <= nn {
                            Poly::one(&self.reg)
                        } else {
                            Poly::zero(&self.reg)
                        }
                    })
                    .collect();
                rows.push(ones);
                for hj in h {
                    rows.push(self.unknowns.iter().map(|&v| hj.derivative(v)).collect());
                }
                determinant(&rows)?
            }
        };
        let _ = self.jac.set(j);
        Ok(self.jac.get().unwrap())
    }

    /// Simultaneous substitution applied to every equation and to `J`.
    pub fn substituted(&self, bindings: &HashMap<Var, Poly>) -> Result<PolySystem, ModelError> {
        let equations = self
            .equations
            .iter()
            .map(|f| f.substitute(bindings))
            .collect::<Result<Vec<_>, _>>()?;
        let jac = self.jac_det()?.substitute(bindings)?;
        let cell = OnceLock::new();
        let _ = cell.set(jac);
        Ok(PolySystem {
            reg: self.reg.clone(),
            equations,
            params: self.params.clone(),
            unknowns: self.unknowns.clone(),
            primary: self.primary,
            line_var: self.line_var,
            jac_spec: self.jac_spec.clone(),
            jac: cell,
        })
    }

    /// Equations plus `J`, the generating set of every `D_{X,J}`
    /// elimination.
    pub fn gens_with_jac(&self) -> Result<Vec<Poly>, ModelError> {
        let mut gens = self.equations.clone();
        gens.push(self.jac_det()?.clone());
        Ok(gens)
    }
}

/// The Lagrange likelihood system of a model.
#[derive(Debug, Clone)]
pub struct LikelihoodSystem {
    pub model: StatModel,
    pub system: PolySystem,
    /// number of probability coordinates minus one
    pub n: usize,
    pub s: usize,
    pub k: usize,
    ml_degree: OnceLock<u32>,
}

/// Derive the parameter name for a probability variable.
fn u_name(p: &str) -> String {
    if let Some(rest) = p.strip_prefix('p') {
        if !rest.is_empty() {
            return format!("u{rest}");
        }
    }
    format!("u_{p}")
}

/// Build the equations of Definition-style Lagrange likelihood systems:
/// `F_i = p_i (lam_1 + sum_j dh_j/dp_i lam_{j+1}) - u_i` for each
/// probability coordinate, the model invariants, and the simplex equation.
pub fn build_lagrange_system(model: &StatModel) -> Result<LikelihoodSystem, ModelError> {
    let n = model.prob_vars.len() - 1;
    let s = model.invariants.len();
    let k = model.codim;
    let p_names: Vec<String> = model
        .prob_vars
        .iter()
        .map(|&v| model.reg.name(v).to_string())
        .collect();
    let u_names: Vec<String> = p_names.iter().map(|p| u_name(p)).collect();
    let lam_names: Vec<String> = (1..=k + 1).map(|i| format!("lam{i}")).collect();
    let mut all: Vec<&str> = Vec::new();
    all.extend(u_names.iter().map(|x| x.as_str()));
    all.extend(p_names.iter().map(|x| x.as_str()));
    all.extend(lam_names.iter().map(|x| x.as_str()));
    all.push("t");
    {
        let mut sorted = all.clone();
        sorted.sort();
        sorted.dedup();
        if sorted.len() != all.len() {
            return Err(ModelError::NameCollision("t/u/lam".into()));
        }
    }
    let reg = VarRegistry::new(&[
        ("u", &u_names.iter().map(|x| x.as_str()).collect::<Vec<_>>()[..]),
        ("p", &p_names.iter().map(|x| x.as_str()).collect::<Vec<_>>()[..]),
        ("lam", &lam_names.iter().map(|x| x.as_str()).collect::<Vec<_>>()[..]),
        ("aux", &["t"]),
    ]);
    let params: Vec<Var> = u_names.iter().map(|x| reg.var(x).unwrap()).collect();
    let pvars: Vec<Var> = p_names.iter().map(|x| reg.var(x).unwrap()).collect();
    let lams: Vec<Var> = lam_names.iter().map(|x| reg.var(x).unwrap()).collect();
    let line_var = reg.var("t").unwrap();

    let h: Vec<Poly> = model
        .general_invariants
        .iter()
        .map(|g| g.transport(&reg))
        .collect::<Result<Vec<_>, _>>()?;
    let g: Vec<Poly> = model
        .invariants
        .iter()
        .map(|gi| gi.transport(&reg))
        .collect::<Result<Vec<_>, _>>()?;

    let mut equations = Vec::with_capacity(n + s + 2);
    for (i, &pi) in pvars.iter().enumerate() {
        // lam_1 + sum_j dh_j/dp_i * lam_{j+1}
        let mut form = Poly::var(&reg, lams[0]);
        for (j, hj) in h.iter().enumerate() {
            let d = hj.derivative(pi);
            form = &form + &d.try_mul(&Poly::var(&reg, lams[j + 1]))?;
        }
        let f = &Poly::var(&reg, pi).try_mul(&form)? - &Poly::var(&reg, params[i]);
        equations.push(f);
    }
    equations.extend(g.iter().cloned());
    let mut simplex = Poly::int(&reg, -1);
    for &pi in &pvars {
        simplex = &simplex + &Poly::var(&reg, pi);
    }
    equations.push(simplex);

    let mut unknowns = pvars.clone();
    unknowns.extend(lams.iter().copied());
    let primary = unknowns[0];
    let system = PolySystem {
        reg,
        equations,
        params,
        unknowns,
        primary,
        line_var,
        jac_spec: JacSpec::Likelihood { n, h },
        jac: OnceLock::new(),
    };
    Ok(LikelihoodSystem {
        model: model.clone(),
        system,
        n,
        s,
        k,
        ml_degree: OnceLock::new(),
    })
}

/// The monomial `u_0 u_1 ... u_n` bounding the coordinate-hyperplane part
/// of the data-discriminant.
pub fn dx_p(sys: &LikelihoodSystem) -> Poly {
    let reg = &sys.system.reg;
    let mut acc = Poly::one(reg);
    for &u in &sys.system.params {
        acc = acc.try_mul(&Poly::var(reg, u)).expect("same registry");
    }
    acc
}

/// Nonzero random integer in the specialization pool [-999, 999].
pub fn draw_nonzero(rng: &mut ChaCha8Rng) -> i64 {
    loop {
        let v = rng.gen_range(-999i64..=999);
        if v != 0 {
            return v;
        }
    }
}

/// Degree of the squarefree eliminant of the primary unknown at one random
/// integer specialization of the parameters.
fn ml_probe(sys: &PolySystem, rng: &mut ChaCha8Rng, budget: &Budget) -> Result<u32, ModelError> {
    let mut bind = HashMap::new();
    for &u in &sys.params {
        bind.insert(u, Poly::int(&sys.reg, draw_nonzero(rng)));
    }
    let spec = sys.substituted(&bind)?;
    // move to an unknown-only registry so zero-dimensionality is visible
    let names: Vec<String> = sys
        .unknowns
        .iter()
        .map(|&v| sys.reg.name(v).to_string())
        .collect();
    let name_refs: Vec<&str> = names.iter().map(|s| s.as_str()).collect();
    let sub = VarRegistry::new(&[("y", &name_refs[..])]);
    let eqs: Vec<Poly> = spec
        .equations
        .iter()
        .map(|f| f.transport(&sub))
        .collect::<Result<Vec<_>, _>>()?;
    let gb = groebner_basis(&eqs, MonomialOrder::GrevLex, budget)?;
    let zd = ZeroDimSystem::new(&gb, budget).map_err(|e| match e {
        GroebnerError::NotZeroDimensional => ModelError::NotZeroDimensional,
        other => ModelError::Groebner(other),
    })?;
    let y0 = sub.var(sys.reg.name(sys.primary)).unwrap();
    let mp = zd.minimal_polynomial(y0)?;
    let sf = mp.squarefree_part().map_err(GroebnerError::Poly)?;
    Ok(sf.degree() as u32)
}

/// ML degree by double random specialization: two independent probes must
/// agree; disagreement is retried up to three times.
pub fn ml_degree(sys: &PolySystem, seed: u64, budget: &Budget) -> Result<u32, ModelError> {
    use rand::SeedableRng;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..3 {
        let a = ml_probe(sys, &mut rng, budget)?;
        let b = ml_probe(sys, &mut rng, budget)?;
        if a == b {
            return Ok(a);
        }
        log::debug!("ml_degree probes disagreed: {a} vs {b}; retrying");
    }
    Err(ModelError::GenericityFailure)
}

impl LikelihoodSystem {
    /// Cached ML degree.
    pub fn ml_degree(&self, seed: u64, budget: &Budget) -> Result<u32, ModelError> {
        if let Some(&n) = self.ml_degree.get() {
            return Ok(n);
        }
        let n = ml_degree(&self.system, seed, budget)?;
        let _ = self.ml_degree.set(n);
        Ok(n)
    }
}

/// Exact rational data vector for probes.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DataVector(pub Vec<BigRational>);

#[cfg(test)]
mod tests {
    use super::*;
    use crate::polyring::parse_poly;

    pub(crate) fn linear_model() -> StatModel {
        build_model(
            &["p0", "p1", "p2", "p3"],
            &["p0 + 2*p1 + 3*p2 - 4*p3"],
            1,
            None,
        )
        .unwrap()
    }

    #[test]
    fn linear_model_equations_match() {
        let sys = build_lagrange_system(&linear_model()).unwrap();
        let r = &sys.system.reg;
        let expected = [
            "p0*lam1 + p0*lam2 - u0",
            "p1*lam1 + 2*p1*lam2 - u1",
            "p2*lam1 + 3*p2*lam2 - u2",
            "p3*lam1 - 4*p3*lam2 - u3",
            "p0 + 2*p1 + 3*p2 - 4*p3",
            "p0 + p1 + p2 + p3 - 1",
        ];
        assert_eq!(sys.system.equations.len(), 6);
        for (f, e) in sys.system.equations.iter().zip(expected) {
            assert_eq!(f, &parse_poly(r, e).unwrap());
        }
    }

    #[test]
    fn linear_model_jacobian_matches_printed_value() {
        let sys = build_lagrange_system(&linear_model()).unwrap();
        let j = sys.system.jac_det().unwrap();
        let r = &sys.system.reg;
        let printed = parse_poly(
            r,
            "-lam1^2*p0*p1 - 4*lam1^2*p0*p2 - 25*lam1^2*p0*p3 - lam1^2*p1*p2 \
             - 36*lam1^2*p1*p3 - 49*lam1^2*p2*p3 + lam1*lam2*p0*p1 + 8*lam1*lam2*p0*p2 \
             - 125*lam1*lam2*p0*p3 + 3*lam1*lam2*p1*p2 - 144*lam1*lam2*p1*p3 \
             - 147*lam1*lam2*p2*p3 + 12*lam2^2*p0*p1 + 32*lam2^2*p0*p2 - 150*lam2^2*p0*p3 \
             + 4*lam2^2*p1*p2 - 108*lam2^2*p1*p3 - 98*lam2^2*p2*p3",
        )
        .unwrap();
        assert!(j == &printed || j == &(-&printed), "J = {j}");
    }

    #[test]
    fn structural_identity_f_vanishes() {
        // substituting u_i = p_i * (lambda form) kills F_i identically
        let sys = build_lagrange_system(&linear_model()).unwrap();
        let r = &sys.system.reg;
        for (i, f) in sys.system.equations.iter().take(4).enumerate() {
            let u = sys.system.params[i];
            let form = f.try_add(&Poly::var(r, u)).unwrap(); // p_i * (lambda form)
            let mut bind = HashMap::new();
            bind.insert(u, form);
            assert!(f.substitute(&bind).unwrap().is_zero());
        }
    }

    #[test]
    fn non_homogeneous_invariant_rejected() {
        let err = build_model(&["p0", "p1"], &["p0 + 1"], 1, None).unwrap_err();
        assert!(matches!(err, ModelError::NotHomogeneous(_)));
    }

    #[test]
    fn two_invariant_system_shape() {
        // one-invariant model over p0,p1 with g = p0 - p1 (hand-derived)
        let m = build_model(&["p0", "p1"], &["p0 - p1"], 1, None).unwrap();
        let sys = build_lagrange_system(&m).unwrap();
        let r = &sys.system.reg;
        let expected = [
            "p0*lam1 + p0*lam2 - u0",
            "p1*lam1 - p1*lam2 - u1",
            "p0 - p1",
            "p0 + p1 - 1",
        ];
        for (f, e) in sys.system.equations.iter().zip(expected) {
            assert_eq!(f, &parse_poly(r, e).unwrap());
        }
    }

    #[test]
    fn ml_degree_linear_is_three() {
        let sys = build_lagrange_system(&linear_model()).unwrap();
        let n = sys.ml_degree(1, &Budget::unlimited()).unwrap();
        assert_eq!(n, 3);
    }

    #[test]
    fn dx_p_examples() {
        let sys = build_lagrange_system(&linear_model()).unwrap();
        let d = dx_p(&sys);
        assert_eq!(d, parse_poly(&sys.system.reg, "u0*u1*u2*u3").unwrap());
        let (deg, _) = d.degrees().unwrap();
        assert_eq!(deg, 4);
        assert!(crate::polyring::squarefree_part_multi(&d) == d.canonicalize());
    }

    #[test]
    fn ml_degree_invariant_under_lambda_change() {
        // replace lam1, lam2 by a random invertible integer combination
        let sys = build_lagrange_system(&linear_model()).unwrap();
        let r = &sys.system.reg;
        let (l1, l2) = (r.var("lam1").unwrap(), r.var("lam2").unwrap());
        let mut bind = HashMap::new();
        bind.insert(l1, parse_poly(r, "2*lam1 + lam2").unwrap());
        bind.insert(l2, parse_poly(r, "lam1 + lam2").unwrap());
        let changed = sys.system.substituted(&bind).unwrap();
        let n = ml_degree(&changed, 5, &Budget::unlimited()).unwrap();
        assert_eq!(n, 3);
    }
}
