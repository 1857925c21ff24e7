//! Degree profiles of the discriminant via restrictions to coordinate
//! lines and a generic line, with the Strategy-3 variant that avoids
//! carrying the Jacobian through the big elimination.

use super::elim::elim_radical_single;
use super::sample::{intersect_s3_at, SampleDefect};
use super::{CoordinateChange, DegreeProfile, DiscConfig, DiscError};
use crate::budget::Budget;
use crate::likelihood::{draw_nonzero, PolySystem};
use crate::polyring::Poly;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use std::collections::HashMap;

fn small_nonzero(rng: &mut ChaCha8Rng) -> i64 {
    use rand::Rng;
    loop {
        let v = rng.gen_range(-9i64..=9);
        if v != 0 {
            return v;
        }
    }
}

/// One Algorithm-Degree probe for the degree in parameter `i` (or, with
/// `i = None`, the total degree along a fresh random line).
fn degree_probe(
    sys: &PolySystem,
    i: Option<usize>,
    rng: &mut ChaCha8Rng,
    budget: &Budget,
) -> Result<u32, DiscError> {
    let reg = &sys.reg;
    let (spec, keep) = match i {
        Some(i) => {
            let mut bind = HashMap::new();
            for (k, &u) in sys.params.iter().enumerate() {
                if k != i {
                    bind.insert(u, Poly::int(reg, draw_nonzero(rng)));
                }
            }
            (sys.substituted(&bind)?, sys.params[i])
        }
        None => {
            let t = sys.line_var;
            let mut bind = HashMap::new();
            for &u in &sys.params {
                let a = draw_nonzero(rng);
                let b = draw_nonzero(rng);
                let line = &Poly::var(reg, t)
                    .scale(&num_rational::BigRational::from_integer(a.into()))
                    + &Poly::int(reg, b);
                bind.insert(u, line);
            }
            (sys.substituted(&bind)?, t)
        }
    };
    let gens = spec.gens_with_jac()?;
    let a = elim_radical_single(&gens, keep, budget)?;
    if a.is_zero() {
        return Err(DiscError::Degenerate(
            "degree probe hit the zero elimination ideal".into(),
        ));
    }
    Ok(a.degree_in(keep))
}

/// Strategy-3 probe: same degrees through the bivariate eliminant and
/// resultant route (Jacobian only enters the membership filters).
fn degree_probe_s3(
    sys: &PolySystem,
    i: Option<usize>,
    ml_degree: u32,
    rng: &mut ChaCha8Rng,
    budget: &Budget,
) -> Result<u32, SampleDefect> {
    let reg = &sys.reg;
    match i {
        Some(i) => {
            let free: Vec<_> = sys
                .params
                .iter()
                .copied()
                .enumerate()
                .filter(|&(k, _)| k != i)
                .map(|(_, u)| u)
                .collect();
            let values: Vec<i64> = free.iter().map(|_| draw_nonzero(rng)).collect();
            match intersect_s3_at(sys, sys.params[i], &free, &values, ml_degree, None, budget) {
                Ok(a) => Ok(a.degree() as u32),
                Err(SampleDefect::UnitIdeal) => Ok(0),
                Err(e) => Err(e),
            }
        }
        None => {
            let t = sys.line_var;
            let mut bind = HashMap::new();
            for &u in &sys.params {
                let a = draw_nonzero(rng);
                let b = draw_nonzero(rng);
                let line = &Poly::var(reg, t)
                    .scale(&num_rational::BigRational::from_integer(a.into()))
                    + &Poly::int(reg, b);
                bind.insert(u, line);
            }
            let spec = sys.substituted(&bind).map_err(DiscError::from)?;
            match intersect_s3_at(&spec, t, &[], &[], ml_degree, None, budget) {
                Ok(a) => Ok(a.degree() as u32),
                Err(SampleDefect::UnitIdeal) => Ok(0),
                Err(e) => Err(e),
            }
        }
    }
}

fn profile_once(
    sys: &PolySystem,
    rng: &mut ChaCha8Rng,
    budget: &Budget,
) -> Result<DegreeProfile, DiscError> {
    let mut per_param = Vec::with_capacity(sys.params.len());
    for i in 0..sys.params.len() {
        per_param.push(degree_probe(sys, Some(i), rng, budget)?);
    }
    let total = degree_probe(sys, None, rng, budget)?;
    Ok(DegreeProfile { total, per_param })
}

/// Total and per-parameter degrees of `D_{X,J}`. Each draw runs the full
/// probe set; two consecutive agreeing draws are accepted, degree drops
/// surface as disagreement, retried up to three times.
pub fn degree_profile(sys: &PolySystem, cfg: &DiscConfig) -> Result<DegreeProfile, DiscError> {
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed ^ 0x6465_6772);
    let mut prev: Option<DegreeProfile> = None;
    for _ in 0..4 {
        let p = profile_once(sys, &mut rng, &cfg.budget)?;
        if prev.as_ref() == Some(&p) {
            return Ok(p);
        }
        log::debug!("degree profile draw: {:?}", p);
        prev = Some(p);
    }
    Err(DiscError::GenericityFailure)
}

/// Strategy-3 degree profile; falls back to the standard route on shape
/// failure.
pub fn degree_profile_s3(
    sys: &PolySystem,
    ml_degree: u32,
    cfg: &DiscConfig,
) -> Result<DegreeProfile, DiscError> {
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed ^ 0x6465_6733);
    let mut prev: Option<DegreeProfile> = None;
    for _ in 0..4 {
        let mut per_param = Vec::with_capacity(sys.params.len());
        let mut shape_failed = false;
        for i in 0..=sys.params.len() {
            let idx = if i < sys.params.len() { Some(i) } else { None };
            match degree_probe_s3(sys, idx, ml_degree, &mut rng, &cfg.budget) {
                Ok(d) => per_param.push(d),
                Err(SampleDefect::ShapeFailure) => {
                    shape_failed = true;
                    break;
                }
                Err(SampleDefect::ZeroIdeal) | Err(SampleDefect::DegreeDrop { .. }) => {
                    return Err(DiscError::Degenerate("strategy-3 degree probe".into()))
                }
                Err(e) => return Err(DiscError::SamplingFailed(e.to_string())),
            }
        }
        if shape_failed {
            log::debug!("strategy-3 degree profile: shape failure, falling back");
            return degree_profile(sys, cfg);
        }
        let total = per_param.pop().expect("line probe ran last");
        let p = DegreeProfile { total, per_param };
        if prev.as_ref() == Some(&p) {
            return Ok(p);
        }
        prev = Some(p);
    }
    Err(DiscError::GenericityFailure)
}

/// Find integer shifts making the distinguished parameter's degree match
/// the total degree (identity when it already does). Returns the change,
/// the transformed system and its profile.
pub(crate) fn prepare_transform(
    sys: &PolySystem,
    cfg: &DiscConfig,
    profile_route: impl Fn(&PolySystem) -> Result<DegreeProfile, DiscError>,
) -> Result<(CoordinateChange, PolySystem, DegreeProfile), DiscError> {
    let p0 = profile_route(sys)?;
    if p0.total == p0.per_param[0] {
        return Ok((
            CoordinateChange::identity(sys.params.len() - 1),
            sys.clone(),
            p0,
        ));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed ^ 0x6c69_6e6f);
    for _ in 0..5 {
        let shifts: Vec<i64> = (1..sys.params.len())
            .map(|_| small_nonzero(&mut rng))
            .collect();
        let change = CoordinateChange { shifts };
        let tsys = change.forward_system(sys)?;
        let p = profile_route(&tsys)?;
        if p.total == p0.total && p.per_param[0] == p.total {
            return Ok((change, tsys, p));
        }
        log::debug!("linear operator draw rejected: {:?}", p);
    }
    Err(DiscError::LinearOperatorFailure)
}

/// Algorithm-LinearOperator as a stand-alone operation.
pub fn linear_operator(sys: &PolySystem, cfg: &DiscConfig) -> Result<CoordinateChange, DiscError> {
    let (change, _, _) = prepare_transform(sys, cfg, |s| degree_profile(s, cfg))?;
    Ok(change)
}
