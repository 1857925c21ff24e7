//! Computation of the Jacobian part of the data-discriminant, by standard
//! elimination and by probabilistic interpolation (three sampling
//! strategies), with degree profiling, coordinate changes, homogeneous
//! recovery and random-line verification.

mod elim;
mod interpolate;
mod profile;
mod sample;

pub use interpolate::{
    homogeneous_recovery, interpolate_strategy1, interpolate_strategy2, interpolate_strategy3,
};
pub use profile::{degree_profile, degree_profile_s3, linear_operator};
pub use sample::{intersect, intersect_at, intersect_s3, intersect_s3_at, SampleDefect};

use crate::budget::{Budget, BudgetError};
use crate::groebner::GroebnerError;
use crate::likelihood::{ModelError, PolySystem};
use crate::polyring::{Poly, PolyError, Var};
use std::collections::HashMap;
use std::time::Duration;

#[derive(Debug, Clone, thiserror::Error)]
pub enum DiscError {
    #[error(transparent)]
    Budget(#[from] BudgetError),
    #[error(transparent)]
    Groebner(#[from] GroebnerError),
    #[error(transparent)]
    Poly(#[from] PolyError),
    #[error(transparent)]
    Model(#[from] ModelError),
    #[error("degenerate random choice: {0}")]
    Degenerate(String),
    #[error("degree probes kept disagreeing after retries (genericity failure)")]
    GenericityFailure,
    #[error("no linear operator found after 5 draws")]
    LinearOperatorFailure,
    #[error("sampling failed: {0}")]
    SamplingFailed(String),
    #[error("shape failure: eliminant degree differs from the ML degree")]
    ShapeFailure,
}

/// Which algorithm produced a result.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Strategy {
    Elimination,
    S1,
    S2,
    S3,
}

impl std::fmt::Display for Strategy {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let s = match self {
            Strategy::Elimination => "elim",
            Strategy::S1 => "s1",
            Strategy::S2 => "s2",
            Strategy::S3 => "s3",
        };
        write!(f, "{s}")
    }
}

/// Outcome of the random-line check.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum VerifyStatus {
    /// Deterministic elimination output; no probabilistic step to check.
    Deterministic,
    /// Passed the stated number of independent random-line checks.
    Passed(u32),
    Failed,
    /// `D = 1` (codimension above one): verification intentionally skipped.
    SkippedTrivial,
}

impl std::fmt::Display for VerifyStatus {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            VerifyStatus::Deterministic => write!(f, "deterministic"),
            VerifyStatus::Passed(n) => write!(f, "passed({n})"),
            VerifyStatus::Failed => write!(f, "failed"),
            VerifyStatus::SkippedTrivial => write!(f, "skipped-trivial"),
        }
    }
}

/// Total and per-parameter degrees of the discriminant.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DegreeProfile {
    pub total: u32,
    pub per_param: Vec<u32>,
}

impl DegreeProfile {
    /// Per-parameter degrees sorted descending (the cost formula's view).
    pub fn sorted_desc(&self) -> Vec<u32> {
        let mut v = self.per_param.clone();
        v.sort_unstable_by(|a, b| b.cmp(a));
        v
    }
}

/// The linear change `u_i <- a_i u_0 + u_i` (forward) with inverse
/// `u_i <- u_i - a_i u_0`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CoordinateChange {
    pub shifts: Vec<i64>,
}

impl CoordinateChange {
    pub fn identity(n_free: usize) -> Self {
        CoordinateChange {
            shifts: vec![0; n_free],
        }
    }

    pub fn is_identity(&self) -> bool {
        self.shifts.iter().all(|&a| a == 0)
    }

    fn bindings(&self, sys: &PolySystem, inverse: bool) -> HashMap<Var, Poly> {
        let reg = &sys.reg;
        let dist = sys.params[0];
        let mut b = HashMap::new();
        for (i, &a) in self.shifts.iter().enumerate() {
            if a == 0 {
                continue;
            }
            let u = sys.params[i + 1];
            let shift = Poly::var(reg, dist).scale(&num_rational::BigRational::from_integer(
                (if inverse { -a } else { a }).into(),
            ));
            b.insert(u, &Poly::var(reg, u) + &shift);
        }
        b
    }

    /// Apply the forward substitution to a whole system.
    pub fn forward_system(&self, sys: &PolySystem) -> Result<PolySystem, DiscError> {
        if self.is_identity() {
            return Ok(sys.clone());
        }
        Ok(sys.substituted(&self.bindings(sys, false))?)
    }

    /// Undo the change on a polynomial in the parameters.
    pub fn inverse_on_poly(&self, sys: &PolySystem, f: &Poly) -> Result<Poly, DiscError> {
        if self.is_identity() {
            return Ok(f.clone());
        }
        Ok(f.substitute(&self.bindings(sys, true))?)
    }
}

/// Interpolation bookkeeping: the transformed profile, the sample points
/// with their monic sections, and the solved coefficient blocks.
#[derive(Debug, Clone)]
pub struct InterpolationState {
    pub profile: DegreeProfile,
    pub change: CoordinateChange,
    /// `(free-parameter values, monic section of degree d)`
    pub samples: Vec<(Vec<i64>, crate::polyring::UniPoly)>,
    /// solved coefficient of `u_0^(d-j)` for `j = 1..=d`
    pub solved: Vec<Poly>,
}

/// A computed Jacobian discriminant with its provenance.
#[derive(Debug, Clone)]
pub struct DiscResult {
    pub dxj: Poly,
    pub strategy: Strategy,
    pub profile: Option<DegreeProfile>,
    pub seed: u64,
    pub samples: usize,
    pub verification: VerifyStatus,
    pub timings: Vec<(String, Duration)>,
}

/// Knobs shared by every discriminant computation.
#[derive(Debug, Clone)]
pub struct DiscConfig {
    pub seed: u64,
    /// worker threads for sampling; 0 picks the number of processors
    pub threads: usize,
    pub budget: Budget,
    /// random-line checks applied to probabilistic results
    pub verify_rounds: u32,
}

impl Default for DiscConfig {
    fn default() -> Self {
        DiscConfig {
            seed: 0,
            threads: 0,
            budget: Budget::unlimited(),
            verify_rounds: 1,
        }
    }
}

impl DiscConfig {
    pub fn with_seed(seed: u64) -> Self {
        DiscConfig {
            seed,
            ..Default::default()
        }
    }

    pub(crate) fn effective_threads(&self, cap: usize) -> usize {
        let t = if self.threads == 0 {
            std::thread::available_parallelism().map_or(1, |n| n.get())
        } else {
            self.threads
        };
        t.clamp(1, cap.max(1))
    }
}

/// `D_{X,J}` by straight elimination of the unknowns followed by the
/// codimension-1 radical part (the reference algorithm).
pub fn dxj_elimination(sys: &PolySystem, cfg: &DiscConfig) -> Result<DiscResult, DiscError> {
    let t0 = std::time::Instant::now();
    let gens = sys.gens_with_jac()?;
    let elim = crate::groebner::eliminate(&gens, &sys.params, &cfg.budget)?;
    let elim_time = t0.elapsed();
    let dxj = if elim.is_empty() {
        // empty elimination ideal: the projection closure is everything,
        // which the convention maps to the trivial discriminant
        Poly::one(&sys.reg)
    } else {
        crate::groebner::codim1_part(&elim)?
    }
    .canonicalize();
    let profile = if dxj.is_constant() {
        None
    } else {
        let (total, per) = dxj.degrees()?;
        Some(DegreeProfile {
            total,
            per_param: sys
                .params
                .iter()
                .map(|u| per.get(u).copied().unwrap_or(0))
                .collect(),
        })
    };
    Ok(DiscResult {
        dxj,
        strategy: Strategy::Elimination,
        profile,
        seed: cfg.seed,
        samples: 0,
        verification: VerifyStatus::Deterministic,
        timings: vec![("elimination".into(), elim_time)],
    })
}

/// Check a computed discriminant against an independent elimination on a
/// fresh random line. `true` means the squarefree restrictions agree up to
/// scaling.
pub fn verify_on_random_line(
    result: &Poly,
    sys: &PolySystem,
    seed: u64,
    budget: &Budget,
) -> Result<bool, DiscError> {
    use rand::SeedableRng;
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed ^ 0x76657269_66790000);
    if result.is_one() {
        return Ok(true);
    }
    let expected = result.total_degree();
    let t = sys.line_var;
    'line: for _ in 0..4 {
        let mut bind = HashMap::new();
        let mut coeffs = Vec::new();
        for &u in &sys.params {
            let a = crate::likelihood::draw_nonzero(&mut rng);
            let b = crate::likelihood::draw_nonzero(&mut rng);
            coeffs.push((a, b));
            let line = &Poly::var(&sys.reg, t).scale(&num_rational::BigRational::from_integer(
                a.into(),
            )) + &Poly::int(&sys.reg, b);
            bind.insert(u, line);
        }
        // left side: restriction of the candidate, squarefree-normalized
        let restricted = result.substitute(&bind)?;
        if restricted.is_zero() {
            continue 'line;
        }
        let uni = crate::polyring::as_univariate(&restricted, t)?;
        if (uni.degree() as u32) < expected {
            // degenerate line for the candidate; redraw
            continue 'line;
        }
        let lhs = uni.squarefree_part()?.to_poly(&sys.reg, t).canonicalize();
        // right side: honest elimination over the same line
        let spec = sys.substituted(&bind)?;
        let gens = spec.gens_with_jac()?;
        let rhs = elim::elim_radical_single(&gens, t, budget)?;
        return Ok(lhs == rhs.canonicalize());
    }
    Err(DiscError::Degenerate(
        "no usable random line after 4 draws".into(),
    ))
}

/// Post-process a probabilistic result: homogeneity sanity plus the
/// configured number of random-line verifications.
pub(crate) fn finalize_probabilistic(
    sys: &PolySystem,
    cfg: &DiscConfig,
    strategy: Strategy,
    dxj: Poly,
    profile: DegreeProfile,
    state: &InterpolationState,
    timings: Vec<(String, Duration)>,
) -> Result<DiscResult, DiscError> {
    let dxj = dxj.canonicalize();
    let verification = if dxj.is_one() {
        VerifyStatus::SkippedTrivial
    } else {
        debug_assert!(dxj.is_homogeneous());
        let mut ok = true;
        for round in 0..cfg.verify_rounds {
            ok &= verify_on_random_line(&dxj, sys, cfg.seed.wrapping_add(round as u64), &cfg.budget)?;
            if !ok {
                break;
            }
        }
        if cfg.verify_rounds == 0 {
            VerifyStatus::Passed(0)
        } else if ok {
            VerifyStatus::Passed(cfg.verify_rounds)
        } else {
            VerifyStatus::Failed
        }
    };
    Ok(DiscResult {
        dxj,
        strategy,
        profile: Some(profile),
        seed: cfg.seed,
        samples: state.samples.len(),
        verification,
        timings,
    })
}

/// Sampling-time estimate of the one-parameter-at-a-time strategy:
/// `t_s * d_2 * ... * d_n` over the descending-sorted per-parameter
/// degrees.
pub fn sampling_cost_estimate(profile: &DegreeProfile, t_s_seconds: f64) -> f64 {
    let sorted = profile.sorted_desc();
    let product: f64 = sorted.iter().skip(2).map(|&d| d as f64).product();
    t_s_seconds * product
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cost_estimate_examples() {
        // total 48, per-parameter degrees 31, 44, 48, 44, 31:
        // 2.0 s * 44 * 31 * 31 = 84568 s (about 23.49 h)
        let p = DegreeProfile {
            total: 48,
            per_param: vec![31, 44, 48, 44, 31],
        };
        let s = sampling_cost_estimate(&p, 2.0);
        assert_eq!(s, 84568.0);
        assert!((s / 3600.0 - 23.49).abs() < 0.005);
        // zero sampling time
        assert_eq!(sampling_cost_estimate(&p, 0.0), 0.0);
        // a single parameter: empty product
        let q = DegreeProfile {
            total: 5,
            per_param: vec![5],
        };
        assert_eq!(sampling_cost_estimate(&q, 2.5), 2.5);
    }
}
