//! The interpolation strategies: all-terms-at-once (Strategy 1) and
//! one-parameter-at-a-time with homogeneous recovery of the final
//! variable (Strategy 2). Strategy 3 reuses Strategy 1/2 drivers with the
//! resultant-based sampler.

use super::profile::prepare_transform;
use super::sample::{eval_batch, intersect_at, intersect_s3_at, SampleDefect};
use super::{
    finalize_probabilistic, DegreeProfile, DiscConfig, DiscError, DiscResult, InterpolationState,
    Strategy,
};
use crate::likelihood::{draw_nonzero, PolySystem};
use crate::polyring::{Monomial, Poly, UniPoly, Var};
use num_rational::BigRational;
use num_traits::{One, Zero};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use std::collections::HashSet;
use std::sync::atomic::{AtomicUsize, Ordering};
use std::time::Instant;

/// Which sampler backs the interpolation driver.
#[derive(Clone, Copy)]
pub(crate) enum SampleRoute {
    WithJacobian,
    Resultant { ml_degree: u32 },
}

struct Sampler<'a> {
    sys: &'a PolySystem,
    dist: Var,
    free: Vec<Var>,
    expected: u32,
    route: SampleRoute,
    cfg: &'a DiscConfig,
    used: HashSet<Vec<i64>>,
    counter: &'a AtomicUsize,
}

impl<'a> Sampler<'a> {
    fn propose(&mut self, rng: &mut ChaCha8Rng, n: usize) -> Vec<Vec<i64>> {
        let mut out = Vec::with_capacity(n);
        while out.len() < n {
            let tuple: Vec<i64> = self.free.iter().map(|_| draw_nonzero(rng)).collect();
            if self.used.insert(tuple.clone()) {
                out.push(tuple);
            }
        }
        out
    }

    fn eval_many(&self, tuples: &[Vec<i64>]) -> Vec<Result<UniPoly, SampleDefect>> {
        let threads = self.cfg.effective_threads(tuples.len());
        self.counter.fetch_add(tuples.len(), Ordering::Relaxed);
        let items: Vec<Vec<i64>> = tuples.to_vec();
        eval_batch(items, threads, |values| match self.route {
            SampleRoute::WithJacobian => intersect_at(
                self.sys,
                self.dist,
                &self.free,
                values,
                Some(self.expected),
                &self.cfg.budget,
            ),
            SampleRoute::Resultant { ml_degree } => {
                match intersect_s3_at(
                    self.sys,
                    self.dist,
                    &self.free,
                    values,
                    ml_degree,
                    Some(self.expected),
                    &self.cfg.budget,
                ) {
                    Err(SampleDefect::ShapeFailure) => {
                        // incomplete sampler: fall back to the full
                        // elimination for this point
                        intersect_at(
                            self.sys,
                            self.dist,
                            &self.free,
                            values,
                            Some(self.expected),
                            &self.cfg.budget,
                        )
                    }
                    other => other,
                }
            }
        })
    }

    /// Draw until `n` valid `(point, monic section)` pairs exist.
    fn collect(
        &mut self,
        rng: &mut ChaCha8Rng,
        n: usize,
    ) -> Result<Vec<(Vec<i64>, UniPoly)>, DiscError> {
        let mut have: Vec<(Vec<i64>, UniPoly)> = Vec::with_capacity(n);
        for _round in 0..8 {
            if have.len() >= n {
                break;
            }
            let tuples = self.propose(rng, n - have.len());
            let results = self.eval_many(&tuples);
            for (tuple, res) in tuples.into_iter().zip(results) {
                match res {
                    Ok(section) => have.push((tuple, section)),
                    Err(SampleDefect::Disc(e)) => return Err(DiscError::SamplingFailed(e)),
                    Err(defect) => log::debug!("sample {tuple:?} rejected: {defect}"),
                }
            }
        }
        if have.len() < n {
            return Err(DiscError::SamplingFailed(format!(
                "only {} of {} samples valid after 8 rounds",
                have.len(),
                n
            )));
        }
        have.truncate(n);
        Ok(have)
    }
}

/// All monomials over `vars` of total degree `j` with per-variable bounds.
fn support(reg_len: usize, vars: &[Var], bounds: &[u32], j: u32) -> Vec<Monomial> {
    let mut out = Vec::new();
    let mut exps = vec![0u16; reg_len];
    fn rec(
        out: &mut Vec<Monomial>,
        exps: &mut Vec<u16>,
        vars: &[Var],
        bounds: &[u32],
        pos: usize,
        left: u32,
    ) {
        if pos == vars.len() {
            if left == 0 {
                out.push(Monomial::from_exps(exps));
            }
            return;
        }
        let cap = bounds[pos].min(left);
        for e in 0..=cap {
            exps[vars[pos].idx()] = e as u16;
            rec(out, exps, vars, bounds, pos + 1, left - e);
        }
        exps[vars[pos].idx()] = 0;
    }
    rec(&mut out, &mut exps, vars, bounds, 0, j);
    out
}

/// Gaussian elimination that reports the row where rank collapses.
fn gauss_solve(
    mat: &[Vec<BigRational>],
    rhs: &[BigRational],
) -> Result<Vec<BigRational>, usize> {
    let n = rhs.len();
    let mut a: Vec<Vec<BigRational>> = (0..n)
        .map(|i| {
            let mut row = mat[i].clone();
            row.push(rhs[i].clone());
            row
        })
        .collect();
    let mut owner: Vec<usize> = (0..n).collect();
    for col in 0..n {
        let piv = (col..n).find(|&r| !a[r][col].is_zero()).ok_or(owner[col])?;
        a.swap(col, piv);
        owner.swap(col, piv);
        let lead = a[col][col].clone();
        for c in a[col].iter_mut() {
            *c = &*c / &lead;
        }
        for r in 0..n {
            if r != col && !a[r][col].is_zero() {
                let f = a[r][col].clone();
                for c in col..=n {
                    let d = &a[col][c] * &f;
                    a[r][c] -= d;
                }
            }
        }
    }
    Ok((0..n).map(|i| a[i][n].clone()).collect())
}

pub(crate) fn run_strategy1(
    sys: &PolySystem,
    cfg: &DiscConfig,
    route: SampleRoute,
    strategy: Strategy,
) -> Result<DiscResult, DiscError> {
    let t0 = Instant::now();
    let profile_route = |s: &PolySystem| match route {
        SampleRoute::WithJacobian => super::profile::degree_profile(s, cfg),
        SampleRoute::Resultant { ml_degree } => super::profile::degree_profile_s3(s, ml_degree, cfg),
    };
    let (change, tsys, tprofile) = prepare_transform(sys, cfg, profile_route)?;
    let profile_time = t0.elapsed();
    let d = tprofile.total;
    if d == 0 {
        return trivial_result(sys, cfg, strategy, profile_time);
    }
    let dist = tsys.params[0];
    let free: Vec<Var> = tsys.params[1..].to_vec();
    let bounds: Vec<u32> = tprofile.per_param[1..].to_vec();
    let supports: Vec<Vec<Monomial>> = (1..=d)
        .map(|j| support(tsys.reg.len(), &free, &bounds, j))
        .collect();
    let n_needed = supports.iter().map(|s| s.len()).max().unwrap_or(0);

    let counter = AtomicUsize::new(0);
    let mut sampler = Sampler {
        sys: &tsys,
        dist,
        free: free.clone(),
        expected: d,
        route,
        cfg,
        used: HashSet::new(),
        counter: &counter,
    };
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed ^ 0x7331_0001);
    let t1 = Instant::now();
    let mut pool = sampler.collect(&mut rng, n_needed)?;
    let sample_time = t1.elapsed();

    // per-degree square systems M_j c = rhs_j over the first N_j samples
    let t2 = Instant::now();
    let mut solved: Vec<Poly> = Vec::with_capacity(d as usize);
    for (jm1, supp) in supports.iter().enumerate() {
        let j = jm1 as u32 + 1;
        if supp.is_empty() {
            solved.push(Poly::zero(&tsys.reg));
            continue;
        }
        let nj = supp.len();
        let mut row_idx: Vec<usize> = (0..nj).collect();
        let coeffs = 'solve: {
            for _round in 0..3 {
                let mat: Vec<Vec<BigRational>> = row_idx
                    .iter()
                    .map(|&k| {
                        supp.iter()
                            .map(|m| eval_monomial(m, &free, &pool[k].0))
                            .collect()
                    })
                    .collect();
                let rhs: Vec<BigRational> = row_idx
                    .iter()
                    .map(|&k| pool[k].1.coeff((d - j) as usize))
                    .collect();
                match gauss_solve(&mat, &rhs) {
                    Ok(c) => break 'solve c,
                    Err(row) => {
                        // resample only the offending row
                        log::debug!("singular interpolation matrix at degree {j}, row {row}");
                        let fresh = sampler.collect(&mut rng, 1)?;
                        pool.push(fresh.into_iter().next().unwrap());
                        row_idx[row] = pool.len() - 1;
                    }
                }
            }
            return Err(DiscError::SamplingFailed(format!(
                "interpolation matrix for degree {j} stayed singular after 3 repairs"
            )));
        };
        let mut cj = Poly::zero(&tsys.reg);
        for (m, c) in supp.iter().zip(coeffs) {
            cj = &cj + &Poly::monomial(&tsys.reg, m.clone(), c);
        }
        solved.push(cj);
    }
    // assemble monic polynomial in the distinguished parameter
    let mut dstar = Poly::var_pow(&tsys.reg, dist, d as u16);
    for (jm1, cj) in solved.iter().enumerate() {
        let j = jm1 as u32 + 1;
        let pw = Poly::var_pow(&tsys.reg, dist, (d - j) as u16);
        dstar = &dstar + &cj.try_mul(&pw)?;
    }
    let solve_time = t2.elapsed();

    let dxj = change.inverse_on_poly(sys, &dstar)?;
    let state = InterpolationState {
        profile: tprofile,
        change,
        samples: pool,
        solved,
    };
    let profile0 = result_profile(sys, &dxj)?;
    finalize_probabilistic(
        sys,
        cfg,
        strategy,
        dxj,
        profile0,
        &state,
        vec![
            ("degree-profile".into(), profile_time),
            ("sampling".into(), sample_time),
            ("solve".into(), solve_time),
        ],
    )
}

fn eval_monomial(m: &Monomial, free: &[Var], values: &[i64]) -> BigRational {
    let mut acc = BigRational::one();
    for (v, x) in free.iter().zip(values) {
        let e = m.exp(*v);
        if e > 0 {
            let p = num_traits::pow::pow(BigRational::from_integer((*x).into()), e as usize);
            acc *= p;
        }
    }
    acc
}

fn result_profile(sys: &PolySystem, dxj: &Poly) -> Result<DegreeProfile, DiscError> {
    if dxj.is_constant() {
        return Ok(DegreeProfile {
            total: 0,
            per_param: vec![0; sys.params.len()],
        });
    }
    let (total, per) = dxj.degrees()?;
    Ok(DegreeProfile {
        total,
        per_param: sys
            .params
            .iter()
            .map(|u| per.get(u).copied().unwrap_or(0))
            .collect(),
    })
}

fn trivial_result(
    sys: &PolySystem,
    cfg: &DiscConfig,
    strategy: Strategy,
    profile_time: std::time::Duration,
) -> Result<DiscResult, DiscError> {
    // total degree zero: the codimension of the projection exceeds one and
    // the convention takes D = 1
    Ok(DiscResult {
        dxj: Poly::one(&sys.reg),
        strategy,
        profile: Some(DegreeProfile {
            total: 0,
            per_param: vec![0; sys.params.len()],
        }),
        seed: cfg.seed,
        samples: 0,
        verification: super::VerifyStatus::SkippedTrivial,
        timings: vec![("degree-profile".into(), profile_time)],
    })
}

/// Strategy 1: interpolate every coefficient block of
/// `u_0^d + C_1 u_0^(d-1) + ... + C_d` at once from `max N_j` sections.
pub fn interpolate_strategy1(sys: &PolySystem, cfg: &DiscConfig) -> Result<DiscResult, DiscError> {
    run_strategy1(sys, cfg, SampleRoute::WithJacobian, Strategy::S1)
}

/// Multiply each term of degree `e` by `last_var^(d-e) / last_value^(d-e)`:
/// the homogeneous completion of a slice with one variable fixed.
pub fn homogeneous_recovery(
    partial: &Poly,
    d: u32,
    last_var: Var,
    last_value: &BigRational,
) -> Result<Poly, DiscError> {
    if last_value.is_zero() {
        return Err(DiscError::Degenerate(
            "homogeneous recovery needs a nonzero fixed value".into(),
        ));
    }
    let reg = partial.registry();
    let mut out = Poly::zero(reg);
    for (m, c) in partial.terms() {
        let e = m.total_deg();
        if e > d {
            return Err(DiscError::Degenerate(format!(
                "term of degree {e} exceeds the homogeneous degree {d}"
            )));
        }
        let k = d - e;
        let scale = num_traits::pow::pow(last_value.clone(), k as usize);
        let term = Poly::monomial(reg, m.mul_var(last_var, k as u16), c / scale);
        out = &out + &term;
    }
    Ok(out)
}

/// Recursive slice interpolation for Strategy 2.
struct S2Ctx<'a> {
    sys: &'a PolySystem,
    cfg: &'a DiscConfig,
    dist: Var,
    d: u32,
    route: SampleRoute,
    /// free variables in unfix order (innermost first), with degree bounds
    order: Vec<(Var, u32)>,
    /// the homogeneity variable and its fixed value
    last: (Var, i64),
    counter: AtomicUsize,
}

impl<'a> S2Ctx<'a> {
    /// All free-parameter values for a leaf, in `sys.params[1..]` order.
    fn leaf_values(&self, tail: &[(Var, i64)]) -> Vec<i64> {
        self.sys.params[1..]
            .iter()
            .map(|u| {
                tail.iter()
                    .chain(std::iter::once(&self.last))
                    .find(|(v, _)| v == u)
                    .map(|(_, c)| *c)
                    .expect("every free parameter is fixed at a leaf")
            })
            .collect()
    }

    fn leaf(&self, tail: &[(Var, i64)]) -> Result<Poly, SampleDefect> {
        let values = self.leaf_values(tail);
        self.counter.fetch_add(1, Ordering::Relaxed);
        let section = match self.route {
            SampleRoute::WithJacobian => intersect_at(
                self.sys,
                self.dist,
                &self.sys.params[1..],
                &values,
                Some(self.d),
                &self.cfg.budget,
            )?,
            SampleRoute::Resultant { ml_degree } => {
                match intersect_s3_at(
                    self.sys,
                    self.dist,
                    &self.sys.params[1..],
                    &values,
                    ml_degree,
                    Some(self.d),
                    &self.cfg.budget,
                ) {
                    Err(SampleDefect::ShapeFailure) => intersect_at(
                        self.sys,
                        self.dist,
                        &self.sys.params[1..],
                        &values,
                        Some(self.d),
                        &self.cfg.budget,
                    )?,
                    other => other?,
                }
            }
        };
        Ok(section.to_poly(&self.sys.reg, self.dist))
    }

    /// Interpolate the slice polynomial over `order[..level]` with the
    /// outer variables fixed by `tail`.
    fn slice(
        &self,
        level: usize,
        tail: &[(Var, i64)],
        seed: u64,
    ) -> Result<Poly, SampleDefect> {
        if level == 0 {
            return self.leaf(tail);
        }
        let (w, dw) = self.order[level - 1];
        let m = dw as usize + 1;
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut xs: Vec<i64> = Vec::with_capacity(m);
        let mut seeds: Vec<u64> = Vec::with_capacity(m);
        let mut taken: HashSet<i64> = HashSet::new();
        let draw = |rng: &mut ChaCha8Rng, taken: &mut HashSet<i64>| loop {
            let x = draw_nonzero(rng);
            if taken.insert(x) {
                return x;
            }
        };
        for _ in 0..m {
            xs.push(draw(&mut rng, &mut taken));
            seeds.push(rand::Rng::gen(&mut rng));
        }
        // one consistency slice beyond the bound
        xs.push(draw(&mut rng, &mut taken));
        seeds.push(rand::Rng::gen(&mut rng));

        let mut slices: Vec<Option<Poly>> = vec![None; xs.len()];
        for _round in 0..6 {
            let todo: Vec<usize> = (0..xs.len()).filter(|&i| slices[i].is_none()).collect();
            if todo.is_empty() {
                break;
            }
            let threads = self.cfg.effective_threads(todo.len());
            let results: Vec<(usize, Result<Poly, SampleDefect>)> = eval_batch(
                todo,
                threads,
                |&i| {
                    let mut t = tail.to_vec();
                    t.push((w, xs[i]));
                    (i, self.slice(level - 1, &t, seeds[i]))
                },
            );
            for (i, res) in results {
                match res {
                    Ok(p) => slices[i] = Some(p),
                    Err(SampleDefect::Disc(e)) => return Err(SampleDefect::Disc(e)),
                    Err(defect) => {
                        log::debug!("slice at {}={} rejected: {defect}", self.sys.reg.name(w), xs[i]);
                        xs[i] = draw(&mut rng, &mut taken);
                        seeds[i] = rand::Rng::gen(&mut rng);
                    }
                }
            }
        }
        if slices.iter().any(|s| s.is_none()) {
            return Err(SampleDefect::Disc(format!(
                "slices at level {level} kept failing"
            )));
        }
        let slices: Vec<Poly> = slices.into_iter().map(|s| s.unwrap()).collect();

        // union support over all slices; per-monomial Vandermonde solves
        let mut monos: Vec<Monomial> = Vec::new();
        let mut seen: HashSet<Monomial> = HashSet::new();
        for s in &slices {
            for (mm, _) in s.terms() {
                if seen.insert(mm.clone()) {
                    monos.push(mm.clone());
                }
            }
        }
        let reg = &self.sys.reg;
        let mut out = Poly::zero(reg);
        for t_mono in monos {
            let bound = dw.min(self.d - t_mono.total_deg()) as usize;
            let take = bound + 1;
            let mat: Vec<Vec<BigRational>> = (0..take)
                .map(|r| {
                    (0..take)
                        .map(|c| {
                            num_traits::pow::pow(
                                BigRational::from_integer(xs[r].into()),
                                c,
                            )
                        })
                        .collect()
                })
                .collect();
            let rhs: Vec<BigRational> = (0..take).map(|r| slices[r].coeff_of(&t_mono)).collect();
            let sol = gauss_solve(&mat, &rhs)
                .map_err(|_| SampleDefect::Disc("vandermonde solve singular".into()))?;
            // consistency: the remaining slices must match the interpolant
            for extra in take..xs.len() {
                let xv = BigRational::from_integer(xs[extra].into());
                let mut predicted = BigRational::zero();
                let mut p = BigRational::one();
                for c in &sol {
                    predicted += c * &p;
                    p *= &xv;
                }
                if predicted != slices[extra].coeff_of(&t_mono) {
                    return Err(SampleDefect::Disc(format!(
                        "inconsistent slice data for monomial at level {level}"
                    )));
                }
            }
            let mut wpoly = Poly::zero(reg);
            for (k, c) in sol.into_iter().enumerate() {
                if !c.is_zero() {
                    wpoly = &wpoly
                        + &Poly::monomial(reg, Monomial::var(reg.len(), w, k as u16), c);
                }
            }
            out = &out + &wpoly.mul_monomial(&t_mono, &BigRational::one());
        }
        Ok(out)
    }
}

pub(crate) fn run_strategy2(
    sys: &PolySystem,
    cfg: &DiscConfig,
    route: SampleRoute,
    strategy: Strategy,
) -> Result<DiscResult, DiscError> {
    let t0 = Instant::now();
    let profile_route = |s: &PolySystem| match route {
        SampleRoute::WithJacobian => super::profile::degree_profile(s, cfg),
        SampleRoute::Resultant { ml_degree } => super::profile::degree_profile_s3(s, ml_degree, cfg),
    };
    let (change, tsys, tprofile) = prepare_transform(sys, cfg, profile_route)?;
    let profile_time = t0.elapsed();
    let d = tprofile.total;
    if d == 0 {
        return trivial_result(sys, cfg, strategy, profile_time);
    }
    let dist = tsys.params[0];
    let free: Vec<Var> = tsys.params[1..].to_vec();
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed ^ 0x7332_0002);

    let t1 = Instant::now();
    let (dstar, samples) = if free.is_empty() {
        (Poly::var_pow(&tsys.reg, dist, d as u16), 0)
    } else {
        // ascending per-variable degree; the largest-degree variable is
        // recovered from homogeneity instead of sampled
        let mut order: Vec<(Var, u32)> = free
            .iter()
            .zip(&tprofile.per_param[1..])
            .map(|(&v, &deg)| (v, deg))
            .collect();
        order.sort_by_key(|&(v, deg)| (deg, v.idx()));
        let (last_var, _) = order.pop().unwrap();
        let mut attempt = 0;
        loop {
            let last_value = draw_nonzero(&mut rng);
            let ctx = S2Ctx {
                sys: &tsys,
                cfg,
                dist,
                d,
                route,
                order: order.clone(),
                last: (last_var, last_value),
                counter: AtomicUsize::new(0),
            };
            let top_seed: u64 = rand::Rng::gen(&mut rng);
            match ctx.slice(order.len(), &[], top_seed) {
                Ok(p) => {
                    let full = homogeneous_recovery(
                        &p,
                        d,
                        last_var,
                        &BigRational::from_integer(last_value.into()),
                    )?;
                    break (full, ctx.counter.load(Ordering::Relaxed));
                }
                Err(SampleDefect::Disc(e)) if attempt >= 2 => {
                    return Err(DiscError::SamplingFailed(e))
                }
                Err(defect) => {
                    attempt += 1;
                    if attempt > 2 {
                        return Err(DiscError::SamplingFailed(defect.to_string()));
                    }
                    log::debug!("strategy-2 base redraw after: {defect}");
                }
            }
        }
    };
    let sample_time = t1.elapsed();

    let dxj = change.inverse_on_poly(sys, &dstar)?;
    let profile0 = result_profile(sys, &dxj)?;
    let state = InterpolationState {
        profile: tprofile,
        change,
        samples: Vec::new(),
        solved: Vec::new(),
    };
    let mut result = finalize_probabilistic(
        sys,
        cfg,
        strategy,
        dxj,
        profile0,
        &state,
        vec![
            ("degree-profile".into(), profile_time),
            ("sampling".into(), sample_time),
        ],
    )?;
    result.samples = samples;
    Ok(result)
}

/// Strategy 2: fix all but two parameters, interpolate bivariate slices
/// coefficient-by-coefficient, unfix one parameter at a time, and recover
/// the last one from homogeneity.
pub fn interpolate_strategy2(sys: &PolySystem, cfg: &DiscConfig) -> Result<DiscResult, DiscError> {
    run_strategy2(sys, cfg, SampleRoute::WithJacobian, Strategy::S2)
}

/// Strategy 3: the one-parameter-at-a-time lifting of Strategy 2 driven by
/// the resultant-and-membership sampler and degree probe, as benchmarked.
pub fn interpolate_strategy3(
    sys: &PolySystem,
    ml_degree: u32,
    cfg: &DiscConfig,
) -> Result<DiscResult, DiscError> {
    run_strategy2(
        sys,
        cfg,
        SampleRoute::Resultant { ml_degree },
        Strategy::S3,
    )
}
