//! The cubic toy ideal `{F, dF/dp}`: every discriminant path must land on
//! the same quartic.

use datadisc_core::budget::Budget;
use datadisc_core::discriminant::{
    degree_profile, degree_profile_s3, dxj_elimination, interpolate_strategy1,
    interpolate_strategy2, interpolate_strategy3, linear_operator, verify_on_random_line,
    DiscConfig, VerifyStatus,
};
use datadisc_core::likelihood::{ml_degree, PolySystem};
use datadisc_core::polyring::{parse_poly, Poly, VarRegistry};
use std::sync::Arc;

fn toy() -> PolySystem {
    let reg = VarRegistry::new(&[
        ("u", &["u0", "u1", "u2", "u3"]),
        ("y", &["p"]),
        ("aux", &["t"]),
    ]);
    let f = parse_poly(&reg, "u0*p^3 + u1*p^2 + u2*p + u3").unwrap();
    let params = reg.block("u");
    let unknowns = reg.block("y");
    let t = reg.var("t").unwrap();
    PolySystem::raw(reg, vec![f], params, unknowns, t).unwrap()
}

fn expected_d(reg: &Arc<VarRegistry>) -> Poly {
    parse_poly(
        reg,
        "27*u0^2*u3^2 - 18*u0*u1*u2*u3 + 4*u0*u2^3 + 4*u1^3*u3 - u1^2*u2^2",
    )
    .unwrap()
    .canonicalize()
}

#[test]
fn toy_jacobian_is_derivative() {
    let sys = toy();
    let j = sys.jac_det().unwrap();
    assert_eq!(
        j,
        &parse_poly(&sys.reg, "3*u0*p^2 + 2*u1*p + u2").unwrap()
    );
}

#[test]
fn toy_elimination_and_profile() {
    let sys = toy();
    let cfg = DiscConfig::with_seed(11);
    let res = dxj_elimination(&sys, &cfg).unwrap();
    assert_eq!(res.dxj, expected_d(&sys.reg));
    let p = degree_profile(&sys, &cfg).unwrap();
    assert_eq!(p.total, 4);
    assert_eq!(p.per_param, vec![2, 3, 3, 2]);
}

#[test]
fn toy_linear_operator_fixes_distinguished_degree() {
    let sys = toy();
    let cfg = DiscConfig::with_seed(3);
    // d = 4 but d_0 = 2, so a nonzero shift vector is required
    let change = linear_operator(&sys, &cfg).unwrap();
    assert!(!change.is_identity());
    let tsys = change.forward_system(&sys).unwrap();
    let p = degree_profile(&tsys, &cfg).unwrap();
    assert_eq!(p.total, 4);
    assert_eq!(p.per_param[0], 4);
}

#[test]
fn toy_strategy1_matches_elimination() {
    let sys = toy();
    let cfg = DiscConfig::with_seed(5);
    let res = interpolate_strategy1(&sys, &cfg).unwrap();
    assert_eq!(res.dxj, expected_d(&sys.reg));
    assert_eq!(res.verification, VerifyStatus::Passed(1));
    assert!(res.samples > 0);
}

#[test]
fn toy_strategy2_matches_elimination() {
    let sys = toy();
    let cfg = DiscConfig::with_seed(6);
    let res = interpolate_strategy2(&sys, &cfg).unwrap();
    assert_eq!(res.dxj, expected_d(&sys.reg));
    assert_eq!(res.verification, VerifyStatus::Passed(1));
}

#[test]
fn toy_strategy3_matches_elimination() {
    let sys = toy();
    let cfg = DiscConfig::with_seed(7);
    // generic parameter count of the cubic in p
    let n = ml_degree(&sys, 7, &Budget::unlimited()).unwrap();
    assert_eq!(n, 3);
    let p3 = degree_profile_s3(&sys, n, &cfg).unwrap();
    assert_eq!((p3.total, p3.per_param.clone()), (4, vec![2, 3, 3, 2]));
    let res = interpolate_strategy3(&sys, n, &cfg).unwrap();
    assert_eq!(res.dxj, expected_d(&sys.reg));
}

#[test]
fn toy_verification_rejects_corruption() {
    let sys = toy();
    let d = expected_d(&sys.reg);
    let budget = Budget::unlimited();
    assert!(verify_on_random_line(&d, &sys, 1, &budget).unwrap());
    // scaling does not matter
    let scaled = d.scale(&num_rational::BigRational::from_integer(7.into()));
    assert!(verify_on_random_line(&scaled, &sys, 2, &budget).unwrap());
    // adding a pure power of matching degree must be caught
    let bad = &d + &parse_poly(&sys.reg, "u0^4").unwrap();
    assert!(!verify_on_random_line(&bad, &sys, 3, &budget).unwrap());
}

#[test]
fn toy_determinism_across_thread_counts() {
    let sys = toy();
    let mut envs = Vec::new();
    for threads in [1usize, 4] {
        let cfg = DiscConfig {
            seed: 42,
            threads,
            ..Default::default()
        };
        let res = interpolate_strategy1(&sys, &cfg).unwrap();
        envs.push((res.dxj.to_string(), res.samples));
    }
    assert_eq!(envs[0], envs[1]);
}
