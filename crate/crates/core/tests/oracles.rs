use jacverify::algebra::{parse_polynomial, Polynomial};
use jacverify::combinatorics::{Composition, LevelLabeling, SubsetPermutation};
use jacverify::generators::{extract_generators, DLinearSpec};
use jacverify::ideal::{membership, verify_fern_lemmas, verify_main_theorem, MembershipSolver};
use jacverify::identities::{identity1_lhs, identity2_lhs, IdentityInstance};
use jacverify::involution::{
    signed_state_sum, tau_inverse, verify_involution, InvolutionContext, TupleState, Variant,
};
use jacverify::inverse::{coefficient_c, tree_oracle_coefficient};

fn comp(parts: &[u32]) -> Composition {
    Composition::new(parts.to_vec())
}

fn p(text: &str) -> Polynomial {
    parse_polynomial(text, 2).unwrap()
}

#[test]
fn inverse_coefficient_hand_values() {
    let spec = DLinearSpec::new(2, 2).unwrap();
    assert_eq!(coefficient_c(spec, 1, &comp(&[1, 1]), 2).unwrap(), p("2 * a[1,1]*a[1,2]"));
    assert!(coefficient_c(spec, 1, &comp(&[1, 1]), 3).unwrap().is_zero());
    // star tree: coefficient of x^alpha in (a[2,1]x1 + a[2,2]x2)^2
    assert_eq!(tree_oracle_coefficient(spec, 2, &comp(&[2, 0]), 2).unwrap(), p("a[2,1]^2"));
}

#[test]
fn d1_coefficients_are_in_the_cayley_hamilton_ideal() {
    let r = verify_main_theorem(1, &[2, 3]).unwrap();
    assert!(r.passed());
    assert!(r.entries.iter().filter(|e| !e.exceptional).all(|e| e.certificate.member));
}

#[test]
fn d1_fern_is_matrix_square_entry() {
    let r = verify_fern_lemmas(1).unwrap();
    assert!(r.passed());
    let c = r.cases.iter().find(|c| (c.u0, c.u2) == (1, 2)).unwrap();
    assert_eq!(c.z, "a[1,1]*a[1,2] + a[1,2]*a[2,2]");
}

#[test]
fn fern_example_has_expected_certificate() {
    let spec = DLinearSpec::new(2, 2).unwrap();
    let gens = extract_generators(spec).unwrap();
    let z = p("a[1,1]^3*a[1,2] + a[1,1]*a[1,2]*a[2,1]*a[2,2]");
    let cert = membership(&gens, &z).unwrap();
    assert!(cert.is_member() && cert.verify(&gens));
    let json = cert.to_json();
    assert!(json.member);
    assert_eq!(json.residual, "0");
}

#[test]
fn solver_reports_dimensions() {
    let gens = extract_generators(DLinearSpec::new(1, 2).unwrap()).unwrap();
    let s = MembershipSolver::new(&gens, 2);
    assert_eq!((s.row_count(), s.column_count()), (5, 10));
    assert_eq!(s.rank(), s.echelon_rows().len());
    assert!(s.rank() <= 5);
}

#[test]
fn restricted_involution_on_worked_example() {
    let ctx = InvolutionContext::new(2, 2, comp(&[2, 0]), 1, 2).unwrap();
    let r = verify_involution(&ctx, Variant::Tau2, Some(&[1])).unwrap();
    assert!(r.passed());
    let gens = extract_generators(DLinearSpec::new(2, 2).unwrap()).unwrap();
    let inst = IdentityInstance::identity2(2, 2, comp(&[2, 0]), 1, 2, vec![1]);
    assert!(identity2_lhs(&inst, &gens).unwrap().is_zero());
    assert!(signed_state_sum(&ctx, Some(&[1])).unwrap().is_zero());
}

#[test]
fn signed_sum_matches_identity1() {
    let gens = extract_generators(DLinearSpec::new(2, 2).unwrap()).unwrap();
    for (u0, un) in [(1, 1), (2, 1)] {
        let ctx = InvolutionContext::new(2, 2, comp(&[1, 1]), u0, un).unwrap();
        let inst = IdentityInstance::identity1(2, 2, comp(&[1, 1]), u0, un);
        assert_eq!(signed_state_sum(&ctx, None).unwrap(), identity1_lhs(&inst, &gens).unwrap());
    }
}

#[test]
fn inverses_coincide_when_last_entry_is_in_s() {
    // h' equals the path length, so both inverse maps insert the same cycle
    let s = TupleState {
        lambda: vec![2, 1],
        nu: LevelLabeling::new(vec![vec![1]]),
        perm: SubsetPermutation::from_map(&[(1, 1)].into_iter().collect()).unwrap(),
        rho: LevelLabeling::new(vec![vec![2]]),
    };
    assert_eq!(tau_inverse(&s, Variant::Tau1).unwrap(), tau_inverse(&s, Variant::Tau2).unwrap());
}
