use std::collections::BTreeMap;
use std::sync::OnceLock;

use jacverify::algebra::{parse_polynomial, rational_determinant, Monomial, Polynomial, Rational, Var};
use jacverify::combinatorics::{enumerate_compositions, is_valid_last_rep, last_rep_indices, Composition, LevelLabeling};
use jacverify::fern::{z_fern, FernLabeling};
use jacverify::generators::{extract_generators, DLinearSpec};
use jacverify::ideal::membership;
use jacverify::identities::{a_assignment, principal_minor_sum};
use jacverify::involution::{classify, enumerate_states, tau, tau_inverse, InvolutionContext, Side, TupleState, Variant};
use num_bigint::BigInt;
use proptest::prelude::*;

const N: usize = 2;

fn q(p: i64, r: i64) -> Rational {
    Rational::new(BigInt::from(p), BigInt::from(r))
}

fn vars() -> Vec<Var> {
    let mut v = vec![Var::T, Var::X(1), Var::X(2)];
    for i in 1..=N {
        for j in 1..=N {
            v.push(Var::A(i, j));
        }
    }
    v
}

fn rational() -> impl Strategy<Value = Rational> {
    (-9i64..=9, 1i64..=4).prop_map(|(p, r)| q(p, r))
}

fn monomial(allow_xt: bool) -> impl Strategy<Value = Monomial> {
    proptest::collection::vec(0u32..3, 7).prop_map(move |e| {
        let powers = vars()
            .into_iter()
            .zip(e)
            .filter(|(v, _)| allow_xt || v.is_a());
        Monomial::from_powers(N, powers).unwrap()
    })
}

fn poly(allow_xt: bool) -> impl Strategy<Value = Polynomial> {
    proptest::collection::vec((rational(), monomial(allow_xt)), 0..5)
        .prop_map(|terms| Polynomial::from_terms(N, terms).unwrap())
}

fn assignment() -> impl Strategy<Value = BTreeMap<Var, Rational>> {
    proptest::collection::vec(rational(), 7).prop_map(|vals| vars().into_iter().zip(vals).collect())
}

fn matrix(n: usize) -> impl Strategy<Value = Vec<Vec<Rational>>> {
    proptest::collection::vec(proptest::collection::vec(rational(), n), n)
}

fn mat_mul(a: &[Vec<Rational>], b: &[Vec<Rational>]) -> Vec<Vec<Rational>> {
    let n = a.len();
    (0..n)
        .map(|i| (0..n).map(|j| (0..n).map(|k| &a[i][k] * &b[k][j]).sum()).collect())
        .collect()
}

proptest! {
    #[test]
    fn ring_axioms(p in poly(true), r in poly(true), s in poly(true)) {
        prop_assert_eq!(&p + &r, &r + &p);
        prop_assert_eq!(&p * &r, &r * &p);
        prop_assert_eq!(&(&p + &r) + &s, &p + &(&r + &s));
        prop_assert_eq!(&(&p * &r) * &s, &p * &(&r * &s));
        prop_assert_eq!(&p * &(&r + &s), &(&p * &r) + &(&p * &s));
        prop_assert!((&p - &p).is_zero());
        prop_assert_eq!(&p * &Polynomial::one(N), p.clone());
    }

    #[test]
    fn display_round_trips(p in poly(true)) {
        let text = p.to_string();
        let back = parse_polynomial(&text, N).unwrap();
        prop_assert_eq!(back.to_string(), text);
        prop_assert_eq!(back, p);
    }

    #[test]
    fn evaluation_is_a_homomorphism(p in poly(true), r in poly(true), v in assignment()) {
        let ep = p.substitute_numeric(&v).unwrap();
        let er = r.substitute_numeric(&v).unwrap();
        prop_assert_eq!((&p * &r).substitute_numeric(&v).unwrap(), &ep * &er);
        prop_assert_eq!((&p + &r).substitute_numeric(&v).unwrap(), ep + er);
    }

    #[test]
    fn determinant_is_multiplicative(a in matrix(2), b in matrix(2), c in matrix(3), e in matrix(3)) {
        prop_assert_eq!(rational_determinant(&mat_mul(&a, &b)), rational_determinant(&a) * rational_determinant(&b));
        prop_assert_eq!(rational_determinant(&mat_mul(&c, &e)), rational_determinant(&c) * rational_determinant(&e));
    }

    #[test]
    fn last_rep_exists_past_pigeonhole(n in 1usize..4, extra in 1usize..4, seed in proptest::collection::vec(0usize..100, 8)) {
        let lambda: Vec<usize> = seed.iter().take(n + extra).map(|s| s % n + 1).collect();
        prop_assume!(lambda.len() > n);
        let lr = last_rep_indices(&lambda).expect("a label repeats");
        prop_assert!(is_valid_last_rep(&lambda, lr));
        prop_assert!(lr.l1 < lr.l2);
        prop_assert_eq!(lambda[lr.l1], lambda[lr.l2]);
    }

    #[test]
    fn last_rep_absent_iff_distinct(lambda in proptest::collection::vec(1usize..5, 0..6)) {
        let mut sorted = lambda.clone();
        sorted.sort();
        sorted.dedup();
        prop_assert_eq!(last_rep_indices(&lambda).is_none(), sorted.len() == lambda.len());
    }

    #[test]
    fn z_is_invariant_under_row_permutations(
        u0 in 1usize..=2, u2 in 1usize..=2,
        rows in proptest::collection::vec(proptest::collection::vec(1usize..=2, 2), 2),
        swaps in proptest::collection::vec(any::<bool>(), 2),
    ) {
        let permuted: Vec<Vec<usize>> = rows
            .iter()
            .zip(&swaps)
            .map(|(r, &s)| if s { vec![r[1], r[0]] } else { r.clone() })
            .collect();
        let z1 = z_fern(&FernLabeling::new(3, 2, u0, u2, LevelLabeling::new(rows))).unwrap();
        let z2 = z_fern(&FernLabeling::new(3, 2, u0, u2, LevelLabeling::new(permuted))).unwrap();
        prop_assert_eq!(z1, z2);
    }

    #[test]
    fn d1_generators_are_signed_elementary_symmetric(n in 2usize..=4, seed in proptest::collection::vec(rational(), 16)) {
        let a: Vec<Vec<Rational>> = (0..n).map(|i| seed[i * n..(i + 1) * n].to_vec()).collect();
        let gens = extract_generators(DLinearSpec::new(1, n).unwrap()).unwrap();
        let env = a_assignment(&a);
        for k in 0..=n {
            let jk = gens.at(k, &Composition::zero(n)).substitute_numeric(&env).unwrap();
            let e = principal_minor_sum(&a, k);
            prop_assert_eq!(jk, if k % 2 == 0 { e } else { -e });
        }
    }

    #[test]
    fn certificates_are_sound(coeffs in proptest::collection::vec((rational(), monomial(false)), 1..4)) {
        let spec = DLinearSpec::new(2, 2).unwrap();
        let gens = extract_generators(spec).unwrap();
        let keys: Vec<_> = gens.nonunit().map(|(k, _)| k.clone()).collect();
        // lift each term to a common degree so the combination stays homogeneous
        let mut target = Polynomial::zero(N);
        for (idx, (c, m)) in coeffs.iter().enumerate() {
            let key = &keys[idx % keys.len()];
            let lift = 6 - 2 * key.k as u32;
            let pad = lift.saturating_sub(m.degree());
            if m.degree() > lift {
                continue;
            }
            let mono = m.mul(&Monomial::from_powers(N, [(Var::A(1, 1), pad)]).unwrap()).unwrap();
            target += &Polynomial::term(c.clone(), mono).try_mul(gens.get(key).unwrap()).unwrap();
        }
        let cert = membership(&gens, &target).unwrap();
        prop_assert!(cert.is_member());
        prop_assert!(cert.verify(&gens));
    }
}

/// Every classified state for n = 2 and d <= 3, over all alpha and end labels.
fn state_pool() -> &'static Vec<(TupleState, Side)> {
    static POOL: OnceLock<Vec<(TupleState, Side)>> = OnceLock::new();
    POOL.get_or_init(|| {
        let mut pool = Vec::new();
        for d in 1..=3u32 {
            for alpha in enumerate_compositions(2 * (d - 1), 2) {
                for (u0, un) in [(1, 1), (1, 2), (2, 1), (2, 2)] {
                    let ctx = InvolutionContext::new(d, 2, alpha.clone(), u0, un).unwrap();
                    for s in enumerate_states(&ctx).unwrap() {
                        let side = classify(&s).unwrap().side;
                        pool.push((s, side));
                    }
                }
            }
        }
        pool
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn tau_round_trips(idx in any::<prop::sample::Index>(), second in any::<bool>()) {
        let (s, side) = idx.get(state_pool());
        let variant = if second { Variant::Tau2 } else { Variant::Tau1 };
        match side {
            Side::DomainSide => prop_assert_eq!(&tau_inverse(&tau(s, variant).unwrap(), variant).unwrap(), s),
            Side::ImageSide => prop_assert_eq!(&tau(&tau_inverse(s, variant).unwrap(), variant).unwrap(), s),
        }
    }
}
