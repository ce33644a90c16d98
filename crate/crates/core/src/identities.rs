//! The two generalized Cayley-Hamilton identities, the auxiliary two-variable
//! relation, and numeric Cayley-Hamilton spot checks.

use std::collections::BTreeMap;

use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::algebra::{rational_determinant, Polynomial, Rational, Var};
use crate::combinatorics::{
    binomial, enumerate_compositions, enumerate_level_labelings, subsets, Composition, LevelLabeling,
};
use crate::error::{domain, Result};
use crate::fern::{z_fern, FernLabeling};
use crate::generators::{extract_generators, DLinearSpec, GeneratorSet};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub enum IdentityKind {
    Identity1,
    Identity2,
}

/// One instance of the first or second identity.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct IdentityInstance {
    pub kind: IdentityKind,
    pub d: u32,
    pub n: usize,
    pub alpha: Composition,
    pub u0: usize,
    pub un: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub beta: Option<Vec<usize>>,
}

impl IdentityInstance {
    pub fn identity1(d: u32, n: usize, alpha: Composition, u0: usize, un: usize) -> IdentityInstance {
        IdentityInstance { kind: IdentityKind::Identity1, d, n, alpha, u0, un, beta: None }
    }

    pub fn identity2(d: u32, n: usize, alpha: Composition, u0: usize, un: usize, beta: Vec<usize>) -> IdentityInstance {
        IdentityInstance { kind: IdentityKind::Identity2, d, n, alpha, u0, un, beta: Some(beta) }
    }

    pub fn spec(&self) -> Result<DLinearSpec> {
        DLinearSpec::new(self.d, self.n)
    }

    pub fn validate(&self) -> Result<()> {
        let spec = self.spec()?;
        if self.alpha.len() != spec.n || self.alpha.weight() as usize != spec.n * (spec.d as usize - 1) {
            return domain(format!("alpha {} is not in C(n(d-1), n)", self.alpha));
        }
        for u in [self.u0, self.un] {
            if u == 0 || u > spec.n {
                return domain(format!("end label {u} outside [1,{}]", spec.n));
            }
        }
        match self.kind {
            IdentityKind::Identity1 => {
                if self.beta.is_some() {
                    return domain("the first identity takes no beta");
                }
            }
            IdentityKind::Identity2 => {
                if spec.n < 2 {
                    return domain("the second identity requires n >= 2");
                }
                if self.u0 == self.un {
                    return domain("the second identity requires u0 != un");
                }
                let beta = self.beta.as_ref().ok_or_else(|| crate::Error::Domain("the second identity needs beta".into()))?;
                LevelLabeling::new(vec![beta.clone()]).validate(1, spec.d, spec.n)?;
            }
        }
        Ok(())
    }
}

/// One product `z(fern_{d,n-k}, (u0, un; nu)) * J_(k, alpha1)` of an identity.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IdentitySummand {
    pub k: usize,
    pub alpha1: Composition,
    pub nu: LevelLabeling,
    pub z: Polynomial,
    pub generator: Polynomial,
    pub product: Polynomial,
}

/// Expands the left-hand side of an identity into its summands. For the first
/// identity `k` runs over `0..=n`; for the second over `0..n` with `nu(1) = beta`.
pub fn identity_summands(inst: &IdentityInstance, gens: &GeneratorSet) -> Result<Vec<IdentitySummand>> {
    inst.validate()?;
    let spec = inst.spec()?;
    if gens.spec != spec {
        return domain("generator set built for a different (d, n)");
    }
    let (n, d) = (spec.n, spec.d);
    let k_max = match inst.kind {
        IdentityKind::Identity1 => n,
        IdentityKind::Identity2 => n - 1,
    };
    let mut out = Vec::new();
    for k in 0..=k_max {
        for alpha1 in enumerate_compositions(k as u32 * (d - 1), n) {
            let Some(rest) = inst.alpha.checked_sub(&alpha1) else {
                continue;
            };
            let generator = gens.at(k, &alpha1);
            for nu in enumerate_level_labelings(&rest, n - k, d)? {
                if let Some(beta) = &inst.beta {
                    if nu.row(1) != beta.as_slice() {
                        continue;
                    }
                }
                let z = z_fern(&FernLabeling::new(d, n, inst.u0, inst.un, nu.clone()))?;
                let product = &z * &generator;
                out.push(IdentitySummand { k, alpha1: alpha1.clone(), nu, z, generator: generator.clone(), product });
            }
        }
    }
    Ok(out)
}

pub fn identity_lhs(inst: &IdentityInstance, gens: &GeneratorSet) -> Result<Polynomial> {
    let mut acc = Polynomial::zero(inst.n);
    for s in identity_summands(inst, gens)? {
        acc += &s.product;
    }
    Ok(acc)
}

/// Left-hand side of the first identity; zero when the identity holds.
pub fn identity1_lhs(inst: &IdentityInstance, gens: &GeneratorSet) -> Result<Polynomial> {
    if inst.kind != IdentityKind::Identity1 {
        return domain("expected a first-identity instance");
    }
    identity_lhs(inst, gens)
}

/// Left-hand side of the second identity; zero when the identity holds.
pub fn identity2_lhs(inst: &IdentityInstance, gens: &GeneratorSet) -> Result<Polynomial> {
    if inst.kind != IdentityKind::Identity2 {
        return domain("expected a second-identity instance");
    }
    identity_lhs(inst, gens)
}

/// Every first-identity instance for `(d, n)`: all `alpha` in `C(n(d-1), n)`, all `(u0, un)`.
pub fn all_identity1_instances(d: u32, n: usize) -> Vec<IdentityInstance> {
    let mut out = Vec::new();
    for alpha in enumerate_compositions(n as u32 * (d - 1), n) {
        for u0 in 1..=n {
            for un in 1..=n {
                out.push(IdentityInstance::identity1(d, n, alpha.clone(), u0, un));
            }
        }
    }
    out
}

/// Every second-identity instance for `(d, n)` whose `beta` fits inside `alpha`
/// (other choices leave the sum empty).
pub fn all_identity2_instances(d: u32, n: usize) -> Vec<IdentityInstance> {
    let mut out = Vec::new();
    if n < 2 {
        return out;
    }
    let betas = crate::combinatorics::all_tuples(n, (d - 1) as usize);
    for alpha in enumerate_compositions(n as u32 * (d - 1), n) {
        for u0 in 1..=n {
            for un in (1..=n).filter(|&un| un != u0) {
                for beta in &betas {
                    if alpha.checked_sub(&Composition::content_of(beta.iter().copied(), n)).is_some() {
                        out.push(IdentityInstance::identity2(d, n, alpha.clone(), u0, un, beta.clone()));
                    }
                }
            }
        }
    }
    out
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct IdentityOutcome {
    pub instance: IdentityInstance,
    pub summands: usize,
    pub lhs: String,
    pub zero: bool,
    /// Every summand homogeneous of `a`-degree `n d`.
    pub graded: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct IdentitySweepReport {
    pub d: u32,
    pub n: usize,
    pub kind: IdentityKind,
    pub checked: usize,
    pub failures: usize,
    pub outcomes: Vec<IdentityOutcome>,
}

impl IdentitySweepReport {
    pub fn passed(&self) -> bool {
        self.failures == 0
    }
}

pub fn check_instance(inst: &IdentityInstance, gens: &GeneratorSet) -> Result<IdentityOutcome> {
    let summands = identity_summands(inst, gens)?;
    let total_degree = inst.n as u32 * inst.d;
    let graded = summands
        .iter()
        .all(|s| crate::generators::is_homogeneous_of(&s.product, total_degree));
    let mut lhs = Polynomial::zero(inst.n);
    for s in &summands {
        lhs += &s.product;
    }
    Ok(IdentityOutcome {
        instance: inst.clone(),
        summands: summands.len(),
        zero: lhs.is_zero(),
        lhs: lhs.to_string(),
        graded,
    })
}

/// Checks a list of instances (in parallel, results in input order).
pub fn sweep(kind: IdentityKind, d: u32, n: usize, instances: &[IdentityInstance]) -> Result<IdentitySweepReport> {
    let gens = extract_generators(DLinearSpec::new(d, n)?)?;
    let outcomes = instances
        .par_iter()
        .map(|inst| check_instance(inst, &gens))
        .collect::<Result<Vec<_>>>()?;
    let failures = outcomes.iter().filter(|o| !o.zero || !o.graded).count();
    Ok(IdentitySweepReport { d, n, kind, checked: outcomes.len(), failures, outcomes })
}

pub fn sweep_identity1(d: u32, n: usize) -> Result<IdentitySweepReport> {
    sweep(IdentityKind::Identity1, d, n, &all_identity1_instances(d, n))
}

pub fn sweep_identity2(d: u32, n: usize) -> Result<IdentitySweepReport> {
    sweep(IdentityKind::Identity2, d, n, &all_identity2_instances(d, n))
}

fn two_row_labeling(d: u32, alpha1: &Composition, alpha2: &Composition) -> LevelLabeling {
    let row = |a: &Composition| {
        let mut r = vec![1; a.part(1) as usize];
        r.extend(std::iter::repeat_n(2, a.part(2) as usize));
        r
    };
    debug_assert_eq!(alpha1.weight(), d - 1);
    LevelLabeling::new(vec![row(alpha1), row(alpha2)])
}

fn a_monomial_poly(n: usize, powers: &[(usize, usize, u32)]) -> Polynomial {
    let mut p = Polynomial::one(n);
    for &(i, j, e) in powers {
        p = &p * &Polynomial::a(n, i, j).pow(e);
    }
    p
}

fn relation_rhs(
    gens: &GeneratorSet,
    alpha1: &Composition,
    alpha2: &Composition,
    u: usize,
    v: usize,
) -> Result<(LevelLabeling, Polynomial)> {
    let spec = gens.spec;
    let (d, n) = (spec.d, spec.n);
    if n != 2 {
        return domain("the relation is stated for n = 2");
    }
    for a in [alpha1, alpha2] {
        if a.len() != 2 || a.weight() != d - 1 {
            return domain(format!("{a} is not in C(d-1, 2)"));
        }
    }
    if alpha1.part(1) == 0 {
        return domain("alpha1(1) must be at least 1");
    }
    for w in [u, v] {
        if !(1..=2).contains(&w) {
            return domain(format!("label {w} outside [1,2]"));
        }
    }
    let delta = u32::from(u == 2);
    let alpha1_prime = Composition::new(vec![alpha1.part(1) - delta, alpha1.part(2) + delta]);
    let alpha1_second = Composition::new(vec![alpha1.part(1) - 1, alpha1.part(2) + 1]);
    let dm1 = (d - 1) as u64;
    let frac = |num: Polynomial, k: u32| -> Polynomial {
        num.scale(&Rational::new(1.into(), binomial(dm1, k as u64).into()))
    };

    let row2 = a_monomial_poly(n, &[(2, 1, alpha2.part(1)), (2, 2, alpha2.part(2))]);
    let row1 = a_monomial_poly(n, &[(1, 1, alpha1.part(1)), (1, 2, alpha1.part(2))]);
    let t1 = frac(&Polynomial::a(n, 2, u) * &row2, alpha1.part(1) - 1) * gens.at(1, &alpha1_second);
    let t2 = frac(&Polynomial::a(n, 2, 2) * &row2, alpha1.part(2) + delta) * gens.at(1, &alpha1_prime);
    let t3 = frac(&Polynomial::a(n, 1, u) * &row1, alpha2.part(1)) * gens.at(1, alpha2);
    Ok((two_row_labeling(d, alpha1, alpha2), &(&t1 - &t2) + &t3))
}

/// LHS minus RHS of the two-variable relation expressing a length-2 fern
/// element through three generators with `k = 1`, with the free end label
/// set to `v`. Binomial denominators are `binom(d-1, .)`.
pub fn check_relation_2_1s(
    gens: &GeneratorSet,
    alpha1: &Composition,
    alpha2: &Composition,
    u: usize,
    v: usize,
) -> Result<Polynomial> {
    let (nu, rhs) = relation_rhs(gens, alpha1, alpha2, u, v)?;
    let lhs = z_fern(&FernLabeling::new(gens.spec.d, 2, u, v, nu))?;
    Ok(&lhs - &rhs)
}

/// The same relation read with the fern end labels as `(v, u)` and the
/// right-hand side negated, matching the sign of the generators used here:
/// returns `z(fern, (v, u; nu)) + RHS`.
pub fn check_relation_2_1s_reoriented(
    gens: &GeneratorSet,
    alpha1: &Composition,
    alpha2: &Composition,
    u: usize,
    v: usize,
) -> Result<Polynomial> {
    let (nu, rhs) = relation_rhs(gens, alpha1, alpha2, u, v)?;
    let lhs = z_fern(&FernLabeling::new(gens.spec.d, 2, v, u, nu))?;
    Ok(&lhs + &rhs)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RelationEntry {
    pub alpha1: Composition,
    pub alpha2: Composition,
    pub u: usize,
    pub v: usize,
    pub difference: String,
    pub zero: bool,
    /// Zero, or homogeneous of `a`-degree `2d`.
    pub homogeneous: bool,
    /// See [`check_relation_2_1s_reoriented`].
    pub reoriented_difference: String,
    pub reoriented_zero: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RelationReport {
    pub d: u32,
    pub triples: usize,
    pub entries: Vec<RelationEntry>,
    /// Values of `v` whose difference vanishes for every `(alpha1, alpha2, u)` in the grid.
    pub v_zero_across_grid: Vec<usize>,
    pub reoriented_v_zero_across_grid: Vec<usize>,
}

impl RelationReport {
    /// Every `(alpha1, alpha2, u)` has an entry for both `v`, each homogeneous or zero.
    pub fn complete(&self) -> bool {
        self.triples > 0
            && self.entries.len() == 2 * self.triples
            && self.entries.chunks(2).all(|p| p[0].v == 1 && p[1].v == 2)
            && self.entries.iter().all(|e| e.homogeneous)
    }
}

/// Admissible `(alpha1, alpha2, u)` triples for degree `d`.
pub fn relation_grid(d: u32) -> Vec<(Composition, Composition, usize)> {
    let comps = enumerate_compositions(d.saturating_sub(1), 2);
    let mut out = Vec::new();
    for a1 in comps.iter().filter(|a| a.part(1) >= 1) {
        for a2 in &comps {
            for u in 1..=2 {
                out.push((a1.clone(), a2.clone(), u));
            }
        }
    }
    out
}

/// Evaluates the relation for every admissible triple and both `v`.
pub fn relation_report(gens: &GeneratorSet, restrict: Option<(&Composition, &Composition, usize)>) -> Result<RelationReport> {
    let d = gens.spec.d;
    let grid: Vec<_> = match restrict {
        Some((a1, a2, u)) => vec![(a1.clone(), a2.clone(), u)],
        None => relation_grid(d),
    };
    let mut entries = Vec::new();
    for (a1, a2, u) in &grid {
        for v in 1..=2 {
            let diff = check_relation_2_1s(gens, a1, a2, *u, v)?;
            let reoriented = check_relation_2_1s_reoriented(gens, a1, a2, *u, v)?;
            entries.push(RelationEntry {
                reoriented_zero: reoriented.is_zero(),
                reoriented_difference: reoriented.to_string(),
                alpha1: a1.clone(),
                alpha2: a2.clone(),
                u: *u,
                v,
                zero: diff.is_zero(),
                homogeneous: crate::generators::is_homogeneous_of(&diff, 2 * d),
                difference: diff.to_string(),
            });
        }
    }
    let v_zero_across_grid = (1..=2)
        .filter(|&v| entries.iter().filter(|e| e.v == v).all(|e| e.zero))
        .collect();
    let reoriented_v_zero_across_grid = (1..=2)
        .filter(|&v| entries.iter().filter(|e| e.v == v).all(|e| e.reoriented_zero))
        .collect();
    Ok(RelationReport { d, triples: grid.len(), entries, v_zero_across_grid, reoriented_v_zero_across_grid })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CayleyHamiltonReport {
    pub n: usize,
    pub trials: usize,
    pub seed: u64,
    /// Trials where the symbolic first identity at `d = 1` evaluated to nonzero.
    pub symbolic_failures: usize,
    /// Trials where `sum_k (-1)^k e_k(A) A^{n-k}` was not the zero matrix.
    pub direct_failures: usize,
}

impl CayleyHamiltonReport {
    pub fn passed(&self) -> bool {
        self.symbolic_failures == 0 && self.direct_failures == 0
    }
}

type Matrix = Vec<Vec<Rational>>;

fn mat_mul(a: &Matrix, b: &Matrix) -> Matrix {
    let n = a.len();
    (0..n)
        .map(|i| {
            (0..n)
                .map(|j| (0..n).fold(Rational::zero(), |acc, k| acc + &a[i][k] * &b[k][j]))
                .collect()
        })
        .collect()
}

/// `e_k(A)`: the sum of all `k x k` principal minors.
pub fn principal_minor_sum(a: &[Vec<Rational>], k: usize) -> Rational {
    subsets(a.len(), k)
        .into_iter()
        .map(|s| {
            let sub: Matrix = s.iter().map(|&i| s.iter().map(|&j| a[i - 1][j - 1].clone()).collect()).collect();
            rational_determinant(&sub)
        })
        .fold(Rational::zero(), |acc, x| acc + x)
}

/// A random `n x n` matrix with entries `p/q`, `|p| <= 9`, `1 <= q <= 5`.
pub fn random_rational_matrix(rng: &mut impl Rng, n: usize) -> Matrix {
    (0..n)
        .map(|_| {
            (0..n)
                .map(|_| Rational::new(rng.gen_range(-9i64..=9).into(), rng.gen_range(1i64..=5).into()))
                .collect()
        })
        .collect()
}

pub fn a_assignment(a: &[Vec<Rational>]) -> BTreeMap<Var, Rational> {
    let mut m = BTreeMap::new();
    for (i, row) in a.iter().enumerate() {
        for (j, v) in row.iter().enumerate() {
            m.insert(Var::A(i + 1, j + 1), v.clone());
        }
    }
    m
}

/// Cayley-Hamilton on random rational matrices, both through the first identity at
/// `d = 1` and directly from principal minors.
pub fn cayley_hamilton_numeric(n: usize, trials: usize, seed: u64) -> Result<CayleyHamiltonReport> {
    let spec = DLinearSpec::new(1, n)?;
    let gens = extract_generators(spec)?;
    let mut lhs = Vec::new();
    for u0 in 1..=n {
        for un in 1..=n {
            let inst = IdentityInstance::identity1(1, n, Composition::zero(n), u0, un);
            lhs.push(identity1_lhs(&inst, &gens)?);
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut symbolic_failures = 0;
    let mut direct_failures = 0;
    for _ in 0..trials {
        let a = random_rational_matrix(&mut rng, n);
        let asg = a_assignment(&a);
        let mut bad = false;
        for p in &lhs {
            bad |= !p.substitute_numeric(&asg)?.is_zero();
        }
        symbolic_failures += usize::from(bad);

        // powers[j] = A^j
        let identity: Matrix = (0..n)
            .map(|i| (0..n).map(|j| if i == j { Rational::one() } else { Rational::zero() }).collect())
            .collect();
        let mut powers = vec![identity];
        for j in 1..=n {
            let next = mat_mul(&powers[j - 1], &a);
            powers.push(next);
        }
        let mut residual: Matrix = vec![vec![Rational::zero(); n]; n];
        for k in 0..=n {
            let mut e = principal_minor_sum(&a, k);
            if k % 2 == 1 {
                e = -e;
            }
            for i in 0..n {
                for j in 0..n {
                    residual[i][j] += &e * &powers[n - k][i][j];
                }
            }
        }
        direct_failures += usize::from(residual.iter().flatten().any(|x| !x.is_zero()));
    }
    Ok(CayleyHamiltonReport { n, trials, seed, symbolic_failures, direct_failures })
}
