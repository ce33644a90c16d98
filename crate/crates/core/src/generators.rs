//! The differential of a d-linear map and the generators `J_(k, alpha)` of the
//! Jacobian ideal, computed from the determinant and from the signed
//! subset-permutation formula.

use std::collections::BTreeMap;

use serde::Serialize;

use crate::algebra::{Monomial, PolyMatrix, Polynomial, Rational, SignedMonomial, Var};
use crate::combinatorics::{
    enumerate_compositions, enumerate_level_labelings, enumerate_subset_permutations, Composition, LevelLabeling,
    SubsetPermutation,
};
use crate::error::{domain, Error, Result};

/// A d-linear map `f_i = x_i - (t * sum_j a[i,j] x_j)^d` on `n` variables.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct DLinearSpec {
    pub d: u32,
    pub n: usize,
}

impl DLinearSpec {
    pub fn new(d: u32, n: usize) -> Result<DLinearSpec> {
        if d == 0 || n == 0 {
            return domain(format!("need d >= 1 and n >= 1, got d={d} n={n}"));
        }
        Ok(DLinearSpec { d, n })
    }

    /// The linear form `sum_r a[i,r] x_r`.
    pub fn row_form(&self, i: usize) -> Polynomial {
        let n = self.n;
        let mut acc = Polynomial::zero(n);
        for r in 1..=n {
            acc += &(&Polynomial::a(n, i, r) * &Polynomial::x(n, r));
        }
        acc
    }

    /// The components `f_i` of the map.
    pub fn components(&self) -> Vec<Polynomial> {
        let n = self.n;
        (1..=n)
            .map(|i| &Polynomial::x(n, i) - &(&Polynomial::t(n) * &self.row_form(i)).pow(self.d))
            .collect()
    }
}

/// Key of a generator: row count `k` and a composition of weight `k(d-1)`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct JKey {
    pub k: usize,
    pub alpha: Composition,
}

impl JKey {
    pub fn new(k: usize, alpha: Composition) -> JKey {
        JKey { k, alpha }
    }

    fn validate(&self, spec: DLinearSpec) -> Result<()> {
        if self.k > spec.n || self.alpha.len() != spec.n || self.alpha.weight() as usize != self.k * (spec.d as usize - 1)
        {
            return domain(format!("key (k={}, alpha={}) invalid for d={} n={}", self.k, self.alpha, spec.d, spec.n));
        }
        Ok(())
    }
}

/// Every generator of `J_{d,n}`, including the unit at `k = 0` and explicit zeros.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GeneratorSet {
    pub spec: DLinearSpec,
    pub entries: BTreeMap<JKey, Polynomial>,
}

impl GeneratorSet {
    pub fn get(&self, key: &JKey) -> Option<&Polynomial> {
        self.entries.get(key)
    }

    /// The generator for `(k, alpha)`, zero when the key is absent.
    pub fn at(&self, k: usize, alpha: &Composition) -> Polynomial {
        self.entries
            .get(&JKey::new(k, alpha.clone()))
            .cloned()
            .unwrap_or_else(|| Polynomial::zero(self.spec.n))
    }

    /// Generators with `k >= 1`, the ones that span the ideal.
    pub fn nonunit(&self) -> impl Iterator<Item = (&JKey, &Polynomial)> {
        self.entries.iter().filter(|(key, _)| key.k >= 1)
    }
}

/// All keys `(k, alpha)` with `0 <= k <= n`, `alpha` in `C(k(d-1), n)`.
pub fn all_keys(spec: DLinearSpec) -> Vec<JKey> {
    (0..=spec.n)
        .flat_map(|k| {
            enumerate_compositions(k as u32 * (spec.d - 1), spec.n)
                .into_iter()
                .map(move |alpha| JKey::new(k, alpha))
        })
        .collect()
}

/// `D(f)` with entries `delta_{ij} - t d a[i,j] (t sum_r a[i,r] x_r)^{d-1}`.
pub fn differential_matrix(spec: DLinearSpec) -> PolyMatrix {
    let n = spec.n;
    let d = spec.d;
    let t = Polynomial::t(n);
    let scaled: Vec<Polynomial> = (1..=n)
        .map(|i| (&t * &spec.row_form(i)).pow(d - 1).scale(&Rational::from_integer(d.into())))
        .collect();
    PolyMatrix::from_fn(n, |i, j| {
        let delta = if i == j { Polynomial::one(n) } else { Polynomial::zero(n) };
        &delta - &(&(&t * &Polynomial::a(n, i + 1, j + 1)) * &scaled[i])
    })
    .expect("square by construction")
}

/// Expands `det D(f)` and reads off `J_(k, alpha)` as the coefficient of
/// `d^k t^{dk} x^alpha`.
pub fn extract_generators(spec: DLinearSpec) -> Result<GeneratorSet> {
    let n = spec.n;
    let d = spec.d;
    let det = differential_matrix(spec).determinant(n);
    let mut entries: BTreeMap<JKey, Polynomial> =
        all_keys(spec).into_iter().map(|k| (k, Polynomial::zero(n))).collect();
    for (xt, coeff) in det.split_xt() {
        let e = xt.t_degree();
        if e % d != 0 {
            return Err(Error::Internal(format!("determinant term {xt} has t-degree not divisible by d={d}")));
        }
        let k = (e / d) as usize;
        let alpha = Composition::new(xt.x_exponents());
        let key = JKey::new(k, alpha);
        let slot = entries
            .get_mut(&key)
            .ok_or_else(|| Error::Internal(format!("determinant term {xt} does not match d^k t^(dk) x^alpha")))?;
        let scale = Rational::new(1.into(), num_traits::pow(num_bigint::BigInt::from(d), k));
        *slot = coeff.scale(&scale);
    }
    Ok(GeneratorSet { spec, entries })
}

/// `(-1)^{cycles(sigma)} prod_i a[S(i), sigma(S(i))] prod_j a[S(i), nu(i,j)]`.
pub fn weight_w(spec: DLinearSpec, perm: &SubsetPermutation, nu: &LevelLabeling) -> Result<SignedMonomial> {
    if nu.levels() != perm.order() {
        return domain(format!("labeling has {} levels but |S| = {}", nu.levels(), perm.order()));
    }
    nu.validate(perm.order(), spec.d, spec.n)?;
    let mut powers = Vec::new();
    for (i, (&s, &img)) in perm.set().iter().zip(perm.images()).enumerate() {
        powers.push((Var::A(s, img), 1));
        for &l in &nu.rows()[i] {
            powers.push((Var::A(s, l), 1));
        }
    }
    Ok(SignedMonomial {
        negative: perm.cycle_count() % 2 == 1,
        monomial: Monomial::from_powers(spec.n, powers)?,
    })
}

/// `J_(k, alpha)` as the sum of `w(sigma, nu)` over `|S| = k` and `nu` in `I(alpha, k)`.
pub fn generator_direct(spec: DLinearSpec, key: &JKey) -> Result<Polynomial> {
    key.validate(spec)?;
    let labelings = enumerate_level_labelings(&key.alpha, key.k, spec.d)?;
    let mut acc = Polynomial::zero(spec.n);
    for perm in enumerate_subset_permutations(spec.n, key.k)? {
        for nu in &labelings {
            let w = weight_w(spec, &perm, nu)?;
            let c = if w.negative { -Rational::from_integer(1.into()) } else { Rational::from_integer(1.into()) };
            acc.add_term(w.monomial, c);
        }
    }
    Ok(acc)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct GeneratorMismatch {
    pub key: JKey,
    pub from_determinant: String,
    pub from_formula: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CrossCheckReport {
    pub spec: DLinearSpec,
    pub keys_checked: usize,
    pub mismatches: Vec<GeneratorMismatch>,
}

impl CrossCheckReport {
    pub fn passed(&self) -> bool {
        self.mismatches.is_empty()
    }
}

/// Compares [`extract_generators`] with [`generator_direct`] on every key.
pub fn cross_check_generators(spec: DLinearSpec) -> Result<CrossCheckReport> {
    let gens = extract_generators(spec)?;
    let mut mismatches = Vec::new();
    for (key, poly) in &gens.entries {
        let direct = generator_direct(spec, key)?;
        if &direct != poly {
            mismatches.push(GeneratorMismatch {
                key: key.clone(),
                from_determinant: poly.to_string(),
                from_formula: direct.to_string(),
            });
        }
    }
    Ok(CrossCheckReport { spec, keys_checked: gens.entries.len(), mismatches })
}

/// True when `p` is zero or homogeneous of `a`-degree `deg`.
pub(crate) fn is_homogeneous_of(p: &Polynomial, deg: u32) -> bool {
    p.is_zero() || p.homogeneous_a_degree() == Some(deg)
}

pub(crate) fn unit_or_zero(n: usize, cond: bool) -> Polynomial {
    if cond {
        Polynomial::one(n)
    } else {
        Polynomial::zero(n)
    }
}
