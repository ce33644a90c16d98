//! Membership of homogeneous `a`-polynomials in `J_{d,n}` by exact linear
//! algebra on a fixed degree slice, with re-checkable certificates.

use std::collections::BTreeMap;

use num_traits::{One, Zero};
use rayon::prelude::*;
use serde::Serialize;

use crate::algebra::{a_monomials, Monomial, Polynomial, Rational};
use crate::combinatorics::{enumerate_compositions, Composition, LevelLabeling};
use crate::error::{domain, Result};
use crate::fern::{z_fern, FernLabeling};
use crate::generators::{extract_generators, DLinearSpec, GeneratorSet, JKey};
use crate::inverse::{admissible_alphas, inverse_series};

/// One spanning vector `multiplier * J_key` of a degree slice.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BasisRow {
    pub key: JKey,
    pub multiplier: Monomial,
    pub product: Polynomial,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HomogeneousBasis {
    pub spec: DLinearSpec,
    pub degree: u32,
    pub rows: Vec<BasisRow>,
}

/// Every `m * J_(k, alpha)` with `k >= 1`, `kd <= degree` and `m` an `a`-monomial
/// of degree `degree - kd`.
pub fn build_basis(gens: &GeneratorSet, degree: u32) -> HomogeneousBasis {
    let spec = gens.spec;
    let mut rows = Vec::new();
    for (key, g) in gens.nonunit() {
        let gdeg = key.k as u32 * spec.d;
        if gdeg > degree {
            continue;
        }
        for m in a_monomials(spec.n, degree - gdeg) {
            let product = g.mul_monomial(&m).expect("same ambient n");
            rows.push(BasisRow { key: key.clone(), multiplier: m, product });
        }
    }
    HomogeneousBasis { spec, degree, rows }
}

type SparseVec = BTreeMap<usize, Rational>;

#[derive(Clone, Debug)]
struct Pivot {
    row: SparseVec,
    /// `row = sum_j combo[j] * basis.rows[j].product`
    combo: SparseVec,
}

fn axpy(target: &mut SparseVec, f: &Rational, src: &SparseVec) {
    for (c, v) in src {
        let entry = target.entry(*c).or_insert_with(Rational::zero);
        *entry -= f * v;
        if entry.is_zero() {
            target.remove(c);
        }
    }
}

/// Row-echelon form of a degree slice of the ideal.
#[derive(Clone, Debug)]
pub struct MembershipSolver {
    basis: HomogeneousBasis,
    columns: BTreeMap<Monomial, usize>,
    column_monomials: Vec<Monomial>,
    pivots: BTreeMap<usize, Pivot>,
}

impl MembershipSolver {
    /// Eliminates the basis rows, sparsest first; each pivot leads at its smallest column.
    pub fn new(gens: &GeneratorSet, degree: u32) -> MembershipSolver {
        let basis = build_basis(gens, degree);
        let column_monomials = a_monomials(gens.spec.n, degree);
        let columns: BTreeMap<Monomial, usize> =
            column_monomials.iter().cloned().enumerate().map(|(i, m)| (m, i)).collect();
        let mut solver = MembershipSolver { basis, columns, column_monomials, pivots: BTreeMap::new() };
        let mut order: Vec<usize> = (0..solver.basis.rows.len()).collect();
        order.sort_by_key(|&r| solver.basis.rows[r].product.len());
        for r in order {
            let vec = solver.to_vec(&solver.basis.rows[r].product).expect("basis rows are homogeneous");
            let mut combo = SparseVec::new();
            combo.insert(r, Rational::one());
            let (rest, combo) = solver.reduce(vec, combo);
            if let Some((&lead, lv)) = rest.iter().next() {
                let inv = lv.recip();
                let row = rest.iter().map(|(c, v)| (*c, v * &inv)).collect();
                let combo = combo.iter().map(|(c, v)| (*c, v * &inv)).collect();
                solver.pivots.insert(lead, Pivot { row, combo });
            }
        }
        solver
    }

    fn to_vec(&self, p: &Polynomial) -> Option<SparseVec> {
        p.terms().map(|(m, c)| self.columns.get(m).map(|&i| (i, c.clone()))).collect()
    }

    /// Reduces `vec` against the pivots, keeping `vec = original - sum combo_j row_j`
    /// (with `combo` carrying the sign of whatever it started with).
    fn reduce(&self, mut vec: SparseVec, mut combo: SparseVec) -> (SparseVec, SparseVec) {
        let mut cursor = 0;
        loop {
            let next = vec.range(cursor..).map(|(c, _)| *c).find(|c| self.pivots.contains_key(c));
            let Some(col) = next else { break };
            let f = vec[&col].clone();
            let pivot = &self.pivots[&col];
            axpy(&mut vec, &f, &pivot.row);
            axpy(&mut combo, &f, &pivot.combo);
            cursor = col + 1;
        }
        (vec, combo)
    }

    pub fn degree(&self) -> u32 {
        self.basis.degree
    }

    pub fn rank(&self) -> usize {
        self.pivots.len()
    }

    pub fn row_count(&self) -> usize {
        self.basis.rows.len()
    }

    pub fn column_count(&self) -> usize {
        self.column_monomials.len()
    }

    pub fn basis(&self) -> &HomogeneousBasis {
        &self.basis
    }

    /// The reduced echelon rows as polynomials, in pivot-column order.
    pub fn echelon_rows(&self) -> Vec<Polynomial> {
        let n = self.basis.spec.n;
        self.pivots
            .values()
            .map(|p| {
                let terms = p.row.iter().map(|(c, v)| (v.clone(), self.column_monomials[*c].clone()));
                Polynomial::from_terms(n, terms).expect("same ambient n")
            })
            .collect()
    }

    /// Expresses `p` in the slice; `p` must be zero or homogeneous of the solver's degree.
    pub fn solve(&self, p: &Polynomial) -> Result<MembershipCertificate> {
        let n = self.basis.spec.n;
        if p.n() != n || !p.is_free_of_xt() {
            return domain("membership target must be a polynomial in the a-variables of the same n");
        }
        if !p.is_zero() && p.homogeneous_a_degree() != Some(self.basis.degree) {
            return domain(format!("target is not homogeneous of degree {}", self.basis.degree));
        }
        let vec = self.to_vec(p).expect("homogeneous of slice degree");
        // combo accumulates with a negative sign; see `reduce`
        let (rest, neg_combo) = self.reduce(vec, SparseVec::new());
        let mut grouped: BTreeMap<JKey, Polynomial> = BTreeMap::new();
        for (r, c) in neg_combo {
            let row = &self.basis.rows[r];
            let entry = grouped.entry(row.key.clone()).or_insert_with(|| Polynomial::zero(n));
            entry.add_term(row.multiplier.clone(), -c);
        }
        let combination = grouped.into_iter().filter(|(_, c)| !c.is_zero()).collect();
        let residual = Polynomial::from_terms(
            n,
            rest.into_iter().map(|(c, v)| (v, self.column_monomials[c].clone())),
        )?;
        Ok(MembershipCertificate { target: p.clone(), combination, residual })
    }
}

/// `target = sum coefficient * J_key + residual`; membership iff the residual is zero.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MembershipCertificate {
    pub target: Polynomial,
    pub combination: Vec<(JKey, Polynomial)>,
    pub residual: Polynomial,
}

impl MembershipCertificate {
    pub fn is_member(&self) -> bool {
        self.residual.is_zero()
    }

    /// Re-multiplies the combination against `gens` and compares with the target.
    pub fn verify(&self, gens: &GeneratorSet) -> bool {
        let mut acc = self.residual.clone();
        for (key, coeff) in &self.combination {
            let Some(g) = gens.get(key) else { return false };
            acc += &(coeff * g);
        }
        acc == self.target
    }

    pub fn to_json(&self) -> CertificateJson {
        CertificateJson {
            member: self.is_member(),
            combination: self
                .combination
                .iter()
                .map(|(key, c)| CombinationEntry { k: key.k, alpha: key.alpha.clone(), coeff: c.to_string() })
                .collect(),
            residual: self.residual.to_string(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CombinationEntry {
    pub k: usize,
    pub alpha: Composition,
    pub coeff: String,
}

/// Serialized form of a certificate.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CertificateJson {
    pub member: bool,
    pub combination: Vec<CombinationEntry>,
    pub residual: String,
}

/// Decides whether `p` lies in `J_{d,n}`.
pub fn membership(gens: &GeneratorSet, p: &Polynomial) -> Result<MembershipCertificate> {
    if p.n() != gens.spec.n || !p.is_free_of_xt() {
        return domain("membership target must be a polynomial in the a-variables of the same n");
    }
    if p.is_zero() {
        return Ok(MembershipCertificate {
            target: p.clone(),
            combination: Vec::new(),
            residual: p.clone(),
        });
    }
    let Some(degree) = p.homogeneous_a_degree() else {
        return domain("membership target is not homogeneous");
    };
    MembershipSolver::new(gens, degree).solve(p)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FernCase {
    pub u0: usize,
    pub u2: usize,
    pub nu: LevelLabeling,
    pub z: String,
    pub certificate: CertificateJson,
    pub certificate_valid: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FernLemmaReport {
    pub d: u32,
    pub rank: usize,
    pub rows: usize,
    pub columns: usize,
    pub cases: Vec<FernCase>,
    pub failures: usize,
}

impl FernLemmaReport {
    pub fn passed(&self) -> bool {
        self.failures == 0
    }
}

/// Row of `d - 1` labels with content `c` in `C(d-1, 2)`: ones first.
fn sorted_row(c: &Composition) -> Vec<usize> {
    let mut r = vec![1; c.part(1) as usize];
    r.extend(std::iter::repeat_n(2, c.part(2) as usize));
    r
}

/// Certifies `z(fern_{d,2}, (u0, u2; nu))` in `J_{d,2}` for all end labels and
/// all 2-level labelings up to order within rows.
pub fn verify_fern_lemmas(d: u32) -> Result<FernLemmaReport> {
    let spec = DLinearSpec::new(d, 2)?;
    let gens = extract_generators(spec)?;
    let solver = MembershipSolver::new(&gens, 2 * d);
    let rows = enumerate_compositions(d - 1, 2);
    let mut inputs = Vec::new();
    for u0 in 1..=2 {
        for u2 in 1..=2 {
            for r1 in &rows {
                for r2 in &rows {
                    inputs.push((u0, u2, LevelLabeling::new(vec![sorted_row(r1), sorted_row(r2)])));
                }
            }
        }
    }
    let cases = inputs
        .into_par_iter()
        .map(|(u0, u2, nu)| {
            let z = z_fern(&FernLabeling::new(d, 2, u0, u2, nu.clone()))?;
            let cert = solver.solve(&z)?;
            Ok(FernCase {
                u0,
                u2,
                nu,
                z: z.to_string(),
                certificate_valid: cert.verify(&gens),
                certificate: cert.to_json(),
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let failures = cases.iter().filter(|c| !c.certificate.member || !c.certificate_valid).count();
    Ok(FernLemmaReport {
        d,
        rank: solver.rank(),
        rows: solver.row_count(),
        columns: solver.column_count(),
        cases,
        failures,
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TheoremEntry {
    pub i: usize,
    pub alpha: Composition,
    #[serde(rename = "N")]
    pub t_degree: u32,
    /// Height-one trees only; membership is reported, not required.
    pub exceptional: bool,
    pub coefficient: String,
    pub certificate: CertificateJson,
    pub certificate_valid: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TheoremReport {
    pub d: u32,
    #[serde(rename = "N")]
    pub t_degrees: Vec<u32>,
    pub entries: Vec<TheoremEntry>,
    pub checked: usize,
    pub exceptional: usize,
    pub failures: usize,
}

impl TheoremReport {
    pub fn passed(&self) -> bool {
        self.failures == 0
    }
}

/// Certifies every coefficient `c_{alpha,N}` of the inverse of the two-variable
/// d-linear map in `J_{d,2}`. Degrees `N < 2d` form the finite exceptional set.
pub fn verify_main_theorem(d: u32, t_degrees: &[u32]) -> Result<TheoremReport> {
    let spec = DLinearSpec::new(d, 2)?;
    if let Some(bad) = t_degrees.iter().find(|&&big_n| !big_n.is_multiple_of(d)) {
        return domain(format!("N={bad} is not a multiple of d={d}"));
    }
    let gens = extract_generators(spec)?;
    let max_t = t_degrees.iter().copied().max().unwrap_or(0);
    let series = inverse_series(spec, max_t);
    let mut entries = Vec::new();
    for &big_n in t_degrees {
        let solver = MembershipSolver::new(&gens, big_n);
        let mut jobs = Vec::new();
        for i in 1..=2 {
            for alpha in admissible_alphas(d, 2, big_n) {
                jobs.push((i, alpha));
            }
        }
        let mut chunk = jobs
            .into_par_iter()
            .map(|(i, alpha)| {
                let c = series.coefficient(i, &alpha, big_n)?;
                let cert = solver.solve(&c)?;
                Ok(TheoremEntry {
                    i,
                    exceptional: big_n < 2 * d,
                    coefficient: c.to_string(),
                    certificate_valid: cert.verify(&gens),
                    certificate: cert.to_json(),
                    alpha,
                    t_degree: big_n,
                })
            })
            .collect::<Result<Vec<_>>>()?;
        entries.append(&mut chunk);
    }
    let failures = entries
        .iter()
        .filter(|e| !e.certificate_valid || (!e.exceptional && !e.certificate.member))
        .count();
    Ok(TheoremReport {
        d,
        t_degrees: t_degrees.to_vec(),
        checked: entries.len(),
        exceptional: entries.iter().filter(|e| e.exceptional).count(),
        failures,
        entries,
    })
}
