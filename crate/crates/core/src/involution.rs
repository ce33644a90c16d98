//! The bijective proof of the generalized Cayley-Hamilton identities, executed.
//!
//! Every monomial of the first identity is indexed by a [`TupleState`]
//! `(lambda, nu, S, sigma, rho)`: a labelled fern path with its level rows,
//! and a subset permutation with its own rows. The maps `tau_1`/`tau_2` cut a
//! cycle out of the path at its last repetition and hand it to `sigma`; their
//! inverses reinsert the cycle of `sigma` through the last path label lying in
//! `S`. Both extend to sign-reversing, weight-preserving involutions.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use rayon::prelude::*;
use serde::Serialize;

use crate::algebra::{Monomial, Polynomial, SignedMonomial, Var};
use crate::combinatorics::{
    enumerate_compositions, enumerate_level_labelings, enumerate_subset_permutations, last_rep_indices, Composition,
    LastRep, LevelLabeling, SubsetPermutation,
};
use crate::error::{domain, Error, Result};
use crate::fern::{path_monomial, paths};

/// The fixed data `(d, n, alpha, u0, un)` of an identity instance.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct InvolutionContext {
    pub d: u32,
    pub n: usize,
    pub alpha: Composition,
    pub u0: usize,
    pub un: usize,
}

impl InvolutionContext {
    pub fn new(d: u32, n: usize, alpha: Composition, u0: usize, un: usize) -> Result<InvolutionContext> {
        if d == 0 || n == 0 {
            return domain("need d >= 1 and n >= 1");
        }
        if alpha.len() != n || alpha.weight() as usize != n * (d as usize - 1) {
            return domain(format!("alpha {alpha} is not in C(n(d-1), n)"));
        }
        if !(1..=n).contains(&u0) || !(1..=n).contains(&un) {
            return domain("end labels outside [1, n]");
        }
        Ok(InvolutionContext { d, n, alpha, u0, un })
    }
}

/// A monomial index `(lambda, nu, S, sigma, rho)`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct TupleState {
    pub lambda: Vec<usize>,
    pub nu: LevelLabeling,
    pub perm: SubsetPermutation,
    pub rho: LevelLabeling,
}

impl TupleState {
    /// `|S|`.
    pub fn k(&self) -> usize {
        self.perm.order()
    }

    /// Number of path edges, `n - k`.
    pub fn path_len(&self) -> usize {
        self.lambda.len() - 1
    }
}

impl fmt::Display for TupleState {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "(lambda={:?}, nu=[{}], S={:?}, sigma={:?}, rho=[{}])",
            self.lambda,
            self.nu,
            self.perm.set(),
            self.perm.images(),
            self.rho
        )
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub enum Variant {
    Tau1,
    Tau2,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Side {
    DomainSide,
    ImageSide,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct Classification {
    /// Greatest index with `lambda(h)` in `S`.
    pub h: Option<usize>,
    pub last_rep: Option<LastRep>,
    pub side: Side,
}

/// The state set `K(u0, un)`, ordered by `k`, then `alpha1`, path, `nu`, `(S, sigma)`, `rho`.
pub fn enumerate_states(ctx: &InvolutionContext) -> Result<Vec<TupleState>> {
    let (d, n) = (ctx.d, ctx.n);
    let mut out = Vec::new();
    for k in 0..=n {
        let perms = enumerate_subset_permutations(n, k)?;
        let lambdas = paths(n, n - k, ctx.u0, ctx.un);
        for alpha1 in enumerate_compositions(k as u32 * (d - 1), n) {
            let Some(rest) = ctx.alpha.checked_sub(&alpha1) else {
                continue;
            };
            let nus = enumerate_level_labelings(&rest, n - k, d)?;
            let rhos = enumerate_level_labelings(&alpha1, k, d)?;
            for lambda in &lambdas {
                for nu in &nus {
                    for perm in &perms {
                        for rho in &rhos {
                            out.push(TupleState {
                                lambda: lambda.clone(),
                                nu: nu.clone(),
                                perm: perm.clone(),
                                rho: rho.clone(),
                            });
                        }
                    }
                }
            }
        }
    }
    Ok(out)
}

/// `(-1)^{cycles(sigma)}` times the fern path monomial times the permutation monomial.
pub fn state_weight(n: usize, s: &TupleState) -> SignedMonomial {
    let path = path_monomial(n, &s.lambda, &s.nu);
    let mut powers = Vec::new();
    for (i, (&e, &img)) in s.perm.set().iter().zip(s.perm.images()).enumerate() {
        powers.push((Var::A(e, img), 1));
        for &l in &s.rho.rows()[i] {
            powers.push((Var::A(e, l), 1));
        }
    }
    let perm_part = Monomial::from_powers(n, powers).expect("labels in range");
    SignedMonomial {
        negative: s.perm.cycle_count() % 2 == 1,
        monomial: path.mul(&perm_part).expect("same ambient n"),
    }
}

/// Locates `h` and the last-rep indices and decides the side; a state on both
/// or neither side is reported as a verification failure.
pub fn classify(s: &TupleState) -> Result<Classification> {
    let h = (0..s.lambda.len()).rev().find(|&p| s.perm.contains(s.lambda[p]));
    let last_rep = last_rep_indices(&s.lambda);
    let on_domain = match (last_rep, h) {
        (Some(_), None) => true,
        (Some(lr), Some(h)) => h < lr.l1,
        _ => false,
    };
    let on_image = match (h, last_rep) {
        (Some(_), None) => true,
        (Some(h), Some(lr)) => h > lr.l1,
        _ => false,
    };
    let side = match (on_domain, on_image) {
        (true, false) => Side::DomainSide,
        (false, true) => Side::ImageSide,
        _ => {
            return Err(Error::Verification(format!(
                "state {s} is on {} side (h={h:?}, last-rep={last_rep:?})",
                if on_domain { "both" } else { "neither" }
            )))
        }
    };
    Ok(Classification { h, last_rep, side })
}

type PermRows = BTreeMap<usize, (usize, Vec<usize>)>;

fn perm_rows(s: &TupleState) -> PermRows {
    s.perm
        .set()
        .iter()
        .zip(s.perm.images())
        .zip(s.rho.rows())
        .map(|((&e, &img), row)| (e, (img, row.clone())))
        .collect()
}

fn rebuild(lambda: Vec<usize>, nu_rows: Vec<Vec<usize>>, rows: PermRows) -> Result<TupleState> {
    let map: BTreeMap<usize, usize> = rows.iter().map(|(&e, (img, _))| (e, *img)).collect();
    let perm = SubsetPermutation::from_map(&map)?;
    let rho = LevelLabeling::new(rows.into_values().map(|(_, r)| r).collect());
    Ok(TupleState { lambda, nu: LevelLabeling::new(nu_rows), perm, rho })
}

/// `tau_1` or `tau_2` on a domain-side state.
pub fn tau(s: &TupleState, variant: Variant) -> Result<TupleState> {
    let c = classify(s)?;
    if c.side != Side::DomainSide {
        return domain(format!("tau applied to image-side state {s}"));
    }
    let LastRep { l1, l2 } = c.last_rep.expect("domain side has a last-rep");
    let m = s.path_len();
    let lambda = &s.lambda;
    let rows = s.nu.rows();
    let mut prows = perm_rows(s);
    let (new_lambda, new_rows) = if variant == Variant::Tau1 || l2 == m {
        // cycle lambda(l1..l2-1); element lambda(p) takes nu(p+1)
        for p in l1..l2 {
            prows.insert(lambda[p], (lambda[p + 1], rows[p].clone()));
        }
        let nl = [&lambda[..l1], &lambda[l2..]].concat();
        let nr = [&rows[..l1], &rows[l2..]].concat();
        (nl, nr)
    } else {
        // cycle lambda(l1+1..l2), closing lambda(l2) -> lambda(l1+1)
        for p in l1 + 1..=l2 {
            let next = if p == l2 { lambda[l1 + 1] } else { lambda[p + 1] };
            prows.insert(lambda[p], (next, rows[p].clone()));
        }
        let nl = [&lambda[..=l1], &lambda[l2 + 1..]].concat();
        let nr = [&rows[..=l1], &rows[l2 + 1..]].concat();
        (nl, nr)
    };
    rebuild(new_lambda, new_rows, prows)
}

/// Inverse of `tau_1` or `tau_2` on an image-side state.
pub fn tau_inverse(s: &TupleState, variant: Variant) -> Result<TupleState> {
    let c = classify(s)?;
    if c.side != Side::ImageSide {
        return domain(format!("tau inverse applied to domain-side state {s}"));
    }
    let h = c.h.expect("image side has h");
    let m = s.path_len();
    let b = s.lambda[h];
    let cycle = s.perm.cycle_from(b).expect("b lies in S");
    let mut prows = perm_rows(s);
    let mut cycle_rows = Vec::with_capacity(cycle.len());
    for e in &cycle {
        cycle_rows.push(prows.remove(e).expect("cycle element in S").1);
    }
    let lambda = &s.lambda;
    let rows = s.nu.rows();
    let (new_lambda, new_rows) = if variant == Variant::Tau1 || h == m {
        // insert (b, sigma(b), ...) before position h
        let nl = [&lambda[..h], &cycle[..], &lambda[h..]].concat();
        let nr = [&rows[..h], &cycle_rows[..], &rows[h..]].concat();
        (nl, nr)
    } else {
        // insert (sigma(b), ..., b) after position h
        let rotated = [&cycle[1..], &cycle[..1]].concat();
        let rotated_rows = [&cycle_rows[1..], &cycle_rows[..1]].concat();
        let nl = [&lambda[..=h], &rotated[..], &lambda[h + 1..]].concat();
        let nr = [&rows[..=h], &rotated_rows[..], &rows[h + 1..]].concat();
        (nl, nr)
    };
    rebuild(new_lambda, new_rows, prows)
}

/// The involution `I_1` / `I_2`: `tau` on the domain side, `tau^{-1}` on the image side.
pub fn involution(s: &TupleState, variant: Variant) -> Result<TupleState> {
    match classify(s)?.side {
        Side::DomainSide => tau(s, variant),
        Side::ImageSide => tau_inverse(s, variant),
    }
}

/// Membership in `K(u0, un; beta)`: `nu(1) = beta` and `|S| != n`.
pub fn in_restricted(s: &TupleState, n: usize, beta: &[usize]) -> bool {
    s.k() != n && s.nu.levels() >= 1 && s.nu.row(1) == beta
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Counterexample {
    pub reason: String,
    pub state: String,
    pub partner: Option<String>,
    pub weight: String,
    pub partner_weight: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct InvolutionReport {
    pub context: InvolutionContext,
    pub variant: Variant,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub beta: Option<Vec<usize>>,
    pub states: usize,
    pub domain_side: usize,
    pub image_side: usize,
    pub failures: Vec<Counterexample>,
    pub signed_sum: String,
    #[serde(skip)]
    pub signed_sum_poly: Polynomial,
}

impl InvolutionReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty() && self.signed_sum_poly.is_zero()
    }
}

/// The state set under test: all of `K(u0, un)`, or `K(u0, un; beta)`.
pub fn state_set(ctx: &InvolutionContext, beta: Option<&[usize]>) -> Result<Vec<TupleState>> {
    let mut states = enumerate_states(ctx)?;
    if let Some(beta) = beta {
        LevelLabeling::new(vec![beta.to_vec()]).validate(1, ctx.d, ctx.n)?;
        states.retain(|s| in_restricted(s, ctx.n, beta));
    }
    Ok(states)
}

fn check_state(
    s: &TupleState,
    variant: Variant,
    n: usize,
    set: &BTreeSet<TupleState>,
) -> std::result::Result<Side, Counterexample> {
    let w = state_weight(n, s);
    let fail = |reason: String, partner: Option<&TupleState>| Counterexample {
        reason,
        state: s.to_string(),
        partner: partner.map(|p| p.to_string()),
        weight: w.to_string(),
        partner_weight: partner.map(|p| state_weight(n, p).to_string()),
    };
    let side = classify(s).map_err(|e| fail(e.to_string(), None))?.side;
    let partner = involution(s, variant).map_err(|e| fail(e.to_string(), None))?;
    if !set.contains(&partner) {
        return Err(fail("partner outside the state set".into(), Some(&partner)));
    }
    let partner_side = classify(&partner).map_err(|e| fail(e.to_string(), Some(&partner)))?.side;
    if partner_side == side {
        return Err(fail("partner on the same side".into(), Some(&partner)));
    }
    match involution(&partner, variant) {
        Ok(back) if &back == s => {}
        Ok(_) => return Err(fail("involution is not self-inverse".into(), Some(&partner))),
        Err(e) => return Err(fail(e.to_string(), Some(&partner))),
    }
    let pw = state_weight(n, &partner);
    if pw.monomial != w.monomial || pw.negative == w.negative {
        return Err(fail("weight not reversed".into(), Some(&partner)));
    }
    Ok(side)
}

/// Checks partition, closure, involutivity and sign reversal on every state,
/// and sums the signed weights. With `beta`, the set is `K(u0, un; beta)` and
/// only `tau_2` with `u0 != un` is admissible.
pub fn verify_involution(ctx: &InvolutionContext, variant: Variant, beta: Option<&[usize]>) -> Result<InvolutionReport> {
    if beta.is_some() && (variant != Variant::Tau2 || ctx.u0 == ctx.un) {
        return domain("the restricted set requires tau_2 and u0 != un");
    }
    let states = state_set(ctx, beta)?;
    let set: BTreeSet<TupleState> = states.iter().cloned().collect();
    let mut failures = Vec::new();
    if set.len() != states.len() {
        failures.push(Counterexample {
            reason: "duplicate states in enumeration".into(),
            state: String::new(),
            partner: None,
            weight: String::new(),
            partner_weight: None,
        });
    }
    let results: Vec<_> = states.par_iter().map(|s| check_state(s, variant, ctx.n, &set)).collect();
    let mut domain_side = 0;
    let mut image_side = 0;
    for r in results {
        match r {
            Ok(Side::DomainSide) => domain_side += 1,
            Ok(Side::ImageSide) => image_side += 1,
            Err(c) => failures.push(c),
        }
    }
    let mut sum = Polynomial::zero(ctx.n);
    for s in &states {
        sum += &state_weight(ctx.n, s).to_polynomial();
    }
    Ok(InvolutionReport {
        context: ctx.clone(),
        variant,
        beta: beta.map(<[usize]>::to_vec),
        states: states.len(),
        domain_side,
        image_side,
        failures,
        signed_sum: sum.to_string(),
        signed_sum_poly: sum,
    })
}

/// Signed sum of state weights, without checking the involution.
pub fn signed_state_sum(ctx: &InvolutionContext, beta: Option<&[usize]>) -> Result<Polynomial> {
    let mut sum = Polynomial::zero(ctx.n);
    for s in state_set(ctx, beta)? {
        sum += &state_weight(ctx.n, &s).to_polynomial();
    }
    Ok(sum)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PairRecord {
    pub state: TupleState,
    pub partner: TupleState,
    pub monomial: String,
    pub state_negative: bool,
    pub partner_negative: bool,
}

/// Each domain-side state with its partner, in enumeration order.
pub fn pairs(ctx: &InvolutionContext, variant: Variant, beta: Option<&[usize]>) -> Result<Vec<PairRecord>> {
    let mut out = Vec::new();
    for s in state_set(ctx, beta)? {
        if classify(&s)?.side != Side::DomainSide {
            continue;
        }
        let partner = tau(&s, variant)?;
        let w = state_weight(ctx.n, &s);
        let pw = state_weight(ctx.n, &partner);
        out.push(PairRecord {
            monomial: w.monomial.to_string(),
            state_negative: w.negative,
            partner_negative: pw.negative,
            state: s,
            partner,
        });
    }
    Ok(out)
}
