//! Truncated formal inverse of a d-linear map, by fixed-point iteration and by
//! an explicit enumeration of labelled plane trees.

use std::collections::BTreeMap;

use serde::Serialize;

use crate::algebra::{Monomial, Polynomial, Rational, Var};
use crate::combinatorics::{enumerate_compositions, Composition};
use crate::error::{domain, Result};
use crate::generators::DLinearSpec;

/// The inverse `g` truncated to `t`-degree at most `max_t`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TruncatedSeries {
    pub spec: DLinearSpec,
    pub max_t: u32,
    pub components: Vec<Polynomial>,
    /// Rounds of the fixed-point iteration until the series stopped changing.
    pub rounds: usize,
}

fn xt_monomial(n: usize, alpha: &Composition, t: u32) -> Result<Monomial> {
    let powers = alpha
        .parts()
        .iter()
        .enumerate()
        .map(|(r, &e)| (Var::X(r + 1), e))
        .chain(std::iter::once((Var::T, t)));
    Monomial::from_powers(n, powers)
}

impl TruncatedSeries {
    /// `c_{alpha,N}` of component `i` (1-based); zero outside the truncation.
    pub fn coefficient(&self, i: usize, alpha: &Composition, t_degree: u32) -> Result<Polynomial> {
        if i == 0 || i > self.spec.n || alpha.len() != self.spec.n {
            return domain(format!("component {i} / composition {alpha} invalid for n={}", self.spec.n));
        }
        if t_degree > self.max_t {
            return domain(format!("t-degree {t_degree} beyond truncation {}", self.max_t));
        }
        self.components[i - 1].coefficient_of(&xt_monomial(self.spec.n, alpha, t_degree)?)
    }

    /// Every nonzero coefficient as `(i, alpha, N, c)`, ordered by `i` then monomial.
    pub fn coefficients(&self) -> Vec<(usize, Composition, u32, Polynomial)> {
        let mut out = Vec::new();
        for (idx, g) in self.components.iter().enumerate() {
            for (xt, c) in g.split_xt() {
                out.push((idx + 1, Composition::new(xt.x_exponents()), xt.t_degree(), c));
            }
        }
        out
    }
}

fn fixed_point_step(spec: DLinearSpec, g: &[Polynomial], max_t: u32) -> Vec<Polynomial> {
    let n = spec.n;
    let t = Polynomial::t(n);
    (1..=n)
        .map(|i| {
            let mut lin = Polynomial::zero(n);
            for (j, gj) in g.iter().enumerate() {
                lin += &(&Polynomial::a(n, i, j + 1) * gj);
            }
            let lin = t.mul_truncated(&lin, max_t).expect("same n");
            &Polynomial::x(n, i) + &lin.pow_truncated(spec.d, max_t)
        })
        .collect()
}

/// Iterates `g_i <- x_i + (t sum_j a[i,j] g_j)^d` from `g = x` until stable.
pub fn inverse_series(spec: DLinearSpec, max_t: u32) -> TruncatedSeries {
    inverse_series_with_rounds(spec, max_t, None)
}

/// As [`inverse_series`]; with `Some(r)` exactly `r` rounds are run regardless of convergence.
pub fn inverse_series_with_rounds(spec: DLinearSpec, max_t: u32, forced: Option<usize>) -> TruncatedSeries {
    let n = spec.n;
    let mut g: Vec<Polynomial> = (1..=n).map(|i| Polynomial::x(n, i)).collect();
    let limit = forced.unwrap_or((max_t / spec.d) as usize + 2);
    let mut rounds = 0;
    while rounds < limit {
        let next = fixed_point_step(spec, &g, max_t);
        rounds += 1;
        let stable = next == g;
        g = next;
        if stable && forced.is_none() {
            break;
        }
    }
    TruncatedSeries { spec, max_t, components: g, rounds }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct InverseReport {
    pub spec: DLinearSpec,
    pub max_t: u32,
    pub rounds: usize,
    pub f_of_g_ok: bool,
    pub g_of_f_ok: bool,
    /// First offending `(direction, component, monomial)` when a check fails.
    pub first_offending: Option<String>,
}

impl InverseReport {
    pub fn passed(&self) -> bool {
        self.f_of_g_ok && self.g_of_f_ok
    }
}

fn first_residual(label: &str, got: &[Polynomial], n: usize) -> Option<String> {
    for (i, p) in got.iter().enumerate() {
        let residual = p - &Polynomial::x(n, i + 1);
        let first = residual.terms().next().map(|(m, c)| format!("{label} component {}: {c} * {m}", i + 1));
        if first.is_some() {
            return first;
        }
    }
    None
}

/// Checks `f(g) = x` and `g(f) = x` modulo `t`-degree above `max_t`, by substitution.
pub fn verify_inverse(spec: DLinearSpec, max_t: u32) -> Result<InverseReport> {
    let series = inverse_series(spec, max_t);
    let f = spec.components();
    let f_of_g = f
        .iter()
        .map(|fi| fi.substitute_x(&series.components, max_t))
        .collect::<Result<Vec<_>>>()?;
    let g_of_f = series
        .components
        .iter()
        .map(|gi| gi.substitute_x(&f, max_t))
        .collect::<Result<Vec<_>>>()?;
    let r1 = first_residual("f(g)", &f_of_g, spec.n);
    let r2 = first_residual("g(f)", &g_of_f, spec.n);
    Ok(InverseReport {
        spec,
        max_t,
        rounds: series.rounds,
        f_of_g_ok: r1.is_none(),
        g_of_f_ok: r2.is_none(),
        first_offending: r1.or(r2),
    })
}

/// `c_{alpha,N}` for component `i` of the inverse.
pub fn coefficient_c(spec: DLinearSpec, i: usize, alpha: &Composition, t_degree: u32) -> Result<Polynomial> {
    inverse_series(spec, t_degree).coefficient(i, alpha, t_degree)
}

/// True when `(alpha, N)` can carry a nonzero coefficient: `d | N` and
/// `|alpha| = 1 + (d-1) N / d`.
pub fn satisfies_degree_law(d: u32, alpha: &Composition, t_degree: u32) -> bool {
    t_degree.is_multiple_of(d) && alpha.weight() == 1 + (d - 1) * t_degree / d
}

/// Nonzero coefficients breaking the degree law or not homogeneous of `a`-degree `N`.
pub fn degree_law_violations(series: &TruncatedSeries) -> Vec<(usize, Composition, u32)> {
    series
        .coefficients()
        .into_iter()
        .filter(|(_, alpha, t, c)| {
            !satisfies_degree_law(series.spec.d, alpha, *t) || c.homogeneous_a_degree() != Some(*t)
        })
        .map(|(i, alpha, t, _)| (i, alpha, t))
        .collect()
}

/// Admissible leaf contents for `N` edges: compositions of `1 + (d-1)N/d`.
pub fn admissible_alphas(d: u32, n: usize, t_degree: u32) -> Vec<Composition> {
    if !t_degree.is_multiple_of(d) {
        return Vec::new();
    }
    enumerate_compositions(1 + (d - 1) * t_degree / d, n)
}

/// Plane tree in which every vertex has `d` children or none.
#[derive(Clone, Debug)]
enum Shape {
    Leaf,
    Node(Vec<Shape>),
}

fn shapes(internal: u32, d: u32) -> Vec<Shape> {
    if internal == 0 {
        return vec![Shape::Leaf];
    }
    let mut out = Vec::new();
    for split in enumerate_compositions(internal - 1, d as usize) {
        let mut partial: Vec<Vec<Shape>> = vec![Vec::new()];
        for &m in split.parts() {
            let subs = shapes(m, d);
            partial = partial
                .into_iter()
                .flat_map(|pre| {
                    subs.iter().map(move |s| {
                        let mut v = pre.clone();
                        v.push(s.clone());
                        v
                    })
                })
                .collect();
        }
        out.extend(partial.into_iter().map(Shape::Node));
    }
    out
}

/// Edge list `(parent label, child label)` and leaf labels of one labelled tree.
type Labelling = (Vec<(usize, usize)>, Vec<usize>);

/// All labellings of `shape` with root label `root`.
fn labellings(shape: &Shape, root: usize, n: usize) -> Vec<Labelling> {
    match shape {
        Shape::Leaf => vec![(Vec::new(), vec![root])],
        Shape::Node(children) => {
            let mut acc: Vec<Labelling> = vec![(Vec::new(), Vec::new())];
            for child in children {
                let mut next = Vec::new();
                for (edges, leaves) in &acc {
                    for label in 1..=n {
                        for (ce, cl) in labellings(child, label, n) {
                            let mut e = edges.clone();
                            e.push((root, label));
                            e.extend(ce);
                            let mut l = leaves.clone();
                            l.extend(cl);
                            next.push((e, l));
                        }
                    }
                }
                acc = next;
            }
            acc
        }
    }
}

/// Sum over labelled plane trees with `N` edges (every vertex has `d` children
/// or none), root labelled `i`, leaf-label content `alpha`, of the product of
/// `a[parent, child]` over the edges.
pub fn tree_oracle_coefficient(spec: DLinearSpec, i: usize, alpha: &Composition, t_degree: u32) -> Result<Polynomial> {
    let n = spec.n;
    if i == 0 || i > n || alpha.len() != n {
        return domain("component or composition out of range");
    }
    let mut acc = Polynomial::zero(n);
    if !t_degree.is_multiple_of(spec.d) {
        return Ok(acc);
    }
    let one = Rational::from_integer(1.into());
    let mut tally: BTreeMap<Monomial, u64> = BTreeMap::new();
    for shape in shapes(t_degree / spec.d, spec.d) {
        for (edges, leaves) in labellings(&shape, i, n) {
            if &Composition::content_of(leaves, n) != alpha {
                continue;
            }
            let m = Monomial::from_powers(n, edges.into_iter().map(|(p, c)| (Var::A(p, c), 1)))?;
            *tally.entry(m).or_default() += 1;
        }
    }
    for (m, count) in tally {
        acc.add_term(m, &one * Rational::from_integer(count.into()));
    }
    Ok(acc)
}
