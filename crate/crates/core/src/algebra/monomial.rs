use std::cmp::Ordering;
use std::fmt;

use crate::error::{Error, Result};

/// An indeterminate of the ring `Q[t, x[1..n], a[1..n,1..n]]`.
///
/// The derived order is the fixed variable order
/// `t < x[1] < ... < x[n] < a[1,1] < a[1,2] < ... < a[n,n]`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Var {
    T,
    X(usize),
    A(usize, usize),
}

impl Var {
    /// Dense slot of this variable for ambient `n`, or `None` if out of range.
    pub fn slot(self, n: usize) -> Option<usize> {
        let ok = |i: usize| (1..=n).contains(&i);
        match self {
            Var::T => Some(0),
            Var::X(i) if ok(i) => Some(i),
            Var::A(i, j) if ok(i) && ok(j) => Some(n + (i - 1) * n + j),
            _ => None,
        }
    }

    pub fn from_slot(slot: usize, n: usize) -> Var {
        if slot == 0 {
            Var::T
        } else if slot <= n {
            Var::X(slot)
        } else {
            let r = slot - n - 1;
            Var::A(r / n + 1, r % n + 1)
        }
    }

    pub fn is_a(self) -> bool {
        matches!(self, Var::A(..))
    }
}

impl fmt::Display for Var {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Var::T => write!(f, "t"),
            Var::X(i) => write!(f, "x[{i}]"),
            Var::A(i, j) => write!(f, "a[{i},{j}]"),
        }
    }
}

pub(crate) fn var_count(n: usize) -> usize {
    1 + n + n * n
}

/// A monomial over the ambient alphabet for a fixed `n`, stored as a dense
/// exponent vector indexed by [`Var::slot`].
///
/// Ordering is graded: total degree first, then exponents compared from the
/// greatest variable `a[n,n]` downward.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Monomial {
    n: usize,
    exps: Vec<u16>,
}

impl Monomial {
    pub fn one(n: usize) -> Monomial {
        Monomial { n, exps: vec![0; var_count(n)] }
    }

    pub fn var(n: usize, v: Var) -> Result<Monomial> {
        Monomial::from_powers(n, [(v, 1)])
    }

    /// Builds a monomial from `(variable, exponent)` pairs; repeated variables accumulate.
    pub fn from_powers(n: usize, powers: impl IntoIterator<Item = (Var, u32)>) -> Result<Monomial> {
        let mut m = Monomial::one(n);
        for (v, e) in powers {
            let slot = v
                .slot(n)
                .ok_or_else(|| Error::Structural(format!("variable {v} outside ambient n={n}")))?;
            m.exps[slot] = m.exps[slot]
                .checked_add(u16::try_from(e).map_err(|_| Error::Domain("exponent overflow".into()))?)
                .ok_or_else(|| Error::Domain("exponent overflow".into()))?;
        }
        Ok(m)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn exponent(&self, v: Var) -> u32 {
        v.slot(self.n).map_or(0, |s| self.exps[s] as u32)
    }

    /// Nonzero `(variable, exponent)` pairs in variable order.
    pub fn powers(&self) -> impl Iterator<Item = (Var, u32)> + '_ {
        self.exps
            .iter()
            .enumerate()
            .filter(|(_, &e)| e > 0)
            .map(move |(s, &e)| (Var::from_slot(s, self.n), e as u32))
    }

    pub fn is_one(&self) -> bool {
        self.exps.iter().all(|&e| e == 0)
    }

    pub fn degree(&self) -> u32 {
        self.exps.iter().map(|&e| e as u32).sum()
    }

    pub fn t_degree(&self) -> u32 {
        self.exps[0] as u32
    }

    pub fn x_degree(&self) -> u32 {
        self.exps[1..=self.n].iter().map(|&e| e as u32).sum()
    }

    pub fn a_degree(&self) -> u32 {
        self.exps[self.n + 1..].iter().map(|&e| e as u32).sum()
    }

    /// Exponents of `x[1..n]`.
    pub fn x_exponents(&self) -> Vec<u32> {
        self.exps[1..=self.n].iter().map(|&e| e as u32).collect()
    }

    /// Degree in the row variables `a[i,1..n]`.
    pub fn row_degree(&self, i: usize) -> u32 {
        let start = self.n + (i - 1) * self.n + 1;
        self.exps[start..start + self.n].iter().map(|&e| e as u32).sum()
    }

    /// Splits into the `(t, x)` part and the `a` part.
    pub fn split_xt(&self) -> (Monomial, Monomial) {
        let mut xt = Monomial::one(self.n);
        let mut a = Monomial::one(self.n);
        xt.exps[..=self.n].copy_from_slice(&self.exps[..=self.n]);
        a.exps[self.n + 1..].copy_from_slice(&self.exps[self.n + 1..]);
        (xt, a)
    }

    pub fn is_free_of_xt(&self) -> bool {
        self.exps[..=self.n].iter().all(|&e| e == 0)
    }

    pub fn is_free_of_a(&self) -> bool {
        self.exps[self.n + 1..].iter().all(|&e| e == 0)
    }

    pub fn mul(&self, other: &Monomial) -> Result<Monomial> {
        if self.n != other.n {
            return Err(Error::Structural(format!(
                "monomials over n={} and n={}",
                self.n, other.n
            )));
        }
        let exps = self
            .exps
            .iter()
            .zip(&other.exps)
            .map(|(a, b)| a.checked_add(*b).ok_or_else(|| Error::Domain("exponent overflow".into())))
            .collect::<Result<_>>()?;
        Ok(Monomial { n: self.n, exps })
    }

    pub fn pow(&self, e: u32) -> Monomial {
        Monomial {
            n: self.n,
            exps: self.exps.iter().map(|&x| (x as u32 * e) as u16).collect(),
        }
    }

    /// `self / other` when `other` divides `self`.
    pub fn div(&self, other: &Monomial) -> Option<Monomial> {
        if self.n != other.n {
            return None;
        }
        let exps = self
            .exps
            .iter()
            .zip(&other.exps)
            .map(|(a, b)| a.checked_sub(*b))
            .collect::<Option<_>>()?;
        Some(Monomial { n: self.n, exps })
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.n
            .cmp(&other.n)
            .then_with(|| self.degree().cmp(&other.degree()))
            .then_with(|| self.exps.iter().rev().cmp(other.exps.iter().rev()))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_one() {
            return write!(f, "1");
        }
        let mut first = true;
        for (v, e) in self.powers() {
            if !first {
                write!(f, "*")?;
            }
            first = false;
            if e == 1 {
                write!(f, "{v}")?;
            } else {
                write!(f, "{v}^{e}")?;
            }
        }
        Ok(())
    }
}

/// Enumerates all monomials of total degree `degree` in the `a`-variables of ambient `n`,
/// in ascending monomial order.
pub fn a_monomials(n: usize, degree: u32) -> Vec<Monomial> {
    let vars: Vec<Var> = (1..=n).flat_map(|i| (1..=n).map(move |j| Var::A(i, j))).collect();
    let mut out = Vec::new();
    let mut exps = vec![0u32; vars.len()];
    fn rec(pos: usize, left: u32, exps: &mut [u32], vars: &[Var], n: usize, out: &mut Vec<Monomial>) {
        if pos + 1 == exps.len() {
            exps[pos] = left;
            let m = Monomial::from_powers(n, vars.iter().copied().zip(exps.iter().copied()))
                .expect("a-variables are in range");
            out.push(m);
            return;
        }
        for e in (0..=left).rev() {
            exps[pos] = e;
            rec(pos + 1, left - e, exps, vars, n, out);
        }
    }
    if !vars.is_empty() {
        rec(0, degree, &mut exps, &vars, n, &mut out);
    }
    out.sort();
    out
}
