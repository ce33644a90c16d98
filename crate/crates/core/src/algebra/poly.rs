use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub, SubAssign};

use num_traits::{One, Signed, Zero};

use super::monomial::{Monomial, Var};
use super::Rational;
use crate::error::{Error, Result};

/// A sparse polynomial in `t`, `x[1..n]` and `a[1..n,1..n]` with exact rational
/// coefficients. Zero coefficients are never stored, so structural equality of
/// the term map is polynomial equality.
///
/// The arithmetic operators panic when the operands have different ambient `n`;
/// the `try_*` methods report [`Error::Structural`] instead.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Polynomial {
    n: usize,
    terms: BTreeMap<Monomial, Rational>,
}

impl Polynomial {
    pub fn zero(n: usize) -> Polynomial {
        Polynomial { n, terms: BTreeMap::new() }
    }

    pub fn one(n: usize) -> Polynomial {
        Polynomial::constant(n, Rational::one())
    }

    pub fn constant(n: usize, c: Rational) -> Polynomial {
        Polynomial::term(c, Monomial::one(n))
    }

    pub fn from_int(n: usize, c: i64) -> Polynomial {
        Polynomial::constant(n, Rational::from_integer(c.into()))
    }

    pub fn var(n: usize, v: Var) -> Result<Polynomial> {
        Ok(Polynomial::term(Rational::one(), Monomial::var(n, v)?))
    }

    /// `a[i,j]`; panics if the indices are out of range.
    pub fn a(n: usize, i: usize, j: usize) -> Polynomial {
        Polynomial::var(n, Var::A(i, j)).expect("a-index in range")
    }

    /// `x[i]`; panics if the index is out of range.
    pub fn x(n: usize, i: usize) -> Polynomial {
        Polynomial::var(n, Var::X(i)).expect("x-index in range")
    }

    pub fn t(n: usize) -> Polynomial {
        Polynomial::var(n, Var::T).expect("t always exists")
    }

    pub fn term(c: Rational, m: Monomial) -> Polynomial {
        let n = m.n();
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(m, c);
        }
        Polynomial { n, terms }
    }

    /// Sums `(coefficient, monomial)` pairs; all monomials must be over `n`.
    pub fn from_terms(n: usize, terms: impl IntoIterator<Item = (Rational, Monomial)>) -> Result<Polynomial> {
        let mut p = Polynomial::zero(n);
        for (c, m) in terms {
            if m.n() != n {
                return Err(mismatch(n, m.n()));
            }
            p.add_term(m, c);
        }
        Ok(p)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Terms in ascending canonical order.
    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &Rational)> {
        self.terms.iter()
    }

    pub fn coefficient(&self, m: &Monomial) -> Rational {
        self.terms.get(m).cloned().unwrap_or_else(Rational::zero)
    }

    pub(crate) fn add_term(&mut self, m: Monomial, c: Rational) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(m) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                *e.get_mut() += c;
                if e.get().is_zero() {
                    e.remove();
                }
            }
        }
    }

    fn check_same(&self, other: &Polynomial) -> Result<()> {
        if self.n == other.n {
            Ok(())
        } else {
            Err(mismatch(self.n, other.n))
        }
    }

    pub fn try_add(&self, other: &Polynomial) -> Result<Polynomial> {
        self.check_same(other)?;
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), c.clone());
        }
        Ok(out)
    }

    pub fn try_sub(&self, other: &Polynomial) -> Result<Polynomial> {
        self.check_same(other)?;
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), -c.clone());
        }
        Ok(out)
    }

    pub fn try_mul(&self, other: &Polynomial) -> Result<Polynomial> {
        self.mul_truncated(other, u32::MAX)
    }

    /// Product keeping only terms of `t`-degree at most `max_t`.
    pub fn mul_truncated(&self, other: &Polynomial, max_t: u32) -> Result<Polynomial> {
        self.check_same(other)?;
        let mut out = Polynomial::zero(self.n);
        for (m1, c1) in &self.terms {
            let t1 = m1.t_degree();
            if t1 > max_t {
                continue;
            }
            for (m2, c2) in &other.terms {
                if t1 + m2.t_degree() > max_t {
                    continue;
                }
                out.add_term(m1.mul(m2)?, c1 * c2);
            }
        }
        Ok(out)
    }

    pub fn scale(&self, c: &Rational) -> Polynomial {
        if c.is_zero() {
            return Polynomial::zero(self.n);
        }
        Polynomial {
            n: self.n,
            terms: self.terms.iter().map(|(m, x)| (m.clone(), x * c)).collect(),
        }
    }

    pub fn mul_monomial(&self, m: &Monomial) -> Result<Polynomial> {
        let mut terms = BTreeMap::new();
        for (k, c) in &self.terms {
            terms.insert(k.mul(m)?, c.clone());
        }
        Ok(Polynomial { n: self.n, terms })
    }

    /// `self^e`, with `p^0 = 1`.
    pub fn pow(&self, e: u32) -> Polynomial {
        self.pow_truncated(e, u32::MAX)
    }

    pub fn pow_truncated(&self, e: u32, max_t: u32) -> Polynomial {
        let mut acc = Polynomial::one(self.n);
        for _ in 0..e {
            acc = acc.mul_truncated(self, max_t).expect("same ambient n");
        }
        acc
    }

    /// Drops every term of `t`-degree above `max_t`.
    pub fn truncate_t(&self, max_t: u32) -> Polynomial {
        Polynomial {
            n: self.n,
            terms: self
                .terms
                .iter()
                .filter(|(m, _)| m.t_degree() <= max_t)
                .map(|(m, c)| (m.clone(), c.clone()))
                .collect(),
        }
    }

    /// The polynomial in `a`-variables multiplying the `(t, x)`-monomial `m`.
    pub fn coefficient_of(&self, m: &Monomial) -> Result<Polynomial> {
        if m.n() != self.n {
            return Err(mismatch(self.n, m.n()));
        }
        if !m.is_free_of_a() {
            return Err(Error::Domain(format!("coefficient_of expects a monomial in x and t, got {m}")));
        }
        let mut out = Polynomial::zero(self.n);
        for (k, c) in &self.terms {
            let (xt, a) = k.split_xt();
            if &xt == m {
                out.add_term(a, c.clone());
            }
        }
        Ok(out)
    }

    /// Groups terms by their `(t, x)` part; values are polynomials in the `a`-variables.
    pub fn split_xt(&self) -> BTreeMap<Monomial, Polynomial> {
        let mut out: BTreeMap<Monomial, Polynomial> = BTreeMap::new();
        for (k, c) in &self.terms {
            let (xt, a) = k.split_xt();
            out.entry(xt)
                .or_insert_with(|| Polynomial::zero(self.n))
                .add_term(a, c.clone());
        }
        out
    }

    pub fn is_free_of_xt(&self) -> bool {
        self.terms.keys().all(Monomial::is_free_of_xt)
    }

    /// The set of `a`-degrees occurring among the terms.
    pub fn a_degrees(&self) -> BTreeSet<u32> {
        self.terms.keys().map(Monomial::a_degree).collect()
    }

    /// `Some(deg)` when every term has `a`-degree `deg`; `None` for zero or mixed degrees.
    pub fn homogeneous_a_degree(&self) -> Option<u32> {
        let degs = self.a_degrees();
        if degs.len() == 1 {
            degs.into_iter().next()
        } else {
            None
        }
    }

    pub fn max_t_degree(&self) -> u32 {
        self.terms.keys().map(Monomial::t_degree).max().unwrap_or(0)
    }

    /// Exact evaluation; every variable occurring in `self` must be assigned.
    pub fn substitute_numeric(&self, assignment: &BTreeMap<Var, Rational>) -> Result<Rational> {
        let mut total = Rational::zero();
        for (m, c) in &self.terms {
            let mut v = c.clone();
            for (var, e) in m.powers() {
                let val = assignment
                    .get(&var)
                    .ok_or_else(|| Error::Structural(format!("no value assigned to {var}")))?;
                v *= num_traits::pow(val.clone(), e as usize);
            }
            total += v;
        }
        Ok(total)
    }

    /// Replaces each `x[i]` by `images[i-1]`, truncating at `t`-degree `max_t`.
    pub fn substitute_x(&self, images: &[Polynomial], max_t: u32) -> Result<Polynomial> {
        if images.len() != self.n {
            return Err(Error::Structural(format!(
                "expected {} images for x, got {}",
                self.n,
                images.len()
            )));
        }
        for img in images {
            self.check_same(img)?;
        }
        // Cache powers of each image as they are requested.
        let mut powers: Vec<Vec<Polynomial>> = vec![vec![Polynomial::one(self.n)]; self.n];
        let mut out = Polynomial::zero(self.n);
        for (m, c) in &self.terms {
            let (xt, a) = m.split_xt();
            let t_here = xt.t_degree();
            if t_here > max_t {
                continue;
            }
            let mut acc = Polynomial::term(c.clone(), Monomial::from_powers(self.n, [(Var::T, t_here)])?.mul(&a)?);
            for (i, e) in xt.x_exponents().into_iter().enumerate() {
                if e == 0 {
                    continue;
                }
                while powers[i].len() <= e as usize {
                    let next = powers[i].last().unwrap().mul_truncated(&images[i], max_t)?;
                    powers[i].push(next);
                }
                acc = acc.mul_truncated(&powers[i][e as usize], max_t)?;
            }
            out = out.try_add(&acc)?;
        }
        Ok(out)
    }
}

fn mismatch(a: usize, b: usize) -> Error {
    Error::Structural(format!("ambient n mismatch: {a} vs {b}"))
}

impl fmt::Display for Polynomial {
    /// Canonical text: terms ascending, `C * f1*f2`, unit coefficient omitted, zero as `0`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (idx, (m, c)) in self.terms.iter().enumerate() {
            let shown = if idx == 0 {
                c.clone()
            } else {
                write!(f, "{}", if c.is_negative() { " - " } else { " + " })?;
                c.abs()
            };
            if m.is_one() {
                write!(f, "{shown}")?;
            } else if c.is_one() {
                write!(f, "{m}")?;
            } else {
                write!(f, "{shown} * {m}")?;
            }
        }
        Ok(())
    }
}

impl Neg for &Polynomial {
    type Output = Polynomial;
    fn neg(self) -> Polynomial {
        Polynomial {
            n: self.n,
            terms: self.terms.iter().map(|(m, c)| (m.clone(), -c.clone())).collect(),
        }
    }
}

impl Neg for Polynomial {
    type Output = Polynomial;
    fn neg(mut self) -> Polynomial {
        for c in self.terms.values_mut() {
            *c = -c.clone();
        }
        self
    }
}

macro_rules! binop {
    ($tr:ident, $f:ident, $try:ident) => {
        impl $tr<&Polynomial> for &Polynomial {
            type Output = Polynomial;
            fn $f(self, rhs: &Polynomial) -> Polynomial {
                self.$try(rhs).expect("polynomials over the same ambient n")
            }
        }
        impl $tr<Polynomial> for Polynomial {
            type Output = Polynomial;
            fn $f(self, rhs: Polynomial) -> Polynomial {
                (&self).$try(&rhs).expect("polynomials over the same ambient n")
            }
        }
        impl $tr<&Polynomial> for Polynomial {
            type Output = Polynomial;
            fn $f(self, rhs: &Polynomial) -> Polynomial {
                (&self).$try(rhs).expect("polynomials over the same ambient n")
            }
        }
    };
}

binop!(Add, add, try_add);
binop!(Sub, sub, try_sub);
binop!(Mul, mul, try_mul);

impl AddAssign<&Polynomial> for Polynomial {
    fn add_assign(&mut self, rhs: &Polynomial) {
        assert_eq!(self.n, rhs.n, "polynomials over the same ambient n");
        for (m, c) in &rhs.terms {
            self.add_term(m.clone(), c.clone());
        }
    }
}

impl SubAssign<&Polynomial> for Polynomial {
    fn sub_assign(&mut self, rhs: &Polynomial) {
        assert_eq!(self.n, rhs.n, "polynomials over the same ambient n");
        for (m, c) in &rhs.terms {
            self.add_term(m.clone(), -c.clone());
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(p: i64, d: i64) -> Rational {
        Rational::new(p.into(), d.into())
    }

    #[test]
    fn cancellation_and_identity() {
        let n = 2;
        let (x1, x2) = (Polynomial::x(n, 1), Polynomial::x(n, 2));
        assert_eq!(&(&x1 + &x2) + &(&x1 - &x2), x1.scale(&q(2, 1)));
        assert_eq!(&x1 + &Polynomial::zero(n), x1);
        let a = Polynomial::a(n, 1, 1);
        assert_eq!(&a + &a, a.scale(&q(2, 1)));
    }

    #[test]
    fn products() {
        let n = 2;
        let (x1, x2) = (Polynomial::x(n, 1), Polynomial::x(n, 2));
        let s = &x1 + &x2;
        let expect = &(&x1.pow(2) + &(&x1 * &x2).scale(&q(2, 1))) + &x2.pow(2);
        assert_eq!(&s * &s, expect);
        assert_eq!(&s * &Polynomial::one(n), s);
        let ta = &Polynomial::t(n) * &Polynomial::a(n, 1, 1);
        let one = Polynomial::one(n);
        assert_eq!(&(&one - &ta) * &(&one + &ta), &one - &ta.pow(2));
    }

    #[test]
    fn powers() {
        let n = 2;
        let x1 = Polynomial::x(n, 1);
        assert_eq!(x1.pow(3).to_string(), "x[1]^3");
        assert_eq!(x1.pow(0), Polynomial::one(n));
        let lin = &(&Polynomial::a(n, 1, 1) * &x1) + &(&Polynomial::a(n, 1, 2) * &Polynomial::x(n, 2));
        assert_eq!(
            lin.pow(2).to_string(),
            "x[1]^2*a[1,1]^2 + 2 * x[1]*x[2]*a[1,1]*a[1,2] + x[2]^2*a[1,2]^2"
        );
    }

    #[test]
    fn display_grammar() {
        let n = 2;
        let p = -(&Polynomial::a(n, 1, 1).pow(2) + &(&Polynomial::a(n, 2, 1) * &Polynomial::a(n, 2, 2)));
        assert_eq!(p.to_string(), "-1 * a[1,1]^2 - 1 * a[2,1]*a[2,2]");
        assert_eq!(Polynomial::zero(n).to_string(), "0");
        assert_eq!(Polynomial::constant(n, q(-3, 2)).to_string(), "-3/2");
        let r = &Polynomial::one(n) + &Polynomial::x(n, 1).scale(&q(1, 3));
        assert_eq!(r.to_string(), "1 + 1/3 * x[1]");
    }

    #[test]
    fn coefficient_extraction() {
        let n = 2;
        let x1 = Polynomial::x(n, 1);
        let x2 = Polynomial::x(n, 2);
        let p = &x1.pow(2) + &(&x1 * &x2).scale(&q(2, 1));
        let m = Monomial::from_powers(n, [(Var::X(1), 1), (Var::X(2), 1)]).unwrap();
        assert_eq!(p.coefficient_of(&m).unwrap(), Polynomial::from_int(n, 2));
        assert!(p.coefficient_of(&Monomial::one(n)).unwrap().is_zero());
        let bad = Monomial::var(n, Var::A(1, 1)).unwrap();
        assert!(matches!(p.coefficient_of(&bad), Err(Error::Domain(_))));
    }

    #[test]
    fn numeric_substitution() {
        let n = 2;
        let p = &Polynomial::x(n, 1) + &Polynomial::x(n, 2);
        let mut asg = BTreeMap::new();
        asg.insert(Var::X(1), q(1, 1));
        asg.insert(Var::X(2), q(2, 1));
        assert_eq!(p.substitute_numeric(&asg).unwrap(), q(3, 1));
        let a = Polynomial::a(n, 1, 1).pow(2);
        let mut asg2 = BTreeMap::new();
        asg2.insert(Var::A(1, 1), q(2, 3));
        assert_eq!(a.substitute_numeric(&asg2).unwrap(), q(4, 9));
        assert_eq!(Polynomial::zero(n).substitute_numeric(&BTreeMap::new()).unwrap(), q(0, 1));
        assert!(matches!(a.substitute_numeric(&asg), Err(Error::Structural(_))));
    }

    #[test]
    fn ambient_mismatch_is_structural() {
        let p = Polynomial::x(2, 1);
        let r = Polynomial::x(3, 1);
        assert!(matches!(p.try_add(&r), Err(Error::Structural(_))));
        assert!(matches!(p.try_mul(&r), Err(Error::Structural(_))));
    }

    #[test]
    fn truncated_substitution() {
        let n = 1;
        // x -> x + t*x^2 in x^2, truncated at t^1: x^2 + 2 t x^3
        let p = Polynomial::x(n, 1).pow(2);
        let img = &Polynomial::x(n, 1) + &(&Polynomial::t(n) * &Polynomial::x(n, 1).pow(2));
        let got = p.substitute_x(&[img], 1).unwrap();
        let want = &p + &(&Polynomial::t(n) * &Polynomial::x(n, 1).pow(3)).scale(&q(2, 1));
        assert_eq!(got, want);
    }
}
