//! Exact rational arithmetic and canonical sparse polynomials over the
//! alphabet `t`, `x[1..n]`, `a[1..n,1..n]`.

mod matrix;
mod monomial;
mod parse;
mod poly;

pub use matrix::{rational_determinant, PolyMatrix};
pub use monomial::{a_monomials, Monomial, Var};
pub use parse::{parse_polynomial, parse_rational};
pub use poly::Polynomial;

/// Arbitrary-precision rational; always reduced with positive denominator.
pub type Rational = num_rational::BigRational;

/// A monomial with a sign, as produced by the combinatorial weight formulas.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct SignedMonomial {
    pub negative: bool,
    pub monomial: Monomial,
}

impl SignedMonomial {
    pub fn to_polynomial(&self) -> Polynomial {
        let c = Rational::from_integer(if self.negative { (-1).into() } else { 1.into() });
        Polynomial::term(c, self.monomial.clone())
    }
}

impl std::fmt::Display for SignedMonomial {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}{}", if self.negative { "-" } else { "+" }, self.monomial)
    }
}
