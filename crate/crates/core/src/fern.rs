//! Fern weight elements `z(fern_{d,k}, (u0, uk; nu))`.
//!
//! A fern of length `k` is a path `v_0, ..., v_k` where each `v_{i-1}` also
//! carries `d - 1` leaves labelled by row `nu(i)`. The element sums, over all
//! labels of the interior path vertices, the product of `a[parent, child]`
//! over every edge.

use serde::Serialize;

use crate::algebra::{Monomial, Polynomial, Rational, Var};
use crate::combinatorics::LevelLabeling;
use crate::error::{domain, Result};
use crate::generators::unit_or_zero;

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct FernLabeling {
    pub d: u32,
    pub n: usize,
    pub k: usize,
    pub u0: usize,
    pub uk: usize,
    pub nu: LevelLabeling,
}

impl FernLabeling {
    pub fn new(d: u32, n: usize, u0: usize, uk: usize, nu: LevelLabeling) -> FernLabeling {
        FernLabeling { d, n, k: nu.levels(), u0, uk, nu }
    }

    pub fn validate(&self) -> Result<()> {
        if self.d == 0 || self.n == 0 {
            return domain("need d >= 1 and n >= 1");
        }
        for u in [self.u0, self.uk] {
            if u == 0 || u > self.n {
                return domain(format!("end label {u} outside [1,{}]", self.n));
            }
        }
        self.nu.validate(self.k, self.d, self.n)
    }
}

/// The monomial of one path labelling `lambda = (u0, ..., uk)`.
pub fn path_monomial(n: usize, lambda: &[usize], nu: &LevelLabeling) -> Monomial {
    let mut powers = Vec::with_capacity(lambda.len() * 2);
    for i in 1..lambda.len() {
        let parent = lambda[i - 1];
        powers.push((Var::A(parent, lambda[i]), 1));
        for &l in nu.row(i) {
            powers.push((Var::A(parent, l), 1));
        }
    }
    Monomial::from_powers(n, powers).expect("labels validated")
}

/// Every path `(u0, l_1, ..., l_{k-1}, uk)` over `[1, n]`, lexicographic in the interior.
pub fn paths(n: usize, k: usize, u0: usize, uk: usize) -> Vec<Vec<usize>> {
    if k == 0 {
        return if u0 == uk { vec![vec![u0]] } else { Vec::new() };
    }
    let mut out = Vec::new();
    let mut cur = vec![u0];
    fn rec(n: usize, k: usize, uk: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            cur.push(uk);
            out.push(cur.clone());
            cur.pop();
            return;
        }
        for l in 1..=n {
            cur.push(l);
            rec(n, k, uk, cur, out);
            cur.pop();
        }
    }
    rec(n, k, uk, &mut cur, &mut out);
    out
}

/// `z(fern_{d,k}, (u0, uk; nu))`; for `k = 0` this is `1` when `u0 = uk` and `0` otherwise.
pub fn z_fern(fl: &FernLabeling) -> Result<Polynomial> {
    fl.validate()?;
    if fl.k == 0 {
        return Ok(unit_or_zero(fl.n, fl.u0 == fl.uk));
    }
    let one = Rational::from_integer(1.into());
    let terms = paths(fl.n, fl.k, fl.u0, fl.uk)
        .into_iter()
        .map(|lambda| (one.clone(), path_monomial(fl.n, &lambda, &fl.nu)));
    Polynomial::from_terms(fl.n, terms)
}

/// True when `z` is zero or homogeneous of `a`-degree `k * d`.
pub fn z_fern_is_homogeneous(fl: &FernLabeling) -> Result<bool> {
    let z = z_fern(fl)?;
    Ok(crate::generators::is_homogeneous_of(&z, fl.k as u32 * fl.d))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{parse_polynomial, PolyMatrix};

    #[test]
    fn two_step_fern_d2() {
        let fl = FernLabeling::new(2, 2, 1, 2, LevelLabeling::new(vec![vec![1], vec![1]]));
        let want = parse_polynomial("a[1,1]^3*a[1,2] + a[1,1]*a[1,2]*a[2,1]*a[2,2]", 2).unwrap();
        assert_eq!(z_fern(&fl).unwrap(), want);
        assert!(z_fern_is_homogeneous(&fl).unwrap());
    }

    #[test]
    fn empty_path() {
        let same = FernLabeling::new(2, 2, 1, 1, LevelLabeling::empty(0));
        assert_eq!(z_fern(&same).unwrap(), Polynomial::one(2));
        let diff = FernLabeling::new(2, 2, 1, 2, LevelLabeling::empty(0));
        assert!(z_fern(&diff).unwrap().is_zero());
        assert!(z_fern_is_homogeneous(&diff).unwrap());
    }

    #[test]
    fn d1_matches_matrix_power() {
        for n in 1..=3usize {
            let a = PolyMatrix::from_fn(n, |i, j| Polynomial::a(n, i + 1, j + 1)).unwrap();
            let mut power = a.clone();
            for k in 1..=3usize {
                for u0 in 1..=n {
                    for uk in 1..=n {
                        let fl = FernLabeling::new(1, n, u0, uk, LevelLabeling::empty(k));
                        assert_eq!(&z_fern(&fl).unwrap(), power.get(u0 - 1, uk - 1));
                        assert!(z_fern_is_homogeneous(&fl).unwrap());
                    }
                }
                power = power.try_mul(&a).unwrap();
            }
        }
    }

    #[test]
    fn malformed_labeling_rejected() {
        let fl = FernLabeling::new(2, 2, 1, 2, LevelLabeling::new(vec![vec![1, 1], vec![1]]));
        assert!(z_fern(&fl).is_err());
        let fl = FernLabeling::new(2, 2, 3, 2, LevelLabeling::new(vec![vec![1]]));
        assert!(z_fern(&fl).is_err());
    }
}
