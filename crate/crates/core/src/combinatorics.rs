//! Compositions, level labelings, subset permutations and last-rep indices.

use std::collections::BTreeMap;
use std::fmt;

use serde::Serialize;

use crate::error::{domain, Error, Result};

/// A composition `(alpha(1), ..., alpha(n))` of its weight into `n` nonnegative parts.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(transparent)]
pub struct Composition(Vec<u32>);

impl Composition {
    pub fn new(parts: Vec<u32>) -> Composition {
        Composition(parts)
    }

    pub fn zero(n: usize) -> Composition {
        Composition(vec![0; n])
    }

    pub fn parts(&self) -> &[u32] {
        &self.0
    }

    /// 1-based part access.
    pub fn part(&self, r: usize) -> u32 {
        self.0[r - 1]
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn weight(&self) -> u32 {
        self.0.iter().sum()
    }

    /// Pointwise difference; a negative part is a domain error.
    pub fn sub(&self, other: &Composition) -> Result<Composition> {
        self.checked_sub(other)
            .ok_or_else(|| Error::Domain(format!("{self} - {other} has a negative part")))
    }

    pub fn checked_sub(&self, other: &Composition) -> Option<Composition> {
        if self.len() != other.len() {
            return None;
        }
        self.0
            .iter()
            .zip(&other.0)
            .map(|(a, b)| a.checked_sub(*b))
            .collect::<Option<Vec<_>>>()
            .map(Composition)
    }

    pub fn add(&self, other: &Composition) -> Composition {
        Composition(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    /// Content of a label sequence over `[1, n]`.
    pub fn content_of(labels: impl IntoIterator<Item = usize>, n: usize) -> Composition {
        let mut parts = vec![0; n];
        for l in labels {
            parts[l - 1] += 1;
        }
        Composition(parts)
    }
}

impl fmt::Display for Composition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, p) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{p}")?;
        }
        write!(f, ")")
    }
}

/// All compositions of `m` into `n` parts, first part descending:
/// `(m,0,..,0)` first and `(0,..,0,m)` last.
pub fn enumerate_compositions(m: u32, n: usize) -> Vec<Composition> {
    fn rec(pos: usize, left: u32, cur: &mut Vec<u32>, out: &mut Vec<Composition>) {
        if pos + 1 == cur.len() {
            cur[pos] = left;
            out.push(Composition(cur.clone()));
            return;
        }
        for p in (0..=left).rev() {
            cur[pos] = p;
            rec(pos + 1, left - p, cur, out);
        }
    }
    let mut out = Vec::new();
    if n == 0 {
        if m == 0 {
            out.push(Composition(Vec::new()));
        }
        return out;
    }
    rec(0, m, &mut vec![0; n], &mut out);
    out
}

/// A `k`-level labeling: `k` rows, each a `(d-1)`-tuple of labels in `[1, n]`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(transparent)]
pub struct LevelLabeling {
    rows: Vec<Vec<usize>>,
}

impl LevelLabeling {
    pub fn new(rows: Vec<Vec<usize>>) -> LevelLabeling {
        LevelLabeling { rows }
    }

    /// `k` empty rows, the only labeling when `d = 1`.
    pub fn empty(k: usize) -> LevelLabeling {
        LevelLabeling { rows: vec![Vec::new(); k] }
    }

    /// Validates row count, row width `d - 1` and label range.
    pub fn validate(&self, k: usize, d: u32, n: usize) -> Result<()> {
        if self.rows.len() != k {
            return domain(format!("expected {k} levels, got {}", self.rows.len()));
        }
        for (i, row) in self.rows.iter().enumerate() {
            if row.len() != (d - 1) as usize {
                return domain(format!("level {} has width {}, expected {}", i + 1, row.len(), d - 1));
            }
            if let Some(bad) = row.iter().find(|&&l| l == 0 || l > n) {
                return domain(format!("label {bad} outside [1,{n}]"));
            }
        }
        Ok(())
    }

    pub fn levels(&self) -> usize {
        self.rows.len()
    }

    pub fn rows(&self) -> &[Vec<usize>] {
        &self.rows
    }

    /// 1-based row access.
    pub fn row(&self, i: usize) -> &[usize] {
        &self.rows[i - 1]
    }

    pub fn into_rows(self) -> Vec<Vec<usize>> {
        self.rows
    }

    pub fn content(&self, n: usize) -> Composition {
        Composition::content_of(self.rows.iter().flatten().copied(), n)
    }

    /// Parses `1,2;2,1` style text. Empty rows are written as empty segments;
    /// for `d = 1` pass the level count explicitly via [`LevelLabeling::empty`].
    pub fn parse(text: &str) -> Result<LevelLabeling> {
        let text = text.trim();
        if text.is_empty() {
            return Ok(LevelLabeling::new(Vec::new()));
        }
        let rows = text
            .split(';')
            .map(|row| {
                let row = row.trim();
                if row.is_empty() {
                    return Ok(Vec::new());
                }
                row.split(',')
                    .map(|e| {
                        e.trim().parse::<usize>().map_err(|_| Error::Parse {
                            pos: 0,
                            msg: format!("bad label '{e}'"),
                        })
                    })
                    .collect()
            })
            .collect::<Result<_>>()?;
        Ok(LevelLabeling::new(rows))
    }
}

impl fmt::Display for LevelLabeling {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let rows: Vec<String> = self
            .rows
            .iter()
            .map(|r| r.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(","))
            .collect();
        write!(f, "{}", rows.join(";"))
    }
}

/// All multiset permutations of `content` (labels `1..=n` with multiplicities), lexicographic.
pub fn multiset_sequences(content: &Composition) -> Vec<Vec<usize>> {
    fn rec(left: &mut [u32], cur: &mut Vec<usize>, total: usize, out: &mut Vec<Vec<usize>>) {
        if cur.len() == total {
            out.push(cur.clone());
            return;
        }
        for r in 0..left.len() {
            if left[r] > 0 {
                left[r] -= 1;
                cur.push(r + 1);
                rec(left, cur, total, out);
                cur.pop();
                left[r] += 1;
            }
        }
    }
    let mut left = content.parts().to_vec();
    let total = content.weight() as usize;
    let mut out = Vec::new();
    rec(&mut left, &mut Vec::with_capacity(total), total, &mut out);
    out
}

/// `I(alpha, k)`: every `k`-level labeling of width `d - 1` with content `alpha`,
/// in lexicographic order of the flattened label sequence.
pub fn enumerate_level_labelings(alpha: &Composition, k: usize, d: u32) -> Result<Vec<LevelLabeling>> {
    if d == 0 {
        return domain("d must be positive");
    }
    let width = (d - 1) as usize;
    if alpha.weight() as usize != k * width {
        return domain(format!("weight of {alpha} is not {k}*({d}-1)"));
    }
    Ok(multiset_sequences(alpha)
        .into_iter()
        .map(|seq| {
            let rows = if width == 0 {
                vec![Vec::new(); k]
            } else {
                seq.chunks(width).map(<[usize]>::to_vec).collect()
            };
            LevelLabeling::new(rows)
        })
        .collect())
}

/// A subset `S` of `[1, n]` (ascending) with a permutation `sigma` of it.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct SubsetPermutation {
    set: Vec<usize>,
    images: Vec<usize>,
    cycle_count: usize,
}

impl SubsetPermutation {
    pub fn empty() -> SubsetPermutation {
        SubsetPermutation { set: Vec::new(), images: Vec::new(), cycle_count: 0 }
    }

    /// From a map `s -> sigma(s)`; the map must be a bijection of its key set.
    pub fn from_map(map: &BTreeMap<usize, usize>) -> Result<SubsetPermutation> {
        let set: Vec<usize> = map.keys().copied().collect();
        let images: Vec<usize> = map.values().copied().collect();
        let mut sorted = images.clone();
        sorted.sort_unstable();
        if sorted != set {
            return domain("sigma is not a bijection of S");
        }
        let mut seen = BTreeMap::new();
        let mut cycle_count = 0;
        for &s in &set {
            if seen.contains_key(&s) {
                continue;
            }
            cycle_count += 1;
            let mut cur = s;
            while seen.insert(cur, ()).is_none() {
                cur = map[&cur];
            }
        }
        Ok(SubsetPermutation { set, images, cycle_count })
    }

    pub fn set(&self) -> &[usize] {
        &self.set
    }

    /// `sigma(S(i))` for each `i`, aligned with [`SubsetPermutation::set`].
    pub fn images(&self) -> &[usize] {
        &self.images
    }

    pub fn order(&self) -> usize {
        self.set.len()
    }

    pub fn cycle_count(&self) -> usize {
        self.cycle_count
    }

    pub fn contains(&self, s: usize) -> bool {
        self.set.binary_search(&s).is_ok()
    }

    pub fn apply(&self, s: usize) -> Option<usize> {
        self.set.binary_search(&s).ok().map(|i| self.images[i])
    }

    pub fn to_map(&self) -> BTreeMap<usize, usize> {
        self.set.iter().copied().zip(self.images.iter().copied()).collect()
    }

    /// The cycle through `s` starting at `s`: `(s, sigma(s), sigma^2(s), ...)`.
    pub fn cycle_from(&self, s: usize) -> Option<Vec<usize>> {
        let mut cyc = vec![s];
        let mut cur = self.apply(s)?;
        while cur != s {
            cyc.push(cur);
            cur = self.apply(cur)?;
        }
        Some(cyc)
    }
}

fn permutations(items: &[usize]) -> Vec<Vec<usize>> {
    if items.is_empty() {
        return vec![Vec::new()];
    }
    let mut out = Vec::new();
    for i in 0..items.len() {
        let mut rest = items.to_vec();
        let head = rest.remove(i);
        for mut tail in permutations(&rest) {
            tail.insert(0, head);
            out.push(tail);
        }
    }
    out
}

pub(crate) fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    fn rec(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for s in start..=n {
            cur.push(s);
            rec(s + 1, n, k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(1, n, k, &mut Vec::new(), &mut out);
    out
}

/// Every pair `(S, sigma)` with `|S| = k`, subsets lexicographic then image tuples lexicographic.
pub fn enumerate_subset_permutations(n: usize, k: usize) -> Result<Vec<SubsetPermutation>> {
    if k > n {
        return domain(format!("subset order {k} exceeds n={n}"));
    }
    let mut out = Vec::new();
    for set in subsets(n, k) {
        for images in permutations(&set) {
            let map = set.iter().copied().zip(images).collect();
            out.push(SubsetPermutation::from_map(&map)?);
        }
    }
    Ok(out)
}

/// Last-rep indices `(l1, l2)` of a label sequence, indexed from 0.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct LastRep {
    pub l1: usize,
    pub l2: usize,
}

/// `l1` is the largest index whose value reappears later; `l2` is that reappearance.
/// Everything after `l1` is then pairwise distinct, which makes `l2` unique.
pub fn last_rep_indices(lambda: &[usize]) -> Option<LastRep> {
    let mut seen: BTreeMap<usize, usize> = BTreeMap::new();
    for p in (0..lambda.len()).rev() {
        if let Some(&q) = seen.get(&lambda[p]) {
            return Some(LastRep { l1: p, l2: q });
        }
        seen.insert(lambda[p], p);
    }
    None
}

/// Checks the defining conditions of last-rep indices verbatim.
pub fn is_valid_last_rep(lambda: &[usize], lr: LastRep) -> bool {
    if !(lr.l1 < lr.l2 && lr.l2 < lambda.len()) || lambda[lr.l1] != lambda[lr.l2] {
        return false;
    }
    let tail = &lambda[lr.l1 + 1..];
    tail.iter().enumerate().all(|(i, a)| tail[i + 1..].iter().all(|b| a != b))
}

/// Every tuple of length `len` over `[1, n]`, lexicographic.
pub fn all_tuples(n: usize, len: usize) -> Vec<Vec<usize>> {
    let mut out = vec![Vec::new()];
    for _ in 0..len {
        out = out
            .into_iter()
            .flat_map(|t| {
                (1..=n).map(move |l| {
                    let mut t = t.clone();
                    t.push(l);
                    t
                })
            })
            .collect();
    }
    out
}

pub fn binomial(n: u64, k: u64) -> u64 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    (0..k).fold(1u64, |acc, i| acc * (n - i) / (i + 1))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(v: &[u32]) -> Composition {
        Composition::new(v.to_vec())
    }

    #[test]
    fn compositions_small() {
        assert_eq!(enumerate_compositions(1, 2), vec![c(&[1, 0]), c(&[0, 1])]);
        assert_eq!(enumerate_compositions(0, 3), vec![c(&[0, 0, 0])]);
        assert_eq!(enumerate_compositions(2, 2).len(), 3);
    }

    #[test]
    fn composition_counts_match_binomial() {
        for m in 0..=8u32 {
            for n in 1..=4usize {
                let got = enumerate_compositions(m, n).len() as u64;
                assert_eq!(got, binomial(m as u64 + n as u64 - 1, n as u64 - 1), "m={m} n={n}");
            }
        }
    }

    #[test]
    fn composition_difference() {
        assert_eq!(c(&[2, 1]).sub(&c(&[1, 0])).unwrap(), c(&[1, 1]));
        assert_eq!(c(&[2, 1]).sub(&c(&[2, 1])).unwrap(), c(&[0, 0]));
        assert!(matches!(c(&[1, 0]).sub(&c(&[0, 1])), Err(Error::Domain(_))));
    }

    #[test]
    fn level_labelings_small() {
        let got = enumerate_level_labelings(&c(&[1, 1]), 2, 2).unwrap();
        let want = vec![
            LevelLabeling::new(vec![vec![1], vec![2]]),
            LevelLabeling::new(vec![vec![2], vec![1]]),
        ];
        assert_eq!(got, want);
        let d1 = enumerate_level_labelings(&c(&[0, 0]), 3, 1).unwrap();
        assert_eq!(d1, vec![LevelLabeling::empty(3)]);
        let d3 = enumerate_level_labelings(&c(&[2, 0]), 1, 3).unwrap();
        assert_eq!(d3, vec![LevelLabeling::new(vec![vec![1, 1]])]);
        assert!(enumerate_level_labelings(&c(&[2, 0]), 1, 2).is_err());
    }

    fn factorial(n: u64) -> u64 {
        (1..=n).product()
    }

    #[test]
    fn level_labeling_counts_are_multinomial() {
        for d in 1..=3u32 {
            for k in 0..=4usize {
                for n in 1..=3usize {
                    for alpha in enumerate_compositions(k as u32 * (d - 1), n) {
                        let got = enumerate_level_labelings(&alpha, k, d).unwrap();
                        let multinomial = factorial(alpha.weight() as u64)
                            / alpha.parts().iter().map(|&p| factorial(p as u64)).product::<u64>();
                        assert_eq!(got.len() as u64, multinomial);
                        for nu in &got {
                            assert_eq!(nu.content(n), alpha);
                            nu.validate(k, d, n).unwrap();
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn subset_permutations_small() {
        let two = enumerate_subset_permutations(2, 2).unwrap();
        assert_eq!(two.len(), 2);
        assert_eq!(two[0].images(), &[1, 2]);
        assert_eq!(two[0].cycle_count(), 2);
        assert_eq!(two[1].images(), &[2, 1]);
        assert_eq!(two[1].cycle_count(), 1);
        let none = enumerate_subset_permutations(2, 0).unwrap();
        assert_eq!(none, vec![SubsetPermutation::empty()]);
        let ones = enumerate_subset_permutations(3, 1).unwrap();
        assert_eq!(ones.len(), 3);
        assert!(ones.iter().all(|sp| sp.cycle_count() == 1));
        for n in 1..=4 {
            for k in 0..=n {
                let expect = binomial(n as u64, k as u64) * factorial(k as u64);
                assert_eq!(enumerate_subset_permutations(n, k).unwrap().len() as u64, expect);
            }
        }
    }

    #[test]
    fn last_rep_examples() {
        assert_eq!(last_rep_indices(&[1, 2, 3]), None);
        assert_eq!(last_rep_indices(&[1, 2, 1, 2]), Some(LastRep { l1: 1, l2: 3 }));
        assert_eq!(last_rep_indices(&[1, 1, 1]), Some(LastRep { l1: 1, l2: 2 }));
        assert!(!is_valid_last_rep(&[1, 2, 1, 2], LastRep { l1: 0, l2: 2 }));
    }

    #[test]
    fn labeling_text() {
        let nu = LevelLabeling::parse("1,2;2,1").unwrap();
        assert_eq!(nu.rows(), &[vec![1, 2], vec![2, 1]]);
        assert_eq!(nu.to_string(), "1,2;2,1");
        assert!(LevelLabeling::parse("1,x").is_err());
    }
}
