//! Type C roots, torus gradings and signed permutations.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::partition::Partition;

/// Shape of a positive root; indices are 1-based with `i < j`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum RootKind {
    EminusE(usize, usize),
    EplusE(usize, usize),
    TwoE(usize),
}

/// A root of type C: a positive shape with a sign.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Root {
    pub kind: RootKind,
    pub positive: bool,
}

impl Root {
    pub fn minus(i: usize, j: usize) -> Root {
        Root::from_coeffs(&[(i, 1), (j, -1)]).expect("e_i - e_j with i != j")
    }

    pub fn plus(i: usize, j: usize) -> Root {
        Root::from_coeffs(&[(i, 1), (j, 1)]).expect("e_i + e_j")
    }

    pub fn two(i: usize) -> Root {
        Root::from_coeffs(&[(i, 2)]).expect("2e_i")
    }

    pub fn neg(self) -> Root {
        Root {
            kind: self.kind,
            positive: !self.positive,
        }
    }

    /// Largest coordinate index involved.
    pub fn max_index(&self) -> usize {
        match self.kind {
            RootKind::EminusE(_, j) | RootKind::EplusE(_, j) => j,
            RootKind::TwoE(i) => i,
        }
    }

    pub fn is_long(&self) -> bool {
        matches!(self.kind, RootKind::TwoE(_))
    }

    /// Nonzero coordinates in the `e` basis.
    pub fn coeffs(&self) -> BTreeMap<usize, i64> {
        let s = if self.positive { 1 } else { -1 };
        let mut out = BTreeMap::new();
        match self.kind {
            RootKind::EminusE(i, j) => {
                out.insert(i, s);
                out.insert(j, -s);
            }
            RootKind::EplusE(i, j) => {
                out.insert(i, s);
                out.insert(j, s);
            }
            RootKind::TwoE(i) => {
                out.insert(i, 2 * s);
            }
        }
        out
    }

    /// The root with these coordinates, if there is one.
    pub fn from_coeffs(coeffs: &[(usize, i64)]) -> Option<Root> {
        let mut map: BTreeMap<usize, i64> = BTreeMap::new();
        for &(i, c) in coeffs {
            *map.entry(i).or_default() += c;
        }
        Root::from_map(&map)
    }

    fn from_map(map: &BTreeMap<usize, i64>) -> Option<Root> {
        let nz: Vec<(usize, i64)> = map.iter().filter(|(_, &c)| c != 0).map(|(&i, &c)| (i, c)).collect();
        if nz.iter().any(|&(i, _)| i == 0) {
            return None;
        }
        match nz.as_slice() {
            [(i, c)] if c.abs() == 2 => Some(Root {
                kind: RootKind::TwoE(*i),
                positive: *c > 0,
            }),
            [(i, ci), (j, cj)] if ci.abs() == 1 && cj.abs() == 1 => {
                let kind = if ci == cj { RootKind::EplusE(*i, *j) } else { RootKind::EminusE(*i, *j) };
                Some(Root { kind, positive: *ci > 0 })
            }
            _ => None,
        }
    }

    /// `self + other` when that is a root.
    pub fn add(&self, other: &Root) -> Option<Root> {
        self.combine(1, other, 1)
    }

    /// `p*self + q*other` when that is a root.
    pub fn combine(&self, p: i64, other: &Root, q: i64) -> Option<Root> {
        let mut map = BTreeMap::new();
        for (i, c) in self.coeffs() {
            *map.entry(i).or_insert(0) += p * c;
        }
        for (i, c) in other.coeffs() {
            *map.entry(i).or_insert(0) += q * c;
        }
        Root::from_map(&map)
    }

    /// Matrix positions `(row, col)`, 1-based, whose root is `self` in
    /// `Sp(2n)` with the antidiagonal form. Short roots have two.
    pub fn positions(&self, n: usize) -> Vec<(usize, usize)> {
        let idx = |sign: i64, i: usize| if sign > 0 { i } else { 2 * n + 1 - i };
        let terms: Vec<(usize, i64)> = match self.kind {
            RootKind::TwoE(i) => vec![(i, 1), (i, 1)],
            RootKind::EminusE(i, j) => vec![(i, 1), (j, -1)],
            RootKind::EplusE(i, j) => vec![(i, 1), (j, 1)],
        };
        let s = if self.positive { 1 } else { -1 };
        let (i, si) = (terms[0].0, terms[0].1 * s);
        let (j, sj) = (terms[1].0, terms[1].1 * s);
        let a = (idx(si, i), idx(-sj, j));
        let b = (idx(sj, j), idx(-si, i));
        let mut out = vec![a];
        if b != a {
            out.push(b);
        }
        out.sort();
        out
    }

    /// The position with the smaller row index.
    pub fn canonical_position(&self, n: usize) -> (usize, usize) {
        self.positions(n)[0]
    }

    /// Root attached to matrix position `(row, col)`, if any.
    pub fn at_position(row: usize, col: usize, n: usize) -> Option<Root> {
        let eps = |k: usize| -> (usize, i64) {
            if k <= n {
                (k, 1)
            } else {
                (2 * n + 1 - k, -1)
            }
        };
        let (i, si) = eps(row);
        let (j, sj) = eps(col);
        Root::from_coeffs(&[(i, si), (j, -sj)])
    }

    /// Pairing with a cocharacter.
    pub fn weight(&self, w: &WeightVector) -> i64 {
        self.coeffs().iter().map(|(&i, &c)| c * w.weights[i - 1]).sum()
    }
}

impl fmt::Display for Root {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (i, c) in self.coeffs() {
            let sign = if c < 0 {
                "-"
            } else if first {
                ""
            } else {
                "+"
            };
            let mag = if c.abs() == 2 { "2" } else { "" };
            write!(f, "{sign}{mag}e{i}")?;
            first = false;
        }
        Ok(())
    }
}

impl FromStr for Root {
    type Err = Error;

    /// Accepts `e1+e3`, `e2-e5`, `2e4`, `-e2-e3` and the like.
    fn from_str(s: &str) -> Result<Self> {
        let text: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        if text.is_empty() {
            return Err(Error::parse(s, "empty root"));
        }
        if !text.is_ascii() {
            return Err(Error::parse(s, "unexpected character"));
        }
        let mut map: BTreeMap<usize, i64> = BTreeMap::new();
        let mut rest = text.as_str();
        while !rest.is_empty() {
            let (sign, after) = match rest.as_bytes()[0] {
                b'+' => (1, &rest[1..]),
                b'-' => (-1, &rest[1..]),
                _ => (1, rest),
            };
            if after.is_empty() {
                return Err(Error::parse(s, "dangling sign"));
            }
            let end = after[1..].find(['+', '-']).map(|p| p + 1).unwrap_or(after.len());
            let term = &after[..end];
            let (coef, idx) = term
                .split_once('e')
                .ok_or_else(|| Error::parse(term, "expected a term like e3 or 2e3"))?;
            let coef: i64 = match coef {
                "" => 1,
                c => c.parse().map_err(|_| Error::parse(term, "bad coefficient"))?,
            };
            let idx: usize = idx
                .parse()
                .ok()
                .filter(|&i| i > 0)
                .ok_or_else(|| Error::parse(term, "index must be a positive integer"))?;
            *map.entry(idx).or_default() += sign * coef;
            rest = &after[end..];
        }
        Root::from_map(&map).ok_or_else(|| Error::parse(s, "not a root of type C"))
    }
}

/// All roots of `Sp(2n)`, positive ones first.
pub fn all_roots(n: usize) -> Vec<Root> {
    let mut pos = Vec::new();
    for i in 1..=n {
        for j in i + 1..=n {
            pos.push(Root::minus(i, j));
            pos.push(Root::plus(i, j));
        }
        pos.push(Root::two(i));
    }
    let neg: Vec<Root> = pos.iter().map(|r| r.neg()).collect();
    pos.extend(neg);
    pos
}

/// Integer weights `w_1..w_{2N}` with `w_{2N+1-i} = -w_i`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct WeightVector {
    pub weights: Vec<i64>,
}

impl WeightVector {
    pub fn new(weights: Vec<i64>) -> Result<Self> {
        let len = weights.len();
        if !len.is_multiple_of(2) {
            return Err(Error::validation(format!("weight vector has odd length {len}")));
        }
        for i in 0..len / 2 {
            if weights[len - 1 - i] != -weights[i] {
                return Err(Error::validation(format!(
                    "weights not antisymmetric at position {}: {} vs {}",
                    i + 1,
                    weights[i],
                    weights[len - 1 - i]
                )));
            }
        }
        Ok(WeightVector { weights })
    }

    /// Half the length: the rank `N`.
    pub fn rank(&self) -> usize {
        self.weights.len() / 2
    }
}

impl fmt::Display for WeightVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let body: Vec<String> = self.weights.iter().map(|w| w.to_string()).collect();
        write!(f, "({})", body.join(","))
    }
}

/// How the per-part weight blocks are laid out.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Arrangement {
    /// Blocks in part order: each pair of equal parts gives a full block,
    /// an unpaired even part its positive half.
    PaperConcat,
    /// All weights sorted descending.
    Dominant,
}

fn block(q: usize) -> impl Iterator<Item = i64> {
    let q = q as i64;
    (0..q).map(move |t| q - 1 - 2 * t)
}

/// The grading attached to a symplectic partition.
pub fn torus_weights_from_partition(p: &Partition, arrangement: Arrangement) -> Result<WeightVector> {
    if !p.is_symplectic() {
        return Err(Error::validation(format!("{p} is not symplectic")));
    }
    let weights: Vec<i64> = match arrangement {
        Arrangement::Dominant => {
            let mut w: Vec<i64> = p.parts().iter().flat_map(|&q| block(q)).collect();
            w.sort_unstable_by(|a, b| b.cmp(a));
            w
        }
        Arrangement::PaperConcat => {
            let mut half: Vec<i64> = Vec::new();
            for (q, mult) in p.powers() {
                for _ in 0..mult / 2 {
                    half.extend(block(q));
                }
                if mult % 2 == 1 {
                    half.extend(block(q).filter(|&w| w > 0));
                }
            }
            let mirror: Vec<i64> = half.iter().rev().map(|w| -w).collect();
            half.extend(mirror);
            half
        }
    };
    WeightVector::new(weights)
}

/// Every root (of either sign) with weight at least 2.
pub fn v_p2(p: &Partition, arrangement: Arrangement) -> Result<BTreeSet<Root>> {
    let w = torus_weights_from_partition(p, arrangement)?;
    Ok(roots_of_weight_at_least(&w, 2))
}

pub fn roots_of_weight_at_least(w: &WeightVector, min: i64) -> BTreeSet<Root> {
    all_roots(w.rank()).into_iter().filter(|r| r.weight(w) >= min).collect()
}

/// A signed permutation: `e_i` maps to `sign * e_|image[i-1]|`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct SignedPermutation {
    image: Vec<i64>,
}

impl SignedPermutation {
    pub fn new(image: Vec<i64>) -> Result<Self> {
        let n = image.len();
        let mut seen = vec![false; n + 1];
        for &x in &image {
            let a = x.unsigned_abs() as usize;
            if a == 0 || a > n || seen[a] {
                return Err(Error::validation(format!("{image:?} is not a signed permutation of 1..{n}")));
            }
            seen[a] = true;
        }
        Ok(SignedPermutation { image })
    }

    pub fn identity(n: usize) -> Self {
        SignedPermutation {
            image: (1..=n as i64).collect(),
        }
    }

    pub fn rank(&self) -> usize {
        self.image.len()
    }

    /// Image of `e_i` as `(index, sign)`.
    pub fn apply_index(&self, i: usize) -> (usize, i64) {
        let x = self.image[i - 1];
        (x.unsigned_abs() as usize, x.signum())
    }

    pub fn apply(&self, root: &Root) -> Result<Root> {
        let mut out = Vec::new();
        for (i, c) in root.coeffs() {
            if i > self.rank() {
                return Err(Error::validation(format!("{root} has index beyond rank {}", self.rank())));
            }
            let (j, s) = self.apply_index(i);
            out.push((j, s * c));
        }
        Ok(Root::from_coeffs(&out).expect("signed permutations preserve roots"))
    }

    /// Permutes a weight vector so that `root.weight(w) == apply(root).weight(act(w))`.
    pub fn act_on_weights(&self, w: &WeightVector) -> Result<WeightVector> {
        let n = w.rank();
        if n != self.rank() {
            return Err(Error::validation(format!("rank mismatch: {} vs {n}", self.rank())));
        }
        let mut half = vec![0i64; n];
        for i in 1..=n {
            let (j, s) = self.apply_index(i);
            half[j - 1] = s * w.weights[i - 1];
        }
        let mirror: Vec<i64> = half.iter().rev().map(|x| -x).collect();
        half.extend(mirror);
        WeightVector::new(half)
    }
}

impl fmt::Display for SignedPermutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let body: Vec<String> = self.image.iter().map(|x| x.to_string()).collect();
        write!(f, "[{}]", body.join(","))
    }
}

impl FromStr for SignedPermutation {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let text: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        let inner = text
            .strip_prefix('[')
            .and_then(|r| r.strip_suffix(']'))
            .ok_or_else(|| Error::parse(s, "signed permutation must be enclosed in [ ]"))?;
        if inner.is_empty() {
            return SignedPermutation::new(Vec::new());
        }
        let image = inner
            .split(',')
            .map(|t| t.parse::<i64>().map_err(|_| Error::parse(t, "expected a signed integer")))
            .collect::<Result<Vec<i64>>>()?;
        SignedPermutation::new(image)
    }
}

/// Image of a root set under a Weyl element.
pub fn weyl_conjugate_roots(w: &SignedPermutation, roots: &BTreeSet<Root>) -> Result<BTreeSet<Root>> {
    roots.iter().map(|r| w.apply(r)).collect()
}

/// Sorting permutation taking the `from` weights to the `to` weights,
/// when they agree as multisets on the first half.
pub fn sorting_permutation(from: &WeightVector, to: &WeightVector) -> Result<SignedPermutation> {
    let n = from.rank();
    if to.rank() != n {
        return Err(Error::validation("rank mismatch"));
    }
    let mut used = vec![false; n];
    let mut image = vec![0i64; n];
    for i in 0..n {
        let w = from.weights[i];
        let found = (0..n)
            .find(|&j| !used[j] && to.weights[j] == w)
            .map(|j| (j, 1))
            .or_else(|| (0..n).find(|&j| !used[j] && to.weights[j] == -w).map(|j| (j, -1)));
        match found {
            Some((j, s)) => {
                used[j] = true;
                image[i] = s * (j as i64 + 1);
            }
            None => return Err(Error::validation(format!("no slot for weight {w}"))),
        }
    }
    SignedPermutation::new(image)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(s: &str) -> Partition {
        s.parse().unwrap()
    }

    fn r(s: &str) -> Root {
        s.parse().unwrap()
    }

    #[test]
    fn root_grammar() {
        assert_eq!(r("e1+e3"), Root::plus(1, 3));
        assert_eq!(r("e2-e5"), Root::minus(2, 5));
        assert_eq!(r("2e4"), Root::two(4));
        assert_eq!(r("-e2-e3"), Root::plus(2, 3).neg());
        assert_eq!(r("-e3-e2"), Root::plus(2, 3).neg());
        assert_eq!(r("e2-e1"), Root::minus(1, 2).neg());
        assert_eq!(r("-2e1"), Root::two(1).neg());
        for root in all_roots(4) {
            assert_eq!(root.to_string().parse::<Root>().unwrap(), root);
        }
        assert!("e1-e1".parse::<Root>().is_err());
        assert!("e0+e1".parse::<Root>().is_err());
        assert!("3e1".parse::<Root>().is_err());
        assert!("x1".parse::<Root>().is_err());
    }

    #[test]
    fn root_count_and_positions() {
        for n in 1..=5 {
            let roots = all_roots(n);
            assert_eq!(roots.len(), 2 * n * n);
            let mut seen = BTreeSet::new();
            for root in &roots {
                for (row, col) in root.positions(n) {
                    assert_eq!(Root::at_position(row, col, n), Some(*root));
                    assert!(seen.insert((row, col)));
                }
            }
            // Off-diagonal positions all carry roots.
            assert_eq!(seen.len(), 4 * n * n - 2 * n);
        }
    }

    #[test]
    fn weights_examples() {
        let w = torus_weights_from_partition(&p("[3,3]"), Arrangement::PaperConcat).unwrap();
        assert_eq!(w.weights, vec![2, 0, -2, 2, 0, -2]);
        let w = torus_weights_from_partition(&p("[2,2]"), Arrangement::Dominant).unwrap();
        assert_eq!(w.weights, vec![1, 1, -1, -1]);
        let w = torus_weights_from_partition(&p("[2]"), Arrangement::PaperConcat).unwrap();
        assert_eq!(w.weights, vec![1, -1]);
        assert!(torus_weights_from_partition(&p("[3,1]"), Arrangement::Dominant).is_err());
        assert!(WeightVector::new(vec![1, 1]).is_err());
    }

    #[test]
    fn root_weight_examples() {
        let w = WeightVector::new(vec![1, 1, -1, -1]).unwrap();
        assert_eq!(r("e1+e2").weight(&w), 2);
        assert_eq!(r("2e2").weight(&w), 2);
        let w = WeightVector::new(vec![2, 0, -2, 2, 0, -2]).unwrap();
        assert_eq!(r("e1-e2").weight(&w), 2);
        assert_eq!(r("e1-e2").neg().weight(&w), -2);
    }

    #[test]
    fn v_p2_examples() {
        let v = v_p2(&p("[2,2]"), Arrangement::Dominant).unwrap();
        let expect: BTreeSet<Root> = [r("e1+e2"), r("2e1"), r("2e2")].into_iter().collect();
        assert_eq!(v, expect);
        let v = v_p2(&p("[2]"), Arrangement::Dominant).unwrap();
        assert_eq!(v, [r("2e1")].into_iter().collect());
        assert!(v_p2(&p("[1,1]"), Arrangement::Dominant).unwrap().is_empty());
    }

    #[test]
    fn weyl_examples() {
        let set: BTreeSet<Root> = [r("e1-e2"), r("2e3")].into_iter().collect();
        assert_eq!(weyl_conjugate_roots(&SignedPermutation::identity(3), &set).unwrap(), set);
        let swap: SignedPermutation = "[2,1]".parse().unwrap();
        let one: BTreeSet<Root> = [r("e1-e2")].into_iter().collect();
        let img = weyl_conjugate_roots(&swap, &one).unwrap();
        assert_eq!(img, [r("e1-e2").neg()].into_iter().collect());
        let w: SignedPermutation = "[2,-1,3]".parse().unwrap();
        assert_eq!(w.apply(&r("e1+e2")).unwrap(), r("e2-e1"));
        assert!("[1,1]".parse::<SignedPermutation>().is_err());
        assert!("[1,3]".parse::<SignedPermutation>().is_err());
    }

    #[test]
    fn sorting_bridges_arrangements() {
        let q = p("[3,3,2]");
        let a = torus_weights_from_partition(&q, Arrangement::PaperConcat).unwrap();
        let d = torus_weights_from_partition(&q, Arrangement::Dominant).unwrap();
        let w = sorting_permutation(&a, &d).unwrap();
        assert_eq!(w.act_on_weights(&a).unwrap(), d);
        let img = weyl_conjugate_roots(&w, &roots_of_weight_at_least(&a, 2)).unwrap();
        assert_eq!(img, roots_of_weight_at_least(&d, 2));
    }
}
