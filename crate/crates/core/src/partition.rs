//! Integer partitions, their orders and typed refinements.

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Env var overriding [`DEFAULT_ENUMERATION_CAP`].
pub const CAP_ENV: &str = "NILORBIT_BRUTE_CAP";
pub const DEFAULT_ENUMERATION_CAP: usize = 40;

/// A weakly decreasing list of positive parts.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Partition {
    parts: Vec<usize>,
}

/// Result of comparing two partitions.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum OrderVerdict {
    Less,
    Greater,
    Equal,
    Incomparable,
}

impl fmt::Display for OrderVerdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            OrderVerdict::Less => "Less",
            OrderVerdict::Greater => "Greater",
            OrderVerdict::Equal => "Equal",
            OrderVerdict::Incomparable => "Incomparable",
        };
        f.write_str(s)
    }
}

/// Typed flags of a partition.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct PartitionClass {
    pub symplectic: bool,
    pub orthogonal: bool,
    pub special_symplectic: bool,
}

/// Which partitions [`enumerate_partitions`] keeps.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum ClassFilter {
    #[default]
    Any,
    Symplectic,
    Orthogonal,
    SpecialSymplectic,
}

impl ClassFilter {
    pub fn accepts(self, parts: &[usize]) -> bool {
        match self {
            ClassFilter::Any => true,
            ClassFilter::Symplectic => symplectic_parts(parts),
            ClassFilter::Orthogonal => orthogonal_parts(parts),
            ClassFilter::SpecialSymplectic => special_parts(parts),
        }
    }
}

impl Partition {
    /// Sorts and strips zeros.
    pub fn new(mut parts: Vec<usize>) -> Self {
        parts.retain(|&p| p > 0);
        parts.sort_unstable_by(|a, b| b.cmp(a));
        Partition { parts }
    }

    pub fn empty() -> Self {
        Partition { parts: Vec::new() }
    }

    /// Builds from `(part, multiplicity)` pairs, e.g. `[(3, 2), (1, 4)]`.
    pub fn from_powers(powers: &[(usize, usize)]) -> Self {
        let mut parts = Vec::new();
        for &(p, m) in powers {
            parts.extend(std::iter::repeat_n(p, m));
        }
        Partition::new(parts)
    }

    /// Caller guarantees the slice is already normalized.
    pub(crate) fn from_sorted(parts: &[usize]) -> Self {
        debug_assert!(parts.windows(2).all(|w| w[0] >= w[1]));
        debug_assert!(parts.iter().all(|&p| p > 0));
        Partition {
            parts: parts.to_vec(),
        }
    }

    pub fn parts(&self) -> &[usize] {
        &self.parts
    }

    pub fn size(&self) -> usize {
        self.parts.iter().sum()
    }

    pub fn len(&self) -> usize {
        self.parts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.parts.is_empty()
    }

    /// Parts grouped as `(part, multiplicity)`, largest first.
    pub fn powers(&self) -> Vec<(usize, usize)> {
        let mut out: Vec<(usize, usize)> = Vec::new();
        for &p in &self.parts {
            match out.last_mut() {
                Some((q, m)) if *q == p => *m += 1,
                _ => out.push((p, 1)),
            }
        }
        out
    }

    pub fn prefix_sums(&self) -> Vec<usize> {
        prefix_sums(&self.parts)
    }

    pub fn is_symplectic(&self) -> bool {
        symplectic_parts(&self.parts)
    }

    pub fn is_orthogonal(&self) -> bool {
        orthogonal_parts(&self.parts)
    }

    pub fn is_special_symplectic(&self) -> bool {
        special_parts(&self.parts)
    }

    /// Exponent form such as `[3^2,1^4]`.
    pub fn to_compact_string(&self) -> String {
        let body: Vec<String> = self
            .powers()
            .into_iter()
            .map(|(p, m)| if m == 1 { p.to_string() } else { format!("{p}^{m}") })
            .collect();
        format!("[{}]", body.join(","))
    }
}

impl fmt::Display for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let body: Vec<String> = self.parts.iter().map(|p| p.to_string()).collect();
        write!(f, "[{}]", body.join(","))
    }
}

impl FromStr for Partition {
    type Err = Error;

    /// Accepts `[4,2,1]`, `[3^2,1^4]` and `[]`; whitespace is ignored.
    fn from_str(s: &str) -> Result<Self> {
        let compact: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        let inner = compact
            .strip_prefix('[')
            .and_then(|r| r.strip_suffix(']'))
            .ok_or_else(|| Error::parse(s, "partition must be enclosed in [ ]"))?;
        if inner.is_empty() {
            return Ok(Partition::empty());
        }
        let mut raw = Vec::new();
        for term in inner.split(',') {
            let (base, exp) = match term.split_once('^') {
                Some((b, e)) => (b, Some(e)),
                None => (term, None),
            };
            let part: i64 = base
                .parse()
                .map_err(|_| Error::parse(term, "expected an integer part"))?;
            let mult: usize = match exp {
                Some(e) => e
                    .parse()
                    .map_err(|_| Error::parse(term, "expected a non-negative exponent"))?,
                None => 1,
            };
            raw.extend(std::iter::repeat_n(part, mult));
        }
        normalize(&raw)
    }
}

/// Strips zeros and sorts; negative entries are rejected.
pub fn normalize(raw: &[i64]) -> Result<Partition> {
    let mut parts = Vec::with_capacity(raw.len());
    for &x in raw {
        if x < 0 {
            return Err(Error::validation(format!("negative part {x}")));
        }
        parts.push(x as usize);
    }
    Ok(Partition::new(parts))
}

pub fn transpose(p: &Partition) -> Partition {
    let first = p.parts.first().copied().unwrap_or(0);
    let parts = (1..=first)
        .map(|j| p.parts.iter().take_while(|&&q| q >= j).count())
        .collect();
    Partition { parts }
}

fn prefix_sums(parts: &[usize]) -> Vec<usize> {
    parts
        .iter()
        .scan(0usize, |acc, &p| {
            *acc += p;
            Some(*acc)
        })
        .collect()
}

fn same_size(p: &Partition, q: &Partition) -> Result<()> {
    if p.size() != q.size() {
        return Err(Error::validation(format!(
            "cannot compare {p} (size {}) with {q} (size {})",
            p.size(),
            q.size()
        )));
    }
    Ok(())
}

/// Dominance order on partitions of the same integer.
pub fn dominance_compare(p: &Partition, q: &Partition) -> Result<OrderVerdict> {
    same_size(p, q)?;
    Ok(dominance_parts(&p.parts, &q.parts))
}

pub(crate) fn dominance_parts(p: &[usize], q: &[usize]) -> OrderVerdict {
    let (mut sp, mut sq) = (0usize, 0usize);
    let (mut le, mut ge) = (true, true);
    for i in 0..p.len().max(q.len()) {
        sp += p.get(i).copied().unwrap_or(0);
        sq += q.get(i).copied().unwrap_or(0);
        le &= sp <= sq;
        ge &= sp >= sq;
    }
    match (le, ge) {
        (true, true) => OrderVerdict::Equal,
        (true, false) => OrderVerdict::Less,
        (false, true) => OrderVerdict::Greater,
        (false, false) => OrderVerdict::Incomparable,
    }
}

/// Lexicographic order, padding with zeros. Total.
pub fn lex_compare(p: &Partition, q: &Partition) -> Result<OrderVerdict> {
    same_size(p, q)?;
    Ok(match p.parts.cmp(&q.parts) {
        Ordering::Less => OrderVerdict::Less,
        Ordering::Equal => OrderVerdict::Equal,
        Ordering::Greater => OrderVerdict::Greater,
    })
}

fn symplectic_parts(parts: &[usize]) -> bool {
    runs(parts).all(|(p, m)| p % 2 == 0 || m % 2 == 0)
}

fn orthogonal_parts(parts: &[usize]) -> bool {
    runs(parts).all(|(p, m)| p % 2 == 1 || m % 2 == 0)
}

/// Symplectic with symplectic transpose. The transpose has part `v`
/// with multiplicity `parts[v-1] - parts[v]`.
pub(crate) fn special_parts(parts: &[usize]) -> bool {
    if !symplectic_parts(parts) {
        return false;
    }
    (1..=parts.len()).step_by(2).all(|v| {
        let next = parts.get(v).copied().unwrap_or(0);
        (parts[v - 1] - next).is_multiple_of(2)
    })
}

fn runs(parts: &[usize]) -> impl Iterator<Item = (usize, usize)> + '_ {
    let mut i = 0;
    std::iter::from_fn(move || {
        if i >= parts.len() {
            return None;
        }
        let p = parts[i];
        let start = i;
        while i < parts.len() && parts[i] == p {
            i += 1;
        }
        Some((p, i - start))
    })
}

pub fn classify(p: &Partition) -> PartitionClass {
    PartitionClass {
        symplectic: p.is_symplectic(),
        orthogonal: p.is_orthogonal(),
        special_symplectic: p.is_special_symplectic(),
    }
}

/// Lowers the last part by one.
pub fn decrement_tail(q: &Partition) -> Result<Partition> {
    let mut parts = q.parts.clone();
    match parts.last_mut() {
        None => Err(Error::validation("decrement_tail of the empty partition")),
        Some(last) => {
            *last -= 1;
            if *last == 0 {
                parts.pop();
            }
            Ok(Partition { parts })
        }
    }
}

/// Prepends `head` to `tail`.
pub fn compose_descent(head: i64, tail: &Partition) -> Result<Partition> {
    if head <= 0 {
        return Err(Error::validation(format!("head part must be positive, got {head}")));
    }
    let mut parts = tail.parts.clone();
    parts.push(head as usize);
    Ok(Partition::new(parts))
}

/// Current cap for brute-force enumeration.
pub fn enumeration_cap() -> usize {
    std::env::var(CAP_ENV)
        .ok()
        .and_then(|v| v.parse().ok())
        .unwrap_or(DEFAULT_ENUMERATION_CAP)
}

/// All partitions of `n` passing `filter`, lexicographically descending.
pub fn enumerate_partitions(n: usize, filter: ClassFilter) -> Result<Vec<Partition>> {
    let cap = enumeration_cap();
    if n > cap {
        return Err(Error::validation(format!(
            "n = {n} exceeds the enumeration cap {cap} (set {CAP_ENV} to raise it)"
        )));
    }
    let mut out = Vec::new();
    walk(n, Bound::Free, &mut |parts| {
        if filter.accepts(parts) {
            out.push(Partition::from_sorted(parts));
        }
        true
    });
    Ok(out)
}

/// Prefix-sum constraint for [`walk`].
#[derive(Clone, Copy, Debug)]
pub(crate) enum Bound<'a> {
    Free,
    /// Only partitions dominated by the one with these prefix sums.
    Below(&'a [usize]),
    /// Only partitions dominating the one with these prefix sums.
    Above(&'a [usize]),
}

/// Visits partitions of `n` in lexicographically descending order.
/// The visitor returns `false` to stop early.
pub(crate) fn walk(n: usize, bound: Bound<'_>, visit: &mut dyn FnMut(&[usize]) -> bool) {
    let mut cur = Vec::with_capacity(n);
    walk_rec(n, n, 0, bound, &mut cur, visit);
}

fn walk_rec(
    n: usize,
    max_part: usize,
    sum: usize,
    bound: Bound<'_>,
    cur: &mut Vec<usize>,
    visit: &mut dyn FnMut(&[usize]) -> bool,
) -> bool {
    if sum == n {
        return visit(cur);
    }
    let idx = cur.len();
    let target = |ps: &[usize]| ps.get(idx).copied().unwrap_or(n);
    let mut hi = max_part.min(n - sum);
    let mut lo = 1;
    match bound {
        Bound::Free => {}
        Bound::Below(ps) => hi = hi.min(target(ps).saturating_sub(sum)),
        Bound::Above(ps) => lo = lo.max(target(ps).saturating_sub(sum)),
    }
    if hi < lo {
        return true;
    }
    for x in (lo..=hi).rev() {
        cur.push(x);
        let go_on = walk_rec(n, x, sum + x, bound, cur, visit);
        cur.pop();
        if !go_on {
            return false;
        }
    }
    true
}
