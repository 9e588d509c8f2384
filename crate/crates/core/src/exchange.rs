//! Root-exchange sequences for the metaplectic step and their
//! verification by exact matrix computation.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use num_rational::Rational64;
use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::matrix::{commutator, one_parameter_matrix, QMatrix, UnipotentElement};
use crate::roots::{all_roots, Root, WeightVector};

/// The `alpha` / `beta` families for parameters `(k, b)`, indexed by row `i`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExchangeSequences {
    pub k: usize,
    pub b: usize,
    /// `alpha[i-1][j-1]`.
    pub alpha: Vec<Vec<Root>>,
    pub beta: Vec<Vec<Root>>,
    /// Expected row lengths `m_i`.
    pub lengths: Vec<usize>,
}

impl ExchangeSequences {
    /// Rank `N = (2k+1) b` of the ambient group.
    pub fn rank(&self) -> usize {
        (2 * self.k + 1) * self.b
    }

    pub fn char_support(&self) -> BTreeSet<Root> {
        char_support(self.k)
    }
}

/// One quadruple to check: the ambient root set, the roots carrying the
/// character, and the two sequences to exchange.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExchangeDatum {
    pub c_roots: BTreeSet<Root>,
    pub char_support: BTreeSet<Root>,
    pub x_seq: Vec<Root>,
    pub y_seq: Vec<Root>,
}

fn char_support(k: usize) -> BTreeSet<Root> {
    (1..=2 * k).map(|i| Root::minus(i, i + 1)).collect()
}

/// Row lengths `m_i`.
pub fn exchange_lengths(k: usize, b: usize) -> Vec<usize> {
    (1..=2 * k)
        .map(|i| {
            let lead = if i <= k { i } else { 2 * k + 1 - i };
            lead + (2 * b - 2) * i
        })
        .collect()
}

/// The sequences, with the running index re-based to the start of each
/// range so every entry is a root of `Sp(2N)`.
pub fn exchange_sequences(k: usize, b: usize) -> Result<ExchangeSequences> {
    if k == 0 || b == 0 {
        return Err(Error::validation(format!("need k, b >= 1, got k={k}, b={b}")));
    }
    let n = (2 * k + 1) * b;
    let mut alpha = Vec::new();
    let mut beta = Vec::new();
    for i in 1..=2 * k {
        let mut a = Vec::new();
        let mut bt = Vec::new();
        let mut push = |x: Root| {
            let y = Root::from_coeffs(&[(i, 1), (i + 1, -1)])
                .and_then(|target| target.combine(1, &x, -1))
                .expect("difference of roots is a root");
            a.push(x);
            bt.push(y);
        };
        if i <= k {
            for j in 1..=i {
                push(Root::plus(i, 2 * k + 1 - i + j));
            }
            for jp in 1..=(2 * b - 2) * i {
                push(Root::minus(i, (2 * k + 1) + (2 * b - 2) * i - (jp - 1)));
            }
        } else {
            for j in 1..=2 * k + 1 - i {
                push(Root::plus(i, i + j));
            }
            let count_d = (b - 1) + (2 * b - 2) * (i - k - 1);
            for jp in 1..=count_d {
                push(Root::plus(i, n - count_d + jp));
            }
            let count_e = (2 * b - 2) * i - count_d;
            for jp in 1..=count_e {
                push(Root::minus(i, n - (jp - 1)));
            }
        }
        alpha.push(a);
        beta.push(bt);
    }
    Ok(ExchangeSequences {
        k,
        b,
        alpha,
        beta,
        lengths: exchange_lengths(k, b),
    })
}

/// One `(i, j)` entry of the literal index formulas as coefficient maps;
/// entries need not be roots.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IndexTerm {
    pub i: usize,
    pub j: usize,
    pub alpha: BTreeMap<usize, i64>,
    pub beta: BTreeMap<usize, i64>,
}

impl IndexTerm {
    pub fn sum(&self) -> BTreeMap<usize, i64> {
        let mut out = self.alpha.clone();
        for (&i, &c) in &self.beta {
            *out.entry(i).or_default() += c;
        }
        out.retain(|_, c| *c != 0);
        out
    }

    pub fn alpha_is_root(&self) -> bool {
        let v: Vec<(usize, i64)> = self.alpha.iter().map(|(&i, &c)| (i, c)).collect();
        Root::from_coeffs(&v).is_some()
    }
}

/// The index formulas with `j` running over the global ranges, exactly
/// as written before re-basing.
pub fn literal_index_terms(k: usize, b: usize) -> Vec<IndexTerm> {
    let n = ((2 * k + 1) * b) as i64;
    let (k, b) = (k as i64, b as i64);
    let mut out = Vec::new();
    let term = |i: i64, j: i64, a: &[(i64, i64)], bt: &[(i64, i64)]| {
        let mk = |v: &[(i64, i64)]| {
            let mut m = BTreeMap::new();
            for &(idx, c) in v {
                *m.entry(idx as usize).or_insert(0) += c;
            }
            m
        };
        IndexTerm {
            i: i as usize,
            j: j as usize,
            alpha: mk(a),
            beta: mk(bt),
        }
    };
    for i in 1..=2 * k {
        if i <= k {
            for j in 1..=i {
                let x = 2 * k + 1 - i + j;
                out.push(term(i, j, &[(i, 1), (x, 1)], &[(x, -1), (i + 1, -1)]));
            }
            for j in i + 1..=i + (2 * b - 2) * i {
                let x = (2 * k + 1) + (2 * b - 2) * i - (j - 1);
                out.push(term(i, j, &[(i, 1), (x, -1)], &[(x, 1), (i + 1, -1)]));
            }
        } else {
            let lead = 2 * k + 1 - i;
            for j in 1..=lead {
                let x = i + j;
                out.push(term(i, j, &[(i, 1), (x, 1)], &[(x, -1), (i + 1, -1)]));
            }
            let count_d = (b - 1) + (2 * b - 2) * (i - k - 1);
            for j in lead + 1..=lead + count_d {
                let x = n - (b - 1) - (2 * b - 2) * (i - k - 1) + j;
                out.push(term(i, j, &[(i, 1), (x, 1)], &[(x, -1), (i + 1, -1)]));
            }
            for j in lead + count_d + 1..=lead + (2 * b - 2) * i {
                let x = n - (j - 1);
                out.push(term(i, j, &[(i, 1), (x, -1)], &[(x, 1), (i + 1, -1)]));
            }
        }
    }
    out
}

/// Weights `(A, 2k I, 2k-2 I, ..., -2k I, A)` with `A = (2k, 2k-2, ..., -2k)`
/// and identity blocks of size `2b-2`.
pub fn exchange_weights(k: usize, b: usize) -> WeightVector {
    let k = k as i64;
    let a: Vec<i64> = (0..=2 * k).map(|t| 2 * k - 2 * t).collect();
    let mut w = a.clone();
    for t in 0..=2 * k {
        w.extend(std::iter::repeat_n(2 * k - 2 * t, 2 * b - 2));
    }
    w.extend(a);
    WeightVector::new(w).expect("exchange weights are antisymmetric")
}

/// Block of a matrix index: 0 first, 1 middle, 2 last.
fn block_of(idx: usize, k: usize, n: usize) -> usize {
    let edge = 2 * k + 1;
    if idx <= edge {
        0
    } else if idx > 2 * n - edge {
        2
    } else {
        1
    }
}

/// Weight-at-least-2 roots lying on or above the block diagonal, plus
/// `2e_{k+1}`.
pub fn exchange_base(k: usize, b: usize) -> BTreeSet<Root> {
    let n = (2 * k + 1) * b;
    let w = exchange_weights(k, b);
    let mut out: BTreeSet<Root> = all_roots(n)
        .into_iter()
        .filter(|r| r.weight(&w) >= 2)
        .filter(|r| {
            let (row, col) = r.canonical_position(n);
            block_of(row, k, n) <= block_of(col, k, n)
        })
        .collect();
    out.insert(Root::two(k + 1));
    out
}

/// The quadruple for row `i` (1-based): earlier `alpha` rows and later
/// `beta` rows join the base, as do `2e_t` for `k+2 <= t <= i`.
pub fn stage_datum(seq: &ExchangeSequences, i: usize) -> Result<ExchangeDatum> {
    let k = seq.k;
    if i == 0 || i > 2 * k {
        return Err(Error::validation(format!("stage {i} outside 1..={}", 2 * k)));
    }
    let mut c = exchange_base(k, seq.b);
    for s in 1..i {
        c.extend(seq.alpha[s - 1].iter().copied());
    }
    for l in i + 1..=2 * k {
        c.extend(seq.beta[l - 1].iter().copied());
    }
    for t in k + 2..=i {
        c.insert(Root::two(t));
    }
    Ok(ExchangeDatum {
        c_roots: c,
        char_support: seq.char_support(),
        x_seq: seq.alpha[i - 1].clone(),
        y_seq: seq.beta[i - 1].clone(),
    })
}

/// Outcome of one condition.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConditionResult {
    pub name: String,
    pub passed: bool,
    pub witness: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExchangeReport {
    pub conditions: Vec<ConditionResult>,
}

impl ExchangeReport {
    pub fn all_passed(&self) -> bool {
        self.conditions.iter().all(|c| c.passed)
    }

    pub fn condition(&self, name: &str) -> Option<&ConditionResult> {
        self.conditions.iter().find(|c| c.name == name)
    }
}

impl fmt::Display for ExchangeReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for c in &self.conditions {
            let mark = if c.passed { "pass" } else { "FAIL" };
            write!(f, "{mark} {}", c.name)?;
            if let Some(w) = &c.witness {
                write!(f, ": {w}")?;
            }
            writeln!(f)?;
        }
        Ok(())
    }
}

fn outcome(name: &str, witness: Option<String>) -> ConditionResult {
    ConditionResult {
        name: name.to_string(),
        passed: witness.is_none(),
        witness,
    }
}

fn gen(root: &Root, t: i64, n: usize) -> UnipotentElement {
    one_parameter_matrix(root, Rational64::from_integer(t), n).expect("index checked")
}

fn outside(g: &UnipotentElement, c: &BTreeSet<Root>) -> Option<String> {
    match g.root_support() {
        Err((r, col)) => Some(format!("diagonal entry ({r},{col})")),
        Ok(s) => s.difference(c).next().map(|r| r.to_string()),
    }
}

/// Witnesses against the four conditions for one quadruple `(C, psi, X, Y)`.
fn check_quadruple(
    c: &BTreeSet<Root>,
    chars: &BTreeSet<Root>,
    xs: &[Root],
    ys: &[Root],
    n: usize,
) -> Result<[Option<String>; 4]> {
    let movers: Vec<Root> = xs.iter().chain(ys).copied().collect();

    let mut wa = None;
    'closure: for g1 in c {
        if c.contains(&g1.neg()) {
            wa = Some(format!("C contains the opposite pair {g1}, {}", g1.neg()));
            break;
        }
        for g2 in c {
            if let Some(s) = g1.add(g2) {
                if !c.contains(&s) {
                    wa = Some(format!("C not closed: {g1} + {g2} = {s}"));
                    break 'closure;
                }
            }
        }
    }
    if wa.is_none() {
        'norm: for rho in &movers {
            for gamma in c {
                for (p, q) in [(1, 1), (2, 1), (1, 2)] {
                    if let Some(s) = rho.combine(p, gamma, q) {
                        if !c.contains(&s) {
                            wa = Some(format!("{p}*({rho}) + {q}*({gamma}) = {s} not in C"));
                            break 'norm;
                        }
                    }
                }
                let x = gen(rho, 1, n);
                let conj = x.mul(&gen(gamma, 1, n)).mul(&x.inverse());
                if let Some(r) = outside(&conj, c) {
                    wa = Some(format!("conjugating x[{gamma}] by x[{rho}] leaves C at {r}"));
                    break 'norm;
                }
            }
        }
    }

    let mut wb = None;
    'comm: for a in xs {
        for bt in ys {
            for (s, t) in [(1, 1), (2, -3)] {
                let g = commutator(&gen(a, s, n), &gen(bt, t, n))?;
                if let Some(r) = outside(&g, c) {
                    wb = Some(format!("[x[{a}], x[{bt}]] has component {r} outside C"));
                    break 'comm;
                }
            }
        }
    }

    let wc = movers
        .iter()
        .find(|r| chars.contains(r))
        .map(|r| format!("{r} lies in the character support"));

    let mut wd = None;
    for (a, bt) in xs.iter().zip(ys) {
        match a.add(bt) {
            Some(s) if chars.contains(&s) => {
                let g = commutator(&gen(a, 1, n), &gen(bt, 1, n))?;
                if g.coordinate(&s).is_zero() {
                    wd = Some(format!("[x[{a}], x[{bt}]] has zero coefficient on {s}"));
                    break;
                }
            }
            _ => {
                wd = Some(format!("{a} + {bt} is not in the character support"));
                break;
            }
        }
    }
    if wd.is_none() && !xs.is_empty() {
        let m = xs.len();
        let mut pairing = QMatrix::zeros(m);
        for (s, a) in xs.iter().enumerate() {
            for (t, bt) in ys.iter().enumerate() {
                let g = commutator(&gen(a, 1, n), &gen(bt, 1, n))?;
                let v: Rational64 = chars.iter().map(|r| g.coordinate(r)).sum();
                pairing.set(s + 1, t + 1, v);
            }
        }
        if pairing.inverse().is_err() {
            wd = Some("pairing matrix is singular".to_string());
        }
    }
    Ok([wa, wb, wc, wd])
}

/// Checks the exchange of `X` against `Y` one root group at a time, at the
/// level of root groups and exact matrices. Step `j` uses the quadruple
/// `(C_j, psi, X_j, Y_j)` where `C_j` adds the earlier `X` roots and the
/// later `Y` roots to `C`. At each step:
/// (a) `X_j` and `Y_j` normalize the group generated by `C_j`;
/// (b) `[X_j, Y_j]` lies in that group;
/// (c) neither root carries the character;
/// (d) `alpha_j + beta_j` carries the character with a nonzero
///     commutator coefficient.
pub fn verify_exchange_quadruple(d: &ExchangeDatum, n: usize) -> Result<ExchangeReport> {
    let every = d
        .c_roots
        .iter()
        .chain(&d.char_support)
        .chain(&d.x_seq)
        .chain(&d.y_seq);
    if let Some(r) = every.clone().find(|r| r.max_index() > n) {
        return Err(Error::validation(format!("{r} does not live in Sp({})", 2 * n)));
    }
    let m = d.x_seq.len().min(d.y_seq.len());
    let mut found: [Option<String>; 4] = Default::default();
    for j in 0..m {
        let mut c = d.c_roots.clone();
        c.extend(d.x_seq[..j].iter().copied());
        c.extend(d.y_seq[j + 1..].iter().copied());
        let step = check_quadruple(&c, &d.char_support, &d.x_seq[j..=j], &d.y_seq[j..=j], n)?;
        for (slot, w) in found.iter_mut().zip(step) {
            if slot.is_none() {
                *slot = w.map(|w| format!("step {}: {w}", j + 1));
            }
        }
    }
    if found[3].is_none() && d.x_seq.len() != d.y_seq.len() {
        let (extra, side) = if d.x_seq.len() > m {
            (d.x_seq[m], "X")
        } else {
            (d.y_seq[m], "Y")
        };
        found[3] = Some(format!("unmatched {side} root {extra}"));
    }
    let [wa, wb, wc, wd] = found;
    Ok(ExchangeReport {
        conditions: vec![
            outcome("normalize", wa),
            outcome("commutator", wb),
            outcome("character", wc),
            outcome("pairing", wd),
        ],
    })
}

/// Reports for every stage `1..=2k`, exchanging in the listed order.
pub fn verify_all_stages(k: usize, b: usize) -> Result<Vec<ExchangeReport>> {
    let seq = exchange_sequences(k, b)?;
    (1..=2 * k)
        .map(|i| verify_exchange_quadruple(&stage_datum(&seq, i)?, seq.rank()))
        .collect()
}

/// The datum with both sequences permuted by `order` (0-based).
pub fn reorder(d: &ExchangeDatum, order: &[usize]) -> ExchangeDatum {
    ExchangeDatum {
        c_roots: d.c_roots.clone(),
        char_support: d.char_support.clone(),
        x_seq: order.iter().map(|&j| d.x_seq[j]).collect(),
        y_seq: order.iter().map(|&j| d.y_seq[j]).collect(),
    }
}

/// Lexicographically first order (0-based) in which every step of the
/// exchange passes, or `None` when no order works.
pub fn exchange_order(d: &ExchangeDatum, n: usize) -> Result<Option<Vec<usize>>> {
    let m = d.x_seq.len();
    if m != d.y_seq.len() {
        return Err(Error::validation(format!("sequence lengths differ: {} vs {}", m, d.y_seq.len())));
    }
    if m >= 64 {
        return Err(Error::validation(format!("{m} pairs is too many to order")));
    }
    let full = if m == 0 { 0 } else { u64::MAX >> (64 - m) };
    let mut dead = std::collections::HashSet::new();
    let mut order = Vec::new();
    if order_from(d, n, 0, full, &mut dead, &mut order)? {
        Ok(Some(order))
    } else {
        Ok(None)
    }
}

fn order_from(
    d: &ExchangeDatum,
    n: usize,
    done: u64,
    full: u64,
    dead: &mut std::collections::HashSet<u64>,
    order: &mut Vec<usize>,
) -> Result<bool> {
    if done == full {
        return Ok(true);
    }
    if dead.contains(&done) {
        return Ok(false);
    }
    for j in 0..d.x_seq.len() {
        if done >> j & 1 == 1 {
            continue;
        }
        let mut c = d.c_roots.clone();
        for (s, (x, y)) in d.x_seq.iter().zip(&d.y_seq).enumerate() {
            if done >> s & 1 == 1 {
                c.insert(*x);
            } else if s != j {
                c.insert(*y);
            }
        }
        let w = check_quadruple(&c, &d.char_support, &d.x_seq[j..=j], &d.y_seq[j..=j], n)?;
        if w.iter().all(Option::is_none) {
            order.push(j);
            if order_from(d, n, done | 1 << j, full, dead, order)? {
                return Ok(true);
            }
            order.pop();
        }
    }
    dead.insert(done);
    Ok(false)
}

/// One stage checked in the listed order and, failing that, in the first
/// order that works.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct StageReport {
    pub stage: usize,
    pub listed: ExchangeReport,
    /// 1-based positions in the listed sequence.
    pub order: Option<Vec<usize>>,
    pub reordered: Option<ExchangeReport>,
}

impl StageReport {
    pub fn passed(&self) -> bool {
        self.listed.all_passed() || self.reordered.as_ref().is_some_and(ExchangeReport::all_passed)
    }
}

pub fn verify_stages(k: usize, b: usize) -> Result<Vec<StageReport>> {
    let seq = exchange_sequences(k, b)?;
    let n = seq.rank();
    let mut out = Vec::new();
    for i in 1..=2 * k {
        let d = stage_datum(&seq, i)?;
        let listed = verify_exchange_quadruple(&d, n)?;
        let (order, reordered) = if listed.all_passed() {
            (None, None)
        } else {
            match exchange_order(&d, n)? {
                Some(o) => {
                    let rep = verify_exchange_quadruple(&reorder(&d, &o), n)?;
                    (Some(o.iter().map(|j| j + 1).collect()), Some(rep))
                }
                None => (None, None),
            }
        };
        out.push(StageReport {
            stage: i,
            listed,
            order,
            reordered,
        });
    }
    Ok(out)
}
