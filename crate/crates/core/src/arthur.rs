//! Formal global parameters for symplectic groups.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::collapse::barbasch_vogan_dual;
use crate::error::{Error, Result};
use crate::partition::{dominance_compare, lex_compare, OrderVerdict, Partition};

/// Env var overriding [`DEFAULT_PARAMETER_CAP`].
pub const PARAMETER_CAP_ENV: &str = "NILORBIT_PARAM_CAP";
pub const DEFAULT_PARAMETER_CAP: usize = 8;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Symmetry {
    Orthogonal,
    Symplectic,
}

impl Symmetry {
    fn letter(self) -> char {
        match self {
            Symmetry::Orthogonal => 'O',
            Symmetry::Symplectic => 'S',
        }
    }
}

/// One summand `(tau, b)` with `dim tau = a`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct SimpleParameter {
    pub dim: usize,
    pub mult: usize,
    pub symmetry: Symmetry,
    pub label: String,
}

impl SimpleParameter {
    pub fn new(dim: usize, mult: usize, symmetry: Symmetry, label: impl Into<String>) -> Self {
        SimpleParameter {
            dim,
            mult,
            symmetry,
            label: label.into(),
        }
    }

    /// Same underlying cuspidal datum, ignoring the multiplicity.
    pub fn same_tau(&self, other: &SimpleParameter) -> bool {
        self.dim == other.dim && self.symmetry == other.symmetry && self.label == other.label
    }
}

impl fmt::Display for SimpleParameter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}:{}", self.dim, self.mult, self.symmetry.letter())?;
        if !self.label.is_empty() {
            write!(f, "#{}", self.label)?;
        }
        Ok(())
    }
}

impl FromStr for SimpleParameter {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let term: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        let (body, label) = match term.split_once('#') {
            Some((b, l)) if !l.is_empty() => (b, l.to_string()),
            Some(_) => return Err(Error::parse(s.trim(), "empty label after #")),
            None => (term.as_str(), String::new()),
        };
        let fields: Vec<&str> = body.split(':').collect();
        if fields.len() != 3 {
            return Err(Error::parse(s.trim(), "expected dim:mult:O or dim:mult:S"));
        }
        let num = |f: &str| -> Result<usize> {
            match f.parse::<usize>() {
                Ok(v) if v > 0 => Ok(v),
                _ => Err(Error::parse(f, "expected a positive integer")),
            }
        };
        let symmetry = match fields[2] {
            "O" => Symmetry::Orthogonal,
            "S" => Symmetry::Symplectic,
            other => return Err(Error::parse(other, "symmetry must be O or S")),
        };
        Ok(SimpleParameter::new(num(fields[0])?, num(fields[1])?, symmetry, label))
    }
}

/// A formal sum of simple parameters for `Sp(2n)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct GlobalParameter {
    pub simples: Vec<SimpleParameter>,
    pub n: usize,
}

impl fmt::Display for GlobalParameter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let terms: Vec<String> = self.simples.iter().map(|s| s.to_string()).collect();
        f.write_str(&terms.join(" + "))
    }
}

/// A failed parameter constraint.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Violation {
    Empty,
    DimensionSum { expected: usize, actual: usize },
    Parity { index: usize, simple: String },
    SymplecticDim { index: usize, simple: String },
    Duplicate { first: usize, second: usize, simple: String },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::Empty => write!(f, "empty: no simple parameters"),
            Violation::DimensionSum { expected, actual } => {
                write!(f, "dimension sum: sum of dim*mult is {actual}, expected 2n+1 = {expected}")
            }
            Violation::Parity { index, simple } => write!(
                f,
                "parity: simple {index} ({simple}) needs odd mult if O, even mult if S"
            ),
            Violation::SymplecticDim { index, simple } => {
                write!(f, "dimension: simple {index} ({simple}) is symplectic of odd dimension")
            }
            Violation::Duplicate { first, second, simple } => {
                write!(f, "distinctness: simples {first} and {second} are both {simple}")
            }
        }
    }
}

impl GlobalParameter {
    pub fn new(simples: Vec<SimpleParameter>, n: usize) -> Self {
        GlobalParameter { simples, n }
    }

    /// Parses `a:b:O#label + ...` and checks it against rank `n`.
    pub fn parse(text: &str, n: usize) -> Result<Self> {
        if text.trim().is_empty() {
            return Err(Error::parse(text, "empty parameter"));
        }
        let simples = text
            .split('+')
            .map(str::parse)
            .collect::<Result<Vec<SimpleParameter>>>()?;
        let psi = GlobalParameter::new(simples, n);
        psi.validated()?;
        Ok(psi)
    }

    /// Case I shape: `(tau, 2b+1)` plus `2m+1-a` one-dimensional simples.
    pub fn case_i(a: usize, b: usize, m: usize) -> Result<Self> {
        if a == 0 || b == 0 || a > 2 * m + 1 {
            return Err(Error::validation(format!("case I needs 1 <= a <= 2m+1 and b >= 1, got (a,b,m)=({a},{b},{m})")));
        }
        let mut simples = vec![SimpleParameter::new(a, 2 * b + 1, Symmetry::Orthogonal, "t")];
        simples.extend(filler(2 * m + 1 - a));
        Ok(GlobalParameter::new(simples, a * b + m))
    }

    /// Case II shape: `(tau, 2b+1) + (tau, 1)` plus `2m+1` one-dimensional simples.
    pub fn case_ii(a: usize, b: usize, m: usize) -> Result<Self> {
        if a == 0 || b == 0 {
            return Err(Error::validation(format!("case II needs a, b >= 1, got (a,b,m)=({a},{b},{m})")));
        }
        let mut simples = vec![
            SimpleParameter::new(a, 2 * b + 1, Symmetry::Orthogonal, "t"),
            SimpleParameter::new(a, 1, Symmetry::Orthogonal, "t"),
        ];
        simples.extend(filler(2 * m + 1));
        Ok(GlobalParameter::new(simples, a * (b + 1) + m))
    }

    /// Case III shape: `(tau, 2b)` with symplectic `tau` plus `2m+1` one-dimensional simples.
    pub fn case_iii(a: usize, b: usize, m: usize) -> Result<Self> {
        if a == 0 || b == 0 || !a.is_multiple_of(2) {
            return Err(Error::validation(format!("case III needs even a >= 2 and b >= 1, got (a,b,m)=({a},{b},{m})")));
        }
        let mut simples = vec![SimpleParameter::new(a, 2 * b, Symmetry::Symplectic, "t")];
        simples.extend(filler(2 * m + 1));
        Ok(GlobalParameter::new(simples, a * b + m))
    }

    /// The parameter of a tagged family.
    pub fn from_case(tag: &CaseTag) -> Result<Self> {
        match *tag {
            CaseTag::CaseI { a, b, m } => GlobalParameter::case_i(a, b, m),
            CaseTag::CaseII { a, b, m } => GlobalParameter::case_ii(a, b, m),
            CaseTag::CaseIII { a, b, m } => GlobalParameter::case_iii(a, b, m),
            _ => Err(Error::validation(format!("no canonical parameter for {tag}"))),
        }
    }

    fn validated(&self) -> Result<()> {
        let violations = validate(self);
        if violations.is_empty() {
            Ok(())
        } else {
            let msgs: Vec<String> = violations.iter().map(|v| v.to_string()).collect();
            Err(Error::validation(format!("invalid parameter {self}: {}", msgs.join("; "))))
        }
    }
}

fn filler(count: usize) -> impl Iterator<Item = SimpleParameter> {
    (1..=count).map(|i| SimpleParameter::new(1, 1, Symmetry::Orthogonal, format!("x{i}")))
}

/// Every violated constraint; empty means valid.
pub fn validate(psi: &GlobalParameter) -> Vec<Violation> {
    let mut out = Vec::new();
    if psi.simples.is_empty() {
        out.push(Violation::Empty);
    }
    let actual: usize = psi.simples.iter().map(|s| s.dim * s.mult).sum();
    let expected = 2 * psi.n + 1;
    if actual != expected {
        out.push(Violation::DimensionSum { expected, actual });
    }
    for (i, s) in psi.simples.iter().enumerate() {
        let ok = match s.symmetry {
            Symmetry::Orthogonal => s.mult % 2 == 1,
            Symmetry::Symplectic => s.mult % 2 == 0,
        };
        if !ok {
            out.push(Violation::Parity {
                index: i + 1,
                simple: s.to_string(),
            });
        }
        if s.symmetry == Symmetry::Symplectic && s.dim % 2 == 1 {
            out.push(Violation::SymplecticDim {
                index: i + 1,
                simple: s.to_string(),
            });
        }
    }
    for i in 0..psi.simples.len() {
        for j in i + 1..psi.simples.len() {
            if psi.simples[i] == psi.simples[j] {
                out.push(Violation::Duplicate {
                    first: i + 1,
                    second: j + 1,
                    simple: psi.simples[i].to_string(),
                });
            }
        }
    }
    out
}

fn require_valid(psi: &GlobalParameter) -> Result<()> {
    psi.validated()
}

/// Each multiplicity repeated `dim` times.
pub fn p_of_psi(psi: &GlobalParameter) -> Result<Partition> {
    require_valid(psi)?;
    let mut parts = Vec::new();
    for s in &psi.simples {
        parts.extend(std::iter::repeat_n(s.mult, s.dim));
    }
    Ok(Partition::new(parts))
}

pub fn is_generic(psi: &GlobalParameter) -> bool {
    psi.simples.iter().all(|s| s.mult == 1)
}

/// Which of the three treated shapes a parameter has.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum CaseTag {
    Generic,
    CaseI { a: usize, b: usize, m: usize },
    CaseII { a: usize, b: usize, m: usize },
    CaseIII { a: usize, b: usize, m: usize },
    Other,
}

impl CaseTag {
    pub fn aux(&self) -> Option<(usize, usize, usize)> {
        match *self {
            CaseTag::CaseI { a, b, m } | CaseTag::CaseII { a, b, m } | CaseTag::CaseIII { a, b, m } => {
                Some((a, b, m))
            }
            _ => None,
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            CaseTag::Generic => "Generic",
            CaseTag::CaseI { .. } => "CaseI",
            CaseTag::CaseII { .. } => "CaseII",
            CaseTag::CaseIII { .. } => "CaseIII",
            CaseTag::Other => "Other",
        }
    }
}

impl fmt::Display for CaseTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.aux() {
            Some((a, b, m)) => write!(f, "{}(a={a},b={b},m={m})", self.name()),
            None => f.write_str(self.name()),
        }
    }
}

pub fn classify_case(psi: &GlobalParameter) -> Result<CaseTag> {
    require_valid(psi)?;
    let big: Vec<&SimpleParameter> = psi.simples.iter().filter(|s| s.mult > 1).collect();
    if big.is_empty() {
        return Ok(CaseTag::Generic);
    }
    if big.len() > 1 {
        return Ok(CaseTag::Other);
    }
    let tau = big[0];
    let a = tau.dim;
    Ok(match tau.symmetry {
        Symmetry::Orthogonal => {
            let b = (tau.mult - 1) / 2;
            let copy = psi.simples.iter().any(|s| s.mult == 1 && s.same_tau(tau));
            if copy {
                CaseTag::CaseII { a, b, m: psi.n - a * (b + 1) }
            } else {
                CaseTag::CaseI { a, b, m: psi.n - a * b }
            }
        }
        Symmetry::Symplectic => {
            let b = tau.mult / 2;
            CaseTag::CaseIII { a, b, m: psi.n - a * b }
        }
    })
}

/// Closed form for the dual partition of a tagged family.
pub fn closed_form_eta(tag: &CaseTag) -> Option<Partition> {
    let pw = |v: &[(usize, usize)]| Partition::from_powers(v);
    match *tag {
        CaseTag::CaseI { a, b, m } if a == 2 * m + 1 => Some(pw(&[(a, 2 * b), (2 * m, 1)])),
        CaseTag::CaseI { a, b, m } if a % 2 == 0 => Some(pw(&[(2 * m, 1), (a, 2 * b)])),
        CaseTag::CaseI { a, b, m } => Some(pw(&[
            (2 * m, 1),
            (a + 1, 1),
            (a, 2 * b - 2),
            (a - 1, 1),
        ])),
        CaseTag::CaseII { a, b, m } if a % 2 == 0 => Some(pw(&[(2 * m + 2 * a, 1), (a, 2 * b)])),
        CaseTag::CaseII { a, b, m } => Some(pw(&[
            (2 * m + 2 * a, 1),
            (a + 1, 1),
            (a, 2 * b - 2),
            (a - 1, 1),
        ])),
        CaseTag::CaseIII { a, b, m } => Some(pw(&[(a + 2 * m, 1), (a, 2 * b - 1)])),
        CaseTag::Generic | CaseTag::Other => None,
    }
}

/// Dual of `p(psi)`, cross-checked against the closed form when one applies.
pub fn eta_of_psi(psi: &GlobalParameter) -> Result<Partition> {
    let eta = barbasch_vogan_dual(&p_of_psi(psi)?)?;
    let tag = classify_case(psi)?;
    if let Some(closed) = closed_form_eta(&tag) {
        if closed != eta {
            return Err(Error::breach(format!(
                "{tag}: definition gives {eta}, closed form gives {closed}"
            )));
        }
    }
    if tag == CaseTag::Generic && eta != Partition::new(vec![2 * psi.n]) {
        return Err(Error::breach(format!("generic parameter {psi} has dual {eta}")));
    }
    Ok(eta)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum BoundOrdering {
    Dominance,
    Lexicographic,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum BoundStatus {
    ForbiddenPart1,
    Allowed,
    AchievesPart3,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BoundVerdict {
    pub status: BoundStatus,
    pub ordering_used: BoundOrdering,
    pub eta: Partition,
}

/// Where `candidate` sits relative to the predicted upper bound.
pub fn conjecture_bound_check(
    candidate: &Partition,
    psi: &GlobalParameter,
    ordering: BoundOrdering,
) -> Result<BoundVerdict> {
    let eta = eta_of_psi(psi)?;
    if candidate.size() != 2 * psi.n {
        return Err(Error::validation(format!(
            "candidate {candidate} has size {}, expected 2n = {}",
            candidate.size(),
            2 * psi.n
        )));
    }
    if !candidate.is_symplectic() {
        return Err(Error::validation(format!("candidate {candidate} is not symplectic")));
    }
    let rel = match ordering {
        BoundOrdering::Dominance => dominance_compare(candidate, &eta)?,
        BoundOrdering::Lexicographic => lex_compare(candidate, &eta)?,
    };
    let status = match rel {
        OrderVerdict::Greater => BoundStatus::ForbiddenPart1,
        OrderVerdict::Equal => BoundStatus::AchievesPart3,
        OrderVerdict::Less | OrderVerdict::Incomparable => BoundStatus::Allowed,
    };
    Ok(BoundVerdict {
        status,
        ordering_used: ordering,
        eta,
    })
}

/// The parameter after `l` steps down the residual tower.
pub fn reduce_parameter(psi: &GlobalParameter, l: usize) -> Result<GlobalParameter> {
    let tag = classify_case(psi)?;
    let depth = match tag {
        CaseTag::CaseI { b, .. } | CaseTag::CaseIII { b, .. } => b,
        CaseTag::CaseII { b, .. } => b + 1,
        _ => return Err(Error::validation(format!("{psi} is {tag}; only cases I, II, III reduce"))),
    };
    if l == 0 || l > depth {
        return Err(Error::validation(format!("l = {l} outside 1..={depth} for {tag}")));
    }
    let (a, b, _) = tag.aux().expect("tagged case");
    let pos = psi
        .simples
        .iter()
        .position(|s| s.mult > 1)
        .expect("tagged case has a non-trivial simple");
    let tau = psi.simples[pos].clone();
    let mut simples = psi.simples.clone();
    match tag {
        CaseTag::CaseI { .. } => simples[pos].mult = 2 * (b - l) + 1,
        CaseTag::CaseII { .. } if l == b => {
            return Err(Error::validation(format!(
                "l = b = {b} in case II gives ({tau_short},1) twice, which is not a discrete parameter",
                tau_short = tau.label
            )));
        }
        CaseTag::CaseII { .. } if l == b + 1 => simples.retain(|s| !s.same_tau(&tau)),
        CaseTag::CaseII { .. } => simples[pos].mult = 2 * (b - l) + 1,
        CaseTag::CaseIII { .. } => {
            if l == b {
                simples.remove(pos);
            } else {
                simples[pos].mult = 2 * (b - l);
            }
        }
        _ => unreachable!(),
    }
    let reduced = GlobalParameter::new(simples, psi.n - a * l);
    reduced.validated().map_err(|e| Error::breach(format!("reduction of {psi} at l={l}: {e}")))?;
    Ok(reduced)
}

/// Current cap for [`enumerate_parameters`].
pub fn parameter_cap() -> usize {
    std::env::var(PARAMETER_CAP_ENV)
        .ok()
        .and_then(|v| v.parse().ok())
        .unwrap_or(DEFAULT_PARAMETER_CAP)
}

/// Every valid parameter shape of rank `n`, up to renaming labels.
/// Summands sharing `(dim, symmetry)` are grouped into label classes with
/// distinct multiplicities; classes are named `t1`, `t2`, ... per group.
pub fn enumerate_parameters(n: usize) -> Result<Vec<GlobalParameter>> {
    let cap = parameter_cap();
    if n > cap {
        return Err(Error::validation(format!(
            "n = {n} exceeds the parameter cap {cap} (set {PARAMETER_CAP_ENV} to raise it)"
        )));
    }
    let total = 2 * n + 1;
    let mut kinds = Vec::new();
    for dim in (1..=total).rev() {
        for mult in (1..=total / dim).rev() {
            let symmetry = if mult % 2 == 1 { Symmetry::Orthogonal } else { Symmetry::Symplectic };
            if symmetry == Symmetry::Symplectic && dim % 2 == 1 {
                continue;
            }
            kinds.push((dim, mult, symmetry));
        }
    }
    let mut out = Vec::new();
    let mut chosen = Vec::new();
    multisets(&kinds, 0, total, &mut chosen, &mut |picked| {
        let mut groups: BTreeMap<(std::cmp::Reverse<usize>, Symmetry), Vec<usize>> = BTreeMap::new();
        for &(dim, mult, sym) in picked {
            groups.entry((std::cmp::Reverse(dim), sym)).or_default().push(mult);
        }
        let per_group: Vec<((usize, Symmetry), Vec<Vec<Vec<usize>>>)> = groups
            .into_iter()
            .map(|((dim, sym), mults)| ((dim.0, sym), label_classes(&mults)))
            .collect();
        let mut acc = Vec::new();
        product(&per_group, 0, &mut acc, &mut |choice| {
            let mut simples = Vec::new();
            for ((dim, sym), classes) in choice {
                for (c, class) in classes.iter().enumerate() {
                    for &mult in class {
                        simples.push(SimpleParameter::new(*dim, mult, *sym, format!("t{}", c + 1)));
                    }
                }
            }
            simples.sort_by(|x, y| {
                (y.mult, y.dim, x.symmetry, &x.label).cmp(&(x.mult, x.dim, y.symmetry, &y.label))
            });
            out.push(GlobalParameter::new(simples, n));
        });
    });
    for psi in &out {
        if !validate(psi).is_empty() {
            return Err(Error::breach(format!("enumerated invalid parameter {psi}")));
        }
    }
    Ok(out)
}

type Kind = (usize, usize, Symmetry);

fn multisets(kinds: &[Kind], from: usize, remaining: usize, chosen: &mut Vec<Kind>, emit: &mut dyn FnMut(&[Kind])) {
    if remaining == 0 {
        emit(chosen);
        return;
    }
    for i in from..kinds.len() {
        let (dim, mult, _) = kinds[i];
        if dim * mult <= remaining {
            chosen.push(kinds[i]);
            multisets(kinds, i, remaining - dim * mult, chosen, emit);
            chosen.pop();
        }
    }
}

/// Splits a multiset of multiplicities into classes of distinct values,
/// each split listed once.
fn label_classes(mults: &[usize]) -> Vec<Vec<Vec<usize>>> {
    let mut counts: BTreeMap<usize, usize> = BTreeMap::new();
    for &m in mults {
        *counts.entry(m).or_default() += 1;
    }
    let mut out = Vec::new();
    let mut acc = Vec::new();
    split_classes(&mut counts, None, &mut acc, &mut out);
    out
}

fn split_classes(
    counts: &mut BTreeMap<usize, usize>,
    prev: Option<&Vec<usize>>,
    acc: &mut Vec<Vec<usize>>,
    out: &mut Vec<Vec<Vec<usize>>>,
) {
    let avail: Vec<usize> = counts.iter().rev().filter(|(_, &c)| c > 0).map(|(&m, _)| m).collect();
    if avail.is_empty() {
        out.push(acc.clone());
        return;
    }
    for mask in (1u32..(1 << avail.len())).rev() {
        let class: Vec<usize> = avail
            .iter()
            .enumerate()
            .filter(|(i, _)| mask & (1 << i) != 0)
            .map(|(_, &m)| m)
            .collect();
        if let Some(p) = prev {
            if &class > p {
                continue;
            }
        }
        for m in &class {
            *counts.get_mut(m).unwrap() -= 1;
        }
        acc.push(class);
        let last = acc.last().cloned();
        split_classes(counts, last.as_ref(), acc, out);
        let class = acc.pop().unwrap();
        for m in &class {
            *counts.get_mut(m).unwrap() += 1;
        }
    }
}

fn product<'a, K: Clone, V: Clone>(
    groups: &'a [(K, Vec<V>)],
    at: usize,
    acc: &mut Vec<(K, V)>,
    emit: &mut dyn FnMut(&[(K, V)]),
) {
    if at == groups.len() {
        emit(acc);
        return;
    }
    let (key, options) = &groups[at];
    for opt in options {
        acc.push((key.clone(), opt.clone()));
        product(groups, at + 1, acc, emit);
        acc.pop();
    }
}
