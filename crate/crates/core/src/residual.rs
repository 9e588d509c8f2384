//! Exponent bookkeeping for Speh blocks and residual towers.

use std::fmt;
use std::str::FromStr;

use num_rational::Rational64;
use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

fn half_integral(q: Rational64) -> Result<Rational64> {
    if *q.denom() > 2 {
        return Err(Error::validation(format!("exponent {q} is not a half-integer")));
    }
    Ok(q)
}

/// Half-integral exponents in a fixed order.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "Vec<Rational64>", into = "Vec<Rational64>")]
pub struct ExponentVector {
    entries: Vec<Rational64>,
}

impl ExponentVector {
    pub fn new(entries: Vec<Rational64>) -> Result<Self> {
        for &q in &entries {
            half_integral(q)?;
        }
        Ok(ExponentVector { entries })
    }

    pub fn entries(&self) -> &[Rational64] {
        &self.entries
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn max(&self) -> Option<Rational64> {
        self.entries.iter().copied().max()
    }
}

impl TryFrom<Vec<Rational64>> for ExponentVector {
    type Error = Error;

    fn try_from(v: Vec<Rational64>) -> Result<Self> {
        ExponentVector::new(v)
    }
}

impl From<ExponentVector> for Vec<Rational64> {
    fn from(v: ExponentVector) -> Self {
        v.entries
    }
}

impl fmt::Display for ExponentVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let items: Vec<String> = self.entries.iter().map(|q| q.to_string()).collect();
        write!(f, "{{{}}}", items.join(","))
    }
}

/// Parses `p/q` or an integer.
pub fn parse_rational(token: &str) -> Result<Rational64> {
    let t = token.trim();
    let bad = |why: &str| Error::parse(t, why);
    let q = match t.split_once('/') {
        Some((n, d)) => {
            let n: i64 = n.trim().parse().map_err(|_| bad("numerator is not an integer"))?;
            let d: i64 = d.trim().parse().map_err(|_| bad("denominator is not an integer"))?;
            if d == 0 {
                return Err(bad("zero denominator"));
            }
            Rational64::new(n, d)
        }
        None => Rational64::from_integer(t.parse().map_err(|_| bad("not a rational number"))?),
    };
    Ok(q)
}

impl FromStr for ExponentVector {
    type Err = Error;

    /// `{-1/2,1/2}`, braces optional.
    fn from_str(s: &str) -> Result<Self> {
        let inner = s.trim().trim_start_matches('{').trim_end_matches('}').trim();
        if inner.is_empty() {
            return Ok(ExponentVector::default());
        }
        let entries = inner.split(',').map(parse_rational).collect::<Result<Vec<_>>>()?;
        ExponentVector::new(entries)
    }
}

/// `(1-b)/2, (3-b)/2, ..., (b-1)/2`; empty for `b = 0`.
pub fn speh_exponents(b: usize) -> ExponentVector {
    let b = b as i64;
    ExponentVector {
        entries: (0..b).map(|t| Rational64::new(1 - b + 2 * t, 2)).collect(),
    }
}

pub fn twist(v: &ExponentVector, s: Rational64) -> Result<ExponentVector> {
    half_integral(s)?;
    ExponentVector::new(v.entries.iter().map(|&q| q + s).collect())
}

/// Every entry is negative.
pub fn langlands_square_integrable(v: &ExponentVector) -> bool {
    v.entries.iter().all(|q| q.is_negative())
}

/// For `alphas` strictly decreasing inside `(-1/2, 1/2)`: the values
/// `(2j-1)/2 + alpha_i`, `j = b` down to `1`, decrease strictly and stay positive.
pub fn exponent_chain_check(b: usize, alphas: &[Rational64]) -> Result<bool> {
    if b == 0 {
        return Err(Error::validation("chain needs b >= 1"));
    }
    let half = Rational64::new(1, 2);
    if let Some(q) = alphas.iter().find(|q| **q <= -half || **q >= half) {
        return Err(Error::validation(format!("{q} lies outside (-1/2, 1/2)")));
    }
    if alphas.windows(2).any(|w| w[0] <= w[1]) {
        return Err(Error::validation("exponents must be strictly decreasing"));
    }
    let chain: Vec<Rational64> = (1..=b as i64)
        .rev()
        .flat_map(|j| alphas.iter().map(move |&a| Rational64::new(2 * j - 1, 2) + a))
        .collect();
    let decreasing = chain.windows(2).all(|w| w[0] > w[1]);
    Ok(decreasing && chain.last().is_none_or(|q| *q > Rational64::zero()))
}

/// A residual tower, by the shape of its parameter.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Family {
    CaseI { a: usize, b: usize, m: usize },
    CaseII { a: usize, b: usize, m: usize },
    CaseIII { a: usize, b: usize, m: usize },
    Metaplectic { k: usize, b: usize },
}

impl Family {
    fn check(&self) -> Result<()> {
        let ok = match *self {
            Family::CaseI { a, b, m } => a >= 1 && b >= 1 && a <= 2 * m + 1,
            Family::CaseII { a, b, .. } => a >= 1 && b >= 1,
            Family::CaseIII { a, b, .. } => a >= 2 && a % 2 == 0 && b >= 1,
            Family::Metaplectic { k, b } => k >= 1 && b >= 1,
        };
        if ok {
            Ok(())
        } else {
            Err(Error::validation(format!("{self} has inadmissible parameters")))
        }
    }

    /// Largest `i` with a constant-term profile.
    pub fn depth(&self) -> usize {
        match *self {
            Family::CaseI { b, .. } | Family::CaseIII { b, .. } => b,
            Family::CaseII { b, .. } => b + 1,
            Family::Metaplectic { b, .. } => b - 1,
        }
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            Family::CaseI { a, b, m } => write!(f, "I({a},{b},{m})"),
            Family::CaseII { a, b, m } => write!(f, "II({a},{b},{m})"),
            Family::CaseIII { a, b, m } => write!(f, "III({a},{b},{m})"),
            Family::Metaplectic { k, b } => write!(f, "Mp({k},{b})"),
        }
    }
}

impl FromStr for Family {
    type Err = Error;

    /// `I(a,b,m)`, `II(a,b,m)`, `III(a,b,m)` or `Mp(k,b)`.
    fn from_str(s: &str) -> Result<Self> {
        let t: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        let (head, rest) = t
            .split_once('(')
            .ok_or_else(|| Error::parse(&t, "expected NAME(args)"))?;
        let args = rest
            .strip_suffix(')')
            .ok_or_else(|| Error::parse(&t, "missing ')'"))?;
        let nums = args
            .split(',')
            .map(|x| x.parse::<usize>().map_err(|_| Error::parse(x, "not a non-negative integer")))
            .collect::<Result<Vec<_>>>()?;
        let fam = match (head, nums.as_slice()) {
            ("I", &[a, b, m]) => Family::CaseI { a, b, m },
            ("II", &[a, b, m]) => Family::CaseII { a, b, m },
            ("III", &[a, b, m]) => Family::CaseIII { a, b, m },
            ("Mp", &[k, b]) => Family::Metaplectic { k, b },
            _ => return Err(Error::parse(head, "unknown family or wrong number of arguments")),
        };
        fam.check()?;
        Ok(fam)
    }
}

/// What is left on the classical factor of the Levi.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Remainder {
    Tower(Family),
    /// The generic cuspidal datum itself.
    Sigma,
    /// The non-residual Eisenstein series attached to `tau (x) sigma`.
    NonResidual,
}

impl fmt::Display for Remainder {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Remainder::Tower(fam) => write!(f, "{fam}"),
            Remainder::Sigma => write!(f, "sigma"),
            Remainder::NonResidual => write!(f, "E(tau x sigma)"),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConstantTermProfile {
    pub speh_mult: usize,
    pub twist: Rational64,
    pub remainder: Remainder,
}

impl fmt::Display for ConstantTermProfile {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Delta(tau,{}) |.|^{} (x) {}", self.speh_mult, self.twist, self.remainder)
    }
}

/// Constant term of the `i`-th maximal parabolic in the tower.
pub fn constant_term_profile(family: Family, i: usize) -> Result<ConstantTermProfile> {
    family.check()?;
    if i == 0 || i > family.depth() {
        return Err(Error::validation(format!("i = {i} outside 1..={} for {family}", family.depth())));
    }
    let (shift, b) = match family {
        Family::CaseI { b, .. } | Family::CaseII { b, .. } => (1, b),
        Family::CaseIII { b, .. } | Family::Metaplectic { b, .. } => (0, b),
    };
    let twist = -Rational64::new((2 * b + shift - i) as i64, 2);
    let remainder = match family {
        Family::CaseI { a, m, .. } if i < b => Remainder::Tower(Family::CaseI { a, b: b - i, m }),
        Family::CaseII { a, m, .. } if i < b => Remainder::Tower(Family::CaseII { a, b: b - i, m }),
        Family::CaseII { .. } if i == b => Remainder::NonResidual,
        Family::CaseIII { a, m, .. } if i < b => Remainder::Tower(Family::CaseIII { a, b: b - i, m }),
        Family::Metaplectic { k, .. } => Remainder::Tower(Family::Metaplectic { k, b: b - i }),
        _ => Remainder::Sigma,
    };
    Ok(ConstantTermProfile {
        speh_mult: i,
        twist,
        remainder,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum WhittakerVerdict {
    Vanishes,
    EqualsShifted,
    Unconstrained,
}

/// Fate of the degenerate Whittaker coefficient along `N_{1^p}`.
pub fn whittaker_depth_vanishing(family: Family, p: usize) -> Result<WhittakerVerdict> {
    family.check()?;
    let threshold = match family {
        Family::CaseI { m, .. } => 2 * m + 1,
        Family::Metaplectic { k, .. } => 2 * k + 1,
        _ => return Err(Error::validation(format!("no depth bound recorded for {family}"))),
    };
    if p == 0 {
        return Err(Error::validation("p must be positive"));
    }
    Ok(if p >= threshold {
        WhittakerVerdict::Vanishes
    } else if p + 1 == threshold {
        WhittakerVerdict::EqualsShifted
    } else {
        WhittakerVerdict::Unconstrained
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> Rational64 {
        Rational64::new(n, d)
    }

    fn ev(s: &str) -> ExponentVector {
        s.parse().unwrap()
    }

    #[test]
    fn speh_and_twist() {
        assert_eq!(speh_exponents(1), ev("{0}"));
        assert_eq!(speh_exponents(3), ev("{-1,0,1}"));
        assert_eq!(speh_exponents(2), ev("{-1/2,1/2}"));
        assert_eq!(twist(&ev("{-1/2,1/2}"), q(-1, 1)).unwrap(), ev("{-3/2,-1/2}"));
        assert_eq!(twist(&ev("{0}"), q(-1, 2)).unwrap(), ev("{-1/2}"));
        assert_eq!(twist(&ev("{1,2}"), q(0, 1)).unwrap(), ev("{1,2}"));
        assert!(twist(&ev("{0}"), q(1, 3)).is_err());
        assert!("{1/3}".parse::<ExponentVector>().is_err());
        assert_eq!(ev("{-3/2,-1/2}").to_string(), "{-3/2,-1/2}");
    }

    #[test]
    fn square_integrability() {
        assert!(langlands_square_integrable(&ev("{-3/2,-1/2}")));
        assert!(!langlands_square_integrable(&ev("{-1/2,1/2}")));
        assert!(langlands_square_integrable(&ev("{}")));
        assert!(!langlands_square_integrable(&ev("{0}")));
    }

    #[test]
    fn chain() {
        assert!(exponent_chain_check(2, &[q(1, 4), q(-1, 4)]).unwrap());
        assert!(exponent_chain_check(1, &[q(0, 1)]).unwrap());
        assert!(exponent_chain_check(1, &[q(3, 5)]).is_err());
        assert!(exponent_chain_check(2, &[q(-1, 4), q(1, 4)]).is_err());
        assert!(exponent_chain_check(0, &[]).is_err());
    }

    #[test]
    fn profiles() {
        let p = constant_term_profile(Family::CaseI { a: 2, b: 3, m: 1 }, 3).unwrap();
        assert_eq!((p.twist, p.remainder), (q(-2, 1), Remainder::Sigma));
        let p = constant_term_profile(Family::CaseII { a: 2, b: 3, m: 1 }, 3).unwrap();
        assert_eq!((p.twist, p.remainder), (q(-2, 1), Remainder::NonResidual));
        let p = constant_term_profile(Family::CaseII { a: 2, b: 3, m: 1 }, 4).unwrap();
        assert_eq!((p.twist, p.remainder), (q(-3, 2), Remainder::Sigma));
        let p = constant_term_profile(Family::CaseIII { a: 2, b: 3, m: 1 }, 1).unwrap();
        assert_eq!(p.twist, q(-5, 2));
        assert_eq!(p.remainder, Remainder::Tower(Family::CaseIII { a: 2, b: 2, m: 1 }));
        assert!(constant_term_profile(Family::CaseI { a: 2, b: 3, m: 1 }, 4).is_err());
        assert!(constant_term_profile(Family::Metaplectic { k: 1, b: 3 }, 3).is_err());
        let p = constant_term_profile(Family::Metaplectic { k: 1, b: 3 }, 2).unwrap();
        assert_eq!((p.twist, p.remainder), (q(-2, 1), Remainder::Tower(Family::Metaplectic { k: 1, b: 1 })));
        assert!(constant_term_profile(Family::CaseI { a: 4, b: 1, m: 1 }, 1).is_err());
    }

    #[test]
    fn whittaker_thresholds() {
        let f = Family::CaseI { a: 1, b: 1, m: 2 };
        assert_eq!(whittaker_depth_vanishing(f, 5).unwrap(), WhittakerVerdict::Vanishes);
        assert_eq!(whittaker_depth_vanishing(f, 4).unwrap(), WhittakerVerdict::EqualsShifted);
        assert_eq!(whittaker_depth_vanishing(f, 1).unwrap(), WhittakerVerdict::Unconstrained);
        let g = Family::Metaplectic { k: 1, b: 2 };
        assert_eq!(whittaker_depth_vanishing(g, 3).unwrap(), WhittakerVerdict::Vanishes);
        assert!(whittaker_depth_vanishing(Family::CaseIII { a: 2, b: 1, m: 0 }, 3).is_err());
    }

    #[test]
    fn family_grammar() {
        assert_eq!("II(2, 3, 1)".parse::<Family>().unwrap(), Family::CaseII { a: 2, b: 3, m: 1 });
        assert_eq!("Mp(1,2)".parse::<Family>().unwrap().to_string(), "Mp(1,2)");
        assert!("IV(1,1,1)".parse::<Family>().is_err());
        assert!("III(3,1,1)".parse::<Family>().is_err());
    }
}
