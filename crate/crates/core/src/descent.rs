//! Term-by-term vanishing analysis for constant terms of descents.

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::arthur::{eta_of_psi, reduce_parameter, CaseTag, GlobalParameter};
use crate::error::{Error, Result};
use crate::partition::{lex_compare, OrderVerdict, Partition};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum DescentStatus {
    VanishCuspidalSupport,
    VanishPartitionBound,
    SurvivesIfGeneric,
    Survives,
}

impl DescentStatus {
    pub fn survives(self) -> bool {
        matches!(self, DescentStatus::Survives | DescentStatus::SurvivesIfGeneric)
    }
}

/// Test partition and bound; the first is lex-greater than the second.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Witness {
    pub test: Partition,
    pub eta: Partition,
}

impl Witness {
    fn new(test: Partition, eta: Partition) -> Result<Self> {
        match lex_compare(&test, &eta)? {
            OrderVerdict::Greater => Ok(Witness { test, eta }),
            v => Err(Error::breach(format!("test partition {test} is {v:?} than bound {eta}, expected Greater"))),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DescentTermVerdict {
    pub r: usize,
    pub k: usize,
    pub status: DescentStatus,
    /// Number of blocks removed from the tower for mixed terms.
    pub l: Option<usize>,
    pub witness: Option<Witness>,
}

impl fmt::Display for DescentTermVerdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "r={} k={} {:?}", self.r, self.k, self.status)?;
        if let Some(l) = self.l {
            write!(f, " l={l}")?;
        }
        if let Some(w) = &self.witness {
            write!(f, " {} > {}", w.test, w.eta)?;
        }
        Ok(())
    }
}

/// Rank of the group the descent lands on, the range of `r`.
pub fn descent_rank(tag: &CaseTag) -> Result<usize> {
    match *tag {
        CaseTag::CaseI { a, b, .. } | CaseTag::CaseII { a, b, .. } => Ok(a * b),
        CaseTag::CaseIII { a, b, .. } => Ok(a / 2 * (2 * b - 1)),
        _ => Err(Error::validation(format!("{tag} has no descent tower"))),
    }
}

/// `[head, 1^ones]`.
fn hook(head: usize, ones: usize) -> Partition {
    Partition::from_powers(&[(head, 1), (1, ones)])
}

/// Verdicts for every summand `0 <= k <= r` of the constant term along
/// the `r`-th maximal parabolic.
pub fn descent_term_analysis(tag: &CaseTag, sigma_generic: bool, r: usize) -> Result<Vec<DescentTermVerdict>> {
    let top = descent_rank(tag)?;
    if r == 0 || r > top {
        return Err(Error::validation(format!("r = {r} outside 1..={top} for {tag}")));
    }
    let (a, b, m) = tag.aux().expect("tower has parameters");
    let psi = GlobalParameter::from_case(tag)?;
    let mut etas: BTreeMap<usize, Partition> = BTreeMap::new();
    let mut eta_at = |l: usize| -> Result<Partition> {
        if let Some(e) = etas.get(&l) {
            return Ok(e.clone());
        }
        let e = if l == 0 {
            eta_of_psi(&psi)?
        } else {
            eta_of_psi(&reduce_parameter(&psi, l)?)?
        };
        etas.insert(l, e.clone());
        Ok(e)
    };
    let mut out = Vec::with_capacity(r + 1);
    for k in 0..=r {
        let verdict = |status, l, witness| DescentTermVerdict { r, k, status, l, witness };
        if k == r {
            let test = match *tag {
                CaseTag::CaseI { .. } => hook(2 * m + 2 * r, 2 * a * b - 2 * r),
                CaseTag::CaseII { .. } => hook(2 * m + 2 * a + 2 * r, 2 * a * b - 2 * r),
                _ => hook(a + 2 * m + 2 * r, 2 * a * b - a - 2 * r),
            };
            let w = Witness::new(test, eta_at(0)?)?;
            out.push(verdict(DescentStatus::VanishPartitionBound, None, Some(w)));
        } else if !(r - k).is_multiple_of(a) {
            out.push(verdict(DescentStatus::VanishCuspidalSupport, None, None));
        } else if k == 0 {
            let status = if sigma_generic {
                DescentStatus::Survives
            } else {
                DescentStatus::SurvivesIfGeneric
            };
            out.push(verdict(status, Some(r / a), None));
        } else {
            let l = (r - k) / a;
            let test = match *tag {
                CaseTag::CaseI { .. } => hook(2 * m + 2 * k, 2 * a * (b - l) - 2 * k),
                CaseTag::CaseII { .. } => hook(2 * m + 2 * a + 2 * k, 2 * a * (b - l) - 2 * k),
                _ => hook(a + 2 * m + 2 * k, 2 * a * (b - l) - a - 2 * k),
            };
            let w = Witness::new(test, eta_at(l)?)?;
            out.push(verdict(DescentStatus::VanishPartitionBound, Some(l), Some(w)));
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(s: &str) -> Partition {
        s.parse().unwrap()
    }

    #[test]
    fn full_rank_term_survives() {
        let tag = CaseTag::CaseI { a: 2, b: 1, m: 2 };
        let v = descent_term_analysis(&tag, true, 2).unwrap();
        assert_eq!(v[0].status, DescentStatus::Survives);
        assert!(v[1..].iter().all(|t| !t.status.survives()));
        let w = v[2].witness.as_ref().unwrap();
        assert_eq!((w.test.clone(), w.eta.clone()), (p("[8]"), p("[4,2,2]")));
        let v = descent_term_analysis(&tag, false, 2).unwrap();
        assert_eq!(v[0].status, DescentStatus::SurvivesIfGeneric);
    }

    #[test]
    fn off_block_rank_dies() {
        let v = descent_term_analysis(&CaseTag::CaseI { a: 2, b: 2, m: 1 }, true, 1).unwrap();
        assert_eq!(v[0].status, DescentStatus::VanishCuspidalSupport);
        assert_eq!(v[1].status, DescentStatus::VanishPartitionBound);
    }

    #[test]
    fn mixed_terms_use_reduced_bound() {
        let v = descent_term_analysis(&CaseTag::CaseI { a: 2, b: 2, m: 1 }, true, 3).unwrap();
        let mixed = &v[1];
        assert_eq!(mixed.l, Some(1));
        let w = mixed.witness.as_ref().unwrap();
        assert_eq!(w.test, p("[4,1,1]"));
        assert_eq!(w.eta, p("[2,2,2]"));
        let v = descent_term_analysis(&CaseTag::CaseII { a: 1, b: 3, m: 0 }, true, 3).unwrap();
        assert_eq!(v[1].witness.as_ref().unwrap().test, p("[4]"));
    }

    #[test]
    fn range_checks() {
        let tag = CaseTag::CaseIII { a: 2, b: 2, m: 1 };
        assert_eq!(descent_rank(&tag).unwrap(), 3);
        assert!(descent_term_analysis(&tag, true, 4).is_err());
        assert!(descent_term_analysis(&tag, true, 0).is_err());
        assert!(descent_term_analysis(&CaseTag::Generic, true, 1).is_err());
    }
}
