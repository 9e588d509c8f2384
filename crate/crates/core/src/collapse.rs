//! Collapses, expansions and the duality map.

use crate::error::{Error, Result};
use crate::partition::{
    decrement_tail, dominance_parts, transpose, walk, Bound, ClassFilter, OrderVerdict, Partition,
};

/// Dominance-extremal member of `filter` inside the down-set (`Below`)
/// or up-set (`Above`) of `p`. A missing or tied extremum is a breach.
fn extremum(p: &Partition, filter: ClassFilter, below: bool) -> Result<Partition> {
    let n = p.size();
    let ps = p.prefix_sums();
    let bound = if below { Bound::Below(&ps) } else { Bound::Above(&ps) };
    // Dominance implies lex, so the dominance maximum (if any) is the lex-first
    // candidate of the down-set and the dominance minimum the lex-last of the up-set.
    let mut best: Option<Vec<usize>> = None;
    walk(n, bound, &mut |q| {
        if filter.accepts(q) && (!below || best.is_none()) {
            best = Some(q.to_vec());
        }
        true
    });
    let best = best.ok_or_else(|| {
        Error::breach(format!("no {filter:?} partition comparable to {p}"))
    })?;
    let wanted = if below { OrderVerdict::Less } else { OrderVerdict::Greater };
    let mut tie: Option<Vec<usize>> = None;
    walk(n, bound, &mut |q| {
        if filter.accepts(q) {
            let v = dominance_parts(q, &best);
            if v != wanted && v != OrderVerdict::Equal {
                tie = Some(q.to_vec());
                return false;
            }
        }
        true
    });
    if let Some(q) = tie {
        return Err(Error::breach(format!(
            "extremum not unique for {p}: {} and {} are both extremal",
            Partition::from_sorted(&best),
            Partition::from_sorted(&q)
        )));
    }
    Ok(Partition::from_sorted(&best))
}

fn even_size(p: &Partition, what: &str) -> Result<()> {
    if !p.size().is_multiple_of(2) {
        return Err(Error::validation(format!("{what} needs even size, {p} has size {}", p.size())));
    }
    Ok(())
}

/// Largest special symplectic partition dominated by `p`.
pub fn special_sp_collapse(p: &Partition) -> Result<Partition> {
    even_size(p, "special collapse")?;
    if p.is_special_symplectic() {
        return Ok(p.clone());
    }
    extremum(p, ClassFilter::SpecialSymplectic, true)
}

/// Largest symplectic partition dominated by `p` (the classical collapse).
pub fn symplectic_collapse(p: &Partition) -> Result<Partition> {
    even_size(p, "symplectic collapse")?;
    if p.is_symplectic() {
        return Ok(p.clone());
    }
    extremum(p, ClassFilter::Symplectic, true)
}

/// Smallest special symplectic partition dominating the symplectic `p`.
pub fn sp_expansion(p: &Partition) -> Result<Partition> {
    even_size(p, "expansion")?;
    if !p.is_symplectic() {
        return Err(Error::validation(format!("{p} is not symplectic")));
    }
    if p.is_special_symplectic() {
        return Ok(p.clone());
    }
    extremum(p, ClassFilter::SpecialSymplectic, false)
}

/// Duality from orthogonal partitions of `2n+1` to special symplectic
/// partitions of `2n`.
pub fn barbasch_vogan_dual(q: &Partition) -> Result<Partition> {
    if q.size().is_multiple_of(2) {
        return Err(Error::validation(format!("{q} has even size {}", q.size())));
    }
    if !q.is_orthogonal() {
        return Err(Error::validation(format!("{q} is not orthogonal")));
    }
    let collapsed = special_sp_collapse(&decrement_tail(q)?)?;
    let dual = transpose(&collapsed);
    if !dual.is_special_symplectic() {
        return Err(Error::breach(format!("dual {dual} of {q} is not special symplectic")));
    }
    Ok(dual)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(s: &str) -> Partition {
        s.parse().unwrap()
    }

    #[test]
    fn collapse_examples() {
        assert_eq!(special_sp_collapse(&p("[3,1]")).unwrap(), p("[2,2]"));
        assert_eq!(special_sp_collapse(&p("[3,1,1,1]")).unwrap(), p("[2,2,1,1]"));
        assert_eq!(special_sp_collapse(&p("[2,2]")).unwrap(), p("[2,2]"));
        assert!(special_sp_collapse(&p("[3]")).is_err());
    }

    #[test]
    fn special_and_classical_collapse_can_differ() {
        assert_eq!(symplectic_collapse(&p("[2,1,1]")).unwrap(), p("[2,1,1]"));
        assert_eq!(special_sp_collapse(&p("[2,1,1]")).unwrap(), p("[1,1,1,1]"));
    }

    #[test]
    fn expansion_examples() {
        assert_eq!(sp_expansion(&p("[2,1,1]")).unwrap(), p("[2,2]"));
        assert_eq!(sp_expansion(&p("[4,1,1]")).unwrap(), p("[4,2]"));
        assert_eq!(sp_expansion(&p("[2,2]")).unwrap(), p("[2,2]"));
        assert!(sp_expansion(&p("[3,1]")).is_err());
    }

    #[test]
    fn dual_examples() {
        assert_eq!(barbasch_vogan_dual(&p("[3,3,3]")).unwrap(), p("[3,3,2]"));
        assert_eq!(barbasch_vogan_dual(&p("[3,3,1,1,1]")).unwrap(), p("[4,2,2]"));
        assert_eq!(barbasch_vogan_dual(&p("[1^5]")).unwrap(), p("[4]"));
        assert!(barbasch_vogan_dual(&p("[2,1,1,1]")).is_err());
        assert!(barbasch_vogan_dual(&p("[2,2]")).is_err());
    }
}
