//! Acceptance criteria 1-10, one line each on stderr (written past the
//! test harness capture so it shows up in plain `cargo test` output).

use std::collections::BTreeSet;
use std::io::Write;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::time::{Duration, Instant};

use nilorbit_cli::run;
use nilorbit_core::arthur::{p_of_psi, CaseTag, GlobalParameter};
use nilorbit_core::collapse::{barbasch_vogan_dual, sp_expansion, special_sp_collapse};
use nilorbit_core::descent::{descent_rank, descent_term_analysis, DescentStatus};
use nilorbit_core::exchange::{exchange_sequences, literal_index_terms, verify_stages};
use nilorbit_core::partition::{enumerate_partitions, ClassFilter};
use nilorbit_core::residual::{langlands_square_integrable, speh_exponents, twist};
use nilorbit_core::roots::{v_p2, Arrangement, Root};
use nilorbit_core::Partition;
use num_rational::Rational64;

type Parts = Vec<usize>;

// Independent oracles on plain vectors.

fn parts(p: &Partition) -> Parts {
    p.parts().to_vec()
}

fn sorted(mut v: Parts) -> Parts {
    v.retain(|&x| x > 0);
    v.sort_unstable_by(|a, b| b.cmp(a));
    v
}

fn pw(spec: &[(usize, usize)]) -> Parts {
    sorted(spec.iter().flat_map(|&(p, m)| std::iter::repeat_n(p, m)).collect())
}

fn conj(p: &[usize]) -> Parts {
    let top = p.first().copied().unwrap_or(0);
    (1..=top).map(|i| p.iter().filter(|&&x| x >= i).count()).collect()
}

fn mult(p: &[usize], x: usize) -> usize {
    p.iter().filter(|&&y| y == x).count()
}

fn is_sp(p: &[usize]) -> bool {
    p.iter().all(|&x| x % 2 == 0 || mult(p, x).is_multiple_of(2))
}

fn is_orth(p: &[usize]) -> bool {
    p.iter().all(|&x| x % 2 == 1 || mult(p, x).is_multiple_of(2))
}

/// Dominance `p >= q`, same size assumed.
fn dominates(p: &[usize], q: &[usize]) -> bool {
    let (mut a, mut b) = (0, 0);
    for i in 0..p.len().max(q.len()) {
        a += p.get(i).copied().unwrap_or(0);
        b += q.get(i).copied().unwrap_or(0);
        if a < b {
            return false;
        }
    }
    true
}

fn lex_greater(p: &[usize], q: &[usize]) -> bool {
    for i in 0..p.len().max(q.len()) {
        let (x, y) = (p.get(i).copied().unwrap_or(0), q.get(i).copied().unwrap_or(0));
        if x != y {
            return x > y;
        }
    }
    false
}

fn all_partitions(n: usize) -> Vec<Parts> {
    fn go(n: usize, max: usize, cur: &mut Parts, out: &mut Vec<Parts>) {
        if n == 0 {
            out.push(cur.clone());
            return;
        }
        for p in (1..=max.min(n)).rev() {
            cur.push(p);
            go(n - p, p, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(n, n, &mut Vec::new(), &mut out);
    out
}

/// Classical type C collapse: lower the last copy of the largest odd part
/// of odd multiplicity, raise the first later part below it by one, repeat.
fn c_collapse(p: &[usize]) -> Parts {
    let mut v = p.to_vec();
    loop {
        let bad = v.iter().copied().filter(|&x| x % 2 == 1 && mult(&v, x) % 2 == 1).max();
        let Some(q) = bad else { return sorted(v) };
        let last = v.iter().rposition(|&x| x == q).unwrap();
        v[last] -= 1;
        match v.iter().skip(last + 1).position(|&r| r < q - 1) {
            Some(off) => v[last + 1 + off] += 1,
            None => v.push(1),
        }
        v = sorted(v);
    }
}

fn minus_tail(q: &[usize]) -> Parts {
    let mut v = q.to_vec();
    *v.last_mut().unwrap() -= 1;
    sorted(v)
}

/// Dual by the transpose-first recipe, using only the classical collapse.
fn dual_oracle(q: &[usize]) -> Parts {
    c_collapse(&minus_tail(&conj(q)))
}

fn closed_form(tag: CaseTag) -> Parts {
    match tag {
        CaseTag::CaseI { a, b, m } if a == 2 * m + 1 => pw(&[(a, 2 * b), (2 * m, 1)]),
        CaseTag::CaseI { a, b, m } if a % 2 == 0 => pw(&[(2 * m, 1), (a, 2 * b)]),
        CaseTag::CaseI { a, b, m } => pw(&[(2 * m, 1), (a + 1, 1), (a, 2 * b - 2), (a - 1, 1)]),
        CaseTag::CaseII { a, b, m } if a % 2 == 0 => pw(&[(2 * m + 2 * a, 1), (a, 2 * b)]),
        CaseTag::CaseII { a, b, m } => pw(&[(2 * m + 2 * a, 1), (a + 1, 1), (a, 2 * b - 2), (a - 1, 1)]),
        CaseTag::CaseIII { a, b, m } => pw(&[(a + 2 * m, 1), (a, 2 * b - 1)]),
        t => panic!("no closed form for {t}"),
    }
}

/// Every applicable case over `a <= 6`, `b <= 4`, `m <= 4`.
fn grid() -> Vec<CaseTag> {
    let mut out = Vec::new();
    for a in 1..=6 {
        for b in 1..=4 {
            for m in 0..=4 {
                if a <= 2 * m + 1 {
                    out.push(CaseTag::CaseI { a, b, m });
                }
                out.push(CaseTag::CaseII { a, b, m });
                if a % 2 == 0 {
                    out.push(CaseTag::CaseIII { a, b, m });
                }
            }
        }
    }
    out
}

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn p(v: &[usize]) -> Partition {
    Partition::new(v.to_vec())
}

// Criteria.

fn eta_grid() -> Result<String, String> {
    let tags = grid();
    for &tag in &tags {
        let psi = GlobalParameter::from_case(&tag).map_err(|e| format!("{tag}: {e}"))?;
        let q = p_of_psi(&psi).map_err(|e| format!("{tag}: {e}"))?;
        let eta = barbasch_vogan_dual(&q).map_err(|e| format!("{tag}: {e}"))?;
        let want = closed_form(tag);
        ensure(parts(&eta) == want, || format!("{tag}: got {eta}, closed form {}", p(&want)))?;
    }
    Ok(format!("{} parameters", tags.len()))
}

fn expansion_identity() -> Result<String, String> {
    let mut count = 0;
    for a in (1..=6).step_by(2) {
        for b in 1..=4 {
            for m in 0..=4 {
                if a > 2 * m {
                    continue;
                }
                let src = pw(&[(2 * m, 1), (a, 2 * b)]);
                let want = pw(&[(2 * m, 1), (a + 1, 1), (a, 2 * b - 2), (a - 1, 1)]);
                let got = sp_expansion(&p(&src)).map_err(|e| e.to_string())?;
                ensure(parts(&got) == want, || format!("{}: got {got}, want {}", p(&src), p(&want)))?;
                count += 1;
            }
        }
    }
    Ok(format!("{count} identities"))
}

fn collapse_step() -> Result<String, String> {
    let mut count = 0;
    for a in (1..=6).step_by(2) {
        for b in 1..=4 {
            for m in 0..=4 {
                let src = pw(&[(2 * b + 1, a), (1, 2 * m + a)]);
                let want = pw(&[(2 * b + 1, a - 1), (2 * b, 1), (2, 1), (1, 2 * m + a - 1)]);
                let got = special_sp_collapse(&p(&src)).map_err(|e| e.to_string())?;
                ensure(parts(&got) == want, || format!("{}: got {got}, want {}", p(&src), p(&want)))?;
                count += 1;
            }
        }
    }
    Ok(format!("{count} collapses"))
}

fn duality_properties() -> Result<String, String> {
    let mut checked = 0;
    for n in (1..=17).step_by(2) {
        let orth: Vec<Parts> = all_partitions(n).into_iter().filter(|q| is_orth(q)).collect();
        let special: Vec<Parts> = all_partitions(n - 1)
            .into_iter()
            .filter(|s| is_sp(s) && is_sp(&conj(s)))
            .collect();
        let mut duals = Vec::with_capacity(orth.len());
        for q in &orth {
            let eta = parts(&barbasch_vogan_dual(&p(q)).map_err(|e| format!("{}: {e}", p(q)))?);
            ensure(is_sp(&eta) && is_sp(&conj(&eta)), || format!("dual {} of {} not special", p(&eta), p(q)))?;
            ensure(eta == dual_oracle(q), || format!("dual of {}: {} vs oracle {}", p(q), p(&eta), p(&dual_oracle(q))))?;
            let d = minus_tail(q);
            let c = parts(&special_sp_collapse(&p(&d)).map_err(|e| e.to_string())?);
            ensure(dominates(&d, &c), || format!("collapse of {} not below it", p(&d)))?;
            let again = parts(&special_sp_collapse(&p(&c)).map_err(|e| e.to_string())?);
            ensure(again == c, || format!("collapse not idempotent at {}", p(&d)))?;
            for s in special.iter().filter(|s| dominates(&d, s)) {
                ensure(dominates(&c, s), || format!("collapse {} of {} misses {}", p(&c), p(&d), p(s)))?;
            }
            duals.push(eta);
        }
        for (i, q1) in orth.iter().enumerate() {
            for (j, q2) in orth.iter().enumerate() {
                if dominates(q1, q2) && !dominates(&duals[j], &duals[i]) {
                    return Err(format!("{} >= {} but duals {} , {}", p(q1), p(q2), p(&duals[i]), p(&duals[j])));
                }
            }
        }
        for s in all_partitions(n - 1).into_iter().filter(|s| is_sp(s)) {
            let e = parts(&sp_expansion(&p(&s)).map_err(|e| format!("{}: {e}", p(&s)))?);
            ensure(dominates(&e, &s), || format!("expansion of {} not above it", p(&s)))?;
            ensure(is_sp(&e) && is_sp(&conj(&e)), || format!("expansion of {} not special", p(&s)))?;
            let again = parts(&sp_expansion(&p(&e)).map_err(|e| e.to_string())?);
            ensure(again == e, || format!("expansion not idempotent at {}", p(&s)))?;
            for t in special.iter().filter(|t| dominates(t, &s)) {
                ensure(dominates(t, &e), || format!("expansion {} of {} not below {}", p(&e), p(&s), p(t)))?;
            }
        }
        checked += orth.len();
    }
    Ok(format!("{checked} orthogonal partitions"))
}

fn specialness_oracle() -> Result<String, String> {
    let mut checked = 0;
    for size in (0..=20).step_by(2) {
        let image: BTreeSet<Parts> = all_partitions(size + 1)
            .into_iter()
            .filter(|q| is_orth(q))
            .map(|q| dual_oracle(&q))
            .collect();
        for s in enumerate_partitions(size, ClassFilter::Symplectic).map_err(|e| e.to_string())? {
            let v = parts(&s);
            ensure(s.is_special_symplectic() == image.contains(&v), || {
                format!("{s}: transpose criterion {}, image {}", s.is_special_symplectic(), image.contains(&v))
            })?;
            checked += 1;
        }
    }
    Ok(format!("{checked} symplectic partitions"))
}

fn root_exchange(info: &mut Vec<String>) -> Result<String, String> {
    let mut identities = 0;
    for k in 1..=3 {
        for b in 1..=3 {
            let s = exchange_sequences(k, b).map_err(|e| e.to_string())?;
            for i in 1..=2 * k {
                let target = Root::minus(i, i + 1);
                for (x, y) in s.alpha[i - 1].iter().zip(&s.beta[i - 1]) {
                    ensure(x.add(y) == Some(target), || format!("k={k} b={b} i={i}: {x} + {y}"))?;
                    identities += 1;
                }
            }
            for t in literal_index_terms(k, b) {
                let sum = t.sum();
                let want: std::collections::BTreeMap<usize, i64> = [(t.i, 1), (t.i + 1, -1)].into_iter().collect();
                ensure(sum == want, || format!("k={k} b={b} literal term i={} j={}", t.i, t.j))?;
                identities += 1;
            }
        }
    }
    for (k, b) in [(1, 1), (1, 2)] {
        let stages = verify_stages(k, b).map_err(|e| e.to_string())?;
        let first = &stages[0];
        ensure(first.listed.all_passed(), || format!("k={k} b={b} stage 1 listed order:\n{}", first.listed))?;
        for st in &stages {
            ensure(st.passed(), || format!("k={k} b={b} stage {} has no valid order:\n{}", st.stage, st.listed))?;
            if !st.listed.all_passed() {
                info.push(format!(
                    "k={k} b={b} stage {}: listed order fails, passes in order {:?}",
                    st.stage,
                    st.order.as_ref().unwrap()
                ));
            }
        }
    }
    Ok(format!("{identities} identities, Sp6 and Sp12 stages verified"))
}

fn closed_under_sums(set: &BTreeSet<Root>) -> Option<(Root, Root)> {
    for x in set {
        for y in set {
            if let Some(z) = x.add(y) {
                if !set.contains(&z) {
                    return Some((*x, *y));
                }
            }
        }
    }
    None
}

fn vp2_sanity() -> Result<String, String> {
    let got = v_p2(&p(&[2, 2]), Arrangement::Dominant).map_err(|e| e.to_string())?;
    let want: BTreeSet<Root> = [Root::plus(1, 2), Root::two(1), Root::two(2)].into_iter().collect();
    ensure(got == want, || format!("v_p2([2,2]) = {got:?}"))?;
    let mut checked = 0;
    for size in (2..=12).step_by(2) {
        for s in enumerate_partitions(size, ClassFilter::Symplectic).map_err(|e| e.to_string())? {
            for arr in [Arrangement::Dominant, Arrangement::PaperConcat] {
                let v = v_p2(&s, arr).map_err(|e| e.to_string())?;
                if let Some((x, y)) = closed_under_sums(&v) {
                    return Err(format!("{s} {arr:?}: {x} + {y} escapes"));
                }
                checked += 1;
            }
        }
    }
    Ok(format!("{checked} closure checks"))
}

fn exponent_suite() -> Result<String, String> {
    let half = |n: i64| Rational64::new(n, 2);
    for b in 1..=20usize {
        let s = -half(b as i64);
        let full = twist(&speh_exponents(b), s).map_err(|e| e.to_string())?;
        ensure(full.max() == Some(half(-1)), || format!("b={b}: max {:?}", full.max()))?;
        ensure(langlands_square_integrable(&full), || format!("b={b}: not square-integrable"))?;
        if b >= 2 {
            let short = twist(&speh_exponents(b - 1), s).map_err(|e| e.to_string())?;
            ensure(short.max() == Some(Rational64::from_integer(-1)), || format!("b={b}: short max {:?}", short.max()))?;
        }
    }
    Ok("b <= 20".to_string())
}

fn reduced(tag: CaseTag, l: usize) -> CaseTag {
    match tag {
        CaseTag::CaseI { a, b, m } => CaseTag::CaseI { a, b: b - l, m },
        CaseTag::CaseII { a, b, m } => CaseTag::CaseII { a, b: b - l, m },
        CaseTag::CaseIII { a, b, m } => CaseTag::CaseIII { a, b: b - l, m },
        t => t,
    }
}

fn descent_tables() -> Result<String, String> {
    let mut verdicts = 0;
    let mut tags = 0;
    for tag in grid() {
        let (a, b, m) = tag.aux().unwrap();
        if a * b * m > 24 {
            continue;
        }
        tags += 1;
        let rank = descent_rank(&tag).map_err(|e| e.to_string())?;
        let mut survivors = BTreeSet::new();
        for r in 1..=rank {
            for v in descent_term_analysis(&tag, false, r).map_err(|e| format!("{tag} r={r}: {e}"))? {
                verdicts += 1;
                let here = format!("{tag} r={r} k={}", v.k);
                match v.status {
                    DescentStatus::Survives | DescentStatus::SurvivesIfGeneric => {
                        ensure(v.k == 0, || format!("{here}: survivor with k > 0"))?;
                        survivors.insert(r);
                    }
                    DescentStatus::VanishCuspidalSupport => {
                        ensure((r - v.k) % a != 0, || format!("{here}: cuspidal reason but a | r-k"))?;
                    }
                    DescentStatus::VanishPartitionBound => {
                        let w = v.witness.as_ref().ok_or_else(|| format!("{here}: no witness"))?;
                        let bound = if v.k == r { tag } else { reduced(tag, (r - v.k) / a) };
                        ensure(parts(&w.eta) == closed_form(bound), || format!("{here}: bound {} vs {bound}", w.eta))?;
                        ensure(lex_greater(w.test.parts(), w.eta.parts()), || {
                            format!("{here}: {} not lex-greater than {}", w.test, w.eta)
                        })?;
                    }
                }
            }
        }
        let multiples: BTreeSet<usize> = (1..=rank).filter(|r| r % a == 0).collect();
        ensure(survivors == multiples, || format!("{tag}: survivors {survivors:?}, multiples {multiples:?}"))?;
    }
    Ok(format!("{tags} towers, {verdicts} verdicts"))
}

fn negative_control() -> Result<String, String> {
    let shipped = run(["nilorbit", "paper", "reproduce"]);
    ensure(shipped.exit_code == 0, || format!("shipped corpus exit {}:\n{}", shipped.exit_code, shipped.text()))?;
    let bad = format!("{}/tests/fixtures/corrupted.txt", env!("CARGO_MANIFEST_DIR"));
    let r = run(["nilorbit", "paper", "reproduce", "--corpus", bad.as_str()]);
    ensure(r.exit_code == 2, || format!("corrupted corpus exit {}", r.exit_code))?;
    let summary = shipped.text().lines().last().unwrap_or_default().to_string();
    Ok(summary)
}

struct Criterion {
    id: u32,
    name: &'static str,
    limit: Option<Duration>,
}

#[test]
fn acceptance_criteria() {
    let criteria = [
        (Criterion { id: 1, name: "eta closed-form grid", limit: Some(Duration::from_secs(5)) }, 0),
        (Criterion { id: 2, name: "expansion identity", limit: Some(Duration::from_secs(30)) }, 1),
        (Criterion { id: 3, name: "case II collapse step", limit: None }, 2),
        (Criterion { id: 4, name: "duality properties, odd sizes <= 17", limit: Some(Duration::from_secs(60)) }, 3),
        (Criterion { id: 5, name: "specialness oracle, sizes <= 20", limit: None }, 4),
        (Criterion { id: 6, name: "root exchange", limit: Some(Duration::from_secs(10)) }, 5),
        (Criterion { id: 7, name: "v_p2 sanity", limit: None }, 6),
        (Criterion { id: 8, name: "exponent suite", limit: None }, 7),
        (Criterion { id: 9, name: "descent vanishing tables", limit: Some(Duration::from_secs(30)) }, 8),
        (Criterion { id: 10, name: "negative control", limit: None }, 9),
    ];
    let mut info = Vec::new();
    let mut failures = Vec::new();
    let mut err = std::io::stderr();
    for (c, idx) in criteria {
        let start = Instant::now();
        let outcome = catch_unwind(AssertUnwindSafe(|| match idx {
            0 => eta_grid(),
            1 => expansion_identity(),
            2 => collapse_step(),
            3 => duality_properties(),
            4 => specialness_oracle(),
            5 => root_exchange(&mut info),
            6 => vp2_sanity(),
            7 => exponent_suite(),
            8 => descent_tables(),
            _ => negative_control(),
        }))
        .unwrap_or_else(|_| Err("panicked".to_string()));
        let elapsed = start.elapsed();
        let outcome = match (outcome, c.limit) {
            (Ok(_), Some(limit)) if elapsed > limit => Err(format!("took {elapsed:.2?}, limit {limit:?}")),
            (o, _) => o,
        };
        let line = match &outcome {
            Ok(detail) => format!("criterion {:>2} PASS  {} ({detail}) [{elapsed:.2?}]", c.id, c.name),
            Err(why) => format!("criterion {:>2} FAIL  {}: {why} [{elapsed:.2?}]", c.id, c.name),
        };
        let _ = writeln!(err, "{line}");
        if outcome.is_err() {
            failures.push(line);
        }
    }
    for line in &info {
        let _ = writeln!(err, "  info: {line}");
    }
    assert!(failures.is_empty(), "failed criteria:\n{}", failures.join("\n"));
}
