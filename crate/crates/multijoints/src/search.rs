//! Search for transversal subcollections.
//!
//! Given three families and per-family quotas, decide whether subcollections
//! of the quota sizes exist such that every cross triple satisfies a caller
//! predicate (spanning directions for lines, spanning tangent choices for
//! curves). Small families are decided exactly by pruned backtracking; larger
//! ones fall back to a verified greedy heuristic whose positive answers are
//! always sound.

/// How transversal searches trade exactness for budget.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SearchPolicy {
    /// Families at most this large are searched exhaustively.
    pub exact_limit: usize,
    /// Whether larger families may use the greedy heuristic. When false,
    /// exceeding the limit is reported as a budget error. Heuristic `true`
    /// answers are verified and therefore exact; heuristic `false` answers
    /// may be false negatives.
    pub allow_heuristic: bool,
}

impl Default for SearchPolicy {
    fn default() -> Self {
        SearchPolicy {
            exact_limit: 12,
            allow_heuristic: false,
        }
    }
}

impl SearchPolicy {
    pub fn exact(limit: usize) -> Self {
        SearchPolicy {
            exact_limit: limit,
            allow_heuristic: false,
        }
    }

    pub fn heuristic(limit: usize) -> Self {
        SearchPolicy {
            exact_limit: limit,
            allow_heuristic: true,
        }
    }
}

/// Exact search declined: some family exceeds the policy limit.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) struct BudgetExceeded;

/// Whether each family has a subcollection of the quota size such that every
/// cross triple satisfies `ok` (indices are positions in the respective
/// families; `ok` receives them in family order 0, 1, 2).
pub(crate) fn exists_transversal_subsets(
    sizes: [usize; 3],
    quotas: [usize; 3],
    ok: &mut dyn FnMut(usize, usize, usize) -> bool,
    policy: &SearchPolicy,
) -> Result<bool, BudgetExceeded> {
    if (0..3).any(|i| sizes[i] < quotas[i]) {
        return Ok(false);
    }
    if quotas.contains(&0) {
        // A zero quota makes the product of choices empty, hence transversal.
        return Ok(true);
    }
    if sizes.iter().all(|&k| k <= policy.exact_limit) {
        return Ok(exact_search(sizes, quotas, ok));
    }
    if policy.allow_heuristic {
        return Ok(greedy_search(sizes, quotas, ok));
    }
    Err(BudgetExceeded)
}

/// Exhaustive search. Families are reordered so the two cheapest subset
/// enumerations are explicit and the third is filtered through a running
/// compatibility mask (pruned as soon as it cannot cover its quota).
fn exact_search(
    sizes: [usize; 3],
    quotas: [usize; 3],
    ok: &mut dyn FnMut(usize, usize, usize) -> bool,
) -> bool {
    let mut order = [0usize, 1, 2];
    order.sort_by_key(|&i| binomial(sizes[i], quotas[i]));
    let [fa, fb, fc] = [order[0], order[1], order[2]];
    let mut call = |ia: usize, ib: usize, ic: usize| -> bool {
        let mut idx = [0usize; 3];
        idx[fa] = ia;
        idx[fb] = ib;
        idx[fc] = ic;
        ok(idx[0], idx[1], idx[2])
    };
    let (ka, kb, kc) = (sizes[fa], sizes[fb], sizes[fc]);
    let (na, nb, nc) = (quotas[fa], quotas[fb], quotas[fc]);
    debug_assert!(kc <= 64);
    let full_mask: u64 = if kc == 64 { !0 } else { (1u64 << kc) - 1 };
    // ok-table for (a, b) pairs against every c, as bitmasks over family c.
    let mut pair_mask = vec![vec![0u64; kb]; ka];
    for (ia, row) in pair_mask.iter_mut().enumerate() {
        for (ib, m) in row.iter_mut().enumerate() {
            for ic in 0..kc {
                if call(ia, ib, ic) {
                    *m |= 1u64 << ic;
                }
            }
        }
    }
    let mut a_subset: Vec<usize> = Vec::with_capacity(na);
    let mut b_subset: Vec<usize> = Vec::with_capacity(nb);
    fn choose_b(
        pair_mask: &[Vec<u64>],
        a_subset: &[usize],
        b_subset: &mut Vec<usize>,
        start: usize,
        kb: usize,
        nb: usize,
        nc: usize,
        mask: u64,
    ) -> bool {
        if b_subset.len() == nb {
            return mask.count_ones() as usize >= nc;
        }
        let need = nb - b_subset.len();
        for ib in start..kb {
            if kb - ib < need {
                break;
            }
            let mut m = mask;
            for &ia in a_subset {
                m &= pair_mask[ia][ib];
            }
            if (m.count_ones() as usize) < nc {
                continue;
            }
            b_subset.push(ib);
            if choose_b(pair_mask, a_subset, b_subset, ib + 1, kb, nb, nc, m) {
                b_subset.pop();
                return true;
            }
            b_subset.pop();
        }
        false
    }
    fn choose_a(
        pair_mask: &[Vec<u64>],
        a_subset: &mut Vec<usize>,
        b_subset: &mut Vec<usize>,
        start: usize,
        ka: usize,
        kb: usize,
        na: usize,
        nb: usize,
        nc: usize,
        full_mask: u64,
    ) -> bool {
        if a_subset.len() == na {
            return choose_b(pair_mask, a_subset, b_subset, 0, kb, nb, nc, full_mask);
        }
        let need = na - a_subset.len();
        for ia in start..ka {
            if ka - ia < need {
                break;
            }
            a_subset.push(ia);
            if choose_a(
                pair_mask, a_subset, b_subset, ia + 1, ka, kb, na, nb, nc, full_mask,
            ) {
                a_subset.pop();
                return true;
            }
            a_subset.pop();
        }
        false
    }
    choose_a(
        &pair_mask,
        &mut a_subset,
        &mut b_subset,
        0,
        ka,
        kb,
        na,
        nb,
        nc,
        full_mask,
    )
}

/// Greedy construction: repeatedly add the line breaking the fewest triples
/// against the current partial selection, then verify the result exactly.
/// `true` is trustworthy; `false` only means the greedy run found nothing.
fn greedy_search(
    sizes: [usize; 3],
    quotas: [usize; 3],
    ok: &mut dyn FnMut(usize, usize, usize) -> bool,
) -> bool {
    let mut selected: [Vec<usize>; 3] = [Vec::new(), Vec::new(), Vec::new()];
    let triple =
        |sel: &[Vec<usize>; 3], fam: usize, cand: usize| -> Vec<(usize, usize, usize)> {
            let (o1, o2) = ((fam + 1) % 3, (fam + 2) % 3);
            let mut out = Vec::new();
            for &u in &sel[o1] {
                for &v in &sel[o2] {
                    let mut t = [0usize; 3];
                    t[fam] = cand;
                    t[o1] = u;
                    t[o2] = v;
                    out.push((t[0], t[1], t[2]));
                }
            }
            out
        };
    while (0..3).any(|i| selected[i].len() < quotas[i]) {
        let mut best: Option<(usize, usize, usize)> = None; // (violations, fam, cand)
        for fam in 0..3 {
            if selected[fam].len() >= quotas[fam] {
                continue;
            }
            for cand in 0..sizes[fam] {
                if selected[fam].contains(&cand) {
                    continue;
                }
                let violations = triple(&selected, fam, cand)
                    .into_iter()
                    .filter(|&(a, b, c)| !ok(a, b, c))
                    .count();
                if best.map_or(true, |(v, _, _)| violations < v) {
                    best = Some((violations, fam, cand));
                }
            }
        }
        let (_, fam, cand) = best.expect("quota below family size");
        selected[fam].push(cand);
    }
    // Exact verification of the greedy selection.
    for &a in &selected[0] {
        for &b in &selected[1] {
            for &c in &selected[2] {
                if !ok(a, b, c) {
                    return false;
                }
            }
        }
    }
    true
}

fn binomial(n: usize, k: usize) -> u64 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u64 = 1;
    for i in 0..k {
        acc = acc * (n - i) as u64 / (i + 1) as u64;
    }
    acc
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run(
        sizes: [usize; 3],
        quotas: [usize; 3],
        mut ok: impl FnMut(usize, usize, usize) -> bool,
        policy: &SearchPolicy,
    ) -> Result<bool, BudgetExceeded> {
        exists_transversal_subsets(sizes, quotas, &mut ok, policy)
    }

    #[test]
    fn trivial_cases() {
        let always = |_: usize, _: usize, _: usize| true;
        let p = SearchPolicy::default();
        assert_eq!(run([3, 3, 3], [2, 2, 2], always, &p), Ok(true));
        assert_eq!(run([1, 3, 3], [2, 2, 2], always, &p), Ok(false));
        let never = |_: usize, _: usize, _: usize| false;
        assert_eq!(run([3, 3, 3], [1, 1, 1], never, &p), Ok(false));
    }

    #[test]
    fn finds_the_unique_witness() {
        // Only the triple (2, 1, 0) is good.
        let ok = |a: usize, b: usize, c: usize| (a, b, c) == (2, 1, 0);
        assert_eq!(run([3, 3, 3], [1, 1, 1], ok, &SearchPolicy::default()), Ok(true));
        assert_eq!(run([3, 3, 3], [1, 2, 1], ok, &SearchPolicy::default()), Ok(false));
    }

    #[test]
    fn exact_matches_brute_force_on_random_predicates() {
        // Deterministic pseudo-random predicate; compare against full subset
        // enumeration.
        let sizes = [4usize, 4, 4];
        for salt in 0u64..40 {
            let pred = move |a: usize, b: usize, c: usize| {
                let h = salt
                    .wrapping_mul(0x9E3779B97F4A7C15)
                    .wrapping_add((a * 49 + b * 7 + c) as u64);
                (h.wrapping_mul(0xBF58476D1CE4E5B9) >> 61) != 0
            };
            for quotas in [[1, 1, 1], [2, 2, 2], [2, 1, 3], [4, 4, 4]] {
                let got = run(sizes, quotas, pred, &SearchPolicy::default()).unwrap();
                let want = brute(sizes, quotas, &pred);
                assert_eq!(got, want, "salt {salt} quotas {quotas:?}");
            }
        }
    }

    fn brute(
        sizes: [usize; 3],
        quotas: [usize; 3],
        pred: &impl Fn(usize, usize, usize) -> bool,
    ) -> bool {
        let subsets = |k: usize, n: usize| -> Vec<Vec<usize>> {
            let mut out = Vec::new();
            for bits in 0u32..(1 << k) {
                if bits.count_ones() as usize == n {
                    out.push((0..k).filter(|i| bits >> i & 1 == 1).collect());
                }
            }
            out
        };
        for a in subsets(sizes[0], quotas[0]) {
            for b in subsets(sizes[1], quotas[1]) {
                'c: for c in subsets(sizes[2], quotas[2]) {
                    for &x in &a {
                        for &y in &b {
                            for &z in &c {
                                if !pred(x, y, z) {
                                    continue 'c;
                                }
                            }
                        }
                    }
                    return true;
                }
            }
        }
        false
    }

    #[test]
    fn budget_and_heuristic_paths() {
        let always = |_: usize, _: usize, _: usize| true;
        let tight = SearchPolicy::exact(4);
        assert_eq!(run([5, 3, 3], [1, 1, 1], always, &tight), Err(BudgetExceeded));
        let loose = SearchPolicy::heuristic(4);
        assert_eq!(run([5, 3, 3], [1, 1, 1], always, &loose), Ok(true));
        // Heuristic positive answers are verified: an adversarial predicate
        // that admits no transversal cannot produce true.
        let never = |_: usize, _: usize, _: usize| false;
        assert_eq!(run([5, 5, 5], [2, 2, 2], never, &loose), Ok(false));
    }
}
