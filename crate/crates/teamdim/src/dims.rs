//! Upper, dual upper and cylindrical dimension of a family, computed as
//! minimum set covers over canonical candidate collections:
//!
//! * upper dimension — convex shadows of critical sets, with the maximal
//!   members forced in;
//! * dual upper dimension — dual convex shadows of dual critical sets, with
//!   the minimal members forced in;
//! * cylindrical dimension — inclusion-maximal intervals inside the family.
//!
//! The exact search is branch-and-bound seeded by a greedy cover. Exceeding
//! the search budget returns the greedy incumbent, never silently.

use crate::setfam::{
    all_shadows, convex_shadow_masks, dual_convex_shadow_masks, max_sets, min_sets, Family,
    Interval, Subset,
};
use crate::{Error, Result};
use std::time::{Duration, Instant};

/// Node and wall-clock limits for exact searches.
#[derive(Debug, Clone, Copy)]
pub struct SearchBudget {
    pub max_nodes: u64,
    pub wall_clock: Duration,
}

impl Default for SearchBudget {
    fn default() -> Self {
        SearchBudget {
            max_nodes: 10_000_000,
            wall_clock: Duration::from_secs(30),
        }
    }
}

impl SearchBudget {
    pub fn new(max_nodes: u64, wall_clock: Duration) -> Self {
        assert!(max_nodes > 0 && wall_clock > Duration::ZERO);
        SearchBudget {
            max_nodes,
            wall_clock,
        }
    }

    /// A budget large enough for the slowest verification batteries.
    pub fn extended() -> Self {
        SearchBudget {
            max_nodes: 200_000_000,
            wall_clock: Duration::from_secs(600),
        }
    }
}

pub(crate) struct BudgetClock {
    deadline: Instant,
    max_nodes: u64,
    pub nodes: u64,
}

impl BudgetClock {
    pub fn start(budget: &SearchBudget) -> Self {
        BudgetClock {
            deadline: Instant::now() + budget.wall_clock,
            max_nodes: budget.max_nodes,
            nodes: 0,
        }
    }

    /// Count `n` units of work; false once the budget is exhausted.
    pub fn tick(&mut self, n: u64) -> bool {
        self.nodes += n;
        if self.nodes > self.max_nodes {
            return false;
        }
        // clock checks are comparatively expensive
        if self.nodes % 4096 < n && Instant::now() > self.deadline {
            return false;
        }
        true
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CoverStatus {
    Exact,
    UpperBoundBudget,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CoverMode {
    Dominate,
    Support,
    Interval,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum CoverWitness {
    Sets(Vec<Subset>),
    Intervals(Vec<Interval>),
}

impl CoverWitness {
    pub fn len(&self) -> usize {
        match self {
            CoverWitness::Sets(v) => v.len(),
            CoverWitness::Intervals(v) => v.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

/// A dimension value together with its verifying witness cover.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CoverResult {
    pub value: usize,
    pub witness: CoverWitness,
    pub status: CoverStatus,
}

/// True iff the union of the convex shadows of `g` equals the family.
pub fn check_dominating(fam: &Family, g: &[Subset]) -> Result<bool> {
    check_cover_by_shadows(fam, g, false)
}

/// True iff the union of the dual convex shadows of `g` equals the family.
pub fn check_supporting(fam: &Family, g: &[Subset]) -> Result<bool> {
    check_cover_by_shadows(fam, g, true)
}

fn check_cover_by_shadows(fam: &Family, g: &[Subset], dual: bool) -> Result<bool> {
    for s in g {
        if !fam.contains(s) {
            return Err(Error::NotASubfamily);
        }
    }
    let mut covered: std::collections::HashSet<u32> = std::collections::HashSet::new();
    for s in g {
        let masks = if dual {
            dual_convex_shadow_masks(fam, s.bits())
        } else {
            convex_shadow_masks(fam, s.bits())
        };
        covered.extend(masks);
    }
    Ok(covered.len() == fam.len() && fam.masks().iter().all(|m| covered.contains(m)))
}

/// True iff every interval is contained in the family and their union is
/// the whole family.
pub fn check_interval_cover(fam: &Family, cover: &[Interval]) -> Result<bool> {
    let mut covered: std::collections::HashSet<u32> = std::collections::HashSet::new();
    for iv in cover {
        if iv.width() != fam.width() {
            return Err(Error::BaseMismatch(fam.width(), iv.width()));
        }
        for m in iv.members() {
            if !fam.contains_mask(m) {
                return Ok(false);
            }
            covered.insert(m);
        }
    }
    Ok(covered.len() == fam.len())
}

/// Minimal number of dominated convex subfamilies covering the family.
pub fn upper_dimension(fam: &Family, budget: &SearchBudget) -> CoverResult {
    shadow_dimension(fam, budget, false, true)
}

/// Minimal number of supported convex subfamilies covering the family.
pub fn dual_upper_dimension(fam: &Family, budget: &SearchBudget) -> CoverResult {
    shadow_dimension(fam, budget, true, true)
}

/// Minimal number of intervals inside the family covering it.
pub fn cylindrical_dimension(fam: &Family, budget: &SearchBudget) -> CoverResult {
    interval_dimension(fam, budget, true)
}

/// A valid cover found greedily; its value is an upper bound on the exact
/// dimension.
pub fn greedy_cover(fam: &Family, mode: CoverMode, budget: &SearchBudget) -> CoverResult {
    match mode {
        CoverMode::Dominate => shadow_dimension(fam, budget, false, false),
        CoverMode::Support => shadow_dimension(fam, budget, true, false),
        CoverMode::Interval => interval_dimension(fam, budget, false),
    }
}

fn empty_result(mode: CoverMode) -> CoverResult {
    CoverResult {
        value: 0,
        witness: match mode {
            CoverMode::Interval => CoverWitness::Intervals(Vec::new()),
            _ => CoverWitness::Sets(Vec::new()),
        },
        status: CoverStatus::Exact,
    }
}

fn shadow_dimension(fam: &Family, budget: &SearchBudget, dual: bool, exact: bool) -> CoverResult {
    let mode = if dual {
        CoverMode::Support
    } else {
        CoverMode::Dominate
    };
    if fam.is_empty() {
        return empty_result(mode);
    }
    let mut clock = BudgetClock::start(budget);
    let shadows = all_shadows(fam, dual);
    let total: u64 = shadows.iter().map(|s| s.len() as u64).sum();
    if !clock.tick(total) {
        // trivial fallback: every member covers itself through its own shadow
        return CoverResult {
            value: fam.len(),
            witness: CoverWitness::Sets(fam.subsets().collect()),
            status: CoverStatus::UpperBoundBudget,
        };
    }

    // candidates: members with inclusion-maximal shadows (critical sets);
    // any shadow is contained in a critical one, so optimality is preserved
    let mut candidate_ix: Vec<usize> = Vec::new();
    for (i, sh) in shadows.iter().enumerate() {
        let dominated = shadows
            .iter()
            .enumerate()
            .any(|(j, other)| j != i && sh.len() < other.len() && sorted_subset(sh, other));
        if !dominated {
            candidate_ix.push(i);
        }
    }
    // forced: maximal members for domination, minimal for support
    let forced_fam = if dual { min_sets(fam) } else { max_sets(fam) };
    let forced: Vec<u32> = forced_fam.masks().to_vec();

    let universe: Vec<u32> = fam.masks().to_vec();
    let pos = |m: u32| universe.binary_search(&m).unwrap();
    let candidates: Vec<CandSet> = candidate_ix
        .iter()
        .map(|&i| CandSet {
            label: fam.masks()[i],
            cover: {
                let mut bs = BitSet::new(universe.len());
                for &m in &shadows[i] {
                    bs.set(pos(m));
                }
                bs
            },
        })
        .collect();
    let forced_cand: Vec<usize> = forced
        .iter()
        .map(|&m| {
            candidates
                .iter()
                .position(|c| c.label == m)
                .expect("forced members have maximal shadows")
        })
        .collect();

    let (picked, status) = solve_cover(
        universe.len(),
        &candidates,
        &forced_cand,
        &mut clock,
        exact,
    );
    let witness: Vec<Subset> = picked
        .iter()
        .map(|&i| Subset::new(fam.width(), candidates[i].label))
        .collect();
    debug_assert!(check_cover_by_shadows(fam, &witness, dual).unwrap());
    CoverResult {
        value: witness.len(),
        witness: CoverWitness::Sets(witness),
        status,
    }
}

/// All inclusion-maximal intervals contained in the family, canonically
/// ordered. `None` when the enumeration exceeds the budget.
pub(crate) fn maximal_intervals(fam: &Family, clock: &mut BudgetClock) -> Option<Vec<Interval>> {
    let shadows = all_shadows(fam, false);
    let total: u64 = shadows.iter().map(|s| s.len() as u64).sum();
    if !clock.tick(total) {
        return None;
    }
    // every interval inside the family is (lower, top) with top a member and
    // lower in its shadow
    let mut inside: std::collections::HashSet<(u32, u32)> = std::collections::HashSet::new();
    for (i, sh) in shadows.iter().enumerate() {
        let top = fam.masks()[i];
        for &lo in sh {
            inside.insert((lo, top));
        }
    }
    let w = fam.width();
    let mut out = Vec::new();
    for &(lo, top) in inside.iter() {
        let mut maximal = true;
        for e in 0..w as u32 {
            let bit = 1u32 << e;
            if top & bit == 0 && inside.contains(&(lo, top | bit)) {
                maximal = false;
                break;
            }
            if lo & bit != 0 && inside.contains(&(lo & !bit, top)) {
                maximal = false;
                break;
            }
        }
        if maximal {
            out.push(
                Interval::new(Subset::new(w, lo), Subset::new(w, top))
                    .expect("shadow members are below their top"),
            );
        }
    }
    out.sort_unstable();
    Some(out)
}

fn interval_dimension(fam: &Family, budget: &SearchBudget, exact: bool) -> CoverResult {
    if fam.is_empty() {
        return empty_result(CoverMode::Interval);
    }
    let mut clock = BudgetClock::start(budget);
    let Some(primes) = maximal_intervals(fam, &mut clock) else {
        return greedy_grown_intervals(fam);
    };
    let universe: Vec<u32> = fam.masks().to_vec();
    let pos = |m: u32| universe.binary_search(&m).unwrap();
    let candidates: Vec<CandSet> = primes
        .iter()
        .enumerate()
        .map(|(i, iv)| CandSet {
            label: i as u32,
            cover: {
                let mut bs = BitSet::new(universe.len());
                for m in iv.members() {
                    bs.set(pos(m));
                }
                bs
            },
        })
        .collect();
    let (picked, status) = solve_cover(universe.len(), &candidates, &[], &mut clock, exact);
    let witness: Vec<Interval> = picked.iter().map(|&i| primes[i]).collect();
    debug_assert!(check_interval_cover(fam, &witness).unwrap());
    CoverResult {
        value: witness.len(),
        witness: CoverWitness::Intervals(witness),
        status,
    }
}

/// Fallback when maximal-interval enumeration is too large: grow one
/// interval greedily around each still-uncovered member.
fn greedy_grown_intervals(fam: &Family) -> CoverResult {
    let w = fam.width();
    let mut covered: std::collections::HashSet<u32> = std::collections::HashSet::new();
    let mut witness = Vec::new();
    for &m in fam.masks() {
        if covered.contains(&m) {
            continue;
        }
        let (mut lo, mut hi) = (m, m);
        // grow upward then downward, element by element
        let mut changed = true;
        while changed {
            changed = false;
            for e in 0..w as u32 {
                let bit = 1u32 << e;
                if hi & bit == 0 && interval_inside(fam, lo, hi | bit) {
                    hi |= bit;
                    changed = true;
                }
                if lo & bit != 0 && interval_inside(fam, lo & !bit, hi) {
                    lo &= !bit;
                    changed = true;
                }
            }
        }
        let iv = Interval::new(Subset::new(w, lo), Subset::new(w, hi)).unwrap();
        covered.extend(iv.members());
        witness.push(iv);
    }
    CoverResult {
        value: witness.len(),
        witness: CoverWitness::Intervals(witness),
        status: CoverStatus::UpperBoundBudget,
    }
}

fn interval_inside(fam: &Family, lo: u32, hi: u32) -> bool {
    let free = hi & !lo;
    let mut sub = free;
    loop {
        if !fam.contains_mask(lo | sub) {
            return false;
        }
        if sub == 0 {
            return true;
        }
        sub = (sub - 1) & free;
    }
}

// ---------------------------------------------------------------------------
// minimum set cover engine
// ---------------------------------------------------------------------------

#[derive(Clone)]
pub(crate) struct BitSet {
    words: Vec<u64>,
    len: usize,
}

impl BitSet {
    pub fn new(len: usize) -> Self {
        BitSet {
            words: vec![0; (len + 63) / 64],
            len,
        }
    }

    pub fn set(&mut self, i: usize) {
        self.words[i >> 6] |= 1 << (i & 63);
    }

    pub fn get(&self, i: usize) -> bool {
        self.words[i >> 6] >> (i & 63) & 1 == 1
    }

    pub fn count(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn union_in(&mut self, other: &BitSet) {
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a |= b;
        }
    }

    pub fn count_missing_from(&self, covered: &BitSet) -> usize {
        self.words
            .iter()
            .zip(&covered.words)
            .map(|(a, b)| (a & !b).count_ones() as usize)
            .sum()
    }

    pub fn is_subset(&self, other: &BitSet) -> bool {
        self.words.iter().zip(&other.words).all(|(a, b)| a & !b == 0)
    }

    pub fn intersects(&self, other: &BitSet) -> bool {
        self.words.iter().zip(&other.words).any(|(a, b)| a & b != 0)
    }

    pub fn all_set(&self) -> bool {
        self.count() == self.len
    }

    pub fn first_unset(&self) -> Option<usize> {
        (0..self.len).find(|&i| !self.get(i))
    }
}

pub(crate) struct CandSet {
    pub label: u32,
    pub cover: BitSet,
}

/// Minimum set cover by branch-and-bound: greedy incumbent, forced-element
/// propagation, packing lower bound, branch on the scarcest element.
/// Returns selected candidate indices in canonical order.
pub(crate) fn solve_cover(
    universe: usize,
    candidates: &[CandSet],
    forced: &[usize],
    clock: &mut BudgetClock,
    exact: bool,
) -> (Vec<usize>, CoverStatus) {
    if universe == 0 {
        return (Vec::new(), CoverStatus::Exact);
    }
    // per-element candidate lists
    let mut covering: Vec<Vec<usize>> = vec![Vec::new(); universe];
    for (ci, c) in candidates.iter().enumerate() {
        for e in 0..universe {
            if c.cover.get(e) {
                covering[e].push(ci);
            }
        }
    }
    debug_assert!(covering.iter().all(|v| !v.is_empty()));

    let mut base_covered = BitSet::new(universe);
    let mut base_chosen: Vec<usize> = Vec::new();
    for &f in forced {
        if !base_chosen.contains(&f) {
            base_chosen.push(f);
            base_covered.union_in(&candidates[f].cover);
        }
    }
    // forced-element propagation: an uncovered element with a single
    // covering candidate pins that candidate
    loop {
        let mut advanced = false;
        for e in 0..universe {
            if base_covered.get(e) {
                continue;
            }
            if covering[e].len() == 1 {
                let c = covering[e][0];
                if !base_chosen.contains(&c) {
                    base_chosen.push(c);
                    base_covered.union_in(&candidates[c].cover);
                    advanced = true;
                }
            }
        }
        if !advanced {
            break;
        }
    }

    let greedy = greedy_complete(universe, candidates, &base_covered, &base_chosen);
    if !exact {
        return (sorted(greedy), CoverStatus::UpperBoundBudget);
    }
    if base_covered.all_set() {
        return (sorted(base_chosen), CoverStatus::Exact);
    }

    let mut best = greedy;
    let mut search = CoverSearch {
        universe,
        candidates,
        covering: &covering,
        best_len: best.len(),
        best: &mut best,
        exhausted: false,
    };
    let mut chosen = base_chosen.clone();
    search.dfs(&mut chosen, &base_covered, clock);
    let status = if search.exhausted {
        CoverStatus::UpperBoundBudget
    } else {
        CoverStatus::Exact
    };
    (sorted(best), status)
}

fn sorted(mut v: Vec<usize>) -> Vec<usize> {
    v.sort_unstable();
    v
}

fn greedy_complete(
    universe: usize,
    candidates: &[CandSet],
    covered0: &BitSet,
    chosen0: &[usize],
) -> Vec<usize> {
    let mut covered = covered0.clone();
    let mut chosen = chosen0.to_vec();
    while !covered.all_set() {
        let mut best_gain = 0;
        let mut best_ix = usize::MAX;
        for (ci, c) in candidates.iter().enumerate() {
            let gain = c.cover.count_missing_from(&covered);
            if gain > best_gain {
                best_gain = gain;
                best_ix = ci;
            }
        }
        debug_assert!(best_ix != usize::MAX);
        chosen.push(best_ix);
        covered.union_in(&candidates[best_ix].cover);
        let _ = universe;
    }
    chosen
}

struct CoverSearch<'a> {
    universe: usize,
    candidates: &'a [CandSet],
    covering: &'a [Vec<usize>],
    best_len: usize,
    best: &'a mut Vec<usize>,
    exhausted: bool,
}

impl CoverSearch<'_> {
    fn lower_bound(&self, covered: &BitSet) -> usize {
        // greedy packing of pairwise-uncoverable elements
        let mut picked: Vec<usize> = Vec::new();
        for e in 0..self.universe {
            if covered.get(e) {
                continue;
            }
            let compatible = picked.iter().all(|&p| {
                !self.covering[e]
                    .iter()
                    .any(|ci| self.candidates[*ci].cover.get(p))
            });
            if compatible {
                picked.push(e);
            }
        }
        picked.len().max(1)
    }

    fn dfs(&mut self, chosen: &mut Vec<usize>, covered: &BitSet, clock: &mut BudgetClock) {
        if self.exhausted {
            return;
        }
        if !clock.tick(1) {
            self.exhausted = true;
            return;
        }
        if covered.all_set() {
            if chosen.len() < self.best_len {
                self.best_len = chosen.len();
                *self.best = chosen.clone();
            }
            return;
        }
        if chosen.len() + 1 >= self.best_len {
            return;
        }
        if chosen.len() + self.lower_bound(covered) >= self.best_len {
            return;
        }
        // branch on the uncovered element with the fewest candidates
        let mut pivot = usize::MAX;
        let mut pivot_count = usize::MAX;
        for e in 0..self.universe {
            if covered.get(e) {
                continue;
            }
            let cnt = self.covering[e]
                .iter()
                .filter(|&&ci| !chosen.contains(&ci))
                .count();
            if cnt < pivot_count {
                pivot_count = cnt;
                pivot = e;
            }
        }
        if pivot_count == 0 {
            return;
        }
        let mut options: Vec<usize> = self.covering[pivot]
            .iter()
            .copied()
            .filter(|ci| !chosen.contains(ci))
            .collect();
        options.sort_by_key(|&ci| {
            (
                usize::MAX - self.candidates[ci].cover.count_missing_from(covered),
                ci,
            )
        });
        for ci in options {
            let mut next = covered.clone();
            next.union_in(&self.candidates[ci].cover);
            chosen.push(ci);
            self.dfs(chosen, &next, clock);
            chosen.pop();
            if self.exhausted {
                return;
            }
        }
    }
}

fn sorted_subset(a: &[u32], b: &[u32]) -> bool {
    let mut i = 0;
    for &x in a {
        while i < b.len() && b[i] < x {
            i += 1;
        }
        if i == b.len() || b[i] != x {
            return false;
        }
        i += 1;
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::setfam::{even_family, random_family, Family};
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn b() -> SearchBudget {
        SearchBudget::default()
    }

    /// Brute-force oracle: smallest k such that some k-subset of members has
    /// shadows covering the family.
    fn oracle_shadow_dim(fam: &Family, dual: bool) -> usize {
        if fam.is_empty() {
            return 0;
        }
        let members: Vec<Subset> = fam.subsets().collect();
        for k in 1..=members.len() {
            if combos(members.len(), k).into_iter().any(|combo| {
                let g: Vec<Subset> = combo.iter().map(|&i| members[i]).collect();
                if dual {
                    check_supporting(fam, &g).unwrap()
                } else {
                    check_dominating(fam, &g).unwrap()
                }
            }) {
                return k;
            }
        }
        unreachable!("the whole family always dominates itself");
    }

    /// Brute-force oracle for cylindrical dimension: smallest number of
    /// intervals inside the family covering it, over all interval sets.
    fn oracle_cd(fam: &Family) -> usize {
        if fam.is_empty() {
            return 0;
        }
        let mut intervals = Vec::new();
        for &top in fam.masks() {
            for lo in crate::setfam::convex_shadow_masks(fam, top) {
                intervals.push(
                    Interval::new(
                        Subset::new(fam.width(), lo),
                        Subset::new(fam.width(), top),
                    )
                    .unwrap(),
                );
            }
        }
        for k in 1..=fam.len() {
            if combos(intervals.len(), k).into_iter().any(|combo| {
                let ivs: Vec<Interval> = combo.iter().map(|&i| intervals[i]).collect();
                check_interval_cover(fam, &ivs).unwrap()
            }) {
                return k;
            }
        }
        fam.len()
    }

    fn combos(n: usize, k: usize) -> Vec<Vec<usize>> {
        let mut out = Vec::new();
        let mut cur = Vec::new();
        fn rec(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
            if cur.len() == k {
                out.push(cur.clone());
                return;
            }
            for i in start..n {
                cur.push(i);
                rec(i + 1, n, k, cur, out);
                cur.pop();
            }
        }
        rec(0, n, k, &mut cur, &mut out);
        out
    }

    #[test]
    fn check_dominating_examples() {
        let even2 = even_family(2);
        let all: Vec<Subset> = even2.subsets().collect();
        assert!(check_dominating(&even2, &all).unwrap());
        assert!(!check_dominating(&even2, &[Subset::full(2)]).unwrap());

        let power = Family::powerset(2);
        assert!(check_dominating(&power, &[Subset::full(2)]).unwrap());

        let err = check_dominating(&even2, &[Subset::from_elems(2, &[0])]).unwrap_err();
        assert!(matches!(err, Error::NotASubfamily));
    }

    #[test]
    fn even_family_dimensions() {
        for n in 2..=4 {
            let e = even_family(n);
            let expect = 1usize << (n - 1);
            let dd = upper_dimension(&e, &b());
            let ddd = dual_upper_dimension(&e, &b());
            let cd = cylindrical_dimension(&e, &b());
            assert_eq!(dd.value, expect);
            assert_eq!(ddd.value, expect);
            assert_eq!(cd.value, expect);
            assert_eq!(dd.status, CoverStatus::Exact);
        }
    }

    #[test]
    fn powerset_dimensions() {
        for k in 1..=4 {
            let p = Family::powerset(k);
            assert_eq!(upper_dimension(&p, &b()).value, 1);
            assert_eq!(dual_upper_dimension(&p, &b()).value, 1);
            assert_eq!(cylindrical_dimension(&p, &b()).value, 1);
        }
    }

    #[test]
    fn empty_and_singleton() {
        let e = Family::empty(3);
        assert_eq!(upper_dimension(&e, &b()).value, 0);
        assert_eq!(cylindrical_dimension(&e, &b()).value, 0);
        let s = Family::from_masks(3, [0u32]);
        assert_eq!(upper_dimension(&s, &b()).value, 1);
        assert_eq!(dual_upper_dimension(&s, &b()).value, 1);
        assert_eq!(cylindrical_dimension(&s, &b()).value, 1);
    }

    #[test]
    fn greedy_examples() {
        let p = Family::powerset(2);
        assert_eq!(greedy_cover(&p, CoverMode::Interval, &b()).value, 1);
        let e3 = even_family(3);
        assert_eq!(greedy_cover(&e3, CoverMode::Dominate, &b()).value, 4);

        let mut rng = ChaCha8Rng::seed_from_u64(42);
        let f = random_family(&mut rng, 4, 0.5);
        let g = greedy_cover(&f, CoverMode::Dominate, &b()).value;
        let exact = upper_dimension(&f, &b()).value;
        assert!(g >= exact);
    }

    #[test]
    fn matches_bruteforce_on_random_families() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..40 {
            let width = rng.gen_range(1..=4);
            let f = random_family(&mut rng, width, 0.55);
            let dd = upper_dimension(&f, &b());
            let ddd = dual_upper_dimension(&f, &b());
            let cd = cylindrical_dimension(&f, &b());
            assert_eq!(dd.value, oracle_shadow_dim(&f, false), "dd of {f:?}");
            assert_eq!(ddd.value, oracle_shadow_dim(&f, true), "ddd of {f:?}");
            assert_eq!(cd.value, oracle_cd(&f), "cd of {f:?}");
            assert_eq!(dd.status, CoverStatus::Exact);
        }
    }

    #[test]
    fn witnesses_verify() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..20 {
            let f = random_family(&mut rng, 4, 0.4);
            if f.is_empty() {
                continue;
            }
            match upper_dimension(&f, &b()).witness {
                CoverWitness::Sets(g) => assert!(check_dominating(&f, &g).unwrap()),
                _ => unreachable!(),
            }
            match cylindrical_dimension(&f, &b()).witness {
                CoverWitness::Intervals(ivs) => {
                    assert!(check_interval_cover(&f, &ivs).unwrap())
                }
                _ => unreachable!(),
            }
        }
    }

    #[test]
    fn max_sets_inside_every_witness() {
        let mut rng = ChaCha8Rng::seed_from_u64(13);
        for _ in 0..20 {
            let f = random_family(&mut rng, 4, 0.5);
            if f.is_empty() {
                continue;
            }
            let CoverWitness::Sets(g) = upper_dimension(&f, &b()).witness else {
                unreachable!()
            };
            for m in max_sets(&f).subsets() {
                assert!(g.contains(&m));
            }
        }
    }

    #[test]
    fn budget_exhaustion_reports_bound() {
        let e = even_family(4);
        let tiny = SearchBudget::new(1, Duration::from_secs(30));
        let r = upper_dimension(&e, &tiny);
        assert_eq!(r.status, CoverStatus::UpperBoundBudget);
        assert!(r.value >= 8);
        let CoverWitness::Sets(g) = &r.witness else {
            unreachable!()
        };
        assert!(check_dominating(&e, g).unwrap());
    }
}
