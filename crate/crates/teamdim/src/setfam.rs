//! Subsets and families of subsets over a finite indexed base set.
//!
//! A subset is a bit vector (`u32`, element 0 in the least significant bit),
//! and a family is a sorted, deduplicated collection of subsets over one base
//! with an O(1) membership index. The canonical order on subsets everywhere
//! is the numeric value of the bit vector.

use crate::{Error, Result};
use std::collections::HashSet;
use std::fmt;

/// Largest base size for which the dense membership index is used.
pub const DENSE_INDEX_MAX: usize = 20;
/// Largest representable base size.
pub const MAX_BASE: usize = 31;

/// A finite indexed base set with optional display labels.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BaseSet {
    size: usize,
    labels: Option<Vec<String>>,
}

impl BaseSet {
    pub fn new(size: usize) -> Result<Self> {
        if size > MAX_BASE {
            return Err(Error::CapExceeded(format!(
                "base size {size} exceeds the supported maximum {MAX_BASE}"
            )));
        }
        Ok(BaseSet { size, labels: None })
    }

    pub fn with_labels(size: usize, labels: Vec<String>) -> Result<Self> {
        let mut base = Self::new(size)?;
        if labels.len() != size {
            return Err(Error::Invalid(format!(
                "expected {size} labels, got {}",
                labels.len()
            )));
        }
        let distinct: HashSet<&String> = labels.iter().collect();
        if distinct.len() != labels.len() {
            return Err(Error::Invalid("labels must be pairwise distinct".into()));
        }
        base.labels = Some(labels);
        Ok(base)
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn label(&self, i: usize) -> Option<&str> {
        self.labels.as_ref().map(|l| l[i].as_str())
    }
}

/// A subset of a base set of `width` elements, packed into a bit vector.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Subset {
    bits: u32,
    width: u8,
}

impl Subset {
    pub fn new(width: usize, bits: u32) -> Self {
        debug_assert!(width <= MAX_BASE);
        debug_assert_eq!(bits & !mask_full(width), 0);
        Subset {
            bits,
            width: width as u8,
        }
    }

    pub fn empty(width: usize) -> Self {
        Subset::new(width, 0)
    }

    pub fn full(width: usize) -> Self {
        Subset::new(width, mask_full(width))
    }

    pub fn from_elems(width: usize, elems: &[usize]) -> Self {
        let mut bits = 0u32;
        for &e in elems {
            debug_assert!(e < width);
            bits |= 1 << e;
        }
        Subset::new(width, bits)
    }

    pub fn bits(&self) -> u32 {
        self.bits
    }

    pub fn width(&self) -> usize {
        self.width as usize
    }

    pub fn contains(&self, elem: usize) -> bool {
        elem < self.width() && self.bits >> elem & 1 == 1
    }

    pub fn len(&self) -> usize {
        self.bits.count_ones() as usize
    }

    pub fn is_empty(&self) -> bool {
        self.bits == 0
    }

    pub fn is_subset_of(&self, other: &Subset) -> bool {
        self.bits & !other.bits == 0
    }

    pub fn union(&self, other: &Subset) -> Subset {
        Subset::new(self.width(), self.bits | other.bits)
    }

    pub fn inter(&self, other: &Subset) -> Subset {
        Subset::new(self.width(), self.bits & other.bits)
    }

    pub fn minus(&self, other: &Subset) -> Subset {
        Subset::new(self.width(), self.bits & !other.bits)
    }

    pub fn complement(&self) -> Subset {
        Subset::new(self.width(), !self.bits & mask_full(self.width()))
    }

    pub fn elems(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.width()).filter(move |&i| self.bits >> i & 1 == 1)
    }

    /// Element-list rendering used by the family text format: `-` for the
    /// empty set, otherwise ascending space-separated indices.
    pub fn to_line(&self) -> String {
        if self.bits == 0 {
            "-".to_string()
        } else {
            self.elems()
                .map(|e| e.to_string())
                .collect::<Vec<_>>()
                .join(" ")
        }
    }
}

impl fmt::Debug for Subset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{{}}}", self.to_line())
    }
}

pub(crate) fn mask_full(width: usize) -> u32 {
    if width == 0 {
        0
    } else {
        u32::MAX >> (32 - width)
    }
}

/// A nonempty interval `[lower, upper]` of subsets; `lower ⊆ upper` always
/// holds. The empty interval is represented by absence (`Option<Interval>`).
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Interval {
    lower: Subset,
    upper: Subset,
}

impl Interval {
    pub fn new(lower: Subset, upper: Subset) -> Result<Self> {
        if lower.width() != upper.width() {
            return Err(Error::BaseMismatch(lower.width(), upper.width()));
        }
        if !lower.is_subset_of(&upper) {
            return Err(Error::Invalid(
                "interval lower bound is not contained in the upper bound".into(),
            ));
        }
        Ok(Interval { lower, upper })
    }

    pub fn point(s: Subset) -> Self {
        Interval { lower: s, upper: s }
    }

    pub fn lower(&self) -> Subset {
        self.lower
    }

    pub fn upper(&self) -> Subset {
        self.upper
    }

    pub fn width(&self) -> usize {
        self.lower.width()
    }

    pub fn member_count(&self) -> u64 {
        1u64 << (self.upper.len() - self.lower.len())
    }

    pub fn contains(&self, s: &Subset) -> bool {
        self.lower.is_subset_of(s) && s.is_subset_of(&self.upper)
    }

    /// Enumerate the members in canonical order.
    pub fn members(&self) -> Vec<u32> {
        let mut out = Vec::with_capacity(self.member_count() as usize);
        let free = self.upper.bits() & !self.lower.bits();
        let lo = self.lower.bits();
        // standard submask walk, then sort to canonical order
        let mut sub = free;
        loop {
            out.push(lo | sub);
            if sub == 0 {
                break;
            }
            sub = (sub - 1) & free;
        }
        out.sort_unstable();
        out
    }
}

impl fmt::Debug for Interval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{:?},{:?}]", self.lower, self.upper)
    }
}

#[derive(Debug, Clone)]
enum FamIndex {
    Dense(Vec<u64>),
    Sparse(HashSet<u32>),
}

/// A deduplicated family of subsets over one base, sorted canonically.
#[derive(Clone)]
pub struct Family {
    width: u8,
    members: Vec<u32>,
    index: FamIndex,
}

impl PartialEq for Family {
    fn eq(&self, other: &Self) -> bool {
        self.width == other.width && self.members == other.members
    }
}
impl Eq for Family {}

impl fmt::Debug for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Family(base {}, {} members)", self.width, self.members.len())
    }
}

impl Family {
    pub fn from_masks(width: usize, masks: impl IntoIterator<Item = u32>) -> Self {
        let mut members: Vec<u32> = masks.into_iter().collect();
        members.sort_unstable();
        members.dedup();
        let index = Self::build_index(width, &members);
        Family {
            width: width as u8,
            members,
            index,
        }
    }

    fn build_index(width: usize, members: &[u32]) -> FamIndex {
        if width <= DENSE_INDEX_MAX {
            let words = ((1usize << width) + 63) / 64;
            let mut bits = vec![0u64; words];
            for &m in members {
                bits[(m >> 6) as usize] |= 1u64 << (m & 63);
            }
            FamIndex::Dense(bits)
        } else {
            FamIndex::Sparse(members.iter().copied().collect())
        }
    }

    pub fn from_subsets(width: usize, subsets: &[Subset]) -> Result<Self> {
        for s in subsets {
            if s.width() != width {
                return Err(Error::BaseMismatch(width, s.width()));
            }
        }
        Ok(Self::from_masks(width, subsets.iter().map(|s| s.bits())))
    }

    pub fn empty(width: usize) -> Self {
        Self::from_masks(width, std::iter::empty())
    }

    pub fn powerset(width: usize) -> Self {
        assert!(width <= DENSE_INDEX_MAX, "powerset base too large");
        Self::from_masks(width, 0..(1u32 << width))
    }

    pub fn width(&self) -> usize {
        self.width as usize
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn masks(&self) -> &[u32] {
        &self.members
    }

    pub fn subsets(&self) -> impl Iterator<Item = Subset> + '_ {
        let w = self.width();
        self.members.iter().map(move |&m| Subset::new(w, m))
    }

    pub fn contains_mask(&self, mask: u32) -> bool {
        match &self.index {
            FamIndex::Dense(bits) => bits[(mask >> 6) as usize] >> (mask & 63) & 1 == 1,
            FamIndex::Sparse(set) => set.contains(&mask),
        }
    }

    pub fn contains(&self, s: &Subset) -> bool {
        s.width() == self.width() && self.contains_mask(s.bits())
    }

    /// Union of all members; 0 for the empty family.
    pub fn union_all(&self) -> u32 {
        self.members.iter().fold(0, |a, &m| a | m)
    }

    /// Intersection of all members; `None` for the empty family.
    pub fn inter_all(&self) -> Option<u32> {
        let mut it = self.members.iter();
        let first = *it.next()?;
        Some(it.fold(first, |a, &m| a & m))
    }

    pub fn union_with(&self, other: &Family) -> Result<Family> {
        self.check_width(other)?;
        Ok(Family::from_masks(
            self.width(),
            self.members.iter().chain(other.members.iter()).copied(),
        ))
    }

    pub fn intersect_with(&self, other: &Family) -> Result<Family> {
        self.check_width(other)?;
        Ok(Family::from_masks(
            self.width(),
            self.members
                .iter()
                .copied()
                .filter(|&m| other.contains_mask(m)),
        ))
    }

    fn check_width(&self, other: &Family) -> Result<()> {
        if self.width != other.width {
            return Err(Error::BaseMismatch(self.width(), other.width()));
        }
        Ok(())
    }
}

/// Structural flags of a family, each computed by its literal definition.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct FamilyProfile {
    pub convex: bool,
    pub dominated: bool,
    pub supported: bool,
    pub downward_closed: bool,
    pub sperner: bool,
    pub union_closed: bool,
}

impl FamilyProfile {
    /// A nonempty family is an interval iff it is dominated, supported and
    /// convex.
    pub fn is_interval(&self) -> bool {
        self.dominated && self.supported && self.convex
    }
}

/// The family of all `C` with `lower ⊆ C ⊆ upper`; empty when
/// `lower ⊄ upper`.
pub fn interval(lower: Subset, upper: Subset) -> Result<Family> {
    if lower.width() != upper.width() {
        return Err(Error::BaseMismatch(lower.width(), upper.width()));
    }
    if !lower.is_subset_of(&upper) {
        return Ok(Family::empty(lower.width()));
    }
    let iv = Interval::new(lower, upper)?;
    Ok(Family::from_masks(lower.width(), iv.members()))
}

pub fn interval_family(iv: &Interval) -> Family {
    Family::from_masks(iv.width(), iv.members())
}

/// Compute all structural flags of a family.
pub fn classify(fam: &Family) -> FamilyProfile {
    let members = fam.masks();
    let dominated = !fam.is_empty() && fam.contains_mask(fam.union_all());
    let supported = fam.inter_all().map_or(false, |m| fam.contains_mask(m));

    let mut convex = true;
    'outer: for &s in members {
        for &t in members {
            if s & !t == 0 && s != t {
                // s ⊂ t: walk [s, t]
                let free = t & !s;
                let mut sub = free;
                loop {
                    if !fam.contains_mask(s | sub) {
                        convex = false;
                        break 'outer;
                    }
                    if sub == 0 {
                        break;
                    }
                    sub = (sub - 1) & free;
                }
            }
        }
    }

    let mut downward_closed = true;
    'dc: for &m in members {
        for i in 0..fam.width() {
            if m >> i & 1 == 1 && !fam.contains_mask(m & !(1 << i)) {
                downward_closed = false;
                break 'dc;
            }
        }
    }

    let mut sperner = true;
    'sp: for &s in members {
        for &t in members {
            if s != t && s & !t == 0 {
                sperner = false;
                break 'sp;
            }
        }
    }

    // Closure under unions of arbitrary subfamilies; the empty subfamily
    // forces ∅ to be a member.
    let mut union_closed = fam.contains_mask(0);
    if union_closed {
        'uc: for &s in members {
            for &t in members {
                if !fam.contains_mask(s | t) {
                    union_closed = false;
                    break 'uc;
                }
            }
        }
    }

    FamilyProfile {
        convex,
        dominated,
        supported,
        downward_closed,
        sperner,
        union_closed,
    }
}

/// Inclusion-maximal members; always a Sperner family.
pub fn max_sets(fam: &Family) -> Family {
    let members = fam.masks();
    let keep: Vec<u32> = members
        .iter()
        .copied()
        .filter(|&s| !members.iter().any(|&t| t != s && s & !t == 0))
        .collect();
    Family::from_masks(fam.width(), keep)
}

/// Inclusion-minimal members; always a Sperner family.
pub fn min_sets(fam: &Family) -> Family {
    let members = fam.masks();
    let keep: Vec<u32> = members
        .iter()
        .copied()
        .filter(|&s| !members.iter().any(|&t| t != s && t & !s == 0))
        .collect();
    Family::from_masks(fam.width(), keep)
}

fn bit_positions(mask: u32) -> Vec<u32> {
    (0..32).filter(|&i| mask >> i & 1 == 1).collect()
}

/// Raw convex shadow of `a` (a member mask) in `fam`:
/// `{B ⊆ a | [B, a] ⊆ fam}`, as sorted masks.
pub(crate) fn convex_shadow_masks(fam: &Family, a: u32) -> Vec<u32> {
    let positions = bit_positions(a);
    let k = positions.len();
    let size = 1usize << k;
    let mut good = vec![false; size];
    let expand = |cb: usize| -> u32 {
        let mut m = 0u32;
        for (j, &p) in positions.iter().enumerate() {
            if cb >> j & 1 == 1 {
                m |= 1 << p;
            }
        }
        m
    };
    // good(B) = B ∈ fam and good(B ∪ {b}) for every b ∈ a∖B
    for cb in (0..size).rev() {
        if !fam.contains_mask(expand(cb)) {
            continue;
        }
        let mut ok = true;
        for j in 0..k {
            if cb >> j & 1 == 0 && !good[cb | (1 << j)] {
                ok = false;
                break;
            }
        }
        good[cb] = ok;
    }
    let mut out: Vec<u32> = (0..size).filter(|&cb| good[cb]).map(expand).collect();
    out.sort_unstable();
    out
}

/// Raw dual convex shadow of `a` in `fam`:
/// `{B ∈ fam | a ⊆ B, [a, B] ⊆ fam}`, as sorted masks.
pub(crate) fn dual_convex_shadow_masks(fam: &Family, a: u32) -> Vec<u32> {
    let comp = !a & mask_full(fam.width());
    let positions = bit_positions(comp);
    let k = positions.len();
    let size = 1usize << k;
    let mut good = vec![false; size];
    let expand = |cb: usize| -> u32 {
        let mut m = a;
        for (j, &p) in positions.iter().enumerate() {
            if cb >> j & 1 == 1 {
                m |= 1 << p;
            }
        }
        m
    };
    // good(S) = a∪S ∈ fam and good(S∖{b}) for every b ∈ S
    for cb in 0..size {
        if !fam.contains_mask(expand(cb)) {
            continue;
        }
        let mut ok = true;
        for j in 0..k {
            if cb >> j & 1 == 1 && !good[cb & !(1 << j)] {
                ok = false;
                break;
            }
        }
        good[cb] = ok;
    }
    let mut out: Vec<u32> = (0..size).filter(|&cb| good[cb]).map(expand).collect();
    out.sort_unstable();
    out
}

/// The convex shadow of a member `a`: the largest dominated convex
/// subfamily of `fam` whose union is `a`.
pub fn convex_shadow(fam: &Family, a: &Subset) -> Result<Family> {
    if !fam.contains(a) {
        return Err(Error::NotAMember);
    }
    Ok(Family::from_masks(
        fam.width(),
        convex_shadow_masks(fam, a.bits()),
    ))
}

/// The dual convex shadow of a member `a`: the largest supported convex
/// subfamily of `fam` whose intersection is `a`.
pub fn dual_convex_shadow(fam: &Family, a: &Subset) -> Result<Family> {
    if !fam.contains(a) {
        return Err(Error::NotAMember);
    }
    Ok(Family::from_masks(
        fam.width(),
        dual_convex_shadow_masks(fam, a.bits()),
    ))
}

fn is_sub_sorted(a: &[u32], b: &[u32]) -> bool {
    // both sorted; subset test by merge walk
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

/// Compute the shadows of every member, in canonical member order.
pub(crate) fn all_shadows(fam: &Family, dual: bool) -> Vec<Vec<u32>> {
    let masks: Vec<u32> = fam.masks().to_vec();
    crate::par::map_collect(masks, |m| {
        if dual {
            dual_convex_shadow_masks(fam, m)
        } else {
            convex_shadow_masks(fam, m)
        }
    })
}

fn critical_impl(fam: &Family, dual: bool) -> Family {
    let shadows = all_shadows(fam, dual);
    let mut keep = Vec::new();
    for (i, sh) in shadows.iter().enumerate() {
        let maximal = !shadows
            .iter()
            .enumerate()
            .any(|(j, other)| j != i && sh.len() < other.len() && is_sub_sorted(sh, other));
        if maximal {
            keep.push(fam.masks()[i]);
        }
    }
    Family::from_masks(fam.width(), keep)
}

/// Members whose convex shadow is inclusion-maximal among all shadows.
pub fn critical_sets(fam: &Family) -> Family {
    critical_impl(fam, false)
}

/// Members whose dual convex shadow is inclusion-maximal among all dual
/// shadows.
pub fn dual_critical_sets(fam: &Family) -> Family {
    critical_impl(fam, true)
}

/// Least convex superfamily: the union of `[A, A']` over ordered member
/// pairs. The convex hull of the empty family is empty.
pub fn convex_hull(fam: &Family) -> Family {
    let mut out: HashSet<u32> = HashSet::new();
    for &a in fam.masks() {
        for &b in fam.masks() {
            if a & !b == 0 {
                let free = b & !a;
                let mut sub = free;
                loop {
                    out.insert(a | sub);
                    if sub == 0 {
                        break;
                    }
                    sub = (sub - 1) & free;
                }
            }
        }
    }
    Family::from_masks(fam.width(), out)
}

/// Least dominated convex superfamily `⋃_A [A, ⋃fam]`; errors on empty
/// input.
pub fn dominated_hull(fam: &Family) -> Result<Family> {
    if fam.is_empty() {
        return Err(Error::EmptyFamily);
    }
    let top = fam.union_all();
    let mut out: HashSet<u32> = HashSet::new();
    for &a in fam.masks() {
        let free = top & !a;
        let mut sub = free;
        loop {
            out.insert(a | sub);
            if sub == 0 {
                break;
            }
            sub = (sub - 1) & free;
        }
    }
    Ok(Family::from_masks(fam.width(), out))
}

/// Least supported convex superfamily `⋃_A [⋂fam, A]`; errors on empty
/// input.
pub fn supported_hull(fam: &Family) -> Result<Family> {
    let bottom = fam.inter_all().ok_or(Error::EmptyFamily)?;
    let mut out: HashSet<u32> = HashSet::new();
    for &a in fam.masks() {
        let free = a & !bottom;
        let mut sub = free;
        loop {
            out.insert(bottom | sub);
            if sub == 0 {
                break;
            }
            sub = (sub - 1) & free;
        }
    }
    Ok(Family::from_masks(fam.width(), out))
}

/// The largest cardinality of a set shattered by the family; 0 for the
/// empty family and for `{∅}`.
pub fn vc_dimension(fam: &Family) -> usize {
    if fam.is_empty() {
        return 0;
    }
    let w = fam.width();
    // a family of size s cannot shatter a set larger than log2(s)
    let mut cap = 0;
    while 1usize << (cap + 1) <= fam.len() && cap + 1 <= w {
        cap += 1;
    }
    for k in (1..=cap).rev() {
        if shatters_some(fam, k) {
            return k;
        }
    }
    0
}

fn shatters_some(fam: &Family, k: usize) -> bool {
    let w = fam.width();
    let mut candidate = (1u32 << k) - 1;
    let limit = mask_full(w);
    // enumerate all k-subsets of the base via Gosper's hack
    loop {
        if candidate > limit {
            return false;
        }
        let mut traces = HashSet::with_capacity(1 << k);
        for &m in fam.masks() {
            traces.insert(m & candidate);
        }
        if traces.len() == 1usize << k {
            return true;
        }
        // next k-combination
        let c = candidate;
        let lowest = c & c.wrapping_neg();
        let ripple = c + lowest;
        if ripple == 0 {
            return false;
        }
        candidate = ripple | (((c ^ ripple) >> 2) / lowest);
    }
}

/// Parse the line-oriented family text format.
///
/// Line 1 is `base N`; each following non-empty line is `-` for the empty
/// set or ascending space-separated element indices in `[0, N)`. Duplicate
/// member lines are an error.
pub fn parse_family(text: &str) -> Result<Family> {
    let mut lines = text.lines().enumerate();
    let (_, header) = lines
        .next()
        .ok_or_else(|| Error::parse(1, 1, "empty input"))?;
    let header = header.trim();
    let width: usize = match header.strip_prefix("base ") {
        Some(rest) => rest
            .trim()
            .parse()
            .map_err(|_| Error::parse(1, 1, format!("invalid base size `{rest}`")))?,
        None => return Err(Error::parse(1, 1, "expected `base N` header")),
    };
    if width > MAX_BASE {
        return Err(Error::CapExceeded(format!(
            "base size {width} exceeds the supported maximum {MAX_BASE}"
        )));
    }
    let mut masks = Vec::new();
    let mut seen = HashSet::new();
    for (idx, line) in lines {
        let line = line.trim();
        if line.is_empty() {
            continue;
        }
        let mask = parse_member_line(line, width, idx + 1)?;
        if !seen.insert(mask) {
            return Err(Error::DuplicateMember(idx + 1));
        }
        masks.push(mask);
    }
    Ok(Family::from_masks(width, masks))
}

pub(crate) fn parse_member_line(line: &str, width: usize, lineno: usize) -> Result<u32> {
    if line == "-" {
        return Ok(0);
    }
    let mut mask = 0u32;
    let mut last: Option<usize> = None;
    for tok in line.split_whitespace() {
        let e: usize = tok
            .parse()
            .map_err(|_| Error::parse(lineno, 1, format!("invalid element `{tok}`")))?;
        if e >= width {
            return Err(Error::parse(
                lineno,
                1,
                format!("element {e} out of range for base {width}"),
            ));
        }
        if let Some(prev) = last {
            if e <= prev {
                return Err(Error::parse(
                    lineno,
                    1,
                    "elements must be strictly ascending",
                ));
            }
        }
        last = Some(e);
        mask |= 1 << e;
    }
    if last.is_none() {
        return Err(Error::parse(lineno, 1, "empty member line"));
    }
    Ok(mask)
}

/// Serialize a family in the text format.
pub fn emit_family(fam: &Family) -> String {
    let mut out = format!("base {}\n", fam.width());
    for s in fam.subsets() {
        out.push_str(&s.to_line());
        out.push('\n');
    }
    out
}

/// Sample a family over `width` elements: each subset is kept independently
/// with probability `density`.
pub fn random_family(rng: &mut impl rand::Rng, width: usize, density: f64) -> Family {
    assert!(width <= DENSE_INDEX_MAX);
    let masks = (0..(1u64 << width))
        .filter(|_| rng.gen_bool(density))
        .map(|m| m as u32);
    Family::from_masks(width, masks)
}

/// The family of even-size subsets of a base of `width` elements.
pub fn even_family(width: usize) -> Family {
    assert!(width <= DENSE_INDEX_MAX);
    Family::from_masks(
        width,
        (0..(1u32 << width)).filter(|m| m.count_ones() % 2 == 0),
    )
}

#[cfg(test)]
mod tests {
    use super::*;

    fn fam(width: usize, masks: &[u32]) -> Family {
        Family::from_masks(width, masks.iter().copied())
    }

    #[test]
    fn interval_basic() {
        let f = interval(Subset::empty(2), Subset::from_elems(2, &[0])).unwrap();
        assert_eq!(f.masks(), &[0b00, 0b01]);

        let empty = interval(Subset::from_elems(2, &[0]), Subset::empty(2)).unwrap();
        assert!(empty.is_empty());

        let all = interval(Subset::empty(2), Subset::full(2)).unwrap();
        assert_eq!(all.len(), 4);
    }

    #[test]
    fn interval_base_mismatch() {
        let err = interval(Subset::empty(2), Subset::empty(3)).unwrap_err();
        assert!(matches!(err, Error::BaseMismatch(2, 3)));
    }

    #[test]
    fn classify_examples() {
        // {∅, {0}, {0,1}} over base 2
        let f = fam(2, &[0b00, 0b01, 0b11]);
        let p = classify(&f);
        assert!(!p.convex);
        assert!(!p.downward_closed);
        assert!(p.dominated);

        let p = classify(&Family::powerset(2));
        assert!(p.convex && p.dominated && p.supported && p.downward_closed && p.union_closed);
        assert!(!p.sperner);

        // {{0}, {1}}
        let p = classify(&fam(2, &[0b01, 0b10]));
        assert!(p.sperner && p.convex);
        assert!(!p.dominated && !p.supported);
    }

    #[test]
    fn classify_interval_iff_dom_supp_conv() {
        // exhaustive over all families of base 2
        for bits in 0u32..16 {
            let members: Vec<u32> = (0..4).filter(|&i| bits >> i & 1 == 1).collect();
            let f = fam(2, &members);
            let p = classify(&f);
            let is_iv = !f.is_empty() && {
                let lo = f.inter_all().unwrap();
                let hi = f.union_all();
                interval(Subset::new(2, lo), Subset::new(2, hi)).unwrap() == f
            };
            assert_eq!(p.is_interval(), is_iv, "family {members:?}");
        }
    }

    #[test]
    fn max_min_sets() {
        let f = fam(2, &[0b00, 0b01, 0b10]);
        assert_eq!(max_sets(&f).masks(), &[0b01, 0b10]);
        assert_eq!(min_sets(&f).masks(), &[0b00]);
        let even = even_family(2);
        assert_eq!(max_sets(&even).masks(), &[0b11]);
    }

    #[test]
    fn shadows() {
        let power = Family::powerset(2);
        let sh = convex_shadow(&power, &Subset::full(2)).unwrap();
        assert_eq!(sh, power);

        let even3 = even_family(3);
        let sh = convex_shadow(&even3, &Subset::from_elems(3, &[0, 1])).unwrap();
        assert_eq!(sh.masks(), &[0b011]);

        // dual shadow per its definition: [∅, {0,1}] ⊄ F, so the top set is
        // excluded
        let f = fam(2, &[0b00, 0b01, 0b11]);
        let dsh = dual_convex_shadow(&f, &Subset::empty(2)).unwrap();
        assert_eq!(dsh.masks(), &[0b00, 0b01]);

        let err = convex_shadow(&f, &Subset::from_elems(2, &[1])).unwrap_err();
        assert!(matches!(err, Error::NotAMember));
    }

    #[test]
    fn shadow_is_largest_dominated_convex_subfamily() {
        // exhaustive subfamily search over a few small families
        let fams = [
            fam(3, &[0b000, 0b001, 0b011, 0b111, 0b101]),
            even_family(3),
            Family::powerset(3),
        ];
        for f in &fams {
            for a in f.subsets() {
                let sh = convex_shadow(f, &a).unwrap();
                let p = classify(&sh);
                assert!(p.dominated && p.convex);
                assert_eq!(sh.union_all(), a.bits());
                // every dominated convex subfamily with union a is inside sh
                let members: Vec<u32> = f.masks().to_vec();
                for subset_bits in 0u32..(1 << members.len()) {
                    let sub: Vec<u32> = members
                        .iter()
                        .enumerate()
                        .filter(|(i, _)| subset_bits >> i & 1 == 1)
                        .map(|(_, &m)| m)
                        .collect();
                    if sub.is_empty() {
                        continue;
                    }
                    let subfam = fam(f.width(), &sub);
                    let sp = classify(&subfam);
                    if sp.dominated && sp.convex && subfam.union_all() == a.bits() {
                        assert!(sub.iter().all(|&m| sh.contains_mask(m)));
                    }
                }
            }
        }
    }

    #[test]
    fn critical_examples() {
        let even2 = even_family(2);
        assert_eq!(critical_sets(&even2), even2);

        let power = Family::powerset(2);
        assert_eq!(critical_sets(&power).masks(), &[0b11]);
    }

    #[test]
    fn hull_examples() {
        let f = fam(2, &[0b01, 0b10]);
        assert_eq!(dominated_hull(&f).unwrap().masks(), &[0b01, 0b10, 0b11]);
        assert_eq!(supported_hull(&f).unwrap().masks(), &[0b00, 0b01, 0b10]);
        let g = fam(2, &[0b00, 0b11]);
        assert_eq!(convex_hull(&g), Family::powerset(2));
        assert!(convex_hull(&Family::empty(2)).is_empty());
        assert!(matches!(
            dominated_hull(&Family::empty(2)).unwrap_err(),
            Error::EmptyFamily
        ));
    }

    #[test]
    fn vc_examples() {
        assert_eq!(vc_dimension(&Family::powerset(3)), 3);
        assert_eq!(vc_dimension(&fam(1, &[0b1])), 0);
        assert_eq!(vc_dimension(&Family::empty(3)), 0);
        assert_eq!(vc_dimension(&fam(3, &[0b000])), 0);
        // brute-force oracle value for the even family over base 3
        assert_eq!(vc_dimension(&even_family(3)), 2);
    }

    #[test]
    fn family_format_roundtrip() {
        let f = fam(3, &[0b000, 0b101, 0b011]);
        let text = emit_family(&f);
        let parsed = parse_family(&text).unwrap();
        assert_eq!(parsed, f);
    }

    #[test]
    fn family_format_duplicate() {
        let err = parse_family("base 2\n0\n0\n").unwrap_err();
        assert!(matches!(err, Error::DuplicateMember(3)));
    }

    #[test]
    fn family_format_bad_lines() {
        assert!(parse_family("base 2\n1 0\n").is_err());
        assert!(parse_family("base 2\n5\n").is_err());
        assert!(parse_family("nope\n").is_err());
    }
}
