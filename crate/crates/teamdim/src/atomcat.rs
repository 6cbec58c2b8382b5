//! Generators for the concrete families behind the team atoms, and their
//! closed-form dimensions. The closed forms are evaluated in exact
//! big-integer arithmetic and serve as the oracle the computed dimensions
//! are verified against.
//!
//! Product bases are indexed with the first coordinate fastest, matching
//! the team row encoding `Σ s(x_i)·n^i`, so the generated families agree
//! extensionally with the families extracted from formulas.

use crate::setfam::Family;
use crate::{Error, Result};
use num_bigint::BigUint;

/// Pair `(u, v) ∈ X × Y` with `|X| = l` → bit `u + v·l`.
fn pair_bit(u: usize, v: usize, l: usize) -> u32 {
    (u + v * l) as u32
}

fn check_bits(bits: usize) -> Result<usize> {
    if bits > crate::setfam::DENSE_INDEX_MAX {
        return Err(Error::CapExceeded(format!(
            "family base of {bits} elements exceeds the {} cap",
            crate::setfam::DENSE_INDEX_MAX
        )));
    }
    Ok(bits)
}

/// Graphs of partial mappings `X ⇀ Y`, `|X| = l`, `|Y| = n`.
pub fn family_mappings(l: usize, n: usize) -> Result<Family> {
    check_bits(l * n)?;
    let mut members = Vec::new();
    // one digit per point of X: n choices of image or "undefined"
    let mut assignment = vec![0usize; l];
    loop {
        let mut mask = 0u32;
        for (u, &d) in assignment.iter().enumerate() {
            if d > 0 {
                mask |= 1 << pair_bit(u, d - 1, l);
            }
        }
        members.push(mask);
        let mut pos = 0;
        loop {
            if pos == l {
                return Ok(Family::from_masks(l * n, members));
            }
            assignment[pos] += 1;
            if assignment[pos] <= n {
                break;
            }
            assignment[pos] = 0;
            pos += 1;
        }
    }
}

/// Relations `R ⊆ X × X` with `dom(R) ∩ rg(R) = ∅`, `|X| = l`.
pub fn family_exclusion(l: usize) -> Result<Family> {
    let bits = check_bits(l * l)?;
    let members = (0..1u64 << bits)
        .map(|m| m as u32)
        .filter(|&m| {
            let (mut dom, mut rg) = (0u32, 0u32);
            for u in 0..l {
                for v in 0..l {
                    if m >> pair_bit(u, v, l) & 1 == 1 {
                        dom |= 1 << u;
                        rg |= 1 << v;
                    }
                }
            }
            dom & rg == 0
        })
        .collect::<Vec<_>>();
    Ok(Family::from_masks(bits, members))
}

/// Relations `R ⊆ X × X` with `dom(R) ⊆ rg(R)`, `|X| = l`.
pub fn family_inclusion(l: usize) -> Result<Family> {
    let bits = check_bits(l * l)?;
    let members = (0..1u64 << bits)
        .map(|m| m as u32)
        .filter(|&m| {
            let (mut dom, mut rg) = (0u32, 0u32);
            for u in 0..l {
                for v in 0..l {
                    if m >> pair_bit(u, v, l) & 1 == 1 {
                        dom |= 1 << u;
                        rg |= 1 << v;
                    }
                }
            }
            dom & !rg == 0
        })
        .collect::<Vec<_>>();
    Ok(Family::from_masks(bits, members))
}

/// Anonymous relations `R ⊆ X × Y`: every point of the domain has at least
/// two distinct values. `|X| = l`, `|Y| = n`.
pub fn family_anonymous(l: usize, n: usize) -> Result<Family> {
    let bits = check_bits(l * n)?;
    let members = (0..1u64 << bits)
        .map(|m| m as u32)
        .filter(|&m| {
            (0..l).all(|u| {
                let count = (0..n).filter(|&v| m >> pair_bit(u, v, l) & 1 == 1).count();
                count == 0 || count >= 2
            })
        })
        .collect::<Vec<_>>();
    Ok(Family::from_masks(bits, members))
}

/// Products `A × B` with `A ⊆ X`, `B ⊆ Y`; `|X| = l`, `|Y| = n`. The empty
/// set is a member.
pub fn family_products(l: usize, n: usize) -> Result<Family> {
    let bits = check_bits(l * n)?;
    let mut members = vec![0u32];
    for a in 1u32..1 << l {
        for b in 1u32..1 << n {
            let mut mask = 0u32;
            for u in 0..l {
                for v in 0..n {
                    if a >> u & 1 == 1 && b >> v & 1 == 1 {
                        mask |= 1 << pair_bit(u, v, l);
                    }
                }
            }
            members.push(mask);
        }
    }
    Ok(Family::from_masks(bits, members))
}

/// Unions `⋃_c A_c × B_c × {c}`: every slice by the condition coordinate is
/// a product. Coordinates are ordered (X, Z, Y) to match the variable order
/// of the conditional independence atom: the triple `(u, c, w)` sits at bit
/// `u + c·l + w·l·s`. `|X| = l`, `|Y| = n`, `|Z| = s`.
pub fn family_slicewise_products(l: usize, n: usize, s: usize) -> Result<Family> {
    let bits = check_bits(l * n * s)?;
    // per-slice rectangles as (u, w) pair lists, the empty one included
    let mut rects: Vec<Vec<(usize, usize)>> = vec![Vec::new()];
    for a in 1u32..1 << l {
        for b in 1u32..1 << n {
            let mut pairs = Vec::new();
            for u in 0..l {
                for w in 0..n {
                    if a >> u & 1 == 1 && b >> w & 1 == 1 {
                        pairs.push((u, w));
                    }
                }
            }
            rects.push(pairs);
        }
    }
    let mut members = Vec::new();
    let mut pick = vec![0usize; s];
    loop {
        let mut mask = 0u32;
        for (c, &ix) in pick.iter().enumerate() {
            for &(u, w) in &rects[ix] {
                mask |= 1 << (u + c * l + w * l * s);
            }
        }
        members.push(mask);
        let mut pos = 0;
        loop {
            if pos == s {
                return Ok(Family::from_masks(bits, members));
            }
            pick[pos] += 1;
            if pick[pos] < rects.len() {
                break;
            }
            pick[pos] = 0;
            pos += 1;
        }
    }
}

/// Subsets of even size over a base of `width` elements.
pub fn family_even(width: usize) -> Result<Family> {
    check_bits(width)?;
    Ok(crate::setfam::even_family(width))
}

/// Subsets of size at most half the base.
pub fn family_at_most_half(width: usize) -> Result<Family> {
    check_bits(width)?;
    Ok(Family::from_masks(
        width,
        (0..1u64 << width)
            .map(|m| m as u32)
            .filter(|m| 2 * m.count_ones() as usize <= width),
    ))
}

/// The atoms with concrete family generators and closed-form dimensions.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AtomKind {
    Dep,
    Exc,
    Inc,
    Ano,
    PureInd,
    CondInd,
    Even,
    Half,
}

impl AtomKind {
    pub fn parse(s: &str) -> Result<Self> {
        Ok(match s {
            "dep" => AtomKind::Dep,
            "exc" => AtomKind::Exc,
            "inc" => AtomKind::Inc,
            "ano" => AtomKind::Ano,
            "pure-ind" | "pureind" | "ind" => AtomKind::PureInd,
            "cond-ind" | "condind" => AtomKind::CondInd,
            "even" => AtomKind::Even,
            "half" => AtomKind::Half,
            other => return Err(Error::Invalid(format!("unknown atom kind `{other}`"))),
        })
    }

    pub fn name(&self) -> &'static str {
        match self {
            AtomKind::Dep => "dep",
            AtomKind::Exc => "exc",
            AtomKind::Inc => "inc",
            AtomKind::Ano => "ano",
            AtomKind::PureInd => "pure-ind",
            AtomKind::CondInd => "cond-ind",
            AtomKind::Even => "even",
            AtomKind::Half => "half",
        }
    }
}

/// An atom instance: arities `m`, `k` (second tuple) and `s` (condition)
/// where applicable, over a universe of size `n`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct AtomSpec {
    pub kind: AtomKind,
    pub m: usize,
    pub k: usize,
    pub s: usize,
    pub n: usize,
}

impl AtomSpec {
    pub fn new(kind: AtomKind, m: usize, k: usize, s: usize, n: usize) -> Result<Self> {
        if n < 2 {
            return Err(Error::Invalid("universe size must be at least 2".into()));
        }
        let positive = |v: usize, what: &str| {
            if v == 0 {
                Err(Error::Arity(format!("{what} arity must be positive")))
            } else {
                Ok(())
            }
        };
        match kind {
            AtomKind::Dep
            | AtomKind::Exc
            | AtomKind::Inc
            | AtomKind::Ano
            | AtomKind::Even
            | AtomKind::Half => positive(m, "tuple")?,
            AtomKind::PureInd => {
                positive(m, "left")?;
                positive(k, "right")?;
            }
            AtomKind::CondInd => {
                positive(m, "left")?;
                positive(k, "right")?;
                positive(s, "condition")?;
            }
        }
        Ok(AtomSpec { kind, m, k, s, n })
    }
}

/// The extensional family of the atom over its team base.
pub fn gen_family(spec: &AtomSpec) -> Result<Family> {
    let n = spec.n;
    let p = checked_pow_usize(n, spec.m)?;
    match spec.kind {
        AtomKind::Dep => family_mappings(p, n),
        AtomKind::Exc => family_exclusion(p),
        AtomKind::Inc => family_inclusion(p),
        AtomKind::Ano => family_anonymous(p, n),
        AtomKind::PureInd => family_products(p, checked_pow_usize(n, spec.k)?),
        AtomKind::CondInd => family_slicewise_products(
            p,
            checked_pow_usize(n, spec.k)?,
            checked_pow_usize(n, spec.s)?,
        ),
        AtomKind::Even => family_even(p),
        AtomKind::Half => family_at_most_half(p),
    }
}

/// One dimension value: an exact number or a lower/upper bracket.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum DimValue {
    Exact(BigUint),
    Bracket(BigUint, BigUint),
}

impl DimValue {
    pub fn admits(&self, value: usize) -> bool {
        let v = BigUint::from(value);
        match self {
            DimValue::Exact(e) => *e == v,
            DimValue::Bracket(lo, hi) => *lo <= v && v <= *hi,
        }
    }

    pub fn exact(&self) -> Option<&BigUint> {
        match self {
            DimValue::Exact(e) => Some(e),
            DimValue::Bracket(..) => None,
        }
    }
}

impl std::fmt::Display for DimValue {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            DimValue::Exact(e) => write!(f, "{e}"),
            DimValue::Bracket(lo, hi) => write!(f, "[{lo},{hi}]"),
        }
    }
}

/// The three dimensions of an atom or concrete family.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DimFormulaResult {
    pub dd: DimValue,
    pub ddd: DimValue,
    pub cd: DimValue,
}

fn big_pow(base: usize, exp: usize) -> BigUint {
    BigUint::from(base).pow(exp as u32)
}

fn big2pow(exp: usize) -> BigUint {
    BigUint::from(2usize).pow(exp as u32)
}

fn binomial(n: usize, k: usize) -> BigUint {
    if k > n {
        return BigUint::from(0usize);
    }
    let mut num = BigUint::from(1usize);
    let mut den = BigUint::from(1usize);
    for i in 0..k {
        num *= BigUint::from(n - i);
        den *= BigUint::from(i + 1);
    }
    num / den
}

fn checked_pow_usize(base: usize, exp: usize) -> Result<usize> {
    let mut out: usize = 1;
    for _ in 0..exp {
        out = out
            .checked_mul(base)
            .ok_or_else(|| Error::CapExceeded("arity power overflow".into()))?;
    }
    Ok(out)
}

/// Closed forms for the dimensions of the concrete families over base
/// sizes `l` and `n`.
pub fn mappings_dims(l: usize, n: usize) -> DimFormulaResult {
    let dd = big_pow(n, l);
    DimFormulaResult {
        dd: DimValue::Exact(dd.clone()),
        ddd: DimValue::Exact(BigUint::from(1usize)),
        cd: DimValue::Exact(dd),
    }
}

pub fn exclusion_dims(l: usize) -> DimFormulaResult {
    let dd = big2pow(l) - BigUint::from(2usize);
    DimFormulaResult {
        dd: DimValue::Exact(dd.clone()),
        ddd: DimValue::Exact(BigUint::from(1usize)),
        cd: DimValue::Exact(dd),
    }
}

pub fn inclusion_dims(l: usize) -> DimFormulaResult {
    let dd = big2pow(l) - BigUint::from(l);
    let mut ddd = BigUint::from(1usize);
    for k in 2..=l {
        ddd += binomial(l, k) * big_pow(k, k);
    }
    DimFormulaResult {
        dd: DimValue::Exact(dd),
        ddd: DimValue::Exact(ddd.clone()),
        cd: DimValue::Exact(ddd),
    }
}

pub fn anonymous_dims(l: usize, n: usize) -> DimFormulaResult {
    let dd = big2pow(l);
    let pairs = binomial(n, 2);
    let mut ddd = BigUint::from(0usize);
    for k in 0..=l {
        ddd += binomial(l, k) * pairs.pow(k as u32);
    }
    DimFormulaResult {
        dd: DimValue::Exact(dd),
        ddd: DimValue::Exact(ddd.clone()),
        cd: DimValue::Exact(ddd),
    }
}

pub fn products_dims(l: usize, n: usize) -> DimFormulaResult {
    let core = (big2pow(l) - BigUint::from(l) - BigUint::from(1usize))
        * (big2pow(n) - BigUint::from(n) - BigUint::from(1usize));
    let dd = core.clone() + BigUint::from(l) + BigUint::from(n);
    let ddd = core + BigUint::from(1usize);
    DimFormulaResult {
        dd: DimValue::Exact(dd.clone()),
        ddd: DimValue::Exact(ddd),
        cd: DimValue::Exact(dd),
    }
}

pub fn even_dims(width: usize) -> DimFormulaResult {
    let v = big2pow(width - 1);
    DimFormulaResult {
        dd: DimValue::Exact(v.clone()),
        ddd: DimValue::Exact(v.clone()),
        cd: DimValue::Exact(v),
    }
}

pub fn at_most_half_dims(width: usize) -> DimFormulaResult {
    // downward closed: the maximal members are the half-size subsets
    let dd = binomial(width, width / 2);
    DimFormulaResult {
        dd: DimValue::Exact(dd.clone()),
        ddd: DimValue::Exact(BigUint::from(1usize)),
        cd: DimValue::Exact(dd),
    }
}

/// Closed-form dimensions of the atom's family: exact for all kinds except
/// the conditional independence atom, which gets the product brackets.
pub fn closed_form_dims(spec: &AtomSpec) -> Result<DimFormulaResult> {
    let n = spec.n;
    let p = checked_pow_usize(n, spec.m)?;
    Ok(match spec.kind {
        AtomKind::Dep => mappings_dims(p, n),
        AtomKind::Exc => exclusion_dims(p),
        AtomKind::Inc => inclusion_dims(p),
        AtomKind::Ano => anonymous_dims(p, n),
        AtomKind::PureInd => products_dims(p, checked_pow_usize(n, spec.k)?),
        AtomKind::CondInd => {
            let q = checked_pow_usize(n, spec.k)?;
            let slices = checked_pow_usize(n, spec.s)?;
            let flat = products_dims(p, q);
            let dd_lo = flat.dd.exact().unwrap().clone();
            let ddd_lo = flat.ddd.exact().unwrap().clone();
            DimFormulaResult {
                dd: DimValue::Bracket(dd_lo.clone(), dd_lo.clone().pow(slices as u32)),
                ddd: DimValue::Bracket(ddd_lo.clone(), ddd_lo.pow(slices as u32)),
                cd: DimValue::Bracket(dd_lo.clone(), dd_lo.pow(slices as u32)),
            }
        }
        AtomKind::Even => even_dims(p),
        AtomKind::Half => at_most_half_dims(p),
    })
}

/// Growth-class label of the atom's upper dimension function, rendered as
/// `F_k` or `E_k`.
pub fn growth_label(spec: &AtomSpec) -> String {
    match spec.kind {
        AtomKind::Dep => format!("F_{}", spec.m),
        AtomKind::Exc | AtomKind::Inc | AtomKind::Ano | AtomKind::Even | AtomKind::Half => {
            format!("E_{}", spec.m)
        }
        AtomKind::PureInd => format!("E_{}", spec.m + spec.k),
        AtomKind::CondInd => format!("E_{}", spec.m + spec.k + spec.s),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dims::{cylindrical_dimension, dual_upper_dimension, upper_dimension, SearchBudget};

    fn b() -> SearchBudget {
        SearchBudget::default()
    }

    #[test]
    fn generator_member_counts() {
        assert_eq!(family_mappings(2, 2).unwrap().len(), 9);
        assert_eq!(family_exclusion(2).unwrap().len(), 3);
        // products over a 2×2 base: 9 nonempty rectangles plus the empty set
        assert_eq!(family_products(2, 2).unwrap().len(), 10);
        assert_eq!(family_even(3).unwrap().len(), 4);
        assert_eq!(family_at_most_half(4).unwrap().len(), 11);
    }

    #[test]
    fn exclusion_members_at_l2() {
        let x = family_exclusion(2).unwrap();
        // ∅, {(0,1)}, {(1,0)}: pair (u,v) sits at bit u + 2v
        let mut expected = vec![0b0000u32, 0b0100, 0b0010];
        expected.sort_unstable();
        assert_eq!(x.masks(), &expected[..]);
    }

    #[test]
    fn closed_forms_match_computed_small() {
        let cases: Vec<(Family, DimFormulaResult)> = vec![
            (family_mappings(2, 2).unwrap(), mappings_dims(2, 2)),
            (family_exclusion(2).unwrap(), exclusion_dims(2)),
            (family_inclusion(2).unwrap(), inclusion_dims(2)),
            (family_anonymous(2, 2).unwrap(), anonymous_dims(2, 2)),
            (family_products(2, 2).unwrap(), products_dims(2, 2)),
            (family_even(3).unwrap(), even_dims(3)),
            (family_at_most_half(3).unwrap(), at_most_half_dims(3)),
        ];
        for (fam, expect) in cases {
            assert!(expect.dd.admits(upper_dimension(&fam, &b()).value));
            assert!(expect.ddd.admits(dual_upper_dimension(&fam, &b()).value));
            assert!(expect.cd.admits(cylindrical_dimension(&fam, &b()).value));
        }
    }

    #[test]
    fn atom_spec_examples() {
        let dep = AtomSpec::new(AtomKind::Dep, 1, 0, 0, 2).unwrap();
        assert_eq!(gen_family(&dep).unwrap().len(), 9);
        let d = closed_form_dims(&dep).unwrap();
        assert!(d.dd.admits(4) && d.ddd.admits(1) && d.cd.admits(4));

        let inc = AtomSpec::new(AtomKind::Inc, 1, 0, 0, 2).unwrap();
        let d = closed_form_dims(&inc).unwrap();
        assert!(d.dd.admits(2) && d.ddd.admits(5) && d.cd.admits(5));

        let ind = AtomSpec::new(AtomKind::PureInd, 1, 1, 0, 2).unwrap();
        let d = closed_form_dims(&ind).unwrap();
        assert!(d.dd.admits(5) && d.ddd.admits(2) && d.cd.admits(5));

        assert!(AtomSpec::new(AtomKind::Exc, 0, 0, 0, 2).is_err());
        assert!(AtomSpec::new(AtomKind::Dep, 1, 0, 0, 1).is_err());
    }

    #[test]
    fn cond_ind_bracket() {
        let spec = AtomSpec::new(AtomKind::CondInd, 1, 1, 1, 2).unwrap();
        let d = closed_form_dims(&spec).unwrap();
        let DimValue::Bracket(lo, hi) = &d.dd else { panic!() };
        assert_eq!(*lo, BigUint::from(5usize));
        assert_eq!(*hi, BigUint::from(25usize));
        let fam = gen_family(&spec).unwrap();
        assert_eq!(fam.width(), 8);
    }

    #[test]
    fn generators_match_team_families() {
        use crate::teamlogic::{parse_formula, team_family, Structure};
        let st = Structure::bare(2).unwrap();
        let ctx: Vec<String> = ["x", "y"].iter().map(|s| s.to_string()).collect();
        let pairs = [
            ("dep(x ; y)", AtomSpec::new(AtomKind::Dep, 1, 0, 0, 2).unwrap()),
            ("exc(x ; y)", AtomSpec::new(AtomKind::Exc, 1, 0, 0, 2).unwrap()),
            ("inc(x ; y)", AtomSpec::new(AtomKind::Inc, 1, 0, 0, 2).unwrap()),
            ("ano(x ; y)", AtomSpec::new(AtomKind::Ano, 1, 0, 0, 2).unwrap()),
            ("ind(x ; ; y)", AtomSpec::new(AtomKind::PureInd, 1, 1, 0, 2).unwrap()),
            ("even(x y)", AtomSpec::new(AtomKind::Even, 2, 0, 0, 2).unwrap()),
            ("half(x y)", AtomSpec::new(AtomKind::Half, 2, 0, 0, 2).unwrap()),
        ];
        for (text, spec) in pairs {
            let f = parse_formula(text).unwrap();
            let direct = team_family(&st, &f, &ctx, &b()).unwrap();
            let generated = gen_family(&spec).unwrap();
            assert_eq!(direct, generated, "{text}");
        }
        // the conditional independence atom over (x, z, y)
        let ctx3: Vec<String> = ["x", "z", "y"].iter().map(|s| s.to_string()).collect();
        let f = parse_formula("ind(x ; z ; y)").unwrap();
        let direct = team_family(&st, &f, &ctx3, &b()).unwrap();
        let spec = AtomSpec::new(AtomKind::CondInd, 1, 1, 1, 2).unwrap();
        assert_eq!(direct, gen_family(&spec).unwrap());
    }

    #[test]
    fn growth_labels() {
        assert_eq!(
            growth_label(&AtomSpec::new(AtomKind::Dep, 2, 0, 0, 2).unwrap()),
            "F_2"
        );
        assert_eq!(
            growth_label(&AtomSpec::new(AtomKind::Inc, 1, 0, 0, 2).unwrap()),
            "E_1"
        );
        assert_eq!(
            growth_label(&AtomSpec::new(AtomKind::CondInd, 1, 2, 1, 2).unwrap()),
            "E_4"
        );
    }
}
