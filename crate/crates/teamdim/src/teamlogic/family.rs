//! From formulas to families of teams and back through the operators.
//!
//! [`team_family`] enumerates all teams of the base and filters them with
//! the evaluator; [`team_family_composed`] builds the same family bottom-up
//! by applying the family operators of the connectives and quantifiers.
//! Their agreement on the operator fragment is a library-level invariant
//! exercised by the verification batteries.

use super::ast::{formula_free_vars, Formula};
use super::classes::{standard_classes, ClassRegistry, QuantifierClass};
use super::eval::{atom_sat, naive_satisfies, AtomRegistry, Evaluator};
use super::{decode_row, pow_checked, Structure, Team};
use crate::dims::{self, BudgetClock, SearchBudget};
use crate::setfam::{interval, mask_full, Family, Subset};
use crate::tensor::{tensor_apply, BoolOp2};
use crate::{Error, Result};

const TEAM_BASE_CAP: u32 = 20;

fn team_base(st: &Structure, ctx: &[String]) -> Result<u32> {
    let n = pow_checked(st.universe(), ctx.len())?;
    if n > TEAM_BASE_CAP {
        return Err(Error::CapExceeded(format!(
            "team base {}^{} exceeds the {TEAM_BASE_CAP}-element cap",
            st.universe(),
            ctx.len()
        )));
    }
    Ok(n)
}

fn check_free_in_ctx(f: &Formula, ctx: &[String]) -> Result<()> {
    for v in formula_free_vars(f) {
        if !ctx.contains(&v) {
            return Err(Error::UnboundVariable(v));
        }
    }
    Ok(())
}

/// The family of all teams over `ctx` satisfying the formula, computed by
/// enumerating every team and deciding satisfaction per team.
pub fn team_family(
    st: &Structure,
    formula: &Formula,
    ctx: &[String],
    budget: &SearchBudget,
) -> Result<Family> {
    check_free_in_ctx(formula, ctx)?;
    let base = team_base(st, ctx)?;
    let mut eval = Evaluator::new(st, formula, budget);
    let n = st.universe();
    let m = ctx.len();
    let mut masks = Vec::new();
    for mask in 0..1u64 << base {
        let rows: Vec<Vec<u8>> = (0..base)
            .filter(|&r| mask >> r & 1 == 1)
            .map(|r| decode_row(r, n, m))
            .collect();
        let team = Team::new(ctx.to_vec(), rows)?;
        if eval.satisfies(&team)? {
            masks.push(mask as u32);
        }
    }
    Ok(Family::from_masks(base as usize, masks))
}

/// Bottom-up family composition along the operator forms of the fragment
/// {literals, atoms, ∧, ∨, tand, ior, E, A, Q}. The independent oracle for
/// [`team_family`].
pub fn team_family_composed(
    st: &Structure,
    formula: &Formula,
    ctx: &[String],
    budget: &SearchBudget,
) -> Result<Family> {
    team_family_composed_with(st, formula, ctx, budget, &standard_classes(1))
}

pub fn team_family_composed_with(
    st: &Structure,
    formula: &Formula,
    ctx: &[String],
    budget: &SearchBudget,
    classes: &ClassRegistry,
) -> Result<Family> {
    check_free_in_ctx(formula, ctx)?;
    let mut clock = BudgetClock::start(budget);
    compose(st, formula, ctx, &mut clock, classes, &AtomRegistry::default())
}

fn compose(
    st: &Structure,
    f: &Formula,
    ctx: &[String],
    clock: &mut BudgetClock,
    classes: &ClassRegistry,
    atoms: &AtomRegistry,
) -> Result<Family> {
    let base = team_base(st, ctx)?;
    if !clock.tick(1u64 << base) {
        return Err(Error::BudgetExhausted);
    }
    let n = st.universe();
    let m = ctx.len();
    match f {
        Formula::Rel { .. } | Formula::Eq { .. } => {
            // a literal's family is the downward-closed interval below its
            // row set
            let mut tphi = 0u32;
            for r in 0..base {
                let row = decode_row(r, n, m);
                if literal_row(st, f, ctx, &row)? {
                    tphi |= 1 << r;
                }
            }
            interval(
                Subset::empty(base as usize),
                Subset::new(base as usize, tphi),
            )
        }
        Formula::Dep { .. }
        | Formula::Const { .. }
        | Formula::Excl { .. }
        | Formula::Incl { .. }
        | Formula::Anon { .. }
        | Formula::Indep { .. }
        | Formula::NE
        | Formula::Even { .. }
        | Formula::Half { .. }
        | Formula::Custom { .. } => {
            let mut masks = Vec::new();
            for mask in 0..1u64 << base {
                let rows: Vec<Vec<u8>> = (0..base)
                    .filter(|&r| mask >> r & 1 == 1)
                    .map(|r| decode_row(r, n, m))
                    .collect();
                if atom_sat(st, f, ctx, &rows, atoms)? {
                    masks.push(mask as u32);
                }
            }
            Ok(Family::from_masks(base as usize, masks))
        }
        Formula::And(a, b) => {
            let fa = compose(st, a, ctx, clock, classes, atoms)?;
            let fb = compose(st, b, ctx, clock, classes, atoms)?;
            fa.intersect_with(&fb)
        }
        Formula::Or(a, b) => {
            let fa = compose(st, a, ctx, clock, classes, atoms)?;
            let fb = compose(st, b, ctx, clock, classes, atoms)?;
            tensor_apply(BoolOp2::from_name("or").unwrap(), &fa, &fb)
        }
        Formula::TensorAnd(a, b) => {
            let fa = compose(st, a, ctx, clock, classes, atoms)?;
            let fb = compose(st, b, ctx, clock, classes, atoms)?;
            tensor_apply(BoolOp2::from_name("and").unwrap(), &fa, &fb)
        }
        Formula::IntDisj(a, b) => {
            let fa = compose(st, a, ctx, clock, classes, atoms)?;
            let fb = compose(st, b, ctx, clock, classes, atoms)?;
            fa.union_with(&fb)
        }
        Formula::Exists(v, b) | Formula::Forall(v, b) => {
            if ctx.contains(v) {
                return Err(Error::Invalid(format!(
                    "operator composition does not support the shadowed variable `{v}`"
                )));
            }
            let mut ctx2 = ctx.to_vec();
            ctx2.push(v.clone());
            let sub = compose(st, b, &ctx2, clock, classes, atoms)?;
            let class = if matches!(f, Formula::Exists(..)) {
                QuantifierClass::new("exists", 1, |_, _, r| r != 0)
            } else {
                QuantifierClass::new("forall", 1, |_, count, r| r.count_ones() as usize == count)
            };
            lindstrom_apply_clocked(st, &class, &[m], &sub, clock)
        }
        Formula::Lindstrom { class, vars, body } => {
            for v in vars {
                if ctx.contains(v) {
                    return Err(Error::Invalid(format!(
                        "operator composition does not support the shadowed variable `{v}`"
                    )));
                }
            }
            let cls = classes
                .get(class)
                .ok_or_else(|| Error::UnknownClass(class.clone()))?;
            if cls.arity != vars.len() {
                return Err(Error::Arity(format!(
                    "class `{class}` has arity {}, applied to {} variables",
                    cls.arity,
                    vars.len()
                )));
            }
            let mut ctx2 = ctx.to_vec();
            ctx2.extend(vars.iter().cloned());
            let sub = compose(st, body, &ctx2, clock, classes, atoms)?;
            let l: Vec<usize> = (m..m + vars.len()).collect();
            lindstrom_apply_clocked(st, cls, &l, &sub, clock)
        }
        _ => Err(Error::Invalid(
            "connective outside the operator-composition fragment".into(),
        )),
    }
}

fn literal_row(st: &Structure, f: &Formula, ctx: &[String], row: &[u8]) -> Result<bool> {
    match f {
        Formula::Rel {
            negated,
            name,
            vars,
        } => {
            let tuple: Vec<u8> = vars
                .iter()
                .map(|v| {
                    ctx.iter()
                        .position(|w| w == v)
                        .map(|p| row[p])
                        .ok_or_else(|| Error::UnboundVariable(v.clone()))
                })
                .collect::<Result<_>>()?;
            Ok(st.holds(name, &tuple)? != *negated)
        }
        Formula::Eq {
            negated,
            left,
            right,
        } => {
            let pl = ctx
                .iter()
                .position(|w| w == left)
                .ok_or_else(|| Error::UnboundVariable(left.clone()))?;
            let pr = ctx
                .iter()
                .position(|w| w == right)
                .ok_or_else(|| Error::UnboundVariable(right.clone()))?;
            Ok((row[pl] == row[pr]) != *negated)
        }
        _ => unreachable!(),
    }
}

/// Interleave `xs` with `ys`: `ys[j]` lands at position `l[j]`, the `xs`
/// fill the remaining positions in ascending order.
pub fn shuffle_tuple<T: Clone>(xs: &[T], ys: &[T], l: &[usize]) -> Result<Vec<T>> {
    let m = xs.len() + ys.len();
    if l.len() != ys.len() {
        return Err(Error::Arity(format!(
            "{} positions given for {} interleaved values",
            l.len(),
            ys.len()
        )));
    }
    let mut taken = vec![false; m];
    for &p in l {
        if p >= m {
            return Err(Error::Arity(format!("position {p} out of range")));
        }
        if taken[p] {
            return Err(Error::Arity(format!("position {p} used twice")));
        }
        taken[p] = true;
    }
    let mut out: Vec<Option<T>> = vec![None; m];
    for (j, &p) in l.iter().enumerate() {
        out[p] = Some(ys[j].clone());
    }
    let mut xi = 0;
    for slot in out.iter_mut() {
        if slot.is_none() {
            slot.replace(xs[xi].clone());
            xi += 1;
        }
    }
    Ok(out.into_iter().map(|s| s.unwrap()).collect())
}

/// Inverse of [`shuffle_tuple`].
pub fn split_tuple<T: Clone>(zs: &[T], l: &[usize]) -> Result<(Vec<T>, Vec<T>)> {
    let mut taken = vec![false; zs.len()];
    let mut ys = Vec::with_capacity(l.len());
    for &p in l {
        if p >= zs.len() {
            return Err(Error::Arity(format!("position {p} out of range")));
        }
        if taken[p] {
            return Err(Error::Arity(format!("position {p} used twice")));
        }
        taken[p] = true;
        ys.push(zs[p].clone());
    }
    let xs = zs
        .iter()
        .enumerate()
        .filter(|(i, _)| !taken[*i])
        .map(|(_, v)| v.clone())
        .collect();
    Ok((xs, ys))
}

fn fiber_of(team_mask: u32, a_index: u32, l: &[usize], m: usize, n: usize) -> u32 {
    let r = l.len();
    let a_row = decode_row(a_index, n, m - r);
    let mut fiber = 0u32;
    for b in 0..(n as u32).pow(r as u32) {
        let b_row = decode_row(b, n, r);
        let z_row = shuffle_tuple(&a_row, &b_row, l).expect("validated positions");
        let z = super::encode_row(&z_row, n);
        if team_mask >> z & 1 == 1 {
            fiber |= 1 << b;
        }
    }
    fiber
}

/// The projection of a team along a quantifier class: the set of reduced
/// rows whose fiber lies in the class. Returns `None` when some nonempty
/// fiber's row is missing from the projection (the projection is not
/// proper).
pub fn proper_projection(
    st: &Structure,
    team: &Team,
    class: &QuantifierClass,
    l: &[usize],
) -> Result<Option<Team>> {
    let m = team.vars().len();
    let r = l.len();
    if class.arity != r {
        return Err(Error::Arity(format!(
            "class `{}` has arity {}, given {} positions",
            class.name, class.arity, r
        )));
    }
    if r > m {
        return Err(Error::Arity("more positions than team variables".into()));
    }
    let n = st.universe();
    pow_checked(n, m)?;
    let (x_vars, _) = split_tuple(team.vars(), l)?;
    let mask = team.to_mask(n)?;
    let count = pow_checked(n, r)? as usize;
    let reduced = pow_checked(n, m - r)?;
    let mut out_rows = Vec::new();
    let mut proper = true;
    for a in 0..reduced {
        let fiber = fiber_of(mask, a, l, m, n);
        let in_class = class.contains(st, count, fiber);
        if in_class {
            out_rows.push(decode_row(a, n, m - r));
        } else if fiber != 0 {
            proper = false;
        }
    }
    if !proper {
        return Ok(None);
    }
    Ok(Some(Team::new(x_vars, out_rows)?))
}

/// The family operator of a quantifier class: proper projections of the
/// members, closed upward when the class accepts the empty relation.
pub fn lindstrom_apply(
    st: &Structure,
    class: &QuantifierClass,
    l: &[usize],
    fam: &Family,
    budget: &SearchBudget,
) -> Result<Family> {
    let mut clock = BudgetClock::start(budget);
    lindstrom_apply_clocked(st, class, l, fam, &mut clock)
}

fn lindstrom_apply_clocked(
    st: &Structure,
    class: &QuantifierClass,
    l: &[usize],
    fam: &Family,
    clock: &mut BudgetClock,
) -> Result<Family> {
    let n = st.universe();
    // the family base must be a power n^m
    let mut m = 0;
    let mut size = 1usize;
    while size < fam.width() {
        size *= n;
        m += 1;
    }
    if size != fam.width() {
        return Err(Error::Invalid(format!(
            "family base {} is not a power of the universe size {n}",
            fam.width()
        )));
    }
    let r = l.len();
    if class.arity != r {
        return Err(Error::Arity(format!(
            "class `{}` has arity {}, given {} positions",
            class.name, class.arity, r
        )));
    }
    if r > m {
        return Err(Error::Arity("more positions than base coordinates".into()));
    }
    for &p in l {
        if p >= m {
            return Err(Error::Arity(format!("position {p} out of range")));
        }
    }
    let count = pow_checked(n, r)? as usize;
    let reduced = pow_checked(n, m - r)?;
    let accepts_empty = class.accepts_empty(st, count);
    let full = mask_full(reduced as usize);
    let mut out: std::collections::HashSet<u32> = std::collections::HashSet::new();
    for &member in fam.masks() {
        if !clock.tick(reduced as u64) {
            return Err(Error::BudgetExhausted);
        }
        let mut pi = 0u32;
        let mut proper = true;
        for a in 0..reduced {
            let fiber = fiber_of(member, a, l, m, n);
            if class.contains(st, count, fiber) {
                pi |= 1 << a;
            } else if fiber != 0 {
                proper = false;
                break;
            }
        }
        if !proper {
            continue;
        }
        if accepts_empty {
            // every superset of the proper projection
            let free = full & !pi;
            let mut sub = free;
            loop {
                if !clock.tick(1) {
                    return Err(Error::BudgetExhausted);
                }
                out.insert(pi | sub);
                if sub == 0 {
                    break;
                }
                sub = (sub - 1) & free;
            }
        } else {
            out.insert(pi);
        }
    }
    Ok(Family::from_masks(reduced as usize, out))
}

/// Satisfaction is invariant under restricting teams to the free variables,
/// checked over every team in the context with the reference evaluator.
pub fn check_formula_locality(
    st: &Structure,
    formula: &Formula,
    ctx: &[String],
    budget: &SearchBudget,
) -> Result<bool> {
    check_free_in_ctx(formula, ctx)?;
    let base = team_base(st, ctx)?;
    let free = formula_free_vars(formula);
    let n = st.universe();
    for mask in 0..1u64 << base {
        let team = Team::from_mask(ctx.to_vec(), n, mask as u32)?;
        let restricted = team.restrict(&free)?;
        let whole = naive_satisfies(st, &team, formula, budget)?;
        let local = naive_satisfies(st, &restricted, formula, budget)?;
        if whole != local {
            return Ok(false);
        }
    }
    Ok(true)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DimKind {
    Upper,
    DualUpper,
    Cylindrical,
}

fn used_relations(f: &Formula, out: &mut Vec<String>) {
    match f {
        Formula::Rel { name, .. } => {
            if !out.contains(name) {
                out.push(name.clone());
            }
        }
        Formula::And(a, b)
        | Formula::Or(a, b)
        | Formula::TensorAnd(a, b)
        | Formula::IntDisj(a, b)
        | Formula::IntImpl(a, b) => {
            used_relations(a, out);
            used_relations(b, out);
        }
        Formula::Exists(_, b)
        | Formula::Forall(_, b)
        | Formula::Exists1(_, b)
        | Formula::Forall1(_, b)
        | Formula::Delta1(_, b) => used_relations(b, out),
        Formula::Lindstrom { body, .. } => used_relations(body, out),
        _ => {}
    }
}

/// Dimension of the formula's family over the single equality-only
/// structure of size `n`. Nonempty vocabularies are rejected: for them one
/// structure does not realize the supremum over all models of that size.
pub fn dim_function(
    formula: &Formula,
    ctx: &[String],
    n: usize,
    which: DimKind,
    budget: &SearchBudget,
) -> Result<usize> {
    let mut rels = Vec::new();
    used_relations(formula, &mut rels);
    if let Some(r) = rels.first() {
        return Err(Error::UnsupportedVocabulary(r.clone()));
    }
    let st = Structure::bare(n)?;
    let fam = team_family(&st, formula, ctx, budget)?;
    let result = match which {
        DimKind::Upper => dims::upper_dimension(&fam, budget),
        DimKind::DualUpper => dims::dual_upper_dimension(&fam, budget),
        DimKind::Cylindrical => dims::cylindrical_dimension(&fam, budget),
    };
    if result.status != dims::CoverStatus::Exact {
        return Err(Error::BudgetExhausted);
    }
    Ok(result.value)
}

#[cfg(test)]
mod tests {
    use super::super::parse_formula;
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn ctx(vars: &[&str]) -> Vec<String> {
        vars.iter().map(|s| s.to_string()).collect()
    }

    fn b() -> SearchBudget {
        SearchBudget::default()
    }

    #[test]
    fn equality_family_is_interval() {
        let st = Structure::bare(2).unwrap();
        let f = parse_formula("x = y").unwrap();
        let fam = team_family(&st, &f, &ctx(&["x", "y"]), &b()).unwrap();
        // teams inside {(0,0), (1,1)} = row indices 0 and 3
        assert_eq!(fam.len(), 4);
        assert!(fam.masks().iter().all(|&m| m & !0b1001 == 0));
        assert_eq!(dims::upper_dimension(&fam, &b()).value, 1);
        assert_eq!(dims::dual_upper_dimension(&fam, &b()).value, 1);
        assert_eq!(dims::cylindrical_dimension(&fam, &b()).value, 1);
    }

    #[test]
    fn dependence_family_n2() {
        let st = Structure::bare(2).unwrap();
        let f = parse_formula("dep(x ; y)").unwrap();
        let fam = team_family(&st, &f, &ctx(&["x", "y"]), &b()).unwrap();
        assert_eq!(fam.len(), 9);
        assert_eq!(dims::upper_dimension(&fam, &b()).value, 4);
        assert_eq!(dims::dual_upper_dimension(&fam, &b()).value, 1);
    }

    #[test]
    fn nonempty_atom_family() {
        let st = Structure::bare(2).unwrap();
        let f = parse_formula("NE").unwrap();
        let fam = team_family(&st, &f, &ctx(&["x"]), &b()).unwrap();
        assert_eq!(fam.len(), 3);
        assert_eq!(dims::upper_dimension(&fam, &b()).value, 1);
        assert_eq!(dims::dual_upper_dimension(&fam, &b()).value, 2);
        assert_eq!(dims::cylindrical_dimension(&fam, &b()).value, 2);
    }

    #[test]
    fn satisfies_examples() {
        let st = Structure::bare(2).unwrap();
        let dep = parse_formula("dep(x ; y)").unwrap();
        let t1 = Team::parse("vars x y\n0 0\n1 1\n", 2).unwrap();
        assert!(super::super::eval::satisfies(&st, &t1, &dep, &b()).unwrap());
        let t2 = Team::parse("vars x y\n0 0\n0 1\n", 2).unwrap();
        assert!(!super::super::eval::satisfies(&st, &t2, &dep, &b()).unwrap());
        let inc = parse_formula("inc(x ; y)").unwrap();
        let t3 = Team::parse("vars x y\n0 1\n1 0\n", 2).unwrap();
        assert!(super::super::eval::satisfies(&st, &t3, &inc, &b()).unwrap());
        // empty team property over the plain fragment
        let empty = Team::empty(ctx(&["x", "y"])).unwrap();
        for text in ["dep(x ; y)", "inc(x ; y)", "x = y or dep(x ; y)", "E z . exc(x ; z)"] {
            let f = parse_formula(text).unwrap();
            assert!(
                super::super::eval::satisfies(&st, &empty, &f, &b()).unwrap(),
                "{text}"
            );
        }
        let ne = parse_formula("NE").unwrap();
        assert!(!super::super::eval::satisfies(&st, &empty, &ne, &b()).unwrap());
    }

    #[test]
    fn two_path_agreement_basics() {
        let st = Structure::bare(2).unwrap();
        for text in [
            "x = y",
            "dep(x ; y)",
            "x = y or dep(x ; y)",
            "inc(x ; y) and exc(x ; y)",
            "E z . (z = x or z = y)",
            "A z . (z = x or inc(x ; y))",
            "x = y ior NE",
            "dep(x ; y) tand inc(y ; x)",
            "Q exists z . inc(x ; z)",
        ] {
            let f = parse_formula(text).unwrap();
            let direct = team_family(&st, &f, &ctx(&["x", "y"]), &b()).unwrap();
            let composed = team_family_composed(&st, &f, &ctx(&["x", "y"]), &b()).unwrap();
            assert_eq!(direct, composed, "{text}");
        }
    }

    #[test]
    fn optimized_matches_naive_on_random_teams() {
        let st = Structure::bare(2).unwrap();
        let formulas = [
            "x = y or inc(x ; y)",
            "E z . (dep(z ; x) and exc(z ; y))",
            "E z . E w . ((! z = x or w = y) and ind(z y ; ; z w))",
            "dep(x ; y) -> const(y)",
            "d1 x . const(y)",
            "A1 z . (! z = x or dep(x ; y))",
            "E1 z . z = x",
            "even(x y)",
            "ano(x ; y) or exc(x ; y)",
            "A z . (z = y or exc(x z ; x y))",
        ];
        let mut rng = ChaCha8Rng::seed_from_u64(77);
        for text in formulas {
            let f = parse_formula(text).unwrap();
            for _ in 0..40 {
                let mask: u32 = rng.gen::<u32>() & 0xf;
                let team = Team::from_mask(ctx(&["x", "y"]), 2, mask).unwrap();
                let fast = super::super::eval::satisfies(&st, &team, &f, &b()).unwrap();
                let slow = naive_satisfies(&st, &team, &f, &b()).unwrap();
                assert_eq!(fast, slow, "{text} on mask {mask:04b}");
            }
        }
    }

    #[test]
    fn optimized_matches_naive_n3() {
        let st = Structure::bare(3).unwrap();
        let formulas = [
            "x = y or inc(x ; y)",
            "E z . (dep(z ; x) and exc(z ; y))",
            "ano(x ; y) or dep(x ; y)",
        ];
        let mut rng = ChaCha8Rng::seed_from_u64(78);
        for text in formulas {
            let f = parse_formula(text).unwrap();
            for _ in 0..20 {
                // small teams keep the reference evaluator affordable
                let mut mask: u32 = 0;
                for _ in 0..rng.gen_range(0..=4) {
                    mask |= 1 << rng.gen_range(0..9);
                }
                let team = Team::from_mask(ctx(&["x", "y"]), 3, mask).unwrap();
                let fast = super::super::eval::satisfies(&st, &team, &f, &b()).unwrap();
                let slow = naive_satisfies(&st, &team, &f, &b()).unwrap();
                assert_eq!(fast, slow, "{text} on mask {mask:b}");
            }
        }
    }

    #[test]
    fn shuffle_examples() {
        let xs = ["a"];
        let ys = ["b"];
        assert_eq!(shuffle_tuple(&xs, &ys, &[0]).unwrap(), vec!["b", "a"]);
        assert_eq!(shuffle_tuple(&xs, &ys, &[1]).unwrap(), vec!["a", "b"]);
        let none: [&str; 0] = [];
        assert_eq!(shuffle_tuple(&xs, &none, &[]).unwrap(), vec!["a"]);
        assert!(shuffle_tuple(&xs, &["b", "c"], &[0, 0]).is_err());
        let (xs2, ys2) = split_tuple(&["b", "a"], &[0]).unwrap();
        assert_eq!(xs2, vec!["a"]);
        assert_eq!(ys2, vec!["b"]);
    }

    #[test]
    fn proper_projection_examples() {
        let st = Structure::bare(2).unwrap();
        let exists = QuantifierClass::new("exists", 1, |_, _, r| r != 0);
        let forall = QuantifierClass::new("forall", 1, |_, count, r| {
            r.count_ones() as usize == count
        });
        let s = Team::parse("vars x y\n0 0\n0 1\n1 1\n", 2).unwrap();
        let p = proper_projection(&st, &s, &exists, &[1]).unwrap().unwrap();
        assert_eq!(p.rows(), &[vec![0], vec![1]]);
        assert!(proper_projection(&st, &s, &forall, &[1]).unwrap().is_none());
        let empty = Team::empty(ctx(&["x", "y"])).unwrap();
        let p = proper_projection(&st, &empty, &exists, &[1]).unwrap().unwrap();
        assert!(p.is_empty());
    }

    #[test]
    fn lindstrom_apply_matches_team_family() {
        let st = Structure::bare(2).unwrap();
        let eq = parse_formula("x = y").unwrap();
        let fam = team_family(&st, &eq, &ctx(&["x", "y"]), &b()).unwrap();
        let exists = QuantifierClass::new("exists", 1, |_, _, r| r != 0);
        let projected = lindstrom_apply(&st, &exists, &[1], &fam, &b()).unwrap();
        let direct = team_family(
            &st,
            &parse_formula("E y . x = y").unwrap(),
            &ctx(&["x"]),
            &b(),
        )
        .unwrap();
        assert_eq!(projected, direct);
        assert_eq!(projected, Family::powerset(2));

        let forall = QuantifierClass::new("forall", 1, |_, count, r| {
            r.count_ones() as usize == count
        });
        let projected = lindstrom_apply(&st, &forall, &[1], &fam, &b()).unwrap();
        let direct = team_family(
            &st,
            &parse_formula("A y . x = y").unwrap(),
            &ctx(&["x"]),
            &b(),
        )
        .unwrap();
        assert_eq!(projected, direct);

        let empty = Family::empty(4);
        assert!(lindstrom_apply(&st, &exists, &[1], &empty, &b())
            .unwrap()
            .is_empty());
    }

    #[test]
    fn locality_examples() {
        let st = Structure::bare(2).unwrap();
        let dep = parse_formula("dep(x ; y)").unwrap();
        assert!(check_formula_locality(&st, &dep, &ctx(&["x", "y", "z"]), &b()).unwrap());
        let ne = parse_formula("NE").unwrap();
        assert!(check_formula_locality(&st, &ne, &ctx(&["x", "z"]), &b()).unwrap());
        let eq = parse_formula("x = y").unwrap();
        assert!(check_formula_locality(&st, &eq, &ctx(&["x", "y", "z"]), &b()).unwrap());
    }

    #[test]
    fn dim_function_examples() {
        let dep = parse_formula("dep(x ; y)").unwrap();
        assert_eq!(
            dim_function(&dep, &ctx(&["x", "y"]), 2, DimKind::Upper, &b()).unwrap(),
            4
        );
        let exc = parse_formula("exc(x ; y)").unwrap();
        assert_eq!(
            dim_function(&exc, &ctx(&["x", "y"]), 2, DimKind::Upper, &b()).unwrap(),
            2
        );
        let eq = parse_formula("x = y").unwrap();
        for n in 2..=3 {
            assert_eq!(
                dim_function(&eq, &ctx(&["x", "y"]), n, DimKind::Cylindrical, &b()).unwrap(),
                1
            );
        }
        let mut st = Structure::bare(2).unwrap();
        st.add_relation("R", 1, vec![vec![0]]).unwrap();
        let rel = parse_formula("R(x)").unwrap();
        assert!(matches!(
            dim_function(&rel, &ctx(&["x"]), 2, DimKind::Upper, &b()),
            Err(Error::UnsupportedVocabulary(_))
        ));
    }
}
