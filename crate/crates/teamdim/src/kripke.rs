//! Operators on families induced by a relation between an output set and a
//! tuple of input sets, together with the locality and separation tests and
//! the exact preservation conditions for dominated and supported convexity.

use crate::setfam::{mask_full, Family};
use crate::tensor::BoolOp2;
use crate::{Error, Result};
use rand::Rng;
use std::collections::{HashMap, HashSet};
use std::sync::Arc;

/// One tuple of the relation: an output set over the target base and one
/// input set per argument position over the source base.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct KripkeRow {
    pub output: u32,
    pub inputs: Vec<u32>,
}

type Pred = Arc<dyn Fn(u32, &[u32]) -> bool + Send + Sync>;

enum RelKind {
    Extensional {
        rows: Vec<KripkeRow>,
        index: HashSet<KripkeRow>,
    },
    Intensional(Pred),
}

/// A relation `R ⊆ P(Y) × P(X)^n` and the operator it induces on families:
/// `B ∈ Δ_R(A_0, …, A_{n−1})` iff some row `(B, A_0, …, A_{n−1})` of `R`
/// picks its inputs from the argument families.
pub struct KripkeRelation {
    name: String,
    arity: usize,
    source_width: usize,
    target_width: usize,
    kind: RelKind,
}

const MATERIALIZE_CAP_BITS: u32 = 24;

impl KripkeRelation {
    pub fn from_rows(
        name: impl Into<String>,
        arity: usize,
        source_width: usize,
        target_width: usize,
        mut rows: Vec<KripkeRow>,
    ) -> Result<Self> {
        for r in &rows {
            if r.inputs.len() != arity {
                return Err(Error::Arity(format!(
                    "row has {} inputs, relation arity is {arity}",
                    r.inputs.len()
                )));
            }
            if r.output & !mask_full(target_width) != 0
                || r.inputs.iter().any(|&i| i & !mask_full(source_width) != 0)
            {
                return Err(Error::Invalid("row out of base range".into()));
            }
        }
        rows.sort_unstable();
        rows.dedup();
        let index = rows.iter().cloned().collect();
        Ok(KripkeRelation {
            name: name.into(),
            arity,
            source_width,
            target_width,
            kind: RelKind::Extensional { rows, index },
        })
    }

    pub fn from_predicate(
        name: impl Into<String>,
        arity: usize,
        source_width: usize,
        target_width: usize,
        pred: Pred,
    ) -> Self {
        KripkeRelation {
            name: name.into(),
            arity,
            source_width,
            target_width,
            kind: RelKind::Intensional(pred),
        }
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn source_width(&self) -> usize {
        self.source_width
    }

    pub fn target_width(&self) -> usize {
        self.target_width
    }

    pub fn holds(&self, output: u32, inputs: &[u32]) -> bool {
        debug_assert_eq!(inputs.len(), self.arity);
        match &self.kind {
            RelKind::Extensional { index, .. } => index.contains(&KripkeRow {
                output,
                inputs: inputs.to_vec(),
            }),
            RelKind::Intensional(p) => p(output, inputs),
        }
    }

    /// `{(D, D, D)}`: intersection of families.
    pub fn intersection(width: usize) -> Self {
        KripkeRelation::from_predicate(
            "cap",
            2,
            width,
            width,
            Arc::new(|out, ins| out == ins[0] && out == ins[1]),
        )
    }

    /// `{(A ⊛ B, A, B)}`: the tensor operator of a binary connective.
    pub fn tensor(op: BoolOp2, width: usize) -> Self {
        let name = op
            .name()
            .map(|n| format!("tensor-{n}"))
            .unwrap_or_else(|| format!("tensor-{}", op.bits_str()));
        KripkeRelation::from_predicate(
            name,
            2,
            width,
            width,
            Arc::new(move |out, ins| out == op.apply_masks(ins[0], ins[1], width)),
        )
    }

    pub fn tensor_or(width: usize) -> Self {
        Self::tensor(BoolOp2::from_name("or").unwrap(), width)
    }

    pub fn tensor_and(width: usize) -> Self {
        Self::tensor(BoolOp2::from_name("and").unwrap(), width)
    }

    /// `{(X ∖ A, A)}`: tensor negation.
    pub fn tensor_negation(width: usize) -> Self {
        let full = mask_full(width);
        KripkeRelation::from_predicate(
            "tensor-not",
            1,
            width,
            width,
            Arc::new(move |out, ins| out == !ins[0] & full),
        )
    }

    /// `{(A, A, ∅), (A, ∅, A)}`: union restricted to families containing ∅.
    pub fn restricted_union(width: usize) -> Self {
        KripkeRelation::from_predicate(
            "cup-star",
            2,
            width,
            width,
            Arc::new(|out, ins| {
                (out == ins[0] && ins[1] == 0) || (out == ins[1] && ins[0] == 0)
            }),
        )
    }

    /// `{(f[A], A)}` for a surjection `f` given elementwise.
    pub fn projection(f: Vec<usize>, source_width: usize, target_width: usize) -> Result<Self> {
        check_surjection(&f, source_width, target_width)?;
        let f2 = f.clone();
        Ok(KripkeRelation::from_predicate(
            "proj",
            1,
            source_width,
            target_width,
            Arc::new(move |out, ins| image(&f2, ins[0]) == out),
        ))
    }

    /// `{(A, f[A])}` for a surjection `f: X → Y`: the inverse projection,
    /// taking families over `Y` to families over `X`.
    pub fn inverse_projection(f: Vec<usize>, x_width: usize, y_width: usize) -> Result<Self> {
        check_surjection(&f, x_width, y_width)?;
        let f2 = f.clone();
        Ok(KripkeRelation::from_predicate(
            "proj-inv",
            1,
            y_width,
            x_width,
            Arc::new(move |out, ins| image(&f2, out) == ins[0]),
        ))
    }

    /// Apply the induced operator to argument families.
    pub fn apply(&self, args: &[&Family]) -> Result<Family> {
        if args.len() != self.arity {
            return Err(Error::Arity(format!(
                "expected {} arguments, got {}",
                self.arity,
                args.len()
            )));
        }
        for a in args {
            if a.width() != self.source_width {
                return Err(Error::BaseMismatch(self.source_width, a.width()));
            }
        }
        if args.iter().any(|a| a.is_empty()) {
            return Ok(Family::empty(self.target_width));
        }
        let mut out: HashSet<u32> = HashSet::new();
        match &self.kind {
            RelKind::Extensional { rows, .. } => {
                for r in rows {
                    if r.inputs
                        .iter()
                        .zip(args)
                        .all(|(&i, fam)| fam.contains_mask(i))
                    {
                        out.insert(r.output);
                    }
                }
            }
            RelKind::Intensional(pred) => {
                let outputs = 1u64 << self.target_width;
                let combos: u64 = args.iter().map(|a| a.len() as u64).product();
                if outputs.saturating_mul(combos) > 1 << MATERIALIZE_CAP_BITS {
                    return Err(Error::CapExceeded(
                        "relation application space exceeds the enumeration cap".into(),
                    ));
                }
                let mut tuple = vec![0u32; self.arity];
                for b in 0..outputs as u32 {
                    if product_any(args, &mut tuple, 0, &mut |t| pred(b, t)) {
                        out.insert(b);
                    }
                }
            }
        }
        Ok(Family::from_masks(self.target_width, out))
    }

    /// Enumerate the full extension; errors when the row space is too big.
    pub fn materialize(&self) -> Result<Vec<KripkeRow>> {
        match &self.kind {
            RelKind::Extensional { rows, .. } => Ok(rows.clone()),
            RelKind::Intensional(pred) => {
                let bits = self.target_width as u32 + (self.arity * self.source_width) as u32;
                if bits > MATERIALIZE_CAP_BITS {
                    return Err(Error::CapExceeded(format!(
                        "2^{bits} candidate rows exceed the materialization cap"
                    )));
                }
                let mut rows = Vec::new();
                let per_input = 1u32 << self.source_width;
                let mut tuple = vec![0u32; self.arity];
                for out in 0..1u32 << self.target_width {
                    enumerate_tuples(per_input, &mut tuple, 0, &mut |t| {
                        if pred(out, t) {
                            rows.push(KripkeRow {
                                output: out,
                                inputs: t.to_vec(),
                            });
                        }
                    });
                }
                Ok(rows)
            }
        }
    }

    fn singleton_rows(&self) -> Result<HashMap<u32, Vec<Vec<u32>>>> {
        let rows = self.materialize()?;
        let mut by_out: HashMap<u32, Vec<Vec<u32>>> = HashMap::new();
        for r in rows {
            if r.output.count_ones() == 1 {
                by_out.entry(r.output).or_default().push(r.inputs);
            }
        }
        Ok(by_out)
    }

    /// Locality: every row is determined by the singleton rows, via
    /// componentwise unions of one chosen singleton row per output element.
    pub fn is_local(&self) -> Result<bool> {
        let rows = self.materialize()?;
        let mut by_out: HashMap<u32, HashSet<Vec<u32>>> = HashMap::new();
        for r in &rows {
            by_out.entry(r.output).or_default().insert(r.inputs.clone());
        }
        let closure = local_closure_map(self.arity, self.target_width, &self.singleton_rows()?)?;
        for out in 0..1u32 << self.target_width {
            let actual = by_out.remove(&out).unwrap_or_default();
            let expected = closure.get(&out).cloned().unwrap_or_default();
            if actual != expected {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// Separation: singleton rows of distinct output elements have pairwise
    /// disjoint inputs at every position.
    pub fn is_separating(&self) -> Result<bool> {
        let singles = self.singleton_rows()?;
        let outs: Vec<u32> = singles.keys().copied().collect();
        for (i, &a) in outs.iter().enumerate() {
            for &b in &outs[i + 1..] {
                for ta in &singles[&a] {
                    for tb in &singles[&b] {
                        if ta.iter().zip(tb).any(|(&x, &y)| x & y != 0) {
                            return Ok(false);
                        }
                    }
                }
            }
        }
        Ok(true)
    }

    /// The operator distributes over unions of its arguments; holds for
    /// every relation-induced operator.
    pub fn check_union_lemma(&self, partitions: &[Vec<Family>]) -> Result<bool> {
        if partitions.len() != self.arity {
            return Err(Error::Arity(format!(
                "expected {} argument partitions, got {}",
                self.arity,
                partitions.len()
            )));
        }
        let mut unions = Vec::with_capacity(self.arity);
        for parts in partitions {
            let mut u = Family::empty(self.source_width);
            for p in parts {
                u = u.union_with(p)?;
            }
            unions.push(u);
        }
        let lhs = self.apply(&unions.iter().collect::<Vec<_>>())?;

        let mut rhs = Family::empty(self.target_width);
        if partitions.iter().all(|p| !p.is_empty()) {
            let mut pick = vec![0usize; self.arity];
            'outer: loop {
                let args: Vec<&Family> = partitions
                    .iter()
                    .zip(&pick)
                    .map(|(parts, &i)| &parts[i])
                    .collect();
                rhs = rhs.union_with(&self.apply(&args)?)?;
                // advance the mixed-radix counter over the parts
                let mut pos = 0;
                loop {
                    if pos == self.arity {
                        break 'outer;
                    }
                    pick[pos] += 1;
                    if pick[pos] < partitions[pos].len() {
                        break;
                    }
                    pick[pos] = 0;
                    pos += 1;
                }
            }
        }
        Ok(lhs == rhs)
    }

    /// The exact condition equivalent to weak preservation of dominated
    /// convexity.
    pub fn check_star_sharp(&self) -> Result<bool> {
        self.check_star(true)
    }

    /// The exact condition equivalent to weak preservation of supported
    /// convexity.
    pub fn check_star_flat(&self) -> Result<bool> {
        self.check_star(false)
    }

    fn check_star(&self, sharp: bool) -> Result<bool> {
        let rows = self.materialize()?;
        let mut by_out: HashMap<u32, Vec<&KripkeRow>> = HashMap::new();
        for r in &rows {
            by_out.entry(r.output).or_default().push(r);
        }
        let full = mask_full(self.target_width);
        let row_refs: Vec<&KripkeRow> = rows.iter().collect();
        let ok = crate::par::all(&row_refs, |ra| {
            for rb in &rows {
                // candidate outputs C in the hull of the two output sets
                for c in 0..=full {
                    if !in_hull(c, ra.output, rb.output, sharp) {
                        continue;
                    }
                    let witness = by_out.get(&c).map_or(false, |cands| {
                        cands.iter().any(|rc| {
                            rc.inputs
                                .iter()
                                .zip(&ra.inputs)
                                .zip(&rb.inputs)
                                .all(|((&ci, &ai), &bi)| in_hull(ci, ai, bi, sharp))
                        })
                    });
                    if !witness {
                        return false;
                    }
                }
            }
            true
        });
        Ok(ok)
    }
}

/// `sharp`: membership in the dominated hull `[A, A∪B] ∪ [B, A∪B]`;
/// otherwise the supported hull `[A∩B, A] ∪ [A∩B, B]`.
fn in_hull(c: u32, a: u32, b: u32, sharp: bool) -> bool {
    if sharp {
        (c & !(a | b)) == 0 && (a & !c == 0 || b & !c == 0)
    } else {
        ((a & b) & !c) == 0 && (c & !a == 0 || c & !b == 0)
    }
}

fn check_surjection(f: &[usize], source_width: usize, target_width: usize) -> Result<()> {
    if f.len() != source_width {
        return Err(Error::Arity(format!(
            "map has {} entries, source base has {source_width}",
            f.len()
        )));
    }
    let mut hit = vec![false; target_width];
    for &y in f {
        if y >= target_width {
            return Err(Error::Invalid(format!("map value {y} out of range")));
        }
        hit[y] = true;
    }
    if !hit.iter().all(|&h| h) {
        return Err(Error::Invalid("map is not surjective".into()));
    }
    Ok(())
}

fn image(f: &[usize], set: u32) -> u32 {
    let mut out = 0u32;
    for (x, &y) in f.iter().enumerate() {
        if set >> x & 1 == 1 {
            out |= 1 << y;
        }
    }
    out
}

fn product_any(
    args: &[&Family],
    tuple: &mut Vec<u32>,
    pos: usize,
    f: &mut impl FnMut(&[u32]) -> bool,
) -> bool {
    if pos == args.len() {
        return f(tuple);
    }
    for i in 0..args[pos].len() {
        tuple[pos] = args[pos].masks()[i];
        if product_any(args, tuple, pos + 1, f) {
            return true;
        }
    }
    false
}

fn enumerate_tuples(per_input: u32, tuple: &mut Vec<u32>, pos: usize, f: &mut impl FnMut(&[u32])) {
    if pos == tuple.len() {
        f(tuple);
        return;
    }
    for m in 0..per_input {
        tuple[pos] = m;
        enumerate_tuples(per_input, tuple, pos + 1, f);
    }
}

const CLOSURE_CAP: usize = 1 << 20;

/// Rows generated from singleton rows by the locality rule, for every
/// output set: one singleton row per output element, inputs unioned
/// componentwise. The empty output has exactly the all-empty row.
fn local_closure_map(
    arity: usize,
    target_width: usize,
    singles: &HashMap<u32, Vec<Vec<u32>>>,
) -> Result<HashMap<u32, HashSet<Vec<u32>>>> {
    let mut closure: HashMap<u32, HashSet<Vec<u32>>> = HashMap::new();
    closure.insert(0, HashSet::from([vec![0u32; arity]]));
    let mut budget = 0usize;
    for out in 1..1u32 << target_width {
        let low = out & out.wrapping_neg();
        let rest = out & !low;
        let mut set = HashSet::new();
        if let (Some(prev), Some(rows)) = (closure.get(&rest), singles.get(&low)) {
            for t in prev {
                for r in rows {
                    let merged: Vec<u32> = t.iter().zip(r).map(|(&a, &b)| a | b).collect();
                    set.insert(merged);
                }
            }
        }
        budget += set.len();
        if budget > CLOSURE_CAP {
            return Err(Error::CapExceeded(
                "locality closure exceeds the enumeration cap".into(),
            ));
        }
        closure.insert(out, set);
    }
    Ok(closure)
}

/// Build the smallest local relation with the given singleton rows.
pub fn local_relation_from_singletons(
    name: impl Into<String>,
    arity: usize,
    source_width: usize,
    target_width: usize,
    singles: &HashMap<u32, Vec<Vec<u32>>>,
) -> Result<KripkeRelation> {
    let closure = local_closure_map(arity, target_width, singles)?;
    let mut rows = Vec::new();
    for (out, tuples) in closure {
        for t in tuples {
            rows.push(KripkeRow {
                output: out,
                inputs: t,
            });
        }
    }
    KripkeRelation::from_rows(name, arity, source_width, target_width, rows)
}

/// Sample singleton rows independently per output element and close under
/// the locality rule.
pub fn random_local_relation(
    rng: &mut impl Rng,
    arity: usize,
    source_width: usize,
    target_width: usize,
) -> KripkeRelation {
    let mut singles: HashMap<u32, Vec<Vec<u32>>> = HashMap::new();
    let full = mask_full(source_width);
    for e in 0..target_width {
        let count = rng.gen_range(1..=2);
        let mut rows = Vec::new();
        for _ in 0..count {
            rows.push((0..arity).map(|_| rng.gen::<u32>() & full).collect());
        }
        singles.insert(1 << e, rows);
    }
    local_relation_from_singletons("random-local", arity, source_width, target_width, &singles)
        .expect("closure of sampled singleton rows stays within the cap")
}

/// As [`random_local_relation`], with source elements partitioned among the
/// output elements so the result is also separating.
pub fn random_local_separating_relation(
    rng: &mut impl Rng,
    arity: usize,
    source_width: usize,
    target_width: usize,
) -> KripkeRelation {
    let mut blocks = vec![0u32; target_width];
    for x in 0..source_width {
        // leave some source elements unused
        let pick = rng.gen_range(0..=target_width);
        if pick < target_width {
            blocks[pick] |= 1 << x;
        }
    }
    let mut singles: HashMap<u32, Vec<Vec<u32>>> = HashMap::new();
    for e in 0..target_width {
        let count = rng.gen_range(1..=2);
        let mut rows = Vec::new();
        for _ in 0..count {
            rows.push(
                (0..arity)
                    .map(|_| rng.gen::<u32>() & blocks[e])
                    .collect::<Vec<u32>>(),
            );
        }
        singles.insert(1 << e, rows);
    }
    local_relation_from_singletons(
        "random-local-separating",
        arity,
        source_width,
        target_width,
        &singles,
    )
    .expect("closure of sampled singleton rows stays within the cap")
}

/// Parse the extension file format: header `kripke n |X| |Y|`, then rows
/// `B ; A0 ; A1 ; …` in family element-list syntax.
pub fn parse_relation(text: &str) -> Result<KripkeRelation> {
    let mut lines = text.lines().enumerate();
    let (_, header) = lines
        .next()
        .ok_or_else(|| Error::parse(1, 1, "empty input"))?;
    let parts: Vec<&str> = header.split_whitespace().collect();
    if parts.len() != 4 || parts[0] != "kripke" {
        return Err(Error::parse(1, 1, "expected `kripke n |X| |Y|` header"));
    }
    let arity: usize = parts[1]
        .parse()
        .map_err(|_| Error::parse(1, 1, "invalid arity"))?;
    let source_width: usize = parts[2]
        .parse()
        .map_err(|_| Error::parse(1, 1, "invalid source base size"))?;
    let target_width: usize = parts[3]
        .parse()
        .map_err(|_| Error::parse(1, 1, "invalid target base size"))?;
    let mut rows = Vec::new();
    for (idx, line) in lines {
        let line = line.trim();
        if line.is_empty() {
            continue;
        }
        let fields: Vec<&str> = line.split(';').map(|s| s.trim()).collect();
        if fields.len() != arity + 1 {
            return Err(Error::parse(
                idx + 1,
                1,
                format!("expected {} fields, got {}", arity + 1, fields.len()),
            ));
        }
        let output = crate::setfam::parse_member_line(fields[0], target_width, idx + 1)?;
        let inputs = fields[1..]
            .iter()
            .map(|f| crate::setfam::parse_member_line(f, source_width, idx + 1))
            .collect::<Result<Vec<u32>>>()?;
        rows.push(KripkeRow { output, inputs });
    }
    KripkeRelation::from_rows("file", arity, source_width, target_width, rows)
}

pub fn emit_relation(rel: &KripkeRelation) -> Result<String> {
    let rows = rel.materialize()?;
    let mut out = format!(
        "kripke {} {} {}\n",
        rel.arity(),
        rel.source_width(),
        rel.target_width()
    );
    for r in rows {
        let mut fields = vec![crate::setfam::Subset::new(rel.target_width(), r.output).to_line()];
        for &i in &r.inputs {
            fields.push(crate::setfam::Subset::new(rel.source_width(), i).to_line());
        }
        out.push_str(&fields.join(" ; "));
        out.push('\n');
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::setfam::random_family;
    use crate::tensor::tensor_apply;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn intersection_is_family_intersection() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let cap = KripkeRelation::intersection(3);
        for _ in 0..10 {
            let a = random_family(&mut rng, 3, 0.5);
            let b = random_family(&mut rng, 3, 0.5);
            assert_eq!(cap.apply(&[&a, &b]).unwrap(), a.intersect_with(&b).unwrap());
        }
    }

    #[test]
    fn tensor_or_matches_tensor_apply() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let rel = KripkeRelation::tensor_or(3);
        let op = BoolOp2::from_name("or").unwrap();
        for _ in 0..10 {
            let a = random_family(&mut rng, 3, 0.5);
            let b = random_family(&mut rng, 3, 0.5);
            assert_eq!(
                rel.apply(&[&a, &b]).unwrap(),
                tensor_apply(op, &a, &b).unwrap()
            );
        }
    }

    #[test]
    fn empty_argument_gives_empty_result() {
        let rel = KripkeRelation::tensor_or(3);
        let a = Family::powerset(3);
        let e = Family::empty(3);
        assert!(rel.apply(&[&a, &e]).unwrap().is_empty());
    }

    #[test]
    fn locality_of_catalog_relations() {
        assert!(KripkeRelation::intersection(2).is_local().unwrap());
        assert!(KripkeRelation::tensor_or(2).is_local().unwrap());
        assert!(!KripkeRelation::restricted_union(2).is_local().unwrap());
        // tensor conjunction stops being local from three elements up
        assert!(!KripkeRelation::tensor_and(3).is_local().unwrap());
    }

    #[test]
    fn separation_of_catalog_relations() {
        assert!(KripkeRelation::tensor_or(2).is_separating().unwrap());
        assert!(KripkeRelation::intersection(2).is_separating().unwrap());
        assert!(KripkeRelation::restricted_union(2).is_separating().unwrap());
        assert!(!KripkeRelation::tensor_and(3).is_separating().unwrap());
    }

    #[test]
    fn star_conditions() {
        let cap = KripkeRelation::intersection(2);
        assert!(cap.check_star_sharp().unwrap());
        assert!(cap.check_star_flat().unwrap());

        let land = KripkeRelation::tensor_and(3);
        assert!(land.check_star_sharp().unwrap());
        assert!(land.check_star_flat().unwrap());

        // nonempty-output witness: preserves dominated convexity but not
        // supported convexity
        let mut rows = vec![KripkeRow {
            output: 0,
            inputs: vec![0],
        }];
        for out in 1u32..4 {
            rows.push(KripkeRow {
                output: out,
                inputs: vec![0b11],
            });
        }
        let rel = KripkeRelation::from_rows("nonempty", 1, 2, 2, rows).unwrap();
        assert!(rel.check_star_sharp().unwrap());
        assert!(!rel.check_star_flat().unwrap());
    }

    #[test]
    fn union_lemma_on_catalog() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let rels = [
            KripkeRelation::intersection(3),
            KripkeRelation::tensor_or(3),
            KripkeRelation::tensor_and(3),
            KripkeRelation::restricted_union(3),
        ];
        for rel in &rels {
            for _ in 0..5 {
                let parts = vec![
                    vec![
                        random_family(&mut rng, 3, 0.4),
                        random_family(&mut rng, 3, 0.4),
                    ],
                    vec![
                        random_family(&mut rng, 3, 0.4),
                        random_family(&mut rng, 3, 0.4),
                    ],
                ];
                assert!(rel.check_union_lemma(&parts).unwrap(), "{}", rel.name());
            }
        }
        // degenerate: all parts empty
        let cap = KripkeRelation::intersection(3);
        let empty_parts = vec![vec![Family::empty(3)], vec![Family::empty(3)]];
        assert!(cap.check_union_lemma(&empty_parts).unwrap());
    }

    #[test]
    fn random_local_relations_are_local() {
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        for _ in 0..10 {
            let rel = random_local_relation(&mut rng, 2, 3, 3);
            assert!(rel.is_local().unwrap());
            assert!(rel.check_star_sharp().unwrap());
        }
    }

    #[test]
    fn random_separating_relations_are_local_and_separating() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for _ in 0..10 {
            let rel = random_local_separating_relation(&mut rng, 2, 3, 3);
            assert!(rel.is_local().unwrap());
            assert!(rel.is_separating().unwrap());
            assert!(rel.check_star_flat().unwrap());
        }
    }

    #[test]
    fn relation_file_roundtrip() {
        let rel = KripkeRelation::intersection(2);
        let text = emit_relation(&rel).unwrap();
        let parsed = parse_relation(&text).unwrap();
        assert!(parsed.is_local().unwrap());
        let a = Family::from_masks(2, [0b01u32, 0b10]);
        let b = Family::from_masks(2, [0b01u32]);
        assert_eq!(
            parsed.apply(&[&a, &b]).unwrap(),
            rel.apply(&[&a, &b]).unwrap()
        );
    }

    #[test]
    fn projections() {
        // surjection {0,1,2} → {0,1}: 0,1 ↦ 0; 2 ↦ 1
        let f = vec![0, 0, 1];
        let proj = KripkeRelation::projection(f.clone(), 3, 2).unwrap();
        let fam = Family::from_masks(3, [0b001u32, 0b100, 0b011]);
        let img = proj.apply(&[&fam]).unwrap();
        assert_eq!(img.masks(), &[0b01, 0b10]);

        let inv = KripkeRelation::inverse_projection(f.clone(), 3, 2).unwrap();
        let up = inv.apply(&[&img]).unwrap();
        assert!(!up.is_empty());
        assert!(up.masks().iter().all(|&m| img.contains_mask(image(&f, m))));
    }
}
