//! Lax team-semantics satisfaction.
//!
//! Two evaluators live here. [`Evaluator`] is the production path: it
//! projects every query to the free variables of the subformula (all
//! constructs of the language are local), memoizes on the projected team,
//! evaluates first-order subformulas pointwise, and decides disjunction
//! splits and existential blocks with dedicated searches that collapse
//! equivalent partial states. [`naive_satisfies`] follows the satisfaction
//! clauses literally with no projection or sharing; it is the reference
//! oracle for tests and the basis of the formula-locality check.

use super::ast::Formula;
use super::classes::{standard_classes, ClassRegistry};
use super::{pow_checked, Structure, Team};
use crate::dims::{BudgetClock, SearchBudget};
use crate::{Error, Result};
use std::collections::{BTreeMap, BTreeSet, HashMap, HashSet};
use std::sync::Arc;

pub type AtomPred = Arc<dyn Fn(&Structure, &[Vec<u8>]) -> bool + Send + Sync>;

/// Registry for library-level atom plug-ins: a predicate on the team
/// restricted to the atom's variables, in the order written.
#[derive(Clone, Default)]
pub struct AtomRegistry {
    atoms: HashMap<String, AtomPred>,
}

impl AtomRegistry {
    pub fn register(&mut self, name: impl Into<String>, pred: AtomPred) {
        self.atoms.insert(name.into(), pred);
    }

    fn get(&self, name: &str) -> Option<&AtomPred> {
        self.atoms.get(name)
    }
}

const MAX_PROJECTED_VARS: usize = 16;
const AMBIGUOUS_ROUTE: &str = "__ambiguous-route:";

fn positions(vars: &[String], ctx: &[String]) -> Result<Vec<usize>> {
    vars.iter()
        .map(|v| {
            ctx.iter()
                .position(|w| w == v)
                .ok_or_else(|| Error::UnboundVariable(v.clone()))
        })
        .collect()
}

fn project_rows(rows: &[Vec<u8>], pos: &[usize]) -> Vec<Vec<u8>> {
    let mut out: Vec<Vec<u8>> = rows
        .iter()
        .map(|r| pos.iter().map(|&p| r[p]).collect())
        .collect();
    out.sort_unstable();
    out.dedup();
    out
}

fn encode_rows(rows: &[Vec<u8>]) -> Vec<u128> {
    rows.iter()
        .map(|r| r.iter().fold(0u128, |acc, &v| acc << 8 | v as u128))
        .collect()
}

fn select(rows: &[Vec<u8>], mask: u64) -> Vec<Vec<u8>> {
    rows.iter()
        .enumerate()
        .filter(|(i, _)| mask >> i & 1 == 1)
        .map(|(_, r)| r.clone())
        .collect()
}

fn project_cell(row: &[u8], pos: &[usize]) -> Vec<u8> {
    pos.iter().map(|&p| row[p]).collect()
}

fn assign_const(ctx: &[String], rows: &[Vec<u8>], v: &str, a: u8) -> (Vec<String>, Vec<Vec<u8>>) {
    match ctx.iter().position(|w| w == v) {
        Some(p) => {
            let mut rows2: Vec<Vec<u8>> = rows
                .iter()
                .map(|r| {
                    let mut r2 = r.clone();
                    r2[p] = a;
                    r2
                })
                .collect();
            rows2.sort_unstable();
            rows2.dedup();
            (ctx.to_vec(), rows2)
        }
        None => {
            let mut ctx2 = ctx.to_vec();
            ctx2.push(v.to_string());
            let rows2 = rows
                .iter()
                .map(|r| {
                    let mut r2 = r.clone();
                    r2.push(a);
                    r2
                })
                .collect();
            (ctx2, rows2)
        }
    }
}

fn extend_all(ctx: &[String], rows: &[Vec<u8>], v: &str, n: u8) -> (Vec<String>, Vec<Vec<u8>>) {
    let existing = ctx.iter().position(|w| w == v);
    let mut ctx2 = ctx.to_vec();
    if existing.is_none() {
        ctx2.push(v.to_string());
    }
    let mut rows2 = Vec::with_capacity(rows.len() * n as usize);
    for r in rows {
        for a in 0..n {
            let mut r2 = r.clone();
            match existing {
                Some(p) => r2[p] = a,
                None => r2.push(a),
            }
            rows2.push(r2);
        }
    }
    rows2.sort_unstable();
    rows2.dedup();
    (ctx2, rows2)
}

/// Team-atom satisfaction on rows over `ctx`. Literals are not handled
/// here.
pub(crate) fn atom_sat(
    st: &Structure,
    f: &Formula,
    ctx: &[String],
    rows: &[Vec<u8>],
    atoms: &AtomRegistry,
) -> Result<bool> {
    let tuples = |vars: &[String]| -> Result<Vec<Vec<u8>>> {
        let pos = positions(vars, ctx)?;
        Ok(rows
            .iter()
            .map(|r| pos.iter().map(|&p| r[p]).collect())
            .collect())
    };
    match f {
        Formula::Dep { xs, y } => {
            let keys = tuples(xs)?;
            let vals = tuples(std::slice::from_ref(y))?;
            let mut seen: HashMap<&[u8], u8> = HashMap::new();
            for (k, v) in keys.iter().zip(&vals) {
                match seen.entry(k.as_slice()) {
                    std::collections::hash_map::Entry::Vacant(e) => {
                        e.insert(v[0]);
                    }
                    std::collections::hash_map::Entry::Occupied(e) => {
                        if *e.get() != v[0] {
                            return Ok(false);
                        }
                    }
                }
            }
            Ok(true)
        }
        Formula::Const { xs } => {
            let ts = tuples(xs)?;
            Ok(ts.windows(2).all(|w| w[0] == w[1]))
        }
        Formula::Excl { xs, ys } => {
            let left: HashSet<Vec<u8>> = tuples(xs)?.into_iter().collect();
            let right: HashSet<Vec<u8>> = tuples(ys)?.into_iter().collect();
            Ok(left.is_disjoint(&right))
        }
        Formula::Incl { xs, ys } => {
            let left: HashSet<Vec<u8>> = tuples(xs)?.into_iter().collect();
            let right: HashSet<Vec<u8>> = tuples(ys)?.into_iter().collect();
            Ok(left.is_subset(&right))
        }
        Formula::Anon { xs, y } => {
            let keys = tuples(xs)?;
            let vals = tuples(std::slice::from_ref(y))?;
            let mut groups: HashMap<&[u8], HashSet<u8>> = HashMap::new();
            for (k, v) in keys.iter().zip(&vals) {
                groups.entry(k.as_slice()).or_default().insert(v[0]);
            }
            Ok(groups.values().all(|ys| ys.len() >= 2))
        }
        Formula::Indep { xs, cond, ys } => {
            let cs = tuples(cond)?;
            let ls = tuples(xs)?;
            let rs = tuples(ys)?;
            type Group<'x> = (HashSet<&'x [u8]>, HashSet<&'x [u8]>, HashSet<(&'x [u8], &'x [u8])>);
            let mut groups: HashMap<&[u8], Group> = HashMap::new();
            for ((c, l), r) in cs.iter().zip(&ls).zip(&rs) {
                let g = groups.entry(c.as_slice()).or_default();
                g.0.insert(l.as_slice());
                g.1.insert(r.as_slice());
                g.2.insert((l.as_slice(), r.as_slice()));
            }
            Ok(groups.values().all(|(ls, rs, pairs)| {
                ls.iter()
                    .all(|l| rs.iter().all(|r| pairs.contains(&(*l, *r))))
            }))
        }
        Formula::NE => Ok(!rows.is_empty()),
        Formula::Even { xs } => {
            let distinct: HashSet<Vec<u8>> = tuples(xs)?.into_iter().collect();
            Ok(distinct.len() % 2 == 0)
        }
        Formula::Half { xs } => {
            let distinct: HashSet<Vec<u8>> = tuples(xs)?.into_iter().collect();
            let total = (st.universe() as u128).pow(xs.len() as u32);
            Ok(2 * distinct.len() as u128 <= total)
        }
        Formula::Custom { name, vars } => {
            let pred = atoms
                .get(name)
                .ok_or_else(|| Error::UnknownAtom(name.clone()))?;
            let pos = positions(vars, ctx)?;
            let projected: Vec<Vec<u8>> = rows
                .iter()
                .map(|r| pos.iter().map(|&p| r[p]).collect())
                .collect();
            Ok(pred(st, &projected))
        }
        _ => Err(Error::Invalid("not a team atom".into())),
    }
}

struct NodeInfo<'f> {
    formula: &'f Formula,
    /// Free variables, sorted.
    free: Vec<String>,
    is_fo: bool,
    down_closed: bool,
}

fn is_fo(f: &Formula) -> bool {
    match f {
        Formula::Rel { .. } | Formula::Eq { .. } => true,
        // intuitionistic disjunction is not determined pointwise
        Formula::And(a, b)
        | Formula::Or(a, b)
        | Formula::TensorAnd(a, b)
        | Formula::IntImpl(a, b) => is_fo(a) && is_fo(b),
        Formula::Exists(_, b)
        | Formula::Forall(_, b)
        | Formula::Forall1(_, b)
        | Formula::Delta1(_, b) => is_fo(b),
        _ => false,
    }
}

fn is_down_closed(f: &Formula) -> bool {
    match f {
        Formula::Rel { .. } | Formula::Eq { .. } => true,
        Formula::Dep { .. } | Formula::Const { .. } | Formula::Excl { .. }
        | Formula::Half { .. } => true,
        Formula::And(a, b)
        | Formula::Or(a, b)
        | Formula::TensorAnd(a, b)
        | Formula::IntDisj(a, b) => is_down_closed(a) && is_down_closed(b),
        Formula::Exists(_, b)
        | Formula::Forall(_, b)
        | Formula::Exists1(_, b)
        | Formula::Forall1(_, b)
        | Formula::Delta1(_, b) => is_down_closed(b),
        _ => false,
    }
}

fn index_nodes<'f>(
    f: &'f Formula,
    nodes: &mut Vec<NodeInfo<'f>>,
    ids: &mut HashMap<*const Formula, usize>,
) -> usize {
    match f {
        Formula::And(a, b)
        | Formula::Or(a, b)
        | Formula::TensorAnd(a, b)
        | Formula::IntDisj(a, b)
        | Formula::IntImpl(a, b) => {
            index_nodes(a, nodes, ids);
            index_nodes(b, nodes, ids);
        }
        Formula::Exists(_, b)
        | Formula::Forall(_, b)
        | Formula::Exists1(_, b)
        | Formula::Forall1(_, b)
        | Formula::Delta1(_, b) => {
            index_nodes(b, nodes, ids);
        }
        Formula::Lindstrom { body, .. } => {
            index_nodes(body, nodes, ids);
        }
        _ => {}
    }
    let mut free = super::ast::formula_free_vars(f);
    free.sort_unstable();
    let id = nodes.len();
    nodes.push(NodeInfo {
        formula: f,
        free,
        is_fo: is_fo(f),
        down_closed: is_down_closed(f),
    });
    ids.insert(f as *const Formula, id);
    id
}

/// Memoizing evaluator bound to one structure and one formula. Memoized
/// results persist across [`Evaluator::satisfies`] calls, which is what
/// makes sweeping all teams of a base affordable.
pub struct Evaluator<'a> {
    st: &'a Structure,
    nodes: Vec<NodeInfo<'a>>,
    ids: HashMap<*const Formula, usize>,
    root: usize,
    classes: ClassRegistry,
    atoms: AtomRegistry,
    memo: HashMap<(usize, Vec<u128>), bool>,
    clock: BudgetClock,
    budget: SearchBudget,
}

impl<'a> Evaluator<'a> {
    pub fn new(st: &'a Structure, formula: &'a Formula, budget: &SearchBudget) -> Self {
        Self::with_registries(st, formula, budget, standard_classes(1), AtomRegistry::default())
    }

    pub fn with_registries(
        st: &'a Structure,
        formula: &'a Formula,
        budget: &SearchBudget,
        classes: ClassRegistry,
        atoms: AtomRegistry,
    ) -> Self {
        let mut nodes = Vec::new();
        let mut ids = HashMap::new();
        let root = index_nodes(formula, &mut nodes, &mut ids);
        Evaluator {
            st,
            nodes,
            ids,
            root,
            classes,
            atoms,
            memo: HashMap::new(),
            clock: BudgetClock::start(budget),
            budget: *budget,
        }
    }

    /// Restart the budget clock without discarding memoized results.
    pub fn reset_budget(&mut self) {
        self.clock = BudgetClock::start(&self.budget);
    }

    pub fn satisfies(&mut self, team: &Team) -> Result<bool> {
        for v in &self.nodes[self.root].free.clone() {
            if !team.vars().contains(v) {
                return Err(Error::UnboundVariable(v.clone()));
            }
        }
        let ctx: Vec<String> = team.vars().to_vec();
        self.sat(self.root, &ctx, team.rows())
    }

    fn id_of(&self, f: &Formula) -> usize {
        self.ids[&(f as *const Formula)]
    }

    fn tick(&mut self, n: u64) -> Result<()> {
        if !self.clock.tick(n) {
            return Err(Error::BudgetExhausted);
        }
        Ok(())
    }

    fn universe(&self) -> u8 {
        self.st.universe() as u8
    }

    fn sat(&mut self, id: usize, ctx: &[String], rows: &[Vec<u8>]) -> Result<bool> {
        if self.nodes[id].free.len() > MAX_PROJECTED_VARS {
            return Err(Error::CapExceeded(format!(
                "subformula with {} free variables exceeds the evaluator cap",
                self.nodes[id].free.len()
            )));
        }
        let pos = positions(&self.nodes[id].free, ctx)?;
        let projected = project_rows(rows, &pos);
        let key = (id, encode_rows(&projected));
        if let Some(&v) = self.memo.get(&key) {
            return Ok(v);
        }
        self.tick(1)?;
        let value = self.sat_projected(id, &projected)?;
        self.memo.insert(key, value);
        Ok(value)
    }

    /// Core dispatch; `rows` are over exactly the node's sorted free vars.
    fn sat_projected(&mut self, id: usize, rows: &[Vec<u8>]) -> Result<bool> {
        let formula = self.nodes[id].formula;
        let ctx = self.nodes[id].free.clone();
        if self.nodes[id].is_fo {
            return self.rows_all_fo(id, &ctx, rows);
        }
        match formula {
            Formula::Rel { .. } | Formula::Eq { .. } => unreachable!("literals are first-order"),
            Formula::Dep { .. }
            | Formula::Const { .. }
            | Formula::Excl { .. }
            | Formula::Incl { .. }
            | Formula::Anon { .. }
            | Formula::Indep { .. }
            | Formula::NE
            | Formula::Even { .. }
            | Formula::Half { .. }
            | Formula::Custom { .. } => atom_sat(self.st, formula, &ctx, rows, &self.atoms),
            Formula::And(a, b) => {
                let (a, b) = (self.id_of(a), self.id_of(b));
                Ok(self.sat(a, &ctx, rows)? && self.sat(b, &ctx, rows)?)
            }
            Formula::IntDisj(a, b) => {
                let (a, b) = (self.id_of(a), self.id_of(b));
                Ok(self.sat(a, &ctx, rows)? || self.sat(b, &ctx, rows)?)
            }
            Formula::IntImpl(a, b) => {
                let (a, b) = (self.id_of(a), self.id_of(b));
                if rows.len() > 25 {
                    return Err(Error::CapExceeded(
                        "intuitionistic implication over more than 25 rows".into(),
                    ));
                }
                self.tick(1u64 << rows.len())?;
                for sub in 0..1u64 << rows.len() {
                    let team = select(rows, sub);
                    if self.sat(a, &ctx, &team)? && !self.sat(b, &ctx, &team)? {
                        return Ok(false);
                    }
                }
                Ok(true)
            }
            Formula::Or(..) => self.or_solver(id, &ctx, rows),
            Formula::TensorAnd(a, b) => {
                let (a, b) = (self.id_of(a), self.id_of(b));
                self.tensor_and(a, b, &ctx, rows)
            }
            Formula::Exists(..) => self.exists_entry(id, &ctx, rows),
            Formula::Exists1(v, b) => {
                let b = self.id_of(b);
                let n = self.universe();
                for a in 0..n {
                    let (ctx2, rows2) = assign_const(&ctx, rows, v, a);
                    if self.sat(b, &ctx2, &rows2)? {
                        return Ok(true);
                    }
                }
                Ok(false)
            }
            Formula::Forall1(v, b) => {
                let b = self.id_of(b);
                let n = self.universe();
                for a in 0..n {
                    let (ctx2, rows2) = assign_const(&ctx, rows, v, a);
                    if !self.sat(b, &ctx2, &rows2)? {
                        return Ok(false);
                    }
                }
                Ok(true)
            }
            Formula::Delta1(v, b) => {
                let b = self.id_of(b);
                let vp = ctx.iter().position(|w| w == v).expect("free var present");
                let n = self.universe();
                for a in 0..n {
                    let slice: Vec<Vec<u8>> =
                        rows.iter().filter(|r| r[vp] == a).cloned().collect();
                    if !self.sat(b, &ctx, &slice)? {
                        return Ok(false);
                    }
                }
                Ok(true)
            }
            Formula::Forall(v, b) => {
                let b = self.id_of(b);
                let (ctx2, rows2) = extend_all(&ctx, rows, v, self.universe());
                self.sat(b, &ctx2, &rows2)
            }
            Formula::Lindstrom { class, vars, body } => {
                let body = self.id_of(body);
                let class = class.clone();
                let vars = vars.clone();
                self.lindstrom_search(&class, &vars, body, &ctx, rows)
            }
        }
    }

    fn rows_all_fo(&mut self, id: usize, ctx: &[String], rows: &[Vec<u8>]) -> Result<bool> {
        self.tick(rows.len() as u64)?;
        let mut ctx2 = ctx.to_vec();
        for r in rows {
            let mut row = r.clone();
            if !self.row_sat(id, &mut ctx2, &mut row)? {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// Classical pointwise satisfaction for first-order subformulas.
    fn row_sat(&mut self, id: usize, ctx: &mut Vec<String>, row: &mut Vec<u8>) -> Result<bool> {
        let formula = self.nodes[id].formula;
        match formula {
            Formula::Rel {
                negated,
                name,
                vars,
            } => {
                let pos = positions(vars, ctx)?;
                let tuple: Vec<u8> = pos.iter().map(|&p| row[p]).collect();
                Ok(self.st.holds(name, &tuple)? != *negated)
            }
            Formula::Eq {
                negated,
                left,
                right,
            } => {
                let pl = positions(std::slice::from_ref(left), ctx)?[0];
                let pr = positions(std::slice::from_ref(right), ctx)?[0];
                Ok((row[pl] == row[pr]) != *negated)
            }
            Formula::And(a, b) | Formula::TensorAnd(a, b) => {
                let (a, b) = (self.id_of(a), self.id_of(b));
                Ok(self.row_sat(a, ctx, row)? && self.row_sat(b, ctx, row)?)
            }
            Formula::Or(a, b) => {
                let (a, b) = (self.id_of(a), self.id_of(b));
                Ok(self.row_sat(a, ctx, row)? || self.row_sat(b, ctx, row)?)
            }
            Formula::IntImpl(a, b) => {
                let (a, b) = (self.id_of(a), self.id_of(b));
                Ok(!self.row_sat(a, ctx, row)? || self.row_sat(b, ctx, row)?)
            }
            Formula::Exists(v, b) | Formula::Forall(v, b) | Formula::Forall1(v, b) => {
                let want_all = !matches!(formula, Formula::Exists(..));
                let b = self.id_of(b);
                let n = self.universe();
                let existing = ctx.iter().position(|w| w == v);
                let (pos, added) = match existing {
                    Some(p) => (p, false),
                    None => {
                        ctx.push(v.clone());
                        row.push(0);
                        (ctx.len() - 1, true)
                    }
                };
                let saved = row[pos];
                let mut result = want_all;
                for a in 0..n {
                    row[pos] = a;
                    let r = self.row_sat(b, ctx, row)?;
                    if r != want_all {
                        result = r;
                        break;
                    }
                }
                row[pos] = saved;
                if added {
                    ctx.pop();
                    row.pop();
                }
                Ok(result)
            }
            Formula::Delta1(_, b) => {
                let b = self.id_of(b);
                self.row_sat(b, ctx, row)
            }
            _ => unreachable!("node marked first-order"),
        }
    }

    fn tensor_and(&mut self, a: usize, b: usize, ctx: &[String], rows: &[Vec<u8>]) -> Result<bool> {
        // witnesses U, V over the projected row space with U ∩ V = T
        let n = self.universe() as usize;
        let space = pow_checked(n, ctx.len())? as usize;
        let complement: Vec<Vec<u8>> = (0..space as u32)
            .map(|i| super::decode_row(i, n, ctx.len()))
            .filter(|r| !rows.contains(r))
            .collect();
        if complement.len() > 20 {
            return Err(Error::CapExceeded(
                "tensor conjunction over more than 20 candidate extensions".into(),
            ));
        }
        let c = complement.len();
        for u_extra in 0..1u32 << c {
            self.tick(1)?;
            let u_rows: Vec<Vec<u8>> = rows
                .iter()
                .cloned()
                .chain(
                    complement
                        .iter()
                        .enumerate()
                        .filter(|(i, _)| u_extra >> i & 1 == 1)
                        .map(|(_, r)| r.clone()),
                )
                .collect();
            if !self.sat(a, ctx, &u_rows)? {
                continue;
            }
            // V must avoid the extra rows of U
            let v_free: Vec<usize> = (0..c).filter(|i| u_extra >> i & 1 == 0).collect();
            for v_bits in 0..1u32 << v_free.len() {
                self.tick(1)?;
                let v_rows: Vec<Vec<u8>> = rows
                    .iter()
                    .cloned()
                    .chain(
                        v_free
                            .iter()
                            .enumerate()
                            .filter(|(j, _)| v_bits >> j & 1 == 1)
                            .map(|(_, &i)| complement[i].clone()),
                    )
                    .collect();
                if self.sat(b, ctx, &v_rows)? {
                    return Ok(true);
                }
            }
        }
        Ok(false)
    }

    // -- disjunction --------------------------------------------------------

    fn flatten_or<'f>(&self, f: &'f Formula, out: &mut Vec<&'f Formula>) {
        if let Formula::Or(a, b) = f {
            self.flatten_or(a, out);
            self.flatten_or(b, out);
        } else {
            out.push(f);
        }
    }

    fn flatten_and<'f>(&self, f: &'f Formula, out: &mut Vec<&'f Formula>) {
        if let Formula::And(a, b) = f {
            self.flatten_and(a, out);
            self.flatten_and(b, out);
        } else {
            out.push(f);
        }
    }

    fn or_solver(&mut self, id: usize, ctx: &[String], rows: &[Vec<u8>]) -> Result<bool> {
        let mut disjunct_forms = Vec::new();
        self.flatten_or(self.nodes[id].formula, &mut disjunct_forms);
        let mut disjuncts = Vec::with_capacity(disjunct_forms.len());
        for d in &disjunct_forms {
            disjuncts.push(self.analyze_disjunct(d, ctx)?);
        }

        // per-row admissibility under the flat parts
        let mut admissible: Vec<Vec<usize>> = Vec::with_capacity(rows.len());
        let mut ctx2 = ctx.to_vec();
        for r in rows {
            let mut adm = Vec::new();
            for (j, d) in disjuncts.iter().enumerate() {
                let mut pass = true;
                for &fid in &d.flat {
                    let mut row = r.clone();
                    if !self.row_sat(fid, &mut ctx2, &mut row)? {
                        pass = false;
                        break;
                    }
                }
                if pass {
                    adm.push(j);
                }
            }
            if adm.is_empty() {
                return Ok(false);
            }
            admissible.push(adm);
        }

        let residual_ix: Vec<usize> = (0..disjuncts.len())
            .filter(|&j| !disjuncts[j].residual.is_empty())
            .collect();
        if residual_ix.is_empty() {
            return Ok(true);
        }

        // required and optional branch cells
        let mut required: HashMap<usize, BTreeSet<Vec<u8>>> = HashMap::new();
        let mut optional: HashMap<usize, BTreeSet<Vec<u8>>> = HashMap::new();
        for j in &residual_ix {
            required.insert(*j, BTreeSet::new());
            optional.insert(*j, BTreeSet::new());
        }
        for (r, adm) in rows.iter().zip(&admissible) {
            let flat_cover = adm.iter().any(|&j| disjuncts[j].residual.is_empty());
            let rd: Vec<usize> = adm
                .iter()
                .copied()
                .filter(|&j| !disjuncts[j].residual.is_empty())
                .collect();
            for &j in &rd {
                let cell = project_cell(r, &disjuncts[j].cell_pos);
                if !flat_cover && rd.len() == 1 {
                    required.get_mut(&j).unwrap().insert(cell);
                } else if !(flat_cover && disjuncts[j].residual_dc) {
                    // a flat-covered row never enables a down-closed
                    // residual, and it needs no coverage there either
                    optional.get_mut(&j).unwrap().insert(cell);
                }
            }
        }
        for j in &residual_ix {
            let req = required[j].clone();
            let opt = optional.get_mut(j).unwrap();
            for c in req {
                opt.remove(&c);
            }
        }
        let total_optional: usize = residual_ix.iter().map(|j| optional[j].len()).sum();
        if total_optional > 18 {
            return self.or_exhaustive(id, ctx, rows);
        }

        let opt_lists: Vec<(usize, Vec<Vec<u8>>)> = residual_ix
            .iter()
            .map(|&j| (j, optional[&j].iter().cloned().collect::<Vec<_>>()))
            .collect();
        let combos: u64 = 1u64 << total_optional;
        self.tick(combos)?;
        'combo: for combo in 0..combos {
            let mut cells: HashMap<usize, BTreeSet<Vec<u8>>> = HashMap::new();
            let mut bit = 0;
            for (j, opts) in &opt_lists {
                let mut set = required[j].clone();
                for c in opts {
                    if combo >> bit & 1 == 1 {
                        set.insert(c.clone());
                    }
                    bit += 1;
                }
                cells.insert(*j, set);
            }
            // coverage: every row not flat-covered reaches a chosen cell
            for (r, adm) in rows.iter().zip(&admissible) {
                let flat_cover = adm.iter().any(|&j| disjuncts[j].residual.is_empty());
                if flat_cover {
                    continue;
                }
                let ok = adm.iter().any(|&j| {
                    cells
                        .get(&j)
                        .map_or(false, |cs| cs.contains(&project_cell(r, &disjuncts[j].cell_pos)))
                });
                if !ok {
                    continue 'combo;
                }
            }
            // every residual disjunct must hold on its chosen part
            let mut all_ok = true;
            for &j in &residual_ix {
                let team: Vec<Vec<u8>> = cells[&j].iter().cloned().collect();
                let d_cell_vars = disjuncts[j].cell_vars.clone();
                for rid in disjuncts[j].residual.clone() {
                    if !self.sat(rid, &d_cell_vars, &team)? {
                        all_ok = false;
                        break;
                    }
                }
                if !all_ok {
                    break;
                }
            }
            if all_ok {
                return Ok(true);
            }
        }
        Ok(false)
    }

    /// Exhaustive lax split of a binary disjunction, with memoized child
    /// queries.
    fn or_exhaustive(&mut self, id: usize, ctx: &[String], rows: &[Vec<u8>]) -> Result<bool> {
        let Formula::Or(a, b) = self.nodes[id].formula else {
            unreachable!()
        };
        let (a, b) = (self.id_of(a), self.id_of(b));
        if rows.len() > 25 {
            return Err(Error::CapExceeded(
                "lax split search over more than 25 rows".into(),
            ));
        }
        let m = rows.len();
        for u_mask in 0..1u64 << m {
            self.tick(1)?;
            let u_rows = select(rows, u_mask);
            if !self.sat(a, ctx, &u_rows)? {
                continue;
            }
            let rest = !u_mask & ((1u64 << m) - 1);
            let u_bits: Vec<usize> = (0..m).filter(|i| u_mask >> i & 1 == 1).collect();
            for w in 0..1u64 << u_bits.len() {
                self.tick(1)?;
                let mut v_mask = rest;
                for (j, &i) in u_bits.iter().enumerate() {
                    if w >> j & 1 == 1 {
                        v_mask |= 1 << i;
                    }
                }
                if self.sat(b, ctx, &select(rows, v_mask))? {
                    return Ok(true);
                }
            }
        }
        Ok(false)
    }

    fn analyze_disjunct(&self, d: &Formula, ctx: &[String]) -> Result<Disjunct> {
        let mut conjuncts = Vec::new();
        self.flatten_and(d, &mut conjuncts);
        let mut flat = Vec::new();
        let mut residual = Vec::new();
        for c in conjuncts {
            let cid = self.id_of(c);
            if self.nodes[cid].is_fo {
                flat.push(cid);
            } else {
                residual.push(cid);
            }
        }
        let mut cell_vars: BTreeSet<String> = BTreeSet::new();
        for &rid in &residual {
            cell_vars.extend(self.nodes[rid].free.iter().cloned());
        }
        let cell_vars: Vec<String> = cell_vars.into_iter().collect();
        let cell_pos = positions(&cell_vars, ctx)?;
        let residual_dc = residual.iter().all(|&rid| self.nodes[rid].down_closed);
        Ok(Disjunct {
            flat,
            residual,
            residual_dc,
            cell_vars,
            cell_pos,
        })
    }

    // -- existential blocks ---------------------------------------------------

    fn exists_entry(&mut self, id: usize, ctx: &[String], rows: &[Vec<u8>]) -> Result<bool> {
        // peel nested distinct existentials
        let mut block: Vec<String> = Vec::new();
        let mut body = self.nodes[id].formula;
        while let Formula::Exists(v, b) = body {
            if block.contains(v) {
                break;
            }
            block.push(v.clone());
            body = b;
        }
        let mut conjunct_forms = Vec::new();
        self.flatten_and(body, &mut conjunct_forms);
        let mut defer_or: HashSet<usize> = HashSet::new();
        loop {
            let solver = BlockSolver::build(self, ctx, &block, &conjunct_forms, &defer_or)?;
            match solver.solve(self, rows) {
                Ok(v) => return Ok(v),
                Err(Error::Invalid(msg)) if msg.starts_with(AMBIGUOUS_ROUTE) => {
                    let cix: usize = msg[AMBIGUOUS_ROUTE.len()..].parse().unwrap();
                    defer_or.insert(cix);
                }
                Err(e) => return Err(e),
            }
        }
    }

    fn lindstrom_search(
        &mut self,
        class_name: &str,
        vars: &[String],
        body: usize,
        ctx: &[String],
        rows: &[Vec<u8>],
    ) -> Result<bool> {
        let n = self.st.universe();
        let r = vars.len();
        let class = self
            .classes
            .get(class_name)
            .ok_or_else(|| Error::UnknownClass(class_name.to_string()))?
            .clone();
        if class.arity != r {
            return Err(Error::Arity(format!(
                "class `{class_name}` has arity {}, applied to {r} variables",
                class.arity
            )));
        }
        let count = pow_checked(n, r)? as usize;
        if count > 12 {
            return Err(Error::CapExceeded(
                "quantifier relation space exceeds the enumeration cap".into(),
            ));
        }
        let admissible: Vec<u32> = (0..1u32 << count)
            .filter(|&m| class.contains(self.st, count, m))
            .collect();
        if admissible.is_empty() {
            return Ok(false);
        }
        // after projection, overwriting and fresh extension coincide
        let mut ctx2: Vec<String> = ctx.to_vec();
        ctx2.extend(vars.iter().cloned());
        let tuples: Vec<Vec<u8>> = (0..count as u32)
            .map(|i| super::decode_row(i, n, r))
            .collect();
        let mut visited: HashSet<(usize, Vec<u128>)> = HashSet::new();
        self.lind_dfs(rows, 0, &Vec::new(), &admissible, &tuples, body, &ctx2, &mut visited)
    }

    #[allow(clippy::too_many_arguments)]
    fn lind_dfs(
        &mut self,
        rows: &[Vec<u8>],
        i: usize,
        acc: &Vec<Vec<u8>>,
        admissible: &[u32],
        tuples: &[Vec<u8>],
        body: usize,
        ctx2: &[String],
        visited: &mut HashSet<(usize, Vec<u128>)>,
    ) -> Result<bool> {
        self.tick(1)?;
        if i == rows.len() {
            let mut team = acc.clone();
            team.sort_unstable();
            team.dedup();
            return self.sat(body, ctx2, &team);
        }
        let mut canon = acc.clone();
        canon.sort_unstable();
        canon.dedup();
        if !visited.insert((i, encode_rows(&canon))) {
            return Ok(false);
        }
        for &rel in admissible {
            let mut next = acc.clone();
            for (t, tuple) in tuples.iter().enumerate() {
                if rel >> t & 1 == 1 {
                    let mut row = rows[i].clone();
                    row.extend_from_slice(tuple);
                    next.push(row);
                }
            }
            if self.lind_dfs(rows, i + 1, &next, admissible, tuples, body, ctx2, visited)? {
                return Ok(true);
            }
        }
        Ok(false)
    }
}

struct Disjunct {
    flat: Vec<usize>,
    residual: Vec<usize>,
    residual_dc: bool,
    cell_vars: Vec<String>,
    cell_pos: Vec<usize>,
}

// ---------------------------------------------------------------------------
// existential block search
// ---------------------------------------------------------------------------

/// Classification of one body conjunct of an existential block.
enum Conjunct {
    /// First-order: checked on every extended row as it appears.
    Flat(usize),
    /// `dep(x̄; u)` with `x̄` base variables and `u` a block variable: `u`
    /// is one shared value per `x̄`-class.
    Forced { key_pos: Vec<usize>, var_ix: usize },
    /// Violation-monotone conjuncts re-checked incrementally.
    IncrementalDep { key_pos: Vec<usize>, val_pos: usize },
    IncrementalConst { pos: Vec<usize> },
    IncrementalExcl { xs_pos: Vec<usize>, ys_pos: Vec<usize> },
    /// Disjunction with per-row forced routing; branch residuals are
    /// checked on accumulated branch cells.
    Route { branches: Vec<RouteBranch> },
    /// Anything else: checked at the leaves on its accumulated projected
    /// cells.
    Deferred { node: usize, cell_pos: Vec<usize> },
}

struct RouteBranch {
    flat: Vec<usize>,
    /// (residual node, positions of its sorted free vars in the extended
    /// context)
    residual: Vec<(usize, Vec<usize>)>,
    fully_flat: bool,
    residual_dc: bool,
}

struct BlockSolver {
    block_len: usize,
    /// Extended context: the block node's sorted free vars, then the block
    /// vars in prefix order.
    ext_ctx: Vec<String>,
    base_len: usize,
    conjuncts: Vec<Conjunct>,
    /// Positions (in `ext_ctx`) of block vars pinned by a Forced conjunct.
    forced_vars: Vec<usize>,
    /// Positions of block vars chosen as joint per-row value sets.
    free_vars: Vec<usize>,
    universe: u8,
}

#[derive(Clone, Default)]
struct SearchState {
    /// Per Forced conjunct: class key → pinned value.
    tables: Vec<BTreeMap<Vec<u8>, u8>>,
    dep_tables: Vec<BTreeMap<Vec<u8>, u8>>,
    const_seen: Vec<Option<Vec<u8>>>,
    excl_sets: Vec<(BTreeSet<Vec<u8>>, BTreeSet<Vec<u8>>)>,
    /// Per Route conjunct, per branch: residual node → accumulated cells.
    route_cells: Vec<Vec<BTreeMap<usize, BTreeSet<Vec<u8>>>>>,
    deferred: Vec<BTreeSet<Vec<u8>>>,
}

fn push_bytes(out: &mut Vec<u64>, bytes: &[u8]) {
    out.push(bytes.len() as u64);
    for chunk in bytes.chunks(8) {
        let mut w = 0u64;
        for (i, &b) in chunk.iter().enumerate() {
            w |= (b as u64) << (8 * i);
        }
        out.push(w);
    }
}

impl SearchState {
    /// Full structural encoding used as an exact visited-state key.
    fn canonical(&self) -> Vec<u64> {
        let mut out = Vec::new();
        for t in &self.tables {
            out.push(0xA0);
            for (k, v) in t {
                push_bytes(&mut out, k);
                out.push(*v as u64);
            }
        }
        for t in &self.dep_tables {
            out.push(0xA1);
            for (k, v) in t {
                push_bytes(&mut out, k);
                out.push(*v as u64);
            }
        }
        for c in &self.const_seen {
            out.push(0xA2);
            if let Some(t) = c {
                push_bytes(&mut out, t);
            }
        }
        for (l, r) in &self.excl_sets {
            out.push(0xA3);
            for t in l {
                push_bytes(&mut out, t);
            }
            out.push(0xA4);
            for t in r {
                push_bytes(&mut out, t);
            }
        }
        for branches in &self.route_cells {
            out.push(0xA5);
            for b in branches {
                out.push(0xA6);
                for (rid, cells) in b {
                    out.push(*rid as u64);
                    for c in cells {
                        push_bytes(&mut out, c);
                    }
                    out.push(0xA7);
                }
            }
        }
        for d in &self.deferred {
            out.push(0xA8);
            for c in d {
                push_bytes(&mut out, c);
            }
        }
        out
    }
}

impl BlockSolver {
    fn build(
        ev: &Evaluator,
        ctx: &[String],
        block: &[String],
        conjunct_forms: &[&Formula],
        defer_or: &HashSet<usize>,
    ) -> Result<BlockSolver> {
        let mut ext_ctx = ctx.to_vec();
        for v in block {
            ext_ctx.push(v.clone());
        }
        let base_len = ctx.len();

        let mut conjuncts = Vec::new();
        let mut forced: BTreeSet<usize> = BTreeSet::new();
        for (cix, c) in conjunct_forms.iter().enumerate() {
            let cid = ev.id_of(c);
            if ev.nodes[cid].is_fo {
                conjuncts.push(Conjunct::Flat(cid));
                continue;
            }
            match c {
                Formula::Dep { xs, y } => {
                    let y_block = block.iter().position(|b| b == y);
                    let xs_in_block = xs.iter().any(|x| block.contains(x));
                    if let (Some(var_ix), false) = (y_block, xs_in_block) {
                        if forced.insert(base_len + var_ix) {
                            conjuncts.push(Conjunct::Forced {
                                key_pos: positions(xs, &ext_ctx)?,
                                var_ix: base_len + var_ix,
                            });
                            continue;
                        }
                    }
                    conjuncts.push(Conjunct::IncrementalDep {
                        key_pos: positions(xs, &ext_ctx)?,
                        val_pos: positions(std::slice::from_ref(y), &ext_ctx)?[0],
                    });
                }
                Formula::Const { xs } => {
                    if xs.len() == 1 {
                        if let Some(var_ix) = block.iter().position(|b| b == &xs[0]) {
                            if forced.insert(base_len + var_ix) {
                                conjuncts.push(Conjunct::Forced {
                                    key_pos: Vec::new(),
                                    var_ix: base_len + var_ix,
                                });
                                continue;
                            }
                        }
                    }
                    conjuncts.push(Conjunct::IncrementalConst {
                        pos: positions(xs, &ext_ctx)?,
                    });
                }
                Formula::Excl { xs, ys } => {
                    conjuncts.push(Conjunct::IncrementalExcl {
                        xs_pos: positions(xs, &ext_ctx)?,
                        ys_pos: positions(ys, &ext_ctx)?,
                    });
                }
                Formula::Or(..) if !defer_or.contains(&cix) => {
                    let mut ds = Vec::new();
                    ev.flatten_or(c, &mut ds);
                    let mut branches = Vec::new();
                    for d in ds {
                        let mut cs = Vec::new();
                        ev.flatten_and(d, &mut cs);
                        let mut flat = Vec::new();
                        let mut residual = Vec::new();
                        for cc in cs {
                            let ccid = ev.id_of(cc);
                            if ev.nodes[ccid].is_fo {
                                flat.push(ccid);
                            } else {
                                residual
                                    .push((ccid, positions(&ev.nodes[ccid].free, &ext_ctx)?));
                            }
                        }
                        let fully_flat = residual.is_empty();
                        let residual_dc =
                            residual.iter().all(|(rid, _)| ev.nodes[*rid].down_closed);
                        branches.push(RouteBranch {
                            flat,
                            residual,
                            fully_flat,
                            residual_dc,
                        });
                    }
                    conjuncts.push(Conjunct::Route { branches });
                }
                other => {
                    let cid2 = ev.id_of(other);
                    conjuncts.push(Conjunct::Deferred {
                        node: cid2,
                        cell_pos: positions(&ev.nodes[cid2].free, &ext_ctx)?,
                    });
                }
            }
        }
        let forced_vars: Vec<usize> = forced.iter().copied().collect();
        let free_vars: Vec<usize> = (base_len..base_len + block.len())
            .filter(|p| !forced.contains(p))
            .collect();
        Ok(BlockSolver {
            block_len: block.len(),
            ext_ctx,
            base_len,
            conjuncts,
            forced_vars,
            free_vars,
            universe: ev.universe(),
        })
    }

    fn fresh_state(&self) -> SearchState {
        SearchState {
            tables: self.conjuncts.iter().map(|_| BTreeMap::new()).collect(),
            dep_tables: self.conjuncts.iter().map(|_| BTreeMap::new()).collect(),
            const_seen: self.conjuncts.iter().map(|_| None).collect(),
            excl_sets: self
                .conjuncts
                .iter()
                .map(|_| (BTreeSet::new(), BTreeSet::new()))
                .collect(),
            route_cells: self
                .conjuncts
                .iter()
                .map(|c| match c {
                    Conjunct::Route { branches } => {
                        branches.iter().map(|_| BTreeMap::new()).collect()
                    }
                    _ => Vec::new(),
                })
                .collect(),
            deferred: self.conjuncts.iter().map(|_| BTreeSet::new()).collect(),
        }
    }

    fn solve(&self, ev: &mut Evaluator, rows: &[Vec<u8>]) -> Result<bool> {
        let n = self.universe as usize;
        let mut free_space: u64 = 1;
        for _ in &self.free_vars {
            free_space *= n as u64;
        }
        if free_space > 16 {
            return Err(Error::CapExceeded(
                "existential block value space exceeds the enumeration cap".into(),
            ));
        }
        let state = self.fresh_state();
        let mut visited: HashSet<(usize, Vec<u64>)> = HashSet::new();
        self.dfs(ev, rows, 0, &state, free_space as usize, &mut visited)
    }

    fn dfs(
        &self,
        ev: &mut Evaluator,
        rows: &[Vec<u8>],
        i: usize,
        state: &SearchState,
        free_space: usize,
        visited: &mut HashSet<(usize, Vec<u64>)>,
    ) -> Result<bool> {
        ev.tick(1)?;
        if i == rows.len() {
            return self.leaf_check(ev, state);
        }
        if !visited.insert((i, state.canonical())) {
            return Ok(false);
        }
        let n = self.universe;
        // forced vars already pinned by their class tables, plus the ones
        // this row pins for the first time
        let mut pinned: Vec<Option<u8>> = vec![None; self.block_len];
        let mut unpinned: Vec<(usize, Vec<u8>)> = Vec::new();
        for (cix, c) in self.conjuncts.iter().enumerate() {
            if let Conjunct::Forced { key_pos, var_ix } = c {
                let key: Vec<u8> = key_pos.iter().map(|&p| rows[i][p]).collect();
                match state.tables[cix].get(&key) {
                    Some(&v) => pinned[*var_ix - self.base_len] = Some(v),
                    None => unpinned.push((cix, key)),
                }
            }
        }
        let mut value_combo = vec![0u8; unpinned.len()];
        let mut tried: HashSet<Vec<u64>> = HashSet::new();
        loop {
            let mut trial = pinned.clone();
            for (v, (cix, _)) in value_combo.iter().zip(&unpinned) {
                let Conjunct::Forced { var_ix, .. } = &self.conjuncts[*cix] else {
                    unreachable!()
                };
                trial[*var_ix - self.base_len] = Some(*v);
            }
            let forced_vals: Vec<(usize, u8)> = self
                .forced_vars
                .iter()
                .map(|&p| (p, trial[p - self.base_len].expect("forced var pinned")))
                .collect();
            // nonempty joint value sets for the free block vars
            let max_mask: u64 = 1u64 << free_space;
            for set_mask in 1..max_mask {
                ev.tick(1)?;
                let mut st2 = state.clone();
                let mut ok = true;
                for t in 0..free_space as u64 {
                    if set_mask >> t & 1 == 0 {
                        continue;
                    }
                    let mut ext = rows[i].to_vec();
                    ext.resize(self.ext_ctx.len(), 0);
                    for &(p, v) in &forced_vals {
                        ext[p] = v;
                    }
                    let mut rem = t as usize;
                    for &p in &self.free_vars {
                        ext[p] = (rem % n as usize) as u8;
                        rem /= n as usize;
                    }
                    if !self.absorb_row(ev, &mut st2, &ext)? {
                        ok = false;
                        break;
                    }
                }
                if ok {
                    for (v, (cix, key)) in value_combo.iter().zip(&unpinned) {
                        st2.tables[*cix].insert(key.clone(), *v);
                    }
                    if tried.insert(st2.canonical())
                        && self.dfs(ev, rows, i + 1, &st2, free_space, visited)?
                    {
                        return Ok(true);
                    }
                }
            }
            // next combination of values for the newly pinned vars
            let mut pos = 0;
            loop {
                if pos == unpinned.len() {
                    return Ok(false);
                }
                value_combo[pos] += 1;
                if value_combo[pos] < n {
                    break;
                }
                value_combo[pos] = 0;
                pos += 1;
            }
        }
    }

    /// Integrate one extended row into the incremental state; false when a
    /// monotone conjunct is already violated.
    fn absorb_row(&self, ev: &mut Evaluator, state: &mut SearchState, ext: &[u8]) -> Result<bool> {
        for (cix, c) in self.conjuncts.iter().enumerate() {
            match c {
                Conjunct::Flat(fid) => {
                    let mut ctx2 = self.ext_ctx.clone();
                    let mut row = ext.to_vec();
                    if !ev.row_sat(*fid, &mut ctx2, &mut row)? {
                        return Ok(false);
                    }
                }
                Conjunct::Forced { .. } => {}
                Conjunct::IncrementalDep { key_pos, val_pos } => {
                    let key: Vec<u8> = key_pos.iter().map(|&p| ext[p]).collect();
                    let val = ext[*val_pos];
                    match state.dep_tables[cix].get(&key) {
                        Some(&v) if v != val => return Ok(false),
                        Some(_) => {}
                        None => {
                            state.dep_tables[cix].insert(key, val);
                        }
                    }
                }
                Conjunct::IncrementalConst { pos } => {
                    let tuple: Vec<u8> = pos.iter().map(|&p| ext[p]).collect();
                    match &state.const_seen[cix] {
                        Some(t) if t != &tuple => return Ok(false),
                        Some(_) => {}
                        None => state.const_seen[cix] = Some(tuple),
                    }
                }
                Conjunct::IncrementalExcl { xs_pos, ys_pos } => {
                    let xs: Vec<u8> = xs_pos.iter().map(|&p| ext[p]).collect();
                    let ys: Vec<u8> = ys_pos.iter().map(|&p| ext[p]).collect();
                    if xs == ys
                        || state.excl_sets[cix].1.contains(&xs)
                        || state.excl_sets[cix].0.contains(&ys)
                    {
                        return Ok(false);
                    }
                    state.excl_sets[cix].0.insert(xs);
                    state.excl_sets[cix].1.insert(ys);
                }
                Conjunct::Route { branches } => {
                    let mut adm: Vec<usize> = Vec::new();
                    for (j, b) in branches.iter().enumerate() {
                        let mut pass = true;
                        for &fid in &b.flat {
                            let mut ctx2 = self.ext_ctx.clone();
                            let mut row = ext.to_vec();
                            if !ev.row_sat(fid, &mut ctx2, &mut row)? {
                                pass = false;
                                break;
                            }
                        }
                        if pass {
                            adm.push(j);
                        }
                    }
                    if adm.is_empty() {
                        return Ok(false);
                    }
                    let flat_cover = adm.iter().any(|&j| branches[j].fully_flat);
                    let rd: Vec<usize> = adm
                        .iter()
                        .copied()
                        .filter(|&j| !branches[j].fully_flat)
                        .collect();
                    if flat_cover {
                        if !rd.iter().all(|&j| branches[j].residual_dc) {
                            return Err(Error::Invalid(format!("{AMBIGUOUS_ROUTE}{cix}")));
                        }
                    } else if rd.len() == 1 {
                        let j = rd[0];
                        for (rid, rpos) in &branches[j].residual {
                            let cell: Vec<u8> = rpos.iter().map(|&p| ext[p]).collect();
                            state.route_cells[cix][j]
                                .entry(*rid)
                                .or_default()
                                .insert(cell);
                        }
                    } else {
                        return Err(Error::Invalid(format!("{AMBIGUOUS_ROUTE}{cix}")));
                    }
                }
                Conjunct::Deferred { cell_pos, .. } => {
                    let cell: Vec<u8> = cell_pos.iter().map(|&p| ext[p]).collect();
                    state.deferred[cix].insert(cell);
                }
            }
        }
        Ok(true)
    }

    fn leaf_check(&self, ev: &mut Evaluator, state: &SearchState) -> Result<bool> {
        for (cix, c) in self.conjuncts.iter().enumerate() {
            match c {
                Conjunct::Route { branches } => {
                    for (j, b) in branches.iter().enumerate() {
                        for (rid, _) in &b.residual {
                            let team: Vec<Vec<u8>> = state.route_cells[cix][j]
                                .get(rid)
                                .map(|cs| cs.iter().cloned().collect())
                                .unwrap_or_default();
                            let free = ev.nodes[*rid].free.clone();
                            if !ev.sat(*rid, &free, &team)? {
                                return Ok(false);
                            }
                        }
                    }
                }
                Conjunct::Deferred { node, .. } => {
                    let team: Vec<Vec<u8>> = state.deferred[cix].iter().cloned().collect();
                    let free = ev.nodes[*node].free.clone();
                    if !ev.sat(*node, &free, &team)? {
                        return Ok(false);
                    }
                }
                _ => {}
            }
        }
        Ok(true)
    }
}

// ---------------------------------------------------------------------------
// reference evaluator
// ---------------------------------------------------------------------------

/// Literal clause-by-clause satisfaction with no projection and no memo;
/// exponential, budget-guarded.
pub fn naive_satisfies(
    st: &Structure,
    team: &Team,
    formula: &Formula,
    budget: &SearchBudget,
) -> Result<bool> {
    let mut clock = BudgetClock::start(budget);
    let classes = standard_classes(1);
    let atoms = AtomRegistry::default();
    let mut ctx = team.vars().to_vec();
    let mut rows = team.rows().to_vec();
    naive_rec(st, &mut ctx, &mut rows, formula, &mut clock, &classes, &atoms)
}

fn naive_tick(clock: &mut BudgetClock, n: u64) -> Result<()> {
    if !clock.tick(n) {
        return Err(Error::BudgetExhausted);
    }
    Ok(())
}

fn naive_rec(
    st: &Structure,
    ctx: &mut Vec<String>,
    rows: &mut Vec<Vec<u8>>,
    f: &Formula,
    clock: &mut BudgetClock,
    classes: &ClassRegistry,
    atoms: &AtomRegistry,
) -> Result<bool> {
    naive_tick(clock, 1)?;
    match f {
        Formula::Rel { .. } | Formula::Eq { .. } => {
            for r in rows.iter() {
                if !naive_row_literal(st, ctx, r, f)? {
                    return Ok(false);
                }
            }
            Ok(true)
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
        | Formula::Custom { .. } => atom_sat(st, f, ctx, rows, atoms),
        Formula::And(a, b) => Ok(naive_rec(st, ctx, rows, a, clock, classes, atoms)?
            && naive_rec(st, ctx, rows, b, clock, classes, atoms)?),
        Formula::IntDisj(a, b) => Ok(naive_rec(st, ctx, rows, a, clock, classes, atoms)?
            || naive_rec(st, ctx, rows, b, clock, classes, atoms)?),
        Formula::Or(a, b) => {
            let m = rows.len();
            if m > 25 {
                return Err(Error::CapExceeded("split search over 25 rows".into()));
            }
            for u_mask in 0..1u64 << m {
                naive_tick(clock, 1)?;
                let mut u_rows = select(rows, u_mask);
                if !naive_rec(st, ctx, &mut u_rows, a, clock, classes, atoms)? {
                    continue;
                }
                let rest = !u_mask & ((1u64 << m) - 1);
                let u_bits: Vec<usize> = (0..m).filter(|i| u_mask >> i & 1 == 1).collect();
                for w in 0..1u64 << u_bits.len() {
                    naive_tick(clock, 1)?;
                    let mut v_mask = rest;
                    for (j, &i) in u_bits.iter().enumerate() {
                        if w >> j & 1 == 1 {
                            v_mask |= 1 << i;
                        }
                    }
                    let mut v_rows = select(rows, v_mask);
                    if naive_rec(st, ctx, &mut v_rows, b, clock, classes, atoms)? {
                        return Ok(true);
                    }
                }
            }
            Ok(false)
        }
        Formula::TensorAnd(a, b) => {
            let n = st.universe();
            let space = pow_checked(n, ctx.len())? as usize;
            let complement: Vec<Vec<u8>> = (0..space as u32)
                .map(|i| super::decode_row(i, n, ctx.len()))
                .filter(|r| !rows.contains(r))
                .collect();
            if complement.len() > 16 {
                return Err(Error::CapExceeded(
                    "tensor conjunction search too large".into(),
                ));
            }
            let c = complement.len();
            for u_extra in 0..1u32 << c {
                naive_tick(clock, 1)?;
                let mut u_rows: Vec<Vec<u8>> = rows.clone();
                u_rows.extend(
                    complement
                        .iter()
                        .enumerate()
                        .filter(|(i, _)| u_extra >> i & 1 == 1)
                        .map(|(_, r)| r.clone()),
                );
                if !naive_rec(st, ctx, &mut u_rows, a, clock, classes, atoms)? {
                    continue;
                }
                let v_free: Vec<usize> = (0..c).filter(|i| u_extra >> i & 1 == 0).collect();
                for v_bits in 0..1u32 << v_free.len() {
                    naive_tick(clock, 1)?;
                    let mut v_rows: Vec<Vec<u8>> = rows.clone();
                    v_rows.extend(
                        v_free
                            .iter()
                            .enumerate()
                            .filter(|(j, _)| v_bits >> j & 1 == 1)
                            .map(|(_, &i)| complement[i].clone()),
                    );
                    if naive_rec(st, ctx, &mut v_rows, b, clock, classes, atoms)? {
                        return Ok(true);
                    }
                }
            }
            Ok(false)
        }
        Formula::IntImpl(a, b) => {
            let m = rows.len();
            if m > 25 {
                return Err(Error::CapExceeded("subteam search over 25 rows".into()));
            }
            naive_tick(clock, 1u64 << m)?;
            for sub in 0..1u64 << m {
                let mut team = select(rows, sub);
                if naive_rec(st, ctx, &mut team, a, clock, classes, atoms)?
                    && !naive_rec(st, ctx, &mut team, b, clock, classes, atoms)?
                {
                    return Ok(false);
                }
            }
            Ok(true)
        }
        Formula::Exists(v, b) => {
            let options: Vec<u8> = (0..st.universe() as u8).collect();
            naive_exists_dfs(
                st,
                ctx,
                rows,
                0,
                &mut Vec::new(),
                v,
                &options,
                b,
                clock,
                classes,
                atoms,
            )
        }
        Formula::Forall(v, b) => {
            let (mut ctx2, mut rows2) = extend_all(ctx, rows, v, st.universe() as u8);
            naive_rec(st, &mut ctx2, &mut rows2, b, clock, classes, atoms)
        }
        Formula::Exists1(v, b) => {
            for a in 0..st.universe() as u8 {
                let (mut ctx2, mut rows2) = assign_const(ctx, rows, v, a);
                if naive_rec(st, &mut ctx2, &mut rows2, b, clock, classes, atoms)? {
                    return Ok(true);
                }
            }
            Ok(false)
        }
        Formula::Forall1(v, b) => {
            for a in 0..st.universe() as u8 {
                let (mut ctx2, mut rows2) = assign_const(ctx, rows, v, a);
                if !naive_rec(st, &mut ctx2, &mut rows2, b, clock, classes, atoms)? {
                    return Ok(false);
                }
            }
            Ok(true)
        }
        Formula::Delta1(v, b) => {
            let vp = ctx
                .iter()
                .position(|w| w == v)
                .ok_or_else(|| Error::UnboundVariable(v.clone()))?;
            for a in 0..st.universe() as u8 {
                let mut slice: Vec<Vec<u8>> = rows.iter().filter(|r| r[vp] == a).cloned().collect();
                if !naive_rec(st, ctx, &mut slice, b, clock, classes, atoms)? {
                    return Ok(false);
                }
            }
            Ok(true)
        }
        Formula::Lindstrom { class, vars, body } => {
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
            let n = st.universe();
            let count = pow_checked(n, vars.len())? as usize;
            if count > 12 {
                return Err(Error::CapExceeded(
                    "quantifier relation space too large".into(),
                ));
            }
            let admissible: Vec<u32> = (0..1u32 << count)
                .filter(|&m| cls.contains(st, count, m))
                .collect();
            let tuples: Vec<Vec<u8>> = (0..count as u32)
                .map(|i| super::decode_row(i, n, vars.len()))
                .collect();
            let mut ctx2 = ctx.clone();
            for v in vars {
                if ctx2.contains(v) {
                    return Err(Error::Invalid(format!(
                        "quantified variable `{v}` shadows a team variable"
                    )));
                }
                ctx2.push(v.clone());
            }
            naive_lind_dfs(
                st,
                &mut ctx2,
                rows,
                0,
                &mut Vec::new(),
                &admissible,
                &tuples,
                body,
                clock,
                classes,
                atoms,
            )
        }
    }
}

fn naive_row_literal(st: &Structure, ctx: &[String], row: &[u8], f: &Formula) -> Result<bool> {
    match f {
        Formula::Rel {
            negated,
            name,
            vars,
        } => {
            let pos = positions(vars, ctx)?;
            let tuple: Vec<u8> = pos.iter().map(|&p| row[p]).collect();
            Ok(st.holds(name, &tuple)? != *negated)
        }
        Formula::Eq {
            negated,
            left,
            right,
        } => {
            let pl = positions(std::slice::from_ref(left), ctx)?[0];
            let pr = positions(std::slice::from_ref(right), ctx)?[0];
            Ok((row[pl] == row[pr]) != *negated)
        }
        _ => unreachable!(),
    }
}

#[allow(clippy::too_many_arguments)]
fn naive_exists_dfs(
    st: &Structure,
    ctx: &mut Vec<String>,
    rows: &mut Vec<Vec<u8>>,
    i: usize,
    acc: &mut Vec<Vec<u8>>,
    v: &str,
    options: &[u8],
    body: &Formula,
    clock: &mut BudgetClock,
    classes: &ClassRegistry,
    atoms: &AtomRegistry,
) -> Result<bool> {
    naive_tick(clock, 1)?;
    if i == rows.len() {
        let existing = ctx.iter().position(|w| w == v);
        let mut ctx2 = ctx.clone();
        if existing.is_none() {
            ctx2.push(v.to_string());
        }
        let mut team = acc.clone();
        team.sort_unstable();
        team.dedup();
        return naive_rec(st, &mut ctx2, &mut team, body, clock, classes, atoms);
    }
    let k = options.len();
    let existing = ctx.iter().position(|w| w == v);
    for set in 1u32..1 << k {
        naive_tick(clock, 1)?;
        let before = acc.len();
        for (j, &a) in options.iter().enumerate() {
            if set >> j & 1 == 1 {
                let mut r = rows[i].clone();
                match existing {
                    Some(p) => r[p] = a,
                    None => r.push(a),
                }
                acc.push(r);
            }
        }
        if naive_exists_dfs(st, ctx, rows, i + 1, acc, v, options, body, clock, classes, atoms)? {
            return Ok(true);
        }
        acc.truncate(before);
    }
    Ok(false)
}

#[allow(clippy::too_many_arguments)]
fn naive_lind_dfs(
    st: &Structure,
    ctx2: &mut Vec<String>,
    rows: &mut Vec<Vec<u8>>,
    i: usize,
    acc: &mut Vec<Vec<u8>>,
    admissible: &[u32],
    tuples: &[Vec<u8>],
    body: &Formula,
    clock: &mut BudgetClock,
    classes: &ClassRegistry,
    atoms: &AtomRegistry,
) -> Result<bool> {
    naive_tick(clock, 1)?;
    if i == rows.len() {
        let mut team = acc.clone();
        team.sort_unstable();
        team.dedup();
        return naive_rec(st, ctx2, &mut team, body, clock, classes, atoms);
    }
    for &rel in admissible {
        let before = acc.len();
        for (t, tuple) in tuples.iter().enumerate() {
            if rel >> t & 1 == 1 {
                let mut r = rows[i].clone();
                r.extend_from_slice(tuple);
                acc.push(r);
            }
        }
        if naive_lind_dfs(
            st, ctx2, rows, i + 1, acc, admissible, tuples, body, clock, classes, atoms,
        )? {
            return Ok(true);
        }
        acc.truncate(before);
    }
    Ok(false)
}

/// One-shot satisfaction with a fresh evaluator.
pub fn satisfies(st: &Structure, team: &Team, formula: &Formula, budget: &SearchBudget) -> Result<bool> {
    Evaluator::new(st, formula, budget).satisfies(team)
}
