//! Isomorphism-closed classes of `(structure, relation)` pairs backing
//! Lindström quantifiers. A relation `R ⊆ M^r` is passed as a bitmask over
//! tuple indices (same mixed-radix encoding as team rows).

use super::Structure;
use std::collections::HashMap;
use std::sync::Arc;

type ClassPred = Arc<dyn Fn(&Structure, usize, u32) -> bool + Send + Sync>;

/// A quantifier class: name, arity and a decidable predicate over
/// `(structure, R)`.
#[derive(Clone)]
pub struct QuantifierClass {
    pub name: String,
    pub arity: usize,
    pred: ClassPred,
}

impl QuantifierClass {
    pub fn new(
        name: impl Into<String>,
        arity: usize,
        pred: impl Fn(&Structure, usize, u32) -> bool + Send + Sync + 'static,
    ) -> Self {
        QuantifierClass {
            name: name.into(),
            arity,
            pred: Arc::new(pred),
        }
    }

    /// Whether `(M, R)` belongs to the class; `tuple_count` is `n^arity`.
    pub fn contains(&self, st: &Structure, tuple_count: usize, relation: u32) -> bool {
        (self.pred)(st, tuple_count, relation)
    }

    /// Whether the empty relation belongs to the class on this structure.
    pub fn accepts_empty(&self, st: &Structure, tuple_count: usize) -> bool {
        self.contains(st, tuple_count, 0)
    }
}

impl std::fmt::Debug for QuantifierClass {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "QuantifierClass({}, arity {})", self.name, self.arity)
    }
}

/// Name-indexed registry; user classes may be added at the library level.
#[derive(Debug, Clone, Default)]
pub struct ClassRegistry {
    classes: HashMap<String, QuantifierClass>,
}

impl ClassRegistry {
    pub fn register(&mut self, class: QuantifierClass) {
        self.classes.insert(class.name.clone(), class);
    }

    pub fn get(&self, name: &str) -> Option<&QuantifierClass> {
        self.classes.get(name)
    }
}

/// The shipped catalog at the given arity: `exists` (nonempty), `forall`
/// (the full relation), `atleast2`, `majority` and `even`.
pub fn standard_classes(arity: usize) -> ClassRegistry {
    let mut reg = ClassRegistry::default();
    reg.register(QuantifierClass::new("exists", arity, |_, _, r| r != 0));
    reg.register(QuantifierClass::new("forall", arity, |_, count, r| {
        r.count_ones() as usize == count
    }));
    reg.register(QuantifierClass::new("atleast2", arity, |_, _, r| {
        r.count_ones() >= 2
    }));
    reg.register(QuantifierClass::new("majority", arity, |_, count, r| {
        2 * r.count_ones() as usize > count
    }));
    reg.register(QuantifierClass::new("even", arity, |_, _, r| {
        r.count_ones() % 2 == 0
    }));
    reg
}
