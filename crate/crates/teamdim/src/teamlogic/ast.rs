//! Abstract syntax of team-semantics formulas.

use std::fmt;

/// First-order literals, team atoms, connectives and quantifiers.
///
/// `Delta1` splits the team by the current value of its variable, so the
/// variable stays free; all other quantifiers bind.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Formula {
    Rel {
        negated: bool,
        name: String,
        vars: Vec<String>,
    },
    Eq {
        negated: bool,
        left: String,
        right: String,
    },
    /// `dep(x̄ ; y)`, the left side possibly empty.
    Dep { xs: Vec<String>, y: String },
    /// `const(x̄)`: all assignments agree on the tuple.
    Const { xs: Vec<String> },
    /// `exc(x̄ ; ȳ)` with `len(x̄) = len(ȳ) > 0`.
    Excl { xs: Vec<String>, ys: Vec<String> },
    /// `inc(x̄ ; ȳ)` with `len(x̄) = len(ȳ) > 0`.
    Incl { xs: Vec<String>, ys: Vec<String> },
    /// `ano(x̄ ; y)` with `x̄` nonempty.
    Anon { xs: Vec<String>, y: String },
    /// `ind(x̄ ; z̄ ; ȳ)`: the middle tuple is the condition and may be
    /// empty.
    Indep {
        xs: Vec<String>,
        cond: Vec<String>,
        ys: Vec<String>,
    },
    /// Satisfied exactly by nonempty teams.
    NE,
    /// `|T↾x̄|` is even.
    Even { xs: Vec<String> },
    /// `|T↾x̄| ≤ n^k / 2`.
    Half { xs: Vec<String> },
    /// Library-level atom plug-in: satisfaction is delegated to a
    /// registered predicate on the restricted team.
    Custom { name: String, vars: Vec<String> },
    And(Box<Formula>, Box<Formula>),
    /// Tensor disjunction: the team splits as a (possibly overlapping)
    /// union.
    Or(Box<Formula>, Box<Formula>),
    /// Tensor conjunction: the team is an intersection of two satisfying
    /// teams.
    TensorAnd(Box<Formula>, Box<Formula>),
    /// Intuitionistic disjunction: either disjunct holds on the whole team.
    IntDisj(Box<Formula>, Box<Formula>),
    /// Intuitionistic implication: quantifies over all subteams.
    IntImpl(Box<Formula>, Box<Formula>),
    Exists(String, Box<Formula>),
    Forall(String, Box<Formula>),
    /// `E1 x`: one shared witness value for the whole team.
    Exists1(String, Box<Formula>),
    /// `A1 x`: every constant extension satisfies the body.
    Forall1(String, Box<Formula>),
    /// `d1 x`: every value-slice of the team satisfies the body.
    Delta1(String, Box<Formula>),
    /// `Q name ȳ . φ`: a Lindström quantifier given by a registered
    /// isomorphism-closed class.
    Lindstrom {
        class: String,
        vars: Vec<String>,
        body: Box<Formula>,
    },
}

impl Formula {
    pub fn and(a: Formula, b: Formula) -> Formula {
        Formula::And(Box::new(a), Box::new(b))
    }

    pub fn or(a: Formula, b: Formula) -> Formula {
        Formula::Or(Box::new(a), Box::new(b))
    }
}

/// Free variables in first-occurrence order.
pub fn formula_free_vars(f: &Formula) -> Vec<String> {
    let mut out = Vec::new();
    collect_free(f, &mut out);
    out
}

fn push_unique(out: &mut Vec<String>, v: &str) {
    if !out.iter().any(|w| w == v) {
        out.push(v.to_string());
    }
}

fn collect_free(f: &Formula, out: &mut Vec<String>) {
    match f {
        Formula::Rel { vars, .. }
        | Formula::Const { xs: vars }
        | Formula::Even { xs: vars }
        | Formula::Half { xs: vars }
        | Formula::Custom { vars, .. } => {
            for v in vars {
                push_unique(out, v);
            }
        }
        Formula::Eq { left, right, .. } => {
            push_unique(out, left);
            push_unique(out, right);
        }
        Formula::Dep { xs, y } => {
            for v in xs {
                push_unique(out, v);
            }
            push_unique(out, y);
        }
        Formula::Excl { xs, ys } | Formula::Incl { xs, ys } => {
            for v in xs.iter().chain(ys) {
                push_unique(out, v);
            }
        }
        Formula::Anon { xs, y } => {
            for v in xs {
                push_unique(out, v);
            }
            push_unique(out, y);
        }
        Formula::Indep { xs, cond, ys } => {
            for v in xs.iter().chain(cond).chain(ys) {
                push_unique(out, v);
            }
        }
        Formula::NE => {}
        Formula::And(a, b)
        | Formula::Or(a, b)
        | Formula::TensorAnd(a, b)
        | Formula::IntDisj(a, b)
        | Formula::IntImpl(a, b) => {
            collect_free(a, out);
            collect_free(b, out);
        }
        Formula::Exists(v, body)
        | Formula::Forall(v, body)
        | Formula::Exists1(v, body)
        | Formula::Forall1(v, body) => {
            let mut inner = Vec::new();
            collect_free(body, &mut inner);
            for w in inner {
                if &w != v {
                    push_unique(out, &w);
                }
            }
        }
        Formula::Delta1(v, body) => {
            push_unique(out, v);
            collect_free(body, out);
        }
        Formula::Lindstrom { vars, body, .. } => {
            let mut inner = Vec::new();
            collect_free(body, &mut inner);
            for w in inner {
                if !vars.contains(&w) {
                    push_unique(out, &w);
                }
            }
        }
    }
}

impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fn tuple(vs: &[String]) -> String {
            vs.join(" ")
        }
        match self {
            Formula::Rel {
                negated,
                name,
                vars,
            } => write!(f, "{}{name}({})", if *negated { "!" } else { "" }, tuple(vars)),
            Formula::Eq {
                negated,
                left,
                right,
            } => write!(f, "{}{left} = {right}", if *negated { "! " } else { "" }),
            Formula::Dep { xs, y } => write!(f, "dep({} ; {y})", tuple(xs)),
            Formula::Const { xs } => write!(f, "const({})", tuple(xs)),
            Formula::Excl { xs, ys } => write!(f, "exc({} ; {})", tuple(xs), tuple(ys)),
            Formula::Incl { xs, ys } => write!(f, "inc({} ; {})", tuple(xs), tuple(ys)),
            Formula::Anon { xs, y } => write!(f, "ano({} ; {y})", tuple(xs)),
            Formula::Indep { xs, cond, ys } => {
                write!(f, "ind({} ; {} ; {})", tuple(xs), tuple(cond), tuple(ys))
            }
            Formula::NE => write!(f, "NE"),
            Formula::Even { xs } => write!(f, "even({})", tuple(xs)),
            Formula::Half { xs } => write!(f, "half({})", tuple(xs)),
            Formula::Custom { name, vars } => write!(f, "{name}({})", tuple(vars)),
            Formula::And(a, b) => write!(f, "({a} and {b})"),
            Formula::Or(a, b) => write!(f, "({a} or {b})"),
            Formula::TensorAnd(a, b) => write!(f, "({a} tand {b})"),
            Formula::IntDisj(a, b) => write!(f, "({a} ior {b})"),
            Formula::IntImpl(a, b) => write!(f, "({a} -> {b})"),
            Formula::Exists(v, b) => write!(f, "E {v} . {b}"),
            Formula::Forall(v, b) => write!(f, "A {v} . {b}"),
            Formula::Exists1(v, b) => write!(f, "E1 {v} . {b}"),
            Formula::Forall1(v, b) => write!(f, "A1 {v} . {b}"),
            Formula::Delta1(v, b) => write!(f, "d1 {v} . {b}"),
            Formula::Lindstrom { class, vars, body } => {
                write!(f, "Q {class} {} . {body}", tuple(vars))
            }
        }
    }
}
