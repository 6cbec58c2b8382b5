//! Recursive-descent parser for the formula language.
//!
//! Precedence, loosest first: `->`, `ior`, `or`, `tand`, `and`; quantifiers
//! bind to the end of their scope. Keywords are case-sensitive and
//! reserved.

use super::ast::Formula;
use crate::{Error, Result};

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Ident(String),
    LPar,
    RPar,
    Dot,
    Semi,
    Equal,
    Bang,
    Arrow,
}

#[derive(Debug, Clone)]
struct Token {
    tok: Tok,
    line: usize,
    col: usize,
}

const KEYWORDS: &[&str] = &[
    "and", "or", "ior", "tand", "E", "A", "E1", "A1", "d1", "Q", "NE", "dep", "const", "exc",
    "inc", "ano", "ind", "even", "half",
];

fn lex(text: &str) -> Result<Vec<Token>> {
    let mut out = Vec::new();
    let mut line = 1usize;
    let mut col = 1usize;
    let mut chars = text.chars().peekable();
    while let Some(&c) = chars.peek() {
        let (l, co) = (line, col);
        match c {
            '\n' => {
                chars.next();
                line += 1;
                col = 1;
            }
            c if c.is_whitespace() => {
                chars.next();
                col += 1;
            }
            '(' | ')' | '.' | ';' | '=' | '!' => {
                chars.next();
                col += 1;
                let tok = match c {
                    '(' => Tok::LPar,
                    ')' => Tok::RPar,
                    '.' => Tok::Dot,
                    ';' => Tok::Semi,
                    '=' => Tok::Equal,
                    _ => Tok::Bang,
                };
                out.push(Token { tok, line: l, col: co });
            }
            '-' => {
                chars.next();
                col += 1;
                if chars.peek() == Some(&'>') {
                    chars.next();
                    col += 1;
                    out.push(Token {
                        tok: Tok::Arrow,
                        line: l,
                        col: co,
                    });
                } else {
                    return Err(Error::parse(l, co, "expected `->`"));
                }
            }
            c if c.is_ascii_alphanumeric() || c == '_' => {
                let mut s = String::new();
                while let Some(&c) = chars.peek() {
                    if c.is_ascii_alphanumeric() || c == '_' {
                        s.push(c);
                        chars.next();
                        col += 1;
                    } else {
                        break;
                    }
                }
                out.push(Token {
                    tok: Tok::Ident(s),
                    line: l,
                    col: co,
                });
            }
            other => {
                return Err(Error::parse(l, co, format!("unexpected character `{other}`")));
            }
        }
    }
    Ok(out)
}

struct Parser {
    tokens: Vec<Token>,
    pos: usize,
}

impl Parser {
    fn peek(&self) -> Option<&Tok> {
        self.tokens.get(self.pos).map(|t| &t.tok)
    }

    fn peek_ident(&self) -> Option<&str> {
        match self.peek() {
            Some(Tok::Ident(s)) => Some(s.as_str()),
            _ => None,
        }
    }

    fn here(&self) -> (usize, usize) {
        self.tokens
            .get(self.pos)
            .or_else(|| self.tokens.last())
            .map(|t| (t.line, t.col))
            .unwrap_or((1, 1))
    }

    fn err(&self, msg: impl Into<String>) -> Error {
        let (l, c) = self.here();
        Error::parse(l, c, msg)
    }

    fn bump(&mut self) -> Option<Tok> {
        let t = self.tokens.get(self.pos).map(|t| t.tok.clone());
        self.pos += 1;
        t
    }

    fn expect(&mut self, tok: Tok, what: &str) -> Result<()> {
        if self.peek() == Some(&tok) {
            self.pos += 1;
            Ok(())
        } else {
            Err(self.err(format!("expected {what}")))
        }
    }

    fn expect_var(&mut self) -> Result<String> {
        match self.peek() {
            Some(Tok::Ident(s)) if !KEYWORDS.contains(&s.as_str()) => {
                let s = s.clone();
                self.pos += 1;
                Ok(s)
            }
            Some(Tok::Ident(s)) => Err(self.err(format!("`{s}` is a reserved keyword"))),
            _ => Err(self.err("expected a variable name")),
        }
    }

    /// Variable list ending at `;` or `)`, possibly empty.
    fn var_list(&mut self) -> Result<Vec<String>> {
        let mut out = Vec::new();
        while matches!(self.peek(), Some(Tok::Ident(_))) {
            out.push(self.expect_var()?);
        }
        Ok(out)
    }

    fn parse_impl(&mut self) -> Result<Formula> {
        let lhs = self.parse_ior()?;
        if self.peek() == Some(&Tok::Arrow) {
            self.pos += 1;
            let rhs = self.parse_impl()?;
            return Ok(Formula::IntImpl(Box::new(lhs), Box::new(rhs)));
        }
        Ok(lhs)
    }

    fn parse_ior(&mut self) -> Result<Formula> {
        let mut lhs = self.parse_or()?;
        while self.peek_ident() == Some("ior") {
            self.pos += 1;
            let rhs = self.parse_or()?;
            lhs = Formula::IntDisj(Box::new(lhs), Box::new(rhs));
        }
        Ok(lhs)
    }

    fn parse_or(&mut self) -> Result<Formula> {
        let mut lhs = self.parse_tand()?;
        while self.peek_ident() == Some("or") {
            self.pos += 1;
            let rhs = self.parse_tand()?;
            lhs = Formula::Or(Box::new(lhs), Box::new(rhs));
        }
        Ok(lhs)
    }

    fn parse_tand(&mut self) -> Result<Formula> {
        let mut lhs = self.parse_and()?;
        while self.peek_ident() == Some("tand") {
            self.pos += 1;
            let rhs = self.parse_and()?;
            lhs = Formula::TensorAnd(Box::new(lhs), Box::new(rhs));
        }
        Ok(lhs)
    }

    fn parse_and(&mut self) -> Result<Formula> {
        let mut lhs = self.parse_unary()?;
        while self.peek_ident() == Some("and") {
            self.pos += 1;
            let rhs = self.parse_unary()?;
            lhs = Formula::And(Box::new(lhs), Box::new(rhs));
        }
        Ok(lhs)
    }

    fn quantifier_body(&mut self) -> Result<(String, Formula)> {
        let var = self.expect_var()?;
        self.expect(Tok::Dot, "`.` after the quantified variable")?;
        let body = self.parse_impl()?;
        Ok((var, body))
    }

    fn parse_unary(&mut self) -> Result<Formula> {
        match self.peek() {
            Some(Tok::LPar) => {
                self.pos += 1;
                let inner = self.parse_impl()?;
                self.expect(Tok::RPar, "`)`")?;
                Ok(inner)
            }
            Some(Tok::Bang) => {
                self.pos += 1;
                match self.peek() {
                    Some(Tok::Ident(name)) => {
                        let name = name.clone();
                        if KEYWORDS.contains(&name.as_str()) {
                            return Err(self.err(format!("cannot negate keyword `{name}`")));
                        }
                        self.pos += 1;
                        if self.peek() == Some(&Tok::Equal) {
                            self.pos += 1;
                            let right = self.expect_var()?;
                            Ok(Formula::Eq {
                                negated: true,
                                left: name,
                                right,
                            })
                        } else {
                            self.expect(Tok::LPar, "`(` or `=` after `!name`")?;
                            let vars = self.var_list()?;
                            self.expect(Tok::RPar, "`)`")?;
                            Ok(Formula::Rel {
                                negated: true,
                                name,
                                vars,
                            })
                        }
                    }
                    _ => Err(self.err("expected an identifier after `!`")),
                }
            }
            Some(Tok::Ident(word)) => {
                let word = word.clone();
                match word.as_str() {
                    "E" | "A" | "E1" | "A1" | "d1" => {
                        self.pos += 1;
                        let (v, body) = self.quantifier_body()?;
                        let b = Box::new(body);
                        Ok(match word.as_str() {
                            "E" => Formula::Exists(v, b),
                            "A" => Formula::Forall(v, b),
                            "E1" => Formula::Exists1(v, b),
                            "A1" => Formula::Forall1(v, b),
                            _ => Formula::Delta1(v, b),
                        })
                    }
                    "Q" => {
                        self.pos += 1;
                        let class = match self.bump() {
                            Some(Tok::Ident(s)) => s,
                            _ => return Err(self.err("expected a quantifier class name")),
                        };
                        let vars = self.var_list()?;
                        if vars.is_empty() {
                            return Err(self.err("quantifier needs at least one variable"));
                        }
                        self.expect(Tok::Dot, "`.` after the quantified variables")?;
                        let body = self.parse_impl()?;
                        Ok(Formula::Lindstrom {
                            class,
                            vars,
                            body: Box::new(body),
                        })
                    }
                    "NE" => {
                        self.pos += 1;
                        Ok(Formula::NE)
                    }
                    "dep" => {
                        self.pos += 1;
                        self.expect(Tok::LPar, "`(`")?;
                        let xs = self.var_list()?;
                        self.expect(Tok::Semi, "`;` (use `const(x)` for constancy)")?;
                        let ys = self.var_list()?;
                        self.expect(Tok::RPar, "`)`")?;
                        if ys.len() != 1 {
                            return Err(self.err(
                                "dep takes exactly one variable on the right; \
                                 constancy is `const(x)`",
                            ));
                        }
                        Ok(Formula::Dep {
                            xs,
                            y: ys.into_iter().next().unwrap(),
                        })
                    }
                    "const" => {
                        self.pos += 1;
                        self.expect(Tok::LPar, "`(`")?;
                        let xs = self.var_list()?;
                        self.expect(Tok::RPar, "`)`")?;
                        if xs.is_empty() {
                            return Err(self.err("const needs at least one variable"));
                        }
                        Ok(Formula::Const { xs })
                    }
                    "exc" | "inc" => {
                        self.pos += 1;
                        self.expect(Tok::LPar, "`(`")?;
                        let xs = self.var_list()?;
                        self.expect(Tok::Semi, "`;`")?;
                        let ys = self.var_list()?;
                        self.expect(Tok::RPar, "`)`")?;
                        if xs.is_empty() || xs.len() != ys.len() {
                            return Err(
                                self.err("both sides need the same positive number of variables")
                            );
                        }
                        Ok(if word == "exc" {
                            Formula::Excl { xs, ys }
                        } else {
                            Formula::Incl { xs, ys }
                        })
                    }
                    "ano" => {
                        self.pos += 1;
                        self.expect(Tok::LPar, "`(`")?;
                        let xs = self.var_list()?;
                        self.expect(Tok::Semi, "`;`")?;
                        let ys = self.var_list()?;
                        self.expect(Tok::RPar, "`)`")?;
                        if xs.is_empty() || ys.len() != 1 {
                            return Err(self.err(
                                "ano takes a nonempty tuple and a single right variable",
                            ));
                        }
                        Ok(Formula::Anon {
                            xs,
                            y: ys.into_iter().next().unwrap(),
                        })
                    }
                    "ind" => {
                        self.pos += 1;
                        self.expect(Tok::LPar, "`(`")?;
                        let xs = self.var_list()?;
                        self.expect(Tok::Semi, "`;`")?;
                        let cond = self.var_list()?;
                        self.expect(Tok::Semi, "`;`")?;
                        let ys = self.var_list()?;
                        self.expect(Tok::RPar, "`)`")?;
                        if xs.is_empty() || ys.is_empty() {
                            return Err(self.err("ind needs nonempty outer tuples"));
                        }
                        Ok(Formula::Indep { xs, cond, ys })
                    }
                    "even" | "half" => {
                        self.pos += 1;
                        self.expect(Tok::LPar, "`(`")?;
                        let xs = self.var_list()?;
                        self.expect(Tok::RPar, "`)`")?;
                        if xs.is_empty() {
                            return Err(self.err("expected at least one variable"));
                        }
                        Ok(if word == "even" {
                            Formula::Even { xs }
                        } else {
                            Formula::Half { xs }
                        })
                    }
                    "and" | "or" | "ior" | "tand" => {
                        Err(self.err(format!("unexpected connective `{word}`")))
                    }
                    _ => {
                        // variable equality or a relation literal
                        self.pos += 1;
                        match self.peek() {
                            Some(Tok::Equal) => {
                                self.pos += 1;
                                let right = self.expect_var()?;
                                Ok(Formula::Eq {
                                    negated: false,
                                    left: word,
                                    right,
                                })
                            }
                            Some(Tok::LPar) => {
                                self.pos += 1;
                                let vars = self.var_list()?;
                                self.expect(Tok::RPar, "`)`")?;
                                Ok(Formula::Rel {
                                    negated: false,
                                    name: word,
                                    vars,
                                })
                            }
                            _ => Err(self.err(format!(
                                "expected `=` or `(` after identifier `{word}`"
                            ))),
                        }
                    }
                }
            }
            _ => Err(self.err("expected a formula")),
        }
    }
}

/// Parse a formula; errors report line and column.
pub fn parse_formula(text: &str) -> Result<Formula> {
    let tokens = lex(text)?;
    let mut p = Parser { tokens, pos: 0 };
    let f = p.parse_impl()?;
    if p.pos != p.tokens.len() {
        return Err(p.err("unexpected trailing input"));
    }
    Ok(f)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::teamlogic::formula_free_vars;

    #[test]
    fn atoms() {
        assert_eq!(
            parse_formula("dep(x ; y)").unwrap(),
            Formula::Dep {
                xs: vec!["x".into()],
                y: "y".into()
            }
        );
        assert!(matches!(parse_formula("NE").unwrap(), Formula::NE));
        assert!(parse_formula("dep(x y ;)").is_err());
        assert!(parse_formula("const()").is_err());
        assert!(parse_formula("exc(x ; y z)").is_err());
        // empty condition tuple is allowed
        assert!(parse_formula("ind(x ; ; y)").is_ok());
    }

    #[test]
    fn quantified_translation_formula() {
        let f = parse_formula("A z . (z = y or exc(x z ; x y))").unwrap();
        let Formula::Forall(v, body) = f else { panic!() };
        assert_eq!(v, "z");
        assert!(matches!(*body, Formula::Or(_, _)));
    }

    #[test]
    fn precedence() {
        // and binds tighter than or, or tighter than ior, -> loosest
        let f = parse_formula("x = y and y = z or NE ior x = z -> NE").unwrap();
        let Formula::IntImpl(lhs, _) = f else { panic!() };
        let Formula::IntDisj(or_part, _) = *lhs else { panic!() };
        assert!(matches!(*or_part, Formula::Or(_, _)));
    }

    #[test]
    fn quantifier_scope_extends_to_end() {
        let f = parse_formula("E x . x = y or NE").unwrap();
        assert!(matches!(f, Formula::Exists(_, _)));
    }

    #[test]
    fn negated_literals() {
        assert_eq!(
            parse_formula("! x = y").unwrap(),
            Formula::Eq {
                negated: true,
                left: "x".into(),
                right: "y".into()
            }
        );
        let f = parse_formula("!R(x y)").unwrap();
        assert!(matches!(f, Formula::Rel { negated: true, .. }));
    }

    #[test]
    fn free_vars_computed() {
        let f = parse_formula("E u . (! u = y and inc(x u ; x y))").unwrap();
        assert_eq!(formula_free_vars(&f), vec!["y".to_string(), "x".to_string()]);
        let g = parse_formula("d1 x . const(y)").unwrap();
        assert_eq!(formula_free_vars(&g), vec!["x".to_string(), "y".to_string()]);
    }

    #[test]
    fn error_positions() {
        let err = parse_formula("dep(x ;").unwrap_err();
        assert!(matches!(err, Error::Parse { .. }));
        assert!(parse_formula("x = y extra").is_err());
        assert!(parse_formula("E and . NE").is_err());
    }
}
