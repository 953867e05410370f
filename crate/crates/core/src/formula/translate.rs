//! Standard translation into first-order logic over `R` and unary `P_i`.

use std::collections::BTreeSet;
use std::fmt;

use super::Formula;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum FirstOrder {
    Pred(u32, char),
    Rel(char, char),
    Equal(char, char),
    Not(Box<FirstOrder>),
    And(Box<FirstOrder>, Box<FirstOrder>),
    Or(Box<FirstOrder>, Box<FirstOrder>),
    Implies(Box<FirstOrder>, Box<FirstOrder>),
    Forall(char, Box<FirstOrder>),
    Exists(char, Box<FirstOrder>),
}

impl FirstOrder {
    pub fn free_variables(&self) -> BTreeSet<char> {
        match self {
            FirstOrder::Pred(_, v) => [*v].into(),
            FirstOrder::Rel(a, b) | FirstOrder::Equal(a, b) => [*a, *b].into(),
            FirstOrder::Not(f) => f.free_variables(),
            FirstOrder::And(a, b) | FirstOrder::Or(a, b) | FirstOrder::Implies(a, b) => {
                let mut s = a.free_variables();
                s.extend(b.free_variables());
                s
            }
            FirstOrder::Forall(v, f) | FirstOrder::Exists(v, f) => {
                let mut s = f.free_variables();
                s.remove(v);
                s
            }
        }
    }

    pub fn quantifier_depth(&self) -> usize {
        match self {
            FirstOrder::Pred(..) | FirstOrder::Rel(..) | FirstOrder::Equal(..) => 0,
            FirstOrder::Not(f) => f.quantifier_depth(),
            FirstOrder::And(a, b) | FirstOrder::Or(a, b) | FirstOrder::Implies(a, b) => {
                a.quantifier_depth().max(b.quantifier_depth())
            }
            FirstOrder::Forall(_, f) | FirstOrder::Exists(_, f) => 1 + f.quantifier_depth(),
        }
    }
}

impl fmt::Display for FirstOrder {
    fn fmt(&self, out: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FirstOrder::Pred(i, v) => write!(out, "P{i}({v})"),
            FirstOrder::Rel(a, b) => write!(out, "R({a},{b})"),
            FirstOrder::Equal(a, b) => write!(out, "({a} = {b})"),
            FirstOrder::Not(f) => write!(out, "~{f}"),
            FirstOrder::And(a, b) => write!(out, "({a} & {b})"),
            FirstOrder::Or(a, b) => write!(out, "({a} | {b})"),
            FirstOrder::Implies(a, b) => write!(out, "({a} -> {b})"),
            FirstOrder::Forall(v, f) => write!(out, "forall {v} {f}"),
            FirstOrder::Exists(v, f) => write!(out, "exists {v} {f}"),
        }
    }
}

fn at(f: &Formula, here: char, there: char) -> FirstOrder {
    let b = Box::new;
    match f {
        Formula::Atom(i) => FirstOrder::Pred(*i, here),
        Formula::Top => FirstOrder::Equal(here, here),
        Formula::Bottom => FirstOrder::Not(b(FirstOrder::Equal(here, here))),
        Formula::Not(g) => FirstOrder::Not(b(at(g, here, there))),
        Formula::And(l, r) => FirstOrder::And(b(at(l, here, there)), b(at(r, here, there))),
        Formula::Or(l, r) => FirstOrder::Or(b(at(l, here, there)), b(at(r, here, there))),
        Formula::Implies(l, r) => FirstOrder::Implies(b(at(l, here, there)), b(at(r, here, there))),
        Formula::Box(g) => FirstOrder::Forall(
            there,
            b(FirstOrder::Implies(
                b(FirstOrder::Rel(here, there)),
                b(at(g, there, here)),
            )),
        ),
        Formula::Diamond(g) => FirstOrder::Exists(
            there,
            b(FirstOrder::And(b(FirstOrder::Rel(here, there)), b(at(g, there, here)))),
        ),
    }
}

/// Translation with free variable `x`. Bound variables alternate between
/// `y` and `x`, so two names suffice at any modal depth. The constants are
/// rendered as `(x = x)` and its negation so that `x` always occurs free.
pub fn translate(f: &Formula) -> FirstOrder {
    at(f, 'x', 'y')
}

pub fn standard_translation(f: &Formula) -> String {
    translate(f).to_string()
}
