use std::fmt::Write;

use crate::kernel::{Atom, Clause, Term};

use super::Problem;

fn is_lower_word(s: &str) -> bool {
    let mut chars = s.chars();
    matches!(chars.next(), Some(c) if c.is_ascii_lowercase()) && chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
}

fn is_integer(s: &str) -> bool {
    !s.is_empty() && s.chars().all(|c| c.is_ascii_digit())
}

/// A symbol as TPTP accepts it: bare when it is a lower word, single-quoted otherwise.
pub fn symbol(s: &str) -> String {
    if is_lower_word(s) {
        s.to_string()
    } else {
        format!("'{}'", s.replace('\\', "\\\\").replace('\'', "\\'"))
    }
}

fn clause_name(s: &str) -> String {
    if is_integer(s) {
        s.to_string()
    } else {
        symbol(s)
    }
}

pub fn write_term(out: &mut String, t: &Term) {
    match t {
        Term::Var(v) => out.push_str(v),
        Term::App(f, args) => {
            out.push_str(&symbol(f));
            if !args.is_empty() {
                out.push('(');
                for (i, a) in args.iter().enumerate() {
                    if i > 0 {
                        out.push(',');
                    }
                    write_term(out, a);
                }
                out.push(')');
            }
        }
    }
}

pub fn term_to_string(t: &Term) -> String {
    let mut s = String::new();
    write_term(&mut s, t);
    s
}

fn write_atom(out: &mut String, a: &Atom, positive: bool) {
    if a.is_equality() {
        write_term(out, &a.args[0]);
        out.push_str(if positive { " = " } else { " != " });
        write_term(out, &a.args[1]);
        return;
    }
    if !positive {
        out.push('~');
    }
    write_term(out, &Term::App(a.pred.clone(), a.args.clone()));
}

/// One `cnf(...)` line; variables are renamed `X1, X2, …`.
pub fn print_clause(c: &Clause, default_name: &str) -> String {
    let name = c.label.clone().unwrap_or_else(|| default_name.to_string());
    let c = c.canonical();
    let mut lits = String::new();
    let mut first = true;
    for (a, positive) in c.head().iter().map(|a| (a, true)).chain(c.body().iter().map(|a| (a, false))) {
        if !first {
            lits.push_str(" | ");
        }
        first = false;
        write_atom(&mut lits, a, positive);
    }
    if first {
        lits.push_str("$false");
    }
    format!("cnf({}, axiom, ({})).", clause_name(&name), lits)
}

pub fn print_clauses(p: &Problem) -> String {
    let mut out = String::new();
    for (i, c) in p.clauses.iter().enumerate() {
        let _ = writeln!(out, "{}", print_clause(c, &format!("c{}", i + 1)));
    }
    out
}
