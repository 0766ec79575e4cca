use std::collections::{BTreeMap, BTreeSet};

use indexmap::IndexMap;

use crate::kernel::{Special, Term};

use super::parse::{ParseError, Parser, Tok};
use super::print::{symbol, term_to_string};

/// A finite interpretation whose elements are ground terms.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ModelDocument {
    /// Representatives, in order of first derivation.
    pub domain: Vec<Term>,
    /// Representative → all member terms (the representative included).
    pub classes: BTreeMap<Term, Vec<Term>>,
    pub functions: BTreeMap<(String, Vec<Term>), Term>,
    pub predicates: BTreeSet<(String, Vec<Term>)>,
    /// Generated predicates. They are not printed; evaluation gives them a fixed
    /// reading relative to the rest of the model.
    pub specials: IndexMap<String, Special>,
}

fn tuple(args: &[Term]) -> String {
    let inner: Vec<String> = args.iter().map(term_to_string).collect();
    format!("({})", inner.join(","))
}

/// Render in the line-oriented model format.
pub fn print_model(m: &ModelDocument) -> String {
    let mut out = String::from("model.\n");
    let dom: Vec<String> = m.domain.iter().map(term_to_string).collect();
    out.push_str(&format!("domain: {}.\n", dom.join(", ")));
    for rep in &m.domain {
        if let Some(members) = m.classes.get(rep) {
            if members.len() >= 2 {
                let ms: Vec<String> = members.iter().map(term_to_string).collect();
                out.push_str(&format!("class: {} = {}.\n", term_to_string(rep), ms.join(", ")));
            }
        }
    }
    let mut fns: Vec<String> = m
        .functions
        .iter()
        .map(|((f, args), v)| format!("fn {}: {} -> {}.", symbol(f), tuple(args), term_to_string(v)))
        .collect();
    fns.sort();
    let mut preds: Vec<String> = m
        .predicates
        .iter()
        .filter(|(p, _)| !m.specials.contains_key(p))
        .map(|(p, args)| format!("pred {}: {}.", symbol(p), tuple(args)))
        .collect();
    preds.sort();
    for line in fns.into_iter().chain(preds) {
        out.push_str(&line);
        out.push('\n');
    }
    out
}

fn term_list(p: &mut Parser, close: Tok) -> Result<Vec<Term>, ParseError> {
    let mut out = Vec::new();
    if *p.peek() == close {
        return Ok(out);
    }
    out.push(p.term()?);
    while *p.peek() == Tok::Comma {
        p.next();
        out.push(p.term()?);
    }
    Ok(out)
}

fn paren_tuple(p: &mut Parser) -> Result<Vec<Term>, ParseError> {
    p.expect(Tok::LParen)?;
    let args = term_list(p, Tok::RParen)?;
    p.expect(Tok::RParen)?;
    Ok(args)
}

fn symbol_name(p: &mut Parser) -> Result<String, ParseError> {
    match p.next() {
        Tok::Name(n) => Ok(n),
        other => Err(p.error(format!("expected a symbol, found {other:?}"))),
    }
}

/// Read a model written by [`print_model`].
pub fn parse_model(text: &str) -> Result<ModelDocument, ParseError> {
    let mut p = Parser::new(text)?;
    let mut m = ModelDocument::default();
    match p.next() {
        Tok::Name(n) if n == "model" => p.expect(Tok::Dot)?,
        _ => return Err(p.error("model must start with `model.`")),
    }
    while !p.at_eof() {
        let kw = symbol_name(&mut p)?;
        if kw == "domain" || kw == "class" {
            p.expect(Tok::Colon)?;
        }
        match kw.as_str() {
            "domain" => m.domain = term_list(&mut p, Tok::Dot)?,
            "class" => {
                let rep = p.term()?;
                p.expect(Tok::Eq)?;
                let members = term_list(&mut p, Tok::Dot)?;
                m.classes.insert(rep, members);
            }
            "fn" => {
                let f = symbol_name(&mut p)?;
                p.expect(Tok::Colon)?;
                let args = paren_tuple(&mut p)?;
                p.expect(Tok::Arrow)?;
                let v = p.term()?;
                m.functions.insert((f, args), v);
            }
            "pred" => {
                let q = symbol_name(&mut p)?;
                p.expect(Tok::Colon)?;
                let args = paren_tuple(&mut p)?;
                m.predicates.insert((q, args));
            }
            other => return Err(p.error(format!("unknown model line `{other}`"))),
        }
        p.expect(Tok::Dot)?;
    }
    for d in &m.domain {
        m.classes.entry(d.clone()).or_insert_with(|| vec![d.clone()]);
    }
    Ok(m)
}
