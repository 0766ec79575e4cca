use thiserror::Error;

use crate::kernel::{Atom, Clause, Signature, SignatureError, Term, EQ, NEQ, RESERVED_PREFIX};

use super::Problem;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ParseErrorKind {
    #[error("syntax error: {0}")]
    Syntax(String),
    #[error(transparent)]
    Arity(#[from] SignatureError),
    #[error("identifier `{0}` uses the reserved prefix `{RESERVED_PREFIX}`")]
    ReservedPrefix(String),
    #[error("include directives are not supported")]
    Include,
}

#[derive(Debug, Error, PartialEq, Eq)]
#[error("{line}:{col}: {kind}")]
pub struct ParseError {
    pub line: usize,
    pub col: usize,
    pub kind: ParseErrorKind,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub(crate) enum Tok {
    /// Lower-case word, single-quoted atom or integer.
    Name(String),
    Var(String),
    Dollar(String),
    LParen,
    RParen,
    Comma,
    Dot,
    Pipe,
    Tilde,
    Eq,
    Neq,
    Colon,
    Arrow,
    Eof,
}

#[derive(Clone, Debug)]
pub(crate) struct Token {
    pub tok: Tok,
    pub line: usize,
    pub col: usize,
}

pub(crate) fn lex(text: &str) -> Result<Vec<Token>, ParseError> {
    let chars: Vec<char> = text.chars().collect();
    let mut out = Vec::new();
    let (mut i, mut line, mut col) = (0usize, 1usize, 1usize);
    let err = |line, col, msg: String| ParseError { line, col, kind: ParseErrorKind::Syntax(msg) };

    macro_rules! bump {
        () => {{
            if chars[i] == '\n' {
                line += 1;
                col = 1;
            } else {
                col += 1;
            }
            i += 1;
        }};
    }

    while i < chars.len() {
        let c = chars[i];
        let (tl, tc) = (line, col);
        if c.is_whitespace() {
            bump!();
            continue;
        }
        if c == '%' {
            while i < chars.len() && chars[i] != '\n' {
                bump!();
            }
            continue;
        }
        if c == '/' && chars.get(i + 1) == Some(&'*') {
            bump!();
            bump!();
            loop {
                if i >= chars.len() {
                    return Err(err(tl, tc, "unterminated comment".into()));
                }
                if chars[i] == '*' && chars.get(i + 1) == Some(&'/') {
                    bump!();
                    bump!();
                    break;
                }
                bump!();
            }
            continue;
        }
        let simple = match c {
            '(' => Some(Tok::LParen),
            ')' => Some(Tok::RParen),
            ',' => Some(Tok::Comma),
            '.' => Some(Tok::Dot),
            '|' => Some(Tok::Pipe),
            '~' => Some(Tok::Tilde),
            '=' => Some(Tok::Eq),
            ':' => Some(Tok::Colon),
            _ => None,
        };
        if let Some(tok) = simple {
            bump!();
            out.push(Token { tok, line: tl, col: tc });
            continue;
        }
        if c == '!' && chars.get(i + 1) == Some(&'=') {
            bump!();
            bump!();
            out.push(Token { tok: Tok::Neq, line: tl, col: tc });
            continue;
        }
        if c == '-' && chars.get(i + 1) == Some(&'>') {
            bump!();
            bump!();
            out.push(Token { tok: Tok::Arrow, line: tl, col: tc });
            continue;
        }
        if c == '\'' {
            bump!();
            let mut s = String::new();
            loop {
                match chars.get(i) {
                    None => return Err(err(tl, tc, "unterminated quoted atom".into())),
                    Some('\'') => {
                        bump!();
                        break;
                    }
                    Some('\\') if i + 1 < chars.len() => {
                        bump!();
                        s.push(chars[i]);
                        bump!();
                    }
                    Some(&ch) => {
                        s.push(ch);
                        bump!();
                    }
                }
            }
            out.push(Token { tok: Tok::Name(s), line: tl, col: tc });
            continue;
        }
        if c.is_alphanumeric() || c == '_' || c == '$' {
            let mut s = String::new();
            s.push(c);
            bump!();
            while i < chars.len() && (chars[i].is_alphanumeric() || chars[i] == '_') {
                s.push(chars[i]);
                bump!();
            }
            if s.starts_with(RESERVED_PREFIX) {
                return Err(ParseError { line: tl, col: tc, kind: ParseErrorKind::ReservedPrefix(s) });
            }
            let tok = if let Some(rest) = s.strip_prefix('$') {
                Tok::Dollar(rest.to_string())
            } else if c.is_uppercase() || c == '_' {
                Tok::Var(s)
            } else {
                Tok::Name(s)
            };
            out.push(Token { tok, line: tl, col: tc });
            continue;
        }
        return Err(err(tl, tc, format!("unexpected character `{c}`")));
    }
    out.push(Token { tok: Tok::Eof, line, col });
    Ok(out)
}

pub(crate) struct Parser {
    toks: Vec<Token>,
    pos: usize,
}

enum Lit {
    Head(Atom),
    Body(Atom),
    False,
}

impl Parser {
    pub(crate) fn new(text: &str) -> Result<Self, ParseError> {
        Ok(Parser { toks: lex(text)?, pos: 0 })
    }

    pub(crate) fn peek(&self) -> &Tok {
        &self.toks[self.pos].tok
    }

    fn here(&self) -> (usize, usize) {
        let t = &self.toks[self.pos];
        (t.line, t.col)
    }

    pub(crate) fn error(&self, msg: impl Into<String>) -> ParseError {
        let (line, col) = self.here();
        ParseError { line, col, kind: ParseErrorKind::Syntax(msg.into()) }
    }

    pub(crate) fn next(&mut self) -> Tok {
        let t = self.toks[self.pos].tok.clone();
        if t != Tok::Eof {
            self.pos += 1;
        }
        t
    }

    pub(crate) fn expect(&mut self, want: Tok) -> Result<(), ParseError> {
        if *self.peek() == want {
            self.next();
            Ok(())
        } else {
            Err(self.error(format!("expected {want:?}, found {:?}", self.peek())))
        }
    }

    pub(crate) fn at_eof(&self) -> bool {
        *self.peek() == Tok::Eof
    }

    fn name(&mut self) -> Result<String, ParseError> {
        match self.next() {
            Tok::Name(n) => Ok(n),
            other => {
                self.pos -= 1;
                Err(self.error(format!("expected a name, found {other:?}")))
            }
        }
    }

    pub(crate) fn term(&mut self) -> Result<Term, ParseError> {
        match self.next() {
            Tok::Var(v) => Ok(Term::Var(v)),
            Tok::Name(n) => Ok(Term::App(n, self.args()?)),
            other => {
                self.pos = self.pos.saturating_sub(1);
                Err(self.error(format!("expected a term, found {other:?}")))
            }
        }
    }

    fn args(&mut self) -> Result<Vec<Term>, ParseError> {
        let mut args = Vec::new();
        if *self.peek() == Tok::LParen {
            self.next();
            args.push(self.term()?);
            while *self.peek() == Tok::Comma {
                self.next();
                args.push(self.term()?);
            }
            self.expect(Tok::RParen)?;
        }
        Ok(args)
    }

    fn literal(&mut self) -> Result<Lit, ParseError> {
        let mut negated = false;
        while *self.peek() == Tok::Tilde {
            self.next();
            negated = !negated;
        }
        if *self.peek() == Tok::LParen {
            self.next();
            let lit = self.literal()?;
            self.expect(Tok::RParen)?;
            return Ok(match (negated, lit) {
                (false, l) => l,
                (true, Lit::Head(a)) => Lit::Body(a),
                (true, Lit::Body(a)) => Lit::Head(a),
                (true, Lit::False) => return Err(self.error("negated $false is not supported")),
            });
        }
        if let Tok::Dollar(d) = self.peek().clone() {
            self.next();
            return match (d.as_str(), negated) {
                ("false", false) | ("true", true) => Ok(Lit::False),
                _ => Err(self.error(format!("`${d}` is not supported in this position"))),
            };
        }
        let lhs = self.term()?;
        let atom = match self.peek() {
            Tok::Eq | Tok::Neq => {
                let flip = *self.peek() == Tok::Neq;
                self.next();
                let rhs = self.term()?;
                negated ^= flip;
                Atom::eq(lhs, rhs)
            }
            _ => match lhs {
                Term::App(p, args) => {
                    let pred = if p == "!=" {
                        NEQ.to_string()
                    } else if p == "=" {
                        EQ.to_string()
                    } else {
                        p
                    };
                    if (pred == EQ || pred == NEQ) && args.len() != 2 {
                        return Err(self.error("equality takes two arguments"));
                    }
                    Atom::new(pred, args)
                }
                Term::Var(v) => return Err(self.error(format!("variable `{v}` used as an atom"))),
            },
        };
        Ok(if negated { Lit::Body(atom) } else { Lit::Head(atom) })
    }

    fn clause(&mut self) -> Result<(Vec<Atom>, Vec<Atom>), ParseError> {
        let mut head = Vec::new();
        let mut body = Vec::new();
        let mut push = |lit| match lit {
            Lit::Head(a) => head.push(a),
            Lit::Body(a) => body.push(a),
            Lit::False => {}
        };
        push(self.literal()?);
        while *self.peek() == Tok::Pipe {
            self.next();
            push(self.literal()?);
        }
        Ok((head, body))
    }

    fn formula(&mut self) -> Result<(Vec<Atom>, Vec<Atom>), ParseError> {
        // A parenthesised disjunction, or a bare one.
        let save = self.pos;
        if *self.peek() == Tok::LParen {
            self.next();
            if let Ok(c) = self.clause() {
                if *self.peek() == Tok::RParen {
                    self.next();
                    if *self.peek() == Tok::RParen {
                        return Ok(c);
                    }
                }
            }
            self.pos = save;
        }
        self.clause()
    }
}

/// Parse the supported TPTP-CNF subset.
pub fn parse(text: &str, name: &str) -> Result<Problem, ParseError> {
    let mut p = Parser::new(text)?;
    let mut clauses = Vec::new();
    let mut sig = Signature::new();
    while !p.at_eof() {
        let (line, col) = p.here();
        let kw = p.name()?;
        match kw.as_str() {
            "cnf" => {}
            "include" => return Err(ParseError { line, col, kind: ParseErrorKind::Include }),
            other => return Err(p.error(format!("unsupported annotated formula `{other}`"))),
        }
        p.expect(Tok::LParen)?;
        let label = p.name()?;
        p.expect(Tok::Comma)?;
        let _role = p.name()?;
        p.expect(Tok::Comma)?;
        let (head, body) = p.formula()?;
        p.expect(Tok::RParen)?;
        p.expect(Tok::Dot)?;
        let clause = Clause::new(head, body).with_label(label);
        sig.register_clause(&clause).map_err(|e| ParseError { line, col, kind: e.into() })?;
        clauses.push(clause);
    }
    Ok(Problem { name: name.to_string(), clauses, signature: sig, domain_constant: None })
}
