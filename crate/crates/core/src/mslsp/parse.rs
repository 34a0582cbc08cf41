//! Surface syntax.
//!
//! ```text
//! input    := formula (';' formula)* ';'?
//! formula  := iff
//! iff      := imp ('<->' imp)*
//! imp      := or ('->' imp)?
//! or       := and ('or' and)*
//! and      := unary ('and' unary)*
//! unary    := 'not' unary | quant | '(' formula ')' | 'true' | 'false' | atom
//! quant    := Q ident (':' sort)? ('in' term)? '.' formula
//! Q        := forall_e | forall_s | exists_e | exists_s | exists_e_unguarded
//!           | forall | exists                      (these two need ': sort')
//! atom     := pred '(' term (',' term)* ')'
//! term     := ident | union(t, t) | sing(t) | replaceInBy(t, t, t)
//! ```
//!
//! Element existentials need a guard: `exists_e x in t. φ` stands for
//! `exists_e_unguarded x. (in(x, t) and φ)`. A
//! quantifier body extends as far right as possible. Several sentences
//! separated by `;` are conjoined. `#` starts a comment.

use thiserror::Error;

use super::ast::{Atom, Formula, Pred, Sort, Term, Variable};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("{line}:{col}: {kind}")]
pub struct ParseError {
    pub line: usize,
    pub col: usize,
    pub kind: ParseErrorKind,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseErrorKind {
    #[error("unexpected character `{0}`")]
    Lex(char),
    #[error("expected {expected}, found {found}")]
    Unexpected { expected: String, found: String },
    #[error("{what} expects a {expected} term, got a {found} term")]
    Sort {
        what: String,
        expected: Sort,
        found: Sort,
    },
    #[error("unbound variable `{0}`")]
    Unbound(String),
    #[error("`{name}` takes {expected} argument(s), got {found}")]
    Arity {
        name: String,
        expected: usize,
        found: usize,
    },
    #[error("unknown symbol `{0}`")]
    UnknownSymbol(String),
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Tok {
    Ident(String),
    LParen,
    RParen,
    Comma,
    Dot,
    Colon,
    Semi,
    Arrow,
    DArrow,
    Eof,
}

impl Tok {
    fn describe(&self) -> String {
        match self {
            Tok::Ident(s) => format!("`{s}`"),
            Tok::LParen => "`(`".into(),
            Tok::RParen => "`)`".into(),
            Tok::Comma => "`,`".into(),
            Tok::Dot => "`.`".into(),
            Tok::Colon => "`:`".into(),
            Tok::Semi => "`;`".into(),
            Tok::Arrow => "`->`".into(),
            Tok::DArrow => "`<->`".into(),
            Tok::Eof => "end of input".into(),
        }
    }
}

struct Spanned {
    tok: Tok,
    line: usize,
    col: usize,
}

fn lex(text: &str) -> Result<Vec<Spanned>, ParseError> {
    let mut out = Vec::new();
    let chars: Vec<char> = text.chars().collect();
    let (mut i, mut line, mut col) = (0, 1, 1);
    while i < chars.len() {
        let c = chars[i];
        if c == '\n' {
            i += 1;
            line += 1;
            col = 1;
            continue;
        }
        if c.is_whitespace() {
            i += 1;
            col += 1;
            continue;
        }
        if c == '#' {
            while i < chars.len() && chars[i] != '\n' {
                i += 1;
            }
            continue;
        }
        let start = i;
        let tok = if c.is_alphabetic() || c == '_' {
            while i < chars.len() && (chars[i].is_alphanumeric() || chars[i] == '_') {
                i += 1;
            }
            Tok::Ident(chars[start..i].iter().collect())
        } else if c == '-' && chars.get(i + 1) == Some(&'>') {
            i += 2;
            Tok::Arrow
        } else if c == '<' && chars.get(i + 1) == Some(&'-') && chars.get(i + 2) == Some(&'>') {
            i += 3;
            Tok::DArrow
        } else {
            i += 1;
            match c {
                '(' => Tok::LParen,
                ')' => Tok::RParen,
                ',' => Tok::Comma,
                '.' => Tok::Dot,
                ':' => Tok::Colon,
                ';' => Tok::Semi,
                other => {
                    return Err(ParseError {
                        line,
                        col,
                        kind: ParseErrorKind::Lex(other),
                    })
                }
            }
        };
        out.push(Spanned { tok, line, col });
        col += i - start;
    }
    out.push(Spanned {
        tok: Tok::Eof,
        line,
        col,
    });
    Ok(out)
}

const KEYWORDS: &[&str] = &[
    "forall_e",
    "forall_s",
    "exists_e",
    "exists_s",
    "exists_e_unguarded",
    "forall",
    "exists",
    "and",
    "or",
    "not",
    "true",
    "false",
    "union",
    "sing",
    "replaceInBy",
];

struct Parser {
    toks: Vec<Spanned>,
    pos: usize,
    scope: Vec<Variable>,
    next_id: u32,
    unbound: Option<ParseError>,
}

impl Parser {
    fn peek(&self) -> &Tok {
        &self.toks[self.pos].tok
    }

    fn err(&self, kind: ParseErrorKind) -> ParseError {
        let s = &self.toks[self.pos];
        ParseError {
            line: s.line,
            col: s.col,
            kind,
        }
    }

    fn err_at(&self, pos: usize, kind: ParseErrorKind) -> ParseError {
        let s = &self.toks[pos];
        ParseError {
            line: s.line,
            col: s.col,
            kind,
        }
    }

    fn unexpected(&self, expected: &str) -> ParseError {
        self.err(ParseErrorKind::Unexpected {
            expected: expected.to_string(),
            found: self.peek().describe(),
        })
    }

    fn bump(&mut self) -> Tok {
        let tok = self.toks[self.pos].tok.clone();
        if tok != Tok::Eof {
            self.pos += 1;
        }
        tok
    }

    fn eat(&mut self, tok: &Tok) -> bool {
        if self.peek() == tok {
            self.bump();
            true
        } else {
            false
        }
    }

    fn expect(&mut self, tok: Tok) -> Result<(), ParseError> {
        if self.eat(&tok) {
            Ok(())
        } else {
            Err(self.unexpected(&tok.describe()))
        }
    }

    fn is_keyword(&self, kw: &str) -> bool {
        matches!(self.peek(), Tok::Ident(s) if s == kw)
    }

    fn ident(&mut self) -> Result<String, ParseError> {
        match self.peek().clone() {
            Tok::Ident(s) if !KEYWORDS.contains(&s.as_str()) => {
                self.bump();
                Ok(s)
            }
            _ => Err(self.unexpected("an identifier")),
        }
    }

    fn input(&mut self) -> Result<Formula, ParseError> {
        let mut result = self.formula()?;
        while self.eat(&Tok::Semi) {
            if *self.peek() == Tok::Eof {
                break;
            }
            let next = self.formula()?;
            result = Formula::and(result, next);
        }
        if *self.peek() != Tok::Eof {
            return Err(self.unexpected("`;` or end of input"));
        }
        Ok(result)
    }

    fn formula(&mut self) -> Result<Formula, ParseError> {
        let mut lhs = self.imp()?;
        while self.eat(&Tok::DArrow) {
            let rhs = self.imp()?;
            lhs = Formula::Iff(Box::new(lhs), Box::new(rhs));
        }
        Ok(lhs)
    }

    fn imp(&mut self) -> Result<Formula, ParseError> {
        let lhs = self.or()?;
        if self.eat(&Tok::Arrow) {
            let rhs = self.imp()?;
            return Ok(Formula::Implies(Box::new(lhs), Box::new(rhs)));
        }
        Ok(lhs)
    }

    fn or(&mut self) -> Result<Formula, ParseError> {
        let mut lhs = self.and()?;
        while self.is_keyword("or") {
            self.bump();
            let rhs = self.and()?;
            lhs = Formula::or(lhs, rhs);
        }
        Ok(lhs)
    }

    fn and(&mut self) -> Result<Formula, ParseError> {
        let mut lhs = self.unary()?;
        while self.is_keyword("and") {
            self.bump();
            let rhs = self.unary()?;
            lhs = Formula::and(lhs, rhs);
        }
        Ok(lhs)
    }

    fn unary(&mut self) -> Result<Formula, ParseError> {
        let Tok::Ident(word) = self.peek().clone() else {
            if self.eat(&Tok::LParen) {
                let f = self.formula()?;
                self.expect(Tok::RParen)?;
                return Ok(f);
            }
            return Err(self.unexpected("a formula"));
        };
        match word.as_str() {
            "not" => {
                self.bump();
                Ok(Formula::not(self.unary()?))
            }
            "true" | "false" => {
                self.bump();
                Ok(Formula::Const(word == "true"))
            }
            "forall_e" | "forall_s" | "exists_e" | "exists_s" | "exists_e_unguarded" | "forall"
            | "exists" => self.quantifier(&word),
            _ => self.atom(),
        }
    }

    fn sort_annotation(&mut self) -> Result<Option<Sort>, ParseError> {
        if !self.eat(&Tok::Colon) {
            return Ok(None);
        }
        match self.bump() {
            Tok::Ident(s) if s == "elem" => Ok(Some(Sort::Elem)),
            Tok::Ident(s) if s == "set" => Ok(Some(Sort::Set)),
            _ => {
                self.pos -= 1;
                Err(self.unexpected("`elem` or `set`"))
            }
        }
    }

    fn quantifier(&mut self, kw: &str) -> Result<Formula, ParseError> {
        self.bump();
        let name = self.ident()?;
        let annotated = self.sort_annotation()?;
        let fixed = match kw {
            "forall_e" | "exists_e" | "exists_e_unguarded" => Some(Sort::Elem),
            "forall_s" | "exists_s" => Some(Sort::Set),
            _ => None,
        };
        let sort = match (fixed, annotated) {
            (Some(f), Some(a)) if f != a => {
                return Err(self.err(ParseErrorKind::Sort {
                    what: format!("`{kw}`"),
                    expected: f,
                    found: a,
                }))
            }
            (Some(s), _) | (None, Some(s)) => s,
            (None, None) => return Err(self.unexpected("`: elem` or `: set`")),
        };
        let universal = kw.starts_with("forall");
        let guard_pos = self.pos;
        let guard = if self.is_keyword("in") {
            self.bump();
            if universal || sort != Sort::Elem || kw == "exists_e_unguarded" {
                return Err(self.err_at(
                    guard_pos,
                    ParseErrorKind::Unexpected {
                        expected: "`.`".into(),
                        found: "a set guard (only element existentials take one)".into(),
                    },
                ));
            }
            Some(self.term_of(Sort::Set, "a set guard")?)
        } else if !universal && sort == Sort::Elem && kw != "exists_e_unguarded" {
            return Err(self.unexpected("`in` and a guard term"));
        } else {
            None
        };
        self.expect(Tok::Dot)?;
        let var = Variable {
            name,
            sort,
            id: self.next_id,
        };
        self.next_id += 1;
        self.scope.push(var.clone());
        let body = self.formula();
        self.scope.pop();
        let mut body = body?;
        if let Some(t) = guard {
            let guard = Formula::atom(Pred::In, vec![Term::Var(var.clone()), t]);
            body = Formula::and(guard, body);
        }
        Ok(if universal {
            Formula::Forall(var, Box::new(body))
        } else {
            Formula::Exists(var, Box::new(body))
        })
    }

    fn atom(&mut self) -> Result<Formula, ParseError> {
        let start = self.pos;
        let Tok::Ident(name) = self.bump() else {
            unreachable!("caller checked for an identifier")
        };
        let Some(pred) = Pred::from_name(&name) else {
            return Err(self.err_at(start, ParseErrorKind::UnknownSymbol(name)));
        };
        let args = self.args()?;
        match pred.signature() {
            Some(sig) => {
                if args.len() != sig.len() {
                    return Err(self.err_at(
                        start,
                        ParseErrorKind::Arity {
                            name,
                            expected: sig.len(),
                            found: args.len(),
                        },
                    ));
                }
                for ((pos, term), &want) in args.iter().zip(sig) {
                    if term.sort() != want {
                        return Err(self.err_at(
                            *pos,
                            ParseErrorKind::Sort {
                                what: format!("`{name}`"),
                                expected: want,
                                found: term.sort(),
                            },
                        ));
                    }
                }
            }
            None => {
                if args.len() != 2 {
                    return Err(self.err_at(
                        start,
                        ParseErrorKind::Arity {
                            name,
                            expected: 2,
                            found: args.len(),
                        },
                    ));
                }
                if args[0].1.sort() != args[1].1.sort() {
                    return Err(self.err_at(
                        args[1].0,
                        ParseErrorKind::Sort {
                            what: "`eq`".into(),
                            expected: args[0].1.sort(),
                            found: args[1].1.sort(),
                        },
                    ));
                }
            }
        }
        Ok(Formula::Atom(Atom {
            pred,
            args: args.into_iter().map(|(_, t)| t).collect(),
        }))
    }

    /// Parenthesized argument list, each term paired with its token index.
    fn args(&mut self) -> Result<Vec<(usize, Term)>, ParseError> {
        self.expect(Tok::LParen)?;
        let mut args = Vec::new();
        loop {
            let pos = self.pos;
            args.push((pos, self.term()?));
            if self.eat(&Tok::Comma) {
                continue;
            }
            self.expect(Tok::RParen)?;
            return Ok(args);
        }
    }

    fn term_of(&mut self, sort: Sort, what: &str) -> Result<Term, ParseError> {
        let pos = self.pos;
        let t = self.term()?;
        if t.sort() != sort {
            return Err(self.err_at(
                pos,
                ParseErrorKind::Sort {
                    what: what.to_string(),
                    expected: sort,
                    found: t.sort(),
                },
            ));
        }
        Ok(t)
    }

    fn term(&mut self) -> Result<Term, ParseError> {
        let start = self.pos;
        let Tok::Ident(name) = self.peek().clone() else {
            return Err(self.unexpected("a term"));
        };
        let sig: &[Sort] = match name.as_str() {
            "union" => &[Sort::Set, Sort::Set],
            "sing" => &[Sort::Elem],
            "replaceInBy" => &[Sort::Elem, Sort::Set, Sort::Elem],
            _ => {
                self.bump();
                if *self.peek() == Tok::LParen {
                    return Err(self.err_at(start, ParseErrorKind::UnknownSymbol(name)));
                }
                if KEYWORDS.contains(&name.as_str()) {
                    self.pos = start;
                    return Err(self.unexpected("a term"));
                }
                if let Some(v) = self.scope.iter().rev().find(|v| v.name == name) {
                    return Ok(Term::Var(v.clone()));
                }
                // Keep going with a placeholder so that a sort error later in
                // the same atom is reported first. Lowercase names are taken
                // to be elements, others sets.
                if self.unbound.is_none() {
                    self.unbound = Some(self.err_at(start, ParseErrorKind::Unbound(name.clone())));
                }
                let lower = name.chars().next().is_some_and(char::is_lowercase);
                return Ok(Term::Var(Variable {
                    name,
                    sort: if lower { Sort::Elem } else { Sort::Set },
                    id: u32::MAX,
                }));
            }
        };
        self.bump();
        let args = self.args()?;
        if args.len() != sig.len() {
            return Err(self.err_at(
                start,
                ParseErrorKind::Arity {
                    name,
                    expected: sig.len(),
                    found: args.len(),
                },
            ));
        }
        for ((pos, t), &want) in args.iter().zip(sig) {
            if t.sort() != want {
                return Err(self.err_at(
                    *pos,
                    ParseErrorKind::Sort {
                        what: format!("`{name}`"),
                        expected: want,
                        found: t.sort(),
                    },
                ));
            }
        }
        let mut it = args.into_iter().map(|(_, t)| Box::new(t));
        let mut next = || it.next().unwrap();
        Ok(match name.as_str() {
            "union" => Term::Union(next(), next()),
            "sing" => Term::Sing(next()),
            _ => Term::ReplaceInBy(next(), next(), next()),
        })
    }
}

/// Parses a closed, well-sorted formula.
pub fn parse(text: &str) -> Result<Formula, ParseError> {
    let mut p = Parser {
        toks: lex(text)?,
        pos: 0,
        scope: Vec::new(),
        next_id: 0,
        unbound: None,
    };
    let f = p.input()?;
    match p.unbound {
        Some(err) => Err(err),
        None => Ok(f),
    }
}
