//! Regular-expression front end.
//!
//! Grammar: symbols are non-metacharacter scalars, `|` is union,
//! juxtaposition concatenation, postfix `*` `+` `?`, parentheses group, `_`
//! is the empty word, `[]` is the empty set, and `\` escapes metacharacters.

use std::collections::BTreeSet;
use std::fmt;

use crate::error::Error;
use crate::words::Symbol;

use super::Nfa;

const METACHARACTERS: &[char] = &['|', '*', '+', '?', '(', ')', '_', '\\', '[', ']'];

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Regex {
    EmptySet,
    Epsilon,
    Symbol(Symbol),
    Concat(Box<Regex>, Box<Regex>),
    Union(Box<Regex>, Box<Regex>),
    Star(Box<Regex>),
    Plus(Box<Regex>),
    Optional(Box<Regex>),
}

impl Regex {
    pub fn alphabet(&self) -> BTreeSet<Symbol> {
        let mut out = BTreeSet::new();
        fn walk(r: &Regex, out: &mut BTreeSet<Symbol>) {
            match r {
                Regex::EmptySet | Regex::Epsilon => {}
                Regex::Symbol(s) => {
                    out.insert(*s);
                }
                Regex::Concat(a, b) | Regex::Union(a, b) => {
                    walk(a, out);
                    walk(b, out);
                }
                Regex::Star(a) | Regex::Plus(a) | Regex::Optional(a) => walk(a, out),
            }
        }
        walk(self, &mut out);
        out
    }

    fn precedence(&self) -> u8 {
        match self {
            Regex::Union(..) => 0,
            Regex::Concat(..) => 1,
            Regex::Star(..) | Regex::Plus(..) | Regex::Optional(..) => 2,
            _ => 3,
        }
    }

    fn fmt_prec(&self, f: &mut fmt::Formatter<'_>, min: u8) -> fmt::Result {
        let prec = self.precedence();
        if prec < min {
            write!(f, "(")?;
        }
        match self {
            Regex::EmptySet => write!(f, "[]")?,
            Regex::Epsilon => write!(f, "_")?,
            Regex::Symbol(s) => {
                if METACHARACTERS.contains(&s.0) {
                    write!(f, "\\{}", s.0)?;
                } else {
                    write!(f, "{}", s.0)?;
                }
            }
            Regex::Concat(a, b) => {
                a.fmt_prec(f, 1)?;
                b.fmt_prec(f, 2)?;
            }
            Regex::Union(a, b) => {
                a.fmt_prec(f, 0)?;
                write!(f, "|")?;
                b.fmt_prec(f, 1)?;
            }
            Regex::Star(a) => {
                a.fmt_prec(f, 3)?;
                write!(f, "*")?;
            }
            Regex::Plus(a) => {
                a.fmt_prec(f, 3)?;
                write!(f, "+")?;
            }
            Regex::Optional(a) => {
                a.fmt_prec(f, 3)?;
                write!(f, "?")?;
            }
        }
        if prec < min {
            write!(f, ")")?;
        }
        Ok(())
    }
}

impl fmt::Display for Regex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.fmt_prec(f, 0)
    }
}

struct Parser {
    chars: Vec<char>,
    pos: usize,
    symbols: BTreeSet<char>,
}

impl Parser {
    fn peek(&self) -> Option<char> {
        self.chars.get(self.pos).copied()
    }

    fn err(&self, reason: &str) -> Error {
        Error::RegexSyntax {
            pos: self.pos + 1,
            reason: reason.to_string(),
        }
    }

    // Alphabets are capped at 64 symbols crate-wide.
    fn symbol(&mut self, c: char) -> Result<(), Error> {
        if self.symbols.insert(c) && self.symbols.len() > 64 {
            return Err(self.err("more than 64 distinct symbols"));
        }
        Ok(())
    }

    fn parse_union(&mut self) -> Result<Regex, Error> {
        let mut left = self.parse_concat()?;
        while self.peek() == Some('|') {
            self.pos += 1;
            let right = self.parse_concat()?;
            left = Regex::Union(Box::new(left), Box::new(right));
        }
        Ok(left)
    }

    fn parse_concat(&mut self) -> Result<Regex, Error> {
        let mut parts = Vec::new();
        loop {
            match self.peek() {
                None | Some('|') | Some(')') => break,
                _ => parts.push(self.parse_postfix()?),
            }
        }
        let mut iter = parts.into_iter();
        let first = iter.next().ok_or_else(|| self.err("expected expression"))?;
        Ok(iter.fold(first, |acc, r| Regex::Concat(Box::new(acc), Box::new(r))))
    }

    fn parse_postfix(&mut self) -> Result<Regex, Error> {
        let mut atom = self.parse_atom()?;
        loop {
            match self.peek() {
                Some('*') => {
                    self.pos += 1;
                    atom = Regex::Star(Box::new(atom));
                }
                Some('+') => {
                    self.pos += 1;
                    atom = Regex::Plus(Box::new(atom));
                }
                Some('?') => {
                    self.pos += 1;
                    atom = Regex::Optional(Box::new(atom));
                }
                _ => break,
            }
        }
        Ok(atom)
    }

    fn parse_atom(&mut self) -> Result<Regex, Error> {
        match self.peek() {
            None => Err(self.err("unexpected end of input")),
            Some('(') => {
                let open = self.pos;
                self.pos += 1;
                let unclosed = || Error::RegexSyntax {
                    pos: open + 1,
                    reason: "unclosed parenthesis".into(),
                };
                let inner = match self.parse_union() {
                    Ok(r) => r,
                    // Blame the opening parenthesis when the input just ran out.
                    Err(_) if self.peek().is_none() => return Err(unclosed()),
                    Err(e) => return Err(e),
                };
                if self.peek() != Some(')') {
                    return Err(unclosed());
                }
                self.pos += 1;
                Ok(inner)
            }
            Some('[') => {
                self.pos += 1;
                if self.peek() != Some(']') {
                    return Err(self.err("expected `]` to close the empty-set literal"));
                }
                self.pos += 1;
                Ok(Regex::EmptySet)
            }
            Some('_') => {
                self.pos += 1;
                Ok(Regex::Epsilon)
            }
            Some('\\') => {
                self.pos += 1;
                match self.peek() {
                    Some(c) if METACHARACTERS.contains(&c) => {
                        self.symbol(c)?;
                        self.pos += 1;
                        Ok(Regex::Symbol(Symbol(c)))
                    }
                    Some(_) => Err(self.err("only metacharacters may be escaped")),
                    None => Err(self.err("dangling escape")),
                }
            }
            Some(c) if METACHARACTERS.contains(&c) => Err(self.err(&format!("unexpected `{}`", c))),
            Some(c) => {
                self.symbol(c)?;
                self.pos += 1;
                Ok(Regex::Symbol(Symbol(c)))
            }
        }
    }
}

/// Parses regex text; errors carry the 1-based character position.
pub fn parse_regex(text: &str) -> Result<Regex, Error> {
    let mut p = Parser {
        chars: text.chars().collect(),
        pos: 0,
        symbols: BTreeSet::new(),
    };
    let r = p.parse_union()?;
    if p.pos != p.chars.len() {
        return Err(p.err("trailing input"));
    }
    Ok(r)
}

// Thompson construction with epsilon moves, eliminated before returning.
struct EpsBuilder {
    state_count: usize,
    transitions: Vec<(usize, Option<Symbol>, usize)>,
}

impl EpsBuilder {
    fn fresh(&mut self) -> usize {
        self.state_count += 1;
        self.state_count - 1
    }

    // Returns (entry, exit) of the fragment.
    fn build(&mut self, r: &Regex) -> (usize, usize) {
        match r {
            Regex::EmptySet => (self.fresh(), self.fresh()),
            Regex::Epsilon => {
                let s = self.fresh();
                let t = self.fresh();
                self.transitions.push((s, None, t));
                (s, t)
            }
            Regex::Symbol(sym) => {
                let s = self.fresh();
                let t = self.fresh();
                self.transitions.push((s, Some(*sym), t));
                (s, t)
            }
            Regex::Concat(a, b) => {
                let (s1, t1) = self.build(a);
                let (s2, t2) = self.build(b);
                self.transitions.push((t1, None, s2));
                (s1, t2)
            }
            Regex::Union(a, b) => {
                let s = self.fresh();
                let t = self.fresh();
                let (s1, t1) = self.build(a);
                let (s2, t2) = self.build(b);
                self.transitions.push((s, None, s1));
                self.transitions.push((s, None, s2));
                self.transitions.push((t1, None, t));
                self.transitions.push((t2, None, t));
                (s, t)
            }
            Regex::Star(a) => {
                let s = self.fresh();
                let t = self.fresh();
                let (s1, t1) = self.build(a);
                self.transitions.push((s, None, s1));
                self.transitions.push((s, None, t));
                self.transitions.push((t1, None, s1));
                self.transitions.push((t1, None, t));
                (s, t)
            }
            Regex::Plus(a) => {
                let (s1, t1) = self.build(a);
                let t = self.fresh();
                self.transitions.push((t1, None, s1));
                self.transitions.push((t1, None, t));
                (s1, t)
            }
            Regex::Optional(a) => {
                let s = self.fresh();
                let t = self.fresh();
                let (s1, t1) = self.build(a);
                self.transitions.push((s, None, s1));
                self.transitions.push((s, None, t));
                self.transitions.push((t1, None, t));
                (s, t)
            }
        }
    }
}

/// NFA accepting exactly the denoted language; the declared alphabet is the
/// set of symbols mentioned in the regex.
pub fn regex_to_nfa(r: &Regex) -> Nfa {
    let mut b = EpsBuilder {
        state_count: 0,
        transitions: Vec::new(),
    };
    let (start, accept) = b.build(r);
    let n = b.state_count;

    // Epsilon closures.
    let mut eps: Vec<Vec<usize>> = vec![Vec::new(); n];
    for &(p, label, q) in &b.transitions {
        if label.is_none() {
            eps[p].push(q);
        }
    }
    let closure = |s: usize| -> BTreeSet<usize> {
        let mut seen = BTreeSet::from([s]);
        let mut stack = vec![s];
        while let Some(p) = stack.pop() {
            for &q in &eps[p] {
                if seen.insert(q) {
                    stack.push(q);
                }
            }
        }
        seen
    };

    let closures: Vec<BTreeSet<usize>> = (0..n).map(closure).collect();
    let mut transitions = BTreeSet::new();
    for p in 0..n {
        for &m in &closures[p] {
            for &(s, label, q) in &b.transitions {
                if s == m {
                    if let Some(sym) = label {
                        for &q2 in &closures[q] {
                            transitions.insert((p, sym, q2));
                        }
                    }
                }
            }
        }
    }
    let accepts: BTreeSet<usize> = (0..n).filter(|&p| closures[p].contains(&accept)).collect();
    Nfa::new(
        n,
        r.alphabet(),
        BTreeSet::from([start]),
        accepts,
        transitions,
    )
    .expect("regex alphabet within bounds")
    .trim()
}
