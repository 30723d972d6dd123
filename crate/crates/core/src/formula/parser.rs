//! Formula DSL.
//!
//! ```text
//! instance: x; params: y1,y2; alphabet: a,b,c
//! Ra(x) & exists z. (z < x & Rb(z)) -> x <= y1
//! ```
//!
//! Atoms: `Ra(x)`, `x < y`, `x <= y`, `x = y`, `x > y`, `x >= y`,
//! `x in X`, `true`, `false`. Connectives by increasing binding strength:
//! `->` (right associative), `|`, `&`, `!`. Quantifiers `exists v.`,
//! `forall v.`, `existsSet V.`, `forallSet V.` extend as far right as
//! possible. Lines starting with `#` are comments.

use super::{Alphabet, Formula, Node, SetVar, Var};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ParseError {
    #[error("syntax error at byte {pos}: {msg}")]
    Syntax { pos: usize, msg: String },
    #[error("unbound variable `{0}`")]
    UnboundVariable(String),
    #[error("`{0}` is used as the wrong sort of variable")]
    SortMismatch(String),
    #[error("bad header: {0}")]
    Header(String),
}

fn syntax(pos: usize, msg: impl Into<String>) -> ParseError {
    ParseError::Syntax {
        pos,
        msg: msg.into(),
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Tok {
    Ident(String),
    LParen,
    RParen,
    Dot,
    And,
    Or,
    Not,
    Arrow,
    Lt,
    Le,
    Gt,
    Ge,
    Eq,
    End,
}

fn lex(text: &str, base: usize) -> Result<Vec<(Tok, usize)>, ParseError> {
    let bytes = text.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i];
        let pos = base + i;
        if c == b'#' {
            while i < bytes.len() && bytes[i] != b'\n' {
                i += 1;
            }
            continue;
        }
        if c.is_ascii_whitespace() {
            i += 1;
            continue;
        }
        let two = |b: u8| i + 1 < bytes.len() && bytes[i + 1] == b;
        let (tok, len) = match c {
            b'(' => (Tok::LParen, 1),
            b')' => (Tok::RParen, 1),
            b'.' => (Tok::Dot, 1),
            b'&' => (Tok::And, 1),
            b'|' => (Tok::Or, 1),
            b'!' => (Tok::Not, 1),
            b'=' => (Tok::Eq, 1),
            b'-' if two(b'>') => (Tok::Arrow, 2),
            b'<' if two(b'=') => (Tok::Le, 2),
            b'<' => (Tok::Lt, 1),
            b'>' if two(b'=') => (Tok::Ge, 2),
            b'>' => (Tok::Gt, 1),
            c if c.is_ascii_alphanumeric() || c == b'_' => {
                let start = i;
                while i < bytes.len()
                    && (bytes[i].is_ascii_alphanumeric() || bytes[i] == b'_' || bytes[i] == b'\'')
                {
                    i += 1;
                }
                out.push((Tok::Ident(text[start..i].to_string()), pos));
                continue;
            }
            _ => return Err(syntax(pos, format!("unexpected character {:?}", c as char))),
        };
        out.push((tok, pos));
        i += len;
    }
    out.push((Tok::End, base + text.len()));
    Ok(out)
}

#[derive(Clone, Copy)]
enum Binding {
    First(Var),
    Set(SetVar),
}

struct Parser<'a> {
    toks: Vec<(Tok, usize)>,
    at: usize,
    alphabet: &'a Alphabet,
    scope: Vec<(String, Binding)>,
    var_names: Vec<String>,
    set_names: Vec<String>,
}

impl Parser<'_> {
    fn peek(&self) -> &Tok {
        &self.toks[self.at].0
    }

    fn pos(&self) -> usize {
        self.toks[self.at].1
    }

    fn bump(&mut self) -> Tok {
        let t = self.toks[self.at].0.clone();
        if t != Tok::End {
            self.at += 1;
        }
        t
    }

    fn expect(&mut self, t: Tok, what: &str) -> Result<(), ParseError> {
        if *self.peek() == t {
            self.bump();
            Ok(())
        } else {
            Err(syntax(self.pos(), format!("expected {what}")))
        }
    }

    fn ident(&mut self) -> Result<String, ParseError> {
        match self.bump() {
            Tok::Ident(s) if !is_keyword(&s) => Ok(s),
            _ => Err(syntax(self.toks[self.at.saturating_sub(1)].1, "expected a variable name")),
        }
    }

    fn fresh_var(&mut self, name: &str) -> Var {
        self.var_names.push(name.to_string());
        Var(self.var_names.len() as u32 - 1)
    }

    fn fresh_set(&mut self, name: &str) -> SetVar {
        self.set_names.push(name.to_string());
        SetVar(self.set_names.len() as u32 - 1)
    }

    fn lookup(&self, name: &str) -> Result<Binding, ParseError> {
        self.scope
            .iter()
            .rev()
            .find(|(n, _)| n == name)
            .map(|(_, b)| *b)
            .ok_or_else(|| ParseError::UnboundVariable(name.to_string()))
    }

    fn first_order(&self, name: &str) -> Result<Var, ParseError> {
        match self.lookup(name)? {
            Binding::First(v) => Ok(v),
            Binding::Set(_) => Err(ParseError::SortMismatch(name.to_string())),
        }
    }

    fn set_var(&self, name: &str) -> Result<SetVar, ParseError> {
        match self.lookup(name)? {
            Binding::Set(v) => Ok(v),
            Binding::First(_) => Err(ParseError::SortMismatch(name.to_string())),
        }
    }

    fn implication(&mut self) -> Result<Node, ParseError> {
        let lhs = self.disjunction()?;
        if *self.peek() == Tok::Arrow {
            self.bump();
            let rhs = self.implication()?;
            return Ok(Node::Implies(Box::new(lhs), Box::new(rhs)));
        }
        Ok(lhs)
    }

    fn disjunction(&mut self) -> Result<Node, ParseError> {
        let mut lhs = self.conjunction()?;
        while *self.peek() == Tok::Or {
            self.bump();
            let rhs = self.conjunction()?;
            lhs = Node::Or(Box::new(lhs), Box::new(rhs));
        }
        Ok(lhs)
    }

    fn conjunction(&mut self) -> Result<Node, ParseError> {
        let mut lhs = self.unary()?;
        while *self.peek() == Tok::And {
            self.bump();
            let rhs = self.unary()?;
            lhs = Node::And(Box::new(lhs), Box::new(rhs));
        }
        Ok(lhs)
    }

    fn unary(&mut self) -> Result<Node, ParseError> {
        match self.peek().clone() {
            Tok::Not => {
                self.bump();
                Ok(Node::Not(Box::new(self.unary()?)))
            }
            Tok::Ident(kw)
                if matches!(kw.as_str(), "exists" | "forall" | "existsSet" | "forallSet") =>
            {
                self.bump();
                let name = self.ident()?;
                self.expect(Tok::Dot, "`.` after quantified variable")?;
                let set = kw.ends_with("Set");
                let binding = if set {
                    Binding::Set(self.fresh_set(&name))
                } else {
                    Binding::First(self.fresh_var(&name))
                };
                self.scope.push((name, binding));
                let body = Box::new(self.implication()?);
                self.scope.pop();
                Ok(match (kw.as_str(), binding) {
                    ("exists", Binding::First(v)) => Node::Exists(v, body),
                    ("forall", Binding::First(v)) => Node::Forall(v, body),
                    ("existsSet", Binding::Set(v)) => Node::ExistsSet(v, body),
                    (_, Binding::Set(v)) => Node::ForallSet(v, body),
                    _ => unreachable!(),
                })
            }
            _ => self.primary(),
        }
    }

    fn primary(&mut self) -> Result<Node, ParseError> {
        let pos = self.pos();
        match self.bump() {
            Tok::LParen => {
                let inner = self.implication()?;
                self.expect(Tok::RParen, "`)`")?;
                Ok(inner)
            }
            Tok::Ident(s) if s == "true" => Ok(Node::True),
            Tok::Ident(s) if s == "false" => Ok(Node::False),
            Tok::Ident(s) if *self.peek() == Tok::LParen => {
                let mut chars = s.chars();
                let (Some('R'), Some(sym), None) = (chars.next(), chars.next(), chars.next())
                else {
                    return Err(syntax(pos, format!("`{s}` is not a letter predicate")));
                };
                let symbol = self
                    .alphabet
                    .index_of(sym)
                    .ok_or_else(|| syntax(pos, format!("symbol {sym:?} is not in the alphabet")))?;
                self.bump();
                let name = self.ident()?;
                let var = self.first_order(&name)?;
                self.expect(Tok::RParen, "`)`")?;
                Ok(Node::Label { symbol, var })
            }
            Tok::Ident(lhs) if !is_keyword(&lhs) => {
                let op_pos = self.pos();
                let op = self.bump();
                if op == Tok::Ident("in".into()) {
                    let x = self.first_order(&lhs)?;
                    let set = self.ident()?;
                    return Ok(Node::Member(x, self.set_var(&set)?));
                }
                let a = self.first_order(&lhs)?;
                let rhs = self.ident()?;
                let b = self.first_order(&rhs)?;
                Ok(match op {
                    Tok::Lt => Node::Less(a, b),
                    Tok::Le => Node::LessEq(a, b),
                    Tok::Eq => Node::Equal(a, b),
                    Tok::Gt => Node::Less(b, a),
                    Tok::Ge => Node::LessEq(b, a),
                    _ => return Err(syntax(op_pos, "expected a comparison or `in`")),
                })
            }
            _ => Err(syntax(pos, "expected an atom, `(`, `!` or a quantifier")),
        }
    }
}

fn is_keyword(s: &str) -> bool {
    matches!(
        s,
        "exists" | "forall" | "existsSet" | "forallSet" | "in" | "true" | "false"
    )
}

struct Header {
    instance: Vec<String>,
    params: Vec<String>,
    alphabet: Alphabet,
}

fn parse_header(line: &str) -> Result<Header, ParseError> {
    let mut instance = None;
    let mut params = None;
    let mut alphabet = None;
    for part in line.split(';') {
        let part = part.trim();
        if part.is_empty() {
            continue;
        }
        let (key, value) = part
            .split_once(':')
            .ok_or_else(|| ParseError::Header(format!("`{part}` is not `key: value`")))?;
        let list: Vec<String> = value
            .split(',')
            .map(|s| s.trim().to_string())
            .filter(|s| !s.is_empty())
            .collect();
        match key.trim() {
            "instance" => instance = Some(list),
            "params" => params = Some(list),
            "alphabet" => {
                let mut syms = Vec::new();
                for s in &list {
                    let mut cs = s.chars();
                    match (cs.next(), cs.next()) {
                        (Some(c), None) => syms.push(c),
                        _ => {
                            return Err(ParseError::Header(format!(
                                "alphabet symbol `{s}` must be one character"
                            )))
                        }
                    }
                }
                alphabet =
                    Some(Alphabet::new(syms).map_err(|e| ParseError::Header(e.to_string()))?);
            }
            other => return Err(ParseError::Header(format!("unknown key `{other}`"))),
        }
    }
    let instance = instance.ok_or_else(|| ParseError::Header("missing `instance:`".into()))?;
    let params = params.unwrap_or_default();
    let alphabet = alphabet.ok_or_else(|| ParseError::Header("missing `alphabet:`".into()))?;
    for (i, n) in instance.iter().chain(&params).enumerate() {
        let valid = n
            .chars()
            .next()
            .is_some_and(|c| c.is_ascii_alphabetic() || c == '_')
            && n.chars()
                .all(|c| c.is_ascii_alphanumeric() || c == '_' || c == '\'')
            && !is_keyword(n);
        if !valid {
            return Err(ParseError::Header(format!("bad variable name `{n}`")));
        }
        if instance.iter().chain(&params).take(i).any(|m| m == n) {
            return Err(ParseError::Header(format!("variable `{n}` declared twice")));
        }
    }
    Ok(Header {
        instance,
        params,
        alphabet,
    })
}

/// Parses a header line followed by a formula body.
pub fn parse_formula(text: &str) -> Result<Formula, ParseError> {
    let mut offset = 0;
    let mut header = None;
    for line in text.split_inclusive('\n') {
        let trimmed = line.trim();
        offset += line.len();
        if trimmed.is_empty() || trimmed.starts_with('#') {
            continue;
        }
        header = Some(parse_header(trimmed)?);
        break;
    }
    let header = header.ok_or_else(|| ParseError::Header("missing header line".into()))?;
    parse_body(
        &text[offset.min(text.len())..],
        offset,
        &header.instance,
        &header.params,
        header.alphabet,
    )
}

/// Parses a formula body against an explicit variable partition.
pub(crate) fn parse_body(
    body: &str,
    base: usize,
    instance: &[String],
    params: &[String],
    alphabet: Alphabet,
) -> Result<Formula, ParseError> {
    let toks = lex(body, base)?;
    let mut p = Parser {
        toks,
        at: 0,
        alphabet: &alphabet,
        scope: Vec::new(),
        var_names: Vec::new(),
        set_names: Vec::new(),
    };
    let declare = |p: &mut Parser, names: &[String]| {
        names
            .iter()
            .map(|n| {
                let v = p.fresh_var(n);
                p.scope.push((n.clone(), Binding::First(v)));
                v
            })
            .collect::<Vec<_>>()
    };
    let instance = declare(&mut p, instance);
    let params = declare(&mut p, params);
    if *p.peek() == Tok::End {
        return Err(syntax(p.pos(), "empty formula body"));
    }
    let root = p.implication()?;
    if *p.peek() != Tok::End {
        return Err(syntax(p.pos(), "unexpected trailing input"));
    }
    let Parser {
        var_names,
        set_names,
        ..
    } = p;
    Ok(Formula {
        root,
        instance,
        params,
        alphabet,
        var_names,
        set_names,
    })
}

impl Formula {
    /// Builds a formula from a body and an explicit variable partition,
    /// without a header line.
    pub fn with_vars(
        body: &str,
        instance: &[&str],
        params: &[&str],
        alphabet: &Alphabet,
    ) -> Result<Formula, ParseError> {
        let own = |v: &[&str]| v.iter().map(|s| s.to_string()).collect::<Vec<_>>();
        let header = format!(
            "instance: {}; params: {}; alphabet: {}",
            instance.join(","),
            params.join(","),
            alphabet
        );
        parse_header(&header)?;
        parse_body(body, 0, &own(instance), &own(params), alphabet.clone())
    }
}
