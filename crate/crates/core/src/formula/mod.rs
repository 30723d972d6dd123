//! MSO formulas over word structures: syntax tree, DSL parser and a
//! direct model checker used as ground truth by the rest of the crate.

mod eval;
mod parser;

use std::fmt;

pub use eval::{label_by_hypothesis, EvalError};
pub use parser::{parse_formula, ParseError};

/// A first-order variable slot. Slots are unique per binding site, so a
/// shadowing quantifier gets a fresh slot.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Var(pub u32);

/// A set (monadic second-order) variable slot.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SetVar(pub u32);

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Node {
    True,
    False,
    /// `R_a(x)`; `symbol` indexes the formula's alphabet.
    Label { symbol: usize, var: Var },
    Less(Var, Var),
    LessEq(Var, Var),
    Equal(Var, Var),
    Member(Var, SetVar),
    Not(Box<Node>),
    And(Box<Node>, Box<Node>),
    Or(Box<Node>, Box<Node>),
    Implies(Box<Node>, Box<Node>),
    Exists(Var, Box<Node>),
    Forall(Var, Box<Node>),
    ExistsSet(SetVar, Box<Node>),
    ForallSet(SetVar, Box<Node>),
}

impl Node {
    pub fn quantifier_rank(&self) -> usize {
        match self {
            Node::True
            | Node::False
            | Node::Label { .. }
            | Node::Less(..)
            | Node::LessEq(..)
            | Node::Equal(..)
            | Node::Member(..) => 0,
            Node::Not(a) => a.quantifier_rank(),
            Node::And(a, b) | Node::Or(a, b) | Node::Implies(a, b) => {
                a.quantifier_rank().max(b.quantifier_rank())
            }
            Node::Exists(_, a) | Node::Forall(_, a) => 1 + a.quantifier_rank(),
            Node::ExistsSet(_, a) | Node::ForallSet(_, a) => 1 + a.quantifier_rank(),
        }
    }

    pub fn has_set_quantifier(&self) -> bool {
        match self {
            Node::ExistsSet(..) | Node::ForallSet(..) => true,
            Node::Not(a) | Node::Exists(_, a) | Node::Forall(_, a) => a.has_set_quantifier(),
            Node::And(a, b) | Node::Or(a, b) | Node::Implies(a, b) => {
                a.has_set_quantifier() || b.has_set_quantifier()
            }
            _ => false,
        }
    }
}

/// A finite alphabet of single-character symbols. Symbol order is the
/// declaration order and determines symbol indices everywhere.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Alphabet {
    symbols: Vec<char>,
}

impl Alphabet {
    pub fn new(symbols: impl IntoIterator<Item = char>) -> Result<Self, AlphabetError> {
        let symbols: Vec<char> = symbols.into_iter().collect();
        if symbols.is_empty() {
            return Err(AlphabetError::Empty);
        }
        for (i, c) in symbols.iter().enumerate() {
            if !c.is_alphanumeric() {
                return Err(AlphabetError::BadSymbol(*c));
            }
            if symbols[..i].contains(c) {
                return Err(AlphabetError::Duplicate(*c));
            }
        }
        Ok(Alphabet { symbols })
    }

    pub fn from_str_symbols(s: &str) -> Result<Self, AlphabetError> {
        Self::new(s.chars())
    }

    pub fn len(&self) -> usize {
        self.symbols.len()
    }

    pub fn is_empty(&self) -> bool {
        self.symbols.is_empty()
    }

    pub fn symbols(&self) -> &[char] {
        &self.symbols
    }

    pub fn index_of(&self, c: char) -> Option<usize> {
        self.symbols.iter().position(|&s| s == c)
    }

    pub fn symbol(&self, i: usize) -> char {
        self.symbols[i]
    }
}

impl fmt::Display for Alphabet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, c) in self.symbols.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{c}")?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum AlphabetError {
    #[error("alphabet is empty")]
    Empty,
    #[error("symbol {0:?} is not alphanumeric")]
    BadSymbol(char),
    #[error("symbol {0:?} declared twice")]
    Duplicate(char),
    #[error("symbol {0:?} is not in the alphabet")]
    UnknownSymbol(char),
    #[error("symbol index {0} is outside the alphabet")]
    SymbolIndex(usize),
}

/// A string viewed as a logical structure with universe `1..=n`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WordStructure {
    alphabet: Alphabet,
    symbols: Vec<u8>,
}

impl WordStructure {
    pub fn new(alphabet: Alphabet, symbols: Vec<u8>) -> Result<Self, AlphabetError> {
        if let Some(&bad) = symbols.iter().find(|&&s| s as usize >= alphabet.len()) {
            return Err(AlphabetError::SymbolIndex(bad as usize));
        }
        Ok(WordStructure { alphabet, symbols })
    }

    /// Parses raw text, one symbol per character. Trailing whitespace is
    /// ignored.
    pub fn parse(alphabet: &Alphabet, text: &str) -> Result<Self, AlphabetError> {
        let symbols = text
            .trim_end()
            .chars()
            .map(|c| {
                alphabet
                    .index_of(c)
                    .map(|i| i as u8)
                    .ok_or(AlphabetError::UnknownSymbol(c))
            })
            .collect::<Result<Vec<_>, _>>()?;
        Ok(WordStructure {
            alphabet: alphabet.clone(),
            symbols,
        })
    }

    pub fn alphabet(&self) -> &Alphabet {
        &self.alphabet
    }

    pub fn len(&self) -> usize {
        self.symbols.len()
    }

    pub fn is_empty(&self) -> bool {
        self.symbols.is_empty()
    }

    /// Symbol index at 1-based position `pos`.
    pub fn at(&self, pos: usize) -> usize {
        self.symbols[pos - 1] as usize
    }

    pub fn symbols(&self) -> &[u8] {
        &self.symbols
    }

    pub fn text(&self) -> String {
        self.symbols
            .iter()
            .map(|&s| self.alphabet.symbol(s as usize))
            .collect()
    }
}

/// A formula `phi(x_1..x_k ; y_1..y_l)` together with its declared
/// variable partition and alphabet.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Formula {
    pub(crate) root: Node,
    pub(crate) instance: Vec<Var>,
    pub(crate) params: Vec<Var>,
    pub(crate) alphabet: Alphabet,
    pub(crate) var_names: Vec<String>,
    pub(crate) set_names: Vec<String>,
}

impl Formula {
    pub fn root(&self) -> &Node {
        &self.root
    }

    pub fn instance_vars(&self) -> &[Var] {
        &self.instance
    }

    pub fn param_vars(&self) -> &[Var] {
        &self.params
    }

    pub fn alphabet(&self) -> &Alphabet {
        &self.alphabet
    }

    /// Number of instance variables.
    pub fn arity(&self) -> usize {
        self.instance.len()
    }

    /// Number of parameter variables.
    pub fn num_params(&self) -> usize {
        self.params.len()
    }

    pub fn quantifier_rank(&self) -> usize {
        self.root.quantifier_rank()
    }

    pub fn var_name(&self, v: Var) -> &str {
        &self.var_names[v.0 as usize]
    }

    pub fn set_name(&self, v: SetVar) -> &str {
        &self.set_names[v.0 as usize]
    }

    pub fn num_var_slots(&self) -> usize {
        self.var_names.len()
    }

    pub fn num_set_slots(&self) -> usize {
        self.set_names.len()
    }

    pub fn param_names(&self) -> Vec<&str> {
        self.params.iter().map(|&v| self.var_name(v)).collect()
    }

    pub fn eval(
        &self,
        word: &WordStructure,
        instance: &[usize],
        params: &[usize],
    ) -> Result<bool, EvalError> {
        eval::eval_semantic(self, word, instance, params)
    }

    fn write_node(&self, f: &mut fmt::Formatter<'_>, node: &Node, prec: u8) -> fmt::Result {
        // precedence: 0 implication/quantifier, 1 or, 2 and, 3 unary/atom
        let v = |x: &Var| self.var_name(*x);
        match node {
            Node::True => f.write_str("true"),
            Node::False => f.write_str("false"),
            Node::Label { symbol, var } => {
                write!(f, "R{}({})", self.alphabet.symbol(*symbol), v(var))
            }
            Node::Less(a, b) => write!(f, "{} < {}", v(a), v(b)),
            Node::LessEq(a, b) => write!(f, "{} <= {}", v(a), v(b)),
            Node::Equal(a, b) => write!(f, "{} = {}", v(a), v(b)),
            Node::Member(a, s) => write!(f, "{} in {}", v(a), self.set_name(*s)),
            Node::Not(a) => {
                f.write_str("!")?;
                self.write_node(f, a, 3)
            }
            Node::And(a, b) => self.write_binary(f, a, " & ", b, 2, prec),
            Node::Or(a, b) => self.write_binary(f, a, " | ", b, 1, prec),
            Node::Implies(a, b) => {
                let paren = prec > 0;
                if paren {
                    f.write_str("(")?;
                }
                self.write_node(f, a, 1)?;
                f.write_str(" -> ")?;
                self.write_node(f, b, 0)?;
                if paren {
                    f.write_str(")")?;
                }
                Ok(())
            }
            Node::Exists(x, a) => self.write_quant(f, "exists", v(x), a, prec),
            Node::Forall(x, a) => self.write_quant(f, "forall", v(x), a, prec),
            Node::ExistsSet(x, a) => self.write_quant(f, "existsSet", self.set_name(*x), a, prec),
            Node::ForallSet(x, a) => self.write_quant(f, "forallSet", self.set_name(*x), a, prec),
        }
    }

    fn write_binary(
        &self,
        f: &mut fmt::Formatter<'_>,
        a: &Node,
        op: &str,
        b: &Node,
        own: u8,
        prec: u8,
    ) -> fmt::Result {
        let paren = prec > own;
        if paren {
            f.write_str("(")?;
        }
        self.write_node(f, a, own)?;
        f.write_str(op)?;
        self.write_node(f, b, own + 1)?;
        if paren {
            f.write_str(")")?;
        }
        Ok(())
    }

    fn write_quant(
        &self,
        f: &mut fmt::Formatter<'_>,
        kw: &str,
        name: &str,
        body: &Node,
        prec: u8,
    ) -> fmt::Result {
        let paren = prec > 0;
        if paren {
            f.write_str("(")?;
        }
        write!(f, "{kw} {name}. ")?;
        self.write_node(f, body, 0)?;
        if paren {
            f.write_str(")")?;
        }
        Ok(())
    }

    /// Header line in DSL form.
    pub fn header(&self) -> String {
        let names = |vs: &[Var]| {
            vs.iter()
                .map(|&v| self.var_name(v).to_string())
                .collect::<Vec<_>>()
                .join(",")
        };
        format!(
            "instance: {}; params: {}; alphabet: {}",
            names(&self.instance),
            names(&self.params),
            self.alphabet
        )
    }

    /// Body only, without the header.
    pub fn body(&self) -> String {
        struct Body<'a>(&'a Formula);
        impl fmt::Display for Body<'_> {
            fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                self.0.write_node(f, &self.0.root, 0)
            }
        }
        Body(self).to_string()
    }
}

/// Full DSL text: header line, newline, body. Round-trips through
/// [`parse_formula`].
impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "{}", self.header())?;
        write!(f, "{}", self.body())
    }
}
