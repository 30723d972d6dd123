//! Formula to automaton translation.
//!
//! Internally every variable slot owns a track and symbols are
//! `letter + L * mask` with `L` internal letters (the base alphabet, or
//! base x {?,0,1} for the consistency automaton). Free tracks are numbered
//! first so the final automaton can be restricted to a prefix of the masks.

use super::ops::{self, RawDfa};
use super::{Class, Dfa, TrackAlphabet, DEFAULT_STATE_CAP};
use crate::formula::{Formula, Node};

/// Largest internal alphabet the compiler will build.
const MAX_INTERNAL_SYMBOLS: usize = 1 << 22;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum CompileError {
    #[error("intermediate automaton exceeded the state cap ({states} > {cap})")]
    StateBlowup { states: usize, cap: usize },
    #[error("{tracks} variable tracks over {letters} letters is too large to tabulate")]
    TooManyTracks { tracks: usize, letters: usize },
    #[error("consistency automaton needs a unary formula, got arity {0}")]
    NotUnary(usize),
}

struct Ctx<'a> {
    phi: &'a Formula,
    letters: usize,
    symbols: usize,
    /// track of each first-order slot
    var_track: Vec<usize>,
    /// track of each set slot
    set_track: Vec<usize>,
    /// letter sets for `R_a`, indexed by base symbol
    label_letters: Vec<Vec<bool>>,
    cap: usize,
}

impl Ctx<'_> {
    fn new<'a>(
        phi: &'a Formula,
        letters: usize,
        free: &[crate::formula::Var],
        label_letters: Vec<Vec<bool>>,
        cap: usize,
    ) -> Result<Ctx<'a>, CompileError> {
        let nv = phi.num_var_slots();
        let mut var_track = vec![usize::MAX; nv];
        let mut next = 0;
        for v in free {
            var_track[v.0 as usize] = next;
            next += 1;
        }
        for t in var_track.iter_mut().filter(|t| **t == usize::MAX) {
            *t = next;
            next += 1;
        }
        let set_track: Vec<usize> = (0..phi.num_set_slots()).map(|i| next + i).collect();
        let tracks = next + set_track.len();
        let symbols = letters
            .checked_shl(tracks as u32)
            .filter(|&s| tracks < 32 && s <= MAX_INTERNAL_SYMBOLS)
            .ok_or(CompileError::TooManyTracks { tracks, letters })?;
        Ok(Ctx {
            phi,
            letters,
            symbols,
            var_track,
            set_track,
            label_letters,
            cap,
        })
    }

    fn bit(&self, symbol: usize, track: usize) -> bool {
        (symbol / self.letters) >> track & 1 == 1
    }

    fn blowup(&self, states: usize) -> CompileError {
        CompileError::StateBlowup {
            states,
            cap: self.cap,
        }
    }

    fn constant(&self, value: bool) -> RawDfa {
        RawDfa::from_fn(self.symbols, 1, 0, vec![value], |_, _| 0)
    }

    /// Accepts iff `track` carries exactly one mark.
    fn singleton(&self, track: usize) -> RawDfa {
        RawDfa::from_fn(self.symbols, 3, 0, vec![false, true, false], |q, s| {
            match (q, self.bit(s, track)) {
                (q, false) => q,
                (0, true) => 1,
                _ => 2,
            }
        })
    }

    /// Two-state automaton going dead on the first symbol with `bad`.
    fn guard(&self, bad: impl Fn(usize) -> bool) -> RawDfa {
        RawDfa::from_fn(self.symbols, 2, 0, vec![true, false], |q, s| {
            if q == 1 || bad(s) {
                1
            } else {
                0
            }
        })
    }

    fn and(&self, a: &RawDfa, b: &RawDfa) -> Result<RawDfa, CompileError> {
        let p = ops::product(a, b, |x, y| x && y, self.cap).map_err(|n| self.blowup(n))?;
        Ok(ops::minimize(&p))
    }

    fn or(&self, a: &RawDfa, b: &RawDfa) -> Result<RawDfa, CompileError> {
        let p = ops::product(a, b, |x, y| x || y, self.cap).map_err(|n| self.blowup(n))?;
        Ok(ops::minimize(&p))
    }

    fn project(&self, a: &RawDfa, track: usize) -> Result<RawDfa, CompileError> {
        let p = ops::project(a, self.letters, track, self.cap).map_err(|n| self.blowup(n))?;
        Ok(ops::minimize(&p))
    }

    fn exists_fo(&self, track: usize, body: &RawDfa) -> Result<RawDfa, CompileError> {
        let restricted = self.and(body, &self.singleton(track))?;
        self.project(&restricted, track)
    }

    fn node(&self, node: &Node) -> Result<RawDfa, CompileError> {
        let vt = |v: &crate::formula::Var| self.var_track[v.0 as usize];
        Ok(match node {
            Node::True => self.constant(true),
            Node::False => self.constant(false),
            Node::Label { symbol, var } => {
                let t = vt(var);
                let ok = &self.label_letters[*symbol];
                self.guard(|s| self.bit(s, t) && !ok[s % self.letters])
            }
            Node::Less(x, y) => self.order(vt(x), vt(y), true),
            Node::LessEq(x, y) => self.order(vt(x), vt(y), false),
            Node::Equal(x, y) => {
                let (tx, ty) = (vt(x), vt(y));
                self.guard(|s| self.bit(s, tx) != self.bit(s, ty))
            }
            Node::Member(x, set) => {
                let (tx, ts) = (vt(x), self.set_track[set.0 as usize]);
                self.guard(|s| self.bit(s, tx) && !self.bit(s, ts))
            }
            Node::Not(a) => self.node(a)?.complement(),
            Node::And(a, b) => self.and(&self.node(a)?, &self.node(b)?)?,
            Node::Or(a, b) => self.or(&self.node(a)?, &self.node(b)?)?,
            Node::Implies(a, b) => self.or(&self.node(a)?.complement(), &self.node(b)?)?,
            Node::Exists(v, body) => self.exists_fo(vt(v), &self.node(body)?)?,
            Node::Forall(v, body) => self
                .exists_fo(vt(v), &self.node(body)?.complement())?
                .complement(),
            Node::ExistsSet(s, body) => self.project(&self.node(body)?, self.set_track[s.0 as usize])?,
            Node::ForallSet(s, body) => self
                .project(&self.node(body)?.complement(), self.set_track[s.0 as usize])?
                .complement(),
        })
    }

    /// `x < y` (strict) or `x <= y`, correct whenever both tracks are singletons.
    fn order(&self, tx: usize, ty: usize, strict: bool) -> RawDfa {
        // 0: neither seen, 1: x seen, 2: both seen, 3: dead
        RawDfa::from_fn(
            self.symbols,
            4,
            0,
            vec![false, false, true, false],
            |q, s| match (q, self.bit(s, tx), self.bit(s, ty)) {
                (0, false, false) => 0,
                (0, true, false) => 1,
                (0, true, true) if !strict => 2,
                (1, false, true) => 2,
                (1, false, false) => 1,
                (2, false, false) => 2,
                _ => 3,
            },
        )
    }

    /// Restricts to singleton free first-order tracks, drops bound tracks and
    /// maps internal columns to the output alphabet.
    fn finish(
        &self,
        mut a: RawDfa,
        free_fo: usize,
        out: TrackAlphabet,
    ) -> Result<Dfa, CompileError> {
        for t in 0..free_fo {
            a = self.and(&a, &self.singleton(t))?;
        }
        let s = out.base().len();
        let columns: Vec<usize> = (0..out.size() as u32)
            .map(|code| {
                let (letter, mask, class) = out.decode(code);
                let internal = if out.classified() {
                    letter + s * class as usize
                } else {
                    letter
                };
                internal + self.letters * mask as usize
            })
            .collect();
        Ok(Dfa::from_raw(out, ops::minimize(&a.select_columns(&columns))))
    }
}

/// Compiles `phi` with the default state cap.
pub fn compile(phi: &Formula) -> Result<Dfa, CompileError> {
    compile_with_cap(phi, DEFAULT_STATE_CAP)
}

/// Minimal DFA over `base x 2^(instance vars, params)` accepting exactly the
/// encodings with one mark per track whose decoded assignment satisfies `phi`.
pub fn compile_with_cap(phi: &Formula, cap: usize) -> Result<Dfa, CompileError> {
    let s = phi.alphabet().len();
    let free: Vec<_> = phi.instance_vars().iter().chain(phi.param_vars()).copied().collect();
    let labels = (0..s).map(|a| (0..s).map(|b| a == b).collect()).collect();
    let ctx = Ctx::new(phi, s, &free, labels, cap)?;
    let body = ctx.node(&ctx.phi.root)?;
    let names = free.iter().map(|&v| phi.var_name(v).to_string()).collect();
    ctx.finish(body, free.len(), TrackAlphabet::new(phi.alphabet().clone(), names, false))
}

/// Minimal DFA over `base x 2^params x {?,0,1}` for the consistency language:
/// every parameter marked exactly once and every position classified 0 or 1
/// labelled accordingly by `phi`.
pub fn build_consistency_dfa(phi: &Formula, cap: usize) -> Result<Dfa, CompileError> {
    if phi.arity() != 1 {
        return Err(CompileError::NotUnary(phi.arity()));
    }
    let s = phi.alphabet().len();
    let letters = 3 * s;
    let x = phi.instance_vars()[0];
    let mut free: Vec<_> = phi.param_vars().to_vec();
    free.push(x);
    // R_a ignores the classification component
    let labels = (0..s)
        .map(|a| (0..letters).map(|l| l % s == a).collect())
        .collect();
    let ctx = Ctx::new(phi, letters, &free, labels, cap)?;
    let tx = ctx.var_track[x.0 as usize];
    let class_is = |c: Class| ctx.guard(|sym| ctx.bit(sym, tx) && (sym % letters) / s != c as usize);
    // P_c(x) holds iff the guard "marked but not class c" never fires
    let positive = class_is(Class::Positive);
    let negative = class_is(Class::Negative);
    let a = ctx.node(&ctx.phi.root)?;
    let if_pos = ctx.or(&positive.complement(), &a)?;
    let if_neg = ctx.or(&negative.complement(), &a.complement())?;
    let body = ctx.and(&if_pos, &if_neg)?;
    let all = ctx.exists_fo(tx, &body.complement())?.complement();
    let names: Vec<&str> = phi.param_names();
    ctx.finish(
        all,
        phi.num_params(),
        TrackAlphabet::consistency(phi.alphabet().clone(), &names),
    )
}
