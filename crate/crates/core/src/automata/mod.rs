//! Deterministic automata over track-annotated alphabets and the
//! formula-to-automaton compiler.
//!
//! # Symbol encoding
//!
//! An annotated symbol carries a base letter `a` (index into the base
//! alphabet, `0..s`), one bit per variable track (mask `m`, `0..2^t`)
//! and, for classified alphabets, a classification `c` with `? = 0`,
//! `0 = 1`, `1 = 2`. The integer code is mixed radix with the base letter
//! least significant:
//!
//! ```text
//! code = a + s * (m + 2^t * c)
//! ```
//!
//! Codes are dense, so every integer below [`TrackAlphabet::size`] is a
//! valid symbol.

mod compile;
mod ops;

use std::fmt::Write as _;

use crate::formula::{Alphabet, AlphabetError};

pub use compile::{build_consistency_dfa, compile, compile_with_cap, CompileError};

/// Default bound on the number of states of any intermediate automaton.
pub const DEFAULT_STATE_CAP: usize = 1_000_000;

/// Classification component of the consistency alphabet.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Class {
    Unknown = 0,
    Negative = 1,
    Positive = 2,
}

impl Class {
    pub const ALL: [Class; 3] = [Class::Unknown, Class::Negative, Class::Positive];

    pub fn from_index(i: usize) -> Class {
        Class::ALL[i]
    }

    pub fn from_label(label: bool) -> Class {
        if label {
            Class::Positive
        } else {
            Class::Negative
        }
    }

    pub fn as_char(self) -> char {
        match self {
            Class::Unknown => '?',
            Class::Negative => '0',
            Class::Positive => '1',
        }
    }
}

/// Alphabet of the form `base x 2^tracks [x {?,0,1}]`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct TrackAlphabet {
    base: Alphabet,
    tracks: Vec<String>,
    classified: bool,
}

impl TrackAlphabet {
    pub fn new(base: Alphabet, tracks: Vec<String>, classified: bool) -> Self {
        TrackAlphabet {
            base,
            tracks,
            classified,
        }
    }

    /// The consistency alphabet: base letters, one track per parameter,
    /// and a classification component.
    pub fn consistency(base: Alphabet, params: &[&str]) -> Self {
        Self::new(base, params.iter().map(|s| s.to_string()).collect(), true)
    }

    pub fn base(&self) -> &Alphabet {
        &self.base
    }

    pub fn tracks(&self) -> &[String] {
        &self.tracks
    }

    pub fn classified(&self) -> bool {
        self.classified
    }

    pub fn num_tracks(&self) -> usize {
        self.tracks.len()
    }

    pub fn size(&self) -> usize {
        (self.base.len() << self.tracks.len()) * if self.classified { 3 } else { 1 }
    }

    pub fn encode(&self, letter: usize, mask: u32, class: Class) -> u32 {
        debug_assert!(letter < self.base.len());
        debug_assert!((mask as usize) < 1 << self.tracks.len());
        let c = if self.classified { class as usize } else { 0 };
        (letter + self.base.len() * (mask as usize + (c << self.tracks.len()))) as u32
    }

    pub fn decode(&self, code: u32) -> (usize, u32, Class) {
        let s = self.base.len();
        let code = code as usize;
        let letter = code % s;
        let rest = code / s;
        let mask = (rest & ((1 << self.tracks.len()) - 1)) as u32;
        let c = rest >> self.tracks.len();
        (letter, mask, Class::from_index(c))
    }

    /// The projection `f` dropping the track component: maps a code of
    /// this alphabet to a code of `base x {?,0,1}`.
    pub fn drop_tracks(&self, code: u32) -> u32 {
        let (letter, _, class) = self.decode(code);
        gamma_code(self.base.len(), letter, class)
    }

    /// Human-readable legend entry, e.g. `(a,{y1},?)`.
    pub fn legend(&self, code: u32) -> String {
        let (letter, mask, class) = self.decode(code);
        let mut out = format!("({}", self.base.symbol(letter));
        if !self.tracks.is_empty() {
            out.push_str(",{");
            let names: Vec<&str> = (0..self.tracks.len())
                .filter(|i| mask >> i & 1 == 1)
                .map(|i| self.tracks[i].as_str())
                .collect();
            out.push_str(&names.join(","));
            out.push('}');
        }
        if self.classified {
            let _ = write!(out, ",{}", class.as_char());
        }
        out.push(')');
        out
    }
}

/// Code of `(letter, class)` in `Gamma = base x {?,0,1}`.
pub fn gamma_code(base_len: usize, letter: usize, class: Class) -> u32 {
    (letter + base_len * class as usize) as u32
}

pub fn gamma_decode(base_len: usize, code: u32) -> (usize, Class) {
    let code = code as usize;
    (code % base_len, Class::from_index(code / base_len))
}

/// Complete deterministic automaton over a [`TrackAlphabet`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Dfa {
    alphabet: TrackAlphabet,
    states: usize,
    /// `delta[q * size + symbol]`
    delta: Vec<u32>,
    initial: u32,
    accepting: Vec<bool>,
}

#[derive(Debug, thiserror::Error)]
pub enum DfaFormatError {
    #[error("line {line}: {msg}")]
    Malformed { line: usize, msg: String },
    #[error(transparent)]
    Alphabet(#[from] AlphabetError),
}

impl Dfa {
    pub(crate) fn from_raw(alphabet: TrackAlphabet, raw: ops::RawDfa) -> Dfa {
        debug_assert_eq!(raw.symbols, alphabet.size());
        Dfa {
            alphabet,
            states: raw.states,
            delta: raw.delta,
            initial: raw.initial,
            accepting: raw.accepting,
        }
    }

    pub(crate) fn to_raw(&self) -> ops::RawDfa {
        ops::RawDfa {
            symbols: self.alphabet.size(),
            states: self.states,
            delta: self.delta.clone(),
            initial: self.initial,
            accepting: self.accepting.clone(),
        }
    }

    pub fn alphabet(&self) -> &TrackAlphabet {
        &self.alphabet
    }

    pub fn num_states(&self) -> usize {
        self.states
    }

    pub fn initial(&self) -> u32 {
        self.initial
    }

    pub fn is_accepting(&self, q: u32) -> bool {
        self.accepting[q as usize]
    }

    pub fn step(&self, q: u32, symbol: u32) -> u32 {
        self.delta[q as usize * self.alphabet.size() + symbol as usize]
    }

    pub fn run(&self, word: impl IntoIterator<Item = u32>) -> u32 {
        word.into_iter().fold(self.initial, |q, s| self.step(q, s))
    }

    pub fn accepts(&self, word: impl IntoIterator<Item = u32>) -> bool {
        self.is_accepting(self.run(word))
    }

    /// Minimized copy with canonical (breadth-first) state numbering.
    pub fn minimized(&self) -> Dfa {
        Dfa::from_raw(self.alphabet.clone(), ops::minimize(&self.to_raw()))
    }

    /// Textual interchange format.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        out.push_str("# msolearn dfa v1\n");
        let _ = writeln!(out, "alphabet: {}", self.alphabet.base);
        let _ = writeln!(out, "tracks: {}", self.alphabet.tracks.join(","));
        let _ = writeln!(
            out,
            "classified: {}",
            if self.alphabet.classified { "yes" } else { "no" }
        );
        let _ = writeln!(out, "states: {}", self.states);
        let _ = writeln!(out, "initial: {}", self.initial);
        let acc: Vec<String> = (0..self.states)
            .filter(|&q| self.accepting[q])
            .map(|q| q.to_string())
            .collect();
        let _ = writeln!(out, "accepting: {}", acc.join(" "));
        out.push_str("# symbols:");
        for code in 0..self.alphabet.size() as u32 {
            let _ = write!(out, " {}={}", code, self.alphabet.legend(code));
        }
        out.push('\n');
        let size = self.alphabet.size();
        for q in 0..self.states {
            let row: Vec<String> = self.delta[q * size..(q + 1) * size]
                .iter()
                .map(|t| t.to_string())
                .collect();
            let _ = writeln!(out, "{q}: {}", row.join(" "));
        }
        out
    }

    pub fn from_text(text: &str) -> Result<Dfa, DfaFormatError> {
        let bad = |line: usize, msg: &str| DfaFormatError::Malformed {
            line,
            msg: msg.to_string(),
        };
        let mut fields = std::collections::HashMap::new();
        let mut rows: Vec<(usize, usize, &str)> = Vec::new();
        for (i, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let (key, value) = line
                .split_once(':')
                .ok_or_else(|| bad(i + 1, "expected `key: value`"))?;
            let key = key.trim();
            if let Ok(q) = key.parse::<usize>() {
                rows.push((i + 1, q, value));
            } else {
                fields.insert(key.to_string(), (i + 1, value.trim().to_string()));
            }
        }
        let get = |k: &str| fields.get(k).ok_or_else(|| bad(0, &format!("missing `{k}`")));
        let list = |s: &str| -> Vec<String> {
            s.split(',')
                .map(|x| x.trim().to_string())
                .filter(|x| !x.is_empty())
                .collect()
        };
        let (_, alpha) = get("alphabet")?;
        let base = Alphabet::new(list(alpha).iter().filter_map(|s| s.chars().next()))?;
        let tracks = list(&get("tracks")?.1);
        let (cl_line, classified) = get("classified")?;
        let classified = match classified.as_str() {
            "yes" => true,
            "no" => false,
            _ => return Err(bad(*cl_line, "expected yes or no")),
        };
        let alphabet = TrackAlphabet::new(base, tracks, classified);
        let (st_line, states) = get("states")?;
        let states: usize = states.parse().map_err(|_| bad(*st_line, "bad state count"))?;
        let (in_line, initial) = get("initial")?;
        let initial: u32 = initial
            .parse()
            .ok()
            .filter(|&q: &u32| (q as usize) < states)
            .ok_or_else(|| bad(*in_line, "bad initial state"))?;
        let (acc_line, acc) = get("accepting")?;
        let mut accepting = vec![false; states];
        for tok in acc.split_whitespace() {
            let q: usize = tok
                .parse()
                .ok()
                .filter(|&q| q < states)
                .ok_or_else(|| bad(*acc_line, "bad accepting state"))?;
            accepting[q] = true;
        }
        let size = alphabet.size();
        let mut delta = vec![u32::MAX; states * size];
        for (line, q, row) in rows {
            if q >= states {
                return Err(bad(line, "state out of range"));
            }
            let targets: Vec<u32> = row
                .split_whitespace()
                .map(|t| t.parse::<u32>().ok().filter(|&t| (t as usize) < states))
                .collect::<Option<_>>()
                .ok_or_else(|| bad(line, "bad transition target"))?;
            if targets.len() != size {
                return Err(bad(line, "row length differs from alphabet size"));
            }
            delta[q * size..(q + 1) * size].copy_from_slice(&targets);
        }
        if delta.contains(&u32::MAX) {
            return Err(bad(0, "transition table is not total"));
        }
        Ok(Dfa {
            alphabet,
            states,
            delta,
            initial,
            accepting,
        })
    }

    /// Labels every position `x` of `word` for a compiled unary automaton
    /// whose tracks are `[x, y_1, .., y_l]`, in time `O(n * states)`.
    pub fn label_positions(&self, word: &[u8], params: &[usize]) -> Vec<bool> {
        let n = word.len();
        debug_assert_eq!(self.alphabet.num_tracks(), 1 + params.len());
        let sym = |i: usize, x_here: bool| {
            let mut mask = x_here as u32;
            for (j, &p) in params.iter().enumerate() {
                if p == i + 1 {
                    mask |= 2 << j;
                }
            }
            self.alphabet.encode(word[i] as usize, mask, Class::Unknown)
        };
        // accept[i][q]: reading word[i..] with x unmarked from q accepts
        let states = self.states;
        let mut accept = vec![false; (n + 1) * states];
        accept[n * states..].copy_from_slice(&self.accepting);
        for i in (0..n).rev() {
            let s = sym(i, false);
            for q in 0..states {
                let t = self.step(q as u32, s) as usize;
                accept[i * states + q] = accept[(i + 1) * states + t];
            }
        }
        let mut out = Vec::with_capacity(n);
        let mut q = self.initial;
        for i in 0..n {
            let t = self.step(q, sym(i, true)) as usize;
            out.push(accept[(i + 1) * states + t]);
            q = self.step(q, sym(i, false));
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn encoding_is_dense_and_bijective() {
        let ab = Alphabet::from_str_symbols("abc").unwrap();
        let alpha = TrackAlphabet::consistency(ab, &["y1", "y2"]);
        assert_eq!(alpha.size(), 3 * 4 * 3);
        let mut seen = vec![false; alpha.size()];
        for letter in 0..3 {
            for mask in 0..4 {
                for class in Class::ALL {
                    let code = alpha.encode(letter, mask, class);
                    assert_eq!(alpha.decode(code), (letter, mask, class));
                    assert!(!seen[code as usize]);
                    seen[code as usize] = true;
                    assert_eq!(
                        gamma_decode(3, alpha.drop_tracks(code)),
                        (letter, class)
                    );
                }
            }
        }
        assert_eq!(alpha.legend(alpha.encode(1, 2, Class::Positive)), "(b,{y2},1)");
    }

    #[test]
    fn text_format_round_trips() {
        let ab = Alphabet::from_str_symbols("ab").unwrap();
        let phi = crate::formula::Formula::with_vars("Ra(x) & x <= y", &["x"], &["y"], &ab)
            .unwrap();
        let dfa = compile(&phi).unwrap();
        let text = dfa.to_text();
        assert_eq!(Dfa::from_text(&text).unwrap(), dfa);
        assert!(Dfa::from_text(&text.replace("initial: 0", "initial: 99")).is_err());
    }
}
