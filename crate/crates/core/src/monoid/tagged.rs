use std::collections::HashMap;
use std::fmt::Write as _;

use super::{FiniteMonoid, MemoTable, MonoidError};
use crate::automata::{Dfa, TrackAlphabet};

/// Parameter tag of a tagged element: the set of parameters it places, or
/// the absorbing tag for elements placing some parameter twice.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Tag {
    Params(u32),
    Bottom,
}

impl Tag {
    pub fn join(self, other: Tag) -> Tag {
        match (self, other) {
            (Tag::Params(a), Tag::Params(b)) if a & b == 0 => Tag::Params(a | b),
            _ => Tag::Bottom,
        }
    }

    pub fn is_empty(self) -> bool {
        self == Tag::Params(0)
    }
}

/// Transition monoid of a consistency automaton, each element being a
/// state map paired with a parameter tag. All elements with tag
/// [`Tag::Bottom`] are collapsed into one absorbing element.
#[derive(Debug)]
pub struct TaggedMonoid {
    alphabet: TrackAlphabet,
    states: usize,
    /// `maps[i * states + q]`
    maps: Vec<u32>,
    tags: Vec<Tag>,
    index: HashMap<(Vec<u32>, Tag), u32>,
    bottom: Option<u32>,
    hhat: Vec<u32>,
    generators: Vec<u32>,
    fhat: Vec<bool>,
    table: MemoTable,
}

impl TaggedMonoid {
    /// Closure of the letter images under product, numbered breadth-first
    /// from the identity (element 0).
    pub fn from_dfa(dfa: &Dfa, cap: usize) -> Result<TaggedMonoid, MonoidError> {
        let alphabet = dfa.alphabet().clone();
        let states = dfa.num_states();
        let full = (1u32 << alphabet.num_tracks()) - 1;
        let mut maps: Vec<u32> = (0..states as u32).collect();
        let mut tags = vec![Tag::Params(0)];
        let mut index = HashMap::new();
        index.insert((maps.clone(), Tag::Params(0)), 0u32);
        let mut bottom = None;

        let mut intern = |map: Vec<u32>,
                          tag: Tag,
                          maps: &mut Vec<u32>,
                          tags: &mut Vec<Tag>|
         -> Result<u32, MonoidError> {
            if tag == Tag::Bottom {
                if let Some(b) = bottom {
                    return Ok(b);
                }
            } else if let Some(&i) = index.get(&(map.clone(), tag)) {
                return Ok(i);
            }
            let id = tags.len() as u32;
            if tags.len() >= cap {
                return Err(MonoidError::MonoidBlowup { cap });
            }
            if tag == Tag::Bottom {
                bottom = Some(id);
                maps.extend(0..states as u32);
            } else {
                maps.extend_from_slice(&map);
                index.insert((map, tag), id);
            }
            tags.push(tag);
            Ok(id)
        };

        let mut hhat = Vec::with_capacity(alphabet.size());
        for code in 0..alphabet.size() as u32 {
            let (_, mask, _) = alphabet.decode(code);
            let map = (0..states as u32).map(|q| dfa.step(q, code)).collect();
            hhat.push(intern(map, Tag::Params(mask), &mut maps, &mut tags)?);
        }
        let mut generators = hhat.clone();
        generators.sort_unstable();
        generators.dedup();

        let mut i = 0;
        while i < tags.len() {
            if tags[i] != Tag::Bottom {
                for &g in &generators {
                    let tag = tags[i].join(tags[g as usize]);
                    let map: Vec<u32> = (0..states)
                        .map(|q| maps[g as usize * states + maps[i * states + q] as usize])
                        .collect();
                    intern(map, tag, &mut maps, &mut tags)?;
                }
            }
            i += 1;
        }

        let fhat = (0..tags.len())
            .map(|i| {
                tags[i] == Tag::Params(full)
                    && dfa.is_accepting(maps[i * states + dfa.initial() as usize])
            })
            .collect();
        let n = tags.len();
        Ok(TaggedMonoid {
            alphabet,
            states,
            maps,
            tags,
            index,
            bottom,
            hhat,
            generators,
            fhat,
            table: MemoTable::new(n),
        })
    }

    pub fn alphabet(&self) -> &TrackAlphabet {
        &self.alphabet
    }

    pub fn num_params(&self) -> usize {
        self.alphabet.num_tracks()
    }

    pub fn tag(&self, m: u32) -> Tag {
        self.tags[m as usize]
    }

    pub fn map(&self, m: u32) -> &[u32] {
        &self.maps[m as usize * self.states..(m as usize + 1) * self.states]
    }

    pub fn bottom(&self) -> Option<u32> {
        self.bottom
    }

    /// Image of a single annotated symbol.
    pub fn hhat(&self, code: u32) -> u32 {
        self.hhat[code as usize]
    }

    pub fn hhat_word(&self, word: impl IntoIterator<Item = u32>) -> u32 {
        word.into_iter().fold(0, |m, c| self.mul(m, self.hhat(c)))
    }

    pub fn is_final(&self, m: u32) -> bool {
        self.fhat[m as usize]
    }

    pub fn finals(&self) -> impl Iterator<Item = u32> + '_ {
        (0..self.tags.len() as u32).filter(|&m| self.fhat[m as usize])
    }

    fn compute(&self, a: u32, b: u32) -> u32 {
        let tag = self.tags[a as usize].join(self.tags[b as usize]);
        if tag == Tag::Bottom {
            return self.bottom.expect("closure contains the absorbing element");
        }
        let (ma, mb) = (self.map(a), self.map(b));
        let map: Vec<u32> = ma.iter().map(|&q| mb[q as usize]).collect();
        self.index[&(map, tag)]
    }

    /// Debug dump: element count, generator map, tags, final set and the
    /// full multiplication table.
    pub fn dump(&self) -> String {
        let mut out = String::new();
        let n = self.len();
        let _ = writeln!(out, "elements: {n}");
        for code in 0..self.alphabet.size() as u32 {
            let _ = writeln!(out, "gen {} -> {}", self.alphabet.legend(code), self.hhat(code));
        }
        for m in 0..n as u32 {
            let tag = match self.tag(m) {
                Tag::Params(k) => format!("{k:b}"),
                Tag::Bottom => "bottom".to_string(),
            };
            let _ = writeln!(out, "tag {m}: {tag}");
        }
        let finals: Vec<String> = self.finals().map(|m| m.to_string()).collect();
        let _ = writeln!(out, "final: {}", finals.join(" "));
        for a in 0..n as u32 {
            let row: Vec<String> = (0..n as u32).map(|b| self.mul(a, b).to_string()).collect();
            let _ = writeln!(out, "{a}: {}", row.join(" "));
        }
        out
    }
}

impl FiniteMonoid for TaggedMonoid {
    fn len(&self) -> usize {
        self.tags.len()
    }

    fn identity(&self) -> u32 {
        0
    }

    fn mul(&self, a: u32, b: u32) -> u32 {
        self.table.get_or(a, b, || self.compute(a, b))
    }

    fn generators(&self) -> &[u32] {
        &self.generators
    }
}
