//! Binary index files.
//!
//! All integers are little-endian.
//!
//! ```text
//! magic      8 bytes  "MSOIDX\0\0"
//! version    u32      INDEX_VERSION
//! formula    u32 length + UTF-8 text (header line and body)
//! formula    32 bytes SHA-256 of the formula text
//! caps       u64 state cap, u64 monoid cap
//! monoid     u32 power monoid size
//! word       u64 length + one symbol index per byte
//! nodes      u64 count + preorder stream
//! checksum   32 bytes SHA-256 of everything above
//! ```
//!
//! Each node is a kind byte (0 leaf, 1 binary, 2 idempotent) and a `u32`
//! label, followed by `u64` position and `u32` symbol for a leaf, or a `u32`
//! child count for an idempotent node.

use std::sync::Arc;

use sha2::{Digest, Sha256};

use crate::fforest::{Kind, Tree};
use crate::formula::{parse_formula, WordStructure};
use crate::learner::{Caps, Index, LearnError, Pipeline};
use crate::monoid::FiniteMonoid;

pub const INDEX_MAGIC: &[u8; 8] = b"MSOIDX\0\0";
pub const INDEX_VERSION: u32 = 1;

#[derive(Debug, thiserror::Error)]
pub enum PersistError {
    #[error("not an index file")]
    BadMagic,
    #[error("index format version {found}, this build reads version {expected}")]
    VersionMismatch { found: u32, expected: u32 },
    #[error("index checksum mismatch (truncated or corrupted file)")]
    ChecksumMismatch,
    #[error("index was built for a different formula or caps")]
    FormulaMismatch,
    #[error("malformed index: {0}")]
    Malformed(&'static str),
    #[error(transparent)]
    Learn(#[from] LearnError),
}

const LEAF: u8 = 0;
const BINARY: u8 = 1;
const IDEMPOTENT: u8 = 2;

fn formula_text(p: &Pipeline) -> String {
    p.formula().to_string()
}

/// Serializes an index. The output is a function of the index contents.
pub fn save_index(index: &Index) -> Vec<u8> {
    let p = index.pipeline();
    let text = formula_text(p);
    let mut out = Vec::new();
    out.extend_from_slice(INDEX_MAGIC);
    out.extend_from_slice(&INDEX_VERSION.to_le_bytes());
    out.extend_from_slice(&(text.len() as u32).to_le_bytes());
    out.extend_from_slice(text.as_bytes());
    out.extend_from_slice(&Sha256::digest(text.as_bytes()));
    out.extend_from_slice(&(p.caps().states as u64).to_le_bytes());
    out.extend_from_slice(&(p.caps().monoid as u64).to_le_bytes());
    out.extend_from_slice(&(p.power().len() as u32).to_le_bytes());
    let word = index.word().symbols();
    out.extend_from_slice(&(word.len() as u64).to_le_bytes());
    out.extend_from_slice(word);
    out.extend_from_slice(&(index.tree().num_nodes() as u64).to_le_bytes());
    let mut stack: Vec<&Tree> = vec![index.tree()];
    while let Some(n) = stack.pop() {
        let kind = match n.kind() {
            Kind::Leaf { .. } => LEAF,
            Kind::Binary(..) => BINARY,
            Kind::Idempotent { .. } => IDEMPOTENT,
        };
        out.push(kind);
        out.extend_from_slice(&n.label().to_le_bytes());
        match n.kind() {
            Kind::Leaf { symbol } => {
                out.extend_from_slice(&(n.first() as u64).to_le_bytes());
                out.extend_from_slice(&symbol.to_le_bytes());
            }
            Kind::Binary(..) => {}
            Kind::Idempotent { start, end, .. } => {
                out.extend_from_slice(&((end - start) as u32).to_le_bytes())
            }
        }
        stack.extend(n.children().into_iter().rev());
    }
    let sum = Sha256::digest(&out);
    out.extend_from_slice(&sum);
    out
}

struct Reader<'a> {
    bytes: &'a [u8],
    at: usize,
}

impl<'a> Reader<'a> {
    fn take(&mut self, k: usize) -> Result<&'a [u8], PersistError> {
        let end = self.at.checked_add(k).filter(|&e| e <= self.bytes.len());
        let end = end.ok_or(PersistError::Malformed("unexpected end of data"))?;
        let s = &self.bytes[self.at..end];
        self.at = end;
        Ok(s)
    }

    fn u8(&mut self) -> Result<u8, PersistError> {
        Ok(self.take(1)?[0])
    }

    fn u32(&mut self) -> Result<u32, PersistError> {
        Ok(u32::from_le_bytes(self.take(4)?.try_into().unwrap()))
    }

    fn u64(&mut self) -> Result<u64, PersistError> {
        Ok(u64::from_le_bytes(self.take(8)?.try_into().unwrap()))
    }

    fn usize(&mut self) -> Result<usize, PersistError> {
        usize::try_from(self.u64()?).map_err(|_| PersistError::Malformed("length overflow"))
    }
}

/// Fields before the node stream.
struct Header<'a> {
    text: &'a str,
    caps: Caps,
    monoid_len: u32,
    word: &'a [u8],
}

/// Checks magic, version and checksum; returns the payload reader.
fn open(bytes: &[u8]) -> Result<Reader<'_>, PersistError> {
    if bytes.len() < 12 {
        return Err(if bytes.starts_with(&INDEX_MAGIC[..bytes.len().min(8)]) {
            PersistError::ChecksumMismatch
        } else {
            PersistError::BadMagic
        });
    }
    if &bytes[..8] != INDEX_MAGIC {
        return Err(PersistError::BadMagic);
    }
    let version = u32::from_le_bytes(bytes[8..12].try_into().unwrap());
    if version != INDEX_VERSION {
        return Err(PersistError::VersionMismatch {
            found: version,
            expected: INDEX_VERSION,
        });
    }
    if bytes.len() < 12 + 32 {
        return Err(PersistError::ChecksumMismatch);
    }
    let (body, sum) = bytes.split_at(bytes.len() - 32);
    if Sha256::digest(body).as_slice() != sum {
        return Err(PersistError::ChecksumMismatch);
    }
    Ok(Reader { bytes: body, at: 12 })
}

fn header<'a>(r: &mut Reader<'a>) -> Result<Header<'a>, PersistError> {
    let len = r.u32()? as usize;
    let text = std::str::from_utf8(r.take(len)?).map_err(|_| PersistError::Malformed("formula text"))?;
    if r.take(32)? != Sha256::digest(text.as_bytes()).as_slice() {
        return Err(PersistError::Malformed("formula hash"));
    }
    let caps = Caps {
        states: r.usize()?,
        monoid: r.usize()?,
    };
    let monoid_len = r.u32()?;
    let n = r.usize()?;
    let word = r.take(n)?;
    Ok(Header {
        text,
        caps,
        monoid_len,
        word,
    })
}

/// Loads an index, rebuilding its pipeline from the stored formula.
pub fn load_index(bytes: &[u8]) -> Result<Index, PersistError> {
    let mut r = open(bytes)?;
    let h = header(&mut r)?;
    let phi = parse_formula(h.text).map_err(|_| PersistError::Malformed("formula text"))?;
    let pipeline = Arc::new(Pipeline::with_caps(phi, h.caps)?);
    finish(r, h, pipeline)
}

/// Loads an index against an already built pipeline, which must match the
/// stored formula and caps.
pub fn load_index_with(bytes: &[u8], pipeline: Arc<Pipeline>) -> Result<Index, PersistError> {
    let mut r = open(bytes)?;
    let h = header(&mut r)?;
    if h.text != formula_text(&pipeline) || h.caps != pipeline.caps() {
        return Err(PersistError::FormulaMismatch);
    }
    finish(r, h, pipeline)
}

fn finish(mut r: Reader<'_>, h: Header<'_>, pipeline: Arc<Pipeline>) -> Result<Index, PersistError> {
    let malformed = PersistError::Malformed;
    if h.monoid_len as usize != pipeline.power().len() {
        return Err(PersistError::FormulaMismatch);
    }
    let word = WordStructure::new(pipeline.formula().alphabet().clone(), h.word.to_vec())
        .map_err(|_| malformed("word symbol"))?;
    let count = r.usize()?;
    let tree = {
        let forest = pipeline.forest();
        // open frames: (label, children still expected, children so far, binary?)
        let mut frames: Vec<(u32, usize, Vec<Tree>, bool)> = Vec::new();
        let mut root: Option<Tree> = None;
        for _ in 0..count {
            if root.is_some() {
                return Err(malformed("nodes after root"));
            }
            let kind = r.u8()?;
            let label = r.u32()?;
            let mut done = match kind {
                LEAF => {
                    let pos = r.usize()?;
                    let symbol = r.u32()?;
                    if symbol >= 3 * word.alphabet().len() as u32 {
                        return Err(malformed("leaf symbol"));
                    }
                    let leaf = forest.leaf(pos, symbol, pipeline.power().h(symbol));
                    if leaf.label() != label {
                        return Err(malformed("leaf label"));
                    }
                    Some(leaf)
                }
                BINARY => {
                    frames.push((label, 2, Vec::with_capacity(2), true));
                    None
                }
                IDEMPOTENT => {
                    let k = r.u32()? as usize;
                    if k < 3 {
                        return Err(malformed("idempotent arity"));
                    }
                    frames.push((label, k, Vec::with_capacity(k), false));
                    None
                }
                _ => return Err(malformed("node kind")),
            };
            while let Some(t) = done.take() {
                match frames.last_mut() {
                    None => root = Some(t),
                    Some(f) => {
                        f.2.push(t);
                        if f.2.len() == f.1 {
                            let (label, _, kids, binary) = frames.pop().unwrap();
                            let node = if binary {
                                let mut it = kids.into_iter();
                                forest.binary(it.next().unwrap(), it.next().unwrap())
                            } else {
                                if kids.iter().any(|c| c.label() != label) {
                                    return Err(malformed("idempotent children"));
                                }
                                let k = kids.len();
                                forest.idempotent(kids.into(), 0, k)
                            };
                            if node.label() != label {
                                return Err(malformed("node label"));
                            }
                            done = Some(node);
                        }
                    }
                }
            }
        }
        if r.at != r.bytes.len() {
            return Err(malformed("trailing data"));
        }
        root.ok_or(malformed("missing root"))?
    };
    let index = Index::from_parts(pipeline, word, tree);
    index.verify().map_err(|_| malformed("tree invariants"))?;
    Ok(index)
}
