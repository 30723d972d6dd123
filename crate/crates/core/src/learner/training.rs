use std::collections::BTreeMap;

/// Labelled positions `(u, label)` of a unary training set, 1-based.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct TrainingSet {
    examples: Vec<(usize, bool)>,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum TrainingError {
    #[error("position {0} is labelled both 0 and 1")]
    ContradictoryLabels(usize),
    #[error("position {pos} is outside 1..={n}")]
    PositionOutOfRange { pos: usize, n: usize },
    #[error("line {line}: expected `position<TAB>label` with label 0 or 1")]
    Syntax { line: usize },
}

impl TrainingSet {
    pub fn new(examples: impl IntoIterator<Item = (usize, bool)>) -> Self {
        TrainingSet {
            examples: examples.into_iter().collect(),
        }
    }

    pub fn examples(&self) -> &[(usize, bool)] {
        &self.examples
    }

    pub fn len(&self) -> usize {
        self.examples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.examples.is_empty()
    }

    /// Checks positions against a word of length `n` and rejects positions
    /// carrying both labels.
    pub fn validate(&self, n: usize) -> Result<(), TrainingError> {
        self.by_position(n).map(|_| ())
    }

    fn by_position(&self, n: usize) -> Result<BTreeMap<usize, bool>, TrainingError> {
        let mut map = BTreeMap::new();
        for &(pos, label) in &self.examples {
            if pos == 0 || pos > n {
                return Err(TrainingError::PositionOutOfRange { pos, n });
            }
            if *map.entry(pos).or_insert(label) != label {
                return Err(TrainingError::ContradictoryLabels(pos));
            }
        }
        Ok(map)
    }

    /// Distinct examples in position order. Call [`validate`](Self::validate) first.
    pub fn sorted(&self) -> Vec<(usize, bool)> {
        self.by_position(usize::MAX)
            .map(|m| m.into_iter().collect())
            .unwrap_or_default()
    }

    /// Parses `position<TAB>label` lines; blank lines and `#` comments are
    /// skipped, and any whitespace separates the two fields.
    pub fn parse(text: &str) -> Result<Self, TrainingError> {
        let mut examples = Vec::new();
        for (i, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let bad = || TrainingError::Syntax { line: i + 1 };
            let mut fields = line.split_whitespace();
            let pos = fields.next().and_then(|f| f.parse().ok()).ok_or_else(bad)?;
            let label = match fields.next() {
                Some("1") => true,
                Some("0") => false,
                _ => return Err(bad()),
            };
            if fields.next().is_some() {
                return Err(bad());
            }
            examples.push((pos, label));
        }
        Ok(TrainingSet { examples })
    }

    pub fn to_text(&self) -> String {
        self.examples
            .iter()
            .map(|&(p, l)| format!("{p}\t{}\n", l as u8))
            .collect()
    }
}
