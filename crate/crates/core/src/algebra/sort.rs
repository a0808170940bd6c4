use std::fmt;

use crate::model::Message;

/// Functions turning a selection of message occurrences into a tuple.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum SorterKind {
    /// Smallest character label, then smallest measure label, then position.
    ByCharLex,
    /// Smallest measure label, then smallest character label, then position.
    ByMeasureLex,
    /// Source order.
    ByPosition,
    Reversed(Box<SorterKind>),
}

impl SorterKind {
    pub fn reversed(self) -> SorterKind {
        SorterKind::Reversed(Box::new(self))
    }
}

impl fmt::Display for SorterKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SorterKind::ByCharLex => f.write_str("byCharLex"),
            SorterKind::ByMeasureLex => f.write_str("byMeasureLex"),
            SorterKind::ByPosition => f.write_str("byPosition"),
            SorterKind::Reversed(inner) => write!(f, "reversed({inner})"),
        }
    }
}

/// Orders occurrences given as `(position, message)`; each occurrence
/// appears exactly once in the result.
pub fn apply_sorter(kind: &SorterKind, occurrences: &[(usize, &Message)]) -> Vec<Message> {
    sorted_occurrences(kind, occurrences)
        .into_iter()
        .map(|(_, m)| m.clone())
        .collect()
}

fn sorted_occurrences<'a>(
    kind: &SorterKind,
    occurrences: &[(usize, &'a Message)],
) -> Vec<(usize, &'a Message)> {
    let mut out = occurrences.to_vec();
    match kind {
        SorterKind::ByPosition => out.sort_by_key(|(pos, _)| *pos),
        SorterKind::ByCharLex => out.sort_by(|(p, a), (q, b)| {
            (a.characters.first(), a.measures.first(), p).cmp(&(
                b.characters.first(),
                b.measures.first(),
                q,
            ))
        }),
        SorterKind::ByMeasureLex => out.sort_by(|(p, a), (q, b)| {
            (a.measures.first(), a.characters.first(), p).cmp(&(
                b.measures.first(),
                b.characters.first(),
                q,
            ))
        }),
        SorterKind::Reversed(inner) => {
            out = sorted_occurrences(inner, occurrences);
            out.reverse();
        }
    }
    out
}
