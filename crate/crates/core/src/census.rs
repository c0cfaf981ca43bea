//! Exhaustive tabulation of decisions over small sign sequences.

use std::io::Write;

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::oracle::{oracle_decide, DEFAULT_CAP};
use crate::standard::{build_standard, SignSequence};
use crate::tunnel::{partial_realize, DecisionOutcome, ObstructionReason};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Decision {
    #[serde(rename = "REALIZABLE")]
    Realizable,
    #[serde(rename = "NOT_REALIZABLE")]
    NotRealizable,
}

impl Decision {
    pub fn as_str(self) -> &'static str {
        match self {
            Decision::Realizable => "REALIZABLE",
            Decision::NotRealizable => "NOT_REALIZABLE",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CensusRow {
    pub sequence: SignSequence,
    pub decision: Decision,
    pub arrows_added: usize,
    pub obstruction_reason: Option<ObstructionReason>,
}

impl CensusRow {
    pub fn from_outcome(sequence: SignSequence, outcome: &DecisionOutcome) -> Self {
        CensusRow {
            sequence,
            decision: if outcome.is_realizable() { Decision::Realizable } else { Decision::NotRealizable },
            arrows_added: outcome.added().len(),
            obstruction_reason: outcome.obstructions().first().map(|o| o.reason),
        }
    }
}

/// Every sequence of length `2, 4, ..., 2 n_max` with entries in
/// `+-1..=+-a_max`, shorter first, then lexicographic in the entries.
pub fn enumerate_sequences(n_max: usize, a_max: i64) -> Vec<SignSequence> {
    let values: Vec<i64> = (-a_max..=a_max).filter(|&a| a != 0).collect();
    let mut out = Vec::new();
    for n in 1..=n_max {
        let len = 2 * n;
        let mut digits = vec![0usize; len];
        loop {
            out.push(SignSequence::new(digits.iter().map(|&d| values[d]).collect()).expect("nonzero, even length"));
            let Some(pos) = (0..len).rev().find(|&i| digits[i] + 1 < values.len()) else { break };
            digits[pos] += 1;
            for d in &mut digits[pos + 1..] {
                *d = 0;
            }
        }
    }
    out
}

pub fn census(n_max: usize, a_max: i64) -> Result<Vec<CensusRow>> {
    if n_max == 0 || a_max <= 0 {
        return Err(Error::InvalidInput("census needs n_max >= 1 and a_max >= 1".into()));
    }
    enumerate_sequences(n_max, a_max)
        .into_par_iter()
        .map(|s| {
            let outcome = partial_realize(&build_standard(&s))?;
            Ok(CensusRow::from_outcome(s, &outcome))
        })
        .collect()
}

/// A row on which the oracle disagrees, or witnesses missing forced arrows.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OracleMismatch {
    pub sequence: SignSequence,
    pub algorithm: Decision,
    pub oracle: Option<bool>,
    pub witnesses_missing_forced: usize,
}

/// Cross-check rows against the exhaustive oracle. Rows whose candidate set
/// exceeds the cap are counted in the second return value and skipped.
pub fn oracle_check(rows: &[CensusRow]) -> Result<(Vec<OracleMismatch>, usize)> {
    let results: Vec<Result<Option<OracleMismatch>>> = rows
        .par_iter()
        .map(|row| {
            let c = build_standard(&row.sequence);
            let oracle = match oracle_decide(&c, DEFAULT_CAP) {
                Ok(o) => o,
                Err(Error::OracleTooLarge { .. }) => {
                    return Ok(Some(OracleMismatch {
                        sequence: row.sequence.clone(),
                        algorithm: row.decision,
                        oracle: None,
                        witnesses_missing_forced: 0,
                    }))
                }
                Err(e) => return Err(e),
            };
            let outcome = partial_realize(&c)?;
            let missing = if outcome.is_realizable() { oracle.witnesses_missing(&outcome.added_arrows()).len() } else { 0 };
            let agree = oracle.realizable() == (row.decision == Decision::Realizable);
            Ok((!agree || missing > 0).then(|| OracleMismatch {
                sequence: row.sequence.clone(),
                algorithm: row.decision,
                oracle: Some(oracle.realizable()),
                witnesses_missing_forced: missing,
            }))
        })
        .collect();
    let mut mismatches = Vec::new();
    let mut skipped = 0;
    for r in results {
        match r? {
            Some(m) if m.oracle.is_none() => skipped += 1,
            Some(m) => mismatches.push(m),
            None => {}
        }
    }
    Ok((mismatches, skipped))
}

#[derive(Serialize)]
struct CsvRow<'a> {
    sequence: String,
    decision: &'a str,
    arrows_added: usize,
    obstruction_reason: String,
}

pub fn write_csv<W: Write>(rows: &[CensusRow], out: W) -> Result<()> {
    let mut w = csv::WriterBuilder::new().delimiter(b';').from_writer(out);
    for r in rows {
        w.serialize(CsvRow {
            sequence: r.sequence.to_string(),
            decision: r.decision.as_str(),
            arrows_added: r.arrows_added,
            obstruction_reason: r.obstruction_reason.map(|o| o.to_string()).unwrap_or_default(),
        })
        .map_err(|e| Error::InvalidInput(format!("csv: {e}")))?;
    }
    w.flush().map_err(|e| Error::InvalidInput(format!("csv: {e}")))?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn realizable(rows: &[CensusRow]) -> usize {
        rows.iter().filter(|r| r.decision == Decision::Realizable).count()
    }

    #[test]
    fn enumeration_order() {
        let seqs = enumerate_sequences(2, 1);
        assert_eq!(seqs.len(), 4 + 16);
        assert_eq!(seqs[0].entries(), &[-1, -1]);
        assert_eq!(seqs[1].entries(), &[-1, 1]);
        assert_eq!(seqs[4].entries(), &[-1, -1, -1, -1]);
    }

    #[test]
    fn small_counts_match_oracle() {
        for (a_max, expected) in [(1, 2), (2, 10)] {
            let rows = census(1, a_max).unwrap();
            let (mismatches, skipped) = oracle_check(&rows).unwrap();
            assert!(mismatches.is_empty() && skipped == 0);
            assert_eq!(realizable(&rows), expected);
        }
    }

    #[test]
    fn csv_format() {
        let rows = census(1, 1).unwrap();
        let mut buf = Vec::new();
        write_csv(&rows, &mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines[0], "sequence;decision;arrows_added;obstruction_reason");
        assert_eq!(lines[1], "-1,-1;NOT_REALIZABLE;0;no-adjacent-arrow");
        assert_eq!(lines[2], "-1,1;REALIZABLE;0;");
        assert_eq!(lines.len(), 5);
    }

    #[test]
    fn rejects_empty_ranges() {
        assert!(census(0, 2).is_err());
        assert!(census(1, 0).is_err());
    }
}
