//! JSON documents for complexes and parsing of sign sequences.

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use crate::algebra::{Arrow, ArrowTag, BasedComplex, Bigrading, Monomial, RingLevel};
use crate::error::{Error, Result};
use crate::standard::{ExtendedSignSequence, SignSequence};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ComplexDocument {
    pub ring: String,
    pub generators: Vec<GeneratorEntry>,
    pub arrows: Vec<ArrowEntry>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GeneratorEntry {
    pub name: String,
    pub gr: [i64; 2],
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ArrowEntry {
    pub from: String,
    pub to: String,
    pub u: u32,
    pub v: u32,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub color: Option<ArrowTag>,
}

impl ComplexDocument {
    pub fn from_complex(c: &BasedComplex, with_colors: bool) -> Self {
        ComplexDocument {
            ring: c.ring().to_string(),
            generators: c
                .generators()
                .iter()
                .map(|g| GeneratorEntry { name: g.name.clone(), gr: [g.gr.gr_u, g.gr.gr_v] })
                .collect(),
            arrows: c
                .tagged_arrows()
                .map(|(a, tag)| ArrowEntry {
                    from: c.name(a.source).to_string(),
                    to: c.name(a.target).to_string(),
                    u: a.monomial.u,
                    v: a.monomial.v,
                    color: if with_colors { tag } else { None },
                })
                .collect(),
        }
    }

    pub fn to_complex(&self) -> Result<BasedComplex> {
        let ring: RingLevel = self.ring.parse()?;
        let mut c = BasedComplex::new(ring);
        for g in &self.generators {
            c.add_generator(g.name.clone(), Bigrading::new(g.gr[0], g.gr[1]))?;
        }
        let mut seen = BTreeSet::new();
        for a in &self.arrows {
            let arrow = Arrow::new(c.lookup(&a.from)?, Monomial::new(a.u, a.v), c.lookup(&a.to)?);
            if !seen.insert(arrow) {
                return Err(Error::InvalidInput(format!("arrow {} listed twice", c.describe(&arrow))));
            }
            if ring.kills(arrow.monomial) {
                return Err(Error::InvalidInput(format!("arrow {} vanishes in {ring}", c.describe(&arrow))));
            }
            c.toggle_arrow(arrow, a.color);
        }
        Ok(c)
    }
}

pub fn serialize_complex(c: &BasedComplex, with_colors: bool) -> String {
    serde_json::to_string_pretty(&ComplexDocument::from_complex(c, with_colors)).expect("documents always serialize")
}

pub fn parse_complex(text: &str) -> Result<BasedComplex> {
    serde_json::from_str::<ComplexDocument>(text)?.to_complex()
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ParsedSequence {
    Standard(SignSequence),
    Extended(ExtendedSignSequence),
}

/// Comma-separated nonzero integers at byte offset `base` of the input.
fn parse_entries(text: &str, base: usize) -> Result<Vec<i64>> {
    let mut entries = Vec::new();
    let mut offset = base;
    for token in text.split(',') {
        let lead = token.len() - token.trim_start().len();
        let at = offset + lead;
        let value: i64 = token.trim().parse().map_err(|_| Error::Parse {
            position: at,
            message: format!("expected a nonzero integer, found `{}`", token.trim()),
        })?;
        if value == 0 {
            return Err(Error::Parse { position: at, message: "entries must be nonzero".into() });
        }
        entries.push(value);
        offset += token.len() + 1;
    }
    Ok(entries)
}

/// `a1,...,a2n` or the extended form `a0 | a1,...,a2n | a2n+1`.
pub fn parse_sequence(text: &str) -> Result<ParsedSequence> {
    let parts: Vec<&str> = text.split('|').collect();
    let odd_length = |len: usize, position: usize| Error::Parse {
        position,
        message: format!("sequence length must be even and positive, got {len}"),
    };
    match parts.as_slice() {
        [body] => {
            let entries = parse_entries(body, 0)?;
            let len = entries.len();
            SignSequence::new(entries).map(ParsedSequence::Standard).map_err(|_| odd_length(len, text.len()))
        }
        [head, body, tail] => {
            let head_v = parse_entries(head, 0)?;
            let body_start = head.len() + 1;
            let body_v = parse_entries(body, body_start)?;
            let tail_v = parse_entries(tail, body_start + body.len() + 1)?;
            if head_v.len() != 1 || tail_v.len() != 1 {
                return Err(Error::Parse { position: 0, message: "extension ends must be single integers".into() });
            }
            let len = body_v.len();
            let body = SignSequence::new(body_v).map_err(|_| odd_length(len, body_start + body.len()))?;
            Ok(ParsedSequence::Extended(ExtendedSignSequence::new(head_v[0], body, tail_v[0])?))
        }
        _ => Err(Error::Parse { position: 0, message: "expected zero or two `|` separators".into() }),
    }
}

/// Parse a plain sequence, rejecting the extended form.
pub fn parse_standard(text: &str) -> Result<SignSequence> {
    match parse_sequence(text)? {
        ParsedSequence::Standard(s) => Ok(s),
        ParsedSequence::Extended(_) => Err(Error::Parse { position: 0, message: "expected a plain sequence".into() }),
    }
}
