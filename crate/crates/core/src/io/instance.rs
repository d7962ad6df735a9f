//! The line-oriented `vass 2u` instance format.
//!
//! ```text
//! vass 2u
//! state q
//! trans q q 100 -1
//! trans q q -99 1
//! init q 0 1
//! target q 0 10
//! ```
//!
//! `#` starts a comment. States must be declared before they are used.

use std::fmt::Write as _;

use num_bigint::BigInt;
use thiserror::Error;

use crate::model::{Config, CoverInstance, ModelError, Vass};

pub const HEADER: &str = "vass 2u";

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseErrorKind {
    #[error("expected header `{HEADER}`")]
    BadHeader,
    #[error("unknown directive `{0}`")]
    UnknownDirective(String),
    #[error("`{0}` expects {1} arguments")]
    WrongArity(&'static str, usize),
    #[error("malformed integer `{0}`")]
    MalformedInteger(String),
    #[error("counter values must be non-negative")]
    NegativeCounter,
    #[error("duplicate `{0}` declaration")]
    Duplicate(&'static str),
    #[error("missing `{0}` declaration")]
    Missing(&'static str),
    #[error(transparent)]
    Model(#[from] ModelError),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("line {line}: {kind}")]
pub struct ParseError {
    pub line: usize,
    pub kind: ParseErrorKind,
}

fn int(tok: &str) -> Result<BigInt, ParseErrorKind> {
    let digits = tok.strip_prefix('-').unwrap_or(tok);
    if digits.is_empty() || !digits.bytes().all(|b| b.is_ascii_digit()) {
        return Err(ParseErrorKind::MalformedInteger(tok.to_string()));
    }
    tok.parse()
        .map_err(|_| ParseErrorKind::MalformedInteger(tok.to_string()))
}

fn nat(tok: &str) -> Result<BigInt, ParseErrorKind> {
    let v = int(tok)?;
    if v < BigInt::from(0) {
        return Err(ParseErrorKind::NegativeCounter);
    }
    Ok(v)
}

/// Parses an instance; unary updates must lie in `{-1, 0, 1}`.
pub fn parse_instance(text: &str) -> Result<CoverInstance, ParseError> {
    parse_instance_with(text, false)
}

/// Parses an instance; `permissive` accepts arbitrary unary updates.
pub fn parse_instance_with(text: &str, permissive: bool) -> Result<CoverInstance, ParseError> {
    let mut vass = if permissive {
        Vass::permissive()
    } else {
        Vass::new()
    };
    let mut header = false;
    let mut init: Option<Config> = None;
    let mut target: Option<Config> = None;
    let mut last_line = 0;
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        last_line = line;
        let content = raw.split('#').next().unwrap_or("");
        let toks: Vec<&str> = content.split_whitespace().collect();
        if toks.is_empty() {
            continue;
        }
        let err = |kind| ParseError { line, kind };
        if !header {
            if toks != ["vass", "2u"] {
                return Err(err(ParseErrorKind::BadHeader));
            }
            header = true;
            continue;
        }
        let arity = |name: &'static str, n: usize| {
            if toks.len() == n + 1 {
                Ok(())
            } else {
                Err(err(ParseErrorKind::WrongArity(name, n)))
            }
        };
        match toks[0] {
            "state" => {
                arity("state", 1)?;
                vass.add_state(toks[1]).map_err(|e| err(e.into()))?;
            }
            "trans" => {
                arity("trans", 4)?;
                let from = vass.state_id(toks[1]).map_err(|e| err(e.into()))?;
                let to = vass.state_id(toks[2]).map_err(|e| err(e.into()))?;
                let b = int(toks[3]).map_err(err)?;
                let u = int(toks[4]).map_err(err)?;
                vass.add_transition(from, to, b, u)
                    .map_err(|e| err(e.into()))?;
            }
            kw @ ("init" | "target") => {
                let name = if kw == "init" { "init" } else { "target" };
                arity(name, 3)?;
                let slot = if kw == "init" { &mut init } else { &mut target };
                if slot.is_some() {
                    return Err(err(ParseErrorKind::Duplicate(name)));
                }
                let s = vass.state_id(toks[1]).map_err(|e| err(e.into()))?;
                let b = nat(toks[2]).map_err(err)?;
                let u = nat(toks[3]).map_err(err)?;
                *slot = Some(Config::new(s, b, u).map_err(|e| err(e.into()))?);
            }
            other => return Err(err(ParseErrorKind::UnknownDirective(other.to_string()))),
        }
    }
    let end = |kind| ParseError {
        line: last_line.max(1),
        kind,
    };
    if !header {
        return Err(end(ParseErrorKind::BadHeader));
    }
    let init = init.ok_or_else(|| end(ParseErrorKind::Missing("init")))?;
    let target = target.ok_or_else(|| end(ParseErrorKind::Missing("target")))?;
    CoverInstance::new(vass, init, target).map_err(|e| end(e.into()))
}

pub fn serialize_instance(inst: &CoverInstance) -> String {
    let v = &inst.vass;
    let mut out = String::from(HEADER);
    out.push('\n');
    for s in v.states() {
        let _ = writeln!(out, "state {}", v.state_name(s));
    }
    for t in v.transitions() {
        let _ = writeln!(
            out,
            "trans {} {} {} {}",
            v.state_name(t.from),
            v.state_name(t.to),
            t.update.bin,
            t.update.una
        );
    }
    for (kw, c) in [("init", &inst.initial), ("target", &inst.target)] {
        let _ = writeln!(
            out,
            "{kw} {} {} {}",
            v.state_name(c.state),
            c.bin(),
            c.una()
        );
    }
    out
}
