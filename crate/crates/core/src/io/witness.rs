//! Witness text: `expr := term* ; term := atom | '(' expr ')' '^' NAT ;
//! atom := '#' NAT`. Example: `( #0 #1 )^990 ( #1 )^10`.
//!
//! A term list of length one denotes the term itself, otherwise a sequence.
//! An empty text is the empty path.

use std::fmt::Write as _;

use num_bigint::BigUint;
use thiserror::Error;

use crate::model::TransitionId;
use crate::path::PathExpr;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum WitnessParseError {
    #[error("offset {0}: unexpected character `{1}`")]
    UnexpectedChar(usize, char),
    #[error("offset {0}: bad atom index")]
    BadAtom(usize),
    #[error("offset {0}: unbalanced parentheses")]
    Unbalanced(usize),
    #[error("offset {0}: missing exponent after `)`")]
    MissingExponent(usize),
}

struct Parser<'a> {
    s: &'a [u8],
    pos: usize,
}

impl Parser<'_> {
    fn skip_ws(&mut self) {
        while self.pos < self.s.len() && self.s[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn digits(&mut self) -> Option<&str> {
        let start = self.pos;
        while self.pos < self.s.len() && self.s[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        (self.pos > start).then(|| std::str::from_utf8(&self.s[start..self.pos]).unwrap())
    }

    fn terms(&mut self, nested: bool) -> Result<PathExpr, WitnessParseError> {
        let mut items = Vec::new();
        loop {
            self.skip_ws();
            let Some(&c) = self.s.get(self.pos) else {
                if nested {
                    return Err(WitnessParseError::Unbalanced(self.pos));
                }
                break;
            };
            match c {
                b'#' => {
                    let at = self.pos;
                    self.pos += 1;
                    let d = self.digits().ok_or(WitnessParseError::BadAtom(at))?;
                    let ix = d
                        .parse::<usize>()
                        .map_err(|_| WitnessParseError::BadAtom(at))?;
                    items.push(PathExpr::Atom(TransitionId(ix)));
                }
                b'(' => {
                    self.pos += 1;
                    let inner = self.terms(true)?;
                    // terms(true) stops on the closing parenthesis
                    self.pos += 1;
                    self.skip_ws();
                    let at = self.pos;
                    if self.s.get(self.pos) != Some(&b'^') {
                        return Err(WitnessParseError::MissingExponent(at));
                    }
                    self.pos += 1;
                    self.skip_ws();
                    let d = self
                        .digits()
                        .ok_or(WitnessParseError::MissingExponent(at))?;
                    let e: BigUint = d
                        .parse()
                        .map_err(|_| WitnessParseError::MissingExponent(at))?;
                    items.push(PathExpr::Power(Box::new(inner), e));
                }
                b')' => {
                    if !nested {
                        return Err(WitnessParseError::Unbalanced(self.pos));
                    }
                    break;
                }
                _ => {
                    let ch = std::str::from_utf8(&self.s[self.pos..])
                        .ok()
                        .and_then(|r| r.chars().next())
                        .unwrap_or('?');
                    return Err(WitnessParseError::UnexpectedChar(self.pos, ch));
                }
            }
        }
        Ok(if items.len() == 1 {
            items.pop().unwrap()
        } else {
            PathExpr::Seq(items)
        })
    }
}

pub fn parse_witness(text: &str) -> Result<PathExpr, WitnessParseError> {
    Parser {
        s: text.as_bytes(),
        pos: 0,
    }
    .terms(false)
}

/// Inverse of [`parse_witness`] on normalized expressions.
pub fn serialize_witness(e: &PathExpr) -> String {
    fn go(e: &PathExpr, out: &mut String) {
        match e {
            PathExpr::Atom(t) => {
                let _ = write!(out, "#{}", t.0);
            }
            PathExpr::Seq(cs) => {
                for (i, c) in cs.iter().enumerate() {
                    if i > 0 {
                        out.push(' ');
                    }
                    go(c, out);
                }
            }
            PathExpr::Power(c, k) => {
                out.push_str("( ");
                go(c, out);
                let _ = write!(out, " )^{k}");
            }
        }
    }
    let mut out = String::new();
    go(e, &mut out);
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fig1_text() {
        let e = parse_witness("( #0 #1 )^990 ( #1 )^10").unwrap();
        assert_eq!(
            e,
            PathExpr::seq([
                PathExpr::power(
                    PathExpr::seq([PathExpr::atom(0), PathExpr::atom(1)]),
                    990u32
                ),
                PathExpr::power(PathExpr::atom(1), 10u32),
            ])
        );
        assert_eq!(serialize_witness(&e), "( #0 #1 )^990 ( #1 )^10");
    }

    #[test]
    fn small_forms() {
        assert_eq!(parse_witness("#0").unwrap(), PathExpr::atom(0));
        let e = parse_witness("( ( #0 )^2 )^3").unwrap();
        assert_eq!(
            e,
            PathExpr::power(PathExpr::power(PathExpr::atom(0), 2u32), 3u32)
        );
        assert_eq!(e.power_depth(), 2);
        assert_eq!(parse_witness("  \n").unwrap(), PathExpr::empty());
        assert_eq!(
            parse_witness("(#3)^123456789012345678901234567890")
                .unwrap()
                .power_count(),
            1
        );
    }

    #[test]
    fn errors() {
        assert!(matches!(
            parse_witness("( #0"),
            Err(WitnessParseError::Unbalanced(_))
        ));
        assert!(matches!(
            parse_witness("#0 )"),
            Err(WitnessParseError::Unbalanced(_))
        ));
        assert!(matches!(
            parse_witness("#x"),
            Err(WitnessParseError::BadAtom(0))
        ));
        assert!(matches!(
            parse_witness("( #0 ) #1"),
            Err(WitnessParseError::MissingExponent(_))
        ));
        assert!(matches!(
            parse_witness("( #0 )^"),
            Err(WitnessParseError::MissingExponent(_))
        ));
        assert!(matches!(
            parse_witness("#0 !"),
            Err(WitnessParseError::UnexpectedChar(3, '!'))
        ));
    }
}
