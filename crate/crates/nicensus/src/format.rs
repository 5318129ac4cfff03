//! Text and JSON forms of fields, matrices, polynomials and towers.
//!
//! * field: `p^k`, `p^k/m` (modulus pinned by its integer encoding, leading
//!   coefficient included) or a bare prime power `q`;
//! * matrix: `d FIELD : e11 e12 … edd`, entries as element encodings, or the
//!   JSON object `{"field": "2^2", "d": 2, "entries": [...]}`;
//! * polynomial: `c0+c1*t+c2*t^2` or a JSON array `[c0, c1, ...]`;
//! * tower: `Q/q` with `Q = q^b`, e.g. `4/2`.
//!
//! Parse errors carry the byte offset of the offending token.

use nicensus_core::embed::Tower;
use nicensus_core::gf::prime_power;
use nicensus_core::{Elem, Field, Mat, Poly};
use serde_json::Value;

use crate::error::{parse_err, Result};

fn number(s: &str, pos: usize) -> Result<u64> {
    s.trim().parse::<u64>().map_err(|_| parse_err(pos, format!("expected a non-negative integer, found `{s}`")))
}

/// Parses a field descriptor that starts at byte `offset` of the original input.
fn field_at(s: &str, offset: usize) -> Result<Field> {
    let (main, modulus) = match s.split_once('/') {
        Some((a, m)) => (a, Some((m, a.len() + 1))),
        None => (s, None),
    };
    let (p, k) = match main.split_once('^') {
        Some((p, k)) => (number(p, offset)?, number(k, offset + p.len() + 1)? as u32),
        None => {
            let q = number(main, offset)?;
            prime_power(q).ok_or_else(|| parse_err(offset, format!("{q} is not a prime power")))?
        }
    };
    let built = match modulus {
        None => Field::new(p, k, None),
        Some((m, at)) => Field::from_modulus_index(p, k, number(m, offset + at)?),
    };
    built.map_err(|e| parse_err(offset, format!("invalid field `{s}`: {e}")))
}

pub fn parse_field(s: &str) -> Result<Field> {
    let lead = s.len() - s.trim_start().len();
    field_at(s.trim(), lead)
}

/// `p^k`, with `/m` appended when the modulus is not the canonical one.
pub fn field_descriptor(field: &Field) -> String {
    let (p, k) = (field.characteristic(), field.degree());
    let canonical = Field::new(p, k, None).expect("field parameters are valid");
    if canonical.modulus_coeffs() == field.modulus_coeffs() {
        format!("{p}^{k}")
    } else {
        let m = field.modulus_coeffs().iter().rev().fold(0u64, |acc, &c| acc * p + c as u64);
        format!("{p}^{k}/{m}")
    }
}

/// Whitespace-separated tokens with their byte offsets; `:` is always a
/// token of its own.
fn tokens(s: &str) -> Vec<(usize, &str)> {
    let mut out = Vec::new();
    let mut start = None;
    for (i, ch) in s.char_indices() {
        if ch.is_whitespace() || ch == ':' {
            if let Some(b) = start.take() {
                out.push((b, &s[b..i]));
            }
            if ch == ':' {
                out.push((i, ":"));
            }
        } else if start.is_none() {
            start = Some(i);
        }
    }
    if let Some(b) = start {
        out.push((b, &s[b..]));
    }
    out
}

fn element(field: &Field, v: u64, pos: usize) -> Result<Elem> {
    field
        .try_elem(v)
        .ok_or_else(|| parse_err(pos, format!("entry {v} is not an element of F_{}", field.size())))
}

/// Parses the text form `d FIELD : e11 … edd`.
pub fn parse_matrix(s: &str) -> Result<Mat> {
    let toks = tokens(s);
    let mut it = toks.iter().copied();
    let (dpos, dtok) = it.next().ok_or_else(|| parse_err(0, "empty matrix"))?;
    let d = number(dtok, dpos)? as usize;
    if d == 0 {
        return Err(parse_err(dpos, "dimension must be positive"));
    }
    let (fpos, ftok) = it.next().ok_or_else(|| parse_err(s.len(), "missing field descriptor"))?;
    if ftok == ":" {
        return Err(parse_err(fpos, "missing field descriptor"));
    }
    let field = field_at(ftok, fpos)?;
    match it.next() {
        Some((_, ":")) => {}
        Some((pos, t)) => return Err(parse_err(pos, format!("expected `:`, found `{t}`"))),
        None => return Err(parse_err(s.len(), "expected `:`")),
    }
    let mut data = Vec::with_capacity(d * d);
    for (pos, t) in it {
        if data.len() == d * d {
            return Err(parse_err(pos, format!("more than {} entries", d * d)));
        }
        data.push(element(&field, number(t, pos)?, pos)?);
    }
    if data.len() < d * d {
        return Err(parse_err(s.len(), format!("expected {} entries, found {}", d * d, data.len())));
    }
    Ok(Mat::new(&field, d, d, data))
}

fn json_offset(src: &str, e: &serde_json::Error) -> usize {
    let line_start: usize = src.split_inclusive('\n').take(e.line().saturating_sub(1)).map(str::len).sum();
    line_start + e.column().saturating_sub(1)
}

/// Parses `{"field": "p^k", "d": n, "entries": [...]}`.
pub fn matrix_from_json(v: &Value) -> Result<Mat> {
    let bad = |msg: &str| parse_err(0, msg.to_string());
    let field = parse_field(v.get("field").and_then(Value::as_str).ok_or_else(|| bad("missing string `field`"))?)?;
    let d = v.get("d").and_then(Value::as_u64).ok_or_else(|| bad("missing integer `d`"))? as usize;
    let entries = v.get("entries").and_then(Value::as_array).ok_or_else(|| bad("missing array `entries`"))?;
    if d == 0 || entries.len() != d * d {
        return Err(bad(&format!("expected {} entries, found {}", d * d, entries.len())));
    }
    let data = entries
        .iter()
        .map(|e| e.as_u64().ok_or_else(|| bad("entries must be integers")).and_then(|x| element(&field, x, 0)))
        .collect::<Result<Vec<_>>>()?;
    Ok(Mat::new(&field, d, d, data))
}

/// Text or JSON matrix, chosen by the first non-blank character.
pub fn parse_matrix_input(s: &str) -> Result<Mat> {
    if s.trim_start().starts_with('{') {
        let v: Value = serde_json::from_str(s).map_err(|e| parse_err(json_offset(s, &e), e.to_string()))?;
        matrix_from_json(&v)
    } else {
        parse_matrix(s)
    }
}

/// Parses `c0+c1*t+c2*t^2` (terms in any order, repeats summed) or `[c0, c1, ...]`.
pub fn parse_poly(s: &str, field: &Field) -> Result<Poly> {
    if s.trim_start().starts_with('[') {
        let v: Vec<u64> = serde_json::from_str(s).map_err(|e| parse_err(json_offset(s, &e), e.to_string()))?;
        let coeffs = v.iter().map(|&c| element(field, c, 0)).collect::<Result<Vec<_>>>()?;
        return Ok(Poly::new(field, coeffs));
    }
    let mut coeffs: Vec<Elem> = Vec::new();
    let mut offset = 0;
    for term in s.split('+') {
        let pos = offset + term.len() - term.trim_start().len();
        offset += term.len() + 1;
        let term = term.trim();
        if term.is_empty() {
            return Err(parse_err(pos, "empty term"));
        }
        let (c, power) = match term.split_once('t') {
            None => (element(field, number(term, pos)?, pos)?, 0usize),
            Some((head, tail)) => {
                let c = match head.trim() {
                    "" => Elem::ONE,
                    h => {
                        let h = h.strip_suffix('*').ok_or_else(|| parse_err(pos, format!("expected `*` in `{term}`")))?;
                        element(field, number(h, pos)?, pos)?
                    }
                };
                let e = match tail.trim() {
                    "" => 1,
                    t => {
                        let t = t.strip_prefix('^').ok_or_else(|| parse_err(pos, format!("expected `^` in `{term}`")))?;
                        number(t, pos)? as usize
                    }
                };
                (c, e)
            }
        };
        if coeffs.len() <= power {
            coeffs.resize(power + 1, Elem::ZERO);
        }
        coeffs[power] = field.add(coeffs[power], c);
    }
    Ok(Poly::new(field, coeffs))
}

/// Parses `Q/q` where each side is a size or `p^k`.
pub fn parse_tower(s: &str) -> Result<Tower> {
    let lead = s.len() - s.trim_start().len();
    let t = s.trim();
    let (big, small) = t.split_once('/').ok_or_else(|| parse_err(lead, "expected `Q/q`"))?;
    let size = |part: &str, pos: usize| -> Result<u64> {
        match part.split_once('^') {
            Some((p, k)) => Ok(number(p, pos)?.pow(number(k, pos + p.len() + 1)? as u32)),
            None => number(part, pos),
        }
    };
    let qb = size(big, lead)?;
    let spos = lead + big.len() + 1;
    let q = size(small, spos)?;
    if prime_power(q).is_none() {
        return Err(parse_err(spos, format!("{q} is not a prime power")));
    }
    let mut b = 1u32;
    let mut acc = q;
    while acc < qb {
        acc = acc.saturating_mul(q);
        b += 1;
    }
    if acc != qb {
        return Err(parse_err(lead, format!("{qb} is not a power of {q}")));
    }
    Tower::with_sizes(q, b).map_err(|e| parse_err(lead, e.to_string()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::error::CliError;

    fn pos(r: Result<impl std::fmt::Debug>) -> usize {
        match r {
            Err(CliError::Parse { pos, .. }) => pos,
            other => panic!("expected a parse error, got {other:?}"),
        }
    }

    #[test]
    fn fields() {
        assert_eq!(parse_field("2^2").unwrap().size(), 4);
        assert_eq!(parse_field(" 9 ").unwrap(), parse_field("3^2").unwrap());
        let f8 = parse_field("2^3/11").unwrap();
        assert_eq!(f8.modulus_coeffs(), &[1, 1, 0, 1]);
        assert_eq!(field_descriptor(&f8), "2^3/11");
        assert_eq!(field_descriptor(&parse_field("8").unwrap()), "2^3");
        assert_eq!(pos(parse_field("4^1")), 0);
        assert_eq!(pos(parse_field("2^x")), 2);
        assert_eq!(pos(parse_field("2^2/5")), 0);
        assert_eq!(pos(parse_field("6")), 0);
    }

    #[test]
    fn matrices() {
        let m = parse_matrix("2 2 : 1 0 0 0").unwrap();
        assert_eq!(m.to_string(), "2 2^1 : 1 0 0 0");
        assert_eq!(parse_matrix(&m.to_string()).unwrap(), m);
        assert_eq!(parse_matrix("1 2^2: 3").unwrap().entries()[0].index(), 3);
        assert_eq!(pos(parse_matrix("2 2 : 1 0 5 0")), 10);
        assert_eq!(pos(parse_matrix("2 2 : 1 0 0")), 11);
        assert_eq!(pos(parse_matrix("2 2 1 0 0 0")), 4);
        assert_eq!(pos(parse_matrix("x 2 : 1")), 0);
        assert_eq!(pos(parse_matrix("1 2 : 1 1")), 8);
        assert_eq!(pos(parse_matrix("")), 0);
        let j = parse_matrix_input(r#"{"field": "2^2", "d": 1, "entries": [2]}"#).unwrap();
        assert_eq!(j, parse_matrix("1 4 : 2").unwrap());
        assert!(matches!(parse_matrix_input("{\"field\": 1"), Err(CliError::Parse { .. })));
    }

    #[test]
    fn polys() {
        let f = parse_field("2").unwrap();
        let p = parse_poly("1+t+t^2", &f).unwrap();
        assert_eq!(p, Poly::from_indices(&f, &[1, 1, 1]));
        assert_eq!(parse_poly(&p.to_string(), &f).unwrap(), p);
        assert_eq!(parse_poly("[1, 1, 1]", &f).unwrap(), p);
        assert_eq!(parse_poly("1*t^2+t+1", &f).unwrap(), p);
        assert_eq!(parse_poly("t+t", &f).unwrap(), Poly::zero(&f));
        assert_eq!(pos(parse_poly("1+3*t", &f)), 2);
        assert_eq!(pos(parse_poly("1++t", &f)), 2);
    }

    #[test]
    fn towers() {
        let t = parse_tower("4/2").unwrap();
        assert_eq!((t.ext().size(), t.base().size(), t.degree()), (4, 2, 2));
        assert_eq!(t.to_string(), "4/2");
        assert_eq!(parse_tower("3^4/9").unwrap().degree(), 2);
        assert_eq!(pos(parse_tower("8/4")), 0);
        assert_eq!(pos(parse_tower("4/6")), 2);
        assert_eq!(pos(parse_tower("4")), 0);
    }
}
