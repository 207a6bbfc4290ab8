//! Plain-text formats for posets, elements, involutions and linear maps.
//!
//! ```text
//! # poset
//! elements: 1 2 3
//! 1 < 2
//! 2 < 3
//!
//! # involution spec
//! lambda:
//! 1 <-> 3
//! sigma:
//! 1 2 -1
//! 2 3 -1
//! mu:
//! 1 1 1
//!
//! # linear map
//! e 1 2 -> 1 1 1; 2 2 -1
//! ```
//!
//! `#` starts a comment anywhere on a line.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::incidence::Element;
use crate::involution::{InvolutionSpec, MultiplicativeElement};
use crate::maps::LinearMap;
use crate::poset::{Poset, PosetInvolution};
use crate::scalar::{Field, Scalar};

fn parse_err(line: usize, column: usize, message: impl Into<String>) -> Error {
    Error::Parse {
        line,
        column,
        message: message.into(),
    }
}

/// Non-empty lines with comments stripped, as `(line number, column of
/// first token, content)`.
fn content_lines(text: &str) -> impl Iterator<Item = (usize, usize, &str)> {
    text.lines().enumerate().filter_map(|(i, raw)| {
        let body = raw.split('#').next().unwrap_or("");
        let trimmed = body.trim();
        if trimmed.is_empty() {
            None
        } else {
            let col = body.len() - body.trim_start().len() + 1;
            Some((i + 1, col, trimmed))
        }
    })
}

/// Attaches a position to scalar parse errors.
fn scalar_at(field: Field, s: &str, line: usize, column: usize) -> Result<Scalar> {
    field.parse(s).map_err(|e| match e {
        Error::Parse { message, .. } => parse_err(line, column, message),
        Error::DivisionByZero => parse_err(line, column, format!("zero denominator in `{s}`")),
        other => other,
    })
}

pub fn parse_poset(text: &str) -> Result<Poset> {
    let mut elements: Option<Vec<String>> = None;
    let mut covers = Vec::new();
    for (line, col, content) in content_lines(text) {
        if let Some(rest) = content.strip_prefix("elements:") {
            if elements.is_some() {
                return Err(parse_err(line, col, "duplicate `elements:` header"));
            }
            elements = Some(rest.split_whitespace().map(str::to_string).collect());
            continue;
        }
        if elements.is_none() {
            return Err(parse_err(line, col, "expected `elements:` header first"));
        }
        let tokens: Vec<&str> = content.split_whitespace().collect();
        match tokens.as_slice() {
            [x, "<", y] => covers.push((x.to_string(), y.to_string())),
            _ => return Err(parse_err(line, col, format!("expected `x < y`, found `{content}`"))),
        }
    }
    let elements = elements.ok_or_else(|| parse_err(1, 1, "missing `elements:` header"))?;
    Poset::from_covers(&elements, &covers)
}

pub fn format_poset(poset: &Poset) -> String {
    let mut out = format!("elements: {}\n", poset.names().join(" "));
    for &(x, y) in poset.covers() {
        let _ = writeln!(out, "{} < {}", poset.name(x), poset.name(y));
    }
    out
}

fn parse_swap(content: &str, line: usize, col: usize) -> Result<(String, String)> {
    let tokens: Vec<&str> = content.split_whitespace().collect();
    match tokens.as_slice() {
        [x, "<->", y] => Ok((x.to_string(), y.to_string())),
        _ => Err(parse_err(line, col, format!("expected `x <-> y`, found `{content}`"))),
    }
}

/// Parses `x <-> y` lines into a validated poset involution.
pub fn parse_poset_involution(poset: &Poset, text: &str) -> Result<PosetInvolution> {
    let swaps = content_lines(text)
        .map(|(line, col, c)| parse_swap(c, line, col))
        .collect::<Result<Vec<_>>>()?;
    let lambda = PosetInvolution::from_swaps(poset, &swaps)?;
    match lambda.invalidity(poset) {
        Some(why) => Err(Error::InvalidInvolution(why)),
        None => Ok(lambda),
    }
}

fn parse_entry(
    poset: &Poset,
    field: Field,
    content: &str,
    line: usize,
    col: usize,
) -> Result<((usize, usize), Scalar)> {
    let tokens: Vec<&str> = content.split_whitespace().collect();
    let [x, y, v] = tokens.as_slice() else {
        return Err(parse_err(line, col, format!("expected `x y value`, found `{content}`")));
    };
    let (xi, yi) = (poset.index_of(x)?, poset.index_of(y)?);
    if !poset.leq(xi, yi) {
        return Err(Error::NotComparable(x.to_string(), y.to_string()));
    }
    Ok(((xi, yi), scalar_at(field, v, line, col)?))
}

/// Parses `x y value` lines. Entries on incomparable pairs are rejected;
/// repeated pairs are summed.
pub fn parse_element(poset: &Arc<Poset>, field: Field, text: &str) -> Result<Element> {
    let entries = content_lines(text)
        .map(|(line, col, c)| parse_entry(poset, field, c, line, col))
        .collect::<Result<Vec<_>>>()?;
    Element::from_entries(poset, field, entries)
}

pub fn format_element(e: &Element) -> String {
    let poset = e.poset();
    let mut out = String::new();
    for (&(x, y), v) in e.entries() {
        let _ = writeln!(out, "{} {} {}", poset.name(x), poset.name(y), v);
    }
    out
}

/// Parses a semicolon-separated element literal (`u v value; ...` or `0`).
pub fn parse_element_literal(
    poset: &Arc<Poset>,
    field: Field,
    literal: &str,
    line: usize,
    col: usize,
) -> Result<Element> {
    let literal = literal.trim();
    if literal == "0" || literal.is_empty() {
        return Ok(Element::zero(poset, field));
    }
    let entries = literal
        .split(';')
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .map(|s| parse_entry(poset, field, s, line, col))
        .collect::<Result<Vec<_>>>()?;
    Element::from_entries(poset, field, entries)
}

#[derive(PartialEq)]
enum Section {
    None,
    Lambda,
    Sigma,
    Mu,
}

/// Parses an involution spec file with `lambda:`, `sigma:` and `mu:`
/// sections. A missing `mu:` means `δ` and a missing `sigma:` (or a cover
/// not listed in it) means 1.
pub fn parse_involution_spec(poset: &Arc<Poset>, field: Field, text: &str) -> Result<InvolutionSpec> {
    let mut section = Section::None;
    let mut seen = Vec::new();
    let mut swaps = Vec::new();
    let mut sigma: BTreeMap<(usize, usize), Scalar> = BTreeMap::new();
    let mut mu_entries = Vec::new();
    for (line, col, content) in content_lines(text) {
        let header = match content {
            "lambda:" => Some(Section::Lambda),
            "sigma:" => Some(Section::Sigma),
            "mu:" => Some(Section::Mu),
            _ => None,
        };
        if let Some(h) = header {
            let key = content.to_string();
            if seen.contains(&key) {
                return Err(parse_err(line, col, format!("duplicate section `{content}`")));
            }
            seen.push(key);
            section = h;
            continue;
        }
        match section {
            Section::None => {
                return Err(parse_err(line, col, "expected a `lambda:`, `sigma:` or `mu:` header"))
            }
            Section::Lambda => swaps.push(parse_swap(content, line, col)?),
            Section::Sigma => {
                let ((x, y), v) = parse_entry(poset, field, content, line, col)?;
                if !poset.is_cover(x, y) {
                    return Err(Error::NotCover(poset.name(x).into(), poset.name(y).into()));
                }
                if sigma.insert((x, y), v).is_some() {
                    return Err(parse_err(line, col, "cover listed twice"));
                }
            }
            Section::Mu => mu_entries.push(parse_entry(poset, field, content, line, col)?),
        }
    }
    let lambda = PosetInvolution::from_swaps(poset, &swaps)?;
    let sigma = MultiplicativeElement::from_covers(poset, field, &sigma)?;
    let mu = if seen.iter().any(|s| s == "mu:") {
        Element::from_entries(poset, field, mu_entries)?
    } else {
        Element::delta(poset, field)
    };
    InvolutionSpec::new(mu, sigma, lambda)
}

pub fn format_involution_spec(spec: &InvolutionSpec) -> String {
    let poset = spec.poset();
    let mut out = String::from("lambda:\n");
    for (x, y) in spec.lambda().swaps(poset) {
        let _ = writeln!(out, "{x} <-> {y}");
    }
    out.push_str("sigma:\n");
    for (&(x, y), v) in spec.sigma().cover_values() {
        let _ = writeln!(out, "{} {} {}", poset.name(x), poset.name(y), v);
    }
    out.push_str("mu:\n");
    out.push_str(&format_element(spec.mu()));
    out
}

/// Parses `e x y -> <element literal>` lines. Basis elements that are not
/// listed map to zero.
pub fn parse_linear_map(poset: &Arc<Poset>, field: Field, text: &str) -> Result<LinearMap> {
    let mut images: Vec<Option<Element>> = vec![None; poset.dim()];
    for (line, col, content) in content_lines(text) {
        let Some((lhs, rhs)) = content.split_once("->") else {
            return Err(parse_err(line, col, "expected `e x y -> ...`"));
        };
        let tokens: Vec<&str> = lhs.split_whitespace().collect();
        let ["e", x, y] = tokens.as_slice() else {
            return Err(parse_err(line, col, format!("expected `e x y`, found `{}`", lhs.trim())));
        };
        let (xi, yi) = (poset.index_of(x)?, poset.index_of(y)?);
        let j = poset
            .pair_index(xi, yi)
            .ok_or_else(|| Error::NotComparable(x.to_string(), y.to_string()))?;
        if images[j].is_some() {
            return Err(parse_err(line, col, format!("image of e {x} {y} given twice")));
        }
        images[j] = Some(parse_element_literal(poset, field, rhs, line, col)?);
    }
    let images: Vec<Element> = images
        .into_iter()
        .map(|img| img.unwrap_or_else(|| Element::zero(poset, field)))
        .collect();
    LinearMap::from_images(poset, field, &images)
}

pub fn format_linear_map(map: &LinearMap) -> String {
    map.to_string()
}
