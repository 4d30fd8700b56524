//! Versioned textual serialization for [`Poly`], [`RatFunc`], [`BiPoly`].
//!
//! The grammar is deliberately tiny and has no whitespace or minus signs;
//! coefficients are printed as their base-p integer codes (so the output is
//! unambiguous for every q, including extension fields):
//!
//! ```text
//! poly   :=  "0" | term ("+" term)*          terms in descending exponent
//! term   :=  code | [code "*"] "t" ["^" exp]  code 1 omitted before t
//! rat    :=  "(" poly ")/(" poly ")" | poly   bare poly means den = 1
//! bipoly :=  "0" | bterm ("+" bterm)*         descending T-exponent
//! bterm  :=  "(" rat ")*T" ["^" exp] | rat    trailing rat is the T^0 term
//! ```
//!
//! [`FORMAT_VERSION`] names this grammar in cache files; bump it on any
//! change, the cache treats unknown versions as misses.

use crate::error::{MzvError, Result};
use crate::ffield::FieldCtx;
use crate::polyrat::{BiPoly, Poly, RatFunc};

/// Version tag for on-disk artifacts using this grammar.
pub const FORMAT_VERSION: &str = "mzvpoly/1";

pub fn format_poly(ctx: &FieldCtx, p: &Poly) -> String {
    if p.is_zero() {
        return "0".into();
    }
    let mut parts = Vec::with_capacity(p.num_terms());
    for (e, c) in p.terms().iter().rev() {
        let code = ctx.to_code(c);
        parts.push(match (code, e) {
            (code, 0) => format!("{code}"),
            (1, 1) => "t".into(),
            (1, e) => format!("t^{e}"),
            (code, 1) => format!("{code}*t"),
            (code, e) => format!("{code}*t^{e}"),
        });
    }
    parts.join("+")
}

pub fn format_rat(ctx: &FieldCtx, r: &RatFunc) -> String {
    format!(
        "({})/({})",
        format_poly(ctx, r.num()),
        format_poly(ctx, r.den())
    )
}

/// Human-oriented rendering: drops the denominator when it is 1.
pub fn display_rat(ctx: &FieldCtx, r: &RatFunc) -> String {
    if r.is_poly(ctx) {
        format_poly(ctx, r.num())
    } else {
        format_rat(ctx, r)
    }
}

pub fn format_bipoly(ctx: &FieldCtx, b: &BiPoly) -> String {
    if b.is_zero() {
        return "0".into();
    }
    let mut parts = Vec::with_capacity(b.terms().len());
    for (e, c) in b.terms().iter().rev() {
        let rat = format_rat(ctx, c);
        parts.push(match e {
            0 => rat,
            1 => format!("({rat})*T"),
            e => format!("({rat})*T^{e}"),
        });
    }
    parts.join("+")
}

pub fn parse_poly(ctx: &FieldCtx, s: &str) -> Result<Poly> {
    let s = s.trim();
    if s.is_empty() {
        return Err(bad("empty polynomial"));
    }
    if s == "0" {
        return Ok(Poly::zero());
    }
    let mut terms = Vec::new();
    for raw in split_top_level(s, '+') {
        let term = raw.trim();
        let (code_part, var_part) = match term.find('t') {
            None => (term, None),
            Some(i) => (&term[..i], Some(&term[i..])),
        };
        let code = match code_part.strip_suffix('*') {
            Some(c) => parse_u64(c)?,
            None if code_part.is_empty() && var_part.is_some() => 1,
            None => parse_u64(code_part)?,
        };
        let exp = match var_part {
            None => 0,
            Some("t") => 1,
            Some(v) => {
                let rest = v
                    .strip_prefix("t^")
                    .ok_or_else(|| bad(&format!("malformed term {term:?}")))?;
                parse_u64(rest)?
            }
        };
        terms.push((exp, ctx.from_code(code)));
    }
    Ok(Poly::from_terms(ctx, terms))
}

pub fn parse_rat(ctx: &FieldCtx, s: &str) -> Result<RatFunc> {
    let s = s.trim();
    match find_top_level(s, '/') {
        None => Ok(RatFunc::from_poly(ctx, parse_poly(ctx, s)?)),
        Some(i) => {
            let num = strip_parens(&s[..i])?;
            let den = strip_parens(&s[i + 1..])?;
            RatFunc::new(ctx, parse_poly(ctx, num)?, parse_poly(ctx, den)?)
        }
    }
}

pub fn parse_bipoly(ctx: &FieldCtx, s: &str) -> Result<BiPoly> {
    let s = s.trim();
    if s.is_empty() {
        return Err(bad("empty bivariate polynomial"));
    }
    if s == "0" {
        return Ok(BiPoly::zero());
    }
    let mut terms = Vec::new();
    for raw in split_top_level(s, '+') {
        let term = raw.trim();
        let (rat_part, exp) = match term.rfind("*T") {
            Some(i) if depth_at(term, i) == 0 => {
                let tail = &term[i + 2..];
                let e = if tail.is_empty() {
                    1
                } else {
                    let rest = tail
                        .strip_prefix('^')
                        .ok_or_else(|| bad(&format!("malformed T power {term:?}")))?;
                    parse_u64(rest)?
                };
                (strip_parens(&term[..i])?, e)
            }
            _ => (term, 0),
        };
        terms.push((exp, parse_rat(ctx, rat_part)?));
    }
    Ok(BiPoly::from_terms(ctx, terms))
}

fn bad(detail: &str) -> MzvError {
    MzvError::Parse {
        detail: detail.into(),
    }
}

fn parse_u64(s: &str) -> Result<u64> {
    s.trim()
        .parse::<u64>()
        .map_err(|_| bad(&format!("expected integer, got {s:?}")))
}

/// Splits on `sep` at parenthesis depth 0.
fn split_top_level(s: &str, sep: char) -> Vec<&str> {
    let mut parts = Vec::new();
    let mut depth = 0usize;
    let mut start = 0;
    for (i, ch) in s.char_indices() {
        match ch {
            '(' => depth += 1,
            ')' => depth = depth.saturating_sub(1),
            c if c == sep && depth == 0 => {
                parts.push(&s[start..i]);
                start = i + 1;
            }
            _ => {}
        }
    }
    parts.push(&s[start..]);
    parts
}

fn find_top_level(s: &str, target: char) -> Option<usize> {
    let mut depth = 0usize;
    for (i, ch) in s.char_indices() {
        match ch {
            '(' => depth += 1,
            ')' => depth = depth.saturating_sub(1),
            c if c == target && depth == 0 => return Some(i),
            _ => {}
        }
    }
    None
}

fn depth_at(s: &str, pos: usize) -> usize {
    let mut depth = 0usize;
    for (i, ch) in s.char_indices() {
        if i >= pos {
            break;
        }
        match ch {
            '(' => depth += 1,
            ')' => depth = depth.saturating_sub(1),
            _ => {}
        }
    }
    depth
}

fn strip_parens(s: &str) -> Result<&str> {
    let s = s.trim();
    if let Some(inner) = s.strip_prefix('(').and_then(|x| x.strip_suffix(')')) {
        // Only strip when the outer pair actually matches.
        if depth_at(inner, inner.len()) == 0
            && !inner.contains("()")
            && balanced(inner)
        {
            return Ok(inner);
        }
    }
    Ok(s)
}

fn balanced(s: &str) -> bool {
    let mut depth = 0i64;
    for ch in s.chars() {
        match ch {
            '(' => depth += 1,
            ')' => {
                depth -= 1;
                if depth < 0 {
                    return false;
                }
            }
            _ => {}
        }
    }
    depth == 0
}
