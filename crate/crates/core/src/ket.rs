//! Ket syntax shared by multisets and distributions.
//!
//! A ket expression is a `+`-separated list of terms `c|x>` where `c` is a
//! coefficient (a natural for multisets, a rational `p/q` for distributions)
//! and `x` is the element. Elements may themselves be ket expressions, as in
//! `1/5|3|0> + 1|3>> + 3/5|2|0> + 1|1> + 1|2>>`. The empty multiset is written
//! `0`. Whitespace between tokens is ignored.

use crate::error::{Error, Result};

/// Split a ket expression into `(coefficient, element)` pairs, honouring
/// nested kets inside the element.
pub fn split_terms(text: &str) -> Result<Vec<(String, String)>> {
    let text = text.trim();
    if text.is_empty() || text == "0" {
        return Ok(Vec::new());
    }
    let chars: Vec<char> = text.chars().collect();
    let mut terms = Vec::new();
    let mut pos = 0;
    loop {
        while pos < chars.len() && chars[pos].is_whitespace() {
            pos += 1;
        }
        let start = pos;
        while pos < chars.len() && chars[pos] != '|' {
            pos += 1;
        }
        if pos == chars.len() {
            return Err(Error::Parse(format!("missing `|` in `{text}`")));
        }
        let coef: String = chars[start..pos].iter().collect::<String>().trim().to_string();
        if coef.is_empty() {
            return Err(Error::Parse(format!("missing coefficient in `{text}`")));
        }
        pos += 1;
        let inner_start = pos;
        let mut depth = 1usize;
        while pos < chars.len() {
            match chars[pos] {
                '|' => depth += 1,
                '>' => {
                    depth -= 1;
                    if depth == 0 {
                        break;
                    }
                }
                _ => {}
            }
            pos += 1;
        }
        if depth != 0 {
            return Err(Error::Parse(format!("unbalanced ket in `{text}`")));
        }
        let inner: String = chars[inner_start..pos].iter().collect::<String>().trim().to_string();
        if inner.is_empty() {
            return Err(Error::Parse(format!("empty ket in `{text}`")));
        }
        terms.push((coef, inner));
        pos += 1;
        while pos < chars.len() && chars[pos].is_whitespace() {
            pos += 1;
        }
        if pos == chars.len() {
            break;
        }
        if chars[pos] != '+' {
            return Err(Error::Parse(format!(
                "expected `+` at offset {pos} in `{text}`"
            )));
        }
        pos += 1;
    }
    Ok(terms)
}
