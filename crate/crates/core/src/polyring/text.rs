//! Line-oriented text format for forms.
//!
//! ```text
//! # comment
//! n d
//! <coeff> <e1> ... <en>
//! ```
//!
//! Coefficients are integers or `p/q`. Exponents must sum to `d`.
//! Duplicate monomials are summed. A system is a sequence of such blocks
//! separated by a line containing only `---`.

use std::fmt::Write as _;

use super::Form;
use crate::error::{Error, Result};
use crate::rational::parse_rational;

pub fn parse_form(text: &str) -> Result<Form> {
    let lines: Vec<(usize, &str)> = text.lines().enumerate().map(|(i, l)| (i + 1, l)).collect();
    if let Some((line, _)) = lines.iter().find(|(_, l)| l.trim() == "---") {
        return Err(Error::parse(
            *line,
            "unexpected system separator in a single-form file",
        ));
    }
    parse_block(&lines, text.lines().count())
}

pub fn parse_system(text: &str) -> Result<Vec<Form>> {
    let mut blocks: Vec<Vec<(usize, &str)>> = vec![Vec::new()];
    for (i, l) in text.lines().enumerate() {
        if l.trim() == "---" {
            blocks.push(Vec::new());
        } else {
            blocks.last_mut().expect("nonempty").push((i + 1, l));
        }
    }
    let total = text.lines().count();
    let forms = blocks
        .iter()
        .map(|b| parse_block(b, total))
        .collect::<Result<Vec<_>>>()?;
    if let Some(first) = forms.first() {
        if let Some(bad) = forms.iter().position(|f| f.n() != first.n()) {
            let line = blocks[bad]
                .iter()
                .find(|(_, l)| is_content(l))
                .map(|(i, _)| *i)
                .unwrap_or(total);
            return Err(Error::parse(
                line,
                format!(
                    "form {} has {} variables, expected {}",
                    bad + 1,
                    forms[bad].n(),
                    first.n()
                ),
            ));
        }
    }
    Ok(forms)
}

fn is_content(line: &str) -> bool {
    let t = line.trim();
    !t.is_empty() && !t.starts_with('#')
}

fn parse_block(lines: &[(usize, &str)], total_lines: usize) -> Result<Form> {
    let mut content = lines.iter().filter(|(_, l)| is_content(l));
    let Some(&(hline, header)) = content.next() else {
        let at = lines.last().map(|(i, _)| *i).unwrap_or(total_lines.max(1));
        return Err(Error::parse(at, "missing \"n d\" header"));
    };
    let fields: Vec<&str> = header.split_whitespace().collect();
    let [n, d] = fields.as_slice() else {
        return Err(Error::parse(hline, "header must be \"n d\""));
    };
    let n: usize = n
        .parse()
        .map_err(|_| Error::parse(hline, format!("invalid variable count {n:?}")))?;
    let d: u32 = d
        .parse()
        .map_err(|_| Error::parse(hline, format!("invalid degree {d:?}")))?;
    if n == 0 {
        return Err(Error::parse(hline, "variable count must be at least 1"));
    }

    let mut terms = Vec::new();
    for &(line, text) in content {
        let fields: Vec<&str> = text.split_whitespace().collect();
        if fields.len() != n + 1 {
            return Err(Error::parse(
                line,
                format!("expected a coefficient and {n} exponents, found {} fields", fields.len()),
            ));
        }
        let coeff = parse_rational(fields[0])
            .ok_or_else(|| Error::parse(line, format!("invalid coefficient {:?}", fields[0])))?;
        let exps = fields[1..]
            .iter()
            .map(|e| {
                e.parse::<u32>()
                    .map_err(|_| Error::parse(line, format!("invalid exponent {e:?}")))
            })
            .collect::<Result<Vec<u32>>>()?;
        let deg: u64 = exps.iter().map(|&e| e as u64).sum();
        if deg != d as u64 {
            return Err(Error::parse(
                line,
                format!("inhomogeneous term: exponents sum to {deg}, expected {d}"),
            ));
        }
        terms.push((exps, coeff));
    }
    Form::from_terms(n, d, terms).map_err(|e| Error::parse(hline, e.to_string()))
}

pub fn serialize_form(f: &Form) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "{} {}", f.n(), f.degree());
    for (m, c) in f.terms() {
        out.push_str(&c.to_string());
        for e in m.exponents() {
            let _ = write!(out, " {e}");
        }
        out.push('\n');
    }
    out
}

pub fn serialize_system(forms: &[Form]) -> String {
    forms
        .iter()
        .map(serialize_form)
        .collect::<Vec<_>>()
        .join("---\n")
}
