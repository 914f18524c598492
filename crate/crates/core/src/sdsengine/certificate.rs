//! Certificates and their replay.
//!
//! Text layout (one `key=value` per line, rationals as `p/q`):
//!
//! ```text
//! # sds certificate
//! verdict=Positive
//! goal=ProveStrictPositive
//! n=2
//! degree=2
//! form_sha256=...
//! max_depth=6
//! depth_used=1
//! open_cells=0
//! overflow=false
//! leaves=2
//! word=12 class=AllPositive
//! word=21 class=AllPositive
//! ```
//!
//! A `NegativeWitness` certificate ends with `witness_word`,
//! `witness_point` and `witness_value` lines instead of leaves.

use std::collections::HashSet;
use std::fmt;
use std::fmt::Write as _;
use std::str::FromStr;

use num_traits::Signed;
use sha2::{Digest, Sha256};

use super::Goal;
use crate::error::{Error, Result};
use crate::expansion::{expand, sign_classify, SignClass};
use crate::polyring::{serialize_form, Form, RationalPoint};
use crate::rational::{parse_rational, Rational};
use crate::simplexgeo::{Permutation, PermutationWord, SimplexMatrix};

pub const CERTIFICATE_HEADER: &str = "# sds certificate";
pub const CELL_CERTIFICATE_HEADER: &str = "# sds cell certificate";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Verdict {
    Positive,
    Nonnegative,
    NegativeWitness,
    Undecided,
}

impl Verdict {
    pub fn tag(self) -> &'static str {
        match self {
            Verdict::Positive => "Positive",
            Verdict::Nonnegative => "Nonnegative",
            Verdict::NegativeWitness => "NegativeWitness",
            Verdict::Undecided => "Undecided",
        }
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.tag())
    }
}

impl FromStr for Verdict {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        [
            Verdict::Positive,
            Verdict::Nonnegative,
            Verdict::NegativeWitness,
            Verdict::Undecided,
        ]
        .into_iter()
        .find(|v| v.tag() == s)
        .ok_or_else(|| Error::MalformedCertificate(format!("unknown verdict {s:?}")))
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Leaf {
    pub word: PermutationWord,
    pub class: SignClass,
}

/// A point of `Δ_n` inside the cell named by `word`, with the exact value
/// of `f` there.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Witness {
    pub word: PermutationWord,
    pub point: RationalPoint,
    pub value: Rational,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Certificate {
    pub verdict: Verdict,
    pub goal: Goal,
    pub n: usize,
    pub degree: u32,
    pub form_sha256: String,
    pub max_depth: usize,
    pub depth_used: usize,
    pub open_cells: usize,
    pub overflow: bool,
    pub leaves: Vec<Leaf>,
    pub witness: Option<Witness>,
}

/// SHA-256 of the canonical serialization, as lowercase hex.
pub fn form_digest(f: &Form) -> String {
    hex_digest(serialize_form(f).as_bytes())
}

pub(crate) fn hex_digest(bytes: &[u8]) -> String {
    Sha256::digest(bytes)
        .iter()
        .fold(String::with_capacity(64), |mut s, b| {
            let _ = write!(s, "{b:02x}");
            s
        })
}

impl Certificate {
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "{CERTIFICATE_HEADER}");
        let _ = writeln!(out, "verdict={}", self.verdict);
        let _ = writeln!(out, "goal={}", self.goal);
        let _ = writeln!(out, "n={}", self.n);
        let _ = writeln!(out, "degree={}", self.degree);
        let _ = writeln!(out, "form_sha256={}", self.form_sha256);
        let _ = writeln!(out, "max_depth={}", self.max_depth);
        let _ = writeln!(out, "depth_used={}", self.depth_used);
        let _ = writeln!(out, "open_cells={}", self.open_cells);
        let _ = writeln!(out, "overflow={}", self.overflow);
        write_leaves(&mut out, &self.leaves);
        if let Some(w) = &self.witness {
            write_witness(&mut out, w);
        }
        out
    }

    pub fn parse(text: &str) -> Result<Self> {
        let mut kv = KeyValues::new(text, CERTIFICATE_HEADER)?;
        let verdict = kv.take("verdict")?.parse()?;
        let goal = kv.take("goal")?.parse().map_err(malformed)?;
        let n = kv.take_parsed("n")?;
        let degree = kv.take_parsed("degree")?;
        let form_sha256 = kv.take("form_sha256")?.to_string();
        let max_depth = kv.take_parsed("max_depth")?;
        let depth_used = kv.take_parsed("depth_used")?;
        let open_cells = kv.take_parsed("open_cells")?;
        let overflow = kv.take_parsed("overflow")?;
        let leaves = kv.take_leaves()?;
        let witness = kv.take_witness()?;
        kv.finish()?;
        Ok(Certificate {
            verdict,
            goal,
            n,
            degree,
            form_sha256,
            max_depth,
            depth_used,
            open_cells,
            overflow,
            leaves,
            witness,
        })
    }
}

pub(crate) fn write_leaves(out: &mut String, leaves: &[Leaf]) {
    let _ = writeln!(out, "leaves={}", leaves.len());
    for l in leaves {
        let _ = writeln!(out, "word={} class={}", l.word, l.class);
    }
}

pub(crate) fn write_witness(out: &mut String, w: &Witness) {
    let _ = writeln!(out, "witness_word={}", w.word);
    let _ = writeln!(out, "witness_point={}", w.point);
    let _ = writeln!(out, "witness_value={}", w.value);
}

fn malformed(e: Error) -> Error {
    match e {
        Error::MalformedCertificate(_) => e,
        other => Error::MalformedCertificate(other.to_string()),
    }
}

/// Sequential reader over `key=value` lines.
pub(crate) struct KeyValues<'a> {
    lines: Vec<(usize, &'a str)>,
    pos: usize,
}

impl<'a> KeyValues<'a> {
    pub(crate) fn new(text: &'a str, header: &str) -> Result<Self> {
        let mut lines: Vec<(usize, &str)> = text
            .lines()
            .enumerate()
            .map(|(i, l)| (i + 1, l.trim()))
            .filter(|(_, l)| !l.is_empty())
            .collect();
        match lines.first() {
            Some((_, h)) if *h == header => {
                lines.remove(0);
            }
            _ => {
                return Err(Error::MalformedCertificate(format!(
                    "missing header line {header:?}"
                )))
            }
        }
        Ok(KeyValues { lines, pos: 0 })
    }

    fn peek_key(&self) -> Option<&'a str> {
        self.lines
            .get(self.pos)
            .and_then(|(_, l)| l.split_once('=').map(|(k, _)| k))
    }

    pub(crate) fn take(&mut self, key: &str) -> Result<&'a str> {
        let Some(&(line, text)) = self.lines.get(self.pos) else {
            return Err(Error::MalformedCertificate(format!("missing {key:?}")));
        };
        match text.split_once('=') {
            Some((k, v)) if k == key => {
                self.pos += 1;
                Ok(v)
            }
            _ => Err(Error::MalformedCertificate(format!(
                "line {line}: expected {key}=..., found {text:?}"
            ))),
        }
    }

    pub(crate) fn take_parsed<T: FromStr>(&mut self, key: &str) -> Result<T> {
        let v = self.take(key)?;
        v.parse()
            .map_err(|_| Error::MalformedCertificate(format!("invalid {key} value {v:?}")))
    }

    pub(crate) fn take_rational(&mut self, key: &str) -> Result<Rational> {
        let v = self.take(key)?;
        parse_rational(v)
            .ok_or_else(|| Error::MalformedCertificate(format!("invalid {key} value {v:?}")))
    }

    pub(crate) fn take_leaves(&mut self) -> Result<Vec<Leaf>> {
        let count: usize = self.take_parsed("leaves")?;
        let mut leaves = Vec::with_capacity(count);
        for _ in 0..count {
            let (line, text) = *self.lines.get(self.pos).ok_or_else(|| {
                Error::MalformedCertificate(format!("expected {count} leaf lines"))
            })?;
            let bad = || Error::MalformedCertificate(format!("line {line}: bad leaf {text:?}"));
            let (w, c) = text.split_once(' ').ok_or_else(bad)?;
            let w = w.strip_prefix("word=").ok_or_else(bad)?;
            let c = c.trim().strip_prefix("class=").ok_or_else(bad)?;
            leaves.push(Leaf {
                word: w.parse().map_err(malformed)?,
                class: c.parse()?,
            });
            self.pos += 1;
        }
        Ok(leaves)
    }

    pub(crate) fn take_witness(&mut self) -> Result<Option<Witness>> {
        if self.peek_key() != Some("witness_word") {
            return Ok(None);
        }
        let word = self.take("witness_word")?.parse().map_err(malformed)?;
        let point_text = self.take("witness_point")?;
        let point = RationalPoint::parse(point_text).ok_or_else(|| {
            Error::MalformedCertificate(format!("invalid witness point {point_text:?}"))
        })?;
        let value = self.take_rational("witness_value")?;
        Ok(Some(Witness { word, point, value }))
    }

    pub(crate) fn has_key(&self, key: &str) -> bool {
        self.peek_key() == Some(key)
    }

    /// Lines not consumed by `take*`, for trailing free-form blocks.
    pub(crate) fn rest(&mut self) -> Vec<&'a str> {
        let rest = self.lines[self.pos..].iter().map(|(_, l)| *l).collect();
        self.pos = self.lines.len();
        rest
    }

    pub(crate) fn finish(&self) -> Result<()> {
        match self.lines.get(self.pos) {
            None => Ok(()),
            Some((line, text)) => Err(Error::MalformedCertificate(format!(
                "line {line}: unexpected {text:?}"
            ))),
        }
    }
}

fn check_words(leaves: &[Leaf], n: usize) -> Result<()> {
    for l in leaves {
        if let Some(p) = l.word.letters().iter().find(|p| p.n() != n) {
            return Err(Error::MalformedCertificate(format!(
                "word {} uses a permutation of {} points in dimension {n}",
                l.word,
                p.n()
            )));
        }
    }
    Ok(())
}

/// True iff the words are prefix-free and every infinite path from the
/// root passes through exactly one of them.
pub fn is_complete_frontier(words: &[PermutationWord], n: usize) -> bool {
    let set: HashSet<&PermutationWord> = words.iter().collect();
    if set.len() != words.len() {
        return false;
    }
    for w in words {
        let mut p = w.parent();
        while let Some(prefix) = p {
            if set.contains(&prefix) {
                return false;
            }
            p = prefix.parent();
        }
    }
    let deepest = words.iter().map(|w| w.len()).max().unwrap_or(0);
    let perms = Permutation::all(n);
    fn covers(
        w: &PermutationWord,
        set: &HashSet<&PermutationWord>,
        perms: &[Permutation],
        deepest: usize,
    ) -> bool {
        if set.contains(w) {
            return true;
        }
        if w.len() >= deepest {
            return false;
        }
        perms
            .iter()
            .all(|p| covers(&w.child(p.clone()), set, perms, deepest))
    }
    !words.is_empty() && covers(&PermutationWord::empty(), &set, &perms, deepest)
}

pub(crate) fn leaves_reproduce(f: &Form, leaves: &[Leaf]) -> Result<bool> {
    for leaf in leaves {
        let cell = SimplexMatrix::product_chain(&leaf.word, f.n())?;
        if sign_classify(&expand(f, &cell)?) != leaf.class {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Point lies on `Δ_n` and inside the cell named by its word.
pub(crate) fn witness_in_cell(n: usize, w: &Witness) -> Result<bool> {
    if w.point.dim() != n {
        return Err(Error::MalformedCertificate(format!(
            "witness point has {} coordinates, expected {n}",
            w.point.dim()
        )));
    }
    if w.word.letters().iter().any(|p| p.n() != n) {
        return Err(Error::MalformedCertificate("witness word dimension".into()));
    }
    if !w.point.on_simplex() {
        return Ok(false);
    }
    let cell = SimplexMatrix::product_chain(&w.word, n)?;
    Ok(cell.contains_point(&w.point)?.contained)
}

/// Re-derives every claim of `cert` from `f` alone.
pub fn replay_certificate(f: &Form, cert: &Certificate) -> Result<bool> {
    check_words(&cert.leaves, cert.n)?;
    if cert.n != f.n() || cert.degree != f.degree() || cert.form_sha256 != form_digest(f) {
        return Ok(false);
    }
    match cert.verdict {
        Verdict::Positive | Verdict::Nonnegative => {
            if cert.witness.is_some() || cert.open_cells != 0 || cert.overflow {
                return Err(Error::MalformedCertificate(format!(
                    "{} certificate with open cells or a witness",
                    cert.verdict
                )));
            }
            let class_ok = |c: SignClass| match cert.verdict {
                Verdict::Positive => c == SignClass::AllPositive,
                _ => matches!(c, SignClass::AllPositive | SignClass::AllNonnegative),
            };
            if !cert.leaves.iter().all(|l| class_ok(l.class) && cert.goal.accepts(l.class)) {
                return Ok(false);
            }
            let words: Vec<PermutationWord> = cert.leaves.iter().map(|l| l.word.clone()).collect();
            if !is_complete_frontier(&words, f.n()) {
                return Ok(false);
            }
            leaves_reproduce(f, &cert.leaves)
        }
        Verdict::NegativeWitness => {
            let w = cert.witness.as_ref().ok_or_else(|| {
                Error::MalformedCertificate("NegativeWitness without a witness".into())
            })?;
            if !w.value.is_negative() || f.evaluate(&w.point)? != w.value {
                return Ok(false);
            }
            witness_in_cell(f.n(), w)
        }
        Verdict::Undecided => leaves_reproduce(f, &cert.leaves),
    }
}

/// Sign claim for `f` on one explicit sub-simplex.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CellCertificate {
    pub n: usize,
    pub degree: u32,
    pub form_sha256: String,
    pub class: SignClass,
    pub matrix: SimplexMatrix,
}

impl CellCertificate {
    pub fn new(f: &Form, matrix: SimplexMatrix) -> Result<Self> {
        let class = sign_classify(&expand(f, &matrix)?);
        Ok(CellCertificate {
            n: f.n(),
            degree: f.degree(),
            form_sha256: form_digest(f),
            class,
            matrix,
        })
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "{CELL_CERTIFICATE_HEADER}");
        let _ = writeln!(out, "n={}", self.n);
        let _ = writeln!(out, "degree={}", self.degree);
        let _ = writeln!(out, "form_sha256={}", self.form_sha256);
        let _ = writeln!(out, "class={}", self.class);
        let _ = writeln!(out, "matrix=");
        out.push_str(&self.matrix.to_text());
        out
    }

    pub fn parse(text: &str) -> Result<Self> {
        let mut kv = KeyValues::new(text, CELL_CERTIFICATE_HEADER)?;
        let n = kv.take_parsed("n")?;
        let degree = kv.take_parsed("degree")?;
        let form_sha256 = kv.take("form_sha256")?.to_string();
        let class = kv.take("class")?.parse()?;
        if !kv.has_key("matrix") {
            return Err(Error::MalformedCertificate("missing matrix block".into()));
        }
        kv.take("matrix")?;
        let matrix = SimplexMatrix::parse(&kv.rest().join("\n")).map_err(malformed)?;
        if matrix.n() != n {
            return Err(Error::MalformedCertificate(format!(
                "matrix is {}x{0}, expected {n}x{n}",
                matrix.n()
            )));
        }
        Ok(CellCertificate {
            n,
            degree,
            form_sha256,
            class,
            matrix,
        })
    }
}

pub fn replay_cell_certificate(f: &Form, cert: &CellCertificate) -> Result<bool> {
    if cert.n != f.n() || cert.degree != f.degree() || cert.form_sha256 != form_digest(f) {
        return Ok(false);
    }
    Ok(sign_classify(&expand(f, &cert.matrix)?) == cert.class)
}
