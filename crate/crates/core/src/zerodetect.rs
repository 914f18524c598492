//! Real zeros of integer homogeneous systems on `Δ_n`.
//!
//! The system `f_1 = ... = f_k = 0` is folded into the single form
//! `F = Σ f_i^2 (x_1 + ... + x_n)^{2(d - d_i)}`, which is `>= 0` on `Δ_n`
//! and vanishes exactly on the common zeros. Below a computable diameter,
//! a cell whose expansion of `F` is not all-positive must contain a zero.
//! That diameter is astronomically small, so the search runs under a
//! budget: an all-positive covering frontier proves there is no zero at
//! any depth, an exact rational zero found at a cell vertex or barycenter
//! proves there is one, and anything else is reported as undecided along
//! with the theoretical depth.

use std::fmt::Write as _;

use num_traits::Zero;

use crate::boundscalc::{
    htilde, log2_rational, min_value_lower_bound, normalized_height, raw_height, required_depth,
    BoundKind, BoundReport, Log2Interval, Threshold, LOG2_BITS,
};
use crate::error::{Error, Result};
use crate::expansion::SignClass;
use crate::polyring::{serialize_system, Form, RationalPoint};
use crate::rational::{factorial, from_biguint, Rational};
use crate::sdsengine::certificate::{
    hex_digest, is_complete_frontier, leaves_reproduce, witness_in_cell, write_leaves,
    write_witness, KeyValues,
};
use crate::sdsengine::{
    form_digest, search_tree, Leaf, Node, NodeProbe, SdsConfig, Traversal, Witness,
};
use crate::simplexgeo::PermutationWord;

pub const ZERO_REPORT_HEADER: &str = "# sds zero report";

/// Default depth budget; the theoretical depth is reported, never run.
pub const DEFAULT_BUDGET: usize = 6;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SystemInput {
    forms: Vec<Form>,
}

impl SystemInput {
    /// Requires at least one form, a shared variable count and integer
    /// coefficients.
    pub fn new(forms: Vec<Form>) -> Result<Self> {
        let Some(first) = forms.first() else {
            return Err(Error::InvalidParameter("empty system".into()));
        };
        if let Some(f) = forms.iter().find(|f| f.n() != first.n()) {
            return Err(Error::DimensionMismatch {
                expected: first.n(),
                found: f.n(),
            });
        }
        if let Some(i) = forms.iter().position(|f| !f.has_integer_coefficients()) {
            return Err(Error::InvalidParameter(format!(
                "form {} has non-integer coefficients",
                i + 1
            )));
        }
        Ok(SystemInput { forms })
    }

    pub fn forms(&self) -> &[Form] {
        &self.forms
    }

    pub fn n(&self) -> usize {
        self.forms[0].n()
    }

    /// `d = max d_i`.
    pub fn max_degree(&self) -> u32 {
        self.forms.iter().map(Form::degree).max().expect("nonempty")
    }

    pub fn digest(&self) -> String {
        hex_digest(serialize_system(&self.forms).as_bytes())
    }

    pub fn is_common_zero(&self, p: &RationalPoint) -> Result<bool> {
        for f in &self.forms {
            if !f.evaluate(p)?.is_zero() {
                return Ok(false);
            }
        }
        Ok(true)
    }
}

/// `F = Σ f_i^2 (Σ x_j)^{2(d - d_i)}`, homogeneous of degree `2d`.
pub fn construct_f(sys: &SystemInput) -> Form {
    let n = sys.n();
    let d = sys.max_degree();
    let sum = Form::coordinate_sum(n);
    sys.forms
        .iter()
        .map(|f| {
            let pad = sum.power(2 * (d - f.degree()));
            f.multiply(f)
                .and_then(|sq| sq.multiply(&pad))
                .expect("shared dimension")
        })
        .fold(Form::zero(n, 2 * d), |acc, t| acc.add(&t).expect("same degree"))
}

/// Heights of `F` and the resulting diameter threshold.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ZeroBounds {
    /// Raw height of `F`.
    pub h: Rational,
    pub h_tilde: Rational,
    /// Normalized height of `F`.
    pub l_f: Rational,
    /// `2d·(2d)!·C(n+2d-1, 2d)·L_F`.
    pub prefix: Rational,
    pub min_value: BoundReport,
    pub threshold: BoundReport,
    pub theoretical_depth: u64,
}

/// Diameter threshold below which a not-all-positive expansion of `F`
/// certifies a zero, as a log2 enclosure. Undefined when `F` is zero or
/// constant.
pub fn theorem2_threshold(sys: &SystemInput) -> Result<ZeroBounds> {
    let big_f = construct_f(sys);
    let n = sys.n();
    let two_d = big_f.degree();
    if two_d == 0 {
        return Err(Error::InvalidParameter(
            "system of constants has no diameter threshold".into(),
        ));
    }
    let h = raw_height(&big_f)?;
    let l_f = normalized_height(&big_f)?;
    let h_tilde = htilde(&h, n);
    let prefix = Rational::from_integer(two_d.into())
        * from_biguint(factorial(two_d as u64))
        * from_biguint(crate::expansion::monomial_slots(n, two_d))
        * &l_f;
    let min_value = min_value_lower_bound(n, two_d, &h_tilde)?;
    let min_log2 = min_value.value_log2.clone().expect("log2 authoritative");
    let value: Log2Interval = &min_log2 - &log2_rational(&prefix, LOG2_BITS + 8);

    let threshold = BoundReport {
        kind: BoundKind::ZeroDetectionDiameter,
        value_exact: None,
        value_log2: Some(value.clone()),
        authority: crate::boundscalc::Authority::Log2,
        inputs: vec![
            ("n".into(), n.to_string()),
            ("degree".into(), two_d.to_string()),
            ("H".into(), h.to_string()),
            ("H_tilde".into(), h_tilde.to_string()),
            ("L_F".into(), l_f.to_string()),
            ("prefix".into(), prefix.to_string()),
        ],
    };
    let theoretical_depth = required_depth(n, &Threshold::Log2(value))?;
    Ok(ZeroBounds {
        h,
        h_tilde,
        l_f,
        prefix,
        min_value,
        threshold,
        theoretical_depth,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ZeroVerdict {
    ZeroFound,
    NoZero,
    Undecided,
}

impl ZeroVerdict {
    pub fn tag(self) -> &'static str {
        match self {
            ZeroVerdict::ZeroFound => "ZeroFound",
            ZeroVerdict::NoZero => "NoZero",
            ZeroVerdict::Undecided => "Undecided",
        }
    }
}

impl std::str::FromStr for ZeroVerdict {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        [ZeroVerdict::ZeroFound, ZeroVerdict::NoZero, ZeroVerdict::Undecided]
            .into_iter()
            .find(|v| v.tag() == s)
            .ok_or_else(|| Error::MalformedCertificate(format!("unknown verdict {s:?}")))
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ZeroConfig {
    pub budget_depth: usize,
    pub traversal: Traversal,
    pub node_cap: usize,
    pub workers: usize,
}

impl Default for ZeroConfig {
    fn default() -> Self {
        let base = SdsConfig::default();
        ZeroConfig {
            budget_depth: DEFAULT_BUDGET,
            traversal: base.traversal,
            node_cap: base.node_cap,
            workers: base.workers,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ZeroReport {
    pub verdict: ZeroVerdict,
    pub n: usize,
    /// Degree of `F`.
    pub degree: u32,
    pub system_sha256: String,
    pub form_sha256: String,
    pub budget_depth: usize,
    /// Depth limit actually searched: `min(budget, theoretical depth)`.
    pub searched_depth: usize,
    pub depth_used: usize,
    pub open_cells: usize,
    pub overflow: bool,
    /// All-positive cells of `F`, sorted by word.
    pub leaves: Vec<Leaf>,
    /// A common zero; `value` is always 0.
    pub witness: Option<Witness>,
    pub bounds: Option<ZeroBounds>,
}

impl ZeroReport {
    pub fn theoretical_depth(&self) -> Option<u64> {
        self.bounds.as_ref().map(|b| b.theoretical_depth)
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "{ZERO_REPORT_HEADER}");
        let _ = writeln!(out, "verdict={}", self.verdict.tag());
        let _ = writeln!(out, "n={}", self.n);
        let _ = writeln!(out, "degree={}", self.degree);
        let _ = writeln!(out, "system_sha256={}", self.system_sha256);
        let _ = writeln!(out, "form_sha256={}", self.form_sha256);
        let _ = writeln!(out, "budget_depth={}", self.budget_depth);
        let _ = writeln!(out, "searched_depth={}", self.searched_depth);
        let _ = writeln!(out, "depth_used={}", self.depth_used);
        let _ = writeln!(out, "open_cells={}", self.open_cells);
        let _ = writeln!(out, "overflow={}", self.overflow);
        write_leaves(&mut out, &self.leaves);
        if let Some(w) = &self.witness {
            write_witness(&mut out, w);
        }
        match &self.bounds {
            Some(b) => {
                let _ = writeln!(out, "H={}", b.h);
                let _ = writeln!(out, "H_tilde={}", b.h_tilde);
                let _ = writeln!(out, "L_F={}", b.l_f);
                let log2 = b.threshold.value_log2.as_ref().expect("log2 authoritative");
                let _ = writeln!(out, "threshold_log2={}", log2.display_lo(6));
                let _ = writeln!(out, "theoretical_depth={}", b.theoretical_depth);
            }
            None => {
                let _ = writeln!(out, "bounds=none");
            }
        }
        out
    }

    pub fn parse(text: &str) -> Result<Self> {
        let mut kv = KeyValues::new(text, ZERO_REPORT_HEADER)?;
        let verdict = kv.take("verdict")?.parse()?;
        let n = kv.take_parsed("n")?;
        let degree = kv.take_parsed("degree")?;
        let system_sha256 = kv.take("system_sha256")?.to_string();
        let form_sha256 = kv.take("form_sha256")?.to_string();
        let budget_depth = kv.take_parsed("budget_depth")?;
        let searched_depth = kv.take_parsed("searched_depth")?;
        let depth_used = kv.take_parsed("depth_used")?;
        let open_cells = kv.take_parsed("open_cells")?;
        let overflow = kv.take_parsed("overflow")?;
        let leaves = kv.take_leaves()?;
        let witness = kv.take_witness()?;
        // bounds are re-derived from the system on replay
        let bounds_text: Vec<String> = kv.rest().into_iter().map(str::to_string).collect();
        let report = ZeroReport {
            verdict,
            n,
            degree,
            system_sha256,
            form_sha256,
            budget_depth,
            searched_depth,
            depth_used,
            open_cells,
            overflow,
            leaves,
            witness,
            bounds: None,
        };
        check_bounds_block(&bounds_text)?;
        Ok(report)
    }
}

fn check_bounds_block(lines: &[String]) -> Result<()> {
    const KEYS: [&str; 5] = ["H", "H_tilde", "L_F", "threshold_log2", "theoretical_depth"];
    if lines.len() == 1 && lines[0] == "bounds=none" {
        return Ok(());
    }
    let keys: Vec<&str> = lines
        .iter()
        .map(|l| l.split_once('=').map(|(k, _)| k).unwrap_or(""))
        .collect();
    if keys != KEYS {
        return Err(Error::MalformedCertificate(format!(
            "bounds block must list {KEYS:?}"
        )));
    }
    Ok(())
}

/// Exact common zeros at cell vertices and barycenters.
struct ZeroProbe<'a> {
    sys: &'a SystemInput,
}

impl NodeProbe for ZeroProbe<'_> {
    type Hit = Witness;

    fn probe(&self, node: &Node) -> Result<Option<Witness>> {
        let n = node.cell.n();
        let deg = node.expanded.degree();
        // F(vertex j) is the x_j^{2d} coefficient; F >= 0 vanishes only at
        // common zeros
        let mut candidates = Vec::with_capacity(n + 1);
        for j in 0..n {
            let mut e = vec![0; n];
            e[j] = deg;
            if node.expanded.coefficient(&e).is_zero() {
                candidates.push(node.cell.vertex(j)?);
            }
        }
        if node.expanded.coefficient_sum().is_zero() {
            candidates.push(node.cell.center());
        }
        for point in candidates {
            if self.sys.is_common_zero(&point)? {
                return Ok(Some(Witness {
                    word: node.word.clone(),
                    point,
                    value: Rational::zero(),
                }));
            }
        }
        Ok(None)
    }
}

/// [`detect_zero_with`] using the default traversal and a single worker.
pub fn detect_zero(sys: &SystemInput, budget_depth: usize) -> Result<ZeroReport> {
    detect_zero_with(
        sys,
        &ZeroConfig {
            budget_depth,
            ..ZeroConfig::default()
        },
    )
}

pub fn detect_zero_with(sys: &SystemInput, config: &ZeroConfig) -> Result<ZeroReport> {
    let big_f = construct_f(sys);
    let n = sys.n();
    let bounds = if big_f.is_zero() || big_f.degree() == 0 {
        None
    } else {
        Some(theorem2_threshold(sys)?)
    };
    let searched_depth = match &bounds {
        Some(b) => (config.budget_depth as u64).min(b.theoretical_depth) as usize,
        None => config.budget_depth,
    };

    let mut report = ZeroReport {
        verdict: ZeroVerdict::Undecided,
        n,
        degree: big_f.degree(),
        system_sha256: sys.digest(),
        form_sha256: form_digest(&big_f),
        budget_depth: config.budget_depth,
        searched_depth,
        depth_used: 0,
        open_cells: 0,
        overflow: false,
        leaves: Vec::new(),
        witness: None,
        bounds,
    };

    if big_f.is_zero() {
        // every point of the simplex is a common zero
        report.verdict = ZeroVerdict::ZeroFound;
        report.witness = Some(Witness {
            word: PermutationWord::empty(),
            point: RationalPoint::unit(n, 0),
            value: Rational::zero(),
        });
        return Ok(report);
    }

    let search_config = SdsConfig {
        max_depth: searched_depth,
        goal: crate::sdsengine::Goal::ProveStrictPositive,
        traversal: config.traversal,
        node_cap: config.node_cap,
        workers: config.workers,
    };
    let probe = ZeroProbe { sys };
    let outcome = search_tree(
        &big_f,
        &search_config,
        &|c| c == SignClass::AllPositive,
        &probe,
    )?;

    report.open_cells = outcome.open_cells;
    report.overflow = outcome.overflow;
    match outcome.hit {
        Some(w) => {
            report.verdict = ZeroVerdict::ZeroFound;
            report.depth_used = w.word.len();
            report.witness = Some(w);
        }
        None => {
            report.leaves = outcome.leaves;
            if outcome.open_cells == 0 && !outcome.overflow {
                report.verdict = ZeroVerdict::NoZero;
                report.depth_used = report.leaves.iter().map(|l| l.word.len()).max().unwrap_or(0);
            } else {
                report.depth_used = outcome.depth_reached;
            }
        }
    }
    Ok(report)
}

/// Re-derives every claim of a zero report from the system alone.
pub fn replay_zero_report(sys: &SystemInput, report: &ZeroReport) -> Result<bool> {
    let big_f = construct_f(sys);
    if report.n != sys.n()
        || report.degree != big_f.degree()
        || report.system_sha256 != sys.digest()
        || report.form_sha256 != form_digest(&big_f)
    {
        return Ok(false);
    }
    for l in &report.leaves {
        if l.word.letters().iter().any(|p| p.n() != report.n) {
            return Err(Error::MalformedCertificate(format!("leaf word {} has wrong dimension", l.word)));
        }
    }
    if let Some(b) = &report.bounds {
        match theorem2_threshold(sys) {
            Ok(fresh) if &fresh == b => {}
            _ => return Ok(false),
        }
    }
    match report.verdict {
        ZeroVerdict::ZeroFound => {
            let Some(w) = &report.witness else {
                return Err(Error::MalformedCertificate("ZeroFound without a witness".into()));
            };
            Ok(w.value.is_zero() && witness_in_cell(sys.n(), w)? && sys.is_common_zero(&w.point)?)
        }
        ZeroVerdict::NoZero => {
            if report.witness.is_some() || report.open_cells != 0 || report.overflow {
                return Err(Error::MalformedCertificate(
                    "NoZero report with open cells or a witness".into(),
                ));
            }
            let words: Vec<PermutationWord> = report.leaves.iter().map(|l| l.word.clone()).collect();
            Ok(report.leaves.iter().all(|l| l.class == SignClass::AllPositive)
                && is_complete_frontier(&words, sys.n())
                && leaves_reproduce(&big_f, &report.leaves)?)
        }
        ZeroVerdict::Undecided => leaves_reproduce(&big_f, &report.leaves),
    }
}
