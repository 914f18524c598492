//! Successive difference substitution: search over the tree of
//! barycentric words `σ_1 ··· σ_m`, expanding `f` on each cell
//! `Con(G_{σ_1} ··· G_{σ_m})`.
//!
//! A node whose expansion has the required sign class is a certified leaf.
//! A node with a vertex or barycenter where `f < 0` ends the search with a
//! witness. Anything else is split into its `n!` children until the depth
//! budget runs out.
//!
//! Children are always visited in lexicographic order of their words and
//! parallel work is merged by an ordered reduction, so certificates do not
//! depend on the worker count.

pub(crate) mod certificate;

pub use certificate::{
    form_digest, is_complete_frontier, CELL_CERTIFICATE_HEADER, CERTIFICATE_HEADER, replay_cell_certificate, replay_certificate, CellCertificate, Certificate, Leaf,
    Verdict, Witness,
};

use std::fmt;
use std::str::FromStr;
use std::sync::atomic::{AtomicUsize, Ordering};

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::expansion::{expand, sign_classify, SignClass};
use crate::polyring::Form;
use crate::simplexgeo::{Permutation, PermutationWord, SimplexMatrix};

/// Environment variable capping the number of search workers.
pub const WORKERS_ENV: &str = "SDS_WORKERS";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Goal {
    /// Leaves must be `AllPositive`; proves `f > 0` on `Δ_n`.
    ProveStrictPositive,
    /// Leaves may be `AllPositive` or `AllNonnegative`; proves `f >= 0`.
    ProveNonnegative,
    /// Like `ProveNonnegative`, but reports the strongest verdict the leaves
    /// support.
    Decide,
}

impl Goal {
    pub fn tag(self) -> &'static str {
        match self {
            Goal::ProveStrictPositive => "ProveStrictPositive",
            Goal::ProveNonnegative => "ProveNonnegative",
            Goal::Decide => "Decide",
        }
    }

    pub fn accepts(self, class: SignClass) -> bool {
        match self {
            Goal::ProveStrictPositive => class == SignClass::AllPositive,
            Goal::ProveNonnegative | Goal::Decide => {
                matches!(class, SignClass::AllPositive | SignClass::AllNonnegative)
            }
        }
    }
}

impl fmt::Display for Goal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.tag())
    }
}

impl FromStr for Goal {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "ProveStrictPositive" | "positive" | "strict" => Ok(Goal::ProveStrictPositive),
            "ProveNonnegative" | "nonneg" | "nonnegative" => Ok(Goal::ProveNonnegative),
            "Decide" | "decide" => Ok(Goal::Decide),
            _ => Err(Error::InvalidParameter(format!("unknown goal {s:?}"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Traversal {
    BreadthFirst,
    DepthFirst,
}

impl FromStr for Traversal {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "bfs" | "breadth-first" | "BreadthFirst" => Ok(Traversal::BreadthFirst),
            "dfs" | "depth-first" | "DepthFirst" => Ok(Traversal::DepthFirst),
            _ => Err(Error::InvalidParameter(format!("unknown traversal {s:?}"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SdsConfig {
    /// Longest word explored.
    pub max_depth: usize,
    pub goal: Goal,
    pub traversal: Traversal,
    /// Largest breadth-first frontier held in memory; exceeding it ends the
    /// search as `Undecided` with the overflow flag set.
    pub node_cap: usize,
    /// Worker threads; 1 runs on the calling thread.
    pub workers: usize,
}

impl Default for SdsConfig {
    fn default() -> Self {
        SdsConfig {
            max_depth: 6,
            goal: Goal::ProveStrictPositive,
            traversal: Traversal::BreadthFirst,
            node_cap: 200_000,
            workers: 1,
        }
    }
}

impl SdsConfig {
    /// Worker count after applying the `SDS_WORKERS` cap, if set.
    pub fn effective_workers(&self) -> usize {
        let cap = std::env::var(WORKERS_ENV)
            .ok()
            .and_then(|v| v.trim().parse::<usize>().ok())
            .filter(|&c| c > 0);
        match cap {
            Some(c) => self.workers.clamp(1, c),
            None => self.workers.max(1),
        }
    }
}

/// A cell of the subdivision tree.
#[derive(Debug, Clone)]
pub struct Node {
    pub word: PermutationWord,
    /// `G_{σ_1} ··· G_{σ_m}`.
    pub cell: SimplexMatrix,
    /// `f(cell · X)`.
    pub expanded: Form,
}

/// Per-node check run on every cell that is not a certified leaf. A hit
/// stops the search.
pub trait NodeProbe: Sync {
    type Hit: Send;

    fn probe(&self, node: &Node) -> Result<Option<Self::Hit>>;
}

/// Looks for a vertex or barycenter of the cell where `f < 0`.
pub struct NegativePointProbe<'a> {
    pub form: &'a Form,
}

impl NodeProbe for NegativePointProbe<'_> {
    type Hit = Witness;

    fn probe(&self, node: &Node) -> Result<Option<Witness>> {
        let n = node.cell.n();
        let d = node.expanded.degree();
        // f(vertex j) is the coefficient of x_j^d in the expansion
        for j in 0..n {
            let mut e = vec![0; n];
            e[j] = d;
            if node.expanded.coefficient(&e) < crate::Rational::default() {
                let point = node.cell.vertex(j)?;
                let value = self.form.evaluate(&point)?;
                return Ok(Some(Witness {
                    word: node.word.clone(),
                    point,
                    value,
                }));
            }
        }
        // f(M·1) is the coefficient sum
        if node.expanded.coefficient_sum() < crate::Rational::default() {
            let point = node.cell.center();
            let value = self.form.evaluate(&point)?;
            return Ok(Some(Witness {
                word: node.word.clone(),
                point,
                value,
            }));
        }
        Ok(None)
    }
}

/// Raw result of a tree search, before it is packaged as a certificate.
#[derive(Debug)]
pub struct SearchOutcome<H> {
    /// Certified leaves, sorted by word.
    pub leaves: Vec<Leaf>,
    pub hit: Option<H>,
    /// Cells left uncertified at the depth budget.
    pub open_cells: usize,
    pub overflow: bool,
    /// Deepest level whose nodes were examined.
    pub depth_reached: usize,
}

enum Visit<H> {
    Leaf(SignClass),
    Hit(H),
    Split(Vec<Node>),
    Open,
}

struct Search<'a, P> {
    accept: &'a (dyn Fn(SignClass) -> bool + Sync),
    probe: &'a P,
    max_depth: usize,
    generators: Vec<(Permutation, SimplexMatrix)>,
}

impl<P: NodeProbe> Search<'_, P> {
    fn visit(&self, node: Node) -> Result<(PermutationWord, Visit<P::Hit>)> {
        let class = sign_classify(&node.expanded);
        if (self.accept)(class) {
            return Ok((node.word, Visit::Leaf(class)));
        }
        if let Some(hit) = self.probe.probe(&node)? {
            return Ok((node.word, Visit::Hit(hit)));
        }
        if node.word.len() >= self.max_depth {
            return Ok((node.word, Visit::Open));
        }
        let children = self
            .generators
            .iter()
            .map(|(sigma, g)| {
                Ok(Node {
                    word: node.word.child(sigma.clone()),
                    cell: node.cell.multiply(g)?,
                    expanded: expand(&node.expanded, g)?,
                })
            })
            .collect::<Result<Vec<_>>>()?;
        Ok((node.word, Visit::Split(children)))
    }

    fn breadth_first(&self, root: Node, workers: usize, node_cap: usize) -> Result<SearchOutcome<P::Hit>> {
        let mut out = SearchOutcome {
            leaves: Vec::new(),
            hit: None,
            open_cells: 0,
            overflow: false,
            depth_reached: 0,
        };
        let mut frontier = vec![root];
        let mut depth = 0;
        while !frontier.is_empty() {
            out.depth_reached = depth;
            let visits: Vec<Result<_>> = if workers > 1 {
                frontier.into_par_iter().map(|n| self.visit(n)).collect()
            } else {
                frontier.into_iter().map(|n| self.visit(n)).collect()
            };
            let mut next = Vec::new();
            for v in visits {
                let (word, visit) = v?;
                match visit {
                    Visit::Leaf(class) => out.leaves.push(Leaf { word, class }),
                    Visit::Hit(h) => {
                        out.hit = Some(h);
                        return Ok(out);
                    }
                    Visit::Split(children) => next.extend(children),
                    Visit::Open => out.open_cells += 1,
                }
            }
            if next.len() > node_cap {
                out.overflow = true;
                out.open_cells += next.len();
                break;
            }
            frontier = next;
            depth += 1;
        }
        out.leaves.sort_by(|a, b| a.word.cmp(&b.word));
        Ok(out)
    }

    /// Preorder walk of one subtree. Stops early once `cancel` names an
    /// earlier subtree that found a hit.
    fn depth_first_subtree(
        &self,
        root: Node,
        index: usize,
        cancel: &AtomicUsize,
    ) -> Result<SearchOutcome<P::Hit>> {
        let mut out = SearchOutcome {
            leaves: Vec::new(),
            hit: None,
            open_cells: 0,
            overflow: false,
            depth_reached: root.word.len(),
        };
        let mut stack = vec![root];
        while let Some(node) = stack.pop() {
            if cancel.load(Ordering::Relaxed) < index {
                break;
            }
            out.depth_reached = out.depth_reached.max(node.word.len());
            let (word, visit) = self.visit(node)?;
            match visit {
                Visit::Leaf(class) => out.leaves.push(Leaf { word, class }),
                Visit::Hit(h) => {
                    out.hit = Some(h);
                    cancel.fetch_min(index, Ordering::Relaxed);
                    break;
                }
                Visit::Split(children) => stack.extend(children.into_iter().rev()),
                Visit::Open => out.open_cells += 1,
            }
        }
        Ok(out)
    }

    fn depth_first(&self, root: Node, workers: usize) -> Result<SearchOutcome<P::Hit>> {
        let cancel = AtomicUsize::new(usize::MAX);
        let (word, visit) = self.visit(root)?;
        let children = match visit {
            Visit::Leaf(class) => {
                return Ok(SearchOutcome {
                    leaves: vec![Leaf { word, class }],
                    hit: None,
                    open_cells: 0,
                    overflow: false,
                    depth_reached: 0,
                })
            }
            Visit::Hit(h) => {
                return Ok(SearchOutcome {
                    leaves: Vec::new(),
                    hit: Some(h),
                    open_cells: 0,
                    overflow: false,
                    depth_reached: 0,
                })
            }
            Visit::Open => {
                return Ok(SearchOutcome {
                    leaves: Vec::new(),
                    hit: None,
                    open_cells: 1,
                    overflow: false,
                    depth_reached: 0,
                })
            }
            Visit::Split(children) => children,
        };

        let parts: Vec<Result<SearchOutcome<P::Hit>>> = if workers > 1 {
            children
                .into_par_iter()
                .enumerate()
                .map(|(i, c)| self.depth_first_subtree(c, i, &cancel))
                .collect()
        } else {
            children
                .into_iter()
                .enumerate()
                .map(|(i, c)| self.depth_first_subtree(c, i, &cancel))
                .collect()
        };

        let mut out = SearchOutcome {
            leaves: Vec::new(),
            hit: None,
            open_cells: 0,
            overflow: false,
            depth_reached: 0,
        };
        for part in parts {
            let part = part?;
            out.depth_reached = out.depth_reached.max(part.depth_reached);
            if part.hit.is_some() {
                out.hit = part.hit;
                out.leaves.clear();
                return Ok(out);
            }
            out.leaves.extend(part.leaves);
            out.open_cells += part.open_cells;
        }
        out.leaves.sort_by(|a, b| a.word.cmp(&b.word));
        Ok(out)
    }
}

/// Runs the subdivision search on `f` with a caller-supplied acceptance
/// rule and probe.
pub fn search_tree<P: NodeProbe>(
    f: &Form,
    config: &SdsConfig,
    accept: &(dyn Fn(SignClass) -> bool + Sync),
    probe: &P,
) -> Result<SearchOutcome<P::Hit>> {
    let n = f.n();
    let search = Search {
        accept,
        probe,
        max_depth: config.max_depth,
        generators: Permutation::all(n)
            .into_iter()
            .map(|p| {
                let g = SimplexMatrix::barycentric(&p);
                (p, g)
            })
            .collect(),
    };
    let root = Node {
        word: PermutationWord::empty(),
        cell: SimplexMatrix::identity(n),
        expanded: f.clone(),
    };
    let workers = config.effective_workers();
    let run = || match config.traversal {
        Traversal::BreadthFirst => search.breadth_first(root, workers, config.node_cap),
        Traversal::DepthFirst => search.depth_first(root, workers),
    };
    if workers > 1 {
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(workers)
            .build()
            .map_err(|e| Error::InvalidParameter(format!("cannot start workers: {e}")))?;
        pool.install(run)
    } else {
        run()
    }
}

/// Searches for a certificate that `f` is positive (or nonnegative) on
/// `Δ_n`, or for a point where it is negative.
pub fn sds_search(f: &Form, config: &SdsConfig) -> Result<Certificate> {
    if f.is_zero() {
        return Err(Error::ZeroForm);
    }
    let goal = config.goal;
    let probe = NegativePointProbe { form: f };
    let outcome = search_tree(f, config, &|c| goal.accepts(c), &probe)?;

    let (verdict, depth_used, leaves, witness) = match outcome.hit {
        Some(w) => (Verdict::NegativeWitness, w.word.len(), Vec::new(), Some(w)),
        None if outcome.open_cells == 0 && !outcome.overflow => {
            let deepest = outcome.leaves.iter().map(|l| l.word.len()).max().unwrap_or(0);
            let all_positive = outcome.leaves.iter().all(|l| l.class == SignClass::AllPositive);
            let verdict = match goal {
                Goal::ProveStrictPositive => Verdict::Positive,
                Goal::ProveNonnegative => Verdict::Nonnegative,
                Goal::Decide if all_positive => Verdict::Positive,
                Goal::Decide => Verdict::Nonnegative,
            };
            (verdict, deepest, outcome.leaves, None)
        }
        None => (Verdict::Undecided, outcome.depth_reached, outcome.leaves, None),
    };

    Ok(Certificate {
        verdict,
        goal,
        n: f.n(),
        degree: f.degree(),
        form_sha256: form_digest(f),
        max_depth: config.max_depth,
        depth_used,
        open_cells: outcome.open_cells,
        overflow: outcome.overflow,
        leaves,
        witness,
    })
}
