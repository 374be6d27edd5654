//! Quiver-with-relations presentations and the path basis of the quotient
//! algebra.
//!
//! An algebra file declares a quiver and a list of relations (rational
//! combinations of parallel paths of length >= 2). Construction enumerates
//! paths breadth-first while completing the relation ideal by linear algebra
//! on parallel-path spans; it terminates with a finite path basis or reports
//! the presentation as inconclusive when the configured caps are exhausted.

use crate::linalg::{rat_from_str, Rat};
use num_traits::{One, Zero};
use std::cmp::Ordering;
use std::collections::{BTreeMap, BinaryHeap, HashMap};
use std::fmt;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum AlgError {
    #[error("syntax error at line {line}, column {col}: {msg}")]
    Syntax { line: usize, col: usize, msg: String },
    #[error("non-admissible relation at line {line}: {msg}")]
    NonAdmissible { line: usize, msg: String },
    #[error("invalid presentation: {0}")]
    Validation(String),
    #[error("inconclusive: {0}")]
    Inconclusive(String),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Arrow {
    pub label: String,
    /// Index into `Quiver::vertices`.
    pub source: usize,
    pub target: usize,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Quiver {
    /// Declared vertex ids, sorted ascending.
    pub vertices: Vec<u32>,
    /// Arrows sorted by label, so arrow-index order is label order.
    pub arrows: Vec<Arrow>,
}

impl Quiver {
    pub fn n(&self) -> usize {
        self.vertices.len()
    }

    pub fn vertex_index(&self, id: u32) -> Option<usize> {
        self.vertices.iter().position(|&v| v == id)
    }
}

/// A path as a sequence of arrow indices, composed left to right
/// (`[a, b]` means "first a, then b"). Empty = a trivial path; trivial
/// paths additionally carry their vertex.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Path {
    pub arrows: Vec<usize>,
    /// Source vertex index (needed to distinguish trivial paths).
    pub source: usize,
}

impl Path {
    pub fn trivial(v: usize) -> Self {
        Path { arrows: Vec::new(), source: v }
    }

    pub fn len(&self) -> usize {
        self.arrows.len()
    }

    pub fn is_trivial(&self) -> bool {
        self.arrows.is_empty()
    }

    pub fn target(&self, q: &Quiver) -> usize {
        self.arrows.last().map_or(self.source, |&a| q.arrows[a].target)
    }

    pub fn append(&self, a: usize, q: &Quiver) -> Path {
        debug_assert_eq!(self.target(q), q.arrows[a].source);
        let mut arrows = self.arrows.clone();
        arrows.push(a);
        Path { arrows, source: self.source }
    }

    pub fn display(&self, q: &Quiver) -> String {
        if self.is_trivial() {
            format!("e{}", q.vertices[self.source])
        } else {
            self.arrows.iter().map(|&a| q.arrows[a].label.as_str()).collect::<Vec<_>>().join("*")
        }
    }
}

impl Ord for Path {
    fn cmp(&self, other: &Self) -> Ordering {
        // length first, then lexicographic by arrow index (= label order),
        // then source to separate trivial paths
        self.arrows
            .len()
            .cmp(&other.arrows.len())
            .then_with(|| self.arrows.cmp(&other.arrows))
            .then_with(|| self.source.cmp(&other.source))
    }
}

impl PartialOrd for Path {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

pub type LinComb = BTreeMap<Path, Rat>;

#[derive(Debug, Clone)]
pub struct RelationTerm {
    pub coef: Rat,
    pub path: Path,
}

#[derive(Debug, Clone)]
pub struct Relation {
    pub terms: Vec<RelationTerm>,
    pub line: usize,
}

/// Caps on path enumeration; exceeding any of them reports the presentation
/// as inconclusive rather than looping forever.
#[derive(Debug, Clone)]
pub struct PathLimits {
    pub max_path_len: usize,
    pub max_paths: usize,
}

impl Default for PathLimits {
    fn default() -> Self {
        PathLimits { max_path_len: 64, max_paths: 200_000 }
    }
}

/// Sparse coordinates in the path basis.
pub type Coords = Vec<(usize, Rat)>;

#[derive(Debug)]
pub struct Algebra {
    pub name: String,
    pub quiver: Quiver,
    pub relations: Vec<Relation>,
    /// Path basis, sorted by (length, labels); the n trivial paths come first.
    pub basis: Vec<Path>,
    basis_index: HashMap<Path, usize>,
    /// basis indices grouped as [source][target], ascending.
    pub basis_by_pair: Vec<Vec<Vec<usize>>>,
    pub total_dim: usize,
    /// right_mult[b][a] = coordinates of basis[b] * arrow a (None when not
    /// composable).
    right_mult: Vec<Vec<Option<Coords>>>,
}

impl Algebra {
    pub fn n(&self) -> usize {
        self.quiver.n()
    }

    pub fn basis_index_of(&self, p: &Path) -> Option<usize> {
        self.basis_index.get(p).copied()
    }

    pub fn trivial_index(&self, v: usize) -> usize {
        self.basis_index[&Path::trivial(v)]
    }

    pub fn basis_source(&self, b: usize) -> usize {
        self.basis[b].source
    }

    pub fn basis_target(&self, b: usize) -> usize {
        self.basis[b].target(&self.quiver)
    }

    /// Coordinates of basis[b] * arrow a; None when not composable.
    pub fn mult_arrow(&self, b: usize, a: usize) -> Option<&Coords> {
        self.right_mult[b][a].as_ref()
    }

    /// Product of two basis elements (zero vector when not composable).
    pub fn mult_basis(&self, b1: usize, b2: usize) -> Coords {
        if self.basis_target(b1) != self.basis_source(b2) {
            return Vec::new();
        }
        let mut acc: Coords = vec![(b1, Rat::one())];
        for &a in &self.basis[b2].arrows {
            let mut next: BTreeMap<usize, Rat> = BTreeMap::new();
            for (b, c) in &acc {
                if let Some(prod) = self.mult_arrow(*b, a) {
                    for (bi, ci) in prod {
                        let e = next.entry(*bi).or_insert_with(Rat::zero);
                        *e += c * ci;
                    }
                }
            }
            acc = next.into_iter().filter(|(_, c)| !c.is_zero()).collect();
            if acc.is_empty() {
                return acc;
            }
        }
        acc
    }

    /// Coordinates of a general composable arrow sequence starting at `src`.
    pub fn reduce_arrow_seq(&self, src: usize, arrows: &[usize]) -> Coords {
        let mut acc: Coords = vec![(self.trivial_index(src), Rat::one())];
        for &a in arrows {
            let mut next: BTreeMap<usize, Rat> = BTreeMap::new();
            for (b, c) in &acc {
                if let Some(prod) = self.mult_arrow(*b, a) {
                    for (bi, ci) in prod {
                        let e = next.entry(*bi).or_insert_with(Rat::zero);
                        *e += c * ci;
                    }
                }
            }
            acc = next.into_iter().filter(|(_, c)| !c.is_zero()).collect();
            if acc.is_empty() {
                return acc;
            }
        }
        acc
    }

    /// The presentation with all arrows reversed (and relations mirrored).
    pub fn opposite(&self) -> Result<Algebra, AlgError> {
        let mut arrows: Vec<Arrow> = self
            .quiver
            .arrows
            .iter()
            .map(|a| Arrow { label: a.label.clone(), source: a.target, target: a.source })
            .collect();
        let mut perm: Vec<usize> = (0..arrows.len()).collect();
        perm.sort_by(|&i, &j| arrows[i].label.cmp(&arrows[j].label));
        // arrows in this crate are already label sorted, so perm is identity,
        // but keep the remap for safety
        let inv: HashMap<usize, usize> = perm.iter().enumerate().map(|(k, &i)| (i, k)).collect();
        arrows = perm.iter().map(|&i| arrows[i].clone()).collect();
        let quiver = Quiver { vertices: self.quiver.vertices.clone(), arrows };
        let relations = self
            .relations
            .iter()
            .map(|r| Relation {
                line: r.line,
                terms: r
                    .terms
                    .iter()
                    .map(|t| {
                        let mut rev: Vec<usize> =
                            t.path.arrows.iter().rev().map(|a| inv[a]).collect();
                        let source = self.path_target_idx(&t.path);
                        RelationTerm {
                            coef: t.coef.clone(),
                            path: Path { arrows: std::mem::take(&mut rev), source },
                        }
                    })
                    .collect(),
            })
            .collect();
        build_algebra(format!("{}^op", self.name), quiver, relations, &PathLimits::default())
    }

    fn path_target_idx(&self, p: &Path) -> usize {
        p.target(&self.quiver)
    }
}

// ---------------------------------------------------------------------------
// parsing
// ---------------------------------------------------------------------------

pub fn parse_algebra(text: &str) -> Result<Algebra, AlgError> {
    parse_algebra_with(text, &PathLimits::default())
}

pub fn parse_algebra_with(text: &str, limits: &PathLimits) -> Result<Algebra, AlgError> {
    let mut name = String::from("unnamed");
    let mut vertices: Vec<u32> = Vec::new();
    let mut raw_arrows: Vec<(String, u32, u32, usize)> = Vec::new();
    let mut raw_relations: Vec<(Vec<(Rat, Vec<String>)>, usize)> = Vec::new();

    for (lineno, raw) in text.lines().enumerate() {
        let line = lineno + 1;
        let content = raw.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        let mut words = content.split_whitespace();
        let head = words.next().unwrap();
        match head {
            "algebra" => {
                name = words.next().map(String::from).ok_or(AlgError::Syntax {
                    line,
                    col: head.len() + 1,
                    msg: "expected algebra name".into(),
                })?;
            }
            "vertices" => {
                for w in words {
                    let id: u32 = w.parse().map_err(|_| AlgError::Syntax {
                        line,
                        col: raw.find(w).unwrap_or(0) + 1,
                        msg: format!("invalid vertex id `{w}`"),
                    })?;
                    if id == 0 {
                        return Err(AlgError::Syntax {
                            line,
                            col: raw.find(w).unwrap_or(0) + 1,
                            msg: "vertex ids must be positive".into(),
                        });
                    }
                    vertices.push(id);
                }
            }
            "arrow" => {
                // arrow <label> : <src> -> <tgt>
                let rest: Vec<&str> = words.collect();
                let joined = rest.join(" ");
                let (label, ends) = joined.split_once(':').ok_or(AlgError::Syntax {
                    line,
                    col: 1,
                    msg: "expected `arrow <label> : <src> -> <tgt>`".into(),
                })?;
                let (src, tgt) = ends.split_once("->").ok_or(AlgError::Syntax {
                    line,
                    col: 1,
                    msg: "expected `-> <tgt>` in arrow declaration".into(),
                })?;
                let label = label.trim().to_string();
                let src: u32 = src.trim().parse().map_err(|_| AlgError::Syntax {
                    line,
                    col: 1,
                    msg: format!("invalid arrow source `{}`", src.trim()),
                })?;
                let tgt: u32 = tgt.trim().parse().map_err(|_| AlgError::Syntax {
                    line,
                    col: 1,
                    msg: format!("invalid arrow target `{}`", tgt.trim()),
                })?;
                if label.is_empty() || label.contains('*') {
                    return Err(AlgError::Syntax {
                        line,
                        col: 1,
                        msg: "arrow label must be nonempty and must not contain `*`".into(),
                    });
                }
                raw_arrows.push((label, src, tgt, line));
            }
            "relation" => {
                // relation <coef> <path> (+ <coef> <path>)*
                let rest: Vec<&str> = words.collect();
                let mut terms = Vec::new();
                let mut it = rest.iter().peekable();
                loop {
                    let Some(coef_tok) = it.next() else {
                        return Err(AlgError::Syntax {
                            line,
                            col: 1,
                            msg: "expected coefficient".into(),
                        });
                    };
                    let coef = rat_from_str(coef_tok).ok_or(AlgError::Syntax {
                        line,
                        col: raw.find(coef_tok).unwrap_or(0) + 1,
                        msg: format!("invalid rational `{coef_tok}`"),
                    })?;
                    let Some(path_tok) = it.next() else {
                        return Err(AlgError::Syntax {
                            line,
                            col: 1,
                            msg: "expected path after coefficient".into(),
                        });
                    };
                    let labels: Vec<String> =
                        path_tok.split('*').map(|s| s.trim().to_string()).collect();
                    terms.push((coef, labels));
                    match it.next() {
                        None => break,
                        Some(&"+") => continue,
                        Some(tok) => {
                            return Err(AlgError::Syntax {
                                line,
                                col: raw.find(tok).unwrap_or(0) + 1,
                                msg: format!("expected `+`, found `{tok}`"),
                            })
                        }
                    }
                }
                raw_relations.push((terms, line));
            }
            other => {
                return Err(AlgError::Syntax {
                    line,
                    col: 1,
                    msg: format!("unknown directive `{other}`"),
                });
            }
        }
    }

    if vertices.is_empty() {
        return Err(AlgError::Validation("no vertices declared".into()));
    }
    let mut sorted = vertices.clone();
    sorted.sort_unstable();
    sorted.dedup();
    if sorted.len() != vertices.len() {
        return Err(AlgError::Validation("duplicate vertex ids".into()));
    }

    // arrows: validate and sort by label
    let mut arrows = Vec::new();
    for (label, src, tgt, line) in &raw_arrows {
        if arrows.iter().any(|a: &Arrow| &a.label == label) {
            return Err(AlgError::Syntax {
                line: *line,
                col: 1,
                msg: format!("duplicate arrow label `{label}`"),
            });
        }
        let source = sorted.iter().position(|v| v == src).ok_or_else(|| AlgError::Syntax {
            line: *line,
            col: 1,
            msg: format!("arrow `{label}` uses undeclared vertex {src}"),
        })?;
        let target = sorted.iter().position(|v| v == tgt).ok_or_else(|| AlgError::Syntax {
            line: *line,
            col: 1,
            msg: format!("arrow `{label}` uses undeclared vertex {tgt}"),
        })?;
        arrows.push(Arrow { label: label.clone(), source, target });
    }
    arrows.sort_by(|a, b| a.label.cmp(&b.label));
    let quiver = Quiver { vertices: sorted, arrows };

    // relations: resolve label sequences into composable paths
    let mut relations = Vec::new();
    for (terms, line) in raw_relations {
        let mut res = Vec::new();
        for (coef, labels) in terms {
            if coef.is_zero() {
                return Err(AlgError::NonAdmissible {
                    line,
                    msg: "zero coefficient in relation".into(),
                });
            }
            if labels.len() < 2 {
                return Err(AlgError::NonAdmissible {
                    line,
                    msg: format!(
                        "path `{}` has length {} (< 2)",
                        labels.join("*"),
                        labels.len()
                    ),
                });
            }
            let mut idxs = Vec::new();
            for l in &labels {
                let i = quiver.arrows.iter().position(|a| &a.label == l).ok_or_else(|| {
                    AlgError::Syntax { line, col: 1, msg: format!("unknown arrow `{l}`") }
                })?;
                idxs.push(i);
            }
            for w in idxs.windows(2) {
                if quiver.arrows[w[0]].target != quiver.arrows[w[1]].source {
                    return Err(AlgError::Syntax {
                        line,
                        col: 1,
                        msg: format!(
                            "path not composable: target({}) != source({})",
                            quiver.arrows[w[0]].label, quiver.arrows[w[1]].label
                        ),
                    });
                }
            }
            let source = quiver.arrows[idxs[0]].source;
            res.push(RelationTerm { coef, path: Path { arrows: idxs, source } });
        }
        // all terms parallel
        let s0 = res[0].path.source;
        let t0 = res[0].path.target(&quiver);
        for t in &res[1..] {
            if t.path.source != s0 || t.path.target(&quiver) != t0 {
                return Err(AlgError::NonAdmissible {
                    line,
                    msg: "relation terms are not parallel paths".into(),
                });
            }
        }
        relations.push(Relation { terms: res, line });
    }

    build_algebra(name, quiver, relations, limits)
}

// ---------------------------------------------------------------------------
// ideal completion and basis construction
// ---------------------------------------------------------------------------

struct QueueItem {
    degree: usize,
    seq: usize,
    elem: LinComb,
}

impl PartialEq for QueueItem {
    fn eq(&self, other: &Self) -> bool {
        self.degree == other.degree && self.seq == other.seq
    }
}
impl Eq for QueueItem {}
impl Ord for QueueItem {
    fn cmp(&self, other: &Self) -> Ordering {
        // min-heap on (degree, seq)
        other.degree.cmp(&self.degree).then_with(|| other.seq.cmp(&self.seq))
    }
}
impl PartialOrd for QueueItem {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

fn lincomb_degree(lc: &LinComb) -> usize {
    lc.keys().next_back().map_or(0, |p| p.len())
}

/// Substitute stored rules until no support path is a pivot.
fn reduce_lincomb(lc: &LinComb, rules: &HashMap<Path, LinComb>) -> LinComb {
    let mut cur = lc.clone();
    loop {
        let Some((p, c)) = cur.iter().rev().find(|(p, _)| rules.contains_key(*p)).map(|(p, c)| (p.clone(), c.clone())) else {
            return cur;
        };
        cur.remove(&p);
        for (q, d) in &rules[&p] {
            let e = cur.entry(q.clone()).or_insert_with(Rat::zero);
            *e += &c * d;
        }
        cur.retain(|_, v| !v.is_zero());
    }
}

fn build_algebra(
    name: String,
    quiver: Quiver,
    relations: Vec<Relation>,
    limits: &PathLimits,
) -> Result<Algebra, AlgError> {
    // pivot path -> rhs (meaning pivot = rhs in the quotient)
    let mut rules: HashMap<Path, LinComb> = HashMap::new();
    let mut queue: BinaryHeap<QueueItem> = BinaryHeap::new();
    let mut seq = 0usize;

    for r in &relations {
        let mut lc = LinComb::new();
        for t in &r.terms {
            let e = lc.entry(t.path.clone()).or_insert_with(Rat::zero);
            *e += &t.coef;
        }
        lc.retain(|_, v| !v.is_zero());
        if !lc.is_empty() {
            let degree = lincomb_degree(&lc);
            queue.push(QueueItem { degree, seq, elem: lc });
            seq += 1;
        }
    }

    // paths_of_len[d] = all quiver paths of length d
    let mut paths_of_len: Vec<Vec<Path>> =
        vec![(0..quiver.n()).map(Path::trivial).collect::<Vec<_>>()];
    let mut total_paths = quiver.n();
    let extend = |prev: &[Path], total: &mut usize| -> Result<Vec<Path>, AlgError> {
        let mut out = Vec::new();
        for p in prev {
            let t = p.target(&quiver);
            for (ai, a) in quiver.arrows.iter().enumerate() {
                if a.source == t {
                    out.push(p.append(ai, &quiver));
                }
            }
        }
        *total += out.len();
        if *total > limits.max_paths {
            return Err(AlgError::Inconclusive(format!(
                "path enumeration exceeded {} paths; algebra may be infinite dimensional",
                limits.max_paths
            )));
        }
        out.sort();
        Ok(out)
    };

    let insert =
        |lc: LinComb, rules: &mut HashMap<Path, LinComb>, queue: &mut BinaryHeap<QueueItem>, seq: &mut usize| {
            let red = reduce_lincomb(&lc, rules);
            if red.is_empty() {
                return;
            }
            let pivot = red.keys().next_back().unwrap().clone();
            let pc = red[&pivot].clone();
            let mut rhs = LinComb::new();
            for (q, c) in &red {
                if *q != pivot {
                    rhs.insert(q.clone(), -(c / &pc));
                }
            }
            // enqueue one-arrow products on both sides
            let psrc = pivot.source;
            let ptgt = pivot.target(&quiver);
            let mut row = rhs.clone();
            row.insert(pivot.clone(), -Rat::one());
            for (ai, a) in quiver.arrows.iter().enumerate() {
                if a.source == ptgt {
                    // row * a
                    let mut prod = LinComb::new();
                    for (q, c) in &row {
                        debug_assert_eq!(q.target(&quiver), ptgt);
                        prod.insert(q.append(ai, &quiver), c.clone());
                    }
                    let degree = lincomb_degree(&prod);
                    queue.push(QueueItem { degree, seq: *seq, elem: prod });
                    *seq += 1;
                }
                if a.target == psrc {
                    // a * row
                    let mut prod = LinComb::new();
                    for (q, c) in &row {
                        let mut arrows = vec![ai];
                        arrows.extend_from_slice(&q.arrows);
                        prod.insert(Path { arrows, source: a.source }, c.clone());
                    }
                    let degree = lincomb_degree(&prod);
                    queue.push(QueueItem { degree, seq: *seq, elem: prod });
                    *seq += 1;
                }
            }
            rules.insert(pivot, rhs);
        };

    let mut stop_m: Option<usize> = None;
    let mut d = 1usize;
    loop {
        d += 1;
        if d > limits.max_path_len {
            return Err(AlgError::Inconclusive(format!(
                "no finite path basis found within length cap {}; algebra may be infinite dimensional",
                limits.max_path_len
            )));
        }
        while paths_of_len.len() <= d {
            let prev = paths_of_len.last().unwrap().clone();
            paths_of_len.push(extend(&prev, &mut total_paths)?);
        }
        // process all queued elements of degree <= d
        while queue.peek().map_or(false, |it| it.degree <= d) {
            let it = queue.pop().unwrap();
            insert(it.elem, &mut rules, &mut queue, &mut seq);
        }
        // smallest length m (>= 2) at which every quiver path is reducible
        if stop_m.is_none() {
            for m in 2..=d {
                if paths_of_len[m].iter().all(|p| rules.contains_key(p)) {
                    stop_m = Some(m);
                    break;
                }
            }
        }
        if let Some(m) = stop_m {
            // two extra degrees of closure for overlap safety
            if d >= m + 2 {
                break;
            }
        }
    }
    let stop_m = stop_m.unwrap();

    // basis = non-pivot paths of length < stop_m
    let mut basis: Vec<Path> = Vec::new();
    for paths in paths_of_len.iter().take(stop_m) {
        for p in paths {
            if !rules.contains_key(p) {
                basis.push(p.clone());
            }
        }
    }
    basis.sort();
    let basis_index: HashMap<Path, usize> =
        basis.iter().enumerate().map(|(i, p)| (p.clone(), i)).collect();

    // full reduction of an arbitrary path into basis coordinates
    fn coords_of(
        p: &Path,
        quiver: &Quiver,
        rules: &HashMap<Path, LinComb>,
        basis_index: &HashMap<Path, usize>,
        stop_m: usize,
        memo: &mut HashMap<Path, Coords>,
    ) -> Coords {
        if let Some(&i) = basis_index.get(p) {
            return vec![(i, Rat::one())];
        }
        if let Some(c) = memo.get(p) {
            return c.clone();
        }
        let mut acc: BTreeMap<usize, Rat> = BTreeMap::new();
        if let Some(rhs) = rules.get(p) {
            for (q, c) in rhs {
                for (bi, ci) in coords_of(q, quiver, rules, basis_index, stop_m, memo) {
                    let e = acc.entry(bi).or_insert_with(Rat::zero);
                    *e += c * &ci;
                }
            }
        } else {
            // long path with no stored rule: rewrite a proper prefix first
            debug_assert!(p.len() >= stop_m);
            let (last, init) = p.arrows.split_last().unwrap();
            let prefix = Path { arrows: init.to_vec(), source: p.source };
            for (bi, ci) in coords_of(&prefix, quiver, rules, basis_index, stop_m, memo) {
                // basis[bi] * arrow: re-reduce the shorter concatenation
                let bp = basis_index_inverse(basis_index, bi);
                let ext = bp.append(*last, quiver);
                for (bj, cj) in coords_of(&ext, quiver, rules, basis_index, stop_m, memo) {
                    let e = acc.entry(bj).or_insert_with(Rat::zero);
                    *e += &ci * &cj;
                }
            }
        }
        let out: Coords = acc.into_iter().filter(|(_, c)| !c.is_zero()).collect();
        memo.insert(p.clone(), out.clone());
        out
    }

    fn basis_index_inverse(basis_index: &HashMap<Path, usize>, i: usize) -> Path {
        // small maps only; called during construction
        basis_index.iter().find(|(_, &v)| v == i).map(|(p, _)| p.clone()).unwrap()
    }

    let mut memo: HashMap<Path, Coords> = HashMap::new();
    let mut right_mult: Vec<Vec<Option<Coords>>> = Vec::with_capacity(basis.len());
    for b in &basis {
        let tgt = b.target(&quiver);
        let mut row = Vec::with_capacity(quiver.arrows.len());
        for (ai, a) in quiver.arrows.iter().enumerate() {
            if a.source == tgt {
                let ext = b.append(ai, &quiver);
                row.push(Some(coords_of(&ext, &quiver, &rules, &basis_index, stop_m, &mut memo)));
            } else {
                row.push(None);
            }
        }
        right_mult.push(row);
    }

    let mut basis_by_pair = vec![vec![Vec::new(); quiver.n()]; quiver.n()];
    for (i, p) in basis.iter().enumerate() {
        basis_by_pair[p.source][p.target(&quiver)].push(i);
    }

    let total_dim = basis.len();
    Ok(Algebra {
        name,
        quiver,
        relations,
        basis,
        basis_index,
        basis_by_pair,
        total_dim,
        right_mult,
    })
}

impl fmt::Display for Algebra {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "algebra {} (dim {})", self.name, self.total_dim)?;
        write!(f, "basis:")?;
        for p in &self.basis {
            write!(f, " {}", p.display(&self.quiver))?;
        }
        Ok(())
    }
}

/// Canned presentations used across the test suite.
pub mod presets {
    pub const A2: &str = "\
algebra a2
vertices 1 2
arrow a : 1 -> 2
";

    pub const KRONECKER: &str = "\
algebra kronecker
vertices 1 2
arrow a : 1 -> 2
arrow b : 1 -> 2
";

    /// Markov quiver (double arrows 2->1, 1->3, 3->2) modulo rad^2.
    pub const MARKOV: &str = "\
algebra markov
vertices 1 2 3
arrow a1 : 2 -> 1
arrow a2 : 2 -> 1
arrow b1 : 1 -> 3
arrow b2 : 1 -> 3
arrow c1 : 3 -> 2
arrow c2 : 3 -> 2
relation 1 a1*b1
relation 1 a1*b2
relation 1 a2*b1
relation 1 a2*b2
relation 1 b1*c1
relation 1 b1*c2
relation 1 b2*c1
relation 1 b2*c2
relation 1 c1*a1
relation 1 c1*a2
relation 1 c2*a1
relation 1 c2*a2
";

    pub const ONE_VERTEX: &str = "\
algebra point
vertices 1
";
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::rat;

    #[test]
    fn a2_basis() {
        let alg = parse_algebra(presets::A2).unwrap();
        assert_eq!(alg.total_dim, 3);
        let names: Vec<String> = alg.basis.iter().map(|p| p.display(&alg.quiver)).collect();
        assert_eq!(names, vec!["e1", "e2", "a"]);
    }

    #[test]
    fn markov_basis_has_no_length_two_paths() {
        let alg = parse_algebra(presets::MARKOV).unwrap();
        assert_eq!(alg.total_dim, 9);
        assert!(alg.basis.iter().all(|p| p.len() <= 1));
    }

    #[test]
    fn non_admissible_relation_is_rejected() {
        let text = "\
algebra bad
vertices 1 2
arrow a : 1 -> 2
relation 1 a
";
        match parse_algebra(text) {
            Err(AlgError::NonAdmissible { .. }) => {}
            other => panic!("expected non-admissible error, got {other:?}"),
        }
    }

    #[test]
    fn infinite_dimensional_is_inconclusive() {
        let text = "\
algebra loopy
vertices 1
arrow x : 1 -> 1
";
        let limits = PathLimits { max_path_len: 12, max_paths: 10_000 };
        match parse_algebra_with(text, &limits) {
            Err(AlgError::Inconclusive(_)) => {}
            other => panic!("expected inconclusive, got {other:?}"),
        }
    }

    #[test]
    fn nilpotent_loop_terminates() {
        let text = "\
algebra nil
vertices 1
arrow x : 1 -> 1
relation 1 x*x*x
";
        let alg = parse_algebra(text).unwrap();
        assert_eq!(alg.total_dim, 3); // e, x, x^2
    }

    #[test]
    fn nonhomogeneous_relation() {
        // x^2 = x^3 forces x^2 = x^3 = x^4 = ... with x^2 nonzero:
        // the quotient has basis e, x, x^2 and x^2 * x = x^2.
        let text = "\
algebra cfix
vertices 1
arrow x : 1 -> 1
relation 1 x*x + -1 x*x*x
";
        let alg = parse_algebra(text).unwrap();
        assert_eq!(alg.total_dim, 3);
        let x2 = alg
            .basis
            .iter()
            .position(|p| p.len() == 2)
            .expect("x^2 should be a basis element");
        let prod = alg.mult_arrow(x2, 0).unwrap();
        assert_eq!(prod, &vec![(x2, rat(1))]);
    }

    #[test]
    fn commutative_square_relation() {
        let text = "\
algebra square
vertices 1 2 3 4
arrow a : 1 -> 2
arrow b : 2 -> 4
arrow c : 1 -> 3
arrow d : 3 -> 4
relation 1 a*b + -1 c*d
";
        let alg = parse_algebra(text).unwrap();
        // e1..e4, a, b, c, d, and one class of the two parallel length-2 paths
        assert_eq!(alg.total_dim, 9);
        // reduction is confluent: both association orders agree
        let a = alg.basis_index_of(&Path { arrows: vec![0], source: 0 }).unwrap();
        let ab = alg.mult_basis(a, alg.basis_index_of(&Path { arrows: vec![1], source: 1 }).unwrap());
        let c = alg.basis_index_of(&Path { arrows: vec![2], source: 0 }).unwrap();
        let cd = alg.mult_basis(c, alg.basis_index_of(&Path { arrows: vec![3], source: 2 }).unwrap());
        assert_eq!(ab, cd);
    }

    #[test]
    fn basis_size_matches_pair_table() {
        let alg = parse_algebra(presets::MARKOV).unwrap();
        let total: usize =
            alg.basis_by_pair.iter().flatten().map(|v| v.len()).sum();
        assert_eq!(total, alg.total_dim);
    }

    #[test]
    fn opposite_has_same_dimension() {
        let alg = parse_algebra(presets::MARKOV).unwrap();
        let op = alg.opposite().unwrap();
        assert_eq!(op.total_dim, alg.total_dim);
    }

    #[test]
    fn syntax_error_has_location() {
        let text = "algebra x\nvertices 1\nfrobnicate 3\n";
        match parse_algebra(text) {
            Err(AlgError::Syntax { line: 3, .. }) => {}
            other => panic!("expected syntax error on line 3, got {other:?}"),
        }
    }
}
