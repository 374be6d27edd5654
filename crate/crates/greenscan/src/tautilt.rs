//! Support tau-tilting pairs, mutation, and the exchange graph.
//!
//! Indecomposables are enumerated bottom-up by extension search: every
//! indecomposable of dimension d+1 is an extension of a smaller module by a
//! simple, so middle terms of sampled extension classes, decomposed, grow
//! the universe. The search is budgeted and reports completeness honestly;
//! mutation only trusts it when it finds the exactly-two completions the
//! theory guarantees, and refuses with BOUND_EXHAUSTED otherwise.

use crate::algebra::Algebra;
use crate::linalg::{rat, RatMat};
use crate::repcat::{
    cokernel, decompose, g_vector, hom_basis, hom_dim, is_isomorphic,
    min_projective_presentation, projective, right_approximation, tau, trace_bases, Morphism,
    Representation,
};
use crate::stability::Refusal;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::collections::{HashMap, VecDeque};
use std::fmt::Write as _;
use std::sync::Arc;

#[derive(Debug, Clone)]
pub struct Budget {
    /// Maximum total dimension of enumerated indecomposables.
    pub dim_bound: usize,
    /// Node cap for exchange graph walks.
    pub node_cap: usize,
    /// Cap on (source, simple) extension problems per enumeration round.
    pub max_sources: usize,
    /// Cap on sampled extension classes per problem.
    pub max_classes: usize,
}

impl Default for Budget {
    fn default() -> Self {
        Budget { dim_bound: 6, node_cap: 10_000, max_sources: 512, max_classes: 16 }
    }
}

// ---------------------------------------------------------------------------
// tau-rigidity
// ---------------------------------------------------------------------------

#[derive(Debug, Clone)]
pub struct RigidityReport {
    pub rigid: bool,
    /// Hom dimensions witnessing each failed vanishing condition, described
    /// by the dimension vectors of the two modules involved.
    pub violations: Vec<(Vec<i64>, Vec<i64>, usize)>,
}

/// Is the pair (sum of `modules`, sum of P(v) over `proj_vertices`)
/// tau-rigid? Requires Hom(M, tau M) = 0 and Hom(P, M) = 0.
pub fn is_tau_rigid(modules: &[Representation], proj_vertices: &[usize]) -> RigidityReport {
    let mut violations = Vec::new();
    let taus: Vec<Representation> = modules.iter().map(tau).collect();
    for x in modules {
        for (y, ty) in modules.iter().zip(&taus) {
            let d = hom_dim(x, ty);
            if d > 0 {
                violations.push((x.dim_vector(), y.dim_vector(), d));
            }
        }
    }
    if let Some(first) = modules.first() {
        for &v in proj_vertices {
            let p = projective(&first.alg, v);
            for x in modules {
                let d = hom_dim(&p, x);
                if d > 0 {
                    violations.push((p.dim_vector(), x.dim_vector(), d));
                }
            }
        }
    }
    RigidityReport { rigid: violations.is_empty(), violations }
}

// ---------------------------------------------------------------------------
// indecomposable enumeration by extension search
// ---------------------------------------------------------------------------

/// Middle terms of sampled extension classes in Ext^1(Q, S), together with
/// the dimension of the class space. Representatives combine the cokernel
/// basis of Hom(P0, S) -> Hom(P1, S) with its all-ones sum, pairwise
/// sums/differences, and seeded combinations; when every class space of an
/// indecomposable source is at most one-dimensional this sampling meets
/// every automorphism orbit of classes.
fn ext_middle_terms(
    q: &Representation,
    s: &Representation,
    budget: &Budget,
) -> (Vec<Representation>, usize) {
    let pres = min_projective_presentation(q);
    let h1 = hom_basis(&pres.p1, s);
    if h1.is_empty() {
        return (Vec::new(), 0);
    }
    let h0 = hom_basis(&pres.p0, s);
    // coordinates of a Hom(P1, S) morphism in the h1 basis
    let flat = |m: &Morphism| -> Vec<crate::linalg::Rat> {
        m.blocks.iter().flat_map(|b| b.entries_row_major()).collect()
    };
    let basis_mat = {
        let cols: Vec<Vec<crate::linalg::Rat>> = h1.iter().map(&flat).collect();
        let rows = cols[0].len();
        RatMat::from_fn(rows, cols.len(), |r, c| cols[c][r].clone())
    };
    let mut image_coords = RatMat::zero(h1.len(), 0);
    for h in &h0 {
        let comp = h.compose(&pres.map);
        let v = flat(&comp);
        let col = RatMat::from_fn(v.len(), 1, |r, _| v[r].clone());
        let coords = basis_mat.solve(&col).expect("composite lies in the hom span");
        image_coords = image_coords.hstack(&coords);
    }
    // representatives: standard vectors completing the image to the full
    // coordinate space
    let mut full = crate::repcat::column_basis(&image_coords);
    let mut rep_vecs: Vec<Vec<i64>> = Vec::new();
    for e in 0..h1.len() {
        if full.cols == h1.len() {
            break;
        }
        let mut col = RatMat::zero(h1.len(), 1);
        *col.at_mut(e, 0) = rat(1);
        let cand = full.hstack(&col);
        if cand.clone().rank() == cand.cols {
            full = cand;
            let mut v = vec![0i64; h1.len()];
            v[e] = 1;
            rep_vecs.push(v);
        }
    }
    let class_dim = rep_vecs.len();
    if rep_vecs.is_empty() {
        return (Vec::new(), 0);
    }
    let mut sampled = rep_vecs.clone();
    if rep_vecs.len() > 1 {
        let ones: Vec<i64> = (0..rep_vecs.len())
            .map(|_| 1i64)
            .zip(rep_vecs.iter())
            .fold(vec![0i64; h1.len()], |acc, (_, v)| {
                acc.iter().zip(v).map(|(a, b)| a + b).collect()
            });
        sampled.push(ones);
    }
    for i in 0..rep_vecs.len() {
        for j in (i + 1)..rep_vecs.len() {
            let sum: Vec<i64> = rep_vecs[i].iter().zip(&rep_vecs[j]).map(|(a, b)| a + b).collect();
            let dif: Vec<i64> = rep_vecs[i].iter().zip(&rep_vecs[j]).map(|(a, b)| a - b).collect();
            sampled.push(sum);
            sampled.push(dif);
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(crate::repcat::DECOMP_SEED);
    for _ in 0..(4 * rep_vecs.len()) {
        let v: Vec<i64> = (0..h1.len()).map(|_| rng.gen_range(-3i64..=3)).collect();
        if v.iter().any(|&x| x != 0) {
            sampled.push(v);
        }
    }
    sampled.truncate(budget.max_classes);
    let middles = sampled
        .into_iter()
        .map(|v| {
            let mut m = Morphism::zero(&pres.p1, s);
            for (k, &c) in v.iter().enumerate() {
                m = m.add(&h1[k].scale(&rat(c)));
            }
            m
        })
        .filter(|m| !m.is_zero())
        .map(|h| {
            let map = middle_term_map(&pres, &h);
            let target = Representation::direct_sum(&[s, &pres.p0]);
            let (e, _) = cokernel(&map, &target);
            e
        })
        .collect();
    (middles, class_dim)
}

/// The map (h, -d): P1 -> S (+) P0 whose cokernel is the extension middle
/// term.
fn middle_term_map(pres: &crate::repcat::Presentation, h: &Morphism) -> Morphism {
    let blocks = h
        .blocks
        .iter()
        .zip(&pres.map.blocks)
        .map(|(hb, db)| hb.vstack(&db.scale(&rat(-1))))
        .collect();
    Morphism { blocks }
}

#[derive(Debug, Clone)]
pub struct Universe {
    /// Indecomposables up to isomorphism, sorted by (total dim, dims).
    pub indecs: Vec<Representation>,
    /// True when the search certifies completeness below the bound: no
    /// budget cap was hit, every decomposition was certified, and the
    /// extension space of every indecomposable source against every simple
    /// was at most one-dimensional. Under that last condition the sampled
    /// classes meet every automorphism orbit of extension classes of every
    /// direct-sum source, so nothing below the bound is missed.
    pub complete: bool,
}

/// All multisets of `found` indices with total dimension at most `max_dim`,
/// as non-decreasing index sequences.
fn source_multisets(found: &[Representation], max_dim: usize, cap: usize) -> (Vec<Vec<usize>>, bool) {
    // hard ceiling on raw generation, well above any useful cap
    const GEN_CAP: usize = 100_000;
    let mut out: Vec<(usize, Vec<usize>)> = Vec::new();
    let mut stack: Vec<usize> = Vec::new();
    let mut truncated = false;
    fn rec(
        found: &[Representation],
        start: usize,
        used: usize,
        room: usize,
        stack: &mut Vec<usize>,
        out: &mut Vec<(usize, Vec<usize>)>,
        truncated: &mut bool,
    ) {
        if out.len() >= GEN_CAP {
            *truncated = true;
            return;
        }
        if !stack.is_empty() {
            out.push((used, stack.clone()));
        }
        for i in start..found.len() {
            let d = found[i].total_dim();
            if d <= room {
                stack.push(i);
                rec(found, i, used + d, room - d, stack, out, truncated);
                stack.pop();
            }
        }
    }
    rec(found, 0, 0, max_dim, &mut stack, &mut out, &mut truncated);
    // smallest sources first, so a truncated budget keeps the productive ones
    out.sort();
    if out.len() > cap {
        out.truncate(cap);
        truncated = true;
    }
    (out.into_iter().map(|(_, v)| v).collect(), truncated)
}

/// Enumerate indecomposables of total dimension <= budget.dim_bound.
pub fn enumerate_indecomposables(alg: &Arc<Algebra>, budget: &Budget) -> Universe {
    let mut found: Vec<Representation> =
        (0..alg.n()).map(|v| Representation::simple(alg, v)).collect();
    found.sort_by(|a, b| a.dims.cmp(&b.dims));
    let simples: Vec<Representation> =
        (0..alg.n()).map(|v| Representation::simple(alg, v)).collect();
    let mut complete = true;
    let mut processed: std::collections::HashSet<Vec<usize>> = std::collections::HashSet::new();
    loop {
        let (sources, truncated) =
            source_multisets(&found, budget.dim_bound.saturating_sub(1), budget.max_sources);
        if truncated {
            complete = false;
        }
        let mut new_reps: Vec<Representation> = Vec::new();
        for idxs in sources {
            if !processed.insert(idxs.clone()) {
                continue;
            }
            let parts: Vec<&Representation> = idxs.iter().map(|&i| &found[i]).collect();
            let q = Representation::direct_sum(&parts);
            let single = idxs.len() == 1;
            for s in &simples {
                if q.total_dim() + 1 > budget.dim_bound {
                    continue;
                }
                let (middles, class_dim) = ext_middle_terms(&q, s, budget);
                if single && class_dim > 1 {
                    complete = false;
                }
                for e in middles {
                    debug_assert!(e.check());
                    let dec = decompose(&e);
                    if !dec.certified {
                        complete = false;
                    }
                    for summand in dec.summands {
                        let r = summand.rep;
                        if r.total_dim() > budget.dim_bound {
                            continue;
                        }
                        let seen = found
                            .iter()
                            .chain(new_reps.iter())
                            .any(|f| f.dims == r.dims && is_isomorphic(f, &r));
                        if !seen {
                            new_reps.push(r);
                        }
                    }
                }
            }
        }
        if new_reps.is_empty() {
            break;
        }
        found.extend(new_reps);
    }
    found.sort_by(|a, b| a.total_dim().cmp(&b.total_dim()).then_with(|| a.dims.cmp(&b.dims)));
    Universe { indecs: found, complete }
}

/// The indecomposable tau-rigid modules in the universe, sorted by g-vector.
pub fn enumerate_indec_tau_rigid(universe: &Universe) -> Vec<Representation> {
    let mut out: Vec<Representation> = universe
        .indecs
        .iter()
        .filter(|m| is_tau_rigid(std::slice::from_ref(*m), &[]).rigid)
        .cloned()
        .collect();
    out.sort_by_key(|m| g_vector(m));
    out
}

// ---------------------------------------------------------------------------
// support tau-tilting pairs
// ---------------------------------------------------------------------------

#[derive(Debug, Clone)]
pub struct TauPair {
    /// Indecomposable module-side summands.
    pub modules: Vec<Representation>,
    /// Vertices of shifted projective summands.
    pub proj_vertices: Vec<usize>,
}

impl TauPair {
    pub fn size(&self) -> usize {
        self.modules.len() + self.proj_vertices.len()
    }

    pub fn g_columns(&self, n: usize) -> Vec<Vec<i64>> {
        let mut cols: Vec<Vec<i64>> = self.modules.iter().map(g_vector).collect();
        for &v in &self.proj_vertices {
            let mut g = vec![0i64; n];
            g[v] = -1;
            cols.push(g);
        }
        cols
    }

    pub fn g_matrix(&self, n: usize) -> RatMat {
        let cols = self.g_columns(n);
        RatMat::from_fn(n, cols.len(), |r, c| rat(cols[c][r]))
    }

    /// Canonical identity: sorted g-vector columns.
    pub fn key(&self, n: usize) -> Vec<Vec<i64>> {
        let mut cols = self.g_columns(n);
        cols.sort();
        cols
    }

    /// A support pair must have n summands with a unimodular g-matrix and be
    /// tau-rigid.
    pub fn validate(&self, alg: &Arc<Algebra>) -> Result<(), String> {
        let n = alg.n();
        if self.size() != n {
            return Err(format!("pair has {} summands, expected {n}", self.size()));
        }
        let det = self.g_matrix(n).det();
        if det != rat(1) && det != rat(-1) {
            return Err(format!(
                "g-matrix determinant {} is not a unit",
                crate::linalg::rat_to_string(&det)
            ));
        }
        let rep = is_tau_rigid(&self.modules, &self.proj_vertices);
        if !rep.rigid {
            return Err(format!("pair is not tau-rigid: {:?}", rep.violations));
        }
        Ok(())
    }
}

/// Fac(sum of p2.modules) contained in Fac(sum of p1.modules)?
pub fn fac_leq(p2: &TauPair, p1: &TauPair) -> bool {
    let gens: Vec<&Representation> = p1.modules.iter().collect();
    p2.modules.iter().all(|x| {
        if gens.is_empty() {
            return x.is_zero();
        }
        let tr = trace_bases(&gens, x);
        tr.iter().zip(&x.dims).all(|(b, &d)| b.cols == d)
    })
}

/// An almost complete pair: n-1 compatible summands.
#[derive(Debug, Clone)]
pub struct AlmostPair {
    pub modules: Vec<Representation>,
    pub proj_vertices: Vec<usize>,
}

#[derive(Debug, Clone)]
pub enum Completion {
    Module(Representation),
    ShiftedProj(usize),
}

fn compatible_with_module(
    almost: &AlmostPair,
    almost_taus: &[Representation],
    x: &Representation,
    tx: &Representation,
) -> bool {
    if hom_dim(x, tx) > 0 {
        return false;
    }
    for (m, tm) in almost.modules.iter().zip(almost_taus) {
        if m.dims == x.dims && is_isomorphic(m, x) {
            return false;
        }
        if hom_dim(m, tx) > 0 || hom_dim(x, tm) > 0 {
            return false;
        }
    }
    for &v in &almost.proj_vertices {
        let p = projective(&x.alg, v);
        if hom_dim(&p, x) > 0 {
            return false;
        }
    }
    true
}

fn compatible_with_shift(almost: &AlmostPair, alg: &Arc<Algebra>, v: usize) -> bool {
    if almost.proj_vertices.contains(&v) {
        return false;
    }
    let p = projective(alg, v);
    almost.modules.iter().all(|m| hom_dim(&p, m) == 0)
}

/// The two completions of an almost complete pair, larger Fac first.
/// Refuses with BOUND_EXHAUSTED when the candidate pool yields fewer than
/// two; more than two would contradict the exchange theory and panics.
pub fn complete_almost(
    almost: &AlmostPair,
    alg: &Arc<Algebra>,
    candidates: &[Representation],
) -> Result<(TauPair, TauPair), Refusal> {
    let cand_taus: Vec<Representation> = candidates.iter().map(tau).collect();
    complete_almost_cached(almost, alg, candidates, &cand_taus)
}

fn complete_almost_cached(
    almost: &AlmostPair,
    alg: &Arc<Algebra>,
    candidates: &[Representation],
    cand_taus: &[Representation],
) -> Result<(TauPair, TauPair), Refusal> {
    let almost_taus: Vec<Representation> = almost.modules.iter().map(tau).collect();
    let mut completions: Vec<Completion> = Vec::new();
    for (x, tx) in candidates.iter().zip(cand_taus) {
        if compatible_with_module(almost, &almost_taus, x, tx) {
            completions.push(Completion::Module(x.clone()));
        }
    }
    for v in 0..alg.n() {
        if compatible_with_shift(almost, alg, v) {
            completions.push(Completion::ShiftedProj(v));
        }
    }
    let pairs: Vec<TauPair> = completions
        .into_iter()
        .map(|c| {
            let mut modules = almost.modules.clone();
            let mut proj_vertices = almost.proj_vertices.clone();
            match c {
                Completion::Module(m) => modules.push(m),
                Completion::ShiftedProj(v) => proj_vertices.push(v),
            }
            proj_vertices.sort_unstable();
            TauPair { modules, proj_vertices }
        })
        .filter(|p| p.validate(alg).is_ok())
        .collect();
    match pairs.len() {
        0 | 1 => Err(Refusal::BoundExhausted(format!(
            "found {} completions of the almost complete pair; candidate pool is too small",
            pairs.len()
        ))),
        2 => {
            let (a, b) = (pairs[0].clone(), pairs[1].clone());
            if fac_leq(&b, &a) {
                Ok((a, b))
            } else {
                debug_assert!(fac_leq(&a, &b));
                Ok((b, a))
            }
        }
        k => panic!("almost complete pair admits {k} completions; exchange invariant violated"),
    }
}

/// Result of one mutation: the other completion and the brick labelling the
/// crossed wall.
#[derive(Debug, Clone)]
pub struct Mutation {
    pub pair: TauPair,
    pub brick: Representation,
    /// True when the mutated-away pair had the larger torsion class.
    pub was_larger: bool,
}

/// Mutate `pair` at its k-th summand (module summands first, then shifted
/// projectives in order).
pub fn mutate(
    pair: &TauPair,
    k: usize,
    alg: &Arc<Algebra>,
    candidates: &[Representation],
) -> Result<Mutation, Refusal> {
    let cand_taus: Vec<Representation> = candidates.iter().map(tau).collect();
    mutate_cached(pair, k, alg, candidates, &cand_taus)
}

fn mutate_cached(
    pair: &TauPair,
    k: usize,
    alg: &Arc<Algebra>,
    candidates: &[Representation],
    cand_taus: &[Representation],
) -> Result<Mutation, Refusal> {
    let mut modules = pair.modules.clone();
    let mut proj_vertices = pair.proj_vertices.clone();
    if k < modules.len() {
        modules.remove(k);
    } else {
        proj_vertices.remove(k - modules.len());
    }
    let almost = AlmostPair { modules, proj_vertices };
    let (larger, smaller) = complete_almost_cached(&almost, alg, candidates, cand_taus)?;
    let this_key = pair.key(alg.n());
    let (other, was_larger) = if larger.key(alg.n()) == this_key {
        (smaller, true)
    } else if smaller.key(alg.n()) == this_key {
        (larger.clone(), false)
    } else {
        return Err(Refusal::BoundExhausted(
            "mutated pair is not among the completions of its own almost complete pair".into(),
        ));
    };
    // the larger completion adds a module-side summand Y; the wall brick is
    // the cokernel of the universal right approximation of Y by the shared
    // module summands
    let larger_pair = if was_larger { pair } else { &other };
    let y = larger_pair
        .modules
        .iter()
        .find(|m| {
            !almost.modules.iter().any(|a| a.dims == m.dims && is_isomorphic(a, m))
        })
        .expect("larger completion adds a module summand");
    let shared: Vec<&Representation> = almost.modules.iter().collect();
    let brick = if shared.is_empty() {
        y.clone()
    } else {
        let (_, f) = right_approximation(&shared, y);
        let (c, _) = cokernel(&f, y);
        c
    };
    Ok(Mutation { pair: other, brick, was_larger })
}

// ---------------------------------------------------------------------------
// exchange graph
// ---------------------------------------------------------------------------

#[derive(Debug, Clone)]
pub struct Edge {
    /// Node indices, oriented from larger torsion class to smaller.
    pub from: usize,
    pub to: usize,
    pub brick: Representation,
}

#[derive(Debug, Clone)]
pub struct ExchangeGraph {
    pub nodes: Vec<TauPair>,
    pub edges: Vec<Edge>,
    /// Nodes with at least one unresolved mutation.
    pub stubs: Vec<usize>,
    /// True when every mutation from every node resolved within budget.
    pub complete: bool,
}

/// Breadth-first walk of the exchange graph from (A, 0).
pub fn exchange_graph(alg: &Arc<Algebra>, budget: &Budget) -> ExchangeGraph {
    let universe = enumerate_indecomposables(alg, budget);
    let candidates = enumerate_indec_tau_rigid(&universe);
    let cand_taus: Vec<Representation> = candidates.iter().map(tau).collect();
    let n = alg.n();
    let start = TauPair {
        modules: (0..n).map(|v| projective(alg, v)).collect(),
        proj_vertices: Vec::new(),
    };
    start.validate(alg).expect("the free pair is support tau-tilting");

    let mut nodes: Vec<TauPair> = vec![start.clone()];
    let mut index: HashMap<Vec<Vec<i64>>, usize> = HashMap::new();
    index.insert(start.key(n), 0);
    let mut edges: Vec<Edge> = Vec::new();
    let mut edge_seen: HashMap<(usize, usize), ()> = HashMap::new();
    let mut stubs: Vec<usize> = Vec::new();
    let mut complete = true;

    let mut queue: VecDeque<usize> = VecDeque::new();
    queue.push_back(0);
    while let Some(cur) = queue.pop_front() {
        let pair = nodes[cur].clone();
        let mut stubbed = false;
        for k in 0..pair.size() {
            match mutate_cached(&pair, k, alg, &candidates, &cand_taus) {
                Ok(mutation) => {
                    let key = mutation.pair.key(n);
                    let to = if let Some(&i) = index.get(&key) {
                        i
                    } else {
                        if nodes.len() >= budget.node_cap {
                            complete = false;
                            stubbed = true;
                            continue;
                        }
                        nodes.push(mutation.pair.clone());
                        index.insert(key, nodes.len() - 1);
                        queue.push_back(nodes.len() - 1);
                        nodes.len() - 1
                    };
                    let (from, to_) = if mutation.was_larger { (cur, to) } else { (to, cur) };
                    if edge_seen.insert((from, to_), ()).is_none() {
                        edges.push(Edge { from, to: to_, brick: mutation.brick });
                    }
                }
                Err(_) => {
                    complete = false;
                    stubbed = true;
                }
            }
        }
        if stubbed {
            stubs.push(cur);
        }
    }
    ExchangeGraph { nodes, edges, stubs, complete }
}

impl ExchangeGraph {
    pub fn node_index(&self, key: &[Vec<i64>], n: usize) -> Option<usize> {
        self.nodes.iter().position(|p| p.key(n) == key)
    }

    /// Graphviz rendering with g-vector labels and brick edge labels.
    pub fn to_dot(&self, alg: &Algebra) -> String {
        let n = alg.n();
        let mut out = String::from("digraph exchange {\n  rankdir=TB;\n");
        for (i, p) in self.nodes.iter().enumerate() {
            let cols = p.key(n);
            let label: Vec<String> = cols
                .iter()
                .map(|g| {
                    let parts: Vec<String> = g.iter().map(|x| x.to_string()).collect();
                    format!("({})", parts.join(","))
                })
                .collect();
            let shape = if self.stubs.contains(&i) { "box" } else { "ellipse" };
            let _ = writeln!(out, "  n{i} [label=\"{}\", shape={shape}];", label.join(" "));
        }
        for e in &self.edges {
            let d: Vec<String> = e.brick.dim_vector().iter().map(|x| x.to_string()).collect();
            let _ = writeln!(out, "  n{} -> n{} [label=\"({})\"];", e.from, e.to, d.join(","));
        }
        out.push_str("}\n");
        out
    }
}

// ---------------------------------------------------------------------------
// maximal green sequences from the exchange graph
// ---------------------------------------------------------------------------

#[derive(Debug, Clone)]
pub struct MgsChain {
    /// Node indices from (A, 0) to (0, A).
    pub nodes: Vec<usize>,
    /// Edge indices crossed, in order.
    pub edges: Vec<usize>,
}

/// All maximal green sequences: oriented paths from the all-projective node
/// to the all-shifted node, each of length at most `max_len`.
pub fn enumerate_mgs(
    graph: &ExchangeGraph,
    alg: &Algebra,
    max_len: usize,
) -> Result<Vec<MgsChain>, Refusal> {
    if !graph.complete {
        return Err(Refusal::BoundExhausted(
            "exchange graph walk hit its budget; green sequences cannot be certified".into(),
        ));
    }
    let n = alg.n();
    // the all-projective node has the identity g-matrix
    let source_key: Vec<Vec<i64>> = {
        let mut cols: Vec<Vec<i64>> = (0..n)
            .map(|v| {
                let mut g = vec![0i64; n];
                g[v] = 1;
                g
            })
            .collect();
        cols.sort();
        cols
    };
    let sink_key: Vec<Vec<i64>> = {
        let mut cols: Vec<Vec<i64>> = (0..n)
            .map(|v| {
                let mut g = vec![0i64; n];
                g[v] = -1;
                g
            })
            .collect();
        cols.sort();
        cols
    };
    let source = graph
        .node_index(&source_key, n)
        .expect("exchange graph contains the all-projective node");
    let sink = graph.node_index(&sink_key, n).ok_or_else(|| {
        Refusal::BoundExhausted("the all-shifted node was not reached".into())
    })?;

    let mut out_edges: Vec<Vec<usize>> = vec![Vec::new(); graph.nodes.len()];
    for (i, e) in graph.edges.iter().enumerate() {
        out_edges[e.from].push(i);
    }
    let mut chains = Vec::new();
    let mut stack_nodes = vec![source];
    let mut stack_edges: Vec<usize> = Vec::new();
    fn dfs(
        cur: usize,
        sink: usize,
        max_len: usize,
        out_edges: &[Vec<usize>],
        graph: &ExchangeGraph,
        stack_nodes: &mut Vec<usize>,
        stack_edges: &mut Vec<usize>,
        chains: &mut Vec<MgsChain>,
    ) {
        if cur == sink {
            chains.push(MgsChain { nodes: stack_nodes.clone(), edges: stack_edges.clone() });
            return;
        }
        if stack_edges.len() >= max_len {
            return;
        }
        for &ei in &out_edges[cur] {
            let next = graph.edges[ei].to;
            stack_nodes.push(next);
            stack_edges.push(ei);
            dfs(next, sink, max_len, out_edges, graph, stack_nodes, stack_edges, chains);
            stack_nodes.pop();
            stack_edges.pop();
        }
    }
    dfs(source, sink, max_len, &out_edges, graph, &mut stack_nodes, &mut stack_edges, &mut chains);
    chains.sort_by_key(|c| (c.edges.len(), c.nodes.clone()));
    Ok(chains)
}
