//! Walls and chambers in the space of linear weights.
//!
//! Each support pair spans a full simplicial cone on its g-vector columns
//! (unimodular, so membership is a single exact solve). Walls between
//! adjacent chambers carry a brick; certificates re-verify stability of the
//! brick at affinely independent rational sample points on the wall.
//! Green paths are piecewise-linear with rational breakpoints, and all wall
//! crossings are located by exact root finding.

use crate::algebra::Algebra;
use crate::linalg::{dot_int, rat, rat_frac, sign, Rat, RatMat};
use crate::repcat::Representation;
use crate::stability::{theta_classify, Refusal, ThetaStatus};
use crate::tautilt::{Budget, ExchangeGraph, MgsChain, TauPair};
use num_traits::Zero;
use std::sync::Arc;

#[derive(Debug, Clone)]
pub struct Cone {
    /// Ray generators as columns of a unimodular matrix.
    pub rays: Vec<Vec<i64>>,
}

impl Cone {
    pub fn of_pair(pair: &TauPair, n: usize) -> Cone {
        Cone { rays: pair.g_columns(n) }
    }

    fn g_matrix(&self) -> RatMat {
        let n = self.rays[0].len();
        RatMat::from_fn(n, self.rays.len(), |r, c| rat(self.rays[c][r]))
    }

    /// Barycentric-style coordinates of a point: the unique alpha with
    /// G alpha = point.
    pub fn coords(&self, point: &[Rat]) -> Option<Vec<Rat>> {
        let g = self.g_matrix();
        let b = RatMat::from_fn(point.len(), 1, |r, _| point[r].clone());
        let sol = g.solve(&b)?;
        Some((0..sol.rows).map(|r| sol.at(r, 0).clone()).collect())
    }

    pub fn contains_interior(&self, point: &[Rat]) -> bool {
        self.coords(point)
            .map_or(false, |a| a.iter().all(|x| sign(x) == 1))
    }

    pub fn contains_closed(&self, point: &[Rat]) -> bool {
        self.coords(point)
            .map_or(false, |a| a.iter().all(|x| sign(x) >= 0))
    }
}

/// The node whose open chamber contains the weight, if any.
pub fn chamber_of(theta: &[Rat], graph: &ExchangeGraph, n: usize) -> Option<usize> {
    (0..graph.nodes.len())
        .find(|&i| Cone::of_pair(&graph.nodes[i], n).contains_interior(theta))
}

#[derive(Debug, Clone)]
pub struct Wall {
    /// Edge of the exchange graph this wall separates, when it came from
    /// one; limit walls (Kronecker-style) have no edge.
    pub edge: Option<usize>,
    pub brick_dims: Vec<i64>,
    /// The shared rays spanning the wall.
    pub rays: Vec<Vec<i64>>,
    /// Affinely independent rational points on the wall where the brick was
    /// re-verified stable.
    pub samples: Vec<Vec<Rat>>,
    pub certified: bool,
}

/// Certify the wall of an exchange edge: the common face of the two
/// chambers, sampled at n-1 affinely independent interior points, with the
/// brick classified at each.
pub fn wall_certificate(graph: &ExchangeGraph, edge: usize, alg: &Arc<Algebra>) -> Wall {
    let n = alg.n();
    let e = &graph.edges[edge];
    let from = Cone::of_pair(&graph.nodes[e.from], n);
    let to = Cone::of_pair(&graph.nodes[e.to], n);
    let shared: Vec<Vec<i64>> =
        from.rays.iter().filter(|r| to.rays.contains(r)).cloned().collect();
    debug_assert_eq!(shared.len(), n - 1);
    let bary: Vec<i64> = (0..n).map(|i| shared.iter().map(|r| r[i]).sum()).collect();
    let samples: Vec<Vec<Rat>> = if shared.len() <= 1 {
        vec![bary.iter().map(|&x| rat(x)).collect()]
    } else {
        shared
            .iter()
            .take(n - 1)
            .map(|r| (0..n).map(|i| rat(bary[i] + r[i])).collect())
            .collect()
    };
    let mut certified = true;
    for s in &samples {
        let cls = theta_classify(s, &e.brick);
        if cls.status != ThetaStatus::Stable {
            certified = false;
        }
    }
    Wall { edge: Some(edge), brick_dims: e.brick.dim_vector(), rays: shared, samples, certified }
}

/// Certify a wall for a bare brick from caller-supplied samples: every
/// sample must lie on the brick's hyperplane and keep the brick semistable.
/// Covers limit walls that no exchange-graph edge reaches.
pub fn certify_brick_wall(brick: &Representation, samples: &[Vec<Rat>]) -> Wall {
    let d = brick.dim_vector();
    let mut certified = !samples.is_empty();
    for s in samples {
        if !dot_int(s, &d).is_zero() {
            certified = false;
            continue;
        }
        let cls = theta_classify(s, brick);
        if cls.status == ThetaStatus::Unstable || !cls.certified {
            certified = false;
        }
    }
    Wall {
        edge: None,
        brick_dims: d,
        rays: Vec::new(),
        samples: samples.to_vec(),
        certified,
    }
}

// ---------------------------------------------------------------------------
// green paths
// ---------------------------------------------------------------------------

#[derive(Debug, Clone)]
pub struct GreenPath {
    /// Piecewise-linear breakpoints, each a rational weight.
    pub points: Vec<Vec<Rat>>,
}

impl GreenPath {
    /// theta_t . d at a breakpoint.
    fn value_at(&self, k: usize, d: &[i64]) -> Rat {
        dot_int(&self.points[k], d)
    }
}

/// A green path must take every brick functional from positive to negative
/// through isolated zeros: the sign word along the path is + (0) -. A zero
/// on a whole subsegment, or a return to positive, fails.
pub fn validate_path(path: &GreenPath, graph: &ExchangeGraph) -> Result<(), Refusal> {
    if path.points.len() < 2 {
        return Err(Refusal::NotGreenPath("path needs at least two breakpoints".into()));
    }
    let mut brick_dims: Vec<Vec<i64>> =
        graph.edges.iter().map(|e| e.brick.dim_vector()).collect();
    brick_dims.sort();
    brick_dims.dedup();
    for d in &brick_dims {
        let signs: Vec<i32> =
            (0..path.points.len()).map(|k| sign(&path.value_at(k, d))).collect();
        if signs.windows(2).any(|w| w == [0, 0]) {
            return Err(Refusal::NotGreenPath(format!(
                "path runs inside the wall of {d:?} for a whole segment"
            )));
        }
        // the functional is linear on each segment, so the breakpoint signs
        // determine its sign everywhere; collapse repeats and demand a
        // single positive-to-negative crossing
        let mut word: Vec<i32> = Vec::new();
        for s in signs {
            if word.last() != Some(&s) {
                word.push(s);
            }
        }
        if word != [1, -1] && word != [1, 0, -1] {
            return Err(Refusal::NotGreenPath(format!(
                "the wall functional of {d:?} has sign pattern {word:?}, \
                 expected one descending crossing"
            )));
        }
    }
    Ok(())
}

/// Walk a path through the chamber fan, recording the edges crossed.
/// Requires the walk to start in the all-projective chamber, end in the
/// all-shifted one, cross every wall transversally in the green direction,
/// and keep every breakpoint in a chamber interior.
pub fn mgs_from_path(
    path: &GreenPath,
    graph: &ExchangeGraph,
    alg: &Arc<Algebra>,
) -> Result<MgsChain, Refusal> {
    let n = alg.n();
    validate_path(path, graph)?;
    let cones: Vec<Cone> = graph.nodes.iter().map(|p| Cone::of_pair(p, n)).collect();
    let mut cur = chamber_of(&path.points[0], graph, n).ok_or_else(|| {
        Refusal::NotGreenPath("path does not start in a chamber interior".into())
    })?;
    let source_key = identity_key(n);
    if graph.nodes[cur].key(n) != source_key {
        return Err(Refusal::NotGreenPath(
            "path does not start in the all-projective chamber".into(),
        ));
    }
    let mut nodes = vec![cur];
    let mut edges = Vec::new();
    for seg in path.points.windows(2) {
        let (p, q) = (&seg[0], &seg[1]);
        let dir: Vec<Rat> = p.iter().zip(q).map(|(a, b)| b - a).collect();
        let mut t0 = Rat::zero();
        loop {
            // alpha(t) = G^-1 (p + t dir), componentwise linear
            let a0 = cones[cur].coords(&at(p, &dir, &t0)).expect("chamber matrix is invertible");
            let a1 = {
                let one = rat(1);
                cones[cur].coords(&at(p, &dir, &one)).unwrap()
            };
            // exit time: earliest root of a coordinate heading negative
            let mut exit: Option<(Rat, usize)> = None;
            for i in 0..n {
                // c(t) = c(t0) + (t - t0)/(1 - t0) * (c(1) - c(t0))
                let denom = rat(1) - &t0;
                if denom.is_zero() {
                    break;
                }
                let slope = (&a1[i] - &a0[i]) / &denom;
                if sign(&slope) >= 0 {
                    continue;
                }
                let root = &t0 - &a0[i] / &slope;
                if &root > &t0 && root <= rat(1) {
                    if exit.as_ref().map_or(true, |(e, _)| &root < e) {
                        exit = Some((root, i));
                    }
                }
            }
            let Some((t_star, _)) = exit else { break };
            let w = at(p, &dir, &t_star);
            // all vanishing coordinates at the crossing; more than one means
            // the path hits a lower-dimensional face
            let acr = cones[cur].coords(&w).unwrap();
            let zeros: Vec<usize> = (0..n).filter(|&i| acr[i].is_zero()).collect();
            if zeros.len() != 1 {
                // several walls are crossed at the same time, so the induced
                // stability structure has tied stables
                return Err(Refusal::NotDiscrete(format!(
                    "path crosses {} walls at the same time t = {}",
                    zeros.len(),
                    crate::linalg::rat_to_string(&t_star)
                )));
            }
            // the neighbor whose cone the path enters
            let mut next_node = None;
            for (ei, e) in graph.edges.iter().enumerate() {
                let other = if e.from == cur {
                    e.to
                } else if e.to == cur {
                    e.from
                } else {
                    continue;
                };
                let b0 = match cones[other].coords(&w) {
                    Some(b) => b,
                    None => continue,
                };
                if b0.iter().any(|x| sign(x) == -1) {
                    continue;
                }
                // entering: the vanishing coordinates must strictly increase
                let wq = at(p, &dir, &rat(1));
                let b1 = cones[other].coords(&wq).unwrap();
                let entering = (0..n).all(|i| !b0[i].is_zero() || b1[i] > b0[i]);
                if entering {
                    if e.from != cur {
                        return Err(Refusal::NotGreenPath(
                            "path crosses a wall in the red direction".into(),
                        ));
                    }
                    next_node = Some((other, ei));
                    break;
                }
            }
            let Some((other, ei)) = next_node else {
                return Err(Refusal::NotGreenPath(
                    "path leaves the known chamber fan; walls there are unresolved".into(),
                ));
            };
            nodes.push(other);
            edges.push(ei);
            cur = other;
            t0 = t_star;
        }
        // the breakpoint itself must sit in the interior of the current cone
        if !cones[cur].contains_interior(q) {
            return Err(Refusal::NotGreenPath(
                "a breakpoint lies on a wall or outside the current chamber".into(),
            ));
        }
    }
    let sink_key = shifted_key(n);
    if graph.nodes[cur].key(n) != sink_key {
        return Err(Refusal::NotGreenPath(
            "path does not end in the all-shifted chamber".into(),
        ));
    }
    Ok(MgsChain { nodes, edges })
}

fn at(p: &[Rat], dir: &[Rat], t: &Rat) -> Vec<Rat> {
    p.iter().zip(dir).map(|(a, b)| a + b * t).collect()
}

fn identity_key(n: usize) -> Vec<Vec<i64>> {
    let mut cols: Vec<Vec<i64>> = (0..n)
        .map(|v| {
            let mut g = vec![0i64; n];
            g[v] = 1;
            g
        })
        .collect();
    cols.sort();
    cols
}

fn shifted_key(n: usize) -> Vec<Vec<i64>> {
    let mut cols: Vec<Vec<i64>> = (0..n)
        .map(|v| {
            let mut g = vec![0i64; n];
            g[v] = -1;
            g
        })
        .collect();
    cols.sort();
    cols
}

/// Realize a green sequence as a piecewise-linear path through the chamber
/// barycenters, staggered by a dyadic perturbation when the plain
/// barycenters hit lower-dimensional faces. The result is validated by a
/// round trip through `mgs_from_path`.
pub fn path_from_mgs(
    chain: &MgsChain,
    graph: &ExchangeGraph,
    alg: &Arc<Algebra>,
) -> Result<GreenPath, Refusal> {
    let n = alg.n();
    let m = chain.nodes.len();
    let barys: Vec<Vec<i64>> = chain
        .nodes
        .iter()
        .map(|&i| {
            let rays = &Cone::of_pair(&graph.nodes[i], n).rays;
            (0..n).map(|k| rays.iter().map(|r| r[k]).sum()).collect()
        })
        .collect();
    let build = |eps: &Rat| -> GreenPath {
        let mut points: Vec<Vec<Rat>> = Vec::with_capacity(m + 2);
        points.push(vec![rat(1); n]);
        for (i, b) in barys.iter().enumerate() {
            let stagger = rat_frac((m - i) as i64, m as i64) * eps;
            points.push(b.iter().map(|&x| rat(x) + &stagger).collect());
        }
        points.push(vec![rat(-1); n]);
        GreenPath { points }
    };
    let mut eps_candidates: Vec<Rat> = vec![Rat::zero()];
    for k in 3..=40u32 {
        eps_candidates.push(rat_frac(1, 1i64 << k.min(62)));
    }
    // prefer the largest dyadic perturbation that round-trips
    for eps in eps_candidates {
        let path = build(&eps);
        if let Ok(back) = mgs_from_path(&path, graph, alg) {
            if back.edges == chain.edges {
                return Ok(path);
            }
        }
    }
    Err(Refusal::NotGreenPath(
        "no dyadic perturbation of the barycenter path realizes this sequence".into(),
    ))
}

// ---------------------------------------------------------------------------
// Markov-type witness
// ---------------------------------------------------------------------------

#[derive(Debug, Clone)]
pub struct MarkovWitness {
    /// Vertex indices (i, j, k) with double arrows j -> i, i -> k, k -> j.
    pub cycle: [usize; 3],
    /// The three bricks supported on the edges of the cycle.
    pub bricks: Vec<Representation>,
    /// A stability certificate weight for each brick.
    pub thetas: Vec<Vec<Rat>>,
    /// True when every brick was certified stable at its weight.
    pub all_stable: bool,
    /// Exchange-graph evidence: nodes explored within budget, whether the
    /// all-shifted chamber was reached, and the number of stubbed nodes.
    pub graph_nodes: usize,
    pub sink_reached: bool,
    pub stub_count: usize,
}

/// Detect a cyclically oriented triple of double arrows and assemble the
/// obstruction witness: three stable bricks whose walls no green path can
/// cross in a finite order.
pub fn markov_witness(
    alg: &Arc<Algebra>,
    graph: &ExchangeGraph,
) -> Option<MarkovWitness> {
    let n = alg.n();
    let double = |a: usize, b: usize| {
        alg.quiver.arrows.iter().filter(|ar| ar.source == a && ar.target == b).count() >= 2
    };
    let mut cycle = None;
    'outer: for i in 0..n {
        for j in 0..n {
            for k in 0..n {
                if i != j && j != k && i != k && double(j, i) && double(i, k) && double(k, j) {
                    cycle = Some([i, j, k]);
                    break 'outer;
                }
            }
        }
    }
    let cycle = cycle?;
    let [i, j, k] = cycle;
    // one brick per cycle edge, concentrated on the two endpoints with both
    // double-arrow scalars equal to one
    let edge_brick = |src: usize, tgt: usize| -> Representation {
        let mut dims = vec![0usize; n];
        dims[src] = 1;
        dims[tgt] = 1;
        let maps = alg
            .quiver
            .arrows
            .iter()
            .map(|a| {
                let mut mat = RatMat::zero(dims[a.target], dims[a.source]);
                if a.source == src && a.target == tgt {
                    *mat.at_mut(0, 0) = rat(1);
                }
                mat
            })
            .collect();
        Representation { alg: alg.clone(), dims, maps }
    };
    let theta_for = |tgt: usize| -> Vec<Rat> {
        (0..n).map(|v| if v == tgt { rat(-1) } else { rat(1) }).collect()
    };
    let edges = [(j, i), (i, k), (k, j)];
    let mut bricks = Vec::new();
    let mut thetas = Vec::new();
    let mut all_stable = true;
    for &(s, t) in &edges {
        let b = edge_brick(s, t);
        if !b.check() {
            return None;
        }
        let theta = theta_for(t);
        let cls = theta_classify(&theta, &b);
        if cls.status != ThetaStatus::Stable || !cls.certified {
            all_stable = false;
        }
        bricks.push(b);
        thetas.push(theta);
    }
    let sink_reached = graph
        .nodes
        .iter()
        .any(|p| p.key(n) == shifted_key(n));
    Some(MarkovWitness {
        cycle,
        bricks,
        thetas,
        all_stable,
        graph_nodes: graph.nodes.len(),
        sink_reached,
        stub_count: graph.stubs.len(),
    })
}

/// Convenience: graph plus witness in one call.
pub fn markov_scan(alg: &Arc<Algebra>, budget: &Budget) -> (ExchangeGraph, Option<MarkovWitness>) {
    let graph = crate::tautilt::exchange_graph(alg, budget);
    let witness = markov_witness(alg, &graph);
    (graph, witness)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{parse_algebra, presets};
    use crate::tautilt::{enumerate_mgs, exchange_graph};

    fn a2_graph() -> (Arc<Algebra>, ExchangeGraph) {
        let alg = Arc::new(parse_algebra(presets::A2).unwrap());
        let g = exchange_graph(&alg, &Budget::default());
        (alg, g)
    }

    #[test]
    fn chamber_lookup() {
        let (alg, g) = a2_graph();
        let theta = vec![rat(2), rat(3)];
        let c = chamber_of(&theta, &g, alg.n()).unwrap();
        assert_eq!(g.nodes[c].key(2), vec![vec![0, 1], vec![1, 0]]);
        // a wall point is in no open chamber
        let wall = vec![rat(1), rat(0)];
        assert!(chamber_of(&wall, &g, alg.n()).is_none());
    }

    #[test]
    fn all_a2_walls_certify() {
        let (alg, g) = a2_graph();
        for e in 0..g.edges.len() {
            let w = wall_certificate(&g, e, &alg);
            assert!(w.certified, "wall {e} with brick {:?} failed", w.brick_dims);
            assert_eq!(w.samples.len(), 1);
        }
    }

    #[test]
    fn straight_path_is_green() {
        let (alg, g) = a2_graph();
        let path = GreenPath {
            points: vec![vec![rat(1), rat(1)], vec![rat(-1), rat(-1)]],
        };
        // the straight diagonal crosses every wall at t = 1/2: it is still a
        // green path but induces no sequence
        validate_path(&path, &g).unwrap();
        match mgs_from_path(&path, &g, &alg) {
            Err(Refusal::NotDiscrete(msg)) => assert!(msg.contains("1/2")),
            other => panic!("expected NOT_DISCRETE, got {other:?}"),
        }
        // passing right of the origin crosses three walls (the long sequence)
        let path = GreenPath {
            points: vec![vec![rat(1), rat(1)], vec![rat(-1), rat(-2)]],
        };
        let chain = mgs_from_path(&path, &g, &alg).unwrap();
        assert_eq!(chain.edges.len(), 3);
        // passing left of the origin crosses two (the short sequence)
        let path = GreenPath {
            points: vec![vec![rat(1), rat(1)], vec![rat(-2), rat(-1)]],
        };
        let chain = mgs_from_path(&path, &g, &alg).unwrap();
        assert_eq!(chain.edges.len(), 2);
    }

    #[test]
    fn red_path_is_refused() {
        let (alg, g) = a2_graph();
        let path = GreenPath {
            points: vec![vec![rat(-1), rat(-2)], vec![rat(1), rat(1)]],
        };
        match mgs_from_path(&path, &g, &alg) {
            Err(Refusal::NotGreenPath(_)) => {}
            other => panic!("expected NOT_GREEN_PATH, got {other:?}"),
        }
    }

    #[test]
    fn round_trip_both_a2_sequences() {
        let (alg, g) = a2_graph();
        let chains = enumerate_mgs(&g, &alg, 64).unwrap();
        assert_eq!(chains.len(), 2);
        for chain in &chains {
            let path = path_from_mgs(chain, &g, &alg).unwrap();
            let back = mgs_from_path(&path, &g, &alg).unwrap();
            assert_eq!(back.edges, chain.edges);
            validate_path(&path, &g).unwrap();
        }
    }

    #[test]
    fn markov_witness_detects_cycle() {
        let alg = Arc::new(parse_algebra(presets::MARKOV).unwrap());
        let budget = Budget { dim_bound: 4, node_cap: 40, ..Budget::default() };
        let (graph, witness) = markov_scan(&alg, &budget);
        let w = witness.expect("cyclic double arrows must be detected");
        assert!(w.all_stable);
        assert_eq!(w.bricks.len(), 3);
        let mut dims: Vec<Vec<usize>> = w.bricks.iter().map(|b| b.dims.clone()).collect();
        dims.sort();
        assert_eq!(dims, vec![vec![0, 1, 1], vec![1, 0, 1], vec![1, 1, 0]]);
        assert!(!w.sink_reached || graph.complete);
    }

    #[test]
    fn no_witness_on_a2() {
        let (alg, g) = a2_graph();
        assert!(markov_witness(&alg, &g).is_none());
    }
}
