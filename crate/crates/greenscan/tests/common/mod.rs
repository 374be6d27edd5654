#![allow(dead_code)]

//! Shared helpers for the integration suites: seeded random algebras and
//! random modules over them.

use greenscan::algebra::{parse_algebra, Algebra};
use greenscan::linalg::{rat, RatMat};
use greenscan::repcat::Representation;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::sync::Arc;

/// A seeded random acyclic quiver algebra on 2-3 vertices with at most
/// three arrows (multiplicities allowed). Acyclic, so always admissible and
/// finite dimensional.
pub fn random_acyclic_algebra(seed: u64) -> Arc<Algebra> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n: usize = rng.gen_range(2..=3);
    let mut lines = format!("algebra rand{seed}\nvertices");
    for v in 1..=n {
        lines.push_str(&format!(" {v}"));
    }
    lines.push('\n');
    let mut label = 0usize;
    let mut arrow_budget = 3usize;
    for i in 1..n {
        for j in (i + 1)..=n {
            if arrow_budget == 0 {
                break;
            }
            let mult = rng.gen_range(0..=arrow_budget.min(2));
            for _ in 0..mult {
                lines.push_str(&format!("arrow a{label} : {i} -> {j}\n"));
                label += 1;
                arrow_budget -= 1;
            }
        }
    }
    if label == 0 {
        lines.push_str("arrow a0 : 1 -> 2\n");
    }
    Arc::new(parse_algebra(&lines).expect("generated algebra is admissible"))
}

/// A seeded random orientation of the A3 line quiver: representation
/// finite, so its exchange graph is finite and complete.
pub fn random_line_algebra(seed: u64) -> Arc<Algebra> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut lines = String::from("algebra line\nvertices 1 2 3\n");
    for (k, pair) in [(1usize, 2usize), (2, 3)].iter().enumerate() {
        let (s, t) = if rng.gen_bool(0.5) { (pair.0, pair.1) } else { (pair.1, pair.0) };
        lines.push_str(&format!("arrow a{k} : {s} -> {t}\n"));
    }
    Arc::new(parse_algebra(&lines).expect("line quiver is admissible"))
}

/// A random representation with vertex dimensions at most `max_dim` and
/// small integer matrix entries. Only valid for relation-free algebras.
pub fn random_module(alg: &Arc<Algebra>, max_dim: usize, rng: &mut ChaCha8Rng) -> Representation {
    let n = alg.n();
    let dims: Vec<usize> = (0..n).map(|_| rng.gen_range(0..=max_dim)).collect();
    let maps: Vec<RatMat> = alg
        .quiver
        .arrows
        .iter()
        .map(|a| {
            let (r, c) = (dims[a.target], dims[a.source]);
            let mut m = RatMat::zero(r, c);
            for i in 0..r {
                for j in 0..c {
                    *m.at_mut(i, j) = rat(rng.gen_range(-2..=2));
                }
            }
            m
        })
        .collect();
    let rep = Representation { alg: alg.clone(), dims, maps };
    debug_assert!(rep.check());
    rep
}
