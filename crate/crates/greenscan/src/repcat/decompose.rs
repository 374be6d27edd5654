//! Direct sum decomposition via Fitting's lemma.
//!
//! Candidate endomorphisms (hom-basis elements, pairwise sums, and seeded
//! pseudo-random combinations) are raised to a high power; a nontrivial
//! eventual kernel splits the module. If no candidate splits and the
//! endomorphism ring modulo its radical is one-dimensional, the module is
//! certified indecomposable; otherwise the summand is kept whole and
//! flagged, so callers can report the splitting failure honestly.

use super::{hom_basis, image, is_isomorphic, kernel, Morphism, Representation};
use crate::linalg::{rat, Rat, RatMat};
use num_traits::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub const DECOMP_SEED: u64 = 0xA17;

#[derive(Debug, Clone)]
pub struct DecompSummand {
    pub rep: Representation,
    pub multiplicity: usize,
    /// True when the summand is certified indecomposable (local
    /// endomorphism ring).
    pub certified: bool,
}

#[derive(Debug, Clone)]
pub struct Decomposition {
    pub summands: Vec<DecompSummand>,
    /// True when every summand is certified indecomposable.
    pub certified: bool,
}

impl Decomposition {
    pub fn total_summands(&self) -> usize {
        self.summands.iter().map(|s| s.multiplicity).sum()
    }
}

/// Trace form on the endomorphism algebra: in characteristic zero its
/// radical is the Jacobson radical, so rank(Gram) = dim End / rad End.
fn end_semisimple_rank(endos: &[Morphism]) -> usize {
    let k = endos.len();
    let mut gram = RatMat::zero(k, k);
    for i in 0..k {
        for j in i..k {
            // tr(AB) = sum_{r,c} A_rc * B_cr, no need for the full product
            let mut tr = Rat::zero();
            for (a, b) in endos[i].blocks.iter().zip(&endos[j].blocks) {
                for r in 0..a.rows {
                    for c in 0..a.cols {
                        let x = a.at(r, c);
                        if !x.is_zero() {
                            tr += x * b.at(c, r);
                        }
                    }
                }
            }
            *gram.at_mut(j, i) = tr.clone();
            *gram.at_mut(i, j) = tr;
        }
    }
    gram.rank()
}

fn eventual_kernel_split(
    f: &Morphism,
    x: &Representation,
) -> Option<(Representation, Representation)> {
    let n = x.total_dim();
    let rank_of = |m: &Morphism| -> usize { m.blocks.iter().map(|b| b.clone().rank()).sum() };
    // f^n has X = ker f^n (+) im f^n; square until the rank stabilizes,
    // which happens long before the n-th power in practice. Invertible and
    // nilpotent candidates are dismissed without powering at all.
    let mut p = f.clone();
    let mut rank = rank_of(&p);
    if rank == n || rank == 0 {
        return None;
    }
    loop {
        let q = p.compose(&p);
        let qr = rank_of(&q);
        if qr == rank {
            break;
        }
        p = q;
        rank = qr;
        if rank == 0 {
            return None;
        }
    }
    let (k, _) = kernel(&p, x);
    if k.is_zero() || k.total_dim() == x.total_dim() {
        return None;
    }
    let (im, _) = image(&p, x);
    if k.total_dim() + im.total_dim() != x.total_dim() {
        return None;
    }
    Some((k, im))
}

fn split_once(x: &Representation, endos: &[Morphism]) -> Option<(Representation, Representation)> {
    for f in endos {
        if let Some(split) = eventual_kernel_split(f, x) {
            return Some(split);
        }
    }
    for i in 0..endos.len() {
        for j in (i + 1)..endos.len() {
            let f = endos[i].add(&endos[j]);
            if let Some(split) = eventual_kernel_split(&f, x) {
                return Some(split);
            }
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(DECOMP_SEED);
    for _ in 0..96 {
        let mut f = Morphism::zero(x, x);
        for g in endos {
            f = f.add(&g.scale(&rat(rng.gen_range(-5i64..=5))));
        }
        if let Some(split) = eventual_kernel_split(&f, x) {
            return Some(split);
        }
    }
    None
}

fn atoms(x: &Representation, out: &mut Vec<(Representation, bool)>) {
    if x.is_zero() {
        return;
    }
    let endos = hom_basis(x, x);
    if endos.len() == 1 {
        out.push((x.clone(), true));
        return;
    }
    if let Some((a, b)) = split_once(x, &endos) {
        atoms(&a, out);
        atoms(&b, out);
        return;
    }
    // no split found: a local endomorphism ring certifies indecomposability
    out.push((x.clone(), end_semisimple_rank(&endos) == 1));
}

/// Decompose into indecomposable summands, grouped up to isomorphism.
pub fn decompose(x: &Representation) -> Decomposition {
    let mut raw: Vec<(Representation, bool)> = Vec::new();
    atoms(x, &mut raw);
    // deterministic order: by dimension vector, then keep first-seen order
    raw.sort_by(|a, b| {
        a.0.total_dim()
            .cmp(&b.0.total_dim())
            .then_with(|| a.0.dims.cmp(&b.0.dims))
    });
    let mut summands: Vec<DecompSummand> = Vec::new();
    'outer: for (rep, certified) in raw {
        for s in &mut summands {
            if s.rep.dims == rep.dims && is_isomorphic(&s.rep, &rep) {
                s.multiplicity += 1;
                continue 'outer;
            }
        }
        summands.push(DecompSummand { rep, multiplicity: 1, certified });
    }
    let certified = summands.iter().all(|s| s.certified);
    Decomposition { summands, certified }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{parse_algebra, presets, Algebra};
    use crate::repcat::projective;
    use std::sync::Arc;

    fn a2() -> Arc<Algebra> {
        Arc::new(parse_algebra(presets::A2).unwrap())
    }

    #[test]
    fn simple_is_certified_indecomposable() {
        let alg = a2();
        let s = Representation::simple(&alg, 0);
        let d = decompose(&s);
        assert!(d.certified);
        assert_eq!(d.total_summands(), 1);
    }

    #[test]
    fn sum_of_distinct_projectives_splits() {
        let alg = a2();
        let p1 = projective(&alg, 0);
        let p2 = projective(&alg, 1);
        let x = Representation::direct_sum(&[&p1, &p2]);
        let d = decompose(&x);
        assert!(d.certified);
        assert_eq!(d.summands.len(), 2);
        assert!(d.summands.iter().all(|s| s.multiplicity == 1));
    }

    #[test]
    fn multiplicities_are_grouped() {
        let alg = a2();
        let s2 = Representation::simple(&alg, 1);
        let p1 = projective(&alg, 0);
        let x = Representation::direct_sum(&[&s2, &p1, &s2, &s2]);
        let d = decompose(&x);
        assert!(d.certified);
        assert_eq!(d.summands.len(), 2);
        let m: Vec<usize> = d.summands.iter().map(|s| s.multiplicity).collect();
        assert_eq!(m, vec![3, 1]);
    }

    #[test]
    fn kronecker_regular_module_is_indecomposable() {
        // the regular representation with maps [1], [0] is indecomposable
        // with a one-dimensional endomorphism ring quotient
        let alg = Arc::new(parse_algebra(presets::KRONECKER).unwrap());
        let x = Representation {
            alg: alg.clone(),
            dims: vec![1, 1],
            maps: vec![RatMat::from_i64(vec![vec![1]]), RatMat::from_i64(vec![vec![0]])],
        };
        assert!(x.check());
        let d = decompose(&x);
        assert_eq!(d.total_summands(), 1);
        assert!(d.certified);
    }

    #[test]
    fn kronecker_sum_of_two_regulars_splits() {
        let alg = Arc::new(parse_algebra(presets::KRONECKER).unwrap());
        let mk = |lambda: i64| Representation {
            alg: alg.clone(),
            dims: vec![1, 1],
            maps: vec![
                RatMat::from_i64(vec![vec![1]]),
                RatMat::from_i64(vec![vec![lambda]]),
            ],
        };
        let x = Representation::direct_sum(&[&mk(0), &mk(1)]);
        let d = decompose(&x);
        assert_eq!(d.total_summands(), 2);
        assert_eq!(d.summands.len(), 2);
    }
}
