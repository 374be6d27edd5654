//! Minimal projective presentations, g-vectors, and the AR translate.
//!
//! tau(M) is computed as the kernel of the Nakayama functor applied to a
//! minimal presentation P1 -> P0 -> M -> 0; the Nakayama image of P(i) is
//! the injective at i, and the induced maps come from right multiplication
//! in the algebra, transposed.

use super::{injective, kernel, projective, Morphism, Representation};
use crate::algebra::Coords;
use crate::linalg::{Rat, RatMat};
use num_traits::{One, Zero};
use std::sync::Arc;

#[derive(Debug, Clone)]
pub struct Presentation {
    /// Multiplicity of P(i) in P0 (resp. P1), per vertex.
    pub p0_mults: Vec<usize>,
    pub p1_mults: Vec<usize>,
    pub p0: Representation,
    pub p1: Representation,
    /// The presentation map P1 -> P0.
    pub map: Morphism,
    /// The cover P0 -> M.
    pub cover: Morphism,
}

/// A projective cover of M: the sum of P(i)^{t_i} with t the top dimensions,
/// mapping onto M through chosen top representatives.
fn projective_cover(m: &Representation) -> (Vec<usize>, Representation, Morphism) {
    let alg = &m.alg;
    let n = alg.n();
    let rad = m.radical_bases();
    let mut summand_vertices: Vec<usize> = Vec::new();
    let mut generators: Vec<RatMat> = Vec::new(); // column vector in M_i per summand
    for i in 0..n {
        // complete the radical basis at i with standard vectors; each extra
        // vector generates one P(i) summand of the cover
        let mut full = rad[i].clone();
        for e in 0..m.dims[i] {
            if full.cols == m.dims[i] {
                break;
            }
            let mut col = RatMat::zero(m.dims[i], 1);
            *col.at_mut(e, 0) = Rat::one();
            let cand = full.hstack(&col);
            if cand.clone().rank() == cand.cols {
                full = cand;
                summand_vertices.push(i);
                generators.push(col);
            }
        }
    }
    if summand_vertices.is_empty() {
        let z = Representation::zero(alg);
        let f = Morphism::zero(&z, m);
        return (vec![0; n], z, f);
    }
    let projs: Vec<Representation> =
        summand_vertices.iter().map(|&i| projective(alg, i)).collect();
    let refs: Vec<&Representation> = projs.iter().collect();
    let p0 = Representation::direct_sum(&refs);
    // block at vertex j for summand at vertex i with generator x:
    // column for basis path p (i -> j) is M_p * x
    let blocks = (0..n)
        .map(|j| {
            let mut blk = RatMat::zero(m.dims[j], 0);
            for (k, &i) in summand_vertices.iter().enumerate() {
                for &b in &alg.basis_by_pair[i][j] {
                    let col = m.path_matrix(i, &alg.basis[b].arrows).mul(&generators[k]);
                    blk = blk.hstack(&col);
                }
            }
            blk
        })
        .collect();
    let cover = Morphism { blocks };
    debug_assert!(cover.check(&p0, m));
    let mut mults = vec![0usize; n];
    for &i in &summand_vertices {
        mults[i] += 1;
    }
    (mults, p0, cover)
}

pub fn min_projective_presentation(m: &Representation) -> Presentation {
    let (p0_mults, p0, cover) = projective_cover(m);
    let (k, incl) = kernel(&cover, &p0);
    let (p1_mults, p1, kcover) = projective_cover(&k);
    let map = incl.compose(&kcover);
    debug_assert!(map.check(&p1, &p0));
    Presentation { p0_mults, p1_mults, p0, p1, map, cover }
}

/// g-vector of a module: multiplicities in P0 minus multiplicities in P1.
pub fn g_vector(m: &Representation) -> Vec<i64> {
    let pres = min_projective_presentation(m);
    pres.p0_mults
        .iter()
        .zip(&pres.p1_mults)
        .map(|(&a, &b)| a as i64 - b as i64)
        .collect()
}

/// g-vector of a pair (M, P) with P = sum of P(i) over `proj_vertices`:
/// g(M) minus the unit vectors of the shifted projectives.
pub fn g_vector_of_pair(m: &Representation, proj_vertices: &[usize]) -> Vec<i64> {
    let mut g = if m.is_zero() { vec![0; m.alg.n()] } else { g_vector(m) };
    for &v in proj_vertices {
        g[v] -= 1;
    }
    g
}

/// The AR translate. Zero exactly when M is projective.
pub fn tau(m: &Representation) -> Representation {
    let alg: &Arc<_> = &m.alg;
    let n = alg.n();
    let pres = min_projective_presentation(m);
    let p1_verts: Vec<usize> = vertices_of(&pres.p1_mults);
    let p0_verts: Vec<usize> = vertices_of(&pres.p0_mults);
    if p1_verts.is_empty() {
        return Representation::zero(alg);
    }

    let i1_parts: Vec<Representation> = p1_verts.iter().map(|&j| injective(alg, j)).collect();
    let i0_parts: Vec<Representation> = p0_verts.iter().map(|&i| injective(alg, i)).collect();
    let i1 = Representation::direct_sum(&i1_parts.iter().collect::<Vec<_>>());
    let i0 = if i0_parts.is_empty() {
        Representation::zero(alg)
    } else {
        Representation::direct_sum(&i0_parts.iter().collect::<Vec<_>>())
    };

    // vertexwise offsets of each summand inside the direct sums
    let offsets = |verts: &[usize], dims_of: &dyn Fn(usize) -> Vec<usize>| -> Vec<Vec<usize>> {
        let mut out = Vec::with_capacity(verts.len());
        let mut acc = vec![0usize; n];
        for &v in verts {
            out.push(acc.clone());
            let d = dims_of(v);
            for u in 0..n {
                acc[u] += d[u];
            }
        }
        out
    };
    let proj_dims = |i: usize| (0..n).map(|j| alg.basis_by_pair[i][j].len()).collect::<Vec<_>>();
    let inj_dims = |i: usize| (0..n).map(|j| alg.basis_by_pair[j][i].len()).collect::<Vec<_>>();
    let p0_off = offsets(&p0_verts, &proj_dims);
    let p1_off = offsets(&p1_verts, &proj_dims);
    let i0_off = offsets(&p0_verts, &inj_dims);
    let i1_off = offsets(&p1_verts, &inj_dims);

    let mut blocks: Vec<RatMat> =
        (0..n).map(|v| RatMat::zero(i0.dims[v], i1.dims[v])).collect();
    for (s, &j) in p1_verts.iter().enumerate() {
        // the component out of summand s is read off the image of the
        // trivial path of P(j)
        let triv_pos = alg.basis_by_pair[j][j]
            .binary_search(&alg.trivial_index(j))
            .expect("trivial path is a basis element");
        let col = p1_off[s][j] + triv_pos;
        for (r, &i) in p0_verts.iter().enumerate() {
            let pair = &alg.basis_by_pair[i][j];
            let w: Coords = pair
                .iter()
                .enumerate()
                .filter_map(|(k, &b)| {
                    let c = pres.map.blocks[j].at(p0_off[r][j] + k, col);
                    if c.is_zero() {
                        None
                    } else {
                        Some((b, c.clone()))
                    }
                })
                .collect();
            if w.is_empty() {
                continue;
            }
            // Nakayama block at vertex v: transpose of right multiplication
            // by w, paths v->i  ->  paths v->j
            for v in 0..n {
                let rows_i = &alg.basis_by_pair[v][i];
                let cols_j = &alg.basis_by_pair[v][j];
                for (qi, &q) in rows_i.iter().enumerate() {
                    for (b, c) in &w {
                        for (bk, ck) in alg.mult_basis(q, *b) {
                            let pos = cols_j
                                .binary_search(&bk)
                                .expect("product stays in pair span");
                            let e = blocks[v].at_mut(i0_off[r][v] + qi, i1_off[s][v] + pos);
                            *e += c * &ck;
                        }
                    }
                }
            }
        }
    }
    let nu_map = Morphism { blocks };
    debug_assert!(nu_map.check(&i1, &i0));
    let (t, _) = kernel(&nu_map, &i1);
    t
}

fn vertices_of(mults: &[usize]) -> Vec<usize> {
    let mut out = Vec::new();
    for (v, &k) in mults.iter().enumerate() {
        for _ in 0..k {
            out.push(v);
        }
    }
    out
}
