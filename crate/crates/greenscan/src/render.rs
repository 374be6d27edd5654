//! Deterministic SVG pictures of the wall-and-chamber structure and DOT
//! output for exchange graphs (the latter lives on `ExchangeGraph`).
//!
//! Rank 2 draws walls as rays from the origin; rank 3 projects along
//! (1,1,1) and draws each wall as a translucent sector. All coordinates
//! are computed with exact rationals and printed with a fixed number of
//! decimal places, so the output is byte-stable.

use crate::algebra::Algebra;
use crate::chamber::{wall_certificate, Cone};
use crate::linalg::{rat, rat_frac, sign, Rat};
use crate::tautilt::ExchangeGraph;
use num_bigint::BigInt;
use num_traits::{Signed, Zero};
use std::fmt::Write as _;
use std::sync::Arc;

const VIEW: &str = "-1.5 -1.5 3 3";
const SIZE: u32 = 800;
const CLIP: i64 = 3; // numerator of 3/2 clip radius

/// Fixed-point decimal rendering of a rational, truncated toward zero.
pub fn rat_dec(r: &Rat, places: u32) -> String {
    let scale = BigInt::from(10u32).pow(places);
    let scaled = (r.numer() * &scale) / r.denom();
    let neg = scaled.is_negative();
    let abs = scaled.abs();
    let int = &abs / &scale;
    let frac = &abs % &scale;
    let mut s = format!("{int}.{frac:0width$}", width = places as usize);
    if neg && (!abs.is_zero()) {
        s.insert(0, '-');
    }
    s
}

/// Scale a direction so its sup-norm is the clip radius 3/2.
fn clip_ray(dir: &[Rat]) -> Vec<Rat> {
    let norm = dir
        .iter()
        .map(|x| if sign(x) == -1 { -x } else { x.clone() })
        .max()
        .expect("nonempty direction");
    assert!(!norm.is_zero(), "zero ray direction");
    let factor = rat_frac(CLIP, 2) / norm;
    dir.iter().map(|x| x * &factor).collect()
}

fn svg_header(out: &mut String) {
    let _ = writeln!(
        out,
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{SIZE}\" height=\"{SIZE}\" \
         viewBox=\"{VIEW}\">"
    );
    // y up, origin centered
    out.push_str("<g transform=\"scale(1,-1)\">\n");
    out.push_str(
        "<rect x=\"-1.5\" y=\"-1.5\" width=\"3\" height=\"3\" fill=\"white\"/>\n",
    );
    out.push_str(
        "<line x1=\"-1.5\" y1=\"0\" x2=\"1.5\" y2=\"0\" stroke=\"#dddddd\" stroke-width=\"0.01\"/>\n",
    );
    out.push_str(
        "<line x1=\"0\" y1=\"-1.5\" x2=\"0\" y2=\"1.5\" stroke=\"#dddddd\" stroke-width=\"0.01\"/>\n",
    );
}

fn svg_footer(out: &mut String) {
    out.push_str("</g>\n</svg>\n");
}

fn text(out: &mut String, x: &Rat, y: &Rat, label: &str) {
    // undo the flip locally so labels read upright
    let _ = writeln!(
        out,
        "<text transform=\"translate({},{}) scale(1,-1)\" font-size=\"0.07\" \
         font-family=\"monospace\" fill=\"#333333\">{label}</text>",
        rat_dec(x, 4),
        rat_dec(y, 4)
    );
}

fn dims_label(d: &[i64]) -> String {
    let parts: Vec<String> = d.iter().map(|x| x.to_string()).collect();
    format!("({})", parts.join(","))
}

/// Render the known part of the fan. Supported ranks: 2 (walls as rays)
/// and 3 (walls projected along (1,1,1) as sectors).
pub fn render_fan_svg(graph: &ExchangeGraph, alg: &Arc<Algebra>) -> Result<String, String> {
    match alg.n() {
        2 => Ok(render_rank2(graph, alg)),
        3 => Ok(render_rank3(graph, alg)),
        n => Err(format!("fan rendering supports rank 2 and 3, got rank {n}")),
    }
}

fn render_rank2(graph: &ExchangeGraph, alg: &Arc<Algebra>) -> String {
    let mut out = String::new();
    svg_header(&mut out);
    // chamber labels at scaled barycenters
    for node in &graph.nodes {
        let rays = Cone::of_pair(node, 2).rays;
        let bary: Vec<Rat> = (0..2)
            .map(|i| rays.iter().map(|r| rat(r[i])).sum::<Rat>())
            .collect();
        let pos = clip_ray(&bary);
        let half: Vec<Rat> = pos.iter().map(|x| x * rat_frac(3, 5)).collect();
        text(&mut out, &half[0], &half[1], &dims_label(&node.key(2).concat()));
    }
    // walls: one shared ray per edge
    for e in 0..graph.edges.len() {
        let w = wall_certificate(graph, e, alg);
        let end = clip_ray(&w.rays[0].iter().map(|&x| rat(x)).collect::<Vec<_>>());
        let _ = writeln!(
            out,
            "<line x1=\"0\" y1=\"0\" x2=\"{}\" y2=\"{}\" stroke=\"#c0392b\" stroke-width=\"0.015\"/>",
            rat_dec(&end[0], 4),
            rat_dec(&end[1], 4)
        );
        let lab: Vec<Rat> = end.iter().map(|x| x * rat_frac(21, 20)).collect();
        text(&mut out, &lab[0], &lab[1], &dims_label(&w.brick_dims));
    }
    svg_footer(&mut out);
    out
}

/// Projection along (1,1,1): v maps to ((2x - y - z)/3, (2y - x - z)/3).
fn project3(v: &[i64]) -> Vec<Rat> {
    vec![
        rat_frac(2 * v[0] - v[1] - v[2], 3),
        rat_frac(2 * v[1] - v[0] - v[2], 3),
    ]
}

fn render_rank3(graph: &ExchangeGraph, alg: &Arc<Algebra>) -> String {
    let mut out = String::new();
    svg_header(&mut out);
    for e in 0..graph.edges.len() {
        let w = wall_certificate(graph, e, alg);
        let mut pts: Vec<Vec<Rat>> = Vec::new();
        for r in &w.rays {
            let p = project3(r);
            if p.iter().all(|x| x.is_zero()) {
                continue;
            }
            pts.push(clip_ray(&p));
        }
        if pts.len() == 2 {
            let _ = writeln!(
                out,
                "<polygon points=\"0,0 {},{} {},{}\" fill=\"#c0392b\" fill-opacity=\"0.15\" \
                 stroke=\"#c0392b\" stroke-width=\"0.008\"/>",
                rat_dec(&pts[0][0], 4),
                rat_dec(&pts[0][1], 4),
                rat_dec(&pts[1][0], 4),
                rat_dec(&pts[1][1], 4)
            );
            let mid: Vec<Rat> = (0..2)
                .map(|i| (&pts[0][i] + &pts[1][i]) * rat_frac(1, 2))
                .collect();
            text(&mut out, &mid[0], &mid[1], &dims_label(&w.brick_dims));
        } else if pts.len() == 1 {
            let _ = writeln!(
                out,
                "<line x1=\"0\" y1=\"0\" x2=\"{}\" y2=\"{}\" stroke=\"#c0392b\" stroke-width=\"0.01\"/>",
                rat_dec(&pts[0][0], 4),
                rat_dec(&pts[0][1], 4)
            );
        }
    }
    svg_footer(&mut out);
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{parse_algebra, presets};
    use crate::tautilt::{exchange_graph, Budget};

    #[test]
    fn decimal_formatting() {
        assert_eq!(rat_dec(&rat_frac(3, 2), 4), "1.5000");
        assert_eq!(rat_dec(&rat_frac(-1, 3), 4), "-0.3333");
        assert_eq!(rat_dec(&rat(0), 4), "0.0000");
        assert_eq!(rat_dec(&rat_frac(1, 7), 6), "0.142857");
    }

    #[test]
    fn a2_svg_is_stable_and_complete() {
        let alg = std::sync::Arc::new(parse_algebra(presets::A2).unwrap());
        let g = exchange_graph(&alg, &Budget::default());
        let svg1 = render_fan_svg(&g, &alg).unwrap();
        let svg2 = render_fan_svg(&g, &alg).unwrap();
        assert_eq!(svg1, svg2);
        assert!(svg1.starts_with("<svg"));
        assert!(svg1.contains("viewBox=\"-1.5 -1.5 3 3\""));
        // one wall line per edge plus the two axes
        assert_eq!(svg1.matches("<line").count(), 2 + g.edges.len());
    }

    #[test]
    fn markov_bounded_fan_renders() {
        let alg = std::sync::Arc::new(parse_algebra(presets::MARKOV).unwrap());
        let budget = Budget { dim_bound: 4, node_cap: 30, ..Budget::default() };
        let g = exchange_graph(&alg, &budget);
        let svg = render_fan_svg(&g, &alg).unwrap();
        assert!(svg.contains("<polygon") || svg.contains("<line"));
    }
}
