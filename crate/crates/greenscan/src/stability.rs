//! Stability data and Harder-Narasimhan filtrations.
//!
//! Two kinds of stability are supported: linear weights in the sense of
//! King (classification against a covector theta, used for walls and
//! chambers) and central charges Z = (a, b) with b positive on dimension
//! vectors, whose phases are compared exactly through cross products --
//! no floating point ever enters the ordering.

use crate::linalg::{dot_int, sign, Rat};
use crate::repcat::{
    cokernel, hom_dim, is_isomorphic, sub_from_bases, submodules, tau, Representation,
};
use num_traits::Zero;
use std::cmp::Ordering;

/// Why an extraction was refused rather than answered.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Refusal {
    NotDiscrete(String),
    BoundExhausted(String),
    NotGreenPath(String),
}

impl Refusal {
    pub fn code(&self) -> &'static str {
        match self {
            Refusal::NotDiscrete(_) => "NOT_DISCRETE",
            Refusal::BoundExhausted(_) => "BOUND_EXHAUSTED",
            Refusal::NotGreenPath(_) => "NOT_GREEN_PATH",
        }
    }

    pub fn detail(&self) -> &str {
        match self {
            Refusal::NotDiscrete(s) | Refusal::BoundExhausted(s) | Refusal::NotGreenPath(s) => s,
        }
    }
}

/// An exactly comparable phase. `Arg` is the argument of a point in the
/// open upper half plane (ordered counterclockwise, so larger angle =
/// larger phase); `Time` is a plain rational with its usual order.
#[derive(Debug, Clone)]
pub enum PhaseValue {
    Arg { x: Rat, y: Rat },
    Time(Rat),
}

// equality must agree with the ordering: proportional charge values have
// the same argument, so (-2, 1) and (-4, 2) are the same phase
impl PartialEq for PhaseValue {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}

impl Eq for PhaseValue {}

impl PartialOrd for PhaseValue {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for PhaseValue {
    fn cmp(&self, other: &Self) -> Ordering {
        match (self, other) {
            (PhaseValue::Arg { x: x1, y: y1 }, PhaseValue::Arg { x: x2, y: y2 }) => {
                // both in the upper half plane: angle(v1) < angle(v2) iff
                // the cross product x1*y2 - y1*x2 is positive
                let cross = x1 * y2 - y1 * x2;
                match sign(&cross) {
                    1 => Ordering::Less,
                    -1 => Ordering::Greater,
                    _ => Ordering::Equal,
                }
            }
            (PhaseValue::Time(a), PhaseValue::Time(b)) => a.cmp(b),
            _ => panic!("cannot compare phases of different stability kinds"),
        }
    }
}

#[derive(Debug, Clone)]
pub struct CentralCharge {
    pub a: Vec<Rat>,
    pub b: Vec<Rat>,
}

#[derive(Debug, Clone)]
pub enum StabilitySpec {
    /// Z(M) = (a . dim M, b . dim M), with b . dim M > 0 for nonzero M.
    Charge(CentralCharge),
    /// Slope theta . dim M / total dim M.
    Slope(Vec<Rat>),
}

impl StabilitySpec {
    /// Phase of a nonzero dimension vector. Panics on the zero vector or
    /// when the charge leaves the upper half plane.
    pub fn phase(&self, dims: &[i64]) -> PhaseValue {
        debug_assert!(dims.iter().any(|&d| d != 0));
        match self {
            StabilitySpec::Charge(z) => {
                let x = dot_int(&z.a, dims);
                let y = dot_int(&z.b, dims);
                assert!(
                    sign(&y) == 1,
                    "central charge must send nonzero modules to the upper half plane"
                );
                PhaseValue::Arg { x, y }
            }
            StabilitySpec::Slope(theta) => {
                let total: i64 = dims.iter().sum();
                PhaseValue::Time(dot_int(theta, dims) / Rat::from_integer(total.into()))
            }
        }
    }
}

// ---------------------------------------------------------------------------
// classification against a linear weight (King)
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ThetaStatus {
    Stable,
    StrictlySemistable,
    Unstable,
}

#[derive(Debug, Clone)]
pub struct ThetaClass {
    pub status: ThetaStatus,
    /// Dimension vector of a witness submodule violating (or saturating)
    /// the defining inequalities, when one exists.
    pub witness: Option<Vec<i64>>,
    /// False when the submodule enumeration could not be certified, in
    /// which case `Stable`/`StrictlySemistable` verdicts are provisional.
    pub certified: bool,
}

/// King classification: M is theta-semistable when theta(M) = 0 and
/// theta(L) <= 0 for every submodule L, stable when the inequality is
/// strict for proper nonzero L.
pub fn theta_classify(theta: &[Rat], m: &Representation) -> ThetaClass {
    let d = m.dim_vector();
    if m.is_zero() {
        return ThetaClass { status: ThetaStatus::StrictlySemistable, witness: None, certified: true };
    }
    if !dot_int(theta, &d).is_zero() {
        return ThetaClass { status: ThetaStatus::Unstable, witness: Some(d), certified: true };
    }
    let set = submodules(m);
    let mut strict = true;
    let mut saturating: Option<Vec<i64>> = None;
    for k in 0..set.subs.len() {
        let sdims = set.dims_of(k);
        let total: usize = sdims.iter().sum();
        if total == 0 || total == m.total_dim() {
            continue;
        }
        let sd: Vec<i64> = sdims.iter().map(|&x| x as i64).collect();
        match sign(&dot_int(theta, &sd)) {
            1 => {
                return ThetaClass {
                    status: ThetaStatus::Unstable,
                    witness: Some(sd),
                    certified: set.complete,
                }
            }
            0 => {
                strict = false;
                saturating = Some(sd);
            }
            _ => {}
        }
    }
    ThetaClass {
        status: if strict { ThetaStatus::Stable } else { ThetaStatus::StrictlySemistable },
        witness: saturating,
        certified: set.complete,
    }
}

// ---------------------------------------------------------------------------
// Harder-Narasimhan
// ---------------------------------------------------------------------------

#[derive(Debug, Clone)]
pub struct HnFiltration {
    /// Semistable factors, phases strictly decreasing.
    pub factors: Vec<Representation>,
    pub phases: Vec<PhaseValue>,
    /// False when any submodule enumeration along the way was uncertified.
    pub certified: bool,
}

/// The maximal destabilizing subobject: the largest submodule of maximal
/// phase. Returns the subobject and its phase (None for the zero module).
pub fn max_destab_subobject(
    spec: &StabilitySpec,
    m: &Representation,
) -> Option<(Representation, PhaseValue, bool)> {
    if m.is_zero() {
        return None;
    }
    let set = submodules(m);
    let mut best: Option<(usize, PhaseValue, usize)> = None; // (index, phase, total dim)
    for k in 0..set.subs.len() {
        let sdims = set.dims_of(k);
        let total: usize = sdims.iter().sum();
        if total == 0 {
            continue;
        }
        let d: Vec<i64> = sdims.iter().map(|&x| x as i64).collect();
        let ph = spec.phase(&d);
        let better = match &best {
            None => true,
            Some((_, bp, bt)) => ph > *bp || (ph == *bp && total > *bt),
        };
        if better {
            best = Some((k, ph, total));
        }
    }
    let (k, ph, _) = best.unwrap();
    let (sub, _) = sub_from_bases(m, &set.subs[k]);
    Some((sub, ph, set.complete))
}

pub fn hn_filtration(spec: &StabilitySpec, m: &Representation) -> HnFiltration {
    let mut factors = Vec::new();
    let mut phases = Vec::new();
    let mut certified = true;
    let mut cur = m.clone();
    while !cur.is_zero() {
        let set = submodules(&cur);
        certified &= set.complete;
        let mut best: Option<(usize, PhaseValue, usize)> = None;
        for k in 0..set.subs.len() {
            let sdims = set.dims_of(k);
            let total: usize = sdims.iter().sum();
            if total == 0 {
                continue;
            }
            let d: Vec<i64> = sdims.iter().map(|&x| x as i64).collect();
            let ph = spec.phase(&d);
            let better = match &best {
                None => true,
                Some((_, bp, bt)) => ph > *bp || (ph == *bp && total > *bt),
            };
            if better {
                best = Some((k, ph, total));
            }
        }
        let (k, ph, _) = best.expect("nonzero module has nonzero submodules");
        let (sub, incl) = sub_from_bases(&cur, &set.subs[k]);
        factors.push(sub);
        phases.push(ph);
        let (quot, _) = cokernel(&incl, &cur);
        cur = quot;
    }
    // with an incomplete submodule sample the picked subobject may not be
    // the true maximal destabilizer, so only a certified run must be monotone
    debug_assert!(!certified || phases.windows(2).all(|w| w[0] > w[1]));
    HnFiltration { factors, phases, certified }
}

/// The minimal destabilizing quotient: the last HN factor.
pub fn max_destab_quotient(
    spec: &StabilitySpec,
    m: &Representation,
) -> Option<(Representation, PhaseValue, bool)> {
    let hn = hn_filtration(spec, m);
    let ph = hn.phases.last()?.clone();
    Some((hn.factors.last().cloned().unwrap(), ph, hn.certified))
}

/// Stable factors of a semistable module: split off a minimal equal-phase
/// submodule (necessarily stable) and recurse on the quotient.
pub fn stable_factors(spec: &StabilitySpec, m: &Representation) -> (Vec<Representation>, bool) {
    let mut out = Vec::new();
    let mut certified = true;
    let mut cur = m.clone();
    while !cur.is_zero() {
        let phase = spec.phase(&cur.dim_vector());
        let set = submodules(&cur);
        certified &= set.complete;
        let mut best: Option<(usize, usize)> = None; // (index, total dim)
        for k in 0..set.subs.len() {
            let sdims = set.dims_of(k);
            let total: usize = sdims.iter().sum();
            if total == 0 {
                continue;
            }
            let d: Vec<i64> = sdims.iter().map(|&x| x as i64).collect();
            if spec.phase(&d) != phase {
                continue;
            }
            if best.map_or(true, |(_, bt)| total < bt) {
                best = Some((k, total));
            }
        }
        let (k, _) = best.expect("semistable module has an equal-phase submodule");
        let (sub, incl) = sub_from_bases(&cur, &set.subs[k]);
        out.push(sub);
        let (quot, _) = cokernel(&incl, &cur);
        cur = quot;
    }
    (out, certified)
}

/// Membership in the torsion class at phase p: every quotient of M has
/// phase >= p, i.e. the minimal destabilizing quotient does.
pub fn in_torsion_class(spec: &StabilitySpec, p: &PhaseValue, m: &Representation) -> bool {
    match max_destab_quotient(spec, m) {
        None => true,
        Some((_, ph, _)) => ph >= *p,
    }
}

/// Membership in the torsion-free class at phase p: every submodule of M
/// has phase < p.
pub fn in_torsion_free(spec: &StabilitySpec, p: &PhaseValue, m: &Representation) -> bool {
    match max_destab_subobject(spec, m) {
        None => true,
        Some((_, ph, _)) => ph < *p,
    }
}

// ---------------------------------------------------------------------------
// maximal green sequence extraction
// ---------------------------------------------------------------------------

#[derive(Debug, Clone)]
pub struct GreenChain {
    /// Bricks in wall-crossing order: phases strictly decreasing, so the
    /// associated torsion classes grow from {0} to the whole category.
    pub bricks: Vec<Representation>,
    pub phases: Vec<PhaseValue>,
}

/// Extract the maximal green sequence induced by a discrete stability
/// datum, given the list of stable modules (one per isomorphism class).
pub fn extract_mgs(
    spec: &StabilitySpec,
    stables: &[Representation],
) -> Result<GreenChain, Refusal> {
    let mut items: Vec<(PhaseValue, &Representation)> =
        stables.iter().map(|s| (spec.phase(&s.dim_vector()), s)).collect();
    items.sort_by(|a, b| b.0.cmp(&a.0));
    for w in items.windows(2) {
        if w[0].0 == w[1].0 && !is_isomorphic(w[0].1, w[1].1) {
            return Err(Refusal::NotDiscrete(format!(
                "stable modules with dimension vectors {:?} and {:?} share a phase",
                w[0].1.dim_vector(),
                w[1].1.dim_vector()
            )));
        }
    }
    if let Some(first) = stables.first() {
        let n = first.alg.n();
        for v in 0..n {
            if !stables.iter().any(|s| s.dims[v] > 0) {
                return Err(Refusal::BoundExhausted(format!(
                    "no stable module is supported at vertex {}; the chain cannot reach the whole category",
                    first.alg.quiver.vertices[v]
                )));
            }
        }
    }
    let (phases, bricks): (Vec<_>, Vec<_>) =
        items.into_iter().map(|(p, s)| (p, s.clone())).unzip();
    Ok(GreenChain { bricks, phases })
}

impl GreenChain {
    /// Torsion snapshot at step k: the stables crossed so far (phases above
    /// the k-th), which generate the torsion class after k wall crossings.
    pub fn snapshot(&self, k: usize) -> &[Representation] {
        &self.bricks[..k]
    }
}

// ---------------------------------------------------------------------------
// semistable category probe
// ---------------------------------------------------------------------------

#[derive(Debug, Clone)]
pub struct ProbeReport {
    pub agreed: bool,
    pub stable_count: usize,
    pub expected_stables: usize,
    /// Dimension vectors where the two descriptions disagreed.
    pub disagreements: Vec<Vec<i64>>,
}

/// Cross-checks the linear-weight description of the semistables against
/// the hom-orthogonality description attached to a support pair: for theta
/// in the cone of (M, P), a module N is semistable iff Hom(M, N) = 0,
/// Hom(N, tau M) = 0 and Hom(P, N) = 0.
pub fn semistable_category_probe(
    theta: &[Rat],
    m_summands: &[Representation],
    proj_vertices: &[usize],
    universe: &[Representation],
) -> ProbeReport {
    let mut disagreements = Vec::new();
    let mut stable_count = 0usize;
    let taus: Vec<Representation> = m_summands.iter().map(tau).collect();
    let projs: Vec<Representation> = proj_vertices
        .iter()
        .map(|&v| crate::repcat::projective(&universe[0].alg, v))
        .collect();
    for n in universe {
        let cls = theta_classify(theta, n);
        let by_theta = cls.status != ThetaStatus::Unstable;
        let by_hom = m_summands.iter().all(|m| hom_dim(m, n) == 0)
            && taus.iter().all(|t| hom_dim(n, t) == 0)
            && projs.iter().all(|p| hom_dim(p, n) == 0);
        if by_theta != by_hom {
            disagreements.push(n.dim_vector());
        }
        if cls.status == ThetaStatus::Stable {
            stable_count += 1;
        }
    }
    let expected = universe
        .first()
        .map(|u| u.alg.n())
        .unwrap_or(0)
        .saturating_sub(m_summands.len() + proj_vertices.len());
    ProbeReport {
        agreed: disagreements.is_empty(),
        stable_count,
        expected_stables: expected,
        disagreements,
    }
}
