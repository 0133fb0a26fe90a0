//! Parameters for `GL(n)`: segments, Reeder parameters, the bijection `mu`
//! from the extended quotient, the interpolation maps `i_s` and `pi_s`, and
//! base change.
//!
//! A segment `(z, m)` stands for `chi_z (x) tau(m)`. A fixed pair `(t, w)` with
//! `w` a product of cycles maps to one segment per cycle, centered at the
//! common value of `t` along that cycle.

pub mod fibers;
pub mod g2;
pub mod kl;

use std::collections::BTreeSet;
use std::fmt;

use serde::Serialize;
use thiserror::Error;

use crate::extquot::ExtendedQuotient;
use crate::torus::{act_unchecked, power_map, Coordinate, TorusError, TorusPoint, ValueGroup};
use crate::weyl::{PresetTag, WeylElement, WeylError, WeylGroup};

pub use fibers::{fiber_count, fiber_count_at, FiberCount, FiberWitness};
pub use kl::{kl_triple, KLTriple, LaurentPoly, QMode};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LanglandsError {
    #[error("operation needs a gl_n preset, got {0}")]
    NotGlN(String),
    #[error("({point}, w{w}) is not a fixed pair")]
    NotFixed { point: String, w: usize },
    #[error("q = {0} is not a perfect square >= 4; use symbolic q")]
    NotPerfectSquare(u64),
    #[error("bad segment list: {0}")]
    Parse(String),
    #[error("parameter has rank {actual}, group has rank {expected}")]
    RankMismatch { expected: usize, actual: usize },
    #[error("base change degree must be at least 1")]
    ZeroDegree,
    #[error(transparent)]
    Torus(#[from] TorusError),
    #[error(transparent)]
    Weyl(#[from] WeylError),
}

/// `chi_z (x) tau(m)`: center `z = chi(Frob)`, length `m >= 1`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
pub struct Segment {
    pub center: Coordinate,
    pub length: usize,
}

impl Segment {
    pub fn new(center: Coordinate, length: usize) -> Self {
        assert!(length >= 1, "segment length must be positive");
        Self { center, length }
    }

    /// `center * s^(m-1), center * s^(m-3), ..., center * s^-(m-1)`.
    pub fn weights(&self, s: &Coordinate) -> Vec<Coordinate> {
        let m = self.length as i64;
        (0..m)
            .map(|k| self.center.mul(&s.pow(m - 1 - 2 * k)))
            .collect()
    }
}

impl Ord for Segment {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        other
            .length
            .cmp(&self.length)
            .then_with(|| self.center.cmp(&other.center))
    }
}

impl PartialOrd for Segment {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Segment {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}", self.center, self.length)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub enum RhoLabel {
    #[default]
    Trivial,
    Sgn,
}

impl fmt::Display for RhoLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            RhoLabel::Trivial => "1",
            RhoLabel::Sgn => "sgn",
        })
    }
}

impl Serialize for RhoLabel {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

/// `(Phi, rho)` with `Phi` a multisegment. Segments are kept sorted by length
/// descending, then center.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct ReederParameter {
    pub segments: Vec<Segment>,
    pub rho: RhoLabel,
}

impl ReederParameter {
    pub fn new(mut segments: Vec<Segment>) -> Self {
        segments.sort();
        Self {
            segments,
            rho: RhoLabel::Trivial,
        }
    }

    pub fn with_rho(mut self, rho: RhoLabel) -> Self {
        self.rho = rho;
        self
    }

    pub fn rank(&self) -> usize {
        self.segments.iter().map(|s| s.length).sum()
    }

    /// Segment lengths, descending: the Jordan type of `Phi(1, u0)`.
    pub fn partition(&self) -> Vec<usize> {
        self.segments.iter().map(|s| s.length).collect()
    }

    /// Canonical text form, e.g. `z:2,y:1|1`.
    pub fn label(&self) -> String {
        format!("{self}")
    }
}

impl fmt::Display for ReederParameter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, s) in self.segments.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{s}")?;
        }
        write!(f, "|{}", self.rho)
    }
}

/// Parses `center:length,...`, e.g. `z:2,qh^2*y:1`. A missing `:length`
/// means length 1.
pub fn parse_segments(vg: &ValueGroup, text: &str) -> Result<ReederParameter, LanglandsError> {
    let mut segments = Vec::new();
    for item in text.split(',').map(str::trim) {
        if item.is_empty() {
            return Err(LanglandsError::Parse(format!("empty segment in {text:?}")));
        }
        let (c, m) = match item.rsplit_once(':') {
            Some((c, m)) => {
                let m: usize = m
                    .trim()
                    .parse()
                    .map_err(|_| LanglandsError::Parse(format!("bad length in {item:?}")))?;
                (c, m)
            }
            None => (item, 1),
        };
        if m == 0 {
            return Err(LanglandsError::Parse(format!("zero length in {item:?}")));
        }
        segments.push(Segment::new(vg.parse_coordinate(c)?, m));
    }
    Ok(ReederParameter::new(segments))
}

/// Jordan type attached to a cycle type.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct SpringerLabelA {
    pub partition: Vec<usize>,
}

impl SpringerLabelA {
    pub fn is_regular(&self) -> bool {
        self.partition.len() == 1
    }

    pub fn is_zero(&self) -> bool {
        self.partition.iter().all(|&p| p == 1)
    }
}

/// Cycle type `(n_1, ..., n_k)` goes to the nilpotent with Jordan blocks
/// `n_1, ..., n_k`.
pub fn springer_type_a(cycle_type: &[usize]) -> SpringerLabelA {
    let mut partition = cycle_type.to_vec();
    partition.sort_unstable_by(|a, b| b.cmp(a));
    SpringerLabelA { partition }
}

fn require_gl(group: &WeylGroup) -> Result<(), LanglandsError> {
    match group.preset_tag {
        PresetTag::GlN => Ok(()),
        other => Err(LanglandsError::NotGlN(other.to_string())),
    }
}

fn require_rank(group: &WeylGroup, n: usize) -> Result<(), LanglandsError> {
    if group.lattice_rank() != n {
        return Err(LanglandsError::RankMismatch {
            expected: group.lattice_rank(),
            actual: n,
        });
    }
    Ok(())
}

fn require_fixed(group: &WeylGroup, t: &TorusPoint, w: WeylElement) -> Result<(), LanglandsError> {
    require_rank(group, t.rank())?;
    if act_unchecked(group, w, t) != *t {
        return Err(LanglandsError::NotFixed {
            point: t.to_string(),
            w: w.0,
        });
    }
    Ok(())
}

/// `(t, w) -> ` one segment per cycle of `w`, centered at the value of `t`
/// on that cycle.
pub fn mu_map(group: &WeylGroup, t: &TorusPoint, w: WeylElement) -> Result<ReederParameter, LanglandsError> {
    require_gl(group)?;
    require_fixed(group, t, w)?;
    let segments = group
        .cycles(w)?
        .into_iter()
        .map(|c| Segment::new(t.coords()[c[0]].clone(), c.len()))
        .collect();
    Ok(ReederParameter::new(segments))
}

/// Canonical preimage of a parameter: segments laid out on consecutive
/// positions in canonical order, each as the cycle `i -> i+1 -> ... -> i`.
pub fn mu_inverse(group: &WeylGroup, p: &ReederParameter) -> Result<(TorusPoint, WeylElement), LanglandsError> {
    require_gl(group)?;
    require_rank(group, p.rank())?;
    let (coords, perm) = canonical_layout(p);
    let w = group
        .element_of_permutation(&perm)
        .ok_or_else(|| LanglandsError::NotGlN(group.preset_tag.to_string()))?;
    Ok((TorusPoint::new(coords), w))
}

/// Coordinates and permutation of the canonical preimage.
pub(crate) fn canonical_layout(p: &ReederParameter) -> (Vec<Coordinate>, Vec<usize>) {
    let mut coords = Vec::with_capacity(p.rank());
    let mut perm = Vec::with_capacity(p.rank());
    for seg in &p.segments {
        let start = coords.len();
        for j in 0..seg.length {
            coords.push(seg.center.clone());
            perm.push(start + (j + 1) % seg.length);
        }
    }
    (coords, perm)
}

/// Sorted coordinates: the canonical representative of a `W`-orbit in `T`
/// for `GL(n)`.
pub fn orbit_key(coords: impl IntoIterator<Item = Coordinate>) -> Vec<Coordinate> {
    let mut v: Vec<Coordinate> = coords.into_iter().collect();
    v.sort();
    v
}

/// `i_s`: the diagonal of `Phi(Frob, T_s)` as an orbit representative.
pub fn infinitesimal_character_i_s(p: &ReederParameter, s: &Coordinate) -> Vec<Coordinate> {
    orbit_key(p.segments.iter().flat_map(|seg| seg.weights(s)))
}

/// `pi_s(t, w) = t * gamma(T_s)`, with `gamma` attached to the cycle type of
/// `w`: along a cycle of length `m` the weights are `s^(m-1), ..., s^-(m-1)`.
pub fn pi_s(group: &WeylGroup, t: &TorusPoint, w: WeylElement, s: &Coordinate) -> Result<Vec<Coordinate>, LanglandsError> {
    require_gl(group)?;
    require_fixed(group, t, w)?;
    let mut out = t.coords().to_vec();
    for cycle in group.cycles(w)? {
        let m = cycle.len() as i64;
        for (k, &i) in cycle.iter().enumerate() {
            out[i] = out[i].mul(&s.pow(m - 1 - 2 * k as i64));
        }
    }
    Ok(orbit_key(out))
}

/// Raises every center to the `f`-th power.
pub fn base_change_param(p: &ReederParameter, f: u64) -> Result<ReederParameter, LanglandsError> {
    if f == 0 {
        return Err(LanglandsError::ZeroDegree);
    }
    let segments = p
        .segments
        .iter()
        .map(|s| Segment::new(s.center.pow(f as i64), s.length))
        .collect();
    Ok(ReederParameter::new(segments).with_rho(p.rho))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct BaseChangeViolation {
    pub point: String,
    pub w: usize,
    pub via_parameters: String,
    pub via_quotient: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct BaseChangeDiagramReport {
    pub degree: u64,
    pub checked: usize,
    pub violations: Vec<BaseChangeViolation>,
}

impl BaseChangeDiagramReport {
    pub fn commutes(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Checks `base_change_param(mu(t, w), f) = mu(t^f, w)` on each sample.
pub fn check_base_change_diagram(
    eq: &ExtendedQuotient,
    f: u64,
    samples: &[(TorusPoint, WeylElement)],
) -> Result<BaseChangeDiagramReport, LanglandsError> {
    if f == 0 {
        return Err(LanglandsError::ZeroDegree);
    }
    let group = eq.group();
    let mut violations = Vec::new();
    for (t, w) in samples {
        let left = base_change_param(&mu_map(group, t, *w)?, f)?;
        let right = mu_map(group, &power_map(t, f), *w)?;
        if left != right {
            violations.push(BaseChangeViolation {
                point: t.to_string(),
                w: w.0,
                via_parameters: left.label(),
                via_quotient: right.label(),
            });
        }
    }
    Ok(BaseChangeDiagramReport {
        degree: f,
        checked: samples.len(),
        violations,
    })
}

/// One generic point per irreducible component, paired with its stratum's
/// class representative.
pub fn generic_fixed_pairs(eq: &ExtendedQuotient) -> Vec<(TorusPoint, WeylElement)> {
    let mut out = Vec::new();
    for stratum in &eq.strata {
        for c in 0..stratum.irreducible_component_count {
            if let Some(t) = stratum.generic_point(c) {
                out.push((t, stratum.class_rep));
            }
        }
    }
    out
}

/// Every fixed pair `(t, w)` over all `w` in `W` (not just class
/// representatives), with `t` generic on each component of `T^w`.
pub fn all_generic_fixed_pairs(eq: &ExtendedQuotient) -> Vec<(TorusPoint, WeylElement)> {
    let group = eq.group();
    let vg = &eq.scenario.torus.value_group;
    let mut out = Vec::new();
    for w in group.elements() {
        let fixed = crate::torus::fixed_subtorus(vg, group, w);
        let symbols: Vec<String> = (1..=fixed.identity_component_rank).map(|k| format!("z{k}")).collect();
        for e in fixed.component_group.elements().unwrap_or_default() {
            if let Some(t) = fixed.generic_point(&e, &symbols) {
                out.push((t, w));
            }
        }
    }
    out
}

/// The labeled parameter set of a `GL(n)` extended quotient: `mu` of one
/// generic point per component, with centers written through a KL triple in
/// the given mode and read back.
pub fn parameter_labels(eq: &ExtendedQuotient, mode: QMode) -> Result<BTreeSet<String>, LanglandsError> {
    let group = eq.group();
    let mut out = BTreeSet::new();
    for (t, w) in generic_fixed_pairs(eq) {
        let p = mu_map(group, &t, w)?;
        let triple = kl_triple(&p, mode);
        let segments: Vec<String> = triple
            .recover_segments()
            .into_iter()
            .map(|(m, c)| format!("{c}:{m}"))
            .collect();
        out.insert(format!("{}|{}", segments.join(","), triple.rho));
    }
    Ok(out)
}
