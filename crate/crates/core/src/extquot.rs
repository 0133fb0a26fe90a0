//! The extended quotient `T//W`, stratified as the disjoint union of
//! `T^w / Z(w)` over one `w` per conjugacy class.
//!
//! Irreducible components of a stratum are the `Z(w)`-orbits on the component
//! group of `T^w`; the orbit computation runs on the Smith presentation of the
//! fixed set, so it is exact whether or not the value group can write the
//! component representatives down.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::ToPrimitive;
use serde::Serialize;
use thiserror::Error;

use crate::scenario::Scenario;
use crate::torus::{act_unchecked, power_map, SubtorusDescriptor, TorusError, TorusPoint};
use crate::weyl::{ConjugacyClassTable, PresetTag, Subgroup, WeylElement, WeylError, WeylGroup};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ExtQuotError {
    #[error(transparent)]
    Torus(#[from] TorusError),
    #[error(transparent)]
    Weyl(#[from] WeylError),
    #[error("unsupported isotropy shape: {0}")]
    UnsupportedIsotropy(String),
    #[error("base change degree must be at least 1")]
    ZeroDegree,
}

/// One piece `T^w / Z(w)` of the stratification.
#[derive(Debug, Clone)]
pub struct ExtQuotStratum {
    pub class_index: usize,
    pub class_rep: WeylElement,
    pub class_size: usize,
    pub fixed: SubtorusDescriptor,
    pub centralizer: Subgroup,
    /// `Z(w)`-orbits on the component group, as indices into
    /// `fixed.component_group.elements()`; each orbit is sorted and orbits are
    /// ordered by their smallest member.
    pub component_orbits: Vec<Vec<usize>>,
    pub irreducible_component_count: usize,
    pub dimension: usize,
}

impl ExtQuotStratum {
    /// Torsion representative of each irreducible component, when the value
    /// group can express it.
    pub fn component_representatives(&self) -> Option<Vec<TorusPoint>> {
        if !self.fixed.representable {
            return None;
        }
        Some(
            self.component_orbits
                .iter()
                .map(|o| self.fixed.component_representatives[o[0]].clone())
                .collect(),
        )
    }

    /// Free symbols used for generic points of this stratum: `z1, z2, ...`.
    pub fn generic_symbols(&self) -> Vec<String> {
        (1..=self.dimension).map(|k| format!("z{k}")).collect()
    }

    /// A generic point of the given irreducible component.
    pub fn generic_point(&self, component: usize) -> Option<TorusPoint> {
        let elems = self.fixed.component_group.elements()?;
        let e = &elems[self.component_orbits.get(component)?[0]];
        self.fixed.generic_point(e, &self.generic_symbols())
    }
}

#[derive(Debug, Clone)]
pub struct ExtendedQuotient {
    pub scenario: Scenario,
    pub classes: ConjugacyClassTable,
    pub strata: Vec<ExtQuotStratum>,
}

/// Action of `alpha` on exponent vectors: `x -> (M^-1)^T x`.
fn act_on_log(group: &WeylGroup, alpha: WeylElement, x: &[BigRational]) -> Vec<BigRational> {
    let inv = group.matrix(group.inverse(alpha));
    let n = x.len();
    (0..n)
        .map(|j| {
            (0..n)
                .map(|i| BigRational::from_integer(BigInt::from(inv.get(i, j))) * &x[i])
                .sum()
        })
        .collect()
}

fn orbits(count: usize, images: impl Fn(usize) -> Vec<usize>) -> Vec<Vec<usize>> {
    let mut orbit_of = vec![usize::MAX; count];
    let mut out: Vec<Vec<usize>> = Vec::new();
    for start in 0..count {
        if orbit_of[start] != usize::MAX {
            continue;
        }
        let k = out.len();
        let mut orbit = vec![start];
        orbit_of[start] = k;
        let mut i = 0;
        while i < orbit.len() {
            for y in images(orbit[i]) {
                if orbit_of[y] == usize::MAX {
                    orbit_of[y] = k;
                    orbit.push(y);
                }
            }
            i += 1;
        }
        orbit.sort_unstable();
        out.push(orbit);
    }
    out
}

pub fn build_stratum(scenario: &Scenario, classes: &ConjugacyClassTable, class_index: usize) -> ExtQuotStratum {
    let group = &scenario.group;
    let w = classes.representatives[class_index];
    let fixed = crate::torus::fixed_subtorus(&scenario.torus.value_group, group, w);
    let centralizer = group.centralizer(w);
    let elements = fixed.component_group.elements().expect("finite component group");
    let index: BTreeMap<&Vec<BigInt>, usize> = elements.iter().enumerate().map(|(i, e)| (e, i)).collect();
    let logs: Vec<Vec<BigRational>> = elements.iter().map(|e| fixed.component_log(e)).collect();
    let component_orbits = orbits(elements.len(), |i| {
        centralizer
            .elements()
            .iter()
            .map(|&a| index[&fixed.component_of_log(&act_on_log(group, a, &logs[i]))])
            .collect()
    });
    ExtQuotStratum {
        class_index,
        class_rep: w,
        class_size: classes.class_sizes[class_index],
        irreducible_component_count: component_orbits.len(),
        dimension: fixed.identity_component_rank,
        fixed,
        centralizer,
        component_orbits,
    }
}

/// Builds every stratum, one per conjugacy class, in class order.
pub fn build_extended_quotient(scenario: &Scenario) -> ExtendedQuotient {
    let classes = scenario.group.conjugacy_classes();
    let strata = (0..classes.len())
        .map(|k| build_stratum(scenario, &classes, k))
        .collect();
    ExtendedQuotient {
        scenario: scenario.clone(),
        classes,
        strata,
    }
}

/// Label of an irreducible representation of an isotropy group.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum IrrepLabel {
    /// One partition per block of a Young subgroup `S_m1 x ... x S_mr`.
    Multipartition(Vec<Vec<usize>>),
    /// A character of an abelian group, by its values `exp(2 pi i a_k / e)` on
    /// the chosen generators.
    Character { exponent: usize, values: Vec<usize> },
    /// An irreducible of a dihedral group, by its conventional name.
    Dihedral(String),
}

impl fmt::Display for IrrepLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            IrrepLabel::Multipartition(parts) => {
                let blocks: Vec<String> = parts
                    .iter()
                    .map(|p| {
                        let s: Vec<String> = p.iter().map(ToString::to_string).collect();
                        format!("({})", s.join(","))
                    })
                    .collect();
                write!(f, "{}", blocks.join("x"))
            }
            IrrepLabel::Character { exponent, values } => {
                if values.iter().all(|&v| v == 0) {
                    write!(f, "1")
                } else if *exponent == 2 && values.len() == 1 {
                    write!(f, "sgn")
                } else {
                    let s: Vec<String> = values.iter().map(ToString::to_string).collect();
                    write!(f, "chi[{}]/{exponent}", s.join(","))
                }
            }
            IrrepLabel::Dihedral(name) => f.write_str(name),
        }
    }
}

impl Serialize for IrrepLabel {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

/// A point `(t, tau)` of the extended quotient of the second kind.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SecondKindLabel {
    pub base_point: TorusPoint,
    pub irrep_label: IrrepLabel,
}

/// All partitions of `n`, each in descending order, listed in reverse
/// lexicographic order (`(n)` first).
pub fn partitions(n: usize) -> Vec<Vec<usize>> {
    fn go(n: usize, max: usize, prefix: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if n == 0 {
            out.push(prefix.clone());
            return;
        }
        for k in (1..=n.min(max)).rev() {
            prefix.push(k);
            go(n - k, k, prefix, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    go(n, n, &mut Vec::new(), &mut out);
    out
}

fn factorial(n: usize) -> usize {
    (1..=n).product()
}

/// Blocks of equal coordinates, each listed by position, ordered by first
/// position.
fn equal_coordinate_blocks(t: &TorusPoint) -> Vec<Vec<usize>> {
    let mut blocks: Vec<Vec<usize>> = Vec::new();
    for (i, c) in t.coords().iter().enumerate() {
        match blocks.iter_mut().find(|b| &t.coords()[b[0]] == c) {
            Some(b) => b.push(i),
            None => blocks.push(vec![i]),
        }
    }
    blocks
}

fn abelian_characters(group: &WeylGroup, h: &Subgroup) -> Vec<IrrepLabel> {
    let mut gens: Vec<WeylElement> = Vec::new();
    let mut span = group.generated_subgroup(&gens);
    for &x in h.elements() {
        if !span.contains(x) {
            gens.push(x);
            span = group.generated_subgroup(&gens);
        }
    }
    let exponent = h
        .elements()
        .iter()
        .map(|&x| group.element_order(x))
        .fold(1usize, |a, b| a.lcm(&b));
    let consistent = |values: &[usize]| -> bool {
        let mut value: BTreeMap<WeylElement, usize> = BTreeMap::from([(group.identity(), 0)]);
        let mut queue = vec![group.identity()];
        while let Some(x) = queue.pop() {
            let vx = value[&x];
            for (g, &a) in gens.iter().zip(values) {
                let y = group.mul(x, *g);
                let vy = (vx + a) % exponent;
                match value.get(&y) {
                    Some(&old) if old != vy => return false,
                    Some(_) => {}
                    None => {
                        value.insert(y, vy);
                        queue.push(y);
                    }
                }
            }
        }
        true
    };
    let mut out = Vec::new();
    let total = exponent.pow(gens.len() as u32);
    for code in 0..total {
        let mut values = Vec::with_capacity(gens.len());
        let mut c = code;
        for _ in 0..gens.len() {
            values.push(c % exponent);
            c /= exponent;
        }
        if consistent(&values) {
            out.push(IrrepLabel::Character { exponent, values });
        }
    }
    out
}

fn dihedral_labels(group: &WeylGroup, h: &Subgroup) -> Option<Vec<IrrepLabel>> {
    let order = h.order();
    if order < 6 || !order.is_multiple_of(2) || group.is_abelian(h) {
        return None;
    }
    let m = order / 2;
    let r = h.elements().iter().copied().find(|&x| group.element_order(x) == m)?;
    let rot = group.generated_subgroup(&[r]);
    let s = h.elements().iter().copied().find(|&x| !rot.contains(x))?;
    let dihedral = group.element_order(s) == 2 && group.conjugate(s, r) == group.inverse(r);
    if !dihedral {
        return None;
    }
    let mut names = vec!["1".to_string(), "sgn".to_string()];
    if m.is_multiple_of(2) {
        names.push("eps1".into());
        names.push("eps2".into());
        names.extend((1..m / 2).map(|k| format!("rho{k}")));
    } else {
        names.extend((1..=(m - 1) / 2).map(|k| format!("rho{k}")));
    }
    Some(names.into_iter().map(IrrepLabel::Dihedral).collect())
}

/// Labels of `Irr(W(t))` for the isotropy group of `t`: multipartitions for the
/// Young subgroups of `gl_n`, characters for abelian groups, named irreducibles
/// for dihedral groups.
pub fn irrep_labels(group: &WeylGroup, t: &TorusPoint) -> Result<Vec<IrrepLabel>, ExtQuotError> {
    let h = group.isotropy(t);
    if group.preset_tag == PresetTag::GlN {
        let blocks = equal_coordinate_blocks(t);
        let expected: usize = blocks.iter().map(|b| factorial(b.len())).product();
        if expected != h.order() {
            return Err(ExtQuotError::UnsupportedIsotropy(format!(
                "isotropy of order {} is not the Young subgroup of order {expected}",
                h.order()
            )));
        }
        let mut labels = vec![Vec::new()];
        for b in &blocks {
            let ps = partitions(b.len());
            labels = labels
                .into_iter()
                .flat_map(|prefix: Vec<Vec<usize>>| {
                    ps.iter().map(move |p| {
                        let mut l = prefix.clone();
                        l.push(p.clone());
                        l
                    })
                })
                .collect();
        }
        return Ok(labels.into_iter().map(IrrepLabel::Multipartition).collect());
    }
    if group.is_abelian(&h) {
        return Ok(abelian_characters(group, &h));
    }
    dihedral_labels(group, &h).ok_or_else(|| {
        ExtQuotError::UnsupportedIsotropy(format!(
            "non-abelian isotropy of order {} is neither a Young nor a dihedral group",
            h.order()
        ))
    })
}

pub fn second_kind_labels(group: &WeylGroup, t: &TorusPoint) -> Result<Vec<SecondKindLabel>, ExtQuotError> {
    Ok(irrep_labels(group, t)?
        .into_iter()
        .map(|irrep_label| SecondKindLabel {
            base_point: t.clone(),
            irrep_label,
        })
        .collect())
}

/// What `(t, w) -> (t^f, w)` does to one stratum.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct StratumBaseChange {
    pub class_index: usize,
    /// Image of each element of the component group (by index).
    pub component_map: Vec<usize>,
    /// Image of each irreducible component (by index).
    pub irreducible_component_map: Vec<usize>,
    /// `(representative, representative^f)` per irreducible component, when
    /// representable.
    pub representative_images: Vec<(TorusPoint, TorusPoint)>,
    /// `w . t^f = t^f` and `alpha . t^f = (alpha . t)^f` for every `alpha` in
    /// the centralizer, checked on generic points of every component.
    pub well_defined: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct BaseChangeReport {
    pub degree: u64,
    pub strata: Vec<StratumBaseChange>,
}

impl BaseChangeReport {
    pub fn is_identity(&self) -> bool {
        self.strata.iter().all(|s| {
            s.component_map.iter().enumerate().all(|(i, &j)| i == j)
                && s.representative_images.iter().all(|(a, b)| a == b)
        })
    }
}

impl ExtendedQuotient {
    pub fn build(scenario: &Scenario) -> Self {
        build_extended_quotient(scenario)
    }

    pub fn group(&self) -> &WeylGroup {
        &self.scenario.group
    }

    pub fn total_components(&self) -> usize {
        self.strata.iter().map(|s| s.irreducible_component_count).sum()
    }

    pub fn second_kind_labels(&self, t: &TorusPoint) -> Result<Vec<SecondKindLabel>, ExtQuotError> {
        if t.rank() != self.scenario.torus.rank {
            return Err(TorusError::RankMismatch {
                expected: self.scenario.torus.rank,
                given: t.rank(),
            }
            .into());
        }
        second_kind_labels(self.group(), t)
    }

    /// Which stratum (class index) and irreducible component a fixed pair
    /// `(t, w)` with torsion coordinates lands in, after conjugating `w` to its
    /// class representative.
    pub fn locate_torsion_pair(&self, t: &TorusPoint, w: WeylElement) -> Option<(usize, usize)> {
        let group = self.group();
        let k = self.classes.class_of[w.0];
        let stratum = &self.strata[k];
        let alpha = group
            .elements()
            .find(|&a| group.conjugate(a, w) == stratum.class_rep)?;
        let moved = act_unchecked(group, alpha, t);
        let e = stratum.fixed.component_of(&moved)?;
        let idx = stratum.fixed.component_group.elements()?.iter().position(|x| x == &e)?;
        let orbit = stratum.component_orbits.iter().position(|o| o.contains(&idx))?;
        Some((k, orbit))
    }

    /// The base change endomorphism of degree `f` on every stratum.
    pub fn base_change_endo(&self, f: u64) -> Result<BaseChangeReport, ExtQuotError> {
        if f == 0 {
            return Err(ExtQuotError::ZeroDegree);
        }
        let group = self.group();
        let fbig = BigInt::from(f);
        let strata = self
            .strata
            .iter()
            .map(|s| {
                let cg = &s.fixed.component_group;
                let elements = cg.elements().expect("finite");
                let component_map: Vec<usize> = elements
                    .iter()
                    .map(|e| {
                        let scaled: Vec<BigInt> = e.iter().map(|x| x * &fbig).collect();
                        let img = cg.reduce(&scaled);
                        elements.iter().position(|x| x == &img).expect("closed")
                    })
                    .collect();
                let orbit_of = |i: usize| {
                    s.component_orbits
                        .iter()
                        .position(|o| o.contains(&i))
                        .expect("every element lies in an orbit")
                };
                let irreducible_component_map = s
                    .component_orbits
                    .iter()
                    .map(|o| orbit_of(component_map[o[0]]))
                    .collect();
                let representative_images = s
                    .component_representatives()
                    .unwrap_or_default()
                    .into_iter()
                    .map(|r| {
                        let img = power_map(&r, f);
                        (r, img)
                    })
                    .collect();
                let well_defined = (0..s.irreducible_component_count).all(|c| {
                    let Some(p) = s.generic_point(c) else {
                        return true;
                    };
                    let pf = power_map(&p, f);
                    act_unchecked(group, s.class_rep, &pf) == pf
                        && s.centralizer.elements().iter().all(|&a| {
                            act_unchecked(group, a, &pf) == power_map(&act_unchecked(group, a, &p), f)
                        })
                });
                StratumBaseChange {
                    class_index: s.class_index,
                    component_map,
                    irreducible_component_map,
                    representative_images,
                    well_defined,
                }
            })
            .collect();
        Ok(BaseChangeReport { degree: f, strata })
    }

    /// Serializable summary of every stratum, in class order.
    pub fn summary(&self) -> Vec<StratumSummary> {
        let group = self.group();
        self.strata
            .iter()
            .map(|s| {
                let reps = s.component_representatives();
                let cover_representatives = match (&reps, &self.scenario.cover_embedding) {
                    (Some(r), Some(_)) => r.iter().map(|p| self.scenario.lift_to_cover(p)).collect(),
                    _ => None,
                };
                StratumSummary {
                    class_index: s.class_index,
                    class_rep: group.matrix(s.class_rep).rows(),
                    class_size: s.class_size,
                    cycle_type: group.cycle_type(s.class_rep).ok(),
                    centralizer_order: s.centralizer.order(),
                    dim: s.dimension,
                    component_group: s
                        .fixed
                        .component_group
                        .torsion_orders
                        .iter()
                        .map(|d| d.to_u64().expect("small"))
                        .collect(),
                    irreducible_components: s.irreducible_component_count,
                    representatives: reps.unwrap_or_default(),
                    cover_representatives,
                    generic_points: (0..s.irreducible_component_count)
                        .filter_map(|c| s.generic_point(c))
                        .collect(),
                }
            })
            .collect()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct StratumSummary {
    pub class_index: usize,
    pub class_rep: Vec<Vec<i64>>,
    pub class_size: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub cycle_type: Option<Vec<usize>>,
    pub centralizer_order: usize,
    pub dim: usize,
    pub component_group: Vec<u64>,
    pub irreducible_components: usize,
    pub representatives: Vec<TorusPoint>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub cover_representatives: Option<Vec<TorusPoint>>,
    pub generic_points: Vec<TorusPoint>,
}

/// Every stratum is nonempty, so the total component count is at least the
/// number of conjugacy classes.
pub fn component_lower_bound_holds(eq: &ExtendedQuotient) -> bool {
    eq.total_components() >= eq.classes.len() && eq.strata.iter().all(|s| s.irreducible_component_count >= 1)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn eq(name: &str) -> ExtendedQuotient {
        ExtendedQuotient::build(&Scenario::preset(name).unwrap())
    }

    fn pt(eq: &ExtendedQuotient, text: &str) -> TorusPoint {
        eq.scenario.torus.parse_point(text).unwrap()
    }

    #[test]
    fn gl2_strata() {
        let e = eq("gl2");
        let dims: Vec<usize> = e.strata.iter().map(|s| s.dimension).collect();
        assert_eq!(dims, vec![2, 1]);
        assert!(e.strata.iter().all(|s| s.irreducible_component_count == 1));
        assert_eq!(e.strata[1].generic_point(0).unwrap(), pt(&e, "(z1, z1)"));
    }

    #[test]
    fn gl3_strata() {
        let e = eq("gl3");
        let dims: Vec<usize> = e.strata.iter().map(|s| s.dimension).collect();
        assert_eq!(dims, vec![3, 2, 1]);
    }

    #[test]
    fn g2_ramified_components() {
        let e = eq("g2_ramified");
        assert_eq!(e.strata.len(), 4);
        assert_eq!(e.total_components(), 6);
        let mut dims: Vec<usize> = e
            .strata
            .iter()
            .flat_map(|s| std::iter::repeat_n(s.dimension, s.irreducible_component_count))
            .collect();
        dims.sort_by(|a, b| b.cmp(a));
        assert_eq!(dims, vec![2, 1, 1, 0, 0, 0]);
    }

    #[test]
    fn sl2_inversion_stratum() {
        let e = eq("sl2");
        assert_eq!(e.strata.len(), 2);
        let s = &e.strata[1];
        assert_eq!(s.dimension, 0);
        assert_eq!(s.irreducible_component_count, 2);
        assert_eq!(
            s.component_representatives().unwrap(),
            vec![pt(&e, "(1)"), pt(&e, "(-1)")]
        );
    }

    #[test]
    fn labels_examples() {
        let e = eq("gl4");
        assert_eq!(e.second_kind_labels(&pt(&e, "(a, b, c, d)")).unwrap().len(), 1);
        assert_eq!(e.second_kind_labels(&pt(&e, "(z, z, z, z)")).unwrap().len(), 5);
        assert_eq!(e.second_kind_labels(&pt(&e, "(z, y, z, y)")).unwrap().len(), 4);

        let g = eq("g2_ramified");
        let t = g
            .scenario
            .point_from_cover(&pt(&g, "(zeta4, zeta4)"))
            .unwrap();
        let labels: Vec<String> = g
            .second_kind_labels(&t)
            .unwrap()
            .iter()
            .map(|l| l.irrep_label.to_string())
            .collect();
        assert_eq!(labels, vec!["1", "sgn"]);
    }

    #[test]
    fn dihedral_labels_for_g2() {
        let e = eq("g2_full");
        let labels = e.second_kind_labels(&pt(&e, "(1, 1)")).unwrap();
        assert_eq!(labels.len(), 6);
        assert_eq!(e.classes.len(), 6);
    }

    #[test]
    fn partitions_small() {
        assert_eq!(partitions(4).len(), 5);
        assert_eq!(partitions(4)[0], vec![4]);
        assert_eq!(partitions(0), vec![Vec::<usize>::new()]);
        let counts: Vec<usize> = (1..=7).map(|n| partitions(n).len()).collect();
        assert_eq!(counts, vec![1, 2, 3, 5, 7, 11, 15]);
    }

    #[test]
    fn base_change_identity_and_merging() {
        let e = eq("gl2");
        assert!(e.base_change_endo(1).unwrap().is_identity());
        let r = e.base_change_endo(2).unwrap();
        assert!(r.strata.iter().all(|s| s.well_defined));
        assert!(matches!(e.base_change_endo(0), Err(ExtQuotError::ZeroDegree)));

        let s = eq("sl2");
        let r = s.base_change_endo(2).unwrap();
        let inv = &r.strata[1];
        // component {-1} lands in component {1}
        assert_eq!(inv.irreducible_component_map, vec![0, 0]);
        assert_eq!(inv.representative_images[1].1, pt(&s, "(1)"));
        let r3 = s.base_change_endo(3).unwrap();
        assert_eq!(r3.strata[1].irreducible_component_map, vec![0, 1]);
    }

    #[test]
    fn locate_pairs() {
        let g = eq("g2_ramified");
        let minus = g.group().elements().find(|&w| g.group().fixed_rank(w) == 0).unwrap();
        let (k, c) = g.locate_torsion_pair(&pt(&g, "(-1, 1)"), minus).unwrap();
        let (k2, c2) = g.locate_torsion_pair(&pt(&g, "(1, -1)"), minus).unwrap();
        assert_eq!((k, c), (k2, c2));
        assert_ne!(g.locate_torsion_pair(&pt(&g, "(1, 1)"), minus).unwrap(), (k, c));
    }
}
