//! Finite groups of integer matrices acting on a character lattice.
//!
//! Groups are enumerated by breadth-first closure and then sorted by the
//! lexicographic order of their flattened matrices, so element indices, class
//! representatives and everything derived from them are deterministic.

use std::collections::{BTreeSet, HashMap, VecDeque};
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::abgroup::IntegerMatrix;
use crate::torus::{act_unchecked, Coordinate, TorusPoint};

/// Order bound used when none is given. Covers `S_n` for `n <= 7` and every
/// shipped preset.
pub const DEFAULT_MAX_ORDER: usize = 10080;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum WeylError {
    #[error("generator {index} is not a square {rank}x{rank} matrix")]
    BadShape { index: usize, rank: usize },
    #[error("generator {index} is not invertible over the integers")]
    NotUnimodular { index: usize },
    #[error("group order exceeds the bound {0}")]
    OrderBound(usize),
    #[error("operation needs a {needed} preset, group is tagged {actual}")]
    UnsupportedPreset { needed: String, actual: String },
    #[error("root {0:?} has no reflection in the group")]
    MissingReflection(Vec<i64>),
}

/// Square matrix with machine-integer entries, as used for group elements.
/// Ordered lexicographically on the row-major entries.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct LatticeMatrix {
    n: usize,
    entries: Vec<i64>,
}

impl LatticeMatrix {
    pub fn identity(n: usize) -> Self {
        let mut entries = vec![0; n * n];
        for i in 0..n {
            entries[i * n + i] = 1;
        }
        Self { n, entries }
    }

    pub fn from_rows<R: AsRef<[i64]>>(rows: &[R]) -> Option<Self> {
        let n = rows.len();
        let mut entries = Vec::with_capacity(n * n);
        for r in rows {
            let r = r.as_ref();
            if r.len() != n {
                return None;
            }
            entries.extend_from_slice(r);
        }
        Some(Self { n, entries })
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn get(&self, i: usize, j: usize) -> i64 {
        self.entries[i * self.n + j]
    }

    pub fn rows(&self) -> Vec<Vec<i64>> {
        self.entries.chunks(self.n.max(1)).map(<[i64]>::to_vec).take(self.n).collect()
    }

    pub fn mul(&self, other: &Self) -> Self {
        let n = self.n;
        let mut entries = vec![0i64; n * n];
        for i in 0..n {
            for k in 0..n {
                let a = self.entries[i * n + k];
                if a == 0 {
                    continue;
                }
                for j in 0..n {
                    entries[i * n + j] += a * other.entries[k * n + j];
                }
            }
        }
        Self { n, entries }
    }

    pub fn apply(&self, v: &[i64]) -> Vec<i64> {
        (0..self.n)
            .map(|i| (0..self.n).map(|j| self.get(i, j) * v[j]).sum())
            .collect()
    }

    pub fn to_integer_matrix(&self) -> IntegerMatrix {
        IntegerMatrix::from_rows(&self.rows()).expect("square")
    }

    /// The permutation `j -> i` if this is a permutation matrix (column `j`
    /// has its single 1 in row `i`).
    pub fn as_permutation(&self) -> Option<Vec<usize>> {
        let n = self.n;
        let mut perm = Vec::with_capacity(n);
        for j in 0..n {
            let col: Vec<i64> = (0..n).map(|i| self.get(i, j)).collect();
            if col.iter().filter(|&&x| x != 0).count() != 1 {
                return None;
            }
            let i = col.iter().position(|&x| x == 1)?;
            perm.push(i);
        }
        let distinct: BTreeSet<_> = perm.iter().collect();
        (distinct.len() == n).then_some(perm)
    }
}

impl fmt::Display for LatticeMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_integer_matrix())
    }
}

impl Serialize for LatticeMatrix {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        self.rows().serialize(s)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PresetTag {
    GlN,
    G2Ramified,
    G2Full,
    #[default]
    Custom,
}

impl fmt::Display for PresetTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            PresetTag::GlN => "gl_n",
            PresetTag::G2Ramified => "g2_ramified",
            PresetTag::G2Full => "g2_full",
            PresetTag::Custom => "custom",
        })
    }
}

/// Index of an element in its group's sorted element list.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct WeylElement(pub usize);

/// A subgroup, stored as its sorted element list.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Subgroup {
    elements: Vec<WeylElement>,
}

impl Subgroup {
    fn from_iter<I: IntoIterator<Item = WeylElement>>(it: I) -> Self {
        let set: BTreeSet<WeylElement> = it.into_iter().collect();
        Self {
            elements: set.into_iter().collect(),
        }
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn elements(&self) -> &[WeylElement] {
        &self.elements
    }

    pub fn contains(&self, w: WeylElement) -> bool {
        self.elements.binary_search(&w).is_ok()
    }

    pub fn is_trivial(&self) -> bool {
        self.elements.len() == 1
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConjugacyClassTable {
    pub representatives: Vec<WeylElement>,
    pub class_sizes: Vec<usize>,
    pub class_of: Vec<usize>,
}

impl ConjugacyClassTable {
    pub fn len(&self) -> usize {
        self.representatives.len()
    }

    pub fn is_empty(&self) -> bool {
        self.representatives.is_empty()
    }
}

/// `W(t) = normal_part x| complement_part`, with the normal part generated by
/// the reflections in roots trivial on `t`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IsotropyDecomposition {
    pub full_isotropy: Subgroup,
    pub normal_part: Subgroup,
    pub complement_part: Subgroup,
}

/// Positive roots as character exponent vectors; the full root set is
/// `positive ∪ -positive`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RootSystem {
    pub positive: Vec<Vec<i64>>,
}

impl RootSystem {
    pub fn roots(&self) -> Vec<Vec<i64>> {
        self.positive
            .iter()
            .cloned()
            .chain(self.positive.iter().map(|r| r.iter().map(|x| -x).collect()))
            .collect()
    }
}

#[derive(Debug, Clone)]
pub struct WeylGroup {
    lattice_rank: usize,
    generators: Vec<LatticeMatrix>,
    elements: Vec<LatticeMatrix>,
    index: HashMap<LatticeMatrix, usize>,
    inverses: Vec<usize>,
    identity: usize,
    pub preset_tag: PresetTag,
    pub roots: Option<RootSystem>,
}

/// Breadth-first closure of the generators. Fails if a generator is not a
/// unimodular `rank x rank` matrix or the closure exceeds `max_order`.
pub fn enumerate_group(
    lattice_rank: usize,
    generators: Vec<LatticeMatrix>,
    max_order: usize,
) -> Result<WeylGroup, WeylError> {
    for (index, g) in generators.iter().enumerate() {
        if g.dim() != lattice_rank {
            return Err(WeylError::BadShape {
                index,
                rank: lattice_rank,
            });
        }
        if !g.to_integer_matrix().is_unimodular() {
            return Err(WeylError::NotUnimodular { index });
        }
    }
    let id = LatticeMatrix::identity(lattice_rank);
    let mut seen: BTreeSet<LatticeMatrix> = BTreeSet::from([id.clone()]);
    let mut queue = VecDeque::from([id]);
    while let Some(x) = queue.pop_front() {
        for g in &generators {
            let y = x.mul(g);
            if seen.insert(y.clone()) {
                if seen.len() > max_order {
                    return Err(WeylError::OrderBound(max_order));
                }
                queue.push_back(y);
            }
        }
    }
    let elements: Vec<LatticeMatrix> = seen.into_iter().collect();
    let index: HashMap<LatticeMatrix, usize> = elements
        .iter()
        .cloned()
        .enumerate()
        .map(|(i, m)| (m, i))
        .collect();
    let identity = index[&LatticeMatrix::identity(lattice_rank)];
    let inverses = elements
        .iter()
        .map(|m| {
            // finite order: m^-1 = m^(k-1)
            let mut p = m.clone();
            let mut prev = LatticeMatrix::identity(lattice_rank);
            while index[&p] != identity {
                prev = p.clone();
                p = p.mul(m);
            }
            index[&prev]
        })
        .collect();
    Ok(WeylGroup {
        lattice_rank,
        generators,
        elements,
        index,
        inverses,
        identity,
        preset_tag: PresetTag::Custom,
        roots: None,
    })
}

impl WeylGroup {
    pub fn with_tag(mut self, tag: PresetTag) -> Self {
        self.preset_tag = tag;
        self
    }

    pub fn with_roots(mut self, roots: RootSystem) -> Self {
        self.roots = Some(roots);
        self
    }

    pub fn lattice_rank(&self) -> usize {
        self.lattice_rank
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn generators(&self) -> &[LatticeMatrix] {
        &self.generators
    }

    pub fn elements(&self) -> impl Iterator<Item = WeylElement> + '_ {
        (0..self.elements.len()).map(WeylElement)
    }

    pub fn identity(&self) -> WeylElement {
        WeylElement(self.identity)
    }

    pub fn matrix(&self, w: WeylElement) -> &LatticeMatrix {
        &self.elements[w.0]
    }

    pub fn element_of(&self, m: &LatticeMatrix) -> Option<WeylElement> {
        self.index.get(m).copied().map(WeylElement)
    }

    pub fn mul(&self, a: WeylElement, b: WeylElement) -> WeylElement {
        let m = self.elements[a.0].mul(&self.elements[b.0]);
        WeylElement(self.index[&m])
    }

    pub fn inverse(&self, w: WeylElement) -> WeylElement {
        WeylElement(self.inverses[w.0])
    }

    pub fn conjugate(&self, by: WeylElement, w: WeylElement) -> WeylElement {
        self.mul(self.mul(by, w), self.inverse(by))
    }

    pub fn whole(&self) -> Subgroup {
        Subgroup::from_iter(self.elements())
    }

    /// Rank of the sublattice fixed by `w`, i.e. the dimension of `T^w`.
    pub fn fixed_rank(&self, w: WeylElement) -> usize {
        let m = self.matrix(w).to_integer_matrix();
        let rel = m
            .sub(&IntegerMatrix::identity(self.lattice_rank))
            .expect("square");
        self.lattice_rank - rel.rank()
    }

    /// Conjugacy classes. Classes are ordered by decreasing fixed rank, ties by
    /// representative; each representative is the smallest element of its
    /// class.
    pub fn conjugacy_classes(&self) -> ConjugacyClassTable {
        let classes = self.classes_within(&self.whole());
        let mut keyed: Vec<(usize, Vec<WeylElement>)> = classes
            .into_iter()
            .map(|c| (self.fixed_rank(c[0]), c))
            .collect();
        keyed.sort_by(|a, b| b.0.cmp(&a.0).then(a.1[0].cmp(&b.1[0])));
        let mut class_of = vec![usize::MAX; self.order()];
        let mut representatives = Vec::new();
        let mut class_sizes = Vec::new();
        for (k, (_, c)) in keyed.iter().enumerate() {
            representatives.push(c[0]);
            class_sizes.push(c.len());
            for w in c {
                class_of[w.0] = k;
            }
        }
        ConjugacyClassTable {
            representatives,
            class_sizes,
            class_of,
        }
    }

    /// Conjugacy classes of a subgroup (under conjugation by the subgroup),
    /// each sorted, listed by smallest element.
    pub fn classes_within(&self, h: &Subgroup) -> Vec<Vec<WeylElement>> {
        let mut done = vec![false; self.order()];
        let mut out = Vec::new();
        for &x in h.elements() {
            if done[x.0] {
                continue;
            }
            let class = Subgroup::from_iter(h.elements().iter().map(|&g| self.conjugate(g, x)));
            for &y in class.elements() {
                done[y.0] = true;
            }
            out.push(class.elements);
        }
        out
    }

    pub fn centralizer(&self, w: WeylElement) -> Subgroup {
        Subgroup::from_iter(self.elements().filter(|&a| self.mul(a, w) == self.mul(w, a)))
    }

    /// `{w : w.t = t}`, using formal equality of coordinates.
    pub fn isotropy(&self, t: &TorusPoint) -> Subgroup {
        assert_eq!(t.rank(), self.lattice_rank, "rank mismatch");
        Subgroup::from_iter(self.elements().filter(|&w| &act_unchecked(self, w, t) == t))
    }

    /// Closure of a set of elements under multiplication.
    pub fn generated_subgroup(&self, gens: &[WeylElement]) -> Subgroup {
        let mut seen = BTreeSet::from([self.identity()]);
        let mut queue = VecDeque::from([self.identity()]);
        while let Some(x) = queue.pop_front() {
            for &g in gens {
                let y = self.mul(x, g);
                if seen.insert(y) {
                    queue.push_back(y);
                }
            }
        }
        Subgroup::from_iter(seen)
    }

    pub fn is_abelian(&self, h: &Subgroup) -> bool {
        h.elements().iter().all(|&a| {
            h.elements()
                .iter()
                .all(|&b| self.mul(a, b) == self.mul(b, a))
        })
    }

    pub fn element_order(&self, w: WeylElement) -> usize {
        let mut k = 1;
        let mut p = w;
        while p != self.identity() {
            p = self.mul(p, w);
            k += 1;
        }
        k
    }

    /// Permutation of `{0..n}` for a `gl_n` element.
    pub fn permutation(&self, w: WeylElement) -> Result<Vec<usize>, WeylError> {
        if self.preset_tag != PresetTag::GlN {
            return Err(WeylError::UnsupportedPreset {
                needed: "gl_n".into(),
                actual: self.preset_tag.to_string(),
            });
        }
        self.matrix(w)
            .as_permutation()
            .ok_or_else(|| WeylError::UnsupportedPreset {
                needed: "permutation-matrix".into(),
                actual: self.preset_tag.to_string(),
            })
    }

    /// Cycles of a `gl_n` element, each starting at its smallest index,
    /// ordered by that index.
    pub fn cycles(&self, w: WeylElement) -> Result<Vec<Vec<usize>>, WeylError> {
        let perm = self.permutation(w)?;
        let mut seen = vec![false; perm.len()];
        let mut out = Vec::new();
        for start in 0..perm.len() {
            if seen[start] {
                continue;
            }
            let mut cycle = vec![start];
            seen[start] = true;
            let mut j = perm[start];
            while j != start {
                seen[j] = true;
                cycle.push(j);
                j = perm[j];
            }
            out.push(cycle);
        }
        Ok(out)
    }

    /// Cycle lengths, sorted descending.
    pub fn cycle_type(&self, w: WeylElement) -> Result<Vec<usize>, WeylError> {
        let mut lengths: Vec<usize> = self.cycles(w)?.iter().map(Vec::len).collect();
        lengths.sort_unstable_by(|a, b| b.cmp(a));
        Ok(lengths)
    }

    /// The element whose permutation is `perm` (column `j` -> row `perm[j]`).
    pub fn element_of_permutation(&self, perm: &[usize]) -> Option<WeylElement> {
        let n = perm.len();
        let mut rows = vec![vec![0i64; n]; n];
        for (j, &i) in perm.iter().enumerate() {
            rows[i][j] = 1;
        }
        self.element_of(&LatticeMatrix::from_rows(&rows)?)
    }

    /// The reflection in the root `alpha`: the element sending `alpha` to
    /// `-alpha` and fixing a hyperplane.
    pub fn reflection(&self, alpha: &[i64]) -> Option<WeylElement> {
        let neg: Vec<i64> = alpha.iter().map(|x| -x).collect();
        self.elements().find(|&w| {
            let m = self.matrix(w);
            m.apply(alpha) == neg && self.fixed_rank(w) + 1 == self.lattice_rank
        })
    }

    pub fn isotropy_decomposition(&self, t: &TorusPoint) -> Result<IsotropyDecomposition, WeylError> {
        let roots = self.roots.as_ref().ok_or_else(|| WeylError::UnsupportedPreset {
            needed: "root-datum".into(),
            actual: self.preset_tag.to_string(),
        })?;
        let full = self.isotropy(t);
        let trivial_on = |a: &Vec<i64>| t.evaluate_character(a) == Coordinate::one();
        let mut reflections = Vec::new();
        for a in roots.roots().iter().filter(|a| trivial_on(a)) {
            let s = self
                .reflection(a)
                .ok_or_else(|| WeylError::MissingReflection(a.clone()))?;
            reflections.push(s);
        }
        let normal = self.generated_subgroup(&reflections);
        let positive: BTreeSet<Vec<i64>> = roots.positive.iter().filter(|a| trivial_on(a)).cloned().collect();
        let complement = Subgroup::from_iter(full.elements().iter().copied().filter(|&w| {
            let m = self.matrix(w);
            positive.iter().all(|a| positive.contains(&m.apply(a)))
        }));
        Ok(IsotropyDecomposition {
            full_isotropy: full,
            normal_part: normal,
            complement_part: complement,
        })
    }
}
