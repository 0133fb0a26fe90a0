//! Algebraic tori given by their character lattices, with points whose
//! coordinates live in a symbolic multiplicative group.
//!
//! A coordinate is a monomial `qh^a * z1^b * ... * zeta4^k`: free generators
//! carry integer exponents, torsion generators (roots of unity) carry exponents
//! reduced modulo their order. `qh` stands for `q^(1/2)`; `q` itself is always
//! written `qh^2`. Distinct free symbols are never equal, which is how generic
//! points are modelled exactly.
//!
//! Coordinate `j` of a point is the value of the `j`-th basis character. A Weyl
//! element acting on characters by the matrix `M` acts on a point by
//! `(w.t)_j = prod_i t_i^((M^-1)_ij)`, i.e. on exponent vectors by `(M^-1)^T`.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::abgroup::{self, FgAbelianGroup, IntegerMatrix};
use crate::weyl::{WeylElement, WeylGroup};

/// Name of the generator standing for `q^(1/2)`.
pub const QH: &str = "qh";

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TorusError {
    #[error("rank mismatch: expected {expected}, got {given}")]
    RankMismatch { expected: usize, given: usize },
    #[error("parse error at position {position}: {message}")]
    Parse { position: usize, message: String },
    #[error("invalid value group: {0}")]
    ValueGroup(String),
}

/// The multiplicative group coordinates take values in.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ValueGroup {
    pub free_generators: Vec<String>,
    pub torsion_generators: Vec<(String, u64)>,
}

impl Default for ValueGroup {
    fn default() -> Self {
        Self {
            free_generators: vec![QH.to_string()],
            torsion_generators: vec![("zeta4".to_string(), 4)],
        }
    }
}

fn valid_name(name: &str) -> bool {
    let mut chars = name.chars();
    chars
        .next()
        .is_some_and(|c| c.is_ascii_alphabetic() || c == '_')
        && chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
}

impl ValueGroup {
    pub fn new(
        free_generators: Vec<String>,
        torsion_generators: Vec<(String, u64)>,
    ) -> Result<Self, TorusError> {
        let vg = Self {
            free_generators,
            torsion_generators,
        };
        vg.validate()?;
        Ok(vg)
    }

    fn validate(&self) -> Result<(), TorusError> {
        let mut seen = std::collections::BTreeSet::new();
        let names = self
            .free_generators
            .iter()
            .chain(self.torsion_generators.iter().map(|(n, _)| n));
        for n in names {
            if !valid_name(n) {
                return Err(TorusError::ValueGroup(format!("bad generator name {n:?}")));
            }
            if !seen.insert(n.as_str()) {
                return Err(TorusError::ValueGroup(format!("duplicate generator {n:?}")));
            }
        }
        if let Some((n, o)) = self.torsion_generators.iter().find(|(_, o)| *o < 2) {
            return Err(TorusError::ValueGroup(format!(
                "torsion generator {n:?} has order {o} < 2"
            )));
        }
        Ok(())
    }

    /// Adds a generator declaration (`name` or `name:order`).
    pub fn extend(&mut self, decl: &str) -> Result<(), TorusError> {
        let mut next = self.clone();
        match decl.split_once(':') {
            Some((name, order)) => {
                let order: u64 = order.trim().parse().map_err(|_| {
                    TorusError::ValueGroup(format!("bad order in declaration {decl:?}"))
                })?;
                next.torsion_generators.push((name.trim().to_string(), order));
            }
            None => next.free_generators.push(decl.trim().to_string()),
        }
        next.validate()?;
        *self = next;
        Ok(())
    }

    pub fn torsion_order(&self, name: &str) -> Option<u64> {
        self.torsion_generators
            .iter()
            .find(|(n, _)| n == name)
            .map(|&(_, o)| o)
    }

    /// A root of unity `exp(2 pi i * x)` for rational `x`, using the first
    /// torsion generator whose order is a multiple of the denominator.
    pub fn root_of_unity(&self, x: &BigRational) -> Option<Coordinate> {
        let frac = x - x.floor();
        if frac.is_zero() {
            return Some(Coordinate::one());
        }
        let den = frac.denom().to_u64()?;
        let (name, order) = self
            .torsion_generators
            .iter()
            .find(|(_, o)| o % den == 0)?;
        let exp = (frac.numer().to_u64()? * (order / den)) % order;
        Some(Coordinate::root(name, *order, exp))
    }

    pub fn parse_coordinate(&self, text: &str) -> Result<Coordinate, TorusError> {
        let mut p = Parser::new(text, self);
        let c = p.coordinate()?;
        p.skip_ws();
        p.expect_end()?;
        Ok(c)
    }

    /// Comma-separated coordinates, without parentheses.
    pub fn parse_coordinate_list(&self, text: &str) -> Result<Vec<Coordinate>, TorusError> {
        let mut p = Parser::new(text, self);
        let list = p.coordinate_list()?;
        p.expect_end()?;
        Ok(list)
    }

    pub fn parse_point(&self, text: &str) -> Result<TorusPoint, TorusError> {
        let mut p = Parser::new(text, self);
        p.skip_ws();
        p.eat('(')?;
        let coords = p.coordinate_list()?;
        p.eat(')')?;
        p.skip_ws();
        p.expect_end()?;
        Ok(TorusPoint::new(coords))
    }
}

struct Parser<'a> {
    text: &'a str,
    pos: usize,
    vg: &'a ValueGroup,
}

impl<'a> Parser<'a> {
    fn new(text: &'a str, vg: &'a ValueGroup) -> Self {
        Self { text, pos: 0, vg }
    }

    fn err<T>(&self, message: impl Into<String>) -> Result<T, TorusError> {
        Err(TorusError::Parse {
            position: self.pos,
            message: message.into(),
        })
    }

    fn peek(&self) -> Option<char> {
        self.text[self.pos..].chars().next()
    }

    fn skip_ws(&mut self) {
        while let Some(c) = self.peek().filter(|c| c.is_whitespace()) {
            self.pos += c.len_utf8();
        }
    }

    fn eat(&mut self, c: char) -> Result<(), TorusError> {
        self.skip_ws();
        if self.peek() == Some(c) {
            self.pos += c.len_utf8();
            Ok(())
        } else {
            self.err(format!("expected '{c}'"))
        }
    }

    fn expect_end(&self) -> Result<(), TorusError> {
        if self.pos == self.text.len() {
            Ok(())
        } else {
            self.err("unexpected trailing input")
        }
    }

    fn integer(&mut self) -> Result<i64, TorusError> {
        self.skip_ws();
        let start = self.pos;
        if matches!(self.peek(), Some('-' | '+')) {
            self.pos += 1;
        }
        while self.peek().is_some_and(|c| c.is_ascii_digit()) {
            self.pos += 1;
        }
        match self.text[start..self.pos].parse() {
            Ok(v) => Ok(v),
            Err(_) => {
                self.pos = start;
                self.err("expected integer")
            }
        }
    }

    fn factor(&mut self) -> Result<Coordinate, TorusError> {
        self.skip_ws();
        let start = self.pos;
        let base = match self.peek() {
            Some('1') => {
                self.pos += 1;
                Coordinate::one()
            }
            Some('-') if self.text[self.pos..].starts_with("-1") => {
                self.pos += 2;
                match self.vg.root_of_unity(&BigRational::new(1.into(), 2.into())) {
                    Some(c) => c,
                    None => {
                        self.pos = start;
                        return self.err("-1 needs a torsion generator of even order");
                    }
                }
            }
            Some(c) if c.is_ascii_alphabetic() || c == '_' => {
                while self
                    .peek()
                    .is_some_and(|c| c.is_ascii_alphanumeric() || c == '_')
                {
                    self.pos += 1;
                }
                let name = &self.text[start..self.pos];
                match self.vg.torsion_order(name) {
                    Some(order) => Coordinate::root(name, order, 1),
                    None => Coordinate::free(name),
                }
            }
            _ => return self.err("expected generator name, '1' or '-1'"),
        };
        self.skip_ws();
        if self.peek() == Some('^') {
            self.pos += 1;
            let e = self.integer()?;
            Ok(base.pow(e))
        } else {
            Ok(base)
        }
    }

    fn coordinate(&mut self) -> Result<Coordinate, TorusError> {
        let mut c = self.factor()?;
        loop {
            self.skip_ws();
            if self.peek() == Some('*') {
                self.pos += 1;
                c = c.mul(&self.factor()?);
            } else {
                return Ok(c);
            }
        }
    }

    fn coordinate_list(&mut self) -> Result<Vec<Coordinate>, TorusError> {
        let mut out = vec![self.coordinate()?];
        loop {
            self.skip_ws();
            if self.peek() == Some(',') {
                self.pos += 1;
                out.push(self.coordinate()?);
            } else {
                return Ok(out);
            }
        }
    }
}

/// One coordinate of a torus point: a monomial in the value group, kept in
/// canonical form (zero exponents dropped, torsion exponents in `[0, order)`).
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Coordinate {
    free: BTreeMap<String, i64>,
    // name -> (exponent, order)
    torsion: BTreeMap<String, (u64, u64)>,
}

impl Coordinate {
    pub fn one() -> Self {
        Self {
            free: BTreeMap::new(),
            torsion: BTreeMap::new(),
        }
    }

    pub fn free(name: &str) -> Self {
        Self::free_pow(name, 1)
    }

    pub fn free_pow(name: &str, exp: i64) -> Self {
        let mut c = Self::one();
        if exp != 0 {
            c.free.insert(name.to_string(), exp);
        }
        c
    }

    pub fn qh_pow(exp: i64) -> Self {
        Self::free_pow(QH, exp)
    }

    /// `zeta^exp` where `zeta` is the named primitive root of unity of the
    /// given order.
    pub fn root(name: &str, order: u64, exp: u64) -> Self {
        let mut c = Self::one();
        let e = exp % order;
        if e != 0 {
            c.torsion.insert(name.to_string(), (e, order));
        }
        c
    }

    pub fn is_one(&self) -> bool {
        self.free.is_empty() && self.torsion.is_empty()
    }

    pub fn free_exponent(&self, name: &str) -> i64 {
        self.free.get(name).copied().unwrap_or(0)
    }

    pub fn qh_exponent(&self) -> i64 {
        self.free_exponent(QH)
    }

    pub fn free_part(&self) -> &BTreeMap<String, i64> {
        &self.free
    }

    pub fn torsion_part(&self) -> &BTreeMap<String, (u64, u64)> {
        &self.torsion
    }

    /// True when no free generator occurs, i.e. the coordinate is a root of
    /// unity.
    pub fn is_torsion(&self) -> bool {
        self.free.is_empty()
    }

    pub fn mul(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (n, e) in &other.free {
            let v = out.free.entry(n.clone()).or_insert(0);
            *v = v.checked_add(*e).expect("exponent overflow");
            if *v == 0 {
                out.free.remove(n);
            }
        }
        for (n, &(e, o)) in &other.torsion {
            let entry = out.torsion.entry(n.clone()).or_insert((0, o));
            assert_eq!(entry.1, o, "torsion generator {n} used with two orders");
            entry.0 = (entry.0 + e) % o;
            if entry.0 == 0 {
                out.torsion.remove(n);
            }
        }
        out
    }

    pub fn inv(&self) -> Self {
        self.pow(-1)
    }

    pub fn div(&self, other: &Self) -> Self {
        self.mul(&other.inv())
    }

    pub fn pow(&self, k: i64) -> Self {
        let free = self
            .free
            .iter()
            .filter(|_| k != 0)
            .map(|(n, e)| (n.clone(), e.checked_mul(k).expect("exponent overflow")))
            .collect();
        let torsion = self
            .torsion
            .iter()
            .filter_map(|(n, &(e, o))| {
                let r = (i128::from(e) * i128::from(k)).rem_euclid(i128::from(o)) as u64;
                (r != 0).then(|| (n.clone(), (r, o)))
            })
            .collect();
        Self { free, torsion }
    }

    /// Replaces every occurrence of the free generator `name` by `value`.
    pub fn substitute(&self, name: &str, value: &Coordinate) -> Self {
        let e = self.free_exponent(name);
        let mut rest = self.clone();
        rest.free.remove(name);
        rest.mul(&value.pow(e))
    }

    /// The coordinate with the named free generator removed.
    pub fn without(&self, name: &str) -> Self {
        let mut c = self.clone();
        c.free.remove(name);
        c
    }

    /// For a root of unity `exp(2 pi i x)`, returns `x` in `[0, 1)`.
    pub fn torsion_log(&self) -> Option<BigRational> {
        if !self.is_torsion() {
            return None;
        }
        let mut x = BigRational::zero();
        for &(e, o) in self.torsion.values() {
            x += BigRational::new(BigInt::from(e), BigInt::from(o));
        }
        Some(&x - x.floor())
    }

    /// Multiplicative order if the coordinate is a root of unity.
    pub fn torsion_order(&self) -> Option<u64> {
        let x = self.torsion_log()?;
        x.denom().to_u64()
    }
}

impl fmt::Display for Coordinate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_one() {
            return write!(f, "1");
        }
        let factors = self
            .free
            .iter()
            .map(|(n, &e)| (n, e))
            .chain(self.torsion.iter().map(|(n, &(e, _))| (n, e as i64)));
        let mut first = true;
        for (n, e) in factors {
            if !first {
                write!(f, "*")?;
            }
            first = false;
            if e == 1 {
                write!(f, "{n}")?;
            } else {
                write!(f, "{n}^{e}")?;
            }
        }
        Ok(())
    }
}

impl Serialize for Coordinate {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Torus {
    pub rank: usize,
    pub value_group: ValueGroup,
    pub label: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct TorusPoint {
    coords: Vec<Coordinate>,
}

impl TorusPoint {
    pub fn new(coords: Vec<Coordinate>) -> Self {
        Self { coords }
    }

    pub fn identity(rank: usize) -> Self {
        Self::new(vec![Coordinate::one(); rank])
    }

    pub fn rank(&self) -> usize {
        self.coords.len()
    }

    pub fn coords(&self) -> &[Coordinate] {
        &self.coords
    }

    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!(self.rank(), other.rank());
        Self::new(
            self.coords
                .iter()
                .zip(&other.coords)
                .map(|(a, b)| a.mul(b))
                .collect(),
        )
    }

    /// Value of the character with exponent vector `chi` at this point.
    pub fn evaluate_character(&self, chi: &[i64]) -> Coordinate {
        assert_eq!(chi.len(), self.rank());
        self.coords
            .iter()
            .zip(chi)
            .fold(Coordinate::one(), |acc, (c, &e)| acc.mul(&c.pow(e)))
    }

    /// Exponent vector in `Q^n / Z^n` of a point all of whose coordinates are
    /// roots of unity.
    pub fn torsion_log(&self) -> Option<Vec<BigRational>> {
        self.coords.iter().map(Coordinate::torsion_log).collect()
    }

    /// Image under the linear map on exponent vectors given by `m`:
    /// coordinate `j` of the result is `prod_i t_i^(m[j][i])`.
    pub fn transform(&self, m: &IntegerMatrix) -> Self {
        assert_eq!(m.cols(), self.rank());
        let coords = (0..m.rows())
            .map(|j| {
                m.row(j).iter().zip(&self.coords).fold(Coordinate::one(), |acc, (e, c)| {
                    acc.mul(&c.pow(e.to_i64().expect("small lattice matrix")))
                })
            })
            .collect();
        Self::new(coords)
    }
}

impl fmt::Display for TorusPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, c) in self.coords.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, ")")
    }
}

impl Serialize for TorusPoint {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

/// The fixed set `T^w`: a diagonalizable group whose identity component is a
/// torus of rank `identity_component_rank` and whose component group is
/// finite.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SubtorusDescriptor {
    pub identity_component_rank: usize,
    pub component_group: FgAbelianGroup,
    /// One point per element of `component_group`, in the order of
    /// [`FgAbelianGroup::elements`]. Empty when `representable` is false.
    pub component_representatives: Vec<TorusPoint>,
    pub representable: bool,
    /// Cocharacters spanning the identity component (Hermite-reduced).
    pub identity_component_basis: Vec<Vec<BigInt>>,
    presentation: FixedPresentation,
}

/// Smith data for `(M^T - I)`: in the coordinates `y = V^-1 x` the fixed set is
/// `d_i y_i in Z`.
#[derive(Debug, Clone, PartialEq, Eq)]
struct FixedPresentation {
    v: IntegerMatrix,
    v_inv: IntegerMatrix,
    diag: Vec<BigInt>,
}

impl FixedPresentation {
    fn torsion_indices(&self) -> Vec<usize> {
        (0..self.diag.len())
            .filter(|&i| self.diag[i] > BigInt::one())
            .collect()
    }
}

impl SubtorusDescriptor {
    pub fn component_count(&self) -> usize {
        self.component_group
            .order()
            .and_then(|o| o.to_usize())
            .expect("component group is finite")
    }

    /// Exponent vector (mod `Z^n`) of the torsion point representing the
    /// component with the given canonical coordinates.
    pub fn component_log(&self, element: &[BigInt]) -> Vec<BigRational> {
        let p = &self.presentation;
        let idx = p.torsion_indices();
        assert_eq!(element.len(), idx.len());
        let n = p.v.rows();
        let mut y = vec![BigRational::zero(); n];
        for (k, &i) in idx.iter().enumerate() {
            y[i] = BigRational::new(element[k].clone(), p.diag[i].clone());
        }
        (0..n)
            .map(|r| {
                let x: BigRational = (0..n)
                    .map(|c| BigRational::from_integer(p.v[(r, c)].clone()) * &y[c])
                    .sum();
                &x - x.floor()
            })
            .collect()
    }

    /// Canonical component coordinates of a fixed point given by its
    /// exponent vector in `Q^n`. Panics if the point is not fixed.
    pub fn component_of_log(&self, x: &[BigRational]) -> Vec<BigInt> {
        self.try_component_of_log(x).expect("point is not fixed")
    }

    /// As [`Self::component_of_log`], `None` when the point is not fixed.
    pub fn try_component_of_log(&self, x: &[BigRational]) -> Option<Vec<BigInt>> {
        let p = &self.presentation;
        let n = p.v.rows();
        assert_eq!(x.len(), n);
        (0..p.diag.len()).try_fold(Vec::new(), |mut acc, i| {
            let y: BigRational = (0..n)
                .map(|c| BigRational::from_integer(p.v_inv[(i, c)].clone()) * &x[c])
                .sum();
            let scaled = y * BigRational::from_integer(p.diag[i].clone());
            if !scaled.is_integer() {
                return None;
            }
            if p.diag[i] > BigInt::one() {
                acc.push(scaled.to_integer().mod_floor(&p.diag[i]));
            }
            Some(acc)
        })
    }

    /// Component of a point whose coordinates are roots of unity; `None` if
    /// the point is not fixed or not torsion.
    pub fn component_of(&self, t: &TorusPoint) -> Option<Vec<BigInt>> {
        self.try_component_of_log(&t.torsion_log()?)
    }

    /// A generic point of the component: its torsion representative times
    /// `prod_k symbols[k]^(basis_k)`.
    pub fn generic_point(&self, element: &[BigInt], symbols: &[String]) -> Option<TorusPoint> {
        let idx = self
            .component_group
            .elements()?
            .iter()
            .position(|e| e == element)?;
        let base = self.component_representatives.get(idx)?;
        Some(base.mul(&self.identity_component_point(symbols)))
    }

    /// `prod_k symbols[k]^(basis_k)`, a generic point of the identity
    /// component.
    pub fn identity_component_point(&self, symbols: &[String]) -> TorusPoint {
        assert_eq!(symbols.len(), self.identity_component_rank);
        let n = self.presentation.v.rows();
        let coords = (0..n)
            .map(|j| {
                self.identity_component_basis
                    .iter()
                    .zip(symbols)
                    .fold(Coordinate::one(), |acc, (b, s)| {
                        acc.mul(&Coordinate::free_pow(s, b[j].to_i64().expect("small")))
                    })
            })
            .collect();
        TorusPoint::new(coords)
    }
}

impl Torus {
    pub fn new(rank: usize, value_group: ValueGroup, label: impl Into<String>) -> Self {
        Self {
            rank,
            value_group,
            label: label.into(),
        }
    }

    fn check_rank(&self, given: usize) -> Result<(), TorusError> {
        if given == self.rank {
            Ok(())
        } else {
            Err(TorusError::RankMismatch {
                expected: self.rank,
                given,
            })
        }
    }

    pub fn parse_point(&self, text: &str) -> Result<TorusPoint, TorusError> {
        let t = self.value_group.parse_point(text)?;
        self.check_rank(t.rank())?;
        Ok(t)
    }

    /// `w . t`.
    pub fn act(&self, group: &WeylGroup, w: WeylElement, t: &TorusPoint) -> Result<TorusPoint, TorusError> {
        self.check_rank(group.lattice_rank())?;
        self.check_rank(t.rank())?;
        Ok(act_unchecked(group, w, t))
    }

    pub fn fixed_subtorus(&self, group: &WeylGroup, w: WeylElement) -> Result<SubtorusDescriptor, TorusError> {
        self.check_rank(group.lattice_rank())?;
        Ok(fixed_subtorus(&self.value_group, group, w))
    }

    pub fn power_map(&self, t: &TorusPoint, f: u64) -> Result<TorusPoint, TorusError> {
        self.check_rank(t.rank())?;
        Ok(power_map(t, f))
    }

    pub fn points_equal(&self, a: &TorusPoint, b: &TorusPoint) -> Result<bool, TorusError> {
        self.check_rank(a.rank())?;
        self.check_rank(b.rank())?;
        Ok(a == b)
    }
}

pub(crate) fn act_unchecked(group: &WeylGroup, w: WeylElement, t: &TorusPoint) -> TorusPoint {
    // exponent vectors transform by (M^-1)^T: coordinate j = prod_i t_i^(Minv_ij)
    let inv = group.matrix(group.inverse(w));
    let n = t.rank();
    let coords = (0..n)
        .map(|j| {
            (0..n).fold(Coordinate::one(), |acc, i| {
                let e = inv.get(i, j);
                if e == 0 {
                    acc
                } else {
                    acc.mul(&t.coords[i].pow(e))
                }
            })
        })
        .collect();
    TorusPoint::new(coords)
}

pub fn power_map(t: &TorusPoint, f: u64) -> TorusPoint {
    let f = i64::try_from(f).expect("power fits in i64");
    TorusPoint::new(t.coords.iter().map(|c| c.pow(f)).collect())
}

/// `T^w` for the element `w`, with component representatives drawn from the
/// torsion generators of `vg` when they are available.
pub fn fixed_subtorus(vg: &ValueGroup, group: &WeylGroup, w: WeylElement) -> SubtorusDescriptor {
    let n = group.lattice_rank();
    let m = group.matrix(w).to_integer_matrix();
    let rel = m
        .transpose()
        .sub(&IntegerMatrix::identity(n))
        .expect("square");
    let snf = abgroup::smith_normal_form(&rel);
    let component_group = abgroup::cokernel(&rel, n)
        .expect("square")
        .torsion_subgroup();
    let identity_component_basis = abgroup::kernel_basis(&rel);
    let diag = snf.diagonal();
    let v_inv = snf.v.inverse_unimodular().expect("SNF transform is unimodular");
    let mut desc = SubtorusDescriptor {
        identity_component_rank: identity_component_basis.len(),
        component_group,
        component_representatives: Vec::new(),
        representable: false,
        identity_component_basis,
        presentation: FixedPresentation {
            v: snf.v,
            v_inv,
            diag,
        },
    };
    let reps: Option<Vec<TorusPoint>> = desc
        .component_group
        .elements()
        .expect("finite")
        .iter()
        .map(|e| {
            desc.component_log(e)
                .iter()
                .map(|x| vg.root_of_unity(x))
                .collect::<Option<Vec<_>>>()
                .map(TorusPoint::new)
        })
        .collect();
    if let Some(reps) = reps {
        desc.component_representatives = reps;
        desc.representable = true;
    }
    desc
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::weyl::{enumerate_group, LatticeMatrix, DEFAULT_MAX_ORDER};

    fn group(rank: usize, gens: &[&[&[i64]]]) -> WeylGroup {
        let gens = gens
            .iter()
            .map(|g| LatticeMatrix::from_rows(g).unwrap())
            .collect();
        enumerate_group(rank, gens, DEFAULT_MAX_ORDER).unwrap()
    }

    fn vg() -> ValueGroup {
        ValueGroup::default()
    }

    fn pt(text: &str) -> TorusPoint {
        vg().parse_point(text).unwrap()
    }

    fn non_identity(g: &WeylGroup) -> WeylElement {
        g.elements().find(|&e| e != g.identity()).unwrap()
    }

    #[test]
    fn parse_and_display() {
        let t = pt("(qh^2*z1, z1, qh^-2*z1)");
        assert_eq!(t.to_string(), "(qh^2*z1, z1, qh^-2*z1)");
        assert_eq!(pt("( 1 , zeta4^5 )").to_string(), "(1, zeta4)");
        assert_eq!(pt("(-1)").to_string(), "(zeta4^2)");
        assert_eq!(
            vg().parse_coordinate_list("qh^2,1,qh^-2").unwrap().len(),
            3
        );
    }

    #[test]
    fn parse_errors_carry_position() {
        let err = vg().parse_point("(z1, ^2)").unwrap_err();
        assert_eq!(
            err,
            TorusError::Parse {
                position: 5,
                message: "expected generator name, '1' or '-1'".into()
            }
        );
        assert!(matches!(
            vg().parse_coordinate("z^x"),
            Err(TorusError::Parse { position: 2, .. })
        ));
        assert!(vg().parse_point("(z1").is_err());
        assert!(vg().parse_coordinate("z1 z2").is_err());
    }

    #[test]
    fn value_group_validation() {
        assert!(ValueGroup::new(vec!["a".into(), "a".into()], vec![]).is_err());
        assert!(ValueGroup::new(vec![], vec![("zeta".into(), 1)]).is_err());
        let mut g = vg();
        g.extend("zeta6:6").unwrap();
        assert_eq!(g.torsion_order("zeta6"), Some(6));
        assert!(g.extend("zeta6:3").is_err());
        assert!(g.extend("9x").is_err());
    }

    #[test]
    fn act_examples() {
        let torus = Torus::new(2, vg(), "t");
        let swap = group(2, &[&[&[0, 1], &[1, 0]]]);
        let t = pt("(a, b)");
        assert_eq!(torus.act(&swap, swap.identity(), &t).unwrap(), t);
        assert_eq!(torus.act(&swap, non_identity(&swap), &t).unwrap(), pt("(b, a)"));

        let inv = group(1, &[&[&[-1]]]);
        let t = pt("(qh^2*z)");
        assert_eq!(
            act_unchecked(&inv, non_identity(&inv), &t),
            pt("(qh^-2*z^-1)")
        );
        assert!(matches!(
            torus.act(&inv, inv.identity(), &pt("(a)")),
            Err(TorusError::RankMismatch { .. })
        ));
    }

    #[test]
    fn fixed_subtorus_examples() {
        let torus = Torus::new(2, vg(), "t");
        let swap = group(2, &[&[&[0, 1], &[1, 0]]]);
        let id = torus.fixed_subtorus(&swap, swap.identity()).unwrap();
        assert_eq!(id.identity_component_rank, 2);
        assert!(id.component_group.is_trivial());

        let s = torus.fixed_subtorus(&swap, non_identity(&swap)).unwrap();
        assert_eq!(s.identity_component_rank, 1);
        assert!(s.component_group.is_trivial());
        assert_eq!(
            s.identity_component_point(&["z".into()]),
            pt("(z, z)")
        );

        let inv = group(1, &[&[&[-1]]]);
        let d = fixed_subtorus(&vg(), &inv, non_identity(&inv));
        assert_eq!(d.identity_component_rank, 0);
        assert_eq!(d.component_count(), 2);
        assert!(d.representable);
        assert_eq!(d.component_representatives, vec![pt("(1)"), pt("(-1)")]);
    }

    #[test]
    fn representatives_omitted_without_roots() {
        let inv = group(1, &[&[&[-1]]]);
        let bare = ValueGroup::new(vec![QH.into()], vec![]).unwrap();
        let d = fixed_subtorus(&bare, &inv, non_identity(&inv));
        assert!(!d.representable);
        assert!(d.component_representatives.is_empty());
        assert_eq!(d.component_count(), 2);
    }

    #[test]
    fn power_map_examples() {
        assert_eq!(power_map(&pt("(z, qh)"), 1), pt("(z, qh)"));
        assert_eq!(power_map(&pt("(z, z)"), 2), pt("(z^2, z^2)"));
        assert_eq!(power_map(&pt("(zeta4, zeta4)"), 2), pt("(-1, -1)"));
    }

    #[test]
    fn points_equal_examples() {
        let torus = Torus::new(2, vg(), "t");
        let t = pt("(qh^2, z)");
        assert!(torus.points_equal(&t, &t).unwrap());
        assert!(!torus.points_equal(&t, &pt("(q, z)")).unwrap());
        assert!(Torus::new(1, vg(), "t")
            .points_equal(&pt("(zeta4^4*z)"), &pt("(z)"))
            .unwrap());
        assert!(torus.points_equal(&t, &pt("(z)")).is_err());
    }

    #[test]
    fn component_lookup_round_trip() {
        let inv = group(1, &[&[&[-1]]]);
        let d = fixed_subtorus(&vg(), &inv, non_identity(&inv));
        for (e, r) in d.component_group.elements().unwrap().iter().zip(&d.component_representatives) {
            assert_eq!(&d.component_of(r).unwrap(), e);
        }
    }
}
