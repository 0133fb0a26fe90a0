//! Kazhdan-Lusztig triples `(sigma, u, rho)` for `GL(n)` parameters.
//!
//! For a segment `(z, m)` the block of `sigma` is
//! `diag(z qh^(m-1), z qh^(m-3), ..., z qh^-(m-1))` and the block of `u` is the
//! image of `[[1,1],[0,1]]` in the `m`-dimensional irreducible representation
//! of `SL(2)` (entries `binom(k, j)` above the diagonal). That block is a
//! single Jordan block up to conjugacy and satisfies `sigma u sigma^-1 = u^q`
//! on the nose.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Roots;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::Serialize;

use super::{LanglandsError, ReederParameter, RhoLabel};
use crate::abgroup::IntegerMatrix;
use crate::torus::{Coordinate, QH};

/// Finite sum of rational multiples of value-group monomials.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct LaurentPoly {
    terms: BTreeMap<Coordinate, BigRational>,
}

impl LaurentPoly {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn constant(c: BigRational) -> Self {
        Self::term(c, Coordinate::one())
    }

    pub fn integer(c: &BigInt) -> Self {
        Self::constant(BigRational::from_integer(c.clone()))
    }

    pub fn monomial(c: Coordinate) -> Self {
        Self::term(BigRational::one(), c)
    }

    pub fn term(coeff: BigRational, c: Coordinate) -> Self {
        let mut p = Self::zero();
        if !coeff.is_zero() {
            p.terms.insert(c, coeff);
        }
        p
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Coordinate, &BigRational)> {
        self.terms.iter()
    }

    /// The single term of a monomial, `None` for zero or a sum.
    pub fn as_term(&self) -> Option<(&Coordinate, &BigRational)> {
        (self.terms.len() == 1).then(|| self.terms.iter().next().expect("one term"))
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (c, a) in &other.terms {
            let v = out.terms.entry(c.clone()).or_insert_with(BigRational::zero);
            *v += a;
            if v.is_zero() {
                out.terms.remove(c);
            }
        }
        out
    }

    pub fn mul(&self, other: &Self) -> Self {
        let mut out = Self::zero();
        for (c1, a1) in &self.terms {
            for (c2, a2) in &other.terms {
                out = out.add(&Self::term(a1 * a2, c1.mul(c2)));
            }
        }
        out
    }

    pub fn scale(&self, k: &BigRational) -> Self {
        let mut out = Self::zero();
        for (c, a) in &self.terms {
            out = out.add(&Self::term(a * k, c.clone()));
        }
        out
    }

    /// Inverse of a monomial.
    pub fn inv_monomial(&self) -> Option<Self> {
        let (c, a) = self.as_term()?;
        Some(Self::term(a.recip(), c.inv()))
    }
}

impl fmt::Display for LaurentPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        for (i, (c, a)) in self.terms.iter().enumerate() {
            if i > 0 {
                write!(f, " + ")?;
            }
            match (a.is_one(), c.is_one()) {
                (_, true) => write!(f, "{a}")?,
                (true, false) => write!(f, "{c}")?,
                (false, false) => write!(f, "{a}*{c}")?,
            }
        }
        Ok(())
    }
}

impl Serialize for LaurentPoly {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

/// How `q` is treated: as the formal `qh^2`, or as a numeric perfect square.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum QMode {
    Symbolic,
    Numeric { q: u64, sqrt_q: u64 },
}

impl QMode {
    /// Numeric mode; `q` must be a perfect square at least 4 so that `qh` is
    /// an exact integer.
    pub fn numeric(q: u64) -> Result<Self, LanglandsError> {
        let r = q.sqrt();
        if q < 4 || r * r != q {
            return Err(LanglandsError::NotPerfectSquare(q));
        }
        Ok(QMode::Numeric { q, sqrt_q: r })
    }

    /// `q` as a polynomial.
    pub fn q(&self) -> LaurentPoly {
        match self {
            QMode::Symbolic => LaurentPoly::monomial(Coordinate::qh_pow(2)),
            QMode::Numeric { q, .. } => LaurentPoly::integer(&BigInt::from(*q)),
        }
    }

    /// Writes a monomial in this mode: numeric mode replaces `qh` by its
    /// value.
    pub fn instantiate(&self, c: &Coordinate) -> LaurentPoly {
        match self {
            QMode::Symbolic => LaurentPoly::monomial(c.clone()),
            QMode::Numeric { sqrt_q, .. } => {
                let e = c.qh_exponent();
                let r = BigRational::from_integer(BigInt::from(*sqrt_q));
                let coeff = if e >= 0 {
                    num_traits::pow(r, e as usize)
                } else {
                    num_traits::pow(r.recip(), e.unsigned_abs() as usize)
                };
                LaurentPoly::term(coeff, c.without(QH))
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct KLTriple {
    /// Diagonal of `sigma`.
    pub sigma: Vec<LaurentPoly>,
    pub u: IntegerMatrix,
    pub rho: RhoLabel,
    pub mode: QMode,
}

fn binomial(n: usize, k: usize) -> BigInt {
    if k > n {
        return BigInt::zero();
    }
    (0..k).fold(BigInt::one(), |acc, i| acc * BigInt::from(n - i) / BigInt::from(i + 1))
}

/// `[[1,1],[0,1]]` in the `m`-dimensional irreducible representation:
/// upper triangular with entry `binom(k, j)` at `(j, k)`.
pub fn regular_unipotent_block(m: usize) -> IntegerMatrix {
    let mut u = IntegerMatrix::zeros(m, m);
    for k in 0..m {
        for j in 0..=k {
            u[(j, k)] = binomial(k, j);
        }
    }
    u
}

/// Builds `(sigma, u, rho)` for a parameter. Segments are laid out in their
/// canonical order.
pub fn kl_triple(p: &ReederParameter, mode: QMode) -> KLTriple {
    let n = p.rank();
    let mut sigma = Vec::with_capacity(n);
    let mut u = IntegerMatrix::zeros(n, n);
    let mut offset = 0;
    for seg in &p.segments {
        let m = seg.length;
        for k in 0..m {
            let e = (m - 1) as i64 - 2 * k as i64;
            sigma.push(mode.instantiate(&seg.center.mul(&Coordinate::qh_pow(e))));
        }
        let block = regular_unipotent_block(m);
        for j in 0..m {
            for k in 0..m {
                u[(offset + j, offset + k)] = block[(j, k)].clone();
            }
        }
        offset += m;
    }
    KLTriple {
        sigma,
        u,
        rho: p.rho,
        mode,
    }
}

fn matrix_power(m: &IntegerMatrix, mut e: u64) -> IntegerMatrix {
    let mut base = m.clone();
    let mut acc = IntegerMatrix::identity(m.rows());
    while e > 0 {
        if e & 1 == 1 {
            acc = acc.mul(&base).expect("square");
        }
        base = base.mul(&base).expect("square");
        e >>= 1;
    }
    acc
}

impl KLTriple {
    pub fn dim(&self) -> usize {
        self.sigma.len()
    }

    /// `sigma u sigma^-1` entrywise.
    pub fn conjugated_u(&self) -> Vec<Vec<LaurentPoly>> {
        let n = self.dim();
        (0..n)
            .map(|i| {
                (0..n)
                    .map(|j| {
                        let uij = &self.u[(i, j)];
                        if uij.is_zero() {
                            return LaurentPoly::zero();
                        }
                        let inv = self.sigma[j].inv_monomial().expect("sigma entries are monomials");
                        LaurentPoly::integer(uij).mul(&self.sigma[i]).mul(&inv)
                    })
                    .collect()
            })
            .collect()
    }

    /// `u^q`. Numerically by repeated squaring; symbolically as
    /// `sum_k binom(q, k) (u - 1)^k`, with `binom(q, k)` a polynomial in `qh`.
    pub fn u_to_the_q(&self) -> Vec<Vec<LaurentPoly>> {
        let n = self.dim();
        match self.mode {
            QMode::Numeric { q, .. } => {
                let p = matrix_power(&self.u, q);
                (0..n)
                    .map(|i| (0..n).map(|j| LaurentPoly::integer(&p[(i, j)])).collect())
                    .collect()
            }
            QMode::Symbolic => {
                let nil = self.u.sub(&IntegerMatrix::identity(n)).expect("square");
                let q = self.mode.q();
                let mut out = vec![vec![LaurentPoly::zero(); n]; n];
                let mut nil_pow = IntegerMatrix::identity(n);
                let mut binom = LaurentPoly::constant(BigRational::one());
                for k in 0..n.max(1) {
                    if k > 0 {
                        // binom(q, k) = binom(q, k-1) * (q - (k-1)) / k
                        let factor = q
                            .add(&LaurentPoly::integer(&BigInt::from(-(k as i64 - 1))))
                            .scale(&BigRational::new(BigInt::one(), BigInt::from(k)));
                        binom = binom.mul(&factor);
                        nil_pow = nil_pow.mul(&nil).expect("square");
                    }
                    for (i, row) in out.iter_mut().enumerate() {
                        for (j, cell) in row.iter_mut().enumerate() {
                            let c = &nil_pow[(i, j)];
                            if !c.is_zero() {
                                *cell = cell.add(&binom.mul(&LaurentPoly::integer(c)));
                            }
                        }
                    }
                }
                out
            }
        }
    }

    /// `(u - 1)^n = 0`.
    pub fn u_is_unipotent(&self) -> bool {
        let n = self.dim();
        let nil = self.u.sub(&IntegerMatrix::identity(n)).expect("square");
        matrix_power(&nil, n as u64).entries().iter().all(Zero::is_zero)
    }

    /// Checks `sigma u sigma^-1 = u^q` exactly, and that `u` is unipotent.
    pub fn verify(&self) -> bool {
        self.u_is_unipotent() && self.conjugated_u() == self.u_to_the_q()
    }

    /// Jordan type of `u`, from the ranks of the powers of `u - 1`.
    pub fn jordan_type(&self) -> Vec<usize> {
        jordan_type_of_unipotent(&self.u)
    }

    /// Segments read back off the triple: blocks where the superdiagonal of
    /// `u` vanishes, center = top entry of the block divided by `qh^(m-1)`
    /// (in the mode's scalars). Returned as `(length, center)` pairs in block
    /// order.
    pub fn recover_segments(&self) -> Vec<(usize, LaurentPoly)> {
        let n = self.dim();
        let mut out = Vec::new();
        let mut start = 0;
        while start < n {
            let mut end = start + 1;
            while end < n && !self.u[(end - 1, end)].is_zero() {
                end += 1;
            }
            let m = end - start;
            let shift = self
                .mode
                .instantiate(&Coordinate::qh_pow(-((m - 1) as i64)));
            out.push((m, self.sigma[start].mul(&shift)));
            start = end;
        }
        out
    }
}

/// Jordan type (partition, descending) of a unipotent integer matrix.
pub fn jordan_type_of_unipotent(u: &IntegerMatrix) -> Vec<usize> {
    let n = u.rows();
    let nil = u.sub(&IntegerMatrix::identity(n)).expect("square");
    // r_k = rank (u-1)^k; number of blocks of size >= k is r_{k-1} - r_k
    let mut ranks = vec![n];
    let mut p = IntegerMatrix::identity(n);
    for _ in 0..n {
        p = p.mul(&nil).expect("square");
        ranks.push(p.rank());
    }
    let at_least: Vec<usize> = (1..=n).map(|k| ranks[k - 1] - ranks[k]).collect();
    let mut parts = Vec::new();
    for k in (1..=n).rev() {
        let exact = at_least[k - 1] - at_least.get(k).copied().unwrap_or(0);
        parts.extend(std::iter::repeat_n(k, exact));
    }
    parts
}

/// Serializable view of a triple.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct KLTripleReport {
    pub q: String,
    pub sigma: Vec<LaurentPoly>,
    pub u: Vec<Vec<String>>,
    pub rho: RhoLabel,
    pub jordan_type: Vec<usize>,
    pub check: &'static str,
}

impl KLTriple {
    pub fn report(&self) -> KLTripleReport {
        KLTripleReport {
            q: match self.mode {
                QMode::Symbolic => "qh^2".into(),
                QMode::Numeric { q, .. } => q.to_string(),
            },
            sigma: self.sigma.clone(),
            u: (0..self.u.rows())
                .map(|i| self.u.row(i).iter().map(ToString::to_string).collect())
                .collect(),
            rho: self.rho,
            jordan_type: self.jordan_type(),
            check: if self.verify() { "pass" } else { "fail" },
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::langlands::Segment;
    use crate::torus::ValueGroup;

    fn param(spec: &[(&str, usize)]) -> ReederParameter {
        let vg = ValueGroup::default();
        ReederParameter::new(
            spec.iter()
                .map(|(c, m)| Segment::new(vg.parse_coordinate(c).unwrap(), *m))
                .collect(),
        )
    }

    fn rat(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    #[test]
    fn steinberg_gl2_at_q4() {
        let t = kl_triple(&param(&[("1", 2)]), QMode::numeric(4).unwrap());
        assert_eq!(t.sigma[0], LaurentPoly::constant(rat(2, 1)));
        assert_eq!(t.sigma[1], LaurentPoly::constant(rat(1, 2)));
        assert_eq!(t.u, IntegerMatrix::from_rows(&[[1, 1], [0, 1]]).unwrap());
        // sigma u sigma^-1 = [[1, 4], [0, 1]] = u^4
        let conj = t.conjugated_u();
        assert_eq!(conj[0][1], LaurentPoly::constant(rat(4, 1)));
        assert!(t.verify());
    }

    #[test]
    fn singletons_give_identity_u() {
        let t = kl_triple(&param(&[("z", 1), ("y", 1)]), QMode::Symbolic);
        assert_eq!(t.u, IntegerMatrix::identity(2));
        assert!(t.verify());
    }

    #[test]
    fn length_three_at_q9() {
        let t = kl_triple(&param(&[("z", 3)]), QMode::numeric(9).unwrap());
        let z = Coordinate::free("z");
        assert_eq!(t.sigma[0], LaurentPoly::term(rat(9, 1), z.clone()));
        assert_eq!(t.sigma[1], LaurentPoly::monomial(z.clone()));
        assert_eq!(t.sigma[2], LaurentPoly::term(rat(1, 9), z));
        // u^9 is the image of [[1,9],[0,1]]: entries 9, 18 and 81
        let p = t.u_to_the_q();
        assert_eq!(p[0][1], LaurentPoly::constant(rat(9, 1)));
        assert_eq!(p[1][2], LaurentPoly::constant(rat(18, 1)));
        assert_eq!(p[0][2], LaurentPoly::constant(rat(81, 1)));
        assert!(t.verify());
        assert!(kl_triple(&param(&[("z", 3)]), QMode::Symbolic).verify());
    }

    #[test]
    fn plain_jordan_block_fails_the_relation() {
        let mut t = kl_triple(&param(&[("z", 3)]), QMode::numeric(9).unwrap());
        t.u = IntegerMatrix::from_rows(&[[1, 1, 0], [0, 1, 1], [0, 0, 1]]).unwrap();
        assert!(t.u_is_unipotent());
        assert!(!t.verify());
    }

    #[test]
    fn q_must_be_a_square() {
        assert_eq!(QMode::numeric(5), Err(LanglandsError::NotPerfectSquare(5)));
        assert_eq!(QMode::numeric(1), Err(LanglandsError::NotPerfectSquare(1)));
        assert!(QMode::numeric(16).is_ok());
    }

    #[test]
    fn jordan_types() {
        let t = kl_triple(&param(&[("z", 3), ("y", 2), ("x", 1), ("w", 2)]), QMode::Symbolic);
        assert_eq!(t.jordan_type(), vec![3, 2, 2, 1]);
        assert_eq!(jordan_type_of_unipotent(&IntegerMatrix::identity(3)), vec![1, 1, 1]);
    }

    #[test]
    fn recover_segments_both_modes() {
        let p = param(&[("z", 2), ("qh^2*y", 1)]);
        for mode in [QMode::Symbolic, QMode::numeric(4).unwrap()] {
            let t = kl_triple(&p, mode);
            let got = t.recover_segments();
            let want: Vec<(usize, LaurentPoly)> = p
                .segments
                .iter()
                .map(|s| (s.length, mode.instantiate(&s.center)))
                .collect();
            assert_eq!(got, want);
        }
    }

    #[test]
    fn display_scalars() {
        let t = kl_triple(&param(&[("z", 2)]), QMode::numeric(4).unwrap());
        let s: Vec<String> = t.sigma.iter().map(ToString::to_string).collect();
        assert_eq!(s, vec!["2*z", "1/2*z"]);
    }
}
