//! Exact integer linear algebra: Smith normal form, kernels, cokernels and
//! finitely generated abelian groups.
//!
//! Everything here works over arbitrary-precision integers. The Smith normal
//! form uses a deterministic pivot rule (smallest nonzero absolute value,
//! ties broken by lowest `(row, col)`) so the transforms it returns are
//! reproducible across runs.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AbGroupError {
    #[error("shape mismatch: expected {expected}, got {given}")]
    Shape { expected: String, given: String },
    #[error("ragged matrix: row {row} has {len} entries, expected {expected}")]
    Ragged {
        row: usize,
        len: usize,
        expected: usize,
    },
    #[error("cannot parse matrix: {0}")]
    Parse(String),
}

/// Dense integer matrix in row-major order.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct IntegerMatrix {
    rows: usize,
    cols: usize,
    entries: Vec<BigInt>,
}

impl IntegerMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            entries: vec![BigInt::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = BigInt::one();
        }
        m
    }

    pub fn from_entries(rows: usize, cols: usize, entries: Vec<BigInt>) -> Result<Self, AbGroupError> {
        if entries.len() != rows * cols {
            return Err(AbGroupError::Shape {
                expected: format!("{} entries", rows * cols),
                given: format!("{} entries", entries.len()),
            });
        }
        Ok(Self { rows, cols, entries })
    }

    /// Builds a matrix from rows of machine integers. An empty slice gives the
    /// 0x0 matrix.
    pub fn from_rows<R: AsRef<[i64]>>(rows: &[R]) -> Result<Self, AbGroupError> {
        let cols = rows.first().map_or(0, |r| r.as_ref().len());
        let mut entries = Vec::with_capacity(rows.len() * cols);
        for (i, r) in rows.iter().enumerate() {
            let r = r.as_ref();
            if r.len() != cols {
                return Err(AbGroupError::Ragged {
                    row: i,
                    len: r.len(),
                    expected: cols,
                });
            }
            entries.extend(r.iter().map(|&x| BigInt::from(x)));
        }
        Ok(Self {
            rows: rows.len(),
            cols,
            entries,
        })
    }

    /// Parses `[[a,b],[c,d]]` style text (whitespace is ignored).
    pub fn parse(text: &str) -> Result<Self, AbGroupError> {
        let rows: Vec<Vec<i64>> =
            serde_json::from_str(text).map_err(|e| AbGroupError::Parse(e.to_string()))?;
        Self::from_rows(&rows)
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn entries(&self) -> &[BigInt] {
        &self.entries
    }

    pub fn row(&self, i: usize) -> &[BigInt] {
        &self.entries[i * self.cols..(i + 1) * self.cols]
    }

    pub fn column(&self, j: usize) -> Vec<BigInt> {
        (0..self.rows).map(|i| self[(i, j)].clone()).collect()
    }

    pub fn to_rows_i64(&self) -> Option<Vec<Vec<i64>>> {
        (0..self.rows)
            .map(|i| self.row(i).iter().map(|x| x.to_i64()).collect())
            .collect()
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t[(j, i)] = self[(i, j)].clone();
            }
        }
        t
    }

    pub fn mul(&self, other: &Self) -> Result<Self, AbGroupError> {
        if self.cols != other.rows {
            return Err(AbGroupError::Shape {
                expected: format!("{} rows on the right factor", self.cols),
                given: format!("{}x{}", other.rows, other.cols),
            });
        }
        let mut out = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = &self[(i, k)];
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = &other[(k, j)];
                    if !b.is_zero() {
                        out[(i, j)] += a * b;
                    }
                }
            }
        }
        Ok(out)
    }

    pub fn sub(&self, other: &Self) -> Result<Self, AbGroupError> {
        if self.rows != other.rows || self.cols != other.cols {
            return Err(AbGroupError::Shape {
                expected: format!("{}x{}", self.rows, self.cols),
                given: format!("{}x{}", other.rows, other.cols),
            });
        }
        let entries = self
            .entries
            .iter()
            .zip(&other.entries)
            .map(|(a, b)| a - b)
            .collect();
        Ok(Self {
            rows: self.rows,
            cols: self.cols,
            entries,
        })
    }

    pub fn mul_vec(&self, v: &[BigInt]) -> Vec<BigInt> {
        assert_eq!(v.len(), self.cols, "vector length must match column count");
        (0..self.rows)
            .map(|i| self.row(i).iter().zip(v).map(|(a, b)| a * b).sum())
            .collect()
    }

    /// Determinant by fraction-free (Bareiss) elimination.
    pub fn determinant(&self) -> Option<BigInt> {
        if !self.is_square() {
            return None;
        }
        let n = self.rows;
        if n == 0 {
            return Some(BigInt::one());
        }
        let mut a = self.clone();
        let mut sign = BigInt::one();
        let mut prev = BigInt::one();
        for k in 0..n - 1 {
            if a[(k, k)].is_zero() {
                match (k + 1..n).find(|&i| !a[(i, k)].is_zero()) {
                    Some(i) => {
                        a.swap_rows(i, k);
                        sign = -sign;
                    }
                    None => return Some(BigInt::zero()),
                }
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    let v = (&a[(i, j)] * &a[(k, k)] - &a[(i, k)] * &a[(k, j)]) / &prev;
                    a[(i, j)] = v;
                }
            }
            prev = a[(k, k)].clone();
        }
        Some(sign * &a[(n - 1, n - 1)])
    }

    pub fn is_unimodular(&self) -> bool {
        self.determinant().is_some_and(|d| d.abs().is_one())
    }

    pub fn is_diagonal(&self) -> bool {
        (0..self.rows).all(|i| (0..self.cols).all(|j| i == j || self[(i, j)].is_zero()))
    }

    pub fn rank(&self) -> usize {
        smith_normal_form(self).rank()
    }

    /// Inverse of a unimodular matrix, `None` otherwise.
    pub fn inverse_unimodular(&self) -> Option<Self> {
        if !self.is_unimodular() {
            return None;
        }
        let n = self.rows;
        let mut a: Vec<Vec<BigRational>> = (0..n)
            .map(|i| {
                self.row(i)
                    .iter()
                    .cloned()
                    .map(BigRational::from_integer)
                    .chain((0..n).map(|j| BigRational::from_integer(BigInt::from((i == j) as i64))))
                    .collect()
            })
            .collect();
        for c in 0..n {
            let p = (c..n).find(|&r| !a[r][c].is_zero())?;
            a.swap(c, p);
            let inv = a[c][c].recip();
            for x in a[c].iter_mut() {
                *x *= &inv;
            }
            for r in 0..n {
                if r != c && !a[r][c].is_zero() {
                    let f = a[r][c].clone();
                    let pivot = a[c].clone();
                    for (x, y) in a[r].iter_mut().zip(&pivot) {
                        *x -= &f * y;
                    }
                }
            }
        }
        let entries = a
            .into_iter()
            .flat_map(|row| row.into_iter().skip(n).map(|x| x.to_integer()))
            .collect();
        Some(Self { rows: n, cols: n, entries })
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.entries.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    fn swap_cols(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for i in 0..self.rows {
            self.entries.swap(i * self.cols + a, i * self.cols + b);
        }
    }

    /// row[dst] += factor * row[src]
    fn add_row_multiple(&mut self, dst: usize, src: usize, factor: &BigInt) {
        for j in 0..self.cols {
            let v = &self[(src, j)] * factor;
            self[(dst, j)] += v;
        }
    }

    /// col[dst] += factor * col[src]
    fn add_col_multiple(&mut self, dst: usize, src: usize, factor: &BigInt) {
        for i in 0..self.rows {
            let v = &self[(i, src)] * factor;
            self[(i, dst)] += v;
        }
    }

    fn negate_row(&mut self, i: usize) {
        for j in 0..self.cols {
            let v = -&self[(i, j)];
            self[(i, j)] = v;
        }
    }
}

impl std::ops::Index<(usize, usize)> for IntegerMatrix {
    type Output = BigInt;
    fn index(&self, (i, j): (usize, usize)) -> &BigInt {
        &self.entries[i * self.cols + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for IntegerMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut BigInt {
        &mut self.entries[i * self.cols + j]
    }
}

impl fmt::Debug for IntegerMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for IntegerMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for i in 0..self.rows {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "[")?;
            for (j, x) in self.row(i).iter().enumerate() {
                if j > 0 {
                    write!(f, ",")?;
                }
                write!(f, "{x}")?;
            }
            write!(f, "]")?;
        }
        write!(f, "]")
    }
}

/// `U * M * V = D` with `U`, `V` unimodular and `D` diagonal with
/// `d1 | d2 | ...`, all `d_i >= 0`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SnfDecomposition {
    pub u: IntegerMatrix,
    pub d: IntegerMatrix,
    pub v: IntegerMatrix,
}

impl SnfDecomposition {
    /// Diagonal of `D` (length `min(rows, cols)`).
    pub fn diagonal(&self) -> Vec<BigInt> {
        (0..self.d.rows().min(self.d.cols()))
            .map(|i| self.d[(i, i)].clone())
            .collect()
    }

    pub fn rank(&self) -> usize {
        self.diagonal().iter().filter(|d| !d.is_zero()).count()
    }
}

fn smallest_nonzero(a: &IntegerMatrix, from: usize) -> Option<(usize, usize)> {
    let mut best: Option<(usize, usize)> = None;
    for i in from..a.rows() {
        for j in from..a.cols() {
            let x = &a[(i, j)];
            if x.is_zero() {
                continue;
            }
            // strict comparison keeps the lowest (row, col) on ties
            if best.is_none_or(|(bi, bj)| x.abs() < a[(bi, bj)].abs()) {
                best = Some((i, j));
            }
        }
    }
    best
}

/// Smith normal form with transforms. Total on any rectangular matrix,
/// including empty ones.
pub fn smith_normal_form(m: &IntegerMatrix) -> SnfDecomposition {
    let (rows, cols) = (m.rows(), m.cols());
    let mut a = m.clone();
    let mut u = IntegerMatrix::identity(rows);
    let mut v = IntegerMatrix::identity(cols);

    for t in 0..rows.min(cols) {
        while let Some((pi, pj)) = smallest_nonzero(&a, t) {
            a.swap_rows(t, pi);
            u.swap_rows(t, pi);
            a.swap_cols(t, pj);
            v.swap_cols(t, pj);

            let mut clean = true;
            for i in t + 1..rows {
                if a[(i, t)].is_zero() {
                    continue;
                }
                let q = a[(i, t)].div_floor(&a[(t, t)]);
                let neg = -q;
                a.add_row_multiple(i, t, &neg);
                u.add_row_multiple(i, t, &neg);
                clean &= a[(i, t)].is_zero();
            }
            for j in t + 1..cols {
                if a[(t, j)].is_zero() {
                    continue;
                }
                let q = a[(t, j)].div_floor(&a[(t, t)]);
                let neg = -q;
                a.add_col_multiple(j, t, &neg);
                v.add_col_multiple(j, t, &neg);
                clean &= a[(t, j)].is_zero();
            }
            if !clean {
                continue;
            }
            // pivot row and column are clear; enforce divisibility on the rest
            let p = a[(t, t)].clone();
            let offender = (t + 1..rows)
                .find(|&i| (t + 1..cols).any(|j| !a[(i, j)].is_multiple_of(&p)));
            match offender {
                Some(i) => {
                    let one = BigInt::one();
                    a.add_row_multiple(t, i, &one);
                    u.add_row_multiple(t, i, &one);
                }
                None => break,
            }
        }
        if a[(t, t)].is_negative() {
            a.negate_row(t);
            u.negate_row(t);
        }
    }

    SnfDecomposition { u, d: a, v }
}

/// A finitely generated abelian group `Z^r + Z/d1 + ... + Z/dk` in invariant
/// factor form (`d_i >= 2`, `d_i | d_{i+1}`). Two groups are isomorphic iff the
/// values are equal.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct FgAbelianGroup {
    pub free_rank: usize,
    pub torsion_orders: Vec<BigInt>,
}

impl FgAbelianGroup {
    pub fn trivial() -> Self {
        Self {
            free_rank: 0,
            torsion_orders: Vec::new(),
        }
    }

    /// Canonicalizes an arbitrary list of cyclic orders (0 meaning `Z`).
    pub fn from_cyclic_orders(orders: &[BigInt]) -> Self {
        let n = orders.len();
        let mut diag = IntegerMatrix::zeros(n, n);
        for (i, d) in orders.iter().enumerate() {
            diag[(i, i)] = d.abs();
        }
        cokernel(&diag, n).expect("square relation matrix always matches")
    }

    pub fn is_finite(&self) -> bool {
        self.free_rank == 0
    }

    pub fn is_trivial(&self) -> bool {
        self.free_rank == 0 && self.torsion_orders.is_empty()
    }

    /// Order of the group, `None` if infinite.
    pub fn order(&self) -> Option<BigInt> {
        self.is_finite()
            .then(|| self.torsion_orders.iter().product::<BigInt>())
    }

    pub fn torsion_subgroup(&self) -> Self {
        Self {
            free_rank: 0,
            torsion_orders: self.torsion_orders.clone(),
        }
    }

    /// Reduces a coordinate vector (`free_rank` integer entries followed by one
    /// entry per torsion factor) to canonical form.
    pub fn reduce(&self, element: &[BigInt]) -> Vec<BigInt> {
        assert_eq!(element.len(), self.free_rank + self.torsion_orders.len());
        let (free, tors) = element.split_at(self.free_rank);
        free.iter()
            .cloned()
            .chain(tors.iter().zip(&self.torsion_orders).map(|(x, d)| x.mod_floor(d)))
            .collect()
    }

    pub fn add(&self, a: &[BigInt], b: &[BigInt]) -> Vec<BigInt> {
        let sum: Vec<BigInt> = a.iter().zip(b).map(|(x, y)| x + y).collect();
        self.reduce(&sum)
    }

    pub fn neg(&self, a: &[BigInt]) -> Vec<BigInt> {
        let n: Vec<BigInt> = a.iter().map(|x| -x).collect();
        self.reduce(&n)
    }

    /// All elements of a finite group, in lexicographic order of canonical
    /// coordinates. Returns `None` for infinite groups.
    pub fn elements(&self) -> Option<Vec<Vec<BigInt>>> {
        if !self.is_finite() {
            return None;
        }
        let mut out = vec![Vec::new()];
        for d in &self.torsion_orders {
            let d = d.to_u64().expect("torsion order fits in u64");
            out = out
                .into_iter()
                .flat_map(|prefix| {
                    (0..d).map(move |k| {
                        let mut e = prefix.clone();
                        e.push(BigInt::from(k));
                        e
                    })
                })
                .collect();
        }
        Some(out)
    }
}

impl fmt::Display for FgAbelianGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts: Vec<String> = Vec::new();
        if self.free_rank > 0 {
            parts.push(if self.free_rank == 1 {
                "Z".into()
            } else {
                format!("Z^{}", self.free_rank)
            });
        }
        parts.extend(self.torsion_orders.iter().map(|d| format!("Z/{d}")));
        if parts.is_empty() {
            write!(f, "0")
        } else {
            write!(f, "{}", parts.join(" + "))
        }
    }
}

/// `Z^rows / image(M)`. `lattice_rank` is the rank of the ambient lattice the
/// caller expects `M` to map into.
pub fn cokernel(m: &IntegerMatrix, lattice_rank: usize) -> Result<FgAbelianGroup, AbGroupError> {
    if m.rows() != lattice_rank {
        return Err(AbGroupError::Shape {
            expected: format!("{lattice_rank} rows"),
            given: format!("{}x{}", m.rows(), m.cols()),
        });
    }
    let snf = smith_normal_form(m);
    let diag = snf.diagonal();
    let rank = snf.rank();
    let torsion_orders = diag
        .into_iter()
        .filter(|d| !d.is_zero() && !d.is_one())
        .collect();
    Ok(FgAbelianGroup {
        free_rank: m.rows() - rank,
        torsion_orders,
    })
}

/// Saturated basis of `{v : M v = 0}`, returned in Hermite normal form
/// (echelon, positive pivots, entries above each pivot reduced into
/// `[0, pivot)`), so the output depends only on the kernel lattice.
pub fn kernel_basis(m: &IntegerMatrix) -> Vec<Vec<BigInt>> {
    let snf = smith_normal_form(m);
    let rank = snf.rank();
    let basis: Vec<Vec<BigInt>> = (rank..m.cols()).map(|j| snf.v.column(j)).collect();
    hermite_rows(basis)
}

/// Row-style Hermite normal form of a list of linearly independent vectors.
pub fn hermite_rows(mut rows: Vec<Vec<BigInt>>) -> Vec<Vec<BigInt>> {
    let Some(width) = rows.first().map(Vec::len) else {
        return rows;
    };
    let mut pivot_row = 0;
    for col in 0..width {
        if pivot_row == rows.len() {
            break;
        }
        // gcd-reduce column `col` among rows pivot_row.. onto pivot_row
        loop {
            let nonzero: Vec<usize> = (pivot_row..rows.len())
                .filter(|&i| !rows[i][col].is_zero())
                .collect();
            if nonzero.is_empty() {
                break;
            }
            let best = *nonzero
                .iter()
                .min_by(|&&a, &&b| rows[a][col].abs().cmp(&rows[b][col].abs()).then(a.cmp(&b)))
                .expect("nonempty");
            rows.swap(pivot_row, best);
            let mut done = true;
            for i in pivot_row + 1..rows.len() {
                if rows[i][col].is_zero() {
                    continue;
                }
                let q = rows[i][col].div_floor(&rows[pivot_row][col]);
                let pivot = rows[pivot_row].clone();
                for (x, p) in rows[i].iter_mut().zip(&pivot) {
                    *x -= &q * p;
                }
                done &= rows[i][col].is_zero();
            }
            if done {
                break;
            }
        }
        if rows[pivot_row][col].is_zero() {
            continue;
        }
        if rows[pivot_row][col].is_negative() {
            for x in rows[pivot_row].iter_mut() {
                *x = -&*x;
            }
        }
        let pivot = rows[pivot_row].clone();
        for row in rows.iter_mut().take(pivot_row) {
            let q = row[col].div_floor(&pivot[col]);
            if q.is_zero() {
                continue;
            }
            for (x, p) in row.iter_mut().zip(&pivot) {
                *x -= &q * p;
            }
        }
        pivot_row += 1;
    }
    rows
}
