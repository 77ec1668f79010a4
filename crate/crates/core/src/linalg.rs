//! Exact dense linear algebra over a [`Field`].

use std::fmt;

use num_bigint::BigUint;
use num_traits::{One, Pow};

use crate::error::{Error, Result};
use crate::gf::{Fe, Field};
use crate::poly::Poly;

/// Dense row-major matrix over a finite field.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct MatF {
    field: Field,
    rows: usize,
    cols: usize,
    data: Vec<Fe>,
}

/// Result of [`MatF::rref`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Rref {
    pub matrix: MatF,
    pub rank: usize,
    pub pivots: Vec<usize>,
}

impl MatF {
    pub fn new(field: &Field, rows: usize, cols: usize, data: Vec<Fe>) -> Result<MatF> {
        if data.len() != rows * cols {
            return Err(Error::shape(format!(
                "{} entries for a {rows}x{cols} matrix",
                data.len()
            )));
        }
        Ok(MatF {
            field: field.clone(),
            rows,
            cols,
            data,
        })
    }

    pub fn zeros(field: &Field, rows: usize, cols: usize) -> MatF {
        MatF {
            field: field.clone(),
            rows,
            cols,
            data: vec![Fe::ZERO; rows * cols],
        }
    }

    pub fn from_fn(field: &Field, rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> Fe) -> MatF {
        let data = (0..rows * cols).map(|i| f(i / cols, i % cols)).collect();
        MatF {
            field: field.clone(),
            rows,
            cols,
            data,
        }
    }

    pub fn identity(field: &Field, n: usize) -> MatF {
        MatF::identity_nk(field, n, n)
    }

    /// `I_{n,k}`: ones at `(i, i)`, zeros elsewhere.
    pub fn identity_nk(field: &Field, n: usize, k: usize) -> MatF {
        MatF::from_fn(field, n, k, |i, j| if i == j { Fe::ONE } else { Fe::ZERO })
    }

    /// `J^{l,k}`: the `l x k` matrix whose bottom `k x k` block is the identity.
    pub fn j_matrix(field: &Field, l: usize, k: usize) -> MatF {
        MatF::from_fn(field, l, k, |i, j| if i + k == j + l { Fe::ONE } else { Fe::ZERO })
    }

    /// Integer entries mapped into the prime subfield. All rows must have equal length.
    pub fn from_ints(field: &Field, rows: &[&[i64]]) -> MatF {
        let cols = rows.first().map_or(0, |r| r.len());
        assert!(rows.iter().all(|r| r.len() == cols), "ragged rows");
        MatF::from_fn(field, rows.len(), cols, |i, j| field.from_int(rows[i][j]))
    }

    /// Matrix whose entries are the canonical indices given, row-major.
    pub fn from_indices(field: &Field, rows: usize, cols: usize, idx: &[u64]) -> Result<MatF> {
        let data = idx.iter().map(|&v| field.element(v)).collect::<Result<Vec<_>>>()?;
        MatF::new(field, rows, cols, data)
    }

    /// The `idx`-th matrix in lexicographic order of its row-major entries
    /// (last entry varies fastest). `idx` is taken modulo `q^(rows*cols)`.
    pub fn from_counter(field: &Field, rows: usize, cols: usize, mut idx: u64) -> MatF {
        let q = field.order();
        let mut data = vec![Fe::ZERO; rows * cols];
        for slot in data.iter_mut().rev() {
            *slot = field.from_u64_wrapping(idx % q);
            idx /= q;
        }
        MatF {
            field: field.clone(),
            rows,
            cols,
            data,
        }
    }

    pub fn from_strings<S: AsRef<str>>(field: &Field, rows: &[Vec<S>]) -> Result<MatF> {
        let cols = rows.first().map_or(0, |r| r.len());
        if rows.iter().any(|r| r.len() != cols) {
            return Err(Error::Parse("ragged matrix rows".into()));
        }
        let data = rows
            .iter()
            .flatten()
            .map(|s| field.parse(s.as_ref()))
            .collect::<Result<Vec<_>>>()?;
        MatF::new(field, rows.len(), cols, data)
    }

    /// JSON-facing form: array of rows of field-element strings.
    pub fn to_strings(&self) -> Vec<Vec<String>> {
        (0..self.rows)
            .map(|i| self.row(i).iter().map(|&a| self.field.format(a)).collect())
            .collect()
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn shape(&self) -> (usize, usize) {
        (self.rows, self.cols)
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn data(&self) -> &[Fe] {
        &self.data
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> Fe {
        self.data[i * self.cols + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: Fe) {
        self.data[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> &[Fe] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|a| a.is_zero())
    }

    fn check_field(&self, other: &MatF) -> Result<()> {
        if self.field.same(&other.field) {
            Ok(())
        } else {
            Err(Error::MixedFields)
        }
    }

    pub fn mul(&self, other: &MatF) -> Result<MatF> {
        self.check_field(other)?;
        if self.cols != other.rows {
            return Err(Error::shape(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let f = &self.field;
        let mut out = MatF::zeros(f, self.rows, other.cols);
        for i in 0..self.rows {
            for t in 0..self.cols {
                let a = self.get(i, t);
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let idx = i * other.cols + j;
                    out.data[idx] = f.add(out.data[idx], f.mul(a, other.get(t, j)));
                }
            }
        }
        Ok(out)
    }

    fn zip(&self, other: &MatF, op: impl Fn(Fe, Fe) -> Fe) -> Result<MatF> {
        self.check_field(other)?;
        if self.shape() != other.shape() {
            return Err(Error::shape(format!("{:?} vs {:?}", self.shape(), other.shape())));
        }
        let data = self.data.iter().zip(&other.data).map(|(&a, &b)| op(a, b)).collect();
        MatF::new(&self.field, self.rows, self.cols, data)
    }

    pub fn add(&self, other: &MatF) -> Result<MatF> {
        let f = self.field.clone();
        self.zip(other, |a, b| f.add(a, b))
    }

    pub fn sub(&self, other: &MatF) -> Result<MatF> {
        let f = self.field.clone();
        self.zip(other, |a, b| f.sub(a, b))
    }

    pub fn neg(&self) -> MatF {
        self.map(|f, a| f.neg(a))
    }

    pub fn scale(&self, c: Fe) -> MatF {
        self.map(|f, a| f.mul(a, c))
    }

    fn map(&self, op: impl Fn(&Field, Fe) -> Fe) -> MatF {
        let data = self.data.iter().map(|&a| op(&self.field, a)).collect();
        MatF {
            field: self.field.clone(),
            rows: self.rows,
            cols: self.cols,
            data,
        }
    }

    pub fn transpose(&self) -> MatF {
        MatF::from_fn(&self.field, self.cols, self.rows, |i, j| self.get(j, i))
    }

    pub fn pow(&self, exp: u32) -> Result<MatF> {
        if !self.is_square() {
            return Err(Error::shape("power of a non-square matrix"));
        }
        let mut acc = MatF::identity(&self.field, self.rows);
        for _ in 0..exp {
            acc = acc.mul(self)?;
        }
        Ok(acc)
    }

    /// `[self other]`
    pub fn hstack(&self, other: &MatF) -> Result<MatF> {
        self.check_field(other)?;
        if self.rows != other.rows {
            return Err(Error::shape(format!(
                "hstack of {} and {} rows",
                self.rows, other.rows
            )));
        }
        let cols = self.cols + other.cols;
        Ok(MatF::from_fn(&self.field, self.rows, cols, |i, j| {
            if j < self.cols {
                self.get(i, j)
            } else {
                other.get(i, j - self.cols)
            }
        }))
    }

    /// `[self; other]`
    pub fn vstack(&self, other: &MatF) -> Result<MatF> {
        self.check_field(other)?;
        if self.cols != other.cols {
            return Err(Error::shape(format!(
                "vstack of {} and {} columns",
                self.cols, other.cols
            )));
        }
        let mut data = self.data.clone();
        data.extend_from_slice(&other.data);
        MatF::new(&self.field, self.rows + other.rows, self.cols, data)
    }

    pub fn submatrix(&self, rows: std::ops::Range<usize>, cols: std::ops::Range<usize>) -> MatF {
        let (r0, c0) = (rows.start, cols.start);
        MatF::from_fn(&self.field, rows.len(), cols.len(), |i, j| self.get(r0 + i, c0 + j))
    }

    pub fn columns(&self, cols: std::ops::Range<usize>) -> MatF {
        self.submatrix(0..self.rows, cols)
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a != b {
            for j in 0..self.cols {
                self.data.swap(a * self.cols + j, b * self.cols + j);
            }
        }
    }

    /// In-place reduction to reduced row echelon form. The pivot in each column
    /// is the first nonzero entry at or below the current row.
    fn rref_in_place(&mut self) -> Vec<usize> {
        let f = self.field.clone();
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..self.cols {
            if r == self.rows {
                break;
            }
            let Some(pr) = (r..self.rows).find(|&i| !self.get(i, c).is_zero()) else {
                continue;
            };
            self.swap_rows(r, pr);
            let inv = f.inv(self.get(r, c)).expect("pivot is nonzero");
            for j in c..self.cols {
                let v = f.mul(self.get(r, j), inv);
                self.set(r, j, v);
            }
            for i in 0..self.rows {
                if i == r {
                    continue;
                }
                let factor = self.get(i, c);
                if factor.is_zero() {
                    continue;
                }
                for j in c..self.cols {
                    let v = f.sub(self.get(i, j), f.mul(factor, self.get(r, j)));
                    self.set(i, j, v);
                }
            }
            pivots.push(c);
            r += 1;
        }
        pivots
    }

    pub fn rref(&self) -> Rref {
        let mut m = self.clone();
        let pivots = m.rref_in_place();
        Rref {
            matrix: m,
            rank: pivots.len(),
            pivots,
        }
    }

    pub fn rank(&self) -> usize {
        let mut m = self.clone();
        m.rref_in_place().len()
    }

    pub fn det(&self) -> Result<Fe> {
        if !self.is_square() {
            return Err(Error::shape("determinant of a non-square matrix"));
        }
        let f = &self.field;
        let n = self.rows;
        let mut m = self.clone();
        let mut det = Fe::ONE;
        for c in 0..n {
            let Some(pr) = (c..n).find(|&i| !m.get(i, c).is_zero()) else {
                return Ok(Fe::ZERO);
            };
            if pr != c {
                m.swap_rows(pr, c);
                det = f.neg(det);
            }
            let piv = m.get(c, c);
            det = f.mul(det, piv);
            let inv = f.inv(piv).expect("pivot is nonzero");
            for i in c + 1..n {
                let factor = f.mul(m.get(i, c), inv);
                if factor.is_zero() {
                    continue;
                }
                for j in c..n {
                    let v = f.sub(m.get(i, j), f.mul(factor, m.get(c, j)));
                    m.set(i, j, v);
                }
            }
        }
        Ok(det)
    }

    pub fn inverse(&self) -> Result<Option<MatF>> {
        if !self.is_square() {
            return Err(Error::shape("inverse of a non-square matrix"));
        }
        let n = self.rows;
        let aug = self.hstack(&MatF::identity(&self.field, n))?;
        let r = aug.rref();
        if r.pivots.iter().copied().take(n).ne(0..n) {
            return Ok(None);
        }
        Ok(Some(r.matrix.columns(n..2 * n)))
    }

    /// Null space `{ v : self * v = 0 }` as a canonical basis.
    pub fn kernel(&self) -> SubspaceBasis {
        let f = &self.field;
        let r = self.rref();
        let free: Vec<usize> = (0..self.cols).filter(|c| !r.pivots.contains(c)).collect();
        let mut basis = MatF::zeros(f, free.len(), self.cols);
        for (bi, &fc) in free.iter().enumerate() {
            basis.set(bi, fc, Fe::ONE);
            for (pi, &pc) in r.pivots.iter().enumerate() {
                basis.set(bi, pc, f.neg(r.matrix.get(pi, fc)));
            }
        }
        SubspaceBasis::from_spanning(&basis)
    }

    /// Characteristic polynomial `det(x I - M)`, via reduction to upper
    /// Hessenberg form by similarity transforms followed by the standard
    /// three-term recurrence on leading principal minors. Division-free in the
    /// polynomial part, so valid in every characteristic.
    pub fn char_poly(&self) -> Result<Poly> {
        if !self.is_square() {
            return Err(Error::shape("characteristic polynomial of a non-square matrix"));
        }
        let f = self.field.clone();
        let n = self.rows;
        let mut h = self.clone();
        for m in 1..n.saturating_sub(1) {
            let Some(i) = (m..n).find(|&i| !h.get(i, m - 1).is_zero()) else {
                continue;
            };
            if i != m {
                h.swap_rows(i, m);
                for r in 0..n {
                    h.data.swap(r * n + i, r * n + m);
                }
            }
            let inv = f.inv(h.get(m, m - 1)).expect("pivot is nonzero");
            for j in m + 1..n {
                let u = f.mul(h.get(j, m - 1), inv);
                if u.is_zero() {
                    continue;
                }
                // row_j -= u * row_m, then col_m += u * col_j keeps the similarity class.
                for c in 0..n {
                    let v = f.sub(h.get(j, c), f.mul(u, h.get(m, c)));
                    h.set(j, c, v);
                }
                for r in 0..n {
                    let v = f.add(h.get(r, m), f.mul(u, h.get(r, j)));
                    h.set(r, m, v);
                }
            }
        }

        let x = Poly::x(&f);
        let mut p: Vec<Poly> = Vec::with_capacity(n + 1);
        p.push(Poly::one(&f));
        for m in 1..=n {
            let lin = &x - &Poly::constant(&f, h.get(m - 1, m - 1));
            let mut pm = &lin * &p[m - 1];
            let mut t = Fe::ONE;
            for i in (1..m).rev() {
                t = f.mul(t, h.get(i, i - 1));
                if t.is_zero() {
                    break;
                }
                let c = f.mul(h.get(i - 1, m - 1), t);
                pm = &pm - &p[i - 1].scale(c);
            }
            p.push(pm);
        }
        Ok(p.pop().expect("n + 1 entries"))
    }
}

impl fmt::Debug for MatF {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "MatF[{}]{:?}", self.field, self.to_strings())
    }
}

impl fmt::Display for MatF {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, row) in self.to_strings().iter().enumerate() {
            if i > 0 {
                writeln!(f)?;
            }
            write!(f, "[{}]", row.join(" "))?;
        }
        Ok(())
    }
}

/// A subspace of `F^N` stored as its unique RREF basis, so equality of values
/// is equality of subspaces.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct SubspaceBasis {
    basis: MatF,
}

impl SubspaceBasis {
    /// The span of the rows of `m`.
    pub fn from_spanning(m: &MatF) -> SubspaceBasis {
        let r = m.rref();
        SubspaceBasis {
            basis: r.matrix.submatrix(0..r.rank, 0..m.cols),
        }
    }

    pub fn zero(field: &Field, ambient: usize) -> SubspaceBasis {
        SubspaceBasis {
            basis: MatF::zeros(field, 0, ambient),
        }
    }

    pub fn full(field: &Field, ambient: usize) -> SubspaceBasis {
        SubspaceBasis {
            basis: MatF::identity(field, ambient),
        }
    }

    pub fn ambient(&self) -> usize {
        self.basis.cols
    }

    pub fn dim(&self) -> usize {
        self.basis.rows
    }

    pub fn basis(&self) -> &MatF {
        &self.basis
    }

    pub fn field(&self) -> &Field {
        &self.basis.field
    }

    pub fn pivots(&self) -> Vec<usize> {
        (0..self.dim())
            .map(|i| {
                self.basis
                    .row(i)
                    .iter()
                    .position(|a| !a.is_zero())
                    .expect("basis rows are nonzero")
            })
            .collect()
    }

    pub fn contains(&self, v: &[Fe]) -> bool {
        let row = MatF::new(self.field(), 1, v.len(), v.to_vec()).expect("row vector");
        match self.basis.vstack(&row) {
            Ok(m) => m.rank() == self.dim(),
            Err(_) => false,
        }
    }

    /// `self + other`
    pub fn sum(&self, other: &SubspaceBasis) -> Result<SubspaceBasis> {
        Ok(SubspaceBasis::from_spanning(&self.basis.vstack(&other.basis)?))
    }
}

/// Gaussian binomial `[n choose m]_q`, the number of `m`-dimensional subspaces of `F_q^n`.
pub fn gaussian_binomial(q: u64, n: usize, m: usize) -> BigUint {
    if m > n {
        return BigUint::from(0u32);
    }
    let q = BigUint::from(q);
    let one = BigUint::one();
    let mut num = BigUint::one();
    let mut den = BigUint::one();
    for i in 0..m {
        num *= Pow::pow(&q, (n - i) as u32) - &one;
        den *= Pow::pow(&q, (i + 1) as u32) - &one;
    }
    num / den
}

/// Every strictly increasing pivot-column list of length `m` from `0..n`, in
/// lexicographic order.
pub fn pivot_profiles(n: usize, m: usize) -> Vec<Vec<usize>> {
    fn rec(start: usize, n: usize, left: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if left == 0 {
            out.push(cur.clone());
            return;
        }
        for c in start..=n - left {
            cur.push(c);
            rec(c + 1, n, left - 1, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    if m <= n {
        rec(0, n, m, &mut Vec::new(), &mut out);
    }
    out
}

/// All subspaces whose RREF basis has the given pivot columns.
pub fn subspaces_with_pivots(
    field: &Field,
    n: usize,
    pivots: &[usize],
) -> Result<impl Iterator<Item = SubspaceBasis>> {
    let free: Vec<(usize, usize)> = pivots
        .iter()
        .enumerate()
        .flat_map(|(i, &p)| {
            (p + 1..n)
                .filter(|c| !pivots.contains(c))
                .map(move |c| (i, c))
        })
        .collect();
    let q = field.order();
    let total = q
        .checked_pow(free.len() as u32)
        .ok_or_else(|| Error::domain("too many subspaces to enumerate"))?;
    let field = field.clone();
    let pivots = pivots.to_vec();
    Ok((0..total).map(move |mut idx| {
        let mut basis = MatF::zeros(&field, pivots.len(), n);
        for (i, &p) in pivots.iter().enumerate() {
            basis.set(i, p, Fe::ONE);
        }
        // Last free entry varies fastest.
        for &(i, c) in free.iter().rev() {
            basis.set(i, c, field.from_u64_wrapping(idx % q));
            idx /= q;
        }
        SubspaceBasis { basis }
    }))
}

/// Every `m`-dimensional subspace of `F^n` exactly once, ordered by pivot
/// profile and then by the free entries.
pub fn enumerate_subspaces(
    field: &Field,
    n: usize,
    m: usize,
) -> Result<impl Iterator<Item = SubspaceBasis>> {
    if m > n {
        return Err(Error::domain(format!("requires m <= N, got m = {m}, N = {n}")));
    }
    let iters = pivot_profiles(n, m)
        .into_iter()
        .map(|p| subspaces_with_pivots(field, n, &p))
        .collect::<Result<Vec<_>>>()?;
    Ok(iters.into_iter().flatten())
}
