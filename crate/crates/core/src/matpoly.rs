//! Matrix polynomials in `M_{n,k}(F_q[x])`: unimodularity (by minor GCD and by
//! Smith normal form), invariant factors and linearization.

use std::fmt;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::gf::{Fe, Field, FieldSpec};
use crate::linalg::{pivot_profiles, MatF};
use crate::poly::{Degree, Poly};

/// An `n x k` matrix with entries in `F_q[x]`, stored entrywise (row-major).
/// Equality is entrywise, so trailing zero coefficients never matter.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct MatPoly {
    field: Field,
    n: usize,
    k: usize,
    entries: Vec<Poly>,
}

impl MatPoly {
    pub fn from_entries(field: &Field, n: usize, k: usize, entries: Vec<Poly>) -> Result<MatPoly> {
        if entries.len() != n * k {
            return Err(Error::shape(format!("{} entries for a {n}x{k} matrix", entries.len())));
        }
        if entries.iter().any(|p| !p.field().same(field)) {
            return Err(Error::MixedFields);
        }
        Ok(MatPoly {
            field: field.clone(),
            n,
            k,
            entries,
        })
    }

    /// `Σ coeffs[i] x^i`. All coefficients must share shape `n x k`.
    pub fn from_coeffs(field: &Field, n: usize, k: usize, coeffs: &[MatF]) -> Result<MatPoly> {
        for c in coeffs {
            if !c.field().same(field) {
                return Err(Error::MixedFields);
            }
            if c.shape() != (n, k) {
                return Err(Error::shape(format!(
                    "coefficient of shape {:?} in a {n}x{k} matrix polynomial",
                    c.shape()
                )));
            }
        }
        let entries = (0..n * k)
            .map(|idx| {
                let cs = coeffs.iter().map(|c| c.get(idx / k, idx % k)).collect();
                Poly::new(field, cs)
            })
            .collect();
        Ok(MatPoly {
            field: field.clone(),
            n,
            k,
            entries,
        })
    }

    pub fn constant(m: &MatF) -> MatPoly {
        MatPoly::from_coeffs(m.field(), m.rows(), m.cols(), std::slice::from_ref(m))
            .expect("single coefficient has the right shape")
    }

    /// `x * a + b`
    pub fn linear(a: &MatF, b: &MatF) -> Result<MatPoly> {
        MatPoly::from_coeffs(a.field(), a.rows(), a.cols(), &[b.clone(), a.clone()])
    }

    /// `x^d I_{n,k} + Σ_{i<d} lower[i] x^i` with `d = lower.len()`.
    pub fn monic_from_lower(field: &Field, n: usize, k: usize, lower: &[MatF]) -> Result<MatPoly> {
        let mut coeffs = lower.to_vec();
        coeffs.push(MatF::identity_nk(field, n, k));
        MatPoly::from_coeffs(field, n, k, &coeffs)
    }

    pub fn zeros(field: &Field, n: usize, k: usize) -> MatPoly {
        MatPoly {
            field: field.clone(),
            n,
            k,
            entries: vec![Poly::zero(field); n * k],
        }
    }

    pub fn identity(field: &Field, n: usize) -> MatPoly {
        MatPoly::constant(&MatF::identity(field, n))
    }

    /// Entries drawn uniformly from polynomials of degree at most `deg`.
    pub fn random<R: Rng + ?Sized>(field: &Field, n: usize, k: usize, deg: usize, rng: &mut R) -> MatPoly {
        let q = field.order();
        let entries = (0..n * k)
            .map(|_| {
                let cs = (0..=deg).map(|_| field.from_u64_wrapping(rng.random_range(0..q))).collect();
                Poly::new(field, cs)
            })
            .collect();
        MatPoly {
            field: field.clone(),
            n,
            k,
            entries,
        }
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn entry(&self, i: usize, j: usize) -> &Poly {
        &self.entries[i * self.k + j]
    }

    pub fn entries(&self) -> &[Poly] {
        &self.entries
    }

    pub fn degree(&self) -> Degree {
        self.entries
            .iter()
            .map(Poly::degree)
            .max()
            .unwrap_or(Degree::NegInfinity)
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(Poly::is_zero)
    }

    /// Coefficient matrices `A_0 … A_d`, trailing zeros trimmed (empty for the zero matrix).
    pub fn coeffs(&self) -> Vec<MatF> {
        let len = self.degree().finite().map_or(0, |d| d + 1);
        (0..len).map(|i| self.coeff(i)).collect()
    }

    pub fn coeff(&self, i: usize) -> MatF {
        MatF::from_fn(&self.field, self.n, self.k, |r, c| self.entry(r, c).coeff(i))
    }

    /// Membership in `M_{n,k}(F_q[x]; d)`: degree `d` with top coefficient `I_{n,k}`.
    pub fn is_monic_of_degree(&self, d: usize) -> bool {
        self.degree() == Degree::Finite(d) && self.coeff(d) == MatF::identity_nk(&self.field, self.n, self.k)
    }

    fn check_field(&self, other: &MatPoly) -> Result<()> {
        if self.field.same(&other.field) {
            Ok(())
        } else {
            Err(Error::MixedFields)
        }
    }

    pub fn mul(&self, other: &MatPoly) -> Result<MatPoly> {
        self.check_field(other)?;
        if self.k != other.n {
            return Err(Error::shape(format!(
                "cannot multiply {}x{} by {}x{}",
                self.n, self.k, other.n, other.k
            )));
        }
        let mut entries = Vec::with_capacity(self.n * other.k);
        for i in 0..self.n {
            for j in 0..other.k {
                let mut acc = Poly::zero(&self.field);
                for t in 0..self.k {
                    let a = self.entry(i, t);
                    if !a.is_zero() {
                        acc = &acc + &(a * other.entry(t, j));
                    }
                }
                entries.push(acc);
            }
        }
        MatPoly::from_entries(&self.field, self.n, other.k, entries)
    }

    pub fn add(&self, other: &MatPoly) -> Result<MatPoly> {
        self.check_field(other)?;
        if (self.n, self.k) != (other.n, other.k) {
            return Err(Error::shape("sum of matrix polynomials of different shapes"));
        }
        let entries = self.entries.iter().zip(&other.entries).map(|(a, b)| a + b).collect();
        MatPoly::from_entries(&self.field, self.n, self.k, entries)
    }

    /// Left multiplication by a constant matrix.
    pub fn left_mul_const(&self, m: &MatF) -> Result<MatPoly> {
        MatPoly::constant(m).mul(self)
    }

    pub fn transpose(&self) -> MatPoly {
        let entries = (0..self.k * self.n)
            .map(|idx| self.entry(idx % self.n, idx / self.n).clone())
            .collect();
        MatPoly {
            field: self.field.clone(),
            n: self.k,
            k: self.n,
            entries,
        }
    }

    /// Determinant of the submatrix on the given rows and columns.
    pub fn minor(&self, rows: &[usize], cols: &[usize]) -> Poly {
        debug_assert_eq!(rows.len(), cols.len());
        let grid = rows
            .iter()
            .map(|&i| cols.iter().map(|&j| self.entry(i, j).clone()).collect())
            .collect();
        det_grid(&self.field, grid)
    }

    pub fn det(&self) -> Result<Poly> {
        if self.n != self.k {
            return Err(Error::shape("determinant of a non-square matrix polynomial"));
        }
        let idx: Vec<usize> = (0..self.n).collect();
        Ok(self.minor(&idx, &idx))
    }

    pub fn to_file(&self) -> MatPolyFile {
        MatPolyFile {
            field: self.field.spec(),
            n: self.n,
            k: self.k,
            coeffs: self.coeffs().iter().map(MatF::to_strings).collect(),
        }
    }

    pub fn from_file(file: &MatPolyFile) -> Result<MatPoly> {
        let field = Field::from_spec(&file.field)?;
        let coeffs = file
            .coeffs
            .iter()
            .map(|m| matrix_from_json(&field, file.n, file.k, m))
            .collect::<Result<Vec<_>>>()?;
        MatPoly::from_coeffs(&field, file.n, file.k, &coeffs)
    }

    pub fn from_json(s: &str) -> Result<MatPoly> {
        let file: MatPolyFile = serde_json::from_str(s).map_err(|e| Error::Parse(e.to_string()))?;
        MatPoly::from_file(&file)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(&self.to_file()).expect("plain data serializes")
    }

    /// Entries as display strings, e.g. `[["x", "1"]]`.
    pub fn to_display_grid(&self) -> Vec<Vec<String>> {
        (0..self.n)
            .map(|i| (0..self.k).map(|j| self.entry(i, j).to_string()).collect())
            .collect()
    }
}

/// Parses an `rows x cols` JSON matrix of field-element strings, checking the shape.
pub fn matrix_from_json(field: &Field, rows: usize, cols: usize, m: &[Vec<String>]) -> Result<MatF> {
    if m.len() != rows || m.iter().any(|r| r.len() != cols) {
        return Err(Error::Parse(format!("expected a {rows}x{cols} matrix")));
    }
    if rows == 0 {
        return Ok(MatF::zeros(field, 0, cols));
    }
    MatF::from_strings(field, m)
}

impl fmt::Display for MatPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, row) in self.to_display_grid().iter().enumerate() {
            if i > 0 {
                writeln!(f)?;
            }
            write!(f, "[{}]", row.join(", "))?;
        }
        Ok(())
    }
}

impl fmt::Debug for MatPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "MatPoly[{}]{:?}", self.field, self.to_display_grid())
    }
}

/// On-disk form: `{"field": …, "n": …, "k": …, "coeffs": [A_0, A_1, …]}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MatPolyFile {
    pub field: FieldSpec,
    pub n: usize,
    pub k: usize,
    pub coeffs: Vec<Vec<Vec<String>>>,
}

/// Fraction-free (Bareiss) determinant over `F[x]`.
fn det_grid(field: &Field, mut m: Vec<Vec<Poly>>) -> Poly {
    let n = m.len();
    match n {
        0 => return Poly::one(field),
        1 => return m[0][0].clone(),
        2 => return &(&m[0][0] * &m[1][1]) - &(&m[0][1] * &m[1][0]),
        _ => {}
    }
    let mut negate = false;
    let mut prev = Poly::one(field);
    for t in 0..n - 1 {
        if m[t][t].is_zero() {
            let Some(i) = (t + 1..n).find(|&i| !m[i][t].is_zero()) else {
                return Poly::zero(field);
            };
            m.swap(i, t);
            negate = !negate;
        }
        for i in t + 1..n {
            for j in t + 1..n {
                let num = &(&m[i][j] * &m[t][t]) - &(&m[i][t] * &m[t][j]);
                m[i][j] = num.exact_div(&prev).expect("Bareiss quotients are exact");
            }
        }
        prev = m[t][t].clone();
    }
    let d = m[n - 1][n - 1].clone();
    if negate {
        -&d
    } else {
        d
    }
}

/// Monic GCD of all `r x r` minors (lexicographic subset order); zero iff every minor vanishes.
pub fn minors_gcd(m: &MatPoly, r: usize) -> Result<Poly> {
    if r == 0 || r > m.n.min(m.k) {
        return Err(Error::domain(format!(
            "requires 1 <= r <= min(n, k) = {}, got r = {r}",
            m.n.min(m.k)
        )));
    }
    let row_sets = pivot_profiles(m.n, r);
    let col_sets = pivot_profiles(m.k, r);
    let mut g = Poly::zero(&m.field);
    for rows in &row_sets {
        for cols in &col_sets {
            let d = m.minor(rows, cols);
            if !d.is_zero() {
                g = g.gcd(&d);
                if g.is_one() {
                    return Ok(g);
                }
            }
        }
    }
    Ok(g)
}

/// GCD of the maximal minors equals 1. A matrix with no rows or columns is unimodular.
pub fn is_unimodular(m: &MatPoly) -> bool {
    let r = m.n.min(m.k);
    r == 0 || minors_gcd(m, r).expect("r in range").is_one()
}

/// `U · M · V = D` with `U`, `V` invertible over `F_q[x]` and `D` diagonal.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SmithForm {
    pub u: MatPoly,
    pub v: MatPoly,
    pub d: MatPoly,
    /// `f_1 | f_2 | …`, length `min(n, k)`; monic, or zero past the rank.
    pub factors: Vec<Poly>,
}

impl SmithForm {
    pub fn is_unimodular(&self) -> bool {
        self.factors.iter().all(Poly::is_one)
    }

    /// The factors that are not units (including zeros past the rank).
    pub fn nontrivial_factors(&self) -> Vec<Poly> {
        self.factors.iter().filter(|f| !f.is_one()).cloned().collect()
    }
}

type Grid = Vec<Vec<Poly>>;

fn grid_of(m: &MatPoly) -> Grid {
    (0..m.n).map(|i| (0..m.k).map(|j| m.entry(i, j).clone()).collect()).collect()
}

fn grid_identity(field: &Field, n: usize) -> Grid {
    (0..n)
        .map(|i| (0..n).map(|j| if i == j { Poly::one(field) } else { Poly::zero(field) }).collect())
        .collect()
}

fn grid_to_matpoly(field: &Field, rows: usize, cols: usize, g: Grid) -> MatPoly {
    MatPoly {
        field: field.clone(),
        n: rows,
        k: cols,
        entries: g.into_iter().flatten().collect(),
    }
}

fn swap_cols(g: &mut Grid, a: usize, b: usize) {
    for row in g.iter_mut() {
        row.swap(a, b);
    }
}

/// row_target -= c * row_src
fn row_sub(g: &mut Grid, target: usize, src: usize, c: &Poly) {
    for j in 0..g[target].len() {
        let t = &g[src][j] * c;
        g[target][j] = &g[target][j] - &t;
    }
}

/// col_target -= c * col_src
fn col_sub(g: &mut Grid, target: usize, src: usize, c: &Poly) {
    for row in g.iter_mut() {
        let t = &row[src] * c;
        row[target] = &row[target] - &t;
    }
}

/// Smith normal form by elementary operations over the Euclidean domain `F_q[x]`.
///
/// Pivot: a nonzero entry of minimal degree in the trailing block, ties broken
/// by smallest (row, col). Row and column are cleared by division; a nonzero
/// remainder restarts the step. If the pivot fails to divide some trailing
/// entry, that entry's row is added to the pivot row and the step restarts.
pub fn smith_form(m: &MatPoly) -> SmithForm {
    let field = m.field.clone();
    let (n, k) = (m.n, m.k);
    let mut a = grid_of(m);
    let mut u = grid_identity(&field, n);
    let mut v = grid_identity(&field, k);
    let r = n.min(k);

    'steps: for t in 0..r {
        loop {
            let mut best: Option<(usize, usize, usize)> = None;
            for (i, row) in a.iter().enumerate().skip(t) {
                for (j, e) in row.iter().enumerate().skip(t) {
                    if let Degree::Finite(d) = e.degree() {
                        if best.is_none_or(|(bd, _, _)| d < bd) {
                            best = Some((d, i, j));
                        }
                    }
                }
            }
            let Some((_, pi, pj)) = best else {
                break 'steps;
            };
            a.swap(t, pi);
            u.swap(t, pi);
            swap_cols(&mut a, t, pj);
            swap_cols(&mut v, t, pj);

            let mut clean = true;
            for i in t + 1..n {
                if a[i][t].is_zero() {
                    continue;
                }
                let (q, rem) = a[i][t].divmod(&a[t][t]).expect("pivot is nonzero");
                row_sub(&mut a, i, t, &q);
                row_sub(&mut u, i, t, &q);
                clean &= rem.is_zero();
            }
            for j in t + 1..k {
                if a[t][j].is_zero() {
                    continue;
                }
                let (q, rem) = a[t][j].divmod(&a[t][t]).expect("pivot is nonzero");
                col_sub(&mut a, j, t, &q);
                col_sub(&mut v, j, t, &q);
                clean &= rem.is_zero();
            }
            if !clean {
                continue;
            }

            let bad_row = (t + 1..n).find(|&i| (t + 1..k).any(|j| !a[t][t].divides(&a[i][j])));
            if let Some(i) = bad_row {
                let one = Poly::one(&field);
                let minus_one = -&one;
                row_sub(&mut a, t, i, &minus_one);
                row_sub(&mut u, t, i, &minus_one);
                continue;
            }

            let inv = field
                .inv(a[t][t].leading().expect("pivot is nonzero"))
                .expect("leading coefficient is nonzero");
            if inv != Fe::ONE {
                for e in a[t].iter_mut() {
                    *e = e.scale(inv);
                }
                for e in u[t].iter_mut() {
                    *e = e.scale(inv);
                }
            }
            break;
        }
    }

    let factors = (0..r).map(|t| a[t][t].clone()).collect();
    SmithForm {
        u: grid_to_matpoly(&field, n, n, u),
        v: grid_to_matpoly(&field, k, k, v),
        d: grid_to_matpoly(&field, n, k, a),
        factors,
    }
}

/// `x I_{n,k} - Y`
pub fn linear_pencil(y: &MatF) -> MatPoly {
    MatPoly::linear(&MatF::identity_nk(y.field(), y.rows(), y.cols()), &y.neg())
        .expect("shapes agree by construction")
}

/// Companion-style linearization of `A = x^d I_{n,k} + Σ_{i<d} A_i x^i`.
///
/// Returns the `nd x (nd - n + k)` matrix `B` with identity blocks `I_n` on the
/// block subdiagonal and `-A_0, …, -A_{d-1}` stacked in the last `k` columns,
/// together with the pencil `x I_{nd, nd-n+k} - B`.
pub fn linearize(a: &MatPoly) -> Result<(MatF, MatPoly)> {
    let (n, k) = (a.n, a.k);
    let d = match a.degree() {
        Degree::Finite(d) if d >= 1 => d,
        _ => return Err(Error::domain("linearization requires degree d >= 1")),
    };
    if !a.is_monic_of_degree(d) {
        return Err(Error::domain("linearization requires top coefficient I_{n,k}"));
    }
    let f = a.field.clone();
    let cols = n * d - n + k;
    let mut b = MatF::zeros(&f, n * d, cols);
    for blk in 1..d {
        for i in 0..n {
            b.set(blk * n + i, (blk - 1) * n + i, Fe::ONE);
        }
    }
    let off = n * (d - 1);
    for blk in 0..d {
        let c = a.coeff(blk);
        for i in 0..n {
            for j in 0..k {
                b.set(blk * n + i, off + j, f.neg(c.get(i, j)));
            }
        }
    }
    let pencil = linear_pencil(&b);
    Ok((b, pencil))
}
