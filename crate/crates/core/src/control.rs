//! Matrix pairs `(A, B)`: reachability, controllability indices, Brunovsky
//! canonical pairs, Γ-transformations and Wimmer completion.

use num_traits::Pow;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{check_budget, Error, Result};
use crate::gf::{Fe, Field};
use crate::linalg::MatF;
use crate::matpoly::{is_unimodular, linear_pencil, smith_form, MatPoly};
use crate::poly::{product, Degree, Poly};

/// `(A, B)` with `A` square `k x k` and `B` of shape `k x l`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct MatrixPair {
    a: MatF,
    b: MatF,
}

impl MatrixPair {
    pub fn new(a: MatF, b: MatF) -> Result<MatrixPair> {
        if !a.field().same(b.field()) {
            return Err(Error::MixedFields);
        }
        if !a.is_square() || a.rows() != b.rows() {
            return Err(Error::shape(format!(
                "pair needs A k x k and B k x l, got {:?} and {:?}",
                a.shape(),
                b.shape()
            )));
        }
        Ok(MatrixPair { a, b })
    }

    pub fn a(&self) -> &MatF {
        &self.a
    }

    pub fn b(&self) -> &MatF {
        &self.b
    }

    pub fn field(&self) -> &Field {
        self.a.field()
    }

    /// State dimension `k`.
    pub fn k(&self) -> usize {
        self.a.rows()
    }

    /// Input dimension `l`.
    pub fn l(&self) -> usize {
        self.b.cols()
    }

    /// `[x I_k - A   B]`, unimodular exactly when the pair is reachable.
    pub fn pencil(&self) -> MatPoly {
        let ab = self.a.hstack(&self.b.neg()).expect("row counts agree");
        linear_pencil(&ab)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ControllabilityData {
    /// Rank increments `p_1, …, p_k` of `[B AB … A^{i-1}B]`.
    pub p: Vec<usize>,
    /// Dual sequence `k_j = #{r : p_r >= j}` for `j = 1..=l`.
    pub indices: Vec<usize>,
    pub rank_b: usize,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BrunovskyPair {
    pub ac: MatF,
    pub bc: MatF,
}

impl BrunovskyPair {
    pub fn pair(&self) -> MatrixPair {
        MatrixPair::new(self.ac.clone(), self.bc.clone()).expect("canonical shapes agree")
    }
}

/// `S(A, B) = [B  AB  …  A^{k-1}B]`, of shape `k x kl`.
pub fn reachability_matrix(pair: &MatrixPair) -> MatF {
    let k = pair.k();
    let mut s = MatF::zeros(pair.field(), k, 0);
    let mut block = pair.b.clone();
    for i in 0..k {
        s = s.hstack(&block).expect("row counts agree");
        if i + 1 < k {
            block = pair.a.mul(&block).expect("shapes agree");
        }
    }
    s
}

pub fn is_reachable(pair: &MatrixPair) -> bool {
    reachability_matrix(pair).rank() == pair.k()
}

pub fn controllability_indices(pair: &MatrixPair) -> ControllabilityData {
    let k = pair.k();
    let l = pair.l();
    let mut p = Vec::with_capacity(k);
    let mut s = MatF::zeros(pair.field(), k, 0);
    let mut block = pair.b.clone();
    let mut prev = 0;
    for _ in 0..k {
        s = s.hstack(&block).expect("row counts agree");
        let r = s.rank();
        p.push(r - prev);
        prev = r;
        block = pair.a.mul(&block).expect("shapes agree");
    }
    let indices = (1..=l).map(|j| p.iter().filter(|&&pr| pr >= j).count()).collect();
    ControllabilityData {
        rank_b: pair.b.rank(),
        p,
        indices,
    }
}

/// The canonical pair for the given controllability indices: `A_c` block
/// diagonal of nilpotent shifts (ones on the superdiagonal of each block),
/// `B_c = [B' 0]` where block `i` of `B'` is zero except its last row, `e_i`.
/// Trailing zero indices are accepted and ignored.
pub fn brunovsky_pair(field: &Field, indices: &[usize], l: usize) -> Result<BrunovskyPair> {
    if indices.windows(2).any(|w| w[0] < w[1]) {
        return Err(Error::domain("controllability indices must be nonincreasing"));
    }
    let blocks: Vec<usize> = indices.iter().copied().take_while(|&ki| ki > 0).collect();
    let r = blocks.len();
    if r > l {
        return Err(Error::domain(format!("requires r <= l, got r = {r}, l = {l}")));
    }
    let k: usize = blocks.iter().sum();
    let mut ac = MatF::zeros(field, k, k);
    let mut bc = MatF::zeros(field, k, l);
    let mut off = 0;
    for (i, &ki) in blocks.iter().enumerate() {
        for t in 0..ki - 1 {
            ac.set(off + t, off + t + 1, Fe::ONE);
        }
        bc.set(off + ki - 1, i, Fe::ONE);
        off += ki;
    }
    Ok(BrunovskyPair { ac, bc })
}

/// Conjugation of `[[A, B], [C, D]]` by `G = [[P, 0], [R, Q]]`, returning the
/// new top blocks `(A2, B2)`. These do not depend on `C`, `D`, which are taken as zero.
pub fn gamma_transform(pair: &MatrixPair, p: &MatF, q: &MatF, r: &MatF) -> Result<MatrixPair> {
    gamma_transform_with(pair, p, q, r, None)
}

/// As [`gamma_transform`] with explicit bottom blocks `(C, D)`.
pub fn gamma_transform_with(
    pair: &MatrixPair,
    p: &MatF,
    q: &MatF,
    r: &MatF,
    cd: Option<(&MatF, &MatF)>,
) -> Result<MatrixPair> {
    let (k, l) = (pair.k(), pair.l());
    let f = pair.field();
    if p.shape() != (k, k) || q.shape() != (l, l) || r.shape() != (l, k) {
        return Err(Error::shape("Γ needs P k x k, Q l x l, R l x k"));
    }
    let g = p.hstack(&MatF::zeros(f, k, l))?.vstack(&r.hstack(q)?)?;
    let g_inv = g
        .inverse()?
        .ok_or_else(|| Error::domain("P and Q must be invertible"))?;
    let (c, d) = match cd {
        Some((c, d)) => (c.clone(), d.clone()),
        None => (MatF::zeros(f, l, k), MatF::zeros(f, l, l)),
    };
    let m = pair.a.hstack(&pair.b)?.vstack(&c.hstack(&d)?)?;
    let conj = g.mul(&m)?.mul(&g_inv)?;
    MatrixPair::new(conj.submatrix(0..k, 0..k), conj.submatrix(0..k, k..k + l))
}

/// Γ-equivalence of reachable pairs, decided by comparing controllability
/// indices. Non-reachable pairs are rejected.
pub fn gamma_equivalent(x: &MatrixPair, y: &MatrixPair) -> Result<bool> {
    if (x.k(), x.l()) != (y.k(), y.l()) {
        return Ok(false);
    }
    if !is_reachable(x) || !is_reachable(y) {
        return Err(Error::domain("Γ-equivalence is only decided for reachable pairs"));
    }
    Ok(controllability_indices(x).indices == controllability_indices(y).indices)
}

fn check_wimmer_shapes(y: &MatF, f: &Poly) -> Result<()> {
    let (l, k) = y.shape();
    if k >= l {
        return Err(Error::domain(format!("requires k < l, got k = {k}, l = {l}")));
    }
    if !f.field().same(y.field()) {
        return Err(Error::MixedFields);
    }
    if !f.is_monic() || f.degree() != Degree::Finite(l) {
        return Err(Error::domain(format!("f must be monic of degree l = {l}")));
    }
    Ok(())
}

/// Wimmer's criterion: some `Z` gives `char_poly([Y Z]) = f` iff the product of
/// the invariant factors of `x I_{l,k} - Y` divides `f`.
pub fn wimmer_completable(y: &MatF, f: &Poly) -> Result<bool> {
    check_wimmer_shapes(y, f)?;
    let smith = smith_form(&linear_pencil(y));
    Ok(product(y.field(), &smith.factors).divides(f))
}

/// Searches all `Z` (`l x (l-k)`) in lexicographic order for `char_poly([Y Z]) = f`
/// and returns the first hit. `Ok(None)` means the full search found nothing.
pub fn complete_char_poly(y: &MatF, f: &Poly, budget: u64) -> Result<Option<MatF>> {
    check_wimmer_shapes(y, f)?;
    let (l, k) = y.shape();
    let field = y.field();
    let total = check_budget(&Pow::pow(field.cardinality(), (l * (l - k)) as u32), budget)?;
    let hit = (0..total).into_par_iter().find_first(|&idx| {
        let z = MatF::from_counter(field, l, l - k, idx);
        let c = y.hstack(&z).expect("row counts agree");
        c.char_poly().expect("square") == *f
    });
    Ok(hit.map(|idx| MatF::from_counter(field, l, l - k, idx)))
}

/// The unique column `a` with `char_poly([prefix a]) = f`, for a prefix whose
/// pencil `x I_{l,l-1} - prefix` is unimodular. Zero or several solutions are
/// reported as an invariant breach.
pub fn solve_last_column(prefix: &MatF, f: &Poly, budget: u64) -> Result<MatF> {
    let (l, k) = prefix.shape();
    if k + 1 != l {
        return Err(Error::shape(format!("prefix must be l x (l-1), got {l}x{k}")));
    }
    check_wimmer_shapes(prefix, f)?;
    if !is_unimodular(&linear_pencil(prefix)) {
        return Err(Error::domain("the prefix pencil is not unimodular"));
    }
    let field = prefix.field();
    let total = check_budget(&Pow::pow(field.cardinality(), l as u32), budget)?;
    let hits: Vec<u64> = (0..total)
        .into_par_iter()
        .filter(|&idx| {
            let col = MatF::from_counter(field, l, 1, idx);
            prefix.hstack(&col).expect("row counts agree").char_poly().expect("square") == *f
        })
        .collect();
    match hits.as_slice() {
        [one] => Ok(MatF::from_counter(field, l, 1, *one)),
        _ => Err(Error::InvariantBreach(format!(
            "{} columns complete the prefix to characteristic polynomial {f}, expected exactly 1",
            hits.len()
        ))),
    }
}
