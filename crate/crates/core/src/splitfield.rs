//! `F_{q^{md}}` as an `md`-dimensional space over `F_q`, α-splitting subspaces,
//! m-companion matrices and the characteristic polynomial map Φ on them.

use std::collections::HashMap;

use num_bigint::BigUint;
use num_traits::Pow;
use rayon::prelude::*;

use crate::error::{check_budget, Error, Result};
use crate::gf::{Fe, Field};
use crate::linalg::{gaussian_binomial, pivot_profiles, subspaces_with_pivots, MatF, SubspaceBasis};
use crate::matpoly::{is_unimodular, linear_pencil};
use crate::poly::{enumerate_irreducible, enumerate_monic, Degree, Poly};

/// `F_q[x]/(g)` for a monic irreducible `g` of degree `N`, with a distinguished
/// generator (by default α, the class of `x`). Elements are coordinate row
/// vectors in the basis `1, x, …, x^{N-1}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExtFieldCtx {
    base: Field,
    modulus: Poly,
    generator: Poly,
    /// Row `i` holds the coordinates of `x^i · generator`, so `v · mult` is `generator · v`.
    mult: MatF,
}

impl ExtFieldCtx {
    pub fn base(&self) -> &Field {
        &self.base
    }

    /// Extension degree `N = md`.
    pub fn degree(&self) -> usize {
        self.modulus.degree().finite().expect("modulus is nonzero")
    }

    pub fn modulus(&self) -> &Poly {
        &self.modulus
    }

    pub fn generator(&self) -> &Poly {
        &self.generator
    }

    /// Matrix of multiplication by the generator acting on row vectors.
    pub fn mult_matrix(&self) -> &MatF {
        &self.mult
    }

    /// Switches the distinguished generator to `beta`, which must satisfy
    /// `F_q(beta) = F_{q^N}` (checked via linear independence of its first `N` powers).
    pub fn with_generator(&self, beta: &Poly) -> Result<ExtFieldCtx> {
        if !beta.field().same(&self.base) {
            return Err(Error::MixedFields);
        }
        let beta = beta.rem(&self.modulus)?;
        let n = self.degree();
        let mut powers = MatF::zeros(&self.base, n, n);
        let mut p = Poly::one(&self.base);
        for i in 0..n {
            set_row(&mut powers, i, &p);
            p = p.mul_mod(&beta, &self.modulus)?;
        }
        if powers.rank() < n {
            return Err(Error::domain(format!("{beta} does not generate the extension")));
        }
        Ok(ExtFieldCtx {
            mult: mult_matrix(&self.base, &self.modulus, &beta),
            generator: beta,
            base: self.base.clone(),
            modulus: self.modulus.clone(),
        })
    }

    /// Coordinates of a field element given as a polynomial in `x`.
    pub fn coords(&self, e: &Poly) -> Result<Vec<Fe>> {
        let r = e.rem(&self.modulus)?;
        Ok((0..self.degree()).map(|i| r.coeff(i)).collect())
    }

    /// `generator^i · W`, re-canonicalized.
    pub fn alpha_shift(&self, w: &SubspaceBasis, i: usize) -> Result<SubspaceBasis> {
        self.check_ambient(w)?;
        let mut b = w.basis().clone();
        for _ in 0..i {
            b = b.mul(&self.mult)?;
        }
        Ok(SubspaceBasis::from_spanning(&b))
    }

    fn check_ambient(&self, w: &SubspaceBasis) -> Result<()> {
        if !w.field().same(&self.base) {
            return Err(Error::MixedFields);
        }
        if w.ambient() != self.degree() {
            return Err(Error::shape(format!(
                "subspace of F^{} in an extension of degree {}",
                w.ambient(),
                self.degree()
            )));
        }
        Ok(())
    }

    /// The `d · dim W` stacked rows of `W, αW, …, α^{d-1}W`.
    pub fn stacked(&self, w: &SubspaceBasis, d: usize) -> Result<MatF> {
        self.check_ambient(w)?;
        let mut block = w.basis().clone();
        let mut out = MatF::zeros(&self.base, 0, self.degree());
        for t in 0..d {
            out = out.vstack(&block)?;
            if t + 1 < d {
                block = block.mul(&self.mult)?;
            }
        }
        Ok(out)
    }

    /// `F_{q^{md}} = W ⊕ αW ⊕ … ⊕ α^{d-1}W`, for `dim W = m` and `md = N`.
    pub fn is_splitting(&self, w: &SubspaceBasis, d: usize) -> Result<bool> {
        if w.dim() * d != self.degree() || d == 0 {
            return Err(Error::domain(format!(
                "requires m d = N, got m = {}, d = {d}, N = {}",
                w.dim(),
                self.degree()
            )));
        }
        Ok(self.stacked(w, d)?.rank() == self.degree())
    }
}

fn set_row(m: &mut MatF, i: usize, p: &Poly) {
    for j in 0..m.cols() {
        m.set(i, j, p.coeff(j));
    }
}

fn mult_matrix(base: &Field, modulus: &Poly, beta: &Poly) -> MatF {
    let n = modulus.degree().finite().expect("modulus is nonzero");
    let mut m = MatF::zeros(base, n, n);
    for i in 0..n {
        let xi = Poly::monomial(base, Fe::ONE, i);
        let row = xi.mul_mod(beta, modulus).expect("modulus is nonzero");
        set_row(&mut m, i, &row);
    }
    m
}

/// `F_{q^{md}}` over `base`. Without a modulus, the first monic irreducible of
/// degree `md` in enumeration order is used (e.g. `x^4 + x + 1` over GF(2)).
pub fn make_ext(base: &Field, m: usize, d: usize, modulus: Option<&Poly>) -> Result<ExtFieldCtx> {
    let n = m * d;
    if n == 0 {
        return Err(Error::domain("requires m, d >= 1"));
    }
    let modulus = match modulus {
        Some(g) => {
            if !g.field().same(base) {
                return Err(Error::MixedFields);
            }
            if g.degree() != Degree::Finite(n) || !g.is_monic() || !g.is_irreducible()? {
                return Err(Error::BadModulus(format!(
                    "{g} is not a monic irreducible of degree {n}"
                )));
            }
            g.clone()
        }
        None => enumerate_irreducible(base, n)?
            .next()
            .expect("irreducibles exist in every degree"),
    };
    let x = Poly::x(base);
    let ctx = ExtFieldCtx {
        mult: mult_matrix(base, &modulus, &x),
        generator: x.rem(&modulus)?,
        base: base.clone(),
        modulus,
    };
    // α = class of x generates since the modulus is irreducible of degree N; verified anyway.
    ctx.with_generator(&ctx.generator.clone())
}

/// Exhaustive count of `m`-dimensional splitting subspaces, partitioned by
/// pivot profile and summed.
pub fn count_splitting_bruteforce(ctx: &ExtFieldCtx, m: usize, d: usize, budget: u64) -> Result<BigUint> {
    let n = ctx.degree();
    if m * d != n || m == 0 {
        return Err(Error::domain(format!("requires m d = N, got m = {m}, d = {d}, N = {n}")));
    }
    check_budget(&gaussian_binomial(ctx.base.order(), n, m), budget)?;
    let counts = pivot_profiles(n, m)
        .into_par_iter()
        .map(|piv| -> Result<u64> {
            let mut c = 0u64;
            for w in subspaces_with_pivots(&ctx.base, n, &piv)? {
                if ctx.is_splitting(&w, d)? {
                    c += 1;
                }
            }
            Ok(c)
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(BigUint::from(counts.iter().sum::<u64>()))
}

/// `C = [J^{l,l-m}  A]` with `A` of shape `l x m`, `1 <= m < l`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MCompanion {
    a: MatF,
    full: MatF,
}

impl MCompanion {
    pub fn new(a: MatF) -> Result<MCompanion> {
        let (l, m) = a.shape();
        if m == 0 || m >= l {
            return Err(Error::domain(format!("requires 1 <= m < l, got m = {m}, l = {l}")));
        }
        let full = MatF::j_matrix(a.field(), l, l - m).hstack(&a)?;
        Ok(MCompanion { a, full })
    }

    /// The `idx`-th m-companion matrix in counter order of `A`.
    pub fn from_counter(field: &Field, l: usize, m: usize, idx: u64) -> Result<MCompanion> {
        MCompanion::new(MatF::from_counter(field, l, m, idx))
    }

    pub fn l(&self) -> usize {
        self.full.rows()
    }

    pub fn m(&self) -> usize {
        self.a.cols()
    }

    /// The free columns `A`.
    pub fn free(&self) -> &MatF {
        &self.a
    }

    pub fn full(&self) -> &MatF {
        &self.full
    }

    /// First `l - m + i` columns.
    pub fn prefix(&self, i: usize) -> MatF {
        self.full.columns(0..self.l() - self.m() + i)
    }
}

/// The `(m, d)`-block companion matrix with last block column `C_0, …, C_{d-1}`
/// (each `m x m`) and `I_m` blocks on the block subdiagonal.
pub fn block_companion(blocks: &[MatF]) -> Result<MatF> {
    let (first, rest) = blocks
        .split_first()
        .ok_or_else(|| Error::domain("requires d >= 1"))?;
    let mut a = first.clone();
    for b in rest {
        a = a.vstack(b)?;
    }
    if blocks.len() == 1 {
        return Ok(a);
    }
    Ok(MCompanion::new(a)?.full)
}

/// `Φ(C) = det(x I_l - C)`
pub fn mcompanion_char_poly(c: &MCompanion) -> Poly {
    c.full.char_poly().expect("square")
}

fn sweep_size(field: &Field, l: usize, m: usize, budget: u64) -> Result<u64> {
    if m == 0 || m >= l {
        return Err(Error::domain(format!("requires 1 <= m < l, got m = {m}, l = {l}")));
    }
    check_budget(&Pow::pow(field.cardinality(), l * m), budget)
}

/// All `C` with `Φ(C) = f`, in counter order.
pub fn enumerate_fiber(field: &Field, l: usize, m: usize, f: &Poly, budget: u64) -> Result<Vec<MCompanion>> {
    if !f.is_monic() || f.degree() != Degree::Finite(l) {
        return Err(Error::domain(format!("f must be monic of degree l = {l}")));
    }
    let total = sweep_size(field, l, m, budget)?;
    let hits: Vec<u64> = (0..total)
        .into_par_iter()
        .filter(|&idx| {
            let c = MCompanion::from_counter(field, l, m, idx).expect("shape checked");
            mcompanion_char_poly(&c) == *f
        })
        .collect();
    hits.into_iter()
        .map(|idx| MCompanion::from_counter(field, l, m, idx))
        .collect()
}

/// Fiber size of Φ over every monic `f` of degree `l`, in monic enumeration order.
pub fn phi_histogram(field: &Field, l: usize, m: usize, budget: u64) -> Result<Vec<(Poly, u64)>> {
    let total = sweep_size(field, l, m, budget)?;
    let counts = (0..total)
        .into_par_iter()
        .fold(HashMap::<Poly, u64>::new, |mut acc, idx| {
            let c = MCompanion::from_counter(field, l, m, idx).expect("shape checked");
            *acc.entry(mcompanion_char_poly(&c)).or_default() += 1;
            acc
        })
        .reduce(HashMap::new, |mut a, b| {
            for (k, v) in b {
                *a.entry(k).or_default() += v;
            }
            a
        });
    Ok(enumerate_monic(field, l)?
        .map(|f| {
            let n = counts.get(&f).copied().unwrap_or(0);
            (f, n)
        })
        .collect())
}

/// For `i = 0..m`, whether `x [I_{l-m+i}; 0] - C_i` is unimodular, `C_i` the
/// first `l - m + i` columns of `C`.
pub fn stepwise_unimodular_profile(c: &MCompanion) -> Vec<bool> {
    (0..c.m()).map(|i| is_unimodular(&linear_pencil(&c.prefix(i)))).collect()
}
