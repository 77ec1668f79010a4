//! Dense univariate polynomials over a [`Field`].

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::{BigInt, BigUint};
use num_traits::Zero;

use crate::error::{Error, Result};
use crate::gf::{Fe, Field};

/// Degree of a polynomial. The zero polynomial has degree `NegInfinity`, which
/// orders below every finite degree and supports no arithmetic.
#[derive(Copy, Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Degree {
    NegInfinity,
    Finite(usize),
}

impl Degree {
    pub fn finite(self) -> Option<usize> {
        match self {
            Degree::NegInfinity => None,
            Degree::Finite(d) => Some(d),
        }
    }
}

impl fmt::Display for Degree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Degree::NegInfinity => f.write_str("-inf"),
            Degree::Finite(d) => write!(f, "{d}"),
        }
    }
}

/// A polynomial with coefficients stored low degree first and no trailing zeros.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Poly {
    field: Field,
    coeffs: Vec<Fe>,
}

impl Poly {
    pub fn new(field: &Field, mut coeffs: Vec<Fe>) -> Poly {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        Poly {
            field: field.clone(),
            coeffs,
        }
    }

    pub fn zero(field: &Field) -> Poly {
        Poly::new(field, Vec::new())
    }

    pub fn one(field: &Field) -> Poly {
        Poly::constant(field, Fe::ONE)
    }

    pub fn constant(field: &Field, c: Fe) -> Poly {
        Poly::new(field, vec![c])
    }

    pub fn x(field: &Field) -> Poly {
        Poly::new(field, vec![Fe::ZERO, Fe::ONE])
    }

    /// `c * x^deg`
    pub fn monomial(field: &Field, c: Fe, deg: usize) -> Poly {
        let mut coeffs = vec![Fe::ZERO; deg + 1];
        coeffs[deg] = c;
        Poly::new(field, coeffs)
    }

    /// Coefficients given as integers, mapped into the prime subfield.
    pub fn from_ints(field: &Field, coeffs: &[i64]) -> Poly {
        Poly::new(field, coeffs.iter().map(|&c| field.from_int(c)).collect())
    }

    /// Parses the JSON-facing form: field-element strings low degree first.
    pub fn from_strings<S: AsRef<str>>(field: &Field, coeffs: &[S]) -> Result<Poly> {
        let coeffs = coeffs
            .iter()
            .map(|s| field.parse(s.as_ref()))
            .collect::<Result<Vec<_>>>()?;
        Ok(Poly::new(field, coeffs))
    }

    pub fn to_strings(&self) -> Vec<String> {
        self.coeffs.iter().map(|&c| self.field.format(c)).collect()
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn coeffs(&self) -> &[Fe] {
        &self.coeffs
    }

    /// Coefficient of `x^i` (zero beyond the degree).
    pub fn coeff(&self, i: usize) -> Fe {
        self.coeffs.get(i).copied().unwrap_or(Fe::ZERO)
    }

    pub fn degree(&self) -> Degree {
        match self.coeffs.len() {
            0 => Degree::NegInfinity,
            n => Degree::Finite(n - 1),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.coeffs.len() == 1 && self.coeffs[0] == Fe::ONE
    }

    /// Nonzero constant, i.e. a unit of `F_q[x]`.
    pub fn is_unit(&self) -> bool {
        self.coeffs.len() == 1
    }

    pub fn is_monic(&self) -> bool {
        self.coeffs.last() == Some(&Fe::ONE)
    }

    pub fn leading(&self) -> Option<Fe> {
        self.coeffs.last().copied()
    }

    fn check_field(&self, other: &Poly) {
        assert!(
            self.field.same(&other.field),
            "polynomials over different fields: {} and {}",
            self.field,
            other.field
        );
    }

    pub fn scale(&self, c: Fe) -> Poly {
        let f = &self.field;
        Poly::new(f, self.coeffs.iter().map(|&a| f.mul(a, c)).collect())
    }

    /// Monic associate; zero stays zero.
    pub fn monic(&self) -> Poly {
        match self.leading() {
            None => self.clone(),
            Some(lc) if lc == Fe::ONE => self.clone(),
            Some(lc) => self.scale(self.field.inv(lc).expect("leading coefficient is nonzero")),
        }
    }

    pub fn eval(&self, at: Fe) -> Fe {
        let f = &self.field;
        self.coeffs
            .iter()
            .rev()
            .fold(Fe::ZERO, |acc, &c| f.add(f.mul(acc, at), c))
    }

    /// Returns `(quotient, remainder)` with `self = quotient * g + remainder`
    /// and `deg remainder < deg g`.
    pub fn divmod(&self, g: &Poly) -> Result<(Poly, Poly)> {
        self.check_field(g);
        let f = &self.field;
        let lc = g.leading().ok_or(Error::ZeroDivisor)?;
        let dg = g.coeffs.len() - 1;
        if self.coeffs.len() <= dg {
            return Ok((Poly::zero(f), self.clone()));
        }
        let lc_inv = f.inv(lc).expect("leading coefficient is nonzero");
        let mut rem = self.coeffs.clone();
        let mut quot = vec![Fe::ZERO; rem.len() - dg];
        for i in (0..quot.len()).rev() {
            let c = f.mul(rem[i + dg], lc_inv);
            quot[i] = c;
            if c.is_zero() {
                continue;
            }
            for (j, &gc) in g.coeffs.iter().enumerate() {
                rem[i + j] = f.sub(rem[i + j], f.mul(c, gc));
            }
        }
        rem.truncate(dg);
        Ok((Poly::new(f, quot), Poly::new(f, rem)))
    }

    pub fn rem(&self, g: &Poly) -> Result<Poly> {
        self.divmod(g).map(|(_, r)| r)
    }

    /// `self / g` when the division is exact.
    pub fn exact_div(&self, g: &Poly) -> Result<Poly> {
        let (q, r) = self.divmod(g)?;
        if !r.is_zero() {
            return Err(Error::InvariantBreach(format!("{g} does not divide {self}")));
        }
        Ok(q)
    }

    pub fn divides(&self, other: &Poly) -> bool {
        if self.is_zero() {
            return other.is_zero();
        }
        other.rem(self).map(|r| r.is_zero()).unwrap_or(false)
    }

    /// Monic GCD of two polynomials; zero only when both are zero.
    pub fn gcd(&self, other: &Poly) -> Poly {
        self.check_field(other);
        let mut a = self.clone();
        let mut b = other.clone();
        while !b.is_zero() {
            let r = a.rem(&b).expect("b is nonzero");
            a = b;
            b = r;
        }
        a.monic()
    }

    pub fn mul_mod(&self, other: &Poly, modulus: &Poly) -> Result<Poly> {
        (self * other).rem(modulus)
    }

    pub fn pow_mod(&self, mut exp: u64, modulus: &Poly) -> Result<Poly> {
        let mut base = self.rem(modulus)?;
        let mut acc = Poly::one(&self.field).rem(modulus)?;
        while exp > 0 {
            if exp & 1 == 1 {
                acc = acc.mul_mod(&base, modulus)?;
            }
            exp >>= 1;
            if exp > 0 {
                base = base.mul_mod(&base, modulus)?;
            }
        }
        Ok(acc)
    }

    pub fn pow(&self, exp: u32) -> Poly {
        (0..exp).fold(Poly::one(&self.field), |acc, _| &acc * self)
    }

    /// Rabin's test: a monic `f` of degree `n` is irreducible iff
    /// `x^(q^n) = x mod f` and `gcd(x^(q^(n/r)) - x, f) = 1` for every prime `r | n`.
    pub fn is_irreducible(&self) -> Result<bool> {
        let n = match self.degree() {
            Degree::Finite(n) if n >= 1 => n,
            _ => return Err(Error::domain("irreducibility test requires degree >= 1")),
        };
        if !self.is_monic() {
            return Err(Error::domain("irreducibility test requires a monic polynomial"));
        }
        if n == 1 {
            return Ok(true);
        }
        let q = self.field.order();
        let x = Poly::x(&self.field);
        // frob[i] = x^(q^i) mod f
        let mut frob = Vec::with_capacity(n + 1);
        frob.push(x.clone());
        for i in 1..=n {
            let next = frob[i - 1].pow_mod(q, self)?;
            frob.push(next);
        }
        if frob[n] != x {
            return Ok(false);
        }
        for r in prime_factors(n) {
            let h = &frob[n / r] - &x;
            if !h.gcd(self).is_one() {
                return Ok(false);
            }
        }
        Ok(true)
    }
}

/// Monic GCD of a nonempty list; zero entries are ignored and an all-zero list
/// has GCD zero.
pub fn gcd_monic(fs: &[Poly]) -> Result<Poly> {
    let (first, rest) = fs
        .split_first()
        .ok_or_else(|| Error::domain("gcd of an empty list"))?;
    let mut g = first.monic();
    for f in rest {
        if !g.field().same(f.field()) {
            return Err(Error::MixedFields);
        }
        if g.is_one() {
            break;
        }
        g = g.gcd(f);
    }
    Ok(g)
}

fn prime_factors(mut n: usize) -> Vec<usize> {
    let mut out = Vec::new();
    let mut d = 2;
    while d * d <= n {
        if n.is_multiple_of(d) {
            out.push(d);
            while n.is_multiple_of(d) {
                n /= d;
            }
        }
        d += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

fn mobius(mut n: usize) -> i32 {
    let mut result = 1;
    let mut d = 2;
    while d * d <= n {
        if n.is_multiple_of(d) {
            n /= d;
            if n.is_multiple_of(d) {
                return 0;
            }
            result = -result;
        }
        d += 1;
    }
    if n > 1 {
        result = -result;
    }
    result
}

/// All monic polynomials of degree `deg`, ordered by the base-`q` integer
/// whose digits are the coefficients with `x^0` least significant.
pub fn enumerate_monic(field: &Field, deg: usize) -> Result<impl Iterator<Item = Poly> + Clone> {
    let q = field.order();
    let total = u32::try_from(deg)
        .ok()
        .and_then(|d| q.checked_pow(d))
        .ok_or_else(|| Error::domain(format!("q^{deg} monic polynomials cannot be enumerated")))?;
    let field = field.clone();
    Ok((0..total).map(move |mut idx| {
        let mut coeffs = Vec::with_capacity(deg + 1);
        for _ in 0..deg {
            coeffs.push(field.from_u64_wrapping(idx % q));
            idx /= q;
        }
        coeffs.push(Fe::ONE);
        Poly::new(&field, coeffs)
    }))
}

/// Monic irreducible polynomials of degree `deg`, in [`enumerate_monic`] order.
pub fn enumerate_irreducible(
    field: &Field,
    deg: usize,
) -> Result<impl Iterator<Item = Poly> + Clone> {
    if deg == 0 {
        return Err(Error::domain("irreducible polynomials have degree >= 1"));
    }
    Ok(enumerate_monic(field, deg)?.filter(|f| f.is_irreducible().unwrap_or(false)))
}

/// Number of monic irreducibles of degree `deg`: `(1/n) * sum_{d | n} mu(n/d) q^d`.
pub fn count_irreducible(field: &Field, deg: usize) -> Result<BigUint> {
    if deg == 0 {
        return Err(Error::domain("irreducible polynomials have degree >= 1"));
    }
    let q = BigInt::from(field.order());
    let mut total = BigInt::zero();
    for d in (1..=deg).filter(|d| deg.is_multiple_of(*d)) {
        let mu = mobius(deg / d);
        if mu != 0 {
            total += BigInt::from(mu) * num_traits::pow(q.clone(), d);
        }
    }
    let count = total / BigInt::from(deg);
    Ok(count.to_biguint().expect("necklace count is nonnegative"))
}

impl<'a> Add<&'a Poly> for &'a Poly {
    type Output = Poly;

    fn add(self, rhs: &Poly) -> Poly {
        self.check_field(rhs);
        let f = &self.field;
        let n = self.coeffs.len().max(rhs.coeffs.len());
        Poly::new(f, (0..n).map(|i| f.add(self.coeff(i), rhs.coeff(i))).collect())
    }
}

impl<'a> Sub<&'a Poly> for &'a Poly {
    type Output = Poly;

    fn sub(self, rhs: &Poly) -> Poly {
        self.check_field(rhs);
        let f = &self.field;
        let n = self.coeffs.len().max(rhs.coeffs.len());
        Poly::new(f, (0..n).map(|i| f.sub(self.coeff(i), rhs.coeff(i))).collect())
    }
}

impl<'a> Mul<&'a Poly> for &'a Poly {
    type Output = Poly;

    fn mul(self, rhs: &Poly) -> Poly {
        self.check_field(rhs);
        let f = &self.field;
        if self.is_zero() || rhs.is_zero() {
            return Poly::zero(f);
        }
        let mut out = vec![Fe::ZERO; self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, &a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, &b) in rhs.coeffs.iter().enumerate() {
                out[i + j] = f.add(out[i + j], f.mul(a, b));
            }
        }
        Poly::new(f, out)
    }
}

impl Neg for &Poly {
    type Output = Poly;

    fn neg(self) -> Poly {
        let f = &self.field;
        Poly::new(f, self.coeffs.iter().map(|&c| f.neg(c)).collect())
    }
}

impl fmt::Display for Poly {
    fn fmt(&self, out: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return out.write_str("0");
        }
        let f = &self.field;
        let mut first = true;
        for (i, &c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            if !first {
                out.write_str(" + ")?;
            }
            first = false;
            let cs = if f.is_prime_field() {
                f.format(c)
            } else {
                format!("({})", f.format(c))
            };
            match (i, c == Fe::ONE) {
                (0, _) => out.write_str(&cs)?,
                (1, true) => out.write_str("x")?,
                (1, false) => write!(out, "{cs}x")?,
                (_, true) => write!(out, "x^{i}")?,
                (_, false) => write!(out, "{cs}x^{i}")?,
            }
        }
        Ok(())
    }
}

impl fmt::Debug for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Poly[{}]({self})", self.field)
    }
}

/// `prod` of a list, the empty product being 1.
pub fn product(field: &Field, fs: &[Poly]) -> Poly {
    fs.iter().fold(Poly::one(field), |acc, f| &acc * f)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn gf(p: u32) -> Field {
        Field::prime(p).unwrap()
    }

    fn p(f: &Field, c: &[i64]) -> Poly {
        Poly::from_ints(f, c)
    }

    #[test]
    fn zero_has_sentinel_degree() {
        let f = gf(2);
        assert_eq!(Poly::zero(&f).degree(), Degree::NegInfinity);
        assert!(Degree::NegInfinity < Degree::Finite(0));
        assert_eq!(p(&f, &[1, 0, 0]).degree(), Degree::Finite(0));
    }

    #[test]
    fn divmod_examples() {
        let f2 = gf(2);
        let (q, r) = p(&f2, &[1, 0, 1]).divmod(&p(&f2, &[1, 1])).unwrap();
        assert_eq!((q, r), (p(&f2, &[1, 1]), Poly::zero(&f2)));

        let g = p(&f2, &[1, 1, 0, 1]);
        assert_eq!(g.divmod(&Poly::one(&f2)).unwrap(), (g.clone(), Poly::zero(&f2)));

        // x^3 + 2x + 1 = x * x^2 + (2x + 1) over GF(3)
        let f3 = gf(3);
        let (q, r) = p(&f3, &[1, 2, 0, 1]).divmod(&p(&f3, &[0, 0, 1])).unwrap();
        assert_eq!(q, p(&f3, &[0, 1]));
        assert_eq!(r, p(&f3, &[1, 2]));

        assert_eq!(g.divmod(&Poly::zero(&f2)).unwrap_err(), Error::ZeroDivisor);
    }

    #[test]
    fn gcd_examples() {
        let f3 = gf(3);
        let g = gcd_monic(&[p(&f3, &[-1, 0, 1]), p(&f3, &[-1, 1])]).unwrap();
        assert_eq!(g, p(&f3, &[2, 1]));
        let single = p(&f3, &[1, 2, 2]);
        assert_eq!(gcd_monic(std::slice::from_ref(&single)).unwrap(), single.monic());
        assert!(gcd_monic(&[p(&f3, &[1, 1]), p(&f3, &[2, 1])]).unwrap().is_one());
        assert!(gcd_monic(&[Poly::zero(&f3), Poly::zero(&f3)]).unwrap().is_zero());
        assert_eq!(
            gcd_monic(&[Poly::zero(&f3), p(&f3, &[2, 2])]).unwrap(),
            p(&f3, &[1, 1])
        );
        assert!(gcd_monic(&[]).is_err());
    }

    #[test]
    fn gcd_rejects_mixed_fields() {
        let a = Poly::one(&gf(2));
        let b = Poly::x(&gf(3));
        assert_eq!(gcd_monic(&[Poly::x(&gf(2)), b.clone()]).unwrap_err(), Error::MixedFields);
        assert_eq!(gcd_monic(&[a, b]).unwrap_err(), Error::MixedFields);
    }

    #[test]
    fn irreducibility_examples() {
        let f2 = gf(2);
        assert!(p(&f2, &[1, 1, 1]).is_irreducible().unwrap());
        assert!(!p(&f2, &[1, 0, 1]).is_irreducible().unwrap());
        let quartics: Vec<String> = enumerate_irreducible(&f2, 4)
            .unwrap()
            .map(|f| f.to_string())
            .collect();
        assert_eq!(quartics, ["x^4 + x + 1", "x^4 + x^3 + 1", "x^4 + x^3 + x^2 + x + 1"]);
        assert!(p(&f2, &[1, 1, 0]).is_irreducible().is_ok());
        assert!(p(&f2, &[1]).is_irreducible().is_err());
        let f3 = gf(3);
        assert!(p(&f3, &[1, 2]).is_irreducible().is_err());
    }

    #[test]
    fn enumeration_examples() {
        let f2 = gf(2);
        let lin: Vec<String> = enumerate_monic(&f2, 1).unwrap().map(|f| f.to_string()).collect();
        assert_eq!(lin, ["x", "x + 1"]);
        assert_eq!(enumerate_monic(&gf(3), 2).unwrap().count(), 9);
        assert_eq!(enumerate_monic(&f2, 0).unwrap().collect::<Vec<_>>(), vec![Poly::one(&f2)]);
        assert!(enumerate_irreducible(&f2, 0).is_err());
    }

    #[test]
    fn count_irreducible_examples() {
        assert_eq!(count_irreducible(&gf(2), 4).unwrap(), BigUint::from(3u32));
        assert_eq!(count_irreducible(&gf(2), 1).unwrap(), BigUint::from(2u32));
        assert_eq!(count_irreducible(&gf(3), 2).unwrap(), BigUint::from(3u32));
    }

    /// Trial division by every monic polynomial of degree 1..=n/2.
    fn irreducible_by_trial_division(f: &Poly) -> bool {
        let n = f.degree().finite().unwrap();
        (1..=n / 2).all(|d| enumerate_monic(f.field(), d).unwrap().all(|g| !g.divides(f)))
    }

    #[test]
    fn rabin_matches_trial_division() {
        let fields = [gf(2), gf(3), Field::new(2, 2, None).unwrap()];
        for f in &fields {
            for n in 1..=6usize {
                if f.order() == 4 && n > 4 {
                    continue;
                }
                let mut listed = 0u64;
                for g in enumerate_monic(f, n).unwrap() {
                    let rabin = g.is_irreducible().unwrap();
                    if f.order() <= 3 {
                        assert_eq!(rabin, irreducible_by_trial_division(&g), "{g} over {f}");
                    }
                    listed += rabin as u64;
                }
                assert_eq!(BigUint::from(listed), count_irreducible(f, n).unwrap(), "{f} n={n}");
            }
        }
    }

    #[test]
    fn irreducible_counts_up_to_q4_n6() {
        let f4 = Field::new(2, 2, None).unwrap();
        for n in 5..=6 {
            let listed = enumerate_irreducible(&f4, n).unwrap().count() as u64;
            assert_eq!(BigUint::from(listed), count_irreducible(&f4, n).unwrap());
        }
    }

    #[test]
    fn display_and_strings() {
        let f3 = gf(3);
        assert_eq!(p(&f3, &[1, 0, 2]).to_string(), "2x^2 + 1");
        assert_eq!(Poly::zero(&f3).to_string(), "0");
        let f2 = gf(2);
        assert_eq!(p(&f2, &[1, 1, 1]).to_strings(), ["1", "1", "1"]);
        assert_eq!(Poly::from_strings(&f2, &["1", "1", "1"]).unwrap(), p(&f2, &[1, 1, 1]));
    }

    fn arb_poly(f: Field, max_len: usize) -> impl Strategy<Value = Poly> {
        let q = f.order();
        proptest::collection::vec(0..q, 0..=max_len).prop_map(move |cs| {
            Poly::new(&f, cs.into_iter().map(|c| f.element(c).unwrap()).collect())
        })
    }

    proptest! {
        #[test]
        fn gcd_pulls_out_common_factor(
            a in arb_poly(gf(3), 5),
            b in arb_poly(gf(3), 5),
            h in arb_poly(gf(3), 3),
        ) {
            let lhs = gcd_monic(&[&a * &h, &b * &h]).unwrap();
            let rhs = &h.monic() * &gcd_monic(&[a.clone(), b.clone()]).unwrap();
            prop_assert_eq!(lhs, rhs);
        }

        #[test]
        fn divmod_reconstructs(a in arb_poly(gf(5), 8), b in arb_poly(gf(5), 4)) {
            prop_assume!(!b.is_zero());
            let (q, r) = a.divmod(&b).unwrap();
            prop_assert_eq!(&(&q * &b) + &r, a);
            prop_assert!(r.degree() < b.degree());
        }

        #[test]
        fn gcd_divides_inputs(a in arb_poly(gf(2), 7), b in arb_poly(gf(2), 7)) {
            let g = gcd_monic(&[a.clone(), b.clone()]).unwrap();
            prop_assume!(!g.is_zero());
            prop_assert!(g.divides(&a) && g.divides(&b));
        }
    }
}
