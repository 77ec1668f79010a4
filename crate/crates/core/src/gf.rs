//! Exact arithmetic in the finite fields GF(p^e).
//!
//! A [`Field`] is a cheap-to-clone handle on an immutable field description.
//! Elements are stored as [`Fe`], the little-endian base-`p` encoding of their
//! coefficient vector in the basis `1, t, ..., t^(e-1)` of `GF(p)[t]/(modulus)`.
//! The encoding is canonical, so element equality is equality of `Fe` values
//! and `0..q` enumerates the field in coefficient order with zero first.
//!
//! Prime fields use direct modular arithmetic. Extension fields multiply via
//! discrete log / antilog tables built once at construction; `q` is capped at
//! 2^20 for them.

use std::fmt;
use std::hash::{Hash, Hasher};
use std::sync::Arc;

use num_bigint::BigUint;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::poly::Poly;

/// Largest supported order of a proper extension field.
pub const MAX_EXTENSION_ORDER: u64 = 1 << 20;

/// Serializable description of a field: `{"p":…, "e":…, "modulus":[…]}`.
///
/// `modulus` lists the residues of the defining polynomial low degree first,
/// including the leading 1. It is empty for prime fields.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct FieldSpec {
    pub p: u32,
    pub e: u32,
    #[serde(default)]
    pub modulus: Vec<u32>,
}

/// A field element in its canonical integer encoding.
#[derive(Copy, Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Fe(u32);

impl Fe {
    pub const ZERO: Fe = Fe(0);
    pub const ONE: Fe = Fe(1);

    #[inline]
    pub fn index(self) -> u32 {
        self.0
    }

    #[inline]
    pub fn is_zero(self) -> bool {
        self.0 == 0
    }
}

#[derive(Clone)]
pub struct Field(Arc<Inner>);

struct Inner {
    p: u32,
    e: u32,
    q: u32,
    modulus: Vec<u32>,
    ext: Option<ExtTables>,
}

struct ExtTables {
    /// `exp[i] = g^i` for a primitive `g`, stored twice over so that sums of
    /// two logs never need reducing.
    exp: Vec<u32>,
    log: Vec<u32>,
    neg: Vec<u32>,
    /// Full addition table for small odd-characteristic fields.
    add: Option<Vec<u32>>,
}

pub(crate) fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2u64;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

/// Writes `q = p^e` if `q` is a prime power.
pub(crate) fn prime_power(q: u64) -> Option<(u32, u32)> {
    if q < 2 {
        return None;
    }
    let mut p = 2u64;
    while p * p <= q && !q.is_multiple_of(p) {
        p += 1;
    }
    if !q.is_multiple_of(p) {
        p = q;
    }
    let mut e = 0u32;
    let mut r = q;
    while r.is_multiple_of(p) {
        r /= p;
        e += 1;
    }
    (r == 1 && p <= u32::MAX as u64).then_some((p as u32, e))
}

impl Field {
    /// The prime field GF(p).
    pub fn prime(p: u32) -> Result<Field> {
        Field::new(p, 1, None)
    }

    /// Builds GF(p^e). Without an explicit modulus the first monic irreducible of
    /// degree `e` in [`crate::poly::enumerate_monic`] order is used.
    pub fn new(p: u32, e: u32, modulus: Option<&[u32]>) -> Result<Field> {
        if !is_prime(p as u64) {
            return Err(Error::NotPrime(p as u64));
        }
        if e == 0 {
            return Err(Error::domain("requires extension degree e >= 1"));
        }
        if e == 1 {
            if modulus.is_some() {
                return Err(Error::BadModulus("modulus supplied for prime field".into()));
            }
            return Ok(Field(Arc::new(Inner {
                p,
                e: 1,
                q: p,
                modulus: Vec::new(),
                ext: None,
            })));
        }
        let q = (p as u64)
            .checked_pow(e)
            .filter(|&q| q <= MAX_EXTENSION_ORDER)
            .ok_or_else(|| Error::domain("extension fields require q <= 2^20"))?;
        let base = Field::prime(p)?;
        let modulus = match modulus {
            Some(m) => {
                if m.len() != e as usize + 1 || m.last() != Some(&1) {
                    return Err(Error::BadModulus(format!("modulus must be monic of degree {e}")));
                }
                if m.iter().any(|&c| c >= p) {
                    return Err(Error::BadModulus(format!("coefficients must lie in [0, {p})")));
                }
                let poly = Poly::new(&base, m.iter().map(|&c| Fe(c)).collect());
                if !poly.is_irreducible()? {
                    return Err(Error::BadModulus(format!("{poly} is reducible over GF({p})")));
                }
                m.to_vec()
            }
            None => {
                let f = crate::poly::enumerate_irreducible(&base, e as usize)?
                    .next()
                    .expect("irreducible polynomials exist in every degree");
                f.coeffs().iter().map(|c| c.0).collect()
            }
        };
        let ext = ExtTables::build(p, e, q as u32, &modulus);
        Ok(Field(Arc::new(Inner {
            p,
            e,
            q: q as u32,
            modulus,
            ext: Some(ext),
        })))
    }

    /// The field with `q` elements (default modulus).
    pub fn with_order(q: u64) -> Result<Field> {
        let (p, e) =
            prime_power(q).ok_or_else(|| Error::domain(format!("q = {q} is not a prime power")))?;
        Field::new(p, e, None)
    }

    pub fn from_spec(spec: &FieldSpec) -> Result<Field> {
        if spec.modulus.is_empty() {
            Field::new(spec.p, spec.e, None)
        } else {
            Field::new(spec.p, spec.e, Some(&spec.modulus))
        }
    }

    pub fn spec(&self) -> FieldSpec {
        FieldSpec {
            p: self.0.p,
            e: self.0.e,
            modulus: self.0.modulus.clone(),
        }
    }

    #[inline]
    pub fn characteristic(&self) -> u32 {
        self.0.p
    }

    #[inline]
    pub fn degree(&self) -> u32 {
        self.0.e
    }

    /// Number of elements as a machine integer.
    #[inline]
    pub fn order(&self) -> u64 {
        self.0.q as u64
    }

    /// Number of elements as an arbitrary-precision integer.
    pub fn cardinality(&self) -> BigUint {
        BigUint::from(self.0.q)
    }

    /// Defining polynomial over GF(p), low degree first; empty for prime fields.
    pub fn modulus(&self) -> &[u32] {
        &self.0.modulus
    }

    pub fn is_prime_field(&self) -> bool {
        self.0.e == 1
    }

    pub fn same(&self, other: &Field) -> bool {
        Arc::ptr_eq(&self.0, &other.0)
            || (self.0.p == other.0.p && self.0.e == other.0.e && self.0.modulus == other.0.modulus)
    }

    #[inline]
    pub fn zero(&self) -> Fe {
        Fe::ZERO
    }

    #[inline]
    pub fn one(&self) -> Fe {
        Fe::ONE
    }

    /// Element with the given canonical index.
    pub fn element(&self, index: u64) -> Result<Fe> {
        if index < self.order() {
            Ok(Fe(index as u32))
        } else {
            Err(Error::domain(format!("index {index} out of range for GF({})", self.0.q)))
        }
    }

    /// Reduces an arbitrary integer onto `0..q`; used for uniform sampling.
    #[inline]
    pub fn from_u64_wrapping(&self, v: u64) -> Fe {
        Fe((v % self.order()) as u32)
    }

    /// The image of an integer under the ring map Z -> GF(q).
    pub fn from_int(&self, v: i64) -> Fe {
        Fe(v.rem_euclid(self.0.p as i64) as u32)
    }

    /// Element with the given coefficient vector (low degree first, at most `e` entries).
    pub fn from_coeffs(&self, coeffs: &[u32]) -> Result<Fe> {
        if coeffs.len() > self.0.e as usize {
            return Err(Error::domain(format!(
                "expected at most {} coefficients, got {}",
                self.0.e,
                coeffs.len()
            )));
        }
        let mut v = 0u64;
        for &c in coeffs.iter().rev() {
            if c >= self.0.p {
                return Err(Error::domain(format!("residue {c} not reduced mod {}", self.0.p)));
            }
            v = v * self.0.p as u64 + c as u64;
        }
        Ok(Fe(v as u32))
    }

    /// Coefficient vector of length exactly `e`.
    pub fn coeffs(&self, a: Fe) -> Vec<u32> {
        let p = self.0.p;
        let mut v = a.0;
        (0..self.0.e)
            .map(|_| {
                let c = v % p;
                v /= p;
                c
            })
            .collect()
    }

    /// All `q` elements, zero first, in coefficient order.
    pub fn elements(&self) -> impl Iterator<Item = Fe> + Clone {
        (0..self.0.q).map(Fe)
    }

    /// The class of the indeterminate in `GF(p)[t]/(modulus)`; `None` for prime fields.
    pub fn generator(&self) -> Option<Fe> {
        (self.0.e > 1).then_some(Fe(self.0.p))
    }

    #[inline]
    pub fn add(&self, a: Fe, b: Fe) -> Fe {
        let inner = &*self.0;
        match &inner.ext {
            None => {
                let s = a.0 as u64 + b.0 as u64;
                let p = inner.p as u64;
                Fe(if s >= p { s - p } else { s } as u32)
            }
            Some(_) if inner.p == 2 => Fe(a.0 ^ b.0),
            Some(t) => match &t.add {
                Some(table) => Fe(table[(a.0 * inner.q + b.0) as usize]),
                None => Fe(digit_add(inner.p, inner.e, a.0, b.0)),
            },
        }
    }

    #[inline]
    pub fn neg(&self, a: Fe) -> Fe {
        let inner = &*self.0;
        match &inner.ext {
            None => Fe(if a.0 == 0 { 0 } else { inner.p - a.0 }),
            Some(t) => Fe(t.neg[a.0 as usize]),
        }
    }

    #[inline]
    pub fn sub(&self, a: Fe, b: Fe) -> Fe {
        self.add(a, self.neg(b))
    }

    #[inline]
    pub fn mul(&self, a: Fe, b: Fe) -> Fe {
        let inner = &*self.0;
        match &inner.ext {
            None => Fe(((a.0 as u64 * b.0 as u64) % inner.p as u64) as u32),
            Some(t) => {
                if a.0 == 0 || b.0 == 0 {
                    Fe::ZERO
                } else {
                    Fe(t.exp[(t.log[a.0 as usize] + t.log[b.0 as usize]) as usize])
                }
            }
        }
    }

    #[inline]
    pub fn inv(&self, a: Fe) -> Option<Fe> {
        if a.0 == 0 {
            return None;
        }
        let inner = &*self.0;
        match &inner.ext {
            None => Some(self.pow(a, inner.p as u64 - 2)),
            Some(t) => {
                let n = inner.q - 1;
                Some(Fe(t.exp[((n - t.log[a.0 as usize]) % n) as usize]))
            }
        }
    }

    pub fn div(&self, a: Fe, b: Fe) -> Result<Fe> {
        Ok(self.mul(a, self.inv(b).ok_or(Error::ZeroInverse)?))
    }

    pub fn pow(&self, a: Fe, mut exp: u64) -> Fe {
        let mut base = a;
        let mut acc = Fe::ONE;
        while exp > 0 {
            if exp & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            exp >>= 1;
        }
        acc
    }

    /// Canonical string form: a decimal residue for prime fields, comma-separated
    /// residues low degree first otherwise.
    pub fn format(&self, a: Fe) -> String {
        if self.is_prime_field() {
            a.0.to_string()
        } else {
            self.coeffs(a)
                .iter()
                .map(|c| c.to_string())
                .collect::<Vec<_>>()
                .join(",")
        }
    }

    /// Parses the string form produced by [`Field::format`]. Extension-field
    /// strings may omit trailing zero residues.
    pub fn parse(&self, s: &str) -> Result<Fe> {
        let parts: Vec<u32> = s
            .split(',')
            .map(|t| {
                t.trim()
                    .parse::<u32>()
                    .map_err(|_| Error::Parse(format!("bad field element {s:?}")))
            })
            .collect::<Result<_>>()?;
        self.from_coeffs(&parts).map_err(|e| Error::Parse(e.to_string()))
    }

    pub fn wrap(&self, value: Fe) -> FieldElement {
        FieldElement {
            field: self.clone(),
            value,
        }
    }
}

fn digit_add(p: u32, e: u32, mut a: u32, mut b: u32) -> u32 {
    let mut r = 0;
    let mut w = 1;
    for _ in 0..e {
        r += ((a % p + b % p) % p) * w;
        w *= p;
        a /= p;
        b /= p;
    }
    r
}

impl ExtTables {
    fn build(p: u32, e: u32, q: u32, modulus: &[u32]) -> ExtTables {
        let e = e as usize;
        let p64 = p as u64;
        let to_digits = |mut v: u32| -> Vec<u64> {
            (0..e)
                .map(|_| {
                    let c = v % p;
                    v /= p;
                    c as u64
                })
                .collect()
        };
        let from_digits = |d: &[u64]| -> u32 { d.iter().rev().fold(0u64, |acc, &c| acc * p64 + c) as u32 };
        // Product in GF(p)[t]/(modulus) on digit vectors.
        let mulmod = |a: &[u64], b: &[u64]| -> Vec<u64> {
            let mut prod = vec![0u64; 2 * e - 1];
            for (i, &x) in a.iter().enumerate() {
                if x == 0 {
                    continue;
                }
                for (j, &y) in b.iter().enumerate() {
                    prod[i + j] = (prod[i + j] + x * y) % p64;
                }
            }
            for top in (e..prod.len()).rev() {
                let c = prod[top];
                if c == 0 {
                    continue;
                }
                prod[top] = 0;
                for (k, &m) in modulus[..e].iter().enumerate() {
                    let idx = top - e + k;
                    prod[idx] = (prod[idx] + (p64 - c) * m as u64) % p64;
                }
            }
            prod.truncate(e);
            prod
        };

        let n = (q - 1) as usize;
        let mut exp = vec![0u32; 2 * n];
        let mut log = vec![0u32; q as usize];
        // Any candidate whose powers return to 1 before step q-1 is not primitive.
        'candidates: for g in 2..q {
            let gd = to_digits(g);
            let mut cur = to_digits(1);
            for (i, slot) in exp.iter_mut().enumerate().take(n) {
                let v = from_digits(&cur);
                if i > 0 && v == 1 {
                    continue 'candidates;
                }
                *slot = v;
                log[v as usize] = i as u32;
                cur = mulmod(&cur, &gd);
            }
            break;
        }
        for i in 0..n {
            exp[n + i] = exp[i];
        }
        let neg = (0..q)
            .map(|v| {
                let d: Vec<u64> = to_digits(v).iter().map(|&c| (p64 - c) % p64).collect();
                from_digits(&d)
            })
            .collect();
        let add = (p != 2 && q <= 256).then(|| {
            let mut t = vec![0u32; (q * q) as usize];
            for a in 0..q {
                for b in 0..q {
                    t[(a * q + b) as usize] = digit_add(p, e as u32, a, b);
                }
            }
            t
        });
        ExtTables { exp, log, neg, add }
    }
}

impl PartialEq for Field {
    fn eq(&self, other: &Self) -> bool {
        self.same(other)
    }
}

impl Eq for Field {}

impl Hash for Field {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.0.p.hash(state);
        self.0.e.hash(state);
        self.0.modulus.hash(state);
    }
}

impl fmt::Debug for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_prime_field() {
            write!(f, "GF({})", self.0.p)
        } else {
            write!(f, "GF({}^{})", self.0.p, self.0.e)
        }
    }
}

/// A field element bundled with its field. Binary operations check that both
/// operands live in the same field.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct FieldElement {
    field: Field,
    value: Fe,
}

impl FieldElement {
    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn value(&self) -> Fe {
        self.value
    }

    pub fn coeffs(&self) -> Vec<u32> {
        self.field.coeffs(self.value)
    }

    fn check(&self, other: &FieldElement) -> Result<()> {
        if self.field.same(&other.field) {
            Ok(())
        } else {
            Err(Error::MixedFields)
        }
    }

    pub fn add(&self, other: &FieldElement) -> Result<FieldElement> {
        self.check(other)?;
        Ok(self.field.wrap(self.field.add(self.value, other.value)))
    }

    pub fn sub(&self, other: &FieldElement) -> Result<FieldElement> {
        self.check(other)?;
        Ok(self.field.wrap(self.field.sub(self.value, other.value)))
    }

    pub fn mul(&self, other: &FieldElement) -> Result<FieldElement> {
        self.check(other)?;
        Ok(self.field.wrap(self.field.mul(self.value, other.value)))
    }

    pub fn neg(&self) -> FieldElement {
        self.field.wrap(self.field.neg(self.value))
    }

    pub fn inv(&self) -> Result<FieldElement> {
        let v = self.field.inv(self.value).ok_or(Error::ZeroInverse)?;
        Ok(self.field.wrap(v))
    }

    pub fn pow(&self, exp: u64) -> FieldElement {
        self.field.wrap(self.field.pow(self.value, exp))
    }
}

impl fmt::Display for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.field.format(self.value))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn fields() -> Vec<Field> {
        vec![
            Field::prime(2).unwrap(),
            Field::prime(3).unwrap(),
            Field::prime(5).unwrap(),
            Field::new(2, 2, None).unwrap(),
            Field::new(3, 2, None).unwrap(),
            Field::new(2, 4, None).unwrap(),
            Field::new(2, 6, None).unwrap(),
            Field::new(7, 2, None).unwrap(),
        ]
    }

    #[test]
    fn make_prime_and_extension() {
        let f2 = Field::new(2, 1, None).unwrap();
        assert_eq!(f2.order(), 2);
        let f4 = Field::new(2, 2, None).unwrap();
        assert_eq!(f4.modulus(), &[1, 1, 1]);
        assert_eq!(f4.cardinality(), BigUint::from(4u32));
    }

    #[test]
    fn make_rejects_bad_input() {
        assert_eq!(
            Field::new(3, 1, Some(&[1, 1])).unwrap_err(),
            Error::BadModulus("modulus supplied for prime field".into())
        );
        assert_eq!(Field::new(4, 1, None).unwrap_err(), Error::NotPrime(4));
        assert!(matches!(Field::new(2, 2, Some(&[1, 0, 1])), Err(Error::BadModulus(_))));
        assert!(matches!(Field::new(2, 2, Some(&[1, 1])), Err(Error::BadModulus(_))));
        assert!(matches!(Field::new(2, 2, Some(&[1, 1, 0])), Err(Error::BadModulus(_))));
        assert!(matches!(Field::new(2, 0, None), Err(Error::Domain(_))));
        assert!(matches!(Field::new(2, 21, None), Err(Error::Domain(_))));
    }

    #[test]
    fn default_quartic_modulus() {
        let f16 = Field::new(2, 4, None).unwrap();
        assert_eq!(f16.modulus(), &[1, 1, 0, 0, 1]);
    }

    #[test]
    fn with_order_factors_q() {
        assert_eq!(Field::with_order(9).unwrap().spec().e, 2);
        assert!(Field::with_order(6).is_err());
        assert!(Field::with_order(1).is_err());
    }

    #[test]
    fn small_examples() {
        let f2 = Field::prime(2).unwrap();
        assert_eq!(f2.add(Fe::ONE, Fe::ONE), Fe::ZERO);
        let f5 = Field::prime(5).unwrap();
        assert_eq!(f5.inv(f5.element(2).unwrap()), Some(f5.element(3).unwrap()));
        let f4 = Field::new(2, 2, None).unwrap();
        let alpha = f4.generator().unwrap();
        assert_eq!(f4.coeffs(f4.mul(alpha, alpha)), vec![1, 1]);
        assert_eq!(f4.inv(Fe::ZERO), None);
    }

    #[test]
    fn enumeration_order() {
        let f2 = Field::prime(2).unwrap();
        assert_eq!(f2.elements().collect::<Vec<_>>(), vec![Fe(0), Fe(1)]);
        let f3 = Field::prime(3).unwrap();
        assert_eq!(f3.elements().map(|a| f3.format(a)).collect::<Vec<_>>(), ["0", "1", "2"]);
        let f4 = Field::new(2, 2, None).unwrap();
        let all: Vec<_> = f4.elements().collect();
        assert_eq!(all.len(), 4);
        assert_eq!(f4.coeffs(all[2]), vec![0, 1]);
        for f in fields() {
            let mut v: Vec<_> = f.elements().collect();
            v.dedup();
            assert_eq!(v.len() as u64, f.order());
        }
    }

    #[test]
    fn inverses_exhaustive() {
        for f in fields().into_iter().filter(|f| f.order() <= 64) {
            for a in f.elements().skip(1) {
                assert_eq!(f.mul(a, f.inv(a).unwrap()), Fe::ONE, "{f} {a:?}");
            }
        }
    }

    #[test]
    fn frobenius_exhaustive() {
        for f in fields().into_iter().filter(|f| f.order() <= 16) {
            let p = f.characteristic() as u64;
            for a in f.elements() {
                for b in f.elements() {
                    let lhs = f.pow(f.add(a, b), p);
                    let rhs = f.add(f.pow(a, p), f.pow(b, p));
                    assert_eq!(lhs, rhs);
                }
            }
        }
    }

    #[test]
    fn multiplicative_group_is_cyclic_of_order_q_minus_1() {
        for f in fields() {
            let n = f.order() - 1;
            for a in f.elements().skip(1).take(50) {
                assert_eq!(f.pow(a, n), Fe::ONE);
            }
        }
    }

    #[test]
    fn element_strings_round_trip() {
        let f8 = Field::new(2, 3, None).unwrap();
        let a = f8.from_coeffs(&[1, 0, 1]).unwrap();
        assert_eq!(f8.format(a), "1,0,1");
        assert_eq!(f8.parse("1,0,1").unwrap(), a);
        assert_eq!(f8.parse("1").unwrap(), Fe::ONE);
        assert!(f8.parse("1,2").is_err());
        let spec = serde_json::to_string(&f8.spec()).unwrap();
        assert_eq!(spec, r#"{"p":2,"e":3,"modulus":[1,1,0,1]}"#);
        let back: FieldSpec = serde_json::from_str(&spec).unwrap();
        assert_eq!(Field::from_spec(&back).unwrap(), f8);
    }

    #[test]
    fn checked_elements_reject_mixed_fields() {
        let f4 = Field::new(2, 2, None).unwrap();
        let f5 = Field::prime(5).unwrap();
        let a = f4.wrap(Fe::ONE);
        let b = f5.wrap(Fe::ONE);
        assert_eq!(a.add(&b).unwrap_err(), Error::MixedFields);
        assert_eq!(f5.wrap(Fe::ZERO).inv().unwrap_err(), Error::ZeroInverse);
        let two = f5.wrap(f5.element(2).unwrap());
        assert_eq!(two.inv().unwrap().to_string(), "3");
    }

    fn field_and_triple() -> impl Strategy<Value = (usize, u64, u64, u64)> {
        (0usize..8, any::<u64>(), any::<u64>(), any::<u64>())
    }

    proptest! {
        #[test]
        fn field_axioms((fi, a, b, c) in field_and_triple()) {
            let f = &fields()[fi];
            let (a, b, c) = (f.from_u64_wrapping(a), f.from_u64_wrapping(b), f.from_u64_wrapping(c));
            prop_assert_eq!(f.add(f.add(a, b), c), f.add(a, f.add(b, c)));
            prop_assert_eq!(f.mul(f.mul(a, b), c), f.mul(a, f.mul(b, c)));
            prop_assert_eq!(f.add(a, b), f.add(b, a));
            prop_assert_eq!(f.mul(a, b), f.mul(b, a));
            prop_assert_eq!(f.mul(a, f.add(b, c)), f.add(f.mul(a, b), f.mul(a, c)));
            prop_assert_eq!(f.add(a, f.neg(a)), Fe::ZERO);
            prop_assert_eq!(f.sub(f.add(a, b), b), a);
        }
    }
}
