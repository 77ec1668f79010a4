//! Closed-form counts and probabilities, in exact arithmetic.

use std::collections::BTreeMap;

use num_bigint::BigUint;
use num_rational::BigRational;
use num_traits::{One, Pow};
use serde::ser::SerializeStruct;
use serde::{Serialize, Serializer};
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::gf::prime_power;
use crate::linalg::gaussian_binomial;

/// A closed-form count together with the inputs that produced it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CountResult {
    pub formula: String,
    pub params: BTreeMap<String, Value>,
    pub value: BigUint,
    /// `value` divided by the size of the ambient set, when there is one.
    pub probability: Option<BigRational>,
}

impl Serialize for CountResult {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut st = s.serialize_struct("CountResult", 4)?;
        st.serialize_field("formula", &self.formula)?;
        st.serialize_field("params", &self.params)?;
        st.serialize_field("value", &self.value.to_string())?;
        st.serialize_field("probability", &self.probability.as_ref().map(rational_string))?;
        st.end()
    }
}

/// `n/d` in lowest terms, always with an explicit denominator.
pub fn rational_string(r: &BigRational) -> String {
    format!("{}/{}", r.numer(), r.denom())
}

pub(crate) fn big(n: u64) -> BigUint {
    BigUint::from(n)
}

pub(crate) fn qpow(q: u64, e: usize) -> BigUint {
    Pow::pow(big(q), e)
}

pub(crate) fn ratio(num: &BigUint, den: &BigUint) -> BigRational {
    BigRational::new(num.clone().into(), den.clone().into())
}

/// Rejects `q` that is not a prime power.
pub fn check_q(q: u64) -> Result<()> {
    match prime_power(q) {
        Some(_) => Ok(()),
        None => Err(Error::domain(format!("q = {q} is not a prime power"))),
    }
}

fn result(formula: &str, params: Value, value: BigUint, total: Option<BigUint>) -> CountResult {
    let params = match params {
        Value::Object(m) => m.into_iter().collect(),
        _ => BTreeMap::new(),
    };
    let probability = total.map(|t| ratio(&value, &t));
    CountResult {
        formula: formula.to_string(),
        params,
        value,
        probability,
    }
}

/// `∏_{i=lo}^{hi} (q^a - q^{b+i})`
fn prod_diff(q: u64, a: usize, b: usize, lo: usize, hi: usize) -> BigUint {
    let mut acc = BigUint::one();
    for i in lo..=hi {
        acc *= qpow(q, a) - qpow(q, b + i);
    }
    acc
}

/// Number of `m`-tuples `(a_i x^{d_i+1} + h_i)` with `deg h_i <= d_i` and GCD 1,
/// for a fixed nonzero `a`: `q^{k+m} - q^{k+1}` where `k = Σ d_i`.
pub fn count_coprime_tuples(q: u64, degrees: &[i64]) -> Result<CountResult> {
    check_q(q)?;
    if degrees.is_empty() {
        return Err(Error::domain("requires m >= 1"));
    }
    if degrees.windows(2).any(|w| w[0] < w[1]) {
        return Err(Error::domain("requires nonincreasing degrees d_1 >= … >= d_m"));
    }
    if degrees.iter().any(|&d| d < 0) {
        return Err(Error::domain(
            "requires all d_i >= 0; negative degrees are only covered by the brute-force oracle",
        ));
    }
    let m = degrees.len();
    let k: usize = degrees.iter().map(|&d| d as usize).sum();
    let value = qpow(q, k + m) - qpow(q, k + 1);
    Ok(result(
        "coprime-tuples",
        json!({"q": q, "m": m, "degrees": degrees, "k": k}),
        value,
        Some(qpow(q, k + m)),
    ))
}

fn check_k_lt_n(n: usize, k: usize) -> Result<()> {
    if k == 0 {
        return Err(Error::domain("requires k >= 1"));
    }
    if k >= n {
        return Err(Error::domain(format!("requires k < n, got k = {k}, n = {n}")));
    }
    Ok(())
}

/// Number of `A ∈ M_{n,k}(F_q)` with `x I_{n,k} - A` unimodular: `∏_{i=1}^k (q^n - q^i)`.
pub fn count_simple(q: u64, n: usize, k: usize) -> Result<CountResult> {
    check_q(q)?;
    check_k_lt_n(n, k)?;
    Ok(result(
        "simple",
        json!({"q": q, "n": n, "k": k}),
        prod_diff(q, n, 0, 1, k),
        Some(qpow(q, n * k)),
    ))
}

/// Number of ways to append `t` columns to a fixed unimodular `n x k` base so the
/// pencil stays unimodular: `∏_{i=1}^t (q^n - q^{k+i})`.
pub fn count_extension(q: u64, n: usize, k: usize, t: usize) -> Result<CountResult> {
    check_q(q)?;
    if t == 0 {
        return Err(Error::domain("requires t >= 1"));
    }
    if k + t >= n {
        return Err(Error::domain(format!("requires k + t < n, got k = {k}, t = {t}, n = {n}")));
    }
    Ok(result(
        "extension",
        json!({"q": q, "n": n, "k": k, "t": t}),
        prod_diff(q, n, k, 1, t),
        Some(qpow(q, n * t)),
    ))
}

/// Number of `m`-companion matrices of order `l` with a given irreducible
/// characteristic polynomial: `∏_{t=1}^{m-1} (q^l - q^{l-t})`.
pub fn fiber_size(q: u64, l: usize, m: usize) -> Result<CountResult> {
    check_q(q)?;
    if m == 0 || m >= l {
        return Err(Error::domain(format!("requires 1 <= m < l, got m = {m}, l = {l}")));
    }
    let mut value = BigUint::one();
    for t in 1..m {
        value *= qpow(q, l) - qpow(q, l - t);
    }
    Ok(result(
        "fiber",
        json!({"q": q, "l": l, "m": m}),
        value,
        Some(qpow(q, l * m)),
    ))
}

/// Number of `(m, d)`-block companion matrices with a given irreducible
/// characteristic polynomial of degree `md`: `q^{m(m-1)(d-1)} ∏_{i=1}^{m-1} (q^m - q^i)`.
pub fn count_block_companion(q: u64, m: usize, d: usize) -> Result<CountResult> {
    check_q(q)?;
    if m == 0 || d == 0 {
        return Err(Error::domain(format!("requires m >= 1 and d >= 1, got m = {m}, d = {d}")));
    }
    let value = qpow(q, m * (m - 1) * (d - 1)) * prod_diff(q, m, 0, 1, m - 1);
    Ok(result(
        "block-companion",
        json!({"q": q, "m": m, "d": d}),
        value,
        Some(qpow(q, m * m * d)),
    ))
}

/// Number of `α`-splitting `m`-dimensional subspaces of `F_{q^{md}}`:
/// `(q^{md} - 1)/(q^m - 1) · q^{m(m-1)(d-1)}`.
pub fn count_splitting(q: u64, m: usize, d: usize) -> Result<CountResult> {
    check_q(q)?;
    if m == 0 || d == 0 {
        return Err(Error::domain(format!("requires m >= 1 and d >= 1, got m = {m}, d = {d}")));
    }
    let one = BigUint::one();
    let num = qpow(q, m * d) - &one;
    let den = qpow(q, m) - &one;
    debug_assert_eq!(&num % &den, BigUint::from(0u32));
    let value = num / den * qpow(q, m * (m - 1) * (d - 1));
    Ok(result(
        "splitting",
        json!({"q": q, "m": m, "d": d}),
        value,
        Some(gaussian_binomial(q, m * d, m)),
    ))
}

/// `∏_{i=1}^k (1 - q^{i-n})`
pub fn unimodular_probability(q: u64, n: usize, k: usize) -> Result<BigRational> {
    check_q(q)?;
    check_k_lt_n(n, k)?;
    let mut acc = BigRational::one();
    for i in 1..=k {
        acc *= BigRational::one() - ratio(&BigUint::one(), &qpow(q, n - i));
    }
    Ok(acc)
}

/// Number of unimodular members of `M_{n,k}(F_q[x]; d)`:
/// `∏_{i=1}^k (q^{nd} - q^{n(d-1)+i})`, with probability `∏_{i=1}^k (1 - q^{i-n})`.
pub fn count_density(q: u64, n: usize, k: usize, d: usize) -> Result<CountResult> {
    check_q(q)?;
    check_k_lt_n(n, k)?;
    if d == 0 {
        return Err(Error::domain("requires d >= 1"));
    }
    let value = prod_diff(q, n * d, n * (d - 1), 1, k);
    let r = result(
        "density",
        json!({"q": q, "n": n, "k": k, "d": d}),
        value,
        Some(qpow(q, n * k * d)),
    );
    debug_assert_eq!(r.probability, Some(unimodular_probability(q, n, k)?));
    Ok(r)
}
