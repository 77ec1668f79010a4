//! Brute-force oracles and experiment drivers that check the closed forms in
//! [`crate::census`] by exhaustive enumeration, plus a seeded Monte Carlo
//! estimator for the unimodular density.
//!
//! Every experiment is deterministic: parallel work is partitioned by index
//! and merged by addition, and random streams are keyed by `(seed, trial)`.

use std::cmp::Ordering;
use std::collections::{BTreeMap, HashMap, HashSet};
use std::fmt;
use std::time::{Duration, Instant};

use num_bigint::BigUint;
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::ser::SerializeMap;
use serde::{Serialize, Serializer};
use serde_json::{json, Value};

use crate::census::{self, big, qpow, ratio, rational_string};
use crate::control::{
    brunovsky_pair, complete_char_poly, controllability_indices, gamma_transform, is_reachable,
    wimmer_completable, MatrixPair,
};
use crate::error::{check_budget, Error, Result, DEFAULT_BUDGET};
use crate::gf::{Fe, Field};
use crate::linalg::{gaussian_binomial, MatF};
use crate::matpoly::{is_unimodular, linear_pencil, linearize, minors_gcd, smith_form, MatPoly, SmithForm};
use crate::poly::{enumerate_irreducible, enumerate_monic, gcd_monic, Poly};
use crate::splitfield::{count_splitting_bruteforce, make_ext, mcompanion_char_poly, stepwise_unimodular_profile, MCompanion};

/// Enumeration budget and worker count shared by all experiments.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct VerifyConfig {
    pub budget: u64,
    /// Worker threads; `None` uses the ambient rayon pool.
    pub jobs: Option<usize>,
}

impl Default for VerifyConfig {
    fn default() -> Self {
        VerifyConfig {
            budget: DEFAULT_BUDGET,
            jobs: None,
        }
    }
}

impl VerifyConfig {
    pub fn with_budget(budget: u64) -> Self {
        VerifyConfig {
            budget,
            ..Default::default()
        }
    }

    fn install<T: Send>(&self, f: impl FnOnce() -> T + Send) -> Result<T> {
        match self.jobs {
            None => Ok(f()),
            Some(n) => {
                let pool = rayon::ThreadPoolBuilder::new()
                    .num_threads(n.max(1))
                    .build()
                    .map_err(|e| Error::domain(format!("cannot start {n} workers: {e}")))?;
                Ok(pool.install(f))
            }
        }
    }

    fn check(&self, needed: &BigUint) -> Result<u64> {
        check_budget(needed, self.budget)
    }
}

/// An exact expected or observed quantity.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Exact {
    Int(BigUint),
    Ratio(BigRational),
    Bool(bool),
}

impl fmt::Display for Exact {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Exact::Int(n) => write!(f, "{n}"),
            Exact::Ratio(r) => write!(f, "{}", rational_string(r)),
            Exact::Bool(b) => write!(f, "{b}"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VerificationReport {
    pub experiment: String,
    pub formula: String,
    pub params: BTreeMap<String, Value>,
    pub expected: Exact,
    pub observed: Exact,
    pub pass: bool,
    pub instances: u64,
    pub elapsed: Duration,
    pub detail: Option<Value>,
}

impl VerificationReport {
    fn new(
        experiment: &str,
        formula: &str,
        params: Value,
        expected: Exact,
        observed: Exact,
        instances: u64,
        started: Instant,
    ) -> Self {
        let params = match params {
            Value::Object(m) => m.into_iter().collect(),
            _ => BTreeMap::new(),
        };
        VerificationReport {
            experiment: experiment.to_string(),
            formula: formula.to_string(),
            params,
            pass: expected == observed,
            expected,
            observed,
            instances,
            elapsed: started.elapsed(),
            detail: None,
        }
    }

    fn with_detail(mut self, detail: Value) -> Self {
        self.detail = Some(detail);
        self
    }

    /// The report with the timing zeroed, for comparing runs.
    pub fn without_timing(&self) -> Self {
        VerificationReport {
            elapsed: Duration::ZERO,
            ..self.clone()
        }
    }

    pub fn to_json_line(&self) -> String {
        serde_json::to_string(self).expect("plain data serializes")
    }

    pub fn csv_row(&self) -> String {
        let p = |key: &str| self.params.get(key).map(|v| v.to_string()).unwrap_or_default();
        [
            self.experiment.clone(),
            p("q"),
            p("n"),
            p("k"),
            p("m"),
            p("d"),
            p("l"),
            self.expected.to_string(),
            self.observed.to_string(),
            self.pass.to_string(),
            self.instances.to_string(),
            self.elapsed.as_millis().to_string(),
        ]
        .join(",")
    }
}

pub const CSV_HEADER: &str = "experiment,q,n,k,m,d,ℓ,expected,observed,pass,instances,elapsed_ms";

impl Serialize for VerificationReport {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut m = s.serialize_map(None)?;
        m.serialize_entry("experiment", &self.experiment)?;
        m.serialize_entry("formula", &self.formula)?;
        for (k, v) in &self.params {
            m.serialize_entry(k, v)?;
        }
        m.serialize_entry("expected", &self.expected.to_string())?;
        m.serialize_entry("observed", &self.observed.to_string())?;
        m.serialize_entry("pass", &self.pass)?;
        m.serialize_entry("instances", &self.instances)?;
        m.serialize_entry("elapsed_ms", &(self.elapsed.as_millis() as u64))?;
        if let Some(d) = &self.detail {
            m.serialize_entry("detail", d)?;
        }
        m.end()
    }
}

fn cmp_value(a: &Value, b: &Value) -> Ordering {
    match (a, b) {
        (Value::Number(x), Value::Number(y)) => x
            .as_f64()
            .partial_cmp(&y.as_f64())
            .unwrap_or(Ordering::Equal),
        (Value::Array(x), Value::Array(y)) => x
            .iter()
            .zip(y)
            .map(|(u, v)| cmp_value(u, v))
            .find(|o| o.is_ne())
            .unwrap_or_else(|| x.len().cmp(&y.len())),
        _ => a.to_string().cmp(&b.to_string()),
    }
}

const PARAM_ORDER: [&str; 7] = ["q", "n", "k", "l", "m", "d", "degrees"];

/// Canonical report order: by experiment name, then by parameters.
pub fn sort_reports(reports: &mut [VerificationReport]) {
    reports.sort_by(|a, b| {
        a.experiment.cmp(&b.experiment).then_with(|| {
            let rank = |k: &str| PARAM_ORDER.iter().position(|p| *p == k).unwrap_or(PARAM_ORDER.len());
            let mut keys: Vec<&String> = a.params.keys().chain(b.params.keys()).collect();
            keys.sort_by(|x, y| rank(x).cmp(&rank(y)).then_with(|| x.cmp(y)));
            keys.dedup();
            keys.iter()
                .map(|k| match (a.params.get(*k), b.params.get(*k)) {
                    (Some(x), Some(y)) => cmp_value(x, y),
                    (x, y) => x.is_some().cmp(&y.is_some()),
                })
                .find(|o| o.is_ne())
                .unwrap_or(Ordering::Equal)
        })
    });
}

/// The first value differing from `expected`, or `expected` if they all agree.
fn first_mismatch<T: PartialEq + Clone>(values: &[T], expected: &T) -> T {
    values.iter().find(|v| *v != expected).unwrap_or(expected).clone()
}

fn field_of(q: u64) -> Result<Field> {
    census::check_q(q)?;
    Field::with_order(q)
}

fn count_true(range: u64, pred: impl Fn(u64) -> bool + Sync) -> u64 {
    (0..range).into_par_iter().filter(|&i| pred(i)).count() as u64
}

/// Exhaustive check of `∏_{i=1}^k (q^n - q^i)` over all `A ∈ M_{n,k}(F_q)`.
pub fn verify_count_simple(q: u64, n: usize, k: usize, cfg: &VerifyConfig) -> Result<VerificationReport> {
    let started = Instant::now();
    let expected = census::count_simple(q, n, k)?.value;
    let field = field_of(q)?;
    let total = cfg.check(&qpow(q, n * k))?;
    let hits = cfg.install(|| {
        count_true(total, |idx| is_unimodular(&linear_pencil(&MatF::from_counter(&field, n, k, idx))))
    })?;
    Ok(VerificationReport::new(
        "simple",
        "prod_{i=1}^k (q^n - q^i)",
        json!({"q": q, "n": n, "k": k}),
        Exact::Int(expected),
        Exact::Int(big(hits)),
        total,
        started,
    ))
}

/// For every `Y` with `x I_{n,k} - Y` unimodular, counts the columns `b` with
/// `x I_{n,k+1} - [Y b]` unimodular and checks each count is `q^n - q^{k+1}`.
pub fn verify_extension(q: u64, n: usize, k: usize, cfg: &VerifyConfig) -> Result<VerificationReport> {
    let started = Instant::now();
    let expected = census::count_extension(q, n, k, 1)?.value;
    let field = field_of(q)?;
    let bases_total = qpow(q, n * k);
    cfg.check(&(&bases_total * (qpow(q, n) + 1u32)))?;
    let bases_total = bases_total.to_u64().expect("within budget");
    let cols = q.pow(n as u32);
    let per_base: Vec<u64> = cfg.install(|| {
        (0..bases_total)
            .into_par_iter()
            .filter_map(|idx| {
                let y = MatF::from_counter(&field, n, k, idx);
                is_unimodular(&linear_pencil(&y)).then(|| {
                    (0..cols)
                        .filter(|&c| {
                            let b = MatF::from_counter(&field, n, 1, c);
                            is_unimodular(&linear_pencil(&y.hstack(&b).expect("row counts agree")))
                        })
                        .count() as u64
                })
            })
            .collect()
    })?;
    let counts: Vec<BigUint> = per_base.iter().map(|&c| big(c)).collect();
    let observed = first_mismatch(&counts, &expected);
    let failing = counts.iter().filter(|&c| *c != expected).count();
    let bases = per_base.len() as u64;
    Ok(VerificationReport::new(
        "extension",
        "q^n - q^(k+1) for every unimodular base",
        json!({"q": q, "n": n, "k": k}),
        Exact::Int(expected),
        Exact::Int(observed),
        bases_total + bases * cols,
        started,
    )
    .with_detail(json!({"bases": bases, "failing_bases": failing})))
}

/// `N_a(d_1, …, d_m)` by enumeration: tuples `f_i = a_i x^{d_i+1} + h_i` with
/// `deg h_i <= d_i` and GCD 1. Negative powers of `x` are zero, so `d_i <= -1`
/// leaves `h_i = 0`.
pub fn coprime_tuples_oracle(field: &Field, degrees: &[i64], a: &[Fe], budget: u64) -> Result<BigUint> {
    if degrees.is_empty() || degrees.len() != a.len() {
        return Err(Error::domain("requires m >= 1 degrees and a vector a of length m"));
    }
    if degrees.windows(2).any(|w| w[0] < w[1]) {
        return Err(Error::domain("requires nonincreasing degrees"));
    }
    let t = a
        .iter()
        .rposition(|c| !c.is_zero())
        .ok_or_else(|| Error::domain("requires a != 0"))?;
    if degrees[t] < -1 {
        return Err(Error::domain("requires d_t >= -1"));
    }
    let q = field.order();
    let slots: Vec<usize> = degrees.iter().map(|&d| (d + 1).max(0) as usize).collect();
    let total = check_budget(&qpow(q, slots.iter().sum()), budget)?;
    let leads: Vec<Poly> = degrees
        .iter()
        .zip(a)
        .map(|(&d, &c)| {
            if d + 1 >= 0 {
                Poly::monomial(field, c, (d + 1) as usize)
            } else {
                Poly::zero(field)
            }
        })
        .collect();
    let hits = count_true(total, |mut idx| {
        let fs: Vec<Poly> = leads
            .iter()
            .zip(&slots)
            .map(|(lead, &s)| {
                let mut cs = Vec::with_capacity(s);
                for _ in 0..s {
                    cs.push(field.from_u64_wrapping(idx % q));
                    idx /= q;
                }
                lead + &Poly::new(field, cs)
            })
            .collect();
        gcd_monic(&fs).expect("nonempty, one field").is_one()
    });
    Ok(big(hits))
}

/// Every nonzero vector of `F_q^m`, in counter order.
fn nonzero_vectors(field: &Field, m: usize) -> Vec<Vec<Fe>> {
    let q = field.order();
    (1..q.pow(m as u32))
        .map(|mut idx| {
            (0..m)
                .map(|_| {
                    let c = field.from_u64_wrapping(idx % q);
                    idx /= q;
                    c
                })
                .collect()
        })
        .collect()
}

/// Nonincreasing lists of length `m` with entries in `0..=max_degree`, in
/// lexicographic order.
pub fn degree_grid(m: usize, max_degree: usize) -> Vec<Vec<i64>> {
    fn rec(m: usize, cap: i64, cur: &mut Vec<i64>, out: &mut Vec<Vec<i64>>) {
        if cur.len() == m {
            out.push(cur.clone());
            return;
        }
        for d in 0..=cap {
            cur.push(d);
            rec(m, d, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(m, max_degree as i64, &mut Vec::new(), &mut out);
    out.sort();
    out
}

/// Per degree list `d_1 >= … >= d_m` with entries `<= max_degree`, three reports:
/// the closed form against the oracle for every nonzero `a`; the partition
/// identity `q^{k+m} = Σ_{d=0}^{d_t+1} q^d N_a(d_1-d, …, d_m-d)`; and
/// invariance under appending a `-1` degree with `a_{m+1} = 0`.
pub fn verify_coprime_tuples(q: u64, m: usize, max_degree: usize, cfg: &VerifyConfig) -> Result<Vec<VerificationReport>> {
    let field = field_of(q)?;
    if m == 0 {
        return Err(Error::domain("requires m >= 1"));
    }
    let avecs = nonzero_vectors(&field, m);
    let mut out = Vec::new();
    for degrees in degree_grid(m, max_degree) {
        let started = Instant::now();
        let k: usize = degrees.iter().map(|&d| d as usize).sum();
        let per_a = qpow(q, k + m);
        cfg.check(&(&per_a * big(avecs.len() as u64)))?;
        let per_a = per_a.to_u64().expect("within budget");
        let closed = census::count_coprime_tuples(q, &degrees)?.value;
        let oracle = |deg: &[i64], a: &[Fe]| coprime_tuples_oracle(&field, deg, a, cfg.budget);

        let values: Vec<BigUint> = cfg.install(|| {
            avecs.iter().map(|a| oracle(&degrees, a)).collect::<Result<Vec<_>>>()
        })??;
        let params = json!({"q": q, "m": m, "degrees": degrees});
        out.push(
            VerificationReport::new(
                "coprime-tuples",
                "q^(k+m) - q^(k+1) for every nonzero a",
                params.clone(),
                Exact::Int(closed.clone()),
                Exact::Int(first_mismatch(&values, &closed)),
                per_a * avecs.len() as u64,
                started,
            )
            .with_detail(json!({"a_vectors": avecs.len()})),
        );

        let started = Instant::now();
        let mut sums = Vec::with_capacity(avecs.len());
        let mut instances = 0u64;
        for (a, n0) in avecs.iter().zip(&values) {
            let t = a.iter().rposition(|c| !c.is_zero()).expect("a != 0");
            let mut sum = n0.clone();
            instances += per_a;
            for d in 1..=degrees[t] + 1 {
                let shifted: Vec<i64> = degrees.iter().map(|&di| di - d).collect();
                let slots: usize = shifted.iter().map(|&s| (s + 1).max(0) as usize).sum();
                instances += q.pow(slots as u32);
                sum += qpow(q, d as usize) * cfg.install(|| oracle(&shifted, a))??;
            }
            sums.push(sum);
        }
        let total = qpow(q, k + m);
        out.push(VerificationReport::new(
            "coprime-recurrence",
            "q^(k+m) = sum_{d=0}^{d_t+1} q^d N_a(d_1-d, ..., d_m-d)",
            params.clone(),
            Exact::Int(total.clone()),
            Exact::Int(first_mismatch(&sums, &total)),
            instances,
            started,
        ));

        let started = Instant::now();
        let mut extended = degrees.clone();
        extended.push(-1);
        let truncated: Vec<BigUint> = avecs
            .iter()
            .map(|a| {
                let mut a2 = a.clone();
                a2.push(Fe::ZERO);
                cfg.install(|| oracle(&extended, &a2))?
            })
            .collect::<Result<Vec<_>>>()?;
        out.push(VerificationReport::new(
            "coprime-truncation",
            "N_(a,0)(d_1, ..., d_m, -1) = q^(k+m) - q^(k+1)",
            params,
            Exact::Int(closed.clone()),
            Exact::Int(first_mismatch(&truncated, &closed)),
            per_a * avecs.len() as u64,
            started,
        ));
    }
    Ok(out)
}

/// Sweeps all `q^{lm}` m-companion matrices of order `l`. Reports the fiber
/// size over every irreducible `f` (each checked individually) and whether the
/// stepwise pencils are unimodular on every fiber member.
pub fn verify_fiber(q: u64, l: usize, m: usize, cfg: &VerifyConfig) -> Result<Vec<VerificationReport>> {
    let started = Instant::now();
    let expected = census::fiber_size(q, l, m)?.value;
    let field = field_of(q)?;
    let total = cfg.check(&qpow(q, l * m))?;
    let irreducible: HashSet<Poly> = enumerate_irreducible(&field, l)?.collect();
    let (counts, profile_ok) = cfg.install(|| {
        (0..total)
            .into_par_iter()
            .fold(
                || (HashMap::<Poly, u64>::new(), 0u64),
                |(mut acc, mut ok), idx| {
                    let c = MCompanion::from_counter(&field, l, m, idx).expect("1 <= m < l");
                    let f = mcompanion_char_poly(&c);
                    if irreducible.contains(&f) {
                        if stepwise_unimodular_profile(&c).iter().all(|&b| b) {
                            ok += 1;
                        }
                        *acc.entry(f).or_default() += 1;
                    }
                    (acc, ok)
                },
            )
            .reduce(
                || (HashMap::new(), 0),
                |(mut a, x), (b, y)| {
                    for (k, v) in b {
                        *a.entry(k).or_default() += v;
                    }
                    (a, x + y)
                },
            )
    })?;
    let ordered: Vec<(Poly, BigUint)> = enumerate_irreducible(&field, l)?
        .map(|f| {
            let n = counts.get(&f).copied().unwrap_or(0);
            (f, big(n))
        })
        .collect();
    let sizes: Vec<BigUint> = ordered.iter().map(|(_, n)| n.clone()).collect();
    let members: u64 = counts.values().sum();
    let params = json!({"q": q, "l": l, "m": m});
    let per_f: Vec<Value> = ordered
        .iter()
        .map(|(f, n)| json!({"f": f.to_string(), "preimages": n.to_string()}))
        .collect();
    Ok(vec![
        VerificationReport::new(
            "fiber",
            "prod_{t=1}^{m-1} (q^l - q^(l-t)) for every irreducible f",
            params.clone(),
            Exact::Int(expected.clone()),
            Exact::Int(first_mismatch(&sizes, &expected)),
            total,
            started,
        )
        .with_detail(json!({"irreducibles": ordered.len(), "fibers": per_f})),
        VerificationReport::new(
            "fiber-stepwise",
            "stepwise pencils unimodular on every fiber member",
            params,
            Exact::Int(big(members)),
            Exact::Int(big(profile_ok)),
            total,
            started,
        ),
    ])
}

/// Exhaustive splitting-subspace count in `F_{q^{md}}`, repeated for every
/// monic irreducible modulus of degree `md`.
pub fn verify_splitting(q: u64, m: usize, d: usize, cfg: &VerifyConfig) -> Result<VerificationReport> {
    let started = Instant::now();
    let expected = census::count_splitting(q, m, d)?.value;
    let field = field_of(q)?;
    let moduli: Vec<Poly> = enumerate_irreducible(&field, m * d)?.collect();
    let per = gaussian_binomial(q, m * d, m);
    let total = cfg.check(&(&per * big(moduli.len() as u64)))?;
    let counts = cfg.install(|| {
        moduli
            .iter()
            .map(|g| {
                let ctx = make_ext(&field, m, d, Some(g))?;
                count_splitting_bruteforce(&ctx, m, d, cfg.budget)
            })
            .collect::<Result<Vec<_>>>()
    })??;
    Ok(VerificationReport::new(
        "splitting",
        "(q^(md) - 1)/(q^m - 1) q^(m(m-1)(d-1)) for every modulus",
        json!({"q": q, "m": m, "d": d}),
        Exact::Int(expected.clone()),
        Exact::Int(first_mismatch(&counts, &expected)),
        total,
        started,
    )
    .with_detail(json!({"moduli": moduli.len(), "subspaces_per_modulus": per.to_string()})))
}

/// `count_block_companion(q, m, d)` against `fiber_size(q, md, m)`. The fiber
/// formula needs `m < md`, so `d = 1` is outside its domain.
pub fn verify_block_companion(q: u64, m: usize, d: usize) -> Result<VerificationReport> {
    let started = Instant::now();
    let bc = census::count_block_companion(q, m, d)?.value;
    let fiber = census::fiber_size(q, m * d, m)?.value;
    Ok(VerificationReport::new(
        "block-companion",
        "q^(m(m-1)(d-1)) prod_{i=1}^{m-1} (q^m - q^i) = fiber_size(q, md, m)",
        json!({"q": q, "m": m, "d": d}),
        Exact::Int(fiber),
        Exact::Int(bc),
        1,
        started,
    ))
}

/// Exhaustive density over `M_{n,k}(F_q[x]; d)`, testing each member directly
/// and through its linearization.
pub fn verify_density_exhaustive(q: u64, n: usize, k: usize, d: usize, cfg: &VerifyConfig) -> Result<Vec<VerificationReport>> {
    let started = Instant::now();
    let target = census::count_density(q, n, k, d)?
        .probability
        .expect("density has a probability");
    let field = field_of(q)?;
    let total = cfg.check(&qpow(q, n * k * d))?;
    let block = q.pow((n * k) as u32);
    let (direct, agree) = cfg.install(|| {
        (0..total)
            .into_par_iter()
            .map(|mut idx| {
                let lower: Vec<MatF> = (0..d)
                    .map(|_| {
                        let m = MatF::from_counter(&field, n, k, idx % block);
                        idx /= block;
                        m
                    })
                    .collect();
                let a = MatPoly::monic_from_lower(&field, n, k, &lower).expect("shapes agree");
                let u = is_unimodular(&a);
                let lin = is_unimodular(&linearize(&a).expect("monic of degree d >= 1").1);
                (u as u64, (u == lin) as u64)
            })
            .reduce(|| (0, 0), |a, b| (a.0 + b.0, a.1 + b.1))
    })?;
    let params = json!({"q": q, "n": n, "k": k, "d": d});
    Ok(vec![
        VerificationReport::new(
            "density",
            "prod_{i=1}^k (1 - q^(i-n))",
            params.clone(),
            Exact::Ratio(target),
            Exact::Ratio(ratio(&big(direct), &big(total))),
            total,
            started,
        )
        .with_detail(json!({"unimodular": direct})),
        VerificationReport::new(
            "density-linearization",
            "direct and linearized unimodularity agree",
            params,
            Exact::Int(big(total)),
            Exact::Int(big(agree)),
            total,
            started,
        ),
    ])
}

/// Outcome of [`estimate_density`].
#[derive(Clone, Debug, PartialEq)]
pub struct SampleEstimate {
    pub q: u64,
    pub n: usize,
    pub k: usize,
    pub d: usize,
    pub trials: u64,
    pub successes: u64,
    pub seed: u64,
    pub estimate: BigRational,
    pub target: BigRational,
    /// `sqrt(p(1-p)/trials)` for the empirical `p`; reporting only.
    pub std_error: f64,
    pub elapsed: Duration,
}

impl SampleEstimate {
    /// `|estimate - target| <= 3 · std_error`
    pub fn within_3se(&self) -> bool {
        let diff = (&self.estimate - &self.target).to_f64().unwrap_or(f64::INFINITY).abs();
        diff <= 3.0 * self.std_error
    }

    /// As a pass/fail report for mixing with exhaustive results.
    pub fn to_report(&self) -> VerificationReport {
        VerificationReport {
            experiment: "density-monte-carlo".into(),
            formula: "estimate within 3 standard errors of prod_{i=1}^k (1 - q^(i-n))".into(),
            params: [
                ("q", json!(self.q)),
                ("n", json!(self.n)),
                ("k", json!(self.k)),
                ("d", json!(self.d)),
                ("trials", json!(self.trials)),
                ("seed", json!(self.seed)),
            ]
            .into_iter()
            .map(|(k, v)| (k.to_string(), v))
            .collect(),
            expected: Exact::Bool(true),
            observed: Exact::Bool(self.within_3se()),
            pass: self.within_3se(),
            instances: self.trials,
            elapsed: self.elapsed,
            detail: Some(json!({
                "successes": self.successes,
                "estimate": rational_string(&self.estimate),
                "target": rational_string(&self.target),
                "std_error": self.std_error,
            })),
        }
    }
}

impl Serialize for SampleEstimate {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut m = s.serialize_map(None)?;
        m.serialize_entry("experiment", "density-monte-carlo")?;
        m.serialize_entry("q", &self.q)?;
        m.serialize_entry("n", &self.n)?;
        m.serialize_entry("k", &self.k)?;
        m.serialize_entry("d", &self.d)?;
        m.serialize_entry("trials", &self.trials)?;
        m.serialize_entry("successes", &self.successes)?;
        m.serialize_entry("seed", &self.seed)?;
        m.serialize_entry("estimate", &rational_string(&self.estimate))?;
        m.serialize_entry("estimate_decimal", &self.estimate.to_f64())?;
        m.serialize_entry("target", &rational_string(&self.target))?;
        m.serialize_entry("target_decimal", &self.target.to_f64())?;
        m.serialize_entry("std_error", &self.std_error)?;
        m.serialize_entry("within_3se", &self.within_3se())?;
        m.serialize_entry("elapsed_ms", &(self.elapsed.as_millis() as u64))?;
        m.end()
    }
}

/// Random stream for one trial: independent of scheduling and worker count.
fn trial_rng(seed: u64, trial: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(trial);
    rng
}

fn random_matf<R: Rng>(field: &Field, rows: usize, cols: usize, rng: &mut R) -> MatF {
    let q = field.order();
    MatF::from_fn(field, rows, cols, |_, _| field.from_u64_wrapping(rng.random_range(0..q)))
}

/// Monte Carlo estimate of the unimodular fraction of `M_{n,k}(F_q[x]; d)`.
pub fn estimate_density(q: u64, n: usize, k: usize, d: usize, trials: u64, seed: u64, cfg: &VerifyConfig) -> Result<SampleEstimate> {
    let started = Instant::now();
    if trials == 0 {
        return Err(Error::domain("requires trials >= 1"));
    }
    let target = census::count_density(q, n, k, d)?
        .probability
        .expect("density has a probability");
    let field = field_of(q)?;
    let successes = cfg.install(|| {
        count_true(trials, |t| {
            let mut rng = trial_rng(seed, t);
            let lower: Vec<MatF> = (0..d).map(|_| random_matf(&field, n, k, &mut rng)).collect();
            is_unimodular(&MatPoly::monic_from_lower(&field, n, k, &lower).expect("shapes agree"))
        })
    })?;
    let p = successes as f64 / trials as f64;
    Ok(SampleEstimate {
        q,
        n,
        k,
        d,
        trials,
        successes,
        seed,
        estimate: ratio(&big(successes), &big(trials)),
        target,
        std_error: (p * (1.0 - p) / trials as f64).sqrt(),
        elapsed: started.elapsed(),
    })
}

/// Checks a Smith form against its defining properties; `Err` names the first failure.
pub fn smith_certificate(m: &MatPoly, s: &SmithForm) -> std::result::Result<(), String> {
    let umv = s.u.mul(m).and_then(|um| um.mul(&s.v)).map_err(|e| e.to_string())?;
    if umv != s.d {
        return Err("U M V != D".into());
    }
    for (name, t) in [("U", &s.u), ("V", &s.v)] {
        let det = t.det().map_err(|e| e.to_string())?;
        if !det.is_unit() {
            return Err(format!("det {name} = {det} is not a nonzero constant"));
        }
    }
    for i in 0..m.n() {
        for j in 0..m.k() {
            if i != j && !s.d.entry(i, j).is_zero() {
                return Err(format!("D has a nonzero off-diagonal entry at ({i}, {j})"));
            }
        }
    }
    for (t, f) in s.factors.iter().enumerate() {
        if f != s.d.entry(t, t) || !(f.is_zero() || f.is_monic()) {
            return Err(format!("factor {t} is not the monic diagonal entry"));
        }
    }
    if let Some(w) = s.factors.windows(2).find(|w| !w[0].divides(&w[1])) {
        return Err(format!("{} does not divide {}", w[0], w[1]));
    }
    let mut prod = Poly::one(m.field());
    for (i, f) in s.factors.iter().enumerate() {
        prod = &prod * f;
        let dd = minors_gcd(m, i + 1).map_err(|e| e.to_string())?;
        if dd != prod {
            return Err(format!("determinantal divisor {} is {dd}, factor product is {prod}", i + 1));
        }
    }
    if s.is_unimodular() != is_unimodular(m) {
        return Err("Smith and minor routes disagree on unimodularity".into());
    }
    Ok(())
}

/// Smith reconstruction, divisibility chain and determinantal divisors on
/// random matrix polynomials (q in {2, 3}, shapes up to 4 x 4, degree up to 2).
pub fn verify_smith_random(instances: u64, seed: u64, cfg: &VerifyConfig) -> Result<VerificationReport> {
    let started = Instant::now();
    let fields = [Field::prime(2)?, Field::prime(3)?];
    let failures: Vec<(u64, String)> = cfg.install(|| {
        (0..instances)
            .into_par_iter()
            .filter_map(|i| {
                let mut rng = trial_rng(seed, i);
                let f = &fields[rng.random_range(0..2)];
                let n = rng.random_range(1..=4);
                let k = rng.random_range(1..=4);
                let deg = rng.random_range(0..=2);
                let m = MatPoly::random(f, n, k, deg, &mut rng);
                smith_certificate(&m, &smith_form(&m)).err().map(|e| (i, e))
            })
            .collect()
    })?;
    let mut r = VerificationReport::new(
        "smith-random",
        "U M V = D, det U and det V nonzero constants, f_i | f_(i+1), prod f_j = D_i",
        json!({"instances": instances, "seed": seed}),
        Exact::Int(big(instances)),
        Exact::Int(big(instances - failures.len() as u64)),
        instances,
        started,
    );
    if let Some((i, e)) = failures.first() {
        r = r.with_detail(json!({"first_failure": {"instance": i, "reason": e}}));
    }
    Ok(r)
}

/// `rank S(A, B) = k` against unimodularity of `[x I - A  B]`, over every pair
/// with `k <= max_k`, `l <= max_l`.
pub fn verify_reachability(q: u64, max_k: usize, max_l: usize, cfg: &VerifyConfig) -> Result<VerificationReport> {
    let started = Instant::now();
    let field = field_of(q)?;
    let mut total = BigUint::zero();
    for k in 1..=max_k {
        for l in 1..=max_l {
            total += qpow(q, k * k + k * l);
        }
    }
    let total = cfg.check(&total)?;
    let mut agree = 0u64;
    let mut reachable = 0u64;
    for k in 1..=max_k {
        for l in 1..=max_l {
            let count = q.pow((k * k + k * l) as u32);
            let bsize = q.pow((k * l) as u32);
            let (a, r) = cfg.install(|| {
                (0..count)
                    .into_par_iter()
                    .map(|idx| {
                        let p = MatrixPair::new(
                            MatF::from_counter(&field, k, k, idx / bsize),
                            MatF::from_counter(&field, k, l, idx % bsize),
                        )
                        .expect("shapes agree");
                        let reach = is_reachable(&p);
                        ((reach == is_unimodular(&p.pencil())) as u64, reach as u64)
                    })
                    .reduce(|| (0, 0), |x, y| (x.0 + y.0, x.1 + y.1))
            })?;
            agree += a;
            reachable += r;
        }
    }
    Ok(VerificationReport::new(
        "reachability",
        "rank S(A,B) = k iff [xI - A  B] unimodular",
        json!({"q": q, "k": max_k, "l": max_l}),
        Exact::Int(big(total)),
        Exact::Int(big(agree)),
        total,
        started,
    )
    .with_detail(json!({"reachable": reachable})))
}

fn random_invertible<R: Rng>(field: &Field, n: usize, rng: &mut R) -> MatF {
    loop {
        let m = random_matf(field, n, n, rng);
        if !m.det().expect("square").is_zero() {
            return m;
        }
    }
}

fn partitions(n: usize, max: usize) -> Vec<Vec<usize>> {
    if n == 0 {
        return vec![vec![]];
    }
    let mut out = Vec::new();
    for first in (1..=max.min(n)).rev() {
        for mut rest in partitions(n - first, first) {
            rest.insert(0, first);
            out.push(rest);
        }
    }
    out
}

/// Controllability indices under random Γ-transformations `[[P, 0], [R, Q]]`.
/// Base pairs: every Brunovsky pair with `k <= 4` (and `l = r, r + 1`) plus ten
/// uniformly random pairs with `k = 3, l = 2`, over GF(2) and GF(3).
pub fn verify_gamma_invariance(per_pair: u64, seed: u64, cfg: &VerifyConfig) -> Result<VerificationReport> {
    let started = Instant::now();
    let mut bases = Vec::new();
    for p in [2u32, 3] {
        let f = Field::prime(p)?;
        for k in 1..=4 {
            for part in partitions(k, k) {
                for l in [part.len(), part.len() + 1] {
                    bases.push(brunovsky_pair(&f, &part, l)?.pair());
                }
            }
        }
        let mut rng = trial_rng(seed, u64::MAX - p as u64);
        for _ in 0..10 {
            bases.push(MatrixPair::new(random_matf(&f, 3, 3, &mut rng), random_matf(&f, 3, 2, &mut rng))?);
        }
    }
    let total = bases.len() as u64 * per_pair;
    let ok = cfg.install(|| {
        count_true(total, |i| {
            let base = &bases[(i / per_pair) as usize];
            let f = base.field();
            let mut rng = trial_rng(seed, i);
            let p = random_invertible(f, base.k(), &mut rng);
            let q = random_invertible(f, base.l(), &mut rng);
            let r = random_matf(f, base.l(), base.k(), &mut rng);
            let t = gamma_transform(base, &p, &q, &r).expect("invertible blocks");
            controllability_indices(&t) == controllability_indices(base)
        })
    })?;
    Ok(VerificationReport::new(
        "gamma-invariance",
        "controllability indices unchanged by Γ-transformations",
        json!({"per_pair": per_pair, "seed": seed}),
        Exact::Int(big(total)),
        Exact::Int(big(ok)),
        total,
        started,
    )
    .with_detail(json!({"base_pairs": bases.len()})))
}

/// Wimmer's divisibility criterion against exhaustive completion search, for
/// every `Y` (`l x k`, `k < l <= max_l`) and every monic `f` of degree `l`.
pub fn verify_wimmer(q: u64, max_l: usize, cfg: &VerifyConfig) -> Result<VerificationReport> {
    let started = Instant::now();
    let field = field_of(q)?;
    let mut cases = Vec::new();
    let mut searched = BigUint::zero();
    for l in 1..=max_l {
        for k in 0..l {
            let ys = qpow(q, l * k);
            searched += &ys * qpow(q, l) * qpow(q, l * (l - k));
            cases.push((l, k, cfg.check(&ys)?));
        }
    }
    cfg.check(&searched)?;
    let mut total = 0u64;
    let mut agree = 0u64;
    let mut completable = 0u64;
    for (l, k, ys) in cases {
        let monics: Vec<Poly> = enumerate_monic(&field, l)?.collect();
        let n = ys * monics.len() as u64;
        let (a, c) = cfg.install(|| {
            (0..n)
                .into_par_iter()
                .map(|i| -> Result<(u64, u64)> {
                    let y = MatF::from_counter(&field, l, k, i / monics.len() as u64);
                    let f = &monics[(i % monics.len() as u64) as usize];
                    let w = wimmer_completable(&y, f)?;
                    let found = complete_char_poly(&y, f, cfg.budget)?.is_some();
                    Ok(((w == found) as u64, w as u64))
                })
                .try_reduce(|| (0, 0), |x, y| Ok((x.0 + y.0, x.1 + y.1)))
        })??;
        total += n;
        agree += a;
        completable += c;
    }
    Ok(VerificationReport::new(
        "wimmer",
        "prod f_i | f iff some Z gives char_poly([Y Z]) = f",
        json!({"q": q, "l": max_l}),
        Exact::Int(big(total)),
        Exact::Int(big(agree)),
        total,
        started,
    )
    .with_detail(json!({"completable": completable})))
}

/// Fixed seed for the randomized suites in [`all_desk`].
pub const DESK_SEED: u64 = 42;

/// The full desk-scale matrix, in canonical order.
pub fn all_desk(cfg: &VerifyConfig) -> Result<Vec<VerificationReport>> {
    let mut out = Vec::new();
    for (q, n, k) in [(2, 2, 1), (2, 3, 1), (2, 3, 2), (2, 4, 2), (3, 2, 1), (3, 3, 2)] {
        out.push(verify_count_simple(q, n, k, cfg)?);
    }
    for (q, n, k) in [(2, 3, 1), (2, 4, 1), (2, 4, 2), (3, 3, 1)] {
        out.push(verify_extension(q, n, k, cfg)?);
    }
    for q in [2, 3] {
        for m in 1..=3 {
            out.extend(verify_coprime_tuples(q, m, 2, cfg)?);
        }
    }
    out.extend(verify_fiber(2, 4, 2, cfg)?);
    out.extend(verify_fiber(2, 3, 2, cfg)?);
    for q in [2, 3, 4] {
        for m in 1..=3 {
            for d in 2..=3 {
                out.push(verify_block_companion(q, m, d)?);
            }
        }
    }
    for (q, m, d) in [(2, 1, 2), (2, 2, 2), (3, 2, 2)] {
        out.push(verify_splitting(q, m, d, cfg)?);
    }
    for (q, n, k, d) in [(2, 2, 1, 1), (2, 2, 1, 2), (2, 2, 1, 3), (2, 3, 1, 2), (2, 3, 2, 1), (3, 2, 1, 2)] {
        out.extend(verify_density_exhaustive(q, n, k, d, cfg)?);
    }
    out.push(estimate_density(2, 4, 2, 3, 100_000, DESK_SEED, cfg)?.to_report());
    out.push(verify_smith_random(1000, DESK_SEED, cfg)?);
    out.push(verify_reachability(2, 2, 2, cfg)?);
    out.push(verify_gamma_invariance(100, DESK_SEED, cfg)?);
    out.push(verify_wimmer(2, 3, cfg)?);
    sort_reports(&mut out);
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cfg() -> VerifyConfig {
        VerifyConfig::default()
    }

    fn ints(r: &VerificationReport) -> (String, String) {
        (r.expected.to_string(), r.observed.to_string())
    }

    #[test]
    fn simple_examples() {
        for (q, n, k, exp, inst) in [(2, 2, 1, "2", 4), (2, 3, 2, "24", 64), (3, 2, 1, "6", 9)] {
            let r = verify_count_simple(q, n, k, &cfg()).unwrap();
            assert!(r.pass);
            assert_eq!(ints(&r).1, exp);
            assert_eq!(r.instances, inst);
        }
        assert!(verify_count_simple(2, 2, 2, &cfg()).is_err());
        assert!(matches!(
            verify_count_simple(3, 4, 3, &VerifyConfig::with_budget(100)),
            Err(Error::BudgetExceeded { .. })
        ));
    }

    #[test]
    fn extension_examples() {
        let r = verify_extension(2, 3, 1, &cfg()).unwrap();
        assert!(r.pass);
        assert_eq!(ints(&r).0, "4");
        assert_eq!(r.detail.as_ref().unwrap()["bases"], 6);
        let r = verify_extension(3, 3, 1, &cfg()).unwrap();
        assert!(r.pass);
        assert_eq!(ints(&r).0, "18");
        assert!(verify_extension(2, 3, 2, &cfg()).is_err());
    }

    #[test]
    fn coprime_oracle_examples() {
        let f2 = Field::prime(2).unwrap();
        let one = Fe::ONE;
        let b = u64::MAX;
        let n = |f: &Field, d: &[i64], a: &[Fe]| coprime_tuples_oracle(f, d, a, b).unwrap();
        assert_eq!(n(&f2, &[0, 0], &[one, one]), big(2));
        assert_eq!(n(&f2, &[1, 1], &[one, one]), big(8));
        assert_eq!(n(&f2, &[1, 1], &[one, Fe::ZERO]), big(8));
        for d in 0..3 {
            assert_eq!(n(&f2, &[d], &[one]), big(0));
        }
        let f3 = Field::prime(3).unwrap();
        assert_eq!(n(&f3, &[0, 0], &[one, f3.from_int(2)]), big(6));
        // truncation: a trailing -1 with a zero coefficient changes nothing
        assert_eq!(n(&f3, &[1, 0, -1], &[one, one, Fe::ZERO]), n(&f3, &[1, 0], &[one, one]));
        // d_t = -1: the tuple is (a_1) with a_1 a unit, so exactly one coprime tuple
        assert_eq!(n(&f3, &[-1], &[one]), big(1));
        assert!(coprime_tuples_oracle(&f3, &[0, 0], &[Fe::ZERO, Fe::ZERO], b).is_err());
        assert!(coprime_tuples_oracle(&f3, &[0, 1], &[one, one], b).is_err());
        assert!(coprime_tuples_oracle(&f3, &[-2], &[one], b).is_err());
    }

    #[test]
    fn coprime_grid_small() {
        let reports = verify_coprime_tuples(2, 2, 1, &cfg()).unwrap();
        assert_eq!(reports.len(), 9);
        assert!(reports.iter().all(|r| r.pass), "{reports:#?}");
        let cell = reports
            .iter()
            .find(|r| r.experiment == "coprime-tuples" && r.params["degrees"] == json!([1, 1]))
            .unwrap();
        assert_eq!(ints(cell).1, "8");
        let r = verify_coprime_tuples(3, 2, 0, &cfg()).unwrap();
        assert_eq!(ints(&r[0]).1, "6");
        assert!(verify_coprime_tuples(2, 1, 2, &cfg()).unwrap().iter().all(|r| r.pass));
    }

    #[test]
    fn degree_grid_shape() {
        assert_eq!(degree_grid(2, 1), vec![vec![0, 0], vec![1, 0], vec![1, 1]]);
        assert_eq!(degree_grid(3, 2).len(), 10);
    }

    #[test]
    fn fiber_examples() {
        let r = verify_fiber(2, 4, 2, &cfg()).unwrap();
        assert!(r.iter().all(|x| x.pass));
        assert_eq!(r[0].detail.as_ref().unwrap()["irreducibles"], 3);
        assert_eq!(r[1].expected, Exact::Int(big(24)));
        let r = verify_fiber(2, 3, 1, &cfg()).unwrap();
        assert!(r.iter().all(|x| x.pass));
        assert_eq!(ints(&r[0]).0, "1");
    }

    #[test]
    fn splitting_and_budget() {
        let r = verify_splitting(2, 2, 2, &cfg()).unwrap();
        assert!(r.pass);
        assert_eq!(ints(&r).1, "20");
        assert_eq!(r.instances, 35 * 3);
        assert!(matches!(
            verify_splitting(2, 3, 3, &VerifyConfig::with_budget(1000)),
            Err(Error::BudgetExceeded { .. })
        ));
    }

    #[test]
    fn density_examples() {
        for (d, inst) in [(1, 4), (2, 16), (3, 64)] {
            let r = verify_density_exhaustive(2, 2, 1, d, &cfg()).unwrap();
            assert!(r.iter().all(|x| x.pass));
            assert_eq!(r[0].observed.to_string(), "1/2");
            assert_eq!(r[0].instances, inst);
        }
    }

    #[test]
    fn monte_carlo_is_reproducible_and_schedule_independent() {
        let a = estimate_density(2, 3, 1, 2, 2000, 7, &cfg()).unwrap();
        let one = VerifyConfig { jobs: Some(1), ..cfg() };
        let three = VerifyConfig { jobs: Some(3), ..cfg() };
        let b = estimate_density(2, 3, 1, 2, 2000, 7, &one).unwrap();
        let c = estimate_density(2, 3, 1, 2, 2000, 7, &three).unwrap();
        assert_eq!(a.successes, b.successes);
        assert_eq!(a.successes, c.successes);
        assert!(estimate_density(2, 3, 1, 2, 0, 7, &cfg()).is_err());
        let other = estimate_density(2, 3, 1, 2, 2000, 8, &cfg()).unwrap();
        assert!(other.within_3se() || a.within_3se());
    }

    #[test]
    fn parallel_and_serial_reports_match() {
        let serial = VerifyConfig { jobs: Some(1), ..cfg() };
        let par = VerifyConfig { jobs: Some(4), ..cfg() };
        let runs = |c: &VerifyConfig| {
            let mut v = vec![
                verify_count_simple(2, 3, 2, c).unwrap(),
                verify_extension(2, 4, 1, c).unwrap(),
                verify_splitting(2, 2, 2, c).unwrap(),
                verify_smith_random(50, 3, c).unwrap(),
            ];
            v.extend(verify_fiber(2, 3, 2, c).unwrap());
            v.iter().map(|r| r.without_timing()).collect::<Vec<_>>()
        };
        assert_eq!(runs(&serial), runs(&par));
    }

    #[test]
    fn structural_suites_small() {
        assert!(verify_smith_random(40, 1, &cfg()).unwrap().pass);
        assert!(verify_reachability(2, 2, 1, &cfg()).unwrap().pass);
        assert!(verify_gamma_invariance(3, 1, &cfg()).unwrap().pass);
        assert!(verify_wimmer(2, 2, &cfg()).unwrap().pass);
    }

    #[test]
    fn report_serialization() {
        let r = verify_count_simple(2, 2, 1, &cfg()).unwrap();
        let j: Value = serde_json::from_str(&r.to_json_line()).unwrap();
        assert_eq!(j["experiment"], "simple");
        assert_eq!(j["q"], 2);
        assert_eq!(j["expected"], "2");
        assert_eq!(j["pass"], true);
        assert_eq!(j["instances"], 4);
        let row = r.csv_row();
        assert!(row.starts_with("simple,2,2,1,,,,2,2,true,4,"), "{row}");
        assert_eq!(CSV_HEADER.split(',').count(), row.split(',').count());
    }

    #[test]
    fn sorting_is_numeric() {
        let mut v = vec![
            verify_block_companion(4, 1, 2).unwrap(),
            verify_block_companion(2, 3, 2).unwrap(),
            verify_count_simple(2, 2, 1, &cfg()).unwrap(),
            verify_block_companion(2, 1, 3).unwrap(),
        ];
        sort_reports(&mut v);
        let keys: Vec<(String, Value, Value)> = v
            .iter()
            .map(|r| (r.experiment.clone(), r.params["q"].clone(), r.params.get("m").cloned().unwrap_or(Value::Null)))
            .collect();
        assert_eq!(keys[0], ("block-companion".into(), json!(2), json!(1)));
        assert_eq!(keys[1], ("block-companion".into(), json!(2), json!(3)));
        assert_eq!(keys[3].0, "simple");
    }
}
