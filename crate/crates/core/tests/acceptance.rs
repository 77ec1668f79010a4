//! Desk-scale acceptance matrix. Runs the nine criteria in sequence, prints one
//! line per criterion, then fails if any criterion failed.
//!
//! `cargo test -p ffmc-core --test acceptance -- --nocapture`

use std::time::{Duration, Instant};

use ffmc_core::census::{count_block_companion, fiber_size};
use ffmc_core::verify::{self, VerificationReport, VerifyConfig};
use ffmc_core::Error;
use num_bigint::BigUint;
use num_rational::BigRational;

struct Outcome {
    id: usize,
    name: &'static str,
    limit: Duration,
    elapsed: Duration,
    failures: Vec<String>,
    summary: String,
}

impl Outcome {
    fn pass(&self) -> bool {
        self.failures.is_empty() && self.elapsed <= self.limit
    }

    fn line(&self) -> String {
        let status = if self.pass() { "PASS" } else { "FAIL" };
        let mut s = format!(
            "criterion {} [{status}] {}: {} ({:.2?} of {:?})",
            self.id, self.name, self.summary, self.elapsed, self.limit
        );
        if self.elapsed > self.limit {
            s.push_str(" over time limit");
        }
        for f in &self.failures {
            s.push_str(&format!("\n    {f}"));
        }
        s
    }
}

fn run(
    id: usize,
    name: &'static str,
    limit_s: u64,
    body: impl FnOnce(&mut Vec<String>) -> String,
) -> Outcome {
    let started = Instant::now();
    let mut failures = Vec::new();
    let summary = body(&mut failures);
    Outcome {
        id,
        name,
        limit: Duration::from_secs(limit_s),
        elapsed: started.elapsed(),
        failures,
        summary,
    }
}

fn expect_pass(failures: &mut Vec<String>, r: &VerificationReport) {
    if !r.pass {
        failures.push(format!(
            "{} {:?}: expected {}, observed {}",
            r.experiment, r.params, r.expected, r.observed
        ));
    }
}

fn check(failures: &mut Vec<String>, ok: bool, what: impl Into<String>) {
    if !ok {
        failures.push(what.into());
    }
}

fn big(n: u64) -> BigUint {
    BigUint::from(n)
}

fn simple_count(cfg: &VerifyConfig) -> Outcome {
    run(1, "simple count", 5, |f| {
        let params = [(2, 2, 1), (2, 3, 1), (2, 3, 2), (2, 4, 2), (3, 2, 1), (3, 3, 2)];
        let mut pencils = 0;
        for (q, n, k) in params {
            match verify::verify_count_simple(q, n, k, cfg) {
                Ok(r) => {
                    expect_pass(f, &r);
                    check(f, r.instances == q.pow((n * k) as u32), format!("({q},{n},{k}) swept {} pencils", r.instances));
                    pencils += r.instances;
                }
                Err(e) => f.push(format!("({q},{n},{k}): {e}")),
            }
        }
        format!("{} parameter sets, {pencils} pencils", params.len())
    })
}

fn extension(cfg: &VerifyConfig) -> Outcome {
    run(2, "one-column extensions", 30, |f| {
        let mut bases = 0;
        for (q, n, k) in [(2, 3, 1), (2, 4, 1), (2, 4, 2), (3, 3, 1)] {
            match verify::verify_extension(q, n, k, cfg) {
                Ok(r) => {
                    expect_pass(f, &r);
                    let d = r.detail.as_ref().expect("extension detail");
                    check(f, d["failing_bases"] == 0, format!("({q},{n},{k}) has failing bases: {d}"));
                    bases += d["bases"].as_u64().unwrap_or(0);
                }
                Err(e) => f.push(format!("({q},{n},{k}): {e}")),
            }
        }
        format!("{bases} unimodular bases, each with q^n - q^(k+1) extensions")
    })
}

fn coprime(cfg: &VerifyConfig) -> Outcome {
    run(3, "coprime tuples and recurrence", 60, |f| {
        let mut cells = 0;
        let mut recurrences = 0;
        for q in [2, 3] {
            for m in 1..=3 {
                match verify::verify_coprime_tuples(q, m, 2, cfg) {
                    Ok(rs) => {
                        for r in &rs {
                            expect_pass(f, r);
                            match r.experiment.as_str() {
                                "coprime-tuples" => cells += 1,
                                "coprime-recurrence" => recurrences += 1,
                                _ => {}
                            }
                        }
                    }
                    Err(e) => f.push(format!("q = {q}, m = {m}: {e}")),
                }
            }
        }
        // q in {2,3}, m in {1,2,3}: 3 + 6 + 10 nonincreasing lists per q
        check(f, cells == 38, format!("expected 38 degree cells, got {cells}"));
        format!("{cells} degree cells over all nonzero a, {recurrences} recurrence checks")
    })
}

fn fiber(cfg: &VerifyConfig) -> Outcome {
    run(4, "fiber sizes", 5, |f| {
        for (l, m, irr, size, total) in [(4, 2, 3, 8, 256), (3, 2, 2, 4, 64)] {
            match verify::verify_fiber(2, l, m, cfg) {
                Ok(rs) => {
                    for r in &rs {
                        expect_pass(f, r);
                        check(f, r.instances == total, format!("l = {l}: swept {} matrices", r.instances));
                    }
                    let d = rs[0].detail.as_ref().expect("fiber detail");
                    check(f, d["irreducibles"] == irr, format!("l = {l}: {} irreducibles", d["irreducibles"]));
                    check(f, rs[0].expected == verify::Exact::Int(big(size)), format!("l = {l}: fiber size {}", rs[0].expected));
                    for entry in d["fibers"].as_array().into_iter().flatten() {
                        check(f, entry["preimages"].as_str() == Some(size.to_string().as_str()), format!("l = {l}: {entry}"));
                    }
                    check(f, rs[1].expected == verify::Exact::Int(big(irr * size)), "stepwise member count");
                }
                Err(e) => f.push(format!("l = {l}: {e}")),
            }
        }
        "3 quartics x 8 of 256, 2 cubics x 4 of 64, stepwise profiles all true".into()
    })
}

fn block_companion() -> Outcome {
    run(5, "block-companion identity", 1, |f| {
        let mut compared = 0;
        for q in [2u64, 3, 4] {
            for m in 1..=3usize {
                for d in 1..=3usize {
                    let bc = match count_block_companion(q, m, d) {
                        Ok(r) => r.value,
                        Err(e) => {
                            f.push(format!("({q},{m},{d}): {e}"));
                            continue;
                        }
                    };
                    if d == 1 {
                        // fiber_size needs m < l; at l = m compare with |GL_m(q)| / (q^m - 1).
                        let qm = BigUint::from(q).pow(m as u32);
                        let gl_orbit: BigUint = (1..m).map(|i| &qm - BigUint::from(q).pow(i as u32)).product();
                        check(f, bc == gl_orbit, format!("({q},{m},1): {bc} != {gl_orbit}"));
                        check(
                            f,
                            matches!(fiber_size(q, m, m), Err(Error::Domain(_))),
                            format!("fiber_size({q},{m},{m}) accepted m = l"),
                        );
                    } else {
                        match fiber_size(q, m * d, m) {
                            Ok(r) => check(f, bc == r.value, format!("({q},{m},{d}): {bc} != {}", r.value)),
                            Err(e) => f.push(format!("fiber_size({q},{},{m}): {e}", m * d)),
                        }
                    }
                    compared += 1;
                }
            }
        }
        format!("{compared} cells; d = 1 against |GL_m(q)|/(q^m - 1), fiber_size rejects m = l")
    })
}

fn splitting(cfg: &VerifyConfig) -> Outcome {
    run(6, "splitting subspace count", 60, |f| {
        for (q, m, d, want, moduli) in [(2, 1, 2, 3u64, 1u64), (2, 2, 2, 20, 3), (3, 2, 2, 90, 18)] {
            match verify::verify_splitting(q, m, d, cfg) {
                Ok(r) => {
                    expect_pass(f, &r);
                    check(f, r.observed == verify::Exact::Int(big(want)), format!("({q},{m},{d}) observed {}", r.observed));
                    let d = r.detail.as_ref().expect("splitting detail");
                    check(f, d["moduli"] == moduli, format!("({q},{m}): {} moduli", d["moduli"]));
                }
                Err(e) => f.push(format!("({q},{m},{d}): {e}")),
            }
        }
        "3, 20, 90; identical under every irreducible modulus".into()
    })
}

fn density(cfg: &VerifyConfig) -> Outcome {
    run(7, "unimodular density", 120, |f| {
        let mut instances = 0;
        for (q, n, k, d) in [(2, 2, 1, 1), (2, 2, 1, 2), (2, 2, 1, 3), (2, 3, 1, 2), (2, 3, 2, 1), (3, 2, 1, 2)] {
            match verify::verify_density_exhaustive(q, n, k, d, cfg) {
                Ok(rs) => {
                    for r in &rs {
                        expect_pass(f, r);
                    }
                    instances += rs[0].instances;
                }
                Err(e) => f.push(format!("({q},{n},{k},{d}): {e}")),
            }
        }
        format!("{instances} matrix polynomials, direct and linearized tests agree")
    })
}

fn monte_carlo(cfg: &VerifyConfig) -> Outcome {
    run(8, "Monte Carlo screen", 30, |f| {
        let seed = verify::DESK_SEED;
        let est = match verify::estimate_density(2, 4, 2, 3, 100_000, seed, cfg) {
            Ok(e) => e,
            Err(e) => {
                f.push(e.to_string());
                return "no estimate".into();
            }
        };
        let target = BigRational::new(21.into(), 32.into());
        check(f, est.target == target, format!("target {}", est.target));
        check(f, est.within_3se(), format!("estimate {} outside 3 SE of 21/32", est.estimate));
        let serial = VerifyConfig { jobs: Some(1), ..*cfg };
        match verify::estimate_density(2, 4, 2, 3, 100_000, seed, &serial) {
            Ok(again) => check(f, again.successes == est.successes, "rerun with one worker differs"),
            Err(e) => f.push(e.to_string()),
        }
        format!(
            "{} / 100000 = {:.5}, target 0.65625, se {:.5}, reproducible",
            est.successes,
            est.successes as f64 / 1e5,
            est.std_error
        )
    })
}

fn structural(cfg: &VerifyConfig) -> Outcome {
    run(9, "structural suites", 120, |f| {
        let seed = verify::DESK_SEED;
        let suites = [
            verify::verify_smith_random(1000, seed, cfg),
            verify::verify_reachability(2, 2, 2, cfg),
            verify::verify_gamma_invariance(100, seed, cfg),
            verify::verify_wimmer(2, 3, cfg),
        ];
        let mut parts = Vec::new();
        for s in suites {
            match s {
                Ok(r) => {
                    expect_pass(f, &r);
                    parts.push(format!("{} {}/{}", r.experiment, r.observed, r.expected));
                }
                Err(e) => f.push(e.to_string()),
            }
        }
        parts.join(", ")
    })
}

#[test]
fn acceptance_matrix() {
    let cfg = VerifyConfig::default();
    let outcomes = [
        simple_count(&cfg),
        extension(&cfg),
        coprime(&cfg),
        fiber(&cfg),
        block_companion(),
        splitting(&cfg),
        density(&cfg),
        monte_carlo(&cfg),
        structural(&cfg),
    ];
    for o in &outcomes {
        println!("{}", o.line());
    }
    let failed: Vec<usize> = outcomes.iter().filter(|o| !o.pass()).map(|o| o.id).collect();
    println!("{} of {} criteria pass", outcomes.len() - failed.len(), outcomes.len());
    assert!(failed.is_empty(), "failing criteria: {failed:?}");
}
