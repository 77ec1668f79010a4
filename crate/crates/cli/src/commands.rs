use std::fs;
use std::path::Path;

use ffmc_core::census::{self, CountResult};
use ffmc_core::control::{self, MatrixPair};
use ffmc_core::verify::{self, VerificationReport, VerifyConfig, CSV_HEADER};
use ffmc_core::{is_unimodular, minors_gcd, smith_form, Degree, Error, MatF, MatPoly, Poly, Result};
use serde_json::{json, Value};

use crate::args::{Experiment, Format, Formula, Params, Sampling, Verb};

/// Rendered output plus whether every check passed.
pub struct Outcome {
    pub text: String,
    pub ok: bool,
}

impl Outcome {
    fn ok(text: String) -> Self {
        Outcome { text, ok: true }
    }
}

fn need<T: Copy>(v: Option<T>, flag: &str) -> Result<T> {
    v.ok_or_else(|| Error::Domain(format!("requires --{flag}")))
}

fn render(v: &Value, pretty: bool) -> String {
    if pretty {
        let mut out = String::new();
        pretty_value(v, "", &mut out);
        out
    } else {
        v.to_string()
    }
}

fn pretty_value(v: &Value, indent: &str, out: &mut String) {
    match v {
        Value::Object(map) => {
            let width = map.keys().map(|k| k.chars().count()).max().unwrap_or(0);
            for (k, x) in map {
                match x {
                    Value::Object(_) => {
                        out.push_str(&format!("{indent}{k}\n"));
                        pretty_value(x, &format!("{indent}  "), out);
                    }
                    Value::Array(rows) if rows.iter().all(Value::is_array) && !rows.is_empty() => {
                        out.push_str(&format!("{indent}{k}\n"));
                        for r in rows {
                            out.push_str(&format!("{indent}  {}\n", scalar_list(r)));
                        }
                    }
                    _ => out.push_str(&format!("{indent}{k:<width$}  {}\n", scalar(x))),
                }
            }
        }
        _ => out.push_str(&format!("{indent}{}\n", scalar(v))),
    }
}

fn scalar(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        Value::Null => "-".into(),
        Value::Array(_) => scalar_list(v),
        _ => v.to_string(),
    }
}

fn scalar_list(v: &Value) -> String {
    match v {
        Value::Array(xs) => format!("[{}]", xs.iter().map(scalar).collect::<Vec<_>>().join(", ")),
        _ => scalar(v),
    }
}

pub fn census(formula: Formula, p: &Params, degrees: &[i64], t: usize, pretty: bool) -> Result<Outcome> {
    let q = need(p.q, "q")?;
    let r: CountResult = match formula {
        Formula::CoprimeTuples => {
            if degrees.is_empty() {
                return Err(Error::Domain("requires --degrees".into()));
            }
            census::count_coprime_tuples(q, degrees)?
        }
        Formula::Simple => census::count_simple(q, need(p.n, "n")?, need(p.k, "k")?)?,
        Formula::Extension => census::count_extension(q, need(p.n, "n")?, need(p.k, "k")?, t)?,
        Formula::Fiber => census::fiber_size(q, need(p.l, "l")?, need(p.m, "m")?)?,
        Formula::BlockCompanion => census::count_block_companion(q, need(p.m, "m")?, need(p.d, "d")?)?,
        Formula::Splitting => census::count_splitting(q, need(p.m, "m")?, need(p.d, "d")?)?,
        Formula::Density => census::count_density(q, need(p.n, "n")?, need(p.k, "k")?, need(p.d, "d")?)?,
    };
    let v = serde_json::to_value(&r).expect("plain data serializes");
    Ok(Outcome::ok(render(&v, pretty)))
}

fn read_matpoly(path: &Path) -> Result<MatPoly> {
    let text = fs::read_to_string(path)
        .map_err(|e| Error::Parse(format!("cannot read {}: {e}", path.display())))?;
    MatPoly::from_json(&text)
}

/// `[A B]` from a constant `k x (k+l)` file or from the pencil `[xI - A  B]`.
fn pair_from(m: &MatPoly) -> Result<MatrixPair> {
    let (k, cols) = (m.n(), m.k());
    if cols <= k {
        return Err(Error::Shape(format!(
            "a pair file is k x (k+l) with l >= 1, got {k}x{cols}"
        )));
    }
    let c0 = m.coeff(0);
    let a = match m.degree() {
        Degree::NegInfinity | Degree::Finite(0) => c0.submatrix(0..k, 0..k),
        Degree::Finite(1) if m.coeff(1) == MatF::identity_nk(m.field(), k, cols) => {
            c0.submatrix(0..k, 0..k).neg()
        }
        _ => {
            return Err(Error::Shape(
                "a pair file holds [A B] or the pencil [xI - A  B]".into(),
            ))
        }
    };
    MatrixPair::new(a, c0.submatrix(0..k, k..cols))
}

/// `Y` from a constant file or from the pencil `x I_{l,k} - Y`.
fn y_from(m: &MatPoly) -> Result<MatF> {
    match m.degree() {
        Degree::NegInfinity | Degree::Finite(0) => Ok(m.coeff(0)),
        Degree::Finite(1) if m.coeff(1) == MatF::identity_nk(m.field(), m.n(), m.k()) => Ok(m.coeff(0).neg()),
        _ => Err(Error::Shape("expected Y or the pencil x I - Y".into())),
    }
}

fn grid(m: &MatPoly) -> Value {
    json!(m.to_display_grid())
}

fn strings(fs: &[Poly]) -> Value {
    json!(fs.iter().map(Poly::to_string).collect::<Vec<_>>())
}

pub fn analyze(verb: Verb, path: &Path, f: &[String], budget: u64, pretty: bool) -> Result<Outcome> {
    let m = read_matpoly(path)?;
    let v = match verb {
        Verb::Unimodular => {
            let r = m.n().min(m.k());
            let g = if r == 0 { Poly::one(m.field()) } else { minors_gcd(&m, r)? };
            json!({
                "verb": "unimodular",
                "n": m.n(),
                "k": m.k(),
                "unimodular": is_unimodular(&m),
                "minors_gcd": g.to_string(),
            })
        }
        Verb::Snf => {
            let s = smith_form(&m);
            json!({
                "verb": "snf",
                "factors": strings(&s.factors),
                "unimodular": s.is_unimodular(),
                "d": grid(&s.d),
                "u": grid(&s.u),
                "v": grid(&s.v),
            })
        }
        Verb::Indices => {
            let pair = pair_from(&m)?;
            let c = control::controllability_indices(&pair);
            json!({
                "verb": "indices",
                "k": pair.k(),
                "l": pair.l(),
                "reachable": control::is_reachable(&pair),
                "p": c.p,
                "indices": c.indices,
                "rank_b": c.rank_b,
            })
        }
        Verb::Brunovsky => {
            let pair = pair_from(&m)?;
            if !control::is_reachable(&pair) {
                return Err(Error::Domain("requires a reachable pair".into()));
            }
            let c = control::controllability_indices(&pair);
            let b = control::brunovsky_pair(pair.field(), &c.indices, pair.l())?;
            json!({
                "verb": "brunovsky",
                "indices": c.indices,
                "a": b.ac.to_strings(),
                "b": b.bc.to_strings(),
            })
        }
        Verb::Wimmer => {
            if f.is_empty() {
                return Err(Error::Domain("requires --f".into()));
            }
            let y = y_from(&m)?;
            let target = Poly::from_strings(y.field(), f)?;
            let completable = control::wimmer_completable(&y, &target)?;
            let factors = smith_form(&ffmc_core::linear_pencil(&y)).nontrivial_factors();
            let (completion, search) = match control::complete_char_poly(&y, &target, budget) {
                Ok(z) => (z.map(|z| json!(y.hstack(&z).expect("rows agree").to_strings())), "complete"),
                Err(Error::BudgetExceeded { .. }) => (None, "skipped: over budget"),
                Err(e) => return Err(e),
            };
            json!({
                "verb": "wimmer",
                "f": target.to_string(),
                "invariant_factors": strings(&factors),
                "completable": completable,
                "completion": completion,
                "search": search,
            })
        }
    };
    Ok(Outcome::ok(render(&v, pretty)))
}

pub struct VerifyArgs<'a> {
    pub experiment: Option<Experiment>,
    pub all_desk: bool,
    pub params: &'a Params,
    pub max_degree: usize,
    pub sampling: &'a Sampling,
    pub instances: u64,
    pub per_pair: u64,
    pub format: Format,
}

fn run_experiment(e: Experiment, a: &VerifyArgs, cfg: &VerifyConfig) -> Result<Vec<VerificationReport>> {
    let p = a.params;
    let q = || need(p.q, "q");
    Ok(match e {
        Experiment::Simple => vec![verify::verify_count_simple(q()?, need(p.n, "n")?, need(p.k, "k")?, cfg)?],
        Experiment::Extension => vec![verify::verify_extension(q()?, need(p.n, "n")?, need(p.k, "k")?, cfg)?],
        Experiment::CoprimeTuples => verify::verify_coprime_tuples(q()?, need(p.m, "m")?, a.max_degree, cfg)?,
        Experiment::Fiber => verify::verify_fiber(q()?, need(p.l, "l")?, need(p.m, "m")?, cfg)?,
        Experiment::BlockCompanion => vec![verify::verify_block_companion(q()?, need(p.m, "m")?, need(p.d, "d")?)?],
        Experiment::Splitting => vec![verify::verify_splitting(q()?, need(p.m, "m")?, need(p.d, "d")?, cfg)?],
        Experiment::Density => {
            verify::verify_density_exhaustive(q()?, need(p.n, "n")?, need(p.k, "k")?, need(p.d, "d")?, cfg)?
        }
        Experiment::MonteCarlo => vec![verify::estimate_density(
            q()?,
            need(p.n, "n")?,
            need(p.k, "k")?,
            need(p.d, "d")?,
            a.sampling.trials,
            a.sampling.seed,
            cfg,
        )?
        .to_report()],
        Experiment::Smith => vec![verify::verify_smith_random(a.instances, a.sampling.seed, cfg)?],
        Experiment::Reachability => vec![verify::verify_reachability(
            p.q.unwrap_or(2),
            p.k.unwrap_or(2),
            p.l.unwrap_or(2),
            cfg,
        )?],
        Experiment::Gamma => vec![verify::verify_gamma_invariance(a.per_pair, a.sampling.seed, cfg)?],
        Experiment::Wimmer => vec![verify::verify_wimmer(p.q.unwrap_or(2), p.l.unwrap_or(3), cfg)?],
    })
}

fn params_text(r: &VerificationReport) -> String {
    r.params
        .iter()
        .map(|(k, v)| format!("{k}={}", scalar(v).replace(' ', "")))
        .collect::<Vec<_>>()
        .join(" ")
}

fn table(reports: &[VerificationReport]) -> String {
    let header = ["experiment", "params", "expected", "observed", "pass", "instances", "ms"];
    let rows: Vec<[String; 7]> = reports
        .iter()
        .map(|r| {
            [
                r.experiment.clone(),
                params_text(r),
                r.expected.to_string(),
                r.observed.to_string(),
                if r.pass { "yes".into() } else { "NO".into() },
                r.instances.to_string(),
                r.elapsed.as_millis().to_string(),
            ]
        })
        .collect();
    let widths: Vec<usize> = (0..header.len())
        .map(|c| rows.iter().map(|r| r[c].chars().count()).chain([header[c].len()]).max().unwrap_or(0))
        .collect();
    let line = |cells: Vec<&str>| {
        cells
            .iter()
            .zip(&widths)
            .map(|(c, w)| format!("{c:<w$}"))
            .collect::<Vec<_>>()
            .join("  ")
            .trim_end()
            .to_string()
    };
    let mut out = vec![line(header.to_vec())];
    out.extend(rows.iter().map(|r| line(r.iter().map(String::as_str).collect())));
    let passed = reports.iter().filter(|r| r.pass).count();
    out.push(format!("{passed}/{} pass", reports.len()));
    out.join("\n") + "\n"
}

pub fn verify(a: &VerifyArgs, cfg: &VerifyConfig, pretty: bool) -> Result<Outcome> {
    let mut reports = if a.all_desk {
        verify::all_desk(cfg)?
    } else {
        let e = a.experiment.ok_or_else(|| Error::Domain("requires an experiment or --all-desk".into()))?;
        run_experiment(e, a, cfg)?
    };
    verify::sort_reports(&mut reports);
    let ok = reports.iter().all(|r| r.pass);
    let text = if pretty {
        table(&reports)
    } else {
        match a.format {
            Format::Json => reports.iter().map(|r| r.to_json_line() + "\n").collect(),
            Format::Csv => std::iter::once(CSV_HEADER.to_string())
                .chain(reports.iter().map(VerificationReport::csv_row))
                .map(|l| l + "\n")
                .collect(),
        }
    };
    Ok(Outcome { text, ok })
}

pub fn sample(p: &Params, s: &Sampling, cfg: &VerifyConfig, pretty: bool) -> Result<Outcome> {
    let est = verify::estimate_density(
        need(p.q, "q")?,
        need(p.n, "n")?,
        need(p.k, "k")?,
        need(p.d, "d")?,
        s.trials,
        s.seed,
        cfg,
    )?;
    let v = serde_json::to_value(&est).expect("plain data serializes");
    Ok(Outcome {
        text: render(&v, pretty),
        ok: est.within_3se(),
    })
}
