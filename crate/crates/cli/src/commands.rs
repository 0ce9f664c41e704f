//! Subcommands. Each returns the report to print and its exit code.

use std::path::{Path, PathBuf};

use dulac_core::corpus::e1_corpus;
use dulac_core::dulac::{
    dulac_map, radius_lower_bound, separatrix_oracle, separatrix_recurrence, separatrix_residual,
    DulacError,
};
use dulac_core::equation::{classify, diagonalize, EquationError, PlanarEquation, Regime};
use dulac_core::germ_space::{duval_sweep, freedom_certificate, jet_rank, schafke_min_n, Jettable};
use dulac_core::par::{self, Execution};
use dulac_core::series::is_univariate;
use dulac_core::{Coeff, Exact, Float, Series1, Series2};
use serde_json::{json, Value};

use crate::report::{self, number};
use crate::{
    load_equation, parse_equation, read_json, Backend, CliError, Outcome, RunConfig, EXIT_OK,
    EXIT_OUT_OF_CLASS, EXIT_RESIDUAL, EXIT_USAGE,
};

macro_rules! by_backend {
    ($cfg:expr, $f:ident($($arg:expr),*)) => {
        match $cfg.backend {
            Backend::Exact => $f::<Exact>($($arg),*),
            Backend::Float => $f::<Float>($($arg),*),
        }
    };
}

fn out_of_class_reason<C: Coeff>(c: &dulac_core::equation::Classification<C>) -> String {
    match c.linear.regime {
        Regime::SaddleNode => "k >= 2 unsupported: A20 vanishes after diagonalization".into(),
        Regime::Unsupported => "unsupported: both eigenvalues vanish".into(),
        r => format!("regime {r} is not a saddle-node"),
    }
}

pub fn classify_equation<C: Coeff>(eq: &PlanarEquation<C>, cfg: &RunConfig) -> Outcome {
    let c = classify(eq, cfg.core_tol());
    let mut warnings = Vec::new();
    let code = if report::is_out_of_class(&c) {
        warnings.push(out_of_class_reason(&c));
        EXIT_OUT_OF_CLASS
    } else {
        EXIT_OK
    };
    Outcome {
        report: json!({
            "config": report::config_block(cfg),
            "classification": report::classification_block(eq, &c, cfg),
            "diagnostics": {"warnings": warnings},
        }),
        code,
    }
}

pub fn classify_file(file: &Path, cfg: &RunConfig) -> Result<Outcome, CliError> {
    fn run<C: Coeff>(file: &Path, cfg: &RunConfig) -> Result<Outcome, CliError> {
        Ok(classify_equation(&load_equation::<C>(file)?, cfg))
    }
    by_backend!(cfg, run(file, cfg))
}

fn failure_code(e: &DulacError) -> u8 {
    let order = |e: &DulacError| {
        matches!(
            e,
            DulacError::OrderExceeded { .. }
                | DulacError::OrderTooSmall(_)
                | DulacError::Equation(EquationError::OrderExceeded { .. })
        )
    };
    if e.is_out_of_class() {
        EXIT_OUT_OF_CLASS
    } else if order(e.root()) {
        EXIT_USAGE
    } else {
        EXIT_RESIDUAL
    }
}

/// Classification followed by the full pipeline for inputs in 𝓔₁.
pub fn normalize_equation<C: Coeff>(eq: &PlanarEquation<C>, cfg: &RunConfig) -> Outcome {
    let tol = cfg.core_tol();
    let c = classify(eq, tol);
    let mut report = json!({
        "config": report::config_block(cfg),
        "classification": report::classification_block(eq, &c, cfg),
    });
    if !c.in_e1() {
        report["norms"] = report::norms_block(eq, None);
        report["diagnostics"] = json!({
            "stage": "classify",
            "error": out_of_class_reason(&c),
            "warnings": [],
        });
        return Outcome {
            report,
            code: EXIT_OUT_OF_CLASS,
        };
    }
    let nf = match dulac_map(eq, cfg.order, tol) {
        Ok(nf) => nf,
        Err(e) => {
            report["norms"] = report::norms_block(eq, None);
            report["diagnostics"] = json!({
                "stage": e.stage(),
                "error": e.to_string(),
                "warnings": [],
            });
            return Outcome {
                report,
                code: failure_code(&e),
            };
        }
    };

    let mut warnings = Vec::new();
    let radius = eq
        .at_order(cfg.order)
        .map_err(DulacError::from)
        .and_then(|eq| Ok(diagonalize(&eq, tol)?))
        .and_then(|deq| radius_lower_bound(&deq, cfg.order, cfg.bound, tol));
    let radius = match radius {
        Ok(r) => {
            if !r.hypothesis_holds {
                warnings.push("radius bound: coefficients exceed M·sigma^(i+j)".to_string());
            }
            Some(r)
        }
        Err(e) => {
            warnings.push(format!("radius bound: {e}"));
            None
        }
    };

    let threshold = cfg.residual_threshold();
    let constraints = nf.constraints_hold(tol);
    let certified = nf.residual_norm <= threshold && constraints;
    let mut diagnostics = report::residual_block(&nf, threshold);
    diagnostics["constraints_hold"] = json!(constraints);
    diagnostics["certified"] = json!(certified);
    diagnostics["warnings"] = json!(warnings);

    report["dulac"] = report::pipeline_block(&nf, radius.as_ref());
    report["norms"] = report::norms_block(eq, Some(&nf));
    report["diagnostics"] = diagnostics;
    Outcome {
        report,
        code: if certified { EXIT_OK } else { EXIT_RESIDUAL },
    }
}

pub fn normalize_file(file: &Path, cfg: &RunConfig) -> Result<Outcome, CliError> {
    fn run<C: Coeff>(file: &Path, cfg: &RunConfig) -> Result<Outcome, CliError> {
        Ok(normalize_equation(&load_equation::<C>(file)?, cfg))
    }
    by_backend!(cfg, run(file, cfg))
}

/// Separatrix by the recurrence, with its residual and optionally the
/// coefficient-matching cross-check.
pub fn separatrix_equation<C: Coeff>(eq: &PlanarEquation<C>, cfg: &RunConfig, oracle: bool) -> Outcome {
    let tol = cfg.core_tol();
    let run = || -> Result<Value, DulacError> {
        let eq = eq.at_order(cfg.order)?;
        let deq = diagonalize(&eq, tol)?;
        let s = separatrix_recurrence(&deq, cfg.order, tol)?.s;
        let residual = separatrix_residual(&deq.a, &deq.b, &s, tol)?.norm_factorial();
        let agrees = if oracle {
            json!(separatrix_oracle(&deq, cfg.order, tol)?.s.approx_eq(&s, tol))
        } else {
            Value::Null
        };
        let threshold = match cfg.backend {
            Backend::Exact => 0.0,
            Backend::Float => cfg.tol * (1.0 + deq.a.norm_factorial()),
        };
        Ok(json!({
            "separatrix": s.to_json(dulac_core::Var::Y),
            "residual": number(residual),
            "threshold": number(threshold),
            "oracle_agrees": agrees,
        }))
    };
    match run() {
        Ok(mut body) => {
            let residual = body["residual"].as_f64().unwrap_or(f64::INFINITY);
            let threshold = body["threshold"].as_f64().unwrap_or(0.0);
            let agrees = body["oracle_agrees"].as_bool().unwrap_or(true);
            body["config"] = report::config_block(cfg);
            let ok = residual <= threshold && agrees;
            Outcome {
                report: body,
                code: if ok { EXIT_OK } else { EXIT_RESIDUAL },
            }
        }
        Err(e) => Outcome {
            report: json!({"config": report::config_block(cfg), "error": e.to_string()}),
            code: failure_code(&e),
        },
    }
}

pub fn separatrix_file(file: &Path, cfg: &RunConfig, oracle: bool) -> Result<Outcome, CliError> {
    fn run<C: Coeff>(file: &Path, cfg: &RunConfig, oracle: bool) -> Result<Outcome, CliError> {
        Ok(separatrix_equation(&load_equation::<C>(file)?, cfg, oracle))
    }
    by_backend!(cfg, run(file, cfg, oracle))
}

/// Norms of an equation, a bivariate series, or a univariate series.
pub fn norms_file(file: &Path, cfg: &RunConfig) -> Result<Outcome, CliError> {
    fn run<C: Coeff>(file: &Path, v: &Value, cfg: &RunConfig) -> Result<Outcome, CliError> {
        if v.get("A").is_some() {
            let eq = parse_equation::<C>(file, v)?;
            let mut warnings = Vec::new();
            let c = classify(&eq, cfg.core_tol());
            let nf = if c.in_e1() {
                dulac_map(&eq, cfg.order, cfg.core_tol())
                    .map_err(|e| warnings.push(format!("D unavailable: {e}")))
                    .ok()
            } else {
                warnings.push("D unavailable: input is not in SaddleNode/E1".to_string());
                None
            };
            return Ok(Outcome::ok(json!({
                "config": report::config_block(cfg),
                "norms": report::norms_block(&eq, nf.as_ref()),
                "diagnostics": {"warnings": warnings},
            })));
        }
        let parse_err = |e: dulac_core::series::SeriesJsonError| CliError::Parse {
            path: file.display().to_string(),
            message: e.to_string(),
        };
        let (order, norm, sup) = if is_univariate(v) {
            let s = Series1::<C>::from_json(v).map_err(parse_err)?;
            (s.order(), s.norm_factorial(), s.norm_sup())
        } else {
            let s = Series2::<C>::from_json(v).map_err(parse_err)?;
            (s.order(), s.norm_factorial(), s.sup_modulus())
        };
        Ok(Outcome::ok(json!({
            "config": report::config_block(cfg),
            "order": order,
            "norm": number(norm),
            "sup": number(sup),
        })))
    }
    let v = read_json(file)?;
    by_backend!(cfg, run(file, &v, cfg))
}

fn family_report<C: Coeff, F: Jettable<C>>(family: &[F], p: Option<usize>, tol: f64) -> Result<Value, CliError> {
    let min_order = family.iter().map(Jettable::order).min().unwrap_or(0);
    let p = p.unwrap_or(min_order);
    let usage = |e: dulac_core::germ_space::GermError| CliError::Usage(e.to_string());
    let ranks = (0..=p)
        .map(|q| jet_rank(family, q, tol))
        .collect::<Result<Vec<_>, _>>()
        .map_err(usage)?;
    let freedom = freedom_certificate(family, p, tol).map_err(usage)?;
    Ok(json!({
        "family_size": family.len(),
        "p": p,
        "rank": ranks.last(),
        "ranks": ranks,
        "freedom": report::freedom_block(freedom),
    }))
}

/// Jet ranks and the freedom verdict of a family given as a JSON array of
/// series (all univariate or all bivariate).
pub fn jets_file(file: &Path, p: Option<usize>, cfg: &RunConfig) -> Result<Outcome, CliError> {
    fn run<C: Coeff>(file: &Path, v: &Value, p: Option<usize>, cfg: &RunConfig) -> Result<Outcome, CliError> {
        let parse = |message: String| CliError::Parse {
            path: file.display().to_string(),
            message,
        };
        let items = v
            .as_array()
            .filter(|a| !a.is_empty())
            .ok_or_else(|| parse("$: expected a non-empty array of series".into()))?;
        let univariate = is_univariate(&items[0]);
        let tol = cfg.core_tol();
        let mut body = if univariate {
            let fam = items
                .iter()
                .enumerate()
                .map(|(k, s)| Series1::<C>::from_json_at(s, &format!("$[{k}]")))
                .collect::<Result<Vec<_>, _>>()
                .map_err(|e| parse(e.to_string()))?;
            family_report(&fam, p, tol)?
        } else {
            let fam = items
                .iter()
                .enumerate()
                .map(|(k, s)| Series2::<C>::from_json_at(s, &format!("$[{k}]")))
                .collect::<Result<Vec<_>, _>>()
                .map_err(|e| parse(e.to_string()))?;
            family_report(&fam, p, tol)?
        };
        body["config"] = report::config_block(cfg);
        Ok(Outcome::ok(body))
    }
    let v = read_json(file)?;
    by_backend!(cfg, run(file, &v, p, cfg))
}

/// Smallest `N` with the univariate input in `M_N`.
pub fn schafke_file(file: &Path, cfg: &RunConfig) -> Result<Outcome, CliError> {
    fn run<C: Coeff>(file: &Path, v: &Value, cfg: &RunConfig) -> Result<Outcome, CliError> {
        let s = Series1::<C>::from_json(v).map_err(|e| CliError::Parse {
            path: file.display().to_string(),
            message: e.to_string(),
        })?;
        let cert = schafke_min_n(&s);
        let mut body = report::schafke_block(&cert);
        body["config"] = report::config_block(cfg);
        Ok(Outcome::ok(body))
    }
    let v = read_json(file)?;
    by_backend!(cfg, run(file, &v, cfg))
}

pub fn duval_demo(eps: f64, degrees: &[usize], samples: usize, exec: Execution) -> Result<Outcome, CliError> {
    let rows = duval_sweep(eps, degrees, samples, exec).map_err(|e| CliError::Usage(e.to_string()))?;
    let monotone = rows.windows(2).all(|w| w[1].sup_plus <= w[0].sup_plus);
    Ok(Outcome::ok(json!({
        "eps": number(eps),
        "samples": samples,
        "sup_plus_monotone": monotone,
        "rows": rows.iter().map(report::duval_row).collect::<Vec<_>>(),
    })))
}

/// JSON files of a directory, sorted by name.
pub fn corpus_files(dir: &Path) -> Result<Vec<PathBuf>, CliError> {
    let io = |source| CliError::Io {
        path: dir.to_path_buf(),
        source,
    };
    let mut files = Vec::new();
    for entry in std::fs::read_dir(dir).map_err(io)? {
        let path = entry.map_err(io)?.path();
        if path.is_file() && path.extension().is_some_and(|e| e == "json") {
            files.push(path);
        }
    }
    files.sort();
    Ok(files)
}

struct BatchItem {
    file: String,
    category: Option<String>,
    residual: Option<f64>,
    code: u8,
    body: Value,
}

fn batch_item<C: Coeff>(path: &Path, cfg: &RunConfig) -> BatchItem {
    let file = path
        .file_name()
        .map_or_else(|| path.display().to_string(), |n| n.to_string_lossy().into_owned());
    match load_equation::<C>(path) {
        Err(e) => BatchItem {
            file,
            category: None,
            residual: None,
            code: e.exit_code(),
            body: json!({"error": e.to_string()}),
        },
        Ok(eq) => {
            let category = report::category(&classify(&eq, cfg.core_tol()));
            let out = normalize_equation(&eq, cfg);
            let residual = out.report["dulac"]["residual_norm"].as_f64();
            let code = if category == "SaddleNode/E1" {
                out.code
            } else if category == "unsupported" {
                EXIT_OUT_OF_CLASS
            } else {
                EXIT_OK
            };
            BatchItem {
                file,
                category: Some(category),
                residual,
                code,
                body: out.report,
            }
        }
    }
}

/// Runs `normalize` over every JSON file of `dir`; individual failures are
/// reported, not raised.
pub fn batch_dir(dir: &Path, cfg: &RunConfig, exec: Execution) -> Result<Outcome, CliError> {
    let files = corpus_files(dir)?;
    let items = match cfg.backend {
        Backend::Exact => par::map(&files, exec, |f| batch_item::<Exact>(f, cfg)),
        Backend::Float => par::map(&files, exec, |f| batch_item::<Float>(f, cfg)),
    };
    let mut counts = serde_json::Map::new();
    let mut failures = Vec::new();
    let mut max_residual: Option<f64> = None;
    for item in &items {
        if let Some(c) = &item.category {
            let n = counts.get(c).and_then(Value::as_u64).unwrap_or(0);
            counts.insert(c.clone(), json!(n + 1));
        }
        if let Some(r) = item.residual {
            max_residual = Some(max_residual.map_or(r, |m: f64| m.max(r)));
        }
        if item.code == EXIT_USAGE || item.code == EXIT_RESIDUAL {
            let error = item.body["error"]
                .as_str()
                .or_else(|| item.body["diagnostics"]["error"].as_str())
                .unwrap_or("residual above threshold");
            failures.push(json!({"file": item.file, "exit_code": item.code, "error": error}));
        }
    }
    let rows: Vec<Value> = items
        .iter()
        .map(|i| {
            json!({
                "file": i.file,
                "category": i.category,
                "exit_code": i.code,
                "report": i.body,
            })
        })
        .collect();
    Ok(Outcome::ok(json!({
        "config": report::config_block(cfg),
        "summary": {
            "total": items.len(),
            "counts": counts,
            "max_residual": max_residual.map_or(Value::Null, number),
            "failures": failures,
        },
        "items": rows,
    })))
}

/// Writes `count` seeded 𝓔₁ equations as `eq_0000.json`, … into `dir`.
pub fn gen_corpus(dir: &Path, seed: u64, count: usize, degree: usize, order: usize) -> Result<Outcome, CliError> {
    let io = |path: &Path| {
        let path = path.to_path_buf();
        move |source| CliError::Io { path, source }
    };
    std::fs::create_dir_all(dir).map_err(io(dir))?;
    let mut files = Vec::new();
    for (k, eq) in e1_corpus(seed, count, degree, order).iter().enumerate() {
        let name = format!("eq_{k:04}.json");
        let path = dir.join(&name);
        let text = serde_json::to_string_pretty(&eq.to_json()).expect("equations serialize");
        std::fs::write(&path, text + "\n").map_err(io(&path))?;
        files.push(name);
    }
    Ok(Outcome::ok(json!({
        "seed": seed,
        "count": count,
        "degree": degree,
        "order": order,
        "files": files,
    })))
}
