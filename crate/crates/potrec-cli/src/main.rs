//! Command-line front end: Gauss rules, system assembly reports, potential
//! reconstruction plot data, and the verification suite.
//!
//! Exit codes: 0 success, 1 verification failure, 2 configuration error,
//! 3 numeric failure.

mod config;
mod csvout;
mod report;

use config::{GaussConfig, ReconstructConfig, SourceCfg, SystemConfig};
use csvout::CsvDoc;
use potrec::reconstruct::{reconstruct_all, PotentialMatrix, ReconstructionOptions};
use potrec::systems::{assemble, default_report_energies};
use potrec::verify::{run_checks, suite_names, VerifyOptions};
use potrec::Error as PotrecError;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

const USAGE: &str = "\
usage: potrec <command> [options]

commands:
  gauss        Gauss rule (nodes, weights, derivative weights) as CSV
  system       assemble a physical system and emit a JSON report
  reconstruct  reconstruct V(x) from matrix elements; CSV + diagnostics JSON
  verify       run the verification suites; exit 0 iff all checks pass

options:
  --config <path>        JSON run configuration (gauss/system/reconstruct)
  --out <path>           output path (stdout when omitted)
  --methods m1,m2,m3,m4  method subset for reconstruct
  --sizes 10,20,32       basis-size list for reconstruct
  --suite <name>         verification suite filter for verify
  --inject-perturbation  verification test hook (forces a tridiagonality failure)
";

struct Cli {
    command: String,
    config: Option<PathBuf>,
    out: Option<PathBuf>,
    methods: Option<Vec<String>>,
    sizes: Option<Vec<usize>>,
    suite: Option<String>,
    inject_perturbation: bool,
}

enum CliError {
    Config(String),
    Numeric(String),
}

impl From<PotrecError> for CliError {
    fn from(e: PotrecError) -> Self {
        match e {
            PotrecError::Domain(m) => CliError::Config(format!("domain error: {m}")),
            other => CliError::Numeric(other.to_string()),
        }
    }
}

fn parse_args(args: &[String]) -> Result<Cli, String> {
    if args.is_empty() {
        return Err("missing command".into());
    }
    let command = args[0].clone();
    let mut cli = Cli {
        command,
        config: None,
        out: None,
        methods: None,
        sizes: None,
        suite: None,
        inject_perturbation: false,
    };
    let mut it = args[1..].iter();
    while let Some(flag) = it.next() {
        match flag.as_str() {
            "--config" => {
                cli.config = Some(PathBuf::from(it.next().ok_or("--config needs a path")?))
            }
            "--out" => cli.out = Some(PathBuf::from(it.next().ok_or("--out needs a path")?)),
            "--methods" => {
                cli.methods = Some(
                    it.next()
                        .ok_or("--methods needs a list")?
                        .split(',')
                        .map(|s| s.trim().to_string())
                        .filter(|s| !s.is_empty())
                        .collect(),
                )
            }
            "--sizes" => {
                let list = it.next().ok_or("--sizes needs a list")?;
                let mut sizes = Vec::new();
                for part in list.split(',') {
                    sizes.push(
                        part.trim()
                            .parse::<usize>()
                            .map_err(|_| format!("bad size '{part}'"))?,
                    );
                }
                cli.sizes = Some(sizes);
            }
            "--suite" => cli.suite = Some(it.next().ok_or("--suite needs a name")?.clone()),
            "--inject-perturbation" => cli.inject_perturbation = true,
            other => return Err(format!("unknown flag '{other}'")),
        }
    }
    Ok(cli)
}

fn load_config<T: serde::de::DeserializeOwned>(path: &Option<PathBuf>) -> Result<T, CliError> {
    let path = path
        .as_ref()
        .ok_or_else(|| CliError::Config("--config is required for this command".into()))?;
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::Config(format!("cannot read {}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| CliError::Config(format!("bad config: {e}")))
}

fn write_output(out: &Option<PathBuf>, content: &str) -> Result<(), CliError> {
    match out {
        Some(path) => std::fs::write(path, content)
            .map_err(|e| CliError::Config(format!("cannot write {}: {e}", path.display()))),
        None => {
            print!("{content}");
            Ok(())
        }
    }
}

fn main() -> ExitCode {
    let args: Vec<String> = std::env::args().skip(1).collect();
    let cli = match parse_args(&args) {
        Ok(cli) => cli,
        Err(msg) => {
            eprintln!("error: {msg}\n{USAGE}");
            return ExitCode::from(2);
        }
    };
    let result = match cli.command.as_str() {
        "gauss" => cmd_gauss(&cli),
        "system" => cmd_system(&cli),
        "reconstruct" => cmd_reconstruct(&cli),
        "verify" => return cmd_verify(&cli),
        other => {
            eprintln!("error: unknown command '{other}'\n{USAGE}");
            return ExitCode::from(2);
        }
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(CliError::Config(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(CliError::Numeric(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(3)
        }
    }
}

fn cmd_gauss(cli: &Cli) -> Result<(), CliError> {
    let cfg: GaussConfig = load_config(&cli.config)?;
    if cfg.n == 0 {
        return Err(CliError::Config("n must be >= 1".into()));
    }
    let family = cfg.family.to_family();
    family.validate()?;
    let rule = potrec::quadrature::build_family_rule(family, cfg.n)?;
    // Exactness self-test against analytic moments up to degree 2N-1.
    let moments = family.moments(2 * cfg.n);
    let mut worst = 0.0_f64;
    for (deg, want) in moments.iter().enumerate() {
        let got = rule.integrate(|x| x.powi(deg as i32));
        let scale = moments[..=deg]
            .iter()
            .fold(1e-300_f64, |m, v| m.max(v.abs()));
        worst = worst.max((got - want).abs() / scale);
    }
    let mut doc = CsvDoc::new();
    doc.comment(&format!("family: {}", cfg.family.describe()));
    doc.comment(&format!("n: {}", cfg.n));
    doc.header(&["node".into(), "weight".into(), "deriv_weight".into()]);
    for k in 0..cfg.n {
        doc.row(&[
            Some(rule.nodes[k]),
            Some(rule.weights[k]),
            Some(rule.deriv_weights[k]),
        ]);
    }
    doc.comment(&format!(
        "exactness: monomials to degree {} reproduced with max scaled error {worst:e}",
        2 * cfg.n - 1
    ));
    write_output(&cli.out, &doc.into_string())
}

fn cmd_system(cli: &Cli) -> Result<(), CliError> {
    let cfg: SystemConfig = load_config(&cli.config)?;
    let spec = cfg.system.to_spec();
    let sys = assemble(spec, cfg.n)?;
    let energies = cfg
        .energies
        .clone()
        .unwrap_or_else(|| default_report_energies(sys.basis.lambda()));
    let report = report::system_report(&sys, &energies, cfg.corner.unwrap_or(8))?;
    let mut text = serde_json::to_string_pretty(&report)
        .map_err(|e| CliError::Numeric(format!("serialization failed: {e}")))?;
    text.push('\n');
    write_output(&cli.out, &text)
}

fn sidecar_path(out: &Path) -> PathBuf {
    let mut name = out.file_name().unwrap_or_default().to_os_string();
    name.push(".diag.json");
    out.with_file_name(name)
}

fn sized_path(out: &Path, n: usize, multi: bool) -> PathBuf {
    if !multi {
        return out.to_path_buf();
    }
    let stem = out.file_stem().unwrap_or_default().to_string_lossy();
    let ext = out.extension().map(|e| e.to_string_lossy().to_string());
    let name = match ext {
        Some(ext) => format!("{stem}_n{n}.{ext}"),
        None => format!("{stem}_n{n}"),
    };
    out.with_file_name(name)
}

type ExactFn = Box<dyn Fn(f64) -> Option<f64>>;

fn cmd_reconstruct(cli: &Cli) -> Result<(), CliError> {
    let cfg: ReconstructConfig = load_config(&cli.config)?;
    if cfg.exact_only || cfg.sweep.is_some() {
        return cmd_exact_curves(cli, &cfg);
    }
    let sizes = cli
        .sizes
        .clone()
        .or_else(|| cfg.sizes.clone())
        .unwrap_or_else(|| vec![20]);
    if sizes.is_empty() {
        return Err(CliError::Config("empty size list".into()));
    }
    let multi = sizes.len() > 1;
    if multi && cli.out.is_none() {
        return Err(CliError::Config(
            "multiple sizes need --out (one file per size)".into(),
        ));
    }
    let method_names = cli
        .methods
        .clone()
        .or_else(|| cfg.methods.clone())
        .unwrap_or_else(|| vec!["m1".into(), "m2".into(), "m3".into(), "m4".into()]);
    let mut opts = ReconstructionOptions {
        m1: false,
        m2: false,
        m3: false,
        m4: false,
        column: cfg.column.unwrap_or(0),
        quadrature_k: cfg.quadrature_k,
    };
    for name in &method_names {
        match name.as_str() {
            "m1" => opts.m1 = true,
            "m2" => opts.m2 = true,
            "m3" => opts.m3 = true,
            "m4" => opts.m4 = true,
            other => return Err(CliError::Config(format!("unknown method '{other}'"))),
        }
    }

    let mut diag_runs = Vec::new();
    for &n in &sizes {
        if n < 2 {
            return Err(CliError::Config(format!("size {n} too small")));
        }
        // Matrix, the exact curve when known, and the counterterm to add
        // back, per source kind.
        // Half-line system figures are conventionally plotted in units of
        // λ²/2; emit scaled companion columns for those sources.
        let unit_scale = match &cfg.source {
            SourceCfg::System { system } => match system.to_spec() {
                potrec::systems::SystemSpec::CdhSystem { lambda, .. }
                | potrec::systems::SystemSpec::WilsonSystem { lambda, .. } => {
                    Some(0.5 * lambda * lambda)
                }
                _ => None,
            },
            _ => None,
        };
        let (pm, exact, counter, warnings): (
            PotentialMatrix,
            Option<ExactFn>,
            Option<potrec::bases::Counterterm>,
            Vec<String>,
        ) = match &cfg.source {
            SourceCfg::System { system } => {
                let sys = assemble(system.to_spec(), n)?;
                let exact = sys.exact_potential;
                let warnings = sys.warnings.clone();
                let counterterm = sys.counterterm.clone();
                let pm = PotentialMatrix::new(sys.potential_tilde.clone(), sys.basis)?;
                (
                    pm,
                    Some(Box::new(move |x| exact.eval(x)) as ExactFn),
                    Some(counterterm),
                    warnings,
                )
            }
            SourceCfg::Potential {
                basis,
                potential,
                quadrature_nodes,
            } => {
                let b = basis.to_basis()?;
                let k = quadrature_nodes.unwrap_or(n);
                if k < n {
                    return Err(CliError::Config("quadrature_nodes must be >= n".into()));
                }
                let entries = {
                    let p = potential.clone();
                    b.potential_matrix(move |x| p.eval(x), n, k)?
                };
                let p = potential.clone();
                (
                    PotentialMatrix::new(entries, b)?,
                    Some(Box::new(move |x| Some(p.eval(x))) as ExactFn),
                    None,
                    vec![],
                )
            }
            SourceCfg::Matrix { basis, entries } => {
                let b = basis.to_basis()?;
                if entries.len() < n || entries.iter().any(|r| r.len() < n) {
                    return Err(CliError::Config(format!(
                        "matrix smaller than requested size {n}"
                    )));
                }
                let m = potrec::Mat::from_rows(
                    entries.iter().take(n).map(|r| r[..n].to_vec()).collect(),
                )?;
                (PotentialMatrix::new(m, b)?, None, None, vec![])
            }
        };
        let grid = match cfg.grid {
            Some(g) => g.to_grid()?.points(),
            None => pm.basis.default_grid().points(),
        };
        let res = reconstruct_all(&pm, &grid, opts)?;

        let mut doc = CsvDoc::new();
        doc.comment(&format!("n: {n}"));
        doc.comment(&format!("methods: {}", method_names.join(",")));
        if let Some(c) = &counter {
            doc.comment(&format!(
                "counterterm added back to all method columns: {}",
                c.describe()
            ));
        }
        if let Some(u) = unit_scale {
            doc.comment(&format!(
                "scaled columns are in units of lambda^2/2 = {u}"
            ));
        }
        let mut header = vec!["x".to_string(), "exact".to_string()];
        for m in ["m1", "m2", "m3", "m4"] {
            if method_names.iter().any(|s| s == m) {
                header.push(m.to_string());
                header.push(format!("{m}_mask"));
                if unit_scale.is_some() {
                    header.push(format!("{m}_scaled"));
                }
            }
        }
        doc.header(&header);
        let add_back = |x: f64, v: f64| -> f64 {
            match &counter {
                Some(c) => v + c.eval(x),
                None => v,
            }
        };
        for (i, &x) in grid.iter().enumerate() {
            let mut cells: Vec<Option<f64>> = vec![Some(x)];
            cells.push(exact.as_ref().and_then(|f| f(x)));
            let mut push_est = |values: &[f64], mask: &[bool]| {
                if mask[i] {
                    let total = add_back(x, values[i]);
                    cells.push(Some(total));
                    cells.push(Some(1.0));
                    if let Some(u) = unit_scale {
                        cells.push(Some(total / u));
                    }
                } else {
                    cells.push(None);
                    cells.push(Some(0.0));
                    if unit_scale.is_some() {
                        cells.push(None);
                    }
                }
            };
            if let Some(e) = &res.m1 {
                push_est(&e.values, &e.mask);
            }
            if let Some(e) = &res.m2 {
                push_est(&e.values, &e.mask);
            }
            if let Some(e) = &res.m3 {
                push_est(&e.estimate.values, &e.estimate.mask);
            }
            if let Some(e) = &res.m4 {
                push_est(&e.fitted.values, &e.fitted.mask);
            }
            doc.row(&cells);
        }
        let masked = {
            let mut v = Vec::new();
            if let Some(e) = &res.m1 {
                v.push(("m1".to_string(), e.masked_count()));
            }
            if let Some(e) = &res.m2 {
                v.push(("m2".to_string(), e.masked_count()));
            }
            if let Some(e) = &res.m3 {
                v.push(("m3".to_string(), e.estimate.masked_count()));
            }
            if let Some(e) = &res.m4 {
                v.push(("m4".to_string(), e.fitted.masked_count()));
            }
            v
        };
        diag_runs.push(report::SizeDiagnostics {
            n,
            m3_variant_max_diff: res.diagnostics.m3_variant_max_diff,
            m4_offdiag_residual: res.diagnostics.m4_offdiag_residual,
            m4_quadrature_consistent: res.diagnostics.m4_quadrature_consistent,
            m4_samples: res.m4.as_ref().map(|e| {
                e.sample_x
                    .iter()
                    .zip(&e.sample_v)
                    .map(|(&x, &v)| (x, add_back(x, v)))
                    .collect()
            }),
            masked_points: masked,
            messages: res.diagnostics.messages.clone(),
            system_warnings: warnings,
        });
        match &cli.out {
            Some(path) => {
                let target = sized_path(path, n, multi);
                std::fs::write(&target, doc.into_string()).map_err(|e| {
                    CliError::Config(format!("cannot write {}: {e}", target.display()))
                })?;
            }
            None => print!("{}", doc.into_string()),
        }
    }
    // Diagnostics sidecar next to the CSV output.
    if let Some(path) = &cli.out {
        let diag = report::ReconstructDiagnostics { runs: diag_runs };
        let mut text = serde_json::to_string_pretty(&diag)
            .map_err(|e| CliError::Numeric(format!("serialization failed: {e}")))?;
        text.push('\n');
        let target = sidecar_path(path);
        std::fs::write(&target, text)
            .map_err(|e| CliError::Config(format!("cannot write {}: {e}", target.display())))?;
    }
    Ok(())
}

fn cmd_exact_curves(cli: &Cli, cfg: &ReconstructConfig) -> Result<(), CliError> {
    let system = match &cfg.source {
        SourceCfg::System { system } => *system,
        _ => {
            return Err(CliError::Config(
                "exact_only/sweep need a system source".into(),
            ))
        }
    };
    let values: Vec<(String, config::SystemCfg)> = match &cfg.sweep {
        Some(sweep) => {
            let mut out = Vec::new();
            for &v in &sweep.values {
                let varied = system.with_parameter(&sweep.parameter, v).ok_or_else(|| {
                    CliError::Config(format!(
                        "system does not support sweeping '{}'",
                        sweep.parameter
                    ))
                })?;
                out.push((format!("{}={v}", sweep.parameter), varied));
            }
            out
        }
        None => vec![("exact".to_string(), system)],
    };
    // Assemble each variant at a token size to validate parameters and get
    // the closed-form potential and default grid.
    let mut assembled = Vec::new();
    for (label, syscfg) in &values {
        let sys = assemble(syscfg.to_spec(), 2)?;
        assembled.push((label.clone(), sys));
    }
    let grid = match cfg.grid {
        Some(g) => g.to_grid()?.points(),
        None => assembled[0].1.basis.default_grid().points(),
    };
    let mut doc = CsvDoc::new();
    doc.comment("closed-form potential curves");
    let mut header = vec!["x".to_string()];
    header.extend(assembled.iter().map(|(l, _)| l.clone()));
    doc.header(&header);
    for &x in &grid {
        let mut cells: Vec<Option<f64>> = vec![Some(x)];
        for (_, sys) in &assembled {
            cells.push(sys.exact_potential.eval(x).filter(|v| v.is_finite()));
        }
        doc.row(&cells);
    }
    write_output(&cli.out, &doc.into_string())
}

fn cmd_verify(cli: &Cli) -> ExitCode {
    if let Some(suite) = &cli.suite {
        if !suite_names().contains(&suite.as_str()) {
            eprintln!(
                "error: unknown suite '{suite}' (expected one of {})",
                suite_names().join(", ")
            );
            return ExitCode::from(2);
        }
    }
    let opts = VerifyOptions {
        suite: cli.suite.clone(),
        inject_perturbation: cli.inject_perturbation,
    };
    let outcomes = run_checks(&opts);
    let mut failed = 0usize;
    for c in &outcomes {
        let status = if c.passed { "PASS" } else { "FAIL" };
        println!("{status}  {:12} {:40} {}", c.suite, c.name, c.detail);
        if !c.passed {
            failed += 1;
        }
    }
    println!(
        "{} checks, {} passed, {} failed",
        outcomes.len(),
        outcomes.len() - failed,
        failed
    );
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    }
}
