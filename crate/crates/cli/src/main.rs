mod pipeline;
mod render;
mod report;
mod triplefile;

use std::path::PathBuf;

use anyhow::{anyhow, bail, Context, Result};
use clap::{ArgGroup, Parser, Subcommand, ValueEnum};

use manin::coeff::Scalar;
use manin::contraction::{ads_rmatrix, contract, lambda_family};
use manin::doubles::{catalog, catalog_entries, CaseData, CatalogEntry, DoubleCase, LimitCase};
use manin::stachura::{classify, invariants_mu_p};

use pipeline::{
    case_r_with_params, case_verdict, double_checks, fit, file_subject, schouten_checks,
    verify_all, FitInput, Opts,
};
use report::{Check, Report};

#[derive(Parser)]
#[command(
    name = "manin",
    version,
    about = "Drinfel'd double workbench for low-dimensional kinematical algebras"
)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Md,
    Json,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum ShowFormat {
    Text,
    Json,
}

#[derive(Subcommand)]
enum Cmd {
    /// List the catalog or print one entry in full
    Catalog {
        #[command(subcommand)]
        which: CatalogCmd,
    },
    /// Run the verification pipeline over a catalog entry or a triple file
    #[command(group(ArgGroup::new("what").required(true).args(["id", "all", "file"])))]
    Verify {
        /// Catalog id, e.g. P21-Case0
        id: Option<String>,
        /// Verify every catalog entry
        #[arg(long)]
        all: bool,
        /// Verify a portable triple file instead of a catalog entry
        #[arg(long)]
        file: Option<PathBuf>,
        /// Parameter values, name=value with exact coefficient syntax
        #[arg(long, value_delimiter = ',')]
        params: Vec<String>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 100)]
        samples: usize,
        /// Numeric tolerance; exact checks ignore it
        #[arg(long, default_value_t = 1e-9)]
        tol: f64,
        #[arg(long, value_enum, default_value_t = Format::Md)]
        format: Format,
    },
    /// Flat limit of a curvature-family r-matrix
    Contract {
        /// ADS id or its single-letter form
        id: String,
        /// Power of the vanishing scale applied before the limit
        #[arg(long, default_value_t = 0)]
        rescale: i64,
        #[arg(long, value_enum, default_value_t = Format::Md)]
        format: Format,
    },
    /// Fit the reduced-space Poisson brackets of a coisotropic case
    Spacetime {
        id: String,
        #[arg(long, value_delimiter = ',')]
        params: Vec<String>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 100)]
        samples: usize,
        #[arg(long, default_value_t = 1e-9)]
        tol: f64,
        #[arg(long, value_enum, default_value_t = Format::Md)]
        format: Format,
    },
    /// Orbit class of a catalog r-matrix under the kinematical automorphisms
    Classify {
        id: String,
        #[arg(long, value_enum, default_value_t = Format::Md)]
        format: Format,
    },
    /// Schouten bracket and Yang-Baxter verdict of a case r-matrix
    Schouten {
        id: String,
        #[arg(long, value_delimiter = ',')]
        params: Vec<String>,
        #[arg(long, value_enum, default_value_t = Format::Md)]
        format: Format,
    },
    /// Run the whole catalog suite and emit one machine-readable report
    Report {
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 100)]
        samples: usize,
        #[arg(long, default_value_t = 1e-9)]
        tol: f64,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
        /// Write the report here instead of stdout
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Subcommand)]
enum CatalogCmd {
    /// One line per entry
    List,
    /// Full entry; json emits the portable triple file
    Show {
        id: String,
        #[arg(long, value_enum, default_value_t = ShowFormat::Text)]
        format: ShowFormat,
    },
}

fn main() {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => std::process::exit(code),
        Err(e) => {
            eprintln!("error: {e:#}");
            std::process::exit(2);
        }
    }
}

fn parse_params(raw: &[String]) -> Result<Vec<(String, Scalar)>> {
    raw.iter()
        .map(|kv| {
            let (k, v) = kv
                .split_once('=')
                .ok_or_else(|| anyhow!("parameter {kv:?} is not name=value"))?;
            let s = Scalar::parse(v).map_err(|e| anyhow!("parameter {k}: {e}"))?;
            Ok((k.to_string(), s))
        })
        .collect()
}

fn emit(report: &Report, format: Format) -> i32 {
    print!("{}", report.render(format == Format::Json));
    report.exit_code()
}

fn run(cli: Cli) -> Result<i32> {
    match cli.cmd {
        Cmd::Catalog { which } => match which {
            CatalogCmd::List => {
                for e in catalog_entries() {
                    println!("{:<12} {:<12} {}", e.id, kind(e), e.summary);
                }
                Ok(0)
            }
            CatalogCmd::Show { id, format } => {
                let entry = catalog(&id).map_err(|e| anyhow!("{e}"))?;
                match format {
                    ShowFormat::Json => {
                        let tf = triplefile::export(entry)
                            .ok_or_else(|| anyhow!("{} has no portable triple form", entry.id))?;
                        print!("{}", tf.to_json());
                    }
                    ShowFormat::Text => print!("{}", show_text(entry)),
                }
                Ok(0)
            }
        },
        Cmd::Verify {
            id,
            all,
            file,
            params,
            seed,
            samples,
            tol,
            format,
        } => {
            let opts = Opts {
                seed,
                samples,
                tol,
                params: parse_params(&params)?,
            };
            let (subject, checks) = if all {
                ("all".to_string(), verify_all(&opts))
            } else if let Some(path) = file {
                let text = std::fs::read_to_string(&path)
                    .with_context(|| format!("reading {}", path.display()))?;
                let tf = triplefile::TripleFile::parse(&text)?;
                let loaded = tf.build()?;
                let stem = path
                    .file_stem()
                    .map(|s| s.to_string_lossy().into_owned())
                    .unwrap_or_else(|| path.display().to_string());
                let subject = file_subject(&stem, loaded);
                (subject.name.clone(), double_checks(&subject, &opts))
            } else {
                let id = id.expect("clap enforces the argument group");
                let entry = catalog(&id).map_err(|e| anyhow!("{e}"))?;
                (entry.id.to_string(), pipeline::verify_entry(entry, &opts))
            };
            let mut report = Report::new("verify", &subject, seed, samples, tol);
            report.extend(checks);
            Ok(emit(&report, format))
        }
        Cmd::Contract {
            id,
            rescale,
            format,
        } => {
            let l = ads_rmatrix(&id).map_err(|e| anyhow!("{e}"))?;
            let subject = if id.len() == 1 {
                format!("ADS-{id}")
            } else {
                id.clone()
            };
            let mut report = Report::new("contract", &subject, 0, 0, 0.0);
            report.push(contract_check(l, rescale));
            Ok(emit(&report, format))
        }
        Cmd::Spacetime {
            id,
            params,
            seed,
            samples,
            tol,
            format,
        } => {
            let entry = catalog(&id).map_err(|e| anyhow!("{e}"))?;
            let c = entry
                .as_double()
                .ok_or_else(|| anyhow!("{} carries no homogeneous-space structure", entry.id))?;
            let opts = Opts {
                seed,
                samples,
                tol,
                params: parse_params(&params)?,
            };
            let mut report = Report::new("spacetime", entry.id, seed, samples, tol);
            let (verdict, text) = case_verdict(c);
            if !verdict.is_coisotropic() {
                report.push(Check::outcome(
                    "coisotropy",
                    false,
                    "coisotropic isotropy subalgebra".into(),
                    text,
                ));
                return Ok(emit(&report, format));
            }
            let input = FitInput {
                target_dim: c.target.dim(),
                verdict: c.expected_verdict,
                parametric: c.parametric.as_ref(),
                stored: c.spacetime.as_ref(),
                r_skew: &c.expected_r_skew,
            };
            match fit(&input, &opts) {
                Ok(out) => {
                    for row in &out.rows {
                        report.push(Check::outcome(
                            format!("{{{}, {}}}", row.pair.0, row.pair.1),
                            row.err < opts.tol,
                            row.expected.clone().unwrap_or_else(|| "-".into()),
                            row.actual.clone(),
                        ));
                    }
                    report.push(Check::outcome(
                        "fit_residual",
                        true,
                        "below 1e-8".into(),
                        render::residual(out.table.residual),
                    ));
                    report.push(Check::outcome(
                        "jacobi",
                        out.jacobi <= opts.tol,
                        "0".into(),
                        render::residual(out.jacobi),
                    ));
                }
                Err(e) => report.push(Check::outcome(
                    "fit",
                    false,
                    "polynomial bracket table".into(),
                    e,
                )),
            }
            Ok(emit(&report, format))
        }
        Cmd::Classify { id, format } => {
            let entry = catalog(&id).map_err(|e| anyhow!("{e}"))?;
            let c = entry
                .as_double()
                .filter(|c| c.expected_class.is_some())
                .ok_or_else(|| anyhow!("{} has no recorded orbit classification", entry.id))?;
            let want = c.expected_class.unwrap();
            let mut report = Report::new("classify", entry.id, 0, 0, 0.0);
            match classify(entry) {
                Ok(cl) => report.push(Check::outcome(
                    "class",
                    cl.label() == want,
                    want.into(),
                    format!("class {} via the stored witness", cl.label()),
                )),
                Err(e) => report.push(Check::outcome("class", false, want.into(), e.to_string())),
            }
            match invariants_mu_p(&c.expected_r_skew) {
                Ok((mu, p)) => report.push(Check::outcome(
                    "invariants",
                    true,
                    "-".into(),
                    format!("mu = {mu}, p = {p}"),
                )),
                Err(e) => report.push(Check::outcome(
                    "invariants",
                    false,
                    "proportional to the reference invariants".into(),
                    e.to_string(),
                )),
            }
            Ok(emit(&report, format))
        }
        Cmd::Schouten { id, params, format } => {
            let entry = catalog(&id).map_err(|e| anyhow!("{e}"))?;
            let params = parse_params(&params)?;
            let checks = match &entry.data {
                CaseData::Double(c) => {
                    let r = case_r_with_params(c, &params).map_err(|e| anyhow!("{e}"))?;
                    schouten_checks(&c.target, &r, params.is_empty())
                }
                CaseData::Limit(l) => schouten_checks(&lambda_family(), &l.r, true),
                CaseData::FormObstruction(_) => {
                    bail!("{} carries no r-matrix", entry.id)
                }
            };
            let mut report = Report::new("schouten", entry.id, 0, 0, 0.0);
            report.extend(checks);
            Ok(emit(&report, format))
        }
        Cmd::Report {
            seed,
            samples,
            tol,
            format,
            out,
        } => {
            let opts = Opts {
                seed,
                samples,
                tol,
                params: Vec::new(),
            };
            let mut report = Report::new("report", "catalog", seed, samples, tol);
            report.extend(verify_all(&opts));
            let text = report.render(format == Format::Json);
            match out {
                Some(path) => std::fs::write(&path, text)
                    .with_context(|| format!("writing {}", path.display()))?,
                None => print!("{text}"),
            }
            Ok(report.exit_code())
        }
    }
}

fn kind(e: &CatalogEntry) -> &'static str {
    match &e.data {
        CaseData::Double(_) => "double",
        CaseData::Limit(_) => "limit",
        CaseData::FormObstruction(_) => "obstruction",
    }
}

fn contract_check(l: &LimitCase, k: i64) -> Check {
    let fam = lambda_family();
    let names = fam.names();
    match contract(&l.r, k, &l.scale) {
        Ok(b) => {
            if k == l.rescale {
                Check::outcome(
                    "limit",
                    b.sub(&l.expected_limit).is_zero(),
                    l.expected_limit.display(names),
                    b.display(names),
                )
            } else {
                Check::outcome(
                    "limit",
                    true,
                    "(no recorded limit at this rescale)".into(),
                    b.display(names),
                )
            }
        }
        Err(e) => Check::outcome(
            "limit",
            false,
            if k < l.rescale {
                format!("finite from rescale {}", l.rescale)
            } else {
                l.expected_limit.display(names)
            },
            e.to_string(),
        ),
    }
}

fn show_text(entry: &'static CatalogEntry) -> String {
    let mut out = String::new();
    out.push_str(&format!("id: {}\n", entry.id));
    out.push_str(&format!("kind: {}\n", kind(entry)));
    out.push_str(&format!("summary: {}\n", entry.summary));
    match &entry.data {
        CaseData::Double(c) => show_double(&mut out, c),
        CaseData::Limit(l) => show_limit(&mut out, l),
        CaseData::FormObstruction(o) => {
            out.push_str(&format!("basis: {}\n", o.algebra.names().join(", ")));
            out.push_str("brackets:\n");
            for line in render::bracket_lines(&o.algebra) {
                out.push_str(&format!("  {line}\n"));
            }
            out.push_str("invariant forms: every invariant symmetric form is degenerate\n");
        }
    }
    out
}

fn show_double(out: &mut String, c: &DoubleCase) {
    let names = c.target.names();
    out.push_str(&format!("basis: {}\n", names.join(", ")));
    out.push_str("brackets:\n");
    for line in render::bracket_lines(&c.target) {
        out.push_str(&format!("  {line}\n"));
    }
    out.push_str(&format!(
        "pairing: {}\n",
        render::pairing_entries(&c.expected_pairing, names)
    ));
    out.push_str(&format!("r mixed: {}\n", c.expected_r_mixed.display(names)));
    out.push_str(&format!("r skew: {}\n", c.expected_r_skew.display(names)));
    if c.expected_delta.is_empty() {
        out.push_str("delta: (none recorded)\n");
    } else {
        out.push_str("delta:\n");
        for (i, row) in &c.expected_delta {
            out.push_str(&format!("  delta({}) = {}\n", names[*i], row.display(names)));
        }
    }
    out.push_str(&format!("class: {}\n", c.expected_class.unwrap_or("-")));
    out.push_str(&format!("verdict: {}\n", c.expected_verdict));
    if let Some(p) = &c.parametric {
        out.push_str(&format!(
            "family: r({}, {}) = {}\n",
            p.alpha,
            p.beta,
            p.r.display(names)
        ));
        out.push_str(&format!(
            "recorded point: ({}, {}) = ({}, {})\n",
            p.alpha, p.beta, p.dd_point.0, p.dd_point.1
        ));
    }
    if let Some(t) = &c.spacetime {
        out.push_str("spacetime:\n");
        let coords: Vec<String> = t.coords.iter().map(|s| s.to_string()).collect();
        for (a, b, terms) in &t.brackets {
            out.push_str(&format!(
                "  {{{}, {}}} = {}\n",
                coords[*a],
                coords[*b],
                render::poly_terms(&coords, terms)
            ));
        }
    }
}

fn show_limit(out: &mut String, l: &LimitCase) {
    let fam = lambda_family();
    let names = fam.names();
    out.push_str(&format!("r: {}\n", l.r.display(names)));
    out.push_str(&format!(
        "branch: Lambda {} 0\n",
        if l.lambda_sign < 0.0 { "<" } else { ">" }
    ));
    out.push_str(&format!("scale: {}\n", l.scale.scalar()));
    out.push_str(&format!("rescale: {}\n", l.rescale));
    out.push_str(&format!("limit: {}\n", l.expected_limit.display(names)));
    match &l.kappa_constant {
        Some(k) => out.push_str(&format!("twisted-form multiple: {k}\n")),
        None => out.push_str("twisted-form multiple: (none)\n"),
    }
    if !l.constraints.is_empty() {
        let c: Vec<String> = l.constraints.iter().map(|c| c.describe()).collect();
        out.push_str(&format!("constraints: {}\n", c.join(", ")));
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parameter_lists_parse_exactly() {
        let p = parse_params(&["lambda=1/2".into(), "omega=-sqrt(2)".into()]).unwrap();
        assert_eq!(p[0].0, "lambda");
        assert_eq!(p[0].1, Scalar::rational(1, 2));
        assert_eq!(p[1].1, Scalar::parse("-sqrt(2)").unwrap());
        assert!(parse_params(&["novalue".into()]).is_err());
    }

    #[test]
    fn contract_check_matches_recorded_limits() {
        let l = ads_rmatrix("ADS-A").unwrap();
        let c = contract_check(l, 0);
        assert_eq!(c.status, report::Status::Pass);
        let l = ads_rmatrix("ADS-B").unwrap();
        let c = contract_check(l, 0);
        assert_eq!(c.status, report::Status::Fail);
        assert!(c.actual.contains("diverg"), "{}", c.actual);
        let c = contract_check(l, 1);
        assert_eq!(c.status, report::Status::Pass);
    }

    #[test]
    fn show_text_renders_every_entry() {
        for e in catalog_entries() {
            let text = show_text(e);
            assert!(text.contains(e.id));
            assert!(text.len() > 40, "{}", e.id);
        }
    }
}
