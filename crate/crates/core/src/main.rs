use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};

use lfasym::harness::{
    asymptotic_value, decay_fit, domain_extension, emit_report, geometric_grid, oracle_value,
    preset_by_name, preset_names, run_sweep, symbol_table, unit_direction, DomainExtConfig,
    Preset, ReportFormat, SweepConfig,
};
use lfasym::multidim::HessianModel;
use lfasym::oracle::{QuadOptions, DEFAULT_BUDGET};
use lfasym::series1d::ExpansionSpec1D;
use lfasym::{Error, Result};

#[derive(Parser, Debug)]
#[command(name = "lfasym", version, about = "Asymptotics of Laplace-Fourier integrals against brute-force quadrature")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// 1D asymptotic value P(k) on a k grid
    Asym1d(Common),
    /// d-dimensional Gaussian-formula value P(k) on a k grid
    Asymnd(Common),
    /// Brute-force quadrature of P(k) on a k grid
    Oracle(Common),
    /// Asymptotic vs oracle table
    Sweep(Common),
    /// Resummed symbols I_m(λ, k) and successive ratios
    Symbols(Common),
    /// Log-log decay slopes of |I_m(k^s, k)|
    DecayFit(Common),
    /// Whole-space experiment through the subtracted integral
    DomainExt(Common),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
enum Format {
    Csv,
    Json,
}

/// Every flag is optional so that a JSON config file can fill the gaps.
#[derive(Args, Debug, Default, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields, rename_all = "kebab-case")]
struct Common {
    /// Preset name (see --list-presets)
    #[arg(long)]
    preset: Option<String>,
    /// Custom 1D spec, inline JSON or a path
    #[arg(long)]
    spec: Option<String>,
    /// Custom Hessian model, inline JSON or a path
    #[arg(long)]
    hessian: Option<String>,
    #[arg(long)]
    s: Option<f64>,
    #[arg(long)]
    k_min: Option<f64>,
    #[arg(long)]
    k_max: Option<f64>,
    #[arg(long)]
    k_count: Option<usize>,
    /// Explicit comma-separated |k| values; overrides the geometric grid
    #[arg(long, value_delimiter = ',')]
    k: Option<Vec<f64>>,
    /// Direction of k for d > 1, comma-separated
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    k_dir: Option<Vec<f64>>,
    #[arg(long, value_parser = clap::value_parser!(u64).range(0..=2))]
    order: Option<u64>,
    #[arg(long)]
    tol: Option<f64>,
    #[arg(long)]
    budget: Option<u64>,
    #[arg(long, value_enum)]
    format: Option<Format>,
    #[arg(long)]
    out: Option<PathBuf>,
    /// Fixed λ for `symbols`
    #[arg(long)]
    lambda: Option<f64>,
    #[arg(long)]
    m_max: Option<usize>,
    /// Use half-line symbols even for two-sided specs
    #[arg(long)]
    #[serde(default)]
    one_sided: bool,
    /// Excluded ball radius for the σ infimum
    #[arg(long)]
    eps: Option<f64>,
    /// σ for the tail bound (default: the grid infimum)
    #[arg(long)]
    sigma: Option<f64>,
    /// JSON file with any of the flags above; flags win
    #[arg(long)]
    #[serde(skip)]
    config: Option<PathBuf>,
    #[arg(long)]
    #[serde(skip)]
    list_presets: bool,
}

impl Common {
    fn merged(self) -> Result<Common> {
        let Some(path) = self.config.clone() else {
            return Ok(self);
        };
        let text = std::fs::read_to_string(&path).map_err(|e| Error::Io {
            path: path.display().to_string(),
            message: e.to_string(),
        })?;
        let file: Common = serde_json::from_str(&text)
            .map_err(|e| Error::Config(format!("{}: {e}", path.display())))?;
        Ok(Common {
            preset: self.preset.or(file.preset),
            spec: self.spec.or(file.spec),
            hessian: self.hessian.or(file.hessian),
            s: self.s.or(file.s),
            k_min: self.k_min.or(file.k_min),
            k_max: self.k_max.or(file.k_max),
            k_count: self.k_count.or(file.k_count),
            k: self.k.or(file.k),
            k_dir: self.k_dir.or(file.k_dir),
            order: self.order.or(file.order),
            tol: self.tol.or(file.tol),
            budget: self.budget.or(file.budget),
            format: self.format.or(file.format),
            out: self.out.or(file.out),
            lambda: self.lambda.or(file.lambda),
            m_max: self.m_max.or(file.m_max),
            one_sided: self.one_sided || file.one_sided,
            eps: self.eps.or(file.eps),
            sigma: self.sigma.or(file.sigma),
            config: None,
            list_presets: self.list_presets,
        })
    }

    fn s(&self) -> f64 {
        self.s.unwrap_or(2.0)
    }

    fn order(&self) -> usize {
        self.order.unwrap_or(2) as usize
    }

    fn format(&self) -> ReportFormat {
        match self.format.unwrap_or(Format::Csv) {
            Format::Csv => ReportFormat::Csv,
            Format::Json => ReportFormat::Json,
        }
    }

    fn quad(&self) -> QuadOptions {
        QuadOptions {
            budget: self.budget.unwrap_or(DEFAULT_BUDGET),
            ..QuadOptions::with_tol(self.tol.unwrap_or(1e-10))
        }
    }

    fn k_grid(&self) -> Result<Vec<f64>> {
        if let Some(ks) = &self.k {
            return Ok(ks.clone());
        }
        geometric_grid(
            self.k_min.unwrap_or(4.0),
            self.k_max.unwrap_or(16.0),
            self.k_count.unwrap_or(3),
        )
    }

    fn preset(&self) -> Result<Preset> {
        match (&self.preset, &self.spec, &self.hessian) {
            (Some(name), None, None) => preset_by_name(name),
            (None, Some(text), None) => Preset::from_spec1d("custom", ExpansionSpec1D::from_json(&load(text)?)?),
            (None, None, Some(text)) => Preset::from_hessian("custom", HessianModel::from_json(&load(text)?)?),
            (None, None, None) => Err(Error::Config("one of --preset, --spec or --hessian is required".into())),
            _ => Err(Error::Config("--preset, --spec and --hessian are mutually exclusive".into())),
        }
    }

    fn spec1d(&self) -> Result<ExpansionSpec1D> {
        let p = self.preset()?;
        p.spec1d
            .ok_or_else(|| Error::Config(format!("preset {} has no 1D expansion spec", p.name)))
    }

    fn direction(&self, d: usize) -> Result<Vec<f64>> {
        unit_direction(d, self.k_dir.as_deref())
    }
}

/// Inline JSON if it looks like an object, otherwise a file path.
fn load(text: &str) -> Result<String> {
    if text.trim_start().starts_with('{') {
        return Ok(text.to_string());
    }
    std::fs::read_to_string(text).map_err(|e| Error::Io {
        path: text.to_string(),
        message: e.to_string(),
    })
}

fn write_out(text: &str, out: Option<&PathBuf>) -> Result<()> {
    match out {
        Some(p) => std::fs::write(p, text).map_err(|e| Error::Io {
            path: p.display().to_string(),
            message: e.to_string(),
        }),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn to_json<T: Serialize>(v: &T) -> Result<String> {
    serde_json::to_string_pretty(v)
        .map(|s| s + "\n")
        .map_err(|e| Error::Numerical(e.to_string()))
}

fn num(x: f64) -> String {
    format!("{x:.16e}")
}

/// Finished normally, or some oracle row did not converge.
enum Outcome {
    Done,
    NotConverged,
}

#[derive(Serialize)]
struct ValueRow {
    k: f64,
    value: lfasym::Complex64,
    #[serde(skip_serializing_if = "Option::is_none")]
    converged: Option<bool>,
}

fn value_table(rows: &[ValueRow], args: &Common, prefix: &str) -> Result<()> {
    let text = match args.format() {
        ReportFormat::Json => to_json(&rows)?,
        ReportFormat::Csv => {
            let mut t = format!("k,re_{prefix},im_{prefix}");
            if rows.iter().any(|r| r.converged.is_some()) {
                t.push_str(",converged");
            }
            t.push('\n');
            for r in rows {
                t += &format!("{},{},{}", num(r.k), num(r.value.re), num(r.value.im));
                if let Some(c) = r.converged {
                    t += &format!(",{c}");
                }
                t.push('\n');
            }
            t
        }
    };
    write_out(&text, args.out.as_ref())
}

fn run(command: Command) -> Result<Outcome> {
    let (args, which) = match command {
        Command::Asym1d(a) => (a, "asym1d"),
        Command::Asymnd(a) => (a, "asymnd"),
        Command::Oracle(a) => (a, "oracle"),
        Command::Sweep(a) => (a, "sweep"),
        Command::Symbols(a) => (a, "symbols"),
        Command::DecayFit(a) => (a, "decay-fit"),
        Command::DomainExt(a) => (a, "domain-ext"),
    };
    if args.list_presets {
        println!("{}", preset_names().join("\n"));
        return Ok(Outcome::Done);
    }
    let args = args.merged()?;
    match which {
        "asym1d" => {
            let spec = args.spec1d()?;
            let preset = Preset::from_spec1d("custom", spec)?;
            let rows = args
                .k_grid()?
                .into_iter()
                .map(|k| {
                    Ok(ValueRow {
                        k,
                        value: asymptotic_value(&preset, args.s(), k, &[1.0], args.order())?,
                        converged: None,
                    })
                })
                .collect::<Result<Vec<_>>>()?;
            value_table(&rows, &args, "asym")?;
        }
        "asymnd" => {
            let preset = args.preset()?;
            if preset.hessian.is_none() {
                return Err(Error::Config(format!("preset {} has no Hessian model", preset.name)));
            }
            let dir = args.direction(preset.d)?;
            let rows = args
                .k_grid()?
                .into_iter()
                .map(|k| {
                    let kv: Vec<f64> = dir.iter().map(|u| u * k).collect();
                    Ok(ValueRow {
                        k,
                        value: lfasym::multidim::asym_p_nd(preset.hessian.as_ref().unwrap(), args.s(), &kv)?,
                        converged: None,
                    })
                })
                .collect::<Result<Vec<_>>>()?;
            value_table(&rows, &args, "asym")?;
        }
        "oracle" => {
            let preset = args.preset()?;
            let dir = args.direction(preset.d)?;
            let opts = args.quad();
            let rows = args
                .k_grid()?
                .into_iter()
                .map(|k| {
                    let (value, c) = oracle_value(&preset, args.s(), k, &dir, &opts)?;
                    Ok(ValueRow {
                        k,
                        value,
                        converged: Some(c),
                    })
                })
                .collect::<Result<Vec<_>>>()?;
            let ok = rows.iter().all(|r| r.converged == Some(true));
            value_table(&rows, &args, "oracle")?;
            if !ok {
                return Ok(Outcome::NotConverged);
            }
        }
        "sweep" => {
            let preset = args.preset()?;
            let cfg = SweepConfig {
                s: args.s(),
                k_grid: args.k_grid()?,
                k_dir: args.k_dir.clone(),
                order: args.order(),
                tol: args.tol.unwrap_or(1e-10),
                budget: args.budget.unwrap_or(DEFAULT_BUDGET),
            };
            let rows = run_sweep(&preset, &cfg)?;
            emit_report(&rows, args.format(), args.out.as_deref())?;
            if rows.iter().any(|r| !r.oracle_converged) {
                return Ok(Outcome::NotConverged);
            }
        }
        "symbols" => {
            let spec = args.spec1d()?;
            let lambda = args
                .lambda
                .ok_or_else(|| Error::Config("symbols needs --lambda".into()))?;
            let mut all = Vec::new();
            for k in args.k_grid()? {
                all.extend(symbol_table(&spec, args.m_max.unwrap_or(2), lambda, k, args.one_sided)?);
            }
            let text = match args.format() {
                ReportFormat::Json => to_json(&all)?,
                ReportFormat::Csv => {
                    let mut t = String::from("m,lambda,k,re,im,ratio_to_previous\n");
                    for r in &all {
                        let ratio = r.ratio_to_previous.map(num).unwrap_or_default();
                        t += &format!(
                            "{},{},{},{},{},{ratio}\n",
                            r.m,
                            num(r.lambda),
                            num(r.k),
                            num(r.value.re),
                            num(r.value.im)
                        );
                    }
                    t
                }
            };
            write_out(&text, args.out.as_ref())?;
        }
        "decay-fit" => {
            let spec = args.spec1d()?;
            let fits = decay_fit(&spec, args.s(), &args.k_grid()?, args.m_max.unwrap_or(2), args.one_sided)?;
            let text = match args.format() {
                ReportFormat::Json => to_json(&fits)?,
                ReportFormat::Csv => {
                    let mut t = String::from("m,slope,expected\n");
                    for f in &fits {
                        let slope = f.slope.map(num).unwrap_or_default();
                        t += &format!("{},{slope},{}\n", f.m, num(f.expected));
                    }
                    t
                }
            };
            write_out(&text, args.out.as_ref())?;
        }
        "domain-ext" => {
            let preset = args.preset()?;
            let cfg = DomainExtConfig {
                s: args.s(),
                k_grid: args.k_grid()?,
                k_dir: args.k_dir.clone(),
                eps: args.eps.unwrap_or(1.0),
                sigma: args.sigma,
                tol: args.tol.unwrap_or(1e-10),
                budget: args.budget.unwrap_or(DEFAULT_BUDGET),
            };
            let report = domain_extension(&preset, &cfg)?;
            let text = match args.format() {
                ReportFormat::Json => to_json(&report)?,
                ReportFormat::Csv => {
                    let mut t = String::from("k,s,re_asym,im_asym,re_oracle,im_oracle,abs_err,rel_err,tail_bound,log_ratio\n");
                    for r in &report.rows {
                        let w = &r.row;
                        let cols = [
                            w.k, w.s, w.p_asym.re, w.p_asym.im, w.p_oracle.re, w.p_oracle.im,
                            w.abs_err, w.rel_err, r.tail_bound, r.log_ratio,
                        ];
                        t += &cols.iter().map(|&v| num(v)).collect::<Vec<_>>().join(",");
                        t.push('\n');
                    }
                    t
                }
            };
            write_out(&text, args.out.as_ref())?;
            eprintln!(
                "sigma(eps={}) = {:.6} (used {:.6}), log-ratio slope = {}, rel_err decreasing = {}",
                cfg.eps,
                report.sigma_check.value,
                report.sigma_used,
                report.log_ratio_slope.map(|s| format!("{s:.6}")).unwrap_or_else(|| "n/a".into()),
                report.rel_err_decreasing
            );
            if report.rows.iter().any(|r| !r.row.oracle_converged) {
                return Ok(Outcome::NotConverged);
            }
        }
        _ => unreachable!(),
    }
    Ok(Outcome::Done)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(Outcome::Done) => ExitCode::SUCCESS,
        Ok(Outcome::NotConverged) => {
            eprintln!("lfasym: oracle did not converge for at least one row");
            ExitCode::from(3)
        }
        Err(e) => {
            eprintln!("lfasym: {e}");
            ExitCode::from(2)
        }
    }
}
