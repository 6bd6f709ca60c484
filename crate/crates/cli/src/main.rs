use std::io::{self, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::Parser;

use chevcalc_cli::config::{from_pairs, read_config_file, Command, Format, RepChoice};
use chevcalc_cli::{catalog, run, select, write_atomic, CliError, RunReport};

/// Exact experiments on Chevalley groups over commutative rings.
///
/// Exit codes: 0 success, 1 verification failure, 2 configuration error,
/// 3 cap exceeded.
#[derive(Parser, Debug)]
#[command(name = "chevcalc", version)]
struct Args {
    #[arg(long, value_enum)]
    command: Option<Command>,
    /// Root system such as A2, B2 or G2.
    #[arg(long)]
    system: Option<String>,
    /// Ring description such as `Z/12`, `Z/3[u]/(u^2)` or `Z[s,t,a,b] loc st`.
    #[arg(long)]
    ring: Option<String>,
    /// Comma-separated generators of one ideal; repeat for several ideals.
    #[arg(long)]
    ideal: Vec<String>,
    #[arg(long = "rep", value_enum)]
    representation: Option<RepChoice>,
    /// Root in simple-root coordinates, e.g. `1,0`.
    #[arg(long, allow_hyphen_values = true)]
    alpha: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    beta: Option<String>,
    #[arg(long)]
    p: Option<u32>,
    #[arg(long)]
    q: Option<u32>,
    #[arg(long)]
    h: Option<u32>,
    #[arg(long)]
    k: Option<u32>,
    #[arg(long)]
    m: Option<u32>,
    /// Largest congruence exponent tried by thm2.
    #[arg(long)]
    r: Option<u32>,
    /// Denominator element for thm2 and thm8.
    #[arg(long)]
    s: Option<String>,
    /// Largest subgroup order enumerated.
    #[arg(long)]
    cap: Option<usize>,
    /// Largest number of pairs scanned exhaustively by width.
    #[arg(long)]
    pair_cap: Option<u64>,
    /// Sample count for normality, or per-relation samples for steinberg.
    #[arg(long)]
    samples: Option<usize>,
    /// Largest exponent of the audit grid.
    #[arg(long)]
    grid: Option<u32>,
    #[arg(long)]
    seed: Option<u64>,
    /// Run without the thread pool.
    #[arg(long)]
    sequential: bool,
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_enum)]
    format: Option<Format>,
    /// File of `key=value` settings; command-line flags take precedence.
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long)]
    list_scenarios: bool,
    /// Scenario id, id prefix such as `verify4c`, or `all`.
    #[arg(long)]
    scenario: Option<String>,
}

impl Args {
    fn flag_pairs(&self) -> Vec<(String, String)> {
        let mut out = Vec::new();
        let mut put = |k: &str, v: Option<String>| {
            if let Some(v) = v {
                out.push((k.to_string(), v));
            }
        };
        put("command", self.command.map(|c| c.name().to_string()));
        put("system", self.system.clone());
        put("ring", self.ring.clone());
        put("rep", self.representation.map(|r| format!("{r:?}").to_lowercase()));
        put("alpha", self.alpha.clone());
        put("beta", self.beta.clone());
        put("p", self.p.map(|v| v.to_string()));
        put("q", self.q.map(|v| v.to_string()));
        put("h", self.h.map(|v| v.to_string()));
        put("k", self.k.map(|v| v.to_string()));
        put("m", self.m.map(|v| v.to_string()));
        put("r", self.r.map(|v| v.to_string()));
        put("s", self.s.clone());
        put("cap", self.cap.map(|v| v.to_string()));
        put("pair-cap", self.pair_cap.map(|v| v.to_string()));
        put("samples", self.samples.map(|v| v.to_string()));
        put("grid", self.grid.map(|v| v.to_string()));
        put("seed", self.seed.map(|v| v.to_string()));
        put("sequential", self.sequential.then(|| "true".to_string()));
        put("out", self.out.as_ref().map(|p| p.display().to_string()));
        put("format", self.format.map(|f| format!("{f:?}").to_lowercase()));
        for i in &self.ideal {
            out.push(("ideal".to_string(), i.clone()));
        }
        out
    }
}

fn emit(text: &str, out: Option<&PathBuf>) -> Result<(), CliError> {
    match out {
        Some(path) => write_atomic(path, text),
        None => match io::stdout().lock().write_all(text.as_bytes()) {
            Err(e) if e.kind() != io::ErrorKind::BrokenPipe => Err(CliError::Io(e.to_string())),
            _ => Ok(()),
        },
    }
}

fn list_scenarios() -> Result<(), CliError> {
    let text: String = catalog()
        .iter()
        .map(|s| format!("{:<28} [{:>2}] {}\n", s.id, s.criterion, s.description))
        .collect();
    emit(&text, None)
}

fn run_scenarios(args: &Args, pattern: &str) -> Result<i32, CliError> {
    let chosen = select(pattern);
    if chosen.is_empty() {
        return Err(CliError::Config(format!("no scenario matches `{pattern}`")));
    }
    let mut reports: Vec<RunReport> = Vec::new();
    for s in &chosen {
        let mut cfg = s.config.clone();
        cfg.sequential |= args.sequential;
        let report = run(&cfg);
        eprintln!("{:<28} {:<22} {}", s.id, report.status, report.fingerprint);
        reports.push(report);
    }
    let code = reports.iter().map(|r| r.exit_code).max().unwrap_or(0);
    let text = match (reports.len(), args.format.unwrap_or(Format::Json)) {
        (1, format) => reports[0].render(format),
        (_, Format::Json) => serde_json::to_string_pretty(&reports).expect("reports serialise") + "\n",
        (_, Format::Csv) => {
            let mut s = String::from("id,status,exit_code,fingerprint\n");
            for (sc, r) in chosen.iter().zip(&reports) {
                s.push_str(&format!("{},{},{},{}\n", sc.id, r.status, r.exit_code, r.fingerprint));
            }
            s
        }
    };
    emit(&text, args.out.as_ref())?;
    Ok(code)
}

fn run_single(args: &Args) -> Result<i32, CliError> {
    let mut pairs = match &args.config {
        Some(path) => read_config_file(path)?,
        None => Vec::new(),
    };
    if !args.ideal.is_empty() {
        pairs.retain(|(k, _)| k != "ideal");
    }
    pairs.extend(args.flag_pairs());
    let cfg = from_pairs(&pairs)?;
    let report = run(&cfg);
    if report.exit_code != 0 {
        if let Some(e) = report.payload.get("error") {
            eprintln!("{}", e.as_str().unwrap_or_default());
        }
    }
    emit(&report.render(cfg.format), cfg.out.as_ref())?;
    Ok(report.exit_code)
}

fn main() -> ExitCode {
    let args = Args::parse();
    let result = if args.list_scenarios {
        list_scenarios().map(|()| 0)
    } else {
        match &args.scenario {
            Some(pattern) => run_scenarios(&args, pattern),
            None => run_single(&args),
        }
    };
    match result {
        Ok(code) => ExitCode::from(code as u8),
        Err(e) => {
            eprintln!("{e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
