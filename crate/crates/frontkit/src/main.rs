use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use frontkit::arith::parse_rat;
use frontkit::cli::{
    emit_front, preset_example1, preset_example2, run_analyze, AnalysisConfig, FrontFormat,
};

/// Exact symbolic analysis of wave fronts: discriminants of tame polynomial
/// families and free / almost-free divisor verdicts at focal points.
#[derive(Parser)]
#[command(name = "frontkit", version)]
struct Cli {
    /// Directory for emitted files (report.json, front.csv / front.svg).
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run the analysis pipeline on a JSON config file.
    Analyze { config: PathBuf },
    /// Planar quartic preset a z^2 + z^4 at its focal point.
    Example1 {
        /// Front parameter a (rational, e.g. 2 or 1/2).
        #[arg(long, default_value = "2")]
        a: String,
    },
    /// Paraboloid preset -(k1 z1^2 + k2 z2^2)/2 at its focal point.
    Example2 {
        #[arg(long, default_value = "1")]
        k1: String,
        #[arg(long, default_value = "2")]
        k2: String,
    },
    /// Sample front curves of a configured initial surface.
    Front {
        config: PathBuf,
        /// Comma-separated times (rational or decimal), e.g. 1/2,0.55.
        #[arg(long, value_delimiter = ',', required = true)]
        t: Vec<String>,
        #[arg(long, default_value = "csv")]
        format: String,
    },
    /// Run the acceptance-criteria suite.
    Selftest,
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            // clap help/version output is not an error.
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(code) => code,
        Err(msg) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
    }
}

fn run(cli: Cli) -> Result<ExitCode, String> {
    match cli.command {
        Command::Analyze { config } => {
            let text = std::fs::read_to_string(&config)
                .map_err(|e| format!("cannot read {}: {e}", config.display()))?;
            let parsed = AnalysisConfig::from_json(&text).map_err(|e| e.to_string())?;
            analyze_and_report(&parsed, cli.out.as_deref())
        }
        Command::Example1 { a } => {
            let a = parse_rat(&a).map_err(|e| format!("bad --a: {e}"))?;
            analyze_and_report(&preset_example1(&a), cli.out.as_deref())
        }
        Command::Example2 { k1, k2 } => {
            let k1 = parse_rat(&k1).map_err(|e| format!("bad --k1: {e}"))?;
            let k2 = parse_rat(&k2).map_err(|e| format!("bad --k2: {e}"))?;
            analyze_and_report(&preset_example2(&k1, &k2), cli.out.as_deref())
        }
        Command::Front { config, t, format } => {
            let text = std::fs::read_to_string(&config)
                .map_err(|e| format!("cannot read {}: {e}", config.display()))?;
            let parsed = AnalysisConfig::from_json(&text).map_err(|e| e.to_string())?;
            let format: FrontFormat = format.parse()?;
            let t_values = t
                .iter()
                .map(|s| parse_time(s))
                .collect::<Result<Vec<_>, _>>()?;
            let (name, contents) =
                emit_front(&parsed, &t_values, format).map_err(|e| e.to_string())?;
            let path = cli.out.unwrap_or_else(|| PathBuf::from(".")).join(name);
            if let Some(dir) = path.parent() {
                std::fs::create_dir_all(dir).map_err(|e| e.to_string())?;
            }
            std::fs::write(&path, contents).map_err(|e| e.to_string())?;
            println!("wrote {}", path.display());
            Ok(ExitCode::SUCCESS)
        }
        Command::Selftest => {
            let results = frontkit::selftest::run_all();
            let mut all_passed = true;
            for r in &results {
                let status = if r.passed { "pass" } else { "FAIL" };
                println!(
                    "criterion {}: {status} ({:.1}s) {} — {}",
                    r.id,
                    r.elapsed.as_secs_f64(),
                    r.name,
                    r.details
                );
                all_passed &= r.passed;
            }
            Ok(if all_passed {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(2)
            })
        }
    }
}

fn analyze_and_report(
    config: &AnalysisConfig,
    out: Option<&std::path::Path>,
) -> Result<ExitCode, String> {
    let report = run_analyze(config).canonical();
    let json = report.to_json();
    println!("{json}");
    if let Some(dir) = out {
        std::fs::create_dir_all(dir).map_err(|e| e.to_string())?;
        std::fs::write(dir.join("report.json"), format!("{json}\n")).map_err(|e| e.to_string())?;
    }
    Ok(if report.error.is_some() {
        ExitCode::from(2)
    } else {
        ExitCode::SUCCESS
    })
}

fn parse_time(text: &str) -> Result<f64, String> {
    if text.contains('/') {
        let r = parse_rat(text).map_err(|e| format!("bad time {text:?}: {e}"))?;
        let num: f64 = r.numer().to_string().parse().map_err(|e| format!("{e}"))?;
        let den: f64 = r.denom().to_string().parse().map_err(|e| format!("{e}"))?;
        Ok(num / den)
    } else {
        text.parse::<f64>()
            .map_err(|e| format!("bad time {text:?}: {e}"))
    }
}
