use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use akx_core::closed_form::w_closed;
use akx_core::io::{parse_setfam, write_setfam};
use akx_core::rat::{check_probability, parse_rat, to_f64, Rat};
use akx_core::shifting::{format_trace, is_left_compressed, left_compress, stabilize};
use akx_core::table::{table, to_csv};
use akx_core::verify::{run_suite, Suite, DEFAULT_SEED};
use akx_core::SetFamily;
use clap::{Parser, Subcommand};

#[derive(Parser)]
#[command(name = "akx", version, about = "Exact p-biased measures of t-intersecting families")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Maximum p-biased measure w(n, t, p) of a t-intersecting family on [n].
    W {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        t: usize,
        /// Exact fraction NUM/DEN.
        #[arg(long, value_parser = parse_p)]
        p: Rat,
    },
    /// CSV of w(n, t, p) for 1 <= t <= tmax on a grid plus every breakpoint.
    Table {
        #[arg(long, default_value_t = 20)]
        n: usize,
        #[arg(long, default_value_t = 5)]
        tmax: usize,
        #[arg(long, default_value_t = 200)]
        grid: usize,
        /// Output file; stdout when absent.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run a verification suite, one line per check.
    Verify {
        #[arg(long, value_parser = parse_suite)]
        suite: Suite,
        #[arg(long, default_value_t = DEFAULT_SEED)]
        seed: u64,
    },
    /// Left-compress a SETFAM file.
    Compress {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long)]
        out: PathBuf,
        /// Write the applied (i, j) shifts here.
        #[arg(long)]
        trace: Option<PathBuf>,
        /// Report the measure before and after at this p.
        #[arg(long, value_parser = parse_p)]
        p: Option<Rat>,
    },
    /// Shift a t-intersecting SETFAM family until it is fully stable.
    Stabilize {
        #[arg(long)]
        t: usize,
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long)]
        out: PathBuf,
        #[arg(long, value_parser = parse_p)]
        p: Option<Rat>,
    },
}

fn parse_p(s: &str) -> Result<Rat, String> {
    let p = parse_rat(s).map_err(|e| e.to_string())?;
    check_probability(&p).map_err(|e| e.to_string())?;
    Ok(p)
}

fn parse_suite(s: &str) -> Result<Suite, String> {
    s.parse().map_err(|e: akx_core::Error| e.to_string())
}

enum Failure {
    Usage(String),
    Verification,
}

impl<E: std::fmt::Display> From<E> for Failure {
    fn from(e: E) -> Failure {
        Failure::Usage(e.to_string())
    }
}

fn read_family(path: &Path) -> Result<SetFamily, Failure> {
    let text = fs::read_to_string(path).map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))?;
    parse_setfam(&text).map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))
}

fn write_file(path: &Path, text: &str) -> Result<(), Failure> {
    fs::write(path, text).map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))
}

fn show(x: &Rat) -> String {
    format!("{x} ({})", to_f64(x))
}

fn report_measures(before: &SetFamily, after: &SetFamily, p: &Option<Rat>) -> Result<(), Failure> {
    if let Some(p) = p {
        println!("measure before: {}", show(&before.measure(p)?));
        println!("measure after:  {}", show(&after.measure(p)?));
    }
    Ok(())
}

fn check_line(name: &str, ok: bool) -> bool {
    println!("{} {name}", if ok { "PASS" } else { "FAIL" });
    ok
}

fn run(cli: Cli) -> Result<(), Failure> {
    match cli.command {
        Command::W { n, t, p } => {
            let w = w_closed(n, t, &p)?;
            let rs: Vec<String> = w.optimal_r.iter().map(|r| r.to_string()).collect();
            println!("{} r={{{}}} regime={}", show(&w.value), rs.join(","), w.regime);
        }
        Command::Table { n, tmax, grid, out } => {
            let csv = to_csv(&table(n, tmax, grid)?);
            match out {
                Some(path) => write_file(&path, &csv)?,
                None => print!("{csv}"),
            }
        }
        Command::Verify { suite, seed } => {
            let checks = run_suite(suite, seed);
            for c in &checks {
                println!("{}", c.line());
            }
            let passed = checks.iter().filter(|c| c.passed).count();
            println!("summary suite={suite} passed={passed} total={}", checks.len());
            if passed != checks.len() {
                return Err(Failure::Verification);
            }
        }
        Command::Compress { input, out, trace, p } => {
            let f = read_family(&input)?;
            let (g, steps) = left_compress(&f);
            write_file(&out, &write_setfam(&g))?;
            if let Some(path) = trace {
                write_file(&path, &format_trace(&steps))?;
            }
            println!("shifts applied: {}", steps.len());
            report_measures(&f, &g, &p)?;
            if !check_line("left-compressed", is_left_compressed(&g)) {
                return Err(Failure::Verification);
            }
        }
        Command::Stabilize { t, input, out, p } => {
            let f = read_family(&input)?;
            let g = stabilize(&f, t)?;
            write_file(&out, &write_setfam(&g))?;
            report_measures(&f, &g, &p)?;
            let ms = g.members();
            let bound = g.n() + t;
            let sizes = ms.iter().all(|a| ms.iter().all(|b| (a.count_ones() + b.count_ones()) as usize + 1 >= bound));
            let intersecting = check_line(&format!("{t}-intersecting"), g.is_t_intersecting(t));
            if !(check_line("|A|+|B| >= n+t-1", sizes) && intersecting) {
                return Err(Failure::Verification);
            }
        }
    }
    Ok(())
}

fn configure_threads() -> Result<(), String> {
    let Ok(v) = std::env::var("AKX_THREADS") else {
        return Ok(());
    };
    let n: usize = v.trim().parse().map_err(|_| format!("AKX_THREADS must be a positive integer, got {v:?}"))?;
    if n == 0 {
        return Err("AKX_THREADS must be positive".into());
    }
    rayon::ThreadPoolBuilder::new().num_threads(n).build_global().map_err(|e| e.to_string())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Err(msg) = configure_threads() {
        eprintln!("error: {msg}");
        return ExitCode::from(2);
    }
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Verification) => ExitCode::from(1),
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}
