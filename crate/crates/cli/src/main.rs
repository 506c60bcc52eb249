use std::fs;
use std::io::{self, BufRead, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use escher::cxe::Window;
use escher::expr::Session;
use escher::laws::{reports_to_json, resolve, run_laws, Law};
use escher::plot::{render, PlotSpec};
use escher::scalar::{parse_rational, PrecisionConfig};
use escher::EscherError;

#[derive(Parser)]
#[command(
    name = "escher",
    version,
    about = "Exact arithmetic on Escherian numbers"
)]
struct Cli {
    /// Working precision in bits for roots, logarithms and tetration.
    #[arg(long, global = true, env = "ESCHER_PRECISION_BITS")]
    precision_bits: Option<u32>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Read expressions from standard input, one per line.
    Repl(Display),
    /// Evaluate one expression.
    Eval {
        expr: String,
        #[command(flatten)]
        display: Display,
    },
    /// Fuzz registered laws.
    Check(CheckArgs),
    /// Write a pseudoorder plot as plain PPM.
    Plot(PlotArgs),
}

#[derive(Args)]
struct Display {
    /// Print ⊙, ⊘ and ς instead of their ASCII forms.
    #[arg(long)]
    unicode: bool,
    /// Significant digits for approximate values.
    #[arg(long, default_value_t = 30)]
    digits: usize,
}

#[derive(Args)]
#[group(required = true, multiple = false, id = "which")]
struct Which {
    /// Law id, e.g. `21.3`, `15.0@1`, or a family such as `15.0`.
    #[arg(long)]
    law: Vec<String>,
    /// Every registered law.
    #[arg(long)]
    all: bool,
}

#[derive(Args)]
struct CheckArgs {
    #[command(flatten)]
    which: Which,
    #[arg(long, default_value_t = 1000)]
    trials: usize,
    #[arg(long, default_value_t = 42)]
    seed: u64,
    /// Also write the reports as JSON.
    #[arg(long)]
    json: Option<PathBuf>,
}

#[derive(Args)]
struct PlotArgs {
    #[arg(long, default_value = "0")]
    center: String,
    #[arg(long, default_value = "-3", allow_hyphen_values = true)]
    re_min: String,
    #[arg(long, default_value = "3", allow_hyphen_values = true)]
    re_max: String,
    #[arg(long, default_value = "0", allow_hyphen_values = true)]
    t_min: String,
    #[arg(long, default_value = "2", allow_hyphen_values = true)]
    t_max: String,
    #[arg(long, default_value_t = 64)]
    width: usize,
    #[arg(long, default_value_t = 64)]
    height: usize,
    /// Leave out the dashed rows at the band edges.
    #[arg(long)]
    no_band_marks: bool,
    #[arg(long)]
    out: PathBuf,
}

/// Failure with the exit code it maps to.
struct Fail(u8, String);

impl From<EscherError> for Fail {
    fn from(e: EscherError) -> Self {
        let code = match e {
            EscherError::UnknownLaw(_) | EscherError::InvalidConfig(_) => 2,
            _ => 1,
        };
        Fail(code, e.to_string())
    }
}

fn config(bits: Option<u32>) -> Result<PrecisionConfig, Fail> {
    let Some(bits) = bits else {
        return Ok(PrecisionConfig::default());
    };
    let d = PrecisionConfig::default();
    PrecisionConfig::with_numeric(d.start_bits(), d.cap_bits().max(bits), bits).map_err(Fail::from)
}

fn session(cfg: PrecisionConfig, display: &Display) -> Session {
    let mut s = Session::new(cfg);
    s.unicode = display.unicode;
    s.digits = display.digits.max(1);
    s
}

fn eval(cfg: PrecisionConfig, expr: &str, display: &Display) -> Result<(), Fail> {
    let mut s = session(cfg, display);
    let out = s.eval_line(expr)?;
    for w in &out.warnings {
        eprintln!("warning: {w}");
    }
    println!("{}", out.text);
    Ok(())
}

fn repl(cfg: PrecisionConfig, display: &Display) -> Result<(), Fail> {
    let mut s = session(cfg, display);
    let stdin = io::stdin();
    let mut failed = false;
    for line in stdin.lock().lines() {
        let line = line.map_err(|e| Fail(1, e.to_string()))?;
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        match line {
            ":q" | ":quit" => break,
            ":help" => {
                println!("expressions: kis sik + - * / ^ ^^ <~ >~ =~, prefix s and -, PE2");
                println!("functions: sm alts cx root log hyper iterl iterr ack ackp zer");
                println!("commands: let name = expr, :digits N, :quit");
                continue;
            }
            _ => {}
        }
        if let Some(n) = line.strip_prefix(":digits") {
            match n.trim().parse::<usize>() {
                Ok(n) if n > 0 => s.digits = n,
                _ => eprintln!("error: :digits needs a positive integer"),
            }
            continue;
        }
        match s.eval_line(line) {
            Ok(out) => {
                for w in &out.warnings {
                    eprintln!("warning: {w}");
                }
                println!("{}", out.text);
            }
            Err(e) => {
                failed = true;
                eprintln!("error: {e}");
            }
        }
        io::stdout().flush().ok();
    }
    if failed {
        Err(Fail(1, "some lines failed".into()))
    } else {
        Ok(())
    }
}

fn check(cfg: PrecisionConfig, args: &CheckArgs) -> Result<(), Fail> {
    let laws: Vec<Law> = if args.which.all {
        escher::laws::all_laws()
    } else {
        let mut v = Vec::new();
        for id in &args.which.law {
            v.extend(resolve(id)?);
        }
        v
    };
    let reports = run_laws(&laws, args.seed, args.trials, &cfg);
    for r in &reports {
        println!("{r}");
    }
    let failed = reports.iter().filter(|r| !r.passed()).count();
    println!(
        "{} of {} laws passed",
        reports.len() - failed,
        reports.len()
    );
    if let Some(path) = &args.json {
        fs::write(path, reports_to_json(&reports) + "\n")
            .map_err(|e| Fail(1, format!("{}: {e}", path.display())))?;
    }
    if failed > 0 {
        Err(Fail(1, format!("{failed} law(s) failed")))
    } else {
        Ok(())
    }
}

fn plot(cfg: PrecisionConfig, args: &PlotArgs) -> Result<(), Fail> {
    let bound = |name: &str, text: &str| {
        parse_rational(text)
            .map_err(|_| Fail(2, format!("--{name}: `{text}` is not a rational number")))
    };
    let window = Window::new(
        bound("re-min", &args.re_min)?,
        bound("re-max", &args.re_max)?,
        bound("t-min", &args.t_min)?,
        bound("t-max", &args.t_max)?,
    )
    .map_err(|e| Fail(2, e.to_string()))?;
    if args.width == 0 || args.height == 0 {
        return Err(Fail(2, "resolution must be at least 1x1".into()));
    }
    let center = Session::new(cfg)
        .eval_line(&args.center)?
        .value
        .and_then(|v| v.principal().cloned())
        .ok_or_else(|| Fail(1, format!("centre `{}` is not an exact value", args.center)))?;
    let spec = PlotSpec {
        center,
        window,
        width: args.width,
        height: args.height,
        band_marks: !args.no_band_marks,
    };
    let raster = render(&spec, &cfg)?;
    fs::write(&args.out, raster.to_ppm())
        .map_err(|e| Fail(1, format!("{}: {e}", args.out.display())))?;
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = config(cli.precision_bits).and_then(|cfg| match &cli.command {
        Command::Repl(d) => repl(cfg, d),
        Command::Eval { expr, display } => eval(cfg, expr, display),
        Command::Check(args) => check(cfg, args),
        Command::Plot(args) => plot(cfg, args),
    });
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(Fail(code, msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(code)
        }
    }
}
