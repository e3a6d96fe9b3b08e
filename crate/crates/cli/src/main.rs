use std::fs::File;
use std::io::{self, BufWriter, Read, Write};
use std::path::PathBuf;
use std::process::ExitCode;
use std::str::FromStr;
use std::time::{SystemTime, UNIX_EPOCH};

use clap::{Args, Parser, Subcommand, ValueEnum};
use mlcalc::measure::sample_measure;
use mlcalc::operators::{mehler_baseline, mehler_exp, mehler_semigroup_defect, symbol, OperatorRep};
use mlcalc::special::{m_wright, mittag_leffler, mittag_leffler_general};
use mlcalc::verify::{self, Status, Suite, VerifyConfig};
use mlcalc::MLParams;
use num_complex::Complex64;

mod table;

use table::{Cell, Table};

const EXIT_FAIL: u8 = 1;
const EXIT_USAGE: u8 = 2;

#[derive(Debug, Parser)]
#[command(name = "mlcalc", version, about = "Mittag-Leffler analysis engine: special functions, chaos calculus, operators and Monte Carlo checks")]
struct Cli {
    #[command(flatten)]
    run: RunConfig,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, Args)]
struct RunConfig {
    /// Mittag-Leffler order, 0 < beta <= 1.
    #[arg(long, global = true, default_value_t = 0.5)]
    beta: f64,
    #[arg(long, global = true, default_value_t = 2)]
    dim: usize,
    /// Chaos truncation degree N.
    #[arg(long, global = true, default_value_t = 8)]
    trunc: usize,
    #[arg(long, global = true, default_value_t = 1)]
    seed: u64,
    /// Monte Carlo sample count.
    #[arg(long, global = true, default_value_t = 100_000)]
    samples: usize,
    /// Output file; stdout when absent.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,
    /// Worker threads; results do not depend on this.
    #[arg(long, global = true)]
    threads: Option<usize>,
    /// Omit the timestamp so that reports are byte-identical across runs.
    #[arg(long, global = true)]
    deterministic: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Tabulate E_beta(z), E_{beta,beta}(z) and M_beta(|z|).
    MlEval {
        /// Real grid `start:end:count`; repeatable.
        #[arg(long, value_parser = parse_grid)]
        grid: Vec<Grid>,
        /// Single complex point such as `1.5-0.5i`; repeatable.
        #[arg(long, value_parser = parse_complex, allow_hyphen_values = true)]
        z: Vec<Complex64>,
    },
    /// Run verification suites and print a JSON report.
    Verify {
        #[arg(long, default_value = "all", value_parser = parse_suite)]
        suite: Suite,
    },
    /// Evaluate an operator symbol over a grid of (xi, eta) pairs.
    SymbolGrid {
        /// Operator JSON file, or `-` for stdin.
        #[arg(long)]
        op: String,
        /// Comma-separated complex vector; repeatable. Defaults to a small grid.
        #[arg(long, value_parser = parse_vector, allow_hyphen_values = true)]
        xi: Vec<Vec<Complex64>>,
        #[arg(long, value_parser = parse_vector, allow_hyphen_values = true)]
        eta: Vec<Vec<Complex64>>,
    },
    /// Mehler semigroup values and defects on a (t, s) grid.
    Mehler {
        #[arg(long, value_delimiter = ',', default_value = "0,0.25,0.5,1")]
        t: Vec<f64>,
        #[arg(long, value_delimiter = ',', default_value = "0,0.25,0.5,1")]
        s: Vec<f64>,
        /// Real test vector; defaults to the first unit vector.
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
        xi: Vec<f64>,
        /// Evaluation point; defaults to the origin.
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
        y: Vec<f64>,
    },
    /// Draw samples from the Mittag-Leffler measure.
    Sample,
}

#[derive(Debug, Clone, Copy, PartialEq)]
struct Grid {
    start: f64,
    end: f64,
    count: usize,
}

impl Grid {
    fn points(&self) -> impl Iterator<Item = f64> + '_ {
        let step = if self.count > 1 { (self.end - self.start) / (self.count - 1) as f64 } else { 0.0 };
        (0..self.count).map(move |i| self.start + step * i as f64)
    }
}

fn parse_grid(s: &str) -> Result<Grid, String> {
    let parts: Vec<&str> = s.split(':').collect();
    let [a, b, n] = parts[..] else {
        return Err(format!("expected start:end:count, got '{s}'"));
    };
    let num = |x: &str| x.trim().parse::<f64>().map_err(|e| format!("'{x}': {e}"));
    let count = n.trim().parse::<usize>().map_err(|e| format!("'{n}': {e}"))?;
    Ok(Grid { start: num(a)?, end: num(b)?, count })
}

fn parse_complex(s: &str) -> Result<Complex64, String> {
    Complex64::from_str(s.trim()).map_err(|e| format!("'{s}': {e}"))
}

fn parse_vector(s: &str) -> Result<Vec<Complex64>, String> {
    s.split(',').map(parse_complex).collect()
}

fn parse_suite(s: &str) -> Result<Suite, String> {
    Suite::from_str(s).map_err(|e| e.to_string())
}

#[derive(Debug)]
enum Failure {
    /// Usage, domain or I/O problem.
    Usage(String),
    /// The command ran but an asserted check failed.
    Check(String),
}

impl From<mlcalc::Error> for Failure {
    fn from(e: mlcalc::Error) -> Self {
        Failure::Usage(e.to_string())
    }
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Failure::Usage(e.to_string())
    }
}

impl From<csv::Error> for Failure {
    fn from(e: csv::Error) -> Self {
        Failure::Usage(e.to_string())
    }
}

impl From<serde_json::Error> for Failure {
    fn from(e: serde_json::Error) -> Self {
        Failure::Usage(e.to_string())
    }
}

type Outcome = Result<(), Failure>;

impl RunConfig {
    fn params(&self) -> Result<MLParams, Failure> {
        Ok(MLParams::new(self.beta)?)
    }

    fn validate(&self) -> Outcome {
        self.params()?;
        if self.dim == 0 {
            return Err(Failure::Usage("--dim must be positive".into()));
        }
        if self.threads == Some(0) {
            return Err(Failure::Usage("--threads must be positive".into()));
        }
        Ok(())
    }

    fn verify_config(&self) -> VerifyConfig {
        VerifyConfig { beta: self.beta, dim: self.dim, trunc: self.trunc, seed: self.seed, samples: self.samples }
    }

    fn sink(&self) -> io::Result<Box<dyn Write>> {
        Ok(match &self.out {
            Some(p) => Box::new(BufWriter::new(File::create(p)?)),
            None => Box::new(BufWriter::new(io::stdout().lock())),
        })
    }

    fn emit_json<T: serde::Serialize>(&self, value: &T) -> Outcome {
        let mut w = self.sink()?;
        serde_json::to_writer_pretty(&mut w, value)?;
        writeln!(w)?;
        w.flush()?;
        Ok(())
    }

    fn emit_table(&self, table: &Table) -> Outcome {
        match self.format {
            Format::Json => self.emit_json(table),
            Format::Csv => {
                let mut w = self.sink()?;
                table.write_csv(&mut w)?;
                w.flush()?;
                Ok(())
            }
        }
    }
}

fn ml_eval(run: &RunConfig, grid: &[Grid], z: &[Complex64]) -> Outcome {
    let p = run.params()?;
    let default = [Grid { start: -2.0, end: 2.0, count: 9 }];
    let grid = if grid.is_empty() && z.is_empty() { &default[..] } else { grid };
    let points: Vec<Complex64> = grid.iter().flat_map(|g| g.points().map(|x| Complex64::new(x, 0.0))).chain(z.iter().copied()).collect();
    let mut t = Table::new(&["z_re", "z_im", "ml_re", "ml_im", "ml_beta_beta_re", "ml_beta_beta_im", "m_wright_abs_z"]);
    for z in points {
        let e = mittag_leffler(&p, z)?;
        let eb = mittag_leffler_general(&p, p.beta, z)?;
        // M_1 is a point mass at 1
        let m = if p.beta < 1.0 { Some(m_wright(&p, z.norm())?) } else { None };
        t.push(vec![z.re.into(), z.im.into(), e.re.into(), e.im.into(), eb.re.into(), eb.im.into(), m.into()]);
    }
    run.emit_table(&t)
}

fn verify_cmd(run: &RunConfig, suite: Suite) -> Outcome {
    let cfg = run.verify_config();
    let mut report = verify::run(suite, &cfg)?;
    if !run.deterministic {
        report.timestamp = SystemTime::now().duration_since(UNIX_EPOCH).ok().map(|d| d.as_secs());
    }
    match run.format {
        Format::Json => run.emit_json(&report)?,
        Format::Csv => {
            let mut t = Table::new(&["name", "status", "lhs", "rhs", "tol", "sigmas", "reference", "note"]);
            for c in &report.checks {
                let v = |x: &verify::Value| Cell::Text(serde_json::to_string(x).unwrap_or_default());
                t.push(vec![
                    c.name.clone().into(),
                    format!("{:?}", c.status).to_lowercase().into(),
                    v(&c.lhs),
                    v(&c.rhs),
                    c.tol.into(),
                    c.sigmas.into(),
                    c.reference.clone().into(),
                    c.note.clone().unwrap_or_default().into(),
                ]);
            }
            run.emit_table(&t)?;
        }
    }
    let weak = report.count(Status::Underpowered);
    if weak > 0 {
        eprintln!("warning: {weak} statistical checks are underpowered at {} samples", cfg.samples);
    }
    if report.passed() {
        Ok(())
    } else {
        let names: Vec<&str> = report.failures().map(|c| c.name.as_str()).collect();
        Err(Failure::Check(format!("{} checks failed: {}", names.len(), names.join(", "))))
    }
}

fn read_operator(src: &str) -> Result<OperatorRep, Failure> {
    let mut text = String::new();
    if src == "-" {
        io::stdin().read_to_string(&mut text)?;
    } else {
        File::open(src)?.read_to_string(&mut text)?;
    }
    serde_json::from_str(&text).map_err(|e| Failure::Usage(format!("operator: {e}")))
}

/// Default points: multiples of a fixed direction, real and imaginary.
fn default_points(dim: usize, shift: usize) -> Vec<Vec<Complex64>> {
    let dir: Vec<Complex64> = (0..dim).map(|i| Complex64::new(if (i + shift).is_multiple_of(2) { 1.0 } else { -0.5 }, 0.0)).collect();
    let scale = 0.2 / (dim as f64).sqrt();
    [0.5, 1.0, -1.0]
        .into_iter()
        .map(|a| dir.iter().map(|x| x * a * scale).collect())
        .chain(std::iter::once(dir.iter().map(|x| x * Complex64::new(0.0, scale)).collect()))
        .collect()
}

fn format_vector(v: &[Complex64]) -> String {
    let one = |z: &Complex64| if z.im == 0.0 { format!("{}", z.re) } else { format!("{}{:+}i", z.re, z.im) };
    v.iter().map(one).collect::<Vec<_>>().join(";")
}

fn symbol_grid(run: &RunConfig, src: &str, xis: &[Vec<Complex64>], etas: &[Vec<Complex64>]) -> Outcome {
    let op = read_operator(src)?;
    let xis = if xis.is_empty() { default_points(op.dim, 0) } else { xis.to_vec() };
    let etas = if etas.is_empty() { default_points(op.dim, 1) } else { etas.to_vec() };
    let mut t = Table::new(&[
        "xi", "eta", "symbol_re", "symbol_im", "s_path_re", "s_path_im", "closed_re", "closed_im", "exp_pairing_re",
        "exp_pairing_im", "ratio_re", "ratio_im",
    ]);
    for xi in &xis {
        for eta in &etas {
            let s = symbol(&op, xi, eta, run.trunc)?;
            let ratio = s.path_a / s.exp_pairing;
            t.push(vec![
                format_vector(xi).into(),
                format_vector(eta).into(),
                s.path_a.re.into(),
                s.path_a.im.into(),
                s.path_b.re.into(),
                s.path_b.im.into(),
                s.closed_form.map(|c| c.re).into(),
                s.closed_form.map(|c| c.im).into(),
                s.exp_pairing.re.into(),
                s.exp_pairing.im.into(),
                ratio.re.into(),
                ratio.im.into(),
            ]);
        }
    }
    run.emit_table(&t)
}

fn mehler_cmd(run: &RunConfig, ts: &[f64], ss: &[f64], xi: &[f64], y: &[f64]) -> Outcome {
    let p = run.params()?;
    let xi = if xi.is_empty() { (0..run.dim).map(|i| if i == 0 { 1.0 } else { 0.0 }).collect() } else { xi.to_vec() };
    let y = if y.is_empty() { vec![0.0; xi.len()] } else { y.to_vec() };
    let q: f64 = xi.iter().map(|x| x * x).sum();
    let base = mehler_baseline()?;
    let use_base = base.beta == p.beta && (base.q - q).abs() <= 1e-12;
    let mut t = Table::new(&["t", "s", "p_t_re", "p_t_im", "defect", "baseline_defect"]);
    for &tv in ts {
        for &sv in ss {
            let v = mehler_exp(&p, tv, &y, &xi)?;
            let d = mehler_semigroup_defect(&p, tv, sv, &xi)?;
            let b = if use_base { base.lookup(tv, sv) } else { None };
            t.push(vec![tv.into(), sv.into(), v.re.into(), v.im.into(), d.into(), b.into()]);
        }
    }
    run.emit_table(&t)
}

fn sample_cmd(run: &RunConfig) -> Outcome {
    let batch = sample_measure(&run.params()?, run.dim, run.samples, run.seed)?;
    match run.format {
        Format::Json => run.emit_json(&batch),
        Format::Csv => {
            let mut w = run.sink()?;
            batch.write_csv(&mut w)?;
            w.flush()?;
            Ok(())
        }
    }
}

fn dispatch(cli: &Cli) -> Outcome {
    let run = &cli.run;
    run.validate()?;
    if let Some(n) = run.threads {
        rayon::ThreadPoolBuilder::new().num_threads(n).build_global().map_err(|e| Failure::Usage(e.to_string()))?;
    }
    match &cli.command {
        Command::MlEval { grid, z } => ml_eval(run, grid, z),
        Command::Verify { suite } => verify_cmd(run, *suite),
        Command::SymbolGrid { op, xi, eta } => symbol_grid(run, op, xi, eta),
        Command::Mehler { t, s, xi, y } => mehler_cmd(run, t, s, xi, y),
        Command::Sample => sample_cmd(run),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match dispatch(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Usage(m)) => {
            eprintln!("error: {m}");
            ExitCode::from(EXIT_USAGE)
        }
        Err(Failure::Check(m)) => {
            eprintln!("verification failed: {m}");
            ExitCode::from(EXIT_FAIL)
        }
    }
}
