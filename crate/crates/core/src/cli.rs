//! Command-line front end. The binary is a thin wrapper around [`run`].
//!
//! Exit codes: 0 on success, 2 for parse errors (files or arguments), 3 for
//! violated preconditions, 4 when an internal invariant breaks.

use std::fmt::Write as _;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};

use crate::adaptive::{build_chain, AdaptiveConfig};
use crate::error::Error;
use crate::format::{self, MatrixFile, Orientation};
use crate::markov::{Distribution, MarkovMatrix};
use crate::matrix::RatMatrix;
use crate::perturbed::PerturbedMatrix;
use crate::rational::{self, Rational};
use crate::ssd::{ssd, SsdResult, Step};
use crate::sweep;
use crate::ClassPartition;

#[derive(Debug, Parser)]
#[command(name = "stochstab", version, about = "Exact stochastically stable distributions of perturbed Markov processes")]
pub struct Cli {
    #[command(flatten)]
    pub global: GlobalOpts,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args, Clone, Default)]
pub struct GlobalOpts {
    /// Print values as decimals with this many digits instead of exact fractions.
    #[arg(long, global = true, value_name = "K")]
    pub decimal: Option<usize>,
    /// Input matrices are row-stochastic (entry (i, j) is the probability of i -> j).
    #[arg(long, global = true)]
    pub row_stochastic: bool,
    /// Print each iteration of the solver.
    #[arg(long, global = true)]
    pub trace: bool,
    /// Machine-readable key=value output.
    #[arg(long, global = true)]
    pub machine: bool,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Communicating classes at e = 0 and for e > 0.
    Classes { file: PathBuf },
    /// Exact stable distribution, optionally at a fixed e.
    Stable {
        file: PathBuf,
        #[arg(long, value_name = "P/Q")]
        epsilon: Option<String>,
    },
    /// Quotient of the (constant part of the) matrix by a set of states.
    Quotient {
        file: PathBuf,
        /// Comma-separated 1-based states to eliminate; may be empty.
        #[arg(long, value_name = "LIST", default_value = "")]
        collapse: String,
    },
    /// Stochastically stable distribution of a matrix file, or of a game file with -m/-s.
    Ssd {
        file: PathBuf,
        #[arg(short = 'm', long = "memory")]
        memory: Option<usize>,
        #[arg(short = 's', long = "sample")]
        sample: Option<usize>,
    },
    /// Build the adaptive-play chain of a game and compute its stochastically stable distribution.
    Adaptive {
        game: PathBuf,
        #[arg(short = 'm', long = "memory")]
        memory: usize,
        #[arg(short = 's', long = "sample")]
        sample: usize,
        /// Write the chain as a matrix file (`-` for stdout) instead of solving it.
        #[arg(long, value_name = "PATH")]
        emit_chain: Option<PathBuf>,
    },
    /// Stable distributions along e = from * factor^k.
    Sweep {
        file: PathBuf,
        #[arg(long, value_name = "P/Q")]
        from: String,
        #[arg(long, value_name = "P/Q")]
        factor: String,
        #[arg(long, value_name = "K")]
        steps: usize,
        /// Also solve in double precision and report the error.
        #[arg(long)]
        float: bool,
    },
}

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error(transparent)]
    Lib(#[from] Error),
    #[error("{0}")]
    Usage(String),
    #[error("{0}")]
    Precondition(String),
    #[error("cannot read {path}: {message}")]
    Io { path: String, message: String },
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Lib(e) => e.exit_code(),
            CliError::Usage(_) | CliError::Io { .. } => 2,
            CliError::Precondition(_) => 3,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub stdout: String,
    pub stderr: String,
    pub code: i32,
}

/// Parses arguments (including the program name) and runs the command.
pub fn run<I, T>(args: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let text = e.render().to_string();
            return if code == 0 {
                Outcome { stdout: text, stderr: String::new(), code }
            } else {
                Outcome { stdout: String::new(), stderr: text, code }
            };
        }
    };
    match execute(&cli) {
        Ok(stdout) => Outcome { stdout, stderr: String::new(), code: 0 },
        Err(e) => Outcome {
            stdout: String::new(),
            stderr: format!("error: {e}\n"),
            code: e.exit_code(),
        },
    }
}

pub fn execute(cli: &Cli) -> Result<String, CliError> {
    let mut r = Report::new(&cli.global);
    match &cli.command {
        Command::Classes { file } => cmd_classes(&mut r, &load_matrix(file, &cli.global)?)?,
        Command::Stable { file, epsilon } => {
            let eps = epsilon.as_deref().map(parse_eps).transpose()?;
            cmd_stable(&mut r, &load_matrix(file, &cli.global)?, eps.as_ref())?
        }
        Command::Quotient { file, collapse } => {
            let states = parse_state_list(collapse)?;
            cmd_quotient(&mut r, &load_matrix(file, &cli.global)?, &states)?
        }
        Command::Ssd { file, memory, sample } => {
            let text = read(file)?;
            let input = if format::looks_like_game(&text) {
                let (Some(m), Some(s)) = (memory, sample) else {
                    return Err(CliError::Usage("game files need -m and -s".into()));
                };
                chain_input(&text, *m, *s)?
            } else {
                if memory.is_some() || sample.is_some() {
                    return Err(CliError::Usage("-m/-s only apply to game files".into()));
                }
                matrix_input(&text, &cli.global)?
            };
            cmd_ssd(&mut r, &input)?
        }
        Command::Adaptive { game, memory, sample, emit_chain } => {
            let input = chain_input(&read(game)?, *memory, *sample)?;
            match emit_chain {
                Some(path) => {
                    let text = input.file().render();
                    if path.as_os_str() == "-" {
                        return Ok(text);
                    }
                    std::fs::write(path, text).map_err(|e| CliError::Io {
                        path: path.display().to_string(),
                        message: e.to_string(),
                    })?;
                    r.kv("chain.file", &path.display().to_string());
                    r.kv("chain.states", &input.matrix.n().to_string());
                }
                None => {
                    r.kv("chain.states", &input.matrix.n().to_string());
                    cmd_ssd(&mut r, &input)?
                }
            }
        }
        Command::Sweep { file, from, factor, steps, float } => {
            if *steps == 0 {
                return Err(CliError::Precondition("--steps must be at least 1".into()));
            }
            let from = parse_eps(from)?;
            let factor = parse_eps(factor)?;
            cmd_sweep(&mut r, &load_matrix(file, &cli.global)?, &from, &factor, *steps, *float)?
        }
    }
    Ok(r.finish())
}

/// A validated process with display labels.
#[derive(Debug, Clone)]
pub struct Input {
    pub matrix: PerturbedMatrix,
    pub labels: Vec<String>,
}

impl Input {
    fn file(&self) -> MatrixFile {
        MatrixFile {
            matrix: self.matrix.matrix().clone(),
            labels: Some(self.labels.clone()),
        }
    }

    fn label(&self, s: usize) -> &str {
        &self.labels[s]
    }

    fn set(&self, states: &[usize]) -> String {
        let names: Vec<&str> = states.iter().map(|&s| self.label(s)).collect();
        format!("{{{}}}", names.join(","))
    }
}

fn read(path: &PathBuf) -> Result<String, CliError> {
    std::fs::read_to_string(path).map_err(|e| CliError::Io {
        path: path.display().to_string(),
        message: e.to_string(),
    })
}

fn load_matrix(path: &PathBuf, global: &GlobalOpts) -> Result<Input, CliError> {
    matrix_input(&read(path)?, global)
}

fn matrix_input(text: &str, global: &GlobalOpts) -> Result<Input, CliError> {
    let force = global.row_stochastic.then_some(Orientation::Row);
    let file = MatrixFile::parse_with(text, force).map_err(Error::from)?;
    let n = file.matrix.rows();
    let labels = file
        .labels
        .unwrap_or_else(|| (1..=n).map(|k| k.to_string()).collect());
    Ok(Input {
        matrix: PerturbedMatrix::new(file.matrix)?,
        labels,
    })
}

fn chain_input(text: &str, memory: usize, sample: usize) -> Result<Input, CliError> {
    let game = format::parse_game(text)?;
    let chain = build_chain(&game, AdaptiveConfig::new(memory, sample)?)?;
    Ok(Input {
        matrix: chain.matrix,
        labels: chain.labels,
    })
}

fn parse_eps(s: &str) -> Result<Rational, CliError> {
    format::parse_rational(s).map_err(|e| Error::from(e).into())
}

fn parse_state_list(s: &str) -> Result<Vec<usize>, CliError> {
    s.split(',')
        .map(str::trim)
        .filter(|t| !t.is_empty())
        .map(|t| match t.parse::<usize>() {
            Ok(k) if k >= 1 => Ok(k - 1),
            _ => Err(CliError::Usage(format!("invalid state `{t}` in --collapse (states are 1-based)"))),
        })
        .collect()
}

/// Accumulates either aligned human-readable text or `key=value` lines.
struct Report {
    machine: bool,
    decimal: Option<usize>,
    trace: bool,
    out: String,
}

impl Report {
    fn new(g: &GlobalOpts) -> Self {
        Report {
            machine: g.machine,
            decimal: g.decimal,
            trace: g.trace,
            out: String::new(),
        }
    }

    fn num(&self, x: &Rational) -> String {
        match self.decimal {
            Some(k) => rational::render_decimal(x, k),
            None => rational::render(x),
        }
    }

    fn heading(&mut self, text: &str) {
        if !self.machine {
            let _ = writeln!(self.out, "{text}");
        }
    }

    fn line(&mut self, text: &str) {
        if !self.machine {
            let _ = writeln!(self.out, "{text}");
        }
    }

    fn kv(&mut self, key: &str, value: &str) {
        if self.machine {
            let _ = writeln!(self.out, "{key}={value}");
        } else {
            let _ = writeln!(self.out, "{key}: {value}");
        }
    }

    fn distribution(&mut self, key: &str, input: &Input, v: &Distribution, full: bool) {
        let shown: Vec<usize> = if full || v.len() <= 64 {
            (0..v.len()).collect()
        } else {
            v.support()
        };
        if self.machine {
            for s in shown {
                let _ = writeln!(self.out, "{key}.{}={}", input.label(s), self.num(&v[s]));
            }
            return;
        }
        let width = shown.iter().map(|&s| input.label(s).len()).max().unwrap_or(1).max(5);
        let _ = writeln!(self.out, "{:<width$}  {key}", "state");
        for s in shown {
            let _ = writeln!(self.out, "{:<width$}  {}", input.label(s), self.num(&v[s]));
        }
        if v.len() > 64 && !full {
            let _ = writeln!(self.out, "({} other states have weight 0)", v.len() - v.support().len());
        }
    }

    fn matrix(&mut self, key: &str, m: &RatMatrix) {
        if self.machine {
            let rows: Vec<String> = (0..m.rows())
                .map(|r| m.row(r).iter().map(|x| self.num(x)).collect::<Vec<_>>().join(","))
                .collect();
            let _ = writeln!(self.out, "{key}={}", rows.join(";"));
        } else {
            let _ = writeln!(self.out, "{key} =");
            let cells: Vec<String> = m.entries().map(|(_, x)| self.num(x)).collect();
            let mut grid = String::new();
            let _ = crate::matrix::write_grid(&mut grid, m.rows(), m.cols(), &cells);
            for l in grid.lines() {
                let _ = writeln!(self.out, "  {l}");
            }
        }
    }

    fn finish(self) -> String {
        self.out
    }
}

fn describe_classes(input: &Input, p: &ClassPartition) -> Vec<String> {
    p.classes()
        .iter()
        .map(|c| {
            let kind = if c.is_closed() { "closed" } else { "transient" };
            format!("{} {kind}", input.set(&c.states))
        })
        .collect()
}

pub fn cmd_classes_report(input: &Input, machine: bool) -> String {
    let mut r = Report::new(&GlobalOpts { machine, ..GlobalOpts::default() });
    cmd_classes(&mut r, input).expect("classes never fails");
    r.finish()
}

fn cmd_classes(r: &mut Report, input: &Input) -> Result<(), CliError> {
    let zero = input.matrix.constant_part().communicating_classes();
    let positive = input.matrix.symbolic_classes();
    for (key, title, p) in [("eps0", "e = 0", &zero), ("eps+", "e > 0", &positive)] {
        let lines = describe_classes(input, p);
        if r.machine {
            r.kv(&format!("{key}.classes"), &lines.join("; "));
            r.kv(&format!("{key}.regular"), &p.is_regular().to_string());
            r.kv(&format!("{key}.irreducible"), &p.is_irreducible().to_string());
        } else {
            r.heading(&format!("{title}:"));
            for l in lines {
                r.line(&format!("  {l}"));
            }
            let shape = if p.is_irreducible() {
                "irreducible"
            } else if p.is_regular() {
                "regular"
            } else {
                "not regular"
            };
            r.line(&format!("  ({shape})"));
        }
    }
    Ok(())
}

fn cmd_stable(r: &mut Report, input: &Input, eps: Option<&Rational>) -> Result<(), CliError> {
    let v = match eps {
        Some(e) => input.matrix.exact_stable_at(e)?,
        None => {
            if !input.matrix.is_constant() {
                return Err(CliError::Precondition(
                    "matrix depends on e; pass --epsilon or use `ssd`".into(),
                ));
            }
            input.matrix.constant_part().stable_distribution()?
        }
    };
    if let Some(e) = eps {
        r.kv("epsilon", &rational::render(e));
    }
    r.distribution("stable", input, &v, true);
    Ok(())
}

fn cmd_quotient(r: &mut Report, input: &Input, collapse: &[usize]) -> Result<(), CliError> {
    let m: MarkovMatrix = input.matrix.constant_part();
    if !input.matrix.is_constant() {
        r.line("(using the constant part of the matrix)");
    }
    let plain = m.quotient(collapse)?;
    let normalized = m.normalized_quotient(collapse)?;
    r.kv("kept", &input.set(&plain.kept));
    r.matrix("m_hat", plain.m_hat.matrix());
    r.matrix("m_hat_star", normalized.m_hat.matrix());
    r.matrix("p", &plain.p);
    r.matrix("i", &plain.i);
    r.matrix("i_star", &plain.i_star);
    let d: Vec<String> = plain.d.iter().map(|x| r.num(x)).collect();
    r.kv("d", &d.join(","));
    Ok(())
}

fn describe_step(input: &Input, step: &Step) -> String {
    match step {
        Step::Collapse { classes, states_after } => {
            let parts: Vec<String> = classes
                .iter()
                .map(|c| format!("{}->{}", input.set(&c[1..]), input.label(c[0])))
                .collect();
            format!("collapse {} ({states_after} states left)", parts.join(" "))
        }
        Step::TransientScale { transient, sped_up, alpha } => format!(
            "scale {} by {}/e; transient {}",
            input.set(sped_up),
            rational::render(alpha),
            input.set(transient)
        ),
    }
}

fn cmd_ssd(r: &mut Report, input: &Input) -> Result<(), CliError> {
    let result: SsdResult = ssd(&input.matrix)?;
    if r.trace {
        for t in &result.trace {
            let text = describe_step(input, &t.step);
            if r.machine {
                r.kv(&format!("trace.{}", t.iteration), &text);
            } else {
                r.line(&format!("iteration {} ({} states): {text}", t.iteration, t.states_before));
            }
        }
    }
    r.distribution("ssd", input, &result.ssd, false);
    r.kv("sss", &input.set(&result.sss));
    Ok(())
}

fn cmd_sweep(
    r: &mut Report,
    input: &Input,
    from: &Rational,
    factor: &Rational,
    steps: usize,
    float: bool,
) -> Result<(), CliError> {
    let points = sweep::sweep(&input.matrix, from, factor, steps, float)?;
    for (k, p) in points.iter().enumerate() {
        let exact: Vec<String> = p.exact.weights().iter().map(|x| r.num(x)).collect();
        r.kv(&format!("eps.{k}"), &rational::render(&p.eps));
        r.kv(&format!("exact.{k}"), &exact.join(", "));
        if let Some(f) = &p.float {
            match f {
                Some(v) => {
                    let shown: Vec<String> = v.iter().map(|x| format!("{x:.6e}")).collect();
                    r.kv(&format!("float.{k}"), &shown.join(", "));
                    r.kv(&format!("float_l1_error.{k}"), &format!("{:.3e}", p.float_error().unwrap_or(f64::NAN)));
                }
                None => r.kv(&format!("float.{k}"), "singular"),
            }
        }
    }
    Ok(())
}
