//! Command implementations behind the `paircorr` binary.
//!
//! | Exit | Meaning |
//! |------|---------|
//! | 0 | success |
//! | 2 | parse error or bad arguments |
//! | 3 | validation failure |
//! | 4 | solver did not converge |
//! | 5 | scientific invariant failed |

use std::io::Write;
use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};
use serde::{Serialize, Serializer};
use serde_json::value::RawValue;

use crate::correlation::{compare_types_with, correlation_measure_with, CorrelationReport, TypeComparison};
use crate::fock_space::{counterparts, ParticleType};
use crate::maxent::Route;
use crate::oracle::random_state;
use crate::rdm::TwoParticleState;
use crate::schmidt::{reconstruction_fidelity, schmidt_coefficients_with};
use crate::statefile::{read_state_file, StateFile};
use crate::{C64, Error, Tolerances};

pub const EXIT_OK: i32 = 0;
pub const EXIT_PARSE: i32 = 2;
pub const EXIT_VALIDATION: i32 = 3;
pub const EXIT_CONVERGENCE: i32 = 4;
pub const EXIT_SCIENTIFIC: i32 = 5;

pub fn exit_code(err: &Error) -> i32 {
    match err {
        Error::Parse(_) => EXIT_PARSE,
        Error::Convergence { .. } => EXIT_CONVERGENCE,
        Error::Scientific(_) => EXIT_SCIENTIFIC,
        _ => EXIT_VALIDATION,
    }
}

#[derive(Debug, Parser)]
#[command(name = "paircorr", version, about = "Maximum-entropy correlation measure for two-particle states")]
pub struct Cli {
    /// Validation tolerance (correlate, compare, schmidt) or table tolerance (paper-table).
    #[arg(long, global = true)]
    pub tol: Option<f64>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    pub format: Format,
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    /// Print only the headline numbers.
    #[arg(long, global = true)]
    pub quiet: bool,
    /// Report entropies in bits instead of nats.
    #[arg(long, global = true)]
    pub bits: bool,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum TypeArg {
    Boson,
    Fermion,
    Distinguishable,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// C2, entropies and RDM spectrum for one or more state files.
    Correlate {
        #[arg(required = true)]
        files: Vec<PathBuf>,
        /// Use the generic convex dual for every particle type.
        #[arg(long)]
        dual: bool,
    },
    /// C_D, C_F, C_B for a distinguishable state and its counterparts.
    Compare { file: PathBuf },
    /// Schmidt coefficients of a pure state.
    Schmidt { file: PathBuf },
    /// Recompute the reference table of nine correlation values.
    PaperTable,
    /// Emit a seeded random state file.
    Random {
        #[arg(long = "type", value_enum)]
        particle_type: TypeArg,
        /// Number of modes (boson, fermion).
        #[arg(long)]
        modes: Option<usize>,
        #[arg(long)]
        modes_a: Option<usize>,
        #[arg(long)]
        modes_b: Option<usize>,
        #[arg(long, default_value_t = 1)]
        rank: usize,
    },
}

/// Parses `args` and runs the command, writing reports to `out` and
/// diagnostics to `err`. Returns the process exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_PARSE } else { EXIT_OK };
            let text = e.render().to_string();
            if code == EXIT_OK {
                let _ = write!(out, "{text}");
            } else {
                let _ = write!(err, "{text}");
            }
            return code;
        }
    };
    match execute(&cli, out, err) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            exit_code(&e)
        }
    }
}

fn execute(cli: &Cli, out: &mut dyn Write, err: &mut dyn Write) -> crate::Result<i32> {
    let tol = match (&cli.command, cli.tol) {
        (Command::PaperTable, _) | (_, None) => Tolerances::default(),
        (_, Some(t)) => Tolerances::default().with_validation(t),
    };
    let unit = if cli.bits { std::f64::consts::LN_2 } else { 1.0 };
    let io = |e: std::io::Error| Error::Parse(format!("writing output: {e}"));
    match &cli.command {
        Command::Correlate { files, dual } => {
            let route = if *dual { Route::Dual } else { Route::Default };
            let results = correlate_batch(files, route, &tol);
            let mut first_error = None;
            for (path, result) in files.iter().zip(results) {
                match result {
                    Ok(report) => {
                        let text = render_report(path, &report, cli.format, cli.quiet, unit);
                        out.write_all(text.as_bytes()).map_err(io)?;
                    }
                    Err(e) if files.len() > 1 => {
                        let _ = writeln!(err, "error: {}: {e}", path.display());
                        first_error.get_or_insert(e);
                    }
                    Err(e) => return Err(e),
                }
            }
            Ok(first_error.map_or(EXIT_OK, |e| exit_code(&e)))
        }
        Command::Compare { file } => {
            let state = read_state_file(file, &tol)?;
            let cmp = compare_types_with(&state, &tol)?;
            out.write_all(render_comparison(&cmp, cli.format, cli.quiet, unit).as_bytes()).map_err(io)?;
            Ok(EXIT_OK)
        }
        Command::Schmidt { file } => {
            let state = read_state_file(file, &tol)?;
            let data = schmidt_coefficients_with(&state, &tol)?;
            let fidelity = reconstruction_fidelity(&data, &state)?;
            let text = match cli.format {
                Format::Json => {
                    #[derive(Serialize)]
                    struct Out<'a> {
                        #[serde(serialize_with = "ser_vec")]
                        coefficients: &'a [f64],
                        schmidt_number: usize,
                        #[serde(serialize_with = "ser_f64")]
                        fidelity: f64,
                    }
                    json_line(&Out {
                        coefficients: &data.coefficients,
                        schmidt_number: data.schmidt_number,
                        fidelity,
                    })
                }
                Format::Text if cli.quiet => format!("{}\n", data.schmidt_number),
                Format::Text => {
                    let coeffs: Vec<String> = data.coefficients.iter().map(|c| format!("{c:.12}")).collect();
                    format!(
                        "coefficients    {}\nschmidt number  {}\nfidelity        {fidelity:.15}\n",
                        coeffs.join(" "),
                        data.schmidt_number
                    )
                }
            };
            out.write_all(text.as_bytes()).map_err(io)?;
            Ok(EXIT_OK)
        }
        Command::PaperTable => {
            let limit = cli.tol.unwrap_or(1e-9);
            let cells = reference_table()?;
            let failures = cells.iter().filter(|c| !(c.error <= limit)).count();
            out.write_all(render_table(&cells, limit, cli.format, cli.quiet, unit).as_bytes())
                .map_err(io)?;
            Ok(if failures == 0 { EXIT_OK } else { EXIT_SCIENTIFIC })
        }
        Command::Random {
            particle_type,
            modes,
            modes_a,
            modes_b,
            rank,
        } => {
            let bad = |msg: &str| Error::Parse(msg.to_string());
            let (ptype, m) = match particle_type {
                TypeArg::Boson | TypeArg::Fermion => {
                    let m = modes.ok_or_else(|| bad("--modes is required for bosons and fermions"))?;
                    let pt = if *particle_type == TypeArg::Boson {
                        ParticleType::Boson
                    } else {
                        ParticleType::Fermion
                    };
                    (pt, m)
                }
                TypeArg::Distinguishable => {
                    let a = modes_a.ok_or_else(|| bad("--modes-a is required for distinguishable particles"))?;
                    let b = modes_b.ok_or_else(|| bad("--modes-b is required for distinguishable particles"))?;
                    (ParticleType::Distinguishable { num_modes_a: a, num_modes_b: b }, a + b)
                }
            };
            let state = random_state(ptype, m, *rank, cli.seed).map_err(|e| Error::Parse(e.to_string()))?;
            out.write_all(StateFile::from_state(&state).emit().as_bytes()).map_err(io)?;
            Ok(EXIT_OK)
        }
    }
}

/// Files are independent, so a batch is evaluated on scoped threads.
fn correlate_batch(files: &[PathBuf], route: Route, tol: &Tolerances) -> Vec<crate::Result<CorrelationReport>> {
    let one = |path: &PathBuf| read_state_file(path, tol).and_then(|s| correlation_measure_with(&s, route, tol));
    if files.len() == 1 {
        return vec![one(&files[0])];
    }
    std::thread::scope(|scope| {
        let handles: Vec<_> = files.iter().map(|p| scope.spawn(move || one(p))).collect();
        handles.into_iter().map(|h| h.join().expect("worker panicked")).collect()
    })
}

fn ser_f64<S: Serializer>(x: &f64, s: S) -> Result<S::Ok, S::Error> {
    number(*x).serialize(s)
}

fn ser_vec<S: Serializer>(xs: &&[f64], s: S) -> Result<S::Ok, S::Error> {
    xs.iter().map(|&x| number(x)).collect::<Vec<_>>().serialize(s)
}

/// 17 significant digits; non-finite values become `null`.
fn number(x: f64) -> Box<RawValue> {
    let text = if x.is_finite() { format!("{x:.16e}") } else { "null".to_string() };
    RawValue::from_string(text).expect("valid JSON number")
}

fn json_line<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string(value).expect("report serializes");
    s.push('\n');
    s
}

/// JSON form of [`CorrelationReport`], field for field.
#[derive(Serialize)]
struct ReportJson<'a> {
    particle_type: String,
    #[serde(serialize_with = "ser_f64")]
    c2: f64,
    #[serde(serialize_with = "ser_f64")]
    entropy_state: f64,
    #[serde(serialize_with = "ser_f64")]
    entropy_maxent: f64,
    #[serde(serialize_with = "ser_vec")]
    rdm_spectrum: &'a [f64],
    saturated_modes: &'a [usize],
    method: &'static str,
    iterations: usize,
    #[serde(serialize_with = "ser_f64")]
    residual: f64,
}

fn render_report(path: &std::path::Path, r: &CorrelationReport, format: Format, quiet: bool, unit: f64) -> String {
    let units = if unit == 1.0 { "nats" } else { "bits" };
    match format {
        Format::Json => json_line(&ReportJson {
            particle_type: r.particle_type.to_string(),
            c2: r.c2 / unit,
            entropy_state: r.entropy_state / unit,
            entropy_maxent: r.entropy_maxent / unit,
            rdm_spectrum: &r.rdm_spectrum,
            saturated_modes: &r.saturated_modes,
            method: r.method.name(),
            iterations: r.iterations,
            residual: r.residual,
        }),
        Format::Text if quiet => format!("{:.16}\n", r.c2 / unit),
        Format::Text => {
            let spectrum: Vec<String> = r.rdm_spectrum.iter().map(|v| format!("{v:.12}")).collect();
            let saturated = if r.saturated_modes.is_empty() {
                "none".to_string()
            } else {
                format!("{:?}", r.saturated_modes)
            };
            format!(
                "{}\n  particle type   {}\n  C2              {:.16} {units}\n  S(state)        {:.16}\n  S(maxent)       {:.16}\n  rdm spectrum    {}\n  saturated       {saturated}\n  solver          {} ({} iterations, residual {:.2e})\n",
                path.display(),
                r.particle_type,
                r.c2 / unit,
                r.entropy_state / unit,
                r.entropy_maxent / unit,
                spectrum.join(" "),
                r.method.name(),
                r.iterations,
                r.residual,
            )
        }
    }
}

fn render_comparison(c: &TypeComparison, format: Format, quiet: bool, unit: f64) -> String {
    let verdict = if c.ordered(Tolerances::default().ordering) { "PASS" } else { "FAIL" };
    match format {
        Format::Json => {
            #[derive(Serialize)]
            struct Out {
                #[serde(serialize_with = "ser_f64")]
                distinguishable: f64,
                #[serde(serialize_with = "ser_f64")]
                fermion: f64,
                #[serde(serialize_with = "ser_f64")]
                boson: f64,
                verdict: &'static str,
            }
            json_line(&Out {
                distinguishable: c.distinguishable / unit,
                fermion: c.fermion / unit,
                boson: c.boson / unit,
                verdict,
            })
        }
        Format::Text if quiet => format!("{verdict}\n"),
        Format::Text => format!(
            "C_D {:.16}\nC_F {:.16}\nC_B {:.16}\nC_D <= C_F <= C_B: {verdict}\n",
            c.distinguishable / unit,
            c.fermion / unit,
            c.boson / unit
        ),
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct TableCell {
    pub row: usize,
    pub column: &'static str,
    pub computed: f64,
    pub exact: f64,
    pub error: f64,
}

/// Built-in rows as distinguishable states; the fermion and boson columns
/// use their counterparts.
///
/// 1. `|0>_A |0>_B`
/// 2. `(|0>_A |0>_B + |1>_A |1>_B) / sqrt 2`
/// 3. equal mixture of `|0>_A |0>_B` and `|1>_A |1>_B`
pub fn reference_rows() -> crate::Result<Vec<TwoParticleState>> {
    let one = C64::new(1.0, 0.0);
    let h = C64::new(std::f64::consts::FRAC_1_SQRT_2, 0.0);
    let d11 = ParticleType::Distinguishable { num_modes_a: 1, num_modes_b: 1 };
    let d22 = ParticleType::Distinguishable { num_modes_a: 2, num_modes_b: 2 };
    Ok(vec![
        TwoParticleState::from_configs(d11, 2, &[((0, 1), one)])?,
        TwoParticleState::from_configs(d22, 4, &[((0, 2), h), ((1, 3), h)])?,
        TwoParticleState::from_mixture(d22, 4, &[(0.5, vec![((0, 2), one)]), (0.5, vec![((1, 3), one)])])?,
    ])
}

/// Exact values, rows by (distinguishable, fermion, boson).
pub fn reference_values() -> [[f64; 3]; 3] {
    [[1.0, 1.0, 3.0], [4.0, 6.0, 10.0], [2.0, 3.0, 5.0]].map(|row| row.map(f64::ln))
}

pub fn reference_table() -> crate::Result<Vec<TableCell>> {
    let tol = Tolerances::default();
    let exact_values = reference_values();
    let mut cells = Vec::with_capacity(9);
    for (row, state) in reference_rows()?.into_iter().enumerate() {
        let (f, b) = counterparts(&state)?;
        for (col, (name, s)) in [("distinguishable", &state), ("fermion", &f), ("boson", &b)].into_iter().enumerate() {
            let computed = correlation_measure_with(s, Route::Default, &tol)?.c2;
            let exact = exact_values[row][col];
            cells.push(TableCell {
                row: row + 1,
                column: name,
                computed,
                exact,
                error: (computed - exact).abs(),
            });
        }
    }
    Ok(cells)
}

fn render_table(cells: &[TableCell], limit: f64, format: Format, quiet: bool, unit: f64) -> String {
    let matched = cells.iter().filter(|c| c.error <= limit).count();
    match format {
        Format::Json => {
            #[derive(Serialize)]
            struct Out {
                row: usize,
                column: &'static str,
                #[serde(serialize_with = "ser_f64")]
                computed: f64,
                #[serde(serialize_with = "ser_f64")]
                exact: f64,
                #[serde(serialize_with = "ser_f64")]
                error: f64,
                pass: bool,
            }
            let records: Vec<Out> = cells
                .iter()
                .map(|c| Out {
                    row: c.row,
                    column: c.column,
                    computed: c.computed / unit,
                    exact: c.exact / unit,
                    error: c.error / unit,
                    pass: c.error <= limit,
                })
                .collect();
            json_line(&records)
        }
        Format::Text => {
            let mut s = String::new();
            if !quiet {
                s.push_str("row  column           computed            exact               error\n");
                for c in cells {
                    s.push_str(&format!(
                        "{:<4} {:<16} {:<19.16} {:<19.16} {:.2e}\n",
                        c.row,
                        c.column,
                        c.computed / unit,
                        c.exact / unit,
                        c.error / unit
                    ));
                }
            }
            s.push_str(&format!("{matched}/{} within {limit:.1e}\n", cells.len()));
            s
        }
    }
}
