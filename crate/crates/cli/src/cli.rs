//! Command-line surface: argument parsing, dispatch and exit codes.

use std::collections::BTreeMap;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};
use liesym_core::lie::{check_symmetry, closure_table, commutator, determining_equations};
use liesym_core::ode::{to_csv, to_svg, CurveStyle, Method, Trajectory};
use liesym_core::reduction::{
    check_first_integral, compare_reduced, pullback, verify_closed_form, Verdict as Compared,
};

use crate::cases::{self, field_spec};
use crate::library;
use crate::model::{Model, RunSpec};
use crate::numeric;
use crate::report::{CaseResult, Report, Verdict};

/// Exit code for usage, parse and input errors.
pub const USAGE_ERROR: i32 = 2;

#[derive(Debug, Parser)]
#[command(
    name = "liesym",
    version,
    about = "Lie point symmetries, reductions and integrals of nonlinear PDEs"
)]
pub struct Cli {
    /// Print the machine-readable report instead of text.
    #[arg(long, global = true)]
    pub json: bool,
    /// Also write the machine-readable report to this file.
    #[arg(long, global = true, value_name = "PATH")]
    pub report: Option<PathBuf>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Symmetry residual of a field on a PDE's solution manifold.
    CheckSymmetry {
        /// Model file, or `builtin`.
        model: String,
        /// Field name, optionally `name[f := body]`.
        field: String,
        pde: String,
    },
    /// Pairwise commutators of fields (`name` or `name[f := body]`).
    Commutators {
        /// Model file, or `builtin`.
        model: String,
        #[arg(required = true, num_args = 2..)]
        fields: Vec<String>,
    },
    /// Commutator table and closure of a set of fields.
    Closure {
        /// Model file, or `builtin`.
        model: String,
        #[arg(required = true)]
        fields: Vec<String>,
    },
    /// Determining equations of a PDE.
    Determining {
        /// Model file, or `builtin`.
        model: String,
        pde: String,
    },
    /// Pulls a PDE back through an ansatz.
    Reduce {
        /// Model file, or `builtin`.
        model: String,
        pde: String,
        ansatz: String,
        /// Equation to compare the reduction with.
        #[arg(long)]
        printed: Option<String>,
        /// Substitution `NAME=EXPR` tried when the plain comparison fails.
        #[arg(long = "subst", value_name = "NAME=EXPR")]
        subst: Vec<String>,
    },
    /// Checks that a candidate integrates an ODE once or twice.
    FirstIntegral {
        /// Model file, or `builtin`.
        model: String,
        /// Reduced equation or ODE.
        eq: String,
        /// ODE block whose left-hand side is the candidate integral.
        candidate: String,
    },
    /// Substitutes a closed-form solution into an equation.
    SolutionCheck {
        /// Model file, or `builtin`.
        model: String,
        /// Equation the solution is substituted into.
        eq: String,
        solution: String,
    },
    /// Integrates an ODE numerically.
    Integrate {
        /// Model file, or `builtin`.
        model: String,
        ode: String,
        /// Initial value `STATE=VALUE`, e.g. `H=1`, `Hp=-0.5`.
        #[arg(long, value_name = "STATE=VALUE", required = true)]
        ic: Vec<String>,
        /// Parameter value `NAME=VALUE`.
        #[arg(long, value_name = "NAME=VALUE")]
        param: Vec<String>,
        /// Integration interval; B may be smaller than A.
        #[arg(long, num_args = 2, value_names = ["A", "B"], allow_negative_numbers = true, required = true)]
        span: Vec<f64>,
        /// `adaptive-rk45` (Dormand-Prince) or `fixed-rk4`.
        #[arg(long, default_value = "adaptive-rk45")]
        method: String,
        /// Fixed step, or the first trial step of the adaptive method.
        #[arg(long)]
        step: Option<f64>,
        /// Local error tolerance of the adaptive method.
        #[arg(long)]
        tol: Option<f64>,
        /// Evenly spaced output points.
        #[arg(long)]
        points: Option<usize>,
        /// Trajectory output.
        #[arg(long, value_name = "PATH")]
        csv: PathBuf,
        /// Optional plot of every state component.
        #[arg(long, value_name = "PATH")]
        svg: Option<PathBuf>,
    },
    /// Profiles for n = 2, 3, 5: three CSV files and one SVG.
    Fig1 {
        /// Output directory.
        #[arg(long, default_value = ".")]
        out: PathBuf,
        #[arg(long, value_enum, default_value_t = Grouping::Printed)]
        grouping: Grouping,
        #[arg(long, default_value = "builtin")]
        model: String,
        #[arg(long, default_value_t = 201)]
        points: usize,
    },
    /// Runs every built-in case and writes one consolidated report.
    PaperSuite {
        #[arg(long, default_value = "builtin")]
        model: String,
    },
}

/// Reading of the profile quadrature's bracket.
#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Grouping {
    /// (H^n - zeta/2 H) H'
    Printed,
    /// (H^n - zeta/2) H H'
    Alternative,
    /// (H^n - zeta/2) H', the exact integral of the scaling reduction
    Integral,
}

impl Grouping {
    pub fn ode(self) -> &'static str {
        match self {
            Grouping::Printed => "profile-printed-grouping",
            Grouping::Alternative => "profile-alternative-grouping",
            Grouping::Integral => "profile-integral-grouping",
        }
    }
}

type Fallible<T> = Result<T, String>;

fn e2s(e: impl std::fmt::Display) -> String {
    e.to_string()
}

fn load(spec: &str) -> Fallible<Model> {
    library::load(spec).map_err(e2s)
}

fn assignment(s: &str) -> Fallible<(String, String)> {
    let (k, v) = s
        .split_once('=')
        .ok_or_else(|| format!("expected NAME=VALUE, got `{s}`"))?;
    Ok((k.trim().to_string(), v.trim().to_string()))
}

fn number(s: &str) -> Fallible<f64> {
    s.parse::<f64>().map_err(|_| format!("`{s}` is not a number"))
}

/// Parses `argv` (program name first), runs the command, writes output and
/// returns the exit code.
pub fn run_command<I, T>(argv: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { USAGE_ERROR } else { 0 };
            let text = e.render().to_string();
            let _ = if e.use_stderr() {
                write!(err, "{text}")
            } else {
                write!(out, "{text}")
            };
            return code;
        }
    };
    match execute(&cli) {
        Ok(report) => {
            let text = if cli.json { report.to_json() } else { report.to_text() };
            let _ = write!(out, "{text}");
            if let Some(path) = &cli.report {
                if let Err(e) = std::fs::write(path, report.to_json()) {
                    let _ = writeln!(err, "error: cannot write {}: {e}", path.display());
                    return USAGE_ERROR;
                }
            }
            report.exit_code()
        }
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            USAGE_ERROR
        }
    }
}

fn command_line(c: &Command) -> String {
    match c {
        Command::CheckSymmetry { .. } => "check-symmetry",
        Command::Commutators { .. } => "commutators",
        Command::Closure { .. } => "closure",
        Command::Determining { .. } => "determining",
        Command::Reduce { .. } => "reduce",
        Command::FirstIntegral { .. } => "first-integral",
        Command::SolutionCheck { .. } => "solution-check",
        Command::Integrate { .. } => "integrate",
        Command::Fig1 { .. } => "fig1",
        Command::PaperSuite { .. } => "paper-suite",
    }
    .to_string()
}

/// Runs a parsed command. `Err` means bad input (exit 2).
pub fn execute(cli: &Cli) -> Fallible<Report> {
    let name = command_line(&cli.command);
    let one = |r: CaseResult| Report::new(&name, vec![r]);
    match &cli.command {
        Command::CheckSymmetry { model, field, pde } => {
            let m = load(model)?;
            let residual = check_symmetry(&field_spec(&m, field)?, m.pde(pde).map_err(e2s)?).map_err(e2s)?;
            let r =
                CaseResult::new(&format!("check-symmetry/{field}/{pde}"), "", "symmetry").detail("residual", &residual);
            Ok(one(if residual.is_zero() {
                r.verdict(Verdict::Pass, "residual is zero")
            } else {
                r.verdict(Verdict::Fail, format!("residual {residual}"))
            }))
        }
        Command::Commutators { model, fields } => {
            let m = load(model)?;
            let fs: Vec<_> = fields.iter().map(|f| field_spec(&m, f)).collect::<Fallible<_>>()?;
            let mut results = Vec::new();
            for i in 0..fs.len() {
                for j in i + 1..fs.len() {
                    let c = commutator(&fs[i], &fs[j]).map_err(e2s)?;
                    results.push(
                        CaseResult::new(&format!("commutator/{},{}", fields[i], fields[j]), "", "commutator")
                            .detail("commutator", &c)
                            .verdict(Verdict::Pass, format!("[{}, {}] = {c}", fields[i], fields[j])),
                    );
                }
            }
            Ok(Report::new(&name, results))
        }
        Command::Closure { model, fields } => {
            let m = load(model)?;
            let fs: Vec<_> = fields.iter().map(|f| field_spec(&m, f)).collect::<Fallible<_>>()?;
            let report = closure_table(&fs).map_err(e2s)?;
            let mut r = CaseResult::new(&format!("closure/{}", fields.join(",")), "", "closure");
            for i in 0..fs.len() {
                for j in i + 1..fs.len() {
                    let text = match report.structure_constants(i, j) {
                        Some(c) => c.iter().map(ToString::to_string).collect::<Vec<_>>().join(", "),
                        None => format!("not a constant combination: {}", report.commutators[i][j]),
                    };
                    r = r.detail(&format!("[{}, {}]", fields[i], fields[j]), text);
                }
            }
            Ok(one(if report.is_closed() {
                r.verdict(Verdict::Pass, "closed")
            } else {
                let (i, j) = report.witnesses[0];
                r.verdict(
                    Verdict::Fail,
                    format!("not closed; witness [{}, {}]", fields[i], fields[j]),
                )
            }))
        }
        Command::Determining { model, pde } => {
            let m = load(model)?;
            let sys = determining_equations(m.pde(pde).map_err(e2s)?).map_err(e2s)?;
            let mut r =
                CaseResult::new(&format!("determining/{pde}"), "", "determining").detail("count", sys.equations.len());
            let width = sys.equations.len().to_string().len();
            for (k, e) in sys.equations.iter().enumerate() {
                r = r.detail(&format!("equation {:0width$}", k + 1), e);
            }
            Ok(one(
                r.verdict(Verdict::Pass, format!("{} equations", sys.equations.len()))
            ))
        }
        Command::Reduce {
            model,
            pde,
            ansatz,
            printed,
            subst,
        } => {
            let m = load(model)?;
            let got = pullback(m.pde(pde).map_err(e2s)?, &m.ansatz(ansatz).map_err(e2s)?).map_err(e2s)?;
            let r = CaseResult::new(&format!("reduce/{pde}/{ansatz}"), "", "reduction").detail("pullback", &got.lhs);
            let Some(printed) = printed else {
                return Ok(one(r.verdict(Verdict::Pass, format!("{} = 0", got.lhs))));
            };
            let p = m.reduced(printed).map_err(e2s)?;
            let subst = subst
                .iter()
                .map(|s| {
                    let (k, v) = assignment(s)?;
                    let sym = m.scope.symbol(&k, Default::default()).map_err(e2s)?.clone();
                    Ok((sym, m.scope.parse(&v).map_err(e2s)?))
                })
                .collect::<Fallible<Vec<_>>>()?;
            let cmp = compare_reduced(&got, &p, &subst);
            let r = r.detail("printed", &p.lhs).detail("residual", &cmp.residual);
            Ok(one(match cmp.verdict {
                Compared::Exact => r.verdict(Verdict::Pass, "equal"),
                Compared::Multiple(f) => r.verdict(Verdict::Pass, format!("equal up to the factor {f}")),
                Compared::UnderSubstitution(f) => {
                    r.verdict(Verdict::Pass, format!("equal under substitution, factor {f}"))
                }
                Compared::Mismatch => r.verdict(Verdict::Fail, "differs from the expected equation"),
            }))
        }
        Command::FirstIntegral { model, eq, candidate } => {
            let m = load(model)?;
            let c = check_first_integral(&m.reduced(eq).map_err(e2s)?, &m.reduced(candidate).map_err(e2s)?.lhs)
                .map_err(e2s)?;
            let r = CaseResult::new(&format!("first-integral/{eq}/{candidate}"), "", "first-integral")
                .detail("gap", c.gap)
                .detail("multiplier", &c.multiplier)
                .detail("raw", &c.raw)
                .detail("residual", &c.residual);
            Ok(one(if c.residual.is_zero() {
                r.verdict(Verdict::Pass, "candidate integrates the equation")
            } else {
                r.verdict(Verdict::Fail, format!("residual {}", c.residual))
            }))
        }
        Command::SolutionCheck { model, eq, solution } => {
            let m = load(model)?;
            let e = m.reduced(eq).map_err(e2s)?;
            let s = m.solution(solution).map_err(e2s)?;
            let c = verify_closed_form(&e.lhs, &s.dependent, &s.independents, &s.value, &s.side).map_err(e2s)?;
            let constraints = c
                .constraints
                .iter()
                .map(ToString::to_string)
                .collect::<Vec<_>>()
                .join("; ");
            let r = CaseResult::new(&format!("solution-check/{eq}/{solution}"), "", "closed-form")
                .detail("residual", &c.residual)
                .detail("constraints", &constraints);
            Ok(one(if c.certified() {
                r.verdict(Verdict::Pass, "solution certified")
            } else {
                r.verdict(Verdict::Fail, format!("constraints: {constraints}"))
            }))
        }
        Command::Integrate {
            model,
            ode,
            ic,
            param,
            span,
            method,
            step,
            tol,
            points,
            csv,
            svg,
        } => {
            let m = load(model)?;
            let mut params = BTreeMap::new();
            let mut n = None;
            for p in param {
                let (k, v) = assignment(p)?;
                let sym = m.scope.symbol(&k, Default::default()).map_err(e2s)?;
                let v = number(&v)?;
                if sym.is_exponent_parameter() {
                    if v.fract() != 0.0 {
                        return Err(format!("{k} must be an integer"));
                    }
                    n = Some(v as i64);
                } else {
                    params.insert(k, v);
                }
            }
            let ic = ic
                .iter()
                .map(|s| assignment(s).and_then(|(k, v)| Ok((k, number(&v)?))))
                .collect::<Fallible<Vec<_>>>()?;
            let spec = RunSpec {
                name: ode.clone(),
                ode: ode.clone(),
                params,
                n,
                ic,
                span: Some((span[0], span[1])),
                method: Some(method.parse::<Method>().map_err(e2s)?),
                tol: tol.map(|t| (t, t)),
                step: *step,
                points: *points,
            };
            let traj = numeric::run(&m, &spec).map_err(e2s)?;
            write_file(csv, &to_csv(&traj))?;
            let mut r = integration_result(&format!("integrate/{ode}"), &traj).detail("csv", csv.display());
            if let Some(svg) = svg {
                write_file(
                    svg,
                    &to_svg(std::slice::from_ref(&traj), &[CurveStyle::new("red", ode)], ode),
                )?;
                r = r.detail("svg", svg.display());
            }
            Ok(one(r))
        }
        Command::Fig1 {
            out,
            grouping,
            model,
            points,
        } => {
            let m = load(model)?;
            let (results, _) = fig1(&m, out, *grouping, *points)?;
            Ok(Report::new(&name, results))
        }
        Command::PaperSuite { model } => Ok(cases::suite(&load(model)?)),
    }
}

fn write_file(path: &Path, text: &str) -> Fallible<()> {
    std::fs::write(path, text).map_err(|e| format!("cannot write {}: {e}", path.display()))
}

fn integration_result(label: &str, traj: &Trajectory<f64>) -> CaseResult {
    let (x, y) = traj.last().expect("trajectory starts at the initial condition");
    let state = y.iter().map(|v| format!("{v:.10}")).collect::<Vec<_>>().join(", ");
    let r = CaseResult::new(label, "", "numeric")
        .detail("method", traj.method)
        .detail("accepted", traj.accepted)
        .detail("rejected", traj.rejected)
        .detail("end", format!("{x}: {state}"));
    match &traj.truncated {
        None => r.verdict(Verdict::Pass, "reached the end of the span"),
        Some(why) => r.verdict(Verdict::Fail, format!("stopped early: {why}")),
    }
}

/// Colors of the three profile curves, in run order.
pub const FIG1_COLORS: [&str; 3] = ["red", "blue", "yellow"];
const FIG1_RUNS: [&str; 3] = ["profile-n2", "profile-n3", "profile-n5"];

/// Integrates the three profile runs with the chosen grouping and writes
/// `profile-n{2,3,5}.csv` and `profile.svg` into `dir`.
pub fn fig1(model: &Model, dir: &Path, grouping: Grouping, points: usize) -> Fallible<(Vec<CaseResult>, Vec<PathBuf>)> {
    std::fs::create_dir_all(dir).map_err(|e| format!("cannot create {}: {e}", dir.display()))?;
    let mut trajs = Vec::new();
    let mut results = Vec::new();
    let mut files = Vec::new();
    for run in FIG1_RUNS {
        let spec = RunSpec {
            ode: grouping.ode().to_string(),
            points: Some(points),
            ..model.run(run).map_err(e2s)?.clone()
        };
        let traj = numeric::run(model, &spec).map_err(e2s)?;
        let path = dir.join(format!("{run}.csv"));
        write_file(&path, &to_csv(&traj))?;
        results.push(
            integration_result(&format!("fig1/{run}"), &traj)
                .detail("grouping", numeric::grouping_of(&spec.ode))
                .detail("csv", path.display()),
        );
        files.push(path);
        trajs.push(traj);
    }
    let g = numeric::grouping_of(grouping.ode());
    let styles: Vec<CurveStyle> = trajs
        .iter()
        .zip(FIG1_COLORS)
        .map(|(t, c)| CurveStyle::new(c, &format!("n = {}", t.labels.get("n").map_or("?", String::as_str))))
        .collect();
    let path = dir.join("profile.svg");
    write_file(
        &path,
        &to_svg(
            &trajs,
            &styles,
            &format!("H(zeta), H(0) = 1, H'(0) = -0.5, H1 = 0, {g} grouping"),
        ),
    )?;
    files.push(path);
    Ok((results, files))
}
