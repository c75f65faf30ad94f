use std::fs;
use std::process::ExitCode;

use anyhow::{anyhow, bail, Context, Result};
use clap::{Args, Parser, Subcommand};
use coxperc::cert::{
    certify_phase, reproduce_threshold_table, run_report, CertifyOptions, ReportOptions, Section,
    SCHEMA_VERSION,
};
use coxperc::coxeter::{
    build_ball, orientation_stats, BallOptions, CayleyBall, CoxeterMatrix, DEFAULT_MAX_BALL_SIZE,
};
use coxperc::fixtures;
use coxperc::growth::{
    ball_size_series, growth_lower_bound_check, growth_rate, steinberg_inverse_growth,
    DEFAULT_LOWER_BOUND_GRID,
};
use coxperc::nerve::{build_nerve, classify_nerve};
use coxperc::oracle::{
    count_walk_spectra, linear_grid, percolation_sweep, PercolationMode, RootedGraph,
    SpectraOptions, SweepOptions,
};
use coxperc::walks::{
    decompose_spectra, gabber_bound_on_ball, gamma_star_bound, rho_closed_form, GabberParams,
    RhoLemma,
};
use serde_json::{json, Value};

#[derive(Parser)]
#[command(
    name = "coxperc",
    version,
    about = "Growth, cogrowth bounds and p_c < p_u certificates for hyperbolic reflection groups"
)]
struct Cli {
    /// Emit JSON instead of a text summary.
    #[arg(long, global = true)]
    json: bool,
    /// Emit CSV where the command supports it.
    #[arg(long, global = true, conflicts_with = "json")]
    csv: bool,
    /// Abort ball construction beyond this many vertices.
    #[arg(long, global = true, default_value_t = DEFAULT_MAX_BALL_SIZE)]
    max_ball_size: usize,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Input {
    /// JSON file, or `builtin:<name>` for a bundled example.
    input: String,
}

#[derive(Subcommand)]
enum Command {
    /// Full report: nerve, growth, bounds, certificate and oracle checks.
    Analyze {
        #[command(flatten)]
        input: Input,
        #[arg(long)]
        radius: Option<usize>,
        #[arg(long, default_value_t = 10)]
        nmax: usize,
        #[arg(long)]
        no_oracles: bool,
    },
    /// Growth series, growth rate and the reference lower bound.
    Growth {
        #[command(flatten)]
        input: Input,
        #[arg(long, default_value_t = 10)]
        coeffs: usize,
    },
    /// Closed-form cogrowth bounds and Gabber sums on a ball.
    Bounds {
        #[command(flatten)]
        input: Input,
        #[arg(long, requires_all = ["c2", "c3"])]
        c1: Option<f64>,
        #[arg(long, requires_all = ["c1", "c3"])]
        c2: Option<f64>,
        #[arg(long, requires_all = ["c1", "c2"])]
        c3: Option<f64>,
        #[arg(long, default_value_t = 4)]
        radius: usize,
    },
    /// Phase certificate.
    Certify {
        #[command(flatten)]
        input: Input,
        /// Restrict to one lemma: basic, general or ra_compact.
        #[arg(long)]
        lemma: Option<RhoLemma>,
        #[arg(long)]
        no_transform: bool,
    },
    /// Least k from which each lemma certifies.
    Table,
    /// Exact walk spectra and the cycle decomposition on a ball.
    Oracle {
        #[command(flatten)]
        input: Input,
        #[arg(long, default_value_t = 8)]
        nmax: usize,
        #[arg(long)]
        radius: Option<usize>,
        /// Longest self-avoiding cycle to enumerate.
        #[arg(long, default_value_t = 8)]
        sa_max: usize,
    },
    /// Monte Carlo percolation sweep on a ball.
    Simulate {
        #[command(flatten)]
        input: Input,
        /// `a:b:steps`, with `steps` evenly spaced points from a to b.
        #[arg(long)]
        p_grid: String,
        #[arg(long, default_value_t = 100)]
        samples: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value = "bond")]
        mode: PercolationMode,
        #[arg(long, default_value_t = 4)]
        radius: usize,
        /// Worker threads; 0 for one per core.
        #[arg(long, default_value_t = 0)]
        workers: usize,
    },
}

struct Output {
    value: Value,
    text: String,
    csv: Option<String>,
    exit_code: u8,
}

impl Output {
    fn new(value: Value, text: String) -> Self {
        Self {
            value,
            text,
            csv: None,
            exit_code: 0,
        }
    }
}

fn load(input: &Input) -> Result<String> {
    match input.input.strip_prefix("builtin:") {
        Some(name) => fixtures::source(name).map(str::to_owned).ok_or_else(|| {
            let known: Vec<_> = fixtures::names().collect();
            anyhow!("unknown builtin {name:?}; available: {}", known.join(", "))
        }),
        None => {
            fs::read_to_string(&input.input).with_context(|| format!("reading {}", input.input))
        }
    }
}

fn parse(input: &Input) -> Result<CoxeterMatrix> {
    Ok(CoxeterMatrix::from_json(&load(input)?).map_err(coxperc::Error::from)?)
}

fn ball(m: &CoxeterMatrix, radius: usize, max: usize) -> Result<CayleyBall> {
    let options = BallOptions {
        max_vertices: max,
        ..BallOptions::default()
    };
    Ok(build_ball(m, radius, options).map_err(coxperc::Error::from)?)
}

fn core<T, E: Into<coxperc::Error>>(r: Result<T, E>) -> Result<T> {
    r.map_err(|e| anyhow::Error::from(e.into()))
}

fn parse_grid(text: &str) -> Result<Vec<f64>> {
    let parts: Vec<&str> = text.split(':').collect();
    let [a, b, steps] = parts[..] else {
        bail!("p-grid must be a:b:steps, got {text:?}");
    };
    let a: f64 = a.parse().with_context(|| format!("bad grid start {a:?}"))?;
    let b: f64 = b.parse().with_context(|| format!("bad grid end {b:?}"))?;
    let steps: usize = steps
        .parse()
        .with_context(|| format!("bad step count {steps:?}"))?;
    core(linear_grid(a, b, steps))
}

fn analyze(
    input: &Input,
    radius: Option<usize>,
    nmax: usize,
    no_oracles: bool,
    max: usize,
) -> Result<Output> {
    let options = ReportOptions {
        oracles: !no_oracles,
        radius,
        n_max: nmax,
        max_ball_size: max,
        ..ReportOptions::default()
    };
    let report = core(run_report(&load(input)?, &options))?;
    let mut text = format!("rank {}\n", report.input.rank);
    let f = &report.nerve.f_vector;
    text += &format!(
        "nerve: f = {f:?}, flag {}, sphere {}\n",
        report.nerve.is_flag, report.nerve.is_sphere_triangulation
    );
    if let Section::Ok(g) = &report.growth {
        if let Section::Ok(r) = &g.growth_rate {
            text += &format!("growth rate {:.12}\n", r.growth_rate);
        }
    }
    match &report.certificate {
        Section::Ok(c) => {
            text += &format!(
                "certificate: b1 = {:.12}, b2 = {:.12}, {:?}\n",
                c.b1, c.b2, c.verdict
            )
        }
        Section::Error(e) => text += &format!("certificate error: {}\n", e.message),
    }
    match &report.oracles {
        Some(Section::Ok(o)) => {
            text += &format!(
                "oracles at radius {} ({} vertices): {}\n",
                o.radius,
                o.ball_vertices,
                if o.all_pass() { "all pass" } else { "FAILURES" }
            )
        }
        Some(Section::Error(e)) => text += &format!("oracle error: {}\n", e.message),
        None => {}
    }
    let exit_code = report.exit_code as u8;
    Ok(Output {
        value: serde_json::to_value(&report)?,
        text,
        csv: None,
        exit_code,
    })
}

fn growth(input: &Input, coeffs: usize) -> Result<Output> {
    let m = parse(input)?;
    let nerve = build_nerve(&m);
    let ig = core(steinberg_inverse_growth(&m, &nerve))?;
    let series = core(ball_size_series(&ig, coeffs))?;
    let rate = growth_rate(&ig);
    let lower =
        (m.rank() >= 6).then(|| growth_lower_bound_check(&ig, m.rank(), DEFAULT_LOWER_BOUND_GRID));
    let mut text = format!("1/W = ({}) / ({})\n", ig.numerator, ig.denominator);
    text += &format!("sphere sizes: {}\n", join(&series.sphere_sizes));
    match &rate {
        Ok(r) => {
            text += &format!(
                "growth rate {:.12} (t* = {:.12})\n",
                r.growth_rate, r.t_star
            )
        }
        Err(e) => text += &format!("growth rate: {e}\n"),
    }
    Ok(Output::new(
        json!({
            "schema_version": SCHEMA_VERSION,
            "nerve": classify_nerve(&nerve),
            "inverse_growth": ig,
            "coefficients": series,
            "growth_rate": rate.as_ref().map_err(ToString::to_string),
            "lower_bound": lower.map(|l| l.map_err(|e| e.to_string())),
        }),
        text,
    ))
}

fn join(values: &[impl ToString]) -> String {
    values
        .iter()
        .map(ToString::to_string)
        .collect::<Vec<_>>()
        .join(", ")
}

fn bounds(input: &Input, weights: Option<[f64; 3]>, radius: usize, max: usize) -> Result<Output> {
    let m = parse(input)?;
    let k = m.rank();
    let mut text = String::new();
    let mut lemmas = Vec::new();
    for lemma in RhoLemma::ALL {
        match rho_closed_form(k, lemma) {
            Ok(b) => {
                let g = gamma_star_bound(b.value, k).ok();
                text += &format!("{lemma}: rho <= {:.12}", b.value);
                if let Some(g) = &g {
                    text += &format!(", gamma* <= {:.12}", g.value);
                }
                text += "\n";
                lemmas.push(json!({"lemma": lemma, "rho": b, "gamma_star": g}));
            }
            Err(e) => {
                text += &format!("{lemma}: {e}\n");
                lemmas.push(json!({"lemma": lemma, "error": e.to_string()}));
            }
        }
    }
    let b = ball(&m, radius, max)?;
    let stats = orientation_stats(&b);
    let weight_sets: Vec<[f64; 3]> = match weights {
        Some(w) => vec![w],
        None => RhoLemma::ALL
            .into_iter()
            .filter(|l| k >= l.min_rank())
            .map(|l| l.weights(k))
            .collect(),
    };
    let mut observed = Vec::new();
    for w in weight_sets {
        let params = core(GabberParams::from_array(w))?;
        let obs = core(gabber_bound_on_ball(&b, &stats, params))?;
        text += &format!(
            "weights {:?}: max f_v = {:.12} on {} interior vertices of radius {radius}\n",
            w, obs.bound.value, obs.interior_vertices
        );
        observed.push(obs);
    }
    Ok(Output::new(
        json!({
            "schema_version": SCHEMA_VERSION,
            "k": k,
            "closed_forms": lemmas,
            "gabber": observed,
        }),
        text,
    ))
}

fn certify(input: &Input, lemma: Option<RhoLemma>, no_transform: bool) -> Result<Output> {
    let m = parse(input)?;
    let c = core(certify_phase(
        &m,
        CertifyOptions {
            lemma,
            no_transform,
        },
    ))?;
    let mut text = format!(
        "k = {}, {} bound {:.12}{}\n",
        c.k,
        c.rho_lemma,
        c.rho_bound,
        if c.gamma_star_applied {
            " (transformed)"
        } else {
            ""
        }
    );
    text += &format!("b1 = {:.12}\nb2 = {:.12} ({:?})\n", c.b1, c.b2, c.gr_source);
    text += &format!("margin {:.12}: {:?}\n", c.margin, c.verdict);
    for a in &c.audit {
        text += &format!(
            "  [{}] {}: {}\n",
            if a.passed { "ok" } else { "--" },
            a.check,
            a.detail
        );
    }
    let mut value = serde_json::to_value(&c)?;
    value["schema_version"] = json!(SCHEMA_VERSION);
    Ok(Output::new(value, text))
}

fn table() -> Result<Output> {
    let t = reproduce_threshold_table();
    let cell = |x: Option<usize>| x.map_or("-".to_owned(), |k| k.to_string());
    let mut text = String::from("lemma        rho   gamma*\n");
    let mut csv = String::from("lemma,rho,gamma_star\n");
    for r in &t.rows {
        text += &format!(
            "{:<12} {:<5} {}\n",
            r.lemma.name(),
            cell(r.rho),
            cell(r.gamma_star)
        );
        csv += &format!(
            "{},{},{}\n",
            r.lemma.name(),
            cell(r.rho),
            cell(r.gamma_star)
        );
    }
    let mut out = Output::new(json!({"schema_version": SCHEMA_VERSION, "table": t}), text);
    out.csv = Some(csv);
    Ok(out)
}

fn oracle(
    input: &Input,
    nmax: usize,
    radius: Option<usize>,
    sa_max: usize,
    max: usize,
) -> Result<Output> {
    let m = parse(input)?;
    let radius = radius.unwrap_or(nmax.div_ceil(2) + 1);
    let b = ball(&m, radius, max)?;
    let g = RootedGraph::from_ball(&b);
    let spectra = core(count_walk_spectra(
        &g,
        nmax,
        SpectraOptions {
            self_avoiding_max: sa_max,
        },
    ))?;
    let d = core(decompose_spectra(spectra))?;
    let mut text = String::from("n  C_n  a*_n  a_n  decomposition\n");
    let mut csv =
        String::from("n,closed_walks,nonbacktracking,self_avoiding,decomposition,equal\n");
    for r in &d.rows {
        let sa = d.spectra.self_avoiding[r.n].map_or("-".to_owned(), |x| x.to_string());
        let nb = d.spectra.nonbacktracking[r.n];
        text += &format!(
            "{}  {}  {nb}  {sa}  {}\n",
            r.n,
            r.closed_walks,
            if r.equal { "ok" } else { "MISMATCH" }
        );
        csv += &format!(
            "{},{},{nb},{sa},{},{}\n",
            r.n, r.closed_walks, r.decomposition, r.equal
        );
    }
    text += &format!(
        "decomposition {}, chain a <= a* <= C {}\n",
        if d.holds { "holds" } else { "FAILS" },
        if d.spectra.chain_holds() {
            "holds"
        } else {
            "FAILS"
        }
    );
    let exit_code = if d.holds && d.spectra.chain_holds() {
        0
    } else {
        2
    };
    let mut out = Output::new(
        json!({"schema_version": SCHEMA_VERSION, "radius": radius, "ball_vertices": b.len(), "cycle_decomposition": d}),
        text,
    );
    out.csv = Some(csv);
    out.exit_code = exit_code;
    Ok(out)
}

#[allow(clippy::too_many_arguments)]
fn simulate(
    input: &Input,
    grid: &str,
    samples: u64,
    seed: u64,
    mode: PercolationMode,
    radius: usize,
    workers: usize,
    max: usize,
) -> Result<Output> {
    let m = parse(input)?;
    let grid = parse_grid(grid)?;
    let b = ball(&m, radius, max)?;
    let result = core(percolation_sweep(
        &b,
        &grid,
        SweepOptions {
            samples,
            mode,
            seed,
            workers,
        },
    ))?;
    let csv = result.to_csv();
    let mut out = Output::new(
        json!({"schema_version": SCHEMA_VERSION, "ball_vertices": b.len(), "sweep": result}),
        csv.clone(),
    );
    out.csv = Some(csv);
    Ok(out)
}

fn run(cli: &Cli) -> Result<Output> {
    let max = cli.max_ball_size;
    match &cli.command {
        Command::Analyze {
            input,
            radius,
            nmax,
            no_oracles,
        } => analyze(input, *radius, *nmax, *no_oracles, max),
        Command::Growth { input, coeffs } => growth(input, *coeffs),
        Command::Bounds {
            input,
            c1,
            c2,
            c3,
            radius,
        } => {
            let weights = match (c1, c2, c3) {
                (Some(a), Some(b), Some(c)) => Some([*a, *b, *c]),
                _ => None,
            };
            bounds(input, weights, *radius, max)
        }
        Command::Certify {
            input,
            lemma,
            no_transform,
        } => certify(input, *lemma, *no_transform),
        Command::Table => table(),
        Command::Oracle {
            input,
            nmax,
            radius,
            sa_max,
        } => oracle(input, *nmax, *radius, *sa_max, max),
        Command::Simulate {
            input,
            p_grid,
            samples,
            seed,
            mode,
            radius,
            workers,
        } => simulate(
            input, p_grid, *samples, *seed, *mode, *radius, *workers, max,
        ),
    }
}

fn exit_code(e: &anyhow::Error) -> u8 {
    e.downcast_ref::<coxperc::Error>()
        .map_or(1, |e| e.exit_code() as u8)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(&cli) {
        Ok(out) => {
            if cli.json {
                println!(
                    "{}",
                    serde_json::to_string_pretty(&out.value).expect("serializable")
                );
            } else if cli.csv {
                match &out.csv {
                    Some(csv) => print!("{csv}"),
                    None => {
                        eprintln!("error: this command has no CSV output");
                        return ExitCode::from(1);
                    }
                }
            } else {
                print!("{}", out.text);
            }
            ExitCode::from(out.exit_code)
        }
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(exit_code(&e))
        }
    }
}
