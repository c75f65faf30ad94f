//! One JSON document with every computed quantity for an input group.

use serde::Serialize;

use super::{certify_phase, CertifyOptions, PhaseCertificate};
use crate::coxeter::{
    build_ball, check_orientation, orientation_stats, BallOptions, CoxeterError, CoxeterMatrix,
    MatrixDocument, OrientationCheck, DEFAULT_MAX_BALL_SIZE,
};
use crate::error::{Error, ErrorKind};
use crate::growth::{
    ball_size_series, growth_lower_bound_check, growth_rate, steinberg_inverse_growth,
    GrowthRateResult, InverseGrowth, LowerBoundVerdict, SeriesCoefficients,
    DEFAULT_LOWER_BOUND_GRID,
};
use crate::nerve::{
    build_nerve, classify_nerve, validate_right_angled_compact, NerveReport, ValidationCheck,
};
use crate::oracle::{
    count_walk_spectra, percolation_sweep, RootedGraph, SpectraOptions, SweepOptions, SweepResult,
};
use crate::walks::{
    decompose_spectra, gabber_bound_on_ball, CycleDecomposition, GabberObservation, GabberParams,
    RhoLemma,
};

pub const SCHEMA_VERSION: &str = "1.0.0";

/// Default cap on the ball used by the oracles when no radius is given.
pub const DEFAULT_BALL_BUDGET: usize = 500_000;

const MAX_DEFAULT_RADIUS: usize = 6;

#[derive(Debug, Clone)]
pub struct ReportOptions {
    pub oracles: bool,
    /// Ball radius for the oracles; chosen from the growth series if unset.
    pub radius: Option<usize>,
    pub n_max: usize,
    pub self_avoiding_max: usize,
    pub coefficients: usize,
    pub max_ball_size: usize,
    pub certify: CertifyOptions,
    pub percolation: Option<(Vec<f64>, SweepOptions)>,
}

impl Default for ReportOptions {
    fn default() -> Self {
        Self {
            oracles: true,
            radius: None,
            n_max: 10,
            self_avoiding_max: 8,
            coefficients: 10,
            max_ball_size: DEFAULT_MAX_BALL_SIZE,
            certify: CertifyOptions::default(),
            percolation: None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SectionError {
    pub kind: ErrorKind,
    pub message: String,
}

impl From<Error> for SectionError {
    fn from(e: Error) -> Self {
        Self {
            kind: e.kind(),
            message: e.to_string(),
        }
    }
}

/// A report section that either computed or failed on its own.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Section<T> {
    Ok(T),
    Error(SectionError),
}

impl<T> Section<T> {
    fn from_result<E: Into<Error>>(r: Result<T, E>) -> Self {
        match r {
            Ok(v) => Section::Ok(v),
            Err(e) => Section::Error(SectionError::from(e.into())),
        }
    }

    pub fn ok(&self) -> Option<&T> {
        match self {
            Section::Ok(v) => Some(v),
            Section::Error(_) => None,
        }
    }

    fn error_kind(&self) -> Option<ErrorKind> {
        match self {
            Section::Ok(_) => None,
            Section::Error(e) => Some(e.kind),
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct GrowthSection {
    pub inverse: InverseGrowth,
    pub numerator_palindromic: bool,
    pub denominator_palindromic: bool,
    pub growth_rate: Section<GrowthRateResult>,
    pub coefficients: Section<SeriesCoefficients>,
    pub lower_bound: Option<Section<LowerBoundVerdict>>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SeriesAgreement {
    pub bfs_sphere_sizes: Vec<usize>,
    pub series_sphere_sizes: Vec<String>,
    pub equal: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct WalkBoundCheck {
    pub rho_bound: f64,
    /// Whether `C_n <= rho_bound^n` for every computed `n`.
    pub holds: bool,
    pub first_violation: Option<usize>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct OracleSection {
    pub radius: usize,
    pub ball_vertices: usize,
    pub series_agreement: Option<SeriesAgreement>,
    pub orientation: OrientationCheck,
    pub gabber: Vec<Section<GabberObservation>>,
    pub cycle_decomposition: Section<CycleDecomposition>,
    pub walk_bound: Option<WalkBoundCheck>,
}

impl OracleSection {
    pub fn all_pass(&self) -> bool {
        self.series_agreement.as_ref().is_none_or(|s| s.equal)
            && self.orientation.holds
            && self
                .cycle_decomposition
                .ok()
                .is_some_and(|d| d.holds && d.spectra.chain_holds())
            && self.walk_bound.as_ref().is_none_or(|w| w.holds)
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct Report {
    pub schema_version: &'static str,
    pub input: MatrixDocument,
    pub input_warning: Option<SectionError>,
    pub nerve: NerveReport,
    pub right_angled_compact_checks: Option<Vec<ValidationCheck>>,
    pub growth: Section<GrowthSection>,
    pub certificate: Section<PhaseCertificate>,
    pub oracles: Option<Section<OracleSection>>,
    pub percolation: Option<Section<SweepResult>>,
    pub exit_code: i32,
}

/// Largest radius up to 6 whose predicted ball fits in `budget`.
pub fn default_radius(series: Option<&SeriesCoefficients>, budget: usize) -> usize {
    let Some(sizes) = series.and_then(SeriesCoefficients::ball_sizes_u64) else {
        return 3;
    };
    (0..=MAX_DEFAULT_RADIUS.min(sizes.len() - 1))
        .rev()
        .find(|&r| sizes[r] <= budget as u64)
        .unwrap_or(0)
}

fn growth_section(m: &CoxeterMatrix, coefficients: usize) -> Result<GrowthSection, Error> {
    let nerve = build_nerve(m);
    let inverse = steinberg_inverse_growth(m, &nerve)?;
    let lower_bound = (m.rank() >= 6 && m.flags().hyperbolic_polyhedral).then(|| {
        Section::from_result(growth_lower_bound_check(
            &inverse,
            m.rank(),
            DEFAULT_LOWER_BOUND_GRID,
        ))
    });
    Ok(GrowthSection {
        numerator_palindromic: inverse.numerator.is_palindromic(),
        denominator_palindromic: inverse.denominator.is_palindromic(),
        growth_rate: Section::from_result(growth_rate(&inverse)),
        coefficients: Section::from_result(ball_size_series(&inverse, coefficients)),
        lower_bound,
        inverse,
    })
}

fn oracle_section(
    m: &CoxeterMatrix,
    growth: Option<&GrowthSection>,
    certificate: Option<&PhaseCertificate>,
    options: &ReportOptions,
) -> Result<OracleSection, Error> {
    let series = growth.and_then(|g| g.coefficients.ok());
    let radius = options
        .radius
        .unwrap_or_else(|| default_radius(series, DEFAULT_BALL_BUDGET.min(options.max_ball_size)));
    let ball = build_ball(
        m,
        radius,
        BallOptions {
            max_vertices: options.max_ball_size,
            ..BallOptions::default()
        },
    )?;
    let bfs = ball.sphere_sizes();
    let series_agreement = match growth {
        Some(g) => {
            let s = ball_size_series(&g.inverse, radius)?;
            let equal = s
                .sphere_sizes_u64()
                .is_some_and(|c| c.iter().zip(&bfs).all(|(&a, &b)| a == b as u64));
            Some(SeriesAgreement {
                bfs_sphere_sizes: bfs.clone(),
                series_sphere_sizes: s.sphere_sizes.iter().map(ToString::to_string).collect(),
                equal,
            })
        }
        None => None,
    };
    let stats = orientation_stats(&ball);
    let orientation = check_orientation(&stats);
    let k = m.rank();
    let ra = certificate.is_some_and(|c| c.right_angled_compact);
    let gabber = RhoLemma::ALL
        .into_iter()
        .filter(|&l| k >= l.min_rank() && (l != RhoLemma::RaCompact || ra))
        .map(|l| {
            Section::from_result(
                GabberParams::from_array(l.weights(k))
                    .and_then(|p| gabber_bound_on_ball(&ball, &stats, p)),
            )
        })
        .collect();

    let graph = RootedGraph::from_ball(&ball);
    let n_max = options.n_max.min(2 * radius.saturating_sub(1));
    let cycle_decomposition = Section::from_result(
        count_walk_spectra(
            &graph,
            n_max,
            SpectraOptions {
                self_avoiding_max: options.self_avoiding_max,
            },
        )
        .map_err(Error::from)
        .and_then(|s| decompose_spectra(s).map_err(Error::from)),
    );
    let walk_bound = match (&cycle_decomposition, certificate) {
        (Section::Ok(d), Some(c)) => {
            let first_violation = d
                .spectra
                .closed_walks
                .iter()
                .enumerate()
                .find(|&(n, &c_n)| c_n as f64 > c.rho_bound.powi(n as i32) * (1.0 + 1e-12))
                .map(|(n, _)| n);
            Some(WalkBoundCheck {
                rho_bound: c.rho_bound,
                holds: first_violation.is_none(),
                first_violation,
            })
        }
        _ => None,
    };
    Ok(OracleSection {
        radius,
        ball_vertices: ball.len(),
        series_agreement,
        orientation,
        gabber,
        cycle_decomposition,
        walk_bound,
    })
}

fn percolation_section(
    m: &CoxeterMatrix,
    radius: usize,
    grid: &[f64],
    sweep: SweepOptions,
    max_ball_size: usize,
) -> Result<SweepResult, Error> {
    let ball = build_ball(
        m,
        radius,
        BallOptions {
            max_vertices: max_ball_size,
            ..BallOptions::default()
        },
    )?;
    Ok(percolation_sweep(&ball, grid, sweep)?)
}

/// Parse `text` leniently and assemble the report. Only a malformed input
/// is an error; every later failure is recorded in its section.
pub fn run_report(text: &str, options: &ReportOptions) -> Result<Report, Error> {
    let (m, warning) = CoxeterMatrix::from_json_lenient(text)?;
    Ok(report_for_matrix(&m, warning, options))
}

pub fn report_for_matrix(
    m: &CoxeterMatrix,
    warning: Option<CoxeterError>,
    options: &ReportOptions,
) -> Report {
    let nerve = build_nerve(m);
    let flags = m.flags();
    let right_angled_compact_checks =
        (flags.right_angled && flags.compact).then(|| validate_right_angled_compact(m, &nerve));
    let growth = Section::from_result(growth_section(m, options.coefficients));
    let input_warning = warning.map(|w| SectionError::from(Error::from(w)));
    let certificate = match &input_warning {
        Some(w) => Section::Error(w.clone()),
        None => Section::from_result(certify_phase(m, options.certify)),
    };
    let oracles = options
        .oracles
        .then(|| Section::from_result(oracle_section(m, growth.ok(), certificate.ok(), options)));
    let percolation = options.percolation.as_ref().map(|(grid, sweep)| {
        let radius = options
            .radius
            .or_else(|| oracles.as_ref().and_then(|o| o.ok().map(|o| o.radius)))
            .unwrap_or(4);
        Section::from_result(percolation_section(
            m,
            radius,
            grid,
            *sweep,
            options.max_ball_size,
        ))
    });

    let mut kinds: Vec<ErrorKind> = vec![];
    kinds.extend(input_warning.as_ref().map(|w| w.kind));
    kinds.extend(growth.error_kind());
    kinds.extend(certificate.error_kind());
    kinds.extend(oracles.as_ref().and_then(Section::error_kind));
    kinds.extend(percolation.as_ref().and_then(Section::error_kind));
    let exit_code = kinds.into_iter().max().map_or(0, ErrorKind::exit_code);

    Report {
        schema_version: SCHEMA_VERSION,
        input: m.to_document(),
        input_warning,
        nerve: classify_nerve(&nerve),
        right_angled_compact_checks,
        growth,
        certificate,
        oracles,
        percolation,
        exit_code,
    }
}
