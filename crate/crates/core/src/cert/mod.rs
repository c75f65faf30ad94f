//! Certificates for `p_c < p_u` from an upper bound `b1` on the cycle growth
//! and a lower bound `b2` on the volume growth.

mod report;
mod table;

use serde::Serialize;
use thiserror::Error;

use crate::coxeter::{ClassFlags, CoxeterMatrix};
use crate::growth::{growth_rate, ra_reference_growth_rate, steinberg_inverse_growth, GrowthError};
use crate::nerve::{build_nerve, validate_right_angled_compact, ValidationCheck};
use crate::walks::{gamma_star_bound, rho_closed_form, BoundError, RhoLemma};

pub use report::{
    default_radius, report_for_matrix, run_report, GrowthSection, OracleSection, Report,
    ReportOptions, Section, SectionError, SeriesAgreement, WalkBoundCheck, DEFAULT_BALL_BUDGET,
    SCHEMA_VERSION,
};
pub use table::{
    general_margin, pipeline_bounds, reproduce_threshold_table, Estimator, ThresholdRow,
    ThresholdTable, TABLE_HORIZON,
};

/// Values are compared on this grid.
pub const VERDICT_GRID: f64 = 1e-12;

/// Agreement required between the Steinberg root and the closed form.
const CLOSED_FORM_TOLERANCE: f64 = 1e-9;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum CertError {
    #[error("input is not flagged hyperbolic_polyhedral")]
    NotPolyhedral,
    #[error("k = {0} is below 6; no lower bound on the growth rate is available")]
    RankTooSmall(usize),
    #[error("right-angled compact validation failed: {}", failed_names(.0))]
    RightAngledCompactFailed(Vec<ValidationCheck>),
    #[error("no cogrowth bound applies")]
    NoApplicableLemma,
    #[error(transparent)]
    Growth(#[from] GrowthError),
    #[error(transparent)]
    Bound(#[from] BoundError),
}

fn failed_names(checks: &[ValidationCheck]) -> String {
    checks
        .iter()
        .filter(|c| !c.passed)
        .map(|c| format!("{} ({})", c.name, c.detail))
        .collect::<Vec<_>>()
        .join(", ")
}

#[derive(Debug, Clone, Copy, Default)]
pub struct CertifyOptions {
    /// Use only this lemma instead of the best applicable one.
    pub lemma: Option<RhoLemma>,
    /// Skip the non-backtracking transform even when it applies.
    pub no_transform: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum GrowthSource {
    /// Least root of `1/W` from Steinberg's formula.
    SteinbergRoot,
    /// `(k - 4 + sqrt((k-4)^2 - 4)) / 2`.
    LowerBound,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    Certified,
    NotCertifiedByTheseBounds,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RhoCandidate {
    pub lemma: RhoLemma,
    pub value: Option<f64>,
    pub applicable: bool,
    pub note: String,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AuditEntry {
    pub check: String,
    pub passed: bool,
    pub detail: String,
}

impl AuditEntry {
    fn new(check: &str, passed: bool, detail: impl Into<String>) -> Self {
        Self {
            check: check.to_owned(),
            passed,
            detail: detail.into(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PhaseCertificate {
    pub k: usize,
    pub flags: ClassFlags,
    pub right_angled_compact: bool,
    pub candidates: Vec<RhoCandidate>,
    pub rho_lemma: RhoLemma,
    pub rho_bound: f64,
    pub gamma_star_applied: bool,
    pub b1: f64,
    pub gr_source: GrowthSource,
    pub b2: f64,
    pub margin: f64,
    pub verdict: Verdict,
    pub audit: Vec<AuditEntry>,
}

impl PhaseCertificate {
    pub fn is_certified(&self) -> bool {
        self.verdict == Verdict::Certified
    }
}

fn on_grid(x: f64) -> f64 {
    (x / VERDICT_GRID).round()
}

/// `b1 < b2` after rounding both to [`VERDICT_GRID`]; ties are not certified.
pub fn strictly_below(b1: f64, b2: f64) -> bool {
    on_grid(b1) < on_grid(b2)
}

/// The cogrowth bound and whether it went through the transform.
pub(crate) fn transformed(rho: f64, k: usize, allow: bool) -> Result<(f64, bool), BoundError> {
    if allow && rho >= 2.0 * (k as f64 - 1.0).sqrt() {
        Ok((gamma_star_bound(rho, k)?.value, true))
    } else {
        Ok((rho, false))
    }
}

pub fn certify_phase(
    m: &CoxeterMatrix,
    options: CertifyOptions,
) -> Result<PhaseCertificate, CertError> {
    let flags = m.flags();
    let k = m.rank();
    let mut audit = Vec::new();
    if !flags.hyperbolic_polyhedral {
        return Err(CertError::NotPolyhedral);
    }
    audit.push(AuditEntry::new(
        "hyperbolic_polyhedral",
        true,
        "asserted by the input; not verified geometrically",
    ));
    if k < 6 {
        return Err(CertError::RankTooSmall(k));
    }
    audit.push(AuditEntry::new("rank", true, format!("k = {k} >= 6")));

    let nerve = build_nerve(m);
    let asserted_ra = flags.right_angled && flags.compact;
    let mut ra_compact = false;
    if asserted_ra {
        let checks = validate_right_angled_compact(m, &nerve);
        for c in &checks {
            audit.push(AuditEntry::new(c.name, c.passed, c.detail.clone()));
        }
        if checks.iter().any(|c| !c.passed) {
            return Err(CertError::RightAngledCompactFailed(checks));
        }
        ra_compact = true;
    } else {
        audit.push(AuditEntry::new(
            "right_angled_compact",
            false,
            "not asserted; general pipeline",
        ));
    }

    let candidates: Vec<RhoCandidate> = RhoLemma::ALL
        .into_iter()
        .map(|lemma| {
            let forced_out = options.lemma.is_some_and(|l| l != lemma);
            let class_ok = lemma != RhoLemma::RaCompact || ra_compact;
            let closed = rho_closed_form(k, lemma);
            let note = match (&closed, class_ok, forced_out) {
                (Err(e), _, _) => e.to_string(),
                (_, false, _) => "needs a validated compact right-angled polyhedron".to_owned(),
                (_, _, true) => "excluded by options".to_owned(),
                (Ok(b), _, _) => b.preconditions.join("; "),
            };
            let note = if lemma == RhoLemma::Basic {
                format!("{note}; uses only r(v) <= 3")
            } else {
                note
            };
            RhoCandidate {
                lemma,
                value: closed.as_ref().ok().map(|b| b.value),
                applicable: closed.is_ok() && class_ok && !forced_out,
                note,
            }
        })
        .collect();
    let best = candidates
        .iter()
        .filter(|c| c.applicable)
        .filter_map(|c| c.value.map(|v| (v, c.lemma)))
        .min_by(|a, b| a.0.total_cmp(&b.0))
        .ok_or(CertError::NoApplicableLemma)?;
    let (rho_bound, rho_lemma) = best;
    audit.push(AuditEntry::new(
        "rho_bound",
        true,
        format!("{rho_lemma} gives {rho_bound}"),
    ));

    let (b1, gamma_star_applied) = transformed(rho_bound, k, !options.no_transform)?;
    audit.push(AuditEntry::new(
        "transform",
        true,
        if gamma_star_applied {
            format!(
                "rho >= 2 sqrt(k-1) = {}; b1 = {b1}",
                2.0 * (k as f64 - 1.0).sqrt()
            )
        } else {
            format!("not applied; b1 = rho = {b1}")
        },
    ));

    let closed_form = ra_reference_growth_rate(k)?;
    let (gr_source, b2) = if ra_compact {
        let ig = steinberg_inverse_growth(m, &nerve)?;
        let gr = growth_rate(&ig)?.growth_rate;
        let agrees = (gr - closed_form).abs() <= CLOSED_FORM_TOLERANCE * closed_form;
        audit.push(AuditEntry::new(
            "steinberg_matches_closed_form",
            agrees,
            format!("Steinberg root {gr}, closed form {closed_form}"),
        ));
        (GrowthSource::SteinbergRoot, gr)
    } else {
        audit.push(AuditEntry::new(
            "growth_lower_bound",
            true,
            format!("gr >= {closed_form} for k = {k} >= 6"),
        ));
        (GrowthSource::LowerBound, closed_form)
    };

    let preconditions_ok = audit
        .iter()
        .all(|a| a.passed || a.check == "right_angled_compact");
    let verdict = if preconditions_ok && strictly_below(b1, b2) {
        Verdict::Certified
    } else {
        Verdict::NotCertifiedByTheseBounds
    };
    Ok(PhaseCertificate {
        k,
        flags,
        right_angled_compact: ra_compact,
        candidates,
        rho_lemma,
        rho_bound,
        gamma_star_applied,
        b1,
        gr_source,
        b2,
        margin: b2 - b1,
        verdict,
        audit,
    })
}
