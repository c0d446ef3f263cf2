use std::time::Instant;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{
    derive_seed, poly_digest, random_hypersurface, sample_point_on_x, tag, verify_projection_degree, CampaignConfig,
    SamplerError,
};
use crate::contact::{chart_multiplicity, cone_ideal, normalize_chart, tangent_section_multiplicity, Hypersurface};
use crate::polar::{connecting_vertex_ideal, dimension_certificate, find_connecting_vertex, SearchConfig, WitnessOutcome};
use crate::polyring::{PrimeField, ProjPoint};

pub const GENERICITY_NOTE: &str =
    "general and very general hypotheses are interpreted as random coefficients over F_q, resampled once on failure";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Campaign {
    /// `dim V^h_p = n + 2 - h`.
    Dimension,
    /// `X ∩ T_pX` has multiplicity 2 at `p`.
    Multiplicity,
    /// Two points share a cone vertex.
    Connecting,
    /// Projection of `X ∩ V^h_p` from `p` has degree `d - h`.
    Projection,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TrialStatus {
    Pass,
    /// Failed on the first hypersurface, passed on a fresh one.
    Resampled,
    /// Failed on two independent hypersurfaces.
    Fail,
    ResourceCap,
    NoPoint,
}

/// One quantity computed in a trial.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Check {
    pub label: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub h: Option<u32>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub computed: Option<i64>,
    pub expected: i64,
    pub pass: bool,
    /// Outcome of a best-effort search that does not affect `pass`.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub soft: Option<bool>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<Vec<u64>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub detail: Option<serde_json::Value>,
}

impl Check {
    fn new(label: &str, h: Option<u32>, computed: Option<i64>, expected: i64, pass: bool) -> Self {
        Check {
            label: label.into(),
            h,
            computed,
            expected,
            pass,
            soft: None,
            witness: None,
            detail: None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Attempt {
    pub seed: u64,
    pub f_digest: String,
    /// Full polynomial, kept only for failed attempts.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub f: Option<String>,
    pub points: Vec<Vec<u64>>,
    /// Hypersurfaces discarded because a sampled point was singular.
    pub singular_resamples: u32,
    pub checks: Vec<Check>,
}

impl Attempt {
    fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.pass)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TrialRecord {
    pub trial: u32,
    pub status: TrialStatus,
    pub attempts: Vec<Attempt>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Summary {
    pub trials: u32,
    pub passed: u32,
    pub resampled: u32,
    pub failed: u32,
    pub resource_cap: u32,
    pub no_point: u32,
    pub soft_hits: u32,
    pub soft_misses: u32,
    /// Set when some trial failed on two independent hypersurfaces.
    pub red_flag: bool,
}

impl Summary {
    fn of(trials: &[TrialRecord]) -> Self {
        let mut s = Summary {
            trials: trials.len() as u32,
            ..Default::default()
        };
        for t in trials {
            match t.status {
                TrialStatus::Pass => s.passed += 1,
                TrialStatus::Resampled => s.resampled += 1,
                TrialStatus::Fail => s.failed += 1,
                TrialStatus::ResourceCap => s.resource_cap += 1,
                TrialStatus::NoPoint => s.no_point += 1,
            }
            if let Some(last) = t.attempts.last() {
                for c in &last.checks {
                    match c.soft {
                        Some(true) => s.soft_hits += 1,
                        Some(false) => s.soft_misses += 1,
                        None => {}
                    }
                }
            }
        }
        s.red_flag = s.failed > 0;
        s
    }

    pub fn accounted(&self) -> u32 {
        self.passed + self.resampled + self.failed + self.resource_cap + self.no_point
    }

    /// Every trial that produced a verdict passed, and at least one did.
    pub fn all_passed(&self) -> bool {
        self.failed == 0 && self.passed + self.resampled > 0
    }
}

/// Wall-clock figures, kept out of the serialized report so that reports are
/// reproducible byte for byte.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Timing {
    pub total_ms: f64,
    pub per_trial_ms: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CampaignReport {
    pub campaign: Campaign,
    pub config: CampaignConfig,
    pub genericity: String,
    pub trials: Vec<TrialRecord>,
    pub summary: Summary,
    #[serde(skip)]
    pub timing: Timing,
}

impl Eq for CampaignReport {}

impl CampaignReport {
    pub fn failures(&self) -> impl Iterator<Item = &TrialRecord> {
        self.trials.iter().filter(|t| t.status == TrialStatus::Fail)
    }
}

pub fn run_campaign(campaign: Campaign, cfg: &CampaignConfig) -> Result<CampaignReport, SamplerError> {
    cfg.validate(campaign)?;
    let start = Instant::now();
    let timed: Vec<(TrialRecord, f64)> = (0..cfg.trials)
        .into_par_iter()
        .map(|t| {
            let s = Instant::now();
            let rec = run_trial(campaign, cfg, t);
            (rec, s.elapsed().as_secs_f64() * 1e3)
        })
        .collect();
    let (trials, per_trial_ms): (Vec<_>, Vec<_>) = timed.into_iter().unzip();
    Ok(CampaignReport {
        campaign,
        config: cfg.clone(),
        genericity: GENERICITY_NOTE.into(),
        summary: Summary::of(&trials),
        trials,
        timing: Timing {
            total_ms: start.elapsed().as_secs_f64() * 1e3,
            per_trial_ms,
        },
    })
}

/// Reruns a single trial in isolation; it matches the record in the
/// campaign report.
pub fn replay_trial(campaign: Campaign, cfg: &CampaignConfig, trial: u32) -> Result<TrialRecord, SamplerError> {
    cfg.validate(campaign)?;
    Ok(run_trial(campaign, cfg, trial))
}

pub fn verify_dimension_theorem(cfg: &CampaignConfig) -> Result<CampaignReport, SamplerError> {
    run_campaign(Campaign::Dimension, cfg)
}

pub fn verify_multiplicity_lemma(cfg: &CampaignConfig) -> Result<CampaignReport, SamplerError> {
    run_campaign(Campaign::Multiplicity, cfg)
}

pub fn verify_connecting_lemma(cfg: &CampaignConfig) -> Result<CampaignReport, SamplerError> {
    run_campaign(Campaign::Connecting, cfg)
}

pub fn verify_projection_degrees(cfg: &CampaignConfig) -> Result<CampaignReport, SamplerError> {
    run_campaign(Campaign::Projection, cfg)
}

struct Sample {
    x: Hypersurface<PrimeField>,
    points: Vec<ProjPoint<PrimeField>>,
    singular_resamples: u32,
}

/// Draws hypersurfaces until the requested number of distinct smooth points
/// is found on one of them.
fn admit(cfg: &CampaignConfig, seed: u64, npoints: usize) -> Result<Sample, SamplerError> {
    let mut singular = 0;
    'draw: for k in 0..cfg.retry_budget as u64 {
        let x = random_hypersurface(cfg.n, cfg.d, cfg.modulus, derive_seed(seed, k, tag::HYPERSURFACE))?;
        let f = *x.field();
        let mut points: Vec<ProjPoint<PrimeField>> = Vec::new();
        let mut j = 0u64;
        while points.len() < npoints {
            if j >= cfg.retry_budget as u64 {
                continue 'draw;
            }
            let which = if points.is_empty() { tag::POINT } else { tag::SECOND_POINT };
            let s = match sample_point_on_x(&x, derive_seed(seed, k * 1000 + j, which), cfg.retry_budget) {
                Ok(s) => s,
                Err(SamplerError::RetriesExhausted { .. }) => continue 'draw,
                Err(e) => return Err(e),
            };
            j += 1;
            if !s.smooth_at {
                singular += 1;
                continue 'draw;
            }
            let p = s.proj(&f);
            if !points.contains(&p) {
                points.push(p);
            }
        }
        return Ok(Sample {
            x,
            points,
            singular_resamples: singular,
        });
    }
    Err(SamplerError::RetriesExhausted { budget: cfg.retry_budget })
}

fn run_trial(campaign: Campaign, cfg: &CampaignConfig, trial: u32) -> TrialRecord {
    let mut attempts = Vec::new();
    for a in 0..2u64 {
        let seed = derive_seed(cfg.master_seed, trial as u64, tag::ATTEMPT + 16 * a);
        let npoints = if campaign == Campaign::Connecting { 2 } else { 1 };
        let sample = match admit(cfg, seed, npoints) {
            Ok(s) => s,
            Err(e) => return finish(trial, attempts, &e),
        };
        let checks = match run_checks(campaign, cfg, &sample, seed) {
            Ok(c) => c,
            Err(e) => return finish(trial, attempts, &e),
        };
        let mut attempt = Attempt {
            seed,
            f_digest: poly_digest(sample.x.poly()),
            f: None,
            points: sample.points.iter().map(|p| p.coords().to_vec()).collect(),
            singular_resamples: sample.singular_resamples,
            checks,
        };
        if attempt.passed() {
            attempts.push(attempt);
            let status = if a == 0 { TrialStatus::Pass } else { TrialStatus::Resampled };
            return TrialRecord {
                trial,
                status,
                attempts,
                error: None,
            };
        }
        attempt.f = Some(sample.x.poly().to_string());
        attempts.push(attempt);
    }
    TrialRecord {
        trial,
        status: TrialStatus::Fail,
        attempts,
        error: None,
    }
}

fn finish(trial: u32, attempts: Vec<Attempt>, e: &SamplerError) -> TrialRecord {
    let status = if e.is_resource_cap() {
        TrialStatus::ResourceCap
    } else if matches!(e, SamplerError::RetriesExhausted { .. }) {
        TrialStatus::NoPoint
    } else {
        TrialStatus::Fail
    };
    TrialRecord {
        trial,
        status,
        attempts,
        error: Some(e.to_string()),
    }
}

fn run_checks(campaign: Campaign, cfg: &CampaignConfig, s: &Sample, seed: u64) -> Result<Vec<Check>, SamplerError> {
    let x = &s.x;
    let p = &s.points[0];
    let n = cfg.n as i64;
    let gb = cfg.gb();
    let mut checks = Vec::new();
    match campaign {
        Campaign::Dimension => {
            for h in cfg.h_lo..=cfg.h_hi {
                let dim = cone_ideal(x, p, h)?.projective_dimension(&gb)?;
                let expected = n + 2 - h as i64;
                checks.push(Check::new("cone_dimension", Some(h), Some(dim), expected, dim == expected));
            }
        }
        Campaign::Multiplicity => {
            let m = check_multiplicity(x, p)?;
            let as_i64 = |v: Option<u32>| v.map(i64::from);
            checks.push(Check::new("multiplicity", None, as_i64(m.substitution), 2, m.substitution == Some(2)));
            checks.push(Check::new("chart_multiplicity", None, as_i64(m.chart), 2, m.chart == Some(2)));
        }
        Campaign::Connecting => {
            let q2 = &s.points[1];
            let search = SearchConfig {
                step_cap: cfg.gb_step_cap,
                ..Default::default()
            };
            for h in cfg.h_lo..=cfg.h_hi {
                let expected = n + 2 - 2 * h as i64;
                let outcome = find_connecting_vertex(x, p, q2, h, derive_seed(seed, h as u64, tag::SEARCH), &search)?;
                let witness = match &outcome {
                    WitnessOutcome::Found { point, .. } => Some(point.clone()),
                    _ => None,
                };
                let ideal = connecting_vertex_ideal(x, p, q2, h)?;
                let cert = dimension_certificate(x, &ideal, h, witness.as_ref(), seed ^ h as u64, &search)?;
                let mut c = Check::new(
                    "connecting_dimension",
                    Some(h),
                    Some(cert.exact().or(cert.witness_local).unwrap_or(cert.lower)),
                    expected,
                    cert.consistent(),
                );
                c.soft = Some(witness.is_some());
                c.witness = witness.map(|w| w.coords().to_vec());
                let outcome_json = match &outcome {
                    WitnessOutcome::Found { attempt, method, .. } => {
                        serde_json::json!({ "found": true, "slice": attempt, "method": method })
                    }
                    WitnessOutcome::NotFound { exhaustive, attempts } => {
                        serde_json::json!({ "found": false, "exhaustive": exhaustive, "slices": attempts })
                    }
                    WitnessOutcome::OverBudget => serde_json::json!({ "found": false, "over_budget": true }),
                };
                c.detail = Some(serde_json::json!({ "certificate": cert, "search": outcome_json }));
                checks.push(c);
            }
        }
        Campaign::Projection => {
            for h in cfg.h_lo..=cfg.h_hi {
                let rec = match verify_projection_degree(x, p, h, derive_seed(seed, h as u64, tag::SEARCH), &gb) {
                    Ok(r) => r,
                    Err(SamplerError::Degenerate) => {
                        let mut c = Check::new("projection_degree", Some(h), None, cfg.d as i64 - h as i64, false);
                        c.detail = Some(serde_json::json!("degenerate"));
                        checks.push(c);
                        continue;
                    }
                    Err(e) => return Err(e),
                };
                let mut c = Check::new("projection_degree", Some(h), Some(rec.degree), rec.expected, rec.passes(cfg.d));
                c.detail = Some(serde_json::to_value(&rec).expect("serializable"));
                checks.push(c);
            }
        }
    }
    Ok(checks)
}

/// Multiplicity of `X ∩ T_pX` at `p` computed two ways.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct MultiplicityCheck {
    pub substitution: Option<u32>,
    pub chart: Option<u32>,
    /// Set unless both methods give exactly 2.
    pub flagged: bool,
}

pub fn check_multiplicity(x: &Hypersurface<PrimeField>, p: &ProjPoint<PrimeField>) -> Result<MultiplicityCheck, SamplerError> {
    let substitution = tangent_section_multiplicity(x, p)?;
    let chart = chart_multiplicity(&normalize_chart(x, p)?);
    Ok(MultiplicityCheck {
        substitution,
        chart,
        flagged: substitution != Some(2) || chart != Some(2),
    })
}
