use std::fmt::Write as _;

use anyhow::{anyhow, bail, Context, Result};
use serde_json::{json, Value};

use linecones::contact::{
    cone_ideal, line_contact_order, tangent_hyperplane, tangent_section_multiplicity, ContactOrder, Hypersurface,
};
use linecones::grobner::GbConfig;
use linecones::invariants::{conngon_table, moduli_dimensions, table_csv, BoundReport};
use linecones::polar::{
    check_reciprocity, connecting_vertex_ideal, dimension_certificate, find_connecting_vertex, polar_intersection_ideal,
    polar_poly, SearchConfig, WitnessOutcome,
};
use linecones::polyring::{parse_poly_mod, PrimeField, ProjPoint, DEFAULT_MODULUS};
use linecones::sampler::{
    run_campaign, verify_projection_degree, Campaign, CampaignConfig, CampaignReport,
};

use crate::args::{CampaignArgs, Command, Global, PolyArgs, VerifyKind};
use crate::output::{to_value, Report};

/// How a successful run should exit.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Verdict {
    Ok,
    HardFail,
    ResourceCap,
}

pub struct Ctx {
    pub global: Global,
    file: Option<CampaignConfig>,
}

impl Ctx {
    pub fn new(global: Global) -> Result<Self> {
        let file = match &global.config {
            Some(path) => {
                let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
                Some(toml::from_str(&text).with_context(|| format!("parsing {}", path.display()))?)
            }
            None => None,
        };
        Ok(Ctx { global, file })
    }

    fn modulus(&self) -> u64 {
        self.global
            .modulus
            .or(self.file.as_ref().map(|c| c.modulus))
            .unwrap_or(DEFAULT_MODULUS)
    }

    fn gb(&self) -> GbConfig {
        let mut gb = GbConfig::default();
        if let Some(cap) = self.global.gb_step_cap.or(self.file.as_ref().map(|c| c.gb_step_cap)) {
            gb.step_cap = cap;
        }
        gb
    }

    fn field(&self) -> Result<PrimeField> {
        PrimeField::new(self.modulus()).map_err(|e| anyhow!("--modulus: {e}"))
    }

    fn hypersurface(&self, p: &PolyArgs) -> Result<Hypersurface<PrimeField>> {
        let poly = parse_poly_mod(&p.poly, p.n + 2, self.modulus()).map_err(|e| anyhow!("--poly: {e}"))?;
        Ok(Hypersurface::new(poly)?)
    }

    fn point(&self, flag: &str, text: &str) -> Result<ProjPoint<PrimeField>> {
        ProjPoint::parse(&self.field()?, text).map_err(|e| anyhow!("--{flag}: {e}"))
    }

    fn base_config(&self, p: &PolyArgs) -> Value {
        json!({ "poly": p.poly, "n": p.n, "modulus": self.modulus() })
    }
}

/// Parses `h` or `lo..hi`.
pub fn parse_h_range(text: &str) -> Result<(u32, u32)> {
    let parse = |s: &str| s.trim().parse::<u32>().map_err(|_| anyhow!("--h: cannot parse {s:?}"));
    match text.split_once("..") {
        Some((lo, hi)) => {
            let (lo, hi) = (parse(lo)?, parse(hi)?);
            if lo > hi {
                bail!("--h: empty range {lo}..{hi}");
            }
            Ok((lo, hi))
        }
        None => {
            let h = parse(text)?;
            Ok((h, h))
        }
    }
}

fn vec_str(v: &[u64]) -> String {
    v.iter().map(u64::to_string).collect::<Vec<_>>().join(",")
}

fn contact_value(c: ContactOrder) -> Value {
    match c {
        ContactOrder::Finite(k) => json!(k),
        ContactOrder::Infinite => json!("infinite"),
    }
}

pub fn run(ctx: &Ctx, cmd: &Command) -> Result<(Report, Verdict)> {
    match cmd {
        Command::Cone { poly, point, h } => cone(ctx, poly, point, *h),
        Command::Dim { poly, point, h } => dim(ctx, poly, point, h),
        Command::Contact { poly, point, direction } => contact(ctx, poly, point, direction.as_deref()),
        Command::Polar { poly, point, s, h, at } => polar(ctx, poly, point, *s, *h, at.as_deref()),
        Command::Connect {
            poly,
            point,
            point2,
            h,
            seed,
        } => connect(ctx, poly, point, point2, *h, *seed),
        Command::Bounds { n, d, h } => bounds(ctx, *n, *d, *h),
        Command::Table { n_min, n_max } => table(*n_min, *n_max),
        Command::Verify { kind } => verify(ctx, kind),
        Command::Project { poly, point, h, seed } => project(ctx, poly, point, *h, *seed),
    }
}

fn cone(ctx: &Ctx, pa: &PolyArgs, point: &str, h: u32) -> Result<(Report, Verdict)> {
    let x = ctx.hypersurface(pa)?;
    let p = ctx.point("point", point)?;
    let cone = cone_ideal(&x, &p, h)?;
    let dim = cone.projective_dimension(&ctx.gb())?;
    let gens: Vec<String> = cone.generators.iter().map(|g| g.to_string()).collect();
    let mut text = String::new();
    for (i, g) in gens.iter().enumerate() {
        writeln!(text, "G_{} = {g}", i + 1)?;
    }
    writeln!(text, "dim = {dim}")?;
    let mut config = ctx.base_config(pa);
    config["point"] = json!(p.coords());
    config["h"] = json!(h);
    let expected = x.n() as i64 + 2 - h as i64;
    let report = Report::new(
        config,
        json!({ "generators": gens, "dimension": dim }),
        json!({ "expected_dimension": expected, "matches_expected": dim == expected }),
        text,
    );
    Ok((report, Verdict::Ok))
}

fn dim(ctx: &Ctx, pa: &PolyArgs, point: &str, h: &str) -> Result<(Report, Verdict)> {
    let x = ctx.hypersurface(pa)?;
    let p = ctx.point("point", point)?;
    let (lo, hi) = parse_h_range(h)?;
    let top = (x.n() as u32 + 1).min(x.d());
    if lo < 2 || hi > top {
        bail!("--h: need 2 <= h <= min(n + 1, d) = {top}");
    }
    let mut rows = Vec::new();
    let mut results = Vec::new();
    let mut text = String::new();
    let mut all = true;
    for h in lo..=hi {
        let dim = cone_ideal(&x, &p, h)?.projective_dimension(&ctx.gb())?;
        let expected = x.n() as i64 + 2 - h as i64;
        all &= dim == expected;
        writeln!(text, "h = {h}: dim = {dim} (expected {expected})")?;
        rows.push(vec![h.to_string(), dim.to_string(), expected.to_string(), (dim == expected).to_string()]);
        results.push(json!({ "h": h, "dimension": dim, "expected": expected, "pass": dim == expected }));
    }
    let mut config = ctx.base_config(pa);
    config["point"] = json!(p.coords());
    config["h"] = json!([lo, hi]);
    let mut summary = json!({ "all_pass": all });
    if !all {
        summary["witness"] = json!({ "poly": x.poly().to_string(), "point": p.coords() });
    }
    let mut report = Report::new(config, json!(results), summary, text);
    report.csv = Some((vec!["h".into(), "dimension".into(), "expected".into(), "pass".into()], rows));
    Ok((report, if all { Verdict::Ok } else { Verdict::HardFail }))
}

fn contact(ctx: &Ctx, pa: &PolyArgs, point: &str, direction: Option<&str>) -> Result<(Report, Verdict)> {
    let x = ctx.hypersurface(pa)?;
    let p = ctx.point("point", point)?;
    let mut results = json!({});
    let mut text = String::new();
    if let Some(dir) = direction {
        let v = ctx.point("direction", dir)?;
        let c = line_contact_order(&x, &p, v.coords())?;
        results["contact_order"] = contact_value(c);
        writeln!(text, "contact order = {}", contact_value(c))?;
    }
    if x.is_smooth_at(&p)? {
        let t = tangent_hyperplane(&x, &p)?;
        let m = tangent_section_multiplicity(&x, &p)?;
        results["tangent_hyperplane"] = json!(t.to_string());
        results["tangent_section_multiplicity"] = json!(m);
        writeln!(text, "tangent hyperplane = {t}")?;
        match m {
            Some(m) => writeln!(text, "multiplicity of X ∩ T_pX at p = {m}")?,
            None => writeln!(text, "T_pX lies in X")?,
        }
    } else {
        results["singular"] = json!(true);
        writeln!(text, "p is a singular point of X")?;
    }
    let mut config = ctx.base_config(pa);
    config["point"] = json!(p.coords());
    config["direction"] = json!(direction);
    Ok((Report::new(config, results, json!({}), text), Verdict::Ok))
}

fn polar(ctx: &Ctx, pa: &PolyArgs, point: &str, s: u32, h: Option<u32>, at: Option<&str>) -> Result<(Report, Verdict)> {
    let x = ctx.hypersurface(pa)?;
    let q = ctx.point("point", point)?;
    let pol = polar_poly(&x, &q, s)?;
    let mut text = format!("Pol^{s}_q = {pol}\n");
    let mut results = json!({ "polar": pol.to_string(), "degree": x.d() - s });
    let mut verdict = Verdict::Ok;
    if let Some(h) = h {
        let dim = polar_intersection_ideal(&x, &q, h)?.projective_dimension(&ctx.gb())?;
        results["delta_dimension"] = json!(dim);
        writeln!(text, "dim Δ_(q,{h}) = {dim}")?;
        if let Some(at) = at {
            let p = ctx.point("at", at)?;
            let member = check_reciprocity(&x, &p, &q, h)?;
            let c = line_contact_order(&x, &p, q.coords())?;
            let agree = member == c.at_least(h);
            if !agree {
                verdict = Verdict::HardFail;
            }
            results["member"] = json!(member);
            results["contact_order"] = contact_value(c);
            results["reciprocity_holds"] = json!(agree);
            writeln!(text, "p in Δ_(q,{h}): {member}; contact order of pq at p = {}", contact_value(c))?;
        }
    }
    let mut config = ctx.base_config(pa);
    config["point"] = json!(q.coords());
    config["s"] = json!(s);
    config["h"] = json!(h);
    config["at"] = json!(at);
    Ok((Report::new(config, results, json!({}), text), verdict))
}

fn connect(ctx: &Ctx, pa: &PolyArgs, point: &str, point2: &str, h: u32, seed: u64) -> Result<(Report, Verdict)> {
    let x = ctx.hypersurface(pa)?;
    let q = ctx.point("point", point)?;
    let q2 = ctx.point("point2", point2)?;
    let search = SearchConfig {
        step_cap: ctx.gb().step_cap,
        ..Default::default()
    };
    let ideal = connecting_vertex_ideal(&x, &q, &q2, h)?;
    let outcome = find_connecting_vertex(&x, &q, &q2, h, seed, &search)?;
    let witness = match &outcome {
        WitnessOutcome::Found { point, .. } => Some(point.clone()),
        _ => None,
    };
    let cert = dimension_certificate(&x, &ideal, h, witness.as_ref(), seed, &search)?;
    let mut text = format!(
        "dimension >= {} (expected {}), upper {:?}, local at witness {:?}\n",
        cert.lower, cert.expected, cert.upper, cert.witness_local
    );
    let found = match &outcome {
        WitnessOutcome::Found { point, .. } => {
            writeln!(text, "vertex p = {}", vec_str(point.coords()))?;
            json!({ "found": true, "point": point.coords() })
        }
        WitnessOutcome::NotFound { exhaustive, attempts } => {
            writeln!(text, "no rational vertex found ({attempts} slices, exhaustive: {exhaustive})")?;
            json!({ "found": false, "exhaustive": exhaustive, "slices": attempts })
        }
        WitnessOutcome::OverBudget => {
            writeln!(text, "search skipped: over budget")?;
            json!({ "found": false, "over_budget": true })
        }
    };
    let mut config = ctx.base_config(pa);
    config["point"] = json!(q.coords());
    config["point2"] = json!(q2.coords());
    config["h"] = json!(h);
    config["seed"] = json!(seed);
    let verdict = if cert.consistent() { Verdict::Ok } else { Verdict::HardFail };
    let report = Report::new(
        config,
        json!({ "certificate": to_value(&cert), "witness": found }),
        json!({ "dimension_bound_holds": cert.consistent(), "witness_found": witness.is_some() }),
        text,
    );
    Ok((report, verdict))
}

fn bounds(ctx: &Ctx, n: u32, d: u32, h: Option<u32>) -> Result<(Report, Verdict)> {
    let permissive = ctx.global.permissive;
    let b = BoundReport::new(n, d, permissive);
    let mut results = to_value(&b);
    if let Some(h) = h {
        results["moduli"] = to_value(&moduli_dimensions(n, d, h, permissive)?);
    }
    let mut rows = Vec::new();
    let mut text = String::new();
    let flat = results.as_object().expect("object").clone();
    for (k, v) in &flat {
        if v.is_number() || v.is_boolean() || v.is_null() {
            rows.push(vec![k.clone(), v.to_string()]);
            writeln!(text, "{k} = {v}")?;
        }
    }
    for e in &b.irr_k {
        match e.exact {
            Some(v) => writeln!(text, "irr_{} = {}", e.k, v)?,
            None => writeln!(text, "irr_{} >= {}", e.k, e.lower)?,
        }
    }
    for note in &b.notes {
        writeln!(text, "note: {note}")?;
    }
    let mut report = Report::new(
        json!({ "n": n, "d": d, "h": h, "permissive": permissive }),
        results,
        json!({ "hypotheses_met": b.hypotheses_met, "conngon_exact": b.conngon_exact }),
        text,
    );
    report.csv = Some((vec!["field".into(), "value".into()], rows));
    Ok((report, Verdict::Ok))
}

fn table(n_min: u32, n_max: u32) -> Result<(Report, Verdict)> {
    let rows = conngon_table(n_min, n_max)?;
    let csv = table_csv(&rows);
    let mut text = String::new();
    for r in &rows {
        match r.conngon {
            Some(c) => writeln!(text, "n = {:>2}: conngon = {c} ({})", r.n, r.status)?,
            None => writeln!(text, "n = {:>2}: {} <= conngon <= {}", r.n, r.lower, r.upper)?,
        }
    }
    let results: Vec<Value> = rows
        .iter()
        .map(|r| {
            json!({
                "n": r.n,
                "status": r.status.to_string(),
                "lower": r.lower.to_string(),
                "upper": r.upper.to_string(),
                "conngon": r.conngon.map(|c| c.to_string()),
            })
        })
        .collect();
    let gaps: Vec<u32> = rows.iter().filter(|r| r.conngon.is_none()).map(|r| r.n).collect();
    let mut report = Report::new(
        json!({ "n_min": n_min, "n_max": n_max }),
        json!(results),
        json!({ "rows": rows.len(), "open_rows": gaps }),
        text,
    );
    report.raw_csv = Some(csv);
    Ok((report, Verdict::Ok))
}

fn campaign_config(ctx: &Ctx, kind: Campaign, a: &CampaignArgs) -> Result<CampaignConfig> {
    let mut cfg = ctx.file.clone().unwrap_or_default();
    if let Some(n) = a.n {
        cfg.n = n;
    }
    if let Some(d) = a.d {
        cfg.d = d;
    }
    if let Some(t) = a.trials {
        cfg.trials = t;
    }
    if let Some(s) = a.seed {
        cfg.master_seed = s;
    }
    if let Some(r) = a.retry_budget {
        cfg.retry_budget = r;
    }
    cfg.modulus = ctx.modulus();
    cfg.gb_step_cap = ctx.gb().step_cap;
    match &a.h {
        Some(h) => (cfg.h_lo, cfg.h_hi) = parse_h_range(h)?,
        None if ctx.file.is_none() => {
            let top = (cfg.n as u32 + 1).min(cfg.d);
            (cfg.h_lo, cfg.h_hi) = match kind {
                Campaign::Dimension | Campaign::Multiplicity => (2, top),
                Campaign::Connecting => (2, linecones::polar::max_connecting_h(cfg.n).min(top)),
                Campaign::Projection => (top, top),
            };
        }
        None => {}
    }
    Ok(cfg)
}

fn verify(ctx: &Ctx, kind: &VerifyKind) -> Result<(Report, Verdict)> {
    let (campaign, args) = match kind {
        VerifyKind::Dimension(a) => (Campaign::Dimension, a),
        VerifyKind::Multiplicity(a) => (Campaign::Multiplicity, a),
        VerifyKind::Connecting(a) => (Campaign::Connecting, a),
        VerifyKind::Projection(a) => (Campaign::Projection, a),
    };
    let cfg = campaign_config(ctx, campaign, args)?;
    let report = run_campaign(campaign, &cfg)?;
    Ok(campaign_report(&report))
}

fn campaign_report(r: &CampaignReport) -> (Report, Verdict) {
    let s = &r.summary;
    let mut text = format!(
        "{:?} campaign, n = {}, d = {}, q = {}, h = {}..{}, {} trials\n",
        r.campaign, r.config.n, r.config.d, r.config.modulus, r.config.h_lo, r.config.h_hi, s.trials
    );
    let _ = writeln!(
        text,
        "passed {}, resampled {}, failed {}, resource cap {}, no point {}",
        s.passed, s.resampled, s.failed, s.resource_cap, s.no_point
    );
    if s.soft_hits + s.soft_misses > 0 {
        let _ = writeln!(text, "witnesses found {}/{}", s.soft_hits, s.soft_hits + s.soft_misses);
    }
    let _ = writeln!(text, "wall clock {:.0} ms", r.timing.total_ms);
    let _ = writeln!(text, "note: {}", r.genericity);
    for t in r.failures() {
        if let Some(a) = t.attempts.last() {
            let _ = writeln!(text, "FAIL trial {} seed {}: {}", t.trial, a.seed, a.f.as_deref().unwrap_or(""));
        }
    }
    let mut rows = Vec::new();
    for t in &r.trials {
        if let Some(a) = t.attempts.last() {
            for c in &a.checks {
                rows.push(vec![
                    t.trial.to_string(),
                    to_value(&t.status).as_str().unwrap_or_default().to_string(),
                    a.seed.to_string(),
                    c.label.clone(),
                    c.h.map(|h| h.to_string()).unwrap_or_default(),
                    c.computed.map(|v| v.to_string()).unwrap_or_default(),
                    c.expected.to_string(),
                    c.pass.to_string(),
                ]);
            }
        }
    }
    let mut config = to_value(&r.config);
    config["campaign"] = to_value(&r.campaign);
    config["genericity"] = json!(r.genericity);
    let mut report = Report::new(config, to_value(&r.trials), to_value(s), text);
    report.csv = Some((
        ["trial", "status", "seed", "check", "h", "computed", "expected", "pass"]
            .map(String::from)
            .to_vec(),
        rows,
    ));
    let verdict = if s.failed > 0 {
        Verdict::HardFail
    } else if s.resource_cap > 0 {
        Verdict::ResourceCap
    } else {
        Verdict::Ok
    };
    (report, verdict)
}

fn project(ctx: &Ctx, pa: &PolyArgs, point: &str, h: u32, seed: u64) -> Result<(Report, Verdict)> {
    let x = ctx.hypersurface(pa)?;
    let p = ctx.point("point", point)?;
    let rec = verify_projection_degree(&x, &p, h, seed, &ctx.gb())?;
    let ok = rec.passes(x.d());
    let mut text = format!(
        "projection degree = {} (expected {}), Λ has degree {}\n",
        rec.degree, rec.expected, rec.lambda_degree
    );
    for f in &rec.fibers {
        writeln!(
            text,
            "line {}: contact {} + residual {} = {}",
            vec_str(&f.direction),
            f.contact,
            f.residual,
            f.contact + f.residual
        )?;
    }
    let mut config = ctx.base_config(pa);
    config["point"] = json!(p.coords());
    config["h"] = json!(h);
    config["seed"] = json!(seed);
    let report = Report::new(config, to_value(&rec), json!({ "pass": ok }), text);
    Ok((report, if ok { Verdict::Ok } else { Verdict::HardFail }))
}
