use std::f64::consts::PI;
use std::sync::Arc;

use anyhow::{ensure, Context, Result};
use rand::Rng;
use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use sofic::config::{MapSpec, SoficSpec, SpaceSpec};
use sofic::constructions::{branched_double_cover, make_cocycle, FundamentalDomain};
use sofic::experiments::{run_sequence, unimodularity_obstruction, ApproximationSequence, ExperimentReport};
use sofic::group::{GroupDescriptor, GroupElement, GroupModel};
use sofic::rng::seeded;
use sofic::space::{check_axioms as check, injrad_profile, sofic_check, LocalSpace, Method, ProfileRow, SoficOptions, SpacePoint};

pub struct Outcome {
    pub passed: bool,
    pub json: Value,
    pub csv: String,
    /// One line for stderr.
    pub summary: String,
    /// Human-readable output replacing the report on stdout.
    pub text: Option<String>,
}

fn parse<C: DeserializeOwned>(text: &str) -> Result<C> {
    serde_json::from_str(text).context("invalid config")
}

fn method_name(m: Method) -> &'static str {
    match m {
        Method::Exact => "exact",
        Method::Statistical => "statistical",
    }
}

fn sofic_options(n_points: Option<usize>, monte_carlo: bool, seed: u64) -> SoficOptions {
    let mut o = if monte_carlo { SoficOptions::monte_carlo(10_000, seed) } else { SoficOptions::seeded(seed) };
    if let Some(n) = n_points {
        o.n_points = n;
    }
    o
}

type Space = Arc<dyn LocalSpace<f64>>;

fn build_family(specs: &[SpaceSpec]) -> Result<Vec<Space>> {
    ensure!(!specs.is_empty(), "family is empty");
    specs.iter().map(|s| s.build::<f64>().map_err(Into::into)).collect()
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct AxiomsConfig {
    space: SpaceSpec,
    #[serde(default = "default_axiom_points")]
    n_points: usize,
    #[serde(default = "default_axiom_group")]
    n_group: usize,
}

fn default_axiom_points() -> usize {
    1000
}

fn default_axiom_group() -> usize {
    100
}

pub fn check_axioms(text: &str, seed: u64) -> Result<Outcome> {
    let c: AxiomsConfig = parse(text)?;
    let m = c.space.build::<f64>()?;
    let r = check(m.as_ref(), c.n_points, c.n_group, seed);
    let mut csv = String::from("axiom,checked,violations,passed\n");
    for a in &r.axioms {
        csv.push_str(&format!("{},{},{},{}\n", a.axiom, a.checked, a.violations, a.passed));
    }
    let failed: Vec<String> = r.axioms.iter().filter(|a| !a.passed).map(|a| a.axiom.to_string()).collect();
    let summary = if r.passed {
        format!("{}: all axioms hold", r.space)
    } else {
        format!("{}: axiom(s) {} violated", r.space, failed.join(", "))
    };
    Ok(Outcome { passed: r.passed, json: serde_json::to_value(&r)?, csv, summary, text: None })
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct SoficConfig {
    space: SpaceSpec,
    sofic: SoficSpec,
    #[serde(default)]
    n_points: Option<usize>,
    #[serde(default)]
    monte_carlo: bool,
}

pub fn sofic(text: &str, seed: u64) -> Result<Outcome> {
    let c: SoficConfig = parse(text)?;
    let m = c.space.build::<f64>()?;
    let w = c.sofic.build(m.group())?;
    let r = sofic_check(m.as_ref(), &w, &sofic_options(c.n_points, c.monte_carlo, seed))?;
    let csv = format!(
        "space,fraction,epsilon,verdict,method,n_points\n{},{},{},{},{},{}\n",
        r.space,
        r.fraction,
        r.epsilon,
        if r.verdict.passed() { "pass" } else { "fail" },
        method_name(r.method),
        r.n_points
    );
    let summary = format!("{}: fraction {} against 1 - epsilon = {}", r.space, r.fraction, 1.0 - r.epsilon);
    Ok(Outcome { passed: r.verdict.passed(), json: serde_json::to_value(&r)?, csv, summary, text: None })
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct SequenceConfig {
    #[serde(default)]
    group: Option<GroupDescriptor>,
    family: Vec<SpaceSpec>,
    windows: Vec<SoficSpec>,
    /// One run per seed; `--seed` when absent.
    #[serde(default)]
    seeds: Option<Vec<u64>>,
    #[serde(default)]
    n_points: Option<usize>,
    #[serde(default)]
    monte_carlo: bool,
}

fn check_group(expected: &Option<GroupDescriptor>, spaces: &[Space]) -> Result<()> {
    if let Some(d) = expected {
        let want = d.build::<f64>()?.name();
        for m in spaces {
            ensure!(m.group().name() == want, "{} acts by {}, config names {want}", m.name(), m.group().name());
        }
    }
    Ok(())
}

pub fn sequence(text: &str, seed: u64) -> Result<Outcome> {
    let c: SequenceConfig = parse(text)?;
    let spaces = build_family(&c.family)?;
    check_group(&c.group, &spaces)?;
    let windows = spaces.iter().zip(&c.windows).map(|(m, w)| w.build(m.group())).collect::<sofic::Result<Vec<_>>>()?;
    ensure!(windows.len() == c.windows.len() && c.windows.len() == spaces.len(), "family and windows differ in length");
    let seq = ApproximationSequence::new(spaces, windows)?;
    let seeds = c.seeds.unwrap_or_else(|| vec![seed]);
    ensure!(!seeds.is_empty(), "seeds is empty");
    let reports: Vec<ExperimentReport> =
        seeds.iter().map(|&s| run_sequence(&seq, &sofic_options(c.n_points, c.monte_carlo, s))).collect::<sofic::Result<_>>()?;
    let passed = reports.iter().all(|r| r.is_sofic_approximation);
    let csv = if let [r] = reports.as_slice() {
        r.csv()
    } else {
        let mut out = format!("seed,{}\n", ExperimentReport::CSV_HEADER);
        for r in &reports {
            for line in r.csv().lines().skip(1) {
                out.push_str(&format!("{},{line}\n", r.seed));
            }
        }
        out
    };
    let json = if let [r] = reports.as_slice() { serde_json::to_value(r)? } else { json!({ "runs": reports }) };
    let summary = match reports.iter().find(|r| !r.is_sofic_approximation) {
        None => format!("{} indices pass on {} seed(s)", seq.len(), reports.len()),
        Some(r) => format!("seed {}: first failure at index {:?}", r.seed, r.first_failure),
    };
    Ok(Outcome { passed, json, csv, summary, text: None })
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct InjradConfig {
    family: Vec<SpaceSpec>,
    rhos: Vec<f64>,
    #[serde(default = "default_profile_points")]
    n_points: usize,
    /// Rows below `1 - epsilon` fail the run.
    #[serde(default)]
    epsilon: Option<f64>,
}

fn default_profile_points() -> usize {
    2000
}

pub fn injrad(text: &str, seed: u64) -> Result<Outcome> {
    let c: InjradConfig = parse(text)?;
    ensure!(!c.rhos.is_empty() && c.rhos.iter().all(|r| *r > 0.0), "rhos must be positive and nonempty");
    if let Some(e) = c.epsilon {
        ensure!(e > 0.0 && e <= 1.0, "epsilon must lie in (0, 1]");
    }
    let spaces = build_family(&c.family)?;
    let refs: Vec<&dyn LocalSpace<f64>> = spaces.iter().map(|m| m.as_ref()).collect();
    let opts = SoficOptions::seeded(seed).membership;
    let mut rows: Vec<ProfileRow> = Vec::new();
    for &rho in &c.rhos {
        rows.extend(injrad_profile(&refs, rho, c.n_points, &opts, seed)?);
    }
    let below = |r: &ProfileRow| c.epsilon.is_some_and(|e| r.fraction < 1.0 - e);
    let passed = !rows.iter().any(below);
    let mut csv = format!("{}\n", ProfileRow::CSV_HEADER);
    for r in &rows {
        csv.push_str(&r.csv());
        csv.push('\n');
    }
    let summary = format!("{} profile rows, {} below threshold", rows.len(), rows.iter().filter(|r| below(r)).count());
    Ok(Outcome { passed, json: json!({ "epsilon": c.epsilon, "rows": rows }), csv, summary, text: None })
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct InduceConfig {
    map: MapSpec,
    #[serde(default)]
    offset: Option<Vec<f64>>,
    sofic: SoficSpec,
    #[serde(default = "default_triples")]
    n_triples: usize,
    #[serde(default)]
    n_points: Option<usize>,
}

fn default_triples() -> usize {
    1000
}

#[derive(Serialize)]
struct InduceReport {
    space: String,
    carrier_size: usize,
    total_volume: Option<f64>,
    cocycle_checked: usize,
    cocycle_failures: usize,
    sofic: sofic::space::SoficReport,
}

pub fn induce(text: &str, seed: u64) -> Result<Outcome> {
    let c: InduceConfig = parse(text)?;
    let v = c.map.build()?;
    let n = v.group().n_ints();
    let spec = SpaceSpec::Induced { map: c.map.clone(), offset: c.offset.clone() };
    let m = spec.build::<f64>()?;
    let domain = match &c.offset {
        Some(s) => FundamentalDomain::shifted(s)?,
        None => FundamentalDomain::unit(n),
    };
    let cocycle = make_cocycle(&domain);
    let mut rng = seeded(seed);
    let lo = c.offset.clone().unwrap_or_else(|| vec![0.0; n]);
    let mut failures = 0;
    for _ in 0..c.n_triples {
        let x: Vec<f64> = lo.iter().map(|&a| a + rng.gen::<f64>()).collect();
        let g: Vec<f64> = (0..n).map(|_| rng.gen_range(-5.0..5.0)).collect();
        let k: Vec<f64> = (0..n).map(|_| rng.gen_range(-5.0..5.0)).collect();
        failures += !cocycle.equation_holds(&x, &g, &k)? as usize;
    }
    let w = c.sofic.build(m.group())?;
    let s = sofic_check(m.as_ref(), &w, &sofic_options(c.n_points, false, seed))?;
    let r = InduceReport {
        space: m.name(),
        carrier_size: v.carrier_size(),
        total_volume: m.total_volume().finite(),
        cocycle_checked: c.n_triples,
        cocycle_failures: failures,
        sofic: s,
    };
    let passed = failures == 0 && r.sofic.verdict.passed();
    let csv = format!(
        "space,carrier_size,total_volume,cocycle_failures,fraction,epsilon,method\n{},{},{},{},{},{},{}\n",
        r.space,
        r.carrier_size,
        r.total_volume.map_or("inf".to_string(), |x| x.to_string()),
        failures,
        r.sofic.fraction,
        r.sofic.epsilon,
        method_name(r.sofic.method)
    );
    let summary = format!("{}: volume {:?}, fraction {}, {} cocycle failures", r.space, r.total_volume, r.sofic.fraction, failures);
    Ok(Outcome { passed, json: serde_json::to_value(&r)?, csv, summary, text: None })
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct UnimodularConfig {
    group: GroupDescriptor,
    family: Vec<SpaceSpec>,
    g: Vec<f64>,
    window: SoficSpec,
    #[serde(default)]
    n_points: Option<usize>,
    #[serde(default)]
    monte_carlo: bool,
}

pub fn unimodular(text: &str, seed: u64) -> Result<Outcome> {
    let c: UnimodularConfig = parse(text)?;
    let group: GroupModel<f64> = c.group.build()?;
    let family = build_family(&c.family)?;
    check_group(&Some(c.group.clone()), &family)?;
    let g = group.from_coords(&c.g)?;
    let w = c.window.build(&group)?;
    let r = unimodularity_obstruction(&group, &family, &g, &w, &sofic_options(c.n_points, c.monte_carlo, seed))?;
    // nothing is claimed when vacuous; otherwise every candidate must stay below 1 - epsilon
    let passed = r.vacuous || r.certified;
    let mut csv = String::from("space,fraction,method,below\n");
    for row in &r.candidates {
        csv.push_str(&format!("{},{},{},{}\n", row.space, row.fraction, method_name(row.method), row.below));
    }
    let summary = r.note.clone();
    Ok(Outcome { passed, json: serde_json::to_value(&r)?, csv, summary, text: None })
}

fn angle_close(a: f64, b: f64) -> bool {
    let d = (a - b).rem_euclid(4.0 * PI);
    d.min(4.0 * PI - d) < 1e-9
}

pub fn branched_demo() -> Outcome {
    let m = branched_double_cover::<f64>();
    let group = m.group().clone();
    let p = SpacePoint::coords(&[1.0, 0.0]);
    // g = i - 1, h = -i - 1, k = 1 - i as (re, im)
    let g = GroupElement::reals(&[-1.0, 1.0]);
    let h = GroupElement::reals(&[-1.0, -1.0]);
    let k = GroupElement::reals(&[1.0, -1.0]);
    let ghk = group.mul(&group.mul(&g, &h), &k);
    let pg = m.act(&p, &g);
    let pgh = pg.as_ref().and_then(|q| m.act(q, &h));
    let pghk = pgh.as_ref().and_then(|q| m.act(q, &k));
    let direct = m.act(&p, &ghk);
    let steps = [("p.g", &pg, PI / 2.0, "pi/2"), ("p.g.h", &pgh, PI, "pi"), ("p.g.h.k", &pghk, 1.5 * PI, "3pi/2"), ("p.ghk", &direct, -PI / 2.0, "-pi/2")];
    let mut text = String::from("p = (1, 0), g = i - 1, h = -i - 1, k = 1 - i\n");
    let mut csv = String::from("step,r,theta,expected\n");
    let mut rows = Vec::new();
    let mut ok = true;
    for (name, q, want, label) in steps {
        match q {
            Some(q) => {
                let (r, th) = (q.coords[0], q.coords[1]);
                let good = (r - 1.0).abs() < 1e-9 && angle_close(th, want);
                ok &= good;
                text.push_str(&format!("{name:<8} = (1, {label})  computed ({r:.9}, {th:.9})\n"));
                csv.push_str(&format!("{name},{r},{th},{want}\n"));
                rows.push(json!({ "step": name, "r": r, "theta": th, "expected_theta": want, "matches": good }));
            }
            None => {
                ok = false;
                text.push_str(&format!("{name:<8} undefined\n"));
                rows.push(json!({ "step": name, "defined": false }));
            }
        }
    }
    let differ = matches!((&pghk, &direct), (Some(a), Some(b)) if !m.same_point(a, b));
    ok &= differ;
    text.push_str(if differ { "p.g.h.k ≠ p.ghk\n" } else { "p.g.h.k = p.ghk (unexpected)\n" });
    Outcome {
        passed: ok,
        json: json!({ "steps": rows, "final_points_differ": differ, "reproduced": ok }),
        csv,
        summary: if ok { "branched cover values reproduced".into() } else { "branched cover values differ".into() },
        text: Some(text),
    }
}
