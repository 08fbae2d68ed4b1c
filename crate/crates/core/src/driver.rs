//! Verification commands and their JSON reports.

use std::collections::BTreeMap;
use std::fmt;
use std::path::PathBuf;
use std::str::FromStr;
use std::time::Instant;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use serde_json::{json, Value};

use crate::cech::{row_exactness_report, Side};
use crate::cohomology::{
    augmentation_report, induced_p_on_h, simplicial_oracle, stabilized_betti, star_acyclicity_report, BettiReport,
};
use crate::corpus;
use crate::engine::Engine;
use crate::exactla::rank;
use crate::error::{Error, Result};
use crate::kaehler::{
    restriction_matrix, verify_extres, verify_presentation_deg0, verify_tv_annihilation, ExtensionRule, OmegaPresentation,
};
use crate::polyalg::{GroebnerConfig, PolyForm};
use crate::simplicial::{ComplexFile, SimplicialComplex, Subcomplex, VertexTuple};
use crate::sullivan::{a_restrict, ATruncation};

pub const SCHEMA: &str = "derham-report/1";
pub const ENGINE_VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Copy, Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum SideSelection {
    Omega,
    Sullivan,
    Simplicial,
    All,
}

impl FromStr for SideSelection {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "omega" => Ok(SideSelection::Omega),
            "sullivan" => Ok(SideSelection::Sullivan),
            "simplicial" => Ok(SideSelection::Simplicial),
            "all" => Ok(SideSelection::All),
            _ => Err(Error::Parse(format!("unknown side {s:?}"))),
        }
    }
}

/// Where the complex comes from.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Source {
    File(PathBuf),
    Builtin(String),
}

impl Source {
    pub fn load(&self) -> Result<SimplicialComplex> {
        match self {
            Source::File(p) => SimplicialComplex::from_json(&std::fs::read_to_string(p)?),
            Source::Builtin(n) => corpus::builtin(n).ok_or_else(|| Error::Parse(format!("no built-in complex {n:?}"))),
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct RunConfig {
    pub source: Source,
    pub q_max: usize,
    /// Smallest weight bound in stabilization runs; `q_max + 2` if unset.
    pub d_min: Option<usize>,
    pub d_max: usize,
    /// Weight bound for homotopy certification and the lemma checks.
    pub d_cert: usize,
    pub p_max: usize,
    pub window: usize,
    pub seed: u64,
    pub tv_trials: usize,
    pub extres_trials: usize,
    pub side: SideSelection,
    /// Record wall-clock timings in the report (makes it non-reproducible).
    pub timings: bool,
    #[serde(skip)]
    pub pair_limit: usize,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            source: Source::Builtin("triangle-boundary".into()),
            q_max: 2,
            d_min: None,
            d_max: 6,
            d_cert: 4,
            p_max: 2,
            window: 2,
            seed: 0,
            tv_trials: 100,
            extres_trials: 50,
            side: SideSelection::All,
            timings: false,
            pair_limit: GroebnerConfig::default().pair_limit,
        }
    }
}

impl RunConfig {
    pub fn d_min(&self) -> usize {
        self.d_min.unwrap_or(self.q_max + 2).min(self.d_max)
    }

    pub fn validate(&self) -> Result<()> {
        if self.d_max < self.q_max {
            return Err(Error::Parse(format!("--d-max {} is below --q-max {}", self.d_max, self.q_max)));
        }
        if self.window < 2 {
            return Err(Error::Parse("--window must be at least 2".into()));
        }
        if self.window > self.d_max - self.d_min() + 1 {
            return Err(Error::Parse(format!(
                "window {} does not fit in D = {}..={}",
                self.window,
                self.d_min(),
                self.d_max
            )));
        }
        Ok(())
    }

    fn engine(&self, complex: SimplicialComplex) -> Engine {
        Engine::with_config(complex, GroebnerConfig { pair_limit: self.pair_limit })
    }
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Status {
    Pass,
    Skipped,
    NotStabilized,
    Fail,
}

impl Status {
    fn of(ok: bool) -> Self {
        if ok {
            Status::Pass
        } else {
            Status::Fail
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Status::Pass => "pass",
            Status::Skipped => "skipped",
            Status::NotStabilized => "not-stabilized",
            Status::Fail => "fail",
        }
    }
}

impl fmt::Display for Status {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct Check {
    pub name: String,
    pub status: Status,
    pub data: Value,
}

#[derive(Clone, Debug, Serialize)]
pub struct Report {
    pub schema: &'static str,
    pub engine_version: &'static str,
    pub command: String,
    pub config: RunConfig,
    pub complex: ComplexFile,
    pub status: Status,
    pub checks: Vec<Check>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub timings: Option<BTreeMap<String, f64>>,
}

impl Report {
    pub fn passed(&self) -> bool {
        self.status != Status::Fail
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("reports serialize");
        s.push('\n');
        s
    }

    /// One line per check.
    pub fn summary(&self) -> String {
        let mut out = format!("{} on {}: {}\n", self.command, self.complex.name, self.status);
        for c in &self.checks {
            out.push_str(&format!("  {:<48} {}\n", c.name, c.status));
        }
        out
    }
}

struct Builder {
    command: &'static str,
    config: RunConfig,
    complex: ComplexFile,
    checks: Vec<Check>,
    timings: Option<BTreeMap<String, f64>>,
}

impl Builder {
    fn new(command: &'static str, config: &RunConfig, complex: &SimplicialComplex) -> Self {
        Builder {
            command,
            config: config.clone(),
            complex: complex.to_file(),
            checks: Vec::new(),
            timings: config.timings.then(BTreeMap::new),
        }
    }

    /// Runs one check; errors become failures carrying the message.
    fn check(&mut self, name: impl Into<String>, f: impl FnOnce() -> Result<(Status, Value)>) {
        let name = name.into();
        let start = Instant::now();
        let (status, data) = f().unwrap_or_else(|e| (Status::Fail, json!({ "error": e.to_string() })));
        if let Some(t) = &mut self.timings {
            t.insert(name.clone(), start.elapsed().as_secs_f64());
        }
        self.checks.push(Check { name, status, data });
    }

    fn finish(self) -> Report {
        let status = self.checks.iter().map(|c| c.status).filter(|&s| s != Status::Skipped).max().unwrap_or(Status::Pass);
        Report {
            schema: SCHEMA,
            engine_version: ENGINE_VERSION,
            command: self.command.into(),
            config: self.config,
            complex: self.complex,
            status,
            checks: self.checks,
            timings: self.timings,
        }
    }
}

fn to_value<T: Serialize>(x: &T) -> Value {
    serde_json::to_value(x).expect("report data serializes")
}

fn betti_status(r: &BettiReport) -> Status {
    if r.all_stabilized() {
        Status::Pass
    } else {
        Status::NotStabilized
    }
}

/// Compares stabilized vectors of both sides with the oracle.
fn agreement(om: &BettiReport, sl: &BettiReport, oracle: &[usize]) -> (Status, Value) {
    let mut status = Status::Pass;
    let mut degrees = Vec::new();
    for q in 0..oracle.len() {
        let stable = om.stabilized[q] && sl.stabilized[q];
        let agree = om.betti[q] == oracle[q] && sl.betti[q] == oracle[q];
        let s = match (stable, agree) {
            (false, _) => Status::NotStabilized,
            (true, true) => Status::Pass,
            (true, false) => Status::Fail,
        };
        status = status.max(s);
        degrees.push(json!({ "q": q, "omega": om.betti[q], "sullivan": sl.betti[q], "simplicial": oracle[q], "status": s }));
    }
    (status, json!({ "degrees": degrees }))
}

/// Stabilized truncated Betti numbers per the side selection.
pub fn cmd_betti(cfg: &RunConfig) -> Result<Report> {
    cfg.validate()?;
    let complex = cfg.source.load()?;
    let engine = cfg.engine(complex.clone());
    let mut b = Builder::new("betti", cfg, &complex);
    let x = engine.whole().clone();
    let oracle = simplicial_oracle(&x, cfg.q_max);
    let wanted = |s: SideSelection| cfg.side == s || cfg.side == SideSelection::All;
    let mut reports = BTreeMap::new();
    for (sel, side) in [(SideSelection::Omega, Side::Omega), (SideSelection::Sullivan, Side::Sullivan)] {
        if !wanted(sel) {
            continue;
        }
        b.check(format!("betti/{side}"), || {
            let r = stabilized_betti(&engine, side, &x, cfg.q_max, cfg.d_min(), cfg.d_max, cfg.window)?;
            let out = (betti_status(&r), to_value(&r));
            reports.insert(side, r);
            Ok(out)
        });
    }
    if wanted(SideSelection::Simplicial) {
        b.check("betti/simplicial", || Ok((Status::Pass, json!({ "betti": oracle }))));
    }
    if let (Some(om), Some(sl)) = (reports.get(&Side::Omega), reports.get(&Side::Sullivan)) {
        b.check("betti/agreement", || Ok(agreement(om, sl, &oracle)));
    }
    Ok(b.finish())
}

/// Full comparison: stabilized Betti numbers of both sides against the
/// oracle, the map induced by `P`, augmentations, acyclicity of stars, and
/// exactness of the Čech rows.
pub fn cmd_verify_quasi_iso(cfg: &RunConfig) -> Result<Report> {
    cfg.validate()?;
    let complex = cfg.source.load()?;
    let engine = cfg.engine(complex.clone());
    let mut b = Builder::new("verify-quasi-iso", cfg, &complex);
    let x = engine.whole().clone();
    let oracle = simplicial_oracle(&x, cfg.q_max);
    let mut reports = BTreeMap::new();
    for side in Side::BOTH {
        b.check(format!("betti/{side}"), || {
            let r = stabilized_betti(&engine, side, &x, cfg.q_max, cfg.d_min(), cfg.d_max, cfg.window)?;
            let out = (betti_status(&r), to_value(&r));
            reports.insert(side, r);
            Ok(out)
        });
    }
    let (om, sl) = (reports.get(&Side::Omega), reports.get(&Side::Sullivan));
    if let (Some(om), Some(sl)) = (om, sl) {
        b.check("betti/agreement", || Ok(agreement(om, sl, &oracle)));
        b.check("induced-p", || {
            let maps = induced_p_on_h(&engine, &x, cfg.q_max, cfg.d_max)?;
            let mut status = Status::Pass;
            for m in &maps {
                let stable = om.stabilized[m.q] && sl.stabilized[m.q];
                let s = if !m.well_defined {
                    Status::Fail
                } else if !stable {
                    Status::NotStabilized
                } else {
                    Status::of(m.is_isomorphism() && m.rank == oracle[m.q])
                };
                status = status.max(s);
            }
            Ok((status, json!({ "bound": cfg.d_max, "degrees": maps })))
        });
    }
    b.check("augmentation", || {
        let r = augmentation_report(&engine, &x, cfg.d_max)?;
        Ok((Status::of(r.passed()), to_value(&r)))
    });
    b.check("star-acyclicity", || {
        let stars = star_acyclicity_report(&engine, cfg.q_max, cfg.p_max, cfg.d_min(), cfg.d_max, cfg.window)?;
        let status = stars.iter().fold(Status::Pass, |s, r| {
            s.max(if !r.stabilized {
                Status::NotStabilized
            } else {
                Status::of(r.acyclic())
            })
        });
        Ok((status, json!({ "stars": stars })))
    });
    certify_rows(&mut b, &engine, cfg);
    Ok(b.finish())
}

fn certify_rows(b: &mut Builder, engine: &Engine, cfg: &RunConfig) {
    for side in Side::BOTH {
        for q in 0..=cfg.q_max {
            b.check(format!("row-exactness/{side}/q{q}"), || {
                let r = row_exactness_report(engine, side, q, cfg.d_cert.max(q), cfg.p_max, ExtensionRule::default())?;
                Ok((Status::of(r.passed()), to_value(&r)))
            });
        }
    }
}

/// Subcomplexes on which the local lemmas are exercised: the whole
/// complex, the vertex stars and the closed edges.
fn lemma_subcomplexes(x: &SimplicialComplex) -> Vec<(String, Subcomplex)> {
    let mut out = vec![("X".to_string(), x.as_subcomplex().clone())];
    for v in 0..x.n_vertices() {
        out.push((format!("St({})", x.labels()[v]), x.as_subcomplex().star(&VertexTuple::new(vec![v]))));
    }
    for e in x.as_subcomplex().simplices_of_dim(1) {
        out.push((format!("[{}]", x.simplex_labels(e).join(",")), Subcomplex::closure([e])));
    }
    out
}

/// Partition of unity, the two local lemmas, the degree-0 presentation
/// guard, restriction surjectivity and the homotopy certifications.
pub fn cmd_verify_lemmas(cfg: &RunConfig) -> Result<Report> {
    cfg.validate()?;
    let complex = cfg.source.load()?;
    let engine = cfg.engine(complex.clone());
    let mut b = Builder::new("verify-lemmas", cfg, &complex);
    let labels = complex.labels().to_vec();
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    b.check("partition-of-unity", || {
        let pu = engine.partition()?;
        let p: BTreeMap<String, String> =
            pu.vertices().map(|v| (labels[v].clone(), pu.p(v).display(&labels).to_string())).collect();
        Ok((Status::Pass, json!({ "exponent": pu.exponent(), "p": p })))
    });
    let subs = lemma_subcomplexes(&complex);
    let d = cfg.d_cert;
    b.check("tv-annihilation", || {
        let mut rows = Vec::new();
        let mut ok = true;
        for (name, y) in &subs {
            for v in 0..complex.n_vertices() {
                for q in 0..=cfg.q_max {
                    let r = verify_tv_annihilation(&engine, y, v, q, d.max(q), cfg.tv_trials, &mut rng)?;
                    ok &= r.passed();
                    rows.push(json!({ "y": name, "v": labels[v], "q": q, "result": r }));
                }
            }
        }
        Ok((Status::of(ok), json!({ "bound": d, "configurations": rows })))
    });
    b.check("extres", || {
        let mut rows = Vec::new();
        let mut ok = true;
        for (name, y) in &subs {
            for q in 0..=cfg.q_max {
                for (rule, rule_name) in [(ExtensionRule::Reinterpret, "reinterpret"), (ExtensionRule::Solve, "solve")] {
                    let r = verify_extres(&engine, y, q, d.max(q), rule, cfg.extres_trials, &mut rng)?;
                    ok &= r.passed();
                    rows.push(json!({ "y": name, "q": q, "rule": rule_name, "result": r }));
                }
            }
        }
        Ok((Status::of(ok), json!({ "bound": d, "configurations": rows })))
    });
    b.check("presentation-deg0", || {
        let mut rows = Vec::new();
        let mut ok = true;
        for (name, y) in &subs {
            for bound in 0..=cfg.d_max {
                let r = verify_presentation_deg0(&engine, y, bound)?;
                ok &= r.passed();
                rows.push(json!({ "y": name, "bound": bound, "result": r }));
            }
        }
        Ok((Status::of(ok), json!({ "configurations": rows })))
    });
    b.check("restriction-surjective", || {
        let rows = restriction_surjectivity(&engine, cfg.q_max, cfg.d_max)?;
        let ok = rows.iter().all(|r| r.omega_rank == r.omega_target && r.sullivan_rank == r.sullivan_target);
        Ok((Status::of(ok), json!({ "pairs": rows })))
    });
    certify_rows(&mut b, &engine, cfg);
    Ok(b.finish())
}

/// Rank of one restriction map on both sides.
#[derive(Clone, Debug, Serialize, PartialEq, Eq)]
pub struct SurjectivityRow {
    pub x: Vec<Vec<usize>>,
    pub y: Vec<Vec<usize>>,
    pub q: usize,
    pub bound: usize,
    pub omega_rank: usize,
    pub omega_target: usize,
    pub sullivan_rank: usize,
    pub sullivan_target: usize,
}

fn simplex_lists(y: &Subcomplex) -> Vec<Vec<usize>> {
    y.maximal_simplices().into_iter().map(|s| s.vertices().collect()).collect()
}

/// Ranks of the restrictions `X → Y` with `X` the whole complex or a
/// non-empty star and `Y ⊆ X` a star, closed edge or vertex.
pub fn restriction_surjectivity(engine: &Engine, q_max: usize, d_max: usize) -> Result<Vec<SurjectivityRow>> {
    let whole = engine.whole();
    let mut stars: Vec<Subcomplex> = Vec::new();
    for p in 0..=2 {
        for u in engine.complex().increasing_tuples(p) {
            let s = whole.star(&u);
            if !s.is_empty() && !stars.contains(&s) {
                stars.push(s);
            }
        }
    }
    let mut targets = stars.clone();
    for s in whole.simplices_of_dim(1).into_iter().chain(whole.simplices_of_dim(0)) {
        let c = Subcomplex::closure([s]);
        if !targets.contains(&c) {
            targets.push(c);
        }
    }
    let mut sources = vec![whole.clone()];
    sources.extend(stars.into_iter().filter(|s| s != whole));
    let mut rows = Vec::new();
    for x in &sources {
        for y in targets.iter().filter(|y| y.is_subcomplex_of(x) && *y != x) {
            for q in 0..=q_max {
                for bound in q..=d_max {
                    let (ox, oy) = (engine.omega(x, q, bound)?, engine.omega(y, q, bound)?);
                    let omega_rank = rank(&restriction_matrix(&ox, &oy)?);
                    let (ax, ay) = (engine.sullivan(x, q, bound)?, engine.sullivan(y, q, bound)?);
                    let sullivan_rank = rank(&a_restrict(&ax, &ay)?);
                    rows.push(SurjectivityRow {
                        x: simplex_lists(x),
                        y: simplex_lists(y),
                        q,
                        bound,
                        omega_rank,
                        omega_target: oy.dim(),
                        sullivan_rank,
                        sullivan_target: ay.dim(),
                    });
                }
            }
        }
    }
    Ok(rows)
}

/// The three identities showing that `t1² t2² dt3` vanishes in `Ω¹(∂Δ²)`,
/// plus its image under `P` and a control.
pub fn cmd_gomez(cfg: &RunConfig) -> Result<Report> {
    let complex = corpus::builtin("triangle-boundary").expect("built in");
    let mut cfg = cfg.clone();
    cfg.source = Source::Builtin("triangle-boundary".into());
    let mut b = Builder::new("gomez", &cfg, &complex);
    let labels = complex.labels().to_vec();
    let pres = OmegaPresentation::new(complex.as_subcomplex(), GroebnerConfig::default())?;
    let t = PolyForm::var;
    let product = t(0).wedge(&t(1)).wedge(&t(2));
    let form = t(0).pow(2).wedge(&t(1).pow(2)).wedge(&PolyForm::dvar(2));
    let show = |f: &PolyForm| f.display(&labels).to_string();
    b.check("gomez/normal-form", || {
        let nf = pres.normal_form(&form)?;
        Ok((Status::of(nf.is_zero()), json!({ "form": show(&form), "normal_form": show(&nf) })))
    });
    b.check("gomez/differentiate-product", || {
        // d(t1 t2 t3) = t2 t3 dt1 + t1 t3 dt2 + t1 t2 dt3 vanishes because t1 t2 t3 does
        let d = product.d();
        let expanded = t(1)
            .wedge(&t(2))
            .wedge(&PolyForm::dvar(0))
            .add(&t(0).wedge(&t(2)).wedge(&PolyForm::dvar(1)))
            .add(&t(0).wedge(&t(1)).wedge(&PolyForm::dvar(2)));
        let ok = d == expanded && pres.normal_form(&product)?.is_zero() && pres.normal_form(&d)?.is_zero();
        Ok((Status::of(ok), json!({ "identity": format!("d({}) = {}", show(&product), show(&d)) })))
    });
    b.check("gomez/multiply-by-t1t2", || {
        // t1 t2 · d(t1 t2 t3) − t1² t2² dt3 = t1 t2 t3 · (t2 dt1 + t1 dt2)
        let lhs = t(0).wedge(&t(1)).wedge(&product.d()).sub(&form);
        let rest = t(1).wedge(&PolyForm::dvar(0)).add(&t(0).wedge(&PolyForm::dvar(1)));
        let rhs = product.wedge(&rest);
        let ok = lhs == rhs && pres.normal_form(&rhs)?.is_zero();
        Ok((Status::of(ok), json!({ "identity": format!("{} = {}", show(&lhs), show(&rhs)) })))
    });
    b.check("gomez/image-under-p", || {
        let a = ATruncation::new(complex.as_subcomplex(), 1, form.weight())?;
        let members: Vec<String> = a
            .spaces()
            .iter()
            .map(|s| show(&s.pull(&form)))
            .collect();
        let coords = a.global_coords(&form)?;
        Ok((Status::of(coords.iter().all(|c| c.is_zero())), json!({ "members": members })))
    });
    b.check("gomez/control", || {
        let f = t(0).pow(2).wedge(&t(1).pow(2));
        let nf = pres.normal_form(&f)?;
        Ok((Status::of(!nf.is_zero()), json!({ "form": show(&f), "normal_form": show(&nf) })))
    });
    Ok(b.finish())
}

/// Dispatches on a command name.
pub fn run(command: &str, cfg: &RunConfig) -> Result<Report> {
    match command {
        "betti" => cmd_betti(cfg),
        "verify-quasi-iso" => cmd_verify_quasi_iso(cfg),
        "verify-lemmas" => cmd_verify_lemmas(cfg),
        "gomez" => cmd_gomez(cfg),
        _ => Err(Error::Parse(format!("unknown command {command:?}"))),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gomez_passes() {
        let r = cmd_gomez(&RunConfig::default()).unwrap();
        assert_eq!(r.status, Status::Pass, "{}", r.summary());
        assert_eq!(r.checks.len(), 5);
    }

    #[test]
    fn betti_on_boundary_triangle() {
        let r = cmd_betti(&RunConfig::default()).unwrap();
        assert_eq!(r.status, Status::Pass, "{}", r.summary());
        let point = RunConfig { source: Source::Builtin("point".into()), ..RunConfig::default() };
        assert_eq!(cmd_betti(&point).unwrap().status, Status::Pass);
    }

    #[test]
    fn status_aggregation() {
        assert!(Status::Fail > Status::NotStabilized && Status::NotStabilized > Status::Pass);
        assert_eq!(serde_json::to_string(&Status::NotStabilized).unwrap(), "\"not-stabilized\"");
    }

    #[test]
    fn side_parsing() {
        assert_eq!("all".parse::<SideSelection>().unwrap(), SideSelection::All);
        assert!("both".parse::<SideSelection>().is_err());
    }
}
