//! Acceptance suite: one line per criterion, exact comparisons throughout.

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::process::ExitCode;
use std::time::{Duration, Instant};

use derham::cech::{cech_d, cech_delta, row_exactness_report, CechSpace, Side};
use derham::cohomology::{induced_p_on_h, simplicial_oracle, stabilized_betti, star_acyclicity_report};
use derham::driver::{cmd_gomez, cmd_verify_quasi_iso, restriction_surjectivity, RunConfig, Source, Status};
use derham::kaehler::{verify_extres, verify_presentation_deg0, verify_tv_annihilation, ExtensionRule, LemmaReport};
use derham::simplicial::{SimplicialComplex, Subcomplex, VertexTuple};
use derham::{corpus, Engine};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

type Outcome = Result<String, String>;

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

fn err<E: std::fmt::Display>(e: E) -> String {
    e.to_string()
}

fn gomez() -> Outcome {
    let start = Instant::now();
    let report = cmd_gomez(&RunConfig::default()).map_err(err)?;
    let elapsed = start.elapsed();
    for c in &report.checks {
        ensure(c.status == Status::Pass, || format!("{} is {}", c.name, c.status))?;
    }
    ensure(elapsed < Duration::from_secs(1), || format!("took {elapsed:?}"))?;
    Ok(format!("{} certificates in {elapsed:?}", report.checks.len()))
}

fn betti_agreement() -> Outcome {
    let mut notes = Vec::new();
    for x in corpus::all() {
        let start = Instant::now();
        let engine = Engine::new(x.clone());
        let oracle = simplicial_oracle(engine.whole(), 2);
        let limit = if x.n_vertices() <= 4 { 6 } else { 8 };
        let mut d0 = 0;
        for side in Side::BOTH {
            let r = stabilized_betti(&engine, side, engine.whole(), 2, 0, 8, 2).map_err(err)?;
            ensure(r.all_stabilized(), || format!("{} {side}: not stabilized", x.name()))?;
            ensure(r.betti == oracle, || format!("{} {side}: {:?} vs oracle {:?}", x.name(), r.betti, oracle))?;
            let side_d0 = *r.stable_from.iter().max().unwrap();
            ensure(side_d0 <= limit, || format!("{} {side}: D0 = {side_d0} > {limit}", x.name()))?;
            d0 = d0.max(side_d0);
        }
        let elapsed = start.elapsed();
        ensure(elapsed < Duration::from_secs(120), || format!("{} took {elapsed:?}", x.name()))?;
        notes.push(format!("{} D0={d0}", x.name()));
    }
    Ok(notes.join(", "))
}

fn quasi_isomorphism() -> Outcome {
    for x in corpus::all() {
        let engine = Engine::new(x.clone());
        let oracle = simplicial_oracle(engine.whole(), 2);
        for m in induced_p_on_h(&engine, engine.whole(), 2, 8).map_err(err)? {
            ensure(m.well_defined && m.rank == oracle[m.q] && m.is_isomorphism(), || {
                format!("{} q={}: rank {} vs betti {}", x.name(), m.q, m.rank, oracle[m.q])
            })?;
        }
    }
    Ok("P_* has full rank in every degree at D = 8".into())
}

fn homotopy_identities() -> Outcome {
    let mut checked = 0;
    for name in ["triangle-boundary", "tetrahedron-boundary", "two-triangles"] {
        let engine = Engine::new(corpus::builtin(name).unwrap());
        for side in Side::BOTH {
            for q in 0..=2 {
                for d in q..=4 {
                    let r = row_exactness_report(&engine, side, q, d, 2, ExtensionRule::default()).map_err(err)?;
                    ensure(r.passed(), || format!("{name} {side} q={q} D={d}: {r:?}"))?;
                    checked += r.identities.len();
                }
                for d in q..=4 {
                    for p in -1..=2 {
                        let a = CechSpace::new(&engine, side, p, q, d).map_err(err)?;
                        let b = CechSpace::new(&engine, side, p + 1, q, d).map_err(err)?;
                        let a1 = CechSpace::new(&engine, side, p, q + 1, d).map_err(err)?;
                        let b1 = CechSpace::new(&engine, side, p + 1, q + 1, d).map_err(err)?;
                        let c = CechSpace::new(&engine, side, p + 2, q, d).map_err(err)?;
                        let delta = cech_delta(&a, &b).map_err(err)?;
                        let delta2 = cech_delta(&b, &c).map_err(err)?;
                        ensure(delta2.mul(&delta).is_zero(), || format!("{name} {side} δ² ≠ 0 at p={p} q={q} D={d}"))?;
                        let lhs = cech_d(&b, &b1).map_err(err)?.mul(&delta);
                        let rhs = cech_delta(&a1, &b1).map_err(err)?.mul(&cech_d(&a, &a1).map_err(err)?);
                        ensure(lhs == rhs, || format!("{name} {side} dδ ≠ δd at p={p} q={q} D={d}"))?;
                    }
                }
            }
        }
    }
    Ok(format!("{checked} homotopy identities exact"))
}

fn lemma_targets(x: &SimplicialComplex) -> Vec<Subcomplex> {
    let mut out = vec![x.as_subcomplex().clone()];
    for v in 0..x.n_vertices() {
        out.push(x.as_subcomplex().star(&VertexTuple::new(vec![v])));
    }
    for e in x.as_subcomplex().simplices_of_dim(1) {
        out.push(Subcomplex::closure([e]));
    }
    out
}

fn lemma_suite() -> Outcome {
    let run = || -> Result<(usize, Vec<LemmaReport>), String> {
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        let mut reports = Vec::new();
        let mut configs = 0;
        for x in corpus::all() {
            let engine = Engine::new(x.clone());
            engine.partition().map_err(err)?;
            for y in lemma_targets(&x) {
                for q in 0..=2 {
                    for v in 0..x.n_vertices() {
                        let r = verify_tv_annihilation(&engine, &y, v, q, 4, 100, &mut rng).map_err(err)?;
                        ensure(r.passed(), || format!("{}: t_v annihilation {r:?}", x.name()))?;
                        reports.push(r);
                        configs += 1;
                    }
                    let r = verify_extres(&engine, &y, q, 4, ExtensionRule::default(), 50, &mut rng).map_err(err)?;
                    ensure(r.passed(), || format!("{}: extension-restriction {r:?}", x.name()))?;
                    reports.push(r);
                    configs += 1;
                }
            }
        }
        Ok((configs, reports))
    };
    let (configs, first) = run()?;
    let (_, second) = run()?;
    ensure(first == second, || "seed 0 runs differ".into())?;
    Ok(format!("{configs} configurations, reproducible with seed 0"))
}

fn star_acyclicity() -> Outcome {
    let engine = Engine::new(corpus::builtin("tetrahedron-boundary").unwrap());
    let stars = star_acyclicity_report(&engine, 2, 2, 0, 8, 2).map_err(err)?;
    for s in &stars {
        ensure(s.stabilized && s.omega == [1, 0, 0] && s.sullivan == [1, 0, 0], || format!("{s:?}"))?;
    }
    Ok(format!("{} stars acyclic on both sides", stars.len()))
}

fn surjectivity() -> Outcome {
    let mut pairs = 0;
    for x in corpus::all() {
        let engine = Engine::new(x.clone());
        for r in restriction_surjectivity(&engine, 2, 6).map_err(err)? {
            ensure(r.omega_rank == r.omega_target && r.sullivan_rank == r.sullivan_target, || {
                format!("{}: {r:?}", x.name())
            })?;
            pairs += 1;
        }
    }
    Ok(format!("{pairs} restriction maps surjective"))
}

fn presentation_guard() -> Outcome {
    for x in corpus::all() {
        let engine = Engine::new(x.clone());
        for y in lemma_targets(&x) {
            for d in 0..=6 {
                let r = verify_presentation_deg0(&engine, &y, d).map_err(err)?;
                ensure(r.passed(), || format!("{} D={d}: {r:?}", x.name()))?;
            }
        }
    }
    Ok("degree-0 presentation embeds for D <= 6".into())
}

fn determinism() -> Outcome {
    let mut sizes = Vec::new();
    for name in ["triangle-boundary", "triangle-wedge"] {
        let cfg = RunConfig { source: Source::Builtin(name.into()), ..RunConfig::default() };
        let a = cmd_verify_quasi_iso(&cfg).map_err(err)?.to_json();
        let b = cmd_verify_quasi_iso(&cfg).map_err(err)?.to_json();
        ensure(a == b, || format!("{name}: reports differ"))?;
        sizes.push(a.len());
    }
    Ok(format!("byte-identical reports ({sizes:?} bytes)"))
}

fn main() -> ExitCode {
    let criteria: [(&str, fn() -> Outcome); 9] = [
        ("t1^2 t2^2 dt3 vanishes on the triangle boundary", gomez),
        ("stabilized Betti numbers agree with the simplicial oracle", betti_agreement),
        ("P induces isomorphisms on cohomology", quasi_isomorphism),
        ("Čech homotopy identities, δ² = 0 and dδ = δd", homotopy_identities),
        ("partition of unity and local lemmas", lemma_suite),
        ("stars of the tetrahedron boundary are acyclic", star_acyclicity),
        ("restrictions are surjective", surjectivity),
        ("degree-0 presentation guard", presentation_guard),
        ("reports are deterministic", determinism),
    ];
    let mut failed = 0;
    for (i, (name, f)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = catch_unwind(AssertUnwindSafe(f)).unwrap_or_else(|_| Err("panicked".into()));
        let elapsed = start.elapsed();
        match outcome {
            Ok(note) => println!("criterion {}: PASS  {name} ({note}; {elapsed:.2?})", i + 1),
            Err(why) => {
                failed += 1;
                println!("criterion {}: FAIL  {name}: {why}", i + 1);
            }
        }
    }
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
