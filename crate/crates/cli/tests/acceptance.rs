//! Acceptance criteria. Each criterion prints one line; the test fails if
//! any of them does.

use std::time::{Duration, Instant};

use udom::bimodule::{build_context, DEFAULT_EXT_BOUND};
use udom::functors::{dual_wrt_u, evaluation_map, grade_u, transpose_u, u_dominant_dimension, u_resolution_dimension};
use udom::instance::fixture;
use udom::module::{hom_matrices, indec_projective, regular_module, FdModule};
use udom::resolution::{ext_module_from, min_proj_resolution, tor_dim_from, DimReport};
use udom::verify::suite::{prepared_suite, suite_contexts};
use udom::verify::{Prepared, RandomSuiteSpec, Verdict};
use udom::functors::star_into;
use udom_cli::{cmd_check, cmd_reproduce_paper, Format, RunConfig};

type Outcome = Result<String, String>;

const RESOLUTION_LENGTH: usize = 6;

fn ensure(ok: bool, msg: impl Into<String>) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg.into())
    }
}

fn suite() -> Vec<Prepared> {
    prepared_suite(None, &RandomSuiteSpec::default()).expect("suite builds")
}

/// (left, right) U-resolution dimensions of E_0 for a fixture with U = Λ.
fn flat_dims(name: &str, p: u64) -> (DimReport, DimReport) {
    let loaded = fixture(name).unwrap().load(Some(p)).unwrap();
    let left = build_context(&loaded.algebra, &loaded.bimodule, DEFAULT_EXT_BOUND).unwrap();
    let right = left.side_swap();
    let l = u_resolution_dimension(&left, &left.e0().unwrap(), RESOLUTION_LENGTH).unwrap();
    let r = u_resolution_dimension(&right, &right.e0().unwrap(), RESOLUTION_LENGTH).unwrap();
    (l.dim, r.dim)
}

fn criterion_1() -> Outcome {
    let mut seen = Vec::new();
    let mut elapsed = Duration::ZERO;
    for p in [101, 5, 32003] {
        let start = Instant::now();
        let (l1, r1) = flat_dims("paper-ex-1", p);
        let (l2, r2) = flat_dims("paper-ex-2", p);
        if p == 101 {
            elapsed = start.elapsed();
        }
        ensure(l1 == DimReport::exact(1, RESOLUTION_LENGTH), format!("p={p}: l.fd I_0 over Δ/(αβα) is {l1}"))?;
        ensure(r1.at_least && r1.is_at_least(2) && r1.bound >= 3, format!("p={p}: r.fd I'_0 over Δ/(αβα) is {r1}"))?;
        ensure(l2 == DimReport::exact(2, RESOLUTION_LENGTH), format!("p={p}: l.fd I_0 over Δ/(γα,βα) is {l2}"))?;
        ensure(r2 == DimReport::exact(1, RESOLUTION_LENGTH), format!("p={p}: r.fd I'_0 over Δ/(γα,βα) is {r2}"))?;
        seen.push((l1, r1, l2, r2));
    }
    ensure(seen.windows(2).all(|w| w[0] == w[1]), "values differ between characteristics")?;
    ensure(elapsed < Duration::from_secs(10), format!("took {elapsed:?}"))?;
    let (l1, r1, l2, r2) = seen[0];
    Ok(format!("({l1}, {r1}) and ({l2}, {r2}) at p = 101, 5, 32003 in {elapsed:.2?}"))
}

fn criterion_2() -> Outcome {
    let start = Instant::now();
    let d_max = RandomSuiteSpec::default().d_max;
    let contexts = suite_contexts(None, DEFAULT_EXT_BOUND).map_err(|e| e.to_string())?;
    ensure(contexts.len() >= 6, format!("only {} contexts", contexts.len()))?;
    ensure(contexts.iter().any(|(n, _)| n.contains("/U=")), "no non-regular U in the suite")?;
    let mut values = Vec::new();
    for (name, ctx) in &contexts {
        let right = ctx.side_swap();
        let l = u_dominant_dimension(ctx, ctx.u_left(), d_max).map_err(|e| e.to_string())?;
        let r = u_dominant_dimension(&right, right.u_left(), d_max).map_err(|e| e.to_string())?;
        ensure(l == r, format!("{name}: left {l}, right {r}"))?;
        values.push(format!("{name}={l}"));
    }
    let elapsed = start.elapsed();
    ensure(elapsed < Duration::from_secs(60), format!("took {elapsed:?}"))?;
    Ok(format!("{} contexts agree [{}] in {elapsed:.2?}", contexts.len(), values.join(", ")))
}

fn criterion_3(suite: &[Prepared]) -> Outcome {
    let random: usize = suite
        .iter()
        .map(|pr| pr.samples.left.random_count() + pr.samples.right.random_count())
        .sum();
    ensure(random >= 100, format!("only {random} random modules"))?;
    for pr in suite {
        for claim in ["lemma2.1", "sigma"] {
            let r = pr.run(&[claim]).map_err(|e| format!("{}: {claim}: {e}", pr.name))?.remove(0);
            ensure(
                r.verdict == Verdict::Pass,
                format!("{}: {claim} {} {}", pr.name, r.verdict, r.witness.map(|w| w.to_string()).unwrap_or_default()),
            )?;
        }
    }
    Ok(format!("zero failures over {random} random modules (plus structured samples) in {} contexts", suite.len()))
}

fn criterion_4(suite: &[Prepared]) -> Outcome {
    let claims = ["prop2.2", "prop2.4", "prop3.1", "prop3.2", "prop3.3", "prop3.4"];
    let mut undetermined = 0;
    for pr in suite {
        for r in pr.run(&claims).map_err(|e| format!("{}: {e}", pr.name))? {
            match r.verdict {
                Verdict::Pass => {}
                Verdict::Undetermined if !r.detail.is_empty() => undetermined += 1,
                v => return Err(format!("{}: {} {v}: {}", pr.name, r.claim, r.detail)),
            }
        }
    }
    ensure(undetermined == 0, format!("{undetermined} UNDETERMINED verdicts"))?;
    Ok(format!("{} checkers PASS on {} contexts", claims.len(), suite.len()))
}

fn criterion_5(suite: &[Prepared]) -> Outcome {
    for pr in suite {
        for claim in ["lemma2.7", "lemma2.3"] {
            let r = pr.run(&[claim]).map_err(|e| format!("{}: {claim}: {e}", pr.name))?.remove(0);
            ensure(r.verdict == Verdict::Pass, format!("{}: {claim} {}: {}", pr.name, r.verdict, r.detail))?;
        }
    }
    // duality on random modules, recomputed here
    let mut pairs = 0;
    for pr in suite {
        for (ctx, other, samples) in [(&pr.left, &pr.right, &pr.samples.right), (&pr.right, &pr.left, &pr.samples.left)] {
            let e = ctx.e0().unwrap();
            let star = star_into(ctx, &e).unwrap();
            for s in samples.modules.iter().filter(|s| s.seed.is_some()) {
                let res = min_proj_resolution(&s.module, 4).unwrap();
                for i in 0..=3 {
                    let tor = tor_dim_from(&res, &star, i).unwrap();
                    let ext = ext_module_from(&res, other.u_left(), other.u_right(), i).unwrap();
                    let hom = hom_matrices(&ext, &e).unwrap().len();
                    ensure(tor == hom, format!("{}: {} i={i}: Tor {tor}, Hom {hom}", pr.name, s.label))?;
                    pairs += 1;
                }
            }
        }
    }
    ensure(pairs >= 50, format!("only {pairs} random pairs"))?;
    Ok(format!("certificates, summand scan and {pairs} random Tor/Hom pairs agree"))
}

fn criterion_6(suite: &[Prepared]) -> Outcome {
    let d_max = RandomSuiteSpec::default().d_max;
    let semi = suite.iter().find(|p| p.name == "semisimple").ok_or("no semisimple context")?;
    for ctx in [&semi.left, &semi.right] {
        let d = u_dominant_dimension(ctx, ctx.u_left(), d_max).unwrap();
        ensure(d == DimReport::at_least(d_max, d_max), format!("semisimple U-dom.dim {d}"))?;
    }
    for r in semi.run(&[]).map_err(|e| e.to_string())? {
        ensure(r.verdict == Verdict::Pass, format!("semisimple {} {}", r.claim, r.verdict))?;
    }
    let mut projectives = 0;
    for pr in suite {
        for ctx in [&pr.left, &pr.right] {
            let zero = FdModule::zero(ctx.lambda());
            for b in 0..=3 {
                ensure(grade_u(ctx, &zero, b).unwrap() == DimReport::at_least(b + 1, b), "zero module grade")?;
            }
            ensure(dual_wrt_u(ctx, &zero).unwrap().is_zero(), "zero module dual")?;
            ensure(transpose_u(ctx, &zero).unwrap().is_zero(), "zero module transpose")?;
            if !ctx.u_left().same_action(&regular_module(ctx.lambda())) {
                continue;
            }
            for v in 0..ctx.lambda().vertex_count() {
                let p = indec_projective(ctx.lambda(), v).unwrap();
                ensure(evaluation_map(ctx, &p).unwrap().is_iso(), format!("{}: σ_P{} not iso", pr.name, v + 1))?;
                ensure(transpose_u(ctx, &p).unwrap().is_zero(), format!("{}: Tr P{} != 0", pr.name, v + 1))?;
                projectives += 1;
            }
        }
    }
    Ok(format!("semisimple >= {d_max} both sides; zero module; {projectives} projectives with σ iso and Tr = 0"))
}

fn criterion_7() -> Outcome {
    let cfg = RunConfig::with_instance("paper-ex-1");
    let a = cmd_reproduce_paper(&cfg).map_err(|e| e.to_string())?.render(Format::Json);
    let b = cmd_reproduce_paper(&cfg).map_err(|e| e.to_string())?.render(Format::Json);
    ensure(a == b, "reproduce-paper output differs")?;
    let all = vec!["all".to_string()];
    let c = cmd_check(&cfg, &all).map_err(|e| e.to_string())?;
    let d = cmd_check(&cfg, &all).map_err(|e| e.to_string())?;
    ensure(c.exit_code == 0, "check all on paper-ex-1 has a FAIL")?;
    let (c, d) = (c.render(Format::Json), d.render(Format::Json));
    ensure(c == d, "check all output differs")?;
    Ok(format!("byte-identical JSON ({} and {} bytes)", a.len(), c.len()))
}

fn main() {
    let suite = suite();
    let results: Vec<(usize, Outcome)> = vec![
        (1, criterion_1()),
        (2, criterion_2()),
        (3, criterion_3(&suite)),
        (4, criterion_4(&suite)),
        (5, criterion_5(&suite)),
        (6, criterion_6(&suite)),
        (7, criterion_7()),
    ];
    let mut failed = Vec::new();
    for (n, r) in &results {
        match r {
            Ok(msg) => println!("criterion {n}: pass: {msg}"),
            Err(msg) => {
                println!("criterion {n}: FAIL: {msg}");
                failed.push(*n);
            }
        }
    }
    if !failed.is_empty() {
        eprintln!("failed criteria: {failed:?}");
        std::process::exit(1);
    }
}
