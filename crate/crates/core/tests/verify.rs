use udom::bimodule::{build_context, DEFAULT_EXT_BOUND};
use udom::instance::fixture;
use udom::linalg::Mat;
use udom::module::ModuleSpec;
use udom::verify::{CheckResult, Condition, Group, Prepared, RandomSuiteSpec, Verdict, CLAIMS};

fn prepared(name: &str, seed: u64) -> Prepared {
    let l = fixture(name).unwrap().load(None).unwrap();
    let ctx = build_context(&l.algebra, &l.bimodule, DEFAULT_EXT_BOUND).unwrap();
    let spec = RandomSuiteSpec {
        seed,
        ..RandomSuiteSpec::default()
    };
    Prepared::new(name, ctx, spec).unwrap()
}

#[test]
fn group_verdicts() {
    use Condition as C;
    let g = |cs: Vec<Condition>| Group::new("g", cs).verdict;
    assert_eq!(g(vec![C::exact("a", true), C::sampled("b", true)]), Verdict::Pass);
    assert_eq!(g(vec![C::exact("a", false), C::sampled("b", false)]), Verdict::Pass);
    // a sampled true is not a proof
    assert_eq!(g(vec![C::exact("a", false), C::sampled("b", true)]), Verdict::Undetermined);
    // a sampled false is a refutation
    assert_eq!(g(vec![C::exact("a", true), C::sampled("b", false)]), Verdict::Fail);
    assert_eq!(g(vec![C::sampled("a", true), C::sampled("b", false)]), Verdict::Undetermined);
    assert_eq!(g(vec![]), Verdict::Pass);
    assert_eq!(Group::assert("x", false).verdict, Verdict::Fail);
}

#[test]
fn claims_are_sorted_and_unknown_ids_rejected() {
    let mut sorted = CLAIMS.to_vec();
    sorted.sort_unstable();
    assert_eq!(sorted, CLAIMS.to_vec());
    let pr = prepared("semisimple", 1);
    assert!(pr.run(&["nope"]).is_err());
    let ids: Vec<String> = pr.run(&["thm1.3", "sigma", "thm1.3"]).unwrap().into_iter().map(|r| r.claim).collect();
    assert_eq!(ids, vec!["sigma", "thm1.3"]);
}

#[test]
fn semisimple_everything_passes() {
    let pr = prepared("semisimple", 7);
    for r in pr.run(&[]).unwrap() {
        assert_eq!(r.verdict, Verdict::Pass, "{} {}", r.claim, r.detail);
        assert!(r.witness.is_none());
    }
}

#[test]
fn runs_are_deterministic_per_seed() {
    let a = serde_json::to_string(&prepared("paper-ex-2", 11).run(&[]).unwrap()).unwrap();
    let b = serde_json::to_string(&prepared("paper-ex-2", 11).run(&[]).unwrap()).unwrap();
    assert_eq!(a, b);
    let specs = |pr: &Prepared| -> Vec<ModuleSpec> {
        pr.samples.left.modules.iter().filter(|s| s.seed.is_some()).map(|s| s.module.to_spec()).collect()
    };
    assert_ne!(specs(&prepared("paper-ex-2", 11)), specs(&prepared("paper-ex-2", 12)));
}

#[test]
fn check_results_round_trip_through_json() {
    let pr = prepared("a3", 3);
    for r in pr.run(&[]).unwrap() {
        let text = serde_json::to_string(&r).unwrap();
        let back: CheckResult = serde_json::from_str(&text).unwrap();
        assert_eq!(serde_json::to_string(&back).unwrap(), text);
    }
}

/// A corrupted profile makes lemma2.1 fail; the witness carries the seed and
/// a module spec that rebuilds the sampled module.
#[test]
fn fail_witness_replays_the_module() {
    let mut pr = prepared("paper-ex-1", 5);
    let idx = pr.samples.left.modules.iter().position(|s| s.seed.is_some() && s.module.dim() > 0).unwrap();
    let sample = &mut pr.samples.left.modules[idx];
    let n = sample.module.dim();
    // claim all of X is torsion while Ker σ_X stays as computed
    sample.profile.torsion = Mat::identity(sample.module.p(), n);
    sample.profile.ker_sigma = Mat::zeros(sample.module.p(), n, 0);
    let r = pr.run(&["lemma2.1"]).unwrap().remove(0);
    assert_eq!(r.verdict, Verdict::Fail);
    let w = r.witness.unwrap();
    assert_eq!(w["seed"].as_u64(), pr.samples.left.modules[idx].seed);
    assert_eq!(w["context"], "paper-ex-1");
    let spec: ModuleSpec = serde_json::from_value(w["module"].clone()).unwrap();
    let rebuilt = spec.build(pr.left.lambda()).unwrap();
    assert!(rebuilt.same_action(&pr.samples.left.modules[idx].module));
}
