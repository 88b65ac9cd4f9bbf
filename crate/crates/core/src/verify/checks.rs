//! The checkers. Each returns groups of conditions; see the verdict rules in
//! the parent module.

use std::time::Instant;

use serde_json::{json, Value};

use crate::bimodule::BimoduleContext;
use crate::error::{Error, Result};
use crate::functors::{
    double_dual_map, dual_map, dual_wrt_u, evaluation_map, ext_u, ext_u_dim, grade_u,
    is_cogenerated_by, is_in_add, is_qf3, star_into, u_dominant_dimension, u_resolution_dimension,
    CERTIFICATE_LIMIT,
};
use crate::linalg::Mat;
use crate::module::{
    direct_sum, hom_matrices, indec_injective, indec_projective, is_isomorphic, regular_module,
    simple_module, socle, tensor_over, FdModule, ModuleMap,
};
use crate::resolution::{min_proj_resolution, projective_dimension, tor_dim_from, DimReport};

use super::samples::{Sample, SideSamples};
use super::{CheckResult, Condition, Group, Prepared, Verdict};

pub const CLAIMS: [&str; 12] = [
    "lemma2.1", "lemma2.3", "lemma2.6", "lemma2.7", "prop2.2", "prop2.4", "prop3.1", "prop3.2",
    "prop3.3", "prop3.4", "sigma", "thm1.3",
];

struct Side<'a> {
    tag: &'static str,
    ctx: &'a BimoduleContext,
    other: &'a BimoduleContext,
    samples: &'a SideSamples,
}

fn sides(pr: &Prepared) -> [Side<'_>; 2] {
    [
        Side {
            tag: "left",
            ctx: &pr.left,
            other: &pr.right,
            samples: &pr.samples.left,
        },
        Side {
            tag: "right",
            ctx: &pr.right,
            other: &pr.left,
            samples: &pr.samples.right,
        },
    ]
}

/// Collected output of one checker.
#[derive(Default)]
struct Out {
    groups: Vec<Group>,
    witness: Option<Value>,
    notes: Vec<String>,
    /// Sampled conditions that a sample refuted.
    refuted: Vec<String>,
}

impl Out {
    fn witness(&mut self, w: impl FnOnce() -> Value) {
        if self.witness.is_none() {
            self.witness = Some(w());
        }
    }
}

fn sample_witness(side: &str, s: &Sample, extra: Value) -> Value {
    json!({
        "side": side,
        "sample": s.label,
        "seed": s.seed,
        "module": s.module.to_spec(),
        "values": extra,
    })
}

fn module_witness(side: &str, label: &str, m: &FdModule, extra: Value) -> Value {
    json!({ "side": side, "sample": label, "module": m.to_spec(), "values": extra })
}

fn contains(space: &Mat, vectors: &Mat) -> bool {
    space.hstack(vectors).rank() == space.rank()
}

fn is_monic_dd(ctx: &BimoduleContext, f: &ModuleMap) -> Result<bool> {
    Ok(double_dual_map(ctx, f)?.is_injective())
}

fn star_e0_dim(ctx: &BimoduleContext, bound: usize) -> Result<DimReport> {
    Ok(u_resolution_dimension(ctx, &ctx.e0()?, bound)?.dim)
}

fn dom(ctx: &BimoduleContext, d_max: usize) -> Result<DimReport> {
    u_dominant_dimension(ctx, ctx.u_left(), d_max)
}

/// Exactness of `0 -> U** -> E_0** -> ... -> E_{k-1}**`.
fn segment_exact(ctx: &BimoduleContext, k: usize) -> Result<bool> {
    let inj = ctx.injective_resolution(k)?;
    let mut maps = vec![inj.augmentation.clone()];
    maps.extend(inj.differentials.iter().take(k.saturating_sub(1)).cloned());
    let dd: Vec<ModuleMap> = maps.iter().map(|f| double_dual_map(ctx, f)).collect::<Result<_>>()?;
    if !dd[0].is_injective() {
        return Ok(false);
    }
    for j in 1..k {
        // past the end of the resolution every term is zero
        let Some(prev) = dd.get(j - 1) else { break };
        let ok = match dd.get(j) {
            Some(g) => g.matrix().mul(prev.matrix()).is_zero() && g.source().dim() - g.rank() == prev.rank(),
            None => prev.is_surjective(),
        };
        if !ok {
            return Ok(false);
        }
    }
    Ok(true)
}

fn torsion_equals_kernel(s: &Sample) -> bool {
    let (t, k) = (&s.profile.torsion, &s.profile.ker_sigma);
    t.cols() == k.cols() && contains(k, t)
}

fn first_failing(samples: &[Sample], pred: impl Fn(&Sample) -> bool) -> Option<&Sample> {
    samples.iter().find(|s| !pred(s))
}

fn lemma_2_1(pr: &Prepared, out: &mut Out) -> Result<()> {
    for sd in sides(pr) {
        let ms = &sd.samples.modules;
        let inclusion = first_failing(ms, |s| contains(&s.profile.ker_sigma, &s.profile.torsion));
        let biconditional = first_failing(ms, |s| torsion_equals_kernel(s) == (s.profile.hom_ker_e0 == 0));
        for s in inclusion.iter().chain(biconditional.iter()) {
            out.witness(|| {
                sample_witness(
                    sd.tag,
                    s,
                    json!({"dim_t": s.profile.torsion.cols(), "dim_ker_sigma": s.profile.ker_sigma.cols(),
                           "hom_ker_e0": s.profile.hom_ker_e0}),
                )
            });
        }
        out.groups.push(Group::assert(
            format!("{}: t(X) ⊆ Ker σ_X on {} samples", sd.tag, ms.len()),
            inclusion.is_none(),
        ));
        out.groups.push(Group::assert(
            format!("{}: t(X) = Ker σ_X iff Hom(Ker σ_X, E_0) = 0 on {} samples", sd.tag, ms.len()),
            biconditional.is_none(),
        ));
    }
    Ok(())
}

fn sigma(pr: &Prepared, out: &mut Out) -> Result<()> {
    for sd in sides(pr) {
        let (ctx, other) = (sd.ctx, sd.other);
        let mut ker_ok = true;
        let mut coker_ok = true;
        let mut grade_ok = true;
        let mut split_ok = true;
        for s in &sd.samples.modules {
            let pf = &s.profile;
            let ext1 = ext_u_dim(other, &pf.transpose, 1)?;
            let ext2 = ext_u_dim(other, &pf.transpose, 2)?;
            let ker = pf.ker_sigma.cols();
            let coker = pf.sigma.target().dim() - pf.sigma.rank();
            let g = grade_u(ctx, &s.module, 0)?;
            let dual = dual_wrt_u(ctx, &s.module)?;
            let split = dual_map(ctx, &pf.sigma)?
                .matrix()
                .mul(evaluation_map(other, &dual)?.matrix())
                == Mat::identity(s.module.p(), dual.dim());
            let row = (ker == ext1, coker == ext2, (g.value >= 1) == (pf.dual_dim == 0), split);
            if row != (true, true, true, true) {
                out.witness(|| {
                    sample_witness(
                        sd.tag,
                        s,
                        json!({"dim_ker_sigma": ker, "dim_ext1_tr": ext1, "dim_coker_sigma": coker,
                               "dim_ext2_tr": ext2, "grade": g.to_string(), "dual_dim": pf.dual_dim,
                               "sigma_dual_split": split}),
                    )
                });
            }
            ker_ok &= row.0;
            coker_ok &= row.1;
            grade_ok &= row.2;
            split_ok &= row.3;
        }
        let n = sd.samples.modules.len();
        out.groups.push(Group::assert(format!("{}: dim Ker σ_X = dim Ext^1(Tr_U X, U) on {n} samples", sd.tag), ker_ok));
        out.groups.push(Group::assert(format!("{}: dim Coker σ_X = dim Ext^2(Tr_U X, U) on {n} samples", sd.tag), coker_ok));
        out.groups.push(Group::assert(format!("{}: grade_U X >= 1 iff X* = 0 on {n} samples", sd.tag), grade_ok));
        out.groups.push(Group::assert(format!("{}: (σ_X)* σ_(X*) = id on {n} samples", sd.tag), split_ok));

        let mut natural = true;
        let maps: Vec<(&str, &ModuleMap)> = sd
            .samples
            .monos
            .iter()
            .map(|m| (m.label.as_str(), &m.map))
            .chain(sd.samples.ses.iter().map(|s| (s.label.as_str(), &s.epi)))
            .collect();
        for (label, f) in &maps {
            let lhs = evaluation_map(ctx, f.target())?.matrix().mul(f.matrix());
            let rhs = double_dual_map(ctx, f)?.matrix().mul(evaluation_map(ctx, f.source())?.matrix());
            if lhs != rhs {
                natural = false;
                out.witness(|| module_witness(sd.tag, label, f.source(), json!({"map": "naturality of σ"})));
            }
        }
        out.groups.push(Group::assert(
            format!("{}: σ_N f = f** σ_M for {} sampled maps", sd.tag, maps.len()),
            natural,
        ));

        if ctx.u_left().same_action(&regular_module(ctx.lambda())) {
            let mut ok = true;
            for v in 0..ctx.lambda().vertex_count() {
                let pv = indec_projective(ctx.lambda(), v)?;
                let s = evaluation_map(ctx, &pv)?;
                ok &= s.is_iso() && crate::functors::transpose_u(ctx, &pv)?.is_zero();
            }
            out.groups.push(Group::assert(format!("{}: σ_P iso and Tr_U P = 0 for projectives", sd.tag), ok));
        }
    }
    Ok(())
}

fn flat_star_e0(pr: &Prepared, ctx: &BimoduleContext) -> Result<bool> {
    Ok(star_e0_dim(ctx, pr.resolution_length)?.is_at_most(0))
}

fn all_torsion_equal(sd: &Side<'_>, out: &mut Out) -> bool {
    match first_failing(&sd.samples.modules, torsion_equals_kernel) {
        None => true,
        Some(s) => {
            out.refuted.push(format!("{}: t(X) != Ker σ_X for {}", sd.tag, s.label));
            false
        }
    }
}

fn all_monos_preserved(sd: &Side<'_>, out: &mut Out) -> Result<bool> {
    for m in &sd.samples.monos {
        if !is_monic_dd(sd.ctx, &m.map)? {
            out.refuted.push(format!("{}: f** not monic for {}", sd.tag, m.label));
            return Ok(false);
        }
    }
    Ok(true)
}

fn prop_2_2(pr: &Prepared, out: &mut Out) -> Result<()> {
    let mut conds = Vec::new();
    for sd in sides(pr) {
        let op = if sd.tag == "left" { "" } else { "^op" };
        conds.push(Condition::sampled(format!("(1){op} t(X) = Ker σ_X for all X"), all_torsion_equal(&sd, out)));
        conds.push(Condition::sampled(
            format!("(2){op} (-)** preserves monomorphisms"),
            all_monos_preserved(&sd, out)?,
        ));
    }
    conds.push(Condition::exact("*E_0 flat (exact route)", flat_star_e0(pr, &pr.left)?));
    conds.push(Condition::exact("*E'_0 flat (exact route)", flat_star_e0(pr, &pr.right)?));
    out.groups.push(Group::new("equivalent conditions", conds));
    Ok(())
}

/// Some injective `E` with `*E` flat cogenerates `E_0`.
fn flat_injective_cogenerates(ctx: &BimoduleContext) -> Result<bool> {
    let a = ctx.lambda();
    let mut flat = Vec::new();
    for v in 0..a.vertex_count() {
        let i = indec_injective(a, v)?;
        if projective_dimension(&star_into(ctx, &i)?, 0)?.is_at_most(0) {
            flat.push(i);
        }
    }
    if flat.is_empty() {
        return Ok(false);
    }
    is_cogenerated_by(&ctx.e0()?, &direct_sum(a, &flat)?)
}

fn prop_2_4(pr: &Prepared, out: &mut Out) -> Result<()> {
    let mut flats = Vec::new();
    for sd in sides(pr) {
        let f = flat_star_e0(pr, sd.ctx)?;
        flats.push(f);
        let cogen = flat_injective_cogenerates(sd.ctx)?;
        let torsion = all_torsion_equal(&sd, out);
        out.groups.push(Group::new(
            format!("{} side", sd.tag),
            vec![
                Condition::exact("(1) *E_0 flat", f),
                Condition::exact("(2) an injective E with *E flat cogenerates E_0", cogen),
                Condition::sampled("(3) t(X) = Ker σ_X for all X", torsion),
            ],
        ));
    }
    out.groups.push(Group::new(
        "left/right flatness",
        vec![Condition::exact("*E_0 flat", flats[0]), Condition::exact("*E'_0 flat", flats[1])],
    ));
    Ok(())
}

fn lemma_2_3(pr: &Prepared, out: &mut Out) -> Result<()> {
    for sd in sides(pr) {
        let e = sd.ctx.e0()?;
        let star = star_into(sd.ctx, &e)?;
        let mut pairs = 0;
        let mut ok = true;
        for n in &sd.other.samples_for(pr).modules {
            let res = min_proj_resolution(&n.module, 4)?;
            for i in 0..=3 {
                let tor = tor_dim_from(&res, &star, i)?;
                let ext = crate::resolution::ext_module_from(&res, sd.other.u_left(), sd.other.u_right(), i)?;
                let hom = hom_matrices(&ext, &e)?.len();
                pairs += 1;
                if tor != hom {
                    ok = false;
                    let tag = if sd.tag == "left" { "right" } else { "left" };
                    out.witness(|| sample_witness(tag, n, json!({"i": i, "dim_tor": tor, "dim_hom_ext": hom})));
                }
            }
        }
        out.groups.push(Group::assert(
            format!("{}: dim Tor_i(N, *E_0) = dim Hom(Ext^i(N, U), E_0) on {pairs} pairs (i <= 3)", sd.tag),
            ok,
        ));
    }
    Ok(())
}

trait SamplesFor {
    fn samples_for<'a>(&self, pr: &'a Prepared) -> &'a SideSamples;
}

impl SamplesFor for BimoduleContext {
    fn samples_for<'a>(&self, pr: &'a Prepared) -> &'a SideSamples {
        if self.is_swapped() == pr.left.is_swapped() {
            &pr.samples.left
        } else {
            &pr.samples.right
        }
    }
}

/// Least `n <= bound` with `Hom(Ext^{n+1}(S, U), E) = 0` for every simple
/// `S` on the other side.
fn hom_ext_route(ctx: &BimoduleContext, other: &BimoduleContext, e: &FdModule, bound: usize) -> Result<DimReport> {
    let b = other.lambda();
    let resolutions = (0..b.vertex_count())
        .map(|w| min_proj_resolution(&simple_module(b, w)?, bound + 2))
        .collect::<Result<Vec<_>>>()?;
    for n in 0..=bound {
        let mut zero = true;
        for res in &resolutions {
            let ext = crate::resolution::ext_module_from(res, other.u_left(), other.u_right(), n + 1)?;
            if !hom_matrices(&ext, e)?.is_empty() {
                zero = false;
                break;
            }
        }
        if zero {
            return Ok(DimReport::exact(n, bound));
        }
    }
    let _ = ctx;
    Ok(DimReport::at_least(bound + 1, bound))
}

fn lemma_2_7(pr: &Prepared, out: &mut Out) -> Result<()> {
    let bound = pr.resolution_length;
    for sd in sides(pr) {
        let a = sd.ctx.lambda();
        let regular = sd.ctx.u_left().same_action(&regular_module(a));
        let mut injectives: Vec<(String, FdModule)> =
            (0..a.vertex_count()).map(|v| Ok((format!("I{}", v + 1), indec_injective(a, v)?))).collect::<Result<_>>()?;
        injectives.push(("E0".into(), sd.ctx.e0()?));
        let mut cert_ok = true;
        let mut route_ok = true;
        let mut add_ok = true;
        let mut scan_ok = true;
        let mut tensor_ok = true;
        let mut certified = 0;
        for (label, e) in &injectives {
            let r = u_resolution_dimension(sd.ctx, e, bound)?;
            let route = hom_ext_route(sd.ctx, sd.other, e, bound)?;
            let in_add = is_in_add(e, sd.ctx.u_left())?;
            let mut bad = Vec::new();
            if route != r.dim {
                route_ok = false;
                bad.push("Hom/Ext route");
            }
            match &r.certificate {
                Some(c) => {
                    certified += 1;
                    if !(c.exact && c.in_add_u && c.length == r.dim.value) {
                        cert_ok = false;
                        bad.push("certificate");
                    }
                }
                None => {
                    if r.dim.is_at_most(CERTIFICATE_LIMIT) {
                        cert_ok = false;
                        bad.push("missing certificate");
                    }
                }
            }
            if r.dim.is_at_most(0) != in_add {
                add_ok = false;
                bad.push("flat iff in add U");
            }
            if regular && label.starts_with('I') {
                let mut scan = false;
                for w in 0..a.vertex_count() {
                    match is_isomorphic(e, &indec_projective(a, w)?) {
                        Ok(true) => scan = true,
                        Ok(false) => {}
                        Err(Error::Inconclusive { .. }) => out.notes.push(format!("{}: iso scan inconclusive for {label}", sd.tag)),
                        Err(err) => return Err(err),
                    }
                }
                if scan != in_add {
                    scan_ok = false;
                    bad.push("summand scan");
                }
            }
            let star = star_into(sd.ctx, e)?;
            let t = tensor_over(sd.ctx.u_right(), &star, Some(sd.ctx.u_left()))?;
            let iso = match t.module.as_ref().map(|m| is_isomorphic(m, e)) {
                Some(Ok(b)) => b,
                Some(Err(Error::Inconclusive { .. })) => t.dim == e.dim(),
                Some(Err(err)) => return Err(err),
                None => false,
            };
            if !iso {
                tensor_ok = false;
                bad.push("U ⊗ *E ≅ E");
            }
            if !bad.is_empty() {
                out.witness(|| {
                    module_witness(
                        sd.tag,
                        label,
                        e,
                        json!({"pd_star": r.dim.to_string(), "hom_ext_route": route.to_string(),
                               "in_add_u": in_add, "failed": bad}),
                    )
                });
            }
        }
        let n = injectives.len();
        out.groups.push(Group::assert(format!("{}: certificate length = pd(*E) ({certified} certified)", sd.tag), cert_ok));
        out.groups.push(Group::assert(format!("{}: pd(*E) agrees with the Hom(Ext, E) route for {n} injectives", sd.tag), route_ok));
        out.groups.push(Group::assert(format!("{}: *E flat iff E in add U", sd.tag), add_ok));
        if regular {
            out.groups.push(Group::assert(format!("{}: add-membership agrees with the summand scan", sd.tag), scan_ok));
        }
        out.groups.push(Group::assert(format!("{}: U ⊗ *E ≅ E", sd.tag), tensor_ok));
    }
    Ok(())
}

fn lemma_2_6(pr: &Prepared, out: &mut Out) -> Result<()> {
    for sd in sides(pr) {
        let mut premises = 0;
        let mut ok = true;
        for s in &sd.samples.modules {
            for n in 0..=3usize {
                if !grade_u(sd.ctx, &s.module, n)?.is_at_least(n) {
                    break;
                }
                let ext = ext_u(sd.ctx, &s.module, n)?;
                if !grade_u(sd.other, &ext, n + 1)?.is_at_least(n + 1) {
                    continue;
                }
                premises += 1;
                if !ext.is_zero() {
                    ok = false;
                    out.witness(|| sample_witness(sd.tag, s, json!({"n": n, "dim_ext": ext.dim()})));
                }
            }
        }
        out.groups.push(Group::assert(
            format!("{}: Ext^n(X, U) = 0 whenever the grade premises hold ({premises} instances, n <= 3)", sd.tag),
            ok,
        ));
    }
    Ok(())
}

fn thm_1_3(pr: &Prepared, out: &mut Out) -> Result<()> {
    let d_max = pr.spec.d_max;
    let dl = dom(&pr.left, d_max)?;
    let dr = dom(&pr.right, d_max)?;
    out.notes.push(format!("U-dom.dim: left {dl}, right {dr}"));
    if dl != dr {
        out.witness(|| json!({"left": dl.to_string(), "right": dr.to_string()}));
    }
    out.groups.push(Group::assert(format!("U-dom.dim left ({dl}) = right ({dr})"), dl == dr));

    for (sd, d) in sides(pr).into_iter().zip([dl, dr]) {
        if !d.is_at_least(2) {
            continue;
        }
        let torsionfree: Vec<&Sample> = sd.samples.modules.iter().filter(|s| s.profile.dual_dim == 0).collect();
        let grades = torsionfree
            .iter()
            .map(|s| grade_u(sd.ctx, &s.module, d_max))
            .collect::<Result<Vec<_>>>()?;
        for n in 2..=d_max {
            out.groups.push(Group::new(
                format!("{}: n = {n}", sd.tag),
                vec![
                    Condition::exact(format!("U-dom.dim >= {n}"), d.is_at_least(n)),
                    Condition::sampled(
                        format!("grade_U M >= {n} for sampled M with M* = 0 ({})", torsionfree.len()),
                        grades.iter().all(|g| g.is_at_least(n)),
                    ),
                ],
            ));
        }
    }
    let ql = is_qf3(pr.left.u_left())?;
    let qr = is_qf3(pr.right.u_left())?;
    out.groups.push(Group::new(
        "QF-3",
        vec![
            Condition::exact("_ΛU QF-3", ql),
            Condition::exact("U_Γ QF-3", qr),
            Condition::exact("U-dom.dim >= 1", dl.is_at_least(1)),
        ],
    ));
    Ok(())
}

fn prop_3_1(pr: &Prepared, out: &mut Out) -> Result<()> {
    let d_max = pr.spec.d_max;
    let dl = dom(&pr.left, d_max)?;
    let dr = dom(&pr.right, d_max)?;
    for k in 1..=d_max {
        out.groups.push(Group::new(
            format!("k = {k}"),
            vec![
                Condition::exact("(1) U-dom.dim(_ΛU) >= k", dl.is_at_least(k)),
                Condition::exact("(2) double-dualized segment exact", segment_exact(&pr.left, k)?),
                Condition::exact("(1)^op U-dom.dim(U_Γ) >= k", dr.is_at_least(k)),
                Condition::exact("(2)^op double-dualized segment exact", segment_exact(&pr.right, k)?),
            ],
        ));
    }
    Ok(())
}

fn prop_3_2(pr: &Prepared, out: &mut Out) -> Result<()> {
    let d_max = pr.spec.d_max;
    let mut conds = Vec::new();
    for sd in sides(pr) {
        let op = if sd.tag == "left" { "" } else { "^op" };
        conds.push(Condition::exact(format!("(1){op} U-dom.dim >= 1"), dom(sd.ctx, d_max)?.is_at_least(1)));
        conds.push(Condition::sampled(format!("(2){op} (-)** preserves monomorphisms"), all_monos_preserved(&sd, out)?));
        conds.push(Condition::exact(format!("(3){op} U** -> E_0** monic"), segment_exact(sd.ctx, 1)?));
    }
    out.groups.push(Group::new("equivalent conditions", conds));
    Ok(())
}

fn left_exact_on_samples(sd: &Side<'_>, out: &mut Out) -> Result<bool> {
    for s in &sd.samples.ses {
        let a = double_dual_map(sd.ctx, &s.mono)?;
        let b = double_dual_map(sd.ctx, &s.epi)?;
        let exact = a.is_injective()
            && b.matrix().mul(a.matrix()).is_zero()
            && b.source().dim() - b.rank() == a.rank();
        if !exact {
            out.refuted.push(format!("{}: (-)** not left exact on {}", sd.tag, s.label));
            return Ok(false);
        }
    }
    Ok(true)
}

fn ext_ext_vanishes(sd: &Side<'_>, out: &mut Out) -> Result<bool> {
    for s in &sd.samples.modules {
        let e1 = ext_u(sd.ctx, &s.module, 1)?;
        if ext_u_dim(sd.other, &e1, 1)? != 0 {
            out.refuted.push(format!("{}: Ext^1(Ext^1(X, U), U) != 0 for {}", sd.tag, s.label));
            return Ok(false);
        }
    }
    Ok(true)
}

fn prop_3_3(pr: &Prepared, out: &mut Out) -> Result<()> {
    let d_max = pr.spec.d_max;
    let mut conds = Vec::new();
    for sd in sides(pr) {
        let op = if sd.tag == "left" { "" } else { "^op" };
        conds.push(Condition::exact(format!("(1){op} U-dom.dim >= 2"), dom(sd.ctx, d_max)?.is_at_least(2)));
        conds.push(Condition::sampled(format!("(2){op} (-)** left exact"), left_exact_on_samples(&sd, out)?));
        conds.push(Condition::exact(format!("(3){op} U** -> E_0** -> E_1** exact"), segment_exact(sd.ctx, 2)?));
        let monos = all_monos_preserved(&sd, out)?;
        let ext = monos && ext_ext_vanishes(&sd, out)?;
        conds.push(Condition::sampled(format!("(4){op} monos preserved and Ext^1(Ext^1(X, U), U) = 0"), ext));
    }
    out.groups.push(Group::new("equivalent conditions", conds));
    Ok(())
}

fn prop_3_4(pr: &Prepared, out: &mut Out) -> Result<()> {
    for sd in sides(pr) {
        let resol = star_e0_dim(sd.ctx, pr.resolution_length)?;
        // (2) σ_X essential for torsionless X: soc X** inside Im σ_X
        let mut essential = true;
        for s in sd.samples.modules.iter().filter(|s| s.profile.ker_sigma.cols() == 0) {
            let (_, soc) = socle(s.profile.sigma.target())?;
            if !contains(&s.profile.sigma.matrix().column_basis(), soc.matrix()) {
                essential = false;
                out.refuted.push(format!("{}: σ_X not essential for {}", sd.tag, s.label));
                break;
            }
        }
        // (3) monos into torsionless targets
        let mut monos = true;
        for m in &sd.samples.monos {
            if evaluation_map(sd.ctx, m.map.target())?.is_injective() && !is_monic_dd(sd.ctx, &m.map)? {
                monos = false;
                out.refuted.push(format!("{}: f** not monic for {}", sd.tag, m.label));
                break;
            }
        }
        // (4) [Ext^1(X, U)]* = 0
        let mut grade = true;
        for s in &sd.samples.modules {
            let e1 = ext_u(sd.ctx, &s.module, 1)?;
            if dual_wrt_u(sd.other, &e1)?.dim() != 0 {
                grade = false;
                out.refuted.push(format!("{}: [Ext^1(X, U)]* != 0 for {}", sd.tag, s.label));
                break;
            }
        }
        out.groups.push(Group::new(
            format!("{} side", sd.tag),
            vec![
                Condition::exact(format!("(1) U-resol.dim(E_0) <= 1 [{resol}]"), resol.is_at_most(1)),
                Condition::sampled("(2) σ_X essential mono for torsionless X", essential),
                Condition::sampled("(3) f** monic for monos into torsionless modules", monos),
                Condition::sampled("(4) grade_U Ext^1(X, U) >= 1", grade),
            ],
        ));
    }
    Ok(())
}

/// Runs one checker by claim id.
pub fn run_check(pr: &Prepared, claim: &str) -> Result<CheckResult> {
    let start = Instant::now();
    let mut out = Out::default();
    match claim {
        "lemma2.1" => lemma_2_1(pr, &mut out)?,
        "lemma2.3" => lemma_2_3(pr, &mut out)?,
        "lemma2.6" => lemma_2_6(pr, &mut out)?,
        "lemma2.7" => lemma_2_7(pr, &mut out)?,
        "prop2.2" => prop_2_2(pr, &mut out)?,
        "prop2.4" => prop_2_4(pr, &mut out)?,
        "prop3.1" => prop_3_1(pr, &mut out)?,
        "prop3.2" => prop_3_2(pr, &mut out)?,
        "prop3.3" => prop_3_3(pr, &mut out)?,
        "prop3.4" => prop_3_4(pr, &mut out)?,
        "sigma" => sigma(pr, &mut out)?,
        "thm1.3" => thm_1_3(pr, &mut out)?,
        other => return Err(Error::Instance(format!("unknown claim id `{other}`"))),
    }
    let mut verdict = out.groups.iter().map(|g| g.verdict).max().unwrap_or(Verdict::Pass);
    let bounds = pr.bounds();
    let mut detail = out.notes.join("; ");
    if !out.refuted.is_empty() {
        if !detail.is_empty() {
            detail.push_str("; ");
        }
        detail.push_str(&format!("refuted on samples: {}", out.refuted.join(", ")));
    }
    let mut add = |s: String| {
        if !detail.is_empty() {
            detail.push_str("; ");
        }
        detail.push_str(&s);
    };
    if verdict == Verdict::Undetermined {
        add(format!(
            "no refutation among {} left / {} right samples (seed {}, dim cap {})",
            bounds.samples_left, bounds.samples_right, pr.spec.seed, pr.spec.dim_cap
        ));
    }
    if verdict == Verdict::Fail && !pr.left.validation().exact {
        verdict = Verdict::Undetermined;
        add(format!(
            "selforthogonality verified only up to Ext^{}",
            pr.left.validation().selforthogonal_verified_up_to
        ));
    }
    if let Some(w) = out.witness.as_mut() {
        if verdict == Verdict::Fail {
            w["context"] = json!(pr.name);
            w["seed"] = w.get("seed").cloned().unwrap_or(json!(pr.spec.seed));
        }
    }
    Ok(CheckResult {
        claim: claim.into(),
        context: pr.name.clone(),
        verdict,
        detail,
        groups: out.groups,
        witness: if verdict == Verdict::Pass { None } else { out.witness },
        bounds,
        elapsed: start.elapsed(),
    })
}
