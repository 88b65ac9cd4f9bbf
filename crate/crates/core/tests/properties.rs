//! Property tests over random modules on every suite context.

use std::sync::OnceLock;

use proptest::prelude::*;

use udom::algebra::opposite;
use udom::bimodule::{BimoduleContext, DEFAULT_EXT_BOUND};
use udom::functors::{
    double_dual_map, dual_map, dual_wrt_u, evaluation_map, ext_u, ext_u_dim, grade_u, is_cogenerated_by, is_in_add,
    star_into, torsion_submodule, transpose_u,
};
use udom::instance::{ArrowSpec, BimoduleSpec, FieldSpec, Instance, QuiverSpec};
use udom::linalg::Mat;
use udom::module::{
    hom_matrices, indec_projective, is_isomorphic, k_dual, regular_module, submodule_spanned, tensor_over, FdModule,
};
use udom::resolution::{ext_module_from, min_inj_resolution, min_proj_resolution, projective_dimension, tor_dim_from};
use udom::verify::random_module;
use udom::verify::suite::suite_contexts;

struct Pair {
    name: String,
    left: BimoduleContext,
    right: BimoduleContext,
}

fn contexts() -> &'static [Pair] {
    static CONTEXTS: OnceLock<Vec<Pair>> = OnceLock::new();
    CONTEXTS.get_or_init(|| {
        suite_contexts(None, DEFAULT_EXT_BOUND)
            .unwrap()
            .into_iter()
            .map(|(name, ctx)| Pair {
                name,
                right: ctx.side_swap(),
                left: ctx,
            })
            .collect()
    })
}

/// A context (either orientation), its swap and a random module.
fn pick(idx: usize, right: bool, seed: u64, size: usize) -> (&'static str, &'static BimoduleContext, &'static BimoduleContext, FdModule) {
    let pair = &contexts()[idx % contexts().len()];
    let (ctx, other) = if right { (&pair.right, &pair.left) } else { (&pair.left, &pair.right) };
    let m = random_module(ctx.lambda(), seed, size).unwrap();
    (&pair.name, ctx, other, m)
}

fn random_vector(p: u32, n: usize, seed: u64) -> Mat {
    let v: Vec<u32> = (0..n).map(|i| ((seed.wrapping_mul(2654435761).wrapping_add(i as u64 * 40503)) % p as u64) as u32).collect();
    Mat::column_vector(p, &v)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn random_modules_are_valid(idx in 0usize..16, right: bool, seed: u64, size in 0usize..4) {
        let (_, ctx, _, m) = pick(idx, right, seed, size);
        m.validate().unwrap();
        prop_assert_eq!(m.to_spec(), random_module(ctx.lambda(), seed, size).unwrap().to_spec());
        let weights = m.weight_dims().unwrap();
        for (v, &w) in weights.iter().enumerate() {
            let pv = indec_projective(ctx.lambda(), v).unwrap();
            prop_assert_eq!(hom_matrices(&pv, &m).unwrap().len(), w);
        }
    }

    #[test]
    fn kernel_image_rank_nullity(idx in 0usize..16, right: bool, seed: u64, size in 1usize..4) {
        let (_, ctx, _, m) = pick(idx, right, seed, size);
        let sigma = evaluation_map(ctx, &m).unwrap();
        let (k, ki) = sigma.kernel();
        let (i, _) = sigma.image();
        prop_assert_eq!(k.dim() + i.dim(), m.dim());
        prop_assert!(ki.is_injective());
        prop_assert!(sigma.compose(&ki).is_zero());
        k.validate().unwrap();
        i.validate().unwrap();
    }

    #[test]
    fn resolutions_exact_and_minimal(idx in 0usize..16, right: bool, seed: u64, size in 1usize..4) {
        let (_, _, _, m) = pick(idx, right, seed, size);
        let proj = min_proj_resolution(&m, 3).unwrap();
        prop_assert!(proj.is_exact());
        prop_assert!(proj.is_minimal().unwrap());
        let inj = min_inj_resolution(&m, 3).unwrap();
        prop_assert!(inj.is_exact());
        prop_assert!(inj.is_minimal().unwrap());
    }

    #[test]
    fn sigma_kernel_and_cokernel_are_ext_of_transpose(idx in 0usize..16, right: bool, seed: u64, size in 1usize..4) {
        let (name, ctx, other, m) = pick(idx, right, seed, size);
        let sigma = evaluation_map(ctx, &m).unwrap();
        let tr = transpose_u(ctx, &m).unwrap();
        let ker = m.dim() - sigma.rank();
        let coker = sigma.target().dim() - sigma.rank();
        prop_assert_eq!(ker, ext_u_dim(other, &tr, 1).unwrap(), "{}", name);
        prop_assert_eq!(coker, ext_u_dim(other, &tr, 2).unwrap(), "{}", name);
    }

    #[test]
    fn torsion_inside_kernel_of_sigma(idx in 0usize..16, right: bool, seed: u64, size in 1usize..4) {
        let (_, ctx, _, m) = pick(idx, right, seed, size);
        let sigma = evaluation_map(ctx, &m).unwrap();
        let (_, t) = torsion_submodule(ctx, &m).unwrap();
        prop_assert!(sigma.compose(&t).is_zero());
    }

    #[test]
    fn grade_positive_iff_dual_vanishes(idx in 0usize..16, right: bool, seed: u64, size in 1usize..4) {
        let (_, ctx, _, m) = pick(idx, right, seed, size);
        let g = grade_u(ctx, &m, 2).unwrap();
        prop_assert_eq!(g.is_at_least(1), dual_wrt_u(ctx, &m).unwrap().dim() == 0);
        // grade is the first nonvanishing Ext, computed a second way
        let first = (0..=2).find(|&i| ext_u_dim(ctx, &m, i).unwrap() != 0);
        prop_assert_eq!(first.map_or(3, |i| i), g.value);
    }

    #[test]
    fn dual_of_sigma_splits_sigma_of_dual(idx in 0usize..16, right: bool, seed: u64, size in 1usize..4) {
        let (_, ctx, other, m) = pick(idx, right, seed, size);
        let sigma = evaluation_map(ctx, &m).unwrap();
        let dual = dual_wrt_u(ctx, &m).unwrap();
        let prod = dual_map(ctx, &sigma).unwrap().matrix().mul(evaluation_map(other, &dual).unwrap().matrix());
        prop_assert_eq!(prod, Mat::identity(m.p(), dual.dim()));
    }

    #[test]
    fn sigma_is_natural(idx in 0usize..16, right: bool, seed: u64, size in 1usize..4) {
        let (_, ctx, _, m) = pick(idx, right, seed, size);
        prop_assume!(!m.is_zero());
        let (_, sub) = submodule_spanned(&m, &random_vector(m.p(), m.dim(), seed));
        let syz = min_proj_resolution(&m, 1).unwrap().syzygies[0].clone();
        for f in [sub, syz] {
            let lhs = evaluation_map(ctx, f.target()).unwrap().matrix().mul(f.matrix());
            let rhs = double_dual_map(ctx, &f).unwrap().matrix().mul(evaluation_map(ctx, f.source()).unwrap().matrix());
            prop_assert_eq!(lhs, rhs);
        }
    }

    #[test]
    fn tor_into_star_is_dual_to_hom_from_ext(idx in 0usize..16, right: bool, seed: u64, size in 1usize..4) {
        let (_, ctx, other, _) = pick(idx, right, seed, size);
        let n = random_module(other.lambda(), seed, size).unwrap();
        let e = ctx.e0().unwrap();
        let star = star_into(ctx, &e).unwrap();
        let res = min_proj_resolution(&n, 4).unwrap();
        for i in 0..=3 {
            let ext = ext_module_from(&res, other.u_left(), other.u_right(), i).unwrap();
            prop_assert_eq!(tor_dim_from(&res, &star, i).unwrap(), hom_matrices(&ext, &e).unwrap().len());
        }
    }

    #[test]
    fn ext_of_ext_module_matches_dimension(idx in 0usize..16, right: bool, seed: u64, size in 1usize..4) {
        let (_, ctx, _, m) = pick(idx, right, seed, size);
        for i in 0..=2 {
            prop_assert_eq!(ext_u(ctx, &m, i).unwrap().dim(), ext_u_dim(ctx, &m, i).unwrap());
        }
    }

    #[test]
    fn k_dual_is_an_involution(idx in 0usize..16, right: bool, seed: u64, size in 1usize..4) {
        let (_, _, _, m) = pick(idx, right, seed, size);
        let dd = k_dual(&k_dual(&m));
        prop_assert_eq!(dd.dim(), m.dim());
        prop_assert!(!matches!(is_isomorphic(&dd, &m), Ok(false)));
    }

    #[test]
    fn tensor_with_regular_is_identity(idx in 0usize..16, right: bool, seed: u64, size in 1usize..4) {
        let (_, ctx, _, m) = pick(idx, right, seed, size);
        let a = ctx.lambda();
        let t = tensor_over(&regular_module(&opposite(a)), &m, None).unwrap();
        prop_assert_eq!(t.dim, m.dim());
    }

    #[test]
    fn instance_json_round_trip(
        nv in 1usize..5,
        arrows in proptest::collection::vec((0usize..5, 0usize..5), 0..5),
        rels in proptest::collection::vec(proptest::collection::vec(0usize..5, 1..4), 0..3),
        p in prop::sample::select(vec![2u64, 5, 101, 32003]),
        opposite: bool,
    ) {
        let vertices: Vec<String> = (1..=nv).map(|v| v.to_string()).collect();
        let arrows: Vec<ArrowSpec> = arrows
            .iter()
            .enumerate()
            .map(|(i, &(f, t))| ArrowSpec { name: format!("a{i}"), from: vertices[f % nv].clone(), to: vertices[t % nv].clone() })
            .collect();
        let names: Vec<String> = arrows.iter().map(|a| a.name.clone()).collect();
        let relations = if names.is_empty() {
            vec![]
        } else {
            rels.iter().map(|w| w.iter().map(|&i| names[i % names.len()].clone()).collect()).collect()
        };
        let inst = Instance {
            name: Some("random".into()),
            field: FieldSpec { p },
            quiver: QuiverSpec { vertices, arrows },
            relations,
            bimodule: BimoduleSpec::Named("regular".into()),
            opposite,
        };
        prop_assert_eq!(Instance::from_json(&inst.to_json()).unwrap(), inst);
    }
}

#[test]
fn context_invariants() {
    for pair in contexts() {
        for (ctx, other) in [(&pair.left, &pair.right), (&pair.right, &pair.left)] {
            let u = ctx.u_left();
            // the two actions on U commute
            let gamma_actions = ctx.u_right().actions();
            for x in u.actions() {
                for g in gamma_actions {
                    assert_eq!(x.mul(g), g.mul(x), "{}", pair.name);
                }
            }
            // balanced: End_Λ(U) = Γ and End_Γ(U) = Λ
            assert_eq!(hom_matrices(u, u).unwrap().len(), ctx.gamma().dim(), "{}", pair.name);
            assert_eq!(hom_matrices(other.u_left(), other.u_left()).unwrap().len(), ctx.lambda().dim(), "{}", pair.name);
        }
    }
}

#[test]
fn regular_injective_terms_cogenerated_iff_projective() {
    for pair in contexts() {
        for ctx in [&pair.left, &pair.right] {
            let a = ctx.lambda();
            let lam = regular_module(a);
            if !ctx.u_left().same_action(&lam) {
                continue;
            }
            let inj = ctx.injective_resolution(4).unwrap();
            for e in &inj.terms {
                let cog = is_cogenerated_by(e, &lam).unwrap();
                let add = is_in_add(e, &lam).unwrap();
                let proj = projective_dimension(e, 0).unwrap().is_at_most(0);
                assert_eq!((cog, add), (proj, proj), "{}", pair.name);
            }
        }
    }
}
