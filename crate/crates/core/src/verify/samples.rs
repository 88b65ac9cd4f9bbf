//! The sampled part of "for every module" quantifiers.
//!
//! Each side gets simples, indecomposable projectives and injectives, the
//! first terms and cosyzygies of the injective resolution of `U`, seeded
//! random modules, transposes of simples (and of their syzygies) from the
//! other side, and the submodules that the proofs build from a failure of
//! `t(Y) = Ker σ_Y`. Monomorphisms are syzygy inclusions, random cyclic
//! submodules, the inclusions `Ω^{-i}U -> E_i` and the witness inclusions.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::bimodule::BimoduleContext;
use crate::error::Result;
use crate::functors::{dual_data, evaluation_map, transpose_u};
use crate::linalg::Mat;
use crate::module::{
    hom_matrices, indec_injective, indec_projective, simple_module, submodule, submodule_spanned,
    FdModule, ModuleMap,
};
use crate::resolution::min_proj_resolution;

use super::random::{random_module, RandomSuiteSpec};

/// Per-module data shared by several checkers.
#[derive(Clone, Debug)]
pub struct Profile {
    pub sigma: ModuleMap,
    /// Basis of `Ker σ_X` inside `X`.
    pub ker_sigma: Mat,
    /// Basis of `t(X)` inside `X`.
    pub torsion: Mat,
    /// `dim Hom(Ker σ_X, E_0)`.
    pub hom_ker_e0: usize,
    pub dual_dim: usize,
    pub transpose: FdModule,
}

#[derive(Clone, Debug)]
pub struct Sample {
    pub label: String,
    pub seed: Option<u64>,
    pub module: FdModule,
    pub profile: Profile,
}

#[derive(Clone, Debug)]
pub struct Mono {
    pub label: String,
    pub map: ModuleMap,
}

/// `0 -> A -> B -> C -> 0`.
#[derive(Clone, Debug)]
pub struct Ses {
    pub label: String,
    pub mono: ModuleMap,
    pub epi: ModuleMap,
}

#[derive(Clone, Debug, Default)]
pub struct SideSamples {
    pub modules: Vec<Sample>,
    pub monos: Vec<Mono>,
    pub ses: Vec<Ses>,
}

impl SideSamples {
    pub fn random_count(&self) -> usize {
        self.modules.iter().filter(|s| s.seed.is_some()).count()
    }
}

#[derive(Clone, Debug)]
pub struct Samples {
    pub left: SideSamples,
    pub right: SideSamples,
}

pub fn profile(ctx: &BimoduleContext, x: &FdModule) -> Result<Profile> {
    let sigma = evaluation_map(ctx, x)?;
    let ker_sigma = sigma.matrix().kernel_basis();
    let e0 = ctx.e0()?;
    let to_e0 = hom_matrices(x, &e0)?;
    let torsion = Mat::vstack_all(x.p(), x.dim(), &to_e0).kernel_basis();
    let (k, _) = submodule(x, &ker_sigma);
    let hom_ker_e0 = hom_matrices(&k, &e0)?.len();
    let dual_dim = dual_data(ctx, x)?.hom.dim();
    let transpose = transpose_u(ctx, x)?;
    Ok(Profile {
        sigma,
        ker_sigma,
        torsion,
        hom_ker_e0,
        dual_dim,
        transpose,
    })
}

fn stable_hash(s: &str) -> u64 {
    s.bytes()
        .fold(0xcbf2_9ce4_8422_2325u64, |h, b| (h ^ b as u64).wrapping_mul(0x100_0000_01b3))
}

/// Seed of random module `i` on a side of a named context.
pub fn sample_seed(base: u64, context: &str, side: &str, i: usize) -> u64 {
    base ^ stable_hash(context) ^ stable_hash(side).rotate_left(17) ^ (i as u64).wrapping_mul(0x9e37_79b9_7f4a_7c15)
}

/// For `Y` with `Hom(Ker σ_Y, E_0) != 0`: the submodule
/// `α^{-1}(Im α ∩ U)` of `Ker σ_Y` for a nonzero `α : Ker σ_Y -> E_0`,
/// as a submodule of `Y`. Its dual is nonzero while its inclusion into
/// `Y` is killed by `(-)**`.
pub fn torsion_witness(ctx: &BimoduleContext, y: &FdModule, prof: &Profile) -> Result<Option<(FdModule, ModuleMap)>> {
    if prof.hom_ker_e0 == 0 {
        return Ok(None);
    }
    let p = y.p();
    let (k, _) = submodule(y, &prof.ker_sigma);
    let e0 = ctx.e0()?;
    let alpha = hom_matrices(&k, &e0)?.remove(0);
    let f0 = ctx.e0_embedding()?;
    let system = alpha.hstack(&f0.matrix().scale(p - 1));
    let sol = system.kernel_basis();
    let pre = sol.block(0, k.dim(), 0, sol.cols()).column_basis();
    if pre.cols() == 0 {
        return Ok(None);
    }
    Ok(Some(submodule(y, &prof.ker_sigma.mul(&pre))))
}

fn push(ctx: &BimoduleContext, out: &mut SideSamples, label: String, seed: Option<u64>, m: FdModule) -> Result<()> {
    if m.is_zero() {
        return Ok(());
    }
    let profile = profile(ctx, &m)?;
    out.modules.push(Sample {
        label,
        seed,
        module: m,
        profile,
    });
    Ok(())
}

fn push_mono(out: &mut SideSamples, label: String, map: ModuleMap) {
    if map.source().is_zero() {
        return;
    }
    let (_, epi) = map.cokernel();
    out.ses.push(Ses {
        label: label.clone(),
        mono: map.clone(),
        epi,
    });
    out.monos.push(Mono { label, map });
}

/// Builds the samples of the left side of `ctx`; `other` is its swap.
pub fn side_samples(
    ctx: &BimoduleContext,
    other: &BimoduleContext,
    spec: &RandomSuiteSpec,
    context: &str,
    side: &str,
) -> Result<SideSamples> {
    let a = ctx.lambda();
    let nv = a.structure()?.vertex_count();
    let mut out = SideSamples::default();

    for v in 0..nv {
        push(ctx, &mut out, format!("S{}", v + 1), None, simple_module(a, v)?)?;
        push(ctx, &mut out, format!("P{}", v + 1), None, indec_projective(a, v)?)?;
        push(ctx, &mut out, format!("I{}", v + 1), None, indec_injective(a, v)?)?;
    }
    push(ctx, &mut out, "U".into(), None, ctx.u_left().clone())?;
    let inj = ctx.injective_resolution(2)?;
    push_mono(&mut out, "U->E0".into(), inj.augmentation.clone());
    for (i, e) in inj.terms.iter().take(2).enumerate() {
        push(ctx, &mut out, format!("E{i}"), None, e.clone())?;
    }
    for (i, d) in inj.differentials.iter().take(2).enumerate() {
        let (cosyz, incl) = d.image();
        push(ctx, &mut out, format!("cosyz{}", i + 1), None, cosyz)?;
        push_mono(&mut out, format!("cosyz{}->E{}", i + 1, i + 1), incl);
    }

    for i in 0..spec.modules_per_side {
        let seed = sample_seed(spec.seed, context, side, i);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut size = rng.gen_range(1..=spec.max_generators.max(1));
        let m = loop {
            let m = random_module(a, seed, size)?;
            if m.dim() <= spec.dim_cap || size == 1 {
                break m;
            }
            size -= 1;
        };
        if m.is_zero() || m.dim() > spec.dim_cap {
            continue;
        }
        // a random cyclic submodule
        let v: Vec<u32> = (0..m.dim()).map(|_| rng.gen_range(0..a.p())).collect();
        let (sub, incl) = submodule_spanned(&m, &Mat::column_vector(a.p(), &v));
        if !sub.is_zero() && sub.dim() < m.dim() {
            push_mono(&mut out, format!("sub(rand{i})"), incl);
        }
        push(ctx, &mut out, format!("rand{i}"), Some(seed), m)?;
    }

    let ob = other.lambda();
    for w in 0..ob.structure()?.vertex_count() {
        let s = simple_module(ob, w)?;
        push(ctx, &mut out, format!("Tr(S'{})", w + 1), None, transpose_u(other, &s)?)?;
        let res = min_proj_resolution(&s, 1)?;
        let omega = res.syzygies[0].source().clone();
        if !omega.is_zero() {
            push(ctx, &mut out, format!("Tr(ΩS'{})", w + 1), None, transpose_u(other, &omega)?)?;
        }
    }

    // proof witnesses from failures of t(Y) = Ker σ_Y
    let count = out.modules.len();
    for idx in 0..count {
        let (label, y, prof) = {
            let s = &out.modules[idx];
            (s.label.clone(), s.module.clone(), s.profile.clone())
        };
        if let Some((x, incl)) = torsion_witness(ctx, &y, &prof)? {
            let (c, _) = incl.cokernel();
            push(ctx, &mut out, format!("wit({label})"), None, x)?;
            push(ctx, &mut out, format!("Y/wit({label})"), None, c)?;
            push_mono(&mut out, format!("wit({label})->{label}"), incl);
        }
    }

    // syzygy inclusions, and the syzygies themselves
    let count = out.modules.len();
    for idx in 0..count {
        let (label, x) = (out.modules[idx].label.clone(), out.modules[idx].module.clone());
        let res = min_proj_resolution(&x, 1)?;
        let incl = res.syzygies[0].clone();
        if incl.source().is_zero() {
            continue;
        }
        push(ctx, &mut out, format!("Ω({label})"), None, incl.source().clone())?;
        push_mono(&mut out, format!("Ω({label})->P0"), incl);
    }
    Ok(out)
}

pub fn build_samples(
    left: &BimoduleContext,
    right: &BimoduleContext,
    spec: &RandomSuiteSpec,
    context: &str,
) -> Result<Samples> {
    Ok(Samples {
        left: side_samples(left, right, spec, context, "left")?,
        right: side_samples(right, left, spec, context, "right")?,
    })
}
