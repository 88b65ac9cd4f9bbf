//! Functors relative to a bimodule context, always on its left side.
//!
//! For a left `Λ`-module `M`:
//! * `M* = Hom_Λ(M, U)` is a right `Γ`-module, returned over `End(_ΛU)`;
//! * `*E = Hom_Λ(U, E)` is a left `Γ`-module, returned over `Γ`.
//!
//! Apply a functor to a right `Γ`-module by calling it on `ctx.side_swap()`.

use serde::Serialize;

use crate::bimodule::BimoduleContext;
use crate::error::{Error, Result};
use crate::linalg::{Mat, Subspace};
use crate::module::{
    hom_matrices, submodule, FdModule, HomSpace, ModuleMap,
};
use crate::resolution::{
    ext_dim_from, ext_module_from, hom_complex, injective_envelope, min_inj_resolution,
    min_proj_resolution, projective_cover, projective_dimension, weight_sum_module, DimReport,
};

/// `M*` with the hom basis it is written in.
#[derive(Clone, Debug)]
pub struct Dual {
    pub module: FdModule,
    pub hom: HomSpace,
}

pub fn dual_data(ctx: &BimoduleContext, m: &FdModule) -> Result<Dual> {
    let u = ctx.u_left();
    m.check_same(u)?;
    let p = m.p();
    let hom = HomSpace::new(m, u)?;
    let n = hom.dim();
    let action = ctx
        .u_right()
        .actions()
        .iter()
        .map(|phi| {
            let cols: Vec<Vec<u32>> = hom.maps.iter().map(|h| hom.coords(&phi.mul(h))).collect();
            Mat::from_cols(p, n, &cols)
        })
        .collect();
    let module = FdModule::raw(ctx.gamma_op().clone(), n, action);
    Ok(Dual { module, hom })
}

/// `M* = Hom_Λ(M, U)`.
pub fn dual_wrt_u(ctx: &BimoduleContext, m: &FdModule) -> Result<FdModule> {
    Ok(dual_data(ctx, m)?.module)
}

/// `f* : N* -> M*` for `f : M -> N`.
pub fn dual_map(ctx: &BimoduleContext, f: &ModuleMap) -> Result<ModuleMap> {
    let dm = dual_data(ctx, f.source())?;
    let dn = dual_data(ctx, f.target())?;
    let cols: Vec<Vec<u32>> = dn.hom.maps.iter().map(|h| dm.hom.coords(&h.mul(f.matrix()))).collect();
    let matrix = Mat::from_cols(f.source().p(), dm.hom.dim(), &cols);
    Ok(ModuleMap::raw(dn.module, dm.module, matrix))
}

/// `f** : M** -> N**`.
pub fn double_dual_map(ctx: &BimoduleContext, f: &ModuleMap) -> Result<ModuleMap> {
    dual_map(&ctx.side_swap(), &dual_map(ctx, f)?)
}

/// `σ_M : M -> M**`, `x -> (f -> f(x))`.
pub fn evaluation_map(ctx: &BimoduleContext, m: &FdModule) -> Result<ModuleMap> {
    let p = m.p();
    let d = dual_data(ctx, m)?;
    let dd = dual_data(&ctx.side_swap(), &d.module)?;
    let u = ctx.u_left().dim();
    let cols: Vec<Vec<u32>> = (0..m.dim())
        .map(|i| {
            let x = Mat::column_vector(p, &m_basis(m.dim(), i));
            let images: Vec<Vec<u32>> = d.hom.maps.iter().map(|h| h.mul(&x).col(0)).collect();
            dd.hom.coords(&Mat::from_cols(p, u, &images))
        })
        .collect();
    let matrix = Mat::from_cols(p, dd.hom.dim(), &cols);
    Ok(ModuleMap::raw(m.clone(), dd.module, matrix))
}

fn m_basis(n: usize, i: usize) -> Vec<u32> {
    let mut v = vec![0; n];
    v[i] = 1;
    v
}

/// `Ext^i_Λ(M, U)` as a right `Γ`-module.
pub fn ext_u(ctx: &BimoduleContext, m: &FdModule, i: usize) -> Result<FdModule> {
    let res = min_proj_resolution(m, i + 1)?;
    ext_module_from(&res, ctx.u_left(), ctx.u_right(), i)
}

pub fn ext_u_dim(ctx: &BimoduleContext, m: &FdModule, i: usize) -> Result<usize> {
    let res = min_proj_resolution(m, i + 1)?;
    ext_dim_from(&res, ctx.u_left(), i)
}

/// `Tr_U M = Coker(P_0* -> P_1*)` for the minimal presentation of `M`.
pub fn transpose_u(ctx: &BimoduleContext, m: &FdModule) -> Result<FdModule> {
    let res = min_proj_resolution(m, 1)?;
    if res.terms.len() < 2 {
        return Ok(FdModule::zero(ctx.gamma_op()));
    }
    let (_, maps) = hom_complex(&res, ctx.u_left())?;
    let c1 = weight_sum_module(ctx.u_left(), ctx.u_right(), &res.vertices[1])?;
    let img = maps[0].column_basis();
    Ok(crate::module::quotient(&c1, &img).0)
}

/// `t(X)`: the intersection of the kernels of all maps `X -> E_0`.
pub fn torsion_submodule(ctx: &BimoduleContext, x: &FdModule) -> Result<(FdModule, ModuleMap)> {
    let e0 = ctx.e0()?;
    let maps = hom_matrices(x, &e0)?;
    let stacked = Mat::vstack_all(x.p(), x.dim(), &maps);
    Ok(submodule(x, &stacked.kernel_basis()))
}

/// Whether `m` embeds in a finite power of `c`.
pub fn is_cogenerated_by(m: &FdModule, c: &FdModule) -> Result<bool> {
    let maps = hom_matrices(m, c)?;
    Ok(Mat::vstack_all(m.p(), m.dim(), &maps).rank() == m.dim())
}

/// Whether `m` is a direct summand of some `u^N`: `id_m ∈ span{f ∘ g}`
/// with `g : m -> u`, `f : u -> m`.
pub fn is_in_add(m: &FdModule, u: &FdModule) -> Result<bool> {
    if m.is_zero() {
        return Ok(true);
    }
    let p = m.p();
    let into = hom_matrices(m, u)?;
    let back = hom_matrices(u, m)?;
    let mut span = Vec::new();
    for f in &back {
        for g in &into {
            span.push(f.mul(g).flatten());
        }
    }
    let space = Subspace::spanned_by(&Mat::from_cols(p, m.dim() * m.dim(), &span));
    let id = Mat::identity(p, m.dim()).flatten();
    Ok(space.contains(&Mat::column_vector(p, &id)))
}

/// `*E = Hom_Λ(U, E)` as a left `Γ`-module (`γ f = f ∘ (- · γ)`).
pub fn star_into(ctx: &BimoduleContext, e: &FdModule) -> Result<FdModule> {
    Ok(star_data(ctx, e)?.0)
}

fn star_data(ctx: &BimoduleContext, e: &FdModule) -> Result<(FdModule, HomSpace)> {
    let u = ctx.u_left();
    u.check_same(e)?;
    let p = e.p();
    let hom = HomSpace::new(u, e)?;
    let n = hom.dim();
    let action = ctx
        .u_right()
        .actions()
        .iter()
        .map(|phi| {
            let cols: Vec<Vec<u32>> = hom.maps.iter().map(|h| hom.coords(&h.mul(phi))).collect();
            Mat::from_cols(p, n, &cols)
        })
        .collect();
    Ok((FdModule::raw(ctx.gamma().clone(), n, action), hom))
}

/// Least `i <= bound` with `Ext^i(M, U) != 0`.
pub fn grade_u(ctx: &BimoduleContext, m: &FdModule, bound: usize) -> Result<DimReport> {
    let res = min_proj_resolution(m, bound + 1)?;
    let (dims, maps) = hom_complex(&res, ctx.u_left())?;
    for i in 0..=bound {
        let ci = dims.get(i).copied().unwrap_or(0);
        let ker = ci - maps.get(i).map_or(0, Mat::rank);
        let img = if i == 0 { 0 } else { maps.get(i - 1).map_or(0, Mat::rank) };
        if ker != img {
            return Ok(DimReport::exact(i, bound));
        }
    }
    Ok(DimReport::at_least(bound + 1, bound))
}

/// Number of initial terms of the minimal injective resolution of `m`
/// cogenerated by `U`; `>= d_max` when all of the first `d_max` are.
pub fn u_dominant_dimension(ctx: &BimoduleContext, m: &FdModule, d_max: usize) -> Result<DimReport> {
    let res = if m.same_action(ctx.u_left()) {
        ctx.injective_resolution(d_max)?
    } else {
        min_inj_resolution(m, d_max)?
    };
    for (i, e) in res.terms.iter().take(d_max).enumerate() {
        if !is_cogenerated_by(e, ctx.u_left())? {
            return Ok(DimReport::exact(i, d_max));
        }
    }
    Ok(DimReport::at_least(d_max, d_max))
}

/// An `add U` coresolution `0 -> U_n -> ... -> U_0 -> E -> 0` obtained as
/// `U ⊗_Γ Q_•` for the minimal projective resolution `Q_•` of `*E`.
#[derive(Clone, Debug, Serialize)]
pub struct Coresolution {
    pub term_dims: Vec<usize>,
    pub length: usize,
    pub exact: bool,
    pub in_add_u: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct UResolution {
    pub dim: DimReport,
    pub certificate: Option<Coresolution>,
}

/// Largest `pd(*E)` for which the coresolution certificate is built.
pub const CERTIFICATE_LIMIT: usize = 2;

/// `U-resol.dim(E) = pd_Γ(*E)` for an injective `E`.
pub fn u_resolution_dimension(ctx: &BimoduleContext, e: &FdModule, bound: usize) -> Result<UResolution> {
    let (env, _) = injective_envelope(e)?;
    if env.target().dim() != e.dim() {
        return Err(Error::NotInjective {
            dim: e.dim(),
            envelope_dim: env.target().dim(),
        });
    }
    let (star, hom) = star_data(ctx, e)?;
    let dim = projective_dimension(&star, bound)?;
    let certificate = if dim.is_at_most(CERTIFICATE_LIMIT) {
        Some(coresolution(ctx, e, &star, &hom)?)
    } else {
        None
    };
    Ok(UResolution { dim, certificate })
}

fn coresolution(ctx: &BimoduleContext, e: &FdModule, star: &FdModule, hom: &HomSpace) -> Result<Coresolution> {
    let p = e.p();
    let u = ctx.u_left();
    let phi = ctx.u_right();
    let gamma = ctx.gamma();
    let s = gamma.structure()?;
    let res = min_proj_resolution(star, CERTIFICATE_LIMIT + 1)?;

    // U e_v as a subspace of U
    let blocks: Vec<Subspace> = (0..s.vertex_count())
        .map(|v| Subspace::new(phi.act(s.idempotent(v)).column_basis()))
        .collect();
    let term_dim = |vs: &[usize]| vs.iter().map(|&v| blocks[v].dim()).sum::<usize>();
    let term_dims: Vec<usize> = res.vertices.iter().map(|vs| term_dim(vs)).collect();

    // U_{k+1} -> U_k, block (j, i) = (- · a_ij) : U e_{s_i} -> U e_{t_j}
    let mut maps = Vec::new();
    for (k, f) in res.presentation.iter().enumerate() {
        let mut d = Mat::zeros(p, term_dims[k], term_dims[k + 1]);
        let mut c0 = 0;
        for (i, &sv) in f.source.iter().enumerate() {
            let mut r0 = 0;
            for (j, &tv) in f.target.iter().enumerate() {
                let img = phi.act(&f.entries[i][j]).mul(blocks[sv].basis());
                d.set_block(r0, c0, &blocks[tv].coords(&img));
                r0 += blocks[tv].dim();
            }
            c0 += blocks[sv].dim();
        }
        maps.push(d);
    }
    // U_0 -> E: restrict the cover generators to U e_v
    let cover = projective_cover(star)?;
    let aug_blocks: Vec<Mat> = cover
        .vertices
        .iter()
        .enumerate()
        .map(|(j, &v)| {
            let coeffs = cover.generators.col(j);
            let mut g = Mat::zeros(p, e.dim(), u.dim());
            for (c, h) in coeffs.iter().zip(&hom.maps) {
                g.add_scaled(*c, h);
            }
            g.mul(blocks[v].basis())
        })
        .collect();
    let aug = Mat::hstack_all(p, e.dim(), &aug_blocks);

    let mut exact = aug.rank() == e.dim();
    let mut prev = aug;
    for d in &maps {
        exact &= prev.mul(d).is_zero() && prev.cols() - prev.rank() == d.rank();
        prev = d.clone();
    }
    exact &= res.complete && prev.rank() == prev.cols();

    // each term is a sum of U e_v, a summand of U; check the first one directly
    let in_add_u = match res.vertices.first() {
        Some(vs) if !vs.is_empty() => {
            let (m, _) = submodule(u, blocks[vs[0]].basis());
            is_in_add(&m, u)?
        }
        _ => true,
    };
    Ok(Coresolution {
        length: term_dims.len().saturating_sub(1),
        term_dims,
        exact,
        in_add_u,
    })
}

/// `m` cogenerates its injective envelope.
pub fn is_qf3(m: &FdModule) -> Result<bool> {
    let (env, _) = injective_envelope(m)?;
    is_cogenerated_by(env.target(), m)
}
