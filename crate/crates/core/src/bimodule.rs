//! The bimodule context `(Λ, Γ, U)` with `Γ = End(_ΛU)^op`.
//!
//! Both actions on `U` are stored as left actions on the same space:
//! `u_left` over `Λ` and `u_right` over `Γ^op = End(_ΛU)` (composition of
//! endomorphisms). Every functor in [`crate::functors`] works on the left
//! side of a context; the right side is reached through [`BimoduleContext::side_swap`].

use std::sync::{Arc, Mutex};

use serde::Serialize;

use crate::algebra::{discover_structure, opposite, with_structure, Algebra, Structure};
use crate::error::{Error, Result};
use crate::linalg::Mat;
use crate::module::{hom_matrices, regular_module, FdModule, HomSpace};
use crate::resolution::{ext_dim_from, min_inj_resolution, min_proj_resolution, Resolution};

pub const DEFAULT_EXT_BOUND: usize = 4;
const DISCOVERY_SEED: u64 = 0x5eed_0001;

/// Outcome of checking the defining conditions of the context.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Validation {
    pub commuting: bool,
    /// `Γ -> End(_ΛU)^op` is bijective.
    pub balanced_left: bool,
    /// `Λ -> End(U_Γ)` is bijective.
    pub balanced_right: bool,
    /// `Ext^i(U, U) = 0` on both sides for `1 <= i <= selforthogonal_verified_up_to`.
    pub selforthogonal_verified_up_to: usize,
    /// Selforthogonality holds for all `i` on the left side (finite resolution).
    pub exact_left: bool,
    pub exact_right: bool,
    pub exact: bool,
    /// How the radical of `End(_ΛU)` was obtained.
    pub gamma_structure: String,
}

#[derive(Default)]
struct SideCache {
    injective: Mutex<Option<Resolution>>,
}

/// See the module documentation.
#[derive(Clone)]
pub struct BimoduleContext {
    lambda: Arc<Algebra>,
    lambda_op: Arc<Algebra>,
    gamma_op: Arc<Algebra>,
    gamma: Arc<Algebra>,
    u_left: FdModule,
    u_right: FdModule,
    validation: Validation,
    ext_bound: usize,
    left_cache: Arc<SideCache>,
    right_cache: Arc<SideCache>,
    swapped: bool,
}

impl std::fmt::Debug for BimoduleContext {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("BimoduleContext")
            .field("lambda", &self.lambda.name())
            .field("gamma", &self.gamma.name())
            .field("dim_u", &self.u_left.dim())
            .field("swapped", &self.swapped)
            .finish()
    }
}

/// Builds and validates the context for a left `Λ`-module `u`.
pub fn build_context(lambda: &Arc<Algebra>, u: &FdModule, ext_bound: usize) -> Result<BimoduleContext> {
    if u.is_zero() {
        return Err(Error::InvalidModule("the bimodule must be nonzero".into()));
    }
    if !Algebra::same(u.algebra(), lambda) {
        return Err(Error::AlgebraMismatch);
    }
    lambda.structure()?;
    let p = lambda.p();
    let maps = hom_matrices(u, u)?;
    let raw = Algebra::from_endomorphisms(&format!("End({})", lambda.name()), &maps);

    // Γ -> End(_ΛU)^op is the identity on the Hom basis; certify by rank.
    let flat = Mat::from_cols(p, u.dim() * u.dim(), &maps.iter().map(Mat::flatten).collect::<Vec<_>>());
    let balanced_left = flat.rank() == maps.len();

    let is_regular = u.same_action(&regular_module(lambda));
    let (structure, how) = if is_regular {
        (Some(transport_regular(lambda, &maps)), "transported from Λ".to_string())
    } else {
        match discover_structure(&raw, &[&maps], DISCOVERY_SEED) {
            Ok(s) => (Some(s), "trace-form radical".to_string()),
            Err(e) => (None, e.to_string()),
        }
    };

        let gamma_op = Arc::new(match &structure {
        Some(s) => with_structure(raw, s.clone()),
        None => raw,
    });
    // Λ -> End(U_Γ): compare the rank of the Λ-action with dim End(U_Γ)
    let u_right = FdModule::raw(gamma_op.clone(), u.dim(), maps.clone());
    let end_right = hom_matrices(&u_right, &u_right)?.len();
    let lam_flat = Mat::from_cols(
        p,
        u.dim() * u.dim(),
        &u.actions().iter().map(Mat::flatten).collect::<Vec<_>>(),
    );
    let rank = lam_flat.rank();
    let balanced_right = rank == lambda.dim() && end_right == rank;
    if !balanced_right {
        return Err(Error::NotBalanced {
            side: "right (Λ -> End(U_Γ))".into(),
            kernel_dim: lambda.dim() - rank,
            cokernel_dim: end_right - rank,
        });
    }
    if !balanced_left {
        return Err(Error::NotBalanced {
            side: "left (Γ -> End(_ΛU)^op)".into(),
            kernel_dim: maps.len() - flat.rank(),
            cokernel_dim: 0,
        });
    }
    if structure.is_none() {
        return Err(Error::NotBasic(format!("{}: {how}", gamma_op.name())));
    }

    let commuting = u
        .actions()
        .iter()
        .all(|a| maps.iter().all(|f| a.mul(f) == f.mul(a)));
    if !commuting {
        return Err(Error::ActionsDoNotCommute);
    }

    let (exact_left, _) = selforthogonal(u, ext_bound, "left")?;
    let (exact_right, _) = selforthogonal(&u_right, ext_bound, "right")?;

    let gamma = opposite(&gamma_op);
    let lambda_op = opposite(lambda);
    Ok(BimoduleContext {
        lambda: lambda.clone(),
        lambda_op,
        gamma_op,
        gamma,
        u_left: u.clone(),
        u_right,
        validation: Validation {
            commuting,
            balanced_left,
            balanced_right,
            selforthogonal_verified_up_to: ext_bound,
            exact_left,
            exact_right,
            exact: exact_left && exact_right,
            gamma_structure: how,
        },
        ext_bound,
        left_cache: Arc::default(),
        right_cache: Arc::default(),
        swapped: false,
    })
}

/// Checks `Ext^i(U, U) = 0` for `1 <= i <= bound`; returns whether the
/// projective resolution of `U` ended within the bound (so the check is
/// exact for all `i`).
fn selforthogonal(u: &FdModule, bound: usize, side: &str) -> Result<(bool, Resolution)> {
    let res = min_proj_resolution(u, bound + 1)?;
    for i in 1..=bound {
        let d = ext_dim_from(&res, u, i)?;
        if d != 0 {
            return Err(Error::NotSelforthogonal {
                degree: i,
                side: side.into(),
                dim: d,
            });
        }
    }
    let exact = res.length().is_some_and(|l| l <= bound);
    Ok((exact, res))
}

/// For `U = Λ`: `End(_ΛΛ) = {x -> x λ}`, and `λ -> R_λ` is an
/// anti-isomorphism `Λ -> End(_ΛΛ)` carrying the quiver structure across.
fn transport_regular(lambda: &Algebra, maps: &[Mat]) -> Structure {
    let p = lambda.p();
    let n = lambda.dim();
    let hom = HomSpace::from_maps(p, n * n, maps.to_vec());
    lambda
        .structure()
        .expect("checked")
        .transport(|x| hom.coords(&lambda.right_mult_by(x)), true)
}

impl BimoduleContext {
    /// The algebra acting on the left of `U` on this side (`Λ`).
    pub fn lambda(&self) -> &Arc<Algebra> {
        &self.lambda
    }

    pub fn lambda_op(&self) -> &Arc<Algebra> {
        &self.lambda_op
    }

    /// `Γ = End(_ΛU)^op`.
    pub fn gamma(&self) -> &Arc<Algebra> {
        &self.gamma
    }

    /// `Γ^op = End(_ΛU)`: right `Γ`-modules are left modules over it.
    pub fn gamma_op(&self) -> &Arc<Algebra> {
        &self.gamma_op
    }

    pub fn u_left(&self) -> &FdModule {
        &self.u_left
    }

    pub fn u_right(&self) -> &FdModule {
        &self.u_right
    }

    pub fn validation(&self) -> &Validation {
        &self.validation
    }

    pub fn ext_bound(&self) -> usize {
        self.ext_bound
    }

    pub fn is_swapped(&self) -> bool {
        self.swapped
    }

    /// The mirrored context over `(Γ^op, Λ^op)` with `u_right` on the left.
    pub fn side_swap(&self) -> BimoduleContext {
        let v = &self.validation;
        BimoduleContext {
            lambda: self.gamma_op.clone(),
            lambda_op: self.gamma.clone(),
            gamma_op: self.lambda.clone(),
            gamma: self.lambda_op.clone(),
            u_left: self.u_right.clone(),
            u_right: self.u_left.clone(),
            validation: Validation {
                balanced_left: v.balanced_right,
                balanced_right: v.balanced_left,
                exact_left: v.exact_right,
                exact_right: v.exact_left,
                ..v.clone()
            },
            ext_bound: self.ext_bound,
            left_cache: self.right_cache.clone(),
            right_cache: self.left_cache.clone(),
            swapped: !self.swapped,
        }
    }

    /// Minimal injective resolution of `_ΛU` with at least `n + 1` terms
    /// (or complete), cached per side.
    pub fn injective_resolution(&self, n: usize) -> Result<Resolution> {
        let mut slot = self.left_cache.injective.lock().expect("cache lock");
        if let Some(r) = slot.as_ref() {
            if r.complete || r.terms.len() > n {
                return Ok(r.clone());
            }
        }
        let r = min_inj_resolution(&self.u_left, n)?;
        *slot = Some(r.clone());
        Ok(r)
    }

    /// `E_0`, the injective envelope of `_ΛU`.
    pub fn e0(&self) -> Result<FdModule> {
        Ok(self.injective_resolution(0)?.terms[0].clone())
    }

    /// `f_0 : U -> E_0`.
    pub fn e0_embedding(&self) -> Result<crate::module::ModuleMap> {
        Ok(self.injective_resolution(0)?.augmentation)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::module::{direct_sum, indec_projective};
    use crate::quiver::{build_path_algebra, PathWord, Quiver};

    fn l1() -> Arc<Algebra> {
        let q = Quiver::new(
            &["1", "2", "3"],
            &[("alpha", "1", "2"), ("beta", "2", "1"), ("gamma", "2", "3")],
        )
        .unwrap();
        let r = PathWord::from_composition(&q, &["alpha", "beta", "alpha"]).unwrap();
        build_path_algebra("L1", 101, &q, &[r], 32).unwrap()
    }

    #[test]
    fn regular_context() {
        let a = l1();
        let ctx = build_context(&a, &regular_module(&a), 4).unwrap();
        assert_eq!(ctx.gamma().dim(), 11);
        let v = ctx.validation();
        assert!(v.balanced_left && v.balanced_right && v.exact_left && v.exact_right);
        assert!(ctx.gamma_op().check_associative());
        let s = ctx.gamma_op().structure().unwrap();
        assert_eq!(s.vertex_count(), 3);
        assert_eq!(s.arrows().len(), 3);
        for e in s.idempotents() {
            assert_eq!(ctx.gamma_op().mul(e, e), *e);
        }
    }

    #[test]
    fn swap_is_involutive() {
        let a = l1();
        let ctx = build_context(&a, &regular_module(&a), 2).unwrap();
        let back = ctx.side_swap().side_swap();
        assert!(Arc::ptr_eq(back.lambda(), ctx.lambda()));
        assert!(Arc::ptr_eq(back.gamma(), ctx.gamma()));
        assert_eq!(back.validation(), ctx.validation());
        let sw = ctx.side_swap();
        assert_eq!(sw.e0().unwrap().dim(), ctx.side_swap().e0().unwrap().dim());
        assert!(Arc::ptr_eq(sw.gamma_op(), ctx.lambda()));
    }

    #[test]
    fn unfaithful_module_is_not_balanced() {
        let a = l1();
        let p1 = indec_projective(&a, 0).unwrap();
        let u = direct_sum(&a, &[p1.clone(), p1]).unwrap();
        assert!(matches!(build_context(&a, &u, 2), Err(Error::NotBalanced { .. })));
    }
}
