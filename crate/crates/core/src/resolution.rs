//! Projective covers, injective envelopes, minimal resolutions, Ext and Tor.
//!
//! Injective data is obtained by duality: `E(M) = D P(DM)` over the
//! opposite algebra, so every injective resolution is the dual of a
//! projective one.

use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::algebra::Algebra;
use crate::error::Result;
use crate::linalg::{Mat, Subspace};
use crate::module::{
    direct_sum, indec_projective, k_dual, quotient, radical, submodule, FdModule, ModuleMap,
};

/// A dimension, or a lower bound when the computation stopped at a bound.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DimReport {
    pub value: usize,
    pub at_least: bool,
    pub bound: usize,
}

impl DimReport {
    pub fn exact(value: usize, bound: usize) -> Self {
        DimReport {
            value,
            at_least: false,
            bound,
        }
    }

    pub fn at_least(value: usize, bound: usize) -> Self {
        DimReport {
            value,
            at_least: true,
            bound,
        }
    }

    /// Whether the true value is known to be `<= n`.
    pub fn is_at_most(&self, n: usize) -> bool {
        !self.at_least && self.value <= n
    }

    /// Whether the true value is known to be `>= n`.
    pub fn is_at_least(&self, n: usize) -> bool {
        self.value >= n
    }
}

impl fmt::Display for DimReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.at_least {
            write!(f, ">= {}", self.value)
        } else {
            write!(f, "{}", self.value)
        }
    }
}

/// A map between sums of indecomposable projectives `⊕ A e_v`.
///
/// Generator `i` of the source is sent to `Σ_j entries[i][j] g_j`, with
/// `entries[i][j] ∈ e_{source[i]} A e_{target[j]}`.
#[derive(Clone, Debug)]
pub struct ProjMap {
    pub source: Vec<usize>,
    pub target: Vec<usize>,
    pub entries: Vec<Vec<Vec<u32>>>,
}

/// A projective cover `P(M) -> M`.
#[derive(Clone, Debug)]
pub struct Cover {
    pub vertices: Vec<usize>,
    /// Images of the generators `e_{v_j}`, as columns in `M`.
    pub generators: Mat,
    pub map: ModuleMap,
}

/// `⊕_j P_{v_j}`.
pub fn projective_sum(a: &Arc<Algebra>, vertices: &[usize]) -> Result<FdModule> {
    let parts = vertices
        .iter()
        .map(|&v| indec_projective(a, v))
        .collect::<Result<Vec<_>>>()?;
    direct_sum(a, &parts)
}

/// Minimal projective cover.
pub fn projective_cover(m: &FdModule) -> Result<Cover> {
    let a = m.algebra().clone();
    let p = a.p();
    let (_, rad) = radical(m)?;
    let w = m.weights_or_err()?;
    let r = rad.matrix();
    let (_, pivots) = r.hstack(w.change()).rref();
    let mut vertices = Vec::new();
    let mut gens = Vec::new();
    for c in pivots.into_iter().filter(|&c| c >= r.cols()) {
        let idx = c - r.cols();
        let v = (0..w.dims().len())
            .rev()
            .find(|&v| w.offset(v) <= idx)
            .expect("offset exists");
        vertices.push(v);
        gens.push(w.change().col(idx));
    }
    let generators = Mat::from_cols(p, m.dim(), &gens);
    let cover_module = projective_sum(&a, &vertices)?;
    let data = a.projective_data()?;
    let mut blocks = Vec::with_capacity(vertices.len());
    for (j, &v) in vertices.iter().enumerate() {
        let g = &gens[j];
        // column i: b_i g
        let images = Mat::from_cols(
            p,
            m.dim(),
            &m.actions().iter().map(|act| act.mul_vec(g)).collect::<Vec<_>>(),
        );
        blocks.push(images.mul(data[v].elements.basis()));
    }
    let matrix = Mat::hstack_all(p, m.dim(), &blocks);
    Ok(Cover {
        vertices,
        generators,
        map: ModuleMap::raw(cover_module, m.clone(), matrix),
    })
}

/// Splits vectors of `⊕_j P_{v_j}` into algebra elements, one per summand.
fn components(a: &Algebra, vertices: &[usize], v: &[u32]) -> Result<Vec<Vec<u32>>> {
    let data = a.projective_data()?;
    let mut off = 0;
    let mut out = Vec::with_capacity(vertices.len());
    for &t in vertices {
        let sp = &data[t].elements;
        out.push(sp.basis().mul_vec(&v[off..off + sp.dim()]));
        off += sp.dim();
    }
    Ok(out)
}

/// The `ModuleMap` realising a `ProjMap`.
pub fn realize(a: &Arc<Algebra>, f: &ProjMap) -> Result<ModuleMap> {
    let p = a.p();
    let src = projective_sum(a, &f.source)?;
    let tgt = projective_sum(a, &f.target)?;
    let data = a.projective_data()?;
    let mut tgt_off = vec![0usize];
    for &t in &f.target {
        tgt_off.push(tgt_off.last().unwrap() + data[t].elements.dim());
    }
    let mut cols = Vec::with_capacity(src.dim());
    for (i, &s) in f.source.iter().enumerate() {
        let basis = data[s].elements.basis();
        for c in 0..basis.cols() {
            let x = basis.col(c);
            let mut col = vec![0u32; tgt.dim()];
            for (j, &t) in f.target.iter().enumerate() {
                let y = a.mul(&x, &f.entries[i][j]);
                let coords = data[t].elements.coords_vec(&y);
                col[tgt_off[j]..tgt_off[j + 1]].copy_from_slice(&coords);
            }
            cols.push(col);
        }
    }
    Ok(ModuleMap::raw(src, tgt.clone(), Mat::from_cols(p, tgt.dim(), &cols)))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum ResolutionKind {
    Projective,
    Injective,
}

/// Initial segment of a minimal resolution.
///
/// Projective: `terms[k] = P_k`, `differentials[k] : P_{k+1} -> P_k`,
/// `augmentation : P_0 -> M`, `syzygies[k] = Ω^{k+1} M ⊆ P_k`.
///
/// Injective: `terms[k] = E_k`, `differentials[k] : E_k -> E_{k+1}`,
/// `augmentation : M -> E_0`, `syzygies[k] : E_k -> Ω^{-(k+1)} M`.
#[derive(Clone, Debug)]
pub struct Resolution {
    pub kind: ResolutionKind,
    pub base: FdModule,
    pub terms: Vec<FdModule>,
    pub vertices: Vec<Vec<usize>>,
    pub differentials: Vec<ModuleMap>,
    pub augmentation: ModuleMap,
    /// Projective kind: `presentation[k]` presents `differentials[k]`.
    /// Injective kind: the presentation of the dual projective resolution.
    pub presentation: Vec<ProjMap>,
    /// Projective: inclusions `Ω^{k+1} M -> P_k`.
    /// Injective: projections `E_k -> Ω^{-(k+1)} M`.
    pub syzygies: Vec<ModuleMap>,
    pub minimal: bool,
    pub length_computed: usize,
    /// The last syzygy is zero, so the resolution is complete.
    pub complete: bool,
}

impl Resolution {
    /// Length of the resolution when complete.
    pub fn length(&self) -> Option<usize> {
        self.complete.then(|| self.terms.len().saturating_sub(1))
    }

    /// Term `k`, or zero past the computed end of a complete resolution.
    pub fn term(&self, k: usize) -> Option<&FdModule> {
        self.terms.get(k)
    }

    /// Checks composition and exactness at every computed degree.
    pub fn is_exact(&self) -> bool {
        match self.kind {
            ResolutionKind::Projective => {
                if !self.augmentation.is_surjective() {
                    return false;
                }
                let seq: Vec<&ModuleMap> = std::iter::once(&self.augmentation).chain(&self.differentials).collect();
                for pair in seq.windows(2) {
                    let (f, g) = (pair[0], pair[1]);
                    if !f.matrix().mul(g.matrix()).is_zero() || f.source().dim() - f.rank() != g.rank() {
                        return false;
                    }
                }
                let last = seq[seq.len() - 1];
                !self.complete || last.is_injective()
            }
            ResolutionKind::Injective => {
                if !self.augmentation.is_injective() {
                    return false;
                }
                let mut prev = self.augmentation.clone();
                for d in &self.differentials {
                    if !d.matrix().mul(prev.matrix()).is_zero() {
                        return false;
                    }
                    if d.source().dim() - d.rank() != prev.rank() {
                        return false;
                    }
                    prev = d.clone();
                }
                if self.complete && prev.rank() != prev.target().dim() {
                    return false;
                }
                true
            }
        }
    }

    /// Minimality: cover kernels lie in the radical, or envelopes are
    /// essential (socle of each term inside the image).
    pub fn is_minimal(&self) -> Result<bool> {
        match self.kind {
            ResolutionKind::Projective => {
                for (k, term) in self.terms.iter().enumerate() {
                    let map = if k == 0 { &self.augmentation } else { &self.differentials[k - 1] };
                    let ker = map.matrix().kernel_basis();
                    let (_, rad) = radical(term)?;
                    let r = rad.matrix();
                    if r.hstack(&ker).rank() != r.cols() {
                        return Ok(false);
                    }
                }
                Ok(true)
            }
            ResolutionKind::Injective => {
                for (k, term) in self.terms.iter().enumerate() {
                    let map = if k == 0 { &self.augmentation } else { &self.differentials[k - 1] };
                    let (_, soc) = crate::module::socle(term)?;
                    let img = map.matrix().column_basis();
                    let both = img.hstack(soc.matrix());
                    if both.rank() != img.cols() {
                        return Ok(false);
                    }
                }
                Ok(true)
            }
        }
    }
}

/// Minimal projective resolution with terms `P_0, ..., P_n` (fewer when it
/// ends earlier).
pub fn min_proj_resolution(m: &FdModule, n: usize) -> Result<Resolution> {
    let a = m.algebra().clone();
    let cover = projective_cover(m)?;
    let mut terms = vec![cover.map.source().clone()];
    let mut vertices = vec![cover.vertices.clone()];
    let augmentation = cover.map.clone();
    let mut differentials = Vec::new();
    let mut presentation = Vec::new();
    let (mut syz, mut incl) = augmentation.kernel();
    let mut syzygies = vec![incl.clone()];
    let mut complete = syz.is_zero();
    let mut k = 1;
    while k <= n && !complete {
        let c = projective_cover(&syz)?;
        let d = incl.compose(&c.map);
        // generators of the cover, seen in P_{k-1}
        let in_prev = incl.matrix().mul(&c.generators);
        let prev_vertices = vertices.last().unwrap().clone();
        let entries = (0..in_prev.cols())
            .map(|i| components(&a, &prev_vertices, &in_prev.col(i)))
            .collect::<Result<Vec<_>>>()?;
        presentation.push(ProjMap {
            source: c.vertices.clone(),
            target: prev_vertices,
            entries,
        });
        let (next, next_incl) = c.map.kernel();
        let d = ModuleMap::raw(c.map.source().clone(), terms.last().unwrap().clone(), d.matrix().clone());
        terms.push(c.map.source().clone());
        vertices.push(c.vertices);
        differentials.push(d);
        syz = next;
        incl = next_incl;
        syzygies.push(incl.clone());
        complete = syz.is_zero();
        k += 1;
    }
    Ok(Resolution {
        kind: ResolutionKind::Projective,
        base: m.clone(),
        length_computed: terms.len(),
        terms,
        vertices,
        differentials,
        augmentation,
        presentation,
        syzygies,
        minimal: true,
        complete,
    })
}

/// Minimal injective envelope `M -> E(M)`.
pub fn injective_envelope(m: &FdModule) -> Result<(ModuleMap, Vec<usize>)> {
    let cover = projective_cover(&k_dual(m))?;
    let e = k_dual(cover.map.source());
    Ok((ModuleMap::raw(m.clone(), e, cover.map.matrix().transpose()), cover.vertices))
}

/// Minimal injective resolution with terms `E_0, ..., E_n`.
pub fn min_inj_resolution(m: &FdModule, n: usize) -> Result<Resolution> {
    let dual = min_proj_resolution(&k_dual(m), n)?;
    let terms: Vec<FdModule> = dual.terms.iter().map(k_dual).collect();
    let augmentation = ModuleMap::raw(m.clone(), terms[0].clone(), dual.augmentation.matrix().transpose());
    let differentials = dual
        .differentials
        .iter()
        .enumerate()
        .map(|(k, d)| ModuleMap::raw(terms[k].clone(), terms[k + 1].clone(), d.matrix().transpose()))
        .collect();
    let syzygies = dual
        .syzygies
        .iter()
        .enumerate()
        .map(|(k, s)| ModuleMap::raw(terms[k].clone(), k_dual(s.source()), s.matrix().transpose()))
        .collect();
    Ok(Resolution {
        kind: ResolutionKind::Injective,
        base: m.clone(),
        length_computed: terms.len(),
        terms,
        vertices: dual.vertices,
        differentials,
        augmentation,
        presentation: dual.presentation,
        syzygies,
        minimal: true,
        complete: dual.complete,
    })
}

/// Projective dimension, exact when the minimal resolution ends within
/// `bound` steps.
pub fn projective_dimension(m: &FdModule, bound: usize) -> Result<DimReport> {
    let r = min_proj_resolution(m, bound)?;
    Ok(match r.length() {
        Some(l) => DimReport::exact(l, bound),
        None => DimReport::at_least(bound + 1, bound),
    })
}

/// Differentials of `Hom(P_•, N)` in weight coordinates:
/// `C^k = ⊕_j e_{v_j} N` and `result[k] : C^k -> C^{k+1}`.
pub fn hom_complex(res: &Resolution, n: &FdModule) -> Result<(Vec<usize>, Vec<Mat>)> {
    let p = n.p();
    let w = n.weights_or_err()?;
    let dims: Vec<usize> = res
        .vertices
        .iter()
        .map(|vs| vs.iter().map(|&v| w.dim(v)).sum())
        .collect();
    let mut maps = Vec::new();
    for (k, f) in res.presentation.iter().enumerate() {
        let mut d = Mat::zeros(p, dims[k + 1], dims[k]);
        let mut r0 = 0;
        for (i, &s) in f.source.iter().enumerate() {
            let mut c0 = 0;
            for (j, &t) in f.target.iter().enumerate() {
                let block = n.weight_block(&f.entries[i][j], t, s)?;
                d.set_block(r0, c0, &block);
                c0 += w.dim(t);
            }
            r0 += w.dim(s);
        }
        maps.push(d);
    }
    Ok((dims, maps))
}

/// `(dim ker d^i, rank d^{i-1})` for a cochain complex.
fn cohomology_dims(dims: &[usize], maps: &[Mat], i: usize) -> (usize, usize) {
    let ci = dims.get(i).copied().unwrap_or(0);
    let ker = ci - maps.get(i).map_or(0, Mat::rank);
    let img = if i == 0 { 0 } else { maps.get(i - 1).map_or(0, Mat::rank) };
    (ker, img)
}

/// `dim Ext^i_A(M, N)`.
pub fn ext_dim(m: &FdModule, n: &FdModule, i: usize) -> Result<usize> {
    m.check_same(n)?;
    let res = min_proj_resolution(m, i + 1)?;
    ext_dim_from(&res, n, i)
}

/// `dim Ext^i_A(M, N)` using an existing resolution of `M` of length `> i`.
pub fn ext_dim_from(res: &Resolution, n: &FdModule, i: usize) -> Result<usize> {
    let (dims, maps) = hom_complex(res, n)?;
    let (ker, img) = cohomology_dims(&dims, &maps, i);
    Ok(ker - img)
}

/// The module `⊕_j e_{v_j} N` carrying the action of `other` (a module on
/// the same space as `N` whose action commutes with that of `A`).
pub fn weight_sum_module(n: &FdModule, other: &FdModule, vertices: &[usize]) -> Result<FdModule> {
    let w = n.weights_or_err()?;
    let p = n.p();
    let blocks: Vec<Vec<Mat>> = vertices
        .iter()
        .map(|&v| {
            other
                .actions()
                .iter()
                .map(|b| w.space(v).coords(&b.mul(w.space(v).basis())))
                .collect()
        })
        .collect();
    let dim = vertices.iter().map(|&v| w.dim(v)).sum();
    let action = (0..other.algebra().dim())
        .map(|i| Mat::block_diag(p, &blocks.iter().map(|b| b[i].clone()).collect::<Vec<_>>()))
        .collect();
    Ok(FdModule::raw(other.algebra().clone(), dim, action))
}

/// `Ext^i_A(M, N)` as a module over the algebra of `other`, which acts on
/// `N` commuting with `A`.
pub fn ext_module_from(res: &Resolution, n: &FdModule, other: &FdModule, i: usize) -> Result<FdModule> {
    let (dims, maps) = hom_complex(res, n)?;
    let ci = dims.get(i).copied().unwrap_or(0);
    let p = n.p();
    if ci == 0 {
        return Ok(FdModule::zero(other.algebra()));
    }
    let c = weight_sum_module(n, other, &res.vertices[i])?;
    let z = match maps.get(i) {
        Some(d) => d.kernel_basis(),
        None => Mat::identity(p, ci),
    };
    let (zm, _) = submodule(&c, &z);
    let b = if i == 0 { Mat::zeros(p, ci, 0) } else { maps[i - 1].column_basis() };
    let zs = Subspace::new(z);
    let b_in_z = zs.coords(&b);
    Ok(quotient(&zm, &b_in_z).0)
}

/// `dim Tor_i^A(N, M)` for a right module `N` (a left module over `A^op`
/// given by its resolution over `A^op`) and a left `A`-module `M`.
pub fn tor_dim_from(res: &Resolution, m: &FdModule, i: usize) -> Result<usize> {
    let p = m.p();
    let w = m.weights_or_err()?;
    let dims: Vec<usize> = res
        .vertices
        .iter()
        .map(|vs| vs.iter().map(|&v| w.dim(v)).sum())
        .collect();
    // d_k : C_{k+1} -> C_k, block (j, i) = a_ij acting e_{v'_i} M -> e_{v_j} M
    let mut maps = Vec::new();
    for (k, f) in res.presentation.iter().enumerate() {
        let mut d = Mat::zeros(p, dims[k], dims[k + 1]);
        let mut c0 = 0;
        for (ii, &s) in f.source.iter().enumerate() {
            let mut r0 = 0;
            for (j, &t) in f.target.iter().enumerate() {
                let block = m.weight_block(&f.entries[ii][j], s, t)?;
                d.set_block(r0, c0, &block);
                r0 += w.dim(t);
            }
            c0 += w.dim(s);
        }
        maps.push(d);
    }
    let ci = dims.get(i).copied().unwrap_or(0);
    let outgoing = if i == 0 { 0 } else { maps.get(i - 1).map_or(0, Mat::rank) };
    let incoming = maps.get(i).map_or(0, Mat::rank);
    Ok(ci - outgoing - incoming)
}

/// `dim Tor_i^A(N, M)`.
pub fn tor_dim(n_right: &FdModule, m_left: &FdModule, i: usize) -> Result<usize> {
    let res = min_proj_resolution(n_right, i + 1)?;
    if !Algebra::same(&crate::algebra::opposite(n_right.algebra()), m_left.algebra()) {
        return Err(crate::error::Error::AlgebraMismatch);
    }
    tor_dim_from(&res, m_left, i)
}
