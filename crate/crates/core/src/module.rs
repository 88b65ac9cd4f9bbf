//! Finite-dimensional left modules, module maps and the elementary
//! operations on them.
//!
//! A right module over `A` is always a left module over `opposite(A)`.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::{Arc, OnceLock};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::algebra::{combine, opposite, Algebra, Provenance};
use crate::error::{Error, Result};
use crate::linalg::{Mat, Subspace};

/// Vertex decomposition `M = ⊕_v e_v M` with a basis adapted to it.
#[derive(Clone, Debug)]
pub struct Weights {
    spaces: Vec<Subspace>,
    offsets: Vec<usize>,
    /// Columns: the concatenated weight bases.
    change: Mat,
    inverse: Mat,
}

impl Weights {
    pub fn dims(&self) -> Vec<usize> {
        self.spaces.iter().map(Subspace::dim).collect()
    }

    pub fn dim(&self, v: usize) -> usize {
        self.spaces[v].dim()
    }

    pub fn space(&self, v: usize) -> &Subspace {
        &self.spaces[v]
    }

    pub fn offset(&self, v: usize) -> usize {
        self.offsets[v]
    }

    /// Matrix whose columns are the adapted basis.
    pub fn change(&self) -> &Mat {
        &self.change
    }

    /// Coordinates in the adapted basis.
    pub fn inverse(&self) -> &Mat {
        &self.inverse
    }
}

struct Inner {
    algebra: Arc<Algebra>,
    dim: usize,
    action: Vec<Mat>,
    weights: OnceLock<Option<Weights>>,
}

/// A finite-dimensional left module, stored as one action matrix per basis
/// element of its algebra. Cloning is cheap.
#[derive(Clone)]
pub struct FdModule(Arc<Inner>);

impl fmt::Debug for FdModule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("FdModule")
            .field("algebra", &self.0.algebra.name())
            .field("dim", &self.0.dim)
            .finish()
    }
}

impl FdModule {
    /// Validated construction.
    pub fn new(algebra: Arc<Algebra>, dim: usize, action: Vec<Mat>) -> Result<Self> {
        let m = FdModule::raw(algebra, dim, action);
        m.validate()?;
        Ok(m)
    }

    pub(crate) fn raw(algebra: Arc<Algebra>, dim: usize, action: Vec<Mat>) -> Self {
        debug_assert_eq!(action.len(), algebra.dim());
        FdModule(Arc::new(Inner {
            algebra,
            dim,
            action,
            weights: OnceLock::new(),
        }))
    }

    pub fn zero(algebra: &Arc<Algebra>) -> Self {
        let p = algebra.p();
        FdModule::raw(algebra.clone(), 0, vec![Mat::zeros(p, 0, 0); algebra.dim()])
    }

    /// Checks shapes, the unit and full multiplication compatibility.
    pub fn validate(&self) -> Result<()> {
        let a = &self.0.algebra;
        let (p, d) = (a.p(), self.0.dim);
        if self.0.action.len() != a.dim() {
            return Err(Error::InvalidModule(format!(
                "expected {} action matrices, got {}",
                a.dim(),
                self.0.action.len()
            )));
        }
        for (i, m) in self.0.action.iter().enumerate() {
            if m.rows() != d || m.cols() != d || m.p() != p {
                return Err(Error::InvalidModule(format!(
                    "action of `{}` is not a {d}x{d} matrix over F_{p}",
                    a.labels()[i]
                )));
            }
        }
        if self.act(a.one()) != Mat::identity(p, d) {
            return Err(Error::InvalidModule("the unit does not act as the identity".into()));
        }
        for i in 0..a.dim() {
            for j in 0..a.dim() {
                let prod = self.0.action[i].mul(&self.0.action[j]);
                let mut expect = Mat::zeros(p, d, d);
                for &(k, c) in a.basis_product(i, j) {
                    expect.add_scaled(c, &self.0.action[k]);
                }
                if prod != expect {
                    return Err(Error::InvalidModule(format!(
                        "action is not multiplicative on ({}, {})",
                        a.labels()[i],
                        a.labels()[j]
                    )));
                }
            }
        }
        Ok(())
    }

    pub fn algebra(&self) -> &Arc<Algebra> {
        &self.0.algebra
    }

    pub fn p(&self) -> u32 {
        self.0.algebra.p()
    }

    pub fn dim(&self) -> usize {
        self.0.dim
    }

    pub fn is_zero(&self) -> bool {
        self.0.dim == 0
    }

    pub fn action(&self, i: usize) -> &Mat {
        &self.0.action[i]
    }

    pub fn actions(&self) -> &[Mat] {
        &self.0.action
    }

    /// Action of an arbitrary algebra element.
    pub fn act(&self, x: &[u32]) -> Mat {
        combine(self.p(), self.0.dim, &self.0.action, x)
    }

    pub fn same_algebra(&self, other: &FdModule) -> bool {
        Algebra::same(self.algebra(), other.algebra())
    }

    pub(crate) fn check_same(&self, other: &FdModule) -> Result<()> {
        if self.same_algebra(other) {
            Ok(())
        } else {
            Err(Error::AlgebraMismatch)
        }
    }

    /// Vertex weight decomposition; `None` without a radical rule.
    pub fn weights(&self) -> Option<&Weights> {
        self.0
            .weights
            .get_or_init(|| {
                let s = self.0.algebra.structure().ok()?;
                let p = self.p();
                let mut spaces = Vec::new();
                let mut offsets = Vec::new();
                let mut cols = Vec::new();
                let mut off = 0;
                for e in s.idempotents() {
                    let sp = Subspace::spanned_by(&self.act(e));
                    offsets.push(off);
                    off += sp.dim();
                    cols.push(sp.basis().clone());
                    spaces.push(sp);
                }
                let change = Mat::hstack_all(p, self.0.dim, &cols);
                let inverse = change.inverse().expect("idempotents sum to one");
                Some(Weights {
                    spaces,
                    offsets,
                    change,
                    inverse,
                })
            })
            .as_ref()
    }

    pub(crate) fn weights_or_err(&self) -> Result<&Weights> {
        self.weights()
            .ok_or_else(|| Error::NoRadicalRule(self.algebra().name().to_string()))
    }

    /// `dim e_v M` for every vertex.
    pub fn weight_dims(&self) -> Result<Vec<usize>> {
        Ok(self.weights_or_err()?.dims())
    }

    /// Matrix of `x` acting from `e_s M` to `e_t M` in weight coordinates.
    pub(crate) fn weight_block(&self, x: &[u32], s: usize, t: usize) -> Result<Mat> {
        let w = self.weights_or_err()?;
        Ok(w.space(t).coords(&self.act(x).mul(w.space(s).basis())))
    }

    pub fn to_spec(&self) -> ModuleSpec {
        let labels = self.algebra().labels();
        ModuleSpec {
            dim: self.dim(),
            action: labels
                .iter()
                .zip(self.actions())
                .map(|(l, m)| (l.clone(), mat_rows(m)))
                .collect(),
        }
    }

    /// Identical action matrices.
    pub fn same_action(&self, other: &FdModule) -> bool {
        self.same_algebra(other) && self.dim() == other.dim() && self.actions() == other.actions()
    }
}

pub(crate) fn mat_rows(m: &Mat) -> Vec<Vec<u32>> {
    (0..m.rows()).map(|r| m.row(r).to_vec()).collect()
}

/// Serialized module: action matrices keyed by basis label.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ModuleSpec {
    pub dim: usize,
    pub action: BTreeMap<String, Vec<Vec<u32>>>,
}

impl ModuleSpec {
    /// Builds and validates the module.
    ///
    /// Over a quiver algebra it is enough to give the trivial paths and the
    /// arrows; actions of longer paths are derived.
    pub fn build(&self, algebra: &Arc<Algebra>) -> Result<FdModule> {
        let p = algebra.p();
        let d = self.dim;
        let parse = |label: &str, rows: &Vec<Vec<u32>>| -> Result<Mat> {
            if rows.len() != d || rows.iter().any(|r| r.len() != d) {
                return Err(Error::InvalidModule(format!("action of `{label}` is not {d}x{d}")));
            }
            let data = rows.iter().flatten().map(|&x| x % p).collect();
            Ok(Mat::from_vec(p, d, d, data))
        };
        for label in self.action.keys() {
            if algebra.label_index(label).is_none() {
                return Err(Error::InvalidModule(format!("unknown basis label `{label}`")));
            }
        }
        let mut action = Vec::with_capacity(algebra.dim());
        for (i, label) in algebra.labels().iter().enumerate() {
            if let Some(rows) = self.action.get(label) {
                action.push(parse(label, rows)?);
                continue;
            }
            let derived = match algebra.provenance() {
                Provenance::Quiver { .. } => derive_path_action(algebra, &action, i)?,
                _ => None,
            };
            match derived {
                Some(m) => action.push(m),
                None => return Err(Error::InvalidModule(format!("missing action of `{label}`"))),
            }
        }
        FdModule::new(algebra.clone(), d, action)
    }
}

/// For a path `x = b * c` with `b`, `c` earlier basis elements, the product
/// of their actions.
fn derive_path_action(a: &Algebra, known: &[Mat], i: usize) -> Result<Option<Mat>> {
    for b in 0..known.len() {
        for c in 0..known.len() {
            if a.basis_product(b, c) == [(i, 1)] {
                return Ok(Some(known[b].mul(&known[c])));
            }
        }
    }
    Ok(None)
}

/// A homomorphism of left modules; `matrix` is `target.dim x source.dim`.
#[derive(Clone, Debug)]
pub struct ModuleMap {
    source: FdModule,
    target: FdModule,
    matrix: Mat,
}

impl ModuleMap {
    /// Validated construction.
    pub fn new(source: FdModule, target: FdModule, matrix: Mat) -> Result<Self> {
        source.check_same(&target)?;
        if matrix.rows() != target.dim() || matrix.cols() != source.dim() {
            return Err(Error::InvalidMap(format!(
                "matrix is {}x{}, expected {}x{}",
                matrix.rows(),
                matrix.cols(),
                target.dim(),
                source.dim()
            )));
        }
        let f = ModuleMap::raw(source, target, matrix);
        if !f.is_homomorphism() {
            return Err(Error::InvalidMap("matrix does not intertwine the actions".into()));
        }
        Ok(f)
    }

    pub(crate) fn raw(source: FdModule, target: FdModule, matrix: Mat) -> Self {
        debug_assert_eq!(matrix.rows(), target.dim());
        debug_assert_eq!(matrix.cols(), source.dim());
        ModuleMap { source, target, matrix }
    }

    pub fn is_homomorphism(&self) -> bool {
        (0..self.source.algebra().dim())
            .all(|i| self.matrix.mul(self.source.action(i)) == self.target.action(i).mul(&self.matrix))
    }

    pub fn identity(m: &FdModule) -> Self {
        ModuleMap::raw(m.clone(), m.clone(), Mat::identity(m.p(), m.dim()))
    }

    pub fn zero(source: &FdModule, target: &FdModule) -> Self {
        ModuleMap::raw(source.clone(), target.clone(), Mat::zeros(source.p(), target.dim(), source.dim()))
    }

    pub fn source(&self) -> &FdModule {
        &self.source
    }

    pub fn target(&self) -> &FdModule {
        &self.target
    }

    pub fn matrix(&self) -> &Mat {
        &self.matrix
    }

    /// `self ∘ other`.
    pub fn compose(&self, other: &ModuleMap) -> ModuleMap {
        assert_eq!(other.target.dim(), self.source.dim(), "compose: shape mismatch");
        ModuleMap::raw(other.source.clone(), self.target.clone(), self.matrix.mul(&other.matrix))
    }

    pub fn rank(&self) -> usize {
        self.matrix.rank()
    }

    pub fn is_injective(&self) -> bool {
        self.rank() == self.source.dim()
    }

    pub fn is_surjective(&self) -> bool {
        self.rank() == self.target.dim()
    }

    pub fn is_iso(&self) -> bool {
        self.is_injective() && self.is_surjective()
    }

    pub fn is_zero(&self) -> bool {
        self.matrix.is_zero()
    }

    /// Kernel with its inclusion into the source.
    pub fn kernel(&self) -> (FdModule, ModuleMap) {
        submodule(&self.source, &self.matrix.kernel_basis())
    }

    /// Image with its inclusion into the target.
    pub fn image(&self) -> (FdModule, ModuleMap) {
        submodule(&self.target, &self.matrix.column_basis())
    }

    /// Cokernel with the projection from the target.
    pub fn cokernel(&self) -> (FdModule, ModuleMap) {
        quotient(&self.target, &self.matrix.column_basis())
    }
}

/// Submodule with the given basis (columns), assumed closed under the action.
pub fn submodule(m: &FdModule, basis: &Mat) -> (FdModule, ModuleMap) {
    let sub = Subspace::new(basis.clone());
    let action = m.actions().iter().map(|a| sub.coords(&a.mul(basis))).collect();
    let s = FdModule::raw(m.algebra().clone(), basis.cols(), action);
    let incl = ModuleMap::raw(s.clone(), m.clone(), basis.clone());
    (s, incl)
}

/// Smallest submodule containing the given vectors (columns).
pub fn submodule_spanned(m: &FdModule, vectors: &Mat) -> (FdModule, ModuleMap) {
    let images: Vec<Mat> = m.actions().iter().map(|a| a.mul(vectors)).collect();
    let basis = Mat::hstack_all(m.p(), m.dim(), &images).column_basis();
    submodule(m, &basis)
}

/// Quotient by the submodule spanned by the columns of `sub` (assumed closed).
pub fn quotient(m: &FdModule, sub: &Mat) -> (FdModule, ModuleMap) {
    let p = m.p();
    let sub = sub.column_basis();
    let k = sub.cols();
    let comp = Subspace::new(sub.clone()).complement();
    let full = Subspace::new(sub.hstack(&comp));
    let q = comp.cols();
    let proj = full.left_inverse().block(k, q, 0, m.dim());
    let action = m
        .actions()
        .iter()
        .map(|a| proj.mul(&a.mul(&comp)))
        .collect();
    let qm = FdModule::raw(m.algebra().clone(), q, action);
    let pi = ModuleMap::raw(m.clone(), qm.clone(), if q == 0 { Mat::zeros(p, 0, m.dim()) } else { proj });
    (qm, pi)
}

/// Block-diagonal direct sum; all summands must live over `algebra`.
pub fn direct_sum(algebra: &Arc<Algebra>, summands: &[FdModule]) -> Result<FdModule> {
    for s in summands {
        if !Algebra::same(s.algebra(), algebra) {
            return Err(Error::AlgebraMismatch);
        }
    }
    let p = algebra.p();
    let dim = summands.iter().map(FdModule::dim).sum();
    let action = (0..algebra.dim())
        .map(|i| Mat::block_diag(p, &summands.iter().map(|s| s.action(i).clone()).collect::<Vec<_>>()))
        .collect();
    Ok(FdModule::raw(algebra.clone(), dim, action))
}

/// Inclusions `M_k -> ⊕ M_j` and projections `⊕ M_j -> M_k`.
pub fn sum_injections(sum: &FdModule, summands: &[FdModule]) -> (Vec<ModuleMap>, Vec<ModuleMap>) {
    let p = sum.p();
    let mut off = 0;
    let mut inj = Vec::new();
    let mut proj = Vec::new();
    for s in summands {
        let mut i = Mat::zeros(p, sum.dim(), s.dim());
        i.set_block(off, 0, &Mat::identity(p, s.dim()));
        proj.push(ModuleMap::raw(sum.clone(), s.clone(), i.transpose()));
        inj.push(ModuleMap::raw(s.clone(), sum.clone(), i));
        off += s.dim();
    }
    (inj, proj)
}

pub fn regular_module(a: &Arc<Algebra>) -> FdModule {
    FdModule::raw(a.clone(), a.dim(), a.left_mult().to_vec())
}

/// `P_v = A e_v`; the basis is the deterministic basis of `A e_v`.
pub fn indec_projective(a: &Arc<Algebra>, v: usize) -> Result<FdModule> {
    let data = &a.projective_data()?[v];
    Ok(FdModule::raw(a.clone(), data.elements.dim(), data.action.clone()))
}

/// `I_v = D(e_v A)`.
pub fn indec_injective(a: &Arc<Algebra>, v: usize) -> Result<FdModule> {
    let data = &a.injective_data()?[v];
    Ok(FdModule::raw(a.clone(), data.elements.dim(), data.action.clone()))
}

/// `S_v = top P_v`.
pub fn simple_module(a: &Arc<Algebra>, v: usize) -> Result<FdModule> {
    let s = a.structure()?;
    let p = a.p();
    let e = s.idempotent(v);
    // e_w acts as delta_{vw}; every radical element acts as zero
    let action = (0..a.dim())
        .map(|i| {
            let c = simple_coefficient(a, e, i);
            Mat::from_vec(p, 1, 1, vec![c])
        })
        .collect();
    Ok(FdModule::raw(a.clone(), 1, action))
}

/// Scalar by which basis element `i` acts on the simple module at `e`:
/// the coefficient `c` with `e b_i e ≡ c e` modulo the radical.
fn simple_coefficient(a: &Algebra, e: &[u32], i: usize) -> u32 {
    let s = a.structure().expect("structure checked by caller");
    let x = a.mul(&a.mul(e, &a.basis_vector(i)), e);
    let rad = s.radical();
    let both = rad.hstack(&Mat::column_vector(a.p(), e));
    let coords = Subspace::new(both).coords_vec(&x);
    coords[rad.cols()]
}

/// Vector-space dual `DM = Hom_K(M, K)`, a module over the opposite algebra.
pub fn k_dual(m: &FdModule) -> FdModule {
    let op = opposite(m.algebra());
    let action = m.actions().iter().map(Mat::transpose).collect();
    FdModule::raw(op, m.dim(), action)
}

/// `D f : DN -> DM`.
pub fn k_dual_map(f: &ModuleMap) -> ModuleMap {
    ModuleMap::raw(k_dual(f.target()), k_dual(f.source()), f.matrix().transpose())
}

/// Matrices spanning `Hom_A(M, N)`, in a deterministic order.
pub fn hom_matrices(m: &FdModule, n: &FdModule) -> Result<Vec<Mat>> {
    m.check_same(n)?;
    let p = m.p();
    if m.dim() == 0 || n.dim() == 0 {
        return Ok(Vec::new());
    }
    let (Some(wm), Some(wn)) = (m.weights(), n.weights()) else {
        return Ok(hom_matrices_full(m, n));
    };
    let s = m.algebra().structure()?;
    let k = s.vertex_count();
    // unknowns: blocks X_v : e_v M -> e_v N, row-major
    let mut off = vec![0usize; k + 1];
    for v in 0..k {
        off[v + 1] = off[v] + wn.dim(v) * wm.dim(v);
    }
    let unknowns = off[k];
    if unknowns == 0 {
        return Ok(Vec::new());
    }
    let mut rows: Vec<Vec<u32>> = Vec::new();
    for arrow in s.arrows() {
        let (src, tgt) = (arrow.source, arrow.target);
        let (ms, mt, ns, nt) = (wm.dim(src), wm.dim(tgt), wn.dim(src), wn.dim(tgt));
        if (ms == 0 || nt == 0) || (mt == 0 && ns == 0) {
            continue;
        }
        let am = m.weight_block(&arrow.element, src, tgt)?; // mt x ms
        let an = n.weight_block(&arrow.element, src, tgt)?; // nt x ns
        // X_t am - an X_s = 0, entry (i, j) with i < nt, j < ms
        for i in 0..nt {
            for j in 0..ms {
                let mut row = vec![0u32; unknowns];
                for l in 0..mt {
                    let c = am.get(l, j);
                    if c != 0 {
                        let idx = off[tgt] + i * mt + l;
                        row[idx] = (row[idx] + c) % p;
                    }
                }
                for l in 0..ns {
                    let c = an.get(i, l);
                    if c != 0 {
                        let idx = off[src] + l * ms + j;
                        row[idx] = (row[idx] + p - c) % p;
                    }
                }
                rows.push(row);
            }
        }
    }
    let system = if rows.is_empty() {
        Mat::zeros(p, 0, unknowns)
    } else {
        Mat::from_vec(p, rows.len(), unknowns, rows.concat())
    };
    let sols = system.kernel_basis();
    let mut out = Vec::with_capacity(sols.cols());
    for c in 0..sols.cols() {
        let x = sols.col(c);
        let mut blocks = Vec::with_capacity(k);
        for v in 0..k {
            let (r, cc) = (wn.dim(v), wm.dim(v));
            blocks.push(Mat::from_vec(p, r, cc, x[off[v]..off[v + 1]].to_vec()));
        }
        let bd = Mat::block_diag(p, &blocks);
        out.push(wn.change().mul(&bd).mul(wm.inverse()));
    }
    Ok(out)
}

/// Hom without a vertex decomposition: all basis elements as generators.
fn hom_matrices_full(m: &FdModule, n: &FdModule) -> Vec<Mat> {
    let p = m.p();
    let (dm, dn) = (m.dim(), n.dim());
    let unknowns = dm * dn;
    let mut rows: Vec<u32> = Vec::new();
    let mut count = 0;
    for i in 0..m.algebra().dim() {
        let (am, an) = (m.action(i), n.action(i));
        // X am - an X = 0; X row-major (dn x dm)
        for r in 0..dn {
            for c in 0..dm {
                let mut row = vec![0u32; unknowns];
                for l in 0..dm {
                    let x = am.get(l, c);
                    if x != 0 {
                        row[r * dm + l] = (row[r * dm + l] + x) % p;
                    }
                }
                for l in 0..dn {
                    let x = an.get(r, l);
                    if x != 0 {
                        row[l * dm + c] = (row[l * dm + c] + p - x) % p;
                    }
                }
                rows.extend(row);
                count += 1;
            }
        }
    }
    let sols = Mat::from_vec(p, count, unknowns, rows).kernel_basis();
    (0..sols.cols())
        .map(|c| Mat::from_vec(p, dn, dm, sols.col(c)))
        .collect()
}

/// Basis of `Hom_A(M, N)` as module maps.
pub fn hom_basis(m: &FdModule, n: &FdModule) -> Result<Vec<ModuleMap>> {
    Ok(hom_matrices(m, n)?
        .into_iter()
        .map(|x| ModuleMap::raw(m.clone(), n.clone(), x))
        .collect())
}

/// Flattened hom basis with coordinates, for expressing maps in the basis.
#[derive(Clone, Debug)]
pub struct HomSpace {
    pub maps: Vec<Mat>,
    space: Subspace,
}

impl HomSpace {
    pub fn new(m: &FdModule, n: &FdModule) -> Result<Self> {
        let maps = hom_matrices(m, n)?;
        Ok(HomSpace::from_maps(m.p(), m.dim() * n.dim(), maps))
    }

    pub(crate) fn from_maps(p: u32, ambient: usize, maps: Vec<Mat>) -> Self {
        let flat: Vec<Vec<u32>> = maps.iter().map(Mat::flatten).collect();
        let space = Subspace::new(Mat::from_cols(p, ambient, &flat));
        HomSpace { maps, space }
    }

    pub fn dim(&self) -> usize {
        self.maps.len()
    }

    /// Coordinates of a homomorphism in the basis.
    pub fn coords(&self, f: &Mat) -> Vec<u32> {
        self.space.coords_vec(&f.flatten())
    }

    pub fn contains(&self, f: &Mat) -> bool {
        self.space.contains(&Mat::column_vector(f.p(), &f.flatten()))
    }
}

/// Radical `rad M = J M` with its inclusion.
pub fn radical(m: &FdModule) -> Result<(FdModule, ModuleMap)> {
    let s = m.algebra().structure()?;
    let p = m.p();
    let images: Vec<Mat> = s.arrows().iter().map(|a| m.act(&a.element)).collect();
    let basis = Mat::hstack_all(p, m.dim(), &images).column_basis();
    Ok(submodule(m, &basis))
}

/// Top `M / rad M` with the projection.
pub fn top(m: &FdModule) -> Result<(FdModule, ModuleMap)> {
    let (_, incl) = radical(m)?;
    Ok(quotient(m, incl.matrix()))
}

/// Socle `{x : J x = 0}` with its inclusion.
pub fn socle(m: &FdModule) -> Result<(FdModule, ModuleMap)> {
    let s = m.algebra().structure()?;
    let p = m.p();
    let stacked: Vec<Mat> = s.arrows().iter().map(|a| m.act(&a.element)).collect();
    let basis = if stacked.is_empty() {
        Mat::identity(p, m.dim())
    } else {
        Mat::vstack_all(p, m.dim(), &stacked).kernel_basis()
    };
    Ok(submodule(m, &basis))
}

/// Multiplicity of each simple in a semisimple module (its weight vector).
pub fn multiplicities(m: &FdModule) -> Result<Vec<usize>> {
    m.weight_dims()
}

pub fn top_vector(m: &FdModule) -> Result<Vec<usize>> {
    multiplicities(&top(m)?.0)
}

pub fn socle_vector(m: &FdModule) -> Result<Vec<usize>> {
    multiplicities(&socle(m)?.0)
}

const ISO_RANDOM_TRIALS: usize = 24;
const ISO_EXHAUSTIVE_POINTS: u64 = 40_000;

/// Whether `M ≅ N`.
///
/// Cheap invariants certify `false`; an invertible element of `Hom(M, N)`
/// certifies `true`. Between these a seeded random search runs, then an
/// exhaustive scan over projective points of the Hom space when it is
/// small. Otherwise the answer is `Inconclusive`.
pub fn is_isomorphic(m: &FdModule, n: &FdModule) -> Result<bool> {
    m.check_same(n)?;
    if m.dim() != n.dim() {
        return Ok(false);
    }
    if m.dim() == 0 {
        return Ok(true);
    }
    if m.weights().is_some()
        && (m.weight_dims()? != n.weight_dims()?
            || top_vector(m)? != top_vector(n)?
            || socle_vector(m)? != socle_vector(n)?)
        {
            return Ok(false);
        }
    let hom = hom_matrices(m, n)?;
    let h = hom.len();
    if h == 0 {
        return Ok(false);
    }
    if hom_matrices(m, m)?.len() != h || hom_matrices(n, n)?.len() != h || hom_matrices(n, m)?.len() != h {
        return Ok(false);
    }
    let d = m.dim();
    let invertible = |x: &Mat| x.rank() == d;
    if hom.iter().any(invertible) {
        return Ok(true);
    }
    let p = m.p();
    let mut rng = ChaCha8Rng::seed_from_u64(0x1509_0f0f);
    for _ in 0..ISO_RANDOM_TRIALS {
        let coeffs: Vec<u32> = (0..h).map(|_| rng.gen_range(0..p)).collect();
        if invertible(&combine(p, d, &hom, &coeffs)) {
            return Ok(true);
        }
    }
    // projective points: first nonzero coefficient equal to one
    let points: u64 = (0..h as u32).map(|i| (p as u64).saturating_pow(i)).sum();
    if points <= ISO_EXHAUSTIVE_POINTS {
        for lead in 0..h {
            let tail = h - lead - 1;
            let count = (p as u64).pow(tail as u32);
            for code in 0..count {
                let mut coeffs = vec![0u32; h];
                coeffs[lead] = 1;
                let mut c = code;
                for slot in coeffs.iter_mut().skip(lead + 1) {
                    *slot = (c % p as u64) as u32;
                    c /= p as u64;
                }
                if invertible(&combine(p, d, &hom, &coeffs)) {
                    return Ok(true);
                }
            }
        }
        return Ok(false);
    }
    Err(Error::Inconclusive {
        trials: ISO_RANDOM_TRIALS + h,
        hom_dim: h,
    })
}

/// `M ⊗_A N` for a right module `M` (a left module over `A^op`) and a left
/// module `N` over `A`.
#[derive(Clone, Debug)]
pub struct TensorProduct {
    pub dim: usize,
    /// The module structure inherited from a second action on `M`, if given.
    pub module: Option<FdModule>,
}

/// Computes `M ⊗_A N` as `⊕_v (M e_v ⊗ e_v N)` modulo the arrow relations.
///
/// `residual`, when present, is a left module over another algebra on the
/// same space as `M` whose action commutes with that of `A^op`; it descends
/// to the tensor product.
pub fn tensor_over(m_right: &FdModule, n_left: &FdModule, residual: Option<&FdModule>) -> Result<TensorProduct> {
    let a = n_left.algebra();
    if !Algebra::same(&opposite(a), m_right.algebra()) {
        return Err(Error::AlgebraMismatch);
    }
    if let Some(r) = residual {
        if r.dim() != m_right.dim() {
            return Err(Error::InvalidModule("residual action has the wrong dimension".into()));
        }
    }
    let s = a.structure()?;
    let p = a.p();
    let (wm, wn) = (m_right.weights_or_err()?, n_left.weights_or_err()?);
    let k = s.vertex_count();
    let mut off = vec![0usize; k + 1];
    for v in 0..k {
        off[v + 1] = off[v] + wm.dim(v) * wn.dim(v);
    }
    let ambient = off[k];
    let mut rels: Vec<Vec<u32>> = Vec::new();
    for arrow in s.arrows() {
        let (src, tgt) = (arrow.source, arrow.target);
        // x in M e_t, y in e_s N: (x a) ⊗ y - x ⊗ (a y)
        let am = m_right.weight_block(&arrow.element, tgt, src)?; // m_s x m_t
        let an = n_left.weight_block(&arrow.element, src, tgt)?; // n_t x n_s
        let (ms, mt, ns, nt) = (wm.dim(src), wm.dim(tgt), wn.dim(src), wn.dim(tgt));
        for i in 0..mt {
            for j in 0..ns {
                let mut v = vec![0u32; ambient];
                for kk in 0..ms {
                    let c = am.get(kk, i);
                    let idx = off[src] + kk * ns + j;
                    v[idx] = (v[idx] + c) % p;
                }
                for l in 0..nt {
                    let c = an.get(l, j);
                    let idx = off[tgt] + i * nt + l;
                    v[idx] = (v[idx] + p - c) % p;
                }
                rels.push(v);
            }
        }
    }
    let relations = Mat::from_cols(p, ambient, &rels).column_basis();
    let dim = ambient - relations.cols();
    let module = match residual {
        None => None,
        Some(r) => {
            let comp = Subspace::new(relations.clone()).complement();
            let full = Subspace::new(relations.hstack(&comp));
            let proj = full.left_inverse().block(relations.cols(), dim, 0, ambient);
            let action = r
                .actions()
                .iter()
                .map(|b| {
                    let blocks: Vec<Mat> = (0..k)
                        .map(|v| {
                            let bv = wm.space(v).coords(&b.mul(wm.space(v).basis()));
                            kron(&bv, &Mat::identity(p, wn.dim(v)))
                        })
                        .collect();
                    proj.mul(&Mat::block_diag(p, &blocks)).mul(&comp)
                })
                .collect();
            Some(FdModule::raw(r.algebra().clone(), dim, action))
        }
    };
    Ok(TensorProduct { dim, module })
}

/// Kronecker product.
pub fn kron(a: &Mat, b: &Mat) -> Mat {
    let (ar, ac, br, bc) = (a.rows(), a.cols(), b.rows(), b.cols());
    Mat::from_fn(a.p(), ar * br, ac * bc, |r, c| {
        let x = a.get(r / br, c / bc) as u64 * b.get(r % br, c % bc) as u64;
        (x % a.p() as u64) as u32
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quiver::{build_path_algebra, PathWord, Quiver};

    fn delta() -> Quiver {
        Quiver::new(
            &["1", "2", "3"],
            &[("alpha", "1", "2"), ("beta", "2", "1"), ("gamma", "2", "3")],
        )
        .unwrap()
    }

    fn l1() -> Arc<Algebra> {
        let q = delta();
        let r = PathWord::from_composition(&q, &["alpha", "beta", "alpha"]).unwrap();
        build_path_algebra("L1", 101, &q, &[r], 32).unwrap()
    }

    fn semisimple(k: usize) -> Arc<Algebra> {
        let names: Vec<String> = (1..=k).map(|i| i.to_string()).collect();
        let refs: Vec<&str> = names.iter().map(String::as_str).collect();
        let q = Quiver::new(&refs, &[]).unwrap();
        build_path_algebra("K", 101, &q, &[], 32).unwrap()
    }

    #[test]
    fn regular_modules() {
        let k2 = semisimple(2);
        let r = regular_module(&k2);
        assert_eq!(r.dim(), 2);
        assert!(r.actions().iter().all(|m| (0..2).all(|i| (0..2).all(|j| i == j || m.get(i, j) == 0))));
        let a = l1();
        let r = regular_module(&a);
        assert_eq!(r.dim(), 11);
        r.validate().unwrap();
    }

    #[test]
    fn projectives_and_injectives() {
        let a = l1();
        let dims: Vec<usize> = (0..3).map(|v| indec_projective(&a, v).unwrap().dim()).collect();
        assert_eq!(dims, vec![4, 6, 1]);
        let dims: Vec<usize> = (0..3).map(|v| indec_injective(&a, v).unwrap().dim()).collect();
        assert_eq!(dims, vec![4, 3, 4]);
        for v in 0..3 {
            indec_projective(&a, v).unwrap().validate().unwrap();
            let inj = indec_injective(&a, v).unwrap();
            inj.validate().unwrap();
            let mut expect = vec![0; 3];
            expect[v] = 1;
            assert_eq!(socle_vector(&inj).unwrap(), expect);
            assert_eq!(top_vector(&indec_projective(&a, v).unwrap()).unwrap(), expect);
        }
        let sum = direct_sum(&a, &(0..3).map(|v| indec_projective(&a, v).unwrap()).collect::<Vec<_>>()).unwrap();
        assert!(is_isomorphic(&sum, &regular_module(&a)).unwrap());
    }

    #[test]
    fn hom_from_projective_is_weight_space() {
        let a = l1();
        let r = regular_module(&a);
        let inj = indec_injective(&a, 1).unwrap();
        for v in 0..3 {
            let pv = indec_projective(&a, v).unwrap();
            for m in [&r, &inj] {
                let expect = m.act(a.structure().unwrap().idempotent(v)).rank();
                assert_eq!(hom_matrices(&pv, m).unwrap().len(), expect);
            }
        }
        assert_eq!(hom_matrices(&r, &r).unwrap().len(), 11);
        // cross-check against the structure-free system
        assert_eq!(hom_matrices_full(&r, &r).len(), 11);
        let s1 = simple_module(&a, 0).unwrap();
        let s2 = simple_module(&a, 1).unwrap();
        assert!(hom_matrices(&s1, &s2).unwrap().is_empty());
    }

    #[test]
    fn kernels_cokernels_images() {
        let a = l1();
        let p1 = indec_projective(&a, 0).unwrap();
        let id = ModuleMap::identity(&p1);
        assert_eq!(id.kernel().0.dim(), 0);
        assert_eq!(id.cokernel().0.dim(), 0);
        let z = ModuleMap::zero(&p1, &p1);
        assert_eq!(z.kernel().0.dim(), 4);
        assert_eq!(z.cokernel().0.dim(), 4);
        let (t, pi) = top(&p1).unwrap();
        assert_eq!(t.dim(), 1);
        let (k, incl) = pi.kernel();
        assert_eq!(k.dim(), 3);
        k.validate().unwrap();
        assert!(incl.is_homomorphism());
        assert!(pi.is_homomorphism());
        let (im, _) = pi.image();
        assert_eq!(im.dim() + k.dim(), p1.dim());
    }

    #[test]
    fn submodule_closure() {
        let a = l1();
        let r = regular_module(&a);
        let (s, _) = submodule_spanned(&r, &Mat::identity(101, 11));
        assert_eq!(s.dim(), 11);
        let e1 = a.structure().unwrap().idempotent(0).to_vec();
        let (s, incl) = submodule_spanned(&r, &Mat::column_vector(101, &e1));
        assert_eq!(s.dim(), 4);
        assert!(incl.is_homomorphism());
        assert!(is_isomorphic(&s, &indec_projective(&a, 0).unwrap()).unwrap());
        let z = direct_sum(&a, &[FdModule::zero(&a), FdModule::zero(&a)]).unwrap();
        assert_eq!(z.dim(), 0);
    }

    #[test]
    fn radical_top_socle() {
        let k = semisimple(3);
        let r = regular_module(&k);
        assert_eq!(radical(&r).unwrap().0.dim(), 0);
        assert_eq!(top(&r).unwrap().0.dim(), 3);
        assert_eq!(socle(&r).unwrap().0.dim(), 3);
        // paths that no arrow extends: βα, βαβ at 1; e3, γ, γα, γαβ at 3
        let a = l1();
        let soc = socle_vector(&regular_module(&a)).unwrap();
        assert_eq!(soc, vec![2, 0, 4]);
    }

    #[test]
    fn isomorphism_examples() {
        let a = l1();
        let p3 = indec_projective(&a, 2).unwrap();
        let s3 = simple_module(&a, 2).unwrap();
        assert!(is_isomorphic(&p3, &s3).unwrap());
        assert!(is_isomorphic(&p3, &p3).unwrap());
        assert!(!is_isomorphic(&p3, &indec_projective(&a, 0).unwrap()).unwrap());
        let p1 = indec_projective(&a, 0).unwrap();
        let dd = k_dual(&k_dual(&p1));
        assert!(Arc::ptr_eq(dd.algebra(), p1.algebra()));
        assert!(is_isomorphic(&dd, &p1).unwrap());
    }

    #[test]
    fn dual_of_projective_is_injective_over_opposite() {
        let a = l1();
        let op = opposite(&a);
        for v in 0..3 {
            let d = k_dual(&indec_projective(&op, v).unwrap());
            assert!(d.same_action(&indec_injective(&a, v).unwrap()));
        }
    }

    #[test]
    fn tensor_unit_law() {
        let a = l1();
        let op = opposite(&a);
        let right_regular = regular_module(&op);
        let n = indec_injective(&a, 1).unwrap();
        let t = tensor_over(&right_regular, &n, None).unwrap();
        assert_eq!(t.dim, n.dim());
        for v in 0..3 {
            let ev_a = indec_projective(&op, v).unwrap();
            let t = tensor_over(&ev_a, &n, None).unwrap();
            assert_eq!(t.dim, n.weight_dims().unwrap()[v]);
        }
    }

    #[test]
    fn module_spec_round_trip_and_derivation() {
        let a = l1();
        let inj = indec_injective(&a, 0).unwrap();
        let spec = inj.to_spec();
        let back = spec.build(&a).unwrap();
        assert!(back.same_action(&inj));
        let mut partial = spec.clone();
        partial.action.retain(|l, _| !l.contains('.'));
        assert!(partial.build(&a).unwrap().same_action(&inj));
        let mut bad = spec;
        bad.action.insert("alpha".into(), vec![vec![1; 4]; 4]);
        assert!(bad.build(&a).is_err());
    }
}
