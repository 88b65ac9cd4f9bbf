//! Finite-dimensional algebras given by a basis and structure constants.

use std::fmt;
use std::sync::{Arc, OnceLock};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::linalg::{inv_mod, Mat, Subspace};
use crate::quiver::Quiver;

/// Sparse product of two basis elements: `(index, coefficient)` pairs.
pub type Product = Vec<(usize, u32)>;

/// A radical generator `e_target * x * e_source`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Arrow {
    pub label: String,
    pub source: usize,
    pub target: usize,
    pub element: Vec<u32>,
}

/// Complete set of primitive orthogonal idempotents, homogeneous radical
/// generators (spanning `J / J^2`), and a basis of the radical `J`.
#[derive(Clone, Debug)]
pub struct Structure {
    vertices: Vec<String>,
    idempotents: Vec<Vec<u32>>,
    arrows: Vec<Arrow>,
    radical: Mat,
}

impl Structure {
    pub fn new(vertices: Vec<String>, idempotents: Vec<Vec<u32>>, arrows: Vec<Arrow>, radical: Mat) -> Self {
        assert_eq!(vertices.len(), idempotents.len());
        Structure {
            vertices,
            idempotents,
            arrows,
            radical,
        }
    }

    pub fn vertices(&self) -> &[String] {
        &self.vertices
    }

    pub fn vertex_count(&self) -> usize {
        self.vertices.len()
    }

    pub fn idempotent(&self, v: usize) -> &[u32] {
        &self.idempotents[v]
    }

    pub fn idempotents(&self) -> &[Vec<u32>] {
        &self.idempotents
    }

    pub fn arrows(&self) -> &[Arrow] {
        &self.arrows
    }

    pub fn radical(&self) -> &Mat {
        &self.radical
    }

    fn opposite(&self) -> Structure {
        Structure {
            vertices: self.vertices.clone(),
            idempotents: self.idempotents.clone(),
            arrows: self
                .arrows
                .iter()
                .map(|a| Arrow {
                    label: a.label.clone(),
                    source: a.target,
                    target: a.source,
                    element: a.element.clone(),
                })
                .collect(),
            radical: self.radical.clone(),
        }
    }

    /// Pushes the structure through a linear map that is an algebra
    /// isomorphism (`anti = false`) or anti-isomorphism (`anti = true`).
    pub fn transport(&self, map: impl Fn(&[u32]) -> Vec<u32>, anti: bool) -> Structure {
        let radical_cols: Vec<Vec<u32>> = (0..self.radical.cols())
            .map(|j| map(&self.radical.col(j)))
            .collect();
        let n = radical_cols.first().map_or_else(|| map(&self.idempotents[0]).len(), Vec::len);
        Structure {
            vertices: self.vertices.clone(),
            idempotents: self.idempotents.iter().map(|e| map(e)).collect(),
            arrows: self
                .arrows
                .iter()
                .map(|a| Arrow {
                    label: a.label.clone(),
                    source: if anti { a.target } else { a.source },
                    target: if anti { a.source } else { a.target },
                    element: map(&a.element),
                })
                .collect(),
            radical: Mat::from_cols(self.radical.p(), n, &radical_cols),
        }
    }
}

/// Where an algebra came from.
#[derive(Clone, Debug)]
pub enum Provenance {
    Quiver {
        quiver: Quiver,
        relations: Vec<Vec<usize>>,
    },
    Opposite(Arc<Algebra>),
    Endomorphism,
    Table,
}

/// Basis and action data of an indecomposable projective or injective.
#[derive(Clone, Debug)]
pub struct VertexModuleData {
    /// Columns are algebra elements spanning `A e_v` (projective) or `e_v A`
    /// (the space dualised for the injective).
    pub elements: Subspace,
    pub action: Vec<Mat>,
}

pub struct Algebra {
    name: String,
    p: u32,
    labels: Vec<String>,
    table: Vec<Product>,
    one: Vec<u32>,
    structure: Option<Structure>,
    grading: Option<Vec<(usize, usize)>>,
    provenance: Provenance,
    left_mult: OnceLock<Vec<Mat>>,
    right_mult: OnceLock<Vec<Mat>>,
    projectives: OnceLock<Vec<VertexModuleData>>,
    injectives: OnceLock<Vec<VertexModuleData>>,
}

impl fmt::Debug for Algebra {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Algebra")
            .field("name", &self.name)
            .field("p", &self.p)
            .field("dim", &self.dim())
            .finish()
    }
}

impl Algebra {
    #[allow(clippy::too_many_arguments)]
    pub fn new(
        name: String,
        p: u32,
        labels: Vec<String>,
        table: Vec<Product>,
        one: Vec<u32>,
        structure: Option<Structure>,
        grading: Option<Vec<(usize, usize)>>,
        provenance: Provenance,
    ) -> Self {
        let n = labels.len();
        assert_eq!(table.len(), n * n);
        assert_eq!(one.len(), n);
        Algebra {
            name,
            p,
            labels,
            table,
            one,
            structure,
            grading,
            provenance,
            left_mult: OnceLock::new(),
            right_mult: OnceLock::new(),
            projectives: OnceLock::new(),
            injectives: OnceLock::new(),
        }
    }

    /// Raw ingestion of a multiplication table; no radical rule is attached.
    pub fn from_table(name: &str, p: u32, labels: Vec<String>, table: Vec<Product>, one: Vec<u32>) -> Self {
        Algebra::new(name.into(), p, labels, table, one, None, None, Provenance::Table)
    }

    /// The algebra spanned by the given linear maps under composition.
    ///
    /// `maps` must be a basis of a space of square matrices closed under
    /// composition and containing the identity.
    pub fn from_endomorphisms(name: &str, maps: &[Mat]) -> Self {
        let p = maps[0].p();
        let flat = Mat::from_cols(
            p,
            maps[0].rows() * maps[0].cols(),
            &maps.iter().map(Mat::flatten).collect::<Vec<_>>(),
        );
        let space = Subspace::new(flat);
        let coords = |m: &Mat| space.coords_vec(&m.flatten());
        let n = maps.len();
        let mut table = Vec::with_capacity(n * n);
        for a in maps {
            for b in maps {
                let c = coords(&a.mul(b));
                table.push(c.iter().enumerate().filter(|(_, &x)| x != 0).map(|(k, &x)| (k, x)).collect());
            }
        }
        let one = coords(&Mat::identity(p, maps[0].rows()));
        let labels = (0..n).map(|i| format!("f{i}")).collect();
        Algebra::new(name.into(), p, labels, table, one, None, None, Provenance::Endomorphism)
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn p(&self) -> u32 {
        self.p
    }

    pub fn dim(&self) -> usize {
        self.labels.len()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn label_index(&self, label: &str) -> Option<usize> {
        self.labels.iter().position(|l| l == label)
    }

    pub fn one(&self) -> &[u32] {
        &self.one
    }

    pub fn provenance(&self) -> &Provenance {
        &self.provenance
    }

    /// `(source, target)` vertex pair of each basis element, when homogeneous.
    pub fn grading(&self) -> Option<&[(usize, usize)]> {
        self.grading.as_deref()
    }

    pub fn basis_product(&self, i: usize, j: usize) -> &[(usize, u32)] {
        &self.table[i * self.dim() + j]
    }

    pub fn has_structure(&self) -> bool {
        self.structure.is_some()
    }

    pub fn structure(&self) -> Result<&Structure> {
        self.structure
            .as_ref()
            .ok_or_else(|| Error::NoRadicalRule(self.name.clone()))
    }

    pub fn vertex_count(&self) -> usize {
        self.structure.as_ref().map_or(0, Structure::vertex_count)
    }

    pub fn basis_vector(&self, i: usize) -> Vec<u32> {
        let mut v = vec![0; self.dim()];
        v[i] = 1;
        v
    }

    pub fn mul(&self, x: &[u32], y: &[u32]) -> Vec<u32> {
        let n = self.dim();
        let p = self.p as u64;
        let mut acc = vec![0u64; n];
        for (i, &a) in x.iter().enumerate() {
            if a == 0 {
                continue;
            }
            for (j, &b) in y.iter().enumerate() {
                if b == 0 {
                    continue;
                }
                let ab = a as u64 * b as u64 % p;
                for &(k, c) in &self.table[i * n + j] {
                    acc[k] = (acc[k] + ab * c as u64) % p;
                }
            }
        }
        acc.into_iter().map(|x| x as u32).collect()
    }

    pub fn add(&self, x: &[u32], y: &[u32]) -> Vec<u32> {
        x.iter().zip(y).map(|(&a, &b)| (a + b) % self.p).collect()
    }

    pub fn sub(&self, x: &[u32], y: &[u32]) -> Vec<u32> {
        x.iter().zip(y).map(|(&a, &b)| (a + self.p - b) % self.p).collect()
    }

    pub fn scale(&self, c: u32, x: &[u32]) -> Vec<u32> {
        x.iter().map(|&a| (a as u64 * c as u64 % self.p as u64) as u32).collect()
    }

    /// Identical structure constants (the same algebra up to naming).
    pub fn same(a: &Arc<Algebra>, b: &Arc<Algebra>) -> bool {
        Arc::ptr_eq(a, b) || (a.p == b.p && a.table == b.table)
    }

    pub fn check_associative(&self) -> bool {
        let n = self.dim();
        for i in 0..n {
            for j in 0..n {
                let ij = self.mul(&self.basis_vector(i), &self.basis_vector(j));
                for k in 0..n {
                    let bk = self.basis_vector(k);
                    let left = self.mul(&ij, &bk);
                    let jk = self.mul(&self.basis_vector(j), &bk);
                    if left != self.mul(&self.basis_vector(i), &jk) {
                        return false;
                    }
                }
            }
        }
        true
    }

    pub fn check_unit(&self) -> bool {
        (0..self.dim()).all(|i| {
            let b = self.basis_vector(i);
            self.mul(&self.one, &b) == b && self.mul(&b, &self.one) == b
        })
    }

    /// Left multiplication matrices `L_i : x -> b_i x`.
    pub fn left_mult(&self) -> &[Mat] {
        self.left_mult.get_or_init(|| self.mult_matrices(true))
    }

    /// Right multiplication matrices `R_i : x -> x b_i`.
    pub fn right_mult(&self) -> &[Mat] {
        self.right_mult.get_or_init(|| self.mult_matrices(false))
    }

    fn mult_matrices(&self, left: bool) -> Vec<Mat> {
        let n = self.dim();
        (0..n)
            .map(|i| {
                let mut m = Mat::zeros(self.p, n, n);
                for j in 0..n {
                    let prod = if left { self.basis_product(i, j) } else { self.basis_product(j, i) };
                    for &(k, c) in prod {
                        m.set(k, j, c);
                    }
                }
                m
            })
            .collect()
    }

    pub fn left_mult_by(&self, x: &[u32]) -> Mat {
        combine(self.p, self.dim(), self.left_mult(), x)
    }

    pub fn right_mult_by(&self, x: &[u32]) -> Mat {
        combine(self.p, self.dim(), self.right_mult(), x)
    }

    /// Data of `P_v = A e_v`, one entry per vertex.
    pub fn projective_data(&self) -> Result<&[VertexModuleData]> {
        let s = self.structure()?;
        Ok(self.projectives.get_or_init(|| {
            (0..s.vertex_count())
                .map(|v| {
                    let elements = Subspace::spanned_by(&self.right_mult_by(s.idempotent(v)));
                    let action = self
                        .left_mult()
                        .iter()
                        .map(|l| elements.coords(&l.mul(elements.basis())))
                        .collect();
                    VertexModuleData { elements, action }
                })
                .collect()
        }))
    }

    /// Data of `I_v = D(e_v A)`, one entry per vertex. The module basis is
    /// dual to `elements`.
    pub fn injective_data(&self) -> Result<&[VertexModuleData]> {
        let s = self.structure()?;
        Ok(self.injectives.get_or_init(|| {
            (0..s.vertex_count())
                .map(|v| {
                    let elements = Subspace::spanned_by(&self.left_mult_by(s.idempotent(v)));
                    // (a.f)(x) = f(x a): transpose of right multiplication on e_v A
                    let action = self
                        .right_mult()
                        .iter()
                        .map(|r| elements.coords(&r.mul(elements.basis())).transpose())
                        .collect();
                    VertexModuleData { elements, action }
                })
                .collect()
        }))
    }
}

/// `sum_i x_i * mats[i]`.
pub fn combine(p: u32, n: usize, mats: &[Mat], x: &[u32]) -> Mat {
    let mut out = Mat::zeros(p, mats.first().map_or(n, Mat::rows), mats.first().map_or(n, Mat::cols));
    for (m, &c) in mats.iter().zip(x) {
        out.add_scaled(c, m);
    }
    out
}

/// The opposite algebra. Taking the opposite twice returns the original `Arc`.
pub fn opposite(a: &Arc<Algebra>) -> Arc<Algebra> {
    if let Provenance::Opposite(orig) = &a.provenance {
        return orig.clone();
    }
    let n = a.dim();
    let mut table = vec![Vec::new(); n * n];
    for i in 0..n {
        for j in 0..n {
            table[i * n + j] = a.basis_product(j, i).to_vec();
        }
    }
    let name = format!("{}^op", a.name);
    Arc::new(Algebra::new(
        name,
        a.p,
        a.labels.clone(),
        table,
        a.one.clone(),
        a.structure.as_ref().map(Structure::opposite),
        a.grading.as_ref().map(|g| g.iter().map(|&(s, t)| (t, s)).collect()),
        Provenance::Opposite(a.clone()),
    ))
}

/// Replaces the radical rule of an algebra (used after transport or discovery).
pub fn with_structure(a: Algebra, structure: Structure) -> Algebra {
    Algebra { structure: Some(structure), ..a }
}

/// Certifies a radical and primitive idempotents for an algebra given only
/// by structure constants.
///
/// The radical candidate is the joint null space of the trace forms
/// `(x, y) -> tr(x y)` on the regular representation and on each supplied
/// faithful representation. It always contains `J`; it is accepted only
/// after checking it is a two-sided nilpotent ideal, which forces equality.
/// The semisimple quotient must be commutative and split over `F_p`.
pub fn discover_structure(a: &Algebra, faithful: &[&[Mat]], seed: u64) -> Result<Structure> {
    let p = a.p;
    let n = a.dim();
    let no_rule = || Error::NoRadicalRule(a.name.clone());

    let trace_form = |reps: &[Mat]| -> Mat {
        Mat::from_fn(p, n, n, |i, j| {
            let prod = a.basis_product(i, j);
            let mut t = 0u64;
            for &(k, c) in prod {
                let m = &reps[k];
                let tr: u64 = (0..m.rows()).map(|r| m.get(r, r) as u64).sum();
                t += tr % p as u64 * c as u64;
            }
            (t % p as u64) as u32
        })
    };
    let mut conditions = trace_form(a.left_mult());
    for reps in faithful {
        conditions = conditions.vstack(&trace_form(reps));
    }
    // x in J  <=>  G x = 0 for every (symmetric) trace form G
    let radical = conditions.kernel_basis();
    let jspace = Subspace::spanned_by(&radical.hstack(&Mat::zeros(p, n, 0)));

    // two-sided ideal
    for i in 0..n {
        let prods = a.left_mult()[i].mul(&radical).hstack(&a.right_mult()[i].mul(&radical));
        if !jspace.contains(&prods) {
            return Err(no_rule());
        }
    }
    // nilpotent
    let mut power = radical.clone();
    let mut steps = 0;
    while power.cols() > 0 {
        steps += 1;
        if steps > n + 1 {
            return Err(no_rule());
        }
        let mut cols = Vec::new();
        for j in 0..radical.cols() {
            let l = a.left_mult_by(&radical.col(j));
            cols.push(l.mul(&power));
        }
        let next = Mat::hstack_all(p, n, &cols).column_basis();
        if next.cols() == power.cols() {
            return Err(no_rule());
        }
        power = next;
    }

    // semisimple quotient B = A / J with representatives `reps`
    let reps = jspace.complement();
    let k = reps.cols();
    let full = Subspace::new(radical.hstack(&reps));
    let quot = |x: &[u32]| -> Vec<u32> {
        let c = full.coords_vec(x);
        c[radical.cols()..].to_vec()
    };
    let reps_vec: Vec<Vec<u32>> = (0..k).map(|j| reps.col(j)).collect();
    for x in &reps_vec {
        for y in &reps_vec {
            if quot(&a.mul(x, y)) != quot(&a.mul(y, x)) {
                return Err(Error::NotBasic(a.name.clone()));
            }
        }
    }
    let lift = |c: &[u32]| -> Vec<u32> { reps.mul_vec(c) };

    // primitive idempotents of B from a separating element
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut found = None;
    for _ in 0..40 {
        let z: Vec<u32> = (0..k).map(|_| rng.gen_range(0..p)).collect();
        let zl = lift(&z);
        // multiplication matrix of z on B
        let mz = Mat::from_cols(p, k, &reps_vec.iter().map(|r| quot(&a.mul(&zl, r))).collect::<Vec<_>>());
        let roots: Vec<u32> = (0..p)
            .filter(|&c| mz.sub(&Mat::identity(p, k).scale(c)).rank() < k)
            .take(k + 1)
            .collect();
        if roots.len() != k {
            continue;
        }
        // eigenspaces must all be one-dimensional for a split commutative B
        let ok = roots.iter().all(|&c| {
            let d = mz.sub(&Mat::identity(p, k).scale(c));
            k - d.rank() == 1
        });
        if ok {
            found = Some((zl, roots));
            break;
        }
    }
    let Some((z, roots)) = found else {
        return Err(Error::NotBasic(a.name.clone()));
    };

    // Lagrange idempotents in B, lifted and made orthogonal in A.
    let one = a.one.clone();
    let mut idempotents: Vec<Vec<u32>> = Vec::with_capacity(k);
    for (r, &c) in roots.iter().enumerate() {
        let mut e = one.clone();
        for (s, &d) in roots.iter().enumerate() {
            if s == r {
                continue;
            }
            let denom = inv_mod((c + p - d) % p, p);
            let factor = a.sub(&z, &a.scale(d, &one));
            e = a.scale(denom, &a.mul(&e, &factor));
        }
        idempotents.push(e);
    }
    let mut lifted: Vec<Vec<u32>> = Vec::with_capacity(k);
    for (r, approx) in idempotents.iter().enumerate() {
        let mut f = one.clone();
        for e in &lifted {
            f = a.sub(&f, e);
        }
        if r + 1 == k {
            lifted.push(f);
            break;
        }
        let mut e = a.mul(&a.mul(&f, approx), &f);
        for _ in 0..64 {
            let e2 = a.mul(&e, &e);
            if e2 == e {
                break;
            }
            let e3 = a.mul(&e2, &e);
            e = a.sub(&a.scale(3, &e2), &a.scale(2, &e3));
        }
        if a.mul(&e, &e) != e {
            return Err(Error::NotBasic(a.name.clone()));
        }
        lifted.push(e);
    }

    // arrows: Peirce components of J spanning J / J^2
    let mut sq_cols = Vec::new();
    for j in 0..radical.cols() {
        sq_cols.push(a.left_mult_by(&radical.col(j)).mul(&radical));
    }
    let jsq = Mat::hstack_all(p, n, &sq_cols).column_basis();
    let mut arrows = Vec::new();
    for (t, et) in lifted.iter().enumerate() {
        for (s, es) in lifted.iter().enumerate() {
            let comps: Vec<Vec<u32>> = (0..radical.cols())
                .map(|j| a.mul(&a.mul(et, &radical.col(j)), es))
                .collect();
            let block = Mat::from_cols(p, n, &comps);
            let both = jsq.hstack(&block);
            let (_, pivots) = both.rref();
            for c in pivots.into_iter().filter(|&c| c >= jsq.cols()) {
                let element = both.col(c);
                arrows.push(Arrow {
                    label: format!("r{}", arrows.len()),
                    source: s,
                    target: t,
                    element,
                });
            }
        }
    }

    let vertices = (0..k).map(|v| format!("v{v}")).collect();
    Ok(Structure::new(vertices, lifted, arrows, radical))
}
