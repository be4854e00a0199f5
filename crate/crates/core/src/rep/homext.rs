//! Homomorphism and extension spaces between representations.
//!
//! Both computations reduce to one exact linear solve over the base field:
//! the unknowns are the entries of a family of matrices (one block per
//! vertex or per arrow), the equations are matrix identities that are linear
//! in those blocks, and the solution space is extracted as a kernel basis.

use std::collections::BTreeMap;
use std::sync::Arc;

use crate::{Error, Result};
use crate::field::FieldElement;
use crate::matrix::{Matrix, RowSpace};
use crate::modgraph::ModGraph;
use crate::rep::{tilde, Representation};

/// A linear system whose unknowns are matrix blocks indexed by `K`.
/// Equations are matrix identities `Σ P·block·S = 0`; each contributes one
/// scalar row per entry of the equation's shape.
struct LinearSystem<K: Ord + Copy> {
    blocks: BTreeMap<K, (usize, usize, usize)>,
    total: usize,
    rows: Vec<Matrix>,
}

struct Equation {
    p: usize,
    q: usize,
    coeffs: Matrix,
}

impl<K: Ord + Copy> LinearSystem<K> {
    fn new() -> Self {
        LinearSystem {
            blocks: BTreeMap::new(),
            total: 0,
            rows: Vec::new(),
        }
    }

    fn add_block(&mut self, key: K, rows: usize, cols: usize) {
        let prev = self.blocks.insert(key, (self.total, rows, cols));
        assert!(prev.is_none(), "duplicate unknown block");
        self.total += rows * cols;
    }

    fn equation(&self, handle: &crate::field::FieldHandle, p: usize, q: usize) -> Equation {
        Equation {
            p,
            q,
            coeffs: Matrix::zero(handle, p * q, self.total),
        }
    }

    /// Adds `sign · P·block(key)·S` to the equation.
    fn add_term(&self, eq: &mut Equation, key: K, p: &Matrix, s: &Matrix, sign: i64) {
        let (off, zr, zc) = self.blocks[&key];
        assert_eq!(p.ncols(), zr, "left factor must match block rows");
        assert_eq!(s.nrows(), zc, "right factor must match block cols");
        assert_eq!(p.nrows(), eq.p);
        assert_eq!(s.ncols(), eq.q);
        let sg = p.handle().from_i64(sign);
        for r in 0..eq.p {
            for rz in 0..zr {
                let pv = p.get(r, rz);
                if pv.is_zero() {
                    continue;
                }
                let pv = pv.mul(&sg);
                for cz in 0..zc {
                    let col = off + rz * zc + cz;
                    for c in 0..eq.q {
                        let sv = s.get(cz, c);
                        if sv.is_zero() {
                            continue;
                        }
                        let row = r * eq.q + c;
                        let cur = eq.coeffs.get(row, col).add(&pv.mul(sv));
                        eq.coeffs.set(row, col, cur);
                    }
                }
            }
        }
    }

    fn push(&mut self, eq: Equation) {
        if eq.coeffs.nrows() > 0 {
            self.rows.push(eq.coeffs);
        }
    }

    /// Kernel of the stacked system; columns are solutions.
    fn solve_kernel(&self, handle: &crate::field::FieldHandle) -> Result<Matrix> {
        if self.rows.is_empty() {
            return Ok(Matrix::identity(handle, self.total));
        }
        Ok(Matrix::vstack(&self.rows)?.kernel_basis())
    }

    /// Extracts the matrix stored in `key` from a flat solution vector.
    fn unpack(
        &self,
        handle: &crate::field::FieldHandle,
        key: K,
        sol: &[FieldElement],
    ) -> Result<Matrix> {
        let (off, zr, zc) = self.blocks[&key];
        Matrix::from_vec_rm(handle, zr, zc, sol[off..off + zr * zc].to_vec())
    }
}

/// Requires both representations to live over the same graph.
fn common_graph<'r>(
    a: &'r Representation,
    b: &'r Representation,
) -> Result<&'r Arc<ModGraph>> {
    if Arc::ptr_eq(a.graph(), b.graph()) || a.graph().name() == b.graph().name() {
        Ok(a.graph())
    } else {
        Err(Error::HandleMismatch(
            "representations live over different graphs".into(),
        ))
    }
}

/// A basis of the space of homomorphisms `A → B`.
///
/// Each basis element is a family of base-field matrices, one per vertex,
/// that are linear over the vertex fields and commute with all structure
/// maps.  `dim()` is the dimension over the base field.
#[derive(Clone, Debug)]
pub struct HomSpace {
    pub basis: Vec<Vec<Matrix>>,
}

impl HomSpace {
    pub fn dim(&self) -> usize {
        self.basis.len()
    }
}

/// Computes `Hom(A, B)` as an exact kernel over the base field.
pub fn hom_space(a: &Representation, b: &Representation) -> Result<HomSpace> {
    let graph = common_graph(a, b)?.clone();
    let base = graph.base();
    let n = graph.n();
    let mut sys: LinearSystem<usize> = LinearSystem::new();
    for i in 0..n {
        sys.add_block(i, b.base_dim(i), a.base_dim(i));
    }
    // Linearity over each vertex field: G_B·h = h·G_A.
    for i in 0..n {
        let ga = a.gen_action(i);
        let gb = b.gen_action(i);
        let mut eq = sys.equation(base, b.base_dim(i), a.base_dim(i));
        sys.add_term(&mut eq, i, &gb, &Matrix::identity(base, a.base_dim(i)), 1);
        sys.add_term(&mut eq, i, &Matrix::identity(base, b.base_dim(i)), &ga, -1);
        sys.push(eq);
    }
    // Commutation with every structure map: h_j·X^A = X^B·(id ⊗ h_i).
    for &(u, v) in graph.edges() {
        for (j, i) in [(u, v), (v, u)] {
            let xa = a.map(j, i).expect("adjacent");
            let xb = b.map(j, i).expect("adjacent");
            let ta = a.arrow_space(j, i).expect("adjacent");
            let tb = b.arrow_space(j, i).expect("adjacent");
            let mut eq = sys.equation(base, b.base_dim(j), ta.dim());
            sys.add_term(&mut eq, j, &Matrix::identity(base, b.base_dim(j)), xa, 1);
            // X^B·(id ⊗ h_i) = Σ_a (X^B·pure_left(e_a)) · h_i · section-rows(a).
            let m = ta.mdim();
            for s in 0..m {
                let mut ea = vec![base.zero(); m];
                ea[s] = base.one();
                let pb = xb.mul(&tb.pure_left(&ea)?)?;
                let sa = section_rows(ta, s, a.base_dim(i));
                sys.add_term(&mut eq, i, &pb, &sa, -1);
            }
            sys.push(eq);
        }
    }
    let kernel = sys.solve_kernel(base)?;
    let mut basis = Vec::with_capacity(kernel.ncols());
    for k in 0..kernel.ncols() {
        let sol = kernel.col(k);
        let mut fam = Vec::with_capacity(n);
        for i in 0..n {
            fam.push(sys.unpack(base, i, &sol)?);
        }
        basis.push(fam);
    }
    Ok(HomSpace { basis })
}

/// Rows `s·w .. (s+1)·w` of the section of `t`: the matrix of
/// `T → W` reading off the `W`-component at base slot `s` of `M`.
fn section_rows(t: &crate::tensor::TensorSpace, s: usize, w: usize) -> Matrix {
    let rows: Vec<usize> = (s * w..(s + 1) * w).collect();
    let cols: Vec<usize> = (0..t.dim()).collect();
    t.section().submatrix(&rows, &cols)
}

/// A cocycle describing an extension of `A` (quotient) by `B` (sub): one
/// block per arrow `(j, i)` with `dim_base(B_j)` rows and
/// `A.arrow_space(j, i).dim()` columns.
#[derive(Clone, Debug)]
pub struct ExtCocycle {
    pub blocks: BTreeMap<(usize, usize), Matrix>,
}

impl ExtCocycle {
    /// The zero cocycle (yielding the direct sum).
    pub fn zero(quotient: &Representation, sub: &Representation) -> Result<ExtCocycle> {
        let graph = common_graph(quotient, sub)?.clone();
        let base = graph.base();
        let mut blocks = BTreeMap::new();
        for &(u, v) in graph.edges() {
            for (j, i) in [(u, v), (v, u)] {
                let cols = quotient.arrow_space(j, i).expect("adjacent").dim();
                blocks.insert((j, i), Matrix::zero(base, sub.base_dim(j), cols));
            }
        }
        Ok(ExtCocycle { blocks })
    }

    /// Linear combination `Σ coeff·class` of cocycles.
    pub fn combine(classes: &[ExtCocycle], coeffs: &[FieldElement]) -> Result<ExtCocycle> {
        let first = classes
            .first()
            .ok_or_else(|| Error::ShapeMismatch("empty cocycle combination".into()))?;
        if classes.len() != coeffs.len() {
            return Err(Error::ShapeMismatch(
                "coefficient count differs from class count".into(),
            ));
        }
        let mut blocks = BTreeMap::new();
        for key in first.blocks.keys() {
            let mut acc = first.blocks[key].scale(&coeffs[0]);
            for (cls, cf) in classes.iter().zip(coeffs).skip(1) {
                acc = acc.add(&cls.blocks[key].scale(cf))?;
            }
            blocks.insert(*key, acc);
        }
        Ok(ExtCocycle { blocks })
    }

    fn flatten(&self) -> Vec<FieldElement> {
        let mut out = Vec::new();
        for m in self.blocks.values() {
            out.extend(m.vec_rm());
        }
        out
    }
}

/// The space `Ext¹(A, B)` of equivalence classes of extensions
/// `0 → B → E → A → 0`.
#[derive(Clone, Debug)]
pub struct ExtSpace {
    /// Base-field dimension of the space of cocycles.
    pub cocycle_dim: usize,
    /// Base-field dimension of the space of coboundaries.
    pub coboundary_dim: usize,
    /// Base-field dimension of the space of per-vertex linear families
    /// `κ_i: A_i → B_i` that generate the coboundaries (its quotient by the
    /// coboundaries is `Hom(A, B)`).
    pub splitting_dim: usize,
    /// Cocycles representing a basis of `Ext¹(A, B)`.
    pub classes: Vec<ExtCocycle>,
}

impl ExtSpace {
    /// Base-field dimension of `Ext¹(A, B)`.
    pub fn dim(&self) -> usize {
        self.classes.len()
    }
}

/// Computes `Ext¹(A, B)`: cocycles are per-arrow blocks `z[j ← i]` such
/// that the glued maps `[[X^B, z], [0, X^A]]` are linear over the target
/// vertex fields and satisfy the preprojective relations; coboundaries come
/// from changes of the splitting `V^E = B ⊕ A`.
pub fn ext1_space(a: &Representation, b: &Representation) -> Result<ExtSpace> {
    let graph = common_graph(a, b)?.clone();
    let base = graph.base();
    let n = graph.n();
    let mut sys: LinearSystem<(usize, usize)> = LinearSystem::new();
    let mut arrows = Vec::new();
    for &(u, v) in graph.edges() {
        for (j, i) in [(u, v), (v, u)] {
            arrows.push((j, i));
        }
    }
    arrows.sort_unstable();
    for &(j, i) in &arrows {
        let cols = a.arrow_space(j, i).expect("adjacent").dim();
        sys.add_block((j, i), b.base_dim(j), cols);
    }
    // Linearity of the glued map over F_j, restricted to the new block:
    // G_j^B·z = z·Λ^A.
    for &(j, i) in &arrows {
        let ta = a.arrow_space(j, i).expect("adjacent");
        let bim = graph.bimodule(j, i).expect("adjacent");
        let lam = ta.induced_left(&bim.left_gen)?;
        let gb = b.gen_action(j);
        let mut eq = sys.equation(base, b.base_dim(j), ta.dim());
        sys.add_term(&mut eq, (j, i), &gb, &Matrix::identity(base, ta.dim()), 1);
        sys.add_term(
            &mut eq,
            (j, i),
            &Matrix::identity(base, b.base_dim(j)),
            &lam,
            -1,
        );
        sys.push(eq);
    }
    // The relation at each vertex, restricted to the (B-rows, A-columns)
    // block of the glued representation.
    for i in 0..n {
        let neighbors = graph.neighbors(i);
        if neighbors.is_empty() {
            continue;
        }
        let ta_out = tilde(a, i)?;
        let mut eq = sys.equation(base, b.base_dim(i), a.base_dim(i));
        let mut offset = 0;
        for &j in &neighbors {
            let canonical = graph.canonical_element(i, j).expect("adjacent");
            let up_b = b.arrow_space(i, j).expect("adjacent");
            let dom_a = a.arrow_space(j, i).expect("adjacent");
            let xb_ij = b.map(i, j).expect("adjacent");
            for (vk, vk_dual) in &canonical.terms {
                let p = xb_ij.mul(&up_b.pure_left(vk)?)?;
                let s = dom_a.pure_left(vk_dual)?;
                sys.add_term(&mut eq, (j, i), &p, &s, 1);
            }
            // z[i ← j] composed with the j-block of the map out of A_i.
            let block_rows = ta_out
                .blocks
                .iter()
                .find(|&&(jj, _)| jj == j)
                .map(|&(_, d)| d)
                .expect("neighbour block");
            let rows: Vec<usize> = (offset..offset + block_rows).collect();
            let cols: Vec<usize> = (0..a.base_dim(i)).collect();
            let s = ta_out.xtilde.submatrix(&rows, &cols);
            sys.add_term(
                &mut eq,
                (i, j),
                &Matrix::identity(base, b.base_dim(i)),
                &s,
                1,
            );
            offset += block_rows;
        }
        sys.push(eq);
    }
    let kernel = sys.solve_kernel(base)?;
    let cocycle_dim = kernel.ncols();

    // Coboundaries: for each per-vertex family κ of F_i-linear maps
    // A_i → B_i (no commutation required), the cocycle
    // z_κ[j ← i] = X^B·(id ⊗ κ_i) − κ_j·X^A.
    let mut kappa_sys: LinearSystem<usize> = LinearSystem::new();
    for i in 0..n {
        kappa_sys.add_block(i, b.base_dim(i), a.base_dim(i));
    }
    for i in 0..n {
        let ga = a.gen_action(i);
        let gb = b.gen_action(i);
        let mut eq = kappa_sys.equation(base, b.base_dim(i), a.base_dim(i));
        kappa_sys.add_term(&mut eq, i, &gb, &Matrix::identity(base, a.base_dim(i)), 1);
        kappa_sys.add_term(&mut eq, i, &Matrix::identity(base, b.base_dim(i)), &ga, -1);
        kappa_sys.push(eq);
    }
    let kappa_kernel = kappa_sys.solve_kernel(base)?;
    let splitting_dim = kappa_kernel.ncols();
    let mut boundary_span = RowSpace::new(base, sys.total);
    for k in 0..kappa_kernel.ncols() {
        let sol = kappa_kernel.col(k);
        let mut kappa = Vec::with_capacity(n);
        for i in 0..n {
            kappa.push(kappa_sys.unpack(base, i, &sol)?);
        }
        let mut blocks = BTreeMap::new();
        for &(j, i) in &arrows {
            let ta = a.arrow_space(j, i).expect("adjacent");
            let tb = b.arrow_space(j, i).expect("adjacent");
            let xa = a.map(j, i).expect("adjacent");
            let xb = b.map(j, i).expect("adjacent");
            let lifted = ta.map_right(tb, &kappa[i])?;
            let zk = xb.mul(&lifted)?.sub(&kappa[j].mul(xa)?)?;
            blocks.insert((j, i), zk);
        }
        boundary_span.insert(&ExtCocycle { blocks }.flatten());
    }
    let coboundary_dim = boundary_span.dim();

    // Pick kernel vectors that are independent modulo coboundaries.
    let mut span = boundary_span.clone();
    let mut classes = Vec::new();
    for k in 0..cocycle_dim {
        let sol = kernel.col(k);
        if span.insert(&sol) {
            let mut blocks = BTreeMap::new();
            for &(j, i) in &arrows {
                blocks.insert((j, i), sys.unpack(base, (j, i), &sol)?);
            }
            classes.push(ExtCocycle { blocks });
        }
    }
    debug_assert_eq!(classes.len(), cocycle_dim - coboundary_dim);
    Ok(ExtSpace {
        cocycle_dim,
        coboundary_dim,
        splitting_dim,
        classes,
    })
}

/// Glues an extension `0 → B → E → A → 0` from a cocycle: the carrier at
/// each vertex is `B_i ⊕ A_i` (sub first) and each structure map is
/// `[[X^B, z], [0, X^A]]` in the canonical coordinates of the glued domain.
pub fn assemble_extension(
    a: &Representation,
    b: &Representation,
    z: &ExtCocycle,
) -> Result<Representation> {
    let graph = common_graph(a, b)?.clone();
    let base = graph.base();
    let dims: Vec<usize> = (0..graph.n()).map(|i| b.dim(i) + a.dim(i)).collect();
    let mut maps = BTreeMap::new();
    for &(u, v) in graph.edges() {
        for (j, i) in [(u, v), (v, u)] {
            let ta = a.arrow_space(j, i).expect("adjacent");
            let xb = b.map(j, i).expect("adjacent");
            let xa = a.map(j, i).expect("adjacent");
            let zk = z
                .blocks
                .get(&(j, i))
                .ok_or_else(|| Error::ShapeMismatch("cocycle block missing".into()))?;
            if zk.nrows() != b.base_dim(j) || zk.ncols() != ta.dim() {
                return Err(Error::ShapeMismatch(
                    "cocycle block has the wrong shape".into(),
                ));
            }
            let wb = b.base_dim(i);
            let wa = a.base_dim(i);
            let reps = ta.reps().len();
            let rows = b.base_dim(j) + a.base_dim(j);
            let mut e = Matrix::zero(base, rows, reps * (wb + wa));
            for r in 0..reps {
                for beta in 0..wb {
                    let src = r * wb + beta;
                    let dst = r * (wb + wa) + beta;
                    for (row, val) in xb.col(src).into_iter().enumerate() {
                        e.set(row, dst, val);
                    }
                }
                for beta in 0..wa {
                    let src = r * wa + beta;
                    let dst = r * (wb + wa) + wb + beta;
                    for (row, val) in zk.col(src).into_iter().enumerate() {
                        e.set(row, dst, val);
                    }
                    for (row, val) in xa.col(src).into_iter().enumerate() {
                        e.set(b.base_dim(j) + row, dst, val);
                    }
                }
            }
            maps.insert((j, i), e);
        }
    }
    Representation::new(graph, dims, maps)
}
