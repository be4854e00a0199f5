//! Modulated graphs: vertex fields joined by bimodules with nondegenerate
//! pairing forms, plus the Cartan data and canonical elements derived from
//! them.
//!
//! Notation used throughout: for adjacent vertices `i`, `j`, the bimodule
//! `bimodule(i, j)` is a left `F_i`-, right `F_j`-space written on a fixed
//! base-field basis; `form(i, j)` is the `F_i`-valued pairing whose first
//! slot is `bimodule(i, j)` and whose second slot is `bimodule(j, i)`, with
//! the interior field `F_j` balanced across the tensor.
//!
//! Forms are stored on the wire as base-valued matrices: entry `(a, b)` is
//! the constant coordinate (coefficient of `gen^0`) of the `F_i`-value of
//! the form on the basis pair `(e_a, e_b)`.  The full `F_i`-valued grid is
//! reconstructed exactly from those scalars; see [`FormData`].

use crate::field::{FieldElement, FieldHandle};
use crate::matrix::Matrix;
use crate::scalar::{BaseElem, BaseField};
use crate::tensor::{satisfies_minpoly, standard_orbit_reps, TensorSpace};
use crate::{Error, Result};
use std::collections::{BTreeMap, BTreeSet};

/// Plain-data description of a modulated graph, ready for validation.
#[derive(Clone, Debug)]
pub struct GraphInput {
    pub name: String,
    pub base: BaseField,
    /// Vertex name plus optional minimal polynomial (full monic coefficient
    /// list, constant first); `None` means the vertex field is the base.
    pub vertices: Vec<(String, Option<Vec<BaseElem>>)>,
    pub edges: Vec<EdgeInput>,
}

#[derive(Clone, Debug)]
pub struct EdgeInput {
    pub u: String,
    pub v: String,
    /// The left-`F_u`, right-`F_v` bimodule.
    pub bimodule_uv: BimoduleInput,
    /// The left-`F_v`, right-`F_u` bimodule.
    pub bimodule_vu: BimoduleInput,
    /// Base-valued wire matrix of the `F_u`-valued form pairing
    /// `bimodule_uv` with `bimodule_vu`.
    pub form_into_u: Vec<Vec<BaseElem>>,
    /// Base-valued wire matrix of the `F_v`-valued form pairing
    /// `bimodule_vu` with `bimodule_uv`.
    pub form_into_v: Vec<Vec<BaseElem>>,
}

#[derive(Clone, Debug)]
pub struct BimoduleInput {
    pub base_dim: usize,
    pub left_gen_action: Vec<Vec<BaseElem>>,
    pub right_gen_action: Vec<Vec<BaseElem>>,
}

/// A validated bimodule attached to an ordered vertex pair `(i, j)`:
/// left `F_i`-action and right `F_j`-action on a base space.
#[derive(Clone, Debug)]
pub struct BimoduleData {
    pub base_dim: usize,
    /// Action of the generator of the left vertex field.
    pub left_gen: Matrix,
    /// Action of the generator of the right vertex field.
    pub right_gen: Matrix,
}

/// A validated pairing form with values in the field of its first vertex.
#[derive(Clone, Debug)]
pub struct FormData {
    /// The field the form maps into.
    field: FieldHandle,
    /// Base-valued wire matrix (constant coordinates of the grid).
    tau: Matrix,
    /// Fully reconstructed `F_i`-valued grid, `m × m`.
    grid: Matrix,
}

impl FormData {
    /// Reconstructs the `F_i`-valued grid from the wire matrix.
    ///
    /// For each basis pair, the coordinates `z` of the value solve
    /// `T·z = w` where `T[s,t]` is the constant coordinate of
    /// `gen^{s+t}` and `w_s = Σ_c L^s[c,a]·tau[c,b]` pushes the generator
    /// across the first slot (`L` = left generator action there).  `T` is
    /// invertible because the pairing `(x, y) ↦ const-coord(x·y)` is
    /// nondegenerate on a field.
    fn assemble(field: &FieldHandle, tau: &Matrix, first_left_gen: &Matrix) -> Result<FormData> {
        let base = field.base_handle();
        let m = tau.nrows();
        if tau.ncols() != m || first_left_gen.nrows() != m {
            return Err(Error::ShapeMismatch("form wire matrix".into()));
        }
        let d = field.degree();
        if d == 1 {
            let grid = tau.promote_scalars(field)?;
            return Ok(FormData {
                field: field.clone(),
                tau: tau.clone(),
                grid,
            });
        }
        // T[s,t] = constant coordinate of gen^{s+t}
        let mut gen_pows = Vec::with_capacity(2 * d - 1);
        gen_pows.push(field.one());
        for k in 1..(2 * d - 1) {
            gen_pows.push(gen_pows[k - 1].mul(&field.gen()));
        }
        let t_mat = Matrix::from_fn(&base, d, d, |s, t| {
            base.from_base(&gen_pows[s + t].coords()[0])
        });
        // right-hand sides: column (a·m + b) holds w for basis pair (a, b)
        let mut l_pows = Vec::with_capacity(d);
        l_pows.push(Matrix::identity(&base, m));
        for s in 1..d {
            l_pows.push(l_pows[s - 1].mul(first_left_gen)?);
        }
        let mut w = Matrix::zero(&base, d, m * m);
        for s in 0..d {
            let lt_tau = l_pows[s].transpose().mul(tau)?;
            for a in 0..m {
                for b in 0..m {
                    w.set(s, a * m + b, lt_tau.get(a, b).clone());
                }
            }
        }
        let t_inv = t_mat
            .inverse()
            .expect("constant-coordinate pairing is nondegenerate on a field");
        let z = t_inv.mul(&w)?;
        let mut grid = Matrix::zero(field, m, m);
        for a in 0..m {
            for b in 0..m {
                let coords: Vec<BaseElem> = (0..d)
                    .map(|s| z.get(s, a * m + b).base_value().clone())
                    .collect();
                grid.set(a, b, field.from_coords(coords)?);
            }
        }
        Ok(FormData {
            field: field.clone(),
            tau: tau.clone(),
            grid,
        })
    }

    pub fn field(&self) -> &FieldHandle {
        &self.field
    }

    pub fn tau(&self) -> &Matrix {
        &self.tau
    }

    pub fn grid(&self) -> &Matrix {
        &self.grid
    }

    pub fn value(&self, a: usize, b: usize) -> &FieldElement {
        self.grid.get(a, b)
    }

    /// Evaluates the form on base-coordinate vectors of the two slots.
    pub fn eval(&self, x: &[FieldElement], y: &[FieldElement]) -> Result<FieldElement> {
        if x.len() != self.grid.nrows() || y.len() != self.grid.ncols() {
            return Err(Error::ShapeMismatch("form evaluation operands".into()));
        }
        let mut acc = self.field.zero();
        for (a, xa) in x.iter().enumerate() {
            if xa.is_zero() {
                continue;
            }
            for (b, yb) in y.iter().enumerate() {
                if yb.is_zero() {
                    continue;
                }
                let scalar = self.field.from_base(xa.base_value()).mul(
                    &self.field.from_base(yb.base_value()),
                );
                acc = acc.add(&scalar.mul(self.grid.get(a, b)));
            }
        }
        Ok(acc)
    }
}

/// A canonical element attached to the ordered pair `(i, j)`: the sum
/// `Σ_k v_k ⊗ v^k` of dual bases, with `v_k` in `bimodule(i, j)` (a right
/// `F_j`-basis) and `v^k` in `bimodule(j, i)`, dual under `form(j, i)`.
#[derive(Clone, Debug)]
pub struct CanonicalElement {
    pub vertex: usize,
    pub neighbor: usize,
    /// Pairs of base-coordinate vectors `(v_k, v^k)`.
    pub terms: Vec<(Vec<FieldElement>, Vec<FieldElement>)>,
}

/// Cartan matrix and symmetrizers derived from a modulated graph.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CartanData {
    /// Integer Cartan matrix `c[i][j]`.
    pub c: Vec<Vec<i64>>,
    /// Symmetrizers: `d[i]` is the degree of the vertex field.
    pub d: Vec<u64>,
}

impl CartanData {
    pub fn n(&self) -> usize {
        self.d.len()
    }

    pub fn simple_root(&self, i: usize) -> Vec<i64> {
        let mut v = vec![0; self.n()];
        v[i] = 1;
        v
    }

    /// `⟨wt, coroot_i⟩ = Σ_j c[i][j]·wt[j]`.
    pub fn coroot_pairing(&self, wt: &[i64], i: usize) -> i64 {
        self.c[i].iter().zip(wt).map(|(&c, &w)| c * w).sum()
    }

    /// The symmetric bilinear form `Σ_{i,j} d_i·c_ij·v_i·w_j`.
    pub fn symmetric_form(&self, v: &[i64], w: &[i64]) -> Result<i64> {
        if v.len() != self.n() || w.len() != self.n() {
            return Err(Error::ShapeMismatch("weight vector length".into()));
        }
        let mut acc: i64 = 0;
        for i in 0..self.n() {
            for j in 0..self.n() {
                acc += (self.d[i] as i64) * self.c[i][j] * v[i] * w[j];
            }
        }
        Ok(acc)
    }

    /// Finite type means the symmetrized matrix `d_i·c_ij` is positive
    /// definite (all leading principal minors positive).
    pub fn is_finite_type(&self) -> bool {
        let n = self.n();
        let base = FieldHandle::base(BaseField::Rationals).expect("rationals are a field");
        let m = Matrix::from_fn(&base, n, n, |i, j| {
            base.from_i64(self.d[i] as i64 * self.c[i][j])
        });
        for k in 1..=n {
            let idx: Vec<usize> = (0..k).collect();
            let det = m
                .submatrix(&idx, &idx)
                .determinant()
                .expect("square by construction");
            let zero = base.zero();
            // positive test: det > 0 over the rationals
            let is_positive = !det.is_zero() && {
                match det.base_value() {
                    BaseElem::Rat(q) => q > &num::BigRational::from_integer(0.into()),
                    BaseElem::Mod(_) => unreachable!("rational matrix"),
                }
            };
            let _ = zero;
            if !is_positive {
                return false;
            }
        }
        true
    }
}

/// A validated modulated graph with all derived data precomputed.
#[derive(Debug)]
pub struct ModGraph {
    name: String,
    base: FieldHandle,
    vertex_names: Vec<String>,
    fields: Vec<FieldHandle>,
    edges: Vec<(usize, usize)>,
    bimodules: BTreeMap<(usize, usize), BimoduleData>,
    forms: BTreeMap<(usize, usize), FormData>,
    canonical: BTreeMap<(usize, usize), CanonicalElement>,
    cartan: CartanData,
}

impl ModGraph {
    pub fn validate(input: &GraphInput) -> Result<ModGraph> {
        input.base.validate()?;
        let base = FieldHandle::base(input.base)?;

        // vertices
        let mut vertex_names = Vec::new();
        let mut fields = Vec::new();
        let mut index: BTreeMap<String, usize> = BTreeMap::new();
        for (name, minpoly) in &input.vertices {
            if index.contains_key(name) {
                return Err(Error::InvalidGraph(format!("duplicate vertex '{name}'")));
            }
            index.insert(name.clone(), vertex_names.len());
            vertex_names.push(name.clone());
            let f = match minpoly {
                None => base.clone(),
                Some(full) => FieldHandle::extension(input.base, full)?,
            };
            fields.push(f);
        }
        if vertex_names.is_empty() {
            return Err(Error::InvalidGraph("graph has no vertices".into()));
        }

        // edges and bimodules
        let mut edges = Vec::new();
        let mut seen: BTreeSet<(usize, usize)> = BTreeSet::new();
        let mut bimodules = BTreeMap::new();
        let mut forms = BTreeMap::new();
        for e in &input.edges {
            let u = *index
                .get(&e.u)
                .ok_or_else(|| Error::InvalidGraph(format!("unknown vertex '{}'", e.u)))?;
            let v = *index
                .get(&e.v)
                .ok_or_else(|| Error::InvalidGraph(format!("unknown vertex '{}'", e.v)))?;
            if u == v {
                return Err(Error::InvalidGraph(format!("self-loop at '{}'", e.u)));
            }
            let key = (u.min(v), u.max(v));
            if !seen.insert(key) {
                return Err(Error::InvalidGraph(format!(
                    "multiple edges between '{}' and '{}'",
                    e.u, e.v
                )));
            }
            edges.push(key);

            let buv = build_bimodule(&base, &fields[u], &fields[v], &e.bimodule_uv, &e.u, &e.v)?;
            let bvu = build_bimodule(&base, &fields[v], &fields[u], &e.bimodule_vu, &e.v, &e.u)?;
            if buv.base_dim != bvu.base_dim {
                return Err(Error::InvalidGraph(format!(
                    "opposite bimodules on edge ({}, {}) have different base dimensions",
                    e.u, e.v
                )));
            }
            let m = buv.base_dim;

            let form_u = build_form(
                &base,
                &fields[u],
                &e.form_into_u,
                m,
                &buv,
                &bvu,
                &fields[v],
                &e.u,
                &e.v,
            )?;
            let form_v = build_form(
                &base,
                &fields[v],
                &e.form_into_v,
                m,
                &bvu,
                &buv,
                &fields[u],
                &e.v,
                &e.u,
            )?;

            bimodules.insert((u, v), buv);
            bimodules.insert((v, u), bvu);
            forms.insert((u, v), form_u);
            forms.insert((v, u), form_v);
        }

        // Cartan data
        let n = vertex_names.len();
        let mut c = vec![vec![0i64; n]; n];
        let d: Vec<u64> = fields.iter().map(|f| f.degree() as u64).collect();
        for i in 0..n {
            c[i][i] = 2;
        }
        for &(u, v) in &edges {
            let m = bimodules[&(u, v)].base_dim as i64;
            c[u][v] = -(m / d[u] as i64);
            c[v][u] = -(m / d[v] as i64);
        }
        for i in 0..n {
            for j in 0..n {
                if d[i] as i64 * c[i][j] != d[j] as i64 * c[j][i] {
                    return Err(Error::InvalidGraph(
                        "Cartan data is not symmetrizable".into(),
                    ));
                }
            }
        }
        let cartan = CartanData { c, d };

        let mut graph = ModGraph {
            name: input.name.clone(),
            base,
            vertex_names,
            fields,
            edges,
            bimodules,
            forms,
            canonical: BTreeMap::new(),
            cartan,
        };

        // canonical elements for every ordered adjacent pair
        let pairs: Vec<(usize, usize)> = graph
            .edges
            .iter()
            .flat_map(|&(u, v)| [(u, v), (v, u)])
            .collect();
        for (i, j) in pairs {
            let ce = graph.compute_canonical(i, j)?;
            graph.canonical.insert((i, j), ce);
        }
        Ok(graph)
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn n(&self) -> usize {
        self.vertex_names.len()
    }

    pub fn base(&self) -> &FieldHandle {
        &self.base
    }

    pub fn field(&self, i: usize) -> &FieldHandle {
        &self.fields[i]
    }

    pub fn degree(&self, i: usize) -> usize {
        self.fields[i].degree()
    }

    pub fn vertex_name(&self, i: usize) -> &str {
        &self.vertex_names[i]
    }

    pub fn vertex_index(&self, name: &str) -> Option<usize> {
        self.vertex_names.iter().position(|n| n == name)
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn neighbors(&self, i: usize) -> Vec<usize> {
        let mut out: Vec<usize> = self
            .edges
            .iter()
            .filter_map(|&(u, v)| {
                if u == i {
                    Some(v)
                } else if v == i {
                    Some(u)
                } else {
                    None
                }
            })
            .collect();
        out.sort_unstable();
        out
    }

    pub fn adjacent(&self, i: usize, j: usize) -> bool {
        self.bimodules.contains_key(&(i, j))
    }

    /// The left-`F_i`, right-`F_j` bimodule of an edge.
    pub fn bimodule(&self, i: usize, j: usize) -> Option<&BimoduleData> {
        self.bimodules.get(&(i, j))
    }

    /// The `F_i`-valued form pairing `bimodule(i, j)` with `bimodule(j, i)`.
    pub fn form(&self, i: usize, j: usize) -> Option<&FormData> {
        self.forms.get(&(i, j))
    }

    /// The canonical element for the ordered pair `(i, j)`; see
    /// [`CanonicalElement`].
    pub fn canonical_element(&self, i: usize, j: usize) -> Option<&CanonicalElement> {
        self.canonical.get(&(i, j))
    }

    pub fn cartan(&self) -> &CartanData {
        &self.cartan
    }

    /// The tensor space `bimodule(i,j) ⊗_{F_j} bimodule(j,i)` housing the
    /// canonical element of `(i, j)`, together with that element's
    /// coordinates in it.
    pub fn canonical_tensor(&self, i: usize, j: usize) -> Result<(TensorSpace, Vec<FieldElement>)> {
        let bij = self
            .bimodule(i, j)
            .ok_or_else(|| Error::InvalidGraph("not adjacent".into()))?;
        let bji = self.bimodule(j, i).expect("edges carry both bimodules");
        let space = TensorSpace::new(&self.fields[j], &bij.right_gen, &bji.left_gen)?;
        let ce = self
            .canonical_element(i, j)
            .expect("canonical elements are precomputed");
        let mut flat = vec![self.base.zero(); space.dim()];
        for (vk, vk_dual) in &ce.terms {
            let p = space.pure(vk, vk_dual)?;
            for (q, x) in flat.iter_mut().zip(&p) {
                *q = q.add(x);
            }
        }
        Ok((space, flat))
    }

    fn compute_canonical(&self, i: usize, j: usize) -> Result<CanonicalElement> {
        let bij = &self.bimodules[&(i, j)];
        let bji = &self.bimodules[&(j, i)];
        let form = &self.forms[&(j, i)]; // F_j-valued, first slot bimodule(j,i)
        let fj = &self.fields[j];
        let dj = fj.degree();
        let m = bij.base_dim;

        // v_k: right-F_j standard-basis representatives in bimodule(i, j)
        let (v_reps, _) = standard_orbit_reps(&bij.right_gen, dj)?;
        // u_s: left-F_j standard-basis representatives in bimodule(j, i)
        let (u_reps, _) = standard_orbit_reps(&bji.left_gen, dj)?;
        let nb = v_reps.len();
        debug_assert_eq!(u_reps.len(), nb);

        // Gram over F_j and its inverse
        let gram = Matrix::from_fn(fj, nb, nb, |s, k| {
            form.value(u_reps[s], v_reps[k]).clone()
        });
        let c = gram.inverse().map_err(|_| {
            Error::DegenerateForm(self.vertex_names[j].clone(), self.vertex_names[i].clone())
        })?;

        // left powers of the generator on bimodule(j, i)
        let mut l_pows = Vec::with_capacity(dj);
        l_pows.push(Matrix::identity(&self.base, m));
        for t in 1..dj {
            l_pows.push(l_pows[t - 1].mul(&bji.left_gen)?);
        }

        let mut terms = Vec::with_capacity(nb);
        for k in 0..nb {
            let mut vk = vec![self.base.zero(); m];
            vk[v_reps[k]] = self.base.one();
            // v^k = Σ_s c[k,s]·u_s with the F_j-coefficient acting on the left
            let mut dual = vec![self.base.zero(); m];
            for (s, &us) in u_reps.iter().enumerate() {
                let coeff = c.get(k, s);
                if coeff.is_zero() {
                    continue;
                }
                for (t, ct) in coeff.coords().iter().enumerate() {
                    let col = l_pows[t].col(us);
                    for (dst, x) in dual.iter_mut().zip(&col) {
                        let scaled = x.mul(&self.base.from_base(ct));
                        *dst = dst.add(&scaled);
                    }
                }
            }
            terms.push((std::mem::take(&mut vk), dual));
        }

        // dual-basis property: form(j,i)(v^l ⊗ v_k) = δ_lk
        for (l, (_, dual_l)) in terms.iter().enumerate() {
            for (k, (vk, _)) in terms.iter().enumerate() {
                let val = form.eval(dual_l, vk)?;
                let expected = if l == k { fj.one() } else { fj.zero() };
                if val != expected {
                    return Err(Error::DegenerateForm(
                        self.vertex_names[j].clone(),
                        self.vertex_names[i].clone(),
                    ));
                }
            }
        }

        Ok(CanonicalElement {
            vertex: i,
            neighbor: j,
            terms,
        })
    }
}

fn to_matrix(
    base: &FieldHandle,
    rows: &[Vec<BaseElem>],
    expect_rows: usize,
    expect_cols: usize,
    what: &str,
) -> Result<Matrix> {
    if rows.len() != expect_rows || rows.iter().any(|r| r.len() != expect_cols) {
        return Err(Error::ShapeMismatch(format!(
            "{what}: expected {expect_rows}x{expect_cols}"
        )));
    }
    Ok(Matrix::from_fn(base, expect_rows, expect_cols, |r, c| {
        base.from_base(&rows[r][c])
    }))
}

fn build_bimodule(
    base: &FieldHandle,
    left_field: &FieldHandle,
    right_field: &FieldHandle,
    input: &BimoduleInput,
    left_name: &str,
    right_name: &str,
) -> Result<BimoduleData> {
    let m = input.base_dim;
    if m == 0 {
        return Err(Error::NotABimodule(format!(
            "bimodule on ({left_name}, {right_name}) has dimension zero"
        )));
    }
    let left = to_matrix(base, &input.left_gen_action, m, m, "left generator action")?;
    let right = to_matrix(base, &input.right_gen_action, m, m, "right generator action")?;
    if left.mul(&right)? != right.mul(&left)? {
        return Err(Error::NotABimodule(format!(
            "left and right actions on ({left_name}, {right_name}) do not commute"
        )));
    }
    if !satisfies_minpoly(left_field, &left) {
        return Err(Error::NotABimodule(format!(
            "left action on ({left_name}, {right_name}) does not satisfy the vertex field's minimal polynomial"
        )));
    }
    if !satisfies_minpoly(right_field, &right) {
        return Err(Error::NotABimodule(format!(
            "right action on ({left_name}, {right_name}) does not satisfy the vertex field's minimal polynomial"
        )));
    }
    if !m.is_multiple_of(left_field.degree()) || !m.is_multiple_of(right_field.degree()) {
        return Err(Error::NotABimodule(format!(
            "dimension of ({left_name}, {right_name}) is not divisible by the vertex field degrees"
        )));
    }
    Ok(BimoduleData {
        base_dim: m,
        left_gen: left,
        right_gen: right,
    })
}

#[allow(clippy::too_many_arguments)]
fn build_form(
    base: &FieldHandle,
    field_u: &FieldHandle,
    wire: &[Vec<BaseElem>],
    m: usize,
    first_slot: &BimoduleData,  // bimodule(u, v)
    second_slot: &BimoduleData, // bimodule(v, u)
    field_v: &FieldHandle,
    u_name: &str,
    v_name: &str,
) -> Result<FormData> {
    let tau = to_matrix(base, wire, m, m, "form wire matrix")?;
    let form = FormData::assemble(field_u, &tau, &first_slot.left_gen)?;
    let e = form.grid();
    let gen_u = field_u.gen();

    // first-slot F_u-linearity: form(gen·x, y) = gen·form(x, y)
    let lu = first_slot.left_gen.promote_scalars(field_u)?;
    if lu.transpose().mul(e)? != e.scale(&gen_u) {
        return Err(Error::InvalidGraph(format!(
            "form into {u_name} on edge ({u_name}, {v_name}) is not linear in its first slot"
        )));
    }
    // second-slot F_u-linearity: form(x, y·gen) = form(x, y)·gen
    let ru = second_slot.right_gen.promote_scalars(field_u)?;
    if e.mul(&ru)? != e.scale(&gen_u) {
        return Err(Error::InvalidGraph(format!(
            "form into {u_name} on edge ({u_name}, {v_name}) is not linear in its second slot"
        )));
    }
    // F_v-balance: form(x·gen_v, y) = form(x, gen_v·y)
    let rv = first_slot.right_gen.promote_scalars(field_u)?;
    let lv = second_slot.left_gen.promote_scalars(field_u)?;
    if rv.transpose().mul(e)? != e.mul(&lv)? {
        return Err(Error::InvalidGraph(format!(
            "form into {u_name} on edge ({u_name}, {v_name}) is not balanced over the field of {v_name}"
        )));
    }

    // nondegeneracy: Gram on field-level bases is invertible
    let (rows, _) = standard_orbit_reps(&first_slot.left_gen, field_u.degree())?;
    let (cols, _) = standard_orbit_reps(&second_slot.right_gen, field_u.degree())?;
    if rows.len() != cols.len() {
        return Err(Error::DegenerateForm(u_name.to_string(), v_name.to_string()));
    }
    let gram = Matrix::from_fn(field_u, rows.len(), cols.len(), |s, k| {
        form.value(rows[s], cols[k]).clone()
    });
    if gram.inverse().is_err() {
        return Err(Error::DegenerateForm(u_name.to_string(), v_name.to_string()));
    }
    let _ = field_v;
    Ok(form)
}

#[cfg(test)]
pub(crate) mod testdata {
    use super::*;

    pub fn ints(base: BaseField, rows: &[&[i64]]) -> Vec<Vec<BaseElem>> {
        rows.iter()
            .map(|r| r.iter().map(|&n| base.from_i64(n)).collect())
            .collect()
    }

    /// Rank-2 graph with a degree-1 and a degree-2 vertex field: the
    /// degree-2 field acts on both 2-dimensional bimodules by its regular
    /// representation, and the forms have wire matrices diag(1, −1).
    pub fn c2_input() -> GraphInput {
        let q = BaseField::Rationals;
        let j = ints(q, &[&[0, -1], &[1, 0]]);
        let id = ints(q, &[&[1, 0], &[0, 1]]);
        let form = ints(q, &[&[1, 0], &[0, -1]]);
        GraphInput {
            name: "c2".into(),
            base: q,
            vertices: vec![
                ("1".into(), None),
                ("2".into(), Some(vec![q.from_i64(1), q.from_i64(0), q.from_i64(1)])),
            ],
            edges: vec![EdgeInput {
                u: "1".into(),
                v: "2".into(),
                bimodule_uv: BimoduleInput {
                    base_dim: 2,
                    left_gen_action: id.clone(),
                    right_gen_action: j.clone(),
                },
                bimodule_vu: BimoduleInput {
                    base_dim: 2,
                    left_gen_action: j,
                    right_gen_action: id,
                },
                form_into_u: form.clone(),
                form_into_v: form,
            }],
        }
    }

    /// Two vertices, both with the base field, joined by 2-dimensional
    /// bimodules; the form into vertex 2 is deformed by a parameter z.
    pub fn sl2hat_input(z: i64) -> GraphInput {
        let q = BaseField::Rationals;
        let id = ints(q, &[&[1, 0], &[0, 1]]);
        GraphInput {
            name: "sl2hat-z".into(),
            base: q,
            vertices: vec![("1".into(), None), ("2".into(), None)],
            edges: vec![EdgeInput {
                u: "1".into(),
                v: "2".into(),
                bimodule_uv: BimoduleInput {
                    base_dim: 2,
                    left_gen_action: id.clone(),
                    right_gen_action: id.clone(),
                },
                bimodule_vu: BimoduleInput {
                    base_dim: 2,
                    left_gen_action: id.clone(),
                    right_gen_action: id,
                },
                form_into_u: ints(q, &[&[1, 0], &[0, 1]]),
                form_into_v: ints(q, &[&[z, 0], &[0, -1]]),
            }],
        }
    }

    pub fn a1xa1_input() -> GraphInput {
        GraphInput {
            name: "a1xa1".into(),
            base: BaseField::Rationals,
            vertices: vec![("1".into(), None), ("2".into(), None)],
            edges: vec![],
        }
    }
}

#[cfg(test)]
mod tests {
    use super::testdata::*;
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn c2_cartan_matrix() {
        let g = ModGraph::validate(&c2_input()).unwrap();
        assert_eq!(g.cartan().c, vec![vec![2, -2], vec![-1, 2]]);
        assert_eq!(g.cartan().d, vec![1, 2]);
        assert!(g.cartan().is_finite_type());
    }

    #[test]
    fn sl2hat_cartan_matrix() {
        let g = ModGraph::validate(&sl2hat_input(1)).unwrap();
        assert_eq!(g.cartan().c, vec![vec![2, -2], vec![-2, 2]]);
        assert_eq!(g.cartan().d, vec![1, 1]);
        assert!(!g.cartan().is_finite_type());
    }

    #[test]
    fn edgeless_cartan_matrix() {
        let g = ModGraph::validate(&a1xa1_input()).unwrap();
        assert_eq!(g.cartan().c, vec![vec![2, 0], vec![0, 2]]);
        assert!(g.cartan().is_finite_type());
    }

    #[test]
    fn c2_canonical_elements() {
        let g = ModGraph::validate(&c2_input()).unwrap();
        let base = g.base().clone();
        let e0 = vec![base.from_i64(1), base.from_i64(0)];
        let e1 = vec![base.from_i64(0), base.from_i64(1)];

        // pair (1,2): a single term e0 ⊗ e0 (interior field has degree 2)
        let r12 = g.canonical_element(0, 1).unwrap();
        assert_eq!(r12.terms.len(), 1);
        assert_eq!(r12.terms[0].0, e0);
        assert_eq!(r12.terms[0].1, e0);

        // pair (2,1): e0 ⊗ e0 − e1 ⊗ e1
        let r21 = g.canonical_element(1, 0).unwrap();
        assert_eq!(r21.terms.len(), 2);
        assert_eq!(r21.terms[0].0, e0);
        assert_eq!(r21.terms[0].1, e0);
        assert_eq!(r21.terms[1].0, e1);
        let neg_e1 = vec![base.from_i64(0), base.from_i64(-1)];
        assert_eq!(r21.terms[1].1, neg_e1);
    }

    fn check_centrality(g: &ModGraph, i: usize, j: usize) {
        let (space, flat) = g.canonical_tensor(i, j).unwrap();
        let li = &g.bimodule(i, j).unwrap().left_gen;
        let ri = &g.bimodule(j, i).unwrap().right_gen;
        let left = space.induced_left(li).unwrap().apply(&flat).unwrap();
        let right = space.map_right(&space, ri).unwrap().apply(&flat).unwrap();
        assert_eq!(left, right, "canonical element of ({i},{j}) is not central");
    }

    #[test]
    fn canonical_elements_are_central() {
        for input in [c2_input(), sl2hat_input(1), sl2hat_input(-1), sl2hat_input(5)] {
            let g = ModGraph::validate(&input).unwrap();
            for &(u, v) in g.edges().to_vec().iter() {
                check_centrality(&g, u, v);
                check_centrality(&g, v, u);
            }
        }
    }

    /// The canonical element must not depend on which dual bases are used:
    /// transform the stored basis by a random invertible matrix over the
    /// interior field and compare the resulting tensors.
    #[test]
    fn canonical_element_basis_independence() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(23);
        for input in [c2_input(), sl2hat_input(1), sl2hat_input(-3)] {
            let g = ModGraph::validate(&input).unwrap();
            for &(u, v) in g.edges().to_vec().iter() {
                for (i, j) in [(u, v), (v, u)] {
                    let fj = g.field(j).clone();
                    let ce = g.canonical_element(i, j).unwrap();
                    let nb = ce.terms.len();
                    let (space, flat) = g.canonical_tensor(i, j).unwrap();

                    // random invertible F_j matrix
                    let a = loop {
                        let cand = Matrix::from_fn(&fj, nb, nb, |_, _| {
                            let coords: Vec<BaseElem> = (0..fj.degree())
                                .map(|_| fj.base_field().from_i64(rng.gen_range(-3..=3)))
                                .collect();
                            fj.from_coords(coords).unwrap()
                        });
                        if cand.inverse().is_ok() {
                            break cand;
                        }
                    };
                    let a_inv = a.inverse().unwrap();

                    // w_k = Σ_l v_l·a[l,k] (right action), dual
                    // w^k = Σ_l a_inv[k,l]·v^l (left action)
                    let bij = g.bimodule(i, j).unwrap();
                    let bji = g.bimodule(j, i).unwrap();
                    let m = bij.base_dim;
                    let base = g.base().clone();
                    let right_of = |e: &FieldElement, mat: &Matrix| -> Matrix {
                        // action of the interior-field element e via `mat` powers
                        let mut acc = Matrix::zero(&base, m, m);
                        let mut pow = Matrix::identity(&base, m);
                        for t in 0..fj.degree() {
                            let c = base.from_base(&e.coords()[t]);
                            acc = acc.add(&pow.scale(&c)).unwrap();
                            pow = pow.mul(mat).unwrap();
                        }
                        acc
                    };
                    let mut new_flat = vec![base.zero(); space.dim()];
                    for k in 0..nb {
                        let mut wk = vec![base.zero(); m];
                        let mut wk_dual = vec![base.zero(); m];
                        for l in 0..nb {
                            let act = right_of(a.get(l, k), &bij.right_gen);
                            let part = act.apply(&ce.terms[l].0).unwrap();
                            for (dst, x) in wk.iter_mut().zip(&part) {
                                *dst = dst.add(x);
                            }
                            let act2 = right_of(a_inv.get(k, l), &bji.left_gen);
                            let part2 = act2.apply(&ce.terms[l].1).unwrap();
                            for (dst, x) in wk_dual.iter_mut().zip(&part2) {
                                *dst = dst.add(x);
                            }
                        }
                        let p = space.pure(&wk, &wk_dual).unwrap();
                        for (dst, x) in new_flat.iter_mut().zip(&p) {
                            *dst = dst.add(x);
                        }
                    }
                    assert_eq!(flat, new_flat, "basis dependence at ({i},{j})");
                }
            }
        }
    }

    #[test]
    fn degenerate_form_rejected() {
        let mut input = c2_input();
        input.edges[0].form_into_u = ints(BaseField::Rationals, &[&[0, 0], &[0, 0]]);
        let err = ModGraph::validate(&input).unwrap_err();
        assert!(err.to_string().contains("degenerate form"), "{err}");
    }

    #[test]
    fn non_commuting_actions_rejected() {
        let q = BaseField::Rationals;
        let mut input = sl2hat_input(1);
        // left action that is an involution but does not commute with a
        // right action we also change to a non-identity involution
        input.edges[0].bimodule_uv.left_gen_action = ints(q, &[&[0, 1], &[1, 0]]);
        input.edges[0].bimodule_uv.right_gen_action = ints(q, &[&[1, 0], &[0, -1]]);
        // make the vertex fields accept those actions: x^2 − 1 is reducible,
        // so instead keep fields = base; the actions must then equal the
        // identity, and failing that we must get a bimodule error.
        let err = ModGraph::validate(&input).unwrap_err();
        assert!(err.to_string().contains("not a bimodule"), "{err}");
    }

    #[test]
    fn genuinely_non_commuting_actions_rejected() {
        let q = BaseField::Rationals;
        let mut input = c2_input();
        // right action of the degree-2 field: keep J; left action of the
        // base field must be I, so sneak the failure into commuting check by
        // giving the right action of bimodule_vu (base field side) a matrix
        // that squares to I... the base field generator is 1 so only I is
        // allowed; any other choice trips the minimal-polynomial check,
        // which also reports "not a bimodule".
        input.edges[0].bimodule_vu.right_gen_action = ints(q, &[&[0, 1], &[1, 0]]);
        let err = ModGraph::validate(&input).unwrap_err();
        assert!(err.to_string().contains("not a bimodule"), "{err}");
    }

    #[test]
    fn self_loop_rejected() {
        let mut input = c2_input();
        input.edges[0].v = "1".into();
        let err = ModGraph::validate(&input).unwrap_err();
        assert!(err.to_string().contains("invalid graph"), "{err}");
    }

    #[test]
    fn duplicate_edge_rejected() {
        let mut input = c2_input();
        let dup = input.edges[0].clone();
        input.edges.push(dup);
        let err = ModGraph::validate(&input).unwrap_err();
        assert!(err.to_string().contains("invalid graph"), "{err}");
    }

    #[test]
    fn unbalanced_form_rejected() {
        let mut input = c2_input();
        // diag(1, 1) as the wire matrix for the form into vertex 1 pairs the
        // two bimodules in a way that is not balanced over the degree-2
        // field.
        input.edges[0].form_into_u = ints(BaseField::Rationals, &[&[1, 0], &[0, 1]]);
        let err = ModGraph::validate(&input).unwrap_err();
        assert!(err.to_string().contains("not balanced"), "{err}");
    }

    #[test]
    fn symmetric_form_examples() {
        let g = ModGraph::validate(&c2_input()).unwrap();
        let ca = g.cartan();
        assert_eq!(ca.symmetric_form(&[1, 0], &[0, 1]).unwrap(), -2);
        assert_eq!(ca.symmetric_form(&[1, 1], &[1, 1]).unwrap(), 2);
        let h = ModGraph::validate(&sl2hat_input(1)).unwrap();
        assert_eq!(h.cartan().symmetric_form(&[1, 1], &[1, 1]).unwrap(), 0);
    }

    proptest! {
        #[test]
        fn symmetric_form_is_symmetric(
            v in proptest::collection::vec(-5i64..=5, 2),
            w in proptest::collection::vec(-5i64..=5, 2),
        ) {
            for input in [c2_input(), sl2hat_input(1)] {
                let g = ModGraph::validate(&input).unwrap();
                let ca = g.cartan();
                prop_assert_eq!(ca.symmetric_form(&v, &w).unwrap(), ca.symmetric_form(&w, &v).unwrap());
            }
        }

        /// Identity relating the quadratic dimension count D(v) = Σ d_i·v_i²
        /// and the symmetric form under v ↦ v − k·α_i (doubled to stay in
        /// integers):
        /// 2·D(v−kα_i) − (v−kα_i, v−kα_i) + 4·k·d_i·v_i − 2·k·(v, α_i)
        ///   = 2·D(v) − (v, v).
        #[test]
        fn dimension_identity(
            v in proptest::collection::vec(-4i64..=4, 2),
            k in -3i64..=3,
            i in 0usize..2,
        ) {
            for input in [c2_input(), sl2hat_input(1)] {
                let g = ModGraph::validate(&input).unwrap();
                let ca = g.cartan();
                let dv = |x: &[i64]| -> i64 {
                    x.iter().enumerate().map(|(t, &a)| ca.d[t] as i64 * a * a).sum()
                };
                let alpha = ca.simple_root(i);
                let shifted: Vec<i64> = v.iter().zip(&alpha).map(|(&a, &b)| a - k * b).collect();
                let lhs = 2 * dv(&shifted) - ca.symmetric_form(&shifted, &shifted).unwrap()
                    + 4 * k * ca.d[i] as i64 * v[i]
                    - 2 * k * ca.symmetric_form(&v, &alpha).unwrap();
                let rhs = 2 * dv(&v) - ca.symmetric_form(&v, &v).unwrap();
                prop_assert_eq!(lhs, rhs);
            }
        }
    }

    #[test]
    fn forms_reconstruct_extension_values() {
        // The F_2-valued grid of the form into vertex 2 on the rank-2
        // preset: value(a, b) should be the product interpretation — grid
        // [[1, i], [i, −1]] (multiplication of the two slot elements).
        let g = ModGraph::validate(&c2_input()).unwrap();
        let f2 = g.field(1).clone();
        let form = g.form(1, 0).unwrap();
        assert_eq!(form.value(0, 0), &f2.one());
        assert_eq!(form.value(0, 1), &f2.gen());
        assert_eq!(form.value(1, 0), &f2.gen());
        assert_eq!(form.value(1, 1), &f2.one().neg());
    }
}
