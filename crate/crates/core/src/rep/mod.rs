//! Finite-dimensional nilpotent representations of the preprojective
//! algebra of a modulated graph.
//!
//! A representation assigns to each vertex `i` a free module `V_i` over the
//! vertex field `F_i` (carried concretely on the standard base-field
//! coordinates, `d_i` consecutive coordinates per `F_i`-basis vector), and to
//! each ordered adjacent pair an `F_j`-linear structure map
//!
//! ```text
//!   x[j ← i] : bimodule(j, i) ⊗_{F_i} V_i  →  V_j.
//! ```
//!
//! The domain is the balanced tensor product realised by a
//! [`TensorSpace`]; structure maps are stored as base-field matrices in its
//! canonical coordinates.  A representation is *valid* when every structure
//! map is `F_j`-linear, the defining relation of the preprojective algebra
//! acts as zero at every vertex, and the representation is nilpotent.

mod generic;
mod homext;
mod iso;
mod sample;
mod tilde;

pub use generic::{
    generic_extension, generic_head_submodule, generic_socle_quotient, mix_seed, Genericity,
};
pub use homext::{assemble_extension, ext1_space, hom_space, ExtCocycle, ExtSpace, HomSpace};
pub use iso::is_isomorphic;
pub use sample::{random_cocycle, random_linear_family, random_nilpotent};
pub use tilde::{tilde, TildeData};

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use crate::{Error, Result};
use crate::matrix::{Matrix, RowSpace};
use crate::modgraph::ModGraph;
use crate::scalar::{scalar_from_json, scalar_to_json};
use crate::tensor::TensorSpace;

/// A representation of the preprojective algebra of a modulated graph.
///
/// Structure maps are keyed by `(to, from)`: `map(j, i)` is the matrix of
/// `x[j ← i]`, with `degree(j)·dim(j)` rows and `arrow_space(j, i).dim()`
/// columns over the base field.
#[derive(Clone)]
pub struct Representation {
    graph: Arc<ModGraph>,
    dims: Vec<usize>,
    maps: BTreeMap<(usize, usize), Matrix>,
    spaces: BTreeMap<(usize, usize), TensorSpace>,
}

impl Representation {
    /// Builds a representation from per-vertex `F_i`-dimensions and structure
    /// maps.  Missing maps default to zero.  Only shapes are enforced here;
    /// use [`Representation::check`] for linearity, relations and nilpotency.
    pub fn new(
        graph: Arc<ModGraph>,
        dims: Vec<usize>,
        maps: BTreeMap<(usize, usize), Matrix>,
    ) -> Result<Representation> {
        if dims.len() != graph.n() {
            return Err(Error::ShapeMismatch(format!(
                "{} dimensions given for a graph with {} vertices",
                dims.len(),
                graph.n()
            )));
        }
        let spaces = arrow_spaces(&graph, &dims)?;
        for key in maps.keys() {
            if !spaces.contains_key(key) {
                return Err(Error::InvalidRepresentation(format!(
                    "structure map given for non-adjacent vertices ({}, {})",
                    graph.vertex_name(key.0),
                    graph.vertex_name(key.1)
                )));
            }
        }
        let mut full = BTreeMap::new();
        for (key, space) in &spaces {
            let (j, _i) = *key;
            let rows = graph.degree(j) * dims[j];
            let cols = space.dim();
            match maps.get(key) {
                Some(m) => {
                    if m.nrows() != rows || m.ncols() != cols {
                        return Err(Error::ShapeMismatch(format!(
                            "structure map ({}, {}) is {}x{}, expected {}x{}",
                            graph.vertex_name(key.0),
                            graph.vertex_name(key.1),
                            m.nrows(),
                            m.ncols(),
                            rows,
                            cols
                        )));
                    }
                    if *m.handle() != *graph.base() {
                        return Err(Error::HandleMismatch(
                            "structure maps must be base-field matrices".into(),
                        ));
                    }
                    full.insert(*key, m.clone());
                }
                None => {
                    full.insert(*key, Matrix::zero(graph.base(), rows, cols));
                }
            }
        }
        Ok(Representation {
            graph,
            dims,
            maps: full,
            spaces,
        })
    }

    /// The zero representation with the given dimension vector.
    pub fn zero(graph: Arc<ModGraph>, dims: Vec<usize>) -> Result<Representation> {
        Representation::new(graph, dims, BTreeMap::new())
    }

    /// The zero module (all dimensions 0).
    pub fn zero_module(graph: Arc<ModGraph>) -> Representation {
        let n = graph.n();
        Representation::zero(graph, vec![0; n]).expect("zero module always exists")
    }

    /// The simple module `S_i`: one copy of `F_i` at vertex `i`, zero maps.
    pub fn simple(graph: Arc<ModGraph>, i: usize) -> Result<Representation> {
        let n = graph.n();
        if i >= n {
            return Err(Error::InvalidGraph(format!("no vertex with index {i}")));
        }
        let mut dims = vec![0; n];
        dims[i] = 1;
        Representation::zero(graph, dims)
    }

    pub fn graph(&self) -> &Arc<ModGraph> {
        &self.graph
    }

    /// Per-vertex dimensions over the vertex fields.
    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    /// Dimension of `V_i` over `F_i`.
    pub fn dim(&self, i: usize) -> usize {
        self.dims[i]
    }

    /// Dimension of `V_i` over the base field.
    pub fn base_dim(&self, i: usize) -> usize {
        self.graph.degree(i) * self.dims[i]
    }

    /// Total dimension over the base field.
    pub fn total_base_dim(&self) -> usize {
        (0..self.graph.n()).map(|i| self.base_dim(i)).sum()
    }

    /// The dimension vector as a weight (entries over the vertex fields).
    pub fn weight(&self) -> Vec<i64> {
        self.dims.iter().map(|&v| v as i64).collect()
    }

    pub fn is_zero_module(&self) -> bool {
        self.dims.iter().all(|&v| v == 0)
    }

    /// The structure map `x[j ← i]`.
    pub fn map(&self, j: usize, i: usize) -> Option<&Matrix> {
        self.maps.get(&(j, i))
    }

    /// The domain tensor space of `x[j ← i]`.
    pub fn arrow_space(&self, j: usize, i: usize) -> Option<&TensorSpace> {
        self.spaces.get(&(j, i))
    }

    /// Base-field matrix of the `F_i`-generator acting on `V_i`.
    pub fn gen_action(&self, i: usize) -> Matrix {
        self.graph.field(i).standard_gen_action(self.dims[i])
    }

    /// Validates linearity, the preprojective relations and nilpotency.
    pub fn check(&self) -> Result<ValidityReport> {
        let mut linearity_failures = Vec::new();
        for (&(j, i), x) in &self.maps {
            let space = &self.spaces[&(j, i)];
            let bim = self
                .graph
                .bimodule(j, i)
                .expect("arrow space exists only for adjacent pairs");
            let lam = space.induced_left(&bim.left_gen)?;
            let gj = self.gen_action(j);
            if gj.mul(x)? != x.mul(&lam)? {
                linearity_failures.push((j, i));
            }
        }
        let mut relation_residual_ranks = Vec::with_capacity(self.graph.n());
        for i in 0..self.graph.n() {
            let t = tilde(self, i)?;
            let composite = t.xin.mul(&t.xtilde)?;
            relation_residual_ranks.push(composite.rank());
        }
        Ok(ValidityReport {
            linearity_failures,
            relation_residual_ranks,
            nilpotent: self.is_nilpotent()?,
        })
    }

    /// Returns an error naming the first failed validity condition, if any.
    pub fn require_valid(&self) -> Result<()> {
        let report = self.check()?;
        if let Some(&(j, i)) = report.linearity_failures.first() {
            return Err(Error::InvalidRepresentation(format!(
                "structure map ({}, {}) is not linear over the target vertex field",
                self.graph.vertex_name(j),
                self.graph.vertex_name(i)
            )));
        }
        if let Some(i) = report
            .relation_residual_ranks
            .iter()
            .position(|&r| r != 0)
        {
            return Err(Error::InvalidRepresentation(format!(
                "preprojective relation fails at vertex {}",
                self.graph.vertex_name(i)
            )));
        }
        if !report.nilpotent {
            return Err(Error::InvalidRepresentation(
                "representation is not nilpotent".into(),
            ));
        }
        Ok(())
    }

    /// Nilpotency via the descending chain of iterated images: with
    /// `U⁰ = V` and `U^{k+1}_j = Σ_i x[j ← i](M ⊗ U^k_i)`, the representation
    /// is nilpotent iff the chain reaches zero.
    pub fn is_nilpotent(&self) -> Result<bool> {
        let base = self.graph.base();
        let n = self.graph.n();
        let mut current: Vec<Matrix> = (0..n)
            .map(|i| Matrix::identity(base, self.base_dim(i)))
            .collect();
        loop {
            let mut next: Vec<RowSpace> = (0..n)
                .map(|i| RowSpace::new(base, self.base_dim(i)))
                .collect();
            for (&(j, i), x) in &self.maps {
                let b = &current[i];
                if b.ncols() == 0 {
                    continue;
                }
                let space = &self.spaces[&(j, i)];
                let lifted = Matrix::kronecker(&Matrix::identity(base, space.mdim()), b);
                let image = x.mul(&space.proj().mul(&lifted)?)?;
                next[j].insert_cols(&image);
            }
            let old_dims: Vec<usize> = current.iter().map(|m| m.ncols()).collect();
            let new_dims: Vec<usize> = next.iter().map(|s| s.dim()).collect();
            if new_dims.iter().all(|&d| d == 0) {
                return Ok(true);
            }
            if new_dims == old_dims {
                return Ok(false);
            }
            current = next
                .into_iter()
                .map(|s| s.basis_matrix().transpose())
                .collect();
        }
    }

    /// `φ_i`: the `F_i`-dimension of the socle of `V` at vertex `i`
    /// (the kernel of the canonical map out of `V_i`).
    pub fn phi(&self, i: usize) -> Result<usize> {
        tilde(self, i)?.phi()
    }

    /// `φ*_i`: the `F_i`-dimension of the head of `V` at vertex `i`
    /// (the cokernel of the canonical map into `V_i`).
    pub fn phi_star(&self, i: usize) -> Result<usize> {
        tilde(self, i)?.phi_star()
    }

    /// `ε_i = φ_i − ⟨wt, α̌_i⟩`.
    pub fn epsilon(&self, i: usize) -> Result<i64> {
        let pairing = self.graph.cartan().coroot_pairing(&self.weight(), i);
        Ok(self.phi(i)? as i64 - pairing)
    }

    /// All `φ_i` as a vector.
    pub fn phi_profile(&self) -> Result<Vec<usize>> {
        (0..self.graph.n()).map(|i| self.phi(i)).collect()
    }

    /// All `φ*_i` as a vector.
    pub fn phi_star_profile(&self) -> Result<Vec<usize>> {
        (0..self.graph.n()).map(|i| self.phi_star(i)).collect()
    }

    /// Per-vertex socle and head dimensions over the vertex fields, i.e.
    /// the multiplicities of each simple in the socle and the head.
    pub fn head_socle_dims(&self) -> Result<HeadSocleReport> {
        let socle = self.phi_profile()?;
        let head = self.phi_star_profile()?;
        Ok(HeadSocleReport { socle, head })
    }

    /// Serialises the representation (dimension vector and structure maps)
    /// for a graph known by name.
    pub fn to_json(&self) -> serde_json::Value {
        let base = self.graph.base().base_field();
        let mut dims = serde_json::Map::new();
        for i in 0..self.graph.n() {
            let name = self.graph.vertex_name(i).to_string();
            dims.insert(name, serde_json::Value::from(self.dims[i] as u64));
        }
        let mut maps = Vec::new();
        for (&(j, i), m) in &self.maps {
            if m.is_zero() {
                continue;
            }
            let rows: Vec<serde_json::Value> = (0..m.nrows())
                .map(|r| {
                    let row: Vec<serde_json::Value> = (0..m.ncols())
                        .map(|c| scalar_to_json(&base, m.get(r, c).base_value()))
                        .collect();
                    serde_json::Value::from(row)
                })
                .collect();
            maps.push(serde_json::json!({
                "from": self.graph.vertex_name(i),
                "to": self.graph.vertex_name(j),
                "matrix": rows,
            }));
        }
        serde_json::json!({
            "graph": self.graph.name(),
            "dims": dims,
            "maps": maps,
        })
    }

    /// Reads a representation from the JSON produced by
    /// [`Representation::to_json`] and validates it fully; invalid
    /// representations are refused.
    pub fn from_json(graph: Arc<ModGraph>, v: &serde_json::Value) -> Result<Representation> {
        let obj = v
            .as_object()
            .ok_or_else(|| Error::Parse("representation file must be a JSON object".into()))?;
        if let Some(name) = obj.get("graph").and_then(|g| g.as_str()) {
            if name != graph.name() {
                return Err(Error::Parse(format!(
                    "representation file is for graph {:?}, not {:?}",
                    name,
                    graph.name()
                )));
            }
        }
        let dims_obj = obj
            .get("dims")
            .and_then(|d| d.as_object())
            .ok_or_else(|| Error::Parse("missing \"dims\" object".into()))?;
        let mut dims = vec![0usize; graph.n()];
        for (name, value) in dims_obj {
            let i = graph
                .vertex_index(name)
                .ok_or_else(|| Error::Parse(format!("unknown vertex {name:?} in dims")))?;
            dims[i] = value
                .as_u64()
                .ok_or_else(|| Error::Parse(format!("dimension of {name:?} must be a non-negative integer")))?
                as usize;
        }
        let base = graph.base().base_field();
        let base_handle = graph.base().clone();
        let mut maps = BTreeMap::new();
        if let Some(list) = obj.get("maps") {
            let list = list
                .as_array()
                .ok_or_else(|| Error::Parse("\"maps\" must be an array".into()))?;
            for entry in list {
                let from = entry
                    .get("from")
                    .and_then(|x| x.as_str())
                    .ok_or_else(|| Error::Parse("map entry missing \"from\"".into()))?;
                let to = entry
                    .get("to")
                    .and_then(|x| x.as_str())
                    .ok_or_else(|| Error::Parse("map entry missing \"to\"".into()))?;
                let i = graph
                    .vertex_index(from)
                    .ok_or_else(|| Error::Parse(format!("unknown vertex {from:?}")))?;
                let j = graph
                    .vertex_index(to)
                    .ok_or_else(|| Error::Parse(format!("unknown vertex {to:?}")))?;
                let rows = entry
                    .get("matrix")
                    .and_then(|x| x.as_array())
                    .ok_or_else(|| Error::Parse("map entry missing \"matrix\"".into()))?;
                let mut data = Vec::new();
                let mut ncols = None;
                for row in rows {
                    let row = row
                        .as_array()
                        .ok_or_else(|| Error::Parse("matrix rows must be arrays".into()))?;
                    match ncols {
                        None => ncols = Some(row.len()),
                        Some(c) if c != row.len() => {
                            return Err(Error::Parse("ragged matrix in representation file".into()))
                        }
                        _ => {}
                    }
                    for cell in row {
                        data.push(base_handle.from_base(&scalar_from_json(&base, cell)?));
                    }
                }
                let m = Matrix::from_vec_rm(
                    &base_handle,
                    rows.len(),
                    ncols.unwrap_or(0),
                    data,
                )?;
                if maps.insert((j, i), m).is_some() {
                    return Err(Error::Parse(format!(
                        "duplicate map entry for ({to}, {from})"
                    )));
                }
            }
        }
        let rep = Representation::new(graph, dims, maps)?;
        rep.require_valid()?;
        Ok(rep)
    }
}

impl fmt::Debug for Representation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "Representation(graph {:?}, dims {:?})",
            self.graph.name(),
            self.dims
        )
    }
}

/// Builds the domain tensor spaces of all structure maps for a dimension
/// vector: key `(j, i)` holds `bimodule(j, i) ⊗_{F_i} V_i`.
pub(crate) fn arrow_spaces(
    graph: &ModGraph,
    dims: &[usize],
) -> Result<BTreeMap<(usize, usize), TensorSpace>> {
    let mut spaces = BTreeMap::new();
    for &(u, v) in graph.edges() {
        for (j, i) in [(u, v), (v, u)] {
            let bim = graph
                .bimodule(j, i)
                .expect("edge endpoints are adjacent");
            let w_gen = graph.field(i).standard_gen_action(dims[i]);
            let space = TensorSpace::new(graph.field(i), &bim.right_gen, &w_gen)?;
            spaces.insert((j, i), space);
        }
    }
    Ok(spaces)
}

/// Outcome of the validity checks on a representation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ValidityReport {
    /// Arrows `(to, from)` whose structure map is not linear over the
    /// target vertex field.
    pub linearity_failures: Vec<(usize, usize)>,
    /// Base-field rank of the relation residual at each vertex (all zero
    /// iff the preprojective relations hold).
    pub relation_residual_ranks: Vec<usize>,
    /// Whether the chain of iterated images reaches zero.
    pub nilpotent: bool,
}

impl ValidityReport {
    pub fn is_valid(&self) -> bool {
        self.linearity_failures.is_empty()
            && self.relation_residual_ranks.iter().all(|&r| r == 0)
            && self.nilpotent
    }
}

/// Socle and head dimensions per vertex, over the vertex fields.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HeadSocleReport {
    pub socle: Vec<usize>,
    pub head: Vec<usize>,
}

impl HeadSocleReport {
    /// Total number of simple summands in the head.
    pub fn head_total(&self) -> usize {
        self.head.iter().sum()
    }

    /// Total number of simple summands in the socle.
    pub fn socle_total(&self) -> usize {
        self.socle.iter().sum()
    }
}

/// The direct sum, carried on `V_i = A_i ⊕ B_i` per vertex.
pub fn direct_sum(a: &Representation, b: &Representation) -> Result<Representation> {
    assemble_extension(b, a, &ExtCocycle::zero(b, a)?)
}
