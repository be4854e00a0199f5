//! The canonical maps into and out of a vertex.
//!
//! For a representation `V` and a vertex `i`, let
//!
//! ```text
//!   V^i = ⊕_{j adjacent to i}  bimodule(i, j) ⊗_{F_j} V_j
//! ```
//!
//! (blocks in increasing neighbour order).  Two `F_i`-linear maps connect
//! `V_i` with `V^i`:
//!
//! * `out`: `V_i → V^i`, whose `j`-block sends `v` to
//!   `Σ_k v_k ⊗ x[j ← i](v^k ⊗ v)` where `Σ_k v_k ⊗ v^k` is the canonical
//!   element for `(i, j)`;
//! * `in`: `V^i → V_i`, whose `j`-block is the structure map `x[i ← j]`.
//!
//! The preprojective relation at `i` says exactly `in ∘ out = 0`.  The
//! kernel of `out` is the socle multiplicity space of the simple `S_i`, and
//! the cokernel of `in` is the head multiplicity space.

use crate::{Error, Result};
use crate::matrix::Matrix;
use crate::rep::Representation;

/// The assembled maps at one vertex.
#[derive(Clone, Debug)]
pub struct TildeData {
    /// The vertex the data is attached to.
    pub vertex: usize,
    /// `(neighbour, base dimension of its block)` in increasing order.
    pub blocks: Vec<(usize, usize)>,
    /// `V_i → V^i` over the base field.
    pub xtilde: Matrix,
    /// `V^i → V_i` over the base field.
    pub xin: Matrix,
    /// Action of the `F_i`-generator on `V^i`.
    pub gen_up: Matrix,
    degree: usize,
    vdim: usize,
}

impl TildeData {
    /// Base-field dimension of `V^i`.
    pub fn total_dim(&self) -> usize {
        self.xtilde.nrows()
    }

    /// `φ_i = dim_{F_i} ker(V_i → V^i)`, the socle multiplicity of `S_i`.
    pub fn phi(&self) -> Result<usize> {
        let r = self.xtilde.rank();
        if !r.is_multiple_of(self.degree) {
            return Err(Error::InvalidRepresentation(format!(
                "map out of vertex {} is not linear over its field",
                self.vertex
            )));
        }
        Ok(self.vdim - r / self.degree)
    }

    /// `φ*_i = dim_{F_i} coker(V^i → V_i)`, the head multiplicity of `S_i`.
    pub fn phi_star(&self) -> Result<usize> {
        let r = self.xin.rank();
        if !r.is_multiple_of(self.degree) {
            return Err(Error::InvalidRepresentation(format!(
                "map into vertex {} is not linear over its field",
                self.vertex
            )));
        }
        Ok(self.vdim - r / self.degree)
    }
}

/// Assembles the canonical maps at vertex `i`.
pub fn tilde(rep: &Representation, i: usize) -> Result<TildeData> {
    let graph = rep.graph().clone();
    let base = graph.base();
    let ni = rep.base_dim(i);
    let mut blocks = Vec::new();
    let mut out_blocks = Vec::new();
    let mut in_blocks = Vec::new();
    let mut gen_blocks = Vec::new();
    for j in graph.neighbors(i) {
        let up = rep
            .arrow_space(i, j)
            .expect("neighbours have arrow spaces");
        let dom = rep
            .arrow_space(j, i)
            .expect("neighbours have arrow spaces");
        let x_ji = rep.map(j, i).expect("neighbours have structure maps");
        let x_ij = rep.map(i, j).expect("neighbours have structure maps");
        let canonical = graph
            .canonical_element(i, j)
            .expect("adjacent pairs carry a canonical element");
        let mut block = Matrix::zero(base, up.dim(), ni);
        for (vk, vk_dual) in &canonical.terms {
            let a_k = up.pure_left(vk)?;
            let c_k = dom.pure_left(vk_dual)?;
            block = block.add(&a_k.mul(&x_ji.mul(&c_k)?)?)?;
        }
        out_blocks.push(block);
        in_blocks.push(x_ij.clone());
        let bim = graph.bimodule(i, j).expect("adjacent pair");
        gen_blocks.push(up.induced_left(&bim.left_gen)?);
        blocks.push((j, up.dim()));
    }
    let (xtilde, xin, gen_up) = if blocks.is_empty() {
        (
            Matrix::zero(base, 0, ni),
            Matrix::zero(base, ni, 0),
            Matrix::zero(base, 0, 0),
        )
    } else {
        (
            Matrix::vstack(&out_blocks)?,
            Matrix::hstack(&in_blocks)?,
            Matrix::block_diag(base, &gen_blocks),
        )
    };
    Ok(TildeData {
        vertex: i,
        blocks,
        xtilde,
        xin,
        gen_up,
        degree: graph.degree(i),
        vdim: rep.dim(i),
    })
}
