//! The graded path algebra of a modulated graph and its quotient by the
//! two-sided ideal generated by the canonical elements.
//!
//! Degree `n ≥ 1` of the tensor algebra is the direct sum over all length-`n`
//! vertex paths of the iterated interior tensor product of the arrow
//! bimodules along the path.  Tensor factors are written with the *last*
//! step leftmost, so extending a path appends a new factor on the left.
//! Degree 0 is the direct sum of the vertex fields.
//!
//! The ideal is generated in degree 2 by the canonical elements (one per
//! vertex, summed over its neighbors) together with their vertex-field
//! multiples; higher components are built by the recursion
//! `I_n = T_1·I_{n−1} + I_{n−1}·T_1`, which is exhaustive because the
//! algebra is generated in degrees 0 and 1.

use crate::field::FieldElement;
use crate::matrix::{Matrix, RowSpace};
use crate::modgraph::ModGraph;
use crate::tensor::TensorSpace;
use crate::{Error, Result};

/// One path's tensor space inside a graded degree.
#[derive(Debug)]
pub struct PathSpace {
    /// Vertex sequence, length = degree + 1.
    pub verts: Vec<usize>,
    /// Base dimension of the interior tensor quotient.
    pub dim: usize,
    /// Plain (unquotiented) tensor dimension: product of bimodule dims.
    pub full_dim: usize,
    /// Quotient map from the plain tensor product of all factors.
    proj_full: Matrix,
    /// Right inverse of `proj_full`.
    section_full: Matrix,
    /// Generator action of the field of the final vertex on the quotient.
    left_gen: Matrix,
    /// Index of the parent path (this path minus the last vertex) in the
    /// previous degree.
    parent: Option<usize>,
    /// The quotient step joining the newest factor to the parent space.
    step: Option<TensorSpace>,
}

/// All data for one degree `n ≥ 1` of the algebra.
#[derive(Debug)]
pub struct DegreeData {
    pub degree: usize,
    pub paths: Vec<PathSpace>,
    /// Coordinate offsets of each path block in the concatenated space.
    pub offsets: Vec<usize>,
    pub total_dim: usize,
    /// The degree-`n` component of the two-sided ideal, in concatenated
    /// coordinates.
    pub ideal: RowSpace,
}

impl DegreeData {
    pub fn quotient_dim(&self) -> usize {
        self.total_dim - self.ideal.dim()
    }

    /// Dimension of the intersection of the ideal with a single path block,
    /// via dim(I ∩ V_p) = dim I + dim V_p − dim(I + V_p).
    pub fn ideal_intersection_with_path(&self, path_idx: usize) -> usize {
        let p = &self.paths[path_idx];
        let mut joined = self.ideal.clone();
        let base = self.ideal_basis_handle();
        for k in 0..p.dim {
            let mut unit = vec![base.zero(); self.total_dim];
            unit[self.offsets[path_idx] + k] = base.one();
            joined.insert(&unit);
        }
        self.ideal.dim() + p.dim - joined.dim()
    }

    fn ideal_basis_handle(&self) -> crate::field::FieldHandle {
        self.ideal.basis_matrix().handle().clone()
    }
}

/// Graded dimensions of the quotient algebra plus a finiteness verdict.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DimReport {
    /// Quotient dimension at degrees `0..=max_degree` (zero-padded once a
    /// vanishing degree is reached).
    pub dims: Vec<usize>,
    pub verdict: FiniteVerdict,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum FiniteVerdict {
    FiniteDimensional { total: usize },
    NotFiniteBy { degree: usize },
}

impl std::fmt::Display for FiniteVerdict {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            FiniteVerdict::FiniteDimensional { total } => {
                write!(f, "finite-dimensional, total = {total}")
            }
            FiniteVerdict::NotFiniteBy { degree } => write!(f, "not finite by degree {degree}"),
        }
    }
}

/// Incrementally computed graded algebra data.
pub struct GradedAlgebra<'g> {
    graph: &'g ModGraph,
    /// `levels[k]` holds degree `k + 1`.
    levels: Vec<DegreeData>,
}

impl<'g> GradedAlgebra<'g> {
    pub fn new(graph: &'g ModGraph) -> GradedAlgebra<'g> {
        GradedAlgebra {
            graph,
            levels: Vec::new(),
        }
    }

    pub fn graph(&self) -> &ModGraph {
        self.graph
    }

    /// Quotient dimension in degree 0: the sum of the vertex field degrees.
    pub fn degree_zero_dim(&self) -> usize {
        (0..self.graph.n()).map(|i| self.graph.degree(i)).sum()
    }

    /// Ensures degrees `1..=n` are computed.
    pub fn compute_up_to(&mut self, n: usize) -> Result<()> {
        while self.levels.len() < n {
            let next = self.levels.len() + 1;
            let level = self.build_level(next)?;
            self.levels.push(level);
        }
        Ok(())
    }

    pub fn level(&self, degree: usize) -> Option<&DegreeData> {
        if degree == 0 {
            return None;
        }
        self.levels.get(degree - 1)
    }

    /// Quotient dimension at any computed degree.
    pub fn quotient_dim(&self, degree: usize) -> Option<usize> {
        if degree == 0 {
            return Some(self.degree_zero_dim());
        }
        self.level(degree).map(|l| l.quotient_dim())
    }

    fn build_level(&self, degree: usize) -> Result<DegreeData> {
        let g = self.graph;
        let base = g.base().clone();
        let mut paths: Vec<PathSpace> = Vec::new();

        if degree == 1 {
            // one path per ordered adjacent pair (i, j), sorted
            for i in 0..g.n() {
                for j in g.neighbors(i) {
                    let bji = g.bimodule(j, i).expect("adjacent");
                    let m = bji.base_dim;
                    paths.push(PathSpace {
                        verts: vec![i, j],
                        dim: m,
                        full_dim: m,
                        proj_full: Matrix::identity(&base, m),
                        section_full: Matrix::identity(&base, m),
                        left_gen: bji.left_gen.clone(),
                        parent: None,
                        step: None,
                    });
                }
            }
        } else {
            let prev = &self.levels[degree - 2];
            for (pidx, p) in prev.paths.iter().enumerate() {
                let end = *p.verts.last().unwrap();
                for j in g.neighbors(end) {
                    let bji = g.bimodule(j, end).expect("adjacent");
                    let m = bji.base_dim;
                    let step =
                        TensorSpace::new(g.field(end), &bji.right_gen, &p.left_gen)?;
                    let proj_full = step.proj().mul(&Matrix::kronecker(
                        &Matrix::identity(&base, m),
                        &p.proj_full,
                    ))?;
                    let section_full = Matrix::kronecker(
                        &Matrix::identity(&base, m),
                        &p.section_full,
                    )
                    .mul(step.section())?;
                    let left_gen = step.induced_left(&bji.left_gen)?;
                    let mut verts = p.verts.clone();
                    verts.push(j);
                    paths.push(PathSpace {
                        verts,
                        dim: step.dim(),
                        full_dim: m * p.full_dim,
                        proj_full,
                        section_full,
                        left_gen,
                        parent: Some(pidx),
                        step: Some(step),
                    });
                }
            }
        }
        debug_assert!(paths.windows(2).all(|w| w[0].verts < w[1].verts));

        let mut offsets = Vec::with_capacity(paths.len());
        let mut total_dim = 0;
        for p in &paths {
            offsets.push(total_dim);
            total_dim += p.dim;
        }

        let mut ideal = RowSpace::new(&base, total_dim);
        if degree == 2 {
            self.seed_ideal_generators(&paths, &offsets, total_dim, &mut ideal)?;
        } else if degree >= 3 {
            let prev = &self.levels[degree - 2];
            self.propagate_ideal(prev, &paths, &offsets, total_dim, &mut ideal)?;
        }

        Ok(DegreeData {
            degree,
            paths,
            offsets,
            total_dim,
            ideal,
        })
    }

    /// Degree-2 ideal: for each vertex `i`, the canonical elements of all
    /// its neighbors concatenated over the loop paths `i → j → i`, closed
    /// under the `F_i`-action (which is two-sided by centrality).
    fn seed_ideal_generators(
        &self,
        paths: &[PathSpace],
        offsets: &[usize],
        total_dim: usize,
        ideal: &mut RowSpace,
    ) -> Result<()> {
        let g = self.graph;
        let base = g.base().clone();
        for i in 0..g.n() {
            let nbrs = g.neighbors(i);
            if nbrs.is_empty() {
                continue;
            }
            let mut r = vec![base.zero(); total_dim];
            for &j in &nbrs {
                let (_, flat) = g.canonical_tensor(i, j)?;
                let verts = vec![i, j, i];
                let idx = paths
                    .iter()
                    .position(|p| p.verts == verts)
                    .expect("loop path exists for adjacent vertices");
                for (k, x) in flat.iter().enumerate() {
                    r[offsets[idx] + k] = x.clone();
                }
            }
            // close under the generator action of F_i on the final vertex
            let mut cur = r;
            for _ in 0..g.degree(i) {
                ideal.insert(&cur);
                let mut next = vec![base.zero(); total_dim];
                for (idx, p) in paths.iter().enumerate() {
                    if *p.verts.last().unwrap() != i || p.verts[0] != i {
                        continue;
                    }
                    let block = &cur[offsets[idx]..offsets[idx] + p.dim];
                    let moved = p.left_gen.apply(block)?;
                    next[offsets[idx]..offsets[idx] + p.dim].clone_from_slice(&moved);
                }
                cur = next;
            }
        }
        Ok(())
    }

    /// `I_n = T_1·I_{n−1} + I_{n−1}·T_1`.
    fn propagate_ideal(
        &self,
        prev: &DegreeData,
        paths: &[PathSpace],
        offsets: &[usize],
        total_dim: usize,
        ideal: &mut RowSpace,
    ) -> Result<()> {
        let g = self.graph;
        let base = g.base().clone();
        if prev.ideal.dim() == 0 {
            return Ok(());
        }

        // Left multiplication: for each path p' extending parent p by the
        // arrow end(p) → j, the map v ↦ class(e_a ⊗ v) per basis index a.
        let mut left_maps: Vec<Vec<Matrix>> = Vec::with_capacity(paths.len());
        for p in paths {
            let step = p.step.as_ref().expect("degree ≥ 2 paths have a step");
            let parent_dim = prev.paths[p.parent.unwrap()].dim;
            let m = step.mdim();
            let mut per_a = Vec::with_capacity(m);
            for a in 0..m {
                let mut e = Matrix::zero(&base, m, 1);
                e.set(a, 0, base.one());
                let map = step
                    .proj()
                    .mul(&Matrix::kronecker(&e, &Matrix::identity(&base, parent_dim)))?;
                per_a.push(map);
            }
            left_maps.push(per_a);
        }

        // Right multiplication: path q'' = [i] ++ q; the map
        // v ↦ proj_full(q'')·(section_full(q)·v ⊗ e_b) per basis index b.
        // Locate the suffix q in the previous level by binary search.
        let mut right_maps: Vec<(usize, Vec<Matrix>)> = Vec::with_capacity(paths.len());
        for p in paths {
            let suffix = p.verts[1..].to_vec();
            let qidx = prev
                .paths
                .binary_search_by(|cand| cand.verts.cmp(&suffix))
                .expect("suffix of a path is a path");
            let q = &prev.paths[qidx];
            let m = g
                .bimodule(p.verts[1], p.verts[0])
                .expect("adjacent")
                .base_dim;
            let mut per_b = Vec::with_capacity(m);
            for b in 0..m {
                let mut e = Matrix::zero(&base, m, 1);
                e.set(b, 0, base.one());
                let map = p
                    .proj_full
                    .mul(&Matrix::kronecker(&q.section_full, &e))?;
                per_b.push(map);
            }
            right_maps.push((qidx, per_b));
        }

        let basis = prev.ideal.basis_matrix();
        for row in 0..basis.nrows() {
            let w = basis.row(row);

            // left products e_a · w for e_a in the arrow space of i → j
            for i in 0..g.n() {
                for j in g.neighbors(i) {
                    let m = g.bimodule(j, i).expect("adjacent").base_dim;
                    for a in 0..m {
                        let mut out = vec![base.zero(); total_dim];
                        let mut touched = false;
                        for (idx, p) in paths.iter().enumerate() {
                            let pv = &p.verts;
                            if pv[pv.len() - 1] != j || pv[pv.len() - 2] != i {
                                continue;
                            }
                            let parent = p.parent.unwrap();
                            let pw =
                                &w[prev.offsets[parent]..prev.offsets[parent] + prev.paths[parent].dim];
                            if pw.iter().all(|x| x.is_zero()) {
                                continue;
                            }
                            let img = left_maps[idx][a].apply(pw)?;
                            out[offsets[idx]..offsets[idx] + p.dim].clone_from_slice(&img);
                            touched = true;
                        }
                        if touched {
                            ideal.insert(&out);
                        }
                    }
                }
            }

            // right products w · e_b for e_b in the arrow space of i → j
            // (the new first step of the extended path)
            for (idx, p) in paths.iter().enumerate() {
                let (qidx, per_b) = &right_maps[idx];
                let q = &prev.paths[*qidx];
                let qw = &w[prev.offsets[*qidx]..prev.offsets[*qidx] + q.dim];
                if qw.iter().all(|x| x.is_zero()) {
                    continue;
                }
                for map in per_b {
                    let img = map.apply(qw)?;
                    let mut out = vec![base.zero(); total_dim];
                    out[offsets[idx]..offsets[idx] + p.dim].clone_from_slice(&img);
                    ideal.insert(&out);
                }
            }
        }
        Ok(())
    }
}

/// Computes the graded dimensions of the quotient algebra up to
/// `max_degree`, stopping early once a degree vanishes.
pub fn graded_dimensions(graph: &ModGraph, max_degree: usize) -> Result<DimReport> {
    let mut alg = GradedAlgebra::new(graph);
    let mut dims = vec![alg.degree_zero_dim()];
    for n in 1..=max_degree {
        alg.compute_up_to(n)?;
        let d = alg.quotient_dim(n).expect("just computed");
        dims.push(d);
        if d == 0 {
            while dims.len() <= max_degree {
                dims.push(0);
            }
            let total = dims.iter().sum();
            return Ok(DimReport {
                dims,
                verdict: FiniteVerdict::FiniteDimensional { total },
            });
        }
    }
    Ok(DimReport {
        dims,
        verdict: FiniteVerdict::NotFiniteBy { degree: max_degree },
    })
}

/// Membership helper used by tests: the concatenated coordinates of a
/// degree-`n` element, formed by placing a vector in a single path block.
pub fn place_in_block(
    level: &DegreeData,
    path_idx: usize,
    v: &[FieldElement],
) -> Result<Vec<FieldElement>> {
    let p = &level.paths[path_idx];
    if v.len() != p.dim {
        return Err(Error::ShapeMismatch("block vector length".into()));
    }
    let base = level.paths[path_idx].proj_full.handle().clone();
    let mut out = vec![base.zero(); level.total_dim];
    out[level.offsets[path_idx]..level.offsets[path_idx] + p.dim].clone_from_slice(v);
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::modgraph::testdata::{a1xa1_input, c2_input, sl2hat_input};
    use crate::modgraph::ModGraph;

    #[test]
    fn c2_tensor_degrees() {
        let g = ModGraph::validate(&c2_input()).unwrap();
        let mut alg = GradedAlgebra::new(&g);
        alg.compute_up_to(2).unwrap();
        let l1 = alg.level(1).unwrap();
        assert_eq!(l1.paths.len(), 2);
        assert_eq!(l1.paths[0].verts, vec![0, 1]);
        assert_eq!(l1.paths[0].dim, 2);
        assert_eq!(l1.paths[1].verts, vec![1, 0]);
        assert_eq!(l1.paths[1].dim, 2);
        let l2 = alg.level(2).unwrap();
        assert_eq!(l2.paths.len(), 2);
        assert_eq!(l2.paths[0].verts, vec![0, 1, 0]);
        assert_eq!(l2.paths[0].dim, 2);
        assert_eq!(l2.paths[1].verts, vec![1, 0, 1]);
        assert_eq!(l2.paths[1].dim, 4);
    }

    #[test]
    fn c2_ideal_degree_two() {
        let g = ModGraph::validate(&c2_input()).unwrap();
        let mut alg = GradedAlgebra::new(&g);
        alg.compute_up_to(2).unwrap();
        let l2 = alg.level(2).unwrap();
        assert_eq!(l2.ideal.dim(), 3);
        assert_eq!(l2.ideal_intersection_with_path(0), 1);
        assert_eq!(l2.ideal_intersection_with_path(1), 2);
    }

    #[test]
    fn c2_graded_dimensions() {
        let g = ModGraph::validate(&c2_input()).unwrap();
        let report = graded_dimensions(&g, 8).unwrap();
        assert_eq!(report.dims, vec![3, 4, 3, 0, 0, 0, 0, 0, 0]);
        assert_eq!(
            report.verdict,
            FiniteVerdict::FiniteDimensional { total: 10 }
        );
    }

    #[test]
    fn edgeless_graded_dimensions() {
        let g = ModGraph::validate(&a1xa1_input()).unwrap();
        let report = graded_dimensions(&g, 4).unwrap();
        assert_eq!(report.dims, vec![2, 0, 0, 0, 0]);
        assert_eq!(report.verdict, FiniteVerdict::FiniteDimensional { total: 2 });
    }

    #[test]
    fn sl2hat_is_not_finite() {
        let g = ModGraph::validate(&sl2hat_input(1)).unwrap();
        let report = graded_dimensions(&g, 6).unwrap();
        assert_eq!(report.dims.len(), 7);
        assert!(report.dims.iter().all(|&d| d > 0), "{:?}", report.dims);
        assert_eq!(report.verdict, FiniteVerdict::NotFiniteBy { degree: 6 });
        // degree 0 and 1 sanity
        assert_eq!(report.dims[0], 2);
        assert_eq!(report.dims[1], 4);
    }

    #[test]
    fn degree_zero_and_one_dimensions() {
        for input in [c2_input(), sl2hat_input(1)] {
            let g = ModGraph::validate(&input).unwrap();
            let report = graded_dimensions(&g, 1).unwrap();
            let d_sum: usize = (0..g.n()).map(|i| g.degree(i)).sum();
            assert_eq!(report.dims[0], d_sum);
            let arrow_sum: usize = g
                .edges()
                .iter()
                .map(|&(u, v)| {
                    g.bimodule(u, v).unwrap().base_dim + g.bimodule(v, u).unwrap().base_dim
                })
                .sum();
            assert_eq!(report.dims[1], arrow_sum);
        }
    }

    /// Multiplying any ideal basis element by any degree-1 basis tensor on
    /// either side stays in the ideal one degree up.
    #[test]
    fn ideal_is_two_sided() {
        let g = ModGraph::validate(&c2_input()).unwrap();
        let mut alg = GradedAlgebra::new(&g);
        alg.compute_up_to(4).unwrap();
        for n in 2..=3 {
            let cur = alg.level(n).unwrap();
            let next = alg.level(n + 1).unwrap();
            let base = g.base().clone();
            let basis = cur.ideal.basis_matrix();
            for row in 0..basis.nrows() {
                let w = basis.row(row);
                // left products
                for (idx, p) in next.paths.iter().enumerate() {
                    let step = p.step.as_ref().unwrap();
                    let parent = p.parent.unwrap();
                    let pw = &w[cur.offsets[parent]..cur.offsets[parent] + cur.paths[parent].dim];
                    for a in 0..step.mdim() {
                        let mut e = Matrix::zero(&base, step.mdim(), 1);
                        e.set(a, 0, base.one());
                        let map = step
                            .proj()
                            .mul(&Matrix::kronecker(
                                &e,
                                &Matrix::identity(&base, cur.paths[parent].dim),
                            ))
                            .unwrap();
                        let img = map.apply(pw).unwrap();
                        let placed = place_in_block(next, idx, &img).unwrap();
                        assert!(
                            next.ideal.contains(&placed),
                            "left product left the ideal at degree {n}"
                        );
                    }
                }
            }
        }
    }
}
