//! Tensor products over an interior field.
//!
//! Given a space `M` with a right action of a field `F_c` and a space `W`
//! with a left `F_c`-action, this module realizes `M ⊗_{F_c} W` as an
//! explicit quotient of the plain tensor product `M ⊗ W` over the base
//! field, imposing `(x·z) ⊗ w = x ⊗ (z·w)` for all `z ∈ F_c`.
//!
//! The quotient is presented by a projection and a section built from a
//! right-`F_c` basis of `M` chosen greedily from the standard basis: scan
//! `e_0, e_1, …` and keep each vector not in the `F_c`-span of the vectors
//! kept so far, together with its orbit `e_a·gen^t`.  Flat indices in the
//! plain tensor put the left factor first: `(a, β) ↦ a·wdim + β`.

use crate::field::{FieldElement, FieldHandle};
use crate::matrix::{Matrix, RowSpace};
use crate::{Error, Result};

/// An explicit model of `M ⊗_{F_c} W`.
#[derive(Clone, Debug)]
pub struct TensorSpace {
    base: FieldHandle,
    fc: FieldHandle,
    m: usize,
    wdim: usize,
    /// Standard-basis indices of the chosen right-`F_c` basis of `M`.
    reps: Vec<usize>,
    /// Quotient map, `dim × (m·wdim)`.
    proj: Matrix,
    /// Right inverse of `proj` sending class `(r,β)` to `e_{reps[r]} ⊗ e_β`.
    section: Matrix,
    right_gen: Matrix,
    w_gen: Matrix,
}

/// Checks that a base matrix satisfies the minimal polynomial of `f`,
/// i.e. that it defines an action of `f` on the space.
pub fn satisfies_minpoly(f: &FieldHandle, action: &Matrix) -> bool {
    let base = f.base_handle();
    let n = action.nrows();
    if action.ncols() != n {
        return false;
    }
    let coeffs: Vec<FieldElement> = match f.minpoly_full() {
        Some(full) => full.iter().map(|c| base.from_base(c)).collect(),
        // A base handle acts through its generator 1, i.e. x − 1.
        None => vec![base.from_i64(-1), base.from_i64(1)],
    };
    // Horner evaluation at the matrix.
    let mut acc = Matrix::zero(&base, n, n);
    for c in coeffs.iter().rev() {
        acc = acc.mul(action).unwrap();
        let ci = Matrix::identity(&base, n).scale(c);
        acc = acc.add(&ci).unwrap();
    }
    acc.is_zero()
}

impl TensorSpace {
    /// Builds `M ⊗_{F_c} W` from the right generator action on `M` and the
    /// left generator action on `W`.
    pub fn new(fc: &FieldHandle, right_gen: &Matrix, w_gen: &Matrix) -> Result<TensorSpace> {
        let base = fc.base_handle();
        if right_gen.handle() != &base || w_gen.handle() != &base {
            return Err(Error::HandleMismatch(
                "tensor factor actions must be over the base field".into(),
            ));
        }
        let m = right_gen.nrows();
        let wdim = w_gen.nrows();
        if !satisfies_minpoly(fc, right_gen) {
            return Err(Error::NotABimodule(
                "right action does not satisfy the interior field's minimal polynomial".into(),
            ));
        }
        if !satisfies_minpoly(fc, w_gen) {
            return Err(Error::NotABimodule(
                "left action does not satisfy the interior field's minimal polynomial".into(),
            ));
        }
        let d = fc.degree();
        if !m.is_multiple_of(d) {
            return Err(Error::NotABimodule(format!(
                "dimension {m} is not a multiple of the interior field degree {d}"
            )));
        }

        // Greedy right-basis: standard-basis orbit representatives.
        let (reps, mb) = standard_orbit_reps(right_gen, d)?;
        let cinv = mb.inverse().map_err(|_| {
            Error::NotABimodule("right action does not make the space a free module".into())
        })?;

        // proj block (r, a) = Σ_t cinv[r·d+t, a] · w_gen^t
        let w_pows = matrix_powers(w_gen, d);
        let nreps = reps.len();
        let qdim = nreps * wdim;
        let mut proj = Matrix::zero(&base, qdim, m * wdim);
        for a in 0..m {
            for r in 0..nreps {
                for t in 0..d {
                    let c = cinv.get(r * d + t, a);
                    if c.is_zero() {
                        continue;
                    }
                    for br in 0..wdim {
                        for bc in 0..wdim {
                            let w = w_pows[t].get(br, bc);
                            if w.is_zero() {
                                continue;
                            }
                            let cur = proj
                                .get(r * wdim + br, a * wdim + bc)
                                .add(&c.mul(w));
                            proj.set(r * wdim + br, a * wdim + bc, cur);
                        }
                    }
                }
            }
        }

        let mut section = Matrix::zero(&base, m * wdim, qdim);
        for (r, &ar) in reps.iter().enumerate() {
            for beta in 0..wdim {
                section.set(ar * wdim + beta, r * wdim + beta, base.one());
            }
        }

        Ok(TensorSpace {
            base,
            fc: fc.clone(),
            m,
            wdim,
            reps,
            proj,
            section,
            right_gen: right_gen.clone(),
            w_gen: w_gen.clone(),
        })
    }

    /// Base dimension of the quotient `M ⊗_{F_c} W`.
    pub fn dim(&self) -> usize {
        self.reps.len() * self.wdim
    }

    /// Base dimension of the plain tensor product `M ⊗ W`.
    pub fn full_dim(&self) -> usize {
        self.m * self.wdim
    }

    pub fn mdim(&self) -> usize {
        self.m
    }

    pub fn wdim(&self) -> usize {
        self.wdim
    }

    pub fn interior_field(&self) -> &FieldHandle {
        &self.fc
    }

    pub fn base(&self) -> &FieldHandle {
        &self.base
    }

    pub fn reps(&self) -> &[usize] {
        &self.reps
    }

    pub fn proj(&self) -> &Matrix {
        &self.proj
    }

    pub fn section(&self) -> &Matrix {
        &self.section
    }

    pub fn right_gen(&self) -> &Matrix {
        &self.right_gen
    }

    pub fn w_gen(&self) -> &Matrix {
        &self.w_gen
    }

    /// Flat index of `e_a ⊗ e_β` in the plain tensor product.
    pub fn flat(&self, a: usize, beta: usize) -> usize {
        a * self.wdim + beta
    }

    /// Quotient coordinates of the class of a pure tensor `x ⊗ w`.
    pub fn pure(&self, x: &[FieldElement], w: &[FieldElement]) -> Result<Vec<FieldElement>> {
        if x.len() != self.m || w.len() != self.wdim {
            return Err(Error::ShapeMismatch("pure tensor factor lengths".into()));
        }
        let mut flat = vec![self.base.zero(); self.m * self.wdim];
        for (a, xa) in x.iter().enumerate() {
            if xa.is_zero() {
                continue;
            }
            for (b, wb) in w.iter().enumerate() {
                if wb.is_zero() {
                    continue;
                }
                flat[self.flat(a, b)] = xa.mul(wb);
            }
        }
        self.proj.apply(&flat)
    }

    /// The matrix of `w ↦ class(x ⊗ w)` from `W` to the quotient, for a
    /// fixed element `x` of `M` given by base coordinates.
    pub fn pure_left(&self, x: &[FieldElement]) -> Result<Matrix> {
        if x.len() != self.m {
            return Err(Error::ShapeMismatch("pure_left operand".into()));
        }
        let mut out = Matrix::zero(&self.base, self.dim(), self.wdim);
        for (a, xa) in x.iter().enumerate() {
            if xa.is_zero() {
                continue;
            }
            for beta in 0..self.wdim {
                let src = self.flat(a, beta);
                for q in 0..self.dim() {
                    let p = self.proj.get(q, src);
                    if !p.is_zero() {
                        let cur = out.get(q, beta).add(&xa.mul(p));
                        out.set(q, beta, cur);
                    }
                }
            }
        }
        Ok(out)
    }

    /// The map induced on the quotient by `L ⊗ id` for a base-linear `L` on
    /// `M` commuting with the right `F_c`-action (e.g. the left action of
    /// the other vertex field).
    pub fn induced_left(&self, l: &Matrix) -> Result<Matrix> {
        if l.nrows() != self.m || l.ncols() != self.m {
            return Err(Error::ShapeMismatch("induced_left operand".into()));
        }
        let lr = l.mul(&self.right_gen)?;
        let rl = self.right_gen.mul(l)?;
        if lr != rl {
            return Err(Error::NotABimodule(
                "left action does not commute with the interior right action".into(),
            ));
        }
        let qdim = self.dim();
        let mut out = Matrix::zero(&self.base, qdim, qdim);
        for (r, &ar) in self.reps.iter().enumerate() {
            for beta in 0..self.wdim {
                // class(L e_{ar} ⊗ e_β) = Σ_a L[a, ar] · proj.col(a·wdim+β)
                let mut col = vec![self.base.zero(); qdim];
                for a in 0..self.m {
                    let c = l.get(a, ar);
                    if c.is_zero() {
                        continue;
                    }
                    let src = self.flat(a, beta);
                    for q in 0..qdim {
                        let p = self.proj.get(q, src);
                        if !p.is_zero() {
                            col[q] = col[q].add(&c.mul(p));
                        }
                    }
                }
                out.set_col(r * self.wdim + beta, &col);
            }
        }
        Ok(out)
    }

    /// The map `M ⊗ W → M ⊗ W'` induced by an `F_c`-linear `h: W → W'`;
    /// `target` must be the tensor space built from the same `M` and `W'`.
    pub fn map_right(&self, target: &TensorSpace, h: &Matrix) -> Result<Matrix> {
        if target.fc != self.fc || target.m != self.m || target.right_gen != self.right_gen {
            return Err(Error::HandleMismatch(
                "map_right target is over a different module".into(),
            ));
        }
        if h.nrows() != target.wdim || h.ncols() != self.wdim {
            return Err(Error::ShapeMismatch("map_right operand".into()));
        }
        let hw = h.mul(&self.w_gen)?;
        let wh = target.w_gen.mul(h)?;
        if hw != wh {
            return Err(Error::NotABimodule(
                "map is not linear over the interior field".into(),
            ));
        }
        let mut out = Matrix::zero(&self.base, target.dim(), self.dim());
        for (r, &ar) in self.reps.iter().enumerate() {
            for beta in 0..self.wdim {
                // class(e_{ar} ⊗ h e_β) = Σ_β' h[β', β] · proj'.col(ar·wdim'+β')
                let mut col = vec![self.base.zero(); target.dim()];
                for bp in 0..target.wdim {
                    let c = h.get(bp, beta);
                    if c.is_zero() {
                        continue;
                    }
                    let src = target.flat(ar, bp);
                    for q in 0..target.dim() {
                        let p = target.proj.get(q, src);
                        if !p.is_zero() {
                            col[q] = col[q].add(&c.mul(p));
                        }
                    }
                }
                out.set_col(r * self.wdim + beta, &col);
            }
        }
        Ok(out)
    }
}

/// Greedy field-basis of a space under a generator action of a degree-`d`
/// field: scan the standard basis, keeping each vector not in the span of
/// the orbits collected so far.  Returns the representative indices and the
/// change-of-basis matrix whose column `r·d + t` is `action^t·e_{reps[r]}`.
pub fn standard_orbit_reps(action: &Matrix, d: usize) -> Result<(Vec<usize>, Matrix)> {
    let base = action.handle().clone();
    let m = action.nrows();
    let mut span = RowSpace::new(&base, m);
    let mut reps: Vec<usize> = Vec::new();
    let mut basis_cols: Vec<Vec<FieldElement>> = Vec::new();
    let gen_pows = matrix_powers(action, d);
    for a in 0..m {
        let mut e = vec![base.zero(); m];
        e[a] = base.one();
        if span.contains(&e) {
            continue;
        }
        reps.push(a);
        for t in 0..d {
            let v = gen_pows[t].apply(&e)?;
            span.insert(&v);
            basis_cols.push(v);
        }
    }
    if basis_cols.len() != m {
        return Err(Error::NotABimodule(
            "action does not make the space a free module".into(),
        ));
    }
    let mb = Matrix::from_cols(&base, &basis_cols)?;
    Ok((reps, mb))
}

/// Powers `m^0, …, m^{k−1}`.
fn matrix_powers(m: &Matrix, k: usize) -> Vec<Matrix> {
    let mut out = Vec::with_capacity(k);
    let id = Matrix::identity(m.handle(), m.nrows());
    out.push(id);
    for t in 1..k {
        out.push(out[t - 1].mul(m).unwrap());
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::BaseField;

    fn q() -> BaseField {
        BaseField::Rationals
    }

    fn qi() -> FieldHandle {
        FieldHandle::extension(q(), &[q().from_i64(1), q().from_i64(0), q().from_i64(1)]).unwrap()
    }

    fn j(h: &FieldHandle) -> Matrix {
        Matrix::from_ints(h, &[vec![0, -1], vec![1, 0]])
    }

    #[test]
    fn self_tensor_of_quadratic_field() {
        // M = W = the quadratic field itself, right/left multiplication.
        let f = qi();
        let base = f.base_handle();
        let jm = j(&base);
        let t = TensorSpace::new(&f, &jm, &jm).unwrap();
        assert_eq!(t.dim(), 2);
        assert_eq!(t.full_dim(), 4);
        assert_eq!(t.reps(), &[0]);
        // proj ∘ section = identity
        let ps = t.proj().mul(t.section()).unwrap();
        assert_eq!(ps, Matrix::identity(&base, 2));
        // the defining relation: class(x·gen ⊗ w) = class(x ⊗ gen·w)
        let lhs = t.proj().mul(&Matrix::kronecker(&jm, &Matrix::identity(&base, 2))).unwrap();
        let rhs = t.proj().mul(&Matrix::kronecker(&Matrix::identity(&base, 2), &jm)).unwrap();
        assert_eq!(lhs, rhs);
        // pure tensors: i ⊗ 1 = 1 ⊗ i
        let one = vec![base.from_i64(1), base.from_i64(0)];
        let i = vec![base.from_i64(0), base.from_i64(1)];
        assert_eq!(t.pure(&i, &one).unwrap(), t.pure(&one, &i).unwrap());
        assert_eq!(
            t.pure(&i, &one).unwrap(),
            vec![base.from_i64(0), base.from_i64(1)]
        );
        // induced left action by the generator squares to −1
        let lam = t.induced_left(&jm).unwrap();
        let sq = lam.mul(&lam).unwrap();
        assert_eq!(sq, Matrix::identity(&base, 2).neg());
        // and agrees with the right action of the generator on W here
        assert_eq!(lam, t.map_right(&t, &jm).unwrap());
    }

    #[test]
    fn non_commuting_left_action_rejected() {
        let f = qi();
        let base = f.base_handle();
        let jm = j(&base);
        let t = TensorSpace::new(&f, &jm, &jm).unwrap();
        let bad = Matrix::from_ints(&base, &[vec![1, 0], vec![0, 0]]);
        assert!(t.induced_left(&bad).is_err());
    }

    #[test]
    fn pure_left_matrix_matches_pure_tensors() {
        let f = qi();
        let base = f.base_handle();
        let jm = j(&base);
        let w_gen = f.standard_gen_action(2);
        let t = TensorSpace::new(&f, &jm, &w_gen).unwrap();
        let x = vec![base.from_i64(3), base.from_i64(-1)];
        let px = t.pure_left(&x).unwrap();
        for beta in 0..4 {
            let mut w = vec![base.from_i64(0); 4];
            w[beta] = base.from_i64(1);
            let direct = t.pure(&x, &w).unwrap();
            assert_eq!(px.col(beta), direct);
        }
    }

    #[test]
    fn trivial_interior_field_gives_plain_tensor() {
        // F_c = base: the quotient is the plain tensor product.
        let base = FieldHandle::base(q()).unwrap();
        let id3 = Matrix::identity(&base, 3);
        let id2 = Matrix::identity(&base, 2);
        let t = TensorSpace::new(&base, &id3, &id2).unwrap();
        assert_eq!(t.dim(), 6);
        assert_eq!(t.reps(), &[0, 1, 2]);
        assert_eq!(t.proj(), &Matrix::identity(&base, 6));
    }

    #[test]
    fn quadratic_interior_with_two_dimensional_w() {
        // M = the quadratic field (dim 2), W = two copies of it (dim 4):
        // M ⊗_{F_c} W ≅ W, base dimension 4.
        let f = qi();
        let base = f.base_handle();
        let jm = j(&base);
        let w_gen = f.standard_gen_action(2);
        let t = TensorSpace::new(&f, &jm, &w_gen).unwrap();
        assert_eq!(t.dim(), 4);
        let ps = t.proj().mul(t.section()).unwrap();
        assert_eq!(ps, Matrix::identity(&base, 4));
        // relation check
        let lhs = t
            .proj()
            .mul(&Matrix::kronecker(&jm, &Matrix::identity(&base, 4)))
            .unwrap();
        let rhs = t
            .proj()
            .mul(&Matrix::kronecker(&Matrix::identity(&base, 2), &w_gen))
            .unwrap();
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn action_must_satisfy_minpoly() {
        let f = qi();
        let base = f.base_handle();
        let id = Matrix::identity(&base, 2);
        // identity does not satisfy x^2 + 1
        assert!(TensorSpace::new(&f, &id, &j(&base)).is_err());
    }
}
