//! Seeded random representations, used by property tests.

use std::collections::BTreeMap;
use std::sync::Arc;

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::Result;
use crate::matrix::Matrix;
use crate::modgraph::ModGraph;
use crate::rep::{
    arrow_spaces, assemble_extension, ext1_space, ExtCocycle, Representation,
};

/// A random cocycle in `Ext¹(quotient, sub)` (zero when the space is zero).
pub fn random_cocycle(
    quotient: &Representation,
    sub: &Representation,
    rng: &mut ChaCha8Rng,
) -> Result<ExtCocycle> {
    let ext = ext1_space(quotient, sub)?;
    if ext.dim() == 0 {
        return ExtCocycle::zero(quotient, sub);
    }
    let base = quotient.graph().base();
    let coeffs: Vec<_> = (0..ext.dim())
        .map(|_| base.from_i64(rng.gen_range(-4..=4)))
        .collect();
    ExtCocycle::combine(&ext.classes, &coeffs)
}

/// A random valid nilpotent representation, built by iterated extensions of
/// simples (every iterated extension of nilpotent representations is
/// nilpotent, so validity holds by construction).
pub fn random_nilpotent(
    graph: &Arc<ModGraph>,
    seed: u64,
    steps: usize,
) -> Result<Representation> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut cur = Representation::zero_module(graph.clone());
    for _ in 0..steps {
        let i = rng.gen_range(0..graph.n());
        let s = Representation::simple(graph.clone(), i)?;
        let (quotient, sub) = if rng.gen_bool(0.5) {
            (s.clone(), cur.clone())
        } else {
            (cur.clone(), s.clone())
        };
        let z = random_cocycle(&quotient, &sub, &mut rng)?;
        cur = assemble_extension(&quotient, &sub, &z)?;
    }
    Ok(cur)
}

/// A representation-shaped assignment whose structure maps are random
/// subject only to linearity over the target vertex fields — relations and
/// nilpotency are deliberately *not* imposed.  Used to test that different
/// formulations of the relations agree on arbitrary assignments.
pub fn random_linear_family(
    graph: &Arc<ModGraph>,
    dims: &[usize],
    seed: u64,
) -> Result<Representation> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let base = graph.base();
    let spaces = arrow_spaces(graph, dims)?;
    let mut maps = BTreeMap::new();
    for (&(j, i), space) in &spaces {
        let bim = graph.bimodule(j, i).expect("adjacent");
        let lam = space.induced_left(&bim.left_gen)?;
        let gj = graph.field(j).standard_gen_action(dims[j]);
        let rows = graph.degree(j) * dims[j];
        let cols = space.dim();
        // Solutions of G_j·X = X·Λ via the row-major vec trick:
        // vec(G·X − X·Λ) = (G ⊗ I − I ⊗ Λᵀ)·vec(X).
        let op = Matrix::kronecker(&gj, &Matrix::identity(base, cols)).sub(
            &Matrix::kronecker(&Matrix::identity(base, rows), &lam.transpose()),
        )?;
        let kernel = op.kernel_basis();
        let mut flat = vec![base.zero(); rows * cols];
        for k in 0..kernel.ncols() {
            let c = base.from_i64(rng.gen_range(-5..=5));
            if c.is_zero() {
                continue;
            }
            for (idx, entry) in kernel.col(k).into_iter().enumerate() {
                flat[idx] = flat[idx].add(&entry.mul(&c));
            }
        }
        maps.insert((j, i), Matrix::from_vec_rm(base, rows, cols, flat)?);
    }
    Representation::new(graph.clone(), dims.to_vec(), maps)
}
