//! Generic crystal operators: extensions, socle quotients and head
//! submodules at generic parameters.
//!
//! Each operator depends on a random choice (a point of an extension space,
//! a line in a socle, a hyperplane through an image).  Genericity is
//! certified by resampling: draw a few independent samples, accept when all
//! are pairwise isomorphic, escalate once with a larger batch, and report
//! failure otherwise.  All randomness is drawn from a counter-based seeded
//! generator, so results are reproducible.

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::{Error, Result};
use crate::field::FieldElement;
use crate::matrix::Matrix;
use crate::rep::{
    assemble_extension, ext1_space, is_isomorphic, tilde, ExtCocycle, Representation,
};
use crate::tensor::TensorSpace;
use std::collections::BTreeMap;

/// Sampling budget for genericity certification.
#[derive(Clone, Copy, Debug)]
pub struct Genericity {
    /// Samples in the first agreement round.
    pub initial: usize,
    /// Samples in the escalation round.
    pub escalated: usize,
    /// Random combinations tried per isomorphism test (after structured
    /// candidates).
    pub iso_random: usize,
}

impl Default for Genericity {
    fn default() -> Self {
        Genericity {
            initial: 3,
            escalated: 7,
            iso_random: 5,
        }
    }
}

impl Genericity {
    /// A budget scaled from a single `samples` knob.
    pub fn with_samples(samples: usize) -> Self {
        let samples = samples.max(1);
        Genericity {
            initial: samples,
            escalated: 2 * samples + 1,
            iso_random: 5,
        }
    }
}

/// Deterministically mixes parts into one seed (a splitmix64 fold), used to
/// derive independent child seeds from a master seed.
pub fn mix_seed(parts: &[u64]) -> u64 {
    let mut acc: u64 = 0xA076_1D64_78BD_642F;
    for &p in parts {
        let s = (acc ^ p).wrapping_add(0x9E37_79B9_7F4A_7C15);
        let mut z = s;
        z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
        acc = z ^ (z >> 31);
    }
    acc
}

/// Runs the agreement protocol over a deterministic sampler.
///
/// Fast path: a small batch whose members must all be pairwise isomorphic.
/// When that fails — a draw can land on a special (non-generic) parameter
/// locus — a larger fresh batch is grouped into isomorphism classes and the
/// strict-majority class is certified: the generic class is attained on a
/// dense open locus, so it dominates any honest vote, while each special
/// class sits on a proper closed subset hit only with small probability.
fn certified_sample<F>(
    sampler: F,
    seed: u64,
    budget: &Genericity,
    what: &str,
) -> Result<Representation>
where
    F: Fn(u64) -> Result<Representation>,
{
    let initial = budget.initial.max(1);
    let mut samples = Vec::with_capacity(initial);
    for k in 0..initial as u64 {
        samples.push(sampler(k)?);
    }
    let mut agree = true;
    'pairs: for x in 0..samples.len() {
        for y in (x + 1)..samples.len() {
            let iso_seed = mix_seed(&[seed, 0x15_0CEC4, 0, x as u64, y as u64]);
            if !is_isomorphic(&samples[x], &samples[y], iso_seed, budget.iso_random)? {
                agree = false;
                break 'pairs;
            }
        }
    }
    if agree {
        return Ok(samples.swap_remove(0));
    }

    let escalated = budget.escalated.max(1);
    let offset = initial as u64;
    let mut samples = Vec::with_capacity(escalated);
    for k in 0..escalated as u64 {
        samples.push(sampler(offset + k)?);
    }
    // first-seen representative per class, and how many samples joined it
    let mut class_reps: Vec<usize> = Vec::new();
    let mut class_sizes: Vec<usize> = Vec::new();
    for x in 0..samples.len() {
        let mut assigned = None;
        for (ci, &r) in class_reps.iter().enumerate() {
            let iso_seed = mix_seed(&[seed, 0x15_0CEC4, offset, r as u64, x as u64]);
            if is_isomorphic(&samples[r], &samples[x], iso_seed, budget.iso_random)? {
                assigned = Some(ci);
                break;
            }
        }
        match assigned {
            Some(ci) => class_sizes[ci] += 1,
            None => {
                class_reps.push(x);
                class_sizes.push(1);
            }
        }
    }
    let best = (0..class_sizes.len())
        .max_by_key(|&ci| class_sizes[ci])
        .expect("at least one sample");
    if 2 * class_sizes[best] > samples.len() {
        return Ok(samples.swap_remove(class_reps[best]));
    }
    Err(Error::GenericityUndetermined(format!(
        "samples of {what} split into isomorphism classes of sizes {class_sizes:?} with no majority"
    )))
}

/// Draws `count` base-field scalars in `[-49, 49]`, not all zero.  The
/// window is wide enough that proper closed loci are hit only rarely
/// (the majority vote in `certified_sample` absorbs the residual risk).
fn random_coeffs(
    handle: &crate::field::FieldHandle,
    rng: &mut ChaCha8Rng,
    count: usize,
) -> Vec<FieldElement> {
    loop {
        let coeffs: Vec<FieldElement> = (0..count)
            .map(|_| handle.from_i64(rng.gen_range(-49..=49)))
            .collect();
        if count == 0 || coeffs.iter().any(|c| !c.is_zero()) {
            return coeffs;
        }
    }
}

/// The generic extension of `quotient` by `sub`: the middle term
/// `0 → sub → E → quotient → 0` at a generic point of the extension space.
/// When the extension space vanishes this is the direct sum.
pub fn generic_extension(
    quotient: &Representation,
    sub: &Representation,
    seed: u64,
    budget: &Genericity,
) -> Result<Representation> {
    let ext = ext1_space(quotient, sub)?;
    if ext.dim() == 0 {
        return assemble_extension(quotient, sub, &ExtCocycle::zero(quotient, sub)?);
    }
    let base = quotient.graph().base().clone();
    let sampler = |k: u64| -> Result<Representation> {
        let mut rng = ChaCha8Rng::seed_from_u64(mix_seed(&[seed, 0xE87, k]));
        let coeffs = random_coeffs(&base, &mut rng, ext.dim());
        let z = ExtCocycle::combine(&ext.classes, &coeffs)?;
        assemble_extension(quotient, sub, &z)
    };
    certified_sample(sampler, seed, budget, "a generic extension")
}

/// The quotient of `rep` by a generic simple submodule `S_i` in its socle.
pub fn generic_socle_quotient(
    rep: &Representation,
    i: usize,
    seed: u64,
    budget: &Genericity,
) -> Result<Representation> {
    let graph = rep.graph().clone();
    let t = tilde(rep, i)?;
    if t.phi()? == 0 {
        return Err(Error::OperatorUndefined(format!(
            "no socle at vertex {}",
            graph.vertex_name(i)
        )));
    }
    let kernel = t.xtilde.kernel_basis();
    let field = graph.field(i).clone();
    let base = graph.base().clone();
    let d = graph.degree(i);
    let sampler = |k: u64| -> Result<Representation> {
        let mut rng = ChaCha8Rng::seed_from_u64(mix_seed(&[seed, 0x50C1E, k]));
        // A random nonzero vector of the kernel spans the generic line.
        let w = loop {
            let coeffs = random_coeffs(&base, &mut rng, kernel.ncols());
            let w = kernel.mul(&Matrix::from_vec_rm(&base, kernel.ncols(), 1, coeffs)?)?;
            if !w.is_zero() {
                break w.col(0);
            }
        };
        // Express the line in F_i-coordinates and eliminate one slot.
        let v = rep.dim(i);
        let mut c = Vec::with_capacity(v);
        for s in 0..v {
            c.push(field.from_coords(
                w[s * d..(s + 1) * d]
                    .iter()
                    .map(|e| e.base_value().clone())
                    .collect(),
            )?);
        }
        let p = c
            .iter()
            .position(|e| !e.is_zero())
            .expect("line spanned by a nonzero vector");
        let cp_inv = c[p].inv()?;
        let mut pf = Matrix::zero(&field, v - 1, v);
        let mut row = 0;
        for s in 0..v {
            if s == p {
                continue;
            }
            pf.set(row, s, field.one());
            pf.set(row, p, c[s].mul(&cp_inv).neg());
            row += 1;
        }
        let proj = pf.to_base_blocks();
        quotient_at_vertex(rep, i, &proj)
    };
    certified_sample(sampler, seed, budget, "a generic socle quotient")
}

/// The generic submodule of `rep` whose quotient is the simple `S_i` (a
/// generic hyperplane of `V_i` containing the image of the map into `i`,
/// together with all other `V_j`).
pub fn generic_head_submodule(
    rep: &Representation,
    i: usize,
    seed: u64,
    budget: &Genericity,
) -> Result<Representation> {
    let graph = rep.graph().clone();
    let t = tilde(rep, i)?;
    if t.phi_star()? == 0 {
        return Err(Error::OperatorUndefined(format!(
            "no head at vertex {}",
            graph.vertex_name(i)
        )));
    }
    let field = graph.field(i).clone();
    let d = graph.degree(i);
    let v = rep.dim(i);
    // The image of the map into vertex i, as an F_i-matrix.
    let xin = &t.xin;
    let mut im_cols = Vec::new();
    for cidx in 0..xin.ncols() {
        let col = xin.col(cidx);
        let mut fcol = Vec::with_capacity(v);
        for s in 0..v {
            fcol.push(field.from_coords(
                col[s * d..(s + 1) * d]
                    .iter()
                    .map(|e| e.base_value().clone())
                    .collect(),
            )?);
        }
        im_cols.push(fcol);
    }
    let im_f = if im_cols.is_empty() {
        Matrix::zero(&field, v, 0)
    } else {
        Matrix::from_cols(&field, &im_cols)?
    };
    // Functionals vanishing on the image: kernel of the transpose.
    let functionals = im_f.transpose().kernel_basis();
    let sampler = |k: u64| -> Result<Representation> {
        let mut rng = ChaCha8Rng::seed_from_u64(mix_seed(&[seed, 0xEAD, k]));
        let lambda = loop {
            let coeffs: Vec<FieldElement> = (0..functionals.ncols())
                .map(|_| {
                    let coords: Vec<_> = (0..d)
                        .map(|_| field.base_field().from_i64(rng.gen_range(-49..=49)))
                        .collect();
                    field.from_coords(coords).expect("degree-many coordinates")
                })
                .collect();
            let lam = functionals.mul(&Matrix::from_vec_rm(
                &field,
                functionals.ncols(),
                1,
                coeffs,
            )?)?;
            if !lam.is_zero() {
                break lam.col(0);
            }
        };
        let p = lambda
            .iter()
            .position(|e| !e.is_zero())
            .expect("nonzero functional");
        let lp_inv = lambda[p].inv()?;
        let mut inc = Matrix::zero(&field, v, v - 1);
        let mut colidx = 0;
        for s in 0..v {
            if s == p {
                continue;
            }
            inc.set(s, colidx, field.one());
            inc.set(p, colidx, lambda[s].mul(&lp_inv).neg());
            colidx += 1;
        }
        let include = inc.to_base_blocks();
        submodule_at_vertex(rep, i, &include)
    };
    certified_sample(sampler, seed, budget, "a generic head submodule")
}

/// Replaces `V_i` by a quotient along a surjection `proj` (base form of an
/// `F_i`-linear map onto a standard carrier) whose kernel lies in the socle
/// at `i`; all structure maps are transported.
fn quotient_at_vertex(
    rep: &Representation,
    i: usize,
    proj: &Matrix,
) -> Result<Representation> {
    let graph = rep.graph().clone();
    let mut dims = rep.dims().to_vec();
    let new_dim = proj.nrows() / graph.degree(i);
    dims[i] = new_dim;
    let mut maps = BTreeMap::new();
    for &(u, vv) in graph.edges() {
        for (jj, ii) in [(u, vv), (vv, u)] {
            let x = rep.map(jj, ii).expect("adjacent").clone();
            if ii == i {
                let bim = graph.bimodule(jj, ii).expect("adjacent");
                let ta = rep.arrow_space(jj, ii).expect("adjacent");
                let tq = TensorSpace::new(
                    graph.field(ii),
                    &bim.right_gen,
                    &graph.field(ii).standard_gen_action(new_dim),
                )?;
                let induced = ta.map_right(&tq, proj)?;
                let xq = x.mul(&induced.right_inverse()?)?;
                if xq.mul(&induced)? != x {
                    return Err(Error::InvalidRepresentation(
                        "socle quotient is not well-defined; the chosen line is not in the socle"
                            .into(),
                    ));
                }
                maps.insert((jj, ii), xq);
            } else if jj == i {
                maps.insert((jj, ii), proj.mul(&x)?);
            } else {
                maps.insert((jj, ii), x);
            }
        }
    }
    Representation::new(graph, dims, maps)
}

/// Replaces `V_i` by a submodule along an injection `include` (base form of
/// an `F_i`-linear map from a standard carrier) containing the image of the
/// map into `i`; all structure maps are transported.
fn submodule_at_vertex(
    rep: &Representation,
    i: usize,
    include: &Matrix,
) -> Result<Representation> {
    let graph = rep.graph().clone();
    let mut dims = rep.dims().to_vec();
    let new_dim = include.ncols() / graph.degree(i);
    dims[i] = new_dim;
    let mut maps = BTreeMap::new();
    for &(u, vv) in graph.edges() {
        for (jj, ii) in [(u, vv), (vv, u)] {
            let x = rep.map(jj, ii).expect("adjacent").clone();
            if jj == i {
                // Corestrict: solve include·Y = X, exact when the image
                // lies inside the submodule.
                match include.solve(&x)? {
                    crate::matrix::Solution::Solved { particular, .. } => {
                        maps.insert((jj, ii), particular);
                    }
                    crate::matrix::Solution::Inconsistent => {
                        return Err(Error::InvalidRepresentation(
                            "head submodule does not contain the incoming image".into(),
                        ));
                    }
                }
            } else if ii == i {
                let bim = graph.bimodule(jj, ii).expect("adjacent");
                let ta = rep.arrow_space(jj, ii).expect("adjacent");
                let tq = TensorSpace::new(
                    graph.field(ii),
                    &bim.right_gen,
                    &graph.field(ii).standard_gen_action(new_dim),
                )?;
                let induced = tq.map_right(ta, include)?;
                maps.insert((jj, ii), x.mul(&induced)?);
            } else {
                maps.insert((jj, ii), x);
            }
        }
    }
    Representation::new(graph, dims, maps)
}
