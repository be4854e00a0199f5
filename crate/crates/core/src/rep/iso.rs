//! Isomorphism testing.
//!
//! Two valid representations are isomorphic iff their homomorphism space
//! contains an element that is invertible at every vertex.  Cheap invariant
//! screens (dimension vectors, socle and head profiles, homomorphism space
//! dimensions) reject most non-isomorphic pairs; otherwise we search the
//! homomorphism space for an invertible element among basis vectors,
//! pairwise sums of basis vectors, and seeded random combinations.

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::Result;
use crate::matrix::Matrix;
use crate::rep::{hom_space, Representation};

/// Decides whether two valid representations are isomorphic.
///
/// `random_samples` bounds the number of random combinations tried after
/// the structured candidates; the default used by the generic operators
/// is 5.  A `false` answer after a surviving screen is correct with
/// overwhelming probability (an isomorphism, if present, is a generic
/// element of the homomorphism space).
pub fn is_isomorphic(
    a: &Representation,
    b: &Representation,
    seed: u64,
    random_samples: usize,
) -> Result<bool> {
    if a.dims() != b.dims() {
        return Ok(false);
    }
    if a.is_zero_module() {
        return Ok(true);
    }
    if a.phi_profile()? != b.phi_profile()? {
        return Ok(false);
    }
    if a.phi_star_profile()? != b.phi_star_profile()? {
        return Ok(false);
    }
    let hab = hom_space(a, b)?;
    let hba = hom_space(b, a)?;
    if hab.dim() != hba.dim() {
        return Ok(false);
    }
    if hab.dim() == 0 {
        return Ok(false);
    }
    // Structured candidates: basis elements, then pairwise sums.
    for fam in &hab.basis {
        if family_invertible(fam) {
            return Ok(true);
        }
    }
    for x in 0..hab.basis.len() {
        for y in (x + 1)..hab.basis.len() {
            let fam: Vec<Matrix> = hab.basis[x]
                .iter()
                .zip(&hab.basis[y])
                .map(|(m, n)| m.add(n))
                .collect::<Result<_>>()?;
            if family_invertible(&fam) {
                return Ok(true);
            }
        }
    }
    // Seeded random combinations.
    let base = a.graph().base().clone();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..random_samples {
        let coeffs: Vec<_> = (0..hab.dim())
            .map(|_| base.from_i64(rng.gen_range(-49..=49)))
            .collect();
        if coeffs.iter().all(|c| c.is_zero()) {
            continue;
        }
        let n = a.graph().n();
        let mut fam: Vec<Matrix> = (0..n)
            .map(|i| Matrix::zero(&base, b.base_dim(i), a.base_dim(i)))
            .collect();
        for (k, c) in coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            for (i, m) in hab.basis[k].iter().enumerate() {
                fam[i] = fam[i].add(&m.scale(c))?;
            }
        }
        if family_invertible(&fam) {
            return Ok(true);
        }
    }
    Ok(false)
}

fn family_invertible(fam: &[Matrix]) -> bool {
    fam.iter()
        .all(|m| m.is_square() && m.rank() == m.nrows())
}
