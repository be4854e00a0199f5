//! Independent combinatorial oracle: positive-root enumeration by reflection
//! closure, Kostant partition counting by dynamic programming, and the
//! finite-type classification of symmetrizable Cartan matrices.
//!
//! Everything here is derived from the integer Cartan data alone, with no
//! reference to bimodules or representations, so it can serve as an
//! independent cross-check for the representation-theoretic machinery.

use crate::modgraph::CartanData;
use crate::{Error, Result};
use std::collections::{BTreeMap, BTreeSet};

/// Positive roots of a finite-type Cartan matrix, as nonnegative integer
/// coordinate vectors in the simple-root basis, sorted by (height, lex).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RootSystemData {
    pub cartan: CartanData,
    pub positive_roots: Vec<Vec<i64>>,
}

impl RootSystemData {
    pub fn rank(&self) -> usize {
        self.cartan.n()
    }

    pub fn count(&self) -> usize {
        self.positive_roots.len()
    }
}

/// Computes all positive roots by saturating the simple roots under the
/// reflections `α ↦ α − ⟨α, coroot_i⟩·α_i`, keeping only vectors with all
/// coordinates nonnegative.
///
/// Errors with [`Error::InfiniteType`] when the Cartan matrix is not of
/// finite type (the closure would not terminate).
pub fn positive_roots(cartan: &CartanData) -> Result<RootSystemData> {
    if !cartan.is_finite_type() {
        return Err(Error::InfiniteType(
            "positive-root enumeration requires a finite-type Cartan matrix".into(),
        ));
    }
    let n = cartan.n();
    let mut roots: BTreeSet<Vec<i64>> = (0..n).map(|i| cartan.simple_root(i)).collect();
    let mut frontier: Vec<Vec<i64>> = roots.iter().cloned().collect();
    while let Some(alpha) = frontier.pop() {
        for i in 0..n {
            let pairing = cartan.coroot_pairing(&alpha, i);
            let mut beta = alpha.clone();
            beta[i] -= pairing;
            if beta.iter().all(|&x| x >= 0) && beta.iter().any(|&x| x > 0) && roots.insert(beta.clone())
            {
                frontier.push(beta);
            }
        }
    }
    let mut positive_roots: Vec<Vec<i64>> = roots.into_iter().collect();
    positive_roots.sort_by_key(|r| (r.iter().sum::<i64>(), r.clone()));
    Ok(RootSystemData {
        cartan: cartan.clone(),
        positive_roots,
    })
}

/// Number of multisets of positive roots summing to the weight `v`
/// (the Kostant partition count), computed by dynamic programming over the
/// fixed root order of `roots`.
///
/// The result does not depend on that order; overflow of the `u64`
/// accumulator is reported as an error rather than wrapping.
pub fn kostant_count(roots: &RootSystemData, v: &[i64]) -> Result<u64> {
    if v.len() != roots.rank() {
        return Err(Error::ShapeMismatch("weight vector length".into()));
    }
    if v.iter().any(|&x| x < 0) {
        return Ok(0);
    }
    let mut memo: BTreeMap<(usize, Vec<i64>), u64> = BTreeMap::new();
    count_from(&roots.positive_roots, 0, v.to_vec(), &mut memo)
}

fn count_from(
    roots: &[Vec<i64>],
    idx: usize,
    remaining: Vec<i64>,
    memo: &mut BTreeMap<(usize, Vec<i64>), u64>,
) -> Result<u64> {
    if remaining.iter().all(|&x| x == 0) {
        return Ok(1);
    }
    if idx == roots.len() {
        return Ok(0);
    }
    if let Some(&hit) = memo.get(&(idx, remaining.clone())) {
        return Ok(hit);
    }
    let mut total: u64 = 0;
    let mut rest = remaining.clone();
    loop {
        total = total
            .checked_add(count_from(roots, idx + 1, rest.clone(), memo)?)
            .ok_or_else(|| Error::Overflow("Kostant partition count exceeds u64".into()))?;
        for (r, root) in rest.iter_mut().zip(&roots[idx]) {
            *r -= root;
        }
        if rest.iter().any(|&x| x < 0) {
            break;
        }
    }
    memo.insert((idx, remaining), total);
    Ok(total)
}

/// Classifies a finite-type Cartan matrix, returning a human-readable label
/// such as `"B₂/C₂"` or `"A₁×A₁"` (one factor per connected component of the
/// diagram, joined by `×`).
pub fn type_label(cartan: &CartanData) -> Result<String> {
    if !cartan.is_finite_type() {
        return Err(Error::InfiniteType(
            "type labels are defined for finite-type Cartan matrices only".into(),
        ));
    }
    let n = cartan.n();
    // connected components of the diagram
    let mut comp = vec![usize::MAX; n];
    let mut labels = Vec::new();
    for start in 0..n {
        if comp[start] != usize::MAX {
            continue;
        }
        let id = labels.len();
        let mut stack = vec![start];
        let mut members = Vec::new();
        comp[start] = id;
        while let Some(i) = stack.pop() {
            members.push(i);
            for j in 0..n {
                if j != i && cartan.c[i][j] != 0 && comp[j] == usize::MAX {
                    comp[j] = id;
                    stack.push(j);
                }
            }
        }
        members.sort_unstable();
        labels.push(component_label(cartan, &members)?);
    }
    Ok(labels.join("×"))
}

fn component_label(cartan: &CartanData, members: &[usize]) -> Result<String> {
    // restrict the Cartan matrix to the component and count positive roots
    let sub = CartanData {
        c: members
            .iter()
            .map(|&i| members.iter().map(|&j| cartan.c[i][j]).collect())
            .collect(),
        d: members.iter().map(|&i| cartan.d[i]).collect(),
    };
    let rank = members.len();
    let roots = positive_roots(&sub)?.count();
    Ok(match (rank, roots) {
        (1, 1) => "A₁".to_string(),
        (2, 3) => "A₂".to_string(),
        (2, 4) => "B₂/C₂".to_string(),
        (2, 6) => "G₂".to_string(),
        (3, 6) => "A₃".to_string(),
        (3, 9) => "B₃/C₃".to_string(),
        (4, 10) => "A₄".to_string(),
        _ => format!("rank-{rank} ({roots} positive roots)"),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::modgraph::{testdata, ModGraph};

    fn c2_cartan() -> CartanData {
        ModGraph::validate(&testdata::c2_input())
            .unwrap()
            .cartan()
            .clone()
    }

    fn a2_cartan() -> CartanData {
        CartanData {
            c: vec![vec![2, -1], vec![-1, 2]],
            d: vec![1, 1],
        }
    }

    fn a3_cartan() -> CartanData {
        CartanData {
            c: vec![vec![2, -1, 0], vec![-1, 2, -1], vec![0, -1, 2]],
            d: vec![1, 1, 1],
        }
    }

    fn a1xa1_cartan() -> CartanData {
        CartanData {
            c: vec![vec![2, 0], vec![0, 2]],
            d: vec![1, 1],
        }
    }

    #[test]
    fn c2_positive_roots() {
        let roots = positive_roots(&c2_cartan()).unwrap();
        assert_eq!(
            roots.positive_roots,
            vec![vec![0, 1], vec![1, 0], vec![1, 1], vec![2, 1]]
        );
    }

    #[test]
    fn root_counts_match_classification() {
        assert_eq!(positive_roots(&a2_cartan()).unwrap().count(), 3);
        assert_eq!(positive_roots(&c2_cartan()).unwrap().count(), 4);
        assert_eq!(positive_roots(&a3_cartan()).unwrap().count(), 6);
        assert_eq!(positive_roots(&a1xa1_cartan()).unwrap().count(), 2);
    }

    #[test]
    fn a2_roots_symmetric_under_diagram_swap() {
        let roots = positive_roots(&a2_cartan()).unwrap();
        let mut swapped: Vec<Vec<i64>> = roots
            .positive_roots
            .iter()
            .map(|r| vec![r[1], r[0]])
            .collect();
        swapped.sort_by_key(|r| (r.iter().sum::<i64>(), r.clone()));
        assert_eq!(swapped, roots.positive_roots);
    }

    #[test]
    fn infinite_type_is_rejected() {
        let affine = ModGraph::validate(&testdata::sl2hat_input(1)).unwrap();
        assert!(matches!(
            positive_roots(affine.cartan()),
            Err(Error::InfiniteType(_))
        ));
        assert!(matches!(
            type_label(affine.cartan()),
            Err(Error::InfiniteType(_))
        ));
    }

    #[test]
    fn kostant_counts_for_c2() {
        let roots = positive_roots(&c2_cartan()).unwrap();
        assert_eq!(kostant_count(&roots, &[3, 2]).unwrap(), 5);
        assert_eq!(kostant_count(&roots, &[1, 1]).unwrap(), 2);
        assert_eq!(kostant_count(&roots, &[0, 0]).unwrap(), 1);
        assert_eq!(kostant_count(&roots, &[1, 0]).unwrap(), 1);
        assert_eq!(kostant_count(&roots, &[2, 1]).unwrap(), 3);
        // a weight outside the positive cone of the roots
        assert_eq!(kostant_count(&roots, &[0, 3]).unwrap(), 1);
        assert_eq!(kostant_count(&roots, &[-1, 0]).unwrap(), 0);
    }

    #[test]
    fn kostant_count_is_order_independent() {
        let roots = positive_roots(&c2_cartan()).unwrap();
        let weights = [[3, 2], [4, 3], [2, 2], [5, 1], [0, 4]];
        // try every permutation of the four roots
        let base = roots.positive_roots.clone();
        let mut perms = vec![base.clone()];
        // simple permutation generation: all orderings of 4 elements
        fn heap_permutations(v: &mut Vec<Vec<i64>>, k: usize, out: &mut Vec<Vec<Vec<i64>>>) {
            if k <= 1 {
                out.push(v.clone());
                return;
            }
            for i in 0..k {
                heap_permutations(v, k - 1, out);
                if k.is_multiple_of(2) {
                    v.swap(i, k - 1);
                } else {
                    v.swap(0, k - 1);
                }
            }
        }
        let mut all = Vec::new();
        heap_permutations(&mut base.clone(), 4, &mut all);
        perms.extend(all);
        for w in weights {
            let reference = kostant_count(&roots, &w).unwrap();
            for p in &perms {
                let sys = RootSystemData {
                    cartan: roots.cartan.clone(),
                    positive_roots: p.clone(),
                };
                assert_eq!(kostant_count(&sys, &w).unwrap(), reference);
            }
        }
    }

    #[test]
    fn type_labels() {
        assert_eq!(type_label(&c2_cartan()).unwrap(), "B₂/C₂");
        assert_eq!(type_label(&a1xa1_cartan()).unwrap(), "A₁×A₁");
        assert_eq!(type_label(&a2_cartan()).unwrap(), "A₂");
        assert_eq!(type_label(&a3_cartan()).unwrap(), "A₃");
    }

    #[test]
    fn dimension_recursion_identity() {
        // For every Cartan datum, weight v, vertex i, and k ≥ 1, the
        // count-preserving recursion step used for the dimension bookkeeping
        // holds symbolically:
        //   2·D(v−kα_i) − (v−kα_i, v−kα_i) + 4k·d_i·v_i − 2k·(v, α_i)
        //     = 2·D(v) − (v, v)
        // where D(v) = Σ d_i·v_i².
        use rand::Rng;
        use rand::SeedableRng;
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(0xD1CE);
        for cartan in [c2_cartan(), a2_cartan(), a3_cartan(), a1xa1_cartan()] {
            let n = cartan.n();
            let d_poly = |v: &[i64]| -> i64 {
                v.iter()
                    .enumerate()
                    .map(|(i, &x)| cartan.d[i] as i64 * x * x)
                    .sum()
            };
            for _ in 0..1000 {
                let v: Vec<i64> = (0..n).map(|_| rng.gen_range(0..=6)).collect();
                let i = rng.gen_range(0..n);
                let k = rng.gen_range(1..=3i64);
                let mut vbar = v.clone();
                vbar[i] -= k;
                let alpha_i = cartan.simple_root(i);
                let lhs = 2 * d_poly(&vbar) - cartan.symmetric_form(&vbar, &vbar).unwrap()
                    + 4 * k * cartan.d[i] as i64 * v[i]
                    - 2 * k * cartan.symmetric_form(&v, &alpha_i).unwrap();
                let rhs = 2 * d_poly(&v) - cartan.symmetric_form(&v, &v).unwrap();
                assert_eq!(lhs, rhs);
            }
        }
    }
}
