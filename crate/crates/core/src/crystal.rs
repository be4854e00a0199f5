//! Crystal graph enumeration over a finite-type modulated graph.
//!
//! Nodes are isomorphism classes of the modules produced by closing the
//! zero module under the two raising families: `e_i` (generic extension
//! with the simple `S_i` as submodule) and `e_i*` (generic extension with
//! `S_i` as quotient).  Lowering edges `f_i` / `f_i*` are computed
//! independently by generic socle quotients and head submodules and matched
//! back into the node set, so the mutual-inverse laws are genuinely checked
//! rather than assumed.
//!
//! Enumeration proceeds level by level in total weight.  All random choices
//! derive from one master seed via counter hashing, so a run is a pure
//! function of (graph, depth, seed, budget) and output bytes are stable.

use crate::modgraph::ModGraph;
use crate::rep::{
    ext1_space, generic_extension, generic_head_submodule, generic_socle_quotient, is_isomorphic,
    mix_seed, Genericity, Representation,
};
use crate::{Error, Result};
use std::collections::BTreeMap;
use std::sync::Arc;

/// Seed-mix tags keeping the per-purpose random streams disjoint.
const TAG_RAISE: u64 = 0xC4A7;
const TAG_DEDUP: u64 = 0xDED0;
const TAG_LOWER: u64 = 0x10E6;
const TAG_MATCH: u64 = 0x3A7C;

/// One isomorphism class in the enumerated crystal.
#[derive(Debug, Clone)]
pub struct CrystalNode {
    /// Dimension vector of the representative (the node weight in the
    /// simple-root basis).
    pub weight: Vec<usize>,
    /// Representative module of the class.
    pub rep: Representation,
    /// Socle multiplicities: `phi[i]` is the number of copies of the simple
    /// at `i` in the socle.
    pub phi: Vec<usize>,
    /// Head multiplicities.
    pub phi_star: Vec<usize>,
}

impl CrystalNode {
    pub fn total_weight(&self) -> usize {
        self.weight.iter().sum()
    }

    pub fn weight_i64(&self) -> Vec<i64> {
        self.weight.iter().map(|&w| w as i64).collect()
    }
}

/// The enumerated crystal graph with all four operator adjacencies.
#[derive(Debug)]
pub struct CrystalGraph {
    pub graph: Arc<ModGraph>,
    pub depth: usize,
    pub seed: u64,
    /// Nodes ordered by (total weight, weight lexicographic, discovery).
    pub nodes: Vec<CrystalNode>,
    /// `(node, vertex) → node` for each operator family.
    pub e_edges: BTreeMap<(usize, usize), usize>,
    pub e_star_edges: BTreeMap<(usize, usize), usize>,
    pub f_edges: BTreeMap<(usize, usize), usize>,
    pub f_star_edges: BTreeMap<(usize, usize), usize>,
}

impl CrystalGraph {
    pub fn node_count(&self) -> usize {
        self.nodes.len()
    }

    /// `ε_i = φ_i − ⟨wt, coroot_i⟩`.
    pub fn epsilon(&self, idx: usize, i: usize) -> i64 {
        let node = &self.nodes[idx];
        node.phi[i] as i64 - self.graph.cartan().coroot_pairing(&node.weight_i64(), i)
    }

    /// `ε_i* = φ_i* − ⟨wt, coroot_i⟩`.
    pub fn epsilon_star(&self, idx: usize, i: usize) -> i64 {
        let node = &self.nodes[idx];
        node.phi_star[i] as i64 - self.graph.cartan().coroot_pairing(&node.weight_i64(), i)
    }

    /// The balance defect `φ_i + φ_i* − ⟨wt, coroot_i⟩`; nonnegative in a
    /// well-formed crystal and zero exactly when `e_i = e_i*` at the node.
    pub fn balance(&self, idx: usize, i: usize) -> i64 {
        let node = &self.nodes[idx];
        node.phi[i] as i64 + node.phi_star[i] as i64
            - self.graph.cartan().coroot_pairing(&node.weight_i64(), i)
    }

    /// Node count per weight vector.
    pub fn counts_by_weight(&self) -> BTreeMap<Vec<usize>, usize> {
        let mut counts = BTreeMap::new();
        for node in &self.nodes {
            *counts.entry(node.weight.clone()).or_insert(0) += 1;
        }
        counts
    }

    /// For each vertex, compares the balance defect with the two Ext
    /// dimensions (over the vertex field) between the representative and
    /// the simple; the three numbers agree in a well-formed crystal.
    pub fn ext_invariants(&self, idx: usize) -> Result<Vec<ExtInvariant>> {
        let node = &self.nodes[idx];
        let mut out = Vec::new();
        for i in 0..self.graph.n() {
            let s = Representation::simple(self.graph.clone(), i)?;
            let d = self.graph.degree(i);
            let to_simple = ext1_space(&node.rep, &s)?.dim();
            let from_simple = ext1_space(&s, &node.rep)?.dim();
            if to_simple % d != 0 || from_simple % d != 0 {
                return Err(Error::InvalidRepresentation(
                    "Ext dimension is not a multiple of the vertex degree".into(),
                ));
            }
            out.push(ExtInvariant {
                vertex: i,
                balance: self.balance(idx, i),
                ext_to_simple: to_simple / d,
                ext_from_simple: from_simple / d,
            });
        }
        Ok(out)
    }

    /// JSON document with nodes (weights and statistics) and all four edge
    /// families; byte-deterministic for fixed inputs.
    pub fn to_json(&self) -> serde_json::Value {
        let n = self.graph.n();
        let nodes: Vec<serde_json::Value> = self
            .nodes
            .iter()
            .enumerate()
            .map(|(idx, node)| {
                serde_json::json!({
                    "id": idx,
                    "weight": node.weight,
                    "phi": node.phi,
                    "phi_star": node.phi_star,
                    "epsilon": (0..n).map(|i| self.epsilon(idx, i)).collect::<Vec<_>>(),
                    "epsilon_star": (0..n).map(|i| self.epsilon_star(idx, i)).collect::<Vec<_>>(),
                })
            })
            .collect();
        let edge_list = |edges: &BTreeMap<(usize, usize), usize>| -> Vec<serde_json::Value> {
            edges
                .iter()
                .map(|(&(from, i), &to)| serde_json::json!([from, i, to]))
                .collect()
        };
        let counts: Vec<serde_json::Value> = self
            .counts_by_weight()
            .into_iter()
            .map(|(w, c)| serde_json::json!({"weight": w, "count": c}))
            .collect();
        serde_json::json!({
            "graph": self.graph.name(),
            "depth": self.depth,
            "seed": self.seed,
            "node_count": self.nodes.len(),
            "nodes": nodes,
            "edges": {
                "e": edge_list(&self.e_edges),
                "e_star": edge_list(&self.e_star_edges),
                "f": edge_list(&self.f_edges),
                "f_star": edge_list(&self.f_star_edges),
            },
            "counts_by_weight": counts,
        })
    }

    /// DOT rendering: raising edges only, solid for `e_i` and dashed for
    /// `e_i*`, labeled by the vertex name.
    pub fn to_dot(&self) -> String {
        let mut out = String::new();
        out.push_str("digraph crystal {\n  rankdir=BT;\n");
        for (idx, node) in self.nodes.iter().enumerate() {
            let weight = node
                .weight
                .iter()
                .map(|w| w.to_string())
                .collect::<Vec<_>>()
                .join(",");
            out.push_str(&format!("  n{idx} [label=\"{idx} ({weight})\"];\n"));
        }
        for (&(from, i), &to) in &self.e_edges {
            out.push_str(&format!(
                "  n{from} -> n{to} [label=\"{}\", style=solid];\n",
                self.graph.vertex_name(i)
            ));
        }
        for (&(from, i), &to) in &self.e_star_edges {
            out.push_str(&format!(
                "  n{from} -> n{to} [label=\"{}\", style=dashed];\n",
                self.graph.vertex_name(i)
            ));
        }
        out.push_str("}\n");
        out
    }
}

/// Per-vertex comparison of the balance defect against Ext dimensions.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExtInvariant {
    pub vertex: usize,
    pub balance: i64,
    /// `dim Ext¹(T, S_i)` over the vertex field.
    pub ext_to_simple: usize,
    /// `dim Ext¹(S_i, T)` over the vertex field.
    pub ext_from_simple: usize,
}

impl ExtInvariant {
    pub fn holds(&self) -> bool {
        self.balance >= 0
            && self.balance as usize == self.ext_to_simple
            && self.balance as usize == self.ext_from_simple
    }
}

fn node_from_rep(rep: Representation) -> Result<CrystalNode> {
    let weight = rep.dims().to_vec();
    let phi = rep.phi_profile()?;
    let phi_star = rep.phi_star_profile()?;
    Ok(CrystalNode {
        weight,
        rep,
        phi,
        phi_star,
    })
}

/// Enumerates all nodes of total weight at most `depth`, closing the zero
/// module under both raising families, and computes all four edge families.
///
/// Requires a finite-type graph: only there is a single generic
/// representative a sound identifier for a node.
pub fn enumerate(
    graph: &Arc<ModGraph>,
    depth: usize,
    seed: u64,
    budget: &Genericity,
) -> Result<CrystalGraph> {
    if !graph.cartan().is_finite_type() {
        return Err(Error::CrystalScope(
            "crystal enumeration requires a finite-type Cartan matrix".into(),
        ));
    }
    let n = graph.n();
    let mut nodes = vec![node_from_rep(Representation::zero_module(graph.clone()))?];
    let mut level_start = vec![0usize, 1];
    let mut e_edges = BTreeMap::new();
    let mut e_star_edges = BTreeMap::new();

    let mut simples = Vec::with_capacity(n);
    for i in 0..n {
        simples.push(Representation::simple(graph.clone(), i)?);
    }

    for level in 0..depth {
        // candidate children of this level, each with a discovery number
        let mut buffer: Vec<CrystalNode> = Vec::new();
        let mut pending: Vec<(usize, bool, usize, usize)> = Vec::new();
        for idx in level_start[level]..level_start[level + 1] {
            for (star, op_code) in [(false, 1u64), (true, 2u64)] {
                for i in 0..n {
                    let child_seed = mix_seed(&[TAG_RAISE, seed, idx as u64, op_code, i as u64]);
                    let parent = &nodes[idx].rep;
                    let child = if star {
                        generic_extension(&simples[i], parent, child_seed, budget)?
                    } else {
                        generic_extension(parent, &simples[i], child_seed, budget)?
                    };
                    let weight = child.dims().to_vec();
                    let mut found = None;
                    for (b_idx, cand) in buffer.iter().enumerate() {
                        if cand.weight != weight {
                            continue;
                        }
                        let iso_seed = mix_seed(&[
                            TAG_DEDUP,
                            seed,
                            idx as u64,
                            op_code,
                            i as u64,
                            b_idx as u64,
                        ]);
                        if is_isomorphic(&child, &cand.rep, iso_seed, budget.iso_random)? {
                            found = Some(b_idx);
                            break;
                        }
                    }
                    let b_idx = match found {
                        Some(b) => b,
                        None => {
                            buffer.push(node_from_rep(child)?);
                            buffer.len() - 1
                        }
                    };
                    pending.push((idx, star, i, b_idx));
                }
            }
        }
        // canonical order: weight lexicographic, then discovery
        let mut order: Vec<usize> = (0..buffer.len()).collect();
        order.sort_by(|&a, &b| buffer[a].weight.cmp(&buffer[b].weight).then(a.cmp(&b)));
        let mut final_of_buffer = vec![0usize; buffer.len()];
        let base_idx = nodes.len();
        for (pos, &b_idx) in order.iter().enumerate() {
            final_of_buffer[b_idx] = base_idx + pos;
        }
        let mut sorted: Vec<(usize, CrystalNode)> = buffer
            .into_iter()
            .enumerate()
            .map(|(b_idx, node)| (final_of_buffer[b_idx], node))
            .collect();
        sorted.sort_by_key(|&(final_idx, _)| final_idx);
        for (_, node) in sorted {
            nodes.push(node);
        }
        level_start.push(nodes.len());
        for (parent, star, i, b_idx) in pending {
            let target = final_of_buffer[b_idx];
            if star {
                e_star_edges.insert((parent, i), target);
            } else {
                e_edges.insert((parent, i), target);
            }
        }
    }

    // weight → node indices, for matching lowering targets
    let mut by_weight: BTreeMap<Vec<usize>, Vec<usize>> = BTreeMap::new();
    for (idx, node) in nodes.iter().enumerate() {
        by_weight.entry(node.weight.clone()).or_default().push(idx);
    }

    let mut f_edges = BTreeMap::new();
    let mut f_star_edges = BTreeMap::new();
    for idx in 0..nodes.len() {
        for (star, op_code) in [(false, 1u64), (true, 2u64)] {
            for i in 0..n {
                let defined = if star {
                    nodes[idx].phi_star[i] > 0
                } else {
                    nodes[idx].phi[i] > 0
                };
                if !defined {
                    continue;
                }
                let lower_seed = mix_seed(&[TAG_LOWER, seed, idx as u64, op_code, i as u64]);
                let lowered = if star {
                    generic_head_submodule(&nodes[idx].rep, i, lower_seed, budget)?
                } else {
                    generic_socle_quotient(&nodes[idx].rep, i, lower_seed, budget)?
                };
                let weight = lowered.dims().to_vec();
                let mut target = None;
                for &cand in by_weight.get(&weight).map(|v| v.as_slice()).unwrap_or(&[]) {
                    let iso_seed = mix_seed(&[
                        TAG_MATCH,
                        seed,
                        idx as u64,
                        op_code,
                        i as u64,
                        cand as u64,
                    ]);
                    if is_isomorphic(&lowered, &nodes[cand].rep, iso_seed, budget.iso_random)? {
                        target = Some(cand);
                        break;
                    }
                }
                let target = target.ok_or_else(|| {
                    Error::GenericityUndetermined(format!(
                        "lowering at vertex {} from node {} does not match any enumerated class",
                        graph.vertex_name(i),
                        idx
                    ))
                })?;
                if star {
                    f_star_edges.insert((idx, i), target);
                } else {
                    f_edges.insert((idx, i), target);
                }
            }
        }
    }

    Ok(CrystalGraph {
        graph: graph.clone(),
        depth,
        seed,
        nodes,
        e_edges,
        e_star_edges,
        f_edges,
        f_star_edges,
    })
}

/// Result of the combinatorial-crystal axiom check.
#[derive(Debug)]
pub struct AxiomReport {
    pub depth: usize,
    /// Nodes of total weight at most this bound were checked (two levels
    /// are trimmed from the frontier so every needed raising target
    /// exists).
    pub checked_depth: usize,
    pub checked_nodes: usize,
    pub violations: Vec<String>,
}

impl AxiomReport {
    pub fn is_clean(&self) -> bool {
        self.violations.is_empty()
    }
}

impl std::fmt::Display for AxiomReport {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        writeln!(
            f,
            "checked {} nodes of total weight <= {} (enumerated to {})",
            self.checked_nodes, self.checked_depth, self.depth
        )?;
        if self.violations.is_empty() {
            write!(f, "no violations")
        } else {
            writeln!(f, "{} violations:", self.violations.len())?;
            for v in &self.violations {
                writeln!(f, "  {v}")?;
            }
            Ok(())
        }
    }
}

struct Structure<'a> {
    label: &'a str,
    raise: &'a BTreeMap<(usize, usize), usize>,
    lower: &'a BTreeMap<(usize, usize), usize>,
    phi_of: fn(&CrystalNode, usize) -> usize,
}

/// Verifies the combinatorial-crystal laws on the enumerated graph: for each
/// of the two operator families, the weight/φ/ε bookkeeping of raising, the
/// mutual inverseness of raising and lowering, that φ counts the maximal
/// lowering chain, and that every checked node lowers to the zero node; then
/// the cross-family laws (commutation of `e_i*` with `e_j` for `i ≠ j`,
/// nonnegative balance defect, equality of the families at balance 0,
/// φ-preservation at balance ≥ 1, and commutation at balance ≥ 2).
///
/// Violations are report content, not errors.
pub fn check_axioms(cg: &CrystalGraph) -> AxiomReport {
    let mut violations = Vec::new();
    let cartan = cg.graph.cartan();
    let n = cg.graph.n();

    let zero_nodes = cg
        .nodes
        .iter()
        .filter(|node| node.total_weight() == 0)
        .count();
    if zero_nodes != 1 {
        violations.push(format!(
            "expected exactly one weight-0 node, found {zero_nodes}"
        ));
    }

    // Two levels below the enumeration frontier every one- and two-step
    // raising target exists; shallower enumerations check nothing.
    if cg.depth < 2 {
        return AxiomReport {
            depth: cg.depth,
            checked_depth: 0,
            checked_nodes: 0,
            violations,
        };
    }
    let checked_depth = cg.depth - 2;

    let structures = [
        Structure {
            label: "e",
            raise: &cg.e_edges,
            lower: &cg.f_edges,
            phi_of: |node, i| node.phi[i],
        },
        Structure {
            label: "e*",
            raise: &cg.e_star_edges,
            lower: &cg.f_star_edges,
            phi_of: |node, i| node.phi_star[i],
        },
    ];

    let mut checked_nodes = 0;
    for (idx, node) in cg.nodes.iter().enumerate() {
        if node.total_weight() > checked_depth {
            continue;
        }
        checked_nodes += 1;

        for st in &structures {
            for i in 0..n {
                let phi = (st.phi_of)(node, i);
                // raising bookkeeping
                match st.raise.get(&(idx, i)) {
                    None => violations.push(format!(
                        "node {idx}: {}_{} is undefined",
                        st.label,
                        cg.graph.vertex_name(i)
                    )),
                    Some(&up) => {
                        let up_node = &cg.nodes[up];
                        let mut expected = node.weight.clone();
                        expected[i] += 1;
                        if up_node.weight != expected {
                            violations.push(format!(
                                "node {idx}: {}_{} changes weight {:?} to {:?}",
                                st.label,
                                cg.graph.vertex_name(i),
                                node.weight,
                                up_node.weight
                            ));
                        }
                        let phi_up = (st.phi_of)(up_node, i);
                        if phi_up != phi + 1 {
                            violations.push(format!(
                                "node {idx}: {}_{} moves φ from {} to {} (want {})",
                                st.label,
                                cg.graph.vertex_name(i),
                                phi,
                                phi_up,
                                phi + 1
                            ));
                        }
                        // ε = φ − ⟨wt, coroot⟩ must drop by exactly 1
                        let eps = phi as i64 - cartan.coroot_pairing(&node.weight_i64(), i);
                        let eps_up =
                            phi_up as i64 - cartan.coroot_pairing(&up_node.weight_i64(), i);
                        if eps_up != eps - 1 {
                            violations.push(format!(
                                "node {idx}: {}_{} moves ε from {} to {} (want {})",
                                st.label,
                                cg.graph.vertex_name(i),
                                eps,
                                eps_up,
                                eps - 1
                            ));
                        }
                        // mutual inverse: lowering the target returns here
                        if st.lower.get(&(up, i)) != Some(&idx) {
                            violations.push(format!(
                                "node {idx}: lowering does not invert {}_{}",
                                st.label,
                                cg.graph.vertex_name(i)
                            ));
                        }
                    }
                }
                // lowering, where defined, is inverted by raising
                if let Some(&down) = st.lower.get(&(idx, i)) {
                    if st.raise.get(&(down, i)) != Some(&idx) {
                        violations.push(format!(
                            "node {idx}: raising does not invert the {}-lowering at {}",
                            st.label,
                            cg.graph.vertex_name(i)
                        ));
                    }
                }
                // φ equals the maximal lowering chain length
                let mut cur = idx;
                let mut steps = 0;
                while let Some(&next) = st.lower.get(&(cur, i)) {
                    cur = next;
                    steps += 1;
                    if steps > cg.nodes.len() {
                        break;
                    }
                }
                if steps != phi {
                    violations.push(format!(
                        "node {idx}: φ_{} = {} but the {}-lowering chain has length {}",
                        cg.graph.vertex_name(i),
                        phi,
                        st.label,
                        steps
                    ));
                }
            }
            // the zero node is reachable by lowering
            let mut cur = idx;
            let mut steps = 0;
            loop {
                if cg.nodes[cur].total_weight() == 0 {
                    break;
                }
                let next = (0..n).find_map(|i| st.lower.get(&(cur, i)));
                match next {
                    Some(&next) => cur = next,
                    None => {
                        violations.push(format!(
                            "node {idx}: stuck at node {cur} while {}-lowering to the zero node",
                            st.label
                        ));
                        break;
                    }
                }
                steps += 1;
                if steps > cg.nodes.len() {
                    violations.push(format!(
                        "node {idx}: {}-lowering to the zero node does not terminate",
                        st.label
                    ));
                    break;
                }
            }
        }

        // cross-family laws
        for i in 0..n {
            let defect = cg.balance(idx, i);
            if defect < 0 {
                violations.push(format!(
                    "node {idx}: negative balance defect {defect} at vertex {}",
                    cg.graph.vertex_name(i)
                ));
                continue;
            }
            let e_i = cg.e_edges.get(&(idx, i)).copied();
            let e_star_i = cg.e_star_edges.get(&(idx, i)).copied();
            if defect == 0 && e_i != e_star_i {
                violations.push(format!(
                    "node {idx}: balance 0 at vertex {} but e and e* disagree",
                    cg.graph.vertex_name(i)
                ));
            }
            if defect >= 1 {
                if let (Some(up), Some(up_star)) = (e_i, e_star_i) {
                    if cg.nodes[up].phi_star[i] != node.phi_star[i] {
                        violations.push(format!(
                            "node {idx}: e_{} changes φ* at vertex {}",
                            cg.graph.vertex_name(i),
                            cg.graph.vertex_name(i)
                        ));
                    }
                    if cg.nodes[up_star].phi[i] != node.phi[i] {
                        violations.push(format!(
                            "node {idx}: e*_{} changes φ at vertex {}",
                            cg.graph.vertex_name(i),
                            cg.graph.vertex_name(i)
                        ));
                    }
                }
            }
            if defect >= 2 {
                let via_e = e_i.and_then(|up| cg.e_star_edges.get(&(up, i)).copied());
                let via_star = e_star_i.and_then(|up| cg.e_edges.get(&(up, i)).copied());
                if via_e != via_star || via_e.is_none() {
                    violations.push(format!(
                        "node {idx}: e_i e*_i ≠ e*_i e_i at vertex {} (balance {defect})",
                        cg.graph.vertex_name(i)
                    ));
                }
            }
        }
        for i in 0..n {
            for j in 0..n {
                if i == j {
                    continue;
                }
                let via_j = cg
                    .e_edges
                    .get(&(idx, j))
                    .and_then(|&up| cg.e_star_edges.get(&(up, i)).copied());
                let via_i = cg
                    .e_star_edges
                    .get(&(idx, i))
                    .and_then(|&up| cg.e_edges.get(&(up, j)).copied());
                if via_j != via_i || via_j.is_none() {
                    violations.push(format!(
                        "node {idx}: e*_{} e_{} ≠ e_{} e*_{}",
                        cg.graph.vertex_name(i),
                        cg.graph.vertex_name(j),
                        cg.graph.vertex_name(j),
                        cg.graph.vertex_name(i)
                    ));
                }
            }
        }
    }

    AxiomReport {
        depth: cg.depth,
        checked_depth,
        checked_nodes,
        violations,
    }
}

#[cfg(test)]
mod tests;
