//! Cell partitions and cell characters.
//!
//! The left preorder is generated by `z <= y` whenever `C_z` appears in
//! some `C_s C_y`; cells are the strongly connected components of the
//! generating graph and the partial order on cells is its condensation.
//! Right cells use `C_y C_s`, two-sided cells the union of both edge sets.
//!
//! Weights are sign-normalized before the basis is built (cells are
//! invariant under flipping classes); characters of the original weight are
//! recovered from the normalized ones by the linear-character twist.

use std::collections::BTreeMap;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::coxeter::{CoxeterSystem, Element};
use crate::error::{Error, Result};
use crate::lattice::Sign;
use crate::weight::WeightFunction;

use super::kl::KlBasis;
use super::laurent::Laurent;
use super::Algebra;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Side {
    L,
    R,
    #[serde(rename = "LR")]
    Lr,
}

impl Side {
    pub const ALL: [Side; 3] = [Side::L, Side::R, Side::Lr];

    pub fn as_str(self) -> &'static str {
        match self {
            Side::L => "L",
            Side::R => "R",
            Side::Lr => "LR",
        }
    }
}

impl std::str::FromStr for Side {
    type Err = Error;
    fn from_str(s: &str) -> Result<Side> {
        match s {
            "L" | "l" | "left" => Ok(Side::L),
            "R" | "r" | "right" => Ok(Side::R),
            "LR" | "lr" | "two-sided" => Ok(Side::Lr),
            other => Err(Error::Parse(format!("unknown side `{other}`"))),
        }
    }
}

/// Blocks of a partition of the group: sorted cells of sorted elements.
pub type Blocks = Vec<Vec<Element>>;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CellPartition {
    pub side: Side,
    /// Cells sorted by ShortLex-least member; members sorted.
    pub cells: Blocks,
    /// Condensation edges `(lower, upper)` between cell indices: the lower
    /// cell is reachable from the upper one in the preorder.
    pub order: Vec<(usize, usize)>,
}

impl CellPartition {
    pub fn same_cells(&self, other: &CellPartition) -> bool {
        self.cells == other.cells
    }

    pub fn cell_index_of(&self, w: Element) -> usize {
        self.cells
            .iter()
            .position(|c| c.binary_search(&w).is_ok())
            .expect("cells partition the group")
    }
}

/// Cells, preorder and characters of one weight function on one group.
pub struct CellAnalysis<'s> {
    pub system: &'s CoxeterSystem,
    /// The weight as given (before sign normalization).
    pub weight: WeightFunction,
    /// Classes flipped by normalization.
    pub flips: Vec<bool>,
    pub basis: KlBasis<'s>,
    left_products: Vec<BTreeMap<Element, Laurent>>, // index y * ngens + s
    right_products: Vec<BTreeMap<Element, Laurent>>,
    left: CellPartition,
    right: CellPartition,
    two_sided: CellPartition,
    conj_classes: Vec<Vec<Element>>,
}

/// Computes cells on one side only.
pub fn cells_for_weight(
    system: &CoxeterSystem,
    weight: &WeightFunction,
    side: Side,
) -> Result<CellPartition> {
    Ok(analyze(system, weight)?.partition(side).clone())
}

/// Builds the Kazhdan-Lusztig basis and all three cell partitions.
pub fn analyze<'s>(system: &'s CoxeterSystem, weight: &WeightFunction) -> Result<CellAnalysis<'s>> {
    if weight.num_classes() != system.num_classes() {
        return Err(Error::DimensionMismatch {
            expected: system.num_classes(),
            got: weight.num_classes(),
        });
    }
    let (normalized, flips) = weight.normalized();
    let basis = KlBasis::build(Algebra::new(system, normalized)?)?;
    let n = system.size();
    let ngens = system.num_generators();

    let left_products: Vec<BTreeMap<Element, Laurent>> = (0..n * ngens)
        .into_par_iter()
        .map(|i| basis.left_product(i % ngens, Element((i / ngens) as u32)))
        .collect();
    let right_products: Vec<BTreeMap<Element, Laurent>> = (0..n * ngens)
        .into_par_iter()
        .map(|i| basis.right_product(Element((i / ngens) as u32), i % ngens))
        .collect();

    let edges_of = |products: &[BTreeMap<Element, Laurent>]| -> Vec<Vec<u32>> {
        let mut adj = vec![Vec::new(); n];
        for y in 0..n {
            for s in 0..ngens {
                for (&z, _) in &products[y * ngens + s] {
                    if z.index() != y {
                        adj[y].push(z.0);
                    }
                }
            }
            adj[y].sort_unstable();
            adj[y].dedup();
        }
        adj
    };
    let left_adj = edges_of(&left_products);
    let right_adj = edges_of(&right_products);
    let mut both_adj = left_adj.clone();
    for (b, r) in both_adj.iter_mut().zip(&right_adj) {
        b.extend_from_slice(r);
        b.sort_unstable();
        b.dedup();
    }

    let left = partition_from_graph(Side::L, &left_adj);
    let right = partition_from_graph(Side::R, &right_adj);
    let two_sided = partition_from_graph(Side::Lr, &both_adj);

    Ok(CellAnalysis {
        system,
        weight: weight.clone(),
        flips,
        basis,
        left_products,
        right_products,
        left,
        right,
        two_sided,
        conj_classes: system.conjugacy_classes(),
    })
}

impl<'s> CellAnalysis<'s> {
    pub fn partition(&self, side: Side) -> &CellPartition {
        match side {
            Side::L => &self.left,
            Side::R => &self.right,
            Side::Lr => &self.two_sided,
        }
    }

    pub fn left_product(&self, s: usize, y: Element) -> &BTreeMap<Element, Laurent> {
        &self.left_products[y.index() * self.system.num_generators() + s]
    }

    pub fn right_product(&self, y: Element, s: usize) -> &BTreeMap<Element, Laurent> {
        &self.right_products[y.index() * self.system.num_generators() + s]
    }

    pub fn conjugacy_classes(&self) -> &[Vec<Element>] {
        &self.conj_classes
    }

    pub fn class_representatives(&self) -> Vec<Element> {
        self.conj_classes.iter().map(|c| c[0]).collect()
    }

    /// Character of the cell module of a left cell, as an integer class
    /// function listed in conjugacy-class order.
    ///
    /// The module has basis `{C_y : y in cell}`; `T_s` acts by the
    /// Kazhdan-Lusztig structure constants truncated to the cell, and the
    /// augmentation turns the action into a `W`-representation. Characters
    /// computed at the normalized weight are twisted back by the linear
    /// character of the flipped classes.
    pub fn left_cell_character(&self, cell: &[Element]) -> Result<Vec<i64>> {
        let left = &self.left;
        let mut sorted = cell.to_vec();
        sorted.sort_unstable();
        if !left.cells.iter().any(|c| *c == sorted) {
            return Err(Error::NotACell);
        }
        let dim = sorted.len();
        let pos: BTreeMap<Element, usize> =
            sorted.iter().enumerate().map(|(i, &w)| (w, i)).collect();

        // Integer matrices of the T_s action on the cell module.
        let ngens = self.system.num_generators();
        let mut gen_mats = Vec::with_capacity(ngens);
        for s in 0..ngens {
            let mut m = vec![vec![0i64; dim]; dim];
            for (j, &y) in sorted.iter().enumerate() {
                for (&z, coef) in self.left_product(s, y) {
                    if let Some(&i) = pos.get(&z) {
                        m[i][j] = m[i][j].checked_add(coef.aug()).expect("character overflow");
                    }
                }
                // T_s = C_s - e^{-phi(s)}: subtract aug(e^{-phi}) = 1 on the
                // diagonal unless phi(s) = 0 where C_s = T_s already.
                if self.basis.alg.gen_sign(s) == Sign::Positive {
                    m[j][j] -= 1;
                }
            }
            gen_mats.push(m);
        }

        let mut out = Vec::with_capacity(self.conj_classes.len());
        for class in &self.conj_classes {
            let rep = class[0];
            let mut prod: Option<Vec<Vec<i64>>> = None;
            for &g in self.system.word(rep) {
                prod = Some(match prod {
                    None => gen_mats[g as usize].clone(),
                    Some(p) => mat_mul_i64(&p, &gen_mats[g as usize]),
                });
            }
            let trace = match prod {
                None => dim as i64,
                Some(p) => (0..dim).map(|i| p[i][i]).sum(),
            };
            // Twist by the linear character of the sign change.
            let counts = self.system.multi_length(rep);
            let l_minus: i64 =
                self.flips.iter().enumerate().filter(|&(_, &f)| f).map(|(c, _)| counts[c]).sum();
            out.push(if l_minus % 2 == 0 { trace } else { -trace });
        }
        Ok(out)
    }
}

fn mat_mul_i64(a: &[Vec<i64>], b: &[Vec<i64>]) -> Vec<Vec<i64>> {
    let n = a.len();
    let mut out = vec![vec![0i64; n]; n];
    for i in 0..n {
        for k in 0..n {
            let x = a[i][k];
            if x == 0 {
                continue;
            }
            for j in 0..n {
                out[i][j] = out[i][j]
                    .checked_add(x.checked_mul(b[k][j]).expect("character overflow"))
                    .expect("character overflow");
            }
        }
    }
    out
}

/// Strongly connected components (iterative Tarjan), then cells sorted by
/// least member and condensation edges `(lower, upper)`.
fn partition_from_graph(side: Side, adj: &[Vec<u32>]) -> CellPartition {
    let n = adj.len();
    let mut index = vec![usize::MAX; n];
    let mut low = vec![0usize; n];
    let mut on_stack = vec![false; n];
    let mut stack: Vec<u32> = Vec::new();
    let mut comp_of = vec![usize::MAX; n];
    let mut comps: Vec<Vec<u32>> = Vec::new();
    let mut counter = 0usize;

    // Explicit DFS stack: (node, next edge position).
    let mut call: Vec<(u32, usize)> = Vec::new();
    for root in 0..n as u32 {
        if index[root as usize] != usize::MAX {
            continue;
        }
        call.push((root, 0));
        index[root as usize] = counter;
        low[root as usize] = counter;
        counter += 1;
        stack.push(root);
        on_stack[root as usize] = true;
        while let Some(&mut (v, ref mut next)) = call.last_mut() {
            let vu = v as usize;
            if *next < adj[vu].len() {
                let w = adj[vu][*next];
                *next += 1;
                let wu = w as usize;
                if index[wu] == usize::MAX {
                    index[wu] = counter;
                    low[wu] = counter;
                    counter += 1;
                    stack.push(w);
                    on_stack[wu] = true;
                    call.push((w, 0));
                } else if on_stack[wu] {
                    low[vu] = low[vu].min(index[wu]);
                }
            } else {
                call.pop();
                if let Some(&(p, _)) = call.last() {
                    let pu = p as usize;
                    low[pu] = low[pu].min(low[vu]);
                }
                if low[vu] == index[vu] {
                    let cid = comps.len();
                    let mut comp = Vec::new();
                    loop {
                        let w = stack.pop().expect("tarjan stack underflow");
                        on_stack[w as usize] = false;
                        comp_of[w as usize] = cid;
                        comp.push(w);
                        if w == v {
                            break;
                        }
                    }
                    comps.push(comp);
                }
            }
        }
    }

    // Deterministic relabeling: sort components by least member.
    for c in comps.iter_mut() {
        c.sort_unstable();
    }
    let mut order_ids: Vec<usize> = (0..comps.len()).collect();
    order_ids.sort_by_key(|&i| comps[i][0]);
    let mut relabel = vec![0usize; comps.len()];
    for (new, &old) in order_ids.iter().enumerate() {
        relabel[old] = new;
    }
    let cells: Blocks = order_ids
        .iter()
        .map(|&i| comps[i].iter().map(|&x| Element(x)).collect())
        .collect();

    let mut order: Vec<(usize, usize)> = Vec::new();
    for (y, outs) in adj.iter().enumerate() {
        for &z in outs {
            let a = relabel[comp_of[z as usize]];
            let b = relabel[comp_of[y]];
            if a != b {
                order.push((a, b));
            }
        }
    }
    order.sort_unstable();
    order.dedup();

    CellPartition { side, cells, order }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coxeter::builtin;

    fn blocks(system: &CoxeterSystem, parts: &[&[&str]]) -> Blocks {
        let mut out: Blocks = parts
            .iter()
            .map(|cell| {
                let mut v: Vec<Element> =
                    cell.iter().map(|w| system.parse_element(w).unwrap()).collect();
                v.sort_unstable();
                v
            })
            .collect();
        out.sort();
        out
    }

    fn left_cells(system: &CoxeterSystem, values: Vec<i64>) -> CellPartition {
        cells_for_weight(system, &WeightFunction::rank_one(values), Side::L).unwrap()
    }

    #[test]
    fn dihedral_equal_parameters() {
        let w = builtin("I2(4)", 100).unwrap();
        let p = left_cells(&w, vec![1, 1]);
        let expect = blocks(&w, &[&["e"], &["s", "t.s", "s.t.s"], &["t", "s.t", "t.s.t"], &["s.t.s.t"]]);
        assert_eq!(p.cells, expect);
    }

    #[test]
    fn dihedral_unequal_parameters() {
        let w = builtin("I2(4)", 100).unwrap();
        let p = left_cells(&w, vec![1, 2]);
        let expect = blocks(
            &w,
            &[&["e"], &["s"], &["t.s", "s.t.s"], &["t", "s.t"], &["t.s.t"], &["s.t.s.t"]],
        );
        assert_eq!(p.cells, expect);
    }

    #[test]
    fn dihedral_zero_parameter() {
        let w = builtin("I2(4)", 100).unwrap();
        let p = left_cells(&w, vec![0, 1]);
        let expect =
            blocks(&w, &[&["e", "s"], &["t.s", "s.t.s"], &["t", "s.t"], &["t.s.t", "s.t.s.t"]]);
        assert_eq!(p.cells, expect);
    }

    #[test]
    fn all_zero_weight_is_one_cell() {
        let w = builtin("I2(4)", 100).unwrap();
        let p = left_cells(&w, vec![0, 0]);
        assert_eq!(p.cells.len(), 1);
        assert_eq!(p.cells[0].len(), 8);
    }

    #[test]
    fn sides_are_transposed_by_inversion() {
        let w = builtin("B3", 100).unwrap();
        let a = analyze(&w, &WeightFunction::rank_one(vec![2, 1])).unwrap();
        let left = a.partition(Side::L);
        let right = a.partition(Side::R);
        // x ~R y iff x^{-1} ~L y^{-1}.
        let mut transported: Blocks = left
            .cells
            .iter()
            .map(|c| {
                let mut v: Vec<Element> = c.iter().map(|&x| w.inverse(x)).collect();
                v.sort_unstable();
                v
            })
            .collect();
        transported.sort();
        assert_eq!(right.cells, transported);
        // Two-sided cells are unions of left cells.
        for cell in &a.partition(Side::Lr).cells {
            for lc in &left.cells {
                let inside = lc.iter().filter(|x| cell.binary_search(x).is_ok()).count();
                assert!(inside == 0 || inside == lc.len());
            }
        }
    }

    #[test]
    fn scaling_and_sign_invariance() {
        let w = builtin("I2(4)", 100).unwrap();
        for side in Side::ALL {
            let base = cells_for_weight(&w, &WeightFunction::rank_one(vec![1, 2]), side).unwrap();
            let scaled = cells_for_weight(&w, &WeightFunction::rank_one(vec![3, 6]), side).unwrap();
            assert!(base.same_cells(&scaled));
            let flipped =
                cells_for_weight(&w, &WeightFunction::rank_one(vec![1, -2]), side).unwrap();
            assert!(base.same_cells(&flipped));
        }
    }

    #[test]
    fn characters_of_singleton_cells() {
        let w = builtin("I2(4)", 100).unwrap();
        let a = analyze(&w, &WeightFunction::rank_one(vec![1, 1])).unwrap();
        let reps = a.class_representatives();
        // Cell {1}: T_s acts by -e^{-phi(s)}, the sign character.
        let chi = a.left_cell_character(&[Element::IDENTITY]).unwrap();
        for (rep, val) in reps.iter().zip(&chi) {
            let sign = if w.length(*rep) % 2 == 0 { 1 } else { -1 };
            assert_eq!(*val, sign);
        }
        // Cell {w0}: T_s acts by e^{phi(s)}, the trivial character.
        let chi = a.left_cell_character(&[w.longest_element()]).unwrap();
        assert!(chi.iter().all(|&v| v == 1));
        // A three-element cell has degree 3.
        let cell = a
            .partition(Side::L)
            .cells
            .iter()
            .find(|c| c.contains(&w.generator(0)))
            .unwrap()
            .clone();
        assert_eq!(cell.len(), 3);
        let chi = a.left_cell_character(&cell).unwrap();
        assert_eq!(chi[0], 3); // identity class comes first
        // Not a cell: reject.
        assert!(a.left_cell_character(&[w.generator(0)]).is_err());
    }

    #[test]
    fn regular_character_at_zero_weight() {
        let w = builtin("I2(4)", 100).unwrap();
        let a = analyze(&w, &WeightFunction::zero(2)).unwrap();
        let cell: Vec<Element> = w.elements().collect();
        let chi = a.left_cell_character(&cell).unwrap();
        assert_eq!(chi[0], 8);
        assert!(chi[1..].iter().all(|&v| v == 0));
    }

    #[test]
    fn character_twist_under_sign_change() {
        // Characters at phi and at the flipped phi' differ by the linear
        // character of the flipped classes.
        let w = builtin("I2(4)", 100).unwrap();
        let pos = analyze(&w, &WeightFunction::rank_one(vec![1, 2])).unwrap();
        let neg = analyze(&w, &WeightFunction::rank_one(vec![1, -2])).unwrap();
        assert!(pos.partition(Side::L).same_cells(neg.partition(Side::L)));
        let reps = pos.class_representatives();
        for cell in &pos.partition(Side::L).cells {
            let chi_pos = pos.left_cell_character(cell).unwrap();
            let chi_neg = neg.left_cell_character(cell).unwrap();
            for ((rep, a), b) in reps.iter().zip(&chi_pos).zip(&chi_neg) {
                let counts = w.multi_length(*rep);
                let gamma = if counts[1] % 2 == 0 { 1 } else { -1 };
                assert_eq!(*b, gamma * a);
            }
        }
    }
}
