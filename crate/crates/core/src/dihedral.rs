//! Reference left-cell table for finite dihedral groups `I2(m)`.
//!
//! The six weight regimes are described by descent classes: with
//! `C_s = {w : R(w) = {s}}`, `C_t = {w : R(w) = {t}}` and `w0` the longest
//! element, the left cells per regime `(phi(s), phi(t))` are
//!
//! ```text
//! (0,0)  W
//! (0,1)  {1,s}, C_s\{s}, C_t\{s w0}, {s w0, w0}
//! (1,2)  {1}, {s}, C_s\{s}, C_t\{s w0}, {s w0}, {w0}
//! (1,1)  {1}, C_s, C_t, {w0}
//! (2,1)  {1}, {t}, C_s\{t w0}, C_t\{t}, {t w0}, {w0}
//! (1,0)  {1,t}, C_s\{t w0}, C_t\{t}, {t w0, w0}
//! ```
//!
//! with empty parts dropped (`m = 2` collapses several). When `m` is odd
//! the two generators are conjugate, so only the equal-parameter rows exist
//! as weight functions.

use crate::coxeter::{CoxeterSystem, Element};
use crate::hecke::cells::Blocks;

/// The weight regimes `(phi(s), phi(t))` representable for this group:
/// all six for even `m`, the two equal-parameter rows for odd `m`.
pub fn regimes(system: &CoxeterSystem) -> Vec<(i64, i64)> {
    if system.num_classes() == 2 {
        vec![(0, 0), (0, 1), (1, 2), (1, 1), (2, 1), (1, 0)]
    } else {
        vec![(0, 0), (1, 1)]
    }
}

/// The expected left-cell partition of `I2(m)` in the given regime.
pub fn golden_left_cells(system: &CoxeterSystem, regime: (i64, i64)) -> Blocks {
    assert_eq!(system.num_generators(), 2, "dihedral table needs two generators");
    let s = system.generator(0);
    let t = system.generator(1);
    let w0 = system.longest_element();
    let sw0 = system.multiply(s, w0);
    let tw0 = system.multiply(t, w0);
    let e = Element::IDENTITY;
    let c_s: Vec<Element> =
        system.elements().filter(|&w| system.right_descents(w) == vec![0]).collect();
    let c_t: Vec<Element> =
        system.elements().filter(|&w| system.right_descents(w) == vec![1]).collect();
    let minus = |cell: &[Element], x: Element| -> Vec<Element> {
        cell.iter().copied().filter(|&w| w != x).collect()
    };

    let raw: Vec<Vec<Element>> = match regime {
        (0, 0) => vec![system.elements().collect()],
        (0, y) if y > 0 => {
            vec![vec![e, s], minus(&c_s, s), minus(&c_t, sw0), vec![sw0, w0]]
        }
        (x, y) if 0 < x && x < y => {
            vec![vec![e], vec![s], minus(&c_s, s), minus(&c_t, sw0), vec![sw0], vec![w0]]
        }
        (x, y) if x == y && x > 0 => vec![vec![e], c_s.clone(), c_t.clone(), vec![w0]],
        (x, y) if 0 < y && y < x => {
            vec![vec![e], vec![t], minus(&c_s, tw0), minus(&c_t, t), vec![tw0], vec![w0]]
        }
        (x, 0) if x > 0 => {
            vec![vec![e, t], minus(&c_s, tw0), minus(&c_t, t), vec![tw0, w0]]
        }
        other => panic!("regime {other:?} is not in the table"),
    };
    let mut blocks: Blocks = raw
        .into_iter()
        .filter(|c| !c.is_empty())
        .map(|mut c| {
            c.sort_unstable();
            c
        })
        .collect();
    blocks.sort();
    blocks
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coxeter::builtin;

    #[test]
    fn table_shapes() {
        let w4 = builtin("I2(4)", 100).unwrap();
        assert_eq!(golden_left_cells(&w4, (0, 0)).len(), 1);
        assert_eq!(golden_left_cells(&w4, (1, 1)).len(), 4);
        assert_eq!(golden_left_cells(&w4, (1, 2)).len(), 6);
        assert_eq!(golden_left_cells(&w4, (0, 1)).len(), 4);
        // m = 2 collapses the unequal rows onto four singletons.
        let w2 = builtin("I2(2)", 100).unwrap();
        assert_eq!(golden_left_cells(&w2, (1, 2)).len(), 4);
        assert_eq!(golden_left_cells(&w2, (0, 1)).len(), 2);
        // Odd m only has the equal-parameter regimes.
        let w5 = builtin("I2(5)", 100).unwrap();
        assert_eq!(regimes(&w5), vec![(0, 0), (1, 1)]);
        assert_eq!(golden_left_cells(&w5, (1, 1)).len(), 4);
    }
}
