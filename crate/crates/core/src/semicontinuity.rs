//! Semi-continuity checkers: constancy of cells across each facet of a
//! complete arrangement, minimal stable coarsening across the chambers
//! above a facet, character sums, and the rank-2 essential-slope scan.
//!
//! A facet passes the constancy check when every sampled weight in it
//! (rank-one points and higher-rank flag refinements) yields the same cell
//! partition. A facet passes the join check when its partition equals the
//! finest partition that is coarser than the partition of every chamber
//! above it and stable under translation by the parabolic subgroup of the
//! facet's zero classes. Sampling makes a PASS evidence, not proof.

use std::collections::BTreeSet;

use rayon::prelude::*;
use serde::Serialize;

use crate::arrangement::{Arrangement, Facet};
use crate::coxeter::{CoxeterSystem, Element};
use crate::error::{Error, Result};
use crate::hecke::cells::Blocks;
use crate::hecke::{analyze, CellAnalysis, CellPartition, Side};
use crate::weight::WeightFunction;

/// Cells at a facet: partitions at `k` sampled representative weights
/// (at least two where the facet has more than one member, including a
/// higher-rank flag when available), plus the constancy verdict.
pub fn cells_at_facet(
    system: &CoxeterSystem,
    arrangement: &Arrangement,
    facet: &Facet,
    side: Side,
    samples: usize,
) -> Result<(CellPartition, bool)> {
    let weights = arrangement.representative_weights(facet, samples.max(1))?;
    let mut partitions = Vec::new();
    for w in &weights {
        partitions.push(crate::hecke::cells_for_weight(system, w, side)?);
    }
    let constant = partitions.windows(2).all(|p| p[0].same_cells(&p[1]));
    Ok((partitions.swap_remove(0), constant))
}

/// The finest partition coarser than every input and stable under the
/// parabolic translations: union-find over shared cells and translations.
pub fn join_partition(
    system: &CoxeterSystem,
    partitions: &[&Blocks],
    parabolic_classes: &BTreeSet<usize>,
    side: Side,
) -> Blocks {
    let n = system.size();
    let mut parent: Vec<usize> = (0..n).collect();
    fn find(parent: &mut Vec<usize>, x: usize) -> usize {
        let mut r = x;
        while parent[r] != r {
            r = parent[r];
        }
        let mut c = x;
        while parent[c] != r {
            let next = parent[c];
            parent[c] = r;
            c = next;
        }
        r
    }
    let union = |parent: &mut Vec<usize>, a: usize, b: usize| {
        let (ra, rb) = (find(parent, a), find(parent, b));
        if ra != rb {
            let (lo, hi) = (ra.min(rb), ra.max(rb));
            parent[hi] = lo;
        }
    };

    for blocks in partitions {
        for cell in blocks.iter() {
            for pair in cell.windows(2) {
                union(&mut parent, pair[0].index(), pair[1].index());
            }
        }
    }
    let translators: Vec<usize> = (0..system.num_generators())
        .filter(|&g| parabolic_classes.contains(&system.class_of_generator(g)))
        .collect();
    for x in 0..n {
        for &g in &translators {
            if matches!(side, Side::L | Side::Lr) {
                union(&mut parent, x, system.left_mul(g, Element(x as u32)).index());
            }
            if matches!(side, Side::R | Side::Lr) {
                union(&mut parent, x, system.right_mul(Element(x as u32), g).index());
            }
        }
    }

    let mut by_root: std::collections::BTreeMap<usize, Vec<Element>> = Default::default();
    for x in 0..n {
        let r = find(&mut parent, x);
        by_root.entry(r).or_default().push(Element(x as u32));
    }
    by_root.into_values().collect()
}

/// Per-facet, per-side record of the conjecture checks.
#[derive(Debug, Clone, Serialize)]
pub struct SideCheck {
    pub side: Side,
    /// Weights actually sampled, as per-class value vectors.
    pub sampled_weights: Vec<Vec<Vec<i64>>>,
    pub constant: bool,
    /// Whether the facet partition equals the minimal stable coarsening of
    /// the chamber partitions above it.
    pub join_matches: bool,
    /// Cells of the facet partition, as element ids.
    #[serde(skip)]
    pub cells: Blocks,
}

#[derive(Debug, Clone, Serialize)]
pub struct FacetCheck {
    #[serde(skip)]
    pub facet: Facet,
    pub signs: Vec<i8>,
    pub dim: usize,
    pub zero_classes: Vec<String>,
    pub sides: Vec<SideCheck>,
}

#[derive(Debug, Clone, Serialize)]
pub struct ConjectureAReport {
    pub group_size: usize,
    pub hyperplanes: Vec<String>,
    pub samples: usize,
    pub sampled_check: bool,
    pub facets: Vec<FacetCheck>,
    pub verdict: bool,
}

/// Checks facet constancy (a) and the minimal-coarsening property (b) on
/// every facet of a complete arrangement. Failures land in the report, not
/// in `Err`.
pub fn check_conjecture_a(
    system: &CoxeterSystem,
    arrangement: &Arrangement,
    sides: &[Side],
    samples: usize,
) -> Result<ConjectureAReport> {
    let arrangement = arrangement.align_to_labels(system.class_labels())?;
    if !arrangement.is_complete() {
        return Err(Error::NotComplete("the checker needs every coordinate hyperplane".into()));
    }
    let facets = arrangement.enumerate_facets();

    // Partitions per facet, from the facet's sampled representatives; one
    // basis build per weight covers all requested sides.
    struct FacetData {
        partitions: Vec<(Side, CellPartition, bool, Vec<WeightFunction>)>,
    }
    let data: Vec<FacetData> = facets
        .par_iter()
        .map(|facet| -> Result<FacetData> {
            let weights = arrangement.representative_weights(facet, samples.max(1))?;
            let analyses: Vec<CellAnalysis> =
                weights.iter().map(|w| analyze(system, w)).collect::<Result<_>>()?;
            let partitions = sides
                .iter()
                .map(|&side| {
                    let parts: Vec<&CellPartition> =
                        analyses.iter().map(|a| a.partition(side)).collect();
                    let constant = parts.windows(2).all(|p| p[0].same_cells(p[1]));
                    (side, parts[0].clone(), constant, weights.clone())
                })
                .collect();
            Ok(FacetData { partitions })
        })
        .collect::<Result<_>>()?;

    let mut verdict = true;
    let mut checks = Vec::new();
    for (fi, facet) in facets.iter().enumerate() {
        let zero_classes = arrangement.parabolic_zero_classes(facet)?;
        let chambers: Vec<usize> = facets
            .iter()
            .enumerate()
            .filter(|(_, c)| c.is_chamber() && arrangement.face_leq(facet, c).unwrap_or(false))
            .map(|(i, _)| i)
            .collect();
        let mut side_checks = Vec::new();
        for (si, &side) in sides.iter().enumerate() {
            let (_, partition, constant, weights) = &data[fi].partitions[si];
            let chamber_blocks: Vec<&Blocks> =
                chambers.iter().map(|&ci| &data[ci].partitions[si].1.cells).collect();
            let join = join_partition(system, &chamber_blocks, &zero_classes, side);
            let join_matches = join == partition.cells;
            verdict &= constant & join_matches;
            side_checks.push(SideCheck {
                side,
                sampled_weights: weights.iter().map(|w| w.values().to_vec()).collect(),
                constant: *constant,
                join_matches,
                cells: partition.cells.clone(),
            });
        }
        checks.push(FacetCheck {
            facet: facet.clone(),
            signs: facet.signs().to_vec(),
            dim: facet.dim(),
            zero_classes: zero_classes
                .iter()
                .map(|&c| system.class_labels()[c].clone())
                .collect(),
            sides: side_checks,
        });
    }

    Ok(ConjectureAReport {
        group_size: system.size(),
        hyperplanes: (0..arrangement.hyperplanes().len())
            .map(|h| arrangement.hyperplane_label(h))
            .collect(),
        samples,
        sampled_check: true,
        facets: checks,
        verdict,
    })
}

#[derive(Debug, Clone, Serialize)]
pub struct CharacterIdentity {
    /// The facet cell, rendered.
    pub cell: Vec<String>,
    /// Chamber the cell is decomposed against.
    pub chamber_signs: Vec<i8>,
    /// Number of chamber cells in the decomposition.
    pub parts: usize,
    pub holds: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct BMinusReport {
    pub group_size: usize,
    pub hyperplanes: Vec<String>,
    pub identities: Vec<CharacterIdentity>,
    /// Facet cells that failed to decompose into chamber cells (a
    /// constancy/Conjecture-A violation, reported separately).
    pub decomposition_failures: usize,
    pub verdict: bool,
}

/// Character sums: for every facet, every chamber above it and every left
/// cell of the facet, the facet-cell character equals the sum of the
/// characters of the chamber cells it decomposes into.
pub fn check_b_minus(
    system: &CoxeterSystem,
    arrangement: &Arrangement,
    samples: usize,
) -> Result<BMinusReport> {
    let arrangement = arrangement.align_to_labels(system.class_labels())?;
    if !arrangement.is_complete() {
        return Err(Error::NotComplete("the checker needs every coordinate hyperplane".into()));
    }
    let facets = arrangement.enumerate_facets();

    // One analysis per facet, at its first representative weight.
    let analyses: Vec<(Facet, CellAnalysis)> = facets
        .iter()
        .map(|facet| -> Result<_> {
            let weights = arrangement.representative_weights(facet, samples.max(1))?;
            Ok((facet.clone(), analyze(system, &weights[0])?))
        })
        .collect::<Result<_>>()?;

    let mut identities = Vec::new();
    let mut decomposition_failures = 0usize;
    let mut verdict = true;
    for (facet, fa) in &analyses {
        if facet.is_chamber() {
            continue; // the identity degenerates to chi = chi
        }
        for (chamber, ca) in &analyses {
            if !chamber.is_chamber() || !arrangement.face_leq(facet, chamber)? {
                continue;
            }
            for cell in &fa.partition(Side::L).cells {
                // Decompose the facet cell into chamber cells.
                let mut parts: Vec<&Vec<Element>> = Vec::new();
                let mut covered = 0usize;
                let mut clean = true;
                for cc in &ca.partition(Side::L).cells {
                    let inside = cc.iter().filter(|x| cell.binary_search(x).is_ok()).count();
                    if inside == cc.len() {
                        parts.push(cc);
                        covered += inside;
                    } else if inside != 0 {
                        clean = false;
                    }
                }
                if !clean || covered != cell.len() {
                    decomposition_failures += 1;
                    verdict = false;
                    continue;
                }
                let chi_facet = fa.left_cell_character(cell)?;
                let mut chi_sum = vec![0i64; chi_facet.len()];
                for part in &parts {
                    for (s, v) in chi_sum.iter_mut().zip(ca.left_cell_character(part)?) {
                        *s += v;
                    }
                }
                let holds = chi_facet == chi_sum;
                verdict &= holds;
                identities.push(CharacterIdentity {
                    cell: cell.iter().map(|&x| system.render(x)).collect(),
                    chamber_signs: chamber.signs().to_vec(),
                    parts: parts.len(),
                    holds,
                });
            }
        }
    }

    Ok(BMinusReport {
        group_size: system.size(),
        hyperplanes: (0..arrangement.hyperplanes().len())
            .map(|h| arrangement.hyperplane_label(h))
            .collect(),
        identities,
        decomposition_failures,
        verdict,
    })
}

/// One scanned ray of the rank-2 slope scan.
#[derive(Debug, Clone, Serialize)]
pub struct RayRecord {
    /// Slope `phi(t)/phi(s)` as `p/q`, `0`, or `inf`.
    pub slope: String,
    pub critical: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct ScanReport {
    pub max_denominator: u64,
    pub rays: Vec<RayRecord>,
    pub critical_slopes: Vec<String>,
    /// Rays on the negative side follow from the sign-change symmetries
    /// and are not scanned.
    pub note: String,
}

fn slope_weight(num_classes_check: usize, s_class: usize, t_class: usize, p: u64, q: u64) -> WeightFunction {
    let mut values = vec![0i64; num_classes_check];
    values[s_class] = q as i64;
    values[t_class] = p as i64;
    WeightFunction::rank_one(values)
}

/// Scans slopes `theta = phi(t)/phi(s)` over the positive rationals with
/// numerator and denominator up to `max_denominator` (plus `0` and `inf`),
/// computing all three cell partitions per ray and per mediant between
/// consecutive rays. A ray is critical when its flanking mediants disagree
/// with each other or with the ray itself on any side.
pub fn essential_scan_rank2(system: &CoxeterSystem, max_denominator: u64) -> Result<ScanReport> {
    if system.num_classes() != 2 {
        return Err(Error::Precondition(format!(
            "the slope scan needs exactly two generator classes, got {}",
            system.num_classes()
        )));
    }
    if max_denominator == 0 {
        return Err(Error::Precondition("max_denominator must be positive".into()));
    }
    let labels = system.class_labels();
    let t_class = labels.iter().position(|l| l == "t").unwrap_or(1);
    let s_class = 1 - t_class;

    // Rays p/q in lowest terms, sorted by value, with 0 = 0/1 and inf = 1/0.
    let mut rays: Vec<(u64, u64)> = vec![(0, 1)];
    let mut inner: Vec<(u64, u64)> = Vec::new();
    for p in 1..=max_denominator {
        for q in 1..=max_denominator {
            if num_integer::gcd(p, q) == 1 {
                inner.push((p, q));
            }
        }
    }
    inner.sort_by(|a, b| (a.0 * b.1).cmp(&(b.0 * a.1)));
    rays.extend(inner);
    rays.push((1, 0));

    // Sample points: every ray and the mediant between consecutive rays.
    let mut points: Vec<(u64, u64)> = Vec::new();
    for (i, &r) in rays.iter().enumerate() {
        points.push(r);
        if i + 1 < rays.len() {
            let n = rays[i + 1];
            points.push((r.0 + n.0, r.1 + n.1));
        }
    }

    let partitions: Vec<[Blocks; 3]> = points
        .par_iter()
        .map(|&(p, q)| -> Result<[Blocks; 3]> {
            let w = slope_weight(2, s_class, t_class, p, q);
            let a = analyze(system, &w)?;
            Ok([
                a.partition(Side::L).cells.clone(),
                a.partition(Side::R).cells.clone(),
                a.partition(Side::Lr).cells.clone(),
            ])
        })
        .collect::<Result<_>>()?;

    let mut records = Vec::new();
    let mut critical_slopes = Vec::new();
    for (i, &(p, q)) in rays.iter().enumerate() {
        let here = &partitions[2 * i];
        let left_mediant = if i > 0 { Some(&partitions[2 * i - 1]) } else { None };
        let right_mediant = if i + 1 < rays.len() { Some(&partitions[2 * i + 1]) } else { None };
        let mut critical = false;
        for side in 0..3 {
            match (left_mediant, right_mediant) {
                (Some(l), Some(r)) => {
                    critical |= l[side] != r[side] || here[side] != l[side];
                }
                (Some(l), None) => critical |= here[side] != l[side],
                (None, Some(r)) => critical |= here[side] != r[side],
                (None, None) => {}
            }
        }
        let slope = if q == 0 {
            "inf".to_string()
        } else if p == 0 {
            "0".to_string()
        } else if q == 1 {
            format!("{p}")
        } else {
            format!("{p}/{q}")
        };
        if critical {
            critical_slopes.push(slope.clone());
        }
        records.push(RayRecord { slope, critical });
    }

    Ok(ScanReport {
        max_denominator,
        rays: records,
        critical_slopes,
        note: "negative-side rays follow from the sign-change symmetries".into(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coxeter::builtin;
    use crate::lattice::LatticeBasis;

    fn dihedral_arrangement() -> Arrangement {
        let basis = LatticeBasis::new(vec!["s".into(), "t".into()]).unwrap();
        Arrangement::complete_rank2(basis).unwrap()
    }

    #[test]
    fn conjecture_a_holds_for_i2_4() {
        let w = builtin("I2(4)", 100).unwrap();
        let report = check_conjecture_a(&w, &dihedral_arrangement(), &Side::ALL, 3).unwrap();
        assert!(report.verdict, "{report:?}");
        assert_eq!(report.facets.len(), 17);
    }

    #[test]
    fn conjecture_a_fails_without_the_difference_hyperplane() {
        let w = builtin("I2(4)", 100).unwrap();
        let basis = LatticeBasis::new(vec!["s".into(), "t".into()]).unwrap();
        let broken =
            Arrangement::new(basis, vec![vec![1, 0], vec![0, 1], vec![1, 1]]).unwrap();
        let report = check_conjecture_a(&w, &broken, &[Side::L], 3).unwrap();
        assert!(!report.verdict);
        // The failure is a constancy violation on the merged chamber.
        assert!(report
            .facets
            .iter()
            .any(|f| f.facet.is_chamber() && f.sides.iter().any(|s| !s.constant)));
    }

    #[test]
    fn join_examples_on_the_equal_parameter_ray() {
        let w = builtin("I2(4)", 100).unwrap();
        // Partitions of the two chambers above the ray s = t > 0.
        let c0 = crate::hecke::cells_for_weight(&w, &WeightFunction::rank_one(vec![1, 2]), Side::L)
            .unwrap();
        let d0 = crate::hecke::cells_for_weight(&w, &WeightFunction::rank_one(vec![2, 1]), Side::L)
            .unwrap();
        let join = join_partition(&w, &[&c0.cells, &d0.cells], &BTreeSet::new(), Side::L);
        let ray = crate::hecke::cells_for_weight(&w, &WeightFunction::rank_one(vec![1, 1]), Side::L)
            .unwrap();
        assert_eq!(join, ray.cells);

        // Join with a single chamber and no parabolic is the chamber itself.
        let join = join_partition(&w, &[&c0.cells], &BTreeSet::new(), Side::L);
        assert_eq!(join, c0.cells);
    }

    #[test]
    fn join_with_parabolic_translation() {
        // H_s^+ : chambers C0 (0 < s < t) and C1 (s < 0 < t, |s| < t) with
        // left translation by <s>.
        let w = builtin("I2(4)", 100).unwrap();
        let c0 = crate::hecke::cells_for_weight(&w, &WeightFunction::rank_one(vec![1, 2]), Side::L)
            .unwrap();
        let c1 = crate::hecke::cells_for_weight(&w, &WeightFunction::rank_one(vec![-1, 2]), Side::L)
            .unwrap();
        let s_class: BTreeSet<usize> = [0].into();
        let join = join_partition(&w, &[&c0.cells, &c1.cells], &s_class, Side::L);
        let h_s = crate::hecke::cells_for_weight(&w, &WeightFunction::rank_one(vec![0, 1]), Side::L)
            .unwrap();
        assert_eq!(join, h_s.cells);
    }

    #[test]
    fn b_minus_holds_for_i2_4() {
        let w = builtin("I2(4)", 100).unwrap();
        let report = check_b_minus(&w, &dihedral_arrangement(), 1).unwrap();
        assert!(report.verdict);
        assert_eq!(report.decomposition_failures, 0);
        assert!(!report.identities.is_empty());
    }

    #[test]
    fn scan_dihedral_slopes() {
        let w = builtin("I2(4)", 100).unwrap();
        let report = essential_scan_rank2(&w, 4).unwrap();
        assert_eq!(report.critical_slopes, vec!["0", "1", "inf"]);
        // A1 x A1: the generators commute, no interior critical slope.
        let w2 = builtin("I2(2)", 100).unwrap();
        let report = essential_scan_rank2(&w2, 4).unwrap();
        assert_eq!(report.critical_slopes, vec!["0", "inf"]);
        // Needs exactly two classes.
        let odd = builtin("I2(5)", 100).unwrap();
        assert!(essential_scan_rank2(&odd, 4).is_err());
    }

    #[test]
    fn cells_at_facet_examples() {
        let w = builtin("I2(4)", 100).unwrap();
        let a = dihedral_arrangement();
        // Equal-parameter ray: 4 cells, constant across samples.
        let ray = a.facet_of_weight(&WeightFunction::rank_one(vec![1, 1])).unwrap();
        let (partition, constant) = cells_at_facet(&w, &a, &ray, Side::L, 3).unwrap();
        assert!(constant);
        assert_eq!(partition.cells.len(), 4);
        // A chamber: 6 cells, constant.
        let chamber = a.facet_of_weight(&WeightFunction::rank_one(vec![1, 2])).unwrap();
        let (partition, constant) = cells_at_facet(&w, &a, &chamber, Side::L, 3).unwrap();
        assert!(constant);
        assert_eq!(partition.cells.len(), 6);
        // The apex: the single cell W.
        let zero = a.facet_of(&crate::lattice::PositivePart::whole(2)).unwrap();
        let (partition, constant) = cells_at_facet(&w, &a, &zero, Side::L, 3).unwrap();
        assert!(constant);
        assert_eq!(partition.cells.len(), 1);
    }

    #[test]
    fn scan_stability_under_doubling() {
        for m in [2u32, 4, 6] {
            let w = builtin(&format!("I2({m})"), 100).unwrap();
            let base = essential_scan_rank2(&w, 4).unwrap();
            let doubled = essential_scan_rank2(&w, 8).unwrap();
            assert_eq!(base.critical_slopes, doubled.critical_slopes, "I2({m})");
        }
    }

    #[test]
    fn rank1_complete_arrangement_for_odd_dihedral() {
        let w = builtin("I2(5)", 100).unwrap();
        let basis = LatticeBasis::new(vec!["s".into()]).unwrap();
        let arr = Arrangement::complete_rank1(basis).unwrap();
        let report = check_conjecture_a(&w, &arr, &Side::ALL, 3).unwrap();
        assert!(report.verdict);
        assert_eq!(report.facets.len(), 3);
        let report = check_b_minus(&w, &arr, 1).unwrap();
        assert!(report.verdict);
    }
}
