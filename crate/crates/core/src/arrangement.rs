//! Finite rational hyperplane arrangements on the space of positive parts,
//! their facets, the face order, and representative weight functions.
//!
//! A hyperplane `H_v` is the set of positive parts vanishing on the integer
//! vector `v`; a facet is a realizable sign vector over the arrangement.
//! Facets are identified with their sign vectors: two positive parts lie in
//! the same facet exactly when they have the same sign on every hyperplane.
//! Every realizable sign vector admits a rank-one representative (a single
//! integer form), obtained here by exact feasibility, so enumeration never
//! needs flags of length above one.

use std::collections::BTreeSet;

use crate::error::{Error, Result};
use crate::feas::{self, Separation};
use crate::lattice::{LatticeBasis, PositivePart, Sign};
use crate::linalg::{self, dot, is_zero_vec, make_primitive};
use crate::weight::WeightFunction;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Arrangement {
    basis: LatticeBasis,
    hyperplanes: Vec<Vec<i64>>,
}

/// A realizable sign vector over an arrangement, with its dimension
/// (ambient rank minus the rank of the zero set).
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Facet {
    signs: Vec<i8>,
    dim: usize,
}

impl Facet {
    pub fn signs(&self) -> &[i8] {
        &self.signs
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn is_chamber(&self) -> bool {
        self.signs.iter().all(|&s| s != 0)
    }

    pub fn zero_set(&self) -> Vec<usize> {
        (0..self.signs.len()).filter(|&h| self.signs[h] == 0).collect()
    }
}

impl Arrangement {
    /// Builds an arrangement from integer normal vectors. Vectors are
    /// reduced to primitive; zero or pairwise proportional vectors are
    /// rejected.
    pub fn new(basis: LatticeBasis, vectors: Vec<Vec<i64>>) -> Result<Self> {
        let d = basis.dim();
        let mut hyperplanes: Vec<Vec<i64>> = Vec::new();
        for mut v in vectors {
            if v.len() != d {
                return Err(Error::DimensionMismatch { expected: d, got: v.len() });
            }
            if is_zero_vec(&v) {
                return Err(Error::InvalidArrangement("zero vector is not a hyperplane".into()));
            }
            make_primitive(&mut v);
            let neg: Vec<i64> = v.iter().map(|x| -x).collect();
            if hyperplanes.iter().any(|h| *h == v || *h == neg) {
                return Err(Error::InvalidArrangement(format!(
                    "proportional hyperplane vectors: {v:?}"
                )));
            }
            hyperplanes.push(v);
        }
        Ok(Arrangement { basis, hyperplanes })
    }

    pub fn basis(&self) -> &LatticeBasis {
        &self.basis
    }

    pub fn dim(&self) -> usize {
        self.basis.dim()
    }

    pub fn hyperplanes(&self) -> &[Vec<i64>] {
        &self.hyperplanes
    }

    /// The complete arrangement `{H_s, H_t, H_{s-t}, H_{s+t}}` on a rank-2
    /// class lattice (the essential arrangement of the dihedral groups).
    pub fn complete_rank2(basis: LatticeBasis) -> Result<Self> {
        if basis.dim() != 2 {
            return Err(Error::DimensionMismatch { expected: 2, got: basis.dim() });
        }
        Arrangement::new(basis, vec![vec![1, 0], vec![0, 1], vec![1, -1], vec![1, 1]])
    }

    /// The complete arrangement on a rank-1 class lattice.
    pub fn complete_rank1(basis: LatticeBasis) -> Result<Self> {
        if basis.dim() != 1 {
            return Err(Error::DimensionMismatch { expected: 1, got: basis.dim() });
        }
        Arrangement::new(basis, vec![vec![1]])
    }

    /// The eight essential hyperplanes of type F4 on labels `(s, t)`:
    /// `s, t, s-2t, s-t, 2s-t, s+2t, s+t, 2s+t`.
    pub fn f4_essential(basis: LatticeBasis) -> Result<Self> {
        if basis.dim() != 2 {
            return Err(Error::DimensionMismatch { expected: 2, got: basis.dim() });
        }
        Arrangement::new(
            basis,
            vec![
                vec![1, 0],
                vec![0, 1],
                vec![1, -2],
                vec![1, -1],
                vec![2, -1],
                vec![1, 2],
                vec![1, 1],
                vec![2, 1],
            ],
        )
    }

    /// True iff every coordinate hyperplane `H_omega` appears (up to sign).
    pub fn is_complete(&self) -> bool {
        (0..self.dim()).all(|c| self.coordinate_hyperplane(c).is_some())
    }

    fn coordinate_hyperplane(&self, class: usize) -> Option<usize> {
        self.hyperplanes.iter().position(|h| {
            h.iter().enumerate().all(|(i, &x)| if i == class { x.abs() == 1 } else { x == 0 })
        })
    }

    /// Sign vector of a positive part.
    pub fn facet_of(&self, x: &PositivePart) -> Result<Facet> {
        if x.dim() != self.dim() {
            return Err(Error::DimensionMismatch { expected: self.dim(), got: x.dim() });
        }
        let signs: Vec<i8> =
            self.hyperplanes.iter().map(|h| Ok(x.sign_of(h)?.as_i8())).collect::<Result<_>>()?;
        Ok(self.facet_from_signs(signs))
    }

    /// Sign vector of the positive part induced by a weight function.
    pub fn facet_of_weight(&self, w: &WeightFunction) -> Result<Facet> {
        if w.num_classes() != self.dim() {
            return Err(Error::DimensionMismatch { expected: self.dim(), got: w.num_classes() });
        }
        let signs = self.hyperplanes.iter().map(|h| w.sign_on(h).as_i8()).collect();
        Ok(self.facet_from_signs(signs))
    }

    fn facet_from_signs(&self, signs: Vec<i8>) -> Facet {
        let zeros: Vec<Vec<i64>> = signs
            .iter()
            .enumerate()
            .filter(|&(_, &s)| s == 0)
            .map(|(h, _)| self.hyperplanes[h].clone())
            .collect();
        let dim = self.dim() - linalg::rank(&zeros);
        Facet { signs, dim }
    }

    /// Rank-one feasibility of a (possibly partial) sign assignment:
    /// `signs[h] = None` leaves hyperplane `h` unconstrained. On success
    /// returns an integer form realizing the assigned signs.
    fn sign_witness(&self, signs: &[Option<i8>]) -> Option<Vec<i64>> {
        let d = self.dim();
        let zeros: Vec<Vec<i64>> = signs
            .iter()
            .enumerate()
            .filter(|&(_, s)| *s == Some(0))
            .map(|(h, _)| self.hyperplanes[h].clone())
            .collect();
        let kernel = linalg::kernel_of_rows(d, &zeros);
        let mut strict: Vec<Vec<i64>> = Vec::new();
        for (h, s) in signs.iter().enumerate() {
            let sig = match s {
                Some(0) | None => continue,
                Some(s) => *s as i64,
            };
            let mu: Vec<i64> = kernel.iter().map(|col| sig * dot(col, &self.hyperplanes[h])).collect();
            if is_zero_vec(&mu) {
                return None; // strict sign forced to zero by the zero set
            }
            strict.push(mu);
        }
        match feas::separate(kernel.len(), &strict) {
            Separation::Witness(y) => {
                let mut w = vec![0i64; d];
                for (yi, col) in y.iter().zip(&kernel) {
                    for (wj, cj) in w.iter_mut().zip(col) {
                        *wj += yi * cj;
                    }
                }
                Some(w)
            }
            Separation::Relation(_) => None,
        }
    }

    /// All realizable sign vectors, sorted by sign vector. Backtracking over
    /// candidate assignments with exact infeasibility pruning on prefixes.
    pub fn enumerate_facets(&self) -> Vec<Facet> {
        let n = self.hyperplanes.len();
        let mut out = Vec::new();
        let mut signs: Vec<Option<i8>> = vec![None; n];
        self.enumerate_rec(&mut signs, 0, &mut out);
        let mut facets: Vec<Facet> =
            out.into_iter().map(|signs| self.facet_from_signs(signs)).collect();
        facets.sort();
        facets
    }

    fn enumerate_rec(&self, signs: &mut Vec<Option<i8>>, h: usize, out: &mut Vec<Vec<i8>>) {
        if self.sign_witness(signs).is_none() {
            return;
        }
        if h == signs.len() {
            out.push(signs.iter().map(|s| s.unwrap()).collect());
            return;
        }
        for s in [-1i8, 0, 1] {
            signs[h] = Some(s);
            self.enumerate_rec(signs, h + 1, out);
        }
        signs[h] = None;
    }

    /// A small deterministic rank-one representative of a facet: the first
    /// integer point in the max-norm/lexicographic enumeration whose signs
    /// match, falling back to the feasibility witness.
    pub fn facet_witness(&self, facet: &Facet) -> Result<Vec<i64>> {
        let d = self.dim();
        if facet.signs.len() != self.hyperplanes.len() {
            return Err(Error::InvalidArrangement("facet/arrangement mismatch".into()));
        }
        let matches = |w: &[i64]| {
            self.hyperplanes
                .iter()
                .zip(&facet.signs)
                .all(|(h, &s)| Sign::of(dot(w, h)).as_i8() == s)
        };
        if facet.signs.iter().all(|&s| s == 0) {
            return Ok(vec![0; d]);
        }
        let mut budget = 2_000_000usize;
        'bounds: for bound in 1..=64i64 {
            let mut v = vec![-bound; d];
            loop {
                if budget == 0 {
                    break 'bounds;
                }
                budget -= 1;
                if v.iter().any(|&x| x.abs() == bound) && matches(&v) {
                    return Ok(v);
                }
                // Lexicographic odometer over the box [-bound, bound]^d.
                let mut i = d;
                while i > 0 && v[i - 1] == bound {
                    v[i - 1] = -bound;
                    i -= 1;
                }
                if i == 0 {
                    break;
                }
                v[i - 1] += 1;
            }
        }
        let opt: Vec<Option<i8>> = facet.signs.iter().map(|&s| Some(s)).collect();
        let w = self.sign_witness(&opt).ok_or(Error::UnrealizableFacet)?;
        if !matches(&w) {
            return Err(Error::Internal("feasibility witness missed the facet".into()));
        }
        Ok(w)
    }

    /// Face order: `f` lies in the closure of `g` iff every sign of `f` is
    /// zero or agrees with `g`.
    pub fn face_leq(&self, f: &Facet, g: &Facet) -> Result<bool> {
        if f.signs.len() != self.hyperplanes.len() || g.signs.len() != self.hyperplanes.len() {
            return Err(Error::InvalidArrangement("facet/arrangement mismatch".into()));
        }
        Ok(f.signs.iter().zip(&g.signs).all(|(&a, &b)| a == 0 || a == b))
    }

    /// Chambers whose closure contains `f`.
    pub fn chambers_above(&self, f: &Facet) -> Result<Vec<Facet>> {
        let all = self.enumerate_facets();
        Ok(all
            .into_iter()
            .filter(|c| c.is_chamber() && self.face_leq(f, c).unwrap_or(false))
            .collect())
    }

    /// Classes whose coordinate hyperplane contains the facet; the standard
    /// parabolic they generate acts trivially on the facet's weights.
    pub fn parabolic_zero_classes(&self, f: &Facet) -> Result<BTreeSet<usize>> {
        let mut out = BTreeSet::new();
        for c in 0..self.dim() {
            let h = self
                .coordinate_hyperplane(c)
                .ok_or_else(|| Error::NotComplete(self.basis.labels()[c].clone()))?;
            if f.signs[h] == 0 {
                out.insert(c);
            }
        }
        Ok(out)
    }

    /// Distinct weight functions whose positive parts lie in the facet.
    ///
    /// The first is the small rank-one witness; later entries interleave
    /// rank-two flag refinements (exercising non-archimedean orders) with
    /// integer perturbations inside the facet, then rescalings. The all-zero
    /// facet is the single point `{Lambda}`, so only the zero weight is
    /// returned there regardless of `k`.
    pub fn representative_weights(&self, facet: &Facet, k: usize) -> Result<Vec<WeightFunction>> {
        let d = self.dim();
        let w1 = self.facet_witness(facet)?;
        if is_zero_vec(&w1) {
            return Ok(vec![WeightFunction::zero(d)]);
        }
        let zeros: Vec<Vec<i64>> = facet
            .zero_set()
            .iter()
            .map(|&h| self.hyperplanes[h].clone())
            .collect();
        // Forms vanishing on the zero set keep all facet signs intact when
        // used as refinements or as small perturbation directions.
        let mut directions = linalg::kernel_of_rows(d, &zeros);
        if directions.is_empty() {
            directions.push(w1.clone());
        }

        let in_facet = |w: &WeightFunction| {
            self.hyperplanes
                .iter()
                .zip(&facet.signs)
                .all(|(h, &s)| w.sign_on(h).as_i8() == s)
        };

        let mut pool: Vec<WeightFunction> = Vec::new();
        let push = |w: WeightFunction, pool: &mut Vec<WeightFunction>| {
            if in_facet(&w) && !pool.contains(&w) {
                pool.push(w);
            }
        };

        push(WeightFunction::rank_one(w1.clone()), &mut pool);
        // Rank-two flag refinements (w1, psi).
        for psi in &directions {
            let values = (0..d).map(|c| vec![w1[c], psi[c]]).collect();
            push(WeightFunction::new(2, values)?, &mut pool);
            if pool.len() >= k {
                break;
            }
        }
        // Perturbed rank-one members N w1 + delta.
        for psi in directions.iter().chain(std::iter::once(&w1)) {
            for sgn in [1i64, -1] {
                let slack = self
                    .hyperplanes
                    .iter()
                    .map(|h| dot(psi, h).abs())
                    .max()
                    .unwrap_or(0);
                let n = slack + 1;
                let w: Vec<i64> = w1.iter().zip(psi).map(|(&a, &b)| n * a + sgn * b).collect();
                push(WeightFunction::rank_one(w), &mut pool);
            }
            if pool.len() >= k {
                break;
            }
        }
        // Rescalings are distinct weights in the same positive part.
        let mut scale = 2i64;
        while pool.len() < k && scale <= k as i64 + 2 {
            push(WeightFunction::rank_one(w1.iter().map(|&x| scale * x).collect()), &mut pool);
            scale += 1;
        }
        pool.truncate(k.max(1));
        Ok(pool)
    }

    /// Re-expresses the arrangement in another label order.
    pub fn align_to_labels(&self, labels: &[String]) -> Result<Arrangement> {
        let d = self.dim();
        if labels.len() != d {
            return Err(Error::DimensionMismatch { expected: d, got: labels.len() });
        }
        let perm: Vec<usize> = labels
            .iter()
            .map(|l| {
                self.basis
                    .index_of(l)
                    .ok_or_else(|| Error::Parse(format!("arrangement has no label `{l}`")))
            })
            .collect::<Result<_>>()?;
        let vectors = self
            .hyperplanes
            .iter()
            .map(|h| perm.iter().map(|&i| h[i]).collect())
            .collect();
        Arrangement::new(LatticeBasis::new(labels.to_vec())?, vectors)
    }

    /// Renders a hyperplane vector with the basis labels, e.g. `s-2t`.
    pub fn hyperplane_label(&self, h: usize) -> String {
        let mut out = String::new();
        for (c, &x) in self.hyperplanes[h].iter().enumerate() {
            if x == 0 {
                continue;
            }
            if x > 0 && !out.is_empty() {
                out.push('+');
            }
            if x == -1 {
                out.push('-');
            } else if x != 1 {
                out.push_str(&x.to_string());
            }
            out.push_str(&self.basis.labels()[c]);
        }
        if out.is_empty() {
            out.push('0');
        }
        out
    }
}
