//! Hecke algebras of finite Coxeter systems over `Z[Z^r]` with the
//! lexicographic order: T-basis arithmetic, the bar involution,
//! Kazhdan-Lusztig basis and cells, and the transports (exponent maps,
//! sign changes, augmentation) that move elements between parameters.

pub mod cells;
pub mod kl;
pub mod laurent;

use std::collections::{BTreeMap, BTreeSet, HashMap};

use crate::coxeter::{CoxeterSystem, Element};
use crate::error::{Error, Result};
use crate::lattice::Sign;
use crate::weight::WeightFunction;
use laurent::Laurent;

pub use cells::{analyze, cells_for_weight, CellAnalysis, CellPartition, Side};
pub use kl::KlBasis;

/// A sparse element of the Hecke algebra in the T-basis: finitely many
/// group elements with Laurent coefficients.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HeckeElement {
    rank: usize,
    terms: BTreeMap<Element, Laurent>,
}

impl HeckeElement {
    pub fn zero(rank: usize) -> Self {
        HeckeElement { rank, terms: BTreeMap::new() }
    }

    /// The basis element `T_w`.
    pub fn t(w: Element, rank: usize) -> Self {
        let mut terms = BTreeMap::new();
        terms.insert(w, Laurent::one(rank));
        HeckeElement { rank, terms }
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, w: Element) -> Laurent {
        self.terms.get(&w).cloned().unwrap_or_else(|| Laurent::zero(self.rank))
    }

    pub fn terms(&self) -> impl Iterator<Item = (Element, &Laurent)> {
        self.terms.iter().map(|(&w, c)| (w, c))
    }

    pub fn support(&self) -> impl Iterator<Item = Element> + '_ {
        self.terms.keys().copied()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn max_support(&self) -> Option<Element> {
        self.terms.last_key_value().map(|(&w, _)| w)
    }

    pub fn add_term(&mut self, w: Element, c: Laurent) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(w) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                o.get_mut().add_assign(&c);
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    pub fn add_assign(&mut self, other: &HeckeElement) {
        for (w, c) in other.terms() {
            self.add_term(w, c.clone());
        }
    }

    /// `self += poly * other`.
    pub fn add_assign_scaled(&mut self, other: &HeckeElement, poly: &Laurent) {
        for (w, c) in other.terms() {
            self.add_term(w, poly.mul(c));
        }
    }

    pub fn sub_assign(&mut self, other: &HeckeElement) {
        for (w, c) in other.terms() {
            self.add_term(w, c.neg());
        }
    }

    /// Applies an integer exponent map `rho` (given as `r' x r` rows) to
    /// every coefficient; the transport to the composed weight `rho . phi`.
    pub fn map_exponents(&self, rho: &[Vec<i64>]) -> HeckeElement {
        let new_rank = rho.len();
        let terms = self
            .terms
            .iter()
            .map(|(&w, c)| {
                (w, c.map_exponents(|e| rho.iter().map(|row| crate::linalg::dot(row, e)).collect(), new_rank))
            })
            .filter(|(_, c)| !c.is_zero())
            .collect();
        HeckeElement { rank: new_rank, terms }
    }
}

/// The Hecke algebra of a finite Coxeter system at a weight function.
pub struct Algebra<'s> {
    pub system: &'s CoxeterSystem,
    pub weight: WeightFunction,
    /// `e^{phi(s)} - e^{-phi(s)}` per generator.
    xi: Vec<Laurent>,
    /// `e^{-phi(s)}` per generator.
    e_neg: Vec<Laurent>,
    /// Lexicographic sign of `phi(s)` per generator.
    gen_sign: Vec<Sign>,
}

impl<'s> Algebra<'s> {
    pub fn new(system: &'s CoxeterSystem, weight: WeightFunction) -> Result<Self> {
        if weight.num_classes() != system.num_classes() {
            return Err(Error::DimensionMismatch {
                expected: system.num_classes(),
                got: weight.num_classes(),
            });
        }
        if weight.rank() > laurent::MAX_RANK {
            return Err(Error::InvalidWeight(format!(
                "exponent rank {} exceeds the supported maximum {}",
                weight.rank(),
                laurent::MAX_RANK
            )));
        }
        let mut xi = Vec::new();
        let mut e_neg = Vec::new();
        let mut gen_sign = Vec::new();
        for g in 0..system.num_generators() {
            let phi = weight.value(system.class_of_generator(g)).to_vec();
            let neg: Vec<i64> = phi.iter().map(|&x| -x).collect();
            let mut x = Laurent::monomial(&phi, 1);
            x.add_term(&neg, -1);
            xi.push(x);
            e_neg.push(Laurent::monomial(&neg, 1));
            gen_sign.push(weight.class_sign(system.class_of_generator(g)));
        }
        Ok(Algebra { system, weight, xi, e_neg, gen_sign })
    }

    pub fn rank(&self) -> usize {
        self.weight.rank()
    }

    pub fn gen_sign(&self, g: usize) -> Sign {
        self.gen_sign[g]
    }

    pub(crate) fn xi(&self, g: usize) -> &Laurent {
        &self.xi[g]
    }

    pub(crate) fn e_neg_phi(&self, g: usize) -> &Laurent {
        &self.e_neg[g]
    }

    /// Left multiplication by `T_s`: `T_s T_y = T_{sy}` going up, plus the
    /// quadratic correction `xi_s T_y` going down.
    pub fn lmul_gen(&self, s: usize, h: &HeckeElement) -> HeckeElement {
        let mut out = HeckeElement::zero(h.rank());
        for (y, c) in h.terms() {
            let sy = self.system.left_mul(s, y);
            out.add_term(sy, c.clone());
            if self.system.length(sy) < self.system.length(y) {
                out.add_term(y, self.xi[s].mul(c));
            }
        }
        out
    }

    /// Right multiplication by `T_s`.
    pub fn rmul_gen(&self, h: &HeckeElement, s: usize) -> HeckeElement {
        let mut out = HeckeElement::zero(h.rank());
        for (y, c) in h.terms() {
            let ys = self.system.right_mul(y, s);
            out.add_term(ys, c.clone());
            if self.system.length(ys) < self.system.length(y) {
                out.add_term(y, self.xi[s].mul(c));
            }
        }
        out
    }

    /// Bilinear product in the T-basis.
    pub fn t_multiply(&self, h: &HeckeElement, g: &HeckeElement) -> HeckeElement {
        let mut out = HeckeElement::zero(h.rank());
        for (y, c) in g.terms() {
            let mut acc = h.clone();
            for &letter in self.system.word(y) {
                acc = self.rmul_gen(&acc, letter as usize);
            }
            out.add_assign_scaled(&acc, c);
        }
        out
    }

    /// The bar involution: `e^g -> e^{-g}`, `T_w -> T_{w^{-1}}^{-1}`,
    /// computed through memoized expansions of `bar(T_w)`.
    pub fn bar(&self, h: &HeckeElement) -> HeckeElement {
        let mut memo: HashMap<Element, HeckeElement> = HashMap::new();
        let mut out = HeckeElement::zero(h.rank());
        for (w, c) in h.terms() {
            let bt = self.bar_t_memo(w, &mut memo);
            out.add_assign_scaled(bt, &c.bar());
        }
        out
    }

    fn bar_t_memo<'m>(
        &self,
        w: Element,
        memo: &'m mut HashMap<Element, HeckeElement>,
    ) -> &'m HeckeElement {
        if !memo.contains_key(&w) {
            let value = if w == Element::IDENTITY {
                HeckeElement::t(w, self.rank())
            } else {
                let s = self.system.word(w)[0] as usize;
                let v = self.system.left_mul(s, w);
                let prev = self.bar_t_memo(v, memo).clone();
                // bar(T_s) = T_s - xi_s, applied on the left.
                let mut out = self.lmul_gen(s, &prev);
                out.add_assign_scaled(&prev, &self.xi[s].neg());
                out
            };
            memo.insert(w, value);
        }
        &memo[&w]
    }
}

/// The sign-change isomorphism: flips the weight on the given classes and
/// rescales `T_w` by `(-1)^{l_minus(w)}`.
pub fn sign_change(
    system: &CoxeterSystem,
    s_minus: &BTreeSet<usize>,
    h: &HeckeElement,
) -> HeckeElement {
    let mut out = HeckeElement::zero(h.rank());
    for (w, c) in h.terms() {
        let counts = system.multi_length(w);
        let l_minus: i64 = s_minus.iter().map(|&cls| counts[cls]).sum();
        out.add_term(w, if l_minus % 2 == 0 { c.clone() } else { c.neg() });
    }
    out
}

/// Augmentation specialization `e^g -> 1`: a group-algebra element over Z.
pub fn specialize_aug(h: &HeckeElement) -> BTreeMap<Element, i64> {
    h.terms().filter(|(_, c)| !c.is_zero()).map(|(w, c)| (w, c.aug())).filter(|&(_, a)| a != 0).collect()
}
