//! Sparse integer Laurent elements over the exponent group `Z^r` with the
//! lexicographic order (leftmost coordinate most significant).
//!
//! Terms are kept in a flat vector sorted by exponent. Exponents are inline
//! arrays padded with zeros, so the derived array order IS the
//! lexicographic group order: the strictly negative part of an element is
//! a prefix of its term list, and the bar involution is negate-and-reverse.
//! Coefficient arithmetic is checked; overflow aborts rather than wraps.

/// Hard cap on the exponent rank. Flags on the class lattices in scope
/// have length at most two; four leaves headroom for custom groups.
pub const MAX_RANK: usize = 4;

/// An exponent vector, zero-padded to the rank cap.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Exp([i32; MAX_RANK]);

impl Exp {
    pub const ZERO: Exp = Exp([0; MAX_RANK]);

    pub fn from_coords(e: &[i64]) -> Exp {
        assert!(e.len() <= MAX_RANK, "exponent rank above {MAX_RANK} is not supported");
        let mut v = [0i32; MAX_RANK];
        for (slot, &x) in v.iter_mut().zip(e) {
            *slot = i32::try_from(x).expect("exponent out of i32 range");
        }
        Exp(v)
    }

    pub fn coords(&self, rank: usize) -> Vec<i64> {
        self.0[..rank].iter().map(|&x| x as i64).collect()
    }

    fn add(&self, other: &Exp) -> Exp {
        let mut v = [0i32; MAX_RANK];
        for ((slot, &a), &b) in v.iter_mut().zip(&self.0).zip(&other.0) {
            *slot = a.checked_add(b).expect("exponent overflow");
        }
        Exp(v)
    }

    pub fn neg(&self) -> Exp {
        let mut v = self.0;
        for x in v.iter_mut() {
            *x = -*x;
        }
        Exp(v)
    }

    pub fn is_lex_negative(&self) -> bool {
        *self < Exp::ZERO
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Laurent {
    rank: usize,
    terms: Vec<(Exp, i64)>,
}

fn mul_coeff(a: i64, b: i64) -> i64 {
    a.checked_mul(b).expect("coefficient overflow")
}

/// Merges two sorted term lists, the second scaled by `scale`.
fn merge_scaled(a: &[(Exp, i64)], b: &[(Exp, i64)], scale: i64) -> Vec<(Exp, i64)> {
    let mut out = Vec::with_capacity(a.len() + b.len());
    let (mut i, mut j) = (0, 0);
    while i < a.len() && j < b.len() {
        match a[i].0.cmp(&b[j].0) {
            std::cmp::Ordering::Less => {
                out.push(a[i]);
                i += 1;
            }
            std::cmp::Ordering::Greater => {
                out.push((b[j].0, mul_coeff(b[j].1, scale)));
                j += 1;
            }
            std::cmp::Ordering::Equal => {
                let c = a[i].1.checked_add(mul_coeff(b[j].1, scale)).expect("coefficient overflow");
                if c != 0 {
                    out.push((a[i].0, c));
                }
                i += 1;
                j += 1;
            }
        }
    }
    out.extend_from_slice(&a[i..]);
    for &(e, c) in &b[j..] {
        out.push((e, mul_coeff(c, scale)));
    }
    out
}

impl Laurent {
    pub fn zero(rank: usize) -> Self {
        assert!(rank >= 1 && rank <= MAX_RANK, "rank must be in 1..={MAX_RANK}");
        Laurent { rank, terms: Vec::new() }
    }

    pub fn one(rank: usize) -> Self {
        Laurent::monomial_at(rank, Exp::ZERO, 1)
    }

    /// `c . e^exp`; drops a zero coefficient.
    pub fn monomial(exp: &[i64], c: i64) -> Self {
        Laurent::monomial_at(exp.len(), Exp::from_coords(exp), c)
    }

    fn monomial_at(rank: usize, exp: Exp, c: i64) -> Self {
        let mut out = Laurent::zero(rank);
        if c != 0 {
            out.terms.push((exp, c));
        }
        out
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn terms(&self) -> impl Iterator<Item = (Exp, i64)> + '_ {
        self.terms.iter().copied()
    }

    pub fn coeff(&self, exp: &[i64]) -> i64 {
        self.coeff_at(Exp::from_coords(exp))
    }

    fn coeff_at(&self, exp: Exp) -> i64 {
        match self.terms.binary_search_by(|t| t.0.cmp(&exp)) {
            Ok(i) => self.terms[i].1,
            Err(_) => 0,
        }
    }

    pub fn constant_term(&self) -> i64 {
        self.coeff_at(Exp::ZERO)
    }

    pub fn add_term(&mut self, exp: &[i64], c: i64) {
        if c == 0 {
            return;
        }
        let e = Exp::from_coords(exp);
        match self.terms.binary_search_by(|t| t.0.cmp(&e)) {
            Ok(i) => {
                let s = self.terms[i].1.checked_add(c).expect("coefficient overflow");
                if s == 0 {
                    self.terms.remove(i);
                } else {
                    self.terms[i].1 = s;
                }
            }
            Err(i) => self.terms.insert(i, (e, c)),
        }
    }

    pub fn add_assign(&mut self, other: &Laurent) {
        self.add_assign_scaled(other, 1);
    }

    pub fn add_assign_scaled(&mut self, other: &Laurent, scale: i64) {
        debug_assert_eq!(self.rank, other.rank);
        if scale == 0 || other.is_zero() {
            return;
        }
        if self.is_zero() {
            self.terms = other.terms.iter().map(|&(e, c)| (e, mul_coeff(c, scale))).collect();
            return;
        }
        self.terms = merge_scaled(&self.terms, &other.terms, scale);
    }

    pub fn sub_assign(&mut self, other: &Laurent) {
        self.add_assign_scaled(other, -1);
    }

    pub fn neg(&self) -> Laurent {
        Laurent {
            rank: self.rank,
            terms: self.terms.iter().map(|&(e, c)| (e, -c)).collect(),
        }
    }

    pub fn mul(&self, other: &Laurent) -> Laurent {
        debug_assert_eq!(self.rank, other.rank);
        if self.is_zero() || other.is_zero() {
            return Laurent::zero(self.rank);
        }
        // Shift-and-scale fast path for monomial factors.
        if self.terms.len() == 1 {
            let (e, c) = self.terms[0];
            return Laurent {
                rank: self.rank,
                terms: other.terms.iter().map(|&(eo, co)| (e.add(&eo), mul_coeff(c, co))).collect(),
            };
        }
        if other.terms.len() == 1 {
            return other.mul(self);
        }
        let mut raw: Vec<(Exp, i64)> = Vec::with_capacity(self.terms.len() * other.terms.len());
        for &(ea, ca) in &self.terms {
            for &(eb, cb) in &other.terms {
                raw.push((ea.add(&eb), mul_coeff(ca, cb)));
            }
        }
        raw.sort_unstable_by(|a, b| a.0.cmp(&b.0));
        let mut terms: Vec<(Exp, i64)> = Vec::with_capacity(raw.len());
        for (e, c) in raw {
            match terms.last_mut() {
                Some(last) if last.0 == e => {
                    last.1 = last.1.checked_add(c).expect("coefficient overflow");
                    if last.1 == 0 {
                        terms.pop();
                    }
                }
                _ => terms.push((e, c)),
            }
        }
        Laurent { rank: self.rank, terms }
    }

    /// Bar involution on the group algebra: `e^g -> e^{-g}`. Negating
    /// every exponent reverses the sort order.
    pub fn bar(&self) -> Laurent {
        Laurent {
            rank: self.rank,
            terms: self.terms.iter().rev().map(|&(e, c)| (e.neg(), c)).collect(),
        }
    }

    /// The part supported on strictly lex-negative exponents: a prefix of
    /// the sorted term list.
    pub fn neg_part(&self) -> Laurent {
        let cut = self.terms.partition_point(|t| t.0 < Exp::ZERO);
        Laurent { rank: self.rank, terms: self.terms[..cut].to_vec() }
    }

    /// True iff every exponent is lex-negative (the condition on the lower
    /// coefficients of a Kazhdan-Lusztig basis element).
    pub fn is_lex_negative(&self) -> bool {
        self.terms.last().is_none_or(|t| t.0 < Exp::ZERO)
    }

    /// Checks `bar(self) = -self`; such an element has zero constant term
    /// and is determined by its negative part.
    pub fn is_bar_antisymmetric(&self) -> bool {
        let n = self.terms.len();
        (0..n).all(|i| {
            let (e, c) = self.terms[i];
            let (f, d) = self.terms[n - 1 - i];
            f == e.neg() && d == -c
        })
    }

    /// Augmentation `e^g -> 1`.
    pub fn aug(&self) -> i64 {
        self.terms.iter().fold(0i64, |s, &(_, c)| s.checked_add(c).expect("aug overflow"))
    }

    /// Applies an integer map to every exponent, merging collisions.
    pub fn map_exponents(&self, f: impl Fn(&[i64]) -> Vec<i64>, new_rank: usize) -> Laurent {
        let mut out = Laurent::zero(new_rank);
        for &(e, c) in &self.terms {
            let ne = f(&e.coords(self.rank));
            debug_assert_eq!(ne.len(), new_rank);
            out.add_term(&ne, c);
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn lau(terms: &[(&[i64], i64)]) -> Laurent {
        let mut out = Laurent::zero(terms[0].0.len());
        for (e, c) in terms {
            out.add_term(e, *c);
        }
        out
    }

    #[test]
    fn arithmetic_and_cancellation() {
        let a = lau(&[(&[1], 1), (&[-1], -1)]);
        let b = a.bar();
        assert_eq!(b, lau(&[(&[-1], 1), (&[1], -1)]));
        let mut s = a.clone();
        s.add_assign(&b);
        assert!(s.is_zero());
        assert!(a.is_bar_antisymmetric());
        assert_eq!(a.aug(), 0);

        let p = lau(&[(&[1], 1), (&[-1], 1)]);
        let q = p.mul(&p);
        assert_eq!(q, lau(&[(&[2], 1), (&[0], 2), (&[-2], 1)]));
        assert_eq!(q.aug(), 4);
        // Monomial fast path agrees with the generic route.
        let m = lau(&[(&[3], -2)]);
        assert_eq!(m.mul(&p), lau(&[(&[4], -2), (&[2], -2)]));
        assert_eq!(p.mul(&m), m.mul(&p));
    }

    #[test]
    fn lex_negative_parts() {
        let a = lau(&[(&[0, -3], 5), (&[-1, 7], 2), (&[0, 0], 9), (&[1, -9], 4)]);
        let n = a.neg_part();
        assert_eq!(n, lau(&[(&[0, -3], 5), (&[-1, 7], 2)]));
        assert!(n.is_lex_negative());
        assert!(!a.is_lex_negative());
        assert_eq!(a.constant_term(), 9);
        assert_eq!(a.coeff(&[1, -9]), 4);
        assert_eq!(a.coeff(&[1, 9]), 0);
    }

    #[test]
    fn antisymmetric_split_recovers_negative_part() {
        // alpha = p - bar(p) for p strictly negative: neg_part(alpha) = p.
        let p = lau(&[(&[-1, 2], 3), (&[-2, 0], -1)]);
        let mut alpha = p.clone();
        alpha.sub_assign(&p.bar());
        assert!(alpha.is_bar_antisymmetric());
        assert_eq!(alpha.constant_term(), 0);
        assert_eq!(alpha.neg_part(), p);
        assert!(!lau(&[(&[1, 0], 1)]).is_bar_antisymmetric());
    }

    #[test]
    fn exponent_maps() {
        let a = lau(&[(&[1, 0], 1), (&[0, 1], 1)]);
        // Collapse both coordinates onto their sum.
        let b = a.map_exponents(|e| vec![e[0] + e[1]], 1);
        assert_eq!(b, lau(&[(&[1], 2)]));
    }
}
