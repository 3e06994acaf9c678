//! Weight functions: maps from generator classes into `Z^r` with the
//! lexicographic order (leftmost coordinate most significant).
//!
//! A weight function is equivalently a group morphism from the class
//! lattice `Z[S-bar]` into `Z^r`; evaluating it on a lattice point and
//! taking the lexicographic sign recovers the positive part it induces.

use crate::error::{Error, Result};
use crate::lattice::{PositivePart, Sign};

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct WeightFunction {
    rank: usize,
    values: Vec<Vec<i64>>,
}

impl WeightFunction {
    pub fn new(rank: usize, values: Vec<Vec<i64>>) -> Result<Self> {
        if rank == 0 {
            return Err(Error::InvalidWeight("rank must be at least 1".into()));
        }
        for v in &values {
            if v.len() != rank {
                return Err(Error::DimensionMismatch { expected: rank, got: v.len() });
            }
        }
        Ok(WeightFunction { rank, values })
    }

    /// Rank-one weight: a single integer per class.
    pub fn rank_one(values: Vec<i64>) -> Self {
        WeightFunction { rank: 1, values: values.into_iter().map(|v| vec![v]).collect() }
    }

    pub fn zero(num_classes: usize) -> Self {
        WeightFunction::rank_one(vec![0; num_classes])
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn num_classes(&self) -> usize {
        self.values.len()
    }

    pub fn value(&self, class: usize) -> &[i64] {
        &self.values[class]
    }

    pub fn values(&self) -> &[Vec<i64>] {
        &self.values
    }

    /// Image of a class-lattice point: `sum_w lambda_w . value(w)`.
    pub fn eval(&self, lambda: &[i64]) -> Vec<i64> {
        assert_eq!(lambda.len(), self.values.len(), "weight evaluation dimension mismatch");
        let mut out = vec![0i64; self.rank];
        for (c, v) in lambda.iter().zip(&self.values) {
            for (o, x) in out.iter_mut().zip(v) {
                *o = o.checked_add(c.checked_mul(*x).expect("weight eval overflow")).unwrap();
            }
        }
        out
    }

    /// Lexicographic sign of the image of `lambda`.
    pub fn sign_on(&self, lambda: &[i64]) -> Sign {
        for x in self.eval(lambda) {
            match Sign::of(x) {
                Sign::Zero => continue,
                s => return s,
            }
        }
        Sign::Zero
    }

    /// Lexicographic sign of the value on one class.
    pub fn class_sign(&self, class: usize) -> Sign {
        self.values[class]
            .iter()
            .map(|&x| Sign::of(x))
            .find(|&s| s != Sign::Zero)
            .unwrap_or(Sign::Zero)
    }

    /// The positive part `Pos(phi)` of the class lattice: the flag whose
    /// i-th form collects the i-th coordinates of the class values.
    pub fn positive_part(&self) -> PositivePart {
        let d = self.values.len();
        let rows: Vec<Vec<i64>> =
            (0..self.rank).map(|i| (0..d).map(|c| self.values[c][i]).collect()).collect();
        PositivePart::new(d, &rows).expect("consistent dimensions")
    }

    /// Flips the classes whose value is lexicographically negative.
    /// Returns the flipped weight and the per-class flip mask.
    pub fn normalized(&self) -> (WeightFunction, Vec<bool>) {
        let mut values = self.values.clone();
        let mut flips = vec![false; values.len()];
        for (c, v) in values.iter_mut().enumerate() {
            if self.class_sign(c) == Sign::Negative {
                for x in v.iter_mut() {
                    *x = -*x;
                }
                flips[c] = true;
            }
        }
        (WeightFunction { rank: self.rank, values }, flips)
    }

    /// Post-composition with an integer linear map `rho` given as `r' x r`
    /// rows; the transported weight for `rho . phi`.
    pub fn compose(&self, rho: &[Vec<i64>]) -> Result<WeightFunction> {
        let new_rank = rho.len();
        if new_rank == 0 || rho.iter().any(|r| r.len() != self.rank) {
            return Err(Error::InvalidWeight("bad exponent map shape".into()));
        }
        let values = self
            .values
            .iter()
            .map(|v| rho.iter().map(|row| crate::linalg::dot(row, v)).collect())
            .collect();
        WeightFunction::new(new_rank, values)
    }

    /// Scales every value by a positive integer.
    pub fn scale(&self, k: i64) -> WeightFunction {
        assert!(k > 0, "scaling must be by a positive integer");
        WeightFunction {
            rank: self.rank,
            values: self.values.iter().map(|v| v.iter().map(|x| x * k).collect()).collect(),
        }
    }
}

/// The canonical weight of a positive part of the class lattice: class
/// values are the flag forms evaluated on the basis vectors, with the
/// zero weight for the whole lattice.
pub fn weight_from_positive_part(x: &PositivePart) -> WeightFunction {
    let d = x.dim();
    let flag = x.flag();
    if flag.is_empty() {
        return WeightFunction::zero(d);
    }
    let values = (0..d).map(|c| flag.iter().map(|phi| phi[c]).collect()).collect();
    WeightFunction { rank: flag.len(), values }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn positive_part_round_trips() {
        let w = WeightFunction::rank_one(vec![1, 2]);
        let x = w.positive_part();
        assert_eq!(x.flag(), &[vec![1, 2]]);
        assert_eq!(weight_from_positive_part(&x), w);

        let x = PositivePart::new(2, &[vec![1, 1], vec![0, 1]]).unwrap();
        let w = weight_from_positive_part(&x);
        assert_eq!(w.rank(), 2);
        assert_eq!(w.value(0), &[1, 0]);
        assert_eq!(w.value(1), &[1, 1]);
        assert_eq!(w.positive_part(), x);

        let whole = PositivePart::whole(2);
        assert_eq!(weight_from_positive_part(&whole), WeightFunction::zero(2));
    }

    #[test]
    fn signs_and_normalization() {
        let w = WeightFunction::new(2, vec![vec![1, 0], vec![-1, 3]]).unwrap();
        assert_eq!(w.class_sign(0), Sign::Positive);
        assert_eq!(w.class_sign(1), Sign::Negative);
        let (n, flips) = w.normalized();
        assert_eq!(flips, vec![false, true]);
        assert_eq!(n.value(1), &[1, -3]);
    }

    #[test]
    fn eval_is_lexicographic() {
        let w = WeightFunction::new(2, vec![vec![1, 0], vec![-1, 3]]).unwrap();
        assert_eq!(w.eval(&[1, 1]), vec![0, 3]);
        assert_eq!(w.sign_on(&[1, 1]), Sign::Positive);
        assert_eq!(w.sign_on(&[1, -1]), Sign::Positive); // (2,-3) lex positive
        assert_eq!(w.sign_on(&[0, 0]), Sign::Zero);
    }
}
