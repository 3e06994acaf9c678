//! Exact strict-feasibility kernel.
//!
//! Decides, for a finite list of integer vectors, whether some rational
//! linear form is strictly positive on all of them. The two outcomes each
//! carry an integer certificate:
//!
//! * `Witness(phi)` - a primitive integer form with `phi . v > 0` for every
//!   input vector;
//! * `Relation` - positive integer coefficients on a nonempty subset of the
//!   inputs summing to zero, which rules any such form out.
//!
//! The decision runs a phase-one simplex over `BigRational` (feasibility of
//! `sum u_i v_i = 0`, `sum u_i = 1`, `u >= 0`) with Bland's rule; the
//! witness is the Farkas dual of the infeasible system. Certificates are
//! re-verified in integer arithmetic before being returned.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::linalg::{dot, make_primitive};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Separation {
    /// Primitive integer form strictly positive on every input vector.
    Witness(Vec<i64>),
    /// `(index, coefficient)` pairs with positive coefficients summing to zero.
    Relation(Vec<(usize, i64)>),
}

fn br(x: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(x))
}

/// Decides whether `0` lies in the convex hull of `vectors`.
///
/// Returns `Relation` exactly when it does (so no strictly positive form
/// exists), otherwise `Witness`.
pub fn separate(dim: usize, vectors: &[Vec<i64>]) -> Separation {
    for v in vectors {
        assert_eq!(v.len(), dim, "separate: vector length mismatch");
    }
    if vectors.is_empty() {
        return Separation::Witness(vec![0; dim]);
    }

    let n = vectors.len();
    let m = dim + 1; // d zero-sum rows plus the convexity row
    let cols = n + m;

    // Constant copy of [A | I] for reduced-cost computations.
    let mut a_full = vec![vec![BigRational::zero(); cols]; m];
    for (j, v) in vectors.iter().enumerate() {
        for i in 0..dim {
            a_full[i][j] = br(v[i]);
        }
        a_full[dim][j] = BigRational::one();
    }
    for i in 0..m {
        a_full[i][n + i] = BigRational::one();
    }
    let b: Vec<BigRational> = (0..m)
        .map(|i| if i == dim { BigRational::one() } else { BigRational::zero() })
        .collect();

    // Tableau state: T = B^-1 [A | I], rhs = B^-1 b, basis starts artificial.
    let mut t = a_full.clone();
    let mut rhs = b.clone();
    let mut basis: Vec<usize> = (n..n + m).collect();

    loop {
        // y = c_B B^-1, read from the artificial block of the tableau.
        let y: Vec<BigRational> = (0..m)
            .map(|k| {
                (0..m)
                    .filter(|&i| basis[i] >= n)
                    .map(|i| t[i][n + k].clone())
                    .fold(BigRational::zero(), |s, x| s + x)
            })
            .collect();

        // Bland: first column with negative reduced cost enters.
        let mut entering = None;
        for j in 0..cols {
            let c_j = if j >= n { BigRational::one() } else { BigRational::zero() };
            let mut red = c_j;
            for i in 0..m {
                red -= y[i].clone() * a_full[i][j].clone();
            }
            if red < BigRational::zero() {
                entering = Some(j);
                break;
            }
        }

        let Some(enter) = entering else {
            // Optimal. Objective = sum of basic artificial values.
            let obj: BigRational = (0..m)
                .filter(|&i| basis[i] >= n)
                .map(|i| rhs[i].clone())
                .fold(BigRational::zero(), |s, x| s + x);
            if obj.is_zero() {
                let mut u = vec![BigRational::zero(); n];
                for i in 0..m {
                    if basis[i] < n {
                        u[basis[i]] = rhs[i].clone();
                    }
                }
                return Separation::Relation(clear_relation(vectors, &u));
            }
            // Farkas: phi = -y[0..dim] is strictly positive on every vector.
            let phi_rat: Vec<BigRational> = y[0..dim].iter().map(|x| -x.clone()).collect();
            return Separation::Witness(clear_witness(vectors, &phi_rat));
        };

        // Ratio test with Bland tie-breaking on the leaving basis index.
        let mut leave: Option<usize> = None;
        let mut best: Option<BigRational> = None;
        for i in 0..m {
            if t[i][enter] > BigRational::zero() {
                let ratio = rhs[i].clone() / t[i][enter].clone();
                let better = match &best {
                    None => true,
                    Some(b) => {
                        ratio < *b || (ratio == *b && basis[i] < basis[leave.unwrap()])
                    }
                };
                if better {
                    best = Some(ratio);
                    leave = Some(i);
                }
            }
        }
        let leave = leave.expect("phase-one objective is bounded; a pivot row must exist");

        // Pivot.
        let piv = t[leave][enter].clone();
        for x in t[leave].iter_mut() {
            *x /= piv.clone();
        }
        rhs[leave] /= piv;
        for i in 0..m {
            if i != leave && !t[i][enter].is_zero() {
                let f = t[i][enter].clone();
                for j in 0..cols {
                    let d = f.clone() * t[leave][j].clone();
                    t[i][j] -= d;
                }
                let d = f * rhs[leave].clone();
                rhs[i] -= d;
            }
        }
        basis[leave] = enter;
    }
}

fn lcm_of_denominators<'a>(xs: impl Iterator<Item = &'a BigRational>) -> BigInt {
    xs.fold(BigInt::one(), |acc, x| num_integer::lcm(acc, x.denom().clone()))
}

fn clear_relation(vectors: &[Vec<i64>], u: &[BigRational]) -> Vec<(usize, i64)> {
    let scale = lcm_of_denominators(u.iter().filter(|x| x.is_positive()));
    let mut rel = Vec::new();
    for (j, x) in u.iter().enumerate() {
        if x.is_positive() {
            let c = (x * BigRational::from_integer(scale.clone()))
                .to_integer()
                .to_i64()
                .expect("relation coefficient out of i64 range");
            rel.push((j, c));
        }
    }
    assert!(!rel.is_empty(), "zero combination must be nonempty");
    let dim = vectors[0].len();
    let mut sum = vec![0i64; dim];
    for &(j, c) in &rel {
        for (s, &v) in sum.iter_mut().zip(&vectors[j]) {
            *s += c.checked_mul(v).expect("relation overflow");
        }
    }
    assert!(sum.iter().all(|&s| s == 0), "relation certificate failed to verify");
    rel
}

fn clear_witness(vectors: &[Vec<i64>], phi_rat: &[BigRational]) -> Vec<i64> {
    let scale = lcm_of_denominators(phi_rat.iter());
    let mut phi: Vec<i64> = phi_rat
        .iter()
        .map(|x| {
            (x * BigRational::from_integer(scale.clone()))
                .to_integer()
                .to_i64()
                .expect("witness coefficient out of i64 range")
        })
        .collect();
    make_primitive(&mut phi);
    for v in vectors {
        assert!(dot(&phi, v) > 0, "witness certificate failed to verify");
    }
    phi
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn antipodal_pair_has_relation() {
        match separate(2, &[vec![3, 5], vec![-3, -5]]) {
            Separation::Relation(rel) => assert_eq!(rel.len(), 2),
            other => panic!("expected relation, got {other:?}"),
        }
    }

    #[test]
    fn negative_quadrant_has_witness() {
        match separate(2, &[vec![-1, 0], vec![0, -1]]) {
            Separation::Witness(phi) => {
                assert!(phi[0] < 0 && phi[1] < 0);
            }
            other => panic!("expected witness, got {other:?}"),
        }
    }

    #[test]
    fn triangle_around_origin() {
        match separate(2, &[vec![1, 1], vec![-1, 0], vec![0, -1]]) {
            Separation::Relation(rel) => {
                // (1,1) + (-1,0) + (0,-1) = 0
                assert_eq!(rel.len(), 3);
            }
            other => panic!("expected relation, got {other:?}"),
        }
    }

    #[test]
    fn zero_vector_forces_relation() {
        match separate(2, &[vec![0, 0]]) {
            Separation::Relation(rel) => assert_eq!(rel, vec![(0, 1)]),
            other => panic!("expected relation, got {other:?}"),
        }
    }

    #[test]
    fn empty_input_is_vacuously_separated() {
        assert_eq!(separate(3, &[]), Separation::Witness(vec![0, 0, 0]));
    }

    #[test]
    fn mixed_cone() {
        // Strictly positive form on {e1, e1+e2, e1-e2} exists, e.g. (1,0).
        match separate(2, &[vec![1, 0], vec![1, 1], vec![1, -1]]) {
            Separation::Witness(phi) => assert!(phi[0] > 0),
            other => panic!("expected witness, got {other:?}"),
        }
    }
}
