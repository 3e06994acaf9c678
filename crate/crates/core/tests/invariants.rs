//! Property tests of the lattice axioms and functoriality contracts.

use proptest::prelude::*;

use klcells::lattice::{in_closure_of_u, u_empty, PositivePart, Sign, UEmptiness};
use klcells::linalg;

fn forms(dim: usize, max_forms: usize) -> impl Strategy<Value = Vec<Vec<i64>>> {
    prop::collection::vec(prop::collection::vec(-4i64..=4, dim..=dim), 0..=max_forms)
}

fn point(dim: usize) -> impl Strategy<Value = Vec<i64>> {
    prop::collection::vec(-6i64..=6, dim..=dim)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn positivity_axioms(fs in forms(3, 3), lam in point(3), mu in point(3)) {
        let x = PositivePart::new(3, &fs).unwrap();
        let s_lam = x.sign_of(&lam).unwrap();
        let s_mu = x.sign_of(&mu).unwrap();
        // P1: lam or -lam lies in X.
        let neg: Vec<i64> = lam.iter().map(|v| -v).collect();
        prop_assert!(s_lam >= Sign::Zero || x.sign_of(&neg).unwrap() >= Sign::Zero);
        // P2/P3: nonnegative signs add; zero signs form a subgroup.
        let sum: Vec<i64> = lam.iter().zip(&mu).map(|(a, b)| a + b).collect();
        let s_sum = x.sign_of(&sum).unwrap();
        if s_lam >= Sign::Zero && s_mu >= Sign::Zero {
            prop_assert!(s_sum >= Sign::Zero);
        }
        if s_lam == Sign::Zero && s_mu == Sign::Zero {
            prop_assert_eq!(s_sum, Sign::Zero);
        }
    }

    #[test]
    fn divisibility(fs in forms(2, 2), lam in point(2), r in 1i64..=5) {
        let x = PositivePart::new(2, &fs).unwrap();
        let scaled: Vec<i64> = lam.iter().map(|v| v * r).collect();
        prop_assert_eq!(x.sign_of(&scaled).unwrap(), x.sign_of(&lam).unwrap());
    }

    #[test]
    fn pullback_composes(
        fs in forms(2, 2),
        sigma in prop::collection::vec(prop::collection::vec(-3i64..=3, 2..=2), 2..=2),
        tau in prop::collection::vec(prop::collection::vec(-3i64..=3, 2..=2), 2..=2),
        lam in point(2),
    ) {
        let x = PositivePart::new(2, &fs).unwrap();
        // (tau . sigma)^* = sigma^* . tau^*: pull back along tau first.
        let lhs = x.pullback(&tau).unwrap().pullback(&sigma).unwrap();
        let composed = linalg::mat_mul(&tau, &sigma);
        let rhs = x.pullback(&composed).unwrap();
        prop_assert_eq!(&lhs, &rhs);
        // Sign contract of the pullback.
        let image = linalg::mat_apply(&composed, &lam);
        prop_assert_eq!(lhs.sign_of(&lam).unwrap(), x.sign_of(&image).unwrap());
    }

    #[test]
    fn leading_form_functoriality(
        fs in forms(2, 2),
        sigma in prop::collection::vec(prop::collection::vec(-3i64..=3, 2..=2), 2..=2),
    ) {
        // The leading form of the pullback is the primitive representative
        // of leading_form(X) . sigma, or disappears exactly when every
        // pulled-back form vanishes ahead of it.
        let x = PositivePart::new(2, &fs).unwrap();
        let back = x.pullback(&sigma).unwrap();
        match (x.leading_form(), back.leading_form()) {
            (None, got) => prop_assert_eq!(got, None),
            (Some(phi), got) => {
                let mut composed: Vec<i64> =
                    (0..2).map(|j| (0..2).fold(0, |s, i| s + phi[i] * sigma[i][j])).collect();
                if composed.iter().all(|&v| v == 0) {
                    // First form dies on the image; the next flag forms decide.
                    if let Some(g) = got {
                        prop_assert!(x.flag().len() > 1);
                        let mut next: Vec<i64> = (0..2)
                            .map(|j| (0..2).fold(0, |s, i| s + x.flag()[1][i] * sigma[i][j]))
                            .collect();
                        linalg::make_primitive(&mut next);
                        prop_assert_eq!(g.to_vec(), next);
                    }
                } else {
                    linalg::make_primitive(&mut composed);
                    prop_assert_eq!(got.unwrap().to_vec(), composed);
                }
            }
        }
    }

    #[test]
    fn fiber_restrict_inverse(fs in forms(2, 2), phi in prop::collection::vec(-4i64..=4, 3..=3)) {
        prop_assume!(phi.iter().any(|&v| v != 0));
        let ker_part = PositivePart::new(2, &fs).unwrap();
        let x = PositivePart::fiber_insert(&phi, &ker_part).unwrap();
        prop_assert_eq!(x.restrict_to_kernel().unwrap(), ker_part);
        prop_assert_eq!(x.sign_of(&phi).unwrap(), Sign::Positive);
    }

    #[test]
    fn u_empty_certificates_are_sound(e in prop::collection::vec(point(3), 1..=5)) {
        match u_empty(3, &e).unwrap() {
            UEmptiness::Empty { relation } => {
                let mut sum = vec![0i64; 3];
                prop_assert!(!relation.is_empty());
                for (v, c) in &relation {
                    prop_assert!(*c > 0);
                    prop_assert!(e.contains(v));
                    for (s, x) in sum.iter_mut().zip(v) {
                        *s += c * x;
                    }
                }
                prop_assert_eq!(sum, vec![0, 0, 0]);
            }
            UEmptiness::Nonempty { witness } => {
                for v in &e {
                    prop_assert!(linalg::dot(&witness, v) > 0);
                }
            }
        }
    }

    #[test]
    fn closure_formula_matches_sign_rule(fs in forms(2, 2), e in prop::collection::vec(point(2), 1..=3)) {
        let x = PositivePart::new(2, &fs).unwrap();
        match in_closure_of_u(&x, &e) {
            Err(_) => {
                // Only refused when U(E) is empty.
                let empty = matches!(u_empty(2, &e).unwrap(), UEmptiness::Empty { .. });
                prop_assert!(empty);
            }
            Ok(inside) => {
                let expect = e.iter().all(|v| x.sign_of(v).unwrap() <= Sign::Zero);
                prop_assert_eq!(inside, expect);
            }
        }
    }

    #[test]
    fn quotient_restrict_round_trip(e in prop::collection::vec(point(3), 0..=2), fs in forms(3, 2)) {
        // Build X vanishing on E by pulling a random part back along the
        // quotient map, then check the round trip.
        let split = linalg::saturation_split(3, &e);
        let qdim = 3 - split.rank;
        let y = PositivePart::new(qdim, &fs.iter().map(|f| f[..qdim].to_vec()).collect::<Vec<_>>()).unwrap();
        let x = y.pullback(&split.quot_rows).unwrap();
        for v in &e {
            prop_assert_eq!(x.sign_of(v).unwrap(), Sign::Zero);
        }
        prop_assert_eq!(x.quotient_restrict(&e).unwrap(), y);
    }
}
