//! Property tests for the algebraic invariants that must hold on arbitrary
//! inputs, not just the worked examples.

use proptest::prelude::*;

use dihedral_core::cyclotomic::CycInt;
use dihedral_core::euler::{all_frobenius_classes, coset_degrees, frobenius_class};
use dihedral_core::characters::SubgroupLabel;
use dihedral_core::linalg::{
    big, det_bareiss, det_exact, integer_solve, rat, smith_normal_form, BigRat, IntMatrix,
    RatMatrix,
};
use dihedral_core::regulator::{build_base_case, check_base_identity, UnitLogParams};
use num_traits::{One, Signed, Zero};

fn small_int_matrix(max_dim: usize) -> impl Strategy<Value = IntMatrix> {
    (1..=max_dim, 1..=max_dim).prop_flat_map(|(r, c)| {
        proptest::collection::vec(-9i64..=9, r * c).prop_map(move |entries| {
            IntMatrix::from_fn(r, c, |i, j| big(entries[i * c + j]))
        })
    })
}

fn small_square(max_dim: usize) -> impl Strategy<Value = IntMatrix> {
    (1..=max_dim).prop_flat_map(|n| {
        proptest::collection::vec(-9i64..=9, n * n)
            .prop_map(move |entries| IntMatrix::from_fn(n, n, |i, j| big(entries[i * n + j])))
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn determinant_is_multiplicative(a in small_square(4), b in small_square(4)) {
        prop_assume!(a.rows() == b.rows());
        let da = det_bareiss(&a).unwrap();
        let db = det_bareiss(&b).unwrap();
        let dab = det_bareiss(&a.mul(&b)).unwrap();
        prop_assert_eq!(dab, da * db);
    }

    #[test]
    fn snf_reconstructs_and_divides(m in small_int_matrix(4)) {
        let snf = smith_normal_form(&m);
        let diag = snf.u.mul(&m).mul(&snf.v);
        for i in 0..m.rows() {
            for j in 0..m.cols() {
                if i == j && i < snf.d.len() {
                    prop_assert_eq!(&diag[(i, j)], &snf.d[i]);
                    prop_assert!(!snf.d[i].is_negative());
                } else {
                    prop_assert!(diag[(i, j)].is_zero());
                }
            }
        }
        for w in snf.d.windows(2) {
            if !w[1].is_zero() {
                prop_assert!(!w[0].is_zero());
                prop_assert!((&w[1] % &w[0]).is_zero());
            }
        }
        prop_assert_eq!(det_bareiss(&snf.u).unwrap().abs(), big(1));
        prop_assert_eq!(det_bareiss(&snf.v).unwrap().abs(), big(1));
    }

    #[test]
    fn integer_solve_solutions_check_out(
        m in small_int_matrix(3),
        x in proptest::collection::vec(-5i64..=5, 3),
    ) {
        // build a solvable system and confirm the solver's answer satisfies it
        let x: Vec<_> = x.into_iter().take(m.cols()).map(big).collect();
        prop_assume!(x.len() == m.cols());
        let rhs = m.mul_vec(&x);
        let sol = integer_solve(&m, &rhs).expect("constructed to be solvable");
        prop_assert_eq!(m.mul_vec(&sol), rhs);
    }

    #[test]
    fn cyclotomic_conjugation_is_a_ring_map(
        q in prop_oneof![Just(3u64), Just(9), Just(15), Just(25)],
        a in -4i64..=4,
        b in -4i64..=4,
        ka in 0i64..30,
        kb in 0i64..30,
    ) {
        let x = CycInt::root_power(q, ka).scale(&big(a));
        let y = CycInt::root_power(q, kb).scale(&big(b));
        prop_assert_eq!(x.add(&y).conj(), x.conj().add(&y.conj()));
        prop_assert_eq!(x.mul(&y).conj(), x.conj().mul(&y.conj()));
        prop_assert_eq!(x.conj().conj(), x);
    }

    #[test]
    fn frobenius_class_roundtrip(q in prop_oneof![Just(3u64), Just(5), Just(9), Just(15)]) {
        for c in all_frobenius_classes(q).unwrap() {
            let dk = coset_degrees(c, SubgroupLabel::Reflection, q);
            let dl = coset_degrees(c, SubgroupLabel::Rotation, q);
            prop_assert_eq!(frobenius_class(&dk, &dl, q).unwrap(), c);
            // orbit sizes always sum to the coset count
            prop_assert_eq!(dk.total(), q);
            prop_assert_eq!(dl.total(), 2);
            prop_assert_eq!(coset_degrees(c, SubgroupLabel::Trivial, q).total(), 2 * q);
        }
    }

    #[test]
    fn regulator_identity_and_scale_covariance(
        r in 1usize..=4,
        entries in proptest::collection::vec(-9i64..=9, 40),
        num in 1i64..=5,
        den in 1i64..=5,
    ) {
        // deterministic params from the raw entries
        let mut idx = 0;
        let mut next = || {
            let v = entries[idx % entries.len()];
            idx += 1;
            rat(v)
        };
        let gamma: Vec<BigRat> = (0..r).map(|_| next()).collect();
        let tau: Vec<Vec<BigRat>> = (0..r.saturating_sub(1))
            .map(|_| (0..r).map(|_| next()).collect())
            .collect();
        let params = UnitLogParams::new_base_case(r, gamma, tau).unwrap();
        let q = (2 * r + 1) as u64;
        let blocks = build_base_case(r, &params).unwrap();
        prop_assert!(check_base_identity(&blocks, q));

        // |det M| scales by c^(2r) under a global parameter scaling
        let c = BigRat::new(big(num), big(den));
        let scaled = build_base_case(r, &params.scaled(&c)).unwrap();
        prop_assert!(check_base_identity(&scaled, q));
        let d0 = det_exact(blocks.matrix()).unwrap().abs();
        let d1 = det_exact(scaled.matrix()).unwrap().abs();
        let mut c_pow = BigRat::one();
        for _ in 0..2 * r {
            c_pow *= c.abs();
        }
        prop_assert_eq!(d1, c_pow * d0);
    }

    #[test]
    fn rational_determinant_matches_integer_route(m in small_square(4)) {
        let as_rat = RatMatrix::from_fn(m.rows(), m.cols(), |i, j| {
            BigRat::from_integer(m[(i, j)].clone())
        });
        prop_assert_eq!(
            det_exact(&as_rat).unwrap(),
            BigRat::from_integer(det_bareiss(&m).unwrap())
        );
    }
}
