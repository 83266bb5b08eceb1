use std::f64::consts::PI;

use matbeta::algebra::{hermitian_coords, hermitian_eigenvalues};
use matbeta::lattice::{berezin_kernel, Flag, RationalLattice};
use matbeta::special::{euler_beta, gamma, selberg_closed_form, SelbergParams, SelbergVariant};
use matbeta::symmetric::gindikin_gamma_rhs;
use matbeta::{Complex64, Field};
use num_bigint::BigInt;
use num_rational::BigRational;
use proptest::prelude::*;

fn close(a: f64, b: f64, rel: f64) -> bool {
    (a - b).abs() <= rel * a.abs().max(b.abs()).max(1e-300)
}

fn c(x: f64) -> Complex64 {
    Complex64::new(x, 0.0)
}

fn int_vectors(n: usize) -> impl Strategy<Value = Vec<Vec<i64>>> {
    prop::collection::vec(prop::collection::vec(-6i64..=6, n), n..=n + 2)
}

fn lattice(n: usize, den: i64, gens: &[Vec<i64>]) -> Option<RationalLattice> {
    let gens: Vec<Vec<BigRational>> = gens
        .iter()
        .map(|g| g.iter().map(|&x| BigRational::new(BigInt::from(x), BigInt::from(den))).collect())
        .collect();
    RationalLattice::from_generators(n, &gens).ok()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn gamma_recurrence(x in 0.05f64..30.0) {
        prop_assert!(close(gamma(x + 1.0).unwrap(), x * gamma(x).unwrap(), 1e-12));
    }

    #[test]
    fn gamma_reflection(x in 0.02f64..0.98) {
        let lhs = gamma(x).unwrap() * gamma(1.0 - x).unwrap();
        prop_assert!(close(lhs, PI / (PI * x).sin(), 1e-12));
    }

    #[test]
    fn euler_beta_symmetric(a in 0.1f64..8.0, b in 0.1f64..8.0) {
        let x = euler_beta(c(a), c(b)).unwrap();
        let y = euler_beta(c(b), c(a)).unwrap();
        prop_assert!(close(x.re, y.re, 1e-13));
    }

    #[test]
    fn selberg_one_point_is_euler(a in 0.1f64..6.0, b in 0.1f64..6.0, g in 0.0f64..3.0) {
        let s = selberg_closed_form(SelbergVariant::UnitBox, &SelbergParams::real(1, a, b, g)).unwrap();
        prop_assert!(close(s.re, euler_beta(c(a), c(b)).unwrap().re, 1e-12));
    }

    #[test]
    fn cone_gamma_rank_one(s in 0.1f64..20.0) {
        for field in [Field::R, Field::C, Field::H] {
            prop_assert!(close(gindikin_gamma_rhs(field, &[s]).unwrap(), gamma(s).unwrap(), 1e-12));
        }
    }

    #[test]
    fn hermitian_coords_round_trip(field in prop::sample::select(vec![Field::R, Field::C, Field::H]),
                                   n in 1usize..4, seed in prop::collection::vec(-5.0f64..5.0, 28)) {
        let dim = hermitian_coords::dim(field, n);
        let x = &seed[..dim];
        let m = hermitian_coords::to_matrix(field, n, x);
        prop_assert!(m.is_hermitian(1e-14));
        prop_assert_eq!(hermitian_coords::from_matrix(&m), x.to_vec());
        let trace: f64 = x[..n].iter().sum();
        let eig: f64 = hermitian_eigenvalues(&m).unwrap().iter().sum();
        prop_assert!((trace - eig).abs() < 1e-10);
    }

    #[test]
    fn hnf_is_basis_independent(gens in int_vectors(2), den in 1i64..5, t in -3i64..=3) {
        let Some(a) = lattice(2, den, &gens) else { return Ok(()) };
        // add t times the first generator to the second: same lattice
        let mut moved = gens.clone();
        moved[1] = gens[1].iter().zip(&gens[0]).map(|(x, y)| x + t * y).collect();
        moved.swap(0, 1);
        let b = lattice(2, den, &moved).unwrap();
        prop_assert_eq!(&a, &b);
        prop_assert_eq!(a.dual().dual(), a);
    }

    #[test]
    fn intersection_lies_in_both(g1 in int_vectors(2), g2 in int_vectors(2), d1 in 1i64..4, d2 in 1i64..4) {
        let (Some(r), Some(s)) = (lattice(2, d1, &g1), lattice(2, d2, &g2)) else { return Ok(()) };
        let i = r.intersect(&s).unwrap();
        prop_assert_eq!(&i, &s.intersect(&r).unwrap());
        for v in i.basis() {
            prop_assert!(r.contains(&v) && s.contains(&v));
        }
        prop_assert!(i.covolume() >= r.covolume().max(s.covolume()));
    }

    #[test]
    fn flag_covolumes_agree(gens in int_vectors(3), den in 1i64..7) {
        let Some(s) = lattice(3, den, &gens) else { return Ok(()) };
        for (k, (lq, lz)) in s.flag_ln_covolumes().into_iter().enumerate() {
            let q = s.intersect_flag(k + 1, Flag::Rational).unwrap().ln_covolume();
            let z = s.intersect_flag(k + 1, Flag::Integral).unwrap().ln_covolume();
            prop_assert!((lq - q).abs() < 1e-12 && (lz - z).abs() < 1e-12);
        }
    }

    #[test]
    fn berezin_kernel_symmetric(g1 in int_vectors(2), g2 in int_vectors(2), alpha in 0.0f64..3.0) {
        let (Some(r), Some(s)) = (lattice(2, 1, &g1), lattice(2, 2, &g2)) else { return Ok(()) };
        let a = berezin_kernel(&r, &s, alpha).unwrap();
        let b = berezin_kernel(&s, &r, alpha).unwrap();
        prop_assert!(close(a, b, 1e-12));
        prop_assert!(close(berezin_kernel(&r, &r, alpha).unwrap(), 1.0, 1e-12));
    }
}
