use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use proptest::prelude::*;

use eds_core::arith::{self, int, Rational};
use eds_core::curves::MordellCurve;
use eds_core::divpoly::FormTable;
use eds_core::heights::{self, GUARD};
use eds_core::local::{self, PadicPoint};
use eds_core::points::{mordell_to_twist, twist_to_mordell};
use eds_core::sequences::{self, column};
use eds_core::tables::{self, GeneratorRecord};
use eds_core::thue::{self, Classification, SolutionRecord};

fn generators() -> Vec<GeneratorRecord> {
    tables::parse_generators(tables::RANK_ONE_CSV).unwrap()
}

fn generator(i: usize) -> GeneratorRecord {
    let g = generators();
    g[i % g.len()].clone()
}

fn search_form(n: u32) -> eds_core::divpoly::BinaryForm {
    thue::ThueProblem::for_case(&FormTable::new(), n, 10).unwrap().form
}

fn coprime_pair() -> impl Strategy<Value = (i64, i64)> {
    (-400i64..=400, -400i64..=400).prop_filter("coprime", |(s, t)| s.gcd(t) == 1)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn mordell_terms_are_reduced_and_on_the_curve(i in 0usize..64, n in 1u32..=10) {
        let g = generator(i);
        let d = int(-432) * &g.m * &g.m;
        let terms = sequences::mordell_terms(&g.m, &g.point, n).unwrap();
        for t in &terms {
            prop_assert_eq!(&t.c * &t.c, &t.a * &t.a * &t.a + &d * arith::pow_big(&t.b, 6));
            prop_assert!(t.a.gcd(&t.b).is_one());
            prop_assert!(t.b.is_positive());
        }
    }

    #[test]
    fn denominators_form_a_divisibility_sequence(i in 0usize..64, n in 2u32..=12) {
        let g = generator(i);
        let terms = sequences::mordell_terms(&g.m, &g.point, n).unwrap();
        let b = column(&terms, |t| &t.b);
        for d in (1..n).filter(|d| n % d == 0) {
            prop_assert!((&b[n as usize - 1] % &b[d as usize - 1]).is_zero());
        }
    }

    #[test]
    fn cubic_terms_satisfy_the_twist(i in 0usize..64, n in 1u32..=8) {
        let g = generator(i);
        for t in sequences::cubic_terms(&g.m, &g.point, n).unwrap() {
            let cube = |a: &BigInt| a * a * a;
            prop_assert_eq!(cube(&t.u) + cube(&t.v), &g.m * cube(&t.w));
            prop_assert!(sequences::gcd3(&t.u, &t.v, &t.w).is_one());
        }
    }

    #[test]
    fn twist_map_round_trips(i in 0usize..64, k in -6i64..=6) {
        prop_assume!(k != 0);
        let g = generator(i);
        let e = MordellCurve::new_allow_small(&g.m).unwrap().model();
        let q = e.scalar_mul(k, &g.point).unwrap();
        let (u, v) = mordell_to_twist(&g.m, &q).unwrap();
        let m = arith::rat_int(&g.m);
        prop_assert_eq!(&u * &u * &u + &v * &v * &v, m);
        prop_assert_eq!(twist_to_mordell(&g.m, &u, &v).unwrap(), q);
    }

    #[test]
    fn canonical_height_scales_quadratically(i in 0usize..64, k in 2i64..=4) {
        let g = generator(i);
        let e = MordellCurve::new_allow_small(&g.m).unwrap().model();
        let h1 = heights::canonical_height(&g.m, &g.point, 4).unwrap();
        let hk = heights::canonical_height(&g.m, &e.scalar_mul(k, &g.point).unwrap(), 4).unwrap();
        let k2 = (k * k) as f64;
        prop_assert!((hk.value - k2 * h1.value).abs() <= hk.error_bound + k2 * h1.error_bound + GUARD);
        prop_assert!(h1.value > 0.0);
    }

    #[test]
    fn reduction_kernel_matches_the_order(i in 0usize..64, pi in 2usize..40, k in 1u64..=40) {
        let g = generator(i);
        let p = arith::primes_up_to(200)[pi];
        prop_assume!(!MordellCurve::new(&g.m).unwrap().is_bad_prime(p));
        let e = local::order_mod_p(&g.m, &g.point, p).unwrap();
        let kq = PadicPoint::new(&g.m, &g.point, p, 24).unwrap().mul(k);
        let in_kernel = kq.ord_x().is_some_and(|o| o < 0) || kq.is_infinity();
        prop_assert_eq!(in_kernel, k % e == 0);
    }

    #[test]
    fn valuation_profile_covers_coprime_values(ci in 0usize..12, (s, t) in coprime_pair()) {
        let n = thue::SEARCH_CASES[ci];
        let form = search_form(n);
        let v = form.eval(&int(s), &int(t));
        prop_assume!(!v.is_zero());
        for p in [2u64, 3] {
            let profile = thue::valuation_profile(&form, p).unwrap();
            let o = arith::ord_p_u64(&v, p).unwrap();
            prop_assert!(profile.contains(&o), "n = {}, p = {}, ord = {}, profile {:?}", n, p, o, profile);
        }
    }

    #[test]
    fn forms_are_homogeneous(ci in 0usize..12, (s, t) in coprime_pair(), l in -5i64..=5) {
        let form = search_form(thue::SEARCH_CASES[ci]);
        let d = form.degree() as u32;
        let lhs = form.eval(&int(l * s), &int(l * t));
        prop_assert_eq!(lhs, arith::pow_big(&int(l), d) * form.eval(&int(s), &int(t)));
    }

    #[test]
    fn rhs_sets_are_symmetric(ci in 0usize..12, idx in 0usize..64) {
        let n = thue::SEARCH_CASES[ci];
        let rhs = thue::rhs_candidates(n, &search_form(n)).unwrap();
        let v = &rhs.values[idx % rhs.values.len()];
        prop_assert!(rhs.contains(v) && rhs.contains(&-v));
        prop_assert!(!rhs.contains(&BigInt::zero()));
    }

    #[test]
    fn classification_rules(s in -1000i64..=1000, t in -1000i64..=1000) {
        let c = thue::classify(&int(s), &int(t));
        if t == 0 {
            prop_assert_eq!(c, Classification::ExpectedT0);
        } else if t > 0 || 4 * s + t <= 0 {
            prop_assert_eq!(c, Classification::ExpectedSign);
        }
        if c == Classification::Unexpected {
            prop_assert!(s.gcd(&t) == 1 && s != 0 && t < 0);
        }
        let form = search_form(5);
        let r = SolutionRecord::new(&form, s, t);
        prop_assert_eq!(r.classification, c);
        prop_assert_eq!(r.value, form.eval(&int(s), &int(t)));
    }

    #[test]
    fn genuine_points_give_expected_pairs(i in 0usize..64, k in 1i64..=5) {
        // The pair attached to a point on a curve with |m| >= 3 has t < 0 < 4s + t.
        let g = generator(i);
        let e = MordellCurve::new_allow_small(&g.m).unwrap().model();
        let q = e.scalar_mul(k, &g.point).unwrap();
        let (s, t) = eds_core::divpoly::st_pair(&g.m, &q).unwrap();
        prop_assert!(t.is_negative());
        prop_assert!((int(4) * &s + &t).is_positive());
        let x: &Rational = q.x().unwrap();
        prop_assert!(x.is_positive());
    }
}
