//! The sequences `(A_n, B_n, C_n)` on the Mordell curve and `(U_n, V_n, W_n)`
//! on the twist, primitive divisors and observed Zsigmondy sets.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::arith::{self, int, primitive_part, Rational};
use crate::curves::{MordellCurve, TwistCurve};
use crate::error::{Error, Result};
use crate::points::{lowest_form, mordell_to_twist, CubicPoint, CurvePoint};

/// `nQ = (A_n / B_n^2, C_n / B_n^3)` in lowest terms.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MordellTerm {
    pub n: u32,
    #[serde(with = "bigint_str")]
    pub a: BigInt,
    #[serde(with = "bigint_str")]
    pub b: BigInt,
    #[serde(with = "bigint_str")]
    pub c: BigInt,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CubicTerm {
    pub n: u32,
    #[serde(with = "bigint_str")]
    pub u: BigInt,
    #[serde(with = "bigint_str")]
    pub v: BigInt,
    #[serde(with = "bigint_str")]
    pub w: BigInt,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ZsigmondyReport {
    pub label: String,
    pub max_index: u32,
    pub failing: Vec<u32>,
    pub bound: u32,
}

/// Serializes big integers as decimal strings.
pub mod bigint_str {
    use num_bigint::BigInt;
    use serde::{de::Error, Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(v: &BigInt, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&v.to_string())
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<BigInt, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(D::Error::custom)
    }
}

fn split_point(p: &CurvePoint) -> Result<(BigInt, BigInt, BigInt)> {
    let (x, y) = match p {
        CurvePoint::Infinity => return Err(Error::Torsion),
        CurvePoint::Affine { x, y } => (x, y),
    };
    let b = arith::exact_sqrt(x.denom())
        .ok_or_else(|| Error::Internal(format!("x-denominator of {p} is not a square")))?;
    let b3 = &b * &b * &b;
    if y.denom() != &b3 {
        return Err(Error::Internal(format!("y-denominator of {p} is not B^3")));
    }
    Ok((x.numer().clone(), b, y.numer().clone()))
}

/// Terms `1..=n_max` of `nQ` by repeated addition.
pub fn mordell_terms(m: &BigInt, q: &CurvePoint, n_max: u32) -> Result<Vec<MordellTerm>> {
    if n_max == 0 {
        return Err(Error::Validation("N must be at least 1".into()));
    }
    let e = MordellCurve::new_allow_small(m)?.model();
    e.check(q)?;
    if e.is_torsion(q) {
        return Err(Error::Torsion);
    }
    let mut out = Vec::with_capacity(n_max as usize);
    let mut cur = q.clone();
    for n in 1..=n_max {
        if n > 1 {
            cur = e.add_unchecked(&cur, q);
        }
        let (a, b, c) = split_point(&cur)?;
        out.push(MordellTerm { n, a, b, c });
    }
    Ok(out)
}

/// `U/W = (36 m B^3 + C)/(6 A B)`, `V/W = (36 m B^3 - C)/(6 A B)`, reduced.
pub fn cubic_from_mordell(m: &BigInt, t: &MordellTerm) -> Result<CubicTerm> {
    if t.a.is_zero() {
        return Err(Error::Internal("A_n = 0".into()));
    }
    let sign = if m.is_negative() { -BigInt::one() } else { BigInt::one() };
    let m = m.abs();
    let b3 = &t.b * &t.b * &t.b;
    let base = int(36) * &m * &b3;
    let den = int(6) * &t.a * &t.b;
    let u = Rational::new(&sign * (&base + &t.c), den.clone());
    let v = Rational::new(&sign * (&base - &t.c), den);
    let CubicPoint { u, v, w } = lowest_form(&u, &v);
    Ok(CubicTerm { n: t.n, u, v, w })
}

pub fn cubic_terms(m: &BigInt, q: &CurvePoint, n_max: u32) -> Result<Vec<CubicTerm>> {
    mordell_terms(m, q, n_max)?
        .iter()
        .map(|t| cubic_from_mordell(m, t))
        .collect()
}

/// `(witness > 1, witness)` with `witness = primitive_part(terms[n], terms[1..n-1])`.
///
/// `n` is 1-based.
pub fn has_primitive_divisor(terms: &[BigInt], n: usize) -> Result<(bool, BigInt)> {
    if n == 0 || n > terms.len() {
        return Err(Error::Validation(format!("index {n} outside 1..={}", terms.len())));
    }
    let w = primitive_part(&terms[n - 1], &terms[..n - 1])?;
    Ok((w > BigInt::one(), w))
}

pub fn zsigmondy_report(label: &str, terms: &[BigInt], n_max: usize) -> Result<ZsigmondyReport> {
    let n_max = n_max.min(terms.len());
    let mut failing = Vec::new();
    for n in 1..=n_max {
        if !has_primitive_divisor(terms, n)?.0 {
            failing.push(n as u32);
        }
    }
    let bound = failing.last().copied().unwrap_or(0);
    Ok(ZsigmondyReport { label: label.to_string(), max_index: n_max as u32, failing, bound })
}

/// Least 1-based `n <= n_max` with `p | terms[n]`.
pub fn rank_of_apparition(terms: &[BigInt], p: &BigInt, n_max: usize) -> Option<usize> {
    terms
        .iter()
        .take(n_max)
        .position(|t| (t % p).is_zero())
        .map(|i| i + 1)
}

/// `W_a | W_b` for all `a | b <= n_max`.
pub fn divisibility_check(terms: &[BigInt], n_max: usize) -> bool {
    let n_max = n_max.min(terms.len());
    (1..=n_max).all(|b| {
        (1..=b)
            .filter(|a| b % a == 0)
            .all(|a| !terms[a - 1].is_zero() && (&terms[b - 1] % &terms[a - 1]).is_zero())
    })
}

/// `{n <= n_max : W_n = 1}` for a non-torsion `R = (u, v)` on the twist.
pub fn integral_multiples_scan(m: &BigInt, u: &Rational, v: &Rational, n_max: u32) -> Result<Vec<u32>> {
    let q = crate::points::twist_to_mordell(m, u, v)?;
    Ok(cubic_terms(m, &q, n_max)?
        .into_iter()
        .filter(|t| t.w.is_one())
        .map(|t| t.n)
        .collect())
}

/// `(1 + t)^3 + (1 - t)^3 = 6 t^2 + 2`.
pub fn family_instance(t: i64) -> Result<(BigInt, (BigInt, BigInt))> {
    if t <= 1 {
        return Err(Error::Validation(format!("t = {t} must exceed 1")));
    }
    let m = int(6) * int(t) * int(t) + 2;
    TwistCurve::new(&m)?;
    Ok((m, (int(1 + t), int(1 - t))))
}

/// Cross-check of the two cubic-term routes for a single term.
pub fn cubic_via_map(m: &BigInt, q: &CurvePoint) -> Result<CubicPoint> {
    let (u, v) = mordell_to_twist(m, q)?;
    Ok(lowest_form(&u, &v))
}

pub fn column<T>(terms: &[T], f: impl Fn(&T) -> &BigInt) -> Vec<BigInt> {
    terms.iter().map(|t| f(t).clone()).collect()
}

/// `gcd` of all entries; used for sanity checks on triples.
pub fn gcd3(a: &BigInt, b: &BigInt, c: &BigInt) -> BigInt {
    a.gcd(b).gcd(c)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::rat;
    use proptest::prelude::*;

    fn q7() -> CurvePoint {
        CurvePoint::from_ints(84, 756)
    }

    #[test]
    fn mordell_terms_m7() {
        let t = mordell_terms(&int(7), &q7(), 3).unwrap();
        assert_eq!((t[0].a.clone(), t[0].b.clone(), t[0].c.clone()), (int(84), int(1), int(756)));
        assert_eq!((t[1].a.clone(), t[1].b.clone(), t[1].c.clone()), (int(28), int(1), int(28)));
        let t6 = mordell_terms(&int(6), &CurvePoint::from_ints(28, 80), 1).unwrap();
        assert_eq!((t6[0].a.clone(), t6[0].c.clone()), (int(28), int(80)));
    }

    #[test]
    fn torsion_input_rejected() {
        let r = mordell_terms(&int(1), &CurvePoint::from_ints(12, 36), 4);
        assert_eq!(r, Err(Error::Torsion));
        assert!(mordell_terms(&int(7), &q7(), 0).is_err());
    }

    #[test]
    fn cubic_terms_m7_m6() {
        let t = cubic_terms(&int(7), &q7(), 2).unwrap();
        assert_eq!((t[0].u.clone(), t[0].v.clone(), t[0].w.clone()), (int(2), int(-1), int(1)));
        assert_eq!((t[1].u.clone(), t[1].v.clone(), t[1].w.clone()), (int(5), int(4), int(3)));
        let t = cubic_terms(&int(6), &CurvePoint::from_ints(28, 80), 1).unwrap();
        assert_eq!((t[0].u.clone(), t[0].v.clone(), t[0].w.clone()), (int(37), int(17), int(21)));
    }

    #[test]
    fn primitive_divisors() {
        let mersenne: Vec<BigInt> = (1..=6).map(|n| int((1 << n) - 1)).collect();
        assert_eq!(has_primitive_divisor(&mersenne, 6).unwrap(), (false, int(1)));
        let w = column(&cubic_terms(&int(7), &q7(), 14).unwrap(), |t| &t.w);
        assert_eq!(has_primitive_divisor(&w, 2).unwrap(), (true, int(3)));
        assert_eq!(has_primitive_divisor(&w, 1).unwrap(), (false, int(1)));
        assert!(has_primitive_divisor(&[int(0)], 1).is_err());
    }

    #[test]
    fn zsigmondy_sets() {
        let w6 = column(&cubic_terms(&int(6), &CurvePoint::from_ints(28, 80), 14).unwrap(), |t| &t.w);
        let r = zsigmondy_report("W", &w6, 14).unwrap();
        assert!(r.failing.is_empty());
        assert_eq!(r.bound, 0);
        let w7 = column(&cubic_terms(&int(7), &q7(), 14).unwrap(), |t| &t.w);
        let r = zsigmondy_report("W", &w7, 14).unwrap();
        assert_eq!(r.failing, vec![1]);
        let a7 = column(&mordell_terms(&int(7), &q7(), 12).unwrap(), |t| &t.a);
        let r = zsigmondy_report("A", &a7, 12).unwrap();
        assert_eq!((r.failing.clone(), r.bound), (vec![2], 2));
    }

    #[test]
    fn apparition_patterns() {
        let terms = mordell_terms(&int(7), &q7(), 18).unwrap();
        let b = column(&terms, |t| &t.b);
        let alpha = rank_of_apparition(&b, &int(3), 18).unwrap();
        for (i, bk) in b.iter().enumerate() {
            let k = i + 1;
            assert_eq!((bk % 3u32).is_zero(), k % alpha == 0, "k = {k}");
        }
        let a = column(&terms, |t| &t.a);
        for (i, ak) in a.iter().enumerate() {
            assert_eq!((ak % 7u32).is_zero(), (i + 1) % 3 != 0);
        }
        assert_eq!(rank_of_apparition(&a, &int(5), 18), None);
    }

    #[test]
    fn divisibility_and_integral_points() {
        let w7 = column(&cubic_terms(&int(7), &q7(), 12).unwrap(), |t| &t.w);
        assert!(divisibility_check(&w7, 12));
        let w6 = column(&cubic_terms(&int(6), &CurvePoint::from_ints(28, 80), 12).unwrap(), |t| &t.w);
        assert!(divisibility_check(&w6, 12));
        assert_eq!(integral_multiples_scan(&int(7), &rat(2, 1), &rat(-1, 1), 14).unwrap(), vec![1]);
        assert!(integral_multiples_scan(&int(6), &rat(37, 21), &rat(17, 21), 14).unwrap().is_empty());
        assert_eq!(integral_multiples_scan(&int(26), &rat(3, 1), &rat(-1, 1), 14).unwrap(), vec![1]);
    }

    #[test]
    fn family() {
        assert_eq!(family_instance(2).unwrap(), (int(26), (int(3), int(-1))));
        assert!(family_instance(3).is_err());
        assert_eq!(family_instance(4).unwrap(), (int(98), (int(5), int(-3))));
        assert!(family_instance(1).is_err());
    }

    #[test]
    fn term_invariants() {
        for (m, q) in [(7, q7()), (6, CurvePoint::from_ints(28, 80)), (26, CurvePoint::from_ints(156, 1872))] {
            let m = int(m);
            let mt = mordell_terms(&m, &q, 12).unwrap();
            let e = MordellCurve::new(&m).unwrap().model();
            for t in &mt {
                let b6 = arith::pow_big(&t.b, 6);
                assert_eq!(&t.c * &t.c, &t.a * &t.a * &t.a - int(432) * &m * &m * b6);
                assert!(t.a.gcd(&t.b).is_one() && t.c.gcd(&t.b).is_one());
                let ct = cubic_from_mordell(&m, t).unwrap();
                let cube = |x: &BigInt| x * x * x;
                assert_eq!(cube(&ct.u) + cube(&ct.v), &m * cube(&ct.w));
                assert!((int(6) * &t.a * &t.b % &ct.w).is_zero());
                assert!(gcd3(&ct.u, &ct.v, &ct.w).is_one() && ct.w.is_positive());
                let nq = e.scalar_mul(t.n as i64, &q).unwrap();
                let via = cubic_via_map(&m, &nq).unwrap();
                assert_eq!((via.u, via.v, via.w), (ct.u, ct.v, ct.w));
            }
            let b = column(&mt, |t| &t.b);
            assert!(divisibility_check(&b, 12));
        }
    }

    #[test]
    fn json_round_trip() {
        let t = cubic_terms(&int(7), &q7(), 5).unwrap();
        let s = serde_json::to_string(&t).unwrap();
        assert!(s.contains("\"w\":\"3\""));
        let back: Vec<CubicTerm> = serde_json::from_str(&s).unwrap();
        assert_eq!(back, t);
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(32))]
        #[test]
        fn scalar_mul_is_additive(a in -10i64..=10, b in -10i64..=10) {
            let e = MordellCurve::new(&int(7)).unwrap().model();
            let p = q7();
            let lhs = e.scalar_mul(a + b, &p).unwrap();
            let rhs = e.add(&e.scalar_mul(a, &p).unwrap(), &e.scalar_mul(b, &p).unwrap()).unwrap();
            prop_assert_eq!(lhs, rhs);
        }

        #[test]
        fn addition_is_associative_and_commutative(a in -6i64..=6, b in -6i64..=6, c in -6i64..=6) {
            let e = MordellCurve::new(&int(6)).unwrap().model();
            let g = CurvePoint::from_ints(28, 80);
            let (pa, pb, pc) = (
                e.scalar_mul(a, &g).unwrap(),
                e.scalar_mul(b, &g).unwrap(),
                e.scalar_mul(c, &g).unwrap(),
            );
            let l = e.add(&e.add(&pa, &pb).unwrap(), &pc).unwrap();
            let r = e.add(&pa, &e.add(&pb, &pc).unwrap()).unwrap();
            prop_assert_eq!(l, r);
            prop_assert_eq!(e.add(&pa, &pb).unwrap(), e.add(&pb, &pa).unwrap());
        }

        #[test]
        fn twist_round_trip(n in 1i64..=8) {
            let m = int(7);
            let e = MordellCurve::new(&m).unwrap().model();
            let q = e.scalar_mul(n, &q7()).unwrap();
            let (u, v) = mordell_to_twist(&m, &q).unwrap();
            prop_assert_eq!(crate::points::twist_to_mordell(&m, &u, &v).unwrap(), q);
        }
    }
}
