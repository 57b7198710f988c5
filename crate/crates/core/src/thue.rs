//! Bounded searches over the Thue equations `F(s, t) = ±2^α 3^β ε^γ`, the
//! classification of their solutions, and the `{2, 3}`-unit equations behind
//! the `n = 2` case.

use std::collections::BTreeSet;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::arith::{self, int, Rational};
use crate::divpoly::{epsilon, BinaryForm, FormTable, MAX_INDEX};
use crate::error::{Error, Result};
use crate::points::{mordell_to_twist, CurvePoint};
use crate::sequences::{self, bigint_str};

pub const MAX_BOUND: i64 = 1_000_000;
pub const DEFAULT_BOUND: i64 = 10_000;
pub const MIN_EXP_BOUND: u32 = 12;

/// Indices whose equations are searched: `phi_3`, `F4*`, `F_n` and `F~_n`.
pub const SEARCH_CASES: [u32; 12] = [3, 4, 5, 6, 7, 8, 9, 10, 11, 12, 13, 14];

/// `2^61 - 1`.
const MODULUS: u64 = (1 << 61) - 1;
/// Give up on a valuation profile past this `p`-adic depth.
const PROFILE_DEPTH: u32 = 64;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Classification {
    ExpectedT0,
    ExpectedSign,
    ExpectedOddValuation,
    ExpectedS0,
    ExpectedUnitPoint,
    ExpectedGcd,
    Unexpected,
}

impl Classification {
    pub fn is_expected(self) -> bool {
        self != Classification::Unexpected
    }

    pub fn label(self) -> &'static str {
        match self {
            Classification::ExpectedT0 => "expected-t0",
            Classification::ExpectedSign => "expected-sign",
            Classification::ExpectedOddValuation => "expected-odd-valuation",
            Classification::ExpectedS0 => "expected-s0",
            Classification::ExpectedUnitPoint => "expected-unit-point",
            Classification::ExpectedGcd => "expected-gcd",
            Classification::Unexpected => "unexpected",
        }
    }
}

/// True iff `ord_p(t)` is odd for some prime `p >= 5`.
fn odd_valuation_above_3(t: &BigInt) -> bool {
    let mut r = t.abs();
    for p in [2u32, 3] {
        while (&r % p).is_zero() {
            r /= p;
        }
    }
    !arith::is_square(&r)
}

/// Classifies a solution, testing the rules in a fixed order.
pub fn classify(s: &BigInt, t: &BigInt) -> Classification {
    if t.is_zero() {
        Classification::ExpectedT0
    } else if t.is_positive() || (4 * s + t) <= BigInt::zero() {
        Classification::ExpectedSign
    } else if odd_valuation_above_3(t) {
        Classification::ExpectedOddValuation
    } else if s.is_zero() {
        Classification::ExpectedS0
    } else if s.is_one() && *t == int(-1) {
        Classification::ExpectedUnitPoint
    } else if !s.gcd(t).is_one() {
        Classification::ExpectedGcd
    } else {
        Classification::Unexpected
    }
}

/// The admissible right-hand sides `±2^α 3^β ε^γ`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RhsSet {
    pub alpha: Vec<u32>,
    pub beta: Vec<u32>,
    pub epsilon: u32,
    pub gamma: Vec<u32>,
    /// Every value, both signs, ascending.
    #[serde(with = "bigint_vec")]
    pub values: Vec<BigInt>,
}

impl RhsSet {
    pub fn new(alpha: Vec<u32>, beta: Vec<u32>, epsilon: u32, gamma: Vec<u32>) -> Self {
        let mut values = BTreeSet::new();
        for &a in &alpha {
            for &b in &beta {
                for &g in &gamma {
                    let v = arith::pow_big(&int(2), a)
                        * arith::pow_big(&int(3), b)
                        * arith::pow_big(&int(epsilon as i64), g);
                    values.insert(-&v);
                    values.insert(v);
                }
            }
        }
        RhsSet { alpha, beta, epsilon, gamma, values: values.into_iter().collect() }
    }

    pub fn contains(&self, v: &BigInt) -> bool {
        self.values.binary_search(v).is_ok()
    }
}

mod bigint_vec {
    use num_bigint::BigInt;
    use serde::{de::Error, Deserialize, Deserializer, Serialize, Serializer};

    pub fn serialize<S: Serializer>(v: &[BigInt], s: S) -> Result<S::Ok, S::Error> {
        v.iter().map(|x| x.to_string()).collect::<Vec<_>>().serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<BigInt>, D::Error> {
        Vec::<String>::deserialize(d)?.iter().map(|s| s.parse().map_err(D::Error::custom)).collect()
    }
}

fn horner(coeffs: &[BigInt], x: &BigInt) -> BigInt {
    coeffs.iter().rev().fold(BigInt::zero(), |acc, c| acc * x + c)
}

/// `f(r + p z)` as a polynomial in `z`.
fn shift_scale(f: &[BigInt], r: &BigInt, p: &BigInt) -> Vec<BigInt> {
    let mut g = f.to_vec();
    // Taylor shift by repeated synthetic division.
    for i in 0..g.len() {
        for j in (i..g.len() - 1).rev() {
            let carry = &g[j + 1] * r;
            g[j] += carry;
        }
    }
    let mut pk = BigInt::one();
    for c in g.iter_mut() {
        *c *= &pk;
        pk *= p;
    }
    g
}

/// Divides out the largest power of `p` and returns its exponent.
fn strip_content(f: &mut [BigInt], p: &BigInt) -> u32 {
    let mut e = 0;
    while f.iter().all(|c| (c % p).is_zero()) && f.iter().any(|c| !c.is_zero()) {
        for c in f.iter_mut() {
            *c /= p;
        }
        e += 1;
    }
    e
}

/// Collects `c + ord_p(h(z))` over `z` in `Z_p`; `h` has unit content.
fn profile_rec(h: &[BigInt], c: u32, depth: u32, p: u64, out: &mut BTreeSet<u32>) -> Result<()> {
    let pb = BigInt::from(p);
    for z0 in 0..p {
        let z0 = BigInt::from(z0);
        if !(horner(h, &z0) % &pb).is_zero() {
            out.insert(c);
            continue;
        }
        if depth >= PROFILE_DEPTH {
            return Err(Error::Structure(format!("ord_{p} is unbounded (a {p}-adic root)")));
        }
        let mut g = shift_scale(h, &z0, &pb);
        let e = strip_content(&mut g, &pb);
        profile_rec(&g, c + e, depth + 1, p, out)?;
    }
    Ok(())
}

/// Every value of `ord_p(F(s, t))` over coprime integers `s`, `t`.
pub fn valuation_profile(form: &BinaryForm, p: u64) -> Result<Vec<u32>> {
    let mut out = BTreeSet::new();
    let pb = BigInt::from(p);
    // p does not divide t: F(s, t) = t^d F(x, 1) with x = s/t in Z_p.
    let mut f = form.ascending().to_vec();
    let e = strip_content(&mut f, &pb);
    profile_rec(&f, e, 0, p, &mut out)?;
    // p divides t, so not s: F(s, t) = s^d F(1, p z).
    let rev: Vec<BigInt> = form.ascending().iter().rev().cloned().collect();
    let mut g = shift_scale(&rev, &BigInt::zero(), &pb);
    let e = strip_content(&mut g, &pb);
    profile_rec(&g, e, 0, p, &mut out)?;
    Ok(out.into_iter().collect())
}

fn is_prime_power(n: u32) -> bool {
    arith::factor_u64(n as u64).len() == 1
}

/// The exponent sets quoted for the form searched at index `n`.
fn quoted_beta(n: u32, degree: u32) -> Vec<u32> {
    match n {
        3 => vec![0, 3, 4],
        4 => vec![0],
        6 => vec![0, 3, 5],
        9 => vec![0, 9, 13],
        12 => vec![0, 12, 18],
        _ if degree % 2 == 0 => vec![0, degree, 3 * degree / 2],
        _ => vec![0, degree],
    }
}

fn union(a: &[u32], b: &[u32]) -> Vec<u32> {
    a.iter().chain(b).copied().collect::<BTreeSet<_>>().into_iter().collect()
}

/// Right-hand sides for the equation at index `n`.
///
/// The quoted exponent sets are widened by the valuation profile of the
/// form itself, so no coprime solution can be missed through `α` or `β`.
pub fn rhs_candidates(n: u32, form: &BinaryForm) -> Result<RhsSet> {
    if n < 3 || n > MAX_INDEX {
        return Err(Error::Validation(format!("n = {n} is outside 3..={MAX_INDEX}")));
    }
    let alpha = union(&[0], &valuation_profile(form, 2)?);
    let beta = union(&quoted_beta(n, form.degree() as u32), &valuation_profile(form, 3)?);
    let gamma = if is_prime_power(n) { vec![0, 1] } else { vec![0] };
    Ok(RhsSet::new(alpha, beta, epsilon(n), gamma))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ThueProblem {
    pub n: u32,
    pub label: String,
    pub form: BinaryForm,
    pub rhs: RhsSet,
    /// Search box `max(|s|, |t|) <= bound`.
    pub bound: i64,
}

impl ThueProblem {
    pub fn new(n: u32, label: &str, form: BinaryForm, rhs: RhsSet, bound: i64) -> Result<Self> {
        if !(1..=MAX_BOUND).contains(&bound) {
            return Err(Error::Validation(format!("bound {bound} is outside 1..={MAX_BOUND}")));
        }
        if rhs.values.iter().any(Zero::is_zero) {
            return Err(Error::Validation("zero right-hand side".into()));
        }
        Ok(ThueProblem { n, label: label.to_string(), form, rhs, bound })
    }

    /// `phi_3` for `n = 3`, `F4*` for `n = 4`, `F~_n` when `3 | n`, else `F_n`.
    pub fn for_case(table: &FormTable, n: u32, bound: i64) -> Result<Self> {
        let (label, form) = match n {
            3 => ("phi3".to_string(), table.phi_form(3)?),
            4 => ("F4*".to_string(), table.f4_star()?),
            _ if n % 3 == 0 => (format!("Ft{n}"), table.f_tilde(n)?),
            _ => (format!("F{n}"), table.f_form(n)?),
        };
        let rhs = rhs_candidates(n, &form)?;
        Self::new(n, &label, form, rhs, bound)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SolutionRecord {
    pub s: i64,
    pub t: i64,
    #[serde(with = "bigint_str")]
    pub value: BigInt,
    pub classification: Classification,
}

impl SolutionRecord {
    pub fn new(form: &BinaryForm, s: i64, t: i64) -> Self {
        let (sb, tb) = (int(s), int(t));
        SolutionRecord { s, t, value: form.eval(&sb, &tb), classification: classify(&sb, &tb) }
    }
}

fn add_mod(a: u64, b: u64) -> u64 {
    let s = a + b;
    if s >= MODULUS {
        s - MODULUS
    } else {
        s
    }
}

fn mul_mod(a: u64, b: u64) -> u64 {
    ((a as u128 * b as u128) % MODULUS as u128) as u64
}

fn residue(v: i64) -> u64 {
    v.rem_euclid(MODULUS as i64) as u64
}

struct Filter {
    bloom: Vec<u64>,
    residues: Vec<u64>,
}

impl Filter {
    fn new(rhs: &RhsSet) -> Self {
        let residues: Vec<u64> = rhs.values.iter().map(|v| arith::mod_u64(v, MODULUS)).collect();
        let mut bloom = vec![0u64; 1 << 10];
        for r in &residues {
            let b = (r & 0xffff) as usize;
            bloom[b >> 6] |= 1 << (b & 63);
        }
        Filter { bloom, residues }
    }

    #[inline]
    fn may_contain(&self, r: u64) -> bool {
        let b = (r & 0xffff) as usize;
        self.bloom[b >> 6] >> (b & 63) & 1 == 1 && self.residues.contains(&r)
    }
}

/// Hits with `t` fixed and `s` in `[-bound, bound]`, by forward differences
/// modulo `2^61 - 1`, then verified exactly.
fn search_row(problem: &ThueProblem, coeffs: &[u64], filter: &Filter, t: i64) -> Vec<SolutionRecord> {
    let d = coeffs.len() - 1;
    let tr = residue(t);
    // g(s) = F(s, t) as a polynomial in s.
    let mut g = vec![0u64; d + 1];
    let mut tp = 1u64;
    for i in (0..=d).rev() {
        g[i] = mul_mod(coeffs[i], tp);
        tp = mul_mod(tp, tr);
    }
    let s0 = -problem.bound;
    let mut diffs: Vec<u64> = (0..=d as i64)
        .map(|j| {
            let x = residue(s0 + j);
            g.iter().rev().fold(0, |acc, &c| add_mod(mul_mod(acc, x), c))
        })
        .collect();
    for k in 1..=d {
        for j in (k..=d).rev() {
            diffs[j] = add_mod(diffs[j], MODULUS - diffs[j - 1]);
        }
    }
    let mut out = Vec::new();
    for s in s0..=problem.bound {
        if filter.may_contain(diffs[0]) {
            let rec = SolutionRecord::new(&problem.form, s, t);
            if problem.rhs.contains(&rec.value) {
                out.push(rec);
            }
        }
        for k in 0..d {
            diffs[k] = add_mod(diffs[k], diffs[k + 1]);
        }
    }
    out
}

/// All `(s, t)` with `-bound <= s <= bound`, `-bound <= t <= -1` and
/// `F(s, t)` in the right-hand side set, ordered by decreasing `t` then
/// increasing `s`. Pairs sharing a factor are kept and classified.
pub fn bounded_search(problem: &ThueProblem) -> Vec<SolutionRecord> {
    let coeffs: Vec<u64> = problem.form.ascending().iter().map(|c| arith::mod_u64(c, MODULUS)).collect();
    let filter = Filter::new(&problem.rhs);
    let rows: Vec<Vec<SolutionRecord>> = (1..=problem.bound)
        .into_par_iter()
        .map(|k| search_row(problem, &coeffs, &filter, -k))
        .collect();
    rows.into_iter().flatten().collect()
}

pub fn unexpected(records: &[SolutionRecord]) -> Vec<&SolutionRecord> {
    records.iter().filter(|r| !r.classification.is_expected()).collect()
}

/// `a = b + c` with `a = d * root^2`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct UnitEquation {
    #[serde(with = "bigint_str")]
    pub a: BigInt,
    #[serde(with = "bigint_str")]
    pub b: BigInt,
    #[serde(with = "bigint_str")]
    pub c: BigInt,
    pub d: u32,
    #[serde(with = "bigint_str")]
    pub root: BigInt,
}

fn units(exp_bound: u32) -> Vec<BigInt> {
    let mut out = Vec::new();
    let mut p2 = BigInt::one();
    for _ in 0..=exp_bound {
        let mut v = p2.clone();
        for _ in 0..=exp_bound {
            out.push(v.clone());
            v *= 3;
        }
        p2 *= 2;
    }
    out.sort();
    out
}

fn check_exp_bound(exp_bound: u32) -> Result<()> {
    if exp_bound < MIN_EXP_BOUND {
        return Err(Error::Validation(format!("exp_bound {exp_bound} is below {MIN_EXP_BOUND}")));
    }
    Ok(())
}

/// Writes a positive `a` as `d * root^2` with `d | 6`, if possible.
fn square_class(a: &BigInt) -> Option<(u32, BigInt)> {
    if !a.is_positive() {
        return None;
    }
    [1u32, 2, 3, 6].into_iter().find_map(|d| {
        let (q, r) = a.div_rem(&BigInt::from(d));
        if r.is_zero() {
            arith::exact_sqrt(&q).map(|root| (d, root))
        } else {
            None
        }
    })
}

/// Every `a = b + c` with `b`, `c` coprime `{2, 3}`-units, `c < 0`, and
/// `a`, `2a`, `3a` or `6a` a square, exponents up to `exp_bound`.
pub fn unit_sum_enumerate(exp_bound: u32) -> Result<Vec<UnitEquation>> {
    check_exp_bound(exp_bound)?;
    let u = units(exp_bound);
    let mut out = BTreeSet::new();
    for b_abs in &u {
        for c_abs in &u {
            if !b_abs.gcd(c_abs).is_one() {
                continue;
            }
            let c = -c_abs;
            // a > 0 forces b > 0.
            let a = b_abs + &c;
            if let Some((d, root)) = square_class(&a) {
                out.insert(UnitEquation { a, b: b_abs.clone(), c, d, root });
            }
        }
    }
    Ok(out.into_iter().collect())
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct N2Solution {
    pub s: i64,
    pub t: i64,
    #[serde(with = "bigint_str")]
    pub w1: BigInt,
    #[serde(with = "bigint_str")]
    pub w2: BigInt,
    pub classification: Classification,
}

/// Solutions of `9s = W1 + 2 W2`, `9t = -4 W1 + W2` in `{2, 3}`-units with
/// `W2 > 0`, `gcd(W1, W2) | 9` and `t = -d x^2`, `d | 6`, which also make
/// `3 (4s + t) / (-t)` a rational square. The last condition is
/// `(C_1 / (6 m B_1^3))^2 = 3 (4s + t) / (-t)`, which every pair coming from a
/// point satisfies. Includes the torsion pair `(1, -1)`.
pub fn n2_candidates(exp_bound: u32) -> Result<Vec<N2Solution>> {
    check_exp_bound(exp_bound)?;
    let u = units(exp_bound);
    let nine = int(9);
    let mut out = Vec::new();
    for w2 in &u {
        for w1_abs in &u {
            if !(&nine % w1_abs.gcd(w2)).is_zero() {
                continue;
            }
            for w1 in [w1_abs.clone(), -w1_abs] {
                let (s, rs) = (&w1 + int(2) * w2).div_rem(&nine);
                let (t, rt) = (int(-4) * &w1 + w2).div_rem(&nine);
                if !rs.is_zero() || !rt.is_zero() || !t.is_negative() {
                    continue;
                }
                if square_class(&-&t).is_none() {
                    continue;
                }
                let ratio = Rational::new(int(3) * (int(4) * &s + &t), -&t);
                if !(arith::is_square(ratio.numer()) && arith::is_square(ratio.denom())) {
                    continue;
                }
                let (Some(si), Some(ti)) = (s.to_i64(), t.to_i64()) else {
                    return Err(Error::Capacity(t));
                };
                out.push(N2Solution { s: si, t: ti, w1, w2: w2.clone(), classification: classify(&s, &t) });
            }
        }
    }
    out.sort_by_key(|r| (r.s, r.t));
    out.dedup_by_key(|r| (r.s, r.t));
    Ok(out)
}

/// [`n2_candidates`] without the torsion pair; pairs with `gcd(s, t) != 1`
/// stay in, flagged.
pub fn solve_n2_system(exp_bound: u32) -> Result<Vec<N2Solution>> {
    Ok(n2_candidates(exp_bound)?
        .into_iter()
        .filter(|r| r.classification != Classification::ExpectedUnitPoint)
        .collect())
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct N2Trace {
    pub m: BigInt,
    pub point: CurvePoint,
    pub twist: (Rational, Rational),
    pub w1: BigInt,
    pub w2: BigInt,
}

fn exact_cbrt(a: &BigInt) -> Option<BigInt> {
    let r = a.cbrt();
    (&r * &r * &r == *a).then_some(r)
}

/// Recovers `m` and `Q = (X, Y)`, `Y > 0`, from a coprime pair with
/// `X^3 = -1728 m^2 s / t`, then computes `W_1` and `W_2`.
pub fn trace_n2(s: i64, t: i64) -> Result<N2Trace> {
    if t >= 0 || s == 0 || s.gcd(&t) != 1 {
        return Err(Error::Validation(format!("({s}, {t}) needs t < 0, s != 0 and gcd 1")));
    }
    let mut m = 1u64;
    for (p, e) in arith::factor_u64(s.unsigned_abs()) {
        m *= p.pow(e % 3);
    }
    for (p, e) in arith::factor_u64(t.unsigned_abs()) {
        m *= p.pow((3 - e % 3) % 3);
    }
    let mb = BigInt::from(m);
    let x3 = Rational::new(1728 * &mb * &mb * int(s), int(-t));
    let (Some(xn), Some(xd)) = (exact_cbrt(x3.numer()), exact_cbrt(x3.denom())) else {
        return Err(Error::Internal(format!("x^3 = {x3} is not a cube")));
    };
    let x = Rational::new(xn, xd);
    let y2 = &x * &x * &x - Rational::from_integer(432 * &mb * &mb);
    let (Some(yn), Some(yd)) = (arith::exact_sqrt(y2.numer()), arith::exact_sqrt(y2.denom())) else {
        return Err(Error::Domain(format!("({s}, {t}) gives no rational point")));
    };
    let point = CurvePoint::affine(x, Rational::new(yn, yd));
    let terms = sequences::cubic_terms(&mb, &point, 2)?;
    Ok(N2Trace {
        twist: mordell_to_twist(&mb, &point)?,
        m: mb,
        point,
        w1: terms[0].w.clone(),
        w2: terms[1].w.clone(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn classification_order() {
        let c = |s: i64, t: i64| classify(&int(s), &int(t));
        assert_eq!(c(1, 0), Classification::ExpectedT0);
        assert_eq!(c(1, 2), Classification::ExpectedSign);
        assert_eq!(c(1, -4), Classification::ExpectedSign);
        assert_eq!(c(3, -5), Classification::ExpectedOddValuation);
        assert_eq!(c(0, -1), Classification::ExpectedSign);
        assert_eq!(c(1, -1), Classification::ExpectedUnitPoint);
        assert_eq!(c(3, -3), Classification::ExpectedGcd);
        assert_eq!(c(7, -1), Classification::Unexpected);
        assert_eq!(c(7, -25 * 6), Classification::ExpectedSign);
        assert_eq!(c(70, -25 * 6), Classification::ExpectedGcd);
        assert_eq!(c(71, -25 * 6), Classification::Unexpected);
    }

    #[test]
    fn f5_unit_point() {
        let table = FormTable::with_max(6);
        let f5 = table.f_form(5).unwrap();
        let rec = SolutionRecord::new(&f5, 1, -1);
        assert_eq!(rec.value, int(-81));
        assert_eq!(rec.classification, Classification::ExpectedUnitPoint);
    }

    #[test]
    fn quoted_right_hand_sides() {
        let table = FormTable::new();
        let f5 = table.f_form(5).unwrap();
        let r = rhs_candidates(5, &f5).unwrap();
        assert_eq!((r.alpha.clone(), r.beta.clone(), r.epsilon, r.gamma.clone()), (vec![0], vec![0, 4, 6], 5, vec![0, 1]));
        assert_eq!(r.values.len(), 12);
        let r = rhs_candidates(9, &table.f_tilde(9).unwrap()).unwrap();
        assert_eq!(r.beta, vec![0, 9, 13]);
        let phi3 = table.phi_form(3).unwrap();
        assert_eq!(phi3, BinaryForm::from_printed(&[1, -24, 3, 1]));
        assert_eq!(rhs_candidates(3, &phi3).unwrap().beta, vec![0, 3, 4]);
        assert!(rhs_candidates(2, &phi3).is_err());
    }

    #[test]
    fn valuation_profiles() {
        let table = FormTable::new();
        assert_eq!(valuation_profile(&table.f_form(5).unwrap(), 3).unwrap(), vec![0, 4, 6]);
        assert_eq!(valuation_profile(&table.f_form(7).unwrap(), 3).unwrap(), vec![0, 8, 12]);
        assert_eq!(valuation_profile(&table.f_tilde(9).unwrap(), 3).unwrap(), vec![0, 9, 13]);
        assert_eq!(valuation_profile(&table.f_tilde(6).unwrap(), 2).unwrap(), vec![0, 1]);
        assert_eq!(valuation_profile(&table.f4_star().unwrap(), 2).unwrap(), vec![0, 1]);
        // s^2 - 2 t^2 has a 7-adic root.
        assert!(valuation_profile(&BinaryForm::from_printed(&[1, 0, -2]), 7).is_err());
    }

    #[test]
    fn profile_matches_brute_force() {
        let table = FormTable::with_max(8);
        let f = table.f_form(8).unwrap();
        let mut seen = BTreeSet::new();
        for s in -60i64..=60 {
            for t in -60i64..=60 {
                if s.gcd(&t) == 1 {
                    seen.insert(arith::ord_p_u64(&f.eval(&int(s), &int(t)), 3).unwrap());
                }
            }
        }
        let profile: BTreeSet<u32> = valuation_profile(&f, 3).unwrap().into_iter().collect();
        assert!(seen.is_subset(&profile), "{seen:?} vs {profile:?}");
    }

    #[test]
    fn search_agrees_with_direct_scan() {
        let table = FormTable::with_max(6);
        let p = ThueProblem::for_case(&table, 5, 60).unwrap();
        let fast = bounded_search(&p);
        let mut slow = Vec::new();
        for t in (-60..=-1).rev() {
            for s in -60..=60 {
                let r = SolutionRecord::new(&p.form, s, t);
                if p.rhs.contains(&r.value) {
                    slow.push(r);
                }
            }
        }
        assert_eq!(fast, slow);
        assert!(fast.iter().any(|r| (r.s, r.t) == (1, -1)));
        assert!(unexpected(&fast).is_empty());
    }

    #[test]
    fn problem_preconditions() {
        let table = FormTable::with_max(6);
        assert!(ThueProblem::for_case(&table, 5, 0).is_err());
        assert!(ThueProblem::for_case(&table, 5, MAX_BOUND + 1).is_err());
        let p = ThueProblem::for_case(&table, 6, 10).unwrap();
        assert_eq!(p.label, "Ft6");
        let json = serde_json::to_string(&p).unwrap();
        assert_eq!(serde_json::from_str::<ThueProblem>(&json).unwrap(), p);
    }

    #[test]
    fn unit_equations() {
        let eqs = unit_sum_enumerate(12).unwrap();
        let got: Vec<(i64, i64, i64)> =
            eqs.iter().map(|e| (e.a.to_i64().unwrap(), e.b.to_i64().unwrap(), e.c.to_i64().unwrap())).collect();
        let want = vec![
            (1, 2, -1),
            (1, 3, -2),
            (1, 4, -3),
            (1, 9, -8),
            (2, 3, -1),
            (3, 4, -1),
            (8, 9, -1),
            (25, 27, -2),
            (49, 81, -32),
            (242, 243, -1),
        ];
        assert_eq!(got, want);
        let e = eqs.iter().find(|e| e.a == int(242)).unwrap();
        assert_eq!((e.d, e.root.clone()), (2, int(11)));
        assert!(unit_sum_enumerate(11).is_err());
    }

    #[test]
    fn n2_system() {
        let all = n2_candidates(12).unwrap();
        let pairs: Vec<(i64, i64)> = all.iter().map(|r| (r.s, r.t)).collect();
        assert_eq!(pairs, vec![(1, -1), (3, -3), (7, -1)]);
        let sol = solve_n2_system(12).unwrap();
        assert_eq!(sol.len(), 2);
        assert_eq!(sol[0].classification, Classification::ExpectedGcd);
        assert_eq!((sol[1].s, sol[1].t, sol[1].w1.clone(), sol[1].w2.clone()), (7, -1, int(9), int(27)));
    }

    #[test]
    fn trace_seven() {
        let tr = trace_n2(7, -1).unwrap();
        assert_eq!(tr.m, int(7));
        assert_eq!(tr.point, CurvePoint::from_ints(84, 756));
        assert_eq!(tr.twist, (arith::rat(2, 1), arith::rat(-1, 1)));
        assert_eq!((tr.w1, tr.w2), (int(1), int(3)));
        assert!(matches!(trace_n2(1, -1), Err(Error::Torsion)));
    }
}
