//! Integer and rational helpers shared by every other module.
//!
//! Integers are `num_bigint::BigInt`; rationals are `num_rational::BigRational`,
//! which keeps every value in lowest terms with a positive denominator.
//! Primitive divisors are detected by gcd-stripping only. Nothing here factors
//! a large integer.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

pub type Rational = num_rational::BigRational;

/// Trial-division ceiling for [`is_cube_free`].
pub const CUBE_FREE_LIMIT: u64 = 1_000_000_000;

pub fn int(v: i64) -> BigInt {
    BigInt::from(v)
}

pub fn rat(num: i64, den: i64) -> Rational {
    Rational::new(BigInt::from(num), BigInt::from(den))
}

pub fn rat_int(v: &BigInt) -> Rational {
    Rational::from_integer(v.clone())
}

/// Largest `e` with `p^e | a`.
pub fn ord_p(a: &BigInt, p: &BigInt) -> Result<u32> {
    if a.is_zero() {
        return Err(Error::UndefinedValuation);
    }
    if *p <= BigInt::one() {
        return Err(Error::Validation(format!("{p} is not a prime")));
    }
    let mut r = a.abs();
    let mut e = 0;
    loop {
        let (q, rem) = r.div_rem(p);
        if !rem.is_zero() {
            return Ok(e);
        }
        r = q;
        e += 1;
    }
}

pub fn ord_p_u64(a: &BigInt, p: u64) -> Result<u32> {
    ord_p(a, &BigInt::from(p))
}

/// `ord_p(num) - ord_p(den)`.
pub fn ord_p_rational(x: &Rational, p: u64) -> Result<i64> {
    let p = BigInt::from(p);
    Ok(ord_p(x.numer(), &p)? as i64 - ord_p(x.denom(), &p)? as i64)
}

/// Removes from `|a|` every prime it shares with a nonzero prior.
///
/// Each prior is stripped by repeated `g = gcd(r, prior); r /= g` until the
/// gcd is 1, so primes are never found explicitly.
pub fn primitive_part(a: &BigInt, priors: &[BigInt]) -> Result<BigInt> {
    if a.is_zero() {
        return Err(Error::ZeroArgument("primitive_part"));
    }
    let mut r = a.abs();
    for q in priors {
        if q.is_zero() {
            continue;
        }
        loop {
            let g = r.gcd(q);
            if g.is_one() {
                break;
            }
            r /= g;
        }
    }
    Ok(r)
}

/// True iff every prime divisor of `a` lies in `primes`.
pub fn is_s_unit(a: &BigInt, primes: &[u64]) -> Result<bool> {
    if a.is_zero() {
        return Err(Error::ZeroArgument("is_s_unit"));
    }
    let mut r = a.abs();
    for &p in primes {
        let p = BigInt::from(p);
        loop {
            let (q, rem) = r.div_rem(&p);
            if !rem.is_zero() {
                break;
            }
            r = q;
        }
    }
    Ok(r.is_one())
}

pub fn is_cube_free(m: &BigInt) -> Result<bool> {
    if m.is_zero() {
        return Err(Error::ZeroArgument("is_cube_free"));
    }
    let n = m
        .abs()
        .to_u64()
        .filter(|&n| n <= CUBE_FREE_LIMIT)
        .ok_or_else(|| Error::Capacity(m.clone()))?;
    Ok(factor_u64(n).iter().all(|&(_, e)| e < 3))
}

/// Trial-division factorization, ascending primes.
pub fn factor_u64(mut n: u64) -> Vec<(u64, u32)> {
    let mut out = Vec::new();
    if n < 2 {
        return out;
    }
    let mut push = |p: u64, n: &mut u64| {
        let mut e = 0;
        while *n % p == 0 {
            *n /= p;
            e += 1;
        }
        if e > 0 {
            out.push((p, e));
        }
    };
    push(2, &mut n);
    push(3, &mut n);
    let mut p = 5;
    while p * p <= n {
        push(p, &mut n);
        push(p + 2, &mut n);
        p += 6;
    }
    if n > 1 {
        out.push((n, 1));
    }
    out
}

fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

pub fn pow_mod(mut b: u64, mut e: u64, m: u64) -> u64 {
    let mut r = 1 % m;
    b %= m;
    while e > 0 {
        if e & 1 == 1 {
            r = mul_mod(r, b, m);
        }
        b = mul_mod(b, b, m);
        e >>= 1;
    }
    r
}

/// Deterministic Miller-Rabin for 64-bit inputs.
pub fn is_prime_u64(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for p in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        if n % p == 0 {
            return n == p;
        }
    }
    let s = (n - 1).trailing_zeros();
    let d = (n - 1) >> s;
    'witness: for a in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        let mut x = pow_mod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

pub fn is_prime(p: &BigInt) -> bool {
    p.to_u64().map_or(false, is_prime_u64)
}

pub fn primes_up_to(n: u64) -> Vec<u64> {
    let n = n as usize;
    if n < 2 {
        return Vec::new();
    }
    let mut sieve = vec![true; n + 1];
    sieve[0] = false;
    sieve[1] = false;
    let mut i = 2;
    while i * i <= n {
        if sieve[i] {
            let mut j = i * i;
            while j <= n {
                sieve[j] = false;
                j += i;
            }
        }
        i += 1;
    }
    sieve
        .iter()
        .enumerate()
        .filter_map(|(i, &b)| b.then_some(i as u64))
        .collect()
}

/// Inverse of `a` modulo prime `p`; `a` must be nonzero mod `p`.
pub fn inv_mod(a: u64, p: u64) -> u64 {
    pow_mod(a, p - 2, p)
}

pub fn mod_u64(a: &BigInt, p: u64) -> u64 {
    let r = a.mod_floor(&BigInt::from(p));
    r.to_u64().expect("residue fits in u64")
}

pub fn exact_sqrt(a: &BigInt) -> Option<BigInt> {
    if a.is_negative() {
        return None;
    }
    let r = a.sqrt();
    (&r * &r == *a).then_some(r)
}

pub fn is_square(a: &BigInt) -> bool {
    exact_sqrt(a).is_some()
}

/// Natural log of `|a|`; `a` must be nonzero.
pub fn ln_abs(a: &BigInt) -> f64 {
    let a = a.abs();
    let bits = a.bits();
    if bits <= 1000 {
        return a.to_f64().expect("finite").ln();
    }
    let shift = bits - 64;
    let top: BigInt = &a >> shift;
    top.to_f64().expect("finite").ln() + shift as f64 * std::f64::consts::LN_2
}

/// `ln|x|` for a nonzero rational.
pub fn ln_abs_rational(x: &Rational) -> f64 {
    ln_abs(x.numer()) - ln_abs(x.denom())
}

pub fn pow_big(b: &BigInt, e: u32) -> BigInt {
    num_traits::pow(b.clone(), e as usize)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn valuations() {
        assert_eq!(ord_p(&int(48), &int(2)).unwrap(), 4);
        assert_eq!(ord_p(&int(7), &int(5)).unwrap(), 0);
        assert_eq!(ord_p(&int(-27), &int(3)).unwrap(), 3);
        assert_eq!(ord_p(&int(0), &int(3)), Err(Error::UndefinedValuation));
    }

    #[test]
    fn primitive_parts() {
        let m: Vec<BigInt> = [1, 3, 7, 15, 31].iter().map(|&v| int(v)).collect();
        assert_eq!(primitive_part(&int(63), &m).unwrap(), int(1));
        assert_eq!(primitive_part(&int(31), &m[..4]).unwrap(), int(31));
        assert_eq!(primitive_part(&int(8), &[int(3), int(5)]).unwrap(), int(8));
        assert_eq!(primitive_part(&int(-12), &[int(0), int(-1), int(9)]).unwrap(), int(4));
        assert!(primitive_part(&int(0), &m).is_err());
    }

    #[test]
    fn s_units_and_cube_freeness() {
        assert!(is_s_unit(&int(48), &[2, 3]).unwrap());
        assert!(!is_s_unit(&int(10), &[2, 3]).unwrap());
        assert!(is_s_unit(&int(-81), &[2, 3]).unwrap());
        assert!(is_s_unit(&int(0), &[2, 3]).is_err());

        assert!(is_cube_free(&int(12)).unwrap());
        assert!(!is_cube_free(&int(24)).unwrap());
        assert!(is_cube_free(&int(7)).unwrap());
        assert!(!is_cube_free(&int(-250)).unwrap());
        assert!(matches!(
            is_cube_free(&int(2_000_000_000)),
            Err(Error::Capacity(_))
        ));
    }

    #[test]
    fn primality() {
        let small: Vec<u64> = (0..200).filter(|&n| is_prime_u64(n)).collect();
        assert_eq!(small, primes_up_to(199));
        assert!(is_prime_u64(2_305_843_009_213_693_951));
        assert!(!is_prime_u64(3_215_031_751));
    }

    #[test]
    fn logs_of_large_integers() {
        let big = pow_big(&int(10), 400);
        assert!((ln_abs(&big) - 400.0 * 10f64.ln()).abs() < 1e-9);
        assert!((ln_abs(&int(-84)) - 84f64.ln()).abs() < 1e-12);
    }

    fn nonzero() -> impl Strategy<Value = i64> {
        prop_oneof![-1_000_000i64..-1, 1i64..1_000_000]
    }

    proptest! {
        #[test]
        fn valuation_is_additive(a in nonzero(), b in nonzero(), pi in 0usize..6) {
            let p = int([2, 3, 5, 7, 11, 13][pi]);
            let lhs = ord_p(&(int(a) * int(b)), &p).unwrap();
            prop_assert_eq!(lhs, ord_p(&int(a), &p).unwrap() + ord_p(&int(b), &p).unwrap());
        }

        #[test]
        fn primitive_part_divides_and_is_coprime(
            a in nonzero(),
            priors in proptest::collection::vec(-5000i64..5000, 0..6),
        ) {
            let priors: Vec<BigInt> = priors.into_iter().map(int).collect();
            let r = primitive_part(&int(a), &priors).unwrap();
            prop_assert!((int(a) % &r).is_zero());
            for q in priors.iter().filter(|q| !q.is_zero()) {
                prop_assert!(r.gcd(q).is_one());
            }
            let mut rev = priors.clone();
            rev.reverse();
            prop_assert_eq!(r, primitive_part(&int(a), &rev).unwrap());
        }

        #[test]
        fn rationals_stay_canonical(n in -10_000i64..10_000, d in nonzero()) {
            let q = rat(n, d);
            prop_assert!(q.denom() > &BigInt::zero());
            prop_assert!(q.numer().gcd(q.denom()).is_one());
        }
    }
}
