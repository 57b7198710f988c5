//! Reduction modulo primes and the local valuation laws.
//!
//! The p-adic filtration is never built as a field. Multiples of a point are
//! tracked in Jacobian coordinates modulo `p^K` and only the valuation of the
//! x-coordinate is read off.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::arith::{self, inv_mod, mod_u64, pow_mod};
use crate::curves::MordellCurve;
use crate::error::{Error, Result};
use crate::points::CurvePoint;
use crate::sequences::MordellTerm;

/// Default exponent `K` of the working modulus `p^K`.
pub const DEFAULT_PADIC_DIGITS: u32 = 64;

/// `y^2 = x^3 + d` over `F_p`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct FpCurve {
    pub p: u64,
    pub d: u64,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum FpPoint {
    Infinity,
    Affine(u64, u64),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Reduction {
    Point(FpPoint),
    /// The image is the node/cusp `(0, 0)` of a bad fibre.
    Singular,
}

fn mulm(a: u64, b: u64, p: u64) -> u64 {
    ((a as u128 * b as u128) % p as u128) as u64
}

fn subm(a: u64, b: u64, p: u64) -> u64 {
    (a + p - b) % p
}

fn require_large(p: u64) -> Result<()> {
    if p <= 3 || !arith::is_prime_u64(p) {
        return Err(Error::Validation(format!("{p} is not a prime above 3")));
    }
    Ok(())
}

impl FpCurve {
    pub fn for_twist(m: &BigInt, p: u64) -> Result<Self> {
        require_large(p)?;
        let curve = MordellCurve::new_allow_small(m)?;
        Ok(FpCurve { p, d: mod_u64(&curve.d, p) })
    }

    pub fn contains(&self, q: &FpPoint) -> bool {
        match *q {
            FpPoint::Infinity => true,
            FpPoint::Affine(x, y) => {
                let p = self.p;
                mulm(y, y, p) == (mulm(mulm(x, x, p), x, p) + self.d) % p
            }
        }
    }

    pub fn neg(&self, q: &FpPoint) -> FpPoint {
        match *q {
            FpPoint::Infinity => FpPoint::Infinity,
            FpPoint::Affine(x, y) => FpPoint::Affine(x, (self.p - y) % self.p),
        }
    }

    pub fn add(&self, a: &FpPoint, b: &FpPoint) -> FpPoint {
        let p = self.p;
        let ((x1, y1), (x2, y2)) = match (*a, *b) {
            (FpPoint::Infinity, _) => return *b,
            (_, FpPoint::Infinity) => return *a,
            (FpPoint::Affine(x1, y1), FpPoint::Affine(x2, y2)) => ((x1, y1), (x2, y2)),
        };
        let lambda = if x1 == x2 {
            if (y1 + y2) % p == 0 {
                return FpPoint::Infinity;
            }
            mulm(mulm(3, mulm(x1, x1, p), p), inv_mod(mulm(2, y1, p), p), p)
        } else {
            mulm(subm(y2, y1, p), inv_mod(subm(x2, x1, p), p), p)
        };
        let x3 = subm(subm(mulm(lambda, lambda, p), x1, p), x2, p);
        let y3 = subm(mulm(lambda, subm(x1, x3, p), p), y1, p);
        FpPoint::Affine(x3, y3)
    }

    /// Points with `x = 0`; nonempty iff `d` is a square.
    pub fn x_zero_points(&self) -> Vec<FpPoint> {
        let p = self.p;
        if self.d == 0 {
            return vec![FpPoint::Affine(0, 0)];
        }
        if pow_mod(self.d, (p - 1) / 2, p) != 1 {
            return Vec::new();
        }
        let r = sqrt_mod(self.d, p);
        let mut v = vec![FpPoint::Affine(0, r), FpPoint::Affine(0, p - r)];
        v.sort_by_key(|q| match q {
            FpPoint::Affine(_, y) => *y,
            FpPoint::Infinity => 0,
        });
        v
    }
}

/// Tonelli-Shanks; `a` must be a nonzero square mod the odd prime `p`.
fn sqrt_mod(a: u64, p: u64) -> u64 {
    let s = (p - 1).trailing_zeros();
    let q = (p - 1) >> s;
    let mut z = 2;
    while pow_mod(z, (p - 1) / 2, p) != p - 1 {
        z += 1;
    }
    let mut m = s;
    let mut c = pow_mod(z, q, p);
    let mut t = pow_mod(a, q, p);
    let mut r = pow_mod(a, (q + 1) / 2, p);
    while t != 1 {
        let mut i = 0;
        let mut tt = t;
        while tt != 1 {
            tt = mulm(tt, tt, p);
            i += 1;
        }
        let b = pow_mod(c, 1 << (m - i - 1), p);
        m = i;
        c = mulm(b, b, p);
        t = mulm(t, c, p);
        r = mulm(r, b, p);
    }
    r
}

/// Image of `Q` on `y^2 = x^3 - 432 m^2` modulo `p > 3`.
pub fn reduce_point(m: &BigInt, q: &CurvePoint, p: u64) -> Result<Reduction> {
    let curve = FpCurve::for_twist(m, p)?;
    let (x, y) = match q {
        CurvePoint::Infinity => return Ok(Reduction::Point(FpPoint::Infinity)),
        CurvePoint::Affine { x, y } => (x, y),
    };
    let den = mod_u64(x.denom(), p);
    if den == 0 {
        return Ok(Reduction::Point(FpPoint::Infinity));
    }
    let xr = mulm(mod_u64(x.numer(), p), inv_mod(den, p), p);
    let yr = mulm(mod_u64(y.numer(), p), inv_mod(mod_u64(y.denom(), p), p), p);
    if curve.d == 0 && xr == 0 && yr == 0 {
        return Ok(Reduction::Singular);
    }
    Ok(Reduction::Point(FpPoint::Affine(xr, yr)))
}

/// Order `e_p(Q)` of the reduction at a good prime, by stepping.
pub fn order_mod_p(m: &BigInt, q: &CurvePoint, p: u64) -> Result<u64> {
    let curve = FpCurve::for_twist(m, p)?;
    if curve.d == 0 {
        return Err(Error::Validation(format!("{p} is a prime of bad reduction")));
    }
    let base = match reduce_point(m, q, p)? {
        Reduction::Point(pt) => pt,
        Reduction::Singular => unreachable!("good prime"),
    };
    let limit = p + 2 + 2 * ((p as f64).sqrt() as u64 + 1);
    let mut acc = base;
    for n in 1..=limit {
        if acc == FpPoint::Infinity {
            return Ok(n);
        }
        acc = curve.add(&acc, &base);
    }
    Err(Error::Internal(format!("no order found below the Hasse bound for p = {p}")))
}

/// A point of `y^2 = x^3 + d` in Jacobian coordinates modulo `p^K`, known
/// to `prec` p-adic digits.
#[derive(Clone, Debug)]
pub struct PadicPoint {
    p: BigInt,
    modulus: BigInt,
    d: BigInt,
    prec: u32,
    x: BigInt,
    y: BigInt,
    z: BigInt,
}

impl PadicPoint {
    pub fn new(m: &BigInt, q: &CurvePoint, p: u64, digits: u32) -> Result<Self> {
        require_large(p)?;
        let curve = MordellCurve::new_allow_small(m)?;
        let (x, y) = match q {
            CurvePoint::Infinity => return Err(Error::Validation("point at infinity".into())),
            CurvePoint::Affine { x, y } => (x, y),
        };
        let b = arith::exact_sqrt(x.denom())
            .ok_or_else(|| Error::Validation(format!("{q} is not in Weierstrass lowest terms")))?;
        let pb = BigInt::from(p);
        let modulus = arith::pow_big(&pb, digits);
        let r = |v: &BigInt| v.mod_floor(&modulus);
        Ok(PadicPoint {
            d: r(&curve.d),
            x: r(x.numer()),
            y: r(y.numer()),
            z: r(&b),
            p: pb,
            modulus,
            prec: digits,
        })
    }

    fn reduce(&self, v: BigInt) -> BigInt {
        v.mod_floor(&self.modulus)
    }

    fn precision_modulus(&self) -> BigInt {
        arith::pow_big(&self.p, self.prec)
    }

    fn vanishes(&self, v: &BigInt) -> bool {
        (v % self.precision_modulus()).is_zero()
    }

    pub fn is_infinity(&self) -> bool {
        self.vanishes(&self.z)
    }

    pub fn precision(&self) -> u32 {
        self.prec
    }

    fn with(&self, x: BigInt, y: BigInt, z: BigInt, prec: u32) -> Self {
        let mut out = PadicPoint {
            p: self.p.clone(),
            modulus: self.modulus.clone(),
            d: self.d.clone(),
            prec,
            x: self.reduce(x),
            y: self.reduce(y),
            z: self.reduce(z),
        };
        out.normalize();
        out
    }

    /// Strips a common weighted factor `(p^2, p^3, p)` at a cost of 3 digits.
    fn normalize(&mut self) {
        let p = &self.p;
        let p2 = p * p;
        let p3 = &p2 * p;
        while self.prec > 3
            && !self.is_infinity()
            && (&self.z % p).is_zero()
            && (&self.x % &p2).is_zero()
            && (&self.y % &p3).is_zero()
        {
            self.x /= &p2;
            self.y /= &p3;
            self.z /= p;
            self.prec -= 3;
        }
    }

    pub fn double(&self) -> Self {
        if self.is_infinity() {
            return self.clone();
        }
        let a = &self.x * &self.x;
        let b = &self.y * &self.y;
        let c = self.reduce(&b * &b);
        let xb = &self.x + &b;
        let dd = self.reduce(2 * (&xb * &xb - &a - &c));
        let e = 3 * a;
        let f = self.reduce(&e * &e);
        let x3 = &f - 2 * &dd;
        let y3 = &e * (&dd - &x3) - 8 * &c;
        let z3 = 2 * &self.y * &self.z;
        self.with(x3, y3, z3, self.prec)
    }

    pub fn add(&self, o: &Self) -> Self {
        if self.is_infinity() {
            return o.clone();
        }
        if o.is_infinity() {
            return self.clone();
        }
        let prec = self.prec.min(o.prec);
        let z1s = self.reduce(&self.z * &self.z);
        let z2s = self.reduce(&o.z * &o.z);
        let u1 = self.reduce(&self.x * &z2s);
        let u2 = self.reduce(&o.x * &z1s);
        let s1 = self.reduce(&self.y * &z2s * &o.z);
        let s2 = self.reduce(&o.y * &z1s * &self.z);
        let h = self.reduce(&u2 - &u1);
        let r = self.reduce(&s2 - &s1);
        let pm = arith::pow_big(&self.p, prec);
        if (&h % &pm).is_zero() && (&r % &pm).is_zero() {
            return self.double();
        }
        let h2 = self.reduce(&h * &h);
        let h3 = self.reduce(&h2 * &h);
        let u1h2 = self.reduce(&u1 * &h2);
        let x3 = self.reduce(&r * &r - &h3 - 2 * &u1h2);
        let y3 = &r * (&u1h2 - &x3) - &s1 * &h3;
        let z3 = &self.z * &o.z * &h;
        self.with(x3, y3, z3, prec)
    }

    pub fn mul(&self, n: u64) -> Self {
        let mut acc: Option<Self> = None;
        let mut run = self.clone();
        let mut k = n;
        while k > 0 {
            if k & 1 == 1 {
                acc = Some(match acc {
                    None => run.clone(),
                    Some(a) => a.add(&run),
                });
            }
            k >>= 1;
            if k > 0 {
                run = run.double();
            }
        }
        acc.unwrap_or_else(|| self.with(BigInt::one(), BigInt::one(), BigInt::zero(), self.prec))
    }

    fn ord(&self, v: &BigInt) -> Option<u32> {
        if self.vanishes(v) {
            return None;
        }
        arith::ord_p(v, &self.p).ok()
    }

    /// `ord_p(x) = ord(X) - 2 ord(Z)`, or `None` when it exceeds the precision.
    pub fn ord_x(&self) -> Option<i64> {
        let oz = self.ord(&self.z)?;
        let ox = self.ord(&self.x)?;
        Some(ox as i64 - 2 * oz as i64)
    }

    /// Sanity check `Y^2 = X^3 + d Z^6` to the working precision.
    pub fn on_curve(&self) -> bool {
        let z2 = &self.z * &self.z;
        let z6 = &z2 * &z2 * &z2;
        let lhs = &self.y * &self.y;
        let rhs = &self.x * &self.x * &self.x + &self.d * z6;
        self.vanishes(&self.reduce(lhs - rhs))
    }
}

/// Outcome of a valuation-law check.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LawCheck {
    pub before: i64,
    pub after: i64,
    pub expected: i64,
    pub holds: bool,
}

fn ord_p_u64(k: u64, p: u64) -> i64 {
    let mut k = k;
    let mut e = 0;
    while k % p == 0 {
        k /= p;
        e += 1;
    }
    e
}

fn inconclusive(p: u64, k: u64) -> Error {
    Error::Internal(format!("valuation at p = {p}, k = {k} exceeds the working precision"))
}

/// `ord_p(x(kQ)) = ord_p(x(Q)) - 2 ord_p(k)` for `Q` in the kernel of reduction.
pub fn check_denom_valuation_law(q: &PadicPoint, p: u64, k: u64) -> Result<LawCheck> {
    if k == 0 {
        return Err(Error::Validation("k must be positive".into()));
    }
    let before = q.ord_x().ok_or_else(|| inconclusive(p, 1))?;
    if before >= 0 {
        return Err(Error::Inapplicable(format!("ord_{p} x(Q) = {before} is not negative")));
    }
    let after = q.mul(k).ord_x().ok_or_else(|| inconclusive(p, k))?;
    let expected = before - 2 * ord_p_u64(k, p);
    Ok(LawCheck { before, after, expected, holds: after == expected })
}

/// `ord_p(x(kQ)) = ord_p(x(Q)) + ord_p(k)` when `ord_p(x(Q)) > 0` and `3 ∤ k`.
pub fn check_numer_valuation_law(q: &PadicPoint, p: u64, k: u64) -> Result<LawCheck> {
    if k == 0 {
        return Err(Error::Validation("k must be positive".into()));
    }
    if k % 3 == 0 {
        return Err(Error::Inapplicable(format!("3 divides k = {k}")));
    }
    let before = q.ord_x().ok_or_else(|| inconclusive(p, 1))?;
    if before <= 0 {
        return Err(Error::Inapplicable(format!("ord_{p} x(Q) = {before} is not positive")));
    }
    let after = q.mul(k).ord_x().ok_or_else(|| inconclusive(p, k))?;
    let expected = before + ord_p_u64(k, p);
    Ok(LawCheck { before, after, expected, holds: after == expected })
}

/// For `p | m`: `p | A_k` iff `3 ∤ k` and `p | A_1`.
pub fn bad_prime_pattern(a_terms: &[BigInt], p: u64) -> bool {
    let Some(a1) = a_terms.first() else { return true };
    let p1 = (a1 % p).is_zero();
    a_terms
        .iter()
        .enumerate()
        .all(|(i, a)| (a % p).is_zero() == (p1 && (i + 1) % 3 != 0))
}

/// Supersingular `p ≡ 2 (mod 3)` never divides `A_k`; for `p ≡ 1 (mod 3)`
/// every `k` with `p | A_k` reduces to a point with `x = 0`.
pub fn h_p_and_supersingular_check(m: &BigInt, terms: &[MordellTerm], p: u64) -> Result<bool> {
    let curve = FpCurve::for_twist(m, p)?;
    if curve.d == 0 {
        return Err(Error::Validation(format!("{p} is a prime of bad reduction")));
    }
    let hp = curve.x_zero_points();
    for t in terms {
        if !(&t.a % p).is_zero() {
            continue;
        }
        if p % 3 == 2 {
            return Ok(false);
        }
        let b = mod_u64(&t.b, p);
        if b == 0 {
            return Ok(false);
        }
        let binv = inv_mod(b, p);
        let y = mulm(mod_u64(&t.c, p), pow_mod(binv, 3, p), p);
        if !hp.contains(&FpPoint::Affine(0, y)) {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Smallest prime `p > 3` of good reduction dividing some `B_n`, `n <= terms.len()`.
pub fn first_denominator_prime(m: &BigInt, terms: &[MordellTerm]) -> Option<(usize, u64)> {
    for t in terms {
        if t.b.is_one() {
            continue;
        }
        let b = t.b.to_u64();
        let factors = match b {
            Some(b) => arith::factor_u64(b),
            None => small_factors(&t.b),
        };
        for (p, _) in factors {
            if p > 3 && !(m.abs() % p).is_zero() {
                return Some((t.n as usize, p));
            }
        }
    }
    None
}

fn small_factors(n: &BigInt) -> Vec<(u64, u32)> {
    arith::primes_up_to(100_000)
        .into_iter()
        .filter(|&p| (n % p).is_zero())
        .map(|p| (p, arith::ord_p_u64(n, p).unwrap_or(0)))
        .collect()
}
