//! Exact group law on long Weierstrass models over the rationals, and the
//! birational maps between the twist and the Mordell curve.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::arith::{self, rat_int, Rational};
use crate::curves::Weierstrass;
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum CurvePoint {
    Infinity,
    Affine { x: Rational, y: Rational },
}

impl CurvePoint {
    pub fn affine(x: Rational, y: Rational) -> Self {
        CurvePoint::Affine { x, y }
    }

    pub fn from_ints(x: i64, y: i64) -> Self {
        CurvePoint::affine(arith::rat(x, 1), arith::rat(y, 1))
    }

    pub fn is_infinity(&self) -> bool {
        matches!(self, CurvePoint::Infinity)
    }

    pub fn x(&self) -> Option<&Rational> {
        match self {
            CurvePoint::Infinity => None,
            CurvePoint::Affine { x, .. } => Some(x),
        }
    }

    pub fn y(&self) -> Option<&Rational> {
        match self {
            CurvePoint::Infinity => None,
            CurvePoint::Affine { y, .. } => Some(y),
        }
    }
}

impl std::fmt::Display for CurvePoint {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CurvePoint::Infinity => f.write_str("O"),
            CurvePoint::Affine { x, y } => write!(f, "({x}, {y})"),
        }
    }
}

/// Mazur: a rational torsion point has order at most 12.
pub const MAX_TORSION_ORDER: i64 = 12;

impl Weierstrass {
    pub fn check(&self, p: &CurvePoint) -> Result<()> {
        if self.contains(p) {
            Ok(())
        } else {
            Err(Error::OffCurve(p.to_string()))
        }
    }

    pub fn negate(&self, p: &CurvePoint) -> CurvePoint {
        match p {
            CurvePoint::Infinity => CurvePoint::Infinity,
            CurvePoint::Affine { x, y } => CurvePoint::Affine {
                x: x.clone(),
                y: -y - rat_int(&self.a1) * x - rat_int(&self.a3),
            },
        }
    }

    /// Group sum; both inputs are validated.
    pub fn add(&self, p: &CurvePoint, q: &CurvePoint) -> Result<CurvePoint> {
        self.check(p)?;
        self.check(q)?;
        Ok(self.add_unchecked(p, q))
    }

    /// Chord-and-tangent addition without the on-curve check.
    pub fn add_unchecked(&self, p: &CurvePoint, q: &CurvePoint) -> CurvePoint {
        let (x1, y1, x2, y2) = match (p, q) {
            (CurvePoint::Infinity, _) => return q.clone(),
            (_, CurvePoint::Infinity) => return p.clone(),
            (CurvePoint::Affine { x: x1, y: y1 }, CurvePoint::Affine { x: x2, y: y2 }) => {
                (x1, y1, x2, y2)
            }
        };
        let a1 = rat_int(&self.a1);
        let a2 = rat_int(&self.a2);
        let a3 = rat_int(&self.a3);
        let a4 = rat_int(&self.a4);
        let a6 = rat_int(&self.a6);
        if x1 == x2 && (y1 + y2 + &a1 * x2 + &a3).is_zero() {
            return CurvePoint::Infinity;
        }
        let (lambda, nu) = if x1 != x2 {
            let dx = x2 - x1;
            ((y2 - y1) / &dx, (y1 * x2 - y2 * x1) / &dx)
        } else {
            let den = Rational::from_integer(BigInt::from(2)) * y1 + &a1 * x1 + &a3;
            let three = Rational::from_integer(BigInt::from(3));
            let two = Rational::from_integer(BigInt::from(2));
            let lam = (three * x1 * x1 + &two * &a2 * x1 + &a4 - &a1 * y1) / &den;
            let nu = (-(x1 * x1 * x1) + &a4 * x1 + two * &a6 - &a3 * y1) / &den;
            (lam, nu)
        };
        let x3 = &lambda * &lambda + &a1 * &lambda - &a2 - x1 - x2;
        let y3 = -(&lambda + &a1) * &x3 - nu - a3;
        CurvePoint::Affine { x: x3, y: y3 }
    }

    pub fn double(&self, p: &CurvePoint) -> CurvePoint {
        self.add_unchecked(p, p)
    }

    /// `n P` by double-and-add; negative `n` negates.
    pub fn scalar_mul(&self, n: i64, p: &CurvePoint) -> Result<CurvePoint> {
        self.check(p)?;
        Ok(self.scalar_mul_unchecked(n, p))
    }

    pub fn scalar_mul_unchecked(&self, n: i64, p: &CurvePoint) -> CurvePoint {
        let base = if n < 0 { self.negate(p) } else { p.clone() };
        let mut k = n.unsigned_abs();
        let mut acc = CurvePoint::Infinity;
        let mut run = base;
        while k > 0 {
            if k & 1 == 1 {
                acc = self.add_unchecked(&acc, &run);
            }
            k >>= 1;
            if k > 0 {
                run = self.double(&run);
            }
        }
        acc
    }

    /// Least `n` in `1..=12` with `n P = O`, if any.
    pub fn torsion_order(&self, p: &CurvePoint) -> Option<i64> {
        let mut acc = CurvePoint::Infinity;
        for n in 1..=MAX_TORSION_ORDER {
            acc = self.add_unchecked(&acc, p);
            if acc.is_infinity() {
                return Some(n);
            }
        }
        None
    }

    pub fn is_torsion(&self, p: &CurvePoint) -> bool {
        self.torsion_order(p).is_some()
    }
}

/// A point `(U : V : W)` on `U^3 + V^3 = m W^3` in lowest integral form.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct CubicPoint {
    pub u: BigInt,
    pub v: BigInt,
    pub w: BigInt,
}

impl CubicPoint {
    /// The group identity `(-1 : 1 : 0)`.
    pub fn identity() -> Self {
        CubicPoint { u: -BigInt::one(), v: BigInt::one(), w: BigInt::zero() }
    }

    /// Inverse swaps `U` and `V`.
    pub fn inverse(&self) -> Self {
        CubicPoint { u: self.v.clone(), v: self.u.clone(), w: self.w.clone() }
    }

    pub fn satisfies(&self, m: &BigInt) -> bool {
        let cube = |a: &BigInt| a * a * a;
        cube(&self.u) + cube(&self.v) == m * cube(&self.w)
    }
}

fn signed_pair(m: &BigInt, u: Rational, v: Rational) -> (Rational, Rational) {
    if m.is_negative() {
        (-u, -v)
    } else {
        (u, v)
    }
}

/// `X = 12 m/(u + v)`, `Y = 36 m (u - v)/(u + v)`; inverse of [`mordell_to_twist`].
pub fn twist_to_mordell(m: &BigInt, u: &Rational, v: &Rational) -> Result<CurvePoint> {
    let (u, v) = signed_pair(m, u.clone(), v.clone());
    let m = m.abs();
    if &u * &u * &u + &v * &v * &v != rat_int(&m) {
        return Err(Error::OffCurve(format!("({u}, {v}) is not on u^3 + v^3 = {m}")));
    }
    let s = &u + &v;
    if s.is_zero() {
        return Err(Error::Validation("u + v = 0".into()));
    }
    let mq = rat_int(&m);
    let x = Rational::from_integer(BigInt::from(12)) * &mq / &s;
    let y = Rational::from_integer(BigInt::from(36)) * &mq * (&u - &v) / &s;
    Ok(CurvePoint::affine(x, y))
}

/// `u = (36m + Y)/(6X)`, `v = (36m - Y)/(6X)`.
pub fn mordell_to_twist(m: &BigInt, q: &CurvePoint) -> Result<(Rational, Rational)> {
    let (x, y) = match q {
        CurvePoint::Infinity => return Err(Error::Domain("point at infinity".into())),
        CurvePoint::Affine { x, y } => (x, y),
    };
    if x.is_zero() {
        return Err(Error::Domain("X = 0 lies on the order-3 locus".into()));
    }
    let m36 = rat_int(&(36 * m.abs()));
    let den = Rational::from_integer(BigInt::from(6)) * x;
    let u = (&m36 + y) / &den;
    let v = (&m36 - y) / &den;
    Ok(signed_pair(m, u, v))
}

/// Clears denominators of `(u, v)`; `W > 0` and `gcd(U, V, W) = 1`.
pub fn lowest_form(u: &Rational, v: &Rational) -> CubicPoint {
    let w = u.denom().lcm(v.denom());
    let big_u = u.numer() * (&w / u.denom());
    let big_v = v.numer() * (&w / v.denom());
    CubicPoint { u: big_u, v: big_v, w }
}

/// `x(3Q)` on `Y^2 = X^3 - 432 m^2` as a rational function of `x(Q)`.
pub fn triplication_x(m: &BigInt, x: &Rational) -> Rational {
    let c = |v: i64| Rational::from_integer(BigInt::from(v));
    let m2 = rat_int(&(m * m));
    let m4 = &m2 * &m2;
    let m6 = &m4 * &m2;
    let x3 = x * x * x;
    let x6 = &x3 * &x3;
    let x9 = &x6 * &x3;
    let num = &x9 + c(512 * 81) * &x6 * &m2 + c(4096 * 2187) * &x3 * &m4
        - c(262_144 * 19_683) * &m6;
    let inner = &x3 - c(64 * 27) * &m2;
    let den = c(9) * x * x * &inner * &inner;
    num / den
}
