//! Index bounds: the largest `n` for which `A_n` (or `W_n`) could still lack a
//! primitive divisor, given a lower bound for the canonical height.

use num_bigint::BigInt;
use num_rational::Ratio;
use num_traits::ToPrimitive;
use serde::{Deserialize, Serialize};

use crate::arith::{self, factor_u64};
use crate::curves::{is_exceptional_class, Case, TwistCurve};
use crate::error::{Error, Result};
use crate::heights::{height_lower_bound, Branch, GUARD};

/// Lower bound for `f(n)` over all `n >= 2`.
pub const F_LOWER: f64 = 0.547;
/// Largest admissible relaxation bound.
pub const RELAXATION_CAP: u32 = 24;
/// Below this every `m` is checked by hand.
pub const SMALL_M: u64 = 40;
/// Exceptional `m` below this are checked by hand.
pub const EXCEPTIONAL_M: u64 = 290;
/// Cube-free `m <= 50` are all tabulated.
pub const TABULATED_M: u64 = 50;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Mode {
    /// Case II prime `n` uses `(mu, lambda) = (2, 0)`.
    PerCase,
    /// Case II prime `n` uses `(mu, lambda) = (3, 1)`.
    Strict,
    /// `u = 6`, `mu = 3`, `lambda = 2` throughout.
    WorstCase,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CaseConstants {
    pub u: u32,
    pub mu: u32,
    pub lambda: u32,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ArithFunctions {
    pub omega: u32,
    pub rho: u64,
    pub f: Ratio<i64>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Sequence {
    A,
    W,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BoundReport {
    pub m: u64,
    pub case: Case,
    pub sequence: Sequence,
    pub mode: Mode,
    pub branch: Branch,
    pub h_lower: f64,
    /// Largest `n` allowed by the inequality with `omega <= log n / log 2`,
    /// `rho <= n`, `f >= 0.547`.
    pub relaxation_bound: u32,
    pub relaxation_within_cap: bool,
    /// Largest composite `n` satisfying the inequality, 0 if none.
    pub composite_max: u32,
    /// Largest prime `n` satisfying the inequality, 0 if none.
    pub prime_max: u32,
    pub max_failing: u32,
    pub manual_check: bool,
}

pub fn case_constants(m: &BigInt, n_is_prime: bool, mode: Mode) -> Result<CaseConstants> {
    let case = Case::of(&TwistCurve::new_allow_small(m)?.m().clone());
    Ok(constants_for(case, n_is_prime, mode))
}

pub fn constants_for(case: Case, n_is_prime: bool, mode: Mode) -> CaseConstants {
    let c = |u, mu, lambda| CaseConstants { u, mu, lambda };
    if mode == Mode::WorstCase {
        return c(6, 3, 2);
    }
    match (case, n_is_prime) {
        (Case::I, false) => c(2, 1, 0),
        (Case::I, true) => c(2, 3, 1),
        (Case::II, false) => c(2, 0, 0),
        (Case::II, true) if mode == Mode::Strict => c(2, 3, 1),
        (Case::II, true) => c(2, 2, 0),
        (Case::III, false) => c(6, 1, 0),
        (Case::III, true) => c(6, 3, 2),
        (Case::IV, false) => c(6, 0, 0),
        (Case::IV, true) => c(6, 2, 2),
    }
}

pub fn arith_functions(n: u64) -> Result<ArithFunctions> {
    if n < 2 {
        return Err(Error::Validation(format!("n = {n} must be at least 2")));
    }
    let factors = factor_u64(n);
    let omega = factors.len() as u32;
    let rho = factors.iter().filter(|(q, _)| *q > 3).map(|(q, _)| q).product();
    let f = factors
        .iter()
        .fold(Ratio::from_integer(1i64), |acc, (q, _)| acc - Ratio::new(1, (q * q) as i64));
    Ok(ArithFunctions { omega, rho, f })
}

fn extra(seq: Sequence) -> f64 {
    match seq {
        Sequence::A => 0.0,
        Sequence::W => 1.0,
    }
}

fn constant_term(c: CaseConstants) -> f64 {
    let u2 = (c.u * c.u) as f64;
    c.mu as f64 * 2f64.ln() + (c.lambda as f64 + 2.0 / 3.0) * 3f64.ln() - u2.ln()
}

/// Both sides of the index inequality for a given `n`.
pub fn inequality_sides(seq: Sequence, log_m: f64, h: f64, n: u64, c: CaseConstants) -> Result<(f64, f64)> {
    let af = arith_functions(n)?;
    let f = af.f.to_f64().expect("finite");
    let nn = n as f64;
    let omega = af.omega as f64;
    let lhs = 2.0 * h * nn * nn * f / log_m;
    let u2 = (c.u * c.u) as f64;
    let rhs = extra(seq)
        + 4.0 / 3.0 * omega
        + ((af.rho as f64).ln() + omega * (27.0 * u2).ln() + constant_term(c)) / log_m;
    Ok((lhs, rhs))
}

fn relaxed_holds(seq: Sequence, log_m: f64, h: f64, n: u64, c: CaseConstants) -> bool {
    let nn = n as f64;
    let omega = nn.ln() / 2f64.ln();
    let u2 = (c.u * c.u) as f64;
    let lhs = 2.0 * h * nn * nn * F_LOWER / log_m;
    let rhs = extra(seq)
        + 4.0 / 3.0 * omega
        + (nn.ln() + omega * (27.0 * u2).ln() + constant_term(c)) / log_m;
    lhs <= rhs + GUARD
}

/// Last `n >= 2` where the relaxed inequality holds, taking the larger of
/// the composite and prime constants.
fn relaxation_bound(seq: Sequence, log_m: f64, h: f64, cs: &[CaseConstants]) -> u32 {
    // lhs - rhs is convex in n, so after the first stretch where the
    // inequality holds it fails for good.
    let mut last = 1;
    for n in 2..=100_000u64 {
        if cs.iter().any(|&c| relaxed_holds(seq, log_m, h, n, c)) {
            last = n as u32;
        } else if last > 1 {
            break;
        }
    }
    last
}

pub fn manual_check_needed(m: u64, branch: Branch) -> bool {
    m < SMALL_M || (branch == Branch::Notnice && m < EXCEPTIONAL_M)
}

/// Largest `n` for which the inequality does not exclude a failure.
pub fn max_failing_index(m: &BigInt, seq: Sequence, mode: Mode) -> Result<BoundReport> {
    let twist = TwistCurve::new_allow_small(m)?;
    let mu = twist.m().to_u64().ok_or_else(|| Error::Capacity(m.clone()))?;
    let case = Case::of(twist.m());
    let (h, branch) = height_lower_bound(twist.m())?;
    let mut report = BoundReport {
        m: mu,
        case,
        sequence: seq,
        mode,
        branch,
        h_lower: h,
        relaxation_bound: 0,
        relaxation_within_cap: false,
        composite_max: 0,
        prime_max: 0,
        max_failing: 0,
        manual_check: manual_check_needed(mu, branch),
    };
    if h <= 0.0 {
        report.manual_check = true;
        return Ok(report);
    }
    let log_m = arith::ln_abs(twist.m());
    let comp = constants_for(case, false, mode);
    let prime = constants_for(case, true, mode);
    let relax = relaxation_bound(seq, log_m, h, &[comp, prime]);
    report.relaxation_bound = relax;
    report.relaxation_within_cap = relax <= RELAXATION_CAP;
    for n in 2..=relax as u64 {
        let is_prime = arith::is_prime_u64(n);
        let c = if is_prime { prime } else { comp };
        let (lhs, rhs) = inequality_sides(seq, log_m, h, n, c)?;
        if lhs <= rhs + GUARD {
            if is_prime {
                report.prime_max = n as u32;
            } else {
                report.composite_max = n as u32;
            }
        }
    }
    report.max_failing = report.prime_max.max(report.composite_max);
    Ok(report)
}

pub fn max_failing_index_a(m: &BigInt, mode: Mode) -> Result<BoundReport> {
    max_failing_index(m, Sequence::A, mode)
}

pub fn max_failing_index_w(m: &BigInt, mode: Mode) -> Result<BoundReport> {
    max_failing_index(m, Sequence::W, mode)
}

/// Cube-free `m <= 50`, and exceptional cube-free `40 < m < limit`.
pub fn manual_check_set(limit: u64) -> Vec<u64> {
    (2..limit.max(TABULATED_M + 1))
        .filter(|&m| arith::is_cube_free(&BigInt::from(m)).unwrap_or(false))
        .filter(|&m| {
            m <= TABULATED_M || (m > SMALL_M && m < limit && is_exceptional_class(&BigInt::from(m)))
        })
        .collect()
}
