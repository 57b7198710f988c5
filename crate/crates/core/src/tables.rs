//! The published generator tables: CSV ingestion and row verification.

use std::str::FromStr;

use num_bigint::BigInt;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::arith::{int, Rational};
use crate::curves::{MordellCurve, TwistCurve};
use crate::error::{Error, Result};
use crate::heights::{canonical_height, HeightEstimate, DEFAULT_ITERATIONS};
use crate::points::CurvePoint;
use crate::sequences::{self, bigint_str, column};

pub const RANK_ONE_CSV: &str = include_str!("../data/rank_one.csv");
pub const RANK_TWO_CSV: &str = include_str!("../data/rank_two.csv");

pub const W_INDEX_LIMIT: u32 = 14;
pub const A_INDEX_LIMIT: u32 = 12;
/// Every rank-2 generator must have a canonical height above this.
pub const RANK2_HEIGHT_FLOOR: f64 = 0.1;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GeneratorRecord {
    /// 1-based line in the source file.
    pub line: u64,
    pub m: BigInt,
    pub point: CurvePoint,
    pub z_w: Option<u32>,
}

fn field<'a>(rec: &'a csv::StringRecord, i: usize, name: &str, line: u64) -> Result<&'a str> {
    rec.get(i)
        .map(str::trim)
        .ok_or_else(|| Error::Data(format!("line {line}: missing column {name}")))
}

fn parse_rational(s: &str, name: &str, line: u64) -> Result<Rational> {
    Rational::from_str(s).map_err(|_| Error::Data(format!("line {line}: {name} = {s:?} is not a rational")))
}

/// Parses `m,X,Y,zW` rows; `#` starts a comment line and `zW` may be empty.
pub fn parse_generators(text: &str) -> Result<Vec<GeneratorRecord>> {
    let mut reader = csv::ReaderBuilder::new().comment(Some(b'#')).trim(csv::Trim::All).from_reader(text.as_bytes());
    let headers = reader.headers().map_err(|e| Error::Data(e.to_string()))?.clone();
    let want = ["m", "X", "Y", "zW"];
    if headers.iter().collect::<Vec<_>>() != want {
        return Err(Error::Data(format!("header must be {}", want.join(","))));
    }
    let mut out = Vec::new();
    for rec in reader.records() {
        let rec = rec.map_err(|e| {
            let line = e.position().map(|p| p.line()).unwrap_or(0);
            Error::Data(format!("line {line}: {e}"))
        })?;
        let line = rec.position().map(|p| p.line()).unwrap_or(0);
        let m_str = field(&rec, 0, "m", line)?;
        let m = BigInt::from_str(m_str).map_err(|_| Error::Data(format!("line {line}: m = {m_str:?} is not an integer")))?;
        let x = parse_rational(field(&rec, 1, "X", line)?, "X", line)?;
        let y = parse_rational(field(&rec, 2, "Y", line)?, "Y", line)?;
        let z = field(&rec, 3, "zW", line)?;
        let z_w = if z.is_empty() {
            None
        } else {
            Some(z.parse().map_err(|_| Error::Data(format!("line {line}: zW = {z:?} is not a count")))?)
        };
        out.push(GeneratorRecord { line, m, point: CurvePoint::affine(x, y), z_w });
    }
    Ok(out)
}

/// The printed failing set of the `A`-sequence for a rank-1 generator.
pub fn expected_a_failing(m: &BigInt) -> Vec<u32> {
    if *m == int(7) {
        vec![2]
    } else {
        Vec::new()
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RankOneRow {
    pub line: u64,
    #[serde(with = "bigint_str")]
    pub m: BigInt,
    pub point: String,
    pub expected_z_w: Option<u32>,
    pub w_failing: Vec<u32>,
    pub w_pass: bool,
    pub a_failing: Vec<u32>,
    pub a_expected: Vec<u32>,
    pub a_pass: bool,
    pub error: Option<String>,
}

impl RankOneRow {
    pub fn pass(&self) -> bool {
        self.error.is_none() && self.w_pass && self.a_pass
    }
}

fn check_generator(rec: &GeneratorRecord) -> Result<()> {
    TwistCurve::new_allow_small(&rec.m)?;
    let e = MordellCurve::new_allow_small(&rec.m)?.model();
    e.check(&rec.point)?;
    if e.is_torsion(&rec.point) {
        return Err(Error::Torsion);
    }
    Ok(())
}

pub fn verify_rank_one_row(rec: &GeneratorRecord, n_w: u32, n_a: u32) -> RankOneRow {
    let mut row = RankOneRow {
        line: rec.line,
        m: rec.m.clone(),
        point: rec.point.to_string(),
        expected_z_w: rec.z_w,
        w_failing: Vec::new(),
        w_pass: false,
        a_failing: Vec::new(),
        a_expected: expected_a_failing(&rec.m),
        a_pass: false,
        error: None,
    };
    let run = |row: &mut RankOneRow| -> Result<()> {
        check_generator(rec)?;
        let z = rec.z_w.ok_or_else(|| Error::Data(format!("line {}: zW is empty", rec.line)))?;
        let n = n_w.max(n_a);
        let mordell = sequences::mordell_terms(&rec.m, &rec.point, n)?;
        let cubic: Vec<_> = mordell.iter().map(|t| sequences::cubic_from_mordell(&rec.m, t)).collect::<Result<_>>()?;
        let w = sequences::zsigmondy_report("W", &column(&cubic, |t| &t.w), n_w as usize)?;
        let a = sequences::zsigmondy_report("A", &column(&mordell, |t| &t.a), n_a as usize)?;
        row.w_pass = w.bound == z;
        row.w_failing = w.failing;
        row.a_pass = a.failing == row.a_expected;
        row.a_failing = a.failing;
        Ok(())
    };
    if let Err(e) = run(&mut row) {
        row.error = Some(e.to_string());
    }
    row
}

/// One report per record, in input order.
pub fn verify_rank_one(records: &[GeneratorRecord], n_w: u32, n_a: u32) -> Vec<RankOneRow> {
    records.par_iter().map(|r| verify_rank_one_row(r, n_w, n_a)).collect()
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RankTwoRow {
    pub line: u64,
    #[serde(with = "bigint_str")]
    pub m: BigInt,
    pub point: String,
    pub on_curve: bool,
    pub non_torsion: bool,
    pub height: Option<HeightEstimate>,
    pub height_pass: bool,
    pub error: Option<String>,
}

impl RankTwoRow {
    pub fn pass(&self) -> bool {
        self.error.is_none() && self.on_curve && self.non_torsion && self.height_pass
    }
}

pub fn verify_rank_two_row(rec: &GeneratorRecord) -> RankTwoRow {
    let mut row = RankTwoRow {
        line: rec.line,
        m: rec.m.clone(),
        point: rec.point.to_string(),
        on_curve: false,
        non_torsion: false,
        height: None,
        height_pass: false,
        error: None,
    };
    let run = |row: &mut RankTwoRow| -> Result<()> {
        let e = MordellCurve::new_allow_small(&rec.m)?.model();
        row.on_curve = e.contains(&rec.point);
        if !row.on_curve {
            return Err(Error::OffCurve(format!("{} on Y^2 = X^3 - 432*{}^2", rec.point, rec.m)));
        }
        row.non_torsion = !e.is_torsion(&rec.point);
        if !row.non_torsion {
            return Err(Error::Torsion);
        }
        let h = canonical_height(&rec.m, &rec.point, DEFAULT_ITERATIONS)?;
        row.height_pass = h.value - h.error_bound > RANK2_HEIGHT_FLOOR;
        row.height = Some(h);
        Ok(())
    };
    if let Err(e) = run(&mut row) {
        row.error = Some(e.to_string());
    }
    row
}

pub fn verify_rank_two(records: &[GeneratorRecord]) -> Vec<RankTwoRow> {
    records.par_iter().map(verify_rank_two_row).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn embedded_tables_parse() {
        let f1 = parse_generators(RANK_ONE_CSV).unwrap();
        assert_eq!(f1.len(), 32);
        assert_eq!(f1[0].line, 3);
        assert_eq!(f1.iter().find(|r| r.m == int(42)).unwrap().line, 19);
        assert_eq!(f1[8].point, CurvePoint::affine(Rational::new(int(553), int(9)), Rational::new(int(4085), int(27))));
        let f2 = parse_generators(RANK_TWO_CSV).unwrap();
        assert_eq!(f2.len(), 16);
        assert!(f2.iter().all(|r| r.z_w.is_none()));
    }

    #[test]
    fn malformed_rows_name_the_line() {
        let bad = "m,X,Y,zW\n# c\n6,28,80,0\n7,8x,756,1\n";
        let err = parse_generators(bad).unwrap_err().to_string();
        assert!(err.contains("line 4"), "{err}");
        let short = "m,X,Y,zW\n6,28\n";
        assert!(matches!(parse_generators(short), Err(Error::Data(_))));
        assert!(matches!(parse_generators("a,b\n1,2\n"), Err(Error::Data(_))));
    }

    #[test]
    fn sample_rows() {
        let f1 = parse_generators(RANK_ONE_CSV).unwrap();
        for m in [6, 7, 22] {
            let rec = f1.iter().find(|r| r.m == int(m)).unwrap();
            let row = verify_rank_one_row(rec, W_INDEX_LIMIT, A_INDEX_LIMIT);
            assert!(row.pass(), "{row:?}");
        }
    }

    #[test]
    fn tampered_rank2_row_fails() {
        let recs = parse_generators("m,X,Y,zW\n19,156,1909,\n").unwrap();
        let row = verify_rank_two_row(&recs[0]);
        assert!(!row.pass() && !row.on_curve);
        assert!(row.error.unwrap().contains("not on the curve"));
    }
}
