//! Closed-form bounds on birational invariants of general hypersurfaces and
//! the dimension counts behind them. Square roots are handled with integer
//! arithmetic only.

use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::grobner::binomial;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum InvariantError {
    #[error("hypothesis unmet: {0}")]
    Hypothesis(String),
    #[error("out of range: {0}")]
    Range(String),
}

fn require(ok: bool, permissive: bool, what: impl FnOnce() -> String) -> Result<(), InvariantError> {
    if ok || permissive {
        Ok(())
    } else {
        Err(InvariantError::Hypothesis(what()))
    }
}

/// Largest integer `k` with `k*b - a <= sqrt(m)`, i.e. `floor((sqrt(m) + a) / b)`.
pub fn floor_sqrt_ratio(m: u64, a: i64, b: i64) -> i64 {
    assert!(b > 0);
    let s = m.isqrt() as i64;
    let fits = |k: i64| {
        let t = k * b - a;
        t <= 0 || (t as i128) * (t as i128) <= m as i128
    };
    let mut k = (s + a).div_euclid(b);
    while fits(k + 1) {
        k += 1;
    }
    while !fits(k) {
        k -= 1;
    }
    k
}

/// Expected projective dimension `n + 2 - h` of the cone `V^h_p`.
pub fn expected_cone_dim(n: u32, h: u32) -> Result<i64, InvariantError> {
    if h < 2 || h > n + 1 {
        return Err(InvariantError::Range(format!("h = {h} outside 2..={}", n + 1)));
    }
    Ok(n as i64 + 2 - h as i64)
}

/// `(lower, exact)` for `irr_k`.
pub fn irr_bounds(n: u32, d: u32, k: u32, permissive: bool) -> Result<(i64, Option<i64>), InvariantError> {
    if k < 1 || k > n {
        return Err(InvariantError::Range(format!("k = {k} outside 1..={n}")));
    }
    require(n >= 3, permissive, || format!("n = {n} < 3"))?;
    require(d >= 2 * n + 2, permissive, || format!("d = {d} < 2n + 2 = {}", 2 * n + 2))?;
    let lower = d as i64 - 1 - n as i64 + k as i64;
    Ok((lower, (k + 2 >= n).then_some(lower)))
}

pub fn covgon_bounds(n: u32, d: u32, permissive: bool) -> Result<(i64, i64), InvariantError> {
    require(n >= 2, permissive, || format!("n = {n} < 2"))?;
    require(d >= 2 * n + 2, permissive, || format!("d = {d} < 2n + 2 = {}", 2 * n + 2))?;
    let n64 = n as u64;
    let lower = d as i64 - floor_sqrt_ratio(16 * n64 + 9, -1, 2);
    let upper = d as i64 - floor_sqrt_ratio(16 * n64 + 1, -1, 2);
    Ok((lower, upper))
}

pub fn conngon_bounds(n: u32, d: u32, permissive: bool) -> Result<(i64, i64, Option<i64>), InvariantError> {
    require(n >= 4, permissive, || format!("n = {n} < 4"))?;
    require(d >= 2 * n + 2, permissive, || format!("d = {d} < 2n + 2 = {}", 2 * n + 2))?;
    let (lo, hi) = conngon_offsets(n);
    let lower = d as i64 - lo;
    let upper = d as i64 - hi;
    Ok((lower, upper, (lower == upper).then_some(lower)))
}

/// Offsets `(a, b)` with `d - a <= conngon <= d - b`.
fn conngon_offsets(n: u32) -> (i64, i64) {
    let n = n as u64;
    (floor_sqrt_ratio(16 * n + 25, -3, 2), floor_sqrt_ratio(8 * n + 1, 1, 2))
}

/// Largest `h` for which `Λ^h_p` is Fano.
pub fn fano_max_h(n: u32) -> u32 {
    floor_sqrt_ratio(8 * n as u64 + 1, 1, 2) as u32
}

/// `max { h : h(h-1)/2 <= n }` by direct search.
pub fn fano_max_h_by_search(n: u32) -> u32 {
    let n = n as u64;
    let mut h = 1u64;
    while (h + 1) * h / 2 <= n {
        h += 1;
    }
    h as u32
}

/// Twist `t` with `K = O(t)` on `Λ^h_p`.
pub fn lambda_canonical_twist(n: u32, h: u32) -> Result<i64, InvariantError> {
    if h < 3 {
        return Err(InvariantError::Range(format!("h = {h} < 3")));
    }
    let h = h as i64;
    Ok(h * (h - 1) / 2 - 1 - n as i64)
}

const FAMILIES: [(u64, u64); 6] = [(3, 0), (5, 0), (5, 1), (7, 2), (9, 4), (11, 6)];

/// Membership in the six quadratic families `4a^2 + c a + e`.
pub fn exceptional_n(n: u32) -> bool {
    let n = n as u64;
    (0u64..)
        .take_while(|a| 4 * a * a <= n)
        .any(|a| FAMILIES.iter().any(|&(c, e)| 4 * a * a + c * a + e == n))
}

/// Whether the two conngon bounds coincide at `n`.
pub fn conngon_floors_coincide(n: u32) -> bool {
    let n = n as u64;
    floor_sqrt_ratio(16 * n + 1, -1, 2) == floor_sqrt_ratio(16 * n + 25, -3, 2)
}

/// Lower bound on the dimension of a covering or connecting family of
/// `k`-dimensional subvarieties.
pub fn family_dim_lower_bound(n: u32, k: u32, connecting: bool) -> Result<i64, InvariantError> {
    if k < 1 || k > n {
        return Err(InvariantError::Range(format!("k = {k} outside 1..={n}")));
    }
    let gap = n as i64 - k as i64;
    Ok(if connecting { 2 * gap } else { gap })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ModuliDims {
    pub n: u32,
    pub d: u32,
    pub h: u32,
    pub dim_l: i128,
    pub dim_v: i128,
    pub dim_z_tangency: i128,
    pub dim_j: i128,
    pub fiber_f: i128,
    pub dim_w: i128,
    pub dim_box: i128,
    pub dim_box_f: i128,
    pub big_n: i128,
}

/// `C(n+h, h) + ... + C(n+d, d)` summed term by term.
pub fn fiber_f_sum(n: u32, d: u32, h: u32) -> i128 {
    (h..=d).map(|k| binomial((n + k) as i64, k as i64)).sum()
}

pub fn moduli_dimensions(n: u32, d: u32, h: u32, permissive: bool) -> Result<ModuliDims, InvariantError> {
    if h < 1 || h > d {
        return Err(InvariantError::Range(format!("h = {h} outside 1..={d}")));
    }
    require(h >= 2 && h <= (n + 1).min(d), permissive, || {
        format!("h = {h} outside 2..={}", (n + 1).min(d))
    })?;
    let (n_, d_, h_) = (n as i64, d as i64, h as i64);
    let c = binomial;
    let ni = n as i128;
    let dim_l = c(d_ + n_ + 1, n_ + 1) - 1;
    let dim_v = 2 * ni + c(d_ + n_, n_) - c(n_ + 2, 2);
    let dim_z_tangency = 2 * ni + c(d_ + n_ + 1, n_ + 1) - c(n_ + 2, 2);
    let dim_j = c(n_ + 1 + d_, d_) + ni;
    let fiber_f = c(n_ + d_ + 1, d_) - c(n_ + h_, h_ - 1);
    let dim_w = c(n_ + h_, h_ - 1) + ni;
    let big_n = c(d_ + n_ + 1, d_) - 1;
    let dim_box = 3 * ni + 3 + big_n - 2 * h as i128;
    let dim_box_f = 3 * ni + 2 - 2 * h as i128;
    Ok(ModuliDims {
        n,
        d,
        h,
        dim_l,
        dim_v,
        dim_z_tangency,
        dim_j,
        fiber_f,
        dim_w,
        dim_box,
        dim_box_f,
        big_n,
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct IrrEntry {
    pub k: u32,
    pub lower: i64,
    pub exact: Option<i64>,
}

/// Every bound available for `(n, d)`. Entries whose theorem does not apply
/// are `None` unless the report was built permissively.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BoundReport {
    pub n: u32,
    pub d: u32,
    pub hypotheses_met: bool,
    pub covgon_lower: Option<i64>,
    pub covgon_upper: Option<i64>,
    pub conngon_lower: Option<i64>,
    pub conngon_upper: Option<i64>,
    pub conngon_exact: Option<i64>,
    pub irr_k: Vec<IrrEntry>,
    pub fano_max_h: Option<u32>,
    pub exceptional_n: bool,
    pub notes: Vec<String>,
}

impl BoundReport {
    pub fn new(n: u32, d: u32, permissive: bool) -> Self {
        let mut notes = Vec::new();
        let mut note = |e: &InvariantError| {
            let s = e.to_string();
            if !notes.contains(&s) {
                notes.push(s);
            }
        };
        let strict_ok = d >= 2 * n + 2 && n >= 4;
        let cov = covgon_bounds(n, d, false).or_else(|e| {
            note(&e);
            if permissive { covgon_bounds(n, d, true) } else { Err(e) }
        });
        let conn = conngon_bounds(n, d, false).or_else(|e| {
            note(&e);
            if permissive { conngon_bounds(n, d, true) } else { Err(e) }
        });
        let irr_k = (1..=n)
            .filter_map(|k| {
                let r = irr_bounds(n, d, k, false).or_else(|e| {
                    note(&e);
                    if permissive { irr_bounds(n, d, k, true) } else { Err(e) }
                });
                r.ok().map(|(lower, exact)| IrrEntry { k, lower, exact })
            })
            .collect();
        if !notes.is_empty() && permissive {
            notes.push("formula value, hypothesis unmet".into());
        }
        BoundReport {
            n,
            d,
            hypotheses_met: strict_ok,
            covgon_lower: cov.as_ref().ok().map(|b| b.0),
            covgon_upper: cov.as_ref().ok().map(|b| b.1),
            conngon_lower: conn.as_ref().ok().map(|b| b.0),
            conngon_upper: conn.as_ref().ok().map(|b| b.1),
            conngon_exact: conn.as_ref().ok().and_then(|b| b.2),
            irr_k,
            fano_max_h: (n >= 2).then(|| fano_max_h(n)),
            exceptional_n: n >= 4 && exceptional_n(n),
            notes,
        }
    }
}

/// `d - offset`, written symbolically.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct DMinus(pub i64);

impl DMinus {
    pub fn at(self, d: i64) -> i64 {
        d - self.0
    }
}

impl fmt::Display for DMinus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.0 {
            0 => write!(f, "d"),
            k if k > 0 => write!(f, "d-{k}"),
            k => write!(f, "d+{}", -k),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RowStatus {
    /// Classical value for small `n`, outside the range of the general bounds.
    Known,
    Exact,
    Interval,
}

impl fmt::Display for RowStatus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            RowStatus::Known => "known",
            RowStatus::Exact => "exact",
            RowStatus::Interval => "interval",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TableRow {
    pub n: u32,
    pub status: RowStatus,
    pub lower: DMinus,
    pub upper: DMinus,
    pub conngon: Option<DMinus>,
}

/// Connecting gonality of a general hypersurface as a function of `d`, for
/// each `n` in the range.
pub fn conngon_table(n_min: u32, n_max: u32) -> Result<Vec<TableRow>, InvariantError> {
    if n_min < 1 || n_min > n_max {
        return Err(InvariantError::Range(format!("bad range {n_min}..={n_max}")));
    }
    Ok((n_min..=n_max)
        .map(|n| {
            let known = match n {
                1 => Some(1),
                2 | 3 => Some(2),
                _ => None,
            };
            match known {
                Some(k) => TableRow {
                    n,
                    status: RowStatus::Known,
                    lower: DMinus(k),
                    upper: DMinus(k),
                    conngon: Some(DMinus(k)),
                },
                None => {
                    let (lo, hi) = conngon_offsets(n);
                    let exact = lo == hi;
                    TableRow {
                        n,
                        status: if exact { RowStatus::Exact } else { RowStatus::Interval },
                        lower: DMinus(lo),
                        upper: DMinus(hi),
                        conngon: exact.then_some(DMinus(lo)),
                    }
                }
            }
        })
        .collect())
}

pub const TABLE_CSV_HEADER: &str = "n,status,lower,upper,conngon";

pub fn table_csv(rows: &[TableRow]) -> String {
    let mut out = String::from(TABLE_CSV_HEADER);
    out.push('\n');
    for r in rows {
        let exact = r.conngon.map(|c| c.to_string()).unwrap_or_default();
        out.push_str(&format!("{},{},{},{},{}\n", r.n, r.status, r.lower, r.upper, exact));
    }
    out
}
