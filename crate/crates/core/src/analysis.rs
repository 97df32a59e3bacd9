//! Sieve-of-Eratosthenes fine structure of the coefficients: level and
//! sublevel classification, band statistics with separation verdicts,
//! precision-floor flagging, and plot-data export.

use std::io::Write;
use std::path::Path;

use crate::error::{Error, Result};
use crate::numerics::BigReal;
use crate::solver::DeltaTable;

/// Smallest prime factor of n.
pub fn level_classify(n: u64) -> u64 {
    assert!(n >= 2);
    let mut p = 2;
    while p * p <= n {
        if n.is_multiple_of(p) {
            return p;
        }
        p += 1;
    }
    n
}

pub fn is_prime(n: u64) -> bool {
    n >= 2 && level_classify(n) == n
}

fn primes_up_to(bound: u64) -> Vec<u64> {
    if bound < 2 {
        return Vec::new();
    }
    let mut sieve = vec![true; bound as usize + 1];
    let mut out = Vec::new();
    for p in 2..=bound as usize {
        if sieve[p] {
            out.push(p as u64);
            let mut q = p * p;
            while q <= bound as usize {
                sieve[q] = false;
                q += p;
            }
        }
    }
    out
}

fn prime_exponent(d: u64, p: u64) -> u32 {
    let mut d = d;
    let mut k = 0;
    while d.is_multiple_of(p) {
        d /= p;
        k += 1;
    }
    k
}

/// All primes up to `bound`, ascending by the key p^(k_p + 1) where k_p is
/// the exponent of p in d. Primes not dividing d keep their natural order;
/// primes dividing d are pushed back by their extra powers.
pub fn sublevel_order(d: u64, bound: u64) -> Vec<u64> {
    assert!(d >= 1);
    let mut keyed: Vec<(u128, u64)> = primes_up_to(bound)
        .into_iter()
        .map(|p| {
            let k = prime_exponent(d, p);
            ((p as u128).pow(k + 1), p)
        })
        .collect();
    keyed.sort();
    keyed.into_iter().map(|(_, p)| p).collect()
}

/// First prime in the d-ordering dividing m, or None when m shares no prime
/// up to the bound with the progression (the "coprime" class).
pub fn sublevel_classify(m: u64, d: u64, bound: u64) -> Option<u64> {
    assert!(m >= 2);
    sublevel_order(d, bound).into_iter().find(|p| m.is_multiple_of(*p))
}

/// One dot of the level scatter: height log10|delta_n - 1|.
#[derive(Debug, Clone)]
pub struct LevelPoint {
    pub n: u64,
    /// None when delta_n is exactly 1 (height minus infinity).
    pub height: Option<BigReal>,
    pub level: u64,
    pub is_prime_n: bool,
    /// |delta_n - 1| below the table's correct-digit budget.
    pub floored: bool,
}

/// One dot of the sublevel scatter for the progression d, 2d, ...:
/// height log10|delta_{m d} - delta_d|.
#[derive(Debug, Clone)]
pub struct SublevelPoint {
    pub d: u64,
    pub m: u64,
    pub height: Option<BigReal>,
    /// None for the coprime class.
    pub sublevel: Option<u64>,
    pub floored: bool,
}

fn height_of(diff: &BigReal, floor: &BigReal) -> (Option<BigReal>, bool) {
    let a = diff.abs();
    if a.is_zero() {
        return (None, true);
    }
    let floored = &a < floor;
    (Some(a.log10()), floored)
}

/// Scatter data for n = 2..n_max with precision-floor flags from the table's
/// accuracy estimate.
pub fn level_table(t: &DeltaTable, n_max: u64) -> Result<Vec<LevelPoint>> {
    let est = t.est_digits.ok_or(Error::MissingAccuracyEstimate)?;
    if n_max < 2 || n_max > t.n as u64 {
        return Err(Error::InvalidArgument(format!(
            "n_max {n_max} outside 2..={}",
            t.n
        )));
    }
    let ctx = t.context;
    let floor = ctx.ten_pow(-(est as i64));
    let one = ctx.one();
    let mut out = Vec::with_capacity(n_max as usize - 1);
    for n in 2..=n_max {
        let diff = t.coeff(n as usize) - &one;
        let (height, floored) = height_of(&diff, &floor);
        let level = level_classify(n);
        out.push(LevelPoint {
            n,
            height,
            level,
            is_prime_n: level == n,
            floored,
        });
    }
    Ok(out)
}

/// Scatter data for the sublevel split of the progression d, 2d, ... within
/// the same table.
pub fn sublevel_table(t: &DeltaTable, d: u64, n_max: u64) -> Result<Vec<SublevelPoint>> {
    let est = t.est_digits.ok_or(Error::MissingAccuracyEstimate)?;
    if d < 2 || n_max > t.n as u64 || 2 * d > n_max {
        return Err(Error::InvalidArgument(format!(
            "sublevel base {d} with n_max {n_max} leaves no multiples in the table"
        )));
    }
    let ctx = t.context;
    let floor = ctx.ten_pow(-(est as i64));
    let base = t.coeff(d as usize).clone();
    let order = sublevel_order(d, n_max);
    let mut out = Vec::new();
    let mut m = 2;
    while m * d <= n_max {
        let diff = t.coeff((m * d) as usize) - &base;
        let (height, floored) = height_of(&diff, &floor);
        let sublevel = order.iter().copied().find(|p| m % p == 0);
        out.push(SublevelPoint {
            d,
            m,
            height,
            sublevel,
            floored,
        });
        m += 1;
    }
    Ok(out)
}

/// Height statistics of one level over a window.
#[derive(Debug, Clone)]
pub struct BandSummary {
    pub level: u64,
    pub count: usize,
    pub min: f64,
    pub mean: f64,
    pub max: f64,
}

/// Per-level summaries plus pairwise separation verdicts for adjacent bands.
#[derive(Debug, Clone)]
pub struct BandReport {
    pub bands: Vec<BandSummary>,
    /// (p, p', separated): consecutive level pairs, p < p'; separated when
    /// the minimum of band p exceeds the maximum of band p'.
    pub separations: Vec<(u64, u64, bool)>,
    pub excluded_floored: usize,
    pub excluded_prime: usize,
}

impl BandReport {
    pub fn band(&self, level: u64) -> Option<&BandSummary> {
        self.bands.iter().find(|b| b.level == level)
    }

    pub fn separated(&self, p: u64, q: u64) -> Option<bool> {
        self.separations
            .iter()
            .find(|(a, b, _)| *a == p && *b == q)
            .map(|(_, _, s)| *s)
    }
}

/// Band statistics over points with n <= n_window. Floored points are always
/// excluded; prime-n points are excluded unless `include_primes`.
pub fn band_report(points: &[LevelPoint], n_window: u64, include_primes: bool) -> Result<BandReport> {
    let mut excluded_floored = 0;
    let mut excluded_prime = 0;
    let mut kept: Vec<&LevelPoint> = Vec::new();
    for p in points.iter().filter(|p| p.n <= n_window) {
        if p.floored {
            excluded_floored += 1;
        } else if p.is_prime_n && !include_primes {
            excluded_prime += 1;
        } else {
            kept.push(p);
        }
    }
    if kept.is_empty() {
        return Err(Error::EmptyWindow { window: n_window });
    }
    let mut levels: Vec<u64> = kept.iter().map(|p| p.level).collect();
    levels.sort_unstable();
    levels.dedup();
    let mut bands = Vec::with_capacity(levels.len());
    for &level in &levels {
        let hs: Vec<f64> = kept
            .iter()
            .filter(|p| p.level == level)
            .map(|p| p.height.as_ref().unwrap().to_f64())
            .collect();
        let min = hs.iter().copied().fold(f64::INFINITY, f64::min);
        let max = hs.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        let mean = hs.iter().sum::<f64>() / hs.len() as f64;
        bands.push(BandSummary {
            level,
            count: hs.len(),
            min,
            mean,
            max,
        });
    }
    let separations = bands
        .windows(2)
        .map(|w| (w[0].level, w[1].level, w[0].min > w[1].max))
        .collect();
    Ok(BandReport {
        bands,
        separations,
        excluded_floored,
        excluded_prime,
    })
}

fn fmt_height(h: &Option<BigReal>) -> String {
    match h {
        Some(v) => v.to_decimal_string_digits(8),
        None => String::new(),
    }
}

/// CSV columns: n, height, level, is_prime_n, floored. Heights carry 8
/// significant digits; flags are 0/1; floored-to-minus-infinity heights are
/// empty fields.
pub fn write_level_csv(w: &mut impl Write, points: &[LevelPoint]) -> std::io::Result<()> {
    writeln!(w, "n,height,level,is_prime_n,floored")?;
    for p in points {
        writeln!(
            w,
            "{},{},{},{},{}",
            p.n,
            fmt_height(&p.height),
            p.level,
            p.is_prime_n as u8,
            p.floored as u8
        )?;
    }
    Ok(())
}

/// CSV columns: d, m, n, height, sublevel, floored; sublevel empty for the
/// coprime class.
pub fn write_sublevel_csv(w: &mut impl Write, points: &[SublevelPoint]) -> std::io::Result<()> {
    writeln!(w, "d,m,n,height,sublevel,floored")?;
    for p in points {
        let sub = p.sublevel.map(|v| v.to_string()).unwrap_or_default();
        writeln!(
            w,
            "{},{},{},{},{},{}",
            p.d,
            p.m,
            p.d * p.m,
            fmt_height(&p.height),
            sub,
            p.floored as u8
        )?;
    }
    Ok(())
}

/// Write the level CSV to `csv_path` and a companion Python scatter script
/// next to it, referencing the CSV by file name only.
pub fn export_plot_data(points: &[LevelPoint], csv_path: &Path) -> Result<()> {
    let f = std::fs::File::create(csv_path).map_err(|e| Error::io(csv_path, e))?;
    let mut w = std::io::BufWriter::new(f);
    write_level_csv(&mut w, points).map_err(|e| Error::io(csv_path, e))?;
    w.flush().map_err(|e| Error::io(csv_path, e))?;
    write_plot_script(csv_path, "n", "level")
}

/// Sublevel variant of `export_plot_data`.
pub fn export_sublevel_plot_data(points: &[SublevelPoint], csv_path: &Path) -> Result<()> {
    let f = std::fs::File::create(csv_path).map_err(|e| Error::io(csv_path, e))?;
    let mut w = std::io::BufWriter::new(f);
    write_sublevel_csv(&mut w, points).map_err(|e| Error::io(csv_path, e))?;
    w.flush().map_err(|e| Error::io(csv_path, e))?;
    write_plot_script(csv_path, "m", "sublevel")
}

fn write_plot_script(csv_path: &Path, x_col: &str, class_col: &str) -> Result<()> {
    let csv_name = csv_path
        .file_name()
        .and_then(|n| n.to_str())
        .unwrap_or("points.csv");
    let script_path = csv_path.with_extension("py");
    let script = format!(
        r#"#!/usr/bin/env python3
"""Scatter the height column of {csv} against {x}, colored by {class_}."""
import csv
import matplotlib.pyplot as plt

xs, ys, cs = [], [], []
with open("{csv}") as f:
    for row in csv.DictReader(f):
        if not row["height"] or row["floored"] == "1":
            continue
        xs.append(int(row["{x}"]))
        ys.append(float(row["height"]))
        cs.append(row["{class_}"] or "coprime")

labels = sorted(set(cs), key=str)
for lab in labels:
    pts = [(x, y) for x, y, c in zip(xs, ys, cs) if c == lab]
    plt.scatter([p[0] for p in pts], [p[1] for p in pts], s=8, label=str(lab))
plt.xlabel("{x}")
plt.ylabel("log10 height")
plt.legend(title="{class_}")
plt.tight_layout()
plt.savefig("{csv}.png", dpi=150)
"#,
        csv = csv_name,
        x = x_col,
        class_ = class_col,
    );
    std::fs::write(&script_path, script).map_err(|e| Error::io(&script_path, e))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::PrecisionContext;

    #[test]
    fn level_classify_examples() {
        assert_eq!(level_classify(12), 2);
        assert_eq!(level_classify(35), 5);
        assert_eq!(level_classify(289), 17);
        assert_eq!(level_classify(2), 2);
        assert_eq!(level_classify(97), 97);
    }

    #[test]
    fn level_divides_and_is_minimal() {
        for n in 2..500u64 {
            let p = level_classify(n);
            assert_eq!(n % p, 0);
            assert!(is_prime(p));
            for q in 2..p {
                assert_ne!(n % q, 0, "smaller factor {q} of {n}");
            }
        }
    }

    #[test]
    fn sublevel_order_d3() {
        assert_eq!(sublevel_order(3, 13), vec![2, 5, 7, 3, 11, 13]);
    }

    #[test]
    fn sublevel_order_d2() {
        assert_eq!(sublevel_order(2, 7), vec![3, 2, 5, 7]);
    }

    #[test]
    fn sublevel_order_d1_is_plain_primes() {
        assert_eq!(sublevel_order(1, 11), vec![2, 3, 5, 7, 11]);
    }

    #[test]
    fn sublevel_order_nondividing_primes_stay_ascending() {
        for d in [2u64, 3, 12, 30, 49] {
            let order = sublevel_order(d, 50);
            let rest: Vec<u64> = order.iter().copied().filter(|p| d % p != 0).collect();
            let mut sorted = rest.clone();
            sorted.sort_unstable();
            assert_eq!(rest, sorted, "d = {d}");
        }
    }

    #[test]
    fn sublevel_classify_examples() {
        assert_eq!(sublevel_classify(10, 3, 50), Some(2));
        assert_eq!(sublevel_classify(15, 3, 50), Some(5));
        assert_eq!(sublevel_classify(49, 3, 50), Some(7));
        assert_eq!(sublevel_classify(9, 3, 50), Some(3));
    }

    fn table_from_f64(values: &[f64]) -> DeltaTable {
        let ctx = PrecisionContext::from_digits(40);
        let mut coeffs = vec![ctx.one()];
        coeffs.extend(values.iter().map(|&v| ctx.from_f64(v)));
        let mut t = DeltaTable::from_coeffs(coeffs).unwrap();
        t.est_digits = Some(20);
        t
    }

    #[test]
    fn level_table_heights_and_floors() {
        // delta_2 = -1 (height log10 2), delta_3 = 1 + 1e-30 (floored),
        // delta_4 = 1 exactly (minus-infinity floor), delta_5, delta_6 plain
        let ctx = PrecisionContext::from_digits(40);
        let mut t = table_from_f64(&[-1.0, 0.0, 0.0, 0.5, -0.9, 1.4]);
        {
            let small = &ctx.one() + &ctx.ten_pow(-30);
            let mut coeffs = t.coeffs().to_vec();
            coeffs[2] = small;
            coeffs[3] = ctx.one();
            t = DeltaTable::from_coeffs(coeffs).unwrap();
            t.est_digits = Some(20);
        }
        let pts = level_table(&t, 6).unwrap();
        assert_eq!(pts.len(), 5);
        let p2 = &pts[0];
        assert!((p2.height.as_ref().unwrap().to_f64() - 2f64.log10()).abs() < 1e-12);
        assert!(!p2.floored);
        let p3 = &pts[1];
        assert!(p3.floored, "1e-30 below the 20-digit budget");
        assert!(p3.height.is_some());
        let p4 = &pts[2];
        assert!(p4.floored && p4.height.is_none(), "exact 1 is a floor point");
        assert!(pts[3].is_prime_n && pts[3].level == 5);
        assert!(!pts[4].is_prime_n && pts[4].level == 2);
    }

    #[test]
    fn level_table_requires_estimate() {
        let ctx = PrecisionContext::from_digits(40);
        let t = DeltaTable::from_coeffs(vec![ctx.one(), ctx.from_f64(-1.0), ctx.from_f64(1.1)])
            .unwrap();
        assert!(matches!(
            level_table(&t, 3),
            Err(Error::MissingAccuracyEstimate)
        ));
    }

    #[test]
    fn band_report_ordering_and_separation() {
        // levels: 2 at -1-ish, 3 at -5-ish, separated
        let t = table_from_f64(&[
            0.9, // n=2, h = -1
            0.99999, // n=3, h = -5
            0.92, // n=4
            2.0, // n=5 prime, excluded by default
            0.95, // n=6
            1.5, // n=7 prime
            0.91, // n=8
            1.00002, // n=9, level 3
        ]);
        let pts = level_table(&t, 9).unwrap();
        let report = band_report(&pts, 9, false).unwrap();
        assert_eq!(report.excluded_prime, 4); // n = 2, 3, 5, 7
        let b2 = report.band(2).unwrap();
        let b3 = report.band(3).unwrap();
        assert_eq!(b2.count, 3); // n = 4, 6, 8
        assert_eq!(b3.count, 1);
        assert!(b2.mean > b3.mean);
        assert_eq!(report.separated(2, 3), Some(true));
    }

    #[test]
    fn band_report_include_primes_switch() {
        let t = table_from_f64(&[0.9, 0.8, 0.91, 0.7]);
        let pts = level_table(&t, 5).unwrap();
        let without = band_report(&pts, 5, false).unwrap();
        let with = band_report(&pts, 5, true).unwrap();
        assert_eq!(without.excluded_prime, 3); // n = 2, 3, 5
        assert_eq!(with.excluded_prime, 0);
        assert!(with.bands.iter().map(|b| b.count).sum::<usize>() > without.bands.iter().map(|b| b.count).sum::<usize>());
    }

    #[test]
    fn band_report_empty_window() {
        let t = table_from_f64(&[0.9, 0.8]);
        let pts = level_table(&t, 3).unwrap();
        assert!(matches!(
            band_report(&pts, 1, false),
            Err(Error::EmptyWindow { window: 1 })
        ));
    }

    #[test]
    fn sublevel_table_d3_classes() {
        // table up to n = 21, base d = 3
        let vals: Vec<f64> = (2..=21).map(|n| 1.0 + 0.01 * n as f64).collect();
        let t = table_from_f64(&vals);
        let pts = sublevel_table(&t, 3, 21).unwrap();
        // m = 2..7
        assert_eq!(pts.len(), 6);
        assert_eq!(pts[0].sublevel, Some(2)); // m=2
        assert_eq!(pts[1].sublevel, Some(3)); // m=3
        assert_eq!(pts[3].sublevel, Some(5)); // m=5
        assert_eq!(pts[5].sublevel, Some(7)); // m=7
        for p in &pts {
            assert!(p.height.is_some());
            assert!(!p.floored);
        }
    }

    #[test]
    fn csv_export_shapes() {
        let t = table_from_f64(&[0.9, 0.8, 0.91, 0.7]);
        let pts = level_table(&t, 5).unwrap();
        let mut buf = Vec::new();
        write_level_csv(&mut buf, &pts).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines[0], "n,height,level,is_prime_n,floored");
        assert_eq!(lines.len(), 5);
        assert!(lines[1].starts_with("2,"));

        let mut empty = Vec::new();
        write_level_csv(&mut empty, &[]).unwrap();
        assert_eq!(String::from_utf8(empty).unwrap().lines().count(), 1);
    }

    #[test]
    fn plot_export_writes_csv_and_script() {
        let t = table_from_f64(&[0.9, 0.8]);
        let pts = level_table(&t, 3).unwrap();
        let dir = tempfile::tempdir().unwrap();
        let csv = dir.path().join("levels.csv");
        export_plot_data(&pts, &csv).unwrap();
        assert!(csv.exists());
        let script = std::fs::read_to_string(dir.path().join("levels.py")).unwrap();
        assert!(script.contains("levels.csv"));
        assert!(!script.contains(dir.path().to_str().unwrap()), "script must use relative paths");
    }
}
