//! Benchmark result rows and CSV output.

use crate::config::Bits;
use binfuse::FilterKind;
use std::io::{self, Write};

/// Measured results for one (filter, n, bits) cell.
#[derive(Debug, Clone)]
pub struct BenchReport {
    pub kind: FilterKind,
    pub n: usize,
    pub bits: Bits,
    pub construction_ns_per_key: f64,
    pub query_ns_per_key: f64,
    /// NaN when the query mix contained no non-members.
    pub measured_fpp: f64,
    pub bits_per_key: f64,
    pub attempts: u32,
}

/// Stable column order; consumers may rely on it.
pub const CSV_HEADER: &str =
    "filter,n,bits,construction_ns_per_key,query_ns_per_key,measured_fpp,bits_per_key,attempts";

/// Writes all rows as CSV, sorted by (filter, n, bits). Floats print in
/// shortest round-trip form, so nothing is lost to formatting.
pub fn emit_report(reports: &mut [BenchReport], out: &mut impl Write) -> io::Result<()> {
    reports.sort_by(|a, b| {
        (a.kind, a.n)
            .cmp(&(b.kind, b.n))
            .then(bits_key(a.bits).total_cmp(&bits_key(b.bits)))
    });
    writeln!(out, "{CSV_HEADER}")?;
    for row in reports {
        writeln!(
            out,
            "{},{},{},{},{},{},{},{}",
            row.kind.name(),
            row.n,
            row.bits,
            row.construction_ns_per_key,
            row.query_ns_per_key,
            row.measured_fpp,
            row.bits_per_key,
            row.attempts
        )?;
    }
    Ok(())
}

fn bits_key(bits: Bits) -> f64 {
    match bits {
        Bits::Fingerprint(b) => f64::from(b),
        Bits::PerKey(b) => b,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn row(kind: FilterKind, n: usize) -> BenchReport {
        BenchReport {
            kind,
            n,
            bits: Bits::Fingerprint(8),
            construction_ns_per_key: 20.0,
            query_ns_per_key: 15.5,
            measured_fpp: 0.0039,
            bits_per_key: 9.04,
            attempts: 1,
        }
    }

    #[test]
    fn single_report_yields_header_and_one_row() {
        let mut out = Vec::new();
        emit_report(&mut [row(FilterKind::Fuse3, 1000)], &mut out).unwrap();
        let text = String::from_utf8(out).unwrap();
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines.len(), 2);
        assert_eq!(lines[0], CSV_HEADER);
        assert_eq!(lines[1], "fuse3,1000,8,20,15.5,0.0039,9.04,1");
    }

    #[test]
    fn rows_sort_by_kind_then_n() {
        let mut rows = vec![
            row(FilterKind::Xor, 1000),
            row(FilterKind::Fuse3, 1_000_000),
            row(FilterKind::Fuse3, 1000),
            row(FilterKind::Bloom, 1000),
        ];
        let mut out = Vec::new();
        emit_report(&mut rows, &mut out).unwrap();
        let text = String::from_utf8(out).unwrap();
        let firsts: Vec<String> = text
            .lines()
            .skip(1)
            .map(|l| {
                let mut parts = l.split(',');
                format!("{},{}", parts.next().unwrap(), parts.next().unwrap())
            })
            .collect();
        assert_eq!(
            firsts,
            ["fuse3,1000", "fuse3,1000000", "xor,1000", "bloom,1000"]
        );
    }
}
