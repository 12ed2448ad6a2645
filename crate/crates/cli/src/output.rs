//! CSV emitters for traced curves and scans.
//!
//! Numbers are printed as the shortest decimal that parses back to the same
//! `f64` (never more than 17 significant digits), so every value survives a
//! round trip through the file exactly. Lines end in a bare LF.

use std::io::{Read, Write};

use kms_core::borderline::TracedCurve;
use kms_core::classification::ScanResult;
use kms_core::complex::format_real;

pub const CURVE_HEADER: [&str; 8] = ["u", "v", "re_rho", "im_rho", "re_lambda", "im_lambda", "re_drho", "im_drho"];
pub const SCAN_HEADER: [&str; 7] = ["d", "mag_a", "mag_b", "re_a", "im_a", "re_b", "im_b"];

fn writer<W: Write>(sink: W) -> csv::Writer<W> {
    csv::WriterBuilder::new().terminator(csv::Terminator::Any(b'\n')).from_writer(sink)
}

fn write_rows<W: Write, const K: usize>(
    sink: W,
    header: [&str; K],
    rows: impl Iterator<Item = [f64; K]>,
) -> csv::Result<()> {
    let mut w = writer(sink);
    w.write_record(header)?;
    for row in rows {
        w.write_record(row.iter().map(|&x| format_real(x)))?;
    }
    w.flush()?;
    Ok(())
}

/// One row per sample: `u,v,re_rho,im_rho,re_lambda,im_lambda,re_drho,im_drho`.
pub fn write_curve_csv<W: Write>(curve: &TracedCurve, sink: W) -> csv::Result<()> {
    let rows = curve.samples.iter().map(|s| {
        [s.u, s.v, s.rho.re(), s.rho.im(), s.lambda.re(), s.lambda.im(), s.drho_du.re(), s.drho_du.im()]
    });
    write_rows(sink, CURVE_HEADER, rows)
}

/// One row per scan point: `d,mag_a,mag_b,re_a,im_a,re_b,im_b`.
pub fn write_scan_csv<W: Write>(scan: &ScanResult, sink: W) -> csv::Result<()> {
    let rows = scan.distances.iter().zip(&scan.pair_magnitudes).zip(&scan.pairs).map(|((&d, &(ma, mb)), (a, b))| {
        [d, ma, mb, a.re(), a.im(), b.re(), b.im()]
    });
    write_rows(sink, SCAN_HEADER, rows)
}

/// Reads a numeric CSV written by this module back into rows, checking the
/// header against `expected`.
pub fn read_numeric_csv<R: Read>(source: R, expected: &[&str]) -> csv::Result<Vec<Vec<f64>>> {
    let mut r = csv::ReaderBuilder::new().has_headers(true).from_reader(source);
    let header = r.headers()?.clone();
    if header.iter().ne(expected.iter().copied()) {
        return Err(csv::Error::from(std::io::Error::new(
            std::io::ErrorKind::InvalidData,
            format!("unexpected header {header:?}"),
        )));
    }
    let mut rows = Vec::new();
    for record in r.records() {
        let record = record?;
        let row = record
            .iter()
            .map(|f| {
                f.parse::<f64>()
                    .map_err(|e| std::io::Error::new(std::io::ErrorKind::InvalidData, format!("{f:?}: {e}")))
            })
            .collect::<Result<Vec<_>, _>>()?;
        rows.push(row);
    }
    Ok(rows)
}
