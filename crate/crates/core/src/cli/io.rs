use std::fmt::Write as _;
use std::fs::File;
use std::io::{self, Read, Write};
use std::path::Path;

use num_complex::Complex64;

use crate::dynamics::ParamPoint;
use crate::error::{Error, Result};
use crate::loci::LocusResult;

/// Parses `a+bi`, `a-bi`, `a`, `bi`, `i`, `-i`, with exponents allowed.
pub fn parse_complex(s: &str) -> std::result::Result<Complex64, String> {
    let t: String = s.chars().filter(|c| !c.is_whitespace()).collect();
    let bad = || format!("cannot parse complex number `{s}`");
    if t.is_empty() {
        return Err(bad());
    }
    let num = |x: &str| x.parse::<f64>().map_err(|_| bad());
    let Some(body) = t.strip_suffix(['i', 'j']) else {
        return Ok(Complex64::new(num(&t)?, 0.0));
    };
    let bytes = body.as_bytes();
    let split = (1..bytes.len())
        .rev()
        .find(|&k| (bytes[k] == b'+' || bytes[k] == b'-') && !matches!(bytes[k - 1], b'e' | b'E'));
    let imag = |x: &str| match x {
        "" | "+" => Ok(1.0),
        "-" => Ok(-1.0),
        _ => num(x),
    };
    match split {
        Some(k) => Ok(Complex64::new(num(&body[..k])?, imag(&body[k..])?)),
        None => Ok(Complex64::new(0.0, imag(body)?)),
    }
}

/// Seventeen significant digits: enough to round-trip any `f64`.
pub fn fmt_f64(x: f64) -> String {
    format!("{x:.16e}")
}

/// One parsed row of a points file.
#[derive(Clone, Debug, PartialEq)]
pub struct PointRow {
    pub coords: Vec<Complex64>,
    pub residual: f64,
}

pub fn point_rows(locus: &LocusResult) -> Vec<PointRow> {
    locus
        .points
        .iter()
        .zip(&locus.residuals)
        .map(|(p, &residual)| PointRow {
            coords: p.params(),
            residual,
        })
        .collect()
}

pub fn write_points<W: Write>(out: W, rows: &[PointRow]) -> Result<()> {
    let dim = rows.first().map_or(1, |r| r.coords.len());
    let mut w = csv::WriterBuilder::new().terminator(csv::Terminator::Any(b'\n')).from_writer(out);
    let mut header = vec!["re".to_string(), "im".to_string()];
    for k in 2..=dim {
        header.push(format!("re{k}"));
        header.push(format!("im{k}"));
    }
    header.push("residual".into());
    w.write_record(&header)?;
    for r in rows {
        let mut rec: Vec<String> = r.coords.iter().flat_map(|z| [fmt_f64(z.re), fmt_f64(z.im)]).collect();
        rec.push(fmt_f64(r.residual));
        w.write_record(&rec)?;
    }
    w.flush()?;
    Ok(())
}

pub fn read_points<R: Read>(input: R) -> Result<Vec<PointRow>> {
    let mut r = csv::Reader::from_reader(input);
    let width = r.headers()?.len();
    if width < 3 || width % 2 == 0 {
        return Err(Error::Io(format!("points file has {width} columns")));
    }
    r.records()
        .map(|rec| {
            let rec = rec?;
            let vals: Vec<f64> = rec
                .iter()
                .map(|f| f.parse::<f64>().map_err(|e| Error::Io(format!("bad number `{f}`: {e}"))))
                .collect::<Result<_>>()?;
            let coords = vals[..width - 1].chunks(2).map(|c| Complex64::new(c[0], c[1])).collect();
            Ok(PointRow {
                coords,
                residual: vals[width - 1],
            })
        })
        .collect()
}

pub fn write_series<W: Write>(out: W, series: &[(u32, f64)]) -> Result<()> {
    let mut w = csv::WriterBuilder::new().terminator(csv::Terminator::Any(b'\n')).from_writer(out);
    w.write_record(["n", "delta"])?;
    for (n, v) in series {
        w.write_record([n.to_string(), fmt_f64(*v)])?;
    }
    w.flush()?;
    Ok(())
}

pub fn read_series<R: Read>(input: R) -> Result<Vec<(u32, f64)>> {
    let mut r = csv::Reader::from_reader(input);
    r.records()
        .map(|rec| {
            let rec = rec?;
            let field = |k: usize| rec.get(k).ok_or_else(|| Error::Io("short row in series file".into()));
            let n = field(0)?.parse::<u32>().map_err(|e| Error::Io(e.to_string()))?;
            let v = field(1)?.parse::<f64>().map_err(|e| Error::Io(e.to_string()))?;
            Ok((n, v))
        })
        .collect()
}

/// Writes to `path`, or to stdout when there is none.
pub fn emit(path: Option<&Path>, f: impl FnOnce(&mut dyn Write) -> Result<()>) -> Result<()> {
    match path {
        Some(p) => {
            let mut file = io::BufWriter::new(File::create(p)?);
            f(&mut file)?;
            file.flush()?;
            Ok(())
        }
        None => {
            let stdout = io::stdout();
            let mut lock = stdout.lock();
            f(&mut lock)
        }
    }
}

const SVG_SIZE: f64 = 480.0;
const SVG_MARGIN: f64 = 24.0;

fn frame(xs: &[f64], ys: &[f64]) -> (f64, f64, f64, f64) {
    let lo = |v: &[f64]| v.iter().copied().fold(f64::INFINITY, f64::min);
    let hi = |v: &[f64]| v.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let (mut x0, mut x1, mut y0, mut y1) = (lo(xs), hi(xs), lo(ys), hi(ys));
    if !(x1 > x0) {
        x0 -= 1.0;
        x1 += 1.0;
    }
    if !(y1 > y0) {
        y0 -= 1.0;
        y1 += 1.0;
    }
    (x0, x1, y0, y1)
}

fn svg(body: &str) -> String {
    format!(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{s}\" height=\"{s}\" viewBox=\"0 0 {s} {s}\">\n\
         <rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n{body}</svg>\n",
        s = SVG_SIZE
    )
}

fn project(v: f64, lo: f64, hi: f64, flip: bool) -> f64 {
    let u = (v - lo) / (hi - lo);
    let u = if flip { 1.0 - u } else { u };
    SVG_MARGIN + u * (SVG_SIZE - 2.0 * SVG_MARGIN)
}

/// Scatter of the first coordinate of each point.
pub fn scatter_svg(points: &[ParamPoint]) -> String {
    let xs: Vec<f64> = points.iter().map(|p| p.params()[0].re).collect();
    let ys: Vec<f64> = points.iter().map(|p| p.params()[0].im).collect();
    let (x0, x1, y0, y1) = frame(&xs, &ys);
    let mut body = String::new();
    for (x, y) in xs.iter().zip(&ys) {
        let _ = writeln!(
            body,
            "<circle cx=\"{:.2}\" cy=\"{:.2}\" r=\"1.2\" fill=\"black\"/>",
            project(*x, x0, x1, false),
            project(*y, y0, y1, true)
        );
    }
    svg(&body)
}

/// `log10 Δ_n` against `n`.
pub fn series_svg(series: &[(u32, f64)]) -> String {
    let pts: Vec<(f64, f64)> = series
        .iter()
        .filter(|(_, v)| *v > 0.0 && v.is_finite())
        .map(|&(n, v)| (f64::from(n), v.log10()))
        .collect();
    let xs: Vec<f64> = pts.iter().map(|p| p.0).collect();
    let ys: Vec<f64> = pts.iter().map(|p| p.1).collect();
    let (x0, x1, y0, y1) = frame(&xs, &ys);
    let path: Vec<String> = pts
        .iter()
        .map(|(x, y)| format!("{:.2},{:.2}", project(*x, x0, x1, false), project(*y, y0, y1, true)))
        .collect();
    let body = format!(
        "<polyline points=\"{}\" fill=\"none\" stroke=\"black\"/>\n",
        path.join(" ")
    );
    svg(&body)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn complex_forms() {
        let c = |re, im| Complex64::new(re, im);
        assert_eq!(parse_complex("0.4+0i").unwrap(), c(0.4, 0.0));
        assert_eq!(parse_complex("-1+1i").unwrap(), c(-1.0, 1.0));
        assert_eq!(parse_complex("-0.2").unwrap(), c(-0.2, 0.0));
        assert_eq!(parse_complex("-i").unwrap(), c(0.0, -1.0));
        assert_eq!(parse_complex("2.5e-3i").unwrap(), c(0.0, 2.5e-3));
        assert_eq!(parse_complex("1e-3-2E+1i").unwrap(), c(1e-3, -20.0));
        assert!(parse_complex("1+").is_err());
        assert!(parse_complex("").is_err());
    }

    #[test]
    fn points_round_trip() {
        let rows = vec![
            PointRow {
                coords: vec![Complex64::new(0.1, -1.0 / 3.0), Complex64::new(1e-300, 2.0)],
                residual: 3.3e-17,
            },
            PointRow {
                coords: vec![Complex64::new(-2.0, 0.0), Complex64::new(f64::MAX, -0.0)],
                residual: 0.0,
            },
        ];
        let mut buf = Vec::new();
        write_points(&mut buf, &rows).unwrap();
        let text = String::from_utf8(buf.clone()).unwrap();
        assert!(text.starts_with("re,im,re2,im2,residual\n"));
        assert_eq!(read_points(buf.as_slice()).unwrap(), rows);
    }

    #[test]
    fn series_round_trip() {
        let s = vec![(8, 0.1 / 3.0), (9, 1e-5)];
        let mut buf = Vec::new();
        write_series(&mut buf, &s).unwrap();
        assert_eq!(read_series(buf.as_slice()).unwrap(), s);
    }
}
