//! File formats: grayscale PGM (P2/P5), a plain-text grid format, JSON
//! reports and CSV landscapes.
//!
//! PGM samples are read as-is (no rescaling to `[0, 1]`), so an integer image
//! written with the `maxval` and encoding it was read with comes back
//! byte-for-byte.

use std::fs;
use std::io::Write;
use std::path::Path;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::grid::ImageGrid;
use crate::trainer::AssessmentRecord;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PgmEncoding {
    /// `P2`
    Ascii,
    /// `P5`
    Binary,
}

/// A PGM image with the header fields needed to write it back unchanged.
#[derive(Clone, Debug, PartialEq)]
pub struct Pgm {
    pub grid: ImageGrid,
    pub maxval: u16,
    pub encoding: PgmEncoding,
}

struct Cursor<'a> {
    data: &'a [u8],
    pos: usize,
}

impl<'a> Cursor<'a> {
    fn err(&self, message: impl Into<String>) -> Error {
        Error::Parse {
            offset: self.pos,
            message: message.into(),
        }
    }

    /// Skips whitespace and `#` comments.
    fn skip_space(&mut self) {
        while self.pos < self.data.len() {
            match self.data[self.pos] {
                b'#' => {
                    while self.pos < self.data.len() && self.data[self.pos] != b'\n' {
                        self.pos += 1;
                    }
                }
                c if c.is_ascii_whitespace() => self.pos += 1,
                _ => break,
            }
        }
    }

    fn uint(&mut self, what: &str) -> Result<u64> {
        self.skip_space();
        let start = self.pos;
        while self.pos < self.data.len() && self.data[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(if self.pos == self.data.len() {
                self.err(format!("unexpected end of file, expected {what}"))
            } else {
                self.err(format!("expected {what}"))
            });
        }
        std::str::from_utf8(&self.data[start..self.pos])
            .expect("ascii digits")
            .parse()
            .map_err(|_| Error::Parse {
                offset: start,
                message: format!("{what} is too large"),
            })
    }
}

/// Parses a `P2` or `P5` graymap.
pub fn parse_pgm(data: &[u8]) -> Result<Pgm> {
    let mut c = Cursor { data, pos: 0 };
    let encoding = match data.get(..2) {
        Some(b"P2") => PgmEncoding::Ascii,
        Some(b"P5") => PgmEncoding::Binary,
        _ => return Err(c.err("not a P2/P5 graymap")),
    };
    c.pos = 2;
    if c.pos < data.len() && !data[c.pos].is_ascii_whitespace() && data[c.pos] != b'#' {
        return Err(c.err("expected whitespace after magic number"));
    }
    let width = c.uint("width")? as usize;
    let height = c.uint("height")? as usize;
    let max_at = c.pos;
    let maxval = c.uint("maxval")?;
    if width == 0 || height == 0 {
        return Err(Error::Parse {
            offset: max_at,
            message: format!("empty image {width}x{height}"),
        });
    }
    if maxval == 0 || maxval > 65535 {
        return Err(Error::Parse {
            offset: max_at,
            message: format!("maxval {maxval} outside 1..=65535"),
        });
    }
    let count = width
        .checked_mul(height)
        .ok_or_else(|| c.err("image dimensions overflow"))?;
    let mut values = Vec::with_capacity(count.min(1 << 24));
    match encoding {
        PgmEncoding::Ascii => {
            for _ in 0..count {
                let at = {
                    c.skip_space();
                    c.pos
                };
                let v = c.uint("sample")?;
                if v > maxval {
                    return Err(Error::Parse {
                        offset: at,
                        message: format!("sample {v} exceeds maxval {maxval}"),
                    });
                }
                values.push(v as f64);
            }
        }
        PgmEncoding::Binary => {
            if c.pos >= data.len() || !data[c.pos].is_ascii_whitespace() {
                return Err(c.err("expected one whitespace byte before the raster"));
            }
            c.pos += 1;
            let bytes = if maxval > 255 { 2 } else { 1 };
            let need = count * bytes;
            let have = data.len() - c.pos;
            if have < need {
                return Err(Error::Parse {
                    offset: data.len(),
                    message: format!("raster truncated: {have} of {need} bytes"),
                });
            }
            for k in 0..count {
                let at = c.pos + k * bytes;
                let v = if bytes == 2 {
                    u16::from_be_bytes([data[at], data[at + 1]]) as u64
                } else {
                    data[at] as u64
                };
                if v > maxval {
                    return Err(Error::Parse {
                        offset: at,
                        message: format!("sample {v} exceeds maxval {maxval}"),
                    });
                }
                values.push(v as f64);
            }
        }
    }
    Ok(Pgm {
        grid: ImageGrid::image(height, width, values)?,
        maxval: maxval as u16,
        encoding,
    })
}

/// Encodes a 2D grid. Samples are rounded to the nearest integer and must
/// lie in `[0, maxval]`.
pub fn encode_pgm(grid: &ImageGrid, maxval: u16, encoding: PgmEncoding) -> Result<Vec<u8>> {
    if grid.ndim() != 2 {
        return Err(Error::Shape(format!("PGM needs a 2D grid, got {:?}", grid.dims())));
    }
    if maxval == 0 {
        return Err(Error::InvalidArgument("maxval must be >= 1".into()));
    }
    let (rows, cols) = (grid.dims()[0], grid.dims()[1]);
    let mut samples = Vec::with_capacity(grid.len());
    for (i, &v) in grid.values().iter().enumerate() {
        let r = v.round();
        if !(0.0..=maxval as f64).contains(&r) {
            return Err(Error::InvalidInput(format!(
                "sample {v} at index {i} is outside [0, {maxval}]"
            )));
        }
        samples.push(r as u16);
    }
    let magic = match encoding {
        PgmEncoding::Ascii => "P2",
        PgmEncoding::Binary => "P5",
    };
    let mut out = format!("{magic}\n{cols} {rows}\n{maxval}\n").into_bytes();
    match encoding {
        PgmEncoding::Ascii => {
            for row in samples.chunks(cols) {
                let line: Vec<String> = row.iter().map(|s| s.to_string()).collect();
                out.extend_from_slice(line.join(" ").as_bytes());
                out.push(b'\n');
            }
        }
        PgmEncoding::Binary => {
            for s in samples {
                if maxval > 255 {
                    out.extend_from_slice(&s.to_be_bytes());
                } else {
                    out.push(s as u8);
                }
            }
        }
    }
    Ok(out)
}

/// Clamps and rounds into `[0, maxval]`; the lossy path for real-valued
/// reconstructions.
pub fn quantize(grid: &ImageGrid, maxval: u16) -> ImageGrid {
    let m = maxval as f64;
    grid.map(|v| v.round().clamp(0.0, m))
        .expect("clamped values are finite")
}

/// Parses the text format: a header line `signal <n>` (1D) or
/// `grid <d1> <d2> ...`, then one value per line.
pub fn parse_text_grid(data: &[u8]) -> Result<ImageGrid> {
    let text = std::str::from_utf8(data).map_err(|e| Error::Parse {
        offset: e.valid_up_to(),
        message: "not UTF-8".into(),
    })?;
    let mut offset = 0;
    let mut dims: Option<Vec<usize>> = None;
    let mut values = Vec::new();
    for line in text.split_inclusive('\n') {
        let at = offset;
        offset += line.len();
        let body = line.split('#').next().unwrap_or("").trim();
        if body.is_empty() {
            continue;
        }
        let parse_err = |message: String| Error::Parse { offset: at, message };
        if dims.is_none() {
            let mut words = body.split_whitespace();
            let kind = words.next().unwrap_or("");
            let d: Vec<usize> = words
                .map(|w| w.parse().map_err(|_| parse_err(format!("bad extent {w:?}"))))
                .collect::<Result<_>>()?;
            let ok = match kind {
                "signal" => d.len() == 1,
                "grid" => !d.is_empty(),
                _ => false,
            };
            if !ok || d.contains(&0) {
                return Err(parse_err(format!(
                    "expected header `signal <n>` or `grid <dims..>`, got {body:?}"
                )));
            }
            dims = Some(d);
            continue;
        }
        let v: f64 = body
            .parse()
            .map_err(|_| parse_err(format!("bad value {body:?}")))?;
        if !v.is_finite() {
            return Err(parse_err(format!("value {body:?} is not finite")));
        }
        values.push(v);
    }
    let dims = dims.ok_or(Error::Parse {
        offset,
        message: "missing header".into(),
    })?;
    let need: usize = dims.iter().product();
    if values.len() != need {
        return Err(Error::Parse {
            offset,
            message: format!("expected {need} values, found {}", values.len()),
        });
    }
    ImageGrid::new(dims, values)
}

/// Writes the text format. Values use the shortest representation that
/// parses back to the same `f64`.
pub fn encode_text_grid(grid: &ImageGrid) -> Vec<u8> {
    let mut out = String::new();
    if grid.ndim() == 1 {
        out.push_str(&format!("signal {}\n", grid.len()));
    } else {
        let d: Vec<String> = grid.dims().iter().map(|d| d.to_string()).collect();
        out.push_str(&format!("grid {}\n", d.join(" ")));
    }
    for v in grid.values() {
        out.push_str(&format!("{v}\n"));
    }
    out.into_bytes()
}

fn is_pgm_path(path: &Path) -> bool {
    path.extension()
        .and_then(|e| e.to_str())
        .is_some_and(|e| e.eq_ignore_ascii_case("pgm"))
}

/// Any image file: PGM by content (magic `P2`/`P5`), otherwise the text format.
#[derive(Clone, Debug, PartialEq)]
pub enum ImageFile {
    Pgm(Pgm),
    Text(ImageGrid),
}

impl ImageFile {
    pub fn grid(&self) -> &ImageGrid {
        match self {
            ImageFile::Pgm(p) => &p.grid,
            ImageFile::Text(g) => g,
        }
    }

    pub fn into_grid(self) -> ImageGrid {
        match self {
            ImageFile::Pgm(p) => p.grid,
            ImageFile::Text(g) => g,
        }
    }
}

pub fn read_image_file(path: &Path) -> Result<ImageFile> {
    let data = fs::read(path)?;
    if data.starts_with(b"P2") || data.starts_with(b"P5") {
        Ok(ImageFile::Pgm(parse_pgm(&data)?))
    } else if is_pgm_path(path) {
        parse_pgm(&data).map(ImageFile::Pgm)
    } else {
        parse_text_grid(&data).map(ImageFile::Text)
    }
}

pub fn read_image(path: &Path) -> Result<ImageGrid> {
    Ok(read_image_file(path)?.into_grid())
}

/// Writes `.pgm` paths as binary PGM (maxval 255 when every sample fits,
/// else 65535) and anything else in the text format.
pub fn write_image(grid: &ImageGrid, path: &Path) -> Result<()> {
    let bytes = if is_pgm_path(path) {
        let maxval = if grid.max().round() <= 255.0 { 255 } else { 65535 };
        encode_pgm(grid, maxval, PgmEncoding::Binary)?
    } else {
        encode_text_grid(grid)
    };
    fs::write(path, bytes)?;
    Ok(())
}

pub fn write_pgm(pgm: &Pgm, path: &Path) -> Result<()> {
    fs::write(path, encode_pgm(&pgm.grid, pgm.maxval, pgm.encoding)?)?;
    Ok(())
}

/// Pretty JSON with a trailing newline.
pub fn to_json<T: Serialize>(value: &T) -> Result<String> {
    let mut s = serde_json::to_string_pretty(value)?;
    s.push('\n');
    Ok(s)
}

pub fn write_json<T: Serialize>(value: &T, path: &Path) -> Result<()> {
    fs::write(path, to_json(value)?)?;
    Ok(())
}

/// Landscape rows in the given order.
pub fn landscape_csv(records: &[AssessmentRecord]) -> Result<Vec<u8>> {
    let mut w = csv::Writer::from_writer(Vec::new());
    for r in records {
        w.serialize(r)?;
    }
    w.flush()?;
    w.into_inner().map_err(|e| Error::Io(e.into_error()))
}

pub fn write_landscape(records: &[AssessmentRecord], path: &Path) -> Result<()> {
    let mut f = fs::File::create(path)?;
    f.write_all(&landscape_csv(records)?)?;
    Ok(())
}

pub fn parse_landscape(data: &[u8]) -> Result<Vec<AssessmentRecord>> {
    let mut r = csv::Reader::from_reader(data);
    r.deserialize().map(|row| row.map_err(Error::from)).collect()
}

pub fn read_landscape(path: &Path) -> Result<Vec<AssessmentRecord>> {
    parse_landscape(&fs::read(path)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lp::PExponent;

    #[test]
    fn p2_round_trip() {
        let src = b"P2\n2 2\n3\n0 1\n2 3\n";
        let pgm = parse_pgm(src).unwrap();
        assert_eq!(pgm.grid.dims(), &[2, 2]);
        assert_eq!(pgm.grid.values(), &[0.0, 1.0, 2.0, 3.0]);
        assert_eq!(encode_pgm(&pgm.grid, pgm.maxval, pgm.encoding).unwrap(), src);
    }

    #[test]
    fn p5_round_trip_8_and_16_bit() {
        let mut src = b"P5\n3 1\n255\n".to_vec();
        src.extend_from_slice(&[0, 128, 255]);
        let pgm = parse_pgm(&src).unwrap();
        assert_eq!(pgm.grid.values(), &[0.0, 128.0, 255.0]);
        assert_eq!(encode_pgm(&pgm.grid, 255, PgmEncoding::Binary).unwrap(), src);

        let mut src = b"P5\n2 1\n65535\n".to_vec();
        src.extend_from_slice(&[0x01, 0x02, 0xff, 0xff]);
        let pgm = parse_pgm(&src).unwrap();
        assert_eq!(pgm.grid.values(), &[258.0, 65535.0]);
        assert_eq!(encode_pgm(&pgm.grid, 65535, PgmEncoding::Binary).unwrap(), src);
    }

    #[test]
    fn comments_and_odd_whitespace() {
        let src = b"P2 # made by hand\n# another\n 2\t1 7 \n3\n\n7";
        let pgm = parse_pgm(src).unwrap();
        assert_eq!(pgm.grid.values(), &[3.0, 7.0]);
    }

    #[test]
    fn parse_errors_carry_offsets() {
        let mut src = b"P5\n4 1\n255\n".to_vec();
        src.extend_from_slice(&[1, 2]);
        match parse_pgm(&src) {
            Err(Error::Parse { offset, .. }) => assert_eq!(offset, src.len()),
            other => panic!("{other:?}"),
        }
        match parse_pgm(b"P2\n2 1\n3\n1 9\n") {
            Err(Error::Parse { offset, .. }) => assert_eq!(offset, 11),
            other => panic!("{other:?}"),
        }
        match parse_pgm(b"P2\n2 x\n") {
            Err(Error::Parse { offset, .. }) => assert_eq!(offset, 5),
            other => panic!("{other:?}"),
        }
        assert!(matches!(parse_pgm(b"P6\n1 1\n255\n\0"), Err(Error::Parse { offset: 0, .. })));
        assert!(parse_pgm(b"P2\n1 1\n70000\n0\n").is_err());
        assert!(parse_pgm(b"P2\n2 2\n3\n0 1 2").is_err());
    }

    #[test]
    fn encode_rejects_out_of_range() {
        let g = ImageGrid::image(1, 2, vec![0.0, 256.0]).unwrap();
        assert!(encode_pgm(&g, 255, PgmEncoding::Binary).is_err());
        assert_eq!(quantize(&g, 255).values(), &[0.0, 255.0]);
        let s = ImageGrid::signal(vec![1.0]).unwrap();
        assert!(matches!(encode_pgm(&s, 255, PgmEncoding::Ascii), Err(Error::Shape(_))));
    }

    #[test]
    fn text_round_trip_is_exact() {
        let g = ImageGrid::signal(vec![-10.0, 0.1 + 0.2, 1e-300, 98.5]).unwrap();
        let bytes = encode_text_grid(&g);
        assert!(bytes.starts_with(b"signal 4\n"));
        assert_eq!(parse_text_grid(&bytes).unwrap(), g);
        let g2 = ImageGrid::image(2, 3, vec![1.0, 2.0, 3.0, 4.5, 5.0, -6.0]).unwrap();
        assert_eq!(parse_text_grid(&encode_text_grid(&g2)).unwrap(), g2);
        assert!(parse_text_grid(b"signal 3\n1\n2\n").is_err());
        assert!(parse_text_grid(b"1\n2\n").is_err());
        assert!(parse_text_grid(b"signal 1\nnan\n").is_err());
    }

    #[test]
    fn landscape_round_trip() {
        let rec = |alpha: f64, p, a: f64| AssessmentRecord {
            alpha,
            p,
            assessment: a,
            assessment_root: a.sqrt(),
            tv: 0.1 + 0.2,
            iterations: 17,
            converged: alpha < 1.0,
        };
        let records = vec![
            rec(0.0, PExponent::ONE, 3.0),
            rec(1.0 / 3.0, PExponent::ratio(4, 3).unwrap(), 1.0 / 7.0),
            rec(2.0, PExponent::INFINITY, 1e-17),
        ];
        let bytes = landscape_csv(&records).unwrap();
        let text = String::from_utf8(bytes.clone()).unwrap();
        assert!(text.starts_with("alpha,p,assessment,assessment_root,tv,iterations,converged\n"));
        assert!(text.contains(",inf,"));
        assert_eq!(parse_landscape(&bytes).unwrap(), records);
    }
}
