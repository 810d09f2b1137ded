//! PGM and text grids, and the landscape CSV.

use tvp_bilevel::io::{encode_pgm, encode_text_grid, landscape_csv, parse_landscape, parse_pgm, parse_text_grid, PgmEncoding};
use tvp_bilevel::trainer::AssessmentRecord;
use tvp_bilevel::{ImageGrid, PExponent};

fn main() -> tvp_bilevel::Result<()> {
    let g = ImageGrid::from_fn(vec![3, 4], |i| (i[0] * 4 + i[1]) as f64 * 20.0)?;
    for enc in [PgmEncoding::Ascii, PgmEncoding::Binary] {
        let bytes = encode_pgm(&g, 255, enc)?;
        let back = parse_pgm(&bytes)?;
        println!("{enc:?}: {} bytes, same samples: {}", bytes.len(), back.grid.values() == g.values());
        assert_eq!(encode_pgm(&back.grid, back.maxval, back.encoding)?, bytes);
    }

    let s = ImageGrid::signal(vec![0.1, -2.5, 1e-17])?;
    let text = encode_text_grid(&s);
    print!("{}", String::from_utf8_lossy(&text));
    assert_eq!(parse_text_grid(&text)?.values(), s.values());

    match parse_pgm(b"P2\n2 2\n255\n1 2 300 4\n") {
        Err(e) => println!("rejected: {e}"),
        Ok(_) => unreachable!(),
    }

    let rows = vec![AssessmentRecord {
        alpha: 0.5,
        p: PExponent::INFINITY,
        assessment: 2.0,
        assessment_root: 2f64.sqrt(),
        tv: 1.25,
        iterations: 42,
        converged: true,
    }];
    let csv = landscape_csv(&rows)?;
    print!("{}", String::from_utf8_lossy(&csv));
    assert_eq!(parse_landscape(&csv)?, rows);
    Ok(())
}
