//! Grid dumps: `# nx ny lx ly` header, then ny rows of nx space-separated
//! values (row-major, y outer). Floats are written in shortest
//! round-trip form, so dump -> parse reproduces the grid bit-exactly.

use std::fmt::Write as _;
use std::path::Path;

use kmiter::spectral::{GridField, RectDomain};

use crate::error::CliError;

pub fn format_grid(grid: &GridField) -> String {
    let d = grid.domain();
    let mut out = String::new();
    writeln!(out, "# {} {} {:?} {:?}", d.nx(), d.ny(), d.lx(), d.ly()).unwrap();
    for j in 0..d.ny() {
        for i in 0..d.nx() {
            if i > 0 {
                out.push(' ');
            }
            write!(out, "{:?}", grid.value_at(i, j)).unwrap();
        }
        out.push('\n');
    }
    out
}

pub fn write_grid(path: &Path, grid: &GridField) -> Result<(), CliError> {
    std::fs::write(path, format_grid(grid))
        .map_err(|e| CliError::io(format!("cannot write {}: {e}", path.display())))
}

pub fn parse_grid(text: &str) -> Result<GridField, CliError> {
    let mut lines = text.lines();
    let header = lines
        .next()
        .ok_or_else(|| CliError::config("empty grid dump"))?;
    let header = header
        .strip_prefix('#')
        .ok_or_else(|| CliError::config("grid dump must start with a '# nx ny lx ly' header"))?;
    let fields: Vec<&str> = header.split_whitespace().collect();
    if fields.len() != 4 {
        return Err(CliError::config(format!(
            "grid header needs 4 fields (nx ny lx ly), got {}",
            fields.len()
        )));
    }
    let nx: usize = fields[0]
        .parse()
        .map_err(|e| CliError::config(format!("bad nx: {e}")))?;
    let ny: usize = fields[1]
        .parse()
        .map_err(|e| CliError::config(format!("bad ny: {e}")))?;
    let lx: f64 = fields[2]
        .parse()
        .map_err(|e| CliError::config(format!("bad lx: {e}")))?;
    let ly: f64 = fields[3]
        .parse()
        .map_err(|e| CliError::config(format!("bad ly: {e}")))?;

    let mut values = Vec::with_capacity(nx * ny);
    for (j, line) in lines.enumerate() {
        if line.trim().is_empty() {
            continue;
        }
        for token in line.split_whitespace() {
            let v: f64 = token
                .parse()
                .map_err(|e| CliError::config(format!("bad value in row {j}: {e}")))?;
            values.push(v);
        }
    }
    let domain = RectDomain::new(lx, ly, nx, ny).map_err(CliError::from)?;
    GridField::new(domain, values).map_err(CliError::from)
}

pub fn read_grid(path: &Path) -> Result<GridField, CliError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::config(format!("cannot read {}: {e}", path.display())))?;
    parse_grid(&text)
}

#[cfg(test)]
mod tests {
    use super::*;
    use kmiter::spectral::{build_basis, inverse_transform, SpectralField};

    #[test]
    fn round_trip_bit_exact() {
        let basis = build_basis(RectDomain::new(1.5, 0.5, 9, 7).unwrap(), 4, 1.0).unwrap();
        let coeffs: Vec<f64> = (0..16).map(|i| (i as f64 * 0.81).sin() * 1e-3).collect();
        let grid = inverse_transform(&SpectralField::from_coeffs(&basis, coeffs).unwrap());
        let text = format_grid(&grid);
        let back = parse_grid(&text).unwrap();
        assert_eq!(back.values(), grid.values());
        assert_eq!(back.domain(), grid.domain());
        // Shortest round-trip also survives a second generation.
        assert_eq!(format_grid(&back), text);
    }

    #[test]
    fn zero_grid_dump() {
        let grid = GridField::zero(RectDomain::unit_square(3).unwrap());
        let text = format_grid(&grid);
        assert!(text.starts_with("# 3 3 1.0 1.0\n"));
        assert_eq!(text.lines().count(), 4);
        assert_eq!(parse_grid(&text).unwrap().values(), grid.values());
    }

    #[test]
    fn malformed_dumps_rejected() {
        assert!(parse_grid("").is_err());
        assert!(parse_grid("3 3 1 1\n0 0 0\n0 0 0\n0 0 0\n").is_err()); // no '#'
        assert!(parse_grid("# 3 3 1\n").is_err()); // short header
        assert!(parse_grid("# 3 3 1 1\n0 0 0\n0 x 0\n0 0 0\n").is_err()); // bad value
        assert!(parse_grid("# 3 3 1 1\n0 0 0\n0 1 0\n0 0 1\n").is_err()); // nonzero boundary
        assert!(parse_grid("# 3 3 1 1\n0 0 0\n0 1 0\n").is_err()); // wrong count
    }
}
