//! Plain-text output formats: CSV for amplitudes and densities, and 8-bit
//! PGM (P2) images of densities.

use std::fmt::Write as _;

use crate::torus_states::{DensityMap, SampledState};

/// `x,y,re,im` for every stored node of a sampled state.
pub fn state_csv(state: &SampledState) -> String {
    let (nx, ny) = state.intervals();
    let (hx, hy) = state.steps();
    let (cols, rows) = if state.is_closed() {
        (nx + 1, ny + 1)
    } else {
        (nx, ny)
    };
    let mut out = String::from("x,y,re,im\n");
    for j in 0..rows {
        for i in 0..cols {
            let v = state.stored(i, j);
            let _ = writeln!(out, "{},{},{},{}", i as f64 * hx, j as f64 * hy, v.re, v.im);
        }
    }
    out
}

/// `x,y,density` on the density grid.
pub fn density_csv(map: &DensityMap) -> String {
    let (hx, hy) = (map.lx / map.nx as f64, map.ly / map.ny as f64);
    let mut out = String::from("x,y,density\n");
    for j in 0..map.ny {
        for i in 0..map.nx {
            let _ = writeln!(out, "{},{},{}", i as f64 * hx, j as f64 * hy, map.at(i, j));
        }
    }
    out
}

/// Plain PGM with gray levels `round(255 ρ/ρ_max)`. The first image row is
/// the top of the torus (`y` largest), so the picture has the usual
/// orientation.
pub fn density_pgm(map: &DensityMap) -> String {
    let max = map.max();
    let mut out = format!(
        "P2\n# density {}x{}\n{} {}\n255\n",
        map.nx, map.ny, map.nx, map.ny
    );
    for j in (0..map.ny).rev() {
        let row: Vec<String> = (0..map.nx)
            .map(|i| {
                let level = if max > 0.0 {
                    (255.0 * map.at(i, j) / max).round()
                } else {
                    0.0
                };
                (level as u8).to_string()
            })
            .collect();
        out.push_str(&row.join(" "));
        out.push('\n');
    }
    out
}

/// Parse a P2 image written by [`density_pgm`] into `(width, height, rows)`.
pub fn parse_pgm(text: &str) -> Option<(usize, usize, Vec<Vec<u8>>)> {
    let mut tokens = text
        .lines()
        .filter(|l| !l.starts_with('#'))
        .flat_map(str::split_whitespace);
    if tokens.next()? != "P2" {
        return None;
    }
    let w: usize = tokens.next()?.parse().ok()?;
    let h: usize = tokens.next()?.parse().ok()?;
    let _max: u32 = tokens.next()?.parse().ok()?;
    let mut rows = Vec::with_capacity(h);
    for _ in 0..h {
        let row: Option<Vec<u8>> = (0..w).map(|_| tokens.next()?.parse().ok()).collect();
        rows.push(row?);
    }
    Some((w, h, rows))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn bump() -> DensityMap {
        let (nx, ny) = (8, 6);
        let values = (0..nx * ny)
            .map(|k| {
                let (i, j) = ((k % nx) as f64, (k / nx) as f64);
                (-((i - 4.0).powi(2) + (j - 2.0).powi(2))).exp()
            })
            .collect::<Vec<f64>>();
        let total: f64 = values.iter().sum::<f64>() / (nx * ny) as f64;
        DensityMap {
            nx,
            ny,
            lx: 1.0,
            ly: 1.0,
            values: values.iter().map(|v| v / total).collect(),
            argmax: (4, 2),
        }
    }

    #[test]
    fn pgm_round_trip() {
        let map = bump();
        let text = density_pgm(&map);
        let (w, h, rows) = parse_pgm(&text).unwrap();
        assert_eq!((w, h), (8, 6));
        // y index 2 is image row 6 - 1 - 2
        assert_eq!(rows[3][4], 255);
        assert_eq!(rows.iter().flatten().filter(|&&v| v == 255).count(), 1);
    }

    #[test]
    fn csv_headers_and_rows() {
        let map = bump();
        let csv = density_csv(&map);
        assert!(csv.starts_with("x,y,density\n"));
        assert_eq!(csv.lines().count(), 1 + 48);
    }
}
