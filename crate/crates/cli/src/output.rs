use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use serde::Serialize;

use plateau_core::solver::{Mesh, ScalarField};

use crate::CliError;

/// Scientific notation with 17 significant digits.
pub fn num(x: f64) -> String {
    format!("{x:.16e}")
}

pub fn write_text(path: &Path, text: &str) -> Result<(), CliError> {
    fs::write(path, text).map_err(|e| CliError::Io(format!("cannot write {}: {e}", path.display())))
}

pub fn write_json<T: Serialize>(path: &Path, value: &T) -> Result<(), CliError> {
    let mut text = serde_json::to_string_pretty(value)
        .map_err(|e| CliError::Io(format!("cannot serialize {}: {e}", path.display())))?;
    text.push('\n');
    write_text(path, &text)
}

pub fn to_json<T: Serialize>(value: &T) -> String {
    serde_json::to_string_pretty(value).expect("report types serialize")
}

/// `x,y,u,grad_norm` per vertex.
pub fn field_csv(mesh: &Mesh, field: &ScalarField, grads: &[[f64; 2]]) -> String {
    let mut out = String::from("x,y,u,grad_norm\n");
    for ((p, u), g) in mesh.vertices.iter().zip(&field.values).zip(grads) {
        let _ = writeln!(out, "{},{},{},{}", num(p[0]), num(p[1]), num(*u), num(g[0].hypot(g[1])));
    }
    out
}

/// Parses the `x,y,u,...` file written by [`field_csv`].
pub fn read_field_csv(path: &Path) -> Result<Vec<[f64; 3]>, CliError> {
    let text = fs::read_to_string(path)
        .map_err(|e| CliError::Config(format!("cannot read field {}: {e}", path.display())))?;
    let mut lines = text.lines();
    match lines.next() {
        Some(h) if h.starts_with("x,y,u") => {}
        _ => {
            return Err(CliError::Config(format!(
                "{} does not start with an x,y,u header",
                path.display()
            )))
        }
    }
    lines
        .enumerate()
        .filter(|(_, l)| !l.trim().is_empty())
        .map(|(i, l)| {
            let cols: Vec<&str> = l.split(',').collect();
            let parse = |k: usize| -> Result<f64, CliError> {
                cols.get(k)
                    .and_then(|c| c.trim().parse::<f64>().ok())
                    .ok_or_else(|| CliError::Config(format!("{} line {}: bad column {k}", path.display(), i + 2)))
            };
            Ok([parse(0)?, parse(1)?, parse(2)?])
        })
        .collect()
}

/// Samples the piecewise-linear field on a regular grid over the mesh's
/// bounding box; points outside the mesh are written as `NaN`.
pub fn gnuplot_grid(mesh: &Mesh, field: &ScalarField, n: usize) -> String {
    let (mut lo, mut hi) = ([f64::INFINITY; 2], [f64::NEG_INFINITY; 2]);
    for p in &mesh.vertices {
        for k in 0..2 {
            lo[k] = lo[k].min(p[k]);
            hi[k] = hi[k].max(p[k]);
        }
    }
    let buckets = 64usize;
    let cell = |x: f64, k: usize| -> usize {
        let t = (x - lo[k]) / (hi[k] - lo[k]);
        ((t * buckets as f64) as usize).min(buckets - 1)
    };
    let mut grid: Vec<Vec<usize>> = vec![Vec::new(); buckets * buckets];
    for (t, tri) in mesh.triangles.iter().enumerate() {
        let pts = tri.map(|v| mesh.vertices[v]);
        let (x0, x1) = (pts.iter().map(|p| p[0]).fold(f64::INFINITY, f64::min), pts.iter().map(|p| p[0]).fold(f64::NEG_INFINITY, f64::max));
        let (y0, y1) = (pts.iter().map(|p| p[1]).fold(f64::INFINITY, f64::min), pts.iter().map(|p| p[1]).fold(f64::NEG_INFINITY, f64::max));
        for i in cell(x0, 0)..=cell(x1, 0) {
            for j in cell(y0, 1)..=cell(y1, 1) {
                grid[j * buckets + i].push(t);
            }
        }
    }
    let locate = |p: [f64; 2]| -> Option<f64> {
        for &t in &grid[cell(p[1], 1) * buckets + cell(p[0], 0)] {
            let [a, b, c] = mesh.triangles[t].map(|v| mesh.vertices[v]);
            let det = (b[0] - a[0]) * (c[1] - a[1]) - (c[0] - a[0]) * (b[1] - a[1]);
            let l1 = ((p[0] - a[0]) * (c[1] - a[1]) - (c[0] - a[0]) * (p[1] - a[1])) / det;
            let l2 = ((b[0] - a[0]) * (p[1] - a[1]) - (p[0] - a[0]) * (b[1] - a[1])) / det;
            let l0 = 1.0 - l1 - l2;
            let tol = -1e-12;
            if l0 >= tol && l1 >= tol && l2 >= tol {
                let [va, vb, vc] = mesh.triangles[t].map(|v| field.values[v]);
                return Some(l0 * va + l1 * vb + l2 * vc);
            }
        }
        None
    };
    let mut out = String::from("# x y u\n");
    for j in 0..n {
        let y = lo[1] + (hi[1] - lo[1]) * j as f64 / (n - 1) as f64;
        for i in 0..n {
            let x = lo[0] + (hi[0] - lo[0]) * i as f64 / (n - 1) as f64;
            let u = locate([x, y]).map_or_else(|| "NaN".to_string(), num);
            let _ = writeln!(out, "{} {} {}", num(x), num(y), u);
        }
        out.push('\n');
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use plateau_core::solver::{triangulate, DomainSpec};

    #[test]
    fn seventeen_digits() {
        assert_eq!(num(0.1), "1.0000000000000001e-1");
        assert_eq!(num(0.1).parse::<f64>().unwrap(), 0.1);
    }

    #[test]
    fn grid_reproduces_linear_field() {
        let mesh = triangulate(&DomainSpec::rectangle(1.0, 1.0), 0.25).unwrap();
        let field = ScalarField::from_fn(&mesh, |p| p[0] + 2.0 * p[1]);
        let text = gnuplot_grid(&mesh, &field, 5);
        for line in text.lines().filter(|l| !l.is_empty() && !l.starts_with('#')) {
            let v: Vec<f64> = line.split(' ').map(|c| c.parse().unwrap()).collect();
            assert!((v[2] - v[0] - 2.0 * v[1]).abs() < 1e-12);
        }
    }
}
