use std::collections::VecDeque;
use std::f64::consts::PI;

use spade::{ConstrainedDelaunayTriangulation, Point2, Triangulation};

use super::domain::{segment_distance, DomainSpec, Shape};
use crate::error::{Error, Result};

/// Conforming triangulation with counterclockwise triangles.
#[derive(Debug, Clone, PartialEq)]
pub struct Mesh {
    pub vertices: Vec<[f64; 2]>,
    pub triangles: Vec<[usize; 3]>,
    pub boundary: Vec<bool>,
    /// Longest edge.
    pub h: f64,
}

/// Per-vertex values on a mesh.
#[derive(Debug, Clone, PartialEq)]
pub struct ScalarField {
    pub values: Vec<f64>,
}

impl ScalarField {
    pub fn zeros(mesh: &Mesh) -> Self {
        Self {
            values: vec![0.0; mesh.vertices.len()],
        }
    }

    pub fn from_fn(mesh: &Mesh, mut f: impl FnMut([f64; 2]) -> f64) -> Self {
        Self {
            values: mesh.vertices.iter().map(|&p| f(p)).collect(),
        }
    }

    /// Zeroes the boundary vertices.
    pub fn with_boundary_zero(mut self, mesh: &Mesh) -> Self {
        for (v, &b) in self.values.iter_mut().zip(&mesh.boundary) {
            if b {
                *v = 0.0;
            }
        }
        self
    }

    pub fn sup_distance(&self, other: &ScalarField) -> f64 {
        self.values
            .iter()
            .zip(&other.values)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max)
    }

    pub fn max(&self) -> f64 {
        self.values.iter().copied().fold(f64::NEG_INFINITY, f64::max)
    }

    pub fn min(&self) -> f64 {
        self.values.iter().copied().fold(f64::INFINITY, f64::min)
    }
}

pub(crate) fn signed_area(a: [f64; 2], b: [f64; 2], c: [f64; 2]) -> f64 {
    0.5 * ((b[0] - a[0]) * (c[1] - a[1]) - (b[1] - a[1]) * (c[0] - a[0]))
}

fn dist(a: [f64; 2], b: [f64; 2]) -> f64 {
    (a[0] - b[0]).hypot(a[1] - b[1])
}

impl Mesh {
    fn finish(vertices: Vec<[f64; 2]>, raw: Vec<[usize; 3]>, boundary: Vec<bool>) -> Result<Self> {
        let mut triangles = Vec::with_capacity(raw.len());
        for t in raw {
            let area = signed_area(vertices[t[0]], vertices[t[1]], vertices[t[2]]);
            if area > 0.0 {
                triangles.push(t);
            } else if area < 0.0 {
                triangles.push([t[0], t[2], t[1]]);
            } else {
                return Err(Error::Mesh(format!("degenerate triangle {t:?}")));
            }
        }
        let h = triangles
            .iter()
            .flat_map(|t| (0..3).map(move |k| (t[k], t[(k + 1) % 3])))
            .map(|(a, b)| dist(vertices[a], vertices[b]))
            .fold(0.0, f64::max);
        Ok(Self {
            vertices,
            triangles,
            boundary,
            h,
        })
    }

    pub fn n_vertices(&self) -> usize {
        self.vertices.len()
    }

    pub fn triangle_area(&self, t: usize) -> f64 {
        let [a, b, c] = self.triangles[t];
        signed_area(self.vertices[a], self.vertices[b], self.vertices[c])
    }

    pub fn total_area(&self) -> f64 {
        (0..self.triangles.len()).map(|t| self.triangle_area(t)).sum()
    }

    pub fn interior_indices(&self) -> Vec<usize> {
        (0..self.vertices.len()).filter(|&i| !self.boundary[i]).collect()
    }

    /// Sorted vertex neighbour lists.
    pub fn adjacency(&self) -> Vec<Vec<usize>> {
        let mut adj = vec![Vec::new(); self.vertices.len()];
        for t in &self.triangles {
            for k in 0..3 {
                let (a, b) = (t[k], t[(k + 1) % 3]);
                adj[a].push(b);
                adj[b].push(a);
            }
        }
        for list in &mut adj {
            list.sort_unstable();
            list.dedup();
        }
        adj
    }

    /// Graph distance (in edges) from each vertex to the boundary.
    pub fn boundary_hops(&self) -> Vec<usize> {
        let adj = self.adjacency();
        let mut hops = vec![usize::MAX; self.vertices.len()];
        let mut queue = VecDeque::new();
        for (i, &b) in self.boundary.iter().enumerate() {
            if b {
                hops[i] = 0;
                queue.push_back(i);
            }
        }
        while let Some(v) = queue.pop_front() {
            for &w in &adj[v] {
                if hops[w] == usize::MAX {
                    hops[w] = hops[v] + 1;
                    queue.push_back(w);
                }
            }
        }
        hops
    }

    /// Triangles incident to each vertex.
    pub fn vertex_triangles(&self) -> Vec<Vec<usize>> {
        let mut inc = vec![Vec::new(); self.vertices.len()];
        for (t, tri) in self.triangles.iter().enumerate() {
            for &v in tri {
                inc[v].push(t);
            }
        }
        inc
    }
}

/// Triangulates `d` so that no edge exceeds `h_target` (rectangles: grid
/// spacing at most `h_target`, with diagonals `√2` longer).
pub fn triangulate(d: &DomainSpec, h_target: f64) -> Result<Mesh> {
    if !(h_target > 0.0 && h_target.is_finite()) {
        return Err(Error::Mesh(format!("h must be positive, got {h_target}")));
    }
    d.validate()?;
    match &d.shape {
        Shape::Disk { radius } => disk_mesh(*radius, h_target),
        Shape::Rectangle { width, height } => Ok(rectangle_mesh(*width, *height, h_target)),
        Shape::Polygon { vertices } => polygon_mesh(vertices, h_target),
    }
}

/// Concentric rings `r_k = kR/n` carrying `6k` points each.
fn disk_rings(radius: f64, n: usize) -> Result<Mesh> {
    let mut vertices = vec![[0.0, 0.0]];
    let mut boundary = vec![n == 0];
    let mut start = vec![0usize];
    for k in 1..=n {
        start.push(vertices.len());
        let m = 6 * k;
        let r = if k == n { radius } else { radius * k as f64 / n as f64 };
        for j in 0..m {
            let theta = 2.0 * PI * j as f64 / m as f64;
            vertices.push([r * theta.cos(), r * theta.sin()]);
            boundary.push(k == n);
        }
    }
    let mut tris = Vec::new();
    for j in 0..6 {
        tris.push([0, start[1] + j, start[1] + (j + 1) % 6]);
    }
    for k in 2..=n {
        let (m_in, m_out) = (6 * (k - 1), 6 * k);
        let (s_in, s_out) = (start[k - 1], start[k]);
        let (mut i, mut j) = (0usize, 0usize);
        while i < m_in || j < m_out {
            let next_in = (i + 1) as f64 / m_in as f64;
            let next_out = (j + 1) as f64 / m_out as f64;
            let a = s_in + i % m_in;
            let b = s_out + j % m_out;
            if j < m_out && (i == m_in || next_out <= next_in) {
                tris.push([a, b, s_out + (j + 1) % m_out]);
                j += 1;
            } else {
                tris.push([a, b, s_in + (i + 1) % m_in]);
                i += 1;
            }
        }
    }
    Mesh::finish(vertices, tris, boundary)
}

fn disk_mesh(radius: f64, h_target: f64) -> Result<Mesh> {
    let mut n = ((radius / h_target).ceil() as usize).max(1);
    loop {
        let mesh = disk_rings(radius, n)?;
        if mesh.h <= h_target {
            return Ok(mesh);
        }
        n += 1;
    }
}

fn rectangle_mesh(width: f64, height: f64, h_target: f64) -> Mesh {
    let nx = ((width / h_target).ceil() as usize).max(1);
    let ny = ((height / h_target).ceil() as usize).max(1);
    let mut vertices = Vec::with_capacity((nx + 1) * (ny + 1));
    let mut boundary = Vec::with_capacity(vertices.capacity());
    for j in 0..=ny {
        for i in 0..=nx {
            let x = if i == nx { width } else { width * i as f64 / nx as f64 };
            let y = if j == ny { height } else { height * j as f64 / ny as f64 };
            vertices.push([x, y]);
            boundary.push(i == 0 || j == 0 || i == nx || j == ny);
        }
    }
    let id = |i: usize, j: usize| j * (nx + 1) + i;
    let mut tris = Vec::with_capacity(2 * nx * ny);
    for j in 0..ny {
        for i in 0..nx {
            tris.push([id(i, j), id(i + 1, j), id(i + 1, j + 1)]);
            tris.push([id(i, j), id(i + 1, j + 1), id(i, j + 1)]);
        }
    }
    Mesh::finish(vertices, tris, boundary).expect("structured grid triangles are non-degenerate")
}

fn polygon_points(poly: &[[f64; 2]], spacing: f64) -> (Vec<[f64; 2]>, usize) {
    let n = poly.len();
    let mut pts = Vec::new();
    for i in 0..n {
        let (a, b) = (poly[i], poly[(i + 1) % n]);
        let pieces = ((dist(a, b) / spacing).ceil() as usize).max(1);
        for k in 0..pieces {
            let t = k as f64 / pieces as f64;
            pts.push([a[0] + t * (b[0] - a[0]), a[1] + t * (b[1] - a[1])]);
        }
    }
    let n_boundary = pts.len();
    let (mut lo, mut hi) = ([f64::INFINITY; 2], [f64::NEG_INFINITY; 2]);
    for p in poly {
        for k in 0..2 {
            lo[k] = lo[k].min(p[k]);
            hi[k] = hi[k].max(p[k]);
        }
    }
    let dy = spacing * 3f64.sqrt() / 2.0;
    let rows = ((hi[1] - lo[1]) / dy).ceil() as usize;
    let cols = ((hi[0] - lo[0]) / spacing).ceil() as usize + 1;
    for r in 0..=rows {
        let y = lo[1] + r as f64 * dy;
        let shift = if r % 2 == 1 { 0.5 * spacing } else { 0.0 };
        for c in 0..=cols {
            let p = [lo[0] + shift + c as f64 * spacing, y];
            if !super::domain::point_in_polygon(poly, p) {
                continue;
            }
            let clearance = (0..n)
                .map(|i| segment_distance(poly[i], poly[(i + 1) % n], p))
                .fold(f64::INFINITY, f64::min);
            if clearance >= 0.5 * spacing {
                pts.push(p);
            }
        }
    }
    (pts, n_boundary)
}

fn polygon_cdt(poly: &[[f64; 2]], spacing: f64) -> Result<Mesh> {
    let (pts, n_boundary) = polygon_points(poly, spacing);
    let mut cdt = ConstrainedDelaunayTriangulation::<Point2<f64>>::new();
    let mut handles = Vec::with_capacity(pts.len());
    for p in &pts {
        let h = cdt
            .insert(Point2::new(p[0], p[1]))
            .map_err(|e| Error::Mesh(format!("insertion failed: {e:?}")))?;
        handles.push(h);
    }
    for i in 0..n_boundary {
        let (a, b) = (handles[i], handles[(i + 1) % n_boundary]);
        if a == b {
            return Err(Error::Mesh("coincident boundary points".to_string()));
        }
        if !cdt.can_add_constraint(a, b) {
            return Err(Error::Mesh(format!("boundary segment {i} cannot be recovered")));
        }
        cdt.add_constraint(a, b);
    }
    if cdt.num_vertices() != pts.len() {
        return Err(Error::Mesh("duplicate points in polygon mesh".to_string()));
    }
    let mut vertices = vec![[0.0; 2]; cdt.num_vertices()];
    let mut boundary = vec![false; cdt.num_vertices()];
    for (k, h) in handles.iter().enumerate() {
        vertices[h.index()] = pts[k];
        boundary[h.index()] = k < n_boundary;
    }
    let mut tris = Vec::new();
    for face in cdt.inner_faces() {
        let v = face.vertices().map(|v| v.fix().index());
        let c = [
            (vertices[v[0]][0] + vertices[v[1]][0] + vertices[v[2]][0]) / 3.0,
            (vertices[v[0]][1] + vertices[v[1]][1] + vertices[v[2]][1]) / 3.0,
        ];
        if super::domain::point_in_polygon(poly, c) {
            tris.push(v);
        }
    }
    tris.sort_unstable();
    let mesh = Mesh::finish(vertices, tris, boundary)?;
    let poly_area = 0.5
        * (0..poly.len())
            .map(|i| {
                let (a, b) = (poly[i], poly[(i + 1) % poly.len()]);
                a[0] * b[1] - a[1] * b[0]
            })
            .sum::<f64>();
    if (mesh.total_area() - poly_area).abs() > 1e-9 * poly_area {
        return Err(Error::Mesh("triangulation does not cover the polygon".to_string()));
    }
    Ok(mesh)
}

fn polygon_mesh(poly: &[[f64; 2]], h_target: f64) -> Result<Mesh> {
    let mut spacing = h_target / 1.2;
    for _ in 0..40 {
        let mesh = polygon_cdt(poly, spacing)?;
        if mesh.h <= h_target {
            return Ok(mesh);
        }
        spacing *= 0.9;
    }
    Err(Error::Mesh(format!("could not reach h <= {h_target}")))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn disk_boundary_on_circle() {
        let m = triangulate(&DomainSpec::disk(1.0), 0.5).unwrap();
        for (p, &b) in m.vertices.iter().zip(&m.boundary) {
            let r = p[0].hypot(p[1]);
            if b {
                assert!((r - 1.0).abs() <= 1e-12);
            } else {
                assert!(r < 1.0 - 1e-3);
            }
        }
        assert!(m.h <= 0.5);
        assert!((m.total_area() - PI).abs() < 0.2);
        assert!((0..m.triangles.len()).all(|t| m.triangle_area(t) > 0.0));
    }

    #[test]
    fn disk_refinement_halves_h() {
        let d = DomainSpec::disk(1.0);
        for h in [0.25, 0.125, 1.0 / 16.0] {
            let a = triangulate(&d, h).unwrap();
            let b = triangulate(&d, h / 2.0).unwrap();
            let ratio = b.h / a.h;
            assert!((ratio - 0.5).abs() <= 0.05, "ratio {ratio}");
        }
    }

    #[test]
    fn disk_mesh_is_conforming() {
        // every interior edge is shared by exactly two triangles
        let m = triangulate(&DomainSpec::disk(1.0), 0.2).unwrap();
        let mut count = std::collections::HashMap::new();
        for t in &m.triangles {
            for k in 0..3 {
                let (a, b) = (t[k].min(t[(k + 1) % 3]), t[k].max(t[(k + 1) % 3]));
                *count.entry((a, b)).or_insert(0) += 1;
            }
        }
        for ((a, b), c) in count {
            let on_boundary = m.boundary[a] && m.boundary[b];
            assert!(c == 2 || (c == 1 && on_boundary));
        }
        // Euler characteristic of a disk
        let edges_v = m.n_vertices() as i64;
        let faces = m.triangles.len() as i64;
        let edges = (3 * faces + m.boundary.iter().filter(|&&b| b).count() as i64) / 2;
        assert_eq!(edges_v - edges + faces, 1);
    }

    #[test]
    fn rectangle_counts() {
        let m = triangulate(&DomainSpec::rectangle(1.0, 1.0), 0.25).unwrap();
        assert_eq!(m.n_vertices(), 25);
        assert_eq!(m.triangles.len(), 32);
        assert_eq!(m.boundary.iter().filter(|&&b| b).count(), 16);
        assert!((m.total_area() - 1.0).abs() < 1e-14);
    }

    #[test]
    fn l_shaped_polygon() {
        let ell = vec![[0.0, 0.0], [2.0, 0.0], [2.0, 1.0], [1.0, 1.0], [1.0, 2.0], [0.0, 2.0]];
        let d = DomainSpec::polygon(ell.clone(), Some(0.5));
        let m = triangulate(&d, 0.2).unwrap();
        assert!(m.h <= 0.2);
        assert!((m.total_area() - 3.0).abs() < 1e-12);
        for (p, &b) in m.vertices.iter().zip(&m.boundary) {
            if b {
                assert!(d.boundary_distance(*p) < 1e-12);
            } else {
                assert!(d.boundary_distance(*p) > 1e-3);
            }
        }
        assert_eq!(m, triangulate(&d, 0.2).unwrap());
    }

    #[test]
    fn degenerate_inputs() {
        assert!(triangulate(&DomainSpec::disk(1.0), 0.0).is_err());
        let bowtie = vec![[0.0, 0.0], [1.0, 1.0], [1.0, 0.0], [0.0, 1.0]];
        assert!(matches!(
            triangulate(&DomainSpec::polygon(bowtie, Some(1.0)), 0.1),
            Err(Error::Mesh(_))
        ));
    }

    #[test]
    fn boundary_hops() {
        let m = triangulate(&DomainSpec::rectangle(1.0, 1.0), 0.25).unwrap();
        let hops = m.boundary_hops();
        assert_eq!(hops[12], 2);
        assert_eq!(hops.iter().filter(|&&h| h == 1).count(), 8);
    }
}
