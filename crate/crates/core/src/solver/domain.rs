use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Planar domain shapes. Disks are centred at the origin and rectangles
/// occupy `[0, width] × [0, height]`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum Shape {
    Disk { radius: f64 },
    Rectangle { width: f64, height: f64 },
    Polygon { vertices: Vec<[f64; 2]> },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DomainSpec {
    pub shape: Shape,
    /// Uniform exterior sphere radius. Defaults to the radius for disks and
    /// to `+inf` for convex shapes; required for non-convex polygons.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub exterior_sphere_rho: Option<f64>,
    /// Lower bound on the boundary mean curvature, `1/R` for a disk.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub mean_curvature_min: Option<f64>,
}

fn signed_area(poly: &[[f64; 2]]) -> f64 {
    let n = poly.len();
    0.5 * (0..n)
        .map(|i| {
            let (a, b) = (poly[i], poly[(i + 1) % n]);
            a[0] * b[1] - a[1] * b[0]
        })
        .sum::<f64>()
}

fn orient(a: [f64; 2], b: [f64; 2], c: [f64; 2]) -> f64 {
    (b[0] - a[0]) * (c[1] - a[1]) - (b[1] - a[1]) * (c[0] - a[0])
}

fn on_segment(a: [f64; 2], b: [f64; 2], p: [f64; 2]) -> bool {
    p[0] >= a[0].min(b[0]) && p[0] <= a[0].max(b[0]) && p[1] >= a[1].min(b[1]) && p[1] <= a[1].max(b[1])
}

fn segments_intersect(a: [f64; 2], b: [f64; 2], c: [f64; 2], d: [f64; 2]) -> bool {
    let (d1, d2) = (orient(c, d, a), orient(c, d, b));
    let (d3, d4) = (orient(a, b, c), orient(a, b, d));
    if ((d1 > 0.0 && d2 < 0.0) || (d1 < 0.0 && d2 > 0.0))
        && ((d3 > 0.0 && d4 < 0.0) || (d3 < 0.0 && d4 > 0.0))
    {
        return true;
    }
    (d1 == 0.0 && on_segment(c, d, a))
        || (d2 == 0.0 && on_segment(c, d, b))
        || (d3 == 0.0 && on_segment(a, b, c))
        || (d4 == 0.0 && on_segment(a, b, d))
}

/// Even-odd point-in-polygon test.
pub fn point_in_polygon(poly: &[[f64; 2]], p: [f64; 2]) -> bool {
    let n = poly.len();
    let mut inside = false;
    let mut j = n - 1;
    for i in 0..n {
        let (a, b) = (poly[i], poly[j]);
        if (a[1] > p[1]) != (b[1] > p[1]) {
            let x = a[0] + (p[1] - a[1]) / (b[1] - a[1]) * (b[0] - a[0]);
            if p[0] < x {
                inside = !inside;
            }
        }
        j = i;
    }
    inside
}

/// Distance from `p` to segment `ab`.
pub fn segment_distance(a: [f64; 2], b: [f64; 2], p: [f64; 2]) -> f64 {
    let (dx, dy) = (b[0] - a[0], b[1] - a[1]);
    let len2 = dx * dx + dy * dy;
    let t = if len2 > 0.0 {
        (((p[0] - a[0]) * dx + (p[1] - a[1]) * dy) / len2).clamp(0.0, 1.0)
    } else {
        0.0
    };
    (p[0] - a[0] - t * dx).hypot(p[1] - a[1] - t * dy)
}

impl DomainSpec {
    pub fn disk(radius: f64) -> Self {
        Self {
            shape: Shape::Disk { radius },
            exterior_sphere_rho: None,
            mean_curvature_min: None,
        }
    }

    pub fn rectangle(width: f64, height: f64) -> Self {
        Self {
            shape: Shape::Rectangle { width, height },
            exterior_sphere_rho: None,
            mean_curvature_min: None,
        }
    }

    pub fn polygon(vertices: Vec<[f64; 2]>, rho: Option<f64>) -> Self {
        Self {
            shape: Shape::Polygon { vertices },
            exterior_sphere_rho: rho,
            mean_curvature_min: None,
        }
    }

    pub fn validate(&self) -> Result<()> {
        let positive = |name: &str, v: f64| {
            if v > 0.0 && v.is_finite() {
                Ok(())
            } else {
                Err(Error::Mesh(format!("{name} must be positive and finite, got {v}")))
            }
        };
        match &self.shape {
            Shape::Disk { radius } => positive("radius", *radius)?,
            Shape::Rectangle { width, height } => {
                positive("width", *width)?;
                positive("height", *height)?;
            }
            Shape::Polygon { vertices } => {
                let n = vertices.len();
                if n < 3 {
                    return Err(Error::Mesh(format!("polygon needs >= 3 vertices, got {n}")));
                }
                if vertices.iter().flatten().any(|c| !c.is_finite()) {
                    return Err(Error::Mesh("polygon has non-finite coordinates".to_string()));
                }
                for i in 0..n {
                    let (a, b) = (vertices[i], vertices[(i + 1) % n]);
                    if a == b {
                        return Err(Error::Mesh(format!("polygon edge {i} has zero length")));
                    }
                    for j in i + 1..n {
                        let adjacent = j == i + 1 || (i == 0 && j == n - 1);
                        if adjacent {
                            continue;
                        }
                        let (c, d) = (vertices[j], vertices[(j + 1) % n]);
                        if segments_intersect(a, b, c, d) {
                            return Err(Error::Mesh(format!("polygon edges {i} and {j} intersect")));
                        }
                    }
                }
                let area = signed_area(vertices);
                if !(area > 0.0) {
                    return Err(Error::Mesh(format!(
                        "polygon must be counterclockwise, signed area {area}"
                    )));
                }
                if self.exterior_sphere_rho.is_none() && !self.is_convex() {
                    return Err(Error::Mesh(
                        "non-convex polygon needs exterior_sphere_rho".to_string(),
                    ));
                }
            }
        }
        if let Some(rho) = self.exterior_sphere_rho {
            if !(rho > 0.0) {
                return Err(Error::Mesh(format!("exterior_sphere_rho must be positive, got {rho}")));
            }
        }
        if let Some(h) = self.mean_curvature_min {
            if !(h > 0.0 && h.is_finite()) {
                return Err(Error::Mesh(format!("mean_curvature_min must be positive, got {h}")));
            }
        }
        Ok(())
    }

    pub fn is_convex(&self) -> bool {
        match &self.shape {
            Shape::Disk { .. } | Shape::Rectangle { .. } => true,
            Shape::Polygon { vertices } => {
                let n = vertices.len();
                (0..n).all(|i| orient(vertices[i], vertices[(i + 1) % n], vertices[(i + 2) % n]) >= 0.0)
            }
        }
    }

    pub fn area(&self) -> f64 {
        match &self.shape {
            Shape::Disk { radius } => std::f64::consts::PI * radius * radius,
            Shape::Rectangle { width, height } => width * height,
            Shape::Polygon { vertices } => signed_area(vertices).abs(),
        }
    }

    pub fn diameter(&self) -> f64 {
        match &self.shape {
            Shape::Disk { radius } => 2.0 * radius,
            Shape::Rectangle { width, height } => width.hypot(*height),
            Shape::Polygon { vertices } => vertices
                .iter()
                .enumerate()
                .flat_map(|(i, a)| vertices[i + 1..].iter().map(move |b| (a[0] - b[0]).hypot(a[1] - b[1])))
                .fold(0.0, f64::max),
        }
    }

    /// Exterior sphere radius used in the gradient bound; `+inf` for convex
    /// shapes without an explicit value.
    pub fn rho(&self) -> f64 {
        if let Some(rho) = self.exterior_sphere_rho {
            return rho;
        }
        match &self.shape {
            Shape::Disk { radius } => *radius,
            _ => f64::INFINITY,
        }
    }

    /// `H*` if the boundary has positive mean curvature; `None` when the
    /// curvature bounds do not apply.
    pub fn curvature_min(&self) -> Option<f64> {
        self.mean_curvature_min.or(match &self.shape {
            Shape::Disk { radius } => Some(1.0 / radius),
            _ => None,
        })
    }

    /// Boundary as a closed polyline, for non-disk shapes.
    pub fn boundary_polygon(&self) -> Option<Vec<[f64; 2]>> {
        match &self.shape {
            Shape::Disk { .. } => None,
            Shape::Rectangle { width, height } => Some(vec![
                [0.0, 0.0],
                [*width, 0.0],
                [*width, *height],
                [0.0, *height],
            ]),
            Shape::Polygon { vertices } => Some(vertices.clone()),
        }
    }

    pub fn contains(&self, p: [f64; 2]) -> bool {
        match &self.shape {
            Shape::Disk { radius } => p[0].hypot(p[1]) <= *radius,
            Shape::Rectangle { width, height } => {
                (0.0..=*width).contains(&p[0]) && (0.0..=*height).contains(&p[1])
            }
            Shape::Polygon { vertices } => point_in_polygon(vertices, p),
        }
    }

    /// Distance from an interior point to the boundary.
    pub fn boundary_distance(&self, p: [f64; 2]) -> f64 {
        match &self.shape {
            Shape::Disk { radius } => (radius - p[0].hypot(p[1])).abs(),
            _ => {
                let poly = self.boundary_polygon().unwrap_or_default();
                let n = poly.len();
                (0..n)
                    .map(|i| segment_distance(poly[i], poly[(i + 1) % n], p))
                    .fold(f64::INFINITY, f64::min)
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn geometry() {
        let d = DomainSpec::disk(2.0);
        assert_eq!(d.diameter(), 4.0);
        assert_eq!(d.rho(), 2.0);
        assert_eq!(d.curvature_min(), Some(0.5));
        let r = DomainSpec::rectangle(3.0, 4.0);
        assert_eq!(r.diameter(), 5.0);
        assert_eq!(r.area(), 12.0);
        assert!(r.rho().is_infinite());
        assert!(r.curvature_min().is_none());
    }

    #[test]
    fn polygon_validation() {
        let square = vec![[0.0, 0.0], [1.0, 0.0], [1.0, 1.0], [0.0, 1.0]];
        assert!(DomainSpec::polygon(square.clone(), None).validate().is_ok());
        let mut cw = square.clone();
        cw.reverse();
        assert!(DomainSpec::polygon(cw, None).validate().is_err());
        let bowtie = vec![[0.0, 0.0], [1.0, 1.0], [1.0, 0.0], [0.0, 1.0]];
        assert!(DomainSpec::polygon(bowtie, Some(1.0)).validate().is_err());
        let ell = vec![[0.0, 0.0], [2.0, 0.0], [2.0, 1.0], [1.0, 1.0], [1.0, 2.0], [0.0, 2.0]];
        assert!(DomainSpec::polygon(ell.clone(), None).validate().is_err());
        let ok = DomainSpec::polygon(ell, Some(0.5));
        assert!(ok.validate().is_ok());
        assert!((ok.area() - 3.0).abs() < 1e-15);
        assert!(!ok.is_convex());
        assert!(DomainSpec::polygon(vec![[0.0, 0.0], [1.0, 0.0]], None).validate().is_err());
    }

    #[test]
    fn serde_shape_tags() {
        let d: DomainSpec = serde_json::from_str(r#"{"shape":{"kind":"disk","radius":1.0}}"#).unwrap();
        assert_eq!(d, DomainSpec::disk(1.0));
        assert!(serde_json::from_str::<DomainSpec>(r#"{"shape":{"kind":"disk","radius":1.0,"x":2}}"#).is_err());
    }
}
