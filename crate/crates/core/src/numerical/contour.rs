//! Marching-squares level sets and a few planar polygon helpers.

use std::collections::HashMap;

use super::grid::PhaseSpaceField;

/// A traced level-set curve in `(x, p)` coordinates.
#[derive(Clone, Debug, PartialEq)]
pub struct Polyline {
    pub points: Vec<[f64; 2]>,
    pub closed: bool,
}

impl Polyline {
    /// Signed shoelace area, treating the curve as closed.
    pub fn signed_area(&self) -> f64 {
        let n = self.points.len();
        if n < 3 {
            return 0.0;
        }
        let twice: f64 = (0..n)
            .map(|i| {
                let [x0, y0] = self.points[i];
                let [x1, y1] = self.points[(i + 1) % n];
                x0 * y1 - x1 * y0
            })
            .sum();
        0.5 * twice
    }

    pub fn area(&self) -> f64 {
        self.signed_area().abs()
    }

    fn segments(&self) -> impl Iterator<Item = ([f64; 2], [f64; 2])> + '_ {
        let n = self.points.len();
        let count = if self.closed { n } else { n.saturating_sub(1) };
        (0..count).map(move |i| (self.points[i], self.points[(i + 1) % n]))
    }
}

/// Grid edge carrying a contour vertex: `X(i, j)` joins `(i, j)–(i+1, j)`,
/// `P(i, j)` joins `(i, j)–(i, j+1)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
enum Edge {
    X(usize, usize),
    P(usize, usize),
}

/// Traces `{value = level}` by marching squares with linear interpolation
/// along cell edges. Cells touching a masked or non-finite vertex are skipped.
/// Saddles are resolved by the cell-centre average.
pub fn zero_contour(field: &PhaseSpaceField, level: f64) -> Vec<Polyline> {
    let (nx, np) = field.shape();
    if nx < 2 || np < 2 {
        return Vec::new();
    }
    let usable = |i: usize, j: usize| !field.is_masked(i, j) && field.value(i, j).is_finite();
    let above = |i: usize, j: usize| field.value(i, j) > level;

    let mut segments: Vec<(Edge, Edge)> = Vec::new();
    for i in 0..nx - 1 {
        for j in 0..np - 1 {
            let corners = [(i, j), (i + 1, j), (i + 1, j + 1), (i, j + 1)];
            if !corners.iter().all(|&(a, b)| usable(a, b)) {
                continue;
            }
            let state: Vec<bool> = corners.iter().map(|&(a, b)| above(a, b)).collect();
            // bottom, right, top, left
            let edges = [Edge::X(i, j), Edge::P(i + 1, j), Edge::X(i, j + 1), Edge::P(i, j)];
            let crossed: Vec<usize> = (0..4).filter(|&e| state[e] != state[(e + 1) % 4]).collect();
            match crossed.len() {
                2 => segments.push((edges[crossed[0]], edges[crossed[1]])),
                4 => {
                    let centre = corners.iter().map(|&(a, b)| field.value(a, b)).sum::<f64>() / 4.0;
                    if (centre > level) == state[0] {
                        // corners 1 and 3 are cut off
                        segments.push((edges[0], edges[1]));
                        segments.push((edges[2], edges[3]));
                    } else {
                        segments.push((edges[3], edges[0]));
                        segments.push((edges[1], edges[2]));
                    }
                }
                _ => {}
            }
        }
    }

    let vertex = |e: Edge| -> [f64; 2] {
        let ((i0, j0), (i1, j1)) = match e {
            Edge::X(i, j) => ((i, j), (i + 1, j)),
            Edge::P(i, j) => ((i, j), (i, j + 1)),
        };
        let v0 = field.value(i0, j0);
        let v1 = field.value(i1, j1);
        let t = if v1 != v0 { (level - v0) / (v1 - v0) } else { 0.5 };
        let x0 = field.x_axis.value(i0);
        let p0 = field.p_axis.value(j0);
        let x1 = field.x_axis.value(i1);
        let p1 = field.p_axis.value(j1);
        [x0 + t * (x1 - x0), p0 + t * (p1 - p0)]
    };

    stitch(&segments)
        .into_iter()
        .map(|(edges, closed)| Polyline {
            points: edges.into_iter().map(vertex).collect(),
            closed,
        })
        .collect()
}

/// Joins segments sharing an edge into maximal chains. Open chains are
/// traced from their free ends first, then the remaining closed loops.
fn stitch(segments: &[(Edge, Edge)]) -> Vec<(Vec<Edge>, bool)> {
    let mut incident: HashMap<Edge, Vec<usize>> = HashMap::new();
    for (s, &(a, b)) in segments.iter().enumerate() {
        incident.entry(a).or_default().push(s);
        incident.entry(b).or_default().push(s);
    }
    let mut used = vec![false; segments.len()];
    let mut out = Vec::new();

    let walk = |start_seg: usize, start_edge: Edge, used: &mut [bool]| -> (Vec<Edge>, bool) {
        let mut chain = vec![start_edge];
        let mut seg = start_seg;
        let mut at = start_edge;
        loop {
            used[seg] = true;
            let (a, b) = segments[seg];
            let next = if a == at { b } else { a };
            if next == start_edge {
                return (chain, true);
            }
            chain.push(next);
            at = next;
            match incident[&at].iter().find(|&&s| !used[s]) {
                Some(&s) => seg = s,
                None => return (chain, false),
            }
        }
    };

    for s in 0..segments.len() {
        if used[s] {
            continue;
        }
        for end in [segments[s].0, segments[s].1] {
            if incident[&end].len() == 1 {
                out.push(walk(s, end, &mut used));
                break;
            }
        }
    }
    for s in 0..segments.len() {
        if !used[s] {
            out.push(walk(s, segments[s].0, &mut used));
        }
    }
    out
}

/// Farthest intersection of the ray `centre + t(cos θ, sin θ)`, `t > 0`, with
/// any of the polylines.
pub fn ray_distance(polylines: &[Polyline], centre: [f64; 2], theta: f64) -> Option<f64> {
    let (dx, dy) = (theta.cos(), theta.sin());
    let mut best: Option<f64> = None;
    for line in polylines {
        for (a, b) in line.segments() {
            let ex = b[0] - a[0];
            let ey = b[1] - a[1];
            let denom = dx * ey - dy * ex;
            if denom.abs() < 1e-300 {
                continue;
            }
            let wx = a[0] - centre[0];
            let wy = a[1] - centre[1];
            let t = (wx * ey - wy * ex) / denom;
            let s = (wx * dy - wy * dx) / denom;
            if t > 0.0 && (0.0..=1.0).contains(&s) {
                best = Some(best.map_or(t, |b: f64| b.max(t)));
            }
        }
    }
    best
}
