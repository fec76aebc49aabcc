//! Marching squares for the zero level set of a scalar field sampled on a
//! regular grid, with segments linked into polylines.

use std::collections::HashMap;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Rect {
    pub x_min: f64,
    pub x_max: f64,
    pub y_min: f64,
    pub y_max: f64,
}

impl Rect {
    pub fn width(&self) -> f64 {
        self.x_max - self.x_min
    }

    pub fn height(&self) -> f64 {
        self.y_max - self.y_min
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Polyline {
    pub points: Vec<[f64; 2]>,
    pub closed: bool,
}

/// Grid edges are keyed by their lower-left vertex and orientation.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
enum Edge {
    Horizontal(usize, usize),
    Vertical(usize, usize),
}

/// Traces {f = 0} over `rect` using `cells × cells` squares. Vertices where
/// f is exactly zero are treated as positive. Saddle cells are resolved by
/// the sign of the mean of the four corners.
pub fn zero_contour(rect: &Rect, cells: usize, f: impl Fn(f64, f64) -> f64) -> Vec<Polyline> {
    let n = cells.max(1);
    let xs: Vec<f64> = (0..=n).map(|i| rect.x_min + rect.width() * i as f64 / n as f64).collect();
    let ys: Vec<f64> = (0..=n).map(|j| rect.y_min + rect.height() * j as f64 / n as f64).collect();
    let values: Vec<f64> = ys.iter().flat_map(|&y| xs.iter().map(move |&x| (x, y))).map(|(x, y)| f(x, y)).collect();
    let v = |i: usize, j: usize| values[j * (n + 1) + i];

    let mut crossings: HashMap<Edge, [f64; 2]> = HashMap::new();
    let mut crossing = |e: Edge| -> Edge {
        crossings.entry(e).or_insert_with(|| {
            let (i0, j0, i1, j1) = match e {
                Edge::Horizontal(i, j) => (i, j, i + 1, j),
                Edge::Vertical(i, j) => (i, j, i, j + 1),
            };
            let (a, b) = (v(i0, j0), v(i1, j1));
            let t = if a == b { 0.5 } else { (a / (a - b)).clamp(0.0, 1.0) };
            [xs[i0] + t * (xs[i1] - xs[i0]), ys[j0] + t * (ys[j1] - ys[j0])]
        });
        e
    };

    let mut segments: Vec<(Edge, Edge)> = Vec::new();
    for j in 0..n {
        for i in 0..n {
            let corners = [v(i, j), v(i + 1, j), v(i + 1, j + 1), v(i, j + 1)];
            let code = corners
                .iter()
                .enumerate()
                .fold(0u8, |acc, (k, &c)| acc | (u8::from(c >= 0.0) << k));
            if code == 0 || code == 15 {
                continue;
            }
            let bottom = Edge::Horizontal(i, j);
            let right = Edge::Vertical(i + 1, j);
            let top = Edge::Horizontal(i, j + 1);
            let left = Edge::Vertical(i, j);
            let center_positive = corners.iter().sum::<f64>() >= 0.0;
            let pairs: &[(Edge, Edge)] = match code {
                1 | 14 => &[(left, bottom)],
                2 | 13 => &[(bottom, right)],
                3 | 12 => &[(left, right)],
                4 | 11 => &[(right, top)],
                6 | 9 => &[(bottom, top)],
                7 | 8 => &[(left, top)],
                5 if center_positive => &[(left, top), (bottom, right)],
                5 => &[(left, bottom), (right, top)],
                10 if center_positive => &[(left, bottom), (right, top)],
                10 => &[(left, top), (bottom, right)],
                _ => unreachable!(),
            };
            for &(a, b) in pairs {
                segments.push((crossing(a), crossing(b)));
            }
        }
    }
    link(&segments, &crossings)
}

fn link(segments: &[(Edge, Edge)], crossings: &HashMap<Edge, [f64; 2]>) -> Vec<Polyline> {
    let mut incident: HashMap<Edge, Vec<usize>> = HashMap::new();
    for (k, &(a, b)) in segments.iter().enumerate() {
        incident.entry(a).or_default().push(k);
        incident.entry(b).or_default().push(k);
    }
    let mut used = vec![false; segments.len()];
    let other = |k: usize, e: Edge| if segments[k].0 == e { segments[k].1 } else { segments[k].0 };
    let next_unused = |e: Edge, used: &[bool]| incident[&e].iter().copied().find(|&k| !used[k]);

    // Open chains start at edges with a single incident segment; walking
    // those first keeps every open polyline in one piece.
    let mut starts: Vec<Edge> = incident
        .iter()
        .filter(|(_, ks)| ks.len() == 1)
        .map(|(&e, _)| e)
        .collect();
    starts.sort();
    let mut polylines = Vec::new();
    let walk = |start: Edge, used: &mut Vec<bool>| -> Option<Polyline> {
        let mut k = next_unused(start, used)?;
        let mut edges = vec![start];
        let mut at = start;
        loop {
            used[k] = true;
            at = other(k, at);
            edges.push(at);
            match next_unused(at, used) {
                Some(next) => k = next,
                None => break,
            }
        }
        let closed = edges.len() > 2 && edges.first() == edges.last();
        if closed {
            edges.pop();
        }
        Some(Polyline {
            points: edges.iter().map(|e| crossings[e]).collect(),
            closed,
        })
    };
    for start in starts {
        if let Some(p) = walk(start, &mut used) {
            polylines.push(p);
        }
    }
    for k in 0..segments.len() {
        if !used[k] {
            if let Some(p) = walk(segments[k].0, &mut used) {
                polylines.push(p);
            }
        }
    }
    polylines
}

#[cfg(test)]
mod tests {
    use super::*;

    fn square(r: f64) -> Rect {
        Rect {
            x_min: -r,
            x_max: r,
            y_min: -r,
            y_max: r,
        }
    }

    #[test]
    fn circle_is_one_closed_loop() {
        let lines = zero_contour(&square(2.0), 64, |x, y| 1.0 - x * x - y * y);
        assert_eq!(lines.len(), 1);
        assert!(lines[0].closed);
        let cell = 4.0 / 64.0;
        for p in &lines[0].points {
            let r = (p[0] * p[0] + p[1] * p[1]).sqrt();
            assert!((r - 1.0).abs() < 0.1 * cell, "r = {r}");
        }
    }

    #[test]
    fn line_crossing_viewport_is_open() {
        let lines = zero_contour(&square(1.0), 10, |x, y| x + 0.5 * y - 0.1);
        assert_eq!(lines.len(), 1);
        assert!(!lines[0].closed);
        for p in &lines[0].points {
            assert!((p[0] + 0.5 * p[1] - 0.1).abs() < 1e-12);
        }
    }

    #[test]
    fn two_branches_stay_separate() {
        let lines = zero_contour(&square(3.0), 60, |x, y| x * x - y * y - 1.0);
        assert_eq!(lines.len(), 2);
        assert!(lines.iter().all(|l| !l.closed));
    }

    #[test]
    fn no_crossing_gives_nothing() {
        assert!(zero_contour(&square(1.0), 8, |_, _| 1.0).is_empty());
        assert!(zero_contour(&square(1.0), 8, |_, _| -1.0).is_empty());
    }

    #[test]
    fn output_is_deterministic() {
        let f = |x: f64, y: f64| (x * 3.0).sin() * (y * 2.0).cos() - 0.2;
        let a = zero_contour(&square(2.0), 40, f);
        let b = zero_contour(&square(2.0), 40, f);
        assert_eq!(a, b);
    }
}
