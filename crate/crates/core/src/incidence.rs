//! Finite point–line geometries, generalized-quadrangle certification, perp
//! operators, regular points, Payne derivation and the affine plane at a
//! regular point.

use std::collections::{HashMap, VecDeque};

use fixedbitset::FixedBitSet;
use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum IncidenceError {
    #[error("line {line} repeats line {other}")]
    RepeatedLine { line: usize, other: usize },
    #[error("line {0} has fewer than two points")]
    ShortLine(usize),
    #[error("point index {point} out of range on line {line}")]
    PointOutOfRange { line: usize, point: usize },
    #[error("line sizes or point degrees are not uniform (line {line} has {points} points, point {point} is on {lines} lines)")]
    NotUniformDegrees {
        line: usize,
        points: usize,
        point: usize,
        lines: usize,
    },
    #[error("anti-flag ({point}, line {line}) sees {collinear} collinear points on the line")]
    AxiomViolation {
        point: usize,
        line: usize,
        collinear: usize,
    },
    #[error("lines {lines:?} share points {points:?}")]
    ContainsDigon {
        lines: (usize, usize),
        points: (usize, usize),
    },
    #[error("incidence graph has girth {girth} and diameter {diameter}")]
    BadGirthOrDiameter { girth: usize, diameter: usize },
    #[error("perp of the empty set is undefined")]
    EmptySet,
    #[error("point {point} is not regular (witness {witness})")]
    NotRegular { point: usize, witness: usize },
    #[error("quadrangle has order ({s}, {t}), expected s = t")]
    NotSquareOrder { s: usize, t: usize },
    #[error("derived structure is not an affine plane: {0}")]
    NotAffinePlane(String),
    #[error("structure is too large: {0}")]
    TooLarge(String),
    #[error("malformed input: {0}")]
    Parse(String),
}

/// Where a point or line of a structure came from.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum Label {
    /// Plain index with no further provenance.
    Index(usize),
    /// Encoded homogeneous coordinates of a projective point.
    Coords(Vec<u32>),
    /// Element of a structure this one was derived from.
    Original(usize),
    /// Hyperbolic line `{x, y}^⊥⊥`, listed by original point ids.
    Hyperbolic(Vec<usize>),
    /// A set of original points (e.g. a trace `{x, z}^⊥`).
    PointSet(Vec<usize>),
    /// Cell `(row, column)` of a grid.
    Cell(usize, usize),
}

/// A finite geometry given by its lines as point lists.
#[derive(Debug, Clone)]
pub struct IncidenceStructure {
    line_points: Vec<Vec<u32>>,
    point_lines: Vec<Vec<u32>>,
    point_labels: Vec<Label>,
    line_labels: Vec<Label>,
}

/// Which checks a certificate rests on.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize)]
pub struct CheckedAxioms {
    pub uniform_degrees: bool,
    pub no_digons: bool,
    pub antiflag: bool,
    pub girth_diameter: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct GQCertificate {
    pub s: usize,
    pub t: usize,
    pub thick: bool,
    pub npoints: usize,
    pub nlines: usize,
    pub checked: CheckedAxioms,
}

impl IncidenceStructure {
    /// Builds a structure from point lists; labels default to indices.
    pub fn new(npoints: usize, lines: Vec<Vec<usize>>) -> Result<Self, IncidenceError> {
        let point_labels = (0..npoints).map(Label::Index).collect();
        let line_labels = (0..lines.len()).map(Label::Index).collect();
        Self::with_labels(npoints, lines, point_labels, line_labels)
    }

    pub fn with_labels(
        npoints: usize,
        lines: Vec<Vec<usize>>,
        point_labels: Vec<Label>,
        line_labels: Vec<Label>,
    ) -> Result<Self, IncidenceError> {
        assert_eq!(point_labels.len(), npoints, "one label per point");
        assert_eq!(line_labels.len(), lines.len(), "one label per line");
        let mut line_points = Vec::with_capacity(lines.len());
        let mut seen: HashMap<Vec<u32>, usize> = HashMap::with_capacity(lines.len());
        for (li, mut pts) in lines.into_iter().enumerate() {
            pts.sort_unstable();
            pts.dedup();
            if pts.len() < 2 {
                return Err(IncidenceError::ShortLine(li));
            }
            if let Some(&p) = pts.iter().find(|&&p| p >= npoints) {
                return Err(IncidenceError::PointOutOfRange { line: li, point: p });
            }
            let pts: Vec<u32> = pts.into_iter().map(|p| p as u32).collect();
            if let Some(&other) = seen.get(&pts) {
                return Err(IncidenceError::RepeatedLine { line: li, other });
            }
            seen.insert(pts.clone(), li);
            line_points.push(pts);
        }
        let mut point_lines = vec![Vec::new(); npoints];
        for (li, pts) in line_points.iter().enumerate() {
            for &p in pts {
                point_lines[p as usize].push(li as u32);
            }
        }
        Ok(IncidenceStructure {
            line_points,
            point_lines,
            point_labels,
            line_labels,
        })
    }

    /// The `n × n` grid: points are cells, lines are rows and columns.
    pub fn grid(n: usize) -> Self {
        let mut lines = Vec::new();
        let mut labels = Vec::new();
        for r in 0..n {
            lines.push((0..n).map(|c| r * n + c).collect());
            labels.push(Label::Index(r));
        }
        for c in 0..n {
            lines.push((0..n).map(|r| r * n + c).collect());
            labels.push(Label::Index(n + c));
        }
        let pl = (0..n * n).map(|i| Label::Cell(i / n, i % n)).collect();
        Self::with_labels(n * n, lines, pl, labels).expect("grid is well formed")
    }

    pub fn npoints(&self) -> usize {
        self.point_lines.len()
    }

    pub fn nlines(&self) -> usize {
        self.line_points.len()
    }

    pub fn line_points(&self, line: usize) -> impl Iterator<Item = usize> + '_ {
        self.line_points[line].iter().map(|&p| p as usize)
    }

    pub fn point_lines(&self, point: usize) -> impl Iterator<Item = usize> + '_ {
        self.point_lines[point].iter().map(|&l| l as usize)
    }

    pub fn point_label(&self, point: usize) -> &Label {
        &self.point_labels[point]
    }

    pub fn line_label(&self, line: usize) -> &Label {
        &self.line_labels[line]
    }

    pub fn incident(&self, point: usize, line: usize) -> bool {
        self.line_points[line].binary_search(&(point as u32)).is_ok()
    }

    /// Index of the line with exactly this point set, if any.
    pub fn find_line(&self, points: &[usize]) -> Option<usize> {
        let mut pts: Vec<u32> = points.iter().map(|&p| p as u32).collect();
        pts.sort_unstable();
        let first = *pts.first()? as usize;
        self.point_lines(first).find(|&l| self.line_points[l] == pts)
    }

    /// Point × line incidence rows as bitsets.
    pub fn incidence_matrix(&self) -> Vec<FixedBitSet> {
        self.point_lines
            .iter()
            .map(|ls| {
                let mut b = FixedBitSet::with_capacity(self.nlines());
                for &l in ls {
                    b.insert(l as usize);
                }
                b
            })
            .collect()
    }

    /// `x^⊥`: all points collinear with `x`, including `x`.
    pub fn collinear(&self, x: usize) -> FixedBitSet {
        let mut b = FixedBitSet::with_capacity(self.npoints());
        b.insert(x);
        for &l in &self.point_lines[x] {
            for &p in &self.line_points[l as usize] {
                b.insert(p as usize);
            }
        }
        b
    }

    pub fn are_collinear(&self, x: usize, y: usize) -> bool {
        x == y || self.point_lines[x].iter().any(|&l| self.incident(y, l as usize))
    }

    /// `A^⊥`, the points collinear with every member of `A`.
    pub fn perp(&self, set: &[usize]) -> Result<Vec<usize>, IncidenceError> {
        let (&first, rest) = set.split_first().ok_or(IncidenceError::EmptySet)?;
        let mut acc = self.collinear(first);
        for &a in rest {
            acc.intersect_with(&self.collinear(a));
        }
        Ok(acc.ones().collect())
    }

    pub fn perp_perp(&self, set: &[usize]) -> Result<Vec<usize>, IncidenceError> {
        let p = self.perp(set)?;
        self.perp(&p)
    }

    /// Certifies the generalized-quadrangle axioms: uniform line sizes and point
    /// degrees, no two points on two lines, and for every anti-flag exactly one
    /// point of the line collinear with the point.
    pub fn verify_gq(&self) -> Result<GQCertificate, IncidenceError> {
        let n = self.npoints();
        if n == 0 || self.nlines() == 0 {
            return Err(IncidenceError::NotUniformDegrees {
                line: 0,
                points: 0,
                point: 0,
                lines: 0,
            });
        }
        let s1 = self.line_points[0].len();
        let t1 = self.point_lines[0].len();
        let bad_line = self.line_points.iter().position(|l| l.len() != s1);
        let bad_point = self.point_lines.iter().position(|p| p.len() != t1);
        if bad_line.is_some() || bad_point.is_some() {
            let line = bad_line.unwrap_or(0);
            let point = bad_point.unwrap_or(0);
            return Err(IncidenceError::NotUniformDegrees {
                line,
                points: self.line_points[line].len(),
                point,
                lines: self.point_lines[point].len(),
            });
        }
        self.check_digons()?;
        let violation = (0..n).into_par_iter().find_map_first(|x| {
            let coll = self.collinear(x);
            self.line_points.iter().enumerate().find_map(|(li, pts)| {
                if self.incident(x, li) {
                    return None;
                }
                let c = pts.iter().filter(|&&p| coll.contains(p as usize)).count();
                (c != 1).then_some(IncidenceError::AxiomViolation {
                    point: x,
                    line: li,
                    collinear: c,
                })
            })
        });
        if let Some(e) = violation {
            return Err(e);
        }
        let (s, t) = (s1 - 1, t1 - 1);
        Ok(GQCertificate {
            s,
            t,
            thick: s > 1 && t > 1,
            npoints: n,
            nlines: self.nlines(),
            checked: CheckedAxioms {
                uniform_degrees: true,
                no_digons: true,
                antiflag: true,
                girth_diameter: false,
            },
        })
    }

    /// [`verify_gq`](Self::verify_gq) plus an independent check that the
    /// incidence graph has girth 8 and diameter 4.
    pub fn verify_gq_with_bfs(&self) -> Result<GQCertificate, IncidenceError> {
        let mut cert = self.verify_gq()?;
        let (girth, diameter) = self.girth_and_diameter();
        if girth != 8 || diameter != 4 {
            return Err(IncidenceError::BadGirthOrDiameter { girth, diameter });
        }
        cert.checked.girth_diameter = true;
        Ok(cert)
    }

    fn check_digons(&self) -> Result<(), IncidenceError> {
        let mut owner: HashMap<(u32, u32), u32> = HashMap::new();
        for (li, pts) in self.line_points.iter().enumerate() {
            for (i, &a) in pts.iter().enumerate() {
                for &b in &pts[i + 1..] {
                    if let Some(&other) = owner.get(&(a, b)) {
                        return Err(IncidenceError::ContainsDigon {
                            lines: (other as usize, li),
                            points: (a as usize, b as usize),
                        });
                    }
                    owner.insert((a, b), li as u32);
                }
            }
        }
        Ok(())
    }

    /// Girth and diameter of the bipartite incidence graph, by BFS from every vertex.
    pub fn girth_and_diameter(&self) -> (usize, usize) {
        let n = self.npoints();
        let total = n + self.nlines();
        let neighbours = |v: usize| -> Vec<usize> {
            if v < n {
                self.point_lines(v).map(|l| n + l).collect()
            } else {
                self.line_points(v - n).collect()
            }
        };
        let results: Vec<(usize, usize)> = (0..total)
            .into_par_iter()
            .map(|src| {
                let mut dist = vec![usize::MAX; total];
                let mut parent = vec![usize::MAX; total];
                dist[src] = 0;
                let mut queue = VecDeque::from([src]);
                let mut girth = usize::MAX;
                let mut ecc = 0;
                while let Some(v) = queue.pop_front() {
                    ecc = ecc.max(dist[v]);
                    for w in neighbours(v) {
                        if dist[w] == usize::MAX {
                            dist[w] = dist[v] + 1;
                            parent[w] = v;
                            queue.push_back(w);
                        } else if parent[v] != w {
                            girth = girth.min(dist[v] + dist[w] + 1);
                        }
                    }
                }
                if dist.contains(&usize::MAX) {
                    ecc = usize::MAX;
                }
                (girth, ecc)
            })
            .collect();
        let girth = results.iter().map(|r| r.0).min().unwrap_or(usize::MAX);
        let diameter = results.iter().map(|r| r.1).max().unwrap_or(0);
        (girth, diameter)
    }

    /// Whether `|{x, y}^⊥⊥| = t + 1` for every `y` not collinear with `x`.
    pub fn is_regular_point(&self, cert: &GQCertificate, x: usize) -> Result<bool, IncidenceError> {
        Ok(self.regularity_witness(cert, x)?.is_none())
    }

    /// A point `y ≁ x` with `|{x, y}^⊥⊥| ≠ t + 1`, if one exists.
    pub fn regularity_witness(&self, cert: &GQCertificate, x: usize) -> Result<Option<usize>, IncidenceError> {
        let cx = self.collinear(x);
        let witness = (0..self.npoints())
            .into_par_iter()
            .filter(|&y| !cx.contains(y))
            .find_first(|&y| {
                let pp = self.perp_perp(&[x, y]).expect("nonempty");
                pp.len() != cert.t + 1
            });
        Ok(witness)
    }

    /// The hyperbolic lines `{x, y}^⊥⊥` through a regular point `x`, each as a
    /// sorted point list, in order of their smallest point other than `x`.
    pub fn hyperbolic_lines(&self, cert: &GQCertificate, x: usize) -> Result<Vec<Vec<usize>>, IncidenceError> {
        let cx = self.collinear(x);
        let mut covered = FixedBitSet::with_capacity(self.npoints());
        let mut out = Vec::new();
        for y in 0..self.npoints() {
            if cx.contains(y) || covered.contains(y) {
                continue;
            }
            let pp = self.perp_perp(&[x, y])?;
            if pp.len() != cert.t + 1 {
                return Err(IncidenceError::NotRegular { point: x, witness: y });
            }
            for &p in &pp {
                covered.insert(p);
            }
            out.push(pp);
        }
        Ok(out)
    }

    /// The Payne derivative at a regular point `x` of a quadrangle of order (s, s).
    ///
    /// Points: points not collinear with `x`. Lines: the lines not through `x`
    /// (restricted to those points) and the hyperbolic lines `{x, y}^⊥⊥` minus `x`.
    /// Point labels are `Original(id)`; line labels are `Original(line id)` or
    /// `Hyperbolic(points)`.
    pub fn payne_derive(&self, cert: &GQCertificate, x: usize) -> Result<IncidenceStructure, IncidenceError> {
        if cert.s != cert.t {
            return Err(IncidenceError::NotSquareOrder { s: cert.s, t: cert.t });
        }
        if let Some(w) = self.regularity_witness(cert, x)? {
            return Err(IncidenceError::NotRegular { point: x, witness: w });
        }
        let cx = self.collinear(x);
        let mut new_id = vec![usize::MAX; self.npoints()];
        let mut point_labels = Vec::new();
        for p in 0..self.npoints() {
            if !cx.contains(p) {
                new_id[p] = point_labels.len();
                point_labels.push(Label::Original(p));
            }
        }
        let mut lines = Vec::new();
        let mut line_labels = Vec::new();
        for (li, pts) in self.line_points.iter().enumerate() {
            if self.incident(x, li) {
                continue;
            }
            lines.push(
                pts.iter()
                    .filter(|&&p| !cx.contains(p as usize))
                    .map(|&p| new_id[p as usize])
                    .collect(),
            );
            line_labels.push(Label::Original(li));
        }
        for hl in self.hyperbolic_lines(cert, x)? {
            lines.push(hl.iter().filter(|&&p| p != x).map(|&p| new_id[p]).collect());
            line_labels.push(Label::Hyperbolic(hl));
        }
        IncidenceStructure::with_labels(point_labels.len(), lines, point_labels, line_labels)
    }

    /// The affine plane Π(x) of a regular point of a quadrangle of order (s, s).
    ///
    /// Points are the traces `{x, z}^⊥` for `z ≁ x` (label `PointSet`), lines are
    /// the points `y ∈ x^⊥ ∖ {x}` (label `Original(y)`), and a trace lies on `y`
    /// when it contains `y`. The affine-plane axioms are checked before returning.
    pub fn affine_plane_from_regular_point(
        &self,
        cert: &GQCertificate,
        x: usize,
    ) -> Result<IncidenceStructure, IncidenceError> {
        if cert.s != cert.t {
            return Err(IncidenceError::NotSquareOrder { s: cert.s, t: cert.t });
        }
        let cx = self.collinear(x);
        let mut traces: Vec<Vec<usize>> = Vec::new();
        let mut seen = std::collections::HashSet::new();
        for z in 0..self.npoints() {
            if cx.contains(z) {
                continue;
            }
            let tr = self.perp(&[x, z])?;
            if seen.insert(tr.clone()) {
                traces.push(tr);
            }
        }
        traces.sort();
        let ys: Vec<usize> = cx.ones().filter(|&y| y != x).collect();
        let mut lines = Vec::with_capacity(ys.len());
        for &y in &ys {
            lines.push(
                traces
                    .iter()
                    .enumerate()
                    .filter(|(_, tr)| tr.binary_search(&y).is_ok())
                    .map(|(i, _)| i)
                    .collect::<Vec<_>>(),
            );
        }
        let point_labels = traces.iter().cloned().map(Label::PointSet).collect();
        let line_labels = ys.iter().map(|&y| Label::Original(y)).collect();
        let plane = IncidenceStructure::with_labels(traces.len(), lines, point_labels, line_labels)
            .map_err(|e| IncidenceError::NotAffinePlane(e.to_string()))?;
        plane.check_affine_plane(cert.s)?;
        Ok(plane)
    }

    /// Affine plane of order `n`: n² points, n points per line, any two points on
    /// exactly one line, and n + 1 parallel classes of n lines.
    pub fn check_affine_plane(&self, n: usize) -> Result<(), IncidenceError> {
        let bad = |m: String| Err(IncidenceError::NotAffinePlane(m));
        if self.npoints() != n * n {
            return bad(format!("{} points, expected {}", self.npoints(), n * n));
        }
        if self.nlines() != n * (n + 1) {
            return bad(format!("{} lines, expected {}", self.nlines(), n * (n + 1)));
        }
        if let Some(l) = (0..self.nlines()).find(|&l| self.line_points[l].len() != n) {
            return bad(format!("line {l} has {} points", self.line_points[l].len()));
        }
        for a in 0..self.npoints() {
            for b in a + 1..self.npoints() {
                let c = self.point_lines(a).filter(|&l| self.incident(b, l)).count();
                if c != 1 {
                    return bad(format!("points {a},{b} lie on {c} common lines"));
                }
            }
        }
        let classes = self.parallel_classes();
        if classes.len() != n + 1 || classes.iter().any(|c| c.len() != n) {
            return bad(format!(
                "parallel classes have sizes {:?}",
                classes.iter().map(Vec::len).collect::<Vec<_>>()
            ));
        }
        Ok(())
    }

    /// Lines grouped by disjointness (parallelism), in order of first member.
    pub fn parallel_classes(&self) -> Vec<Vec<usize>> {
        let mut class_of = vec![usize::MAX; self.nlines()];
        let mut classes: Vec<Vec<usize>> = Vec::new();
        for l in 0..self.nlines() {
            if class_of[l] != usize::MAX {
                continue;
            }
            let id = classes.len();
            let mut members = vec![l];
            class_of[l] = id;
            for m in l + 1..self.nlines() {
                if class_of[m] == usize::MAX
                    && self.line_points[l]
                        .iter()
                        .all(|p| self.line_points[m].binary_search(p).is_err())
                {
                    class_of[m] = id;
                    members.push(m);
                }
            }
            classes.push(members);
        }
        classes
    }

    /// CSV rows `point_id,line_id` with a header.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("point_id,line_id\n");
        for (l, pts) in self.line_points.iter().enumerate() {
            for &p in pts {
                out.push_str(&format!("{p},{l}\n"));
            }
        }
        out
    }

    /// Parses the CSV format written by [`to_csv`](Self::to_csv).
    pub fn from_csv(text: &str) -> Result<Self, IncidenceError> {
        let mut lines_map: Vec<Vec<usize>> = Vec::new();
        let mut npoints = 0;
        for (i, row) in text.lines().enumerate() {
            let row = row.trim();
            if row.is_empty() || (i == 0 && row == "point_id,line_id") {
                continue;
            }
            let (p, l) = row
                .split_once(',')
                .ok_or_else(|| IncidenceError::Parse(format!("line {}: expected two fields", i + 1)))?;
            let parse = |s: &str| {
                s.trim()
                    .parse::<usize>()
                    .map_err(|e| IncidenceError::Parse(format!("line {}: {e}", i + 1)))
            };
            let (p, l) = (parse(p)?, parse(l)?);
            if l >= lines_map.len() {
                lines_map.resize(l + 1, Vec::new());
            }
            lines_map[l].push(p);
            npoints = npoints.max(p + 1);
        }
        Self::new(npoints, lines_map)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    /// W(2) as the "doily": points are 2-subsets of {0..5}, lines are
    /// partitions into three 2-subsets.
    fn doily() -> IncidenceStructure {
        let mut pairs = Vec::new();
        for a in 0..6 {
            for b in a + 1..6 {
                pairs.push((a, b));
            }
        }
        let id = |a: usize, b: usize| pairs.iter().position(|&p| p == (a.min(b), a.max(b))).unwrap();
        let mut lines = std::collections::BTreeSet::new();
        for &(a, b) in &pairs {
            let rest: Vec<usize> = (0..6).filter(|&c| c != a && c != b).collect();
            for &(c, d) in &[(rest[0], rest[1]), (rest[0], rest[2]), (rest[0], rest[3])] {
                let others: Vec<usize> = rest.iter().copied().filter(|&e| e != c && e != d).collect();
                let mut l = vec![id(a, b), id(c, d), id(others[0], others[1])];
                l.sort();
                lines.insert(l);
            }
        }
        IncidenceStructure::new(15, lines.into_iter().collect()).unwrap()
    }

    #[test]
    fn grid_is_thin_quadrangle() {
        let g = IncidenceStructure::grid(3);
        let cert = g.verify_gq_with_bfs().unwrap();
        assert_eq!((cert.s, cert.t, cert.thick), (2, 1, false));
        assert!(g.is_regular_point(&cert, 0).unwrap());
    }

    #[test]
    fn doily_is_gq_22_and_derives_grid_like() {
        let d = doily();
        let cert = d.verify_gq_with_bfs().unwrap();
        assert_eq!((cert.s, cert.t, cert.npoints, cert.nlines), (2, 2, 15, 15));
        assert!((0..15).all(|x| d.is_regular_point(&cert, x).unwrap()));
        assert_eq!(d.perp(&[0]).unwrap().len(), 1 + 2 * 3);
        let derived = d.payne_derive(&cert, 0).unwrap();
        let dc = derived.verify_gq().unwrap();
        assert_eq!((dc.s, dc.t, dc.npoints), (1, 3, 8));
        let plane = d.affine_plane_from_regular_point(&cert, 0).unwrap();
        assert_eq!((plane.npoints(), plane.nlines()), (4, 6));
    }

    #[test]
    fn detects_violations() {
        // Uniform degrees, but lines meet in two points.
        let s = IncidenceStructure::new(4, vec![vec![0, 1, 2], vec![0, 1, 3], vec![0, 2, 3], vec![1, 2, 3]]).unwrap();
        assert!(matches!(s.verify_gq(), Err(IncidenceError::ContainsDigon { .. })));
        // A triangle: uniform degrees, no digons, but anti-flags see 2 collinear points.
        let tri = IncidenceStructure::new(3, vec![vec![0, 1], vec![1, 2], vec![0, 2]]).unwrap();
        assert!(matches!(tri.verify_gq(), Err(IncidenceError::AxiomViolation { .. })));
        assert!(matches!(
            IncidenceStructure::new(3, vec![vec![0, 1], vec![1, 0]]),
            Err(IncidenceError::RepeatedLine { .. })
        ));
        assert!(matches!(
            IncidenceStructure::new(3, vec![vec![0]]),
            Err(IncidenceError::ShortLine(0))
        ));
        let g = IncidenceStructure::grid(3);
        assert_eq!(g.perp(&[]), Err(IncidenceError::EmptySet));
    }

    #[test]
    fn perp_perp_of_collinear_pair_is_their_line() {
        let d = doily();
        let line: Vec<usize> = d.line_points(0).collect();
        assert_eq!(d.perp_perp(&line[..2]).unwrap(), line);
    }

    #[test]
    fn csv_round_trip() {
        let d = doily();
        let back = IncidenceStructure::from_csv(&d.to_csv()).unwrap();
        assert_eq!(back.npoints(), 15);
        assert_eq!(back.verify_gq().unwrap().s, 2);
        assert!(IncidenceStructure::from_csv("point_id,line_id\nx,1\n").is_err());
    }
}
