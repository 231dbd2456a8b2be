//! Additively weighted centroidal Voronoi treemaps on a sample grid.
//!
//! Each sibling group is laid out inside its parent's cell. A sample `q`
//! belongs to the site minimizing `|p_i − q| − r_i`; between assignments,
//! each site moves to its cell's centroid and its radius is scaled by
//! `√(target / current)` (clamped to `[0.5, 2]` per step) until every cell's
//! area is within the relative tolerance of its target.

use alloc::string::{String, ToString};
use alloc::vec::Vec;
use alloc::{format, vec};

use rand_chacha::ChaCha8Rng;
use rand_core::{RngCore, SeedableRng};

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum TreemapError {
    #[error("{sites} sites but only {samples} samples in the region")]
    TooManySites { sites: usize, samples: usize },
    #[error("weight of `{0}` must be positive and finite")]
    BadWeight(String),
    #[error("node `{0}` weighs less than the sum of its children")]
    Underweight(String),
    #[error("no sites to lay out")]
    NoSites,
    #[error("grid resolution must be at least 32")]
    Resolution,
    #[error("area tolerance must be positive")]
    Tolerance,
    #[error("at `{path}`: {source}")]
    At {
        path: String,
        #[source]
        source: alloc::boxed::Box<TreemapError>,
    },
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LayoutParams {
    /// Samples per side of the square grid.
    pub resolution: u32,
    pub max_iterations: u32,
    /// Relative area tolerance.
    pub tolerance: f64,
    pub seed: u64,
}

impl Default for LayoutParams {
    fn default() -> Self {
        LayoutParams {
            resolution: 256,
            max_iterations: 100,
            tolerance: 0.02,
            seed: 0,
        }
    }
}

impl LayoutParams {
    pub fn check(&self) -> Result<(), TreemapError> {
        if self.resolution < 32 {
            return Err(TreemapError::Resolution);
        }
        if self.tolerance.is_nan() || self.tolerance <= 0.0 {
            return Err(TreemapError::Tolerance);
        }
        Ok(())
    }
}

/// Set of grid samples (row-major indices into a `width`-wide grid).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Region {
    pub width: u32,
    pub height: u32,
    pub samples: Vec<u32>,
}

impl Region {
    pub fn full(width: u32, height: u32) -> Self {
        Region {
            width,
            height,
            samples: (0..width * height).collect(),
        }
    }

    pub fn subset(&self, samples: Vec<u32>) -> Self {
        Region {
            width: self.width,
            height: self.height,
            samples,
        }
    }

    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }

    /// Centre of a sample in grid units.
    pub fn point(&self, sample: u32) -> (f64, f64) {
        ((sample % self.width) as f64 + 0.5, (sample / self.width) as f64 + 0.5)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SiteState {
    pub position: (f64, f64),
    pub radius: f64,
    /// Share of the parent region this site should cover.
    pub target: f64,
}

fn splitmix(mut x: u64) -> u64 {
    x = x.wrapping_add(0x9E37_79B9_7F4A_7C15);
    x = (x ^ (x >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    x = (x ^ (x >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    x ^ (x >> 31)
}

fn unit(rng: &mut ChaCha8Rng) -> f64 {
    (rng.next_u64() >> 11) as f64 / (1u64 << 53) as f64
}

/// Initial sites on a seeded jittered grid over the region's bounding box,
/// each snapped to the nearest unused region sample.
pub fn initial_sites(region: &Region, weights: &[f64], seed: u64) -> Result<Vec<SiteState>, TreemapError> {
    let k = weights.len();
    if k == 0 {
        return Err(TreemapError::NoSites);
    }
    if k > region.len() {
        return Err(TreemapError::TooManySites {
            sites: k,
            samples: region.len(),
        });
    }
    let total: f64 = weights.iter().sum();
    for (i, w) in weights.iter().enumerate() {
        if !(*w > 0.0 && w.is_finite()) {
            return Err(TreemapError::BadWeight(format!("site {i}")));
        }
    }

    let (mut x0, mut y0, mut x1, mut y1) = (f64::MAX, f64::MAX, f64::MIN, f64::MIN);
    for &s in &region.samples {
        let (x, y) = region.point(s);
        x0 = x0.min(x - 0.5);
        y0 = y0.min(y - 0.5);
        x1 = x1.max(x + 0.5);
        y1 = y1.max(y + 0.5);
    }
    let (w, h) = (x1 - x0, y1 - y0);
    let gx = (libm::ceil(libm::sqrt(k as f64 * w / h)) as usize).clamp(1, k);
    let gy = k.div_ceil(gx);

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut cells: Vec<usize> = (0..gx * gy).collect();
    for i in (1..cells.len()).rev() {
        let j = (rng.next_u64() % (i as u64 + 1)) as usize;
        cells.swap(i, j);
    }
    cells.truncate(k);
    cells.sort_unstable();

    let mut used = vec![false; region.len()];
    let n = region.len() as f64;
    let mut sites = Vec::with_capacity(k);
    for (i, cell) in cells.into_iter().enumerate() {
        let (cx, cy) = ((cell % gx) as f64, (cell / gx) as f64);
        let px = x0 + (cx + 0.25 + 0.5 * unit(&mut rng)) * w / gx as f64;
        let py = y0 + (cy + 0.25 + 0.5 * unit(&mut rng)) * h / gy as f64;
        let mut best = usize::MAX;
        let mut best_d = f64::MAX;
        for (j, &s) in region.samples.iter().enumerate() {
            if used[j] {
                continue;
            }
            let (qx, qy) = region.point(s);
            let d = (qx - px) * (qx - px) + (qy - py) * (qy - py);
            if d < best_d {
                best_d = d;
                best = j;
            }
        }
        used[best] = true;
        let target = weights[i] / total;
        sites.push(SiteState {
            position: region.point(region.samples[best]),
            radius: libm::sqrt(target * n / core::f64::consts::PI),
            target,
        });
    }
    Ok(sites)
}

/// Assigns every region sample to its additively weighted nearest site
/// (ties to the lowest index). Returns per-sample owners.
pub fn assign(region: &Region, sites: &[SiteState]) -> Vec<u32> {
    region
        .samples
        .iter()
        .map(|&s| {
            let (qx, qy) = region.point(s);
            let mut best = 0u32;
            let mut best_d = f64::INFINITY;
            for (i, site) in sites.iter().enumerate() {
                let (px, py) = site.position;
                let d = libm::sqrt((qx - px) * (qx - px) + (qy - py) * (qy - py)) - site.radius;
                if d < best_d {
                    best_d = d;
                    best = i as u32;
                }
            }
            best
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq)]
pub struct SiblingLayout {
    /// Samples of each site's cell, in region order.
    pub cells: Vec<Vec<u32>>,
    pub sites: Vec<SiteState>,
    pub iterations: u32,
    pub converged: bool,
    /// Largest relative area error of the returned assignment.
    pub max_error: f64,
}

fn areas_and_error(owner: &[u32], sites: &[SiteState], n: usize) -> (Vec<u64>, f64) {
    let mut areas = vec![0u64; sites.len()];
    for &o in owner {
        areas[o as usize] += 1;
    }
    let err = areas
        .iter()
        .zip(sites)
        .map(|(&a, s)| {
            let target = s.target * n as f64;
            libm::fabs(a as f64 - target) / target
        })
        .fold(0.0, f64::max);
    (areas, err)
}

pub fn layout_siblings(region: &Region, sites: &[SiteState], params: &LayoutParams) -> Result<SiblingLayout, TreemapError> {
    params.check()?;
    if sites.is_empty() {
        return Err(TreemapError::NoSites);
    }
    if sites.len() > region.len() {
        return Err(TreemapError::TooManySites {
            sites: sites.len(),
            samples: region.len(),
        });
    }
    for (i, s) in sites.iter().enumerate() {
        if !(s.target > 0.0 && s.target.is_finite()) {
            return Err(TreemapError::BadWeight(format!("site {i}")));
        }
    }
    let n = region.len();
    let mut sites = sites.to_vec();
    let mut iterations = 0;
    let mut owner = assign(region, &sites);
    let (mut areas, mut err) = areas_and_error(&owner, &sites, n);
    while err > params.tolerance && iterations < params.max_iterations {
        let mut sums = vec![(0.0f64, 0.0f64); sites.len()];
        for (&s, &o) in region.samples.iter().zip(&owner) {
            let (x, y) = region.point(s);
            sums[o as usize].0 += x;
            sums[o as usize].1 += y;
        }
        for (i, site) in sites.iter_mut().enumerate() {
            let target = site.target * n as f64;
            if areas[i] > 0 {
                let a = areas[i] as f64;
                site.position = (sums[i].0 / a, sums[i].1 / a);
                let scale = libm::sqrt(target / a).clamp(0.5, 2.0);
                site.radius = (site.radius * scale).max(0.5);
            } else {
                site.radius = site.radius.max(0.5) * 2.0;
            }
        }
        iterations += 1;
        owner = assign(region, &sites);
        (areas, err) = areas_and_error(&owner, &sites, n);
    }
    let mut cells = vec![Vec::new(); sites.len()];
    for (&s, &o) in region.samples.iter().zip(&owner) {
        cells[o as usize].push(s);
    }
    Ok(SiblingLayout {
        cells,
        sites,
        iterations,
        converged: err <= params.tolerance,
        max_error: err,
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct TreemapNode {
    pub name: String,
    pub weight: f64,
    pub children: Vec<TreemapNode>,
}

impl TreemapNode {
    pub fn leaf(name: impl Into<String>, weight: f64) -> Self {
        TreemapNode {
            name: name.into(),
            weight,
            children: Vec::new(),
        }
    }

    /// Internal node weighing the sum of its children.
    pub fn group(name: impl Into<String>, children: Vec<TreemapNode>) -> Self {
        TreemapNode {
            name: name.into(),
            weight: children.iter().map(|c| c.weight).sum(),
            children,
        }
    }

    pub fn is_leaf(&self) -> bool {
        self.children.is_empty()
    }

    pub fn leaf_count(&self) -> usize {
        if self.is_leaf() {
            1
        } else {
            self.children.iter().map(TreemapNode::leaf_count).sum()
        }
    }

    pub fn validate(&self) -> Result<(), TreemapError> {
        if !(self.weight > 0.0 && self.weight.is_finite()) {
            return Err(TreemapError::BadWeight(self.name.clone()));
        }
        if !self.is_leaf() {
            let sum: f64 = self.children.iter().map(|c| c.weight).sum();
            if self.weight < sum * (1.0 - 1e-12) {
                return Err(TreemapError::Underweight(self.name.clone()));
            }
            for c in &self.children {
                c.validate()?;
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct NestedCell {
    pub name: String,
    pub path: String,
    pub weight: f64,
    pub samples: Vec<u32>,
    pub children: Vec<NestedCell>,
    pub iterations: u32,
    pub converged: bool,
}

impl NestedCell {
    pub fn leaves(&self) -> Vec<&NestedCell> {
        let mut out = Vec::new();
        let mut stack = vec![self];
        while let Some(c) = stack.pop() {
            if c.children.is_empty() {
                out.push(c);
            } else {
                stack.extend(c.children.iter().rev());
            }
        }
        out
    }
}

/// Lays out the whole hierarchy inside `region`, recursing into each cell.
pub fn layout_hierarchy(root: &TreemapNode, region: &Region, params: &LayoutParams) -> Result<NestedCell, TreemapError> {
    params.check()?;
    root.validate()?;
    layout_node(root, region.clone(), root.name.clone(), params.seed, params)
}

fn layout_node(node: &TreemapNode, region: Region, path: String, seed: u64, params: &LayoutParams) -> Result<NestedCell, TreemapError> {
    let mut cell = NestedCell {
        name: node.name.clone(),
        path: path.clone(),
        weight: node.weight,
        samples: region.samples.clone(),
        children: Vec::new(),
        iterations: 0,
        converged: true,
    };
    if node.is_leaf() {
        return Ok(cell);
    }
    let at = |e: TreemapError| TreemapError::At {
        path: path.clone(),
        source: alloc::boxed::Box::new(e),
    };
    let weights: Vec<f64> = node.children.iter().map(|c| c.weight).collect();
    let sites = initial_sites(&region, &weights, seed).map_err(at)?;
    let layout = layout_siblings(&region, &sites, params).map_err(at)?;
    cell.iterations = layout.iterations;
    cell.converged = layout.converged;
    for (i, (child, samples)) in node.children.iter().zip(layout.cells).enumerate() {
        let child_path = format!("{path}/{}", child.name);
        let child_seed = splitmix(seed ^ splitmix(i as u64 + 1));
        cell.children
            .push(layout_node(child, region.subset(samples), child_path, child_seed, params)?);
    }
    Ok(cell)
}

/// Bounding-box aspect ratio (long side over short side, ≥ 1) of each cell;
/// an empty or single-sample cell reports 1.
pub fn aspect_ratios(width: u32, cells: &[&[u32]]) -> Vec<f64> {
    cells
        .iter()
        .map(|samples| {
            if samples.len() <= 1 {
                return 1.0;
            }
            let (mut x0, mut y0, mut x1, mut y1) = (u32::MAX, u32::MAX, 0, 0);
            for &s in samples.iter() {
                let (x, y) = (s % width, s / width);
                x0 = x0.min(x);
                y0 = y0.min(y);
                x1 = x1.max(x);
                y1 = y1.max(y);
            }
            let (w, h) = ((x1 - x0 + 1) as f64, (y1 - y0 + 1) as f64);
            w.max(h) / w.min(h)
        })
        .collect()
}

/// Convex hull (counter-clockwise in grid coordinates) of the cell's
/// sample squares.
pub fn cell_hull(width: u32, samples: &[u32]) -> Vec<(f64, f64)> {
    // Only the extreme samples of each row can contribute hull corners.
    let mut rows: alloc::collections::BTreeMap<u32, (u32, u32)> = Default::default();
    for &s in samples {
        let (x, y) = (s % width, s / width);
        let e = rows.entry(y).or_insert((x, x));
        e.0 = e.0.min(x);
        e.1 = e.1.max(x);
    }
    let mut pts: Vec<(f64, f64)> = Vec::with_capacity(rows.len() * 4);
    for (&y, &(lo, hi)) in &rows {
        let (y, lo, hi) = (y as f64, lo as f64, hi as f64 + 1.0);
        pts.extend([(lo, y), (lo, y + 1.0), (hi, y), (hi, y + 1.0)]);
    }
    convex_hull(pts)
}

fn cross(o: (f64, f64), a: (f64, f64), b: (f64, f64)) -> f64 {
    (a.0 - o.0) * (b.1 - o.1) - (a.1 - o.1) * (b.0 - o.0)
}

fn convex_hull(mut pts: Vec<(f64, f64)>) -> Vec<(f64, f64)> {
    pts.sort_by(|a, b| a.partial_cmp(b).unwrap_or(core::cmp::Ordering::Equal));
    pts.dedup();
    if pts.len() < 3 {
        return pts;
    }
    let mut hull: Vec<(f64, f64)> = Vec::with_capacity(pts.len() * 2);
    for &p in &pts {
        while hull.len() >= 2 && cross(hull[hull.len() - 2], hull[hull.len() - 1], p) <= 0.0 {
            hull.pop();
        }
        hull.push(p);
    }
    let lower = hull.len() + 1;
    for &p in pts.iter().rev().skip(1) {
        while hull.len() >= lower && cross(hull[hull.len() - 2], hull[hull.len() - 1], p) <= 0.0 {
            hull.pop();
        }
        hull.push(p);
    }
    hull.pop();
    hull
}

/// Display label for a node: name plus its weight.
pub fn label(cell: &NestedCell) -> String {
    let mut s = cell.name.to_string();
    s.push_str(&format!(" ({})", cell.weight));
    s
}

#[cfg(test)]
mod tests {
    use super::*;

    fn params(res: u32) -> LayoutParams {
        LayoutParams {
            resolution: res,
            ..Default::default()
        }
    }

    fn fractions(layout: &SiblingLayout, n: usize) -> Vec<f64> {
        layout.cells.iter().map(|c| c.len() as f64 / n as f64).collect()
    }

    #[test]
    fn single_site_takes_region() {
        let region = Region::full(64, 64);
        let sites = initial_sites(&region, &[1.0], 7).unwrap();
        let l = layout_siblings(&region, &sites, &params(64)).unwrap();
        assert_eq!(l.iterations, 0);
        assert_eq!(l.cells[0].len(), 64 * 64);
    }

    #[test]
    fn equal_weights_split_evenly() {
        let region = Region::full(128, 128);
        let sites = initial_sites(&region, &[1.0, 1.0], 3).unwrap();
        let l = layout_siblings(&region, &sites, &params(128)).unwrap();
        assert!(l.converged);
        for f in fractions(&l, region.len()) {
            assert!((f - 0.5).abs() <= 0.02, "{f}");
        }
    }

    #[test]
    fn one_to_three() {
        let region = Region::full(128, 128);
        let sites = initial_sites(&region, &[1.0, 3.0], 11).unwrap();
        let l = layout_siblings(&region, &sites, &params(128)).unwrap();
        let f = fractions(&l, region.len());
        assert!((f[0] - 0.25).abs() <= 0.02, "{f:?}");
        assert!((f[1] - 0.75).abs() <= 0.02, "{f:?}");
    }

    #[test]
    fn errors() {
        let region = Region::full(2, 1);
        assert!(matches!(
            initial_sites(&region, &[1.0, 1.0, 1.0], 0),
            Err(TreemapError::TooManySites { .. })
        ));
        assert!(matches!(initial_sites(&region, &[1.0, 0.0], 0), Err(TreemapError::BadWeight(_))));
        assert_eq!(
            layout_siblings(&region, &[], &params(32)),
            Err(TreemapError::NoSites)
        );
        assert_eq!(params(16).check(), Err(TreemapError::Resolution));
        let bad = TreemapNode {
            name: "r".into(),
            weight: 1.0,
            children: vec![TreemapNode::leaf("a", 2.0)],
        };
        assert_eq!(bad.validate(), Err(TreemapError::Underweight("r".into())));
    }

    #[test]
    fn single_leaf_hierarchy() {
        let region = Region::full(32, 32);
        let root = TreemapNode::group("root", vec![TreemapNode::leaf("only", 5.0)]);
        let out = layout_hierarchy(&root, &region, &params(32)).unwrap();
        assert_eq!(out.children[0].samples, region.samples);
    }

    #[test]
    fn aspect_ratio_conventions() {
        let full: Vec<u32> = (0..16).collect();
        let strip: Vec<u32> = (0..4).collect();
        assert_eq!(aspect_ratios(4, &[&full, &strip, &[5], &[]]), vec![1.0, 4.0, 1.0, 1.0]);
    }

    #[test]
    fn hull_of_square() {
        let samples: Vec<u32> = (0..16).collect();
        let hull = cell_hull(4, &samples);
        assert_eq!(hull.len(), 4);
        assert!(hull.contains(&(0.0, 0.0)) && hull.contains(&(4.0, 4.0)));
    }
}
