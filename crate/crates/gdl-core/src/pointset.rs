//! Geometry of discrete point sets in `ℝ^m`.
//!
//! Closed balls are used everywhere (suprema are attained and candidate
//! enumeration stays exact); the convention is applied consistently and
//! boundary membership is decided with a 1e-9 guard against rounding.

use crate::error::{GdlError, Result};

/// Axis-aligned box `[lo_i, hi_i]`.
#[derive(Debug, Clone, PartialEq)]
pub struct BoxRegion {
    pub lo: Vec<f64>,
    pub hi: Vec<f64>,
}

impl BoxRegion {
    pub fn new(lo: Vec<f64>, hi: Vec<f64>) -> Result<Self> {
        if lo.len() != hi.len() || lo.is_empty() {
            return Err(GdlError::Dimension("box bounds of different dimension".into()));
        }
        Ok(BoxRegion { lo, hi })
    }

    pub fn dim(&self) -> usize {
        self.lo.len()
    }

    pub fn is_empty(&self) -> bool {
        self.lo.iter().zip(&self.hi).any(|(a, b)| a > b)
    }

    pub fn contains(&self, p: &[f64]) -> bool {
        p.iter()
            .zip(self.lo.iter().zip(&self.hi))
            .all(|(x, (lo, hi))| *x >= lo - 1e-12 && *x <= hi + 1e-12)
    }

    /// Square `[-half, half]^m`.
    pub fn centered_square(dim: usize, half: f64) -> Self {
        BoxRegion { lo: vec![-half; dim], hi: vec![half; dim] }
    }
}

/// Restriction region: a box or a closed ball.
#[derive(Debug, Clone)]
pub enum Region {
    Box(BoxRegion),
    Ball { center: Vec<f64>, radius: f64 },
}

impl Region {
    pub fn contains(&self, p: &[f64]) -> bool {
        match self {
            Region::Box(b) => b.contains(p),
            Region::Ball { center, radius } => dist(p, center) <= radius + 1e-12,
        }
    }
}

pub(crate) fn dist(a: &[f64], b: &[f64]) -> f64 {
    a.iter()
        .zip(b)
        .map(|(x, y)| (x - y) * (x - y))
        .sum::<f64>()
        .sqrt()
}

/// Finite set of pairwise-distinct points in `ℝ^m`.
#[derive(Debug, Clone)]
pub struct PointSet {
    dim: usize,
    /// Flat row-major storage, `points[i*dim .. (i+1)*dim]`.
    points: Vec<f64>,
}

impl PointSet {
    /// Builds a point set, rejecting exact duplicates.
    pub fn new(dim: usize, rows: Vec<Vec<f64>>) -> Result<Self> {
        if dim == 0 {
            return Err(GdlError::PointSet("dimension must be positive".into()));
        }
        let mut flat = Vec::with_capacity(rows.len() * dim);
        for r in &rows {
            if r.len() != dim {
                return Err(GdlError::Dimension(format!(
                    "point of dimension {} in a dim-{} set",
                    r.len(),
                    dim
                )));
            }
            if r.iter().any(|x| !x.is_finite()) {
                return Err(GdlError::PointSet("non-finite coordinate".into()));
            }
            flat.extend_from_slice(r);
        }
        let set = PointSet { dim, points: flat };
        set.check_distinct()?;
        Ok(set)
    }

    pub fn from_flat(dim: usize, flat: Vec<f64>) -> Result<Self> {
        if dim == 0 || flat.len() % dim != 0 {
            return Err(GdlError::Dimension("flat length not a multiple of dim".into()));
        }
        if flat.iter().any(|x| !x.is_finite()) {
            return Err(GdlError::PointSet("non-finite coordinate".into()));
        }
        let set = PointSet { dim, points: flat };
        set.check_distinct()?;
        Ok(set)
    }

    fn check_distinct(&self) -> Result<()> {
        let n = self.len();
        let mut idx: Vec<usize> = (0..n).collect();
        idx.sort_by(|&a, &b| {
            self.point(a)
                .partial_cmp(self.point(b))
                .unwrap_or(std::cmp::Ordering::Equal)
        });
        for w in idx.windows(2) {
            if self.point(w[0]) == self.point(w[1]) {
                return Err(GdlError::PointSet(format!(
                    "duplicate point {:?}",
                    self.point(w[0])
                )));
            }
        }
        Ok(())
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn len(&self) -> usize {
        self.points.len() / self.dim
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn point(&self, i: usize) -> &[f64] {
        &self.points[i * self.dim..(i + 1) * self.dim]
    }

    pub fn iter(&self) -> impl Iterator<Item = &[f64]> {
        self.points.chunks_exact(self.dim)
    }

    /// Tight axis-aligned bounding box; `None` for the empty set.
    pub fn bbox(&self) -> Option<BoxRegion> {
        if self.is_empty() {
            return None;
        }
        let mut lo = vec![f64::INFINITY; self.dim];
        let mut hi = vec![f64::NEG_INFINITY; self.dim];
        for p in self.iter() {
            for d in 0..self.dim {
                lo[d] = lo[d].min(p[d]);
                hi[d] = hi[d].max(p[d]);
            }
        }
        Some(BoxRegion { lo, hi })
    }

    /// Plain-text serialization: `# dim=<m>` header, one point per line.
    pub fn to_text(&self) -> String {
        let mut out = format!("# dim={}\n", self.dim);
        for p in self.iter() {
            let coords: Vec<String> = p.iter().map(|x| format!("{x:?}")).collect();
            out.push_str(&coords.join(" "));
            out.push('\n');
        }
        out
    }

    pub fn from_text(text: &str) -> Result<Self> {
        let mut dim = None;
        let mut rows = Vec::new();
        for (lno, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() {
                continue;
            }
            if let Some(rest) = line.strip_prefix('#') {
                if let Some(v) = rest.trim().strip_prefix("dim=") {
                    dim = Some(v.trim().parse::<usize>().map_err(|e| {
                        GdlError::Parse(format!("line {}: bad dim: {e}", lno + 1))
                    })?);
                }
                continue;
            }
            let coords: Vec<f64> = line
                .split_whitespace()
                .map(|t| {
                    t.parse::<f64>()
                        .map_err(|e| GdlError::Parse(format!("line {}: {e}", lno + 1)))
                })
                .collect::<Result<_>>()?;
            rows.push(coords);
        }
        let dim = dim
            .or_else(|| rows.first().map(|r| r.len()))
            .ok_or_else(|| GdlError::Parse("empty point-set file without dim header".into()))?;
        PointSet::new(dim, rows)
    }
}

/// Minimal pairwise distance; `+∞` for sets with at most one point
/// (empty-infimum convention).
pub fn separation(s: &PointSet) -> f64 {
    let n = s.len();
    if n <= 1 {
        return f64::INFINITY;
    }
    let mut best = f64::INFINITY;
    for i in 0..n {
        for j in (i + 1)..n {
            best = best.min(dist(s.point(i), s.point(j)));
        }
    }
    best
}

const BALL_EPS: f64 = 1e-9;

fn count_within(s: &PointSet, center: &[f64], radius: f64) -> usize {
    s.iter().filter(|p| dist(p, center) <= radius + BALL_EPS).count()
}

/// Relative separation `rel(S) = max_x #(S ∩ B̄₁(x))`.
///
/// Exact for `m ≤ 2` by candidate enumeration: ball centers at the points,
/// at the two centers equidistant (distance exactly 1) from each pair closer
/// than 2, and at circumcenters of triples with circumradius ≤ 1. A covering
/// unit ball can always be slid until two covered points lie on its boundary,
/// so the pair candidates already realize the maximum; triples are kept
/// because they are cheap and follow the same enumeration. For `m ≥ 3` the
/// same candidates give a certified lower bound.
pub fn rel_separation(s: &PointSet) -> usize {
    let n = s.len();
    if n == 0 {
        return 0;
    }
    let mut best = 1usize;
    for i in 0..n {
        best = best.max(count_within(s, s.point(i), 1.0));
    }
    if s.dim == 1 {
        for i in 0..n {
            let c = [s.point(i)[0] + 1.0];
            best = best.max(count_within(s, &c, 1.0));
        }
        return best;
    }
    // pair lens candidates (centers with both points exactly on the boundary)
    for i in 0..n {
        for j in (i + 1)..n {
            let p = s.point(i);
            let q = s.point(j);
            let d = dist(p, q);
            if d > 2.0 + BALL_EPS || d == 0.0 {
                continue;
            }
            let r = (1.0 - (d * d) / 4.0).max(0.0).sqrt();
            if s.dim == 2 {
                let mx = (p[0] + q[0]) / 2.0;
                let my = (p[1] + q[1]) / 2.0;
                let ux = (q[0] - p[0]) / d;
                let uy = (q[1] - p[1]) / d;
                for sgn in [-1.0, 1.0] {
                    let c = [mx - sgn * r * uy, my + sgn * r * ux];
                    best = best.max(count_within(s, &c, 1.0));
                }
            } else {
                let mid: Vec<f64> =
                    p.iter().zip(q).map(|(a, b)| (a + b) / 2.0).collect();
                best = best.max(count_within(s, &mid, 1.0));
            }
        }
    }
    if s.dim == 2 {
        for i in 0..n {
            for j in (i + 1)..n {
                if dist(s.point(i), s.point(j)) > 2.0 + BALL_EPS {
                    continue;
                }
                for k in (j + 1)..n {
                    if dist(s.point(i), s.point(k)) > 2.0 + BALL_EPS
                        || dist(s.point(j), s.point(k)) > 2.0 + BALL_EPS
                    {
                        continue;
                    }
                    if let Some((c, r)) =
                        circumcenter2(s.point(i), s.point(j), s.point(k))
                    {
                        if r <= 1.0 + BALL_EPS {
                            best = best.max(count_within(s, &c, 1.0));
                        }
                    }
                }
            }
        }
    }
    best
}

/// Circumcenter and circumradius of a non-degenerate planar triple.
fn circumcenter2(a: &[f64], b: &[f64], c: &[f64]) -> Option<([f64; 2], f64)> {
    let d = 2.0 * (a[0] * (b[1] - c[1]) + b[0] * (c[1] - a[1]) + c[0] * (a[1] - b[1]));
    if d.abs() < 1e-14 {
        return None;
    }
    let a2 = a[0] * a[0] + a[1] * a[1];
    let b2 = b[0] * b[0] + b[1] * b[1];
    let c2 = c[0] * c[0] + c[1] * c[1];
    let ux = (a2 * (b[1] - c[1]) + b2 * (c[1] - a[1]) + c2 * (a[1] - b[1])) / d;
    let uy = (a2 * (c[0] - b[0]) + b2 * (a[0] - c[0]) + c2 * (b[0] - a[0])) / d;
    let center = [ux, uy];
    Some((center, dist(&center, a)))
}

fn nearest_dist(s: &PointSet, x: &[f64]) -> f64 {
    s.iter().map(|p| dist(p, x)).fold(f64::INFINITY, f64::min)
}

/// Largest empty-ball radius over `domain`:
/// `hole(S, D) = sup_{x ∈ D} min_{λ ∈ S} |x − λ|`.
///
/// Exact via Voronoi-vertex candidates (triple circumcenters, pair-bisector
/// crossings with the box edges, box corners) for planar sets up to
/// [`HOLE_EXACT_LIMIT`] points; larger sets and other dimensions fall back
/// to a fine-grid sweep with local refinement.
pub fn hole(s: &PointSet, domain: &BoxRegion) -> Result<f64> {
    if s.is_empty() {
        return Err(GdlError::Precondition("hole of an empty set".into()));
    }
    if domain.is_empty() {
        return Err(GdlError::Precondition("hole over an empty domain".into()));
    }
    if s.dim != domain.dim() {
        return Err(GdlError::Dimension("hole: set and domain dimensions differ".into()));
    }
    if s.dim == 2 && s.len() <= HOLE_EXACT_LIMIT {
        Ok(hole_exact2(s, domain))
    } else {
        Ok(hole_grid(s, domain))
    }
}

/// Maximal set size for the exact planar hole computation.
pub const HOLE_EXACT_LIMIT: usize = 400;

fn hole_exact2(s: &PointSet, domain: &BoxRegion) -> f64 {
    let (lo, hi) = (&domain.lo, &domain.hi);
    let mut best: f64 = 0.0;
    {
        let mut consider = |x: f64, y: f64| {
            if domain.contains(&[x, y]) {
                let d = nearest_dist(s, &[x, y]);
                if d > best {
                    best = d;
                }
            }
        };
        // box corners
        for &x in &[lo[0], hi[0]] {
            for &y in &[lo[1], hi[1]] {
                consider(x, y);
            }
        }
        let n = s.len();
        // pair bisectors crossing the box edges
        for i in 0..n {
            for j in (i + 1)..n {
                let p = s.point(i);
                let q = s.point(j);
                let mx = (p[0] + q[0]) / 2.0;
                let my = (p[1] + q[1]) / 2.0;
                let dx = q[0] - p[0];
                let dy = q[1] - p[1];
                // bisector: dx*(x-mx) + dy*(y-my) = 0
                for &ex in &[lo[0], hi[0]] {
                    if dy.abs() > 1e-14 {
                        let y = my - dx * (ex - mx) / dy;
                        consider(ex, y);
                    }
                }
                for &ey in &[lo[1], hi[1]] {
                    if dx.abs() > 1e-14 {
                        let x = mx - dy * (ey - my) / dx;
                        consider(x, ey);
                    }
                }
            }
        }
    }
    // Voronoi vertices: only circumcenters that can still beat the best
    // known value matter; a quick grid pass prunes almost all triples.
    let n = s.len();
    let mut best2 = best.max(hole_grid(s, domain) * 0.999);
    for i in 0..n {
        for j in (i + 1)..n {
            for k in (j + 1)..n {
                if let Some((c, r)) = circumcenter2(s.point(i), s.point(j), s.point(k)) {
                    if r >= best2 - 1e-12 && domain.contains(&c) {
                        let d = nearest_dist(s, &c);
                        if d > best2 {
                            best2 = d;
                        }
                    }
                }
            }
        }
    }
    best2.max(best)
}

/// Documented fine-grid fallback: bucketed nearest-neighbor sweep at a
/// resolution tied to the domain size, then one refinement pass around the
/// best cell. Accuracy is O(step/8).
fn hole_grid(s: &PointSet, domain: &BoxRegion) -> f64 {
    let dim = s.dim;
    let extent: f64 = domain
        .hi
        .iter()
        .zip(&domain.lo)
        .map(|(h, l)| h - l)
        .fold(0.0, f64::max);
    if extent <= 0.0 {
        return nearest_dist(s, &domain.lo);
    }
    let target_cells = 300_000f64;
    let step = (extent / target_cells.powf(1.0 / dim as f64)).max(extent / 2048.0);
    // bucket size near the typical nearest-neighbor spacing keeps the ring
    // search O(1) per query
    let bb = s.bbox().expect("non-empty");
    let vol: f64 = bb
        .hi
        .iter()
        .zip(&bb.lo)
        .map(|(h, l)| (h - l).max(extent / 100.0))
        .product();
    let nn = (vol / s.len() as f64).powf(1.0 / dim as f64);
    let grid = BucketGrid::build(s, (step * 4.0).max(nn).max(1e-9));
    let (mut best, argbest) = sweep(s, &grid, domain, step);
    if let Some(c) = argbest {
        let clipped = BoxRegion {
            lo: c
                .iter()
                .zip(&domain.lo)
                .map(|(x, b)| (x - step).max(*b))
                .collect(),
            hi: c
                .iter()
                .zip(&domain.hi)
                .map(|(x, b)| (x + step).min(*b))
                .collect(),
        };
        let (b2, _) = sweep(s, &grid, &clipped, step / 8.0);
        best = best.max(b2);
    }
    best
}

fn sweep(
    s: &PointSet,
    grid: &BucketGrid,
    domain: &BoxRegion,
    step: f64,
) -> (f64, Option<Vec<f64>>) {
    let dim = s.dim;
    let counts: Vec<usize> = (0..dim)
        .map(|d| (((domain.hi[d] - domain.lo[d]) / step).floor() as usize + 2).max(1))
        .collect();
    let total: usize = counts.iter().product();
    let mut best = 0.0;
    let mut arg = None;
    let mut x = vec![0.0; dim];
    for flat in 0..total {
        let mut rem = flat;
        for d in 0..dim {
            let i = rem % counts[d];
            rem /= counts[d];
            x[d] = (domain.lo[d] + i as f64 * step).min(domain.hi[d]);
        }
        let d = grid.nearest(s, &x);
        if d > best {
            best = d;
            arg = Some(x.clone());
        }
    }
    (best, arg)
}

/// Uniform spatial hash for nearest-neighbor queries.
struct BucketGrid {
    cell: f64,
    origin: Vec<f64>,
    counts: Vec<usize>,
    buckets: Vec<Vec<usize>>,
}

impl BucketGrid {
    fn build(s: &PointSet, cell: f64) -> Self {
        let bb = s.bbox().expect("non-empty");
        let dim = s.dim();
        let origin = bb.lo.clone();
        let counts: Vec<usize> = (0..dim)
            .map(|d| (((bb.hi[d] - bb.lo[d]) / cell).floor() as usize + 1).max(1))
            .collect();
        let total: usize = counts.iter().product();
        let mut buckets = vec![Vec::new(); total];
        for i in 0..s.len() {
            let idx = Self::flat_index(&origin, &counts, cell, s.point(i));
            buckets[idx].push(i);
        }
        BucketGrid { cell, origin, counts, buckets }
    }

    fn flat_index(origin: &[f64], counts: &[usize], cell: f64, p: &[f64]) -> usize {
        let mut flat = 0usize;
        let mut stride = 1usize;
        for d in 0..origin.len() {
            let mut i = ((p[d] - origin[d]) / cell).floor() as i64;
            i = i.clamp(0, counts[d] as i64 - 1);
            flat += i as usize * stride;
            stride *= counts[d];
        }
        flat
    }

    /// Nearest distance from `x` to the set, searching rings of buckets of
    /// growing radius until no closer point can exist.
    fn nearest(&self, s: &PointSet, x: &[f64]) -> f64 {
        let dim = self.origin.len();
        let cidx: Vec<i64> = (0..dim)
            .map(|d| ((x[d] - self.origin[d]) / self.cell).floor() as i64)
            .collect();
        let max_ring: i64 = self.counts.iter().map(|&c| c as i64).max().unwrap_or(1) + 2;
        let mut best = f64::INFINITY;
        for ring in 0..=max_ring {
            if best.is_finite() && (ring as f64 - 1.0) * self.cell > best {
                break;
            }
            self.visit_ring(&cidx, ring, &mut |flat| {
                for &pi in &self.buckets[flat] {
                    let d = dist(s.point(pi), x);
                    if d < best {
                        best = d;
                    }
                }
            });
        }
        best
    }

    fn visit_ring(&self, center: &[i64], ring: i64, f: &mut impl FnMut(usize)) {
        let dim = self.origin.len();
        let mut offs = vec![-ring; dim];
        loop {
            if offs.iter().map(|o| o.abs()).max().unwrap() == ring {
                let mut ok = true;
                let mut flat = 0usize;
                let mut stride = 1usize;
                for d in 0..dim {
                    let i = center[d] + offs[d];
                    if i < 0 || i >= self.counts[d] as i64 {
                        ok = false;
                        break;
                    }
                    flat += i as usize * stride;
                    stride *= self.counts[d];
                }
                if ok {
                    f(flat);
                }
            }
            let mut d = 0;
            loop {
                if d == dim {
                    return;
                }
                offs[d] += 1;
                if offs[d] > ring {
                    offs[d] = -ring;
                    d += 1;
                } else {
                    break;
                }
            }
        }
    }
}

/// Centers used when sampling Beurling densities.
#[derive(Debug, Clone)]
pub enum CenterRule {
    /// Centers on a uniform grid of the given step over the eroded bbox.
    Grid { step: f64 },
    /// Centers at the set's own points (when admissible).
    Points,
}

/// Per-radius normalized counts and extrapolated Beurling densities.
#[derive(Debug, Clone)]
pub struct DensityReport {
    pub radii: Vec<f64>,
    pub lower_counts: Vec<f64>,
    pub upper_counts: Vec<f64>,
    pub d_minus_est: f64,
    pub d_plus_est: f64,
    /// Reported O(1/R) boundary-error band for the largest radius.
    pub boundary_band: f64,
}

fn unit_ball_volume(m: usize) -> f64 {
    // V_0 = 1, V_1 = 2, V_m = V_{m-2} * 2π/m
    let mut v = if m % 2 == 0 { 1.0 } else { 2.0 };
    let mut k = if m % 2 == 0 { 2 } else { 3 };
    while k <= m {
        v *= std::f64::consts::TAU / k as f64;
        k += 2;
    }
    v
}

/// Estimates Beurling densities from normalized counts over balls
/// `B_R(z) ⊆ bbox`. The estimate comes from the largest radius and carries
/// an O(1/R) boundary band (`2m/R`); the limit itself is never claimed.
pub fn beurling_density(
    s: &PointSet,
    radii: &[f64],
    centers: &CenterRule,
) -> Result<DensityReport> {
    if radii.is_empty() || radii.windows(2).any(|w| w[0] >= w[1]) {
        return Err(GdlError::InvalidArgument("radii must be increasing".into()));
    }
    if s.is_empty() {
        return Ok(DensityReport {
            radii: radii.to_vec(),
            lower_counts: vec![0.0; radii.len()],
            upper_counts: vec![0.0; radii.len()],
            d_minus_est: 0.0,
            d_plus_est: 0.0,
            boundary_band: 0.0,
        });
    }
    let bb = s.bbox().expect("non-empty");
    let m = s.dim();
    let vol = unit_ball_volume(m);
    let mut lower = Vec::new();
    let mut upper = Vec::new();
    for &r in radii {
        let admissible = |z: &[f64]| -> bool {
            (0..m).all(|d| z[d] - r >= bb.lo[d] - 1e-12 && z[d] + r <= bb.hi[d] + 1e-12)
        };
        let mut lo = f64::INFINITY;
        let mut hi: f64 = 0.0;
        let mut any = false;
        let mut eval = |z: &[f64], lo: &mut f64, hi: &mut f64| {
            let c = count_within(s, z, r) as f64 / (vol * r.powi(m as i32));
            *lo = lo.min(c);
            *hi = hi.max(c);
        };
        match centers {
            CenterRule::Points => {
                for p in s.iter() {
                    if admissible(p) {
                        any = true;
                        eval(p, &mut lo, &mut hi);
                    }
                }
            }
            CenterRule::Grid { step } => {
                let counts: Vec<usize> = (0..m)
                    .map(|d| {
                        let span = (bb.hi[d] - r) - (bb.lo[d] + r);
                        if span < -1e-9 {
                            0
                        } else {
                            (span / step).floor() as usize + 1
                        }
                    })
                    .collect();
                if counts.iter().all(|&c| c > 0) {
                    let total: usize = counts.iter().product();
                    let mut z = vec![0.0; m];
                    for flat in 0..total {
                        let mut rem = flat;
                        for d in 0..m {
                            let i = rem % counts[d];
                            rem /= counts[d];
                            z[d] = bb.lo[d] + r + i as f64 * step;
                        }
                        any = true;
                        eval(&z, &mut lo, &mut hi);
                    }
                }
            }
        }
        if !any {
            return Err(GdlError::Precondition(format!(
                "radius {r} leaves no admissible centers inside the bounding box"
            )));
        }
        lower.push(lo);
        upper.push(hi);
    }
    let rmax = *radii.last().unwrap();
    Ok(DensityReport {
        radii: radii.to_vec(),
        lower_counts: lower.clone(),
        upper_counts: upper.clone(),
        d_minus_est: *lower.last().unwrap(),
        d_plus_est: *upper.last().unwrap(),
        boundary_band: 2.0 * m as f64 / rmax,
    })
}

/// Boundary-augmented weak-convergence distance: the Hausdorff distance of
/// `(A ∩ B̄_R(z)) ∪ ∂B_R(z)` and `(B ∩ B̄_R(z)) ∪ ∂B_R(z)`.
///
/// The shared sphere contributes zero to the Hausdorff supremum; distances
/// from an interior point to the sphere are `R − |p − z|`, computed
/// analytically.
pub fn weak_distance(a: &PointSet, b: &PointSet, z: &[f64], r: f64) -> Result<f64> {
    if r <= 0.0 {
        return Err(GdlError::InvalidArgument("weak_distance needs R > 0".into()));
    }
    if a.dim() != b.dim() || a.dim() != z.len() {
        return Err(GdlError::Dimension("weak_distance: dimension mismatch".into()));
    }
    let inside = |s: &PointSet| -> Vec<Vec<f64>> {
        s.iter()
            .filter(|p| dist(p, z) <= r + 1e-12)
            .map(|p| p.to_vec())
            .collect()
    };
    let pa = inside(a);
    let pb = inside(b);
    let one_sided = |from: &[Vec<f64>], to: &[Vec<f64>]| -> f64 {
        from.iter()
            .map(|p| {
                let to_sphere = (r - dist(p, z)).abs();
                let to_pts = to
                    .iter()
                    .map(|q| dist(p, q))
                    .fold(f64::INFINITY, f64::min);
                to_sphere.min(to_pts)
            })
            .fold(0.0, f64::max)
    };
    Ok(one_sided(&pa, &pb).max(one_sided(&pb, &pa)))
}

/// All lattice points `gen · k`, `k ∈ ℤ^m`, inside the box.
pub fn lattice(gen: &[Vec<f64>], bbox: &BoxRegion) -> Result<PointSet> {
    let m = gen.len();
    if m == 0 || gen.iter().any(|r| r.len() != m) || bbox.dim() != m {
        return Err(GdlError::Dimension(
            "lattice generator must be square and match the box dimension".into(),
        ));
    }
    let mat = nalgebra::DMatrix::from_fn(m, m, |i, j| gen[i][j]);
    if mat.determinant().abs() < 1e-12 {
        return Err(GdlError::InvalidArgument("singular lattice generator".into()));
    }
    let inv = mat
        .try_inverse()
        .ok_or_else(|| GdlError::InvalidArgument("singular lattice generator".into()))?;
    // bound integer coordinates by mapping the box corners through gen^{-1}
    let mut klo = vec![f64::INFINITY; m];
    let mut khi = vec![f64::NEG_INFINITY; m];
    for corner in 0..(1usize << m) {
        let x = nalgebra::DVector::from_fn(m, |d, _| {
            if corner >> d & 1 == 1 {
                bbox.hi[d]
            } else {
                bbox.lo[d]
            }
        });
        let k = &inv * x;
        for d in 0..m {
            klo[d] = klo[d].min(k[d]);
            khi[d] = khi[d].max(k[d]);
        }
    }
    let ranges: Vec<(i64, i64)> = (0..m)
        .map(|d| ((klo[d] - 1e-9).floor() as i64, (khi[d] + 1e-9).ceil() as i64))
        .collect();
    let mut rows = Vec::new();
    let counts: Vec<i64> = ranges.iter().map(|(a, b)| b - a + 1).collect();
    let total: i64 = counts.iter().product();
    let mut k = vec![0i64; m];
    for flat in 0..total {
        let mut rem = flat;
        for d in 0..m {
            k[d] = ranges[d].0 + rem % counts[d];
            rem /= counts[d];
        }
        let p: Vec<f64> = (0..m)
            .map(|i| (0..m).map(|j| gen[i][j] * k[j] as f64).sum())
            .collect();
        if bbox.contains(&p) {
            rows.push(p);
        }
    }
    PointSet::new(m, rows)
}

/// Subset of `S` inside the region.
pub fn restrict(s: &PointSet, region: &Region) -> PointSet {
    let rows: Vec<&[f64]> = s.iter().filter(|p| region.contains(p)).collect();
    PointSet { dim: s.dim, points: rows.concat() }
}
