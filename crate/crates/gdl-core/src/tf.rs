//! Finite periodic time-frequency model.
//!
//! Signals live on a cyclic grid of `L` samples with step `h = 1/sqrt(L)`
//! and period `P = sqrt(L)`, so the frequency step equals the time step and
//! the model is symmetric under the Fourier transform.
//!
//! Conventions that the rest of the crate relies on:
//!
//! * time coordinates are taken modulo `P`; the *centered* representatives
//!   `t~_j = ((j + L/2) mod L - L/2) * h in [-P/2, P/2)` are used for the
//!   modulation multiplier, which puts the wrap seam at `±P/2`, far from
//!   windows centered at 0;
//! * fractional time shifts act by a phase ramp on the symmetric FFT
//!   frequencies, hence are exactly unitary and form a one-parameter group;
//! * frequency shifts multiply by `e^{2πi ξ t~_j}` and are exactly unitary
//!   and `P`-periodic in `ξ`.

use std::cell::RefCell;
use std::collections::HashMap;
use std::sync::Arc;

use num_complex::Complex64;
use rustfft::{Fft, FftPlanner};

use crate::error::{GdlError, Result};

const TAU: f64 = std::f64::consts::TAU;

/// Sample grid of the finite model.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SignalGrid {
    l: usize,
    h: f64,
    period: f64,
}

impl SignalGrid {
    /// Builds the grid for `L` samples. Requires `L >= 4`.
    pub fn new(l: usize) -> Result<Self> {
        if l < 4 {
            return Err(GdlError::InvalidGrid(format!("L = {l}, need L >= 4")));
        }
        let h = 1.0 / (l as f64).sqrt();
        Ok(SignalGrid { l, h, period: (l as f64).sqrt() })
    }

    pub fn len(&self) -> usize {
        self.l
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// Time step `h = 1/sqrt(L)`.
    pub fn step(&self) -> f64 {
        self.h
    }

    /// Period `P = sqrt(L)`.
    pub fn period(&self) -> f64 {
        self.period
    }

    /// Frequency step, equal to the time step in this model.
    pub fn freq_step(&self) -> f64 {
        self.h
    }

    /// Centered time representative of sample `j`, in `[-P/2, P/2)`.
    pub fn time(&self, j: usize) -> f64 {
        let half = self.l / 2;
        let c = ((j + half) % self.l) as i64 - half as i64;
        c as f64 * self.h
    }
}

/// Complex sample vector on a [`SignalGrid`].
#[derive(Debug, Clone, PartialEq)]
pub struct Signal {
    grid: SignalGrid,
    samples: Vec<Complex64>,
}

/// Phase-space point `z = (x, ξ)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhasePoint {
    pub x: f64,
    pub xi: f64,
}

impl PhasePoint {
    pub fn new(x: f64, xi: f64) -> Self {
        PhasePoint { x, xi }
    }

    pub fn norm(&self) -> f64 {
        self.x.hypot(self.xi)
    }

    /// Both coordinates reduced into `[0, P)`.
    pub fn reduce_mod(&self, period: f64) -> Self {
        PhasePoint { x: self.x.rem_euclid(period), xi: self.xi.rem_euclid(period) }
    }
}

impl std::ops::Add for PhasePoint {
    type Output = PhasePoint;
    fn add(self, o: PhasePoint) -> PhasePoint {
        PhasePoint { x: self.x + o.x, xi: self.xi + o.xi }
    }
}

impl std::ops::Sub for PhasePoint {
    type Output = PhasePoint;
    fn sub(self, o: PhasePoint) -> PhasePoint {
        PhasePoint { x: self.x - o.x, xi: self.xi - o.xi }
    }
}

thread_local! {
    static FFT_CACHE: RefCell<HashMap<(usize, bool), Arc<dyn Fft<f64>>>> =
        RefCell::new(HashMap::new());
}

fn fft_plan(len: usize, inverse: bool) -> Arc<dyn Fft<f64>> {
    FFT_CACHE.with(|c| {
        c.borrow_mut()
            .entry((len, inverse))
            .or_insert_with(|| {
                let mut planner = FftPlanner::new();
                if inverse {
                    planner.plan_fft_inverse(len)
                } else {
                    planner.plan_fft_forward(len)
                }
            })
            .clone()
    })
}

impl Signal {
    pub fn new(grid: SignalGrid, samples: Vec<Complex64>) -> Result<Self> {
        if samples.len() != grid.len() {
            return Err(GdlError::Dimension(format!(
                "signal has {} samples, grid expects {}",
                samples.len(),
                grid.len()
            )));
        }
        Ok(Signal { grid, samples })
    }

    pub fn zero(grid: SignalGrid) -> Self {
        Signal { grid, samples: vec![Complex64::new(0.0, 0.0); grid.len()] }
    }

    pub fn grid(&self) -> SignalGrid {
        self.grid
    }

    pub fn samples(&self) -> &[Complex64] {
        &self.samples
    }

    pub fn samples_mut(&mut self) -> &mut [Complex64] {
        &mut self.samples
    }

    /// `L²` inner product `<f, g> = h * Σ f_j conj(g_j)`.
    pub fn inner(&self, other: &Signal) -> Result<Complex64> {
        if self.grid != other.grid {
            return Err(GdlError::Dimension("inner product across different grids".into()));
        }
        let s: Complex64 = self
            .samples
            .iter()
            .zip(&other.samples)
            .map(|(a, b)| a * b.conj())
            .sum();
        Ok(s * self.grid.h)
    }

    /// `L²` norm `(h * Σ |f_j|²)^{1/2}`.
    pub fn norm2(&self) -> f64 {
        let s: f64 = self.samples.iter().map(|a| a.norm_sqr()).sum();
        (s * self.grid.h).sqrt()
    }

    /// Complex white noise, deterministic in `seed`.
    pub fn randn(grid: SignalGrid, seed: u64) -> Self {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
        let samples = (0..grid.len())
            .map(|_| Complex64::new(rng.gen::<f64>() - 0.5, rng.gen::<f64>() - 0.5))
            .collect();
        Signal { grid, samples }
    }

    /// Random smooth signal: a seeded superposition of a few time-frequency
    /// shifted Gaussian atoms with coordinates in the central half of the
    /// torus. Smooth signals keep the fractional-shift identities of this
    /// model accurate to ~1e-13.
    pub fn random_smooth(grid: SignalGrid, seed: u64, atoms: usize) -> Self {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
        let g = Window::gaussian(grid);
        let mut out = Signal::zero(grid);
        let half = grid.period() / 4.0;
        for _ in 0..atoms.max(1) {
            let z = PhasePoint::new(
                rng.gen_range(-half..half),
                rng.gen_range(-half..half),
            );
            let c = Complex64::new(rng.gen::<f64>() - 0.5, rng.gen::<f64>() - 0.5);
            let atom = tf_shift(g.signal(), z);
            for (o, a) in out.samples.iter_mut().zip(atom.samples()) {
                *o += c * a;
            }
        }
        out
    }
}

/// Unit-norm analysis window.
#[derive(Debug, Clone)]
pub struct Window {
    signal: Signal,
}

impl Window {
    /// Wraps a signal as a window; the norm must be 1 within 1e-12.
    pub fn new(signal: Signal) -> Result<Self> {
        let n = signal.norm2();
        if (n - 1.0).abs() > 1e-12 {
            return Err(GdlError::InvalidArgument(format!("window norm {n} != 1")));
        }
        Ok(Window { signal })
    }

    /// Normalizes a non-zero signal into a window.
    pub fn normalized(mut signal: Signal) -> Result<Self> {
        let n = signal.norm2();
        if n == 0.0 || !n.is_finite() {
            return Err(GdlError::InvalidArgument("cannot normalize zero window".into()));
        }
        for s in signal.samples.iter_mut() {
            *s /= n;
        }
        Ok(Window { signal })
    }

    /// Periodization of the standard Gaussian `2^{1/4} e^{-π t²}`,
    /// renormalized to unit norm. Even: `g(t_j) = g(-t_j mod P)`.
    pub fn gaussian(grid: SignalGrid) -> Self {
        let p = grid.period();
        let samples = (0..grid.len())
            .map(|j| {
                let t = grid.time(j);
                let mut v = 0.0;
                for m in -3i32..=3 {
                    let u = t + m as f64 * p;
                    v += std::f64::consts::SQRT_2.sqrt() * (-std::f64::consts::PI * u * u).exp();
                }
                Complex64::new(v, 0.0)
            })
            .collect();
        Window::normalized(Signal { grid, samples }).expect("gaussian window is non-zero")
    }

    /// Compactly supported C² bump `cos⁴(π t / (2w))` on `|t| <= w` with
    /// `w = P/4`, periodized and normalized. Used for contrast experiments.
    pub fn bump(grid: SignalGrid) -> Self {
        let w = grid.period() / 4.0;
        let samples = (0..grid.len())
            .map(|j| {
                let t = grid.time(j);
                let v = if t.abs() < w {
                    (std::f64::consts::FRAC_PI_2 * t / w).cos().powi(4)
                } else {
                    0.0
                };
                Complex64::new(v, 0.0)
            })
            .collect();
        Window::normalized(Signal { grid, samples }).expect("bump window is non-zero")
    }

    pub fn signal(&self) -> &Signal {
        &self.signal
    }

    pub fn grid(&self) -> SignalGrid {
        self.signal.grid
    }
}

/// Cyclic time shift by an integer number of samples.
fn rotate(f: &Signal, steps: i64) -> Signal {
    let l = f.grid.len() as i64;
    let s = steps.rem_euclid(l) as usize;
    let mut out = Vec::with_capacity(f.samples.len());
    for j in 0..f.samples.len() {
        let src = (j + f.samples.len() - s) % f.samples.len();
        out.push(f.samples[src]);
    }
    Signal { grid: f.grid, samples: out }
}

/// Time shift by `x` (time units). Integer multiples of `h` rotate indices;
/// fractional shifts apply the exact unitary FFT phase ramp.
pub fn time_shift(f: &Signal, x: f64) -> Signal {
    let l = f.grid.len();
    let steps = x / f.grid.h;
    if (steps - steps.round()).abs() < 1e-9 {
        return rotate(f, steps.round() as i64);
    }
    let mut buf = f.samples.clone();
    fft_plan(l, false).process(&mut buf);
    let half = l / 2;
    for (k, b) in buf.iter_mut().enumerate() {
        let ks = (((k + half) % l) as i64 - half as i64) as f64;
        let phase = -TAU * ks * x / f.grid.period;
        *b *= Complex64::from_polar(1.0, phase);
    }
    fft_plan(l, true).process(&mut buf);
    let scale = 1.0 / l as f64;
    for b in buf.iter_mut() {
        *b *= scale;
    }
    Signal { grid: f.grid, samples: buf }
}

/// Modulation: multiply by `e^{2πi ξ t~_j}` on centered representatives.
pub fn modulate(f: &Signal, xi: f64) -> Signal {
    let samples = f
        .samples
        .iter()
        .enumerate()
        .map(|(j, v)| v * Complex64::from_polar(1.0, TAU * xi * f.grid.time(j)))
        .collect();
    Signal { grid: f.grid, samples }
}

/// Time-frequency shift `π(z) f = e^{2πi ξ t} f(t - x)`.
pub fn tf_shift(f: &Signal, z: PhasePoint) -> Signal {
    modulate(&time_shift(f, z.x), z.xi)
}

/// STFT values `V_g f(z) = <f, π(z) g>` at the requested phase-space points.
pub fn stft(f: &Signal, g: &Window, points: &[PhasePoint]) -> Result<Vec<Complex64>> {
    if f.grid != g.grid() {
        return Err(GdlError::Dimension("stft: signal and window on different grids".into()));
    }
    points
        .iter()
        .map(|&z| f.inner(&tf_shift(g.signal(), z)))
        .collect()
}

/// STFT sampled on the full `L x L` time-frequency grid
/// `{(j h, k/P)}_{j,k=0..L-1}`.
#[derive(Debug, Clone)]
pub struct TFField {
    grid: SignalGrid,
    /// Row-major: `values[j * L + k]` is `V_g f(j h, k/P)`.
    values: Vec<Complex64>,
}

impl TFField {
    pub fn grid(&self) -> SignalGrid {
        self.grid
    }

    /// Phase-space cell area `h * freq_step = 1/L`.
    pub fn cell_area(&self) -> f64 {
        1.0 / self.grid.len() as f64
    }

    pub fn values(&self) -> &[Complex64] {
        &self.values
    }

    pub fn value(&self, j: usize, k: usize) -> Complex64 {
        self.values[j * self.grid.len() + k]
    }

    /// The phase-space point of entry `(j, k)`.
    pub fn point(&self, j: usize, k: usize) -> PhasePoint {
        PhasePoint::new(j as f64 * self.grid.h, k as f64 * self.grid.freq_step())
    }

    pub fn sub(&self, other: &TFField) -> Result<TFField> {
        if self.grid != other.grid {
            return Err(GdlError::Dimension("field subtraction across grids".into()));
        }
        let values = self
            .values
            .iter()
            .zip(&other.values)
            .map(|(a, b)| a - b)
            .collect();
        Ok(TFField { grid: self.grid, values })
    }
}

/// Full-grid STFT. Row `j` is `h * FFT(f ⊙ conj(rotate(g, j)))`, which equals
/// `<f, π(jh, k/P) g>` exactly on the grid.
pub fn stft_full(f: &Signal, g: &Window) -> Result<TFField> {
    if f.grid != g.grid() {
        return Err(GdlError::Dimension("stft: signal and window on different grids".into()));
    }
    let l = f.grid.len();
    let plan = fft_plan(l, false);
    let gs = g.signal().samples();
    let mut values = vec![Complex64::new(0.0, 0.0); l * l];
    for j in 0..l {
        let row = &mut values[j * l..(j + 1) * l];
        for (m, r) in row.iter_mut().enumerate() {
            let src = (m + l - j) % l;
            *r = f.samples[m] * gs[src].conj();
        }
        plan.process(row);
        for r in row.iter_mut() {
            *r *= f.grid.h;
        }
    }
    Ok(TFField { grid: f.grid, values })
}

/// Exponent for the discrete modulation-space norms.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PNorm {
    One,
    Two,
    Inf,
}

impl PNorm {
    pub fn from_str(s: &str) -> Result<Self> {
        match s {
            "1" => Ok(PNorm::One),
            "2" => Ok(PNorm::Two),
            "inf" | "Inf" | "INF" => Ok(PNorm::Inf),
            other => Err(GdlError::InvalidArgument(format!(
                "unsupported p = {other:?}; use 1, 2 or inf"
            ))),
        }
    }
}

/// Discrete `M^p` norm of a full-grid field: Riemann sum with cell area
/// `1/L` (exact for `p = 2` by the finite Parseval identity).
pub fn mp_norm(field: &TFField, p: PNorm) -> f64 {
    let cell = field.cell_area();
    match p {
        PNorm::One => field.values.iter().map(|v| v.norm()).sum::<f64>() * cell,
        PNorm::Two => {
            (field.values.iter().map(|v| v.norm_sqr()).sum::<f64>() * cell).sqrt()
        }
        PNorm::Inf => field
            .values
            .iter()
            .map(|v| v.norm())
            .fold(0.0, f64::max),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn close(a: f64, b: f64, tol: f64) -> bool {
        (a - b).abs() <= tol
    }

    #[test]
    fn grid_constants() {
        let g = SignalGrid::new(64).unwrap();
        assert!(close(g.step(), 0.125, 1e-15));
        assert!(close(g.period(), 8.0, 1e-15));
        let g = SignalGrid::new(144).unwrap();
        assert!(close(g.step(), 1.0 / 12.0, 1e-15));
        assert!(close(g.step() * g.len() as f64, g.period(), 1e-12));
        assert!(close(g.step(), g.freq_step(), 0.0));
    }

    #[test]
    fn grid_too_small() {
        assert!(SignalGrid::new(2).is_err());
    }

    #[test]
    fn gaussian_unit_norm_and_even() {
        let grid = SignalGrid::new(64).unwrap();
        let g = Window::gaussian(grid);
        assert!(close(g.signal().norm2(), 1.0, 1e-12));
        let s = g.signal().samples();
        for j in 1..grid.len() {
            // g(t_j) = g(P - t_j), i.e. sample j matches sample L-j
            assert!((s[j] - s[grid.len() - j]).norm() < 1e-12);
        }
    }

    #[test]
    fn bump_unit_norm_even_supported() {
        let grid = SignalGrid::new(144).unwrap();
        let g = Window::bump(grid);
        assert!(close(g.signal().norm2(), 1.0, 1e-12));
        let s = g.signal().samples();
        for j in 1..grid.len() {
            assert!((s[j] - s[grid.len() - j]).norm() < 1e-12);
        }
        // compact support: vanishes for |t| > P/4
        for j in 0..grid.len() {
            if grid.time(j).abs() > grid.period() / 4.0 + 1e-9 {
                assert_eq!(s[j].norm(), 0.0);
            }
        }
    }

    /// Oracle: the continuum Gaussian ambiguity function |V_g g(z)| =
    /// e^{-π |z|² / 2}; periodization error at L = 256 is ~1e-15.
    #[test]
    fn gaussian_ambiguity_closed_form() {
        let grid = SignalGrid::new(256).unwrap();
        let g = Window::gaussian(grid);
        let v = stft(g.signal(), &g, &[PhasePoint::new(1.0, 0.0)]).unwrap();
        let expect = (-std::f64::consts::PI / 2.0).exp(); // 0.20788
        assert!(close(v[0].norm(), expect, 1e-10));
        // a generic point of the closed form
        let z = PhasePoint::new(0.75, -0.5);
        let v = stft(g.signal(), &g, &[z]).unwrap();
        let expect = (-std::f64::consts::PI * z.norm().powi(2) / 2.0).exp();
        assert!(close(v[0].norm(), expect, 1e-10));
    }

    #[test]
    fn shift_identity_and_unitarity() {
        let grid = SignalGrid::new(128).unwrap();
        let f = Signal::randn(grid, 1);
        let same = tf_shift(&f, PhasePoint::new(0.0, 0.0));
        for (a, b) in f.samples().iter().zip(same.samples()) {
            assert!((a - b).norm() < 1e-14);
        }
        for seed in 0..100u64 {
            use rand::{Rng, SeedableRng};
            let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
            let z = PhasePoint::new(rng.gen_range(-8.0..8.0), rng.gen_range(-8.0..8.0));
            let shifted = tf_shift(&f, z);
            assert!(close(shifted.norm2(), f.norm2(), 1e-12));
        }
    }

    #[test]
    fn shift_group_law_time() {
        let grid = SignalGrid::new(64).unwrap();
        let f = Signal::randn(grid, 3);
        // fractional ramps compose exactly
        let a = time_shift(&time_shift(&f, 0.37), 0.21);
        let b = time_shift(&f, 0.58);
        for (x, y) in a.samples().iter().zip(b.samples()) {
            assert!((x - y).norm() < 1e-12);
        }
    }

    #[test]
    fn commutation_relation_spec_point() {
        // π(z)π(z')f = e^{-2πi ξ' x} π(z+z')f at z=(0.3,0.7), z'=(0.5,0.2)
        let grid = SignalGrid::new(64).unwrap();
        let g = Window::gaussian(grid);
        let z = PhasePoint::new(0.3, 0.7);
        let zp = PhasePoint::new(0.5, 0.2);
        let lhs = tf_shift(&tf_shift(g.signal(), zp), z);
        let mut rhs = tf_shift(g.signal(), z + zp);
        let phase = Complex64::from_polar(1.0, -TAU * zp.xi * z.x);
        for s in rhs.samples_mut() {
            *s *= phase;
        }
        for (a, b) in lhs.samples().iter().zip(rhs.samples()) {
            assert!((a - b).norm() < 1e-12);
        }
    }

    #[test]
    fn periodicity_of_shifts() {
        let grid = SignalGrid::new(64).unwrap();
        let f = Signal::randn(grid, 9);
        let p = grid.period();
        let a = tf_shift(&f, PhasePoint::new(0.3 + p, 0.7));
        let b = tf_shift(&f, PhasePoint::new(0.3, 0.7 + p));
        let c = tf_shift(&f, PhasePoint::new(0.3, 0.7));
        for (x, y) in a.samples().iter().zip(c.samples()) {
            assert!((x - y).norm() < 1e-10);
        }
        for (x, y) in b.samples().iter().zip(c.samples()) {
            assert!((x - y).norm() < 1e-10);
        }
    }

    #[test]
    fn stft_reproduces_inner_products() {
        let grid = SignalGrid::new(64).unwrap();
        let g = Window::gaussian(grid);
        let v = stft(g.signal(), &g, &[PhasePoint::new(0.0, 0.0)]).unwrap();
        assert!((v[0] - Complex64::new(1.0, 0.0)).norm() < 1e-12);
        // full grid agrees with pointwise stft
        let f = Signal::randn(grid, 5);
        let field = stft_full(&f, &g).unwrap();
        for &(j, k) in &[(0usize, 0usize), (3, 7), (10, 60), (63, 1)] {
            let z = field.point(j, k);
            let direct = stft(&f, &g, &[z]).unwrap()[0];
            assert!((field.value(j, k) - direct).norm() < 1e-12);
        }
    }

    #[test]
    fn stft_grid_mismatch_errors() {
        let f = Signal::randn(SignalGrid::new(64).unwrap(), 0);
        let g = Window::gaussian(SignalGrid::new(128).unwrap());
        assert!(stft(&f, &g, &[PhasePoint::new(0.0, 0.0)]).is_err());
    }

    #[test]
    fn isometry_parseval() {
        for &l in &[64usize, 128, 256] {
            let grid = SignalGrid::new(l).unwrap();
            let g = Window::gaussian(grid);
            let f = Signal::randn(grid, l as u64);
            let field = stft_full(&f, &g).unwrap();
            let lhs = mp_norm(&field, PNorm::Two);
            assert!(close(lhs, f.norm2(), 1e-10));
        }
    }

    #[test]
    fn covariance_grid_aligned_exact() {
        let grid = SignalGrid::new(64).unwrap();
        let g = Window::gaussian(grid);
        let f = Signal::random_smooth(grid, 11, 3);
        let w = PhasePoint::new(3.0 * grid.step(), 5.0 * grid.freq_step());
        let field0 = stft_full(&f, &g).unwrap();
        let field1 = stft_full(&tf_shift(&f, w), &g).unwrap();
        let l = grid.len();
        for j in 0..l {
            for k in 0..l {
                let js = (j + l - 3) % l;
                let ks = (k + l - 5) % l;
                let a = field1.value(j, k).norm();
                let b = field0.value(js, ks).norm();
                assert!(close(a, b, 1e-12));
            }
        }
    }

    #[test]
    fn mp_norm_values() {
        let grid = SignalGrid::new(256).unwrap();
        let g = Window::gaussian(grid);
        let field = stft_full(g.signal(), &g).unwrap();
        // p=2: isometry, p=inf: peak 1 at origin, p=1: continuum integral = 2
        assert!(close(mp_norm(&field, PNorm::Two), 1.0, 1e-10));
        assert!(close(mp_norm(&field, PNorm::Inf), 1.0, 1e-10));
        assert!((mp_norm(&field, PNorm::One) - 2.0).abs() / 2.0 < 0.02);
    }

    #[test]
    fn mp_norm_comparison_sanity() {
        let grid = SignalGrid::new(64).unwrap();
        let g = Window::gaussian(grid);
        for seed in 0..10u64 {
            let f = Signal::randn(grid, seed);
            let field = stft_full(&f, &g).unwrap();
            let l = grid.len() as f64;
            let m1 = mp_norm(&field, PNorm::One);
            let minf = mp_norm(&field, PNorm::Inf);
            assert!(minf <= l * m1 + 1e-12);
            assert!(m1 <= l * minf + 1e-12);
        }
    }

    #[test]
    fn pnorm_parse() {
        assert!(PNorm::from_str("3").is_err());
        assert_eq!(PNorm::from_str("inf").unwrap(), PNorm::Inf);
    }
}
