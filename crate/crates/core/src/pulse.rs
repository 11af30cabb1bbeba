//! Piecewise drive functions `α(t)` for the qubit-oscillator coupling
//! `H(t) = [α(t) a + α*(t) a†] J_y`.
//!
//! A [`PulseSchedule`] is an ordered list of segments, each either constant or
//! circular (`α(u) = A e^{iπu/2τ}` in segment-local time `u`). Every integral the
//! solvers need is evaluated in closed form segment by segment:
//!
//! * [`PulseSchedule::filtered_integral`] gives `∫₀ᵗ α(t') e^{s(t−t')} dt'`, which is
//!   `∫α` for `s = 0` and the damped drive integrals `ξ±` for `s = ∓κ/2`;
//! * [`PulseSchedule::moment`] gives `I^(j)(T) = ∫₀ᵀ α(t) (κt/2)^j dt`.
//!
//! Circuits are built in time order. With the rightmost factor of a pulse product
//! acting first, the step circuit is `α = (−iα₀, α₀, iα₀, −α₀)`, which traces the
//! square `0 → −iα₀τ → (1−i)α₀τ → α₀τ → 0` counter-clockwise and produces
//! `exp(−i 2α₀²τ² J_y²)` when the loop closes.

use std::f64::consts::PI;
use std::fmt;

use num_complex::Complex64 as C64;
use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};

/// Orientation of a single closed circuit: `C` or its time reverse `C̄` (α → −α).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Orientation {
    #[serde(rename = "C")]
    Forward,
    #[serde(rename = "Cbar")]
    Reversed,
}

impl Orientation {
    pub fn flipped(self) -> Self {
        match self {
            Orientation::Forward => Orientation::Reversed,
            Orientation::Reversed => Orientation::Forward,
        }
    }

    fn sign(self) -> f64 {
        match self {
            Orientation::Forward => 1.0,
            Orientation::Reversed => -1.0,
        }
    }
}

impl fmt::Display for Orientation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Orientation::Forward => f.write_str("C"),
            Orientation::Reversed => f.write_str("Cbar"),
        }
    }
}

/// Base circuit shape.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CircuitKind {
    Step,
    Circular,
}

impl CircuitKind {
    /// Geometric phase of one closed circuit in units of `α₀²τ²`.
    ///
    /// The step square has area `α₀²τ²`, the circle of radius `2α₀τ/π` has area
    /// `4α₀²τ²/π`; the phase is twice the enclosed area.
    pub fn phase_coefficient(self) -> f64 {
        match self {
            CircuitKind::Step => 2.0,
            CircuitKind::Circular => 8.0 / PI,
        }
    }
}

impl fmt::Display for CircuitKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CircuitKind::Step => f.write_str("step"),
            CircuitKind::Circular => f.write_str("circular"),
        }
    }
}

impl std::str::FromStr for CircuitKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "step" => Ok(CircuitKind::Step),
            "circular" => Ok(CircuitKind::Circular),
            other => Err(invalid("kind", format!("unknown circuit kind `{other}`"))),
        }
    }
}

/// Drive shape inside one segment, in segment-local time.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum SegmentShape {
    Constant(C64),
    /// `α(u) = amplitude · exp(iπu / 2τ)` with `τ = quarter_period`.
    Circular { amplitude: C64, quarter_period: f64 },
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PulseSegment {
    duration: f64,
    shape: SegmentShape,
}

impl PulseSegment {
    pub fn constant(duration: f64, value: C64) -> Result<Self> {
        check_positive("duration", duration)?;
        Ok(Self { duration, shape: SegmentShape::Constant(value) })
    }

    pub fn circular(duration: f64, amplitude: C64, quarter_period: f64) -> Result<Self> {
        check_positive("duration", duration)?;
        check_positive("quarter_period", quarter_period)?;
        Ok(Self { duration, shape: SegmentShape::Circular { amplitude, quarter_period } })
    }

    pub fn duration(&self) -> f64 {
        self.duration
    }

    pub fn shape(&self) -> SegmentShape {
        self.shape
    }

    pub fn is_constant(&self) -> bool {
        matches!(self.shape, SegmentShape::Constant(_))
    }

    /// Drive at local time `u ∈ [0, duration]`.
    pub fn alpha_local(&self, u: f64) -> C64 {
        match self.shape {
            SegmentShape::Constant(c) => c,
            SegmentShape::Circular { amplitude, quarter_period } => {
                amplitude * C64::from_polar(1.0, angular(quarter_period) * u)
            }
        }
    }

    fn negated(&self) -> Self {
        let shape = match self.shape {
            SegmentShape::Constant(c) => SegmentShape::Constant(-c),
            SegmentShape::Circular { amplitude, quarter_period } => {
                SegmentShape::Circular { amplitude: -amplitude, quarter_period }
            }
        };
        Self { duration: self.duration, shape }
    }

    /// `∫₀ʰ α(u) e^{s(h−u)} du`.
    pub(crate) fn filtered_local(&self, h: f64, s: f64) -> C64 {
        match self.shape {
            SegmentShape::Constant(c) => {
                if s == 0.0 {
                    c * h
                } else {
                    c * ((s * h).exp_m1() / s)
                }
            }
            SegmentShape::Circular { amplitude, quarter_period } => {
                let w = angular(quarter_period);
                let rot = C64::from_polar(1.0, w * h);
                amplitude * (rot - (s * h).exp()) / C64::new(-s, w)
            }
        }
    }

    /// `∫ₐ^{a+duration} α(t) t^j dt` for a segment starting at `a`.
    fn power_moment(&self, start: f64, j: u32) -> C64 {
        let d = self.duration;
        match self.shape {
            SegmentShape::Constant(c) => {
                let p = (j + 1) as i32;
                c * (((start + d).powi(p) - start.powi(p)) / p as f64)
            }
            SegmentShape::Circular { amplitude, quarter_period } => {
                // m_i = ∫₀ᵈ u^i e^{zu} du with z = iω, then expand (start + u)^j.
                let z = C64::new(0.0, angular(quarter_period));
                let ezd = (z * d).exp();
                let mut m = Vec::with_capacity(j as usize + 1);
                m.push((ezd - 1.0) / z);
                for i in 1..=j {
                    let prev = m[i as usize - 1];
                    m.push((ezd * d.powi(i as i32) - prev * i as f64) / z);
                }
                let mut acc = C64::new(0.0, 0.0);
                let mut binom = 1.0;
                for i in 0..=j {
                    acc += m[i as usize] * (binom * start.powi((j - i) as i32));
                    binom = binom * (j - i) as f64 / (i + 1) as f64;
                }
                amplitude * acc
            }
        }
    }
}

fn angular(quarter_period: f64) -> f64 {
    PI / (2.0 * quarter_period)
}

fn check_positive(name: &'static str, v: f64) -> Result<()> {
    if v.is_finite() && v > 0.0 {
        Ok(())
    } else {
        Err(invalid(name, format!("must be finite and > 0, got {v}")))
    }
}

/// A piecewise drive over `[0, T]`, immutable after construction.
#[derive(Debug, Clone, PartialEq)]
pub struct PulseSchedule {
    segments: Vec<PulseSegment>,
    starts: Vec<f64>,
    total: f64,
    kind: Option<CircuitKind>,
    circuits: Vec<Orientation>,
    alpha0: f64,
    tau: f64,
}

impl PulseSchedule {
    /// Build a schedule from raw segments; metadata is left empty.
    pub fn from_segments(segments: Vec<PulseSegment>) -> Result<Self> {
        if segments.is_empty() {
            return Err(invalid("segments", "schedule needs at least one segment"));
        }
        Ok(Self::assemble(segments, None, Vec::new(), 0.0, 0.0))
    }

    fn assemble(
        segments: Vec<PulseSegment>,
        kind: Option<CircuitKind>,
        circuits: Vec<Orientation>,
        alpha0: f64,
        tau: f64,
    ) -> Self {
        let mut starts = Vec::with_capacity(segments.len());
        let mut total = 0.0;
        for seg in &segments {
            starts.push(total);
            total += seg.duration;
        }
        Self { segments, starts, total, kind, circuits, alpha0, tau }
    }

    pub fn segments(&self) -> &[PulseSegment] {
        &self.segments
    }

    /// Start time of every segment.
    pub fn starts(&self) -> &[f64] {
        &self.starts
    }

    pub fn duration(&self) -> f64 {
        self.total
    }

    pub fn kind(&self) -> Option<CircuitKind> {
        self.kind
    }

    /// Orientation of every circuit, in time order.
    pub fn circuits(&self) -> &[Orientation] {
        &self.circuits
    }

    pub fn alpha0(&self) -> f64 {
        self.alpha0
    }

    /// Per-circuit pulse length τ.
    pub fn tau(&self) -> f64 {
        self.tau
    }

    pub fn is_piecewise_constant(&self) -> bool {
        self.segments.iter().all(PulseSegment::is_constant)
    }

    fn check_time(&self, t: f64) -> Result<()> {
        // Allow a few ulps of slack at the far end so callers can pass sums of durations.
        if t.is_finite() && t >= 0.0 && t <= self.total * (1.0 + 4.0 * f64::EPSILON) {
            Ok(())
        } else {
            Err(Error::TimeOutOfRange { t, total: self.total })
        }
    }

    /// Index of the segment owning `t` (left-continuous; `t = 0` maps to the first).
    pub fn segment_index(&self, t: f64) -> usize {
        let idx = self.starts.partition_point(|&s| s < t);
        idx.saturating_sub(1).min(self.segments.len() - 1)
    }

    /// `α(t)`; at a boundary the left segment's final value is used.
    pub fn alpha(&self, t: f64) -> Result<C64> {
        self.check_time(t)?;
        let i = self.segment_index(t);
        Ok(self.segments[i].alpha_local(t - self.starts[i]))
    }

    /// `∫₀ᵗ α(t') e^{s(t − t')} dt'` in closed form.
    pub fn filtered_integral(&self, t: f64, s: f64) -> Result<C64> {
        self.check_time(t)?;
        let t = t.min(self.total);
        let mut acc = C64::new(0.0, 0.0);
        for (seg, &start) in self.segments.iter().zip(&self.starts) {
            let h = (t - start).min(seg.duration);
            acc = acc * (s * h).exp() + seg.filtered_local(h, s);
            if start + seg.duration >= t {
                break;
            }
        }
        Ok(acc)
    }

    /// `∫₀ᵗ α(t') dt'`.
    pub fn integrate_alpha(&self, t: f64) -> Result<C64> {
        self.filtered_integral(t, 0.0)
    }

    /// `I^(j)(T) = ∫₀ᵀ α(t) (κt/2)^j dt`.
    pub fn moment(&self, j: u32, kappa: f64) -> Result<C64> {
        if !(kappa.is_finite() && kappa >= 0.0) {
            return Err(invalid("kappa", format!("must be >= 0, got {kappa}")));
        }
        let sum: C64 = self
            .segments
            .iter()
            .zip(&self.starts)
            .map(|(seg, &start)| seg.power_moment(start, j))
            .sum();
        Ok(sum * (kappa / 2.0).powi(j as i32))
    }

    /// Sampled phase-space trace: `∫₀ᵗα` for `κ = 0`, otherwise `ξ₊(t)`.
    pub fn phase_space_path(&self, kappa: f64, samples: usize) -> Result<Vec<PathPoint>> {
        if samples < 2 {
            return Err(invalid("samples", "need at least 2 samples"));
        }
        if !(kappa.is_finite() && kappa >= 0.0) {
            return Err(invalid("kappa", format!("must be >= 0, got {kappa}")));
        }
        (0..samples)
            .map(|i| {
                let t = if i + 1 == samples {
                    self.total
                } else {
                    self.total * i as f64 / (samples - 1) as f64
                };
                Ok(PathPoint { t, z: self.filtered_integral(t, -kappa / 2.0)? })
            })
            .collect()
    }
}

/// One sample of a phase-space path.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PathPoint {
    pub t: f64,
    pub z: C64,
}

/// Render a path as CSV with header `t,re,im`.
pub fn path_to_csv(points: &[PathPoint]) -> String {
    let mut out = String::from("t,re,im\n");
    for p in points {
        out.push_str(&format!("{:.12e},{:.12e},{:.12e}\n", p.t, p.z.re, p.z.im));
    }
    out
}

/// Four constant pulses of length τ; `Reversed` negates every segment.
pub fn step_circuit(alpha0: f64, tau: f64, orientation: Orientation) -> Result<PulseSchedule> {
    check_positive("alpha0", alpha0)?;
    check_positive("tau", tau)?;
    let segments = step_segments(alpha0, tau, orientation)?;
    Ok(PulseSchedule::assemble(segments, Some(CircuitKind::Step), vec![orientation], alpha0, tau))
}

fn step_segments(alpha0: f64, tau: f64, orientation: Orientation) -> Result<Vec<PulseSegment>> {
    let sign = orientation.sign() * alpha0;
    [C64::new(0.0, -1.0), C64::new(1.0, 0.0), C64::new(0.0, 1.0), C64::new(-1.0, 0.0)]
        .into_iter()
        .map(|v| PulseSegment::constant(tau, v * sign))
        .collect()
}

/// One full period `4τ` of `α(t) = α₀ e^{iπt/2τ}`; `Reversed` negates it.
pub fn circular_circuit(alpha0: f64, tau: f64, orientation: Orientation) -> Result<PulseSchedule> {
    check_positive("alpha0", alpha0)?;
    check_positive("tau", tau)?;
    let seg = circular_segment(alpha0, tau, orientation)?;
    Ok(PulseSchedule::assemble(vec![seg], Some(CircuitKind::Circular), vec![orientation], alpha0, tau))
}

fn circular_segment(alpha0: f64, tau: f64, orientation: Orientation) -> Result<PulseSegment> {
    PulseSegment::circular(4.0 * tau, C64::new(orientation.sign() * alpha0, 0.0), tau)
}

/// Pointwise negation `α → −α`, durations unchanged.
pub fn time_reverse(s: &PulseSchedule) -> PulseSchedule {
    let segments = s.segments.iter().map(PulseSegment::negated).collect();
    let circuits = s.circuits.iter().map(|o| o.flipped()).collect();
    PulseSchedule::assemble(segments, s.kind, circuits, s.alpha0, s.tau)
}

/// Orientation pattern of the order-`k` sequence in time order:
/// `S₀ = [C]`, `S_{k+1} = S_k ++ flip(S_k)` (Thue–Morse).
pub fn orientation_pattern(order: u32) -> Vec<Orientation> {
    let mut pattern = vec![Orientation::Forward];
    for _ in 0..order {
        let flipped: Vec<_> = pattern.iter().map(|o| o.flipped()).collect();
        pattern.extend(flipped);
    }
    pattern
}

/// Parameters of a k-order symmetrized sequence targeting `exp(−iφ J_y²)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SequenceSpec {
    pub kind: CircuitKind,
    pub alpha0: f64,
    pub order: u32,
    pub phase: f64,
}

/// Largest order accepted; `2^k` circuits are materialised.
pub const MAX_ORDER: u32 = 16;

impl SequenceSpec {
    pub fn new(kind: CircuitKind, alpha0: f64, order: u32, phase: f64) -> Result<Self> {
        let spec = Self { kind, alpha0, order, phase };
        spec.validate()?;
        Ok(spec)
    }

    pub fn validate(&self) -> Result<()> {
        check_positive("alpha0", self.alpha0)?;
        check_positive("phase", self.phase)?;
        if self.order > MAX_ORDER {
            return Err(invalid("order", format!("must be <= {MAX_ORDER}, got {}", self.order)));
        }
        Ok(())
    }

    /// Number of circuits `n = 2^k`.
    pub fn circuit_count(&self) -> usize {
        1usize << self.order
    }

    /// Per-circuit τ such that `n · c · α₀² τ² = φ`, `c` the kind's phase coefficient.
    pub fn tau(&self) -> f64 {
        let n = self.circuit_count() as f64;
        (self.phase / (n * self.kind.phase_coefficient())).sqrt() / self.alpha0
    }

    pub fn total_duration(&self) -> f64 {
        4.0 * self.tau() * self.circuit_count() as f64
    }
}

/// Concatenate `2^k` circuits with Thue–Morse orientations.
pub fn symmetrized_sequence(spec: &SequenceSpec) -> Result<PulseSchedule> {
    spec.validate()?;
    let tau = spec.tau();
    let pattern = orientation_pattern(spec.order);
    let mut segments = Vec::with_capacity(pattern.len() * 4);
    for &o in &pattern {
        match spec.kind {
            CircuitKind::Step => segments.extend(step_segments(spec.alpha0, tau, o)?),
            CircuitKind::Circular => segments.push(circular_segment(spec.alpha0, tau, o)?),
        }
    }
    Ok(PulseSchedule::assemble(segments, Some(spec.kind), pattern, spec.alpha0, tau))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn close(a: C64, b: C64, tol: f64) -> bool {
        (a - b).norm() <= tol
    }

    /// Composite Simpson on `[a, b]` — an oracle independent of the closed forms.
    fn simpson(f: impl Fn(f64) -> C64, a: f64, b: f64, n: usize) -> C64 {
        let n = n + n % 2;
        let h = (b - a) / n as f64;
        let mut acc = f(a) + f(b);
        for i in 1..n {
            let w = if i % 2 == 1 { 4.0 } else { 2.0 };
            acc += f(a + i as f64 * h) * w;
        }
        acc * (h / 3.0)
    }

    #[test]
    fn step_circuit_closes() {
        let s = step_circuit(1.3, 0.7, Orientation::Forward).unwrap();
        assert_eq!(s.segments().len(), 4);
        assert!((s.duration() - 2.8).abs() < 1e-15);
        assert!(s.integrate_alpha(s.duration()).unwrap().norm() <= 1e-12 * 1.3 * 2.8);
    }

    #[test]
    fn reversed_step_is_segmentwise_negation() {
        let c = step_circuit(1.0, 0.5, Orientation::Forward).unwrap();
        let cbar = step_circuit(1.0, 0.5, Orientation::Reversed).unwrap();
        assert_eq!(time_reverse(&c), cbar);
        for (a, b) in c.segments().iter().zip(cbar.segments()) {
            match (a.shape(), b.shape()) {
                (SegmentShape::Constant(x), SegmentShape::Constant(y)) => assert_eq!(x, -y),
                _ => panic!("expected constant segments"),
            }
        }
    }

    #[test]
    fn rejects_bad_parameters() {
        assert!(step_circuit(0.0, 1.0, Orientation::Forward).is_err());
        assert!(step_circuit(1.0, -1.0, Orientation::Forward).is_err());
        assert!(circular_circuit(1.0, f64::NAN, Orientation::Forward).is_err());
        assert!(SequenceSpec::new(CircuitKind::Step, 1.0, 1, 0.0).is_err());
        assert!(SequenceSpec::new(CircuitKind::Step, 1.0, MAX_ORDER + 1, 0.1).is_err());
        assert!(PulseSchedule::from_segments(vec![]).is_err());
    }

    #[test]
    fn circular_circuit_values() {
        let (a0, tau) = (1.7, 0.4);
        let s = circular_circuit(a0, tau, Orientation::Forward).unwrap();
        assert!((s.duration() - 4.0 * tau).abs() < 1e-15);
        assert!(close(s.alpha(0.0).unwrap(), C64::new(a0, 0.0), 1e-15));
        assert!(close(s.alpha(2.0 * tau).unwrap(), C64::new(-a0, 0.0), 1e-14));
        assert!(s.integrate_alpha(s.duration()).unwrap().norm() < 1e-14);
    }

    #[test]
    fn circular_integral_matches_quadrature() {
        let (a0, tau) = (1.0, 0.6);
        let s = circular_circuit(a0, tau, Orientation::Forward).unwrap();
        for &t in &[0.3, 2.0 * tau, 3.1 * tau] {
            let f = |x: f64| s.alpha(x).unwrap();
            let q = simpson(f, 0.0, t, 4000);
            assert!(close(s.integrate_alpha(t).unwrap(), q, 1e-12), "t={t}");
        }
        // ∫₀^{2τ} α = α₀ (4τ/π) i
        let half = s.integrate_alpha(2.0 * tau).unwrap();
        assert!(close(half, C64::new(0.0, a0 * 4.0 * tau / PI), 1e-14));
    }

    #[test]
    fn filtered_integral_matches_quadrature() {
        let spec = SequenceSpec::new(CircuitKind::Step, 1.0, 1, PI / 8.0).unwrap();
        let s = symmetrized_sequence(&spec).unwrap();
        let circ = circular_circuit(1.0, 0.5, Orientation::Reversed).unwrap();
        for sched in [&s, &circ] {
            for &kappa in &[0.0, 0.1, 0.37] {
                for &frac in &[0.13, 0.5, 0.77, 1.0] {
                    let t = frac * sched.duration();
                    for sgn in [-1.0, 1.0] {
                        let rate = sgn * kappa / 2.0;
                        // Split at segment boundaries so Simpson sees smooth pieces.
                        let mut q = C64::new(0.0, 0.0);
                        for (seg, &st) in sched.segments().iter().zip(sched.starts()) {
                            let b = (st + seg.duration()).min(t);
                            if b <= st {
                                break;
                            }
                            q += simpson(
                                |x| seg.alpha_local(x - st) * (rate * (t - x)).exp(),
                                st,
                                b,
                                2000,
                            );
                        }
                        let got = sched.filtered_integral(t, rate).unwrap();
                        assert!(close(got, q, 1e-11), "kappa={kappa} t={t}: {got} vs {q}");
                    }
                }
            }
        }
    }

    #[test]
    fn time_reverse_is_involution() {
        let spec = SequenceSpec::new(CircuitKind::Circular, 2.0, 2, 0.3).unwrap();
        let s = symmetrized_sequence(&spec).unwrap();
        assert_eq!(time_reverse(&time_reverse(&s)), s);
    }

    #[test]
    fn thue_morse_orders() {
        use Orientation::{Forward as C, Reversed as R};
        assert_eq!(orientation_pattern(0), vec![C]);
        assert_eq!(orientation_pattern(1), vec![C, R]);
        assert_eq!(orientation_pattern(2), vec![C, R, R, C]);
        assert_eq!(orientation_pattern(3), vec![C, R, R, C, R, C, C, R]);
    }

    #[test]
    fn sequence_duration() {
        for k in 0..4 {
            let spec = SequenceSpec::new(CircuitKind::Step, 1.5, k, PI / 8.0).unwrap();
            let s = symmetrized_sequence(&spec).unwrap();
            let n = (1u32 << k) as f64;
            let expected = (n * PI).sqrt() / 1.5;
            assert!((s.duration() - expected).abs() <= 1e-14 * expected);
            assert_eq!(s.circuits().len(), 1 << k);
        }
    }

    #[test]
    fn moment_of_constant_segment() {
        let seg = PulseSegment::constant(2.0, C64::new(0.5, -1.0)).unwrap();
        let s = PulseSchedule::from_segments(vec![seg]).unwrap();
        assert!(close(s.integrate_alpha(1.5).unwrap(), C64::new(0.75, -1.5), 1e-15));
        // (κ/2)∫₀² c t dt = (κ/2) c · 2
        let m = s.moment(1, 0.2).unwrap();
        assert!(close(m, C64::new(0.5, -1.0) * 0.2, 1e-15));
    }

    #[test]
    fn moments_match_quadrature_for_circular() {
        let spec = SequenceSpec::new(CircuitKind::Circular, 1.0, 1, 0.4).unwrap();
        let s = symmetrized_sequence(&spec).unwrap();
        for j in 0..4u32 {
            let mut q = C64::new(0.0, 0.0);
            for (seg, &st) in s.segments().iter().zip(s.starts()) {
                q += simpson(
                    |x| seg.alpha_local(x - st) * (0.05 * x).powi(j as i32),
                    st,
                    st + seg.duration(),
                    4000,
                );
            }
            assert!(close(s.moment(j, 0.1).unwrap(), q, 1e-12), "j={j}");
        }
    }

    #[test]
    fn moment_cancellation_for_single_and_double_circuit() {
        let s0 = step_circuit(1.0, 0.4, Orientation::Forward).unwrap();
        assert!(s0.moment(0, 0.05).unwrap().norm() < 1e-15);
        assert!(s0.moment(1, 0.05).unwrap().norm() > 1e-4);
        let spec = SequenceSpec::new(CircuitKind::Step, 1.0, 1, PI / 8.0).unwrap();
        let s1 = symmetrized_sequence(&spec).unwrap();
        assert!(s1.moment(0, 0.05).unwrap().norm() < 1e-15);
        assert!(s1.moment(1, 0.05).unwrap().norm() < 1e-15);
        assert!(s1.moment(2, 0.05).unwrap().norm() > 1e-6);
    }

    #[test]
    fn left_continuous_alpha() {
        let s = step_circuit(1.0, 1.0, Orientation::Forward).unwrap();
        assert_eq!(s.alpha(1.0).unwrap(), C64::new(0.0, -1.0));
        assert_eq!(s.alpha(1.0 + 1e-12).unwrap(), C64::new(1.0, 0.0));
        assert_eq!(s.alpha(4.0).unwrap(), C64::new(-1.0, 0.0));
        assert!(matches!(s.alpha(4.1), Err(Error::TimeOutOfRange { .. })));
        assert!(s.integrate_alpha(-0.1).is_err());
    }

    #[test]
    fn path_endpoints_and_square() {
        let s = step_circuit(1.0, 1.0, Orientation::Forward).unwrap();
        let two = s.phase_space_path(0.0, 2).unwrap();
        assert_eq!(two[0].z, C64::new(0.0, 0.0));
        assert!(two[1].z.norm() < 1e-15);
        let pts = s.phase_space_path(0.0, 5).unwrap();
        let corners = [
            C64::new(0.0, 0.0),
            C64::new(0.0, -1.0),
            C64::new(1.0, -1.0),
            C64::new(1.0, 0.0),
            C64::new(0.0, 0.0),
        ];
        for (p, c) in pts.iter().zip(corners) {
            assert!(close(p.z, c, 1e-14));
        }
        assert!(s.phase_space_path(0.0, 1).is_err());
        let csv = path_to_csv(&pts);
        assert!(csv.starts_with("t,re,im\n"));
        assert_eq!(csv.lines().count(), 6);
    }

    #[test]
    fn damped_path_does_not_close() {
        let s = step_circuit(1.0, 0.5, Orientation::Forward).unwrap();
        let pts = s.phase_space_path(0.2, 50).unwrap();
        let end = pts.last().unwrap().z;
        assert!(end.norm() > 1e-3);
        assert!(close(end, s.filtered_integral(s.duration(), -0.1).unwrap(), 1e-15));
    }
}
