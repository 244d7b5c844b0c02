//! The curvature engine: trace sequences `a_n`, `b_n` and the three
//! equivalent curvature formulas (defect-trace limit, Cesaro ratio,
//! circle integral of the resolvent kernel).
//!
//! Every trace here is taken of a fully assembled operator with zero
//! symbol. Tracing the individual terms of a commutator is mathematically
//! invalid in this representation (the terms have nonzero symbol and no
//! trace), so the engine never does it.

use crate::error::{OpError, Result};
use crate::kernel::defect::{defect_factors, defects};
use crate::kernel::operator::{commutator, Operator};
use crate::kernel::resolvent::resolvent_column;
use crate::scalar::{cpx, Cpx, Real};
use crate::tol;

/// Which trace sequence a [`TraceSequence`] holds.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SequenceKind {
    /// `a_n = tr(T*^n T^n (I - T T*))`.
    A,
    /// `b_n = tr [T*, T*^n T^{n+1}]`.
    B,
}

/// Computed trace sequence values with the operator fingerprint they came
/// from. Imaginary parts are asserted below `tol::IMAG_TRACE_TOL` and
/// dropped.
#[derive(Debug, Clone)]
pub struct TraceSequence<F: Real> {
    pub kind: SequenceKind,
    pub values: Vec<F>,
    pub fingerprint: u64,
}

/// Stopping rule for the limit formulas.
#[derive(Debug, Clone)]
pub struct ConvergenceConfig<F: Real> {
    /// Largest sequence index to compute.
    pub max_n: usize,
    /// Stabilization tolerance on consecutive deltas.
    pub tol: F,
    /// Number of consecutive deltas that must stay below `tol`.
    pub window: usize,
    /// Apply Aitken delta-squared acceleration before detection.
    pub accelerate: bool,
}

impl<F: Real> Default for ConvergenceConfig<F> {
    fn default() -> Self {
        Self { max_n: 64, tol: F::real(1e-9), window: 4, accelerate: false }
    }
}

impl<F: Real> ConvergenceConfig<F> {
    pub fn check(&self) -> Result<()> {
        if self.window < 2 || self.max_n < self.window || self.tol <= F::zero() {
            return Err(OpError::InvalidConfig {
                reason: format!(
                    "need max_n >= window >= 2 and tol > 0 (max_n = {}, window = {}, tol = {})",
                    self.max_n, self.window, self.tol
                ),
            });
        }
        Ok(())
    }
}

/// Radial/angular schedule for the integral formula.
#[derive(Debug, Clone)]
pub struct IntegralSchedule<F: Real> {
    /// Radii approaching 1 from below, in evaluation order.
    pub r_values: Vec<F>,
    /// Uniform angular grid size (power of two, at least 64).
    pub quad_points: usize,
    /// Neumann series truncation tolerance.
    pub neumann_eps: F,
    /// Richardson extrapolation order in the variable `1 - r`.
    pub extrapolation_order: usize,
}

impl<F: Real> Default for IntegralSchedule<F> {
    fn default() -> Self {
        Self::geometric(3..=12, 256, F::real(1e-12))
    }
}

impl<F: Real> IntegralSchedule<F> {
    /// Radii `r_j = 1 - 2^{-j}` over the given level range.
    pub fn geometric(levels: std::ops::RangeInclusive<u32>, quad_points: usize, eps: F) -> Self {
        let r_values = levels.map(|j| F::one() - F::real(0.5).powi(j as i32)).collect();
        Self { r_values, quad_points, neumann_eps: eps, extrapolation_order: 2 }
    }

    pub fn check(&self) -> Result<()> {
        if self.r_values.is_empty() {
            return Err(OpError::InvalidConfig { reason: "empty radius schedule".to_string() });
        }
        for &r in &self.r_values {
            if r <= F::zero() || r >= F::one() {
                return Err(OpError::DivergentSeries { modulus: r.to_f64_lossy() });
            }
        }
        if !self.quad_points.is_power_of_two() || self.quad_points < 64 {
            return Err(OpError::InvalidConfig {
                reason: format!("quad_points must be a power of two >= 64, got {}", self.quad_points),
            });
        }
        Ok(())
    }
}

/// Which formula produced a [`CurvatureResult`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CurvatureMethod {
    Defect,
    Cesaro,
    Integral,
}

impl CurvatureMethod {
    pub fn tag(self) -> &'static str {
        match self {
            CurvatureMethod::Defect => "defect",
            CurvatureMethod::Cesaro => "cesaro",
            CurvatureMethod::Integral => "integral",
        }
    }
}

/// Curvature value with convergence evidence.
#[derive(Debug, Clone)]
pub struct CurvatureResult<F: Real> {
    pub value: F,
    pub method: CurvatureMethod,
    /// True when the method-specific stopping rule fired.
    pub converged: bool,
    pub diagnostics: CurvatureDiagnostics<F>,
}

/// How the stopping rule went: steps taken (sequence index or radius
/// count), the trailing deltas it saw, and which computational path ran.
#[derive(Debug, Clone)]
pub struct CurvatureDiagnostics<F: Real> {
    pub steps: usize,
    pub last_deltas: Vec<F>,
    pub path: &'static str,
}

// ---------------------------------------------------------------------------
// Sequence recursions
// ---------------------------------------------------------------------------

/// Stepper for `a_n`, carrying `Q_n = T*^n T^n` and `P_n = T^n T*^n`.
/// Each step also evaluates the second algebraic form
/// `tr(T^n T*^n - T^{n+1} T*^{n+1})` as a cross-check.
struct ASequenceIter<F: Real> {
    t: Operator<F>,
    adj: Operator<F>,
    left_defect: Operator<F>,
    q: Operator<F>,
    p: Operator<F>,
}

impl<F: Real> ASequenceIter<F> {
    fn new(t: &Operator<F>) -> Self {
        let adj = t.adjoint();
        let left_defect = defects(t).left;
        Self { t: t.clone(), adj, left_defect, q: t.identity_like(), p: t.identity_like() }
    }

    /// `(a_n, |two-form residual|)`, then advance to `n + 1`.
    fn next_term(&mut self) -> Result<(F, F)> {
        let primary = self.q.mul(&self.left_defect)?.trace()?;
        let p_next = self.t.mul(&self.p)?.mul(&self.adj)?;
        let alt = self.p.sub(&p_next)?.trace()?;
        check_imag(primary)?;
        let residual = (primary - alt).norm();
        self.q = self.adj.mul(&self.q.mul(&self.t)?)?;
        self.p = p_next;
        Ok((primary.re, residual))
    }
}

/// Stepper for `b_n`, carrying `R_n = T*^n T^{n+1}` and the reordered
/// factor `H_n = T (T* T)^n`. Both commutators are assembled in full before
/// tracing; the reorder form must agree with the primary form.
struct BSequenceIter<F: Real> {
    adj: Operator<F>,
    t: Operator<F>,
    gram: Operator<F>,
    r: Operator<F>,
    h: Operator<F>,
}

impl<F: Real> BSequenceIter<F> {
    fn new(t: &Operator<F>) -> Result<Self> {
        let adj = t.adjoint();
        let gram = adj.mul(t)?;
        Ok(Self { adj, t: t.clone(), gram, r: t.clone(), h: t.clone() })
    }

    /// `(b_n, |reorder residual|)`, then advance to `n + 1`.
    fn next_term(&mut self) -> Result<(F, F)> {
        let primary = commutator(&self.adj, &self.r)?.trace()?;
        let reordered = commutator(&self.adj, &self.h)?.trace()?;
        check_imag(primary)?;
        let residual = (primary - reordered).norm();
        self.r = self.adj.mul(&self.r.mul(&self.t)?)?;
        self.h = self.h.mul(&self.gram)?;
        Ok((primary.re, residual))
    }
}

fn check_imag<F: Real>(value: Cpx<F>) -> Result<()> {
    if value.im.abs() > F::real(tol::IMAG_TRACE_TOL) {
        return Err(OpError::CrossCheckFailed {
            what: "imaginary part of a trace-sequence term".to_string(),
            n: 0,
            lhs: value.im.to_f64_lossy(),
            rhs: 0.0,
        });
    }
    Ok(())
}

/// Sequence values together with the per-term cross-check residuals.
pub(crate) struct SequenceDetail<F: Real> {
    pub values: Vec<F>,
    pub cross_residuals: Vec<F>,
}

pub(crate) fn a_sequence_detail<F: Real>(t: &Operator<F>, max_index: usize) -> Result<SequenceDetail<F>> {
    let mut iter = ASequenceIter::new(t);
    let mut values = Vec::with_capacity(max_index + 1);
    let mut cross = Vec::with_capacity(max_index + 1);
    for _ in 0..=max_index {
        let (v, r) = iter.next_term()?;
        values.push(v);
        cross.push(r);
    }
    Ok(SequenceDetail { values, cross_residuals: cross })
}

pub(crate) fn b_sequence_detail<F: Real>(t: &Operator<F>, max_index: usize) -> Result<SequenceDetail<F>> {
    let mut iter = BSequenceIter::new(t)?;
    let mut values = Vec::with_capacity(max_index + 1);
    let mut cross = Vec::with_capacity(max_index + 1);
    for _ in 0..=max_index {
        let (v, r) = iter.next_term()?;
        values.push(v);
        cross.push(r);
    }
    Ok(SequenceDetail { values, cross_residuals: cross })
}

fn enforce_cross_check<F: Real>(detail: &SequenceDetail<F>, what: &str) -> Result<()> {
    let bound = F::real(tol::SEQUENCE_CROSS_CHECK);
    for (n, &r) in detail.cross_residuals.iter().enumerate() {
        if r > bound {
            return Err(OpError::CrossCheckFailed {
                what: what.to_string(),
                n,
                lhs: r.to_f64_lossy(),
                rhs: 0.0,
            });
        }
    }
    Ok(())
}

/// `a_n = tr(T*^n T^n (I - T T*))` for `n = 0..=max_index`, cross-checked
/// per term against `tr(T^n T*^n - T^{n+1} T*^{n+1})`.
pub fn a_sequence<F: Real>(t: &Operator<F>, max_index: usize) -> Result<TraceSequence<F>> {
    let detail = a_sequence_detail(t, max_index)?;
    enforce_cross_check(&detail, "two forms of a_n")?;
    Ok(TraceSequence { kind: SequenceKind::A, values: detail.values, fingerprint: t.fingerprint() })
}

/// `b_n = tr [T*, T*^n T^{n+1}]` for `n = 0..=max_index`, cross-checked per
/// term against the reordered factor `tr [T*, T (T* T)^n]`.
pub fn b_sequence<F: Real>(t: &Operator<F>, max_index: usize) -> Result<TraceSequence<F>> {
    let detail = b_sequence_detail(t, max_index)?;
    enforce_cross_check(&detail, "factor orders of b_n")?;
    Ok(TraceSequence { kind: SequenceKind::B, values: detail.values, fingerprint: t.fingerprint() })
}

// ---------------------------------------------------------------------------
// Limit detection
// ---------------------------------------------------------------------------

/// Plain stabilization window over a sequence, with optional Aitken
/// delta-squared acceleration of the detected sequence.
struct StabilizationDetector<F: Real> {
    tol: F,
    window: usize,
    accelerate: bool,
    raw: Vec<F>,
    detected: Vec<F>,
    consecutive: usize,
    fired: bool,
}

impl<F: Real> StabilizationDetector<F> {
    fn new(cfg: &ConvergenceConfig<F>) -> Self {
        Self {
            tol: cfg.tol,
            window: cfg.window,
            accelerate: cfg.accelerate,
            raw: Vec::new(),
            detected: Vec::new(),
            consecutive: 0,
            fired: false,
        }
    }

    /// Feed one raw term; returns true once the window fires.
    fn push(&mut self, x: F) -> bool {
        self.raw.push(x);
        if self.accelerate {
            if self.raw.len() >= 3 {
                let i = self.raw.len() - 3;
                let (x0, x1, x2) = (self.raw[i], self.raw[i + 1], self.raw[i + 2]);
                let denom = x2 - x1 - x1 + x0;
                let accel = if denom.abs() > F::epsilon() * x2.abs().max(F::one()) {
                    x0 - (x1 - x0) * (x1 - x0) / denom
                } else {
                    x2
                };
                self.feed_detected(accel);
            }
        } else {
            self.feed_detected(x);
        }
        self.fired
    }

    fn feed_detected(&mut self, x: F) {
        if let Some(&prev) = self.detected.last() {
            if (x - prev).abs() < self.tol {
                self.consecutive += 1;
            } else {
                self.consecutive = 0;
            }
        }
        self.detected.push(x);
        if !self.fired && self.consecutive >= self.window {
            self.fired = true;
        }
    }

    fn value(&self) -> F {
        self.detected.last().or(self.raw.last()).copied().unwrap_or_else(F::zero)
    }

    fn last_deltas(&self, count: usize) -> Vec<F> {
        let n = self.detected.len();
        (n.saturating_sub(count).max(1)..n)
            .map(|i| (self.detected[i] - self.detected[i - 1]).abs())
            .collect()
    }
}

// ---------------------------------------------------------------------------
// The three formulas
// ---------------------------------------------------------------------------

/// Curvature by the defect-trace limit `lim_n a_n`.
pub fn curvature_defect<F: Real>(t: &Operator<F>, cfg: &ConvergenceConfig<F>) -> Result<CurvatureResult<F>> {
    cfg.check()?;
    let mut iter = ASequenceIter::new(t);
    let mut detector = StabilizationDetector::new(cfg);
    let mut steps = 0;
    for n in 0..=cfg.max_n {
        let (a, residual) = iter.next_term()?;
        if residual > F::real(tol::SEQUENCE_CROSS_CHECK) {
            return Err(OpError::CrossCheckFailed {
                what: "two forms of a_n".to_string(),
                n,
                lhs: residual.to_f64_lossy(),
                rhs: 0.0,
            });
        }
        steps = n;
        if detector.push(a) {
            break;
        }
    }
    Ok(CurvatureResult {
        value: detector.value(),
        method: CurvatureMethod::Defect,
        converged: detector.fired,
        diagnostics: CurvatureDiagnostics {
            steps,
            last_deltas: detector.last_deltas(4),
            path: "stabilization of a_n = tr(T*^n T^n (I - T T*))",
        },
    })
}

/// Curvature by the Cesaro ratio `tr(I - T^n T*^n) / n`.
///
/// The numerator is accumulated by telescoping partial sums of the
/// a-sequence (`tr(I - T^n T*^n) = sum_{m<n} a_m`), which the diagnostics
/// record as the computational path.
pub fn curvature_cesaro<F: Real>(t: &Operator<F>, cfg: &ConvergenceConfig<F>) -> Result<CurvatureResult<F>> {
    cfg.check()?;
    let mut iter = ASequenceIter::new(t);
    let mut detector = StabilizationDetector::new(cfg);
    let mut partial = F::zero();
    let mut steps = 0;
    for n in 1..=cfg.max_n {
        let (a, _) = iter.next_term()?;
        partial += a; // partial = sum_{m<n} a_m after this add
        let ratio = partial / F::real(n as f64);
        steps = n;
        if detector.push(ratio) {
            break;
        }
    }
    Ok(CurvatureResult {
        value: detector.value(),
        method: CurvatureMethod::Cesaro,
        converged: detector.fired,
        diagnostics: CurvatureDiagnostics {
            steps,
            last_deltas: detector.last_deltas(4),
            path: "tr(I - T^n T*^n)/n via telescoped partial sums of a_n",
        },
    })
}

/// Curvature by the circle integral
/// `(1-r^2) tr(Delta (I - r z T*)^{-1} (I - r conj(z) T)^{-1} Delta)`,
/// averaged over the angular grid with normalized measure `d theta / 2 pi`
/// and extrapolated `r -> 1` by Richardson in `1 - r`.
pub fn curvature_integral<F: Real>(t: &Operator<F>, schedule: &IntegralSchedule<F>) -> Result<CurvatureResult<F>> {
    schedule.check()?;
    let factors = defect_factors(t)?;
    let leaves = t.leaves();

    let mut total = F::zero();
    let mut all_converged = true;
    let mut max_steps = 0;
    let mut last_deltas: Vec<F> = Vec::new();

    for factor in &factors {
        if factor.is_zero() {
            // Zero defect: the integrand vanishes identically.
            continue;
        }
        let leaf = leaves[factor.component];
        let columns = factor.columns();
        let mut f_of_r = Vec::with_capacity(schedule.r_values.len());
        for &r in &schedule.r_values {
            let mut mean = F::zero();
            for s in 0..schedule.quad_points {
                let theta = 2.0 * std::f64::consts::PI * (s as f64) / (schedule.quad_points as f64);
                // zeta = r e^{-i theta} realizes (I - r conj(z) T)^{-1}.
                let zeta = cpx::<F>(r.to_f64_lossy() * theta.cos(), -r.to_f64_lossy() * theta.sin());
                let mut hs_norm_sq = F::zero();
                for col in &columns {
                    let x = resolvent_column(leaf, zeta, col, schedule.neumann_eps)?;
                    hs_norm_sq += x.norm_sqr();
                }
                mean += (F::one() - r * r) * hs_norm_sq;
            }
            f_of_r.push(mean / F::real(schedule.quad_points as f64));
        }
        let extrapolated = richardson(&f_of_r, schedule.extrapolation_order);
        let (value, converged, deltas) = match extrapolated.as_slice() {
            [] | [_] => {
                // Not enough levels to estimate a residual; report the last
                // plain value, flagged.
                (*f_of_r.last().expect("non-empty schedule"), false, Vec::new())
            }
            est => {
                let residual = (est[est.len() - 1] - est[est.len() - 2]).abs();
                if residual <= F::real(tol::RICHARDSON_RESIDUAL) {
                    (est[est.len() - 1], true, vec![residual])
                } else {
                    (*f_of_r.last().expect("non-empty schedule"), false, vec![residual])
                }
            }
        };
        total += value;
        all_converged &= converged;
        max_steps = max_steps.max(schedule.r_values.len());
        last_deltas.extend(deltas);
    }

    Ok(CurvatureResult {
        value: total,
        method: CurvatureMethod::Integral,
        converged: all_converged,
        diagnostics: CurvatureDiagnostics {
            steps: max_steps,
            last_deltas,
            path: "trapezoidal circle mean + Richardson in (1 - r), order 2",
        },
    })
}

/// Richardson table for step-halving radii: returns the highest-order
/// column (one estimate per usable level).
fn richardson<F: Real>(f: &[F], order: usize) -> Vec<F> {
    let mut level: Vec<F> = f.to_vec();
    for m in 1..=order {
        if level.len() < 2 {
            break;
        }
        let factor = F::real(2f64.powi(m as i32));
        level = level
            .windows(2)
            .map(|w| (factor * w[1] - w[0]) / (factor - F::one()))
            .collect();
    }
    level
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kernel::leaf::QuasiToeplitzOperator;
    use crate::scalar::cpx;

    fn shift_op() -> Operator<f64> {
        Operator::leaf(QuasiToeplitzOperator::monomial(1, cpx(1.0, 0.0)))
    }

    fn weighted_half() -> Operator<f64> {
        use crate::kernel::correction::rank_one;
        Operator::leaf(QuasiToeplitzOperator::new(
            crate::kernel::symbol::LaurentSymbol::monomial(1, cpx(1.0, 0.0)),
            rank_one(1, 0, cpx(-0.5, 0.0)),
        ))
    }

    #[test]
    fn a_sequence_of_shift_is_constant_one() {
        let seq = a_sequence(&shift_op(), 12).unwrap();
        for v in seq.values {
            assert!((v - 1.0).abs() < 1e-14);
        }
    }

    #[test]
    fn a_sequence_of_adjoint_shift_vanishes() {
        let seq = a_sequence(&shift_op().adjoint(), 12).unwrap();
        for v in seq.values {
            assert!(v.abs() < 1e-14);
        }
    }

    #[test]
    fn a_sequence_of_weighted_shift() {
        let seq = a_sequence(&weighted_half(), 8).unwrap();
        assert!((seq.values[0] - 1.75).abs() < 1e-13);
        for v in &seq.values[1..] {
            assert!((v - 1.0).abs() < 1e-13);
        }
    }

    #[test]
    fn b_sequence_of_shift_is_constant_one() {
        let seq = b_sequence(&shift_op(), 10).unwrap();
        for v in seq.values {
            assert!((v - 1.0).abs() < 1e-13);
        }
    }

    #[test]
    fn b_sequence_of_adjoint_shift_is_minus_one() {
        let seq = b_sequence(&shift_op().adjoint(), 10).unwrap();
        for v in seq.values {
            assert!((v + 1.0).abs() < 1e-13);
        }
    }

    #[test]
    fn defect_curvature_of_shift_is_one() {
        let res = curvature_defect(&shift_op(), &ConvergenceConfig::default()).unwrap();
        assert!(res.converged);
        assert!((res.value - 1.0).abs() < 1e-12);
    }

    #[test]
    fn defect_curvature_of_identity_is_zero() {
        let id = shift_op().identity_like();
        let res = curvature_defect(&id, &ConvergenceConfig::default()).unwrap();
        assert!(res.converged);
        assert!(res.value.abs() < 1e-14);
    }

    #[test]
    fn defect_curvature_of_direct_sum() {
        let s = shift_op();
        let t = Operator::direct_sum(vec![s.adjoint(), s]);
        let res = curvature_defect(&t, &ConvergenceConfig::default()).unwrap();
        assert!((res.value - 1.0).abs() < 1e-12);
    }

    #[test]
    fn cesaro_of_shift_is_exactly_one() {
        let res = curvature_cesaro(&shift_op(), &ConvergenceConfig::default()).unwrap();
        assert!(res.converged);
        assert!((res.value - 1.0).abs() < 1e-12);
        assert!(res.diagnostics.path.contains("telescoped"));
    }

    #[test]
    fn cesaro_of_weighted_shift_is_flagged_not_converged() {
        // c_n = (7/4 + (n-1))/n creeps toward 1 like 3/(4n); the plain
        // stabilization window cannot fire by n = 64.
        let res = curvature_cesaro(&weighted_half(), &ConvergenceConfig::default()).unwrap();
        assert!(!res.converged);
        assert!((res.value - 1.0).abs() < 0.05);
    }

    #[test]
    fn integral_of_adjoint_shift_is_zero() {
        // Delta_{S*} = 0: the integrand vanishes.
        let res = curvature_integral(&shift_op().adjoint(), &IntegralSchedule::default()).unwrap();
        assert!(res.converged);
        assert_eq!(res.value, 0.0);
    }

    #[test]
    fn integral_of_shift_small_schedule() {
        // Small schedule keeps the unit test fast; the full default schedule
        // is exercised by the acceptance suite.
        let schedule = IntegralSchedule::geometric(3..=7, 64, 1e-10);
        let res = curvature_integral(&shift_op(), &schedule).unwrap();
        assert!(res.converged);
        assert!((res.value - 1.0).abs() < 1e-6, "K = {}", res.value);
    }

    #[test]
    fn integral_rejects_radius_outside_disc() {
        let mut schedule = IntegralSchedule::<f64>::default();
        schedule.r_values.push(1.0);
        let err = curvature_integral(&shift_op(), &schedule).unwrap_err();
        assert!(matches!(err, OpError::DivergentSeries { .. }));
    }

    #[test]
    fn convergence_config_invariants() {
        let bad = ConvergenceConfig { max_n: 2, tol: 1e-9, window: 4, accelerate: false };
        assert!(matches!(bad.check(), Err(OpError::InvalidConfig { .. })));
    }
}
