//! Per-operator verification of the index/curvature relation and the trace
//! identities behind it, with deterministic JSON/CSV reports.

use std::time::Instant;

use crate::curvature::{
    a_sequence_detail, b_sequence_detail, curvature_cesaro, curvature_defect, curvature_integral,
    ConvergenceConfig, CurvatureResult, IntegralSchedule,
};
use crate::error::Result;
use crate::index::{index_commutator, index_symbol, index_via_b, purity_diagnostic};
use crate::kernel::operator::Operator;
use crate::kernel::validate::{validate_almost_unitary, validate_contraction, ValidationConfig};
use crate::oplang;
use crate::scalar::Real;
use crate::tol;

/// Everything the harness needs to verify one operator.
#[derive(Debug, Clone)]
pub struct HarnessConfig<F: Real> {
    pub convergence: ConvergenceConfig<F>,
    pub schedule: IntegralSchedule<F>,
    pub validation: ValidationConfig<F>,
    /// Largest sequence index checked by the identity suite.
    pub identity_n: usize,
    pub identity_tol: F,
    pub theorem_tol: F,
    pub b_constancy_tol: F,
    pub purity_probes: usize,
    pub purity_horizon: usize,
    pub purity_tol: F,
    pub remark1_adjoint_tol: F,
    /// Probe index for the b-sequence index route.
    pub b_probe: usize,
    /// Include wall-clock timings in serialized reports. Disable to get
    /// byte-identical reports across reruns.
    pub emit_timings: bool,
}

impl<F: Real> Default for HarnessConfig<F> {
    fn default() -> Self {
        Self {
            convergence: ConvergenceConfig::default(),
            schedule: IntegralSchedule::default(),
            validation: ValidationConfig::default(),
            identity_n: 20,
            identity_tol: F::real(tol::IDENTITY_TOL),
            theorem_tol: F::real(tol::THEOREM_TOL),
            b_constancy_tol: F::real(tol::B_CONSTANCY_TOL),
            purity_probes: 8,
            purity_horizon: 32,
            purity_tol: F::real(tol::PURITY_TOL),
            remark1_adjoint_tol: F::real(tol::REMARK1_ADJOINT_TOL),
            b_probe: 0,
            emit_timings: true,
        }
    }
}

impl<F: Real> HarnessConfig<F> {
    /// Cheaper integral schedule for large random sweeps. The theorem and
    /// identity checks are untouched (they ride on the defect formula);
    /// only the integral cross-check runs on a shorter radius ladder.
    pub fn light_random() -> Self {
        Self {
            schedule: IntegralSchedule::geometric(3..=6, 64, F::real(1e-10)),
            emit_timings: false,
            ..Self::default()
        }
    }
}

/// Max residuals of the proof identities over `n <= N`.
#[derive(Debug, Clone)]
pub struct IdentityResiduals<F: Real> {
    /// Identity I: the two algebraic forms of `a_n` (for `T` and `T*`).
    pub a_two_forms: F,
    /// Identity II: `a_n(T) - a_n(T*) - b_n(T)`.
    pub decomposition: F,
    /// Identity III: `b_n - b_{n+1}`.
    pub telescoping: F,
    /// The b-sequence factor-reorder cross-check.
    pub reorder: F,
    pub pass: bool,
}

impl<F: Real> IdentityResiduals<F> {
    pub fn max(&self) -> F {
        self.a_two_forms.max(self.decomposition).max(self.telescoping).max(self.reorder)
    }
}

/// Identity residuals together with the raw sequences they came from.
#[derive(Debug, Clone)]
pub struct IdentityCheck<F: Real> {
    pub residuals: IdentityResiduals<F>,
    pub a_t: Vec<F>,
    pub a_adjoint: Vec<F>,
    pub b_t: Vec<F>,
}

/// Evaluate the proof identities for `n <= max_index` at tolerance `tol`.
pub fn verify_identities<F: Real>(
    t: &Operator<F>,
    max_index: usize,
    tol: F,
) -> Result<IdentityCheck<F>> {
    let a_t = a_sequence_detail(t, max_index)?;
    let a_adj = a_sequence_detail(&t.adjoint(), max_index)?;
    let b_t = b_sequence_detail(t, max_index)?;

    let fold_max = |values: &[F]| values.iter().copied().fold(F::zero(), F::max);
    let a_two_forms = fold_max(&a_t.cross_residuals).max(fold_max(&a_adj.cross_residuals));
    let reorder = fold_max(&b_t.cross_residuals);
    let decomposition = (0..=max_index)
        .map(|n| (a_t.values[n] - a_adj.values[n] - b_t.values[n]).abs())
        .fold(F::zero(), F::max);
    let telescoping = (0..max_index)
        .map(|n| (b_t.values[n] - b_t.values[n + 1]).abs())
        .fold(F::zero(), F::max);

    let residuals = IdentityResiduals {
        a_two_forms,
        decomposition,
        telescoping,
        reorder,
        pass: a_two_forms <= tol && decomposition <= tol && telescoping <= tol && reorder <= tol,
    };
    Ok(IdentityCheck { residuals, a_t: a_t.values, a_adjoint: a_adj.values, b_t: b_t.values })
}

/// Index values by the three routes.
#[derive(Debug, Clone)]
pub struct IndexSummary<F: Real> {
    pub symbol: i64,
    pub commutator: i64,
    pub b_n: i64,
    pub raw_commutator: F,
    pub agree: bool,
    pub reliable: bool,
}

/// Curvature by the three formulas, for one side.
#[derive(Debug, Clone)]
pub struct CurvatureTriple<F: Real> {
    pub defect: CurvatureResult<F>,
    pub cesaro: CurvatureResult<F>,
    pub integral: CurvatureResult<F>,
}

/// Residuals of `index - (K(T*) - K(T))` per curvature formula.
#[derive(Debug, Clone)]
pub struct TheoremResiduals<F: Real> {
    pub defect: F,
    pub cesaro: F,
    pub integral: F,
}

/// Extra residuals reported when the purity diagnostic vanishes:
/// `|K(T*)|` and `|K(T) + index|`, both from the defect formula.
#[derive(Debug, Clone)]
pub struct Remark1<F: Real> {
    pub adjoint_curvature: F,
    pub pure_index: F,
}

/// The computed body of a verification row (absent when the operator fails
/// validation or a computation errors out).
#[derive(Debug, Clone)]
pub struct ReportBody<F: Real> {
    pub index: IndexSummary<F>,
    pub curvature_t: CurvatureTriple<F>,
    pub curvature_adjoint: CurvatureTriple<F>,
    pub identities: IdentityResiduals<F>,
    pub b_constancy: F,
    pub theorem_residual: TheoremResiduals<F>,
    pub purity: F,
    pub remark1: Option<Remark1<F>>,
    pub a_t: Vec<F>,
    pub a_adjoint: Vec<F>,
    pub b_t: Vec<F>,
}

/// Wall-clock phase timings in milliseconds.
#[derive(Debug, Clone)]
pub struct Timings {
    pub validate: f64,
    pub index: f64,
    pub identities: f64,
    pub curvature: f64,
    pub total: f64,
}

/// One verified operator.
#[derive(Debug, Clone)]
pub struct VerificationReport<F: Real> {
    pub spec: String,
    pub valid: bool,
    pub error: Option<String>,
    pub body: Option<ReportBody<F>>,
    pub pass: bool,
    pub timings: Option<Timings>,
}

/// A sweep over many operators.
#[derive(Debug, Clone)]
pub struct SweepReport<F: Real> {
    pub rows: Vec<VerificationReport<F>>,
    pub overall_pass: bool,
}

fn ms_since(start: Instant) -> f64 {
    start.elapsed().as_secs_f64() * 1e3
}

/// Verify the index/curvature relation and the proof identities for one
/// operator. Non-convergence of a curvature formula flags the result; it
/// never raises.
pub fn verify_theorem<F: Real>(
    spec: &str,
    t: &Operator<F>,
    cfg: &HarnessConfig<F>,
) -> VerificationReport<F> {
    let start = Instant::now();
    let mut timings = Timings { validate: 0.0, index: 0.0, identities: 0.0, curvature: 0.0, total: 0.0 };

    let phase = Instant::now();
    let contraction = validate_contraction(t, &cfg.validation);
    let almost_unitary = validate_almost_unitary(t);
    timings.validate = ms_since(phase);
    if !contraction.pass || !almost_unitary {
        let reason = if !contraction.pass {
            "validation failed: not a contraction (sigma_max or symbol bound exceeded)"
        } else {
            "validation failed: not almost unitary (defect symbols are nonzero)"
        };
        timings.total = ms_since(start);
        return VerificationReport {
            spec: spec.to_string(),
            valid: false,
            error: Some(reason.to_string()),
            body: None,
            pass: false,
            timings: cfg.emit_timings.then_some(timings),
        };
    }

    let computed = (|| -> Result<ReportBody<F>> {
        let phase = Instant::now();
        let idx_symbol = index_symbol(t)?;
        let idx_comm = index_commutator(t)?;
        let idx_b = index_via_b(t, cfg.b_probe)?;
        let index = IndexSummary {
            symbol: idx_symbol.value,
            commutator: idx_comm.value,
            b_n: idx_b.value,
            raw_commutator: idx_comm.raw,
            agree: idx_symbol.value == idx_comm.value && idx_comm.value == idx_b.value,
            reliable: idx_comm.reliable && idx_b.reliable,
        };
        timings.index = ms_since(phase);

        let phase = Instant::now();
        let identities = verify_identities(t, cfg.identity_n, cfg.identity_tol)?;
        let b0 = identities.b_t[0];
        let b_constancy =
            identities.b_t.iter().map(|&b| (b - b0).abs()).fold(F::zero(), F::max);
        timings.identities = ms_since(phase);

        let phase = Instant::now();
        let adjoint = t.adjoint();
        let curvature_t = CurvatureTriple {
            defect: curvature_defect(t, &cfg.convergence)?,
            cesaro: curvature_cesaro(t, &cfg.convergence)?,
            integral: curvature_integral(t, &cfg.schedule)?,
        };
        let curvature_adjoint = CurvatureTriple {
            defect: curvature_defect(&adjoint, &cfg.convergence)?,
            cesaro: curvature_cesaro(&adjoint, &cfg.convergence)?,
            integral: curvature_integral(&adjoint, &cfg.schedule)?,
        };
        timings.curvature = ms_since(phase);

        let index_f = F::real(index.symbol as f64);
        let residual = |k_t: &CurvatureResult<F>, k_adj: &CurvatureResult<F>| {
            (index_f - (k_adj.value - k_t.value)).abs()
        };
        let theorem_residual = TheoremResiduals {
            defect: residual(&curvature_t.defect, &curvature_adjoint.defect),
            cesaro: residual(&curvature_t.cesaro, &curvature_adjoint.cesaro),
            integral: residual(&curvature_t.integral, &curvature_adjoint.integral),
        };

        let purity = purity_diagnostic(t, cfg.purity_probes, cfg.purity_horizon);
        let remark1 = (purity <= cfg.purity_tol).then(|| Remark1 {
            adjoint_curvature: curvature_adjoint.defect.value.abs(),
            pure_index: (curvature_t.defect.value + index_f).abs(),
        });

        Ok(ReportBody {
            index,
            curvature_t,
            curvature_adjoint,
            identities: identities.residuals,
            b_constancy,
            theorem_residual,
            purity,
            remark1,
            a_t: identities.a_t,
            a_adjoint: identities.a_adjoint,
            b_t: identities.b_t,
        })
    })();

    timings.total = ms_since(start);
    match computed {
        Ok(body) => {
            let pass = body.index.agree
                && body.index.reliable
                && body.identities.pass
                && body.b_constancy <= cfg.b_constancy_tol
                && body.theorem_residual.defect <= cfg.theorem_tol
                && body.remark1.as_ref().map_or(true, |r| {
                    r.adjoint_curvature <= cfg.remark1_adjoint_tol && r.pure_index <= cfg.theorem_tol
                });
            VerificationReport {
                spec: spec.to_string(),
                valid: true,
                error: None,
                body: Some(body),
                pass,
                timings: cfg.emit_timings.then_some(timings),
            }
        }
        Err(e) => VerificationReport {
            spec: spec.to_string(),
            valid: true,
            error: Some(e.to_string()),
            body: None,
            pass: false,
            timings: cfg.emit_timings.then_some(timings),
        },
    }
}

/// Verify a list of spec strings; rows that fail to parse or validate are
/// recorded as failed rows, never a crash. Row order follows input order.
pub fn sweep<F: Real>(specs: &[String], cfg: &HarnessConfig<F>) -> SweepReport<F> {
    let rows = specs
        .iter()
        .map(|spec| match oplang::parse::<F>(spec) {
            Ok(op) => verify_theorem(spec, &op, cfg),
            Err(e) => VerificationReport {
                spec: spec.clone(),
                valid: false,
                error: Some(e.to_string()),
                body: None,
                pass: false,
                timings: None,
            },
        })
        .collect::<Vec<_>>();
    let overall_pass = rows.iter().all(|r| r.pass);
    SweepReport { rows, overall_pass }
}

/// Verify pre-built operators (used when a spec string is not available).
pub fn sweep_operators<F: Real>(
    items: &[(String, Operator<F>)],
    cfg: &HarnessConfig<F>,
) -> SweepReport<F> {
    let rows = items
        .iter()
        .map(|(spec, op)| verify_theorem(spec, op, cfg))
        .collect::<Vec<_>>();
    let overall_pass = rows.iter().all(|r| r.pass);
    SweepReport { rows, overall_pass }
}

// ---------------------------------------------------------------------------
// Deterministic serialization
// ---------------------------------------------------------------------------

/// Fixed float formatting: 17 significant digits, locale-independent.
fn fmt_f(x: f64) -> String {
    format!("{:.16e}", x)
}

fn fmt_real<F: Real>(x: F) -> String {
    fmt_f(x.to_f64_lossy())
}

fn json_string(s: &str) -> String {
    let mut out = String::with_capacity(s.len() + 2);
    out.push('"');
    for c in s.chars() {
        match c {
            '"' => out.push_str("\\\""),
            '\\' => out.push_str("\\\\"),
            '\n' => out.push_str("\\n"),
            '\r' => out.push_str("\\r"),
            '\t' => out.push_str("\\t"),
            c if (c as u32) < 0x20 => out.push_str(&format!("\\u{:04x}", c as u32)),
            c => out.push(c),
        }
    }
    out.push('"');
    out
}

fn json_seq<F: Real>(values: &[F]) -> String {
    let items: Vec<String> = values.iter().map(|&v| fmt_real(v)).collect();
    format!("[{}]", items.join(","))
}

fn curvature_values_json<F: Real>(c: &CurvatureTriple<F>) -> String {
    format!(
        "{{\"defect\":{},\"cesaro\":{},\"integral\":{}}}",
        fmt_real(c.defect.value),
        fmt_real(c.cesaro.value),
        fmt_real(c.integral.value)
    )
}

fn curvature_flags_json<F: Real>(c: &CurvatureTriple<F>) -> String {
    format!(
        "{{\"defect\":{},\"cesaro\":{},\"integral\":{}}}",
        c.defect.converged, c.cesaro.converged, c.integral.converged
    )
}

fn config_json<F: Real>(cfg: &HarnessConfig<F>) -> String {
    let r_values: Vec<String> = cfg.schedule.r_values.iter().map(|&r| fmt_real(r)).collect();
    format!(
        concat!(
            "{{\"max_n\":{},\"tol\":{},\"window\":{},\"accelerate\":{},",
            "\"r_values\":[{}],\"quad_points\":{},\"neumann_eps\":{},\"extrapolation_order\":{},",
            "\"identity_n\":{},\"identity_tol\":{},\"theorem_tol\":{},\"b_constancy_tol\":{},",
            "\"purity_probes\":{},\"purity_horizon\":{},\"purity_tol\":{},\"remark1_adjoint_tol\":{},",
            "\"b_probe\":{}}}"
        ),
        cfg.convergence.max_n,
        fmt_real(cfg.convergence.tol),
        cfg.convergence.window,
        cfg.convergence.accelerate,
        r_values.join(","),
        cfg.schedule.quad_points,
        fmt_real(cfg.schedule.neumann_eps),
        cfg.schedule.extrapolation_order,
        cfg.identity_n,
        fmt_real(cfg.identity_tol),
        fmt_real(cfg.theorem_tol),
        fmt_real(cfg.b_constancy_tol),
        cfg.purity_probes,
        cfg.purity_horizon,
        fmt_real(cfg.purity_tol),
        fmt_real(cfg.remark1_adjoint_tol),
        cfg.b_probe
    )
}

/// Serialize one report row with stable field names and ordering.
pub fn report_to_json<F: Real>(r: &VerificationReport<F>, cfg: &HarnessConfig<F>) -> String {
    let mut out = String::new();
    out.push('{');
    out.push_str(&format!("\"spec\":{},", json_string(&r.spec)));
    out.push_str(&format!("\"valid\":{},", r.valid));
    out.push_str(&format!(
        "\"error\":{},",
        r.error.as_deref().map_or("null".to_string(), json_string)
    ));
    out.push_str(&format!("\"pass\":{},", r.pass));
    match &r.body {
        None => out.push_str(concat!(
            "\"index\":null,\"curvature\":null,\"curvature_converged\":null,",
            "\"sequences\":null,\"identities\":null,\"b_constancy\":null,",
            "\"theorem_residual\":null,\"purity\":null,\"remark1\":null,"
        )),
        Some(b) => {
            out.push_str(&format!(
                "\"index\":{{\"symbol\":{},\"commutator\":{},\"b_n\":{},\"raw_commutator\":{}}},",
                b.index.symbol,
                b.index.commutator,
                b.index.b_n,
                fmt_real(b.index.raw_commutator)
            ));
            out.push_str(&format!(
                "\"curvature\":{{\"T\":{},\"adjoint\":{}}},",
                curvature_values_json(&b.curvature_t),
                curvature_values_json(&b.curvature_adjoint)
            ));
            out.push_str(&format!(
                "\"curvature_converged\":{{\"T\":{},\"adjoint\":{}}},",
                curvature_flags_json(&b.curvature_t),
                curvature_flags_json(&b.curvature_adjoint)
            ));
            out.push_str(&format!(
                "\"sequences\":{{\"a_T\":{},\"a_adjoint\":{},\"b_T\":{}}},",
                json_seq(&b.a_t),
                json_seq(&b.a_adjoint),
                json_seq(&b.b_t)
            ));
            out.push_str(&format!(
                "\"identities\":{{\"a_two_forms\":{},\"decomposition\":{},\"telescoping\":{},\"reorder\":{}}},",
                fmt_real(b.identities.a_two_forms),
                fmt_real(b.identities.decomposition),
                fmt_real(b.identities.telescoping),
                fmt_real(b.identities.reorder)
            ));
            out.push_str(&format!("\"b_constancy\":{},", fmt_real(b.b_constancy)));
            out.push_str(&format!(
                "\"theorem_residual\":{{\"defect\":{},\"cesaro\":{},\"integral\":{}}},",
                fmt_real(b.theorem_residual.defect),
                fmt_real(b.theorem_residual.cesaro),
                fmt_real(b.theorem_residual.integral)
            ));
            out.push_str(&format!("\"purity\":{},", fmt_real(b.purity)));
            match &b.remark1 {
                None => out.push_str("\"remark1\":null,"),
                Some(r1) => out.push_str(&format!(
                    "\"remark1\":{{\"adjoint_curvature\":{},\"pure_index\":{}}},",
                    fmt_real(r1.adjoint_curvature),
                    fmt_real(r1.pure_index)
                )),
            }
        }
    }
    match &r.timings {
        None => out.push_str("\"timings_ms\":null,"),
        Some(t) => out.push_str(&format!(
            "\"timings_ms\":{{\"validate\":{},\"index\":{},\"identities\":{},\"curvature\":{},\"total\":{}}},",
            fmt_f(t.validate),
            fmt_f(t.index),
            fmt_f(t.identities),
            fmt_f(t.curvature),
            fmt_f(t.total)
        )),
    }
    out.push_str(&format!("\"config\":{}", config_json(cfg)));
    out.push('}');
    out
}

/// Serialize a sweep: `{"overall_pass": ..., "rows": [...]}`.
pub fn sweep_to_json<F: Real>(sweep: &SweepReport<F>, cfg: &HarnessConfig<F>) -> String {
    let rows: Vec<String> = sweep.rows.iter().map(|r| report_to_json(r, cfg)).collect();
    format!(
        "{{\"overall_pass\":{},\"rows\":[{}]}}\n",
        sweep.overall_pass,
        rows.join(",")
    )
}

const CSV_HEADER: &str = concat!(
    "spec,valid,error,pass,",
    "index.symbol,index.commutator,index.b_n,index.raw_commutator,",
    "curvature.T.defect,curvature.T.cesaro,curvature.T.integral,",
    "curvature.adjoint.defect,curvature.adjoint.cesaro,curvature.adjoint.integral,",
    "identities.a_two_forms,identities.decomposition,identities.telescoping,identities.reorder,",
    "theorem_residual.defect,theorem_residual.cesaro,theorem_residual.integral,",
    "purity,b_constancy,timings_ms.total"
);

fn csv_field(s: &str) -> String {
    if s.contains(',') || s.contains('"') || s.contains('\n') {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

/// Flatten a sweep into CSV with the JSON field names dot-joined.
pub fn sweep_to_csv<F: Real>(sweep: &SweepReport<F>) -> String {
    let mut out = String::from(CSV_HEADER);
    out.push('\n');
    for r in &sweep.rows {
        let mut cells: Vec<String> = vec![
            csv_field(&r.spec),
            r.valid.to_string(),
            csv_field(r.error.as_deref().unwrap_or("")),
            r.pass.to_string(),
        ];
        match &r.body {
            None => cells.extend(std::iter::repeat(String::new()).take(19)),
            Some(b) => {
                cells.push(b.index.symbol.to_string());
                cells.push(b.index.commutator.to_string());
                cells.push(b.index.b_n.to_string());
                cells.push(fmt_real(b.index.raw_commutator));
                for triple in [&b.curvature_t, &b.curvature_adjoint] {
                    cells.push(fmt_real(triple.defect.value));
                    cells.push(fmt_real(triple.cesaro.value));
                    cells.push(fmt_real(triple.integral.value));
                }
                cells.push(fmt_real(b.identities.a_two_forms));
                cells.push(fmt_real(b.identities.decomposition));
                cells.push(fmt_real(b.identities.telescoping));
                cells.push(fmt_real(b.identities.reorder));
                cells.push(fmt_real(b.theorem_residual.defect));
                cells.push(fmt_real(b.theorem_residual.cesaro));
                cells.push(fmt_real(b.theorem_residual.integral));
                cells.push(fmt_real(b.purity));
                cells.push(fmt_real(b.b_constancy));
            }
        }
        cells.push(r.timings.as_ref().map_or(String::new(), |t| fmt_f(t.total)));
        out.push_str(&cells.join(","));
        out.push('\n');
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::cpx;
    use crate::zoo;

    fn fast_cfg() -> HarnessConfig<f64> {
        HarnessConfig {
            schedule: IntegralSchedule::geometric(3..=6, 64, 1e-10),
            emit_timings: false,
            ..HarnessConfig::default()
        }
    }

    #[test]
    fn shift_report_matches_ground_truth() {
        let op = zoo::shift_power::<f64>(1);
        let report = verify_theorem("shift(1)", &op, &fast_cfg());
        assert!(report.valid && report.pass, "error: {:?}", report.error);
        let body = report.body.unwrap();
        assert_eq!(body.index.symbol, -1);
        assert!((body.curvature_t.defect.value - 1.0).abs() < 1e-12);
        assert!(body.curvature_adjoint.defect.value.abs() < 1e-12);
        assert!(body.theorem_residual.defect < 1e-12);
        assert!(body.remark1.is_some(), "the shift is pure");
    }

    #[test]
    fn identities_of_shift_are_exact() {
        let op = zoo::shift_power::<f64>(1);
        let check = verify_identities(&op, 20, 1e-10).unwrap();
        assert!(check.residuals.pass);
        assert!(check.residuals.max() < 1e-13);
        assert_eq!(check.b_t.len(), 21);
    }

    #[test]
    fn identities_of_identity_operator_vanish() {
        let op = zoo::shift_power::<f64>(0);
        let check = verify_identities(&op, 20, 1e-10).unwrap();
        assert!(check.residuals.max() == 0.0);
        assert!(check.a_t.iter().all(|&v| v == 0.0));
    }

    #[test]
    fn scaled_shift_is_a_failed_row_not_a_crash() {
        let half = zoo::shift_power::<f64>(1).scale(cpx(0.5, 0.0));
        let items = vec![
            ("shift(1)".to_string(), zoo::shift_power(1)),
            ("half-shift".to_string(), half),
        ];
        let sweep = sweep_operators(&items, &fast_cfg());
        assert!(sweep.rows[0].pass);
        assert!(!sweep.rows[1].valid);
        assert!(sweep.rows[1].error.as_deref().unwrap().contains("not almost unitary"));
        assert!(!sweep.overall_pass);
    }

    #[test]
    fn empty_sweep_passes() {
        let sweep = sweep::<f64>(&[], &fast_cfg());
        assert!(sweep.overall_pass);
        assert!(sweep.rows.is_empty());
    }

    #[test]
    fn serialized_reports_are_deterministic() {
        let cfg = fast_cfg();
        let specs = vec!["adj(shift(1)) (+) shift(1)".to_string()];
        let a = sweep_to_json(&sweep::<f64>(&specs, &cfg), &cfg);
        let b = sweep_to_json(&sweep::<f64>(&specs, &cfg), &cfg);
        assert_eq!(a, b);
    }

    #[test]
    fn json_is_parseable_with_expected_fields() {
        let cfg = fast_cfg();
        let specs = vec!["shift(1)".to_string(), "shift(".to_string()];
        let json = sweep_to_json(&sweep::<f64>(&specs, &cfg), &cfg);
        let value: serde_json::Value = serde_json::from_str(&json).expect("valid JSON");
        assert_eq!(value["rows"].as_array().unwrap().len(), 2);
        let row = &value["rows"][0];
        for field in [
            "spec",
            "valid",
            "index",
            "curvature",
            "identities",
            "theorem_residual",
            "purity",
            "timings_ms",
            "config",
        ] {
            assert!(!row[field].is_null() || field == "timings_ms", "missing {field}");
        }
        assert_eq!(row["index"]["symbol"], -1);
        assert!(row["curvature"]["T"]["defect"].is_number());
        // The malformed second spec must be recorded, not crash.
        assert_eq!(value["rows"][1]["valid"], false);
        assert_eq!(value["overall_pass"], false);
    }

    #[test]
    fn csv_has_one_line_per_row_plus_header() {
        let cfg = fast_cfg();
        let specs = vec!["shift(1)".to_string(), "bad(".to_string()];
        let csv = sweep_to_csv(&sweep::<f64>(&specs, &cfg));
        let lines: Vec<&str> = csv.lines().collect();
        assert_eq!(lines.len(), 3);
        assert!(lines[0].starts_with("spec,valid,error,pass,index.symbol"));
        let cells: Vec<&str> = lines[1].split(',').collect();
        assert_eq!(cells.len(), lines[0].split(',').count());
    }
}
