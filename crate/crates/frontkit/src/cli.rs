//! Command-line front end: JSON config ingestion, the end-to-end analysis
//! pipeline, report serialization, and front-curve emission (CSV / SVG).
//!
//! Reports render every exact rational as `p/q` text so golden files diff
//! cleanly; timings are reported separately and zeroed by
//! [`ReportDocument::canonical`] so that repeated runs are byte-identical.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::arith::{parse_rat, Field, Rat};
use crate::divisor::{
    discriminant_poly, sigma_matrices, transversality_verdict, DeformationFamily, Verdict,
};
use crate::poly::{parse_polynomial, PolyRing, RingRc, SparsePolynomial};
use crate::wavefront::{
    build_phase, default_e_list, extract_iota, front_residual, milnor_quotient, phase_at,
    sample_front, verify_assumptions, DeformationFrame, InitialFront, PhaseFunction,
};

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("config error: {0}")]
    Config(String),
    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
    #[error("json error: {0}")]
    Json(#[from] serde_json::Error),
}

// ---------------------------------------------------------------------------
// Config
// ---------------------------------------------------------------------------

/// JSON analysis configuration. Rationals are strings `"p/q"` (or `"p"`),
/// polynomials are strings in the infix grammar of the `poly` parser.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AnalysisConfig {
    /// Names of the z-variables of the initial front.
    pub variables: Vec<String>,
    /// Initial front polynomial F(z).
    #[serde(rename = "F")]
    pub f: String,
    /// Focal point (x_1, .., x_{n+1}, t), arity n + 2.
    pub focal: Vec<String>,
    /// Deformation monomials e_1..e_m; defaults to the standard monomials of
    /// the Milnor quotient followed by the leftover support monomials.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub e_list: Option<Vec<String>>,
    /// Polynomials in s_1..s_m that vanish on the constraint set U.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub u_constraints: Option<Vec<String>>,
    /// Number of rows of Sigma; defaults to m.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub nu: Option<usize>,
    /// Parameter tails (s_2..s_m) for the basis-assumption spot checks.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sample_points: Option<Vec<Vec<String>>>,
    /// 1-based row selections for the pencil minors of the isolation test.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub minor_selections: Option<Vec<Vec<usize>>>,
    /// Directions in (x, t)-space for directional derivatives of T.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub directions: Option<Vec<Vec<String>>>,
}

impl AnalysisConfig {
    pub fn from_json(text: &str) -> Result<Self, CliError> {
        Ok(serde_json::from_str(text)?)
    }
}

/// Built-in preset: parabola-like quartic front in the plane, focal point on
/// the caustic, parameter `a`.
pub fn preset_example1(a: &Rat) -> AnalysisConfig {
    let half_focal = (a * &Rat::from_integer(2.into())).recip();
    AnalysisConfig {
        variables: vec!["z".to_string()],
        f: format!("{} z^2 + z^4", rat_str(a)),
        focal: vec![
            "0".to_string(),
            rat_str(&-&half_focal),
            rat_str(&half_focal),
        ],
        e_list: None,
        u_constraints: None,
        nu: None,
        sample_points: None,
        minor_selections: Some(vec![
            vec![2, 3, 4, 5, 6, 9, 10, 11],
            vec![1, 2, 3, 4, 7, 9, 10, 11],
            vec![2, 3, 4, 7, 8, 9, 10, 11],
        ]),
        directions: None,
    }
}

/// Built-in preset: paraboloid front in 3-space with curvature parameters
/// `k1 < k2`, focal point on the k1-axis.
pub fn preset_example2(k1: &Rat, k2: &Rat) -> AnalysisConfig {
    let k1s = rat_str(k1);
    let k2s = rat_str(k2);
    AnalysisConfig {
        variables: vec!["z1".to_string(), "z2".to_string()],
        f: format!("-1/2 ({k1s} z1^2 + {k2s} z2^2)"),
        focal: vec![
            "0".to_string(),
            "0".to_string(),
            rat_str(&k1.recip()),
            rat_str(&k1.recip()),
        ],
        e_list: Some(
            [
                "1", "z1", "z1^2", "z2", "z2^2", "z1 z2", "z2^3", "z1^3", "z1^2 z2", "z1 z2^2",
            ]
            .iter()
            .map(|s| s.to_string())
            .collect(),
        ),
        u_constraints: Some(vec![
            format!("{k1s} s7 - {k2s} s9"),
            format!("{k1s} s10 - {k2s} s8"),
        ]),
        nu: Some(8),
        sample_points: None,
        minor_selections: None,
        directions: None,
    }
}

fn rat_str(r: &Rat) -> String {
    if r.denom() == &num_bigint::BigInt::from(1) {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

// ---------------------------------------------------------------------------
// Report
// ---------------------------------------------------------------------------

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct RankTable {
    pub rank_sigma: usize,
    pub rank_t: usize,
    pub nu: usize,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct IsolationSection {
    pub selections_used: Vec<Vec<usize>>,
    pub multiplicity: usize,
    pub isolated: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub witness: Option<String>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct MilnorSection {
    /// Dimension of the global Jacobian quotient of the focal fiber.
    pub global: usize,
    /// Local multiplicity at the singular point z = 0.
    pub local_at_origin: usize,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct SampleSection {
    pub tail: Vec<String>,
    pub passed: bool,
    pub messages: Vec<String>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ErrorSection {
    pub stage: String,
    pub message: String,
}

/// Serialized end-to-end analysis result. All numbers appear as exact
/// rational strings; `timings_ms` is zeroed by [`ReportDocument::canonical`].
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ReportDocument {
    pub config: AnalysisConfig,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub mu: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub m: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub nu: Option<usize>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub iota: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub milnor: Option<MilnorSection>,
    /// Sigma-tilde at the focal parameter point, row major; diagonal entries
    /// carry the symbolic `s1` summand.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub sigma_tilde: Vec<Vec<String>>,
    /// Monic Weierstrass polynomial in s1 cutting out the discriminant at
    /// the focal parameter tail.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub discriminant: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub ranks: Option<RankTable>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub verdict: Option<Verdict>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub isolation: Option<IsolationSection>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub samples: Vec<SampleSection>,
    /// Directional derivatives of T, one matrix (row major, rational
    /// strings) per configured direction.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub derivatives: Vec<Vec<Vec<String>>>,
    pub timings_ms: BTreeMap<String, u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub error: Option<ErrorSection>,
}

impl ReportDocument {
    fn empty(config: AnalysisConfig) -> Self {
        ReportDocument {
            config,
            mu: None,
            m: None,
            nu: None,
            iota: Vec::new(),
            milnor: None,
            sigma_tilde: Vec::new(),
            discriminant: None,
            ranks: None,
            verdict: None,
            isolation: None,
            samples: Vec::new(),
            derivatives: Vec::new(),
            timings_ms: BTreeMap::new(),
            error: None,
        }
    }

    /// Byte-identical form: wall-clock timings replaced by zero.
    pub fn canonical(mut self) -> Self {
        for v in self.timings_ms.values_mut() {
            *v = 0;
        }
        self
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }
}

// ---------------------------------------------------------------------------
// Analysis pipeline
// ---------------------------------------------------------------------------

struct Stage<'a> {
    report: &'a mut ReportDocument,
    clock: std::time::Instant,
}

impl<'a> Stage<'a> {
    fn start(report: &'a mut ReportDocument) -> Self {
        Stage {
            report,
            clock: std::time::Instant::now(),
        }
    }

    fn lap(&mut self, name: &str) {
        let elapsed = self.clock.elapsed().as_millis() as u64;
        self.report.timings_ms.insert(name.to_string(), elapsed);
        self.clock = std::time::Instant::now();
    }
}

fn parse_rat_text(text: &str) -> Result<Rat, String> {
    parse_rat(text).map_err(|e| format!("bad rational {text:?}: {e}"))
}

fn parse_point(texts: &[String]) -> Result<Vec<Rat>, String> {
    texts.iter().map(|t| parse_rat_text(t)).collect()
}

struct Prepared {
    phase: PhaseFunction,
    frame: DeformationFrame,
    fam: DeformationFamily,
    focal: Vec<Rat>,
}

fn prepare(config: &AnalysisConfig) -> Result<Prepared, (String, String)> {
    let fail = |stage: &str, msg: String| (stage.to_string(), msg);
    let ring = PolyRing::new(config.variables.clone());
    let f = parse_polynomial(&ring, &config.f).map_err(|e| fail("parse_front", e.to_string()))?;
    let front = InitialFront::new(f);
    let n = front.n();
    let focal = parse_point(&config.focal).map_err(|e| fail("parse_focal", e))?;
    if focal.len() != n + 2 {
        return Err(fail(
            "parse_focal",
            format!(
                "focal point needs {} coordinates, got {}",
                n + 2,
                focal.len()
            ),
        ));
    }
    let phase = build_phase(&front).map_err(|e| fail("build_phase", e.to_string()))?;
    let e_list: Vec<SparsePolynomial<Rat>> = match &config.e_list {
        Some(texts) => texts
            .iter()
            .map(|t| parse_polynomial(phase.z_ring(), t))
            .collect::<Result<_, _>>()
            .map_err(|e| fail("parse_e_list", e.to_string()))?,
        None => {
            default_e_list(&phase, &focal).map_err(|e| fail("default_e_list", e.to_string()))?
        }
    };
    let m = e_list.len();
    let s_ring: RingRc = PolyRing::new((1..=m).map(|j| format!("s{j}")).collect::<Vec<_>>());
    let constraints: Vec<SparsePolynomial<Rat>> = match &config.u_constraints {
        Some(texts) => texts
            .iter()
            .map(|t| parse_polynomial(&s_ring, t))
            .collect::<Result<_, _>>()
            .map_err(|e| fail("parse_u_constraints", e.to_string()))?,
        None => Vec::new(),
    };
    let constraint_arg = if constraints.is_empty() {
        None
    } else {
        Some((&s_ring, &constraints[..]))
    };
    let frame = extract_iota(&phase, &focal, &e_list, config.nu, constraint_arg)
        .map_err(|e| fail("extract_iota", e.to_string()))?;
    let base = phase_at(&phase, &focal).map_err(|e| fail("phase_at", e.to_string()))?;
    let fam = DeformationFamily::from_frame(&frame, base);
    Ok(Prepared {
        phase,
        frame,
        fam,
        focal,
    })
}

/// Run the full pipeline. Errors are embedded in the report with their stage
/// label; callers map `report.error` to exit code 2.
pub fn run_analyze(config: &AnalysisConfig) -> ReportDocument {
    let mut report = ReportDocument::empty(config.clone());
    let result = run_analyze_inner(config, &mut report);
    if let Err((stage, message)) = result {
        report.error = Some(ErrorSection { stage, message });
    }
    report
}

fn run_analyze_inner(
    config: &AnalysisConfig,
    report: &mut ReportDocument,
) -> Result<(), (String, String)> {
    let fail = |stage: &str, msg: String| (stage.to_string(), msg);
    let mut stage = Stage::start(report);
    let prep = prepare(config)?;
    stage.lap("prepare");
    let report = &mut *stage.report;

    report.mu = Some(prep.frame.mu);
    report.m = Some(prep.frame.m());
    report.nu = Some(prep.frame.nu);
    report.iota = prep.frame.iota.iter().map(|p| p.to_string()).collect();

    // Milnor data of the focal fiber.
    let mut stage = Stage::start(report);
    let q = milnor_quotient(&prep.fam.base).map_err(|e| fail("milnor_quotient", e.to_string()))?;
    let origin = vec![Rat::from_integer(0.into()); prep.phase.z_ring().nvars()];
    let local = q
        .local_multiplicity(&origin)
        .map_err(|e| fail("milnor_quotient", e.to_string()))?;
    stage.lap("milnor");
    let report = &mut *stage.report;
    report.milnor = Some(MilnorSection {
        global: q.dimension(),
        local_at_origin: local,
    });

    // Basis-assumption spot checks at the configured sample tails.
    if let Some(samples) = &config.sample_points {
        let mut stage = Stage::start(report);
        let mut tails = Vec::new();
        for texts in samples {
            let tail = parse_point(texts).map_err(|e| fail("parse_samples", e))?;
            if tail.len() + 1 != prep.frame.m() {
                return Err(fail(
                    "parse_samples",
                    format!(
                        "sample tail needs {} coordinates (s2..s{}), got {}",
                        prep.frame.m() - 1,
                        prep.frame.m(),
                        tail.len()
                    ),
                ));
            }
            tails.push(tail);
        }
        let checks = verify_assumptions(&prep.frame, &prep.phase, &tails)
            .map_err(|e| fail("verify_assumptions", e.to_string()))?;
        let mu = checks.mu;
        stage.lap("verify_assumptions");
        let report = &mut *stage.report;
        report.samples = checks
            .samples
            .iter()
            .map(|c| SampleSection {
                tail: c.point.iter().map(rat_str).collect(),
                passed: c.passed(mu),
                messages: c.messages.clone(),
            })
            .collect();
    }

    // Sigma-tilde and the discriminant at the focal parameter point.
    let mut stage = Stage::start(report);
    let focal_tail: Vec<Rat> = prep.frame.iota_at(&prep.focal)[1..].to_vec();
    let sig = sigma_matrices::<Rat>(&prep.fam, &focal_tail)
        .map_err(|e| fail("sigma_matrices", e.to_string()))?;
    stage.lap("sigma_matrices");
    let report = &mut *stage.report;
    let mu = prep.frame.mu;
    report.sigma_tilde = (0..mu)
        .map(|i| {
            (0..mu)
                .map(|j| {
                    let c = sig.c.at(i, j);
                    if i == j {
                        if Field::is_zero(c) {
                            "s1".to_string()
                        } else {
                            format!("s1 + {}", rat_str(c))
                        }
                    } else {
                        rat_str(c)
                    }
                })
                .collect()
        })
        .collect();

    let mut stage = Stage::start(report);
    let disc = discriminant_poly(&prep.fam, &focal_tail)
        .map_err(|e| fail("discriminant_poly", e.to_string()))?;
    stage.lap("discriminant_poly");
    let report = &mut *stage.report;
    report.discriminant = Some(disc.display_with("s1"));

    // Transversality verdict (with pencil isolation on rank drop).
    let mut stage = Stage::start(report);
    let selections = config.minor_selections.as_deref();
    let verdict = transversality_verdict(&prep.fam, &prep.frame, &prep.focal, selections)
        .map_err(|e| fail("transversality_verdict", e.to_string()))?;
    stage.lap("transversality_verdict");
    let report = &mut *stage.report;
    report.ranks = Some(RankTable {
        rank_sigma: verdict.rank_sigma,
        rank_t: verdict.rank_t,
        nu: verdict.nu,
    });
    report.verdict = Some(verdict.verdict);
    report.isolation = verdict.isolation.map(|d| IsolationSection {
        selections_used: d.selections_used,
        multiplicity: d.multiplicity,
        isolated: d.isolated,
        witness: d.witness,
    });

    // Optional directional derivatives of T.
    if let Some(dirs) = &config.directions {
        let mut stage = Stage::start(report);
        let mut mats = Vec::new();
        for texts in dirs {
            let dir = parse_point(texts).map_err(|e| fail("parse_directions", e))?;
            let dt =
                crate::divisor::directional_derivative_t(&prep.fam, &prep.frame, &prep.focal, &dir)
                    .map_err(|e| fail("directional_derivative", e.to_string()))?;
            mats.push(
                dt.rows()
                    .iter()
                    .map(|row| row.iter().map(rat_str).collect())
                    .collect(),
            );
        }
        stage.lap("directional_derivatives");
        stage.report.derivatives = mats;
    }

    Ok(())
}

// ---------------------------------------------------------------------------
// Front emission
// ---------------------------------------------------------------------------

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FrontFormat {
    Csv,
    Svg,
}

impl std::str::FromStr for FrontFormat {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "csv" => Ok(FrontFormat::Csv),
            "svg" => Ok(FrontFormat::Svg),
            other => Err(format!("unknown format {other:?} (expected csv or svg)")),
        }
    }
}

/// Sampled front data for one (t, branch) pair, already in ambient
/// x-coordinates.
pub struct FrontCurves {
    pub t_values: Vec<f64>,
    /// (t, branch, z-sample, x-point) rows in emission order.
    pub rows: Vec<(f64, i8, Vec<f64>, Vec<f64>)>,
    /// Largest |Psi| residual over all emitted points.
    pub max_residual: f64,
}

/// Sample the front of the configured initial surface at the given times.
/// The z-grid is a fixed uniform lattice: 241 points on [-1.2, 1.2] for
/// curves, a 41 x 41 lattice on [-1, 1]^2 for surfaces.
pub fn compute_front(config: &AnalysisConfig, t_values: &[f64]) -> Result<FrontCurves, CliError> {
    let ring = PolyRing::new(config.variables.clone());
    let f = parse_polynomial(&ring, &config.f)
        .map_err(|e| CliError::Config(format!("front polynomial: {e}")))?;
    let front = InitialFront::new(f);
    let phase = build_phase(&front).map_err(|e| CliError::Config(e.to_string()))?;
    let n = front.n();
    let grid: Vec<Vec<f64>> = match n {
        1 => (0..241)
            .map(|i| vec![-1.2 + 2.4 * (i as f64) / 240.0])
            .collect(),
        2 => {
            let mut g = Vec::new();
            for i in 0..41 {
                for j in 0..41 {
                    g.push(vec![
                        -1.0 + 2.0 * (i as f64) / 40.0,
                        -1.0 + 2.0 * (j as f64) / 40.0,
                    ]);
                }
            }
            g
        }
        other => {
            return Err(CliError::Config(format!(
                "front sampling supports 1 or 2 z-variables, got {other}"
            )))
        }
    };
    let mut rows = Vec::new();
    let mut max_residual: f64 = 0.0;
    for &t in t_values {
        for p in sample_front(&front, t, &grid) {
            max_residual = max_residual.max(front_residual(&phase, t, &p));
            rows.push((t, p.branch, p.z.clone(), p.x.clone()));
        }
    }
    Ok(FrontCurves {
        t_values: t_values.to_vec(),
        rows,
        max_residual,
    })
}

pub fn render_csv(curves: &FrontCurves, nz: usize, nx: usize) -> String {
    let mut out = String::new();
    out.push('t');
    out.push_str(",branch");
    for i in 1..=nz {
        let _ = write!(out, ",z{i}");
    }
    for i in 1..=nx {
        let _ = write!(out, ",x{i}");
    }
    out.push('\n');
    for (t, branch, z, x) in &curves.rows {
        let _ = write!(out, "{t},{branch}");
        for v in z {
            let _ = write!(out, ",{v}");
        }
        for v in x {
            let _ = write!(out, ",{v}");
        }
        out.push('\n');
    }
    out
}

/// Planar SVG: one polyline per (t, branch), viewBox from the sample
/// extents with a 5 % margin.
pub fn render_svg(curves: &FrontCurves) -> Result<String, CliError> {
    if curves.rows.iter().any(|(_, _, _, x)| x.len() != 2) {
        return Err(CliError::Config(
            "svg output needs a planar front (one z-variable)".to_string(),
        ));
    }
    let (mut x_min, mut x_max, mut y_min, mut y_max) = (f64::MAX, f64::MIN, f64::MAX, f64::MIN);
    for (_, _, _, x) in &curves.rows {
        x_min = x_min.min(x[0]);
        x_max = x_max.max(x[0]);
        y_min = y_min.min(x[1]);
        y_max = y_max.max(x[1]);
    }
    if curves.rows.is_empty() {
        (x_min, x_max, y_min, y_max) = (-1.0, 1.0, -1.0, 1.0);
    }
    let margin_x = 0.05 * (x_max - x_min).max(1e-3);
    let margin_y = 0.05 * (y_max - y_min).max(1e-3);
    let vb = (
        x_min - margin_x,
        -(y_max + margin_y),
        (x_max - x_min) + 2.0 * margin_x,
        (y_max - y_min) + 2.0 * margin_y,
    );
    let mut out = String::new();
    let _ = writeln!(
        out,
        "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"{:.6} {:.6} {:.6} {:.6}\">",
        vb.0, vb.1, vb.2, vb.3
    );
    let stroke = vb.2.max(vb.3) / 300.0;
    let colors = [
        "#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#8c564b", "#e377c2",
    ];
    for (ti, &t) in curves.t_values.iter().enumerate() {
        for branch in [1i8, -1] {
            let pts: Vec<&(f64, i8, Vec<f64>, Vec<f64>)> = curves
                .rows
                .iter()
                .filter(|(rt, rb, _, _)| *rt == t && *rb == branch)
                .collect();
            if pts.is_empty() {
                continue;
            }
            let mut path = String::new();
            for (i, (_, _, _, x)) in pts.iter().enumerate() {
                let cmd = if i == 0 { 'M' } else { 'L' };
                // SVG y grows downward; flip the vertical axis.
                let _ = write!(path, "{cmd}{:.6} {:.6} ", x[0], -x[1]);
            }
            let color = colors[ti % colors.len()];
            let _ = writeln!(
                out,
                "  <path d=\"{}\" fill=\"none\" stroke=\"{}\" stroke-width=\"{:.6}\"/>",
                path.trim_end(),
                color,
                stroke
            );
        }
    }
    out.push_str("</svg>\n");
    Ok(out)
}

/// Emit the sampled front in the requested format, returning (file name,
/// contents).
pub fn emit_front(
    config: &AnalysisConfig,
    t_values: &[f64],
    format: FrontFormat,
) -> Result<(String, String), CliError> {
    let curves = compute_front(config, t_values)?;
    let nz = config.variables.len();
    match format {
        FrontFormat::Csv => Ok(("front.csv".to_string(), render_csv(&curves, nz, nz + 1))),
        FrontFormat::Svg => Ok(("front.svg".to_string(), render_svg(&curves)?)),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::rat;

    #[test]
    fn config_round_trip() {
        let config = preset_example2(&rat(1, 1), &rat(2, 1));
        let text = serde_json::to_string(&config).unwrap();
        let back = AnalysisConfig::from_json(&text).unwrap();
        assert_eq!(back, config);
    }

    #[test]
    fn analyze_example1_free() {
        let config = preset_example1(&rat(2, 1));
        let report = run_analyze(&config).canonical();
        assert!(report.error.is_none(), "{:?}", report.error);
        assert_eq!(report.mu, Some(7));
        assert_eq!(report.nu, Some(8));
        assert_eq!(report.verdict, Some(Verdict::Free));
        let ranks = report.ranks.unwrap();
        assert_eq!(ranks.rank_t, 8);
        let disc = report.discriminant.unwrap();
        assert!(disc.starts_with("s1^7"), "discriminant {disc}");
        let m = report.milnor.unwrap();
        assert_eq!(m.global, 7);
        assert_eq!(m.local_at_origin, 3);
    }

    #[test]
    fn analyze_example2_free() {
        let config = preset_example2(&rat(1, 1), &rat(2, 1));
        let report = run_analyze(&config).canonical();
        assert!(report.error.is_none(), "{:?}", report.error);
        assert_eq!(report.mu, Some(5));
        assert_eq!(report.m, Some(10));
        assert_eq!(report.nu, Some(8));
        assert_eq!(report.verdict, Some(Verdict::Free));
        let m = report.milnor.unwrap();
        assert_eq!(m.global, 5);
        assert_eq!(m.local_at_origin, 3);
    }

    #[test]
    fn analyze_determinism() {
        let config = preset_example1(&rat(2, 1));
        let a = run_analyze(&config).canonical().to_json();
        let b = run_analyze(&config).canonical().to_json();
        assert_eq!(a, b);
    }

    #[test]
    fn analyze_bad_config_reports_stage() {
        let config = AnalysisConfig {
            variables: vec!["z".to_string()],
            f: "z^".to_string(),
            focal: vec!["0".to_string(), "0".to_string(), "1".to_string()],
            e_list: None,
            u_constraints: None,
            nu: None,
            sample_points: None,
            minor_selections: None,
            directions: None,
        };
        let report = run_analyze(&config);
        let err = report.error.expect("parse failure is reported");
        assert_eq!(err.stage, "parse_front");
    }

    #[test]
    fn front_flat_two_lines() {
        // F = 0: at t = 1 the front is the two lines x2 = +-1.
        let config = AnalysisConfig {
            variables: vec!["z".to_string()],
            f: "0".to_string(),
            focal: vec!["0".to_string(), "0".to_string(), "1".to_string()],
            e_list: None,
            u_constraints: None,
            nu: None,
            sample_points: None,
            minor_selections: None,
            directions: None,
        };
        let curves = compute_front(&config, &[1.0]).unwrap();
        assert!(!curves.rows.is_empty());
        for (_, branch, _, x) in &curves.rows {
            assert!((x[1] - f64::from(*branch)).abs() < 1e-12);
        }
        assert!(curves.max_residual < 1e-9);
        let (name, csv) = emit_front(&config, &[1.0], FrontFormat::Csv).unwrap();
        assert_eq!(name, "front.csv");
        assert!(csv.starts_with("t,branch,z1,x1,x2\n"));
        let (_, svg) = emit_front(&config, &[1.0], FrontFormat::Svg).unwrap();
        assert!(svg.contains("<path"));
    }

    #[test]
    fn front_t_zero_is_graph() {
        let config = preset_example1(&rat(2, 1));
        let curves = compute_front(&config, &[0.0]).unwrap();
        assert!(!curves.rows.is_empty());
        for (_, _, z, x) in &curves.rows {
            // W_0 = Y = {F(z) + u = 0}: x = (z, -F(z)).
            assert!((x[0] - z[0]).abs() < 1e-12);
            let fz = -(2.0 * z[0] * z[0] + z[0].powi(4));
            assert!((x[1] - fz).abs() < 1e-9);
        }
        let (_, svg) = emit_front(&config, &[0.5], FrontFormat::Svg).unwrap();
        assert!(svg.contains("viewBox"));
    }
}
