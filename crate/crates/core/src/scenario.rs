//! Scenario files and the per-mode runners behind the command-line tool.
//!
//! A run produces a JSON report and an SVG figure. Reports contain no
//! timings or thread counts, so the same scenario and seed give the same
//! bytes whatever the worker pool size.

use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::amoeba::{
    label_components, order_constancy, raster::dilate, raster_amoeba_with, AmoebaRaster, RasterOptions, Window,
};
use crate::error::{Error, Result};
use crate::exec::Exec;
use crate::geometry::{common_refinement, convex_hull, minkowski_sum, mixed_cones, mixed_volume, normal_fan, normalized_volume};
use crate::intersection::{analyze_pair, PairAnalysis, PairConfig, Status, Verdict, SCHEMA_VERSION};
use crate::laurent::LaurentPolynomial;
use crate::spine::{build_spine, curve_neighborhood, retract_experiment, SpineData};
use crate::svg::{Figure, AMOEBA_COLORS, INTERSECTION_COLOR};
use crate::tropical::{limit_directions, stable_intersection, tropical_curve, TropicalCurve, TropicalPoly};

/// Padding around the coefficient tropical curves for automatic windows.
pub const AUTO_WINDOW_PAD: f64 = 3.0;
/// Random complement points used by the order constancy check.
pub const CONSTANCY_SAMPLES: usize = 100;
pub const FIGURE_SIZE: f64 = 800.0;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    Newton,
    Amoeba,
    Spine,
    Tropical,
    Intersect,
    Verify,
}

impl Mode {
    pub fn name(self) -> &'static str {
        match self {
            Mode::Newton => "newton",
            Mode::Amoeba => "amoeba",
            Mode::Spine => "spine",
            Mode::Tropical => "tropical",
            Mode::Intersect => "intersect",
            Mode::Verify => "verify",
        }
    }

    /// Allowed numbers of polynomials.
    pub fn polynomial_counts(self) -> &'static [usize] {
        match self {
            Mode::Amoeba | Mode::Spine => &[1],
            Mode::Newton | Mode::Tropical => &[1, 2],
            Mode::Intersect | Mode::Verify => &[2],
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct WindowSpec {
    pub x_min: f64,
    pub x_max: f64,
    pub y_min: f64,
    pub y_max: f64,
}

fn default_resolution() -> usize {
    400
}

fn default_samples() -> usize {
    256
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Scenario {
    pub polynomials: Vec<LaurentPolynomial>,
    #[serde(default)]
    pub window: Option<WindowSpec>,
    #[serde(default = "default_resolution")]
    pub resolution: usize,
    #[serde(default = "default_samples")]
    pub angle_samples: usize,
    #[serde(default = "default_samples")]
    pub quad_n: usize,
    #[serde(default)]
    pub seed: u64,
    #[serde(default)]
    pub mode: Option<Mode>,
    /// Dilate measure-zero amoebas and skip the dimension check.
    #[serde(default)]
    pub degenerate: bool,
    /// Neighbourhood sizes for the spine retraction experiment.
    #[serde(default)]
    pub epsilons: Option<Vec<f64>>,
    #[serde(default)]
    pub merge_radius: Option<f64>,
    #[serde(default)]
    pub refine_factor: Option<usize>,
}

#[derive(Debug, thiserror::Error)]
pub enum ScenarioError {
    #[error("malformed scenario JSON at line {line}, column {column}: {message}")]
    Parse { line: usize, column: usize, message: String },
    #[error("invalid scenario: {0}")]
    Invalid(String),
}

impl Scenario {
    pub fn new(polynomials: Vec<LaurentPolynomial>) -> Self {
        Scenario {
            polynomials,
            window: None,
            resolution: default_resolution(),
            angle_samples: default_samples(),
            quad_n: default_samples(),
            seed: 0,
            mode: None,
            degenerate: false,
            epsilons: None,
            merge_radius: None,
            refine_factor: None,
        }
    }

    pub fn from_json(text: &str) -> std::result::Result<Self, ScenarioError> {
        serde_json::from_str(text).map_err(|e| ScenarioError::Parse {
            line: e.line(),
            column: e.column(),
            message: e.to_string(),
        })
    }

    /// Checks the polynomial count and numeric settings for `mode`.
    pub fn validate(&self, mode: Mode) -> std::result::Result<(), ScenarioError> {
        let counts = mode.polynomial_counts();
        if !counts.contains(&self.polynomials.len()) {
            let want: Vec<String> = counts.iter().map(|c| c.to_string()).collect();
            return Err(ScenarioError::Invalid(format!(
                "mode {} needs {} polynomial(s), got {}",
                mode.name(),
                want.join(" or "),
                self.polynomials.len()
            )));
        }
        if self.resolution < 8 {
            return Err(ScenarioError::Invalid(format!("resolution {} is below 8", self.resolution)));
        }
        if self.angle_samples < 8 || self.quad_n < 8 {
            return Err(ScenarioError::Invalid("angle_samples and quad_n must be at least 8".into()));
        }
        if let Some(w) = self.window {
            Window::new(w.x_min, w.x_max, w.y_min, w.y_max, self.resolution, self.resolution)
                .map_err(|e| ScenarioError::Invalid(e.to_string()))?;
        }
        if let Some(r) = self.merge_radius {
            if !(r > 0.0) {
                return Err(ScenarioError::Invalid("merge_radius must be positive".into()));
            }
        }
        if self.refine_factor == Some(0) {
            return Err(ScenarioError::Invalid("refine_factor must be at least 1".into()));
        }
        Ok(())
    }

    /// Coefficient tropical curves of all polynomials.
    fn coefficient_curves(&self) -> Result<Vec<TropicalCurve>> {
        self.polynomials.iter().map(|f| tropical_curve(&TropicalPoly::from_coefficient_logs(f))).collect()
    }

    /// The explicit window, or the coefficient curves' bounding box padded by
    /// [`AUTO_WINDOW_PAD`].
    pub fn resolve_window(&self) -> Result<Window> {
        match self.window {
            Some(w) => Window::new(w.x_min, w.x_max, w.y_min, w.y_max, self.resolution, self.resolution),
            None => {
                let curves = self.coefficient_curves()?;
                let refs: Vec<&TropicalCurve> = curves.iter().collect();
                Window::around_curves(&refs, AUTO_WINDOW_PAD, self.resolution)
            }
        }
    }

    fn raster_options(&self, exec: Exec) -> RasterOptions {
        RasterOptions { angle_samples: self.angle_samples, seed: self.seed, exec, ..RasterOptions::default() }
    }
}

#[derive(Clone, Debug)]
pub struct RunOutput {
    pub report: Value,
    pub svg: String,
    /// All requested verdicts passed.
    pub passed: bool,
}

impl RunOutput {
    /// Pretty JSON with a trailing newline.
    pub fn report_text(&self) -> String {
        let mut s = serde_json::to_string_pretty(&self.report).expect("report serializes");
        s.push('\n');
        s
    }
}

fn requested_pass(verdicts: &[Verdict]) -> bool {
    verdicts.iter().all(|v| v.status != Status::Fail)
}

fn envelope(mode: Mode, scenario: &Scenario, window: Option<&Window>, verdicts: &[Verdict]) -> serde_json::Map<String, Value> {
    let mut resolved = scenario.clone();
    resolved.mode = Some(mode);
    let mut m = serde_json::Map::new();
    m.insert("schema_version".into(), json!(SCHEMA_VERSION));
    m.insert("mode".into(), json!(mode.name()));
    m.insert("scenario".into(), json!(resolved));
    if let Some(w) = window {
        m.insert("window".into(), json!(w));
    }
    m.insert("verdicts".into(), json!(verdicts));
    m
}

/// Runs one mode on a validated scenario.
pub fn run(scenario: &Scenario, mode: Mode, exec: Exec) -> std::result::Result<RunOutput, ScenarioError> {
    scenario.validate(mode)?;
    let out = match mode {
        Mode::Newton => run_newton(scenario),
        Mode::Amoeba => run_amoeba(scenario, exec),
        Mode::Spine => run_spine(scenario, exec),
        Mode::Tropical => run_tropical(scenario),
        Mode::Intersect | Mode::Verify => run_pair(scenario, mode, exec),
    };
    out.map_err(|e| ScenarioError::Invalid(e.to_string()))
}

fn run_newton(s: &Scenario) -> Result<RunOutput> {
    let mut verdicts = Vec::new();
    let mut polys = Vec::new();
    let mut hulls = Vec::new();
    for (k, f) in s.polynomials.iter().enumerate() {
        let p = convex_hull(&f.support())?;
        let fan = normal_fan(&p).ok();
        if let Some(fan) = &fan {
            let total: f64 = fan.cones.iter().map(|c| c.cone.width_degrees()).sum();
            verdicts.push(Verdict::new(
                &format!("normal_fan_complete_{}", k + 1),
                "Normal cones of the vertices cover the plane",
                (total - 360.0).abs() < 1e-6 && fan.len() == p.vertices().len(),
                format!("{} cones, total angle {total:.6} degrees", fan.len()),
            ));
        }
        polys.push(json!({
            "vertices": p.vertices(),
            "dimension": p.dimension(),
            "normalized_volume": normalized_volume(&p).to_integer(),
            "lattice_points": p.lattice_points().len(),
            "total_degree": f.total_degree(),
            "normal_fan": fan,
        }));
        hulls.push(p);
    }
    let mut report = envelope(Mode::Newton, s, None, &verdicts);
    report.insert("polytopes".into(), json!(polys));
    if hulls.len() == 2 {
        let sum = minkowski_sum(&hulls[0], &hulls[1]);
        report.insert("mixed_volume".into(), json!(mixed_volume(&hulls[0], &hulls[1]).to_integer()));
        report.insert("bezout_product".into(), json!(s.polynomials[0].total_degree() * s.polynomials[1].total_degree()));
        report.insert("minkowski_sum".into(), json!(sum.vertices()));
        if let (Ok(a), Ok(b)) = (normal_fan(&hulls[0]), normal_fan(&hulls[1])) {
            let refinement = common_refinement(&a, &b);
            let mixed = mixed_cones(&refinement)?;
            report.insert("common_refinement_cones".into(), json!(refinement.len()));
            report.insert("mixed_cones".into(), json!(mixed));
        }
    }

    let mut pts: Vec<[i64; 2]> = hulls.iter().flat_map(|h| h.lattice_points()).collect();
    pts.sort();
    let lo = [pts.iter().map(|p| p[0]).min().unwrap_or(0), pts.iter().map(|p| p[1]).min().unwrap_or(0)];
    let hi = [pts.iter().map(|p| p[0]).max().unwrap_or(0), pts.iter().map(|p| p[1]).max().unwrap_or(0)];
    let mut fig = Figure::new([lo[0] as f64 - 1.0, hi[0] as f64 + 1.0, lo[1] as f64 - 1.0, hi[1] as f64 + 1.0], 400.0);
    for (k, h) in hulls.iter().enumerate() {
        let vs: Vec<[f64; 2]> = h.vertices().iter().map(|v| [v[0] as f64, v[1] as f64]).collect();
        fig.polygon(&format!("newton newton{}", k + 1), AMOEBA_COLORS[k], "none", &vs);
        for p in h.lattice_points() {
            fig.dot("lattice-point", [p[0] as f64, p[1] as f64], 3.0, AMOEBA_COLORS[k], Some(&format!("({}, {})", p[0], p[1])));
        }
    }
    let passed = requested_pass(&verdicts);
    Ok(RunOutput { report: Value::Object(report), svg: fig.finish(), passed })
}

fn labelled_raster(f: &LaurentPolynomial, w: &Window, s: &Scenario, exec: Exec) -> Result<AmoebaRaster> {
    Ok(label_components(raster_amoeba_with(f, w, &s.raster_options(exec))?, f, exec))
}

fn amoeba_verdicts(f: &LaurentPolynomial, r: &AmoebaRaster, seed: u64, exec: Exec) -> Result<(Vec<Verdict>, Value)> {
    let newton = convex_hull(&f.support())?;
    let mut v = Vec::new();
    let unresolved: Vec<u32> = r.components.iter().filter(|c| c.order.is_none()).map(|c| c.id).collect();
    v.push(Verdict::new(
        "orders_resolved",
        "Order map is defined on every complement component",
        unresolved.is_empty(),
        format!("{} components, unresolved {unresolved:?}", r.components.len()),
    ));
    let mut orders: Vec<[i64; 2]> = r.components.iter().filter_map(|c| c.order).collect();
    orders.sort();
    let total = orders.len();
    orders.dedup();
    v.push(Verdict::new(
        "orders_distinct",
        "Distinct complement components have distinct orders",
        orders.len() == total,
        format!("{total} resolved components, {} distinct orders", orders.len()),
    ));
    let outside: Vec<[i64; 2]> = orders.iter().copied().filter(|o| !newton.contains(*o)).collect();
    v.push(Verdict::new(
        "orders_in_newton_polytope",
        "Orders are lattice points of the Newton polytope",
        outside.is_empty(),
        format!("orders outside the Newton polytope: {outside:?}"),
    ));
    let missing: Vec<[i64; 2]> = newton.vertices().iter().copied().filter(|a| !orders.contains(a)).collect();
    v.push(Verdict::new(
        "newton_vertices_present",
        "Every Newton polytope vertex is the order of a complement component",
        missing.is_empty(),
        format!("vertices without a component in the window: {missing:?}"),
    ));
    let constancy = order_constancy(f, r, CONSTANCY_SAMPLES, 2, seed, exec);
    v.push(Verdict::new(
        "order_constancy",
        "Order map is constant on complement components",
        constancy.violations.is_empty() && constancy.checked > 0,
        format!(
            "{} random points, {} violations, {} unresolved",
            constancy.checked,
            constancy.violations.len(),
            constancy.unresolved
        ),
    ));
    Ok((v, json!(constancy)))
}

fn run_amoeba(s: &Scenario, exec: Exec) -> Result<RunOutput> {
    let f = &s.polynomials[0];
    let w = s.resolve_window()?;
    let r = labelled_raster(f, &w, s, exec)?;
    let curve = tropical_curve(&TropicalPoly::from_coefficient_logs(f))?;
    let (verdicts, constancy) = amoeba_verdicts(f, &r, s.seed, exec)?;
    let mut report = envelope(Mode::Amoeba, s, Some(&w), &verdicts);
    report.insert("raster".into(), r.to_json());
    report.insert("order_constancy".into(), constancy);
    report.insert("coefficient_curve".into(), json!(curve));
    report.insert("limit_directions".into(), json!(limit_directions(&curve)));

    let mut fig = Figure::for_window(&w, FIGURE_SIZE);
    fig.cells("amoeba amoeba1", AMOEBA_COLORS[0], 0.6, &w, &r.membership);
    fig.curve("coefficient-curve", "#444444", Some("2 3"), &curve);
    label_orders(&mut fig, &r);
    let passed = requested_pass(&verdicts);
    Ok(RunOutput { report: Value::Object(report), svg: fig.finish(), passed })
}

fn label_orders(fig: &mut Figure, r: &AmoebaRaster) {
    for c in &r.components {
        if let (Some(o), Some(p)) = (c.order, c.sample) {
            fig.label(p, &format!("({}, {})", o[0], o[1]));
        }
    }
}

fn spine_verdicts(r: &AmoebaRaster, sp: &SpineData) -> Vec<Verdict> {
    let w = r.window;
    let mut v = Vec::new();
    v.push(Verdict::new(
        "spine_balanced",
        "Spine is a balanced tropical curve",
        sp.curve.is_balanced(),
        format!("{} vertices, {} edges, {} rays", sp.curve.vertices.len(), sp.curve.edges.len(), sp.curve.rays.len()),
    ));
    let on_curve = curve_neighborhood(&sp.curve, &w, 0);
    let near_amoeba = dilate(&w, &r.membership);
    let stray = on_curve.iter().zip(&near_amoeba).filter(|(c, m)| **c && !**m).count();
    let total = on_curve.iter().filter(|c| **c).count();
    v.push(Verdict::new(
        "spine_in_amoeba",
        "Spine lies in the amoeba",
        stray == 0,
        format!("{stray} of {total} spine cells farther than one cell from the amoeba"),
    ));
    v.push(Verdict::new(
        "spine_complete",
        "Every complement component contributes a Ronkin coefficient",
        sp.complete,
        format!("{} coefficients, largest spread {:.3e}", sp.coefficients.len(), sp.coefficient_spread.iter().cloned().fold(0.0, f64::max)),
    ));
    v
}

fn run_spine(s: &Scenario, exec: Exec) -> Result<RunOutput> {
    let f = &s.polynomials[0];
    let w = s.resolve_window()?;
    let r = labelled_raster(f, &w, s, exec)?;
    let sp = build_spine(f, &r, s.quad_n, exec)?;
    let verdicts = spine_verdicts(&r, &sp);
    let mut report = envelope(Mode::Spine, s, Some(&w), &verdicts);
    report.insert("raster".into(), r.to_json());
    report.insert("spine".into(), json!(sp));

    let mut fig = Figure::for_window(&w, FIGURE_SIZE);
    fig.cells("amoeba amoeba1", AMOEBA_COLORS[0], 0.5, &w, &r.membership);
    fig.curve("spine", "#111111", Some("6 4"), &sp.curve);
    label_orders(&mut fig, &r);
    let passed = requested_pass(&verdicts);
    Ok(RunOutput { report: Value::Object(report), svg: fig.finish(), passed })
}

fn run_tropical(s: &Scenario) -> Result<RunOutput> {
    let curves = s.coefficient_curves()?;
    let mut verdicts = Vec::new();
    for (k, c) in curves.iter().enumerate() {
        verdicts.push(Verdict::new(
            &format!("balanced_{}", k + 1),
            "Tropical curves are balanced",
            c.is_balanced(),
            format!("defects {:?}", c.balancing_defects().iter().filter(|d| **d != [0, 0]).collect::<Vec<_>>()),
        ));
    }
    let w = s.resolve_window()?;
    let mut stable = None;
    let mut mv = None;
    if curves.len() == 2 {
        let p = convex_hull(&s.polynomials[0].support())?;
        let q = convex_hull(&s.polynomials[1].support())?;
        let m = mixed_volume(&p, &q).to_integer();
        match stable_intersection(&curves[0], &curves[1], s.seed) {
            Ok(st) => {
                verdicts.push(Verdict::new(
                    "tropical_bernstein",
                    "Stable intersection multiplicities sum to the mixed volume",
                    st.total_multiplicity() as i64 == m,
                    format!("total multiplicity {} against mixed volume {m}", st.total_multiplicity()),
                ));
                stable = Some(st);
            }
            Err(e) => verdicts.push(Verdict::new(
                "tropical_bernstein",
                "Stable intersection multiplicities sum to the mixed volume",
                false,
                e.to_string(),
            )),
        }
        mv = Some(m);
    }
    let mut report = envelope(Mode::Tropical, s, Some(&w), &verdicts);
    report.insert("curves".into(), json!(curves));
    report.insert("limit_directions".into(), json!(curves.iter().map(limit_directions).collect::<Vec<_>>()));
    if let Some(m) = mv {
        report.insert("mixed_volume".into(), json!(m));
        report.insert("stable_intersection".into(), json!(stable));
    }

    let mut fig = Figure::for_window(&w, FIGURE_SIZE);
    for (k, c) in curves.iter().enumerate() {
        fig.curve(&format!("tropical tropical{}", k + 1), AMOEBA_COLORS[k], None, c);
    }
    if let Some(st) = &stable {
        for p in &st.points {
            fig.dot("stable-point", p.location, 4.0, "#000000", Some(&format!("multiplicity {}", p.multiplicity)));
        }
    }
    let passed = requested_pass(&verdicts);
    Ok(RunOutput { report: Value::Object(report), svg: fig.finish(), passed })
}

/// Pair configuration from scenario fields.
pub fn pair_config(s: &Scenario, w: Window, exec: Exec) -> PairConfig {
    let mut cfg = PairConfig::new(w);
    cfg.angle_samples = s.angle_samples;
    cfg.quad_n = s.quad_n;
    cfg.seed = s.seed;
    cfg.exec = exec;
    cfg.degenerate = s.degenerate;
    if let Some(r) = s.merge_radius {
        cfg.merge_radius = r;
    }
    if let Some(k) = s.refine_factor {
        cfg.refine_factor = k;
    }
    cfg
}

fn run_pair(s: &Scenario, mode: Mode, exec: Exec) -> Result<RunOutput> {
    let w = s.resolve_window()?;
    let a = analyze_pair(&s.polynomials[0], &s.polynomials[1], &pair_config(s, w, exec))?;
    let rep = &a.report;
    let mut report = envelope(mode, s, Some(&w), &rep.verdicts);
    report.insert("components".into(), json!(rep.components.len()));
    report.insert("bounded_components".into(), json!(rep.bounded_components()));
    report.insert("mixed_volume".into(), json!(rep.mixed_volume));
    report.insert("bezout_product".into(), json!(rep.bezout_product));
    report.insert("intersection".into(), json!(rep));
    let spines: Vec<Value> = a
        .spines
        .iter()
        .map(|sp| match sp {
            Ok(sp) => json!(sp),
            Err(e) => json!({ "error": e }),
        })
        .collect();
    report.insert("spines".into(), json!(spines));
    if let Some(eps) = &s.epsilons {
        let value = match (&a.spines[0], &a.spines[1]) {
            (Ok(p), Ok(q)) => match retract_experiment([p, q], &w, eps, s.seed) {
                Ok(r) => json!(r),
                Err(Error::EpsilonBelowResolution(e)) => {
                    return Err(Error::InvalidInput(format!("epsilon {e} is below the raster resolution")))
                }
                Err(e) => json!({ "error": e.to_string() }),
            },
            _ => json!({ "error": "spines unavailable" }),
        };
        report.insert("retraction".into(), value);
    }
    // intersect only reports; verify requests every verdict
    let passed = mode == Mode::Intersect || requested_pass(&rep.verdicts);
    Ok(RunOutput { report: Value::Object(report), svg: pair_figure(&a), passed })
}

/// Two amoebas, their intersection, vertices, intersection polytopes and spines.
pub fn pair_figure(a: &PairAnalysis) -> String {
    let w = a.rasters[0].window;
    let mut fig = Figure::for_window(&w, FIGURE_SIZE);
    for (k, r) in a.rasters.iter().enumerate() {
        fig.cells(&format!("amoeba amoeba{}", k + 1), AMOEBA_COLORS[k], 0.35, &w, &r.membership);
    }
    let inter: Vec<bool> = a.grid.component_id.iter().map(|c| c.is_some()).collect();
    fig.cells("intersection", INTERSECTION_COLOR, 0.6, &w, &inter);
    for c in &a.report.components {
        let outline: Vec<[f64; 2]> = c.polytope_vertices.iter().map(|&k| c.vertices[k].location).collect();
        fig.polygon("polytope", "#000000", "none", &outline);
    }
    for (k, sp) in a.spines.iter().enumerate() {
        if let Ok(sp) = sp {
            fig.curve(&format!("spine spine{}", k + 1), AMOEBA_COLORS[k], Some("6 4"), &sp.curve);
        }
    }
    for p in &a.report.stable_points {
        fig.dot("stable-point", *p, 3.0, "#000000", None);
    }
    for v in &a.report.vertices {
        let m = v.order_matrix.rows;
        let title = format!("(({}, {}), ({}, {}))", m[0][0], m[0][1], m[1][0], m[1][1]);
        fig.dot("vertex", v.location, 3.5, "#c62828", Some(&title));
    }
    fig.finish()
}
