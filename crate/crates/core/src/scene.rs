//! Scene files (`capra-scene/1`) and the per-set reports (`capra-report/1`) they produce.

use std::io;

use serde::Deserialize;
use serde_json::{json, Value};

use crate::cone::{AffineSlice, Bound, ConeSpec};
use crate::conjugacy::{
    box_grid, capra_biconjugate, cone_indicator, l0_function, minimize_over_cone, sublevel_cone, SampledFunction,
    SphereGrid, DEFAULT_DUAL_RADIUS, DEFAULT_DUAL_RESOLUTION,
};
use crate::decision::{decide_capra_convex_with, decide_conical_hull, sampling_oracle, HullInput, OracleConfig};
use crate::error::{Error, Result};
use crate::figure::render_svg;
use crate::hulls::PointSet;
use crate::norm::SourceNorm;
use crate::par::map_indices;
use crate::scalar::{format_float, parse_rational, Field, Mode, Rational, Scalar};

pub const SCENE_SCHEMA: &str = "capra-scene/1";
pub const REPORT_SCHEMA: &str = "capra-report/1";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Analysis {
    Decide,
    ConicalHull,
    Oracle,
    Conjugacy,
    Minimize,
}

impl Analysis {
    fn needs_seed(self) -> bool {
        matches!(self, Analysis::Oracle | Analysis::Conjugacy | Analysis::Minimize)
    }
}

#[derive(Debug, Clone, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum SetSpec {
    RayFan {
        label: Option<String>,
        generators: Vec<Vec<Value>>,
        #[serde(default)]
        include_origin: bool,
    },
    ConvexCone {
        label: Option<String>,
        generators: Vec<Vec<Value>>,
        #[serde(default)]
        include_origin: bool,
    },
    PolytopeCone {
        label: Option<String>,
        vertices: Vec<Vec<Value>>,
        #[serde(default)]
        include_origin: bool,
    },
    AffineSlice {
        label: Option<String>,
        a: Vec<Vec<Value>>,
        b: Vec<Value>,
        /// `[lo, hi]` per coordinate, `null` for a missing side.
        bounds: Option<Vec<[Option<Value>; 2]>>,
    },
    Union {
        label: Option<String>,
        members: Vec<SetSpec>,
    },
    /// `ℓ0^{≤t}`.
    L0Sublevel {
        label: Option<String>,
        t: i64,
    },
    /// A finite set `X`, examined through `cone(X)`.
    Points {
        label: Option<String>,
        points: Vec<Vec<Value>>,
    },
    /// A polytope `X = conv(V)`, examined through `cone(X)`.
    Polytope {
        label: Option<String>,
        vertices: Vec<Vec<Value>>,
    },
}

impl SetSpec {
    pub fn label(&self) -> Option<&str> {
        match self {
            SetSpec::RayFan { label, .. }
            | SetSpec::ConvexCone { label, .. }
            | SetSpec::PolytopeCone { label, .. }
            | SetSpec::AffineSlice { label, .. }
            | SetSpec::Union { label, .. }
            | SetSpec::L0Sublevel { label, .. }
            | SetSpec::Points { label, .. }
            | SetSpec::Polytope { label, .. } => label.as_deref(),
        }
    }

    pub fn kind(&self) -> &'static str {
        match self {
            SetSpec::RayFan { .. } => "ray_fan",
            SetSpec::ConvexCone { .. } => "convex_cone",
            SetSpec::PolytopeCone { .. } => "polytope_cone",
            SetSpec::AffineSlice { .. } => "affine_slice",
            SetSpec::Union { .. } => "union",
            SetSpec::L0Sublevel { .. } => "l0_sublevel",
            SetSpec::Points { .. } => "points",
            SetSpec::Polytope { .. } => "polytope",
        }
    }
}

#[derive(Debug, Clone, Copy, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Tolerances {
    pub tol: Option<f64>,
    pub samples: Option<usize>,
}

#[derive(Debug, Clone, Copy, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BoxGridSpec {
    pub radius: f64,
    pub resolution: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ConjugacyFunction {
    /// Indicator of the set.
    Indicator,
    L0,
}

#[derive(Debug, Clone, Copy, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConjugacySpec {
    pub function: ConjugacyFunction,
    pub primal: Option<BoxGridSpec>,
    pub dual: Option<BoxGridSpec>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum MinimizeFunction {
    L0,
    Constant,
}

#[derive(Debug, Clone, Copy, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MinimizeSpec {
    pub function: MinimizeFunction,
    /// The constant for `function = "constant"`.
    pub value: Option<f64>,
    pub resolution: Option<usize>,
}

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Outputs {
    pub report: Option<String>,
    pub svg: Option<String>,
    pub csv: Option<String>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Scene {
    pub schema: String,
    pub dimension: usize,
    #[serde(default = "default_norm", deserialize_with = "norm_from_text")]
    pub norm: SourceNorm,
    pub exact: Option<bool>,
    pub seed: Option<u64>,
    #[serde(default)]
    pub tolerances: Tolerances,
    set: Option<SetSpec>,
    sets: Option<Vec<SetSpec>>,
    #[serde(default = "default_analyses")]
    pub analyses: Vec<Analysis>,
    pub conjugacy: Option<ConjugacySpec>,
    pub minimize: Option<MinimizeSpec>,
    #[serde(default)]
    pub outputs: Outputs,
}

fn default_norm() -> SourceNorm {
    SourceNorm::l2()
}

fn default_analyses() -> Vec<Analysis> {
    vec![Analysis::Decide]
}

fn norm_from_text<'de, D: serde::Deserializer<'de>>(d: D) -> std::result::Result<SourceNorm, D::Error> {
    let v = Value::deserialize(d)?;
    match &v {
        Value::String(s) => s.parse().map_err(serde::de::Error::custom),
        Value::Object(_) => serde_json::from_value(v).map_err(serde::de::Error::custom),
        other => Err(serde::de::Error::custom(format!("bad norm {other}"))),
    }
}

impl Scene {
    pub fn from_json(text: &str) -> Result<Self> {
        let scene: Scene = serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
        scene.validate()?;
        Ok(scene)
    }

    fn validate(&self) -> Result<()> {
        if self.schema != SCENE_SCHEMA {
            return Err(Error::Parse(format!("unsupported schema {:?}; expected {SCENE_SCHEMA:?}", self.schema)));
        }
        if self.dimension == 0 {
            return Err(Error::Parse("dimension must be at least 1".into()));
        }
        match (&self.set, &self.sets) {
            (Some(_), None) => {}
            (None, Some(s)) if !s.is_empty() => {}
            (None, Some(_)) => return Err(Error::Parse("\"sets\" is empty".into())),
            _ => return Err(Error::Parse("give exactly one of \"set\" or \"sets\"".into())),
        }
        Ok(())
    }

    pub fn sets(&self) -> &[SetSpec] {
        match (&self.set, &self.sets) {
            (Some(s), _) => std::slice::from_ref(s),
            (None, Some(s)) => s,
            (None, None) => &[],
        }
    }

    /// The label of set `i`, defaulting to its index.
    pub fn label(&self, i: usize) -> String {
        self.sets()[i].label().map_or_else(|| format!("set{i}"), str::to_string)
    }
}

/// `CAPRA_EXACT`: `1` forces exact arithmetic, `0` forbids it.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum ExactOverride {
    #[default]
    Scene,
    Force,
    Forbid,
}

impl ExactOverride {
    pub fn from_env_value(v: Option<&str>) -> Result<Self> {
        match v.map(str::trim) {
            None | Some("") => Ok(ExactOverride::Scene),
            Some("1") => Ok(ExactOverride::Force),
            Some("0") => Ok(ExactOverride::Forbid),
            Some(other) => Err(Error::Parse(format!("CAPRA_EXACT must be 0 or 1, got {other:?}"))),
        }
    }
}

/// Command-line adjustments applied on top of a scene.
#[derive(Debug, Clone, Default)]
pub struct RunOptions {
    pub norm: Option<SourceNorm>,
    pub tol: Option<f64>,
    pub samples: Option<usize>,
    pub seed: Option<u64>,
    pub exact: ExactOverride,
    /// Replaces the scene's analyses.
    pub analyses: Option<Vec<Analysis>>,
    /// Render figures for 2D sets.
    pub figures: bool,
}

/// What one set produced.
#[derive(Debug, Clone, PartialEq)]
pub struct SetOutcome {
    pub label: String,
    pub report: Value,
    pub svg: Option<String>,
    pub csv: Option<String>,
}

struct Context<'a> {
    scene: &'a Scene,
    norm: SourceNorm,
    analyses: Vec<Analysis>,
    oracle: OracleConfig,
    seed: Option<u64>,
    mode: Mode,
    figures: bool,
}

/// Runs every set of the scene; sets are independent and run in parallel.
pub fn run_scene(scene: &Scene, opts: &RunOptions) -> Result<Vec<SetOutcome>> {
    let analyses = opts.analyses.clone().unwrap_or_else(|| scene.analyses.clone());
    let seed = opts.seed.or(scene.seed);
    if seed.is_none() {
        if let Some(a) = analyses.iter().find(|a| a.needs_seed()) {
            return Err(Error::Parse(format!("a seed is required for the {a:?} analysis")));
        }
    }
    let defaults = OracleConfig::default();
    let oracle = OracleConfig {
        samples: opts.samples.or(scene.tolerances.samples).unwrap_or(defaults.samples),
        tol: opts.tol.or(scene.tolerances.tol).unwrap_or(defaults.tol),
        seed: seed.unwrap_or(defaults.seed),
    };
    let mode = match opts.exact {
        ExactOverride::Force => Mode::Exact,
        ExactOverride::Forbid => Mode::Float,
        ExactOverride::Scene if scene.exact == Some(false) => Mode::Float,
        ExactOverride::Scene => Mode::Exact,
    };
    let ctx = Context { scene, norm: opts.norm.unwrap_or(scene.norm), analyses, oracle, seed, mode, figures: opts.figures };
    map_indices(scene.sets().len(), |i| ctx.run_set(i)).into_iter().collect()
}

fn number_exact(v: &Value) -> Result<Rational> {
    match v {
        Value::String(s) => parse_rational(s),
        Value::Number(n) => {
            let text = n.to_string();
            if text.contains(['e', 'E']) {
                let f = n.as_f64().ok_or_else(|| Error::Parse(format!("bad number {text}")))?;
                Scalar::Float(f).to_exact().and_then(|s| Rational::from_scalar(&s))
            } else {
                parse_rational(&text)
            }
        }
        other => Err(Error::Parse(format!("expected a number or \"p/q\" string, got {other}"))),
    }
}

/// Scene numbers in the working field: never lossy on the exact path.
fn number<F: Field>(v: &Value) -> Result<F> {
    let scalar = match (F::MODE, v) {
        (Mode::Exact, _) => Scalar::Exact(number_exact(v)?),
        (Mode::Float, Value::Number(n)) => Scalar::Float(n.as_f64().ok_or_else(|| Error::Parse(format!("bad number {n}")))?),
        (Mode::Float, _) => Scalar::Float(number_exact(v)?.to_f64()),
    };
    F::from_scalar(&scalar)
}

fn points<F: Field>(dim: usize, raw: &[Vec<Value>]) -> Result<PointSet<F>> {
    let pts = raw
        .iter()
        .map(|p| {
            if p.len() != dim {
                return Err(Error::DimensionMismatch { expected: dim, found: p.len() });
            }
            p.iter().map(number::<F>).collect::<Result<Vec<F>>>()
        })
        .collect::<Result<Vec<_>>>()?;
    PointSet::with_dim(dim, pts)
}

fn build_cone<F: Field>(spec: &SetSpec, dim: usize) -> Result<ConeSpec<F>> {
    match spec {
        SetSpec::RayFan { generators, include_origin, .. } => ConeSpec::ray_fan(points(dim, generators)?, *include_origin),
        SetSpec::ConvexCone { generators, include_origin, .. } => {
            ConeSpec::convex_cone(points(dim, generators)?, *include_origin)
        }
        SetSpec::PolytopeCone { vertices, include_origin, .. } => {
            ConeSpec::polytope_cone(points(dim, vertices)?, *include_origin)
        }
        SetSpec::AffineSlice { a, b, bounds, .. } => {
            let rows = a.iter().map(|r| r.iter().map(number::<F>).collect()).collect::<Result<Vec<Vec<F>>>>()?;
            if rows.iter().any(|r| r.len() != dim) {
                return Err(Error::DimensionMismatch { expected: dim, found: rows.iter().map(Vec::len).find(|&l| l != dim).unwrap_or(0) });
            }
            let rhs = b.iter().map(number::<F>).collect::<Result<Vec<F>>>()?;
            let bounds = match bounds {
                None => None,
                Some(bs) => Some(
                    bs.iter()
                        .map(|[lo, hi]| {
                            Ok(Bound { lo: lo.as_ref().map(number::<F>).transpose()?, hi: hi.as_ref().map(number::<F>).transpose()? })
                        })
                        .collect::<Result<Vec<_>>>()?,
                ),
            };
            Ok(ConeSpec::affine_slice(AffineSlice::new(rows, rhs, bounds)?))
        }
        SetSpec::Union { members, .. } => ConeSpec::union(members.iter().map(|m| build_cone(m, dim)).collect::<Result<_>>()?),
        SetSpec::L0Sublevel { t, .. } => {
            let k = sublevel_cone(*t, dim)?;
            Ok(k.map(&|q: &Rational| F::from_scalar(&Scalar::Exact(q.clone())).unwrap_or_else(|_| F::zero())))
        }
        SetSpec::Points { .. } | SetSpec::Polytope { .. } => hull_input::<F>(spec, dim)?.cone(),
    }
}

/// The compact set behind a conical-hull analysis.
fn hull_input<F: Field>(spec: &SetSpec, dim: usize) -> Result<HullInput<F>> {
    match spec {
        SetSpec::Points { points: p, .. } => Ok(HullInput::Points(points(dim, p)?)),
        SetSpec::Polytope { vertices, .. } | SetSpec::PolytopeCone { vertices, .. } => {
            Ok(HullInput::Polytope(points(dim, vertices)?))
        }
        SetSpec::RayFan { generators, include_origin, .. } => {
            let mut set = points::<F>(dim, generators)?.points().to_vec();
            if *include_origin {
                set.push(vec![F::zero(); dim]);
            }
            Ok(HullInput::Points(PointSet::with_dim(dim, set)?))
        }
        SetSpec::AffineSlice { .. } => match build_cone::<F>(spec, dim)? {
            ConeSpec::AffineSlice(s) => Ok(HullInput::Polytope(PointSet::with_dim(dim, s.vertices()?)?)),
            _ => unreachable!("an affine spec builds an affine cone"),
        },
        other => Err(Error::Unsupported(format!("no compact set is attached to a {} set", other.kind()))),
    }
}

fn to_value<T: serde::Serialize>(v: &T) -> Result<Value> {
    serde_json::to_value(v).map_err(|e| Error::Inconsistent(format!("serialization failed: {e}")))
}

impl Context<'_> {
    fn run_set(&self, i: usize) -> Result<SetOutcome> {
        match self.mode {
            Mode::Exact => self.run_typed::<Rational>(i),
            Mode::Float => self.run_typed::<f64>(i),
        }
    }

    fn run_typed<F: Field>(&self, i: usize) -> Result<SetOutcome> {
        let spec = &self.scene.sets()[i];
        let label = self.scene.label(i);
        let dim = self.scene.dimension;
        let k: ConeSpec<F> = build_cone(spec, dim)?;
        let n = self.norm;
        let mut report = json!({
            "schema": REPORT_SCHEMA,
            "label": label,
            "kind": spec.kind(),
            "dimension": dim,
            "mode": self.mode,
            "norm": to_value(&n)?,
            "origin_in_set": k.origin_status(),
        });
        if let Some(seed) = self.seed {
            report["seed"] = json!(seed);
        }

        let oracle = if self.analyses.contains(&Analysis::Oracle) { Some(sampling_oracle(&k, &n, &self.oracle)?) } else { None };

        if self.analyses.contains(&Analysis::Decide) {
            let mut decision = decide_capra_convex_with(&k, &n, &self.oracle)?;
            if let Some(evidence) = &oracle {
                if decision.oracle.is_none() {
                    decision = decision.with_oracle(evidence.clone());
                }
            }
            if !decision.verify(&k)? {
                return Err(Error::Inconsistent(format!("{label}: the decision certificate failed re-verification")));
            }
            report["decision"] = to_value(&decision)?;
            report["verified"] = json!(true);
        } else if let Some(evidence) = &oracle {
            report["oracle"] = to_value(evidence)?;
        }

        if self.analyses.contains(&Analysis::ConicalHull) {
            let x = hull_input::<F>(spec, dim)?;
            let decision = decide_conical_hull(&x, &n)?;
            if !decision.verify(&x.cone()?)? {
                return Err(Error::Inconsistent(format!("{label}: the conical-hull certificate failed re-verification")));
            }
            let mut v = to_value(&decision)?;
            v["verified"] = json!(true);
            report["conical_hull"] = v;
        }

        let mut csv = None;
        if self.analyses.contains(&Analysis::Conjugacy) {
            let (summary, table) = self.conjugacy(&k)?;
            report["conjugacy"] = summary;
            csv = Some(table);
        }

        if self.analyses.contains(&Analysis::Minimize) {
            report["minimize"] = self.minimize(&k)?;
        }

        let svg = if self.figures { Some(render_svg(&k, &n, Some(&label))?) } else { None };
        Ok(SetOutcome { label, report, svg, csv })
    }

    fn conjugacy<F: Field>(&self, k: &ConeSpec<F>) -> Result<(Value, String)> {
        let spec = self.scene.conjugacy.ok_or_else(|| Error::Parse("the conjugacy analysis needs a \"conjugacy\" block".into()))?;
        let d = k.dim();
        let primal = spec.primal.unwrap_or(BoxGridSpec { radius: 2.0, resolution: 41 });
        let dual = spec.dual.unwrap_or(BoxGridSpec { radius: DEFAULT_DUAL_RADIUS, resolution: DEFAULT_DUAL_RESOLUTION });
        for g in [primal, dual] {
            if g.resolution < 2 || g.radius.is_nan() || g.radius <= 0.0 {
                return Err(Error::Parse("grids need a positive radius and at least 2 points per axis".into()));
            }
        }
        let pgrid = box_grid(d, primal.radius, primal.resolution);
        let dgrid = box_grid(d, dual.radius, dual.resolution);
        let f: SampledFunction = match spec.function {
            ConjugacyFunction::Indicator => cone_indicator("indicator", k, pgrid.clone()),
            ConjugacyFunction::L0 => l0_function(pgrid.clone()),
        };
        let bi = capra_biconjugate(&f, &pgrid, &dgrid, &self.norm);
        let summary = json!({
            "function": f.name(),
            "max_gap": bi.max_gap(),
            "max_violation": bi.max_violation(),
            "slack": bi.slack,
            "inequality_holds": bi.max_violation() <= bi.slack,
            "resolution": {"primal": primal.resolution, "dual": dual.resolution},
            "radius": {"primal": primal.radius, "dual": dual.radius},
            "norm": to_value(&self.norm)?,
        });
        let mut table = String::new();
        for j in 0..d {
            table.push_str(&format!("x{},", j + 1));
        }
        table.push_str("f,value\n");
        for ((x, fx), b) in pgrid.iter().zip(&bi.original).zip(&bi.values.values) {
            for c in x {
                table.push_str(&format_float(*c));
                table.push(',');
            }
            table.push_str(&format!("{},{}\n", format_float(*fx), format_float(*b)));
        }
        Ok((summary, table))
    }

    fn minimize<F: Field>(&self, k: &ConeSpec<F>) -> Result<Value> {
        let spec = self.scene.minimize.ok_or_else(|| Error::Parse("the minimize analysis needs a \"minimize\" block".into()))?;
        let resolution = spec.resolution.unwrap_or(3600);
        let grid = SphereGrid::new(&self.norm, k.dim(), resolution, self.oracle.seed)?;
        let f = match spec.function {
            MinimizeFunction::L0 => l0_function(Vec::new()),
            MinimizeFunction::Constant => {
                let c = spec.value.ok_or_else(|| Error::Parse("a constant function needs \"value\"".into()))?;
                SampledFunction::new("constant", Vec::new(), move |_| c)
            }
        };
        let m = minimize_over_cone(&f, k, &self.norm, &grid)?;
        Ok(json!({
            "function": f.name(),
            "value": m.value,
            "direction": m.direction,
            "candidates": m.candidates,
            "origin_only": m.origin_only,
            "resolution": resolution,
        }))
    }
}

/// Writes floats with seventeen significant digits.
struct FixedDigits;

impl serde_json::ser::Formatter for FixedDigits {
    fn write_f64<W: ?Sized + io::Write>(&mut self, writer: &mut W, value: f64) -> io::Result<()> {
        writer.write_all(format!("{value:.16e}").as_bytes())
    }
}

/// Pretty JSON with floats at seventeen significant digits.
pub fn report_to_string(v: &Value) -> String {
    let mut out = Vec::new();
    let mut ser = serde_json::Serializer::with_formatter(&mut out, PrettyFixed::default());
    serde::Serialize::serialize(v, &mut ser).expect("writing JSON to memory does not fail");
    out.push(b'\n');
    String::from_utf8(out).expect("JSON output is UTF-8")
}

/// Compact JSON with the same float format.
pub fn report_to_compact_string(v: &Value) -> String {
    let mut out = Vec::new();
    let mut ser = serde_json::Serializer::with_formatter(&mut out, FixedDigits);
    serde::Serialize::serialize(v, &mut ser).expect("writing JSON to memory does not fail");
    String::from_utf8(out).expect("JSON output is UTF-8")
}

/// Two-space indentation, like `serde_json`'s pretty printer.
#[derive(Default)]
struct PrettyFixed {
    inner: serde_json::ser::PrettyFormatter<'static>,
}

impl serde_json::ser::Formatter for PrettyFixed {
    fn write_f64<W: ?Sized + io::Write>(&mut self, writer: &mut W, value: f64) -> io::Result<()> {
        FixedDigits.write_f64(writer, value)
    }
    fn begin_array<W: ?Sized + io::Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.inner.begin_array(w)
    }
    fn end_array<W: ?Sized + io::Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.inner.end_array(w)
    }
    fn begin_array_value<W: ?Sized + io::Write>(&mut self, w: &mut W, first: bool) -> io::Result<()> {
        self.inner.begin_array_value(w, first)
    }
    fn end_array_value<W: ?Sized + io::Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.inner.end_array_value(w)
    }
    fn begin_object<W: ?Sized + io::Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.inner.begin_object(w)
    }
    fn end_object<W: ?Sized + io::Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.inner.end_object(w)
    }
    fn begin_object_key<W: ?Sized + io::Write>(&mut self, w: &mut W, first: bool) -> io::Result<()> {
        self.inner.begin_object_key(w, first)
    }
    fn begin_object_value<W: ?Sized + io::Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.inner.begin_object_value(w)
    }
    fn end_object_value<W: ?Sized + io::Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.inner.end_object_value(w)
    }
}
