//! Single-document JSON scenarios and their canonical reports.
//!
//! ```json
//! {
//!   "ring": "Z",
//!   "derivation": {"kind": "inner", "operator": "shift"},
//!   "window": 6
//! }
//! ```

use std::fmt;
use std::path::Path;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use serde_json::Value;
use thiserror::Error;

use crate::derivation::{decompose_with, Ambient, DecomposeConfig, MatrixDerivation, DEFAULT_MAX_SUPPORT};
use crate::lie::{lie_decompose, LieAmbient, LieDecomposeConfig, LieDerivation};
use crate::matrix::{parse_triples, Index, Matrix, MatrixClass, Operator, Window};
use crate::ring::{
    inner_ring_derivation, CoefficientDerivation, Integers, IntegersMod, Mat2, PolyZ, Ring, RingSpec,
};

pub const VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Scenario {
    pub ring: String,
    /// Associative ambient; defaults to the smallest one holding every
    /// inner part.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub ambient: Option<String>,
    pub derivation: Descriptor,
    pub window: Index,
    #[serde(default)]
    pub seed: u64,
    #[serde(default = "default_trials")]
    pub trials: usize,
    #[serde(default)]
    pub i0: Index,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub out: Option<String>,
}

fn default_trials() -> usize {
    8
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum Descriptor {
    Inner {
        operator: OperatorSpec,
    },
    Lift {
        derivation: LiftSpec,
    },
    Sum {
        parts: Vec<Descriptor>,
    },
    Lie {
        ambient: String,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        reservoir: Option<Index>,
        derivation: Box<Descriptor>,
    },
}

/// `"shift"`, `"identity"`, `"ones_row"` or an object form.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum OperatorSpec {
    Named(String),
    Object(OperatorObject),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum OperatorObject {
    /// `diag(i ↦ (a·i + b)·1)` from an affine formula such as `"2*i+1"`.
    Diag { formula: String },
    /// Triples `[i, j, "element"]`.
    Finite { entries: Value },
    OnesRow { row: Index },
    Sum { parts: Vec<OperatorSpec> },
}

/// Parses an affine formula in `i` with integer coefficients into
/// `(a, b)`: `"i"`, `"3"`, `"2*i+1"`, `"-i + 4"`.
pub fn parse_affine(formula: &str) -> Option<(i64, i64)> {
    let compact: String = formula.chars().filter(|c| !c.is_whitespace()).collect();
    if compact.is_empty() {
        return None;
    }
    let mut terms = Vec::new();
    let mut start = 0;
    for (k, ch) in compact.char_indices() {
        if (ch == '+' || ch == '-') && k > 0 {
            terms.push(&compact[start..k]);
            start = k;
        }
    }
    terms.push(&compact[start..]);
    let (mut a, mut b) = (0i64, 0i64);
    for term in terms {
        let (sign, body) = match term.as_bytes().first() {
            Some(b'-') => (-1, &term[1..]),
            Some(b'+') => (1, &term[1..]),
            _ => (1, term),
        };
        if let Some(coeff) = body.strip_suffix('i') {
            let coeff = coeff.strip_suffix('*').unwrap_or(coeff);
            let k = if coeff.is_empty() { 1 } else { coeff.parse::<i64>().ok()? };
            a = a.checked_add(sign * k)?;
        } else {
            b = b.checked_add(sign * body.parse::<i64>().ok()?)?;
        }
    }
    Some((a, b))
}

/// `"zero"`, `"d/dt"` or `{"kind": "inner_ring", "element": ...}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum LiftSpec {
    Named(String),
    Object(LiftObject),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum LiftObject {
    InnerRing { element: String },
}

#[derive(Debug, Error)]
pub enum ScenarioError {
    #[error("{origin}: {source}")]
    Io {
        origin: String,
        #[source]
        source: std::io::Error,
    },
    #[error("{origin}:{}: {message}", location(*.line, *.column))]
    Input {
        origin: String,
        line: usize,
        column: Option<usize>,
        message: String,
    },
}

fn location(line: usize, column: Option<usize>) -> String {
    match column {
        Some(c) => format!("{line}:{c}"),
        None => line.to_string(),
    }
}

/// A parsed scenario together with its source, for error anchoring.
#[derive(Debug, Clone)]
pub struct Loaded {
    pub scenario: Scenario,
    text: String,
    origin: String,
}

/// Outcome of a scenario run: the canonical report and its exit code.
#[derive(Debug, Clone)]
pub struct RunOutput {
    pub status: String,
    pub exit_code: i32,
    pub report: Value,
}

impl RunOutput {
    /// Pretty JSON with sorted keys and a trailing newline.
    pub fn canonical(&self) -> String {
        let mut s = serde_json::to_string_pretty(&self.report).expect("json values serialize");
        s.push('\n');
        s
    }
}

impl fmt::Display for RunOutput {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.canonical())
    }
}

struct Invalid {
    key: &'static str,
    message: String,
}

fn invalid(key: &'static str, message: impl Into<String>) -> Invalid {
    Invalid {
        key,
        message: message.into(),
    }
}

pub fn load(path: &Path) -> Result<Loaded, ScenarioError> {
    let origin = path.display().to_string();
    let text = std::fs::read_to_string(path).map_err(|source| ScenarioError::Io {
        origin: origin.clone(),
        source,
    })?;
    parse(&text, &origin)
}

pub fn parse(text: &str, origin: &str) -> Result<Loaded, ScenarioError> {
    let scenario: Scenario = serde_json::from_str(text).map_err(|e| ScenarioError::Input {
        origin: origin.to_string(),
        line: e.line(),
        column: Some(e.column()),
        message: strip_position(&e.to_string()),
    })?;
    let loaded = Loaded {
        scenario,
        text: text.to_string(),
        origin: origin.to_string(),
    };
    loaded.check().map_err(|e| loaded.anchor(e))?;
    Ok(loaded)
}

fn strip_position(message: &str) -> String {
    match message.rfind(" at line ") {
        Some(at) => message[..at].to_string(),
        None => message.to_string(),
    }
}

impl Loaded {
    fn anchor(&self, e: Invalid) -> ScenarioError {
        let needle = format!("\"{}\"", e.key);
        let line = self
            .text
            .lines()
            .position(|l| l.contains(&needle))
            .map_or(1, |k| k + 1);
        ScenarioError::Input {
            origin: self.origin.clone(),
            line,
            column: None,
            message: e.message,
        }
    }

    /// Ring-independent validation.
    fn check(&self) -> Result<(), Invalid> {
        let s = &self.scenario;
        RingSpec::parse(&s.ring).map_err(|e| invalid("ring", e.to_string()))?;
        if s.window < 1 {
            return Err(invalid("window", "window must be at least 1"));
        }
        if s.trials < 1 {
            return Err(invalid("trials", "trials must be at least 1"));
        }
        if s.i0 >= s.window {
            return Err(invalid("i0", format!("i0 = {} lies outside window {}", s.i0, s.window)));
        }
        if let Some(a) = &s.ambient {
            if Ambient::parse(a).is_none() {
                return Err(invalid(
                    "ambient",
                    format!("unknown ambient {a:?}; expected M_inf, M_rcf or M_full"),
                ));
            }
        }
        match &s.derivation {
            Descriptor::Lie {
                ambient,
                reservoir,
                derivation,
            } => {
                if s.ambient.is_some() {
                    return Err(invalid("ambient", "a lie descriptor carries its own ambient"));
                }
                let amb = LieAmbient::parse(ambient).ok_or_else(|| {
                    invalid(
                        "ambient",
                        format!("unknown Lie ambient {ambient:?}; expected sl_inf, gl or gl_rcf"),
                    )
                })?;
                if let Some(r) = reservoir {
                    if amb == LieAmbient::SlInf && *r < s.window {
                        return Err(invalid(
                            "reservoir",
                            format!("reservoir {r} lies inside window {}", s.window),
                        ));
                    }
                }
                check_descriptor(derivation, false)
            }
            d => check_descriptor(d, false),
        }
    }

    /// The scenario with every default made explicit.
    pub fn resolved(&self) -> Scenario {
        let mut s = self.scenario.clone();
        match &mut s.derivation {
            Descriptor::Lie {
                ambient, reservoir, ..
            } if ambient == "sl_inf" => {
                reservoir.get_or_insert(2 * s.window);
            }
            Descriptor::Lie { .. } => {}
            d => {
                if s.ambient.is_none() {
                    s.ambient = Some(smallest_ambient(d).name().to_string());
                }
            }
        }
        s
    }

    pub fn run(&self) -> Result<RunOutput, ScenarioError> {
        let spec = RingSpec::parse(&self.scenario.ring).expect("checked on load");
        let result = match spec {
            RingSpec::Integers => self.execute(&Integers),
            RingSpec::IntegersMod(n) => self.execute(&IntegersMod::new(n).expect("checked")),
            RingSpec::PolyZ => self.execute(&PolyZ),
            RingSpec::Mat2(p) => self.execute(&Mat2::new(p).expect("checked")),
        };
        result.map_err(|e| self.anchor(e))
    }

    fn execute<R: Ring>(&self, ring: &R) -> Result<RunOutput, Invalid> {
        let s = self.resolved();
        let w = Window::new(s.window).map_err(|e| invalid("window", e.to_string()))?;
        let report = match &s.derivation {
            Descriptor::Lie {
                ambient,
                reservoir,
                derivation,
            } => {
                let amb = LieAmbient::parse(ambient).expect("checked");
                let d = build_lie(ring, amb, derivation)?.with_concurrency(true);
                let config = LieDecomposeConfig {
                    seed: s.seed,
                    trials: s.trials,
                    i0: s.i0,
                    reservoir: *reservoir,
                    probe_budget: None,
                    max_support: DEFAULT_MAX_SUPPORT,
                };
                lie_decompose(&d, w, &config)
            }
            desc => {
                let amb = Ambient::parse(s.ambient.as_deref().expect("resolved")).expect("checked");
                let d = build(ring, amb, desc)?.with_concurrency(true);
                let config = DecomposeConfig {
                    seed: s.seed,
                    trials: s.trials,
                    i0: s.i0,
                    probe_budget: None,
                    max_support: DEFAULT_MAX_SUPPORT,
                };
                decompose_with(&d, w, &config)
            }
        };
        let mut json = report.to_json();
        let obj = json.as_object_mut().expect("reports are objects");
        obj.insert("version".into(), Value::String(VERSION.into()));
        obj.insert(
            "scenario".into(),
            serde_json::to_value(&s).expect("scenarios serialize"),
        );
        Ok(RunOutput {
            status: report.status.label().to_string(),
            exit_code: report.status.exit_code(),
            report: json,
        })
    }
}

fn check_descriptor(d: &Descriptor, nested: bool) -> Result<(), Invalid> {
    match d {
        Descriptor::Inner { operator } => check_operator(operator),
        Descriptor::Lift {
            derivation: LiftSpec::Named(name),
        } if name != "zero" && name != "d/dt" => Err(invalid(
            "derivation",
            format!("unknown coefficient derivation {name:?}; expected zero, d/dt or an inner_ring object"),
        )),
        Descriptor::Lift { .. } => Ok(()),
        Descriptor::Sum { parts } if parts.is_empty() => Err(invalid("parts", "a sum needs at least one part")),
        Descriptor::Sum { parts } => parts.iter().try_for_each(|p| check_descriptor(p, true)),
        Descriptor::Lie { .. } if nested => Err(invalid("kind", "lie descriptors cannot be nested")),
        Descriptor::Lie { .. } => Ok(()),
    }
}

fn check_operator(op: &OperatorSpec) -> Result<(), Invalid> {
    match op {
        OperatorSpec::Named(n) if ["shift", "identity", "ones_row"].contains(&n.as_str()) => Ok(()),
        OperatorSpec::Named(n) => Err(invalid(
            "operator",
            format!("unknown operator {n:?}; expected shift, identity, ones_row or an object form"),
        )),
        OperatorSpec::Object(OperatorObject::Sum { parts }) if parts.is_empty() => {
            Err(invalid("parts", "a sum needs at least one part"))
        }
        OperatorSpec::Object(OperatorObject::Sum { parts }) => parts.iter().try_for_each(check_operator),
        OperatorSpec::Object(OperatorObject::Diag { formula }) => match parse_affine(formula) {
            Some(_) => Ok(()),
            None => Err(invalid(
                "formula",
                format!("cannot read {formula:?} as an affine formula a*i+b"),
            )),
        },
        OperatorSpec::Object(_) => Ok(()),
    }
}

fn operator_class(op: &OperatorSpec) -> MatrixClass {
    match op {
        OperatorSpec::Named(n) if n == "ones_row" => MatrixClass::ColumnFinite,
        OperatorSpec::Named(_) => MatrixClass::RowColumnFinite,
        OperatorSpec::Object(OperatorObject::Finite { .. }) => MatrixClass::Finite,
        OperatorSpec::Object(OperatorObject::OnesRow { .. }) => MatrixClass::ColumnFinite,
        OperatorSpec::Object(OperatorObject::Diag { .. }) => MatrixClass::RowColumnFinite,
        OperatorSpec::Object(OperatorObject::Sum { parts }) => {
            parts.iter().map(operator_class).max().unwrap_or(MatrixClass::Finite)
        }
    }
}

fn smallest_ambient(d: &Descriptor) -> Ambient {
    fn widest(d: &Descriptor) -> MatrixClass {
        match d {
            Descriptor::Inner { operator } => operator_class(operator),
            Descriptor::Sum { parts } => parts.iter().map(widest).max().unwrap_or(MatrixClass::Finite),
            _ => MatrixClass::Finite,
        }
    }
    match widest(d) {
        MatrixClass::Finite => Ambient::Inf,
        MatrixClass::RowColumnFinite => Ambient::Rcf,
        MatrixClass::ColumnFinite => Ambient::Full,
    }
}

fn operator<R: Ring>(ring: &R, spec: &OperatorSpec) -> Result<Matrix<R>, Invalid> {
    Ok(match spec {
        OperatorSpec::Named(n) => match n.as_str() {
            "shift" => Operator::shift(ring).into(),
            "identity" => Operator::identity(ring).into(),
            _ => Operator::ones_row(ring, 0).into(),
        },
        OperatorSpec::Object(OperatorObject::Diag { formula }) => {
            let (a, b) = parse_affine(formula).expect("checked on load");
            let r = ring.clone();
            let label = format!("diag({formula})");
            Operator::diag(ring, label, move |i| r.from_int(a * i as i64 + b)).into()
        }
        OperatorSpec::Object(OperatorObject::Finite { entries }) => {
            Matrix::Finite(parse_triples(ring, entries).map_err(|e| invalid("entries", e.to_string()))?)
        }
        OperatorSpec::Object(OperatorObject::OnesRow { row }) => Operator::ones_row(ring, *row).into(),
        OperatorSpec::Object(OperatorObject::Sum { parts }) => {
            let mut acc = Matrix::zero(ring);
            for p in parts {
                acc = acc
                    .add(&operator(ring, p)?)
                    .map_err(|e| invalid("parts", e.to_string()))?;
            }
            acc
        }
    })
}

fn coefficient<R: Ring>(ring: &R, spec: &LiftSpec) -> Result<CoefficientDerivation<R>, Invalid> {
    match spec {
        LiftSpec::Named(n) if n == "zero" => Ok(CoefficientDerivation::zero(ring)),
        LiftSpec::Named(n) => ring
            .derivation_catalog(&mut ChaCha8Rng::seed_from_u64(0))
            .into_iter()
            .find(|u| u.name() == n)
            .ok_or_else(|| invalid("derivation", format!("{n} is not a derivation of {}", ring.name()))),
        LiftSpec::Object(LiftObject::InnerRing { element }) => {
            let r = ring.parse(element).map_err(|e| invalid("element", e.to_string()))?;
            inner_ring_derivation(ring, &r).map_err(|e| invalid("element", e.to_string()))
        }
    }
}

fn build<R: Ring>(ring: &R, ambient: Ambient, d: &Descriptor) -> Result<MatrixDerivation<R>, Invalid> {
    match d {
        Descriptor::Inner { operator: op } => {
            MatrixDerivation::inner(ambient, operator(ring, op)?).map_err(|e| invalid("operator", e.to_string()))
        }
        Descriptor::Lift { derivation } => Ok(MatrixDerivation::lift(ambient, coefficient(ring, derivation)?)),
        Descriptor::Sum { parts } => {
            let mut parts = parts.iter().map(|p| build(ring, ambient, p));
            let first = parts.next().expect("checked nonempty")?;
            parts.try_fold(first, |acc, p| {
                acc.sum(&p?).map_err(|e| invalid("parts", e.to_string()))
            })
        }
        Descriptor::Lie { .. } => Err(invalid("kind", "lie descriptors cannot be nested")),
    }
}

fn build_lie<R: Ring>(ring: &R, ambient: LieAmbient, d: &Descriptor) -> Result<LieDerivation<R>, Invalid> {
    match d {
        Descriptor::Inner { operator: op } => {
            LieDerivation::ad(ambient, operator(ring, op)?).map_err(|e| invalid("operator", e.to_string()))
        }
        Descriptor::Lift { derivation } => Ok(LieDerivation::lift(ambient, coefficient(ring, derivation)?)),
        Descriptor::Sum { parts } => {
            let mut parts = parts.iter().map(|p| build_lie(ring, ambient, p));
            let first = parts.next().expect("checked nonempty")?;
            parts.try_fold(first, |acc, p| {
                acc.sum(&p?).map_err(|e| invalid("parts", e.to_string()))
            })
        }
        Descriptor::Lie { .. } => Err(invalid("kind", "lie descriptors cannot be nested")),
    }
}

/// Loads, runs and writes a scenario. `out` overrides the scenario's
/// own output path; with neither, nothing is written.
pub fn run_scenario(path: &Path, out: Option<&Path>) -> Result<RunOutput, ScenarioError> {
    let loaded = load(path)?;
    let output = loaded.run()?;
    let target = out
        .map(Path::to_path_buf)
        .or_else(|| loaded.scenario.out.as_ref().map(Into::into));
    if let Some(target) = target {
        std::fs::write(&target, output.canonical()).map_err(|source| ScenarioError::Io {
            origin: target.display().to_string(),
            source,
        })?;
    }
    Ok(output)
}
