use std::collections::BTreeMap;
use std::fmt;
use std::path::Path;

use num_complex::Complex64;
use qqm_core::observables::momentum_operator;
use qqm_core::states::{gaussian_packet, plane_wave};
use qqm_core::{GridSpec, Operator, PotentialSpec, QField, Quaternion, SimulationConfig, Tolerances, Variant};
use serde::de::{self, MapAccess, SeqAccess, Visitor};
use serde::{Deserialize, Deserializer, Serialize};

use crate::error::CliError;

pub const MIX_NORM_TOL: f64 = 1e-12;

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Scenario {
    pub name: String,
    pub variant: Variant,
    pub grid: GridSection,
    pub time: TimeSection,
    #[serde(default)]
    pub units: Units,
    #[serde(default)]
    pub potential: PotentialSection,
    pub initial_state: InitialState,
    #[serde(default)]
    pub checks: Vec<Check>,
    /// Operators `O` fed to the identity and stationarity checks.
    #[serde(default = "default_operators")]
    pub operators: Vec<OperatorName>,
    #[serde(default)]
    pub tolerances: Tolerances,
    /// Per-identity tolerance overrides, keyed by report name or name prefix.
    #[serde(default)]
    pub tolerance_overrides: BTreeMap<String, f64>,
    #[serde(default)]
    pub outputs: Outputs,
}

fn default_operators() -> Vec<OperatorName> {
    vec![OperatorName::Position]
}

#[derive(Clone, Copy, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GridSection {
    pub n: usize,
    pub length: f64,
}

#[derive(Clone, Copy, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TimeSection {
    pub dt: f64,
    pub steps: usize,
    pub sample_every: usize,
}

#[derive(Clone, Copy, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Units {
    pub hbar: f64,
    pub mass: f64,
}

impl Default for Units {
    fn default() -> Self {
        Self { hbar: 1.0, mass: 1.0 }
    }
}

/// A real profile on the grid: a named family or inline samples.
#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(untagged)]
pub enum Profile {
    Family(Family),
    Samples(Vec<f64>),
}

impl Default for Profile {
    fn default() -> Self {
        Profile::Family(Family::Zero)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "snake_case", deny_unknown_fields)]
pub enum Family {
    Zero,
    Constant {
        c: f64,
    },
    /// `½ m ω² x²`.
    Harmonic {
        omega: f64,
    },
    Gaussian {
        height: f64,
        center: f64,
        width: f64,
    },
}

impl<'de> Deserialize<'de> for Profile {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        struct ProfileVisitor;

        impl<'de> Visitor<'de> for ProfileVisitor {
            type Value = Profile;

            fn expecting(&self, f: &mut fmt::Formatter) -> fmt::Result {
                f.write_str("a family object or an array of samples")
            }

            fn visit_seq<A: SeqAccess<'de>>(self, seq: A) -> Result<Profile, A::Error> {
                Vec::<f64>::deserialize(de::value::SeqAccessDeserializer::new(seq)).map(Profile::Samples)
            }

            fn visit_map<A: MapAccess<'de>>(self, map: A) -> Result<Profile, A::Error> {
                Family::deserialize(de::value::MapAccessDeserializer::new(map)).map(Profile::Family)
            }
        }

        deserializer.deserialize_any(ProfileVisitor)
    }
}

impl Profile {
    pub fn sample(&self, grid: &GridSpec, mass: f64) -> Result<Vec<f64>, String> {
        match self {
            Profile::Samples(v) if v.len() != grid.n() => {
                Err(format!("expected {} samples, got {}", grid.n(), v.len()))
            }
            Profile::Samples(v) => Ok(v.clone()),
            Profile::Family(f) => Ok(grid.points().map(|x| f.at(x, mass)).collect()),
        }
    }

    fn is_zero(&self) -> bool {
        match self {
            Profile::Family(Family::Zero) => true,
            Profile::Family(Family::Constant { c }) => *c == 0.0,
            Profile::Family(Family::Harmonic { omega }) => *omega == 0.0,
            Profile::Family(Family::Gaussian { height, .. }) => *height == 0.0,
            Profile::Samples(v) => v.iter().all(|&x| x == 0.0),
        }
    }
}

impl Family {
    fn at(&self, x: f64, mass: f64) -> f64 {
        match *self {
            Family::Zero => 0.0,
            Family::Constant { c } => c,
            Family::Harmonic { omega } => 0.5 * mass * omega * omega * x * x,
            Family::Gaussian { height, center, width } => {
                height * (-(x - center).powi(2) / (2.0 * width * width)).exp()
            }
        }
    }
}

#[derive(Clone, Debug, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PotentialSection {
    #[serde(default)]
    pub alpha: Profile,
    #[serde(default)]
    pub beta_re: Profile,
    #[serde(default)]
    pub beta_im: Profile,
    #[serde(default)]
    pub v0_re: Profile,
    #[serde(default)]
    pub v0_im: Profile,
    #[serde(default)]
    pub v1_re: Profile,
    #[serde(default)]
    pub v1_im: Profile,
}

impl PotentialSection {
    fn components(&self) -> [(&'static str, &Profile); 7] {
        [
            ("alpha", &self.alpha),
            ("beta_re", &self.beta_re),
            ("beta_im", &self.beta_im),
            ("v0_re", &self.v0_re),
            ("v0_im", &self.v0_im),
            ("v1_re", &self.v1_re),
            ("v1_im", &self.v1_im),
        ]
    }

    fn q_is_zero(&self) -> bool {
        self.alpha.is_zero() && self.beta_re.is_zero() && self.beta_im.is_zero()
    }

    fn is_complex_reduction(&self) -> bool {
        self.beta_re.is_zero() && self.beta_im.is_zero() && self.v1_re.is_zero() && self.v1_im.is_zero()
    }
}

/// A unit quaternion given as `[c0, c1, c2, c3]`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "[f64; 4]", into = "[f64; 4]")]
pub struct Mix(pub Quaternion);

impl TryFrom<[f64; 4]> for Mix {
    type Error = String;

    fn try_from(c: [f64; 4]) -> Result<Self, String> {
        let q = Quaternion::from_array(c);
        let norm = q.norm_sq();
        if !norm.is_finite() || (norm - 1.0).abs() > MIX_NORM_TOL {
            return Err(format!(
                "quaternion_mix {c:?} has squared norm {norm}, expected 1 within {MIX_NORM_TOL:e}"
            ));
        }
        Ok(Mix(q))
    }
}

impl From<Mix> for [f64; 4] {
    fn from(m: Mix) -> Self {
        m.0.to_array()
    }
}

impl Default for Mix {
    fn default() -> Self {
        Mix(Quaternion::ONE)
    }
}

/// Wavenumber index; must be an integer so the wave is periodic on the grid.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "f64", into = "f64")]
pub struct KIndex(pub i64);

impl TryFrom<f64> for KIndex {
    type Error = String;

    fn try_from(k: f64) -> Result<Self, String> {
        if k.fract() != 0.0 || !k.is_finite() || k.abs() > 1e15 {
            return Err(format!("k_index {k} is not grid-commensurate (must be an integer)"));
        }
        Ok(KIndex(k as i64))
    }
}

impl From<KIndex> for f64 {
    fn from(k: KIndex) -> Self {
        k.0 as f64
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "snake_case", deny_unknown_fields)]
pub enum InitialState {
    GaussianPacket {
        center: f64,
        width: f64,
        k0: f64,
        quaternion_mix: Mix,
    },
    PlaneWave {
        k_index: KIndex,
        #[serde(default)]
        quaternion_mix: Mix,
    },
    Samples {
        values: Vec<[f64; 4]>,
    },
}

impl InitialState {
    fn is_complex(&self) -> bool {
        match self {
            InitialState::GaussianPacket { quaternion_mix, .. } | InitialState::PlaneWave { quaternion_mix, .. } => {
                quaternion_mix.0.x2 == 0.0 && quaternion_mix.0.x3 == 0.0
            }
            InitialState::Samples { values } => values.iter().all(|v| v[2] == 0.0 && v[3] == 0.0),
        }
    }

    pub fn build(&self, grid: GridSpec) -> Result<QField, String> {
        match self {
            InitialState::GaussianPacket {
                center,
                width,
                k0,
                quaternion_mix,
            } => Ok(gaussian_packet(grid, *center, *width, *k0, quaternion_mix.0)),
            InitialState::PlaneWave {
                k_index,
                quaternion_mix,
            } => Ok(plane_wave(grid, k_index.0, quaternion_mix.0)),
            InitialState::Samples { values } => {
                QField::new(grid, values.iter().map(|&v| Quaternion::from_array(v)).collect())
                    .map_err(|e| e.to_string())
            }
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Check {
    Continuity,
    EhrenfestPosition,
    EhrenfestMomentum,
    HermitianIdentities,
    EvolutionIdentities,
    Stationarity,
    OracleCompare,
}

impl Check {
    pub fn as_str(self) -> &'static str {
        match self {
            Check::Continuity => "continuity",
            Check::EhrenfestPosition => "ehrenfest_position",
            Check::EhrenfestMomentum => "ehrenfest_momentum",
            Check::HermitianIdentities => "hermitian_identities",
            Check::EvolutionIdentities => "evolution_identities",
            Check::Stationarity => "stationarity",
            Check::OracleCompare => "oracle_compare",
        }
    }
}

/// Operators available to scenarios by name.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum OperatorName {
    Identity,
    Position,
    Derivative,
    Momentum,
    JPosition,
    JDerivative,
    KDerivative,
}

impl OperatorName {
    pub fn as_str(self) -> &'static str {
        match self {
            OperatorName::Identity => "identity",
            OperatorName::Position => "position",
            OperatorName::Derivative => "derivative",
            OperatorName::Momentum => "momentum",
            OperatorName::JPosition => "j_position",
            OperatorName::JDerivative => "j_derivative",
            OperatorName::KDerivative => "k_derivative",
        }
    }

    pub fn build(self, cfg: &SimulationConfig) -> Operator {
        match self {
            OperatorName::Identity => Operator::Identity,
            OperatorName::Position => Operator::Position,
            OperatorName::Derivative => Operator::Derivative,
            OperatorName::Momentum => momentum_operator(cfg),
            OperatorName::JPosition => Operator::MultiplyByConst(Quaternion::J).after(Operator::Position),
            OperatorName::JDerivative => Operator::MultiplyByConst(Quaternion::J).after(Operator::Derivative),
            OperatorName::KDerivative => Operator::MultiplyByConst(Quaternion::K).after(Operator::Derivative),
        }
    }
}

/// Time series written to the observables CSV.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Observable {
    Norm,
    Position,
    Momentum,
    CanonicalMomentum,
    MaxAbsSource,
    SourceIntegral,
    PositionBreakdown,
    MaxJk,
    JDerivative,
    KDerivative,
}

impl Observable {
    pub fn as_str(self) -> &'static str {
        match self {
            Observable::Norm => "norm",
            Observable::Position => "position",
            Observable::Momentum => "momentum",
            Observable::CanonicalMomentum => "canonical_momentum",
            Observable::MaxAbsSource => "max_abs_source",
            Observable::SourceIntegral => "source_integral",
            Observable::PositionBreakdown => "position_breakdown",
            Observable::MaxJk => "max_jk",
            Observable::JDerivative => "j_derivative",
            Observable::KDerivative => "k_derivative",
        }
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Outputs {
    #[serde(default = "default_observables")]
    pub observables: Vec<Observable>,
    #[serde(default)]
    pub dump_fields: bool,
}

fn default_observables() -> Vec<Observable> {
    vec![Observable::Norm, Observable::Position]
}

impl Default for Outputs {
    fn default() -> Self {
        Self {
            observables: default_observables(),
            dump_fields: false,
        }
    }
}

/// Everything a run needs, built from a validated scenario.
pub struct Prepared {
    pub grid: GridSpec,
    pub potential: PotentialSpec,
    pub config: SimulationConfig,
    pub psi0: QField,
}

impl Scenario {
    /// Parses and validates a scenario; `origin` names the source in errors.
    pub fn from_json(src: &str, origin: &str) -> Result<Self, CliError> {
        let scenario: Scenario = serde_json::from_str(src).map_err(|e| CliError::Parse {
            origin: origin.to_string(),
            line: e.line(),
            column: e.column(),
            message: e.to_string(),
        })?;
        scenario.validate(src, origin)?;
        Ok(scenario)
    }

    pub fn from_path(path: &Path) -> Result<Self, CliError> {
        let src = std::fs::read_to_string(path).map_err(|source| CliError::Io {
            path: path.to_path_buf(),
            source,
        })?;
        Self::from_json(&src, &path.display().to_string())
    }

    fn validate(&self, src: &str, origin: &str) -> Result<(), CliError> {
        let fail = |key: &str, message: String| CliError::Invalid {
            origin: origin.to_string(),
            line: locate(src, key),
            message,
        };
        if self.name.is_empty()
            || !self
                .name
                .chars()
                .all(|c| c.is_ascii_alphanumeric() || c == '_' || c == '-')
        {
            return Err(fail(
                "name",
                format!("name {:?} must be non-empty [A-Za-z0-9_-]", self.name),
            ));
        }
        let grid = GridSpec::new(self.grid.n, self.grid.length).map_err(|e| fail("grid", e.to_string()))?;
        if !(self.units.hbar > 0.0 && self.units.mass > 0.0) {
            return Err(fail("units", "hbar and mass must be positive".into()));
        }
        self.config().validate().map_err(|e| fail("time", e.to_string()))?;
        if self.time.sample_every == 0 {
            return Err(fail("sample_every", "sample_every must be at least 1".into()));
        }
        for (key, profile) in self.potential.components() {
            profile
                .sample(&grid, self.units.mass)
                .map_err(|e| fail(key, format!("{key}: {e}")))?;
        }
        if let InitialState::PlaneWave { k_index, .. } = &self.initial_state {
            if k_index.0.unsigned_abs() as usize > self.grid.n / 2 {
                return Err(fail(
                    "k_index",
                    format!("k_index {} exceeds the Nyquist index {}", k_index.0, self.grid.n / 2),
                ));
            }
        }
        self.initial_state.build(grid).map_err(|e| fail("initial_state", e))?;
        let mut seen = Vec::new();
        for &check in &self.checks {
            if seen.contains(&check) {
                return Err(fail(check.as_str(), format!("check {} listed twice", check.as_str())));
            }
            seen.push(check);
        }
        if self.checks.contains(&Check::EhrenfestMomentum) && !self.potential.q_is_zero() {
            return Err(fail(
                "ehrenfest_momentum",
                "ehrenfest_momentum requires a zero vector potential (alpha = beta = 0)".into(),
            ));
        }
        if self.checks.contains(&Check::OracleCompare) {
            if self.variant != Variant::Lcwe {
                return Err(fail(
                    "oracle_compare",
                    "oracle_compare requires the lcwe variant".into(),
                ));
            }
            if !self.potential.is_complex_reduction() {
                return Err(fail(
                    "oracle_compare",
                    "oracle_compare requires beta = 0 and v1 = 0".into(),
                ));
            }
            if !self.initial_state.is_complex() {
                return Err(fail(
                    "oracle_compare",
                    "oracle_compare requires complex initial data (no j, k parts)".into(),
                ));
            }
        }
        let needs_samples = self
            .checks
            .iter()
            .any(|c| !matches!(c, Check::HermitianIdentities | Check::OracleCompare));
        if needs_samples && self.time.steps / self.time.sample_every < 2 {
            return Err(fail("sample_every", "trajectory checks need at least 3 samples".into()));
        }
        for (key, &tol) in &self.tolerance_overrides {
            if !(tol.is_finite() && tol >= 0.0) {
                return Err(fail(
                    key,
                    format!("tolerance override {key} must be finite and non-negative"),
                ));
            }
        }
        Ok(())
    }

    pub fn config(&self) -> SimulationConfig {
        SimulationConfig::new(self.variant, self.time.dt, self.time.steps).with_units(self.units.hbar, self.units.mass)
    }

    pub fn prepare(&self) -> Result<Prepared, CliError> {
        let invalid = |message: String| CliError::Invalid {
            origin: self.name.clone(),
            line: None,
            message,
        };
        let grid = GridSpec::new(self.grid.n, self.grid.length)?;
        let mass = self.units.mass;
        let sample = |p: &Profile| p.sample(&grid, mass).map_err(invalid);
        let complex = |re: &Profile, im: &Profile| -> Result<Vec<Complex64>, CliError> {
            Ok(sample(re)?
                .into_iter()
                .zip(sample(im)?)
                .map(|(a, b)| Complex64::new(a, b))
                .collect())
        };
        let p = &self.potential;
        let potential = PotentialSpec::new(
            grid,
            sample(&p.alpha)?,
            complex(&p.beta_re, &p.beta_im)?,
            complex(&p.v0_re, &p.v0_im)?,
            complex(&p.v1_re, &p.v1_im)?,
        )?;
        let psi0 = self.initial_state.build(grid).map_err(invalid)?;
        Ok(Prepared {
            grid,
            potential,
            config: self.config(),
            psi0,
        })
    }

    /// Tolerance for a report: the most specific matching override, else its own.
    pub fn tolerance_override(&self, identity: &str) -> Option<f64> {
        self.tolerance_overrides
            .iter()
            .filter(|(key, _)| identity == key.as_str() || identity.starts_with(&format!("{key}/")))
            .max_by_key(|(key, _)| key.len())
            .map(|(_, &t)| t)
    }
}

/// 1-based line of the first quoted occurrence of `key`, if any.
fn locate(src: &str, key: &str) -> Option<usize> {
    let needle = format!("\"{key}\"");
    src.lines().position(|l| l.contains(&needle)).map(|i| i + 1)
}
