//! Scenario configuration files.
//!
//! A config is a flat TOML document: one optional top-level `name`, then
//! sections of scalar keys. Units are part of every key name. Unknown
//! sections or keys are errors, and every problem found is reported at once.

use std::collections::HashMap;
use std::fmt;
use std::path::Path;

use thiserror::Error;
use toml::{Table, Value};

use crate::couplings::Orientation;
use crate::experiments::{
    CalibrationTargets, CavitySpec, CouplingMode, CouplingSpec, EmitterSpec, Overrides, QuenchReference, RunSpec,
    Scenario, SweepSpec,
};
use crate::materials::{DrudeMetal, Environment, Nanoparticle};
use crate::network::ModeLabel;
use crate::quantities::{DipoleMoment, Energy, Length};

/// Every problem found in a config, one per entry.
#[derive(Debug, Clone, PartialEq, Error)]
pub struct ConfigError {
    pub problems: Vec<String>,
}

impl ConfigError {
    pub fn single(msg: impl Into<String>) -> Self {
        Self { problems: vec![msg.into()] }
    }
}

impl fmt::Display for ConfigError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("invalid configuration")?;
        for p in &self.problems {
            write!(f, "\n  {p}")?;
        }
        Ok(())
    }
}

#[derive(Clone, Copy, PartialEq)]
enum Kind {
    Float,
    Int,
    Str,
    FloatList,
}

impl Kind {
    fn describe(self) -> &'static str {
        match self {
            Kind::Float => "a number",
            Kind::Int => "a non-negative integer",
            Kind::Str => "a string",
            Kind::FloatList => "an array of numbers",
        }
    }
}

const SECTIONS: &[(&str, bool, &[(&str, Kind)])] = &[
    ("metal", true, &[("eps_inf", Kind::Float), ("omega_p_ev", Kind::Float), ("gamma_o_ev", Kind::Float)]),
    ("environment", true, &[("eps_b", Kind::Float)]),
    (
        "particle",
        true,
        &[
            ("shape", Kind::Str),
            ("radius_nm", Kind::Float),
            ("a_nm", Kind::Float),
            ("b_nm", Kind::Float),
            ("c_nm", Kind::Float),
        ],
    ),
    (
        "emitter",
        false,
        &[
            ("mu_e_nm", Kind::Float),
            ("distance_nm", Kind::Float),
            ("orientation", Kind::Str),
            ("theta_deg", Kind::Float),
            ("plasmon_detuning_ev", Kind::Float),
        ],
    ),
    ("cavity", true, &[("q_factor", Kind::Float), ("vc_um3", Kind::Float), ("detuning_mev", Kind::Float)]),
    (
        "couplings",
        true,
        &[
            ("mode", Kind::Str),
            ("sign_g1", Kind::Float),
            ("sign_G", Kind::Float),
            ("sign_J", Kind::Float),
            ("g1_mev", Kind::Float),
            ("G_mev", Kind::Float),
            ("J_uev", Kind::Float),
            ("gamma_r_mev", Kind::Float),
            ("gamma_s_uev", Kind::Float),
            ("gamma_m_uev", Kind::Float),
            ("quench_ref_distance_nm", Kind::Float),
            ("quench_ref_uev", Kind::Float),
            ("target_splitting_mev", Kind::Float),
            ("target_kappa_mev", Kind::Float),
        ],
    ),
    (
        "sweep",
        false,
        &[
            ("detuning_min_ev", Kind::Float),
            ("detuning_max_ev", Kind::Float),
            ("points", Kind::Int),
            ("distance_min_nm", Kind::Float),
            ("distance_max_nm", Kind::Float),
            ("distance_points", Kind::Int),
            ("q_min", Kind::Float),
            ("q_max", Kind::Float),
            ("q_points", Kind::Int),
        ],
    ),
    (
        "run",
        false,
        &[
            ("drive", Kind::Str),
            ("time_points", Kind::Int),
            ("time_spans", Kind::Float),
            ("trace_q", Kind::FloatList),
        ],
    ),
];

/// Built-in configs bundled with the library.
pub const BUILTINS: &[(&str, &str)] = &[
    ("fig1c", include_str!("../configs/fig1c.toml")),
    ("fig2", include_str!("../configs/fig2.toml")),
    ("fig2_first_principles", include_str!("../configs/fig2_first_principles.toml")),
    ("fig3", include_str!("../configs/fig3.toml")),
    ("fig4", include_str!("../configs/fig4.toml")),
];

pub fn builtin_text(name: &str) -> Option<&'static str> {
    BUILTINS.iter().find(|(n, _)| *n == name).map(|(_, t)| *t)
}

pub fn builtin(name: &str) -> Option<Scenario> {
    builtin_text(name).map(|t| parse_str(t).expect("built-in configs are valid"))
}

/// Loads a config from a file, or a built-in one by name when no such file
/// exists.
pub fn load(name_or_path: &str) -> crate::Result<Scenario> {
    let path = Path::new(name_or_path);
    if !path.exists() {
        if let Some(text) = builtin_text(name_or_path) {
            return Ok(parse_str(text)?);
        }
    }
    parse_file(path)
}

pub fn parse_file(path: &Path) -> crate::Result<Scenario> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| ConfigError::single(format!("cannot read {}: {e}", path.display())))?;
    let mut s = parse_str(&text)?;
    if s.name.is_empty() {
        s.name = path.file_stem().map(|n| n.to_string_lossy().into_owned()).unwrap_or_default();
    }
    Ok(s)
}

/// Line numbers of section headers and keys, from a plain line scan.
struct LineIndex {
    sections: HashMap<String, usize>,
    keys: HashMap<(String, String), usize>,
}

impl LineIndex {
    fn new(text: &str) -> Self {
        let mut sections = HashMap::new();
        let mut keys = HashMap::new();
        let mut current = String::new();
        for (i, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if let Some(rest) = line.strip_prefix('[') {
                if let Some(end) = rest.find(']') {
                    current = rest[..end].trim().to_string();
                    sections.entry(current.clone()).or_insert(i + 1);
                }
            } else if let Some(eq) = line.find('=') {
                let key = line[..eq].trim().trim_matches('"').to_string();
                keys.entry((current.clone(), key)).or_insert(i + 1);
            }
        }
        Self { sections, keys }
    }

    fn key(&self, section: &str, key: &str) -> String {
        match self.keys.get(&(section.to_string(), key.to_string())) {
            Some(l) => format!("line {l}: "),
            None => String::new(),
        }
    }

    fn section(&self, section: &str) -> String {
        match self.sections.get(section) {
            Some(l) => format!("line {l}: "),
            None => String::new(),
        }
    }
}

fn suggestion<'a>(word: &str, candidates: impl Iterator<Item = &'a str>) -> String {
    let best = candidates
        .map(|c| (strsim::damerau_levenshtein(&word.to_lowercase(), &c.to_lowercase()), c))
        .min_by_key(|(d, _)| *d);
    match best {
        Some((d, c)) if d <= 3.max(word.len() / 3) => format!(" (did you mean \"{c}\"?)"),
        _ => String::new(),
    }
}

fn byte_to_line(text: &str, offset: usize) -> usize {
    text[..offset.min(text.len())].matches('\n').count() + 1
}

/// Typed access to one section, recording problems instead of failing.
struct Section<'a> {
    name: &'static str,
    table: Option<&'a Table>,
    index: &'a LineIndex,
    problems: &'a mut Vec<String>,
}

impl Section<'_> {
    fn present(&self) -> bool {
        self.table.is_some()
    }

    fn has(&self, key: &str) -> bool {
        self.table.is_some_and(|t| t.contains_key(key))
    }

    fn missing(&mut self, key: &str) {
        let at = self.index.section(self.name);
        self.problems.push(format!("{at}missing key [{}] {key}", self.name));
    }

    fn invalid(&mut self, key: &str, msg: &str) {
        let at = self.index.key(self.name, key);
        self.problems.push(format!("{at}[{}] {key}: {msg}", self.name));
    }

    fn opt_f64(&mut self, key: &str) -> Option<f64> {
        let v = self.table?.get(key)?;
        let x = match v {
            Value::Float(x) => *x,
            Value::Integer(i) => *i as f64,
            _ => {
                self.invalid(key, "expected a number");
                return None;
            }
        };
        if !x.is_finite() {
            self.invalid(key, "must be finite");
            return None;
        }
        Some(x)
    }

    fn f64(&mut self, key: &str) -> Option<f64> {
        if !self.has(key) {
            self.missing(key);
            return None;
        }
        self.opt_f64(key)
    }

    fn positive(&mut self, key: &str) -> Option<f64> {
        let x = self.f64(key)?;
        self.check_positive(key, x)
    }

    fn check_positive(&mut self, key: &str, x: f64) -> Option<f64> {
        if x > 0.0 {
            Some(x)
        } else {
            self.invalid(key, &format!("must be positive, got {x}"));
            None
        }
    }

    fn opt_usize(&mut self, key: &str, min: usize) -> Option<usize> {
        let v = self.table?.get(key)?;
        match v {
            Value::Integer(i) if *i >= min as i64 => Some(*i as usize),
            Value::Integer(i) => {
                self.invalid(key, &format!("must be at least {min}, got {i}"));
                None
            }
            _ => {
                self.invalid(key, "expected an integer");
                None
            }
        }
    }

    fn opt_str(&mut self, key: &str) -> Option<String> {
        match self.table?.get(key)? {
            Value::String(s) => Some(s.clone()),
            _ => {
                self.invalid(key, "expected a string");
                None
            }
        }
    }

    fn str(&mut self, key: &str) -> Option<String> {
        if !self.has(key) {
            self.missing(key);
            return None;
        }
        self.opt_str(key)
    }

    fn opt_list(&mut self, key: &str) -> Option<Vec<f64>> {
        let Value::Array(items) = self.table?.get(key)? else {
            self.invalid(key, "expected an array of numbers");
            return None;
        };
        let mut out = Vec::with_capacity(items.len());
        for v in items {
            match v {
                Value::Float(x) if x.is_finite() => out.push(*x),
                Value::Integer(i) => out.push(*i as f64),
                _ => {
                    self.invalid(key, "expected an array of finite numbers");
                    return None;
                }
            }
        }
        Some(out)
    }

    fn sign(&mut self, key: &str) -> f64 {
        match self.opt_f64(key) {
            None => -1.0,
            Some(s) if s == 1.0 || s == -1.0 => s,
            Some(s) => {
                self.invalid(key, &format!("must be 1 or -1, got {s}"));
                -1.0
            }
        }
    }

    fn pair(&mut self, lo: &str, hi: &str, positive: bool) -> Option<Option<(f64, f64)>> {
        match (self.opt_f64(lo), self.opt_f64(hi)) {
            (None, None) if !self.has(lo) && !self.has(hi) => Some(None),
            (Some(a), Some(b)) => {
                if positive && a <= 0.0 {
                    self.invalid(lo, "must be positive");
                    None
                } else if a >= b {
                    self.invalid(hi, &format!("must exceed {lo}"));
                    None
                } else {
                    Some(Some((a, b)))
                }
            }
            (a, b) => {
                if a.is_none() && !self.has(lo) {
                    self.missing(lo);
                }
                if b.is_none() && !self.has(hi) {
                    self.missing(hi);
                }
                None
            }
        }
    }
}

/// Parses config text into a scenario.
pub fn parse_str(text: &str) -> Result<Scenario, ConfigError> {
    let root: Table = text.parse().map_err(|e: toml::de::Error| {
        let at = e.span().map(|s| format!("line {}: ", byte_to_line(text, s.start))).unwrap_or_default();
        ConfigError::single(format!("{at}syntax error: {}", e.message().trim()))
    })?;
    let index = LineIndex::new(text);
    let mut problems = Vec::new();

    let mut name = String::new();
    for (key, value) in &root {
        if let Some((_, _, keys)) = SECTIONS.iter().find(|(s, _, _)| s == key) {
            let Value::Table(table) = value else {
                problems.push(format!("{}\"{key}\" must be a section", index.key("", key)));
                continue;
            };
            for (k, v) in table {
                match keys.iter().find(|(n, _)| n == k) {
                    None => problems.push(format!(
                        "{}unknown key [{key}] {k}{}",
                        index.key(key, k),
                        suggestion(k, keys.iter().map(|(n, _)| *n))
                    )),
                    Some((_, kind)) => {
                        let ok = match kind {
                            Kind::Float => matches!(v, Value::Float(_) | Value::Integer(_)),
                            Kind::Int => matches!(v, Value::Integer(i) if *i >= 0),
                            Kind::Str => matches!(v, Value::String(_)),
                            Kind::FloatList => matches!(v, Value::Array(_)),
                        };
                        if !ok {
                            problems.push(format!("{}[{key}] {k}: expected {}", index.key(key, k), kind.describe()));
                        }
                    }
                }
            }
        } else if key == "name" {
            match value {
                Value::String(s) => name = s.clone(),
                _ => problems.push(format!("{}name: expected a string", index.key("", key))),
            }
        } else {
            let what = if value.is_table() { "section" } else { "top-level key" };
            problems.push(format!(
                "{}unknown {what} \"{key}\"{}",
                if value.is_table() { index.section(key) } else { index.key("", key) },
                suggestion(key, SECTIONS.iter().map(|(s, _, _)| *s))
            ));
        }
    }
    let missing: Vec<&str> = SECTIONS
        .iter()
        .filter(|(s, required, _)| *required && !root.contains_key(*s))
        .map(|(s, _, _)| *s)
        .collect();
    if !missing.is_empty() {
        problems.push(format!("missing required sections: {}", missing.join(", ")));
    }
    if !problems.is_empty() {
        return Err(ConfigError { problems });
    }

    let table = |s: &str| root.get(s).and_then(Value::as_table);
    macro_rules! section {
        ($name:literal) => {
            Section {
                name: $name,
                table: table($name),
                index: &index,
                problems: &mut problems,
            }
        };
    }

    let metal = {
        let mut s = section!("metal");
        let (e, w, g) = (s.f64("eps_inf"), s.positive("omega_p_ev"), s.f64("gamma_o_ev"));
        match (e, w, g) {
            (Some(e), Some(w), Some(g)) => match DrudeMetal::new(e, Energy(w), Energy(g)) {
                Ok(m) => Some(m),
                Err(err) => {
                    s.invalid("eps_inf", &err.to_string());
                    None
                }
            },
            _ => None,
        }
    };

    let environment = {
        let mut s = section!("environment");
        s.f64("eps_b").and_then(|e| match Environment::new(e) {
            Ok(env) => Some(env),
            Err(err) => {
                s.invalid("eps_b", &err.to_string());
                None
            }
        })
    };

    let particle = {
        let mut s = section!("particle");
        let shape = s.str("shape");
        let metal = metal.unwrap_or_else(DrudeMetal::gold);
        match shape.as_deref() {
            Some("sphere") => s
                .positive("radius_nm")
                .and_then(|r| Nanoparticle::sphere(Length(r), metal).ok()),
            Some("ellipsoid") => {
                let axes = [s.positive("a_nm"), s.positive("b_nm"), s.positive("c_nm")];
                match axes {
                    [Some(a), Some(b), Some(c)] => Nanoparticle::ellipsoid([Length(a), Length(b), Length(c)], metal).ok(),
                    _ => None,
                }
            }
            Some(other) => {
                s.invalid("shape", &format!("expected \"sphere\" or \"ellipsoid\", got \"{other}\""));
                None
            }
            None => None,
        }
    };

    let emitter = {
        let mut s = section!("emitter");
        if s.present() {
            let mu = s.positive("mu_e_nm");
            let distance = s.positive("distance_nm");
            let orientation = match s.str("orientation").as_deref() {
                Some("radial") => Some(Orientation::Radial),
                Some("tangential") => Some(Orientation::Tangential),
                Some(other) => {
                    s.invalid("orientation", &format!("expected \"radial\" or \"tangential\", got \"{other}\""));
                    None
                }
                None => None,
            };
            let theta = s.opt_f64("theta_deg");
            if let Some(t) = theta {
                if !(0.0..=90.0).contains(&t) {
                    s.invalid("theta_deg", &format!("must lie in [0, 90], got {t}"));
                }
            }
            let detuning = s.f64("plasmon_detuning_ev");
            match (mu, distance, orientation, detuning) {
                (Some(mu), Some(d), Some(o), Some(dt)) => Some(Some(EmitterSpec {
                    mu: DipoleMoment(mu),
                    distance: Length(d),
                    orientation: o,
                    theta_deg: theta,
                    plasmon_detuning: Energy(dt),
                })),
                _ => None,
            }
        } else {
            Some(None)
        }
    };

    let cavity = {
        let mut s = section!("cavity");
        let q = s.positive("q_factor");
        let v = s.positive("vc_um3");
        let detuning = s.opt_f64("detuning_mev").unwrap_or(0.0);
        match (q, v) {
            (Some(q), Some(v)) => Some(CavitySpec {
                q_factor: q,
                volume_um3: v,
                detuning: Energy::mev(detuning),
            }),
            _ => None,
        }
    };

    let has_emitter = root.contains_key("emitter");
    let couplings = {
        let mut s = section!("couplings");
        let mode = match s.str("mode") {
            Some(m) => match CouplingMode::parse(&m) {
                Some(mode) => Some(mode),
                None => {
                    s.invalid(
                        "mode",
                        &format!("expected \"first_principles\", \"paper_exact\" or \"calibrated\", got \"{m}\""),
                    );
                    None
                }
            },
            None => None,
        };
        let signs = [s.sign("sign_g1"), s.sign("sign_G"), s.sign("sign_J")];
        let overrides = Overrides {
            g1: s.opt_f64("g1_mev").map(Energy::mev),
            big_g: s.opt_f64("G_mev").map(Energy::mev),
            j: s.opt_f64("J_uev").map(Energy::uev),
            gamma_s: s.opt_f64("gamma_s_uev").map(Energy::uev),
            gamma_m: s.opt_f64("gamma_m_uev").map(Energy::uev),
            gamma_r: s.opt_f64("gamma_r_mev").map(Energy::mev),
        };
        for (key, v) in [
            ("gamma_s_uev", overrides.gamma_s),
            ("gamma_m_uev", overrides.gamma_m),
            ("gamma_r_mev", overrides.gamma_r),
        ] {
            if let Some(v) = v {
                if v.0 < 0.0 {
                    s.invalid(key, "must not be negative");
                }
            }
        }
        let quench_reference = match s.pair("quench_ref_distance_nm", "quench_ref_uev", false) {
            Some(Some((d, r))) => {
                s.check_positive("quench_ref_distance_nm", d);
                Some(QuenchReference {
                    distance: Length(d),
                    rate: Energy::uev(r),
                })
            }
            _ => None,
        };
        let wants_targets = mode == Some(CouplingMode::Calibrated);
        let targets = if wants_targets || s.has("target_splitting_mev") || s.has("target_kappa_mev") {
            match (s.positive("target_splitting_mev"), s.positive("target_kappa_mev")) {
                (Some(a), Some(b)) => Some(CalibrationTargets {
                    splitting: Energy::mev(a),
                    kappa_narrow: Energy::mev(b),
                }),
                _ => None,
            }
        } else {
            None
        };
        if mode == Some(CouplingMode::PaperExact) {
            let mut need = vec![("g1_mev", overrides.g1), ("gamma_r_mev", overrides.gamma_r)];
            if has_emitter {
                need.extend([
                    ("G_mev", overrides.big_g),
                    ("J_uev", overrides.j),
                    ("gamma_s_uev", overrides.gamma_s),
                    ("gamma_m_uev", overrides.gamma_m),
                ]);
            }
            for (k, v) in need {
                if v.is_none() {
                    s.problems.push(format!("{}paper_exact mode needs [couplings] {k}", index.key("couplings", "mode")));
                }
            }
        }
        if mode == Some(CouplingMode::Calibrated) && !has_emitter {
            s.invalid("mode", "calibrated couplings need an [emitter] section");
        }
        mode.map(|mode| CouplingSpec {
            mode,
            signs,
            overrides,
            quench_reference,
            targets,
        })
    };

    let sweep = {
        let mut s = section!("sweep");
        let d = SweepSpec::default();
        let detuning = s.pair("detuning_min_ev", "detuning_max_ev", false);
        let distance = s.pair("distance_min_nm", "distance_max_nm", true);
        let q = s.pair("q_min", "q_max", true);
        let points = s.opt_usize("points", 2);
        let distance_points = s.opt_usize("distance_points", 2);
        let q_points = s.opt_usize("q_points", 2);
        SweepSpec {
            detuning: detuning.flatten(),
            points: points.unwrap_or(d.points),
            distance_nm: distance.flatten().unwrap_or(d.distance_nm),
            distance_points: distance_points.unwrap_or(d.distance_points),
            q: q.flatten().unwrap_or(d.q),
            q_points: q_points.unwrap_or(d.q_points),
        }
    };

    let run = {
        let mut s = section!("run");
        let drive = match s.opt_str("drive").as_deref() {
            None => Some(if has_emitter { ModeLabel::Emitter } else { ModeLabel::PlasmonDipole }),
            Some("plasmon") | Some("plasmon_dipole") => Some(ModeLabel::PlasmonDipole),
            Some("cavity") => Some(ModeLabel::Cavity),
            Some("emitter") => Some(ModeLabel::Emitter),
            Some(other) => {
                s.invalid("drive", &format!("expected \"plasmon\", \"cavity\" or \"emitter\", got \"{other}\""));
                None
            }
        };
        let time_points = s.opt_usize("time_points", 2).unwrap_or(4096);
        let time_spans = match s.opt_f64("time_spans") {
            Some(x) => s.check_positive("time_spans", x).unwrap_or(10.0),
            None => 10.0,
        };
        let trace_q = s.opt_list("trace_q").unwrap_or_else(|| vec![1e3, 1e4, 1e5]);
        if trace_q.iter().any(|q| *q <= 0.0) {
            s.invalid("trace_q", "every Q must be positive");
        }
        drive.map(|drive| RunSpec {
            drive,
            time_points,
            time_spans,
            trace_q,
        })
    };

    if !problems.is_empty() {
        return Err(ConfigError { problems });
    }
    let (Some(metal), Some(environment), Some(particle), Some(emitter), Some(cavity), Some(couplings), Some(run)) =
        (metal, environment, particle, emitter, cavity, couplings, run)
    else {
        return Err(ConfigError::single("incomplete configuration"));
    };
    Ok(Scenario {
        name,
        metal,
        environment,
        particle,
        emitter,
        cavity,
        couplings,
        sweep,
        run,
    })
}

/// Shortest text that parses back to exactly `x`.
fn num(x: f64) -> String {
    format!("{x:?}")
}

/// Text for an energy written in a scaled unit, chosen so that reading it
/// back through `parse` reproduces `e` bit for bit whenever `e` itself came
/// from such text.
fn scaled(e: Energy, factor: f64, parse: fn(f64) -> Energy) -> String {
    let guess = e.0 * factor;
    let mut candidates = vec![guess];
    let (mut up, mut down) = (guess, guess);
    for _ in 0..8 {
        up = up.next_up();
        down = down.next_down();
        candidates.extend([up, down]);
    }
    let x = candidates.into_iter().find(|&x| parse(x) == e).unwrap_or(guess);
    num(x)
}

fn mev(e: Energy) -> String {
    scaled(e, 1e3, Energy::mev)
}

fn uev(e: Energy) -> String {
    scaled(e, 1e6, Energy::uev)
}

/// Serializes a scenario as config text; `parse_str` inverts it exactly.
pub fn to_toml(s: &Scenario) -> String {
    use crate::materials::Shape;
    let mut out = String::new();
    let mut line = |l: String| {
        out.push_str(&l);
        out.push('\n');
    };
    line(format!("name = {:?}", s.name));
    line("[metal]".into());
    line(format!("eps_inf = {}", num(s.metal.eps_inf)));
    line(format!("omega_p_ev = {}", num(s.metal.omega_p.0)));
    line(format!("gamma_o_ev = {}", num(s.metal.gamma_o.0)));
    line("[environment]".into());
    line(format!("eps_b = {}", num(s.environment.eps_b)));
    line("[particle]".into());
    match s.particle.shape {
        Shape::Sphere { radius } => {
            line("shape = \"sphere\"".into());
            line(format!("radius_nm = {}", num(radius.0)));
        }
        Shape::Ellipsoid { semi_axes } => {
            line("shape = \"ellipsoid\"".into());
            for (k, a) in ["a_nm", "b_nm", "c_nm"].iter().zip(semi_axes) {
                line(format!("{k} = {}", num(a.0)));
            }
        }
    }
    if let Some(e) = &s.emitter {
        line("[emitter]".into());
        line(format!("mu_e_nm = {}", num(e.mu.0)));
        line(format!("distance_nm = {}", num(e.distance.0)));
        line(format!("orientation = \"{}\"", e.orientation.as_str()));
        if let Some(t) = e.theta_deg {
            line(format!("theta_deg = {}", num(t)));
        }
        line(format!("plasmon_detuning_ev = {}", num(e.plasmon_detuning.0)));
    }
    line("[cavity]".into());
    line(format!("q_factor = {}", num(s.cavity.q_factor)));
    line(format!("vc_um3 = {}", num(s.cavity.volume_um3)));
    line(format!("detuning_mev = {}", mev(s.cavity.detuning)));
    let c = &s.couplings;
    line("[couplings]".into());
    line(format!("mode = \"{}\"", c.mode.as_str()));
    for (k, v) in ["sign_g1", "sign_G", "sign_J"].iter().zip(c.signs) {
        line(format!("{k} = {}", num(v)));
    }
    let o = &c.overrides;
    for (k, v) in [
        ("g1_mev", o.g1.map(mev)),
        ("G_mev", o.big_g.map(mev)),
        ("J_uev", o.j.map(uev)),
        ("gamma_r_mev", o.gamma_r.map(mev)),
        ("gamma_s_uev", o.gamma_s.map(uev)),
        ("gamma_m_uev", o.gamma_m.map(uev)),
    ] {
        if let Some(v) = v {
            line(format!("{k} = {v}"));
        }
    }
    if let Some(r) = &c.quench_reference {
        line(format!("quench_ref_distance_nm = {}", num(r.distance.0)));
        line(format!("quench_ref_uev = {}", uev(r.rate)));
    }
    if let Some(t) = &c.targets {
        line(format!("target_splitting_mev = {}", mev(t.splitting)));
        line(format!("target_kappa_mev = {}", mev(t.kappa_narrow)));
    }
    let sw = &s.sweep;
    line("[sweep]".into());
    if let Some((a, b)) = sw.detuning {
        line(format!("detuning_min_ev = {}", num(a)));
        line(format!("detuning_max_ev = {}", num(b)));
    }
    line(format!("points = {}", sw.points));
    line(format!("distance_min_nm = {}", num(sw.distance_nm.0)));
    line(format!("distance_max_nm = {}", num(sw.distance_nm.1)));
    line(format!("distance_points = {}", sw.distance_points));
    line(format!("q_min = {}", num(sw.q.0)));
    line(format!("q_max = {}", num(sw.q.1)));
    line(format!("q_points = {}", sw.q_points));
    let r = &s.run;
    line("[run]".into());
    let drive = match r.drive {
        ModeLabel::PlasmonDipole => "plasmon",
        ModeLabel::Cavity => "cavity",
        ModeLabel::Emitter => "emitter",
    };
    line(format!("drive = \"{drive}\""));
    line(format!("time_points = {}", r.time_points));
    line(format!("time_spans = {}", num(r.time_spans)));
    line(format!(
        "trace_q = [{}]",
        r.trace_q.iter().map(|q| num(*q)).collect::<Vec<_>>().join(", ")
    ));
    out
}
