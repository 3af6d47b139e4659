//! Flat `key = value` run configuration.
//!
//! Grammar: one `key = value` pair per line, keys are dotted identifiers,
//! `#` starts a comment, blank lines are ignored. Lists are comma separated.
//! Unknown or repeated keys are errors. [`RunConfig::to_text`] writes every
//! key in a fixed order, so `parse(to_text(c)) == c`.

use std::collections::BTreeMap;
use std::f64::consts::PI;
use std::fmt::Write as _;
use std::str::FromStr;

use boussinesq::solvers::{IntegratorConfig, Scheme};
use boussinesq::spectral_ops::Grid;
use boussinesq::systems::{canonical_params, validate_params, CaseId, CaseParams};

use crate::error::{invalid, LabError, LabResult};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SystemKind {
    /// `(η, u)` under the `(a, b, c, d)` system.
    Abcd,
    /// `(η, v)` with `v = (1 + εη)u`; requires `c = −1`, `a = b = d = 0`.
    EtaV,
}

impl SystemKind {
    pub fn name(&self) -> &'static str {
        match self {
            SystemKind::Abcd => "abcd",
            SystemKind::EtaV => "eta_v",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum CaseSelector {
    Tag(u8),
    Explicit { a: f64, b: f64, c: f64, d: f64, tau: f64 },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Family {
    GaussianHump,
    CosineModes,
    SolitaryLike,
    RandomBandlimited,
}

impl Family {
    pub const ALL: [Family; 4] = [Family::GaussianHump, Family::CosineModes, Family::SolitaryLike, Family::RandomBandlimited];

    pub fn name(&self) -> &'static str {
        match self {
            Family::GaussianHump => "gaussian_hump",
            Family::CosineModes => "cosine_modes",
            Family::SolitaryLike => "solitary_like",
            Family::RandomBandlimited => "random_bandlimited",
        }
    }
}

/// Initial-data recipe; unused fields are ignored by a family.
#[derive(Debug, Clone, PartialEq)]
pub struct DataRecipe {
    pub family: Family,
    pub amplitude: f64,
    pub width: f64,
    /// Integer wavenumbers for `cosine_modes`.
    pub modes: Vec<u32>,
    /// Largest integer wavenumber for `random_bandlimited`.
    pub kmax: u32,
    /// Spectral decay exponent for `random_bandlimited`.
    pub decay: f64,
    pub seed: u64,
    /// Replace a 2D velocity by its gradient part.
    pub curl_free: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub name: String,
    pub system: SystemKind,
    pub case: CaseSelector,
    pub eps: f64,
    pub dim: usize,
    pub n: usize,
    pub length: f64,
    pub data: DataRecipe,
    pub scheme: Scheme,
    pub dt: f64,
    pub t_end: f64,
    pub report_every: usize,
    pub dealias: bool,
    pub growth_factor: f64,
    /// Non-cavitation threshold `H`.
    pub depth_min: f64,
    /// Sobolev index of the reported norms; `None` picks 1.6 in 1D, 2.1 in 2D.
    pub sobolev: Option<f64>,
    pub output_dir: String,
    pub dumps: bool,
    pub sweep_eps: Vec<f64>,
    pub sweep_budget: f64,
    pub sweep_deltas: Vec<f64>,
}

impl RunConfig {
    /// Defaults for everything but the required keys.
    pub fn new(case: CaseSelector, eps: f64, n: usize, dt: f64, t_end: f64) -> RunConfig {
        RunConfig {
            name: "run".into(),
            system: SystemKind::Abcd,
            case,
            eps,
            dim: 1,
            n,
            length: 2.0 * PI,
            data: DataRecipe {
                family: Family::CosineModes,
                amplitude: 0.1,
                width: 1.0,
                modes: vec![1],
                kmax: 8,
                decay: 2.0,
                seed: 0,
                curl_free: false,
            },
            scheme: Scheme::Rk4IntegratingFactor,
            dt,
            t_end,
            report_every: 1,
            dealias: true,
            growth_factor: boussinesq::diagnostics::DEFAULT_GROWTH_FACTOR,
            depth_min: 0.5,
            sobolev: None,
            output_dir: "run".into(),
            dumps: false,
            sweep_eps: Vec::new(),
            sweep_budget: 1.0,
            sweep_deltas: Vec::new(),
        }
    }

    pub fn sobolev_index(&self) -> f64 {
        self.sobolev.unwrap_or(if self.dim == 1 { 1.6 } else { 2.1 })
    }

    pub fn grid(&self) -> LabResult<Grid> {
        Grid::new(self.dim, self.n, self.length).map_err(invalid)
    }

    pub fn integrator(&self) -> LabResult<IntegratorConfig> {
        let c = IntegratorConfig::new(self.scheme, self.dt, self.t_end).map_err(invalid)?;
        if self.report_every == 0 {
            return Err(LabError::Validation("integrator.report_every must be positive".into()));
        }
        Ok(c.report_every(self.report_every))
    }

    /// Validated `(a, b, c, d)` record.
    pub fn params(&self) -> LabResult<CaseParams> {
        let (a, b, c, d, tau) = match self.case {
            CaseSelector::Tag(t) => canonical_params(t)
                .ok_or_else(|| LabError::Validation(format!("no registry case {t}")))?,
            CaseSelector::Explicit { a, b, c, d, tau } => (a, b, c, d, tau),
        };
        let mut p = CaseParams::abcd(a, b, c, d, self.eps, tau);
        if let CaseSelector::Tag(t) = self.case {
            p = p.with_kind(CaseId::Registry(t));
        }
        let p = validate_params(p).map_err(invalid)?;
        if self.system == SystemKind::EtaV && p.registry_tag() != Some(12) {
            return Err(LabError::Validation("system eta_v needs the c = -1 case (registry 12)".into()));
        }
        Ok(p)
    }

    /// Check everything that can be checked without generating data.
    pub fn validate(&self) -> LabResult<()> {
        self.grid()?;
        self.integrator()?;
        self.params()?;
        let positive = [
            ("monitor.growth_factor", self.growth_factor),
            ("monitor.depth_min", self.depth_min),
            ("data.width", self.data.width),
        ];
        for (k, v) in positive {
            if !(v > 0.0 && v.is_finite()) {
                return Err(LabError::Validation(format!("{k} must be positive, got {v}")));
            }
        }
        if !self.data.amplitude.is_finite() || !self.data.decay.is_finite() {
            return Err(LabError::Validation("data coefficients must be finite".into()));
        }
        Ok(())
    }

    pub fn parse(text: &str) -> LabResult<RunConfig> {
        let mut kv = Pairs::read(text)?;
        let case = if kv.has("case.tag") {
            CaseSelector::Tag(kv.req("case.tag")?)
        } else if kv.has("case.a") {
            CaseSelector::Explicit {
                a: kv.req("case.a")?,
                b: kv.req("case.b")?,
                c: kv.req("case.c")?,
                d: kv.req("case.d")?,
                tau: kv.opt("case.tau")?.unwrap_or(0.0),
            }
        } else {
            return Err(LabError::Config("missing case.tag or case.a..case.d".into()));
        };
        let mut c = RunConfig::new(case, kv.req("eps")?, kv.req("grid.n")?, kv.req("integrator.dt")?, kv.req("integrator.t_end")?);
        if let Some(v) = kv.take("name") {
            c.name = v;
        }
        if let Some(v) = kv.take("system") {
            c.system = match v.as_str() {
                "abcd" => SystemKind::Abcd,
                "eta_v" => SystemKind::EtaV,
                _ => return Err(LabError::Config(format!("unknown system `{v}`"))),
            };
        }
        set(&mut c.dim, kv.opt("grid.dim")?);
        set(&mut c.length, kv.opt("grid.length")?);
        if let Some(v) = kv.take("data.family") {
            c.data.family = Family::ALL
                .into_iter()
                .find(|f| f.name() == v)
                .ok_or_else(|| LabError::Config(format!("unknown data family `{v}`")))?;
        }
        set(&mut c.data.amplitude, kv.opt("data.amplitude")?);
        set(&mut c.data.width, kv.opt("data.width")?);
        set(&mut c.data.modes, kv.list("data.modes")?);
        set(&mut c.data.kmax, kv.opt("data.kmax")?);
        set(&mut c.data.decay, kv.opt("data.decay")?);
        set(&mut c.data.seed, kv.opt("data.seed")?);
        set(&mut c.data.curl_free, kv.opt("data.curl_free")?);
        if let Some(v) = kv.take("integrator.scheme") {
            c.scheme = Scheme::parse(&v).ok_or_else(|| LabError::Config(format!("unknown scheme `{v}`")))?;
        }
        set(&mut c.report_every, kv.opt("integrator.report_every")?);
        set(&mut c.dealias, kv.opt("integrator.dealias")?);
        set(&mut c.growth_factor, kv.opt("monitor.growth_factor")?);
        set(&mut c.depth_min, kv.opt("monitor.depth_min")?);
        if let Some(v) = kv.take("monitor.sobolev") {
            c.sobolev = if v == "auto" { None } else { Some(number("monitor.sobolev", &v)?) };
        }
        if let Some(v) = kv.take("output.dir") {
            c.output_dir = v;
        }
        set(&mut c.dumps, kv.opt("output.dumps")?);
        set(&mut c.sweep_eps, kv.list("sweep.eps")?);
        set(&mut c.sweep_budget, kv.opt("sweep.t_budget")?);
        set(&mut c.sweep_deltas, kv.list("sweep.deltas")?);
        kv.finish()?;
        Ok(c)
    }

    pub fn to_text(&self) -> String {
        let mut s = String::new();
        let mut put = |k: &str, v: String| {
            let _ = writeln!(s, "{k} = {v}");
        };
        put("name", self.name.clone());
        put("system", self.system.name().into());
        match self.case {
            CaseSelector::Tag(t) => put("case.tag", t.to_string()),
            CaseSelector::Explicit { a, b, c, d, tau } => {
                put("case.a", f(a));
                put("case.b", f(b));
                put("case.c", f(c));
                put("case.d", f(d));
                put("case.tau", f(tau));
            }
        }
        put("eps", f(self.eps));
        put("grid.dim", self.dim.to_string());
        put("grid.n", self.n.to_string());
        put("grid.length", f(self.length));
        put("data.family", self.data.family.name().into());
        put("data.amplitude", f(self.data.amplitude));
        put("data.width", f(self.data.width));
        put("data.modes", join(&self.data.modes));
        put("data.kmax", self.data.kmax.to_string());
        put("data.decay", f(self.data.decay));
        put("data.seed", self.data.seed.to_string());
        put("data.curl_free", self.data.curl_free.to_string());
        put("integrator.scheme", self.scheme.name().into());
        put("integrator.dt", f(self.dt));
        put("integrator.t_end", f(self.t_end));
        put("integrator.report_every", self.report_every.to_string());
        put("integrator.dealias", self.dealias.to_string());
        put("monitor.growth_factor", f(self.growth_factor));
        put("monitor.depth_min", f(self.depth_min));
        put("monitor.sobolev", self.sobolev.map_or("auto".into(), f));
        put("output.dir", self.output_dir.clone());
        put("output.dumps", self.dumps.to_string());
        put("sweep.eps", join(&self.sweep_eps));
        put("sweep.t_budget", f(self.sweep_budget));
        put("sweep.deltas", join(&self.sweep_deltas));
        s
    }

    /// Ordered `key → value` view of [`RunConfig::to_text`].
    pub fn to_map(&self) -> BTreeMap<String, String> {
        Pairs::read(&self.to_text()).map(|p| p.map).unwrap_or_default()
    }
}

fn f(x: f64) -> String {
    format!("{x:?}")
}

fn join<T: std::fmt::Debug>(xs: &[T]) -> String {
    xs.iter().map(|x| format!("{x:?}")).collect::<Vec<_>>().join(", ")
}

fn set<T>(slot: &mut T, v: Option<T>) {
    if let Some(v) = v {
        *slot = v;
    }
}

fn number<T: FromStr>(key: &str, v: &str) -> LabResult<T> {
    v.parse().map_err(|_| LabError::Config(format!("bad value for {key}: `{v}`")))
}

struct Pairs {
    map: BTreeMap<String, String>,
}

impl Pairs {
    fn read(text: &str) -> LabResult<Pairs> {
        let mut map = BTreeMap::new();
        for (i, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (k, v) = line
                .split_once('=')
                .ok_or_else(|| LabError::Config(format!("line {}: expected `key = value`", i + 1)))?;
            let k = k.trim();
            let valid = !k.is_empty()
                && k.split('.').all(|p| !p.is_empty() && p.chars().all(|c| c.is_ascii_alphanumeric() || c == '_'));
            if !valid {
                return Err(LabError::Config(format!("line {}: bad key `{k}`", i + 1)));
            }
            if map.insert(k.to_string(), v.trim().to_string()).is_some() {
                return Err(LabError::Config(format!("line {}: repeated key `{k}`", i + 1)));
            }
        }
        Ok(Pairs { map })
    }

    fn has(&self, k: &str) -> bool {
        self.map.contains_key(k)
    }

    fn take(&mut self, k: &str) -> Option<String> {
        self.map.remove(k)
    }

    fn opt<T: FromStr>(&mut self, k: &str) -> LabResult<Option<T>> {
        self.take(k).map(|v| number(k, &v)).transpose()
    }

    fn req<T: FromStr>(&mut self, k: &str) -> LabResult<T> {
        self.opt(k)?.ok_or_else(|| LabError::Config(format!("missing key `{k}`")))
    }

    fn list<T: FromStr>(&mut self, k: &str) -> LabResult<Option<Vec<T>>> {
        let Some(v) = self.take(k) else { return Ok(None) };
        if v.is_empty() {
            return Ok(Some(Vec::new()));
        }
        v.split(',').map(|x| number(k, x.trim())).collect::<LabResult<Vec<T>>>().map(Some)
    }

    fn finish(self) -> LabResult<()> {
        match self.map.keys().next() {
            Some(k) => Err(LabError::Config(format!("unknown key `{k}`"))),
            None => Ok(()),
        }
    }
}

/// Parse a comma-separated list of numbers given on the command line.
pub fn parse_list(s: &str) -> LabResult<Vec<f64>> {
    s.split(',').filter(|x| !x.trim().is_empty()).map(|x| number("list", x.trim())).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    const SAMPLE: &str = "
        # small-data case 7 run
        case.tag = 7
        eps = 0.1
        grid.n = 64
        integrator.dt = 0.01
        integrator.t_end = 1
        data.family = random_bandlimited   # power-law spectrum
        data.seed = 42
        sweep.eps = 0.1, 0.05, 0.025
    ";

    #[test]
    fn parses_and_defaults() {
        let c = RunConfig::parse(SAMPLE).unwrap();
        assert_eq!(c.case, CaseSelector::Tag(7));
        assert_eq!(c.data.family, Family::RandomBandlimited);
        assert_eq!(c.data.seed, 42);
        assert_eq!(c.sweep_eps, vec![0.1, 0.05, 0.025]);
        assert_eq!(c.length, 2.0 * PI);
        assert_eq!(c.sobolev_index(), 1.6);
        c.validate().unwrap();
    }

    #[test]
    fn text_round_trip() {
        let mut c = RunConfig::parse(SAMPLE).unwrap();
        c.case = CaseSelector::Explicit { a: -1.0 / 6.0, b: 0.5, c: -1.0 / 6.0, d: 1.0 / 6.0, tau: 0.0 };
        c.sobolev = Some(2.1);
        c.data.modes = vec![1, 3];
        assert_eq!(RunConfig::parse(&c.to_text()).unwrap(), c);
    }

    #[test]
    fn grammar_errors_are_config_errors() {
        for bad in ["eps 0.1", "case.tag = 7\ncase.tag = 8", "case.tag = 7\neps = x", "case.tag = 7\nbogus = 1", "eps = 0.1"] {
            assert_eq!(RunConfig::parse(bad).unwrap_err().exit_code(), 2, "{bad}");
        }
    }

    #[test]
    fn constraint_violation_is_a_validation_error() {
        let text = SAMPLE.replace("case.tag = 7", "case.a = 1\ncase.b = 0\ncase.c = 0\ncase.d = 0");
        let c = RunConfig::parse(&text).unwrap();
        let e = c.validate().unwrap_err();
        assert_eq!(e.exit_code(), 3);
        assert!(e.to_string().contains("constraint"));
    }

    #[test]
    fn eta_v_needs_case_twelve() {
        let mut c = RunConfig::parse(SAMPLE).unwrap();
        c.system = SystemKind::EtaV;
        assert_eq!(c.validate().unwrap_err().exit_code(), 3);
        c.case = CaseSelector::Tag(12);
        c.validate().unwrap();
    }
}
