//! Flat `key = value` experiment files with dotted sections.
//!
//! ```text
//! # Example 2
//! scene.name = kite
//! scene.curves = kite(0, 0, 1)
//! scene.bc = clamped
//! scene.kappa = 2pi
//! imaging.indicators = all
//! noise.levels = 0, 0.05, 0.1
//! ```

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use crate::error::{Error, Result};
use crate::forward::{Backend, BoundaryCondition, MfsConfig};
use crate::geometry::{ArrayGeometry, Curve, CurveShape};
use crate::imaging::{GridSpec, IndicatorId};
use crate::specfun::WaveParams;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Normalization {
    /// Divide by the signed maximum.
    Signed,
    /// Divide by max |I|.
    Abs,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentConfig {
    /// Used in output file names.
    pub name: String,
    pub curves: Vec<Curve>,
    pub bc: BoundaryCondition,
    pub params: WaveParams,
    pub array: ArrayGeometry,
    pub indicators: Vec<IndicatorId>,
    pub grid: GridSpec,
    pub normalization: Normalization,
    pub noise_levels: Vec<f64>,
    pub seed: u64,
    pub output_dir: PathBuf,
    pub backend: Backend,
}

const KEYS: &[&str] = &[
    "scene.name",
    "scene.curves",
    "scene.bc",
    "scene.kappa",
    "scene.nu",
    "array.receiver_radius",
    "array.source_radius",
    "array.receivers",
    "array.sources",
    "array.directions",
    "imaging.indicators",
    "imaging.bounds",
    "imaging.nx",
    "imaging.ny",
    "imaging.normalization",
    "noise.levels",
    "noise.seed",
    "output.dir",
    "forward.backend",
    "forward.mfs.offset",
    "forward.mfs.sources",
    "forward.mfs.collocation",
];

impl ExperimentConfig {
    fn base(name: &str, curves: Vec<Curve>) -> Self {
        Self {
            name: name.into(),
            curves,
            bc: BoundaryCondition::Clamped,
            params: WaveParams::new(2.0 * std::f64::consts::PI, WaveParams::DEFAULT_NU).expect("valid defaults"),
            array: ArrayGeometry::default(),
            indicators: IndicatorId::all(),
            grid: GridSpec::default(),
            normalization: Normalization::Signed,
            noise_levels: vec![0.0],
            seed: 1,
            output_dir: PathBuf::from("out"),
            backend: Backend::Auto,
        }
    }

    /// Unit circle at the origin.
    pub fn example1() -> Self {
        Self::base("circle", vec![Curve::circle([0.0, 0.0], 1.0).expect("valid")])
    }

    /// Kite at the origin, three noise levels.
    pub fn example2() -> Self {
        let mut c = Self::base("kite", vec![Curve::kite([0.0, 0.0], 1.0).expect("valid")]);
        c.noise_levels = vec![0.0, 0.05, 0.10];
        c
    }

    /// Circle around (−2, −2) and a kite shifted by (2, 2).
    pub fn example3() -> Self {
        Self::base(
            "two",
            vec![Curve::circle([-2.0, -2.0], 1.0).expect("valid"), Curve::kite([2.0, 2.0], 1.0).expect("valid")],
        )
    }

    pub fn from_file(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Self::parse(&text)
    }

    /// Parse a config; keys left out keep the Example 1 defaults.
    pub fn parse(text: &str) -> Result<Self> {
        let mut map: BTreeMap<&str, (usize, &str)> = BTreeMap::new();
        for (i, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (k, v) = line
                .split_once('=')
                .ok_or_else(|| Error::Config(format!("line {}: expected 'key = value'", i + 1)))?;
            let k = k.trim();
            if !KEYS.contains(&k) {
                return Err(Error::Config(format!("line {}: unknown key '{k}'", i + 1)));
            }
            if map.insert(k, (i + 1, v.trim())).is_some() {
                return Err(Error::Config(format!("line {}: key '{k}' given twice", i + 1)));
            }
        }
        let mut c = Self::example1();
        let at = |k: &str, e: Error| {
            let line = map.get(k).map(|x| x.0).unwrap_or(0);
            Error::Config(format!("line {line}: {k}: {}", e.to_string().trim_start_matches("config error: ")))
        };
        let get = |k: &str| map.get(k).map(|x| x.1);
        if let Some(v) = get("scene.name") {
            if v.is_empty() || !v.chars().all(|ch| ch.is_ascii_alphanumeric() || ch == '-' || ch == '_') {
                return Err(at("scene.name", Error::Config("use letters, digits, '-' or '_'".into())));
            }
            c.name = v.to_string();
        }
        if let Some(v) = get("scene.curves") {
            c.curves = parse_curves(v).map_err(|e| at("scene.curves", e))?;
        }
        if let Some(v) = get("scene.bc") {
            c.bc = BoundaryCondition::parse(v).map_err(|e| at("scene.bc", e))?;
        }
        let kappa = match get("scene.kappa") {
            Some(v) => parse_real(v).map_err(|e| at("scene.kappa", e))?,
            None => c.params.kappa,
        };
        let nu = match get("scene.nu") {
            Some(v) => parse_real(v).map_err(|e| at("scene.nu", e))?,
            None => c.params.nu,
        };
        c.params = WaveParams::new(kappa, nu).map_err(|e| at("scene.kappa", e))?;

        let real = |k: &str, d: f64| get(k).map(|v| parse_real(v).map_err(|e| at(k, e))).unwrap_or(Ok(d));
        let count = |k: &str, d: usize| get(k).map(|v| parse_count(v).map_err(|e| at(k, e))).unwrap_or(Ok(d));
        let a = c.array;
        c.array = ArrayGeometry::new(
            real("array.receiver_radius", a.receiver_radius)?,
            real("array.source_radius", a.source_radius)?,
            count("array.receivers", a.receivers)?,
            count("array.sources", a.sources)?,
            count("array.directions", a.directions)?,
        )
        .map_err(|e| at("array.receivers", e))?;

        if let Some(v) = get("imaging.indicators") {
            c.indicators = parse_indicators(v).map_err(|e| at("imaging.indicators", e))?;
        }
        let bounds = match get("imaging.bounds") {
            Some(v) => {
                let b = parse_list(v).map_err(|e| at("imaging.bounds", e))?;
                if b.len() != 4 {
                    return Err(at("imaging.bounds", Error::Config("expected xmin, xmax, ymin, ymax".into())));
                }
                [b[0], b[1], b[2], b[3]]
            }
            None => c.grid.bounds,
        };
        c.grid = GridSpec::new(bounds, count("imaging.nx", c.grid.nx)?, count("imaging.ny", c.grid.ny)?)
            .map_err(|e| at("imaging.bounds", e))?;
        if let Some(v) = get("imaging.normalization") {
            c.normalization = match v {
                "signed" => Normalization::Signed,
                "abs" => Normalization::Abs,
                other => {
                    return Err(at("imaging.normalization", Error::Config(format!("'{other}' is not signed or abs"))))
                }
            };
        }
        if let Some(v) = get("noise.levels") {
            c.noise_levels = parse_list(v).map_err(|e| at("noise.levels", e))?;
        }
        if let Some(v) = get("noise.seed") {
            c.seed = v.parse().map_err(|_| at("noise.seed", Error::Config(format!("'{v}' is not a 64-bit seed"))))?;
        }
        if let Some(v) = get("output.dir") {
            c.output_dir = PathBuf::from(v);
        }
        let mut mfs = MfsConfig::default();
        mfs.offset = real("forward.mfs.offset", mfs.offset)?;
        mfs.sources = count("forward.mfs.sources", mfs.sources)?;
        mfs.collocation = count("forward.mfs.collocation", mfs.collocation)?;
        c.backend = match get("forward.backend").unwrap_or("auto") {
            "auto" => Backend::Auto,
            "modal" => Backend::Modal,
            "mfs" => Backend::Mfs(mfs),
            other => return Err(at("forward.backend", Error::Config(format!("'{other}' is not auto, modal or mfs")))),
        };
        c.validate()?;
        Ok(c)
    }

    /// Cross-field checks: grid inside the arrays, nonempty lists, valid noise levels.
    pub fn validate(&self) -> Result<()> {
        self.grid.check_inside(&self.array).map_err(|e| Error::Config(e.to_string()))?;
        if self.indicators.is_empty() {
            return Err(Error::Config("no indicators requested".into()));
        }
        if self.noise_levels.is_empty() {
            return Err(Error::Config("no noise levels given".into()));
        }
        if let Some(d) = self.noise_levels.iter().find(|d| !(**d >= 0.0 && d.is_finite())) {
            return Err(Error::Config(format!("noise level {d} must be nonnegative")));
        }
        Ok(())
    }

    /// Canonical text form; `parse(to_text())` gives back the same config.
    pub fn to_text(&self) -> String {
        let mut s = String::new();
        let a = &self.array;
        let g = &self.grid;
        let list = |v: &[f64]| v.iter().map(|x| format!("{x:?}")).collect::<Vec<_>>().join(", ");
        let _ = writeln!(s, "scene.name = {}", self.name);
        let _ = writeln!(s, "scene.curves = {}", self.curves.iter().map(curve_text).collect::<Vec<_>>().join(" "));
        let _ = writeln!(s, "scene.bc = {}", self.bc.name());
        let _ = writeln!(s, "scene.kappa = {:?}", self.params.kappa);
        let _ = writeln!(s, "scene.nu = {:?}", self.params.nu);
        let _ = writeln!(s, "array.receiver_radius = {:?}", a.receiver_radius);
        let _ = writeln!(s, "array.source_radius = {:?}", a.source_radius);
        let _ = writeln!(s, "array.receivers = {}", a.receivers);
        let _ = writeln!(s, "array.sources = {}", a.sources);
        let _ = writeln!(s, "array.directions = {}", a.directions);
        let ids: Vec<String> = self.indicators.iter().map(|j| j.get().to_string()).collect();
        let _ = writeln!(s, "imaging.indicators = {}", ids.join(", "));
        let _ = writeln!(s, "imaging.bounds = {}", list(&g.bounds));
        let _ = writeln!(s, "imaging.nx = {}", g.nx);
        let _ = writeln!(s, "imaging.ny = {}", g.ny);
        let norm = match self.normalization {
            Normalization::Signed => "signed",
            Normalization::Abs => "abs",
        };
        let _ = writeln!(s, "imaging.normalization = {norm}");
        let _ = writeln!(s, "noise.levels = {}", list(&self.noise_levels));
        let _ = writeln!(s, "noise.seed = {}", self.seed);
        let _ = writeln!(s, "output.dir = {}", self.output_dir.display());
        match self.backend {
            Backend::Auto => {
                let _ = writeln!(s, "forward.backend = auto");
            }
            Backend::Modal => {
                let _ = writeln!(s, "forward.backend = modal");
            }
            Backend::Mfs(m) => {
                let _ = writeln!(s, "forward.backend = mfs");
                let _ = writeln!(s, "forward.mfs.offset = {:?}", m.offset);
                let _ = writeln!(s, "forward.mfs.sources = {}", m.sources);
                let _ = writeln!(s, "forward.mfs.collocation = {}", m.collocation);
            }
        }
        s
    }
}

fn curve_text(c: &Curve) -> String {
    let body = match &c.shape {
        CurveShape::Circle { center, radius } => format!("circle({:?}, {:?}, {:?})", center[0], center[1], radius),
        CurveShape::Kite { shift, scale } => format!("kite({:?}, {:?}, {:?})", shift[0], shift[1], scale),
        CurveShape::TrigPolynomial { center, cos, sin } => {
            let mut v = vec![center[0], center[1], cos[0]];
            for k in 1..cos.len().max(sin.len() + 1) {
                v.push(cos.get(k).copied().unwrap_or(0.0));
                v.push(sin.get(k - 1).copied().unwrap_or(0.0));
            }
            format!("trig({})", v.iter().map(|x| format!("{x:?}")).collect::<Vec<_>>().join(", "))
        }
    };
    if c.reversed {
        format!("reversed-{body}")
    } else {
        body
    }
}

/// A real number, optionally written as a multiple of π: `6.28`, `2pi`, `2*pi`, `pi`.
pub fn parse_real(s: &str) -> Result<f64> {
    let t = s.trim();
    let bad = || Error::Config(format!("'{t}' is not a number"));
    let v = if let Some(head) = t.strip_suffix("pi") {
        let head = head.trim().trim_end_matches('*').trim();
        let m = if head.is_empty() { 1.0 } else { head.parse::<f64>().map_err(|_| bad())? };
        m * std::f64::consts::PI
    } else {
        t.parse::<f64>().map_err(|_| bad())?
    };
    if !v.is_finite() {
        return Err(bad());
    }
    Ok(v)
}

fn parse_count(s: &str) -> Result<usize> {
    s.trim().parse::<usize>().map_err(|_| Error::Config(format!("'{}' is not a count", s.trim())))
}

fn parse_list(s: &str) -> Result<Vec<f64>> {
    s.split(',').map(parse_real).collect()
}

fn parse_indicators(s: &str) -> Result<Vec<IndicatorId>> {
    if s.trim() == "all" {
        return Ok(IndicatorId::all());
    }
    let mut out = Vec::new();
    for part in s.split(',') {
        let j = parse_count(part)?;
        let id = IndicatorId::new(j).map_err(|e| Error::Config(e.to_string()))?;
        if out.contains(&id) {
            return Err(Error::Config(format!("indicator {j} listed twice")));
        }
        out.push(id);
    }
    Ok(out)
}

/// `circle`, `kite`, `circle(cx, cy, r)`, `kite(sx, sy, scale)`,
/// `trig(cx, cy, a0, a1, b1, a2, b2, ...)`, separated by spaces or `;`.
/// A `reversed-` prefix traverses the curve clockwise.
pub fn parse_curves(s: &str) -> Result<Vec<Curve>> {
    let mut out = Vec::new();
    let mut rest = s.trim();
    while !rest.is_empty() {
        let name_end = rest.find(|ch: char| !(ch.is_ascii_alphabetic() || ch == '-')).unwrap_or(rest.len());
        let name = &rest[..name_end];
        rest = rest[name_end..].trim_start();
        let args = if rest.starts_with('(') {
            let close = rest.find(')').ok_or_else(|| Error::Config(format!("missing ')' after {name}")))?;
            let a = parse_list(&rest[1..close])?;
            rest = &rest[close + 1..];
            a
        } else {
            Vec::new()
        };
        rest = rest.trim_start_matches(|ch: char| ch.is_whitespace() || ch == ';');
        let (reversed, base) = match name.strip_prefix("reversed-") {
            Some(b) => (true, b),
            None => (false, name),
        };
        let curve = match (base, args.as_slice()) {
            ("circle", []) => Curve::circle([0.0, 0.0], 1.0)?,
            ("circle", [x, y, r]) => Curve::circle([*x, *y], *r)?,
            ("kite", []) => Curve::kite([0.0, 0.0], 1.0)?,
            ("kite", [x, y, s]) => Curve::kite([*x, *y], *s)?,
            ("trig", [x, y, a0, tail @ ..]) if tail.len() % 2 == 0 => {
                let mut cos = vec![*a0];
                let mut sin = Vec::new();
                for pair in tail.chunks(2) {
                    cos.push(pair[0]);
                    sin.push(pair[1]);
                }
                Curve::trig_polynomial([*x, *y], cos, sin)?
            }
            _ => return Err(Error::Config(format!("cannot read curve '{name}' with {} arguments", args.len()))),
        };
        out.push(if reversed { curve.reversed() } else { curve });
    }
    Ok(out)
}
