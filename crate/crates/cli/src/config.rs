//! Line-oriented `key = value` experiment configuration.
//!
//! ```text
//! # top level
//! scheme = bwdd
//! model = state
//! power = 1e-3          # W
//! wavelength = 633e-9   # m
//! window = 1e-6         # s
//! samples = 100000
//! seed = 42
//!
//! [bwdd]
//! p = 0.51
//! ```
//!
//! Top-level keys: `scheme`, `model`, `power`, `wavelength`, `window`,
//! `samples`, `seed` (all required), `squeeze`, `squeeze_port` (`a`/`b`),
//! `squeeze_quadrature` (`1`/`2`). Sections: `[bwdd] p q`,
//! `[mirror] reflectance reflection_phase_pi`, `[michelson] quadrature`,
//! `[centroid] pixels`, `[noise] technical_rms dark_nep dark_current
//! dark_preset`, `[sweep] powers`.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use shotnoise_core::{
    DarkNoise, Error as CoreError, ExperimentConfig, Imbalance, Model, NoiseSpec, Port, Quadrature,
    Scheme, SchemeKind, SplitterSpec, SqueezeSpec,
};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
#[error("line {line}: {message}")]
pub struct ConfigError {
    pub line: usize,
    pub message: String,
}

fn err(line: usize, message: impl Into<String>) -> ConfigError {
    ConfigError {
        line,
        message: message.into(),
    }
}

const REQUIRED: [&str; 7] = [
    "scheme",
    "model",
    "power",
    "wavelength",
    "window",
    "samples",
    "seed",
];

const KNOWN: &[(&str, &[&str])] = &[
    (
        "",
        &[
            "scheme",
            "model",
            "power",
            "wavelength",
            "window",
            "samples",
            "seed",
            "squeeze",
            "squeeze_port",
            "squeeze_quadrature",
        ],
    ),
    ("bwdd", &["p", "q"]),
    ("mirror", &["reflectance", "reflection_phase_pi"]),
    ("michelson", &["quadrature"]),
    ("centroid", &["pixels"]),
    (
        "noise",
        &["technical_rms", "dark_nep", "dark_current", "dark_preset"],
    ),
    ("sweep", &["powers"]),
];

/// A validated configuration document.
#[derive(Debug, Clone, PartialEq)]
pub struct ParsedConfig {
    pub experiment: ExperimentConfig,
    /// Powers listed under `[sweep]`, if any.
    pub sweep_powers: Option<Vec<f64>>,
    /// Unknown keys skipped in lenient mode.
    pub warnings: Vec<String>,
}

struct Entry {
    value: String,
    line: usize,
}

struct Document {
    entries: BTreeMap<(String, String), Entry>,
    last_line: usize,
}

impl Document {
    fn get(&self, section: &str, key: &str) -> Option<&Entry> {
        self.entries.get(&(section.to_string(), key.to_string()))
    }

    fn required(&self, key: &str) -> Result<&Entry, ConfigError> {
        self.get("", key)
            .ok_or_else(|| err(self.last_line, format!("missing required key `{key}`")))
    }

    fn line_of(&self, section: &str, key: &str) -> usize {
        self.get(section, key).map_or(self.last_line, |e| e.line)
    }

    fn parse<T: std::str::FromStr>(
        &self,
        section: &str,
        key: &str,
        what: &str,
    ) -> Result<Option<T>, ConfigError> {
        match self.get(section, key) {
            None => Ok(None),
            Some(e) => e
                .value
                .parse::<T>()
                .map(Some)
                .map_err(|_| err(e.line, format!("`{key}` must be {what}, got `{}`", e.value))),
        }
    }
}

fn tokenize(text: &str, lenient: bool) -> Result<(Document, Vec<String>), ConfigError> {
    let mut entries = BTreeMap::new();
    let mut warnings = Vec::new();
    let mut section = String::new();
    let mut last_line = 0;
    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        last_line = line;
        let content = raw.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        if let Some(rest) = content.strip_prefix('[') {
            let name = rest
                .strip_suffix(']')
                .ok_or_else(|| err(line, format!("malformed section header `{content}`")))?
                .trim()
                .to_ascii_lowercase();
            if !KNOWN.iter().any(|(s, _)| *s == name) {
                let msg = format!("unknown section `[{name}]`");
                if lenient {
                    warnings.push(format!("line {line}: {msg}"));
                } else {
                    return Err(err(line, msg));
                }
            }
            section = name;
            continue;
        }
        let (key, value) = content
            .split_once('=')
            .ok_or_else(|| err(line, format!("expected `key = value`, got `{content}`")))?;
        let key = key.trim().to_ascii_lowercase();
        let value = value.trim().to_string();
        if key.is_empty() {
            return Err(err(line, "empty key"));
        }
        let known = KNOWN
            .iter()
            .find(|(s, _)| *s == section)
            .is_some_and(|(_, keys)| keys.contains(&key.as_str()));
        if !known {
            let msg = if section.is_empty() {
                format!("unknown key `{key}`")
            } else {
                format!("unknown key `{key}` in [{section}]")
            };
            if lenient {
                warnings.push(format!("line {line}: {msg}"));
                continue;
            }
            return Err(err(line, msg));
        }
        let slot = (section.clone(), key.clone());
        if let Some(prev) = entries.get(&slot) {
            let prev: &Entry = prev;
            return Err(err(
                line,
                format!("duplicate key `{key}` (first set on line {})", prev.line),
            ));
        }
        entries.insert(slot, Entry { value, line });
    }
    Ok((
        Document {
            entries,
            last_line: last_line.max(1),
        },
        warnings,
    ))
}

fn parse_bool(value: &str) -> Option<bool> {
    match value.to_ascii_lowercase().as_str() {
        "true" | "yes" | "1" => Some(true),
        "false" | "no" | "0" => Some(false),
        _ => None,
    }
}

fn scheme_from(doc: &Document, kind: SchemeKind) -> Result<Scheme, ConfigError> {
    let quadrature = |doc: &Document| -> Result<Quadrature, ConfigError> {
        match doc.parse::<u8>("michelson", "quadrature", "1 or 2")? {
            None => Ok(Quadrature::First),
            Some(q) => Quadrature::from_index(q)
                .map_err(|e| err(doc.line_of("michelson", "quadrature"), e.to_string())),
        }
    };
    Ok(match kind {
        SchemeKind::Direct => Scheme::Direct,
        SchemeKind::Bhd => Scheme::Bhd,
        SchemeKind::BwddIndependent => Scheme::BwddIndependent,
        SchemeKind::Bwdd => {
            let p = doc.parse::<f64>("bwdd", "p", "a number")?;
            let q = doc.parse::<f64>("bwdd", "q", "a number")?;
            let (p, q) = match (p, q) {
                (None, None) => (0.5, 0.5),
                (Some(p), None) => (p, 1.0 - p),
                (None, Some(q)) => (1.0 - q, q),
                (Some(p), Some(q)) => (p, q),
            };
            let line = doc.line_of("bwdd", "p").min(doc.line_of("bwdd", "q"));
            Scheme::Bwdd(Imbalance::new(p, q).map_err(|e| err(line, e.to_string()))?)
        }
        SchemeKind::MirrorBwdd => {
            let r = doc
                .parse::<f64>("mirror", "reflectance", "a number")?
                .unwrap_or(Scheme::DEFAULT_MIRROR_REFLECTANCE);
            let mirror = SplitterSpec::from_reflectance(r)
                .map_err(|e| err(doc.line_of("mirror", "reflectance"), e.to_string()))?;
            let reflection_phase_pi = match doc.get("mirror", "reflection_phase_pi") {
                None => true,
                Some(e) => parse_bool(&e.value).ok_or_else(|| {
                    err(
                        e.line,
                        format!(
                            "`reflection_phase_pi` must be true or false, got `{}`",
                            e.value
                        ),
                    )
                })?,
            };
            Scheme::MirrorBwdd {
                mirror,
                reflection_phase_pi,
            }
        }
        SchemeKind::MichelsonFree => Scheme::MichelsonFree {
            quadrature: quadrature(doc)?,
        },
        SchemeKind::MichelsonAnchored => Scheme::MichelsonAnchored {
            quadrature: quadrature(doc)?,
        },
        SchemeKind::Centroid => {
            let pixels = doc
                .parse::<usize>("centroid", "pixels", "a pixel count")?
                .unwrap_or(Scheme::DEFAULT_CENTROID_PIXELS);
            Scheme::centroid(pixels)
                .map_err(|e| err(doc.line_of("centroid", "pixels"), e.to_string()))?
        }
    })
}

fn noise_from(doc: &Document) -> Result<NoiseSpec, ConfigError> {
    let technical_rms = doc
        .parse::<f64>("noise", "technical_rms", "a number")?
        .unwrap_or(0.0);
    let nep = doc.parse::<f64>("noise", "dark_nep", "a number (W/√Hz)")?;
    let current = doc.parse::<f64>("noise", "dark_current", "a number (A/√Hz)")?;
    let preset = doc.get("noise", "dark_preset");
    let set = [nep.is_some(), current.is_some(), preset.is_some()]
        .iter()
        .filter(|x| **x)
        .count();
    if set > 1 {
        return Err(err(
            doc.line_of("noise", "dark_nep")
                .min(doc.line_of("noise", "dark_current"))
                .min(doc.line_of("noise", "dark_preset")),
            "set at most one of dark_nep, dark_current, dark_preset",
        ));
    }
    let dark = if let Some(w) = nep {
        Some(DarkNoise::Nep { watts_per_rt_hz: w })
    } else if let Some(a) = current {
        Some(DarkNoise::Current { amps_per_rt_hz: a })
    } else if let Some(e) = preset {
        Some(match e.value.to_ascii_lowercase().as_str() {
            "newfocus-1807" | "newfocus_1807" => DarkNoise::NEWFOCUS_1807,
            "newfocus-2007" | "newfocus_2007" => DarkNoise::NEWFOCUS_2007,
            other => {
                return Err(err(
                    e.line,
                    format!("unknown dark_preset `{other}` (newfocus-1807, newfocus-2007)"),
                ))
            }
        })
    } else {
        None
    };
    let spec = NoiseSpec {
        technical_rms,
        dark,
    };
    spec.validate()
        .map_err(|e| err(doc.line_of("noise", "technical_rms"), e.to_string()))?;
    Ok(spec)
}

/// Parses and validates a configuration document.
///
/// Unknown keys and sections are errors unless `lenient`, in which case they
/// are skipped and reported in [`ParsedConfig::warnings`].
pub fn parse_config(text: &str, lenient: bool) -> Result<ParsedConfig, ConfigError> {
    let (doc, warnings) = tokenize(text, lenient)?;
    for key in REQUIRED {
        doc.required(key)?;
    }
    let kind_entry = doc.required("scheme")?;
    let kind: SchemeKind = kind_entry
        .value
        .parse()
        .map_err(|e: CoreError| err(kind_entry.line, e.to_string()))?;
    let model_entry = doc.required("model")?;
    let model: Model = model_entry
        .value
        .parse()
        .map_err(|e: CoreError| err(model_entry.line, e.to_string()))?;
    let number = |key: &str, what: &str| -> Result<f64, ConfigError> {
        Ok(doc
            .parse::<f64>("", key, what)?
            .expect("required key present"))
    };
    let power_watts = number("power", "a power in watts")?;
    let wavelength_m = number("wavelength", "a wavelength in metres")?;
    let window_s = number("window", "a window in seconds")?;
    let samples = doc
        .parse::<usize>("", "samples", "a sample count")?
        .expect("required key present");
    let seed = doc
        .parse::<u64>("", "seed", "an unsigned 64-bit integer")?
        .expect("required key present");

    let squeeze_parameter = doc.parse::<f64>("", "squeeze", "a number")?.unwrap_or(0.0);
    let port = match doc.get("", "squeeze_port") {
        None => Port::B,
        Some(e) => match e.value.to_ascii_lowercase().as_str() {
            "a" => Port::A,
            "b" => Port::B,
            _ => {
                return Err(err(
                    e.line,
                    format!("`squeeze_port` must be a or b, got `{}`", e.value),
                ))
            }
        },
    };
    let squeeze_quadrature = match doc.parse::<u8>("", "squeeze_quadrature", "1 or 2")? {
        None => Quadrature::First,
        Some(q) => Quadrature::from_index(q)
            .map_err(|e| err(doc.line_of("", "squeeze_quadrature"), e.to_string()))?,
    };

    let experiment = ExperimentConfig {
        scheme: scheme_from(&doc, kind)?,
        model,
        power_watts,
        wavelength_m,
        window_s,
        samples,
        seed,
        squeeze: SqueezeSpec {
            parameter: squeeze_parameter,
            port,
            quadrature: squeeze_quadrature,
        },
        noise: noise_from(&doc)?,
    };
    validate(&doc, &experiment)?;

    let sweep_powers = match doc.get("sweep", "powers") {
        None => None,
        Some(e) => Some(
            e.value
                .split(',')
                .map(|p| {
                    p.trim()
                        .parse::<f64>()
                        .ok()
                        .filter(|p| p.is_finite() && *p >= 0.0)
                        .ok_or_else(|| err(e.line, format!("bad sweep power `{}`", p.trim())))
                })
                .collect::<Result<Vec<_>, _>>()?,
        ),
    };

    Ok(ParsedConfig {
        experiment,
        sweep_powers,
        warnings,
    })
}

fn validate(doc: &Document, cfg: &ExperimentConfig) -> Result<(), ConfigError> {
    let line_for = |keys: &[&str]| {
        keys.iter()
            .filter_map(|k| doc.get("", k).map(|e| e.line))
            .min()
            .unwrap_or(doc.last_line)
    };
    if let Err(e) = shotnoise_core::units::photon_flux(cfg.power_watts, cfg.wavelength_m) {
        return Err(err(line_for(&["power", "wavelength"]), e.to_string()));
    }
    if let Err(e) = cfg.mean_photons() {
        return Err(err(line_for(&["window"]), e.to_string()));
    }
    if cfg.samples < shotnoise_core::types::MIN_SAMPLES {
        return Err(err(
            line_for(&["samples"]),
            format!(
                "samples must be at least {}, got {}",
                shotnoise_core::types::MIN_SAMPLES,
                cfg.samples
            ),
        ));
    }
    cfg.validate().map_err(|e| {
        let line = match e {
            CoreError::UnsupportedCombination(_) => line_for(&["squeeze"]),
            _ => doc.last_line,
        };
        err(line, e.to_string())
    })
}

/// Canonical text form of a configuration; parsing it yields the same values.
pub fn render_config(cfg: &ExperimentConfig, sweep_powers: Option<&[f64]>) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "scheme = {}", cfg.scheme.name());
    let _ = writeln!(out, "model = {}", cfg.model.name());
    let _ = writeln!(out, "power = {:e}", cfg.power_watts);
    let _ = writeln!(out, "wavelength = {:e}", cfg.wavelength_m);
    let _ = writeln!(out, "window = {:e}", cfg.window_s);
    let _ = writeln!(out, "samples = {}", cfg.samples);
    let _ = writeln!(out, "seed = {}", cfg.seed);
    if cfg.squeeze.is_active() {
        let _ = writeln!(out, "squeeze = {:e}", cfg.squeeze.parameter);
        let port = match cfg.squeeze.port {
            Port::A => "a",
            Port::B => "b",
        };
        let _ = writeln!(out, "squeeze_port = {port}");
        let _ = writeln!(
            out,
            "squeeze_quadrature = {}",
            cfg.squeeze.quadrature.index()
        );
    }
    match cfg.scheme {
        Scheme::Bwdd(imb) => {
            let _ = write!(out, "\n[bwdd]\np = {:e}\nq = {:e}\n", imb.p(), imb.q());
        }
        Scheme::MirrorBwdd {
            mirror,
            reflection_phase_pi,
        } => {
            let _ = write!(
                out,
                "\n[mirror]\nreflectance = {:e}\nreflection_phase_pi = {reflection_phase_pi}\n",
                mirror.reflectance()
            );
        }
        Scheme::MichelsonFree { quadrature } | Scheme::MichelsonAnchored { quadrature } => {
            let _ = write!(out, "\n[michelson]\nquadrature = {}\n", quadrature.index());
        }
        Scheme::Centroid { pixels } => {
            let _ = write!(out, "\n[centroid]\npixels = {pixels}\n");
        }
        _ => {}
    }
    if !cfg.noise.is_quiet() {
        let _ = write!(
            out,
            "\n[noise]\ntechnical_rms = {:e}\n",
            cfg.noise.technical_rms
        );
        match cfg.noise.dark {
            Some(DarkNoise::Nep { watts_per_rt_hz }) => {
                let _ = writeln!(out, "dark_nep = {watts_per_rt_hz:e}");
            }
            Some(DarkNoise::Current { amps_per_rt_hz }) => {
                let _ = writeln!(out, "dark_current = {amps_per_rt_hz:e}");
            }
            None => {}
        }
    }
    if let Some(powers) = sweep_powers {
        let list: Vec<String> = powers.iter().map(|p| format!("{p:e}")).collect();
        let _ = write!(out, "\n[sweep]\npowers = {}\n", list.join(", "));
    }
    out
}
