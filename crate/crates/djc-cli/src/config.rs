//! Key=value settings shared by every subcommand.
//!
//! Settings come from an optional `--config` file (one `key=value` per
//! line, `#` comments allowed) overlaid by `KEY=VALUE` tokens on the
//! command line; the command line wins on conflict. Numbers accept
//! fractional-pi literals (`pi`, `pi/12`, `3pi/4`, `-0.5pi`) anywhere a
//! plain float is accepted.

use std::collections::HashMap;
use std::f64::consts::PI;
use std::path::{Path, PathBuf};

use djc::model::{InitialStateSpec, ManifoldBasis, SystemParams};
use djc::series::{Engine, TimeGrid};
use djc::C64;

/// Parse a float, allowing fractional-pi literals.
pub fn parse_number(s: &str) -> Result<f64, String> {
    let s = s.trim();
    if let Some(idx) = s.find("pi") {
        let (coeff_s, rest) = (&s[..idx], &s[idx + 2..]);
        let coeff = match coeff_s {
            "" | "+" => 1.0,
            "-" => -1.0,
            other => other
                .parse::<f64>()
                .map_err(|_| format!("bad coefficient in '{s}'"))?,
        };
        let denom = match rest.strip_prefix('/') {
            None if rest.is_empty() => 1.0,
            None => return Err(format!("unexpected trailing '{rest}' in '{s}'")),
            Some(d) => {
                let d: f64 = d.parse().map_err(|_| format!("bad divisor in '{s}'"))?;
                if d == 0.0 {
                    return Err(format!("zero divisor in '{s}'"));
                }
                d
            }
        };
        return Ok(coeff * PI / denom);
    }
    s.parse::<f64>().map_err(|_| format!("bad number '{s}'"))
}

/// Merged settings with provenance-free lookup.
#[derive(Debug, Default)]
pub struct Settings {
    map: HashMap<String, String>,
}

impl Settings {
    /// Load the optional config file, then overlay command-line tokens.
    pub fn from_sources(config: Option<&Path>, tokens: &[String]) -> Result<Self, String> {
        let mut settings = Settings::default();
        if let Some(path) = config {
            let text = std::fs::read_to_string(path)
                .map_err(|e| format!("cannot read config {}: {e}", path.display()))?;
            for line in text.lines() {
                let line = line.trim();
                if line.is_empty() || line.starts_with('#') {
                    continue;
                }
                settings.insert(line)?;
            }
        }
        for token in tokens {
            settings.insert(token)?;
        }
        Ok(settings)
    }

    fn insert(&mut self, token: &str) -> Result<(), String> {
        let (key, value) = token
            .split_once('=')
            .ok_or_else(|| format!("expected key=value, got '{token}'"))?;
        let key = key.trim();
        if key.is_empty() {
            return Err(format!("empty key in '{token}'"));
        }
        self.map.insert(key.to_string(), value.trim().to_string());
        Ok(())
    }

    /// Reject keys outside the command's vocabulary (typo protection).
    pub fn ensure_known(&self, allowed: &[&str]) -> Result<(), String> {
        let mut unknown: Vec<&str> = self
            .map
            .keys()
            .filter(|k| !allowed.contains(&k.as_str()))
            .map(String::as_str)
            .collect();
        if unknown.is_empty() {
            return Ok(());
        }
        unknown.sort_unstable();
        Err(format!(
            "unknown setting(s) {}; valid here: {}",
            unknown.join(", "),
            allowed.join(", ")
        ))
    }

    pub fn raw(&self, key: &str) -> Option<&str> {
        self.map.get(key).map(String::as_str)
    }

    pub fn has(&self, key: &str) -> bool {
        self.map.contains_key(key)
    }

    pub fn number(&self, key: &str) -> Result<Option<f64>, String> {
        self.raw(key)
            .map(|v| parse_number(v).map_err(|e| format!("{key}: {e}")))
            .transpose()
    }

    pub fn number_or(&self, key: &str, default: f64) -> Result<f64, String> {
        Ok(self.number(key)?.unwrap_or(default))
    }

    pub fn count(&self, key: &str) -> Result<Option<usize>, String> {
        self.raw(key)
            .map(|v| {
                v.parse::<usize>()
                    .map_err(|_| format!("{key}: bad count '{v}'"))
            })
            .transpose()
    }

    pub fn count_or(&self, key: &str, default: usize) -> Result<usize, String> {
        Ok(self.count(key)?.unwrap_or(default))
    }
}

/// Keys accepted by every series-producing command.
pub const PARAM_KEYS: &[&str] = &[
    "omega0", "omega1", "omega2", "g1", "g2", "delta", "delta1", "delta2",
];
pub const STATE_KEYS: &[&str] = &["preset", "alpha", "beta", "theta", "phi", "custom", "basis"];
pub const RUN_KEYS: &[&str] = &["t-max", "steps", "engine", "output", "n-max"];

/// Build system parameters, accepting either cavity frequencies or
/// detunings (never both for the same cavity).
pub fn build_params(s: &Settings) -> Result<SystemParams, String> {
    if s.has("delta") && (s.has("delta1") || s.has("delta2") || s.has("omega1") || s.has("omega2"))
    {
        return Err(
            "delta sets both cavities; it conflicts with delta1/delta2/omega1/omega2".into(),
        );
    }
    if s.has("omega1") && s.has("delta1") {
        return Err("omega1 and delta1 describe the same cavity; give one".into());
    }
    if s.has("omega2") && s.has("delta2") {
        return Err("omega2 and delta2 describe the same cavity; give one".into());
    }
    let omega0 = s.number_or("omega0", 20.0)?;
    let common = s.number("delta")?;
    let delta = |freq_key: &str, det_key: &str| -> Result<f64, String> {
        if let Some(omega) = s.number(freq_key)? {
            Ok((omega0 - omega) / 2.0)
        } else if let Some(d) = s.number(det_key)? {
            Ok(d)
        } else {
            Ok(common.unwrap_or(0.0))
        }
    };
    let d1 = delta("omega1", "delta1")?;
    let d2 = delta("omega2", "delta2")?;
    let g1 = s.number_or("g1", 1.0)?;
    let g2 = s.number_or("g2", 1.0)?;
    SystemParams::from_detunings(omega0, d1, d2, g1, g2).map_err(|e| e.to_string())
}

fn parse_basis(name: &str) -> Result<ManifoldBasis, String> {
    ManifoldBasis::ALL
        .into_iter()
        .find(|b| b.to_string() == name)
        .ok_or_else(|| {
            let known: Vec<String> = ManifoldBasis::ALL.iter().map(|b| b.to_string()).collect();
            format!("unknown basis '{name}' (expected one of {})", known.join(", "))
        })
}

/// Parse `[re,im;re,im;...]` amplitudes (brackets optional) and normalize
/// them exactly.
fn parse_custom_amplitudes(text: &str) -> Result<Vec<C64>, String> {
    let inner = text
        .trim()
        .trim_start_matches('[')
        .trim_end_matches(']')
        .trim();
    if inner.is_empty() {
        return Err("custom amplitude list is empty".into());
    }
    let mut values = Vec::new();
    for part in inner.split(';') {
        let mut nums = part.split(',');
        let (re, im) = (nums.next(), nums.next());
        if nums.next().is_some() {
            return Err(format!("amplitude '{part}' has more than two components"));
        }
        let parse = |v: Option<&str>| -> Result<f64, String> {
            parse_number(v.ok_or_else(|| format!("amplitude '{part}' needs re,im"))?)
        };
        values.push(C64::new(parse(re)?, parse(im)?));
    }
    let norm = values.iter().map(|v| v.norm_sqr()).sum::<f64>().sqrt();
    if norm <= 0.0 || !norm.is_finite() {
        return Err("custom amplitudes must have a nonzero finite norm".into());
    }
    Ok(values.into_iter().map(|v| v / norm).collect())
}

fn build_custom(s: &Settings) -> Result<InitialStateSpec, String> {
    for key in ["alpha", "beta", "theta", "phi"] {
        if s.has(key) {
            return Err(format!("{key} does not apply to a custom state"));
        }
    }
    let text = s
        .raw("custom")
        .ok_or("the custom preset needs custom=[re,im;re,im;...]")?;
    let basis = parse_basis(
        s.raw("basis")
            .ok_or("a custom state needs basis= (a named amplitude ordering)")?,
    )?;
    let values = parse_custom_amplitudes(text)?;
    if values.len() != basis.dim() {
        return Err(format!(
            "the {basis} basis has {} components, got {}",
            basis.dim(),
            values.len()
        ));
    }
    Ok(InitialStateSpec::custom(basis, values))
}

/// Build the initial state from `preset` plus its angles, or from
/// `custom=[re,im;...]` with a named `basis=`.
pub fn build_initial(s: &Settings) -> Result<InitialStateSpec, String> {
    let preset = s.raw("preset").unwrap_or("bell-psi");
    if s.has("custom") && preset != "custom" && s.has("preset") {
        return Err(format!("custom amplitudes conflict with preset={preset}"));
    }
    if s.has("custom") || preset == "custom" {
        return build_custom(s);
    }
    if s.has("basis") {
        return Err("basis= only applies to a custom state".into());
    }
    let alpha = s.number_or("alpha", PI / 4.0)?;
    let beta = s.number_or("beta", 0.0)?;
    let theta = s.number_or("theta", 0.0)?;
    let spec = match preset {
        "bell-psi" => InitialStateSpec::bell_psi(alpha, beta),
        "bell-phi" => InitialStateSpec::bell_phi(alpha, theta),
        "delocalized" | "delocalized-psi0" => {
            if s.has("theta") || s.has("phi") {
                InitialStateSpec::delocalized_psi0_with_phases(
                    theta,
                    s.number_or("phi", PI)?,
                )
            } else {
                InitialStateSpec::delocalized_psi0()
            }
        }
        "sym" | "sym-two-plus-ground" => InitialStateSpec::sym_two_plus_ground(),
        "antisym" | "antisym-two-plus-ground" => InitialStateSpec::antisym_two_plus_ground(),
        "lambda" => InitialStateSpec::lambda(),
        "bare-up-up" => InitialStateSpec::bare_up_up(),
        other => {
            return Err(format!(
                "unknown preset '{other}' (expected bell-psi, bell-phi, delocalized, \
                 sym, antisym, lambda, bare-up-up or custom)"
            ))
        }
    };
    Ok(spec)
}

pub fn build_grid(s: &Settings) -> Result<TimeGrid, String> {
    let t_max = s.number_or("t-max", 4.0 * PI)?;
    let steps = s.count_or("steps", 2000)?;
    TimeGrid::new(t_max, steps).map_err(|e| e.to_string())
}

pub fn build_engine(s: &Settings) -> Result<Engine, String> {
    match s.raw("engine") {
        None => Ok(Engine::Analytic),
        Some(v) => Engine::parse(v).map_err(|e| e.to_string()),
    }
}

/// Resolve the output file path: explicit `output=`, else the default
/// file name inside `DJC_OUTPUT_DIR` (or the working directory).
pub fn output_path(s: &Settings, default_name: &str) -> PathBuf {
    match s.raw("output") {
        Some(path) => PathBuf::from(path),
        None => match std::env::var_os("DJC_OUTPUT_DIR") {
            Some(dir) => Path::new(&dir).join(default_name),
            None => PathBuf::from(default_name),
        },
    }
}
