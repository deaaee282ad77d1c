//! Run configuration: `key = value` lines with `#` comments, defaults for
//! absent keys, unknown keys rejected.

use breakup::{Error, Result};
use std::path::PathBuf;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CachePolicy {
    /// Read existing cache files; fail when one is missing.
    Use,
    /// Recompute everything and overwrite the caches.
    Rebuild,
}

#[derive(Debug, Clone)]
pub struct RunConfig {
    pub profile: String,
    /// Strictly decreasing dispersion ladder.
    pub eps: Vec<f64>,
    /// Scaled times `T` for the comparison.
    pub t_values: Vec<f64>,
    /// Half-width of the scaled `X` window.
    pub x_window: f64,
    /// Model-profile grid half-length.
    pub pi2_l: f64,
    /// Model-profile grid spacing.
    pub pi2_h: f64,
    /// KdV box half-length.
    pub kdv_ld: f64,
    /// KdV collocation points (power of two).
    pub kdv_n: usize,
    /// KdV base step; `None` selects the automatic heuristic.
    pub kdv_dt: Option<f64>,
    pub out_dir: PathBuf,
    pub cache: CachePolicy,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            profile: "sech2".into(),
            eps: vec![0.1, 0.07, 0.05, 0.035],
            t_values: vec![-1.0, 0.0, 1.0],
            x_window: 2.0,
            pi2_l: 25.0,
            pi2_h: 0.025,
            kdv_ld: 15.0,
            kdv_n: 1 << 14,
            kdv_dt: None,
            out_dir: PathBuf::from("out"),
            cache: CachePolicy::Use,
        }
    }
}

impl RunConfig {
    pub fn validate(&self) -> Result<()> {
        if self.eps.is_empty() || self.eps.iter().any(|&e| e <= 0.0) {
            return Err(Error::Config("eps ladder must be positive".into()));
        }
        if self.eps.windows(2).any(|w| w[1] >= w[0]) {
            return Err(Error::Config(
                "eps ladder must be strictly decreasing".into(),
            ));
        }
        if self.x_window <= 0.0
            || self.pi2_l <= 0.0
            || self.pi2_h <= 0.0
            || self.kdv_ld <= 0.0
        {
            return Err(Error::Config("numeric parameters must be positive".into()));
        }
        if let Some(dt) = self.kdv_dt {
            if dt <= 0.0 {
                return Err(Error::Config("kdv_dt must be positive".into()));
            }
        }
        Ok(())
    }
}

fn parse_list(value: &str, line_no: usize) -> Result<Vec<f64>> {
    value
        .split(',')
        .map(|s| {
            s.trim()
                .parse::<f64>()
                .map_err(|e| Error::Parse(format!("line {line_no}: bad number '{s}': {e}")))
        })
        .collect()
}

/// Parse `key = value` text over the defaults.
pub fn parse_config(text: &str) -> Result<RunConfig> {
    let mut cfg = RunConfig::default();
    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = match raw.find('#') {
            Some(p) => &raw[..p],
            None => raw,
        }
        .trim();
        if line.is_empty() {
            continue;
        }
        let (key, value) = line
            .split_once('=')
            .ok_or_else(|| Error::Parse(format!("line {line_no}: expected key = value")))?;
        let key = key.trim();
        let value = value.trim();
        let scalar = |v: &str| -> Result<f64> {
            v.parse::<f64>()
                .map_err(|e| Error::Parse(format!("line {line_no}: bad number '{v}': {e}")))
        };
        match key {
            "profile" => cfg.profile = value.to_string(),
            "eps" => cfg.eps = parse_list(value, line_no)?,
            "t_values" => cfg.t_values = parse_list(value, line_no)?,
            "x_window" => cfg.x_window = scalar(value)?,
            "pi2_l" => cfg.pi2_l = scalar(value)?,
            "pi2_h" => cfg.pi2_h = scalar(value)?,
            "kdv_ld" => cfg.kdv_ld = scalar(value)?,
            "kdv_n" => {
                cfg.kdv_n = value.parse::<usize>().map_err(|e| {
                    Error::Parse(format!("line {line_no}: bad integer '{value}': {e}"))
                })?
            }
            "kdv_dt" => {
                cfg.kdv_dt = if value == "auto" {
                    None
                } else {
                    Some(scalar(value)?)
                }
            }
            "out_dir" => cfg.out_dir = PathBuf::from(value),
            "cache" => {
                cfg.cache = match value {
                    "use" => CachePolicy::Use,
                    "rebuild" => CachePolicy::Rebuild,
                    other => {
                        return Err(Error::Config(format!(
                            "line {line_no}: cache must be 'use' or 'rebuild', got '{other}'"
                        )))
                    }
                }
            }
            other => {
                return Err(Error::Config(format!(
                    "line {line_no}: unknown key '{other}'"
                )))
            }
        }
    }
    cfg.validate()?;
    Ok(cfg)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn empty_input_gives_defaults() {
        let cfg = parse_config("").unwrap();
        assert_eq!(cfg.profile, "sech2");
        assert_eq!(cfg.eps, vec![0.1, 0.07, 0.05, 0.035]);
        assert_eq!(cfg.cache, CachePolicy::Use);
    }

    #[test]
    fn lists_and_comments() {
        let cfg = parse_config("# comment\neps = 0.1, 0.05\nt_values = -1, 1 # trailing\n").unwrap();
        assert_eq!(cfg.eps, vec![0.1, 0.05]);
        assert_eq!(cfg.t_values, vec![-1.0, 1.0]);
    }

    #[test]
    fn non_decreasing_ladder_is_rejected() {
        assert!(parse_config("eps = 0.05, 0.1\n").is_err());
    }

    #[test]
    fn unknown_keys_and_malformed_lines_carry_line_numbers() {
        let err = parse_config("eps = 0.1\nwhatever = 3\n").unwrap_err();
        assert!(err.to_string().contains("line 2"), "{err}");
        let err = parse_config("just words\n").unwrap_err();
        assert!(err.to_string().contains("line 1"), "{err}");
    }

    #[test]
    fn dt_auto_and_explicit() {
        assert_eq!(parse_config("kdv_dt = auto\n").unwrap().kdv_dt, None);
        assert_eq!(parse_config("kdv_dt = 1e-4\n").unwrap().kdv_dt, Some(1e-4));
        assert!(parse_config("kdv_dt = -1\n").is_err());
    }
}
