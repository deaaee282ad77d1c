//! Plain-text cache files: `#`-prefixed metadata headers followed by CSV
//! rows, every float serialized with 17 significant digits so re-reads are
//! bit-exact.  Writes go to a temporary sibling and are renamed into
//! place.

use crate::error::{Error, Result};
use crate::kdv::{KdvConfig, KdvField};
use crate::pi2::{Pi2Family, Pi2Grid, Pi2Solution};
use std::fs;
use std::io::Write;
use std::path::Path;

/// Format a float with enough digits to round-trip exactly.
pub fn fmt_f64(v: f64) -> String {
    format!("{v:.16e}")
}

fn parse_f64(s: &str) -> Result<f64> {
    s.trim()
        .parse::<f64>()
        .map_err(|e| Error::Parse(format!("bad float '{s}': {e}")))
}

/// Write `content` atomically (temp file + rename).
pub fn write_atomic(path: &Path, content: &str) -> Result<()> {
    if let Some(dir) = path.parent() {
        fs::create_dir_all(dir)?;
    }
    let tmp = path.with_extension("tmp");
    {
        let mut f = fs::File::create(&tmp)?;
        f.write_all(content.as_bytes())?;
        f.sync_all()?;
    }
    fs::rename(&tmp, path)?;
    Ok(())
}

fn header_fields(line: &str) -> Result<Vec<(String, f64)>> {
    line.trim_start_matches('#')
        .split_whitespace()
        .map(|kv| {
            let (k, v) = kv
                .split_once('=')
                .ok_or_else(|| Error::Parse(format!("bad header field '{kv}'")))?;
            Ok((k.to_string(), parse_f64(v)?))
        })
        .collect()
}

fn field(fields: &[(String, f64)], key: &str) -> Result<f64> {
    fields
        .iter()
        .find(|(k, _)| k == key)
        .map(|(_, v)| *v)
        .ok_or_else(|| Error::Parse(format!("missing header field '{key}'")))
}

/// Serialize a model-profile family: one block per member,
/// `# T=<> L=<> h=<> residual=<>` then `X,U` rows.
pub fn pi2_family_to_string(family: &Pi2Family) -> String {
    let mut out = String::new();
    for m in family.members() {
        out.push_str(&format!(
            "# T={} L={} h={} residual={}\n",
            fmt_f64(m.t()),
            fmt_f64(m.grid().half_length()),
            fmt_f64(m.grid().spacing()),
            fmt_f64(m.residual_norm()),
        ));
        for (i, &u) in m.values().iter().enumerate() {
            out.push_str(&fmt_f64(m.grid().node(i)));
            out.push(',');
            out.push_str(&fmt_f64(u));
            out.push('\n');
        }
    }
    out
}

pub fn write_pi2_family(path: &Path, family: &Pi2Family) -> Result<()> {
    write_atomic(path, &pi2_family_to_string(family))
}

pub fn read_pi2_family(path: &Path) -> Result<Pi2Family> {
    let text = fs::read_to_string(path)?;
    parse_pi2_family(&text)
}

pub fn parse_pi2_family(text: &str) -> Result<Pi2Family> {
    let mut members = Vec::new();
    let mut current: Option<(f64, f64, f64, Vec<f64>)> = None;
    let flush = |cur: &mut Option<(f64, f64, f64, Vec<f64>)>,
                     members: &mut Vec<Pi2Solution>|
     -> Result<()> {
        if let Some((t, l, h, u)) = cur.take() {
            let grid = Pi2Grid::new(l, ((2.0 * l / h).round() as usize) + 1)?;
            if grid.len() != u.len() {
                return Err(Error::Parse(format!(
                    "block T={t}: {} rows but grid wants {}",
                    u.len(),
                    grid.len()
                )));
            }
            members.push(Pi2Solution::from_values(grid, t, u)?);
        }
        Ok(())
    };
    for (ln, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() {
            continue;
        }
        if line.starts_with('#') {
            flush(&mut current, &mut members)?;
            let fields = header_fields(line)?;
            current = Some((
                field(&fields, "T")?,
                field(&fields, "L")?,
                field(&fields, "h")?,
                Vec::new(),
            ));
        } else {
            let (_, u) = line
                .split_once(',')
                .ok_or_else(|| Error::Parse(format!("line {}: expected X,U", ln + 1)))?;
            current
                .as_mut()
                .ok_or_else(|| Error::Parse(format!("line {}: row before header", ln + 1)))?
                .3
                .push(parse_f64(u)?);
        }
    }
    flush(&mut current, &mut members)?;
    Pi2Family::from_members(members)
}

/// Serialize a KdV snapshot: `# eps=<> t=<> Ld=<> N=<>` then `x,u` rows.
pub fn kdv_snapshot_to_string(field: &KdvField) -> String {
    let cfg = field.config();
    let mut out = format!(
        "# eps={} t={} Ld={} N={}\n",
        fmt_f64(cfg.epsilon),
        fmt_f64(field.t()),
        fmt_f64(cfg.domain_half_length),
        cfg.n_modes,
    );
    for (j, &u) in field.values().iter().enumerate() {
        out.push_str(&fmt_f64(cfg.node(j)));
        out.push(',');
        out.push_str(&fmt_f64(u));
        out.push('\n');
    }
    out
}

pub fn write_kdv_snapshot(path: &Path, field: &KdvField) -> Result<()> {
    write_atomic(path, &kdv_snapshot_to_string(field))
}

pub fn read_kdv_snapshot(path: &Path) -> Result<KdvField> {
    let text = fs::read_to_string(path)?;
    parse_kdv_snapshot(&text)
}

pub fn parse_kdv_snapshot(text: &str) -> Result<KdvField> {
    let mut lines = text.lines();
    let header = lines
        .next()
        .ok_or_else(|| Error::Parse("empty snapshot".into()))?;
    if !header.starts_with('#') {
        return Err(Error::Parse("snapshot must start with a # header".into()));
    }
    let fields = header_fields(header)?;
    let eps = field(&fields, "eps")?;
    let t = field(&fields, "t")?;
    let ld = field(&fields, "Ld")?;
    let n = field(&fields, "N")? as usize;
    let mut u = Vec::with_capacity(n);
    for (ln, line) in lines.enumerate() {
        let line = line.trim();
        if line.is_empty() {
            continue;
        }
        let (_, v) = line
            .split_once(',')
            .ok_or_else(|| Error::Parse(format!("line {}: expected x,u", ln + 2)))?;
        u.push(parse_f64(v)?);
    }
    let mut config = KdvConfig::for_epsilon(eps);
    config.domain_half_length = ld;
    config.n_modes = n;
    config.dt = 0.05 * 2.0 * ld / n as f64;
    KdvField::from_samples(config, t, u)
}
