//! Plain-text `key = value` configuration files and grid specifications.

use std::collections::BTreeMap;
use std::fs;
use std::path::Path;
use std::str::FromStr;

/// Values read from a configuration file. Keys are normalized so that
/// `omega-grid`, `omega_grid` and `OMEGA_GRID` are the same key.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct ConfigFile {
    values: BTreeMap<String, String>,
}

fn normalize(key: &str) -> String {
    key.trim().to_ascii_lowercase().replace('-', "_")
}

impl ConfigFile {
    pub fn parse(text: &str) -> Result<Self, String> {
        let mut values = BTreeMap::new();
        for (n, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line
                .split_once('=')
                .ok_or_else(|| format!("line {}: expected `key = value`", n + 1))?;
            let key = normalize(key);
            if key.is_empty() {
                return Err(format!("line {}: empty key", n + 1));
            }
            values.insert(key, value.trim().to_string());
        }
        Ok(Self { values })
    }

    pub fn load(path: &Path) -> Result<Self, String> {
        let text = fs::read_to_string(path)
            .map_err(|e| format!("cannot read config {}: {e}", path.display()))?;
        Self::parse(&text)
    }

    pub fn raw(&self, key: &str) -> Option<&str> {
        self.values.get(&normalize(key)).map(String::as_str)
    }

    pub fn get<T: FromStr>(&self, key: &str) -> Result<Option<T>, String> {
        match self.raw(key) {
            None => Ok(None),
            Some(v) => v
                .parse()
                .map(Some)
                .map_err(|_| format!("config key `{key}`: cannot parse `{v}`")),
        }
    }

    /// The flag value if given, else the file value, else `default`.
    pub fn resolve<T: FromStr>(&self, flag: Option<T>, key: &str, default: T) -> Result<T, String> {
        match flag {
            Some(v) => Ok(v),
            None => Ok(self.get(key)?.unwrap_or(default)),
        }
    }

    /// As [`ConfigFile::resolve`] without a default.
    pub fn resolve_opt<T: FromStr>(&self, flag: Option<T>, key: &str) -> Result<Option<T>, String> {
        match flag {
            Some(v) => Ok(Some(v)),
            None => self.get(key),
        }
    }
}

/// An abscissa grid: `start:stop:step` (inclusive) or `start:stop:Npts`
/// with an integer point count after `n`, e.g. `0.1:6:n50`.
#[derive(Debug, Clone, PartialEq)]
pub struct Grid(pub Vec<f64>);

impl Grid {
    pub fn linspace(start: f64, stop: f64, points: usize) -> Self {
        if points == 1 {
            return Self(vec![start]);
        }
        let h = (stop - start) / (points - 1) as f64;
        Self((0..points).map(|k| start + k as f64 * h).collect())
    }

    pub fn stepped(start: f64, stop: f64, step: f64) -> Result<Self, String> {
        if !(step.is_finite() && step > 0.0) {
            return Err(format!("grid step must be positive, got {step}"));
        }
        if stop < start {
            return Err(format!("grid stop {stop} is below start {start}"));
        }
        let count = ((stop - start) / step + 1e-9).floor() as usize + 1;
        Ok(Self((0..count).map(|k| start + k as f64 * step).collect()))
    }
}

impl FromStr for Grid {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let parts: Vec<&str> = s.split(':').map(str::trim).collect();
        let num = |p: &str| {
            p.parse::<f64>()
                .map_err(|_| format!("bad grid value `{p}` in `{s}`"))
        };
        match parts.as_slice() {
            [single] => Ok(Self(vec![num(single)?])),
            [a, b, c] => {
                let (start, stop) = (num(a)?, num(b)?);
                if let Some(n) = c.strip_prefix('n') {
                    let points: usize = n
                        .parse()
                        .map_err(|_| format!("bad point count `{c}` in `{s}`"))?;
                    if points == 0 {
                        return Err("grid needs at least one point".into());
                    }
                    Ok(Self::linspace(start, stop, points))
                } else {
                    Self::stepped(start, stop, num(c)?)
                }
            }
            _ => Err(format!(
                "grid must be `value`, `start:stop:step` or `start:stop:nPOINTS`, got `{s}`"
            )),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_key_values_and_comments() {
        let cfg = ConfigFile::parse("# header\nsteps = 2048\nomega-grid = 0.5:1:0.25 # sweep\n\n")
            .unwrap();
        assert_eq!(cfg.get::<usize>("steps").unwrap(), Some(2048));
        assert_eq!(cfg.raw("omega_grid"), Some("0.5:1:0.25"));
        assert_eq!(cfg.resolve(Some(10usize), "steps", 1).unwrap(), 10);
        assert_eq!(cfg.resolve(None, "steps", 1usize).unwrap(), 2048);
        assert_eq!(cfg.resolve(None, "missing", 7usize).unwrap(), 7);
        assert!(ConfigFile::parse("no equals sign").is_err());
        assert!(cfg.get::<usize>("omega_grid").is_err());
    }

    #[test]
    fn grids() {
        let g: Grid = "0.5:1:0.25".parse().unwrap();
        assert_eq!(g.0, vec![0.5, 0.75, 1.0]);
        let g: Grid = "0.5:8:0.1".parse().unwrap();
        assert_eq!(g.0.len(), 76);
        assert!((g.0[75] - 8.0).abs() < 1e-12);
        let g: Grid = "0:1:n5".parse().unwrap();
        assert_eq!(g.0, vec![0.0, 0.25, 0.5, 0.75, 1.0]);
        assert!("1:0:0.1".parse::<Grid>().is_err());
        assert!("1:2".parse::<Grid>().is_err());
    }
}
