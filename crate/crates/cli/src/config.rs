//! Configuration file support. The file is flat `key=value` text using
//! the same keys and value formats as the parameter fingerprint
//! (`n`, `k`, `t`, `l`, `coin`, `boundary`, `iv`, `ic`, `scale`,
//! `renorm`); `#` starts a comment. Precedence is command-line flags over
//! config file over built-in defaults.

use std::path::Path;

use qwhash::{Boundary, CoinDirection, CoinKind, QhfParams};

/// Environment variable naming the config file.
pub const CONFIG_ENV: &str = "QWHASH_CONFIG";

#[derive(Debug, Default, Clone)]
pub struct ParamOverrides {
    pub n: Option<usize>,
    pub k: Option<usize>,
    pub t: Option<f64>,
    pub l: Option<f64>,
    pub coin: Option<CoinKind>,
    pub boundary: Option<Boundary>,
    pub initial_vertex: Option<usize>,
    pub initial_coin: Option<CoinDirection>,
    pub scale: Option<u64>,
    pub renormalize: Option<bool>,
}

impl ParamOverrides {
    pub fn apply(&self, params: &mut QhfParams) {
        if let Some(n) = self.n {
            params.n = n;
        }
        if let Some(k) = self.k {
            params.k = k;
        }
        if let Some(t) = self.t {
            params.t = t;
        }
        if let Some(l) = self.l {
            params.l = l;
        }
        if let Some(coin) = self.coin {
            params.coin = coin;
        }
        if let Some(boundary) = self.boundary {
            params.boundary = boundary;
        }
        if let Some(iv) = self.initial_vertex {
            params.initial_vertex = iv;
        }
        if let Some(ic) = self.initial_coin {
            params.initial_coin = ic;
        }
        if let Some(scale) = self.scale {
            params.scale = scale;
        }
        if let Some(renorm) = self.renormalize {
            params.renormalize = renorm;
        }
    }
}

pub fn parse_config(text: &str, source: &Path) -> Result<ParamOverrides, String> {
    let mut overrides = ParamOverrides::default();
    for (lineno, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let at = |msg: String| format!("{}:{}: {msg}", source.display(), lineno + 1);
        let (key, value) = line
            .split_once('=')
            .ok_or_else(|| at(format!("expected key=value, got {line:?}")))?;
        let (key, value) = (key.trim(), value.trim());
        let parse = |what: &str| at(format!("cannot parse {what} value {value:?}"));
        match key {
            "n" => overrides.n = Some(value.parse().map_err(|_| parse("n"))?),
            "k" => overrides.k = Some(value.parse().map_err(|_| parse("k"))?),
            "t" => overrides.t = Some(value.parse().map_err(|_| parse("t"))?),
            "l" => overrides.l = Some(value.parse().map_err(|_| parse("l"))?),
            "coin" => overrides.coin = Some(CoinKind::parse(value).map_err(|e| at(e.to_string()))?),
            "boundary" => {
                overrides.boundary = Some(Boundary::parse(value).map_err(|e| at(e.to_string()))?)
            }
            "iv" => overrides.initial_vertex = Some(value.parse().map_err(|_| parse("iv"))?),
            "ic" => {
                overrides.initial_coin =
                    Some(CoinDirection::parse(value).map_err(|e| at(e.to_string()))?)
            }
            "scale" => overrides.scale = Some(value.parse().map_err(|_| parse("scale"))?),
            "renorm" => {
                overrides.renormalize = Some(match value {
                    "1" => true,
                    "0" => false,
                    _ => return Err(at(format!("renorm must be 0 or 1, got {value:?}"))),
                })
            }
            other => return Err(at(format!("unknown configuration key {other:?}"))),
        }
    }
    Ok(overrides)
}

/// Load overrides from the file named by `QWHASH_CONFIG`, if set.
pub fn from_env() -> Result<ParamOverrides, String> {
    match std::env::var_os(CONFIG_ENV) {
        None => Ok(ParamOverrides::default()),
        Some(path) => {
            let path = Path::new(&path);
            let text = std::fs::read_to_string(path)
                .map_err(|e| format!("cannot read {} ({}): {e}", path.display(), CONFIG_ENV))?;
            parse_config(&text, path)
        }
    }
}
