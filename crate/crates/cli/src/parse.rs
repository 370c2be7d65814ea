//! Parsers for list- and pair-valued command-line arguments.

use crate::error::CliError;

/// `"0.5,1,2"` → `[0.5, 1.0, 2.0]`. Whitespace around items is ignored;
/// empty items and non-finite numbers are rejected.
pub fn parse_f64_list(s: &str) -> Result<Vec<f64>, CliError> {
    if s.trim().is_empty() {
        return Err(CliError::validation("empty list"));
    }
    s.split(',')
        .map(|item| {
            let item = item.trim();
            let v: f64 = item
                .parse()
                .map_err(|_| CliError::validation(format!("not a number: {item:?}")))?;
            if !v.is_finite() {
                return Err(CliError::validation(format!("not a finite number: {item:?}")));
            }
            Ok(v)
        })
        .collect()
}

/// `"beta=0.6"` → `("beta", 0.6)`.
pub fn parse_param(s: &str) -> Result<(String, f64), CliError> {
    let (k, v) = s
        .split_once('=')
        .ok_or_else(|| CliError::validation(format!("expected key=value, got {s:?}")))?;
    let k = k.trim();
    if k.is_empty() || !k.chars().all(|c| c.is_ascii_lowercase() || c == '_') {
        return Err(CliError::validation(format!("bad parameter name {k:?}")));
    }
    let list = parse_f64_list(v)?;
    match list.as_slice() {
        [x] => Ok((k.to_string(), *x)),
        _ => Err(CliError::validation(format!("parameter {k} takes one number"))),
    }
}

/// clap adapters.
pub(crate) fn list_arg(s: &str) -> Result<Vec<f64>, String> {
    parse_f64_list(s).map_err(|e| e.to_string())
}

pub(crate) fn param_arg(s: &str) -> Result<(String, f64), String> {
    parse_param(s).map_err(|e| e.to_string())
}
