//! Pseudomonoid spec strings: `Z`, `N`, `Witt`, `dZ:<d>`, `Mnm:<n>,<m>`,
//! `set:{a,b,c}`, `gen:{a,b,c}`.

use wittkit_core::parse;
use wittkit_core::pseudomonoid::{BuiltinPm, Pseudomonoid};
use wittkit_core::scalar::Scalar;

use crate::CliError;

fn parse_scalar_list(body: &str) -> Result<Vec<Scalar>, CliError> {
    let inner = body
        .strip_prefix('{')
        .and_then(|s| s.strip_suffix('}'))
        .ok_or_else(|| CliError::Parse(format!("expected {{a,b,c}}, got '{}'", body)))?;
    if inner.trim().is_empty() {
        return Ok(Vec::new());
    }
    inner
        .split(',')
        .map(|p| parse::parse_scalar(p.trim()).map_err(|e| CliError::Parse(e.to_string())))
        .collect()
}

pub fn parse_pm(s: &str) -> Result<Pseudomonoid, CliError> {
    match s {
        "Z" => return Ok(Pseudomonoid::Builtin(BuiltinPm::Z)),
        "N" => return Ok(Pseudomonoid::Builtin(BuiltinPm::N)),
        "Witt" => return Ok(Pseudomonoid::Builtin(BuiltinPm::WittPM)),
        _ => {}
    }
    if let Some(d) = s.strip_prefix("dZ:") {
        let d = parse::parse_scalar(d).map_err(|e| CliError::Parse(e.to_string()))?;
        return Pseudomonoid::step_z(d).map_err(|e| CliError::Domain(e.to_string()));
    }
    if let Some(nm) = s.strip_prefix("Mnm:") {
        let (n, m) = nm
            .split_once(',')
            .ok_or_else(|| CliError::Parse("Mnm:<n>,<m> expected".into()))?;
        let n: i64 = n.trim().parse().map_err(|_| CliError::Parse("bad n".into()))?;
        let m: i64 = m.trim().parse().map_err(|_| CliError::Parse("bad m".into()))?;
        return Pseudomonoid::numerical(n, m).map_err(|e| CliError::Domain(e.to_string()));
    }
    if let Some(body) = s.strip_prefix("set:") {
        let elems = parse_scalar_list(body)?;
        return Pseudomonoid::finite_set(elems).map_err(|e| CliError::Domain(e.to_string()));
    }
    if let Some(body) = s.strip_prefix("gen:") {
        let elems = parse_scalar_list(body)?;
        return Ok(Pseudomonoid::generated(elems));
    }
    Err(CliError::Parse(format!(
        "unknown pseudomonoid '{}': expected Z, N, Witt, dZ:<d>, Mnm:<n>,<m>, set:{{..}} or gen:{{..}}",
        s
    )))
}
