use std::io::Read;
use std::path::Path;

use anyhow::{bail, Context, Result};

use apn_core::catalog::fixtures;
use apn_core::catalog::format::parse_functions;
use apn_core::Vbf;

/// A named function read from the command line.
pub struct Named {
    pub id: String,
    pub function: Vbf,
}

fn read_text(spec: &str) -> Result<String> {
    if spec == "-" {
        let mut s = String::new();
        std::io::stdin().read_to_string(&mut s).context("reading stdin")?;
        return Ok(s);
    }
    std::fs::read_to_string(spec).with_context(|| format!("reading {spec}"))
}

fn stem(spec: &str) -> String {
    if spec == "-" {
        return "stdin".into();
    }
    Path::new(spec)
        .file_stem()
        .map_or_else(|| spec.to_string(), |s| s.to_string_lossy().into_owned())
}

/// Every function named by `spec`: a fixture (`@T6`, `@gold5`), a file, or
/// `-` for stdin.
pub fn load_all(spec: &str) -> Result<Vec<Named>> {
    if let Some(name) = spec.strip_prefix('@') {
        let fx = fixtures::fixture(name)?;
        return Ok(vec![Named { id: name.to_string(), function: fx.function }]);
    }
    let text = read_text(spec)?;
    let records = parse_functions(&text).map_err(|e| anyhow::anyhow!("{spec}:{e}"))?;
    let single = records.len() == 1;
    records
        .into_iter()
        .enumerate()
        .map(|(k, rec)| {
            let function = rec.to_vbf().with_context(|| format!("{spec}: record {}", k + 1))?;
            let id = match (rec.id.is_empty(), single) {
                (false, _) => rec.id,
                (true, true) => stem(spec),
                (true, false) => format!("{}_{}", stem(spec), k + 1),
            };
            Ok(Named { id, function })
        })
        .collect()
}

/// Exactly one function.
pub fn load_one(spec: &str) -> Result<Named> {
    let mut all = load_all(spec)?;
    if all.len() != 1 {
        bail!("{spec}: expected one function, found {}", all.len());
    }
    Ok(all.remove(0))
}

pub fn write_text(path: &str, text: &str) -> Result<()> {
    std::fs::write(path, text).with_context(|| format!("writing {path}"))
}
