use std::fmt::Write as _;
use std::path::Path;

use anyhow::{bail, Result};
use serde_json::json;

use apn_core::catalog::export::{graph_to_dot, graph_to_jsonl};
use apn_core::catalog::format::{write_bare, write_lut, write_univariate};
use apn_core::catalog::store::{append_records, StoredRecord};
use apn_core::extension::{r_extension_search, zero_extensions, SearchConfig};
use apn_core::trim::graph::trimming_graph;
use apn_core::trim::{recursive_witness, trim_spectrum};
use apn_core::{Exec, FieldSpec, InvariantSignature, Vbf};

use crate::input::{load_all, load_one, write_text, Named};
use crate::{Command, Format};

pub fn run(cmd: &Command, exec: Exec) -> Result<String> {
    match cmd {
        Command::Analyze { src, json } => analyze(&src.input, *json),
        Command::TrimSpectrum { src, quadratic_reduced } => trim_spec(&src.input, *quadratic_reduced, exec),
        Command::TrimGraph { inputs, dot, jsonl } => trim_graph(inputs, dot.as_deref(), jsonl.as_deref(), exec),
        Command::Recursive { src } => recursive(&src.input),
        Command::ZeroExtend { src, out, emit } => zero_extend(&src.input, out.as_deref(), emit.as_deref(), exec),
        Command::RExtend { src, seed, budget, restarts, r, out, emit } => {
            let config = RExtend { seed: *seed, budget: *budget, restarts: *restarts, r: *r };
            r_extend(&src.input, &config, out.as_deref(), emit.as_deref(), exec)
        }
        Command::Convert { src, to, modulus } => convert(&src.input, *to, *modulus),
    }
}

/// `differential_uniformity == 2`, which for square functions is `is_apn`.
fn apn(f: &Vbf) -> bool {
    f.differential_uniformity() == 2
}

fn signature(f: &Vbf) -> Result<Option<InvariantSignature>> {
    if f.n() != f.m() {
        return Ok(None);
    }
    Ok(Some(InvariantSignature::of(f)?))
}

fn analyze(spec: &str, as_json: bool) -> Result<String> {
    let mut out = String::new();
    for Named { id, function: f } in load_all(spec)? {
        let sig = signature(&f)?;
        if as_json {
            let v = json!({
                "id": id,
                "n": f.n(),
                "m": f.m(),
                "apn": apn(&f),
                "degree": f.degree(),
                "linearity": f.linearity(),
                "differential_uniformity": f.differential_uniformity(),
                "differential_spectrum": f.differential_spectrum().entries(),
                "extended_walsh_spectrum": f.extended_walsh_spectrum().entries(),
                "signature": sig.as_ref().map(|s| s.to_string()),
                "signature_hash": sig.as_ref().map(|s| s.hash_hex()),
            });
            writeln!(out, "{v}")?;
            continue;
        }
        writeln!(
            out,
            "id={id} n={} m={} apn={} degree={} linearity={} differential_uniformity={}",
            f.n(),
            f.m(),
            apn(&f),
            f.degree(),
            f.linearity(),
            f.differential_uniformity()
        )?;
        writeln!(out, "differential_spectrum={}", f.differential_spectrum())?;
        writeln!(out, "extended_walsh_spectrum={}", f.extended_walsh_spectrum())?;
        if let Some(s) = sig {
            writeln!(out, "signature={s}")?;
            writeln!(out, "signature_hash={}", s.hash_hex())?;
        }
    }
    Ok(out)
}

fn trim_spec(spec: &str, reduced: bool, exec: Exec) -> Result<String> {
    let Named { id, function: f } = load_one(spec)?;
    let s = trim_spectrum(&f, reduced, exec)?;
    let apn_trims: u64 = s.apn_signatures().map(|(_, c)| c).sum();
    let mut out = String::new();
    writeln!(
        out,
        "id={id} n={} quadratic_reduced={reduced} trims={} classes={} apn_trims={apn_trims} apn_classes={} hash_collisions={}",
        f.n(),
        s.total(),
        s.distinct(),
        s.apn_signatures().count(),
        s.hash_collisions()
    )?;
    for (sig, count) in &s.counts {
        writeln!(out, "class hash={} count={count} apn={} signature={sig}", sig.hash_hex(), sig.apn)?;
    }
    Ok(out)
}

fn trim_graph(inputs: &[String], dot: Option<&str>, jsonl: Option<&str>, exec: Exec) -> Result<String> {
    let mut funcs = Vec::new();
    for spec in inputs {
        funcs.extend(load_all(spec)?.into_iter().map(|n| (n.id, n.function)));
    }
    let g = trimming_graph(&funcs, exec)?;
    let dot_text = graph_to_dot(&g);
    if let Some(path) = jsonl {
        write_text(path, &graph_to_jsonl(&g))?;
    }
    match dot {
        Some(path) => {
            write_text(path, &dot_text)?;
            Ok(format!("nodes={} edges={}\n", g.nodes.len(), g.edges.len()))
        }
        None => Ok(dot_text),
    }
}

fn recursive(spec: &str) -> Result<String> {
    let Named { id, function: f } = load_one(spec)?;
    let mut out = String::new();
    let Some(chain) = recursive_witness(&f)? else {
        writeln!(out, "# chain=none")?;
        return Ok(out);
    };
    writeln!(out, "# chain={}", chain.len())?;
    for link in &chain {
        let n = link.function.n();
        match &link.descriptor {
            None => writeln!(out, "# dim={n}")?,
            Some(d) => writeln!(out, "# dim={n} {d}")?,
        }
        out.push_str(&write_lut(&format!("{id}_{n}"), &link.function));
    }
    Ok(out)
}

fn store(path: Option<&str>, records: &[StoredRecord]) -> Result<()> {
    if let Some(p) = path {
        append_records(Path::new(p), records)?;
    }
    Ok(())
}

fn describe(f: &Vbf, sig: &InvariantSignature) -> String {
    format!("apn={} degree={} linearity={} hash={}", sig.apn, f.degree(), f.linearity(), sig.hash_hex())
}

fn zero_extend(spec: &str, out_path: Option<&str>, emit: Option<&str>, exec: Exec) -> Result<String> {
    let Named { id, function: g } = load_one(spec)?;
    let report = zero_extensions(&g, exec)?;
    let mut out = String::new();
    let nonempty: Vec<_> = report.scans.iter().filter(|s| s.kernel_dim.is_some()).collect();
    writeln!(out, "forms={} nonempty={}", report.scans.len(), nonempty.len())?;
    for s in nonempty {
        let dim = s.kernel_dim.expect("filtered");
        writeln!(out, "gamma={:#x} kernel_dim={dim} representatives={}", s.gamma, s.representatives)?;
    }
    let mut records = Vec::new();
    let mut luts = String::new();
    for (k, e) in report.extensions.iter().enumerate() {
        let name = format!("{id}_zext{}", k + 1);
        writeln!(out, "extension id={name} gamma={:#x} {}", e.gamma, describe(&e.function, &e.signature))?;
        records.push(StoredRecord::new(&name, &e.function, format!("zero-extend {id} gamma={:#x}", e.gamma))?);
        luts.push_str(&write_lut(&name, &e.function));
    }
    writeln!(out, "found={}", report.extensions.len())?;
    store(out_path, &records)?;
    if let Some(p) = emit {
        write_text(p, &luts)?;
    }
    Ok(out)
}

struct RExtend {
    seed: u64,
    budget: u64,
    restarts: u64,
    r: Option<u128>,
}

fn r_extend(spec: &str, cfg: &RExtend, out_path: Option<&str>, emit: Option<&str>, exec: Exec) -> Result<String> {
    if cfg.restarts == 0 {
        bail!("--restarts must be at least 1");
    }
    let Named { id, function: g } = load_one(spec)?;
    let config = SearchConfig {
        seed: cfg.seed,
        restarts: cfg.restarts,
        budget: (cfg.budget / cfg.restarts).max(1),
        r: cfg.r,
    };
    let report = r_extension_search(&g, &config, exec)?;
    let mut out = String::new();
    writeln!(
        out,
        "seed={} restarts={} budget_per_restart={}",
        config.seed, config.restarts, config.budget
    )?;
    for r in &report.restarts {
        writeln!(
            out,
            "restart={} r={:#x} mask={:#x} nodes={} found={}",
            r.restart,
            r.r,
            r.mask,
            r.nodes,
            r.found.is_some()
        )?;
    }
    let mut records = Vec::new();
    let mut luts = String::new();
    for e in &report.found {
        let t = &e.function;
        if !t.is_apn()? {
            return Err(apn_core::Error::Invariant("search emitted a non-APN function".into()).into());
        }
        let name = format!("{id}_rext_s{}_{}", cfg.seed, e.restart);
        writeln!(out, "extension id={name} restart={} r={:#x} ell={:#x} {}", e.restart, e.r, e.ell, describe(t, &e.signature))?;
        let provenance = format!("r-extend {id} seed={} restart={} r={:#x}", cfg.seed, e.restart, e.r);
        records.push(StoredRecord::new(&name, t, provenance)?);
        luts.push_str(&write_lut(&name, t));
    }
    writeln!(out, "nodes={}", report.total_nodes)?;
    writeln!(out, "found={}", report.found.len())?;
    store(out_path, &records)?;
    if let Some(p) = emit {
        write_text(p, &luts)?;
    }
    Ok(out)
}

fn convert(spec: &str, to: Format, modulus: Option<u32>) -> Result<String> {
    let mut out = String::new();
    for Named { id, function: f } in load_all(spec)? {
        match to {
            Format::Lut => out.push_str(&write_lut(&id, &f)),
            Format::Bare => out.push_str(&write_bare(&f)),
            Format::Uni => {
                let field = match modulus {
                    Some(m) => FieldSpec::new(f.n(), m)?,
                    None => FieldSpec::standard(f.n())?,
                };
                out.push_str(&write_univariate(&id, &f, &field)?);
            }
        }
    }
    Ok(out)
}
