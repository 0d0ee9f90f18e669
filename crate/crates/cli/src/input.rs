//! Loading algebras and modules from the command line.

use std::fs;
use std::sync::Arc;

use sgcat::{corpus, Algebra, AlgebraSpec, Module, ModuleSpec};

use crate::CliError;

/// `corpus:NAME` or a path to an algebra JSON file.
pub fn load_algebra(arg: &str) -> Result<Arc<Algebra>, CliError> {
    if let Some(name) = arg.strip_prefix("corpus:") {
        let entry = corpus::by_name(name).ok_or_else(|| {
            let known: Vec<&str> = corpus::all().iter().map(|e| e.name).collect();
            CliError::Input(format!("unknown corpus algebra {name:?} (known: {})", known.join(", ")))
        })?;
        return Algebra::load(&entry.spec).map_err(|e| CliError::located(arg, e));
    }
    let text = fs::read_to_string(arg).map_err(|e| CliError::Input(format!("{arg}: {e}")))?;
    let spec: AlgebraSpec = serde_json::from_str(&text)
        .map_err(|e| CliError::Input(format!("{arg}:{}:{}: {e}", e.line(), e.column())))?;
    Algebra::load(&spec).map_err(|e| CliError::located(arg, e))
}

fn vertex(alg: &Algebra, name: &str) -> Result<usize, CliError> {
    alg.vertices()
        .iter()
        .position(|v| v == name)
        .ok_or_else(|| CliError::Input(format!("no vertex named {name:?}")))
}

/// `top`, `regular`, `simple:V`, `projective:V`, or a module JSON file.
pub fn load_module(alg: &Arc<Algebra>, arg: &str) -> Result<Module, CliError> {
    let core = |e| CliError::located(arg, e);
    match arg {
        "top" => return Ok(Module::simples(alg).map_err(core)?.1),
        "regular" => return Ok(Module::regular(alg)),
        _ => {}
    }
    if let Some(v) = arg.strip_prefix("simple:") {
        return Module::simple(alg, vertex(alg, v)?).map_err(core);
    }
    if let Some(v) = arg.strip_prefix("projective:") {
        return Ok(Module::projective(alg, vertex(alg, v)?));
    }
    let text = fs::read_to_string(arg).map_err(|e| CliError::Input(format!("{arg}: {e}")))?;
    let spec: ModuleSpec = serde_json::from_str(&text)
        .map_err(|e| CliError::Input(format!("{arg}:{}:{}: {e}", e.line(), e.column())))?;
    Module::from_spec(alg, &spec).map_err(core)
}
