//! Python bindings. Every call goes through the command-line front end with `--json`
//! and comes back as the decoded object.

use pyo3::exceptions::{PyRuntimeError, PyValueError};
use pyo3::prelude::*;
use pyo3::types::{PyDict, PyTuple};

/// Turns `family="F215", rho=0, solve_tau=True` into command-line arguments.
pub fn command_line(command: &str, backend: &str, digits: u32, options: &[(String, Option<String>)]) -> Vec<String> {
    let mut args = vec!["nilgeom".to_string(), "--json".into(), "--backend".into(), backend.into()];
    args.push("--digits".into());
    args.push(digits.to_string());
    args.push(command.into());
    for (key, value) in options {
        args.push(format!("--{}", key.replace('_', "-")));
        if let Some(v) = value {
            args.push(v.clone());
        }
    }
    args
}

fn options(kwargs: Option<&Bound<'_, PyDict>>) -> PyResult<Vec<(String, Option<String>)>> {
    let mut out = Vec::new();
    let Some(kwargs) = kwargs else { return Ok(out) };
    for (k, v) in kwargs.iter() {
        let key: String = k.extract()?;
        if v.is_none() {
            continue;
        }
        if let Ok(flag) = v.downcast::<pyo3::types::PyBool>() {
            if flag.is_true() {
                out.push((key, None));
            }
            continue;
        }
        out.push((key, Some(v.str()?.to_string())));
    }
    Ok(out)
}

fn invoke(py: Python<'_>, args: Vec<String>) -> PyResult<PyObject> {
    let out = nilgeom::cli::run(args);
    match out.code {
        0 => {
            let json = py.import_bound("json")?;
            Ok(json.call_method1("loads", (out.stdout,))?.unbind())
        }
        1 => Err(PyValueError::new_err(out.stderr.trim().to_string())),
        _ => Err(PyRuntimeError::new_err(out.stderr.trim().to_string())),
    }
}

/// Runs the command-line tool with raw arguments; returns (exit code, stdout, stderr).
#[pyfunction]
fn run(args: Vec<String>) -> (i32, String, String) {
    let out = nilgeom::cli::run(std::iter::once("nilgeom".to_string()).chain(args));
    (out.code, out.stdout, out.stderr)
}

macro_rules! subcommand {
    ($name:ident, $cmd:literal) => {
        #[pyfunction]
        #[pyo3(signature = (backend = "exact", digits = 64, **kwargs))]
        fn $name(py: Python<'_>, backend: &str, digits: u32, kwargs: Option<&Bound<'_, PyDict>>) -> PyResult<PyObject> {
            invoke(py, command_line($cmd, backend, digits, &options(kwargs)?))
        }
    };
}

subcommand!(classify, "classify");
subcommand!(build, "build");
subcommand!(connection, "connection");
subcommand!(holonomy, "holonomy");
subcommand!(ddbar, "ddbar");
subcommand!(strominger, "strominger");

/// `sweep(param, values, **kwargs)` returns the table as a list of rows (header first).
#[pyfunction]
#[pyo3(signature = (param, values, backend = "exact", digits = 64, **kwargs))]
fn sweep(
    param: &str,
    values: &Bound<'_, PyTuple>,
    backend: &str,
    digits: u32,
    kwargs: Option<&Bound<'_, PyDict>>,
) -> PyResult<Vec<Vec<String>>> {
    let mut opts = options(kwargs)?;
    let list: Vec<String> = values.iter().map(|v| v.str().map(|s| s.to_string())).collect::<PyResult<_>>()?;
    opts.push(("param".into(), Some(param.into())));
    opts.push(("values".into(), Some(list.join(","))));
    let mut args = command_line("sweep", backend, digits, &opts);
    args.retain(|a| a != "--json");
    let out = nilgeom::cli::run(args);
    match out.code {
        0 => Ok(out.stdout.lines().filter(|l| !l.starts_with('#')).map(|l| l.split('\t').map(String::from).collect()).collect()),
        1 => Err(PyValueError::new_err(out.stderr.trim().to_string())),
        _ => Err(PyRuntimeError::new_err(out.stderr.trim().to_string())),
    }
}

#[pymodule]
fn nilgeom_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_function(wrap_pyfunction!(run, m)?)?;
    m.add_function(wrap_pyfunction!(classify, m)?)?;
    m.add_function(wrap_pyfunction!(build, m)?)?;
    m.add_function(wrap_pyfunction!(connection, m)?)?;
    m.add_function(wrap_pyfunction!(holonomy, m)?)?;
    m.add_function(wrap_pyfunction!(ddbar, m)?)?;
    m.add_function(wrap_pyfunction!(strominger, m)?)?;
    m.add_function(wrap_pyfunction!(sweep, m)?)?;
    m.add("SCHEMA", "1")?;
    Ok(())
}
