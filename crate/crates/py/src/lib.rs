//! Python bindings. Exact elements are exposed as a class; the
//! constructions return their certificates as dictionaries whose numbers
//! are strings, exactly as the CLI reports them.

use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;
use pyo3::types::PyModule;
use rug::Integer;
use serde::Serialize;

use cft_core::bigcomplex::Prec;
use cft_core::cm::{degree_report, imag_quad};
use cft_core::cyclotomic::{cyc_reduce, parse_rat, CycElem as Elem, SubgroupData};
use cft_core::modfunc::{eta, j_invariant, siegel_g, wp_value, EtaNorm, FracIndex, TauPoint};
use cft_core::{acceptance, coprime, norm_gen, normal_elem, trace_gen, CftError};

fn err(e: CftError) -> PyErr {
    PyValueError::new_err(e.to_string())
}

fn strings(v: serde_json::Value) -> serde_json::Value {
    use serde_json::Value;
    match v {
        Value::Number(n) => Value::String(n.to_string()),
        Value::Array(a) => Value::Array(a.into_iter().map(strings).collect()),
        Value::Object(o) => Value::Object(o.into_iter().map(|(k, v)| (k, strings(v))).collect()),
        other => other,
    }
}

fn to_dict<'py>(py: Python<'py>, x: &impl Serialize) -> PyResult<Bound<'py, PyAny>> {
    let v = serde_json::to_value(x).map_err(|e| PyValueError::new_err(e.to_string()))?;
    let text = strings(v).to_string();
    PyModule::import(py, "json")?.call_method1("loads", (text,))
}

#[pyclass(name = "CycElem", frozen, eq, skip_from_py_object)]
#[derive(Clone, PartialEq)]
struct PyCycElem(Elem);

#[pymethods]
impl PyCycElem {
    /// sum c_k zeta_m^k, reduced; coefficients are ints or "p/q" strings.
    #[new]
    fn new(m: u64, coeffs: Vec<Bound<'_, PyAny>>) -> PyResult<Self> {
        let terms = coeffs
            .iter()
            .enumerate()
            .map(|(k, c)| Ok((k as i64, parse_rat(&c.to_string())?)))
            .collect::<Result<Vec<_>, CftError>>()
            .map_err(err)?;
        Ok(PyCycElem(cyc_reduce(m, terms).map_err(err)?))
    }

    #[staticmethod]
    fn zeta(m: u64) -> Self {
        PyCycElem(Elem::zeta(m))
    }

    #[getter]
    fn conductor(&self) -> u64 {
        self.0.conductor()
    }

    fn coeffs(&self) -> Vec<String> {
        self.0.coeff_strings()
    }

    fn apply(&self, a: i64) -> PyResult<Self> {
        Ok(PyCycElem(self.0.apply(a).map_err(err)?))
    }

    fn norm(&self) -> String {
        self.0.norm_to_q().to_string()
    }

    fn trace(&self) -> String {
        self.0.trace_to_q().to_string()
    }

    fn is_algebraic_integer(&self) -> bool {
        self.0.is_algebraic_integer()
    }

    fn inverse(&self) -> PyResult<Self> {
        Ok(PyCycElem(self.0.inv().map_err(err)?))
    }

    fn __add__(&self, o: &Self) -> Self {
        PyCycElem(&self.0 + &o.0)
    }

    fn __sub__(&self, o: &Self) -> Self {
        PyCycElem(&self.0 - &o.0)
    }

    fn __mul__(&self, o: &Self) -> Self {
        PyCycElem(&self.0 * &o.0)
    }

    fn __truediv__(&self, o: &Self) -> PyResult<Self> {
        Ok(PyCycElem(self.0.try_div(&o.0).map_err(err)?))
    }

    fn __neg__(&self) -> Self {
        PyCycElem(-&self.0)
    }

    fn __pow__(&self, n: i64, _modulo: Option<i64>) -> PyResult<Self> {
        Ok(PyCycElem(self.0.pow(n).map_err(err)?))
    }

    fn __repr__(&self) -> String {
        format!("CycElem({}, {})", self.0.conductor(), self.0)
    }

    fn __str__(&self) -> String {
        self.0.to_string()
    }
}

/// M_i = 1 + N_i * prod_{k<i} M_k for nonnegative integers N_i.
#[pyfunction]
fn coprime_seq<'py>(py: Python<'py>, inputs: Vec<Bound<'py, PyAny>>) -> PyResult<Vec<Bound<'py, PyAny>>> {
    let ns = inputs
        .iter()
        .map(|x| {
            x.to_string()
                .parse::<Integer>()
                .map_err(|_| PyValueError::new_err(format!("not an integer: {x}")))
        })
        .collect::<PyResult<Vec<_>>>()?;
    let seq = coprime::coprime_seq(&ns).map_err(err)?;
    let int = PyModule::import(py, "builtins")?.getattr("int")?;
    seq.outputs.iter().map(|m| int.call1((m.to_string(),))).collect()
}

#[pyfunction]
#[pyo3(name = "trace_gen", signature = (m, use_radical = true))]
fn py_trace_gen(py: Python<'_>, m: u64, use_radical: bool) -> PyResult<Bound<'_, PyAny>> {
    let cert = trace_gen::construct_trace_generator(m, use_radical).map_err(err)?;
    to_dict(py, &cert)
}

/// `tower` lists each subgroup H_0, ..., H_t by its generators.
#[pyfunction]
#[pyo3(name = "norm_gen", signature = (m, tower, n_set = None))]
fn py_norm_gen(py: Python<'_>, m: u64, tower: Vec<Vec<u64>>, n_set: Option<Vec<i64>>) -> PyResult<Bound<'_, PyAny>> {
    let chain = tower
        .iter()
        .map(|g| SubgroupData::generated_by(m, g))
        .collect::<Result<Vec<_>, _>>()
        .map_err(err)?;
    let t = norm_gen::TowerData::new(m, chain).map_err(err)?;
    let n_set = n_set.unwrap_or_else(|| norm_gen::DEFAULT_N_SET.to_vec());
    let cert = norm_gen::construct_norm_element(&t, &n_set).map_err(err)?;
    to_dict(py, &cert)
}

#[pyfunction]
#[pyo3(signature = (m, alpha = None))]
fn normal_element<'py>(py: Python<'py>, m: u64, alpha: Option<&PyCycElem>) -> PyResult<Bound<'py, PyAny>> {
    let a = alpha.map_or_else(|| Elem::zeta(m), |x| x.0.clone());
    let cert = normal_elem::construct_normal_element(&a, m, normal_elem::DEFAULT_M_DIGIT_WARNING).map_err(err)?;
    to_dict(py, &cert)
}

#[pyfunction]
fn is_normal(u: &PyCycElem, m: u64) -> PyResult<bool> {
    normal_elem::is_normal(&u.0, m).map_err(err)
}

/// Evaluates eta, siegel, wp or j at tau = "re,im".
#[pyfunction]
#[pyo3(signature = (func, tau, index = None, digits = 64))]
fn modfun<'py>(py: Python<'py>, func: &str, tau: &str, index: Option<&str>, digits: u32) -> PyResult<Bound<'py, PyAny>> {
    let prec = Prec::new(digits).map_err(err)?;
    let t = TauPoint::parse(tau, prec.tail_digits).map_err(err)?;
    let idx = || -> PyResult<FracIndex> {
        let s = index.ok_or_else(|| PyValueError::new_err(format!("{func} needs an index \"a,b,N\"")))?;
        FracIndex::parse(s).map_err(err)
    };
    let v = match func {
        "eta" => eta(&t, EtaNorm::Paper, &prec),
        "siegel" => siegel_g(&idx()?, &t, &prec),
        "wp" => wp_value(&idx()?, &t, &prec),
        "j" => j_invariant(&t, &prec),
        other => return Err(PyValueError::new_err(format!("unknown function {other:?}"))),
    }
    .map_err(err)?;
    to_dict(py, &v)
}

#[pyfunction]
fn cm_degrees(py: Python<'_>, d_k: i64, level: u64) -> PyResult<Bound<'_, PyAny>> {
    let k = imag_quad(d_k).map_err(err)?;
    to_dict(py, &degree_report(&k, level).map_err(err)?)
}

/// Runs acceptance criteria (all when `ids` is None); returns id -> passed.
#[pyfunction]
#[pyo3(signature = (ids = None))]
fn verify(ids: Option<Vec<usize>>) -> PyResult<Vec<(usize, bool)>> {
    let cfg = acceptance::AcceptanceConfig::default();
    let ids = ids.unwrap_or_else(|| (1..=acceptance::CRITERIA).collect());
    ids.into_iter()
        .map(|id| {
            let t = acceptance::run_criterion(id, &cfg).map_err(err)?;
            Ok((id, t.result.passed))
        })
        .collect()
}

#[pymodule]
fn cft(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyCycElem>()?;
    m.add_function(wrap_pyfunction!(coprime_seq, m)?)?;
    m.add_function(wrap_pyfunction!(py_trace_gen, m)?)?;
    m.add_function(wrap_pyfunction!(py_norm_gen, m)?)?;
    m.add_function(wrap_pyfunction!(normal_element, m)?)?;
    m.add_function(wrap_pyfunction!(is_normal, m)?)?;
    m.add_function(wrap_pyfunction!(modfun, m)?)?;
    m.add_function(wrap_pyfunction!(cm_degrees, m)?)?;
    m.add_function(wrap_pyfunction!(verify, m)?)?;
    Ok(())
}
