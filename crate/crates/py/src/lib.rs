//! Python bindings. Values cross the boundary as `CxE` objects or as their
//! canonical text forms.

use std::collections::hash_map::DefaultHasher;
use std::hash::{Hash, Hasher};

use escher::arith;
use escher::cxe::{self, Window};
use escher::expr;
use escher::laws;
use escher::plot;
use escher::rank0;
use escher::scalar::{parse_rational, PrecisionConfig};
use escher::EscherError as CoreError;
use num_bigint::BigInt;
use pyo3::create_exception;
use pyo3::exceptions::PyException;
use pyo3::prelude::*;

create_exception!(
    escher,
    EscherError,
    PyException,
    "Any error raised by the escher core."
);

fn err(e: CoreError) -> PyErr {
    EscherError::new_err(e.to_string())
}

/// An element of the extended complex carrier, `re + iπe·t` with `t` in [0, 2).
#[pyclass(name = "CxE", module = "escher", frozen, skip_from_py_object)]
#[derive(Clone)]
struct PyCxE(cxe::CxE);

#[pymethods]
impl PyCxE {
    /// Parses `4`, `s(4)`, `cx(re; t)` or any expression with an exact value.
    #[new]
    fn new(text: &str) -> PyResult<Self> {
        if let Ok(x) = text.parse::<cxe::CxE>() {
            return Ok(PyCxE(x));
        }
        let out = expr::Session::default().eval_line(text).map_err(err)?;
        out.value
            .and_then(|v| v.principal().cloned())
            .map(PyCxE)
            .ok_or_else(|| EscherError::new_err(format!("`{text}` has no exact value")))
    }

    fn __str__(&self) -> String {
        self.0.to_string()
    }

    fn __repr__(&self) -> String {
        format!("CxE('{}')", self.0)
    }

    fn __eq__(&self, other: &Self) -> bool {
        self.0 == other.0
    }

    fn __hash__(&self) -> u64 {
        let mut h = DefaultHasher::new();
        self.0.to_string().hash(&mut h);
        h.finish()
    }

    /// Real part as canonical text.
    #[getter]
    fn re(&self) -> String {
        self.0.re().to_string()
    }

    /// Imaginary coefficient `t` as canonical text.
    #[getter]
    fn t(&self) -> String {
        self.0.im().to_string()
    }

    fn is_real(&self) -> bool {
        self.0.is_real()
    }

    fn is_stigmareal(&self) -> bool {
        self.0.is_stigmareal()
    }

    fn is_escherian(&self) -> bool {
        self.0.is_escherian()
    }

    fn stigma(&self) -> PyResult<Self> {
        self.0.stigma().map(PyCxE).map_err(err)
    }

    fn stigmamodulo(&self) -> PyResult<Self> {
        self.0.stigmamodulo().map(PyCxE).map_err(err)
    }

    fn __add__(&self, other: &Self) -> PyResult<Self> {
        arith::add(&self.0, &other.0).map(PyCxE).map_err(err)
    }

    fn __sub__(&self, other: &Self) -> PyResult<Self> {
        arith::sub(&self.0, &other.0).map(PyCxE).map_err(err)
    }

    fn __mul__(&self, other: &Self) -> PyResult<Self> {
        arith::mul(&self.0, &other.0).map(PyCxE).map_err(err)
    }

    fn __neg__(&self) -> PyResult<Self> {
        arith::negate(&self.0).map(PyCxE).map_err(err)
    }

    /// Every quotient by the rational `q` (given as text, e.g. `"3"` or
    /// `"-2/3"`); the principal comes first.
    fn div(&self, q: &str) -> PyResult<Vec<Self>> {
        let set = arith::div_by_rational(&self.0, &parse_rational(q).map_err(err)?).map_err(err)?;
        Ok(set.members().cloned().map(PyCxE).collect())
    }
}

fn cfg() -> PrecisionConfig {
    PrecisionConfig::default()
}

/// Both successors, principal first.
#[pyfunction]
fn kis(x: &PyCxE, y: &PyCxE) -> PyResult<Vec<PyCxE>> {
    let set = rank0::kis(&x.0, &y.0, &cfg()).map_err(err)?;
    Ok(set.members().cloned().map(PyCxE).collect())
}

/// The principal `x` with `x kis given ∋ z`.
#[pyfunction]
fn sik(z: &PyCxE, x: &PyCxE) -> PyResult<PyCxE> {
    rank0::sik(&z.0, &x.0, &cfg()).map(PyCxE).map_err(err)
}

/// `"<"`, `"="` or `">"` under the pseudoorder.
#[pyfunction]
fn pseudo_cmp(a: &PyCxE, b: &PyCxE) -> PyResult<&'static str> {
    let c = cxe::pseudo_cmp(&a.0, &b.0, &cfg()).map_err(err)?;
    Ok(match c {
        cxe::PseudoCmp::PseudoLess => "<",
        cxe::PseudoCmp::PseudoEqual => "=",
        cxe::PseudoCmp::PseudoGreater => ">",
    })
}

/// Evaluates one expression and returns its printed value.
#[pyfunction]
#[pyo3(signature = (text, digits = 30))]
fn eval(text: &str, digits: usize) -> PyResult<String> {
    let mut s = expr::Session::default();
    s.digits = digits.max(1);
    s.eval_line(text).map(|o| o.text).map_err(err)
}

/// An evaluation session that keeps `let` bindings between lines.
#[pyclass(name = "Session", module = "escher")]
struct PySession(expr::Session);

#[pymethods]
impl PySession {
    #[new]
    #[pyo3(signature = (digits = 30))]
    fn new(digits: usize) -> Self {
        let mut s = expr::Session::default();
        s.digits = digits.max(1);
        PySession(s)
    }

    fn eval(&mut self, line: &str) -> PyResult<String> {
        self.0.eval_line(line).map(|o| o.text).map_err(err)
    }
}

#[pyfunction]
fn ackermann(m: u32, n: u64) -> PyResult<BigInt> {
    escher::ackermann(m, n).map_err(err)
}

#[pyfunction]
fn ackermann_mod(m: u32, n: u64) -> PyResult<BigInt> {
    escher::ackermann_mod(m, n).map_err(err)
}

/// Registered law ids in registry order.
#[pyfunction]
fn law_ids() -> Vec<String> {
    laws::law_ids()
}

/// Fuzzes the given law (or family); returns the reports as JSON text.
#[pyfunction]
#[pyo3(signature = (id, trials = 1000, seed = 42))]
fn check_law(id: &str, trials: usize, seed: u64) -> PyResult<String> {
    let selected = laws::resolve(id).map_err(err)?;
    let reports = laws::run_laws(&selected, seed, trials, &cfg());
    Ok(laws::reports_to_json(&reports))
}

/// Renders the pseudoorder around `center` as plain PPM text.
#[pyfunction]
#[pyo3(signature = (center, re_min = "-3", re_max = "3", t_min = "0", t_max = "2", width = 64, height = 64, band_marks = true))]
#[allow(clippy::too_many_arguments)]
fn plot_ppm(
    center: &PyCxE,
    re_min: &str,
    re_max: &str,
    t_min: &str,
    t_max: &str,
    width: usize,
    height: usize,
    band_marks: bool,
) -> PyResult<String> {
    let window = Window::new(
        parse_rational(re_min).map_err(err)?,
        parse_rational(re_max).map_err(err)?,
        parse_rational(t_min).map_err(err)?,
        parse_rational(t_max).map_err(err)?,
    )
    .map_err(err)?;
    let spec = plot::PlotSpec {
        center: center.0.clone(),
        window,
        width,
        height,
        band_marks,
    };
    plot::render(&spec, &cfg()).map(|r| r.to_ppm()).map_err(err)
}

#[pymodule]
#[pyo3(name = "escher")]
fn escher_module(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add("EscherError", m.py().get_type::<EscherError>())?;
    m.add_class::<PyCxE>()?;
    m.add_class::<PySession>()?;
    m.add_function(wrap_pyfunction!(kis, m)?)?;
    m.add_function(wrap_pyfunction!(sik, m)?)?;
    m.add_function(wrap_pyfunction!(pseudo_cmp, m)?)?;
    m.add_function(wrap_pyfunction!(eval, m)?)?;
    m.add_function(wrap_pyfunction!(ackermann, m)?)?;
    m.add_function(wrap_pyfunction!(ackermann_mod, m)?)?;
    m.add_function(wrap_pyfunction!(law_ids, m)?)?;
    m.add_function(wrap_pyfunction!(check_law, m)?)?;
    m.add_function(wrap_pyfunction!(plot_ppm, m)?)?;
    Ok(())
}
