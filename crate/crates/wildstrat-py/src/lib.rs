//! Python bindings for `wildstrat`.
//!
//! Rationals cross the boundary as strings (`"3"`, `"-1/2"`); any Python object whose `str()`
//! is such a string, including `int` and `fractions.Fraction`, is accepted as input. Results of
//! the high-level operations are returned as plain dictionaries decoded from the library's JSON.

use pyo3::create_exception;
use pyo3::exceptions::{PyException, PyValueError};
use pyo3::prelude::*;
use wildstrat::cli::{execute, CommonArgs, Command, Job};
use wildstrat::Error;

create_exception!(wildstrat, ClaimViolation, PyException, "A structural claim checked by the library failed.");

fn to_py(e: Error) -> PyErr {
    match e {
        Error::ClaimViolation(_) => ClaimViolation::new_err(e.to_string()),
        _ => PyValueError::new_err(e.to_string()),
    }
}

/// A reductive root datum with its Chevalley basis.
#[pyclass(name = "RootDatum", frozen)]
struct PyRootDatum {
    name: String,
    inner: wildstrat::RootDatum,
}

#[pymethods]
impl PyRootDatum {
    /// Builds the root datum named e.g. `"gl3"`, `"sl2"` or `"B2"`.
    #[new]
    fn new(name: &str) -> PyResult<Self> {
        let inner = wildstrat::RootDatum::from_name(name).map_err(to_py)?;
        Ok(PyRootDatum { name: name.to_string(), inner })
    }

    #[getter]
    fn name(&self) -> &str {
        &self.name
    }

    #[getter]
    fn rank(&self) -> usize {
        self.inner.rank()
    }

    #[getter]
    fn dim(&self) -> usize {
        self.inner.dim()
    }

    #[getter]
    fn cartan_dim(&self) -> usize {
        self.inner.cartan_dim()
    }

    #[getter]
    fn num_roots(&self) -> usize {
        self.inner.num_roots()
    }

    /// Cartan matrix of the simple roots.
    fn cartan_matrix(&self) -> Vec<Vec<i64>> {
        self.inner.cartan_matrix().to_vec()
    }

    /// Names of the Chevalley basis elements, Cartan part first.
    fn basis_names(&self) -> Vec<String> {
        (0..self.inner.dim()).map(|b| self.inner.basis_name(b).to_string()).collect()
    }

    /// Simple-root coordinates of root `k`.
    fn simple_coords(&self, k: usize) -> PyResult<Vec<i64>> {
        if k >= self.inner.num_roots() {
            return Err(PyValueError::new_err(format!("root index {k} out of range")));
        }
        Ok(self.inner.simple_coords(k).to_vec())
    }

    /// Bracket of two basis elements given by name, as `(name, coefficient)` pairs.
    fn bracket(&self, a: &str, b: &str) -> PyResult<Vec<(String, i64)>> {
        let idx = |n: &str| self.inner.basis_index(n).ok_or_else(|| PyValueError::new_err(format!("unknown basis element {n}")));
        let (i, j) = (idx(a)?, idx(b)?);
        Ok(self.inner.bracket_basis(i, j).iter().map(|&(k, c)| (self.inner.basis_name(k).to_string(), c)).collect())
    }

    fn __repr__(&self) -> String {
        format!("RootDatum('{}')", self.name)
    }
}

fn rational(x: &Bound<'_, PyAny>) -> PyResult<String> {
    Ok(x.str()?.to_string())
}

fn lambda_arg(lam: Option<Vec<Vec<Bound<'_, PyAny>>>>) -> PyResult<Option<String>> {
    lam.map(|degs| {
        degs.iter()
            .map(|d| d.iter().map(rational).collect::<PyResult<Vec<_>>>().map(|v| v.join(",")))
            .collect::<PyResult<Vec<_>>>()
            .map(|v| v.join(";"))
    })
    .transpose()
}

fn element_arg(terms: Option<Vec<(usize, String, Bound<'_, PyAny>)>>) -> PyResult<Option<String>> {
    terms
        .map(|ts| {
            ts.iter()
                .map(|(d, n, c)| Ok(format!("{d}:{n}:{}", rational(c)?)))
                .collect::<PyResult<Vec<_>>>()
                .map(|v| v.join(";"))
        })
        .transpose()
}

fn filtration_arg(f: Option<&Bound<'_, PyAny>>) -> PyResult<Option<String>> {
    match f {
        None => Ok(None),
        Some(v) => match v.extract::<String>() {
            Ok(s) => Ok(Some(s)),
            Err(_) => {
                let lists: Vec<Vec<usize>> = v.extract()?;
                Ok(Some(format!("{lists:?}")))
            }
        },
    }
}

#[allow(clippy::too_many_arguments)]
fn run<'py>(
    py: Python<'py>,
    command: Command,
    ty: &str,
    depth: Option<usize>,
    height: Option<usize>,
    order: Option<usize>,
    filtration: Option<String>,
    lambda: Option<String>,
    element: Option<String>,
    other: Option<String>,
    seed: Option<u64>,
) -> PyResult<Bound<'py, PyAny>> {
    let args = CommonArgs { ty: Some(ty.to_string()), depth, height, order, filtration, lambda, element, other, seed, ..Default::default() };
    let text = py
        .detach(|| {
            let job = Job::resolve(command, &args)?;
            let out = execute(&job)?;
            Ok::<_, Error>(out.json.to_string())
        })
        .map_err(to_py)?;
    py.import("json")?.call_method1("loads", (text,))
}

/// Levi poset of `type`; with `depth`, also the depth-`s` Levi filtrations and their Weyl quotient.
#[pyfunction]
#[pyo3(signature = (r#type, depth=None, seed=None))]
fn levi<'py>(py: Python<'py>, r#type: &str, depth: Option<usize>, seed: Option<u64>) -> PyResult<Bound<'py, PyAny>> {
    run(py, Command::Levi, r#type, depth, None, None, None, None, None, None, seed)
}

/// Parabolic subsets of `type`; with `depth`, also the count of parabolic filtrations.
#[pyfunction]
#[pyo3(signature = (r#type, depth=None))]
fn parabolic<'py>(py: Python<'py>, r#type: &str, depth: Option<usize>) -> PyResult<Bound<'py, PyAny>> {
    run(py, Command::Parabolic, r#type, depth, None, None, None, None, None, None, None)
}

/// Birkhoff normal form, stratum and centraliser of `element`, a list of `(deg, name, coeff)`.
/// With `other`, also decides whether the two elements are gauge equivalent.
#[pyfunction]
#[pyo3(signature = (r#type, element, other=None, depth=None))]
fn classify<'py>(
    py: Python<'py>,
    r#type: &str,
    element: Vec<(usize, String, Bound<'py, PyAny>)>,
    other: Option<Vec<(usize, String, Bound<'py, PyAny>)>>,
    depth: Option<usize>,
) -> PyResult<Bound<'py, PyAny>> {
    let (e, o) = (element_arg(Some(element))?, element_arg(other)?);
    run(py, Command::Classify, r#type, depth, None, None, None, None, e, o, None)
}

/// Admissibility, pairing and nonsingularity of the formal type `lam` (one list per degree).
#[pyfunction]
#[pyo3(signature = (r#type, lam, filtration=None))]
fn character<'py>(py: Python<'py>, r#type: &str, lam: Vec<Vec<Bound<'py, PyAny>>>, filtration: Option<&Bound<'py, PyAny>>) -> PyResult<Bound<'py, PyAny>> {
    let (l, f) = (lambda_arg(Some(lam))?, filtration_arg(filtration)?);
    run(py, Command::Character, r#type, None, None, None, f, l, None, None, None)
}

/// Shapovalov blocks up to relative height `height`, with ranks, determinants and factorisations.
#[pyfunction]
#[pyo3(signature = (r#type, lam, filtration=None, height=None))]
fn shapovalov<'py>(
    py: Python<'py>,
    r#type: &str,
    lam: Vec<Vec<Bound<'py, PyAny>>>,
    filtration: Option<&Bound<'py, PyAny>>,
    height: Option<usize>,
) -> PyResult<Bound<'py, PyAny>> {
    let (l, f) = (lambda_arg(Some(lam))?, filtration_arg(filtration)?);
    run(py, Command::Shapovalov, r#type, None, height, None, f, l, None, None, None)
}

/// Radical profile, truncated quotients and the simplicity probe up to relative height `height`.
#[pyfunction]
#[pyo3(signature = (r#type, lam, filtration=None, height=None))]
fn simplicity<'py>(
    py: Python<'py>,
    r#type: &str,
    lam: Vec<Vec<Bound<'py, PyAny>>>,
    filtration: Option<&Bound<'py, PyAny>>,
    height: Option<usize>,
) -> PyResult<Bound<'py, PyAny>> {
    let (l, f) = (lambda_arg(Some(lam))?, filtration_arg(filtration)?);
    run(py, Command::Simplicity, r#type, None, height, None, f, l, None, None, None)
}

/// Inverse Shapovalov series to ℏ-order `order`, its Poisson limit and the associativity check.
#[pyfunction]
#[pyo3(signature = (r#type, lam, filtration=None, height=None, order=None))]
fn quantize<'py>(
    py: Python<'py>,
    r#type: &str,
    lam: Vec<Vec<Bound<'py, PyAny>>>,
    filtration: Option<&Bound<'py, PyAny>>,
    height: Option<usize>,
    order: Option<usize>,
) -> PyResult<Bound<'py, PyAny>> {
    let (l, f) = (lambda_arg(Some(lam))?, filtration_arg(filtration)?);
    run(py, Command::Quantize, r#type, None, height, order, f, l, None, None, None)
}

#[pymodule]
#[pyo3(name = "wildstrat")]
fn wildstrat_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyRootDatum>()?;
    m.add("ClaimViolation", m.py().get_type::<ClaimViolation>())?;
    m.add_function(wrap_pyfunction!(levi, m)?)?;
    m.add_function(wrap_pyfunction!(parabolic, m)?)?;
    m.add_function(wrap_pyfunction!(classify, m)?)?;
    m.add_function(wrap_pyfunction!(character, m)?)?;
    m.add_function(wrap_pyfunction!(shapovalov, m)?)?;
    m.add_function(wrap_pyfunction!(simplicity, m)?)?;
    m.add_function(wrap_pyfunction!(quantize, m)?)?;
    Ok(())
}
