//! Python bindings: alphabets, expressions, formulas, lassos and the proof
//! checker. Errors surface as `ValueError`.

use ::omega_rll as core;
use core::algebra;
use core::automaton::apa_of;
use core::calculus::{check_proof_text, derive_complement, Verdict};
use core::closure::fl_closure;
use core::game::{equiv_bounded, inclusion_bounded, member_game, Bounds};
use core::semantics::{member_multl, member_oracle, Lasso};
use core::syntax::{parse_closed_expr, parse_closed_formula, parse_expr_document, parse_formula_document};
use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;

fn err(e: impl std::fmt::Display) -> PyErr {
    PyValueError::new_err(e.to_string())
}

#[pyclass(name = "Alphabet", module = "omega_rll", frozen)]
struct PyAlphabet(core::Alphabet);

#[pymethods]
impl PyAlphabet {
    #[new]
    fn new(letters: Vec<String>) -> PyResult<Self> {
        core::Alphabet::new(letters).map(PyAlphabet).map_err(err)
    }

    /// The alphabet of all subsets of `props`.
    #[staticmethod]
    fn powerset(props: Vec<String>) -> PyResult<Self> {
        core::Alphabet::powerset(props).map(PyAlphabet).map_err(err)
    }

    #[getter]
    fn letters(&self) -> Vec<String> {
        self.0.names().to_vec()
    }

    #[getter]
    fn props(&self) -> Option<Vec<String>> {
        self.0.props().map(<[String]>::to_vec)
    }

    fn __len__(&self) -> usize {
        self.0.len()
    }

    fn __str__(&self) -> String {
        self.0.header()
    }

    fn __repr__(&self) -> String {
        format!("Alphabet({:?})", self.0.header())
    }

    fn __eq__(&self, other: &Self) -> bool {
        self.0 == other.0
    }
}

/// A closed expression together with its alphabet.
#[pyclass(name = "Expr", module = "omega_rll", frozen)]
struct PyExpr {
    expr: core::Expr,
    alphabet: core::Alphabet,
}

fn lasso(text: &str, alphabet: &core::Alphabet) -> PyResult<Lasso> {
    Lasso::parse(text, alphabet).map_err(err)
}

fn bounds(max_prefix: usize, max_period: usize) -> Bounds {
    Bounds { max_prefix, max_period }
}

#[pymethods]
impl PyExpr {
    #[new]
    fn new(text: &str, alphabet: &PyAlphabet) -> PyResult<Self> {
        let expr = parse_closed_expr(text, &alphabet.0).map_err(err)?;
        Ok(PyExpr { expr, alphabet: alphabet.0.clone() })
    }

    /// Parses a document with an `alphabet ...;` or `props ...;` header.
    #[staticmethod]
    fn parse_document(text: &str) -> PyResult<Self> {
        let doc = parse_expr_document(text, None).map_err(err)?;
        Ok(PyExpr { expr: doc.body, alphabet: doc.alphabet })
    }

    #[getter]
    fn alphabet(&self) -> PyAlphabet {
        PyAlphabet(self.alphabet.clone())
    }

    fn size(&self) -> usize {
        self.expr.size()
    }

    /// Membership of a lasso such as `"b(ab)"`; `via` is `"game"` or `"oracle"`.
    #[pyo3(signature = (word, via = "game"))]
    fn member(&self, word: &str, via: &str) -> PyResult<bool> {
        let w = lasso(word, &self.alphabet)?;
        match via {
            "game" => member_game(&self.expr, &w).map_err(err),
            "oracle" => member_oracle(&self.expr, &w).map_err(err),
            other => Err(err(format!("unknown method `{other}`"))),
        }
    }

    fn complement(&self) -> PyExpr {
        PyExpr { expr: algebra::complement(&self.expr, &self.alphabet), alphabet: self.alphabet.clone() }
    }

    fn to_multl(&self) -> PyResult<PyFormula> {
        let formula = algebra::to_multl(&self.expr, &self.alphabet).map_err(err)?;
        Ok(PyFormula { formula, alphabet: self.alphabet.clone() })
    }

    fn closure(&self) -> PyResult<String> {
        Ok(fl_closure(&self.expr).map_err(err)?.to_text(&self.alphabet))
    }

    fn apa_dot(&self) -> PyResult<String> {
        Ok(apa_of(&self.expr, &self.alphabet).map_err(err)?.to_dot())
    }

    /// First lasso within the bounds on which the two languages differ.
    #[pyo3(signature = (other, max_prefix = 2, max_period = 3))]
    fn equiv(&self, other: &PyExpr, max_prefix: usize, max_period: usize) -> PyResult<Option<String>> {
        same_alphabet(self, other)?;
        let found = equiv_bounded(&self.expr, &other.expr, &self.alphabet, bounds(max_prefix, max_period));
        Ok(found.map_err(err)?.map(|w| w.to_text(&self.alphabet)))
    }

    /// First lasso within the bounds in `self` but not in `other`.
    #[pyo3(signature = (other, max_prefix = 2, max_period = 3))]
    fn included_in(&self, other: &PyExpr, max_prefix: usize, max_period: usize) -> PyResult<Option<String>> {
        same_alphabet(self, other)?;
        let found = inclusion_bounded(&self.expr, &other.expr, &self.alphabet, bounds(max_prefix, max_period));
        Ok(found.map_err(err)?.map(|w| w.to_text(&self.alphabet)))
    }

    /// The two derivations `top <= e + e^c` and `e & e^c <= 0` as JSON.
    fn derive_complement(&self) -> PyResult<(String, String)> {
        let (join, meet) = derive_complement(&self.expr, &self.alphabet).map_err(err)?;
        Ok((join.to_json(), meet.to_json()))
    }

    fn __str__(&self) -> String {
        self.expr.to_text(&self.alphabet)
    }

    fn __repr__(&self) -> String {
        format!("Expr({:?})", self.expr.to_text(&self.alphabet))
    }

    fn __eq__(&self, other: &Self) -> bool {
        self.alphabet == other.alphabet && self.expr.alpha_eq(&other.expr)
    }
}

fn same_alphabet(a: &PyExpr, b: &PyExpr) -> PyResult<()> {
    if a.alphabet == b.alphabet {
        Ok(())
    } else {
        Err(err("expressions are over different alphabets"))
    }
}

/// A closed linear-time mu-calculus formula over a powerset alphabet.
#[pyclass(name = "Formula", module = "omega_rll", frozen)]
struct PyFormula {
    formula: core::Formula,
    alphabet: core::Alphabet,
}

#[pymethods]
impl PyFormula {
    #[new]
    fn new(text: &str, alphabet: &PyAlphabet) -> PyResult<Self> {
        let formula = parse_closed_formula(text, &alphabet.0).map_err(err)?;
        Ok(PyFormula { formula, alphabet: alphabet.0.clone() })
    }

    #[staticmethod]
    fn parse_document(text: &str) -> PyResult<Self> {
        let doc = parse_formula_document(text, None).map_err(err)?;
        Ok(PyFormula { formula: doc.body, alphabet: doc.alphabet })
    }

    fn member(&self, word: &str) -> PyResult<bool> {
        member_multl(&self.formula, &lasso(word, &self.alphabet)?, &self.alphabet).map_err(err)
    }

    fn to_rll(&self) -> PyResult<PyExpr> {
        let expr = algebra::to_rll(&self.formula, &self.alphabet).map_err(err)?;
        Ok(PyExpr { expr, alphabet: self.alphabet.clone() })
    }

    fn __str__(&self) -> String {
        self.formula.to_string()
    }

    fn __repr__(&self) -> String {
        format!("Formula({:?})", self.formula.to_string())
    }
}

/// Checks a JSON derivation. Returns `(accepted, message)`.
#[pyfunction]
fn check_proof(text: &str) -> PyResult<(bool, String)> {
    let v = check_proof_text(text).map_err(err)?;
    Ok((matches!(v, Verdict::Accepted { .. }), v.to_string()))
}

#[pymodule]
fn omega_rll(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyAlphabet>()?;
    m.add_class::<PyExpr>()?;
    m.add_class::<PyFormula>()?;
    m.add_function(wrap_pyfunction!(check_proof, m)?)?;
    Ok(())
}
