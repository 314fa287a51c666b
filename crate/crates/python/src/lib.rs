//! Python bindings for the sumseq container.
//!
//! Exposes `SumSequence` (both element modes behind one class), opaque
//! `Cursor` handles for finger queries, and the reference functions
//! `naive_sum`, `pairwise_sum`, and `naive_stats`. Query results that
//! carry instrumentation come back as `(value, stats_dict)` tuples.

use pyo3::exceptions::{PyIndexError, PyOverflowError, PyRuntimeError, PyValueError};
use pyo3::prelude::*;
use pyo3::types::PyDict;
use pyo3::IntoPyObjectExt;
use sumseq::{oracle, Error, QueryStats, RangeStats, TreeConfig, Value};

fn to_py_err(err: Error) -> PyErr {
    let message = err.to_string();
    match err {
        Error::RankOutOfRange { .. } | Error::BoundsOutOfRange { .. } | Error::Boundary(_) => {
            PyIndexError::new_err(message)
        }
        Error::Overflow => PyOverflowError::new_err(message),
        Error::StaleCursor | Error::CursorOwner => PyRuntimeError::new_err(message),
        _ => PyValueError::new_err(message),
    }
}

fn stats_dict<'py>(py: Python<'py>, stats: &QueryStats) -> PyResult<Bound<'py, PyDict>> {
    let dict = PyDict::new(py);
    dict.set_item("nodes_visited", stats.nodes_visited)?;
    dict.set_item("additions", stats.additions)?;
    dict.set_item("subtractions", stats.subtractions)?;
    dict.set_item("levels_touched", stats.levels_touched)?;
    Ok(dict)
}

fn report_dict<'py, V>(py: Python<'py>, report: &RangeStats<V>) -> PyResult<Bound<'py, PyDict>>
where
    V: Value + for<'a> IntoPyObject<'a>,
    V::Sq: for<'a> IntoPyObject<'a>,
{
    let dict = PyDict::new(py);
    dict.set_item("count", report.count)?;
    dict.set_item("sum", report.sum)?;
    dict.set_item("sum_sq", report.sum_sq)?;
    dict.set_item("mean", report.mean)?;
    dict.set_item("variance", report.variance)?;
    dict.set_item("stddev", report.stddev)?;
    dict.set_item("stats", stats_dict(py, &report.stats)?)?;
    Ok(dict)
}

fn config(fanout: usize, track_squares: bool) -> PyResult<TreeConfig> {
    Ok(TreeConfig::new(fanout)
        .map_err(to_py_err)?
        .with_track_squares(track_squares))
}

/// A stable reference to one element of a `SumSequence`; invalidated by
/// any mutation of its owner.
#[pyclass(frozen, skip_from_py_object)]
#[derive(Clone, Copy)]
struct Cursor {
    inner: sumseq::Cursor,
}

enum Backend {
    I64(sumseq::SumSequence<i64>),
    F64(sumseq::SumSequence<f64>),
}

/// Indexed sequence with O(log n) rank access, prefix sums,
/// finger-search range sums, and range statistics.
///
/// Ranges are half-open `[from, to)` over 0-based ranks, except the
/// cursor form `range_sum_between(a, b)`, which is inclusive.
#[pyclass]
struct SumSequence {
    backend: Backend,
}

macro_rules! on_seq {
    ($self:expr, $seq:ident => $body:expr) => {
        match &$self.backend {
            Backend::I64($seq) => $body,
            Backend::F64($seq) => $body,
        }
    };
}

macro_rules! on_seq_mut {
    ($self:expr, $seq:ident => $body:expr) => {
        match &mut $self.backend {
            Backend::I64($seq) => $body,
            Backend::F64($seq) => $body,
        }
    };
}

#[pymethods]
impl SumSequence {
    /// Builds a sequence from an iterable of numbers.
    ///
    /// `mode` is `"f64"` (default) or `"i64"`; `fanout` is the maximum
    /// tree-node group size; `track_squares` enables range statistics.
    #[new]
    #[pyo3(signature = (values = None, mode = "f64", fanout = 8, track_squares = true))]
    fn new(
        values: Option<Bound<'_, PyAny>>,
        mode: &str,
        fanout: usize,
        track_squares: bool,
    ) -> PyResult<Self> {
        let config = config(fanout, track_squares)?;
        let backend = match mode {
            "i64" => {
                let values: Vec<i64> = values.map(|v| v.extract()).transpose()?.unwrap_or_default();
                Backend::I64(sumseq::SumSequence::build(&values, config).map_err(to_py_err)?)
            }
            "f64" => {
                let values: Vec<f64> = values.map(|v| v.extract()).transpose()?.unwrap_or_default();
                Backend::F64(sumseq::SumSequence::build(&values, config).map_err(to_py_err)?)
            }
            other => {
                return Err(PyValueError::new_err(format!(
                    "mode must be \"i64\" or \"f64\", got {other:?}"
                )))
            }
        };
        Ok(Self { backend })
    }

    fn __len__(&self) -> usize {
        on_seq!(self, seq => seq.len())
    }

    fn __repr__(&self) -> String {
        let mode = match self.backend {
            Backend::I64(_) => "i64",
            Backend::F64(_) => "f64",
        };
        let (len, levels) = on_seq!(self, seq => (seq.len(), seq.level_count()));
        format!("SumSequence(mode={mode:?}, len={len}, levels={levels})")
    }

    /// The value stored at `rank`.
    fn value_at(&self, py: Python<'_>, rank: usize) -> PyResult<Py<PyAny>> {
        on_seq!(self, seq => seq.value_at(rank).map_err(to_py_err)?.into_py_any(py))
    }

    /// All values in rank order.
    fn values(&self, py: Python<'_>) -> PyResult<Py<PyAny>> {
        on_seq!(self, seq => seq.values().collect::<Vec<_>>().into_py_any(py))
    }

    /// Inserts `value` at `rank`, shifting later ranks up by one.
    fn insert(&mut self, rank: usize, value: Bound<'_, PyAny>) -> PyResult<()> {
        on_seq_mut!(self, seq => seq.insert(rank, value.extract()?).map_err(to_py_err))
    }

    /// Removes and returns the value at `rank`.
    fn remove(&mut self, py: Python<'_>, rank: usize) -> PyResult<Py<PyAny>> {
        on_seq_mut!(self, seq => seq.remove(rank).map_err(to_py_err)?.into_py_any(py))
    }

    /// Replaces the value at `rank`, returning the previous value.
    fn set_value(
        &mut self,
        py: Python<'_>,
        rank: usize,
        value: Bound<'_, PyAny>,
    ) -> PyResult<Py<PyAny>> {
        on_seq_mut!(self, seq => {
            seq.set_value(rank, value.extract()?).map_err(to_py_err)?.into_py_any(py)
        })
    }

    /// Cursor to the element at `rank`.
    fn select(&self, rank: usize) -> PyResult<Cursor> {
        on_seq!(self, seq => Ok(Cursor { inner: seq.select(rank).map_err(to_py_err)? }))
    }

    /// Number of elements strictly before the cursor's element.
    fn rank_of(&self, cursor: &Cursor) -> PyResult<usize> {
        on_seq!(self, seq => seq.rank_of(cursor.inner).map_err(to_py_err))
    }

    /// The value under a cursor.
    fn cursor_value(&self, py: Python<'_>, cursor: &Cursor) -> PyResult<Py<PyAny>> {
        on_seq!(self, seq => seq.cursor_value(cursor.inner).map_err(to_py_err)?.into_py_any(py))
    }

    /// Constant-time step to the next element.
    fn cursor_next(&self, cursor: &Cursor) -> PyResult<Cursor> {
        on_seq!(self, seq => Ok(Cursor { inner: seq.cursor_next(cursor.inner).map_err(to_py_err)? }))
    }

    /// Constant-time step to the previous element.
    fn cursor_prev(&self, cursor: &Cursor) -> PyResult<Cursor> {
        on_seq!(self, seq => Ok(Cursor { inner: seq.cursor_prev(cursor.inner).map_err(to_py_err)? }))
    }

    /// Sum of the first `n` elements, as `(value, stats)`.
    fn prefix_sum(&self, py: Python<'_>, n: usize) -> PyResult<(Py<PyAny>, Py<PyAny>)> {
        on_seq!(self, seq => {
            let r = seq.prefix_sum(n).map_err(to_py_err)?;
            Ok((r.value.into_py_any(py)?, stats_dict(py, &r.stats)?.into_py_any(py)?))
        })
    }

    /// Sum of all elements, as `(value, stats)`.
    fn total_sum(&self, py: Python<'_>) -> PyResult<(Py<PyAny>, Py<PyAny>)> {
        on_seq!(self, seq => {
            let r = seq.total_sum().map_err(to_py_err)?;
            Ok((r.value.into_py_any(py)?, stats_dict(py, &r.stats)?.into_py_any(py)?))
        })
    }

    /// Sum of the elements at ranks `[from_rank, to_rank)`, as
    /// `(value, stats)`.
    fn range_sum(
        &self,
        py: Python<'_>,
        from_rank: usize,
        to_rank: usize,
    ) -> PyResult<(Py<PyAny>, Py<PyAny>)> {
        on_seq!(self, seq => {
            let r = seq.range_sum(from_rank, to_rank).map_err(to_py_err)?;
            Ok((r.value.into_py_any(py)?, stats_dict(py, &r.stats)?.into_py_any(py)?))
        })
    }

    /// Inclusive sum between two cursors via the pure finger path.
    fn range_sum_between(
        &self,
        py: Python<'_>,
        a: &Cursor,
        b: &Cursor,
    ) -> PyResult<(Py<PyAny>, Py<PyAny>)> {
        on_seq!(self, seq => {
            let r = seq.range_sum_between(a.inner, b.inner).map_err(to_py_err)?;
            Ok((r.value.into_py_any(py)?, stats_dict(py, &r.stats)?.into_py_any(py)?))
        })
    }

    /// Range sum as the difference of two prefix sums (for comparison).
    fn range_sum_diff(
        &self,
        py: Python<'_>,
        from_rank: usize,
        to_rank: usize,
    ) -> PyResult<(Py<PyAny>, Py<PyAny>)> {
        on_seq!(self, seq => {
            let r = seq.range_sum_diff(from_rank, to_rank).map_err(to_py_err)?;
            Ok((r.value.into_py_any(py)?, stats_dict(py, &r.stats)?.into_py_any(py)?))
        })
    }

    /// Number of elements in `[from_rank, to_rank)`.
    fn range_count(&self, from_rank: usize, to_rank: usize) -> PyResult<usize> {
        on_seq!(self, seq => seq.range_count(from_rank, to_rank).map_err(to_py_err))
    }

    /// Mean of `[from_rank, to_rank)`, as `(value, stats)`.
    fn range_mean(
        &self,
        py: Python<'_>,
        from_rank: usize,
        to_rank: usize,
    ) -> PyResult<(f64, Py<PyAny>)> {
        on_seq!(self, seq => {
            let r = seq.range_mean(from_rank, to_rank).map_err(to_py_err)?;
            Ok((r.value, stats_dict(py, &r.stats)?.into_py_any(py)?))
        })
    }

    /// Sum of squared values over `[from_rank, to_rank)`, as
    /// `(value, stats)`.
    fn range_sum_sq(
        &self,
        py: Python<'_>,
        from_rank: usize,
        to_rank: usize,
    ) -> PyResult<(Py<PyAny>, Py<PyAny>)> {
        on_seq!(self, seq => {
            let r = seq.range_sum_sq(from_rank, to_rank).map_err(to_py_err)?;
            Ok((r.value.into_py_any(py)?, stats_dict(py, &r.stats)?.into_py_any(py)?))
        })
    }

    /// Population variance of `[from_rank, to_rank)`, as `(value, stats)`.
    fn range_variance(
        &self,
        py: Python<'_>,
        from_rank: usize,
        to_rank: usize,
    ) -> PyResult<(f64, Py<PyAny>)> {
        on_seq!(self, seq => {
            let r = seq.range_variance(from_rank, to_rank).map_err(to_py_err)?;
            Ok((r.value, stats_dict(py, &r.stats)?.into_py_any(py)?))
        })
    }

    /// Population standard deviation of `[from_rank, to_rank)`, as
    /// `(value, stats)`.
    fn range_stddev(
        &self,
        py: Python<'_>,
        from_rank: usize,
        to_rank: usize,
    ) -> PyResult<(f64, Py<PyAny>)> {
        on_seq!(self, seq => {
            let r = seq.range_stddev(from_rank, to_rank).map_err(to_py_err)?;
            Ok((r.value, stats_dict(py, &r.stats)?.into_py_any(py)?))
        })
    }

    /// Count, sum, sum of squares, mean, variance, and standard
    /// deviation of `[from_rank, to_rank)` from one traversal, as a dict.
    fn stats_report(&self, py: Python<'_>, from_rank: usize, to_rank: usize) -> PyResult<Py<PyAny>> {
        match &self.backend {
            Backend::I64(seq) => {
                let report = seq.stats_report(from_rank, to_rank).map_err(to_py_err)?;
                report_dict(py, &report)?.into_py_any(py)
            }
            Backend::F64(seq) => {
                let report = seq.stats_report(from_rank, to_rank).map_err(to_py_err)?;
                report_dict(py, &report)?.into_py_any(py)
            }
        }
    }

    /// Full structural validation; returns
    /// `{"ok": bool, "violations": [(level, ordinal, rule, detail), ...]}`.
    fn validate(&self, py: Python<'_>) -> PyResult<Py<PyAny>> {
        let report = on_seq!(self, seq => seq.validate());
        let dict = PyDict::new(py);
        dict.set_item("ok", report.ok)?;
        let violations: Vec<(usize, usize, String, String)> = report
            .violations
            .into_iter()
            .map(|v| (v.level, v.ordinal, v.rule.to_string(), v.detail))
            .collect();
        dict.set_item("violations", violations)?;
        dict.into_py_any(py)
    }

    /// Rebuilds the structure from its current contents.
    fn rebuild(&mut self) {
        on_seq_mut!(self, seq => seq.rebuild())
    }

    /// Total nodes allocated over the sequence's lifetime.
    fn nodes_created(&self) -> u64 {
        on_seq!(self, seq => seq.nodes_created())
    }

    /// Number of tree levels, including the element level.
    fn level_count(&self) -> usize {
        on_seq!(self, seq => seq.level_count())
    }
}

/// Left-to-right loop sum over ranks `[from_rank, to_rank)` of a list;
/// the ground-truth reference for the tree's range sums.
#[pyfunction]
fn naive_sum(
    py: Python<'_>,
    values: Bound<'_, PyAny>,
    from_rank: usize,
    to_rank: usize,
) -> PyResult<Py<PyAny>> {
    if let Ok(ints) = values.extract::<Vec<i64>>() {
        return oracle::naive_sum(&ints, from_rank, to_rank)
            .map_err(to_py_err)?
            .into_py_any(py);
    }
    let floats: Vec<f64> = values.extract()?;
    oracle::naive_sum(&floats, from_rank, to_rank)
        .map_err(to_py_err)?
        .into_py_any(py)
}

/// Pairwise reduction of a list, returning `(total, rounds, additions)`;
/// rounds model parallel time steps.
#[pyfunction]
fn pairwise_sum(py: Python<'_>, values: Bound<'_, PyAny>) -> PyResult<(Py<PyAny>, u32, u64)> {
    if let Ok(ints) = values.extract::<Vec<i64>>() {
        let r = oracle::pairwise_sum(&ints).map_err(to_py_err)?;
        return Ok((r.total.into_py_any(py)?, r.rounds, r.additions));
    }
    let floats: Vec<f64> = values.extract()?;
    let r = oracle::pairwise_sum(&floats).map_err(to_py_err)?;
    Ok((r.total.into_py_any(py)?, r.rounds, r.additions))
}

/// Two-pass reference statistics over ranks `[from_rank, to_rank)` of a
/// list, as a dict.
#[pyfunction]
fn naive_stats(
    py: Python<'_>,
    values: Vec<f64>,
    from_rank: usize,
    to_rank: usize,
) -> PyResult<Py<PyAny>> {
    let s = oracle::naive_stats(&values, from_rank, to_rank).map_err(to_py_err)?;
    let dict = PyDict::new(py);
    dict.set_item("count", s.count)?;
    dict.set_item("sum", s.sum)?;
    dict.set_item("sum_sq", s.sum_sq)?;
    dict.set_item("mean", s.mean)?;
    dict.set_item("variance", s.variance)?;
    dict.into_py_any(py)
}

#[pymodule]
fn sumseq_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add("__version__", env!("CARGO_PKG_VERSION"))?;
    m.add_class::<SumSequence>()?;
    m.add_class::<Cursor>()?;
    m.add_function(wrap_pyfunction!(naive_sum, m)?)?;
    m.add_function(wrap_pyfunction!(pairwise_sum, m)?)?;
    m.add_function(wrap_pyfunction!(naive_stats, m)?)?;
    Ok(())
}
