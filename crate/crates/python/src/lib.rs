use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;

use pinwheel::aorta::{aorta_chain, exact_dimension, verify_ifs_invariance};
use pinwheel::census::{orientation_census, star_discrepancy};
use pinwheel::fixed::reflection_fixed;
use pinwheel::fractile::{catalog, classified_faces, count_classes, kite_domino_triangles};
use pinwheel::io::{load_patch, save_catalog, save_patch};
use pinwheel::spectral::catalog_spectrum;
use pinwheel::substitution::{supertile as build_supertile, kite_domino_rule, pinwheel_rule};
use pinwheel::ProtoId;

fn err(e: pinwheel::Error) -> PyErr {
    PyValueError::new_err(e.to_string())
}

fn parse_proto(name: &str) -> PyResult<ProtoId> {
    name.parse().map_err(err)
}

/// JSON of the level-`level` supertile of `proto`.
#[pyfunction]
#[pyo3(signature = (proto="triangle", level=1))]
fn supertile(proto: &str, level: u32) -> PyResult<String> {
    let p = parse_proto(proto)?;
    let rule = if p == ProtoId::Triangle { pinwheel_rule() } else { kite_domino_rule() };
    Ok(save_patch(&build_supertile(p, level, rule).map_err(err)?))
}

/// Number of tiles in a patch given as JSON.
#[pyfunction]
fn patch_size(json: &str) -> PyResult<usize> {
    Ok(load_patch(json).map_err(err)?.len())
}

#[pyfunction]
fn aorta_points(depth: u32) -> PyResult<Vec<(f64, f64)>> {
    Ok(aorta_chain(depth).map_err(err)?.to_f64())
}

#[pyfunction]
fn ifs_invariant(depth: u32) -> PyResult<bool> {
    verify_ifs_invariance(depth).map_err(err)
}

#[pyfunction]
fn dimension() -> f64 {
    exact_dimension()
}

/// `(faces, chiral classes, classes up to reflection)` of the marking of a
/// kite supertile built from `level - 1` kite-domino substitutions.
#[pyfunction]
fn fractile_counts(level: u32) -> PyResult<(usize, usize, usize)> {
    if !(1..=3).contains(&level) {
        return Err(PyValueError::new_err("level must be 1, 2 or 3"));
    }
    let faces = classified_faces(&kite_domino_triangles(ProtoId::Kite, level - 1)).map_err(err)?;
    let c = count_classes(&faces);
    Ok((c.faces, c.chiral, c.achiral))
}

/// `(perron value, areas as fractions, frequencies)`.
#[pyfunction]
#[pyo3(signature = (chiral=false))]
fn spectral(chiral: bool) -> PyResult<(f64, Vec<String>, Vec<f64>)> {
    let s = catalog_spectrum(catalog(), chiral).map_err(err)?;
    Ok((s.perron, s.areas.iter().map(ToString::to_string).collect(), s.frequencies))
}

#[pyfunction]
fn substitution_matrix(chiral: bool) -> Vec<Vec<u64>> {
    catalog().matrix(chiral).entries
}

#[pyfunction]
fn catalog_json() -> String {
    save_catalog(catalog())
}

#[pyfunction]
fn reflection_fixed_classes() -> Vec<usize> {
    reflection_fixed(catalog())
}

#[pyfunction]
fn orientation_count(level: u32) -> PyResult<usize> {
    Ok(orientation_census(level).map_err(err)?.distinct())
}

#[pyfunction]
fn discrepancy(theta: f64, m: usize) -> f64 {
    star_discrepancy(theta, m)
}

#[pymodule]
fn pinwheel_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_function(wrap_pyfunction!(supertile, m)?)?;
    m.add_function(wrap_pyfunction!(patch_size, m)?)?;
    m.add_function(wrap_pyfunction!(aorta_points, m)?)?;
    m.add_function(wrap_pyfunction!(ifs_invariant, m)?)?;
    m.add_function(wrap_pyfunction!(dimension, m)?)?;
    m.add_function(wrap_pyfunction!(fractile_counts, m)?)?;
    m.add_function(wrap_pyfunction!(spectral, m)?)?;
    m.add_function(wrap_pyfunction!(substitution_matrix, m)?)?;
    m.add_function(wrap_pyfunction!(catalog_json, m)?)?;
    m.add_function(wrap_pyfunction!(reflection_fixed_classes, m)?)?;
    m.add_function(wrap_pyfunction!(orientation_count, m)?)?;
    m.add_function(wrap_pyfunction!(discrepancy, m)?)?;
    Ok(())
}
