//! Shared plain-text formatting for CSV output.

/// Render a real with six significant digits in scientific notation.
/// Used consistently across CSV writers so identical runs produce
/// byte-identical files.
pub(crate) fn real6(x: f64) -> String {
    format!("{x:.5e}")
}
