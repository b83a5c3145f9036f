use serde::Serialize;

/// A value together with the warnings raised while computing it.
#[derive(Debug, Clone, PartialEq)]
pub struct Annotated<T> {
    pub value: T,
    pub warnings: Vec<String>,
}

impl<T> Annotated<T> {
    pub fn new(value: T) -> Self {
        Self { value, warnings: Vec::new() }
    }

    pub fn with_warnings(value: T, warnings: Vec<String>) -> Self {
        Self { value, warnings }
    }
}

/// Clamps a frequency cutoff to the grid band, recording a warning when
/// the request exceeds it.
pub(crate) fn clamp_cutoff(requested: f64, band: f64, label: &str, warnings: &mut Vec<String>) -> f64 {
    if requested > band {
        warnings.push(format!(
            "{label} = {requested} exceeds the grid band {band:.6}; clamped to the band"
        ));
        band
    } else {
        requested
    }
}

/// Summary statistics describing how a reconstruction was produced.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Diagnostics {
    pub pathway: String,
    pub a1: f64,
    pub a2: f64,
    pub x0: f64,
    pub window: String,
    /// Pointwise error bound computed from the spectral tails of `f` and `g`.
    pub tail_estimate: Option<f64>,
    /// Fraction of the spectral mass of `f` in the outer tenth of the grid
    /// band; large values indicate an under-resolved signal.
    pub band_edge_ratio: Option<f64>,
    pub warnings: Vec<String>,
}
