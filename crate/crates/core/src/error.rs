use thiserror::Error;

/// Errors raised by geometric constructions and checks.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("tangent vectors are based at different points (distance {0:e})")]
    BaseMismatch(f64),

    #[error("points coincide (distance {0:e})")]
    CoincidentPoints(f64),

    #[error("{name} = {value} is outside [{lo}, {hi}]")]
    Range {
        name: &'static str,
        value: f64,
        lo: f64,
        hi: f64,
    },

    #[error("point is not on the line (|<pole, p>| = {0:e})")]
    NotOnLine(f64),

    #[error("points are not a polar pair (distance {0})")]
    NotPolarPair(f64),

    #[error("vectors are not orthonormal (deviation {0:e})")]
    NotOrthonormal(f64),

    #[error("vectors are not orthogonal (|<v, w>| = {0:e})")]
    NotOrthogonal(f64),

    #[error("vector is not a tangent at the base point (deviation {0:e})")]
    NotTangent(f64),

    #[error("zero vector cannot be normalized")]
    ZeroVector,

    #[error("curve does not lie in the real plane")]
    NotInPlane,

    #[error("curve is not a closed geodesic of the real plane")]
    NotGeodesic,

    #[error("malformed system: {0}")]
    MalformedSystem(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn check_range(name: &'static str, value: f64, lo: f64, hi: f64) -> Result<()> {
    if value.is_nan() || value < lo || value > hi {
        return Err(Error::Range { name, value, lo, hi });
    }
    Ok(())
}
