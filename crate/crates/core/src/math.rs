//! Float helpers routed through `libm` so results do not depend on the
//! platform's libm or on whether `std` is enabled.

pub(crate) fn exp(x: f64) -> f64 {
    libm::exp(x)
}

pub(crate) fn ln(x: f64) -> f64 {
    libm::log(x)
}

pub(crate) fn sqrt(x: f64) -> f64 {
    libm::sqrt(x)
}

pub(crate) fn ceil(x: f64) -> f64 {
    libm::ceil(x)
}

pub(crate) fn floor(x: f64) -> f64 {
    libm::floor(x)
}

pub(crate) fn abs(x: f64) -> f64 {
    libm::fabs(x)
}

pub(crate) fn round(x: f64) -> f64 {
    libm::round(x)
}

/// Small-exponent integer power by repeated multiplication (deterministic,
/// exponents here never exceed single digits).
pub(crate) fn powi(base: f64, n: u32) -> f64 {
    let mut acc = 1.0;
    for _ in 0..n {
        acc *= base;
    }
    acc
}
