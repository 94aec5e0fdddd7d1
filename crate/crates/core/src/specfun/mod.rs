//! Special functions and one-dimensional root finding.
//!
//! Bessel functions of integer order (J₀, J₁, Y₀, Y₁ and the sequences
//! needed for higher radial derivatives), exponentially scaled modified
//! Bessel functions e^{−x}I₀ and e^{−x}I₁, and a bracketing root finder.

mod bessel;
mod roots;

pub use bessel::{
    bessel_i0_scaled, bessel_i1_scaled, bessel_j0, bessel_j1, bessel_j_over_pow, bessel_y0,
    bessel_y1, bessel_yn, SERIES_SWITCHOVER,
};
pub use roots::{find_root, scan_brackets, RootBracket};
