//! Ribbonlength constructions for 2-bridge knots and links.
//!
//! A rational tangle in Conway notation is folded into a flat ribbon
//! (a thin strip folded along fold lines) whose core is an axis-aligned
//! polygon. The construction is checked by reading a diagram back off the
//! core and comparing its Jones polynomial and determinant with a
//! reference diagram.

pub mod diagram;
pub mod error;
pub mod geom;
pub mod layout;
pub mod pd;
pub mod poly;
pub mod render;
pub mod ribbon;
pub mod tangle;
pub mod verify;

pub use diagram::{
    build_reference_diagram, determinant, jones_polynomial, kauffman_bracket,
    reduced_alternating_check,
};
pub use error::{BuildError, DiagramError, TangleError, VerifyError};
pub use geom::{format_q, parse_q, Point, Q};
pub use layout::{build_ribbon_knot, validate_layout, Method, RibbonLayout, ValidityReport};
pub use pd::{PDCode, PdCrossing};
pub use poly::LaurentPolynomial;
pub use render::{render_svg, RenderOptions};
pub use ribbon::{build_integer_ribbon, GeomParams, IntegerRibbon};
pub use tangle::{
    crossing_number, fraction, knots_equivalent, normalize, parse_notation, schubert_pair,
    ConwayNotation, ExtFraction, SchubertPair,
};
pub use verify::{extract_pd, verify_bound, verify_knot_type, BoundReport, Report};
