//! Exact-arithmetic engine for tropical expansions of cone complexes, tropical stable maps,
//! degenerations with gluing data, and the genus-0 triple-point counting algorithm.

pub mod complex;
pub mod counting;
pub mod cone;
pub mod curve;
pub mod degeneration;
pub mod fan;
pub mod fixtures;
pub mod linalg;
pub mod map;
pub mod samples;
pub mod transversalize;
