pub mod algebraic;
pub mod curvegeom;
pub mod geom;
pub mod incidence;
pub mod partition;
pub mod polyalg;
pub mod rat;
pub mod search;
#[cfg(feature = "testkit")]
pub mod testkit;
