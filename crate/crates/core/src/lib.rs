//! Khovanov homology, Lee's deformation and knot Floer invariants of
//! Whitehead doubles.

pub mod cobcat;
pub mod field;
pub mod hfk11;
pub mod invar;
pub mod homalg;
pub mod linkdiag;
pub mod poly;
pub mod scan;
pub mod util;
