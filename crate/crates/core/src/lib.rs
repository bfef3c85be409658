//! Zero counts of polynomial systems over finite fields.

mod bigser;
pub mod bounds;
pub mod closefam;
pub mod constructions;
pub mod gf;
pub mod linalg;
pub mod poly;
pub mod projgeom;
pub mod search;

pub use gf::{Elem, Field, GfError};
pub use bounds::{BoundError, BoundParams};
pub use closefam::CloseError;
pub use poly::{HomPoly, Monomial, Poly, PolyError, PolyFamily};
pub use projgeom::{GeomError, ProjPoint, ZeroCount};
pub use search::{SearchConfig, SearchError, SearchReport, Verdict};
