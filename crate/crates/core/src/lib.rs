//! Projection maps, restriction maps and compatible shellings of finite
//! chamber complexes, with exact checkers for every identity relating them.

pub mod arrangement;
pub mod buildings;
pub mod catalog;
pub mod complex;
pub mod error;
pub mod flags;
pub mod lrb;
pub mod order;
pub mod report;
pub mod shelling;
pub mod structures;
pub mod walks;

pub use complex::{ChamberId, Complex, ComplexBuilder, FaceId, VertexId, EMPTY_FACE};
pub use error::{Error, Result};
pub use order::PartialOrder;
pub use report::{Check, Format, Report};
