//! Grids, discrete fields, stencils and norms used by every other module.

mod grid;
mod history;
mod scalar;
mod stencil;
mod tensor;

pub use grid::{Grid, Grid1, Grid3};
pub use history::{time_derivative, FieldHistory, FieldHistory1, FieldHistory3, TimeDerivOrder};
pub use scalar::{error_norm, norm, total_variation, NormKind, ScalarField, ScalarField1, ScalarField3};
pub use stencil::{central_derivative, fit_loglog_slope, BoundaryMode, DerivOrder};
pub use tensor::{strain_rate, sym_index, SymTensor3, TensorField3, SYM_PAIRS};
