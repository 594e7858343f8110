use thiserror::Error;

use crate::grid::Direction;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum TomoError {
    #[error("direction set is empty")]
    EmptySet,
    #[error("direction ({0}, {1}) is not primitive")]
    NonPrimitive(i64, i64),
    #[error("direction ({0}, {1}) occurs more than once")]
    Duplicate(i64, i64),
    #[error("(0, 0) is not a direction")]
    ZeroVector,
    #[error("grid dimensions must be positive, got {0}x{1}")]
    EmptyGrid(usize, usize),
    #[error("image has {got} values, grid {m}x{n} needs {}", m * n)]
    ImageSize { m: usize, n: usize, got: usize },
    #[error("direction {0} is not in the direction set")]
    DirectionNotInSet(Direction),
    #[error("point ({0}, {1}) lies outside the grid")]
    PointOutOfGrid(i64, i64),
    #[error("grid or direction set of the operands do not match")]
    Mismatch,
    #[error("line sums are inconsistent: {0} residual(s) nonzero after reconstruction")]
    InconsistentInput(usize),
    #[error("images have different line sums")]
    InconsistentLineSums,
    #[error("free value at ({0}, {1}) lies outside the free-choice block")]
    FreeValueOutsideBlock(usize, usize),
    #[error("grid is valid for the direction set; expected a nonvalid instance")]
    NotNonvalid,
    #[error("cannot sample {count} distinct primitive directions with components bounded by {max_component}")]
    InfeasibleDirectionSpec { count: usize, max_component: i64 },
    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, TomoError>;
