//! Finite full type hierarchies over preorders, models, and bounded model
//! search.

mod model;
mod order;
mod search;
mod space;

pub use model::{EqMode, Model};
pub use order::{
    function_space, is_antitone_table, is_complete, is_lub, is_monotone_table, is_poset, is_weakly_complete, lub,
    upper_bounds, COMPLETE_CAP,
};
pub use search::{
    collect_models, enumerate_models, find_countermodel, Countermodel, EnumReport, ModelFilter, SizeBounds,
};
pub use space::{FullStructure, Space, DEFAULT_CELL_BUDGET};
