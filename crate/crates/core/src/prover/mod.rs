mod kb;
mod partition;
mod proof;
mod search;

pub use kb::*;
pub use partition::*;
pub use proof::*;
pub use search::*;
