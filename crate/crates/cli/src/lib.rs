pub mod cases;
pub mod cli;
pub mod dsl;
pub mod library;
pub mod model;
pub mod numeric;
pub mod report;
