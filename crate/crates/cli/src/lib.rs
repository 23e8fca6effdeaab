pub mod app;
pub mod expr;
pub mod render;

pub use app::{run, run_args, Cli, Outcome};
