//! One module per subcommand family. Each `run` fills a report builder.

pub mod classical;
pub mod construct;
pub mod family;
pub mod growth;
pub mod solve;
pub mod verify;

/// Flags shared by every subcommand.
#[derive(Clone, Copy, Debug)]
pub struct Global {
    pub seed: u64,
    pub full: bool,
}
