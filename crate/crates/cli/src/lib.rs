//! File formats, the staged solve pipeline and the corpus benchmark behind
//! the `cliqdecomp` binary.

pub mod bench;
pub mod format;
pub mod pipeline;
