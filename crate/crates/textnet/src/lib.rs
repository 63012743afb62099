//! File formats, exports, parallel stage kernels and the command-line
//! pipeline around [`textnet_core`].

pub mod artifacts;
pub mod config;
pub mod corpus_io;
pub mod error;
pub mod export;
pub mod fsutil;
pub mod lexicon;
pub mod parallel;
pub mod pipeline;
pub mod synth;

pub use config::{PipelineConfig, Settings};
pub use error::{Error, Result, Stage, StageError};
pub use pipeline::{run_pipeline, RunOutput};
pub use textnet_core;
