//! Admissible sets of line classes, the geometric filters and classification
//! by adjacency graph.

pub mod bits;
pub mod classify;
pub mod configuration;
pub mod filters;
pub mod incidence;
pub mod pipeline;
pub mod search;
pub mod system;

pub use bits::Bits;
pub use configuration::LineConfiguration;
pub use classify::{classify, dedupe, embedding_orbits, Canonizer, Equivalence, ShapeClass};
pub use incidence::Incidence;
pub use pipeline::{pipeline, PipelineOptions, PipelineReport, Survivor};
pub use filters::{emax, emax_with, root_compatible, root_compatible_with, series_filter_jstar, triangle_filter, Emax, TriangleReport, WitnessScope};
pub use search::{admissible_sets, for_each_admissible, admissible_sets_by, bnd, bnd_with, bnd_witness, color_bound, k4_seeds, SearchSpec, SearchTasks, Strategy};
pub use system::ConfigSystem;
