//! List colouring of plane graph canvases.
//!
//! The crate colours plane graphs whose boundary vertices carry lists of
//! size three, interior vertices lists of size five, and a few designated
//! boundary vertices smaller lists. The main entry points are
//! [`demtwo::solve_dem_two`] (a path of equal 2-lists plus one more
//! 2-listed boundary vertex), [`demtwo::solve_two_twos`] (two boundary
//! vertices with lists of size two) and [`thomassen::color_with_precolored_edge`]
//! (a precoloured boundary edge). [`oracle`] holds the exhaustive checker
//! every constructive answer is compared with, and [`harness`] generates
//! instance corpora and runs the comparisons.

pub mod canvas;
pub mod demtwo;
pub mod embed;
pub mod harness;
pub mod oracle;
pub mod thomassen;

pub use embed::{Dart, EmbedError, EmbeddedGraph, GraphView, Separation, SeparationKind, SimpleGraph, Vertex, Walk};
pub use canvas::{Canvas, CanvasViolation, Color, ColorSet, DemTwoInstance, DemTwoViolation, ExceptionCertificate, ListAssignment, SDesignation};
pub use oracle::Coloring;
