//! Bad-control diagnostics for double machine learning.
//!
//! Linear-Gaussian structural causal models are simulated from four
//! templates (good control, m-graph, mediator, confounded mediator), control
//! variables are classified with graph criteria, and the bias of
//! double-selection, partialling-out and naive post-LASSO estimators is
//! measured against graph-derived ground truth.
//!
//! ```
//! use dagdml::graph::{ControlClass, GraphBuilder};
//!
//! let m_graph = GraphBuilder::new()
//!     .edge("D", "Y")
//!     .arc("X", "D")
//!     .arc("X", "Y")
//!     .build()
//!     .unwrap();
//! assert!(m_graph.backdoor_admissible("D", "Y", &[]).unwrap());
//! assert_eq!(
//!     m_graph.classify_control("D", "Y", "X").unwrap(),
//!     ControlClass::ColliderOnBackdoor
//! );
//! ```

pub mod dml;
pub mod graph;
pub mod montecarlo;
pub mod regress;
pub mod scm;

pub use dml::{FitResult, Method};
pub use graph::{CausalGraph, ControlClass};
pub use montecarlo::{Execution, McSummary};
pub use scm::{Dataset, LinearScm, ScenarioConfig, Template};
