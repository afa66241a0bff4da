//! Linear-size CDAWG self-index.
//!
//! The index is built from a byte text in four stages: the CDAWG of `T$`,
//! insertion of type-2 nodes, jump links over edge suffix links, and an SLP
//! whose variables derive every edge label and the text itself. After that the
//! text is no longer needed: pattern matching walks the graph reading edge
//! labels through the SLP, and extraction reads the SLP's root.
//!
//! ```
//! use lcdawg::{Index, Text};
//!
//! let text = Text::new(&b"abcdbcda"[..]).unwrap();
//! let index = Index::build(&text).unwrap();
//! assert_eq!(index.find(b"bcd").unwrap(), vec![2, 5]);
//! assert_eq!(index.extract(3, 2).unwrap(), b"cd");
//! ```

pub mod cdawg;
pub mod corpus;
pub mod error;
pub mod ids;
pub mod index;
pub mod lcdawg;
pub mod measures;
pub mod oracles;
pub mod persist;
pub mod slp;
mod suffix_tree;
pub mod text;
pub mod verify;

pub use cdawg::{build_cdawg, Cdawg};
pub use error::{Error, FormatError, Result};
pub use ids::{EdgeId, NodeId, VarId, SINK, SOURCE};
pub use index::{BuildTrace, Index, Locus};
pub use measures::{measure_text, IndexStats};
pub use lcdawg::{insert_type2_nodes, EdgePath, JumpTable, LCdawg, NodeKind};
pub use slp::{build_slp, Rule, Slp};
pub use text::{Text, SENTINEL};
