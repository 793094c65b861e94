//! Local subgroupoids of finite topological groupoids over finite Alexandrov
//! spaces: germs, `loc` and `glob`, star components, path connections,
//! coherence, and transfer along morphisms, all computed exactly.

// index loops mirror the arithmetic on points and arrows
#![allow(clippy::needless_range_loop)]

pub mod bits;
pub mod connections;
pub mod error;
pub mod finspace;
pub mod fixtures;
pub mod germs;
pub mod groupoid;
mod par;
pub mod topgroupoid;
pub mod transfer;

pub use bits::Bits;
pub use connections::{PathConnection, TreeStrategy, Walk};
pub use error::{Error, Result};
pub use finspace::{ContMap, FinSpace, OpenSet, Point};
pub use germs::{Atlas, Germ, LocalSubgroupoid};
pub use groupoid::{Arrow, FinGroup, FinGroupoid, GroupoidMorphism, WideSubgroupoid};
pub use topgroupoid::{Cover, TopGroupoid};
pub use transfer::{LocalEquivRel, Transfer};
