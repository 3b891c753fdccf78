pub mod corpus;
pub mod error;
pub mod functor;
pub mod homotopy;
pub mod poly;
pub mod poset;
pub mod presentation;
pub mod repcheck;
pub mod rewrite;
pub mod sset;
pub mod subdivision;
