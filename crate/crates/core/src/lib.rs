pub mod closure;
pub mod coding;
pub mod corpus;
pub mod formula;
pub mod logic;
pub mod par;
pub mod prop;
pub mod prover;
pub mod sandbox;
pub mod sat;
pub mod semantics;
