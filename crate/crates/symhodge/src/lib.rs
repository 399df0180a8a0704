pub mod linalg;
pub mod masks;
pub mod exterior;
pub mod form;
pub mod models;
pub mod solvers;
pub mod cartan;
pub mod report;
pub mod cli;
