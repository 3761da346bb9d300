pub mod complex;
pub mod error;
pub mod series;
pub mod models;
pub mod expansion;
pub mod oracle;
pub mod observables;
pub mod cli;
