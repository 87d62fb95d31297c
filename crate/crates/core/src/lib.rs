pub mod algebra;
pub mod bound;
pub mod exec;
pub mod fuzz;
pub mod oracle;
pub mod petrov;
pub mod picard_fuchs;
pub mod verify;
pub mod wire;
