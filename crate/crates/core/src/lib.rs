pub mod field;
pub mod group;
pub mod seed;
pub mod sol;
pub mod trace;
pub mod walk;
