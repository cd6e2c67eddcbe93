#![no_std]
extern crate alloc;

pub mod exactalg;
pub mod sausage;
pub mod qtorus;
pub mod embed;
pub mod repbuild;
