#![allow(dead_code)]
pub mod bigbessel;
pub mod fd3;
pub mod quad;
