#![allow(dead_code)]

pub mod fixpoint;
pub mod mutation;
