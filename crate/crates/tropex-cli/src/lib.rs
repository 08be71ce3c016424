//! Documents, commands and rendering behind the `tropex` binary.

pub mod codec;
pub mod commands;
pub mod fixtures;
pub mod render;
