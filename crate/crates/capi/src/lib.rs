//! C ABI for the workbench. Real exports land once the core API is frozen.

pub use parhopf as core;
