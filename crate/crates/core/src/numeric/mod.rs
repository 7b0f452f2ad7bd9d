//! Small numerical kernels shared by the physics modules.

pub mod golden;
pub mod quad;
pub mod roots;
