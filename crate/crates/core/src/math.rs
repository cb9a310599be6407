// libm keeps results identical between std and no_std builds.
pub(crate) use libm::{exp, fabs as abs, floor, sqrt};

#[cfg(test)]
pub(crate) use libm::{cos, sin};
