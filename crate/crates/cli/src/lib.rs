//! File formats, JSON reports and resource caps for the `oddcluster` binary.

pub mod caps;
pub mod format;
pub mod json;
