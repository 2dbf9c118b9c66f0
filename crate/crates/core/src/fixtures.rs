//! The three-structure toy lake used throughout the docs and tests.

use alloc::vec;

use crate::context::FormalContext;
use crate::transform::{TransformOp, TransformScript};

pub const TOY_OBJECTS: [&str; 3] = ["Storage", "DBTablespace", "ServiceCall"];

pub const TOY_ATTRIBUTES: [&str; 8] = [
    "time",
    "timestamp",
    "used",
    "max",
    "path",
    "name",
    "serviceName",
    "duration",
];

pub const TOY_INCIDENCE: [(&str, &str); 12] = [
    ("Storage", "time"),
    ("Storage", "used"),
    ("Storage", "max"),
    ("Storage", "path"),
    ("DBTablespace", "time"),
    ("DBTablespace", "used"),
    ("DBTablespace", "max"),
    ("DBTablespace", "name"),
    ("ServiceCall", "timestamp"),
    ("ServiceCall", "name"),
    ("ServiceCall", "serviceName"),
    ("ServiceCall", "duration"),
];

/// Storage, DBTablespace and ServiceCall over eight field names.
pub fn toy() -> FormalContext {
    FormalContext::build(TOY_OBJECTS, TOY_ATTRIBUTES, TOY_INCIDENCE).expect("toy context is well formed")
}

/// `time, timestamp -> time` then `serviceName, name, path -> name`.
pub fn toy_unification() -> TransformScript {
    TransformScript::new(vec![
        TransformOp::merge_attributes(["time", "timestamp"], "time"),
        TransformOp::merge_attributes(["serviceName", "name", "path"], "name"),
    ])
}
