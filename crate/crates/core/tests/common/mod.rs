#![allow(dead_code)]

use std::path::PathBuf;

use dummymark::ClassFile;
use serde_json::Value;

pub const CARRIERS: [(&str, &str); 5] =
    [("Stylepad", "Z"), ("ElementTreePanel", "X"), ("Notepad", "R"), ("Wonderland", "Y"), ("FireWorks", "S")];

pub const ALL: [&str; 8] =
    ["ElementTreePanel", "FireWorks", "HelloWorld", "Node", "Notepad", "Stylepad", "Unguarded", "Wonderland"];

pub fn fixture_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures")
}

pub fn bytes(name: &str) -> Vec<u8> {
    std::fs::read(fixture_dir().join(format!("classes/{name}.class"))).expect("fixture class")
}

pub fn class(name: &str) -> ClassFile {
    ClassFile::parse(&bytes(name)).expect("fixture parses")
}

pub fn manifest() -> Value {
    let text = std::fs::read_to_string(fixture_dir().join("manifest.json")).expect("manifest");
    serde_json::from_str(&text).expect("manifest json")
}

pub fn manifest_entry(name: &str) -> Value {
    let m = manifest();
    m["fixtures"]
        .as_array()
        .unwrap()
        .iter()
        .find(|f| f["this_class"] == name)
        .cloned()
        .unwrap_or_else(|| panic!("{name} not in manifest"))
}
