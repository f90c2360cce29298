mod common;

use std::collections::BTreeSet;

use common::*;
use dummymark::bytecode::{decode_instructions, intra_class_callees, scan_codepoints, CodepointKind, Mode};
use dummymark::classfile::serialize;
use dummymark::dummygen::validate_structure;
use dummymark::{capacity, verify_model, Codebook, WatermarkConfig};

#[test]
fn every_fixture_round_trips() {
    for name in ALL {
        let b = bytes(name);
        assert_eq!(serialize(&class(name)).unwrap(), b, "{name}");
    }
}

#[test]
fn header_matches_manifest() {
    for name in ALL {
        let cf = class(name);
        let m = manifest_entry(name);
        assert_eq!(cf.class_name(), name);
        assert_eq!(cf.major_version as u64, m["major_version"].as_u64().unwrap(), "{name}");
        assert_eq!(cf.constant_pool.count() as u64, m["constant_pool_count"].as_u64().unwrap(), "{name}");
        assert_eq!(bytes(name).len() as u64, m["size"].as_u64().unwrap(), "{name}");
        let fields: Vec<String> = cf.fields.iter().map(|f| cf.member_name(f)).collect();
        let want: Vec<&str> = m["fields"].as_array().unwrap().iter().map(|f| f["name"].as_str().unwrap()).collect();
        assert_eq!(fields, want, "{name}");
    }
}

#[test]
fn method_inventory_matches_manifest() {
    for name in ALL {
        let cf = class(name);
        let m = manifest_entry(name);
        let methods = m["methods"].as_array().unwrap();
        assert_eq!(cf.methods.len(), methods.len(), "{name}");
        for (i, want) in methods.iter().enumerate() {
            let label = format!("{name}.{}", want["name"]);
            assert_eq!(cf.method_name(i), want["name"].as_str().unwrap(), "{label}");
            assert_eq!(cf.method_descriptor(i), want["descriptor"].as_str().unwrap(), "{label}");
            assert_eq!(cf.methods[i].access_flags as u64, want["access_flags"].as_u64().unwrap(), "{label}");
            let code = cf.methods[i].code().unwrap();
            let w = &want["code"];
            let insns = decode_instructions(&code.code).unwrap();
            assert_eq!(insns.len() as u64, w["instruction_count"].as_u64().unwrap(), "{label}");
            assert_eq!(code.code.len() as u64, w["code_length"].as_u64().unwrap(), "{label}");
            let count = |kind: CodepointKind| {
                scan_codepoints(&insns, Mode::Combined).iter().filter(|c| c.kind == kind).count() as u64
            };
            assert_eq!(count(CodepointKind::Arith8), w["arith8"].as_u64().unwrap(), "{label}");
            assert_eq!(count(CodepointKind::Branch4), w["branch4"].as_u64().unwrap(), "{label}");
            assert_eq!(count(CodepointKind::Branch2), w["branch2"].as_u64().unwrap(), "{label}");
            assert_eq!(count(CodepointKind::OperandBipush), w["bipush"].as_u64().unwrap(), "{label}");
            assert_eq!(count(CodepointKind::OperandIinc), w["iinc"].as_u64().unwrap(), "{label}");
            for mode in Mode::ALL {
                let got = capacity(&cf, i, mode).unwrap() as u64;
                assert_eq!(got, w["capacity"][mode.as_str()].as_u64().unwrap(), "{label} {mode}");
            }
        }
    }
}

#[test]
fn call_graph_matches_manifest() {
    for name in ALL {
        let cf = class(name);
        let m = manifest_entry(name);
        for i in 0..cf.methods.len() {
            let got: BTreeSet<String> = intra_class_callees(&cf, i).into_iter().map(|c| cf.method_name(c)).collect();
            let want: BTreeSet<String> = m["intra_class_calls"][cf.method_name(i)]
                .as_array()
                .unwrap()
                .iter()
                .map(|v| v.as_str().unwrap().to_string())
                .collect();
            assert_eq!(got, want, "{name}.{}", cf.method_name(i));
        }
    }
}

#[test]
fn carriers_hold_twelve_characters() {
    for (name, dummy) in CARRIERS {
        let cf = class(name);
        let i = cf.method_index(dummy, Some("(I)V")).unwrap();
        assert!(!cf.methods[i].is_static() && cf.methods[i].is_private());
        assert!(capacity(&cf, i, Mode::ReplaceOpcodes).unwrap() >= 48, "{name}");
    }
}

#[test]
fn guarded_call_sites() {
    let callers = [
        ("Stylepad", "actionPerformed"),
        ("ElementTreePanel", "valueChanged"),
        ("Notepad", "append"),
        ("Wonderland", "turnPage"),
        ("FireWorks", "fire"),
    ];
    for ((name, dummy), (_, caller)) in CARRIERS.iter().zip(callers) {
        let cf = class(name);
        let c = cf.method_index(caller, None).unwrap();
        let d = cf.method_index(dummy, None).unwrap();
        assert!(intra_class_callees(&cf, c).contains(&d), "{name}");
    }
    let src = std::fs::read_to_string(fixture_dir().join("java/Stylepad.java")).unwrap();
    assert!(src.contains("if (b2 && b1 && (g.equals(h))) {\n            Z(10);"));
    let src = std::fs::read_to_string(fixture_dir().join("java/ElementTreePanel.java")).unwrap();
    assert!(src.contains("if (p1) p2 = false;"));
    let u = class("Unguarded");
    let w = u.method_index("W", None).unwrap();
    assert!((0..u.methods.len()).all(|i| !intra_class_callees(&u, i).contains(&w)));
}

#[test]
fn fixtures_pass_stack_simulator() {
    for name in ALL {
        let cf = class(name);
        for i in 0..cf.methods.len() {
            let s = validate_structure(&cf, i).unwrap_or_else(|d| panic!("{name}: {d}"));
            assert!(s.max_depth <= cf.methods[i].code().unwrap().max_stack as u32);
        }
    }
}

#[test]
fn unwatermarked_corpus_is_negative() {
    let config = WatermarkConfig { codebook: Codebook::extended(), ..Default::default() };
    for mode in Mode::ALL {
        let c = config.clone().with_mode(mode);
        for name in ALL {
            assert!(!verify_model(&class(name), "ITS SURABAYA", &c).unwrap().is_found(), "{name} {mode}");
        }
    }
}
