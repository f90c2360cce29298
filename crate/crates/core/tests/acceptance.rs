//! One PASS/FAIL line per acceptance criterion. Exits non-zero if any fails.

mod common;

use std::time::{Duration, Instant};

use common::*;
use dummymark::attacks::{
    attack_normalize_opcodes, attack_rename, attack_scramble_debug, attack_strip_debug, attack_trim,
};
use dummymark::bytecode::{decode_instructions, intra_class_callees, mnemonic, CodepointKind, Mode};
use dummymark::classfile::serialize;
use dummymark::codec::{apply_key, codepoints_to_bits, decode_chars, encode_chars};
use dummymark::dummygen::{synthesize_dummy, validate_structure};
use dummymark::opaque::{eval_group, pell_false, step_world, Algorithm, PredicateGroup, PredicateWorld, WorldShape};
use dummymark::{
    capacity, embed, verify_model, Bitstream, ClassFile, Codebook, DummyShape, DummySpec, KeyOp, KeySpec,
    WatermarkConfig,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const ROUND_TRIP_LIMIT: Duration = Duration::from_secs(1);
const EMBED_TRIALS: usize = 1000;
const EMBED_LIMIT: Duration = Duration::from_secs(30);
const GROUP_SEEDS: u64 = 50;
const GROUP_TICKS: u64 = 200;
const PELL_RANGE: u64 = 1000;
const PELL_RANDOM: usize = 1_000_000;
const PELL_LIMIT: Duration = Duration::from_secs(10);
const WATERMARK: &str = "ITS SURABAYA";

struct Report {
    failed: usize,
}

impl Report {
    fn line(&mut self, name: &str, result: Result<String, String>) {
        match result {
            Ok(detail) => println!("PASS {name}: {detail}"),
            Err(detail) => {
                self.failed += 1;
                println!("FAIL {name}: {detail}");
            }
        }
    }
}

fn check(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn round_trip() -> Result<String, String> {
    let start = Instant::now();
    let mut total = 0;
    for name in ALL {
        let b = bytes(name);
        let cf = ClassFile::parse(&b).map_err(|e| format!("{name}: {e}"))?;
        let out = serialize(&cf).map_err(|e| format!("{name}: {e}"))?;
        check(out == b, || format!("{name} differs after round trip"))?;
        total += b.len();
    }
    let t = start.elapsed();
    check(t < ROUND_TRIP_LIMIT, || format!("took {t:?}"))?;
    Ok(format!("{} files, {total} bytes identical in {t:?}", ALL.len()))
}

/// Instruction table as printed for the codebook example, keyed by mnemonic.
const TABLE: [(&str, &str); 14] = [
    ("iadd", "000"),
    ("isub", "001"),
    ("imul", "010"),
    ("idiv", "011"),
    ("irem", "100"),
    ("iand", "101"),
    ("ior", "110"),
    ("ixor", "111"),
    ("iflt", "00"),
    ("ifge", "01"),
    ("ifgt", "10"),
    ("ifle", "11"),
    ("ifnull", "0"),
    ("ifnonnull", "1"),
];

fn codec_truth() -> Result<String, String> {
    for (m, bits) in TABLE {
        let kind = match bits.len() {
            3 => CodepointKind::Arith8,
            2 => CodepointKind::Branch4,
            _ => CodepointKind::Branch2,
        };
        let value = u8::from_str_radix(bits, 2).unwrap();
        let op = kind.byte_for(value);
        check(mnemonic(op) == m, || format!("{bits} -> {} (want {m})", mnemonic(op)))?;
        check(kind.value_for(op) == Some(value), || format!("{m} does not read back as {bits}"))?;
    }
    let code: Bitstream = "110011001000110".parse().unwrap();
    let key = KeySpec::new("1100101011".parse().unwrap(), KeyOp::And);
    let keyed = apply_key(&code, &key).map_err(|e| e.to_string())?;
    check(keyed.to_string() == "110011000000010", || format!("AND key gave {keyed}"))?;
    let prefix: Bitstream = "0001 0010 0011 0000 0011 0100 0101".parse().unwrap();
    let text = decode_chars(&prefix, &Codebook::standard()).text;
    check(text == "ITS SUR", || format!("prefix decoded to {text:?}"))?;
    Ok("14 table rows, AND key example, prefix decodes to \"ITS SUR\"".into())
}

struct Trials {
    found: usize,
    xor: usize,
    xor_restored: usize,
    structural: usize,
    confined: usize,
    elapsed: Duration,
    first_error: Option<String>,
}

fn trials() -> Trials {
    let books = [Codebook::standard(), Codebook::extended()];
    let mut rng = ChaCha8Rng::seed_from_u64(0xacce97);
    let mut t = Trials { found: 0, xor: 0, xor_restored: 0, structural: 0, confined: 0, elapsed: Duration::ZERO, first_error: None };
    let hosts = [class("HelloWorld"), class("Node")];
    let start = Instant::now();
    for trial in 0..EMBED_TRIALS {
        let book = books[rng.gen_range(0..2)].clone();
        let alphabet: Vec<char> = book.alphabet().collect();
        let len = rng.gen_range(1..=16);
        let message: String = (0..len).map(|_| alphabet[rng.gen_range(0..alphabet.len())]).collect();
        let mode = Mode::ALL[rng.gen_range(0..3)];
        let op = [KeyOp::And, KeyOp::Or, KeyOp::Xor][rng.gen_range(0..3)];
        let plain = encode_chars(&message, &book).unwrap();
        let key_len = rng.gen_range(0..=plain.len());
        let key = Bitstream::from_bits((0..key_len).map(|_| rng.gen()).collect());
        let config = WatermarkConfig::new(book, KeySpec::new(key, op), mode);
        let mut host = hosts[trial % 2].clone();
        host.major_version = [49, 50, 52][rng.gen_range(0..3)];
        let spec = DummySpec {
            name: format!("wm{trial}"),
            capacity_bits: plain.len() + rng.gen_range(0..8),
            mode,
            shape: DummyShape::ALL[rng.gen_range(0..5)],
            seed: rng.gen(),
        };
        let result = (|| -> Result<(), String> {
            let cf = synthesize_dummy(&host, &spec).map_err(|e| e.to_string())?;
            let i = cf.methods.len() - 1;
            let (out, plan) = embed(&cf, i, &message, &config).map_err(|e| e.to_string())?;
            let bytes = out.to_bytes().map_err(|e| e.to_string())?;
            let reparsed = ClassFile::parse(&bytes).map_err(|e| e.to_string())?;
            if verify_model(&reparsed, &message, &config).map_err(|e| e.to_string())?.is_found() {
                t.found += 1;
            }
            if (0..reparsed.methods.len()).all(|m| validate_structure(&reparsed, m).is_ok()) {
                t.structural += 1;
            }
            // Everything but the target code array is untouched, and inside it
            // only planned site bytes moved.
            let before = &cf.methods[i].code().unwrap().code;
            let after = &reparsed.methods[i].code().unwrap().code;
            let mut rest = reparsed.clone();
            rest.methods[i].code_mut().unwrap().code = before.clone();
            let sites: Vec<usize> = plan.sites.iter().map(|s| s.byte_offset).collect();
            let moved_ok = before.len() == after.len()
                && before.iter().zip(after).enumerate().all(|(k, (a, b))| a == b || sites.contains(&k));
            if rest == cf && moved_ok {
                t.confined += 1;
            }
            if op == KeyOp::Xor {
                t.xor += 1;
                let carried = codepoints_to_bits(&decode_instructions(after).unwrap(), mode);
                let keyed = Bitstream::from_bits(carried.bits()[..plain.len()].to_vec());
                if apply_key(&keyed, &config.key).map_err(|e| e.to_string())? == plain {
                    t.xor_restored += 1;
                }
            }
            Ok(())
        })();
        if let Err(e) = result {
            t.first_error.get_or_insert(format!("trial {trial}: {e}"));
        }
    }
    t.elapsed = start.elapsed();
    t
}

fn embed_identity(t: &Trials) -> Result<String, String> {
    if let Some(e) = &t.first_error {
        return Err(e.clone());
    }
    check(t.found == EMBED_TRIALS, || format!("{}/{EMBED_TRIALS} found", t.found))?;
    check(t.xor > 0 && t.xor_restored == t.xor, || format!("xor restored {}/{}", t.xor_restored, t.xor))?;
    check(t.elapsed < EMBED_LIMIT, || format!("took {:?}", t.elapsed))?;
    Ok(format!("{}/{EMBED_TRIALS} found, XOR double-apply {}/{} in {:?}", t.found, t.xor_restored, t.xor, t.elapsed))
}

fn structural_safety(t: &Trials) -> Result<String, String> {
    check(t.structural == EMBED_TRIALS, || format!("{}/{EMBED_TRIALS} pass the stack simulator", t.structural))?;
    check(t.confined == EMBED_TRIALS, || format!("{}/{EMBED_TRIALS} diffs confined", t.confined))?;
    Ok(format!("{EMBED_TRIALS}/{EMBED_TRIALS} re-parse and validate, diffs confined to site bytes"))
}

fn group_false() -> Result<String, String> {
    let groups = [PredicateGroup::listing(Algorithm::I), PredicateGroup::listing(Algorithm::II)];
    let mut points = 0u64;
    let mut violations = 0u64;
    let mut member_values = vec![[false; 2]; groups.iter().map(|g| g.members().len()).sum()];
    let mut tokens = [[false; 2]; 2];
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    for shape in [WorldShape::Listing, WorldShape::Extended { extra: 2 }] {
        let world = PredicateWorld::new(shape);
        for seed in 0..GROUP_SEEDS {
            for state in step_world(&world, seed, GROUP_TICKS).states {
                let mut slot = 0;
                for g in &groups {
                    let e = eval_group(g, &world, &state, &mut rng);
                    points += 1;
                    violations += e.value as u64;
                    for v in e.members {
                        member_values[slot][v as usize] = true;
                        slot += 1;
                    }
                }
                tokens[0][world.token(state.p) as usize] = true;
                tokens[1][world.token(state.q) as usize] = true;
            }
        }
    }
    check(violations == 0, || format!("{violations} true group values"))?;
    check(tokens == [[true; 2]; 2], || format!("token values seen {tokens:?}"))?;
    // Every member not fixed by the ring structure must be seen both ways.
    let dynamic = groups.iter().flat_map(|g| g.members()).filter(|m| m.structural().is_none()).count();
    let varying = member_values.iter().filter(|v| **v == [true, true]).count();
    check(varying == dynamic, || format!("{varying} of {dynamic} dynamic members vary"))?;
    Ok(format!("{points} guard evaluations false, {varying} members take both values, p/q tokens vary"))
}

fn pell() -> Result<String, String> {
    let start = Instant::now();
    for x in 0..=PELL_RANGE {
        for y in 0..=PELL_RANGE {
            check(!pell_false(x, y), || format!("true at ({x}, {y})"))?;
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for _ in 0..PELL_RANDOM {
        let (x, y) = (rng.gen::<u64>(), rng.gen::<u64>());
        check(!pell_false(x, y), || format!("true at ({x}, {y})"))?;
    }
    let t = start.elapsed();
    check(t < PELL_LIMIT, || format!("took {t:?}"))?;
    Ok(format!("{} exhaustive + {PELL_RANDOM} random pairs false in {t:?}", (PELL_RANGE + 1) * (PELL_RANGE + 1)))
}

fn watermark_config(mode: Mode) -> WatermarkConfig {
    WatermarkConfig { codebook: Codebook::extended(), mode, ..Default::default() }
}

fn marked(name: &str, dummy: &str, mode: Mode) -> Result<ClassFile, String> {
    let cf = class(name);
    let i = cf.method_index(dummy, None).ok_or(format!("{name} has no {dummy}"))?;
    Ok(embed(&cf, i, WATERMARK, &watermark_config(mode)).map_err(|e| format!("{name}: {e}"))?.0)
}

fn survives(cf: &ClassFile, mode: Mode) -> Result<bool, String> {
    let cf = ClassFile::parse(&cf.to_bytes().map_err(|e| e.to_string())?).map_err(|e| e.to_string())?;
    Ok(verify_model(&cf, WATERMARK, &watermark_config(mode)).map_err(|e| e.to_string())?.is_found())
}

fn survival() -> Result<String, String> {
    let mut cells = 0;
    for (name, dummy) in CARRIERS {
        let cf = marked(name, dummy, Mode::ReplaceOpcodes)?;
        check(survives(&cf, Mode::ReplaceOpcodes)?, || format!("{name}: not found before attack"))?;
        let attacked = [
            ("rename", attack_rename(&cf, 11).map_err(|e| e.to_string())?),
            ("strip", attack_strip_debug(&cf)),
            ("scramble", attack_scramble_debug(&cf, 11)),
            ("trim", attack_trim(&cf, &[]).map_err(|e| e.to_string())?),
        ];
        for (attack, out) in attacked {
            check(survives(&out, Mode::ReplaceOpcodes)?, || format!("{name}/{attack}: destroyed"))?;
            cells += 1;
        }
        check(!survives(&attack_normalize_opcodes(&cf), Mode::ReplaceOpcodes)?, || {
            format!("{name}/normalize: replace-mode watermark survived")
        })?;
        let ops = marked(name, dummy, Mode::OverwriteOperands)?;
        check(survives(&attack_normalize_opcodes(&ops), Mode::OverwriteOperands)?, || {
            format!("{name}/normalize: operand-mode watermark destroyed")
        })?;
        cells += 2;
    }
    let cf = marked("Unguarded", "W", Mode::ReplaceOpcodes)?;
    check(survives(&cf, Mode::ReplaceOpcodes)?, || "Unguarded: not found before attack".into())?;
    let trimmed = attack_trim(&cf, &["main"]).map_err(|e| e.to_string())?;
    check(!survives(&trimmed, Mode::ReplaceOpcodes)?, || "Unguarded/trim: survived".into())?;
    Ok(format!("{} cells as expected (guarded survive rename/strip/scramble/trim, unguarded trim and opcode normalize destroy, operands survive normalize)", cells + 1))
}

fn false_positives() -> Result<String, String> {
    let mut checks = 0;
    let mut found = Vec::new();
    for mode in Mode::ALL {
        for op in [KeyOp::Xor, KeyOp::And, KeyOp::Or] {
            let mut config = watermark_config(mode);
            if op != KeyOp::Xor {
                config.key = KeySpec::new("1100101011".parse().unwrap(), op);
            }
            for name in ALL {
                checks += 1;
                if verify_model(&class(name), WATERMARK, &config).map_err(|e| e.to_string())?.is_found() {
                    found.push(format!("{name}/{mode}/{op:?}"));
                }
            }
        }
    }
    check(found.is_empty(), || format!("false positives: {}", found.join(", ")))?;
    Ok(format!("0 Found in {checks} negative verifications"))
}

fn manifest_consistency() -> Result<String, String> {
    let mut methods = 0;
    for name in ALL {
        let cf = class(name);
        let m = manifest_entry(name);
        let want = m["methods"].as_array().unwrap();
        check(want.len() == cf.methods.len(), || format!("{name}: method count"))?;
        for (i, w) in want.iter().enumerate() {
            check(cf.method_name(i) == w["name"].as_str().unwrap(), || format!("{name}: method {i} name"))?;
            let code = cf.methods[i].code().unwrap();
            let insns = decode_instructions(&code.code).map_err(|e| e.to_string())?;
            check(insns.len() as u64 == w["code"]["instruction_count"].as_u64().unwrap(), || {
                format!("{name}.{}: instruction count", cf.method_name(i))
            })?;
            for mode in Mode::ALL {
                let c = capacity(&cf, i, mode).map_err(|e| e.to_string())?;
                check(c as u64 == w["code"]["capacity"][mode.as_str()].as_u64().unwrap(), || {
                    format!("{name}.{}: {mode} capacity {c}", cf.method_name(i))
                })?;
            }
            methods += 1;
        }
    }
    let sp = class("Stylepad");
    let caller = sp.method_index("actionPerformed", None).ok_or("no actionPerformed")?;
    let z = sp.method_index("Z", None).ok_or("no Z")?;
    check(intra_class_callees(&sp, caller).contains(&z), || "actionPerformed does not call Z".into())?;
    let src = std::fs::read_to_string(fixture_dir().join("java/Stylepad.java")).map_err(|e| e.to_string())?;
    check(src.contains("if (b2 && b1 && (g.equals(h)))"), || "guard condition missing from source".into())?;
    Ok(format!("{methods} methods match, Stylepad guard calls Z"))
}

fn main() {
    let mut r = Report { failed: 0 };
    r.line("round-trip", round_trip());
    r.line("codec-ground-truth", codec_truth());
    let t = trials();
    r.line("embed-extract-identity", embed_identity(&t));
    r.line("structural-safety", structural_safety(&t));
    r.line("group-false-invariant", group_false());
    r.line("pell-false", pell());
    r.line("survival-matrix", survival());
    r.line("false-positive-control", false_positives());
    r.line("manifest-consistency (secondary)", manifest_consistency());
    if r.failed > 0 {
        println!("{} criteria failed", r.failed);
        std::process::exit(1);
    }
}
