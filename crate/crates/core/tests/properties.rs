mod common;

use dummymark::bytecode::{decode_instructions, rewrite, scan_codepoints, CodepointKind, Edit, Mode};
use dummymark::codec::{apply_key, codepoints_to_bits, decode_chars, encode_chars};
use dummymark::dummygen::{synthesize_dummy, validate_structure};
use dummymark::extractor::verify_model;
use dummymark::{capacity, embed, Bitstream, ClassFile, Codebook, DummyShape, DummySpec, KeyOp, KeySpec, WatermarkConfig};
use proptest::prelude::*;

fn mode() -> impl Strategy<Value = Mode> {
    prop::sample::select(Mode::ALL.to_vec())
}

fn shape() -> impl Strategy<Value = DummyShape> {
    prop::sample::select(DummyShape::ALL.to_vec())
}

fn op() -> impl Strategy<Value = KeyOp> {
    prop::sample::select(vec![KeyOp::And, KeyOp::Or, KeyOp::Xor])
}

fn bits(max: usize) -> impl Strategy<Value = Bitstream> {
    prop::collection::vec(any::<bool>(), 0..=max).prop_map(Bitstream::from_bits)
}

fn message(book: Codebook, max: usize) -> impl Strategy<Value = String> {
    let alphabet: Vec<char> = book.alphabet().collect();
    prop::collection::vec(prop::sample::select(alphabet), 0..=max).prop_map(|v| v.into_iter().collect())
}

fn host(major: u16) -> ClassFile {
    let mut cf = common::class("HelloWorld");
    cf.major_version = major;
    cf
}

proptest! {
    #[test]
    fn text_round_trips(m in message(Codebook::extended(), 40)) {
        let book = Codebook::extended();
        let b = encode_chars(&m, &book).unwrap();
        prop_assert_eq!(b.len(), 4 * m.chars().count());
        let d = decode_chars(&b, &book);
        prop_assert_eq!(d.text, m);
        prop_assert_eq!(d.unknown + d.dropped_bits, 0);
    }

    #[test]
    fn bitstream_text_round_trips(b in bits(200)) {
        let s = b.to_string();
        prop_assert_eq!(s.parse::<Bitstream>().unwrap(), b);
    }

    #[test]
    fn key_laws(code in bits(64), key_len in 0usize..=64, seed in any::<u64>(), op in op()) {
        let key_len = key_len.min(code.len());
        let key = Bitstream::from_bits((0..key_len).map(|i| (seed >> (i % 64)) & 1 == 1).collect());
        let spec = KeySpec::new(key, op);
        let once = apply_key(&code, &spec).unwrap();
        prop_assert_eq!(once.len(), code.len());
        let twice = apply_key(&once, &spec).unwrap();
        match op {
            KeyOp::Xor => prop_assert_eq!(twice, code.clone()),
            KeyOp::And | KeyOp::Or => prop_assert_eq!(twice, once.clone()),
        }
        // Bits left of the key are untouched.
        let lead = code.len() - key_len;
        prop_assert_eq!(&once.bits()[..lead], &code.bits()[..lead]);
    }

    #[test]
    fn family_rewrites_keep_layout(seed in any::<u64>(), shape in shape(), bits in 1usize..300, choice in any::<u8>()) {
        let spec = DummySpec { name: "w".into(), capacity_bits: bits, mode: Mode::Combined, shape, seed };
        let cf = synthesize_dummy(&host(49), &spec).unwrap();
        let code = &cf.methods.last().unwrap().code().unwrap().code;
        let insns = decode_instructions(code).unwrap();
        for p in scan_codepoints(&insns, Mode::Combined) {
            let edit = if p.kind.is_opcode() {
                Edit::Opcode(p.kind.byte_for(choice % (1u8 << p.kind.width())))
            } else {
                Edit::Operand(choice)
            };
            let out = rewrite(code, &insns, p.index, edit).unwrap();
            prop_assert_eq!(out.len(), code.len());
            let after = decode_instructions(&out).unwrap();
            prop_assert_eq!(after.len(), insns.len());
            let diff = out.iter().zip(code).filter(|(a, b)| a != b).count();
            prop_assert!(diff <= 1);
            prop_assert!(after.iter().zip(&insns).all(|(a, b)| a.offset == b.offset && a.len() == b.len()));
        }
    }

    #[test]
    fn synthesized_dummies_embed_and_extract(
        m in message(Codebook::standard(), 12),
        mode in mode(),
        op in op(),
        key_seed in any::<u64>(),
        key_len in 0usize..=16,
        shape in shape(),
        major in prop::sample::select(vec![49u16, 50, 52]),
    ) {
        let book = Codebook::standard();
        let plain = encode_chars(&m, &book).unwrap();
        let key_len = key_len.min(plain.len());
        let key = Bitstream::from_bits((0..key_len).map(|i| (key_seed >> i) & 1 == 1).collect());
        let config = WatermarkConfig::new(book, KeySpec::new(key, op), mode);
        let spec = DummySpec { name: "dm".into(), capacity_bits: plain.len(), mode, shape, seed: key_seed };
        let cf = synthesize_dummy(&host(major), &spec).unwrap();
        let i = cf.methods.len() - 1;
        let (out, plan) = embed(&cf, i, &m, &config).unwrap();
        let out = ClassFile::parse(&out.to_bytes().unwrap()).unwrap();
        prop_assert!(verify_model(&out, &m, &config).unwrap().is_found());
        validate_structure(&out, i).unwrap();
        let code = &out.methods[i].code().unwrap().code;
        let carried = codepoints_to_bits(&decode_instructions(code).unwrap(), mode);
        let keyed = config.keyed_bits(&m).unwrap();
        prop_assert_eq!(&carried.bits()[..keyed.len()], keyed.bits());
        prop_assert_eq!(plan.required_bits, keyed.len());
        if op == KeyOp::Xor {
            let restored = apply_key(&Bitstream::from_bits(carried.bits()[..keyed.len()].to_vec()), &config.key).unwrap();
            prop_assert_eq!(restored, plain);
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(500))]

    #[test]
    fn synthesized_dummies_are_valid(
        name in "[a-zA-Z_$][a-zA-Z0-9_$]{0,12}",
        bits in 0usize..2000,
        mode in mode(),
        shape in shape(),
        seed in any::<u64>(),
        major in prop::sample::select(vec![45u16, 49, 50, 51, 52, 61]),
    ) {
        let h = host(major);
        prop_assume!(h.method_index(&name, None).is_none());
        let spec = DummySpec { name: name.clone(), capacity_bits: bits, mode, shape, seed };
        let cf = synthesize_dummy(&h, &spec).unwrap();
        prop_assert_eq!(cf.methods.len(), h.methods.len() + 1);
        let i = cf.method_index(&name, Some("(I)V")).unwrap();
        prop_assert!(cf.methods[i].is_private());
        validate_structure(&cf, i).unwrap();
        prop_assert!(capacity(&cf, i, mode).unwrap() >= bits);
        let again = ClassFile::parse(&cf.to_bytes().unwrap()).unwrap();
        prop_assert_eq!(again, cf.clone());
        // Nothing calls the new method.
        for j in 0..cf.methods.len() {
            prop_assert!(!dummymark::bytecode::intra_class_callees(&cf, j).contains(&i));
        }
        if major > 50 {
            let insns = decode_instructions(&cf.methods[i].code().unwrap().code).unwrap();
            prop_assert!(insns.iter().all(|x| x.branch_targets().is_empty()));
        }
    }
}

#[test]
fn synthesis_is_deterministic() {
    let spec = DummySpec { name: "w".into(), capacity_bits: 100, mode: Mode::Combined, shape: DummyShape::Y, seed: 9 };
    let a = synthesize_dummy(&host(49), &spec).unwrap();
    let b = synthesize_dummy(&host(49), &spec).unwrap();
    assert_eq!(a.to_bytes().unwrap(), b.to_bytes().unwrap());
}

#[test]
fn kinds_cover_every_family() {
    let spec = DummySpec { name: "w".into(), capacity_bits: 400, mode: Mode::Combined, shape: DummyShape::S, seed: 1 };
    let cf = synthesize_dummy(&host(49), &spec).unwrap();
    let insns = decode_instructions(&cf.methods.last().unwrap().code().unwrap().code).unwrap();
    let kinds: std::collections::BTreeSet<String> =
        scan_codepoints(&insns, Mode::Combined).iter().map(|c| format!("{:?}", c.kind)).collect();
    for k in [CodepointKind::Arith8, CodepointKind::Branch2, CodepointKind::OperandBipush, CodepointKind::OperandIinc] {
        assert!(kinds.contains(&format!("{k:?}")), "{k:?}");
    }
}
