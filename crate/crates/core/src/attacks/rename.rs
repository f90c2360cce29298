use std::collections::{BTreeMap, HashSet};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::classfile::{ClassFile, ClassFileError, Constant, MemberInfo};

fn fresh(rng: &mut ChaCha8Rng, taken: &mut HashSet<String>) -> String {
    loop {
        let len = rng.gen_range(2..=6);
        let name: String = (0..len).map(|_| rng.gen_range(b'a'..=b'z') as char).collect();
        if taken.insert(name.clone()) {
            return name;
        }
    }
}

fn renameable(cf: &ClassFile, m: &MemberInfo) -> bool {
    m.is_private() && !cf.member_name(m).starts_with('<')
}

/// Renames private fields and methods to short seeded identifiers. Each
/// renamed member gets a fresh Utf8; every field/method reference to it from
/// this class is pointed at a fresh NameAndType. Existing entries are left
/// alone, so code arrays are byte-identical.
pub fn attack_rename(cf: &ClassFile, seed: u64) -> Result<ClassFile, ClassFileError> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = cf.clone();
    let mut taken: HashSet<String> = cf.fields.iter().chain(&cf.methods).map(|m| cf.member_name(m)).collect();
    // (is_method, old name, descriptor) -> new name
    let mut renamed: BTreeMap<(bool, String, String), String> = BTreeMap::new();
    for (is_method, members) in [(false, &cf.fields), (true, &cf.methods)] {
        for m in members.iter() {
            if !renameable(cf, m) {
                continue;
            }
            let desc = cf.constant_pool.utf8(m.descriptor_index).unwrap_or_default();
            renamed.insert((is_method, cf.member_name(m), desc), fresh(&mut rng, &mut taken));
        }
    }
    if renamed.is_empty() {
        return Ok(out);
    }

    let pool = &mut out.constant_pool;
    for (is_method, members) in [(false, &mut out.fields), (true, &mut out.methods)] {
        for m in members.iter_mut() {
            let old = pool.utf8(m.name_index).unwrap_or_default();
            let desc = pool.utf8(m.descriptor_index).unwrap_or_default();
            if m.is_private() {
                if let Some(new) = renamed.get(&(is_method, old, desc)) {
                    m.name_index = pool.intern_utf8(new)?;
                }
            }
        }
    }

    let this = cf.this_class;
    let refs: Vec<(u16, bool, u16)> = pool
        .iter()
        .filter_map(|(i, c)| match c {
            Constant::Fieldref { class_index, name_and_type_index } if *class_index == this => {
                Some((i, false, *name_and_type_index))
            }
            Constant::Methodref { class_index, name_and_type_index }
            | Constant::InterfaceMethodref { class_index, name_and_type_index }
                if *class_index == this =>
            {
                Some((i, true, *name_and_type_index))
            }
            _ => None,
        })
        .collect();
    for (i, is_method, nat) in refs {
        let Some(Constant::NameAndType { name_index, descriptor_index }) = pool.get(nat).cloned() else {
            continue;
        };
        let key = (is_method, pool.utf8(name_index).unwrap_or_default(), pool.utf8(descriptor_index).unwrap_or_default());
        let Some(new) = renamed.get(&key) else { continue };
        let name_index = pool.intern_utf8(new)?;
        let nat = pool.intern(Constant::NameAndType { name_index, descriptor_index })?;
        match pool.get_mut(i) {
            Some(Constant::Fieldref { name_and_type_index, .. })
            | Some(Constant::Methodref { name_and_type_index, .. })
            | Some(Constant::InterfaceMethodref { name_and_type_index, .. }) => *name_and_type_index = nat,
            _ => unreachable!("collected above"),
        }
    }
    Ok(out)
}
