use std::collections::BTreeSet;

use crate::bytecode::intra_class_callees;
use crate::classfile::ClassFile;

use super::AttackError;

/// Indices of methods reachable from the roots: the named entry points, every
/// non-private method and the initializers.
pub fn reachable_methods(cf: &ClassFile, entry_points: &[&str]) -> BTreeSet<usize> {
    let mut seen = BTreeSet::new();
    let mut work: Vec<usize> = (0..cf.methods.len())
        .filter(|&i| {
            let name = cf.method_name(i);
            !cf.methods[i].is_private() || name.starts_with('<') || entry_points.contains(&name.as_str())
        })
        .collect();
    while let Some(i) = work.pop() {
        if seen.insert(i) {
            work.extend(intra_class_callees(cf, i).into_iter().filter(|c| !seen.contains(c)));
        }
    }
    seen
}

/// Removes private methods nothing reachable calls.
pub fn attack_trim(cf: &ClassFile, entry_points: &[&str]) -> Result<ClassFile, AttackError> {
    for e in entry_points {
        if cf.method_index(e, None).is_none() {
            return Err(AttackError::UnknownEntryPoint(e.to_string()));
        }
    }
    let keep = reachable_methods(cf, entry_points);
    let mut out = cf.clone();
    out.methods = cf.methods.iter().enumerate().filter(|(i, _)| keep.contains(i)).map(|(_, m)| m.clone()).collect();
    Ok(out)
}
