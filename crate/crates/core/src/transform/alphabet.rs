use std::collections::HashSet;

use crate::symbol::SymbolClass;

/// Partition of the 256 bytes into classes that no edge label splits.
///
/// Bytes in the same class behave identically on every edge considered, so
/// algorithms iterate over classes instead of all 256 bytes. Class ids are
/// numbered in order of their smallest member.
#[derive(Clone, Debug)]
pub(crate) struct ByteClasses {
    class_of: [u16; 256],
    members: Vec<SymbolClass>,
}

impl ByteClasses {
    pub(crate) fn new<'a>(labels: impl IntoIterator<Item = &'a SymbolClass>) -> Self {
        let distinct: HashSet<SymbolClass> = labels.into_iter().copied().collect();
        let mut distinct: Vec<SymbolClass> = distinct.into_iter().collect();
        distinct.sort_unstable();

        let mut class_of = [0u16; 256];
        let mut count = 1usize;
        let mut remap = Vec::new();
        for label in &distinct {
            remap.clear();
            remap.resize(count * 2, u16::MAX);
            let mut next = 0u16;
            for b in 0..=255u8 {
                let key = class_of[b as usize] as usize * 2 + label.contains(b) as usize;
                if remap[key] == u16::MAX {
                    remap[key] = next;
                    next += 1;
                }
                class_of[b as usize] = remap[key];
            }
            count = next as usize;
            if count == 256 {
                break;
            }
        }
        let mut members = vec![SymbolClass::EMPTY; count];
        for b in 0..=255u8 {
            members[class_of[b as usize] as usize].insert(b);
        }
        ByteClasses { class_of, members }
    }

    pub(crate) fn len(&self) -> usize {
        self.members.len()
    }

    pub(crate) fn members(&self, k: usize) -> &SymbolClass {
        &self.members[k]
    }

    /// Class ids whose members lie in `label`. `label` must be a union of
    /// whole classes, which holds for every label the partition was built
    /// from.
    pub(crate) fn covering(&self, label: &SymbolClass) -> Vec<u16> {
        let mut out: Vec<u16> = label.iter().map(|b| self.class_of[b as usize]).collect();
        out.dedup();
        out.sort_unstable();
        out.dedup();
        out
    }
}
