//! The shipped family files, compiled into the library.

use crate::tiling::{parse_gluing_file, FamilyPair};

const FILES: [(&str, &str); 17] = [
    ("7_1", include_str!("../data/families/7_1.glue")),
    ("7_2", include_str!("../data/families/7_2.glue")),
    ("7_3", include_str!("../data/families/7_3.glue")),
    ("13_1", include_str!("../data/families/13_1.glue")),
    ("13_2", include_str!("../data/families/13_2.glue")),
    ("13_3", include_str!("../data/families/13_3.glue")),
    ("13_4", include_str!("../data/families/13_4.glue")),
    ("13_5", include_str!("../data/families/13_5.glue")),
    ("13_6", include_str!("../data/families/13_6.glue")),
    ("13_7", include_str!("../data/families/13_7.glue")),
    ("13_8", include_str!("../data/families/13_8.glue")),
    ("13_9", include_str!("../data/families/13_9.glue")),
    ("15_1", include_str!("../data/families/15_1.glue")),
    ("15_2", include_str!("../data/families/15_2.glue")),
    ("15_3", include_str!("../data/families/15_3.glue")),
    ("15_4", include_str!("../data/families/15_4.glue")),
    ("21_1", include_str!("../data/families/21_1.glue")),
];

/// Ids of all shipped families, smallest tile count first.
pub fn family_ids() -> impl Iterator<Item = &'static str> {
    FILES.iter().map(|(id, _)| *id)
}

/// Raw text of a shipped family file.
pub fn family_source(id: &str) -> Option<&'static str> {
    FILES.iter().find(|(fid, _)| *fid == id).map(|(_, text)| *text)
}

/// Parses a shipped family. Shipped files are checked by the test suite,
/// so a parse failure here is a packaging bug.
pub fn family(id: &str) -> Option<FamilyPair> {
    family_source(id).map(|text| {
        parse_gluing_file(text.as_bytes()).unwrap_or_else(|e| panic!("shipped family {id}: {e}"))
    })
}

pub fn all_families() -> Vec<FamilyPair> {
    family_ids().filter_map(family).collect()
}
