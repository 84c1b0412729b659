//! Frozen 13×13 composition table.
//!
//! Generated by enumerating every ordering of the six endpoints of three
//! intervals; the test suite re-derives it independently. Row is the
//! relation of (x, y), column the relation of (y, z), entry the possible
//! relations of (x, z), with bits in `BaseRelation` order.

#[rustfmt::skip]
pub(crate) const COMPOSITION: [[u16; 13]; 13] = [
    [0x0001, 0x1fff, 0x0001, 0x0155, 0x0001, 0x0155, 0x0001, 0x0001, 0x0155, 0x0001, 0x0155, 0x0001, 0x0001], // <
    [0x1fff, 0x0002, 0x052a, 0x0002, 0x052a, 0x0002, 0x052a, 0x0002, 0x052a, 0x0002, 0x0002, 0x0002, 0x0002], // >
    [0x0001, 0x02aa, 0x0001, 0x1c00, 0x0001, 0x0150, 0x0004, 0x0004, 0x0150, 0x0001, 0x0150, 0x0001, 0x0004], // m
    [0x0a15, 0x0002, 0x10c0, 0x0002, 0x0520, 0x0002, 0x0520, 0x0002, 0x0520, 0x0002, 0x0008, 0x0008, 0x0008], // mi
    [0x0001, 0x02aa, 0x0001, 0x02a0, 0x0015, 0x1ff0, 0x0010, 0x0a10, 0x0150, 0x0a15, 0x0150, 0x0015, 0x0010], // o
    [0x0a15, 0x0002, 0x0a10, 0x0002, 0x1ff0, 0x002a, 0x0520, 0x002a, 0x0520, 0x02aa, 0x0020, 0x02a0, 0x0020], // oi
    [0x0001, 0x0002, 0x0001, 0x0008, 0x0015, 0x0520, 0x0040, 0x10c0, 0x0100, 0x0a15, 0x0100, 0x0015, 0x0040], // s
    [0x0a15, 0x0002, 0x0a10, 0x0008, 0x0a10, 0x0020, 0x10c0, 0x0080, 0x0520, 0x0200, 0x0020, 0x0200, 0x0080], // si
    [0x0001, 0x0002, 0x0001, 0x0002, 0x0155, 0x052a, 0x0100, 0x052a, 0x0100, 0x1fff, 0x0100, 0x0155, 0x0100], // d
    [0x0a15, 0x02aa, 0x0a10, 0x02a0, 0x0a10, 0x02a0, 0x0a10, 0x0200, 0x1ff0, 0x0200, 0x02a0, 0x0200, 0x0200], // di
    [0x0001, 0x0002, 0x0004, 0x0002, 0x0150, 0x002a, 0x0100, 0x002a, 0x0100, 0x02aa, 0x0400, 0x1c00, 0x0400], // f
    [0x0001, 0x02aa, 0x0004, 0x02a0, 0x0010, 0x02a0, 0x0010, 0x0200, 0x0150, 0x0200, 0x1c00, 0x0800, 0x0800], // fi
    [0x0001, 0x0002, 0x0004, 0x0008, 0x0010, 0x0020, 0x0040, 0x0080, 0x0100, 0x0200, 0x0400, 0x0800, 0x1000], // =
];

/// Base composition lookup, exposed for table-level checks.
pub fn base_composition(a: super::BaseRelation, b: super::BaseRelation) -> super::RelationSet {
    super::RelationSet::from_bits(COMPOSITION[a as usize][b as usize])
}
