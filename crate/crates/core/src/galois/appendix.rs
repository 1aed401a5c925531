//! Element lists of the four Borel-type groups, transcribed entry by entry.

pub(super) const G5B_1_4: [[u8; 4]; 20] = [
    [1, 0, 0, 1],
    [1, 0, 0, 4],
    [1, 1, 0, 1],
    [1, 1, 0, 4],
    [1, 2, 0, 1],
    [1, 2, 0, 4],
    [1, 3, 0, 1],
    [1, 3, 0, 4],
    [1, 4, 0, 1],
    [1, 4, 0, 4],
    [4, 0, 0, 2],
    [4, 0, 0, 3],
    [4, 1, 0, 2],
    [4, 1, 0, 3],
    [4, 2, 0, 2],
    [4, 2, 0, 3],
    [4, 3, 0, 2],
    [4, 3, 0, 3],
    [4, 4, 0, 2],
    [4, 4, 0, 3],
];

pub(super) const G5B_4_1: [[u8; 4]; 40] = [
    [1, 0, 0, 1],
    [1, 0, 0, 2],
    [1, 0, 0, 3],
    [1, 0, 0, 4],
    [1, 1, 0, 1],
    [1, 1, 0, 2],
    [1, 1, 0, 3],
    [1, 1, 0, 4],
    [1, 2, 0, 1],
    [1, 2, 0, 2],
    [1, 2, 0, 3],
    [1, 2, 0, 4],
    [1, 3, 0, 1],
    [1, 3, 0, 2],
    [1, 3, 0, 3],
    [1, 3, 0, 4],
    [1, 4, 0, 1],
    [1, 4, 0, 2],
    [1, 4, 0, 3],
    [1, 4, 0, 4],
    [4, 0, 0, 1],
    [4, 0, 0, 2],
    [4, 0, 0, 3],
    [4, 0, 0, 4],
    [4, 1, 0, 1],
    [4, 1, 0, 2],
    [4, 1, 0, 3],
    [4, 1, 0, 4],
    [4, 2, 0, 1],
    [4, 2, 0, 2],
    [4, 2, 0, 3],
    [4, 2, 0, 4],
    [4, 3, 0, 1],
    [4, 3, 0, 2],
    [4, 3, 0, 3],
    [4, 3, 0, 4],
    [4, 4, 0, 1],
    [4, 4, 0, 2],
    [4, 4, 0, 3],
    [4, 4, 0, 4],
];

pub(super) const G7B_1_6: [[u8; 4]; 42] = [
    [1, 0, 0, 1],
    [1, 0, 0, 2],
    [1, 0, 0, 4],
    [1, 1, 0, 1],
    [1, 1, 0, 2],
    [1, 1, 0, 4],
    [1, 2, 0, 1],
    [1, 2, 0, 2],
    [1, 2, 0, 4],
    [1, 3, 0, 1],
    [1, 3, 0, 2],
    [1, 3, 0, 4],
    [1, 4, 0, 1],
    [1, 4, 0, 2],
    [1, 4, 0, 4],
    [1, 5, 0, 1],
    [1, 5, 0, 2],
    [1, 5, 0, 4],
    [1, 6, 0, 1],
    [1, 6, 0, 2],
    [1, 6, 0, 4],
    [6, 0, 0, 1],
    [6, 0, 0, 2],
    [6, 0, 0, 4],
    [6, 1, 0, 1],
    [6, 1, 0, 2],
    [6, 1, 0, 4],
    [6, 2, 0, 1],
    [6, 2, 0, 2],
    [6, 2, 0, 4],
    [6, 3, 0, 1],
    [6, 3, 0, 2],
    [6, 3, 0, 4],
    [6, 4, 0, 1],
    [6, 4, 0, 2],
    [6, 4, 0, 4],
    [6, 5, 0, 1],
    [6, 5, 0, 2],
    [6, 5, 0, 4],
    [6, 6, 0, 1],
    [6, 6, 0, 2],
    [6, 6, 0, 4],
];

pub(super) const G7B_6_1: [[u8; 4]; 84] = [
    [1, 0, 0, 1],
    [1, 0, 0, 2],
    [1, 0, 0, 3],
    [1, 0, 0, 4],
    [1, 0, 0, 5],
    [1, 0, 0, 6],
    [1, 1, 0, 1],
    [1, 1, 0, 2],
    [1, 1, 0, 3],
    [1, 1, 0, 4],
    [1, 1, 0, 5],
    [1, 1, 0, 6],
    [1, 2, 0, 1],
    [1, 2, 0, 2],
    [1, 2, 0, 3],
    [1, 2, 0, 4],
    [1, 2, 0, 5],
    [1, 2, 0, 6],
    [1, 3, 0, 1],
    [1, 3, 0, 2],
    [1, 3, 0, 3],
    [1, 3, 0, 4],
    [1, 3, 0, 5],
    [1, 3, 0, 6],
    [1, 4, 0, 1],
    [1, 4, 0, 2],
    [1, 4, 0, 3],
    [1, 4, 0, 4],
    [1, 4, 0, 5],
    [1, 4, 0, 6],
    [1, 5, 0, 1],
    [1, 5, 0, 2],
    [1, 5, 0, 3],
    [1, 5, 0, 4],
    [1, 5, 0, 5],
    [1, 5, 0, 6],
    [1, 6, 0, 1],
    [1, 6, 0, 2],
    [1, 6, 0, 3],
    [1, 6, 0, 4],
    [1, 6, 0, 5],
    [1, 6, 0, 6],
    [6, 0, 0, 1],
    [6, 0, 0, 2],
    [6, 0, 0, 3],
    [6, 0, 0, 4],
    [6, 0, 0, 5],
    [6, 0, 0, 6],
    [6, 1, 0, 1],
    [6, 1, 0, 2],
    [6, 1, 0, 3],
    [6, 1, 0, 4],
    [6, 1, 0, 5],
    [6, 1, 0, 6],
    [6, 2, 0, 1],
    [6, 2, 0, 2],
    [6, 2, 0, 3],
    [6, 2, 0, 4],
    [6, 2, 0, 5],
    [6, 2, 0, 6],
    [6, 3, 0, 1],
    [6, 3, 0, 2],
    [6, 3, 0, 3],
    [6, 3, 0, 4],
    [6, 3, 0, 5],
    [6, 3, 0, 6],
    [6, 4, 0, 1],
    [6, 4, 0, 2],
    [6, 4, 0, 3],
    [6, 4, 0, 4],
    [6, 4, 0, 5],
    [6, 4, 0, 6],
    [6, 5, 0, 1],
    [6, 5, 0, 2],
    [6, 5, 0, 3],
    [6, 5, 0, 4],
    [6, 5, 0, 5],
    [6, 5, 0, 6],
    [6, 6, 0, 1],
    [6, 6, 0, 2],
    [6, 6, 0, 3],
    [6, 6, 0, 4],
    [6, 6, 0, 5],
    [6, 6, 0, 6],
];
