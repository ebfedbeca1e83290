//! Fixed BRIEF sampling pattern, version 1.
//!
//! 256 point pairs `(px, py, qx, qy)` drawn once from an isotropic Gaussian
//! (sigma = 31/5, rounded, clipped to the 31x31 patch). Changing this table
//! changes every descriptor and invalidates stored vocabularies.

pub const PATTERN_VERSION: u32 = 1;

pub const BRIEF_PAIRS: [[i8; 4]; 256] = [
    [-13, -9, 6, -13],
    [4, 2, -4, 5],
    [-9, 6, -4, 0],
    [-1, -1, -7, 9],
    [2, -13, -3, -7],
    [-3, -4, 1, -7],
    [6, 8, 3, -1],
    [2, 11, 0, 6],
    [3, 0, -7, 7],
    [-4, -6, -4, -8],
    [-12, -5, -2, -9],
    [-3, 7, 9, 0],
    [0, -7, 1, -8],
    [-12, 6, 8, -7],
    [3, 11, 2, 8],
    [-10, -5, -8, 0],
    [2, -1, -3, -15],
    [5, 4, -4, 2],
    [0, 0, -11, -12],
    [12, 14, 1, 5],
    [-2, -2, -9, 6],
    [0, 1, -3, -1],
    [-3, -9, -2, 8],
    [8, 4, 3, -7],
    [-1, -2, -3, 5],
    [5, 5, -3, 8],
    [1, 3, -1, 0],
    [0, 6, -14, 12],
    [8, -10, -7, 7],
    [10, 2, 5, -1],
    [-8, 10, 0, 1],
    [4, -8, 5, 5],
    [-10, 8, 6, 0],
    [-3, -1, -3, -2],
    [1, 0, -6, -7],
    [-5, -6, -6, -1],
    [-10, 1, 2, 10],
    [-3, -7, 1, 2],
    [4, -3, -3, 4],
    [-3, 7, -7, -9],
    [5, -3, 4, 0],
    [-3, 5, -5, -7],
    [-6, 4, -3, -2],
    [0, -1, -4, 1],
    [4, 0, 5, 0],
    [-6, -1, -4, 13],
    [6, 8, 1, -6],
    [-12, 3, -3, -1],
    [1, 3, -7, 6],
    [4, -2, -2, 2],
    [-11, 0, 10, -2],
    [10, -2, 7, -2],
    [-4, -4, 15, 3],
    [-2, 1, -12, -15],
    [1, -5, 3, -5],
    [2, 10, 2, -2],
    [-4, 1, 1, -6],
    [6, -5, -2, 6],
    [-3, 1, -3, 7],
    [-9, -4, -5, -5],
    [4, 13, 7, 3],
    [6, 3, -7, 1],
    [-4, -10, 3, 3],
    [6, -3, -6, -4],
    [1, 4, 3, 1],
    [1, 6, 0, -4],
    [2, -3, 6, 4],
    [5, 0, 7, -2],
    [-6, -13, 7, -6],
    [-1, 14, 1, -5],
    [7, 0, -6, 0],
    [-5, -9, -11, -5],
    [-1, 2, -3, -6],
    [-3, -6, 5, 3],
    [2, 10, -11, 2],
    [6, 2, -5, 10],
    [1, 7, 5, -1],
    [-7, -2, -12, 2],
    [6, -5, 15, 3],
    [6, -4, 2, 4],
    [2, 13, -7, -12],
    [6, 15, -9, -2],
    [-3, 5, -2, -4],
    [4, 2, 11, 1],
    [-7, -1, 0, -4],
    [-4, -4, 6, -8],
    [3, 4, 5, -8],
    [2, 0, -15, -4],
    [0, 7, -10, 4],
    [7, 2, 3, 9],
    [-3, 2, -1, 7],
    [-5, -8, -10, 5],
    [9, -1, -4, 7],
    [-5, 0, 3, -2],
    [-4, -7, 13, 1],
    [6, -2, 7, 5],
    [4, -2, 0, -1],
    [3, -8, -13, 4],
    [-4, -7, -2, -2],
    [6, 3, -2, -8],
    [15, -3, -1, 2],
    [0, -2, -3, 5],
    [4, 4, -4, 0],
    [-1, 1, 1, -4],
    [3, -7, -4, 7],
    [3, -10, 2, 3],
    [2, -8, 10, 1],
    [3, -5, 12, 2],
    [-4, 1, 0, -3],
    [8, -4, -7, 1],
    [-2, -9, 5, 3],
    [-3, -9, -2, -1],
    [3, 8, -4, 7],
    [12, -7, 2, 2],
    [-7, -2, 6, -3],
    [-3, -5, -1, 5],
    [9, -3, 4, 7],
    [-1, 11, -9, 6],
    [13, 10, 0, -9],
    [-6, -5, -6, -2],
    [-4, 1, 3, -1],
    [3, -1, 15, 0],
    [-1, 1, 0, 8],
    [-4, -4, -2, -5],
    [15, 7, 10, -10],
    [-1, -5, 0, 10],
    [-5, -6, -10, -4],
    [-1, -3, 2, -11],
    [3, -7, -2, 7],
    [12, -5, 1, -7],
    [8, 5, 1, -3],
    [3, -3, -8, -1],
    [-14, -6, -3, 8],
    [9, -2, 7, -2],
    [-1, 1, 4, 2],
    [-1, -1, 0, 2],
    [8, 3, -5, -1],
    [-6, 1, 5, -4],
    [-12, 4, -5, 2],
    [-2, 4, 2, -3],
    [2, -3, -5, -1],
    [-3, 5, 13, -4],
    [-6, 2, -5, 4],
    [1, -1, -2, 1],
    [-6, -6, 12, 7],
    [4, -1, -3, 5],
    [-7, -3, -5, -9],
    [2, 10, -2, 15],
    [2, -5, 3, -6],
    [-5, -1, 2, -3],
    [-4, -1, 9, -5],
    [-11, -6, 7, 4],
    [-6, -6, 9, -1],
    [13, 5, -2, 2],
    [-4, 4, -2, 8],
    [4, 2, -1, 4],
    [-3, -8, -7, -6],
    [2, -12, -7, -9],
    [-3, -14, -6, -11],
    [-3, 5, -2, -1],
    [-3, -5, 0, 4],
    [-1, -6, 8, -3],
    [8, -1, -5, -5],
    [1, -14, -1, -4],
    [-2, 2, -6, -6],
    [-4, -1, -3, 2],
    [4, 5, -7, 2],
    [-14, -2, 5, -2],
    [10, -5, 7, 5],
    [0, -9, -2, -1],
    [-2, 1, 3, -11],
    [5, 13, -6, -5],
    [15, 5, 2, 3],
    [15, -11, -11, 3],
    [-2, 0, -2, 14],
    [2, 4, 3, 1],
    [-5, 0, 1, 0],
    [1, 1, -10, 13],
    [-1, -13, 1, 2],
    [-8, 1, -1, 2],
    [-5, 3, -1, 4],
    [-2, -3, -1, -6],
    [-2, -10, 7, 0],
    [0, -4, 9, -2],
    [11, 1, -3, -6],
    [5, -3, 4, 2],
    [-6, 7, 3, 3],
    [-2, -2, -7, 2],
    [11, -4, 2, 7],
    [8, -5, -8, -5],
    [1, -11, 3, 2],
    [-11, -5, 1, 6],
    [3, -4, 1, 2],
    [8, 0, 5, -5],
    [2, 14, 4, 4],
    [3, 2, 0, -7],
    [-9, 9, -2, 3],
    [4, 1, -2, 2],
    [2, 11, 4, 1],
    [-2, -8, 0, -1],
    [-6, 4, 5, 1],
    [-2, 4, -2, 10],
    [3, -5, -7, -2],
    [-5, 8, -10, 6],
    [15, 0, -4, 5],
    [-3, 8, 7, -5],
    [0, 5, 3, 0],
    [-4, 2, -8, -2],
    [-6, -5, -6, -4],
    [6, -1, -8, 1],
    [0, -1, -1, 8],
    [-7, -4, 2, -9],
    [1, -12, 1, 0],
    [-4, 5, 0, -11],
    [8, 9, -3, -4],
    [6, 6, -6, -2],
    [8, -2, 0, 0],
    [-4, 12, -4, -1],
    [-3, -1, 1, 7],
    [2, -8, -7, -1],
    [7, -1, 15, -4],
    [-2, 11, 1, 3],
    [7, 5, -5, -2],
    [5, 0, -1, 1],
    [6, -8, 2, 4],
    [5, 3, 2, -7],
    [-2, -2, 12, 9],
    [0, 14, 3, 0],
    [6, 2, -9, 1],
    [-5, 12, 0, 8],
    [0, -6, -7, 7],
    [-5, -8, -3, 6],
    [-8, -2, -3, 14],
    [-2, -2, 15, 2],
    [-10, 3, 9, -1],
    [5, -3, 0, -1],
    [-4, 7, 0, -2],
    [-1, 0, 1, 1],
    [2, 7, 2, 14],
    [9, 5, -6, -1],
    [13, -7, 0, -2],
    [-12, -5, 10, -2],
    [11, 6, 2, 0],
    [-3, -5, 7, 14],
    [-14, 9, -4, 2],
    [-1, -6, 8, 5],
    [-5, 4, 2, -10],
    [1, 0, -4, 3],
    [-5, 4, 5, -5],
    [5, -2, 5, 5],
    [-4, 9, 4, -14],
    [3, -2, 0, -6],
    [-11, 0, -1, -4],
    [-9, 4, -8, -1],
    [-2, 3, 4, -2],
    [-7, -4, 3, -1],
];
