//! Constructive decomposition of the directed 3-torus D3(m) into three
//! arc-disjoint directed Hamilton cycles, for every m >= 3, together with the
//! section machinery (return maps, Kempe swaps, first-return dynamics) used
//! to certify it.

pub mod decomp;
pub mod kempe;
pub mod m4;
pub mod odd;
pub mod route_e;
pub mod section;
pub mod torus;
