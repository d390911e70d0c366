//! Exact arithmetic in cyclotomic fields Q(zeta_m), their Galois groups
//! and subfield lattices.

mod elem;
mod field;
mod galois;
mod poly;

pub use elem::{cyc_arith, cyc_reduce, parse_rat, ArithOp, CycElem, Rat};
pub use field::{cyclotomic_poly, CycField};
pub use galois::{
    apply_aut, galois_group, generates, is_fixed_by, norm_between, rel_discriminant, rel_norm,
    rel_trace, subgroup_lattice, trace_between, GaloisAut, GaloisGroup, SubgroupData,
};
