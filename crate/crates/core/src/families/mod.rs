//! The two worked uncertainty sets: discrete memoryless sources and
//! finite-state arbitrarily varying sources.

mod avs;
mod dms;
mod stitch;

pub use avs::{
    avs_center_radius, avs_rate, avs_stitch, avs_type_members, AvsSpec, AvsStitchReport, TypeStitchLine,
};
pub use dms::{
    binary_two_list, dms_pmf, dms_radius_bound, empirical_entropy_list, jensen_lower_bound, DmsRadiusBound,
    DmsSpec, ENUMERATION_CAP,
};
pub use stitch::{stitch_lists, StitchedList};
