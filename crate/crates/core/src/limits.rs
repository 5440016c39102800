/// Size caps shared by every enumeration in the crate.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Limits {
    /// Maximum number of elements any closure may produce.
    pub elements: usize,
    /// Maximum size of a flattened state space (also bounds prefix domains).
    pub flat_degree: usize,
    /// Maximum degree accepted by the holonomy engine.
    pub subset_degree: usize,
}

impl Limits {
    pub const DEFAULT_ELEMENTS: usize = 1_000_000;
    pub const DEFAULT_FLAT_DEGREE: usize = 65_536;
    pub const DEFAULT_SUBSET_DEGREE: usize = 64;
}

impl Default for Limits {
    fn default() -> Self {
        Limits {
            elements: Self::DEFAULT_ELEMENTS,
            flat_degree: Self::DEFAULT_FLAT_DEGREE,
            subset_degree: Self::DEFAULT_SUBSET_DEGREE,
        }
    }
}
