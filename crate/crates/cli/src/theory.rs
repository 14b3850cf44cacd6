//! Theoretical space cost models.

/// Published asymptotic space models, in bits per key as a function of the
/// false-positive probability.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SpaceModel {
    /// Information-theoretic minimum, log2(1/eps).
    LowerBound,
    Bloom,
    Xor,
    /// Compressed xor variant; pays a flat 0.5125 bits on top of its rate.
    XorPlus,
    Fuse3,
    Fuse4,
}

impl SpaceModel {
    pub const ALL: [SpaceModel; 6] = [
        SpaceModel::LowerBound,
        SpaceModel::Bloom,
        SpaceModel::Xor,
        SpaceModel::XorPlus,
        SpaceModel::Fuse3,
        SpaceModel::Fuse4,
    ];

    pub fn name(self) -> &'static str {
        match self {
            SpaceModel::LowerBound => "lower_bound",
            SpaceModel::Bloom => "bloom",
            SpaceModel::Xor => "xor",
            SpaceModel::XorPlus => "xor_plus",
            SpaceModel::Fuse3 => "fuse3",
            SpaceModel::Fuse4 => "fuse4",
        }
    }
}

/// Bits per key the model needs to reach false-positive probability
/// `epsilon`.
pub fn theoretical_space(model: SpaceModel, epsilon: f64) -> f64 {
    assert!(epsilon > 0.0 && epsilon < 1.0, "epsilon must lie in (0, 1)");
    let entropy = (1.0 / epsilon).log2();
    match model {
        SpaceModel::LowerBound => entropy,
        SpaceModel::Bloom => 1.44 * entropy,
        SpaceModel::Xor => 1.23 * entropy,
        SpaceModel::XorPlus => 1.0824 * entropy + 0.5125,
        SpaceModel::Fuse3 => 1.125 * entropy,
        SpaceModel::Fuse4 => 1.075 * entropy,
    }
}
