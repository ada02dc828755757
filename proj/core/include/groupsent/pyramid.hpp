#pragma once

#include <vector>

#include "groupsent/imaging.hpp"

namespace groupsent {

/// Half-octave Gaussian derivative pyramid settings for face crops.
struct PyramidConfig {
    int face_size = 48;
    double base_sigma = 1.0;
    int scales = 3;

    static constexpr int kLevelsPerScale = 3;
    static constexpr int kWindow = 4;
    static constexpr int kFeaturesPerWindow = 10;

    /// scales * 3 levels * (face_size/4)^2 windows * 10 statistics.
    [[nodiscard]] std::size_t feature_length() const noexcept;
    void validate() const;
};

/// Multi-scale gradient statistics of a face crop.
///
/// For scale i (sigma_i = base_sigma * 2^i) the levels are
///   I0, I1 = I0 * g(sigma_i), I2 = I1 * g(sqrt(2) sigma_i),
/// and I2 seeds the next scale. Each level contributes, per non-overlapping
/// 4x4 window in row-major order, the means and then the population standard
/// deviations of (Ix, Iy, Ixx, Iyy, Ixy). No downsampling happens between
/// scales, so window positions line up across the whole vector.
///
/// The face must already be face_size x face_size.
std::vector<double> extract_face_features(const GrayImage& face, const PyramidConfig& cfg = {});

/// Convenience: grayscale crop of `box`, resized to the pyramid's face size.
GrayImage normalized_face(const GrayImage& image, const Box& box, const PyramidConfig& cfg = {});

}  // namespace groupsent
