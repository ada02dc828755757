#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "groupsent/annotation.hpp"
#include "groupsent/grouping.hpp"

namespace groupsent {

inline constexpr std::size_t kEmotionGridLength = 32;
inline constexpr std::size_t kPoseletHistogramLength = kPoseletTypes;
inline constexpr std::size_t kSceneLength = kEmotionGridLength + kPoseletHistogramLength + kGroupFeatureLength;
inline constexpr int kMaxBaselineBoxes = 15;
inline constexpr std::size_t kBboxBaselineLength = 4 * kMaxBaselineBoxes;
inline constexpr double kDefaultPoseletThreshold = 0.9;

enum class FaceExpression { Neutral = 0, Smile = 1 };

struct LabelledFace {
    Box box;
    FaceExpression expression = FaceExpression::Neutral;
};

/// 4x4 grid of smile counts (row-major) followed by 4x4 grid of neutral counts.
/// A face votes for the cell holding its box center; index floor(4 c / size) is clamped to 3.
std::array<double, kEmotionGridLength> emotion_grid(double image_width, double image_height,
                                                    std::span<const LabelledFace> faces);

enum class PoseletMode { Count, Score };

/// Per-id histogram of detections scoring at least `threshold`.
std::array<double, kPoseletHistogramLength> poselet_histogram(std::span<const PoseletDetection> detections,
                                                              double threshold = kDefaultPoseletThreshold,
                                                              PoseletMode mode = PoseletMode::Count);

/// Up to 15 person boxes (sampled without replacement when there are more),
/// largest first, flattened as x_min, y_min, x_max, y_max and zero-padded.
/// With `normalize`, x values are divided by the image width and y by the height.
std::array<double, kBboxBaselineLength> bbox_baseline(std::span<const Box> persons, double image_width,
                                                      double image_height, std::uint64_t seed,
                                                      bool normalize = true);

struct SceneFeatures {
    std::array<double, kEmotionGridLength> f1{};
    std::array<double, kPoseletHistogramLength> f2{};
    std::array<double, kGroupFeatureLength> f3{};
    std::array<double, kSceneLength> combined{};
};

/// Concatenates f1 | f2 | f3; throws on any length mismatch.
SceneFeatures assemble_scene(std::span<const double> f1, std::span<const double> f2, std::span<const double> f3);

/// Column names for each block, matching the feature CSV header.
std::vector<std::string> emotion_grid_columns();
std::vector<std::string> poselet_columns();
std::vector<std::string> group_columns();
std::vector<std::string> prefixed_columns(const std::string& prefix, std::size_t count);

/// One row per image in a feature CSV.
struct FeatureTable {
    std::vector<std::string> columns;
    std::vector<std::string> images;
    std::vector<std::vector<double>> rows;
};

/// Header `image,<columns...>`, values written with round-trip precision.
void save_feature_csv(const std::filesystem::path& path, const FeatureTable& table);
FeatureTable load_feature_csv(const std::filesystem::path& path);

}  // namespace groupsent
