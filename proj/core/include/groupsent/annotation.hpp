#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "groupsent/geometry.hpp"

namespace groupsent {

inline constexpr int kPoseletTypes = 150;

struct PoseletDetection {
    int id = 0;
    double score = 0.0;
    Box box;

    friend bool operator==(const PoseletDetection&, const PoseletDetection&) = default;
};

enum class LabelAxis { Interaction, Activity, Happiness, Focus };

std::string_view axis_name(LabelAxis axis) noexcept;
std::optional<LabelAxis> parse_axis(std::string_view name) noexcept;

/// Four sentiment intensities, each on the 1..4 scale.
struct SentimentLabels {
    int interaction = 1;
    int activity = 1;
    int happiness = 1;
    int focus = 1;

    [[nodiscard]] int get(LabelAxis axis) const noexcept;
    friend bool operator==(const SentimentLabels&, const SentimentLabels&) = default;
};

struct ImageAnnotation {
    std::string image_path;
    double width = 0.0;
    double height = 0.0;
    std::vector<Box> persons;
    std::vector<Box> faces;
    std::vector<Box> torsos;
    std::vector<PoseletDetection> poselets;
    std::optional<SentimentLabels> labels;
    /// Parallel to `persons` when present.
    std::optional<std::vector<Direction>> orientations;

    friend bool operator==(const ImageAnnotation&, const ImageAnnotation&) = default;
};

/// Checks every annotation invariant; throws InvalidInput naming the image and field.
void validate(const ImageAnnotation& annotation);

/// Parses one JSON line; `line_number` is used only in error messages.
ImageAnnotation parse_annotation_line(std::string_view line, std::size_t line_number = 1);
std::string to_json_line(const ImageAnnotation& annotation);

/// Reads a JSON-lines annotation file. Blank lines are skipped.
std::vector<ImageAnnotation> load_annotations(const std::filesystem::path& path);
void save_annotations(const std::filesystem::path& path, const std::vector<ImageAnnotation>& annotations);

}  // namespace groupsent
