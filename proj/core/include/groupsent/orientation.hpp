#pragma once

#include <functional>
#include <span>
#include <string>
#include <vector>

#include "groupsent/annotation.hpp"
#include "groupsent/classifier.hpp"
#include "groupsent/imaging.hpp"

namespace groupsent {

/// Dalal-Triggs style HOG layout: 2x2-cell blocks with a one-cell stride.
struct HogConfig {
    int window_width = 64;
    int window_height = 128;
    int cell = 8;
    int bins = 9;

    static constexpr int kBlockCells = 2;
    static constexpr double kEpsilon = 1e-5;

    [[nodiscard]] int cells_x() const noexcept { return window_width / cell; }
    [[nodiscard]] int cells_y() const noexcept { return window_height / cell; }
    [[nodiscard]] std::size_t block_length() const noexcept {
        return static_cast<std::size_t>(kBlockCells * kBlockCells * bins);
    }
    /// (cells_x - 1) * (cells_y - 1) * block_length; 3780 by default.
    [[nodiscard]] std::size_t feature_length() const noexcept;
    void validate() const;
};

/// HOG descriptor of a crop that is exactly window_width x window_height.
///
/// Per pixel: central-difference gradient, magnitude and unsigned angle in
/// [0,180). The magnitude is split linearly between the two nearest bin
/// centres (10, 30, ..., 170 degrees, wrapping). Each block is the row-major
/// concatenation of its four cell histograms, scaled by
/// 1 / sqrt(|v|^2 + 1e-5). Blocks are emitted row-major.
std::vector<double> extract_hog(const GrayImage& crop, const HogConfig& cfg = {});

/// Grayscale person crop resized to the HOG window.
GrayImage person_window(const RgbImage& image, const Box& person, const HogConfig& cfg = {});

/// Fetches the RGB image an annotation refers to.
using ImageLoader = std::function<RgbImage(const std::string& image_path)>;

/// Loads `<root>/<image_path>` as a binary PPM.
ImageLoader directory_loader(std::string root);

/// HOG rows and direction labels for every person in annotations that carry orientations.
/// Throws InvalidInput listing every image without orientations.
Dataset orientation_dataset(std::span<const ImageAnnotation> annotations, const ImageLoader& loader,
                            const HogConfig& cfg = {});

LinearModel train_orientation(std::span<const ImageAnnotation> annotations, const ImageLoader& loader,
                              const SvmConfig& svm = {}, const HogConfig& cfg = {});

Direction predict_orientation(const LinearModel& model, const GrayImage& window, const HogConfig& cfg = {});

/// All eight direction names in index order, for the model file's `classes`.
std::vector<std::string> direction_names();
/// Names of the directions a model was trained on.
std::vector<std::string> direction_class_names(const LinearModel& model);

void save_orientation_model(const std::filesystem::path& path, const LinearModel& model);
LinearModel load_orientation_model(const std::filesystem::path& path);

}  // namespace groupsent
