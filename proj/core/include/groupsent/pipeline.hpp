#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "groupsent/annotation.hpp"
#include "groupsent/classifier.hpp"
#include "groupsent/evaluation.hpp"
#include "groupsent/features.hpp"
#include "groupsent/grouping.hpp"
#include "groupsent/matching.hpp"
#include "groupsent/orientation.hpp"
#include "groupsent/pyramid.hpp"

namespace groupsent {

enum class FeatureSet { ColorHist, Bbox, Emotion, Poselet, EmotionPoselet, Full };
enum class IntensityMode { FourWay, Binary };

std::string_view feature_set_name(FeatureSet set) noexcept;
std::optional<FeatureSet> parse_feature_set(std::string_view name) noexcept;
std::string_view intensity_mode_name(IntensityMode mode) noexcept;
std::optional<IntensityMode> parse_intensity_mode(std::string_view name) noexcept;

bool needs_smile_model(FeatureSet set) noexcept;
bool needs_grouping(FeatureSet set) noexcept;
bool needs_image(FeatureSet set) noexcept;

/// Everything a pipeline run depends on. Every field can be set by key name
/// (see `set`), which is how config files and CLI flags are applied.
struct RunConfig {
    std::uint64_t seed = 0;
    double test_fraction = 0.2;
    LabelAxis label_axis = LabelAxis::Interaction;
    IntensityMode intensity_mode = IntensityMode::FourWay;
    FeatureSet feature_set = FeatureSet::Full;

    std::string annotations;
    std::string images_root = ".";
    std::string out_dir = "run";
    std::string smile_model;        // trained smile/neutral model (pyramid features)
    std::string smile_faces;        // face list to train one from, when smile_model is empty
    std::string orientation_model;  // empty: use annotated orientations

    double iou_threshold = kDefaultFaceIouThreshold;
    double poselet_threshold = kDefaultPoseletThreshold;
    PoseletMode poselet_mode = PoseletMode::Count;
    bool normalize = true;  // L1 color histogram, [0,1] bbox coordinates

    SvmConfig svm;
    GroupingConfig grouping;
    PyramidConfig pyramid;

    /// Applies one `key=value` setting; throws InvalidInput on unknown keys or bad values.
    void set(std::string_view key, std::string_view value);
    void validate() const;
    /// Ordered key/value echo; feeding it back through `set` reproduces the config.
    [[nodiscard]] std::vector<std::pair<std::string, std::string>> entries() const;
};

/// Names accepted by RunConfig::set.
const std::vector<std::string>& run_config_keys();

/// `key=value` lines; blank lines and lines starting with '#' are ignored.
std::vector<std::pair<std::string, std::string>> parse_config_text(std::string_view text);
std::vector<std::pair<std::string, std::string>> load_config_file(const std::filesystem::path& path);

/// Face crop list: CSV lines `path,label` with label smile|neutral|1|0, paths relative to the list's directory.
struct FaceSample {
    std::string path;
    FaceExpression expression = FaceExpression::Neutral;
};
std::vector<FaceSample> load_face_list(const std::filesystem::path& path);

/// Pyramid features of every listed face (PGM, any size), resized to the pyramid face size.
Dataset smile_dataset(const std::filesystem::path& face_list, const PyramidConfig& pyramid);
LinearModel train_smile_model(const std::filesystem::path& face_list, const PyramidConfig& pyramid,
                              const SvmConfig& svm);

/// Models and image access shared by per-image feature extraction.
struct FeatureContext {
    RunConfig config;
    ImageLoader loader;
    std::optional<LinearModel> smile_model;
    std::optional<LinearModel> orientation_model;
};

/// Loads the models `config` refers to (training the smile model if only a face list is given).
FeatureContext make_context(const RunConfig& config);

std::vector<std::string> feature_columns(FeatureSet set);

struct GroupResult {
    std::vector<PersonPoint> points;
    std::optional<Clustering> clustering;
};

/// Orientation per person: from the model when the context has one, else from the annotation.
std::vector<Direction> person_orientations(const ImageAnnotation& annotation, const FeatureContext& ctx,
                                           const RgbImage* image);

/// Matching, placement and K selection for one image. `image_index` sub-seeds the run seed.
GroupResult group_people(const ImageAnnotation& annotation, std::size_t image_index, const FeatureContext& ctx,
                         const RgbImage* image = nullptr);

/// Smile/neutral label per matched face, using the context's smile model.
std::vector<LabelledFace> classify_faces(const ImageAnnotation& annotation, const FeatureContext& ctx,
                                         const RgbImage& image);

std::vector<double> extract_image_features(const ImageAnnotation& annotation, std::size_t image_index,
                                           const FeatureContext& ctx);
FeatureTable extract_features(std::span<const ImageAnnotation> annotations, const FeatureContext& ctx);

/// Label of an annotation on the configured axis, remapped when binary.
int target_label(const ImageAnnotation& annotation, LabelAxis axis, IntensityMode mode);

/// Joins a feature table with annotation labels by image path.
Dataset labelled_dataset(const FeatureTable& table, std::span<const ImageAnnotation> annotations, LabelAxis axis,
                         IntensityMode mode);

struct ExperimentResult {
    EvalReport report;
    double train_accuracy = 0.0;
    std::size_t n_train = 0;
    std::size_t feature_length = 0;
    std::string report_json;
};

/// Report JSON: config echo, seed, metrics, confusion matrix, chance level.
std::string report_to_json(const EvalReport& report, const RunConfig& config, double train_accuracy,
                           std::size_t n_train, std::size_t feature_length);

/// Features -> split -> train -> evaluate. Writes features.csv, model.json,
/// report.json and confusion.txt into config.out_dir.
ExperimentResult run_experiment(const RunConfig& config);

/// JSON line describing the matched people of one image.
std::string person_records_json(const ImageAnnotation& annotation, std::span<const PersonRecord> records);
/// JSON line describing the grouping of one image.
std::string grouping_json(const ImageAnnotation& annotation, const GroupResult& result);

/// Chance accuracy for the mode: 0.25 four-way, 0.5 binary.
double chance_accuracy(IntensityMode mode) noexcept;

}  // namespace groupsent
