#include "groupsent/pipeline.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <fstream>
#include <map>
#include <sstream>

#include "groupsent/rng.hpp"
#include "json.hpp"

namespace groupsent {

using nlohmann::json;
namespace fs = std::filesystem;

namespace {

constexpr std::array<std::string_view, 6> kFeatureSetNames{"color_hist", "bbox",           "emotion",
                                                          "poselet",    "emotion+poselet", "full"};
constexpr std::array<std::string_view, 2> kIntensityNames{"four_way", "binary"};

// Stream ids for derive_seed(run seed, id).
constexpr std::uint64_t kSplitStream = 1;
constexpr std::uint64_t kSmileStream = 2;
constexpr std::uint64_t kImageStream = 3;

std::string format_double(double v) {
    char buf[32];
    const auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
}

template <typename T>
T parse_number(std::string_view key, std::string_view value) {
    T out{};
    const auto res = std::from_chars(value.data(), value.data() + value.size(), out);
    if (res.ec != std::errc() || res.ptr != value.data() + value.size())
        throw InvalidInput("config key '" + std::string(key) + "': bad number '" + std::string(value) + "'");
    return out;
}

bool parse_bool(std::string_view key, std::string_view value) {
    if (value == "true" || value == "1" || value == "yes") return true;
    if (value == "false" || value == "0" || value == "no") return false;
    throw InvalidInput("config key '" + std::string(key) + "': bad boolean '" + std::string(value) + "'");
}

std::string trim(std::string_view s) {
    const auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string_view::npos) return {};
    const auto e = s.find_last_not_of(" \t\r\n");
    return std::string(s.substr(b, e - b + 1));
}

json box_json(const Box& b) { return json::array({b.x_min, b.y_min, b.x_max, b.y_max}); }

template <typename Array>
void append(std::vector<double>& out, const Array& a) {
    out.insert(out.end(), a.begin(), a.end());
}

}  // namespace

std::string_view feature_set_name(FeatureSet set) noexcept { return kFeatureSetNames[static_cast<std::size_t>(set)]; }

std::optional<FeatureSet> parse_feature_set(std::string_view name) noexcept {
    for (std::size_t i = 0; i < kFeatureSetNames.size(); ++i)
        if (kFeatureSetNames[i] == name) return static_cast<FeatureSet>(i);
    return std::nullopt;
}

std::string_view intensity_mode_name(IntensityMode mode) noexcept {
    return kIntensityNames[static_cast<std::size_t>(mode)];
}

std::optional<IntensityMode> parse_intensity_mode(std::string_view name) noexcept {
    for (std::size_t i = 0; i < kIntensityNames.size(); ++i)
        if (kIntensityNames[i] == name) return static_cast<IntensityMode>(i);
    return std::nullopt;
}

bool needs_smile_model(FeatureSet set) noexcept {
    return set == FeatureSet::Emotion || set == FeatureSet::EmotionPoselet || set == FeatureSet::Full;
}

bool needs_grouping(FeatureSet set) noexcept { return set == FeatureSet::Full; }

bool needs_image(FeatureSet set) noexcept { return set == FeatureSet::ColorHist || needs_smile_model(set); }

double chance_accuracy(IntensityMode mode) noexcept { return mode == IntensityMode::Binary ? 0.5 : 0.25; }

const std::vector<std::string>& run_config_keys() {
    static const std::vector<std::string> keys{
        "seed",          "test_fraction", "label_axis",        "intensity_mode", "feature_set",  "annotations",
        "images_root",   "out_dir",       "smile_model",       "smile_faces",    "orientation_model",
        "iou_threshold", "poselet_threshold", "poselet_mode",  "normalize",      "svm_lambda",   "epochs",
        "eta0",          "k_face",        "group_lambda",      "k_min",          "k_max",        "restarts",
        "max_iters",     "face_size",     "base_sigma",        "scales"};
    return keys;
}

void RunConfig::set(std::string_view key, std::string_view value) {
    if (key == "seed") seed = parse_number<std::uint64_t>(key, value);
    else if (key == "test_fraction") test_fraction = parse_number<double>(key, value);
    else if (key == "label_axis") {
        const auto a = parse_axis(value);
        if (!a) throw InvalidInput("unknown label_axis '" + std::string(value) + "'");
        label_axis = *a;
    } else if (key == "intensity_mode") {
        const auto m = parse_intensity_mode(value);
        if (!m) throw InvalidInput("unknown intensity_mode '" + std::string(value) + "'");
        intensity_mode = *m;
    } else if (key == "feature_set") {
        const auto f = parse_feature_set(value);
        if (!f) throw InvalidInput("unknown feature_set '" + std::string(value) + "'");
        feature_set = *f;
    } else if (key == "annotations") annotations = value;
    else if (key == "images_root") images_root = value;
    else if (key == "out_dir") out_dir = value;
    else if (key == "smile_model") smile_model = value;
    else if (key == "smile_faces") smile_faces = value;
    else if (key == "orientation_model") orientation_model = value;
    else if (key == "iou_threshold") iou_threshold = parse_number<double>(key, value);
    else if (key == "poselet_threshold") poselet_threshold = parse_number<double>(key, value);
    else if (key == "poselet_mode") {
        if (value == "count") poselet_mode = PoseletMode::Count;
        else if (value == "score") poselet_mode = PoseletMode::Score;
        else throw InvalidInput("unknown poselet_mode '" + std::string(value) + "'");
    } else if (key == "normalize") normalize = parse_bool(key, value);
    else if (key == "svm_lambda") svm.lambda = parse_number<double>(key, value);
    else if (key == "epochs") svm.epochs = parse_number<int>(key, value);
    else if (key == "eta0") svm.eta0 = parse_number<double>(key, value);
    else if (key == "k_face") grouping.k_face = parse_number<double>(key, value);
    else if (key == "group_lambda") grouping.lambda = parse_number<double>(key, value);
    else if (key == "k_min") grouping.k_min = parse_number<int>(key, value);
    else if (key == "k_max") grouping.k_max = parse_number<int>(key, value);
    else if (key == "restarts") grouping.restarts = parse_number<int>(key, value);
    else if (key == "max_iters") grouping.max_iters = parse_number<int>(key, value);
    else if (key == "face_size") pyramid.face_size = parse_number<int>(key, value);
    else if (key == "base_sigma") pyramid.base_sigma = parse_number<double>(key, value);
    else if (key == "scales") pyramid.scales = parse_number<int>(key, value);
    else throw InvalidInput("unknown config key '" + std::string(key) + "'");
}

void RunConfig::validate() const {
    if (!(test_fraction > 0.0 && test_fraction < 1.0)) throw InvalidInput("test_fraction must be in (0,1)");
    if (!(iou_threshold >= 0.0 && iou_threshold <= 1.0)) throw InvalidInput("iou_threshold must be in [0,1]");
    if (!(svm.lambda > 0.0) || svm.epochs < 1 || !(svm.eta0 > 0.0))
        throw InvalidInput("svm settings need svm_lambda > 0, epochs >= 1, eta0 > 0");
    grouping.validate();
    pyramid.validate();
}

std::vector<std::pair<std::string, std::string>> RunConfig::entries() const {
    return {
        {"seed", std::to_string(seed)},
        {"test_fraction", format_double(test_fraction)},
        {"label_axis", std::string(axis_name(label_axis))},
        {"intensity_mode", std::string(intensity_mode_name(intensity_mode))},
        {"feature_set", std::string(feature_set_name(feature_set))},
        {"annotations", annotations},
        {"images_root", images_root},
        {"out_dir", out_dir},
        {"smile_model", smile_model},
        {"smile_faces", smile_faces},
        {"orientation_model", orientation_model},
        {"iou_threshold", format_double(iou_threshold)},
        {"poselet_threshold", format_double(poselet_threshold)},
        {"poselet_mode", poselet_mode == PoseletMode::Count ? "count" : "score"},
        {"normalize", normalize ? "true" : "false"},
        {"svm_lambda", format_double(svm.lambda)},
        {"epochs", std::to_string(svm.epochs)},
        {"eta0", format_double(svm.eta0)},
        {"k_face", format_double(grouping.k_face)},
        {"group_lambda", format_double(grouping.lambda)},
        {"k_min", std::to_string(grouping.k_min)},
        {"k_max", std::to_string(grouping.k_max)},
        {"restarts", std::to_string(grouping.restarts)},
        {"max_iters", std::to_string(grouping.max_iters)},
        {"face_size", std::to_string(pyramid.face_size)},
        {"base_sigma", format_double(pyramid.base_sigma)},
        {"scales", std::to_string(pyramid.scales)},
    };
}

std::vector<std::pair<std::string, std::string>> parse_config_text(std::string_view text) {
    std::vector<std::pair<std::string, std::string>> out;
    std::istringstream in{std::string(text)};
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const auto t = trim(line);
        if (t.empty() || t.front() == '#') continue;
        const auto eq = t.find('=');
        if (eq == std::string::npos)
            throw InvalidInput("config line " + std::to_string(line_no) + ": expected key=value");
        out.emplace_back(trim(std::string_view(t).substr(0, eq)), trim(std::string_view(t).substr(eq + 1)));
    }
    return out;
}

std::vector<std::pair<std::string, std::string>> load_config_file(const fs::path& path) {
    std::ifstream in(path);
    if (!in) throw InvalidInput("cannot open config file " + path.string());
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_config_text(ss.str());
}

std::vector<FaceSample> load_face_list(const fs::path& path) {
    std::ifstream in(path);
    if (!in) throw InvalidInput("cannot open face list " + path.string());
    std::vector<FaceSample> out;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const auto t = trim(line);
        if (t.empty() || t.front() == '#') continue;
        const auto comma = t.rfind(',');
        if (comma == std::string::npos)
            throw InvalidInput("face list line " + std::to_string(line_no) + ": expected path,label");
        const auto label = trim(std::string_view(t).substr(comma + 1));
        const auto rel = trim(std::string_view(t).substr(0, comma));
        if (line_no == 1 && label == "label") continue;
        FaceSample s;
        s.path = (path.parent_path() / rel).string();
        if (label == "smile" || label == "1") s.expression = FaceExpression::Smile;
        else if (label == "neutral" || label == "0") s.expression = FaceExpression::Neutral;
        else throw InvalidInput("face list line " + std::to_string(line_no) + ": unknown label '" + label + "'");
        out.push_back(std::move(s));
    }
    return out;
}

Dataset smile_dataset(const fs::path& face_list, const PyramidConfig& pyramid) {
    Dataset data;
    for (const auto& s : load_face_list(face_list)) {
        const auto face = resize_bilinear(load_pgm(s.path), pyramid.face_size, pyramid.face_size);
        data.add(extract_face_features(face, pyramid), static_cast<int>(s.expression));
    }
    return data;
}

LinearModel train_smile_model(const fs::path& face_list, const PyramidConfig& pyramid, const SvmConfig& svm) {
    return train(smile_dataset(face_list, pyramid), svm);
}

FeatureContext make_context(const RunConfig& config) {
    config.validate();
    FeatureContext ctx{config, directory_loader(config.images_root), std::nullopt, std::nullopt};
    if (needs_smile_model(config.feature_set)) {
        if (!config.smile_model.empty()) {
            ctx.smile_model = load_model(config.smile_model);
        } else if (!config.smile_faces.empty()) {
            SvmConfig svm = config.svm;
            svm.seed = derive_seed(config.seed, kSmileStream);
            ctx.smile_model = train_smile_model(config.smile_faces, config.pyramid, svm);
        } else {
            throw InvalidInput("feature set '" + std::string(feature_set_name(config.feature_set)) +
                               "' needs smile_model or smile_faces");
        }
        if (ctx.smile_model->dimension() != config.pyramid.feature_length())
            throw InvalidInput("smile model dimension does not match the pyramid configuration");
    }
    if (!config.orientation_model.empty()) ctx.orientation_model = load_orientation_model(config.orientation_model);
    return ctx;
}

std::vector<std::string> feature_columns(FeatureSet set) {
    std::vector<std::string> out;
    auto add = [&](const std::vector<std::string>& cols) { out.insert(out.end(), cols.begin(), cols.end()); };
    switch (set) {
        case FeatureSet::ColorHist: add(prefixed_columns("color_", kColorBins)); break;
        case FeatureSet::Bbox: add(prefixed_columns("bbox_", kBboxBaselineLength)); break;
        case FeatureSet::Emotion: add(emotion_grid_columns()); break;
        case FeatureSet::Poselet: add(poselet_columns()); break;
        case FeatureSet::EmotionPoselet:
            add(emotion_grid_columns());
            add(poselet_columns());
            break;
        case FeatureSet::Full:
            add(emotion_grid_columns());
            add(poselet_columns());
            add(group_columns());
            break;
    }
    return out;
}

std::vector<Direction> person_orientations(const ImageAnnotation& annotation, const FeatureContext& ctx,
                                           const RgbImage* image) {
    if (ctx.orientation_model) {
        if (!image) throw InvalidInput("orientation model needs the image for '" + annotation.image_path + "'");
        std::vector<Direction> out;
        for (const auto& p : annotation.persons)
            out.push_back(predict_orientation(*ctx.orientation_model, person_window(*image, p)));
        return out;
    }
    if (!annotation.orientations)
        throw InvalidInput("image '" + annotation.image_path +
                           "' has no orientations and no orientation_model is configured");
    return *annotation.orientations;
}

GroupResult group_people(const ImageAnnotation& annotation, std::size_t image_index, const FeatureContext& ctx,
                         const RgbImage* image) {
    const auto records = build_person_records(annotation, ctx.config.iou_threshold);
    std::optional<RgbImage> loaded;
    if (ctx.orientation_model && !image) {
        loaded = ctx.loader(annotation.image_path);
        image = &*loaded;
    }
    const auto orientations = person_orientations(annotation, ctx, image);
    GroupResult result;
    result.points = place_people(records, orientations, annotation.width, ctx.config.grouping.k_face);
    if (!result.points.empty())
        result.clustering = select_k(result.points, ctx.config.grouping, derive_seed(ctx.config.seed, kImageStream, image_index));
    return result;
}

std::vector<LabelledFace> classify_faces(const ImageAnnotation& annotation, const FeatureContext& ctx,
                                         const RgbImage& image) {
    if (!ctx.smile_model) throw InvalidInput("no smile model available to classify faces");
    const int size = ctx.config.pyramid.face_size;
    std::vector<LabelledFace> out;
    for (const auto& r : build_person_records(annotation, ctx.config.iou_threshold)) {
        if (!r.face) continue;
        const auto face = resize_bilinear(to_grayscale(crop(image, *r.face)), size, size);
        const int label = predict(*ctx.smile_model, extract_face_features(face, ctx.config.pyramid));
        out.push_back({*r.face, label == 1 ? FaceExpression::Smile : FaceExpression::Neutral});
    }
    return out;
}

std::vector<double> extract_image_features(const ImageAnnotation& annotation, std::size_t image_index,
                                           const FeatureContext& ctx) {
    const auto& cfg = ctx.config;
    std::optional<RgbImage> image;
    if (needs_image(cfg.feature_set) || (needs_grouping(cfg.feature_set) && ctx.orientation_model))
        image = ctx.loader(annotation.image_path);
    if (image && (image->width() != static_cast<int>(annotation.width) ||
                  image->height() != static_cast<int>(annotation.height)))
        throw InvalidInput("image '" + annotation.image_path + "' size does not match its annotation");

    std::vector<double> out;
    const bool emotion = needs_smile_model(cfg.feature_set);
    const bool poselets = cfg.feature_set == FeatureSet::Poselet || cfg.feature_set == FeatureSet::EmotionPoselet ||
                          cfg.feature_set == FeatureSet::Full;
    switch (cfg.feature_set) {
        case FeatureSet::ColorHist: append(out, color_histogram(*image, cfg.normalize)); return out;
        case FeatureSet::Bbox:
            append(out, bbox_baseline(annotation.persons, annotation.width, annotation.height,
                                      derive_seed(cfg.seed, kImageStream, image_index), cfg.normalize));
            return out;
        default: break;
    }
    std::array<double, kEmotionGridLength> f1{};
    std::array<double, kPoseletHistogramLength> f2{};
    std::array<double, kGroupFeatureLength> f3{};
    if (emotion) {
        const auto faces = classify_faces(annotation, ctx, *image);
        f1 = emotion_grid(annotation.width, annotation.height, faces);
    }
    if (poselets) f2 = poselet_histogram(annotation.poselets, cfg.poselet_threshold, cfg.poselet_mode);
    if (needs_grouping(cfg.feature_set)) {
        const auto groups = group_people(annotation, image_index, ctx, image ? &*image : nullptr);
        if (groups.clustering) f3 = group_features(*groups.clustering, groups.points);
        append(out, assemble_scene(f1, f2, f3).combined);
        return out;
    }
    if (emotion) append(out, f1);
    if (poselets) append(out, f2);
    return out;
}

FeatureTable extract_features(std::span<const ImageAnnotation> annotations, const FeatureContext& ctx) {
    FeatureTable table;
    table.columns = feature_columns(ctx.config.feature_set);
    for (std::size_t i = 0; i < annotations.size(); ++i) {
        table.images.push_back(annotations[i].image_path);
        table.rows.push_back(extract_image_features(annotations[i], i, ctx));
    }
    return table;
}

int target_label(const ImageAnnotation& annotation, LabelAxis axis, IntensityMode mode) {
    if (!annotation.labels) throw InvalidInput("image '" + annotation.image_path + "' has no sentiment labels");
    const int v = annotation.labels->get(axis);
    return mode == IntensityMode::Binary ? remap_binary(v) : v;
}

Dataset labelled_dataset(const FeatureTable& table, std::span<const ImageAnnotation> annotations, LabelAxis axis,
                         IntensityMode mode) {
    std::map<std::string, const ImageAnnotation*> by_path;
    for (const auto& a : annotations) by_path[a.image_path] = &a;
    Dataset data;
    for (std::size_t i = 0; i < table.rows.size(); ++i) {
        const auto it = by_path.find(table.images[i]);
        if (it == by_path.end()) throw InvalidInput("no annotation for feature row '" + table.images[i] + "'");
        data.add(table.rows[i], target_label(*it->second, axis, mode));
    }
    return data;
}

std::string report_to_json(const EvalReport& report, const RunConfig& config, double train_accuracy,
                           std::size_t n_train, std::size_t feature_length) {
    json j;
    j["format_version"] = 1;
    json cfg = json::object();
    for (const auto& [k, v] : config.entries()) cfg[k] = v;
    j["config"] = cfg;
    j["seed"] = config.seed;
    j["label_axis"] = axis_name(config.label_axis);
    j["intensity_mode"] = intensity_mode_name(config.intensity_mode);
    j["feature_set"] = feature_set_name(config.feature_set);
    j["feature_length"] = feature_length;
    j["n_train"] = n_train;
    j["n_test"] = report.n_test;
    j["classes"] = report.classes;
    j["confusion"] = report.confusion;
    j["precision"] = report.precision;
    j["recall"] = report.recall;
    j["accuracy"] = report.accuracy;
    j["error"] = report.error();
    j["train_accuracy"] = train_accuracy;
    j["train_error"] = 1.0 - train_accuracy;
    j["chance_accuracy"] = chance_accuracy(config.intensity_mode);
    return j.dump(2);
}

ExperimentResult run_experiment(const RunConfig& config) {
    config.validate();
    if (config.annotations.empty()) throw InvalidInput("experiment needs annotations");
    if (!fs::exists(config.annotations)) throw InvalidInput("annotation file not found: " + config.annotations);
    if (needs_image(config.feature_set) && !fs::is_directory(config.images_root))
        throw InvalidInput("images_root is not a directory: " + config.images_root);
    if (needs_smile_model(config.feature_set)) {
        const auto& p = config.smile_model.empty() ? config.smile_faces : config.smile_model;
        if (p.empty()) throw InvalidInput("feature set needs smile_model or smile_faces");
        if (!fs::exists(p)) throw InvalidInput("smile input not found: " + p);
    }
    if (!config.orientation_model.empty() && !fs::exists(config.orientation_model))
        throw InvalidInput("orientation model not found: " + config.orientation_model);

    const auto annotations = load_annotations(config.annotations);
    if (annotations.size() < 2) throw InvalidInput("experiment needs at least 2 annotated images");
    std::string unlabelled;
    for (const auto& a : annotations)
        if (!a.labels) unlabelled += (unlabelled.empty() ? "" : ", ") + a.image_path;
    if (!unlabelled.empty()) throw InvalidInput("annotations without labels: " + unlabelled);

    const auto ctx = make_context(config);
    const auto table = extract_features(annotations, ctx);
    const auto data = labelled_dataset(table, annotations, config.label_axis, config.intensity_mode);
    const auto parts = split(data, config.test_fraction, derive_seed(config.seed, kSplitStream));
    if (parts.test.size() == 0) throw InvalidInput("test split is empty; raise test_fraction");

    SvmConfig svm = config.svm;
    svm.seed = config.seed;
    const auto model = train(parts.train, svm);

    std::vector<int> predicted;
    for (const auto& row : parts.test.features) predicted.push_back(predict(model, row));

    ExperimentResult result;
    result.report = confusion_matrix(parts.test.labels, predicted);
    result.train_accuracy = accuracy(model, parts.train);
    result.n_train = parts.train.size();
    result.feature_length = table.columns.size();
    result.report_json =
        report_to_json(result.report, config, result.train_accuracy, result.n_train, result.feature_length);

    fs::create_directories(config.out_dir);
    const fs::path out(config.out_dir);
    save_feature_csv(out / "features.csv", table);
    save_model(out / "model.json", model);
    if (ctx.smile_model && config.smile_model.empty()) save_model(out / "smile_model.json", *ctx.smile_model);
    std::ofstream(out / "report.json") << result.report_json << '\n';
    std::ofstream(out / "confusion.txt") << render_confusion(result.report);
    return result;
}

std::string person_records_json(const ImageAnnotation& annotation, std::span<const PersonRecord> records) {
    json j;
    j["image"] = annotation.image_path;
    j["width"] = annotation.width;
    j["height"] = annotation.height;
    j["records"] = json::array();
    for (const auto& r : records) {
        json rec;
        rec["person_index"] = r.person_index;
        rec["person"] = box_json(r.person);
        rec["face"] = r.face ? box_json(*r.face) : json(nullptr);
        rec["face_index"] = r.face_index ? json(*r.face_index) : json(nullptr);
        rec["torso"] = r.torso ? box_json(*r.torso) : json(nullptr);
        rec["torso_index"] = r.torso_index ? json(*r.torso_index) : json(nullptr);
        j["records"].push_back(rec);
    }
    return j.dump();
}

std::string grouping_json(const ImageAnnotation& annotation, const GroupResult& result) {
    json j;
    j["image"] = annotation.image_path;
    j["person_indices"] = json::array();
    j["positions"] = json::array();
    j["orientations"] = json::array();
    for (const auto& p : result.points) {
        j["person_indices"].push_back(p.person_index);
        j["positions"].push_back({p.position.x, p.position.z});
        j["orientations"].push_back({p.orientation.x, p.orientation.z});
    }
    j["assignments"] = json::array();
    j["centers"] = json::array();
    j["K"] = 0;
    j["potential"] = 0.0;
    if (result.clustering) {
        j["assignments"] = result.clustering->assignments;
        for (const auto& c : result.clustering->centers) j["centers"].push_back({c.x, c.z});
        j["K"] = result.clustering->k;
        j["potential"] = result.clustering->potential;
        j["singletons"] = singleton_count(*result.clustering);
    }
    return j.dump();
}

}  // namespace groupsent
