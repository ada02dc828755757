#include "groupsent/annotation.hpp"

#include <array>
#include <cmath>
#include <fstream>

#include "json.hpp"

namespace groupsent {

using nlohmann::json;

namespace {

constexpr std::array<std::string_view, 4> kAxisNames{"interaction", "activity", "happiness", "focus"};

[[noreturn]] void fail_field(const ImageAnnotation& a, const std::string& field, const std::string& what) {
    throw InvalidInput("image '" + a.image_path + "': field " + field + ": " + what);
}

void check_box(const ImageAnnotation& a, const Box& b, const std::string& field) {
    if (!b.valid()) fail_field(a, field, "invalid box " + to_string(b));
    if (b.x_max > a.width || b.y_max > a.height)
        fail_field(a, field, "box " + to_string(b) + " exceeds image bounds");
}

void check_boxes(const ImageAnnotation& a, const std::vector<Box>& boxes, const char* name) {
    for (std::size_t i = 0; i < boxes.size(); ++i)
        check_box(a, boxes[i], std::string(name) + "[" + std::to_string(i) + "]");
}

Box box_from_json(const json& j) {
    if (!j.is_array() || j.size() != 4) throw InvalidInput("box must be [x_min, y_min, x_max, y_max]");
    return Box{j[0].get<double>(), j[1].get<double>(), j[2].get<double>(), j[3].get<double>()};
}

json box_to_json(const Box& b) { return json::array({b.x_min, b.y_min, b.x_max, b.y_max}); }

std::vector<Box> boxes_from_json(const json& j, const char* key) {
    std::vector<Box> out;
    if (!j.contains(key)) return out;
    for (const auto& item : j.at(key)) out.push_back(box_from_json(item));
    return out;
}

json boxes_to_json(const std::vector<Box>& boxes) {
    json out = json::array();
    for (const auto& b : boxes) out.push_back(box_to_json(b));
    return out;
}

}  // namespace

std::string_view axis_name(LabelAxis axis) noexcept { return kAxisNames[static_cast<std::size_t>(axis)]; }

std::optional<LabelAxis> parse_axis(std::string_view name) noexcept {
    for (std::size_t i = 0; i < kAxisNames.size(); ++i)
        if (kAxisNames[i] == name) return static_cast<LabelAxis>(i);
    return std::nullopt;
}

int SentimentLabels::get(LabelAxis axis) const noexcept {
    switch (axis) {
        case LabelAxis::Interaction: return interaction;
        case LabelAxis::Activity: return activity;
        case LabelAxis::Happiness: return happiness;
        case LabelAxis::Focus: return focus;
    }
    return interaction;
}

void validate(const ImageAnnotation& a) {
    if (a.image_path.empty()) throw InvalidInput("annotation with empty image path");
    if (!(std::isfinite(a.width) && a.width > 0)) fail_field(a, "width", "must be positive");
    if (!(std::isfinite(a.height) && a.height > 0)) fail_field(a, "height", "must be positive");
    check_boxes(a, a.persons, "persons");
    check_boxes(a, a.faces, "faces");
    check_boxes(a, a.torsos, "torsos");
    for (std::size_t i = 0; i < a.poselets.size(); ++i) {
        const auto& p = a.poselets[i];
        const std::string field = "poselets[" + std::to_string(i) + "]";
        if (p.id < 0 || p.id >= kPoseletTypes) fail_field(a, field + ".id", "out of range [0,149]");
        if (!std::isfinite(p.score) || p.score < 0) fail_field(a, field + ".score", "must be finite and >= 0");
        check_box(a, p.box, field + ".box");
    }
    if (a.labels) {
        for (std::size_t i = 0; i < kAxisNames.size(); ++i) {
            const int v = a.labels->get(static_cast<LabelAxis>(i));
            if (v < 1 || v > 4) fail_field(a, "labels." + std::string(kAxisNames[i]), "must be in [1,4]");
        }
    }
    if (a.orientations && a.orientations->size() != a.persons.size())
        fail_field(a, "orientations", "length " + std::to_string(a.orientations->size()) +
                                          " does not match persons length " + std::to_string(a.persons.size()));
}

ImageAnnotation parse_annotation_line(std::string_view line, std::size_t line_number) {
    ImageAnnotation a;
    try {
        const json j = json::parse(line);
        a.image_path = j.at("image").get<std::string>();
        a.width = j.at("width").get<double>();
        a.height = j.at("height").get<double>();
        a.persons = boxes_from_json(j, "persons");
        a.faces = boxes_from_json(j, "faces");
        a.torsos = boxes_from_json(j, "torsos");
        if (j.contains("poselets")) {
            for (const auto& p : j.at("poselets"))
                a.poselets.push_back({p.at("id").get<int>(), p.at("score").get<double>(), box_from_json(p.at("box"))});
        }
        if (j.contains("labels") && !j.at("labels").is_null()) {
            const auto& l = j.at("labels");
            a.labels = SentimentLabels{l.at("interaction").get<int>(), l.at("activity").get<int>(),
                                       l.at("happiness").get<int>(), l.at("focus").get<int>()};
        }
        if (j.contains("orientations") && !j.at("orientations").is_null()) {
            std::vector<Direction> dirs;
            for (const auto& o : j.at("orientations")) {
                const auto name = o.get<std::string>();
                const auto d = parse_direction(name);
                if (!d) throw InvalidInput("unknown orientation '" + name + "'");
                dirs.push_back(*d);
            }
            a.orientations = std::move(dirs);
        }
    } catch (const json::exception& e) {
        throw InvalidInput("line " + std::to_string(line_number) + ": malformed annotation: " + e.what());
    } catch (const InvalidInput& e) {
        throw InvalidInput("line " + std::to_string(line_number) + ": " + e.what());
    }
    validate(a);
    return a;
}

std::string to_json_line(const ImageAnnotation& a) {
    json j;
    j["image"] = a.image_path;
    j["width"] = a.width;
    j["height"] = a.height;
    j["persons"] = boxes_to_json(a.persons);
    j["faces"] = boxes_to_json(a.faces);
    j["torsos"] = boxes_to_json(a.torsos);
    j["poselets"] = json::array();
    for (const auto& p : a.poselets) j["poselets"].push_back({{"id", p.id}, {"score", p.score}, {"box", box_to_json(p.box)}});
    if (a.labels) {
        j["labels"] = {{"interaction", a.labels->interaction},
                       {"activity", a.labels->activity},
                       {"happiness", a.labels->happiness},
                       {"focus", a.labels->focus}};
    }
    if (a.orientations) {
        j["orientations"] = json::array();
        for (auto d : *a.orientations) j["orientations"].push_back(std::string(direction_name(d)));
    }
    return j.dump();
}

std::vector<ImageAnnotation> load_annotations(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw InvalidInput("cannot open annotation file " + path.string());
    std::vector<ImageAnnotation> out;
    std::string line;
    std::size_t line_number = 0;
    while (std::getline(in, line)) {
        ++line_number;
        if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
        out.push_back(parse_annotation_line(line, line_number));
    }
    return out;
}

void save_annotations(const std::filesystem::path& path, const std::vector<ImageAnnotation>& annotations) {
    std::ofstream out(path);
    if (!out) throw InvalidInput("cannot write annotation file " + path.string());
    for (const auto& a : annotations) out << to_json_line(a) << '\n';
}

}  // namespace groupsent
