#include "groupsent/features.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <numeric>
#include <sstream>

#include "groupsent/rng.hpp"

namespace groupsent {

namespace {

int grid_cell(double center, double size) {
    return std::clamp(static_cast<int>(std::floor(4.0 * center / size)), 0, 3);
}

std::string format_double(double v) {
    char buf[32];
    const auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
}

double parse_double(std::string_view s, std::size_t line) {
    double v = 0.0;
    const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
    if (res.ec != std::errc() || res.ptr != s.data() + s.size())
        throw InvalidInput("feature file line " + std::to_string(line) + ": bad number '" + std::string(s) + "'");
    return v;
}

std::vector<std::string> split_csv(const std::string& line) {
    std::vector<std::string> out;
    std::string cell;
    std::istringstream ss(line);
    while (std::getline(ss, cell, ',')) out.push_back(cell);
    if (!line.empty() && line.back() == ',') out.emplace_back();
    return out;
}

}  // namespace

std::array<double, kEmotionGridLength> emotion_grid(double image_width, double image_height,
                                                    std::span<const LabelledFace> faces) {
    if (!(image_width > 0.0 && image_height > 0.0)) throw InvalidInput("emotion grid needs positive image size");
    std::array<double, kEmotionGridLength> grid{};
    for (const auto& f : faces) {
        const int col = grid_cell(f.box.center_x(), image_width);
        const int row = grid_cell(f.box.center_y(), image_height);
        const std::size_t offset = f.expression == FaceExpression::Smile ? 0 : 16;
        grid[offset + static_cast<std::size_t>(row * 4 + col)] += 1.0;
    }
    return grid;
}

std::array<double, kPoseletHistogramLength> poselet_histogram(std::span<const PoseletDetection> detections,
                                                              double threshold, PoseletMode mode) {
    std::array<double, kPoseletHistogramLength> hist{};
    for (const auto& d : detections) {
        if (d.id < 0 || d.id >= kPoseletTypes) throw InvalidInput("poselet id out of range: " + std::to_string(d.id));
        if (d.score < threshold) continue;
        hist[static_cast<std::size_t>(d.id)] += mode == PoseletMode::Count ? 1.0 : d.score;
    }
    return hist;
}

std::array<double, kBboxBaselineLength> bbox_baseline(std::span<const Box> persons, double image_width,
                                                      double image_height, std::uint64_t seed, bool normalize) {
    std::vector<Box> chosen(persons.begin(), persons.end());
    if (chosen.size() > static_cast<std::size_t>(kMaxBaselineBoxes)) {
        SplitMix64 rng(seed);
        for (std::size_t i = 0; i < static_cast<std::size_t>(kMaxBaselineBoxes); ++i) {
            const auto j = i + static_cast<std::size_t>(rng.bounded(chosen.size() - i));
            std::swap(chosen[i], chosen[j]);
        }
        chosen.resize(static_cast<std::size_t>(kMaxBaselineBoxes));
    }
    std::stable_sort(chosen.begin(), chosen.end(), [](const Box& a, const Box& b) { return area(a) > area(b); });
    const double sx = normalize ? 1.0 / image_width : 1.0;
    const double sy = normalize ? 1.0 / image_height : 1.0;
    std::array<double, kBboxBaselineLength> out{};
    for (std::size_t i = 0; i < chosen.size(); ++i) {
        out[4 * i + 0] = chosen[i].x_min * sx;
        out[4 * i + 1] = chosen[i].y_min * sy;
        out[4 * i + 2] = chosen[i].x_max * sx;
        out[4 * i + 3] = chosen[i].y_max * sy;
    }
    return out;
}

SceneFeatures assemble_scene(std::span<const double> f1, std::span<const double> f2, std::span<const double> f3) {
    if (f1.size() != kEmotionGridLength || f2.size() != kPoseletHistogramLength || f3.size() != kGroupFeatureLength)
        throw InvalidInput("scene blocks must have lengths 32, 150 and 6 (got " + std::to_string(f1.size()) + ", " +
                           std::to_string(f2.size()) + ", " + std::to_string(f3.size()) + ")");
    SceneFeatures s;
    std::copy(f1.begin(), f1.end(), s.f1.begin());
    std::copy(f2.begin(), f2.end(), s.f2.begin());
    std::copy(f3.begin(), f3.end(), s.f3.begin());
    auto it = std::copy(f1.begin(), f1.end(), s.combined.begin());
    it = std::copy(f2.begin(), f2.end(), it);
    std::copy(f3.begin(), f3.end(), it);
    return s;
}

std::vector<std::string> emotion_grid_columns() {
    std::vector<std::string> out;
    for (const char* kind : {"smile", "neutral"})
        for (int r = 0; r < 4; ++r)
            for (int c = 0; c < 4; ++c)
                out.push_back("f1_" + std::string(kind) + "_r" + std::to_string(r) + "c" + std::to_string(c));
    return out;
}

std::vector<std::string> poselet_columns() { return prefixed_columns("f2_poselet_", kPoseletHistogramLength); }

std::vector<std::string> group_columns() {
    return {"f3_k", "f3_mean_size", "f3_max_size", "f3_singletons", "f3_mean_distance", "f3_coherence"};
}

std::vector<std::string> prefixed_columns(const std::string& prefix, std::size_t count) {
    std::vector<std::string> out;
    for (std::size_t i = 0; i < count; ++i) out.push_back(prefix + std::to_string(i));
    return out;
}

void save_feature_csv(const std::filesystem::path& path, const FeatureTable& table) {
    std::ofstream out(path);
    if (!out) throw InvalidInput("cannot write feature file " + path.string());
    out << "image";
    for (const auto& c : table.columns) out << ',' << c;
    out << '\n';
    for (std::size_t i = 0; i < table.rows.size(); ++i) {
        if (table.rows[i].size() != table.columns.size()) throw InvalidInput("feature row length does not match header");
        if (table.images[i].find(',') != std::string::npos)
            throw InvalidInput("image path contains a comma: " + table.images[i]);
        out << table.images[i];
        for (double v : table.rows[i]) out << ',' << format_double(v);
        out << '\n';
    }
}

FeatureTable load_feature_csv(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw InvalidInput("cannot open feature file " + path.string());
    FeatureTable t;
    std::string line;
    if (!std::getline(in, line)) throw InvalidInput("feature file " + path.string() + " is empty");
    auto header = split_csv(line);
    if (header.empty() || header.front() != "image") throw InvalidInput("feature file header must start with 'image'");
    t.columns.assign(header.begin() + 1, header.end());
    std::size_t line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) continue;
        const auto cells = split_csv(line);
        if (cells.size() != header.size())
            throw InvalidInput("feature file line " + std::to_string(line_no) + ": expected " +
                               std::to_string(header.size()) + " cells, got " + std::to_string(cells.size()));
        t.images.push_back(cells[0]);
        std::vector<double> row;
        row.reserve(t.columns.size());
        for (std::size_t i = 1; i < cells.size(); ++i) row.push_back(parse_double(cells[i], line_no));
        t.rows.push_back(std::move(row));
    }
    return t;
}

}  // namespace groupsent
