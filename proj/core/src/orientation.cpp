#include "groupsent/orientation.hpp"

#include <cmath>
#include <numbers>

namespace groupsent {

std::size_t HogConfig::feature_length() const noexcept {
    return static_cast<std::size_t>(cells_x() - 1) * static_cast<std::size_t>(cells_y() - 1) * block_length();
}

void HogConfig::validate() const {
    if (cell < 1 || bins < 1) throw InvalidInput("hog cell size and bin count must be positive");
    if (window_width % cell != 0 || window_height % cell != 0)
        throw InvalidInput("hog window must be divisible by the cell size");
    if (cells_x() < kBlockCells || cells_y() < kBlockCells) throw InvalidInput("hog window smaller than one block");
}

std::vector<double> extract_hog(const GrayImage& crop, const HogConfig& cfg) {
    cfg.validate();
    if (crop.width() != cfg.window_width || crop.height() != cfg.window_height)
        throw InvalidInput("hog crop must be " + std::to_string(cfg.window_width) + "x" +
                           std::to_string(cfg.window_height) + ", got " + std::to_string(crop.width()) + "x" +
                           std::to_string(crop.height()));

    const int cx = cfg.cells_x();
    const int cy = cfg.cells_y();
    const auto nbins = static_cast<std::size_t>(cfg.bins);
    const double bin_width = 180.0 / cfg.bins;
    std::vector<double> cells(static_cast<std::size_t>(cx * cy) * nbins, 0.0);

    for (int y = 0; y < crop.height(); ++y)
        for (int x = 0; x < crop.width(); ++x) {
            const double gx = (crop.clamped(x + 1, y) - crop.clamped(x - 1, y)) / 2.0;
            const double gy = (crop.clamped(x, y + 1) - crop.clamped(x, y - 1)) / 2.0;
            const double mag = std::hypot(gx, gy);
            if (mag == 0.0) continue;
            double angle = std::atan2(gy, gx) * (180.0 / std::numbers::pi);
            if (angle < 0.0) angle += 180.0;
            if (angle >= 180.0) angle -= 180.0;
            const double pos = angle / bin_width - 0.5;
            const double lower = std::floor(pos);
            const double frac = pos - lower;
            const auto b0 = static_cast<std::size_t>((static_cast<int>(lower) + cfg.bins) % cfg.bins);
            const auto b1 = (b0 + 1) % nbins;
            const auto cell = static_cast<std::size_t>((y / cfg.cell) * cx + x / cfg.cell);
            cells[cell * nbins + b0] += (1.0 - frac) * mag;
            cells[cell * nbins + b1] += frac * mag;
        }

    std::vector<double> out;
    out.reserve(cfg.feature_length());
    std::vector<double> block;
    block.reserve(cfg.block_length());
    for (int by = 0; by + HogConfig::kBlockCells <= cy; ++by)
        for (int bx = 0; bx + HogConfig::kBlockCells <= cx; ++bx) {
            block.clear();
            for (int dy = 0; dy < HogConfig::kBlockCells; ++dy)
                for (int dx = 0; dx < HogConfig::kBlockCells; ++dx) {
                    const auto cell = static_cast<std::size_t>((by + dy) * cx + bx + dx);
                    block.insert(block.end(), cells.begin() + static_cast<std::ptrdiff_t>(cell * nbins),
                                 cells.begin() + static_cast<std::ptrdiff_t>((cell + 1) * nbins));
                }
            double sq = 0.0;
            for (double v : block) sq += v * v;
            const double scale = 1.0 / std::sqrt(sq + HogConfig::kEpsilon);
            for (double v : block) out.push_back(v * scale);
        }
    return out;
}

GrayImage person_window(const RgbImage& image, const Box& person, const HogConfig& cfg) {
    return resize_bilinear(to_grayscale(crop(image, person)), cfg.window_width, cfg.window_height);
}

ImageLoader directory_loader(std::string root) {
    return [root = std::move(root)](const std::string& image_path) {
        return load_ppm(std::filesystem::path(root) / image_path);
    };
}

Dataset orientation_dataset(std::span<const ImageAnnotation> annotations, const ImageLoader& loader,
                            const HogConfig& cfg) {
    std::string missing;
    for (const auto& a : annotations)
        if (!a.orientations) missing += (missing.empty() ? "" : ", ") + a.image_path;
    if (!missing.empty()) throw InvalidInput("annotations without orientations: " + missing);

    Dataset data;
    for (const auto& a : annotations) {
        if (a.persons.empty()) continue;
        const auto image = loader(a.image_path);
        for (std::size_t p = 0; p < a.persons.size(); ++p)
            data.add(extract_hog(person_window(image, a.persons[p], cfg), cfg), static_cast<int>((*a.orientations)[p]));
    }
    return data;
}

LinearModel train_orientation(std::span<const ImageAnnotation> annotations, const ImageLoader& loader,
                              const SvmConfig& svm, const HogConfig& cfg) {
    const auto data = orientation_dataset(annotations, loader, cfg);
    if (data.size() == 0 || data.class_set().size() < 2)
        throw InvalidInput("orientation training needs at least 2 distinct directions");
    return train(data, svm);
}

Direction predict_orientation(const LinearModel& model, const GrayImage& window, const HogConfig& cfg) {
    return direction_from_index(predict(model, extract_hog(window, cfg)));
}

std::vector<std::string> direction_names() {
    std::vector<std::string> out;
    for (int i = 0; i < kDirectionCount; ++i) out.emplace_back(direction_name(static_cast<Direction>(i)));
    return out;
}

std::vector<std::string> direction_class_names(const LinearModel& model) {
    std::vector<std::string> out;
    for (int c : model.classes) out.emplace_back(direction_name(direction_from_index(c)));
    return out;
}

void save_orientation_model(const std::filesystem::path& path, const LinearModel& model) {
    save_model(path, model, direction_class_names(model));
}

LinearModel load_orientation_model(const std::filesystem::path& path) {
    const auto names = direction_names();
    auto model = load_model(path, names);
    for (int c : model.classes) direction_from_index(c);
    return model;
}

}  // namespace groupsent
