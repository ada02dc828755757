#include "groupsent/pyramid.hpp"

#include <array>
#include <cmath>
#include <string>

namespace groupsent {

std::size_t PyramidConfig::feature_length() const noexcept {
    const auto cells = static_cast<std::size_t>(face_size / kWindow);
    return static_cast<std::size_t>(scales) * kLevelsPerScale * cells * cells * kFeaturesPerWindow;
}

void PyramidConfig::validate() const {
    if (face_size < kWindow || face_size % kWindow != 0)
        throw InvalidInput("pyramid face_size must be a positive multiple of 4");
    if (scales < 1) throw InvalidInput("pyramid scales must be >= 1");
    if (!(base_sigma > 0.0)) throw InvalidInput("pyramid base_sigma must be positive");
}

namespace {

void append_window_stats(const GrayImage& level, std::vector<double>& out) {
    const auto g = gradients(level);
    const std::array<const GrayImage*, 5> maps{&g.ix, &g.iy, &g.ixx, &g.iyy, &g.ixy};
    constexpr int win = PyramidConfig::kWindow;
    constexpr double n = win * win;
    for (int wy = 0; wy < level.height() / win; ++wy)
        for (int wx = 0; wx < level.width() / win; ++wx) {
            std::array<double, 5> mean{};
            std::array<double, 5> stddev{};
            for (std::size_t m = 0; m < maps.size(); ++m) {
                double sum = 0.0;
                for (int y = 0; y < win; ++y)
                    for (int x = 0; x < win; ++x) sum += maps[m]->at(wx * win + x, wy * win + y);
                mean[m] = sum / n;
                double var = 0.0;
                for (int y = 0; y < win; ++y)
                    for (int x = 0; x < win; ++x) {
                        const double d = maps[m]->at(wx * win + x, wy * win + y) - mean[m];
                        var += d * d;
                    }
                stddev[m] = std::sqrt(var / n);
            }
            out.insert(out.end(), mean.begin(), mean.end());
            out.insert(out.end(), stddev.begin(), stddev.end());
        }
}

}  // namespace

std::vector<double> extract_face_features(const GrayImage& face, const PyramidConfig& cfg) {
    cfg.validate();
    if (face.width() != cfg.face_size || face.height() != cfg.face_size)
        throw InvalidInput("face crop must be " + std::to_string(cfg.face_size) + "x" + std::to_string(cfg.face_size) +
                           ", got " + std::to_string(face.width()) + "x" + std::to_string(face.height()));
    std::vector<double> out;
    out.reserve(cfg.feature_length());
    GrayImage level0 = face;
    double sigma = cfg.base_sigma;
    for (int s = 0; s < cfg.scales; ++s) {
        GrayImage level1 = gaussian_convolve(level0, sigma);
        GrayImage level2 = gaussian_convolve(level1, std::sqrt(2.0) * sigma);
        append_window_stats(level0, out);
        append_window_stats(level1, out);
        append_window_stats(level2, out);
        level0 = std::move(level2);
        sigma *= 2.0;
    }
    return out;
}

GrayImage normalized_face(const GrayImage& image, const Box& box, const PyramidConfig& cfg) {
    return resize_bilinear(crop(image, box), cfg.face_size, cfg.face_size);
}

}  // namespace groupsent
