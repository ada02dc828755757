#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <span>
#include <vector>

#include "groupsent/geometry.hpp"

namespace groupsent {

struct Rgb {
    std::uint8_t r = 0;
    std::uint8_t g = 0;
    std::uint8_t b = 0;

    friend bool operator==(const Rgb&, const Rgb&) = default;
};

/// Row-major 8-bit RGB raster.
class RgbImage {
public:
    RgbImage() = default;
    RgbImage(int width, int height, Rgb fill = {});
    RgbImage(int width, int height, std::vector<Rgb> pixels);

    [[nodiscard]] int width() const noexcept { return width_; }
    [[nodiscard]] int height() const noexcept { return height_; }
    [[nodiscard]] std::span<const Rgb> pixels() const noexcept { return pixels_; }

    [[nodiscard]] const Rgb& at(int x, int y) const noexcept { return pixels_[index(x, y)]; }
    Rgb& at(int x, int y) noexcept { return pixels_[index(x, y)]; }

    friend bool operator==(const RgbImage&, const RgbImage&) = default;

private:
    [[nodiscard]] std::size_t index(int x, int y) const noexcept {
        return static_cast<std::size_t>(y) * static_cast<std::size_t>(width_) + static_cast<std::size_t>(x);
    }

    int width_ = 0;
    int height_ = 0;
    std::vector<Rgb> pixels_;
};

/// Row-major real-valued single-channel raster.
class GrayImage {
public:
    GrayImage() = default;
    GrayImage(int width, int height, double fill = 0.0);
    GrayImage(int width, int height, std::vector<double> values);

    [[nodiscard]] int width() const noexcept { return width_; }
    [[nodiscard]] int height() const noexcept { return height_; }
    [[nodiscard]] std::span<const double> values() const noexcept { return values_; }
    [[nodiscard]] std::span<double> values() noexcept { return values_; }

    [[nodiscard]] double at(int x, int y) const noexcept { return values_[index(x, y)]; }
    double& at(int x, int y) noexcept { return values_[index(x, y)]; }

    /// Clamp-to-edge access.
    [[nodiscard]] double clamped(int x, int y) const noexcept;

    friend bool operator==(const GrayImage&, const GrayImage&) = default;

private:
    [[nodiscard]] std::size_t index(int x, int y) const noexcept {
        return static_cast<std::size_t>(y) * static_cast<std::size_t>(width_) + static_cast<std::size_t>(x);
    }

    int width_ = 0;
    int height_ = 0;
    std::vector<double> values_;
};

RgbImage load_ppm(const std::filesystem::path& path);
GrayImage load_pgm(const std::filesystem::path& path);
RgbImage decode_ppm(std::span<const std::uint8_t> bytes);
GrayImage decode_pgm(std::span<const std::uint8_t> bytes);

void save_ppm(const std::filesystem::path& path, const RgbImage& img);
/// Values are rounded and clamped to [0,255].
void save_pgm(const std::filesystem::path& path, const GrayImage& img);

/// BT.601 luma: 0.299 R + 0.587 G + 0.114 B.
GrayImage to_grayscale(const RgbImage& img);

/// Normalized sampled Gaussian, radius ceil(3 sigma); entry i is g(i - radius).
std::vector<double> gaussian_kernel(double sigma);

/// Separable Gaussian blur with clamp-to-edge borders; output has the input's size.
GrayImage gaussian_convolve(const GrayImage& img, double sigma);

struct Gradients {
    GrayImage ix;
    GrayImage iy;
    GrayImage ixx;
    GrayImage iyy;
    GrayImage ixy;
};

/// Central-difference first and second derivatives, clamp-to-edge. Needs at least 3x3.
Gradients gradients(const GrayImage& img);

/// Bilinear resampling with pixel-center alignment.
GrayImage resize_bilinear(const GrayImage& img, int new_width, int new_height);

/// Integer pixel range covered by `box` once rounded outward and clipped to the image.
struct PixelRect {
    int x0 = 0;
    int y0 = 0;
    int x1 = 0;  // exclusive
    int y1 = 0;  // exclusive
};
PixelRect clip_to_pixels(const Box& box, int width, int height);

GrayImage crop(const GrayImage& img, const Box& box);
RgbImage crop(const RgbImage& img, const Box& box);

inline constexpr int kColorBins = 512;

/// 8x8x8 RGB histogram, bin = (R/32)*64 + (G/32)*8 + B/32. L1-normalized unless `normalize` is false.
std::array<double, kColorBins> color_histogram(const RgbImage& img, bool normalize = true);

}  // namespace groupsent
