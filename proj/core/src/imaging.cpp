#include "groupsent/imaging.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <fstream>
#include <iterator>
#include <string>

namespace groupsent {

RgbImage::RgbImage(int width, int height, Rgb fill)
    : width_(width), height_(height), pixels_(static_cast<std::size_t>(width) * static_cast<std::size_t>(height), fill) {
    if (width <= 0 || height <= 0) throw InvalidInput("image dimensions must be positive");
}

RgbImage::RgbImage(int width, int height, std::vector<Rgb> pixels)
    : width_(width), height_(height), pixels_(std::move(pixels)) {
    if (width <= 0 || height <= 0) throw InvalidInput("image dimensions must be positive");
    if (pixels_.size() != static_cast<std::size_t>(width) * static_cast<std::size_t>(height))
        throw InvalidInput("pixel count does not match image dimensions");
}

GrayImage::GrayImage(int width, int height, double fill)
    : width_(width), height_(height), values_(static_cast<std::size_t>(width) * static_cast<std::size_t>(height), fill) {
    if (width <= 0 || height <= 0) throw InvalidInput("image dimensions must be positive");
}

GrayImage::GrayImage(int width, int height, std::vector<double> values)
    : width_(width), height_(height), values_(std::move(values)) {
    if (width <= 0 || height <= 0) throw InvalidInput("image dimensions must be positive");
    if (values_.size() != static_cast<std::size_t>(width) * static_cast<std::size_t>(height))
        throw InvalidInput("value count does not match image dimensions");
    for (double v : values_)
        if (!std::isfinite(v)) throw InvalidInput("gray image values must be finite");
}

double GrayImage::clamped(int x, int y) const noexcept {
    x = std::clamp(x, 0, width_ - 1);
    y = std::clamp(y, 0, height_ - 1);
    return at(x, y);
}

namespace {

struct PnmHeader {
    int width = 0;
    int height = 0;
    std::size_t payload_offset = 0;
};

PnmHeader parse_pnm_header(std::span<const std::uint8_t> bytes, char kind) {
    if (bytes.size() < 2 || bytes[0] != 'P' || bytes[1] != static_cast<std::uint8_t>(kind))
        throw InvalidInput(std::string("bad magic number: expected P") + kind);
    std::size_t pos = 2;
    auto next_int = [&](const char* what) {
        for (;;) {
            while (pos < bytes.size() && std::isspace(bytes[pos])) ++pos;
            if (pos < bytes.size() && bytes[pos] == '#') {
                while (pos < bytes.size() && bytes[pos] != '\n') ++pos;
                continue;
            }
            break;
        }
        if (pos >= bytes.size() || !std::isdigit(bytes[pos]))
            throw InvalidInput(std::string("malformed PNM header: missing ") + what);
        long value = 0;
        while (pos < bytes.size() && std::isdigit(bytes[pos])) {
            value = value * 10 + (bytes[pos] - '0');
            if (value > 1'000'000) throw InvalidInput(std::string("PNM ") + what + " too large");
            ++pos;
        }
        return static_cast<int>(value);
    };
    PnmHeader h;
    h.width = next_int("width");
    h.height = next_int("height");
    const int maxval = next_int("maxval");
    if (h.width <= 0 || h.height <= 0) throw InvalidInput("PNM dimensions must be positive");
    if (maxval != 255) throw InvalidInput("unsupported PNM maxval " + std::to_string(maxval) + " (expected 255)");
    if (pos >= bytes.size() || !std::isspace(bytes[pos])) throw InvalidInput("malformed PNM header: no separator");
    h.payload_offset = pos + 1;
    return h;
}

std::vector<std::uint8_t> read_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw InvalidInput("cannot open image " + path.string());
    return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

void check_payload(const PnmHeader& h, std::size_t available, int channels) {
    const std::size_t need = static_cast<std::size_t>(h.width) * static_cast<std::size_t>(h.height) *
                             static_cast<std::size_t>(channels);
    if (available < need)
        throw InvalidInput("truncated PNM payload: expected " + std::to_string(need) + " bytes, got " +
                           std::to_string(available));
}

}  // namespace

RgbImage decode_ppm(std::span<const std::uint8_t> bytes) {
    const auto h = parse_pnm_header(bytes, '6');
    check_payload(h, bytes.size() - std::min(bytes.size(), h.payload_offset), 3);
    std::vector<Rgb> px(static_cast<std::size_t>(h.width) * static_cast<std::size_t>(h.height));
    const auto* p = bytes.data() + h.payload_offset;
    for (auto& c : px) {
        c = {p[0], p[1], p[2]};
        p += 3;
    }
    return {h.width, h.height, std::move(px)};
}

GrayImage decode_pgm(std::span<const std::uint8_t> bytes) {
    const auto h = parse_pnm_header(bytes, '5');
    check_payload(h, bytes.size() - std::min(bytes.size(), h.payload_offset), 1);
    std::vector<double> v(static_cast<std::size_t>(h.width) * static_cast<std::size_t>(h.height));
    for (std::size_t i = 0; i < v.size(); ++i) v[i] = bytes[h.payload_offset + i];
    return {h.width, h.height, std::move(v)};
}

RgbImage load_ppm(const std::filesystem::path& path) {
    const auto bytes = read_file(path);
    try {
        return decode_ppm(bytes);
    } catch (const InvalidInput& e) {
        throw InvalidInput(path.string() + ": " + e.what());
    }
}

GrayImage load_pgm(const std::filesystem::path& path) {
    const auto bytes = read_file(path);
    try {
        return decode_pgm(bytes);
    } catch (const InvalidInput& e) {
        throw InvalidInput(path.string() + ": " + e.what());
    }
}

void save_ppm(const std::filesystem::path& path, const RgbImage& img) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw InvalidInput("cannot write image " + path.string());
    out << "P6\n" << img.width() << ' ' << img.height() << "\n255\n";
    for (const auto& c : img.pixels()) {
        const char rgb[3] = {static_cast<char>(c.r), static_cast<char>(c.g), static_cast<char>(c.b)};
        out.write(rgb, 3);
    }
}

void save_pgm(const std::filesystem::path& path, const GrayImage& img) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw InvalidInput("cannot write image " + path.string());
    out << "P5\n" << img.width() << ' ' << img.height() << "\n255\n";
    for (double v : img.values()) out.put(static_cast<char>(static_cast<std::uint8_t>(std::clamp(std::lround(v), 0L, 255L))));
}

GrayImage to_grayscale(const RgbImage& img) {
    std::vector<double> v;
    v.reserve(img.pixels().size());
    for (const auto& c : img.pixels()) v.push_back(0.299 * c.r + 0.587 * c.g + 0.114 * c.b);
    return {img.width(), img.height(), std::move(v)};
}

std::vector<double> gaussian_kernel(double sigma) {
    if (!(sigma > 0.0) || !std::isfinite(sigma)) throw InvalidInput("gaussian sigma must be positive");
    const int radius = static_cast<int>(std::ceil(3.0 * sigma));
    std::vector<double> k(static_cast<std::size_t>(2 * radius + 1));
    double sum = 0.0;
    for (int i = -radius; i <= radius; ++i) {
        const double t = static_cast<double>(i);
        k[static_cast<std::size_t>(i + radius)] = std::exp(-(t * t) / (2.0 * sigma * sigma));
    }
    for (double w : k) sum += w;
    for (double& w : k) w /= sum;
    return k;
}

GrayImage gaussian_convolve(const GrayImage& img, double sigma) {
    const auto kernel = gaussian_kernel(sigma);
    const int radius = static_cast<int>(kernel.size() / 2);
    const int w = img.width();
    const int h = img.height();

    GrayImage tmp(w, h);
    for (int y = 0; y < h; ++y)
        for (int x = 0; x < w; ++x) {
            double acc = 0.0;
            for (int k = -radius; k <= radius; ++k) acc += kernel[static_cast<std::size_t>(k + radius)] * img.clamped(x + k, y);
            tmp.at(x, y) = acc;
        }

    GrayImage out(w, h);
    for (int y = 0; y < h; ++y)
        for (int x = 0; x < w; ++x) {
            double acc = 0.0;
            for (int k = -radius; k <= radius; ++k) acc += kernel[static_cast<std::size_t>(k + radius)] * tmp.clamped(x, y + k);
            out.at(x, y) = acc;
        }
    return out;
}

Gradients gradients(const GrayImage& img) {
    const int w = img.width();
    const int h = img.height();
    if (w < 3 || h < 3) throw InvalidInput("gradients need an image of at least 3x3");
    Gradients g{GrayImage(w, h), GrayImage(w, h), GrayImage(w, h), GrayImage(w, h), GrayImage(w, h)};
    for (int y = 0; y < h; ++y)
        for (int x = 0; x < w; ++x) {
            const double c = img.at(x, y);
            const double l = img.clamped(x - 1, y);
            const double r = img.clamped(x + 1, y);
            const double u = img.clamped(x, y - 1);
            const double d = img.clamped(x, y + 1);
            g.ix.at(x, y) = (r - l) / 2.0;
            g.iy.at(x, y) = (d - u) / 2.0;
            g.ixx.at(x, y) = r - 2.0 * c + l;
            g.iyy.at(x, y) = d - 2.0 * c + u;
        }
    for (int y = 0; y < h; ++y)
        for (int x = 0; x < w; ++x) g.ixy.at(x, y) = (g.ix.clamped(x, y + 1) - g.ix.clamped(x, y - 1)) / 2.0;
    return g;
}

GrayImage resize_bilinear(const GrayImage& img, int new_width, int new_height) {
    if (new_width < 1 || new_height < 1) throw InvalidInput("resize target dimensions must be >= 1");
    if (new_width == img.width() && new_height == img.height()) return img;
    const double sx = static_cast<double>(img.width()) / new_width;
    const double sy = static_cast<double>(img.height()) / new_height;
    GrayImage out(new_width, new_height);
    for (int y = 0; y < new_height; ++y) {
        const double fy = std::clamp((y + 0.5) * sy - 0.5, 0.0, static_cast<double>(img.height() - 1));
        const int y0 = static_cast<int>(std::floor(fy));
        const int y1 = std::min(y0 + 1, img.height() - 1);
        const double ty = fy - y0;
        for (int x = 0; x < new_width; ++x) {
            const double fx = std::clamp((x + 0.5) * sx - 0.5, 0.0, static_cast<double>(img.width() - 1));
            const int x0 = static_cast<int>(std::floor(fx));
            const int x1 = std::min(x0 + 1, img.width() - 1);
            const double tx = fx - x0;
            const double top = img.at(x0, y0) * (1.0 - tx) + img.at(x1, y0) * tx;
            const double bottom = img.at(x0, y1) * (1.0 - tx) + img.at(x1, y1) * tx;
            out.at(x, y) = top * (1.0 - ty) + bottom * ty;
        }
    }
    return out;
}

PixelRect clip_to_pixels(const Box& box, int width, int height) {
    PixelRect r;
    r.x0 = std::max(0, static_cast<int>(std::floor(box.x_min)));
    r.y0 = std::max(0, static_cast<int>(std::floor(box.y_min)));
    r.x1 = std::min(width, static_cast<int>(std::ceil(box.x_max)));
    r.y1 = std::min(height, static_cast<int>(std::ceil(box.y_max)));
    if (r.x0 >= r.x1 || r.y0 >= r.y1)
        throw InvalidInput("crop box " + to_string(box) + " lies outside the " + std::to_string(width) + "x" +
                           std::to_string(height) + " image");
    return r;
}

GrayImage crop(const GrayImage& img, const Box& box) {
    const auto r = clip_to_pixels(box, img.width(), img.height());
    GrayImage out(r.x1 - r.x0, r.y1 - r.y0);
    for (int y = r.y0; y < r.y1; ++y)
        for (int x = r.x0; x < r.x1; ++x) out.at(x - r.x0, y - r.y0) = img.at(x, y);
    return out;
}

RgbImage crop(const RgbImage& img, const Box& box) {
    const auto r = clip_to_pixels(box, img.width(), img.height());
    RgbImage out(r.x1 - r.x0, r.y1 - r.y0);
    for (int y = r.y0; y < r.y1; ++y)
        for (int x = r.x0; x < r.x1; ++x) out.at(x - r.x0, y - r.y0) = img.at(x, y);
    return out;
}

std::array<double, kColorBins> color_histogram(const RgbImage& img, bool normalize) {
    std::array<double, kColorBins> hist{};
    for (const auto& c : img.pixels()) hist[static_cast<std::size_t>((c.r / 32) * 64 + (c.g / 32) * 8 + c.b / 32)] += 1.0;
    if (normalize) {
        const double n = static_cast<double>(img.pixels().size());
        for (double& v : hist) v /= n;
    }
    return hist;
}

}  // namespace groupsent
