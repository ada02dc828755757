// Writes the bundled synthetic corpus: annotated scene images plus a
// smile/neutral face set. Output is a pure function of the seed.
//
//   groupsent-make-corpus <out_dir> [seed]
//   groupsent-make-corpus --golden <face.pgm> <out.txt>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>

#include "groupsent/annotation.hpp"
#include "groupsent/imaging.hpp"
#include "groupsent/pyramid.hpp"
#include "groupsent/rng.hpp"

namespace gs = groupsent;
namespace fs = std::filesystem;

namespace {

constexpr int kImages = 12;
constexpr int kWidth = 192;
constexpr int kHeight = 128;
constexpr int kFacesPerClass = 24;

std::uint8_t clamp8(double v) { return static_cast<std::uint8_t>(std::clamp(std::lround(v), 0L, 255L)); }

void fill_rect(gs::RgbImage& img, int x0, int y0, int x1, int y1, gs::Rgb c) {
    for (int y = std::max(0, y0); y < std::min(img.height(), y1); ++y)
        for (int x = std::max(0, x0); x < std::min(img.width(), x1); ++x) img.at(x, y) = c;
}

void dot(gs::RgbImage& img, double cx, double cy, double r, gs::Rgb c) {
    for (int y = static_cast<int>(cy - r - 1); y <= static_cast<int>(cy + r + 1); ++y)
        for (int x = static_cast<int>(cx - r - 1); x <= static_cast<int>(cx + r + 1); ++x)
            if (x >= 0 && y >= 0 && x < img.width() && y < img.height() && std::hypot(x + 0.5 - cx, y + 0.5 - cy) <= r)
                img.at(x, y) = c;
}

// Skin ellipse with two eyes and either a curved (smile) or straight mouth.
void draw_face(gs::RgbImage& img, double x0, double y0, double size, bool smile, gs::Rgb skin) {
    const double cx = x0 + size / 2.0;
    const double cy = y0 + size / 2.0;
    for (int y = static_cast<int>(y0); y < static_cast<int>(y0 + size); ++y)
        for (int x = static_cast<int>(x0); x < static_cast<int>(x0 + size); ++x) {
            const double dx = (x + 0.5 - cx) / (0.48 * size);
            const double dy = (y + 0.5 - cy) / (0.5 * size);
            if (dx * dx + dy * dy <= 1.0 && x >= 0 && y >= 0 && x < img.width() && y < img.height()) img.at(x, y) = skin;
        }
    const gs::Rgb dark{30, 20, 20};
    const double r = std::max(0.7, size * 0.06);
    dot(img, x0 + 0.33 * size, y0 + 0.38 * size, r, dark);
    dot(img, x0 + 0.67 * size, y0 + 0.38 * size, r, dark);
    const double thick = std::max(0.6, size * 0.045);
    for (double t = -1.0; t <= 1.0; t += 0.02) {
        const double mx = cx + t * 0.22 * size;
        const double my = smile ? y0 + 0.78 * size - 0.14 * size * (t * t) : y0 + 0.72 * size;
        dot(img, mx, my, thick, dark);
    }
}

void add_noise(gs::RgbImage& img, gs::SplitMix64& rng, double amplitude) {
    for (int y = 0; y < img.height(); ++y)
        for (int x = 0; x < img.width(); ++x) {
            auto& p = img.at(x, y);
            const double n = (rng.uniform() - 0.5) * 2.0 * amplitude;
            p = {clamp8(p.r + n), clamp8(p.g + n), clamp8(p.b + n)};
        }
}

int make_faces(const fs::path& dir, std::uint64_t seed) {
    fs::create_directories(dir / "faces");
    std::ofstream list(dir / "faces.csv");
    list << "path,label\n";
    gs::SplitMix64 rng(gs::derive_seed(seed, 7));
    for (int i = 0; i < 2 * kFacesPerClass; ++i) {
        const bool smile = i % 2 == 0;
        const double bg = 60 + 120 * rng.uniform();
        gs::RgbImage img(48, 48, gs::Rgb{clamp8(bg), clamp8(bg), clamp8(bg)});
        const double size = 38 + 8 * rng.uniform();
        const double ox = (48 - size) * rng.uniform();
        const double oy = (48 - size) * rng.uniform();
        const double tone = 170 + 60 * rng.uniform();
        draw_face(img, ox, oy, size, smile, gs::Rgb{clamp8(tone), clamp8(tone * 0.8), clamp8(tone * 0.65)});
        add_noise(img, rng, 10.0);
        char name[32];
        std::snprintf(name, sizeof(name), "face_%02d.pgm", i);
        gs::save_pgm(dir / "faces" / name, gs::to_grayscale(img));
        list << "faces/" << name << ',' << (smile ? "smile" : "neutral") << '\n';
    }
    return 2 * kFacesPerClass;
}

gs::ImageAnnotation make_scene(int i, const fs::path& dir, std::uint64_t seed) {
    gs::SplitMix64 rng(gs::derive_seed(seed, 100, static_cast<std::uint64_t>(i)));
    gs::ImageAnnotation a;
    char name[32];
    std::snprintf(name, sizeof(name), "scene_%02d.ppm", i);
    a.image_path = std::string("images/") + name;
    a.width = kWidth;
    a.height = kHeight;

    gs::SentimentLabels labels;
    labels.interaction = 1 + i % 4;
    labels.activity = 1 + ((i * 5 + 1) % 12) / 3;
    labels.happiness = 1 + i / 3;
    labels.focus = 1 + ((i * 7) % 12) / 3;
    a.labels = labels;

    const int a_level = labels.activity;
    gs::RgbImage img(kWidth, kHeight,
                     gs::Rgb{clamp8(50 + 40 * a_level), 95, clamp8(170 - 30 * a_level)});
    fill_rect(img, 0, kHeight - 20, kWidth, kHeight, gs::Rgb{90, 80, 60});

    const int n = 2 + i % 4;
    const double slot = static_cast<double>(kWidth) / n;
    std::vector<gs::Direction> dirs;
    for (int p = 0; p < n; ++p) {
        const double h = 62 + 30 * rng.uniform();
        const double w = 0.32 * h;
        const double x0 = std::floor(p * slot + (slot - w) * rng.uniform());
        const double y0 = std::floor(kHeight - h - 4 * rng.uniform());
        const gs::Box person{x0, y0, std::min<double>(kWidth, std::ceil(x0 + w)), std::min<double>(kHeight, std::ceil(y0 + h))};
        a.persons.push_back(person);

        const double fsize = std::floor(0.7 * w);
        const double fx = std::floor(person.center_x() - fsize / 2 + (rng.uniform() - 0.5) * 2);
        const gs::Box face{fx, y0 + 2, fx + fsize, y0 + 2 + fsize};
        a.faces.push_back(face);

        const gs::Box torso{x0 + 2, face.y_max + 2, person.x_max - 2, std::floor(face.y_max + 2 + 0.35 * h)};
        a.torsos.push_back(torso);

        const gs::Rgb shirt{clamp8(200 * rng.uniform()), clamp8(200 * rng.uniform()), clamp8(200 * rng.uniform())};
        fill_rect(img, static_cast<int>(person.x_min), static_cast<int>(face.y_max),
                  static_cast<int>(person.x_max), static_cast<int>(person.y_max), gs::Rgb{40, 40, 70});
        fill_rect(img, static_cast<int>(torso.x_min), static_cast<int>(torso.y_min), static_cast<int>(torso.x_max),
                  static_cast<int>(torso.y_max), shirt);
        const bool smile = rng.uniform() < (labels.happiness - 0.5) / 4.0;
        draw_face(img, face.x_min, face.y_min, fsize, smile, gs::Rgb{225, 180, 150});

        gs::Direction d;
        if (labels.interaction >= 3 && n > 1)
            d = (p < n / 2) ? gs::Direction::E : gs::Direction::W;
        else
            d = static_cast<gs::Direction>(rng.bounded(gs::kDirectionCount));
        dirs.push_back(d);

        // A couple of detector false positives: small torsos inside the person.
        if (rng.uniform() < 0.5)
            a.torsos.push_back({x0 + 3, person.y_max - 10, x0 + 7, person.y_max - 4});
    }
    a.orientations = dirs;

    if (i % 3 == 0) {
        const auto f = a.faces.front();
        a.faces.push_back({f.x_min + 1, f.y_min, f.x_max + 1, f.y_max});
    }
    if (i % 5 == 0) a.faces.push_back({2, 2, 10, 10});

    const int detections = 6 + static_cast<int>(rng.bounded(7));
    for (int k = 0; k < detections; ++k) {
        const int base = 30 * (labels.focus - 1);
        const int id = base + static_cast<int>(rng.bounded(40)) % gs::kPoseletTypes;
        const auto& person = a.persons[rng.bounded(a.persons.size())];
        a.poselets.push_back({id, std::round((0.5 + 0.5 * rng.uniform()) * 1000) / 1000, person});
    }

    add_noise(img, rng, 6.0);
    gs::save_ppm(dir / a.image_path, img);
    return a;
}

}  // namespace

int main(int argc, char** argv) {
    try {
        if (argc == 4 && std::string(argv[1]) == "--golden") {
            const auto features = gs::extract_face_features(gs::load_pgm(argv[2]));
            std::ofstream out(argv[3]);
            for (double v : features) {
                char buf[40];
                std::snprintf(buf, sizeof(buf), "%a\n", v);
                out << buf;
            }
            return 0;
        }
        if (argc < 2 || argc > 3) {
            std::cerr << "usage: groupsent-make-corpus <out_dir> [seed]\n"
                         "       groupsent-make-corpus --golden <face.pgm> <out.txt>\n";
            return 2;
        }
        const fs::path dir = argv[1];
        const std::uint64_t seed = argc == 3 ? std::stoull(argv[2]) : 2024;
        fs::create_directories(dir / "images");
        std::vector<gs::ImageAnnotation> scenes;
        for (int i = 0; i < kImages; ++i) scenes.push_back(make_scene(i, dir, seed));
        for (const auto& s : scenes) gs::validate(s);
        gs::save_annotations(dir / "annotations.jsonl", scenes);
        const int faces = make_faces(dir, seed);
        std::cout << "wrote " << scenes.size() << " scenes and " << faces << " faces to " << dir << '\n';
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 0;
}
