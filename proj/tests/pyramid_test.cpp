#include <algorithm>
#include <cmath>

#include "doctest.h"
#include "groupsent/pyramid.hpp"
#include "oracles/synthetic.hpp"

using namespace groupsent;

namespace {

constexpr int kCells = 12;  // 48 / 4

// Offset of (scale, level, window row, window col, statistic) in the vector.
std::size_t offset(int scale, int level, int wr, int wc, int stat) {
    return ((static_cast<std::size_t>(scale * 3 + level) * kCells + static_cast<std::size_t>(wr)) * kCells +
            static_cast<std::size_t>(wc)) * 10 + static_cast<std::size_t>(stat);
}

}  // namespace

TEST_CASE("default feature length") {
    CHECK(PyramidConfig{}.feature_length() == 12960);
    CHECK(PyramidConfig{}.feature_length() == 3u * 3u * 144u * 10u);
    CHECK(PyramidConfig{16, 1.0, 2}.feature_length() == 2u * 3u * 16u * 10u);
}

TEST_CASE("constant face gives all zeros") {
    const auto f = extract_face_features(GrayImage(48, 48, 123.0));
    REQUIRE(f.size() == 12960);
    CHECK(std::all_of(f.begin(), f.end(), [](double v) { return v == 0.0; }));
}

TEST_CASE("ramp face: level I0 of scale 0 has mean Ix 1 and std 0 away from the border") {
    GrayImage img(48, 48);
    for (int y = 0; y < 48; ++y)
        for (int x = 0; x < 48; ++x) img.at(x, y) = x;
    const auto f = extract_face_features(img);
    for (int wr = 0; wr < kCells; ++wr)
        for (int wc = 1; wc < kCells - 1; ++wc) {
            CHECK(f[offset(0, 0, wr, wc, 0)] == doctest::Approx(1.0).epsilon(1e-12));  // mean Ix
            CHECK(f[offset(0, 0, wr, wc, 5)] == doctest::Approx(0.0));                // std Ix
            CHECK(f[offset(0, 0, wr, wc, 1)] == 0.0);                                 // mean Iy
        }
}

TEST_CASE("wrong size or bad config is rejected") {
    CHECK_THROWS_AS(extract_face_features(GrayImage(40, 48)), InvalidInput);
    CHECK_THROWS_AS(extract_face_features(GrayImage(32, 32)), InvalidInput);
    CHECK_THROWS_AS(extract_face_features(GrayImage(30, 30), PyramidConfig{30, 1.0, 3}), InvalidInput);
    CHECK_THROWS_AS(extract_face_features(GrayImage(48, 48), PyramidConfig{48, 1.0, 0}), InvalidInput);
}

TEST_CASE("deterministic and DC-shift invariant") {
    SplitMix64 rng(21);
    for (int t = 0; t < 5; ++t) {
        const auto img = testgen::random_gray(48, 48, rng);
        const auto a = extract_face_features(img);
        CHECK(a == extract_face_features(img));
        GrayImage shifted = img;
        for (double& v : shifted.values()) v += 37.0;
        const auto b = extract_face_features(shifted);
        double worst = 0.0;
        for (std::size_t i = 0; i < a.size(); ++i) worst = std::max(worst, std::abs(a[i] - b[i]));
        CHECK(worst < 1e-9);
    }
}

TEST_CASE("horizontal flip mirrors mean-Ix windows with flipped sign") {
    SplitMix64 rng(22);
    const auto img = testgen::random_gray(48, 48, rng);
    GrayImage flipped(48, 48);
    for (int y = 0; y < 48; ++y)
        for (int x = 0; x < 48; ++x) flipped.at(x, y) = img.at(47 - x, y);
    const auto a = extract_face_features(img);
    const auto b = extract_face_features(flipped);
    for (int s = 0; s < 3; ++s)
        for (int l = 0; l < 3; ++l)
            for (int wr = 0; wr < kCells; ++wr)
                for (int wc = 0; wc < kCells; ++wc) {
                    const double orig = a[offset(s, l, wr, wc, 0)];
                    const double mirror = b[offset(s, l, wr, kCells - 1 - wc, 0)];
                    CHECK(mirror == doctest::Approx(-orig).epsilon(1e-9).scale(1.0));
                    // std of Ix is a magnitude statistic and must match exactly up to rounding
                    CHECK(b[offset(s, l, wr, kCells - 1 - wc, 5)] ==
                          doctest::Approx(a[offset(s, l, wr, wc, 5)]).epsilon(1e-9).scale(1.0));
                }
}

TEST_CASE("normalized_face crops and resizes") {
    GrayImage img(100, 80, 10.0);
    const auto face = normalized_face(img, {10, 10, 34, 34});
    CHECK(face.width() == 48);
    CHECK(face.height() == 48);
}
