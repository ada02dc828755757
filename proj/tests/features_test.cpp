#include <algorithm>
#include <filesystem>
#include <numeric>

#include "doctest.h"
#include "groupsent/features.hpp"
#include "groupsent/rng.hpp"

using namespace groupsent;

namespace {

double sum(std::span<const double> v) { return std::accumulate(v.begin(), v.end(), 0.0); }

}  // namespace

TEST_CASE("emotion grid") {
    // Centre (60,70) in a 100x100 image: row 2, column 2.
    const std::vector<LabelledFace> smile{{{55, 65, 65, 75}, FaceExpression::Smile}};
    const auto g = emotion_grid(100, 100, smile);
    CHECK(g[10] == 1.0);
    CHECK(sum(g) == 1.0);

    const std::vector<LabelledFace> neutral{{{55, 65, 65, 75}, FaceExpression::Neutral}};
    CHECK(emotion_grid(100, 100, neutral)[26] == 1.0);

    // A centre on the far edge is clamped into the last cell.
    const std::vector<LabelledFace> edge{{{90, 90, 100, 110}, FaceExpression::Smile}};
    CHECK(emotion_grid(100, 100, edge)[15] == 1.0);

    const std::vector<LabelledFace> none;
    CHECK(sum(emotion_grid(100, 100, none)) == 0.0);
    CHECK_THROWS_AS(emotion_grid(0, 100, none), InvalidInput);
}

TEST_CASE("emotion grid counts every face once") {
    SplitMix64 rng(4);
    std::vector<LabelledFace> faces;
    for (int i = 0; i < 40; ++i) {
        const double x = rng.uniform() * 190.0;
        const double y = rng.uniform() * 90.0;
        faces.push_back({{x, y, x + 10, y + 10}, i % 3 == 0 ? FaceExpression::Smile : FaceExpression::Neutral});
    }
    const auto g = emotion_grid(200, 100, faces);
    CHECK(sum(g) == 40.0);
    CHECK(sum(std::span<const double>(g).first(16)) == 14.0);
}

TEST_CASE("poselet histogram") {
    const std::vector<PoseletDetection> d{{3, 0.95, {}}, {3, 0.92, {}}, {3, 0.5, {}}, {7, 0.9, {}}};
    const auto c = poselet_histogram(d);
    CHECK(c[3] == 2.0);
    CHECK(c[7] == 1.0);  // a score equal to the threshold is kept
    CHECK(sum(c) == 3.0);

    const auto s = poselet_histogram(d, 0.9, PoseletMode::Score);
    CHECK(s[3] == doctest::Approx(1.87));
    CHECK(s[7] == 0.9);

    CHECK(sum(poselet_histogram(d, 0.0)) == 4.0);
    const std::vector<PoseletDetection> bad{{150, 1.0, {}}};
    CHECK_THROWS_AS(poselet_histogram(bad), InvalidInput);
}

TEST_CASE("bbox baseline") {
    const std::vector<Box> persons{{0, 0, 10, 10}, {10, 20, 50, 60}};
    const auto b = bbox_baseline(persons, 100, 200, 1);
    CHECK(b[0] == 0.1);
    CHECK(b[1] == 0.1);
    CHECK(b[2] == 0.5);
    CHECK(b[3] == 0.3);
    CHECK(b[4] == 0.0);
    CHECK(b[6] == 0.1);
    CHECK(b[7] == 0.05);
    CHECK(std::all_of(b.begin() + 8, b.end(), [](double v) { return v == 0.0; }));

    const auto raw = bbox_baseline(persons, 100, 200, 1, false);
    CHECK(raw[2] == 50.0);

    std::vector<Box> many;
    for (int i = 0; i < 20; ++i) many.push_back({0, 0, 1.0 + i, 1.0 + i});
    const auto m = bbox_baseline(many, 100, 100, 7);
    CHECK(m == bbox_baseline(many, 100, 100, 7));
    for (int i = 0; i + 1 < kMaxBaselineBoxes; ++i) CHECK(m[4 * i + 2] > m[4 * i + 6]);
    CHECK(m[4 * 14 + 2] > 0.0);
}

TEST_CASE("scene assembly") {
    std::vector<double> f1(32), f2(150), f3(6);
    std::iota(f1.begin(), f1.end(), 0.0);
    std::iota(f2.begin(), f2.end(), 100.0);
    std::iota(f3.begin(), f3.end(), 1000.0);
    const auto s = assemble_scene(f1, f2, f3);
    CHECK(s.combined.size() == 188);
    CHECK(s.combined[31] == 31.0);
    CHECK(s.combined[32] == 100.0);
    CHECK(s.combined[182] == 1000.0);
    CHECK(s.combined[187] == 1005.0);
    CHECK_THROWS_AS(assemble_scene(f1, f1, f3), InvalidInput);

    CHECK(emotion_grid_columns().size() == 32);
    CHECK(emotion_grid_columns()[10] == "f1_smile_r2c2");
    CHECK(emotion_grid_columns()[16] == "f1_neutral_r0c0");
    CHECK(poselet_columns()[149] == "f2_poselet_149");
    CHECK(group_columns().size() == 6);
}

TEST_CASE("feature CSV round trip") {
    FeatureTable t;
    t.columns = {"a", "b", "c"};
    t.images = {"images/x.ppm", "y.ppm"};
    t.rows = {{0.1, 1.0 / 3.0, -2.5e-300}, {0.0, 12345678.9, 1e20}};
    const auto path = std::filesystem::temp_directory_path() / "groupsent_features_test.csv";
    save_feature_csv(path, t);
    const auto back = load_feature_csv(path);
    CHECK(back.columns == t.columns);
    CHECK(back.images == t.images);
    CHECK(back.rows == t.rows);
    std::filesystem::remove(path);

    t.rows[0].pop_back();
    CHECK_THROWS_AS(save_feature_csv(path, t), InvalidInput);
    CHECK_THROWS_AS(load_feature_csv(path.string() + ".missing"), InvalidInput);
}
