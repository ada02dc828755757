#include "doctest.h"
#include "groupsent/evaluation.hpp"
#include "groupsent/geometry.hpp"

using namespace groupsent;

TEST_CASE("binary remap") {
    CHECK(remap_binary(1) == 0);
    CHECK(remap_binary(2) == 0);
    CHECK(remap_binary(3) == 1);
    CHECK(remap_binary(4) == 1);
    CHECK_THROWS_AS(remap_binary(0), InvalidInput);
    CHECK_THROWS_AS(remap_binary(5), InvalidInput);
    const std::vector<int> in{4, 1, 3, 2};
    CHECK(remap_binary(in) == std::vector<int>{1, 0, 1, 0});
}

TEST_CASE("confusion matrix") {
    const std::vector<int> truth{1, 1, 2, 3, 3, 3};
    const std::vector<int> pred{1, 2, 2, 3, 1, 3};
    const auto r = confusion_matrix(truth, pred);
    CHECK(r.classes == std::vector<int>{1, 2, 3});
    CHECK(r.confusion == std::vector<std::vector<long>>{{1, 1, 0}, {0, 1, 0}, {1, 0, 2}});
    CHECK(r.n_test == 6);
    CHECK(r.accuracy == doctest::Approx(4.0 / 6.0));
    CHECK(r.error() == doctest::Approx(2.0 / 6.0));
    CHECK(r.precision[0] == 0.5);
    CHECK(r.recall[2] == doctest::Approx(2.0 / 3.0));

    long total = 0;
    for (const auto& row : r.confusion)
        for (long v : row) total += v;
    CHECK(total == r.n_test);

    const auto text = render_confusion(r);
    CHECK(text.find("true\\pred") == 0);
    CHECK(text.find("accuracy 0.6667") != std::string::npos);
}

TEST_CASE("classes include labels that were only predicted") {
    const std::vector<int> truth{0, 0};
    const std::vector<int> pred{0, 1};
    const auto r = confusion_matrix(truth, pred);
    CHECK(r.classes == std::vector<int>{0, 1});
    CHECK(r.recall[1] == 0.0);
    CHECK(r.precision[1] == 0.0);
    CHECK_THROWS_AS(confusion_matrix(truth, std::vector<int>{0}), InvalidInput);
    CHECK_THROWS_AS(confusion_matrix(std::vector<int>{}, std::vector<int>{}), InvalidInput);
}
