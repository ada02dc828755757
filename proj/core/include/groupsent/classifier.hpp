#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "groupsent/geometry.hpp"

namespace groupsent {

/// Dense labelled samples, one row per example.
struct Dataset {
    std::vector<std::vector<double>> features;
    std::vector<int> labels;

    [[nodiscard]] std::size_t size() const noexcept { return labels.size(); }
    [[nodiscard]] std::size_t dimension() const noexcept { return features.empty() ? 0 : features.front().size(); }
    /// Sorted distinct labels.
    [[nodiscard]] std::vector<int> class_set() const;
    /// Throws InvalidInput unless n >= 1 and every row has the same length.
    void validate() const;

    void add(std::vector<double> row, int label);
    [[nodiscard]] Dataset subset(std::span<const std::size_t> rows) const;
};

struct SvmConfig {
    double lambda = 1e-4;
    int epochs = 100;
    double eta0 = 0.01;
    std::uint64_t seed = 0;

    friend bool operator==(const SvmConfig&, const SvmConfig&) = default;
};

/// One-vs-rest linear classifier over standardized features.
struct LinearModel {
    std::vector<int> classes;
    std::vector<std::vector<double>> weights;
    std::vector<double> bias;
    std::vector<double> feature_mean;
    std::vector<double> feature_std;
    SvmConfig config;

    [[nodiscard]] std::size_t dimension() const noexcept { return feature_mean.size(); }
    friend bool operator==(const LinearModel&, const LinearModel&) = default;
};

/// (x - mean) / std, elementwise.
std::vector<double> standardize(std::span<const double> x, std::span<const double> mean, std::span<const double> std);

struct Standardization {
    std::vector<double> mean;
    std::vector<double> std;
};
/// Column means and population standard deviations; zero-variance columns get std 1.
Standardization fit_standardization(const Dataset& data);

/// Hinge-loss L2-regularized objective of one binary problem, on standardized rows.
double binary_objective(std::span<const std::vector<double>> rows, std::span<const double> targets,
                        std::span<const double> w, double b, double lambda);

/// Trains one binary problem per class by per-example subgradient descent.
///
/// Step t (global counter over all epochs, starting at 0) uses
/// eta_t = eta0 / (1 + lambda t):
///   w <- (1 - eta_t lambda) w, then if y (w.x + b) < 1 (tested before the
///   shrink): w += eta_t y x, b += eta_t y.
/// The visiting order is reshuffled each epoch with a SplitMix64 stream seeded
/// by derive_seed(cfg.seed, class position). The bias is not regularized.
LinearModel train(const Dataset& data, const SvmConfig& cfg = {});

/// w_c . standardize(x) + b_c for each class, in model.classes order.
std::vector<double> decision_values(const LinearModel& model, std::span<const double> x);
/// Class with the largest decision value; ties go to the lower label.
int predict(const LinearModel& model, std::span<const double> x);

/// Mean training accuracy of `model` on `data`.
double accuracy(const LinearModel& model, const Dataset& data);

struct Split {
    Dataset train;
    Dataset test;
    std::vector<std::size_t> train_rows;
    std::vector<std::size_t> test_rows;
};
/// Seeded shuffle split; stratified by label when every class has >= 2 rows.
Split split(const Dataset& data, double test_fraction, std::uint64_t seed);

/// Model file (JSON). `class_names`, when non-empty, replaces the integer
/// labels in the `classes` array and must have one entry per class.
void save_model(const std::filesystem::path& path, const LinearModel& model,
                std::span<const std::string> class_names = {});
std::string model_to_json(const LinearModel& model, std::span<const std::string> class_names = {});

/// Reads a model file. String class names are resolved through `class_names`
/// (label = position in that list); integer classes are taken as-is.
LinearModel load_model(const std::filesystem::path& path, std::span<const std::string> class_names = {});
LinearModel model_from_json(const std::string& text, std::span<const std::string> class_names = {});

}  // namespace groupsent
