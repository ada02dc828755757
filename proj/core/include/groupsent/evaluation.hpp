#pragma once

#include <span>
#include <string>
#include <vector>

namespace groupsent {

/// Intensities 1,2 -> 0 and 3,4 -> 1.
int remap_binary(int label);
std::vector<int> remap_binary(std::span<const int> labels);

struct EvalReport {
    std::vector<int> classes;  // sorted union of true and predicted labels
    /// confusion[t][p]: rows are true classes, columns predicted, in `classes` order.
    std::vector<std::vector<long>> confusion;
    std::vector<double> precision;  // 0 when a class is never predicted
    std::vector<double> recall;     // 0 when a class never occurs
    double accuracy = 0.0;
    long n_test = 0;

    [[nodiscard]] double error() const noexcept { return 1.0 - accuracy; }
};

EvalReport confusion_matrix(std::span<const int> truth, std::span<const int> predicted);

/// Fixed-width text grid, rows = true label, columns = predicted label.
std::string render_confusion(const EvalReport& report);

}  // namespace groupsent
