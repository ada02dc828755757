#include "groupsent/evaluation.hpp"

#include <algorithm>
#include <iomanip>
#include <sstream>

#include "groupsent/geometry.hpp"

namespace groupsent {

int remap_binary(int label) {
    if (label < 1 || label > 4) throw InvalidInput("intensity label out of range [1,4]: " + std::to_string(label));
    return label >= 3 ? 1 : 0;
}

std::vector<int> remap_binary(std::span<const int> labels) {
    std::vector<int> out;
    out.reserve(labels.size());
    for (int l : labels) out.push_back(remap_binary(l));
    return out;
}

EvalReport confusion_matrix(std::span<const int> truth, std::span<const int> predicted) {
    if (truth.size() != predicted.size())
        throw InvalidInput("confusion matrix: " + std::to_string(truth.size()) + " true labels vs " +
                           std::to_string(predicted.size()) + " predictions");
    if (truth.empty()) throw InvalidInput("confusion matrix needs at least one prediction");

    EvalReport r;
    r.classes.assign(truth.begin(), truth.end());
    r.classes.insert(r.classes.end(), predicted.begin(), predicted.end());
    std::sort(r.classes.begin(), r.classes.end());
    r.classes.erase(std::unique(r.classes.begin(), r.classes.end()), r.classes.end());

    const std::size_t c = r.classes.size();
    auto index = [&](int label) {
        return static_cast<std::size_t>(std::lower_bound(r.classes.begin(), r.classes.end(), label) - r.classes.begin());
    };
    r.confusion.assign(c, std::vector<long>(c, 0));
    for (std::size_t i = 0; i < truth.size(); ++i) ++r.confusion[index(truth[i])][index(predicted[i])];

    long trace = 0;
    for (std::size_t i = 0; i < c; ++i) trace += r.confusion[i][i];
    r.n_test = static_cast<long>(truth.size());
    r.accuracy = static_cast<double>(trace) / static_cast<double>(r.n_test);

    r.precision.assign(c, 0.0);
    r.recall.assign(c, 0.0);
    for (std::size_t k = 0; k < c; ++k) {
        long col = 0;
        long row = 0;
        for (std::size_t j = 0; j < c; ++j) {
            col += r.confusion[j][k];
            row += r.confusion[k][j];
        }
        if (col > 0) r.precision[k] = static_cast<double>(r.confusion[k][k]) / static_cast<double>(col);
        if (row > 0) r.recall[k] = static_cast<double>(r.confusion[k][k]) / static_cast<double>(row);
    }
    return r;
}

std::string render_confusion(const EvalReport& report) {
    std::ostringstream os;
    os << "true\\pred";
    for (int c : report.classes) os << std::setw(8) << c;
    os << '\n';
    for (std::size_t i = 0; i < report.classes.size(); ++i) {
        os << std::setw(9) << report.classes[i];
        for (long v : report.confusion[i]) os << std::setw(8) << v;
        os << '\n';
    }
    os << std::fixed << std::setprecision(4) << "accuracy " << report.accuracy << "  error " << report.error()
       << "  n " << report.n_test << '\n';
    return os.str();
}

}  // namespace groupsent
