#include "groupsent/classifier.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <numeric>
#include <sstream>

#include "groupsent/rng.hpp"
#include "json.hpp"

namespace groupsent {

using nlohmann::json;

std::vector<int> Dataset::class_set() const {
    std::vector<int> c(labels);
    std::sort(c.begin(), c.end());
    c.erase(std::unique(c.begin(), c.end()), c.end());
    return c;
}

void Dataset::validate() const {
    if (labels.empty()) throw InvalidInput("dataset is empty");
    if (features.size() != labels.size()) throw InvalidInput("dataset has mismatched feature and label counts");
    const std::size_t d = dimension();
    for (std::size_t i = 0; i < features.size(); ++i) {
        if (features[i].size() != d)
            throw InvalidInput("dataset row " + std::to_string(i) + " has length " + std::to_string(features[i].size()) +
                               ", expected " + std::to_string(d));
        for (double v : features[i])
            if (!std::isfinite(v)) throw InvalidInput("dataset row " + std::to_string(i) + " has a non-finite value");
    }
}

void Dataset::add(std::vector<double> row, int label) {
    features.push_back(std::move(row));
    labels.push_back(label);
}

Dataset Dataset::subset(std::span<const std::size_t> rows) const {
    Dataset out;
    for (auto r : rows) out.add(features[r], labels[r]);
    return out;
}

std::vector<double> standardize(std::span<const double> x, std::span<const double> mean, std::span<const double> std) {
    if (x.size() != mean.size() || x.size() != std.size())
        throw InvalidInput("standardize: dimension mismatch (" + std::to_string(x.size()) + " vs " +
                           std::to_string(mean.size()) + ")");
    std::vector<double> out(x.size());
    for (std::size_t j = 0; j < x.size(); ++j) out[j] = (x[j] - mean[j]) / std[j];
    return out;
}

Standardization fit_standardization(const Dataset& data) {
    const std::size_t d = data.dimension();
    const double n = static_cast<double>(data.size());
    Standardization s{std::vector<double>(d, 0.0), std::vector<double>(d, 0.0)};
    for (const auto& row : data.features)
        for (std::size_t j = 0; j < d; ++j) s.mean[j] += row[j];
    for (double& m : s.mean) m /= n;
    for (const auto& row : data.features)
        for (std::size_t j = 0; j < d; ++j) {
            const double dev = row[j] - s.mean[j];
            s.std[j] += dev * dev;
        }
    for (double& v : s.std) {
        v = std::sqrt(v / n);
        if (!(v > 0.0)) v = 1.0;
    }
    return s;
}

namespace {

double dot(std::span<const double> a, std::span<const double> b) noexcept {
    double acc = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) acc += a[i] * b[i];
    return acc;
}

}  // namespace

double binary_objective(std::span<const std::vector<double>> rows, std::span<const double> targets,
                        std::span<const double> w, double b, double lambda) {
    double loss = 0.0;
    for (std::size_t i = 0; i < rows.size(); ++i) loss += std::max(0.0, 1.0 - targets[i] * (dot(w, rows[i]) + b));
    return 0.5 * lambda * dot(w, w) + loss / static_cast<double>(rows.size());
}

LinearModel train(const Dataset& data, const SvmConfig& cfg) {
    data.validate();
    if (data.size() < 2) throw InvalidInput("training needs at least 2 examples");
    const auto classes = data.class_set();
    if (classes.size() < 2) throw InvalidInput("training needs at least 2 distinct classes");
    if (!(cfg.lambda > 0.0) || cfg.epochs < 1 || !(cfg.eta0 > 0.0))
        throw InvalidInput("svm config needs lambda > 0, epochs >= 1, eta0 > 0");

    const auto stats = fit_standardization(data);
    std::vector<std::vector<double>> rows;
    rows.reserve(data.size());
    for (const auto& r : data.features) rows.push_back(standardize(r, stats.mean, stats.std));

    LinearModel model;
    model.classes = classes;
    model.feature_mean = stats.mean;
    model.feature_std = stats.std;
    model.config = cfg;

    const std::size_t d = data.dimension();
    const std::size_t n = data.size();
    for (std::size_t c = 0; c < classes.size(); ++c) {
        std::vector<double> w(d, 0.0);
        double b = 0.0;
        SplitMix64 rng(derive_seed(cfg.seed, c));
        std::vector<std::size_t> order(n);
        std::iota(order.begin(), order.end(), std::size_t{0});
        std::uint64_t t = 0;
        for (int epoch = 0; epoch < cfg.epochs; ++epoch) {
            shuffle(std::span<std::size_t>(order), rng);
            for (std::size_t i : order) {
                const double y = data.labels[i] == classes[c] ? 1.0 : -1.0;
                const double eta = cfg.eta0 / (1.0 + cfg.lambda * static_cast<double>(t));
                const auto& x = rows[i];
                const double margin = y * (dot(w, x) + b);
                const double shrink = 1.0 - eta * cfg.lambda;
                for (double& wj : w) wj *= shrink;
                if (margin < 1.0) {
                    for (std::size_t j = 0; j < d; ++j) w[j] += eta * y * x[j];
                    b += eta * y;
                }
                ++t;
            }
        }
        model.weights.push_back(std::move(w));
        model.bias.push_back(b);
    }
    return model;
}

std::vector<double> decision_values(const LinearModel& model, std::span<const double> x) {
    if (x.size() != model.dimension())
        throw InvalidInput("feature vector has length " + std::to_string(x.size()) + ", model expects " +
                           std::to_string(model.dimension()));
    const auto z = standardize(x, model.feature_mean, model.feature_std);
    std::vector<double> out(model.classes.size());
    for (std::size_t c = 0; c < out.size(); ++c) out[c] = dot(model.weights[c], z) + model.bias[c];
    return out;
}

int predict(const LinearModel& model, std::span<const double> x) {
    const auto values = decision_values(model, x);
    std::size_t best = 0;
    for (std::size_t c = 1; c < values.size(); ++c) {
        const bool better = values[c] > values[best] ||
                            (values[c] == values[best] && model.classes[c] < model.classes[best]);
        if (better) best = c;
    }
    return model.classes[best];
}

double accuracy(const LinearModel& model, const Dataset& data) {
    if (data.size() == 0) return 0.0;
    std::size_t correct = 0;
    for (std::size_t i = 0; i < data.size(); ++i) correct += predict(model, data.features[i]) == data.labels[i] ? 1 : 0;
    return static_cast<double>(correct) / static_cast<double>(data.size());
}

Split split(const Dataset& data, double test_fraction, std::uint64_t seed) {
    if (!(test_fraction > 0.0 && test_fraction < 1.0)) throw InvalidInput("test fraction must be in (0,1)");
    SplitMix64 rng(seed);
    std::map<int, std::vector<std::size_t>> by_class;
    for (std::size_t i = 0; i < data.size(); ++i) by_class[data.labels[i]].push_back(i);
    const bool stratified =
        std::all_of(by_class.begin(), by_class.end(), [](const auto& kv) { return kv.second.size() >= 2; });

    Split s;
    auto take = [&](std::vector<std::size_t> rows, std::size_t n_test) {
        shuffle(std::span<std::size_t>(rows), rng);
        s.test_rows.insert(s.test_rows.end(), rows.begin(), rows.begin() + static_cast<std::ptrdiff_t>(n_test));
        s.train_rows.insert(s.train_rows.end(), rows.begin() + static_cast<std::ptrdiff_t>(n_test), rows.end());
    };
    auto test_count = [&](std::size_t n) -> std::size_t {
        if (n < 2) return 0;
        const auto k = static_cast<std::size_t>(std::lround(test_fraction * static_cast<double>(n)));
        return std::clamp<std::size_t>(k, stratified ? 0 : 1, n - 1);
    };

    if (stratified) {
        for (const auto& kv : by_class) take(kv.second, test_count(kv.second.size()));
    } else {
        std::vector<std::size_t> all(data.size());
        std::iota(all.begin(), all.end(), std::size_t{0});
        take(all, test_count(all.size()));
    }
    std::sort(s.train_rows.begin(), s.train_rows.end());
    std::sort(s.test_rows.begin(), s.test_rows.end());
    s.train = data.subset(s.train_rows);
    s.test = data.subset(s.test_rows);
    return s;
}

std::string model_to_json(const LinearModel& model, std::span<const std::string> class_names) {
    json j;
    j["format_version"] = 1;
    if (!class_names.empty()) {
        if (class_names.size() != model.classes.size()) throw InvalidInput("class name count does not match classes");
        j["classes"] = std::vector<std::string>(class_names.begin(), class_names.end());
    } else {
        j["classes"] = model.classes;
    }
    j["mean"] = model.feature_mean;
    j["std"] = model.feature_std;
    j["weights"] = model.weights;
    j["bias"] = model.bias;
    j["config"] = {{"lambda", model.config.lambda},
                   {"epochs", model.config.epochs},
                   {"eta0", model.config.eta0},
                   {"seed", model.config.seed}};
    return j.dump(1);
}

void save_model(const std::filesystem::path& path, const LinearModel& model, std::span<const std::string> class_names) {
    std::ofstream out(path);
    if (!out) throw InvalidInput("cannot write model file " + path.string());
    out << model_to_json(model, class_names) << '\n';
}

LinearModel model_from_json(const std::string& text, std::span<const std::string> class_names) {
    LinearModel m;
    try {
        const json j = json::parse(text);
        if (j.at("format_version").get<int>() != 1) throw InvalidInput("unsupported model format_version");
        for (const auto& c : j.at("classes")) {
            if (c.is_string()) {
                const auto name = c.get<std::string>();
                const auto it = std::find(class_names.begin(), class_names.end(), name);
                if (it == class_names.end()) throw InvalidInput("unknown class name '" + name + "' in model");
                m.classes.push_back(static_cast<int>(it - class_names.begin()));
            } else {
                m.classes.push_back(c.get<int>());
            }
        }
        m.feature_mean = j.at("mean").get<std::vector<double>>();
        m.feature_std = j.at("std").get<std::vector<double>>();
        m.weights = j.at("weights").get<std::vector<std::vector<double>>>();
        m.bias = j.at("bias").get<std::vector<double>>();
        const auto& cfg = j.at("config");
        m.config = {cfg.at("lambda").get<double>(), cfg.at("epochs").get<int>(), cfg.at("eta0").get<double>(),
                    cfg.at("seed").get<std::uint64_t>()};
    } catch (const json::exception& e) {
        throw InvalidInput(std::string("malformed model file: ") + e.what());
    }
    const std::size_t d = m.feature_mean.size();
    if (m.classes.empty() || m.weights.size() != m.classes.size() || m.bias.size() != m.classes.size() ||
        m.feature_std.size() != d)
        throw InvalidInput("model file has inconsistent array lengths");
    if (!std::is_sorted(m.classes.begin(), m.classes.end())) throw InvalidInput("model classes must be sorted");
    for (const auto& w : m.weights)
        if (w.size() != d) throw InvalidInput("model weight vector has wrong length");
    for (double s : m.feature_std)
        if (!(s > 0.0)) throw InvalidInput("model std entries must be positive");
    return m;
}

LinearModel load_model(const std::filesystem::path& path, std::span<const std::string> class_names) {
    std::ifstream in(path);
    if (!in) throw InvalidInput("cannot open model file " + path.string());
    std::stringstream ss;
    ss << in.rdbuf();
    return model_from_json(ss.str(), class_names);
}

}  // namespace groupsent
