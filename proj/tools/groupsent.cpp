// groupsent: command-line driver for the group sentiment pipeline.

#include <algorithm>
#include <fstream>
#include <iostream>
#include <map>
#include <string>

#include "CLI11.hpp"
#include "groupsent/pipeline.hpp"
#include "json.hpp"

namespace gs = groupsent;

namespace {

std::string flag_name(std::string key) {
    std::replace(key.begin(), key.end(), '_', '-');
    return "--" + key;
}

std::string key_name(std::string key) {
    std::replace(key.begin(), key.end(), '-', '_');
    return key;
}

// Config file first, then every flag given on the command line.
gs::RunConfig resolve_config(const std::string& config_path, const std::map<std::string, std::string>& flags,
                             const CLI::App& app) {
    gs::RunConfig cfg;
    if (!config_path.empty())
        for (const auto& [k, v] : gs::load_config_file(config_path)) cfg.set(key_name(k), v);
    for (const auto& [k, v] : flags)
        if (app.get_option(flag_name(k))->count() > 0) cfg.set(k, v);
    return cfg;
}

// Writes to `path`, or stdout when it is empty or "-".
class Output {
public:
    explicit Output(const std::string& path) {
        if (!path.empty() && path != "-") {
            file_.open(path);
            if (!file_) throw gs::InvalidInput("cannot write " + path);
        }
    }
    std::ostream& stream() { return file_.is_open() ? file_ : std::cout; }

private:
    std::ofstream file_;
};

void print_report_summary(const gs::EvalReport& report, gs::IntensityMode mode) {
    std::cout << gs::render_confusion(report);
    std::cout << "chance " << gs::chance_accuracy(mode) << " (" << gs::intensity_mode_name(mode) << ")\n";
}

int fail(const char* kind, const std::string& message, int code) {
    nlohmann::json j{{"error", kind}, {"message", message}};
    std::cerr << j.dump() << '\n';
    return code;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Group sentiment pipeline: matching, features, training, evaluation, clustering"};
    app.require_subcommand(1);
    app.fallthrough();

    std::string config_path;
    app.add_option("--config", config_path, "key=value config file; command-line flags override it");

    std::map<std::string, std::string> flags;
    for (const auto& key : gs::run_config_keys()) {
        flags[key];
        app.add_option(flag_name(key), flags[key], "run setting '" + key + "'")->group("Run settings");
    }

    std::string out;
    std::string features_path;
    std::string model_path;
    std::string predictions_path;
    std::string task = "sentiment";

    auto* match = app.add_subcommand("match", "Match faces and torsos to person boxes; JSON lines per image");
    match->add_option("--out", out, "output file (default stdout)");

    auto* features = app.add_subcommand("features", "Extract the configured feature set to a CSV file");
    features->add_option("--out", out, "feature CSV")->required();

    auto* train = app.add_subcommand("train", "Train a sentiment, smile or orientation model");
    train->add_option("--task", task, "sentiment | smile | orientation")
        ->check(CLI::IsMember({"sentiment", "smile", "orientation"}));
    train->add_option("--features", features_path, "feature CSV (sentiment task)");
    train->add_option("--out", out, "model JSON")->required();

    auto* predict = app.add_subcommand("predict", "Predict labels for every row of a feature CSV");
    predict->add_option("--model", model_path, "model JSON")->required();
    predict->add_option("--features", features_path, "feature CSV")->required();
    predict->add_option("--out", out, "predictions CSV (default stdout)");

    auto* evaluate = app.add_subcommand("evaluate", "Score a predictions CSV against annotation labels");
    evaluate->add_option("--predictions", predictions_path, "predictions CSV")->required();
    evaluate->add_option("--out", out, "report JSON");

    auto* cluster = app.add_subcommand("cluster", "Place people on the ground plane and select groups");
    cluster->add_option("--out", out, "output file (default stdout)");

    auto* experiment = app.add_subcommand("experiment", "Features, split, train and evaluate in one run");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        return fail("usage", e.what(), e.get_exit_code() == 0 ? 2 : e.get_exit_code());
    }

    try {
        const auto cfg = resolve_config(config_path, flags, app);
        cfg.validate();

        if (match->parsed()) {
            Output o(out);
            for (const auto& a : gs::load_annotations(cfg.annotations))
                o.stream() << gs::person_records_json(a, gs::build_person_records(a, cfg.iou_threshold)) << '\n';
        } else if (features->parsed()) {
            const auto annotations = gs::load_annotations(cfg.annotations);
            const auto ctx = gs::make_context(cfg);
            gs::save_feature_csv(out, gs::extract_features(annotations, ctx));
        } else if (train->parsed()) {
            gs::SvmConfig svm = cfg.svm;
            svm.seed = cfg.seed;
            if (task == "smile") {
                if (cfg.smile_faces.empty()) throw gs::InvalidInput("smile training needs --smile-faces");
                gs::save_model(out, gs::train_smile_model(cfg.smile_faces, cfg.pyramid, svm));
            } else if (task == "orientation") {
                const auto annotations = gs::load_annotations(cfg.annotations);
                const auto model = gs::train_orientation(annotations, gs::directory_loader(cfg.images_root), svm);
                gs::save_orientation_model(out, model);
            } else {
                if (features_path.empty()) throw gs::InvalidInput("sentiment training needs --features");
                const auto table = gs::load_feature_csv(features_path);
                const auto annotations = gs::load_annotations(cfg.annotations);
                const auto data = gs::labelled_dataset(table, annotations, cfg.label_axis, cfg.intensity_mode);
                const auto model = gs::train(data, svm);
                gs::save_model(out, model);
                std::cout << "train accuracy " << gs::accuracy(model, data) << " on " << data.size() << " rows\n";
            }
        } else if (predict->parsed()) {
            const auto model = gs::load_model(model_path);
            const auto table = gs::load_feature_csv(features_path);
            Output o(out);
            o.stream() << "image,prediction\n";
            for (std::size_t i = 0; i < table.rows.size(); ++i)
                o.stream() << table.images[i] << ',' << gs::predict(model, table.rows[i]) << '\n';
        } else if (evaluate->parsed()) {
            std::ifstream in(predictions_path);
            if (!in) throw gs::InvalidInput("cannot open predictions " + predictions_path);
            std::map<std::string, int> truth_by_image;
            for (const auto& a : gs::load_annotations(cfg.annotations))
                truth_by_image[a.image_path] = gs::target_label(a, cfg.label_axis, cfg.intensity_mode);
            std::vector<int> truth;
            std::vector<int> predicted;
            std::string line;
            std::getline(in, line);
            while (std::getline(in, line)) {
                if (line.empty()) continue;
                const auto comma = line.rfind(',');
                if (comma == std::string::npos) throw gs::InvalidInput("bad predictions line: " + line);
                const auto image = line.substr(0, comma);
                const auto it = truth_by_image.find(image);
                if (it == truth_by_image.end()) throw gs::InvalidInput("no annotation for '" + image + "'");
                truth.push_back(it->second);
                predicted.push_back(std::stoi(line.substr(comma + 1)));
            }
            const auto report = gs::confusion_matrix(truth, predicted);
            if (!out.empty()) {
                std::ofstream(out) << gs::report_to_json(report, cfg, 0.0, 0, 0) << '\n';
            }
            print_report_summary(report, cfg.intensity_mode);
        } else if (cluster->parsed()) {
            const auto annotations = gs::load_annotations(cfg.annotations);
            gs::FeatureContext ctx{cfg, gs::directory_loader(cfg.images_root), std::nullopt, std::nullopt};
            if (!cfg.orientation_model.empty()) ctx.orientation_model = gs::load_orientation_model(cfg.orientation_model);
            Output o(out);
            for (std::size_t i = 0; i < annotations.size(); ++i)
                o.stream() << gs::grouping_json(annotations[i], gs::group_people(annotations[i], i, ctx)) << '\n';
        } else if (experiment->parsed()) {
            const auto result = gs::run_experiment(cfg);
            std::cout << "experiment " << gs::axis_name(cfg.label_axis) << ' ' << gs::intensity_mode_name(cfg.intensity_mode)
                      << ' ' << gs::feature_set_name(cfg.feature_set) << " -> " << cfg.out_dir << '\n';
            print_report_summary(result.report, cfg.intensity_mode);
        }
    } catch (const gs::InvalidInput& e) {
        return fail("invalid_input", e.what(), 2);
    } catch (const std::exception& e) {
        return fail("internal", e.what(), 1);
    }
    return 0;
}
