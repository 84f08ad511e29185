#include "featsel/report.hpp"

#include <charconv>
#include <fstream>
#include <stdexcept>

namespace featsel {

std::vector<std::string> RunConfig::to_argv() const {
    std::vector<std::string> a{subcommand};
    auto add = [&](const std::string& flag, const std::string& value) {
        a.push_back("--" + flag);
        a.push_back(value);
    };
    if (!data.empty()) add("data", data);
    add("label", label);
    add("seed", std::to_string(seed));
    add("folds", std::to_string(folds));
    add("knn-k", std::to_string(knn_k));
    add("bins", std::to_string(bins));
    add("test-fraction", format_double(test_fraction));
    add("out", out);
    // Boolean options are flags: "true" replays as a bare switch, "false" and
    // empty values are omitted.
    for (const auto& [k, v] : options) {
        if (v == "true")
            a.push_back("--" + k);
        else if (v != "false" && !v.empty())
            add(k, v);
    }
    return a;
}

nlohmann::json to_json(const RunConfig& c) {
    return {{"subcommand", c.subcommand}, {"data", c.data},
            {"label", c.label},           {"seed", c.seed},
            {"folds", c.folds},           {"knn_k", c.knn_k},
            {"bins", c.bins},             {"test_fraction", c.test_fraction},
            {"out", c.out},               {"options", c.options},
            {"argv", c.to_argv()}};
}

RunConfig run_config_from_json(const nlohmann::json& j) {
    RunConfig c;
    c.subcommand = j.at("subcommand").get<std::string>();
    c.data = j.at("data").get<std::string>();
    c.label = j.at("label").get<std::string>();
    c.seed = j.at("seed").get<std::uint64_t>();
    c.folds = j.at("folds").get<std::size_t>();
    c.knn_k = j.at("knn_k").get<std::size_t>();
    c.bins = j.at("bins").get<std::size_t>();
    c.test_fraction = j.at("test_fraction").get<double>();
    c.out = j.at("out").get<std::string>();
    c.options = j.at("options").get<std::map<std::string, std::string>>();
    return c;
}

nlohmann::json report_envelope(const RunConfig& c, std::string_view kind) {
    return {{"kind", kind}, {"version", toolkit_version}, {"config", to_json(c)}};
}

nlohmann::json ranking_json(const FeatureRanking& r, std::span<const std::string> feature_names) {
    nlohmann::json features = nlohmann::json::array();
    for (std::size_t rank = 0; rank < r.order.size(); ++rank) {
        const std::size_t f = r.order[rank];
        features.push_back({{"rank", rank + 1},
                            {"index", f},
                            {"name", feature_names[f]},
                            {"score", r.scores[f]}});
    }
    nlohmann::json j{{"method", r.method},
                     {"scores", r.scores},
                     {"order", r.order},
                     {"features", features}};
    j["bins"] = r.bins ? nlohmann::json(*r.bins) : nlohmann::json(nullptr);
    j["seed"] = r.seed ? nlohmann::json(*r.seed) : nlohmann::json(nullptr);
    return j;
}

nlohmann::json subset_json(const SubsetResult& r, std::span<const std::string> feature_names,
                           std::optional<double> test_accuracy) {
    std::vector<std::string> names;
    for (std::size_t f : r.selected) names.push_back(feature_names[f]);
    nlohmann::json j{{"selected", r.selected},
                     {"selected_names", names},
                     {"train_cv", r.selected_accuracy},
                     {"stopping_rule", r.stopping_rule},
                     {"classifier",
                      {{"k", r.classifier.k},
                       {"metric", metric_name(r.classifier.metric)},
                       {"standardize", r.classifier.standardize}}},
                     {"folds", r.folds},
                     {"fold_seed", r.fold_seed},
                     {"trace_length", r.trace.size()}};
    j["test_accuracy"] = test_accuracy ? nlohmann::json(*test_accuracy) : nlohmann::json(nullptr);
    return j;
}

std::string format_double(double v) {
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof buf, v);
    return {buf, res.ptr};
}

std::string trace_csv(const SubsetResult& r, std::size_t p) {
    std::string out = "step,subset_bitmask_hex,size,cv_accuracy\n";
    for (std::size_t i = 0; i < r.trace.size(); ++i) {
        const auto& s = r.trace[i];
        out += std::to_string(i + 1) + "," + subset_mask_hex(s.subset, p) + "," +
               std::to_string(s.subset.size()) + "," + format_double(s.cv_accuracy) + "\n";
    }
    return out;
}

std::string merit_trace_csv(const MeritTrace& t, std::size_t p) {
    std::string out = "step,subset_bitmask_hex,size,merit\n";
    for (std::size_t i = 0; i < t.steps.size(); ++i) {
        const auto& s = t.steps[i];
        out += std::to_string(i + 1) + "," + subset_mask_hex(s.subset, p) + "," +
               std::to_string(s.subset.size()) + "," + format_double(s.merit) + "\n";
    }
    return out;
}

std::string coefficients_csv(const LogRegModel& m, std::span<const std::string> feature_names) {
    std::string out = "feature,beta,abs_beta,C\n";
    const std::string c = format_double(m.C());
    for (std::size_t j = 0; j < m.beta().size(); ++j) {
        const double b = m.beta()[j];
        out += feature_names[j] + "," + format_double(b) + "," + format_double(std::abs(b)) + "," +
               c + "\n";
    }
    return out;
}

std::string projection_csv(const Matrix& z, std::span<const Label> y,
                           std::span<const std::string> class_names) {
    std::string out;
    for (std::size_t j = 0; j < z.cols(); ++j) out += "c" + std::to_string(j + 1) + ",";
    out += "class\n";
    for (std::size_t i = 0; i < z.rows(); ++i) {
        for (std::size_t j = 0; j < z.cols(); ++j) out += format_double(z(i, j)) + ",";
        out += class_names[y[i]] + "\n";
    }
    return out;
}

std::string scree_csv(const LinearTransform& t) {
    double total = 0.0;
    for (double v : t.all_values) total += v;
    std::string out = "component,eigenvalue,variance_ratio,cumulative\n";
    double cum = 0.0;
    for (std::size_t i = 0; i < t.all_values.size(); ++i) {
        const double ratio = total > 0.0 ? t.all_values[i] / total : 0.0;
        cum += ratio;
        out += std::to_string(i + 1) + "," + format_double(t.all_values[i]) + "," +
               format_double(ratio) + "," + format_double(cum) + "\n";
    }
    return out;
}

std::string spread_csv(std::span<const SpreadStats> stats) {
    std::string out = "dim,min,q1,median,q3,max,iqr\n";
    for (const auto& s : stats)
        out += std::to_string(s.dim) + "," + format_double(s.min) + "," + format_double(s.q1) +
               "," + format_double(s.median) + "," + format_double(s.q3) + "," +
               format_double(s.max) + "," + format_double(s.iqr()) + "\n";
    return out;
}

std::string points_csv(const Matrix& points) {
    std::string out;
    for (std::size_t j = 0; j < points.cols(); ++j)
        out += (j ? ",x" : "x") + std::to_string(j + 1);
    out += "\n";
    for (std::size_t i = 0; i < points.rows(); ++i) {
        for (std::size_t j = 0; j < points.cols(); ++j)
            out += (j ? "," : "") + format_double(points(i, j));
        out += "\n";
    }
    return out;
}

std::string dump_json(const nlohmann::json& j) { return j.dump(2) + "\n"; }

void write_file(const std::filesystem::path& path, std::string_view content) {
    if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
    std::ofstream f(path, std::ios::binary);
    if (!f) throw std::runtime_error("cannot open " + path.string() + " for writing");
    f.write(content.data(), static_cast<std::streamsize>(content.size()));
    if (!f) throw std::runtime_error("write failed: " + path.string());
}

} // namespace featsel
