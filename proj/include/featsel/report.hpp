#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "featsel/cfs.hpp"
#include "featsel/classify.hpp"
#include "featsel/logreg.hpp"
#include "featsel/ranking.hpp"
#include "featsel/transform.hpp"
#include "featsel/wrappers.hpp"

namespace featsel {

inline constexpr std::string_view toolkit_version = "0.1.0";

/// Everything needed to re-run a CLI invocation. Embedded in every report.
struct RunConfig {
    std::string subcommand;
    std::string data;
    std::string label = "class";
    std::uint64_t seed = 42;
    std::size_t folds = 10;
    std::size_t knn_k = 3;
    std::size_t bins = 10;
    double test_fraction = 0.5;
    std::string out = ".";
    /// Method-specific flags, keyed by long option name without dashes.
    std::map<std::string, std::string> options;

    /// Command line (without the program name) that reproduces this run.
    std::vector<std::string> to_argv() const;
};

nlohmann::json to_json(const RunConfig& c);
RunConfig run_config_from_json(const nlohmann::json& j);

/// {"kind", "version", "config"} header shared by all reports.
nlohmann::json report_envelope(const RunConfig& c, std::string_view kind);

nlohmann::json ranking_json(const FeatureRanking& r, std::span<const std::string> feature_names);
nlohmann::json subset_json(const SubsetResult& r, std::span<const std::string> feature_names,
                           std::optional<double> test_accuracy);

/// Shortest decimal text that reads back to the same double.
std::string format_double(double v);

/// step,subset_bitmask_hex,size,cv_accuracy
std::string trace_csv(const SubsetResult& r, std::size_t p);
/// step,subset_bitmask_hex,size,merit (every evaluated subset)
std::string merit_trace_csv(const MeritTrace& t, std::size_t p);
/// feature,beta,abs_beta,C
std::string coefficients_csv(const LogRegModel& m, std::span<const std::string> feature_names);
/// c1..ck,class
std::string projection_csv(const Matrix& z, std::span<const Label> y,
                           std::span<const std::string> class_names);
/// component,eigenvalue,variance_ratio,cumulative
std::string scree_csv(const LinearTransform& t);
/// dim,min,q1,median,q3,max,iqr
std::string spread_csv(std::span<const SpreadStats> stats);
/// x1..xd
std::string points_csv(const Matrix& points);

std::string dump_json(const nlohmann::json& j);

/// Writes `content` to `path`, creating parent directories. Throws
/// std::runtime_error on I/O failure.
void write_file(const std::filesystem::path& path, std::string_view content);

} // namespace featsel
