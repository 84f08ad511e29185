#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include <json.hpp>

#include "featsel/classify.hpp"
#include "featsel/data.hpp"
#include "featsel/report.hpp"

namespace featsel {

/// Published-result checks on the bundled Penguins and Segmentation
/// fixtures. Every check uses the same protocol: a stratified split with
/// `test_fraction` and `seed`; scoring and search on the training part
/// (K-fold stratified CV where a wrapper needs it); held-out accuracy on the
/// test part.
struct ReproduceOptions {
    std::filesystem::path data_dir;
    std::uint64_t seed = 42;
    std::size_t folds = 10;
    KnnConfig knn;
    std::size_t bins = 10;
    double test_fraction = 0.5;
    std::size_t forest_trees = 100;
    std::size_t importance_repeats = 5;
};

struct Fixtures {
    Dataset segmentation;
    Dataset penguins;
};

/// Loads segmentation.csv (label "class") and penguins.csv (label
/// "species"). Throws DataError naming the missing file.
Fixtures load_fixtures(const std::filesystem::path& data_dir);

struct Check {
    std::string name;
    std::string expected;
    std::string observed;
    bool pass = false;
};

struct CriterionResult {
    int id = 0;
    std::string title;
    std::vector<Check> checks;

    bool pass() const;
};

CriterionResult check_dataset_shapes(const Fixtures& fx);
CriterionResult check_filter_agreement(const Fixtures& fx, const ReproduceOptions& o);
CriterionResult check_top10_igain(const Fixtures& fx, const ReproduceOptions& o);
CriterionResult check_hybrid_prefix(const Fixtures& fx, const ReproduceOptions& o);
CriterionResult check_wrapper_sizes(const Fixtures& fx, const ReproduceOptions& o);
CriterionResult check_tree(const Fixtures& fx, const ReproduceOptions& o);
CriterionResult check_lasso(const Fixtures& fx, const ReproduceOptions& o);
CriterionResult check_forest(const Fixtures& fx, const ReproduceOptions& o);
CriterionResult check_lda(const Fixtures& fx, const ReproduceOptions& o);
CriterionResult check_curse_demo(const ReproduceOptions& o);

/// All of the above, in criterion order.
std::vector<CriterionResult> run_published_checks(const ReproduceOptions& o);

nlohmann::json summary_json(const std::vector<CriterionResult>& results, const RunConfig& config);
/// criterion,check,expected,observed,pass
std::string summary_csv(const std::vector<CriterionResult>& results);

/// Runs every check and writes summary.json and summary.csv into `out_dir`.
std::vector<CriterionResult> reproduce_all(const ReproduceOptions& o,
                                           const std::filesystem::path& out_dir,
                                           const RunConfig& config);

} // namespace featsel
