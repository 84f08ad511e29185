#include "featsel/reproduce.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "featsel/error.hpp"
#include "featsel/filters.hpp"
#include "featsel/forest.hpp"
#include "featsel/logreg.hpp"
#include "featsel/random.hpp"
#include "featsel/transform.hpp"
#include "featsel/tree.hpp"
#include "featsel/wrappers.hpp"

namespace featsel {
namespace {

std::string num(double v) {
    std::ostringstream os;
    os.precision(6);
    os << v;
    return os.str();
}

std::string range(double lo, double hi) { return "[" + num(lo) + ", " + num(hi) + "]"; }

Check in_range(std::string name, double v, double lo, double hi) {
    return {std::move(name), range(lo, hi), num(v), v >= lo && v <= hi};
}

Check at_least(std::string name, double v, double lo) {
    return {std::move(name), ">= " + num(lo), num(v), v >= lo};
}

double holdout(const Dataset& train, const Dataset& test, const FeatureSet& subset,
               const KnnConfig& knn) {
    return holdout_accuracy(train.subset_features(subset), test.subset_features(subset), knn)
        .accuracy;
}

RankOptions rank_options(const ReproduceOptions& o) {
    RankOptions r;
    r.bins = o.bins;
    r.seed = o.seed;
    r.forest_trees = o.forest_trees;
    r.importance_repeats = o.importance_repeats;
    return r;
}

Dataset binary(const Dataset& ds, const std::string& a, const std::string& b) {
    const std::vector<Label> keep{ds.class_id(a), ds.class_id(b)};
    return ds.restrict_classes(keep);
}

} // namespace

Fixtures load_fixtures(const std::filesystem::path& data_dir) {
    auto load = [&](const char* file, const char* label) {
        const auto path = data_dir / file;
        if (!std::filesystem::exists(path)) throw DataError("missing fixture: " + path.string());
        return load_csv(path, label);
    };
    return {load("segmentation.csv", "class"), load("penguins.csv", "species")};
}

bool CriterionResult::pass() const {
    return !checks.empty() &&
           std::all_of(checks.begin(), checks.end(), [](const Check& c) { return c.pass; });
}

CriterionResult check_dataset_shapes(const Fixtures& fx) {
    CriterionResult r{1, "dataset shapes", {}};
    auto shape = [](const Dataset& d) {
        return "(" + std::to_string(d.n()) + ", " + std::to_string(d.p()) + ", " +
               std::to_string(d.num_classes()) + ")";
    };
    const std::string seg = shape(fx.segmentation);
    const std::string pen = shape(fx.penguins);
    r.checks.push_back({"segmentation (n, p, classes)", "(2310, 19, 7)", seg, seg == "(2310, 19, 7)"});
    r.checks.push_back({"penguins (n, p, classes)", "(333, 4, 3)", pen, pen == "(333, 4, 3)"});
    return r;
}

CriterionResult check_filter_agreement(const Fixtures& fx, const ReproduceOptions& o) {
    CriterionResult r{2, "filter agreement on segmentation", {}};
    const auto train = split(fx.segmentation, o.test_fraction, o.seed).first;
    const auto ro = rank_options(o);
    const auto ig = rank_features(train, RankMethod::igain, ro);
    const auto chi = rank_features(train, RankMethod::chi2, ro);
    const auto rel = rank_features(train, RankMethod::relieff, ro);
    r.checks.push_back(in_range("pearson(igain, chi2)",
                                rank_correlation(ig, chi, CorrelationKind::pearson), 0.76, 0.96));
    r.checks.push_back(in_range("spearman(relieff, igain)",
                                rank_correlation(rel, ig, CorrelationKind::spearman), 0.81, 1.01));
    return r;
}

CriterionResult check_top10_igain(const Fixtures& fx, const ReproduceOptions& o) {
    CriterionResult r{3, "top-10 igain subset vs all features", {}};
    const auto [train, test] = split(fx.segmentation, o.test_fraction, o.seed);
    const auto ig = rank_features(train, RankMethod::igain, rank_options(o));
    FeatureSet top = ig.top(10);
    std::sort(top.begin(), top.end());
    FeatureSet all(train.p());
    for (std::size_t f = 0; f < all.size(); ++f) all[f] = f;
    const double base = holdout(train, test, all, o.knn);
    const double acc = holdout(train, test, top, o.knn);
    r.checks.push_back({"|acc(top10) - acc(all)|", "<= 0.02",
                        num(std::abs(acc - base)) + " (top10 " + num(acc) + ", all " + num(base) + ")",
                        std::abs(acc - base) <= 0.02});
    return r;
}

CriterionResult check_hybrid_prefix(const Fixtures& fx, const ReproduceOptions& o) {
    CriterionResult r{4, "hybrid filter-wrapper prefix size", {}};
    const auto train = split(fx.segmentation, o.test_fraction, o.seed).first;
    const auto ig = rank_features(train, RankMethod::igain, rank_options(o));
    const auto folds = kfold(train, o.folds, o.seed);
    const auto res = hybrid_filter_wrapper(train, ig, folds, o.knn);
    r.checks.push_back(in_range("selected prefix size", static_cast<double>(res.selected.size()), 7, 11));
    return r;
}

CriterionResult check_wrapper_sizes(const Fixtures& fx, const ReproduceOptions& o) {
    CriterionResult r{5, "wrapper subset sizes on segmentation", {}};
    const auto [train, test] = split(fx.segmentation, o.test_fraction, o.seed);
    const auto folds = kfold(train, o.folds, o.seed);
    const auto fwd = sfs(train, folds, o.knn);
    const auto bwd = backward_elimination(train, folds, o.knn);
    FeatureSet all(train.p());
    for (std::size_t f = 0; f < all.size(); ++f) all[f] = f;
    const double base = holdout(train, test, all, o.knn);
    const double acc = holdout(train, test, fwd.selected, o.knn);
    r.checks.push_back(in_range("|SFS|", static_cast<double>(fwd.selected.size()), 5, 9));
    r.checks.push_back(in_range("|BE|", static_cast<double>(bwd.selected.size()), 9, 13));
    r.checks.push_back(at_least("SFS test accuracy (all-feature baseline " + num(base) + ")", acc,
                                base - 0.01));
    return r;
}

CriterionResult check_tree(const Fixtures& fx, const ReproduceOptions& o) {
    CriterionResult r{6, "unpruned tree on penguins", {}};
    const std::size_t body_mass = fx.penguins.feature_index("body_mass");
    const auto [train, test] = split(fx.penguins, o.test_fraction, o.seed);
    const auto tree = TreeModel::fit(train);
    r.checks.push_back(at_least("test accuracy", accuracy(test.y(), tree.predict(test.x())), 0.90));
    std::size_t excluded = 0;
    for (std::uint64_t s = 0; s < 10; ++s) {
        const auto tr = split(fx.penguins, o.test_fraction, o.seed + s).first;
        const auto used = TreeModel::fit(tr).used_features();
        if (!std::binary_search(used.begin(), used.end(), body_mass)) ++excluded;
    }
    r.checks.push_back({"split seeds excluding body_mass", ">= 8/10", std::to_string(excluded) + "/10",
                        excluded >= 8});
    return r;
}

CriterionResult check_lasso(const Fixtures& fx, const ReproduceOptions& o) {
    CriterionResult r{7, "lasso nonzero counts", {}};
    const auto pen = split(binary(fx.penguins, "Adelie", "Chinstrap"), o.test_fraction, o.seed).first;
    const auto seg = split(binary(fx.segmentation, "cement", "window"), o.test_fraction, o.seed).first;
    auto nnz = [](const Dataset& d, double c) {
        LogRegOptions lo;
        lo.C = c;
        return LogRegModel::fit(d, lo).nonzero().size();
    };
    const std::size_t pen1 = nnz(pen, 1.0), pen10 = nnz(pen, 10.0);
    const std::size_t seg1 = nnz(seg, 1.0), seg10 = nnz(seg, 10.0);
    r.checks.push_back({"penguins nonzeros at C=1", "2", std::to_string(pen1), pen1 == 2});
    r.checks.push_back(in_range("segmentation nonzeros at C=1", static_cast<double>(seg1), 2, 4));
    r.checks.push_back({"penguins nonzeros C=10 > C=1", "> " + std::to_string(pen1),
                        std::to_string(pen10), pen10 > pen1});
    r.checks.push_back({"segmentation nonzeros C=10 > C=1", "> " + std::to_string(seg1),
                        std::to_string(seg10), seg10 > seg1});
    return r;
}

CriterionResult check_forest(const Fixtures& fx, const ReproduceOptions& o) {
    CriterionResult r{8, "random forest OOB and importance", {}};
    const auto ro = rank_options(o);
    ForestOptions fo;
    fo.n_trees = o.forest_trees;
    fo.seed = o.seed;

    const auto seg = split(fx.segmentation, o.test_fraction, o.seed).first;
    const auto seg_forest = ForestModel::fit(seg, fo);
    r.checks.push_back(in_range("mean OOB fraction (segmentation)", seg_forest.oob_fraction(), 0.348, 0.388));

    const auto pen = split(fx.penguins, o.test_fraction, o.seed).first;
    const auto pen_forest = ForestModel::fit(pen, fo);
    const auto pen_imp =
        rf_permutation_importance(pen_forest, pen, o.importance_repeats, mix_seed(o.seed, 0x1337));
    const std::string top = pen.feature_names()[pen_imp.order.front()];
    r.checks.push_back({"top penguins feature", "flipper_length", top, top == "flipper_length"});

    const auto pen_ig = rank_features(pen, RankMethod::igain, ro);
    r.checks.push_back(in_range("pearson(rf, igain) penguins",
                                rank_correlation(pen_imp, pen_ig, CorrelationKind::pearson), 0.65, 0.95));
    const auto seg_imp =
        rf_permutation_importance(seg_forest, seg, o.importance_repeats, mix_seed(o.seed, 0x1337));
    const auto seg_ig = rank_features(seg, RankMethod::igain, ro);
    r.checks.push_back(in_range("pearson(rf, igain) segmentation",
                                rank_correlation(seg_imp, seg_ig, CorrelationKind::pearson), 0.82, 1.02));
    return r;
}

CriterionResult check_lda(const Fixtures& fx, const ReproduceOptions& o) {
    CriterionResult r{9, "LDA classifier on penguins", {}};
    const auto [train, test] = split(fx.penguins, o.test_fraction, o.seed);
    const auto clf = LdaClassifier::fit(train);
    r.checks.push_back(in_range("hold-out accuracy", accuracy(test.y(), clf.predict(test.x())), 0.94, 1.0));
    return r;
}

CriterionResult check_curse_demo(const ReproduceOptions& o) {
    CriterionResult r{12, "cosine similarity spread shrinks with dimension", {}};
    const std::vector<std::size_t> dims{5, 10, 20};
    std::size_t ok = 0;
    for (std::uint64_t s = 0; s < 100; ++s) {
        const auto st = similarity_spread_demo(dims, 1000, o.seed + s);
        if (st[0].iqr() > st[1].iqr() && st[1].iqr() > st[2].iqr()) ++ok;
    }
    r.checks.push_back({"seeds with IQR(5) > IQR(10) > IQR(20)", ">= 95/100",
                        std::to_string(ok) + "/100", ok >= 95});
    return r;
}

std::vector<CriterionResult> run_published_checks(const ReproduceOptions& o) {
    const Fixtures fx = load_fixtures(o.data_dir);
    return {check_dataset_shapes(fx),    check_filter_agreement(fx, o), check_top10_igain(fx, o),
            check_hybrid_prefix(fx, o),  check_wrapper_sizes(fx, o),    check_tree(fx, o),
            check_lasso(fx, o),          check_forest(fx, o),           check_lda(fx, o),
            check_curse_demo(o)};
}

nlohmann::json summary_json(const std::vector<CriterionResult>& results, const RunConfig& config) {
    nlohmann::json j = report_envelope(config, "reproduce-all");
    nlohmann::json list = nlohmann::json::array();
    std::size_t passed = 0;
    for (const auto& c : results) {
        nlohmann::json checks = nlohmann::json::array();
        for (const auto& ch : c.checks)
            checks.push_back({{"name", ch.name},
                              {"expected", ch.expected},
                              {"observed", ch.observed},
                              {"pass", ch.pass}});
        list.push_back({{"id", c.id}, {"title", c.title}, {"pass", c.pass()}, {"checks", checks}});
        passed += c.pass() ? 1 : 0;
    }
    j["criteria"] = list;
    j["passed"] = passed;
    j["total"] = results.size();
    return j;
}

std::string summary_csv(const std::vector<CriterionResult>& results) {
    auto quote = [](const std::string& s) {
        std::string out = "\"";
        for (char ch : s) out += ch == '"' ? std::string("\"\"") : std::string(1, ch);
        return out + "\"";
    };
    std::string out = "criterion,check,expected,observed,pass\n";
    for (const auto& c : results)
        for (const auto& ch : c.checks)
            out += std::to_string(c.id) + "," + quote(ch.name) + "," + quote(ch.expected) + "," +
                   quote(ch.observed) + "," + (ch.pass ? "true" : "false") + "\n";
    return out;
}

std::vector<CriterionResult> reproduce_all(const ReproduceOptions& o,
                                           const std::filesystem::path& out_dir,
                                           const RunConfig& config) {
    auto results = run_published_checks(o);
    write_file(out_dir / "summary.json", dump_json(summary_json(results, config)));
    write_file(out_dir / "summary.csv", summary_csv(results));
    return results;
}

} // namespace featsel
