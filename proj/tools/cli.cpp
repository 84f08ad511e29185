#include "cli.hpp"

#include <algorithm>
#include <filesystem>
#include <map>
#include <sstream>

#include <CLI11.hpp>

#include "featsel/cfs.hpp"
#include "featsel/classify.hpp"
#include "featsel/data.hpp"
#include "featsel/error.hpp"
#include "featsel/filters.hpp"
#include "featsel/forest.hpp"
#include "featsel/logreg.hpp"
#include "featsel/report.hpp"
#include "featsel/reproduce.hpp"
#include "featsel/transform.hpp"
#include "featsel/tree.hpp"
#include "featsel/wrappers.hpp"

#ifndef FEATSEL_DEFAULT_DATA_DIR
#define FEATSEL_DEFAULT_DATA_DIR "data"
#endif

namespace featsel::cli {
namespace {

namespace fs = std::filesystem;
using nlohmann::json;

struct Common {
    std::string data;
    std::string label = "class";
    std::uint64_t seed = 42;
    std::size_t folds = 10;
    std::size_t knn_k = 3;
    std::size_t bins = 10;
    double test_fraction = 0.5;
    std::string out = ".";
    std::string metric = "euclidean";
    bool no_standardize = false;
};

struct Options {
    std::string method = "igain";
    std::string policy = "top_k";
    std::size_t k = 10;
    double fraction = 0.5;
    std::size_t neighbors = 10;
    std::size_t iterations = 0;
    std::size_t trees = 100;
    std::size_t repeats = 5;
    std::size_t mtry = 0;
    std::size_t stall_limit = 5;
    std::string strategy = "sfs";
    bool first_non_improving = false;
    std::string criterion = "gini";
    std::size_t max_depth = 0;
    std::vector<std::string> classes;
    std::vector<double> c_values{1.0};
    std::string penalty = "l1";
    std::size_t components = 0;
    double variance = 0.95;
    bool standardize_input = false;
    bool per_class_cov = false;
    bool weighted_within = false;
    std::string kind = "curse";
    std::vector<std::size_t> dims;
    std::size_t points = 0;
    std::string data_dir = FEATSEL_DEFAULT_DATA_DIR;
};

template <class T>
std::string join(const std::vector<T>& v) {
    std::ostringstream os;
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (i) os << ',';
        if constexpr (std::is_floating_point_v<T>)
            os << format_double(v[i]);
        else
            os << v[i];
    }
    return os.str();
}

std::string flag(bool b) { return b ? "true" : "false"; }

struct Split {
    Dataset all;
    Dataset train;
    Dataset test;
    bool has_test = false;
};

class Context {
public:
    Context(std::string sub, const Common& c, std::ostream& out) : sub_(std::move(sub)), c_(c), out_(out) {}

    const Common& common() const { return c_; }
    std::ostream& out() { return out_; }
    void set(const std::string& key, std::string value) { opts_[key] = std::move(value); }

    RunConfig config() const {
        RunConfig r;
        r.subcommand = sub_;
        r.data = c_.data;
        r.label = c_.label;
        r.seed = c_.seed;
        r.folds = c_.folds;
        r.knn_k = c_.knn_k;
        r.bins = c_.bins;
        r.test_fraction = c_.test_fraction;
        r.out = c_.out;
        r.options = opts_;
        return r;
    }

    json envelope() const { return report_envelope(config(), sub_); }

    KnnConfig knn() {
        set("metric", c_.metric);
        set("no-standardize", flag(c_.no_standardize));
        return {c_.knn_k, parse_metric(c_.metric), !c_.no_standardize};
    }

    Dataset load() const {
        if (c_.data.empty()) throw std::invalid_argument("--data is required");
        return load_csv(c_.data, c_.label);
    }

    Split split_data(Dataset ds) const {
        if (!(c_.test_fraction >= 0.0 && c_.test_fraction < 1.0))
            throw std::invalid_argument("--test-fraction must lie in [0, 1)");
        if (c_.test_fraction == 0.0) return {ds, ds, Dataset{}, false};
        auto [train, test] = split(ds, c_.test_fraction, c_.seed);
        return {std::move(ds), std::move(train), std::move(test), true};
    }

    void write(const std::string& file, std::string_view content) {
        const fs::path path = fs::path(c_.out) / file;
        write_file(path, content);
        out_ << "wrote " << path.string() << '\n';
    }

private:
    std::string sub_;
    Common c_;
    std::ostream& out_;
    std::map<std::string, std::string> opts_;
};

json names_of(const FeatureSet& s, const Dataset& ds) {
    json j = json::array();
    for (std::size_t f : s) j.push_back(ds.feature_names()[f]);
    return j;
}

json nullable(const Split& s, double v) { return s.has_test ? json(v) : json(nullptr); }

FeatureSet all_features(std::size_t p) {
    FeatureSet s(p);
    for (std::size_t f = 0; f < p; ++f) s[f] = f;
    return s;
}

double subset_holdout(const Split& s, FeatureSet subset, const KnnConfig& knn) {
    std::sort(subset.begin(), subset.end());
    return holdout_accuracy(s.train.subset_features(subset), s.test.subset_features(subset), knn)
        .accuracy;
}

RankOptions rank_options(Context& ctx, const Options& o) {
    RankOptions r;
    r.bins = ctx.common().bins;
    r.seed = ctx.common().seed;
    r.relief_neighbors = o.neighbors;
    r.relief_iterations = o.iterations;
    r.forest_trees = o.trees;
    r.importance_repeats = o.repeats;
    ctx.set("method", o.method);
    ctx.set("neighbors", std::to_string(o.neighbors));
    ctx.set("iterations", std::to_string(o.iterations));
    ctx.set("trees", std::to_string(o.trees));
    ctx.set("repeats", std::to_string(o.repeats));
    return r;
}

std::string ranking_csv(const FeatureRanking& r, const Dataset& ds) {
    std::string csv = "rank,feature,score\n";
    for (std::size_t i = 0; i < r.order.size(); ++i)
        csv += std::to_string(i + 1) + "," + ds.feature_names()[r.order[i]] + "," +
               format_double(r.scores[r.order[i]]) + "\n";
    return csv;
}

int cmd_rank(Context& ctx, const Options& o) {
    const auto ro = rank_options(ctx, o);
    const auto s = ctx.split_data(ctx.load());
    const auto r = rank_features(s.train, parse_rank_method(o.method), ro);
    json j = ctx.envelope();
    j["ranking"] = ranking_json(r, s.train.feature_names());
    const std::string stem = "rank_" + std::string(rank_method_name(parse_rank_method(o.method)));
    ctx.write(stem + ".json", dump_json(j));
    ctx.write(stem + ".csv", ranking_csv(r, s.train));
    return ok;
}

SelectionPolicy parse_policy(const Options& o) {
    if (o.policy == "top_k") return SelectionPolicy::top_k_of(o.k);
    if (o.policy == "top_fraction") return SelectionPolicy::top_fraction_of(o.fraction);
    if (o.policy == "above_half_max") return SelectionPolicy::above_half_max();
    if (o.policy == "nonzero") return SelectionPolicy::nonzero();
    throw std::invalid_argument("unknown policy: " + o.policy);
}

int cmd_select(Context& ctx, const Options& o) {
    const auto ro = rank_options(ctx, o);
    ctx.set("policy", o.policy);
    ctx.set("k", std::to_string(o.k));
    ctx.set("fraction", format_double(o.fraction));
    const auto knn = ctx.knn();
    const auto policy = parse_policy(o);
    const auto s = ctx.split_data(ctx.load());
    const auto r = rank_features(s.train, parse_rank_method(o.method), ro);
    const auto selected = apply_policy(r, policy);

    json j = ctx.envelope();
    j["ranking"] = ranking_json(r, s.train.feature_names());
    j["policy"] = o.policy;
    j["policy_result"] = selected;
    j["selected_names"] = names_of(selected, s.train);
    j["test_accuracy"] = nullable(s, s.has_test ? subset_holdout(s, selected, knn) : 0.0);
    j["test_accuracy_all"] =
        nullable(s, s.has_test ? subset_holdout(s, all_features(s.train.p()), knn) : 0.0);
    ctx.write("select_" + std::string(rank_method_name(parse_rank_method(o.method))) + ".json",
              dump_json(j));
    ctx.out() << "selected " << selected.size() << " of " << s.train.p() << " features\n";
    return ok;
}

int cmd_cfs(Context& ctx, const Options& o) {
    ctx.set("stall-limit", std::to_string(o.stall_limit));
    const auto knn = ctx.knn();
    const auto s = ctx.split_data(ctx.load());
    const auto dv = discretize_equal_frequency(s.train, ctx.common().bins);
    CfsOptions co;
    co.stall_limit = o.stall_limit;
    const auto t = cfs_search(dv, s.train.y(), co);

    json j = ctx.envelope();
    j["best_subset"] = t.best_subset;
    j["best_names"] = names_of(t.best_subset, s.train);
    j["best_merit"] = t.best_merit;
    j["final_subset"] = t.final_subset;
    j["final_names"] = names_of(t.final_subset, s.train);
    j["evaluated"] = t.steps.size();
    j["expansions"] = t.expansions.size();
    const bool usable = s.has_test && !t.best_subset.empty();
    j["test_accuracy_best"] = usable ? json(subset_holdout(s, t.best_subset, knn)) : json(nullptr);
    j["test_accuracy_final"] = s.has_test && !t.final_subset.empty()
                                   ? json(subset_holdout(s, t.final_subset, knn))
                                   : json(nullptr);
    j["test_accuracy_all"] =
        nullable(s, s.has_test ? subset_holdout(s, all_features(s.train.p()), knn) : 0.0);
    ctx.write("cfs.json", dump_json(j));
    ctx.write("cfs_trace.csv", merit_trace_csv(t, s.train.p()));
    return ok;
}

int cmd_wrap(Context& ctx, const Options& o) {
    ctx.set("strategy", o.strategy);
    ctx.set("first-non-improving", flag(o.first_non_improving));
    const auto knn = ctx.knn();
    const auto s = ctx.split_data(ctx.load());
    const auto folds = kfold(s.train, ctx.common().folds, ctx.common().seed);
    const bool complete = !o.first_non_improving;

    SubsetResult res;
    if (o.strategy == "exhaustive") {
        res = exhaustive_search(s.train, folds, knn);
    } else if (o.strategy == "sfs") {
        res = sfs(s.train, folds, knn, complete);
    } else if (o.strategy == "be") {
        res = backward_elimination(s.train, folds, knn, complete);
    } else if (o.strategy == "hybrid") {
        const auto ro = rank_options(ctx, o);
        res = hybrid_filter_wrapper(s.train, rank_features(s.train, parse_rank_method(o.method), ro),
                                    folds, knn);
    } else {
        throw std::invalid_argument("unknown strategy: " + o.strategy);
    }

    const auto all = all_features(s.train.p());
    json j = ctx.envelope();
    j["result"] = subset_json(res, s.train.feature_names(),
                              s.has_test ? std::optional(subset_holdout(s, res.selected, knn))
                                         : std::nullopt);
    j["all_features"] = {{"train_cv", evaluate_subset(s.train, all, folds, knn)},
                         {"test_accuracy", nullable(s, s.has_test ? subset_holdout(s, all, knn) : 0.0)}};
    ctx.write("wrap_" + o.strategy + ".json", dump_json(j));
    ctx.write("wrap_" + o.strategy + "_trace.csv", trace_csv(res, s.train.p()));
    ctx.out() << o.strategy << " selected " << res.selected.size() << " features\n";
    return ok;
}

int cmd_tree(Context& ctx, const Options& o) {
    ctx.set("criterion", o.criterion);
    ctx.set("max-depth", std::to_string(o.max_depth));
    TreeOptions to;
    to.criterion = parse_criterion(o.criterion);
    if (o.max_depth > 0) to.max_depth = o.max_depth;
    const auto s = ctx.split_data(ctx.load());
    const auto tree = TreeModel::fit(s.train, to);
    const auto used = tree.used_features();
    FeatureSet unused;
    for (std::size_t f = 0; f < s.train.p(); ++f)
        if (!std::binary_search(used.begin(), used.end(), f)) unused.push_back(f);

    json j = ctx.envelope();
    j["used_features"] = names_of(used, s.train);
    j["unused_features"] = names_of(unused, s.train);
    j["depth"] = tree.depth();
    j["leaves"] = tree.leaf_count();
    j["nodes"] = tree.nodes().size();
    j["train_accuracy"] = accuracy(s.train.y(), tree.predict(s.train.x()));
    j["test_accuracy"] =
        nullable(s, s.has_test ? accuracy(s.test.y(), tree.predict(s.test.x())) : 0.0);
    ctx.write("tree.json", dump_json(j));
    ctx.write("tree.txt", tree.to_text(s.train.feature_names(), s.train.class_names()));
    ctx.write("tree.dot", tree.to_dot(s.train.feature_names(), s.train.class_names()));
    return ok;
}

int cmd_lasso(Context& ctx, const Options& o) {
    ctx.set("classes", join(o.classes));
    ctx.set("C", join(o.c_values));
    ctx.set("penalty", o.penalty);
    if (o.c_values.empty()) throw std::invalid_argument("--C needs at least one value");
    Dataset ds = ctx.load();
    if (!o.classes.empty()) {
        if (o.classes.size() != 2) throw std::invalid_argument("--classes takes exactly two names");
        const std::vector<Label> keep{ds.class_id(o.classes[0]), ds.class_id(o.classes[1])};
        ds = ds.restrict_classes(keep);
    } else if (ds.num_classes() != 2) {
        throw std::invalid_argument("lasso needs a two-class problem; pass --classes A,B (data has " +
                                    std::to_string(ds.num_classes()) + " classes)");
    }
    const auto s = ctx.split_data(std::move(ds));

    json fits = json::array();
    std::string csv;
    for (double c : o.c_values) {
        LogRegOptions lo;
        lo.C = c;
        lo.penalty = parse_penalty(o.penalty);
        const auto m = LogRegModel::fit(s.train, lo);
        json coef = json::object();
        for (std::size_t f = 0; f < s.train.p(); ++f) coef[s.train.feature_names()[f]] = m.beta()[f];
        fits.push_back({{"C", c},
                        {"intercept", m.beta0()},
                        {"coefficients", coef},
                        {"nonzero", names_of(m.nonzero(), s.train)},
                        {"nonzero_count", m.nonzero().size()},
                        {"converged", m.converged()},
                        {"epochs", m.epochs()},
                        {"final_change", m.final_change()},
                        {"train_accuracy", accuracy(s.train.y(), m.predict(s.train.x()))},
                        {"test_accuracy",
                         nullable(s, s.has_test ? accuracy(s.test.y(), m.predict(s.test.x())) : 0.0)}});
        const std::string part = coefficients_csv(m, s.train.feature_names());
        csv += csv.empty() ? part : part.substr(part.find('\n') + 1);
        ctx.out() << "C=" << format_double(c) << ": " << m.nonzero().size() << " nonzero\n";
    }
    json j = ctx.envelope();
    j["classes"] = s.train.class_names();
    j["positive_class"] = s.train.class_names()[1];
    j["fits"] = fits;
    ctx.write("lasso.json", dump_json(j));
    ctx.write("lasso_coefficients.csv", csv);
    return ok;
}

int cmd_forest(Context& ctx, const Options& o) {
    ctx.set("trees", std::to_string(o.trees));
    ctx.set("mtry", std::to_string(o.mtry));
    ctx.set("repeats", std::to_string(o.repeats));
    const auto s = ctx.split_data(ctx.load());
    ForestOptions fo;
    fo.n_trees = o.trees;
    fo.seed = ctx.common().seed;
    fo.mtry = o.mtry;
    const auto forest = ForestModel::fit(s.train, fo);
    const auto oob = rf_oob_report(forest, s.train);
    const auto imp = rf_permutation_importance(forest, s.train, o.repeats,
                                               mix_seed(ctx.common().seed, 0x1337));
    json j = ctx.envelope();
    j["mtry"] = forest.mtry();
    j["oob_fraction"] = forest.oob_fraction();
    j["oob_accuracy"] = oob.accuracy;
    j["oob_covered"] = oob.covered;
    j["oob_excluded"] = oob.excluded;
    j["test_accuracy"] =
        nullable(s, s.has_test ? accuracy(s.test.y(), forest.predict(s.test.x())) : 0.0);
    j["importance"] = ranking_json(imp, s.train.feature_names());
    ctx.write("forest.json", dump_json(j));
    ctx.write("forest_importance.csv", ranking_csv(imp, s.train));
    return ok;
}

json matrix_json(const Matrix& m) {
    json rows = json::array();
    for (std::size_t i = 0; i < m.rows(); ++i) rows.push_back(std::vector<double>(m.row(i).begin(), m.row(i).end()));
    return rows;
}

int cmd_pca(Context& ctx, const Options& o) {
    ctx.set("components", std::to_string(o.components));
    ctx.set("variance", format_double(o.variance));
    ctx.set("standardize-input", flag(o.standardize_input));
    const auto s = ctx.split_data(ctx.load());
    Matrix fit_x = s.train.x();
    Matrix all_x = s.all.x();
    if (o.standardize_input) {
        const auto sc = Standardizer::fit(fit_x);
        fit_x = sc.transform(fit_x);
        all_x = sc.transform(all_x);
    }
    PcaOptions po;
    if (o.components > 0) po.k = o.components;
    po.variance_threshold = o.variance;
    const auto t = pca_fit(fit_x, po);

    json j = ctx.envelope();
    j["k"] = t.k();
    j["features"] = s.train.feature_names();
    j["eigenvalues"] = t.all_values;
    j["explained_variance_ratio"] = explained_variance_ratio(t);
    j["column_means"] = t.column_means;
    j["components"] = matrix_json(t.w);
    ctx.write("pca.json", dump_json(j));
    ctx.write("pca_scree.csv", scree_csv(t));
    ctx.write("pca_projection.csv", projection_csv(t.apply(all_x), s.all.y(), s.all.class_names()));
    return ok;
}

int cmd_lda(Context& ctx, const Options& o) {
    ctx.set("components", std::to_string(o.components));
    ctx.set("per-class-cov", flag(o.per_class_cov));
    ctx.set("weighted-within", flag(o.weighted_within));
    const auto s = ctx.split_data(ctx.load());
    LdaClassifierOptions lo;
    if (o.components > 0) lo.lda.k = o.components;
    lo.lda.class_size_weighted_within = o.weighted_within;
    lo.per_class_covariance = o.per_class_cov;
    const auto clf = LdaClassifier::fit(s.train, lo);
    const auto& t = clf.transform();

    json j = ctx.envelope();
    j["k"] = t.k();
    j["features"] = s.train.feature_names();
    j["classes"] = s.train.class_names();
    j["criterion_values"] = t.values;
    j["components"] = matrix_json(t.w);
    j["priors"] = clf.priors();
    j["train_accuracy"] = accuracy(s.train.y(), clf.predict(s.train.x()));
    j["test_accuracy"] = nullable(s, s.has_test ? accuracy(s.test.y(), clf.predict(s.test.x())) : 0.0);
    ctx.write("lda.json", dump_json(j));
    ctx.write("lda_projection.csv", projection_csv(t.apply(s.all.x()), s.all.y(), s.all.class_names()));
    return ok;
}

int cmd_demo(Context& ctx, const Options& o) {
    const bool curse = o.kind == "curse";
    if (!curse && o.kind != "sparsity") throw std::invalid_argument("unknown demo: " + o.kind);
    const std::vector<std::size_t> dims =
        !o.dims.empty() ? o.dims : curse ? std::vector<std::size_t>{5, 10, 20}
                                         : std::vector<std::size_t>{1, 2, 3};
    const std::size_t points = o.points > 0 ? o.points : curse ? 1000 : 20;
    ctx.set("kind", o.kind);
    ctx.set("dims", join(dims));
    ctx.set("points", std::to_string(points));
    const std::uint64_t seed = ctx.common().seed;

    json j = ctx.envelope();
    if (curse) {
        const auto stats = similarity_spread_demo(dims, points, seed);
        json rows = json::array();
        for (const auto& st : stats)
            rows.push_back({{"dim", st.dim}, {"min", st.min}, {"q1", st.q1}, {"median", st.median},
                            {"q3", st.q3}, {"max", st.max}, {"iqr", st.iqr()}});
        j["statistics"] = rows;
        ctx.write("demo_curse.json", dump_json(j));
        ctx.write("demo_curse.csv", spread_csv(stats));
    } else {
        const auto clouds = sparsity_demo(dims, points, seed);
        json files = json::array();
        for (std::size_t i = 0; i < clouds.size(); ++i) {
            const std::string name = "sparsity_" + std::to_string(dims[i]) + "d.csv";
            ctx.write(name, points_csv(clouds[i]));
            files.push_back(name);
        }
        j["files"] = files;
        ctx.write("demo_sparsity.json", dump_json(j));
    }
    return ok;
}

int cmd_reproduce(Context& ctx, const Options& o) {
    ctx.set("data-dir", o.data_dir);
    ctx.set("trees", std::to_string(o.trees));
    ctx.set("repeats", std::to_string(o.repeats));
    ReproduceOptions ro;
    ro.data_dir = o.data_dir;
    ro.seed = ctx.common().seed;
    ro.folds = ctx.common().folds;
    ro.knn = ctx.knn();
    ro.bins = ctx.common().bins;
    ro.test_fraction = ctx.common().test_fraction;
    ro.forest_trees = o.trees;
    ro.importance_repeats = o.repeats;
    const auto results = reproduce_all(ro, ctx.common().out, ctx.config());
    std::size_t passed = 0;
    for (const auto& r : results) {
        ctx.out() << (r.pass() ? "PASS" : "FAIL") << "  [" << r.id << "] " << r.title << '\n';
        for (const auto& c : r.checks)
            ctx.out() << "        " << c.name << ": observed " << c.observed << ", expected "
                      << c.expected << '\n';
        passed += r.pass() ? 1 : 0;
    }
    ctx.out() << passed << "/" << results.size() << " checks passed\n";
    ctx.out() << "wrote " << (fs::path(ctx.common().out) / "summary.json").string() << '\n';
    return ok;
}

void add_common(CLI::App* sub, Common& c, bool data_options) {
    auto* data = sub->add_option("--data", c.data, "CSV file with a header row");
    if (data_options) data->required();
    sub->add_option("--label", c.label, "label column name")->capture_default_str();
    sub->add_option("--test-fraction", c.test_fraction,
                    "held-out share (stratified); 0 fits on all data")
        ->capture_default_str();
    sub->add_option("--seed", c.seed, "random seed")->capture_default_str();
    sub->add_option("--folds", c.folds, "cross-validation folds")->capture_default_str();
    sub->add_option("--knn-k", c.knn_k, "k for the k-NN evaluator")->capture_default_str();
    sub->add_option("--bins", c.bins, "equal-frequency bins for chi2/igain/cfs")->capture_default_str();
    sub->add_option("--out", c.out, "output directory")->capture_default_str();
    sub->add_option("--metric", c.metric, "k-NN metric: euclidean|cosine")->capture_default_str();
    sub->add_flag("--no-standardize", c.no_standardize, "k-NN on raw feature scales");
}

void add_rank_options(CLI::App* sub, Options& o) {
    sub->add_option("--method", o.method, "chi2|igain|relieff|rf")->capture_default_str();
    sub->add_option("--neighbors", o.neighbors, "ReliefF neighbours per class")->capture_default_str();
    sub->add_option("--iterations", o.iterations, "ReliefF queries (0 = every sample)")
        ->capture_default_str();
    sub->add_option("--trees", o.trees, "forest size for rf")->capture_default_str();
    sub->add_option("--repeats", o.repeats, "permutation repeats for rf")->capture_default_str();
}

} // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Feature selection and linear transforms for labelled numeric data", "featsel"};
    app.set_version_flag("--version", std::string(toolkit_version));
    app.require_subcommand(1);
    Common c;
    Options o;

    auto* rank = app.add_subcommand("rank", "score and rank features");
    add_common(rank, c, true);
    add_rank_options(rank, o);

    auto* select = app.add_subcommand("select", "rank, then apply a selection policy");
    add_common(select, c, true);
    add_rank_options(select, o);
    select->add_option("--policy", o.policy, "top_k|top_fraction|above_half_max|nonzero")
        ->capture_default_str();
    select->add_option("--k", o.k, "features kept by top_k")->capture_default_str();
    select->add_option("--fraction", o.fraction, "share kept by top_fraction")->capture_default_str();

    auto* cfs = app.add_subcommand("cfs", "correlation-based subset search");
    add_common(cfs, c, true);
    cfs->add_option("--stall-limit", o.stall_limit, "non-improving expansions before stopping (0 = none)")
        ->capture_default_str();

    auto* wrap = app.add_subcommand("wrap", "wrapper subset search with k-NN");
    add_common(wrap, c, true);
    add_rank_options(wrap, o);
    wrap->add_option("--strategy", o.strategy, "exhaustive|sfs|be|hybrid")->capture_default_str();
    wrap->add_flag("--first-non-improving", o.first_non_improving,
                   "stop SFS/BE at the first step without improvement");

    auto* tree = app.add_subcommand("tree", "fit a classification tree");
    add_common(tree, c, true);
    tree->add_option("--criterion", o.criterion, "gini|entropy")->capture_default_str();
    tree->add_option("--max-depth", o.max_depth, "depth limit (0 = none)")->capture_default_str();

    auto* lasso = app.add_subcommand("lasso", "L1-regularised logistic regression");
    add_common(lasso, c, true);
    lasso->add_option("--classes", o.classes, "two class names, e.g. A,B")->delimiter(',');
    lasso->add_option("--C", o.c_values, "inverse penalty weights, e.g. 1,10")
        ->delimiter(',')
        ->capture_default_str();
    lasso->add_option("--penalty", o.penalty, "l1|l2")->capture_default_str();

    auto* forest = app.add_subcommand("forest", "random forest with OOB permutation importance");
    add_common(forest, c, true);
    forest->add_option("--trees", o.trees, "number of trees")->capture_default_str();
    forest->add_option("--mtry", o.mtry, "features per split (0 = floor(sqrt(p)))")->capture_default_str();
    forest->add_option("--repeats", o.repeats, "permutation repeats")->capture_default_str();

    auto* pca = app.add_subcommand("pca", "principal component analysis");
    add_common(pca, c, true);
    pca->add_option("--components", o.components, "components to keep (0 = variance threshold)")
        ->capture_default_str();
    pca->add_option("--variance", o.variance, "cumulative variance threshold")->capture_default_str();
    pca->add_flag("--standardize-input", o.standardize_input, "z-score features before PCA");

    auto* lda = app.add_subcommand("lda", "linear discriminant analysis and classifier");
    add_common(lda, c, true);
    lda->add_option("--components", o.components, "discriminants to keep (0 = classes - 1)")
        ->capture_default_str();
    lda->add_flag("--per-class-cov", o.per_class_cov, "one covariance per class");
    lda->add_flag("--weighted-within", o.weighted_within,
                  "scale each class's within-class scatter by its size");

    auto* demo = app.add_subcommand("demo", "curse-of-dimensionality demonstrations");
    add_common(demo, c, false);
    demo->add_option("kind,--kind", o.kind, "curse|sparsity")->capture_default_str();
    demo->add_option("--dims", o.dims, "dimensions, e.g. 5,10,20")->delimiter(',');
    demo->add_option("--points", o.points, "points per dimension");

    auto* repro = app.add_subcommand("reproduce-all", "run every published-result check");
    add_common(repro, c, false);
    repro->add_option("--data-dir", o.data_dir, "directory with the bundled fixtures")
        ->capture_default_str();
    repro->add_option("--trees", o.trees, "forest size")->capture_default_str();
    repro->add_option("--repeats", o.repeats, "permutation repeats")->capture_default_str();

    std::vector<const char*> argv{"featsel"};
    for (const auto& a : args) argv.push_back(a.c_str());
    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? ok : usage_error;
    }

    CLI::App* sub = app.get_subcommands().front();
    Context ctx(sub->get_name(), c, out);
    try {
        if (sub == rank) return cmd_rank(ctx, o);
        if (sub == select) return cmd_select(ctx, o);
        if (sub == cfs) return cmd_cfs(ctx, o);
        if (sub == wrap) return cmd_wrap(ctx, o);
        if (sub == tree) return cmd_tree(ctx, o);
        if (sub == lasso) return cmd_lasso(ctx, o);
        if (sub == forest) return cmd_forest(ctx, o);
        if (sub == pca) return cmd_pca(ctx, o);
        if (sub == lda) return cmd_lda(ctx, o);
        if (sub == demo) return cmd_demo(ctx, o);
        return cmd_reproduce(ctx, o);
    } catch (const std::invalid_argument& e) {
        err << "error: " << e.what() << '\n';
        return usage_error;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return data_error;
    }
}

} // namespace featsel::cli
