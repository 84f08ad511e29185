#include "featsel/tree.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>
#include <stdexcept>

namespace featsel {

Criterion parse_criterion(std::string_view name) {
    if (name == "gini") return Criterion::gini;
    if (name == "entropy") return Criterion::entropy;
    throw std::invalid_argument("unknown split criterion: " + std::string(name));
}

double impurity(std::span<const std::size_t> counts, Criterion criterion) {
    const double n = static_cast<double>(std::accumulate(counts.begin(), counts.end(),
                                                         std::size_t{0}));
    if (n == 0.0) return 0.0;
    double out = criterion == Criterion::gini ? 1.0 : 0.0;
    for (std::size_t c : counts) {
        if (c == 0) continue;
        const double p = static_cast<double>(c) / n;
        if (criterion == Criterion::gini)
            out -= p * p;
        else
            out -= p * std::log2(p);
    }
    return out;
}

namespace {

struct Split {
    std::size_t feature = TreeNode::leaf;
    double threshold = 0.0;
    double score = 0.0;  // weighted child impurity
};

class Builder {
public:
    Builder(const Dataset& ds, const TreeOptions& opts, Rng* rng)
        : ds_(ds), opts_(opts), rng_(rng), c_(ds.num_classes()) {}

    std::vector<TreeNode> build(std::vector<std::size_t> samples) {
        grow(std::move(samples), 0);
        return std::move(nodes_);
    }

private:
    std::size_t grow(std::vector<std::size_t> samples, std::size_t depth) {
        const std::size_t id = nodes_.size();
        nodes_.emplace_back();
        nodes_[id].depth = depth;
        nodes_[id].class_counts.assign(c_, 0);
        for (std::size_t i : samples) ++nodes_[id].class_counts[ds_.y()[i]];

        const auto& counts = nodes_[id].class_counts;
        const bool pure =
            std::count_if(counts.begin(), counts.end(), [](std::size_t v) { return v > 0; }) <= 1;
        const bool depth_capped = opts_.max_depth && depth >= *opts_.max_depth;
        if (pure || depth_capped || samples.size() < opts_.min_samples_split) return id;

        const Split s = best_split(samples, counts);
        if (s.feature == TreeNode::leaf) return id;

        std::vector<std::size_t> left, right;
        for (std::size_t i : samples)
            (ds_.x()(i, s.feature) <= s.threshold ? left : right).push_back(i);
        samples.clear();
        samples.shrink_to_fit();

        nodes_[id].feature = s.feature;
        nodes_[id].threshold = s.threshold;
        const std::size_t l = grow(std::move(left), depth + 1);
        const std::size_t r = grow(std::move(right), depth + 1);
        nodes_[id].left = l;
        nodes_[id].right = r;
        return id;
    }

    std::vector<std::size_t> candidate_features() {
        const std::size_t p = ds_.p();
        std::vector<std::size_t> feats(p);
        std::iota(feats.begin(), feats.end(), 0);
        if (opts_.max_features == 0 || opts_.max_features >= p || rng_ == nullptr) return feats;
        // Partial Fisher-Yates, then scan the draw in ascending order so the
        // tie rule is independent of draw order.
        for (std::size_t i = 0; i < opts_.max_features; ++i)
            std::swap(feats[i], feats[i + uniform_index(*rng_, p - i)]);
        feats.resize(opts_.max_features);
        std::sort(feats.begin(), feats.end());
        return feats;
    }

    Split best_split(const std::vector<std::size_t>& samples,
                     const std::vector<std::size_t>& counts) {
        Split best;
        bool found = false;
        const double n = static_cast<double>(samples.size());
        std::vector<std::pair<double, Label>> vals(samples.size());
        std::vector<std::size_t> left(c_), right(c_);

        for (std::size_t f : candidate_features()) {
            for (std::size_t i = 0; i < samples.size(); ++i)
                vals[i] = {ds_.x()(samples[i], f), ds_.y()[samples[i]]};
            std::sort(vals.begin(), vals.end(),
                      [](const auto& a, const auto& b) { return a.first < b.first; });
            if (vals.front().first == vals.back().first) continue;

            std::fill(left.begin(), left.end(), 0);
            right = counts;
            for (std::size_t i = 0; i + 1 < vals.size(); ++i) {
                ++left[vals[i].second];
                --right[vals[i].second];
                if (vals[i].first == vals[i + 1].first) continue;
                const double nl = static_cast<double>(i + 1);
                const double score = (nl * impurity(left, opts_.criterion) +
                                      (n - nl) * impurity(right, opts_.criterion)) / n;
                if (!found || score < best.score) {
                    double t = 0.5 * (vals[i].first + vals[i + 1].first);
                    if (!(t < vals[i + 1].first)) t = vals[i].first;
                    best = {f, t, score};
                    found = true;
                }
            }
        }
        return best;
    }

    const Dataset& ds_;
    const TreeOptions& opts_;
    Rng* rng_;
    std::size_t c_;
    std::vector<TreeNode> nodes_;
};

} // namespace

TreeModel TreeModel::fit_indices(const Dataset& train, std::span<const std::size_t> samples,
                                 const TreeOptions& opts, Rng* rng) {
    if (samples.empty()) throw std::invalid_argument("tree_fit: no training samples");
    if (opts.min_samples_split < 2) throw std::invalid_argument("tree_fit: min_samples_split < 2");
    TreeModel m;
    m.num_features_ = train.p();
    m.num_classes_ = train.num_classes();
    m.nodes_ = Builder(train, opts, rng).build({samples.begin(), samples.end()});
    return m;
}

TreeModel TreeModel::fit(const Dataset& train, const TreeOptions& opts) {
    if (train.n() < 2) throw std::invalid_argument("tree_fit: need at least 2 samples");
    std::vector<std::size_t> all(train.n());
    std::iota(all.begin(), all.end(), 0);
    return fit_indices(train, all, opts, nullptr);
}

Label TreeModel::predict_one(std::span<const double> x) const {
    if (x.size() != num_features_) throw std::invalid_argument("tree predict: width mismatch");
    std::size_t id = 0;
    while (!nodes_[id].is_leaf())
        id = x[nodes_[id].feature] <= nodes_[id].threshold ? nodes_[id].left : nodes_[id].right;
    const auto& c = nodes_[id].class_counts;
    return static_cast<Label>(std::max_element(c.begin(), c.end()) - c.begin());
}

std::vector<Label> TreeModel::predict(const Matrix& x) const {
    std::vector<Label> out(x.rows());
    for (std::size_t i = 0; i < x.rows(); ++i) out[i] = predict_one(x.row(i));
    return out;
}

FeatureSet TreeModel::used_features() const {
    std::vector<bool> used(num_features_, false);
    for (const auto& n : nodes_)
        if (!n.is_leaf()) used[n.feature] = true;
    FeatureSet out;
    for (std::size_t f = 0; f < used.size(); ++f)
        if (used[f]) out.push_back(f);
    return out;
}

std::size_t TreeModel::depth() const {
    std::size_t d = 0;
    for (const auto& n : nodes_) d = std::max(d, n.depth);
    return d;
}

std::size_t TreeModel::leaf_count() const {
    return static_cast<std::size_t>(
        std::count_if(nodes_.begin(), nodes_.end(), [](const TreeNode& n) { return n.is_leaf(); }));
}

namespace {

std::string counts_str(const std::vector<std::size_t>& c) {
    std::ostringstream os;
    os << '[';
    for (std::size_t i = 0; i < c.size(); ++i) os << (i ? ", " : "") << c[i];
    os << ']';
    return os.str();
}

std::string majority(const TreeNode& n, std::span<const std::string> class_names) {
    const auto it = std::max_element(n.class_counts.begin(), n.class_counts.end());
    return class_names[static_cast<std::size_t>(it - n.class_counts.begin())];
}

} // namespace

std::string TreeModel::to_text(std::span<const std::string> feature_names,
                               std::span<const std::string> class_names) const {
    std::ostringstream os;
    os.precision(6);
    auto rec = [&](auto&& self, std::size_t id, std::size_t indent) -> void {
        const auto& n = nodes_[id];
        const std::string pad(indent * 2, ' ');
        if (n.is_leaf()) {
            os << pad << "class: " << majority(n, class_names) << ' ' << counts_str(n.class_counts)
               << '\n';
            return;
        }
        os << pad << feature_names[n.feature] << " <= " << n.threshold << '\n';
        self(self, n.left, indent + 1);
        os << pad << feature_names[n.feature] << " > " << n.threshold << '\n';
        self(self, n.right, indent + 1);
    };
    rec(rec, 0, 0);
    return os.str();
}

std::string TreeModel::to_dot(std::span<const std::string> feature_names,
                              std::span<const std::string> class_names) const {
    std::ostringstream os;
    os.precision(6);
    os << "digraph tree {\n  node [shape=box];\n";
    for (std::size_t id = 0; id < nodes_.size(); ++id) {
        const auto& n = nodes_[id];
        os << "  n" << id << " [label=\"";
        if (!n.is_leaf()) os << feature_names[n.feature] << " <= " << n.threshold << "\\n";
        os << "samples = " << counts_str(n.class_counts) << "\\nclass = "
           << majority(n, class_names) << "\"];\n";
    }
    for (std::size_t id = 0; id < nodes_.size(); ++id) {
        const auto& n = nodes_[id];
        if (n.is_leaf()) continue;
        os << "  n" << id << " -> n" << n.left << " [label=\"yes\"];\n";
        os << "  n" << id << " -> n" << n.right << " [label=\"no\"];\n";
    }
    os << "}\n";
    return os.str();
}

} // namespace featsel
