#include "featsel/data.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <numeric>
#include <sstream>
#include <stdexcept>
#include <unordered_map>

#include "featsel/error.hpp"
#include "featsel/log.hpp"
#include "featsel/random.hpp"

namespace featsel {

Dataset::Dataset(Matrix x, std::vector<Label> y, std::vector<std::string> feature_names,
                 std::vector<std::string> class_names)
    : x_(std::move(x)),
      y_(std::move(y)),
      feature_names_(std::move(feature_names)),
      class_names_(std::move(class_names)) {
    if (x_.rows() != y_.size()) throw DataError("dataset: row count differs from label count");
    if (x_.cols() == 0) throw DataError("dataset: no features");
    if (feature_names_.size() != x_.cols())
        throw DataError("dataset: feature name count differs from column count");
    for (Label c : y_)
        if (c >= class_names_.size()) throw DataError("dataset: label outside class list");
    for (double v : x_.data())
        if (!std::isfinite(v)) throw DataError("dataset: non-finite feature value");
}

std::vector<std::size_t> Dataset::class_counts() const {
    std::vector<std::size_t> counts(num_classes(), 0);
    for (Label c : y_) ++counts[c];
    return counts;
}

Dataset Dataset::subset_rows(std::span<const std::size_t> idx) const {
    std::vector<Label> y(idx.size());
    for (std::size_t i = 0; i < idx.size(); ++i) y[i] = y_[idx[i]];
    return Dataset(x_.select_rows(idx), std::move(y), feature_names_, class_names_);
}

Dataset Dataset::subset_features(std::span<const std::size_t> features) const {
    std::vector<std::string> names;
    names.reserve(features.size());
    for (std::size_t f : features) {
        if (f >= p()) throw std::invalid_argument("subset_features: feature index out of range");
        names.push_back(feature_names_[f]);
    }
    return Dataset(x_.select_cols(features), std::vector<Label>(y_.begin(), y_.end()),
                   std::move(names), class_names_);
}

Dataset Dataset::restrict_classes(std::span<const Label> classes) const {
    std::vector<std::size_t> remap(num_classes(), SIZE_MAX);
    std::vector<std::string> names;
    for (std::size_t i = 0; i < classes.size(); ++i) {
        if (classes[i] >= num_classes())
            throw std::invalid_argument("restrict_classes: class id out of range");
        remap[classes[i]] = i;
        names.push_back(class_names_[classes[i]]);
    }
    std::vector<std::size_t> rows;
    std::vector<Label> y;
    for (std::size_t i = 0; i < n(); ++i) {
        if (remap[y_[i]] == SIZE_MAX) continue;
        rows.push_back(i);
        y.push_back(remap[y_[i]]);
    }
    return Dataset(x_.select_rows(rows), std::move(y), feature_names_, std::move(names));
}

std::size_t Dataset::feature_index(const std::string& name) const {
    const auto it = std::find(feature_names_.begin(), feature_names_.end(), name);
    if (it == feature_names_.end()) throw std::invalid_argument("unknown feature: " + name);
    return static_cast<std::size_t>(it - feature_names_.begin());
}

Label Dataset::class_id(const std::string& name) const {
    const auto it = std::find(class_names_.begin(), class_names_.end(), name);
    if (it == class_names_.end()) throw std::invalid_argument("unknown class: " + name);
    return static_cast<Label>(it - class_names_.begin());
}

// ---------------------------------------------------------------------------
// CSV

namespace {

std::string_view trim(std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r'))
        s.remove_suffix(1);
    return s;
}

std::vector<std::string> split_fields(std::string_view line) {
    std::vector<std::string> out;
    std::string cur;
    bool quoted = false;
    for (std::size_t i = 0; i < line.size(); ++i) {
        const char ch = line[i];
        if (quoted) {
            if (ch == '"' && i + 1 < line.size() && line[i + 1] == '"') {
                cur.push_back('"');
                ++i;
            } else if (ch == '"') {
                quoted = false;
            } else {
                cur.push_back(ch);
            }
        } else if (ch == '"') {
            quoted = true;
        } else if (ch == ',') {
            out.emplace_back(trim(cur));
            cur.clear();
        } else {
            cur.push_back(ch);
        }
    }
    out.emplace_back(trim(cur));
    return out;
}

bool parse_double(std::string_view s, double& out) {
    if (!s.empty() && s.front() == '+') s.remove_prefix(1);
    if (s.empty()) return false;
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
    return ec == std::errc() && ptr == s.data() + s.size() && std::isfinite(out);
}

} // namespace

Dataset parse_csv(const std::string& text, const std::string& label_column,
                  const std::string& source) {
    std::istringstream in(text);
    std::string line;
    std::size_t line_no = 0;

    std::vector<std::string> header;
    while (std::getline(in, line)) {
        ++line_no;
        if (line_no == 1 && line.starts_with("\xEF\xBB\xBF")) line.erase(0, 3);
        if (!trim(line).empty()) {
            header = split_fields(line);
            break;
        }
    }
    if (header.empty()) throw DataError(source + ": missing header row");

    const auto label_it = std::find(header.begin(), header.end(), label_column);
    if (label_it == header.end())
        throw DataError(source + ": unknown label column '" + label_column + "'");
    const std::size_t label_col = static_cast<std::size_t>(label_it - header.begin());

    std::vector<std::string> feature_names;
    for (std::size_t c = 0; c < header.size(); ++c)
        if (c != label_col) feature_names.push_back(header[c]);
    if (feature_names.empty()) throw DataError(source + ": no feature columns");

    std::vector<double> values;
    std::vector<Label> y;
    std::vector<std::string> class_names;
    std::unordered_map<std::string, Label> class_ids;

    while (std::getline(in, line)) {
        ++line_no;
        if (trim(line).empty()) continue;
        const auto fields = split_fields(line);
        if (fields.size() != header.size())
            throw DataError(source + ": line " + std::to_string(line_no) + " has " +
                            std::to_string(fields.size()) + " fields, expected " +
                            std::to_string(header.size()));
        for (std::size_t c = 0; c < fields.size(); ++c) {
            if (c == label_col) {
                const auto [it, inserted] = class_ids.try_emplace(fields[c], class_names.size());
                if (inserted) class_names.push_back(fields[c]);
                y.push_back(it->second);
                continue;
            }
            double v;
            if (!parse_double(fields[c], v))
                throw DataError(source + ": non-numeric value '" + fields[c] + "' at line " +
                                std::to_string(line_no) + ", column '" + header[c] + "'");
            values.push_back(v);
        }
    }

    if (y.size() < 2) throw DataError(source + ": fewer than 2 samples");
    if (class_names.size() < 2) throw DataError(source + ": fewer than 2 classes");

    const std::size_t n = y.size();
    const std::size_t p = feature_names.size();
    return Dataset(Matrix(n, p, std::move(values)), std::move(y), std::move(feature_names),
                   std::move(class_names));
}

Dataset load_csv(const std::filesystem::path& path, const std::string& label_column) {
    std::ifstream f(path, std::ios::binary);
    if (!f) throw DataError("cannot open data file: " + path.string());
    std::ostringstream buf;
    buf << f.rdbuf();
    return parse_csv(buf.str(), label_column, path.string());
}

// ---------------------------------------------------------------------------
// Splits and folds

namespace {

std::vector<std::vector<std::size_t>> indices_by_class(const Dataset& ds) {
    std::vector<std::vector<std::size_t>> by_class(ds.num_classes());
    const auto y = ds.y();
    for (std::size_t i = 0; i < y.size(); ++i) by_class[y[i]].push_back(i);
    return by_class;
}

} // namespace

SplitIndices split_indices(const Dataset& ds, double test_fraction, std::uint64_t seed,
                           bool stratified) {
    if (!(test_fraction > 0.0 && test_fraction < 1.0))
        throw std::invalid_argument("split: test fraction must lie in (0, 1)");
    const std::size_t n = ds.n();
    Rng rng(seed);
    std::vector<char> is_test(n, 0);

    const auto total_test = static_cast<std::size_t>(
        std::clamp<double>(std::round(test_fraction * static_cast<double>(n)), 1.0,
                           static_cast<double>(n - 1)));

    if (stratified) {
        auto by_class = indices_by_class(ds);
        // Largest-remainder apportionment keeps every class within one
        // sample of its exact share.
        std::vector<std::size_t> quota(by_class.size());
        std::vector<std::pair<double, std::size_t>> remainders;
        std::size_t assigned = 0;
        for (std::size_t c = 0; c < by_class.size(); ++c) {
            const std::size_t nc = by_class[c].size();
            if (nc == 0) continue;
            if (nc < 2)
                throw DataError("split: class '" + ds.class_names()[c] +
                                "' has a single sample; cannot stratify");
            const double exact = test_fraction * static_cast<double>(nc);
            quota[c] = static_cast<std::size_t>(std::floor(exact));
            assigned += quota[c];
            remainders.emplace_back(exact - std::floor(exact), c);
        }
        std::stable_sort(remainders.begin(), remainders.end(),
                         [](const auto& a, const auto& b) { return a.first > b.first; });
        for (std::size_t i = 0; assigned < total_test && i < remainders.size(); ++i, ++assigned)
            ++quota[remainders[i].second];
        for (std::size_t c = 0; c < by_class.size(); ++c) {
            auto& members = by_class[c];
            if (members.empty()) continue;
            quota[c] = std::clamp<std::size_t>(quota[c], 1, members.size() - 1);
            shuffle(std::span(members), rng);
            for (std::size_t i = 0; i < quota[c]; ++i) is_test[members[i]] = 1;
        }
    } else {
        std::vector<std::size_t> order(n);
        std::iota(order.begin(), order.end(), 0);
        shuffle(std::span(order), rng);
        for (std::size_t i = 0; i < total_test; ++i) is_test[order[i]] = 1;
    }

    SplitIndices out;
    for (std::size_t i = 0; i < n; ++i) (is_test[i] ? out.test : out.train).push_back(i);
    return out;
}

std::pair<Dataset, Dataset> split(const Dataset& ds, double test_fraction, std::uint64_t seed,
                                  bool stratified) {
    const auto idx = split_indices(ds, test_fraction, seed, stratified);
    return {ds.subset_rows(idx.train), ds.subset_rows(idx.test)};
}

std::vector<std::size_t> FoldAssignment::fold_sizes() const {
    std::vector<std::size_t> sizes(k, 0);
    for (std::size_t f : fold_of) ++sizes[f];
    return sizes;
}

std::vector<std::size_t> FoldAssignment::members(std::size_t fold) const {
    std::vector<std::size_t> out;
    for (std::size_t i = 0; i < fold_of.size(); ++i)
        if (fold_of[i] == fold) out.push_back(i);
    return out;
}

std::vector<std::size_t> FoldAssignment::complement(std::size_t fold) const {
    std::vector<std::size_t> out;
    for (std::size_t i = 0; i < fold_of.size(); ++i)
        if (fold_of[i] != fold) out.push_back(i);
    return out;
}

FoldAssignment kfold(std::size_t n, std::size_t k, std::uint64_t seed) {
    if (k < 2 || k > n) throw std::invalid_argument("kfold: K must satisfy 2 <= K <= n");
    Rng rng(seed);
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    shuffle(std::span(order), rng);
    FoldAssignment fa{std::vector<std::size_t>(n), k, seed, false};
    for (std::size_t pos = 0; pos < n; ++pos) fa.fold_of[order[pos]] = pos % k;
    return fa;
}

FoldAssignment kfold(const Dataset& ds, std::size_t k, std::uint64_t seed, bool stratified) {
    const std::size_t n = ds.n();
    if (k < 2 || k > n) throw std::invalid_argument("kfold: K must satisfy 2 <= K <= n");
    if (!stratified) return kfold(n, k, seed);

    auto by_class = indices_by_class(ds);
    for (std::size_t c = 0; c < by_class.size(); ++c) {
        if (!by_class[c].empty() && by_class[c].size() < k) {
            warn("kfold: class '" + ds.class_names()[c] + "' has fewer than " +
                 std::to_string(k) + " samples; using unstratified folds");
            return kfold(n, k, seed);
        }
    }

    // Deal each shuffled class round-robin, continuing the fold counter
    // across classes so overall fold sizes also stay within one.
    Rng rng(seed);
    FoldAssignment fa{std::vector<std::size_t>(n), k, seed, true};
    std::size_t pos = 0;
    for (auto& members : by_class) {
        shuffle(std::span(members), rng);
        for (std::size_t i : members) fa.fold_of[i] = pos++ % k;
    }
    return fa;
}

// ---------------------------------------------------------------------------
// Discretization

std::uint32_t bin_of(std::span<const double> edges, double value) {
    // Number of edges strictly below `value`.
    return static_cast<std::uint32_t>(std::lower_bound(edges.begin(), edges.end(), value) -
                                      edges.begin());
}

std::vector<double> equal_frequency_edges(std::span<const double> column, std::size_t bins) {
    if (bins < 2) throw std::invalid_argument("discretize: bins must be >= 2");
    std::vector<double> sorted(column.begin(), column.end());
    std::sort(sorted.begin(), sorted.end());
    std::vector<double> edges;
    const std::size_t n = sorted.size();
    if (n == 0) return edges;
    const double top = sorted.back();
    for (std::size_t i = 1; i < bins; ++i) {
        const std::size_t upto = (i * n + bins - 1) / bins;  // ceil(i*n/bins)
        if (upto == 0) continue;
        const double e = sorted[upto - 1];
        if (e >= top) break;
        if (edges.empty() || e > edges.back()) edges.push_back(e);
    }
    return edges;
}

DiscretizedView discretize_equal_frequency(const Matrix& x, std::size_t bins) {
    if (bins < 2) throw std::invalid_argument("discretize: bins must be >= 2");
    DiscretizedView dv;
    dv.n = x.rows();
    dv.bins.resize(x.cols());
    dv.bin_edges.resize(x.cols());
    dv.bins_per_feature.resize(x.cols());
    for (std::size_t j = 0; j < x.cols(); ++j) {
        const auto col = x.column(j);
        dv.bin_edges[j] = equal_frequency_edges(col, bins);
        dv.bins_per_feature[j] = dv.bin_edges[j].size() + 1;
        dv.bins[j].resize(dv.n);
        for (std::size_t i = 0; i < dv.n; ++i) dv.bins[j][i] = bin_of(dv.bin_edges[j], col[i]);
    }
    return dv;
}

std::vector<std::vector<std::uint32_t>> DiscretizedView::apply(const Matrix& x) const {
    if (x.cols() != p()) throw std::invalid_argument("DiscretizedView::apply: width mismatch");
    std::vector<std::vector<std::uint32_t>> out(p(), std::vector<std::uint32_t>(x.rows()));
    for (std::size_t j = 0; j < p(); ++j)
        for (std::size_t i = 0; i < x.rows(); ++i) out[j][i] = bin_of(bin_edges[j], x(i, j));
    return out;
}

// ---------------------------------------------------------------------------
// Standardizer

Standardizer Standardizer::fit(const Matrix& x) {
    Standardizer s;
    const std::size_t n = x.rows();
    const std::size_t p = x.cols();
    s.means_.assign(p, 0.0);
    s.stdevs_.assign(p, 0.0);
    s.constant_.assign(p, false);
    if (n == 0) return s;
    for (std::size_t j = 0; j < p; ++j) {
        double m = 0.0;
        for (std::size_t i = 0; i < n; ++i) m += x(i, j);
        m /= static_cast<double>(n);
        double v = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            const double d = x(i, j) - m;
            v += d * d;
        }
        s.means_[j] = m;
        s.stdevs_[j] = std::sqrt(v / static_cast<double>(n));
        // Treat variance that is pure rounding noise relative to the mean as zero.
        s.constant_[j] = !(s.stdevs_[j] > 1e-12 * std::max(1.0, std::fabs(m)));
    }
    return s;
}

void Standardizer::transform_row(std::span<const double> in, std::span<double> out) const {
    for (std::size_t j = 0; j < means_.size(); ++j)
        out[j] = constant_[j] ? 0.0 : (in[j] - means_[j]) / stdevs_[j];
}

Matrix Standardizer::transform(const Matrix& x) const {
    if (x.cols() != means_.size()) throw std::invalid_argument("Standardizer: width mismatch");
    Matrix out(x.rows(), x.cols());
    for (std::size_t i = 0; i < x.rows(); ++i) transform_row(x.row(i), out.row(i));
    return out;
}

} // namespace featsel
