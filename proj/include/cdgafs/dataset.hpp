#pragma once

#include "cdgafs/core.hpp"
#include "cdgafs/rng.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <charconv>
#include <cstdint>
#include <fstream>
#include <numeric>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

namespace cdgafs {

/// A tabular classification dataset: p patterns by n real-valued features,
/// with dense integer class labels. Missing cells are stored as NaN until
/// impute_missing() replaces them.
struct Dataset {
    Matrix features;                        // p x n
    std::vector<int> labels;                // length p, values in [0, class_count)
    std::vector<std::string> feature_names; // length n
    std::vector<std::string> class_names;   // length class_count, original label text
    int class_count = 0;

    std::size_t pattern_count() const { return features.rows(); }
    std::size_t feature_count() const { return features.cols(); }

    std::size_t missing_count() const {
        std::size_t c = 0;
        for (std::size_t r = 0; r < features.rows(); ++r) {
            for (double v : features.row(r)) {
                if (is_missing_value(v)) ++c;
            }
        }
        return c;
    }

    std::vector<std::size_t> class_sizes() const {
        std::vector<std::size_t> sizes(static_cast<std::size_t>(class_count), 0);
        for (int l : labels) ++sizes[static_cast<std::size_t>(l)];
        return sizes;
    }

    /// Copy of this dataset restricted to the given feature columns.
    Dataset project(const std::vector<int>& columns) const {
        Dataset out;
        out.features = Matrix(features.rows(), columns.size());
        for (std::size_t r = 0; r < features.rows(); ++r) {
            for (std::size_t j = 0; j < columns.size(); ++j) {
                out.features(r, j) = features(r, static_cast<std::size_t>(columns[j]));
            }
        }
        out.labels = labels;
        out.class_names = class_names;
        out.class_count = class_count;
        out.feature_names.reserve(columns.size());
        for (int c : columns) out.feature_names.push_back(feature_names[static_cast<std::size_t>(c)]);
        return out;
    }

    /// Subset of the patterns, all features kept.
    Dataset take_rows(const std::vector<std::size_t>& rows) const {
        Dataset out;
        out.features = Matrix(rows.size(), features.cols());
        out.labels.reserve(rows.size());
        for (std::size_t i = 0; i < rows.size(); ++i) {
            for (std::size_t c = 0; c < features.cols(); ++c) {
                out.features(i, c) = features(rows[i], c);
            }
            out.labels.push_back(labels[rows[i]]);
        }
        out.feature_names = feature_names;
        out.class_names = class_names;
        out.class_count = class_count;
        return out;
    }

    friend bool operator==(const Dataset& a, const Dataset& b) {
        return a.features == b.features && a.labels == b.labels &&
               a.feature_names == b.feature_names && a.class_names == b.class_names &&
               a.class_count == b.class_count;
    }
};

/// Disjoint train/validation/test partition of one dataset.
struct SplitDataset {
    Dataset train;
    Dataset validation;
    Dataset test;
    std::uint64_t split_seed = 0;
};

namespace detail {

inline std::string_view trim(std::string_view s) {
    while (!s.empty() && (std::isspace(static_cast<unsigned char>(s.front())) != 0)) s.remove_prefix(1);
    while (!s.empty() && (std::isspace(static_cast<unsigned char>(s.back())) != 0)) s.remove_suffix(1);
    return s;
}

inline bool is_missing_marker(std::string_view cell) {
    if (cell.empty() || cell == "?") return true;
    if (cell.size() == 2 && (cell[0] == 'n' || cell[0] == 'N') && (cell[1] == 'a' || cell[1] == 'A')) {
        return true;
    }
    return false;
}

inline std::optional<double> parse_number(std::string_view cell) {
    double value = 0.0;
    const char* first = cell.data();
    const char* last = cell.data() + cell.size();
    if (first != last && *first == '+') ++first; // from_chars rejects a leading '+'
    auto [ptr, ec] = std::from_chars(first, last, value);
    if (ec != std::errc() || ptr != last || first == last) return std::nullopt;
    return value;
}

inline std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> cells;
    std::string::size_type start = 0;
    while (true) {
        const auto pos = line.find(',', start);
        if (pos == std::string::npos) {
            cells.emplace_back(trim(std::string_view(line).substr(start)));
            break;
        }
        cells.emplace_back(trim(std::string_view(line).substr(start, pos - start)));
        start = pos + 1;
    }
    return cells;
}

} // namespace detail

/// Selects the label column of a CSV file: by 0-based index, by header name,
/// or the last column when left empty.
struct LabelSelector {
    std::string spec; // "" = last column

    static LabelSelector last_column() { return LabelSelector{}; }
    static LabelSelector by_index(int i) { return LabelSelector{std::to_string(i)}; }
    static LabelSelector by_name(std::string name) { return LabelSelector{std::move(name)}; }
};

/// Loads a comma-separated classification dataset. The first row is treated
/// as a header when it contains any cell that is neither numeric nor a
/// missing-value marker. Missing markers (empty, "?", "NA" case-insensitive)
/// become NaN cells; labels are mapped to dense ids in order of first
/// appearance.
inline Dataset load_csv(const std::string& path, const LabelSelector& label = {}) {
    std::ifstream in(path);
    if (!in) throw ValidationError("cannot open dataset file: " + path);

    std::vector<std::vector<std::string>> rows;
    std::string line;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty() && in.peek() == std::char_traits<char>::eof()) break;
        rows.push_back(detail::split_csv_line(line));
    }
    if (rows.empty()) throw ParseError("empty dataset file: " + path);

    const std::size_t arity = rows.front().size();
    if (arity < 2) throw ParseError(path + ": rows need at least one feature and one label column");

    // Resolve the label column first: header auto-detection must ignore it,
    // since class labels are routinely non-numeric strings.
    std::size_t label_col = arity - 1;
    bool label_by_name = false;
    if (!label.spec.empty()) {
        int idx = 0;
        auto [ptr, ec] = std::from_chars(label.spec.data(), label.spec.data() + label.spec.size(), idx);
        if (ec == std::errc() && ptr == label.spec.data() + label.spec.size()) {
            if (idx < 0 || static_cast<std::size_t>(idx) >= arity) {
                throw ValidationError("label column index out of range: " + label.spec);
            }
            label_col = static_cast<std::size_t>(idx);
        } else {
            label_by_name = true;
        }
    }

    bool has_header = false;
    if (label_by_name) {
        auto it = std::find(rows.front().begin(), rows.front().end(), label.spec);
        if (it == rows.front().end()) {
            bool looks_like_header = false;
            for (const auto& cell : rows.front()) {
                if (!detail::is_missing_marker(cell) && !detail::parse_number(cell)) {
                    looks_like_header = true;
                    break;
                }
            }
            throw ValidationError(looks_like_header
                                      ? "label column not found in header: " + label.spec
                                      : "label column given by name but the file has no header: " +
                                            label.spec);
        }
        label_col = static_cast<std::size_t>(it - rows.front().begin());
        has_header = true;
    } else {
        for (std::size_t c = 0; c < arity; ++c) {
            if (c == label_col) continue;
            const auto& cell = rows.front()[c];
            if (!detail::is_missing_marker(cell) && !detail::parse_number(cell)) {
                has_header = true;
                break;
            }
        }
    }

    std::vector<std::string> header;
    if (has_header) {
        header = rows.front();
        rows.erase(rows.begin());
        if (rows.empty()) throw ParseError(path + ": header but no data rows");
    }

    Dataset d;
    const std::size_t n = arity - 1;
    d.features = Matrix(rows.size(), n);
    d.labels.reserve(rows.size());

    if (has_header) {
        for (std::size_t c = 0; c < arity; ++c) {
            if (c != label_col) d.feature_names.push_back(header[c]);
        }
    } else {
        for (std::size_t c = 0; c < n; ++c) d.feature_names.push_back("f" + std::to_string(c));
    }

    for (std::size_t r = 0; r < rows.size(); ++r) {
        const auto& cells = rows[r];
        const std::size_t row_number = r + 1 + (has_header ? 1 : 0);
        if (cells.size() != arity) {
            throw ParseError(path + ": row " + std::to_string(row_number) + " has " +
                             std::to_string(cells.size()) + " cells, expected " + std::to_string(arity));
        }
        std::size_t fc = 0;
        for (std::size_t c = 0; c < arity; ++c) {
            if (c == label_col) continue;
            const auto& cell = cells[c];
            if (detail::is_missing_marker(cell)) {
                d.features(r, fc) = missing_value();
            } else if (auto v = detail::parse_number(cell)) {
                d.features(r, fc) = *v;
            } else {
                throw ParseError(path + ": row " + std::to_string(row_number) +
                                 ": non-numeric feature cell '" + cell + "'");
            }
            ++fc;
        }
        const auto& label_cell = cells[label_col];
        if (detail::is_missing_marker(label_cell)) {
            throw ParseError(path + ": row " + std::to_string(row_number) + ": missing class label");
        }
        auto it = std::find(d.class_names.begin(), d.class_names.end(), std::string(label_cell));
        int id;
        if (it == d.class_names.end()) {
            id = static_cast<int>(d.class_names.size());
            d.class_names.emplace_back(label_cell);
        } else {
            id = static_cast<int>(it - d.class_names.begin());
        }
        d.labels.push_back(id);
    }
    d.class_count = static_cast<int>(d.class_names.size());
    if (d.class_count < 2) {
        throw ValidationError(path + ": dataset has a single class, nothing to classify");
    }
    return d;
}

/// Replaces every missing cell with the mean of that feature's present
/// values. A feature with no present values at all is an error.
inline Dataset impute_missing(const Dataset& d) {
    Dataset out = d;
    const std::size_t p = d.pattern_count();
    const std::size_t n = d.feature_count();
    for (std::size_t c = 0; c < n; ++c) {
        double sum = 0.0;
        std::size_t present = 0;
        for (std::size_t r = 0; r < p; ++r) {
            const double v = d.features(r, c);
            if (!is_missing_value(v)) {
                sum += v;
                ++present;
            }
        }
        if (present == p) continue;
        if (present == 0) {
            throw ValidationError("feature '" + d.feature_names[c] + "' has no values to impute from");
        }
        const double mu = sum / static_cast<double>(present);
        for (std::size_t r = 0; r < p; ++r) {
            if (is_missing_value(out.features(r, c))) out.features(r, c) = mu;
        }
    }
    return out;
}

/// Per-feature softmax scaling: v -> sigmoid((v - mean) / std) with the
/// feature's own mean and population standard deviation. Constant features
/// map to 0.5 everywhere. Requires an imputed dataset.
inline Dataset softmax_scale(const Dataset& d) {
    Dataset out = d;
    const std::size_t p = d.pattern_count();
    for (std::size_t c = 0; c < d.feature_count(); ++c) {
        std::vector<double> col = d.features.column(c);
        for (double v : col) {
            if (is_missing_value(v)) {
                throw ValidationError("softmax_scale requires an imputed dataset (feature '" +
                                      d.feature_names[c] + "' still has missing cells)");
            }
        }
        const std::vector<double> scaled = softmax_scaled(col);
        for (std::size_t r = 0; r < p; ++r) out.features(r, c) = scaled[r];
    }
    return out;
}

namespace detail {

/// Largest-remainder apportionment of n items over the given ratios, with a
/// floor of one item per part so every part sees every class.
inline std::vector<std::size_t> apportion(std::size_t n, const std::vector<double>& ratios) {
    const std::size_t parts = ratios.size();
    std::vector<std::size_t> counts(parts, 0);
    std::vector<double> remainders(parts, 0.0);
    std::size_t assigned = 0;
    for (std::size_t i = 0; i < parts; ++i) {
        const double target = static_cast<double>(n) * ratios[i];
        counts[i] = static_cast<std::size_t>(target);
        remainders[i] = target - static_cast<double>(counts[i]);
        assigned += counts[i];
    }
    std::vector<std::size_t> order(parts);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return remainders[a] > remainders[b]; });
    for (std::size_t i = 0; assigned < n; ++i) {
        ++counts[order[i % parts]];
        ++assigned;
    }
    // Keep at least one item per part (possible whenever n >= parts).
    for (std::size_t i = 0; i < parts; ++i) {
        while (counts[i] == 0) {
            const std::size_t donor = static_cast<std::size_t>(
                std::max_element(counts.begin(), counts.end()) - counts.begin());
            --counts[donor];
            ++counts[i];
        }
    }
    return counts;
}

} // namespace detail

/// Stratified three-way split. Within every class the patterns are shuffled
/// by a generator seeded from `seed` and dealt to the parts according to the
/// ratios; per-class part sizes deviate from the exact ratio by less than
/// one pattern. Deterministic across runs and platforms.
inline SplitDataset split(const Dataset& d, const std::array<double, 3>& ratios, std::uint64_t seed) {
    double sum = 0.0;
    for (double r : ratios) {
        if (r <= 0.0) throw ValidationError("split ratios must all be positive");
        sum += r;
    }
    if (std::abs(sum - 1.0) > 1e-9) throw ValidationError("split ratios must sum to 1");

    const auto sizes = d.class_sizes();
    for (std::size_t k = 0; k < sizes.size(); ++k) {
        if (sizes[k] < 3) {
            throw ValidationError("class '" + d.class_names[k] + "' has " + std::to_string(sizes[k]) +
                                  " patterns, fewer than the 3 split parts");
        }
    }

    std::vector<std::vector<std::size_t>> by_class(static_cast<std::size_t>(d.class_count));
    for (std::size_t r = 0; r < d.labels.size(); ++r) {
        by_class[static_cast<std::size_t>(d.labels[r])].push_back(r);
    }

    Rng rng = derive_rng(seed, RngStream::split);
    std::vector<std::size_t> part_rows[3];
    const std::vector<double> ratio_vec(ratios.begin(), ratios.end());
    for (auto& members : by_class) {
        rng.shuffle(members);
        const auto counts = detail::apportion(members.size(), ratio_vec);
        std::size_t offset = 0;
        for (int part = 0; part < 3; ++part) {
            for (std::size_t i = 0; i < counts[static_cast<std::size_t>(part)]; ++i) {
                part_rows[part].push_back(members[offset++]);
            }
        }
    }
    for (auto& rows : part_rows) std::sort(rows.begin(), rows.end());

    SplitDataset out;
    out.train = d.take_rows(part_rows[0]);
    out.validation = d.take_rows(part_rows[1]);
    out.test = d.take_rows(part_rows[2]);
    out.split_seed = seed;
    return out;
}

} // namespace cdgafs
