#include "mlcc/dataset.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <numeric>
#include <sstream>

#include "mlcc/errors.hpp"
#include "mlcc/rng.hpp"

namespace mlcc {

namespace {

std::string_view trim(std::string_view s) {
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
    return s;
}

std::vector<std::string_view> split(std::string_view s, char sep) {
    std::vector<std::string_view> out;
    std::size_t start = 0;
    while (true) {
        std::size_t pos = s.find(sep, start);
        if (pos == std::string_view::npos) {
            out.push_back(s.substr(start));
            break;
        }
        out.push_back(s.substr(start, pos - start));
        start = pos + 1;
    }
    return out;
}

bool iequals(std::string_view a, std::string_view b) {
    if (a.size() != b.size()) return false;
    for (std::size_t i = 0; i < a.size(); ++i) {
        if (std::tolower(static_cast<unsigned char>(a[i])) !=
            std::tolower(static_cast<unsigned char>(b[i])))
            return false;
    }
    return true;
}

bool istarts_with(std::string_view s, std::string_view prefix) {
    return s.size() >= prefix.size() && iequals(s.substr(0, prefix.size()), prefix);
}

bool parse_double(std::string_view token, double& out) {
    token = trim(token);
    if (token.empty()) return false;
    auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), out);
    return ec == std::errc{} && ptr == token.data() + token.size() && std::isfinite(out);
}

bool parse_binary(std::string_view token, std::uint8_t& out) {
    token = trim(token);
    if (token == "0") {
        out = 0;
        return true;
    }
    if (token == "1") {
        out = 1;
        return true;
    }
    // numeric label attributes may carry 0.0 / 1.0
    double v = 0.0;
    if (!parse_double(token, v)) return false;
    if (v == 0.0) out = 0;
    else if (v == 1.0) out = 1;
    else return false;
    return true;
}

std::string strip_quotes(std::string_view s) {
    s = trim(s);
    if (s.size() >= 2 && ((s.front() == '\'' && s.back() == '\'') ||
                          (s.front() == '"' && s.back() == '"'))) {
        s = s.substr(1, s.size() - 2);
    }
    return std::string(s);
}

// Scans a relation line for a MEKA-style "-C k" token.
std::optional<int> find_meka_label_count(std::string_view line) {
    for (std::size_t i = 0; i + 1 < line.size(); ++i) {
        if (line[i] != '-' || (line[i + 1] != 'C' && line[i + 1] != 'c')) continue;
        std::size_t j = i + 2;
        while (j < line.size() && (line[j] == ' ' || line[j] == '\t')) ++j;
        std::size_t end = j;
        if (end < line.size() && line[end] == '-') ++end;
        while (end < line.size() && std::isdigit(static_cast<unsigned char>(line[end]))) ++end;
        if (end == j || (end == j + 1 && line[j] == '-')) continue;
        int value = 0;
        auto [ptr, ec] = std::from_chars(line.data() + j, line.data() + end, value);
        if (ec == std::errc{} && ptr == line.data() + end) return value;
    }
    return std::nullopt;
}

struct ArffAttribute {
    std::string name;
    bool nominal = false;
    std::vector<std::string> nominal_values;
};

ArffAttribute parse_attribute_line(std::string_view rest, const std::string& path) {
    rest = trim(rest);
    if (rest.empty()) throw DataError(path + ": @attribute line without a name");
    ArffAttribute attr;
    if (rest.front() == '\'' || rest.front() == '"') {
        char quote = rest.front();
        std::size_t end = rest.find(quote, 1);
        if (end == std::string_view::npos)
            throw DataError(path + ": unterminated quoted attribute name");
        attr.name = std::string(rest.substr(1, end - 1));
        rest = trim(rest.substr(end + 1));
    } else {
        std::size_t end = rest.find_first_of(" \t");
        if (end == std::string_view::npos)
            throw DataError(path + ": @attribute line without a type");
        attr.name = std::string(rest.substr(0, end));
        rest = trim(rest.substr(end));
    }
    if (rest.empty()) throw DataError(path + ": attribute '" + attr.name + "' has no type");
    if (rest.front() == '{') {
        if (rest.back() != '}')
            throw DataError(path + ": attribute '" + attr.name + "' has an unterminated nominal spec");
        attr.nominal = true;
        for (auto v : split(rest.substr(1, rest.size() - 2), ','))
            attr.nominal_values.push_back(strip_quotes(v));
    } else if (!(istarts_with(rest, "numeric") || istarts_with(rest, "real") ||
                 istarts_with(rest, "integer"))) {
        throw DataError(path + ": attribute '" + attr.name + "' has unsupported type '" +
                        std::string(rest) + "'");
    }
    return attr;
}

}  // namespace

void Dataset::validate() const {
    if (features.rows == 0) throw DataError("dataset '" + name + "' has no instances");
    if (features.cols == 0) throw DataError("dataset '" + name + "' has no features");
    if (labels.cols < 2)
        throw DataError("dataset '" + name + "' needs at least 2 labels, got " +
                        std::to_string(labels.cols));
    if (labels.rows != features.rows)
        throw DataError("dataset '" + name + "': feature rows (" + std::to_string(features.rows) +
                        ") != label rows (" + std::to_string(labels.rows) + ")");
    if (label_names.size() != labels.cols || feature_names.size() != features.cols)
        throw DataError("dataset '" + name + "': name lists do not match matrix shapes");
    for (std::uint8_t v : labels.values)
        if (v != 0 && v != 1)
            throw DataError("dataset '" + name + "': label cell outside {0,1}");
}

std::vector<std::size_t> FoldPlan::train_indices(int fold) const {
    std::vector<std::size_t> out;
    for (std::size_t i = 0; i < assignments.size(); ++i)
        if (assignments[i] != fold) out.push_back(i);
    return out;
}

std::vector<std::size_t> FoldPlan::test_indices(int fold) const {
    std::vector<std::size_t> out;
    for (std::size_t i = 0; i < assignments.size(); ++i)
        if (assignments[i] == fold) out.push_back(i);
    return out;
}

Dataset load_arff(const std::string& path, std::optional<int> labels_spec) {
    std::ifstream in(path);
    if (!in) throw DataError("cannot open ARFF file: " + path);

    std::string relation_name;
    std::optional<int> header_label_count;
    std::vector<ArffAttribute> attributes;
    bool saw_relation = false;
    bool in_data = false;
    std::vector<std::string> data_lines;

    std::string raw;
    while (std::getline(in, raw)) {
        if (!raw.empty() && raw.back() == '\r') raw.pop_back();
        std::string_view line = trim(raw);
        if (line.empty() || line.front() == '%') continue;
        if (in_data) {
            data_lines.emplace_back(line);
            continue;
        }
        if (istarts_with(line, "@relation")) {
            saw_relation = true;
            std::string_view rest = trim(line.substr(9));
            header_label_count = find_meka_label_count(rest);
            relation_name = strip_quotes(rest);
            // drop a MEKA option suffix from the display name
            if (auto pos = relation_name.find(": -"); pos != std::string::npos)
                relation_name = std::string(trim(std::string_view(relation_name).substr(0, pos)));
        } else if (istarts_with(line, "@attribute")) {
            if (!saw_relation) throw DataError(path + ": @attribute before @relation");
            attributes.push_back(parse_attribute_line(line.substr(10), path));
        } else if (istarts_with(line, "@data")) {
            if (!saw_relation || attributes.empty())
                throw DataError(path + ": @data before a complete header");
            in_data = true;
        } else {
            throw DataError(path + ": unrecognized header line: " + std::string(line));
        }
    }
    if (!in_data) throw DataError(path + ": no @data section");

    int spec = 0;
    if (labels_spec) spec = *labels_spec;
    else if (header_label_count) spec = *header_label_count;
    else throw DataError(path + ": no labels argument and no -C token in @relation");
    if (spec == 0) throw DataError(path + ": label count must be non-zero");

    const std::size_t total = attributes.size();
    const std::size_t q = static_cast<std::size_t>(spec > 0 ? spec : -spec);
    if (q < 2) throw DataError(path + ": need at least 2 labels, got " + std::to_string(q));
    if (q + 1 > total)
        throw DataError(path + ": " + std::to_string(q) + " labels leave no feature attributes");
    const std::size_t label_begin = spec > 0 ? 0 : total - q;
    const std::size_t label_end = label_begin + q;

    for (std::size_t a = label_begin; a < label_end; ++a) {
        const ArffAttribute& attr = attributes[a];
        if (!attr.nominal) continue;
        for (const std::string& v : attr.nominal_values)
            if (v != "0" && v != "1")
                throw DataError(path + ": label attribute '" + attr.name +
                                "' has nominal value '" + v + "' outside {0,1}");
    }

    const std::size_t n = data_lines.size();
    if (n == 0) throw DataError(path + ": empty @data section");
    const std::size_t k = total - q;

    Dataset d;
    d.name = relation_name.empty() ? std::filesystem::path(path).stem().string() : relation_name;
    d.features = Matrix(n, k);
    d.labels = LabelMatrix(n, q);
    for (std::size_t a = 0; a < total; ++a) {
        if (a >= label_begin && a < label_end) d.label_names.push_back(attributes[a].name);
        else d.feature_names.push_back(attributes[a].name);
    }

    for (std::size_t i = 0; i < n; ++i) {
        std::string_view line = data_lines[i];
        if (!line.empty() && line.front() == '{')
            throw DataError(path + ": sparse ARFF rows are not supported");
        auto cells = split(line, ',');
        if (cells.size() != total)
            throw DataError(path + ": data row " + std::to_string(i + 1) + " has " +
                            std::to_string(cells.size()) + " cells, expected " +
                            std::to_string(total));
        std::size_t fi = 0, li = 0;
        for (std::size_t a = 0; a < total; ++a) {
            std::string_view cell = trim(cells[a]);
            if (cell == "?")
                throw DataError(path + ": missing value ('?') in row " + std::to_string(i + 1));
            if (a >= label_begin && a < label_end) {
                std::uint8_t bit = 0;
                if (!parse_binary(strip_quotes(cell), bit))
                    throw DataError(path + ": label value '" + std::string(cell) + "' in row " +
                                    std::to_string(i + 1) + " is outside {0,1}");
                d.labels.at(i, li++) = bit;
            } else {
                double v = 0.0;
                if (!parse_double(cell, v))
                    throw DataError(path + ": feature value '" + std::string(cell) + "' in row " +
                                    std::to_string(i + 1) + " is not a finite number");
                d.features.at(i, fi++) = v;
            }
        }
    }

    d.validate();
    return d;
}

Dataset load_csv(const std::string& path, int label_count) {
    std::ifstream in(path);
    if (!in) throw DataError("cannot open CSV file: " + path);
    if (label_count < 2)
        throw DataError(path + ": need at least 2 label columns, got " +
                        std::to_string(label_count));

    std::string raw;
    if (!std::getline(in, raw)) throw DataError(path + ": empty file");
    if (!raw.empty() && raw.back() == '\r') raw.pop_back();

    std::vector<std::string> header;
    for (auto h : split(raw, ',')) header.emplace_back(trim(h));
    const std::size_t cols = header.size();
    const std::size_t q = static_cast<std::size_t>(label_count);
    if (q >= cols)
        throw DataError(path + ": " + std::to_string(q) + " label columns but only " +
                        std::to_string(cols) + " columns total");
    const std::size_t k = cols - q;

    Dataset d;
    d.name = std::filesystem::path(path).stem().string();
    d.feature_names.assign(header.begin(), header.begin() + static_cast<std::ptrdiff_t>(k));
    d.label_names.assign(header.begin() + static_cast<std::ptrdiff_t>(k), header.end());

    std::vector<double> feats;
    std::vector<std::uint8_t> labs;
    std::size_t n = 0;
    while (std::getline(in, raw)) {
        if (!raw.empty() && raw.back() == '\r') raw.pop_back();
        if (trim(raw).empty()) continue;
        auto cells = split(raw, ',');
        if (cells.size() != cols)
            throw DataError(path + ": row " + std::to_string(n + 2) + " has " +
                            std::to_string(cells.size()) + " cells, expected " +
                            std::to_string(cols));
        for (std::size_t c = 0; c < k; ++c) {
            double v = 0.0;
            if (!parse_double(cells[c], v))
                throw DataError(path + ": feature cell '" + std::string(trim(cells[c])) +
                                "' in row " + std::to_string(n + 2) + " is not a finite number");
            feats.push_back(v);
        }
        for (std::size_t c = k; c < cols; ++c) {
            std::string_view cell = trim(cells[c]);
            if (cell == "0") labs.push_back(0);
            else if (cell == "1") labs.push_back(1);
            else
                throw DataError(path + ": label cell '" + std::string(cell) + "' in row " +
                                std::to_string(n + 2) + " is not a literal 0 or 1");
        }
        ++n;
    }
    if (n == 0) throw DataError(path + ": no data rows");

    d.features = Matrix(n, k);
    d.features.values = std::move(feats);
    d.labels = LabelMatrix(n, q);
    d.labels.values = std::move(labs);
    d.validate();
    return d;
}

namespace {

std::string format_double(double v) {
    char buf[40];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, ptr);
}

}  // namespace

void save_csv(const Dataset& d, const std::string& path) {
    d.validate();
    std::ofstream out(path);
    if (!out) throw DataError("cannot write CSV file: " + path);
    for (std::size_t c = 0; c < d.feature_names.size(); ++c) {
        if (c) out << ',';
        out << d.feature_names[c];
    }
    for (const std::string& l : d.label_names) out << ',' << l;
    out << '\n';
    for (std::size_t i = 0; i < d.n_instances(); ++i) {
        for (std::size_t c = 0; c < d.n_features(); ++c) {
            if (c) out << ',';
            out << format_double(d.features.at(i, c));
        }
        for (std::size_t l = 0; l < d.n_labels(); ++l) out << ',' << int(d.labels.at(i, l));
        out << '\n';
    }
    if (!out) throw DataError("write failed: " + path);
}

DatasetStats label_stats(const Dataset& d) {
    DatasetStats s;
    s.n = d.n_instances();
    s.k = d.n_features();
    s.q = d.n_labels();
    std::size_t total = 0;
    for (std::uint8_t v : d.labels.values) total += v;
    s.lcard = static_cast<double>(total) / static_cast<double>(s.n);
    return s;
}

FoldPlan split_kfold(const Dataset& d, int n_folds, std::uint64_t seed) {
    const std::size_t n = d.n_instances();
    if (n_folds < 2) throw ConfigError("n_folds must be >= 2, got " + std::to_string(n_folds));
    if (static_cast<std::size_t>(n_folds) > n)
        throw ConfigError("n_folds (" + std::to_string(n_folds) + ") exceeds instance count (" +
                          std::to_string(n) + ")");

    std::vector<std::size_t> perm(n);
    std::iota(perm.begin(), perm.end(), std::size_t{0});
    SplitMix64 rng(seed);
    shuffle(perm, rng);

    FoldPlan plan;
    plan.n_folds = n_folds;
    plan.seed = seed;
    plan.assignments.resize(n);
    for (std::size_t p = 0; p < n; ++p)
        plan.assignments[perm[p]] = static_cast<int>(p % static_cast<std::size_t>(n_folds));
    return plan;
}

Dataset select_rows(const Dataset& d, std::span<const std::size_t> rows) {
    Dataset out;
    out.name = d.name;
    out.label_names = d.label_names;
    out.feature_names = d.feature_names;
    out.features = Matrix(rows.size(), d.n_features());
    out.labels = LabelMatrix(rows.size(), d.n_labels());
    for (std::size_t i = 0; i < rows.size(); ++i) {
        auto src_f = d.features.row(rows[i]);
        std::copy(src_f.begin(), src_f.end(), out.features.row(i).begin());
        auto src_l = d.labels.row(rows[i]);
        std::copy(src_l.begin(), src_l.end(), out.labels.row(i).begin());
    }
    return out;
}

}  // namespace mlcc
