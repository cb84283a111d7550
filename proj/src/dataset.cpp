#include "osfsu/dataset.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <limits>
#include <map>
#include <random>
#include <set>
#include <sstream>
#include <stdexcept>

namespace osfsu {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

std::vector<std::string> split_line(const std::string& line) {
    std::vector<std::string> cells;
    std::string cur;
    for (char ch : line) {
        if (ch == ',') {
            cells.push_back(cur);
            cur.clear();
        } else {
            cur.push_back(ch);
        }
    }
    cells.push_back(cur);
    return cells;
}

std::string trim(const std::string& s) {
    auto b = s.begin();
    auto e = s.end();
    while (b != e && std::isspace(static_cast<unsigned char>(*b))) ++b;
    while (e != b && std::isspace(static_cast<unsigned char>(*(e - 1)))) --e;
    return std::string(b, e);
}

bool is_missing_marker(const std::string& cell) {
    if (cell.empty()) return true;
    if (cell.size() != 3) return false;
    return std::tolower(static_cast<unsigned char>(cell[0])) == 'n' &&
           std::tolower(static_cast<unsigned char>(cell[1])) == 'a' &&
           std::tolower(static_cast<unsigned char>(cell[2])) == 'n';
}

double parse_feature_cell(const std::string& cell, std::size_t row_number) {
    double value = 0.0;
    const char* first = cell.data();
    const char* last = cell.data() + cell.size();
    auto [ptr, ec] = std::from_chars(first, last, value);
    if (ec != std::errc{} || ptr != last)
        throw std::invalid_argument("csv row " + std::to_string(row_number) +
                                    ": non-numeric feature cell '" + cell + "'");
    return value;
}

int parse_label_cell(const std::string& cell, std::size_t row_number) {
    int value = 0;
    const char* first = cell.data();
    const char* last = cell.data() + cell.size();
    auto [ptr, ec] = std::from_chars(first, last, value);
    if (ec != std::errc{} || ptr != last)
        throw std::invalid_argument("csv row " + std::to_string(row_number) +
                                    ": label must be an integer, got '" + cell + "'");
    return value;
}

void append_double(std::string& out, double v) {
    char buf[64];
    auto res = std::to_chars(buf, buf + sizeof(buf), v);
    out.append(buf, res.ptr);
}

}  // namespace

Eigen::Index Dataset::missing_count() const {
    return (features.array() != features.array()).count();
}

int Dataset::distinct_label_count() const {
    std::set<int> distinct(labels.begin(), labels.end());
    return static_cast<int>(distinct.size());
}

void Dataset::validate() const {
    if (static_cast<Eigen::Index>(labels.size()) != features.rows())
        throw std::invalid_argument("dataset: labels length must equal instance count");
    if (static_cast<Eigen::Index>(feature_names.size()) != features.cols())
        throw std::invalid_argument("dataset: feature_names length must equal feature count");
    std::set<std::string> names(feature_names.begin(), feature_names.end());
    if (names.size() != feature_names.size())
        throw std::invalid_argument("dataset: feature names must be unique");
}

Dataset load_csv(std::istream& source) {
    std::string line;
    if (!std::getline(source, line))
        throw std::invalid_argument("csv: empty input");
    if (!line.empty() && line.back() == '\r') line.pop_back();

    std::vector<std::string> header = split_line(line);
    if (header.size() < 2 || trim(header.back()) != "label")
        throw std::invalid_argument("csv: header must end with a 'label' column");

    const std::size_t t = header.size() - 1;
    std::vector<std::string> names(header.begin(), header.end() - 1);

    std::vector<std::vector<double>> rows;
    std::vector<int> labels;
    std::size_t row_number = 1; // header was row 1
    while (std::getline(source, line)) {
        ++row_number;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty() && source.peek() == std::char_traits<char>::eof()) break;
        std::vector<std::string> cells = split_line(line);
        if (cells.size() != t + 1)
            throw std::invalid_argument("csv row " + std::to_string(row_number) + ": expected " +
                                        std::to_string(t + 1) + " cells, got " +
                                        std::to_string(cells.size()));
        std::vector<double> row(t);
        for (std::size_t j = 0; j < t; ++j) {
            const std::string cell = trim(cells[j]);
            row[j] = is_missing_marker(cell) ? kNaN : parse_feature_cell(cell, row_number);
        }
        rows.push_back(std::move(row));
        labels.push_back(parse_label_cell(trim(cells[t]), row_number));
    }

    Dataset d;
    d.features.resize(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(t));
    for (std::size_t i = 0; i < rows.size(); ++i)
        for (std::size_t j = 0; j < t; ++j) d.features(i, j) = rows[i][j];
    d.labels = std::move(labels);
    d.feature_names = std::move(names);
    d.validate();
    if (d.distinct_label_count() < 2)
        throw std::invalid_argument("csv: need at least 2 distinct label classes");
    return d;
}

Dataset load_csv_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open " + path.string());
    return load_csv(in);
}

std::string to_csv(const Dataset& d) {
    std::string out;
    for (std::size_t j = 0; j < d.feature_names.size(); ++j) {
        out += d.feature_names[j];
        out += ',';
    }
    out += "label\n";
    for (Eigen::Index i = 0; i < d.features.rows(); ++i) {
        for (Eigen::Index j = 0; j < d.features.cols(); ++j) {
            const double v = d.features(i, j);
            if (!std::isnan(v)) append_double(out, v);
            out += ',';
        }
        out += std::to_string(d.labels[static_cast<std::size_t>(i)]);
        out += '\n';
    }
    return out;
}

void write_csv(const Dataset& d, std::ostream& out) { out << to_csv(d); }

std::pair<Dataset, GroundTruth> generate_synthetic(Eigen::Index instances, Eigen::Index features,
                                                   Eigen::Index n_relevant, double noise,
                                                   std::uint64_t seed) {
    if (n_relevant == 0) throw std::invalid_argument("generate_synthetic: n_relevant must be >= 1");
    if (n_relevant > features)
        throw std::invalid_argument("generate_synthetic: n_relevant exceeds feature count");
    if (instances < 20) throw std::invalid_argument("generate_synthetic: need at least 20 instances");
    if (noise < 0.0) throw std::invalid_argument("generate_synthetic: noise must be >= 0");

    std::mt19937_64 rng(seed);
    std::normal_distribution<double> normal(0.0, 1.0);

    Dataset d;
    d.features.resize(instances, features);
    for (Eigen::Index i = 0; i < instances; ++i)
        for (Eigen::Index j = 0; j < features; ++j) d.features(i, j) = normal(rng);

    // Partial Fisher-Yates draw of the relevant column set.
    std::vector<Eigen::Index> pool(static_cast<std::size_t>(features));
    for (Eigen::Index j = 0; j < features; ++j) pool[static_cast<std::size_t>(j)] = j;
    for (Eigen::Index k = 0; k < n_relevant; ++k) {
        std::uniform_int_distribution<Eigen::Index> pick(k, features - 1);
        std::swap(pool[static_cast<std::size_t>(k)], pool[static_cast<std::size_t>(pick(rng))]);
    }
    std::vector<Eigen::Index> relevant(pool.begin(), pool.begin() + n_relevant);
    std::sort(relevant.begin(), relevant.end());

    d.labels.resize(static_cast<std::size_t>(instances));
    for (Eigen::Index i = 0; i < instances; ++i) {
        double sum = 0.0;
        for (Eigen::Index c : relevant) sum += d.features(i, c);
        sum += noise * normal(rng);
        d.labels[static_cast<std::size_t>(i)] = sum > 0.0 ? 1 : 0;
    }

    d.feature_names.resize(static_cast<std::size_t>(features));
    for (Eigen::Index j = 0; j < features; ++j)
        d.feature_names[static_cast<std::size_t>(j)] = "f" + std::to_string(j);

    d.validate();
    return {std::move(d), GroundTruth{std::move(relevant), seed}};
}

Dataset sparsify(const Dataset& d, const MaskSpec& spec) {
    if (!(spec.rate >= 0.0 && spec.rate < 1.0))
        throw std::invalid_argument("sparsify: rate must be in [0, 1)");

    Dataset out = d;
    const Eigen::Index m = d.features.rows();
    const Eigen::Index t = d.features.cols();
    const auto total = static_cast<std::uint64_t>(m) * static_cast<std::uint64_t>(t);
    const auto to_mask = static_cast<std::uint64_t>(std::llround(spec.rate * static_cast<double>(total)));
    if (to_mask == 0) return out;

    std::vector<std::uint64_t> cells(total);
    for (std::uint64_t c = 0; c < total; ++c) cells[c] = c;
    std::mt19937_64 rng(spec.seed);
    for (std::uint64_t k = 0; k < to_mask; ++k) {
        std::uniform_int_distribution<std::uint64_t> pick(k, total - 1);
        std::swap(cells[k], cells[pick(rng)]);
    }
    for (std::uint64_t k = 0; k < to_mask; ++k) {
        const auto row = static_cast<Eigen::Index>(cells[k] / static_cast<std::uint64_t>(t));
        const auto col = static_cast<Eigen::Index>(cells[k] % static_cast<std::uint64_t>(t));
        out.features(row, col) = kNaN;
    }
    return out;
}

FoldPlan split_folds(const Dataset& d, int k, std::uint64_t seed) {
    if (k < 2) throw std::invalid_argument("split_folds: need k >= 2");
    d.validate();

    std::map<int, std::vector<Eigen::Index>> by_class;
    for (Eigen::Index i = 0; i < d.instance_count(); ++i)
        by_class[d.labels[static_cast<std::size_t>(i)]].push_back(i);
    for (const auto& [cls, members] : by_class)
        if (members.size() < static_cast<std::size_t>(k))
            throw std::invalid_argument("split_folds: class " + std::to_string(cls) +
                                        " has fewer than k members");

    // A fold cursor persisting across classes keeps global fold sizes within one
    // of each other while each class is still dealt round-robin.
    std::mt19937_64 rng(seed);
    FoldPlan plan;
    plan.fold_count = k;
    plan.assignment.assign(static_cast<std::size_t>(d.instance_count()), -1);
    int cursor = 0;
    for (auto& [cls, members] : by_class) {
        std::shuffle(members.begin(), members.end(), rng);
        for (Eigen::Index idx : members) {
            plan.assignment[static_cast<std::size_t>(idx)] = cursor;
            cursor = (cursor + 1) % k;
        }
    }
    return plan;
}

std::vector<StreamColumn> stream_columns(const Dataset& d) {
    std::vector<StreamColumn> cols;
    cols.reserve(static_cast<std::size_t>(d.feature_count()));
    for (Eigen::Index j = 0; j < d.feature_count(); ++j)
        cols.push_back(StreamColumn{j, d.features.col(j)});
    return cols;
}

}  // namespace osfsu
