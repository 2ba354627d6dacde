#include "evonas/dataset.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <numeric>
#include <set>
#include <sstream>

#include "evonas/random.hpp"

namespace evonas {

namespace {

std::string trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r\n");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r\n");
  return std::string(s.substr(first, last - first + 1));
}

std::optional<double> parse_number(const std::string& cell) {
  if (cell.empty()) return std::nullopt;
  const char* begin = cell.data();
  const char* end = begin + cell.size();
  if (*begin == '+') ++begin;
  double value = 0.0;
  const auto [ptr, ec] = std::from_chars(begin, end, value);
  if (ec != std::errc() || ptr != end || !std::isfinite(value)) return std::nullopt;
  return value;
}

// One logical record; quoted fields may contain separators, doubled quotes
// and line breaks.
bool read_record(std::istream& in, std::vector<std::string>& fields, std::size_t& line_no) {
  fields.clear();
  std::string line;
  if (!std::getline(in, line)) return false;
  ++line_no;
  std::string field;
  bool quoted = false;
  for (std::size_t i = 0;; ++i) {
    if (i == line.size()) {
      if (quoted) {
        std::string next;
        if (!std::getline(in, next))
          throw DatasetError("line " + std::to_string(line_no) + ": unterminated quoted field");
        ++line_no;
        field += '\n';
        line = std::move(next);
        i = static_cast<std::size_t>(-1);
        continue;
      }
      break;
    }
    const char c = line[i];
    if (quoted) {
      if (c == '"') {
        if (i + 1 < line.size() && line[i + 1] == '"') {
          field += '"';
          ++i;
        } else {
          quoted = false;
        }
      } else {
        field += c;
      }
    } else if (c == '"') {
      quoted = true;
    } else if (c == ',') {
      fields.push_back(trim(field));
      field.clear();
    } else {
      field += c;
    }
  }
  fields.push_back(trim(field));
  return true;
}

bool blank(const std::vector<std::string>& fields) {
  return std::all_of(fields.begin(), fields.end(), [](const std::string& f) { return f.empty(); });
}

std::size_t resolve_column(const ColumnRef& ref, const std::vector<std::string>* header,
                           std::size_t width) {
  if (const int* pos = std::get_if<int>(&ref)) {
    const long idx = *pos < 0 ? static_cast<long>(width) + *pos : *pos;
    if (idx < 0 || idx >= static_cast<long>(width))
      throw DatasetError("column index " + std::to_string(*pos) + " out of range for " +
                         std::to_string(width) + " columns");
    return static_cast<std::size_t>(idx);
  }
  const auto& name = std::get<std::string>(ref);
  if (header == nullptr) {
    // A purely numeric name is accepted as a position when there is no header.
    if (auto n = parse_number(name); n && *n == std::floor(*n))
      return resolve_column(static_cast<int>(*n), nullptr, width);
    throw DatasetError("column '" + name + "' referenced by name but the file has no header");
  }
  const auto it = std::find(header->begin(), header->end(), name);
  if (it == header->end()) throw DatasetError("no column named '" + name + "'");
  return static_cast<std::size_t>(it - header->begin());
}

std::optional<int> map_label(const std::string& cell, const std::optional<LabelMap>& map) {
  if (map) {
    if (const auto it = map->find(cell); it != map->end()) return it->second;
  }
  if (const auto v = parse_number(cell); v && (*v == 0.0 || *v == 1.0)) return static_cast<int>(*v);
  return std::nullopt;
}

std::string position(std::size_t row, std::size_t col) {
  return "row " + std::to_string(row) + ", column " + std::to_string(col + 1);
}

}  // namespace

Dataset Dataset::subset(const IndexList& rows) const {
  Dataset out;
  out.name = name;
  out.features = features(rows, Eigen::all);
  out.labels = labels(rows);
  return out;
}

void Dataset::validate() const {
  if (features.rows() != labels.size())
    throw DatasetError("feature rows (" + std::to_string(features.rows()) +
                       ") differ from label count (" + std::to_string(labels.size()) + ")");
  if (features.cols() < 1) throw DatasetError("dataset has no feature columns");
  for (Eigen::Index i = 0; i < labels.size(); ++i)
    if (labels[i] != 0 && labels[i] != 1)
      throw DatasetError("label at row " + std::to_string(i) + " is not 0 or 1");
}

LabelMap parse_label_map(const std::string& text) {
  LabelMap map;
  std::stringstream ss(text);
  std::string pair;
  while (std::getline(ss, pair, ',')) {
    if (trim(pair).empty()) continue;
    const auto eq = pair.find('=');
    if (eq == std::string::npos)
      throw DatasetError("label mapping entry '" + pair + "' is not of the form text=0|1");
    const std::string key = trim(pair.substr(0, eq));
    const std::string value = trim(pair.substr(eq + 1));
    if (value != "0" && value != "1")
      throw DatasetError("label mapping for '" + key + "' must be 0 or 1, got '" + value + "'");
    map[key] = value == "1" ? 1 : 0;
  }
  if (map.empty()) throw DatasetError("empty label mapping");
  return map;
}

Dataset load_csv(const std::filesystem::path& path, const CsvOptions& options) {
  std::ifstream in(path);
  if (!in) throw DatasetError("cannot open dataset file: " + path.string());

  std::vector<std::vector<std::string>> records;
  std::vector<std::size_t> record_lines;
  {
    std::vector<std::string> fields;
    std::size_t line_no = 0;
    while (read_record(in, fields, line_no)) {
      if (blank(fields)) continue;
      records.push_back(fields);
      record_lines.push_back(line_no);
    }
  }
  if (records.empty()) throw DatasetError(path.string() + ": file is empty");

  const std::size_t width = records.front().size();
  for (std::size_t r = 1; r < records.size(); ++r)
    if (records[r].size() != width)
      throw DatasetError("row " + std::to_string(record_lines[r]) + ": expected " +
                         std::to_string(width) + " fields, found " +
                         std::to_string(records[r].size()));

  // Header detection needs the label column position; names imply a header.
  const auto& first = records.front();
  auto names_referenced = [&] {
    if (std::holds_alternative<std::string>(options.label_column) &&
        !parse_number(std::get<std::string>(options.label_column)))
      return true;
    return std::any_of(options.drop_columns.begin(), options.drop_columns.end(),
                       [](const ColumnRef& c) {
                         return std::holds_alternative<std::string>(c) &&
                                !parse_number(std::get<std::string>(c));
                       });
  };
  bool has_header = names_referenced();
  if (!has_header) {
    const std::size_t label_col = resolve_column(options.label_column, nullptr, width);
    std::set<std::size_t> dropped;
    for (const auto& d : options.drop_columns) dropped.insert(resolve_column(d, nullptr, width));
    for (std::size_t c = 0; c < width && !has_header; ++c) {
      if (c == label_col || dropped.count(c)) continue;
      has_header = !parse_number(first[c]).has_value();
    }
    if (!has_header && !map_label(first[label_col], options.label_map)) {
      // A label cell that cannot be a label marks a header only when every
      // feature cell is numeric and the rest of the column maps cleanly.
      has_header = records.size() > 1 && map_label(records[1][label_col], options.label_map);
    }
  }

  const std::vector<std::string>* header = has_header ? &first : nullptr;
  const std::size_t label_col = resolve_column(options.label_column, header, width);
  std::set<std::size_t> dropped;
  for (const auto& d : options.drop_columns) dropped.insert(resolve_column(d, header, width));
  if (dropped.count(label_col)) throw DatasetError("label column is also listed as dropped");

  std::vector<std::size_t> feature_cols;
  for (std::size_t c = 0; c < width; ++c)
    if (c != label_col && !dropped.count(c)) feature_cols.push_back(c);
  if (feature_cols.empty()) throw DatasetError("no feature columns remain");

  const std::size_t begin = has_header ? 1 : 0;
  const auto rows = static_cast<Eigen::Index>(records.size() - begin);
  if (rows == 0) throw DatasetError(path.string() + ": no data rows");

  Dataset ds;
  ds.name = path.stem().string();
  ds.features.resize(rows, static_cast<Eigen::Index>(feature_cols.size()));
  ds.labels.resize(rows);
  for (std::size_t r = begin; r < records.size(); ++r) {
    const auto i = static_cast<Eigen::Index>(r - begin);
    const auto& rec = records[r];
    for (std::size_t j = 0; j < feature_cols.size(); ++j) {
      const auto v = parse_number(rec[feature_cols[j]]);
      if (!v)
        throw DatasetError(position(record_lines[r], feature_cols[j]) + ": non-numeric feature '" +
                           rec[feature_cols[j]] + "'");
      ds.features(i, static_cast<Eigen::Index>(j)) = *v;
    }
    const auto label = map_label(rec[label_col], options.label_map);
    if (!label)
      throw DatasetError(position(record_lines[r], label_col) + ": label '" + rec[label_col] +
                         "' is not 0/1 and has no mapping");
    ds.labels[i] = *label;
  }

  if (ds.labels.minCoeff() == ds.labels.maxCoeff())
    throw DatasetError(path.string() + ": fewer than 2 distinct labels (all rows are " +
                       std::to_string(ds.labels[0]) + ")");
  return ds;
}

void write_csv(const Dataset& dataset, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw DatasetError("cannot write " + path.string());
  out.precision(17);
  for (Eigen::Index c = 0; c < dataset.attribute_count(); ++c) out << 'x' << c << ',';
  out << "label\n";
  for (Eigen::Index r = 0; r < dataset.size(); ++r) {
    for (Eigen::Index c = 0; c < dataset.attribute_count(); ++c)
      out << dataset.features(r, c) << ',';
    out << dataset.labels[r] << '\n';
  }
  if (!out) throw DatasetError("write failed: " + path.string());
}

Dataset shuffle(const Dataset& dataset, std::uint64_t seed) {
  IndexList order(static_cast<std::size_t>(dataset.size()));
  std::iota(order.begin(), order.end(), Eigen::Index{0});
  Rng rng(seed);
  shuffle_in_place(std::span(order), rng);
  return dataset.subset(order);
}

IndexList FoldSplit::test_indices(int fold) const {
  IndexList out;
  for (std::size_t i = 0; i < assignments.size(); ++i)
    if (assignments[i] == fold) out.push_back(static_cast<Eigen::Index>(i));
  return out;
}

IndexList FoldSplit::train_indices(int fold) const {
  if (fold_count == 1) return test_indices(fold);
  IndexList out;
  for (std::size_t i = 0; i < assignments.size(); ++i)
    if (assignments[i] != fold) out.push_back(static_cast<Eigen::Index>(i));
  return out;
}

std::vector<std::size_t> FoldSplit::fold_sizes() const {
  std::vector<std::size_t> sizes(static_cast<std::size_t>(fold_count), 0);
  for (int a : assignments) ++sizes[static_cast<std::size_t>(a)];
  return sizes;
}

FoldSplit kfold(Eigen::Index instance_count, int k, std::uint64_t seed) {
  if (k < 2 || k > instance_count)
    throw DatasetError("fold count " + std::to_string(k) + " out of range [2, " +
                       std::to_string(instance_count) + "]");
  std::vector<std::size_t> order(static_cast<std::size_t>(instance_count));
  std::iota(order.begin(), order.end(), std::size_t{0});
  Rng rng(seed);
  shuffle_in_place(std::span(order), rng);

  FoldSplit split;
  split.fold_count = k;
  split.seed = seed;
  split.assignments.assign(order.size(), 0);
  for (std::size_t i = 0; i < order.size(); ++i)
    split.assignments[order[i]] = static_cast<int>(i % static_cast<std::size_t>(k));
  return split;
}

FoldSplit resubstitution(Eigen::Index instance_count) {
  FoldSplit split;
  split.fold_count = 1;
  split.assignments.assign(static_cast<std::size_t>(instance_count), 0);
  return split;
}

Standardizer Standardizer::fit(const Matrix& features) {
  Standardizer s;
  s.mean = features.colwise().mean();
  const Matrix centered = features.rowwise() - s.mean;
  const Eigen::RowVectorXd variance =
      centered.array().square().colwise().sum() / static_cast<double>(features.rows());
  s.scale = variance.array().sqrt();
  return s;
}

Matrix Standardizer::transform(const Matrix& features) const {
  Matrix out = features.rowwise() - mean;
  for (Eigen::Index c = 0; c < out.cols(); ++c) {
    // Tolerance relative to the column magnitude catches float noise on
    // columns that are constant in exact arithmetic.
    const double tol = 1e-12 * std::max(1.0, std::abs(mean[c]));
    if (scale[c] <= tol)
      out.col(c).setZero();
    else
      out.col(c) /= scale[c];
  }
  return out;
}

Dataset feature_scale(const Dataset& dataset) {
  Dataset out = dataset;
  out.features = Standardizer::fit(dataset.features).transform(dataset.features);
  return out;
}

}  // namespace evonas
