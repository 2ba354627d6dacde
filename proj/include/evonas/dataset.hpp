#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include <Eigen/Dense>

namespace evonas {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;
using Labels = Eigen::VectorXi;
using IndexList = std::vector<Eigen::Index>;

class DatasetError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A binary classification table: one row per instance, labels in {0,1}.
struct Dataset {
  std::string name;
  Matrix features;
  Labels labels;

  Eigen::Index size() const { return features.rows(); }
  Eigen::Index attribute_count() const { return features.cols(); }

  /// Rows `rows` in the given order.
  Dataset subset(const IndexList& rows) const;

  /// Throws DatasetError if any invariant is broken.
  void validate() const;
};

/// Column reference by header name or zero-based position. Negative positions
/// count from the end, so -1 is the last column.
using ColumnRef = std::variant<std::string, int>;

using LabelMap = std::map<std::string, int>;

/// Parses "m=0,r=1". Values must be 0 or 1.
LabelMap parse_label_map(const std::string& text);

struct CsvOptions {
  ColumnRef label_column = -1;
  std::optional<LabelMap> label_map;
  /// Columns ignored entirely (e.g. an id column).
  std::vector<ColumnRef> drop_columns;
};

/// Reads an RFC-4180 style file. The first row is treated as a header when
/// any of its feature cells is non-numeric. Errors carry 1-based row and
/// column positions.
Dataset load_csv(const std::filesystem::path& path, const CsvOptions& options = {});

/// Writes features followed by a `label` column, with a header row and
/// round-trip precision.
void write_csv(const Dataset& dataset, const std::filesystem::path& path);

/// Row permutation determined by `seed`; features and labels move together.
Dataset shuffle(const Dataset& dataset, std::uint64_t seed);

/// Assignment of every instance to one of `fold_count` folds. A single fold
/// means resubstitution: every row is both trained and tested on.
struct FoldSplit {
  int fold_count = 0;
  std::vector<int> assignments;
  std::uint64_t seed = 0;

  IndexList test_indices(int fold) const;
  IndexList train_indices(int fold) const;
  std::vector<std::size_t> fold_sizes() const;
};

/// Shuffles 0..n-1 with `seed` and deals the result round-robin into k folds.
/// Requires 2 <= k <= n.
FoldSplit kfold(Eigen::Index instance_count, int k, std::uint64_t seed);
inline FoldSplit kfold(const Dataset& dataset, int k, std::uint64_t seed) {
  return kfold(dataset.size(), k, seed);
}

/// One fold holding everything; for toy problems with too few rows to split.
FoldSplit resubstitution(Eigen::Index instance_count);

/// Per-column standardization. Fit on training rows, apply to any rows.
/// Constant columns map to zero.
struct Standardizer {
  Eigen::RowVectorXd mean;
  Eigen::RowVectorXd scale;

  static Standardizer fit(const Matrix& features);
  Matrix transform(const Matrix& features) const;
};

/// Standardizes every column using statistics of the whole dataset.
Dataset feature_scale(const Dataset& dataset);

}  // namespace evonas
