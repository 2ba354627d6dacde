#include "evonas/dataset.hpp"

#include <algorithm>
#include <set>
#include <tuple>

#include <gtest/gtest.h>

#include "evonas/random.hpp"
#include "test_util.hpp"

namespace evonas {
namespace {

using test::TempDir;

Dataset random_dataset(Eigen::Index rows, Eigen::Index cols, std::uint64_t seed) {
  Rng rng(seed);
  Dataset d;
  d.name = "random";
  d.features.resize(rows, cols);
  d.labels.resize(rows);
  for (Eigen::Index r = 0; r < rows; ++r) {
    for (Eigen::Index c = 0; c < cols; ++c) d.features(r, c) = standard_normal(rng) * 100.0;
    d.labels[r] = static_cast<int>(uniform_index(rng, 2));
  }
  return d;
}

std::vector<std::pair<std::vector<double>, int>> rows_of(const Dataset& d) {
  std::vector<std::pair<std::vector<double>, int>> rows;
  for (Eigen::Index r = 0; r < d.size(); ++r) {
    std::vector<double> x(d.features.row(r).begin(), d.features.row(r).end());
    rows.emplace_back(std::move(x), d.labels[r]);
  }
  std::sort(rows.begin(), rows.end());
  return rows;
}

TEST(LoadCsv, MapsTextLabels) {
  TempDir dir;
  const auto path = dir.write("sonar.csv", "0.02,0.0371,m\n0.0453,0.0523,r\n0.0262,0.0582,r\n");
  CsvOptions opt;
  opt.label_map = parse_label_map("m=0,r=1");
  const Dataset d = load_csv(path, opt);
  ASSERT_EQ(d.size(), 3);
  EXPECT_EQ(d.attribute_count(), 2);
  EXPECT_EQ(d.labels[0], 0);
  EXPECT_EQ(d.labels[1], 1);
  EXPECT_DOUBLE_EQ(d.features(0, 1), 0.0371);
}

TEST(LoadCsv, NumericLabelsPassThrough) {
  TempDir dir;
  const auto path = dir.write("four.csv", "a,b,label\n1,2,0\n3,4,1\n5,6,1\n7,8,0\n");
  const Dataset d = load_csv(path);
  EXPECT_EQ(d.labels, (Labels(4) << 0, 1, 1, 0).finished());
  EXPECT_EQ(d.features.row(3), Eigen::RowVector2d(7, 8));
}

TEST(LoadCsv, WbcdShape) {
  CsvOptions opt;
  opt.label_column = std::string("diagnosis");
  opt.drop_columns = {std::string("id")};
  opt.label_map = parse_label_map("M=1,B=0");
  const Dataset d = load_csv(test::data_file("wbcd.csv"), opt);
  EXPECT_EQ(d.size(), 569);
  EXPECT_EQ(d.attribute_count(), 30);
  EXPECT_EQ(d.labels.sum(), 212);  // malignant count
}

TEST(LoadCsv, QuotedFieldsAndHeaderlessLabelFirst) {
  TempDir dir;
  const auto path = dir.write("q.csv", "\"yes\",\"1.5\",2\r\n\"no\",\"2.5\",3\r\n");
  CsvOptions opt;
  opt.label_column = 0;
  opt.label_map = parse_label_map("yes=1,no=0");
  const Dataset d = load_csv(path, opt);
  EXPECT_EQ(d.size(), 2);
  EXPECT_EQ(d.labels[0], 1);
  EXPECT_DOUBLE_EQ(d.features(1, 0), 2.5);
}

TEST(LoadCsv, MissingFile) {
  EXPECT_THROW(load_csv("/nonexistent/data.csv"), DatasetError);
}

TEST(LoadCsv, RaggedRowReportsLine) {
  TempDir dir;
  const auto path = dir.write("ragged.csv", "1,2,0\n3,1\n");
  try {
    load_csv(path);
    FAIL() << "expected DatasetError";
  } catch (const DatasetError& e) {
    EXPECT_NE(std::string(e.what()).find("row 2"), std::string::npos) << e.what();
  }
}

TEST(LoadCsv, UnmappableLabelReportsPosition) {
  TempDir dir;
  const auto path = dir.write("bad.csv", "1,2,m\n3,4,x\n");
  CsvOptions opt;
  opt.label_map = parse_label_map("m=0,r=1");
  try {
    load_csv(path, opt);
    FAIL() << "expected DatasetError";
  } catch (const DatasetError& e) {
    EXPECT_NE(std::string(e.what()).find("row 2, column 3"), std::string::npos) << e.what();
  }
}

TEST(LoadCsv, NonNumericFeatureReportsPosition) {
  TempDir dir;
  const auto path = dir.write("nan.csv", "a,b,label\n1,2,0\n3,?,1\n");
  try {
    load_csv(path);
    FAIL() << "expected DatasetError";
  } catch (const DatasetError& e) {
    EXPECT_NE(std::string(e.what()).find("row 3, column 2"), std::string::npos) << e.what();
  }
}

TEST(LoadCsv, SingleClassRejected) {
  TempDir dir;
  const auto path = dir.write("one.csv", "1,2,1\n3,4,1\n");
  EXPECT_THROW(load_csv(path), DatasetError);
}

TEST(LoadCsv, LabelMapSyntax) {
  EXPECT_THROW(parse_label_map("m=2"), DatasetError);
  EXPECT_THROW(parse_label_map("m"), DatasetError);
  EXPECT_EQ(parse_label_map(" m = 0 , r=1").at("r"), 1);
}

TEST(WriteCsv, RoundTripIsExact) {
  TempDir dir;
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    const Dataset d = random_dataset(17, 4, seed);
    const auto path = dir.path() / ("rt" + std::to_string(seed) + ".csv");
    write_csv(d, path);
    const Dataset back = load_csv(path);
    ASSERT_EQ(back.size(), d.size());
    EXPECT_LE((back.features - d.features).cwiseAbs().maxCoeff(), 1e-12);
    EXPECT_EQ(back.labels, d.labels);
  }
}

TEST(Shuffle, DeterministicAndPreservesPairs) {
  const Dataset d = random_dataset(50, 3, 11);
  const Dataset a = shuffle(d, 99);
  const Dataset b = shuffle(d, 99);
  EXPECT_EQ(a.features, b.features);
  EXPECT_EQ(a.labels, b.labels);
  EXPECT_NE(a.features, d.features);
  EXPECT_EQ(rows_of(a), rows_of(d));
}

TEST(Shuffle, Singleton) {
  const Dataset d = random_dataset(1, 3, 5);
  const Dataset s = shuffle(d, 42);
  EXPECT_EQ(s.features, d.features);
  EXPECT_EQ(s.labels, d.labels);
}

TEST(KFold, SizesFor208) {
  auto sizes = kfold(208, 5, 1).fold_sizes();
  std::sort(sizes.begin(), sizes.end());
  EXPECT_EQ(sizes, (std::vector<std::size_t>{41, 41, 42, 42, 42}));
}

TEST(KFold, LeaveOneOut) {
  const FoldSplit s = kfold(10, 10, 3);
  for (std::size_t size : s.fold_sizes()) EXPECT_EQ(size, 1u);
}

TEST(KFold, SizesFor569) {
  auto sizes = kfold(569, 5, 8).fold_sizes();
  std::sort(sizes.begin(), sizes.end());
  EXPECT_EQ(sizes, (std::vector<std::size_t>{113, 114, 114, 114, 114}));
}

TEST(KFold, RejectsOutOfRange) {
  EXPECT_THROW(kfold(10, 1, 0), DatasetError);
  EXPECT_THROW(kfold(10, 11, 0), DatasetError);
}

TEST(KFold, PartitionProperty) {
  Rng rng(2024);
  for (int trial = 0; trial < 200; ++trial) {
    const auto n = static_cast<Eigen::Index>(2 + uniform_index(rng, 300));
    const int k = uniform_int(rng, 2, static_cast<int>(std::min<Eigen::Index>(n, 20)));
    const std::uint64_t seed = rng();
    const FoldSplit s = kfold(n, k, seed);

    std::set<Eigen::Index> seen;
    for (int f = 0; f < k; ++f) {
      const auto test = s.test_indices(f);
      const auto train = s.train_indices(f);
      EXPECT_EQ(static_cast<Eigen::Index>(test.size() + train.size()), n);
      for (auto i : test) EXPECT_TRUE(seen.insert(i).second) << "index in two folds";
    }
    EXPECT_EQ(static_cast<Eigen::Index>(seen.size()), n);
    const auto sizes = s.fold_sizes();
    EXPECT_LE(*std::max_element(sizes.begin(), sizes.end()) - *std::min_element(sizes.begin(), sizes.end()), 1u);
    EXPECT_EQ(kfold(n, k, seed).assignments, s.assignments);
  }
}

TEST(FeatureScale, Standardizes) {
  Dataset d;
  d.features = (Matrix(3, 2) << 1, 5, 2, 5, 3, 5).finished();
  d.labels = Labels::Zero(3);
  const Dataset s = feature_scale(d);
  EXPECT_NEAR(s.features.col(0).mean(), 0.0, 1e-15);
  EXPECT_NEAR(s.features.col(0).squaredNorm() / 3.0, 1.0, 1e-15);
  EXPECT_EQ(s.features.col(1), Eigen::Vector3d::Zero());
}

TEST(FeatureScale, RecomputedMeanNearZero) {
  const Dataset d = random_dataset(101, 6, 77);
  const Dataset s = feature_scale(d);
  for (Eigen::Index c = 0; c < s.attribute_count(); ++c) {
    EXPECT_LT(std::abs(s.features.col(c).mean()), 1e-12);
    EXPECT_NEAR(s.features.col(c).squaredNorm() / 101.0, 1.0, 1e-12);
  }
}

TEST(FeatureScale, TrainStatisticsApplyToTest) {
  const Matrix train = (Matrix(2, 1) << 0, 2).finished();
  const Matrix test = (Matrix(1, 1) << 4).finished();
  const Standardizer st = Standardizer::fit(train);
  EXPECT_DOUBLE_EQ(st.transform(test)(0, 0), 3.0);
}

}  // namespace
}  // namespace evonas
