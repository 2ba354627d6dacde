#include "evonas/report.hpp"

#include <sstream>

#include <gtest/gtest.h>

namespace evonas {
namespace {

TEST(Report, MetricsLine) {
  EXPECT_EQ(format_metrics(0.92, 0.151, 0.2364), "f1=0.920 mae=0.151 rmse=0.236");
}

TEST(Report, NetworkRoundTrip) {
  const Genotype g = parse_genotype("3,7,softsign,selu,tanh,adamax,59,4");
  auto net = build_network(g.to_config(5, false), 21);
  net.layers[1].bias.setConstant(0.1 / 3.0);
  Standardizer st;
  st.mean = Eigen::RowVectorXd::LinSpaced(5, -1.0, 1.0);
  st.scale = Eigen::RowVectorXd::Constant(5, 1.0 / 7.0);

  std::stringstream ss;
  write_network(ss, net, 21, st);
  const LoadedNetwork back = read_network(ss);
  EXPECT_EQ(back.seed, 21u);
  EXPECT_EQ(back.network.config, net.config);
  ASSERT_EQ(back.network.layers.size(), net.layers.size());
  for (std::size_t l = 0; l < net.layers.size(); ++l) {
    EXPECT_EQ(back.network.layers[l].weights, net.layers[l].weights);
    EXPECT_EQ(back.network.layers[l].bias, net.layers[l].bias);
    EXPECT_EQ(back.network.layers[l].activation, net.layers[l].activation);
    EXPECT_EQ(back.network.layers[l].has_bias, net.layers[l].has_bias);
  }
  ASSERT_TRUE(back.scaler);
  EXPECT_EQ(back.scaler->mean, st.mean);
  EXPECT_EQ(back.scaler->scale, st.scale);

  const Eigen::MatrixXd x = Eigen::MatrixXd::Random(4, 5);
  EXPECT_EQ(predict_raw(back.network, x), predict_raw(net, x));
}

TEST(Report, NetworkWithoutScaler) {
  auto net = build_network(parse_genotype("1,2,relu,relu,sigmoid,sgd,1,1").to_config(1), 3);
  std::stringstream ss;
  write_network(ss, net, 3);
  EXPECT_FALSE(read_network(ss).scaler);
}

TEST(Report, MalformedNetwork) {
  std::stringstream truncated("network v1\nconfig 1 2 relu relu sigmoid sgd 1 1 1 1\nseed 3\nlayers 3\n");
  EXPECT_THROW(read_network(truncated), ParseError);
  std::stringstream version("network v9\n");
  EXPECT_THROW(read_network(version), ParseError);
}

TEST(Report, HistoryAndDiversity) {
  GenerationReport r;
  r.generation = 0;
  r.best_fitness = 0.5;
  r.mean_fitness = 0.25;
  r.best_mae = 0.1;
  r.best_rmse = 0.2;
  r.histograms[0][2] = 3;
  r.histograms[3][static_cast<int>(Activation::Tanh)] = 3;
  const std::vector<GenerationReport> history{r};
  std::ostringstream h, d;
  write_history_csv(h, history);
  EXPECT_EQ(h.str(), "generation,best_f1,mean_f1,best_mae,best_rmse\n0,0.500000,0.250000,0.100000,0.200000\n");
  write_diversity_csv(d, history);
  EXPECT_EQ(d.str(), "generation,gene,value,count\n0,H,2,3\n0,F_H,tanh,3\n");
}

TEST(Report, BaselineTable) {
  const std::vector<BaselineResult> rows{{"GNB", 0.1, 0.2, 0.9}};
  std::ostringstream out;
  write_baseline_table(out, "wbcd", rows);
  EXPECT_EQ(out.str(),
            "Algorithm  Metric        wbcd\n"
            "GNB        MAE          0.100\n"
            "           RMSE         0.200\n"
            "           F1           0.900\n");
}

}  // namespace
}  // namespace evonas
