#include "evonas/report.hpp"

#include <cstdio>
#include <istream>
#include <ostream>
#include <sstream>

#include "evonas/genome.hpp"

namespace evonas {

namespace {

std::string fixed(double v, int digits) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", digits, v);
  return buf;
}

std::string exact(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

template <typename Derived>
void write_values(std::ostream& out, const char* key, const Eigen::DenseBase<Derived>& values) {
  out << key;
  // Row-major order regardless of storage order.
  for (Eigen::Index r = 0; r < values.rows(); ++r)
    for (Eigen::Index c = 0; c < values.cols(); ++c) out << ' ' << exact(values(r, c));
  out << '\n';
}

std::istringstream expect_line(std::istream& in, const std::string& key) {
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::istringstream ss(line);
    std::string word;
    ss >> word;
    if (word != key) throw ParseError("network file: expected '" + key + "', found '" + word + "'");
    return ss;
  }
  throw ParseError("network file: unexpected end before '" + key + "'");
}

std::vector<double> read_values(std::istringstream& ss) {
  std::vector<double> v;
  std::string tok;
  while (ss >> tok) {
    try {
      v.push_back(std::stod(tok));
    } catch (const std::exception&) {
      throw ParseError("network file: bad number '" + tok + "'");
    }
  }
  return v;
}

}  // namespace

std::string format_metrics(double f1, double mae, double rmse) {
  return "f1=" + fixed(f1, 3) + " mae=" + fixed(mae, 3) + " rmse=" + fixed(rmse, 3);
}

void write_history_csv(std::ostream& out, std::span<const GenerationReport> history) {
  out << "generation,best_f1,mean_f1,best_mae,best_rmse\n";
  for (const auto& r : history)
    out << r.generation << ',' << fixed(r.best_fitness, 6) << ',' << fixed(r.mean_fitness, 6) << ','
        << fixed(r.best_mae, 6) << ',' << fixed(r.best_rmse, 6) << '\n';
}

void write_diversity_csv(std::ostream& out, std::span<const GenerationReport> history) {
  out << "generation,gene,value,count\n";
  for (const auto& r : history) {
    for (std::size_t i = 0; i < Genotype::kLength; ++i) {
      for (const auto& [code, count] : r.histograms[i]) {
        Genotype probe;
        probe.set_gene(i, code);
        out << r.generation << ',' << kGeneNames[i] << ',' << gene_value_string(probe, i) << ','
            << count << '\n';
      }
    }
  }
}

void write_fittest(std::ostream& out, const FitnessRecord& best, const TrainedModel& model) {
  out << format_genotype(best.genotype) << '\n';
  out << format_metrics(best.f_measure, best.mae, best.rmse) << '\n';
  write_network(out, model.network, model.seed, model.scaler);
}

void write_baseline_table(std::ostream& out, const std::string& dataset_name,
                          std::span<const BaselineResult> results) {
  char buf[128];
  std::snprintf(buf, sizeof buf, "%-10s %-7s %10s\n", "Algorithm", "Metric", dataset_name.c_str());
  out << buf;
  for (const auto& r : results) {
    const std::pair<const char*, double> rows[] = {{"MAE", r.mae}, {"RMSE", r.rmse}, {"F1", r.f1}};
    bool first = true;
    for (const auto& [metric, value] : rows) {
      std::snprintf(buf, sizeof buf, "%-10s %-7s %10s\n", first ? r.name.c_str() : "", metric,
                    fixed(value, 3).c_str());
      out << buf;
      first = false;
    }
  }
}

void write_network(std::ostream& out, const DenseNetwork<double>& net, std::uint64_t seed,
                   const std::optional<Standardizer>& scaler) {
  const NetworkConfig& c = net.config;
  out << "network v1\n";
  out << "config " << c.hidden_layers << ' ' << c.nodes << ' ' << to_string(c.input_activation) << ' '
      << to_string(c.hidden_activation) << ' ' << to_string(c.output_activation) << ' '
      << to_string(c.optimizer) << ' ' << c.epochs << ' ' << c.batch_size << ' ' << c.input_dim << ' '
      << (c.output_bias ? 1 : 0) << '\n';
  out << "seed " << seed << '\n';
  out << "layers " << net.layers.size() << '\n';
  for (std::size_t l = 0; l < net.layers.size(); ++l) {
    const auto& layer = net.layers[l];
    out << "layer " << l << ' ' << layer.units() << ' ' << layer.fan_in() << ' '
        << to_string(layer.activation) << ' ' << (layer.has_bias ? 1 : 0) << '\n';
    write_values(out, "weights", layer.weights);
    write_values(out, "bias", layer.bias.transpose());
  }
  if (scaler) {
    write_values(out, "scaler_mean", scaler->mean);
    write_values(out, "scaler_scale", scaler->scale);
  }
  out << "end\n";
}

LoadedNetwork read_network(std::istream& in) {
  LoadedNetwork result;
  {
    auto ss = expect_line(in, "network");
    std::string version;
    ss >> version;
    if (version != "v1") throw ParseError("network file: unsupported version '" + version + "'");
  }
  NetworkConfig& c = result.network.config;
  {
    auto ss = expect_line(in, "config");
    std::string fi, fh, fo, opt;
    int bias = 1;
    if (!(ss >> c.hidden_layers >> c.nodes >> fi >> fh >> fo >> opt >> c.epochs >> c.batch_size >>
          c.input_dim >> bias))
      throw ParseError("network file: malformed config line");
    c.input_activation = parse_activation(fi);
    c.hidden_activation = parse_activation(fh);
    c.output_activation = parse_activation(fo);
    c.optimizer = parse_optimizer(opt);
    c.output_bias = bias != 0;
  }
  if (!(expect_line(in, "seed") >> result.seed)) throw ParseError("network file: malformed seed");
  std::size_t count = 0;
  if (!(expect_line(in, "layers") >> count)) throw ParseError("network file: malformed layer count");
  for (std::size_t l = 0; l < count; ++l) {
    auto ss = expect_line(in, "layer");
    std::size_t index = 0;
    Eigen::Index units = 0, fan_in = 0;
    std::string act;
    int bias = 1;
    if (!(ss >> index >> units >> fan_in >> act >> bias) || index != l || units < 1 || fan_in < 1)
      throw ParseError("network file: malformed layer header " + std::to_string(l));
    DenseLayer<double> layer;
    layer.activation = parse_activation(act);
    layer.has_bias = bias != 0;
    auto ws = expect_line(in, "weights");
    const auto w = read_values(ws);
    auto bs = expect_line(in, "bias");
    const auto b = read_values(bs);
    if (static_cast<Eigen::Index>(w.size()) != units * fan_in || static_cast<Eigen::Index>(b.size()) != units)
      throw ParseError("network file: layer " + std::to_string(l) + " has the wrong number of values");
    layer.weights = Eigen::Map<const Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>>(
        w.data(), units, fan_in);
    layer.bias = Eigen::Map<const Eigen::VectorXd>(b.data(), units);
    result.network.layers.push_back(std::move(layer));
  }

  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::istringstream ss(line);
    std::string key;
    ss >> key;
    if (key == "end") return result;
    const auto values = read_values(ss);
    const Eigen::RowVectorXd row =
        Eigen::Map<const Eigen::RowVectorXd>(values.data(), static_cast<Eigen::Index>(values.size()));
    if (!result.scaler) result.scaler.emplace();
    if (key == "scaler_mean")
      result.scaler->mean = row;
    else if (key == "scaler_scale")
      result.scaler->scale = row;
    else
      throw ParseError("network file: unexpected key '" + key + "'");
  }
  throw ParseError("network file: missing 'end'");
}

}  // namespace evonas
