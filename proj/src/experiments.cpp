#include "mdim/experiments.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <iomanip>
#include <limits>
#include <sstream>
#include <stdexcept>
#include <thread>

#include "json.hpp"
#include "mdim/asymptotics.hpp"
#include "mdim/random.hpp"

namespace mdim {

std::string_view to_string(Model model) {
  switch (model) {
    case Model::UniformTree: return "uniform-tree";
    case Model::UniformForest: return "uniform-forest";
    case Model::Gnp: return "gnp";
  }
  return "unknown";
}

Model parse_model(std::string_view name) {
  if (name == "uniform-tree" || name == "tree") return Model::UniformTree;
  if (name == "uniform-forest" || name == "forest") return Model::UniformForest;
  if (name == "gnp") return Model::Gnp;
  throw std::invalid_argument("unknown model '" + std::string(name) + "'");
}

std::string_view to_string(OutputFormat format) { return format == OutputFormat::Csv ? "csv" : "json"; }

OutputFormat parse_format(std::string_view name) {
  if (name == "csv") return OutputFormat::Csv;
  if (name == "json") return OutputFormat::Json;
  throw std::invalid_argument("unknown format '" + std::string(name) + "'");
}

void ExperimentConfig::validate() const {
  if (n < 1) throw std::invalid_argument("n must be >= 1");
  if (replicates < 1) throw std::invalid_argument("replicates must be >= 1");
  if (model == Model::Gnp) {
    if (c.has_value() == p_exponent.has_value()) {
      throw std::invalid_argument("gnp needs exactly one of c or p_exponent");
    }
    if (c && !(*c >= 0 && *c <= static_cast<double>(n))) throw std::invalid_argument("c must lie in [0, n]");
    if (p_exponent && !(*p_exponent >= 0)) throw std::invalid_argument("p_exponent must be >= 0");
  } else if (c || p_exponent) {
    throw std::invalid_argument("c and p_exponent apply to the gnp model only");
  }
}

double ExperimentConfig::edge_probability() const {
  if (c) return *c / static_cast<double>(n);
  if (p_exponent) return std::pow(static_cast<double>(n), -*p_exponent);
  throw std::logic_error("edge probability requested for a non-gnp config");
}

NormalityStats normality_stats(std::span<const double> samples, KsMode mode) {
  const std::size_t n = samples.size();
  if (n < kMinNormalitySamples) {
    throw std::domain_error("normality statistics need at least " + std::to_string(kMinNormalitySamples) +
                            " samples, got " + std::to_string(n));
  }
  NormalityStats out;
  double sum = 0;
  for (double x : samples) sum += x;
  out.mean = sum / static_cast<double>(n);
  double m2 = 0, m3 = 0, m4 = 0;
  for (double x : samples) {
    const double d = x - out.mean;
    const double d2 = d * d;
    m2 += d2;
    m3 += d2 * d;
    m4 += d2 * d2;
  }
  const auto nd = static_cast<double>(n);
  m2 /= nd;
  m3 /= nd;
  m4 /= nd;
  if (!(m2 > 0)) throw std::domain_error("normality statistics undefined for zero-variance samples");
  out.variance = m2 * nd / (nd - 1);
  out.skewness = m3 / std::pow(m2, 1.5);
  out.excess_kurtosis = m4 / (m2 * m2) - 3.0;

  const double sd = std::sqrt(out.variance);
  auto phi = [](double z) { return 0.5 * std::erfc(-z / std::sqrt(2.0)); };
  std::vector<double> sorted(samples.begin(), samples.end());
  std::sort(sorted.begin(), sorted.end());
  double d = 0;
  if (mode == KsMode::Continuous) {
    for (std::size_t i = 0; i < n; ++i) {
      const double f = phi((sorted[i] - out.mean) / sd);
      d = std::max({d, static_cast<double>(i + 1) / nd - f, f - static_cast<double>(i) / nd});
    }
  } else {
    const double lo = std::floor(sorted.front());
    const double hi = std::floor(sorted.back());
    std::size_t idx = 0;
    for (double k = lo - 1; k <= hi; k += 1) {
      while (idx < n && sorted[idx] <= k) ++idx;
      const double ecdf = static_cast<double>(idx) / nd;
      d = std::max(d, std::abs(ecdf - phi((k + 0.5 - out.mean) / sd)));
    }
  }
  out.ks = d;
  return out;
}

std::size_t default_worker_count() {
  if (const char* env = std::getenv("MDIM_WORKERS")) {
    std::size_t value = 0;
    auto [ptr, ec] = std::from_chars(env, env + std::char_traits<char>::length(env), value);
    if (ec == std::errc() && value > 0) return value;
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

void summarize(ExperimentResult& r) {
  std::vector<double> values;
  values.reserve(r.betas.size());
  for (const auto& b : r.betas) {
    if (b) values.push_back(static_cast<double>(*b));
  }
  r.included = values.size();
  r.excluded = r.betas.size() - values.size();
  r.exclusion_rate = r.betas.empty() ? 0.0 : static_cast<double>(r.excluded) / static_cast<double>(r.betas.size());
  const auto n = static_cast<double>(r.config.n);
  r.mean = r.variance = 0;
  if (!values.empty()) {
    double sum = 0;
    for (double v : values) sum += v;
    r.mean = sum / static_cast<double>(values.size());
  }
  if (values.size() >= 2) {
    double ss = 0;
    for (double v : values) ss += (v - r.mean) * (v - r.mean);
    r.variance = ss / static_cast<double>(values.size() - 1);
  }
  r.mean_over_n = r.mean / n;
  r.variance_over_n = r.variance / n;
  r.normality.reset();
  if (values.size() >= kMinNormalitySamples && r.variance > 0) {
    r.normality = normality_stats(values, KsMode::Lattice);
  }
}

ExperimentResult run_experiment(const ExperimentConfig& cfg) {
  cfg.validate();
  ExperimentResult result;
  result.config = cfg;
  result.betas.assign(cfg.replicates, std::nullopt);

  std::optional<ForestCountTable> table;
  if (cfg.model == Model::UniformForest) table = forest_counts(cfg.n);
  const double p = cfg.model == Model::Gnp ? cfg.edge_probability() : 0.0;

  struct ReplicateInfo {
    std::size_t non_tree_components = 0;
    std::size_t non_tree_vertices = 0;
  };
  std::vector<ReplicateInfo> info(cfg.replicates);

  auto run_one = [&](std::size_t i) {
    Rng rng(cfg.seed, i);
    switch (cfg.model) {
      case Model::UniformTree:
        result.betas[i] = forest_beta(sample_uniform_tree(cfg.n, rng)).beta;
        break;
      case Model::UniformForest:
        result.betas[i] = forest_beta(sample_uniform_forest(cfg.n, *table, rng)).beta;
        break;
      case Model::Gnp: {
        const auto beta = graph_beta(sample_gnp(cfg.n, p, rng), cfg.beta_options);
        info[i] = {beta.non_tree_components, beta.non_tree_vertices};
        if (beta.unresolved_components == 0) result.betas[i] = beta.beta;
        break;
      }
    }
  };

  const std::size_t workers =
      std::min(cfg.workers > 0 ? cfg.workers : default_worker_count(), cfg.replicates);
  if (workers <= 1) {
    for (std::size_t i = 0; i < cfg.replicates; ++i) run_one(i);
  } else {
    std::atomic<std::size_t> next{0};
    std::vector<std::exception_ptr> errors(workers);
    std::vector<std::thread> pool;
    for (std::size_t w = 0; w < workers; ++w) {
      pool.emplace_back([&, w] {
        try {
          for (std::size_t i = next++; i < cfg.replicates; i = next++) run_one(i);
        } catch (...) {
          errors[w] = std::current_exception();
        }
      });
    }
    for (auto& t : pool) t.join();
    for (const auto& e : errors) {
      if (e) std::rethrow_exception(e);
    }
  }

  for (const auto& ri : info) {
    result.non_tree_components += ri.non_tree_components;
    result.non_tree_vertices += ri.non_tree_vertices;
  }
  summarize(result);

  if (cfg.model == Model::Gnp) {
    if (cfg.c && *cfg.c > 0 && *cfg.c < 1) result.predicted_mean_constant = gnp_constant_closed(*cfg.c);
    if (cfg.p_exponent && *cfg.p_exponent > 1) result.predicted_mean_constant = 1.0;
  } else {
    const auto k = tree_constants<double>();
    result.predicted_mean_constant = k.mu;
    result.predicted_variance_constant = k.sigma2;
  }
  return result;
}

namespace {

std::string format_double(double x) {
  std::ostringstream out;
  out << std::setprecision(17) << x;
  return out.str();
}

}  // namespace

std::string format_csv(const ExperimentResult& r) {
  std::ostringstream out;
  out << "replicate,beta\n";
  for (std::size_t i = 0; i < r.betas.size(); ++i) {
    out << i << ',';
    if (r.betas[i]) {
      out << *r.betas[i];
    } else {
      out << "NA";
    }
    out << '\n';
  }
  out << "# summary\n";
  out << "key,value\n";
  out << "model," << to_string(r.config.model) << '\n';
  out << "n," << r.config.n << '\n';
  if (r.config.c) out << "c," << format_double(*r.config.c) << '\n';
  if (r.config.p_exponent) out << "p_exponent," << format_double(*r.config.p_exponent) << '\n';
  out << "replicates," << r.config.replicates << '\n';
  out << "seed," << r.config.seed << '\n';
  out << "included," << r.included << '\n';
  out << "excluded," << r.excluded << '\n';
  out << "exclusion_rate," << format_double(r.exclusion_rate) << '\n';
  out << "mean," << format_double(r.mean) << '\n';
  out << "variance," << format_double(r.variance) << '\n';
  out << "mean_over_n," << format_double(r.mean_over_n) << '\n';
  out << "variance_over_n," << format_double(r.variance_over_n) << '\n';
  if (r.normality) {
    out << "skewness," << format_double(r.normality->skewness) << '\n';
    out << "excess_kurtosis," << format_double(r.normality->excess_kurtosis) << '\n';
    out << "ks," << format_double(r.normality->ks) << '\n';
  }
  if (r.predicted_mean_constant) out << "predicted_mean_constant," << format_double(*r.predicted_mean_constant) << '\n';
  if (r.predicted_variance_constant) {
    out << "predicted_variance_constant," << format_double(*r.predicted_variance_constant) << '\n';
  }
  return out.str();
}

std::string format_json(const ExperimentResult& r) {
  using nlohmann::ordered_json;
  ordered_json j;
  j["schema_version"] = 1;
  ordered_json cfg;
  cfg["model"] = to_string(r.config.model);
  cfg["n"] = r.config.n;
  cfg["c"] = r.config.c ? ordered_json(*r.config.c) : ordered_json(nullptr);
  cfg["p_exponent"] = r.config.p_exponent ? ordered_json(*r.config.p_exponent) : ordered_json(nullptr);
  cfg["replicates"] = r.config.replicates;
  cfg["seed"] = r.config.seed;
  cfg["brute_force_cap"] = r.config.beta_options.brute_force_cap;
  cfg["search_budget"] = r.config.beta_options.search_budget;
  j["config"] = cfg;

  ordered_json stats;
  stats["included"] = r.included;
  stats["excluded"] = r.excluded;
  stats["exclusion_rate"] = r.exclusion_rate;
  stats["non_tree_components"] = r.non_tree_components;
  stats["non_tree_vertices"] = r.non_tree_vertices;
  stats["mean"] = r.mean;
  stats["variance"] = r.variance;
  stats["mean_over_n"] = r.mean_over_n;
  stats["variance_over_n"] = r.variance_over_n;
  if (r.normality) {
    stats["skewness"] = r.normality->skewness;
    stats["excess_kurtosis"] = r.normality->excess_kurtosis;
    stats["ks"] = r.normality->ks;
  }
  j["statistics"] = stats;

  ordered_json predicted;
  predicted["mean_constant"] = r.predicted_mean_constant ? ordered_json(*r.predicted_mean_constant) : ordered_json(nullptr);
  predicted["variance_constant"] =
      r.predicted_variance_constant ? ordered_json(*r.predicted_variance_constant) : ordered_json(nullptr);
  j["predicted"] = predicted;

  ordered_json betas = ordered_json::array();
  for (const auto& b : r.betas) betas.push_back(b ? ordered_json(*b) : ordered_json(nullptr));
  j["betas"] = betas;
  return j.dump(2) + "\n";
}

void emit(const ExperimentResult& result, const std::string& path, OutputFormat format) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write experiment output " + path);
  out << (format == OutputFormat::Csv ? format_csv(result) : format_json(result));
  if (!out) throw std::runtime_error("failed writing experiment output " + path);
}

std::vector<std::optional<std::size_t>> parse_csv_betas(std::string_view csv) {
  std::vector<std::optional<std::size_t>> out;
  std::istringstream in{std::string(csv)};
  std::string line;
  if (!std::getline(in, line) || line != "replicate,beta") throw std::invalid_argument("missing CSV header");
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') break;
    const auto comma = line.find(',');
    if (comma == std::string::npos) throw std::invalid_argument("malformed CSV row: " + line);
    const std::string value = line.substr(comma + 1);
    if (value == "NA") {
      out.emplace_back(std::nullopt);
    } else {
      out.emplace_back(static_cast<std::size_t>(std::stoull(value)));
    }
  }
  return out;
}

std::vector<ToleranceCheck> check_tolerances(const ExperimentResult& r) {
  std::vector<ToleranceCheck> checks;
  const bool uniform = r.config.model != Model::Gnp;
  const bool sparse = r.config.model == Model::Gnp && r.config.p_exponent && *r.config.p_exponent > 1;
  if (sparse) {
    checks.push_back({"mean_over_n", r.mean_over_n, 0.99, r.mean_over_n > 0.99});
    return checks;
  }
  if (r.predicted_mean_constant) {
    const double rel = std::abs(r.mean_over_n - *r.predicted_mean_constant) / *r.predicted_mean_constant;
    checks.push_back({"relative_mean_error", rel, 0.03, rel < 0.03});
  }
  if (uniform && r.predicted_variance_constant) {
    const double rel = std::abs(r.variance_over_n - *r.predicted_variance_constant) / *r.predicted_variance_constant;
    checks.push_back({"relative_variance_error", rel, 0.25, rel < 0.25});
  }
  if (r.normality) {
    checks.push_back({"ks", r.normality->ks, 0.05, r.normality->ks < 0.05});
    if (uniform) {
      const double skew = std::abs(r.normality->skewness);
      checks.push_back({"abs_skewness", skew, 0.15, skew < 0.15});
    }
  } else {
    checks.push_back({"ks", std::numeric_limits<double>::quiet_NaN(), 0.05, false});
  }
  return checks;
}

}  // namespace mdim
