#include <cstdint>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "json.hpp"
#include "mdim/asymptotics.hpp"
#include "mdim/experiments.hpp"
#include "mdim/graph.hpp"
#include "mdim/metric_dimension.hpp"
#include "mdim/random.hpp"
#include "mdim/series.hpp"

using nlohmann::ordered_json;

namespace {

ordered_json witness_json(const mdim::ResolvingWitness& w) {
  ordered_json j;
  j["beta"] = w.beta;
  j["witness"] = w.witness;
  return j;
}

ordered_json series_json(const mdim::TruncatedSeries& s, bool at_y) {
  ordered_json coeffs = ordered_json::array();
  for (std::size_t n = 0; n <= s.order(); ++n) {
    if (s[n].is_zero()) continue;
    ordered_json entry;
    entry["n"] = n;
    ordered_json terms = ordered_json::array();
    if (at_y) {
      for (const auto& [power, c] : s[n].collapse_y()) terms.push_back({{"y", power}, {"coeff", c.get_str()}});
    } else {
      for (const auto& t : s[n].terms()) terms.push_back({{"u", t.u}, {"v", t.v}, {"coeff", t.coeff.get_str()}});
    }
    entry["terms"] = terms;
    coeffs.push_back(entry);
  }
  return coeffs;
}

template <class Real>
std::string digits(const Real& x, int precision) {
  std::ostringstream out;
  out << std::setprecision(precision) << x;
  return out.str();
}

template <class Real>
ordered_json constants_json(const mdim::AsymptoticConstants<Real>& k, int precision) {
  auto put = [&](const Real& x) -> ordered_json {
    if constexpr (std::is_same_v<Real, double>) {
      return x;
    } else {
      return digits(x, precision);
    }
  };
  ordered_json j;
  j["rho1"] = put(k.rho1);
  j["rho_d1"] = put(k.rho_d1);
  j["rho_d2"] = put(k.rho_d2);
  j["R1"] = put(k.R1);
  j["R_d1"] = put(k.R_d1);
  j["R_d2"] = put(k.R_d2);
  j["mu"] = put(k.mu);
  j["sigma2"] = put(k.sigma2);
  return j;
}

void print_graph(const mdim::Graph& g) { std::cout << mdim::serialize_graph(g); }

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Metric dimension of random forests and sparse random graphs"};
  app.require_subcommand(1);

  std::string graph_path;
  std::size_t cap = mdim::kDefaultBruteForceCap;
  auto* exact = app.add_subcommand("exact", "Metric dimension of a forest via leaves and legs");
  exact->add_option("--graph", graph_path, "Edge-list file")->required();
  auto* brute = app.add_subcommand("brute", "Metric dimension by exhaustive subset search");
  brute->add_option("--graph", graph_path, "Edge-list file")->required();
  brute->add_option("--cap", cap, "Largest vertex count accepted");

  std::size_t n = 0;
  std::uint64_t seed = 0;
  double c = 0;
  auto* sample_tree = app.add_subcommand("sample-tree", "Uniform labelled tree");
  auto* sample_forest = app.add_subcommand("sample-forest", "Uniform labelled forest");
  auto* sample_gnp = app.add_subcommand("sample-gnp", "Erdos-Renyi graph with p = c/n");
  for (auto* sub : {sample_tree, sample_forest, sample_gnp}) {
    sub->add_option("--n", n, "Vertex count")->required();
    sub->add_option("--seed", seed, "RNG seed");
  }
  sample_gnp->add_option("--c", c, "Edge density")->required();

  std::size_t order = mdim::kDefaultSeriesOrder;
  std::string which = "T";
  bool at_y = false;
  auto* series = app.add_subcommand("series", "Exact coefficients of a generating function");
  series->add_option("--order", order, "Truncation order");
  series->add_option("--which", which, "Series")->check(CLI::IsMember({"P", "S", "T", "G"}));
  series->add_flag("--at-y", at_y, "Substitute u = y, v = 1/y");

  std::string dist_model = "tree";
  auto* dist = app.add_subcommand("dist", "Exact law of the metric dimension");
  dist->add_option("--model", dist_model, "tree or forest")->check(CLI::IsMember({"tree", "forest"}));
  dist->add_option("--n", n, "Size")->required();

  bool extended = false;
  auto* constants = app.add_subcommand("constants", "Limiting constants of the uniform model");
  constants->add_flag("--extended", extended, "50-digit arithmetic");

  double c_min = 0, c_max = 0.99, step = 0.01;
  auto* curve = app.add_subcommand("c-curve", "Mean constant of G(n, c/n) as a function of c");
  curve->add_option("--min", c_min, "Smallest c");
  curve->add_option("--max", c_max, "Largest c");
  curve->add_option("--step", step, "Grid step");

  std::string mc_model = "uniform-tree";
  std::string format = "csv";
  std::optional<double> mc_c, mc_exponent;
  mdim::ExperimentConfig cfg;
  bool assert_tolerances = false;
  auto* mc = app.add_subcommand("mc", "Monte Carlo experiment");
  mc->add_option("--model", mc_model, "uniform-tree, uniform-forest or gnp");
  mc->add_option("--n", cfg.n, "Size")->required();
  mc->add_option("--c", mc_c, "gnp: p = c/n");
  mc->add_option("--p-exponent", mc_exponent, "gnp: p = n^-a");
  mc->add_option("--replicates", cfg.replicates, "Replicate count");
  mc->add_option("--seed", cfg.seed, "RNG seed");
  mc->add_option("--out", cfg.output, "Output file (stdout if omitted)");
  mc->add_option("--format", format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
  mc->add_option("--workers", cfg.workers, "Worker threads (default MDIM_WORKERS or all cores)");
  mc->add_option("--cap", cfg.beta_options.brute_force_cap, "Brute-force size for non-tree components");
  mc->add_option("--budget", cfg.beta_options.search_budget, "Search node budget per large non-tree component");
  mc->add_flag("--assert", assert_tolerances, "Exit nonzero if an acceptance tolerance fails");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*exact) {
      std::cout << witness_json(mdim::forest_beta(mdim::read_graph_file(graph_path))).dump() << '\n';
    } else if (*brute) {
      std::cout << witness_json(mdim::brute_force_beta(mdim::read_graph_file(graph_path), cap)).dump() << '\n';
    } else if (*sample_tree) {
      mdim::Rng rng(seed, 0);
      print_graph(mdim::sample_uniform_tree(n, rng));
    } else if (*sample_forest) {
      mdim::Rng rng(seed, 0);
      print_graph(mdim::sample_uniform_forest(n, mdim::forest_counts(n), rng));
    } else if (*sample_gnp) {
      mdim::Rng rng(seed, 0);
      print_graph(mdim::sample_gnp(n, n == 0 ? 0.0 : c / static_cast<double>(n), rng));
    } else if (*series) {
      const auto sys = mdim::solve_series_system(order);
      const mdim::TruncatedSeries& s = which == "P"   ? sys.mobiles
                                       : which == "S" ? sys.special
                                       : which == "T" ? sys.trees
                                                      : sys.forests;
      ordered_json j;
      j["which"] = which;
      j["order"] = order;
      j["variables"] = at_y ? "y" : "u,v";
      j["coefficients"] = series_json(s, at_y);
      std::cout << j.dump(2) << '\n';
    } else if (*dist) {
      const auto sys = mdim::solve_series_system(std::max<std::size_t>(n, 1));
      const auto law = mdim::beta_distribution(dist_model == "tree" ? sys.trees : sys.forests, n);
      ordered_json j;
      j["model"] = dist_model;
      j["n"] = n;
      ordered_json pmf = ordered_json::object();
      for (const auto& [beta, p] : law.pmf) pmf[std::to_string(beta)] = p.get_str();
      j["pmf"] = pmf;
      j["mean"] = law.mean().get_str();
      j["variance"] = law.variance().get_str();
      std::cout << j.dump(2) << '\n';
    } else if (*constants) {
      if (extended) {
        std::cout << constants_json(mdim::tree_constants<mdim::Extended>(), 40).dump(2) << '\n';
      } else {
        std::cout << constants_json(mdim::tree_constants<double>(), 17).dump(2) << '\n';
      }
    } else if (*curve) {
      std::cout << "c,C\n" << std::setprecision(17);
      for (const auto& p : mdim::c_curve(c_min, c_max, step)) std::cout << p.c << ',' << p.value << '\n';
    } else if (*mc) {
      cfg.model = mdim::parse_model(mc_model);
      cfg.format = mdim::parse_format(format);
      cfg.c = mc_c;
      cfg.p_exponent = mc_exponent;
      const auto result = mdim::run_experiment(cfg);
      if (cfg.output.empty()) {
        std::cout << (cfg.format == mdim::OutputFormat::Csv ? mdim::format_csv(result) : mdim::format_json(result));
      } else {
        mdim::emit(result, cfg.output, cfg.format);
      }
      if (assert_tolerances) {
        bool ok = true;
        for (const auto& check : mdim::check_tolerances(result)) {
          std::cerr << (check.pass ? "ok   " : "FAIL ") << check.name << " = " << check.value << " (threshold "
                    << check.threshold << ")\n";
          ok = ok && check.pass;
        }
        if (!ok) return 2;
      }
    }
  } catch (const std::exception& e) {
    std::cerr << "mdim: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
