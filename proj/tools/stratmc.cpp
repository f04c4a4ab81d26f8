#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "stratmc/config.hpp"
#include "stratmc/directions.hpp"
#include "stratmc/error.hpp"
#include "stratmc/experiment.hpp"
#include "stratmc/format.hpp"
#include "stratmc/selftest.hpp"
#include "stratmc/table.hpp"

namespace {

constexpr int kExitConfig = 2;
constexpr int kExitNumeric = 3;

struct CommonFlags {
  std::string config;
  std::optional<std::uint64_t> seed;
  std::optional<unsigned> threads;
  std::string out;
  std::string format;
  std::string timing;
};

void add_common(CLI::App* cmd, CommonFlags& f, bool output) {
  cmd->add_option("--config", f.config, "Experiment configuration (INI)")->required();
  cmd->add_option("--seed", f.seed, "Override the configured seed");
  cmd->add_option("--threads", f.threads, "Worker threads; never changes results");
  if (output) {
    cmd->add_option("--out", f.out, "Output file (stdout when omitted)");
    cmd->add_option("--format", f.format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
    cmd->add_option("--timing", f.timing, "wall or none (none leaves time_ratio empty)")
        ->check(CLI::IsMember({"wall", "none"}));
  }
}

stratmc::ExperimentConfig load(const CommonFlags& f) {
  stratmc::ExperimentConfig cfg = stratmc::load_config(f.config);
  if (f.seed) cfg.seed = *f.seed;
  if (f.threads) cfg.threads = *f.threads;
  if (!f.out.empty()) cfg.out_path = f.out;
  if (!f.format.empty()) cfg.format = stratmc::parse_format(f.format);
  if (!f.timing.empty()) cfg.timing = stratmc::parse_timing(f.timing);
  cfg.validate();
  return cfg;
}

int run_directions(const CommonFlags& f, const std::vector<std::string>& names,
                   const std::string& export_dir) {
  stratmc::ExperimentConfig cfg = load(f);
  std::vector<stratmc::Method> methods;
  if (names.empty()) {
    methods = cfg.methods;
  } else {
    for (const auto& n : names) methods.push_back(stratmc::parse_method(n));
  }
  if (methods.empty()) throw stratmc::Error(stratmc::ErrorCode::ConfigInvalid, "no methods given");
  // Direction engines ignore the payoff; the context only needs a valid config.
  cfg.methods = methods;
  stratmc::ExperimentContext ctx(cfg);
  std::vector<std::pair<std::string, stratmc::Vector>> firsts;
  for (stratmc::Method m : methods) {
    const auto& d = ctx.directions(m);
    const std::string label(stratmc::to_string(m));
    std::cout << label << ": " << d.directions.count() << " direction(s) in R^"
              << d.directions.dim() << (d.directions.is_orthogonal() ? ", orthogonal" : ", general")
              << '\n';
    for (std::size_t c = 0; c < d.directions.count(); ++c)
      firsts.emplace_back(label + "[" + std::to_string(c + 1) + "]", d.directions.column(c));
    if (!export_dir.empty()) {
      const std::string path = export_dir + "/" + label + ".txt";
      std::ofstream out(path);
      if (!out) throw stratmc::Error(stratmc::ErrorCode::IoError, "cannot write '" + path + "'");
      out << stratmc::export_directions(d.directions);
    }
  }
  std::cout << "angles (degrees)\n";
  for (std::size_t i = 0; i < firsts.size(); ++i)
    for (std::size_t j = i + 1; j < firsts.size(); ++j)
      std::cout << "  " << firsts[i].first << " vs " << firsts[j].first << ": "
                << stratmc::format_double(
                       stratmc::linalg::angle_degrees(firsts[i].second, firsts[j].second))
                << '\n';
  return 0;
}

int run_price(const CommonFlags& f, const std::string& method, const std::string& alloc,
              std::optional<double> strike) {
  stratmc::ExperimentConfig cfg = load(f);
  std::size_t index = 0;
  if (strike) {
    cfg.strikes = {*strike};
  }
  std::optional<stratmc::Method> m;
  if (method != "mc") {
    m = stratmc::parse_method(method);
    cfg.methods = {*m};
    cfg.validate();
  }
  stratmc::ExperimentContext ctx(cfg);
  const auto rule = stratmc::parse_allocation(alloc);
  stratmc::ResultRow row;
  if (method == "lhs") throw stratmc::Error(stratmc::ErrorCode::ConfigInvalid, "use experiment for lhs");
  row = ctx.run_cell(m, rule, index);
  stratmc::emit_table({row}, cfg.format, cfg.out_path);
  return 0;
}

int run_experiment_cmd(const CommonFlags& f) {
  const stratmc::ExperimentConfig cfg = load(f);
  const auto rows = stratmc::run_experiment(cfg);
  stratmc::emit_table(rows, cfg.format, cfg.out_path);
  return 0;
}

int run_selftest(const std::string& self, std::optional<unsigned> threads,
                 const std::vector<int>& only) {
  stratmc::selftest::Options opts;
  opts.cli_path = self;
  if (threads) opts.threads = *threads;
  bool all_passed = true;
  for (const auto& c : stratmc::selftest::criteria()) {
    if (!only.empty() && std::find(only.begin(), only.end(), c.id) == only.end()) continue;
    const auto r = stratmc::selftest::run_criterion(c, opts);
    std::cout << stratmc::selftest::format_result(r) << std::endl;
    all_passed = all_passed && r.passed;
  }
  return all_passed ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Stratified Monte Carlo option pricing along linear-projection directions"};
  app.require_subcommand(1);

  CommonFlags dir_flags;
  std::vector<std::string> dir_methods;
  std::string export_dir;
  auto* directions = app.add_subcommand("directions", "Print direction sets and pairwise angles");
  add_common(directions, dir_flags, false);
  directions->add_option("--methods", dir_methods, "Methods (defaults to the configured ones)")
      ->delimiter(',');
  directions->add_option("--export", export_dir, "Directory for plain-text direction files");

  CommonFlags price_flags;
  std::string method = "la";
  std::string alloc = "opt";
  std::optional<double> strike;
  auto* price = app.add_subcommand("price", "Price a single cell");
  add_common(price, price_flags, true);
  price->add_option("--method", method, "mc or a stratification method");
  price->add_option("--alloc", alloc, "const or opt")->check(CLI::IsMember({"const", "opt"}));
  price->add_option("--strike", strike, "Strike (defaults to the first configured one)");

  CommonFlags exp_flags;
  auto* experiment = app.add_subcommand("experiment", "Run the full result table");
  add_common(experiment, exp_flags, true);

  std::optional<unsigned> st_threads;
  std::vector<int> st_only;
  auto* selftest = app.add_subcommand("selftest", "Run the acceptance checks");
  selftest->add_option("--threads", st_threads, "Worker threads");
  selftest->add_option("--only", st_only, "Criterion ids to run")->delimiter(',');

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitConfig;
  }

  try {
    if (*directions) return run_directions(dir_flags, dir_methods, export_dir);
    if (*price) return run_price(price_flags, method, alloc, strike);
    if (*experiment) return run_experiment_cmd(exp_flags);
    if (*selftest) return run_selftest(argv[0], st_threads, st_only);
  } catch (const stratmc::Error& e) {
    std::cerr << "stratmc: " << stratmc::to_string(e.code()) << ": " << e.what() << '\n';
    return stratmc::is_config_error(e.code()) ? kExitConfig : kExitNumeric;
  } catch (const std::exception& e) {
    std::cerr << "stratmc: " << e.what() << '\n';
    return kExitNumeric;
  }
  return 0;
}
