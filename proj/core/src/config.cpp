#include "stratmc/config.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <set>
#include <sstream>

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

#include "stratmc/error.hpp"
#include "stratmc/format.hpp"

namespace stratmc {

namespace pt = boost::property_tree;

namespace {

[[noreturn]] void invalid(const std::string& field, const std::string& why) {
  throw Error(ErrorCode::ConfigInvalid, field + ": " + why);
}

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

std::vector<std::string> split_list(const std::string& s) {
  std::vector<std::string> out;
  std::string item;
  std::istringstream in(s);
  while (std::getline(in, item, ',')) {
    item = trim(item);
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

class Section {
 public:
  Section(const pt::ptree& root, std::string name, std::set<std::string> allowed)
      : name_(std::move(name)) {
    const auto node = root.get_child_optional(name_);
    if (node) tree_ = *node;
    for (const auto& [key, value] : tree_) {
      if (!value.empty()) invalid(name_, "nested keys are not supported");
      if (!allowed.contains(key)) invalid(field(key), "unknown key");
    }
  }

  [[nodiscard]] bool has(const std::string& key) const {
    return tree_.get_optional<std::string>(key).has_value();
  }

  [[nodiscard]] std::string text(const std::string& key, const std::string& fallback) const {
    const auto v = tree_.get_optional<std::string>(key);
    return v ? trim(*v) : fallback;
  }

  [[nodiscard]] std::string required(const std::string& key) const {
    const auto v = tree_.get_optional<std::string>(key);
    if (!v || trim(*v).empty()) invalid(field(key), "missing");
    return trim(*v);
  }

  [[nodiscard]] double number(const std::string& key, std::optional<double> fallback) const {
    if (!has(key)) {
      if (!fallback) invalid(field(key), "missing");
      return *fallback;
    }
    return to_number(key, required(key));
  }

  [[nodiscard]] std::vector<double> numbers(const std::string& key) const {
    std::vector<double> out;
    for (const auto& item : split_list(required(key))) out.push_back(to_number(key, item));
    if (out.empty()) invalid(field(key), "empty list");
    return out;
  }

  [[nodiscard]] std::uint64_t count(const std::string& key, std::uint64_t fallback) const {
    if (!has(key)) return fallback;
    const std::string s = required(key);
    std::uint64_t v = 0;
    const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
    if (res.ec != std::errc{} || res.ptr != s.data() + s.size())
      invalid(field(key), "expected a non-negative integer, got '" + s + "'");
    return v;
  }

  [[nodiscard]] bool flag(const std::string& key, bool fallback) const {
    if (!has(key)) return fallback;
    const std::string s = required(key);
    if (s == "true" || s == "yes" || s == "1" || s == "on") return true;
    if (s == "false" || s == "no" || s == "0" || s == "off") return false;
    invalid(field(key), "expected true or false, got '" + s + "'");
  }

  [[nodiscard]] std::string field(const std::string& key) const { return name_ + "." + key; }

 private:
  [[nodiscard]] double to_number(const std::string& key, const std::string& s) const {
    try {
      return parse_double(s);
    } catch (const Error&) {
      invalid(field(key), "expected a number, got '" + s + "'");
    }
  }

  std::string name_;
  pt::ptree tree_;
};

/// Either an explicit list (a single value is broadcast) or a linear range.
Vector per_asset(const Section& s, const std::string& list_key, const std::string& range_key,
                 std::size_t assets) {
  if (s.has(list_key) == s.has(range_key))
    invalid(s.field(list_key), "give exactly one of " + list_key + " and " + range_key);
  if (s.has(list_key)) {
    Vector v = s.numbers(list_key);
    if (v.size() == 1) v.assign(assets, v.front());
    if (v.size() != assets)
      invalid(s.field(list_key), "expected " + std::to_string(assets) + " values");
    return v;
  }
  const Vector r = s.numbers(range_key);
  if (r.size() != 2) invalid(s.field(range_key), "expected 'low, high'");
  Vector v(assets);
  for (std::size_t i = 0; i < assets; ++i)
    v[i] = assets == 1 ? r[0]
                       : r[0] + (r[1] - r[0]) * static_cast<double>(i) /
                                    static_cast<double>(assets - 1);
  return v;
}

void read_model(const pt::ptree& root, ExperimentConfig& cfg) {
  const Section m(root, "model",
                  {"type", "spots", "spot_range", "vols", "vol_range", "rho", "assets", "rate",
                   "maturity", "steps", "s0", "alpha", "mu", "sigma", "monitoring"});
  const std::string type = m.required("type");
  if (type == "bs") {
    cfg.model = ModelKind::Bs;
    const auto assets = static_cast<std::size_t>(m.count("assets", 1));
    if (assets == 0) invalid(m.field("assets"), "must be >= 1");
    const auto steps = static_cast<std::size_t>(m.count("steps", 1));
    if (steps == 0) invalid(m.field("steps"), "must be >= 1");
    const double maturity = m.number("maturity", 1.0);
    if (!(maturity > 0.0)) invalid(m.field("maturity"), "must be positive");
    cfg.bs = BsParams::basket(per_asset(m, "spots", "spot_range", assets),
                              per_asset(m, "vols", "vol_range", assets), m.number("rho", 0.0),
                              m.number("rate", std::nullopt), maturity, steps);
    try {
      cfg.bs.validate();
    } catch (const Error& e) {
      invalid("model", e.what());
    }
  } else if (type == "cir") {
    cfg.model = ModelKind::Cir;
    CirParams& c = cfg.cir;
    c.s0 = m.number("s0", std::nullopt);
    c.alpha = m.number("alpha", std::nullopt);
    c.mu = m.number("mu", std::nullopt);
    c.sigma = m.number("sigma", std::nullopt);
    c.rate = m.number("rate", std::nullopt);
    c.steps = static_cast<std::size_t>(m.count("steps", 64));
    c.horizon = m.number("maturity", 1.0);
    const std::string mon = m.text("monitoring", "step-end");
    if (mon == "step-end") {
      c.monitoring = CirMonitoring::StepEnd;
    } else if (mon == "step-start") {
      c.monitoring = CirMonitoring::StepStart;
    } else {
      invalid(m.field("monitoring"), "expected step-end or step-start");
    }
    try {
      c.validate();
    } catch (const Error& e) {
      invalid("model", e.what());
    }
  } else {
    invalid(m.field("type"), "expected bs or cir, got '" + type + "'");
  }
}

void read_payoff(const pt::ptree& root, ExperimentConfig& cfg) {
  const Section p(root, "payoff", {"kind", "strikes", "barrier"});
  try {
    cfg.payoff = parse_payoff_kind(p.text("kind", "asian-basket"));
  } catch (const Error& e) {
    invalid(p.field("kind"), e.what());
  }
  cfg.strikes = p.numbers("strikes");
  if (p.has("barrier")) cfg.barrier = p.number("barrier", std::nullopt);
}

void read_run(const pt::ptree& root, ExperimentConfig& cfg) {
  const Section r(root, "run",
                  {"methods", "alloc", "samples", "strata", "strata_2d", "pilot_fraction",
                   "pilot_paths", "pilot_mapping", "seed", "lhs", "lhs_replications", "threads"});
  cfg.methods.clear();
  for (const auto& name : split_list(r.text("methods", ""))) {
    try {
      cfg.methods.push_back(parse_method(name));
    } catch (const Error& e) {
      invalid(r.field("methods"), e.what());
    }
  }
  if (r.has("alloc")) {
    cfg.allocations.clear();
    for (const auto& name : split_list(r.required("alloc"))) {
      try {
        cfg.allocations.push_back(parse_allocation(name));
      } catch (const Error& e) {
        invalid(r.field("alloc"), e.what());
      }
    }
  }
  cfg.samples = static_cast<std::size_t>(r.count("samples", cfg.samples));
  cfg.strata = static_cast<int>(r.count("strata", static_cast<std::uint64_t>(cfg.strata)));
  cfg.strata_2d = static_cast<int>(r.count("strata_2d", static_cast<std::uint64_t>(cfg.strata_2d)));
  cfg.pilot_fraction = r.number("pilot_fraction", cfg.pilot_fraction);
  cfg.pilot_paths = static_cast<std::size_t>(r.count("pilot_paths", cfg.pilot_paths));
  const std::string mapping = r.text("pilot_mapping", "raw");
  if (mapping == "raw") {
    cfg.pilot_mapping = PilotMapping::Raw;
  } else if (mapping == "pullback") {
    cfg.pilot_mapping = PilotMapping::Pullback;
  } else {
    invalid(r.field("pilot_mapping"), "expected raw or pullback");
  }
  cfg.seed = r.count("seed", cfg.seed);
  cfg.lhs = r.flag("lhs", cfg.lhs);
  cfg.lhs_replications = static_cast<std::size_t>(r.count("lhs_replications", cfg.lhs_replications));
  cfg.threads = static_cast<unsigned>(r.count("threads", cfg.threads));
}

void read_output(const pt::ptree& root, ExperimentConfig& cfg) {
  const Section o(root, "output", {"path", "format", "timing"});
  cfg.out_path = o.text("path", "");
  try {
    cfg.format = parse_format(o.text("format", "csv"));
    cfg.timing = parse_timing(o.text("timing", "wall"));
  } catch (const Error& e) {
    invalid("output", e.what());
  }
}

}  // namespace

std::string_view to_string(Method m) noexcept {
  switch (m) {
    case Method::La: return "la";
    case Method::Lt: return "lt";
    case Method::Pca: return "pca";
    case Method::PilotPca: return "pilot-pca";
    case Method::LaPca: return "la+pca";
    case Method::LtPca: return "lt+pca";
    case Method::TwoDirLa: return "two-dir-la";
    case Method::TwoDirLt: return "two-dir-lt";
    case Method::TwoDirPca: return "two-dir-pca";
  }
  return "?";
}

std::string_view to_string(AllocationRule a) noexcept {
  return a == AllocationRule::Constant ? "const" : "opt";
}

std::string_view to_string(OutputFormat f) noexcept {
  return f == OutputFormat::Csv ? "csv" : "json";
}

Method parse_method(std::string_view name) {
  for (Method m : {Method::La, Method::Lt, Method::Pca, Method::PilotPca, Method::LaPca,
                   Method::LtPca, Method::TwoDirLa, Method::TwoDirLt, Method::TwoDirPca})
    if (to_string(m) == name) return m;
  throw Error(ErrorCode::ConfigInvalid, "unknown method '" + std::string(name) + "'");
}

AllocationRule parse_allocation(std::string_view name) {
  if (name == "const") return AllocationRule::Constant;
  if (name == "opt") return AllocationRule::Optimal;
  throw Error(ErrorCode::ConfigInvalid, "unknown allocation '" + std::string(name) + "'");
}

OutputFormat parse_format(std::string_view name) {
  if (name == "csv") return OutputFormat::Csv;
  if (name == "json") return OutputFormat::Json;
  throw Error(ErrorCode::ConfigInvalid, "unknown format '" + std::string(name) + "'");
}

TimingMode parse_timing(std::string_view name) {
  if (name == "wall") return TimingMode::Wall;
  if (name == "none") return TimingMode::None;
  throw Error(ErrorCode::ConfigInvalid, "unknown timing mode '" + std::string(name) + "'");
}

bool is_two_direction(Method m) noexcept {
  switch (m) {
    case Method::La:
    case Method::Lt:
    case Method::Pca:
    case Method::PilotPca:
      return false;
    default:
      return true;
  }
}

void ExperimentConfig::validate() const {
  if (strikes.empty()) invalid("payoff.strikes", "at least one strike required");
  for (double k : strikes)
    if (!(k > 0.0)) invalid("payoff.strikes", "strikes must be positive");
  const bool barrier_kind = payoff != PayoffKind::AsianBasket;
  if (barrier_kind && !barrier) invalid("payoff.barrier", "required for barrier payoffs");
  if (!barrier_kind && barrier) invalid("payoff.barrier", "only valid for barrier payoffs");
  if (barrier)
    for (double k : strikes)
      if (!(*barrier > k)) invalid("payoff.barrier", "must exceed every strike");
  if (barrier_kind && model == ModelKind::Bs && bs.assets() != 1)
    invalid("payoff.kind", "barrier payoffs need a single asset");

  std::set<Method> seen;
  for (Method m : methods) {
    if (!seen.insert(m).second)
      invalid("run.methods", "duplicate method '" + std::string(to_string(m)) + "'");
    if (m == Method::PilotPca && model != ModelKind::Cir)
      invalid("run.methods", "pilot-pca is only available for the cir model");
  }
  if (allocations.empty()) invalid("run.alloc", "at least one allocation rule required");
  std::set<AllocationRule> seen_alloc(allocations.begin(), allocations.end());
  if (seen_alloc.size() != allocations.size()) invalid("run.alloc", "duplicate allocation rule");

  const std::size_t dim = model == ModelKind::Bs ? bs.assets() * bs.times() : cir.steps;
  if (strata < 1) invalid("run.strata", "must be >= 1");
  if (strata_2d < 1) invalid("run.strata_2d", "must be >= 1");
  const bool any_two = std::any_of(methods.begin(), methods.end(), is_two_direction);
  if (any_two && dim < 2) invalid("run.methods", "two-direction methods need dimension >= 2");
  if (samples < 2) invalid("run.samples", "must be >= 2");
  std::size_t k_max = methods.empty() ? 1 : static_cast<std::size_t>(strata);
  if (any_two)
    k_max = std::max(k_max, static_cast<std::size_t>(strata_2d) * static_cast<std::size_t>(strata_2d));
  if (samples < k_max * kMinPerStratum)
    invalid("run.samples", "must be at least " + std::to_string(kMinPerStratum) +
                               " draws per stratum (" + std::to_string(k_max * kMinPerStratum) + ")");
  if (!(pilot_fraction > 0.0 && pilot_fraction < 1.0))
    invalid("run.pilot_fraction", "must lie in (0, 1)");
  const auto pilot = static_cast<std::size_t>(pilot_fraction * static_cast<double>(samples));
  if (seen_alloc.contains(AllocationRule::Optimal) && !methods.empty() &&
      (pilot < k_max * kMinPerStratum || samples - pilot < k_max * kMinPerStratum))
    invalid("run.pilot_fraction", "pilot and main stage each need " +
                                      std::to_string(kMinPerStratum) + " draws per stratum");
  if (pilot_paths < 2) invalid("run.pilot_paths", "must be >= 2");
  if (lhs && lhs_replications < 2) invalid("run.lhs_replications", "must be >= 2");
  if (lhs && samples / std::max<std::size_t>(lhs_replications, 1) < 1)
    invalid("run.lhs_replications", "more replications than samples");
}

ExperimentConfig parse_config(std::istream& in) {
  pt::ptree root;
  try {
    pt::read_ini(in, root);
  } catch (const pt::ini_parser_error& e) {
    throw Error(ErrorCode::ConfigInvalid, std::string("config syntax: ") + e.what());
  }
  static const std::set<std::string> sections{"model", "payoff", "run", "output"};
  for (const auto& [name, child] : root) {
    if (!sections.contains(name)) invalid(name, "unknown section");
    (void)child;
  }
  ExperimentConfig cfg;
  read_model(root, cfg);
  read_payoff(root, cfg);
  read_run(root, cfg);
  read_output(root, cfg);
  cfg.validate();
  return cfg;
}

ExperimentConfig parse_config_string(const std::string& text) {
  std::istringstream in(text);
  return parse_config(in);
}

ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::IoError, "cannot open config '" + path + "'");
  return parse_config(in);
}

}  // namespace stratmc
