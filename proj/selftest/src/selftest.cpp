#include "stratmc/selftest.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "stratmc/allocation.hpp"
#include "stratmc/config.hpp"
#include "stratmc/directions.hpp"
#include "stratmc/error.hpp"
#include "stratmc/estimators.hpp"
#include "stratmc/experiment.hpp"
#include "stratmc/format.hpp"
#include "stratmc/models.hpp"
#include "stratmc/normal.hpp"
#include "stratmc/payoffs.hpp"
#include "stratmc/sampling.hpp"
#include "stratmc/table.hpp"

namespace stratmc::selftest {

namespace {

using linalg::angle_degrees;

constexpr std::size_t kDeskSamples = 100000;
constexpr int kDeskStrata = 100;
/// Slack for projection checks: the projection of a draw is recomputed from
/// the assembled vector, which costs a few ulps.
constexpr double kMembershipSlack = 1e-10;

std::string fmt(double x, int digits = 4) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*g", digits, x);
  return buf;
}

/// Running mean and variance of a sample.
struct Tally {
  std::size_t n = 0;
  double mean = 0.0;
  double m2 = 0.0;

  void add(double y) {
    ++n;
    const double d = y - mean;
    mean += d / static_cast<double>(n);
    m2 += d * (y - mean);
  }
  [[nodiscard]] double variance() const { return n > 1 ? m2 / static_cast<double>(n - 1) : 0.0; }
  [[nodiscard]] double se() const { return std::sqrt(variance() / static_cast<double>(n)); }
};

bool within_combined(double a, double se_a, double b, double se_b, double k = 3.0) {
  return std::abs(a - b) <= k * std::sqrt(se_a * se_a + se_b * se_b);
}

bool inside(double x, std::pair<double, double> b) {
  return x >= b.first - kMembershipSlack && x <= b.second + kMembershipSlack;
}

BsParams table_asian() { return BsParams::single_asset(50.0, 0.3, 0.05, 1.0, 64); }
BsParams table_barrier() { return BsParams::single_asset(50.0, 0.1, 0.05, 1.0, 16); }

BsParams table_basket() {
  const std::size_t m = 40;
  Vector spots(m);
  Vector vols(m);
  for (std::size_t i = 0; i < m; ++i) {
    const double f = static_cast<double>(i) / static_cast<double>(m - 1);
    spots[i] = 20.0 + 40.0 * f;
    vols[i] = 0.1 + 0.3 * f;
  }
  return BsParams::basket(spots, vols, 0.5, 0.05, 1.0, 1);
}

/// CIR inputs in price units (level 1 and volatility 0.8 for the process
/// scaled by its initial value of 100), averaged over S_0..S_{N-1}.
CirParams table_cir() {
  CirParams p;
  p.s0 = 100.0;
  p.alpha = 1.5;
  p.mu = 100.0;
  p.sigma = 8.0;
  p.rate = 0.05;
  p.steps = 64;
  p.horizon = 1.0;
  p.monitoring = CirMonitoring::StepStart;
  return p;
}

PayoffSpec asian_spec(const BsModel& model, PayoffKind kind, double strike,
                      std::optional<double> barrier = std::nullopt) {
  PayoffSpec s;
  s.kind = kind;
  s.strike = strike;
  s.barrier = barrier;
  s.weights = model.params().weights;
  s.discount = model.discount();
  return s;
}

PayoffSpec cir_spec(const CirParams& p, double strike) {
  PayoffSpec s;
  s.kind = PayoffKind::AsianBasket;
  s.strike = strike;
  s.weights = equal_weights(p.steps);
  s.discount = std::exp(-p.rate * p.horizon);
  return s;
}

Vector random_unit(std::size_t d, RandomStream& stream) {
  Vector v(d);
  stream.fill_normal(v);
  return linalg::normalized(v);
}

// 1. Hard stratum membership for every sampler, conditional covariance of
//    the one-direction sampler.
CriterionResult sampler_correctness(const Options& o) {
  CriterionResult r;
  std::ostringstream detail;
  bool ok = true;
  RandomStream setup(o.seed, 1);

  {  // one direction, d = 8
    const std::size_t d = 8;
    const int k_count = 10;
    const std::size_t per_stratum = 10000;
    const Vector v = random_unit(d, setup);
    const StratumSpec spec({k_count});
    std::size_t violations = 0;
    Vector mean(d, 0.0);
    std::vector<double> cov(d * d, 0.0);
    std::size_t n = 0;
    for (int k = 1; k <= k_count; ++k) {
      RandomStream s(o.seed, RandomStream::substream(11, static_cast<std::uint64_t>(k)));
      const auto b = spec.bounds(0, k);
      for (std::size_t i = 0; i < per_stratum; ++i) {
        const StratifiedDraw draw = sample_stratum_1d(v, k, k_count, s);
        const double x = linalg::dot(v, draw.z);
        if (!inside(x, b) || draw.weight != 1.0) ++violations;
        // Residual z - v (v.z) has covariance I - v v^T in every stratum.
        ++n;
        Vector res(d);
        for (std::size_t a = 0; a < d; ++a) res[a] = draw.z[a] - v[a] * x;
        for (std::size_t a = 0; a < d; ++a) mean[a] += res[a];
        for (std::size_t a = 0; a < d; ++a)
          for (std::size_t c = 0; c < d; ++c) cov[a * d + c] += res[a] * res[c];
      }
    }
    double worst = 0.0;
    for (std::size_t a = 0; a < d; ++a)
      for (std::size_t c = 0; c < d; ++c) {
        const double m_a = mean[a] / static_cast<double>(n);
        const double m_c = mean[c] / static_cast<double>(n);
        const double sample = cov[a * d + c] / static_cast<double>(n) - m_a * m_c;
        const double target = (a == c ? 1.0 : 0.0) - v[a] * v[c];
        worst = std::max(worst, std::abs(sample - target));
      }
    ok = ok && violations == 0 && worst <= 0.02;
    detail << "1d: " << violations << " violations, max cov err " << fmt(worst, 3);
  }

  {  // two orthonormal directions in R^4
    const std::size_t d = 4;
    Vector a = random_unit(d, setup);
    Vector b = random_unit(d, setup);
    const auto gs = linalg::gram_schmidt(std::vector<Vector>{a, b});
    const DirectionSet dirs = DirectionSet::orthogonal(gs.basis);
    const StratumSpec spec({5, 5});
    OrthogonalSampler sampler(dirs, spec);
    std::size_t violations = 0;
    Vector z(d);
    for (std::size_t flat = 0; flat < spec.total(); ++flat) {
      const auto idx = spec.multi_index(flat);
      RandomStream s(o.seed, RandomStream::substream(12, flat));
      for (int i = 0; i < 4000; ++i) {
        sampler.sample(idx, s, z);
        for (std::size_t j = 0; j < 2; ++j)
          if (!inside(linalg::dot(dirs.column(j), z), spec.bounds(j, idx[j]))) ++violations;
      }
    }
    ok = ok && violations == 0;
    detail << "; orthogonal: " << violations << " violations";
  }

  {  // two directions at 45 degrees in R^3
    const double c = std::sqrt(0.5);
    const DirectionSet dirs = DirectionSet::general({{1.0, 0.0, 0.0}, {c, c, 0.0}});
    const StratumSpec spec({4, 4});
    NonOrthogonalSampler sampler(dirs, spec);
    std::size_t violations = 0;
    std::size_t zero_weight = 0;
    Vector z(3);
    for (std::size_t flat = 0; flat < spec.total(); ++flat) {
      const auto idx = spec.multi_index(flat);
      RandomStream s(o.seed, RandomStream::substream(13, flat));
      for (int i = 0; i < 6250; ++i) {
        const double w = sampler.sample(idx, s, z);
        if (!(w > 0.0)) {
          ++zero_weight;
          continue;
        }
        if (w > 1.0) ++violations;
        for (std::size_t j = 0; j < 2; ++j)
          if (!inside(linalg::dot(dirs.column(j), z), spec.bounds(j, idx[j]))) ++violations;
      }
    }
    ok = ok && violations == 0;
    detail << "; non-orthogonal: " << violations << " violations (" << zero_weight
           << " zero-weight draws)";
  }
  r.passed = ok;
  r.detail = detail.str();
  return r;
}

// 2. Weighted non-orthogonal estimator against rejection sampling.
CriterionResult nonorthogonal_oracle(const Options& o) {
  CriterionResult r;
  const double c = std::sqrt(0.5);
  const DirectionSet dirs = DirectionSet::general({{1.0, 0.0, 0.0}, {c, c, 0.0}});
  const StratumSpec spec({4, 4});
  NonOrthogonalSampler sampler(dirs, spec);
  const std::size_t k_total = spec.total();
  const std::size_t per_stratum = 20000;
  const std::size_t oracle_n = 1000000;

  auto g1 = [](std::span<const double> z) { return z[0]; };
  auto g2 = [](std::span<const double> z) { return std::exp(z[0] + z[1]); };

  std::vector<Tally> w_t(k_total), g1_t(k_total), g2_t(k_total);
  Vector z(3);
  for (std::size_t flat = 0; flat < k_total; ++flat) {
    const auto idx = spec.multi_index(flat);
    RandomStream s(o.seed, RandomStream::substream(21, flat));
    for (std::size_t i = 0; i < per_stratum; ++i) {
      const double w = sampler.sample(idx, s, z);
      w_t[flat].add(w);
      g1_t[flat].add(w > 0.0 ? w * g1(z) : 0.0);
      g2_t[flat].add(w > 0.0 ? w * g2(z) : 0.0);
    }
  }

  // Rejection oracle: unconditional draws sorted into the boxes.
  std::vector<Tally> w_o(k_total), g1_o(k_total), g2_o(k_total);
  RandomStream s(o.seed, RandomStream::substream(22, 0));
  std::vector<double> edges(3);
  for (int k = 1; k <= 3; ++k) edges[k - 1] = normal_inv_cdf(k / 4.0);
  auto cell = [&](double x) {
    int k = 0;
    while (k < 3 && x > edges[k]) ++k;
    return k;
  };
  for (std::size_t i = 0; i < oracle_n; ++i) {
    s.fill_normal(z);
    const std::size_t hit = static_cast<std::size_t>(cell(z[0]) * 4 +
                                                      cell(linalg::dot(dirs.column(1), z)));
    const double v1 = g1(z);
    const double v2 = g2(z);
    for (std::size_t k = 0; k < k_total; ++k) {
      const bool in = k == hit;
      w_o[k].add(in ? 1.0 : 0.0);
      g1_o[k].add(in ? v1 : 0.0);
      g2_o[k].add(in ? v2 : 0.0);
    }
  }

  std::size_t failures = 0;
  double worst = 0.0;
  auto check = [&](const Tally& a, const Tally& b) {
    const double se = std::sqrt(a.se() * a.se() + b.se() * b.se());
    const double z_score = se > 0.0 ? std::abs(a.mean - b.mean) / se : (a.mean == b.mean ? 0.0 : 1e9);
    worst = std::max(worst, z_score);
    if (z_score > 3.0) ++failures;
  };
  for (std::size_t k = 0; k < k_total; ++k) {
    check(w_t[k], w_o[k]);
    check(g1_t[k], g1_o[k]);
    check(g2_t[k], g2_o[k]);
  }

  // Orthant: both projections positive has probability 3/8.
  const DirectionSet plane = DirectionSet::general({{1.0, 0.0}, {c, c}});
  NonOrthogonalSampler orthant(plane, StratumSpec({2, 2}));
  Tally ow;
  RandomStream os(o.seed, RandomStream::substream(23, 0));
  Vector z2(2);
  const std::vector<int> upper{2, 2};
  for (int i = 0; i < 100000; ++i) ow.add(orthant.sample(upper, os, z2));
  const bool orthant_ok = std::abs(ow.mean - 0.375) <= 3.0 * ow.se();

  r.passed = failures == 0 && orthant_ok;
  r.detail = std::to_string(failures) + " of 48 stratum checks beyond 3 SE (max " + fmt(worst, 3) +
             " SE); orthant weight " + fmt(ow.mean, 6) + " vs 0.375 (se " + fmt(ow.se(), 2) + ")";
  return r;
}

// 3. The LA direction and the first LT column coincide for Black-Scholes.
CriterionResult la_equals_lt(const Options&) {
  CriterionResult r;
  double worst = 0.0;
  std::string detail;
  for (const auto& [name, params] : {std::pair{"asian", table_asian()}, {"basket", table_basket()}}) {
    const BsModel model(params);
    const double a = angle_degrees(la_direction_bs(model), lt_directions_bs(model, 1).column(0));
    worst = std::max(worst, a);
    detail += std::string(detail.empty() ? "" : ", ") + name + " " + fmt(a, 3) + " deg";
  }
  r.passed = worst <= 1e-8;
  r.detail = detail + " (limit 1e-8)";
  return r;
}

// 4. Angles between directions.
CriterionResult angle_reproduction(const Options&) {
  CriterionResult r;
  const BsModel model(table_asian());
  const double bs = angle_degrees(la_direction_bs(model),
                                  pca_directions(model.covariance(), 1).directions.column(0));
  const CirParams cir = table_cir();
  const double cir_angle = angle_degrees(la_direction_cir(cir), lt_directions_cir(cir, 1).column(0));
  const bool bs_ok = std::abs(bs - 52.73) <= 1.0;
  const bool cir_ok = std::abs(cir_angle - 1.00) <= 0.5;
  r.passed = bs_ok && cir_ok;
  r.detail = "BS LA-PCA " + fmt(bs, 6) + " deg (target 52.73 +- 1: " + (bs_ok ? "ok" : "MISS") +
             "); CIR LA-LT " + fmt(cir_angle, 6) + " deg (target 1.00 +- 0.5: " +
             (cir_ok ? "ok" : "MISS") + ")";
  return r;
}

struct PriceTarget {
  std::string name;
  double price;
  /// Single-draw variance of the reference run, for its standard error.
  double reference_variance;
};

// 5. Plain Monte Carlo prices at desk scale.
CriterionResult price_reproduction(const Options& o) {
  CriterionResult r;
  constexpr double kReferenceSamples = 2e6;
  std::ostringstream detail;
  bool ok = true;
  std::uint64_t phase = 500;
  auto check = [&](const Integrand& g, const PriceTarget& t) {
    const EstimateReport rep = plain_mc_estimate(g, kDeskSamples, {o.seed, phase++, o.threads});
    const double ref_se = std::sqrt(t.reference_variance / kReferenceSamples);
    const bool pass = within_combined(rep.price, rep.standard_error(), t.price, ref_se);
    ok = ok && pass;
    detail << (detail.tellp() > 0 ? "; " : "") << t.name << " " << fmt(rep.price, 5) << " vs "
           << t.price << (pass ? "" : " MISS");
    return rep;
  };

  const BsModel asian(table_asian());
  const PriceTarget asian_targets[] = {
      {"asian45", 7.02, 55.65}, {"asian50", 4.02, 36.966}, {"asian55", 2.06, 20.69}};
  const double strikes[] = {45.0, 50.0, 55.0};
  for (int i = 0; i < 3; ++i)
    check(BsPayoff(asian, asian_spec(asian, PayoffKind::AsianBasket, strikes[i])), asian_targets[i]);

  const BsModel barrier(table_barrier());
  check(BsPayoff(barrier, asian_spec(barrier, PayoffKind::AsianBarrierExpiry, 50.0, 60.0)),
        {"expiry50/60", 1.38, 2.99});
  check(BsPayoff(barrier, asian_spec(barrier, PayoffKind::AsianBarrierComplete, 50.0, 60.0)),
        {"complete50/60", 1.22, 2.41});

  const BsModel basket(table_basket());
  check(BsPayoff(basket, asian_spec(basket, PayoffKind::AsianBasket, 40.0)),
        {"basket40", 4.15, 35.0});

  const CirParams cir = table_cir();
  const EstimateReport c = check(CirPayoff(cir, cir_spec(cir, 100.0)), {"cir100", 10.6, 310.11});
  const double var = c.per_draw_variance();
  const bool var_ok = std::abs(var - 310.0) <= 31.0;
  ok = ok && var_ok;
  detail << "; cir100 variance " << fmt(var, 5) << " vs 310 +- 10%" << (var_ok ? "" : " MISS");
  r.passed = ok;
  r.detail = detail.str();
  return r;
}

EstimateReport one_direction_opt(const Integrand& g, Vector v, const Options& o,
                                 std::uint64_t phase) {
  OrthogonalSampler sampler(DirectionSet::orthogonal({std::move(v)}), StratumSpec({kDeskStrata}));
  StratifiedRunOptions opts;
  opts.rule = AllocationRule::Optimal;
  opts.total = kDeskSamples;
  opts.exec = {o.seed, phase, o.threads};
  return run_stratified(g, sampler, opts);
}

// 6. Variance reduction ordering with optimal allocation.
CriterionResult variance_ordering(const Options& o) {
  CriterionResult r;
  const BsModel model(table_asian());
  const BsPayoff g(model, asian_spec(model, PayoffKind::AsianBasket, 50.0));
  const double mc = plain_mc_estimate(g, kDeskSamples, {o.seed, 600, o.threads}).per_draw_variance();
  const double la = one_direction_opt(g, la_direction_bs(model), o, 601).per_draw_variance();
  const double pca =
      one_direction_opt(g, pca_directions(model.covariance(), 1).directions.column(0), o, 602)
          .per_draw_variance();

  const CirParams cir = table_cir();
  const CirPayoff h(cir, cir_spec(cir, 100.0));
  const double cir_mc = plain_mc_estimate(h, kDeskSamples, {o.seed, 603, o.threads}).per_draw_variance();
  const double cir_la = one_direction_opt(h, la_direction_cir(cir), o, 604).per_draw_variance();

  const bool bs_ratio = mc / la >= 100.0;
  const bool order = la < pca && pca < mc;
  const bool cir_ratio = cir_mc / cir_la >= 100.0;
  r.passed = bs_ratio && order && cir_ratio;
  r.detail = "BS var MC " + fmt(mc) + ", PCA " + fmt(pca) + ", LA " + fmt(la) + " (ratio " +
             fmt(mc / la) + "); CIR var MC " + fmt(cir_mc) + ", LA " + fmt(cir_la) + " (ratio " +
             fmt(cir_mc / cir_la) + ")";
  return r;
}

// 7. Optimal allocation never loses to proportional allocation.
CriterionResult allocation_optimality(const Options& o) {
  CriterionResult r;
  RandomStream s(o.seed, RandomStream::substream(70, 0));
  std::size_t violations = 0;
  for (int inst = 0; inst < 100; ++inst) {
    const std::size_t k = 2 + s.uniform_index(50);
    Vector p(k), sigma(k);
    double sum = 0.0;
    for (std::size_t i = 0; i < k; ++i) {
      p[i] = -std::log(s.uniform());
      sum += p[i];
      sigma[i] = 5.0 * s.uniform();
    }
    for (double& x : p) x /= sum;
    const AllocationPlan opt = optimal_allocation(p, sigma, 100000);
    const AllocationPlan prop = proportional_allocation(p, 100000);
    const double v_opt = stratified_variance_fractions(p, sigma, opt.fractions);
    const double v_prop = stratified_variance_fractions(p, sigma, prop.fractions);
    if (!(v_opt <= v_prop)) ++violations;
  }
  r.passed = violations == 0;
  r.detail = std::to_string(violations) + " of 100 instances with optimal > proportional";
  return r;
}

// 8. LT recurrences, zero-noise CIR path, gradients against finite differences.
CriterionResult recurrence_invariants(const Options&) {
  CriterionResult r;
  const CirParams cir = table_cir();
  const std::size_t n = cir.steps;
  std::size_t broken = 0;
  const DirectionSet lt = lt_directions_cir(cir, 2);
  for (int step = 0; step < 2; ++step) {
    const Vector point = step == 0 ? Vector(n, 0.0) : lt.column(0);
    const LtCirWorkspace ws = LtCirWorkspace::build(cir, point);
    if (ws.t[n - 1] != ws.beta[n - 1]) ++broken;
    for (std::size_t m = 1; m <= n; ++m)
      for (std::size_t j = m; j < n; ++j)
        if (ws.weights(m - 1, j) != ws.alpha[j] * ws.weights(m - 1, j - 1)) ++broken;
  }

  const Vector closed = cir_zero_noise_path(cir);
  Vector euler(n + 1);
  cir_euler_nodes(Vector(n, 0.0), cir, euler);
  double path_err = 0.0;
  for (std::size_t j = 0; j <= n; ++j)
    path_err = std::max(path_err, std::abs(closed[j] - euler[j]) / std::abs(closed[j]));

  // Black-Scholes gradient of the basket function, step 1e-5.
  const BsModel model(table_asian());
  const Vector grad = model.gradient(Vector(model.dim(), 0.0));
  Vector fd(model.dim());
  Vector e(model.dim(), 0.0);
  for (std::size_t i = 0; i < model.dim(); ++i) {
    const double h = 1e-5;
    e[i] = h;
    const double up = bs_basket_g(e, model);
    e[i] = -h;
    const double down = bs_basket_g(e, model);
    e[i] = 0.0;
    fd[i] = (up - down) / (2 * h);
  }
  Vector diff(model.dim());
  for (std::size_t i = 0; i < diff.size(); ++i) diff[i] = fd[i] - grad[i];
  const double bs_err = linalg::norm(diff) / linalg::norm(grad);

  // CIR gradient of the monitored average, step 1e-6.
  const Vector cgrad = cir_average_gradient(Vector(n, 0.0), cir);
  const auto monitored = cir.monitored_nodes();
  auto average = [&](const Vector& z) {
    Vector nodes(n + 1);
    cir_euler_nodes(z, cir, nodes);
    double a = 0.0;
    for (std::size_t j : monitored) a += nodes[j];
    return a / static_cast<double>(monitored.size());
  };
  Vector cdiff(n);
  Vector z(n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    const double h = 1e-6;
    z[i] = h;
    const double up = average(z);
    z[i] = -h;
    const double down = average(z);
    z[i] = 0.0;
    cdiff[i] = (up - down) / (2 * h) - cgrad[i];
  }
  const double cir_err = linalg::norm(cdiff) / linalg::norm(cgrad);
  const double la_vs_grad = angle_degrees(la_direction_cir(cir), cgrad);

  r.passed = broken == 0 && path_err <= 1e-12 && bs_err < 1e-5 && cir_err < 1e-4 && la_vs_grad < 1e-6;
  r.detail = std::to_string(broken) + " recurrence mismatches; zero-noise path rel err " +
             fmt(path_err, 3) + "; BS gradient rel err " + fmt(bs_err, 3) +
             "; CIR gradient rel err " + fmt(cir_err, 3);
  return r;
}

constexpr const char* kDeterminismConfig = R"([model]
type = bs
spots = 50
vols = 0.3
rate = 0.05
maturity = 1
steps = 16

[payoff]
kind = asian-basket
strikes = 50

[run]
methods = la, pca, la+pca, two-dir-lt
alloc = const, opt
samples = 20000
strata = 20
strata_2d = 8
seed = 7
lhs = true
lhs_replications = 10

[output]
format = csv
timing = none
)";

std::string read_file(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

// 9. Same seed, different thread counts, identical CSV bytes.
CriterionResult determinism(const Options& o) {
  CriterionResult r;
  namespace fs = std::filesystem;
  const fs::path dir = fs::temp_directory_path() /
                       ("stratmc-selftest-" + std::to_string(std::chrono::steady_clock::now()
                                                                .time_since_epoch()
                                                                .count()));
  fs::create_directories(dir);
  const fs::path cfg = dir / "determinism.ini";
  {
    std::ofstream out(cfg);
    out << kDeterminismConfig;
  }
  std::string a;
  std::string b;
  std::string how;
  if (!o.cli_path.empty()) {
    how = "cli";
    for (const auto& [threads, file] : {std::pair{1, "one.csv"}, {4, "four.csv"}}) {
      const std::string cmd = "\"" + o.cli_path + "\" experiment --config \"" + cfg.string() +
                              "\" --threads " + std::to_string(threads) + " --out \"" +
                              (dir / file).string() + "\"";
      if (std::system(cmd.c_str()) != 0) {
        r.detail = "command failed: " + cmd;
        fs::remove_all(dir);
        return r;
      }
    }
    a = read_file(dir / "one.csv");
    b = read_file(dir / "four.csv");
  } else {
    how = "in-process";
    ExperimentConfig c = load_config(cfg.string());
    c.threads = 1;
    a = to_csv(run_experiment(c));
    c.threads = 4;
    b = to_csv(run_experiment(c));
  }
  fs::remove_all(dir);
  r.passed = !a.empty() && a == b;
  r.detail = how + ", threads 1 vs 4: " + std::to_string(a.size()) + " bytes, " +
             (a == b ? "identical" : "DIFFERENT");
  return r;
}

// 10. complete barrier <= expiry barrier <= plain Asian on every path.
CriterionResult barrier_monotonicity(const Options& o) {
  CriterionResult r;
  std::size_t violations = 0;
  std::size_t knocked = 0;
  std::size_t paths = 0;
  const BsModel model(table_barrier());
  RandomStream s(o.seed, RandomStream::substream(100, 0));
  Vector z(model.dim());
  for (const auto& [strike, barrier] : {std::pair{50.0, 52.0}, {50.0, 60.0}, {45.0, 55.0}}) {
    const PayoffSpec plain = asian_spec(model, PayoffKind::AsianBasket, strike);
    const PayoffSpec expiry = asian_spec(model, PayoffKind::AsianBarrierExpiry, strike, barrier);
    const PayoffSpec complete = asian_spec(model, PayoffKind::AsianBarrierComplete, strike, barrier);
    for (int i = 0; i < 10000; ++i) {
      s.fill_normal(z);
      const PathMatrix path = model.path(z);
      const double a = asian_basket(path, plain);
      const double e = asian_barrier_expiry(path, expiry);
      const double c = asian_barrier_complete(path, complete);
      ++paths;
      if (!(c <= e && e <= a && c >= 0.0)) ++violations;
      if (c < e) ++knocked;
    }
  }
  r.passed = violations == 0;
  r.detail = std::to_string(violations) + " violations over " + std::to_string(paths) +
             " paths (" + std::to_string(knocked) + " paths separate the two barriers)";
  return r;
}

}  // namespace

const std::vector<Criterion>& criteria() {
  static const std::vector<Criterion> all{
      {1, "sampler-correctness", sampler_correctness},
      {2, "nonorthogonal-oracle", nonorthogonal_oracle},
      {3, "la-equals-lt-first-direction", la_equals_lt},
      {4, "angle-reproduction", angle_reproduction},
      {5, "price-reproduction", price_reproduction},
      {6, "variance-ordering", variance_ordering},
      {7, "allocation-optimality", allocation_optimality},
      {8, "recurrence-invariants", recurrence_invariants},
      {9, "determinism", determinism},
      {10, "barrier-monotonicity", barrier_monotonicity},
  };
  return all;
}

CriterionResult run_criterion(const Criterion& c, const Options& options) {
  const auto start = std::chrono::steady_clock::now();
  CriterionResult r;
  try {
    r = c.run(options);
  } catch (const std::exception& e) {
    r.passed = false;
    r.detail = std::string("exception: ") + e.what();
  }
  r.id = c.id;
  r.name = c.name;
  r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return r;
}

std::string format_result(const CriterionResult& r) {
  char head[128];
  std::snprintf(head, sizeof head, "%s %2d %s (%.2f s): ", r.passed ? "PASS" : "FAIL", r.id,
                r.name.c_str(), r.seconds);
  return head + r.detail;
}

}  // namespace stratmc::selftest
