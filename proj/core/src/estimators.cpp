#include "stratmc/estimators.hpp"

#include <chrono>
#include <cmath>
#include <string>

#include "stratmc/error.hpp"
#include "stratmc/lhs.hpp"
#include "stratmc/parallel.hpp"
#include "stratmc/random.hpp"

namespace stratmc {

namespace {

using Clock = std::chrono::steady_clock;

constexpr std::size_t kChunk = 4096;
constexpr std::uint64_t kPilotPhase = 1;
constexpr std::uint64_t kMainPhase = 2;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

/// Welford accumulator; merging uses the pairwise update, applied in a fixed
/// order so results do not depend on scheduling.
struct Moments {
  std::size_t n = 0;
  double mean = 0.0;
  double m2 = 0.0;

  void add(double y) {
    ++n;
    const double delta = y - mean;
    mean += delta / static_cast<double>(n);
    m2 += delta * (y - mean);
  }

  void merge(const Moments& o) {
    if (o.n == 0) return;
    if (n == 0) {
      *this = o;
      return;
    }
    const double total = static_cast<double>(n + o.n);
    const double delta = o.mean - mean;
    mean += delta * static_cast<double>(o.n) / total;
    m2 += o.m2 + delta * delta * static_cast<double>(n) * static_cast<double>(o.n) / total;
    n += o.n;
  }

  [[nodiscard]] double sample_variance() const {
    return n > 1 ? m2 / static_cast<double>(n - 1) : 0.0;
  }
};

struct WorkerBuffers {
  std::vector<double> z;
  std::vector<double> scratch;
};

std::vector<WorkerBuffers> make_buffers(unsigned threads, std::size_t dim, std::size_t scratch) {
  std::vector<WorkerBuffers> buffers(resolve_threads(threads));
  for (auto& b : buffers) {
    b.z.resize(dim);
    b.scratch.resize(scratch);
  }
  return buffers;
}

void check_dims(const Integrand& g, std::size_t dim) {
  if (g.dim() != dim)
    throw Error(ErrorCode::DimensionMismatch,
                "integrand expects " + std::to_string(g.dim()) + " drivers, sampler gives " +
                    std::to_string(dim));
}

}  // namespace

double EstimateReport::standard_error() const { return std::sqrt(variance); }

EstimateReport stratified_estimate(const Integrand& g, const StratumSampler& sampler,
                                   std::span<const std::size_t> counts,
                                   const ExecutionOptions& exec) {
  const auto start = Clock::now();
  check_dims(g, sampler.dim());
  const StratumSpec& spec = sampler.spec();
  if (counts.size() != spec.total())
    throw Error(ErrorCode::DimensionMismatch, "allocation does not match the stratum count");
  const bool weighted = sampler.weighted();
  std::vector<double> scale(counts.size(), 1.0);
  if (!weighted)
    for (std::size_t k = 0; k < counts.size(); ++k) {
      scale[k] = sampler.probability(k);
      if (scale[k] > 0.0 && counts[k] == 0)
        throw Error(ErrorCode::InsufficientSamples,
                    "stratum " + std::to_string(k) + " has positive probability but no draws");
    }

  std::vector<Moments> moments(counts.size());
  std::vector<double> weight_sum(counts.size(), 0.0);
  auto buffers = make_buffers(exec.threads, sampler.dim(), g.scratch_size());
  parallel_for(counts.size(), exec.threads, [&](std::size_t k, unsigned worker) {
    if (counts[k] == 0) return;
    WorkerBuffers& buf = buffers[worker];
    RandomStream stream(exec.seed, RandomStream::substream(exec.phase, k));
    const std::vector<int> index = spec.multi_index(k);
    Moments m;
    double wsum = 0.0;
    for (std::size_t i = 0; i < counts[k]; ++i) {
      const double w = sampler.sample(index, stream, buf.z);
      wsum += w;
      m.add(w > 0.0 ? w * g(buf.z, buf.scratch) : 0.0);
    }
    moments[k] = m;
    weight_sum[k] = wsum;
  });

  EstimateReport report;
  report.strata.resize(counts.size());
  for (std::size_t k = 0; k < counts.size(); ++k) {
    const Moments& m = moments[k];
    const double c = scale[k];
    const double mean_weight = m.n > 0 ? weight_sum[k] / static_cast<double>(m.n) : 0.0;
    report.strata[k] = {m.n, m.mean, std::sqrt(m.sample_variance()), c, mean_weight};
    if (m.n == 0) continue;
    report.price += c * m.mean;
    report.variance += c * c * m.sample_variance() / static_cast<double>(m.n);
    report.n_samples += m.n;
  }
  report.n_strata = counts.size();
  report.seconds = seconds_since(start);
  return report;
}

EstimateReport plain_mc_estimate(const Integrand& g, std::size_t n, const ExecutionOptions& exec) {
  const auto start = Clock::now();
  if (n < 2) throw Error(ErrorCode::InsufficientSamples, "plain Monte Carlo needs at least 2 draws");
  const std::size_t chunks = (n + kChunk - 1) / kChunk;
  std::vector<Moments> partial(chunks);
  auto buffers = make_buffers(exec.threads, g.dim(), g.scratch_size());
  parallel_for(chunks, exec.threads, [&](std::size_t c, unsigned worker) {
    WorkerBuffers& buf = buffers[worker];
    RandomStream stream(exec.seed, RandomStream::substream(exec.phase, c));
    const std::size_t count = std::min(kChunk, n - c * kChunk);
    Moments m;
    for (std::size_t i = 0; i < count; ++i) {
      stream.fill_normal(buf.z);
      m.add(g(buf.z, buf.scratch));
    }
    partial[c] = m;
  });
  Moments all;
  for (const Moments& m : partial) all.merge(m);

  EstimateReport report;
  report.price = all.mean;
  report.variance = all.sample_variance() / static_cast<double>(all.n);
  report.n_samples = all.n;
  report.n_strata = 1;
  report.seconds = seconds_since(start);
  return report;
}

EstimateReport lhs_estimate(const Integrand& g, const linalg::Matrix& rotation, std::size_t n,
                            std::size_t replications, const ExecutionOptions& exec) {
  const auto start = Clock::now();
  const std::size_t d = rotation.rows();
  if (rotation.cols() != d) throw Error(ErrorCode::DimensionMismatch, "rotation must be square");
  check_dims(g, d);
  const linalg::Matrix gram = rotation.transpose() * rotation;
  for (std::size_t i = 0; i < d; ++i)
    for (std::size_t j = 0; j < d; ++j)
      if (std::abs(gram(i, j) - (i == j ? 1.0 : 0.0)) > 1e-8)
        throw Error(ErrorCode::NotOrthogonal, "LHS rotation is not orthogonal");
  if (replications < 2)
    throw Error(ErrorCode::InsufficientSamples, "LHS needs at least 2 replications");
  const std::size_t per_rep = n / replications;
  if (per_rep < 1) throw Error(ErrorCode::InsufficientSamples, "fewer draws than replications");

  std::vector<double> rep_mean(replications);
  auto buffers = make_buffers(exec.threads, d, g.scratch_size());
  parallel_for(replications, exec.threads, [&](std::size_t r, unsigned worker) {
    WorkerBuffers& buf = buffers[worker];
    RandomStream stream(exec.seed, RandomStream::substream(exec.phase, r));
    const linalg::Matrix eps = lhs_normals(per_rep, d, stream);
    Moments m;
    for (std::size_t i = 0; i < per_rep; ++i) {
      const auto row = eps.row(i);
      for (std::size_t a = 0; a < d; ++a) {
        double s = 0.0;
        for (std::size_t b = 0; b < d; ++b) s += rotation(a, b) * row[b];
        buf.z[a] = s;
      }
      m.add(g(buf.z, buf.scratch));
    }
    rep_mean[r] = m.mean;
  });
  Moments across;
  for (double y : rep_mean) across.add(y);

  EstimateReport report;
  report.price = across.mean;
  report.variance = across.sample_variance() / static_cast<double>(replications);
  report.n_samples = per_rep * replications;
  report.n_strata = 1;
  report.seconds = seconds_since(start);
  return report;
}

EstimateReport run_stratified(const Integrand& g, const StratumSampler& sampler,
                              const StratifiedRunOptions& options) {
  const auto start = Clock::now();
  const std::size_t strata = sampler.spec().total();
  if (options.rule == AllocationRule::Constant) {
    const AllocationPlan plan = equal_allocation(strata, options.total, options.min_per_stratum);
    ExecutionOptions exec = options.exec;
    exec.phase = exec.phase * 4 + kMainPhase;
    EstimateReport report = stratified_estimate(g, sampler, plan.counts, exec);
    report.seconds = seconds_since(start);
    return report;
  }

  if (!(options.pilot_fraction > 0.0 && options.pilot_fraction < 1.0))
    throw Error(ErrorCode::OutOfDomain, "pilot fraction must lie in (0, 1)");
  const auto pilot_total =
      static_cast<std::size_t>(std::llround(options.pilot_fraction * static_cast<double>(options.total)));
  const AllocationPlan pilot_plan = equal_allocation(strata, pilot_total, options.min_per_stratum);
  ExecutionOptions pilot_exec = options.exec;
  pilot_exec.phase = options.exec.phase * 4 + kPilotPhase;
  const EstimateReport pilot = stratified_estimate(g, sampler, pilot_plan.counts, pilot_exec);

  std::vector<double> p(strata);
  std::vector<double> sigma(strata);
  for (std::size_t k = 0; k < strata; ++k) {
    const StratumStats& s = pilot.strata[k];
    sigma[k] = s.sd;
    if (sampler.weighted()) {
      // A stratum whose pilot draws all carried zero weight is numerically
      // unreachable and gets no draws.
      p[k] = s.mean_weight > 0.0 ? 1.0 / static_cast<double>(strata) : 0.0;
    } else {
      p[k] = sampler.probability(k);
    }
  }
  const AllocationPlan plan =
      optimal_allocation(p, sigma, options.total - pilot_total, options.min_per_stratum);
  ExecutionOptions main_exec = options.exec;
  main_exec.phase = options.exec.phase * 4 + kMainPhase;
  EstimateReport report = stratified_estimate(g, sampler, plan.counts, main_exec);
  report.pilot_samples = pilot.n_samples;
  report.seconds = seconds_since(start);
  return report;
}

}  // namespace stratmc
