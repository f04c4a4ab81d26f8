#include "stratmc/sampling.hpp"

#include <cmath>
#include <limits>
#include <string>

#include "stratmc/error.hpp"
#include "stratmc/normal.hpp"

namespace stratmc {

namespace {

constexpr double kUnitTolerance = 1e-12;
constexpr double kOrthogonalTolerance = 1e-8;

std::size_t common_dim(const std::vector<Vector>& columns) {
  if (columns.empty()) throw Error(ErrorCode::DimensionMismatch, "empty direction set");
  const std::size_t d = columns.front().size();
  if (d == 0) throw Error(ErrorCode::DimensionMismatch, "zero-dimensional directions");
  for (const Vector& c : columns)
    if (c.size() != d) throw Error(ErrorCode::DimensionMismatch, "directions differ in length");
  if (columns.size() > d)
    throw Error(ErrorCode::DependentDirections, "more directions than dimensions");
  return d;
}

double max_gram_deviation(const std::vector<Vector>& columns) {
  double worst = 0.0;
  for (std::size_t i = 0; i < columns.size(); ++i)
    for (std::size_t j = i; j < columns.size(); ++j) {
      const double target = i == j ? 1.0 : 0.0;
      worst = std::max(worst, std::abs(linalg::dot(columns[i], columns[j]) - target));
    }
  return worst;
}

void make_unit(Vector& c) {
  const double n = linalg::norm(c);
  if (!(n > 0.0)) throw Error(ErrorCode::ZeroVector, "zero stratification direction");
  if (std::abs(n - 1.0) > kUnitTolerance)
    for (double& x : c) x /= n;
}

void check_dim(std::size_t expected, std::size_t got) {
  if (expected != got)
    throw Error(ErrorCode::DimensionMismatch,
                "draw buffer has " + std::to_string(got) + " entries, expected " +
                    std::to_string(expected));
}

}  // namespace

DirectionSet::DirectionSet(std::vector<Vector> columns, bool orthogonal)
    : dim_(common_dim(columns)), columns_(std::move(columns)), orthogonal_(orthogonal) {}

DirectionSet DirectionSet::orthogonal(std::vector<Vector> columns) {
  common_dim(columns);
  for (Vector& c : columns) make_unit(c);
  if (max_gram_deviation(columns) > kOrthogonalTolerance)
    throw Error(ErrorCode::NotOrthogonal, "V^T V deviates from the identity");
  return DirectionSet(std::move(columns), true);
}

DirectionSet DirectionSet::general(std::vector<Vector> columns) {
  common_dim(columns);
  for (Vector& c : columns) make_unit(c);
  try {
    linalg::gram_schmidt(columns);
  } catch (const Error& e) {
    if (e.code() == ErrorCode::RankDeficient)
      throw Error(ErrorCode::DependentDirections, "stratification directions are dependent");
    throw;
  }
  return DirectionSet(std::move(columns), false);
}

StratumSpec::StratumSpec(std::vector<int> counts) : counts_(std::move(counts)) {
  if (counts_.empty()) throw Error(ErrorCode::DimensionMismatch, "stratum spec has no axes");
  for (int k : counts_) {
    if (k < 1) throw Error(ErrorCode::IndexOutOfRange, "interval count must be >= 1");
    total_ *= static_cast<std::size_t>(k);
  }
}

std::vector<int> StratumSpec::multi_index(std::size_t flat) const {
  if (flat >= total_) throw Error(ErrorCode::IndexOutOfRange, "flat stratum index out of range");
  std::vector<int> k(counts_.size());
  for (std::size_t a = counts_.size(); a-- > 0;) {
    const auto kj = static_cast<std::size_t>(counts_[a]);
    k[a] = static_cast<int>(flat % kj) + 1;
    flat /= kj;
  }
  return k;
}

std::size_t StratumSpec::flat_index(std::span<const int> k) const {
  check(k);
  std::size_t flat = 0;
  for (std::size_t a = 0; a < counts_.size(); ++a)
    flat = flat * static_cast<std::size_t>(counts_[a]) + static_cast<std::size_t>(k[a] - 1);
  return flat;
}

std::pair<double, double> StratumSpec::bounds(std::size_t axis, int k) const {
  const int kk = counts_.at(axis);
  if (k < 1 || k > kk) throw Error(ErrorCode::IndexOutOfRange, "stratum index out of range");
  constexpr double inf = std::numeric_limits<double>::infinity();
  const double lo = k == 1 ? -inf : normal_inv_cdf(static_cast<double>(k - 1) / kk);
  const double hi = k == kk ? inf : normal_inv_cdf(static_cast<double>(k) / kk);
  return {lo, hi};
}

void StratumSpec::check(std::span<const int> k) const {
  if (k.size() != counts_.size())
    throw Error(ErrorCode::IndexOutOfRange, "stratum multi-index has wrong arity");
  for (std::size_t a = 0; a < k.size(); ++a)
    if (k[a] < 1 || k[a] > counts_[a])
      throw Error(ErrorCode::IndexOutOfRange,
                  "stratum index " + std::to_string(k[a]) + " outside 1.." +
                      std::to_string(counts_[a]));
}

OrthogonalSampler::OrthogonalSampler(DirectionSet directions, StratumSpec spec)
    : directions_(std::move(directions)), spec_(std::move(spec)) {
  if (max_gram_deviation(directions_.columns()) > kOrthogonalTolerance)
    throw Error(ErrorCode::NotOrthogonal, "orthogonal sampler needs V^T V = I");
  if (spec_.axes() != directions_.count())
    throw Error(ErrorCode::DimensionMismatch, "one stratum axis per direction required");
}

double OrthogonalSampler::probability(std::size_t flat) const {
  if (flat >= spec_.total()) throw Error(ErrorCode::IndexOutOfRange, "stratum out of range");
  return 1.0 / static_cast<double>(spec_.total());
}

double OrthogonalSampler::sample(std::span<const int> stratum, RandomStream& stream,
                                 std::span<double> z) const {
  spec_.check(stratum);
  check_dim(dim(), z.size());
  const std::size_t m = directions_.count();
  // Uniforms first, then the ambient normal vector.
  double x[64];
  std::vector<double> x_heap;
  double* xs = x;
  if (m > 64) {
    x_heap.resize(m);
    xs = x_heap.data();
  }
  for (std::size_t j = 0; j < m; ++j)
    xs[j] = normal_inv_cdf(stratum_uniform(stratum[j], spec_.counts()[j], stream));
  stream.fill_normal(z);
  for (std::size_t j = 0; j < m; ++j) {
    const Vector& v = directions_.column(j);
    const double shift = xs[j] - linalg::dot(v, z);
    for (std::size_t i = 0; i < z.size(); ++i) z[i] += v[i] * shift;
  }
  return 1.0;
}

NonOrthogonalSampler::NonOrthogonalSampler(DirectionSet directions, StratumSpec spec)
    : directions_(std::move(directions)), spec_(std::move(spec)) {
  if (spec_.axes() != directions_.count())
    throw Error(ErrorCode::DimensionMismatch, "one stratum axis per direction required");
  auto gs = linalg::gram_schmidt(directions_.columns());
  basis_ = std::move(gs.basis);
  residual_norms_ = std::move(gs.norms);
  coupling_.resize(basis_.size());
  for (std::size_t m = 0; m < basis_.size(); ++m) {
    coupling_[m].resize(m);
    for (std::size_t j = 0; j < m; ++j)
      coupling_[m][j] = linalg::dot(directions_.column(m), basis_[j]);
  }
}

double NonOrthogonalSampler::probability(std::size_t) const {
  throw Error(ErrorCode::DimensionMismatch,
              "non-orthogonal strata have no closed-form probability; use the draw weights");
}

double NonOrthogonalSampler::sample(std::span<const int> stratum, RandomStream& stream,
                                    std::span<double> z) const {
  spec_.check(stratum);
  check_dim(dim(), z.size());
  const std::size_t m = basis_.size();
  std::vector<double> u(m);
  for (double& ui : u) ui = stream.uniform();
  stream.fill_normal(z);

  std::vector<double> coord(m);
  double weight = 1.0;
  for (std::size_t i = 0; i < m; ++i) {
    const auto [a_lo, a_hi] = spec_.bounds(i, stratum[i]);
    double offset = 0.0;
    for (std::size_t j = 0; j < i; ++j) offset += coupling_[i][j] * coord[j];
    const double lo = (a_lo - offset) / residual_norms_[i];
    const double hi = (a_hi - offset) / residual_norms_[i];
    const double p = normal_interval_probability(lo, hi);
    if (!(p > 0.0)) return 0.0;
    weight *= p;
    coord[i] = normal_interval_quantile(lo, hi, u[i]);
    if (std::isnan(coord[i])) return 0.0;
  }
  for (std::size_t i = 0; i < m; ++i) {
    const Vector& f = basis_[i];
    const double shift = coord[i] - linalg::dot(f, z);
    for (std::size_t k = 0; k < z.size(); ++k) z[k] += f[k] * shift;
  }
  return weight;
}

StratifiedDraw sample_stratum_1d(std::span<const double> v, int k, int strata,
                                 RandomStream& stream) {
  if (strata < 1 || k < 1 || k > strata)
    throw Error(ErrorCode::IndexOutOfRange,
                "stratum " + std::to_string(k) + " outside 1.." + std::to_string(strata));
  StratifiedDraw draw{Vector(v.size()), {k}, 1.0};
  const double x = normal_inv_cdf(stratum_uniform(k, strata, stream));
  stream.fill_normal(draw.z);
  // Z' - v (v . Z') + v X, O(d).
  const double shift = x - linalg::dot(v, draw.z);
  for (std::size_t i = 0; i < v.size(); ++i) draw.z[i] += v[i] * shift;
  return draw;
}

StratifiedDraw sample_stratum_orthogonal(const DirectionSet& directions,
                                         std::span<const int> stratum, const StratumSpec& spec,
                                         RandomStream& stream) {
  OrthogonalSampler sampler(directions, spec);
  StratifiedDraw draw{Vector(directions.dim()), {stratum.begin(), stratum.end()}, 1.0};
  draw.weight = sampler.sample(stratum, stream, draw.z);
  return draw;
}

StratifiedDraw sample_stratum_nonorthogonal(const DirectionSet& directions,
                                            std::span<const int> stratum,
                                            const StratumSpec& spec, RandomStream& stream) {
  NonOrthogonalSampler sampler(directions, spec);
  StratifiedDraw draw{Vector(directions.dim()), {stratum.begin(), stratum.end()}, 1.0};
  draw.weight = sampler.sample(stratum, stream, draw.z);
  if (!(draw.weight > 0.0))
    throw Error(ErrorCode::EmptyBoundInterval, "truncation interval has zero probability");
  return draw;
}

std::unique_ptr<StratumSampler> make_sampler(DirectionSet directions, StratumSpec spec) {
  if (directions.is_orthogonal())
    return std::make_unique<OrthogonalSampler>(std::move(directions), std::move(spec));
  return std::make_unique<NonOrthogonalSampler>(std::move(directions), std::move(spec));
}

}  // namespace stratmc
