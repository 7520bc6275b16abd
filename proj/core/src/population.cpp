#include "screenopt/population.hpp"

#include <algorithm>
#include <numeric>
#include <utility>

#include "screenopt/errors.hpp"
#include "screenopt/parallel.hpp"
#include "screenopt/rng.hpp"

namespace screenopt {
namespace {

// Tag mixed into per-unit seeds so population streams never collide with the
// per-cell streams used elsewhere.
constexpr std::uint64_t kUnitTag = 0x756e6974;

double draw_mu(const RiskDistribution& dist, RandomStream& rs) {
  switch (dist.kind()) {
    case RiskDistribution::Kind::Uniform01:
      return rs.next_uniform();
    case RiskDistribution::Kind::BetaSymmetric:
      return rs.next_beta_symmetric(dist.beta_t());
    case RiskDistribution::Kind::PointMass:
      return dist.point_mass_center();
    case RiskDistribution::Kind::Empirical: {
      // Bootstrap resampling from the stored scores.
      const std::uint64_t i = rs.next_below(dist.sample_size());
      return dist.sorted_scores()[static_cast<std::size_t>(i)];
    }
  }
  return 0.0;
}

}  // namespace

Population Population::sample(const RiskDistribution& dist, std::int64_t n, std::uint64_t seed,
                              int threads) {
  if (n < 1) throw DomainError("population size must be at least 1");
  std::vector<double> mu(static_cast<std::size_t>(n));
  std::vector<std::uint8_t> y(static_cast<std::size_t>(n));
  parallel_for(0, n, threads, [&](std::int64_t i) {
    RandomStream rs(derive_seed(seed, kUnitTag, static_cast<std::uint64_t>(i)));
    const double m = draw_mu(dist, rs);
    mu[static_cast<std::size_t>(i)] = m;
    y[static_cast<std::size_t>(i)] = rs.next_bernoulli(m) ? 1 : 0;
  });
  PopulationSource src;
  src.kind = PopulationSource::Kind::Sampled;
  src.detail = dist.spec_string();
  return Population(std::move(mu), std::move(y), seed, std::move(src));
}

Population Population::from_loaded(std::vector<double> mu, std::vector<std::uint8_t> y,
                                   std::string detail) {
  if (mu.empty()) throw DomainError("loaded population is empty");
  if (mu.size() != y.size()) throw DomainError("loaded population mu/y size mismatch");
  for (const double m : mu) {
    if (!(m >= 0.0 && m <= 1.0)) throw DomainError("loaded population score outside [0,1]");
  }
  for (const std::uint8_t label : y) {
    if (label > 1) throw DomainError("loaded population label outside {0,1}");
  }
  PopulationSource src;
  src.kind = PopulationSource::Kind::Loaded;
  src.detail = std::move(detail);
  return Population(std::move(mu), std::move(y), 0, std::move(src));
}

Population::Population(std::vector<double> mu, std::vector<std::uint8_t> y, std::uint64_t seed,
                       PopulationSource source)
    : mu_(std::move(mu)),
      y_(std::move(y)),
      seed_(seed),
      source_(std::move(source)),
      empirical_(RiskDistribution::empirical(mu_)) {
  desc_order_.resize(mu_.size());
  std::iota(desc_order_.begin(), desc_order_.end(), 0u);
  std::stable_sort(desc_order_.begin(), desc_order_.end(),
                   [this](std::uint32_t a, std::uint32_t b) { return mu_[a] > mu_[b]; });
}

}  // namespace screenopt
