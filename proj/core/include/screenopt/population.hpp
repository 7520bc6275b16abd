#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "screenopt/distribution.hpp"

namespace screenopt {

struct PopulationSource {
  enum class Kind { Sampled, Loaded };
  Kind kind = Kind::Sampled;
  // Distribution spec for Sampled, file path(s) for Loaded.
  std::string detail;
};

// Immutable simulation population: true risks mu_i, realized outcomes
// y_i ~ Bernoulli(mu_i), and an empirical view of the mu values (sorted with
// stable original indices) shared by the solvers and evaluators.
//
// Sampling draws each unit from its own RandomStream keyed by
// (seed, unit index), so the same seed reproduces the same units regardless
// of thread count or visit order.
class Population {
 public:
  static Population sample(const RiskDistribution& dist, std::int64_t n, std::uint64_t seed,
                           int threads = 1);
  static Population from_loaded(std::vector<double> mu, std::vector<std::uint8_t> y,
                                std::string detail);

  std::int64_t n() const noexcept { return static_cast<std::int64_t>(mu_.size()); }
  const std::vector<double>& mu() const noexcept { return mu_; }
  const std::vector<std::uint8_t>& y() const noexcept { return y_; }
  std::uint64_t seed() const noexcept { return seed_; }
  const PopulationSource& source() const noexcept { return source_; }

  // Empirical distribution of the mu values.
  const RiskDistribution& empirical() const noexcept { return empirical_; }
  // Unit ids in descending score order, ties by ascending original id.
  const std::vector<std::uint32_t>& descending_order() const noexcept { return desc_order_; }

 private:
  Population(std::vector<double> mu, std::vector<std::uint8_t> y, std::uint64_t seed,
             PopulationSource source);

  std::vector<double> mu_;
  std::vector<std::uint8_t> y_;
  std::uint64_t seed_ = 0;
  PopulationSource source_;
  RiskDistribution empirical_;
  std::vector<std::uint32_t> desc_order_;
};

}  // namespace screenopt
