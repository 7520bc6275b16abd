#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace screenopt {

// Risk-score distribution on [0,1]. Four families share one interface:
//
//   Uniform01        standard uniform
//   BetaSymmetric    Beta(t, t), t > 0; t -> 0 approaches a fair coin on
//                    {0,1}, t -> infinity approaches a point mass at 1/2
//   PointMass        degenerate at c in [0,1]
//   Empirical        finite sample of scores
//
// Conventions, applied uniformly:
//
//   cdf(x)      = P(score <= x)                      (right-continuous)
//   quantile(q) = inf{x : cdf(x) >= q}; quantile(0) is the distribution's
//                 minimum. For Empirical this is the order statistic at rank
//                 ceil(q*n) (a tiny epsilon absorbs float dust in q*n).
//
//   Value-space partial expectations integrate over the half-open interval
//   (a, b], so atoms sitting exactly at `a` are excluded and atoms at `b`
//   included. This matches the band conventions used by the solvers.
//
//   Mass-space partial expectations integrate the quantile function over a
//   sub-interval of [0,1]:  partial_expectation_mass(p_lo, p_hi)
//   = integral of quantile(u) du over [p_lo, p_hi]. They are exact for
//   PointMass (c times the mass) and stable for extreme Beta shapes where
//   value-space upper quantiles round to 1.0 in double precision; all band
//   means used by the solvers go through this form.
//
// Empirical scores are stored sorted ascending; the original row index of
// each score is retained so ties always break in a fixed (stable) order.
class RiskDistribution {
 public:
  enum class Kind { Uniform01, BetaSymmetric, PointMass, Empirical };

  static RiskDistribution uniform01();
  static RiskDistribution beta_symmetric(double t);
  static RiskDistribution point_mass(double c);
  static RiskDistribution empirical(std::vector<double> scores);
  // Scores already sorted ascending, original indices supplied by the caller.
  static RiskDistribution empirical_presorted(std::vector<double> sorted_scores,
                                              std::vector<std::uint32_t> original_index);

  // Parses "uniform", "beta:t=<v>", "pointmass:c=<v>", "scores:<csv path>".
  static RiskDistribution from_spec(const std::string& spec);

  Kind kind() const noexcept { return kind_; }
  // Canonical spec string ("beta:t=10" etc.); Empirical echoes its source.
  const std::string& spec_string() const noexcept { return spec_; }

  double cdf(double x) const;
  double quantile(double q) const;
  double mean() const;

  // Integral of u dF(u) over (a, b]; requires 0 <= a <= b <= 1.
  double partial_expectation(double a, double b) const;
  // Conditional mean over (a, b]; DegenerateBandError when the interval
  // carries no mass.
  double band_mean(double a, double b) const;

  // Integral of quantile(u) du over [p_lo, p_hi]; requires
  // 0 <= p_lo <= p_hi <= 1.
  double partial_expectation_mass(double p_lo, double p_hi) const;
  // Mean of the quantile function over [p_lo, p_hi]. For Empirical this is
  // the plain average of the scores in the rank window; for a zero-width
  // window it degrades to quantile(p_hi) instead of erroring, which is what
  // the fixed-point iteration wants at degenerate bands.
  double band_mean_mass(double p_lo, double p_hi) const;

  bool has_density() const noexcept;
  // Density at an interior point; UnsupportedDistributionError for kinds
  // without one.
  double density(double x) const;

  // Empirical accessors. sample_size() is 0 for analytic kinds.
  std::size_t sample_size() const noexcept { return scores_.size(); }
  const std::vector<double>& sorted_scores() const noexcept { return scores_; }
  const std::vector<std::uint32_t>& original_index() const noexcept { return orig_index_; }
  // Number of sample points with score <= x.
  std::size_t count_at_or_below(double x) const;
  // Rank cut for a mass coordinate: ceil(p*n) clamped to [0, n].
  std::size_t rank_at_mass(double p) const;
  // Sum of the lowest `rank` scores (prefix sum by rank).
  double prefix_sum(std::size_t rank) const;

  double beta_t() const noexcept { return t_; }
  double point_mass_center() const noexcept { return c_; }

 private:
  RiskDistribution() = default;

  Kind kind_ = Kind::Uniform01;
  std::string spec_ = "uniform";
  double t_ = 0.0;  // BetaSymmetric shape
  double c_ = 0.0;  // PointMass location
  double log_beta_tt_ = 0.0;
  std::vector<double> scores_;       // Empirical, ascending
  std::vector<double> prefix_;       // prefix_[k] = sum of scores_[0..k)
  std::vector<std::uint32_t> orig_index_;
};

}  // namespace screenopt
