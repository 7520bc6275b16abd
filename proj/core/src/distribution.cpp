#include "screenopt/distribution.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <sstream>

#include <boost/math/special_functions/beta.hpp>
#include <boost/math/special_functions/gamma.hpp>

#include "screenopt/errors.hpp"
#include "screenopt/io.hpp"

namespace screenopt {
namespace {

constexpr double kRankEps = 1e-9;

void check_unit_interval(double x, const char* what) {
  if (!(x >= 0.0 && x <= 1.0)) {
    std::ostringstream os;
    os << what << " must lie in [0,1], got " << x;
    throw DomainError(os.str());
  }
}

void check_interval_pair(double a, double b, const char* what) {
  check_unit_interval(a, what);
  check_unit_interval(b, what);
  if (a > b) {
    std::ostringstream os;
    os << what << " bounds out of order: " << a << " > " << b;
    throw DomainError(os.str());
  }
}

// log of x^t (1-x)^t; -inf at the endpoints.
double log_beta_powterm(double t, double x) {
  if (x <= 0.0 || x >= 1.0) return -std::numeric_limits<double>::infinity();
  return t * (std::log(x) + std::log1p(-x));
}

}  // namespace

RiskDistribution RiskDistribution::uniform01() {
  RiskDistribution d;
  d.kind_ = Kind::Uniform01;
  d.spec_ = "uniform";
  return d;
}

RiskDistribution RiskDistribution::beta_symmetric(double t) {
  if (!(t > 0.0) || !std::isfinite(t)) {
    throw DomainError("beta shape t must be a positive finite real");
  }
  RiskDistribution d;
  d.kind_ = Kind::BetaSymmetric;
  d.t_ = t;
  d.log_beta_tt_ = 2.0 * boost::math::lgamma(t) - boost::math::lgamma(2.0 * t);
  std::ostringstream os;
  os << "beta:t=" << format_double(t);
  d.spec_ = os.str();
  return d;
}

RiskDistribution RiskDistribution::point_mass(double c) {
  check_unit_interval(c, "point mass location");
  RiskDistribution d;
  d.kind_ = Kind::PointMass;
  d.c_ = c;
  std::ostringstream os;
  os << "pointmass:c=" << format_double(c);
  d.spec_ = os.str();
  return d;
}

RiskDistribution RiskDistribution::empirical(std::vector<double> scores) {
  if (scores.empty()) throw DomainError("empirical distribution needs at least one score");
  std::vector<std::uint32_t> idx(scores.size());
  std::iota(idx.begin(), idx.end(), 0u);
  std::stable_sort(idx.begin(), idx.end(), [&scores](std::uint32_t a, std::uint32_t b) {
    return scores[a] < scores[b];
  });
  std::vector<double> sorted;
  sorted.reserve(scores.size());
  for (const std::uint32_t i : idx) sorted.push_back(scores[i]);
  return empirical_presorted(std::move(sorted), std::move(idx));
}

RiskDistribution RiskDistribution::empirical_presorted(std::vector<double> sorted_scores,
                                                       std::vector<std::uint32_t> original_index) {
  if (sorted_scores.empty()) throw DomainError("empirical distribution needs at least one score");
  if (original_index.size() != sorted_scores.size()) {
    throw DomainError("empirical index array size mismatch");
  }
  for (std::size_t i = 0; i < sorted_scores.size(); ++i) {
    check_unit_interval(sorted_scores[i], "empirical score");
    if (i > 0 && sorted_scores[i] < sorted_scores[i - 1]) {
      throw DomainError("empirical scores not sorted ascending");
    }
  }
  RiskDistribution d;
  d.kind_ = Kind::Empirical;
  d.scores_ = std::move(sorted_scores);
  d.orig_index_ = std::move(original_index);
  d.prefix_.resize(d.scores_.size() + 1, 0.0);
  for (std::size_t i = 0; i < d.scores_.size(); ++i) {
    d.prefix_[i + 1] = d.prefix_[i] + d.scores_[i];
  }
  std::ostringstream os;
  os << "empirical:n=" << d.scores_.size();
  d.spec_ = os.str();
  return d;
}

RiskDistribution RiskDistribution::from_spec(const std::string& spec) {
  if (spec == "uniform") return uniform01();
  const auto starts_with = [&spec](const char* prefix) {
    return spec.rfind(prefix, 0) == 0;
  };
  const auto parse_tail = [&spec](std::size_t offset, const char* what) {
    const std::string tail = spec.substr(offset);
    try {
      std::size_t used = 0;
      const double v = std::stod(tail, &used);
      if (used != tail.size()) throw std::invalid_argument("trailing characters");
      return v;
    } catch (const std::exception&) {
      throw DomainError(std::string("could not parse ") + what + " in distribution spec '" +
                        spec + "'");
    }
  };
  if (starts_with("beta:t=")) return beta_symmetric(parse_tail(7, "t"));
  if (starts_with("pointmass:c=")) return point_mass(parse_tail(12, "c"));
  if (starts_with("scores:")) {
    const std::string path = spec.substr(7);
    if (path.empty()) throw DomainError("empty path in scores: distribution spec");
    RiskDistribution d = empirical(read_score_file(path).scores);
    d.spec_ = spec;
    return d;
  }
  throw DomainError("unrecognized distribution spec '" + spec +
                    "' (expected uniform | beta:t=<v> | pointmass:c=<v> | scores:<path>)");
}

double RiskDistribution::cdf(double x) const {
  check_unit_interval(x, "cdf argument");
  switch (kind_) {
    case Kind::Uniform01:
      return x;
    case Kind::BetaSymmetric:
      if (x <= 0.0) return 0.0;
      if (x >= 1.0) return 1.0;
      return boost::math::ibeta(t_, t_, x);
    case Kind::PointMass:
      return x < c_ ? 0.0 : 1.0;
    case Kind::Empirical:
      return static_cast<double>(count_at_or_below(x)) / static_cast<double>(scores_.size());
  }
  return 0.0;
}

double RiskDistribution::quantile(double q) const {
  check_unit_interval(q, "quantile argument");
  switch (kind_) {
    case Kind::Uniform01:
      return q;
    case Kind::BetaSymmetric:
      if (q <= 0.0) return 0.0;
      if (q >= 1.0) return 1.0;
      return boost::math::ibeta_inv(t_, t_, q);
    case Kind::PointMass:
      return c_;
    case Kind::Empirical: {
      const std::size_t r = std::max<std::size_t>(rank_at_mass(q), 1);
      return scores_[r - 1];
    }
  }
  return 0.0;
}

double RiskDistribution::mean() const {
  switch (kind_) {
    case Kind::Uniform01:
    case Kind::BetaSymmetric:
      return 0.5;
    case Kind::PointMass:
      return c_;
    case Kind::Empirical:
      return prefix_.back() / static_cast<double>(scores_.size());
  }
  return 0.0;
}

double RiskDistribution::partial_expectation(double a, double b) const {
  check_interval_pair(a, b, "partial expectation");
  switch (kind_) {
    case Kind::Uniform01:
      return 0.5 * (b * b - a * a);
    case Kind::BetaSymmetric: {
      // Lower partial expectation via I_x(t+1, t) = I_x(t, t) -
      // x^t (1-x)^t / (t B(t,t)), scaled by the Beta mean 1/2. The correction
      // term is assembled in log space so extreme shapes neither overflow the
      // 1/B(t,t) coefficient nor underflow the power term prematurely.
      const auto lower = [&](double x) {
        const double log_term =
            log_beta_powterm(t_, x) - std::log(2.0 * t_) - log_beta_tt_;
        return 0.5 * cdf(x) - std::exp(log_term);
      };
      return lower(b) - lower(a);
    }
    case Kind::PointMass:
      return (a < c_ && c_ <= b) ? c_ : 0.0;
    case Kind::Empirical: {
      const std::size_t hi = count_at_or_below(b);
      const std::size_t lo = count_at_or_below(a);
      return (prefix_[hi] - prefix_[lo]) / static_cast<double>(scores_.size());
    }
  }
  return 0.0;
}

double RiskDistribution::band_mean(double a, double b) const {
  check_interval_pair(a, b, "band mean");
  const double mass = cdf(b) - cdf(a);
  if (!(mass > 0.0)) {
    std::ostringstream os;
    os << "band (" << a << ", " << b << "] carries no probability mass";
    throw DegenerateBandError(os.str());
  }
  return partial_expectation(a, b) / mass;
}

double RiskDistribution::partial_expectation_mass(double p_lo, double p_hi) const {
  check_interval_pair(p_lo, p_hi, "mass interval");
  switch (kind_) {
    case Kind::Uniform01:
      return 0.5 * (p_hi * p_hi - p_lo * p_lo);
    case Kind::BetaSymmetric: {
      // Integral of the quantile function up to mass p. The quantile is taken
      // on whichever side of 1/2 is well conditioned: by symmetry the upper
      // quantile at p equals 1 - quantile(1 - p), and x^t (1-x)^t only needs
      // the distance from the nearer endpoint.
      const auto lower = [&](double p) {
        if (p <= 0.0) return 0.0;
        if (p >= 1.0) return 0.5;
        const double d =
            p <= 0.5 ? boost::math::ibeta_inv(t_, t_, p) : boost::math::ibeta_inv(t_, t_, 1.0 - p);
        const double log_term =
            log_beta_powterm(t_, d) - std::log(2.0 * t_) - log_beta_tt_;
        return 0.5 * p - std::exp(log_term);
      };
      return lower(p_hi) - lower(p_lo);
    }
    case Kind::PointMass:
      return c_ * (p_hi - p_lo);
    case Kind::Empirical: {
      const double n = static_cast<double>(scores_.size());
      const std::size_t r_lo = rank_at_mass(p_lo);
      const std::size_t r_hi = rank_at_mass(p_hi);
      return (prefix_[r_hi] - prefix_[r_lo]) / n;
    }
  }
  return 0.0;
}

double RiskDistribution::band_mean_mass(double p_lo, double p_hi) const {
  check_interval_pair(p_lo, p_hi, "mass interval");
  if (kind_ == Kind::Empirical) {
    const std::size_t r_lo = rank_at_mass(p_lo);
    const std::size_t r_hi = rank_at_mass(p_hi);
    if (r_hi == r_lo) {
      const std::size_t r = std::min(std::max<std::size_t>(r_hi, 1), scores_.size());
      return scores_[r - 1];
    }
    return (prefix_[r_hi] - prefix_[r_lo]) / static_cast<double>(r_hi - r_lo);
  }
  if (kind_ == Kind::PointMass) return c_;
  if (p_hi - p_lo <= 0.0) return quantile(p_hi);
  return partial_expectation_mass(p_lo, p_hi) / (p_hi - p_lo);
}

bool RiskDistribution::has_density() const noexcept {
  return kind_ == Kind::Uniform01 || kind_ == Kind::BetaSymmetric;
}

double RiskDistribution::density(double x) const {
  if (!has_density()) {
    throw UnsupportedDistributionError("distribution '" + spec_ + "' has no density");
  }
  check_unit_interval(x, "density argument");
  if (kind_ == Kind::Uniform01) return 1.0;
  if (x <= 0.0 || x >= 1.0) {
    return t_ > 1.0 ? 0.0 : std::numeric_limits<double>::infinity();
  }
  return std::exp((t_ - 1.0) * (std::log(x) + std::log1p(-x)) - log_beta_tt_);
}

std::size_t RiskDistribution::count_at_or_below(double x) const {
  return static_cast<std::size_t>(
      std::upper_bound(scores_.begin(), scores_.end(), x) - scores_.begin());
}

std::size_t RiskDistribution::rank_at_mass(double p) const {
  const double n = static_cast<double>(scores_.size());
  const double raw = std::ceil(p * n - kRankEps);
  if (raw <= 0.0) return 0;
  const std::size_t r = static_cast<std::size_t>(raw);
  return std::min(r, scores_.size());
}

double RiskDistribution::prefix_sum(std::size_t rank) const {
  if (rank >= prefix_.size()) throw DomainError("prefix_sum rank out of range");
  return prefix_[rank];
}

}  // namespace screenopt
