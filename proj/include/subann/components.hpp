#ifndef SUBANN_COMPONENTS_HPP
#define SUBANN_COMPONENTS_HPP

#include <cmath>
#include <cstdint>
#include <numeric>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include "subann/math.hpp"

namespace subann {

enum class FeatureKind : std::uint8_t { Boolean, Categorical, Real };

inline const char* to_string(FeatureKind k) {
  switch (k) {
    case FeatureKind::Boolean: return "bool";
    case FeatureKind::Categorical: return "cat";
    case FeatureKind::Real: return "real";
  }
  return "?";
}

/// One observed feature value, tagged with its kind.
struct Datum {
  FeatureKind kind;
  union {
    bool b;
    std::int32_t level;
    double x;
  };

  static Datum boolean(bool v) { Datum d; d.kind = FeatureKind::Boolean; d.b = v; return d; }
  static Datum categorical(std::int32_t v) { Datum d; d.kind = FeatureKind::Categorical; d.level = v; return d; }
  static Datum real(double v) { Datum d; d.kind = FeatureKind::Real; d.x = v; return d; }
};

// ---------------------------------------------------------------------------
// Priors

struct BetaBernoulliPrior {
  double a = 1.0;  // pseudo-heads
  double b = 1.0;  // pseudo-tails
};

struct DirichletPrior {
  std::vector<double> pseudo;  // per-level pseudo-counts, need not be uniform
  double total() const { return std::accumulate(pseudo.begin(), pseudo.end(), 0.0); }
};

/// Normal-inverse-chi-squared in the (mu0, kappa0, sigma0_sq, nu0) convention.
struct NormalInvChiSqPrior {
  double mu0 = 0.0;
  double kappa0 = 1.0;
  double sigma0_sq = 1.0;
  double nu0 = 1.0;
};

// ---------------------------------------------------------------------------
// Sufficient statistics. Each variant owns its prior plus data accumulators;
// add followed by remove of the same datum restores the accumulators
// (bitwise for integers, ~1e-9 relative for the real sums).

class BetaBernoulliStats {
 public:
  BetaBernoulliStats() = default;
  explicit BetaBernoulliStats(BetaBernoulliPrior prior) : prior_(prior) {}

  void add(bool v) { (v ? heads_ : tails_) += 1; }
  void remove(bool v) {
    auto& c = v ? heads_ : tails_;
    if (c == 0) throw std::logic_error("BetaBernoulliStats: remove from empty count");
    c -= 1;
  }

  double log_predictive(bool v) const {
    const double num = v ? prior_.a + double(heads_) : prior_.b + double(tails_);
    return std::log(num) - std::log(prior_.a + prior_.b + double(heads_ + tails_));
  }

  double log_marginal() const { return log_marginal_with(prior_); }
  double log_marginal_with(const BetaBernoulliPrior& p) const {
    return log_beta(p.a + double(heads_), p.b + double(tails_)) - log_beta(p.a, p.b);
  }

  std::int64_t count() const { return heads_ + tails_; }
  std::int64_t heads() const { return heads_; }
  std::int64_t tails() const { return tails_; }
  const BetaBernoulliPrior& prior() const { return prior_; }
  void set_prior(const BetaBernoulliPrior& p) { prior_ = p; }

  bool matches(const BetaBernoulliStats& o) const {
    return heads_ == o.heads_ && tails_ == o.tails_;
  }

 private:
  BetaBernoulliPrior prior_;
  std::int64_t heads_ = 0;
  std::int64_t tails_ = 0;
};

class DirichletCategoricalStats {
 public:
  DirichletCategoricalStats() = default;
  explicit DirichletCategoricalStats(DirichletPrior prior)
      : prior_(std::move(prior)), counts_(prior_.pseudo.size(), 0) {}

  void add(std::int32_t level) {
    counts_.at(static_cast<std::size_t>(level)) += 1;
    n_ += 1;
  }
  void remove(std::int32_t level) {
    auto& c = counts_.at(static_cast<std::size_t>(level));
    if (c == 0) throw std::logic_error("DirichletCategoricalStats: remove from empty count");
    c -= 1;
    n_ -= 1;
  }

  double log_predictive(std::int32_t level) const {
    const auto v = static_cast<std::size_t>(level);
    if (v >= counts_.size())
      throw std::invalid_argument("categorical level " + std::to_string(level) +
                                  " out of range (cardinality " +
                                  std::to_string(counts_.size()) + ")");
    return std::log(prior_.pseudo[v] + double(counts_[v])) -
           std::log(prior_.total() + double(n_));
  }

  double log_marginal() const { return log_marginal_with(prior_); }
  double log_marginal_with(const DirichletPrior& p) const {
    const double s = p.total();
    double lp = std::lgamma(s) - std::lgamma(s + double(n_));
    for (std::size_t v = 0; v < counts_.size(); ++v)
      lp += std::lgamma(p.pseudo[v] + double(counts_[v])) - std::lgamma(p.pseudo[v]);
    return lp;
  }

  std::int64_t count() const { return n_; }
  const std::vector<std::int64_t>& counts() const { return counts_; }
  const DirichletPrior& prior() const { return prior_; }
  void set_prior(const DirichletPrior& p) {
    if (p.pseudo.size() != counts_.size())
      throw std::invalid_argument("DirichletPrior cardinality mismatch");
    prior_ = p;
  }

  bool matches(const DirichletCategoricalStats& o) const {
    return n_ == o.n_ && counts_ == o.counts_;
  }

 private:
  DirichletPrior prior_;
  std::vector<std::int64_t> counts_;
  std::int64_t n_ = 0;
};

class NormalInvChiSqStats {
 public:
  NormalInvChiSqStats() = default;
  explicit NormalInvChiSqStats(NormalInvChiSqPrior prior) : prior_(prior) {}

  void add(double x) {
    n_ += 1;
    sum_ += x;
    sum_sq_ += x * x;
  }
  void remove(double x) {
    if (n_ == 0) throw std::logic_error("NormalInvChiSqStats: remove from empty stats");
    n_ -= 1;
    sum_ -= x;
    sum_sq_ -= x * x;
    if (n_ == 0) {
      sum_ = 0.0;  // shed rounding residue when the cluster empties
      sum_sq_ = 0.0;
    }
  }

  struct Posterior {
    double mu_n, kappa_n, nu_n, nu_sigma_sq_n;  // nu_sigma_sq_n = nu_n * sigma_n^2
  };

  Posterior posterior_with(const NormalInvChiSqPrior& p) const {
    Posterior post;
    const double n = double(n_);
    post.kappa_n = p.kappa0 + n;
    post.nu_n = p.nu0 + n;
    post.mu_n = (p.kappa0 * p.mu0 + sum_) / post.kappa_n;
    double ss = 0.0, shift = 0.0;
    if (n_ > 0) {
      const double mean = sum_ / n;
      ss = std::max(0.0, sum_sq_ - sum_ * mean);
      shift = (p.kappa0 * n / post.kappa_n) * (mean - p.mu0) * (mean - p.mu0);
    }
    post.nu_sigma_sq_n = p.nu0 * p.sigma0_sq + ss + shift;
    return post;
  }

  /// Student-t posterior predictive.
  double log_predictive(double x) const {
    const Posterior post = posterior_with(prior_);
    const double scale_sq =
        post.nu_sigma_sq_n / post.nu_n * (post.kappa_n + 1.0) / post.kappa_n;
    return student_t_log_pdf(x, post.nu_n, post.mu_n, scale_sq);
  }

  double log_marginal() const { return log_marginal_with(prior_); }
  double log_marginal_with(const NormalInvChiSqPrior& p) const {
    if (n_ == 0) return 0.0;
    const Posterior post = posterior_with(p);
    return std::lgamma(0.5 * post.nu_n) - std::lgamma(0.5 * p.nu0) +
           0.5 * (std::log(p.kappa0) - std::log(post.kappa_n)) +
           0.5 * p.nu0 * std::log(p.nu0 * p.sigma0_sq) -
           0.5 * post.nu_n * std::log(post.nu_sigma_sq_n) -
           0.5 * double(n_) * std::log(M_PI);
  }

  std::int64_t count() const { return n_; }
  double sum() const { return sum_; }
  double sum_sq() const { return sum_sq_; }
  const NormalInvChiSqPrior& prior() const { return prior_; }
  void set_prior(const NormalInvChiSqPrior& p) { prior_ = p; }

  bool matches(const NormalInvChiSqStats& o, double rel_tol = 1e-9) const {
    auto close = [rel_tol](double a, double b) {
      return std::abs(a - b) <= rel_tol * std::max({1.0, std::abs(a), std::abs(b)});
    };
    return n_ == o.n_ && close(sum_, o.sum_) && close(sum_sq_, o.sum_sq_);
  }

 private:
  NormalInvChiSqPrior prior_;
  std::int64_t n_ = 0;
  double sum_ = 0.0;
  double sum_sq_ = 0.0;
};

using ComponentSuffStats =
    std::variant<BetaBernoulliStats, DirichletCategoricalStats, NormalInvChiSqStats>;
using ComponentPrior =
    std::variant<BetaBernoulliPrior, DirichletPrior, NormalInvChiSqPrior>;

inline FeatureKind kind_of(const ComponentSuffStats& s) {
  switch (s.index()) {
    case 0: return FeatureKind::Boolean;
    case 1: return FeatureKind::Categorical;
    default: return FeatureKind::Real;
  }
}

inline FeatureKind kind_of(const ComponentPrior& p) {
  switch (p.index()) {
    case 0: return FeatureKind::Boolean;
    case 1: return FeatureKind::Categorical;
    default: return FeatureKind::Real;
  }
}

inline ComponentSuffStats make_stats(const ComponentPrior& prior) {
  return std::visit(
      [](const auto& p) -> ComponentSuffStats {
        using P = std::decay_t<decltype(p)>;
        if constexpr (std::is_same_v<P, BetaBernoulliPrior>)
          return BetaBernoulliStats(p);
        else if constexpr (std::is_same_v<P, DirichletPrior>)
          return DirichletCategoricalStats(p);
        else
          return NormalInvChiSqStats(p);
      },
      prior);
}

[[noreturn]] inline void throw_kind_mismatch(const ComponentSuffStats& s, const Datum& x) {
  throw std::invalid_argument(std::string("datum kind '") + to_string(x.kind) +
                              "' does not match component '" +
                              to_string(kind_of(s)) + "'");
}

inline void add(ComponentSuffStats& s, const Datum& x) {
  if (kind_of(s) != x.kind) throw_kind_mismatch(s, x);
  switch (x.kind) {
    case FeatureKind::Boolean: std::get<BetaBernoulliStats>(s).add(x.b); break;
    case FeatureKind::Categorical: std::get<DirichletCategoricalStats>(s).add(x.level); break;
    case FeatureKind::Real: std::get<NormalInvChiSqStats>(s).add(x.x); break;
  }
}

inline void remove(ComponentSuffStats& s, const Datum& x) {
  if (kind_of(s) != x.kind) throw_kind_mismatch(s, x);
  switch (x.kind) {
    case FeatureKind::Boolean: std::get<BetaBernoulliStats>(s).remove(x.b); break;
    case FeatureKind::Categorical: std::get<DirichletCategoricalStats>(s).remove(x.level); break;
    case FeatureKind::Real: std::get<NormalInvChiSqStats>(s).remove(x.x); break;
  }
}

/// Log posterior-predictive of x given the data summarized in s; for empty
/// stats this is the prior predictive.
inline double log_predictive(const ComponentSuffStats& s, const Datum& x) {
  if (kind_of(s) != x.kind) throw_kind_mismatch(s, x);
  switch (x.kind) {
    case FeatureKind::Boolean: return std::get<BetaBernoulliStats>(s).log_predictive(x.b);
    case FeatureKind::Categorical:
      return std::get<DirichletCategoricalStats>(s).log_predictive(x.level);
    default: return std::get<NormalInvChiSqStats>(s).log_predictive(x.x);
  }
}

/// Log marginal likelihood of all data accumulated in s.
inline double log_marginal(const ComponentSuffStats& s) {
  return std::visit([](const auto& st) { return st.log_marginal(); }, s);
}

/// Marginal likelihood of the accumulated data under a substitute prior
/// (grid-Gibbs evaluates candidates this way without copying stats).
inline double log_marginal_with_prior(const ComponentSuffStats& s, const ComponentPrior& p) {
  if (kind_of(s) != kind_of(p))
    throw std::invalid_argument("prior kind does not match component stats");
  switch (s.index()) {
    case 0:
      return std::get<BetaBernoulliStats>(s).log_marginal_with(std::get<BetaBernoulliPrior>(p));
    case 1:
      return std::get<DirichletCategoricalStats>(s).log_marginal_with(std::get<DirichletPrior>(p));
    default:
      return std::get<NormalInvChiSqStats>(s).log_marginal_with(std::get<NormalInvChiSqPrior>(p));
  }
}

inline std::int64_t count(const ComponentSuffStats& s) {
  return std::visit([](const auto& st) { return st.count(); }, s);
}

inline void set_prior(ComponentSuffStats& s, const ComponentPrior& p) {
  if (kind_of(s) != kind_of(p))
    throw std::invalid_argument("prior kind does not match component stats");
  switch (s.index()) {
    case 0: std::get<BetaBernoulliStats>(s).set_prior(std::get<BetaBernoulliPrior>(p)); break;
    case 1: std::get<DirichletCategoricalStats>(s).set_prior(std::get<DirichletPrior>(p)); break;
    default: std::get<NormalInvChiSqStats>(s).set_prior(std::get<NormalInvChiSqPrior>(p)); break;
  }
}

inline bool stats_match(const ComponentSuffStats& a, const ComponentSuffStats& b) {
  if (a.index() != b.index()) return false;
  switch (a.index()) {
    case 0: return std::get<0>(a).matches(std::get<0>(b));
    case 1: return std::get<1>(a).matches(std::get<1>(b));
    default: return std::get<2>(a).matches(std::get<2>(b));
  }
}

}  // namespace subann

#endif  // SUBANN_COMPONENTS_HPP
