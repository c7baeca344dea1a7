#ifndef SUBANN_PARTITION_HPP
#define SUBANN_PARTITION_HPP

#include <cstdint>
#include <memory>
#include <span>
#include <stdexcept>
#include <vector>

#include "subann/components.hpp"
#include "subann/dataset.hpp"
#include "subann/rng.hpp"

namespace subann {

/// Two-parameter (concentration, discount) partition prior; discount = 0 is
/// the plain Chinese restaurant process.
struct PitmanYorParams {
  double concentration = 1.0;  // alpha > -discount (alpha > 0 in practice)
  double discount = 0.0;       // d in [0, 1)

  void check() const {
    if (!(discount >= 0.0 && discount < 1.0))
      throw std::invalid_argument("PitmanYorParams: discount must lie in [0, 1)");
    if (!(concentration > -discount))
      throw std::invalid_argument("PitmanYorParams: concentration must exceed -discount");
  }
};

struct ModelHypers {
  PitmanYorParams py;
  std::vector<ComponentPrior> feature_priors;  // one per dataset column
};

/// Uninformative per-kind priors sized to the dataset. Real features centre
/// on the empirical mean/variance; categorical base measures use smoothed
/// empirical level frequencies.
inline ModelHypers default_hypers(const Dataset& data) {
  ModelHypers h;
  for (std::int64_t f = 0; f < data.n_features(); ++f) {
    const auto& cs = data.schema().columns[std::size_t(f)];
    switch (cs.kind) {
      case FeatureKind::Boolean:
        h.feature_priors.emplace_back(BetaBernoulliPrior{1.0, 1.0});
        break;
      case FeatureKind::Categorical: {
        DirichletPrior p;
        p.pseudo = data.level_frequencies(f);  // sums to 1: unit total pseudo-count
        h.feature_priors.emplace_back(std::move(p));
        break;
      }
      case FeatureKind::Real: {
        const auto mv = data.real_summary(f);
        NormalInvChiSqPrior p;
        p.mu0 = mv.mean;
        p.kappa0 = 1.0;
        p.sigma0_sq = std::max(mv.variance, 1e-12);
        p.nu0 = 1.0;
        h.feature_priors.emplace_back(p);
        break;
      }
    }
  }
  return h;
}

/// log P(partition) under the Pitman-Yor exchangeable partition law, given
/// cluster sizes. Reduces to the CRP for discount = 0.
inline double py_log_eppf(std::span<const std::int64_t> sizes, const PitmanYorParams& py) {
  const double a = py.concentration, d = py.discount;
  std::int64_t n = 0;
  double lp = 0.0;
  std::int64_t k = 0;
  // The k=0 numerator log(a) cancels against the i=0 denominator log(a);
  // skipping both keeps the value finite on the whole range a > -d.
  for (std::int64_t m : sizes) {
    if (k > 0) lp += std::log(a + double(k) * d);  // opening the k-th cluster
    for (std::int64_t j = 1; j < m; ++j) lp += std::log(double(j) - d);
    n += m;
    ++k;
  }
  for (std::int64_t i = 1; i < n; ++i) lp -= std::log(a + double(i));
  return lp;
}

namespace detail {

/// Set of integer ids supporting O(1) insert/erase/uniform-sample.
class IndexPool {
 public:
  explicit IndexPool(std::int64_t capacity = 0) : pos_(std::size_t(capacity), -1) {}

  void reset(std::int64_t capacity) {
    items_.clear();
    pos_.assign(std::size_t(capacity), -1);
  }
  void insert(std::int32_t id) {
    pos_[std::size_t(id)] = std::int32_t(items_.size());
    items_.push_back(id);
  }
  void erase(std::int32_t id) {
    const std::int32_t at = pos_[std::size_t(id)];
    const std::int32_t last = items_.back();
    items_[std::size_t(at)] = last;
    pos_[std::size_t(last)] = at;
    items_.pop_back();
    pos_[std::size_t(id)] = -1;
  }
  bool contains(std::int32_t id) const { return pos_[std::size_t(id)] >= 0; }
  std::int64_t size() const { return std::int64_t(items_.size()); }
  bool empty() const { return items_.empty(); }

  template <class G>
  std::int32_t sample(G& g) const {
    return items_[std::size_t(uniform_below(g, items_.size()))];
  }

  const std::vector<std::int32_t>& items() const { return items_; }

 private:
  std::vector<std::int32_t> items_;
  std::vector<std::int32_t> pos_;
};

}  // namespace detail

/// Assignment of a subsample of datapoints to clusters, with per-cluster
/// sufficient statistics maintained incrementally. Clusters are recycled
/// integer slots; identity is not meaningful across steps. A state is
/// confined to one chain; all randomness comes through the Rng argument.
class PartitionState {
 public:
  PartitionState(std::shared_ptr<const Dataset> data, ModelHypers hypers)
      : data_(std::move(data)),
        hypers_(std::move(hypers)),
        assignment_(std::size_t(data_->n_rows()), -1),
        assigned_(data_->n_rows()),
        unassigned_(data_->n_rows()) {
    hypers_.py.check();
    if (std::int64_t(hypers_.feature_priors.size()) != data_->n_features())
      throw std::invalid_argument("feature prior count does not match dataset");
    for (std::int64_t i = 0; i < data_->n_rows(); ++i)
      unassigned_.insert(std::int32_t(i));
  }

  const Dataset& data() const { return *data_; }
  std::shared_ptr<const Dataset> data_ptr() const { return data_; }
  const ModelHypers& hypers() const { return hypers_; }
  const PitmanYorParams& py() const { return hypers_.py; }

  std::int64_t n_total() const { return data_->n_rows(); }
  std::int64_t n_assigned() const { return assigned_.size(); }
  std::int64_t n_unassigned() const { return unassigned_.size(); }
  std::int64_t n_clusters() const { return std::int64_t(active_.size()); }
  const std::vector<std::int32_t>& active_clusters() const { return active_; }
  const std::vector<std::int32_t>& unassigned_ids() const { return unassigned_.items(); }
  const std::vector<std::int32_t>& assigned_ids() const { return assigned_.items(); }

  std::int32_t assignment_of(std::int32_t id) const { return assignment_[std::size_t(id)]; }
  std::int64_t cluster_size(std::int32_t c) const { return clusters_[std::size_t(c)].size; }
  const std::vector<ComponentSuffStats>& cluster_stats(std::int32_t c) const {
    return clusters_[std::size_t(c)].stats;
  }

  std::vector<std::int64_t> cluster_sizes() const {
    std::vector<std::int64_t> out;
    out.reserve(active_.size());
    for (std::int32_t c : active_) out.push_back(clusters_[std::size_t(c)].size);
    return out;
  }

  // -------------------------------------------------------------------------
  // Kernel operations

  /// Unnormalized log-weights for seating a row: one entry per active cluster
  /// (in active_clusters() order) plus a trailing new-cluster entry.
  /// Existing cluster k: log(#k - d) + sum_f log p(x_f | stats_kf).
  /// New cluster: log(alpha + d K) + sum_f log prior predictive.
  template <class RowFn>
  std::vector<double> assign_scores_row(RowFn&& value_of) const {
    const double a = hypers_.py.concentration, d = hypers_.py.discount;
    const std::int64_t nf = data_->n_features();
    std::vector<double> logw;
    logw.reserve(active_.size() + 1);
    for (std::int32_t c : active_) {
      const Cluster& cl = clusters_[std::size_t(c)];
      double w = std::log(double(cl.size) - d);
      for (std::int64_t f = 0; f < nf; ++f)
        w += log_predictive(cl.stats[std::size_t(f)], value_of(f));
      logw.push_back(w);
    }
    double w_new = std::log(a + d * double(active_.size()));
    for (std::int64_t f = 0; f < nf; ++f)
      w_new += log_predictive(empty_stats(f), value_of(f));
    logw.push_back(w_new);
    return logw;
  }

  std::vector<double> assign_scores(std::int32_t id) const {
    return assign_scores_row([this, id](std::int64_t f) { return data_->get(id, f); });
  }

  /// Moves an assigned datapoint back to the unassigned pool; deletes its
  /// cluster if emptied.
  void remove(std::int32_t id) {
    const std::int32_t c = assignment_[std::size_t(id)];
    if (c < 0) throw std::logic_error("remove: datapoint is not assigned");
    Cluster& cl = clusters_[std::size_t(c)];
    for (std::int64_t f = 0; f < data_->n_features(); ++f)
      subann::remove(cl.stats[std::size_t(f)], data_->get(id, f));
    cl.size -= 1;
    assignment_[std::size_t(id)] = -1;
    assigned_.erase(id);
    unassigned_.insert(id);
    if (cl.size == 0) delete_cluster(c);
    tick();
  }

  /// Conditionally seats an unassigned datapoint; returns the cluster id.
  template <class G>
  std::int32_t assign(std::int32_t id, G& g) {
    if (assignment_[std::size_t(id)] >= 0)
      throw std::logic_error("assign: datapoint is already assigned");
    const std::vector<double> logw = assign_scores(id);
    const std::size_t pick = categorical_from_log(g, logw);
    const std::int32_t c =
        pick == logw.size() - 1 ? new_cluster() : active_[pick];
    seat(id, c);
    return c;
  }

  /// Deterministic seating used by tests and state reconstruction.
  void assign_to(std::int32_t id, std::int32_t cluster_id) {
    if (assignment_[std::size_t(id)] >= 0)
      throw std::logic_error("assign_to: datapoint is already assigned");
    seat(id, cluster_id);
  }

  std::int32_t create_cluster() { return new_cluster(); }

  /// One full random-scan sweep: #assigned remove-then-reassign steps on
  /// uniformly random datapoints. With all data assigned this is the classic
  /// collapsed Gibbs sampler.
  template <class G>
  void gibbs_sweep(G& g) {
    if (n_unassigned() != 0)
      throw std::logic_error("gibbs_sweep: all datapoints must be assigned");
    const std::int64_t steps = n_assigned();
    for (std::int64_t i = 0; i < steps; ++i) {
      const std::int32_t id = assigned_.sample(g);
      remove(id);
      assign(id, g);
    }
  }

  /// Seats every unassigned point by a draw from the partition prior alone,
  /// then the stats reflect the seated data: a sample from the CRP/PY prior.
  template <class G>
  void init_from_prior(G& g) {
    const double a = hypers_.py.concentration, d = hypers_.py.discount;
    std::vector<double> w;
    while (!unassigned_.empty()) {
      const std::int32_t id = unassigned_.items().front();
      w.clear();
      for (std::int32_t c : active_)
        w.push_back(double(clusters_[std::size_t(c)].size) - d);
      w.push_back(a + d * double(active_.size()));
      const std::size_t pick = categorical(g, w);
      const std::int32_t c = pick == w.size() - 1 ? new_cluster() : active_[pick];
      seat(id, c);
    }
  }

  /// log[P(partition) * prod_k p(X_k)]: invariant under relabeling and under
  /// any permutation of datapoint ids.
  double joint_log_prob() const {
    double lp = py_log_eppf(cluster_sizes(), hypers_.py);
    for (std::int32_t c : active_)
      for (const auto& st : clusters_[std::size_t(c)].stats) lp += log_marginal(st);
    return lp;
  }

  /// Data term only (sum of per-cluster, per-feature marginals).
  double data_log_marginal() const {
    double lp = 0.0;
    for (std::int32_t c : active_)
      for (const auto& st : clusters_[std::size_t(c)].stats) lp += log_marginal(st);
    return lp;
  }

  // -------------------------------------------------------------------------
  // Hyperparameter plumbing (grid-Gibbs calls these; the partition is fixed)

  void set_py(const PitmanYorParams& py) {
    py.check();
    hypers_.py = py;
  }

  void set_feature_prior(std::int64_t f, const ComponentPrior& p) {
    hypers_.feature_priors[std::size_t(f)] = p;
    empty_stats_cache_.clear();
    for (std::int32_t c : active_)
      set_prior(clusters_[std::size_t(c)].stats[std::size_t(f)], p);
  }

  const ComponentSuffStats& empty_stats(std::int64_t f) const {
    if (empty_stats_cache_.empty()) {
      empty_stats_cache_.reserve(hypers_.feature_priors.size());
      for (const auto& p : hypers_.feature_priors)
        empty_stats_cache_.push_back(make_stats(p));
    }
    return empty_stats_cache_[std::size_t(f)];
  }

  // -------------------------------------------------------------------------
  // Consistency checking

  /// Recomputes every cluster's stats from its members and compares with the
  /// incrementally maintained ones. Throws on drift.
  void verify_consistency() const {
    std::int64_t total = 0;
    std::vector<std::vector<ComponentSuffStats>> fresh(clusters_.size());
    std::vector<std::int64_t> sizes(clusters_.size(), 0);
    for (std::int32_t c : active_) {
      auto& fs = fresh[std::size_t(c)];
      for (const auto& p : hypers_.feature_priors) fs.push_back(make_stats(p));
    }
    for (std::int64_t id = 0; id < n_total(); ++id) {
      const std::int32_t c = assignment_[std::size_t(id)];
      if (c < 0) continue;
      sizes[std::size_t(c)] += 1;
      total += 1;
      for (std::int64_t f = 0; f < data_->n_features(); ++f)
        add(fresh[std::size_t(c)][std::size_t(f)], data_->get(id, f));
    }
    if (total != n_assigned())
      throw std::logic_error("consistency: assigned count mismatch");
    for (std::int32_t c : active_) {
      const Cluster& cl = clusters_[std::size_t(c)];
      if (cl.size == 0) throw std::logic_error("consistency: empty active cluster");
      if (cl.size != sizes[std::size_t(c)])
        throw std::logic_error("consistency: cluster size mismatch");
      for (std::int64_t f = 0; f < data_->n_features(); ++f)
        if (!stats_match(cl.stats[std::size_t(f)], fresh[std::size_t(c)][std::size_t(f)]))
          throw std::logic_error("consistency: stats drift detected");
    }
  }

  /// Debug builds re-verify every check_interval mutating operations.
  void set_check_interval(std::int64_t n) { check_interval_ = n; }

 private:
  struct Cluster {
    std::int64_t size = 0;
    std::vector<ComponentSuffStats> stats;
  };

  void seat(std::int32_t id, std::int32_t c) {
    Cluster& cl = clusters_[std::size_t(c)];
    for (std::int64_t f = 0; f < data_->n_features(); ++f)
      add(cl.stats[std::size_t(f)], data_->get(id, f));
    cl.size += 1;
    assignment_[std::size_t(id)] = c;
    unassigned_.erase(id);
    assigned_.insert(id);
    tick();
  }

  std::int32_t new_cluster() {
    std::int32_t c;
    if (!free_slots_.empty()) {
      c = free_slots_.back();
      free_slots_.pop_back();
    } else {
      c = std::int32_t(clusters_.size());
      clusters_.emplace_back();
    }
    Cluster& cl = clusters_[std::size_t(c)];
    cl.size = 0;
    cl.stats.clear();
    cl.stats.reserve(hypers_.feature_priors.size());
    for (const auto& p : hypers_.feature_priors) cl.stats.push_back(make_stats(p));
    active_.push_back(c);
    active_pos_.resize(clusters_.size(), -1);
    active_pos_[std::size_t(c)] = std::int32_t(active_.size() - 1);
    return c;
  }

  void delete_cluster(std::int32_t c) {
    const std::int32_t at = active_pos_[std::size_t(c)];
    const std::int32_t last = active_.back();
    active_[std::size_t(at)] = last;
    active_pos_[std::size_t(last)] = at;
    active_.pop_back();
    active_pos_[std::size_t(c)] = -1;
    free_slots_.push_back(c);
  }

  void tick() {
#ifndef NDEBUG
    if (check_interval_ > 0 && ++ops_since_check_ >= check_interval_) {
      ops_since_check_ = 0;
      verify_consistency();
    }
#endif
  }

  std::shared_ptr<const Dataset> data_;
  ModelHypers hypers_;
  std::vector<Cluster> clusters_;
  std::vector<std::int32_t> active_;      // active cluster ids, weight order
  std::vector<std::int32_t> active_pos_;  // slot -> index in active_, or -1
  std::vector<std::int32_t> free_slots_;
  std::vector<std::int32_t> assignment_;  // row -> cluster slot, -1 unassigned
  detail::IndexPool assigned_;
  detail::IndexPool unassigned_;
  mutable std::vector<ComponentSuffStats> empty_stats_cache_;
  std::int64_t check_interval_ = 10000;
  std::int64_t ops_since_check_ = 0;
};

}  // namespace subann

#endif  // SUBANN_PARTITION_HPP
