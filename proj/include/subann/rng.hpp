#ifndef SUBANN_RNG_HPP
#define SUBANN_RNG_HPP

#include <array>
#include <cmath>
#include <cstdint>
#include <span>
#include <vector>

#include "subann/math.hpp"

namespace subann {

namespace detail {

inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

}  // namespace detail

/// Counter-based Philox4x32-10 generator (Salmon et al. constants).
///
/// A generator is addressed by (seed, stream): the seed keys the cipher and
/// the stream occupies the upper counter words, so all streams derived from
/// one seed are independent. split() derives child streams deterministically,
/// which is how a single --seed fans out to chains, cells and experiments.
class Rng {
 public:
  using result_type = std::uint64_t;

  explicit Rng(std::uint64_t seed = 0, std::uint64_t stream = 0)
      : seed_(seed), stream_(stream) {
    key_[0] = static_cast<std::uint32_t>(seed);
    key_[1] = static_cast<std::uint32_t>(seed >> 32);
    ctr_hi_[0] = static_cast<std::uint32_t>(stream);
    ctr_hi_[1] = static_cast<std::uint32_t>(stream >> 32);
  }

  static constexpr result_type min() { return 0; }
  static constexpr result_type max() { return ~result_type(0); }

  result_type operator()() {
    if (pos_ >= 4) {
      fill_block();
      pos_ = 0;
    }
    const result_type out = (std::uint64_t(buf_[pos_ + 1]) << 32) | buf_[pos_];
    pos_ += 2;
    return out;
  }

  /// Child generator with an independent stream; pure function of
  /// (seed, stream, which), so split trees are reproducible.
  Rng split(std::uint64_t which) const {
    return Rng(seed_, detail::splitmix64(stream_ ^ detail::splitmix64(which + 1)));
  }

  std::uint64_t seed() const { return seed_; }
  std::uint64_t stream() const { return stream_; }

 private:
  void fill_block() {
    std::uint32_t c0 = static_cast<std::uint32_t>(block_);
    std::uint32_t c1 = static_cast<std::uint32_t>(block_ >> 32);
    std::uint32_t c2 = ctr_hi_[0], c3 = ctr_hi_[1];
    std::uint32_t k0 = key_[0], k1 = key_[1];
    for (int round = 0; round < 10; ++round) {
      const std::uint64_t p0 = std::uint64_t(0xD2511F53u) * c0;
      const std::uint64_t p1 = std::uint64_t(0xCD9E8D57u) * c2;
      const std::uint32_t hi0 = std::uint32_t(p0 >> 32), lo0 = std::uint32_t(p0);
      const std::uint32_t hi1 = std::uint32_t(p1 >> 32), lo1 = std::uint32_t(p1);
      const std::uint32_t n0 = hi1 ^ c1 ^ k0;
      const std::uint32_t n1 = lo1;
      const std::uint32_t n2 = hi0 ^ c3 ^ k1;
      const std::uint32_t n3 = lo0;
      c0 = n0; c1 = n1; c2 = n2; c3 = n3;
      k0 += 0x9E3779B9u;
      k1 += 0xBB67AE85u;
    }
    buf_[0] = c0; buf_[1] = c1; buf_[2] = c2; buf_[3] = c3;
    ++block_;
  }

  std::uint64_t seed_, stream_;
  std::uint32_t key_[2];
  std::uint32_t ctr_hi_[2];
  std::uint64_t block_ = 0;
  std::uint32_t buf_[4] = {0, 0, 0, 0};
  unsigned pos_ = 4;  // 4 = buffer empty
};

/// Uniform double in [0, 1) with 53 random bits.
template <class G>
double uniform01(G& g) {
  return double(g() >> 11) * 0x1.0p-53;
}

/// Uniform integer in [0, n). Draws nothing for n <= 1 so that sampling from
/// a singleton pool does not perturb the stream (keeps the classic-Gibbs
/// equivalence exact).
template <class G>
std::uint64_t uniform_below(G& g, std::uint64_t n) {
  if (n <= 1) return 0;
  // Lemire's multiply-shift with rejection for exact uniformity.
  unsigned __int128 m = (unsigned __int128)g() * n;
  auto lo = static_cast<std::uint64_t>(m);
  if (lo < n) {
    const std::uint64_t t = (0 - n) % n;
    while (lo < t) {
      m = (unsigned __int128)g() * n;
      lo = static_cast<std::uint64_t>(m);
    }
  }
  return static_cast<std::uint64_t>(m >> 64);
}

template <class G>
bool bernoulli(G& g, double p) {
  return uniform01(g) < p;
}

/// Samples an index proportional to exp(logw - max(logw)).
template <class G>
std::size_t categorical_from_log(G& g, std::span<const double> logw) {
  double m = neg_inf;
  for (double v : logw) m = std::max(m, v);
  double total = 0.0;
  for (double v : logw) total += std::exp(v - m);
  const double u = uniform01(g) * total;
  double acc = 0.0;
  for (std::size_t i = 0; i < logw.size(); ++i) {
    acc += std::exp(logw[i] - m);
    if (u < acc) return i;
  }
  return logw.size() - 1;
}

template <class G>
std::size_t categorical(G& g, std::span<const double> w) {
  double total = 0.0;
  for (double v : w) total += v;
  const double u = uniform01(g) * total;
  double acc = 0.0;
  for (std::size_t i = 0; i < w.size(); ++i) {
    acc += w[i];
    if (u < acc) return i;
  }
  return w.size() - 1;
}

template <class G>
std::int64_t binomial(G& g, std::int64_t n, double p) {
  std::int64_t k = 0;
  for (std::int64_t i = 0; i < n; ++i) k += bernoulli(g, p) ? 1 : 0;
  return k;
}

/// Standard normal via Box-Muller (no state carried between calls).
template <class G>
double standard_normal(G& g) {
  double u1 = uniform01(g);
  while (u1 <= 0.0) u1 = uniform01(g);
  const double u2 = uniform01(g);
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * M_PI * u2);
}

/// Gamma(shape, 1) via Marsaglia-Tsang; shape < 1 boosted through U^(1/shape).
template <class G>
double gamma_sample(G& g, double shape) {
  if (shape < 1.0) {
    const double u = uniform01(g);
    return gamma_sample(g, shape + 1.0) * std::pow(u, 1.0 / shape);
  }
  const double d = shape - 1.0 / 3.0;
  const double c = 1.0 / std::sqrt(9.0 * d);
  for (;;) {
    double x = standard_normal(g);
    double v = 1.0 + c * x;
    if (v <= 0.0) continue;
    v = v * v * v;
    const double u = uniform01(g);
    if (u < 1.0 - 0.0331 * x * x * x * x) return d * v;
    if (std::log(u) < 0.5 * x * x + d * (1.0 - v + std::log(v))) return d * v;
  }
}

template <class G>
std::vector<double> dirichlet_sample(G& g, std::span<const double> alpha) {
  std::vector<double> out(alpha.size());
  double s = 0.0;
  for (std::size_t i = 0; i < alpha.size(); ++i) {
    out[i] = gamma_sample(g, alpha[i]);
    s += out[i];
  }
  for (double& v : out) v /= s;
  return out;
}

/// Fisher-Yates shuffle.
template <class G, class T>
void shuffle(G& g, std::vector<T>& v) {
  for (std::size_t i = v.size(); i > 1; --i) {
    const std::size_t j = uniform_below(g, i);
    std::swap(v[i - 1], v[j]);
  }
}

}  // namespace subann

#endif  // SUBANN_RNG_HPP
