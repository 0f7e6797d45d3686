#pragma once

// Monte Carlo simulation of the relay-to-destination link: quasi-static
// Rayleigh fading, AWGN, integer relay delays known at the receiver, and
// MMSE-DFE preprocessing followed by Schnorr-Euchner sphere decoding over the
// real-valued equivalent model.

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <limits>
#include <optional>
#include <ostream>
#include <random>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "codes.hpp"
#include "constellation.hpp"
#include "delay.hpp"
#include "linalg.hpp"
#include "search.hpp"

namespace dtstc {

struct ChannelRealization {
  ComplexMatrix h;  // N_r x M
};

template <typename Rng>
ChannelRealization draw_channel(std::size_t n_r, std::size_t m, Rng &rng) {
  std::normal_distribution<double> g(0.0, std::sqrt(0.5));
  ChannelRealization ch{ComplexMatrix(n_r, m)};
  for (auto &v : ch.h.data()) v = Complex{g(rng), g(rng)};
  return ch;
}

/// Shifted codewords of the real basis: entry 2i is the codeword of the unit
/// symbol vector e_i, entry 2i+1 that of omega * e_i. Every code here is
/// real-linear, so these span all codewords.
inline std::vector<ComplexMatrix> real_dispersion(const CodeSpec &code, const DelayProfile &d, Complex omega) {
  if (d.size() != static_cast<std::size_t>(code.M))
    throw std::invalid_argument("real_dispersion: delay profile does not match " + code.name);
  std::vector<ComplexMatrix> out;
  out.reserve(2 * static_cast<std::size_t>(code.k));
  std::vector<Complex> s(static_cast<std::size_t>(code.k));
  for (std::size_t i = 0; i < s.size(); ++i) {
    for (Complex v : {Complex{1.0}, omega}) {
      std::fill(s.begin(), s.end(), Complex{});
      s[i] = v;
      out.push_back(apply_delay(code.encoder(s), d).matrix);
    }
  }
  return out;
}

/// Real N x 2k map from the symbol coordinates to the stacked received vector
/// (Re, Im interleaved, antenna-major then time).
inline RealMatrix effective_channel(std::span<const ComplexMatrix> dispersion, const ChannelRealization &h) {
  if (dispersion.empty()) return {};
  const std::size_t n_r = h.h.rows();
  const std::size_t len = dispersion.front().cols();
  RealMatrix heff(2 * n_r * len, dispersion.size());
  for (std::size_t j = 0; j < dispersion.size(); ++j) {
    const ComplexMatrix y = matmul(h.h, dispersion[j]);
    for (std::size_t r = 0; r < n_r; ++r)
      for (std::size_t t = 0; t < len; ++t) {
        heff(2 * (r * len + t), j) = y(r, t).real();
        heff(2 * (r * len + t) + 1, j) = y(r, t).imag();
      }
  }
  return heff;
}

inline RealMatrix effective_channel(const CodeSpec &code, const ChannelRealization &h, const DelayProfile &d,
                                    Complex omega = kI) {
  return effective_channel(real_dispersion(code, d, omega), h);
}

struct MmseDfe {
  RealMatrix forward;  // n x N, maps the received vector into R coordinates
  RealMatrix r;        // n x n upper triangular, nonsingular for noise_var > 0
};

/// QR of [heff; sqrt(noise_var) I]. With forward = Q_top^T,
/// |y - heff u|^2 + noise_var |u|^2 = |forward y - R u|^2 + const.
inline MmseDfe mmse_dfe_preprocess(const RealMatrix &heff, double noise_var) {
  if (!(noise_var > 0)) throw std::invalid_argument("mmse_dfe_preprocess: noise_var must be positive");
  const std::size_t rows = heff.rows(), n = heff.cols();
  RealMatrix aug(rows + n, n);
  for (std::size_t r = 0; r < rows; ++r)
    for (std::size_t c = 0; c < n; ++c) aug(r, c) = heff(r, c);
  const double s = std::sqrt(noise_var);
  for (std::size_t c = 0; c < n; ++c) aug(rows + c, c) = s;
  auto qr = householder_qr(aug);
  MmseDfe out{RealMatrix(n, rows), std::move(qr.r)};
  for (std::size_t r = 0; r < rows; ++r)
    for (std::size_t c = 0; c < n; ++c) out.forward(c, r) = qr.q(r, c);
  return out;
}

struct SphereResult {
  std::vector<int> index;  // chosen alphabet index per coordinate
  std::vector<double> value;
  double metric = std::numeric_limits<double>::infinity();
  std::uint64_t nodes = 0;
};

/// Exact minimiser of |r - R x|^2 over x[i] in alphabets[i], R upper triangular.
/// Depth-first from the last coordinate, visiting each level's candidates in
/// order of distance from the decision-feedback centre and pruning with the
/// best metric found so far.
inline SphereResult sphere_decode(std::span<const double> r, const RealMatrix &R,
                                  std::span<const std::vector<double>> alphabets) {
  const std::size_t n = R.cols();
  if (!R.square() || r.size() != n || alphabets.size() != n)
    throw std::invalid_argument("sphere_decode: dimension mismatch");
  for (std::size_t i = 0; i < n; ++i) {
    if (R(i, i) == 0.0) throw std::invalid_argument("sphere_decode: R is singular");
    if (alphabets[i].empty()) throw std::invalid_argument("sphere_decode: empty alphabet");
  }

  SphereResult best;
  best.index.assign(n, 0);
  best.value.assign(n, 0.0);
  if (n == 0) {
    best.metric = 0;
    return best;
  }

  std::size_t max_alpha = 0;
  for (const auto &a : alphabets) max_alpha = std::max(max_alpha, a.size());
  std::vector<int> order(n * max_alpha);      // candidate order per level
  std::vector<std::size_t> pos(n, 0);         // next candidate position per level
  std::vector<double> partial(n + 1, 0.0);    // partial[i]: metric of levels >= i
  std::vector<double> centre(n, 0.0);
  std::vector<int> cur(n, 0);
  std::vector<double> x(n, 0.0);

  auto enter = [&](std::size_t i) {
    double acc = r[i];
    for (std::size_t j = i + 1; j < n; ++j) acc -= R(i, j) * x[j];
    centre[i] = acc / R(i, i);
    const auto &a = alphabets[i];
    int *o = order.data() + i * max_alpha;
    for (std::size_t t = 0; t < a.size(); ++t) o[t] = static_cast<int>(t);
    std::sort(o, o + a.size(), [&](int p, int q) {
      return std::abs(a[static_cast<std::size_t>(p)] - centre[i]) < std::abs(a[static_cast<std::size_t>(q)] - centre[i]);
    });
    pos[i] = 0;
  };

  std::size_t level = n - 1;
  enter(level);
  for (;;) {
    const auto &a = alphabets[level];
    if (pos[level] >= a.size()) {
      if (level == n - 1) break;
      ++level;
      continue;
    }
    const int cand = order[level * max_alpha + pos[level]++];
    const double v = a[static_cast<std::size_t>(cand)];
    const double e = R(level, level) * (centre[level] - v);
    const double d = partial[level + 1] + e * e;
    ++best.nodes;
    if (d >= best.metric) {
      // Candidates are sorted by distance, so the rest of this level is worse.
      pos[level] = a.size();
      continue;
    }
    cur[level] = cand;
    x[level] = v;
    partial[level] = d;
    if (level == 0) {
      best.metric = d;
      best.index = cur;
      best.value = x;
      continue;
    }
    --level;
    enter(level);
  }
  return best;
}

inline SphereResult sphere_decode(std::span<const double> r, const RealMatrix &R, std::span<const double> alphabet) {
  const std::vector<std::vector<double>> per(R.cols(), std::vector<double>(alphabet.begin(), alphabet.end()));
  return sphere_decode(r, R, per);
}

// --- Monte Carlo ---------------------------------------------------------------

struct SimConfig {
  std::string code;
  int n_r = 0;  // 0: 2 for 2x2 codes, M otherwise
  ConstellationKind constellation = ConstellationKind::qam;
  int q = 4;
  DelayProfile delay;  // empty: synchronous
  std::vector<double> snr_grid;  // Eb/N0 in dB
  std::uint64_t min_errors = 100;
  std::uint64_t max_codewords = 1'000'000;
  std::uint64_t seed = 1;
  unsigned threads = 1;
};

struct SimPoint {
  double snr_db = 0;
  std::uint64_t codewords = 0;
  std::uint64_t bit_errors = 0;
  std::uint64_t codeword_errors = 0;
  std::uint64_t bits = 0;
  double ber = 0;
  double cer = 0;
};

struct SimResult {
  std::string code;
  double rate = 0;  // bits per channel use
  std::vector<SimPoint> points;
};

inline int default_receive_antennas(const CodeSpec &code) { return code.M; }

/// Information bits per channel use: k log2(q) / (T + d_max).
inline double code_rate(const CodeSpec &code, const Constellation &c, const DelayProfile &d) {
  return code.k * static_cast<double>(c.bits_per_symbol()) / (code.T + d.d_max());
}

/// Everything about a (code, constellation, delay, N_r) link that does not
/// change between codewords.
class LinkModel {
 public:
  LinkModel(CodeSpec code, Constellation cons, DelayProfile delay, int n_r)
      : code_(std::move(code)), cons_(std::move(cons)), delay_(std::move(delay)), n_r_(n_r) {
    if (code_.base != cons_.base())
      throw std::invalid_argument("code " + code_.name + " does not take " + to_string(cons_.kind()) + " symbols");
    if (delay_.size() == 0) delay_ = DelayProfile::synchronous(code_.M);
    if (delay_.size() != static_cast<std::size_t>(code_.M))
      throw std::invalid_argument("delay profile " + delay_.describe() + " does not match " + code_.name);
    if (n_r_ <= 0) n_r_ = default_receive_antennas(code_);
    dispersion_ = real_dispersion(code_, delay_, cons_.omega());
    double energy = 0;
    for (const auto &d : dispersion_) energy += frobenius_norm(d) * frobenius_norm(d);
    mean_codeword_energy_ = energy * cons_.coordinate_variance();
    const auto g = cons_.grid();
    alphabets_.assign(dispersion_.size(), std::vector<double>(g.begin(), g.end()));
  }

  const CodeSpec &code() const { return code_; }
  const Constellation &constellation() const { return cons_; }
  const DelayProfile &delay() const { return delay_; }
  int receive_antennas() const { return n_r_; }
  double rate() const { return code_rate(code_, cons_, delay_); }
  std::span<const ComplexMatrix> dispersion() const { return dispersion_; }
  /// E |X|_F^2 under uniform symbols.
  double mean_codeword_energy() const { return mean_codeword_energy_; }

  /// Noise variance per real dimension for a given Eb/N0 per receive antenna.
  double noise_variance(double ebn0_db) const {
    const double bits = static_cast<double>(code_.k) * cons_.bits_per_symbol();
    const double eb = mean_codeword_energy_ / bits;
    const double n0 = eb / std::pow(10.0, ebn0_db / 10.0);
    return n0 / 2.0;
  }

  struct Outcome {
    std::uint64_t bit_errors = 0;
    bool codeword_error = false;
  };

  /// Sends one random codeword and decodes it.
  template <typename Rng>
  Outcome trial(Rng &rng, double sigma2) const {
    const std::size_t n = dispersion_.size();
    std::uniform_int_distribution<int> pick(0, cons_.side() - 1);
    thread_local std::vector<int> sent;
    thread_local std::vector<double> u;
    sent.resize(n);
    u.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
      sent[i] = pick(rng);
      u[i] = cons_.grid()[static_cast<std::size_t>(sent[i])];
    }
    const auto ch = draw_channel(static_cast<std::size_t>(n_r_), static_cast<std::size_t>(code_.M), rng);
    const RealMatrix heff = effective_channel(dispersion_, ch);
    std::normal_distribution<double> noise(0.0, std::sqrt(sigma2));
    std::vector<double> y = matvec(heff, std::span<const double>(u));
    for (auto &v : y) v += noise(rng);
    const auto dec = decode(heff, y, sigma2);
    Outcome o;
    for (std::size_t i = 0; i < n; ++i) {
      if (dec.index[i] == sent[i]) continue;
      o.codeword_error = true;
      o.bit_errors += static_cast<std::uint64_t>(
          std::popcount(static_cast<unsigned>(cons_.axis_label(dec.index[i]) ^ cons_.axis_label(sent[i]))));
    }
    return o;
  }

  SphereResult decode(const RealMatrix &heff, std::span<const double> y, double sigma2) const {
    const auto pre = mmse_dfe_preprocess(heff, sigma2 / cons_.coordinate_variance());
    const auto r = matvec(pre.forward, y);
    return sphere_decode(r, pre.r, alphabets_);
  }

 private:
  CodeSpec code_;
  Constellation cons_;
  DelayProfile delay_;
  int n_r_;
  std::vector<ComplexMatrix> dispersion_;
  double mean_codeword_energy_ = 0;
  std::vector<std::vector<double>> alphabets_;
};

inline constexpr std::uint64_t kSimBatch = 250;

/// Counts for batch `batch` of the point with noise variance sigma2. The
/// random stream depends only on (seed, stream, batch).
inline SimPoint simulate_batch(const LinkModel &link, double sigma2, std::uint64_t seed, std::uint64_t stream,
                               std::uint64_t batch, std::uint64_t count) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(stream), static_cast<std::uint32_t>(batch),
                    static_cast<std::uint32_t>(batch >> 32)};
  std::mt19937_64 rng(seq);
  SimPoint p;
  for (std::uint64_t i = 0; i < count; ++i) {
    const auto o = link.trial(rng, sigma2);
    ++p.codewords;
    p.bit_errors += o.bit_errors;
    p.codeword_errors += o.codeword_error ? 1 : 0;
  }
  return p;
}

/// Runs batches until min_errors codeword errors or max_codewords codewords.
/// Batches are folded in index order, so counts do not depend on `threads`.
inline SimPoint simulate_point(const LinkModel &link, double sigma2, std::uint64_t min_errors,
                               std::uint64_t max_codewords, std::uint64_t seed, std::uint64_t stream,
                               unsigned threads) {
  SimPoint total;
  const std::uint64_t bits_per_cw = static_cast<std::uint64_t>(link.code().k) * link.constellation().bits_per_symbol();
  std::uint64_t next = 0;
  const unsigned wave = std::max(1u, threads);
  bool done = max_codewords == 0;
  while (!done) {
    std::vector<SimPoint> results(wave);
    std::vector<std::uint64_t> counts(wave, 0);
    for (unsigned w = 0; w < wave; ++w) {
      const std::uint64_t start = (next + w) * kSimBatch;
      counts[w] = start >= max_codewords ? 0 : std::min(kSimBatch, max_codewords - start);
    }
    parallel_for_index(wave, threads, [&](std::size_t w) {
      if (counts[w]) results[w] = simulate_batch(link, sigma2, seed, stream, next + w, counts[w]);
    });
    for (unsigned w = 0; w < wave && !done; ++w) {
      if (!counts[w]) {
        done = true;
        break;
      }
      total.codewords += results[w].codewords;
      total.bit_errors += results[w].bit_errors;
      total.codeword_errors += results[w].codeword_errors;
      if (total.codeword_errors >= min_errors || total.codewords >= max_codewords) done = true;
    }
    next += wave;
  }
  total.bits = total.codewords * bits_per_cw;
  total.ber = total.bits ? static_cast<double>(total.bit_errors) / static_cast<double>(total.bits) : 0.0;
  total.cer = total.codewords ? static_cast<double>(total.codeword_errors) / static_cast<double>(total.codewords) : 0.0;
  return total;
}

inline void validate(const SimConfig &cfg) {
  if (cfg.min_errors < 1) throw std::invalid_argument("SimConfig: min_errors must be at least 1");
  if (cfg.snr_grid.empty()) throw std::invalid_argument("SimConfig: empty SNR grid");
}

inline SimResult run_simulation(const SimConfig &cfg) {
  validate(cfg);
  const LinkModel link(make_code(cfg.code), Constellation(cfg.constellation, cfg.q), cfg.delay, cfg.n_r);
  SimResult res{cfg.code, link.rate(), {}};
  for (std::size_t p = 0; p < cfg.snr_grid.size(); ++p) {
    const double snr = cfg.snr_grid[p];
    auto pt = simulate_point(link, link.noise_variance(snr), cfg.min_errors, cfg.max_codewords, cfg.seed, p,
                             cfg.threads);
    pt.snr_db = snr;
    res.points.push_back(pt);
  }
  return res;
}

inline void write_csv_header(std::ostream &os) { os << "code,snr_db,codewords,bit_errors,cw_errors,ber,cer\n"; }

inline void write_csv_rows(std::ostream &os, const SimResult &r) {
  char buf[256];
  for (const auto &p : r.points) {
    std::snprintf(buf, sizeof buf, "%s,%.2f,%llu,%llu,%llu,%.6e,%.6e\n", r.code.c_str(), p.snr_db,
                  static_cast<unsigned long long>(p.codewords), static_cast<unsigned long long>(p.bit_errors),
                  static_cast<unsigned long long>(p.codeword_errors), p.ber, p.cer);
    os << buf;
  }
}

inline void write_csv(std::ostream &os, std::span<const SimResult> results) {
  write_csv_header(os);
  for (const auto &r : results) write_csv_rows(os, r);
}

/// Two-sided 95% Wilson score interval for k successes in n trials.
struct Interval {
  double lo = 0, hi = 1;
  bool overlaps(const Interval &o) const { return !(hi < o.lo || o.hi < lo); }
};

inline Interval wilson_interval(std::uint64_t k, std::uint64_t n, double z = 1.959963984540054) {
  if (n == 0) return {0.0, 1.0};
  const double nn = static_cast<double>(n);
  const double p = static_cast<double>(k) / nn;
  const double z2 = z * z;
  const double centre = (p + z2 / (2 * nn)) / (1 + z2 / nn);
  const double half = z * std::sqrt(p * (1 - p) / nn + z2 / (4 * nn * nn)) / (1 + z2 / nn);
  return {k == 0 ? 0.0 : std::max(0.0, centre - half), k == n ? 1.0 : std::min(1.0, centre + half)};
}

}  // namespace dtstc
