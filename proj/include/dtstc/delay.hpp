#pragma once

// Integer relay delay profiles: zero-padded row shifts of codewords, profile
// enumeration and classification, and full-rank certification of shifted
// codeword differences.

#include <algorithm>
#include <array>
#include <cstdint>
#include <limits>
#include <map>
#include <ostream>
#include <span>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "codes.hpp"
#include "linalg.hpp"
#include "search.hpp"

namespace dtstc {

/// Per-relay delays in symbol periods, relative to the earliest relay.
class DelayProfile {
 public:
  DelayProfile() = default;
  explicit DelayProfile(std::vector<int> delays) : delays_(std::move(delays)) {
    if (delays_.empty()) throw std::invalid_argument("DelayProfile: empty");
    const auto [lo, hi] = std::minmax_element(delays_.begin(), delays_.end());
    if (*lo != 0) throw std::invalid_argument("DelayProfile: smallest delay must be 0, got " + describe());
    d_max_ = *hi;
  }

  static DelayProfile synchronous(int m) { return DelayProfile(std::vector<int>(static_cast<std::size_t>(m), 0)); }

  std::span<const int> delays() const noexcept { return delays_; }
  std::size_t size() const noexcept { return delays_.size(); }
  int d_max() const noexcept { return d_max_; }
  int operator[](std::size_t i) const { return delays_[i]; }

  std::string describe() const {
    std::string s = "(";
    for (std::size_t i = 0; i < delays_.size(); ++i) s += (i ? "," : "") + std::to_string(delays_[i]);
    return s + ")";
  }

  friend bool operator==(const DelayProfile &, const DelayProfile &) = default;
  friend auto operator<=>(const DelayProfile &a, const DelayProfile &b) { return a.delays_ <=> b.delays_; }

 private:
  std::vector<int> delays_;
  int d_max_ = 0;
};

/// Parses "1,0,2".
inline DelayProfile parse_delay_profile(const std::string &text) {
  std::vector<int> d;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item.empty()) throw std::invalid_argument("bad delay profile '" + text + "'");
    std::size_t used = 0;
    const int v = std::stoi(item, &used);
    if (used != item.size() || v < 0) throw std::invalid_argument("bad delay profile '" + text + "'");
    d.push_back(v);
  }
  return DelayProfile(std::move(d));
}

struct ShiftedCodeword {
  ComplexMatrix matrix;  // M x (T + d_max)
};

/// Row i becomes [0^{d_i} | row i | 0^{d_max - d_i}].
inline ShiftedCodeword apply_delay(const ComplexMatrix &x, const DelayProfile &d) {
  if (d.size() != x.rows())
    throw std::invalid_argument("apply_delay: profile has " + std::to_string(d.size()) + " entries for " +
                                std::to_string(x.rows()) + " rows");
  const std::size_t width = x.cols() + static_cast<std::size_t>(d.d_max());
  ShiftedCodeword out{ComplexMatrix(x.rows(), width)};
  for (std::size_t r = 0; r < x.rows(); ++r)
    for (std::size_t c = 0; c < x.cols(); ++c) out.matrix(r, c + static_cast<std::size_t>(d[r])) = x(r, c);
  return out;
}

inline ShiftedCodeword apply_delay(const Codeword &x, const DelayProfile &d) { return apply_delay(x.matrix, d); }

enum class ProfileType { sync, type1, type2, type3I, type3II, type4, unclassified };

inline std::string to_string(ProfileType t) {
  switch (t) {
    case ProfileType::sync: return "sync";
    case ProfileType::type1: return "1";
    case ProfileType::type2: return "2";
    case ProfileType::type3I: return "3I";
    case ProfileType::type3II: return "3II";
    case ProfileType::type4: return "4";
    case ProfileType::unclassified: return "-";
  }
  return "-";
}

/// Four-relay profile families by the multiplicities of distinct delays:
/// all distinct (1), one pair (2), two pairs (3I when the non-zero pair sits
/// at 2 or 3, 3II when at 1) and a triple (4).
inline ProfileType classify_profile(const DelayProfile &d) {
  if (d.d_max() == 0) return ProfileType::sync;
  if (d.size() != 4) return ProfileType::unclassified;
  std::map<int, int> count;
  for (int v : d.delays()) ++count[v];
  std::vector<int> mult;
  for (const auto &[v, n] : count) mult.push_back(n);
  std::sort(mult.begin(), mult.end(), std::greater<>());
  if (mult == std::vector<int>{1, 1, 1, 1}) return ProfileType::type1;
  if (mult == std::vector<int>{2, 1, 1}) return ProfileType::type2;
  if (mult == std::vector<int>{3, 1}) return ProfileType::type4;
  // Two pairs; the smaller value is 0.
  return d.d_max() >= 2 ? ProfileType::type3I : ProfileType::type3II;
}

/// Every vector in {0..d_max}^M that contains a zero, in lexicographic order.
inline std::vector<DelayProfile> enumerate_profiles(int m, int d_max) {
  if (m <= 0 || d_max < 0) throw std::invalid_argument("enumerate_profiles: need M > 0 and d_max >= 0");
  std::vector<DelayProfile> out;
  std::vector<int> d(static_cast<std::size_t>(m), 0);
  for (;;) {
    if (std::find(d.begin(), d.end(), 0) != d.end()) out.emplace_back(d);
    int p = m - 1;
    while (p >= 0 && d[static_cast<std::size_t>(p)] == d_max) d[static_cast<std::size_t>(p--)] = 0;
    if (p < 0) break;
    ++d[static_cast<std::size_t>(p)];
  }
  return out;
}

// --- certification ------------------------------------------------------------

struct ProfileCertificate {
  DelayProfile profile;
  ProfileType type = ProfileType::unclassified;
  std::uint64_t tested = 0;
  double min_ratio = std::numeric_limits<double>::infinity();  // smallest sigma_M / sigma_1
  std::vector<Complex> worst_vector;
  std::uint64_t violations = 0;
  std::vector<std::vector<Complex>> examples;  // first few rank-deficient vectors
};

struct DelayReport {
  std::string code;
  SearchSummary search;
  std::vector<ProfileCertificate> profiles;

  std::uint64_t total_violations() const {
    std::uint64_t n = 0;
    for (const auto &p : profiles) n += p.violations;
    return n;
  }
  bool passed() const { return total_violations() == 0; }
};

inline std::string format_vector(std::span<const Complex> v) {
  std::ostringstream os;
  os.precision(6);
  os << '[';
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) os << ' ';
    os << v[i].real();
    if (v[i].imag() != 0) os << (v[i].imag() < 0 ? "-" : "+") << std::abs(v[i].imag()) << 'i';
  }
  os << ']';
  return os.str();
}

/// One record per profile:
///   code=<name> profile=(..) type=<t> tested=<n> min_ratio=<x> violations=<n> [example=[..]]
inline void write_report(std::ostream &os, const DelayReport &r) {
  os.precision(12);
  for (const auto &p : r.profiles) {
    os << "code=" << r.code << " profile=" << p.profile.describe() << " type=" << to_string(p.type)
       << " search=" << r.search.describe() << " tested=" << p.tested
       << " min_ratio=" << p.min_ratio << " violations=" << p.violations;
    if (!p.examples.empty()) os << " example=" << format_vector(p.examples.front());
    os << '\n';
  }
}

namespace detail {

struct ProfileAcc {
  std::uint64_t tested = 0;
  double min_ratio = std::numeric_limits<double>::infinity();
  std::vector<Complex> worst;
  std::uint64_t violations = 0;
  std::vector<std::vector<Complex>> examples;
};

inline constexpr std::size_t kMaxExamples = 4;

// Gram bounds are trusted only when they certify a ratio this large, far
// above both the rank tolerance and double-precision Gram error.
inline constexpr double kGramFloor = 1e-10;

// Lower bound on (sigma_min / sigma_max)^2 of the m x len row block. With
// G = A A^H: lambda_max <= |G|_F, and by AM-GM the other m-1 eigenvalues
// multiply to at most (tr G / (m-1))^(m-1), so
// lambda_min >= det G (m-1)^(m-1) / (tr G)^(m-1).
inline double gram_ratio_bound(const Complex *rows, std::size_t m, std::size_t len) {
  std::array<Complex, 64> g{};
  double tr = 0, fro2 = 0;
  for (std::size_t p = 0; p < m; ++p)
    for (std::size_t q = p; q < m; ++q) {
      double re = 0, im = 0;
      const Complex *u = rows + p * len, *w = rows + q * len;
      for (std::size_t k = 0; k < len; ++k) {
        re += u[k].real() * w[k].real() + u[k].imag() * w[k].imag();
        im += u[k].imag() * w[k].real() - u[k].real() * w[k].imag();
      }
      g[p * m + q] = {re, im};
      g[q * m + p] = {re, -im};
      fro2 += (p == q ? 1.0 : 2.0) * (re * re + im * im);
      if (p == q) tr += re;
    }
  if (!(tr > 0)) return 0;
  // Hermitian positive semidefinite: Cholesky-style elimination, det = prod of pivots.
  double d = 1;
  for (std::size_t c = 0; c < m; ++c) {
    const double piv = g[c * m + c].real();
    if (!(piv > 0)) return 0;
    d *= piv;
    for (std::size_t r = c + 1; r < m; ++r) {
      const Complex f = g[r * m + c] / piv;
      for (std::size_t k = c + 1; k < m; ++k) g[r * m + k] -= f * g[c * m + k];
    }
  }
  const double k = static_cast<double>(m - 1);
  return d * std::pow(k / tr, k) / std::sqrt(fro2);
}

}  // namespace detail

/// Shifted rank of every tested nonzero difference vector under every profile.
/// Rank M is declared when sigma_M > tol * sigma_max.
inline DelayReport certify_delay_tolerance(const CodeSpec &code, std::span<const Complex> diffs,
                                           std::span<const DelayProfile> profiles, const SearchPolicy &policy,
                                           double tol = kRankTolerance) {
  require_symmetric_alphabet(diffs);
  for (const auto &p : profiles)
    if (p.size() != static_cast<std::size_t>(code.M))
      throw std::invalid_argument("certify_delay_tolerance: profile " + p.describe() + " does not match M=" +
                                  std::to_string(code.M));

  const DifferenceSpace space(static_cast<std::size_t>(code.k), diffs, policy);
  const std::size_t m = static_cast<std::size_t>(code.M);
  const std::size_t t = static_cast<std::size_t>(code.T);
  std::size_t max_len = t;
  for (const auto &p : profiles) max_len = std::max(max_len, t + static_cast<std::size_t>(p.d_max()));

  using Acc = std::vector<detail::ProfileAcc>;
  const Acc init(profiles.size());
  Acc merged = sweep(
      space, init, policy.threads,
      [&](Acc &acc, std::uint64_t, std::span<const Complex> s) {
        const ComplexMatrix x = code.encoder(s);
        thread_local std::vector<Complex> rows;
        thread_local std::vector<double> sv;
        rows.resize(m * max_len);
        sv.resize(m);
        for (std::size_t pi = 0; pi < profiles.size(); ++pi) {
          const auto &prof = profiles[pi];
          const std::size_t len = t + static_cast<std::size_t>(prof.d_max());
          std::fill(rows.begin(), rows.begin() + static_cast<std::ptrdiff_t>(m * len), Complex{});
          for (std::size_t r = 0; r < m; ++r)
            for (std::size_t c = 0; c < t; ++c) rows[r * len + c + static_cast<std::size_t>(prof[r])] = x(r, c);
          auto &a = acc[pi];
          ++a.tested;
          if (m <= 8) {
            const double b = detail::gram_ratio_bound(rows.data(), m, len);
            if (b > detail::kGramFloor && b > a.min_ratio * a.min_ratio) continue;
          }
          jacobi_singular_values<Complex>(std::span<Complex>(rows.data(), m * len), m, len, sv);
          const double ratio = sv.front() > 0 ? sv[m - 1] / sv.front() : 0.0;
          if (ratio < a.min_ratio) {
            a.min_ratio = ratio;
            a.worst.assign(s.begin(), s.end());
          }
          if (!(ratio > tol)) {
            ++a.violations;
            if (a.examples.size() < detail::kMaxExamples) a.examples.emplace_back(s.begin(), s.end());
          }
        }
      },
      [](Acc &into, const Acc &from) {
        for (std::size_t i = 0; i < into.size(); ++i) {
          auto &a = into[i];
          const auto &b = from[i];
          a.tested += b.tested;
          if (b.min_ratio < a.min_ratio) {
            a.min_ratio = b.min_ratio;
            a.worst = b.worst;
          }
          a.violations += b.violations;
          for (const auto &e : b.examples)
            if (a.examples.size() < detail::kMaxExamples) a.examples.push_back(e);
        }
      });

  DelayReport report{code.name, {space.kind(), space.size()}, {}};
  for (std::size_t pi = 0; pi < profiles.size(); ++pi) {
    auto &a = merged[pi];
    report.profiles.push_back({profiles[pi], classify_profile(profiles[pi]), a.tested, a.min_ratio,
                               std::move(a.worst), a.violations, std::move(a.examples)});
  }
  return report;
}

/// All profiles with delays up to d_max.
inline DelayReport certify_delay_tolerance(const CodeSpec &code, std::span<const Complex> diffs, int d_max,
                                           const SearchPolicy &policy, double tol = kRankTolerance) {
  const auto profiles = enumerate_profiles(code.M, d_max);
  return certify_delay_tolerance(code, diffs, profiles, policy, tol);
}

}  // namespace dtstc
