#pragma once

// Brute-force algebraic metrics over difference-symbol vectors: minimum
// determinant, minimum product distance, and non-vanishing of cofactors and
// selected 2x2 minors.

#include <algorithm>
#include <array>
#include <cstdint>
#include <limits>
#include <ostream>
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

enum class MetricKind { min_det, min_prod_dist, min_minor };

inline std::string to_string(MetricKind m) {
  switch (m) {
    case MetricKind::min_det: return "min_det";
    case MetricKind::min_prod_dist: return "min_prod_dist";
    case MetricKind::min_minor: return "min_minor";
  }
  return "?";
}

// Values at or below this are counted as vanishing.
inline constexpr double kVanishingTolerance = 1e-9;

struct MetricReport {
  std::string code;
  MetricKind metric = MetricKind::min_det;
  std::string detail;  // which minors, for min_minor
  double value = std::numeric_limits<double>::infinity();
  std::vector<Complex> argmin;
  SearchSummary search;
  std::uint64_t violations = 0;
  // Constellation size the alphabet came from, 0 when supplied directly.
  int q = 0;
};

inline void write_report(std::ostream &os, const MetricReport &r) {
  os.precision(12);
  os << "code=" << r.code << " metric=" << to_string(r.metric);
  if (!r.detail.empty()) os << " detail=" << r.detail;
  if (r.q) os << " q=" << r.q;
  os << " value=" << r.value << " search=" << r.search.describe() << " violations=" << r.violations
     << " argmin=" << format_vector(r.argmin) << '\n';
}

namespace detail {

struct MinAcc {
  double value = std::numeric_limits<double>::infinity();
  std::vector<Complex> argmin;
  std::uint64_t violations = 0;
};

// Minimises f(s) over the difference space.
template <typename F>
MetricReport minimise(const std::string &code, MetricKind kind, std::size_t length, std::span<const Complex> diffs,
                      const SearchPolicy &policy, F &&f) {
  const DifferenceSpace space(length, diffs, policy);
  if (space.size() == 0) throw std::invalid_argument(code + ": difference alphabet has no nonzero element");
  auto acc = sweep(
      space, MinAcc{}, policy.threads,
      [&](MinAcc &a, std::uint64_t, std::span<const Complex> s) {
        const double v = f(s);
        if (v < a.value) {
          a.value = v;
          a.argmin.assign(s.begin(), s.end());
        }
        if (v <= kVanishingTolerance) ++a.violations;
      },
      [](MinAcc &into, const MinAcc &from) {
        if (from.value < into.value) {
          into.value = from.value;
          into.argmin = from.argmin;
        }
        into.violations += from.violations;
      });
  MetricReport r;
  r.code = code;
  r.metric = kind;
  r.value = acc.value;
  r.argmin = std::move(acc.argmin);
  r.search = {space.kind(), space.size()};
  r.violations = acc.violations;
  return r;
}

}  // namespace detail

/// min |det(encode(ds))|^2 over nonzero difference vectors ds.
inline MetricReport min_determinant(const CodeSpec &code, std::span<const Complex> diffs, const SearchPolicy &policy) {
  if (code.M != code.T) throw std::invalid_argument("min_determinant: " + code.name + " is not square");
  return detail::minimise(code.name, MetricKind::min_det, static_cast<std::size_t>(code.k), diffs, policy,
                          [&](std::span<const Complex> s) { return std::norm(det(code.encoder(s))); });
}

inline std::vector<Complex> constellation_differences(const CodeSpec &code, int q) {
  const auto kind = code.base == BaseField::gaussian ? ConstellationKind::qam : ConstellationKind::hex;
  return Constellation(kind, q).difference_alphabet();
}

/// {a + b w : a, b in {-1, 0, 1}} with w = i (Gaussian) or j (Eisenstein).
inline std::vector<Complex> unit_differences(BaseField base) {
  const Complex w = base == BaseField::gaussian ? kI : kJ;
  std::vector<Complex> out{Complex{}};
  for (int a = -1; a <= 1; ++a)
    for (int b = -1; b <= 1; ++b)
      if (a || b) out.push_back(static_cast<double>(a) + w * static_cast<double>(b));
  return out;
}

/// Minimum determinant for each constellation size, ascending.
inline std::vector<MetricReport> nvd_sweep(const CodeSpec &code, std::span<const int> sizes, const SearchPolicy &policy) {
  if (!std::is_sorted(sizes.begin(), sizes.end()))
    throw std::invalid_argument("nvd_sweep: constellation sizes must be ascending");
  std::vector<MetricReport> out;
  for (int q : sizes) {
    const auto diffs = constellation_differences(code, q);
    out.push_back(min_determinant(code, diffs, policy));
    out.back().q = q;
  }
  return out;
}

/// Non-vanishing is observed when the minima do not increase with q and stay
/// above zero.
inline bool nvd_observed(std::span<const MetricReport> reports, double tol = 1e-9) {
  if (reports.empty()) return false;
  for (std::size_t i = 0; i < reports.size(); ++i) {
    if (!(reports[i].value > kVanishingTolerance)) return false;
    if (i && reports[i].value > reports[i - 1].value + tol) return false;
  }
  return true;
}

/// min prod_k |(m ds)_k| over nonzero ds.
inline MetricReport min_product_distance(const GeneratorSet &gen, std::span<const Complex> diffs,
                                         const SearchPolicy &policy, const std::string &label = "generator") {
  const ComplexMatrix &m = gen.m;
  return detail::minimise(label, MetricKind::min_prod_dist, m.cols(), diffs, policy, [&](std::span<const Complex> s) {
    double p = 1.0;
    for (std::size_t r = 0; r < m.rows(); ++r) {
      Complex x{};
      const auto row = m.row(r);
      for (std::size_t c = 0; c < row.size(); ++c) x += row[c] * s[c];
      p *= std::abs(x);
    }
    return p;
  });
}

/// Smallest entry magnitude of the adjugate of encode(ds).
inline MetricReport cofactor_nonzero_check(const CodeSpec &code, std::span<const Complex> diffs,
                                           const SearchPolicy &policy) {
  if (code.M != 3 && code.M != 4) throw std::invalid_argument("cofactor_nonzero_check: needs a 3x3 or 4x4 code");
  auto r = detail::minimise(code.name, MetricKind::min_minor, static_cast<std::size_t>(code.k), diffs, policy,
                            [&](std::span<const Complex> s) {
                              const auto adj = adjugate(code.encoder(s));
                              double lo = std::numeric_limits<double>::infinity();
                              for (const auto &v : adj.data()) lo = std::min(lo, std::abs(v));
                              return lo;
                            });
  r.detail = "cofactor";
  return r;
}

struct MinorIndex {
  std::size_t r1, r2, c1, c2;
};

/// 2x2 minors of an M x M mask whose four coefficients contain exactly one +-i.
inline std::vector<MinorIndex> single_imaginary_minors(const ComplexMatrix &phi) {
  auto imaginary = [](Complex z) { return std::abs(z.real()) < 1e-12 && std::abs(std::abs(z.imag()) - 1.0) < 1e-12; };
  std::vector<MinorIndex> out;
  const std::size_t n = phi.rows();
  for (std::size_t r1 = 0; r1 < n; ++r1)
    for (std::size_t r2 = r1 + 1; r2 < n; ++r2)
      for (std::size_t c1 = 0; c1 < n; ++c1)
        for (std::size_t c2 = c1 + 1; c2 < n; ++c2) {
          const int count = imaginary(phi(r1, c1)) + imaginary(phi(r1, c2)) + imaginary(phi(r2, c1)) +
                            imaginary(phi(r2, c2));
          if (count == 1) out.push_back({r1, r2, c1, c2});
        }
  return out;
}

/// Smallest magnitude over the single-imaginary 2x2 minors of the 4x4 tensor code.
inline MetricReport minor2_check_gamma4(std::span<const Complex> diffs, const SearchPolicy &policy,
                                        std::span<const MinorIndex> minors = {}) {
  const CodeSpec code = make_code("gamma4");
  std::vector<MinorIndex> selected(minors.begin(), minors.end());
  if (selected.empty()) selected = single_imaginary_minors(*code.phi);
  auto r = detail::minimise(code.name, MetricKind::min_minor, static_cast<std::size_t>(code.k), diffs, policy,
                            [&](std::span<const Complex> s) {
                              const auto x = code.encoder(s);
                              double lo = std::numeric_limits<double>::infinity();
                              for (const auto &mi : selected) {
                                const Complex d = x(mi.r1, mi.c1) * x(mi.r2, mi.c2) - x(mi.r1, mi.c2) * x(mi.r2, mi.c1);
                                lo = std::min(lo, std::abs(d));
                              }
                              return lo;
                            });
  r.detail = "minor2";
  return r;
}

}  // namespace dtstc
