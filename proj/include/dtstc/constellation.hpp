#pragma once

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <limits>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "fields.hpp"

namespace dtstc {

enum class ConstellationKind { qam, hex };

inline std::string to_string(ConstellationKind k) { return k == ConstellationKind::qam ? "QAM" : "HEX"; }

/// Square q-point constellation  s = g[a] + w * g[b]  with w = i (QAM, carved
/// from Z[i]) or w = j (HEX, carved from Z[j]). The per-axis grid g is the
/// centred set {2m-(L-1)} for QAM and {m-(L-1)/2} for HEX, L = sqrt(q), so
/// symbol differences always lie in the underlying ring. Points stay at these
/// integer coordinates; energy normalisation is left to the caller.
///
/// Bit labels: the first log2(L) bits Gray-label the 1-axis index, the
/// remaining bits Gray-label the w-axis index.
class Constellation {
 public:
  Constellation(ConstellationKind kind, int q) : kind_(kind), q_(q) {
    side_ = static_cast<int>(std::lround(std::sqrt(static_cast<double>(q))));
    if (q < 4 || side_ * side_ != q || (side_ & (side_ - 1)) != 0)
      throw std::invalid_argument("Constellation: q must be an even power of two >= 4, got " + std::to_string(q));
    bits_per_axis_ = 0;
    while ((1 << bits_per_axis_) < side_) ++bits_per_axis_;
    grid_.resize(static_cast<std::size_t>(side_));
    for (int m = 0; m < side_; ++m)
      grid_[static_cast<std::size_t>(m)] =
          kind == ConstellationKind::qam ? 2.0 * m - (side_ - 1) : m - (side_ - 1) / 2.0;
    points_.resize(static_cast<std::size_t>(q));
    for (int label = 0; label < q; ++label) {
      const int ga = label >> bits_per_axis_;
      const int gb = label & (side_ - 1);
      points_[static_cast<std::size_t>(label)] = point(gray_decode(ga), gray_decode(gb));
    }
  }

  ConstellationKind kind() const noexcept { return kind_; }
  int size() const noexcept { return q_; }
  int side() const noexcept { return side_; }
  int bits_per_symbol() const noexcept { return 2 * bits_per_axis_; }
  int bits_per_axis() const noexcept { return bits_per_axis_; }
  BaseField base() const noexcept { return kind_ == ConstellationKind::qam ? BaseField::gaussian : BaseField::eisenstein; }
  /// Second real basis vector of the symbol plane (1 is the first).
  Complex omega() const noexcept { return kind_ == ConstellationKind::qam ? kI : kJ; }
  /// Per-axis coordinate values, ascending.
  std::span<const double> grid() const noexcept { return grid_; }
  /// Points indexed by their bit label.
  std::span<const Complex> points() const noexcept { return points_; }

  Complex point(int ia, int ib) const {
    return grid_[static_cast<std::size_t>(ia)] + omega() * grid_[static_cast<std::size_t>(ib)];
  }

  double average_energy() const {
    double e = 0;
    for (const auto &p : points_) e += std::norm(p);
    return e / q_;
  }

  /// Variance of one grid coordinate under uniform symbols.
  double coordinate_variance() const {
    double e = 0;
    for (double g : grid_) e += g * g;
    return e / side_;
  }

  /// Points scaled to unit average energy.
  std::vector<Complex> normalized_points() const {
    const double s = 1.0 / std::sqrt(average_energy());
    std::vector<Complex> out(points_.begin(), points_.end());
    for (auto &p : out) p *= s;
    return out;
  }

  int axis_label(int grid_index) const { return grid_index ^ (grid_index >> 1); }

  /// Bit label of the point with grid indices (ia, ib).
  int label_of(int ia, int ib) const { return (axis_label(ia) << bits_per_axis_) | axis_label(ib); }

  /// Grid indices (ia, ib) of the point nearest to z.
  std::pair<int, int> nearest_indices(Complex z) const {
    int best_a = 0, best_b = 0;
    double best = std::numeric_limits<double>::infinity();
    for (int a = 0; a < side_; ++a)
      for (int b = 0; b < side_; ++b) {
        const double d = std::norm(z - point(a, b));
        if (d < best) {
          best = d;
          best_a = a;
          best_b = b;
        }
      }
    return {best_a, best_b};
  }

  /// All nonzero-or-zero differences of two points, zero first.
  std::vector<Complex> difference_alphabet() const {
    std::vector<Complex> out{Complex{}};
    const double step = kind_ == ConstellationKind::qam ? 2.0 : 1.0;
    for (int a = -(side_ - 1); a <= side_ - 1; ++a)
      for (int b = -(side_ - 1); b <= side_ - 1; ++b)
        if (a != 0 || b != 0) out.push_back(step * a + omega() * (step * b));
    return out;
  }

  std::string describe() const {
    std::string s = std::to_string(q_) + "-" + to_string(kind_) + " grid={";
    for (std::size_t m = 0; m < grid_.size(); ++m) s += (m ? "," : "") + format_double(grid_[m]);
    s += "} basis=(1," + std::string(kind_ == ConstellationKind::qam ? "i" : "j") + ")";
    return s;
  }

 private:
  static int gray_decode(int g) {
    int b = 0;
    for (; g; g >>= 1) b ^= g;
    return b;
  }
  static std::string format_double(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%g", v);
    return buf;
  }

  ConstellationKind kind_;
  int q_;
  int side_ = 0;
  int bits_per_axis_ = 0;
  std::vector<double> grid_;
  std::vector<Complex> points_;
};

/// Maps bits to symbols, log2(q) bits per symbol, MSB first.
inline std::vector<Complex> bits_to_symbols(std::span<const std::uint8_t> bits, const Constellation &c) {
  const auto k = static_cast<std::size_t>(c.bits_per_symbol());
  if (bits.size() % k != 0)
    throw std::invalid_argument("bits_to_symbols: " + std::to_string(bits.size()) + " bits is not a multiple of " +
                                std::to_string(k));
  std::vector<Complex> out;
  out.reserve(bits.size() / k);
  for (std::size_t s = 0; s < bits.size(); s += k) {
    int label = 0;
    for (std::size_t b = 0; b < k; ++b) label = (label << 1) | (bits[s + b] & 1);
    out.push_back(c.points()[static_cast<std::size_t>(label)]);
  }
  return out;
}

/// Hard-decision inverse of bits_to_symbols (nearest point).
inline std::vector<std::uint8_t> symbols_to_bits(std::span<const Complex> symbols, const Constellation &c) {
  const int k = c.bits_per_symbol();
  std::vector<std::uint8_t> out;
  out.reserve(symbols.size() * static_cast<std::size_t>(k));
  for (const auto &z : symbols) {
    const auto [a, b] = c.nearest_indices(z);
    const int label = c.label_of(a, b);
    for (int bit = k - 1; bit >= 0; --bit) out.push_back(static_cast<std::uint8_t>((label >> bit) & 1));
  }
  return out;
}

}  // namespace dtstc
