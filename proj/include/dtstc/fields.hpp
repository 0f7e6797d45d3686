#pragma once

// Unitary lattice generator matrices obtained from the canonical embeddings
// of cyclic extensions of Q(i) and Q(j), and their tensor products.

#include <array>
#include <cmath>
#include <functional>
#include <numbers>
#include <numeric>
#include <stdexcept>
#include <string>
#include <vector>

#include "linalg.hpp"

namespace dtstc {

inline const Complex kI{0.0, 1.0};
/// Primitive cube root of unity e^{2 pi i / 3}.
inline const Complex kJ = std::polar(1.0, 2.0 * std::numbers::pi / 3.0);

inline Complex root_of_unity(int n, int k = 1) {
  return std::polar(1.0, 2.0 * std::numbers::pi * k / n);
}

enum class BaseField { gaussian, eisenstein };
enum class FieldVariant { root_of_unity, non_norm_ratio };

struct FieldSpec {
  int dimension = 2;
  BaseField base = BaseField::gaussian;
  FieldVariant variant = FieldVariant::root_of_unity;
  long d_k1 = 5;
  long d_k2 = 4;

  void validate() const {
    if (dimension < 2 || dimension > 4)
      throw std::invalid_argument("FieldSpec: dimension must be 2, 3 or 4");
    if (std::gcd(d_k1, d_k2) != 1) throw std::invalid_argument("FieldSpec: discriminants are not coprime");
    if ((base == BaseField::eisenstein) != (dimension == 3))
      throw std::invalid_argument("FieldSpec: Eisenstein base is used exactly for dimension 3");
    if (variant == FieldVariant::non_norm_ratio && dimension != 2)
      throw std::invalid_argument("FieldSpec: non-norm-ratio variant exists only for dimension 2");
  }
};

/// The constructions shipped with the library.
inline FieldSpec golden_field_spec() { return {2, BaseField::gaussian, FieldVariant::root_of_unity, 5, 4}; }
inline FieldSpec perfect3_field_spec() { return {3, BaseField::eisenstein, FieldVariant::root_of_unity, 49, 27}; }
inline FieldSpec perfect4_field_spec() { return {4, BaseField::gaussian, FieldVariant::root_of_unity, 1125, 256}; }
inline FieldSpec alt2_field_spec() { return {2, BaseField::gaussian, FieldVariant::non_norm_ratio, 5, 52}; }

inline FieldSpec field_spec_for_dimension(int m) {
  switch (m) {
    case 2: return golden_field_spec();
    case 3: return perfect3_field_spec();
    case 4: return perfect4_field_spec();
    default: throw std::invalid_argument("no field construction for dimension " + std::to_string(m));
  }
}

struct GeneratorSet {
  ComplexMatrix m1;
  ComplexMatrix m2;
  ComplexMatrix m;  // kron(m2, m1)
  double p1 = 1.0;
  double p2 = 1.0;
};

namespace detail {

using BasisPolynomial = std::function<Complex(double)>;

// Rows are the Galois conjugates sigma^r applied to the basis, where sigma acts
// on the totally real generator as theta -> theta^2 - 2.
inline ComplexMatrix embed_real_cyclic(const std::vector<BasisPolynomial> &basis, double theta0, double p) {
  const std::size_t n = basis.size();
  ComplexMatrix m(n, n);
  const double scale = 1.0 / std::sqrt(p);
  double theta = theta0;
  for (std::size_t r = 0; r < n; ++r) {
    for (std::size_t c = 0; c < n; ++c) m(r, c) = basis[c](theta) * scale;
    theta = theta * theta - 2.0;
  }
  return m;
}

}  // namespace detail

/// Golden-code rotation (1/sqrt 5)[[a, a t], [a', a' t']] with t the golden ratio
/// and a = 1 + i - i t.
inline ComplexMatrix golden_m1() {
  const double theta = (1.0 + std::sqrt(5.0)) / 2.0;
  const double theta_bar = (1.0 - std::sqrt(5.0)) / 2.0;
  const Complex alpha = Complex{1, 1} - kI * theta;
  const Complex alpha_bar = Complex{1, 1} - kI * theta_bar;
  const double s = 1.0 / std::sqrt(5.0);
  return ComplexMatrix{{alpha * s, alpha * theta * s}, {alpha_bar * s, alpha_bar * theta_bar * s}};
}

/// Embedding of the power basis of Q(zeta_{4M}) for M = 2, 4 and Q(zeta_9) for
/// M = 3; the Galois generator multiplies zeta by the M-th root of unity.
inline ComplexMatrix cyclotomic_m2(int dimension) {
  Complex zeta, w;
  switch (dimension) {
    case 2: zeta = root_of_unity(8); w = -1.0; break;
    case 3: zeta = root_of_unity(9); w = kJ; break;
    case 4: zeta = root_of_unity(16); w = kI; break;
    default: throw std::invalid_argument("cyclotomic_m2: unsupported dimension " + std::to_string(dimension));
  }
  const auto n = static_cast<std::size_t>(dimension);
  ComplexMatrix m(n, n);
  const double scale = 1.0 / std::sqrt(static_cast<double>(dimension));
  for (std::size_t c = 0; c < n; ++c) {
    const Complex conj_zeta = std::pow(w, static_cast<int>(c)) * zeta;
    for (std::size_t a = 0; a < n; ++a) m(c, a) = std::pow(conj_zeta, static_cast<int>(a)) * scale;
  }
  return m;
}

inline ComplexMatrix perfect3_m1() {
  const Complex j = kJ;
  return detail::embed_real_cyclic(
      {
          [j](double t) { return (1.0 + j) + t; },
          [j](double t) { return (-1.0 - 2.0 * j) + j * t * t; },
          [j](double t) { return (-1.0 - 2.0 * j) + (1.0 + j) * t + (1.0 + j) * t * t; },
      },
      2.0 * std::cos(2.0 * std::numbers::pi / 7.0), 7.0);
}

inline ComplexMatrix perfect4_m1() {
  const Complex i = kI;
  return detail::embed_real_cyclic(
      {
          [i](double t) { return (1.0 - 3.0 * i) + i * t * t; },
          [i](double t) { return (1.0 - 3.0 * i) * t + i * t * t * t; },
          [i](double t) { return -i + (-3.0 + 4.0 * i) * t + (1.0 - i) * t * t * t; },
          [](double t) { return Complex{-1, 1} - 3.0 * t + t * t + t * t * t; },
      },
      2.0 * std::cos(2.0 * std::numbers::pi / 15.0), 15.0);
}

/// Published 5-digit rotation for the non-norm-ratio 2x2 construction.
inline ComplexMatrix alt2_m1() {
  return ComplexMatrix{{-0.52573, -0.85065}, {-0.85065, 0.52573}};
}

/// Principal square root of (3+2i)/(2+3i).
inline Complex alt2_theta2() { return std::sqrt(Complex{3, 2} / Complex{2, 3}); }

inline ComplexMatrix alt2_m2() {
  const Complex t = alt2_theta2();
  const double s = 1.0 / std::sqrt(2.0);
  return ComplexMatrix{{s, t * s}, {s, -t * s}};
}

inline GeneratorSet build_generators(const FieldSpec &spec) {
  spec.validate();
  GeneratorSet g;
  if (spec.variant == FieldVariant::non_norm_ratio) {
    g.m1 = alt2_m1();
    g.m2 = alt2_m2();
    g.p1 = 1.0;
    g.p2 = 2.0;
  } else {
    switch (spec.dimension) {
      case 2: g.m1 = golden_m1(); g.p1 = 5.0; break;
      case 3: g.m1 = perfect3_m1(); g.p1 = 7.0; break;
      case 4: g.m1 = perfect4_m1(); g.p1 = 15.0; break;
    }
    g.m2 = cyclotomic_m2(spec.dimension);
    g.p2 = spec.dimension;
  }
  g.m = kron(g.m2, g.m1);
  return g;
}

/// 1 / sqrt(d_K1^M * d_K2^M): the product-distance floor of the compositum
/// lattice for integer symbol vectors.
inline double min_product_distance_bound(const FieldSpec &spec) {
  spec.validate();
  const double m = spec.dimension;
  return 1.0 / std::sqrt(std::pow(static_cast<double>(spec.d_k1), m) * std::pow(static_cast<double>(spec.d_k2), m));
}

}  // namespace dtstc
