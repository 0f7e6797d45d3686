#pragma once

// Encoders for the delay-tolerant tensor-product codes and the reference
// codes they are compared against, plus a registry keyed by name.

#include <algorithm>
#include <array>
#include <functional>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "fields.hpp"
#include "linalg.hpp"

namespace dtstc {

struct Codeword {
  ComplexMatrix matrix;  // M x T
  std::vector<Complex> source_symbols;
};

using Encoder = std::function<ComplexMatrix(std::span<const Complex>)>;

struct CodeSpec {
  std::string name;
  int M = 0;  // transmit antennas / relays
  int T = 0;  // channel uses
  int k = 0;  // information symbols per codeword
  BaseField base = BaseField::gaussian;
  // False for codes that conjugate symbols; those are only real-linear.
  bool complex_linear = true;
  std::optional<GeneratorSet> generator;
  std::optional<ComplexMatrix> phi;
  Encoder encoder;

  bool is_gamma_family() const { return generator.has_value() && phi.has_value(); }
};

inline Codeword encode(const CodeSpec &spec, std::span<const Complex> s) {
  if (s.size() != static_cast<std::size_t>(spec.k))
    throw std::invalid_argument(spec.name + ": expected " + std::to_string(spec.k) + " symbols, got " +
                                std::to_string(s.size()));
  return {spec.encoder(s), std::vector<Complex>(s.begin(), s.end())};
}

namespace detail {

inline void require_length(std::span<const Complex> s, std::size_t n, const char *who) {
  if (s.size() != n)
    throw std::invalid_argument(std::string(who) + ": expected " + std::to_string(n) + " symbols, got " +
                                std::to_string(s.size()));
}

// x = gen * s, then entry (r, c) = phi(r, c) * x[c*M + r] (x fills column by column).
inline ComplexMatrix hadamard_codeword(const ComplexMatrix &gen, const ComplexMatrix &phi, std::span<const Complex> s) {
  const std::size_t m = phi.rows();
  ComplexMatrix out(m, m);
  for (std::size_t c = 0; c < m; ++c)
    for (std::size_t r = 0; r < m; ++r) {
      const std::size_t l = c * m + r;
      Complex x{};
      const auto row = gen.row(l);
      for (std::size_t t = 0; t < s.size(); ++t) x += row[t] * s[t];
      out(r, c) = phi(r, c) * x;
    }
  return out;
}

// Cyclic-division-algebra layering: diagonal `a` (entries (r, r+a mod M))
// carries m1 * s[aM .. aM+M-1]; entries below the main diagonal pick up gamma.
inline ComplexMatrix layered_codeword(const ComplexMatrix &m1, Complex gamma, std::span<const Complex> s) {
  const std::size_t m = m1.rows();
  ComplexMatrix out(m, m);
  for (std::size_t a = 0; a < m; ++a) {
    const auto layer = matvec(m1, s.subspan(a * m, m));
    for (std::size_t r = 0; r < m; ++r) {
      const std::size_t col = (r + a) % m;
      out(r, col) = col < r ? gamma * layer[r] : layer[r];
    }
  }
  return out;
}

}  // namespace detail

/// Fourier matrix in dimension M: (w^{rc}) with w the primitive M-th root of unity.
inline ComplexMatrix fourier_phi(int dimension) {
  const auto n = static_cast<std::size_t>(dimension);
  ComplexMatrix phi(n, n);
  const Complex w = dimension == 3 ? kJ : (dimension == 4 ? kI : Complex{-1.0});
  for (std::size_t r = 0; r < n; ++r)
    for (std::size_t c = 0; c < n; ++c) phi(r, c) = std::pow(w, static_cast<int>(r * c % n));
  return phi;
}

/// Coefficient mask of the 2x2 code: phi_2 = -1, all others 1.
inline ComplexMatrix gamma2_phi() { return ComplexMatrix{{1.0, 1.0}, {-1.0, 1.0}}; }

inline ComplexMatrix encode_gamma(const CodeSpec &spec, std::span<const Complex> s) {
  if (!spec.is_gamma_family()) throw std::invalid_argument(spec.name + " is not a tensor-product code");
  detail::require_length(s, static_cast<std::size_t>(spec.M * spec.M), "encode_gamma");
  return detail::hadamard_codeword(spec.generator->m, *spec.phi, s);
}

inline ComplexMatrix encode_golden(std::span<const Complex> s) {
  detail::require_length(s, 4, "encode_golden");
  return detail::layered_codeword(golden_m1(), kI, s);
}

/// Golden-code variant (1/sqrt(2(1+r^2)))[[s1+irs4, rs2+s3], [s2-rs3, irs1+s4]], r = theta-1.
inline ComplexMatrix encode_golden_c(std::span<const Complex> s) {
  detail::require_length(s, 4, "encode_golden_c");
  const double r = (1.0 + std::sqrt(5.0)) / 2.0 - 1.0;
  const double n = 1.0 / std::sqrt(2.0 * (1.0 + r * r));
  return ComplexMatrix{{n * (s[0] + kI * r * s[3]), n * (r * s[1] + s[2])},
                       {n * (s[1] - r * s[2]), n * (kI * r * s[0] + s[3])}};
}

inline Complex perfect_gamma(int dimension) {
  switch (dimension) {
    case 2: return kI;
    case 3: return kJ;
    case 4: return kI;
    default: throw std::invalid_argument("perfect code: unsupported dimension " + std::to_string(dimension));
  }
}

inline ComplexMatrix perfect_m1(int dimension) {
  switch (dimension) {
    case 2: return golden_m1();
    case 3: return perfect3_m1();
    case 4: return perfect4_m1();
    default: throw std::invalid_argument("perfect code: unsupported dimension " + std::to_string(dimension));
  }
}

/// 3x3 and 4x4 perfect codes.
inline ComplexMatrix encode_perfect(int dimension, std::span<const Complex> s) {
  if (dimension != 3 && dimension != 4)
    throw std::invalid_argument("encode_perfect: dimension must be 3 or 4, got " + std::to_string(dimension));
  detail::require_length(s, static_cast<std::size_t>(dimension * dimension), "encode_perfect");
  return detail::layered_codeword(perfect_m1(dimension), perfect_gamma(dimension), s);
}

/// Fixed unitaries with gamma(s) = U * base(s) * V. For M = 2 they relate the
/// 2x2 tensor code to the Golden code; for M = 3, 4 to the perfect codes.
inline ComplexMatrix code_unitary_u(int dimension) {
  switch (dimension) {
    case 2: return ComplexMatrix{{root_of_unity(8), 0.0}, {0.0, -1.0}};
    case 3: return ComplexMatrix{{1.0, 0.0, 0.0}, {0.0, kJ * kJ * root_of_unity(9, 2), 0.0}, {0.0, 0.0, kJ * kJ * root_of_unity(9)}};
    case 4: {
      const Complex z = root_of_unity(16);
      return ComplexMatrix{{1.0, 0.0, 0.0, 0.0},
                           {0.0, -kI * z * z * z, 0.0, 0.0},
                           {0.0, 0.0, -kI * z * z, 0.0},
                           {0.0, 0.0, 0.0, -kI * z}};
    }
    default: throw std::invalid_argument("code_unitary_u: unsupported dimension");
  }
}

inline ComplexMatrix code_unitary_v(int dimension) {
  switch (dimension) {
    case 2: {
      const Complex z = root_of_unity(8);
      const double s = 1.0 / std::sqrt(2.0);
      return ComplexMatrix{{-kI * z * s, -kI * z * s}, {s, -s}};
    }
    case 3:
    case 4: {
      // V(k, c) = zeta^k w^{kc} / sqrt(M).
      const auto n = static_cast<std::size_t>(dimension);
      const Complex zeta = dimension == 3 ? root_of_unity(9) : root_of_unity(16);
      const Complex w = dimension == 3 ? kJ : kI;
      ComplexMatrix v(n, n);
      for (std::size_t k = 0; k < n; ++k)
        for (std::size_t c = 0; c < n; ++c)
          v(k, c) = std::pow(zeta, static_cast<int>(k)) * std::pow(w, static_cast<int>(k * c % n)) / std::sqrt(double(n));
      return v;
    }
    default: throw std::invalid_argument("code_unitary_v: unsupported dimension");
  }
}

/// Unitary twist W of the Silver code.
inline ComplexMatrix silver_w() {
  const double w = 1.0 / std::sqrt(7.0);
  return ComplexMatrix{{w * Complex{1, 1}, w * Complex{-1, 2}}, {w * Complex{1, 2}, w * Complex{1, -1}}};
}

/// Silver code X_A(s1,s2) + T W X_B(s3,s4) with X(a,b) = [[a, -b*], [b, a*]], T = diag(1,-1).
inline ComplexMatrix encode_silver(std::span<const Complex> s) {
  detail::require_length(s, 4, "encode_silver");
  auto alamouti = [](Complex a, Complex b) { return ComplexMatrix{{a, -std::conj(b)}, {b, std::conj(a)}}; };
  static const ComplexMatrix tw = matmul(ComplexMatrix{{1.0, 0.0}, {0.0, -1.0}}, silver_w());
  return alamouti(s[0], s[1]) + matmul(tw, alamouti(s[2], s[3]));
}

struct SezginerConstants {
  double a, c;
  Complex b, d;
};

inline SezginerConstants sezginer_constants() {
  const double r7 = std::sqrt(7.0);
  const Complex b = Complex{1.0 - r7, 1.0 + r7} / (4.0 * std::sqrt(2.0));
  return {1.0 / std::sqrt(2.0), 1.0 / std::sqrt(2.0), b, -kI * b};
}

inline ComplexMatrix encode_sezginer(std::span<const Complex> s) {
  detail::require_length(s, 4, "encode_sezginer");
  const auto [a, c, b, d] = sezginer_constants();
  return ComplexMatrix{{a * s[0] + b * s[2], -c * std::conj(s[1]) - d * std::conj(s[3])},
                       {a * s[1] + b * s[3], c * std::conj(s[0]) + d * std::conj(s[2])}};
}

struct DamenConstants {
  double a, b, c, d;
};

inline DamenConstants damen_constants() {
  const double r5 = std::sqrt(5.0), r2 = std::sqrt(2.0);
  return {1.0 / std::sqrt((5 + r5) * (2 + r2)), 1.0 / std::sqrt((5 - r5) * (2 + r2)),
          1.0 / std::sqrt((5 + r5) * (2 - r2)), 1.0 / std::sqrt((5 - r5) * (2 - r2))};
}

inline ComplexMatrix encode_damen(std::span<const Complex> s) {
  detail::require_length(s, 4, "encode_damen");
  const auto [a, b, c, d] = damen_constants();
  return ComplexMatrix{{a * s[0] + b * s[1] - c * s[2] - d * s[3], -c * s[0] - d * s[1] - a * s[2] - b * s[3]},
                       {-b * s[0] + a * s[1] + d * s[2] - c * s[3], -d * s[0] + c * s[1] - b * s[2] + a * s[3]}};
}

enum class DerivedBase { silver, sezginer };

/// U * base(s) * V with the 2x2 Golden-to-tensor-code unitaries.
inline ComplexMatrix encode_derived(DerivedBase base, std::span<const Complex> s) {
  const ComplexMatrix x = base == DerivedBase::silver ? encode_silver(s) : encode_sezginer(s);
  return matmul(matmul(code_unitary_u(2), x), code_unitary_v(2));
}

// --- registry ---------------------------------------------------------------

inline CodeSpec make_gamma_code(const std::string &name, const FieldSpec &field, ComplexMatrix phi) {
  CodeSpec spec;
  spec.name = name;
  spec.M = spec.T = field.dimension;
  spec.k = field.dimension * field.dimension;
  spec.base = field.base;
  spec.generator = build_generators(field);
  spec.phi = std::move(phi);
  spec.encoder = [gen = spec.generator->m, mask = *spec.phi](std::span<const Complex> s) {
    return detail::hadamard_codeword(gen, mask, s);
  };
  return spec;
}

inline CodeSpec make_2x2_code(const std::string &name, Encoder enc, bool complex_linear) {
  CodeSpec spec;
  spec.name = name;
  spec.M = spec.T = 2;
  spec.k = 4;
  spec.base = BaseField::gaussian;
  spec.complex_linear = complex_linear;
  spec.encoder = std::move(enc);
  return spec;
}

inline const std::vector<std::string> &code_names() {
  static const std::vector<std::string> names{"gamma2", "gamma3",   "gamma4", "golden",     "goldenC",
                                              "silver", "sezginer", "damen",  "silver_d",   "sezginer_d",
                                              "alt2",   "perfect3", "perfect4"};
  return names;
}

inline CodeSpec make_code(const std::string &name) {
  if (name == "gamma2") return make_gamma_code(name, golden_field_spec(), gamma2_phi());
  if (name == "gamma3") return make_gamma_code(name, perfect3_field_spec(), fourier_phi(3));
  if (name == "gamma4") return make_gamma_code(name, perfect4_field_spec(), fourier_phi(4));
  if (name == "alt2") return make_gamma_code(name, alt2_field_spec(), gamma2_phi());
  if (name == "golden") return make_2x2_code(name, encode_golden, true);
  if (name == "goldenC") return make_2x2_code(name, encode_golden_c, true);
  if (name == "silver") return make_2x2_code(name, encode_silver, false);
  if (name == "sezginer") return make_2x2_code(name, encode_sezginer, false);
  if (name == "damen") return make_2x2_code(name, encode_damen, true);
  if (name == "silver_d")
    return make_2x2_code(name, [](std::span<const Complex> s) { return encode_derived(DerivedBase::silver, s); }, false);
  if (name == "sezginer_d")
    return make_2x2_code(name, [](std::span<const Complex> s) { return encode_derived(DerivedBase::sezginer, s); }, false);
  if (name == "perfect3" || name == "perfect4") {
    const int m = name.back() - '0';
    CodeSpec spec;
    spec.name = name;
    spec.M = spec.T = m;
    spec.k = m * m;
    spec.base = m == 3 ? BaseField::eisenstein : BaseField::gaussian;
    spec.encoder = [m](std::span<const Complex> s) { return encode_perfect(m, s); };
    return spec;
  }
  throw std::invalid_argument("unknown code '" + name + "'");
}

}  // namespace dtstc
