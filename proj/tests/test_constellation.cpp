#include <gtest/gtest.h>

#include <bit>
#include <random>
#include <set>

#include "dtstc/constellation.hpp"

using namespace dtstc;

namespace {

std::set<std::pair<double, double>> as_set(std::span<const Complex> pts) {
  std::set<std::pair<double, double>> s;
  for (auto p : pts) s.insert({std::round(p.real() * 1e9), std::round(p.imag() * 1e9)});
  return s;
}

}  // namespace

TEST(Constellation, SizesAndDistinctPoints) {
  for (auto kind : {ConstellationKind::qam, ConstellationKind::hex})
    for (int q : {4, 16, 64}) {
      const Constellation c(kind, q);
      EXPECT_EQ(c.size(), q);
      EXPECT_EQ(static_cast<int>(c.points().size()), q);
      EXPECT_EQ(static_cast<int>(as_set(c.points()).size()), q);
      EXPECT_EQ(1 << c.bits_per_symbol(), q);
    }
  EXPECT_THROW(Constellation(ConstellationKind::qam, 8), std::invalid_argument);
  EXPECT_THROW(Constellation(ConstellationKind::hex, 2), std::invalid_argument);
}

TEST(Constellation, QamOddIntegerGrid) {
  const Constellation c(ConstellationKind::qam, 16);
  for (auto p : c.points()) {
    EXPECT_EQ(std::fmod(std::abs(p.real()), 2.0), 1.0);
    EXPECT_EQ(std::fmod(std::abs(p.imag()), 2.0), 1.0);
  }
  EXPECT_DOUBLE_EQ(c.average_energy(), 10.0);
  EXPECT_DOUBLE_EQ(Constellation(ConstellationKind::qam, 4).average_energy(), 2.0);
}

TEST(Constellation, Hex4IsShiftedEisensteinSquare) {
  const Constellation c(ConstellationKind::hex, 4);
  const Complex shift = (1.0 + kJ) / 2.0;
  const std::vector<Complex> expect{-shift, 1.0 - shift, kJ - shift, 1.0 + kJ - shift};
  EXPECT_EQ(as_set(c.points()), as_set(expect));
  // differences are Eisenstein integers
  for (auto p : c.points())
    for (auto r : c.points()) {
      const Complex d = p - r;
      const double b = d.imag() / kJ.imag();
      const double a = d.real() - b * kJ.real();
      EXPECT_NEAR(a, std::round(a), 1e-12);
      EXPECT_NEAR(b, std::round(b), 1e-12);
    }
}

TEST(Constellation, NormalizedEnergy) {
  for (auto kind : {ConstellationKind::qam, ConstellationKind::hex}) {
    const Constellation c(kind, 16);
    double e = 0;
    for (auto p : c.normalized_points()) e += std::norm(p);
    EXPECT_NEAR(e / 16, 1.0, 1e-12);
  }
}

TEST(Constellation, CoordinateVarianceMatchesEnergy) {
  // uncorrelated coordinates: E|a + w b|^2 = var (1 + |w|^2)
  for (auto kind : {ConstellationKind::qam, ConstellationKind::hex}) {
    const Constellation c(kind, 16);
    EXPECT_NEAR(c.average_energy(), 2 * c.coordinate_variance(), 1e-12);
  }
}

TEST(Constellation, GrayNeighboursDifferInOneBit) {
  const Constellation c(ConstellationKind::qam, 64);
  for (int a = 0; a < c.side(); ++a)
    for (int b = 0; b + 1 < c.side(); ++b) {
      EXPECT_EQ(std::popcount(static_cast<unsigned>(c.label_of(a, b) ^ c.label_of(a, b + 1))), 1);
      EXPECT_EQ(std::popcount(static_cast<unsigned>(c.label_of(b, a) ^ c.label_of(b + 1, a))), 1);
    }
}

TEST(Constellation, LabelIndexesPoints) {
  const Constellation c(ConstellationKind::hex, 16);
  for (int a = 0; a < c.side(); ++a)
    for (int b = 0; b < c.side(); ++b) {
      EXPECT_EQ(c.points()[static_cast<std::size_t>(c.label_of(a, b))], c.point(a, b));
      EXPECT_EQ(c.nearest_indices(c.point(a, b) + Complex{0.1, -0.05}), std::make_pair(a, b));
    }
}

TEST(Constellation, BitsRoundTrip) {
  std::mt19937_64 rng(1);
  std::bernoulli_distribution coin;
  for (auto kind : {ConstellationKind::qam, ConstellationKind::hex}) {
    const Constellation c(kind, 16);
    std::vector<std::uint8_t> bits(40);
    for (auto &b : bits) b = coin(rng);
    const auto sym = bits_to_symbols(bits, c);
    EXPECT_EQ(sym.size(), 10u);
    EXPECT_EQ(symbols_to_bits(sym, c), bits);
  }
  const Constellation c(ConstellationKind::qam, 4);
  const std::vector<std::uint8_t> odd(3, 0);
  EXPECT_THROW(bits_to_symbols(odd, c), std::invalid_argument);
}

TEST(Constellation, DifferenceAlphabet) {
  const auto d4 = Constellation(ConstellationKind::qam, 4).difference_alphabet();
  EXPECT_EQ(d4.size(), 9u);
  EXPECT_EQ(d4.front(), Complex{});
  const Constellation c4(ConstellationKind::qam, 4);
  const auto pts = c4.points();
  std::vector<Complex> diffs;
  for (auto p : pts)
    for (auto r : pts) diffs.push_back(p - r);
  EXPECT_EQ(as_set(diffs), as_set(d4));
  EXPECT_EQ(Constellation(ConstellationKind::hex, 16).difference_alphabet().size(), 49u);
}
