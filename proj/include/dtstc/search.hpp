#pragma once

// Enumeration of nonzero difference-symbol vectors shared by the algebraic
// certification routines. Small spaces are swept exhaustively; large ones get
// every weight-1 and weight-2 vector followed by uniform random samples.
//
// Work is cut into fixed-size chunks whose contents depend only on the chunk
// index and the seed, and chunk results are merged in index order, so the
// outcome does not depend on the number of worker threads.

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdint>
#include <optional>
#include <random>
#include <span>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

#include "linalg.hpp"

namespace dtstc {

struct SearchPolicy {
  std::uint64_t samples = 1'000'000;
  std::uint64_t exhaustive_limit = 10'000'000;
  std::uint64_t seed = 1;
  unsigned threads = 1;
};

enum class SearchKind { exhaustive, sampled };

struct SearchSummary {
  SearchKind kind = SearchKind::exhaustive;
  std::uint64_t tested = 0;

  std::string describe() const {
    return (kind == SearchKind::exhaustive ? "exhaustive(" : "sampled(") + std::to_string(tested) + ")";
  }
};

/// Runs fn(i) for i in [0, n) on up to `threads` workers; each index is
/// processed exactly once.
template <typename Fn>
void parallel_for_index(std::size_t n, unsigned threads, Fn &&fn) {
  threads = std::max(1u, std::min<unsigned>(threads, static_cast<unsigned>(std::max<std::size_t>(n, 1))));
  if (threads == 1) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::jthread> pool;
  pool.reserve(threads);
  for (unsigned t = 0; t < threads; ++t)
    pool.emplace_back([&] {
      for (std::size_t i = next++; i < n; i = next++) fn(i);
    });
}

class DifferenceSpace {
 public:
  static constexpr std::uint64_t kChunk = 4096;

  DifferenceSpace(std::size_t length, std::span<const Complex> alphabet, const SearchPolicy &policy)
      : length_(length), policy_(policy) {
    // Alphabet order: zero (if present) first, then the nonzero values as given.
    nonzero_.reserve(alphabet.size());
    for (const auto &a : alphabet)
      if (a != Complex{}) nonzero_.push_back(a);
    full_.push_back(Complex{});
    full_.insert(full_.end(), nonzero_.begin(), nonzero_.end());
    if (nonzero_.empty() || length_ == 0) {
      total_ = 0;
      return;
    }
    const double space = std::pow(static_cast<double>(full_.size()), static_cast<double>(length_));
    if (space <= static_cast<double>(policy_.exhaustive_limit)) {
      kind_ = SearchKind::exhaustive;
      total_ = static_cast<std::uint64_t>(std::llround(space)) - 1;
    } else {
      kind_ = SearchKind::sampled;
      const std::uint64_t a = nonzero_.size();
      weight1_ = length_ * a;
      weight2_ = static_cast<std::uint64_t>(length_) * (length_ - 1) / 2 * a * a;
      total_ = weight1_ + weight2_ + policy_.samples;
    }
  }

  SearchKind kind() const noexcept { return kind_; }
  std::uint64_t size() const noexcept { return total_; }
  std::size_t length() const noexcept { return length_; }
  std::uint64_t chunks() const noexcept { return (total_ + kChunk - 1) / kChunk; }

  /// Visits every vector of chunk `c` as visit(index, vector).
  template <typename Visit>
  void visit_chunk(std::uint64_t c, Visit &&visit) const {
    const std::uint64_t begin = c * kChunk;
    const std::uint64_t end = std::min(total_, begin + kChunk);
    std::vector<Complex> v(length_);
    std::optional<std::mt19937_64> rng;
    for (std::uint64_t idx = begin; idx < end; ++idx) {
      if (kind_ == SearchKind::exhaustive) {
        decode_mixed_radix(idx + 1, v);
      } else if (idx < weight1_) {
        std::fill(v.begin(), v.end(), Complex{});
        v[idx / nonzero_.size()] = nonzero_[idx % nonzero_.size()];
      } else if (idx < weight1_ + weight2_) {
        decode_weight2(idx - weight1_, v);
      } else {
        if (!rng) {
          std::seed_seq seq{static_cast<std::uint32_t>(policy_.seed), static_cast<std::uint32_t>(policy_.seed >> 32),
                            static_cast<std::uint32_t>(c), static_cast<std::uint32_t>(c >> 32)};
          rng.emplace(seq);
        }
        draw_nonzero(*rng, v);
      }
      visit(idx, std::span<const Complex>(v));
    }
  }

 private:
  void decode_mixed_radix(std::uint64_t idx, std::vector<Complex> &v) const {
    const std::uint64_t base = full_.size();
    for (std::size_t p = length_; p-- > 0;) {
      v[p] = full_[idx % base];
      idx /= base;
    }
  }

  void decode_weight2(std::uint64_t idx, std::vector<Complex> &v) const {
    const std::uint64_t a = nonzero_.size();
    const std::uint64_t pair = idx / (a * a);
    const std::uint64_t vals = idx % (a * a);
    std::fill(v.begin(), v.end(), Complex{});
    // Unrank the position pair (p < q) in lexicographic order.
    std::uint64_t p = 0, remaining = pair;
    while (remaining >= length_ - 1 - p) {
      remaining -= length_ - 1 - p;
      ++p;
    }
    const std::uint64_t q = p + 1 + remaining;
    v[p] = nonzero_[vals / a];
    v[q] = nonzero_[vals % a];
  }

  template <typename Rng>
  void draw_nonzero(Rng &rng, std::vector<Complex> &v) const {
    std::uniform_int_distribution<std::size_t> pick(0, full_.size() - 1);
    for (;;) {
      bool any = false;
      for (auto &x : v) {
        x = full_[pick(rng)];
        any = any || x != Complex{};
      }
      if (any) return;
    }
  }

  std::size_t length_;
  SearchPolicy policy_;
  std::vector<Complex> nonzero_;
  std::vector<Complex> full_;
  SearchKind kind_ = SearchKind::exhaustive;
  std::uint64_t total_ = 0;
  std::uint64_t weight1_ = 0;
  std::uint64_t weight2_ = 0;
};

/// Folds visit(acc, index, vector) over the space, one accumulator per chunk,
/// then merges chunk accumulators in chunk order with merge(into, from).
template <typename Acc, typename Visit, typename Merge>
Acc sweep(const DifferenceSpace &space, const Acc &init, unsigned threads, Visit &&visit, Merge &&merge) {
  const auto n = static_cast<std::size_t>(space.chunks());
  std::vector<Acc> partial(n, init);
  parallel_for_index(n, threads, [&](std::size_t c) {
    Acc &acc = partial[c];
    space.visit_chunk(c, [&](std::uint64_t idx, std::span<const Complex> v) { visit(acc, idx, v); });
  });
  Acc out = init;
  for (auto &p : partial) merge(out, p);
  return out;
}

/// Checks that an alphabet contains zero and is closed under negation.
inline void require_symmetric_alphabet(std::span<const Complex> alphabet) {
  auto contains = [&](Complex z) {
    return std::any_of(alphabet.begin(), alphabet.end(), [&](Complex a) { return std::abs(a - z) < 1e-12; });
  };
  if (!contains(Complex{})) throw std::invalid_argument("difference alphabet must contain 0");
  for (const auto &a : alphabet)
    if (!contains(-a)) throw std::invalid_argument("difference alphabet must be closed under negation");
}

}  // namespace dtstc
