#pragma once

#include <cstdint>
#include <map>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include <gmpxx.h>

namespace ncwl::codec {

/// Exact rational; mpq_class keeps values in canonical reduced form as long
/// as every constructed value is canonicalized, which the helpers below do.
using Rational = mpq_class;

class CodecError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// a + eps * b for a formal irrational eps. Two values are equal exactly
/// when both components are.
struct EpsilonValue {
  Rational a;
  Rational b;

  friend bool operator==(const EpsilonValue &x, const EpsilonValue &y) {
    return x.a == y.a && x.b == y.b;
  }
  friend bool operator<(const EpsilonValue &x, const EpsilonValue &y) {
    return x.a < y.a || (x.a == y.a && x.b < y.b);
  }
};

/// N^{-e}.
Rational inverse_power(std::uint64_t base, std::uint64_t e);

using ElementId = std::uint64_t;
using Pair = std::pair<ElementId, ElementId>;

/// Base N plus the two exponent injections: Z1 sends element ids to odd
/// naturals and Z2 sends pair values f1(w1) + f1(w2) to even naturals, both
/// in first-seen order. Not thread-safe; confine a context to one thread.
class CodecContext {
 public:
  /// Requires base > 2.
  explicit CodecContext(std::uint64_t base);

  /// Context whose base is 2 * max_cardinality + 3, enough for every
  /// (X, W) with |X| + |W| <= max_cardinality.
  static CodecContext for_max_cardinality(std::uint64_t max_cardinality);

  std::uint64_t base() const noexcept { return base_; }

  /// Odd exponent of `x`, assigned on first use.
  std::uint64_t z1(ElementId x);
  /// Even exponent of a pair value, assigned on first use.
  std::uint64_t z2(const Rational &pair_value);

  /// Pins Z1 in the given order (1, 3, 5, ...) so that encodings no longer
  /// depend on the order elements are first seen. Must precede any z1 use.
  void seed_z1(std::span<const ElementId> elements);

  Rational f1(ElementId x) { return inverse_power(base_, z1(x)); }
  Rational f2(const Rational &y) { return inverse_power(base_, z2(y)); }
  Rational pair_value(const Pair &w) { return f1(w.first) + f1(w.second); }

 private:
  std::uint64_t base_;
  std::map<ElementId, std::uint64_t> z1_;
  std::map<Rational, std::uint64_t> z2_;
};

/// sum_{x in X} N^{-x}: elements are already their natural exponents.
/// Throws CodecError when |X| >= N.
Rational encode_multiset(std::uint64_t base, std::span<const std::uint64_t> exponents);

/// Fact-1 decoding by repeated divmod against N^0, N^-1, ...; returns the
/// recovered exponents in ascending order. Throws CodecError when the value
/// is negative or is not a finite base-N expansion.
std::vector<std::uint64_t> decode_multiset(const Rational &value, std::uint64_t base);

/// sum f1(x) + sum f2(f1(w1) + f1(w2)). Throws CodecError when
/// |X| + |W| >= N.
Rational encode_pairwise(CodecContext &ctx, std::span<const ElementId> xs,
                         std::span<const Pair> ws);

/// a = f1(c) + encode_pairwise(X, W), b = f1(c).
EpsilonValue encode_centered(CodecContext &ctx, ElementId c,
                             std::span<const ElementId> xs, std::span<const Pair> ws);

/// Result of the exhaustive injectivity sweep over every (X, W), and every
/// (c, X, W), drawn from an alphabet of `alphabet` symbols.
struct InjectivityReport {
  std::uint64_t base = 0;
  std::size_t pairwise_inputs = 0;
  std::size_t pairwise_distinct = 0;
  std::size_t centered_inputs = 0;
  std::size_t centered_distinct = 0;

  bool ok() const {
    return pairwise_inputs == pairwise_distinct && centered_inputs == centered_distinct;
  }
};

/// Enumerates all multisets X with |X| <= max_card over the alphabet and
/// all multisets W of unordered pairs with |W| <= max_card. `base` = 0
/// picks the default for 2 * max_card. Throws CodecError when an explicit
/// base is too small.
InjectivityReport check_injectivity(std::uint64_t alphabet, std::uint64_t max_card,
                                    std::uint64_t base = 0);

/// All multisets of size <= max_size over [0, symbols), each sorted.
std::vector<std::vector<std::uint64_t>> enumerate_multisets(std::uint64_t symbols,
                                                            std::uint64_t max_size);

}  // namespace ncwl::codec
