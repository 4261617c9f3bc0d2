#include "ncwl/codec.hpp"

#include <algorithm>
#include <functional>
#include <set>

namespace ncwl::codec {

Rational inverse_power(std::uint64_t base, std::uint64_t e) {
  mpz_class p;
  mpz_ui_pow_ui(p.get_mpz_t(), base, e);
  Rational r(mpz_class(1), p);
  r.canonicalize();
  return r;
}

CodecContext::CodecContext(std::uint64_t base) : base_(base) {
  if (base <= 2) throw CodecError("codec base must exceed 2, got " + std::to_string(base));
}

CodecContext CodecContext::for_max_cardinality(std::uint64_t max_cardinality) {
  return CodecContext(2 * max_cardinality + 3);
}

std::uint64_t CodecContext::z1(ElementId x) {
  auto [it, fresh] = z1_.try_emplace(x, 2 * z1_.size() + 1);
  return it->second;
}

std::uint64_t CodecContext::z2(const Rational &pair_value) {
  auto [it, fresh] = z2_.try_emplace(pair_value, 2 * z2_.size());
  return it->second;
}

void CodecContext::seed_z1(std::span<const ElementId> elements) {
  if (!z1_.empty()) throw CodecError("Z1 already in use; seed before encoding");
  for (auto x : elements) z1(x);
}

Rational encode_multiset(std::uint64_t base, std::span<const std::uint64_t> exponents) {
  if (base < 2) throw CodecError("codec base must be at least 2");
  if (exponents.size() >= base)
    throw CodecError("multiset cardinality " + std::to_string(exponents.size()) +
                     " must be below base " + std::to_string(base));
  Rational sum = 0;
  for (auto e : exponents) sum += inverse_power(base, e);
  sum.canonicalize();
  return sum;
}

std::vector<std::uint64_t> decode_multiset(const Rational &value, std::uint64_t base) {
  if (base < 2) throw CodecError("codec base must be at least 2");
  if (sgn(value) < 0) throw CodecError("cannot decode a negative value");
  // If den | N^e for some e, the smallest such e is at most log2(den).
  const auto max_exp =
      static_cast<std::uint64_t>(mpz_sizeinbase(value.get_den_mpz_t(), 2)) + 1;
  std::vector<std::uint64_t> out;
  Rational rest = value;
  mpz_class scale = 1;  // N^e
  for (std::uint64_t e = 0; sgn(rest) != 0; ++e) {
    if (e > max_exp)
      throw CodecError("value is not a finite base-" + std::to_string(base) + " expansion");
    // (q, r) = rest divmod N^{-e}
    Rational scaled = rest * scale;
    mpz_class q;
    mpz_fdiv_q(q.get_mpz_t(), scaled.get_num_mpz_t(), scaled.get_den_mpz_t());
    if (q > 0) {
      if (!q.fits_ulong_p() || q.get_ui() > (1u << 24))
        throw CodecError("multiplicity too large to decode");
      out.insert(out.end(), q.get_ui(), e);
      Rational taken(q, scale);
      taken.canonicalize();
      rest -= taken;
    }
    scale *= base;
  }
  return out;
}

Rational encode_pairwise(CodecContext &ctx, std::span<const ElementId> xs,
                         std::span<const Pair> ws) {
  if (xs.size() + ws.size() >= ctx.base())
    throw CodecError("|X| + |W| = " + std::to_string(xs.size() + ws.size()) +
                     " must be below base " + std::to_string(ctx.base()));
  Rational sum = 0;
  for (auto x : xs) sum += ctx.f1(x);
  for (const auto &w : ws) sum += ctx.f2(ctx.pair_value(w));
  sum.canonicalize();
  return sum;
}

EpsilonValue encode_centered(CodecContext &ctx, ElementId c,
                             std::span<const ElementId> xs, std::span<const Pair> ws) {
  EpsilonValue v;
  v.b = ctx.f1(c);
  v.a = v.b + encode_pairwise(ctx, xs, ws);
  v.a.canonicalize();
  return v;
}

std::vector<std::vector<std::uint64_t>> enumerate_multisets(std::uint64_t symbols,
                                                            std::uint64_t max_size) {
  std::vector<std::vector<std::uint64_t>> out;
  std::vector<std::uint64_t> cur;
  std::function<void(std::uint64_t)> rec = [&](std::uint64_t lo) {
    out.push_back(cur);
    if (cur.size() == max_size) return;
    for (auto s = lo; s < symbols; ++s) {
      cur.push_back(s);
      rec(s);
      cur.pop_back();
    }
  };
  rec(0);
  return out;
}

InjectivityReport check_injectivity(std::uint64_t alphabet, std::uint64_t max_card,
                                    std::uint64_t base) {
  const std::uint64_t needed = 2 * max_card;
  if (base == 0) base = CodecContext::for_max_cardinality(needed).base();
  if (base <= std::max<std::uint64_t>(needed, 2))
    throw CodecError("base " + std::to_string(base) + " must exceed max(|X|+|W|, 2) = " +
                     std::to_string(std::max<std::uint64_t>(needed, 2)));

  CodecContext ctx(base);
  std::vector<ElementId> symbols(alphabet);
  for (std::uint64_t i = 0; i < alphabet; ++i) symbols[i] = i;
  ctx.seed_z1(symbols);

  std::vector<Pair> pair_universe;
  for (std::uint64_t i = 0; i < alphabet; ++i)
    for (std::uint64_t j = i; j < alphabet; ++j) pair_universe.emplace_back(i, j);

  const auto xsets = enumerate_multisets(alphabet, max_card);
  std::vector<std::vector<Pair>> wsets;
  for (const auto &idx : enumerate_multisets(pair_universe.size(), max_card)) {
    std::vector<Pair> w;
    for (auto i : idx) w.push_back(pair_universe[i]);
    wsets.push_back(std::move(w));
  }

  InjectivityReport rep;
  rep.base = base;
  std::set<Rational> pairwise;
  std::set<EpsilonValue> centered;
  for (const auto &x : xsets) {
    for (const auto &w : wsets) {
      pairwise.insert(encode_pairwise(ctx, x, w));
      ++rep.pairwise_inputs;
      for (auto c : symbols) {
        centered.insert(encode_centered(ctx, c, x, w));
        ++rep.centered_inputs;
      }
    }
  }
  rep.pairwise_distinct = pairwise.size();
  rep.centered_distinct = centered.size();
  return rep;
}

}  // namespace ncwl::codec
