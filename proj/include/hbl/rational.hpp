#pragma once

#include <gmpxx.h>

#include <cstddef>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "hbl/errors.hpp"

namespace hbl {

/// Arbitrary precision integer.
using Integer = mpz_class;

/// Exact rational with canonical representation: positive denominator,
/// numerator and denominator coprime, zero stored as 0/1.  Every value
/// produced by this library is canonical; values built by hand from a
/// numerator/denominator pair must go through make_rational().
using Rational = mpq_class;

inline Rational make_rational(const Integer& num, const Integer& den) {
  if (den == 0) throw PreconditionError("rational with zero denominator");
  Rational r(num, den);
  r.canonicalize();
  return r;
}

inline Rational make_rational(long num, long den = 1) {
  return make_rational(Integer(num), Integer(den));
}

/// "p/q", or "p" when q = 1; the sign is carried by the numerator.
inline std::string to_string(const Rational& r) { return r.get_str(); }

inline std::string to_string(const Integer& z) { return z.get_str(); }

namespace detail {

inline bool is_digit(char c) { return c >= '0' && c <= '9'; }

inline std::string parse_context(std::string_view text, std::size_t offset) {
  return "at position " + std::to_string(offset) + " in \"" + std::string(text) + "\"";
}

}  // namespace detail

/// Parses "p", "-p", "+p", or "p/q" (q > 0).  `offset` shifts reported
/// positions so list parsers can report absolute columns.
inline Rational parse_rational(std::string_view text, std::size_t offset = 0,
                               std::string_view whole = {}) {
  const std::string_view ctx = whole.empty() ? text : whole;
  std::size_t i = 0;
  while (i < text.size() && text[i] == ' ') ++i;
  std::size_t end = text.size();
  while (end > i && text[end - 1] == ' ') --end;
  if (i == end) throw ParseError("empty rational " + detail::parse_context(ctx, offset + i));

  std::string num;
  if (text[i] == '-' || text[i] == '+') {
    if (text[i] == '-') num.push_back('-');
    ++i;
  }
  const std::size_t digits_begin = i;
  while (i < end && detail::is_digit(text[i])) num.push_back(text[i++]);
  if (i == digits_begin) {
    throw ParseError("expected digit " + detail::parse_context(ctx, offset + i));
  }
  std::string den = "1";
  std::size_t den_begin = i;
  if (i < end) {
    if (text[i] != '/') {
      throw ParseError(std::string("unexpected character '") + text[i] + "' " +
                       detail::parse_context(ctx, offset + i));
    }
    ++i;
    den_begin = i;
    den.clear();
    while (i < end && detail::is_digit(text[i])) den.push_back(text[i++]);
    if (i == den_begin) {
      throw ParseError("expected denominator digit " + detail::parse_context(ctx, offset + i));
    }
    if (i < end) {
      throw ParseError(std::string("unexpected character '") + text[i] + "' " +
                       detail::parse_context(ctx, offset + i));
    }
  }
  const Integer d(den);
  if (d == 0) {
    throw ParseError("zero denominator " + detail::parse_context(ctx, offset + den_begin));
  }
  return make_rational(Integer(num), d);
}

/// Parses a comma separated list such as "1/2,1/2,1/4".
inline std::vector<Rational> parse_rational_list(std::string_view text) {
  std::vector<Rational> out;
  std::size_t start = 0;
  while (true) {
    const std::size_t comma = text.find(',', start);
    const std::size_t stop = comma == std::string_view::npos ? text.size() : comma;
    out.push_back(parse_rational(text.substr(start, stop - start), start, text));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return out;
}

inline std::string to_string(std::span<const Rational> values) {
  std::string out;
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (i) out += ',';
    out += to_string(values[i]);
  }
  return out;
}

inline bool is_integer(const Rational& r) { return r.get_den() == 1; }

inline Integer lcm(const Integer& a, const Integer& b) {
  Integer out;
  mpz_lcm(out.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
  return out;
}

inline Integer gcd(const Integer& a, const Integer& b) {
  Integer out;
  mpz_gcd(out.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
  return out;
}

/// Least common multiple of the denominators.
inline Integer common_denominator(std::span<const Rational> values) {
  Integer l = 1;
  for (const auto& v : values) l = lcm(l, v.get_den());
  return l;
}

inline Integer pow(const Integer& base, unsigned long exponent) {
  Integer out;
  mpz_pow_ui(out.get_mpz_t(), base.get_mpz_t(), exponent);
  return out;
}

/// Lexicographic comparison of equally long rational sequences.
inline bool lex_less(std::span<const Rational> a, std::span<const Rational> b) {
  const std::size_t n = a.size() < b.size() ? a.size() : b.size();
  for (std::size_t i = 0; i < n; ++i) {
    const int c = cmp(a[i], b[i]);
    if (c != 0) return c < 0;
  }
  return a.size() < b.size();
}

}  // namespace hbl
