#pragma once

// Shared data and helpers for the test programs.

#include <cstdint>
#include <random>
#include <vector>

#include "hbl/hbl.hpp"
#include "oracles.hpp"

namespace fixtures {

using hbl::HblDatum;
using hbl::Rational;
using hbl::RationalMatrix;

inline HblDatum matmul() {
  return HblDatum(3, {RationalMatrix::from_ints({{1, 0, 0}, {0, 1, 0}}),
                      RationalMatrix::from_ints({{1, 0, 0}, {0, 0, 1}}),
                      RationalMatrix::from_ints({{0, 1, 0}, {0, 0, 1}})});
}

inline HblDatum loomis_whitney_2d() {
  return HblDatum(2, {RationalMatrix::from_ints({{1, 0}}), RationalMatrix::from_ints({{0, 1}})});
}

inline HblDatum identity(std::size_t d) { return HblDatum(d, {RationalMatrix::identity(d)}); }

inline std::vector<Rational> q(std::initializer_list<const char*> values) {
  std::vector<Rational> out;
  for (const char* v : values) out.push_back(hbl::parse_rational(v));
  return out;
}

/// Seeded random datum: d in 1..3, m in 1..3, d_j in 1..d, entries in [-2, 2].
inline HblDatum random_datum(std::uint64_t seed, std::uint64_t index) {
  auto rng = hbl::sample_engine(seed, index);
  const auto d = static_cast<std::size_t>(hbl::uniform(rng, 1, 3));
  const auto m = static_cast<std::size_t>(hbl::uniform(rng, 1, 3));
  std::vector<RationalMatrix> maps;
  for (std::size_t j = 0; j < m; ++j) {
    const auto dj = static_cast<std::size_t>(hbl::uniform(rng, 1, static_cast<std::int64_t>(d)));
    RationalMatrix a(dj, d);
    for (std::size_t r = 0; r < dj; ++r)
      for (std::size_t c = 0; c < d; ++c) a(r, c) = hbl::uniform(rng, -2, 2);
    maps.push_back(std::move(a));
  }
  return HblDatum(d, std::move(maps));
}

inline oracle::Mat to_oracle(const RationalMatrix& m) {
  oracle::Mat out(m.rows(), oracle::Vec(m.cols()));
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j) out[i][j] = m(i, j);
  return out;
}

inline std::vector<oracle::Mat> to_oracle(const HblDatum& d) {
  std::vector<oracle::Mat> out;
  for (const auto& m : d.maps()) out.push_back(to_oracle(m));
  return out;
}

inline std::vector<oracle::Vec> points(const std::vector<hbl::Vertex>& vs) {
  std::vector<oracle::Vec> out;
  for (const auto& v : vs) out.push_back(v.point);
  return out;
}

/// Random polynomial system in q variables (per-variable degree <= 2) with
/// a planted rational solution x: each polynomial gets random terms and a
/// constant chosen to vanish at x.  Returns the system and x.
struct Planted {
  hbl::PolySystem system;
  std::vector<Rational> x;
};

inline Planted planted_system(std::uint64_t seed, std::uint64_t index) {
  auto rng = hbl::sample_engine(seed, index);
  Planted p;
  const auto nq = static_cast<std::size_t>(hbl::uniform(rng, 1, 3));
  p.system.q = nq;
  for (std::size_t i = 0; i < nq; ++i)
    p.x.push_back(hbl::make_rational(hbl::uniform(rng, -3, 3), hbl::uniform(rng, 1, 3)));
  const auto npolys = hbl::uniform(rng, 1, 3);
  for (std::int64_t k = 0; k < npolys; ++k) {
    hbl::Polynomial f(nq);
    const auto nterms = hbl::uniform(rng, 1, 3);
    for (std::int64_t t = 0; t < nterms; ++t) {
      hbl::Exponents e(nq);
      bool constant = true;
      for (auto& v : e) {
        v = static_cast<unsigned>(hbl::uniform(rng, 0, 2));
        constant = constant && v == 0;
      }
      if (constant) e[0] = 1;
      f.add_term(e, hbl::make_rational(hbl::uniform(rng, 1, 5) * (hbl::uniform(rng, 0, 1) ? 1 : -1),
                                       hbl::uniform(rng, 1, 3)));
    }
    const Rational value = f.evaluate(p.x);
    f.add_term(hbl::Exponents(nq, 0), -value);
    p.system.polys.push_back(std::move(f));
  }
  if (p.system.polys.empty()) {
    hbl::Polynomial f(nq);
    hbl::Exponents e(nq, 0);
    e[0] = 1;
    f.add_term(e, 1);
    f.add_term(hbl::Exponents(nq, 0), -p.x[0]);
    p.system.polys.push_back(std::move(f));
  }
  return p;
}

}  // namespace fixtures
