#pragma once

// Command-line front end.  run() parses arguments, reads JSON inputs from
// files (or standard input for "-"), and writes one JSON document to `out`.
// Exit codes: 0 success/true, 1 false/refuted, 2 usage or input error,
// 3 budget exhausted.

#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "hbl/decision.hpp"
#include "hbl/diophantine.hpp"
#include "hbl/enumerate.hpp"
#include "hbl/errors.hpp"
#include "hbl/io.hpp"
#include "hbl/oracle.hpp"
#include "hbl/polytope.hpp"

namespace hbl::cli {

inline constexpr const char* kVersion = "hbl 0.1.0";
inline constexpr std::uint64_t kDefaultSeed = 20240607;

enum Exit : int { ok = 0, negative = 1, usage = 2, budget = 3 };

namespace detail {

struct Context {
  std::istream& in;
  std::ostream& out;
};

inline io::Json read_json(Context& ctx, const std::string& path) {
  if (path == "-") return io::parse_json(ctx.in, "<stdin>");
  std::ifstream file(path);
  if (!file) throw ParseError("cannot open " + path);
  return io::parse_json(file, path);
}

inline void emit(Context& ctx, const io::Json& j) { ctx.out << j.dump() << '\n'; }

inline std::uint64_t parse_seed(const std::string& text) {
  if (text == "random") return std::random_device{}() * 0x100000001ULL ^ std::random_device{}();
  try {
    std::size_t used = 0;
    const auto v = std::stoull(text, &used);
    if (used == text.size()) return v;
  } catch (const std::exception&) {
  }
  throw ParseError("--seed: expected a nonnegative integer or \"random\", got \"" + text + "\"");
}

}  // namespace detail

/// Runs one command.  `args` excludes the program name.
inline int run(const std::vector<std::string>& args, std::istream& in, std::ostream& out, std::ostream& err) {
  CLI::App app{"Exact Holder-Brascamp-Lieb exponent polytopes", "hbl"};
  app.set_version_flag("--version", kVersion);
  app.require_subcommand(1);
  detail::Context ctx{in, out};

  std::string datum_path, s_text, witness_path, system_path, encoding_path, weights_text, a_text,
      solution_text, seed_text = std::to_string(kDefaultSeed);
  std::size_t budget_steps = 10000, samples = 500, max_size = 100, max_n = 32, dim = 0, count = 0, t = 0,
              height = 0;
  std::optional<std::size_t> oracle_height;
  std::int64_t box = 10;
  double tol = 1e-9;
  bool with_trace = false;

  auto datum_opt = [&](CLI::App* c) { c->add_option("--datum", datum_path, "datum JSON file, - for stdin")->required(); };
  auto s_opt = [&](CLI::App* c) { c->add_option("--s", s_text, "exponents, e.g. 1/2,1/2,1/2")->required(); };

  auto* polytope = app.add_subcommand("polytope", "compute the exponent polytope");
  datum_opt(polytope);
  polytope->add_option("--budget", budget_steps, "maximum number of subspaces per computation");
  polytope->add_option("--oracle-height", oracle_height, "cross-check against all subspaces of this height");

  auto* member = app.add_subcommand("member", "decide membership of an exponent tuple");
  datum_opt(member);
  s_opt(member);
  member->add_option("--budget", budget_steps, "maximum number of subspaces per computation");
  member->add_flag("--trace", with_trace, "include the membership trace");

  auto* shbl = app.add_subcommand("shbl", "minimize a linear functional over the polytope");
  datum_opt(shbl);
  shbl->add_option("--weights", weights_text, "weights (default all ones)");
  shbl->add_option("--budget", budget_steps, "maximum number of subspaces per computation");

  auto* verify_sets = app.add_subcommand("verify-sets", "sample the set-form inequality");
  datum_opt(verify_sets);
  s_opt(verify_sets);
  verify_sets->add_option("--samples", samples, "number of random point sets");
  verify_sets->add_option("--seed", seed_text, "integer seed or \"random\"");
  verify_sets->add_option("--box", box, "coordinates lie in [-box, box]");
  verify_sets->add_option("--max-size", max_size, "maximum point set size");

  auto* verify_functions = app.add_subcommand("verify-functions", "sample the function-form inequality");
  datum_opt(verify_functions);
  s_opt(verify_functions);
  verify_functions->add_option("--samples", samples, "number of random table tuples");
  verify_functions->add_option("--seed", seed_text, "integer seed or \"random\"");
  verify_functions->add_option("--tol", tol, "relative tolerance");

  auto* counterexample = app.add_subcommand("counterexample", "build a violating point set");
  datum_opt(counterexample);
  s_opt(counterexample);
  counterexample->add_option("--witness", witness_path, "supercritical subspace JSON (searched for when absent)");
  counterexample->add_option("--max-n", max_n, "largest N tried");
  counterexample->add_option("--budget", budget_steps, "subspaces searched for a witness");

  auto* enum_subspaces = app.add_subcommand("enum-subspaces", "list the first n enumerated subspaces");
  enum_subspaces->add_option("--d", dim, "ambient dimension")->required();
  enum_subspaces->add_option("--n", count, "number of subspaces")->required();

  auto* dioph_encode = app.add_subcommand("dioph-encode", "encode a polynomial system query");
  dioph_encode->add_option("--system", system_path, "polynomial system JSON")->required();
  dioph_encode->add_option("--t", t, "number of queried variables")->required();
  dioph_encode->add_option("--a", a_text, "queried values");
  dioph_encode->add_option("--solution", solution_text, "a full solution x; adds its witness");

  auto* dioph_verify = app.add_subcommand("dioph-verify", "check a witness for an encoding");
  dioph_verify->add_option("--encoding", encoding_path, "encoding JSON")->required();
  dioph_verify->add_option("--witness", witness_path, "subspace JSON")->required();

  auto* dioph_extract = app.add_subcommand("dioph-extract", "recover a solution from a witness");
  dioph_extract->add_option("--encoding", encoding_path, "encoding JSON")->required();
  dioph_extract->add_option("--witness", witness_path, "subspace JSON")->required();

  auto* dioph_search = app.add_subcommand("dioph-search", "search witnesses of bounded height");
  dioph_search->add_option("--encoding", encoding_path, "encoding JSON")->required();
  dioph_search->add_option("--height", height, "entry bound")->required();

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? Exit::ok : Exit::usage;
  }

  try {
    if (polytope->parsed()) {
      const HblDatum d = io::datum_from_json(detail::read_json(ctx, datum_path));
      const PolytopeResult r = compute_polytope(d, budget_steps);
      io::Json j = io::to_json(r);
      if (oracle_height) {
        const Polytope oracle = brute_force_constraints(d, *oracle_height);
        bool contained = true;
        for (const auto& v : r.vertices) contained = contained && oracle.satisfies_inequalities(v.point);
        const auto oracle_vertices = extreme_points(oracle);
        bool same = oracle_vertices.size() == r.vertices.size();
        for (std::size_t i = 0; same && i < oracle_vertices.size(); ++i)
          same = oracle_vertices[i].point == r.vertices[i].point;
        j["oracle"] = {{"height", *oracle_height},
                       {"contained", contained},
                       {"agrees", same},
                       {"vertices", io::vertices_to_json(oracle_vertices)}};
      }
      detail::emit(ctx, j);
      return Exit::ok;
    }
    if (member->parsed()) {
      const HblDatum d = io::datum_from_json(detail::read_json(ctx, datum_path));
      const auto s = parse_rational_list(s_text);
      Decider decider({budget_steps, false});
      const Membership m = decider.is_member(d, s);
      io::Json j{{"member", m.member}};
      if (with_trace) j["trace"] = io::to_json(m.trace);
      detail::emit(ctx, j);
      return m.member ? Exit::ok : Exit::negative;
    }
    if (shbl->parsed()) {
      const HblDatum d = io::datum_from_json(detail::read_json(ctx, datum_path));
      std::vector<Rational> w(d.num_maps(), Rational(1));
      if (!weights_text.empty()) w = parse_rational_list(weights_text);
      const PolytopeResult r = compute_polytope(d, budget_steps);
      if (r.vertices.empty()) {
        detail::emit(ctx, io::Json{{"value", nullptr}, {"argmin", nullptr}});
        return Exit::negative;
      }
      const LinearMinimum best = minimize_linear(r.polytope, w);
      detail::emit(ctx, io::Json{{"value", io::to_json(best.value)}, {"argmin", io::to_json(best.argmin.point)}});
      return Exit::ok;
    }
    if (verify_sets->parsed()) {
      const HblDatum d = io::datum_from_json(detail::read_json(ctx, datum_path));
      const auto s = parse_rational_list(s_text);
      const auto report = verify_sets_batch(d, s, samples, detail::parse_seed(seed_text), box, max_size);
      detail::emit(ctx, io::to_json(report));
      return report.violations.empty() ? Exit::ok : Exit::negative;
    }
    if (verify_functions->parsed()) {
      const HblDatum d = io::datum_from_json(detail::read_json(ctx, datum_path));
      const auto s = parse_rational_list(s_text);
      const auto report = verify_functions_batch(d, s, samples, detail::parse_seed(seed_text), tol);
      detail::emit(ctx, io::to_json(report));
      return report.violations.empty() ? Exit::ok : Exit::negative;
    }
    if (counterexample->parsed()) {
      const HblDatum d = io::datum_from_json(detail::read_json(ctx, datum_path));
      const auto s = parse_rational_list(s_text);
      require_unit_exponents(s, d.num_maps());
      std::optional<Subspace> h;
      if (!witness_path.empty()) {
        h = io::subspace_from_json(detail::read_json(ctx, witness_path));
      } else {
        h = find_supercritical(d, s, budget_steps);
        if (!h) {
          detail::emit(ctx, io::Json{{"found", false}, {"witness", nullptr}});
          return Exit::negative;
        }
      }
      const auto found = find_counterexample(d, s, *h, max_n);
      io::Json j{{"found", found.has_value()}, {"witness", io::to_json(*h)}};
      if (found) {
        j["n"] = found->n;
        j["size"] = found->points.size();
        j["lhs_pow"] = io::to_json(found->check.lhs_pow);
        j["rhs_pow"] = io::to_json(found->check.rhs_pow);
        j["points"] = io::to_json(found->points);
      }
      detail::emit(ctx, j);
      return found ? Exit::ok : Exit::negative;
    }
    if (enum_subspaces->parsed()) {
      io::Json list = io::Json::array();
      for (const auto& w : enumerate_subspaces(dim, count)) list.push_back(io::to_json(w));
      detail::emit(ctx, list);
      return Exit::ok;
    }
    if (dioph_encode->parsed()) {
      const PolySystem s = io::poly_system_from_json(detail::read_json(ctx, system_path));
      const auto a = a_text.empty() ? std::vector<Rational>{} : parse_rational_list(a_text);
      const BasicSystem b = to_basic_set(s);
      const DiophEncoding e = encode(b, t, a);
      io::Json j = io::to_json(e);
      if (!solution_text.empty()) {
        const auto x = parse_rational_list(solution_text);
        j["witness"] = io::to_json(witness_from_solution(b, lift_solution(b, x)));
      }
      detail::emit(ctx, j);
      return Exit::ok;
    }
    if (dioph_verify->parsed() || dioph_extract->parsed()) {
      const DiophEncoding e = io::encoding_from_json(detail::read_json(ctx, encoding_path));
      const Subspace w = io::subspace_from_json(detail::read_json(ctx, witness_path));
      const bool valid = verify_witness(e, w);
      if (dioph_verify->parsed() || !valid) {
        detail::emit(ctx, io::Json{{"valid", valid}});
        return valid ? Exit::ok : Exit::negative;
      }
      const Extraction x = extract_solution(e, w);
      detail::emit(ctx, io::Json{{"valid", true}, {"a", io::to_json(x.a)}, {"solution", io::to_json(x.full)}});
      return Exit::ok;
    }
    if (dioph_search->parsed()) {
      const DiophEncoding e = io::encoding_from_json(detail::read_json(ctx, encoding_path));
      const auto w = bounded_witness_search(e, height);
      detail::emit(ctx, io::Json{{"found", w.has_value()}, {"witness", w ? io::to_json(*w) : io::Json(nullptr)}});
      return w ? Exit::ok : Exit::negative;
    }
  } catch (const BudgetExhausted& e) {
    err << "error: " << e.what() << '\n';
    detail::emit(ctx, io::Json{{"error", "budget exhausted"},
                               {"steps", e.steps()},
                               {"outer", io::to_json(e.outer())}});
    return Exit::budget;
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return Exit::usage;
  } catch (const io::Json::exception& e) {
    err << "error: malformed JSON input: " << e.what() << '\n';
    return Exit::usage;
  }
  return Exit::usage;
}

}  // namespace hbl::cli
