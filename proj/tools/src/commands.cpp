#include "torfol_cli/commands.hpp"

#include <algorithm>
#include <fstream>
#include <iomanip>
#include <ostream>
#include <random>
#include <set>
#include <sstream>

#include "CLI11.hpp"
#include "torfol/error.hpp"
#include "torfol/fan.hpp"
#include "torfol/foliation.hpp"
#include "torfol/linalg.hpp"
#include "torfol/mori.hpp"
#include "torfol/singclass.hpp"
#include "torfol/verify.hpp"
#include "torfol_cli/io.hpp"

namespace torfol_cli {

using torfol::dot;
using torfol::Error;
using torfol::FanData;
using torfol::FoliationDatum;
using torfol::Int;
using torfol::IntVector;
using torfol::Rat;
using torfol::RatVector;
using torfol::TorusDivisor;
using torfol::Wall;

namespace {

// ---------------------------------------------------------------------------
// formatting helpers

std::string cone_string(const std::vector<size_t>& cone) {
  std::string out = "{";
  for (size_t i = 0; i < cone.size(); ++i) {
    if (i) out += ' ';
    out += std::to_string(cone[i]);
  }
  return out + "}";
}

std::string ivec_string(const IntVector& v) {
  std::string out;
  for (size_t i = 0; i < v.size(); ++i) {
    if (i) out += ' ';
    out += v[i].get_str();
  }
  return out;
}

std::string rvec_string(const RatVector& v) {
  std::string out;
  for (size_t i = 0; i < v.size(); ++i) {
    if (i) out += ' ';
    out += v[i].get_str();
  }
  return out;
}

std::string divisor_string(const TorusDivisor& d) {
  std::string out;
  for (size_t i = 0; i < d.coeffs.size(); ++i) {
    const Rat& c = d.coeffs[i];
    if (c == 0) continue;
    const bool neg = c < 0;
    out += out.empty() ? (neg ? "-" : "") : (neg ? " - " : " + ");
    const Rat mag = neg ? Rat(-c) : c;
    if (mag != 1) out += mag.get_str() + " ";
    out += "D" + std::to_string(i);
  }
  return out.empty() ? "0" : out;
}

std::string contraction_name(torfol::ContractionType t) {
  switch (t) {
    case torfol::ContractionType::fibre:
      return "fibre";
    case torfol::ContractionType::divisorial:
      return "divisorial";
    case torfol::ContractionType::small:
      return "small";
  }
  return "?";
}

// ---------------------------------------------------------------------------
// plumbing

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("FileError", "cannot read '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("FileError", "cannot write '" + path + "'");
  out << text;
}

int exit_for(const std::string& code) {
  if (code == "FlipCapExceeded") return 3;
  if (code == "Internal" || code == "DicriticalityNotPreserved") return 4;
  if (code == "RequiresComplete" || code == "RequiresCanonical" ||
      code == "NotSimplicial" || code == "SmoothChartOnly" ||
      code == "ConeHasLineality" || code == "Unbounded")
    return 2;
  return 1;
}

std::vector<size_t> parse_index_list(const std::string& text) {
  std::vector<size_t> out;
  std::string tok;
  std::istringstream in(text);
  while (std::getline(in, tok, ',')) {
    if (tok.empty() || tok.find_first_not_of("0123456789") != std::string::npos)
      throw Error("ParseError", "bad ray index list '" + text + "'");
    out.push_back(static_cast<size_t>(std::stoull(tok)));
  }
  if (out.empty()) throw Error("ParseError", "empty ray index list");
  std::sort(out.begin(), out.end());
  return out;
}

// ---------------------------------------------------------------------------
// subcommands

void print_classification(std::ostream& out,
                          const torfol::SingularityReport& rep) {
  out << "classification: " << torfol::verdict_name(rep.verdict) << '\n';
  for (const auto& cr : rep.per_cone) {
    out << "  cone " << cone_string(cr.cone) << ": "
        << torfol::verdict_name(cr.verdict);
    if (cr.witness)
      out << " (point " << ivec_string(cr.witness->point) << ", discrepancy "
          << cr.witness->disc.get_str() << ")";
    out << '\n';
  }
  if (rep.witness)
    out << "witness: cone " << cone_string(rep.witness->cone) << " point "
        << ivec_string(rep.witness->point) << " discrepancy "
        << rep.witness->disc.get_str() << '\n';
}

int cmd_analyze(const FanData& f, const FoliationDatum& v, std::ostream& out) {
  out << "lattice rank " << f.rank << ", " << f.rays.size() << " rays, "
      << f.max_cones.size() << " maximal cones\n";
  out << "foliation dimension " << v.rank() << '\n';

  const TorusDivisor direct = canonical_divisor(f, v);
  const TorusDivisor via_filtration = [&] {
    TorusDivisor d = c1_from_filtration(f, foliation_filtration(f, v));
    for (auto& c : d.coeffs) c = -c;
    return d;
  }();
  const TorusDivisor via_conormal = canonical_divisor_via_conormal(f, v);
  out << "K_F (ray membership)  = " << divisor_string(direct) << '\n';
  out << "K_F (filtration sum)  = " << divisor_string(via_filtration) << '\n';
  out << "K_F (conormal route)  = " << divisor_string(via_conormal) << '\n';
  out << "K_X                   = "
      << divisor_string(canonical_divisor_ambient(f)) << '\n';

  out << "filtration jumps:\n";
  const auto fil = foliation_filtration(f, v);
  for (size_t i = 0; i < fil.per_ray.size(); ++i) {
    out << "  ray " << i << " (" << ivec_string(f.rays[i]) << "):";
    for (const auto& j : fil.per_ray[i])
      out << " level " << j.level << " dim " << j.space.size() << ";";
    out << '\n';
  }

  const auto sing = singular_locus(f, v);
  if (sing.cones.empty()) {
    out << "singular locus: empty\n";
  } else {
    out << "singular locus: " << sing.cones.size() << " cones\n";
    for (const auto& c : sing.cones) out << "  " << cone_string(c) << '\n';
    out << "minimal singular cones:\n";
    for (const auto& c : sing.minimal) out << "  " << cone_string(c) << '\n';
  }

  const auto dic = is_dicritical(f, v);
  if (dic.dicritical)
    out << "dicritical: yes (cone " << cone_string(dic.witness->cone)
        << ", ray " << ivec_string(dic.witness->ray) << ")\n";
  else
    out << "dicritical: no\n";

  print_classification(out, classify(f, v));
  return 0;
}

int cmd_classify(const FanData& f, const FoliationDatum& v,
                 std::ostream& out) {
  const auto rep = classify(f, v);
  print_classification(out, rep);
  switch (rep.verdict) {
    case torfol::Verdict::terminal:
      return 0;
    case torfol::Verdict::canonical_not_terminal:
      return 10;
    case torfol::Verdict::not_canonical:
      return 20;
  }
  return 4;
}

int cmd_extremal(const FanData& f, const FoliationDatum& v,
                 std::ostream& out) {
  const auto rays = extremal_rays(f);
  const TorusDivisor kf = canonical_divisor(f, v);
  out << rays.size() << " extremal classes\n";
  for (const auto& r : rays) {
    out << "class " << ivec_string(r.cls)
        << "  K_F.C = " << dot(kf.coeffs, torfol::to_rat(r.cls)).get_str()
        << '\n';
    for (const auto& w : r.walls)
      out << "  wall " << cone_string(w.ray_indices) << ": "
          << (curve_tangent(f, v, w) ? "tangent" : "not tangent") << '\n';
  }
  return 0;
}

int cmd_mmp(const FanData& f, const FoliationDatum& v,
            const torfol::MmpOptions& options, const std::string& trace_path,
            std::ostream& out) {
  const auto t = run_mmp(f, v, options);
  out << "input verdict: " << torfol::verdict_name(t.input_verdict)
      << (t.noncanonical_override ? " (override in effect)" : "") << '\n';
  for (size_t i = 0; i < t.steps.size(); ++i) {
    const auto& s = t.steps[i];
    out << "step " << i << ": " << contraction_name(s.type) << ", wall "
        << cone_string(s.chosen.walls.front().ray_indices) << ", class "
        << ivec_string(s.chosen.cls) << ", K_F.C = " << s.kf.get_str() << '\n';
  }
  out << "outcome: "
      << (t.outcome == torfol::MmpOutcome::nef ? "nef" : "fibration") << '\n';
  out << "final fan: " << t.final_fan.rays.size() << " rays, "
      << t.final_fan.max_cones.size() << " cones\n";
  if (t.pullback) {
    const auto& p = *t.pullback;
    if (p.quotient.is_fan)
      out << "quotient is a fan: yes (" << p.quotient.fan.rays.size()
          << " rays, " << p.quotient.fan.max_cones.size() << " cones)\n";
    else
      out << "quotient is a fan: no (" << p.quotient.violations.size()
          << " violations)\n";
    if (p.induced)
      out << "induced foliation: dimension " << p.induced->rank() << '\n';
    else
      out << "induced foliation: none (pure fibration)\n";
  }
  if (!trace_path.empty()) write_file(trace_path, serialize_trace(t));
  return 0;
}

int cmd_flip_wall(const FanData& f, const FoliationDatum& v,
                  const std::vector<size_t>& wall_rays, std::ostream& out) {
  const auto all = walls(f);
  const Wall* w = nullptr;
  for (const auto& cand : all)
    if (cand.ray_indices == wall_rays) w = &cand;
  if (!w)
    throw Error("UnknownWall", "no wall " + cone_string(wall_rays) +
                                   " in the fan");
  const auto rel = wall_relation(f, *w);
  out << "wall " << cone_string(w->ray_indices) << '\n';
  out << "relation: rays";
  for (size_t j : rel.rays) out << ' ' << j;
  out << ", coefficients " << rvec_string(rel.a) << '\n';
  const auto cc = curve_class(f, *w);
  out << "class: " << ivec_string(torfol::primitive_part(cc.dot)) << '\n';
  out << "K_F.C before = " << kf_dot(f, v, *w).get_str() << '\n';
  const auto dic_before = is_dicritical(f, v);

  torfol::ExtremalRay ray{torfol::primitive_part(cc.dot), {*w}};
  const FanData g = flip(f, ray);
  out << "cones after flip:";
  for (const auto& c : g.max_cones) out << ' ' << cone_string(c);
  out << '\n';

  if (rel.alpha.size() == 2) {
    std::vector<size_t> opposite;
    for (size_t i = 0; i < rel.rays.size(); ++i)
      if (std::find(rel.alpha.begin(), rel.alpha.end(), i) == rel.alpha.end())
        opposite.push_back(rel.rays[i]);
    std::sort(opposite.begin(), opposite.end());
    for (const auto& cand : walls(g))
      if (cand.ray_indices == opposite && cand.interior()) {
        out << "K_F.C after (wall " << cone_string(opposite)
            << ") = " << kf_dot(g, v, cand).get_str() << '\n';
        break;
      }
  }

  const auto dic_after = is_dicritical(g, v);
  out << "dicritical before: " << (dic_before.dicritical ? "yes" : "no")
      << '\n';
  out << "dicritical after: " << (dic_after.dicritical ? "yes" : "no") << '\n';
  out << "singular cones after: " << singular_locus(g, v).cones.size() << '\n';
  return 0;
}

// Cross-checks every formula the library computes on this input against an
// independent recomputation; one report line per check.
int cmd_verify(const FanData& f, const FoliationDatum& v, std::ostream& out) {
  bool all_ok = true;
  const auto report = [&](bool ok, const std::string& what) {
    all_ok = all_ok && ok;
    out << (ok ? "ok   " : "FAIL ") << what << '\n';
  };

  // Route agreement for the canonical divisor.
  const TorusDivisor direct = canonical_divisor(f, v);
  TorusDivisor via_filtration =
      c1_from_filtration(f, foliation_filtration(f, v));
  for (auto& c : via_filtration.coeffs) c = -c;
  report(direct == via_filtration &&
             direct == canonical_divisor_via_conormal(f, v),
         "canonical divisor routes agree");

  // Support functions certify both canonical divisors.
  {
    bool ok = true;
    for (const TorusDivisor& d : {direct, canonical_divisor_ambient(f)}) {
      const auto psi = support_function(f, d);
      for (size_t ci = 0; ci < f.max_cones.size(); ++ci)
        for (size_t ri : f.max_cones[ci])
          ok = ok && psi(ci, torfol::to_rat(f.rays[ri])) == -d.coeffs[ri];
    }
    report(ok, "support functions reproduce divisor coefficients");
  }

  // Discrepancies against the subdivision recomputation, on a small grid of
  // primitive candidates inside each maximal cone.
  {
    bool ok = true;
    size_t checked = 0;
    std::set<IntVector> done;
    for (const auto& cone : f.max_cones) {
      std::vector<int> coeff(cone.size(), 0);
      while (true) {
        size_t k = 0;
        while (k < coeff.size() && coeff[k] == 2) coeff[k++] = 0;
        if (k == coeff.size()) break;
        ++coeff[k];
        IntVector x(f.rank, 0);
        for (size_t i = 0; i < cone.size(); ++i)
          for (int r = 0; r < f.rank; ++r)
            x[r] += Int(coeff[i]) * f.rays[cone[i]][r];
        x = torfol::primitive_part(x);
        if (std::count(f.rays.begin(), f.rays.end(), x) || !done.insert(x).second)
          continue;
        ok = ok && torfol::discrepancy(f, cone, v, x) ==
                       torfol::discrepancy_oracle(f, v, x);
        ++checked;
      }
    }
    report(ok, "discrepancies match star subdivision (" +
                   std::to_string(checked) + " points)");
  }

  // Singular locus against symbolic chart ranks, on smooth charts.
  {
    bool ok = true;
    size_t checked = 0;
    const auto sing = singular_locus(f, v);
    for (const auto& cone : f.max_cones) {
      if (cone.size() != static_cast<size_t>(f.rank)) continue;
      std::vector<IntVector> rows;
      for (size_t i : cone) rows.push_back(f.rays[i]);
      if (torfol::cone_multiplicity(rows) != 1) continue;
      for (size_t mask = 0; mask < (size_t{1} << cone.size()); ++mask) {
        std::vector<size_t> tau;
        for (size_t i = 0; i < cone.size(); ++i)
          if (mask & (size_t{1} << i)) tau.push_back(cone[i]);
        ok = ok && torfol::minor_rank_oracle(f, v, cone, tau) ==
                       sing.contains(tau);
        ++checked;
      }
    }
    report(ok, "singular locus matches chart ranks (" +
                   std::to_string(checked) + " faces)");
  }

  // Exactness: principal divisors pair to zero with every wall class.
  {
    bool ok = true;
    size_t checked = 0;
    std::mt19937_64 rng(20260814);
    for (const auto& w : walls(f)) {
      if (!w.interior()) continue;
      const auto cc = curve_class(f, w);
      for (int trial = 0; trial < 10; ++trial) {
        RatVector m(f.rank);
        for (auto& c : m) c = Rat(static_cast<long>(rng() % 7) - 3);
        Rat total = 0;
        for (size_t i = 0; i < f.rays.size(); ++i)
          total += dot(m, torfol::to_rat(f.rays[i])) * cc.dot[i];
        ok = ok && total == 0;
        ++checked;
      }
    }
    report(ok, "wall classes annihilate principal divisors (" +
                   std::to_string(checked) + " pairings)");
  }

  // On complete fans, every negative extremal class meets a tangent wall.
  if (is_complete(f)) {
    bool ok = true;
    const TorusDivisor kf = direct;
    for (const auto& r : extremal_rays(f)) {
      if (dot(kf.coeffs, torfol::to_rat(r.cls)) >= 0) continue;
      bool tangent = false;
      for (const auto& w : r.walls) tangent = tangent || curve_tangent(f, v, w);
      ok = ok && tangent;
    }
    report(ok, "negative extremal classes meet tangent walls");
  } else {
    out << "skip negative extremal classes meet tangent walls "
           "(fan not complete)\n";
  }

  return all_ok ? 0 : 4;
}

}  // namespace

int run(std::vector<std::string> args, std::ostream& out, std::ostream& err) {
  CLI::App app{"exact arithmetic for foliated toric varieties"};
  app.name("torfol");
  app.require_subcommand(1);

  std::string file;
  std::string trace_path;
  std::string wall_arg;
  std::vector<std::string> pick_args;
  int max_flips = 1000;
  bool allow_noncanonical = false;

  auto* analyze =
      app.add_subcommand("analyze", "divisors, filtrations, singular locus");
  analyze->add_option("file", file, "input document")->required();

  auto* classify = app.add_subcommand(
      "classify", "terminal/canonical verdict (exit 0, 10 or 20)");
  classify->add_option("file", file, "input document")->required();

  auto* extremal = app.add_subcommand(
      "extremal", "extremal curve classes of a complete fan");
  extremal->add_option("file", file, "input document")->required();

  auto* mmp =
      app.add_subcommand("mmp", "run the directed minimal model program");
  mmp->add_option("file", file, "input document")->required();
  mmp->add_option("--max-flips", max_flips, "abort after this many flips");
  mmp->add_option("--pick", pick_args,
                  "per-step wall choice: 'lex' or 'wall=i,j,...'");
  mmp->add_flag("--allow-noncanonical", allow_noncanonical,
                "run even when the pair is not canonical");
  mmp->add_option("--trace", trace_path, "write a machine-readable trace");

  auto* flip_wall =
      app.add_subcommand("flip-wall", "flip across one named wall");
  flip_wall->add_option("file", file, "input document")->required();
  flip_wall->add_option("--wall", wall_arg, "comma-separated ray indices")
      ->required();

  auto* verify = app.add_subcommand(
      "verify", "cross-check all invariants on this input (exit 0 or 4)");
  verify->add_option("file", file, "input document")->required();

  std::reverse(args.begin(), args.end());
  try {
    app.parse(std::move(args));
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? 0 : 1;
  }

  try {
    const auto [f, v] = parse_input(read_file(file));
    if (analyze->parsed()) return cmd_analyze(f, v, out);
    if (classify->parsed()) return cmd_classify(f, v, out);
    if (extremal->parsed()) return cmd_extremal(f, v, out);
    if (mmp->parsed()) {
      torfol::MmpOptions options;
      options.max_flips = max_flips;
      options.allow_noncanonical = allow_noncanonical;
      for (const auto& p : pick_args) {
        if (p == "lex")
          options.pick_walls.emplace_back();
        else if (p.rfind("wall=", 0) == 0)
          options.pick_walls.push_back(parse_index_list(p.substr(5)));
        else
          throw Error("ParseError",
                      "--pick expects 'lex' or 'wall=i,j,...', got '" + p + "'");
      }
      return cmd_mmp(f, v, options, trace_path, out);
    }
    if (flip_wall->parsed())
      return cmd_flip_wall(f, v, parse_index_list(wall_arg), out);
    if (verify->parsed()) return cmd_verify(f, v, out);
    return 1;
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return exit_for(e.code());
  } catch (const std::exception& e) {
    err << "error: Internal: " << e.what() << '\n';
    return 4;
  }
}

}  // namespace torfol_cli
