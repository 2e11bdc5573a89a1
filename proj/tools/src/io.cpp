#include "torfol_cli/io.hpp"

#include <algorithm>
#include <set>
#include <sstream>

#include "torfol/error.hpp"

namespace torfol_cli {

using torfol::Error;
using torfol::FanData;
using torfol::FoliationDatum;
using torfol::Int;
using torfol::IntVector;
using torfol::Rat;
using torfol::RatVector;

namespace {

[[noreturn]] void fail(int line_no, const std::string& message) {
  throw Error("ParseError", "line " + std::to_string(line_no) + ": " + message);
}

std::string trimmed(const std::string& s) {
  const auto a = s.find_first_not_of(" \t\r");
  if (a == std::string::npos) return "";
  const auto b = s.find_last_not_of(" \t\r");
  return s.substr(a, b - a + 1);
}

std::vector<std::string> tokens(const std::string& line) {
  std::istringstream in(line);
  std::vector<std::string> out;
  std::string tok;
  while (in >> tok) out.push_back(tok);
  return out;
}

bool integer_shaped(const std::string& tok) {
  size_t i = tok.front() == '-' ? 1 : 0;
  if (i == tok.size()) return false;
  for (; i < tok.size(); ++i)
    if (!std::isdigit(static_cast<unsigned char>(tok[i]))) return false;
  return true;
}

Int parse_int(const std::string& tok, int line_no) {
  if (!integer_shaped(tok)) fail(line_no, "expected an integer, got '" + tok + "'");
  return Int(tok, 10);
}

Rat parse_rat(const std::string& tok, int line_no) {
  const auto slash = tok.find('/');
  if (slash == std::string::npos) return Rat(parse_int(tok, line_no));
  const Int num = parse_int(tok.substr(0, slash), line_no);
  const Int den = parse_int(tok.substr(slash + 1), line_no);
  if (den == 0) fail(line_no, "zero denominator in '" + tok + "'");
  Rat q(num, den);
  q.canonicalize();
  return q;
}

size_t parse_index(const std::string& tok, int line_no) {
  const Int z = parse_int(tok, line_no);
  if (z < 0) fail(line_no, "ray index must be nonnegative, got '" + tok + "'");
  if (!z.fits_ulong_p()) fail(line_no, "ray index out of range: '" + tok + "'");
  return static_cast<size_t>(z.get_ui());
}

std::string join(const std::vector<std::string>& parts, const std::string& sep) {
  std::string out;
  for (size_t i = 0; i < parts.size(); ++i) {
    if (i) out += sep;
    out += parts[i];
  }
  return out;
}

void append_int_rows(std::ostringstream& out,
                     const std::vector<IntVector>& rows) {
  for (const auto& r : rows) {
    for (size_t j = 0; j < r.size(); ++j) {
      if (j) out << ' ';
      out << r[j].get_str();
    }
    out << '\n';
  }
}

void append_rat_rows(std::ostringstream& out, const torfol::RatMatrix& rows) {
  for (const auto& r : rows) {
    for (size_t j = 0; j < r.size(); ++j) {
      if (j) out << ' ';
      out << r[j].get_str();
    }
    out << '\n';
  }
}

void append_cones(std::ostringstream& out,
                  const std::vector<std::vector<size_t>>& cones) {
  for (const auto& c : cones) {
    for (size_t j = 0; j < c.size(); ++j) {
      if (j) out << ' ';
      out << c[j];
    }
    out << '\n';
  }
}

}  // namespace

InputDocument parse_document(const std::string& text) {
  static const std::set<std::string> known = {"lattice_rank", "rays",
                                              "max_cones", "foliation"};
  InputDocument doc;
  std::set<std::string> seen;
  std::string section;
  bool rank_set = false;

  std::istringstream in(text);
  std::string raw;
  int line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    const std::string line = trimmed(raw);
    if (line.empty() || line.front() == '#') continue;

    if (line.front() == '[') {
      if (line.back() != ']') fail(line_no, "unterminated section header");
      const std::string name = trimmed(line.substr(1, line.size() - 2));
      if (!known.count(name)) fail(line_no, "unknown section [" + name + "]");
      if (seen.count(name)) fail(line_no, "duplicate section [" + name + "]");
      if (seen.empty() && name != "lattice_rank")
        fail(line_no, "[lattice_rank] must be the first section");
      seen.insert(name);
      section = name;
      continue;
    }
    if (section.empty()) fail(line_no, "data before any section header");

    const auto toks = tokens(line);
    if (section == "lattice_rank") {
      if (rank_set) fail(line_no, "more than one lattice_rank value");
      if (toks.size() != 1) fail(line_no, "lattice_rank takes a single integer");
      const Int z = parse_int(toks[0], line_no);
      if (z < 1 || !z.fits_sint_p())
        fail(line_no, "lattice_rank must be a small positive integer");
      doc.lattice_rank = static_cast<int>(z.get_si());
      rank_set = true;
    } else if (section == "rays") {
      if (toks.size() != static_cast<size_t>(doc.lattice_rank))
        fail(line_no, "ray has " + std::to_string(toks.size()) +
                          " coordinates, expected " +
                          std::to_string(doc.lattice_rank));
      IntVector ray;
      for (const auto& t : toks) ray.push_back(parse_int(t, line_no));
      doc.rays.push_back(std::move(ray));
    } else if (section == "max_cones") {
      if (toks.empty()) fail(line_no, "empty cone");
      std::vector<size_t> cone;
      for (const auto& t : toks) cone.push_back(parse_index(t, line_no));
      std::sort(cone.begin(), cone.end());
      if (std::adjacent_find(cone.begin(), cone.end()) != cone.end())
        fail(line_no, "repeated ray index in cone");
      doc.max_cones.push_back(std::move(cone));
    } else {  // foliation
      if (toks.size() != static_cast<size_t>(doc.lattice_rank))
        fail(line_no, "foliation row has " + std::to_string(toks.size()) +
                          " entries, expected " +
                          std::to_string(doc.lattice_rank));
      RatVector row;
      for (const auto& t : toks) row.push_back(parse_rat(t, line_no));
      doc.foliation.push_back(std::move(row));
    }
  }

  for (const auto& name : known)
    if (!seen.count(name))
      throw Error("ParseError", "missing section [" + name + "]");
  if (!rank_set) throw Error("ParseError", "missing lattice_rank value");
  if (doc.rays.empty()) throw Error("ParseError", "section [rays] is empty");
  if (doc.max_cones.empty())
    throw Error("ParseError", "section [max_cones] is empty");
  for (size_t i = 0; i < doc.max_cones.size(); ++i)
    for (size_t j : doc.max_cones[i])
      if (j >= doc.rays.size())
        throw Error("ParseError",
                    "max_cones entry " + std::to_string(i) + ": ray index " +
                        std::to_string(j) + " out of range");
  return doc;
}

std::pair<FanData, FoliationDatum> input_data(const InputDocument& doc) {
  FanData f{doc.lattice_rank, doc.rays, doc.max_cones};
  const auto problems = validate(f);
  if (!problems.empty())
    throw Error("ValidationError", join(problems, "; "));
  return {std::move(f), torfol::make_foliation(doc.foliation, doc.lattice_rank)};
}

std::pair<FanData, FoliationDatum> parse_input(const std::string& text) {
  return input_data(parse_document(text));
}

std::string serialize_input(const FanData& f, const FoliationDatum& v) {
  std::ostringstream out;
  out << "[lattice_rank]\n" << f.rank << "\n\n[rays]\n";
  append_int_rows(out, f.rays);
  out << "\n[max_cones]\n";
  append_cones(out, f.max_cones);
  out << "\n[foliation]\n";
  append_rat_rows(out, v.basis);
  return out.str();
}

std::string serialize_trace(const torfol::MmpTrace& t) {
  std::ostringstream out;
  out << "[outcome]\n"
      << (t.outcome == torfol::MmpOutcome::nef ? "nef" : "fibration") << '\n';
  out << "\n[verdict]\n" << torfol::verdict_name(t.input_verdict) << '\n';
  out << "\n[override]\n" << (t.noncanonical_override ? 1 : 0) << '\n';
  for (size_t i = 0; i < t.steps.size(); ++i) {
    const auto& s = t.steps[i];
    out << "\n[step " << i << "]\n";
    out << "type "
        << (s.type == torfol::ContractionType::fibre
                ? "fibre"
                : s.type == torfol::ContractionType::divisorial ? "divisorial"
                                                                : "small")
        << '\n';
    out << "kf " << s.kf.get_str() << '\n';
    out << "class";
    for (const auto& c : s.chosen.cls) out << ' ' << c.get_str();
    out << '\n';
    out << "wall";
    for (size_t j : s.chosen.walls.front().ray_indices) out << ' ' << j;
    out << '\n';
    out << "dicritical_before " << (s.dicritical_before ? 1 : 0) << '\n';
    out << "dicritical_after " << (s.dicritical_after ? 1 : 0) << '\n';
  }
  out << "\n[final_rays]\n";
  append_int_rows(out, t.final_fan.rays);
  out << "\n[final_cones]\n";
  append_cones(out, t.final_fan.max_cones);
  if (t.pullback) {
    const auto& p = *t.pullback;
    out << "\n[quotient_is_fan]\n" << (p.quotient.is_fan ? 1 : 0) << '\n';
    if (p.quotient.is_fan) {
      out << "\n[quotient_rays]\n";
      append_int_rows(out, p.quotient.fan.rays);
      out << "\n[quotient_cones]\n";
      append_cones(out, p.quotient.fan.max_cones);
    } else {
      out << "\n[quotient_violations]\n";
      for (const auto& msg : p.quotient.violations) out << msg << '\n';
    }
    out << "\n[induced]\n";
    if (p.induced)
      append_rat_rows(out, p.induced->basis);
    else
      out << "none\n";
  }
  return out.str();
}

}  // namespace torfol_cli
