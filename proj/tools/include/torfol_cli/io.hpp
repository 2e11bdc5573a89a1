#ifndef TORFOL_CLI_IO_HPP
#define TORFOL_CLI_IO_HPP

#include <string>
#include <utility>
#include <vector>

#include "torfol/fan.hpp"
#include "torfol/foliation.hpp"
#include "torfol/mori.hpp"

namespace torfol_cli {

// A foliated-fan input document. The on-disk format is line based:
//
//   [lattice_rank]     one positive integer; must be the first section
//   [rays]             one ray per line, integer coordinates
//   [max_cones]        one cone per line, 0-based ray indices
//   [foliation]        one spanning row per line, entries "p/q" or integers
//
// '#' starts a comment line, blank lines are ignored, and each section
// appears exactly once. Every syntax problem is reported as a "ParseError"
// with the offending line number.
struct InputDocument {
  int lattice_rank = 0;
  std::vector<torfol::IntVector> rays;
  std::vector<std::vector<size_t>> max_cones;
  torfol::RatMatrix foliation;

  bool operator==(const InputDocument&) const = default;
};

// Syntax layer only; see InputDocument for the grammar.
InputDocument parse_document(const std::string& text);

// Semantic layer: runs the fan validator (all failures joined into one
// "ValidationError") and builds the foliation (its errors propagate).
std::pair<torfol::FanData, torfol::FoliationDatum> input_data(
    const InputDocument& doc);

// parse_document followed by input_data.
std::pair<torfol::FanData, torfol::FoliationDatum> parse_input(
    const std::string& text);

// Canonical rendering: fixed section order, one datum per line, rationals
// as "p/q" with positive reduced denominator. parse_input is a left
// inverse of this function.
std::string serialize_input(const torfol::FanData& f,
                            const torfol::FoliationDatum& v);

// Machine-readable rendering of a minimal-model run, one [step N] section
// per step. The "wall" line of each step can be fed back through
// "--pick wall=..." to replay the run byte for byte.
std::string serialize_trace(const torfol::MmpTrace& t);

}  // namespace torfol_cli

#endif
