#pragma once

// Versioned JSON documents for the domain types. Every document carries
// "version": 1 and a "kind"; rationals are "p/q" strings, axes are 1-based
// and cell maps are listed in lexicographic cell order. Reading a document
// and writing it back reproduces it byte for byte.

#include <string>

#include <json.hpp>

#include "necklace/core.hpp"
#include "necklace/polytope.hpp"
#include "necklace/splitter1d.hpp"

namespace necklace {

using Json = nlohmann::json;

inline constexpr int kFormatVersion = 1;

Json rat_json(const Rat& r);
Rat rat_from_json(const Json& j);
Json ratvec_json(const RatVec& v);
RatVec ratvec_from_json(const Json& j);

/// Non-finite values become null.
Json double_json(double v);

Json box_json(const Box& b);
Box box_from_json(const Json& j);

Json to_json(const DiscreteNecklace& n);
Json to_json(const GridColoring& c);
Json to_json(const Splitting& s);
Json to_json(const ArbitrarySplitting& s);
/// Linear systems are written only when `with_systems` and present.
Json to_json(const Certificate1D& cert, bool with_systems = false);
Json to_json(const LinearProgram& lp);

DiscreteNecklace discrete_from_json(const Json& j);
GridColoring grid_from_json(const Json& j);
Splitting splitting_from_json(const Json& j);
ArbitrarySplitting arbitrary_splitting_from_json(const Json& j);
Certificate1D certificate_from_json(const Json& j);
LinearProgram linear_program_from_json(const Json& j);

/// Canonical text: two-space indentation plus a trailing newline.
std::string dump(const Json& j);

/// Throws InputError on unreadable files or malformed JSON.
Json read_json_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& text);

}  // namespace necklace
