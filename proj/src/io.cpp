#include "necklace/io.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include "necklace/errors.hpp"

namespace necklace {

namespace {

void expect_kind(const Json& j, const char* kind) {
  if (!j.is_object()) throw InputError(std::string("expected a JSON object of kind ") + kind);
  if (j.value("version", 0) != kFormatVersion)
    throw InputError("unsupported document version");
  if (j.value("kind", std::string()) != kind)
    throw InputError(std::string("expected kind \"") + kind + "\"");
}

Json header(const char* kind) {
  Json j;
  j["version"] = kFormatVersion;
  j["kind"] = kind;
  return j;
}

// nlohmann throws its own exception types on missing keys and type
// mismatches; report them as input errors.
template <class F>
auto guarded(const char* what, F&& f) {
  try {
    return f();
  } catch (const Json::exception& e) {
    throw InputError(std::string("malformed ") + what + ": " + e.what());
  }
}

Json row_json(const LinearRow& r) { return Json{{"coeffs", ratvec_json(r.coeffs)}, {"rhs", rat_json(r.rhs)}}; }

LinearRow row_from_json(const Json& j) {
  return LinearRow{ratvec_from_json(j.at("coeffs")), rat_from_json(j.at("rhs"))};
}

}  // namespace

Json rat_json(const Rat& r) { return format_rat(r); }

Rat rat_from_json(const Json& j) {
  if (!j.is_string()) throw InputError("rational must be a \"p/q\" string");
  return parse_rat(j.get<std::string>());
}

Json ratvec_json(const RatVec& v) {
  Json a = Json::array();
  for (const auto& x : v) a.push_back(rat_json(x));
  return a;
}

RatVec ratvec_from_json(const Json& j) {
  if (!j.is_array()) throw InputError("expected an array of rationals");
  RatVec v;
  for (const auto& x : j) v.push_back(rat_from_json(x));
  return v;
}

Json double_json(double v) { return std::isfinite(v) ? Json(v) : Json(nullptr); }

Json box_json(const Box& b) { return Json{{"lo", ratvec_json(b.lo)}, {"hi", ratvec_json(b.hi)}}; }

Box box_from_json(const Json& j) {
  return guarded("box", [&] {
    Box b{ratvec_from_json(j.at("lo")), ratvec_from_json(j.at("hi"))};
    if (b.lo.size() != b.hi.size()) throw InputError("box lo/hi dimension mismatch");
    return b;
  });
}

Json to_json(const DiscreteNecklace& n) {
  Json j = header("discrete");
  j["d"] = n.dim();
  j["k"] = n.k();
  j["q"] = n.q();
  j["sides"] = n.sides();
  j["cells"] = n.cells();
  j["exempt"] = n.exempt();
  return j;
}

DiscreteNecklace discrete_from_json(const Json& j) {
  return guarded("discrete necklace", [&] {
    expect_kind(j, "discrete");
    auto sides = j.at("sides").get<std::vector<int>>();
    if (j.contains("d") && j.at("d").get<int>() != static_cast<int>(sides.size()))
      throw InputError("d does not match sides");
    return DiscreteNecklace(std::move(sides), j.at("cells").get<std::vector<int>>(),
                            j.at("k").get<int>(), j.at("q").get<int>(),
                            j.value("exempt", std::vector<int>{}));
  });
}

Json to_json(const GridColoring& c) {
  Json j = header("grid");
  j["d"] = c.dim();
  j["k"] = c.k();
  Json bps = Json::array();
  for (const auto& b : c.all_breakpoints()) bps.push_back(ratvec_json(b));
  j["breakpoints"] = std::move(bps);
  j["colors"] = c.colors();
  return j;
}

GridColoring grid_from_json(const Json& j) {
  return guarded("grid coloring", [&] {
    expect_kind(j, "grid");
    std::vector<RatVec> bps;
    for (const auto& b : j.at("breakpoints")) bps.push_back(ratvec_from_json(b));
    if (j.contains("d") && j.at("d").get<int>() != static_cast<int>(bps.size()))
      throw InputError("d does not match breakpoints");
    return GridColoring(std::move(bps), j.at("colors").get<std::vector<int>>(), j.at("k").get<int>());
  });
}

Json to_json(const Splitting& s) {
  Json j = header("splitting");
  j["d"] = s.dim();
  j["q"] = s.q();
  j["box"] = box_json(s.box());
  Json cuts = Json::array();
  for (const auto& c : s.cuts()) cuts.push_back(Json{{"axis", c.axis + 1}, {"at", rat_json(c.at)}});
  j["cuts"] = std::move(cuts);
  j["labeling"] = s.labeling();
  return j;
}

Splitting splitting_from_json(const Json& j) {
  return guarded("splitting", [&] {
    expect_kind(j, "splitting");
    Box box = box_from_json(j.at("box"));
    std::vector<AxisCut> cuts;
    for (const auto& c : j.at("cuts")) {
      const int axis = c.at("axis").get<int>();
      if (axis < 1 || axis > box.dim()) throw InputError("cut axis out of range");
      cuts.push_back({axis - 1, rat_from_json(c.at("at"))});
    }
    return Splitting(std::move(box), std::move(cuts), j.at("labeling").get<std::vector<int>>(),
                     j.at("q").get<int>());
  });
}

Json to_json(const ArbitrarySplitting& s) {
  Json j = header("arbitrary-splitting");
  j["d"] = s.box().dim();
  j["q"] = s.q();
  j["box"] = box_json(s.box());
  Json hs = Json::array();
  for (const auto& h : s.hyperplanes())
    hs.push_back(Json{{"normal", ratvec_json(h.normal())}, {"offset", rat_json(h.offset())}});
  j["hyperplanes"] = std::move(hs);
  j["labeling"] = s.labeling();
  return j;
}

ArbitrarySplitting arbitrary_splitting_from_json(const Json& j) {
  return guarded("arbitrary splitting", [&] {
    expect_kind(j, "arbitrary-splitting");
    Box box = box_from_json(j.at("box"));
    std::vector<Hyperplane> hs;
    for (const auto& h : j.at("hyperplanes")) {
      RatVec normal = ratvec_from_json(h.at("normal"));
      if (static_cast<int>(normal.size()) != box.dim()) throw InputError("hyperplane dimension mismatch");
      hs.emplace_back(std::move(normal), rat_from_json(h.at("offset")));
    }
    return ArbitrarySplitting(std::move(box), std::move(hs),
                              j.at("labeling").get<std::map<std::string, int>>(), j.at("q").get<int>());
  });
}

Json to_json(const LinearProgram& lp) {
  Json j;
  j["vars"] = lp.num_vars;
  Json eq = Json::array(), le = Json::array();
  for (const auto& r : lp.equalities) eq.push_back(row_json(r));
  for (const auto& r : lp.inequalities) le.push_back(row_json(r));
  j["equalities"] = std::move(eq);
  j["inequalities"] = std::move(le);
  std::vector<int> nonneg;
  for (bool b : lp.nonnegative) nonneg.push_back(b ? 1 : 0);
  j["nonnegative"] = nonneg;
  j["objective"] = ratvec_json(lp.objective);
  return j;
}

LinearProgram linear_program_from_json(const Json& j) {
  return guarded("linear program", [&] {
    LinearProgram lp(j.at("vars").get<std::size_t>());
    for (const auto& r : j.at("equalities")) lp.equalities.push_back(row_from_json(r));
    for (const auto& r : j.at("inequalities")) lp.inequalities.push_back(row_from_json(r));
    for (int b : j.at("nonnegative").get<std::vector<int>>()) lp.nonnegative.push_back(b != 0);
    lp.objective = ratvec_from_json(j.at("objective"));
    return lp;
  });
}

Json to_json(const Certificate1D& cert, bool with_systems) {
  Json j = header("certificate-1d");
  const auto& p = cert.problem;
  j["problem"] = Json{{"coloring", to_json(p.coloring)},
                      {"q", p.q},
                      {"t", p.t},
                      {"gamma", rat_json(p.gamma)},
                      {"lo", rat_json(p.lo)},
                      {"hi", rat_json(p.hi)},
                      {"free_endpoints", p.free_endpoints},
                      {"boundary_cuts_only", p.boundary_cuts_only}};
  j["patterns"] = cert.patterns.get_str();
  j["labelings"] = cert.labelings.get_str();
  Json entries = Json::array();
  for (const auto& e : cert.entries) {
    Json x{{"slots", e.slots},
           {"labeling", e.labeling},
           {"hash", e.system_hash},
           {"farkas",
            Json{{"eq", ratvec_json(e.farkas.eq_multipliers)},
                 {"le", ratvec_json(e.farkas.le_multipliers)}}}};
    if (with_systems && e.system) x["system"] = to_json(*e.system);
    entries.push_back(std::move(x));
  }
  j["entries"] = std::move(entries);
  return j;
}

Certificate1D certificate_from_json(const Json& j) {
  return guarded("certificate", [&] {
    expect_kind(j, "certificate-1d");
    const Json& p = j.at("problem");
    Line1DProblem problem{grid_from_json(p.at("coloring")),
                          p.at("q").get<int>(),
                          p.at("t").get<int>(),
                          rat_from_json(p.at("gamma")),
                          rat_from_json(p.at("lo")),
                          rat_from_json(p.at("hi")),
                          p.at("free_endpoints").get<bool>(),
                          p.at("boundary_cuts_only").get<bool>()};
    Certificate1D cert{std::move(problem), mpz_class(j.at("patterns").get<std::string>()),
                       mpz_class(j.at("labelings").get<std::string>()), {}};
    for (const auto& x : j.at("entries")) {
      RefutationEntry e;
      e.slots = x.at("slots").get<std::vector<int>>();
      e.labeling = x.at("labeling").get<std::vector<int>>();
      e.system_hash = x.at("hash").get<std::uint64_t>();
      e.farkas.eq_multipliers = ratvec_from_json(x.at("farkas").at("eq"));
      e.farkas.le_multipliers = ratvec_from_json(x.at("farkas").at("le"));
      if (x.contains("system")) e.system = linear_program_from_json(x.at("system"));
      cert.entries.push_back(std::move(e));
    }
    return cert;
  });
}

std::string dump(const Json& j) { return j.dump(2) + "\n"; }

Json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  try {
    return Json::parse(ss.str());
  } catch (const Json::exception& e) {
    throw InputError(path + ": " + e.what());
  }
}

void write_text_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw InputError("cannot write " + path);
  out << text;
}

}  // namespace necklace
