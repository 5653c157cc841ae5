// necklace-lab: command-line front end.
//
// Exit codes: 0 completed, 2 infeasible or certified absent, 3 input
// error, 4 budget exhausted without a certificate, 1 internal error.
//
// Randomness: every command derives its streams from the single 64-bit
// --seed (or NECKLACE_LAB_SEED) through RandomStream::child, trial i
// using child(i). Timings go to stderr so output files stay reproducible.

#include <CLI11.hpp>

#include <chrono>
#include <cstdio>
#include <iostream>
#include <sstream>
#include <string>

#include "necklace/adversary.hpp"
#include "necklace/discrete_bounds.hpp"
#include "necklace/distinguish.hpp"
#include "necklace/errors.hpp"
#include "necklace/io.hpp"
#include "necklace/random.hpp"
#include "necklace/splitter1d.hpp"
#include "necklace/splitter_md.hpp"

using namespace necklace;

namespace {

constexpr int kCompleted = 0;
constexpr int kAbsent = 2;
constexpr int kInputError = 3;
constexpr int kBudget = 4;

struct Global {
  std::uint64_t seed = 0;
  std::string out;
  std::string format = "json";
  int jobs = 1;
  bool verbose = false;
};

Json report(const std::string& command) {
  Json j;
  j["version"] = kFormatVersion;
  j["kind"] = "report";
  j["command"] = command;
  return j;
}

std::string csv_cell(const Json& v) {
  if (v.is_string()) {
    const auto s = v.get<std::string>();
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string q = "\"";
    for (char c : s) q += c == '"' ? std::string("\"\"") : std::string(1, c);
    return q + "\"";
  }
  return v.dump();
}

// Scalar top-level fields as one header row plus one value row; reports
// with a "rows" array become one line per row.
std::string to_csv(const Json& doc) {
  std::ostringstream os;
  auto emit = [&](const std::vector<const Json*>& rows) {
    std::vector<std::string> keys;
    for (auto it = rows.front()->begin(); it != rows.front()->end(); ++it)
      if (!it->is_structured()) keys.push_back(it.key());
    for (std::size_t i = 0; i < keys.size(); ++i) os << (i ? "," : "") << keys[i];
    os << "\n";
    for (const Json* r : rows) {
      for (std::size_t i = 0; i < keys.size(); ++i)
        os << (i ? "," : "") << (r->contains(keys[i]) ? csv_cell(r->at(keys[i])) : "");
      os << "\n";
    }
  };
  if (doc.contains("rows") && doc["rows"].is_array() && !doc["rows"].empty()) {
    std::vector<const Json*> rows;
    for (const auto& r : doc["rows"]) rows.push_back(&r);
    emit(rows);
  } else {
    emit({&doc});
  }
  return os.str();
}

void write_output(const Global& g, const Json& doc) {
  const std::string text = g.format == "csv" ? to_csv(doc) : dump(doc);
  if (g.out.empty() || g.out == "-") {
    std::cout << text;
  } else {
    write_text_file(g.out, text);
  }
}

void write_jsonl(const std::string& path, const std::vector<Json>& records) {
  if (path.empty()) return;
  std::string text;
  for (const auto& r : records) text += r.dump() + "\n";
  write_text_file(path, text);
}

Rat rat_arg(const std::string& s) { return parse_rat(s); }

// Witness checks through the core model before anything is written.
void require_fair(const DiscreteNecklace& n, const Splitting& s) {
  if (!is_fair_discrete(n, s)) throw std::logic_error("witness failed revalidation");
}

void require_fair(const GridColoring& c, const Splitting& s, const Rat& gamma) {
  if (!c.domain().contains(s.box()) || !is_fair(part_measures(c, s)) || granularity_axis(s) < gamma)
    throw std::logic_error("witness failed revalidation");
}

bool is_kind(const Json& j, const char* kind) { return j.is_object() && j.value("kind", "") == kind; }

DiscreteNecklace with_q(const DiscreteNecklace& n, int q) {
  if (q <= 0 || q == n.q()) return n;
  return DiscreteNecklace(n.sides(), n.cells(), n.k(), q, n.exempt());
}

// 1-D or d-D necklace of the given sides with every tracked color class a
// multiple of q: q-bead blocks of random colors, then a Fisher-Yates
// shuffle.
DiscreteNecklace random_necklace(const std::vector<int>& sides, int k, int q, RandomStream& rng) {
  std::size_t cells = 1;
  for (int s : sides) cells *= static_cast<std::size_t>(s);
  std::vector<int> colors;
  while (colors.size() < cells) {
    const int c = static_cast<int>(rng.uniform_int(1, k));
    for (int i = 0; i < q; ++i) colors.push_back(c);
  }
  for (std::size_t i = cells - 1; i > 0; --i)
    std::swap(colors[i], colors[static_cast<std::size_t>(rng.uniform_int(0, static_cast<std::int64_t>(i)))]);
  return DiscreteNecklace(sides, colors, k, q);
}

Json line_stats_json(const Line1DStats& s) {
  return Json{{"lps_solved", s.lps_solved}, {"prefixes_refuted", s.prefixes_refuted}, {"leaves", s.leaves}};
}

// Shared tail of solve-1d (grid) and certify-1d.
int finish_line_result(const Global& g, Json rep, const GridColoring& coloring, const Rat& gamma,
                       const Line1DResult& r, const std::string& certificate_path) {
  rep["stats"] = line_stats_json(r.stats);
  if (r.witness) {
    require_fair(coloring, *r.witness, gamma);
    rep["status"] = "found";
    rep["t"] = r.witness->cut_count();
    rep["witness"] = to_json(*r.witness);
    write_output(g, rep);
    return kCompleted;
  }
  if (!verify_certificate(*r.certificate)) throw std::logic_error("certificate failed verification");
  rep["status"] = "certified-absent";
  rep["patterns"] = r.certificate->patterns.get_str();
  rep["labelings"] = r.certificate->labelings.get_str();
  rep["entries"] = r.certificate->entries.size();
  if (!certificate_path.empty()) write_text_file(certificate_path, dump(to_json(*r.certificate, g.verbose)));
  else rep["certificate"] = to_json(*r.certificate, g.verbose);
  write_output(g, rep);
  return kAbsent;
}

struct Timer {
  std::string label;
  std::chrono::steady_clock::time_point start = std::chrono::steady_clock::now();
  ~Timer() {
    const double s = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    std::fprintf(stderr, "[%s] %.3f s\n", label.c_str(), s);
  }
};

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Fair splitting of multidimensional necklaces"};
  app.require_subcommand(1);
  Global g;
  app.add_option("--seed", g.seed, "master seed")->envname("NECKLACE_LAB_SEED");
  app.add_option("--out", g.out, "output file (default stdout)");
  app.add_option("--format", g.format, "json or csv")->check(CLI::IsMember({"json", "csv"}));
  app.add_option("--jobs", g.jobs, "worker threads")->check(CLI::PositiveNumber);
  app.add_flag("--verbose", g.verbose, "include exact linear systems in certificates");

  auto sub = [&](const char* name, const char* help) {
    auto* s = app.add_subcommand(name, help);
    s->fallthrough();
    return s;
  };

  std::function<int()> run;

  // solve-1d ----------------------------------------------------------------
  std::string instance;
  int q = 0, t = 0;
  std::string gamma_s = "0", lo_s, hi_s, certificate_path;
  auto* solve1 = sub("solve-1d", "fair splitting of a 1-D discrete necklace or grid coloring");
  solve1->add_option("--instance", instance, "discrete or grid document")->required();
  solve1->add_option("--q", q, "parts (grid; overrides discrete q)");
  solve1->add_option("--t", t, "cut count (grid)");
  solve1->add_option("--gamma", gamma_s, "granularity (grid)");
  solve1->add_option("--lo", lo_s, "necklace start (grid, default domain)");
  solve1->add_option("--hi", hi_s, "necklace end (grid, default domain)");
  solve1->add_option("--certificate", certificate_path, "write the certificate here");
  solve1->callback([&] {
    run = [&] {
      const Json doc = read_json_file(instance);
      Json rep = report("solve-1d");
      if (is_kind(doc, "discrete")) {
        const DiscreteNecklace n = with_q(discrete_from_json(doc), q);
        if (n.dim() != 1) throw InputError("solve-1d needs a 1-D necklace");
        const Splitting s = solve_discrete_1d(n, g.jobs);
        require_fair(n, s);
        rep["status"] = "found";
        rep["t"] = s.cut_count();
        rep["bound"] = alon_cap(n);
        rep["witness"] = to_json(s);
        write_output(g, rep);
        return kCompleted;
      }
      const GridColoring c = grid_from_json(doc);
      if (c.dim() != 1) throw InputError("solve-1d needs a 1-D coloring");
      if (q < 2) throw InputError("--q >= 2 is required for grid colorings");
      const Rat gamma = rat_arg(gamma_s);
      const Rat lo = lo_s.empty() ? c.domain().lo[0] : rat_arg(lo_s);
      const Rat hi = hi_s.empty() ? c.domain().hi[0] : rat_arg(hi_s);
      Line1DOptions opts{g.jobs, g.verbose};
      const auto r = solve_continuous_1d(c, lo, hi, q, t, gamma, opts);
      rep["q"] = q;
      rep["gamma"] = rat_json(gamma);
      return finish_line_result(g, rep, c, gamma, r, certificate_path);
    };
  });

  // solve-md ----------------------------------------------------------------
  std::vector<int> per_axis;
  MdSearchBudget md_budget;
  auto* solvemd = sub("solve-md", "numerical search for axis-cut splittings of a grid coloring");
  solvemd->add_option("--instance", instance, "grid or discrete document")->required();
  solvemd->add_option("--q", q, "parts")->required();
  solvemd->add_option("--t", t, "cut count")->required();
  solvemd->add_option("--gamma", gamma_s, "granularity");
  solvemd->add_option("--per-axis", per_axis, "cuts per axis")->delimiter(',');
  solvemd->add_option("--max-patterns", md_budget.max_patterns, "patterns per distribution");
  solvemd->add_option("--seeds", md_budget.seeds_per_pattern, "starts per pattern");
  solvemd->callback([&] {
    run = [&] {
      const Json doc = read_json_file(instance);
      const GridColoring c = is_kind(doc, "discrete") ? discrete_to_grid(discrete_from_json(doc)) : grid_from_json(doc);
      const Rat gamma = rat_arg(gamma_s);
      md_budget.seed = g.seed;
      md_budget.jobs = g.jobs;
      const auto r = solve_grid_axis_cuts_md(c, c.domain(), q, t, gamma, md_budget, per_axis);
      Json rep = report("solve-md");
      rep["q"] = q;
      rep["t"] = t;
      rep["patterns_explored"] = r.patterns_explored;
      rep["seeds_run"] = r.seeds_run;
      rep["best_residual"] = double_json(r.best_residual);
      rep["sampled"] = r.sampled;
      if (r.witness) {
        require_fair(c, *r.witness, gamma);
        rep["status"] = "found";
        rep["witness"] = to_json(*r.witness);
        write_output(g, rep);
        return kCompleted;
      }
      rep["status"] = "not-found";
      write_output(g, rep);
      return kBudget;
    };
  });

  // lift-split --------------------------------------------------------------
  auto* lift = sub("lift-split", "fair splitting of a discrete necklace via the lexicographic lift");
  lift->add_option("--instance", instance, "discrete document")->required();
  lift->add_option("--q", q, "parts (overrides the document)");
  lift->callback([&] {
    run = [&] {
      const DiscreteNecklace n = with_q(discrete_from_json(read_json_file(instance)), q);
      const Splitting s = split_via_lift(n, g.jobs);
      require_fair(n, s);
      Json rep = report("lift-split");
      rep["t"] = s.cut_count();
      rep["bound"] = (2 * n.dim() - 1) * n.colors_present() * (n.q() - 1);
      rep["witness"] = to_json(s);
      write_output(g, rep);
      return kCompleted;
    };
  });

  // min-cuts ----------------------------------------------------------------
  int t_cap = -1;
  std::string witness_path;
  auto* mincuts = sub("min-cuts", "exact minimum number of axis cuts for a discrete necklace");
  mincuts->add_option("--instance", instance, "discrete document")->required();
  mincuts->add_option("--q", q, "parts (overrides the document)");
  mincuts->add_option("--t-cap", t_cap, "largest cut count tried");
  mincuts->add_option("--per-axis", per_axis, "cut budget per axis")->delimiter(',');
  mincuts->add_option("--witness", witness_path, "write the witness splitting here");
  mincuts->callback([&] {
    run = [&] {
      const DiscreteNecklace n = with_q(discrete_from_json(read_json_file(instance)), q);
      const int cap = t_cap >= 0 ? t_cap : (2 * n.dim() - 1) * alon_cap(n);
      const auto r = min_cuts_discrete_md(n, cap, per_axis, g.jobs);
      Json rep = report("min-cuts");
      rep["t_cap"] = cap;
      if (!r) {
        rep["status"] = "none-within-cap";
        write_output(g, rep);
        return kAbsent;
      }
      require_fair(n, r->witness);
      rep["status"] = "found";
      rep["t_min"] = r->t_min;
      rep["cut_sets_tried"] = r->cut_sets_tried;
      if (!witness_path.empty()) write_text_file(witness_path, dump(to_json(r->witness)));
      else rep["witness"] = to_json(r->witness);
      if (g.format == "json" && g.out.empty() && !witness_path.empty()) {
        std::cout << r->t_min << "\n";
        return kCompleted;
      }
      write_output(g, rep);
      return kCompleted;
    };
  });

  // gen-adversary -----------------------------------------------------------
  AdversaryParams adv;
  std::string delta_s = "0", epsilon_s = "1/2";
  auto add_adversary = [&](CLI::App* s) {
    s->add_option("--d", adv.d, "dimension");
    s->add_option("--k", adv.k, "colors");
    s->add_option("--q", adv.q, "parts");
    s->add_option("--t", adv.t, "cuts");
    s->add_option("--n", adv.n, "window half-extent");
    s->add_option("--N", adv.N, "background cells per axis (0: 4n^2+1)");
    s->add_option("--delta", delta_s, "inner cube side (0: 1/(5N))");
    s->add_option("--epsilon", epsilon_s, "measure budget");
    s->add_option("--bits", adv.bits, "random bits per cube side");
  };
  auto adversary = [&] {
    AdversaryParams p = adv;
    p.delta = rat_arg(delta_s);
    p.epsilon = rat_arg(epsilon_s);
    p.seed = g.seed;
    return p.resolved();
  };
  auto* gen = sub("gen-adversary", "generic cube coloring of [-n, n]^d");
  add_adversary(gen);
  gen->callback([&] {
    run = [&] {
      write_output(g, to_json(generate_bad_coloring(adversary())));
      return kCompleted;
    };
  });

  // certify-1d --------------------------------------------------------------
  bool fixed_endpoints = false;
  std::string cgamma_s;
  auto* cert = sub("certify-1d", "exact proof that a 1-D coloring has no fair splitting");
  add_adversary(cert);
  cert->add_option("--instance", instance, "grid document (default: generated)");
  cert->add_option("--gamma", cgamma_s, "granularity (default 1/n)");
  cert->add_flag("--fixed-endpoints", fixed_endpoints, "necklace is the whole window");
  cert->add_option("--certificate", certificate_path, "write the certificate here");
  cert->callback([&] {
    run = [&] {
      const AdversaryParams p = adversary();
      if (p.d != 1) throw InputError("certify-1d is one-dimensional");
      const GridColoring c = instance.empty() ? generate_bad_coloring(p) : grid_from_json(read_json_file(instance));
      const Rat gamma = cgamma_s.empty() ? Rat(1, p.n) : rat_arg(cgamma_s);
      Line1DOptions opts{g.jobs, g.verbose};
      const auto r = certify_no_split_1d(c, p.q, p.t, gamma, p.n, fixed_endpoints, opts);
      Json rep = report("certify-1d");
      rep["k"] = c.k();
      rep["q"] = p.q;
      rep["t"] = p.t;
      rep["n"] = p.n;
      rep["gamma"] = rat_json(gamma);
      rep["fixed_endpoints"] = fixed_endpoints;
      return finish_line_result(g, rep, c, gamma, r, certificate_path);
    };
  });

  // probe-md ----------------------------------------------------------------
  ProbeBudget probe;
  std::string log_path;
  auto* prob = sub("probe-md", "random cube search for splittings of a generic coloring");
  add_adversary(prob);
  prob->add_option("--instance", instance, "grid document (default: generated)");
  prob->add_option("--gamma", cgamma_s, "granularity (default 1/n)");
  prob->add_option("--trials", probe.trials, "random cubes");
  prob->add_option("--max-patterns", probe.search.max_patterns, "patterns per distribution");
  prob->add_option("--seeds", probe.search.seeds_per_pattern, "starts per pattern");
  prob->add_option("--log", log_path, "JSONL log, one record per trial");
  prob->callback([&] {
    run = [&] {
      const AdversaryParams p = adversary();
      const GridColoring c = instance.empty() ? generate_bad_coloring(p) : grid_from_json(read_json_file(instance));
      const Rat gamma = cgamma_s.empty() ? Rat(1, p.n) : rat_arg(cgamma_s);
      probe.seed = g.seed;
      probe.search.seed = g.seed;
      probe.search.jobs = g.jobs;
      const auto r = probe_no_split_md(c, p.q, p.t, gamma, p.n, probe);
      std::vector<Json> records;
      for (std::size_t i = 0; i < r.trials.size(); ++i) {
        const auto& tr = r.trials[i];
        records.push_back(Json{{"trial", i},
                               {"box", box_json(tr.box)},
                               {"found", tr.found},
                               {"best_residual", double_json(tr.best_residual)},
                               {"patterns", tr.patterns},
                               {"seeds", tr.seeds}});
      }
      write_jsonl(log_path, records);
      Json rep = report("probe-md");
      rep["d"] = c.dim();
      rep["k"] = c.k();
      rep["q"] = p.q;
      rep["t"] = p.t;
      rep["trials"] = r.trials.size();
      rep["best_residual"] = double_json(r.best_residual);
      if (r.witness) {
        require_fair(c, *r.witness, gamma);
        rep["status"] = "found";
        rep["witness"] = to_json(*r.witness);
        write_output(g, rep);
        return kCompleted;
      }
      rep["status"] = "not-found";
      write_output(g, rep);
      return kBudget;
    };
  });

  // audit-dof ---------------------------------------------------------------
  int ad = 1, ak = 1, aq = 2, at = 0;
  std::string cuts_s = "axis", target_s = "window";
  auto* audit = sub("audit-dof", "unknowns versus independent fairness equations");
  audit->add_option("--d", ad)->required();
  audit->add_option("--k", ak)->required();
  audit->add_option("--q", aq)->required();
  audit->add_option("--t", at)->required();
  audit->add_option("--cuts", cuts_s)->check(CLI::IsMember({"axis", "arbitrary"}));
  audit->add_option("--target", target_s)->check(CLI::IsMember({"window", "fixed"}));
  audit->callback([&] {
    run = [&] {
      const auto a = audit_dof(ad, ak, aq, at, cuts_s == "axis" ? CutKind::Axis : CutKind::Arbitrary,
                               target_s == "window" ? Target::Window : Target::Fixed);
      Json rep = report("audit-dof");
      rep["d"] = a.d;
      rep["k"] = a.k;
      rep["q"] = a.q;
      rep["t"] = a.t;
      rep["cuts"] = cuts_s;
      rep["target"] = target_s;
      rep["regime"] = a.regime;
      rep["unknowns"] = a.unknowns;
      rep["color_equations"] = a.color_equations;
      rep["volume_equations"] = a.volume_equations;
      rep["dependent"] = a.dependent;
      rep["lhs"] = a.lhs;
      rep["rhs"] = a.rhs;
      rep["verdict"] = a.verdict ? "yes" : "no";
      write_output(g, rep);
      return kCompleted;
    };
  });

  // distinguish -------------------------------------------------------------
  std::string sigma_s, shape_s = "cube";
  bool audit_only = false;
  DistinguishOptions dist;
  auto* distc = sub("distinguish", "cube pairs with equal color measures");
  distc->add_option("--instance", instance, "grid document");
  distc->add_option("--sigma", sigma_s, "separation (default 1/n for a window [-n, n]^d)");
  distc->add_option("--starts", dist.starts, "numeric starts (d >= 2)");
  distc->add_flag("--audit", audit_only, "only report the color threshold");
  distc->add_option("--d", ad, "dimension (audit)");
  distc->add_option("--k", ak, "colors (audit)");
  distc->add_option("--shape", shape_s, "cube or cuboid (audit)")->check(CLI::IsMember({"cube", "cuboid"}));
  distc->callback([&] {
    run = [&] {
      Json rep = report("distinguish");
      if (audit_only) {
        const auto a = audit_distinguish(ad, ak, shape_s == "cube" ? Shape::Cube : Shape::Cuboid);
        rep["d"] = a.d;
        rep["k"] = a.k;
        rep["shape"] = shape_s;
        rep["unknowns"] = a.unknowns;
        rep["equations"] = a.equations;
        rep["threshold"] = a.threshold;
        rep["verdict"] = a.verdict ? "yes" : "no";
        write_output(g, rep);
        return kCompleted;
      }
      if (instance.empty()) throw InputError("--instance is required unless --audit is given");
      const GridColoring c = grid_from_json(read_json_file(instance));
      const Box window = c.domain();
      Rat sigma;
      if (!sigma_s.empty()) {
        sigma = rat_arg(sigma_s);
      } else {
        const Rat n = window.hi[0];
        if (n.get_den() != 1 || n <= 0 || window.lo[0] != -n)
          throw InputError("--sigma is required unless the domain is [-n, n]^d");
        sigma = 1 / n;
      }
      dist.seed = g.seed;
      dist.jobs = g.jobs;
      const auto r = find_equal_cubes(c, window, sigma, dist);
      rep["sigma"] = rat_json(sigma);
      rep["tried"] = r.tried;
      rep["exhaustive"] = r.exhaustive;
      if (r.pair) {
        if (!verify_equal_cubes(c, window, sigma, *r.pair)) throw std::logic_error("pair failed revalidation");
        rep["status"] = "found";
        rep["a"] = Json{{"corner", ratvec_json(r.pair->a.corner)}, {"side", rat_json(r.pair->a.side)}};
        rep["b"] = Json{{"corner", ratvec_json(r.pair->b.corner)}, {"side", rat_json(r.pair->b.side)}};
        rep["measures"] = ratvec_json(r.pair->measures);
        write_output(g, rep);
        return kCompleted;
      }
      rep["status"] = "not-found";
      write_output(g, rep);
      return r.exhaustive ? kAbsent : kBudget;
    };
  });

  // count-discrete ----------------------------------------------------------
  int cn = 2;
  bool hard = false;
  auto* count = sub("count-discrete", "exhaustive subset counts against the counting estimate");
  count->add_option("--n", cn)->required();
  count->add_option("--d", ad)->required();
  count->add_option("--q", aq)->required();
  count->add_option("--t", at)->required();
  count->add_flag("--hard", hard, "also search for a hard subset");
  count->callback([&] {
    run = [&] {
      const auto c = count_splittable_subsets(cn, ad, aq, at, g.jobs);
      const auto b = counting_bound_report(cn, ad, aq, at);
      Json rep = report("count-discrete");
      rep["n"] = cn;
      rep["d"] = ad;
      rep["q"] = aq;
      rep["t"] = at;
      rep["splittable"] = c.splittable;
      rep["divisible"] = c.divisible;
      rep["total"] = c.total.get_str();
      rep["cut_choices"] = b.cut_choices.get_str();
      rep["labelings"] = b.labelings.get_str();
      rep["max_sum"] = b.max_sum.get_str();
      rep["balanced_sum"] = b.balanced_sum.get_str();
      rep["estimate"] = b.estimate.get_str();
      rep["estimate_dominates"] = b.estimate >= c.splittable;
      if (hard) {
        const auto h = find_hard_subset(cn, ad, aq, g.jobs);
        if (h) {
          rep["hard_subset"] = to_json(h->necklace);
          rep["hard_min_cuts"] = h->min_cuts;
        }
        rep["hard_target"] = (ad * aq + 1) / 2;
      }
      write_output(g, rep);
      return kCompleted;
    };
  });

  // bench -------------------------------------------------------------------
  int trials = 20, bk = 2, bq = 2;
  std::vector<int> sides{4, 4};
  auto* bench = sub("bench", "random discrete instances: lift-split cuts against the exact minimum");
  bench->add_option("--trials", trials);
  bench->add_option("--sides", sides)->delimiter(',');
  bench->add_option("--k", bk);
  bench->add_option("--q", bq);
  bench->add_option("--log", log_path, "JSONL log, one record per trial");
  bench->callback([&] {
    run = [&] {
      const RandomStream master(g.seed);
      std::vector<Json> records;
      Json rows = Json::array();
      for (int i = 0; i < trials; ++i) {
        RandomStream rng = master.child(static_cast<std::uint64_t>(i));
        const DiscreteNecklace n = random_necklace(sides, bk, bq, rng);
        Timer timer{"trial " + std::to_string(i)};
        const Splitting s = split_via_lift(n, g.jobs);
        require_fair(n, s);
        const auto m = min_cuts_discrete_md(n, s.cut_count(), {}, g.jobs);
        Json rec{{"trial", i},
                 {"d", n.dim()},
                 {"k", bk},
                 {"q", bq},
                 {"cells", n.cell_count()},
                 {"lift_cuts", s.cut_count()},
                 {"bound", (2 * n.dim() - 1) * n.colors_present() * (bq - 1)},
                 {"min_cuts", m ? Json(m->t_min) : Json(nullptr)}};
        records.push_back(rec);
        rows.push_back(rec);
      }
      write_jsonl(log_path, records);
      Json rep = report("bench");
      rep["trials"] = trials;
      rep["rows"] = rows;
      write_output(g, rep);
      return kCompleted;
    };
  });

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kInputError;
  }
  try {
    return run();
  } catch (const InputError& e) {
    std::cerr << "input error: " << e.what() << "\n";
    return kInputError;
  } catch (const DomainError& e) {
    std::cerr << "domain error: " << e.what() << "\n";
    return kInputError;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return 1;
  }
}
