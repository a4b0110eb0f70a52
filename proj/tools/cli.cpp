#include "cli.hpp"

#include <atomic>
#include <cmath>
#include <exception>
#include <filesystem>
#include <fstream>
#include <limits>
#include <mutex>
#include <ostream>
#include <random>
#include <set>
#include <sstream>
#include <thread>

#include "vperc/badness.hpp"
#include "vperc/coupling.hpp"
#include "vperc/crude.hpp"
#include "vperc/io.hpp"
#include "vperc/sampling.hpp"

namespace vperc::cli {
namespace {

using nlohmann::json;
using Type = KeySpec::Type;

std::string fmt(double v) { return format_double(v); }

json default_value(const std::string& key) {
  static const json defaults = {
      {"experiment", nullptr},
      {"p", 0.5},
      {"p2", nullptr},
      {"s", 20.0},
      {"rho", 1.0},
      {"n", 100},
      {"delta", nullptr},
      {"delta1", nullptr},
      {"delta2", nullptr},
      {"seed", 1},
      {"output", "out"},
      {"confidence", 0.99},
      {"workers", 1},
      {"s_list", {15.0, 60.0}},
      {"p_grid", {0.0, 0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9, 1.0}},
      {"a", 1.5},
      {"b", 1.5},
      {"measure", "cells"},
      {"radii", {10.0, 20.0, 40.0}},
      {"torus", nullptr},
      {"block", 20.0},
      {"window", {0, 0, 2, 2}},
      {"mode", "supercritical"},
      {"rect_a", nullptr},
      {"orientation_a", "horizontal"},
      {"rect_b", nullptr},
      {"orientation_b", "vertical"},
      {"colour", "black"},
      {"k", 7},
      {"tree", nullptr},
      {"detector", "fast"},
      {"certify", nullptr},
      {"bootstrap", 400},
  };
  return defaults.at(key);
}

const KeySpec* find_key(const std::string& name) {
  for (const auto& k : config_keys()) {
    if (k.name == name) return &k;
  }
  return nullptr;
}

bool type_ok(const json& v, Type t) {
  if (v.is_null()) return true;
  switch (t) {
    case Type::number: return v.is_number();
    case Type::count: return v.is_number_unsigned() || (v.is_number_integer() && v.get<long long>() >= 0);
    case Type::seed: return v.is_number_unsigned() || (v.is_number_integer() && v.get<long long>() >= 0);
    case Type::string: return v.is_string();
    case Type::numbers:
      if (!v.is_array()) return false;
      for (const auto& e : v) {
        if (!e.is_number()) return false;
      }
      return true;
    case Type::integers:
      if (!v.is_array()) return false;
      for (const auto& e : v) {
        if (!e.is_number_integer()) return false;
      }
      return true;
  }
  return false;
}

const char* type_name(Type t) {
  switch (t) {
    case Type::number: return "a number";
    case Type::count: return "a non-negative integer";
    case Type::seed: return "an unsigned 64-bit integer";
    case Type::string: return "a string";
    case Type::numbers: return "a list of numbers";
    case Type::integers: return "a list of integers";
  }
  return "?";
}

Rect rect_from(const std::vector<double>& v, const char* key) {
  if (v.size() != 4) throw Error(ErrorKind::invalid_parameter, std::string(key) + " needs four numbers x1,y1,x2,y2");
  return Rect::checked(v[0], v[1], v[2], v[3]);
}

Orientation orientation_from(const std::string& s) {
  if (s == "horizontal" || s == "h") return Orientation::horizontal;
  if (s == "vertical" || s == "v") return Orientation::vertical;
  throw Error(ErrorKind::invalid_parameter, "orientation must be horizontal or vertical, got '" + s + "'");
}

Colour colour_from(const std::string& s) {
  if (s == "black") return Colour::black;
  if (s == "white") return Colour::white;
  throw Error(ErrorKind::invalid_parameter, "colour must be black or white, got '" + s + "'");
}

Table two_columns(std::string x, std::string y) { return Table{{std::move(x), std::move(y)}, {}}; }

void add_point(Table& t, double x, double y) { t.rows.push_back({fmt(x), fmt(y)}); }

/// Running mean of a 0/1 column.
Table running_mean(const Table& records, std::size_t column, const std::string& label, const std::string& one = "1") {
  Table t = two_columns("n", label);
  std::size_t k = 0;
  for (std::size_t i = 0; i < records.rows.size(); ++i) {
    k += records.rows[i][column] == one;
    add_point(t, double(i + 1), double(k) / double(i + 1));
  }
  return t;
}

double torus_side(const RunConfig& c) { return c.is_set("torus") ? c.number("torus") : c.number("s"); }

double default_delta(const RunConfig& c, double s) { return c.is_set("delta") ? c.number("delta") : 1.0 / std::sqrt(s); }

Artifacts run_sample(const RunConfig& c, bool tessellate) {
  const double side = torus_side(c);
  auto ps = std::make_shared<const PointSet>(sample_poisson(Domain::torus(side), 1.0, c.seed()));
  Artifacts a;
  a.summary = {{"points", points_header(*ps)}};
  std::ostringstream csv;
  Table plot = two_columns("x", "y");
  if (!tessellate) {
    write_points_csv(csv, *ps);
    for (const Vec2 v : ps->sites) add_point(plot, v.x, v.y);
    a.plots.push_back({"sample", plot});
  } else {
    const VoronoiGraph g = build_tessellation(ps);
    write_adjacency_csv(csv, g);
    a.summary["tessellation"] = {{"sites", g.size()}, {"edges", g.edges.size()}, {"triangles", g.triangles.size()},
                                 {"degeneracies", g.degeneracies}, {"max_empty_radius", g.max_empty_radius},
                                 {"margin", g.margin}};
    // Voronoi segments as point pairs separated by blank rows.
    for (const auto& e : g.edges) {
      add_point(plot, e.o1.x, e.o1.y);
      add_point(plot, e.o2.x, e.o2.y);
      plot.rows.push_back({});
    }
    a.plots.push_back({"tessellate", plot});
    if (g.degenerate()) a.warnings.push_back(std::to_string(g.degeneracies) + " co-circular ties broken symbolically");
  }
  a.csv = csv.str();
  return a;
}

Artifacts run_badness(const RunConfig& c) {
  const double side = torus_side(c);
  const double delta = default_delta(c, side);
  const auto config = torus_sample(side, c.number("p"), c.seed());
  BadnessOptions opt;
  const std::string det = c.string("detector");
  if (det == "fast") {
    opt.mode = BadnessMode::fast;
  } else if (det == "exhaustive") {
    opt.mode = BadnessMode::exhaustive;
  } else {
    throw Error(ErrorKind::invalid_parameter, "detector must be fast or exhaustive, got '" + det + "'");
  }
  const BadnessReport r = detect_badness(*config.graph, delta, opt);
  Artifacts a;
  json report;
  to_json(report, r);
  a.summary = {{"torus", side}, {"delta", delta}, {"detector", det}, {"sites", config.size()},
               {"bad_sites", r.bad_count()}, {"largest_component", r.largest_component()}, {"report", report}};
  Table t{{"kind", "a", "b", "c", "d", "cx", "cy", "radius", "slack"}, {}};
  for (const auto& [u, v] : r.close_pairs) t.rows.push_back({"pair", std::to_string(u), std::to_string(v), "", "", "", "", "", ""});
  Table plot = two_columns("cx", "cy");
  for (const auto& q : r.quadruples) {
    t.rows.push_back({"quadruple", std::to_string(q.sites[0]), std::to_string(q.sites[1]), std::to_string(q.sites[2]),
                      std::to_string(q.sites[3]), fmt(q.centre.x), fmt(q.centre.y), fmt(q.radius), fmt(q.slack)});
    add_point(plot, q.centre.x, q.centre.y);
  }
  a.csv = t.csv();
  a.plots.push_back({"badness", plot});
  return a;
}

Artifacts run_crude(const RunConfig& c, const RunOptions& opt) {
  const double side = torus_side(c);
  const double delta = c.is_set("delta") ? c.number("delta") : 0.2;
  const double p = c.number("p");
  const std::size_t n = c.count("n");
  squares_per_side(side, delta);
  struct Row {
    std::size_t bad, neutral, good;
    std::string text;
  };
  std::vector<Row> rows(n);
  opt.runner(n, [&](std::size_t i) {
    const auto g = crude_grid(torus_sample(side, p, sample_seed(c.seed(), i)), delta);
    rows[i] = {g.bad, g.neutral, g.good, i == 0 ? crude_to_text(g, sample_seed(c.seed(), i)) : std::string()};
  });
  Table t{{"index", "seed", "bad", "neutral", "good"}, {}};
  std::array<double, 3> total{};
  double squares = 0;
  for (std::size_t i = 0; i < n; ++i) {
    t.rows.push_back({std::to_string(i), std::to_string(sample_seed(c.seed(), i)), std::to_string(rows[i].bad),
                      std::to_string(rows[i].neutral), std::to_string(rows[i].good)});
    total[0] += double(rows[i].bad);
    total[1] += double(rows[i].neutral);
    total[2] += double(rows[i].good);
    squares += double(rows[i].bad + rows[i].neutral + rows[i].good);
  }
  const auto expected = crude_probabilities(delta * delta, p);
  Artifacts a;
  json states = json::array();
  Table plot = two_columns("expected", "empirical");
  bool within = true;
  const char* names[3] = {"bad", "neutral", "good"};
  for (int k = 0; k < 3; ++k) {
    const double f = total[k] / squares;
    const double sigma = std::sqrt(expected[k] * (1 - expected[k]) / squares);
    const double z = sigma > 0 ? (f - expected[k]) / sigma : 0.0;
    within = within && std::abs(z) <= 3;
    states.push_back({{"state", names[k]}, {"expected", expected[k]}, {"empirical", f}, {"sigma", sigma}, {"z", z}});
    add_point(plot, expected[k], f);
  }
  a.summary = {{"torus", side}, {"delta", delta}, {"p", p}, {"gamma", delta * delta}, {"samples", n},
               {"squares", squares}, {"states", states}, {"within_3sigma", within}};
  if (!within) a.warnings.push_back("crude state frequencies deviate from the expected law by more than 3 sigma");
  a.csv = t.csv();
  a.plots.push_back({"crude", plot});
  if (n > 0) a.extra.push_back({"crude_sample0.txt", rows[0].text});
  return a;
}

Artifacts run_couple(const RunConfig& c, const RunOptions& opt) {
  const double side = torus_side(c);
  const double delta = default_delta(c, side);
  const double p1 = c.number("p");
  const double p2 = c.is_set("p2") ? c.number("p2") : std::min(1.0, p1 + 0.05);
  double delta1 = 0;
  if (c.is_set("delta1")) {
    delta1 = c.number("delta1");
  } else {
    delta1 = side / std::ceil(side / std::pow(side, -0.1));
  }
  const double delta2 = c.is_set("delta2") ? c.number("delta2") : 0.0;
  GoodPathOptions gopt;
  if (c.is_set("certify")) gopt.certify = static_cast<long>(c.count("certify"));
  const std::size_t n = c.count("n");
  std::vector<GoodPathStats> stats(n);
  opt.runner(n, [&](std::size_t i) {
    const auto coupled = coupled_sample(Domain::torus(side), p1, p2, delta1, sample_seed(c.seed(), i), delta2);
    stats[i] = good_path_check(coupled, delta, gopt);
  });
  Table t{{"index", "seed", "pairs", "successes", "endpoint_bad", "polylines", "violations"}, {}};
  GoodPathStats sum;
  sum.min_certified = std::numeric_limits<double>::infinity();
  Table plot = two_columns("index", "fraction");
  for (std::size_t i = 0; i < n; ++i) {
    const auto& s = stats[i];
    t.rows.push_back({std::to_string(i), std::to_string(sample_seed(c.seed(), i)), std::to_string(s.pairs),
                      std::to_string(s.successes), std::to_string(s.endpoint_bad), std::to_string(s.polylines),
                      std::to_string(s.violations)});
    sum.pairs += s.pairs;
    sum.successes += s.successes;
    sum.endpoint_bad += s.endpoint_bad;
    sum.polylines += s.polylines;
    sum.violations += s.violations;
    sum.hops_max = std::max(sum.hops_max, s.hops_max);
    if (s.polylines) sum.min_certified = std::min(sum.min_certified, s.min_certified);
    add_point(plot, double(i), s.fraction);
  }
  Artifacts a;
  a.summary = {{"torus", side},
               {"p1", p1},
               {"p2", p2},
               {"delta", delta},
               {"delta1", delta1},
               {"delta2", delta2 > 0 ? delta2 : std::pow(side, -0.01)},
               {"pairs", sum.pairs},
               {"successes", sum.successes},
               {"fraction", sum.pairs ? double(sum.successes) / double(sum.pairs) : 0.0},
               {"endpoint_bad", sum.endpoint_bad},
               {"hops_max", sum.hops_max},
               {"polylines", sum.polylines},
               {"violations", sum.violations},
               {"min_certified", sum.polylines ? json(sum.min_certified) : json(nullptr)}};
  if (sum.violations) a.warnings.push_back(std::to_string(sum.violations) + " certification violations");
  a.csv = t.csv();
  a.plots.push_back({"couple", plot});
  return a;
}

LatticeGraph random_lattice_tree(std::size_t n, std::uint64_t seed) {
  Rng rng(seed);
  LatticeGraph g;
  g.vertices.push_back({0, 0});
  std::set<std::array<int, 2>> used{{0, 0}};
  const int dx[4] = {1, -1, 0, 0}, dy[4] = {0, 0, 1, -1};
  while (g.vertices.size() < n) {
    const std::size_t from = rng() % g.vertices.size();
    const int d = static_cast<int>(rng() % 4);
    const std::array<int, 2> v{g.vertices[from][0] + dx[d], g.vertices[from][1] + dy[d]};
    if (!used.insert(v).second) continue;
    g.edges.push_back({from, g.vertices.size()});
    g.vertices.push_back(v);
  }
  return g;
}

LatticeGraph read_lattice_graph(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::io, "cannot read " + path);
  json j;
  try {
    in >> j;
    LatticeGraph g;
    for (const auto& v : j.at("vertices")) g.vertices.push_back({v.at(0).get<int>(), v.at(1).get<int>()});
    for (const auto& e : j.at("edges")) g.edges.push_back({e.at(0).get<std::size_t>(), e.at(1).get<std::size_t>()});
    return g;
  } catch (const json::exception& e) {
    throw Error(ErrorKind::io, path + ": expected {\"vertices\": [[x,y],...], \"edges\": [[i,j],...]}: " + e.what());
  }
}

Artifacts run_separated(const RunConfig& c) {
  const int k = static_cast<int>(c.count("k"));
  const LatticeGraph g = c.is_set("tree") ? read_lattice_graph(c.string("tree")) : random_lattice_tree(c.count("n"), c.seed());
  const auto pick = separated_subset(g, k);
  Artifacts a;
  Table t{{"index", "x", "y"}, {}};
  Table plot = two_columns("x", "y");
  for (const std::size_t i : pick) {
    t.rows.push_back({std::to_string(i), std::to_string(g.vertices[i][0]), std::to_string(g.vertices[i][1])});
    add_point(plot, g.vertices[i][0], g.vertices[i][1]);
  }
  a.summary = {{"vertices", g.vertices.size()}, {"k", k}, {"size", pick.size()},
               {"bound", separated_bound(g.vertices.size(), k)}, {"source", c.is_set("tree") ? "file" : "random"}};
  a.csv = t.csv();
  a.plots.push_back({"separated", plot});
  return a;
}

Artifacts run_experiment(const RunConfig& c, const RunOptions& opt) {
  const std::string e = c.experiment();
  const double p = c.number("p");
  const double s = c.number("s");
  const std::size_t n = c.count("n");
  const std::uint64_t seed = c.seed();
  Artifacts a;
  if (e == "sample") return run_sample(c, false);
  if (e == "tessellate") return run_sample(c, true);
  if (e == "badness") return run_badness(c);
  if (e == "crude") return run_crude(c, opt);
  if (e == "couple") return run_couple(c, opt);
  if (e == "separated") return run_separated(c);
  if (e == "cross") {
    const auto r = estimate_crossing(p, c.number("rho"), s, n, seed, opt);
    a.summary = r.summary();
    a.csv = r.records.csv();
    a.plots.push_back({"cross", running_mean(r.records, 2, "mean")});
  } else if (e == "duality") {
    const auto r = duality_run(p, s, n, seed, opt);
    a.summary = r.summary();
    a.csv = r.records.csv();
    a.plots.push_back({"duality", running_mean(r.records, 1, "black_h", "black_h")});
    if (r.degenerate) a.warnings.push_back(std::to_string(r.degenerate) + " degenerate duality outcomes");
  } else if (e == "compose") {
    const auto r = composition_check(p, c.number("a"), c.number("b"), s, n, seed, opt);
    a.summary = r.summary();
    a.csv = r.records.csv();
    Table plot = two_columns("rho", "f");
    add_point(plot, 1.0, r.f_one.mean);
    add_point(plot, r.a, r.f_a.mean);
    if (r.b != r.a) add_point(plot, r.b, r.f_b.mean);
    add_point(plot, r.a + r.b - 1, r.f_sum.mean);
    a.plots.push_back({"compose", plot});
    if (r.violation) a.warnings.push_back("composition inequality violated beyond 3 sigma");
  } else if (e == "correlate") {
    const Rect ra = c.is_set("rect_a") ? rect_from(c.numbers("rect_a"), "rect_a") : Rect{0, 0, 2 * s, s};
    const Rect rb = c.is_set("rect_b") ? rect_from(c.numbers("rect_b"), "rect_b") : Rect{s / 2, 0, 1.5 * s, 2 * s};
    const Colour col = colour_from(c.string("colour"));
    const auto r = correlation_check(p, {ra, orientation_from(c.string("orientation_a")), col},
                                     {rb, orientation_from(c.string("orientation_b")), col}, n, seed,
                                     c.is_set("torus") ? c.number("torus") : 0.0, opt);
    a.summary = r.summary();
    a.summary["rect_a"] = {ra.x1, ra.y1, ra.x2, ra.y2};
    a.summary["rect_b"] = {rb.x1, rb.y1, rb.x2, rb.y2};
    a.csv = r.records.csv();
    Table plot = two_columns("n", "difference");
    double ka = 0, kb = 0, kab = 0;
    for (std::size_t i = 0; i < r.records.rows.size(); ++i) {
      const bool x = r.records.rows[i][2] == "1", y = r.records.rows[i][3] == "1";
      ka += x;
      kb += y;
      kab += x && y;
      const double m = double(i + 1);
      add_point(plot, m, kab / m - (ka / m) * (kb / m));
    }
    a.plots.push_back({"correlate", plot});
  } else if (e == "scan") {
    const auto r = threshold_scan(c.numbers("s_list"), c.numbers("p_grid"), c.number("rho"), n, seed, opt,
                                  c.count("bootstrap"));
    a.summary = r.summary();
    a.csv = r.records.csv();
    for (const auto& curve : r.curves) {
      Table plot = two_columns("p", "smoothed");
      for (std::size_t i = 0; i < r.p_grid.size(); ++i) add_point(plot, r.p_grid[i], curve.smoothed[i]);
      a.plots.push_back({"scan_s" + fmt(curve.s), plot});
    }
    Table widths = two_columns("s", "width");
    for (const auto& curve : r.curves) add_point(widths, curve.s, curve.width);
    a.plots.push_back({"scan_widths", widths});
    a.warnings = r.warnings;
  } else if (e == "renorm") {
    const std::string m = c.string("mode");
    RenormMode mode;
    if (m == "supercritical" || m == "bond-supercritical") {
      mode = RenormMode::bond_supercritical;
    } else if (m == "subcritical" || m == "site-subcritical") {
      mode = RenormMode::site_subcritical;
    } else {
      throw Error(ErrorKind::invalid_parameter, "mode must be supercritical or subcritical, got '" + m + "'");
    }
    const auto w = c.integers("window");
    if (w.size() != 4) throw Error(ErrorKind::invalid_parameter, "window needs four integers x0,y0,x1,y1");
    const auto r = renorm_study(mode, p, c.number("block"), LatticeWindow{w[0], w[1], w[2], w[3]}, n, seed, opt);
    a.summary = r.summary();
    a.csv = r.records.csv();
    Table plot = two_columns("unit", "open_fraction");
    if (n > 0) {
      const std::size_t per = r.records.rows.size() / n;
      for (std::size_t u = 0; u < per; ++u) {
        double k = 0;
        for (std::size_t i = 0; i < n; ++i) k += r.records.rows[i * per + u][7] == "1";
        add_point(plot, double(u), k / double(n));
      }
    }
    a.plots.push_back({"renorm", plot});
  } else if (e == "tail") {
    const auto r = tail_distribution(p, s, n, size_measure_from_string(c.string("measure")), seed, opt);
    a.summary = r.summary();
    a.csv = r.records.csv();
    Table plot = two_columns("n", "tail");
    for (std::size_t i = 0; i < r.thresholds.size(); ++i) add_point(plot, r.thresholds[i], r.tail[i]);
    a.plots.push_back({"tail", plot});
    a.warnings = r.warnings;
  } else if (e == "annulus") {
    const auto r = annulus_scan(p, c.numbers("s_list"), n, seed, opt);
    a.summary = r.summary();
    a.csv = r.records.csv();
    Table plot = two_columns("s", "cycle");
    for (const auto& pt : r.points) add_point(plot, pt.s, pt.cycle.mean);
    a.plots.push_back({"annulus", plot});
  } else if (e == "reach") {
    const auto r = reach_scan(p, c.numbers("radii"), c.is_set("torus") ? c.number("torus") : 90.0, n, seed, opt);
    a.summary = r.summary();
    a.csv = r.records.csv();
    Table plot = two_columns("R", "reach");
    for (std::size_t i = 0; i < r.radii.size(); ++i) add_point(plot, r.radii[i], r.reach[i].mean);
    a.plots.push_back({"reach", plot});
  } else {
    throw Error(ErrorKind::invalid_parameter, "unknown experiment '" + e + "'");
  }
  return a;
}

std::string plot_text(const RunConfig& c, const Table& t) {
  std::ostringstream out;
  out << "# " << kArtifactVersion << ' ' << c.experiment() << " seed=" << c.seed() << '\n';
  out << "# config " << c.values().dump() << '\n';
  out << "# " << t.header.at(0) << ' ' << t.header.at(1) << '\n';
  for (const auto& r : t.rows) {
    if (r.empty()) {
      out << '\n';
    } else {
      out << r[0] << ' ' << r[1] << '\n';
    }
  }
  return out.str();
}

}  // namespace

const std::vector<std::string>& experiment_names() {
  static const std::vector<std::string> names{"sample", "tessellate", "cross",   "duality", "badness",
                                              "crude",  "couple",     "scan",    "renorm",  "tail",
                                              "annulus", "separated", "compose", "correlate", "reach"};
  return names;
}

const std::vector<KeySpec>& config_keys() {
  static const std::vector<KeySpec> keys{
      {"experiment", Type::string, "experiment to run"},
      {"p", Type::number, "black probability"},
      {"p2", Type::number, "second probability of the coupling (default p + 0.05)"},
      {"s", Type::number, "length scale (rectangle height, torus side, ...)"},
      {"rho", Type::number, "rectangle aspect ratio"},
      {"n", Type::count, "number of samples"},
      {"delta", Type::number, "robustness parameter (default s^-1/2; crude: 0.2)"},
      {"delta1", Type::number, "coupling square side (default near s^-1/10, dividing s)"},
      {"delta2", Type::number, "coupling closeness (default s^-1/100)"},
      {"seed", Type::seed, "master seed"},
      {"output", Type::string, "output directory"},
      {"confidence", Type::number, "confidence level of the intervals"},
      {"workers", Type::count, "worker threads"},
      {"s_list", Type::numbers, "scales for scan and annulus"},
      {"p_grid", Type::numbers, "probability grid for scan"},
      {"a", Type::number, "composition aspect a"},
      {"b", Type::number, "composition aspect b"},
      {"measure", Type::string, "cluster size measure: cells, area or diameter"},
      {"radii", Type::numbers, "reach distances"},
      {"torus", Type::number, "torus side (where not implied by s)"},
      {"block", Type::number, "renormalisation block scale"},
      {"window", Type::integers, "renormalisation window x0,y0,x1,y1"},
      {"mode", Type::string, "renormalisation: supercritical or subcritical"},
      {"rect_a", Type::numbers, "first correlation rectangle x1,y1,x2,y2"},
      {"orientation_a", Type::string, "first correlation crossing direction"},
      {"rect_b", Type::numbers, "second correlation rectangle x1,y1,x2,y2"},
      {"orientation_b", Type::string, "second correlation crossing direction"},
      {"colour", Type::string, "crossing colour for correlate"},
      {"k", Type::count, "separation for separated"},
      {"tree", Type::string, "lattice graph JSON for separated (default: random tree of n vertices)"},
      {"detector", Type::string, "badness detector: fast or exhaustive"},
      {"certify", Type::count, "hop polylines to certify per coupled sample (default all)"},
      {"bootstrap", Type::count, "bootstrap resamples for scan widths"},
  };
  return keys;
}

RunConfig RunConfig::from_json(const json& j) {
  if (!j.is_object()) throw Error(ErrorKind::invalid_parameter, "config must be a JSON object");
  std::vector<std::string> problems;
  for (const auto& [key, value] : j.items()) {
    const KeySpec* spec = find_key(key);
    if (!spec) {
      problems.push_back(key + ": unknown key");
    } else if (!type_ok(value, spec->type)) {
      problems.push_back(key + ": expected " + type_name(spec->type));
    }
  }
  if (!j.contains("experiment") || j["experiment"].is_null()) {
    problems.push_back("experiment: missing");
  } else if (j["experiment"].is_string()) {
    const auto& names = experiment_names();
    const std::string e = j["experiment"].get<std::string>();
    if (std::find(names.begin(), names.end(), e) == names.end()) problems.push_back("experiment: unknown experiment '" + e + "'");
  }
  if (!problems.empty()) {
    std::string msg = "invalid configuration:";
    for (const auto& p : problems) msg += "\n  " + p;
    throw Error(ErrorKind::invalid_parameter, msg);
  }
  RunConfig c;
  c.values_ = json::object();
  for (const auto& k : config_keys()) c.values_[k.name] = j.contains(k.name) ? j[k.name] : default_value(k.name);
  return c;
}

double RunConfig::number(const std::string& key) const { return values_.at(key).get<double>(); }
std::size_t RunConfig::count(const std::string& key) const { return values_.at(key).get<std::size_t>(); }
std::uint64_t RunConfig::seed() const { return values_.at("seed").get<std::uint64_t>(); }
std::string RunConfig::string(const std::string& key) const { return values_.at(key).get<std::string>(); }
std::vector<double> RunConfig::numbers(const std::string& key) const { return values_.at(key).get<std::vector<double>>(); }
std::vector<int> RunConfig::integers(const std::string& key) const { return values_.at(key).get<std::vector<int>>(); }
bool RunConfig::is_set(const std::string& key) const { return !values_.at(key).is_null(); }

json parse_flag_value(const std::string& key, const std::string& text) {
  const KeySpec* spec = find_key(key);
  if (!spec) throw Error(ErrorKind::invalid_parameter, key + ": unknown key");
  const auto bad = [&] { return Error(ErrorKind::invalid_parameter, key + ": expected " + type_name(spec->type) + ", got '" + text + "'"); };
  const auto number = [&](const std::string& t) {
    std::size_t used = 0;
    double v = 0;
    try {
      v = std::stod(t, &used);
    } catch (const std::exception&) {
      throw bad();
    }
    if (used != t.size()) throw bad();
    return v;
  };
  const auto integer = [&](const std::string& t) {
    std::size_t used = 0;
    long long v = 0;
    try {
      v = std::stoll(t, &used);
    } catch (const std::exception&) {
      throw bad();
    }
    if (used != t.size()) throw bad();
    return v;
  };
  const auto split = [&] {
    std::vector<std::string> parts;
    std::stringstream ss(text);
    for (std::string part; std::getline(ss, part, ',');) parts.push_back(part);
    return parts;
  };
  switch (spec->type) {
    case Type::number: return number(text);
    case Type::count: {
      const long long v = integer(text);
      if (v < 0) throw bad();
      return static_cast<std::uint64_t>(v);
    }
    case Type::seed: {
      std::size_t used = 0;
      try {
        if (!text.empty() && text[0] == '-') throw bad();
        const unsigned long long v = std::stoull(text, &used);
        if (used != text.size()) throw bad();
        return static_cast<std::uint64_t>(v);
      } catch (const Error&) {
        throw;
      } catch (const std::exception&) {
        throw bad();
      }
    }
    case Type::string: return text;
    case Type::numbers: {
      json out = json::array();
      for (const auto& part : split()) out.push_back(number(part));
      return out;
    }
    case Type::integers: {
      json out = json::array();
      for (const auto& part : split()) out.push_back(integer(part));
      return out;
    }
  }
  throw bad();
}

json merge_layers(const json& file, const char* env_seed, const json& flags) {
  json out = file.is_null() ? json::object() : file;
  if (!out.is_object()) throw Error(ErrorKind::invalid_parameter, "config must be a JSON object");
  if (env_seed && *env_seed) out["seed"] = parse_flag_value("seed", env_seed);
  for (const auto& [k, v] : flags.items()) out[k] = v;
  return out;
}

Runner pool_runner(unsigned workers) {
  if (workers <= 1) return serial_runner();
  return [workers](std::size_t n, const std::function<void(std::size_t)>& task) {
    std::atomic<std::size_t> next{0};
    std::mutex guard;
    std::size_t failed_at = std::numeric_limits<std::size_t>::max();
    std::exception_ptr failure;
    const auto work = [&] {
      for (std::size_t i = next++; i < n; i = next++) {
        try {
          task(i);
        } catch (...) {
          // Keep the failure of the lowest index so errors are reproducible.
          std::lock_guard<std::mutex> lock(guard);
          if (i < failed_at) {
            failed_at = i;
            failure = std::current_exception();
          }
        }
      }
    };
    std::vector<std::thread> threads;
    const std::size_t count = std::min<std::size_t>(workers, n);
    for (std::size_t t = 0; t < count; ++t) threads.emplace_back(work);
    for (auto& t : threads) t.join();
    if (failure) std::rethrow_exception(failure);
  };
}

Artifacts execute(const RunConfig& config) {
  RunOptions opt;
  opt.confidence = config.number("confidence");
  opt.runner = pool_runner(static_cast<unsigned>(config.count("workers")));
  Artifacts a = run_experiment(config, opt);
  json summary = a.summary;
  a.summary = {{"version", kArtifactVersion},
               {"experiment", config.experiment()},
               {"seed", config.seed()},
               {"config", config.values()},
               {"results", summary},
               {"warnings", a.warnings}};
  return a;
}

std::vector<std::string> emit(const RunConfig& config, const Artifacts& artifacts) {
  namespace fs = std::filesystem;
  const fs::path dir(config.string("output"));
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw Error(ErrorKind::io, "cannot create output directory " + dir.string() + ": " + ec.message());
  const std::string stem = config.experiment();
  std::vector<std::string> written;
  const auto put = [&](const std::string& name, const std::string& content) {
    const fs::path path = dir / name;
    atomic_write(path.string(), content);
    written.push_back(path.string());
  };
  put(stem + ".csv", artifacts.csv);
  json summary = artifacts.summary;
  json files = json::array({stem + ".csv"});
  for (const auto& [name, table] : artifacts.plots) files.push_back(name + ".dat");
  for (const auto& [name, content] : artifacts.extra) files.push_back(name);
  summary["artifacts"] = files;
  put(stem + ".json", summary.dump(2) + "\n");
  for (const auto& [name, table] : artifacts.plots) put(name + ".dat", plot_text(config, table));
  for (const auto& [name, content] : artifacts.extra) put(name, content);
  return written;
}

int run(const RunConfig& config, std::ostream& log) {
  try {
    const Artifacts a = execute(config);
    for (const auto& path : emit(config, a)) log << "wrote " << path << '\n';
    for (const auto& w : a.warnings) log << "warning: " << w << '\n';
    return a.warnings.empty() ? 0 : 2;
  } catch (const std::exception& e) {
    log << "error: " << e.what() << '\n';
    return 1;
  }
}

}  // namespace vperc::cli
