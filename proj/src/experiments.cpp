#include "vperc/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <memory>
#include <sstream>

#include "vperc/clusters.hpp"
#include "vperc/density.hpp"
#include "vperc/io.hpp"
#include "vperc/sampling.hpp"
#include "vperc/union_find.hpp"

namespace vperc {
namespace {

using nlohmann::json;

std::string fmt(double v) { return format_double(v); }
std::string fmt(std::uint64_t v) { return std::to_string(v); }

json interval_json(const Interval& i) { return json::array({i.lo, i.hi}); }

json fit_json(const LinearFit& f) {
  return {{"slope", f.slope}, {"intercept", f.intercept}, {"r2", f.r2}, {"slope_se", f.slope_se},
          {"points", f.points}};
}

json correlation_json(const Correlation& c) { return {{"r", c.r}, {"se", c.se}, {"pairs", c.pairs}}; }

void require_positive(double v, const char* what) {
  if (!(v > 0) || !std::isfinite(v)) throw Error(ErrorKind::invalid_parameter, std::string(what) + " must be positive");
}

void require_probability(double p) {
  if (!(p >= 0.0 && p <= 1.0)) throw Error(ErrorKind::invalid_parameter, "p must lie in [0,1]");
}

void require_samples(std::size_t n) {
  if (n == 0) throw Error(ErrorKind::invalid_parameter, "n must be at least 1");
}

template <class T>
std::vector<T> run_indexed(const RunOptions& opt, std::size_t n, const std::function<T(std::size_t)>& f) {
  std::vector<T> out(n);
  opt.runner(n, [&](std::size_t i) { out[i] = f(i); });
  return out;
}

// Bond-mode block geometry: the long rectangle of an edge and its two end squares.
struct BondBlock {
  Rect rect, s1, s2;
  Orientation along, across;
};

BondBlock bond_block(int x, int y, bool vertical, double s) {
  const double ox = 2 * s * x, oy = 2 * s * y;
  if (!vertical) {
    return {Rect{ox, oy, ox + 3 * s, oy + s}, Rect{ox, oy, ox + s, oy + s}, Rect{ox + 2 * s, oy, ox + 3 * s, oy + s},
            Orientation::horizontal, Orientation::vertical};
  }
  return {Rect{ox, oy, ox + s, oy + 3 * s}, Rect{ox, oy, ox + s, oy + s}, Rect{ox, oy + 2 * s, ox + s, oy + 3 * s},
          Orientation::vertical, Orientation::horizontal};
}

std::vector<RenormUnit> bond_units(const LatticeWindow& w) {
  std::vector<RenormUnit> out;
  for (int y = w.y0; y <= w.y1; ++y) {
    for (int x = w.x0; x <= w.x1; ++x) {
      if (x < w.x1) out.push_back({x, y, false, {}, false, false, false});
      if (y < w.y1) out.push_back({x, y, true, {}, false, false, false});
    }
  }
  return out;
}

bool share_vertex(const RenormUnit& a, const RenormUnit& b) {
  const auto ends = [](const RenormUnit& u) {
    return std::array<std::array<int, 2>, 2>{{{u.x, u.y}, {u.x + (u.vertical ? 0 : 1), u.y + (u.vertical ? 1 : 0)}}};
  };
  for (const auto& p : ends(a)) {
    for (const auto& q : ends(b)) {
      if (p == q) return true;
    }
  }
  return false;
}

void validate_window(const LatticeWindow& w, RenormMode mode) {
  if (w.x1 < w.x0 || w.y1 < w.y0) throw Error(ErrorKind::invalid_parameter, "window needs x0<=x1 and y0<=y1");
  if (mode == RenormMode::bond_supercritical && w.width() < 2 && w.height() < 2) {
    throw Error(ErrorKind::invalid_parameter, "bond window needs at least one edge");
  }
}

// Width of the p-interval on which the curve rises from 1/4 to 3/4. When both
// levels are first reached at the same grid point the rise is unresolved and
// the enclosing grid interval is returned.
struct Width {
  double p25, p75, width;
  bool limited;
};

Width rise_width(const std::vector<double>& p, const std::vector<double>& f) {
  const auto first_at = [&](double level) {
    std::size_t i = 0;
    while (i < f.size() && f[i] < level) ++i;
    return i;
  };
  const std::size_t i25 = first_at(0.25), i75 = first_at(0.75);
  if (i25 == i75) {
    const std::size_t hi = std::min(i25, p.size() - 1);
    const std::size_t lo = hi == 0 ? 0 : hi - 1;
    return {p[lo], p[hi], p[hi] - p[lo], true};
  }
  const double a = crossing_point(p, f, 0.25), b = crossing_point(p, f, 0.75);
  return {a, b, b - a, false};
}

std::vector<double> unit_weights(std::size_t n) { return std::vector<double>(n, 1.0); }

}  // namespace

Runner serial_runner() {
  return [](std::size_t n, const std::function<void(std::size_t)>& task) {
    for (std::size_t i = 0; i < n; ++i) task(i);
  };
}

std::string Table::csv() const {
  std::ostringstream out;
  const auto line = [&](const std::vector<std::string>& cells) {
    for (std::size_t i = 0; i < cells.size(); ++i) out << (i ? "," : "") << cells[i];
    out << '\n';
  };
  line(header);
  for (const auto& r : rows) line(r);
  return out.str();
}

Estimate Estimate::from_counts(std::size_t k, std::size_t n, std::uint64_t seed, double confidence) {
  Estimate e;
  e.successes = k;
  e.n = n;
  e.seed = seed;
  e.confidence = confidence;
  e.mean = n ? static_cast<double>(k) / static_cast<double>(n) : 0.0;
  e.ci = wilson(k, n, confidence);
  return e;
}

json Estimate::to_json() const {
  return {{"mean", mean}, {"ci", interval_json(ci)}, {"successes", successes}, {"n", n}, {"seed", seed},
          {"confidence", confidence}};
}

ColouredConfiguration torus_sample(double side, double p, std::uint64_t seed) {
  auto ps = std::make_shared<const PointSet>(sample_poisson(Domain::torus(side), 1.0, child_seed(seed, 0)));
  auto g = std::make_shared<const VoronoiGraph>(build_tessellation(ps));
  return colour_sites(g, p, child_seed(seed, 1));
}

// ------------------------------------------------------------------ crossings

CrossingEstimate estimate_crossing(double p, double rho, double s, std::size_t n, std::uint64_t seed,
                                   const RunOptions& opt) {
  require_probability(p);
  if (!(rho >= 1.0) || !std::isfinite(rho)) throw Error(ErrorKind::invalid_parameter, "rho must be >= 1");
  require_positive(s, "s");
  require_samples(n);
  CrossingEstimate out{p, rho, s, rho * s / 0.9, {}, {{"index", "seed", "crossed"}, {}}};
  const Rect rect{0, 0, rho * s, s};
  const auto hits = run_indexed<char>(opt, n, [&](std::size_t i) -> char {
    const auto config = torus_sample(out.torus, p, sample_seed(seed, i));
    return crossing(config, rect, Orientation::horizontal, Colour::black).verdict;
  });
  std::size_t k = 0;
  for (std::size_t i = 0; i < n; ++i) {
    k += hits[i];
    out.records.rows.push_back({std::to_string(i), fmt(sample_seed(seed, i)), std::to_string(int(hits[i]))});
  }
  out.estimate = Estimate::from_counts(k, n, seed, opt.confidence);
  return out;
}

json CrossingEstimate::summary() const {
  return {{"experiment", "cross"}, {"p", p}, {"rho", rho}, {"s", s}, {"torus", torus},
          {"estimate", estimate.to_json()}};
}

DualityRun duality_run(double p, double s, std::size_t n, std::uint64_t seed, const RunOptions& opt) {
  require_probability(p);
  require_positive(s, "s");
  require_samples(n);
  DualityRun out;
  out.p = p;
  out.s = s;
  out.torus = s / 0.9;
  out.records.header = {"seed", "verdict"};
  const Rect square{0, 0, s, s};
  const auto verdicts = run_indexed<DualityOutcome>(opt, n, [&](std::size_t i) {
    return duality_check(torus_sample(out.torus, p, sample_seed(seed, i)), square);
  });
  for (std::size_t i = 0; i < n; ++i) {
    switch (verdicts[i]) {
      case DualityOutcome::black_h: ++out.black_h; break;
      case DualityOutcome::white_v: ++out.white_v; break;
      case DualityOutcome::degenerate: ++out.degenerate; break;
    }
    out.records.rows.push_back({fmt(sample_seed(seed, i)), to_string(verdicts[i])});
  }
  out.horizontal = Estimate::from_counts(out.black_h, n, seed, opt.confidence);
  return out;
}

json DualityRun::summary() const {
  return {{"experiment", "duality"}, {"p", p}, {"s", s}, {"torus", torus}, {"black_h", black_h},
          {"white_v", white_v}, {"degenerate", degenerate}, {"horizontal", horizontal.to_json()}};
}

CompositionReport composition_check(double p, double a, double b, double s, std::size_t n, std::uint64_t seed,
                                    const RunOptions& opt) {
  require_probability(p);
  require_positive(s, "s");
  require_samples(n);
  if (!(a >= 1.0) || !(b >= 1.0) || !std::isfinite(a + b)) {
    throw Error(ErrorKind::invalid_parameter, "composition needs a, b >= 1");
  }
  CompositionReport out;
  out.p = p;
  out.a = a;
  out.b = b;
  out.s = s;
  out.torus = (a + b - 1) * s / 0.9;
  const std::array<double, 4> rhos{a + b - 1, a, b, 1.0};
  out.records.header = {"index", "seed", "f_sum", "f_a", "f_b", "f_one"};
  const auto hits = run_indexed<std::array<double, 4>>(opt, n, [&](std::size_t i) {
    const auto config = torus_sample(out.torus, p, sample_seed(seed, i));
    std::array<double, 4> h{};
    for (int k = 0; k < 4; ++k) {
      h[k] = crossing(config, Rect{0, 0, rhos[k] * s, s}, Orientation::horizontal, Colour::black).verdict;
    }
    return h;
  });
  std::array<std::size_t, 4> counts{};
  for (std::size_t i = 0; i < n; ++i) {
    std::vector<std::string> row{std::to_string(i), fmt(sample_seed(seed, i))};
    for (int k = 0; k < 4; ++k) {
      counts[k] += hits[i][k] > 0;
      row.push_back(hits[i][k] > 0 ? "1" : "0");
    }
    out.records.rows.push_back(std::move(row));
  }
  std::array<Estimate*, 4> est{&out.f_sum, &out.f_a, &out.f_b, &out.f_one};
  std::array<double, 4> m{};
  for (int k = 0; k < 4; ++k) {
    *est[k] = Estimate::from_counts(counts[k], n, seed, opt.confidence);
    m[k] = est[k]->mean;
  }
  out.margin = m[0] - m[1] * m[2] * m[3];
  // Delta method on the per-sample linearisation of the margin.
  const std::array<double, 4> g{1.0, -m[2] * m[3], -m[1] * m[3], -m[1] * m[2]};
  std::vector<double> lin(n);
  for (std::size_t i = 0; i < n; ++i) {
    for (int k = 0; k < 4; ++k) lin[i] += g[k] * (hits[i][k] - m[k]);
  }
  double var = 0;
  for (const double v : lin) var += v * v;
  out.sigma = std::sqrt(var / static_cast<double>(n)) / std::sqrt(static_cast<double>(n));
  out.violation = out.margin < -3.0 * out.sigma;
  return out;
}

json CompositionReport::summary() const {
  return {{"experiment", "compose"}, {"p", p}, {"a", a}, {"b", b}, {"s", s}, {"torus", torus},
          {"f_sum", f_sum.to_json()}, {"f_a", f_a.to_json()}, {"f_b", f_b.to_json()}, {"f_one", f_one.to_json()},
          {"margin", margin}, {"sigma", sigma}, {"violation", violation}};
}

CorrelationReport correlation_check(double p, const CrossingEvent& a, const CrossingEvent& b, std::size_t n,
                                    std::uint64_t seed, double torus, const RunOptions& opt) {
  require_probability(p);
  require_samples(n);
  if (a.colour != b.colour) {
    throw Error(ErrorKind::invalid_parameter, "events of different colours are not increasing in the same direction");
  }
  const Rect box{std::min(a.rect.x1, b.rect.x1), std::min(a.rect.y1, b.rect.y1), std::max(a.rect.x2, b.rect.x2),
                 std::max(a.rect.y2, b.rect.y2)};
  if (torus <= 0) torus = std::max(box.width(), box.height()) / 0.9;
  CorrelationReport out;
  out.p = p;
  out.torus = torus;
  const Domain d = Domain::torus(torus);
  require_admissible(d, a.rect);
  require_admissible(d, b.rect);
  out.records.header = {"index", "seed", "a", "b"};
  const auto hits = run_indexed<std::array<double, 2>>(opt, n, [&](std::size_t i) {
    const auto config = torus_sample(torus, p, sample_seed(seed, i));
    return std::array<double, 2>{double(crossing(config, a.rect, a.orientation, a.colour).verdict),
                                 double(crossing(config, b.rect, b.orientation, b.colour).verdict)};
  });
  std::size_t ka = 0, kb = 0, kab = 0;
  for (std::size_t i = 0; i < n; ++i) {
    ka += hits[i][0] > 0;
    kb += hits[i][1] > 0;
    kab += hits[i][0] > 0 && hits[i][1] > 0;
    out.records.rows.push_back({std::to_string(i), fmt(sample_seed(seed, i)), hits[i][0] > 0 ? "1" : "0",
                                hits[i][1] > 0 ? "1" : "0"});
  }
  out.a = Estimate::from_counts(ka, n, seed, opt.confidence);
  out.b = Estimate::from_counts(kb, n, seed, opt.confidence);
  out.both = Estimate::from_counts(kab, n, seed, opt.confidence);
  out.difference = out.both.mean - out.a.mean * out.b.mean;
  double var = 0;
  for (std::size_t i = 0; i < n; ++i) {
    const double inf = (hits[i][0] - out.a.mean) * (hits[i][1] - out.b.mean) - out.difference;
    var += inf * inf;
  }
  out.sigma = std::sqrt(var) / static_cast<double>(n);
  return out;
}

json CorrelationReport::summary() const {
  return {{"experiment", "correlate"}, {"p", p}, {"torus", torus}, {"a", a.to_json()}, {"b", b.to_json()},
          {"both", both.to_json()}, {"difference", difference}, {"sigma", sigma}};
}

ThresholdScan threshold_scan(const std::vector<double>& s_list, const std::vector<double>& p_grid, double rho,
                             std::size_t n, std::uint64_t seed, const RunOptions& opt, std::size_t bootstrap) {
  if (s_list.empty() || p_grid.empty()) throw Error(ErrorKind::invalid_parameter, "scan needs s values and a p grid");
  if (!std::is_sorted(p_grid.begin(), p_grid.end()) ||
      std::adjacent_find(p_grid.begin(), p_grid.end()) != p_grid.end()) {
    throw Error(ErrorKind::invalid_parameter, "p grid must be strictly increasing");
  }
  for (const double p : p_grid) require_probability(p);
  for (const double s : s_list) require_positive(s, "s");
  if (!(rho >= 1.0)) throw Error(ErrorKind::invalid_parameter, "rho must be >= 1");
  require_samples(n);

  ThresholdScan out;
  out.rho = rho;
  out.p_grid = p_grid;
  out.records.header = {"index", "seed", "s", "threshold"};
  if (p_grid.size() < 2) out.warnings.push_back("p grid has a single point: widths are not resolved");
  for (std::size_t j = 0; j < s_list.size(); ++j) {
    const double s = s_list[j];
    const std::uint64_t sseed = child_seed(seed, j);
    ScanCurve curve;
    curve.s = s;
    curve.torus = rho * s / 0.9;
    const Rect rect{0, 0, rho * s, s};
    const auto t = run_indexed<double>(opt, n, [&](std::size_t i) {
      const auto config = torus_sample(curve.torus, 0.5, sample_seed(sseed, i));
      const CrossingGeometry geo(*config.graph, rect);
      return crossing_threshold(geo, *config.uniforms, Orientation::horizontal, Colour::black);
    });
    for (std::size_t i = 0; i < n; ++i) {
      out.records.rows.push_back({std::to_string(i), fmt(sample_seed(sseed, i)), fmt(s), fmt(t[i])});
    }
    const auto curve_of = [&](const std::vector<double>& sorted) {
      std::vector<double> f;
      for (const double p : p_grid) {
        const auto k = std::lower_bound(sorted.begin(), sorted.end(), p) - sorted.begin();
        f.push_back(static_cast<double>(k) / static_cast<double>(sorted.size()));
      }
      return f;
    };
    std::vector<double> sorted = t;
    std::sort(sorted.begin(), sorted.end());
    const auto raw = curve_of(sorted);
    for (const double f : raw) {
      curve.raw.push_back(Estimate::from_counts(static_cast<std::size_t>(std::lround(f * n)), n, sseed, opt.confidence));
    }
    curve.smoothed = isotonic(raw, unit_weights(raw.size()));
    const Width w = rise_width(p_grid, curve.smoothed);
    curve.p25 = w.p25;
    curve.p75 = w.p75;
    curve.width = w.width;
    curve.resolution_limited = w.limited;
    if (w.limited) {
      out.warnings.push_back("s=" + fmt(s) + ": rise from 0.25 to 0.75 falls inside one grid interval; width is the grid spacing");
    }
    // Percentile bootstrap over samples.
    Rng rng(child_seed(sseed, 0xb007));
    std::vector<double> widths;
    std::vector<double> re(n);
    for (std::size_t b = 0; b < bootstrap; ++b) {
      for (auto& v : re) v = t[static_cast<std::size_t>(uniform01(rng) * n)];
      std::sort(re.begin(), re.end());
      widths.push_back(rise_width(p_grid, isotonic(curve_of(re), unit_weights(p_grid.size()))).width);
    }
    if (widths.empty()) {
      curve.width_ci = {curve.width, curve.width};
    } else {
      std::sort(widths.begin(), widths.end());
      const double tail = 0.5 * (1.0 - opt.confidence);
      const auto at = [&](double q) {
        const auto k = static_cast<std::size_t>(std::clamp(q * (widths.size() - 1), 0.0, double(widths.size() - 1)));
        return widths[k];
      };
      curve.width_ci = {std::min(at(tail), curve.width), std::max(at(1.0 - tail), curve.width)};
    }
    out.curves.push_back(std::move(curve));
  }
  return out;
}

bool ThresholdScan::narrowing() const {
  for (std::size_t j = 1; j < curves.size(); ++j) {
    if (!(curves[j].width < curves[j - 1].width)) return false;
  }
  return true;
}

bool ThresholdScan::narrower_beyond_ci(std::size_t i, std::size_t j) const {
  return curves.at(j).width_ci.hi < curves.at(i).width_ci.lo;
}

json ThresholdScan::summary() const {
  json cs = json::array();
  for (const auto& c : curves) {
    json raw = json::array();
    for (const auto& e : c.raw) raw.push_back(e.to_json());
    cs.push_back({{"s", c.s}, {"torus", c.torus}, {"raw", raw}, {"smoothed", c.smoothed}, {"p25", c.p25},
                  {"p75", c.p75}, {"width", c.width}, {"width_ci", interval_json(c.width_ci)},
                  {"resolution_limited", c.resolution_limited}});
  }
  return {{"experiment", "scan"}, {"rho", rho}, {"p_grid", p_grid}, {"curves", cs}, {"narrowing", narrowing()},
          {"warnings", warnings}};
}

// ------------------------------------------------------------ renormalization

std::size_t RenormLattice::open_count() const {
  return static_cast<std::size_t>(std::count_if(units.begin(), units.end(), [](const RenormUnit& u) { return u.open; }));
}

double renorm_torus_side(RenormMode mode, double block, const LatticeWindow& w) {
  require_positive(block, "block scale");
  validate_window(w, mode);
  const double cells = std::max(w.width(), w.height());
  if (mode == RenormMode::bond_supercritical) {
    return 2 * block * (cells - 1) + block + 4 * density_radius(block) + block;
  }
  return (cells + 2) * block + 4 * density_radius(3 * block) + block;
}

std::vector<RenormUnit> renorm_states(const ColouredConfiguration& config, RenormMode mode, double s,
                                      const LatticeWindow& w) {
  validate_window(w, mode);
  const VoronoiGraph& g = *config.graph;
  const auto black = [&](std::size_t site) { return config.is_black(site); };
  std::vector<RenormUnit> units;
  if (mode == RenormMode::bond_supercritical) {
    const double r = density_radius(s);
    units = bond_units(w);
    for (auto& u : units) {
      const BondBlock b = bond_block(u.x, u.y, u.vertical, s);
      u.region = b.rect;
      u.dense = check_dense(g, b.rect, r).dense;
      u.crossing = crossing(config, b.rect, b.along, Colour::black).verdict &&
                   crossing(config, b.s1, b.across, Colour::black).verdict &&
                   crossing(config, b.s2, b.across, Colour::black).verdict;
      u.open = u.crossing && u.dense;
    }
    return units;
  }
  const double r = density_radius(3 * s);
  for (int y = w.y0; y <= w.y1; ++y) {
    for (int x = w.x0; x <= w.x1; ++x) {
      RenormUnit u{x, y, false, {}, false, false, false};
      const Rect square{x * s, y * s, x * s + s, y * s + s};
      u.region = square.expanded(s);
      const CrossingGeometry geo(g, u.region);
      std::vector<char> boundary(geo.nodes().size());
      for (std::size_t i = 0; i < boundary.size(); ++i) {
        const auto& m = geo.nodes()[i].meets;
        boundary[i] = m[0] || m[1] || m[2] || m[3];
      }
      u.crossing = !geo.path(geo.meeting(square), boundary, black).empty();
      u.dense = check_dense(g, u.region, r).dense;
      u.open = u.crossing || !u.dense;
      units.push_back(u);
    }
  }
  return units;
}

namespace {

RenormLattice renorm_run(RenormMode mode, double p, double block, const LatticeWindow& window, std::uint64_t seed) {
  require_probability(p);
  RenormLattice out;
  out.mode = mode;
  out.window = window;
  out.block = block;
  out.dependence = mode == RenormMode::bond_supercritical ? 1 : 7;
  out.torus = renorm_torus_side(mode, block, window);
  out.radius = density_radius(mode == RenormMode::bond_supercritical ? block : 3 * block);
  out.sample = torus_sample(out.torus, p, seed);
  out.units = renorm_states(*out.sample, mode, block, window);
  return out;
}

}  // namespace

RenormLattice renorm_supercritical(double p, double block, const LatticeWindow& window, std::uint64_t seed) {
  return renorm_run(RenormMode::bond_supercritical, p, block, window, seed);
}

RenormLattice renorm_subcritical(double p, double block, const LatticeWindow& window, std::uint64_t seed) {
  return renorm_run(RenormMode::site_subcritical, p, block, window, seed);
}

bool spans(const RenormLattice& lat) {
  if (lat.mode != RenormMode::bond_supercritical) throw Error(ErrorKind::invalid_parameter, "spanning is a bond-mode diagnostic");
  const LatticeWindow& w = lat.window;
  const auto id = [&](int x, int y) { return static_cast<std::size_t>((y - w.y0) * w.width() + (x - w.x0)); };
  UnionFind uf(static_cast<std::size_t>(w.width() * w.height()));
  for (const auto& u : lat.units) {
    if (u.open) uf.unite(id(u.x, u.y), id(u.x + (u.vertical ? 0 : 1), u.y + (u.vertical ? 1 : 0)));
  }
  for (int ya = w.y0; ya <= w.y1; ++ya) {
    for (int yb = w.y0; yb <= w.y1; ++yb) {
      if (uf.same(id(w.x0, ya), id(w.x1, yb))) return w.width() > 1;
    }
  }
  return false;
}

std::vector<std::size_t> open_cluster_sizes(const RenormLattice& lat) {
  if (lat.mode != RenormMode::site_subcritical) throw Error(ErrorKind::invalid_parameter, "open clusters are a site-mode diagnostic");
  const LatticeWindow& w = lat.window;
  const auto id = [&](int x, int y) { return static_cast<std::size_t>((y - w.y0) * w.width() + (x - w.x0)); };
  std::vector<char> open(static_cast<std::size_t>(w.width() * w.height()), 0);
  for (const auto& u : lat.units) open[id(u.x, u.y)] = u.open;
  UnionFind uf(open.size());
  for (int y = w.y0; y <= w.y1; ++y) {
    for (int x = w.x0; x <= w.x1; ++x) {
      if (!open[id(x, y)]) continue;
      if (x < w.x1 && open[id(x + 1, y)]) uf.unite(id(x, y), id(x + 1, y));
      if (y < w.y1 && open[id(x, y + 1)]) uf.unite(id(x, y), id(x, y + 1));
    }
  }
  std::vector<std::size_t> sizes;
  for (std::size_t i = 0; i < open.size(); ++i) {
    if (open[i] && uf.find(i) == i) sizes.push_back(uf.size_of(i));
  }
  std::sort(sizes.rbegin(), sizes.rend());
  return sizes;
}

RenormStudy renorm_study(RenormMode mode, double p, double block, const LatticeWindow& window, std::size_t n,
                         std::uint64_t seed, const RunOptions& opt) {
  require_samples(n);
  RenormStudy out;
  out.mode = mode;
  out.p = p;
  out.block = block;
  out.window = window;
  out.torus = renorm_torus_side(mode, block, window);
  const auto lattices = run_indexed<std::vector<RenormUnit>>(opt, n, [&](std::size_t i) {
    return renorm_run(mode, p, block, window, sample_seed(seed, i)).units;
  });
  out.records.header = {"index", "seed", "x", "y", "vertical", "crossing", "dense", "open"};
  std::size_t open = 0, total = 0, spanning = 0;
  std::vector<double> ca, cb;
  std::vector<std::uint64_t> group;
  for (std::size_t i = 0; i < n; ++i) {
    const auto& units = lattices[i];
    for (const auto& u : units) {
      open += u.open;
      ++total;
      out.records.rows.push_back({std::to_string(i), fmt(sample_seed(seed, i)), std::to_string(u.x),
                                  std::to_string(u.y), u.vertical ? "1" : "0", u.crossing ? "1" : "0",
                                  u.dense ? "1" : "0", u.open ? "1" : "0"});
    }
    for (std::size_t a = 0; a < units.size(); ++a) {
      for (std::size_t b = a + 1; b < units.size(); ++b) {
        const bool far = mode == RenormMode::bond_supercritical
                             ? !share_vertex(units[a], units[b])
                             : std::abs(units[a].x - units[b].x) + std::abs(units[a].y - units[b].y) >= 7;
        if (!far) continue;
        ca.push_back(units[a].open);
        cb.push_back(units[b].open);
        group.push_back(i);
      }
    }
    RenormLattice lat;
    lat.mode = mode;
    lat.window = window;
    lat.units = units;
    if (mode == RenormMode::bond_supercritical) {
      spanning += spans(lat);
    } else {
      for (const std::size_t sz : open_cluster_sizes(lat)) {
        if (out.cluster_histogram.size() <= sz) out.cluster_histogram.resize(sz + 1);
        ++out.cluster_histogram[sz];
        out.max_cluster = std::max(out.max_cluster, sz);
      }
    }
  }
  out.marginal = Estimate::from_counts(open, total, seed, opt.confidence);
  out.distant = clustered_correlation(ca, cb, group);
  out.spanning = Estimate::from_counts(spanning, n, seed, opt.confidence);
  return out;
}

json RenormStudy::summary() const {
  json j{{"experiment", "renorm"},
         {"mode", to_string(mode)},
         {"p", p},
         {"block", block},
         {"torus", torus},
         {"window", {window.x0, window.y0, window.x1, window.y1}},
         {"dependence", mode == RenormMode::bond_supercritical ? 1 : 7},
         {"marginal", marginal.to_json()},
         {"distant_correlation", correlation_json(distant)}};
  if (mode == RenormMode::bond_supercritical) {
    j["spanning"] = spanning.to_json();
  } else {
    j["max_cluster"] = max_cluster;
    j["cluster_histogram"] = cluster_histogram;
  }
  return j;
}

// --------------------------------------------------------------- cluster tails

const char* to_string(SizeMeasure m) {
  switch (m) {
    case SizeMeasure::cells: return "cells";
    case SizeMeasure::area: return "area";
    case SizeMeasure::diameter: return "diameter";
  }
  return "cells";
}

SizeMeasure size_measure_from_string(const std::string& name) {
  if (name == "cells") return SizeMeasure::cells;
  if (name == "area") return SizeMeasure::area;
  if (name == "diameter") return SizeMeasure::diameter;
  throw Error(ErrorKind::invalid_parameter, "size measure must be cells, area or diameter, got '" + name + "'");
}

namespace {

struct OriginSize {
  double cells = 0, area = 0, diameter = 0;
  bool wraps = false;
};

double measure_of(const OriginSize& o, SizeMeasure m) {
  return m == SizeMeasure::cells ? o.cells : m == SizeMeasure::area ? o.area : o.diameter;
}

TailFit fit_tail(double p, double s, SizeMeasure measure, const std::vector<OriginSize>& sizes, std::uint64_t seed) {
  TailFit out;
  out.p = p;
  out.s = s;
  out.measure = measure;
  out.samples = sizes.size();
  out.records.header = {"index", "seed", "cells", "area", "diameter"};
  double top = 0;
  for (std::size_t i = 0; i < sizes.size(); ++i) {
    const auto& o = sizes[i];
    out.wrapped += o.wraps;
    const double v = measure_of(o, measure);
    if (std::isfinite(v)) top = std::max(top, v);
    out.records.rows.push_back({std::to_string(i), fmt(sample_seed(seed, i)), fmt(o.cells), fmt(o.area), fmt(o.diameter)});
  }
  if (top <= 0) {
    out.warnings.push_back("fit-unstable: the origin cluster is empty in every sample");
    return out;
  }
  if (measure == SizeMeasure::cells) {
    for (double t = 1; t <= top; t += 1) out.thresholds.push_back(t);
  } else {
    constexpr int steps = 50;
    for (int k = 1; k <= steps; ++k) out.thresholds.push_back(top * k / steps);
  }
  std::vector<double> values;
  for (const auto& o : sizes) values.push_back(measure_of(o, measure));
  std::sort(values.begin(), values.end());
  std::vector<double> xs, ys;
  for (const double t : out.thresholds) {
    const auto k = values.end() - std::lower_bound(values.begin(), values.end(), t);
    const double tail = static_cast<double>(k) / static_cast<double>(values.size());
    out.tail.push_back(tail);
    if (tail >= 1e-3 && tail <= 0.5) {
      xs.push_back(t);
      ys.push_back(std::log(tail));
    }
  }
  if (xs.size() < 3) {
    out.warnings.push_back("fit-unstable: only " + std::to_string(xs.size()) + " thresholds have tail in [1e-3, 0.5]");
  }
  if (xs.size() >= 2) out.fit = least_squares(xs, ys);
  return out;
}

OriginSize origin_size(const ColouredConfiguration& config) {
  const auto c = origin_cluster(config, Vec2{0, 0});
  if (!c) return {};
  return {static_cast<double>(c->cells), c->area, c->diameter, c->wraps};
}

}  // namespace

TailFit tail_distribution(double p, double s, std::size_t n, SizeMeasure measure, std::uint64_t seed,
                          const RunOptions& opt) {
  return tail_family({p}, s, n, measure, seed, opt).front();
}

std::vector<TailFit> tail_family(const std::vector<double>& ps, double s, std::size_t n, SizeMeasure measure,
                                 std::uint64_t seed, const RunOptions& opt) {
  if (ps.empty()) throw Error(ErrorKind::invalid_parameter, "tail needs at least one p");
  for (const double p : ps) require_probability(p);
  require_positive(s, "s");
  require_samples(n);
  const auto sizes = run_indexed<std::vector<OriginSize>>(opt, n, [&](std::size_t i) {
    const auto config = torus_sample(s, ps.front(), sample_seed(seed, i));
    std::vector<OriginSize> out;
    for (const double p : ps) out.push_back(origin_size(p == config.p ? config : config.recoloured(p)));
    return out;
  });
  std::vector<TailFit> fits;
  for (std::size_t k = 0; k < ps.size(); ++k) {
    std::vector<OriginSize> col;
    for (const auto& row : sizes) col.push_back(row[k]);
    fits.push_back(fit_tail(ps[k], s, measure, col, seed));
  }
  return fits;
}

json TailFit::summary() const {
  return {{"experiment", "tail"}, {"p", p}, {"s", s}, {"measure", to_string(measure)}, {"samples", samples},
          {"wrapped", wrapped}, {"thresholds", thresholds}, {"tail", tail}, {"fit", fit_json(fit)},
          {"warnings", warnings}};
}

ReachScan reach_scan(double p, const std::vector<double>& radii, double torus, std::size_t n, std::uint64_t seed,
                     const RunOptions& opt) {
  require_probability(p);
  require_positive(torus, "torus side");
  require_samples(n);
  if (radii.empty()) throw Error(ErrorKind::invalid_parameter, "reach needs at least one radius");
  for (const double r : radii) require_positive(r, "radius");
  ReachScan out;
  out.p = p;
  out.torus = torus;
  out.radii = radii;
  const double top = *std::max_element(radii.begin(), radii.end());
  const auto reach = run_indexed<double>(opt, n, [&](std::size_t i) {
    return cluster_reach(torus_sample(torus, p, sample_seed(seed, i)), Vec2{0, 0}, top);
  });
  out.records.header = {"index", "seed", "reach"};
  for (std::size_t i = 0; i < n; ++i) {
    out.records.rows.push_back({std::to_string(i), fmt(sample_seed(seed, i)), fmt(reach[i])});
  }
  for (const double r : radii) {
    const auto k = static_cast<std::size_t>(std::count_if(reach.begin(), reach.end(), [&](double v) { return v >= r; }));
    out.reach.push_back(Estimate::from_counts(k, n, seed, opt.confidence));
  }
  return out;
}

json ReachScan::summary() const {
  json est = json::array();
  for (const auto& e : reach) est.push_back(e.to_json());
  return {{"experiment", "reach"}, {"p", p}, {"torus", torus}, {"radii", radii}, {"reach", est}};
}

AnnulusScan annulus_scan(double p, const std::vector<double>& s_list, std::size_t n, std::uint64_t seed,
                         const RunOptions& opt) {
  require_probability(p);
  require_samples(n);
  if (s_list.empty()) throw Error(ErrorKind::invalid_parameter, "annulus needs at least one s");
  AnnulusScan out;
  out.p = p;
  out.records.header = {"index", "seed", "s", "cycle", "four"};
  for (std::size_t j = 0; j < s_list.size(); ++j) {
    const double s = s_list[j];
    require_positive(s, "s");
    const std::uint64_t sseed = child_seed(seed, j);
    AnnulusPoint pt;
    pt.s = s;
    pt.torus = 3 * s / 0.9;
    const Rect outer{0, 0, 3 * s, 3 * s}, inner{s, s, 2 * s, 2 * s};
    const std::array<std::pair<Rect, Orientation>, 4> ring{{{Rect{0, 0, 3 * s, s}, Orientation::horizontal},
                                                            {Rect{0, 2 * s, 3 * s, 3 * s}, Orientation::horizontal},
                                                            {Rect{0, 0, s, 3 * s}, Orientation::vertical},
                                                            {Rect{2 * s, 0, 3 * s, 3 * s}, Orientation::vertical}}};
    const auto res = run_indexed<std::array<char, 2>>(opt, n, [&](std::size_t i) {
      const auto config = torus_sample(pt.torus, p, sample_seed(sseed, i));
      // A white circuit separates the hole from the outer boundary exactly
      // when no black path joins them inside the annulus.
      const CrossingGeometry geo(*config.graph, outer, inner);
      std::vector<char> from(geo.nodes().size()), to(geo.nodes().size());
      for (std::size_t k = 0; k < from.size(); ++k) {
        const auto& node = geo.nodes()[k];
        from[k] = node.meets_hole;
        to[k] = node.meets[0] || node.meets[1] || node.meets[2] || node.meets[3];
      }
      const bool cycle = geo.path(from, to, [&](std::size_t site) { return config.is_black(site); }).empty();
      bool four = true;
      for (const auto& [rect, o] : ring) {
        if (!(four = crossing(config, rect, o, Colour::white).verdict)) break;
      }
      return std::array<char, 2>{char(cycle), char(four)};
    });
    std::size_t kc = 0, kf = 0;
    for (std::size_t i = 0; i < n; ++i) {
      kc += res[i][0];
      kf += res[i][1];
      out.records.rows.push_back({std::to_string(i), fmt(sample_seed(sseed, i)), fmt(s), std::to_string(int(res[i][0])),
                                  std::to_string(int(res[i][1]))});
    }
    pt.cycle = Estimate::from_counts(kc, n, sseed, opt.confidence);
    pt.four = Estimate::from_counts(kf, n, sseed, opt.confidence);
    out.points.push_back(pt);
  }
  return out;
}

json AnnulusScan::summary() const {
  json pts = json::array();
  for (const auto& pt : points) {
    pts.push_back({{"s", pt.s}, {"torus", pt.torus}, {"cycle", pt.cycle.to_json()}, {"four", pt.four.to_json()}});
  }
  return {{"experiment", "annulus"}, {"p", p}, {"points", pts}};
}

// ------------------------------------------------------------ lattice subsets

std::size_t separated_bound(std::size_t n, int k) {
  if (k < 1) throw Error(ErrorKind::invalid_parameter, "k must be at least 1");
  const std::size_t ball = static_cast<std::size_t>(2 * k * k - 2 * k + 1);
  return (n + ball - 1) / ball;
}

std::vector<std::size_t> separated_subset(const LatticeGraph& graph, int k) {
  if (k < 1) throw Error(ErrorKind::invalid_parameter, "k must be at least 1");
  const std::size_t n = graph.vertices.size();
  if (n == 0) throw Error(ErrorKind::invalid_parameter, "empty graph");
  {
    auto sorted = graph.vertices;
    std::sort(sorted.begin(), sorted.end());
    if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()) {
      throw Error(ErrorKind::invalid_parameter, "repeated lattice vertex");
    }
  }
  UnionFind uf(n);
  for (const auto& [a, b] : graph.edges) {
    if (a >= n || b >= n) throw Error(ErrorKind::invalid_parameter, "edge endpoint out of range");
    const auto& u = graph.vertices[a];
    const auto& v = graph.vertices[b];
    if (std::abs(u[0] - v[0]) + std::abs(u[1] - v[1]) != 1) {
      throw Error(ErrorKind::invalid_parameter, "edge is not a unit lattice step");
    }
    uf.unite(a, b);
  }
  if (uf.size_of(0) != n) throw Error(ErrorKind::invalid_parameter, "graph is disconnected");
  // Each pick excludes at most the 2k^2-2k+1 vertices within lattice distance
  // k-1, which gives the size bound.
  std::vector<char> blocked(n, 0);
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < n; ++i) {
    if (blocked[i]) continue;
    out.push_back(i);
    const auto& c = graph.vertices[i];
    for (std::size_t j = 0; j < n; ++j) {
      const auto& v = graph.vertices[j];
      if (std::abs(v[0] - c[0]) + std::abs(v[1] - c[1]) < k) blocked[j] = 1;
    }
  }
  return out;
}

}  // namespace vperc
