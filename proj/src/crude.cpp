#include "vperc/crude.hpp"

#include <cmath>
#include <sstream>

#include "json.hpp"
#include "vperc/crossing.hpp"
#include "vperc/random.hpp"
#include "vperc/robustness.hpp"

namespace vperc {

std::size_t squares_per_side(double side, double delta) {
  if (!(delta > 0.0) || !(side > 0.0)) throw Error(ErrorKind::invalid_parameter, "delta and side must be positive");
  const double ratio = side / delta;
  const double n = std::round(ratio);
  if (n < 1.0 || std::fabs(ratio - n) > 1e-9 * ratio) {
    throw Error(ErrorKind::invalid_parameter, "s/delta must be an integer");
  }
  return static_cast<std::size_t>(n);
}

CrudeGrid crude_grid(const ColouredConfiguration& config, double delta) {
  const Domain& d = config.graph->domain();
  if (!d.is_torus()) throw Error(ErrorKind::invalid_parameter, "crude grids live on the torus");
  CrudeGrid g;
  g.side = d.side();
  g.n = squares_per_side(g.side, delta);
  g.delta = g.side / static_cast<double>(g.n);
  g.states.assign(g.n * g.n, 0);
  const auto cell = [&](double v) {
    return std::min(g.n - 1, static_cast<std::size_t>(std::max(0.0, std::floor(v / g.delta))));
  };
  for (std::size_t i = 0; i < config.size(); ++i) {
    const Vec2 z = config.graph->site(i);
    std::int8_t& st = g.states[cell(z.y) * g.n + cell(z.x)];
    if (!config.is_black(i)) {
      st = -1;
    } else if (st == 0) {
      st = 1;
    }
  }
  for (const auto st : g.states) {
    if (st < 0) ++g.bad;
    else if (st == 0) ++g.neutral;
    else ++g.good;
  }
  return g;
}

std::array<double, 3> crude_probabilities(double gamma, double p) {
  return {1.0 - std::exp(-gamma * (1.0 - p)), std::exp(-gamma), std::exp(-gamma * (1.0 - p)) * (1.0 - std::exp(-gamma * p))};
}

std::string crude_to_text(const CrudeGrid& grid, std::uint64_t seed) {
  std::ostringstream out;
  out << nlohmann::json{{"s", grid.side}, {"delta", grid.delta}, {"seed", seed}, {"n", grid.n}}.dump() << '\n';
  for (std::size_t k = 0; k < grid.states.size();) {
    std::size_t run = 1;
    while (k + run < grid.states.size() && grid.states[k + run] == grid.states[k]) ++run;
    if (k > 0) out << ' ';
    out << static_cast<int>(grid.states[k]) << 'x' << run;
    k += run;
  }
  out << '\n';
  return out.str();
}

CrudeGrid crude_from_text(const std::string& text) {
  std::istringstream in(text);
  std::string header;
  std::getline(in, header);
  CrudeGrid g;
  try {
    const auto j = nlohmann::json::parse(header);
    g.side = j.at("s").get<double>();
    g.delta = j.at("delta").get<double>();
    g.n = j.at("n").get<std::size_t>();
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorKind::invalid_parameter, std::string("crude header: ") + e.what());
  }
  std::string tok;
  while (in >> tok) {
    const auto x = tok.find('x');
    if (x == std::string::npos) throw Error(ErrorKind::invalid_parameter, "crude token without count: " + tok);
    const int st = std::stoi(tok.substr(0, x));
    const std::size_t count = std::stoul(tok.substr(x + 1));
    if (st < -1 || st > 1) throw Error(ErrorKind::invalid_parameter, "crude state out of range: " + tok);
    g.states.insert(g.states.end(), count, static_cast<std::int8_t>(st));
  }
  if (g.states.size() != g.n * g.n) throw Error(ErrorKind::invalid_parameter, "crude grid has the wrong length");
  for (const auto st : g.states) {
    if (st < 0) ++g.bad;
    else if (st == 0) ++g.neutral;
    else ++g.good;
  }
  return g;
}

PointSet crude_resample(const CrudeGrid& grid, double p, double intensity, std::uint64_t seed,
                        std::vector<Colour>& colours) {
  Rng rng(seed);
  const double gamma = intensity * grid.delta * grid.delta;
  std::poisson_distribution<int> extra(gamma);
  std::vector<Vec2> sites;
  colours.clear();
  for (std::size_t j = 0; j < grid.n; ++j) {
    for (std::size_t i = 0; i < grid.n; ++i) {
      const std::int8_t st = grid.states[j * grid.n + i];
      if (st == 0) continue;
      const auto place = [&](Colour c) {
        sites.push_back({(i + uniform01(rng)) * grid.delta, (j + uniform01(rng)) * grid.delta});
        colours.push_back(c);
      };
      place(st < 0 ? Colour::white : Colour::black);
      for (int k = extra(rng); k > 0; --k) {
        place(st > 0 || uniform01(rng) < p ? Colour::black : Colour::white);
      }
    }
  }
  return PointSet::from_sites(std::move(sites), Domain::torus(grid.side), intensity, seed);
}

StabilityReport crude_stability_test(const ColouredConfiguration& config, double delta, const Rect& rect,
                                     std::size_t resamples, std::uint64_t seed) {
  const CrudeGrid grid = crude_grid(config, delta);
  const double level = 4.0 * grid.delta;
  StabilityReport rep;
  const auto w = crossing(config, rect, Orientation::horizontal, Colour::black);
  if (!w.verdict) throw Error(ErrorKind::precondition_failed, "no black horizontal crossing to start from");
  const double pitch = grid.delta / 8.0;
  const auto cert = certify_polyline(config, w.polyline, level, pitch);
  rep.certified_margin = cert.certified;
  if (cert.certified < level) {
    throw Error(ErrorKind::precondition_failed,
                "crossing polyline is not 4 delta-robustly black (certified " + std::to_string(cert.certified) + ")");
  }
  for (std::size_t k = 0; k < resamples; ++k) {
    std::vector<Colour> colours;
    auto ps = std::make_shared<const PointSet>(
        crude_resample(grid, config.p, config.points().intensity, child_seed(seed, k), colours));
    std::shared_ptr<const VoronoiGraph> g;
    try {
      g = std::make_shared<const VoronoiGraph>(build_tessellation(ps));
    } catch (const Error& e) {
      if (e.kind() != ErrorKind::too_sparse) throw;
      ++rep.skipped;
      continue;
    }
    ++rep.resamples;
    if (crossing(with_colours(g, colours), rect, Orientation::horizontal, Colour::black).verdict) {
      ++rep.crossed;
    } else {
      ++rep.violations;
    }
  }
  return rep;
}

}  // namespace vperc
