#include "vperc/io.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

namespace vperc {

std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

nlohmann::json domain_to_json(const Domain& d) {
  if (d.is_torus()) return {{"kind", "torus"}, {"side", d.side()}};
  const Rect& c = d.core();
  return {{"kind", "plane"}, {"core", {c.x1, c.y1, c.x2, c.y2}}, {"guard", d.guard()}};
}

Domain domain_from_json(const nlohmann::json& j) {
  const std::string kind = j.at("kind").get<std::string>();
  if (kind == "torus") return Domain::torus(j.at("side").get<double>());
  if (kind == "plane") {
    const auto c = j.at("core").get<std::vector<double>>();
    if (c.size() != 4) throw Error(ErrorKind::invalid_parameter, "core needs four numbers");
    return Domain::plane(Rect::checked(c[0], c[1], c[2], c[3]), j.at("guard").get<double>());
  }
  throw Error(ErrorKind::invalid_parameter, "unknown domain kind '" + kind + "'");
}

void write_points_csv(std::ostream& out, const PointSet& ps) {
  out << "index,x,y\n";
  for (std::size_t i = 0; i < ps.size(); ++i) {
    out << i << ',' << format_double(ps.sites[i].x) << ',' << format_double(ps.sites[i].y) << '\n';
  }
}

PointSet read_points_csv(std::istream& in, const Domain& domain, double intensity, std::uint64_t seed) {
  std::string line;
  if (!std::getline(in, line) || line != "index,x,y") {
    throw Error(ErrorKind::io, "points CSV must start with 'index,x,y'");
  }
  std::vector<Vec2> sites;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const auto c1 = line.find(',');
    const auto c2 = line.find(',', c1 + 1);
    if (c1 == std::string::npos || c2 == std::string::npos) {
      throw Error(ErrorKind::io, "malformed points row: " + line);
    }
    double x = 0, y = 0;
    const char* b = line.data();
    const auto rx = std::from_chars(b + c1 + 1, b + c2, x);
    const auto ry = std::from_chars(b + c2 + 1, b + line.size(), y);
    if (rx.ec != std::errc{} || ry.ec != std::errc{}) {
      throw Error(ErrorKind::io, "malformed coordinate: " + line);
    }
    sites.push_back({x, y});
  }
  return PointSet::from_sites(std::move(sites), domain, intensity, seed);
}

nlohmann::json points_header(const PointSet& ps) {
  return {{"domain", domain_to_json(ps.domain)},
          {"intensity", ps.intensity},
          {"seed", ps.seed},
          {"count", ps.size()}};
}

void write_adjacency_csv(std::ostream& out, const VoronoiGraph& g) {
  out << "site_a,site_b,mx,my,o1x,o1y,o2x,o2y\n";
  for (const auto& e : g.edges) {
    out << e.a << ',' << e.b << ',' << format_double(e.m.x) << ',' << format_double(e.m.y) << ','
        << format_double(e.o1.x) << ',' << format_double(e.o1.y) << ',' << format_double(e.o2.x) << ','
        << format_double(e.o2.y) << '\n';
  }
}

void atomic_write(const std::string& path, std::string_view content) {
  namespace fs = std::filesystem;
  const fs::path target(path);
  fs::path tmp = target;
  tmp += ".tmp";
  {
    std::ofstream f(tmp, std::ios::binary | std::ios::trunc);
    if (!f) throw Error(ErrorKind::io, "cannot write " + tmp.string());
    f.write(content.data(), static_cast<std::streamsize>(content.size()));
    if (!f) throw Error(ErrorKind::io, "write failed for " + tmp.string());
  }
  std::error_code ec;
  fs::rename(tmp, target, ec);
  if (ec) {
    fs::remove(tmp, ec);
    throw Error(ErrorKind::io, "cannot rename into " + target.string());
  }
}

}  // namespace vperc
