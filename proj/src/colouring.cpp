#include "vperc/colouring.hpp"

#include <mutex>

#include "vperc/clusters.hpp"
#include "vperc/random.hpp"

namespace vperc {

struct ColouredConfiguration::Cache {
  std::once_flag once;
  Partition partition;
};

ColouredConfiguration make_configuration(std::shared_ptr<const VoronoiGraph> graph,
                                         std::shared_ptr<const std::vector<double>> uniforms, double p,
                                         std::uint64_t seed) {
  if (!(p >= 0.0 && p <= 1.0)) throw Error(ErrorKind::invalid_parameter, "p must lie in [0,1]");
  if (uniforms->size() != graph->size()) {
    throw Error(ErrorKind::invalid_parameter, "one uniform per site required");
  }
  ColouredConfiguration c;
  c.graph = std::move(graph);
  c.uniforms = std::move(uniforms);
  c.p = p;
  c.colour_seed = seed;
  c.black.resize(c.uniforms->size());
  for (std::size_t i = 0; i < c.black.size(); ++i) c.black[i] = (*c.uniforms)[i] < p ? 1 : 0;
  c.cache_ = std::make_shared<ColouredConfiguration::Cache>();
  return c;
}

ColouredConfiguration ColouredConfiguration::recoloured(double q) const {
  return make_configuration(graph, uniforms, q, colour_seed);
}

const Partition& ColouredConfiguration::components() const {
  std::call_once(cache_->once, [this] { cache_->partition = black_components(*this); });
  return cache_->partition;
}

ColouredConfiguration colour_sites(std::shared_ptr<const VoronoiGraph> graph, double p, std::uint64_t seed) {
  if (!(p >= 0.0 && p <= 1.0)) throw Error(ErrorKind::invalid_parameter, "p must lie in [0,1]");
  Rng rng(seed);
  auto u = std::make_shared<std::vector<double>>(graph->size());
  for (auto& v : *u) v = uniform01(rng);
  return make_configuration(std::move(graph), std::move(u), p, seed);
}

ColouredConfiguration colour_sites(const VoronoiGraph& graph, double p, std::uint64_t seed) {
  return colour_sites(std::make_shared<const VoronoiGraph>(graph), p, seed);
}

ColouredConfiguration with_colours(std::shared_ptr<const VoronoiGraph> graph, const std::vector<Colour>& colours) {
  auto u = std::make_shared<std::vector<double>>(colours.size());
  for (std::size_t i = 0; i < colours.size(); ++i) {
    (*u)[i] = colours[i] == Colour::black ? 0.0 : std::nextafter(1.0, 0.0);
  }
  return make_configuration(std::move(graph), std::move(u), 0.5, 0);
}

}  // namespace vperc
