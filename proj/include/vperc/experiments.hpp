#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "vperc/colouring.hpp"
#include "vperc/crossing.hpp"
#include "vperc/random.hpp"
#include "vperc/stats.hpp"

namespace vperc {

/// Executes task(0), ..., task(n-1), in any order and on any threads.
/// Tasks write only to their own result slot.
using Runner = std::function<void(std::size_t n, const std::function<void(std::size_t)>& task)>;

Runner serial_runner();

struct RunOptions {
  double confidence = 0.99;
  Runner runner = serial_runner();
};

/// Header plus rows of already formatted cells.
struct Table {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;

  std::string csv() const;
};

struct Estimate {
  double mean = 0.0;
  Interval ci;
  std::size_t successes = 0;
  std::size_t n = 0;
  std::uint64_t seed = 0;
  double confidence = 0.99;

  static Estimate from_counts(std::size_t k, std::size_t n, std::uint64_t seed, double confidence);
  nlohmann::json to_json() const;
};

/// One Poisson(1) sample on the torus of the given side: points from
/// child_seed(sample_seed, 0), colour uniforms from child_seed(sample_seed, 1).
ColouredConfiguration torus_sample(double side, double p, std::uint64_t sample_seed);

/// Seed of sample i under a master seed.
inline std::uint64_t sample_seed(std::uint64_t master, std::size_t i) { return child_seed(master, i); }

// ---------------------------------------------------------------- crossings

struct CrossingEstimate {
  double p = 0, rho = 0, s = 0, torus = 0;
  Estimate estimate;
  Table records;  ///< index,seed,crossed

  nlohmann::json summary() const;
};

/// Fraction of samples with a horizontal black crossing of [0, rho s] x [0, s]
/// on a torus of side rho s / 0.9.
CrossingEstimate estimate_crossing(double p, double rho, double s, std::size_t n, std::uint64_t seed,
                                   const RunOptions& opt = {});

struct DualityRun {
  double p = 0, s = 0, torus = 0;
  std::size_t black_h = 0, white_v = 0, degenerate = 0;
  Estimate horizontal;  ///< Pr(H_b)
  Table records;        ///< seed,verdict

  nlohmann::json summary() const;
};

DualityRun duality_run(double p, double s, std::size_t n, std::uint64_t seed, const RunOptions& opt = {});

struct CompositionReport {
  double p = 0, a = 0, b = 0, s = 0, torus = 0;
  Estimate f_sum, f_a, f_b, f_one;  ///< f(a+b-1), f(a), f(b), f(1)
  double margin = 0.0;              ///< f(a+b-1) - f(a) f(b) f(1)
  double sigma = 0.0;               ///< delta-method standard error of the margin
  bool violation = false;           ///< margin < -3 sigma
  Table records;

  nlohmann::json summary() const;
};

/// All four rectangles share their lower-left corner and are evaluated on the
/// same sample; sigma accounts for the correlation between the estimates.
CompositionReport composition_check(double p, double a, double b, double s, std::size_t n, std::uint64_t seed,
                                    const RunOptions& opt = {});

struct CrossingEvent {
  Rect rect;
  Orientation orientation = Orientation::horizontal;
  Colour colour = Colour::black;
};

struct CorrelationReport {
  double p = 0, torus = 0;
  Estimate a, b, both;
  double difference = 0.0;  ///< Pr(A and B) - Pr(A) Pr(B)
  double sigma = 0.0;
  Table records;

  nlohmann::json summary() const;
};

/// torus <= 0 picks the smallest side on which both rectangles are admissible
/// and their bounding box fits.
CorrelationReport correlation_check(double p, const CrossingEvent& a, const CrossingEvent& b, std::size_t n,
                                    std::uint64_t seed, double torus = 0.0, const RunOptions& opt = {});

struct ScanCurve {
  double s = 0, torus = 0;
  std::vector<Estimate> raw;     ///< per grid point
  std::vector<double> smoothed;  ///< isotonic fit of the raw means
  double p25 = 0, p75 = 0, width = 0;
  Interval width_ci;             ///< bootstrap percentile interval
  bool resolution_limited = false;
};

struct ThresholdScan {
  double rho = 0;
  std::vector<double> p_grid;
  std::vector<ScanCurve> curves;
  std::vector<std::string> warnings;
  Table records;  ///< index,seed,s,threshold

  /// Widths strictly decrease along the s list.
  bool narrowing() const;
  /// Upper CI end of curve j below the lower CI end of curve i.
  bool narrower_beyond_ci(std::size_t i, std::size_t j) const;
  nlohmann::json summary() const;
};

/// Each sample yields the p at which its horizontal crossing appears (the
/// colouring is monotone), so every grid point sees the same n samples.
ThresholdScan threshold_scan(const std::vector<double>& s_list, const std::vector<double>& p_grid, double rho,
                             std::size_t n, std::uint64_t seed, const RunOptions& opt = {},
                             std::size_t bootstrap = 400);

// ----------------------------------------------------------- renormalization

enum class RenormMode { bond_supercritical, site_subcritical };

inline const char* to_string(RenormMode m) {
  return m == RenormMode::bond_supercritical ? "bond-supercritical" : "site-subcritical";
}

/// Inclusive range of lattice vertices.
struct LatticeWindow {
  int x0 = 0, y0 = 0, x1 = 0, y1 = 0;

  int width() const { return x1 - x0 + 1; }
  int height() const { return y1 - y0 + 1; }
};

struct RenormUnit {
  int x = 0, y = 0;
  bool vertical = false;  ///< bond mode: edge (x,y)-(x,y+1) instead of (x,y)-(x+1,y)
  Rect region;            ///< R_e, or the neighbourhood of S_v
  bool crossing = false;  ///< H(R) and both square crossings, or L(S)
  bool dense = false;
  bool open = false;
};

struct RenormLattice {
  RenormMode mode = RenormMode::bond_supercritical;
  LatticeWindow window;
  double block = 0.0;
  int dependence = 1;
  double torus = 0.0;
  double radius = 0.0;  ///< density radius used
  std::vector<RenormUnit> units;
  std::optional<ColouredConfiguration> sample;

  std::size_t open_count() const;
};

/// Torus side used for a window at block scale s.
double renorm_torus_side(RenormMode mode, double block, const LatticeWindow& window);

/// Pure evaluation of the block events on a coloured torus sample.
std::vector<RenormUnit> renorm_states(const ColouredConfiguration& config, RenormMode mode, double block,
                                      const LatticeWindow& window);

RenormLattice renorm_supercritical(double p, double block, const LatticeWindow& window, std::uint64_t seed);
RenormLattice renorm_subcritical(double p, double block, const LatticeWindow& window, std::uint64_t seed);

/// Whether open bonds join the left and right columns of the window.
bool spans(const RenormLattice& lattice);
/// Sizes of the open-site clusters (site mode, 4-neighbour adjacency).
std::vector<std::size_t> open_cluster_sizes(const RenormLattice& lattice);

struct RenormStudy {
  RenormMode mode = RenormMode::bond_supercritical;
  double p = 0, block = 0, torus = 0;
  LatticeWindow window;
  Estimate marginal;
  Correlation distant;      ///< open indicators of units at distance beyond the dependence range
  Estimate spanning;        ///< bond mode
  std::size_t max_cluster = 0;  ///< site mode, over all windows
  std::vector<std::size_t> cluster_histogram;  ///< site mode: count of clusters by size
  Table records;

  nlohmann::json summary() const;
};

RenormStudy renorm_study(RenormMode mode, double p, double block, const LatticeWindow& window, std::size_t n,
                         std::uint64_t seed, const RunOptions& opt = {});

// -------------------------------------------------------------- cluster tails

enum class SizeMeasure { cells, area, diameter };

const char* to_string(SizeMeasure m);
SizeMeasure size_measure_from_string(const std::string& name);

struct TailFit {
  double p = 0, s = 0;
  SizeMeasure measure = SizeMeasure::cells;
  std::vector<double> thresholds;
  std::vector<double> tail;  ///< Pr(|C0| >= n)
  LinearFit fit;             ///< log tail against n over tail in [1e-3, 0.5]
  std::size_t samples = 0, wrapped = 0;
  std::vector<std::string> warnings;
  Table records;  ///< index,seed,cells,area,diameter

  nlohmann::json summary() const;
};

/// Origin cluster at the point (0,0) of a torus of side s.
TailFit tail_distribution(double p, double s, std::size_t n, SizeMeasure measure, std::uint64_t seed,
                          const RunOptions& opt = {});

/// Same samples recoloured at every p of the list.
std::vector<TailFit> tail_family(const std::vector<double>& ps, double s, std::size_t n, SizeMeasure measure,
                                 std::uint64_t seed, const RunOptions& opt = {});

struct ReachScan {
  double p = 0, torus = 0;
  std::vector<double> radii;
  std::vector<Estimate> reach;  ///< Pr(origin cluster reaches distance R)
  Table records;

  nlohmann::json summary() const;
};

ReachScan reach_scan(double p, const std::vector<double>& radii, double torus, std::size_t n, std::uint64_t seed,
                     const RunOptions& opt = {});

struct AnnulusPoint {
  double s = 0, torus = 0;
  Estimate cycle;  ///< white circuit around [s,2s]^2 inside [0,3s]^2
  Estimate four;   ///< all four 3s x s white ring crossings
};

struct AnnulusScan {
  double p = 0;
  std::vector<AnnulusPoint> points;
  Table records;

  nlohmann::json summary() const;
};

AnnulusScan annulus_scan(double p, const std::vector<double>& s_list, std::size_t n, std::uint64_t seed,
                         const RunOptions& opt = {});

// ----------------------------------------------------------- lattice subsets

struct LatticeGraph {
  std::vector<std::array<int, 2>> vertices;
  std::vector<std::array<std::size_t, 2>> edges;
};

/// Greedy subset with pairwise lattice distance >= k. Throws
/// invalid-parameter unless the graph is a connected subgraph of Z^2.
std::vector<std::size_t> separated_subset(const LatticeGraph& graph, int k);

/// ceil(n / (2k^2 - 2k + 1)).
std::size_t separated_bound(std::size_t n, int k);

}  // namespace vperc
