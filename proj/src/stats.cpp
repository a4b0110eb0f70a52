#include "vperc/stats.hpp"

#include <algorithm>
#include <boost/math/distributions/normal.hpp>
#include <cmath>
#include <map>

#include "vperc/error.hpp"

namespace vperc {

double normal_z(double confidence) {
  if (!(confidence > 0.0 && confidence < 1.0)) throw Error(ErrorKind::invalid_parameter, "confidence in (0,1)");
  return boost::math::quantile(boost::math::normal(), 0.5 + 0.5 * confidence);
}

Interval wilson(std::size_t k, std::size_t n, double confidence) {
  if (k > n) throw Error(ErrorKind::invalid_parameter, "successes exceed trials");
  if (n == 0) return {0.0, 1.0};
  const double z = normal_z(confidence);
  const double nn = static_cast<double>(n);
  const double ph = static_cast<double>(k) / nn;
  const double z2 = z * z;
  const double centre = (ph + z2 / (2 * nn)) / (1 + z2 / nn);
  const double half = z / (1 + z2 / nn) * std::sqrt(ph * (1 - ph) / nn + z2 / (4 * nn * nn));
  Interval out{std::max(0.0, centre - half), std::min(1.0, centre + half)};
  out.lo = std::min(out.lo, ph);
  out.hi = std::max(out.hi, ph);
  return out;
}

std::vector<double> isotonic(const std::vector<double>& y, const std::vector<double>& w) {
  if (y.size() != w.size()) throw Error(ErrorKind::invalid_parameter, "isotonic: size mismatch");
  struct Block {
    double mean, weight;
    std::size_t count;
  };
  std::vector<Block> blocks;
  for (std::size_t i = 0; i < y.size(); ++i) {
    blocks.push_back({y[i], w[i], 1});
    while (blocks.size() > 1 && blocks[blocks.size() - 2].mean > blocks.back().mean) {
      const Block b = blocks.back();
      blocks.pop_back();
      Block& a = blocks.back();
      const double tw = a.weight + b.weight;
      a.mean = tw > 0 ? (a.mean * a.weight + b.mean * b.weight) / tw : 0.5 * (a.mean + b.mean);
      a.weight = tw;
      a.count += b.count;
    }
  }
  std::vector<double> out;
  out.reserve(y.size());
  for (const auto& b : blocks) out.insert(out.end(), b.count, b.mean);
  return out;
}

LinearFit least_squares(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size() || x.size() < 2) throw Error(ErrorKind::invalid_parameter, "least squares needs two points");
  const double n = static_cast<double>(x.size());
  double mx = 0, my = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= n;
  my /= n;
  double sxx = 0, sxy = 0, syy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
    syy += (y[i] - my) * (y[i] - my);
  }
  if (sxx == 0) throw Error(ErrorKind::invalid_parameter, "least squares needs distinct x");
  LinearFit f;
  f.points = x.size();
  f.slope = sxy / sxx;
  f.intercept = my - f.slope * mx;
  const double sse = std::max(0.0, syy - f.slope * sxy);
  f.r2 = syy > 0 ? 1.0 - sse / syy : 1.0;
  if (x.size() > 2) f.slope_se = std::sqrt(sse / (n - 2) / sxx);
  return f;
}

Correlation clustered_correlation(const std::vector<double>& a, const std::vector<double>& b,
                                  const std::vector<std::uint64_t>& group) {
  if (a.size() != b.size() || a.size() != group.size()) {
    throw Error(ErrorKind::invalid_parameter, "correlation: size mismatch");
  }
  Correlation c;
  c.pairs = a.size();
  if (a.size() < 2) return c;
  const double n = static_cast<double>(a.size());
  double ma = 0, mb = 0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    ma += a[i];
    mb += b[i];
  }
  ma /= n;
  mb /= n;
  double va = 0, vb = 0, cov = 0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    va += (a[i] - ma) * (a[i] - ma);
    vb += (b[i] - mb) * (b[i] - mb);
    cov += (a[i] - ma) * (b[i] - mb);
  }
  va /= n;
  vb /= n;
  cov /= n;
  if (va <= 0 || vb <= 0) return c;
  const double sd = std::sqrt(va * vb);
  c.r = cov / sd;
  // Sandwich variance of the covariance estimate with cluster sums of the
  // centred products.
  std::map<std::uint64_t, double> sums;
  for (std::size_t i = 0; i < a.size(); ++i) sums[group[i]] += (a[i] - ma) * (b[i] - mb) - cov;
  double var = 0;
  for (const auto& [g, v] : sums) var += v * v;
  var /= n * n;
  c.se = std::sqrt(var) / sd;
  return c;
}

double crossing_point(const std::vector<double>& p, const std::vector<double>& f, double level) {
  if (p.empty() || p.size() != f.size()) throw Error(ErrorKind::invalid_parameter, "crossing_point: bad grid");
  if (f.front() >= level) return p.front();
  for (std::size_t i = 1; i < p.size(); ++i) {
    if (f[i] >= level) {
      const double t = f[i] > f[i - 1] ? (level - f[i - 1]) / (f[i] - f[i - 1]) : 1.0;
      return p[i - 1] + t * (p[i] - p[i - 1]);
    }
  }
  return p.back();
}

}  // namespace vperc
