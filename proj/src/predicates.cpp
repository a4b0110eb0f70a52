#include "vperc/predicates.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <vector>

namespace vperc {
namespace {

constexpr double kEps = 0x1p-53;
constexpr double kCcwBound = (3.0 + 16.0 * kEps) * kEps;
constexpr double kIccBound = (10.0 + 96.0 * kEps) * kEps;

using Expansion = std::vector<double>;

inline void two_sum(double a, double b, double& x, double& y) {
  x = a + b;
  const double bv = x - a;
  const double av = x - bv;
  y = (a - av) + (b - bv);
}

inline void fast_two_sum(double a, double b, double& x, double& y) {
  x = a + b;
  y = b - (x - a);
}

inline void two_product(double a, double b, double& x, double& y) {
  x = a * b;
  y = std::fma(a, b, -x);
}

// Shewchuk's fast_expansion_sum_zeroelim with explicit bounds checks.
Expansion sum(const Expansion& e, const Expansion& f) {
  Expansion h;
  h.reserve(e.size() + f.size());
  std::size_t ei = 0, fi = 0;
  const auto take = [&]() {
    const double en = e[ei];
    const double fn = f[fi];
    if ((fn > en) == (fn > -en)) {
      ++ei;
      return en;
    }
    ++fi;
    return fn;
  };
  double q;
  if (ei < e.size() && fi < f.size()) {
    q = take();
  } else if (ei < e.size()) {
    q = e[ei++];
  } else if (fi < f.size()) {
    q = f[fi++];
  } else {
    return {0.0};
  }
  double qn, hh;
  bool first = true;
  while (ei < e.size() && fi < f.size()) {
    const double now = take();
    if (first) {
      fast_two_sum(now, q, qn, hh);
      first = false;
    } else {
      two_sum(q, now, qn, hh);
    }
    q = qn;
    if (hh != 0.0) h.push_back(hh);
  }
  while (ei < e.size()) {
    two_sum(q, e[ei++], qn, hh);
    q = qn;
    if (hh != 0.0) h.push_back(hh);
  }
  while (fi < f.size()) {
    two_sum(q, f[fi++], qn, hh);
    q = qn;
    if (hh != 0.0) h.push_back(hh);
  }
  if (q != 0.0 || h.empty()) h.push_back(q);
  return h;
}

Expansion scale(const Expansion& e, double b) {
  Expansion h;
  h.reserve(2 * e.size());
  double q, hh;
  two_product(e[0], b, q, hh);
  if (hh != 0.0) h.push_back(hh);
  for (std::size_t i = 1; i < e.size(); ++i) {
    double p1, p0, s;
    two_product(e[i], b, p1, p0);
    two_sum(q, p0, s, hh);
    if (hh != 0.0) h.push_back(hh);
    fast_two_sum(p1, s, q, hh);
    if (hh != 0.0) h.push_back(hh);
  }
  if (q != 0.0 || h.empty()) h.push_back(q);
  return h;
}

Expansion product(const Expansion& a, const Expansion& b) {
  Expansion acc{0.0};
  for (double t : a) acc = sum(acc, scale(b, t));
  return acc;
}

Expansion negate(Expansion e) {
  for (double& t : e) t = -t;
  return e;
}

Expansion prod2(double a, double b) {
  double x, y;
  two_product(a, b, x, y);
  if (y == 0.0) return {x};
  return {y, x};
}

double sign_of(const Expansion& e) {
  for (auto it = e.rbegin(); it != e.rend(); ++it) {
    if (*it != 0.0) return *it > 0.0 ? 1.0 : -1.0;
  }
  return 0.0;
}

// ax*by - ax*cy - ay*bx + ay*cx + bx*cy - by*cx, evaluated without rounding.
Expansion orient_exact(Vec2 a, Vec2 b, Vec2 c) {
  Expansion e = prod2(a.x, b.y);
  e = sum(e, prod2(-a.x, c.y));
  e = sum(e, prod2(-a.y, b.x));
  e = sum(e, prod2(a.y, c.x));
  e = sum(e, prod2(b.x, c.y));
  e = sum(e, prod2(-b.y, c.x));
  return e;
}

Expansion lift_exact(Vec2 a) { return sum(prod2(a.x, a.x), prod2(a.y, a.y)); }

double incircle_exact(Vec2 a, Vec2 b, Vec2 c, Vec2 d) {
  Expansion t = product(lift_exact(a), orient_exact(b, c, d));
  t = sum(t, negate(product(lift_exact(b), orient_exact(a, c, d))));
  t = sum(t, product(lift_exact(c), orient_exact(a, b, d)));
  t = sum(t, negate(product(lift_exact(d), orient_exact(a, b, c))));
  return sign_of(t);
}

}  // namespace

double orient2d(Vec2 a, Vec2 b, Vec2 c) {
  const double l = (a.x - c.x) * (b.y - c.y);
  const double r = (a.y - c.y) * (b.x - c.x);
  const double det = l - r;
  const double bound = kCcwBound * (std::fabs(l) + std::fabs(r));
  if (det > bound || -det > bound) return det;
  return sign_of(orient_exact(a, b, c));
}

double incircle_raw(Vec2 a, Vec2 b, Vec2 c, Vec2 d) {
  const double adx = a.x - d.x, ady = a.y - d.y;
  const double bdx = b.x - d.x, bdy = b.y - d.y;
  const double cdx = c.x - d.x, cdy = c.y - d.y;
  const double bc = bdx * cdy, cb = cdx * bdy;
  const double ca = cdx * ady, ac = adx * cdy;
  const double ab = adx * bdy, ba = bdx * ady;
  const double al = adx * adx + ady * ady;
  const double bl = bdx * bdx + bdy * bdy;
  const double cl = cdx * cdx + cdy * cdy;
  const double det = al * (bc - cb) + bl * (ca - ac) + cl * (ab - ba);
  const double perm = (std::fabs(bc) + std::fabs(cb)) * al + (std::fabs(ca) + std::fabs(ac)) * bl +
                      (std::fabs(ab) + std::fabs(ba)) * cl;
  const double bound = kIccBound * perm;
  if (det > bound || -det > bound) return det;
  return incircle_exact(a, b, c, d);
}

InCircle in_circle(Vec2 a, Vec2 b, Vec2 c, Vec2 d) {
  const double o = orient2d(a, b, c);
  if (o == 0.0) throw Error(ErrorKind::degenerate_input, "in_circle: a, b, c are collinear");
  double v = incircle_raw(a, b, c, d);
  if (o < 0.0) v = -v;
  if (v > 0.0) return InCircle::inside;
  if (v < 0.0) return InCircle::outside;
  return InCircle::on;
}

int incircle_perturbed(Vec2 a, Vec2 b, Vec2 c, Vec2 d, PerturbKey ka, PerturbKey kb, PerturbKey kc,
                       PerturbKey kd, bool* tie) {
  const double v = incircle_raw(a, b, c, d);
  if (v != 0.0) return v > 0.0 ? 1 : -1;
  if (tie) *tie = true;
  // Lifting point q by eps_q changes the determinant by eps_q times its
  // cofactor; the largest key carries the dominant infinitesimal.
  struct Term {
    PerturbKey key;
    double cof;
  };
  std::array<Term, 4> terms{{{ka, orient2d(d, b, c)},
                             {kb, orient2d(d, c, a)},
                             {kc, orient2d(d, a, b)},
                             {kd, -orient2d(a, b, c)}}};
  std::sort(terms.begin(), terms.end(),
            [](const Term& x, const Term& y) { return y.key < x.key; });
  for (const auto& t : terms) {
    if (t.cof > 0.0) return 1;
    if (t.cof < 0.0) return -1;
  }
  return -1;
}

Vec2 circumcentre(Vec2 a, Vec2 b, Vec2 c) {
  const Vec2 ba = b - a, ca = c - a;
  const double bl = norm2(ba), cl = norm2(ca);
  const double den = 2.0 * cross(ba, ca);
  return {a.x + (ca.y * bl - ba.y * cl) / den, a.y + (ba.x * cl - ca.x * bl) / den};
}

}  // namespace vperc
