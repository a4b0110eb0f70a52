#include "vperc/delaunay.hpp"

#include <algorithm>
#include <cstdint>
#include <numeric>

namespace vperc {
namespace {

constexpr int kInf = -1;

std::uint64_t hilbert_index(std::uint32_t x, std::uint32_t y, int order) {
  std::uint64_t d = 0;
  for (std::uint32_t s = 1u << (order - 1); s > 0; s >>= 1) {
    const std::uint32_t rx = (x & s) ? 1 : 0;
    const std::uint32_t ry = (y & s) ? 1 : 0;
    d += static_cast<std::uint64_t>(s) * s * ((3 * rx) ^ ry);
    if (ry == 0) {
      if (rx == 1) {
        x = s - 1 - x;
        y = s - 1 - y;
      }
      std::swap(x, y);
    }
  }
  return d;
}

std::vector<int> hilbert_order(const std::vector<Vec2>& p) {
  double x1 = p[0].x, x2 = p[0].x, y1 = p[0].y, y2 = p[0].y;
  for (const auto& q : p) {
    x1 = std::min(x1, q.x);
    x2 = std::max(x2, q.x);
    y1 = std::min(y1, q.y);
    y2 = std::max(y2, q.y);
  }
  const double span = std::max({x2 - x1, y2 - y1, 1e-300});
  constexpr int order = 16;
  const double scale = static_cast<double>((1u << order) - 1) / span;
  std::vector<std::pair<std::uint64_t, int>> keyed(p.size());
  for (std::size_t i = 0; i < p.size(); ++i) {
    const auto hx = static_cast<std::uint32_t>((p[i].x - x1) * scale);
    const auto hy = static_cast<std::uint32_t>((p[i].y - y1) * scale);
    keyed[i] = {hilbert_index(hx, hy, order), static_cast<int>(i)};
  }
  std::sort(keyed.begin(), keyed.end());
  std::vector<int> out(p.size());
  for (std::size_t i = 0; i < p.size(); ++i) out[i] = keyed[i].second;
  return out;
}

class Builder {
 public:
  Builder(const std::vector<Vec2>& p, const std::vector<PerturbKey>& k) : P(p), K(k) {
    start_.assign(p.size() + 1, -1);
    start_stamp_.assign(p.size() + 1, 0);
  }

  void run();
  Triangulation finish();

 private:
  using Tri = Triangulation::Tri;

  bool conflict(int t, int p);
  int locate(int p);
  void insert(int p);
  int alloc();
  void link_brute(const std::vector<int>& ts);

  const std::vector<Vec2>& P;
  const std::vector<PerturbKey>& K;
  std::vector<Tri> T;
  std::vector<char> dead_;
  std::vector<int> free_;
  std::vector<std::uint32_t> in_, out_;
  std::uint32_t stamp_ = 0;
  std::vector<int> start_;
  std::vector<std::uint32_t> start_stamp_;
  int last_ = 0;
  std::size_t ties_ = 0;
  std::uint32_t turn_ = 0;

  struct Border {
    int u, v, outside, slot;
  };
  std::vector<int> stack_, cavity_;
  std::vector<Border> border_;
};

int Builder::alloc() {
  if (!free_.empty()) {
    const int t = free_.back();
    free_.pop_back();
    dead_[t] = 0;
    return t;
  }
  T.push_back({});
  dead_.push_back(0);
  in_.push_back(0);
  out_.push_back(0);
  return static_cast<int>(T.size()) - 1;
}

bool Builder::conflict(int t, int p) {
  const Tri& tr = T[t];
  const int k = tr.index_of(kInf);
  const Vec2 q = P[p];
  if (k >= 0) {
    const Vec2 a = P[tr.v[(k + 1) % 3]];
    const Vec2 b = P[tr.v[(k + 2) % 3]];
    const double o = orient2d(a, b, q);
    if (o != 0.0) return o > 0.0;
    if (a.x != b.x) return (q.x > std::min(a.x, b.x)) && (q.x < std::max(a.x, b.x));
    return (q.y > std::min(a.y, b.y)) && (q.y < std::max(a.y, b.y));
  }
  const int a = tr.v[0], b = tr.v[1], c = tr.v[2];
  bool tie = false;
  const int s = incircle_perturbed(P[a], P[b], P[c], q, K[a], K[b], K[c], K[p], &tie);
  if (tie) ++ties_;
  return s > 0;
}

int Builder::locate(int p) {
  const Vec2 q = P[p];
  int t = last_;
  const std::size_t limit = 4 * T.size() + 64;
  for (std::size_t step = 0; step < limit; ++step) {
    const Tri& tr = T[t];
    const int k = tr.index_of(kInf);
    if (k >= 0) {
      if (conflict(t, p)) return t;
      t = tr.n[k];
      continue;
    }
    const std::uint32_t r = turn_++ % 3;
    int next = -1;
    for (std::uint32_t j = 0; j < 3; ++j) {
      const std::uint32_t e = (r + j) % 3;
      if (orient2d(P[tr.v[(e + 1) % 3]], P[tr.v[(e + 2) % 3]], q) < 0.0) {
        next = tr.n[e];
        break;
      }
    }
    if (next < 0) return t;
    t = next;
  }
  for (std::size_t i = 0; i < T.size(); ++i) {
    if (!dead_[i] && conflict(static_cast<int>(i), p)) return static_cast<int>(i);
  }
  throw Error(ErrorKind::degenerate_input, "point location failed");
}

void Builder::insert(int p) {
  const int t0 = locate(p);
  ++stamp_;
  stack_.assign(1, t0);
  cavity_.clear();
  border_.clear();
  in_[t0] = stamp_;
  while (!stack_.empty()) {
    const int t = stack_.back();
    stack_.pop_back();
    cavity_.push_back(t);
    for (int i = 0; i < 3; ++i) {
      const int nb = T[t].n[i];
      if (in_[nb] == stamp_) continue;
      if (out_[nb] != stamp_ && conflict(nb, p)) {
        in_[nb] = stamp_;
        stack_.push_back(nb);
        continue;
      }
      out_[nb] = stamp_;
      const int slot = T[nb].n[0] == t ? 0 : T[nb].n[1] == t ? 1 : 2;
      border_.push_back({T[t].v[(i + 1) % 3], T[t].v[(i + 2) % 3], nb, slot});
    }
  }
  for (const int t : cavity_) {
    dead_[t] = 1;
    free_.push_back(t);
  }
  std::vector<int>& made = stack_;
  made.clear();
  for (const Border& b : border_) {
    const int t = alloc();
    T[t].v = {b.u, b.v, p};
    T[t].n = {-1, -1, b.outside};
    T[b.outside].n[b.slot] = t;
    const std::size_t su = static_cast<std::size_t>(b.u + 1);
    start_[su] = t;
    start_stamp_[su] = stamp_;
    made.push_back(t);
  }
  for (const int t : made) {
    const std::size_t sv = static_cast<std::size_t>(T[t].v[1] + 1);
    if (start_stamp_[sv] != stamp_) throw Error(ErrorKind::degenerate_input, "cavity is not star-shaped");
    const int w = start_[sv];
    T[t].n[0] = w;
    T[w].n[1] = t;
  }
  last_ = made.front();
}

void Builder::link_brute(const std::vector<int>& ts) {
  for (const int a : ts) {
    for (int i = 0; i < 3; ++i) {
      const int u = T[a].v[(i + 1) % 3], v = T[a].v[(i + 2) % 3];
      for (const int b : ts) {
        if (b == a) continue;
        for (int j = 0; j < 3; ++j) {
          if (T[b].v[(j + 1) % 3] == v && T[b].v[(j + 2) % 3] == u) T[a].n[i] = b;
        }
      }
    }
  }
}

void Builder::run() {
  const int n = static_cast<int>(P.size());
  const std::vector<int> order = hilbert_order(P);
  const int a = order[0];
  int b = -1, c = -1;
  for (int i = 1; i < n && c < 0; ++i) {
    const int q = order[i];
    if (b < 0) {
      b = q;
    } else if (orient2d(P[a], P[b], P[q]) != 0.0) {
      c = q;
    }
  }
  if (c < 0) throw Error(ErrorKind::degenerate_input, "all sites are collinear");
  if (orient2d(P[a], P[b], P[c]) < 0.0) std::swap(b, c);

  std::vector<int> init;
  for (int i = 0; i < 4; ++i) init.push_back(alloc());
  T[init[0]].v = {a, b, c};
  T[init[1]].v = {b, a, kInf};
  T[init[2]].v = {c, b, kInf};
  T[init[3]].v = {a, c, kInf};
  link_brute(init);
  last_ = init[0];

  for (const int q : order) {
    if (q == a || q == b || q == c) continue;
    insert(q);
  }
}

Triangulation Builder::finish() {
  Triangulation out;
  out.points = P;
  out.ties = ties_;
  std::vector<int> remap(T.size(), -1);
  for (std::size_t i = 0; i < T.size(); ++i) {
    if (!dead_[i]) {
      remap[i] = static_cast<int>(out.tris.size());
      out.tris.push_back(T[i]);
    }
  }
  out.vertex_tri.assign(P.size(), -1);
  for (std::size_t i = 0; i < out.tris.size(); ++i) {
    auto& t = out.tris[i];
    for (int k = 0; k < 3; ++k) {
      t.n[k] = remap[t.n[k]];
      if (t.v[k] >= 0) out.vertex_tri[t.v[k]] = static_cast<int>(i);
    }
  }
  return out;
}

}  // namespace

std::vector<int> Triangulation::fan(int vertex) const {
  std::vector<int> out;
  const int t0 = vertex_tri[vertex];
  int t = t0;
  do {
    out.push_back(t);
    const int k = tris[t].index_of(vertex);
    t = tris[t].n[(k + 1) % 3];
  } while (t != t0 && out.size() <= tris.size());
  return out;
}

Triangulation delaunay(std::vector<Vec2> points, const std::vector<PerturbKey>& keys) {
  if (points.size() < 3) throw Error(ErrorKind::degenerate_input, "need at least three sites");
  if (keys.size() != points.size()) throw Error(ErrorKind::invalid_parameter, "one key per point");
  std::vector<int> idx(points.size());
  std::iota(idx.begin(), idx.end(), 0);
  std::sort(idx.begin(), idx.end(), [&](int i, int j) {
    return points[i].x != points[j].x ? points[i].x < points[j].x : points[i].y < points[j].y;
  });
  for (std::size_t i = 1; i < idx.size(); ++i) {
    if (points[idx[i]] == points[idx[i - 1]]) {
      throw Error(ErrorKind::degenerate_input, "duplicate site");
    }
  }
  Builder b(points, keys);
  b.run();
  return b.finish();
}

}  // namespace vperc
