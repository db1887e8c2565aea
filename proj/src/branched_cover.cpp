#include "x4/branched_cover.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <optional>
#include <queue>
#include <stdexcept>
#include <utility>

#include "x4/parallel.hpp"

namespace x4 {

namespace {

double det4(const Vec4& a, const Vec4& b, const Vec4& c, const Vec4& d) {
  // columns a, b, c, d
  auto m3 = [](double a1, double a2, double a3, double b1, double b2, double b3, double c1, double c2, double c3) {
    return a1 * (b2 * c3 - b3 * c2) - a2 * (b1 * c3 - b3 * c1) + a3 * (b1 * c2 - b2 * c1);
  };
  double r = 0;
  for (int row = 0; row < 4; ++row) {
    int i0 = row == 0 ? 1 : 0, i1 = row <= 1 ? 2 : 1, i2 = row <= 2 ? 3 : 2;
    double minor = m3(b[i0], b[i1], b[i2], c[i0], c[i1], c[i2], d[i0], d[i1], d[i2]);
    r += ((row % 2) ? -1.0 : 1.0) * a[row] * minor;
  }
  return r;
}

Vec4 sub(const Vec4& a, const Vec4& b) { return {a[0] - b[0], a[1] - b[1], a[2] - b[2], a[3] - b[3]}; }

struct Graph {
  std::vector<std::size_t> start;  // CSR
  std::vector<std::size_t> to;
  std::vector<double> w;
};

Graph make_graph(std::size_t n, std::vector<std::tuple<std::size_t, std::size_t, double>> edges) {
  std::vector<std::tuple<std::size_t, std::size_t, double>> both;
  both.reserve(edges.size() * 2);
  for (auto& [u, v, w] : edges) {
    both.emplace_back(u, v, w);
    both.emplace_back(v, u, w);
  }
  std::sort(both.begin(), both.end());
  Graph g;
  g.start.assign(n + 1, 0);
  for (auto& e : both) ++g.start[std::get<0>(e) + 1];
  for (std::size_t i = 0; i < n; ++i) g.start[i + 1] += g.start[i];
  g.to.reserve(both.size());
  g.w.reserve(both.size());
  for (auto& [u, v, w] : both) {
    g.to.push_back(v);
    g.w.push_back(w);
  }
  return g;
}

std::vector<double> dijkstra(const Graph& g, std::size_t src, std::vector<std::size_t>* parent = nullptr) {
  const std::size_t n = g.start.size() - 1;
  std::vector<double> dist(n, std::numeric_limits<double>::infinity());
  if (parent) parent->assign(n, n);
  using Item = std::pair<double, std::size_t>;
  std::priority_queue<Item, std::vector<Item>, std::greater<Item>> pq;
  dist[src] = 0;
  pq.push({0, src});
  while (!pq.empty()) {
    auto [d, u] = pq.top();
    pq.pop();
    if (d > dist[u]) continue;
    for (std::size_t e = g.start[u]; e < g.start[u + 1]; ++e) {
      double nd = d + g.w[e];
      std::size_t v = g.to[e];
      if (nd < dist[v]) {
        dist[v] = nd;
        if (parent) (*parent)[v] = u;
        pq.push({nd, v});
      }
    }
  }
  return dist;
}

struct Layout {
  std::size_t n_base;
  std::array<std::size_t, 2> b;
  std::vector<std::size_t> rank;  // base index -> position among non-branch points

  std::size_t node(std::size_t i, int s) const {
    if (i == b[0]) return 0;
    if (i == b[1]) return 1;
    return 2 + 2 * rank[i] + static_cast<std::size_t>(s);
  }
  std::size_t nodes() const { return 2 + 2 * (n_base - 2); }
};

Layout layout(std::size_t n, std::array<std::size_t, 2> b) {
  Layout l{n, b, std::vector<std::size_t>(n, 0)};
  std::size_t r = 0;
  for (std::size_t i = 0; i < n; ++i)
    if (i != b[0] && i != b[1]) l.rank[i] = r++;
  return l;
}

BranchedCover build(const SampledMetricSpace& base, std::array<std::size_t, 2> b, std::size_t k, std::size_t dense_k) {
  const std::size_t n = base.size();
  const Geometry& geo = *base.geometry;
  k = std::min(k, n - 1);

  // nearest neighbours, ties to the smaller index; the first k form the
  // skeleton that decides the sheets, all `dense` of them carry the metric
  const std::size_t dense = std::max(k, std::min(dense_k, n - 1));
  auto undirected = [&](const std::vector<std::vector<std::size_t>>& nb, std::size_t take) {
    std::vector<std::pair<std::size_t, std::size_t>> pairs;
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t t = 0; t < take; ++t) pairs.emplace_back(std::min(i, nb[i][t]), std::max(i, nb[i][t]));
    std::sort(pairs.begin(), pairs.end());
    pairs.erase(std::unique(pairs.begin(), pairs.end()), pairs.end());
    std::vector<std::tuple<std::size_t, std::size_t, double>> out_edges;
    for (auto [u, v] : pairs) out_edges.emplace_back(u, v, base.d(u, v));
    return out_edges;
  };
  std::vector<std::tuple<std::size_t, std::size_t, double>> knn, metric_edges;
  {
    std::vector<std::vector<std::size_t>> nb(n);
    parallel_for(n, [&](std::size_t i) {
      std::vector<std::size_t> idx(n);
      std::iota(idx.begin(), idx.end(), 0);
      idx.erase(idx.begin() + static_cast<std::ptrdiff_t>(i));
      std::partial_sort(idx.begin(), idx.begin() + static_cast<std::ptrdiff_t>(dense), idx.end(), [&](std::size_t a, std::size_t c) {
        return base.d(i, a) < base.d(i, c) || (base.d(i, a) == base.d(i, c) && a < c);
      });
      nb[i].assign(idx.begin(), idx.begin() + static_cast<std::ptrdiff_t>(dense));
    });
    knn = undirected(nb, k);
    metric_edges = undirected(nb, dense);
  }
  double longest = 0;
  for (auto& e : knn) longest = std::max(longest, std::get<2>(e));

  Graph g = make_graph(n, knn);
  std::vector<std::size_t> parent;
  auto from_b0 = dijkstra(g, b[0], &parent);
  for (double d : from_b0)
    if (!std::isfinite(d)) throw std::runtime_error("neighbour graph of the base is disconnected");

  BranchedCover out;
  for (std::size_t v = b[1]; v != b[0]; v = parent[v]) out.cut.push_back(v);
  out.cut.push_back(b[0]);
  std::reverse(out.cut.begin(), out.cut.end());
  const std::size_t L = out.cut.size() - 1;

  if (L < 2) throw std::runtime_error("branch points are neighbours at this resolution; no room for a cut");
  std::vector<char> on_cut(n, 0);
  for (auto c : out.cut) on_cut[c] = 1;

  // the cut lifted to a continuous path of representatives; the charts sit
  // on this path, so all of them see the same sheet of the group's images
  std::vector<Vec4> lift(L + 1);
  lift[1] = base.points[out.cut[1]];
  for (std::size_t c = 2; c <= L; ++c) lift[c] = geo.align(lift[c - 1], base.points[out.cut[c]]);
  lift[0] = geo.align(lift[1], base.points[out.cut[0]]);

  // segment c joins cut[c] and cut[c+1]; it is drawn in the tangent chart of
  // its interior endpoint, never at a branch point where the chart would fold
  struct Chart {
    Vec4 x, e1, e2;
    std::array<double, 2> p, q;  // the segment
  };
  // gnomonic, so that great circles of the sphere stay straight in the chart
  auto project = [&](const Chart& ch, const Vec4& y) {
    Vec4 a = geo.slide(ch.x, y);
    double c = dot(a, ch.x);
    for (auto& t : a) t /= c;
    Vec4 v = sub(a, ch.x);
    return std::array<double, 2>{dot(v, ch.e1), dot(v, ch.e2)};
  };
  std::vector<Chart> chart(L);
  std::vector<std::size_t> chart_vertex(L);
  for (std::size_t c = 0; c < L; ++c) {
    chart_vertex[c] = std::max<std::size_t>(c, 1);
    Chart& ch = chart[c];
    ch.x = lift[chart_vertex[c]];
    Vec4 f = geo.fiber_direction(ch.x);
    Vec4 t = sub(geo.slide(ch.x, lift[c + 1]), geo.slide(ch.x, lift[c]));
    for (const Vec4& a : {ch.x, f}) {
      double k = dot(t, a) / dot(a, a);
      for (int i = 0; i < 4; ++i) t[i] -= k * a[i];
    }
    double nt = std::sqrt(dot(t, t));
    for (auto& v : t) v /= nt;
    ch.e1 = t;
    // the remaining direction, oriented so that (x, f, e1, e2) is positive
    Vec4 e2{};
    for (int i = 0; i < 4; ++i) {
      Vec4 unit{};
      unit[i] = 1;
      e2[i] = det4(ch.x, f, t, unit);
    }
    double n2 = std::sqrt(dot(e2, e2));
    for (auto& v : e2) v /= n2;
    ch.e2 = e2;
    ch.p = project(ch, lift[c]);
    ch.q = project(ch, lift[c + 1]);
  }
  auto orient = [](const std::array<double, 2>& a, const std::array<double, 2>& b, const std::array<double, 2>& c) {
    return (b[0] - a[0]) * (c[1] - a[1]) - (b[1] - a[1]) * (c[0] - a[0]);
  };
  double reach = 0, cut_length = 0;  // segments further than reach from both endpoints miss the edge
  for (std::size_t c = 0; c < L; ++c) {
    reach = std::max(reach, base.d(out.cut[c], out.cut[c + 1]));
    cut_length += base.d(out.cut[c], out.cut[c + 1]);
  }
  reach += longest;
  const double near_cos = std::cos(std::min(reach, 1.0));

  std::vector<std::size_t> cut_pos(n, 0);
  for (std::size_t c = 0; c <= L; ++c) cut_pos[out.cut[c]] = c;
  // an endpoint on the cut is nudged off it to the right, along the bisector
  // of the right normals of its two segments; `rep` is its representative
  auto place = [&](std::size_t k, std::size_t y, const Vec4& rep) {
    auto a = project(chart[k], rep);
    if (!on_cut[y]) return a;
    std::size_t c = cut_pos[y];
    auto near = [&](std::size_t z) { return project(chart[k], geo.align(rep, base.points[z])); };
    auto prev = near(out.cut[c - 1]), next = near(out.cut[c + 1]);
    auto right = [](const std::array<double, 2>& from, const std::array<double, 2>& to) {
      double dx = to[0] - from[0], dy = to[1] - from[1], l = std::hypot(dx, dy);
      return std::array<double, 2>{dy / l, -dx / l};
    };
    auto n1 = right(prev, a), n2 = right(a, next);
    std::array<double, 2> dir{n1[0] + n2[0], n1[1] + n2[1]};
    double l = std::hypot(dir[0], dir[1]);
    if (l < 1e-6) dir = n1, l = 1;
    const double nudge = 1e-7;
    return std::array<double, 2>{a[0] + nudge * dir[0] / l, a[1] + nudge * dir[1] / l};
  };
  // The edge is lifted once, as a geodesic between adjacent representatives,
  // and every group image of that lift is tested against the lifted cut: a
  // crossing downstairs is exactly one image meeting one segment. Near a
  // branch point with isotropy several images pass close to the path.
  auto crosses = [&](std::size_t u, std::size_t v) {
    std::size_t anchor = 1;
    for (std::size_t c = 2; c < L; ++c)
      if (base.d(u, out.cut[c]) < base.d(u, out.cut[anchor])) anchor = c;
    Vec4 us = geo.align(lift[anchor], base.points[u]);
    Vec4 vs = geo.align(us, base.points[v]);
    auto iu = geo.images(us), iv = geo.images(vs);
    // images differing by an element of the circle are the same edge
    std::vector<std::size_t> distinct;
    for (std::size_t g = 0; g < iu.size(); ++g) {
      bool repeat = false;
      for (std::size_t h : distinct) {
        Vec4 a = geo.slide(iu[h], iu[g]), bb = geo.slide(iv[h], iv[g]);
        if (dot(a, iu[h]) > 1 - 1e-12 && dot(bb, iv[h]) > 1 - 1e-12) repeat = true;
      }
      if (!repeat) distinct.push_back(g);
    }
    int parity = 0;
    for (std::size_t g : distinct) {
      // which side of the line uv each cut vertex lies on is decided once, in
      // the vertex's own chart, so neighbouring segments never disagree about it
      std::vector<std::optional<std::array<std::array<double, 2>, 2>>> seen(L);
      auto in_chart = [&](std::size_t c) -> const std::array<std::array<double, 2>, 2>& {
        if (!seen[c]) seen[c] = std::array<std::array<double, 2>, 2>{place(c, u, iu[g]), place(c, v, iv[g])};
        return *seen[c];
      };
      auto vertex_side = [&](std::size_t c) {
        std::size_t k = std::min(c, L - 1);
        const auto& ab = in_chart(k);
        std::array<double, 2> z = c == 0 ? chart[0].p : c == L ? chart[L - 1].q : std::array<double, 2>{0, 0};
        return orient(ab[0], ab[1], z) > 0;
      };
      for (std::size_t c = 0; c < L; ++c) {
        const Chart& ch = chart[c];
        if (dot(geo.slide(ch.x, iu[g]), ch.x) < near_cos && dot(geo.slide(ch.x, iv[g]), ch.x) < near_cos) continue;
        const auto& ab = in_chart(c);
        bool split_edge = (orient(ch.p, ch.q, ab[0]) > 0) != (orient(ch.p, ch.q, ab[1]) > 0);
        if (split_edge && vertex_side(c) != vertex_side(c + 1)) parity ^= 1;
      }
    }
    return parity == 1;
  };

  Layout lay = layout(n, b);
  std::vector<std::tuple<std::size_t, std::size_t, double>> edges;
  std::vector<char> cross(knn.size(), 0);
  parallel_for(knn.size(), [&](std::size_t e) {
    auto [u, v, w] = knn[e];
    if (u == b[0] || u == b[1] || v == b[0] || v == b[1]) return;
    if (std::min(base.d(u, out.cut[1]), base.d(v, out.cut[1])) > cut_length + reach) return;
    cross[e] = crosses(u, v);
  });
  auto stars = [&](std::vector<std::tuple<std::size_t, std::size_t, double>>& es) {
    // a geodesic from a branch point lifts to either sheet, so the stars are exact
    for (int bi = 0; bi < 2; ++bi)
      for (std::size_t v = 0; v < n; ++v) {
        if (v == b[0] || v == b[1]) continue;
        for (int s = 0; s < 2; ++s) es.emplace_back(lay.node(b[bi], 0), lay.node(v, s), base.d(b[bi], v));
      }
    es.emplace_back(0, 1, base.d(b[0], b[1]));
  };
  for (std::size_t e = 0; e < knn.size(); ++e) {
    auto [u, v, w] = knn[e];
    if (u == b[0] || u == b[1] || v == b[0] || v == b[1]) continue;  // covered by the stars
    for (int s = 0; s < 2; ++s) edges.emplace_back(lay.node(u, s), lay.node(v, cross[e] ? 1 - s : s), w);
  }
  stars(edges);
  const std::size_t m = lay.nodes();
  Graph skeleton = make_graph(m, std::move(edges));

  // each dense edge joins the lifts that the skeleton cover puts closer
  // together; where the skeleton cannot tell, both lifts are about equally far
  std::vector<std::vector<std::size_t>> from(n);
  for (std::size_t e = 0; e < metric_edges.size(); ++e) from[std::get<0>(metric_edges[e])].push_back(e);
  std::vector<char> swap_sheets(metric_edges.size(), 0);
  parallel_for(n, [&](std::size_t u) {
    if (from[u].empty() || u == b[0] || u == b[1]) return;
    auto d = dijkstra(skeleton, lay.node(u, 0));
    for (auto e : from[u]) {
      std::size_t v = std::get<1>(metric_edges[e]);
      if (v == b[0] || v == b[1]) continue;
      swap_sheets[e] = d[lay.node(v, 1)] < d[lay.node(v, 0)];
    }
  });
  // an edge that passes close to a branch point has two lifts of nearly equal
  // length, too close for the skeleton to separate; which side of the branch
  // point it passes is read off the cut directly, and a mistake there costs no
  // more than that small difference
  auto grazes = [&](std::size_t u, std::size_t v, double w) {
    for (auto bi : b)
      if (base.d(u, bi) + base.d(bi, v) < w + longest) return true;
    return false;
  };
  parallel_for(metric_edges.size(), [&](std::size_t e) {
    auto [u, v, w] = metric_edges[e];
    if (u == b[0] || u == b[1] || v == b[0] || v == b[1] || !grazes(u, v, w)) return;
    swap_sheets[e] = crosses(u, v);
  });
  std::vector<std::tuple<std::size_t, std::size_t, double>> lifted;
  for (std::size_t e = 0; e < metric_edges.size(); ++e) {
    auto [u, v, w] = metric_edges[e];
    if (u == b[0] || u == b[1] || v == b[0] || v == b[1]) continue;
    for (int s = 0; s < 2; ++s) lifted.emplace_back(lay.node(u, s), lay.node(v, swap_sheets[e] ? 1 - s : s), w);
  }
  stars(lifted);
  Graph cg = make_graph(m, std::move(lifted));

  SampledMetricSpace& cs = out.space;
  cs.points.resize(m);
  out.base_index.resize(m);
  out.sheet.resize(m);
  for (std::size_t i = 0; i < n; ++i)
    for (int s = 0; s < 2; ++s) {
      std::size_t id = lay.node(i, s);
      cs.points[id] = base.points[i];
      out.base_index[id] = i;
      out.sheet[id] = (i == b[0] || i == b[1]) ? -1 : s;
    }
  out.branch = {0, 1};
  cs.dist.assign(m * m, 0.0);
  parallel_for(m, [&](std::size_t src) {
    auto d = dijkstra(cg, src);
    for (std::size_t j = 0; j < m; ++j) cs.dist[src * m + j] = d[j];
  });
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = i + 1; j < m; ++j) {
      double d = std::min(cs.dist[i * m + j], cs.dist[j * m + i]);
      if (!std::isfinite(d)) throw std::runtime_error("cover graph is disconnected");
      cs.dist[i * m + j] = cs.dist[j * m + i] = d;
    }
  for (const auto& mp : base.marked) {
    if (mp.index == b[0] || mp.index == b[1]) {
      cs.marked.push_back({lay.node(mp.index, 0), "branch " + mp.label, mp.isotropy_order});
      continue;
    }
    for (int s = 0; s < 2; ++s) cs.marked.push_back({lay.node(mp.index, s), mp.label + " sheet " + std::to_string(s), mp.isotropy_order});
  }
  std::sort(cs.marked.begin(), cs.marked.end(), [](const MarkedPoint& a, const MarkedPoint& c) { return a.index < c.index; });
  cs.samples = base.samples;
  cs.seed = base.seed;
  cs.label = "double branched cover of " + base.label;
  return out;
}

// compare the two covers on the coarse points; same-sheet and cross-sheet
// distances are taken as an unordered pair, which a relabelling of sheets
// (a different cut) leaves alone
double drift(const BranchedCover& a, const BranchedCover& b, std::size_t n_coarse, std::array<std::size_t, 2> br) {
  Layout la = layout(n_coarse, br);
  Layout lb = layout(b.base_index.size() / 2 + 1, br);
  const std::size_t ma = a.space.size(), mb = b.space.size();
  std::vector<double> worst(n_coarse, 0.0);
  parallel_for(n_coarse, [&](std::size_t x) {
    double w = 0;
    for (std::size_t y = x + 1; y < n_coarse; ++y) {
      std::array<double, 2> da = {a.space.dist[la.node(x, 0) * ma + la.node(y, 0)], a.space.dist[la.node(x, 0) * ma + la.node(y, 1)]};
      std::array<double, 2> db = {b.space.dist[lb.node(x, 0) * mb + lb.node(y, 0)], b.space.dist[lb.node(x, 0) * mb + lb.node(y, 1)]};
      std::sort(da.begin(), da.end());
      std::sort(db.begin(), db.end());
      w = std::max({w, std::abs(da[0] - db[0]), std::abs(da[1] - db[1])});
    }
    bool branch = x == br[0] || x == br[1];
    if (!branch) {
      double sa = a.space.dist[la.node(x, 0) * ma + la.node(x, 1)];
      double sb = b.space.dist[lb.node(x, 0) * mb + lb.node(x, 1)];
      w = std::max(w, std::abs(sa - sb));
    }
    worst[x] = w;
  });
  return *std::max_element(worst.begin(), worst.end());
}

}  // namespace

BranchedCover double_branched_cover(const SampledMetricSpace& base, std::array<std::size_t, 2> branch, const CoverOptions& opt) {
  if (!base.geometry) throw std::invalid_argument("branched cover needs a sampled base with known geometry");
  if (branch[0] == branch[1]) throw std::invalid_argument("branch points coincide");
  for (auto b : branch) {
    bool marked = std::any_of(base.marked.begin(), base.marked.end(), [&](const MarkedPoint& m) { return m.index == b; });
    if (!marked) throw std::invalid_argument("branch points must be marked points");
  }
  if (base.d(branch[0], branch[1]) < 1e-12) throw std::invalid_argument("branch points coincide");
  if (base.size() < 3) throw std::invalid_argument("base too small for a cover");

  BranchedCover out = build(base, branch, opt.neighbours, opt.metric_neighbours);
  out.certificate.threshold = 2 * opt.tol;
  if (!opt.certify) return out;

  SampledMetricSpace fine = base.geometry->sample(2 * base.samples);
  for (std::size_t i = 0; i < base.size(); ++i)
    if (fine.points[i] != base.points[i]) throw std::logic_error("refined sample does not extend the coarse one");
  BranchedCover refined = build(fine, branch, opt.neighbours, opt.metric_neighbours);

  auto& c = out.certificate;
  c.computed = true;
  c.n_coarse = base.samples;
  c.n_fine = fine.samples;
  c.drift = drift(out, refined, base.size(), branch);
  c.achieved = c.drift <= c.threshold;
  return out;
}

}  // namespace x4
