#include "x4/classifier.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>

namespace x4 {

namespace {

void check_graph(const SingularGraph& g) {
  if (g.vertex_count < 0) throw std::invalid_argument("negative vertex count");
  for (const auto& e : g.edges) {
    if (e.order < (e.virtual_edge ? 1 : 2))
      throw std::invalid_argument("isotropy order must be >= 2 (order 1 is reserved for virtual edges)");
    if (e.kind == GraphEdge::Kind::closed) continue;
    if (e.u < 0 || e.u >= g.vertex_count || e.v < 0 || e.v >= g.vertex_count)
      throw std::invalid_argument("edge endpoint is not a vertex");
    if ((e.kind == GraphEdge::Kind::loop) != (e.u == e.v))
      throw std::invalid_argument("loops must have equal endpoints and only loops may");
  }
}

Rejection reject(const char* t, std::string why) { return {t, std::move(why)}; }

const GraphEdge* find_loop(const SingularGraph& g) {
  for (const auto& e : g.edges)
    if (e.is_loop()) return &e;
  return nullptr;
}

}  // namespace

std::optional<Rejection> validate_graph(const SingularGraph& g) {
  check_graph(g);
  if (g.boundary_fixed_set) return std::nullopt;

  if (g.vertex_count < 2)
    return reject(tag::at_least_two, "an orbit space with isolated fixed points has at least two of them");
  if (g.vertex_count > 3)
    return reject(tag::three_point_bound, "at most three fixed points can have small spaces of directions");

  std::vector<int> degree(g.vertex_count, 0);
  for (const auto& e : g.edges) {
    if (e.kind == GraphEdge::Kind::closed) continue;
    degree[e.u] += 1;
    degree[e.v] += 1;  // a loop lands here twice
  }
  for (int v = 0; v < g.vertex_count; ++v)
    if (degree[v] > 3)
      return reject(tag::degree_bound, "vertex " + std::to_string(v) + " meets " + std::to_string(degree[v]) +
                                           " curve ends; no more than three curves meet at a fixed point");

  for (const auto& e : g.edges)
    if (e.kind == GraphEdge::Kind::closed)
      return reject(tag::no_free_curves, "a closed curve of finite isotropy avoids every fixed point");

  int loop_vertex = -1;
  for (const auto& e : g.edges) {
    if (!e.is_loop()) continue;
    if (loop_vertex >= 0 && loop_vertex != e.u)
      return reject(tag::fig5_dg, "loops at two distinct fixed points: branched covers over both give four small points");
    loop_vertex = e.u;
  }

  if (g.vertex_count == 3) {
    if (loop_vertex >= 0) return reject(tag::three_point_simple, "with three fixed points no curve is a loop");
    for (std::size_t i = 0; i < g.edges.size(); ++i)
      for (std::size_t j = i + 1; j < g.edges.size(); ++j) {
        const auto& a = g.edges[i];
        const auto& b = g.edges[j];
        if (std::minmax(a.u, a.v) == std::minmax(b.u, b.v))
          return reject(tag::three_point_simple, "with three fixed points at most one curve joins each pair");
      }
  }
  return std::nullopt;
}

SingularGraph virtual_edge_completion(const SingularGraph& g) {
  if (g.boundary_fixed_set) throw std::invalid_argument("completion does not apply to fixed-point-homogeneous data");
  if (auto r = validate_graph(g)) throw std::invalid_argument("completion needs a valid graph: " + r->reason);
  SingularGraph out = g;
  auto add_virtual = [&](int u, int v, std::optional<std::int64_t> beta) {
    GraphEdge e;
    e.kind = GraphEdge::Kind::between;
    e.u = u;
    e.v = v;
    e.order = 1;
    e.beta = beta;
    e.virtual_edge = true;
    out.edges.push_back(e);
  };
  if (g.vertex_count == 3) {
    for (int u = 0; u < 3; ++u)
      for (int v = u + 1; v < 3; ++v) {
        bool present = std::any_of(g.edges.begin(), g.edges.end(),
                                   [&](const GraphEdge& e) { return std::minmax(e.u, e.v) == std::minmax(u, v); });
        if (!present) add_virtual(u, v, std::nullopt);
      }
  } else if (const GraphEdge* loop = find_loop(g)) {
    bool has_spur = std::any_of(g.edges.begin(), g.edges.end(),
                                [](const GraphEdge& e) { return e.kind == GraphEdge::Kind::between; });
    if (!has_spur) add_virtual(loop->u, 1 - loop->u, g.virtual_beta);
  }
  return out;
}

GroupPresentation loop_and_spur_presentation(std::int64_t k, std::int64_t beta) {
  GroupPresentation g;
  g.generators = {"q1", "h"};
  g.relators.push_back({1, 2, -1, -2});
  Word w(k, 1);
  w.push_back(-2);
  g.relators.push_back(w);
  g.relators.push_back(Word(beta < 0 ? -beta : beta, beta < 0 ? -2 : 2));
  return g;
}

namespace {

// the cone neighbourhood of the loop vertex, glued to that of the other vertex
GroupPresentation loop_and_spur_union(std::int64_t k, Fiber spur) {
  GroupPresentation g;
  g.generators = {"q1", "q2", "q3", "h"};
  const int h = 4;
  auto power = [](int gen, std::int64_t e) { return Word(e < 0 ? -e : e, e < 0 ? -gen : gen); };
  auto cat = [](Word a, const Word& b) {
    a.insert(a.end(), b.begin(), b.end());
    return a;
  };
  for (int i = 1; i <= 3; ++i) g.relators.push_back({h, i, -h, -i});
  g.relators.push_back(cat(power(1, k), power(h, -1)));
  g.relators.push_back(cat(power(2, k), power(h, 1)));
  g.relators.push_back(cat(power(3, spur.alpha), power(h, spur.beta)));
  g.relators.push_back({1, 2, 3});
  // the far side sees q3 reversed: q3^-alpha h^-beta and q3^-1
  g.relators.push_back(cat(power(3, -spur.alpha), power(h, -spur.beta)));
  g.relators.push_back({-3});
  return g;
}

}  // namespace

LoopSpurPi1 loop_and_spur_pi1(std::int64_t k, Fiber spur) {
  if (k < 2) throw std::invalid_argument("loop isotropy order must be >= 2");
  if (spur.alpha <= 0 || std::gcd(spur.alpha, spur.beta < 0 ? -spur.beta : spur.beta) != 1)
    throw std::invalid_argument("spur must satisfy alpha > 0, gcd(alpha,|beta|) = 1");

  Integer closed = Integer(k) * (spur.beta < 0 ? -spur.beta : spur.beta);
  auto whole = abelianize(loop_and_spur_union(k, spur)).order();
  auto reduced = abelianize(loop_and_spur_presentation(k, spur.beta)).order();
  if (spur.beta != 0) {
    if (!whole || !reduced || *whole != closed || *reduced != closed)
      throw std::logic_error("loop-and-spur group order disagrees with k|beta|");
  } else if (whole || reduced) {
    throw std::logic_error("loop-and-spur group with beta = 0 should be infinite");
  }

  LoopSpurPi1 out{closed, k == 2 && spur.beta != 0, std::nullopt};
  if (spur.beta == 0)
    out.tag = tag::beta_zero;
  else if (k != 2)
    out.tag = tag::k_plus_one;
  return out;
}

ClassificationResult classify(const SingularGraph& g, const std::optional<InvariantTuple>& t) {
  if (auto r = validate_graph(g)) return result::Rejected{*r};

  if (g.boundary_fixed_set) {
    if (!g.soul) throw std::invalid_argument("fixed-point-homogeneous data needs the soul isotropy");
    result::FixedPointHomogeneous out;
    if (!g.soul->circle) {
      if (g.soul->k < 1) throw std::invalid_argument("soul isotropy order must be >= 1");
      out.suspension_of_lens = g.soul->k;
    } else {
      auto w = g.soul->weights.value_or(std::array<std::int64_t, 2>{1, 1});
      if (w[0] == 0 || w[1] == 0) throw std::invalid_argument("soul isotropy weights must be nonzero");
      QuotientDescriptor q;
      // join of S^3 with the circle; the circle factor carries the inverse action
      q.weights = {w[0], w[1], -1};
      out.wcp_quotient = q;
    }
    return out;
  }

  SingularGraph c = virtual_edge_completion(g);

  if (c.vertex_count == 3) {
    if (!t) throw std::invalid_argument("three fixed points: invariants are required");
    if (t->size() != 3) return result::Rejected{reject(tag::out_of_range, "only triples are classified")};
    if (!is_realizable(*t))
      return result::Rejected{reject(tag::irrealizable, "adjacent invariants must be pairwise unequal")};
    std::vector<Integer> from_t, from_graph;
    for (const auto& x : t->entries()) from_t.push_back(denominator(x));
    for (const auto& e : c.edges) from_graph.push_back(e.order);
    std::sort(from_t.begin(), from_t.end());
    std::sort(from_graph.begin(), from_graph.end());
    return result::WCPQuotient{weights_from_invariants(*t), *t, from_t == from_graph};
  }

  if (const GraphEdge* loop = find_loop(c)) {
    const GraphEdge* spur = nullptr;
    for (const auto& e : c.edges)
      if (e.kind == GraphEdge::Kind::between) spur = &e;
    if (loop->order != 2)
      return result::Rejected{reject(tag::k_plus_one, "the universal cover would carry " + std::to_string(loop->order + 1) +
                                                          " fixed points; the loop must have isotropy Z_2")};
    if (!spur->beta) throw std::invalid_argument("loop-and-spur needs beta on the spur");
    Fiber f{spur->order, *spur->beta};
    if (f.beta == 0) return result::Rejected{reject(tag::beta_zero, "beta = 0 makes the boundary S^2 x S^1")};
    auto pi = loop_and_spur_pi1(loop->order, f);
    InvariantTuple lifted({Rational(0), Rational(-f.beta, f.alpha), Rational(f.beta, f.alpha)});
    return result::LoopAndSpur{loop->order, f.beta, f, pi.order, weights_from_invariants(lifted), lifted};
  }

  // two fixed points joined by at most three curves
  result::Suspension s;
  s.type_only = false;
  s.space_of_directions.genus = 0;
  for (const auto& e : c.edges) {
    if (!e.beta) s.type_only = true;
    s.space_of_directions.fibers.push_back({e.order, e.beta.value_or(1)});
  }
  if (s.space_of_directions.fibers.empty()) s.space_of_directions.fibers.push_back({1, 1});
  std::sort(s.space_of_directions.fibers.begin(), s.space_of_directions.fibers.end());
  s.recognition = recognize_boundary(s.space_of_directions);
  if (s.recognition.admissible == false)
    return result::Rejected{reject(s.recognition.kind == BoundaryKind::s2xs1 ? tag::beta_zero : tag::non_spherical,
                                   "the space of directions would be " + to_string(s.recognition.kind))};
  return s;
}

}  // namespace x4
