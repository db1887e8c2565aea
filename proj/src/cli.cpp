#include "x4/cli.hpp"

#include <algorithm>
#include <fstream>
#include <iostream>
#include <numbers>
#include <sstream>
#include <stdexcept>

#include <CLI11.hpp>
#include <json.hpp>

#include "x4/branched_cover.hpp"
#include "x4/classifier.hpp"
#include "x4/extent.hpp"
#include "x4/invariants.hpp"
#include "x4/qprime.hpp"
#include "x4/seifert.hpp"
#include "x4/wcp.hpp"

namespace x4::cli {

using nlohmann::json;

namespace {

const std::vector<std::string> commands = {"canon", "equiv", "euler", "seifert-pi1", "seifert-recognize",
                                           "wcp", "classify", "extent", "check-q", "replay"};

struct InvalidInput : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct Options {
  std::optional<std::uint64_t> seed;
  std::optional<std::size_t> samples;
  double tol = 0.02;
  std::string format = "json";
};

// ---------------------------------------------------------------- schema

[[noreturn]] void bad(const std::string& where, const std::string& what) { throw InvalidInput(where + ": " + what); }

const json& field(const json& j, const std::string& key, const std::string& where) {
  if (!j.is_object()) bad(where, "expected an object");
  auto it = j.find(key);
  if (it == j.end()) bad(where, "missing \"" + key + "\"");
  return *it;
}

void only_keys(const json& j, std::initializer_list<const char*> keys, const std::string& where) {
  if (!j.is_object()) bad(where, "expected an object");
  for (auto it = j.begin(); it != j.end(); ++it)
    if (std::none_of(keys.begin(), keys.end(), [&](const char* k) { return it.key() == k; }))
      bad(where, "unexpected key \"" + it.key() + "\"");
}

std::int64_t as_int(const json& j, const std::string& where) {
  if (!j.is_number_integer()) bad(where, "expected an integer");
  return j.get<std::int64_t>();
}

Rational as_rational(const json& j, const std::string& where) {
  if (j.is_number_integer()) return Rational(j.get<std::int64_t>());
  if (!j.is_string()) bad(where, "expected a rational as a string \"p/q\" or \"p\"");
  try {
    return parse_rational(j.get<std::string>());
  } catch (const std::invalid_argument& e) {
    bad(where, e.what());
  }
}

InvariantTuple as_tuple(const json& j, const std::string& where) {
  if (!j.is_array() || j.size() < 2) bad(where, "expected an array of at least two rationals");
  std::vector<Rational> v;
  for (std::size_t i = 0; i < j.size(); ++i) v.push_back(as_rational(j[i], where + "[" + std::to_string(i) + "]"));
  return InvariantTuple(std::move(v));
}

json tuple_json(const InvariantTuple& t) {
  json a = json::array();
  for (const auto& x : t.entries()) a.push_back(to_string(x));
  return a;
}

json rational_list(const std::vector<Rational>& v) {
  json a = json::array();
  for (const auto& x : v) a.push_back(to_string(x));
  return a;
}

json integer_json(const Integer& v) {
  if (v >= std::numeric_limits<std::int64_t>::min() && v <= std::numeric_limits<std::int64_t>::max())
    return static_cast<std::int64_t>(v);
  return v.str();
}

SeifertPresentation as_seifert(const json& j, const std::string& where) {
  only_keys(j, {"genus", "fibers"}, where);
  SeifertPresentation p;
  p.genus = static_cast<int>(as_int(field(j, "genus", where), where + ".genus"));
  if (p.genus != 0) bad(where + ".genus", "only genus 0 is supported");
  const json& f = field(j, "fibers", where);
  if (!f.is_array()) bad(where + ".fibers", "expected an array of [alpha, beta] pairs");
  for (std::size_t i = 0; i < f.size(); ++i) {
    std::string w = where + ".fibers[" + std::to_string(i) + "]";
    if (!f[i].is_array() || f[i].size() != 2) bad(w, "expected [alpha, beta]");
    Fiber fb{as_int(f[i][0], w), as_int(f[i][1], w)};
    if (fb.alpha <= 0) bad(w, "alpha must be positive");
    if (std::gcd(fb.alpha, fb.beta < 0 ? -fb.beta : fb.beta) != 1) bad(w, "alpha and beta must be coprime");
    p.fibers.push_back(fb);
  }
  p.trivial_fibration = p.fibers.empty();
  return p;
}

json seifert_json(const SeifertPresentation& p) {
  json f = json::array();
  for (const auto& x : p.fibers) f.push_back({x.alpha, x.beta});
  return {{"genus", p.genus}, {"fibers", f}};
}

SingularGraph as_graph(const json& j, const std::string& where) {
  only_keys(j, {"vertices", "edges", "boundary_fixed_set", "soul", "virtual_beta", "invariants"}, where);
  SingularGraph g;
  g.vertex_count = static_cast<int>(as_int(field(j, "vertices", where), where + ".vertices"));
  if (g.vertex_count < 0) bad(where + ".vertices", "must be non-negative");
  if (j.contains("boundary_fixed_set")) {
    if (!j["boundary_fixed_set"].is_boolean()) bad(where + ".boundary_fixed_set", "expected a boolean");
    g.boundary_fixed_set = j["boundary_fixed_set"].get<bool>();
  }
  if (j.contains("edges")) {
    const json& es = j["edges"];
    if (!es.is_array()) bad(where + ".edges", "expected an array");
    for (std::size_t i = 0; i < es.size(); ++i) {
      std::string w = where + ".edges[" + std::to_string(i) + "]";
      only_keys(es[i], {"between", "loop", "closed", "order", "beta"}, w);
      GraphEdge e;
      int kinds = es[i].contains("between") + es[i].contains("loop") + es[i].contains("closed");
      if (kinds != 1) bad(w, "exactly one of \"between\", \"loop\", \"closed\" is required");
      if (es[i].contains("between")) {
        const json& b = es[i]["between"];
        if (!b.is_array() || b.size() != 2) bad(w + ".between", "expected [u, v]");
        e.kind = GraphEdge::Kind::between;
        e.u = static_cast<int>(as_int(b[0], w + ".between"));
        e.v = static_cast<int>(as_int(b[1], w + ".between"));
        if (e.u == e.v) bad(w + ".between", "use \"loop\" for an edge with equal endpoints");
      } else if (es[i].contains("loop")) {
        e.kind = GraphEdge::Kind::loop;
        e.u = e.v = static_cast<int>(as_int(es[i]["loop"], w + ".loop"));
      } else {
        if (es[i]["closed"] != true) bad(w + ".closed", "expected true");
        e.kind = GraphEdge::Kind::closed;
      }
      for (int endpoint : {e.u, e.v})
        if (e.kind != GraphEdge::Kind::closed && (endpoint < 0 || endpoint >= g.vertex_count))
          bad(w, "endpoint " + std::to_string(endpoint) + " is not a vertex");
      e.order = as_int(field(es[i], "order", w), w + ".order");
      if (e.order < 2) bad(w + ".order", "isotropy order must be >= 2");
      if (es[i].contains("beta")) {
        e.beta = as_int(es[i]["beta"], w + ".beta");
        std::int64_t b = *e.beta < 0 ? -*e.beta : *e.beta;
        if (std::gcd(e.order, b) != 1) bad(w, "order and beta must be coprime");
      }
      g.edges.push_back(e);
    }
  }
  if (j.contains("soul")) {
    const json& s = j["soul"];
    only_keys(s, {"order", "circle", "weights"}, where + ".soul");
    SoulIsotropy soul;
    if (s.contains("circle")) {
      if (s["circle"] != true) bad(where + ".soul.circle", "expected true");
      soul.circle = true;
      if (s.contains("weights")) {
        const json& w = s["weights"];
        if (!w.is_array() || w.size() != 2) bad(where + ".soul.weights", "expected [a, b]");
        soul.weights = std::array<std::int64_t, 2>{as_int(w[0], where + ".soul.weights"), as_int(w[1], where + ".soul.weights")};
        if ((*soul.weights)[0] == 0 || (*soul.weights)[1] == 0) bad(where + ".soul.weights", "weights must be nonzero");
      }
    } else {
      soul.k = as_int(field(s, "order", where + ".soul"), where + ".soul.order");
      if (soul.k < 1) bad(where + ".soul.order", "must be >= 1");
    }
    g.soul = soul;
  }
  if (g.boundary_fixed_set && !g.soul) bad(where, "a boundary fixed set needs \"soul\"");
  if (j.contains("virtual_beta")) g.virtual_beta = as_int(j["virtual_beta"], where + ".virtual_beta");
  return g;
}

json graph_json(const SingularGraph& g) {
  json edges = json::array();
  for (const auto& e : g.edges) {
    json je;
    if (e.kind == GraphEdge::Kind::between)
      je["between"] = {e.u, e.v};
    else if (e.kind == GraphEdge::Kind::loop)
      je["loop"] = e.u;
    else
      je["closed"] = true;
    je["order"] = e.order;
    if (e.beta) je["beta"] = *e.beta;
    if (e.virtual_edge) je["virtual"] = true;
    edges.push_back(je);
  }
  json j = {{"vertices", g.vertex_count}, {"edges", edges}, {"boundary_fixed_set", g.boundary_fixed_set}};
  if (g.soul) {
    if (g.soul->circle) {
      j["soul"] = {{"circle", true}};
      if (g.soul->weights) j["soul"]["weights"] = {(*g.soul->weights)[0], (*g.soul->weights)[1]};
    } else {
      j["soul"] = {{"order", g.soul->k}};
    }
  }
  if (g.virtual_beta) j["virtual_beta"] = *g.virtual_beta;
  return j;
}

struct ActionPayload {
  IsometricActionSpec spec;
  json gamma;  // normalized
  std::string model = "quotient";
  double radius = 1.0;
  std::vector<int> qs = {2, 3};
  std::optional<std::array<std::size_t, 2>> branch;
  std::optional<std::string> export_path;
};

ActionPayload as_action(const json& j, const Options& o, bool allow_extras, const std::string& where) {
  if (allow_extras)
    only_keys(j, {"weights", "gamma", "samples", "seed", "model", "radius", "q", "cover", "export"}, where);
  else
    only_keys(j, {"weights", "gamma", "samples", "seed"}, where);
  ActionPayload a;
  if (j.contains("model")) {
    if (!j["model"].is_string()) bad(where + ".model", "expected \"quotient\" or \"round-sphere\"");
    a.model = j["model"].get<std::string>();
    if (a.model != "quotient" && a.model != "round-sphere") bad(where + ".model", "expected \"quotient\" or \"round-sphere\"");
  }
  if (a.model == "quotient") {
    const json& w = field(j, "weights", where);
    if (!w.is_array() || w.size() != 2) bad(where + ".weights", "expected [p, q]");
    a.spec.p = as_int(w[0], where + ".weights");
    a.spec.q = as_int(w[1], where + ".weights");
    if (a.spec.p == 0 || a.spec.q == 0 || std::gcd(a.spec.p, a.spec.q) != 1)
      bad(where + ".weights", "weights must be nonzero and coprime");
    json g = j.contains("gamma") ? j["gamma"] : json("trivial");
    if (g.is_string()) {
      try {
        a.spec.gamma = gamma_preset(g.get<std::string>());
      } catch (const std::invalid_argument& e) {
        bad(where + ".gamma", e.what());
      }
      a.spec.gamma_label = g.get<std::string>();
      a.gamma = g;
    } else {
      only_keys(g, {"matrices"}, where + ".gamma");
      const json& ms = field(g, "matrices", where + ".gamma");
      if (!ms.is_array() || ms.empty()) bad(where + ".gamma.matrices", "expected a non-empty array of 16-entry rows");
      for (std::size_t i = 0; i < ms.size(); ++i) {
        std::string w2 = where + ".gamma.matrices[" + std::to_string(i) + "]";
        if (!ms[i].is_array() || ms[i].size() != 16) bad(w2, "expected 16 numbers (row-major 4x4)");
        Mat4 m{};
        for (int k = 0; k < 16; ++k) {
          if (!ms[i][k].is_number()) bad(w2, "expected numbers");
          m[k] = ms[i][k].get<double>();
        }
        a.spec.gamma.push_back(m);
      }
      a.spec.gamma_label = "explicit";
      a.gamma = g;
    }
  } else {
    if (j.contains("radius")) {
      if (!j["radius"].is_number() || j["radius"].get<double>() <= 0) bad(where + ".radius", "expected a positive number");
      a.radius = j["radius"].get<double>();
    }
  }
  std::int64_t samples = j.contains("samples") ? as_int(j["samples"], where + ".samples") : 1500;
  if (o.samples) samples = static_cast<std::int64_t>(*o.samples);
  if (samples < 50) bad(where + ".samples", "at least 50 samples are needed");
  a.spec.samples = static_cast<std::size_t>(samples);
  std::uint64_t seed = 42;
  if (j.contains("seed")) {
    if (!j["seed"].is_number_unsigned() && !(j["seed"].is_number_integer() && j["seed"].get<std::int64_t>() >= 0))
      bad(where + ".seed", "expected a non-negative integer");
    seed = j["seed"].get<std::uint64_t>();
  }
  if (o.seed) seed = *o.seed;
  a.spec.seed = seed;
  if (a.model == "quotient") {
    try {
      validate_spec(a.spec);
    } catch (const std::invalid_argument& e) {
      bad(where, e.what());
    }
  }
  if (allow_extras) {
    if (j.contains("q")) {
      const json& q = j["q"];
      if (!q.is_array() || q.empty()) bad(where + ".q", "expected a non-empty array of integers >= 2");
      a.qs.clear();
      for (const auto& x : q) {
        auto v = as_int(x, where + ".q");
        if (v < 2 || static_cast<std::size_t>(v) > a.spec.samples) bad(where + ".q", "each q must satisfy 2 <= q <= samples");
        a.qs.push_back(static_cast<int>(v));
      }
    }
    if (j.contains("cover")) {
      const json& c = j["cover"];
      only_keys(c, {"branch"}, where + ".cover");
      const json& b = field(c, "branch", where + ".cover");
      if (!b.is_array() || b.size() != 2) bad(where + ".cover.branch", "expected two marked indices");
      a.branch = std::array<std::size_t, 2>{static_cast<std::size_t>(as_int(b[0], where + ".cover.branch")),
                                            static_cast<std::size_t>(as_int(b[1], where + ".cover.branch"))};
      if (a.model != "quotient") bad(where + ".cover", "covers are built over quotient samples");
    }
    if (j.contains("export")) {
      if (!j["export"].is_string()) bad(where + ".export", "expected a file path");
      a.export_path = j["export"].get<std::string>();
    }
  }
  return a;
}

json action_json(const ActionPayload& a, bool extras) {
  json j;
  if (a.model == "quotient") {
    j["weights"] = {a.spec.p, a.spec.q};
    j["gamma"] = a.gamma;
  } else {
    j["model"] = a.model;
    j["radius"] = a.radius;
  }
  j["samples"] = a.spec.samples;
  j["seed"] = a.spec.seed;
  if (extras) {
    j["q"] = a.qs;
    if (a.branch) j["cover"] = {{"branch", {(*a.branch)[0], (*a.branch)[1]}}};
    if (a.export_path) j["export"] = *a.export_path;
  }
  return j;
}

// ---------------------------------------------------------------- reports

json extent_json(const ExtentReport& r) {
  json j = {{"q", r.q}, {"value", r.value}, {"witness", r.witness}, {"method", to_string(r.method)}, {"sample_size", r.sample_size}};
  if (r.method == ExtentMethod::heuristic) j["restarts"] = r.restarts;
  return j;
}

json marked_json(const std::vector<MarkedPoint>& ms) {
  json a = json::array();
  for (const auto& m : ms) a.push_back({{"index", m.index}, {"label", m.label}, {"isotropy_order", m.isotropy_order}});
  return a;
}

json certificate_json(const ConvergenceCertificate& c) {
  return {{"computed", c.computed}, {"samples", {c.n_coarse, c.n_fine}}, {"drift", c.drift}, {"threshold", c.threshold}, {"achieved", c.achieved}};
}

json rejection_json(const Rejection& r) { return {{"result", "rejected"}, {"tag", r.tag}, {"reason", r.reason}}; }

struct Outcome {
  json report;
  int code = ok;
};

Outcome cmd_canon(json& payload) {
  only_keys(payload, {"tuple"}, "payload");
  auto t = as_tuple(field(payload, "tuple", "payload"), "payload.tuple");
  payload = {{"tuple", tuple_json(t)}};
  return {{{"canonical", tuple_json(canonicalize(t))}}};
}

Outcome cmd_equiv(json& payload) {
  only_keys(payload, {"a", "b"}, "payload");
  auto a = as_tuple(field(payload, "a", "payload"), "payload.a");
  auto b = as_tuple(field(payload, "b", "payload"), "payload.b");
  if (a.size() != b.size()) bad("payload", "tuples must have equal length");
  payload = {{"a", tuple_json(a)}, {"b", tuple_json(b)}};
  auto ca = canonicalize(a), cb = canonicalize(b);
  return {{{"equivalent", ca == cb}, {"canonical_a", tuple_json(ca)}, {"canonical_b", tuple_json(cb)},
           {"same_differences", cyclic_differences(a) == cyclic_differences(b)}}};
}

Outcome cmd_euler(json& payload) {
  only_keys(payload, {"tuple", "seifert"}, "payload");
  if (payload.contains("tuple") == payload.contains("seifert")) bad("payload", "give exactly one of \"tuple\" or \"seifert\"");
  if (payload.contains("tuple")) {
    auto t = as_tuple(payload["tuple"], "payload.tuple");
    payload = {{"tuple", tuple_json(t)}};
    return {{{"euler_sum", to_string(euler_sum(t))}, {"cyclic_differences", rational_list(cyclic_differences(t))},
             {"realizable", is_realizable(t)}}};
  }
  auto p = as_seifert(payload["seifert"], "payload.seifert");
  payload = {{"seifert", seifert_json(p)}};
  return {{{"euler_number", to_string(euler_number(p))}, {"normalized", seifert_json(normalize(p))}}};
}

Outcome cmd_seifert_pi1(json& payload) {
  auto p = as_seifert(payload, "payload");
  payload = seifert_json(p);
  auto g = fundamental_group(p);
  json rel = json::array();
  for (const auto& w : g.relators) rel.push_back(relator_string(g, w));
  auto ab = abelianize(g);
  json tors = json::array();
  for (const auto& t : ab.torsion) tors.push_back(integer_json(t));
  json abj = {{"free_rank", ab.free_rank}, {"torsion", tors}};
  abj["order"] = ab.order() ? integer_json(*ab.order()) : json("infinite");
  json r = {{"generators", g.generators}, {"relators", rel}, {"abelianization", abj},
            {"euler_number", to_string(euler_number(p))}, {"normalized", seifert_json(normalize(p))}};
  if (p.fibers.size() == 2) {
    auto o = abelian_order_two_fibers(p);
    r["two_fiber_order"] = o ? integer_json(*o) : json("infinite");
  }
  return {r};
}

Outcome cmd_seifert_recognize(json& payload) {
  auto p = as_seifert(payload, "payload");
  payload = seifert_json(p);
  auto rec = recognize_boundary(p);
  json r = {{"kind", to_string(rec.kind)}};
  r["order"] = rec.order ? integer_json(*rec.order) : json(nullptr);
  r["admissible"] = rec.admissible ? json(*rec.admissible) : json(nullptr);
  if (!rec.note.empty()) r["note"] = rec.note;
  if (rec.admissible == false) {
    r["tag"] = rec.kind == BoundaryKind::s2xs1 ? tag::beta_zero : tag::non_spherical;
    return {r, rejected};
  }
  return {r};
}

json quotient_json(const QuotientDescriptor& q) {
  return {{"weights", {integer_json(q.weights.a), integer_json(q.weights.b), integer_json(q.weights.c)}},
          {"quotient", {{"alpha_bar", integer_json(q.alpha_bar)}, {"beta_bar", integer_json(q.beta_bar)}}}};
}

Outcome cmd_wcp(json& payload) {
  only_keys(payload, {"tuple"}, "payload");
  auto t = as_tuple(field(payload, "tuple", "payload"), "payload.tuple");
  if (t.size() != 3) bad("payload.tuple", "expected exactly three invariants");
  payload = {{"tuple", tuple_json(t)}};
  if (!is_realizable(t))
    return {{{"result", "rejected"}, {"tag", tag::irrealizable}, {"reason", "the invariants must be pairwise unequal"}}, rejected};
  auto q = weights_from_invariants(t);
  json r = quotient_json(q);
  r["kernel_verified"] = verify_kernel(q.weights, t);
  json reps = json::array();
  for (const auto& s : sign_representatives(q.weights))
    reps.push_back({{"weights", {integer_json(s.weights.a), integer_json(s.weights.b), integer_json(s.weights.c)}},
                    {"orientation_class", s.orientation_class}});
  r["sign_representatives"] = reps;
  return {r};
}

Outcome cmd_classify(json& payload) {
  SingularGraph g = as_graph(payload, "payload");
  std::optional<InvariantTuple> t;
  if (payload.contains("invariants")) t = as_tuple(payload["invariants"], "payload.invariants");
  json norm = graph_json(g);
  if (t) norm["invariants"] = tuple_json(*t);
  payload = norm;

  ClassificationResult res;
  try {
    res = classify(g, t);
  } catch (const std::invalid_argument& e) {
    bad("payload", e.what());
  }
  return std::visit(
      [&](const auto& v) -> Outcome {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, result::Rejected>) {
          return {rejection_json(v.why), rejected};
        } else if constexpr (std::is_same_v<T, result::FixedPointHomogeneous>) {
          json r = {{"result", "fixed-point-homogeneous"}};
          if (v.suspension_of_lens) r["suspension_of_lens"] = *v.suspension_of_lens;
          if (v.wcp_quotient) r["wcp_quotient"] = quotient_json(*v.wcp_quotient);
          return {r};
        } else if constexpr (std::is_same_v<T, result::Suspension>) {
          json rec = {{"kind", to_string(v.recognition.kind)}};
          rec["order"] = v.recognition.order ? integer_json(*v.recognition.order) : json(nullptr);
          return {{{"result", "suspension"}, {"space_of_directions", seifert_json(v.space_of_directions)},
                   {"recognition", rec}, {"type_only", v.type_only}}};
        } else if constexpr (std::is_same_v<T, result::WCPQuotient>) {
          json r = quotient_json(v.quotient);
          r["result"] = "wcp-quotient";
          r["invariants"] = tuple_json(v.invariants);
          r["orders_match_graph"] = v.orders_match_graph;
          return {r};
        } else {
          json r = {{"result", "loop-and-spur"}, {"k", v.k}, {"beta", v.beta}, {"spur", {v.spur.alpha, v.spur.beta}},
                    {"orbifold_pi1_order", integer_json(v.orbifold_pi1_order)},
                    {"double_cover", quotient_json(v.double_cover)},
                    {"double_cover_invariants", tuple_json(v.double_cover_invariants)}};
          return {r};
        }
      },
      res);
}

SampledMetricSpace build_space(const ActionPayload& a) {
  if (a.model == "round-sphere") return sample_round_sphere(a.spec.samples, a.spec.seed, a.radius);
  return sample_quotient(a.spec);
}

Outcome cmd_extent(json& payload, const Options& o) {
  ActionPayload a = as_action(payload, o, true, "payload");
  payload = action_json(a, true);
  SampledMetricSpace s = build_space(a);
  if (a.branch)
    for (auto b : *a.branch)
      if (std::none_of(s.marked.begin(), s.marked.end(), [&](const MarkedPoint& m) { return m.index == b; }))
        bad("payload.cover.branch", "index " + std::to_string(b) + " is not a marked point");
  json r;
  r["space"] = {{"label", s.label}, {"size", s.size()}, {"marked", marked_json(s.marked)}};
  json xs = json::array();
  for (int q : a.qs) xs.push_back(extent_json(extent(s, q)));
  r["extents"] = xs;
  r["small"] = [&] {
    auto sm = is_small(s, o.tol);
    return json{{"small", sm.small}, {"margin", sm.margin}, {"xt3", sm.xt3}};
  }();
  if (a.export_path) {
    std::ofstream f(*a.export_path, std::ios::binary);
    if (!f) throw std::runtime_error("cannot write " + *a.export_path);
    export_distance_matrix(s, f);
  }
  int code = ok;
  if (a.branch) {
    CoverOptions co;
    co.tol = o.tol;
    BranchedCover c;
    try {
      c = double_branched_cover(s, *a.branch, co);
    } catch (const std::invalid_argument& e) {
      bad("payload.cover", e.what());
    }
    auto sm = is_small(c.space, o.tol);
    r["cover"] = {{"size", c.space.size()},
                  {"branch_distance", c.space.d(c.branch[0], c.branch[1])},
                  {"base_branch_distance", s.d((*a.branch)[0], (*a.branch)[1])},
                  {"xt3", extent_json(sm.extent3)},
                  {"small", sm.small},
                  {"margin", sm.margin},
                  {"certificate", certificate_json(c.certificate)}};
    if (!c.certificate.achieved) code = not_converged;
  }
  return {r, code};
}

Outcome cmd_check_q(json& payload, const Options& o) {
  ActionPayload a = as_action(payload, o, false, "payload");
  payload = action_json(a, false);
  QprimeOptions qo;
  qo.tol = o.tol;
  auto rep = check_condition_qprime(a.spec, qo);
  json checks = json::array();
  for (const auto& c : rep.checks) {
    json cj = {{"item", c.item}, {"detail", c.detail}, {"value", c.value}, {"bound", c.bound},
               {"margin", c.margin}, {"passed", c.passed}};
    if (c.certificate.computed) cj["certificate"] = certificate_json(c.certificate);
    checks.push_back(cj);
  }
  json r = {{"marked", marked_json(rep.marked)}, {"finite_isotropy_points", rep.finite_isotropy_points},
            {"xt2", rep.xt2}, {"xt3", rep.xt3}, {"checks", checks}, {"all_passed", rep.all_passed},
            {"note", "round model only; non-round metrics are not synthesized"}};
  return {r, rep.converged ? ok : not_converged};
}

// ---------------------------------------------------------------- output

void render_text(const json& j, std::ostream& out, int depth, const std::string& key) {
  std::string pad(2 * depth, ' ');
  std::string head = key.empty() ? pad : pad + key + ":";
  if (j.is_object()) {
    if (!key.empty()) out << head << '\n';
    for (auto it = j.begin(); it != j.end(); ++it) render_text(*it, out, key.empty() ? depth : depth + 1, it.key());
  } else if (j.is_array() && std::any_of(j.begin(), j.end(), [](const json& x) { return x.is_structured(); })) {
    out << head << '\n';
    for (std::size_t i = 0; i < j.size(); ++i) render_text(j[i], out, depth + 1, "- " + std::to_string(i));
  } else {
    out << head << (key.empty() ? "" : " ") << (j.is_string() ? j.get<std::string>() : j.dump()) << '\n';
  }
}

Outcome dispatch(const std::string& command, json& payload, const Options& o) {
  if (command == "canon") return cmd_canon(payload);
  if (command == "equiv") return cmd_equiv(payload);
  if (command == "euler") return cmd_euler(payload);
  if (command == "seifert-pi1") return cmd_seifert_pi1(payload);
  if (command == "seifert-recognize") return cmd_seifert_recognize(payload);
  if (command == "wcp") return cmd_wcp(payload);
  if (command == "classify") return cmd_classify(payload);
  if (command == "extent") return cmd_extent(payload, o);
  if (command == "check-q") return cmd_check_q(payload, o);
  throw InvalidInput("unknown command '" + command + "'");
}

}  // namespace

int run(const std::vector<std::string>& args, std::istream& in, std::ostream& out, std::ostream& err) {
  CLI::App app{"x4: invariants, classification and extent numerics for circle actions"};
  std::string command, input = "-";
  std::uint64_t seed = 0;
  std::size_t samples = 0;
  Options o;
  app.add_option("command", command, "one of: canon equiv euler seifert-pi1 seifert-recognize wcp classify extent check-q replay")
      ->required()
      ->check(CLI::IsMember(commands));
  auto* seed_opt = app.add_option("--seed", seed, "random seed (overrides the payload)");
  auto* samples_opt = app.add_option("--samples", samples, "sample count N (overrides the payload)");
  app.add_option("--tol", o.tol, "tolerance in radians")->default_val(0.02)->check(CLI::NonNegativeNumber);
  app.add_option("--format", o.format, "json or text")->default_val("json")->check(CLI::IsMember({"json", "text"}));
  app.add_option("--input", input, "payload file, or - for standard input")->default_val("-");

  try {
    std::vector<std::string> rev(args.rbegin(), args.rend());
    app.parse(rev);
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return ok;
  } catch (const CLI::ParseError& e) {
    err << "x4: " << e.what() << '\n';
    return invalid_input;
  }
  if (*seed_opt) o.seed = seed;
  if (*samples_opt) o.samples = samples;

  json doc;
  try {
    if (input == "-") {
      doc = json::parse(in);
    } else {
      std::ifstream f(input);
      if (!f) {
        err << "x4: cannot read " << input << '\n';
        return invalid_input;
      }
      doc = json::parse(f);
    }
  } catch (const json::parse_error& e) {
    err << "x4: payload is not valid JSON: " << e.what() << '\n';
    return invalid_input;
  }

  if (command == "replay") {
    // re-run a request embedded in an earlier report
    try {
      const json& rq = doc.contains("request") ? doc["request"] : doc;
      command = field(rq, "command", "request").get<std::string>();
      if (command == "replay" || std::find(commands.begin(), commands.end(), command) == commands.end())
        bad("request.command", "unknown command");
      const json& opts = field(rq, "options", "request");
      o.tol = field(opts, "tol", "request.options").get<double>();
      o.format = field(opts, "format", "request.options").get<std::string>();
      if (opts.contains("seed")) o.seed = opts["seed"].get<std::uint64_t>();
      if (opts.contains("samples")) o.samples = opts["samples"].get<std::size_t>();
      doc = field(rq, "payload", "request");
    } catch (const InvalidInput& e) {
      err << "x4: " << e.what() << '\n';
      return invalid_input;
    } catch (const json::exception& e) {
      err << "x4: malformed request: " << e.what() << '\n';
      return invalid_input;
    }
  }

  json payload = doc;
  Outcome res;
  try {
    res = dispatch(command, payload, o);
  } catch (const InvalidInput& e) {
    err << "x4: invalid input: " << e.what() << '\n';
    return invalid_input;
  } catch (const json::exception& e) {
    err << "x4: invalid input: " << e.what() << '\n';
    return invalid_input;
  } catch (const std::invalid_argument& e) {
    err << "x4: invalid input: " << e.what() << '\n';
    return invalid_input;
  }

  json opts = {{"tol", o.tol}, {"format", o.format}};
  if (o.seed) opts["seed"] = *o.seed;
  if (o.samples) opts["samples"] = *o.samples;
  json report = res.report;
  report["request"] = {{"command", command}, {"payload", payload}, {"options", opts}};
  report["exit_code"] = res.code;

  if (o.format == "json")
    out << report.dump(2) << '\n';
  else
    render_text(report, out, 0, "");
  if (res.code == rejected && res.report.contains("tag")) err << "x4: rejected [" << res.report["tag"].get<std::string>() << "]\n";
  if (res.code == not_converged) err << "x4: convergence certificate not achieved\n";
  return res.code;
}

}  // namespace x4::cli
