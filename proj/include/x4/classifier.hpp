#pragma once

// Orbit-space multigraphs of circle actions with isolated fixed points, and
// the resulting equivariant type.

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "x4/invariants.hpp"
#include "x4/seifert.hpp"
#include "x4/wcp.hpp"

namespace x4 {

struct GraphEdge {
  enum class Kind { between, loop, closed };  // closed: a curve through no vertex
  Kind kind = Kind::between;
  int u = 0, v = 0;                      // loop: u == v; closed: unused
  std::int64_t order = 2;                // isotropy order; 1 only for virtual edges
  std::optional<std::int64_t> beta;      // optional Seifert beta along the edge
  bool virtual_edge = false;

  bool is_loop() const { return kind == Kind::loop; }
};

struct SoulIsotropy {
  bool circle = false;
  std::int64_t k = 1;                             // finite soul isotropy Z_k
  std::optional<std::array<std::int64_t, 2>> weights;  // circle soul: isotropy weights on S^3
};

struct SingularGraph {
  int vertex_count = 0;
  std::vector<GraphEdge> edges;
  bool boundary_fixed_set = false;
  std::optional<SoulIsotropy> soul;
  std::optional<std::int64_t> virtual_beta;  // beta for a virtual spur added by completion
};

// machine tags carried by rejections
namespace tag {
inline constexpr const char* at_least_two = "at-least-two-fixed-points";
inline constexpr const char* three_point_bound = "three-point-bound";
inline constexpr const char* degree_bound = "degree-bound";
inline constexpr const char* no_free_curves = "no-free-closed-curves";
inline constexpr const char* fig5_dg = "fig5-dg";
inline constexpr const char* three_point_simple = "three-points-simple-graph";
inline constexpr const char* k_plus_one = "k+1-fixed-points";
inline constexpr const char* beta_zero = "s2xs1-boundary";
inline constexpr const char* non_spherical = "non-spherical-space-of-directions";
inline constexpr const char* irrealizable = "irrealizable-invariants";
inline constexpr const char* out_of_range = "out-of-classified-range";
}  // namespace tag

struct Rejection {
  std::string tag;
  std::string reason;
};

// nullopt means valid; throws std::invalid_argument for malformed graphs
std::optional<Rejection> validate_graph(const SingularGraph& g);

SingularGraph virtual_edge_completion(const SingularGraph& g);

struct LoopSpurPi1 {
  Integer order;    // k |beta|
  bool admissible;  // k == 2 and beta != 0
  std::optional<std::string> tag;
};

// closed form checked against Smith normal form of <q1, h | [q1,h], q1^k h^-1, h^beta>
LoopSpurPi1 loop_and_spur_pi1(std::int64_t k, Fiber spur);

// the chain A u B presentation reduced to q1, h as an explicit group
GroupPresentation loop_and_spur_presentation(std::int64_t k, std::int64_t beta);

namespace result {
struct FixedPointHomogeneous {
  std::optional<std::int64_t> suspension_of_lens;  // Susp(S^3/Z_k)
  std::optional<QuotientDescriptor> wcp_quotient;  // circle soul
};
struct Suspension {
  SeifertPresentation space_of_directions;
  BoundaryRecognition recognition;
  bool type_only;  // some edge lacked beta data
};
struct WCPQuotient {
  QuotientDescriptor quotient;
  InvariantTuple invariants;
  bool orders_match_graph;  // multiset of denominators equals edge orders
};
struct LoopAndSpur {
  std::int64_t k;
  std::int64_t beta;
  Fiber spur;
  Integer orbifold_pi1_order;
  QuotientDescriptor double_cover;
  InvariantTuple double_cover_invariants;
};
struct Rejected {
  Rejection why;
};
}  // namespace result

using ClassificationResult = std::variant<result::FixedPointHomogeneous, result::Suspension, result::WCPQuotient,
                                          result::LoopAndSpur, result::Rejected>;

// throws std::invalid_argument when required data is missing (no invariants on
// the three-point branch, no beta on the spur)
ClassificationResult classify(const SingularGraph& g, const std::optional<InvariantTuple>& t);

}  // namespace x4
