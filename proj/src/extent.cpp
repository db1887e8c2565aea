#include "x4/extent.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstring>
#include <istream>
#include <numbers>
#include <ostream>
#include <random>
#include <stdexcept>

#include "x4/parallel.hpp"

namespace x4 {

namespace {

struct Best {
  double sum = -1;
  std::vector<std::size_t> idx;
};

// keep the earlier candidate on ties so the reduction order is irrelevant
void take(Best& into, const Best& b) {
  if (b.sum > into.sum) into = b;
}

Best exact_pairs(const SampledMetricSpace& s) {
  const std::size_t n = s.size();
  std::vector<Best> rows(n);
  parallel_for(n, [&](std::size_t i) {
    Best b;
    for (std::size_t j = i + 1; j < n; ++j)
      if (s.d(i, j) > b.sum) b = {s.d(i, j), {i, j}};
    rows[i] = b;
  });
  Best out;
  for (const auto& r : rows) take(out, r);
  return out;
}

Best exact_triples(const SampledMetricSpace& s) {
  const std::size_t n = s.size();
  std::vector<Best> rows(n);
  parallel_for(n, [&](std::size_t i) {
    Best b;
    const double* di = &s.dist[i * n];
    for (std::size_t j = i + 1; j < n; ++j) {
      const double* dj = &s.dist[j * n];
      const double dij = di[j];
      for (std::size_t k = j + 1; k < n; ++k) {
        double sum = dij + di[k] + dj[k];
        if (sum > b.sum) {
          b.sum = sum;
          b.idx = {i, j, k};
        }
      }
    }
    rows[i] = b;
  });
  Best out;
  for (const auto& r : rows) take(out, r);
  return out;
}

void enumerate(const SampledMetricSpace& s, int q, std::size_t from, std::vector<std::size_t>& cur, double sum, Best& best) {
  if (static_cast<int>(cur.size()) == q) {
    if (sum > best.sum) best = {sum, cur};
    return;
  }
  for (std::size_t i = from; i < s.size(); ++i) {
    double add = 0;
    for (auto c : cur) add += s.d(c, i);
    cur.push_back(i);
    enumerate(s, q, i + 1, cur, sum + add, best);
    cur.pop_back();
  }
}

Best exchange_ascent(const SampledMetricSpace& s, int q, std::uint64_t seed) {
  const std::size_t n = s.size();
  std::mt19937_64 rng(seed);
  std::vector<std::size_t> t;
  while (static_cast<int>(t.size()) < q) {
    std::size_t c = rng() % n;
    if (std::find(t.begin(), t.end(), c) == t.end()) t.push_back(c);
  }
  bool improved = true;
  while (improved) {
    improved = false;
    for (int pos = 0; pos < q; ++pos) {
      auto contribution = [&](std::size_t c) {
        double g = 0;
        for (int o = 0; o < q; ++o)
          if (o != pos) g += s.d(c, t[o]);
        return g;
      };
      const double current = contribution(t[pos]);
      double best_gain = current;
      std::size_t best_c = t[pos];
      for (std::size_t c = 0; c < n; ++c) {
        if (std::find(t.begin(), t.end(), c) != t.end()) continue;
        double g = contribution(c);
        if (g > best_gain) best_gain = g, best_c = c;
      }
      if (best_gain > current + 1e-14) {
        t[pos] = best_c;
        improved = true;
      }
    }
  }
  std::sort(t.begin(), t.end());
  return {0, t};
}

}  // namespace

double average_distance(const SampledMetricSpace& space, std::vector<std::size_t> idx) {
  std::sort(idx.begin(), idx.end());
  double sum = 0;
  std::size_t pairs = 0;
  for (std::size_t a = 0; a < idx.size(); ++a)
    for (std::size_t b = a + 1; b < idx.size(); ++b) {
      sum += space.d(idx[a], idx[b]);
      ++pairs;
    }
  return pairs == 0 ? 0.0 : sum / static_cast<double>(pairs);
}

ExtentReport extent(const SampledMetricSpace& space, int q, const ExtentOptions& opt) {
  const std::size_t n = space.size();
  if (q < 2 || static_cast<std::size_t>(q) > n) throw std::invalid_argument("extent: need 2 <= q <= N");
  ExtentReport r;
  r.q = q;
  r.sample_size = n;
  ExtentMethod m = opt.method;
  if (q == 2) m = ExtentMethod::exact;
  if (m == ExtentMethod::automatic) m = (q == 3 && n <= opt.exact_limit) ? ExtentMethod::exact : ExtentMethod::heuristic;
  r.method = m;

  Best best;
  if (m == ExtentMethod::exact) {
    if (q == 2)
      best = exact_pairs(space);
    else if (q == 3)
      best = exact_triples(space);
    else {
      std::vector<std::size_t> cur;
      enumerate(space, q, 0, cur, 0, best);
    }
  } else {
    r.restarts = opt.restarts;
    std::vector<Best> runs(opt.restarts);
    parallel_for(runs.size(), [&](std::size_t k) {
      runs[k] = exchange_ascent(space, q, space.seed ^ (0x9E3779B97F4A7C15ULL * (k + 1)));
      runs[k].sum = average_distance(space, runs[k].idx);
    });
    for (const auto& b : runs) take(best, b);
  }
  r.witness = best.idx;
  std::sort(r.witness.begin(), r.witness.end());
  r.value = average_distance(space, r.witness);
  return r;
}

SmallnessReport is_small(const SampledMetricSpace& space, double tol, const ExtentOptions& opt) {
  SmallnessReport s;
  const std::size_t n = space.size();
  if (n >= 3) {
    s.extent3 = extent(space, 3, opt);
    s.xt3 = s.extent3.value;
  } else {
    s.extent3.q = 3;
    s.extent3.sample_size = n;
    if (n == 2) {
      // (a, a, b): two of the three pairs are at distance d
      s.xt3 = 2 * space.d(0, 1) / 3;
      s.extent3.witness = {0, 0, 1};
    } else if (n == 1) {
      s.extent3.witness = {0, 0, 0};
    }
    s.extent3.value = s.xt3;
  }
  s.margin = std::numbers::pi / 3 - s.xt3;
  s.small = s.xt3 <= std::numbers::pi / 3 + tol;
  return s;
}

ExtentGap compare_extents(const SampledMetricSpace& a, const SampledMetricSpace& b, int q, const ExtentOptions& opt) {
  ExtentGap g;
  g.a = extent(a, q, opt);
  g.b = extent(b, q, opt);
  g.gap = g.a.value - g.b.value;
  return g;
}

std::string to_string(ExtentMethod m) {
  switch (m) {
    case ExtentMethod::automatic: return "automatic";
    case ExtentMethod::exact: return "exact";
    case ExtentMethod::heuristic: return "heuristic";
  }
  return "automatic";
}

namespace {

void put_u64(std::ostream& out, std::uint64_t v) {
  char b[8];
  for (int i = 0; i < 8; ++i) b[i] = static_cast<char>((v >> (8 * i)) & 0xff);
  out.write(b, 8);
}

std::uint64_t get_u64(std::istream& in) {
  unsigned char b[8];
  in.read(reinterpret_cast<char*>(b), 8);
  if (!in) throw std::runtime_error("truncated distance matrix");
  std::uint64_t v = 0;
  for (int i = 7; i >= 0; --i) v = (v << 8) | b[i];
  return v;
}

constexpr char magic[8] = {'X', '4', 'E', 'X', 'T', '1', 0, 0};

}  // namespace

void export_distance_matrix(const SampledMetricSpace& space, std::ostream& out) {
  out.write(magic, 8);
  put_u64(out, space.size());
  for (double d : space.dist) put_u64(out, std::bit_cast<std::uint64_t>(d));
}

std::vector<double> import_distance_matrix(std::istream& in, std::size_t& n) {
  char m[8];
  in.read(m, 8);
  if (!in || std::memcmp(m, magic, 8) != 0) throw std::runtime_error("not an X4EXT1 distance matrix");
  n = get_u64(in);
  std::vector<double> d(n * n);
  for (auto& x : d) x = std::bit_cast<double>(get_u64(in));
  return d;
}

double triangle_violation(const SampledMetricSpace& space, std::size_t full_limit, std::size_t samples, std::uint64_t seed) {
  const std::size_t n = space.size();
  double worst = 0;
  auto check = [&](std::size_t i, std::size_t j, std::size_t k) {
    worst = std::max(worst, space.d(i, k) - space.d(i, j) - space.d(j, k));
  };
  if (n <= full_limit) {
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j)
        for (std::size_t k = 0; k < n; ++k) check(i, j, k);
  } else {
    std::mt19937_64 rng(seed);
    for (std::size_t s = 0; s < samples; ++s) check(rng() % n, rng() % n, rng() % n);
  }
  return worst;
}

}  // namespace x4
