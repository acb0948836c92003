#include "setavg/schemes.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "setavg/error.hpp"

namespace setavg {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Refinement rules written once over an averaging operation avg(a, b, t),
// which weights a by t. Nodes carry their parameter position.

template <typename Node, typename Avg, typename Shift>
std::vector<Node> extend_constant(const std::vector<Node>& in, int copies, Avg&&, Shift shift,
                                  double spacing) {
  std::vector<Node> out;
  out.reserve(in.size() + 2 * static_cast<std::size_t>(copies));
  for (int j = copies; j >= 1; --j) out.push_back(shift(in.front(), -j * spacing));
  out.insert(out.end(), in.begin(), in.end());
  for (int j = 1; j <= copies; ++j) out.push_back(shift(in.back(), j * spacing));
  return out;
}

template <typename Node, typename Avg, typename Shift, typename Pos>
std::vector<Node> lane_riesenfeld(const std::vector<Node>& in, int m, Boundary boundary,
                                  double spacing, Avg&& avg, Shift shift, Pos pos) {
  const std::size_t n = in.size() - 1;
  if (boundary == Boundary::OpenEnds && m == 2) {
    if (n == 1) return in;
    std::vector<Node> odd;
    odd.reserve(n);
    for (std::size_t i = 0; i < n; ++i) odd.push_back(avg(in[i], in[i + 1], 0.5));
    auto doubled = [&](std::size_t j) -> const Node& {
      return j % 2 == 0 ? in[j / 2] : odd[j / 2];
    };
    std::vector<Node> out;
    out.reserve(2 * n);
    out.push_back(in[0]);
    out.push_back(odd[0]);
    for (std::size_t j = 2; j + 2 < 2 * n; ++j) out.push_back(avg(doubled(j), doubled(j + 1), 0.5));
    out.push_back(odd[n - 1]);
    out.push_back(in[n]);
    return out;
  }

  const std::vector<Node> base =
      boundary == Boundary::BiInfinite ? extend_constant(in, m + 1, avg, shift, spacing) : in;
  std::vector<Node> level;
  level.reserve(2 * base.size());
  for (std::size_t i = 0; i + 1 < base.size(); ++i) {
    level.push_back(base[i]);
    level.push_back(avg(base[i], base[i + 1], 0.5));
  }
  level.push_back(base.back());
  for (int sweep = 1; sweep < m; ++sweep) {
    std::vector<Node> next;
    next.reserve(level.size());
    for (std::size_t i = 0; i + 1 < level.size(); ++i) next.push_back(avg(level[i], level[i + 1], 0.5));
    level = std::move(next);
  }
  if (boundary == Boundary::BiInfinite) {
    const double tol = 1e-9 * spacing;
    const double lo = pos(in.front()) - tol;
    const double hi = pos(in.back()) + tol;
    std::vector<Node> kept;
    for (auto& node : level) {
      if (pos(node) >= lo && pos(node) <= hi) kept.push_back(std::move(node));
    }
    level = std::move(kept);
  }
  if (level.size() < 2) throw InvalidArgumentError("too few sets for this spline degree");
  return level;
}

template <typename Node, typename Avg, typename Shift>
std::vector<Node> four_point(const std::vector<Node>& in, double w, Boundary boundary,
                             double spacing, Avg&& avg, Shift shift, std::size_t& midpoints) {
  const std::size_t n = in.size() - 1;
  auto at = [&](std::ptrdiff_t i) -> Node {
    if (i < 0) return shift(in.front(), static_cast<double>(i) * spacing);
    if (i > static_cast<std::ptrdiff_t>(n)) {
      return shift(in.back(), static_cast<double>(i - static_cast<std::ptrdiff_t>(n)) * spacing);
    }
    return in[static_cast<std::size_t>(i)];
  };
  std::vector<Node> out;
  out.reserve(2 * n + 1);
  for (std::size_t i = 0; i < n; ++i) {
    out.push_back(in[i]);
    const auto si = static_cast<std::ptrdiff_t>(i);
    const bool at_end = i == 0 || i + 1 == n;
    if (boundary == Boundary::OpenEnds && at_end) {
      out.push_back(avg(in[i], in[i + 1], 0.5));
      ++midpoints;
    } else {
      Node e = avg(at(si - 1), at(si), -2.0 * w);
      Node h = avg(at(si + 2), at(si + 1), -2.0 * w);
      out.push_back(avg(e, h, 0.5));
    }
  }
  out.push_back(in[n]);
  return out;
}

struct SetNode {
  Raster set;
  double pos = 0.0;
  double bound = 0.0;
};

struct SetOps {
  AverageOptions options;
  std::size_t clamped = 0;

  SetNode operator()(const SetNode& a, const SetNode& b, double t) {
    auto r = general_average(a.set, b.set, t, options);
    if (r.report.clamped) ++clamped;
    const bool interior = t >= 0.0 && t <= 1.0;
    const double bound =
        interior ? t * a.bound + (1.0 - t) * b.bound + r.report.budget() : kInf;
    return {std::move(r.set), t * a.pos + (1.0 - t) * b.pos, bound};
  }
};

std::vector<SetNode> to_nodes(const SetSeq& seq) {
  std::vector<SetNode> nodes;
  nodes.reserve(seq.size());
  for (std::size_t i = 0; i < seq.size(); ++i) {
    const double bound = i < seq.measure_bound.size() ? seq.measure_bound[i] : 0.0;
    nodes.push_back({seq.sets[i], seq.positions[i], bound});
  }
  return nodes;
}

SetSeq from_nodes(std::vector<SetNode> nodes, const SetSeq& parent) {
  SetSeq out;
  out.level = parent.level + 1;
  out.spacing = parent.spacing / 2.0;
  out.clamped_averages = parent.clamped_averages;
  out.midpoint_insertions = parent.midpoint_insertions;
  out.warnings = parent.warnings;
  for (auto& node : nodes) {
    out.sets.push_back(std::move(node.set));
    out.positions.push_back(node.pos);
    out.measure_bound.push_back(node.bound);
  }
  return out;
}

auto set_shift = [](const SetNode& node, double delta) {
  return SetNode{node.set, node.pos + delta, node.bound};
};
auto set_pos = [](const SetNode& node) { return node.pos; };

struct ValueNode {
  double value = 0.0;
  double pos = 0.0;
};

auto value_avg = [](const ValueNode& a, const ValueNode& b, double t) {
  return ValueNode{t * a.value + (1.0 - t) * b.value, t * a.pos + (1.0 - t) * b.pos};
};
auto value_shift = [](const ValueNode& node, double delta) {
  return ValueNode{node.value, node.pos + delta};
};

std::vector<ValueNode> value_nodes(const std::vector<double>& values) {
  std::vector<ValueNode> nodes;
  for (std::size_t i = 0; i < values.size(); ++i) nodes.push_back({values[i], double(i)});
  return nodes;
}

std::vector<double> node_values(const std::vector<ValueNode>& nodes) {
  std::vector<double> out;
  for (const auto& n : nodes) out.push_back(n.value);
  return out;
}

}  // namespace

SetSeq SetSeq::uniform(std::vector<Raster> sets, double first_position, double spacing) {
  SetSeq seq;
  seq.spacing = spacing;
  for (std::size_t i = 0; i < sets.size(); ++i) {
    seq.positions.push_back(first_position + static_cast<double>(i) * spacing);
  }
  seq.measure_bound.assign(sets.size(), 0.0);
  seq.sets = std::move(sets);
  return seq;
}

void SetSeq::validate() const {
  if (sets.size() < 2) throw InvalidArgumentError("a set sequence needs at least two sets");
  if (positions.size() != sets.size()) {
    throw InvalidArgumentError("positions and sets differ in length");
  }
  if (!(spacing > 0.0)) throw InvalidArgumentError("spacing must be positive");
  for (std::size_t i = 1; i < sets.size(); ++i) {
    require_combinable(sets[0], sets[i]);
    if (!(positions[i] > positions[i - 1])) {
      throw InvalidArgumentError("positions must be strictly increasing");
    }
  }
}

Raster eval_interpolant(const SetSeq& seq, double x, const AverageOptions& options) {
  seq.validate();
  const auto& p = seq.positions;
  if (!(x >= p.front() && x <= p.back())) {
    std::ostringstream msg;
    msg << "x = " << x << " outside [" << p.front() << ", " << p.back() << "]";
    throw InvalidArgumentError(msg.str());
  }
  const auto it = std::upper_bound(p.begin(), p.end(), x);
  std::size_t i = static_cast<std::size_t>(it - p.begin());
  i = i == 0 ? 0 : i - 1;
  if (i + 1 >= p.size()) i = p.size() - 2;
  if (x == p[i]) return seq.sets[i];
  if (x == p[i + 1]) return seq.sets[i + 1];
  const double lambda = (p[i + 1] - x) / (p[i + 1] - p[i]);
  return general_average(seq.sets[i], seq.sets[i + 1], lambda, options).set;
}

Raster piecewise_eval(const SetSeq& seq, double x, const SchemeConfig& cfg) {
  return eval_interpolant(seq, x, cfg.average_options());
}

SetSeq spline_refine(const SetSeq& seq, int degree, const SchemeConfig& cfg) {
  seq.validate();
  if (degree < 1) throw InvalidArgumentError("spline degree must be at least 1");
  SetOps ops{cfg.average_options()};
  auto nodes = lane_riesenfeld(to_nodes(seq), degree, cfg.boundary, seq.spacing, ops,
                               set_shift, set_pos);
  SetSeq out = from_nodes(std::move(nodes), seq);
  out.clamped_averages += ops.clamped;
  return out;
}

SetSeq fourpoint_refine(const SetSeq& seq, double tension, const SchemeConfig& cfg) {
  seq.validate();
  SetOps ops{cfg.average_options()};
  std::size_t midpoints = 0;
  auto nodes = four_point(to_nodes(seq), tension, cfg.boundary, seq.spacing, ops, set_shift,
                          midpoints);
  SetSeq out = from_nodes(std::move(nodes), seq);
  out.clamped_averages += ops.clamped;
  out.midpoint_insertions += midpoints;
  if (tension >= 0.125) {
    std::ostringstream msg;
    msg << "tension w = " << tension << " >= 1/8: convergence is not guaranteed";
    if (std::find(out.warnings.begin(), out.warnings.end(), msg.str()) == out.warnings.end()) {
      out.warnings.push_back(msg.str());
    }
  }
  return out;
}

SetSeq refine_once(const SetSeq& seq, const SchemeConfig& cfg) {
  switch (cfg.scheme) {
    case Scheme::Piecewise: return spline_refine(seq, 1, cfg);
    case Scheme::Spline: return spline_refine(seq, cfg.degree, cfg);
    case Scheme::FourPoint: return fourpoint_refine(seq, cfg.tension, cfg);
  }
  throw InvalidArgumentError("unknown scheme");
}

std::vector<SetSeq> subdivide_history(const SetSeq& seq, const SchemeConfig& cfg) {
  if (cfg.levels < 0) throw InvalidArgumentError("levels must be non-negative");
  seq.validate();
  std::vector<SetSeq> history{seq};
  for (int k = 0; k < cfg.levels; ++k) history.push_back(refine_once(history.back(), cfg));
  return history;
}

SetSeq subdivide(const SetSeq& seq, const SchemeConfig& cfg) {
  if (cfg.levels < 0) throw InvalidArgumentError("levels must be non-negative");
  SetSeq cur = seq;
  cur.validate();
  for (int k = 0; k < cfg.levels; ++k) cur = refine_once(cur, cfg);
  return cur;
}

SetSeq interpolate_between(const SetSeq& seq, int count, const AverageOptions& options) {
  seq.validate();
  if (count < 1) throw InvalidArgumentError("insert count must be at least 1");
  SetSeq out;
  out.level = seq.level;
  out.spacing = seq.spacing / (count + 1);
  const double denom = count + 1;
  for (std::size_t i = 0; i + 1 < seq.size(); ++i) {
    out.sets.push_back(seq.sets[i]);
    out.positions.push_back(seq.positions[i]);
    out.measure_bound.push_back(0.0);
    for (int j = 1; j <= count; ++j) {
      const double frac = j / denom;
      auto r = general_average(seq.sets[i], seq.sets[i + 1], 1.0 - frac, options);
      if (r.report.clamped) ++out.clamped_averages;
      out.sets.push_back(std::move(r.set));
      out.positions.push_back(seq.positions[i] + frac * (seq.positions[i + 1] - seq.positions[i]));
      out.measure_bound.push_back(r.report.budget());
    }
  }
  out.sets.push_back(seq.sets.back());
  out.positions.push_back(seq.positions.back());
  out.measure_bound.push_back(0.0);
  return out;
}

double max_consecutive_distance(const SetSeq& seq) {
  double d = 0.0;
  for (std::size_t i = 0; i + 1 < seq.size(); ++i) {
    d = std::max(d, symdiff_distance(seq.sets[i], seq.sets[i + 1]));
  }
  return d;
}

std::vector<double> dk_sequence(const std::vector<SetSeq>& history) {
  std::vector<double> out;
  out.reserve(history.size());
  for (const auto& seq : history) out.push_back(max_consecutive_distance(seq));
  return out;
}

std::vector<std::pair<double, double>> measure_curve(const SetSeq& seq, int samples,
                                                     const AverageOptions& options) {
  if (samples < 2) throw InvalidArgumentError("measure curve needs at least two samples");
  seq.validate();
  std::vector<std::pair<double, double>> out;
  const double x0 = seq.positions.front();
  const double x1 = seq.positions.back();
  for (int j = 0; j < samples; ++j) {
    const double x = j + 1 == samples ? x1 : x0 + (x1 - x0) * j / (samples - 1);
    out.emplace_back(x, measure(eval_interpolant(seq, x, options)));
  }
  return out;
}

double velocity_estimate(const SetSeq& seq, double x, double eps, const AverageOptions& options) {
  if (!(eps > 0.0)) throw InvalidArgumentError("eps must be positive");
  const auto lo = eval_interpolant(seq, x - eps, options);
  const auto hi = eval_interpolant(seq, x + eps, options);
  return symdiff_distance(lo, hi) / (2.0 * eps);
}

std::vector<double> spline_refine_values(const std::vector<double>& values, int degree,
                                         Boundary boundary) {
  if (values.size() < 2) throw InvalidArgumentError("need at least two values");
  if (degree < 1) throw InvalidArgumentError("spline degree must be at least 1");
  auto pos = [](const ValueNode& n) { return n.pos; };
  return node_values(
      lane_riesenfeld(value_nodes(values), degree, boundary, 1.0, value_avg, value_shift, pos));
}

std::vector<double> fourpoint_refine_values(const std::vector<double>& values, double tension,
                                            Boundary boundary) {
  if (values.size() < 2) throw InvalidArgumentError("need at least two values");
  std::size_t midpoints = 0;
  return node_values(
      four_point(value_nodes(values), tension, boundary, 1.0, value_avg, value_shift, midpoints));
}

}  // namespace setavg
