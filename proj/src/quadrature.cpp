#include "mahler/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <future>
#include <map>
#include <memory>
#include <mutex>
#include <numbers>

#include "mahler/error.hpp"

namespace mahler {

namespace {

GaussLegendreRule build_rule(int order, int prec) {
  const int wp = prec + 32;
  GaussLegendreRule rule;
  std::vector<Real> nodes, weights;
  const Real tol = epsilon_pow2(wp - 8, wp);
  for (int i = 1; i <= order; ++i) {
    Real x(std::cos(std::numbers::pi * (i - 0.25) / (order + 0.5)), wp);
    Real dp(wp);
    for (int it = 0; it < 100; ++it) {
      // P_order(x) and its derivative by the three-term recurrence.
      Real p0(1L, wp), p1 = x;
      for (int k = 2; k <= order; ++k) {
        Real p2 = (x * p1 * static_cast<long>(2 * k - 1) - p0 * static_cast<long>(k - 1)) /
                  static_cast<long>(k);
        p0 = std::move(p1);
        p1 = std::move(p2);
      }
      dp = (x * p1 - p0) * static_cast<long>(order) / (x * x - Real(1L, wp));
      const Real step = p1 / dp;
      x -= step;
      if (abs(step) < tol) break;
    }
    Real w = Real(2L, wp) / ((Real(1L, wp) - x * x) * dp * dp);
    x.round_to(prec);
    w.round_to(prec);
    nodes.push_back(std::move(x));
    weights.push_back(std::move(w));
  }
  // Ascending order.
  for (int i = order - 1; i >= 0; --i) {
    rule.nodes.push_back(nodes[i]);
    rule.weights.push_back(weights[i]);
  }
  return rule;
}

Real apply_rule(const std::function<Real(const Real&)>& f, const GaussLegendreRule& rule,
                const Real& a, const Real& b) {
  const Real half = (b - a) / 2L;
  const Real mid = (a + b) / 2L;
  Real sum(a.precision());
  for (std::size_t k = 0; k < rule.nodes.size(); ++k) sum += rule.weights[k] * f(mid + half * rule.nodes[k]);
  return sum * half;
}

// A panel with its one-level and two-level estimates.
struct Panel {
  Real a;
  Real b;
  Real left;
  Real right;
  Real diff;
};

Panel make_panel(const std::function<Real(const Real&)>& f, const GaussLegendreRule& rule, Real a,
                 Real b, const Real& whole) {
  const Real m = (a + b) / 2L;
  Real left = apply_rule(f, rule, a, m);
  Real right = apply_rule(f, rule, m, b);
  Real diff = abs(left + right - whole);
  return {std::move(a), std::move(b), std::move(left), std::move(right), std::move(diff)};
}

}  // namespace

const GaussLegendreRule& gauss_legendre(int order, int prec) {
  static std::mutex mu;
  static std::map<std::pair<int, int>, std::unique_ptr<GaussLegendreRule>> cache;
  std::lock_guard<std::mutex> lock(mu);
  auto& slot = cache[{order, prec}];
  if (!slot) slot = std::make_unique<GaussLegendreRule>(build_rule(order, prec));
  return *slot;
}

QuadratureResult integrate(const std::function<Real(const Real&)>& f, std::vector<Real> breaks,
                           const QuadratureOptions& opts, int prec) {
  if (breaks.size() < 2) fail(ErrorCode::kInvalidArgument, "integrate needs at least two breaks");
  std::sort(breaks.begin(), breaks.end(), [](const Real& u, const Real& v) { return u < v; });
  const Real total = breaks.back() - breaks.front();
  if (!(total > 0)) fail(ErrorCode::kInvalidArgument, "empty integration interval");
  const GaussLegendreRule& rule = gauss_legendre(opts.order, prec);
  const Real min_width = total * epsilon_pow2(prec - 8, prec);

  std::vector<std::pair<Real, Real>> intervals;
  for (std::size_t k = 0; k + 1 < breaks.size(); ++k) {
    if (breaks[k + 1] - breaks[k] > min_width) intervals.emplace_back(breaks[k], breaks[k + 1]);
  }

  std::vector<Panel> heap;
  heap.reserve(intervals.size());
  for (std::size_t k = 0; k < intervals.size(); ++k) heap.push_back({Real(prec), Real(prec), Real(prec), Real(prec), Real(prec)});
  auto first = [&](std::size_t k) {
    const auto& [a, b] = intervals[k];
    heap[k] = make_panel(f, rule, a, b, apply_rule(f, rule, a, b));
  };
  if (opts.jobs <= 1 || intervals.size() < 2) {
    for (std::size_t k = 0; k < intervals.size(); ++k) first(k);
  } else {
    // Strided assignment keeps the work split deterministic.
    std::vector<std::future<void>> workers;
    const std::size_t jobs = static_cast<std::size_t>(opts.jobs);
    for (std::size_t w = 0; w < jobs; ++w) {
      workers.push_back(std::async(std::launch::async, [&, w] {
        for (std::size_t k = w; k < intervals.size(); k += jobs) first(k);
      }));
    }
    for (auto& w : workers) w.get();
  }

  // Global adaptivity: always split the panel with the largest difference.
  auto less = [](const Panel& u, const Panel& v) { return u.diff < v.diff; };
  std::make_heap(heap.begin(), heap.end(), less);
  std::vector<Panel> done;
  auto pending = [&] {
    Real s(prec);
    for (const auto& pn : heap) s += pn.diff;
    return s;
  };
  Real err = pending();
  long splits = 0;
  while (!heap.empty() && err > opts.target_err) {
    std::pop_heap(heap.begin(), heap.end(), less);
    Panel pn = std::move(heap.back());
    heap.pop_back();
    err -= pn.diff;
    if (pn.b - pn.a < min_width) {
      done.push_back(std::move(pn));
      continue;
    }
    if (static_cast<int>(heap.size() + done.size()) + 2 > opts.max_panels) {
      fail(ErrorCode::kNonConvergence, "quadrature panel budget exhausted");
    }
    const Real m = (pn.a + pn.b) / 2L;
    for (Panel child : {make_panel(f, rule, pn.a, m, pn.left), make_panel(f, rule, m, pn.b, pn.right)}) {
      err += child.diff;
      heap.push_back(std::move(child));
      std::push_heap(heap.begin(), heap.end(), less);
    }
    // Resum now and then so cancellation in the running total cannot stall the loop.
    if (++splits % 64 == 0) err = pending();
  }

  // Sum in interval order for reproducibility.
  for (auto& pn : heap) done.push_back(std::move(pn));
  std::sort(done.begin(), done.end(), [](const Panel& u, const Panel& v) { return u.a < v.a; });
  QuadratureResult res{Real(prec), Real(prec), static_cast<int>(done.size())};
  for (const auto& pn : done) {
    res.value += pn.left + pn.right;
    res.error_bound += pn.diff;
  }
  res.error_bound *= 4L;
  res.error_bound += max(abs(res.value), Real(1L, prec)) * epsilon_pow2(prec - 16, prec) *
                     static_cast<long>(res.panels);
  return res;
}

}  // namespace mahler
