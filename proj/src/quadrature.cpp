#include "conetess/quadrature.hpp"

#include <cmath>
#include <map>
#include <mutex>

namespace conetess {

namespace {

// Value and derivative of the Legendre polynomial P_m at x.
std::pair<Real100, Real100> legendre(int m, const Real100& x) {
  Real100 p0 = 1, p1 = x;
  for (int k = 2; k <= m; ++k) {
    Real100 p2 = ((2 * k - 1) * x * p1 - (k - 1) * p0) / k;
    p0 = p1;
    p1 = p2;
  }
  Real100 dp = m * (x * p1 - p0) / (x * x - 1);
  return {p1, dp};
}

std::vector<std::pair<Real100, Real100>> compute_rule(int order) {
  std::vector<std::pair<Real100, Real100>> rule(order);
  for (int i = 1; i <= order; ++i) {
    Real100 x = Real100(std::cos(M_PI * (i - 0.25) / (order + 0.5)));
    for (int it = 0; it < 64; ++it) {
      auto [p, dp] = legendre(order, x);
      Real100 dx = p / dp;
      x -= dx;
      if (boost::multiprecision::abs(dx) < Real100("1e-95")) break;
    }
    auto [p, dp] = legendre(order, x);
    (void)p;
    Real100 w = 2 / ((1 - x * x) * dp * dp);
    rule[i - 1] = {x, w};
  }
  return rule;
}

Real100 panel(const std::function<Real100(const Real100&)>& f, const Real100& a,
              const Real100& b, const std::vector<std::pair<Real100, Real100>>& rule) {
  Real100 mid = (a + b) / 2, half = (b - a) / 2;
  Real100 sum = 0;
  for (const auto& [x, w] : rule) sum += w * f(mid + half * x);
  return sum * half;
}

struct Panel {
  Real100 a, b, estimate;
  int depth;
};

}  // namespace

const std::vector<std::pair<Real100, Real100>>& gauss_legendre_rule(int order) {
  static std::mutex mu;
  static std::map<int, std::vector<std::pair<Real100, Real100>>> cache;
  std::lock_guard<std::mutex> lock(mu);
  auto it = cache.find(order);
  if (it == cache.end()) it = cache.emplace(order, compute_rule(order)).first;
  return it->second;
}

QuadratureResult integrate_adaptive(const std::function<Real100(const Real100&)>& f,
                                    const Real100& a, const Real100& b,
                                    const Real100& rel_tol, int order) {
  const auto& rule = gauss_legendre_rule(order);
  const Real100 total_len = b - a;
  const int max_depth = 48;

  Real100 whole = panel(f, a, b, rule);
  // Absolute budget from a first-pass magnitude estimate; the integrands we
  // meet are nonnegative, so |whole| is the right scale.
  Real100 scale = boost::multiprecision::abs(whole);
  if (scale == 0) scale = 1;
  Real100 abs_tol = rel_tol * scale;

  std::vector<Panel> stack{{a, b, whole, 0}};
  Real100 value = 0, err = 0;
  int accepted = 0;
  while (!stack.empty()) {
    Panel p = stack.back();
    stack.pop_back();
    Real100 mid = (p.a + p.b) / 2;
    Real100 left = panel(f, p.a, mid, rule);
    Real100 right = panel(f, mid, p.b, rule);
    Real100 delta = boost::multiprecision::abs(p.estimate - (left + right));
    Real100 share = abs_tol * (p.b - p.a) / total_len;
    if (delta <= share || p.depth >= max_depth) {
      value += left + right;
      err += delta;
      ++accepted;
    } else {
      stack.push_back({p.a, mid, left, p.depth + 1});
      stack.push_back({mid, p.b, right, p.depth + 1});
    }
  }
  if (err > abs_tol) {
    throw PrecisionError("adaptive quadrature did not reach the requested tolerance",
                         (err / scale).convert_to<double>());
  }
  return {value, err, accepted};
}

}  // namespace conetess
