#include "carnot/numerics.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numbers>
#include <queue>
#include <stdexcept>
#include <utility>

namespace carnot {

NodesWeights gauss_legendre(int n, double a, double b) {
  if (n < 1) throw std::invalid_argument("gauss_legendre: n must be >= 1");
  NodesWeights rule{Eigen::VectorXd(n), Eigen::VectorXd(n)};
  const double mid = 0.5 * (a + b);
  const double half = 0.5 * (b - a);
  // Returns P_n(x) and P_n'(x) by the three-term recurrence.
  auto legendre = [n](double x) {
    double p0 = 1.0, p1 = x;
    for (int k = 2; k <= n; ++k) {
      const double pk = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
      p0 = p1;
      p1 = pk;
    }
    return std::pair{p1, n * (x * p1 - p0) / (x * x - 1.0)};
  };
  for (int i = 0; i < (n + 1) / 2; ++i) {
    // Tricomi initial guess, then Newton.
    double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
    for (int it = 0; it < 100; ++it) {
      const auto [p, dp] = legendre(x);
      const double dx = p / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    const double dp = legendre(x).second;
    const double w = 2.0 / ((1.0 - x * x) * dp * dp);
    rule.nodes[i] = mid - half * x;
    rule.nodes[n - 1 - i] = mid + half * x;
    rule.weights[i] = half * w;
    rule.weights[n - 1 - i] = half * w;
  }
  return rule;
}

NodesWeights composite_gauss_legendre(int panels, int per_panel, double a,
                                      double b) {
  if (panels < 1) throw std::invalid_argument("composite rule needs panels");
  NodesWeights out{Eigen::VectorXd(panels * per_panel),
                   Eigen::VectorXd(panels * per_panel)};
  const double width = (b - a) / panels;
  for (int k = 0; k < panels; ++k) {
    const auto rule =
        gauss_legendre(per_panel, a + k * width, a + (k + 1) * width);
    out.nodes.segment(k * per_panel, per_panel) = rule.nodes;
    out.weights.segment(k * per_panel, per_panel) = rule.weights;
  }
  return out;
}

NodesWeights periodic_trapezoid(int n) {
  if (n < 1) throw std::invalid_argument("periodic_trapezoid: n must be >= 1");
  NodesWeights rule{Eigen::VectorXd(n), Eigen::VectorXd(n)};
  const double h = 2.0 * std::numbers::pi / n;
  for (int i = 0; i < n; ++i) {
    rule.nodes[i] = i * h;
    rule.weights[i] = h;
  }
  return rule;
}

Extremum golden_section_maximize(const std::function<double(double)>& f,
                                 double a, double b, double tol,
                                 int max_iter) {
  const double invphi = (std::sqrt(5.0) - 1.0) / 2.0;
  double lo = a, hi = b;
  double x1 = hi - invphi * (hi - lo);
  double x2 = lo + invphi * (hi - lo);
  double f1 = f(x1), f2 = f(x2);
  for (int it = 0; it < max_iter && (hi - lo) > tol; ++it) {
    if (f1 < f2) {
      lo = x1;
      x1 = x2;
      f1 = f2;
      x2 = lo + invphi * (hi - lo);
      f2 = f(x2);
    } else {
      hi = x2;
      x2 = x1;
      f2 = f1;
      x1 = hi - invphi * (hi - lo);
      f1 = f(x1);
    }
  }
  Extremum best{0.5 * (lo + hi), f(0.5 * (lo + hi))};
  for (double x : {a, b}) {
    const double fx = f(x);
    if (fx > best.value) best = {x, fx};
  }
  return best;
}

Extremum dense_scan_maximize(const std::function<double(double)>& f, double a,
                             double b, int nodes) {
  if (nodes < 2) throw std::invalid_argument("dense scan needs >= 2 nodes");
  Extremum best{a, f(a)};
  for (int i = 1; i < nodes; ++i) {
    const double x = a + (b - a) * static_cast<double>(i) / (nodes - 1);
    const double fx = f(x);
    const bool better = fx > best.value ||
                        (fx == best.value && (std::abs(x) < std::abs(best.arg) ||
                                              (std::abs(x) == std::abs(best.arg) &&
                                               x < best.arg)));
    if (better) best = {x, fx};
  }
  return best;
}

double bisect_increasing(const std::function<double(double)>& f, double target,
                         double lo, double hi, double tol, int max_iter) {
  double flo = f(lo) - target;
  double fhi = f(hi) - target;
  if (flo > 0.0 || fhi < 0.0)
    throw std::runtime_error("bisect_increasing: target not bracketed");
  for (int it = 0; it < max_iter && (hi - lo) > tol; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    if (f(mid) < target)
      lo = mid;
    else
      hi = mid;
  }
  if (hi - lo > tol && std::nextafter(lo, hi) < hi)
    throw std::runtime_error("bisect_increasing: no convergence");
  return 0.5 * (lo + hi);
}

namespace {

// Kronrod 15-point nodes (positive half) and weights, Gauss 7-point weights.
constexpr std::array<double, 8> kXgk = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
constexpr std::array<double, 8> kWgk = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
constexpr std::array<double, 4> kWg = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

void gk15(const std::function<double(double)>& f, double a, double b,
          double& result, double& error) {
  const double c = 0.5 * (a + b);
  const double h = 0.5 * (b - a);
  const double fc = f(c);
  double rk = fc * kWgk[7];
  double rg = fc * kWg[3];
  for (int j = 0; j < 7; ++j) {
    const double dx = h * kXgk[j];
    const double s = f(c - dx) + f(c + dx);
    rk += kWgk[j] * s;
    if (j % 2 == 1) rg += kWg[j / 2] * s;
  }
  result = rk * h;
  error = std::abs((rk - rg) * h);
}

}  // namespace

AdaptiveResult adaptive_gauss_kronrod(const std::function<double(double)>& f,
                                      double a, double b, double abs_tol,
                                      double rel_tol, int max_intervals) {
  AdaptiveResult acc;
  if (a == b) return acc;
  // Global bisection of the worst interval, QUADPACK-style. The tolerance is
  // tested against the running total, so a request below roundoff stops at
  // the interval budget instead of recursing without bound.
  struct Piece {
    double a, b, value, error;
    bool operator<(const Piece& o) const { return error < o.error; }
  };
  std::priority_queue<Piece> heap;
  Piece first{a, b, 0.0, 0.0};
  gk15(f, a, b, first.value, first.error);
  heap.push(first);
  double total = first.value, err = first.error;
  while (err > std::max(abs_tol, rel_tol * std::abs(total)) &&
         static_cast<int>(heap.size()) < max_intervals) {
    const Piece w = heap.top();
    const double m = 0.5 * (w.a + w.b);
    if (!(w.a < m && m < w.b)) break;
    heap.pop();
    Piece l{w.a, m, 0.0, 0.0}, r{m, w.b, 0.0, 0.0};
    gk15(f, l.a, l.b, l.value, l.error);
    gk15(f, r.a, r.b, r.value, r.error);
    total += l.value + r.value - w.value;
    err += l.error + r.error - w.error;
    heap.push(l);
    heap.push(r);
  }
  acc.intervals = static_cast<int>(heap.size());
  acc.value = 0.0;
  acc.error = 0.0;
  while (!heap.empty()) {  // re-sum to drop the drift of the running totals
    acc.value += heap.top().value;
    acc.error += heap.top().error;
    heap.pop();
  }
  return acc;
}

Eigen::VectorXd halton(std::uint64_t index, int dim) {
  static constexpr std::array<int, 16> primes = {2,  3,  5,  7,  11, 13, 17, 19,
                                                 23, 29, 31, 37, 41, 43, 47, 53};
  if (dim < 1 || dim > static_cast<int>(primes.size()))
    throw std::invalid_argument("halton: dimension out of range");
  Eigen::VectorXd x(dim);
  for (int d = 0; d < dim; ++d) {
    const std::uint64_t base = primes[d];
    double f = 1.0, r = 0.0;
    std::uint64_t i = index + 1;  // skip the all-zero point
    while (i > 0) {
      f /= static_cast<double>(base);
      r += f * static_cast<double>(i % base);
      i /= base;
    }
    x[d] = r;
  }
  return x;
}

std::uint64_t SplitMix64::next() {
  std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

double SplitMix64::uniform() {
  return static_cast<double>(next() >> 11) * 0x1.0p-53;
}

double SplitMix64::normal() {
  double u1 = uniform();
  while (u1 <= 0.0) u1 = uniform();
  const double u2 = uniform();
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

double smooth_step(double x) {
  if (x <= 0.0) return 0.0;
  if (x >= 1.0) return 1.0;
  const double a = std::exp(-1.0 / x);
  const double b = std::exp(-1.0 / (1.0 - x));
  return a / (a + b);
}

double smooth_step_derivative(double x) {
  if (x <= 0.0 || x >= 1.0) return 0.0;
  const double a = std::exp(-1.0 / x);
  const double b = std::exp(-1.0 / (1.0 - x));
  const double da = a / (x * x);
  const double db = -b / ((1.0 - x) * (1.0 - x));
  const double s = a + b;
  return (da * b - a * db) / (s * s);
}

namespace {

bool lex_less(const Eigen::VectorXd& a, const Eigen::VectorXd& b) {
  return std::lexicographical_compare(a.data(), a.data() + a.size(), b.data(),
                                      b.data() + b.size());
}

bool better(double fa, const Eigen::VectorXd& a, double fb,
            const Eigen::VectorXd& b) {
  return fa > fb || (fa == fb && lex_less(a, b));
}

}  // namespace

MultistartResult multistart_maximize(
    const std::function<double(const Eigen::VectorXd&)>& f,
    const Eigen::VectorXd& lo, const Eigen::VectorXd& hi, int samples,
    int refine, int sweeps) {
  const int dim = static_cast<int>(lo.size());
  if (dim < 1 || hi.size() != lo.size() || samples < 1)
    throw std::invalid_argument("multistart_maximize: bad box or sample count");
  MultistartResult out;
  std::vector<std::pair<double, Eigen::VectorXd>> best;
  const int keep = std::max(refine, 1);
  for (int s = 0; s < samples; ++s) {
    const Eigen::VectorXd x =
        lo.array() + (hi - lo).array() * halton(static_cast<std::uint64_t>(s), dim).array();
    double v = f(x);
    ++out.evaluations;
    if (!std::isfinite(v)) continue;
    if (static_cast<int>(best.size()) < keep || better(v, x, best.back().first, best.back().second)) {
      best.emplace_back(v, x);
      std::sort(best.begin(), best.end(), [](const auto& a, const auto& b) {
        return better(a.first, a.second, b.first, b.second);
      });
      if (static_cast<int>(best.size()) > keep) best.pop_back();
    }
  }
  if (best.empty()) throw std::runtime_error("multistart_maximize: no finite sample");
  out.arg = best.front().second;
  out.value = best.front().first;
  for (int r = 0; r < refine && r < static_cast<int>(best.size()); ++r) {
    Eigen::VectorXd x = best[r].second;
    double fx = best[r].first;
    double window = 0.25 * (hi - lo).maxCoeff();
    for (int sweep = 0; sweep < sweeps; ++sweep, window *= 0.2) {
      for (int k = 0; k < dim; ++k) {
        auto line = [&](double v) {
          Eigen::VectorXd y = x;
          y[k] = v;
          ++out.evaluations;
          const double fy = f(y);
          return std::isfinite(fy) ? fy : -std::numeric_limits<double>::infinity();
        };
        const Extremum e = golden_section_maximize(
            line, std::max(lo[k], x[k] - window), std::min(hi[k], x[k] + window),
            1e-10 * std::max(1.0, window));
        if (e.value > fx) {
          x[k] = e.arg;
          fx = e.value;
        }
      }
    }
    if (better(fx, x, out.value, out.arg)) {
      out.arg = x;
      out.value = fx;
    }
  }
  return out;
}

double pairwise_sum(const double* values, std::size_t n) {
  if (n <= 8) {
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i) s += values[i];
    return s;
  }
  const std::size_t half = n / 2;
  return pairwise_sum(values, half) + pairwise_sum(values + half, n - half);
}

}  // namespace carnot
