#include "vring/quadrature.hpp"

#include <cmath>
#include <queue>
#include <vector>

namespace vring {
namespace {

// Gauss-Kronrod 7-15 nodes and weights on [-1, 1] (positive half, symmetric).
constexpr double kXgk[8] = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144838258730, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
constexpr double kWgk[8] = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
constexpr double kWg[4] = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

struct Panel {
  double a, b;
  double integral;
  double abs_integral;  // integral of |f|, for the rounding floor
  double error;
  int depth;
  bool operator<(const Panel& other) const { return error < other.error; }
};

Panel evaluate_panel(const std::function<double(double)>& f, double a, double b, int depth) {
  const double center = 0.5 * (a + b);
  const double half = 0.5 * (b - a);
  const double fc = f(center);
  double kronrod = kWgk[7] * fc;
  double resabs = kWgk[7] * std::abs(fc);
  double gauss = kWg[3] * fc;
  for (int i = 0; i < 7; ++i) {
    const double dx = half * kXgk[i];
    const double fl = f(center - dx), fr = f(center + dx);
    kronrod += kWgk[i] * (fl + fr);
    resabs += kWgk[i] * (std::abs(fl) + std::abs(fr));
    if (i % 2 == 1) gauss += kWg[i / 2] * (fl + fr);
  }
  kronrod *= half;
  resabs *= half;
  gauss *= half;
  return Panel{a, b, kronrod, resabs, std::abs(kronrod - gauss), depth};
}

constexpr std::size_t kMaxPanels = 1u << 21;

}  // namespace

double integrate_segments(const std::function<double(double)>& f, std::span<const double> nodes,
                          const QuadratureSpec& spec) {
  if (nodes.size() < 2) throw std::invalid_argument("integrate_segments: need at least two nodes");
  std::priority_queue<Panel> queue;
  double total = 0.0, total_err = 0.0, total_abs = 0.0;
  for (std::size_t i = 0; i + 1 < nodes.size(); ++i) {
    if (!(nodes[i] < nodes[i + 1]))
      throw std::invalid_argument("integrate_segments: nodes must be strictly ascending");
    Panel p = evaluate_panel(f, nodes[i], nodes[i + 1], 0);
    total += p.integral;
    total_err += p.error;
    total_abs += p.abs_integral;
    queue.push(p);
  }
  // Converge when the error drops below the requested tolerance or below the
  // attainable rounding floor for this integrand.
  const auto tolerance = [&] {
    return std::max({spec.abs_tol, spec.rel_tol * std::abs(total),
                     50.0 * 2.22e-16 * total_abs});
  };
  while (total_err > tolerance()) {
    Panel worst = queue.top();
    if (worst.depth >= spec.max_depth || queue.size() >= kMaxPanels) {
      throw QuadratureError("quadrature failed to converge: refinement budget exhausted with "
                            "error " +
                                std::to_string(total_err),
                            total, total_err);
    }
    queue.pop();
    total -= worst.integral;
    total_err -= worst.error;
    total_abs -= worst.abs_integral;
    const double mid = 0.5 * (worst.a + worst.b);
    for (Panel q : {evaluate_panel(f, worst.a, mid, worst.depth + 1),
                    evaluate_panel(f, mid, worst.b, worst.depth + 1)}) {
      total += q.integral;
      total_err += q.error;
      total_abs += q.abs_integral;
      queue.push(q);
    }
  }
  return total;
}

double integrate(const std::function<double(double)>& f, double a, double b,
                 const QuadratureSpec& spec) {
  const double nodes[2] = {a, b};
  return integrate_segments(f, nodes, spec);
}

}  // namespace vring
