#include "pa/optimize.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <functional>
#include <sstream>

#include "pa/errors.hpp"
#include "pa/parallel.hpp"
#include "pa/rates.hpp"
#include "pa/rng.hpp"

namespace pa {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kFloor = 1e-300;

// Value and gradient of S(v) = sum_{k<=K} v_k log(v_k f_k / (c T_k)) over
// v = (v_0..v_K, tail); T_k = sum_{j>k} v_j.
double column_value_grad(const std::vector<double>& v, double gamma, double beta,
                         std::vector<double>* grad) {
  const std::size_t d = v.size();
  const double c = gamma + beta;
  std::vector<double> T(d, 0.0);
  for (std::size_t k = d - 1; k-- > 0;) T[k] = T[k + 1] + v[k + 1];
  double value = 0.0;
  double prefix = 0.0;  // sum_{k<j} v_k / T_k
  if (grad) grad->assign(d, 0.0);
  for (std::size_t j = 0; j < d; ++j) {
    const bool body = j + 1 < d;
    double log_ratio = 0.0;
    if (body) {
      const double f = gamma * static_cast<double>(j) + beta;
      if (v[j] > 0.0 && T[j] <= 0.0) return kInf;
      log_ratio = std::log(std::max(v[j], kFloor) * f / (c * std::max(T[j], kFloor)));
      if (v[j] > 0.0) value += v[j] * log_ratio;
    }
    if (grad) (*grad)[j] = (body ? log_ratio + 1.0 : 0.0) - prefix;
    if (body && T[j] > 0.0) prefix += v[j] / T[j];
  }
  return value;
}

// KL projection of positive weights p (given as logs) onto
// {x : sum x = 1, lo <= x <= hi}: x_k = clip(p_k s, lo_k, hi_k).
std::vector<double> kl_project(const std::vector<double>& log_p, const Box& box) {
  const std::size_t d = log_p.size();
  const double top = *std::max_element(log_p.begin(), log_p.end());
  std::vector<double> p(d);
  for (std::size_t k = 0; k < d; ++k) p[k] = std::max(std::exp(log_p[k] - top), kFloor);
  auto F = [&](double s) {
    double sum = 0.0;
    for (std::size_t k = 0; k < d; ++k) sum += std::clamp(p[k] * s, box.lo[k], box.hi[k]);
    return sum;
  };
  std::vector<double> breaks;
  breaks.reserve(2 * d);
  for (std::size_t k = 0; k < d; ++k) {
    breaks.push_back(box.lo[k] / p[k]);
    breaks.push_back(box.hi[k] / p[k]);
  }
  std::sort(breaks.begin(), breaks.end());
  // First breakpoint with F >= 1; F is linear between consecutive breakpoints.
  std::size_t lo_i = 0, hi_i = breaks.size() - 1;
  while (lo_i < hi_i) {
    const std::size_t mid = (lo_i + hi_i) / 2;
    if (F(breaks[mid]) >= 1.0) hi_i = mid;
    else lo_i = mid + 1;
  }
  const double s_hi = breaks[hi_i];
  const double s_lo = hi_i > 0 ? breaks[hi_i - 1] : 0.0;
  const double f_hi = F(s_hi);
  const double f_lo = F(s_lo);
  double s = s_hi;
  if (f_hi > f_lo) s = s_lo + (1.0 - f_lo) * (s_hi - s_lo) / (f_hi - f_lo);
  std::vector<double> x(d);
  for (std::size_t k = 0; k < d; ++k) x[k] = std::clamp(p[k] * s, box.lo[k], box.hi[k]);
  return x;
}

std::vector<double> mirror_step(const std::vector<double>& x, const std::vector<double>& g, double eta,
                                const Box& box) {
  std::vector<double> y(x.size());
  for (std::size_t k = 0; k < x.size(); ++k) y[k] = std::log(std::max(x[k], kFloor)) - eta * g[k];
  return kl_project(y, box);
}

double l1(const std::vector<double>& a, const std::vector<double>& b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += std::abs(a[i] - b[i]);
  return s;
}

struct Descent {
  std::vector<double> x;
  double value = kInf;
  double residual = kInf;
  std::size_t iterations = 0;
};

Descent descend(std::vector<double> x, double gamma, double beta, const Box& box,
                const MinimizeOptions& opt) {
  std::vector<double> g, g_next;
  double value = column_value_grad(x, gamma, beta, &g);
  Descent best{x, value, kInf, 0};
  double eta = 1.0;
  for (std::size_t it = 0; it < opt.max_iter; ++it) {
    best.iterations = it;
    const double residual = l1(x, mirror_step(x, g, 1.0, box));
    if (value <= best.value) best.residual = residual;
    if (residual < opt.tol) break;
    bool moved = false;
    while (eta > 1e-30) {
      auto y = mirror_step(x, g, eta, box);
      const double v = column_value_grad(y, gamma, beta, &g_next);
      if (v <= value) {
        moved = v < value || l1(x, y) > 0.0;
        x = std::move(y);
        value = v;
        g.swap(g_next);
        eta = std::min(eta * 1.5, 1e8);
        break;
      }
      eta *= 0.5;
    }
    if (value < best.value) {
      best.x = x;
      best.value = value;
    }
    if (!moved) {
      best.residual = l1(x, mirror_step(x, g, 1.0, box));
      break;
    }
  }
  if (value <= best.value) {
    best.x = x;
    best.value = value;
    best.residual = l1(x, mirror_step(x, g, 1.0, box));
  }
  return best;
}

void require_feasible(const Box& box) {
  double sum_lo = 0.0, sum_hi = 0.0;
  for (std::size_t k = 0; k < box.lo.size(); ++k) {
    if (!(box.lo[k] < box.hi[k])) {
      std::ostringstream msg;
      msg << "constraints leave no interior at degree " << k << ": " << box.lo[k]
          << " <= l <= " << box.hi[k];
      throw Infeasible(msg.str());
    }
    sum_lo += box.lo[k];
    sum_hi += box.hi[k];
  }
  if (!(sum_lo < 1.0 && sum_hi > 1.0)) {
    std::ostringstream msg;
    msg << "constraints leave no interior point of the simplex: sum of lower bounds " << sum_lo
        << ", sum of upper bounds " << sum_hi;
    throw Infeasible(msg.str());
  }
}

DegreeMeasure to_measure(const std::vector<double>& x) {
  std::vector<double> body(x.begin(), x.end() - 1);
  return DegreeMeasure::normalized(std::move(body), x.back());
}

}  // namespace

Box constraint_box(const Predicate& constraints, std::size_t kmax) {
  Box box{std::vector<double>(kmax + 2, 0.0), std::vector<double>(kmax + 2, 1.0)};
  if (constraints.constant_value() == std::optional<bool>(false)) {
    throw Infeasible("constraint set is the contradiction 'false'");
  }
  for (const auto& c : constraints.clauses()) {
    if (c.colored) throw ValidationError("degree-law constraints cannot name colors: " + c.text);
    if (c.k > kmax) throw ValidationError("constraint degree exceeds kmax: " + c.text);
    if (c.op == Clause::Op::kGe) box.lo[c.k] = std::max(box.lo[c.k], c.threshold_value);
    else box.hi[c.k] = std::min(box.hi[c.k], c.threshold_value);
  }
  return box;
}

MinimizeResult minimize_rate_I(const Predicate& constraints, double gamma, double beta,
                               std::size_t kmax, const MinimizeOptions& options) {
  require_valid(WeightSpec::plain(gamma, beta));
  const Box box = constraint_box(constraints, kmax);
  require_feasible(box);
  const std::size_t starts = std::max<std::size_t>(options.starts, 1);
  const std::size_t d = kmax + 2;

  std::vector<Descent> results(starts);
  parallel_for(starts, options.threads, [&](std::size_t s) {
    std::vector<double> logs(d);
    if (s == 0) {
      const auto pi = pi_f(gamma, beta, kmax);
      for (std::size_t k = 0; k <= kmax; ++k) logs[k] = std::log(std::max(pi[k], kFloor));
      logs[d - 1] = std::log(std::max(pi.tail_mass(), kFloor));
    } else {
      Rng rng(options.seed, s);
      std::vector<double> e(d);
      for (auto& x : e) x = -std::log1p(-rng.uniform());
      for (std::size_t k = 0; k < d; ++k) logs[k] = std::log(std::max(e[k], kFloor));
    }
    results[s] = descend(kl_project(logs, box), gamma, beta, box, options);
  });

  MinimizeResult out;
  out.value = kInf;
  for (std::size_t s = 0; s < starts; ++s) {
    out.starts.push_back({results[s].value, results[s].residual, results[s].iterations});
    if (results[s].value < out.value) {
      out.value = results[s].value;
      out.best_start = s;
    }
  }
  const auto& best = results[out.best_start];
  out.l_star = to_measure(best.x);
  out.value = rate_I(out.l_star, gamma, beta).value;
  out.residual = best.residual;
  out.converged = best.residual < options.tol;
  return out;
}

GridResult grid_search_rate_I(const Predicate& constraints, double gamma, double beta,
                              std::size_t kmax, std::size_t resolution, std::size_t refinements) {
  const Box box = constraint_box(constraints, kmax);
  require_feasible(box);
  const std::size_t d = kmax + 2;
  GridResult best{std::vector<double>(d, 0.0), kInf};
  std::vector<double> x(d);
  auto consider = [&]() {
    for (std::size_t k = 0; k < d; ++k) {
      if (x[k] < box.lo[k] - 1e-15 || x[k] > box.hi[k] + 1e-15 || x[k] < 0.0) return;
    }
    const double v = column_value_grad(x, gamma, beta, nullptr);
    if (v < best.value) {
      best.value = v;
      best.point = x;
    }
  };
  // Compositions of `resolution` into d parts.
  std::vector<std::size_t> parts(d, 0);
  std::function<void(std::size_t, std::size_t)> compose = [&](std::size_t i, std::size_t left) {
    if (i == d - 1) {
      parts[i] = left;
      for (std::size_t k = 0; k < d; ++k) x[k] = static_cast<double>(parts[k]) / resolution;
      consider();
      return;
    }
    for (std::size_t p = 0; p <= left; ++p) {
      parts[i] = p;
      compose(i + 1, left - p);
    }
  };
  compose(0, resolution);

  double step = 1.0 / static_cast<double>(resolution);
  const int half = 5;
  for (std::size_t r = 0; r < refinements && std::isfinite(best.value); ++r) {
    const std::vector<double> center = best.point;
    const double fine = 2.0 * step / (2 * half);
    std::vector<int> offset(d - 1, -half);
    while (true) {
      double sum = 0.0;
      for (std::size_t k = 0; k + 1 < d; ++k) {
        x[k] = center[k] + fine * offset[k];
        sum += x[k];
      }
      x[d - 1] = 1.0 - sum;
      consider();
      std::size_t k = 0;
      while (k < d - 1 && ++offset[k] > half) offset[k++] = -half;
      if (k == d - 1) break;
    }
    step = fine;
  }
  return best;
}

ContractionResult contraction_check(const DegreeMeasure& l, const std::vector<double>& mu,
                                    const WeightSpec& spec, std::size_t kmax,
                                    const MinimizeOptions& options) {
  require_valid(spec);
  require_color_law(mu, spec.num_colors());
  if (!spec.is_time_constant()) throw DomainError("contraction_check requires time-constant weights");
  const std::size_t C = spec.num_colors();
  const std::size_t P = spec.num_pairs();
  const DegreeMeasure lt = l.truncated(kmax);
  const std::size_t rows = kmax + 2;
  std::vector<double> mass(rows);
  for (std::size_t k = 0; k <= kmax; ++k) mass[k] = lt[k];
  mass[kmax + 1] = lt.tail_mass();

  std::vector<double> w(P);
  double gbar = 0.0, bbar = 0.0;
  for (std::size_t a = 0; a < P; ++a) {
    w[a] = mu[a / C] * mu[a % C];
    gbar += w[a] * spec.gamma(0, a);
    bbar += w[a] * spec.beta(0, a);
  }
  ContractionResult out;
  out.i_value = rate_I(lt, gbar, bbar).value;

  // s[k][a]: split of degree row k over color pairs.
  std::vector<std::vector<double>> s(rows, w);
  auto build = [&](const std::vector<std::vector<double>>& split) {
    std::vector<double> atoms((kmax + 1) * P), tails(P);
    for (std::size_t k = 0; k <= kmax; ++k) {
      for (std::size_t a = 0; a < P; ++a) atoms[k * P + a] = mass[k] * split[k][a];
    }
    for (std::size_t a = 0; a < P; ++a) tails[a] = mass[kmax + 1] * split[kmax + 1][a];
    return PairMeasure(C, kmax, std::move(atoms), std::move(tails));
  };
  auto objective = [&](const std::vector<std::vector<double>>& split) {
    return rate_J(build(split), mu, spec).value;
  };
  auto gradient = [&](const std::vector<std::vector<double>>& split) {
    const auto omega = build(split);
    auto w21 = omega.color_marginal();
    const double total = stable_sum(w21);
    std::vector<std::vector<double>> g(rows, std::vector<double>(P, 0.0));
    std::vector<double> column(rows), cg;
    for (std::size_t a = 0; a < P; ++a) {
      for (std::size_t k = 0; k < rows; ++k) column[k] = mass[k] * split[k][a];
      column_value_grad(column, spec.gamma(0, a), spec.beta(0, a), &cg);
      const double color = std::log(std::max(w21[a % C] / total, kFloor) / mu[a % C]) + 1.0;
      for (std::size_t k = 0; k < rows; ++k) g[k][a] = cg[k] + color;
    }
    return g;
  };
  auto step = [&](const std::vector<std::vector<double>>& split,
                  const std::vector<std::vector<double>>& g, double eta) {
    auto next = split;
    for (std::size_t k = 0; k < rows; ++k) {
      if (mass[k] <= 0.0) continue;
      double top = -kInf;
      std::vector<double> y(P);
      for (std::size_t a = 0; a < P; ++a) {
        y[a] = std::log(std::max(split[k][a], kFloor)) - eta * g[k][a];
        top = std::max(top, y[a]);
      }
      double z = 0.0;
      for (std::size_t a = 0; a < P; ++a) z += (next[k][a] = std::exp(y[a] - top));
      for (std::size_t a = 0; a < P; ++a) next[k][a] /= z;
    }
    return next;
  };
  auto residual_of = [&](const std::vector<std::vector<double>>& split,
                         const std::vector<std::vector<double>>& g) {
    const auto moved = step(split, g, 1.0);
    double r = 0.0;
    for (std::size_t k = 0; k < rows; ++k) r += mass[k] * l1(split[k], moved[k]);
    return r;
  };

  if (C == 1) {
    out.j_min = objective(s);
    out.gap = out.j_min - out.i_value;
    return out;
  }
  // Start 0 is the product split; the others draw each row from Dirichlet(1).
  const std::size_t starts = std::max<std::size_t>(options.starts, 1);
  out.j_min = kInf;
  for (std::size_t start = 0; start < starts; ++start) {
    auto split = s;
    if (start > 0) {
      Rng rng(options.seed, start);
      for (auto& row : split) {
        double z = 0.0;
        for (auto& x : row) z += (x = -std::log1p(-rng.uniform()));
        for (auto& x : row) x /= z;
      }
    }
    double value = objective(split);
    auto g = gradient(split);
    double eta = 1.0;
    double residual = kInf;
    std::size_t iterations = 0;
    for (std::size_t it = 0; it < options.max_iter; ++it) {
      iterations = it;
      residual = residual_of(split, g);
      if (residual < options.tol) break;
      bool moved = false;
      while (eta > 1e-30) {
        auto next = step(split, g, eta);
        const double v = objective(next);
        if (v < value) {
          split = std::move(next);
          value = v;
          g = gradient(split);
          eta = std::min(eta * 1.5, 1e8);
          moved = true;
          break;
        }
        eta *= 0.5;
      }
      if (!moved) break;
    }
    if (value < out.j_min) {
      out.j_min = value;
      out.residual = residual;
      out.iterations = iterations;
    }
  }
  out.gap = out.j_min - out.i_value;
  return out;
}

}  // namespace pa
