#include "pa/measures.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "pa/errors.hpp"

namespace pa {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

void check_nonnegative(std::span<const double> xs, const char* what) {
  for (std::size_t i = 0; i < xs.size(); ++i) {
    if (!std::isfinite(xs[i]) || xs[i] < 0.0) {
      throw ValidationError(std::string(what) + ": entry " + std::to_string(i) +
                            " is negative or not finite");
    }
  }
}

void check_unit_mass(double total, const char* what) {
  if (std::abs(total - 1.0) > kMassTolerance) {
    throw ValidationError(std::string(what) + ": total mass " + std::to_string(total) +
                          " differs from 1");
  }
}

// Contribution p * log(p / q) with 0 log(0/x) = 0 and p log(p/0) = +inf.
double entropy_term(double p, double q) {
  if (p == 0.0) return 0.0;
  if (q == 0.0) return kInf;
  return p * std::log(p / q);
}

}  // namespace

double stable_sum(std::span<const double> xs) {
  double sum = 0.0;
  double comp = 0.0;
  for (double x : xs) {
    double t = sum + x;
    if (std::abs(sum) >= std::abs(x)) {
      comp += (sum - t) + x;
    } else {
      comp += (x - t) + sum;
    }
    sum = t;
  }
  return sum + comp;
}

DegreeMeasure::DegreeMeasure(std::vector<double> probs, double tail_mass)
    : probs_(std::move(probs)), tail_(tail_mass) {
  if (probs_.empty()) throw StructuralError("DegreeMeasure: empty support");
  check_nonnegative(probs_, "DegreeMeasure");
  if (!std::isfinite(tail_) || tail_ < 0.0) throw ValidationError("DegreeMeasure: bad tail mass");
  check_unit_mass(stable_sum(probs_) + tail_, "DegreeMeasure");
}

DegreeMeasure DegreeMeasure::delta(std::size_t k, std::size_t kmax) {
  if (k > kmax) throw StructuralError("delta: atom beyond kmax");
  std::vector<double> p(kmax + 1, 0.0);
  p[k] = 1.0;
  return DegreeMeasure(std::move(p));
}

DegreeMeasure DegreeMeasure::normalized(std::vector<double> weights, double tail_weight) {
  check_nonnegative(weights, "DegreeMeasure::normalized");
  double total = stable_sum(weights) + tail_weight;
  if (!(total > 0.0)) throw ValidationError("DegreeMeasure::normalized: zero total weight");
  for (double& w : weights) w /= total;
  return DegreeMeasure(std::move(weights), tail_weight / total);
}

double DegreeMeasure::mean() const {
  double m = 0.0;
  for (std::size_t k = 0; k < probs_.size(); ++k) m += static_cast<double>(k) * probs_[k];
  return m;
}

DegreeMeasure DegreeMeasure::truncated(std::size_t kmax) const {
  if (kmax + 1 >= probs_.size()) {
    std::vector<double> p = probs_;
    p.resize(kmax + 1, 0.0);
    return DegreeMeasure(std::move(p), tail_);
  }
  std::vector<double> p(probs_.begin(), probs_.begin() + static_cast<std::ptrdiff_t>(kmax + 1));
  std::vector<double> folded(probs_.begin() + static_cast<std::ptrdiff_t>(kmax + 1), probs_.end());
  folded.push_back(tail_);
  return DegreeMeasure(std::move(p), stable_sum(folded));
}

PairMeasure::PairMeasure(std::size_t num_colors, std::size_t kmax, std::vector<double> atoms,
                         std::vector<double> tails)
    : num_colors_(num_colors), kmax_(kmax), atoms_(std::move(atoms)), tails_(std::move(tails)) {
  if (num_colors_ == 0) throw StructuralError("PairMeasure: empty color alphabet");
  if (atoms_.size() != (kmax_ + 1) * num_pairs()) {
    throw StructuralError("PairMeasure: atom table has wrong size");
  }
  if (tails_.empty()) tails_.assign(num_pairs(), 0.0);
  if (tails_.size() != num_pairs()) throw StructuralError("PairMeasure: tail table has wrong size");
  check_nonnegative(atoms_, "PairMeasure");
  check_nonnegative(tails_, "PairMeasure tails");
  std::vector<double> all = atoms_;
  all.insert(all.end(), tails_.begin(), tails_.end());
  check_unit_mass(stable_sum(all), "PairMeasure");
}

PairMeasure PairMeasure::from_conditionals(std::size_t num_colors,
                                           std::span<const double> pair_weights,
                                           std::span<const DegreeMeasure> conditionals) {
  const std::size_t pairs = num_colors * num_colors;
  if (pair_weights.size() != pairs || conditionals.size() != pairs) {
    throw StructuralError("PairMeasure::from_conditionals: table sizes do not match alphabet");
  }
  std::size_t kmax = 0;
  for (const auto& c : conditionals) kmax = std::max(kmax, c.kmax());
  std::vector<double> atoms((kmax + 1) * pairs, 0.0);
  std::vector<double> tails(pairs, 0.0);
  for (std::size_t a = 0; a < pairs; ++a) {
    DegreeMeasure c = conditionals[a].truncated(kmax);
    for (std::size_t k = 0; k <= kmax; ++k) atoms[k * pairs + a] = pair_weights[a] * c[k];
    tails[a] = pair_weights[a] * c.tail_mass();
  }
  return PairMeasure(num_colors, kmax, std::move(atoms), std::move(tails));
}

PairMeasure PairMeasure::product(const DegreeMeasure& degree, std::size_t num_colors,
                                 std::span<const double> pair_weights) {
  std::vector<DegreeMeasure> conds(num_colors * num_colors, degree);
  return from_conditionals(num_colors, pair_weights, conds);
}

std::vector<double> PairMeasure::pair_marginal() const {
  const std::size_t pairs = num_pairs();
  std::vector<double> out(pairs);
  std::vector<double> column(kmax_ + 2);
  for (std::size_t a = 0; a < pairs; ++a) {
    for (std::size_t k = 0; k <= kmax_; ++k) column[k] = atoms_[k * pairs + a];
    column[kmax_ + 1] = tails_[a];
    out[a] = stable_sum(column);
  }
  return out;
}

std::vector<double> PairMeasure::color_marginal() const {
  std::vector<double> w2 = pair_marginal();
  std::vector<double> out(num_colors_, 0.0);
  for (std::size_t a1 = 0; a1 < num_colors_; ++a1) {
    for (std::size_t a2 = 0; a2 < num_colors_; ++a2) out[a2] += w2[pair_index(a1, a2)];
  }
  return out;
}

DegreeMeasure PairMeasure::degree_marginal() const {
  const std::size_t pairs = num_pairs();
  std::vector<double> p(kmax_ + 1, 0.0);
  for (std::size_t k = 0; k <= kmax_; ++k) {
    p[k] = stable_sum(std::span<const double>(atoms_).subspan(k * pairs, pairs));
  }
  return DegreeMeasure(std::move(p), stable_sum(tails_));
}

bool PairMeasure::has_conditional(std::size_t pair) const {
  if (pair >= num_pairs()) throw StructuralError("PairMeasure: pair index out of range");
  if (tails_[pair] > 0.0) return true;
  for (std::size_t k = 0; k <= kmax_; ++k) {
    if (atoms_[k * num_pairs() + pair] > 0.0) return true;
  }
  return false;
}

DegreeMeasure PairMeasure::conditional(std::size_t pair) const {
  if (!has_conditional(pair)) {
    throw UndefinedConditional("conditional requested on zero-mass color pair " +
                               std::to_string(pair));
  }
  std::vector<double> w(kmax_ + 1);
  for (std::size_t k = 0; k <= kmax_; ++k) w[k] = atoms_[k * num_pairs() + pair];
  return DegreeMeasure::normalized(std::move(w), tails_[pair]);
}

PathMeasure::PathMeasure(std::size_t num_colors, std::vector<double> grid,
                         std::vector<Snapshot> snapshots,
                         std::vector<std::vector<double>> pair_weights)
    : num_colors_(num_colors),
      grid_(std::move(grid)),
      snapshots_(std::move(snapshots)),
      pair_weights_(std::move(pair_weights)) {
  if (num_colors_ == 0) throw StructuralError("PathMeasure: empty color alphabet");
  if (grid_.size() < 2) throw StructuralError("PathMeasure: grid needs at least two points");
  if (grid_.front() != 0.0 || grid_.back() != 1.0) {
    throw ValidationError("PathMeasure: grid must start at 0 and end at 1");
  }
  for (std::size_t i = 1; i < grid_.size(); ++i) {
    if (!(grid_[i] > grid_[i - 1])) throw ValidationError("PathMeasure: grid not increasing");
  }
  if (snapshots_.size() != grid_.size() || pair_weights_.size() != grid_.size()) {
    throw StructuralError("PathMeasure: one snapshot per grid point required");
  }
  for (std::size_t i = 0; i < grid_.size(); ++i) {
    if (snapshots_[i].size() != num_pairs() || pair_weights_[i].size() != num_pairs()) {
      throw StructuralError("PathMeasure: snapshot has wrong number of pairs");
    }
    check_nonnegative(pair_weights_[i], "PathMeasure pair weights");
    check_unit_mass(stable_sum(pair_weights_[i]), "PathMeasure pair weights");
  }
}

PathMeasure PathMeasure::constant(std::size_t num_colors, std::vector<double> grid,
                                  const Snapshot& conditionals,
                                  const std::vector<double>& pair_weights) {
  const std::size_t points = grid.size();
  return PathMeasure(num_colors, std::move(grid), std::vector<Snapshot>(points, conditionals),
                     std::vector<std::vector<double>>(points, pair_weights));
}

double relative_entropy(const DegreeMeasure& p, std::span<const double> q, double q_tail) {
  if (q.size() != p.probs().size()) {
    throw StructuralError("relative_entropy: truncation lengths differ");
  }
  check_nonnegative(q, "relative_entropy reference");
  if (!std::isfinite(q_tail) || q_tail < 0.0) {
    throw ValidationError("relative_entropy: negative reference tail");
  }
  std::vector<double> terms;
  terms.reserve(q.size() + 1);
  for (std::size_t k = 0; k < q.size(); ++k) {
    double t = entropy_term(p[k], q[k]);
    if (std::isinf(t)) return kInf;
    terms.push_back(t);
  }
  double t = entropy_term(p.tail_mass(), q_tail);
  if (std::isinf(t)) return kInf;
  terms.push_back(t);
  return stable_sum(terms);
}

double relative_entropy(const DegreeMeasure& p, const DegreeMeasure& q) {
  return relative_entropy(p, q.probs(), q.tail_mass());
}

double relative_entropy_truncated(const DegreeMeasure& p, std::span<const double> q) {
  if (q.size() != p.probs().size()) {
    throw StructuralError("relative_entropy: truncation lengths differ");
  }
  check_nonnegative(q, "relative_entropy reference");
  std::vector<double> terms(q.size());
  for (std::size_t k = 0; k < q.size(); ++k) {
    terms[k] = entropy_term(p[k], q[k]);
    if (std::isinf(terms[k])) return kInf;
  }
  return stable_sum(terms);
}

double relative_entropy(std::span<const double> p, std::span<const double> q) {
  if (p.size() != q.size()) throw StructuralError("relative_entropy: sizes differ");
  check_nonnegative(q, "relative_entropy reference");
  std::vector<double> terms(p.size());
  for (std::size_t i = 0; i < p.size(); ++i) {
    terms[i] = entropy_term(p[i], q[i]);
    if (std::isinf(terms[i])) return kInf;
  }
  return stable_sum(terms);
}

double tv_distance(std::span<const double> p, std::span<const double> q) {
  if (p.size() != q.size()) throw StructuralError("tv_distance: index structures differ");
  std::vector<double> diffs(p.size());
  for (std::size_t i = 0; i < p.size(); ++i) diffs[i] = std::abs(p[i] - q[i]);
  return 0.5 * stable_sum(diffs);
}

double tv_distance(const DegreeMeasure& p, const DegreeMeasure& q) {
  if (p.kmax() != q.kmax()) throw StructuralError("tv_distance: truncation lengths differ");
  std::vector<double> a(p.probs().begin(), p.probs().end());
  std::vector<double> b(q.probs().begin(), q.probs().end());
  a.push_back(p.tail_mass());
  b.push_back(q.tail_mass());
  return tv_distance(a, b);
}

double tv_distance(const PairMeasure& p, const PairMeasure& q) {
  if (p.num_colors() != q.num_colors() || p.kmax() != q.kmax()) {
    throw StructuralError("tv_distance: pair measures have different index structures");
  }
  std::vector<double> a(p.atoms().begin(), p.atoms().end());
  std::vector<double> b(q.atoms().begin(), q.atoms().end());
  a.insert(a.end(), p.tails().begin(), p.tails().end());
  b.insert(b.end(), q.tails().begin(), q.tails().end());
  return tv_distance(a, b);
}

std::vector<double> tail(const DegreeMeasure& l) {
  const auto probs = l.probs();
  std::vector<double> out(probs.size());
  // Suffix sums accumulated from the top keep small tails accurate.
  double acc = l.tail_mass();
  double comp = 0.0;
  for (std::size_t k = probs.size(); k-- > 0;) {
    out[k] = acc - comp;
    double y = probs[k] - comp;
    double t = acc + y;
    comp = (t - acc) - y;
    acc = t;
  }
  return out;
}

}  // namespace pa
