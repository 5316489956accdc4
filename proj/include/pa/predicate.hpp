#pragma once

// Threshold events over attachment-measure coordinates.
//   clause  := M(k) op x | M(k, a1, a2) op x | V(k) op x | true | false
//   op      := >= | <=
//   x       := decimal (0.75, 1e-3) or fraction (2/3)
// Clauses are joined by "&&", "," or "and". M(k) is the degree marginal;
// L(k) is accepted as a synonym. V(k) is the fraction of the n vertices
// whose final in-degree is k.

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include <gmpxx.h>

#include "pa/empirics.hpp"
#include "pa/measures.hpp"

namespace pa {

struct Clause {
  enum class Op { kGe, kLe };
  enum class Measure { kAttachment, kVertex };
  Measure measure = Measure::kAttachment;
  std::size_t k = 0;
  std::size_t a1 = 0, a2 = 0;
  bool colored = false;
  Op op = Op::kGe;
  mpq_class threshold;
  double threshold_value = 0.0;
  std::string text;
};

class Predicate {
 public:
  static Predicate parse(const std::string& text);
  static Predicate constant(bool value);

  const std::vector<Clause>& clauses() const { return clauses_; }
  /// Set for a bare "true"/"false"; clauses are empty then.
  std::optional<bool> constant_value() const { return constant_; }
  std::string to_string() const;

  /// Exact evaluation on integer counts: count / total op threshold.
  /// Throws StructuralError on vertex clauses.
  bool operator()(const AttachmentCounts& counts) const;
  bool operator()(const EventLog& log) const;
  bool has_vertex_clauses() const;
  bool has_attachment_clauses() const;
  /// Floating evaluation on a measure; degree clauses read the degree marginal.
  bool holds(const PairMeasure& omega, double slack = 0.0) const;
  bool holds(const DegreeMeasure& l, double slack = 0.0) const;

  /// Largest degree mentioned by any clause.
  std::size_t max_degree() const;

 private:
  std::vector<Clause> clauses_;
  std::optional<bool> constant_;
};

/// Exact rational value of a decimal or fraction literal.
mpq_class parse_rational(const std::string& text);

}  // namespace pa
