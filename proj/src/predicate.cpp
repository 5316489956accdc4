#include "pa/predicate.hpp"

#include <algorithm>
#include <cstdlib>
#include <regex>

#include "pa/errors.hpp"

namespace pa {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

std::vector<std::string> split_clauses(const std::string& text) {
  static const std::regex sep(R"(\s*(&&|\band\b)\s*)");
  std::vector<std::string> out;
  std::sregex_token_iterator it(text.begin(), text.end(), sep, -1), end;
  for (; it != end; ++it) {
    const std::string part = *it;
    int depth = 0;
    std::size_t start = 0;
    for (std::size_t i = 0; i < part.size(); ++i) {
      if (part[i] == '(') ++depth;
      if (part[i] == ')') --depth;
      if (part[i] == ',' && depth == 0) {
        out.push_back(trim(part.substr(start, i - start)));
        start = i + 1;
      }
    }
    out.push_back(trim(part.substr(start)));
  }
  return out;
}

bool compare(const mpq_class& lhs, Clause::Op op, const mpq_class& rhs) {
  return op == Clause::Op::kGe ? lhs >= rhs : lhs <= rhs;
}

bool compare(double lhs, Clause::Op op, double rhs, double slack) {
  return op == Clause::Op::kGe ? lhs >= rhs - slack : lhs <= rhs + slack;
}

}  // namespace

mpq_class parse_rational(const std::string& raw) {
  static const std::regex fraction(R"(([+-]?\d+)\s*/\s*(\d+))");
  static const std::regex decimal(R"(([+-]?)(\d*)(?:\.(\d*))?(?:[eE]([+-]?\d+))?)");
  const std::string text = trim(raw);
  std::smatch m;
  if (std::regex_match(text, m, fraction)) {
    mpz_class den(m[2].str(), 10);
    if (den == 0) throw ValidationError("zero denominator in '" + text + "'");
    std::string num = m[1].str();
    if (!num.empty() && num[0] == '+') num.erase(0, 1);
    mpq_class q(mpz_class(num, 10), den);
    q.canonicalize();
    return q;
  }
  if (std::regex_match(text, m, decimal) && (m[2].length() + m[3].length()) > 0) {
    const std::string digits = m[2].str() + m[3].str();
    mpz_class num(digits.empty() ? "0" : digits, 10);
    long exponent = m[4].matched ? std::stol(m[4].str()) : 0;
    exponent -= static_cast<long>(m[3].length());
    mpz_class scale;
    mpz_ui_pow_ui(scale.get_mpz_t(), 10, static_cast<unsigned long>(std::labs(exponent)));
    mpq_class q = exponent >= 0 ? mpq_class(num * scale) : mpq_class(num, scale);
    q.canonicalize();
    if (m[1].str() == "-") q = -q;
    return q;
  }
  throw ValidationError("not a number: '" + text + "'");
}

Predicate Predicate::constant(bool value) {
  Predicate p;
  p.constant_ = value;
  return p;
}

Predicate Predicate::parse(const std::string& text) {
  static const std::regex clause_re(
      R"(([MLV])\s*\(\s*(\d+)\s*(?:,\s*(\d+)\s*,\s*(\d+)\s*)?\)\s*(>=|<=)\s*(.+))");
  const std::string body = trim(text);
  if (body.empty()) throw ValidationError("empty event predicate");
  if (body == "true") return constant(true);
  if (body == "false") return constant(false);
  Predicate p;
  for (const auto& piece : split_clauses(body)) {
    std::smatch m;
    if (piece == "true") continue;
    if (piece == "false") {
      p.constant_ = false;
      continue;
    }
    if (!std::regex_match(piece, m, clause_re)) {
      throw ValidationError("cannot parse clause '" + piece + "'");
    }
    Clause c;
    if (m[1].str() == "V") c.measure = Clause::Measure::kVertex;
    c.k = std::stoul(m[2].str());
    if (m[3].matched) {
      if (c.measure == Clause::Measure::kVertex) {
        throw ValidationError("vertex clauses cannot name colors: '" + piece + "'");
      }
      c.colored = true;
      c.a1 = std::stoul(m[3].str());
      c.a2 = std::stoul(m[4].str());
    }
    c.op = m[5].str() == ">=" ? Clause::Op::kGe : Clause::Op::kLe;
    c.threshold = parse_rational(m[6].str());
    c.threshold_value = c.threshold.get_d();
    c.text = piece;
    p.clauses_.push_back(std::move(c));
  }
  if (p.constant_ == std::optional<bool>(false)) p.clauses_.clear();
  if (p.clauses_.empty() && !p.constant_) p.constant_ = true;
  return p;
}

std::string Predicate::to_string() const {
  if (constant_) return *constant_ ? "true" : "false";
  std::string out;
  for (const auto& c : clauses_) {
    if (!out.empty()) out += " && ";
    out += c.text;
  }
  return out;
}

std::size_t Predicate::max_degree() const {
  std::size_t k = 0;
  for (const auto& c : clauses_) k = std::max(k, c.k);
  return k;
}

bool Predicate::has_vertex_clauses() const {
  return std::any_of(clauses_.begin(), clauses_.end(),
                     [](const Clause& c) { return c.measure == Clause::Measure::kVertex; });
}

bool Predicate::has_attachment_clauses() const {
  return std::any_of(clauses_.begin(), clauses_.end(),
                     [](const Clause& c) { return c.measure == Clause::Measure::kAttachment; });
}

bool Predicate::operator()(const EventLog& log) const {
  if (constant_) return *constant_;
  if (has_attachment_clauses()) {
    Predicate attachment;
    for (const auto& c : clauses_) {
      if (c.measure == Clause::Measure::kAttachment) attachment.clauses_.push_back(c);
    }
    if (!attachment(attachment_counts(log))) return false;
  }
  if (!has_vertex_clauses()) return true;
  std::vector<std::uint64_t> hist;
  for (auto d : final_indegrees(log)) {
    if (d >= hist.size()) hist.resize(d + 1, 0);
    ++hist[d];
  }
  const mpz_class total(static_cast<unsigned long>(log.n));
  for (const auto& c : clauses_) {
    if (c.measure != Clause::Measure::kVertex) continue;
    const std::uint64_t hits = c.k < hist.size() ? hist[c.k] : 0;
    const mpq_class value(mpz_class(static_cast<unsigned long>(hits)), total);
    if (!compare(value, c.op, c.threshold)) return false;
  }
  return true;
}

bool Predicate::operator()(const AttachmentCounts& counts) const {
  if (constant_) return *constant_;
  if (has_vertex_clauses()) throw StructuralError("vertex clauses need the event log, not attachment counts");
  const mpz_class total(static_cast<unsigned long>(counts.total));
  for (const auto& c : clauses_) {
    std::uint64_t hits = 0;
    if (c.colored) {
      if (c.a1 >= counts.num_colors || c.a2 >= counts.num_colors) {
        throw StructuralError("clause '" + c.text + "' names a color outside the alphabet");
      }
      hits = counts.count(c.k, c.a1 * counts.num_colors + c.a2);
    } else {
      hits = counts.degree_count(c.k);
    }
    const mpq_class value(mpz_class(static_cast<unsigned long>(hits)), total);
    if (!compare(value, c.op, c.threshold)) return false;
  }
  return true;
}

bool Predicate::holds(const PairMeasure& omega, double slack) const {
  if (constant_) return *constant_;
  for (const auto& c : clauses_) {
    double value = 0.0;
    if (c.colored) {
      if (c.a1 >= omega.num_colors() || c.a2 >= omega.num_colors()) {
        throw StructuralError("clause '" + c.text + "' names a color outside the alphabet");
      }
      value = c.k <= omega.kmax() ? omega.atom(c.k, omega.pair_index(c.a1, c.a2)) : 0.0;
    } else {
      for (std::size_t a = 0; a < omega.num_pairs() && c.k <= omega.kmax(); ++a) {
        value += omega.atom(c.k, a);
      }
    }
    if (!compare(value, c.op, c.threshold_value, slack)) return false;
  }
  return true;
}

bool Predicate::holds(const DegreeMeasure& l, double slack) const {
  if (constant_) return *constant_;
  for (const auto& c : clauses_) {
    if (c.colored) throw StructuralError("colored clause applied to a degree measure");
    if (!compare(l[c.k], c.op, c.threshold_value, slack)) return false;
  }
  return true;
}

}  // namespace pa
