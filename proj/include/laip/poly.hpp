#pragma once

// Sparse polynomials over Boolean variables with exact rational coefficients.

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "laip/errors.hpp"
#include "laip/rational.hpp"

namespace laip {

using VarIndex = std::uint32_t;

/// A Boolean assignment; every entry is 0 or 1.
using Assignment = std::vector<std::uint8_t>;

struct Monomial {
  std::vector<VarIndex> vars;  // sorted, repeats allowed before multilinearization
  Rational coeff;
};

/// Canonical sparse polynomial. Terms are keyed by their sorted variable
/// multiset and zero coefficients are never stored, so two polynomials are
/// equal iff their term maps are equal.
class Polynomial {
 public:
  using Key = std::vector<VarIndex>;
  using TermMap = std::map<Key, Rational>;

  Polynomial() = default;
  explicit Polynomial(std::size_t num_vars) : n_(num_vars) {}

  static Polynomial constant(std::size_t num_vars, const Rational& c) {
    Polynomial p(num_vars);
    p.add_term({}, c);
    return p;
  }

  static Polynomial variable(std::size_t num_vars, VarIndex i) {
    Polynomial p(num_vars);
    p.add_term({i}, 1);
    return p;
  }

  /// Adds c * prod(x_v for v in vars) and merges with an existing term.
  void add_term(Key vars, const Rational& c) {
    for (VarIndex v : vars) {
      if (v >= n_) {
        throw std::out_of_range("variable index " + std::to_string(v) + " outside [0, " +
                                std::to_string(n_) + ")");
      }
    }
    if (sgn(c) == 0) return;
    Rational coeff = c;
    coeff.canonicalize();
    std::sort(vars.begin(), vars.end());
    auto [it, inserted] = terms_.try_emplace(std::move(vars), std::move(coeff));
    if (!inserted) {
      it->second += coeff;  // try_emplace leaves coeff alone when the key exists
      if (sgn(it->second) == 0) terms_.erase(it);
    }
  }

  void add_term(const Monomial& m) { add_term(m.vars, m.coeff); }

  std::size_t num_vars() const { return n_; }
  const TermMap& terms() const { return terms_; }
  std::size_t size() const { return terms_.size(); }
  bool is_zero() const { return terms_.empty(); }

  bool is_constant() const {
    return terms_.empty() || (terms_.size() == 1 && terms_.begin()->first.empty());
  }

  Rational constant_term() const {
    auto it = terms_.find(Key{});
    return it == terms_.end() ? Rational(0) : it->second;
  }

  Rational coefficient(const Key& vars) const {
    Key sorted = vars;
    std::sort(sorted.begin(), sorted.end());
    auto it = terms_.find(sorted);
    return it == terms_.end() ? Rational(0) : it->second;
  }

  /// Maximum total degree over stored terms (0 for constants and zero).
  std::size_t actual_degree() const {
    std::size_t d = 0;
    for (const auto& [vars, c] : terms_) d = std::max(d, vars.size());
    return d;
  }

  /// Declared degree: the actual degree unless raised by with_degree().
  std::size_t degree() const { return std::max(declared_.value_or(0), actual_degree()); }

  /// Copy of this polynomial whose declared degree is `d` (must be >= actual).
  Polynomial with_degree(std::size_t d) const {
    if (d < actual_degree()) {
      throw std::invalid_argument("declared degree below the actual degree");
    }
    Polynomial p = *this;
    p.declared_ = d;
    return p;
  }

  bool is_multilinear() const {
    for (const auto& [vars, c] : terms_) {
      if (std::adjacent_find(vars.begin(), vars.end()) != vars.end()) return false;
    }
    return true;
  }

  /// Exact value at a point of [0,1]^n (any rational point is accepted).
  Rational evaluate(std::span<const Rational> x) const {
    check_dimension(n_, x.size());
    Rational total = 0;
    Rational term;
    for (const auto& [vars, c] : terms_) {
      term = c;
      for (VarIndex v : vars) {
        term *= x[v];
        if (sgn(term) == 0) break;
      }
      total += term;
    }
    return total;
  }

  /// Exact value at a Boolean point.
  Rational evaluate(std::span<const std::uint8_t> x) const {
    check_dimension(n_, x.size());
    Rational total = 0;
    for (const auto& [vars, c] : terms_) {
      if (std::all_of(vars.begin(), vars.end(), [&](VarIndex v) { return x[v] != 0; })) {
        total += c;
      }
    }
    return total;
  }

  Polynomial& operator+=(const Polynomial& other) {
    check_dimension(n_, other.n_);
    for (const auto& [vars, c] : other.terms_) add_term(vars, c);
    declared_.reset();
    return *this;
  }

  Polynomial& operator-=(const Polynomial& other) {
    check_dimension(n_, other.n_);
    for (const auto& [vars, c] : other.terms_) add_term(vars, -c);
    declared_.reset();
    return *this;
  }

  Polynomial& operator*=(const Rational& s) {
    if (sgn(s) == 0) {
      terms_.clear();
    } else {
      for (auto& [vars, c] : terms_) c *= s;
    }
    declared_.reset();
    return *this;
  }

  friend Polynomial operator+(Polynomial a, const Polynomial& b) { return a += b; }
  friend Polynomial operator-(Polynomial a, const Polynomial& b) { return a -= b; }
  friend Polynomial operator*(Polynomial a, const Rational& s) { return a *= s; }
  friend Polynomial operator*(const Rational& s, Polynomial a) { return a *= s; }

  /// Full product; variable multisets are concatenated (no multilinearization).
  friend Polynomial operator*(const Polynomial& a, const Polynomial& b) {
    check_dimension(a.n_, b.n_);
    Polynomial out(a.n_);
    for (const auto& [va, ca] : a.terms_) {
      for (const auto& [vb, cb] : b.terms_) {
        Key merged;
        merged.reserve(va.size() + vb.size());
        std::merge(va.begin(), va.end(), vb.begin(), vb.end(), std::back_inserter(merged));
        out.add_term(std::move(merged), ca * cb);
      }
    }
    return out;
  }

  friend bool operator==(const Polynomial& a, const Polynomial& b) {
    return a.n_ == b.n_ && a.terms_ == b.terms_;
  }

 private:
  std::size_t n_ = 0;
  TermMap terms_;
  std::optional<std::size_t> declared_;
};

/// Reduces every exponent to one (x^k = x on {0,1}) and merges equal terms.
inline Polynomial multilinearize(const Polynomial& p) {
  Polynomial out(p.num_vars());
  for (const auto& [vars, c] : p.terms()) {
    Polynomial::Key key = vars;
    key.erase(std::unique(key.begin(), key.end()), key.end());
    out.add_term(std::move(key), c);
  }
  return out;
}

/// Smallest beta for which p is beta-smooth at its declared degree d:
/// max over terms of |coeff| / n^(d - l), l the term degree.
inline Rational min_smoothness(const Polynomial& p) {
  const std::size_t n = p.num_vars();
  if (n == 0) throw std::invalid_argument("min_smoothness: polynomial has no variables");
  const std::size_t d = p.degree();
  Rational beta = 0;
  for (const auto& [vars, c] : p.terms()) {
    Rational ratio = abs(c) / pow_int(Rational(n), d - vars.size());
    if (ratio > beta) beta = ratio;
  }
  return beta;
}

/// True iff every degree-l coefficient is bounded by beta * n^(d - l).
inline bool is_smooth(const Polynomial& p, const Rational& beta) {
  const std::size_t n = p.num_vars();
  const std::size_t d = p.degree();
  for (const auto& [vars, c] : p.terms()) {
    if (abs(c) > beta * pow_int(Rational(n), d - vars.size())) return false;
  }
  return true;
}

/// Bound beta * (l + 1) * n^l on a decomposition component at depth d - l,
/// valid at Boolean points.
inline Rational component_bound(const Rational& beta, std::size_t l, std::size_t n) {
  return beta * Rational(static_cast<unsigned long>(l + 1)) * pow_int(Rational(n), l);
}

/// Bound 2 * beta * e * n^d on |p(x)| over [0,1]^n; requires n > d.
inline Rational global_bound(const Rational& beta, std::size_t d, std::size_t n) {
  if (n <= d) throw std::invalid_argument("global_bound requires n > d");
  return 2 * beta * e_upper() * pow_int(Rational(n), d);
}

// Text format:
//   n <num_vars> d <declared_degree>
//   <num>/<den> i1 i2 ...      one line per term, constant term has no indices
// Blank lines and lines starting with '#' are ignored.

inline std::string write_polynomial(const Polynomial& p) {
  std::ostringstream out;
  out << "n " << p.num_vars() << " d " << p.degree() << '\n';
  for (const auto& [vars, c] : p.terms()) {
    out << c.get_num().get_str() << '/' << c.get_den().get_str();
    for (VarIndex v : vars) out << ' ' << v;
    out << '\n';
  }
  return out.str();
}

inline Polynomial parse_polynomial(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  std::size_t line_no = 0;
  std::optional<Polynomial> p;
  std::size_t declared = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos || line[first] == '#') continue;
    std::istringstream fields(line);
    if (!p) {
      std::string n_tag, d_tag;
      long long n = -1, d = -1;
      if (!(fields >> n_tag >> n >> d_tag >> d) || n_tag != "n" || d_tag != "d" || n < 0 ||
          d < 0) {
        throw ParseError(line_no, "expected header 'n <count> d <degree>'");
      }
      p.emplace(static_cast<std::size_t>(n));
      declared = static_cast<std::size_t>(d);
      continue;
    }
    std::string coeff_text;
    fields >> coeff_text;
    Rational c;
    try {
      c = parse_rational(coeff_text);
    } catch (const std::invalid_argument& e) {
      throw ParseError(line_no, e.what());
    }
    Polynomial::Key vars;
    std::string tok;
    while (fields >> tok) {
      long long v = -1;
      try {
        std::size_t used = 0;
        v = std::stoll(tok, &used);
        if (used != tok.size()) v = -1;
      } catch (const std::exception&) {
        v = -1;
      }
      if (v < 0 || static_cast<std::size_t>(v) >= p->num_vars()) {
        throw ParseError(line_no, "bad variable index '" + tok + "'");
      }
      vars.push_back(static_cast<VarIndex>(v));
    }
    p->add_term(std::move(vars), c);
  }
  if (!p) throw ParseError("missing polynomial header");
  if (declared < p->actual_degree()) throw ParseError("declared degree below actual degree");
  return p->with_degree(declared);
}

}  // namespace laip
