#pragma once

// MAX-CUT, MAX-k-SAT and MAX-k-CSP as smooth polynomial programs, plus
// instance generators and file formats.

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <fstream>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "laip/instance.hpp"
#include "laip/random.hpp"

namespace laip {

// ---------------------------------------------------------------- graphs

struct Graph {
  std::size_t n = 0;
  std::vector<std::pair<VarIndex, VarIndex>> edges;  // i < j, insertion order

  /// Adds {i, j}; rejects self-loops, duplicates and out-of-range endpoints.
  void add_edge(std::size_t i, std::size_t j) {
    if (i >= n || j >= n) throw std::out_of_range("edge endpoint out of range");
    if (i == j) throw std::invalid_argument("self-loop");
    const std::pair<VarIndex, VarIndex> e{static_cast<VarIndex>(std::min(i, j)), static_cast<VarIndex>(std::max(i, j))};
    if (!seen_.insert(e).second) throw std::invalid_argument("duplicate edge");
    edges.emplace_back(e.first, e.second);
  }

  std::size_t cut_size(std::span<const std::uint8_t> x) const {
    check_dimension(n, x.size());
    std::size_t c = 0;
    for (const auto& [i, j] : edges) c += (x[i] != 0) != (x[j] != 0);
    return c;
  }

  friend bool operator==(const Graph& a, const Graph& b) { return a.n == b.n && a.edges == b.edges; }

 private:
  std::set<std::pair<VarIndex, VarIndex>> seen_;
};

/// sum over edges {i, j} of x_i + x_j - 2 x_i x_j, declared degree 2.
inline Polynomial maxcut_objective(const Graph& g) {
  Polynomial p(g.n);
  for (const auto& [i, j] : g.edges) {
    p.add_term({i}, 1);
    p.add_term({j}, 1);
    p.add_term({i, j}, -2);
  }
  return p.is_zero() ? p : p.with_degree(2);
}

inline Graph gen_gnp(std::size_t n, double prob, std::uint64_t seed) {
  if (!(prob >= 0.0 && prob <= 1.0)) throw std::invalid_argument("gen_gnp: p must lie in [0, 1]");
  Rng rng(seed);
  Graph g;
  g.n = n;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      if (rng.bernoulli(prob)) g.add_edge(i, j);
    }
  }
  return g;
}

namespace detail {

// Reads non-comment, non-empty lines; returns false at end of input.
inline bool next_content_line(std::istream& in, std::string& line, std::size_t& lineno) {
  while (std::getline(in, line)) {
    ++lineno;
    const auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos || line[first] == 'c' || line[first] == '%') continue;
    return true;
  }
  return false;
}

inline std::size_t parse_count(const std::string& tok, std::size_t lineno) {
  std::size_t pos = 0;
  long long v = 0;
  try {
    v = std::stoll(tok, &pos);
  } catch (const std::exception&) {
    throw ParseError(lineno, "expected an integer, got '" + tok + "'");
  }
  if (pos != tok.size() || v < 0) throw ParseError(lineno, "expected a non-negative integer, got '" + tok + "'");
  return static_cast<std::size_t>(v);
}

}  // namespace detail

/// DIMACS edge format: "p edge N M" then M lines "e u v" with 1-based vertices.
inline Graph parse_dimacs_graph(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  std::size_t lineno = 0;
  if (!detail::next_content_line(in, line, lineno)) throw ParseError(lineno, "missing 'p edge' header");
  std::istringstream header(line);
  std::string p, fmt, ns, ms, extra;
  if (!(header >> p >> fmt >> ns >> ms) || p != "p" || (fmt != "edge" && fmt != "col") || (header >> extra)) {
    throw ParseError(lineno, "malformed header, expected 'p edge N M'");
  }
  Graph g;
  g.n = detail::parse_count(ns, lineno);
  const std::size_t m = detail::parse_count(ms, lineno);
  while (detail::next_content_line(in, line, lineno)) {
    std::istringstream row(line);
    std::string e, us, vs;
    if (!(row >> e >> us >> vs) || e != "e" || (row >> extra)) {
      throw ParseError(lineno, "malformed edge line");
    }
    const std::size_t u = detail::parse_count(us, lineno);
    const std::size_t v = detail::parse_count(vs, lineno);
    if (u < 1 || u > g.n || v < 1 || v > g.n) throw ParseError(lineno, "vertex index out of range");
    try {
      g.add_edge(u - 1, v - 1);
    } catch (const std::exception& ex) {
      throw ParseError(lineno, ex.what());
    }
  }
  if (g.edges.size() != m) {
    throw ParseError("header declares " + std::to_string(m) + " edges, found " +
                     std::to_string(g.edges.size()));
  }
  return g;
}

inline std::string write_dimacs_graph(const Graph& g) {
  std::ostringstream out;
  out << "p edge " << g.n << ' ' << g.edges.size() << '\n';
  for (const auto& [i, j] : g.edges) out << "e " << i + 1 << ' ' << j + 1 << '\n';
  return out.str();
}

// ------------------------------------------------------------------- CNF

struct Literal {
  VarIndex var;
  bool negated;

  friend bool operator==(const Literal&, const Literal&) = default;
};

using Clause = std::vector<Literal>;

struct CnfFormula {
  std::size_t n = 0;
  std::vector<Clause> clauses;

  /// Rejects out-of-range variables and clauses mentioning a variable twice.
  void add_clause(Clause clause) {
    std::set<VarIndex> vars;
    for (const Literal& l : clause) {
      if (l.var >= n) throw std::out_of_range("literal variable out of range");
      if (!vars.insert(l.var).second) throw std::invalid_argument("clause repeats a variable");
    }
    clauses.push_back(std::move(clause));
  }

  /// Common clause width, or nullopt if widths differ. An empty formula has width 0.
  std::optional<std::size_t> width() const {
    if (clauses.empty()) return 0;
    const std::size_t k = clauses.front().size();
    for (const Clause& c : clauses) {
      if (c.size() != k) return std::nullopt;
    }
    return k;
  }

  std::size_t satisfied(std::span<const std::uint8_t> x) const {
    check_dimension(n, x.size());
    std::size_t count = 0;
    for (const Clause& c : clauses) {
      count += std::any_of(c.begin(), c.end(), [&](const Literal& l) { return (x[l.var] != 0) != l.negated; });
    }
    return count;
  }

  friend bool operator==(const CnfFormula& a, const CnfFormula& b) {
    return a.n == b.n && a.clauses == b.clauses;
  }
};

/// sum over clauses of 1 - prod_{negated} x_i * prod_{positive} (1 - x_i),
/// declared degree k.
inline Polynomial maxksat_objective(const CnfFormula& f) {
  const auto k = f.width();
  if (!k) throw std::invalid_argument("maxksat_objective: mixed clause widths");
  Polynomial p(f.n);
  for (const Clause& c : f.clauses) {
    Polynomial falsified = Polynomial::constant(f.n, 1);
    for (const Literal& l : c) {
      Polynomial factor(f.n);
      if (l.negated) {
        factor.add_term({l.var}, 1);
      } else {
        factor.add_term({}, 1);
        factor.add_term({l.var}, -1);
      }
      falsified = falsified * factor;
    }
    p += Polynomial::constant(f.n, 1);
    p -= falsified;
  }
  return p.is_zero() ? p : p.with_degree(*k);
}

namespace detail {

// k distinct indices from [0, n), in draw order.
inline std::vector<VarIndex> distinct_indices(Rng& rng, std::size_t n, std::size_t k) {
  std::vector<VarIndex> pool(n);
  for (std::size_t i = 0; i < n; ++i) pool[i] = static_cast<VarIndex>(i);
  for (std::size_t r = 0; r < k; ++r) {
    const std::size_t j = r + rng.below(n - r);
    std::swap(pool[r], pool[j]);
  }
  pool.resize(k);
  return pool;
}

inline void check_gen_args(std::size_t n, std::size_t k) {
  if (k == 0) throw std::invalid_argument("k must be positive");
  if (k > n) throw std::invalid_argument("k must not exceed n");
}

}  // namespace detail

inline CnfFormula gen_ksat(std::size_t n, std::size_t m, std::size_t k, std::uint64_t seed) {
  detail::check_gen_args(n, k);
  Rng rng(seed);
  CnfFormula f;
  f.n = n;
  for (std::size_t c = 0; c < m; ++c) {
    Clause clause;
    for (VarIndex v : detail::distinct_indices(rng, n, k)) clause.push_back({v, rng.below(2) == 1});
    f.add_clause(std::move(clause));
  }
  return f;
}

/// DIMACS CNF. Clauses are 0-terminated and may span lines. When `k` is given
/// every clause must have exactly k literals. Duplicate clauses are kept.
inline CnfFormula parse_dimacs_cnf(const std::string& text, std::optional<std::size_t> k = std::nullopt) {
  std::istringstream in(text);
  std::string line;
  std::size_t lineno = 0;
  if (!detail::next_content_line(in, line, lineno)) throw ParseError(lineno, "missing 'p cnf' header");
  std::istringstream header(line);
  std::string p, fmt, ns, ms, extra;
  if (!(header >> p >> fmt >> ns >> ms) || p != "p" || fmt != "cnf" || (header >> extra)) {
    throw ParseError(lineno, "malformed header, expected 'p cnf N M'");
  }
  CnfFormula f;
  f.n = detail::parse_count(ns, lineno);
  const std::size_t m = detail::parse_count(ms, lineno);
  Clause current;
  while (detail::next_content_line(in, line, lineno)) {
    std::istringstream row(line);
    std::string tok;
    while (row >> tok) {
      long long lit = 0;
      std::size_t pos = 0;
      try {
        lit = std::stoll(tok, &pos);
      } catch (const std::exception&) {
        throw ParseError(lineno, "expected a literal, got '" + tok + "'");
      }
      if (pos != tok.size()) throw ParseError(lineno, "expected a literal, got '" + tok + "'");
      if (lit == 0) {
        if (k && current.size() != *k) {
          throw ParseError(lineno, "clause has " + std::to_string(current.size()) + " literals, expected " +
                               std::to_string(*k));
        }
        try {
          f.add_clause(std::move(current));
        } catch (const std::exception& ex) {
          throw ParseError(lineno, ex.what());
        }
        current.clear();
        continue;
      }
      const long long var = lit < 0 ? -lit : lit;
      if (var > static_cast<long long>(f.n)) throw ParseError(lineno, "variable index out of range");
      current.push_back({static_cast<VarIndex>(var - 1), lit < 0});
    }
  }
  if (!current.empty()) throw ParseError(lineno, "last clause is not terminated by 0");
  if (f.clauses.size() != m) {
    throw ParseError("header declares " + std::to_string(m) + " clauses, found " +
                     std::to_string(f.clauses.size()));
  }
  return f;
}

inline std::string write_dimacs_cnf(const CnfFormula& f) {
  std::ostringstream out;
  out << "p cnf " << f.n << ' ' << f.clauses.size() << '\n';
  for (const Clause& c : f.clauses) {
    for (const Literal& l : c) out << (l.negated ? "-" : "") << l.var + 1 << ' ';
    out << "0\n";
  }
  return out.str();
}

// ------------------------------------------------------------------- CSP

/// A k-ary constraint; table[a] for the assignment a with index sum_r a_r 2^r,
/// where a_r is the value of scope[r].
struct CspConstraint {
  std::vector<VarIndex> scope;
  std::vector<bool> table;

  friend bool operator==(const CspConstraint&, const CspConstraint&) = default;
};

struct CspInstance {
  std::size_t n = 0;
  std::size_t k = 0;
  std::vector<CspConstraint> constraints;

  void add_constraint(CspConstraint c) {
    if (c.scope.size() != k) throw std::invalid_argument("constraint scope must have k variables");
    if (c.table.size() != (std::size_t{1} << k)) throw std::invalid_argument("truth table must have 2^k entries");
    std::set<VarIndex> vars;
    for (VarIndex v : c.scope) {
      if (v >= n) throw std::out_of_range("scope variable out of range");
      if (!vars.insert(v).second) throw std::invalid_argument("scope repeats a variable");
    }
    constraints.push_back(std::move(c));
  }

  std::size_t satisfied(std::span<const std::uint8_t> x) const {
    check_dimension(n, x.size());
    std::size_t count = 0;
    for (const CspConstraint& c : constraints) {
      std::size_t a = 0;
      for (std::size_t r = 0; r < c.scope.size(); ++r) a |= std::size_t{x[c.scope[r]] != 0} << r;
      count += c.table[a];
    }
    return count;
  }

  friend bool operator==(const CspInstance& a, const CspInstance& b) {
    return a.n == b.n && a.k == b.k && a.constraints == b.constraints;
  }
};

/// M: the largest number of constraints sharing one variable set.
inline std::size_t max_scope_multiplicity(const CspInstance& csp) {
  std::map<std::vector<VarIndex>, std::size_t> count;
  std::size_t best = 0;
  for (const CspConstraint& c : csp.constraints) {
    std::vector<VarIndex> key = c.scope;
    std::sort(key.begin(), key.end());
    best = std::max(best, ++count[key]);
  }
  return best;
}

/// sum over constraints of the indicator polynomial of their satisfying
/// assignments, declared degree k.
inline Polynomial maxkcsp_objective(const CspInstance& csp) {
  Polynomial p(csp.n);
  for (const CspConstraint& c : csp.constraints) {
    for (std::size_t a = 0; a < c.table.size(); ++a) {
      if (!c.table[a]) continue;
      Polynomial indicator = Polynomial::constant(csp.n, 1);
      for (std::size_t r = 0; r < c.scope.size(); ++r) {
        Polynomial factor(csp.n);
        if ((a >> r) & 1) {
          factor.add_term({c.scope[r]}, 1);
        } else {
          factor.add_term({}, 1);
          factor.add_term({c.scope[r]}, -1);
        }
        indicator = indicator * factor;
      }
      p += indicator;
    }
  }
  return p.is_zero() ? p : p.with_degree(csp.k);
}

inline CspInstance gen_kcsp(std::size_t n, std::size_t m, std::size_t k, std::uint64_t seed) {
  detail::check_gen_args(n, k);
  if (k > 16) throw std::invalid_argument("gen_kcsp: k too large for dense truth tables");
  Rng rng(seed);
  CspInstance csp;
  csp.n = n;
  csp.k = k;
  for (std::size_t c = 0; c < m; ++c) {
    CspConstraint con;
    con.scope = detail::distinct_indices(rng, n, k);
    con.table.resize(std::size_t{1} << k);
    for (std::size_t a = 0; a < con.table.size(); ++a) con.table[a] = rng.below(2) == 1;
    csp.add_constraint(std::move(con));
  }
  return csp;
}

/// {"n": N, "k": K, "constraints": [{"scope": [i, ...], "table": "0110"}, ...]}
/// Scope indices are 0-based; character a of "table" is the entry for index a.
inline CspInstance parse_csp_json(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& ex) {
    throw ParseError(std::string("invalid CSP JSON: ") + ex.what());
  }
  try {
    CspInstance csp;
    csp.n = j.at("n").get<std::size_t>();
    csp.k = j.at("k").get<std::size_t>();
    if (csp.k > 16) throw ParseError("k too large for dense truth tables");
    for (const auto& jc : j.at("constraints")) {
      CspConstraint c;
      c.scope = jc.at("scope").get<std::vector<VarIndex>>();
      const std::string table = jc.at("table").get<std::string>();
      for (char ch : table) {
        if (ch != '0' && ch != '1') throw ParseError("truth table must be a 0/1 string");
        c.table.push_back(ch == '1');
      }
      csp.add_constraint(std::move(c));
    }
    return csp;
  } catch (const ParseError&) {
    throw;
  } catch (const std::exception& ex) {
    throw ParseError(std::string("invalid CSP instance: ") + ex.what());
  }
}

inline std::string write_csp_json(const CspInstance& csp) {
  nlohmann::json j;
  j["n"] = csp.n;
  j["k"] = csp.k;
  j["constraints"] = nlohmann::json::array();
  for (const CspConstraint& c : csp.constraints) {
    std::string table;
    for (bool b : c.table) table += b ? '1' : '0';
    j["constraints"].push_back({{"scope", c.scope}, {"table", table}});
  }
  return j.dump(1) + "\n";
}

// ------------------------------------------------------------- instances

inline Instance to_instance(const Graph& g, std::string name = {}) {
  Instance inst;
  inst.name = std::move(name);
  inst.kind = ProblemKind::maxcut;
  inst.objective = maxcut_objective(g);
  inst.ceiling = Rational(static_cast<unsigned long>(g.edges.size()));
  return inst;
}

inline Instance to_instance(const CnfFormula& f, std::string name = {}) {
  Instance inst;
  inst.name = std::move(name);
  inst.kind = ProblemKind::maxksat;
  inst.objective = maxksat_objective(f);
  inst.ceiling = Rational(static_cast<unsigned long>(f.clauses.size()));
  return inst;
}

inline Instance to_instance(const CspInstance& csp, std::string name = {}) {
  Instance inst;
  inst.name = std::move(name);
  inst.kind = ProblemKind::maxkcsp;
  inst.objective = maxkcsp_objective(csp);
  inst.ceiling = Rational(static_cast<unsigned long>(csp.constraints.size()));
  return inst;
}

/// Detects the format from content: CSP JSON, DIMACS edge, DIMACS CNF, or the
/// plain polynomial format.
inline Instance parse_instance(const std::string& text, std::string name = {}) {
  std::istringstream in(text);
  std::string line;
  std::size_t lineno = 0;
  const auto first = text.find_first_not_of(" \t\r\n");
  if (first != std::string::npos && text[first] == '{') return to_instance(parse_csp_json(text), std::move(name));
  if (detail::next_content_line(in, line, lineno)) {
    std::istringstream head(line);
    std::string a, b;
    head >> a >> b;
    if (a == "p" && (b == "edge" || b == "col")) return to_instance(parse_dimacs_graph(text), std::move(name));
    if (a == "p" && b == "cnf") return to_instance(parse_dimacs_cnf(text), std::move(name));
  }
  return make_instance(parse_polynomial(text), std::move(name));
}

inline std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

inline void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write '" + path + "'");
  out << content;
  if (!out) throw std::runtime_error("write failed for '" + path + "'");
}

inline Instance load_instance(const std::string& path) { return parse_instance(read_file(path), path); }

}  // namespace laip
