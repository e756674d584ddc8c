#pragma once

// Hierarchical decomposition p_I(x) = c_I + sum_j x_j * p_{I,j}(x).

#include <cstddef>
#include <map>
#include <span>
#include <utility>
#include <vector>

#include "laip/poly.hpp"

namespace laip {

using IndexTuple = std::vector<VarIndex>;

struct DecompositionNode {
  IndexTuple tuple;  // I; empty for the root
  Rational constant;  // c_I
  Polynomial poly;    // p_I
  std::vector<std::pair<VarIndex, std::size_t>> children;  // (j, node index of p_{I,j})
};

/// Nodes are stored in depth-first preorder with the root at index 0, so every
/// child has a larger index than its parent.
class DecompositionTree {
 public:
  DecompositionTree() = default;

  const DecompositionNode& root() const { return nodes_.front(); }
  const Rational& constant() const { return nodes_.front().constant; }
  const std::vector<DecompositionNode>& nodes() const { return nodes_; }
  std::size_t size() const { return nodes_.size(); }
  std::size_t num_vars() const { return n_; }
  std::size_t degree() const { return d_; }

  const DecompositionNode* find(const IndexTuple& tuple) const {
    auto it = index_.find(tuple);
    return it == index_.end() ? nullptr : &nodes_[it->second];
  }

  /// Value of every component p_I at x, indexed like nodes().
  template <class Value>
  std::vector<Rational> evaluate_all(std::span<const Value> x) const {
    check_dimension(n_, x.size());
    std::vector<Rational> values(nodes_.size());
    for (std::size_t k = nodes_.size(); k-- > 0;) {
      const DecompositionNode& node = nodes_[k];
      Rational v = node.constant;
      for (const auto& [j, child] : node.children) {
        if (x[j] != 0) v += Rational(x[j]) * values[child];
      }
      values[k] = std::move(v);
    }
    return values;
  }

 private:
  friend DecompositionTree decompose(const Polynomial& p);

  std::size_t n_ = 0;
  std::size_t d_ = 0;
  std::vector<DecompositionNode> nodes_;
  std::map<IndexTuple, std::size_t> index_;
};

namespace detail {

inline void decompose_into(Polynomial p, IndexTuple tuple, std::vector<DecompositionNode>& nodes,
                           std::map<IndexTuple, std::size_t>& index) {
  const std::size_t self = nodes.size();
  index.emplace(tuple, self);
  nodes.push_back(DecompositionNode{tuple, 0, p, {}});

  // Extract x_i for ascending i. Once every variable below i has been
  // extracted, the remaining terms containing x_i are exactly those whose
  // smallest variable is i, which are contiguous in the ordered term map.
  const std::size_t n = p.num_vars();
  std::vector<std::pair<VarIndex, Polynomial>> components;
  for (const auto& [vars, c] : p.terms()) {
    if (vars.empty()) continue;
    const VarIndex i = vars.front();
    if (components.empty() || components.back().first != i) {
      components.emplace_back(i, Polynomial(n));
    }
    components.back().second.add_term(Polynomial::Key(vars.begin() + 1, vars.end()), c);
  }
  nodes[self].constant = p.constant_term();

  for (auto& [i, component] : components) {
    IndexTuple child_tuple = tuple;
    child_tuple.push_back(i);
    const std::size_t child = nodes.size();
    nodes[self].children.emplace_back(i, child);
    decompose_into(std::move(component), std::move(child_tuple), nodes, index);
  }
}

}  // namespace detail

/// Canonical decomposition of a multilinear polynomial: at every node the
/// variables are extracted in ascending index order, so index tuples are
/// strictly increasing and the output is deterministic.
inline DecompositionTree decompose(const Polynomial& p) {
  if (!p.is_multilinear()) {
    throw std::invalid_argument("decompose: polynomial must be multilinear");
  }
  DecompositionTree tree;
  tree.n_ = p.num_vars();
  tree.d_ = p.degree();
  detail::decompose_into(p, {}, tree.nodes_, tree.index_);
  return tree;
}

}  // namespace laip
