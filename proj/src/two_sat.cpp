#include "fko/two_sat.hpp"

#include <algorithm>
#include <array>
#include <stdexcept>

namespace fko {

InducedResult induced_2sat(const Formula& f, const PartialAssignment& fixed) {
  if (fixed.vars.size() != fixed.spins.size())
    throw std::invalid_argument("partial assignment vars/spins length mismatch");
  std::vector<int8_t> spin_of(static_cast<size_t>(f.n_vars()), 0);  // 0 = free
  for (size_t i = 0; i < fixed.vars.size(); ++i) {
    const int32_t v = fixed.vars[i];
    if (v < 0 || v >= f.n_vars()) throw std::invalid_argument("seed variable out of range");
    if (fixed.spins[i] != 1 && fixed.spins[i] != -1)
      throw std::invalid_argument("seed spin must be +1 or -1");
    if (spin_of[static_cast<size_t>(v)] != 0)
      throw std::invalid_argument("seed variable listed twice");
    spin_of[static_cast<size_t>(v)] = fixed.spins[i];
  }

  InducedResult out;
  out.formula.n_vars = f.n_vars();
  for (const Clause& c : f.clauses()) {
    std::array<std::pair<int32_t, int8_t>, 3> remaining;
    int n_remaining = 0;
    bool touched = false, satisfied = false;
    for (int e = 0; e < 3; ++e) {
      const int8_t s = spin_of[static_cast<size_t>(c.vars[e])];
      if (s == 0) {
        remaining[static_cast<size_t>(n_remaining++)] = {c.vars[e], c.signs[e]};
      } else {
        touched = true;
        if (s == c.signs[e]) {
          satisfied = true;
          break;
        }
      }
    }
    if (satisfied || !touched) continue;  // dropped, or no seed variable
    if (n_remaining == 0) {
      out.immediately_unsat = true;
      out.formula.clauses.clear();
      return out;
    }
    if (n_remaining == 1) remaining[1] = remaining[0];  // forced literal, duplicated
    out.formula.clauses.push_back({remaining[0], remaining[1]});
  }
  return out;
}

namespace {

// Iterative Tarjan over the implication graph with literal nodes
// 2*v + (sign < 0).
class TarjanScc {
 public:
  explicit TarjanScc(int32_t n_nodes)
      : adj_(static_cast<size_t>(n_nodes)),
        index_(static_cast<size_t>(n_nodes), -1),
        lowlink_(static_cast<size_t>(n_nodes), 0),
        on_stack_(static_cast<size_t>(n_nodes), 0),
        component_(static_cast<size_t>(n_nodes), -1) {}

  void add_edge(int32_t u, int32_t v) { adj_[static_cast<size_t>(u)].push_back(v); }

  void run() {
    for (int32_t v = 0; v < static_cast<int32_t>(adj_.size()); ++v)
      if (index_[static_cast<size_t>(v)] < 0) strongconnect(v);
  }

  int32_t component(int32_t v) const { return component_[static_cast<size_t>(v)]; }

 private:
  struct Frame {
    int32_t node;
    size_t next_edge;
  };

  void strongconnect(int32_t root) {
    std::vector<Frame> call_stack{{root, 0}};
    while (!call_stack.empty()) {
      Frame& fr = call_stack.back();
      const int32_t v = fr.node;
      if (fr.next_edge == 0) {
        index_[static_cast<size_t>(v)] = lowlink_[static_cast<size_t>(v)] = counter_++;
        stack_.push_back(v);
        on_stack_[static_cast<size_t>(v)] = 1;
      }
      bool descended = false;
      while (fr.next_edge < adj_[static_cast<size_t>(v)].size()) {
        const int32_t w = adj_[static_cast<size_t>(v)][fr.next_edge++];
        if (index_[static_cast<size_t>(w)] < 0) {
          call_stack.push_back({w, 0});
          descended = true;
          break;
        }
        if (on_stack_[static_cast<size_t>(w)])
          lowlink_[static_cast<size_t>(v)] =
              std::min(lowlink_[static_cast<size_t>(v)], index_[static_cast<size_t>(w)]);
      }
      if (descended) continue;
      if (lowlink_[static_cast<size_t>(v)] == index_[static_cast<size_t>(v)]) {
        int32_t w;
        do {
          w = stack_.back();
          stack_.pop_back();
          on_stack_[static_cast<size_t>(w)] = 0;
          component_[static_cast<size_t>(w)] = n_components_;
        } while (w != v);
        ++n_components_;
      }
      call_stack.pop_back();
      if (!call_stack.empty()) {
        const int32_t parent = call_stack.back().node;
        lowlink_[static_cast<size_t>(parent)] =
            std::min(lowlink_[static_cast<size_t>(parent)], lowlink_[static_cast<size_t>(v)]);
      }
    }
  }

  std::vector<std::vector<int32_t>> adj_;
  std::vector<int32_t> index_, lowlink_;
  std::vector<char> on_stack_;
  std::vector<int32_t> component_;
  std::vector<int32_t> stack_;
  int32_t counter_ = 0;
  int32_t n_components_ = 0;
};

inline int32_t literal_node(int32_t var, int8_t sign) { return 2 * var + (sign < 0 ? 1 : 0); }
inline int32_t negated_node(int32_t node) { return node ^ 1; }

}  // namespace

bool two_sat_satisfiable(const TwoSatFormula& g) {
  TarjanScc scc(2 * g.n_vars);
  for (const auto& clause : g.clauses) {
    const int32_t l0 = literal_node(clause[0].first, clause[0].second);
    const int32_t l1 = literal_node(clause[1].first, clause[1].second);
    scc.add_edge(negated_node(l0), l1);
    scc.add_edge(negated_node(l1), l0);
  }
  scc.run();
  for (int32_t v = 0; v < g.n_vars; ++v)
    if (scc.component(2 * v) == scc.component(2 * v + 1)) return false;
  return true;
}

RefuteOutcome two_sat_refute(const Formula& f, int32_t seed_size) {
  if (seed_size < 1 || seed_size > 20)
    throw std::invalid_argument("seed size must lie in [1, 20]");
  if (seed_size > f.n_vars()) throw std::invalid_argument("seed size exceeds variable count");

  // The s highest total degrees, ties to the lowest index.
  std::vector<int64_t> degree(static_cast<size_t>(f.n_vars()), 0);
  for (const Clause& c : f.clauses())
    for (int e = 0; e < 3; ++e) ++degree[static_cast<size_t>(c.vars[e])];
  std::vector<int32_t> order(static_cast<size_t>(f.n_vars()));
  for (size_t i = 0; i < order.size(); ++i) order[i] = static_cast<int32_t>(i);
  std::stable_sort(order.begin(), order.end(), [&degree](int32_t a, int32_t b) {
    return degree[static_cast<size_t>(a)] != degree[static_cast<size_t>(b)]
               ? degree[static_cast<size_t>(a)] > degree[static_cast<size_t>(b)]
               : a < b;
  });

  PartialAssignment fixed;
  fixed.vars.assign(order.begin(), order.begin() + seed_size);
  std::sort(fixed.vars.begin(), fixed.vars.end());
  fixed.spins.assign(static_cast<size_t>(seed_size), 1);

  const uint64_t branches = uint64_t{1} << seed_size;
  for (uint64_t mask = 0; mask < branches; ++mask) {
    for (int32_t b = 0; b < seed_size; ++b)
      fixed.spins[static_cast<size_t>(b)] = ((mask >> b) & 1u) ? int8_t{-1} : int8_t{1};
    const InducedResult induced = induced_2sat(f, fixed);
    if (induced.immediately_unsat) continue;
    if (two_sat_satisfiable(induced.formula)) return RefuteOutcome::kUnknown;
  }
  return RefuteOutcome::kProvenUnsat;
}

}  // namespace fko
