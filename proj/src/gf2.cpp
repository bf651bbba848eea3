#include "fko/gf2.hpp"

#include <algorithm>
#include <bit>
#include <stdexcept>

#include "fko/rng.hpp"

namespace fko {

int64_t BitVec::lowest() const {
  for (size_t w = 0; w < words_.size(); ++w)
    if (words_[w]) return static_cast<int64_t>((w << 6) + std::countr_zero(words_[w]));
  return -1;
}

std::vector<int64_t> BitVec::set_bits() const {
  std::vector<int64_t> out;
  for (size_t w = 0; w < words_.size(); ++w) {
    uint64_t bits = words_[w];
    while (bits) {
      out.push_back(static_cast<int64_t>((w << 6) + std::countr_zero(bits)));
      bits &= bits - 1;
    }
  }
  return out;
}

Subformula make_subformula(const Formula& f, std::vector<int32_t> clause_ids) {
  std::sort(clause_ids.begin(), clause_ids.end());
  for (size_t i = 0; i < clause_ids.size(); ++i) {
    if (clause_ids[i] < 0 || clause_ids[i] >= f.n_clauses())
      throw FormulaError("subformula clause index out of range");
    if (i > 0 && clause_ids[i] == clause_ids[i - 1])
      throw FormulaError("subformula clause indices must be distinct");
  }
  return Subformula{&f, std::move(clause_ids)};
}

Subformula full_subformula(const Formula& f) {
  std::vector<int32_t> ids(static_cast<size_t>(f.n_clauses()));
  for (size_t i = 0; i < ids.size(); ++i) ids[i] = static_cast<int32_t>(i);
  return Subformula{&f, std::move(ids)};
}

int32_t ParitySystem::local_of(int32_t global_var) {
  if (static_cast<size_t>(global_var) >= global_to_local_.size())
    global_to_local_.resize(static_cast<size_t>(global_var) + 1, -1);
  int32_t& slot = global_to_local_[static_cast<size_t>(global_var)];
  if (slot < 0) {
    slot = static_cast<int32_t>(local_to_global_.size());
    local_to_global_.push_back(global_var);
    touched_globals_.push_back(global_var);
    pivot_row_.push_back(-1);
  }
  return slot;
}

AddResult ParitySystem::add_clause(const Formula& f, int32_t clause_index) {
  if (!consistent_) throw std::logic_error("add_clause on an inconsistent system");
  if (clause_index < 0 || clause_index >= f.n_clauses())
    throw std::out_of_range("clause index out of range");

  const Clause& c = f.clause(clause_index);
  tmp_support_.clear();
  tmp_clauses_.clear();
  uint8_t parity = 0;
  for (int e = 0; e < 3; ++e) {
    tmp_support_.set(static_cast<size_t>(local_of(c.vars[e])));
    if (c.signs[e] < 0) parity ^= 1;
  }
  const size_t ordinal = inserted_.size();
  inserted_.push_back(clause_index);
  tmp_clauses_.set(ordinal);

  // Eliminate every existing pivot present in the new equation. Each XOR
  // removes one pivot and introduces only free variables, so one pass
  // over the rows suffices.
  for (size_t r = 0; r < n_rows_; ++r) {
    if (tmp_support_.test(static_cast<size_t>(rows_[r].pivot))) {
      tmp_support_.xor_with(rows_[r].support);
      tmp_clauses_.xor_with(rows_[r].clauses);
      parity ^= rows_[r].parity;
    }
  }

  const int64_t pivot = tmp_support_.lowest();
  if (pivot < 0) {
    if (parity == 0) return AddResult::kConsistent;  // redundant equation
    consistent_ = false;
    conflict_.clear();
    conflict_.xor_with(tmp_clauses_);
    return AddResult::kInconsistent;
  }

  if (n_rows_ == rows_.size()) rows_.emplace_back();
  Row& row = rows_[n_rows_++];
  row.support.clear();
  row.support.xor_with(tmp_support_);
  row.clauses.clear();
  row.clauses.xor_with(tmp_clauses_);
  row.parity = parity;
  row.pivot = pivot;
  pivot_row_[static_cast<size_t>(pivot)] = static_cast<int64_t>(n_rows_ - 1);

  // Back-substitute to keep rows mutually reduced.
  for (size_t r = 0; r + 1 < n_rows_; ++r) {
    if (rows_[r].support.test(static_cast<size_t>(pivot))) {
      rows_[r].support.xor_with(row.support);
      rows_[r].clauses.xor_with(row.clauses);
      rows_[r].parity ^= row.parity;
    }
  }
  return AddResult::kConsistent;
}

std::vector<int32_t> ParitySystem::conflict_clauses() const {
  std::vector<int32_t> out;
  if (consistent_) return out;
  for (const int64_t ordinal : conflict_.set_bits())
    out.push_back(inserted_[static_cast<size_t>(ordinal)]);
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

Assignment ParitySystem::solution(int32_t n_vars) const {
  if (!consistent_) throw std::logic_error("no solution: system is inconsistent");
  Assignment a(static_cast<size_t>(n_vars), 1);
  // Free variables stay +1 (bit 0), so each pivot equals its row parity.
  for (size_t r = 0; r < n_rows_; ++r) {
    const int32_t global = local_to_global_[static_cast<size_t>(rows_[r].pivot)];
    a[static_cast<size_t>(global)] = rows_[r].parity ? int8_t{-1} : int8_t{1};
  }
  return a;
}

void ParitySystem::reset() {
  for (size_t r = 0; r < n_rows_; ++r) {
    rows_[r].support.clear();
    rows_[r].clauses.clear();
  }
  n_rows_ = 0;
  for (const int32_t g : touched_globals_) global_to_local_[static_cast<size_t>(g)] = -1;
  touched_globals_.clear();
  local_to_global_.clear();
  pivot_row_.clear();
  inserted_.clear();
  consistent_ = true;
  conflict_.clear();
}

XorsatResult xorsat_satisfiable(const Subformula& sub) {
  ParitySystem ps;
  for (const int32_t id : sub.clause_ids) {
    if (ps.add_clause(*sub.parent, id) == AddResult::kInconsistent)
      return XorsatResult{false, {}};
  }
  return XorsatResult{true, ps.solution(sub.parent->n_vars())};
}

bool xorsat_consistent(const Formula& f, const std::vector<int32_t>& clause_ids) {
  ParitySystem ps;
  for (const int32_t id : clause_ids)
    if (ps.add_clause(f, id) == AddResult::kInconsistent) return false;
  return true;
}

Subformula leaf_removal(const Subformula& sub) {
  const Formula& f = *sub.parent;
  // Local incidence over the subformula's variables.
  std::vector<int32_t> vars;
  vars.reserve(sub.clause_ids.size() * 3);
  for (const int32_t id : sub.clause_ids)
    for (int e = 0; e < 3; ++e) vars.push_back(f.clause(id).vars[e]);
  std::sort(vars.begin(), vars.end());
  vars.erase(std::unique(vars.begin(), vars.end()), vars.end());

  const auto local = [&vars](int32_t v) {
    return static_cast<size_t>(std::lower_bound(vars.begin(), vars.end(), v) - vars.begin());
  };

  std::vector<std::vector<int32_t>> clauses_of(vars.size());  // positions into clause_ids
  for (size_t pos = 0; pos < sub.clause_ids.size(); ++pos)
    for (int e = 0; e < 3; ++e)
      clauses_of[local(f.clause(sub.clause_ids[pos]).vars[e])].push_back(
          static_cast<int32_t>(pos));

  std::vector<int32_t> degree(vars.size());
  std::vector<char> clause_alive(sub.clause_ids.size(), 1);
  std::vector<size_t> queue;
  for (size_t v = 0; v < vars.size(); ++v) {
    degree[v] = static_cast<int32_t>(clauses_of[v].size());
    if (degree[v] == 1) queue.push_back(v);
  }
  while (!queue.empty()) {
    const size_t v = queue.back();
    queue.pop_back();
    if (degree[v] != 1) continue;
    int32_t pos = -1;
    for (const int32_t p : clauses_of[v])
      if (clause_alive[static_cast<size_t>(p)]) pos = p;
    if (pos < 0) continue;
    clause_alive[static_cast<size_t>(pos)] = 0;
    for (int e = 0; e < 3; ++e) {
      const size_t u = local(f.clause(sub.clause_ids[static_cast<size_t>(pos)]).vars[e]);
      if (--degree[u] == 1) queue.push_back(u);
    }
  }

  std::vector<int32_t> kept;
  for (size_t pos = 0; pos < sub.clause_ids.size(); ++pos)
    if (clause_alive[pos]) kept.push_back(sub.clause_ids[pos]);
  return Subformula{sub.parent, std::move(kept)};
}

Subformula minimal_unsat_core(const Subformula& sub, uint64_t seed) {
  const Formula& f = *sub.parent;
  if (xorsat_consistent(f, sub.clause_ids))
    throw std::invalid_argument("minimal_unsat_core: input is XORSAT-satisfiable");

  std::vector<int32_t> order = sub.clause_ids;
  Rng rng(seed);
  rng.shuffle(order);

  std::vector<int32_t> core = sub.clause_ids;
  std::vector<int32_t> trial;
  ParitySystem ps;
  for (const int32_t candidate : order) {
    trial.clear();
    for (const int32_t id : core)
      if (id != candidate) trial.push_back(id);
    ps.reset();
    bool unsat = false;
    for (const int32_t id : trial) {
      if (ps.add_clause(f, id) == AddResult::kInconsistent) {
        unsat = true;
        break;
      }
    }
    if (unsat) core = trial;
  }
  return Subformula{sub.parent, std::move(core)};
}

int64_t brute_force_xor_ground_energy(const Subformula& sub) {
  const Formula& f = *sub.parent;
  std::vector<int32_t> vars;
  for (const int32_t id : sub.clause_ids)
    for (int e = 0; e < 3; ++e) vars.push_back(f.clause(id).vars[e]);
  std::sort(vars.begin(), vars.end());
  vars.erase(std::unique(vars.begin(), vars.end()), vars.end());
  if (vars.size() > 26) throw std::invalid_argument("enumeration guard: more than 26 variables");

  const auto local = [&vars](int32_t v) {
    return static_cast<uint32_t>(std::lower_bound(vars.begin(), vars.end(), v) - vars.begin());
  };

  std::vector<uint32_t> mask(sub.clause_ids.size());
  std::vector<uint32_t> target(sub.clause_ids.size());
  for (size_t i = 0; i < sub.clause_ids.size(); ++i) {
    const Clause& c = f.clause(sub.clause_ids[i]);
    uint32_t m = 0, p = 0;
    for (int e = 0; e < 3; ++e) {
      m |= uint32_t{1} << local(c.vars[e]);
      if (c.signs[e] < 0) p ^= 1;
    }
    mask[i] = m;
    target[i] = p;  // violated iff popcount(x & mask) % 2 != p
  }

  int64_t best = static_cast<int64_t>(sub.clause_ids.size());
  const uint64_t limit = uint64_t{1} << vars.size();
  for (uint64_t x = 0; x < limit && best > 0; ++x) {
    int64_t violated = 0;
    for (size_t i = 0; i < mask.size(); ++i)
      violated += (static_cast<uint32_t>(std::popcount(static_cast<uint32_t>(x) & mask[i])) & 1u) !=
                  target[i];
    best = std::min(best, violated);
  }
  return best;
}

double brute_force_m2max(const Formula& f) {
  if (f.n_vars() > 20) throw std::invalid_argument("enumeration guard: N > 20");
  const DegreeProfile prof = degree_profile(f);

  const size_t m = static_cast<size_t>(f.n_clauses());
  std::vector<uint32_t> vmask(m), smask(m);
  for (size_t a = 0; a < m; ++a) {
    const Clause& c = f.clause(a);
    for (int e = 0; e < 3; ++e) {
      vmask[a] |= uint32_t{1} << c.vars[e];
      if (c.signs[e] < 0) smask[a] |= uint32_t{1} << c.vars[e];
    }
  }

  // min over sigma of the number of clauses whose three edges all agree
  // (|sum of coupling*spin| = 3), i.e. 0 or 3 satisfied edges.
  int64_t best = static_cast<int64_t>(m);
  const uint64_t limit = uint64_t{1} << f.n_vars();
  for (uint64_t x = 0; x < limit && best > 0; ++x) {
    int64_t aligned = 0;
    for (size_t a = 0; a < m; ++a) {
      const uint32_t unsat_edges =
          (static_cast<uint32_t>(x) ^ smask[a]) & vmask[a];  // bits where spin != coupling
      const int k = std::popcount(unsat_edges);
      aligned += (k == 0) | (k == 3);
    }
    best = std::min(best, aligned);
  }
  return 0.5 * static_cast<double>(f.n_clauses() + prof.imbalance_sum) -
         2.0 * static_cast<double>(best);
}

}  // namespace fko
