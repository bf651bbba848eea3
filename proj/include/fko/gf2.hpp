#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "fko/formula.hpp"

namespace fko {

// Growable bitset. Out-of-range reads are zero; clear() keeps capacity so
// hot loops can recycle instances without reallocating.
class BitVec {
 public:
  bool test(size_t i) const {
    const size_t w = i >> 6;
    return w < words_.size() && ((words_[w] >> (i & 63)) & 1u);
  }
  void set(size_t i) {
    const size_t w = i >> 6;
    if (w >= words_.size()) words_.resize(w + 1, 0);
    words_[w] |= uint64_t{1} << (i & 63);
  }
  void xor_with(const BitVec& o) {
    if (o.words_.size() > words_.size()) words_.resize(o.words_.size(), 0);
    for (size_t w = 0; w < o.words_.size(); ++w) words_[w] ^= o.words_[w];
  }
  bool none() const {
    for (const uint64_t w : words_)
      if (w) return false;
    return true;
  }
  // Index of the lowest set bit, or -1.
  int64_t lowest() const;
  void clear() {
    for (uint64_t& w : words_) w = 0;
  }
  std::vector<int64_t> set_bits() const;
  void swap(BitVec& o) { words_.swap(o.words_); }

 private:
  std::vector<uint64_t> words_;
};

// A clause subset of a parent formula. Indices are distinct and sorted.
struct Subformula {
  const Formula* parent = nullptr;
  std::vector<int32_t> clause_ids;
};

Subformula make_subformula(const Formula& f, std::vector<int32_t> clause_ids);
Subformula full_subformula(const Formula& f);

enum class AddResult { kConsistent, kInconsistent };

// Incremental row-echelon state over GF(2). Each 3-SAT clause enters as
// the parity equation x_i + x_j + x_k = p (p = 1 iff the coupling product
// is -1) under the bit map sigma = +1 <-> 0. Rows stay mutually reduced:
// no row's pivot variable appears in any other row. Each row also carries
// the set of inserted clauses whose equations XOR to it, so an
// inconsistency names the exact contradictory clause subset.
class ParitySystem {
 public:
  // One elimination step. Rejects insertion into an inconsistent system.
  AddResult add_clause(const Formula& f, int32_t clause_index);

  bool consistent() const { return consistent_; }
  int64_t n_inserted() const { return static_cast<int64_t>(inserted_.size()); }
  const std::vector<int32_t>& inserted() const { return inserted_; }

  // Clause indices whose parity equations sum to 0 = 1. Empty while
  // consistent.
  std::vector<int32_t> conflict_clauses() const;

  // A satisfying assignment of the inserted equations over a formula with
  // n_vars variables; untouched and free variables get +1. Only valid
  // while consistent.
  Assignment solution(int32_t n_vars) const;

  // Forget all equations but keep allocated capacity.
  void reset();

 private:
  int32_t local_of(int32_t global_var);

  struct Row {
    BitVec support;   // local variable ids
    BitVec clauses;   // insertion ordinals
    int64_t pivot = -1;
    uint8_t parity = 0;
  };

  std::vector<Row> rows_;
  size_t n_rows_ = 0;
  std::vector<int64_t> pivot_row_;        // local var -> row index or -1
  std::vector<int32_t> local_to_global_;
  std::vector<int32_t> global_to_local_;  // sized lazily, -1 when unmapped
  std::vector<int32_t> touched_globals_;
  std::vector<int32_t> inserted_;
  bool consistent_ = true;
  BitVec conflict_;  // over insertion ordinals
  BitVec tmp_support_, tmp_clauses_;
};

struct XorsatResult {
  bool satisfiable = false;
  Assignment witness;  // xor-energy-0 assignment on the subformula when satisfiable
};

XorsatResult xorsat_satisfiable(const Subformula& sub);

// True iff the clause subset has a consistent parity system.
bool xorsat_consistent(const Formula& f, const std::vector<int32_t>& clause_ids);

// Fixed point of removing degree-1 variables together with their single
// clause. Preserves the XORSAT ground-state energy.
Subformula leaf_removal(const Subformula& sub);

// Single seeded random pass of deletion-based core extraction: every
// clause is tested once against the current core, so the result is
// irreducible (removing any one clause makes it satisfiable). Input must
// be XORSAT-unsatisfiable.
Subformula minimal_unsat_core(const Subformula& sub, uint64_t seed);

// Exact min over all assignments of the subformula's variables of the
// number of violated parity clauses. Enumeration guard: at most 26
// distinct variables.
int64_t brute_force_xor_ground_energy(const Subformula& sub);

// (M + imbalance_sum)/2 - 2 * min over assignments of the number of
// clauses whose three coupling/spin products all agree. Enumeration
// guard: N <= 20.
double brute_force_m2max(const Formula& f);

}  // namespace fko
