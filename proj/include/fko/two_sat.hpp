#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

#include "fko/formula.hpp"

namespace fko {

// A 2-literal clause as (variable, sign) pairs; sign +1 is a positive
// literal. A clause may repeat one literal, which encodes a forced
// literal left over from seed reduction.
struct TwoSatFormula {
  int32_t n_vars = 0;
  std::vector<std::array<std::pair<int32_t, int8_t>, 2>> clauses;
};

// Spin values for an ordered subset of variables.
struct PartialAssignment {
  std::vector<int32_t> vars;
  std::vector<int8_t> spins;  // +-1, parallel to vars
};

struct InducedResult {
  bool immediately_unsat = false;  // some clause lost all its literals
  TwoSatFormula formula;           // meaningful when not immediately unsat
};

// Restriction of a 3-SAT formula by fixed seed spins: clauses satisfied
// by a seed literal are dropped, falsified seed literals are deleted, and
// clauses touching no seed variable are excluded entirely.
InducedResult induced_2sat(const Formula& f, const PartialAssignment& fixed);

// Implication-graph satisfiability: unsatisfiable iff some variable and
// its negation share a strongly connected component.
bool two_sat_satisfiable(const TwoSatFormula& g);

enum class RefuteOutcome { kProvenUnsat, kUnknown };

// Branch over all spin assignments of the s highest-degree variables
// (ties broken by lowest index) and refute each branch's induced 2-SAT
// subformula. ProvenUnsat requires all 2^s branches refuted. Guard:
// 1 <= s <= 20.
RefuteOutcome two_sat_refute(const Formula& f, int32_t seed_size);

}  // namespace fko
