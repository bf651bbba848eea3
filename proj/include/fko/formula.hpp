#pragma once

#include <array>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace fko {

// One 3-SAT clause: three distinct variables with edge couplings in {-1,+1}.
// Coupling +1 corresponds to a positive DIMACS literal, -1 to a negated one.
struct Clause {
  std::array<int32_t, 3> vars;
  std::array<int8_t, 3> signs;
};

// How a formula was produced, so every downstream artifact can replay it.
struct GeneratorStamp {
  uint64_t seed = 0;
  std::string rng_name;
};

class FormulaError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Immutable 3-SAT factor graph over n_vars binary variables. Duplicate
// clauses are allowed; variables within a clause are always distinct.
class Formula {
 public:
  Formula(int32_t n_vars, std::vector<Clause> clauses,
          std::optional<GeneratorStamp> generator = std::nullopt);

  int32_t n_vars() const { return n_vars_; }
  int64_t n_clauses() const { return static_cast<int64_t>(clauses_.size()); }
  double clause_density() const {
    return n_vars_ == 0 ? 0.0 : static_cast<double>(n_clauses()) / n_vars_;
  }
  const Clause& clause(int64_t a) const { return clauses_[static_cast<size_t>(a)]; }
  const std::vector<Clause>& clauses() const { return clauses_; }
  const std::optional<GeneratorStamp>& generator() const { return generator_; }

 private:
  int32_t n_vars_;
  std::vector<Clause> clauses_;
  std::optional<GeneratorStamp> generator_;
};

// Spin configuration, entries in {-1,+1}, one per variable.
using Assignment = std::vector<int8_t>;

// Decode an assignment from the low n bits of `bits` (bit set -> -1).
Assignment assignment_from_bits(uint64_t bits, int32_t n);

// m clauses on 3 distinct uniformly chosen variables each, couplings
// independent fair coins. Identical (n, m, seed) reproduces the formula
// bit for bit. Requires n >= 3.
Formula generate_random_3sat(int32_t n, int64_t m, uint64_t seed);

struct DegreeProfile {
  std::vector<int64_t> k_plus;
  std::vector<int64_t> k_minus;
  int64_t imbalance_sum = 0;  // sum_i |k_i^+ - k_i^-|
};

DegreeProfile degree_profile(const Formula& f);

// Number of clauses with all three edges unsatisfied.
int64_t sat_energy(const Formula& f, const Assignment& a);

// Number of clauses whose coupling/spin product is -1, i.e. clauses with
// an even number (0 or 2) of satisfied edges.
int64_t xor_energy(const Formula& f, const Assignment& a);

struct SatisfactionProfile {
  int64_t m0 = 0, m1 = 0, m2 = 0, m3 = 0;
  int64_t m12() const { return m1 + m2; }
  int64_t total() const { return m0 + m1 + m2 + m3; }
};

SatisfactionProfile satisfaction_profile(const Formula& f, const Assignment& a);

class DimacsError : public FormulaError {
 public:
  using FormulaError::FormulaError;
};

// DIMACS CNF with exactly 3 distinct literals per clause. The writer adds
// a "c seed <integer> gen <name>" comment when the formula carries a
// generator stamp; the reader restores it.
Formula read_dimacs(std::istream& in);
Formula read_dimacs_file(const std::string& path);
void write_dimacs(const Formula& f, std::ostream& out);
void write_dimacs_file(const Formula& f, const std::string& path);

// Comment-free DIMACS bytes: "p cnf N M" plus one line per clause in
// stored order. This is the hashing basis, so metadata comments never
// change a formula's fingerprint.
std::string canonical_dimacs(const Formula& f);

// fnv1a64 of canonical_dimacs, as 16 hex digits.
std::string formula_hash_hex(const Formula& f);

}  // namespace fko
