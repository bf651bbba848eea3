#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "fko/formula.hpp"
#include "fko/gf2.hpp"

namespace fko {

// var -> incident clause ids, CSR layout.
class FormulaIndex {
 public:
  explicit FormulaIndex(const Formula& f);
  const int32_t* begin_of(int32_t var) const { return cid_.data() + start_[static_cast<size_t>(var)]; }
  const int32_t* end_of(int32_t var) const { return cid_.data() + start_[static_cast<size_t>(var) + 1]; }

 private:
  std::vector<int64_t> start_;
  std::vector<int32_t> cid_;
};

// Per-clause usage values d_a across collected UNSAT subformulas, with
// optional per-subformula weights (all 1 in unweighted mode).
class ClauseLedger {
 public:
  explicit ClauseLedger(int64_t n_clauses) : d_(static_cast<size_t>(n_clauses), 0.0) {}

  void add_core(const std::vector<int32_t>& clause_ids, double weight = 1.0);

  int64_t n_clauses() const { return static_cast<int64_t>(d_.size()); }
  uint64_t t() const { return t_; }
  double weight_total() const { return weight_total_; }
  double usage(int32_t clause) const { return d_[static_cast<size_t>(clause)]; }
  const std::vector<double>& usages() const { return d_; }

 private:
  std::vector<double> d_;
  uint64_t t_ = 0;
  double weight_total_ = 0.0;
};

// Minimal C with d^(1) + ... + d^(C) >= sum of subformula weights, the
// usages sorted in descending order. Lower-bounds the XORSAT ground-state
// energy. Requires t >= 1.
int64_t compute_refutation_bound_C(const ClauseLedger& ledger);

// The coarser t / max_a d_a criterion; compute_refutation_bound_C always
// dominates it.
double t_over_d_bound(const ClauseLedger& ledger);

enum class LambdaMode { kEstimate, kCertified };

const char* lambda_mode_name(LambdaMode mode);
LambdaMode lambda_mode_from_name(const std::string& name);

struct SearchConfig {
  enum class Algorithm { kRandomSampling, kFocused };
  Algorithm algorithm = Algorithm::kRandomSampling;
  double gamma = 0.5;   // random sampling: select ceil(N^gamma) variables
  int32_t reuse_cap = 1;  // focused: max subformulas any clause may join
  uint64_t seed = 0;
  // Core attempts before giving up; 0 means the default (50*M for random
  // sampling, reuse_cap*M for focused search).
  uint64_t budget = 0;
  LambdaMode lambda_mode = LambdaMode::kEstimate;
  double lambda_rel_tol = 1e-8;
  bool record_c_trace = false;
};

// Self-contained record proving C > M2_upp, checkable without rerunning
// the search.
struct WitnessCertificate {
  int32_t n_vars = 0;
  int64_t n_clauses = 0;
  std::string hash_alg;
  std::string formula_hash;

  std::string algorithm;  // "random_sampling" | "focused"
  double gamma = 0.0;     // random sampling only
  int32_t reuse_cap = 0;  // focused only
  uint64_t budget = 0;
  uint64_t attempts = 0;

  std::string rng_name;
  uint64_t seed = 0;

  std::string lambda_mode;  // "estimate" | "certified"
  double lambda = 0.0;
  double lambda_rel_tol = 0.0;

  int64_t imbalance_sum = 0;
  double m2_upp = 0.0;
  uint64_t t = 0;
  int64_t bound_c = 0;

  std::vector<std::vector<int32_t>> cores;
  std::vector<std::pair<int32_t, int64_t>> ledger;  // (clause, d_a), d_a > 0
  std::vector<int64_t> c_trace;                     // C after each core, if recorded

  std::string verdict;  // "refuted" | "unknown"

  bool refuted() const { return verdict == "refuted"; }
};

class CertificateFormatError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Canonical structured text: stable key order, exact integers, lambda as
// decimal with its tolerance recorded.
std::string certificate_to_json(const WitnessCertificate& cert);
WitnessCertificate certificate_from_json(const std::string& text);
void write_certificate_file(const WitnessCertificate& cert, const std::string& path);
WitnessCertificate read_certificate_file(const std::string& path);

// One attempt of the random sampling pipeline: select ceil(N^gamma)
// distinct variables, induce the subformula, and if it is
// XORSAT-unsatisfiable re-add its clauses in random order up to the first
// inconsistency (ground energy exactly 1), then leaf-prune. NotFound
// (nullopt) when the induced subformula is satisfiable or empty.
std::optional<Subformula> sample_random_core(const Formula& f, double gamma, uint64_t seed);

// One focused growth: seed a "system" with an eligible clause (usage <
// reuse_cap), repeatedly absorb a random boundary clause of maximal edge
// connection to the system until it turns XORSAT-unsatisfiable, then
// prune to an irreducible core. Usage counts of the returned core's
// clauses are incremented; pruned clauses keep their old usage. Returns
// nullopt when the boundary empties while still satisfiable. Throws if no
// eligible seed clause exists.
std::optional<Subformula> grow_focused_core(const Formula& f, std::vector<int32_t>& usage,
                                            int32_t reuse_cap, uint64_t seed);

WitnessCertificate random_sampling_search(const Formula& f, const SearchConfig& cfg);
WitnessCertificate focused_local_search(const Formula& f, const SearchConfig& cfg);

}  // namespace fko
