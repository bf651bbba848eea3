#pragma once

#include <cstdint>
#include <vector>

#include "fko/formula.hpp"

namespace fko {

// Sparse symmetric co-occurrence matrix M_ij = -1/2 sum_{a in di ^ dj}
// J_a^i J_a^j (zero diagonal). Entries are exact half-integers; twice the
// value is stored as an integer so assembly has no rounding.
class CouplingMatrix {
 public:
  static CouplingMatrix build(const Formula& f);

  int32_t dim() const { return n_; }
  int64_t nnz() const { return static_cast<int64_t>(col_.size()); }

  double entry(int32_t i, int32_t j) const;

  // y = M x
  void multiply(const std::vector<double>& x, std::vector<double>& y) const;

  // sigma^T M sigma for a +-1 vector; exact integer.
  int64_t quad_form(const Assignment& sigma) const;

  // max_i sum_j |M_ij|; a provable bound on the spectral radius.
  double max_abs_row_sum() const;
  // sqrt(sum_ij M_ij^2); also a provable bound on the maximal eigenvalue.
  double frobenius_norm() const;

 private:
  int32_t n_ = 0;
  std::vector<int64_t> row_start_;
  std::vector<int32_t> col_;
  std::vector<int64_t> twice_val_;
};

CouplingMatrix build_coupling_matrix(const Formula& f);

struct EigenReport {
  double lambda_est = 0.0;   // converged power-iteration estimate
  double lambda_cert = 0.0;  // provable upper bound (row sum vs Frobenius)
  int64_t iterations = 0;
  double residual = 0.0;  // ||(M + gI)x - r x|| at the last iterate
  bool converged = false;
};

// Power iteration on the Gershgorin-shifted matrix M + gI (g = max
// absolute row sum) with a seeded +-1 start vector. Restarts once with a
// fresh start before reporting non-convergence; a non-converged report is
// an explicit failure state, never a silently wrong value.
EigenReport max_eigenvalue_estimate(const CouplingMatrix& m, double rel_tol = 1e-8,
                                    uint64_t seed = 0, int64_t max_iterations = 100000);

// min(max absolute row sum, Frobenius norm).
double max_eigenvalue_upper_bound(const CouplingMatrix& m);

// N*lambda/2 + imbalance_sum/2: the cap on the number of clauses with
// exactly two satisfied edges under any satisfying assignment.
double m2_upper_bound(const Formula& f, double lambda);

}  // namespace fko
