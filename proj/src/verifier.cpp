#include "fko/verifier.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>

#include "fko/gf2.hpp"
#include "fko/rng.hpp"
#include "fko/spectral.hpp"

namespace fko {

const char* reject_reason_name(RejectReason reason) {
  switch (reason) {
    case RejectReason::kNone: return "none";
    case RejectReason::kFormulaHashMismatch: return "formula hash mismatch";
    case RejectReason::kCoreSatisfiable: return "core satisfiable";
    case RejectReason::kLedgerMismatch: return "ledger mismatch";
    case RejectReason::kBoundCMismatch: return "C recomputation mismatch";
    case RejectReason::kBoundNotExceeded: return "bound not exceeded";
    case RejectReason::kLambdaUnsound: return "lambda unsound";
  }
  return "unknown";
}

namespace {

Verdict reject(RejectReason reason, std::string detail, LambdaMode mode) {
  Verdict v;
  v.accepted = false;
  v.reason = reason;
  v.detail = std::move(detail);
  v.lambda_mode = lambda_mode_name(mode);
  return v;
}

}  // namespace

Verdict verify_certificate(const Formula& f, const WitnessCertificate& cert, LambdaMode mode) {
  // 1. The certificate must speak about this exact formula.
  if (cert.n_vars != f.n_vars() || cert.n_clauses != f.n_clauses())
    return reject(RejectReason::kFormulaHashMismatch, "formula dimensions differ", mode);
  if (cert.hash_alg != "fnv1a64")
    return reject(RejectReason::kFormulaHashMismatch,
                  "unsupported hash algorithm: " + cert.hash_alg, mode);
  if (cert.formula_hash != formula_hash_hex(f))
    return reject(RejectReason::kFormulaHashMismatch, "canonical DIMACS hash differs", mode);

  // 2. Every core must be unsatisfiable under fresh elimination.
  {
    ParitySystem ps;
    for (size_t k = 0; k < cert.cores.size(); ++k) {
      ps.reset();
      bool unsat = false;
      for (const int32_t a : cert.cores[k]) {
        if (ps.add_clause(f, a) == AddResult::kInconsistent) {
          unsat = true;
          break;
        }
      }
      if (!unsat)
        return reject(RejectReason::kCoreSatisfiable,
                      "core " + std::to_string(k) + " is XORSAT-satisfiable", mode);
    }
  }

  // 3. Independent usage recount against the stored ledger snapshot.
  std::vector<int64_t> usage(static_cast<size_t>(f.n_clauses()), 0);
  for (const auto& core : cert.cores)
    for (const int32_t a : core) ++usage[static_cast<size_t>(a)];
  {
    std::vector<int64_t> stored(static_cast<size_t>(f.n_clauses()), 0);
    for (const auto& [a, d] : cert.ledger) stored[static_cast<size_t>(a)] = d;
    if (stored != usage)
      return reject(RejectReason::kLedgerMismatch,
                    "stored usage values do not match the recount from cores", mode);
  }
  const uint64_t t = cert.cores.size();
  if (cert.t != t)
    return reject(RejectReason::kLedgerMismatch,
                  "stored t=" + std::to_string(cert.t) + " but certificate lists " +
                      std::to_string(t) + " cores",
                  mode);

  // 4. Recompute C by direct descending prefix sums.
  int64_t bound_c = 0;
  if (t > 0) {
    std::vector<int64_t> sorted = usage;
    std::sort(sorted.begin(), sorted.end(), std::greater<int64_t>());
    uint64_t acc = 0;
    bound_c = -1;
    for (size_t c = 0; c < sorted.size(); ++c) {
      acc += static_cast<uint64_t>(sorted[c]);
      if (acc >= t) {
        bound_c = static_cast<int64_t>(c) + 1;
        break;
      }
    }
    if (bound_c < 0)
      return reject(RejectReason::kBoundCMismatch, "usage mass below core count", mode);
  }
  if (bound_c != cert.bound_c)
    return reject(RejectReason::kBoundCMismatch,
                  "stored C=" + std::to_string(cert.bound_c) + ", recomputed C=" +
                      std::to_string(bound_c),
                  mode);

  // 5. Re-derive the degree imbalance directly from the clause list.
  int64_t imbalance = 0;
  {
    std::vector<int32_t> delta(static_cast<size_t>(f.n_vars()), 0);
    for (const Clause& c : f.clauses())
      for (int e = 0; e < 3; ++e) delta[static_cast<size_t>(c.vars[e])] += c.signs[e];
    for (const int32_t d : delta) imbalance += d < 0 ? -d : d;
  }

  // 6. Lambda: certified mode uses the recomputed provable bound and
  // insists the certificate did not claim anything tighter; estimate mode
  // checks the certificate's lambda against a fresh power iteration.
  const CouplingMatrix mat = build_coupling_matrix(f);
  double lambda_used = 0.0;
  if (mode == LambdaMode::kCertified) {
    const double bound = mat.dim() == 0 ? 0.0 : max_eigenvalue_upper_bound(mat);
    const double slack = 1e-9 * std::max(1.0, std::abs(bound));
    if (cert.lambda < bound - slack)
      return reject(RejectReason::kLambdaUnsound,
                    "certificate lambda lies below the provable upper bound", mode);
    lambda_used = bound;
  } else {
    double est = 0.0;
    if (mat.dim() > 0) {
      const EigenReport report = max_eigenvalue_estimate(mat, 1e-8, /*seed=*/0x7e81f1ed);
      if (!report.converged)
        return reject(RejectReason::kLambdaUnsound,
                      "verifier power iteration did not converge", mode);
      est = report.lambda_est;
    }
    const double tol = 1e-6 * std::max(1.0, std::abs(est));
    if (cert.lambda < est - tol)
      return reject(RejectReason::kLambdaUnsound,
                    "certificate lambda lies below the verifier's estimate", mode);
    lambda_used = cert.lambda;
  }

  // 7. Final bound comparison on verified values only.
  const double m2_upp =
      0.5 * static_cast<double>(f.n_vars()) * lambda_used + 0.5 * static_cast<double>(imbalance);
  Verdict v;
  v.lambda_mode = lambda_mode_name(mode);
  v.bound_c = bound_c;
  v.m2_upp = m2_upp;
  v.lambda = lambda_used;
  if (static_cast<double>(bound_c) > m2_upp) {
    v.accepted = true;
    v.reason = RejectReason::kNone;
  } else {
    v.accepted = false;
    v.reason = RejectReason::kBoundNotExceeded;
    v.detail = "C=" + std::to_string(bound_c) + " does not exceed M2_upp";
  }
  return v;
}

Verdict verify_certificate(const Formula& f, const WitnessCertificate& cert) {
  return verify_certificate(f, cert, lambda_mode_from_name(cert.lambda_mode));
}

}  // namespace fko
