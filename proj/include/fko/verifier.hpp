#pragma once

#include <string>

#include "fko/formula.hpp"
#include "fko/witness.hpp"

namespace fko {

enum class RejectReason {
  kNone,
  kFormulaHashMismatch,
  kCoreSatisfiable,
  kLedgerMismatch,
  kBoundCMismatch,
  kBoundNotExceeded,
  kLambdaUnsound,
};

const char* reject_reason_name(RejectReason reason);

struct Verdict {
  bool accepted = false;
  RejectReason reason = RejectReason::kNone;
  std::string detail;
  std::string lambda_mode;  // mode the verification ran in

  // Values re-derived by the verifier, reported for transparency.
  int64_t bound_c = 0;
  double m2_upp = 0.0;
  double lambda = 0.0;
};

// Re-derives every certificate quantity without trusting the search
// code: formula hash, per-core unsatisfiability by fresh elimination, an
// independent usage recount and prefix-sum bound, the degree imbalance,
// and the lambda appropriate to the mode (certified: recomputed provable
// bound; estimate: the certificate's lambda checked against a fresh
// power-iteration estimate). Accepts iff C > M2_upp on the re-derived
// values. Structural problems in the certificate itself surface earlier,
// as CertificateFormatError from the parser.
Verdict verify_certificate(const Formula& f, const WitnessCertificate& cert, LambdaMode mode);

// Convenience overload running in the certificate's own recorded mode.
Verdict verify_certificate(const Formula& f, const WitnessCertificate& cert);

}  // namespace fko
