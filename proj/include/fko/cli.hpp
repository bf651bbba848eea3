#pragma once

namespace fko {

// Exit codes: 0 success (Refuted / Accept / ProvenUnsat included), 1
// usage or I/O failure, 10 Unknown verdict, 11 certificate rejected, 12
// malformed certificate.
inline constexpr int kExitSuccess = 0;
inline constexpr int kExitError = 1;
inline constexpr int kExitUnknown = 10;
inline constexpr int kExitReject = 11;
inline constexpr int kExitMalformed = 12;

int cli_dispatch(int argc, char** argv);

}  // namespace fko
