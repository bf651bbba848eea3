#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

#include "fko/witness.hpp"

namespace fko {

// Parameter sweep over (N, alpha): for every grid point, generate fresh
// seeded instances and run the configured refuter once per instance.
struct SweepSpec {
  enum class Algo { kRandomSampling, kFocused, kTwoSat };
  // Grid values are clause densities alpha (M = alpha*N) or, with kCN2,
  // prefactors c (M = c*N^2).
  enum class MScale { kAlphaN, kCN2 };

  std::vector<int32_t> n_list;
  std::vector<double> grid;
  MScale m_scale = MScale::kAlphaN;
  int32_t instances_per_point = 20;

  Algo algo = Algo::kFocused;
  double gamma = 0.5;
  int32_t reuse_cap = 1;
  int32_t twosat_seed_size = 2;
  uint64_t budget = 0;  // 0 = algorithm default
  LambdaMode lambda_mode = LambdaMode::kEstimate;

  uint64_t base_seed = 1;
  int32_t jobs = 0;  // 0 = FKO_JOBS env var, else hardware concurrency
};

struct SweepRow {
  int32_t n = 0;
  double grid_value = 0.0;  // alpha or c, per MScale
  int64_t m = 0;
  int32_t successes = 0;
  int32_t trials = 0;
  double mean_attempts = 0.0;
  double mean_runtime_s = 0.0;  // wall clock, informational only

  double probability() const {
    return trials == 0 ? 0.0 : static_cast<double>(successes) / trials;
  }
};

// Deterministic given (spec, seeds) up to the informational runtime
// column; rows are keyed by grid position, never by completion order.
std::vector<SweepRow> run_sweep(const SweepSpec& spec);

// Versioned CSV: '#'-prefixed metadata lines (schema, RNG, algorithm,
// grids), then a header row and one row per (N, grid value) point.
void write_sweep_csv(std::ostream& out, const SweepSpec& spec, const std::vector<SweepRow>& rows);

// Minimal CSV-with-comments reader used by the fit subcommand.
struct CsvTable {
  std::vector<std::string> columns;
  std::vector<std::vector<double>> rows;

  int64_t column_index(const std::string& name) const;  // -1 when absent
};

CsvTable read_csv(std::istream& in);

struct TransitionFit {
  enum class Model { kSigmoid, kPowerLaw } model = Model::kSigmoid;
  // Sigmoid: params = (alpha0, delta). Power law: params = (c, b).
  double params[2] = {0.0, 0.0};
  double std_errs[2] = {0.0, 0.0};
  double residual_norm = 0.0;
  int32_t n_points = 0;
};

// Least squares for P(alpha) = 1 / (1 + exp(-(alpha - alpha0)/Delta)).
// Needs >= 3 points with min p < 1/2 < max p; Delta of a valid fit is
// positive.
TransitionFit fit_sigmoid(const std::vector<std::pair<double, double>>& points);

// Log-log linear regression alpha0 = c * N^b; >= 3 strictly positive
// points.
TransitionFit fit_power_law(const std::vector<std::pair<double, double>>& points);

// Worker count resolution: FKO_JOBS env var wins, then requested, then
// hardware concurrency.
int32_t resolve_jobs(int32_t requested);

}  // namespace fko
