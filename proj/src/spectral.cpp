#include "fko/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "fko/rng.hpp"

namespace fko {

CouplingMatrix CouplingMatrix::build(const Formula& f) {
  // Accumulate signed pair contributions, then collapse duplicates.
  struct Entry {
    int32_t i, j;
    int64_t tv;
  };
  std::vector<Entry> entries;
  entries.reserve(static_cast<size_t>(f.n_clauses()) * 6);
  for (const Clause& c : f.clauses()) {
    for (int e = 0; e < 3; ++e) {
      for (int g = e + 1; g < 3; ++g) {
        const int64_t tv = -static_cast<int64_t>(c.signs[e]) * c.signs[g];  // 2*M_ij share
        entries.push_back({c.vars[e], c.vars[g], tv});
        entries.push_back({c.vars[g], c.vars[e], tv});
      }
    }
  }
  std::sort(entries.begin(), entries.end(), [](const Entry& a, const Entry& b) {
    return a.i != b.i ? a.i < b.i : a.j < b.j;
  });

  CouplingMatrix m;
  m.n_ = f.n_vars();
  m.row_start_.assign(static_cast<size_t>(m.n_) + 1, 0);
  size_t k = 0;
  while (k < entries.size()) {
    size_t k2 = k;
    int64_t tv = 0;
    while (k2 < entries.size() && entries[k2].i == entries[k].i && entries[k2].j == entries[k].j)
      tv += entries[k2++].tv;
    if (tv != 0) {
      m.col_.push_back(entries[k].j);
      m.twice_val_.push_back(tv);
      ++m.row_start_[static_cast<size_t>(entries[k].i) + 1];
    }
    k = k2;
  }
  for (size_t i = 0; i < static_cast<size_t>(m.n_); ++i) m.row_start_[i + 1] += m.row_start_[i];
  return m;
}

CouplingMatrix build_coupling_matrix(const Formula& f) { return CouplingMatrix::build(f); }

double CouplingMatrix::entry(int32_t i, int32_t j) const {
  if (i == j) return 0.0;
  const int64_t lo = row_start_[static_cast<size_t>(i)];
  const int64_t hi = row_start_[static_cast<size_t>(i) + 1];
  const auto it = std::lower_bound(col_.begin() + lo, col_.begin() + hi, j);
  if (it != col_.begin() + hi && *it == j)
    return 0.5 * static_cast<double>(twice_val_[static_cast<size_t>(it - col_.begin())]);
  return 0.0;
}

void CouplingMatrix::multiply(const std::vector<double>& x, std::vector<double>& y) const {
  y.assign(static_cast<size_t>(n_), 0.0);
  for (size_t i = 0; i < static_cast<size_t>(n_); ++i) {
    double acc = 0.0;
    for (int64_t k = row_start_[i]; k < row_start_[i + 1]; ++k)
      acc += static_cast<double>(twice_val_[static_cast<size_t>(k)]) *
             x[static_cast<size_t>(col_[static_cast<size_t>(k)])];
    y[i] = 0.5 * acc;
  }
}

int64_t CouplingMatrix::quad_form(const Assignment& sigma) const {
  if (static_cast<int64_t>(sigma.size()) != n_)
    throw FormulaError("assignment length does not match matrix dimension");
  int64_t acc = 0;  // sum over both triangles of 2*M_ij*s_i*s_j; halves exactly
  for (size_t i = 0; i < static_cast<size_t>(n_); ++i) {
    int64_t row = 0;
    for (int64_t k = row_start_[i]; k < row_start_[i + 1]; ++k)
      row += twice_val_[static_cast<size_t>(k)] *
             sigma[static_cast<size_t>(col_[static_cast<size_t>(k)])];
    acc += row * sigma[i];
  }
  return acc / 2;
}

double CouplingMatrix::max_abs_row_sum() const {
  int64_t best = 0;
  for (size_t i = 0; i < static_cast<size_t>(n_); ++i) {
    int64_t acc = 0;
    for (int64_t k = row_start_[i]; k < row_start_[i + 1]; ++k) {
      const int64_t tv = twice_val_[static_cast<size_t>(k)];
      acc += tv < 0 ? -tv : tv;
    }
    best = std::max(best, acc);
  }
  return 0.5 * static_cast<double>(best);
}

double CouplingMatrix::frobenius_norm() const {
  double acc = 0.0;
  for (const int64_t tv : twice_val_) acc += static_cast<double>(tv) * static_cast<double>(tv);
  return 0.5 * std::sqrt(acc);
}

namespace {

double norm2(const std::vector<double>& v) {
  double acc = 0.0;
  for (const double x : v) acc += x * x;
  return std::sqrt(acc);
}

struct IterationOutcome {
  double rayleigh = 0.0;  // of the shifted matrix
  double residual = 0.0;
  int64_t iterations = 0;
  bool converged = false;
};

IterationOutcome run_power_iteration(const CouplingMatrix& m, double shift, double rel_tol,
                                     int64_t max_iterations, uint64_t seed) {
  const size_t n = static_cast<size_t>(m.dim());
  Rng rng(seed);
  std::vector<double> x(n), y(n);
  // Continuous start entries: a +-1 pattern can be an exact non-maximal
  // eigenvector (block-structured matrices), which power iteration would
  // never escape.
  for (double& xi : x) xi = 2.0 * rng.unit() - 1.0;
  double n0 = norm2(x);
  if (n0 == 0.0) {
    x[0] = 1.0;
    n0 = 1.0;
  }
  const double inv0 = 1.0 / n0;
  for (double& xi : x) xi *= inv0;

  IterationOutcome out;
  double prev = 0.0;
  int consecutive = 0;
  for (int64_t it = 1; it <= max_iterations; ++it) {
    m.multiply(x, y);
    for (size_t i = 0; i < n; ++i) y[i] += shift * x[i];
    double rayleigh = 0.0;
    for (size_t i = 0; i < n; ++i) rayleigh += x[i] * y[i];

    double res = 0.0;
    for (size_t i = 0; i < n; ++i) {
      const double d = y[i] - rayleigh * x[i];
      res += d * d;
    }
    out.rayleigh = rayleigh;
    out.residual = std::sqrt(res);
    out.iterations = it;

    if (it > 1 && std::abs(rayleigh - prev) <= rel_tol * std::max(std::abs(rayleigh), 1e-300)) {
      if (++consecutive >= 3) {
        out.converged = true;
        return out;
      }
    } else {
      consecutive = 0;
    }
    prev = rayleigh;

    const double ny = norm2(y);
    if (ny == 0.0) {
      // x is in the kernel of the shifted matrix; eigenvalue estimate 0.
      out.converged = true;
      return out;
    }
    const double inv = 1.0 / ny;
    for (size_t i = 0; i < n; ++i) x[i] = y[i] * inv;
  }
  return out;
}

}  // namespace

EigenReport max_eigenvalue_estimate(const CouplingMatrix& m, double rel_tol, uint64_t seed,
                                    int64_t max_iterations) {
  if (m.dim() < 1) throw std::invalid_argument("empty matrix");
  EigenReport report;
  report.lambda_cert = max_eigenvalue_upper_bound(m);

  const double shift = m.max_abs_row_sum();
  if (shift == 0.0) {  // zero matrix
    report.lambda_est = 0.0;
    report.converged = true;
    return report;
  }

  IterationOutcome out = run_power_iteration(m, shift, rel_tol, max_iterations, seed);
  int64_t total_iterations = out.iterations;
  if (!out.converged) {
    // One restart with a fresh start vector before giving up.
    out = run_power_iteration(m, shift, rel_tol, max_iterations, splitmix64(seed ^ 0x51ed270b));
    total_iterations += out.iterations;
  }
  report.lambda_est = out.rayleigh - shift;
  report.iterations = total_iterations;
  report.residual = out.residual;
  report.converged = out.converged;
  return report;
}

double max_eigenvalue_upper_bound(const CouplingMatrix& m) {
  return std::min(m.max_abs_row_sum(), m.frobenius_norm());
}

double m2_upper_bound(const Formula& f, double lambda) {
  const DegreeProfile prof = degree_profile(f);
  return 0.5 * static_cast<double>(f.n_vars()) * lambda +
         0.5 * static_cast<double>(prof.imbalance_sum);
}

}  // namespace fko
