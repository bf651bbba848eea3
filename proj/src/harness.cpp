#include "fko/harness.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <thread>

#include "fko/rng.hpp"
#include "fko/two_sat.hpp"

namespace fko {

int32_t resolve_jobs(int32_t requested) {
  if (const char* env = std::getenv("FKO_JOBS")) {
    const int32_t j = std::atoi(env);
    if (j > 0) return j;
  }
  if (requested > 0) return requested;
  const unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : static_cast<int32_t>(hw);
}

namespace {

const char* algo_name(SweepSpec::Algo a) {
  switch (a) {
    case SweepSpec::Algo::kRandomSampling: return "random_sampling";
    case SweepSpec::Algo::kFocused: return "focused";
    case SweepSpec::Algo::kTwoSat: return "two_sat";
  }
  return "?";
}

int64_t clause_count_for(const SweepSpec& spec, int32_t n, double grid_value) {
  const double m = spec.m_scale == SweepSpec::MScale::kCN2
                       ? grid_value * static_cast<double>(n) * static_cast<double>(n)
                       : grid_value * static_cast<double>(n);
  return std::llround(m);
}

struct TrialResult {
  bool success = false;
  uint64_t attempts = 0;
  double runtime_s = 0.0;
};

TrialResult run_trial(const SweepSpec& spec, int32_t n, int64_t m, uint64_t gen_seed,
                      uint64_t search_seed) {
  const auto t0 = std::chrono::steady_clock::now();
  const Formula f = generate_random_3sat(n, m, gen_seed);
  TrialResult r;
  switch (spec.algo) {
    case SweepSpec::Algo::kRandomSampling: {
      SearchConfig cfg;
      cfg.algorithm = SearchConfig::Algorithm::kRandomSampling;
      cfg.gamma = spec.gamma;
      cfg.seed = search_seed;
      cfg.budget = spec.budget;
      cfg.lambda_mode = spec.lambda_mode;
      const WitnessCertificate cert = random_sampling_search(f, cfg);
      r.success = cert.refuted();
      r.attempts = cert.attempts;
      break;
    }
    case SweepSpec::Algo::kFocused: {
      SearchConfig cfg;
      cfg.algorithm = SearchConfig::Algorithm::kFocused;
      cfg.reuse_cap = spec.reuse_cap;
      cfg.seed = search_seed;
      cfg.budget = spec.budget;
      cfg.lambda_mode = spec.lambda_mode;
      const WitnessCertificate cert = focused_local_search(f, cfg);
      r.success = cert.refuted();
      r.attempts = cert.attempts;
      break;
    }
    case SweepSpec::Algo::kTwoSat: {
      r.success = two_sat_refute(f, spec.twosat_seed_size) == RefuteOutcome::kProvenUnsat;
      r.attempts = uint64_t{1} << spec.twosat_seed_size;
      break;
    }
  }
  r.runtime_s = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return r;
}

}  // namespace

std::vector<SweepRow> run_sweep(const SweepSpec& spec) {
  if (spec.n_list.empty() || spec.grid.empty()) throw std::invalid_argument("empty sweep grid");
  if (spec.instances_per_point < 1)
    throw std::invalid_argument("instances per point must be >= 1");

  struct Task {
    size_t point;
    int32_t instance;
  };
  const size_t n_points = spec.n_list.size() * spec.grid.size();
  std::vector<Task> tasks;
  tasks.reserve(n_points * static_cast<size_t>(spec.instances_per_point));
  for (size_t p = 0; p < n_points; ++p)
    for (int32_t i = 0; i < spec.instances_per_point; ++i) tasks.push_back({p, i});

  std::vector<TrialResult> results(tasks.size());
  std::atomic<size_t> next{0};
  const int32_t jobs =
      std::min<int32_t>(resolve_jobs(spec.jobs), static_cast<int32_t>(tasks.size()));

  const auto worker = [&]() {
    for (;;) {
      const size_t k = next.fetch_add(1);
      if (k >= tasks.size()) return;
      const Task& task = tasks[k];
      const int32_t n = spec.n_list[task.point / spec.grid.size()];
      const double g = spec.grid[task.point % spec.grid.size()];
      const int64_t m = clause_count_for(spec, n, g);
      // Seeds keyed by task identity, so scheduling cannot change results.
      const uint64_t gen_seed =
          mix_seed(spec.base_seed, 2 * (task.point * 1000003u + static_cast<uint64_t>(task.instance)));
      const uint64_t search_seed =
          mix_seed(spec.base_seed, 2 * (task.point * 1000003u + static_cast<uint64_t>(task.instance)) + 1);
      results[k] = run_trial(spec, n, m, gen_seed, search_seed);
    }
  };

  if (jobs <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (int32_t j = 0; j < jobs; ++j) pool.emplace_back(worker);
    for (std::thread& th : pool) th.join();
  }

  std::vector<SweepRow> rows(n_points);
  for (size_t p = 0; p < n_points; ++p) {
    SweepRow& row = rows[p];
    row.n = spec.n_list[p / spec.grid.size()];
    row.grid_value = spec.grid[p % spec.grid.size()];
    row.m = clause_count_for(spec, row.n, row.grid_value);
  }
  for (size_t k = 0; k < tasks.size(); ++k) {
    SweepRow& row = rows[tasks[k].point];
    ++row.trials;
    row.successes += results[k].success;
    row.mean_attempts += static_cast<double>(results[k].attempts);
    row.mean_runtime_s += results[k].runtime_s;
  }
  for (SweepRow& row : rows) {
    row.mean_attempts /= row.trials;
    row.mean_runtime_s /= row.trials;
  }
  return rows;
}

namespace {

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

}  // namespace

void write_sweep_csv(std::ostream& out, const SweepSpec& spec, const std::vector<SweepRow>& rows) {
  out << "# fko-sweep-csv v1\n";
  out << "# rng " << Rng::kName << " base_seed " << spec.base_seed << "\n";
  out << "# algo " << algo_name(spec.algo);
  switch (spec.algo) {
    case SweepSpec::Algo::kRandomSampling: out << " gamma " << format_double(spec.gamma); break;
    case SweepSpec::Algo::kFocused: out << " reuse_cap " << spec.reuse_cap; break;
    case SweepSpec::Algo::kTwoSat: out << " seed_size " << spec.twosat_seed_size; break;
  }
  if (spec.algo != SweepSpec::Algo::kTwoSat)
    out << " lambda_mode " << lambda_mode_name(spec.lambda_mode) << " budget " << spec.budget;
  out << "\n";
  out << "# m_scale " << (spec.m_scale == SweepSpec::MScale::kCN2 ? "c_n2" : "alpha_n")
      << " instances_per_point " << spec.instances_per_point << "\n";
  out << "# grid";
  for (const double g : spec.grid) out << " " << format_double(g);
  out << "\n";
  // mean_runtime_s is wall clock and therefore the one non-reproducible
  // column; everything before it is byte-stable for fixed (spec, seeds).
  out << "N,alpha,M,successes,trials,prob,mean_attempts,mean_runtime_s\n";
  for (const SweepRow& r : rows) {
    out << r.n << ',' << format_double(r.grid_value) << ',' << r.m << ',' << r.successes << ','
        << r.trials << ',' << format_double(r.probability()) << ','
        << format_double(r.mean_attempts) << ',';
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.6f", r.mean_runtime_s);
    out << buf << "\n";
  }
}

int64_t CsvTable::column_index(const std::string& name) const {
  for (size_t i = 0; i < columns.size(); ++i)
    if (columns[i] == name) return static_cast<int64_t>(i);
  return -1;
}

CsvTable read_csv(std::istream& in) {
  CsvTable table;
  std::string line;
  bool have_header = false;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    std::vector<std::string> fields;
    std::string field;
    std::istringstream ls(line);
    while (std::getline(ls, field, ',')) fields.push_back(field);
    if (!have_header) {
      table.columns = std::move(fields);
      have_header = true;
      continue;
    }
    std::vector<double> row;
    row.reserve(fields.size());
    for (const std::string& s : fields) {
      try {
        row.push_back(std::stod(s));
      } catch (const std::exception&) {
        throw std::runtime_error("non-numeric CSV field: " + s);
      }
    }
    if (row.size() != table.columns.size())
      throw std::runtime_error("CSV row width does not match header");
    table.rows.push_back(std::move(row));
  }
  if (!have_header) throw std::runtime_error("CSV has no header row");
  return table;
}

namespace {

double sigmoid(double alpha, double alpha0, double delta) {
  return 1.0 / (1.0 + std::exp(-(alpha - alpha0) / delta));
}

// 2x2 solve; returns false when singular.
bool solve2(const double a[2][2], const double b[2], double x[2]) {
  const double det = a[0][0] * a[1][1] - a[0][1] * a[1][0];
  if (std::abs(det) < 1e-300) return false;
  x[0] = (b[0] * a[1][1] - b[1] * a[0][1]) / det;
  x[1] = (a[0][0] * b[1] - a[1][0] * b[0]) / det;
  return true;
}

}  // namespace

TransitionFit fit_sigmoid(const std::vector<std::pair<double, double>>& points) {
  if (points.size() < 3) throw std::invalid_argument("sigmoid fit needs at least 3 points");
  double pmin = 1.0, pmax = 0.0;
  for (const auto& [x, p] : points) {
    pmin = std::min(pmin, p);
    pmax = std::max(pmax, p);
  }
  if (!(pmin < 0.5 && pmax > 0.5))
    throw std::invalid_argument(
        "degenerate transition data: probabilities must straddle 1/2 (min " +
        std::to_string(pmin) + ", max " + std::to_string(pmax) + ")");

  std::vector<std::pair<double, double>> pts = points;
  std::sort(pts.begin(), pts.end());

  // Initial alpha0: interpolated 1/2 crossing; initial Delta: grid pitch.
  double alpha0 = pts.front().first;
  double best_gap = 2.0;
  for (const auto& [x, p] : pts) {
    if (std::abs(p - 0.5) < best_gap) {
      best_gap = std::abs(p - 0.5);
      alpha0 = x;
    }
  }
  for (size_t i = 0; i + 1 < pts.size(); ++i) {
    const double p0 = pts[i].second - 0.5, p1 = pts[i + 1].second - 0.5;
    if (p0 <= 0.0 && p1 >= 0.0 && p1 > p0) {
      alpha0 = pts[i].first - p0 * (pts[i + 1].first - pts[i].first) / (p1 - p0);
      break;
    }
  }
  double pitch = 0.0;
  for (size_t i = 0; i + 1 < pts.size(); ++i) pitch += pts[i + 1].first - pts[i].first;
  pitch /= static_cast<double>(pts.size() - 1);
  if (pitch <= 0.0) pitch = 1.0;

  // Levenberg-Marquardt in (alpha0, log Delta) so Delta stays positive.
  double eta = std::log(pitch);
  double mu = 1e-3;
  const auto cost_of = [&pts](double a0, double e) {
    const double d = std::exp(e);
    double c = 0.0;
    for (const auto& [x, p] : pts) {
      const double r = sigmoid(x, a0, d) - p;
      c += r * r;
    }
    return c;
  };
  double cost = cost_of(alpha0, eta);
  for (int iter = 0; iter < 500; ++iter) {
    const double delta = std::exp(eta);
    double jtj[2][2] = {{0, 0}, {0, 0}};
    double jtr[2] = {0, 0};
    for (const auto& [x, p] : pts) {
      const double m = sigmoid(x, alpha0, delta);
      const double r = m - p;
      const double da0 = -m * (1.0 - m) / delta;
      const double deta = -m * (1.0 - m) * (x - alpha0) / delta;  // d/d(log Delta)
      jtj[0][0] += da0 * da0;
      jtj[0][1] += da0 * deta;
      jtj[1][1] += deta * deta;
      jtr[0] += da0 * r;
      jtr[1] += deta * r;
    }
    jtj[1][0] = jtj[0][1];
    double damped[2][2] = {{jtj[0][0] * (1.0 + mu), jtj[0][1]},
                           {jtj[1][0], jtj[1][1] * (1.0 + mu)}};
    double step[2];
    if (!solve2(damped, jtr, step)) break;
    const double a0_try = alpha0 - step[0];
    const double eta_try = eta - step[1];
    const double cost_try = cost_of(a0_try, eta_try);
    if (cost_try < cost) {
      const double improvement = cost - cost_try;
      alpha0 = a0_try;
      eta = eta_try;
      cost = cost_try;
      mu = std::max(mu * 0.3, 1e-12);
      if (improvement <= 1e-15 * std::max(cost, 1e-30) &&
          std::abs(step[0]) <= 1e-10 * std::max(1.0, std::abs(alpha0)))
        break;
    } else {
      mu *= 10.0;
      if (mu > 1e12) break;
    }
  }

  const double delta = std::exp(eta);
  TransitionFit fit;
  fit.model = TransitionFit::Model::kSigmoid;
  fit.params[0] = alpha0;
  fit.params[1] = delta;
  fit.n_points = static_cast<int32_t>(pts.size());
  fit.residual_norm = std::sqrt(cost);

  // Gauss-Newton covariance in (alpha0, Delta) coordinates at the optimum.
  double jtj[2][2] = {{0, 0}, {0, 0}};
  for (const auto& [x, p] : pts) {
    (void)p;
    const double m = sigmoid(x, alpha0, delta);
    const double da0 = -m * (1.0 - m) / delta;
    const double dd = -m * (1.0 - m) * (x - alpha0) / (delta * delta);
    jtj[0][0] += da0 * da0;
    jtj[0][1] += da0 * dd;
    jtj[1][1] += dd * dd;
  }
  jtj[1][0] = jtj[0][1];
  const double dof = static_cast<double>(pts.size()) - 2.0;
  const double s2 = dof > 0 ? cost / dof : 0.0;
  const double det = jtj[0][0] * jtj[1][1] - jtj[0][1] * jtj[1][0];
  if (det > 1e-300) {
    fit.std_errs[0] = std::sqrt(std::max(0.0, s2 * jtj[1][1] / det));
    fit.std_errs[1] = std::sqrt(std::max(0.0, s2 * jtj[0][0] / det));
  }
  return fit;
}

TransitionFit fit_power_law(const std::vector<std::pair<double, double>>& points) {
  if (points.size() < 3) throw std::invalid_argument("power-law fit needs at least 3 points");
  for (const auto& [x, y] : points)
    if (x <= 0.0 || y <= 0.0)
      throw std::invalid_argument("power-law fit needs strictly positive values");

  const double n = static_cast<double>(points.size());
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (const auto& [x, y] : points) {
    const double lx = std::log(x), ly = std::log(y);
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
  }
  const double xbar = sx / n, ybar = sy / n;
  const double sxx_c = sxx - n * xbar * xbar;
  if (sxx_c <= 0.0) throw std::invalid_argument("power-law fit needs at least two distinct N");
  const double b = (sxy - n * xbar * ybar) / sxx_c;
  const double intercept = ybar - b * xbar;

  double rss = 0.0;
  for (const auto& [x, y] : points) {
    const double r = std::log(y) - (intercept + b * std::log(x));
    rss += r * r;
  }
  const double s2 = rss / (n - 2.0);

  TransitionFit fit;
  fit.model = TransitionFit::Model::kPowerLaw;
  fit.params[0] = std::exp(intercept);  // c
  fit.params[1] = b;
  fit.n_points = static_cast<int32_t>(points.size());
  fit.residual_norm = std::sqrt(rss);
  const double se_b = std::sqrt(s2 / sxx_c);
  const double se_intercept = std::sqrt(s2 * (1.0 / n + xbar * xbar / sxx_c));
  fit.std_errs[0] = fit.params[0] * se_intercept;  // delta method for c = exp(intercept)
  fit.std_errs[1] = se_b;
  return fit;
}

}  // namespace fko
