#include "fko/witness.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

#include "fko/rng.hpp"
#include "fko/spectral.hpp"

namespace fko {

FormulaIndex::FormulaIndex(const Formula& f) {
  start_.assign(static_cast<size_t>(f.n_vars()) + 1, 0);
  for (const Clause& c : f.clauses())
    for (int e = 0; e < 3; ++e) ++start_[static_cast<size_t>(c.vars[e]) + 1];
  for (size_t i = 0; i < static_cast<size_t>(f.n_vars()); ++i) start_[i + 1] += start_[i];
  cid_.resize(static_cast<size_t>(f.n_clauses()) * 3);
  std::vector<int64_t> cursor(start_.begin(), start_.end() - 1);
  for (int64_t a = 0; a < f.n_clauses(); ++a) {
    const Clause& c = f.clause(a);
    for (int e = 0; e < 3; ++e)
      cid_[static_cast<size_t>(cursor[static_cast<size_t>(c.vars[e])]++)] =
          static_cast<int32_t>(a);
  }
}

void ClauseLedger::add_core(const std::vector<int32_t>& clause_ids, double weight) {
  if (weight < 0.0) throw std::invalid_argument("subformula weight must be nonnegative");
  for (const int32_t a : clause_ids) d_[static_cast<size_t>(a)] += weight;
  ++t_;
  weight_total_ += weight;
}

int64_t compute_refutation_bound_C(const ClauseLedger& ledger) {
  if (ledger.t() < 1) throw std::invalid_argument("empty ledger");
  std::vector<double> sorted = ledger.usages();
  std::sort(sorted.begin(), sorted.end(), std::greater<double>());
  const double threshold = ledger.weight_total();
  double acc = 0.0;
  for (size_t c = 0; c < sorted.size(); ++c) {
    acc += sorted[c];
    if (acc >= threshold) return static_cast<int64_t>(c) + 1;
  }
  throw std::logic_error("usage mass below subformula weight total");
}

double t_over_d_bound(const ClauseLedger& ledger) {
  if (ledger.t() < 1) throw std::invalid_argument("empty ledger");
  double dmax = 0.0;
  for (const double d : ledger.usages()) dmax = std::max(dmax, d);
  if (dmax <= 0.0) throw std::logic_error("ledger has cores but no usage");
  return ledger.weight_total() / dmax;
}

const char* lambda_mode_name(LambdaMode mode) {
  return mode == LambdaMode::kCertified ? "certified" : "estimate";
}

LambdaMode lambda_mode_from_name(const std::string& name) {
  if (name == "estimate" || name == "est") return LambdaMode::kEstimate;
  if (name == "certified" || name == "cert") return LambdaMode::kCertified;
  throw std::invalid_argument("unknown lambda mode: " + name);
}

namespace {

constexpr const char* kVerdictRefuted = "refuted";
constexpr const char* kVerdictUnknown = "unknown";

// Incremental integer-usage histogram answering the descending
// prefix-sum bound without re-sorting after every core. Clauses in the
// same bucket are interchangeable, so slicing the last bucket by
// ceil(remaining / value) gives the exact minimal prefix length.
class PrefixBoundTracker {
 public:
  void increment(int64_t old_value) {
    if (static_cast<size_t>(old_value) + 2 > counts_.size())
      counts_.resize(static_cast<size_t>(old_value) + 2, 0);
    if (old_value > 0) --counts_[static_cast<size_t>(old_value)];
    ++counts_[static_cast<size_t>(old_value) + 1];
    max_value_ = std::max(max_value_, old_value + 1);
  }

  int64_t bound(uint64_t threshold) const {
    int64_t c = 0;
    uint64_t remaining = threshold;
    for (int64_t v = max_value_; v >= 1; --v) {
      const uint64_t cnt = counts_[static_cast<size_t>(v)];
      if (cnt == 0) continue;
      const uint64_t mass = cnt * static_cast<uint64_t>(v);
      if (mass >= remaining)
        return c + static_cast<int64_t>((remaining + static_cast<uint64_t>(v) - 1) /
                                        static_cast<uint64_t>(v));
      c += static_cast<int64_t>(cnt);
      remaining -= mass;
    }
    throw std::logic_error("usage mass below subformula count");
  }

 private:
  std::vector<uint64_t> counts_{0, 0};
  int64_t max_value_ = 0;
};

struct SampleScratch {
  explicit SampleScratch(const Formula& f)
      : var_mark(static_cast<size_t>(f.n_vars()), 0),
        clause_mark(static_cast<size_t>(f.n_clauses()), 0) {}

  std::vector<uint32_t> var_mark;
  std::vector<uint32_t> clause_mark;
  uint32_t epoch = 0;
  ParitySystem ps;
  std::vector<int32_t> selected;
  std::vector<int32_t> induced;
  std::vector<int32_t> prefix;
};

// Steps 1-3 of the sampling pipeline; nullopt means resample.
std::optional<std::vector<int32_t>> sample_core_impl(const Formula& f, const FormulaIndex& idx,
                                                     SampleScratch& s, double gamma, Rng& rng) {
  const int32_t n = f.n_vars();
  const int64_t want = static_cast<int64_t>(std::ceil(std::pow(static_cast<double>(n), gamma)));
  const int32_t k = static_cast<int32_t>(std::min<int64_t>(want, n));
  ++s.epoch;

  // Uniform k-subset (Floyd), epoch marks instead of a taken[] reset.
  s.selected.clear();
  for (int32_t j = n - k; j < n; ++j) {
    const int32_t t = rng.below_i32(j + 1);
    const int32_t pick = s.var_mark[static_cast<size_t>(t)] == s.epoch ? j : t;
    s.var_mark[static_cast<size_t>(pick)] = s.epoch;
    s.selected.push_back(pick);
  }

  // Clauses with all three variables selected.
  s.induced.clear();
  for (const int32_t v : s.selected) {
    for (const int32_t* p = idx.begin_of(v); p != idx.end_of(v); ++p) {
      const int32_t cid = *p;
      if (s.clause_mark[static_cast<size_t>(cid)] == s.epoch) continue;
      s.clause_mark[static_cast<size_t>(cid)] = s.epoch;
      const Clause& c = f.clause(cid);
      if (s.var_mark[static_cast<size_t>(c.vars[0])] == s.epoch &&
          s.var_mark[static_cast<size_t>(c.vars[1])] == s.epoch &&
          s.var_mark[static_cast<size_t>(c.vars[2])] == s.epoch)
        s.induced.push_back(cid);
    }
  }
  if (s.induced.empty()) return std::nullopt;

  s.ps.reset();
  bool unsat = false;
  for (const int32_t cid : s.induced) {
    if (s.ps.add_clause(f, cid) == AddResult::kInconsistent) {
      unsat = true;
      break;
    }
  }
  if (!unsat) return std::nullopt;

  // Re-add in random order up to the first inconsistency; the prefix has
  // ground-state energy exactly 1.
  rng.shuffle(s.induced);
  s.ps.reset();
  s.prefix.clear();
  for (const int32_t cid : s.induced) {
    s.prefix.push_back(cid);
    if (s.ps.add_clause(f, cid) == AddResult::kInconsistent) break;
  }

  Subformula pruned = leaf_removal(make_subformula(f, s.prefix));
  return std::move(pruned.clause_ids);
}

// Single deletion pass shared by the focused pipeline; mirrors
// minimal_unsat_core but reuses the caller's RNG stream and scratch
// system.
std::vector<int32_t> minimal_core_pass(const Formula& f, const std::vector<int32_t>& ids,
                                       Rng& rng, ParitySystem& ps) {
  std::vector<int32_t> order = ids;
  rng.shuffle(order);
  std::vector<char> alive(order.size(), 1);
  for (size_t i = 0; i < order.size(); ++i) {
    ps.reset();
    bool unsat = false;
    for (size_t j = 0; j < order.size(); ++j) {
      if (j == i || !alive[j]) continue;
      if (ps.add_clause(f, order[j]) == AddResult::kInconsistent) {
        unsat = true;
        break;
      }
    }
    if (unsat) alive[i] = 0;
  }
  std::vector<int32_t> core;
  for (size_t j = 0; j < order.size(); ++j)
    if (alive[j]) core.push_back(order[j]);
  std::sort(core.begin(), core.end());
  return core;
}

struct FocusedScratch {
  explicit FocusedScratch(const Formula& f)
      : clause_in_system(static_cast<size_t>(f.n_clauses()), 0),
        var_in_system(static_cast<size_t>(f.n_vars()), 0),
        conn_mark(static_cast<size_t>(f.n_clauses()), 0),
        conn(static_cast<size_t>(f.n_clauses()), 0),
        bucket_pos(static_cast<size_t>(f.n_clauses()), 0) {}

  std::vector<uint32_t> clause_in_system;
  std::vector<uint32_t> var_in_system;
  std::vector<uint32_t> conn_mark;
  std::vector<int32_t> conn;
  std::vector<int32_t> bucket_pos;
  std::array<std::vector<int32_t>, 4> buckets;  // by connection count 1..3
  uint32_t epoch = 0;
  ParitySystem ps;
  ParitySystem prune_ps;
  std::vector<int32_t> system_clauses;
};

// Grows one system from seed_cid. Returns the pruned core (usage of its
// clauses incremented), or nullopt when the boundary empties while the
// system is still satisfiable.
std::optional<std::vector<int32_t>> grow_core_impl(const Formula& f, const FormulaIndex& idx,
                                                   FocusedScratch& s,
                                                   std::vector<int32_t>& usage,
                                                   int32_t reuse_cap, Rng& rng,
                                                   int32_t seed_cid) {
  ++s.epoch;
  for (auto& b : s.buckets) b.clear();
  s.ps.reset();
  s.system_clauses.clear();

  const auto bucket_remove = [&s](int32_t cid, int32_t value) {
    std::vector<int32_t>& b = s.buckets[static_cast<size_t>(value)];
    const int32_t pos = s.bucket_pos[static_cast<size_t>(cid)];
    b[static_cast<size_t>(pos)] = b.back();
    s.bucket_pos[static_cast<size_t>(b.back())] = pos;
    b.pop_back();
  };

  const auto bucket_insert = [&s](int32_t cid, int32_t value) {
    std::vector<int32_t>& b = s.buckets[static_cast<size_t>(value)];
    s.bucket_pos[static_cast<size_t>(cid)] = static_cast<int32_t>(b.size());
    b.push_back(cid);
  };

  // Absorb a clause into the system: one elimination step plus boundary
  // connection updates for every newly covered variable.
  const auto absorb = [&](int32_t cid) -> AddResult {
    s.clause_in_system[static_cast<size_t>(cid)] = s.epoch;
    s.system_clauses.push_back(cid);
    const AddResult r = s.ps.add_clause(f, cid);
    if (r == AddResult::kInconsistent) return r;  // growth ends; boundary is moot
    const Clause& c = f.clause(cid);
    for (int e = 0; e < 3; ++e) {
      const int32_t v = c.vars[e];
      if (s.var_in_system[static_cast<size_t>(v)] == s.epoch) continue;
      s.var_in_system[static_cast<size_t>(v)] = s.epoch;
      for (const int32_t* p = idx.begin_of(v); p != idx.end_of(v); ++p) {
        const int32_t b = *p;
        if (s.clause_in_system[static_cast<size_t>(b)] == s.epoch) continue;
        if (usage[static_cast<size_t>(b)] >= reuse_cap) continue;
        int32_t old = 0;
        if (s.conn_mark[static_cast<size_t>(b)] == s.epoch) old = s.conn[static_cast<size_t>(b)];
        s.conn_mark[static_cast<size_t>(b)] = s.epoch;
        s.conn[static_cast<size_t>(b)] = old + 1;
        if (old >= 1) bucket_remove(b, old);
        bucket_insert(b, old + 1);
      }
    }
    return r;
  };

  AddResult r = absorb(seed_cid);
  while (r == AddResult::kConsistent) {
    int32_t chosen = -1;
    for (int32_t value = 3; value >= 1; --value) {
      std::vector<int32_t>& b = s.buckets[static_cast<size_t>(value)];
      if (!b.empty()) {
        chosen = b[static_cast<size_t>(rng.below(b.size()))];
        bucket_remove(chosen, value);
        break;
      }
    }
    if (chosen < 0) return std::nullopt;  // boundary exhausted, still satisfiable
    r = absorb(chosen);
  }

  std::vector<int32_t> core = minimal_core_pass(f, s.system_clauses, rng, s.prune_ps);
  for (const int32_t a : core) ++usage[static_cast<size_t>(a)];
  return core;
}

struct BoundSetup {
  DegreeProfile profile;
  double lambda = 0.0;
  double lambda_rel_tol = 0.0;
  double m2_upp = 0.0;
};

BoundSetup compute_bound_setup(const Formula& f, const SearchConfig& cfg) {
  BoundSetup b;
  b.profile = degree_profile(f);
  b.lambda_rel_tol = cfg.lambda_rel_tol;
  const CouplingMatrix mat = build_coupling_matrix(f);
  if (mat.dim() == 0) {
    b.lambda = 0.0;
  } else if (cfg.lambda_mode == LambdaMode::kCertified) {
    b.lambda = max_eigenvalue_upper_bound(mat);
  } else {
    const EigenReport report = max_eigenvalue_estimate(mat, cfg.lambda_rel_tol,
                                                       mix_seed(cfg.seed, 0x31f7a3));
    if (!report.converged)
      throw std::runtime_error("eigenvalue estimate did not converge; refusing to guess");
    b.lambda = report.lambda_est;
  }
  b.m2_upp = 0.5 * static_cast<double>(f.n_vars()) * b.lambda +
             0.5 * static_cast<double>(b.profile.imbalance_sum);
  return b;
}

WitnessCertificate base_certificate(const Formula& f, const SearchConfig& cfg,
                                    const BoundSetup& setup) {
  WitnessCertificate cert;
  cert.n_vars = f.n_vars();
  cert.n_clauses = f.n_clauses();
  cert.hash_alg = "fnv1a64";
  cert.formula_hash = formula_hash_hex(f);
  cert.rng_name = Rng::kName;
  cert.seed = cfg.seed;
  cert.lambda_mode = lambda_mode_name(cfg.lambda_mode);
  cert.lambda = setup.lambda;
  cert.lambda_rel_tol = setup.lambda_rel_tol;
  cert.imbalance_sum = setup.profile.imbalance_sum;
  cert.m2_upp = setup.m2_upp;
  return cert;
}

std::vector<std::pair<int32_t, int64_t>> sparse_ledger(const std::vector<int32_t>& usage) {
  std::vector<std::pair<int32_t, int64_t>> out;
  for (size_t a = 0; a < usage.size(); ++a)
    if (usage[a] > 0) out.emplace_back(static_cast<int32_t>(a), usage[a]);
  return out;
}

}  // namespace

std::optional<Subformula> sample_random_core(const Formula& f, double gamma, uint64_t seed) {
  if (gamma < 0.0 || gamma > 1.0) throw std::invalid_argument("gamma must lie in [0, 1]");
  const FormulaIndex idx(f);
  SampleScratch scratch(f);
  Rng rng(seed);
  auto core = sample_core_impl(f, idx, scratch, gamma, rng);
  if (!core) return std::nullopt;
  return Subformula{&f, std::move(*core)};
}

std::optional<Subformula> grow_focused_core(const Formula& f, std::vector<int32_t>& usage,
                                            int32_t reuse_cap, uint64_t seed) {
  if (reuse_cap < 1) throw std::invalid_argument("reuse cap must be at least 1");
  if (static_cast<int64_t>(usage.size()) != f.n_clauses())
    throw std::invalid_argument("usage vector length does not match clause count");
  std::vector<int32_t> eligible;
  for (size_t a = 0; a < usage.size(); ++a)
    if (usage[a] < reuse_cap) eligible.push_back(static_cast<int32_t>(a));
  if (eligible.empty()) throw std::invalid_argument("no eligible seed clause");
  Rng rng(seed);
  const int32_t seed_cid = eligible[static_cast<size_t>(rng.below(eligible.size()))];
  const FormulaIndex idx(f);
  FocusedScratch scratch(f);
  auto core = grow_core_impl(f, idx, scratch, usage, reuse_cap, rng, seed_cid);
  if (!core) return std::nullopt;
  return Subformula{&f, std::move(*core)};
}

WitnessCertificate random_sampling_search(const Formula& f, const SearchConfig& cfg) {
  if (cfg.algorithm != SearchConfig::Algorithm::kRandomSampling)
    throw std::invalid_argument("config is not for random sampling");
  if (cfg.gamma < 0.0 || cfg.gamma > 1.0) throw std::invalid_argument("gamma must lie in [0, 1]");
  const uint64_t budget =
      cfg.budget > 0 ? cfg.budget : 50u * static_cast<uint64_t>(std::max<int64_t>(f.n_clauses(), 1));

  const BoundSetup setup = compute_bound_setup(f, cfg);
  const FormulaIndex idx(f);
  SampleScratch scratch(f);
  Rng rng(mix_seed(cfg.seed, 0x5a0d1e));

  std::vector<int32_t> usage(static_cast<size_t>(f.n_clauses()), 0);
  PrefixBoundTracker tracker;
  WitnessCertificate cert = base_certificate(f, cfg, setup);
  cert.algorithm = "random_sampling";
  cert.gamma = cfg.gamma;
  cert.budget = budget;
  cert.verdict = kVerdictUnknown;

  uint64_t t = 0;
  int64_t bound_c = 0;
  uint64_t attempts = 0;
  while (attempts < budget) {
    ++attempts;
    auto core = sample_core_impl(f, idx, scratch, cfg.gamma, rng);
    if (!core) continue;
    for (const int32_t a : *core) {
      tracker.increment(usage[static_cast<size_t>(a)]);
      ++usage[static_cast<size_t>(a)];
    }
    ++t;
    bound_c = tracker.bound(t);
    if (cfg.record_c_trace) cert.c_trace.push_back(bound_c);
    cert.cores.push_back(std::move(*core));
    if (static_cast<double>(bound_c) > setup.m2_upp) {
      cert.verdict = kVerdictRefuted;
      break;
    }
  }

  cert.attempts = attempts;
  cert.t = t;
  cert.bound_c = bound_c;
  cert.ledger = sparse_ledger(usage);
  return cert;
}

WitnessCertificate focused_local_search(const Formula& f, const SearchConfig& cfg) {
  if (cfg.algorithm != SearchConfig::Algorithm::kFocused)
    throw std::invalid_argument("config is not for focused local search");
  if (cfg.reuse_cap < 1) throw std::invalid_argument("reuse cap must be at least 1");
  const uint64_t budget =
      cfg.budget > 0 ? cfg.budget
                     : static_cast<uint64_t>(cfg.reuse_cap) *
                           static_cast<uint64_t>(std::max<int64_t>(f.n_clauses(), 1));

  const BoundSetup setup = compute_bound_setup(f, cfg);
  const FormulaIndex idx(f);
  FocusedScratch scratch(f);
  Rng rng(mix_seed(cfg.seed, 0xf0c05ed));

  std::vector<int32_t> usage(static_cast<size_t>(f.n_clauses()), 0);
  // Swap-removal pool of clauses that may still join a subformula.
  std::vector<int32_t> eligible(static_cast<size_t>(f.n_clauses()));
  std::vector<int32_t> eligible_pos(static_cast<size_t>(f.n_clauses()));
  for (size_t a = 0; a < eligible.size(); ++a) {
    eligible[a] = static_cast<int32_t>(a);
    eligible_pos[a] = static_cast<int32_t>(a);
  }
  const auto pool_remove = [&eligible, &eligible_pos](int32_t cid) {
    const int32_t pos = eligible_pos[static_cast<size_t>(cid)];
    eligible[static_cast<size_t>(pos)] = eligible.back();
    eligible_pos[static_cast<size_t>(eligible.back())] = pos;
    eligible.pop_back();
  };

  PrefixBoundTracker tracker;
  WitnessCertificate cert = base_certificate(f, cfg, setup);
  cert.algorithm = "focused";
  cert.reuse_cap = cfg.reuse_cap;
  cert.budget = budget;
  cert.verdict = kVerdictUnknown;

  uint64_t t = 0;
  int64_t bound_c = 0;
  uint64_t attempts = 0;
  while (attempts < budget && !eligible.empty()) {
    ++attempts;
    const int32_t seed_cid = eligible[static_cast<size_t>(rng.below(eligible.size()))];
    auto core = grow_core_impl(f, idx, scratch, usage, cfg.reuse_cap, rng, seed_cid);
    if (!core) break;  // construction failed; the run stops
    for (const int32_t a : *core) {
      tracker.increment(usage[static_cast<size_t>(a)] - 1);
      if (usage[static_cast<size_t>(a)] >= cfg.reuse_cap) pool_remove(a);
    }
    ++t;
    bound_c = tracker.bound(t);
    if (cfg.record_c_trace) cert.c_trace.push_back(bound_c);
    cert.cores.push_back(std::move(*core));
    if (static_cast<double>(bound_c) > setup.m2_upp) {
      cert.verdict = kVerdictRefuted;
      break;
    }
  }

  cert.attempts = attempts;
  cert.t = t;
  cert.bound_c = bound_c;
  cert.ledger = sparse_ledger(usage);
  return cert;
}

using ordered_json = nlohmann::ordered_json;

std::string certificate_to_json(const WitnessCertificate& cert) {
  ordered_json j;
  j["format"] = "fko-witness-certificate";
  j["version"] = 1;
  j["formula"] = ordered_json{{"n_vars", cert.n_vars},
                              {"n_clauses", cert.n_clauses},
                              {"hash_alg", cert.hash_alg},
                              {"hash", cert.formula_hash}};
  ordered_json algo;
  algo["name"] = cert.algorithm;
  if (cert.algorithm == "random_sampling") algo["gamma"] = cert.gamma;
  if (cert.algorithm == "focused") algo["reuse_cap"] = cert.reuse_cap;
  algo["budget"] = cert.budget;
  algo["attempts"] = cert.attempts;
  j["algorithm"] = std::move(algo);
  j["rng"] = ordered_json{{"name", cert.rng_name}, {"seed", cert.seed}};
  j["lambda"] = ordered_json{{"mode", cert.lambda_mode},
                             {"value", cert.lambda},
                             {"rel_tol", cert.lambda_rel_tol}};
  j["imbalance_sum"] = cert.imbalance_sum;
  j["m2_upp"] = cert.m2_upp;
  j["t"] = cert.t;
  j["bound_c"] = cert.bound_c;
  ordered_json ledger = ordered_json::array();
  for (const auto& [a, d] : cert.ledger) ledger.push_back(ordered_json::array({a, d}));
  j["ledger"] = std::move(ledger);
  j["cores"] = cert.cores;
  if (!cert.c_trace.empty()) j["c_trace"] = cert.c_trace;
  j["verdict"] = cert.verdict;
  return j.dump() + "\n";
}

namespace {

[[noreturn]] void malformed(const std::string& what) { throw CertificateFormatError(what); }

template <typename T>
T field(const ordered_json& j, const char* key) {
  if (!j.contains(key)) malformed(std::string("missing field: ") + key);
  try {
    return j.at(key).get<T>();
  } catch (const nlohmann::json::exception&) {
    malformed(std::string("wrong type for field: ") + key);
  }
}

}  // namespace

WitnessCertificate certificate_from_json(const std::string& text) {
  ordered_json j;
  try {
    j = ordered_json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    malformed(std::string("not valid JSON: ") + e.what());
  }
  if (!j.is_object()) malformed("certificate is not a JSON object");
  if (field<std::string>(j, "format") != "fko-witness-certificate")
    malformed("unrecognized certificate format tag");
  if (field<int64_t>(j, "version") != 1) malformed("unsupported certificate version");

  WitnessCertificate cert;
  const ordered_json formula = field<ordered_json>(j, "formula");
  cert.n_vars = field<int32_t>(formula, "n_vars");
  cert.n_clauses = field<int64_t>(formula, "n_clauses");
  cert.hash_alg = field<std::string>(formula, "hash_alg");
  cert.formula_hash = field<std::string>(formula, "hash");
  if (cert.n_vars < 0 || cert.n_clauses < 0) malformed("negative formula dimensions");

  const ordered_json algo = field<ordered_json>(j, "algorithm");
  cert.algorithm = field<std::string>(algo, "name");
  if (cert.algorithm == "random_sampling")
    cert.gamma = field<double>(algo, "gamma");
  else if (cert.algorithm == "focused")
    cert.reuse_cap = field<int32_t>(algo, "reuse_cap");
  else
    malformed("unknown algorithm: " + cert.algorithm);
  cert.budget = field<uint64_t>(algo, "budget");
  cert.attempts = field<uint64_t>(algo, "attempts");

  const ordered_json rng = field<ordered_json>(j, "rng");
  cert.rng_name = field<std::string>(rng, "name");
  cert.seed = field<uint64_t>(rng, "seed");

  const ordered_json lambda = field<ordered_json>(j, "lambda");
  cert.lambda_mode = field<std::string>(lambda, "mode");
  if (cert.lambda_mode != "estimate" && cert.lambda_mode != "certified")
    malformed("unknown lambda mode: " + cert.lambda_mode);
  cert.lambda = field<double>(lambda, "value");
  cert.lambda_rel_tol = field<double>(lambda, "rel_tol");

  cert.imbalance_sum = field<int64_t>(j, "imbalance_sum");
  cert.m2_upp = field<double>(j, "m2_upp");
  cert.t = field<uint64_t>(j, "t");
  cert.bound_c = field<int64_t>(j, "bound_c");

  const ordered_json ledger = field<ordered_json>(j, "ledger");
  if (!ledger.is_array()) malformed("ledger must be an array");
  for (const auto& item : ledger) {
    if (!item.is_array() || item.size() != 2) malformed("ledger entries must be [clause, d] pairs");
    int32_t a;
    int64_t d;
    try {
      a = item.at(0).get<int32_t>();
      d = item.at(1).get<int64_t>();
    } catch (const nlohmann::json::exception&) {
      malformed("ledger entry has wrong types");
    }
    if (a < 0 || a >= cert.n_clauses) malformed("ledger clause index out of range");
    if (d <= 0) malformed("ledger usage values must be positive");
    cert.ledger.emplace_back(a, d);
  }

  const ordered_json cores = field<ordered_json>(j, "cores");
  if (!cores.is_array()) malformed("cores must be an array");
  for (const auto& core : cores) {
    if (!core.is_array()) malformed("each core must be an array of clause indices");
    std::vector<int32_t> ids;
    for (const auto& id : core) {
      int32_t a;
      try {
        a = id.get<int32_t>();
      } catch (const nlohmann::json::exception&) {
        malformed("core clause index has wrong type");
      }
      if (a < 0 || a >= cert.n_clauses) malformed("core clause index out of range");
      ids.push_back(a);
    }
    std::vector<int32_t> dedup = ids;
    std::sort(dedup.begin(), dedup.end());
    if (std::adjacent_find(dedup.begin(), dedup.end()) != dedup.end())
      malformed("core lists a clause twice");
    cert.cores.push_back(std::move(ids));
  }

  if (j.contains("c_trace")) cert.c_trace = field<std::vector<int64_t>>(j, "c_trace");

  cert.verdict = field<std::string>(j, "verdict");
  if (cert.verdict != kVerdictRefuted && cert.verdict != kVerdictUnknown)
    malformed("unknown verdict: " + cert.verdict);
  return cert;
}

void write_certificate_file(const WitnessCertificate& cert, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open " + path + " for writing");
  out << certificate_to_json(cert);
}

WitnessCertificate read_certificate_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return certificate_from_json(buf.str());
}

}  // namespace fko
