#include "fko/formula.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cstdio>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

#include "fko/rng.hpp"

namespace fko {

std::string to_hex16(uint64_t value) {
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(value));
  return std::string(buf, 16);
}

std::vector<int32_t> Rng::sample_distinct(int32_t n, int32_t k) {
  std::vector<int32_t> out;
  out.reserve(static_cast<size_t>(k));
  std::vector<char> taken(static_cast<size_t>(n), 0);
  for (int32_t j = n - k; j < n; ++j) {
    const int32_t t = below_i32(j + 1);
    if (taken[static_cast<size_t>(t)]) {
      taken[static_cast<size_t>(j)] = 1;
      out.push_back(j);
    } else {
      taken[static_cast<size_t>(t)] = 1;
      out.push_back(t);
    }
  }
  return out;
}

Formula::Formula(int32_t n_vars, std::vector<Clause> clauses,
                 std::optional<GeneratorStamp> generator)
    : n_vars_(n_vars), clauses_(std::move(clauses)), generator_(std::move(generator)) {
  if (n_vars_ < 0) throw FormulaError("negative variable count");
  for (size_t a = 0; a < clauses_.size(); ++a) {
    const Clause& c = clauses_[a];
    for (int e = 0; e < 3; ++e) {
      if (c.vars[e] < 0 || c.vars[e] >= n_vars_)
        throw FormulaError("clause " + std::to_string(a) + ": variable out of range");
      if (c.signs[e] != 1 && c.signs[e] != -1)
        throw FormulaError("clause " + std::to_string(a) + ": coupling must be +1 or -1");
    }
    if (c.vars[0] == c.vars[1] || c.vars[0] == c.vars[2] || c.vars[1] == c.vars[2])
      throw FormulaError("clause " + std::to_string(a) + ": repeated variable");
  }
}

Assignment assignment_from_bits(uint64_t bits, int32_t n) {
  Assignment a(static_cast<size_t>(n));
  for (int32_t i = 0; i < n; ++i)
    a[static_cast<size_t>(i)] = ((bits >> i) & 1u) ? int8_t{-1} : int8_t{1};
  return a;
}

Formula generate_random_3sat(int32_t n, int64_t m, uint64_t seed) {
  if (n < 3) throw FormulaError("need at least 3 variables to place a 3-clause");
  if (m < 0) throw FormulaError("negative clause count");
  Rng rng(seed);
  std::vector<Clause> clauses(static_cast<size_t>(m));
  for (int64_t a = 0; a < m; ++a) {
    Clause& c = clauses[static_cast<size_t>(a)];
    c.vars[0] = rng.below_i32(n);
    do {
      c.vars[1] = rng.below_i32(n);
    } while (c.vars[1] == c.vars[0]);
    do {
      c.vars[2] = rng.below_i32(n);
    } while (c.vars[2] == c.vars[0] || c.vars[2] == c.vars[1]);
    for (int e = 0; e < 3; ++e) c.signs[e] = rng.sign();
  }
  return Formula(n, std::move(clauses), GeneratorStamp{seed, Rng::kName});
}

DegreeProfile degree_profile(const Formula& f) {
  DegreeProfile p;
  p.k_plus.assign(static_cast<size_t>(f.n_vars()), 0);
  p.k_minus.assign(static_cast<size_t>(f.n_vars()), 0);
  for (const Clause& c : f.clauses()) {
    for (int e = 0; e < 3; ++e) {
      if (c.signs[e] > 0)
        ++p.k_plus[static_cast<size_t>(c.vars[e])];
      else
        ++p.k_minus[static_cast<size_t>(c.vars[e])];
    }
  }
  for (int32_t i = 0; i < f.n_vars(); ++i) {
    const int64_t d = p.k_plus[static_cast<size_t>(i)] - p.k_minus[static_cast<size_t>(i)];
    p.imbalance_sum += d < 0 ? -d : d;
  }
  return p;
}

namespace {

void check_assignment(const Formula& f, const Assignment& a) {
  if (static_cast<int64_t>(a.size()) != f.n_vars())
    throw FormulaError("assignment length does not match variable count");
}

inline int satisfied_edges(const Clause& c, const Assignment& a) {
  int s = 0;
  for (int e = 0; e < 3; ++e)
    s += a[static_cast<size_t>(c.vars[e])] == c.signs[e];
  return s;
}

}  // namespace

int64_t sat_energy(const Formula& f, const Assignment& a) {
  check_assignment(f, a);
  int64_t energy = 0;
  for (const Clause& c : f.clauses()) energy += satisfied_edges(c, a) == 0;
  return energy;
}

int64_t xor_energy(const Formula& f, const Assignment& a) {
  check_assignment(f, a);
  int64_t energy = 0;
  for (const Clause& c : f.clauses()) energy += (satisfied_edges(c, a) & 1) == 0;
  return energy;
}

SatisfactionProfile satisfaction_profile(const Formula& f, const Assignment& a) {
  check_assignment(f, a);
  SatisfactionProfile p;
  for (const Clause& c : f.clauses()) {
    switch (satisfied_edges(c, a)) {
      case 0: ++p.m0; break;
      case 1: ++p.m1; break;
      case 2: ++p.m2; break;
      default: ++p.m3; break;
    }
  }
  return p;
}

namespace {

constexpr const char* kSeedCommentPrefix = "c seed ";

}  // namespace

Formula read_dimacs(std::istream& in) {
  std::optional<GeneratorStamp> stamp;
  std::string line;
  int64_t n = -1, m = -1;
  std::vector<Clause> clauses;
  std::vector<int64_t> lits;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    if (line[0] == 'c') {
      // "c seed <integer> gen <name>" restores the generator stamp.
      std::istringstream ls(line);
      std::string tag, word;
      ls >> tag >> word;
      if (word == "seed") {
        uint64_t seed;
        std::string gen_kw, name;
        if (ls >> seed >> gen_kw >> name && gen_kw == "gen")
          stamp = GeneratorStamp{seed, name};
      }
      continue;
    }
    if (line[0] == 'p') {
      std::istringstream ls(line);
      std::string p, fmt;
      if (!(ls >> p >> fmt >> n >> m) || fmt != "cnf" || n < 0 || m < 0)
        throw DimacsError("malformed DIMACS header: " + line);
      if (n > INT32_MAX) throw DimacsError("variable count too large");
      clauses.reserve(static_cast<size_t>(m));
      continue;
    }
    if (n < 0) throw DimacsError("clause data before DIMACS header");
    std::istringstream ls(line);
    int64_t lit;
    while (ls >> lit) {
      if (lit == 0) {
        if (lits.size() != 3)
          throw DimacsError("clause with " + std::to_string(lits.size()) +
                            " literals; exactly 3 required");
        Clause c;
        for (int e = 0; e < 3; ++e) {
          const int64_t v = lits[static_cast<size_t>(e)] < 0 ? -lits[static_cast<size_t>(e)]
                                                             : lits[static_cast<size_t>(e)];
          if (v < 1 || v > n) throw DimacsError("literal out of range: " + std::to_string(lit));
          c.vars[e] = static_cast<int32_t>(v - 1);
          c.signs[e] = lits[static_cast<size_t>(e)] < 0 ? int8_t{-1} : int8_t{1};
        }
        if (c.vars[0] == c.vars[1] || c.vars[0] == c.vars[2] || c.vars[1] == c.vars[2])
          throw DimacsError("repeated variable within a clause");
        clauses.push_back(c);
        lits.clear();
      } else {
        const int64_t v = lit < 0 ? -lit : lit;
        if (v < 1 || v > n) throw DimacsError("literal out of range: " + std::to_string(lit));
        lits.push_back(lit);
      }
    }
  }
  if (!lits.empty()) throw DimacsError("trailing literals without terminating 0");
  if (n < 0) throw DimacsError("missing DIMACS header");
  if (static_cast<int64_t>(clauses.size()) != m)
    throw DimacsError("header promises " + std::to_string(m) + " clauses, found " +
                      std::to_string(clauses.size()));
  try {
    return Formula(static_cast<int32_t>(n), std::move(clauses), std::move(stamp));
  } catch (const FormulaError& e) {
    throw DimacsError(e.what());
  }
}

Formula read_dimacs_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DimacsError("cannot open " + path);
  return read_dimacs(in);
}

void write_dimacs(const Formula& f, std::ostream& out) {
  if (f.generator())
    out << kSeedCommentPrefix << f.generator()->seed << " gen " << f.generator()->rng_name
        << "\n";
  out << canonical_dimacs(f);
}

void write_dimacs_file(const Formula& f, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw DimacsError("cannot open " + path + " for writing");
  write_dimacs(f, out);
}

std::string canonical_dimacs(const Formula& f) {
  std::string s;
  s.reserve(static_cast<size_t>(16 + 16 * f.n_clauses()));
  s += "p cnf ";
  s += std::to_string(f.n_vars());
  s += ' ';
  s += std::to_string(f.n_clauses());
  s += '\n';
  for (const Clause& c : f.clauses()) {
    for (int e = 0; e < 3; ++e) {
      const int64_t lit = static_cast<int64_t>(c.vars[e] + 1) * c.signs[e];
      s += std::to_string(lit);
      s += ' ';
    }
    s += "0\n";
  }
  return s;
}

std::string formula_hash_hex(const Formula& f) { return to_hex16(fnv1a64(canonical_dimacs(f))); }

}  // namespace fko
