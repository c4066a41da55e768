#pragma once

// Shared plumbing: bounded-computation flags, validation reports, guard
// limits, permutations and small combinatorial iterators.

#include <algorithm>
#include <cstdint>
#include <functional>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace freeprod {

// Thrown when an input violates a documented precondition (bad typing,
// unknown object, malformed file).  Axiom violations are *data* (reports),
// not exceptions.
struct precondition_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Thrown when an enumeration would exceed a hard guard limit.
struct size_guard_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Thrown when a word-equality query needs words longer than the bound.
struct bound_exhausted_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Default guard rails (see README).  Operations that materialise hom sets
// refuse to build anything bigger than these.
struct Limits {
  std::size_t max_hom = 100000;      // elements per materialised hom set
  std::size_t max_objects = 10000;   // objects per constructed graph/category
  std::size_t max_arity = 4;         // multimap arity explored by validators
  std::size_t max_seq = 64;          // object sequences sampled per check
};

inline void guard(bool ok, const char* what) {
  if (!ok) throw size_guard_error(what);
}

// ---------------------------------------------------------------------------
// Verdicts and reports.

enum class Verdict { pass, fail, unknown };

inline const char* to_string(Verdict v) {
  switch (v) {
    case Verdict::pass: return "pass";
    case Verdict::fail: return "fail";
    default: return "unknown";
  }
}

// One named check with an outcome and human-readable detail lines.
// `instances` counts how many concrete cases were examined.
struct CheckResult {
  std::string name;
  Verdict verdict = Verdict::pass;
  std::size_t instances = 0;
  std::vector<std::string> violations;  // empty iff verdict != fail
  bool exhausted = false;               // some cases hit a bound

  void fail_case(std::string why) {
    verdict = Verdict::fail;
    violations.push_back(std::move(why));
  }
};

// Aggregated report from a validator: per-axiom results.
struct Report {
  std::vector<CheckResult> checks;

  bool ok() const {
    return std::all_of(checks.begin(), checks.end(), [](const CheckResult& c) {
      return c.verdict == Verdict::pass;
    });
  }
  bool exhausted() const {
    return std::any_of(checks.begin(), checks.end(),
                       [](const CheckResult& c) { return c.exhausted; });
  }
  std::size_t instances() const {
    std::size_t n = 0;
    for (auto& c : checks) n += c.instances;
    return n;
  }
  CheckResult& add(std::string name) {
    CheckResult c;
    c.name = std::move(name);
    checks.push_back(std::move(c));
    return checks.back();
  }
};

// A value that may have been truncated by a bound.
template <typename T>
struct Bounded {
  T value{};
  bool exhausted = false;
};

// ---------------------------------------------------------------------------
// Permutations of {0,...,n-1}.  p[i] = image of i.

using Perm = std::vector<std::size_t>;

inline Perm perm_identity(std::size_t n) {
  Perm p(n);
  for (std::size_t i = 0; i < n; ++i) p[i] = i;
  return p;
}

inline Perm perm_inverse(const Perm& p) {
  Perm q(p.size());
  for (std::size_t i = 0; i < p.size(); ++i) q[p[i]] = i;
  return q;
}

// (p*q)(i) = p(q(i)) — apply q first.
inline Perm perm_compose(const Perm& p, const Perm& q) {
  Perm r(p.size());
  for (std::size_t i = 0; i < q.size(); ++i) r[i] = p[q[i]];
  return r;
}

inline std::vector<Perm> all_perms(std::size_t n) {
  Perm p = perm_identity(n);
  std::vector<Perm> out;
  do {
    out.push_back(p);
  } while (std::next_permutation(p.begin(), p.end()));
  return out;
}

// ---------------------------------------------------------------------------
// Odometer over mixed radixes: visits every tuple (i_0,..,i_{k-1}) with
// i_j < radix[j].  Returns false if any radix is zero.

inline bool for_each_tuple(const std::vector<std::size_t>& radix,
                           const std::function<bool(const std::vector<std::size_t>&)>& body) {
  for (std::size_t r : radix)
    if (r == 0) return false;
  std::vector<std::size_t> idx(radix.size(), 0);
  while (true) {
    if (!body(idx)) return true;  // early stop requested
    std::size_t j = 0;
    while (j < radix.size() && ++idx[j] == radix[j]) idx[j++] = 0;
    if (j == radix.size() && !radix.empty()) return true;
    if (radix.empty()) return true;  // single empty tuple visited once
  }
}

// Number of functions |cod|^|dom| with overflow guard.
inline std::size_t checked_pow(std::size_t base, std::size_t exp, std::size_t cap) {
  std::size_t r = 1;
  for (std::size_t i = 0; i < exp; ++i) {
    if (base != 0 && r > cap / base) throw size_guard_error("size overflow");
    r *= base;
  }
  return r;
}

}  // namespace freeprod
