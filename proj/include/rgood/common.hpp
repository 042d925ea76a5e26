#pragma once

#include <cstdint>
#include <limits>
#include <optional>
#include <random>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include <boost/rational.hpp>

namespace rgood {

using Rational = boost::rational<std::int64_t>;

// ceil(a / b) for b > 0.
inline std::int64_t ceil_div(const Rational& a, const Rational& b) {
  Rational q = a / b;
  std::int64_t f = q.numerator() / q.denominator();
  if (q.numerator() < 0 && q.numerator() % q.denominator() != 0) --f;
  return (Rational(f) == q) ? f : f + 1;
}

// lhs >= factor * k, exactly.
inline bool at_least(std::int64_t lhs, const Rational& factor, std::int64_t k) {
  return Rational(lhs) >= factor * k;
}

inline std::string to_string(const Rational& r) {
  if (r.denominator() == 1) return std::to_string(r.numerator());
  return std::to_string(r.numerator()) + "/" + std::to_string(r.denominator());
}

// Accepts "3", "5/2", "2.5".
inline Rational parse_rational(const std::string& s) {
  auto slash = s.find('/');
  if (slash != std::string::npos)
    return Rational(std::stoll(s.substr(0, slash)), std::stoll(s.substr(slash + 1)));
  auto dot = s.find('.');
  if (dot == std::string::npos) return Rational(std::stoll(s));
  std::string digits = s.substr(0, dot) + s.substr(dot + 1);
  std::int64_t den = 1;
  for (std::size_t i = dot + 1; i < s.size(); ++i) den *= 10;
  return Rational(std::stoll(digits), den);
}

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A documented precondition of an operation does not hold for the given input.
class PreconditionError : public Error {
 public:
  using Error::Error;
};

// An input collection of bare paths is not valid for the tree it refers to.
class InvalidPaths : public PreconditionError {
 public:
  using PreconditionError::PreconditionError;
};

// Raised when a result the mathematics guarantees is not produced.  Reaching
// this is an implementation bug.
class LemmaViolation : public Error {
 public:
  using Error::Error;
};

// The hypothesis of a lemma fails on the given instance.  `witness` is the
// vertex set whose existence the lemma's hypothesis rules out.
class HypothesisViolated : public Error {
 public:
  HypothesisViolated(std::string what, std::vector<int> witness)
      : Error(std::move(what)), witness_(std::move(witness)) {}
  const std::vector<int>& witness() const { return witness_; }

 private:
  std::vector<int> witness_;
};

// A bounded search ran out of decision nodes before reaching an answer.
class SearchBudgetExceeded : public Error {
 public:
  using Error::Error;
};

// An exhaustive enumeration would exceed its configured size cap.
class CapExceeded : public Error {
 public:
  using Error::Error;
};

// A seeded randomized construction failed on every attempt.  This is not a
// proof that no construction exists.
class RetriesExhausted : public Error {
 public:
  using Error::Error;
};

enum class SearchStatus { found, absent, unknown };

inline const char* to_string(SearchStatus s) {
  switch (s) {
    case SearchStatus::found: return "found";
    case SearchStatus::absent: return "absent";
    case SearchStatus::unknown: return "unknown";
  }
  return "?";
}

// Decision-node budget for exhaustive searches.
struct Budget {
  std::uint64_t limit = 50'000'000;
  std::uint64_t used = 0;

  static Budget unlimited() { return Budget{std::numeric_limits<std::uint64_t>::max(), 0}; }
  // Returns false once the budget is spent.
  bool tick() { return ++used <= limit; }
  bool exhausted() const { return used > limit; }
};

// Tri-state result of a bounded exhaustive search.  `absent` is a proof of
// non-existence; `unknown` means the budget ran out first.
template <class T>
struct Search {
  SearchStatus status = SearchStatus::unknown;
  std::optional<T> value;
  std::uint64_t nodes = 0;

  bool found() const { return status == SearchStatus::found; }
  bool absent() const { return status == SearchStatus::absent; }
  bool unknown() const { return status == SearchStatus::unknown; }

  static Search make_found(T v, std::uint64_t nodes) {
    return Search{SearchStatus::found, std::move(v), nodes};
  }
  static Search make_absent(std::uint64_t nodes) { return Search{SearchStatus::absent, std::nullopt, nodes}; }
  static Search make_unknown(std::uint64_t nodes) { return Search{SearchStatus::unknown, std::nullopt, nodes}; }
};

// Seeded generator.  std::mt19937_64 output is fixed by the standard; the
// std distributions are not, so bounded draws are done here.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t operator()() { return engine_(); }

  // Uniform in [0, n).
  std::uint64_t below(std::uint64_t n) {
    if (n <= 1) return 0;
    std::uint64_t threshold = (0 - n) % n;
    while (true) {
      std::uint64_t x = (*this)();
      if (x >= threshold) return x % n;
    }
  }
  int uniform_int(int lo, int hi) { return lo + static_cast<int>(below(static_cast<std::uint64_t>(hi - lo + 1))); }
  double uniform01() { return static_cast<double>((*this)() >> 11) * 0x1.0p-53; }
  bool bernoulli(double p) { return uniform01() < p; }

  template <class V>
  void shuffle(V& v) {
    for (std::size_t i = v.size(); i > 1; --i) std::swap(v[i - 1], v[below(i)]);
  }

 private:
  std::mt19937_64 engine_;
};

}  // namespace rgood
