#pragma once

#include <boost/multiprecision/cpp_int.hpp>
#include <compare>
#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

namespace gwa {

// All probabilities, payoffs and slacks are exact rationals.
using Rat = boost::multiprecision::cpp_rational;

// A history is the sequence of move labels leading to a node. The empty
// history is the root. Histories compare lexicographically by move label,
// which fixes every iteration and serialization order in the library.
using History = std::vector<std::string>;

inline const std::string kChance = "c";

inline bool is_prefix(const History& p, const History& h) {
  if (p.size() > h.size()) return false;
  for (std::size_t i = 0; i < p.size(); ++i)
    if (p[i] != h[i]) return false;
  return true;
}

inline bool is_strict_prefix(const History& p, const History& h) {
  return p.size() < h.size() && is_prefix(p, h);
}

std::string history_to_string(const History& h);

// An information set is addressed by its owner and its position in the
// owner's canonically sorted list of information sets.
struct InfosetKey {
  std::string player;
  int index = 0;
  auto operator<=>(const InfosetKey&) const = default;
};

std::string to_string(const InfosetKey& k);

// "p/q" (or plain integer) parsing/printing used by every file format.
Rat parse_rat(const std::string& s);
std::string rat_to_string(const Rat& r);

inline double to_double(const Rat& r) { return r.template convert_to<double>(); }

struct Violation {
  std::string code;
  std::string message;
};

struct ValidationReport {
  std::vector<Violation> violations;
  bool ok() const { return violations.empty(); }
  void add(std::string code, std::string message) {
    violations.push_back({std::move(code), std::move(message)});
  }
  std::string summary() const;
};

// Deterministic pseudo-random source for solver restarts and test sweeps.
class SplitMix64 {
 public:
  explicit SplitMix64(std::uint64_t seed) : state_(seed) {}
  std::uint64_t next() {
    std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }
  // Uniform integer in [0, n).
  std::uint64_t below(std::uint64_t n) { return next() % n; }

 private:
  std::uint64_t state_;
};

}  // namespace gwa
