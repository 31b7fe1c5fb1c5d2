#pragma once

// Ordered compositions of n into r parts with the dominance order generated by
// elementary moves, the symmetric-group action and the zero-count strata.

#include <boost/dynamic_bitset.hpp>

#include <array>
#include <compare>
#include <cstddef>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "compfkg/rational.hpp"

namespace compfkg {

class Composition {
 public:
  Composition() = default;
  explicit Composition(std::vector<int> parts);
  Composition(std::initializer_list<int> parts) : Composition(std::vector<int>(parts)) {}

  const std::vector<int>& parts() const { return parts_; }
  int operator[](std::size_t i) const { return parts_[i]; }
  int r() const { return static_cast<int>(parts_.size()); }
  int n() const { return n_; }
  int zero_count() const;
  /// Sorted descending: the canonical representative of the orbit.
  Composition sorted_desc() const;
  std::string str() const;

  friend bool operator==(const Composition&, const Composition&) = default;
  friend auto operator<=>(const Composition& a, const Composition& b) { return a.parts_ <=> b.parts_; }

 private:
  std::vector<int> parts_;
  int n_ = 0;
};

struct CompositionHash {
  std::size_t operator()(const Composition& c) const noexcept;
};

inline constexpr std::size_t kDefaultEnumerationCap = 200'000;
/// Beyond this many elements the closure table is not materialized and rows
/// are computed per query (and cached).
inline constexpr std::size_t kClosureTableCap = 20'000;

/// Reads COMP_FKG_CAP when set, otherwise kDefaultEnumerationCap.
std::size_t enumeration_cap_from_env();

class CompositionLattice {
 public:
  int n() const { return n_; }
  int r() const { return r_; }
  std::size_t size() const { return elements_.size(); }
  const std::vector<Composition>& elements() const { return elements_; }
  const Composition& at(std::size_t i) const { return elements_[i]; }

  std::optional<std::size_t> find(const Composition& c) const;
  /// Throws DomainError when c is not an element.
  std::size_t index_of(const Composition& c) const;

  /// a ⪯ b: a is reachable from b by elementary moves (reflexive).
  bool leq(std::size_t a, std::size_t b) const;
  bool leq(const Composition& a, const Composition& b) const { return leq(index_of(a), index_of(b)); }
  bool geq(const Composition& a, const Composition& b) const { return leq(b, a); }
  bool comparable(std::size_t a, std::size_t b) const { return leq(a, b) || leq(b, a); }

  /// Elementary moves out of i: each target is strictly below i.
  const std::vector<std::size_t>& moves_from(std::size_t i) const { return moves_[i]; }
  /// Hasse diagram: (upper, lower) pairs, sorted.
  std::vector<std::pair<std::size_t, std::size_t>> covers() const;
  /// Set of all elements ⪯ i.
  boost::dynamic_bitset<> down_set(std::size_t i) const;

  std::vector<Composition> orbit(const Composition& a) const;
  /// Index of the Ξ_r class (into quotient().classes) of element i.
  std::size_t class_of(std::size_t i) const { return class_of_[i]; }
  const std::vector<Composition>& class_reps() const { return class_reps_; }
  const std::vector<std::vector<std::size_t>>& class_members() const { return class_members_; }

  /// Elements with exactly s zero parts; empty for s < r - n.
  std::vector<Composition> stratum(int s) const;
  const std::vector<std::size_t>& stratum_indices(int s) const;

 private:
  friend CompositionLattice enumerate_lattice(int n, int r, std::size_t cap);
  CompositionLattice() = default;
  void build_closure() const;
  boost::dynamic_bitset<> bfs_row(std::size_t i) const;

  int n_ = 0;
  int r_ = 1;
  std::vector<Composition> elements_;
  std::unordered_map<Composition, std::size_t, CompositionHash> index_;
  std::vector<std::vector<std::size_t>> moves_;
  std::vector<std::size_t> class_of_;
  std::vector<Composition> class_reps_;
  std::vector<std::vector<std::size_t>> class_members_;
  std::vector<std::vector<std::size_t>> strata_;

  // Lazily materialized closure; logically const.
  struct ClosureCache {
    std::once_flag once;
    std::vector<boost::dynamic_bitset<>> rows;
    std::mutex mutex;
    std::map<std::size_t, boost::dynamic_bitset<>> row_cache;
  };
  std::unique_ptr<ClosureCache> cache_ = std::make_unique<ClosureCache>();
};

/// Enumerates K_{n,r} in lexicographically descending order.
/// Throws DomainError for r < 1 or n < 0, CapExceeded when binom(n+r-1,n) > cap.
CompositionLattice enumerate_lattice(int n, int r, std::size_t cap = kDefaultEnumerationCap);

using LatticePtr = std::shared_ptr<const CompositionLattice>;
LatticePtr make_lattice(int n, int r, std::size_t cap = kDefaultEnumerationCap);

/// K_{n,r} modulo coordinate permutations.
class QuotientPoset {
 public:
  explicit QuotientPoset(const CompositionLattice& lat);

  std::size_t size() const { return classes_.size(); }
  const std::vector<Composition>& classes() const { return classes_; }
  const Integer& orbit_size(std::size_t c) const { return orbit_size_[c]; }
  std::size_t index_of(const Composition& rep) const;

  /// [a] ⪯ [b]
  bool leq(std::size_t a, std::size_t b) const { return order_[b][a]; }
  /// Classes ⪯ c.
  const boost::dynamic_bitset<>& down_set(std::size_t c) const { return order_[c]; }
  /// Classes ⪰ c.
  const boost::dynamic_bitset<>& up_set(std::size_t c) const { return up_[c]; }
  std::vector<std::pair<std::size_t, std::size_t>> covers() const;

  std::size_t top() const;
  std::size_t bottom() const;

  /// Greatest lower bound; StructuralError when missing or not unique.
  std::size_t meet(std::size_t a, std::size_t b) const;
  /// Least upper bound; StructuralError when missing or not unique.
  std::size_t join(std::size_t a, std::size_t b) const;

  /// Checks that the closure-induced order equals partial-sum dominance of the
  /// sorted representatives. Returns the first disagreeing pair if any.
  std::optional<std::pair<std::size_t, std::size_t>> dominance_mismatch() const;

 private:
  std::vector<Composition> classes_;
  std::vector<Integer> orbit_size_;
  std::vector<boost::dynamic_bitset<>> order_;
  std::vector<boost::dynamic_bitset<>> up_;
};

struct SublatticeReport {
  /// Closed under the quotient's meet and join.
  bool closed = false;
  /// Pair whose meet or join leaves the set.
  std::optional<std::pair<std::size_t, std::size_t>> escape;
  bool distributive = false;
  /// (a, b, c) with a ∧ (b ∨ c) != (a ∧ b) ∨ (a ∧ c).
  std::optional<std::array<std::size_t, 3>> witness;
};

/// Checks the given classes form a sublattice and whether it is distributive.
SublatticeReport check_sublattice(const QuotientPoset& q, const std::vector<std::size_t>& classes);
/// The whole quotient.
SublatticeReport check_distributive(const QuotientPoset& q);

/// Partial-sum dominance on sorted-descending tuples: a ⪰ b.
bool dominates(const Composition& a, const Composition& b);

/// Number of distinct coordinate permutations of a: r! / prod(mult!).
Integer orbit_size(const Composition& a);

/// All partitions of n with at most r parts, padded with zeros to length r,
/// in lexicographically descending order.
std::vector<Composition> partitions(int n, int r);

struct StratumIsomorphism {
  /// K^0_{n,r} -> K_{n-r,r} by subtracting one from every part.
  std::vector<std::pair<Composition, Composition>> interior;
  /// For each zero pattern S (sorted positions), K^s(zeros exactly at S) -> K^0_{n,r-s}.
  std::map<std::vector<int>, std::vector<std::pair<Composition, Composition>>> by_zero_pattern;
  bool bijective = false;
};

/// Empty mapping (bijective == true) when n < r.
StratumIsomorphism stratum_iso(const CompositionLattice& lat);

struct InclusionExclusionResult {
  Rational alternating_sum;
  Rational positive_part_sum;
  bool holds = false;
};

/// values[i] is A at element i.
InclusionExclusionResult inclusion_exclusion_check(const CompositionLattice& lat,
                                                   const std::vector<Rational>& values);

/// Hasse diagram in Graphviz format; nodes labelled with their part tuples.
std::string to_dot(const CompositionLattice& lat);
std::string to_dot(const QuotientPoset& q);

}  // namespace compfkg
