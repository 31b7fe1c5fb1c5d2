#pragma once

// Exact averaging over K_{n,r}: lattice functions, symmetrization, the
// correlation inequality for invariant monotone functions and its corollaries,
// plus the counting identities its proof runs on.

#include <boost/dynamic_bitset.hpp>

#include <functional>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "compfkg/errors.hpp"
#include "compfkg/interval.hpp"
#include "compfkg/lattice.hpp"
#include "compfkg/random.hpp"
#include "compfkg/rational.hpp"

namespace compfkg {

/// Raised when a verifier's hypothesis fails; `what()` names the witness.
class PreconditionError : public DomainError {
 public:
  using DomainError::DomainError;
};

enum class Monotonicity { Constant, NonDecreasing, NonIncreasing, Neither };
std::string to_string(Monotonicity m);

/// A total non-negative rational function on a lattice.
class LatticeFunction {
 public:
  LatticeFunction(LatticePtr lat, std::vector<Rational> values);
  static LatticeFunction from(LatticePtr lat, const std::function<Rational(const Composition&)>& fn);
  static LatticeFunction constant(LatticePtr lat, const Rational& c);
  static LatticeFunction indicator(LatticePtr lat, const boost::dynamic_bitset<>& members);

  const CompositionLattice& lattice() const { return *lat_; }
  const LatticePtr& lattice_ptr() const { return lat_; }
  const std::vector<Rational>& values() const { return values_; }
  const Rational& operator[](std::size_t i) const { return values_[i]; }
  const Rational& operator()(const Composition& k) const { return values_[lat_->index_of(k)]; }
  std::size_t size() const { return values_.size(); }

  bool is_constant() const;
  bool is_invariant() const;
  /// A pair (a, b) with a, b in one orbit and different values.
  std::optional<std::pair<std::size_t, std::size_t>> invariance_witness() const;
  /// Checked along elementary moves, which generate the order.
  bool is_nondecreasing() const { return !monotonicity_witness(true).has_value(); }
  bool is_nonincreasing() const { return !monotonicity_witness(false).has_value(); }
  /// A move (upper, lower) breaking the requested direction.
  std::optional<std::pair<std::size_t, std::size_t>> monotonicity_witness(bool nondecreasing) const;
  Monotonicity monotonicity() const;
  Rational max() const;

  LatticeFunction operator*(const LatticeFunction& other) const;
  LatticeFunction operator+(const LatticeFunction& other) const;
  LatticeFunction scaled(const Rational& c) const;
  /// max(f) - f
  LatticeFunction reflected() const;

 private:
  void check_same_lattice(const LatticeFunction& other) const;
  LatticePtr lat_;
  std::vector<Rational> values_;
};

Rational average(const LatticeFunction& f);
/// Av(fg) - Av(f)Av(g); no hypotheses checked.
Rational correlation_gap(const LatticeFunction& f, const LatticeFunction& g);
/// Orbit average g~(x) = Av_{Ξ_r(x)} g.
LatticeFunction symmetrize(const LatticeFunction& g);

struct GeometricAverage {
  /// Set when the product is a perfect |K|-th power.
  std::optional<Rational> exact;
  /// Enclosure of ln of the geometric average, i.e. Av(ln f).
  Interval log_value;
  /// Enclosure of the geometric average itself.
  Interval value;
};

/// (prod f)^(1/|K|); DomainError on any non-positive value.
GeometricAverage geometric_average(const LatticeFunction& f, mpfr_prec_t prec = kDefaultStartPrecision);

/// True iff the orbit geometric means of f agree on every class, i.e. the
/// symmetrization of ln f is constant. Exact.
bool log_symmetrization_constant(const LatticeFunction& f);

enum class FkgDirection { IncreasingIncreasing, IncreasingDecreasing };

struct FkgReport {
  Rational av_f, av_g, av_fg;
  /// Av(fg) - Av(f)Av(g)
  Rational gap;
  /// +1 when gap >= 0 is claimed, -1 when gap <= 0 is claimed, 0 when gap = 0 is forced.
  int expected_sign = 0;
  bool holds = false;
  bool equality = false;
  /// f constant, or symmetrize(g) constant.
  bool equality_condition = false;
  /// equality == equality_condition
  bool equality_consistent = false;
  std::string f_monotonicity;
  std::string g_monotonicity;
};

/// Requires f invariant and non-decreasing and g monotone as declared.
FkgReport verify_fkg(const LatticeFunction& f, const LatticeFunction& g, FkgDirection direction);

/// Pushforward form: f invariant, f and symmetrize(g) monotone (either
/// direction); the expected sign follows from the detected directions.
FkgReport verify_pushforward_corollary(const LatticeFunction& f, const LatticeFunction& g);

/// Random Ξ_r-invariant non-decreasing function: each class takes the largest
/// value below it plus a uniform draw from {0..step}.
LatticeFunction random_invariant_monotone(LatticePtr lat, Rng& rng, long step = 3);

struct RandomFkgReport {
  std::size_t instances = 0;
  std::uint64_t seed = 0;
  std::size_t violations = 0;
  std::size_t equalities = 0;
  /// Lowest violating instance with its values.
  std::optional<std::size_t> witness_instance;
  std::vector<Rational> witness_f, witness_g;
};

/// Pairs (f, g) of random invariant non-decreasing functions; instance i uses Rng(seed).split(i).
RandomFkgReport verify_fkg_random(LatticePtr lat, std::size_t budget, std::uint64_t seed, unsigned threads = 0);

/// A Ξ_r-invariant upward closed subset of K_{n,r}.
class UpSet {
 public:
  /// Validates closure and invariance; PreconditionError otherwise.
  UpSet(LatticePtr lat, boost::dynamic_bitset<> members);
  /// Lifts a filter of the quotient (bitset over classes).
  static UpSet from_classes(LatticePtr lat, const boost::dynamic_bitset<>& classes);

  const CompositionLattice& lattice() const { return *lat_; }
  const LatticePtr& lattice_ptr() const { return lat_; }
  const boost::dynamic_bitset<>& members() const { return members_; }
  bool contains(std::size_t i) const { return members_.test(i); }
  std::size_t count() const { return members_.count(); }
  bool trivial() const { return members_.none() || members_.all(); }

 private:
  LatticePtr lat_;
  boost::dynamic_bitset<> members_;
};

inline constexpr std::size_t kDefaultFilterCap = 1'000'000;

/// All filters (up-sets) of the quotient poset as bitsets over classes,
/// including the empty and the full one. CapExceeded beyond `cap`.
std::vector<boost::dynamic_bitset<>> enumerate_quotient_filters(const QuotientPoset& q,
                                                                std::size_t cap = kDefaultFilterCap);

struct ExhaustiveReport {
  int n = 0, r = 0;
  std::size_t lattice_size = 0;
  std::size_t quotient_size = 0;
  std::size_t filters = 0;
  std::size_t pairs_checked = 0;
  std::size_t violations = 0;
  std::size_t equality_pairs = 0;
  /// Pairs where equality held although neither filter is trivial, or the reverse.
  std::size_t equality_mismatches = 0;
  /// min over nontrivial pairs of |K||X∩Y| - |X||Y|.
  std::optional<unsigned long long> min_nontrivial_gap;
  /// First violating pair (filter indices), if any.
  std::optional<std::pair<std::size_t, std::size_t>> witness;
};

/// Checks |X||Y| <= |K||X∩Y| for every ordered pair of invariant up-sets.
ExhaustiveReport verify_fkg_exhaustive(const CompositionLattice& lat, std::size_t filter_cap = kDefaultFilterCap,
                                       unsigned threads = 0);

/// |K^s_{n,r}| = binom(r,s) binom(n-1, r-s-1), with the conventions for n = 0.
Integer stratum_size(int n, int r, int s);

struct StrataProfile {
  /// Strata indices s with K^s non-empty, ascending.
  std::vector<int> strata;
  /// β_s = |X ∩ K^s| / |K^s|
  std::vector<Rational> beta;
  /// γ_s = |K^s|
  std::vector<Integer> gamma;
  /// Step coefficients for (n, r); empty unless 2 <= r <= n.
  std::vector<Rational> alpha;
  bool chain_holds = false;
  bool all_equal = false;
  /// all_equal iff X trivial (only meaningful with at least two strata).
  bool equality_consistent = false;
};

StrataProfile strata_averages(const UpSet& x);

/// α_s = binom(n-r, r-s-1)(n binom(r-1,s-1) - (r-1) binom(r,s)) / (binom(n-2,r-2)(n-1)).
std::vector<Rational> alpha_coefficients(int n, int r);
/// α_s from its defining expression (s/|K^1_{n,r}| - (r-s)/(r|K^0_{n,r}|)) |K^s_{n-r+1,r}|.
std::vector<Rational> alpha_from_strata(int n, int r);
/// binom(n-r, r-k) binom(r-1,k) k / (binom(n-2,r-2)(n-1)).
Rational alpha_tail_closed_form(int n, int r, int k);

struct ChebyshevResult {
  Rational lhs;  ///< (Σγα)(Σγβ)
  Rational rhs;  ///< (Σγ)(Σαβγ)
  Rational gap;  ///< rhs - lhs
  Rational double_sum_gap;  ///< ½ΣΣ γγ'(α-α')(β-β')
  bool holds = false;
  bool gaps_agree = false;
};

/// Weighted Chebyshev sum inequality; α, β non-decreasing, γ > 0.
ChebyshevResult chebyshev_weighted(const std::vector<Rational>& alpha, const std::vector<Rational>& beta,
                                   const std::vector<Rational>& gamma);

struct GeometricCorollaryReport {
  Rational av_g;
  /// |K| Σ g ln f - Σg Σ ln f, certified: >= 0 is the claim.
  CertifiedSign log_gap;
  /// "holds", "equal", "violated" or "indeterminate"
  std::string status;
  bool symbolic_equality = false;
};

/// (Av^G f)^{Av g} vs Av^G(f^g) in log form; f >= 1, both non-decreasing,
/// at least one invariant.
GeometricCorollaryReport verify_geometric_corollary(const LatticeFunction& f, const LatticeFunction& g,
                                                    mpfr_prec_t start_bits = kDefaultStartPrecision);

/// f(k) = prod d_i^{k_i} with d sorted descending, g(k) = multinomial(n+r; k_1+1, ..., k_r+1).
/// g is invariant; f is not, but its symmetrization is non-decreasing for d > 0.
std::pair<LatticeFunction, LatticeFunction> fkg_homogeneous_pair(LatticePtr lat, std::vector<Rational> d);

struct HomogeneousReport {
  /// Σ multinomial
  Rational sum_multinomial;
  /// Σ prod d^k
  Rational sum_product;
  /// Σ multinomial · prod d^k
  Rational sum_weighted;
  Integer lattice_size;
  /// lhs = sum_multinomial·sum_product, rhs = |K|·sum_weighted
  Rational lhs, rhs;
  bool holds = false;
  bool strict = false;
  FkgReport pushforward;
};

/// (Σ multinomial)(Σ prod d^k) >= |K| Σ multinomial·prod d^k.
HomogeneousReport verify_homogeneous_instance(LatticePtr lat, const std::vector<Rational>& d);

/// Level-set decomposition of an invariant non-decreasing f: f = Σ c_j 1_{X_j}, c_j > 0.
std::vector<std::pair<Rational, UpSet>> decompose_into_upsets(const LatticeFunction& f);

// Counting identities behind the strata monotonicity argument.

/// |X ∩ K^1_{n,r}| and Σ_s s |X̂ ∩ K^s_{n-r+1,r}|, X̂ = {m : m + 1 - e_j ∈ X, m_j = 0}.
std::pair<Integer, Integer> k1_decomposition(const UpSet& x);
/// r |X ∩ K^0_{n,r}| and Σ_m #{j : m_j > 0, m + 1 - e_j ∈ X} over m ∈ K_{n-r+1,r}.
std::pair<Integer, Integer> k0_decomposition(const UpSet& x);
/// The single-set form (1/r) Σ_s (r-s) |X̂ ∩ K^s_{n-r+1,r}| with X̂ as in k1_decomposition.
Rational k0_single_set_form(const UpSet& x);

/// binom(r,s)/(r+1-s) · |K^1_{n,r+1-s}|/|K^s_{n,r}| == binom(r,s-1) · |K^0_{n,r+1-s}|/|K^{s-1}_{n,r}|
bool step_coefficients_agree(int n, int r, int s);

struct StrataStepCheck {
  Rational difference;             ///< Av_{K^s}X - Av_{K^{s-1}}X
  Rational descendant_difference;  ///< Av_{K^1_{n,r+1-s}}X' - Av_{K^0_{n,r+1-s}}X'
  Rational coefficient;
  bool identity_holds = false;
};

/// X' = {k' ∈ K_{n,r+1-s} : (k', 0^{s-1}) ∈ X}; 1 <= s <= r-1 with both strata non-empty.
StrataStepCheck strata_step(const UpSet& x, int s);

}  // namespace compfkg
