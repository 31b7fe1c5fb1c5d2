#pragma once

// Generalized mixed (co)volume inequalities obtained by averaging over K_{n,r}.

#include <optional>
#include <string>
#include <vector>

#include "compfkg/averaging.hpp"
#include "compfkg/geometry.hpp"

namespace compfkg {

enum class MixKind { Volume, Covolume };

/// Outer table over K_{n',r'}; inner lattice K_{n,r} with n = n' + r - r',
/// embedded by k -> (k_1, ..., k_r, 1, ..., 1).
struct MixFunctionSpec {
  int outer_n = 0;
  int outer_r = 0;
  int r = 0;
  MixKind kind = MixKind::Covolume;
  std::vector<RationalPolytope> bodies;
  std::vector<NewtonPolyhedron> polyhedra;
  /// Abstract mode: values supplied directly instead of geometry.
  std::optional<MixedVolumeTable> table;

  int n() const { return outer_n + r - outer_r; }
};

void validate(const MixFunctionSpec& spec);
/// The outer table, computed from geometry unless supplied.
MixedVolumeTable outer_table(const MixFunctionSpec& spec);
/// k -> table((k, 1, ..., 1)) on K_{n,r}.
LatticeFunction mix_function(const MixFunctionSpec& spec);
LatticeFunction mix_function(const MixFunctionSpec& spec, const MixedVolumeTable& table);
LatticeFunction mix_covol_function(const MixFunctionSpec& spec);
LatticeFunction mix_vol_function(const MixFunctionSpec& spec);

struct SymmetrizedMonotoneReport {
  bool monotone = false;
  /// Move (upper, lower) along which the symmetrization decreases.
  std::optional<std::pair<Composition, Composition>> monotone_witness;
  std::size_t convexity_checked = 0;
  std::size_t convexity_violations = 0;
  /// k and the pair (i, j) where F(k) > (F(k+e_i-e_j) + F(k-e_i+e_j)) / 2.
  std::optional<std::string> convexity_witness;
  bool holds() const { return monotone && convexity_violations == 0; }
};

/// Symmetrization of Mix.coVol non-decreasing, and the weak convexity
/// coVol(Γ_i, Γ_j, ...) <= (coVol(Γ_i, Γ_i, ...) + coVol(Γ_j, Γ_j, ...)) / 2.
SymmetrizedMonotoneReport verify_symmetrized_monotone(const MixFunctionSpec& spec);

struct CorollaryPart1Report {
  FkgReport pushforward;
  /// Gap from the theorem applied to (C, symmetrize(F)).
  Rational theorem_gap;
  bool paths_agree = false;
  std::string c_direction;
  std::string f_direction;  ///< of symmetrize(F)
  bool holds = false;
  bool equality = false;
  bool symbolic_equality = false;
};

/// Av(C) Av(F) vs Av(C F) with F the mix function; C invariant and monotone,
/// direction detected.
CorollaryPart1Report verify_corollary_part1(const MixFunctionSpec& spec, const LatticeFunction& c);
CorollaryPart1Report verify_corollary_part1(const LatticeFunction& mix, const LatticeFunction& c);

struct CorollaryPart2Report {
  /// Common integer scale applied to all bodies; values were multiplied by t^{n'}.
  long rescale = 1;
  /// +1: the log gap |K| Σ C ln F - Σ C Σ ln F must be >= 0; -1: <= 0.
  int expected_sign = 0;
  CertifiedSign log_gap;
  /// "holds", "equal", "violated" or "indeterminate"
  std::string status;
  bool symbolic_equality = false;
};

/// coVol: (Av^G F)^{Av C} <= Av^G(F^C); Vol: the reverse. Values must be >= 1
/// unless `allow_rescale`.
CorollaryPart2Report verify_corollary_part2(const MixFunctionSpec& spec, const LatticeFunction& c, bool allow_rescale = false,
                                            mpfr_prec_t start_bits = kDefaultStartPrecision);
CorollaryPart2Report verify_corollary_part2(MixKind kind, int outer_n, LatticeFunction mix, const LatticeFunction& c,
                                            bool allow_rescale = false, mpfr_prec_t start_bits = kDefaultStartPrecision);

/// C on K_{3,3} taking a, b, c on the classes of (3,0,0), (2,1,0), (1,1,1).
LatticeFunction exponent_weight(const Rational& a, const Rational& b, const Rational& c);

struct ExponentReport {
  Rational v111;  ///< V(A_1, A_2, A_3)
  Rational p3;    ///< Π V(A_i^3)
  Rational p21;   ///< Π_{i≠j} V(A_i^2, A_j)
  long e_mixed = 0, e_pure = 0, e_pair = 0;  ///< 3a+6b-9c, 7a-6b-c, 4b-3a-c
  bool holds = false;
  bool equality = false;
  /// Sign agrees with the log-form corollary on the same data.
  bool matches_corollary = false;
};

/// V^{3a+6b-9c} >= P3^{7a-6b-c} P21^{4b-3a-c} exactly; a >= b >= c >= 0 integers.
ExponentReport verify_exponent_inequality(const std::vector<RationalPolytope>& bodies, long a, long b, long c);
ExponentReport verify_exponent_inequality(const MixedVolumeTable& table, long a, long b, long c);

struct ProductReport {
  Rational lhs;  ///< V(A_1,A_2,A_3)^6
  Rational rhs;  ///< Π_{i≠j} V(A_i, A_i, A_j)
  bool holds = false;
  bool equality = false;
  std::vector<QuadraticReport> af;  ///< the three embedded Alexandrov-Fenchel checks
  bool factorization_matches = false;
};

ProductReport verify_product_inequality(const std::vector<RationalPolytope>& bodies);
ProductReport verify_product_inequality(const MixedVolumeTable& table);

struct DurfeeReport {
  int n = 0, r = 0;
  Rational sum_c;   ///< Σ_{k∈K_{n,r}} multinomial(n+r; k+1)
  Rational sum_f;   ///< Σ coVol(Γ^{k+1})
  Rational sum_cf;
  Integer lattice_size;
  Rational lhs, rhs;
  bool holds = false;
  bool equality = false;
  /// Whether the input polyhedra (or table) are all equal; unknown in abstract mode.
  std::optional<bool> all_equal;
  /// C = multinomial(n+r; k+1) is constant on K_{n,r}, forcing equality.
  bool c_constant = false;
  /// The same inequality through the corollary; absent when its hypotheses fail (abstract tables).
  std::optional<CorollaryPart1Report> corollary;
  std::string corollary_note;
  std::string mode;  ///< "geometric" or "abstract"
};

/// (Σ C)(Σ F) >= |K_{n,r}| Σ C F with C(k) = multinomial(n+r; k+1),
/// F(k) = coVol(Γ_1^{k_1+1}, ..., Γ_r^{k_r+1}); polyhedra in R^{n+r}.
DurfeeReport verify_durfee_inequality(const std::vector<NewtonPolyhedron>& polyhedra);
/// Abstract mode: `covol` is a table over K_{n+r,r}; validated complete and positive.
DurfeeReport verify_durfee_inequality(int n, int r, const MixedVolumeTable& covol);

struct JensenWitness {
  std::size_t instance = 0;
  std::vector<std::vector<std::vector<Rational>>> bodies;
  Rational lhs;  ///< V(A_1,A_2,A_3)^3
  Rational rhs;  ///< V(A_1,A_1,A_2) V(A_2,A_2,A_3) V(A_3,A_3,A_1)
};

struct JensenReport {
  std::size_t instances = 0;
  std::uint64_t seed = 0;
  std::size_t witnesses = 0;
  std::size_t equalities = 0;
  std::optional<JensenWitness> first;
};

/// Searches random triples of 3-polytopes for V(A_1,A_2,A_3)^3 < V(A_1,A_1,A_2) V(A_2,A_2,A_3) V(A_3,A_3,A_1).
JensenReport jensen_counterexample_search(std::size_t budget, std::uint64_t seed, unsigned threads = 0);
/// The same comparison on one table of three bodies in R^3: true when it is a counterexample.
bool jensen_violated(const MixedVolumeTable& table, Rational* lhs = nullptr, Rational* rhs = nullptr);

}  // namespace compfkg
