#pragma once

// Exact volumes, Minkowski sums, mixed volumes of rational polytopes and
// covolumes / mixed covolumes of convenient Newton polyhedra, dimension <= 3.
//
// Coordinates are brought to a common denominator and handled as int64 with
// __int128 predicates; scaled coordinates must stay below 2^40 in magnitude.

#include <array>
#include <cstdint>
#include <optional>
#include <vector>

#include "compfkg/lattice.hpp"
#include "compfkg/random.hpp"
#include "compfkg/rational.hpp"

namespace compfkg {

inline constexpr int kMaxGeometryDim = 3;
inline constexpr std::int64_t kCoordinateLimit = std::int64_t{1} << 40;

using IntPoint = std::array<std::int64_t, 3>;

/// Convex hull of finitely many rational points in R^N, N <= 3. Need not be
/// full-dimensional.
class RationalPolytope {
 public:
  RationalPolytope(int dim, const std::vector<std::vector<Rational>>& points);
  /// Integer points over a common denominator (already scaled).
  RationalPolytope(int dim, std::vector<IntPoint> points, const Integer& denominator);
  static RationalPolytope origin(int dim);

  int dim() const { return dim_; }
  /// Hull vertices, lexicographically sorted.
  std::vector<std::vector<Rational>> vertices() const;
  std::size_t vertex_count() const { return points_.size(); }
  int affine_dim() const { return affine_dim_; }
  const std::vector<IntPoint>& scaled_points() const { return points_; }
  const Integer& denominator() const { return den_; }

  RationalPolytope scaled(const Rational& t) const;
  RationalPolytope translated(const std::vector<Rational>& v) const;

  friend bool operator==(const RationalPolytope& a, const RationalPolytope& b) {
    return a.dim_ == b.dim_ && a.den_ == b.den_ && a.points_ == b.points_;
  }

 private:
  int dim_;
  Integer den_;
  std::vector<IntPoint> points_;
  int affine_dim_ = 0;
  Integer scaled_volume_;  // N! Vol · den^N
  friend Rational volume(const RationalPolytope& p);
};

Rational volume(const RationalPolytope& p);
RationalPolytope minkowski_sum(const RationalPolytope& p, const RationalPolytope& q);
/// Vol_N(Σ λ_i A_i) for non-negative integer λ.
Rational combination_volume(const std::vector<RationalPolytope>& bodies, const std::vector<long>& lambda);

/// Γ+ = conv(generators) + R^N_{>=0} with integer generators >= 0; convenient.
class NewtonPolyhedron {
 public:
  NewtonPolyhedron(int dim, const std::vector<std::vector<long>>& generators);

  int dim() const { return dim_; }
  /// Generators as given (deduplicated, sorted).
  const std::vector<std::vector<long>>& generators() const { return generators_; }
  /// Vertices of Γ+, sorted.
  std::vector<std::vector<long>> vertices() const;
  long max_coordinate() const;
  NewtonPolyhedron scaled(long d) const;
  const std::vector<IntPoint>& reduced_points() const { return reduced_; }

 private:
  int dim_;
  std::vector<std::vector<long>> generators_;
  std::vector<IntPoint> reduced_;
};

/// Γ+ + Δ+: generators are the pairwise sums.
NewtonPolyhedron minkowski_sum(const NewtonPolyhedron& a, const NewtonPolyhedron& b);

/// Vol_N(R^N_{>=0} \ Γ+) = M^N - Vol_N(Γ+ ∩ [0,M]^N); M defaults to N · max coordinate.
Rational covolume(const NewtonPolyhedron& g, std::optional<long> box = std::nullopt);
/// coVol_N(Σ λ_i Γ+_i) for positive integer λ.
Rational combination_covolume(const std::vector<NewtonPolyhedron>& polyhedra, const std::vector<long>& lambda);

/// Coefficients under Vol_N(Σλ_iA_i) = Σ_k multinomial(N;k) V(A^k) λ^k.
class MixedVolumeTable {
 public:
  MixedVolumeTable(int dim, int bodies, std::vector<Rational> values);

  int dim() const { return dim_; }
  int bodies() const { return lattice_->r(); }
  const CompositionLattice& keys() const { return *lattice_; }
  const LatticePtr& lattice() const { return lattice_; }
  const std::vector<Rational>& values() const { return values_; }
  const Rational& at(const Composition& k) const { return values_[lattice_->index_of(k)]; }
  /// Σ_k multinomial(N;k) V_k λ^k
  Rational evaluate(const std::vector<Rational>& lambda) const;

 private:
  int dim_;
  LatticePtr lattice_;
  std::vector<Rational> values_;
};

/// Exact interpolation on the grid λ = (1+a_1, ..., 1+a_{r-1}, 1), |a| <= N,
/// checked against one extra evaluation; StructuralError if that check fails.
MixedVolumeTable mixed_volumes(const std::vector<RationalPolytope>& bodies);
MixedVolumeTable mixed_covolumes(const std::vector<NewtonPolyhedron>& polyhedra);

/// V(A_1, ..., A_N) = (1/N!) Σ_{S≠∅} (-1)^{N-|S|} Vol_N(Σ_{i∈S} A_i); exactly N bodies.
Rational mixed_volume_polarization(const std::vector<RationalPolytope>& bodies);

/// V of N bodies taken once each.
Rational mixed_volume(const std::vector<RationalPolytope>& bodies);
Rational mixed_covolume(const std::vector<NewtonPolyhedron>& polyhedra);

struct MultilinearityReport {
  Rational sum_value;     ///< V(A_11 + A_12, A_2, ...)
  Rational first_value;   ///< V(A_11, A_2, ...)
  Rational second_value;  ///< V(A_12, A_2, ...)
  bool holds = false;
};

/// `rest` holds the remaining N-1 bodies.
MultilinearityReport multilinearity_check(const RationalPolytope& a11, const RationalPolytope& a12,
                                          const std::vector<RationalPolytope>& rest);
MultilinearityReport multilinearity_check(const NewtonPolyhedron& g11, const NewtonPolyhedron& g12,
                                          const std::vector<NewtonPolyhedron>& rest);

struct QuadraticReport {
  Rational mixed;  ///< V(A_1, A_2, A_3, ...)
  Rational lhs;    ///< mixed^2
  Rational rhs;    ///< V(A_1, A_1, A_3, ...) V(A_2, A_2, A_3, ...)
  bool holds = false;
  bool equality = false;
};

/// Alexandrov-Fenchel: lhs >= rhs. Exactly N >= 2 bodies.
QuadraticReport verify_af(const std::vector<RationalPolytope>& bodies);
/// Reverse inequality for mixed covolumes: lhs <= rhs. Exactly N >= 2 polyhedra.
QuadraticReport verify_teissier(const std::vector<NewtonPolyhedron>& polyhedra);

inline constexpr long kDefaultCoordinateBound = 6;

/// Full-dimensional polytope with `points` vertices drawn from {0..bound}^N (rejection).
RationalPolytope random_polytope(Rng& rng, int dim, long bound = kDefaultCoordinateBound, int points = 5);
/// Axis generators m_i e_i with m_i in [1, bound] plus `extra` points of {0..bound}^N.
NewtonPolyhedron random_newton(Rng& rng, int dim, long bound = kDefaultCoordinateBound, int extra = 3);

}  // namespace compfkg
