#include <doctest.h>

#include <algorithm>

#include "compfkg/errors.hpp"
#include "compfkg/inequalities.hpp"
#include "compfkg/random.hpp"

using namespace compfkg;

namespace {

Rational q(long a, long b = 1) {
  Rational x(a, b);
  x.canonicalize();
  return x;
}

RationalPolytope poly(const std::vector<std::vector<long>>& pts) {
  std::vector<std::vector<Rational>> r;
  for (const auto& p : pts) {
    std::vector<Rational> v;
    for (long c : p) v.emplace_back(c);
    r.push_back(v);
  }
  return RationalPolytope(3, r);
}

RationalPolytope cube(long s) {
  return poly({{0, 0, 0}, {s, 0, 0}, {0, s, 0}, {0, 0, s}, {s, s, 0}, {s, 0, s}, {0, s, s}, {s, s, s}});
}

// Independent mixed volumes through polarization, with bodies repeated by multiplicity.
Rational pol(const std::vector<RationalPolytope>& b, std::vector<int> k) {
  std::vector<RationalPolytope> list;
  for (std::size_t i = 0; i < k.size(); ++i) {
    for (int j = 0; j < k[i]; ++j) list.push_back(b[i]);
  }
  return mixed_volume_polarization(list);
}

Integer fact(long n) {
  Integer f = 1;
  for (long i = 2; i <= n; ++i) f *= i;
  return f;
}

std::vector<RationalPolytope> random_triple(std::uint64_t seed) {
  Rng rng(seed);
  std::vector<RationalPolytope> b;
  for (int i = 0; i < 3; ++i) b.push_back(random_polytope(rng, 3, 4, 5));
  return b;
}

MixFunctionSpec volume_spec(const std::vector<RationalPolytope>& bodies, int r) {
  MixFunctionSpec s;
  s.outer_n = 3;
  s.outer_r = static_cast<int>(bodies.size());
  s.r = r;
  s.kind = MixKind::Volume;
  s.bodies = bodies;
  return s;
}

MixFunctionSpec covolume_spec(const std::vector<NewtonPolyhedron>& p, int r) {
  MixFunctionSpec s;
  s.outer_n = p.front().dim();
  s.outer_r = static_cast<int>(p.size());
  s.r = r;
  s.kind = MixKind::Covolume;
  s.polyhedra = p;
  return s;
}

}  // namespace

TEST_CASE("mix function agrees with polarization lookups") {
  auto bodies = random_triple(11);
  auto f = mix_vol_function(volume_spec(bodies, 3));
  CHECK(f.lattice_ptr()->n() == 3);
  for (const auto& k : f.lattice_ptr()->elements()) CHECK(f(k) == pol(bodies, k.parts()));

  // r = 2 inside r' = 3: third body is padded once, n = 2.
  auto g = mix_vol_function(volume_spec(bodies, 2));
  CHECK(g.lattice_ptr()->n() == 2);
  CHECK(g(Composition{1, 1}) == pol(bodies, {1, 1, 1}));
  CHECK(g(Composition{2, 0}) == pol(bodies, {2, 0, 1}));
  CHECK(g(Composition{0, 2}) == pol(bodies, {0, 2, 1}));
}

TEST_CASE("mix function: equal bodies give a constant, scaled bodies give products of powers") {
  auto a = random_triple(5)[0];
  auto f = mix_vol_function(volume_spec({a, a, a}, 3));
  CHECK(f.is_constant());
  CHECK(f[0] == volume(a));

  auto g = mix_vol_function(volume_spec({a, a.scaled(2), a.scaled(3)}, 3));
  for (const auto& k : g.lattice_ptr()->elements()) {
    Rational expect = volume(a);
    for (int i = 0; i < k[1]; ++i) expect *= 2;
    for (int i = 0; i < k[2]; ++i) expect *= 3;
    CHECK(g(k) == expect);
  }
}

TEST_CASE("spec validation") {
  auto b = random_triple(3);
  auto s = volume_spec(b, 4);
  CHECK_THROWS_AS(validate(s), DomainError);
  s = volume_spec({b[0], b[1]}, 2);
  s.outer_r = 3;
  CHECK_THROWS_AS(validate(s), DomainError);
  CHECK_THROWS_AS(mix_covol_function(volume_spec(b, 3)), DomainError);
}

TEST_CASE("symmetrized Mix.coVol is monotone and weakly convex on random polyhedra") {
  Rng rng(2024);
  for (int t = 0; t < 6; ++t) {
    std::vector<NewtonPolyhedron> p;
    for (int i = 0; i < 2; ++i) p.push_back(random_newton(rng, 2, 5, 2));
    auto rep = verify_symmetrized_monotone(covolume_spec(p, 2));
    CHECK(rep.monotone);
    CHECK(rep.convexity_checked == 1);
    CHECK(rep.convexity_violations == 0);
    CHECK(rep.holds());
  }
  for (int t = 0; t < 2; ++t) {
    std::vector<NewtonPolyhedron> p;
    for (int i = 0; i < 3; ++i) p.push_back(random_newton(rng, 3, 3, 1));
    auto rep = verify_symmetrized_monotone(covolume_spec(p, 3));
    CHECK(rep.holds());
    // K_{3,3}: pairs with both coordinates >= 1 at (2,1,0)-type and (1,1,1).
    CHECK(rep.convexity_checked == 9);
  }
}

TEST_CASE("symmetrized monotone flags an abstract table that decreases") {
  // K_{2,2} outer; values decreasing toward the top.
  MixFunctionSpec s;
  s.outer_n = 2;
  s.outer_r = 2;
  s.r = 2;
  s.table = MixedVolumeTable(2, 2, {q(1), q(5), q(1)});
  auto rep = verify_symmetrized_monotone(s);
  CHECK_FALSE(rep.monotone);
  REQUIRE(rep.monotone_witness);
  CHECK(rep.convexity_violations == 1);
  CHECK(rep.convexity_witness.has_value());
}

TEST_CASE("corollary part 1: constant C gives equality, multinomial C detected") {
  Rng rng(7);
  std::vector<NewtonPolyhedron> p{random_newton(rng, 2, 5, 2), random_newton(rng, 2, 5, 2)};
  auto spec = covolume_spec(p, 2);
  auto f = mix_function(spec);
  auto lat = f.lattice_ptr();

  auto rep = verify_corollary_part1(spec, LatticeFunction::constant(lat, q(3)));
  CHECK(rep.equality);
  CHECK(rep.symbolic_equality);
  CHECK(rep.paths_agree);

  auto c = LatticeFunction::from(lat, [](const Composition& k) {
    std::vector<int> up(k.parts());
    for (int& x : up) ++x;
    return Rational(multinomial(4, up));
  });
  auto rep2 = verify_corollary_part1(spec, c);
  CHECK(rep2.c_direction == "non-increasing");
  CHECK(rep2.f_direction != "non-increasing");
  CHECK(rep2.holds);
  CHECK(rep2.paths_agree);
  // Oracle: |K| Σ CF <= Σ C Σ F for opposite directions.
  Rational sc = 0, sf = 0, scf = 0;
  for (std::size_t i = 0; i < lat->size(); ++i) {
    sc += c[i];
    sf += f[i];
    scf += c[i] * f[i];
  }
  CHECK(Rational(static_cast<unsigned long>(lat->size())) * scf <= sc * sf);

  auto bad = LatticeFunction::from(lat, [](const Composition& k) { return q(k[0]); });
  CHECK_THROWS_AS(verify_corollary_part1(spec, bad), PreconditionError);
}

TEST_CASE("corollary part 2 on covolumes and volumes") {
  Rng rng(99);
  for (int t = 0; t < 4; ++t) {
    std::vector<NewtonPolyhedron> p{random_newton(rng, 2, 5, 2), random_newton(rng, 2, 5, 2)};
    auto spec = covolume_spec(p, 2);
    auto lat = mix_function(spec).lattice_ptr();
    auto cmax = LatticeFunction::from(lat, [](const Composition& k) { return q(*std::max_element(k.parts().begin(), k.parts().end())); });
    auto rep = verify_corollary_part2(spec, cmax, true);
    CHECK(rep.expected_sign == 1);
    CHECK((rep.status == "holds" || rep.status == "equal"));
  }
  auto bodies = random_triple(31);
  auto rep = verify_corollary_part2(volume_spec(bodies, 3), exponent_weight(3, 2, 1), true);
  CHECK(rep.expected_sign == -1);
  CHECK(rep.status == "holds");

  auto lat = make_lattice(3, 3);
  auto rep2 = verify_corollary_part2(volume_spec(bodies, 3), LatticeFunction::constant(lat, q(2)), true);
  CHECK(rep2.symbolic_equality);
  CHECK(rep2.status == "equal");
}

TEST_CASE("corollary part 2 rescaling") {
  auto small = std::vector<RationalPolytope>{cube(1).scaled(q(1, 3)), cube(1).scaled(q(1, 2)), cube(1)};
  auto spec = volume_spec(small, 3);
  auto c = exponent_weight(5, 1, 0);
  CHECK_THROWS_AS(verify_corollary_part2(spec, c, false), DomainError);
  auto rep = verify_corollary_part2(spec, c, true);
  // min value 1/27 needs t^3 >= 27.
  CHECK(rep.rescale == 3);
  // Scaled cubes: the log symmetrization is constant, so equality is symbolic.
  CHECK(rep.symbolic_equality);
  CHECK(rep.status == "equal");
}

TEST_CASE("exponent inequality") {
  auto bodies = random_triple(17);
  for (auto [a, b, c] : std::vector<std::array<long, 3>>{{1, 0, 0}, {1, 1, 0}, {2, 1, 0}, {3, 2, 1}, {5, 5, 5}, {4, 1, 1}}) {
    auto rep = verify_exponent_inequality(bodies, a, b, c);
    CHECK(rep.e_mixed == 3 * a + 6 * b - 9 * c);
    CHECK(rep.e_pure == 7 * a - 6 * b - c);
    CHECK(rep.e_pair == 4 * b - 3 * a - c);
    CHECK(rep.holds);
    CHECK(rep.matches_corollary);
    // Oracle for the inputs.
    CHECK(rep.v111 == pol(bodies, {1, 1, 1}));
    CHECK(rep.p3 == volume(bodies[0]) * volume(bodies[1]) * volume(bodies[2]));
  }
  auto a = bodies[0];
  for (const auto& trip : {std::vector<RationalPolytope>{a, a, a}, std::vector<RationalPolytope>{a, a.scaled(2), a.scaled(q(3, 2))}}) {
    auto rep = verify_exponent_inequality(trip, 3, 2, 1);
    CHECK(rep.equality);
    CHECK(rep.matches_corollary);
  }
  CHECK_THROWS_AS(verify_exponent_inequality(bodies, 1, 2, 0), DomainError);
}

TEST_CASE("product inequality") {
  for (std::uint64_t seed : {1u, 2u, 3u}) {
    auto bodies = random_triple(seed);
    auto rep = verify_product_inequality(bodies);
    Rational v = pol(bodies, {1, 1, 1});
    CHECK(rep.lhs == v * v * v * v * v * v);
    Rational rhs = pol(bodies, {2, 1, 0}) * pol(bodies, {2, 0, 1}) * pol(bodies, {1, 2, 0}) * pol(bodies, {0, 2, 1}) *
                   pol(bodies, {1, 0, 2}) * pol(bodies, {0, 1, 2});
    CHECK(rep.rhs == rhs);
    CHECK(rep.holds);
    CHECK(rep.factorization_matches);
    CHECK(rep.af.size() == 3);
    for (const auto& af : rep.af) CHECK(af.holds);
  }
  auto a = random_triple(8)[1];
  CHECK(verify_product_inequality({a, a, a}).equality);
  CHECK(verify_product_inequality({a, a.scaled(3), a.scaled(q(1, 2))}).equality);
}

TEST_CASE("Durfee inequality on Newton polyhedra") {
  NewtonPolyhedron g(2, {{3, 0}, {1, 1}, {0, 2}});
  auto eq = verify_durfee_inequality({g, g});
  CHECK(eq.mode == "geometric");
  CHECK(eq.all_equal == true);
  CHECK(eq.equality);

  // r = 1: one element, trivially equal.
  NewtonPolyhedron h(3, {{2, 0, 0}, {0, 3, 0}, {0, 0, 1}});
  auto one = verify_durfee_inequality({h});
  CHECK(one.lattice_size == 1);
  CHECK(one.equality);

  // (n, r) = (1, 2): C is constant, equality for every input.
  Rng rng(5);
  for (int t = 0; t < 3; ++t) {
    std::vector<NewtonPolyhedron> p{random_newton(rng, 3, 3, 1), random_newton(rng, 3, 3, 1)};
    auto rep = verify_durfee_inequality(p);
    CHECK(rep.n == 1);
    CHECK(rep.c_constant);
    CHECK(rep.equality);
  }

  // (n, r) = (2, 2) in R^4 is out of geometric range; (0, 2) in R^2.
  std::vector<NewtonPolyhedron> p{random_newton(rng, 2, 5, 2), random_newton(rng, 2, 5, 2)};
  auto rep = verify_durfee_inequality(p);
  CHECK(rep.n == 0);
  CHECK(rep.lattice_size == 1);
  CHECK(rep.equality);
}

TEST_CASE("Durfee inequality, abstract d-scaling family") {
  // F(k) = Π d_i^{k_i+1}, table over K_{n+r,r}.
  for (auto [n, r] : std::vector<std::pair<int, int>>{{2, 2}, {3, 2}, {2, 3}, {4, 3}}) {
    std::vector<long> d{1, 2, 3};
    auto keys = make_lattice(n + r, r);
    std::vector<Rational> vals;
    for (const auto& k : keys->elements()) {
      Rational v = 1;
      for (int i = 0; i < r; ++i) v *= pow(Rational(d[static_cast<std::size_t>(i)]), static_cast<unsigned long>(k[i]));
      vals.push_back(v);
    }
    auto rep = verify_durfee_inequality(n, r, MixedVolumeTable(n + r, r, vals));
    CHECK(rep.mode == "abstract");
    CHECK_FALSE(rep.all_equal.has_value());
    CHECK(rep.holds);
    CHECK_FALSE(rep.equality);
    REQUIRE(rep.corollary.has_value());
    CHECK(rep.corollary->paths_agree);

    // Oracle: direct sums with factorial multinomials.
    auto lat = make_lattice(n, r);
    Rational sc = 0, sf = 0, scf = 0;
    for (const auto& k : lat->elements()) {
      Integer den = 1;
      Rational f = 1;
      for (int i = 0; i < r; ++i) {
        den *= fact(k[i] + 1);
        f *= pow(Rational(d[static_cast<std::size_t>(i)]), static_cast<unsigned long>(k[i] + 1));
      }
      Rational c(fact(n + r), den);
      c.canonicalize();
      sc += c;
      sf += f;
      scf += c * f;
    }
    CHECK(rep.lhs == sc * sf);
    CHECK(rep.rhs == Rational(static_cast<unsigned long>(lat->size())) * scf);
  }
  CHECK_THROWS_AS(verify_durfee_inequality(2, 2, MixedVolumeTable(4, 2, {q(1), q(0), q(1), q(1), q(1)})), DomainError);
  CHECK_THROWS_AS(verify_durfee_inequality(2, 2, MixedVolumeTable(3, 2, {q(1), q(1), q(1), q(1)})), DomainError);
}

TEST_CASE("Jensen-type comparison") {
  auto a = random_triple(4)[2];
  Rational l, r;
  CHECK_FALSE(jensen_violated(mixed_volumes({a, a, a}), &l, &r));
  CHECK(l == r);
  CHECK_FALSE(jensen_violated(mixed_volumes({a, a.scaled(2), a.scaled(5)}), &l, &r));
  CHECK(l == r);

  auto rep = jensen_counterexample_search(40, 123, 4);
  auto again = jensen_counterexample_search(40, 123, 1);
  CHECK(rep.instances == 40);
  CHECK(rep.witnesses == again.witnesses);
  CHECK(rep.equalities == again.equalities);
  CHECK(rep.first.has_value() == again.first.has_value());
  if (rep.first) {
    CHECK(rep.first->instance == again.first->instance);
    std::vector<RationalPolytope> b;
    for (const auto& pts : rep.first->bodies) b.emplace_back(3, pts);
    Rational v = pol(b, {1, 1, 1});
    CHECK(rep.first->lhs == v * v * v);
    CHECK(rep.first->rhs == pol(b, {2, 1, 0}) * pol(b, {0, 2, 1}) * pol(b, {1, 0, 2}));
    CHECK(rep.first->lhs < rep.first->rhs);
  }
}

TEST_CASE("r = 1 is degenerate: every corollary check is an equality") {
  Rng rng(5);
  std::vector<NewtonPolyhedron> p{random_newton(rng, 2, 5, 2), random_newton(rng, 2, 5, 2)};
  auto spec = covolume_spec(p, 1);
  auto lat = mix_function(spec).lattice_ptr();
  CHECK(lat->size() == 1);
  auto c = LatticeFunction::constant(lat, q(4));
  auto one = verify_corollary_part1(spec, c);
  CHECK(one.equality);
  CHECK(one.symbolic_equality);
  auto two = verify_corollary_part2(spec, c, true);
  CHECK(two.status == "equal");
}

TEST_CASE("r = 2 part 2 with max-part C is the Teissier inequality in log form") {
  // On K_{2,2}: D = ln a + ln b - 2 ln m with a, m, b the covolume table.
  Rng rng(17);
  for (int t = 0; t < 8; ++t) {
    std::vector<NewtonPolyhedron> p{random_newton(rng, 2, 5, 2), random_newton(rng, 2, 5, 2)};
    auto spec = covolume_spec(p, 2);
    auto lat = mix_function(spec).lattice_ptr();
    auto cmax = LatticeFunction::from(lat, [](const Composition& k) { return q(*std::max_element(k.parts().begin(), k.parts().end())); });
    auto rep = verify_corollary_part2(spec, cmax, true);
    auto te = verify_teissier(p);
    const Rational diff = te.rhs - te.lhs;
    CHECK(te.holds);
    if (diff > 0) {
      CHECK(rep.log_gap.sign == 1);
      CHECK(rep.status == "holds");
    } else {
      CHECK(rep.log_gap.sign != -1);
    }
  }
}
