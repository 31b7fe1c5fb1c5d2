#include <doctest.h>

#include <algorithm>
#include <random>
#include <set>

#include "compfkg/errors.hpp"
#include "compfkg/lattice.hpp"

using namespace compfkg;

namespace {

// Independent oracle: all distinct permutations via std::next_permutation.
std::set<Composition> brute_orbit(const Composition& a) {
  auto p = a.parts();
  std::sort(p.begin(), p.end());
  std::set<Composition> out;
  do {
    out.insert(Composition(p));
  } while (std::next_permutation(p.begin(), p.end()));
  return out;
}

}  // namespace

TEST_CASE("enumerate_lattice: small cases") {
  auto k22 = enumerate_lattice(2, 2);
  REQUIRE(k22.size() == 3);
  CHECK(k22.at(0) == Composition{2, 0});
  CHECK(k22.at(1) == Composition{1, 1});
  CHECK(k22.at(2) == Composition{0, 2});
  CHECK(k22.geq({2, 0}, {1, 1}));
  CHECK(k22.geq({0, 2}, {1, 1}));
  CHECK_FALSE(k22.leq({2, 0}, {0, 2}));
  CHECK_FALSE(k22.leq({0, 2}, {2, 0}));

  CHECK(enumerate_lattice(6, 3).size() == 28);

  auto k51 = enumerate_lattice(5, 1);
  REQUIRE(k51.size() == 1);
  CHECK(k51.leq(0, 0));

  auto k03 = enumerate_lattice(0, 3);
  REQUIRE(k03.size() == 1);
  CHECK(k03.at(0) == Composition{0, 0, 0});
}

TEST_CASE("enumerate_lattice: errors") {
  CHECK_THROWS_AS(enumerate_lattice(3, 0), DomainError);
  CHECK_THROWS_AS(enumerate_lattice(-1, 2), DomainError);
  CHECK_THROWS_AS(enumerate_lattice(30, 6, 1000), CapExceeded);
  try {
    enumerate_lattice(30, 6, 1000);
  } catch (const CapExceeded& e) {
    CHECK(e.bound() == 1000);
    CHECK(std::string(e.what()).find("1000") != std::string::npos);
  }
}

TEST_CASE("enumeration is lexicographically descending and complete") {
  for (int r = 1; r <= 4; ++r) {
    for (int n = 0; n <= 7; ++n) {
      auto lat = enumerate_lattice(n, r);
      CHECK(std::is_sorted(lat.elements().begin(), lat.elements().end(), std::greater<>()));
      CHECK(Integer(static_cast<unsigned long>(lat.size())) == binomial(n + r - 1, n));
      std::set<Composition> uniq(lat.elements().begin(), lat.elements().end());
      CHECK(uniq.size() == lat.size());
    }
  }
}

TEST_CASE("leq: incomparable pairs and chains") {
  auto k63 = enumerate_lattice(6, 3);
  CHECK_FALSE(k63.leq({4, 1, 1}, {3, 3, 0}));
  CHECK_FALSE(k63.leq({3, 3, 0}, {4, 1, 1}));
  CHECK_THROWS_AS(k63.leq(Composition{4, 1}, Composition{3, 3, 0}), DomainError);
  CHECK_THROWS_AS(k63.leq(Composition{4, 1, 0}, Composition{3, 3, 0}), DomainError);

  for (int n = 1; n <= 9; ++n) {
    auto lat = enumerate_lattice(n, 2);
    for (int a = n; a > (n + 1) / 2; --a) CHECK(lat.geq({a, n - a}, {a - 1, n - a + 1}));
  }
}

TEST_CASE("order is a Ξ_r-equivariant partial order") {
  for (int r = 1; r <= 4; ++r) {
    for (int n = 0; n <= 6; ++n) {
      auto lat = enumerate_lattice(n, r);
      const auto m = lat.size();
      for (std::size_t a = 0; a < m; ++a) {
        CHECK(lat.leq(a, a));
        for (std::size_t b = 0; b < m; ++b) {
          if (a != b && lat.leq(a, b)) CHECK_FALSE(lat.leq(b, a));
          if (!lat.leq(a, b)) continue;
          for (std::size_t c = 0; c < m; ++c) {
            if (lat.leq(b, c)) CHECK(lat.leq(a, c));
          }
        }
      }
      // Equivariance under every permutation of coordinates.
      std::vector<int> sigma(static_cast<std::size_t>(r));
      std::iota(sigma.begin(), sigma.end(), 0);
      do {
        auto apply = [&](const Composition& k) {
          std::vector<int> p(k.parts().size());
          for (std::size_t i = 0; i < p.size(); ++i) p[i] = k[static_cast<std::size_t>(sigma[i])];
          return lat.index_of(Composition(p));
        };
        for (std::size_t a = 0; a < m; ++a) {
          for (std::size_t b = 0; b < m; ++b) {
            CHECK(lat.leq(a, b) == lat.leq(apply(lat.at(a)), apply(lat.at(b))));
          }
        }
      } while (std::next_permutation(sigma.begin(), sigma.end()));
    }
  }
}

TEST_CASE("orbit matches brute-force permutation enumeration") {
  auto k22 = enumerate_lattice(2, 2);
  CHECK(k22.orbit({1, 1}).size() == 1);
  CHECK(k22.orbit({2, 0}).size() == 2);
  auto k63 = enumerate_lattice(6, 3);
  CHECK(k63.orbit({4, 1, 1}).size() == 3);
  for (const auto& e : k63.elements()) {
    auto orb = k63.orbit(e);
    std::set<Composition> got(orb.begin(), orb.end());
    CHECK(got == brute_orbit(e));
    CHECK(Integer(static_cast<unsigned long>(got.size())) == orbit_size(e));
    for (const auto& o : got) {
      if (o != e) CHECK_FALSE(k63.comparable(k63.index_of(o), k63.index_of(e)));
    }
  }
  CHECK_THROWS_AS(k63.orbit({7, 0, 0}), DomainError);
}

TEST_CASE("covers form the transitive reduction") {
  auto lat = enumerate_lattice(5, 3);
  auto covers = lat.covers();
  for (const auto& [hi, lo] : covers) {
    CHECK(lat.leq(lo, hi));
    for (std::size_t mid = 0; mid < lat.size(); ++mid) {
      if (mid != lo && mid != hi) CHECK_FALSE((lat.leq(lo, mid) && lat.leq(mid, hi)));
    }
  }
  auto k22 = enumerate_lattice(2, 2);
  CHECK(k22.covers().size() == 2);
}

TEST_CASE("quotient: chains, extremes, Young lattice") {
  for (int n = 0; n <= 12; ++n) {
    QuotientPoset q(enumerate_lattice(n, 2));
    CHECK(q.size() == static_cast<std::size_t>(n / 2 + 1));
    for (std::size_t a = 0; a < q.size(); ++a) {
      for (std::size_t b = 0; b < q.size(); ++b) CHECK((q.leq(a, b) || q.leq(b, a)));
    }
  }
  for (int n = 1; n <= 7; ++n) {
    auto lat = enumerate_lattice(n, n);
    QuotientPoset q(lat);
    CHECK(q.classes() == partitions(n, n));
    CHECK_FALSE(q.dominance_mismatch().has_value());
    std::vector<int> top(static_cast<std::size_t>(n), 0);
    top[0] = n;
    CHECK(q.classes()[q.top()] == Composition(top));
    CHECK(q.classes()[q.bottom()] == Composition(std::vector<int>(static_cast<std::size_t>(n), 1)));
    Integer total = 0;
    for (std::size_t c = 0; c < q.size(); ++c) total += q.orbit_size(c);
    CHECK(total == binomial(2 * n - 1, n));
  }
}

TEST_CASE("quotient order equals the representative-induced relation") {
  auto lat = enumerate_lattice(6, 4);
  QuotientPoset q(lat);
  for (std::size_t a = 0; a < q.size(); ++a) {
    for (std::size_t b = 0; b < q.size(); ++b) {
      bool any = false;
      for (std::size_t x : lat.class_members()[a]) {
        for (std::size_t y : lat.class_members()[b]) any = any || lat.leq(x, y);
      }
      CHECK(q.leq(a, b) == any);
    }
  }
}

TEST_CASE("meet and join") {
  QuotientPoset q(enumerate_lattice(6, 3));
  CHECK(q.size() == 7);
  auto a = q.index_of({4, 1, 1});
  auto b = q.index_of({3, 3, 0});
  CHECK(q.classes()[q.join(a, b)] == Composition{4, 2, 0});
  for (std::size_t x = 0; x < q.size(); ++x) {
    CHECK(q.meet(x, x) == x);
    CHECK(q.join(x, x) == x);
    CHECK(q.meet(q.top(), x) == x);
    CHECK(q.join(q.bottom(), x) == x);
  }
  CHECK_THROWS_AS(q.meet(0, 99), DomainError);
}

TEST_CASE("strata sizes and edge cases") {
  auto k63 = enumerate_lattice(6, 3);
  CHECK(k63.stratum(1).size() == 15);
  CHECK(k63.stratum(0).size() == 10);
  CHECK(k63.stratum(2).size() == 3);
  CHECK(enumerate_lattice(2, 3).stratum(0).empty());
  CHECK_THROWS_AS(k63.stratum(3), DomainError);
  CHECK_THROWS_AS(k63.stratum(-1), DomainError);
  for (int r = 1; r <= 5; ++r) {
    for (int n = 1; n <= 8; ++n) CHECK(enumerate_lattice(n, r).stratum(r - 1).size() == static_cast<std::size_t>(r));
  }
}

TEST_CASE("stratum isomorphisms") {
  auto iso = stratum_iso(enumerate_lattice(6, 3));
  CHECK(iso.bijective);
  CHECK(iso.interior.size() == 10);
  CHECK(enumerate_lattice(3, 3).size() == 10);
  auto rr = stratum_iso(enumerate_lattice(4, 4));
  CHECK(rr.bijective);
  REQUIRE(rr.interior.size() == 1);
  CHECK(rr.interior[0].second == Composition{0, 0, 0, 0});
  auto empty = stratum_iso(enumerate_lattice(2, 3));
  CHECK(empty.bijective);
  CHECK(empty.interior.empty());
  for (int r = 2; r <= 4; ++r) {
    for (int n = r; n <= 8; ++n) {
      auto lat = enumerate_lattice(n, r);
      CHECK(stratum_iso(lat).bijective);
      for (int s = 0; s < r; ++s) {
        CHECK(Integer(static_cast<unsigned long>(lat.stratum(s).size())) ==
              binomial(r, s) * Integer(static_cast<unsigned long>(enumerate_lattice(n - r + s, r - s).size())));
      }
    }
  }
}

TEST_CASE("inclusion-exclusion") {
  auto k63 = enumerate_lattice(6, 3);
  std::vector<Rational> ones(k63.size(), Rational(1));
  auto res = inclusion_exclusion_check(k63, ones);
  CHECK(res.holds);
  CHECK(res.positive_part_sum == 10);

  auto k41 = enumerate_lattice(4, 1);
  CHECK(inclusion_exclusion_check(k41, {Rational(7, 3)}).holds);

  std::mt19937_64 rng(11);
  auto k53 = enumerate_lattice(5, 3);
  for (int trial = 0; trial < 20; ++trial) {
    std::vector<Rational> values;
    for (std::size_t i = 0; i < k53.size(); ++i) values.emplace_back(static_cast<long>(rng() % 100));
    CHECK(inclusion_exclusion_check(k53, values).holds);
  }
  CHECK_THROWS_AS(inclusion_exclusion_check(k53, ones), DomainError);
}

TEST_CASE("dot export") {
  auto dot = to_dot(enumerate_lattice(2, 2));
  CHECK(std::count(dot.begin(), dot.end(), '>') == 2);
  CHECK(dot.find("(1,1)") != std::string::npos);
}

namespace {

// Oracle: dominance by partial sums, bounds by brute force.
bool dom_ge(const std::vector<int>& a, const std::vector<int>& b) {
  int sa = 0, sb = 0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    sa += a[i];
    sb += b[i];
    if (sa < sb) return false;
  }
  return true;
}

}  // namespace

TEST_CASE("pentagon in K_{7,5} modulo permutations is a non-distributive sublattice") {
  auto lat = enumerate_lattice(7, 5);
  QuotientPoset q(lat);
  std::vector<std::vector<int>> five{{4, 2, 1, 0, 0}, {4, 1, 1, 1, 0}, {3, 3, 1, 0, 0}, {3, 2, 2, 0, 0}, {3, 2, 1, 1, 0}};
  std::vector<std::size_t> idx;
  for (const auto& p : five) idx.push_back(q.index_of(Composition(p)));

  auto glb = [&](const std::vector<int>& a, const std::vector<int>& b) {
    std::vector<std::vector<int>> lower;
    for (const auto& c : q.classes()) {
      if (dom_ge(a, c.parts()) && dom_ge(b, c.parts())) lower.push_back(c.parts());
    }
    std::vector<std::vector<int>> best;
    for (const auto& c : lower) {
      if (std::all_of(lower.begin(), lower.end(), [&](const auto& d) { return dom_ge(c, d); })) best.push_back(c);
    }
    REQUIRE(best.size() == 1);
    return best[0];
  };
  auto lub = [&](const std::vector<int>& a, const std::vector<int>& b) {
    std::vector<std::vector<int>> upper;
    for (const auto& c : q.classes()) {
      if (dom_ge(c.parts(), a) && dom_ge(c.parts(), b)) upper.push_back(c.parts());
    }
    std::vector<std::vector<int>> best;
    for (const auto& c : upper) {
      if (std::all_of(upper.begin(), upper.end(), [&](const auto& d) { return dom_ge(d, c); })) best.push_back(c);
    }
    REQUIRE(best.size() == 1);
    return best[0];
  };
  // Pentagon shape: top (4,2,1), bottom (3,2,1,1), chain (3,3,1) > (3,2,2), side (4,1,1,1).
  CHECK(lub(five[1], five[3]) == five[0]);
  CHECK(glb(five[1], five[2]) == five[4]);
  CHECK(dom_ge(five[2], five[3]));
  CHECK_FALSE(dom_ge(five[1], five[2]));
  CHECK_FALSE(dom_ge(five[2], five[1]));
  for (std::size_t a = 0; a < 5; ++a) {
    for (std::size_t b = 0; b < 5; ++b) {
      CHECK(q.classes()[q.meet(idx[a], idx[b])].parts() == glb(five[a], five[b]));
      CHECK(q.classes()[q.join(idx[a], idx[b])].parts() == lub(five[a], five[b]));
    }
  }
  auto rep = check_sublattice(q, idx);
  CHECK(rep.closed);
  CHECK_FALSE(rep.distributive);
  REQUIRE(rep.witness);
  CHECK_FALSE(check_distributive(q).distributive);

  // Below n = 7 the quotient is distributive; chains always are.
  CHECK(check_distributive(QuotientPoset(enumerate_lattice(6, 6))).distributive);
  CHECK(check_distributive(QuotientPoset(enumerate_lattice(9, 2))).distributive);
  // A set that is not closed reports the escaping pair.
  auto open = check_sublattice(q, {idx[1], idx[2]});
  CHECK_FALSE(open.closed);
  CHECK(open.escape.has_value());
}
