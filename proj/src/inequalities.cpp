#include "compfkg/inequalities.hpp"

#include <algorithm>
#include <atomic>
#include <mutex>
#include <thread>

#include "compfkg/errors.hpp"

namespace compfkg {

void validate(const MixFunctionSpec& spec) {
  if (spec.r < 1 || spec.r > spec.outer_r) {
    throw DomainError("need 1 <= r <= r', got r = " + std::to_string(spec.r) + ", r' = " + std::to_string(spec.outer_r));
  }
  if (spec.n() < 0) throw DomainError("n = n' + r - r' must be non-negative");
  if (spec.table) {
    if (spec.table->dim() != spec.outer_n || spec.table->bodies() != spec.outer_r) {
      throw DomainError("abstract table does not match (n', r')");
    }
    for (const auto& v : spec.table->values()) {
      if (sgn(v) < 0) throw DomainError("abstract table has a negative value");
    }
    return;
  }
  if (spec.outer_n < 1 || spec.outer_n > kMaxGeometryDim) {
    throw DomainError("geometric mode needs n' in 1..3; supply an abstract table for larger n'");
  }
  if (spec.kind == MixKind::Volume) {
    if (static_cast<int>(spec.bodies.size()) != spec.outer_r) throw DomainError("need exactly r' bodies");
    for (const auto& b : spec.bodies) {
      if (b.dim() != spec.outer_n) throw DomainError("body dimension must equal n'");
    }
  } else {
    if (static_cast<int>(spec.polyhedra.size()) != spec.outer_r) throw DomainError("need exactly r' polyhedra");
    for (const auto& p : spec.polyhedra) {
      if (p.dim() != spec.outer_n) throw DomainError("polyhedron dimension must equal n'");
    }
  }
}

MixedVolumeTable outer_table(const MixFunctionSpec& spec) {
  validate(spec);
  if (spec.table) return *spec.table;
  return spec.kind == MixKind::Volume ? mixed_volumes(spec.bodies) : mixed_covolumes(spec.polyhedra);
}

LatticeFunction mix_function(const MixFunctionSpec& spec, const MixedVolumeTable& table) {
  validate(spec);
  auto lat = make_lattice(spec.n(), spec.r);
  const int pad = spec.outer_r - spec.r;
  return LatticeFunction::from(lat, [&](const Composition& k) {
    std::vector<int> parts(k.parts());
    parts.insert(parts.end(), static_cast<std::size_t>(pad), 1);
    return table.at(Composition(parts));
  });
}

LatticeFunction mix_function(const MixFunctionSpec& spec) { return mix_function(spec, outer_table(spec)); }

LatticeFunction mix_covol_function(const MixFunctionSpec& spec) {
  if (spec.kind != MixKind::Covolume) throw DomainError("spec is not a covolume spec");
  return mix_function(spec);
}

LatticeFunction mix_vol_function(const MixFunctionSpec& spec) {
  if (spec.kind != MixKind::Volume) throw DomainError("spec is not a volume spec");
  return mix_function(spec);
}

SymmetrizedMonotoneReport verify_symmetrized_monotone(const MixFunctionSpec& spec) {
  auto f = mix_covol_function(spec);
  const auto& lat = f.lattice();
  SymmetrizedMonotoneReport rep;
  auto s = symmetrize(f);
  if (auto w = s.monotonicity_witness(true)) {
    rep.monotone_witness = std::make_pair(lat.at(w->first), lat.at(w->second));
  }
  rep.monotone = !rep.monotone_witness.has_value();
  for (std::size_t x = 0; x < lat.size(); ++x) {
    const auto& k = lat.at(x);
    for (std::size_t i = 0; i < k.parts().size(); ++i) {
      for (std::size_t j = i + 1; j < k.parts().size(); ++j) {
        if (k[i] == 0 || k[j] == 0) continue;
        std::vector<int> up(k.parts()), down(k.parts());
        ++up[i];
        --up[j];
        --down[i];
        ++down[j];
        ++rep.convexity_checked;
        if (2 * f[x] > f(Composition(up)) + f(Composition(down))) {
          ++rep.convexity_violations;
          if (!rep.convexity_witness) {
            rep.convexity_witness = k.str() + " at (" + std::to_string(i + 1) + "," + std::to_string(j + 1) + ")";
          }
        }
      }
    }
  }
  return rep;
}

CorollaryPart1Report verify_corollary_part1(const LatticeFunction& mix, const LatticeFunction& c) {
  if (auto w = c.invariance_witness()) {
    throw PreconditionError("C is not Ξ_r-invariant: " + c.lattice().at(w->first).str() + " / " +
                            c.lattice().at(w->second).str());
  }
  if (c.monotonicity() == Monotonicity::Neither) {
    auto w = c.monotonicity_witness(true);
    throw PreconditionError("C is not monotone: move " + c.lattice().at(w->first).str() + " -> " +
                            c.lattice().at(w->second).str());
  }
  CorollaryPart1Report rep;
  rep.pushforward = verify_pushforward_corollary(c, mix);
  auto s = symmetrize(mix);
  rep.theorem_gap = correlation_gap(c, s);
  rep.paths_agree = rep.theorem_gap == rep.pushforward.gap;
  rep.c_direction = to_string(c.monotonicity());
  rep.f_direction = to_string(s.monotonicity());
  rep.holds = rep.pushforward.holds;
  rep.equality = rep.pushforward.equality;
  rep.symbolic_equality = c.is_constant() || s.is_constant();
  return rep;
}

CorollaryPart1Report verify_corollary_part1(const MixFunctionSpec& spec, const LatticeFunction& c) {
  return verify_corollary_part1(mix_function(spec), c);
}

CorollaryPart2Report verify_corollary_part2(MixKind kind, int outer_n, LatticeFunction mix, const LatticeFunction& c,
                                            bool allow_rescale, mpfr_prec_t start_bits) {
  if (auto w = c.invariance_witness()) {
    throw PreconditionError("C is not Ξ_r-invariant: " + c.lattice().at(w->first).str() + " / " +
                            c.lattice().at(w->second).str());
  }
  const auto direction = c.monotonicity();
  if (direction == Monotonicity::Neither) throw PreconditionError("C is not monotone");
  CorollaryPart2Report rep;
  Rational lowest = *std::min_element(mix.values().begin(), mix.values().end());
  if (sgn(lowest) <= 0) throw DomainError("mixed value 0 has no logarithm");
  if (lowest < 1) {
    if (!allow_rescale) throw DomainError("values below 1 (min " + to_string(lowest) + "); rescaling not allowed");
    while (lowest * pow(Rational(rep.rescale), static_cast<unsigned long>(outer_n)) < 1) ++rep.rescale;
    mix = mix.scaled(pow(Rational(rep.rescale), static_cast<unsigned long>(outer_n)));
  }
  const int base = kind == MixKind::Covolume ? 1 : -1;
  rep.expected_sign = direction == Monotonicity::Constant ? 0 : (direction == Monotonicity::NonDecreasing ? base : -base);

  const Rational total(static_cast<unsigned long>(mix.size()));
  Rational c_sum = 0;
  for (const auto& v : c.values()) c_sum += v;
  std::vector<Rational> coef(mix.size());
  for (std::size_t i = 0; i < mix.size(); ++i) coef[i] = total * c[i] - c_sum;
  rep.log_gap = certify_sign([&](mpfr_prec_t prec) {
    Interval acc(prec);
    for (std::size_t i = 0; i < mix.size(); ++i) {
      if (sgn(coef[i]) == 0 || mix[i] == 1) continue;
      acc += Interval::log(mix[i], prec) * coef[i];
    }
    return acc;
  }, start_bits);
  rep.symbolic_equality = c.is_constant() || log_symmetrization_constant(mix);
  if (rep.symbolic_equality) {
    rep.status = rep.log_gap.sign == 0 ? "equal" : "violated";
  } else if (rep.log_gap.sign == 0) {
    rep.status = "indeterminate";
  } else {
    rep.status = rep.log_gap.sign == rep.expected_sign ? "holds" : "violated";
  }
  return rep;
}

CorollaryPart2Report verify_corollary_part2(const MixFunctionSpec& spec, const LatticeFunction& c, bool allow_rescale,
                                            mpfr_prec_t start_bits) {
  return verify_corollary_part2(spec.kind, spec.outer_n, mix_function(spec), c, allow_rescale, start_bits);
}

LatticeFunction exponent_weight(const Rational& a, const Rational& b, const Rational& c) {
  return LatticeFunction::from(make_lattice(3, 3), [&](const Composition& k) {
    auto s = k.sorted_desc();
    if (s[0] == 3) return a;
    if (s[0] == 2) return b;
    return c;
  });
}

namespace {

void require_three_in_r3(const MixedVolumeTable& t) {
  if (t.dim() != 3 || t.bodies() != 3) throw DomainError("need a table of three bodies in R^3");
}

Rational v(const MixedVolumeTable& t, int a, int b, int c) { return t.at(Composition{a, b, c}); }

Composition unit_pair(int i, int j) {
  std::vector<int> k(3, 0);
  k[static_cast<std::size_t>(i)] += 2;
  k[static_cast<std::size_t>(j)] += 1;
  return Composition(k);
}

}  // namespace

ExponentReport verify_exponent_inequality(const MixedVolumeTable& table, long a, long b, long c) {
  require_three_in_r3(table);
  if (!(a >= b && b >= c && c >= 0)) throw DomainError("need a >= b >= c >= 0");
  ExponentReport rep;
  rep.v111 = v(table, 1, 1, 1);
  rep.p3 = v(table, 3, 0, 0) * v(table, 0, 3, 0) * v(table, 0, 0, 3);
  rep.p21 = 1;
  for (int i = 0; i < 3; ++i) {
    for (int j = 0; j < 3; ++j) {
      if (i != j) rep.p21 *= table.at(unit_pair(i, j));
    }
  }
  if (sgn(rep.v111) <= 0 || sgn(rep.p3) <= 0 || sgn(rep.p21) <= 0) {
    throw DomainError("exponent inequality needs positive mixed volumes");
  }
  rep.e_mixed = 3 * a + 6 * b - 9 * c;
  rep.e_pure = 7 * a - 6 * b - c;
  rep.e_pair = 4 * b - 3 * a - c;
  auto up = [](const Rational& x, long e) { return pow(x, static_cast<unsigned long>(std::max(0l, e))); };
  Rational lhs = up(rep.v111, rep.e_mixed) * up(rep.p3, -rep.e_pure) * up(rep.p21, -rep.e_pair);
  Rational rhs = up(rep.p3, rep.e_pure) * up(rep.p21, rep.e_pair);
  rep.holds = lhs >= rhs;
  rep.equality = lhs == rhs;

  MixFunctionSpec spec;
  spec.outer_n = spec.outer_r = spec.r = 3;
  spec.kind = MixKind::Volume;
  spec.table = table;
  auto cor = verify_corollary_part2(spec, exponent_weight(a, b, c), true);
  // Log gap < 0 is exactly lhs > rhs; certified sign 0 only when they agree.
  rep.matches_corollary = rep.equality ? cor.log_gap.sign == 0 : cor.log_gap.sign == (lhs > rhs ? -1 : 1);
  return rep;
}

ExponentReport verify_exponent_inequality(const std::vector<RationalPolytope>& bodies, long a, long b, long c) {
  return verify_exponent_inequality(mixed_volumes(bodies), a, b, c);
}

ProductReport verify_product_inequality(const MixedVolumeTable& table) {
  require_three_in_r3(table);
  ProductReport rep;
  const Rational mixed = v(table, 1, 1, 1);
  rep.lhs = pow(mixed, 6);
  rep.rhs = 1;
  for (int i = 0; i < 3; ++i) {
    for (int j = 0; j < 3; ++j) {
      if (i != j) rep.rhs *= table.at(unit_pair(i, j));
    }
  }
  rep.holds = rep.lhs >= rep.rhs;
  rep.equality = rep.lhs == rep.rhs;
  // Pairs (a, b) with the third body c fixed once.
  const int pairs[3][3] = {{0, 1, 2}, {1, 2, 0}, {0, 2, 1}};
  Rational lhs_prod = 1, rhs_prod = 1;
  for (const auto& p : pairs) {
    QuadraticReport q;
    q.mixed = mixed;
    q.lhs = mixed * mixed;
    q.rhs = table.at(unit_pair(p[0], p[2])) * table.at(unit_pair(p[1], p[2]));
    q.holds = q.lhs >= q.rhs;
    q.equality = q.lhs == q.rhs;
    lhs_prod *= q.lhs;
    rhs_prod *= q.rhs;
    rep.af.push_back(q);
  }
  rep.factorization_matches = lhs_prod == rep.lhs && rhs_prod == rep.rhs;
  return rep;
}

ProductReport verify_product_inequality(const std::vector<RationalPolytope>& bodies) {
  if (bodies.size() != 3) throw DomainError("product inequality needs three bodies");
  return verify_product_inequality(mixed_volumes(bodies));
}

namespace {

DurfeeReport durfee_core(int n, int r, const MixedVolumeTable& table) {
  DurfeeReport rep;
  rep.n = n;
  rep.r = r;
  auto lat = make_lattice(n, r);
  auto shifted = [](const Composition& k) {
    std::vector<int> parts(k.parts());
    for (int& p : parts) ++p;
    return parts;
  };
  auto c = LatticeFunction::from(lat, [&](const Composition& k) { return Rational(multinomial(n + r, shifted(k))); });
  auto f = LatticeFunction::from(lat, [&](const Composition& k) { return table.at(Composition(shifted(k))); });
  for (std::size_t i = 0; i < lat->size(); ++i) {
    rep.sum_c += c[i];
    rep.sum_f += f[i];
    rep.sum_cf += c[i] * f[i];
  }
  rep.lattice_size = static_cast<unsigned long>(lat->size());
  rep.lhs = rep.sum_c * rep.sum_f;
  rep.rhs = Rational(rep.lattice_size) * rep.sum_cf;
  rep.holds = rep.lhs >= rep.rhs;
  rep.equality = rep.lhs == rep.rhs;
  rep.c_constant = c.is_constant();
  try {
    rep.corollary = verify_corollary_part1(f, c);
  } catch (const PreconditionError& e) {
    rep.corollary_note = e.what();
  }
  return rep;
}

}  // namespace

DurfeeReport verify_durfee_inequality(const std::vector<NewtonPolyhedron>& polyhedra) {
  if (polyhedra.empty()) throw DomainError("need at least one Newton polyhedron");
  const int r = static_cast<int>(polyhedra.size());
  const int dim = polyhedra.front().dim();
  const int n = dim - r;
  if (n < 0) throw DomainError("need r <= n + r, i.e. at most N polyhedra in R^N");
  auto rep = durfee_core(n, r, mixed_covolumes(polyhedra));
  rep.mode = "geometric";
  rep.all_equal = std::all_of(polyhedra.begin(), polyhedra.end(),
                              [&](const NewtonPolyhedron& p) { return p.vertices() == polyhedra.front().vertices(); });
  return rep;
}

DurfeeReport verify_durfee_inequality(int n, int r, const MixedVolumeTable& covol) {
  if (n < 0 || r < 1) throw DomainError("need n >= 0 and r >= 1");
  if (covol.dim() != n + r || covol.bodies() != r) throw DomainError("abstract table must be indexed by K_{n+r,r}");
  for (std::size_t i = 0; i < covol.values().size(); ++i) {
    if (sgn(covol.values()[i]) <= 0) {
      throw DomainError("abstract covolume at " + covol.keys().at(i).str() + " must be positive");
    }
  }
  auto rep = durfee_core(n, r, covol);
  rep.mode = "abstract";
  return rep;
}

bool jensen_violated(const MixedVolumeTable& table, Rational* lhs, Rational* rhs) {
  require_three_in_r3(table);
  Rational l = pow(v(table, 1, 1, 1), 3);
  Rational r = v(table, 2, 1, 0) * v(table, 0, 2, 1) * v(table, 1, 0, 2);
  if (lhs) *lhs = l;
  if (rhs) *rhs = r;
  return l < r;
}

JensenReport jensen_counterexample_search(std::size_t budget, std::uint64_t seed, unsigned threads) {
  JensenReport rep;
  rep.instances = budget;
  rep.seed = seed;
  const Rng base(seed);
  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  std::atomic<std::size_t> next{0};
  std::mutex lock;
  auto worker = [&] {
    for (std::size_t i = next++; i < budget; i = next++) {
      Rng rng = base.split(i);
      std::vector<RationalPolytope> bodies;
      for (int b = 0; b < 3; ++b) bodies.push_back(random_polytope(rng, 3));
      Rational lhs, rhs;
      bool bad = jensen_violated(mixed_volumes(bodies), &lhs, &rhs);
      std::lock_guard<std::mutex> guard(lock);
      if (lhs == rhs) ++rep.equalities;
      if (!bad) continue;
      ++rep.witnesses;
      if (!rep.first || rep.first->instance > i) {
        JensenWitness w;
        w.instance = i;
        for (const auto& b : bodies) w.bodies.push_back(b.vertices());
        w.lhs = lhs;
        w.rhs = rhs;
        rep.first = std::move(w);
      }
    }
  };
  std::vector<std::thread> pool;
  for (unsigned t = 1; t < threads; ++t) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();
  return rep;
}

}  // namespace compfkg
