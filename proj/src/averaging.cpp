#include "compfkg/averaging.hpp"

#include <algorithm>
#include <atomic>
#include <map>
#include <mutex>
#include <numeric>
#include <thread>

#include "compfkg/errors.hpp"

namespace compfkg {

std::string to_string(Monotonicity m) {
  switch (m) {
    case Monotonicity::Constant:
      return "constant";
    case Monotonicity::NonDecreasing:
      return "non-decreasing";
    case Monotonicity::NonIncreasing:
      return "non-increasing";
    case Monotonicity::Neither:
      return "not monotone";
  }
  return "?";
}

LatticeFunction::LatticeFunction(LatticePtr lat, std::vector<Rational> values)
    : lat_(std::move(lat)), values_(std::move(values)) {
  if (!lat_) throw DomainError("lattice function needs a lattice");
  if (values_.size() != lat_->size()) {
    throw DomainError("lattice function has " + std::to_string(values_.size()) + " values for " +
                      std::to_string(lat_->size()) + " elements");
  }
  for (std::size_t i = 0; i < values_.size(); ++i) {
    if (sgn(values_[i]) < 0) throw DomainError("negative value at " + lat_->at(i).str());
  }
}

LatticeFunction LatticeFunction::from(LatticePtr lat, const std::function<Rational(const Composition&)>& fn) {
  std::vector<Rational> values;
  values.reserve(lat->size());
  for (const auto& e : lat->elements()) values.push_back(fn(e));
  return LatticeFunction(std::move(lat), std::move(values));
}

LatticeFunction LatticeFunction::constant(LatticePtr lat, const Rational& c) {
  std::vector<Rational> values(lat->size(), c);
  return LatticeFunction(std::move(lat), std::move(values));
}

LatticeFunction LatticeFunction::indicator(LatticePtr lat, const boost::dynamic_bitset<>& members) {
  if (members.size() != lat->size()) throw DomainError("indicator bitset size mismatch");
  std::vector<Rational> values(lat->size());
  for (std::size_t i = 0; i < values.size(); ++i) values[i] = members.test(i) ? 1 : 0;
  return LatticeFunction(std::move(lat), std::move(values));
}

bool LatticeFunction::is_constant() const {
  return std::all_of(values_.begin(), values_.end(), [&](const Rational& v) { return v == values_.front(); });
}

std::optional<std::pair<std::size_t, std::size_t>> LatticeFunction::invariance_witness() const {
  for (const auto& members : lat_->class_members()) {
    for (std::size_t m : members) {
      if (values_[m] != values_[members.front()]) return std::make_pair(members.front(), m);
    }
  }
  return std::nullopt;
}

bool LatticeFunction::is_invariant() const { return !invariance_witness().has_value(); }

std::optional<std::pair<std::size_t, std::size_t>> LatticeFunction::monotonicity_witness(bool nondecreasing) const {
  for (std::size_t i = 0; i < values_.size(); ++i) {
    for (std::size_t t : lat_->moves_from(i)) {
      bool ok = nondecreasing ? values_[i] >= values_[t] : values_[i] <= values_[t];
      if (!ok) return std::make_pair(i, t);
    }
  }
  return std::nullopt;
}

Monotonicity LatticeFunction::monotonicity() const {
  if (is_constant()) return Monotonicity::Constant;
  if (is_nondecreasing()) return Monotonicity::NonDecreasing;
  if (is_nonincreasing()) return Monotonicity::NonIncreasing;
  return Monotonicity::Neither;
}

Rational LatticeFunction::max() const { return *std::max_element(values_.begin(), values_.end()); }

void LatticeFunction::check_same_lattice(const LatticeFunction& other) const {
  if (lat_ != other.lat_ && (lat_->n() != other.lat_->n() || lat_->r() != other.lat_->r())) {
    throw DomainError("functions live on different lattices");
  }
}

LatticeFunction LatticeFunction::operator*(const LatticeFunction& other) const {
  check_same_lattice(other);
  std::vector<Rational> out(values_.size());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = values_[i] * other.values_[i];
  return LatticeFunction(lat_, std::move(out));
}

LatticeFunction LatticeFunction::operator+(const LatticeFunction& other) const {
  check_same_lattice(other);
  std::vector<Rational> out(values_.size());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = values_[i] + other.values_[i];
  return LatticeFunction(lat_, std::move(out));
}

LatticeFunction LatticeFunction::scaled(const Rational& c) const {
  std::vector<Rational> out(values_.size());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = values_[i] * c;
  return LatticeFunction(lat_, std::move(out));
}

LatticeFunction LatticeFunction::reflected() const {
  Rational top = max();
  std::vector<Rational> out(values_.size());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = top - values_[i];
  return LatticeFunction(lat_, std::move(out));
}

Rational average(const LatticeFunction& f) {
  Rational sum = 0;
  for (const auto& v : f.values()) sum += v;
  return sum / Rational(static_cast<unsigned long>(f.size()));
}

Rational correlation_gap(const LatticeFunction& f, const LatticeFunction& g) {
  return average(f * g) - average(f) * average(g);
}

LatticeFunction symmetrize(const LatticeFunction& g) {
  const auto& lat = g.lattice();
  std::vector<Rational> out(g.size());
  for (const auto& members : lat.class_members()) {
    Rational sum = 0;
    for (std::size_t m : members) sum += g[m];
    sum /= Rational(static_cast<unsigned long>(members.size()));
    for (std::size_t m : members) out[m] = sum;
  }
  return LatticeFunction(g.lattice_ptr(), std::move(out));
}

namespace {

bool exact_root(const Integer& z, unsigned long k, Integer& root) {
  return mpz_root(root.get_mpz_t(), z.get_mpz_t(), k) != 0;
}

}  // namespace

GeometricAverage geometric_average(const LatticeFunction& f, mpfr_prec_t prec) {
  Rational product = 1;
  for (std::size_t i = 0; i < f.size(); ++i) {
    if (sgn(f[i]) <= 0) throw DomainError("geometric average needs positive values; zero at " + f.lattice().at(i).str());
    product *= f[i];
  }
  const auto m = static_cast<unsigned long>(f.size());
  GeometricAverage out{std::nullopt, Interval(prec), Interval(prec)};
  Integer num, den;
  if (exact_root(product.get_num(), m, num) && exact_root(product.get_den(), m, den)) {
    out.exact = Rational(num, den);
    out.exact->canonicalize();
  }
  for (std::size_t i = 0; i < f.size(); ++i) out.log_value += Interval::log(f[i], prec);
  out.log_value /= Rational(m);
  out.value = out.log_value.exp();
  return out;
}

bool log_symmetrization_constant(const LatticeFunction& f) {
  const auto& classes = f.lattice().class_members();
  unsigned long lcm = 1;
  for (const auto& members : classes) lcm = std::lcm(lcm, static_cast<unsigned long>(members.size()));
  std::optional<Rational> first;
  for (const auto& members : classes) {
    Rational product = 1;
    for (std::size_t m : members) {
      if (sgn(f[m]) <= 0) throw DomainError("logarithm of non-positive value at " + f.lattice().at(m).str());
      product *= f[m];
    }
    Rational normalized = pow(product, lcm / members.size());
    if (!first) {
      first = normalized;
    } else if (*first != normalized) {
      return false;
    }
  }
  return true;
}

namespace {

std::string pair_str(const CompositionLattice& lat, std::pair<std::size_t, std::size_t> w) {
  return lat.at(w.first).str() + " / " + lat.at(w.second).str();
}

void require_invariant(const LatticeFunction& f, const std::string& name) {
  if (auto w = f.invariance_witness()) {
    throw PreconditionError(name + " is not Ξ_r-invariant: values differ on orbit pair " + pair_str(f.lattice(), *w));
  }
}

void require_monotone(const LatticeFunction& f, bool nondecreasing, const std::string& name) {
  if (auto w = f.monotonicity_witness(nondecreasing)) {
    throw PreconditionError(name + " is not " + (nondecreasing ? "non-decreasing" : "non-increasing") +
                            ": move " + pair_str(f.lattice(), *w));
  }
}

FkgReport fill_report(const LatticeFunction& f, const LatticeFunction& g, int expected_sign) {
  FkgReport rep;
  rep.av_f = average(f);
  rep.av_g = average(g);
  rep.av_fg = average(f * g);
  rep.gap = rep.av_fg - rep.av_f * rep.av_g;
  rep.expected_sign = expected_sign;
  rep.equality = sgn(rep.gap) == 0;
  rep.holds = expected_sign == 0 ? rep.equality : sgn(rep.gap) * expected_sign >= 0;
  rep.equality_condition = f.is_constant() || symmetrize(g).is_constant();
  rep.equality_consistent = rep.equality == rep.equality_condition;
  rep.f_monotonicity = to_string(f.monotonicity());
  rep.g_monotonicity = to_string(g.monotonicity());
  return rep;
}

}  // namespace

FkgReport verify_fkg(const LatticeFunction& f, const LatticeFunction& g, FkgDirection direction) {
  require_invariant(f, "f");
  require_monotone(f, true, "f");
  require_monotone(g, direction == FkgDirection::IncreasingIncreasing, "g");
  return fill_report(f, g, direction == FkgDirection::IncreasingIncreasing ? 1 : -1);
}

FkgReport verify_pushforward_corollary(const LatticeFunction& f, const LatticeFunction& g) {
  require_invariant(f, "f");
  auto mf = f.monotonicity();
  auto mg = symmetrize(g).monotonicity();
  if (mf == Monotonicity::Neither) {
    throw PreconditionError("[f] is not monotone: move " + pair_str(f.lattice(), *f.monotonicity_witness(true)));
  }
  if (mg == Monotonicity::Neither) {
    auto sg = symmetrize(g);
    throw PreconditionError("[g] is not monotone: move " + pair_str(g.lattice(), *sg.monotonicity_witness(true)));
  }
  int expected = 0;
  if (mf != Monotonicity::Constant && mg != Monotonicity::Constant) expected = mf == mg ? 1 : -1;
  auto rep = fill_report(f, g, expected);
  rep.g_monotonicity = to_string(mg);
  return rep;
}

UpSet::UpSet(LatticePtr lat, boost::dynamic_bitset<> members) : lat_(std::move(lat)), members_(std::move(members)) {
  if (members_.size() != lat_->size()) throw DomainError("up-set bitset size mismatch");
  for (std::size_t i = 0; i < lat_->size(); ++i) {
    for (std::size_t t : lat_->moves_from(i)) {
      if (members_.test(t) && !members_.test(i)) {
        throw PreconditionError("set is not upward closed: contains " + lat_->at(t).str() + " but not " +
                                lat_->at(i).str());
      }
    }
  }
  for (const auto& cls : lat_->class_members()) {
    for (std::size_t m : cls) {
      if (members_.test(m) != members_.test(cls.front())) {
        throw PreconditionError("set is not Ξ_r-invariant at " + lat_->at(m).str());
      }
    }
  }
}

UpSet UpSet::from_classes(LatticePtr lat, const boost::dynamic_bitset<>& classes) {
  boost::dynamic_bitset<> members(lat->size());
  for (std::size_t i = 0; i < lat->size(); ++i) {
    if (classes.test(lat->class_of(i))) members.set(i);
  }
  return UpSet(std::move(lat), std::move(members));
}

std::vector<boost::dynamic_bitset<>> enumerate_quotient_filters(const QuotientPoset& q, std::size_t cap) {
  // Classes are in lexicographically descending order, which extends the
  // dominance order: everything above class i has a smaller index.
  const std::size_t m = q.size();
  std::vector<boost::dynamic_bitset<>> strictly_above(m);
  for (std::size_t c = 0; c < m; ++c) {
    strictly_above[c] = q.up_set(c);
    strictly_above[c].reset(c);
  }
  std::vector<boost::dynamic_bitset<>> out;
  boost::dynamic_bitset<> cur(m);
  auto rec = [&](auto&& self, std::size_t i) -> void {
    if (i == m) {
      if (out.size() >= cap) throw CapExceeded("quotient filter enumeration too large", cap);
      out.push_back(cur);
      return;
    }
    self(self, i + 1);
    if (strictly_above[i].is_subset_of(cur)) {
      cur.set(i);
      self(self, i + 1);
      cur.reset(i);
    }
  };
  rec(rec, 0);
  return out;
}

ExhaustiveReport verify_fkg_exhaustive(const CompositionLattice& lat, std::size_t filter_cap, unsigned threads) {
  QuotientPoset q(lat);
  auto filters = enumerate_quotient_filters(q, filter_cap);

  ExhaustiveReport rep;
  rep.n = lat.n();
  rep.r = lat.r();
  rep.lattice_size = lat.size();
  rep.quotient_size = q.size();
  rep.filters = filters.size();

  const std::size_t m = q.size();
  const std::size_t words = (m + 63) / 64;
  const std::size_t count = filters.size();
  std::vector<std::uint64_t> flat(count * words, 0);
  for (std::size_t f = 0; f < count; ++f) {
    for (auto c = filters[f].find_first(); c != boost::dynamic_bitset<>::npos; c = filters[f].find_next(c)) {
      flat[f * words + c / 64] |= std::uint64_t{1} << (c % 64);
    }
  }
  // Orbit sizes split into bit planes so a weighted popcount is a few popcounts.
  std::vector<unsigned long> orbit(m);
  unsigned long max_orbit = 0;
  for (std::size_t c = 0; c < m; ++c) {
    orbit[c] = q.orbit_size(c).get_ui();
    max_orbit = std::max(max_orbit, orbit[c]);
  }
  const int planes = max_orbit == 0 ? 0 : 64 - __builtin_clzl(max_orbit);
  std::vector<std::uint64_t> plane_mask(static_cast<std::size_t>(planes) * words, 0);
  for (std::size_t c = 0; c < m; ++c) {
    for (int b = 0; b < planes; ++b) {
      if ((orbit[c] >> b) & 1ul) plane_mask[static_cast<std::size_t>(b) * words + c / 64] |= std::uint64_t{1} << (c % 64);
    }
  }
  auto weight_of = [&](const std::uint64_t* x, const std::uint64_t* y) {
    long long w = 0;
    for (int b = 0; b < planes; ++b) {
      const std::uint64_t* mask = &plane_mask[static_cast<std::size_t>(b) * words];
      long long cnt = 0;
      for (std::size_t k = 0; k < words; ++k) cnt += __builtin_popcountll(x[k] & y[k] & mask[k]);
      w += cnt << b;
    }
    return w;
  };
  std::vector<long long> weight(count);
  for (std::size_t f = 0; f < count; ++f) weight[f] = weight_of(&flat[f * words], &flat[f * words]);
  const long long total = static_cast<long long>(lat.size());
  // Each filter pre-split into its plane-masked words: |X∩Y| weighted is Σ_b 2^b popcount(X_b & Y).
  const std::size_t stride = static_cast<std::size_t>(planes) * words;
  std::vector<std::uint64_t> split(count * stride);
  for (std::size_t f = 0; f < count; ++f) {
    for (std::size_t b = 0; b < static_cast<std::size_t>(planes); ++b) {
      for (std::size_t k = 0; k < words; ++k) split[f * stride + b * words + k] = flat[f * words + k] & plane_mask[b * words + k];
    }
  }

  struct Partial {
    std::size_t violations = 0, equality_pairs = 0, mismatches = 0;
    std::optional<unsigned long long> min_gap;
    std::optional<std::pair<std::size_t, std::size_t>> witness;
  };
  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  threads = static_cast<unsigned>(std::min<std::size_t>(threads, std::max<std::size_t>(1, count)));
  std::vector<Partial> partial(threads);
  std::atomic<std::size_t> next{0};

  auto scan_row = [&]<std::size_t W>(std::size_t i, Partial& p, std::integral_constant<std::size_t, W>) {
    const std::size_t nw = W ? W : words;
    const std::uint64_t* xs = &split[i * stride];
    const bool trivial_i = weight[i] == 0 || weight[i] == total;
    for (std::size_t j = i; j < count; ++j) {
      const std::uint64_t* y = &flat[j * words];
      long long both = 0;
      for (int b = 0; b < planes; ++b) {
        const std::uint64_t* xb = xs + static_cast<std::size_t>(b) * nw;
        long long cnt = 0;
        for (std::size_t k = 0; k < nw; ++k) cnt += __builtin_popcountll(xb[k] & y[k]);
        both += cnt << b;
      }
      const long long gap = total * both - weight[i] * weight[j];
      const bool trivial = trivial_i || weight[j] == 0 || weight[j] == total;
      const std::size_t mult = i == j ? 1 : 2;
      if (gap < 0) {
        p.violations += mult;
        if (!p.witness || *p.witness > std::make_pair(i, j)) p.witness = std::make_pair(i, j);
      }
      if (gap == 0) p.equality_pairs += mult;
      if ((gap == 0) != trivial) p.mismatches += mult;
      if (!trivial && gap >= 0 && (!p.min_gap || static_cast<unsigned long long>(gap) < *p.min_gap)) {
        p.min_gap = static_cast<unsigned long long>(gap);
      }
    }
  };
  auto worker = [&](unsigned id) {
    Partial& p = partial[id];
    for (std::size_t i = next++; i < count; i = next++) {
      switch (words) {
        case 1: scan_row(i, p, std::integral_constant<std::size_t, 1>{}); break;
        case 2: scan_row(i, p, std::integral_constant<std::size_t, 2>{}); break;
        case 3: scan_row(i, p, std::integral_constant<std::size_t, 3>{}); break;
        case 4: scan_row(i, p, std::integral_constant<std::size_t, 4>{}); break;
        default: scan_row(i, p, std::integral_constant<std::size_t, 0>{}); break;
      }
    }
  };
  std::vector<std::thread> pool;
  for (unsigned t = 1; t < threads; ++t) pool.emplace_back(worker, t);
  worker(0);
  for (auto& t : pool) t.join();

  rep.pairs_checked = count * count;
  for (const auto& p : partial) {
    rep.violations += p.violations;
    rep.equality_pairs += p.equality_pairs;
    rep.equality_mismatches += p.mismatches;
    if (p.min_gap && (!rep.min_nontrivial_gap || *p.min_gap < *rep.min_nontrivial_gap)) rep.min_nontrivial_gap = p.min_gap;
    if (p.witness && (!rep.witness || *p.witness < *rep.witness)) rep.witness = p.witness;
  }
  return rep;
}

Integer stratum_size(int n, int r, int s) {
  if (r <= 0 || n < 0 || s < 0 || s > r) return 0;
  if (n == 0) return s == r ? 1 : 0;
  return binomial(r, s) * binomial(n - 1, r - s - 1);
}

StrataProfile strata_averages(const UpSet& x) {
  const auto& lat = x.lattice();
  StrataProfile prof;
  for (int s = 0; s <= lat.r() - 1; ++s) {
    const auto& idx = lat.stratum_indices(s);
    if (idx.empty()) continue;
    std::size_t inside = 0;
    for (std::size_t i : idx) inside += x.contains(i) ? 1 : 0;
    prof.strata.push_back(s);
    prof.beta.emplace_back(Integer(static_cast<unsigned long>(inside)), Integer(static_cast<unsigned long>(idx.size())));
    prof.beta.back().canonicalize();
    prof.gamma.emplace_back(static_cast<unsigned long>(idx.size()));
  }
  if (lat.r() >= 2 && lat.r() <= lat.n()) prof.alpha = alpha_coefficients(lat.n(), lat.r());
  prof.chain_holds = std::is_sorted(prof.beta.begin(), prof.beta.end());
  prof.all_equal = std::adjacent_find(prof.beta.begin(), prof.beta.end(), std::not_equal_to<>()) == prof.beta.end();
  prof.equality_consistent = prof.strata.size() < 2 || prof.all_equal == x.trivial();
  return prof;
}

namespace {

void require_alpha_range(int n, int r) {
  if (r < 2 || n < r) {
    throw DomainError("α coefficients need 2 <= r <= n, got n = " + std::to_string(n) + ", r = " + std::to_string(r));
  }
}

Rational alpha_denominator(int n, int r) { return Rational(binomial(n - 2, r - 2) * (n - 1)); }

}  // namespace

std::vector<Rational> alpha_coefficients(int n, int r) {
  require_alpha_range(n, r);
  const Rational den = alpha_denominator(n, r);
  std::vector<Rational> out;
  for (int s = 0; s <= r - 1; ++s) {
    Integer num = binomial(n - r, r - s - 1) * (n * binomial(r - 1, s - 1) - (r - 1) * binomial(r, s));
    out.push_back(Rational(num) / den);
  }
  return out;
}

std::vector<Rational> alpha_from_strata(int n, int r) {
  require_alpha_range(n, r);
  const Rational k1(stratum_size(n, r, 1));
  const Rational k0(stratum_size(n, r, 0));
  std::vector<Rational> out;
  for (int s = 0; s <= r - 1; ++s) {
    Rational coef = Rational(s) / k1 - Rational(r - s) / (Rational(r) * k0);
    out.push_back(coef * Rational(stratum_size(n - r + 1, r, s)));
  }
  return out;
}

Rational alpha_tail_closed_form(int n, int r, int k) {
  require_alpha_range(n, r);
  return Rational(binomial(n - r, r - k) * binomial(r - 1, k) * k) / alpha_denominator(n, r);
}

ChebyshevResult chebyshev_weighted(const std::vector<Rational>& alpha, const std::vector<Rational>& beta,
                                   const std::vector<Rational>& gamma) {
  if (alpha.size() != beta.size() || alpha.size() != gamma.size()) throw DomainError("sequence lengths differ");
  if (!std::is_sorted(alpha.begin(), alpha.end())) throw DomainError("α is not sorted non-decreasing");
  if (!std::is_sorted(beta.begin(), beta.end())) throw DomainError("β is not sorted non-decreasing");
  for (const auto& g : gamma) {
    if (sgn(g) <= 0) throw DomainError("weights γ must be positive");
  }
  ChebyshevResult res;
  Rational sg = 0, sga = 0, sgb = 0, sgab = 0;
  for (std::size_t s = 0; s < alpha.size(); ++s) {
    sg += gamma[s];
    sga += gamma[s] * alpha[s];
    sgb += gamma[s] * beta[s];
    sgab += gamma[s] * alpha[s] * beta[s];
  }
  res.lhs = sga * sgb;
  res.rhs = sg * sgab;
  res.gap = res.rhs - res.lhs;
  for (std::size_t s = 0; s < alpha.size(); ++s) {
    for (std::size_t t = 0; t < alpha.size(); ++t) {
      res.double_sum_gap += gamma[s] * gamma[t] * (alpha[s] - alpha[t]) * (beta[s] - beta[t]);
    }
  }
  res.double_sum_gap /= 2;
  res.holds = res.lhs <= res.rhs;
  res.gaps_agree = res.gap == res.double_sum_gap;
  return res;
}

GeometricCorollaryReport verify_geometric_corollary(const LatticeFunction& f, const LatticeFunction& g,
                                                    mpfr_prec_t start_bits) {
  for (std::size_t i = 0; i < f.size(); ++i) {
    if (f[i] < 1) throw DomainError("f must take values >= 1; f" + f.lattice().at(i).str() + " = " + to_string(f[i]));
  }
  require_monotone(f, true, "f");
  require_monotone(g, true, "g");
  const bool f_inv = f.is_invariant();
  const bool g_inv = g.is_invariant();
  if (!f_inv && !g_inv) throw PreconditionError("neither f nor g is Ξ_r-invariant");

  GeometricCorollaryReport rep;
  rep.av_g = average(g);
  const Rational total(static_cast<unsigned long>(f.size()));
  Rational g_sum = 0;
  for (const auto& v : g.values()) g_sum += v;
  std::vector<Rational> coef(f.size());
  for (std::size_t i = 0; i < f.size(); ++i) coef[i] = total * g[i] - g_sum;
  rep.log_gap = certify_sign([&](mpfr_prec_t prec) {
    Interval acc(prec);
    for (std::size_t i = 0; i < f.size(); ++i) {
      if (sgn(coef[i]) == 0 || f[i] == 1) continue;
      acc += Interval::log(f[i], prec) * coef[i];
    }
    return acc;
  }, start_bits);

  rep.symbolic_equality = (f_inv && (f.is_constant() || symmetrize(g).is_constant())) ||
                          (g_inv && (g.is_constant() || log_symmetrization_constant(f)));
  if (rep.symbolic_equality) {
    rep.status = rep.log_gap.sign == 0 ? "equal" : "violated";
  } else if (rep.log_gap.sign > 0) {
    rep.status = "holds";
  } else if (rep.log_gap.sign < 0) {
    rep.status = "violated";
  } else {
    rep.status = "indeterminate";
  }
  return rep;
}

std::pair<LatticeFunction, LatticeFunction> fkg_homogeneous_pair(LatticePtr lat, std::vector<Rational> d) {
  if (static_cast<int>(d.size()) != lat->r()) throw DomainError("need one weight d_i per coordinate");
  for (const auto& di : d) {
    if (sgn(di) <= 0) throw DomainError("weights d_i must be positive");
  }
  std::sort(d.begin(), d.end(), std::greater<>());
  const int n = lat->n();
  const int r = lat->r();
  auto product = LatticeFunction::from(lat, [&](const Composition& k) {
    Rational v = 1;
    for (std::size_t i = 0; i < d.size(); ++i) v *= pow(d[i], static_cast<unsigned long>(k[i]));
    return v;
  });
  auto multi = LatticeFunction::from(lat, [&](const Composition& k) {
    std::vector<int> shifted(k.parts());
    for (int& p : shifted) ++p;
    return Rational(multinomial(n + r, shifted));
  });
  return {std::move(product), std::move(multi)};
}

HomogeneousReport verify_homogeneous_instance(LatticePtr lat, const std::vector<Rational>& d) {
  auto [product, multi] = fkg_homogeneous_pair(lat, d);
  HomogeneousReport rep;
  for (std::size_t i = 0; i < lat->size(); ++i) {
    rep.sum_multinomial += multi[i];
    rep.sum_product += product[i];
    rep.sum_weighted += multi[i] * product[i];
  }
  rep.lattice_size = static_cast<unsigned long>(lat->size());
  rep.lhs = rep.sum_multinomial * rep.sum_product;
  rep.rhs = Rational(rep.lattice_size) * rep.sum_weighted;
  rep.holds = rep.lhs >= rep.rhs;
  rep.strict = rep.lhs > rep.rhs;
  rep.pushforward = verify_pushforward_corollary(multi, product);
  return rep;
}

std::vector<std::pair<Rational, UpSet>> decompose_into_upsets(const LatticeFunction& f) {
  require_invariant(f, "f");
  require_monotone(f, true, "f");
  std::vector<Rational> levels(f.values());
  std::sort(levels.begin(), levels.end());
  levels.erase(std::unique(levels.begin(), levels.end()), levels.end());
  std::vector<std::pair<Rational, UpSet>> out;
  Rational previous = 0;
  for (const auto& v : levels) {
    if (sgn(v) <= 0) continue;
    boost::dynamic_bitset<> members(f.size());
    for (std::size_t i = 0; i < f.size(); ++i) {
      if (f[i] >= v) members.set(i);
    }
    out.emplace_back(v - previous, UpSet(f.lattice_ptr(), std::move(members)));
    previous = v;
  }
  return out;
}

namespace {

// m + 1 - e_j as an element of K_{n,r}, where m ∈ K_{n-r+1,r}.
std::size_t lift(const CompositionLattice& lat, const Composition& m, std::size_t j) {
  std::vector<int> parts(m.parts());
  for (std::size_t i = 0; i < parts.size(); ++i) parts[i] += i == j ? 0 : 1;
  return lat.index_of(Composition(parts));
}

std::size_t first_min(const Composition& m) {
  return static_cast<std::size_t>(std::min_element(m.parts().begin(), m.parts().end()) - m.parts().begin());
}

void require_descendant_range(const CompositionLattice& lat) {
  if (lat.n() - lat.r() + 1 < 0) throw DomainError("decomposition needs n >= r - 1");
}

std::size_t count_in_stratum(const UpSet& x, int s) {
  std::size_t c = 0;
  for (std::size_t i : x.lattice().stratum_indices(s)) c += x.contains(i) ? 1 : 0;
  return c;
}

}  // namespace

std::pair<Integer, Integer> k1_decomposition(const UpSet& x) {
  const auto& lat = x.lattice();
  require_descendant_range(lat);
  Integer lhs = lat.r() >= 2 ? Integer(static_cast<unsigned long>(count_in_stratum(x, 1))) : Integer(0);
  Integer rhs = 0;
  auto lower = enumerate_lattice(lat.n() - lat.r() + 1, lat.r());
  for (const auto& m : lower.elements()) {
    int zeros = m.zero_count();
    if (zeros == 0) continue;
    if (x.contains(lift(lat, m, first_min(m)))) rhs += zeros;
  }
  return {lhs, rhs};
}

std::pair<Integer, Integer> k0_decomposition(const UpSet& x) {
  const auto& lat = x.lattice();
  require_descendant_range(lat);
  Integer lhs = Integer(lat.r()) * Integer(static_cast<unsigned long>(count_in_stratum(x, 0)));
  Integer rhs = 0;
  auto lower = enumerate_lattice(lat.n() - lat.r() + 1, lat.r());
  for (const auto& m : lower.elements()) {
    for (std::size_t j = 0; j < m.parts().size(); ++j) {
      if (m[j] > 0 && x.contains(lift(lat, m, j))) rhs += 1;
    }
  }
  return {lhs, rhs};
}

Rational k0_single_set_form(const UpSet& x) {
  const auto& lat = x.lattice();
  require_descendant_range(lat);
  Integer acc = 0;
  auto lower = enumerate_lattice(lat.n() - lat.r() + 1, lat.r());
  for (const auto& m : lower.elements()) {
    if (x.contains(lift(lat, m, first_min(m)))) acc += lat.r() - m.zero_count();
  }
  return Rational(acc) / Rational(lat.r());
}

bool step_coefficients_agree(int n, int r, int s) {
  Integer ks = stratum_size(n, r, s);
  Integer ks1 = stratum_size(n, r, s - 1);
  if (ks == 0 || ks1 == 0) throw DomainError("strata K^s and K^{s-1} must be non-empty");
  Rational left = Rational(binomial(r, s)) / Rational(r + 1 - s) * Rational(stratum_size(n, r + 1 - s, 1)) / Rational(ks);
  Rational right = Rational(binomial(r, s - 1)) * Rational(stratum_size(n, r + 1 - s, 0)) / Rational(ks1);
  return left == right;
}

StrataStepCheck strata_step(const UpSet& x, int s) {
  const auto& lat = x.lattice();
  const int n = lat.n();
  const int r = lat.r();
  if (s < 1 || s > r - 1) throw DomainError("step index s must satisfy 1 <= s <= r-1");
  auto sub = enumerate_lattice(n, r + 1 - s);
  const auto& top_s = lat.stratum_indices(s);
  const auto& top_s1 = lat.stratum_indices(s - 1);
  const auto& sub1 = sub.stratum_indices(1);
  const auto& sub0 = sub.stratum_indices(0);
  if (top_s.empty() || top_s1.empty() || sub1.empty() || sub0.empty()) {
    throw DomainError("strata involved in step s = " + std::to_string(s) + " must be non-empty");
  }
  auto in_desc = [&](std::size_t idx) {
    std::vector<int> parts(sub.at(idx).parts());
    parts.resize(static_cast<std::size_t>(r), 0);
    return x.contains(lat.index_of(Composition(parts)));
  };
  auto avg = [](std::size_t hit, std::size_t total) {
    Rational q(Integer(static_cast<unsigned long>(hit)), Integer(static_cast<unsigned long>(total)));
    q.canonicalize();
    return q;
  };
  std::size_t d1 = 0, d0 = 0;
  for (std::size_t i : sub1) d1 += in_desc(i) ? 1 : 0;
  for (std::size_t i : sub0) d0 += in_desc(i) ? 1 : 0;

  StrataStepCheck out;
  Rational av_s = avg(count_in_stratum(x, s), top_s.size());
  Rational av_s1 = avg(count_in_stratum(x, s - 1), top_s1.size());
  out.difference = av_s - av_s1;
  out.descendant_difference = avg(d1, sub1.size()) - avg(d0, sub0.size());
  out.coefficient = Rational(binomial(r, s)) / Rational(r + 1 - s) * Rational(Integer(static_cast<unsigned long>(sub1.size()))) /
                    Rational(Integer(static_cast<unsigned long>(top_s.size())));
  out.coefficient.canonicalize();
  out.identity_holds = out.difference == out.coefficient * out.descendant_difference;
  return out;
}

LatticeFunction random_invariant_monotone(LatticePtr lat, Rng& rng, long step) {
  QuotientPoset q(*lat);
  std::vector<Rational> level(q.size());
  // Classes run top to bottom, so fill from the back.
  for (std::size_t c = q.size(); c-- > 0;) {
    Rational below = 0;
    const auto& down = q.down_set(c);
    for (auto d = down.find_first(); d != boost::dynamic_bitset<>::npos; d = down.find_next(d)) {
      if (d != c) below = std::max(below, level[d]);
    }
    level[c] = below + Rational(static_cast<long>(rng.below(static_cast<std::uint64_t>(step + 1))));
  }
  std::vector<Rational> values(lat->size());
  for (std::size_t i = 0; i < values.size(); ++i) values[i] = level[lat->class_of(i)];
  return LatticeFunction(lat, std::move(values));
}

RandomFkgReport verify_fkg_random(LatticePtr lat, std::size_t budget, std::uint64_t seed, unsigned threads) {
  RandomFkgReport rep;
  rep.instances = budget;
  rep.seed = seed;
  const Rng base(seed);
  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  std::atomic<std::size_t> next{0};
  std::mutex lock;
  auto worker = [&] {
    for (std::size_t i = next++; i < budget; i = next++) {
      Rng rng = base.split(i);
      auto f = random_invariant_monotone(lat, rng);
      auto g = random_invariant_monotone(lat, rng);
      auto r = verify_fkg(f, g, FkgDirection::IncreasingIncreasing);
      std::lock_guard<std::mutex> guard(lock);
      if (r.equality) ++rep.equalities;
      if (r.holds) continue;
      ++rep.violations;
      if (!rep.witness_instance || *rep.witness_instance > i) {
        rep.witness_instance = i;
        rep.witness_f = f.values();
        rep.witness_g = g.values();
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
