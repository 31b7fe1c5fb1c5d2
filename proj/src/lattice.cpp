#include "compfkg/lattice.hpp"

#include <algorithm>
#include <cstdlib>
#include <deque>
#include <numeric>
#include <set>
#include <sstream>

#include "compfkg/errors.hpp"

namespace compfkg {

Composition::Composition(std::vector<int> parts) : parts_(std::move(parts)) {
  if (parts_.empty()) throw DomainError("composition needs at least one part");
  for (int p : parts_) {
    if (p < 0) throw DomainError("composition parts must be non-negative");
    n_ += p;
  }
}

int Composition::zero_count() const {
  return static_cast<int>(std::count(parts_.begin(), parts_.end(), 0));
}

Composition Composition::sorted_desc() const {
  auto p = parts_;
  std::sort(p.begin(), p.end(), std::greater<>());
  return Composition(std::move(p));
}

std::string Composition::str() const {
  std::ostringstream os;
  os << '(';
  for (std::size_t i = 0; i < parts_.size(); ++i) os << (i ? "," : "") << parts_[i];
  os << ')';
  return os.str();
}

std::size_t CompositionHash::operator()(const Composition& c) const noexcept {
  std::size_t h = 1469598103934665603ull;
  for (int p : c.parts()) {
    h ^= static_cast<std::size_t>(p) + 0x9e3779b97f4a7c15ull + (h << 6) + (h >> 2);
  }
  return h;
}

std::size_t enumeration_cap_from_env() {
  if (const char* env = std::getenv("COMP_FKG_CAP")) {
    char* end = nullptr;
    unsigned long long v = std::strtoull(env, &end, 10);
    if (end != env && *end == '\0' && v > 0) return static_cast<std::size_t>(v);
  }
  return kDefaultEnumerationCap;
}

namespace {

void enumerate_rec(int remaining, int slots, std::vector<int>& cur, std::vector<Composition>& out) {
  if (slots == 1) {
    cur.push_back(remaining);
    out.emplace_back(cur);
    cur.pop_back();
    return;
  }
  for (int a = remaining; a >= 0; --a) {
    cur.push_back(a);
    enumerate_rec(remaining - a, slots - 1, cur, out);
    cur.pop_back();
  }
}

long square_sum(const Composition& c) {
  long s = 0;
  for (int p : c.parts()) s += static_cast<long>(p) * p;
  return s;
}

}  // namespace

CompositionLattice enumerate_lattice(int n, int r, std::size_t cap) {
  if (r < 1) throw DomainError("K_{n,r} requires r >= 1, got r = " + std::to_string(r));
  if (n < 0) throw DomainError("K_{n,r} requires n >= 0, got n = " + std::to_string(n));
  Integer count = binomial(n + r - 1, n);
  if (count > Integer(static_cast<unsigned long>(cap))) {
    throw CapExceeded("K_{" + std::to_string(n) + "," + std::to_string(r) + "} has " + count.get_str() +
                          " elements, enumeration too large",
                      cap);
  }

  CompositionLattice lat;
  lat.n_ = n;
  lat.r_ = r;
  std::vector<int> cur;
  enumerate_rec(n, r, cur, lat.elements_);
  const std::size_t size = lat.elements_.size();
  lat.index_.reserve(size);
  for (std::size_t i = 0; i < size; ++i) lat.index_.emplace(lat.elements_[i], i);

  lat.moves_.resize(size);
  for (std::size_t i = 0; i < size; ++i) {
    auto parts = lat.elements_[i].parts();
    for (int p = 0; p < r; ++p) {
      for (int q = 0; q < r; ++q) {
        if (p == q || parts[p] - 1 < parts[q] + 1) continue;
        --parts[p];
        ++parts[q];
        lat.moves_[i].push_back(lat.index_.at(Composition(parts)));
        ++parts[p];
        --parts[q];
      }
    }
    std::sort(lat.moves_[i].begin(), lat.moves_[i].end());
  }

  std::map<Composition, std::size_t, std::greater<>> reps;
  for (const auto& e : lat.elements_) reps.emplace(e.sorted_desc(), 0);
  std::size_t next = 0;
  for (auto& [rep, idx] : reps) {
    idx = next++;
    lat.class_reps_.push_back(rep);
  }
  lat.class_of_.resize(size);
  lat.class_members_.resize(reps.size());
  for (std::size_t i = 0; i < size; ++i) {
    std::size_t c = reps.at(lat.elements_[i].sorted_desc());
    lat.class_of_[i] = c;
    lat.class_members_[c].push_back(i);
  }

  lat.strata_.resize(static_cast<std::size_t>(r) + 1);
  for (std::size_t i = 0; i < size; ++i) {
    lat.strata_[static_cast<std::size_t>(lat.elements_[i].zero_count())].push_back(i);
  }
  return lat;
}

LatticePtr make_lattice(int n, int r, std::size_t cap) {
  return std::make_shared<const CompositionLattice>(enumerate_lattice(n, r, cap));
}

std::optional<std::size_t> CompositionLattice::find(const Composition& c) const {
  auto it = index_.find(c);
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

std::size_t CompositionLattice::index_of(const Composition& c) const {
  auto i = find(c);
  if (!i) {
    throw DomainError(c.str() + " is not an element of K_{" + std::to_string(n_) + "," + std::to_string(r_) + "}");
  }
  return *i;
}

void CompositionLattice::build_closure() const {
  const std::size_t size = elements_.size();
  std::vector<std::size_t> order(size);
  std::iota(order.begin(), order.end(), 0);
  // Every move strictly lowers the sum of squares, so ascending order is a
  // topological order of the move digraph reversed.
  std::vector<long> key(size);
  for (std::size_t i = 0; i < size; ++i) key[i] = square_sum(elements_[i]);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return key[a] < key[b]; });
  cache_->rows.assign(size, boost::dynamic_bitset<>(size));
  for (std::size_t i : order) {
    auto& row = cache_->rows[i];
    row.set(i);
    for (std::size_t t : moves_[i]) row |= cache_->rows[t];
  }
}

boost::dynamic_bitset<> CompositionLattice::bfs_row(std::size_t i) const {
  boost::dynamic_bitset<> seen(elements_.size());
  std::deque<std::size_t> queue{i};
  seen.set(i);
  while (!queue.empty()) {
    std::size_t v = queue.front();
    queue.pop_front();
    for (std::size_t t : moves_[v]) {
      if (!seen.test(t)) {
        seen.set(t);
        queue.push_back(t);
      }
    }
  }
  return seen;
}

boost::dynamic_bitset<> CompositionLattice::down_set(std::size_t i) const {
  if (elements_.size() <= kClosureTableCap) {
    std::call_once(cache_->once, [this] { build_closure(); });
    return cache_->rows[i];
  }
  std::lock_guard lock(cache_->mutex);
  auto it = cache_->row_cache.find(i);
  if (it == cache_->row_cache.end()) it = cache_->row_cache.emplace(i, bfs_row(i)).first;
  return it->second;
}

bool CompositionLattice::leq(std::size_t a, std::size_t b) const {
  if (a >= size() || b >= size()) throw DomainError("element index out of range");
  if (elements_.size() <= kClosureTableCap) {
    std::call_once(cache_->once, [this] { build_closure(); });
    return cache_->rows[b].test(a);
  }
  return down_set(b).test(a);
}

std::vector<std::pair<std::size_t, std::size_t>> CompositionLattice::covers() const {
  std::vector<std::pair<std::size_t, std::size_t>> out;
  for (std::size_t i = 0; i < size(); ++i) {
    for (std::size_t t : moves_[i]) {
      bool covered = true;
      for (std::size_t u : moves_[i]) {
        if (u != t && leq(t, u)) {
          covered = false;
          break;
        }
      }
      if (covered) out.emplace_back(i, t);
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<Composition> CompositionLattice::orbit(const Composition& a) const {
  std::size_t i = index_of(a);
  std::vector<Composition> out;
  for (std::size_t m : class_members_[class_of_[i]]) out.push_back(elements_[m]);
  return out;
}

const std::vector<std::size_t>& CompositionLattice::stratum_indices(int s) const {
  if (s < 0 || s > r_ - 1) {
    throw DomainError("stratum index s = " + std::to_string(s) + " outside 0.." + std::to_string(r_ - 1));
  }
  return strata_[static_cast<std::size_t>(s)];
}

std::vector<Composition> CompositionLattice::stratum(int s) const {
  std::vector<Composition> out;
  for (std::size_t i : stratum_indices(s)) out.push_back(elements_[i]);
  return out;
}

bool dominates(const Composition& a, const Composition& b) {
  if (a.r() != b.r() || a.n() != b.n()) return false;
  long sa = 0, sb = 0;
  for (int i = 0; i < a.r(); ++i) {
    sa += a[static_cast<std::size_t>(i)];
    sb += b[static_cast<std::size_t>(i)];
    if (sa < sb) return false;
  }
  return true;
}

Integer orbit_size(const Composition& a) {
  std::map<int, int> mult;
  for (int p : a.parts()) ++mult[p];
  Integer out = factorial(a.r());
  for (const auto& [value, m] : mult) out /= factorial(m);
  return out;
}

std::vector<Composition> partitions(int n, int r) {
  std::vector<Composition> out;
  std::vector<int> cur;
  auto rec = [&](auto&& self, int remaining, int max_part) -> void {
    if (static_cast<int>(cur.size()) == r) {
      if (remaining == 0) out.emplace_back(cur);
      return;
    }
    for (int a = std::min(remaining, max_part); a >= 0; --a) {
      cur.push_back(a);
      self(self, remaining - a, a);
      cur.pop_back();
    }
  };
  rec(rec, n, n);
  return out;
}

QuotientPoset::QuotientPoset(const CompositionLattice& lat) : classes_(lat.class_reps()) {
  const std::size_t m = classes_.size();
  orbit_size_.reserve(m);
  for (const auto& c : classes_) orbit_size_.push_back(compfkg::orbit_size(c));
  order_.assign(m, boost::dynamic_bitset<>(m));
  up_.assign(m, boost::dynamic_bitset<>(m));
  for (std::size_t b = 0; b < m; ++b) {
    auto row = lat.down_set(lat.index_of(classes_[b]));
    for (auto j = row.find_first(); j != boost::dynamic_bitset<>::npos; j = row.find_next(j)) {
      order_[b].set(lat.class_of(j));
    }
  }
  for (std::size_t b = 0; b < m; ++b) {
    for (std::size_t a = 0; a < m; ++a) {
      if (order_[b].test(a)) up_[a].set(b);
    }
  }
}

std::size_t QuotientPoset::index_of(const Composition& rep) const {
  auto key = rep.sorted_desc();
  auto it = std::lower_bound(classes_.begin(), classes_.end(), key, std::greater<>());
  if (it == classes_.end() || *it != key) throw DomainError(rep.str() + " is not a class of this quotient");
  return static_cast<std::size_t>(it - classes_.begin());
}

std::vector<std::pair<std::size_t, std::size_t>> QuotientPoset::covers() const {
  std::vector<std::pair<std::size_t, std::size_t>> out;
  const std::size_t m = size();
  for (std::size_t hi = 0; hi < m; ++hi) {
    for (std::size_t lo = 0; lo < m; ++lo) {
      if (lo == hi || !leq(lo, hi)) continue;
      bool cover = true;
      for (std::size_t mid = 0; mid < m && cover; ++mid) {
        if (mid != lo && mid != hi && leq(lo, mid) && leq(mid, hi)) cover = false;
      }
      if (cover) out.emplace_back(hi, lo);
    }
  }
  return out;
}

std::size_t QuotientPoset::top() const {
  std::optional<std::size_t> found;
  for (std::size_t c = 0; c < size(); ++c) {
    if (up_[c].count() == 1) {
      if (found) throw StructuralError("quotient poset has more than one maximal class");
      found = c;
    }
  }
  if (!found) throw StructuralError("quotient poset has no maximal class");
  return *found;
}

std::size_t QuotientPoset::bottom() const {
  std::optional<std::size_t> found;
  for (std::size_t c = 0; c < size(); ++c) {
    if (order_[c].count() == 1) {
      if (found) throw StructuralError("quotient poset has more than one minimal class");
      found = c;
    }
  }
  if (!found) throw StructuralError("quotient poset has no minimal class");
  return *found;
}

std::size_t QuotientPoset::meet(std::size_t a, std::size_t b) const {
  if (a >= size() || b >= size()) throw DomainError("class index out of range");
  auto lower = order_[a] & order_[b];
  std::optional<std::size_t> found;
  for (auto c = lower.find_first(); c != boost::dynamic_bitset<>::npos; c = lower.find_next(c)) {
    if (lower.is_subset_of(order_[c])) {
      if (found) throw StructuralError("meet of " + classes_[a].str() + " and " + classes_[b].str() + " not unique");
      found = c;
    }
  }
  if (!found) throw StructuralError("meet of " + classes_[a].str() + " and " + classes_[b].str() + " does not exist");
  return *found;
}

std::size_t QuotientPoset::join(std::size_t a, std::size_t b) const {
  if (a >= size() || b >= size()) throw DomainError("class index out of range");
  auto upper = up_[a] & up_[b];
  std::optional<std::size_t> found;
  for (auto c = upper.find_first(); c != boost::dynamic_bitset<>::npos; c = upper.find_next(c)) {
    if (upper.is_subset_of(up_[c])) {
      if (found) throw StructuralError("join of " + classes_[a].str() + " and " + classes_[b].str() + " not unique");
      found = c;
    }
  }
  if (!found) throw StructuralError("join of " + classes_[a].str() + " and " + classes_[b].str() + " does not exist");
  return *found;
}

std::optional<std::pair<std::size_t, std::size_t>> QuotientPoset::dominance_mismatch() const {
  for (std::size_t a = 0; a < size(); ++a) {
    for (std::size_t b = 0; b < size(); ++b) {
      if (leq(a, b) != dominates(classes_[b], classes_[a])) return std::make_pair(a, b);
    }
  }
  return std::nullopt;
}

StratumIsomorphism stratum_iso(const CompositionLattice& lat) {
  StratumIsomorphism iso;
  const int n = lat.n();
  const int r = lat.r();
  if (n < r) {
    iso.bijective = true;
    return iso;
  }
  bool ok = true;

  auto target = enumerate_lattice(n - r, r);
  std::set<Composition> hit;
  for (std::size_t i : lat.stratum_indices(0)) {
    auto parts = lat.at(i).parts();
    for (int& p : parts) --p;
    Composition img(parts);
    ok = ok && target.find(img).has_value() && hit.insert(img).second;
    iso.interior.emplace_back(lat.at(i), std::move(img));
  }
  ok = ok && hit.size() == target.size();

  for (int s = 1; s <= r - 1; ++s) {
    auto inner = enumerate_lattice(n, r - s);
    std::map<std::vector<int>, std::set<Composition>> images;
    for (std::size_t i : lat.stratum_indices(s)) {
      const auto& k = lat.at(i);
      std::vector<int> zeros, rest;
      for (int j = 0; j < r; ++j) {
        if (k[static_cast<std::size_t>(j)] == 0) {
          zeros.push_back(j);
        } else {
          rest.push_back(k[static_cast<std::size_t>(j)]);
        }
      }
      Composition img(rest);
      ok = ok && img.zero_count() == 0 && inner.find(img).has_value() && images[zeros].insert(img).second;
      iso.by_zero_pattern[zeros].emplace_back(k, std::move(img));
    }
    std::size_t interior_size = inner.stratum_indices(0).size();
    for (const auto& [pattern, imgs] : images) ok = ok && imgs.size() == interior_size;
    Integer expected_patterns = interior_size == 0 ? Integer(0) : binomial(r, s);
    ok = ok && Integer(static_cast<unsigned long>(images.size())) == expected_patterns;
  }
  iso.bijective = ok;
  return iso;
}

InclusionExclusionResult inclusion_exclusion_check(const CompositionLattice& lat, const std::vector<Rational>& values) {
  if (values.size() != lat.size()) throw DomainError("function must be defined on every element");
  const int r = lat.r();
  InclusionExclusionResult res;
  for (unsigned long mask = 0; mask < (1ul << r); ++mask) {
    Rational partial = 0;
    for (std::size_t i = 0; i < lat.size(); ++i) {
      bool zero_on_mask = true;
      for (int j = 0; j < r && zero_on_mask; ++j) {
        if ((mask >> j) & 1ul) zero_on_mask = lat.at(i)[static_cast<std::size_t>(j)] == 0;
      }
      if (zero_on_mask) partial += values[i];
    }
    if (__builtin_popcountl(mask) % 2 == 0) {
      res.alternating_sum += partial;
    } else {
      res.alternating_sum -= partial;
    }
  }
  for (std::size_t i = 0; i < lat.size(); ++i) {
    if (lat.at(i).zero_count() == 0) res.positive_part_sum += values[i];
  }
  res.holds = res.alternating_sum == res.positive_part_sum;
  return res;
}

namespace {

template <typename Labels, typename Edges>
std::string dot(const std::string& name, const Labels& labels, const Edges& edges) {
  std::ostringstream os;
  os << "digraph " << name << " {\n  rankdir=TB;\n";
  for (std::size_t i = 0; i < labels.size(); ++i) os << "  n" << i << " [label=\"" << labels[i].str() << "\"];\n";
  for (const auto& [hi, lo] : edges) os << "  n" << hi << " -> n" << lo << ";\n";
  os << "}\n";
  return os.str();
}

}  // namespace

std::string to_dot(const CompositionLattice& lat) { return dot("K", lat.elements(), lat.covers()); }

std::string to_dot(const QuotientPoset& q) { return dot("Kquot", q.classes(), q.covers()); }

SublatticeReport check_sublattice(const QuotientPoset& q, const std::vector<std::size_t>& classes) {
  SublatticeReport rep;
  boost::dynamic_bitset<> in(q.size());
  for (auto c : classes) {
    if (c >= q.size()) throw DomainError("class index out of range");
    in.set(c);
  }
  for (auto a : classes) {
    for (auto b : classes) {
      if (!in.test(q.meet(a, b)) || !in.test(q.join(a, b))) {
        rep.escape = std::make_pair(a, b);
        return rep;
      }
    }
  }
  rep.closed = true;
  for (auto a : classes) {
    for (auto b : classes) {
      for (auto c : classes) {
        if (q.meet(a, q.join(b, c)) != q.join(q.meet(a, b), q.meet(a, c))) {
          rep.witness = std::array<std::size_t, 3>{a, b, c};
          return rep;
        }
      }
    }
  }
  rep.distributive = true;
  return rep;
}

SublatticeReport check_distributive(const QuotientPoset& q) {
  std::vector<std::size_t> all(q.size());
  for (std::size_t i = 0; i < all.size(); ++i) all[i] = i;
  return check_sublattice(q, all);
}

}  // namespace compfkg
