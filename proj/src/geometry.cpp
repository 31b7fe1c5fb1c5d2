#include "compfkg/geometry.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <numeric>
#include <tuple>
#include <unordered_set>

#include "compfkg/errors.hpp"

namespace compfkg {

namespace {

using i128 = __int128;

Integer to_integer(i128 v) {
  const bool neg = v < 0;
  unsigned __int128 u = neg ? static_cast<unsigned __int128>(-(v + 1)) + 1 : static_cast<unsigned __int128>(v);
  Integer hi(static_cast<unsigned long>(u >> 64));
  Integer lo(static_cast<unsigned long>(u & 0xFFFFFFFFFFFFFFFFull));
  Integer out = (hi << 64) + lo;
  return neg ? Integer(-out) : out;
}

i128 abs128(i128 v) { return v < 0 ? -v : v; }

i128 gcd128(i128 a, i128 b) {
  a = abs128(a);
  b = abs128(b);
  while (b != 0) {
    i128 t = a % b;
    a = b;
    b = t;
  }
  return a;
}

struct Vec {
  i128 x, y, z;
};

Vec sub(const IntPoint& a, const IntPoint& b) { return {i128{a[0]} - b[0], i128{a[1]} - b[1], i128{a[2]} - b[2]}; }
Vec cross(const Vec& a, const Vec& b) {
  return {a.y * b.z - a.z * b.y, a.z * b.x - a.x * b.z, a.x * b.y - a.y * b.x};
}
i128 dot(const Vec& a, const Vec& b) { return a.x * b.x + a.y * b.y + a.z * b.z; }
bool is_zero(const Vec& v) { return v.x == 0 && v.y == 0 && v.z == 0; }
i128 orient(const IntPoint& a, const IntPoint& b, const IntPoint& c, const IntPoint& d) {
  return dot(cross(sub(b, a), sub(c, a)), sub(d, a));
}

struct P2 {
  std::int64_t u, v;
  std::size_t idx;
};

i128 cross2(const P2& o, const P2& a, const P2& b) {
  return i128{a.u - o.u} * (b.v - o.v) - i128{a.v - o.v} * (b.u - o.u);
}

// Strict monotone chain: collinear boundary points are dropped. CCW order.
std::vector<P2> hull2(std::vector<P2> p) {
  std::sort(p.begin(), p.end(), [](const P2& a, const P2& b) { return std::tie(a.u, a.v) < std::tie(b.u, b.v); });
  p.erase(std::unique(p.begin(), p.end(), [](const P2& a, const P2& b) { return a.u == b.u && a.v == b.v; }), p.end());
  if (p.size() < 3) return p;
  std::vector<P2> h(2 * p.size());
  std::size_t k = 0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    while (k >= 2 && cross2(h[k - 2], h[k - 1], p[i]) <= 0) --k;
    h[k++] = p[i];
  }
  for (std::size_t i = p.size() - 1, t = k + 1; i > 0; --i) {
    while (k >= t && cross2(h[k - 2], h[k - 1], p[i - 1]) <= 0) --k;
    h[k++] = p[i - 1];
  }
  h.resize(k - 1);
  return h;
}

i128 twice_area(const std::vector<P2>& h) {
  i128 acc = 0;
  for (std::size_t i = 0; i < h.size(); ++i) {
    const auto& a = h[i];
    const auto& b = h[(i + 1) % h.size()];
    acc += i128{a.u} * b.v - i128{a.v} * b.u;
  }
  return acc;
}

using Face = std::array<std::uint32_t, 3>;

std::uint64_t edge_key(std::uint32_t a, std::uint32_t b) { return (std::uint64_t{a} << 32) | b; }

// Incremental hull; a face is replaced only when the new point lies strictly above it.
std::vector<Face> hull3(const std::vector<IntPoint>& p, const std::array<std::uint32_t, 4>& init) {
  std::vector<Face> faces;
  auto add = [&](std::uint32_t x, std::uint32_t y, std::uint32_t z, std::uint32_t inside) {
    if (orient(p[x], p[y], p[z], p[inside]) > 0) std::swap(y, z);
    faces.push_back({x, y, z});
  };
  const auto [a, b, c, d] = init;
  add(a, b, c, d);
  add(a, b, d, c);
  add(a, c, d, b);
  add(b, c, d, a);
  std::unordered_set<std::uint64_t> edges;
  std::vector<char> visible;
  for (std::uint32_t i = 0; i < p.size(); ++i) {
    if (i == a || i == b || i == c || i == d) continue;
    visible.assign(faces.size(), 0);
    bool any = false;
    for (std::size_t f = 0; f < faces.size(); ++f) {
      if (orient(p[faces[f][0]], p[faces[f][1]], p[faces[f][2]], p[i]) > 0) visible[f] = any = true;
    }
    if (!any) continue;
    edges.clear();
    std::vector<Face> next;
    for (std::size_t f = 0; f < faces.size(); ++f) {
      if (!visible[f]) {
        next.push_back(faces[f]);
        continue;
      }
      for (int e = 0; e < 3; ++e) edges.insert(edge_key(faces[f][e], faces[f][(e + 1) % 3]));
    }
    for (std::size_t f = 0; f < faces.size(); ++f) {
      if (!visible[f]) continue;
      for (int e = 0; e < 3; ++e) {
        std::uint32_t u = faces[f][e], v = faces[f][(e + 1) % 3];
        if (!edges.count(edge_key(v, u))) next.push_back({u, v, i});
      }
    }
    faces.swap(next);
  }
  return faces;
}

struct Analysis {
  std::vector<IntPoint> vertices;
  Integer scaled_volume;  // N! Vol
  int affine_dim = 0;
};

void check_range(const IntPoint& q) {
  for (auto c : q) {
    if (c >= kCoordinateLimit || c <= -kCoordinateLimit) {
      throw DomainError("coordinate outside the exact kernel range (|x| < 2^40 after scaling)");
    }
  }
}

std::vector<P2> project(const std::vector<IntPoint>& pts, int drop) {
  std::vector<P2> out;
  out.reserve(pts.size());
  const int i = drop == 0 ? 1 : 0;
  const int j = drop == 2 ? 1 : 2;
  for (std::size_t k = 0; k < pts.size(); ++k) out.push_back({pts[k][static_cast<std::size_t>(i)], pts[k][static_cast<std::size_t>(j)], k});
  return out;
}

int dominant_axis(const Vec& n) {
  i128 ax = abs128(n.x), ay = abs128(n.y), az = abs128(n.z);
  if (ax >= ay && ax >= az) return 0;
  return ay >= az ? 1 : 2;
}

Analysis analyze(int dim, std::vector<IntPoint> pts) {
  if (pts.empty()) throw DomainError("empty point set");
  for (const auto& q : pts) check_range(q);
  std::sort(pts.begin(), pts.end());
  pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
  Analysis out;
  if (pts.size() == 1) {
    out.vertices = pts;
    return out;
  }
  const IntPoint& p0 = pts[0];
  const Vec u = sub(pts[1], p0);
  std::optional<std::size_t> i2;
  for (std::size_t k = 2; k < pts.size() && !i2; ++k) {
    if (!is_zero(cross(u, sub(pts[k], p0)))) i2 = k;
  }
  if (!i2) {
    std::size_t lo = 0, hi = 0;
    for (std::size_t k = 1; k < pts.size(); ++k) {
      i128 t = dot(u, sub(pts[k], p0));
      if (t < dot(u, sub(pts[lo], p0))) lo = k;
      if (t > dot(u, sub(pts[hi], p0))) hi = k;
    }
    out.vertices = {pts[lo], pts[hi]};
    std::sort(out.vertices.begin(), out.vertices.end());
    out.affine_dim = 1;
    if (dim == 1) out.scaled_volume = Integer(static_cast<long>(out.vertices[1][0] - out.vertices[0][0]));
    return out;
  }
  const Vec n = cross(u, sub(pts[*i2], p0));
  if (dim == 2) {
    auto h = hull2(project(pts, 2));
    for (const auto& q : h) out.vertices.push_back(pts[q.idx]);
    out.scaled_volume = to_integer(twice_area(h));
    out.affine_dim = 2;
    std::sort(out.vertices.begin(), out.vertices.end());
    return out;
  }
  std::optional<std::size_t> i3;
  for (std::size_t k = 2; k < pts.size() && !i3; ++k) {
    if (dot(n, sub(pts[k], p0)) != 0) i3 = k;
  }
  if (!i3) {
    auto h = hull2(project(pts, dominant_axis(n)));
    for (const auto& q : h) out.vertices.push_back(pts[q.idx]);
    out.affine_dim = 2;
    std::sort(out.vertices.begin(), out.vertices.end());
    return out;
  }
  const std::array<std::uint32_t, 4> init{0, 1, static_cast<std::uint32_t>(*i2), static_cast<std::uint32_t>(*i3)};
  const auto faces = hull3(pts, init);
  out.affine_dim = 3;
  for (const auto& f : faces) out.scaled_volume += to_integer(orient(p0, pts[f[0]], pts[f[1]], pts[f[2]]));

  // Merge coplanar triangles into facets; a point is a vertex iff it is a
  // strict corner of some facet polygon.
  std::map<std::tuple<i128, i128, i128, i128>, std::vector<std::uint32_t>> facets;
  for (const auto& f : faces) {
    Vec nf = cross(sub(pts[f[1]], pts[f[0]]), sub(pts[f[2]], pts[f[0]]));
    i128 g = gcd128(gcd128(nf.x, nf.y), nf.z);
    nf = {nf.x / g, nf.y / g, nf.z / g};
    const IntPoint& q = pts[f[0]];
    i128 off = nf.x * q[0] + nf.y * q[1] + nf.z * q[2];
    auto& members = facets[{nf.x, nf.y, nf.z, off}];
    members.insert(members.end(), f.begin(), f.end());
  }
  std::vector<char> keep(pts.size(), 0);
  for (auto& [key, members] : facets) {
    std::sort(members.begin(), members.end());
    members.erase(std::unique(members.begin(), members.end()), members.end());
    std::vector<IntPoint> local;
    for (auto m : members) local.push_back(pts[m]);
    Vec nf{std::get<0>(key), std::get<1>(key), std::get<2>(key)};
    for (const auto& q : hull2(project(local, dominant_axis(nf)))) keep[members[q.idx]] = 1;
  }
  for (std::size_t k = 0; k < pts.size(); ++k) {
    if (keep[k]) out.vertices.push_back(pts[k]);
  }
  return out;
}

std::vector<IntPoint> pairwise_sums(const std::vector<IntPoint>& a, const std::vector<IntPoint>& b) {
  std::vector<IntPoint> out;
  out.reserve(a.size() * b.size());
  for (const auto& p : a) {
    for (const auto& q : b) out.push_back({p[0] + q[0], p[1] + q[1], p[2] + q[2]});
  }
  return out;
}

std::int64_t to_coord(const Integer& z) {
  if (!z.fits_slong_p() || z >= kCoordinateLimit || z <= -kCoordinateLimit) {
    throw DomainError("coordinate outside the exact kernel range (|x| < 2^40 after scaling)");
  }
  return z.get_si();
}

std::vector<IntPoint> scale_points(const std::vector<IntPoint>& pts, const Integer& factor) {
  std::vector<IntPoint> out;
  out.reserve(pts.size());
  for (const auto& p : pts) {
    out.push_back({to_coord(factor * p[0]), to_coord(factor * p[1]), to_coord(factor * p[2])});
  }
  return out;
}

Integer lcm(const Integer& a, const Integer& b) {
  Integer out;
  mpz_lcm(out.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
  return out;
}

void check_dim(int dim) {
  if (dim < 1 || dim > kMaxGeometryDim) throw DomainError("dimension must be 1, 2 or 3, got " + std::to_string(dim));
}

// Vertices of Γ+: corners of the box-clipped body lying strictly inside the box.
std::vector<IntPoint> newton_reduce(int dim, const std::vector<IntPoint>& gens) {
  std::int64_t top = 0;
  for (const auto& g : gens) top = std::max({top, g[0], g[1], g[2]});
  const std::int64_t m = top + 1;
  std::vector<IntPoint> raised;
  for (const auto& g : gens) {
    for (unsigned mask = 0; mask < (1u << dim); ++mask) {
      IntPoint q = g;
      for (int i = 0; i < dim; ++i) {
        if ((mask >> i) & 1u) q[static_cast<std::size_t>(i)] = m;
      }
      raised.push_back(q);
    }
  }
  std::vector<IntPoint> out;
  for (const auto& v : analyze(dim, raised).vertices) {
    bool inside = true;
    for (int i = 0; i < dim; ++i) inside = inside && v[static_cast<std::size_t>(i)] < m;
    if (inside) out.push_back(v);
  }
  return out;
}

Rational covolume_of(int dim, const std::vector<IntPoint>& gens, std::int64_t box) {
  std::int64_t top = 0;
  for (const auto& g : gens) top = std::max({top, g[0], g[1], g[2]});
  if (box < top) {
    throw DomainError("box bound " + std::to_string(box) + " is below the largest generator coordinate " +
                      std::to_string(top));
  }
  std::vector<IntPoint> raised;
  for (const auto& g : gens) {
    for (unsigned mask = 0; mask < (1u << dim); ++mask) {
      IntPoint q = g;
      for (int i = 0; i < dim; ++i) {
        if ((mask >> i) & 1u) q[static_cast<std::size_t>(i)] = box;
      }
      raised.push_back(q);
    }
  }
  Integer clipped = analyze(dim, raised).scaled_volume;
  Integer box_vol = 1;
  for (int i = 0; i < dim; ++i) box_vol *= box;
  return Rational(box_vol) - Rational(clipped) / Rational(factorial(dim));
}

std::vector<Rational> solve_exact(std::vector<std::vector<Rational>> a, std::vector<Rational> b) {
  const std::size_t n = b.size();
  for (std::size_t col = 0; col < n; ++col) {
    std::size_t piv = col;
    while (piv < n && sgn(a[piv][col]) == 0) ++piv;
    if (piv == n) throw StructuralError("singular interpolation system");
    std::swap(a[piv], a[col]);
    std::swap(b[piv], b[col]);
    for (std::size_t row = 0; row < n; ++row) {
      if (row == col || sgn(a[row][col]) == 0) continue;
      Rational factor = a[row][col] / a[col][col];
      for (std::size_t k = col; k < n; ++k) a[row][k] -= factor * a[col][k];
      b[row] -= factor * b[col];
    }
  }
  std::vector<Rational> x(n);
  for (std::size_t i = 0; i < n; ++i) x[i] = b[i] / a[i][i];
  return x;
}

Rational monomial(const Composition& k, const std::vector<long>& lambda) {
  Rational v = 1;
  for (std::size_t i = 0; i < lambda.size(); ++i) v *= pow(Rational(lambda[i]), static_cast<unsigned long>(k[i]));
  return v;
}

// Returns V_k (coefficients already divided by the multinomial).
std::vector<Rational> interpolate(int dim, int r, const std::function<Rational(const std::vector<long>&)>& eval) {
  auto keys = enumerate_lattice(dim, r);
  const std::size_t m = keys.size();
  std::vector<std::vector<Rational>> a(m, std::vector<Rational>(m));
  std::vector<Rational> b(m);
  for (std::size_t row = 0; row < m; ++row) {
    std::vector<long> lambda(static_cast<std::size_t>(r), 1);
    for (int i = 0; i + 1 < r; ++i) lambda[static_cast<std::size_t>(i)] = 1 + keys.at(row)[static_cast<std::size_t>(i)];
    for (std::size_t col = 0; col < m; ++col) a[row][col] = monomial(keys.at(col), lambda);
    b[row] = eval(lambda);
  }
  auto coef = solve_exact(std::move(a), std::move(b));
  std::vector<long> probe(static_cast<std::size_t>(r));
  for (int i = 0; i < r; ++i) probe[static_cast<std::size_t>(i)] = i + 2;
  Rational predicted = 0;
  for (std::size_t col = 0; col < m; ++col) predicted += coef[col] * monomial(keys.at(col), probe);
  if (predicted != eval(probe)) throw StructuralError("interpolated polynomial misses an off-grid evaluation");
  for (std::size_t col = 0; col < m; ++col) coef[col] /= Rational(multinomial(dim, keys.at(col).parts()));
  return coef;
}

}  // namespace

RationalPolytope::RationalPolytope(int dim, const std::vector<std::vector<Rational>>& points) : dim_(dim), den_(1) {
  check_dim(dim);
  if (points.empty()) throw DomainError("polytope needs at least one point");
  for (const auto& p : points) {
    if (static_cast<int>(p.size()) != dim) throw DomainError("point of wrong dimension");
    for (const auto& c : p) den_ = lcm(den_, c.get_den());
  }
  std::vector<IntPoint> scaled;
  for (const auto& p : points) {
    IntPoint q{0, 0, 0};
    for (std::size_t i = 0; i < p.size(); ++i) q[i] = to_coord(Integer(p[i].get_num() * (den_ / p[i].get_den())));
    scaled.push_back(q);
  }
  *this = RationalPolytope(dim, std::move(scaled), den_);
}

RationalPolytope::RationalPolytope(int dim, std::vector<IntPoint> points, const Integer& denominator)
    : dim_(dim), den_(denominator) {
  check_dim(dim);
  if (sgn(den_) <= 0) throw DomainError("denominator must be positive");
  auto a = analyze(dim, std::move(points));
  points_ = std::move(a.vertices);
  affine_dim_ = a.affine_dim;
  scaled_volume_ = a.scaled_volume;
  // Canonical denominator.
  Integer g = den_;
  for (const auto& p : points_) {
    for (auto c : p) mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), Integer(static_cast<long>(c)).get_mpz_t());
  }
  if (g > 1) {
    const long gl = g.get_si();
    for (auto& p : points_) {
      for (auto& c : p) c /= gl;
    }
    den_ /= g;
    for (int i = 0; i < dim_; ++i) scaled_volume_ /= g;
  }
}

RationalPolytope RationalPolytope::origin(int dim) { return RationalPolytope(dim, {IntPoint{0, 0, 0}}, Integer(1)); }

std::vector<std::vector<Rational>> RationalPolytope::vertices() const {
  std::vector<std::vector<Rational>> out;
  for (const auto& p : points_) {
    std::vector<Rational> v;
    for (int i = 0; i < dim_; ++i) {
      Rational q(Integer(static_cast<long>(p[static_cast<std::size_t>(i)])), den_);
      q.canonicalize();
      v.push_back(q);
    }
    out.push_back(std::move(v));
  }
  return out;
}

RationalPolytope RationalPolytope::scaled(const Rational& t) const {
  if (sgn(t) == 0) return origin(dim_);
  return RationalPolytope(dim_, scale_points(points_, t.get_num()), den_ * t.get_den());
}

RationalPolytope RationalPolytope::translated(const std::vector<Rational>& v) const {
  if (static_cast<int>(v.size()) != dim_) throw DomainError("translation of wrong dimension");
  Integer d = den_;
  for (const auto& c : v) d = lcm(d, c.get_den());
  auto pts = scale_points(points_, d / den_);
  for (auto& p : pts) {
    for (int i = 0; i < dim_; ++i) {
      const auto& c = v[static_cast<std::size_t>(i)];
      p[static_cast<std::size_t>(i)] = to_coord(Integer(p[static_cast<std::size_t>(i)] + c.get_num() * (d / c.get_den())));
    }
  }
  return RationalPolytope(dim_, std::move(pts), d);
}

Rational volume(const RationalPolytope& p) {
  Integer den = factorial(p.dim_);
  for (int i = 0; i < p.dim_; ++i) den *= p.den_;
  Rational out(p.scaled_volume_, den);
  out.canonicalize();
  return out;
}

RationalPolytope minkowski_sum(const RationalPolytope& p, const RationalPolytope& q) {
  if (p.dim() != q.dim()) throw DomainError("Minkowski sum of bodies of different dimension");
  Integer d = lcm(p.denominator(), q.denominator());
  return RationalPolytope(p.dim(),
                          pairwise_sums(scale_points(p.scaled_points(), d / p.denominator()),
                                        scale_points(q.scaled_points(), d / q.denominator())),
                          d);
}

namespace {

void check_bodies(const std::vector<RationalPolytope>& bodies) {
  if (bodies.empty()) throw DomainError("need at least one body");
  for (const auto& b : bodies) {
    if (b.dim() != bodies.front().dim()) throw DomainError("bodies of different dimension");
  }
}

void check_polyhedra(const std::vector<NewtonPolyhedron>& polys) {
  if (polys.empty()) throw DomainError("need at least one Newton polyhedron");
  for (const auto& p : polys) {
    if (p.dim() != polys.front().dim()) throw DomainError("Newton polyhedra of different dimension");
  }
}

}  // namespace

Rational combination_volume(const std::vector<RationalPolytope>& bodies, const std::vector<long>& lambda) {
  check_bodies(bodies);
  if (lambda.size() != bodies.size()) throw DomainError("one λ per body required");
  const int dim = bodies.front().dim();
  Integer d = 1;
  for (const auto& b : bodies) d = lcm(d, b.denominator());
  std::vector<IntPoint> acc{IntPoint{0, 0, 0}};
  for (std::size_t i = 0; i < bodies.size(); ++i) {
    if (lambda[i] < 0) throw DomainError("λ must be non-negative");
    if (lambda[i] == 0) continue;
    auto pts = scale_points(bodies[i].scaled_points(), d / bodies[i].denominator() * lambda[i]);
    acc = analyze(dim, pairwise_sums(acc, pts)).vertices;
  }
  Integer den = factorial(dim);
  for (int i = 0; i < dim; ++i) den *= d;
  Rational out(analyze(dim, acc).scaled_volume, den);
  out.canonicalize();
  return out;
}

NewtonPolyhedron::NewtonPolyhedron(int dim, const std::vector<std::vector<long>>& generators) : dim_(dim) {
  check_dim(dim);
  if (generators.empty()) throw DomainError("Newton polyhedron needs generators");
  for (const auto& g : generators) {
    if (static_cast<int>(g.size()) != dim) throw DomainError("generator of wrong dimension");
    for (long c : g) {
      if (c < 0) throw DomainError("generators must be non-negative");
      if (c >= kCoordinateLimit) throw DomainError("generator coordinate too large");
    }
  }
  generators_ = generators;
  std::sort(generators_.begin(), generators_.end());
  generators_.erase(std::unique(generators_.begin(), generators_.end()), generators_.end());
  for (int axis = 0; axis < dim; ++axis) {
    bool found = std::any_of(generators_.begin(), generators_.end(), [&](const std::vector<long>& g) {
      for (int i = 0; i < dim; ++i) {
        if ((i == axis) != (g[static_cast<std::size_t>(i)] > 0)) return false;
      }
      return true;
    });
    if (!found) {
      throw DomainError("Newton polyhedron is not convenient: no generator on axis x" + std::to_string(axis + 1));
    }
  }
  std::vector<IntPoint> pts;
  for (const auto& g : generators_) {
    IntPoint q{0, 0, 0};
    for (int i = 0; i < dim; ++i) q[static_cast<std::size_t>(i)] = g[static_cast<std::size_t>(i)];
    pts.push_back(q);
  }
  reduced_ = newton_reduce(dim, pts);
}

std::vector<std::vector<long>> NewtonPolyhedron::vertices() const {
  std::vector<std::vector<long>> out;
  for (const auto& p : reduced_) out.emplace_back(p.begin(), p.begin() + dim_);
  return out;
}

long NewtonPolyhedron::max_coordinate() const {
  long top = 0;
  for (const auto& g : generators_) top = std::max(top, *std::max_element(g.begin(), g.end()));
  return top;
}

NewtonPolyhedron NewtonPolyhedron::scaled(long d) const {
  if (d <= 0) throw DomainError("scale factor must be a positive integer");
  auto gens = generators_;
  for (auto& g : gens) {
    for (auto& c : g) c *= d;
  }
  return NewtonPolyhedron(dim_, gens);
}

NewtonPolyhedron minkowski_sum(const NewtonPolyhedron& a, const NewtonPolyhedron& b) {
  if (a.dim() != b.dim()) throw DomainError("Minkowski sum of polyhedra of different dimension");
  std::vector<std::vector<long>> gens;
  for (const auto& p : pairwise_sums(a.reduced_points(), b.reduced_points())) gens.emplace_back(p.begin(), p.begin() + a.dim());
  return NewtonPolyhedron(a.dim(), gens);
}

Rational covolume(const NewtonPolyhedron& g, std::optional<long> box) {
  const long m = box.value_or(g.dim() * g.max_coordinate());
  std::vector<IntPoint> pts;
  for (const auto& v : g.generators()) {
    IntPoint q{0, 0, 0};
    for (int i = 0; i < g.dim(); ++i) q[static_cast<std::size_t>(i)] = v[static_cast<std::size_t>(i)];
    pts.push_back(q);
  }
  return covolume_of(g.dim(), pts, m);
}

Rational combination_covolume(const std::vector<NewtonPolyhedron>& polyhedra, const std::vector<long>& lambda) {
  check_polyhedra(polyhedra);
  if (lambda.size() != polyhedra.size()) throw DomainError("one λ per polyhedron required");
  const int dim = polyhedra.front().dim();
  std::optional<std::vector<IntPoint>> acc;
  for (std::size_t i = 0; i < polyhedra.size(); ++i) {
    if (lambda[i] < 0) throw DomainError("λ must be non-negative");
    if (lambda[i] == 0) continue;  // 0·Γ+ is the orthant itself
    auto pts = scale_points(polyhedra[i].reduced_points(), Integer(lambda[i]));
    acc = acc ? newton_reduce(dim, pairwise_sums(*acc, pts)) : pts;
  }
  if (!acc) throw DomainError("at least one λ must be positive");
  std::int64_t top = 0;
  for (const auto& p : *acc) top = std::max({top, p[0], p[1], p[2]});
  return covolume_of(dim, *acc, dim * top);
}

MixedVolumeTable::MixedVolumeTable(int dim, int bodies, std::vector<Rational> values)
    : dim_(dim), lattice_(make_lattice(dim, bodies)), values_(std::move(values)) {
  if (values_.size() != lattice_->size()) throw DomainError("mixed volume table has the wrong number of entries");
}

Rational MixedVolumeTable::evaluate(const std::vector<Rational>& lambda) const {
  if (static_cast<int>(lambda.size()) != bodies()) throw DomainError("one λ per body required");
  Rational out = 0;
  for (std::size_t i = 0; i < values_.size(); ++i) {
    Rational term = Rational(multinomial(dim_, lattice_->at(i).parts())) * values_[i];
    for (std::size_t j = 0; j < lambda.size(); ++j) term *= pow(lambda[j], static_cast<unsigned long>(lattice_->at(i)[j]));
    out += term;
  }
  return out;
}

MixedVolumeTable mixed_volumes(const std::vector<RationalPolytope>& bodies) {
  check_bodies(bodies);
  const int dim = bodies.front().dim();
  const int r = static_cast<int>(bodies.size());
  return MixedVolumeTable(dim, r, interpolate(dim, r, [&](const std::vector<long>& l) { return combination_volume(bodies, l); }));
}

MixedVolumeTable mixed_covolumes(const std::vector<NewtonPolyhedron>& polyhedra) {
  check_polyhedra(polyhedra);
  const int dim = polyhedra.front().dim();
  const int r = static_cast<int>(polyhedra.size());
  return MixedVolumeTable(dim, r,
                          interpolate(dim, r, [&](const std::vector<long>& l) { return combination_covolume(polyhedra, l); }));
}

Rational mixed_volume_polarization(const std::vector<RationalPolytope>& bodies) {
  check_bodies(bodies);
  const int dim = bodies.front().dim();
  if (static_cast<int>(bodies.size()) != dim) throw DomainError("polarization needs exactly N bodies");
  Rational acc = 0;
  for (unsigned mask = 1; mask < (1u << dim); ++mask) {
    std::vector<long> lambda(bodies.size());
    int size = 0;
    for (int i = 0; i < dim; ++i) {
      lambda[static_cast<std::size_t>(i)] = (mask >> i) & 1u;
      size += static_cast<int>((mask >> i) & 1u);
    }
    Rational v = combination_volume(bodies, lambda);
    acc += (dim - size) % 2 == 0 ? v : Rational(-v);
  }
  return acc / Rational(factorial(dim));
}

namespace {

Composition all_ones(int dim) { return Composition(std::vector<int>(static_cast<std::size_t>(dim), 1)); }

}  // namespace

Rational mixed_volume(const std::vector<RationalPolytope>& bodies) {
  check_bodies(bodies);
  if (static_cast<int>(bodies.size()) != bodies.front().dim()) throw DomainError("mixed volume needs exactly N bodies");
  return mixed_volumes(bodies).at(all_ones(bodies.front().dim()));
}

Rational mixed_covolume(const std::vector<NewtonPolyhedron>& polyhedra) {
  check_polyhedra(polyhedra);
  if (static_cast<int>(polyhedra.size()) != polyhedra.front().dim()) {
    throw DomainError("mixed covolume needs exactly N polyhedra");
  }
  return mixed_covolumes(polyhedra).at(all_ones(polyhedra.front().dim()));
}

namespace {

template <class Body, class Sum, class Mixed>
MultilinearityReport multilinear(const Body& a, const Body& b, const std::vector<Body>& rest, Sum sum, Mixed mixed) {
  auto with = [&](const Body& first) {
    std::vector<Body> list{first};
    list.insert(list.end(), rest.begin(), rest.end());
    return mixed(list);
  };
  MultilinearityReport rep;
  rep.sum_value = with(sum(a, b));
  rep.first_value = with(a);
  rep.second_value = with(b);
  rep.holds = rep.sum_value == rep.first_value + rep.second_value;
  return rep;
}

template <class Table>
QuadraticReport quadratic(const Table& t, int dim, bool reverse) {
  std::vector<int> ones(static_cast<std::size_t>(dim), 1), first(ones), second(ones);
  first[0] = 2;
  first[1] = 0;
  second[0] = 0;
  second[1] = 2;
  QuadraticReport rep;
  rep.mixed = t.at(Composition(ones));
  rep.lhs = rep.mixed * rep.mixed;
  rep.rhs = t.at(Composition(first)) * t.at(Composition(second));
  rep.holds = reverse ? rep.lhs <= rep.rhs : rep.lhs >= rep.rhs;
  rep.equality = rep.lhs == rep.rhs;
  return rep;
}

}  // namespace

MultilinearityReport multilinearity_check(const RationalPolytope& a11, const RationalPolytope& a12,
                                          const std::vector<RationalPolytope>& rest) {
  return multilinear(a11, a12, rest, [](const auto& x, const auto& y) { return minkowski_sum(x, y); },
                     [](const auto& l) { return mixed_volume(l); });
}

MultilinearityReport multilinearity_check(const NewtonPolyhedron& g11, const NewtonPolyhedron& g12,
                                          const std::vector<NewtonPolyhedron>& rest) {
  return multilinear(g11, g12, rest, [](const auto& x, const auto& y) { return minkowski_sum(x, y); },
                     [](const auto& l) { return mixed_covolume(l); });
}

QuadraticReport verify_af(const std::vector<RationalPolytope>& bodies) {
  check_bodies(bodies);
  const int dim = bodies.front().dim();
  if (dim < 2 || static_cast<int>(bodies.size()) != dim) throw DomainError("Alexandrov-Fenchel needs exactly N >= 2 bodies");
  return quadratic(mixed_volumes(bodies), dim, false);
}

QuadraticReport verify_teissier(const std::vector<NewtonPolyhedron>& polyhedra) {
  check_polyhedra(polyhedra);
  const int dim = polyhedra.front().dim();
  if (dim < 2 || static_cast<int>(polyhedra.size()) != dim) throw DomainError("Teissier needs exactly N >= 2 polyhedra");
  return quadratic(mixed_covolumes(polyhedra), dim, true);
}

RationalPolytope random_polytope(Rng& rng, int dim, long bound, int points) {
  check_dim(dim);
  if (points < dim + 1 || bound < 1) throw DomainError("need at least N+1 points and a positive bound");
  for (;;) {
    std::vector<IntPoint> pts;
    for (int k = 0; k < points; ++k) {
      IntPoint q{0, 0, 0};
      for (int i = 0; i < dim; ++i) q[static_cast<std::size_t>(i)] = rng.uniform(0, bound);
      pts.push_back(q);
    }
    RationalPolytope p(dim, std::move(pts), Integer(1));
    if (p.affine_dim() == dim) return p;
  }
}

NewtonPolyhedron random_newton(Rng& rng, int dim, long bound, int extra) {
  check_dim(dim);
  if (bound < 1 || extra < 0) throw DomainError("need a positive bound");
  std::vector<std::vector<long>> gens;
  for (int i = 0; i < dim; ++i) {
    std::vector<long> g(static_cast<std::size_t>(dim), 0);
    g[static_cast<std::size_t>(i)] = rng.uniform(1, bound);
    gens.push_back(g);
  }
  for (int k = 0; k < extra;) {
    std::vector<long> g(static_cast<std::size_t>(dim));
    for (auto& c : g) c = rng.uniform(0, bound);
    if (std::all_of(g.begin(), g.end(), [](long c) { return c == 0; })) continue;
    gens.push_back(g);
    ++k;
  }
  return NewtonPolyhedron(dim, gens);
}

}  // namespace compfkg
