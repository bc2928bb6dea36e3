#include "geometry.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <stdexcept>

namespace pcs {

Point operator+(const Point& a, const Point& b) {
  Point r = a;
  for (int i = 0; i < a.dim; ++i) r.v[i] += b.v[i];
  return r;
}

Point operator-(const Point& a, const Point& b) {
  Point r = a;
  for (int i = 0; i < a.dim; ++i) r.v[i] -= b.v[i];
  return r;
}

Point operator*(double s, const Point& a) {
  Point r = a;
  for (int i = 0; i < a.dim; ++i) r.v[i] *= s;
  return r;
}

double norm(const Point& a) {
  double s = 0.0;
  for (int i = 0; i < a.dim; ++i) s += a.v[i] * a.v[i];
  return std::sqrt(s);
}

double dist(const Point& a, const Point& b) { return norm(a - b); }

bool BoundingSphere::contains(const Point& p, double tol) const {
  return dist(p, center) <= radius + tol;
}

bool AxisBox::contains(const Point& p, double tol) const {
  for (int i = 0; i < p.dim; ++i) {
    if (p.v[i] < lower.v[i] - tol || p.v[i] > upper.v[i] + tol) return false;
  }
  return true;
}

Point RotationMatrix::apply(const Point& p) const {
  Point r = p;
  for (int i = 0; i < dim; ++i) {
    double s = 0.0;
    for (int j = 0; j < dim; ++j) s += m[i][j] * p.v[j];
    r.v[i] = s;
  }
  return r;
}

namespace {

RotationMatrix axis_rotation(int axis, double rad) {
  double c = std::cos(rad), s = std::sin(rad);
  RotationMatrix r;
  r.m = {{{1, 0, 0}, {0, 1, 0}, {0, 0, 1}}};
  int a = (axis + 1) % 3, b = (axis + 2) % 3;
  r.m[a][a] = c;
  r.m[a][b] = -s;
  r.m[b][a] = s;
  r.m[b][b] = c;
  return r;
}

RotationMatrix multiply(const RotationMatrix& a, const RotationMatrix& b) {
  RotationMatrix r;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) {
      double s = 0.0;
      for (int k = 0; k < 3; ++k) s += a.m[i][k] * b.m[k][j];
      r.m[i][j] = s;
    }
  return r;
}

double deg2rad(double d) { return d * std::numbers::pi / 180.0; }

}  // namespace

RotationMatrix rotation_matrix(const std::vector<double>& angles_deg, int dim,
                               Handedness hand, ComposeOrder order) {
  double sign = (hand == Handedness::Ccw) ? 1.0 : -1.0;
  if (dim == 2) {
    if (angles_deg.size() != 1)
      throw std::invalid_argument("rotation_matrix: d=2 takes one angle");
    double a = sign * deg2rad(angles_deg[0]);
    RotationMatrix r;
    r.dim = 2;
    r.m = {{{std::cos(a), -std::sin(a), 0},
            {std::sin(a), std::cos(a), 0},
            {0, 0, 1}}};
    return r;
  }
  if (dim != 3 || angles_deg.size() != 3)
    throw std::invalid_argument("rotation_matrix: d=3 takes three angles");
  RotationMatrix rx = axis_rotation(0, sign * deg2rad(angles_deg[0]));
  RotationMatrix ry = axis_rotation(1, sign * deg2rad(angles_deg[1]));
  RotationMatrix rz = axis_rotation(2, sign * deg2rad(angles_deg[2]));
  RotationMatrix r = (order == ComposeOrder::Xyz) ? multiply(multiply(rx, ry), rz)
                                                  : multiply(multiply(rz, ry), rx);
  r.dim = 3;
  return r;
}

namespace {

// Smallest ball with all support points on its boundary, or an invalid ball
// (radius < 0) when the support set is degenerate.
struct Ball {
  Point center;
  double radius{-1.0};
  bool valid() const { return radius >= 0.0; }
  bool contains(const Point& p, double tol = 1e-9) const {
    return valid() && dist(p, center) <= radius + tol;
  }
};

Ball circumball(const std::vector<Point>& s, int dim) {
  Ball b;
  std::size_t k = s.size();
  if (k == 0) return b;
  if (k == 1) {
    b.center = s[0];
    b.radius = 0.0;
    return b;
  }
  if (k == 2) {
    b.center = 0.5 * (s[0] + s[1]);
    b.center.dim = dim;
    b.radius = dist(s[0], s[1]) / 2.0;
    return b;
  }
  // Solve (p_i - p_0) . (c - p_0) = |p_i - p_0|^2 / 2 with Gaussian
  // elimination on the (k-1)x(k-1) Gram-like system; c - p_0 lies in the
  // affine hull of the support points.
  std::size_t m = k - 1;
  double A[3][3] = {};
  double rhs[3] = {};
  double u[3][3] = {};  // spanning vectors
  for (std::size_t i = 0; i < m; ++i) {
    for (int d = 0; d < dim; ++d) u[i][d] = s[i + 1].v[d] - s[0].v[d];
  }
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = 0; j < m; ++j) {
      double dot = 0.0;
      for (int d = 0; d < dim; ++d) dot += u[i][d] * u[j][d];
      A[i][j] = dot;
    }
    double n2 = 0.0;
    for (int d = 0; d < dim; ++d) n2 += u[i][d] * u[i][d];
    rhs[i] = n2 / 2.0;
  }
  // scale reference for the singularity test
  double amax = 0.0;
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = 0; j < m; ++j) amax = std::max(amax, std::abs(A[i][j]));
  std::size_t perm[3] = {0, 1, 2};
  for (std::size_t col = 0; col < m; ++col) {
    std::size_t piv = col;
    for (std::size_t r2 = col + 1; r2 < m; ++r2)
      if (std::abs(A[r2][col]) > std::abs(A[piv][col])) piv = r2;
    if (piv != col) {
      std::swap(perm[piv], perm[col]);
      std::swap(rhs[piv], rhs[col]);
      for (std::size_t j = 0; j < m; ++j) std::swap(A[piv][j], A[col][j]);
    }
    if (std::abs(A[col][col]) <= 1e-12 * std::max(amax, 1.0)) return b;  // degenerate
    for (std::size_t r2 = col + 1; r2 < m; ++r2) {
      double f = A[r2][col] / A[col][col];
      for (std::size_t j = col; j < m; ++j) A[r2][j] -= f * A[col][j];
      rhs[r2] -= f * rhs[col];
    }
  }
  double lam[3] = {};
  for (std::size_t ri = m; ri-- > 0;) {
    double acc = rhs[ri];
    for (std::size_t j = ri + 1; j < m; ++j) acc -= A[ri][j] * lam[j];
    lam[ri] = acc / A[ri][ri];
  }
  b.center = s[0];
  for (std::size_t i = 0; i < m; ++i)
    for (int d = 0; d < dim; ++d) b.center.v[d] += lam[i] * u[i][d];
  b.center.dim = dim;
  b.radius = dist(b.center, s[0]);
  return b;
}

// Minimal ball of at most dim+1 points, by support-subset enumeration.
Ball ball_of_support(const std::vector<Point>& s, int dim) {
  Ball best;
  std::size_t n = s.size();
  for (std::size_t mask = 1; mask < (1u << n); ++mask) {
    std::vector<Point> sub;
    for (std::size_t i = 0; i < n; ++i)
      if (mask & (1u << i)) sub.push_back(s[i]);
    if (sub.size() > static_cast<std::size_t>(dim) + 1) continue;
    Ball cand = circumball(sub, dim);
    if (!cand.valid()) continue;
    bool covers = true;
    for (const Point& p : s)
      if (!cand.contains(p)) {
        covers = false;
        break;
      }
    if (covers && (!best.valid() || cand.radius < best.radius)) best = cand;
  }
  return best;
}

Ball welzl(std::vector<Point>& pts, std::size_t n, std::vector<Point>& support,
           int dim) {
  if (n == 0 || support.size() == static_cast<std::size_t>(dim) + 1)
    return ball_of_support(support, dim);
  Ball b = welzl(pts, n - 1, support, dim);
  const Point& p = pts[n - 1];
  if (b.contains(p)) return b;
  support.push_back(p);
  b = welzl(pts, n - 1, support, dim);
  support.pop_back();
  // move-to-front
  std::rotate(pts.begin(), pts.begin() + static_cast<std::ptrdiff_t>(n) - 1,
              pts.begin() + static_cast<std::ptrdiff_t>(n));
  return b;
}

}  // namespace

BoundingSphere min_enclosing_sphere(const PointCloud& cloud) {
  if (cloud.empty())
    throw std::invalid_argument("min_enclosing_sphere: empty cloud");
  std::vector<Point> pts = cloud.pts;
  // deterministic shuffle keeps the expected-linear behaviour without
  // making results run-dependent
  std::mt19937_64 rng(0x9e3779b97f4a7c15ull ^ pts.size());
  std::shuffle(pts.begin(), pts.end(), rng);
  std::vector<Point> support;
  Ball b = welzl(pts, pts.size(), support, cloud.dim);
  BoundingSphere s;
  s.center = b.center;
  s.center.dim = cloud.dim;
  s.radius = b.radius;
  return s;
}

ExtentStats extent_stats(const Point& center) {
  ExtentStats e;
  e.m0 = center.v[0];
  e.M0 = center.v[0];
  for (int i = 1; i < center.dim; ++i) {
    e.m0 = std::min(e.m0, center.v[i]);
    e.M0 = std::max(e.M0, center.v[i]);
  }
  e.rho = 0.0;
  return e;
}

ExtentStats shuffle_extent_pure(const AxisBox& box) {
  ExtentStats e;
  e.m0 = std::min(box.lower.v[0], box.lower.v[1]);
  e.M0 = std::max(box.upper.v[0], box.upper.v[1]);
  e.rho = std::numbers::sqrt2 * (e.M0 - e.m0);
  return e;
}

double shuffle_extent_mixed_2d(const Point& center, double r) {
  if (r <= 0.0) throw std::invalid_argument("shuffle_extent_mixed_2d: r <= 0");
  return 4.0 * r + std::numbers::sqrt2 * std::abs(center.v[0] - center.v[1]);
}

ExtentStats shuffle_extent_mixed_3d(const Point& center, double r_p) {
  if (r_p <= 0.0)
    throw std::invalid_argument("shuffle_extent_mixed_3d: r_p <= 0");
  ExtentStats base = extent_stats(center);
  ExtentStats e;
  e.m0 = base.m0 - std::numbers::sqrt3 * r_p;
  e.M0 = base.M0 + std::numbers::sqrt3 * r_p;
  e.rho = std::numbers::sqrt3 * (e.M0 - e.m0);
  return e;
}

AxisBox shuffled_cube(const Point& center, double r_p) {
  ExtentStats e = shuffle_extent_mixed_3d(center, r_p);
  AxisBox box;
  box.lower = Point(e.m0, e.m0, e.m0);
  box.upper = Point(e.M0, e.M0, e.M0);
  return box;
}

}  // namespace pcs
