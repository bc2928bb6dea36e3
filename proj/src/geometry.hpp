#pragma once

#include <array>
#include <cstddef>
#include <vector>

namespace pcs {

// A 2D or 3D point. The unused third slot stays zero in 2D mode so the
// storage layout is uniform.
struct Point {
  std::array<double, 3> v{0.0, 0.0, 0.0};
  int dim{3};

  Point() = default;
  Point(double x, double y) : v{x, y, 0.0}, dim(2) {}
  Point(double x, double y, double z) : v{x, y, z}, dim(3) {}

  double& operator[](std::size_t i) { return v[i]; }
  double operator[](std::size_t i) const { return v[i]; }
};

Point operator+(const Point& a, const Point& b);
Point operator-(const Point& a, const Point& b);
Point operator*(double s, const Point& a);
double norm(const Point& a);
double dist(const Point& a, const Point& b);

struct PointCloud {
  std::vector<Point> pts;
  int dim{3};

  std::size_t size() const { return pts.size(); }
  bool empty() const { return pts.empty(); }
};

struct BoundingSphere {
  Point center;
  double radius{0.0};

  bool contains(const Point& p, double tol = 1e-9) const;
};

struct AxisBox {
  Point lower;
  Point upper;

  bool contains(const Point& p, double tol = 1e-9) const;
};

struct ExtentStats {
  double m0{0.0};
  double M0{0.0};
  double rho{0.0};
};

enum class Handedness { Ccw, Cw };

// Order in which the per-axis factors are multiplied: Xyz composes
// Rx*Ry*Rz, Zyx composes Rz*Ry*Rx (both applied to column vectors).
enum class ComposeOrder { Xyz, Zyx };

struct RotationMatrix {
  std::array<std::array<double, 3>, 3> m{};
  int dim{3};

  Point apply(const Point& p) const;
};

// Angles in degrees; one angle for d=2, three (about X, Y, Z) for d=3.
RotationMatrix rotation_matrix(const std::vector<double>& angles_deg, int dim,
                               Handedness hand = Handedness::Ccw,
                               ComposeOrder order = ComposeOrder::Xyz);

// Exact minimal enclosing ball (Welzl, move-to-front), d in {2,3}.
BoundingSphere min_enclosing_sphere(const PointCloud& cloud);

ExtentStats extent_stats(const Point& center);

// Farthest-pair estimate when only the plaintext coordinates are shuffled:
// every shuffled point stays in the square [m,M]^2.
ExtentStats shuffle_extent_pure(const AxisBox& box);

// 2D estimate when plaintext coordinates are mixed with anchor coordinates
// drawn from the sqrt(2)r ball: rho = 4r + sqrt(2)|p1 - p2|.
double shuffle_extent_mixed_2d(const Point& center, double r);

// 3D analogue: M = M0 + sqrt(3) r_p, m = m0 - sqrt(3) r_p, rho = sqrt(3)(M-m).
ExtentStats shuffle_extent_mixed_3d(const Point& center, double r_p);

// The cube that contains every coordinate-shuffled point of the plaintext
// plus anchors, all axes bounded by [m0 - sqrt(3) r_p, M0 + sqrt(3) r_p].
AxisBox shuffled_cube(const Point& center, double r_p);

}  // namespace pcs
