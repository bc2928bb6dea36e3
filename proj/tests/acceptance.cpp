// Acceptance gate: one pass/fail line per criterion, nonzero exit on any
// failure. Each criterion is self-contained and uses independent oracles
// where the library result must be cross-checked.
#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <random>
#include <vector>

#include "driver.hpp"

using namespace pcs;

namespace {

int g_failures = 0;

void criterion(int n, bool ok, const char* what) {
  std::printf("criterion %2d: %s — %s\n", n, ok ? "PASS" : "FAIL", what);
  if (!ok) ++g_failures;
}

// ---- independent oracles ------------------------------------------------

double t3(double x) { return 4 * x * x * x - 3 * x; }
double t4(double x) { return 8 * x * x * x * x - 8 * x * x + 1; }
double t5(double x) {
  return 16 * std::pow(x, 5) - 20 * std::pow(x, 3) + 5 * x;
}

struct V3 {
  double x{0}, y{0}, z{0};
};
V3 sub(const Point& a, const Point& b) {
  return {a.v[0] - b.v[0], a.v[1] - b.v[1], a.v[2] - b.v[2]};
}
V3 cross(V3 a, V3 b) {
  return {a.y * b.z - a.z * b.y, a.z * b.x - a.x * b.z, a.x * b.y - a.y * b.x};
}
double dot(V3 a, V3 b) { return a.x * b.x + a.y * b.y + a.z * b.z; }

bool circum3(const Point& p1, const Point& p2, const Point& p3, Point& c,
             double& r) {
  V3 a = sub(p2, p1), b = sub(p3, p1);
  V3 axb = cross(a, b);
  double denom = 2.0 * dot(axb, axb);
  if (denom < 1e-20) return false;
  double la = dot(a, a), lb = dot(b, b);
  V3 t = cross({la * b.x - lb * a.x, la * b.y - lb * a.y, la * b.z - lb * a.z},
               axb);
  c = p1;
  c.v[0] += t.x / denom;
  c.v[1] += t.y / denom;
  c.v[2] += t.z / denom;
  r = dist(c, p1);
  return true;
}

bool circum4(const Point& p1, const Point& p2, const Point& p3, const Point& p4,
             Point& c, double& r) {
  double m[3][3], rhs[3];
  const Point* ps[3] = {&p2, &p3, &p4};
  auto sq = [](const Point& p) {
    return p.v[0] * p.v[0] + p.v[1] * p.v[1] + p.v[2] * p.v[2];
  };
  for (int i = 0; i < 3; ++i) {
    for (int j = 0; j < 3; ++j) m[i][j] = 2 * (ps[i]->v[j] - p1.v[j]);
    rhs[i] = sq(*ps[i]) - sq(p1);
  }
  double det = m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1]) -
               m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0]) +
               m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0]);
  if (std::abs(det) < 1e-10) return false;
  auto solve_col = [&](int col) {
    double t[3][3];
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) t[i][j] = (j == col) ? rhs[i] : m[i][j];
    return (t[0][0] * (t[1][1] * t[2][2] - t[1][2] * t[2][1]) -
            t[0][1] * (t[1][0] * t[2][2] - t[1][2] * t[2][0]) +
            t[0][2] * (t[1][0] * t[2][1] - t[1][1] * t[2][0])) /
           det;
  };
  c.dim = 3;
  for (int j = 0; j < 3; ++j) c.v[j] = solve_col(j);
  r = dist(c, p1);
  return true;
}

bool brute_meb(const PointCloud& cloud, Point& center, double& radius) {
  std::size_t n = cloud.size();
  bool found = false;
  double best = 0;
  Point bc;
  auto consider = [&](const Point& c, double r) {
    for (const Point& p : cloud.pts)
      if (dist(p, c) > r + 1e-9) return;
    if (!found || r < best) {
      found = true;
      best = r;
      bc = c;
    }
  };
  for (std::size_t i = 0; i < n; ++i) consider(cloud.pts[i], 0.0);
  Point c;
  double r;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) {
      consider(0.5 * (cloud.pts[i] + cloud.pts[j]),
               dist(cloud.pts[i], cloud.pts[j]) / 2);
      for (std::size_t k = j + 1; k < n; ++k) {
        if (circum3(cloud.pts[i], cloud.pts[j], cloud.pts[k], c, r))
          consider(c, r);
        if (cloud.dim == 3)
          for (std::size_t l = k + 1; l < n; ++l)
            if (circum4(cloud.pts[i], cloud.pts[j], cloud.pts[k], cloud.pts[l],
                        c, r))
              consider(c, r);
      }
    }
  center = bc;
  radius = best;
  return found;
}

PointCloud random_cloud(std::mt19937_64& rng, std::size_t n, int dim,
                        const Point& center, double radius) {
  std::normal_distribution<double> gauss;
  std::uniform_real_distribution<double> uni(0, 1);
  PointCloud cloud;
  cloud.dim = dim;
  for (std::size_t i = 0; i < n; ++i) {
    Point d;
    d.dim = dim;
    double nn = 0;
    do {
      for (int k = 0; k < dim; ++k) d.v[k] = gauss(rng);
      nn = norm(d);
    } while (nn == 0);
    cloud.pts.push_back(center +
                        (radius * std::pow(uni(rng), 1.0 / dim) / nn) * d);
  }
  return cloud;
}

// ---- criteria -----------------------------------------------------------

void crit1_chebyshev() {
  std::mt19937_64 rng(101);
  std::uniform_real_distribution<double> uni(-1, 1);
  bool ok = true;
  for (int i = 0; i < 100000 && ok; ++i) {
    double k = uni(rng);
    ok = std::abs(chebyshev_next(k, 3) - t3(k)) <= 1e-12 &&
         std::abs(chebyshev_next(k, 4) - t4(k)) <= 1e-12 &&
         std::abs(chebyshev_next(k, 5) - t5(k)) <= 1e-12;
  }
  criterion(1, ok, "1e5 Chebyshev iterates match T3/T4/T5 within 1e-12");
}

void crit2_rotations() {
  std::mt19937_64 rng(102);
  std::uniform_real_distribution<double> ang(-360, 360);
  bool ok = true;
  for (int i = 0; i < 10000 && ok; ++i) {
    auto rm = rotation_matrix({ang(rng), ang(rng), ang(rng)}, 3,
                              i % 2 ? Handedness::Ccw : Handedness::Cw,
                              i % 3 ? ComposeOrder::Xyz : ComposeOrder::Zyx);
    double maxdev = 0;
    for (int r = 0; r < 3; ++r)
      for (int c = 0; c < 3; ++c) {
        double s = 0;
        for (int k = 0; k < 3; ++k) s += rm.m[k][r] * rm.m[k][c];
        maxdev = std::max(maxdev, std::abs(s - (r == c ? 1.0 : 0.0)));
      }
    double det =
        rm.m[0][0] * (rm.m[1][1] * rm.m[2][2] - rm.m[1][2] * rm.m[2][1]) -
        rm.m[0][1] * (rm.m[1][0] * rm.m[2][2] - rm.m[1][2] * rm.m[2][0]) +
        rm.m[0][2] * (rm.m[1][0] * rm.m[2][1] - rm.m[1][1] * rm.m[2][0]);
    ok = maxdev <= 1e-12 && std::abs(det - 1.0) <= 1e-12;
  }
  criterion(2, ok, "1e4 rotation matrices orthogonal with det 1 (1e-12)");
}

void crit3_meb() {
  std::mt19937_64 rng(103);
  std::uniform_real_distribution<double> uni(-10, 10);
  std::uniform_int_distribution<int> nd(2, 8);
  bool ok = true;
  for (int i = 0; i < 1000 && ok; ++i) {
    int dim = i % 2 ? 2 : 3;
    PointCloud cloud;
    cloud.dim = dim;
    int n = nd(rng);
    for (int j = 0; j < n; ++j) {
      Point p;
      p.dim = dim;
      for (int k = 0; k < dim; ++k) p.v[k] = uni(rng);
      cloud.pts.push_back(p);
    }
    Point bc;
    double br;
    if (!brute_meb(cloud, bc, br)) {
      ok = false;
      break;
    }
    auto s = min_enclosing_sphere(cloud);
    ok = std::abs(s.radius - br) <= 1e-9 && dist(s.center, bc) <= 1e-9;
  }
  criterion(3, ok, "1e3 Welzl MEBs match brute-force enumeration (1e-9)");
}

void crit4_example1() {
  bool ok = true;
  std::mt19937_64 rng(104);
  for (double psi : {1.0 / 9.0, 0.05, 0.01, 0.001}) {
    CipherParams params;
    params.psi = psi;
    params.dimension = 2;
    params.explicit_keystream = {
        {1.0 / 3.0, -0.5, 0.25, -2.0 / 3.0, 0.8, 1.0 / 3.0}};
    params.explicit_perm = {1, 4, 2, 5, 3, 8, 6, 7};
    params.sphere_override = BoundingSphere{Point(0.0, 0.0), 1.0};

    PointCloud forged;
    forged.dim = 2;
    forged.pts = {Point(0.0, 0.0), Point(0.0, 0.0)};
    auto bad = decrypt_pipeline(forged, params);
    ok = ok && bad.classification == DecryptOutcome::Class::Inconsistent;

    PointCloud plain = random_cloud(rng, 2, 2, Point(0.0, 0.0), 1.0);
    auto trace = encrypt_pipeline(plain, params);
    auto genuine = decrypt_pipeline(trace.output, params);
    ok = ok &&
         genuine.classification == DecryptOutcome::Class::Underdetermined &&
         genuine.rank == 3 && genuine.unknowns == 4;
  }
  criterion(4, ok,
            "forged ciphertext inconsistent, genuine underdetermined "
            "(rank 3 of 4) across psi in (0,1/9]");
}

void crit5_example2() {
  json out = run_reproduce("example2", json::object());
  const json& rep = out.at("report");
  bool unstable = rep.at("dimensional") == false &&
                  rep.at("spatial") == false &&
                  rep.at("max_deviation").get<double>() > 100.0;
  criterion(5, unstable,
            "counterexample scenario is neither dimensionally nor "
            "spatially stable, max deviation > r_p");
  double delta = out.at("max_delta_vs_printed").get<double>();
  std::printf("              (stretch, non-blocking) printed cipher points "
              "matched to %.2e%s\n",
              delta, delta <= 1e-3 ? "" : "; closest convention recorded");
}

void crit6_lemma1() {
  VerifyConfig cfg;
  cfg.trials = 10000;
  cfg.seed = 106;
  auto sum = verify_bounds(cfg);
  criterion(6,
            sum.cube_violations == 0 && sum.pair_violations == 0 &&
                sum.bound_violations == 0,
            "1e4 trials: zero violations of the deviation bound, cube "
            "containment, and pair-distance bound");
}

void crit7_corollary1() {
  std::mt19937_64 rng(107);
  std::uniform_real_distribution<double> uni(0, 1);
  bool ok = true;
  for (int i = 0; i < 1000 && ok; ++i) {
    double psi = std::max(uni(rng), 1e-6);
    double rp = std::max(uni(rng) * 100, 1e-3);
    ok = lemma1_bound(psi, rp, Point(0, 0, 0)) == (psi + 1.0) * (6.0 * rp);
  }
  criterion(7, ok, "origin bound equals 6 (psi + 1) r_p exactly");
}

void crit8_lemma3() {
  VerifyConfig origin;
  origin.trials = 10000;
  origin.seed = 108;
  origin.variant = Variant::Modified;
  origin.origin_center = true;
  origin.psi_fixed = 1.0 / 12.0;
  auto a = verify_bounds(origin);

  VerifyConfig general;
  general.trials = 10000;
  general.seed = 109;
  general.variant = Variant::Modified;
  auto b = verify_bounds(general);

  criterion(8,
            a.bound_violations == 0 && a.witness_stable == a.trials &&
                b.bound_violations == 0,
            "1e4 origin trials at psi=1/12 all witness-stable; 1e4 "
            "general-center trials never violate the scaled bound");
}

void crit9_extents() {
  bool exact =
      std::abs(shuffle_extent_pure({Point(1, 3), Point(6, 8)}).rho -
               7 * std::numbers::sqrt2) <= 1e-12 &&
      std::abs(shuffle_extent_mixed_2d(Point(3, 4), 1.5) -
               (6 + std::numbers::sqrt2)) <= 1e-12 &&
      std::abs(shuffle_extent_mixed_3d(Point(10, 15, 20), 5.0).rho -
               (30 + 10 * std::numbers::sqrt3)) <= 1e-12;

  std::mt19937_64 rng(110);
  std::uniform_real_distribution<double> uni(-1, 1);
  bool contained = true;
  for (int i = 0; i < 1000 && contained; ++i) {
    int dim = i % 2 ? 2 : 3;
    Point center;
    center.dim = dim;
    for (int k = 0; k < dim; ++k) center.v[k] = uni(rng) * 50;
    double rp = std::abs(uni(rng)) * 20 + 0.5;
    std::size_t n = 2 + rng() % 7;
    PointCloud plain = random_cloud(rng, n, dim, center, rp);

    CipherParams params;
    for (double& k : params.key.k0) k = uni(rng);
    params.dimension = dim;
    params.sphere_override = BoundingSphere{center, rp};
    auto trace = encrypt_pipeline(plain, params);

    double m0 = center.v[0], M0 = center.v[0];
    for (int k = 1; k < dim; ++k) {
      m0 = std::min(m0, center.v[k]);
      M0 = std::max(M0, center.v[k]);
    }
    double pad = std::sqrt(static_cast<double>(dim)) * rp;
    auto inside = [&](const PointCloud& c) {
      for (const Point& p : c.pts)
        for (int k = 0; k < dim; ++k)
          if (p.v[k] < m0 - pad - 1e-9 || p.v[k] > M0 + pad + 1e-9)
            return false;
      return true;
    };
    contained = inside(trace.rounds[0].p_shuffled) &&
                inside(trace.rounds[0].o_shuffled);
  }
  criterion(9, exact && contained,
            "extent formulas exact to 1e-12; 1e3 shuffles stay inside the "
            "predicted square/cube");
}

void crit10_roundtrip() {
  std::mt19937_64 rng(111);
  std::uniform_real_distribution<double> uni(-1, 1);
  bool ok = true;
  for (int i = 0; i < 1000 && ok; ++i) {
    int dim = i % 2 ? 2 : 3;
    std::size_t n = 2 + rng() % 4;
    Point center;
    center.dim = dim;
    for (int k = 0; k < dim; ++k) center.v[k] = uni(rng) * 100;
    double rp = std::abs(uni(rng)) * 10 + 0.5;
    PointCloud plain = random_cloud(rng, n, dim, center, rp);

    CipherParams params;
    // floor at 1e-2: peeling a round amplifies rounding by 1/psi, so very
    // small psi cannot meet 1e-8 in double precision over two rounds
    params.psi = std::max(std::abs(uni(rng)) / 9.0, 1e-2);
    for (double& k : params.key.k0) k = uni(rng);
    params.dimension = dim;
    params.rounds = 1 + static_cast<int>(i % 4 == 0);
    params.variant = i % 3 ? Variant::Original : Variant::Modified;
    params.sphere_override = BoundingSphere{center, rp};

    // plan that keeps plaintext coordinates in P' slots
    std::size_t half = n * static_cast<std::size_t>(dim);
    std::vector<std::size_t> perm(2 * half);
    for (std::size_t j = 0; j < 2 * half; ++j) perm[j] = j + 1;
    std::shuffle(perm.begin(), perm.begin() + static_cast<std::ptrdiff_t>(half),
                 rng);
    std::shuffle(perm.begin() + static_cast<std::ptrdiff_t>(half), perm.end(),
                 rng);
    params.explicit_perm = perm;

    auto trace = encrypt_pipeline(plain, params);
    auto outcome = decrypt_pipeline(trace.output, params);
    ok = outcome.classification == DecryptOutcome::Class::Unique;
    for (std::size_t j = 0; ok && j < n; ++j)
      ok = dist(outcome.solution->pts[j], plain.pts[j]) <= 1e-8;
  }
  criterion(10, ok,
            "1e3 encrypt/decrypt round trips exact to 1e-8, both variants, "
            "both dimensions, rounds 1 and 2");
}

}  // namespace

int main() {
  crit1_chebyshev();
  crit2_rotations();
  crit3_meb();
  crit4_example1();
  crit5_example2();
  crit6_lemma1();
  crit7_corollary1();
  crit8_lemma3();
  crit9_extents();
  crit10_roundtrip();
  std::printf("%d of 10 criteria passed\n", 10 - g_failures);
  return g_failures == 0 ? 0 : 1;
}
