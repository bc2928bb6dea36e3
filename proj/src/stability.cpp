#include "stability.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <stdexcept>

namespace pcs {

StabilityReport assess(const BoundingSphere& plain_sphere,
                       const PointCloud& ciphertext, CenterMode mode) {
  if (ciphertext.empty()) throw std::invalid_argument("assess: empty ciphertext");
  if (plain_sphere.radius <= 0.0)
    throw std::invalid_argument("assess: degenerate plaintext sphere");

  StabilityReport rep;
  rep.plain_sphere = plain_sphere;
  BoundingSphere meb = min_enclosing_sphere(ciphertext);
  if (mode == CenterMode::Centroid) {
    Point c;
    c.dim = ciphertext.dim;
    for (const Point& p : ciphertext.pts) c = c + p;
    c = (1.0 / static_cast<double>(ciphertext.size())) * c;
    double r = 0.0;
    for (const Point& p : ciphertext.pts) r = std::max(r, dist(p, c));
    rep.cipher_sphere = {c, r};
  } else {
    rep.cipher_sphere = meb;
  }
  rep.center_offset = dist(rep.cipher_sphere.center, plain_sphere.center);
  double r_p = plain_sphere.radius, r_c = rep.cipher_sphere.radius;
  const double tol = 1e-9;
  rep.dimensional = (r_p >= r_c - tol) && (r_c > 0.0);
  rep.spatial = rep.center_offset <= r_p - r_c + tol;
  rep.geometric = rep.dimensional && rep.spatial;
  rep.max_deviation = 0.0;
  for (const Point& p : ciphertext.pts)
    rep.max_deviation = std::max(rep.max_deviation, dist(p, plain_sphere.center));
  rep.witness_geometric = rep.max_deviation <= r_p + tol;
  return rep;
}

double lemma1_bound(double psi, double r_p, const Point& center) {
  if (psi <= 0.0 || r_p <= 0.0)
    throw std::invalid_argument("lemma1_bound: psi and r_p must be positive");
  ExtentStats e = extent_stats(center);
  return (psi + 1.0) * (6.0 * r_p + std::numbers::sqrt3 * (e.M0 - e.m0));
}

double lemma3_bound(double psi, double r_p, const Point& center) {
  if (psi <= 0.0 || r_p <= 0.0)
    throw std::invalid_argument("lemma3_bound: psi and r_p must be positive");
  ExtentStats e = extent_stats(center);
  return psi * (12.0 * r_p + 3.0 * std::numbers::sqrt3 * (e.M0 - e.m0)) +
         (1.0 - psi) * norm(center);
}

std::uint64_t trial_seed(std::uint64_t master, std::uint64_t trial) {
  // splitmix64 finalizer over master ^ counter
  std::uint64_t z = master + 0x9e3779b97f4a7c15ull * (trial + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
  return z ^ (z >> 31);
}

namespace {

Point random_in_ball(std::mt19937_64& rng, const Point& center, double radius,
                     bool on_boundary = false) {
  std::normal_distribution<double> gauss(0.0, 1.0);
  std::uniform_real_distribution<double> uni(0.0, 1.0);
  Point dir;
  dir.dim = center.dim;
  double n = 0.0;
  do {
    for (int i = 0; i < center.dim; ++i) dir.v[i] = gauss(rng);
    n = norm(dir);
  } while (n == 0.0);
  double r = on_boundary
                 ? radius
                 : radius * std::pow(uni(rng), 1.0 / center.dim);
  return center + (r / n) * dir;
}

ChaoticKey random_key(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> uni(-1.0, 1.0);
  ChaoticKey key;
  for (double& k : key.k0) k = uni(rng);
  key.degree = 3;
  return key;
}

std::vector<std::size_t> random_perm_1based(std::mt19937_64& rng,
                                            std::size_t len) {
  std::vector<std::size_t> p(len);
  for (std::size_t i = 0; i < len; ++i) p[i] = i + 1;
  std::shuffle(p.begin(), p.end(), rng);
  return p;
}

}  // namespace

VerifySummary verify_bounds(const VerifyConfig& config) {
  if (config.trials < 1)
    throw std::invalid_argument("verify_bounds: trials must be >= 1");
  VerifySummary sum;
  sum.trials = config.trials;
  const double tol = 1e-9;

  for (std::size_t t = 0; t < config.trials; ++t) {
    std::mt19937_64 rng(trial_seed(config.seed, t));
    std::uniform_int_distribution<std::size_t> npts(config.n_min, config.n_max);
    std::uniform_real_distribution<double> uni01(0.0, 1.0);

    std::size_t n = npts(rng);
    Point center(0.0, 0.0, 0.0);
    if (!config.origin_center) {
      std::uniform_real_distribution<double> cc(
          -config.max_center_norm / std::numbers::sqrt3,
          config.max_center_norm / std::numbers::sqrt3);
      center = Point(cc(rng), cc(rng), cc(rng));
    }
    double r_p = config.max_radius * std::max(uni01(rng), 1e-3);
    double psi = config.psi_fixed ? *config.psi_fixed
                                  : std::max(uni01(rng), 1e-6);

    PointCloud plain;
    plain.dim = 3;
    for (std::size_t j = 0; j < n; ++j)
      plain.pts.push_back(random_in_ball(rng, center, r_p));

    CipherParams params;
    params.psi = psi;
    params.key = random_key(rng);
    params.dimension = 3;
    params.variant = config.variant;
    params.sphere_override = BoundingSphere{center, r_p};
    params.explicit_perm = random_perm_1based(rng, 6 * n);

    EncryptTrace trace = encrypt_pipeline(plain, params);
    const RoundTrace& rt = trace.rounds[0];

    AxisBox cube = shuffled_cube(center, r_p);
    ExtentStats ext = extent_stats(center);
    double pair_bound =
        6.0 * r_p + std::numbers::sqrt3 * (ext.M0 - ext.m0);
    double dev_bound = config.variant == Variant::Original
                           ? lemma1_bound(psi, r_p, center)
                           : lemma3_bound(psi, r_p, center);

    bool witness = true;
    for (std::size_t j = 0; j < n; ++j) {
      if (!cube.contains(rt.p_shuffled.pts[j], tol) ||
          !cube.contains(rt.o_shuffled.pts[j], tol))
        ++sum.cube_violations;
      double pair = dist(rt.p_shuffled.pts[j], rt.o_shuffled.pts[j]);
      if (pair > pair_bound + tol) ++sum.pair_violations;
      sum.max_pair_ratio = std::max(sum.max_pair_ratio, pair / pair_bound);
      double dev = dist(rt.cipher.pts[j], center);
      if (dev > dev_bound + tol) ++sum.bound_violations;
      sum.max_tightness = std::max(sum.max_tightness, dev / dev_bound);
      if (dev > r_p + tol) witness = false;
    }
    if (witness) ++sum.witness_stable;
  }
  return sum;
}

CensusSummary instability_census(const CensusConfig& config) {
  if (config.trials_per_bucket < 1)
    throw std::invalid_argument("instability_census: trials must be >= 1");
  CensusSummary sum;
  sum.trials_per_bucket = config.trials_per_bucket;

  for (int bucket = 0; bucket < 2; ++bucket) {
    bool on_boundary = bucket == 0;
    for (std::size_t t = 0; t < config.trials_per_bucket; ++t) {
      std::mt19937_64 rng(
          trial_seed(config.seed ^ (on_boundary ? 0xb0 : 0x1e), t));
      Point center = config.center ? *config.center : Point(0.0, 0.0, 0.0);
      if (!config.center) {
        std::uniform_real_distribution<double> cc(-500.0, 500.0);
        center = Point(cc(rng), cc(rng), cc(rng));
      }
      PointCloud plain;
      plain.dim = 3;
      for (std::size_t j = 0; j < config.n_points; ++j)
        plain.pts.push_back(
            random_in_ball(rng, center, config.radius, on_boundary));

      BoundingSphere sphere{center, config.radius};
      PointCloud cipher;
      if (config.identity_control) {
        cipher = plain;
      } else {
        CipherParams params;
        params.psi = config.psi;
        params.key = random_key(rng);
        params.dimension = 3;
        params.variant = Variant::Original;
        params.sphere_override = sphere;
        params.explicit_perm =
            random_perm_1based(rng, 6 * config.n_points);
        cipher = encrypt_pipeline(plain, params).output;
      }
      StabilityReport rep = assess(sphere, cipher);
      // witness mode: strict-mode MEB artifacts would flag even the
      // identity map, so count only genuine escapes from the sphere
      if (!rep.witness_geometric) {
        if (on_boundary)
          ++sum.boundary_unstable;
        else
          ++sum.interior_unstable;
      }
    }
  }
  sum.boundary_fraction = static_cast<double>(sum.boundary_unstable) /
                          static_cast<double>(config.trials_per_bucket);
  sum.interior_fraction = static_cast<double>(sum.interior_unstable) /
                          static_cast<double>(config.trials_per_bucket);
  return sum;
}

}  // namespace pcs
