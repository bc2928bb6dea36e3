#pragma once

#include <cstdint>
#include <optional>

#include "cipher.hpp"
#include "geometry.hpp"

namespace pcs {

enum class CenterMode { Meb, Centroid };

struct StabilityReport {
  BoundingSphere plain_sphere;
  BoundingSphere cipher_sphere;
  double center_offset{0.0};
  bool dimensional{false};
  bool spatial{false};
  bool geometric{false};
  // relaxed verdict: does ANY enclosing sphere of the ciphertext nest in
  // the plaintext sphere, i.e. max_j ||C^j - P^0|| <= r_p
  bool witness_geometric{false};
  double max_deviation{0.0};
};

StabilityReport assess(const BoundingSphere& plain_sphere,
                       const PointCloud& ciphertext,
                       CenterMode mode = CenterMode::Meb);

// (psi + 1) (6 r_p + sqrt(3) (M0 - m0)), the deviation cap for the
// original encryption rule.
double lemma1_bound(double psi, double r_p, const Point& center);

// psi [12 r_p + 3 sqrt(3) (M0 - m0)] + (1 - psi) ||P0||, the cap for the
// scaled rule; reduces to 12 psi r_p at the origin.
double lemma3_bound(double psi, double r_p, const Point& center);

struct VerifyConfig {
  std::size_t trials{10000};
  std::uint64_t seed{1};
  Variant variant{Variant::Original};
  bool origin_center{false};
  std::optional<double> psi_fixed;  // otherwise uniform in (0,1]
  std::size_t n_min{2};
  std::size_t n_max{64};
  double max_center_norm{1000.0};
  double max_radius{100.0};
};

struct VerifySummary {
  std::size_t trials{0};
  std::size_t cube_violations{0};        // shuffled point left the cube
  std::size_t pair_violations{0};        // ||P'-O'|| bound failed
  std::size_t bound_violations{0};       // deviation bound failed
  std::size_t witness_stable{0};         // max deviation <= r_p
  double max_tightness{0.0};             // observed / bound
  double max_pair_ratio{0.0};
};

VerifySummary verify_bounds(const VerifyConfig& config);

struct CensusConfig {
  std::size_t trials_per_bucket{1000};
  std::uint64_t seed{1};
  double psi{1.0 / 9.0};
  std::optional<Point> center;  // random otherwise
  double radius{100.0};
  std::size_t n_points{16};
  bool identity_control{false};  // ciphertext := plaintext
};

struct CensusSummary {
  std::size_t trials_per_bucket{0};
  std::size_t boundary_unstable{0};
  std::size_t interior_unstable{0};
  double boundary_fraction{0.0};
  double interior_fraction{0.0};
};

// Fraction of trials whose ciphertext escapes the plaintext sphere
// (witness verdict false), plaintext sampled on the sphere boundary vs.
// uniformly inside it.
CensusSummary instability_census(const CensusConfig& config);

// Per-trial RNG stream: master seed + trial counter, so any trial is
// reproducible in isolation and aggregation is order-insensitive.
std::uint64_t trial_seed(std::uint64_t master, std::uint64_t trial);

}  // namespace pcs
