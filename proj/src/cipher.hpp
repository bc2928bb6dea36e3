#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "geometry.hpp"
#include "keystream.hpp"

namespace pcs {

enum class Variant { Original, Modified };
enum class PoolOrder { PlainFirst, AnchorsFirst };
enum class PermDirection { Forward, Inverse };

// Conventions the published scenarios leave open; all are overridable so
// the counterexample can be reproduced as closely as possible.
struct Conventions {
  PoolOrder pool_order{PoolOrder::PlainFirst};
  PermDirection perm_direction{PermDirection::Forward};
  Handedness handedness{Handedness::Ccw};
  ComposeOrder compose{ComposeOrder::Xyz};
};

struct CipherParams {
  double psi{1.0 / 9.0};
  ChaoticKey key;
  int dimension{3};
  int rounds{1};
  Variant variant{Variant::Original};
  Conventions conv;
  // explicit 1-based permutation over the whole pool; empty = key-derived
  std::vector<std::size_t> explicit_perm;
  // explicit keystream states override the key (scenario reproduction)
  std::vector<KeyState> explicit_keystream;
  std::optional<BoundingSphere> sphere_override;
};

struct AnchorSet {
  PointCloud anchors;
  BoundingSphere sphere;  // plaintext sphere the anchors scatter around
};

struct AngleSet {
  // one angle vector per point, integer degrees stored as doubles
  std::vector<std::vector<double>> angles;
};

struct PermutationPlan {
  std::size_t pool_len{0};
  std::vector<std::size_t> block_starts;             // one entry per block
  std::vector<std::vector<std::size_t>> perms;       // local 0-based bijections
  PermDirection direction{PermDirection::Forward};

  // flat map: output position -> pool position it reads from
  std::vector<std::size_t> source_map() const;
  void validate() const;
};

PermutationPlan identity_plan(std::size_t pool_len);
PermutationPlan explicit_plan(const std::vector<std::size_t>& perm_1based,
                              PermDirection dir);
// Key-derived plan: floor(N/8) blocks when N > 8, one block otherwise.
PermutationPlan derived_plan(Keystream& ks, std::size_t n_points, int dim,
                             int round, PermDirection dir);

// scalars consumed per point: 6 for d=3 (3 anchor + 3 angle), 3 for d=2
std::size_t scalars_per_point(int dim);

AnchorSet gen_anchors(const BoundingSphere& sphere, Keystream& ks, int round,
                      std::size_t n_points, int dim);
AngleSet gen_angles(Keystream& ks, int round, std::size_t n_points, int dim);

std::vector<double> build_pool(const PointCloud& plain, const AnchorSet& anchors,
                               PoolOrder order);
// Inverse of build_pool's chunking: splits a (possibly permuted) pool back
// into the P' and O' clouds.
std::pair<PointCloud, PointCloud> split_pool(const std::vector<double>& pool,
                                             std::size_t n_points, int dim,
                                             PoolOrder order);
std::vector<double> apply_plan(const std::vector<double>& pool,
                               const PermutationPlan& plan);
std::vector<double> invert_plan(const std::vector<double>& shuffled,
                                const PermutationPlan& plan);

PointCloud encrypt_points(const PointCloud& p_shuf, const PointCloud& o_shuf,
                          const AngleSet& angles, double psi, Variant variant,
                          const Conventions& conv);

struct RoundTrace {
  int round{1};
  AnchorSet anchors;
  AngleSet angles;
  PermutationPlan plan;
  PointCloud p_shuffled;
  PointCloud o_shuffled;
  PointCloud cipher;
};

struct EncryptTrace {
  BoundingSphere sphere;
  std::vector<KeyState> keystream_prefix;
  std::vector<RoundTrace> rounds;
  PointCloud input;
  PointCloud output;
  std::optional<std::string> warning;
};

EncryptTrace encrypt_pipeline(const PointCloud& plain, const CipherParams& params);

struct DecryptOutcome {
  enum class Class { Unique, Inconsistent, Underdetermined };
  Class classification{Class::Unique};
  std::optional<PointCloud> solution;
  double residual{0.0};
  int rank{0};
  int augmented_rank{0};
  int unknowns{0};
  // the assembled system of the (first failing) round, for diagnosis
  std::vector<std::vector<double>> system_a;
  std::vector<double> system_b;
};

const char* to_string(DecryptOutcome::Class c);

// Solves one round: the d*N coordinates of `unknown`-cloud slots are the
// unknowns, anchor coordinates are constants placed by the plan.
DecryptOutcome solve_round(const PointCloud& cipher, const AnchorSet& anchors,
                           const AngleSet& angles, const PermutationPlan& plan,
                           double psi, Variant variant, const Conventions& conv);

// Full inverse of encrypt_pipeline given the key material; peels rounds from
// the last to the first. Requires a sphere override (the receiver is assumed
// to know the plaintext sphere).
DecryptOutcome decrypt_pipeline(const PointCloud& cipher,
                                const CipherParams& params);

}  // namespace pcs
