#include "cipher.hpp"

#include <Eigen/Dense>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace pcs {

std::size_t scalars_per_point(int dim) {
  if (dim == 3) return 6;
  if (dim == 2) return 3;
  throw std::invalid_argument("dimension must be 2 or 3");
}

namespace {

std::size_t material_base(int round, std::size_t j_1based, std::size_t n_points,
                          int dim) {
  return (static_cast<std::size_t>(round - 1) * n_points + (j_1based - 1)) *
         scalars_per_point(dim);
}

std::size_t angle_count(int dim) { return dim == 3 ? 3u : 1u; }

}  // namespace

std::vector<std::size_t> PermutationPlan::source_map() const {
  std::vector<std::size_t> src(pool_len);
  for (std::size_t b = 0; b < perms.size(); ++b) {
    std::size_t s = block_starts[b];
    const auto& p = perms[b];
    if (direction == PermDirection::Forward) {
      for (std::size_t i = 0; i < p.size(); ++i) src[s + i] = s + p[i];
    } else {
      for (std::size_t i = 0; i < p.size(); ++i) src[s + p[i]] = s + i;
    }
  }
  return src;
}

void PermutationPlan::validate() const {
  if (perms.size() != block_starts.size())
    throw std::invalid_argument("plan: block/perm count mismatch");
  std::size_t total = 0;
  for (std::size_t b = 0; b < perms.size(); ++b) {
    if (block_starts[b] != total)
      throw std::invalid_argument("plan: blocks do not partition the pool");
    const auto& p = perms[b];
    std::vector<bool> seen(p.size(), false);
    for (std::size_t v : p) {
      if (v >= p.size() || seen[v])
        throw std::invalid_argument("plan: permutation is not a bijection");
      seen[v] = true;
    }
    total += p.size();
  }
  if (total != pool_len)
    throw std::invalid_argument("plan: blocks do not cover the pool");
}

PermutationPlan identity_plan(std::size_t pool_len) {
  PermutationPlan plan;
  plan.pool_len = pool_len;
  plan.block_starts = {0};
  std::vector<std::size_t> id(pool_len);
  std::iota(id.begin(), id.end(), 0u);
  plan.perms = {std::move(id)};
  return plan;
}

PermutationPlan explicit_plan(const std::vector<std::size_t>& perm_1based,
                              PermDirection dir) {
  PermutationPlan plan;
  plan.pool_len = perm_1based.size();
  plan.block_starts = {0};
  std::vector<std::size_t> p(perm_1based.size());
  for (std::size_t i = 0; i < p.size(); ++i) {
    if (perm_1based[i] == 0 || perm_1based[i] > p.size())
      throw std::invalid_argument("explicit permutation entry out of range");
    p[i] = perm_1based[i] - 1;
  }
  plan.perms = {std::move(p)};
  plan.direction = dir;
  plan.validate();
  return plan;
}

PermutationPlan derived_plan(Keystream& ks, std::size_t n_points, int dim,
                             int round, PermDirection dir) {
  std::size_t pool_len = 2 * static_cast<std::size_t>(dim) * n_points;
  std::size_t n_blocks = n_points > 8 ? n_points / 8 : 1;
  PermutationPlan plan;
  plan.pool_len = pool_len;
  plan.direction = dir;
  // fresh stream scalars past the 2N material states, one region per round
  std::size_t offset = 2 * n_points * scalars_per_point(dim) +
                       static_cast<std::size_t>(round - 1) * pool_len;
  std::size_t base = pool_len / n_blocks, rem = pool_len % n_blocks;
  std::size_t start = 0;
  for (std::size_t b = 0; b < n_blocks; ++b) {
    std::size_t len = base + (b < rem ? 1 : 0);
    plan.block_starts.push_back(start);
    plan.perms.push_back(derive_permutation(ks, len, offset + start));
    start += len;
  }
  return plan;
}

AnchorSet gen_anchors(const BoundingSphere& sphere, Keystream& ks, int round,
                      std::size_t n_points, int dim) {
  AnchorSet out;
  out.sphere = sphere;
  out.anchors.dim = dim;
  for (std::size_t j = 1; j <= n_points; ++j) {
    std::size_t base = material_base(round, j, n_points, dim);
    Point a;
    a.dim = dim;
    for (int i = 0; i < dim; ++i)
      a.v[i] = sphere.center.v[i] +
               sphere.radius * ks.flat(base + static_cast<std::size_t>(i));
    out.anchors.pts.push_back(a);
  }
  return out;
}

AngleSet gen_angles(Keystream& ks, int round, std::size_t n_points, int dim) {
  AngleSet out;
  for (std::size_t j = 1; j <= n_points; ++j) {
    std::size_t base = material_base(round, j, n_points, dim) +
                       static_cast<std::size_t>(dim);
    std::vector<double> a;
    for (std::size_t i = 0; i < angle_count(dim); ++i)
      a.push_back(std::floor(180.0 * ks.flat(base + i)));
    out.angles.push_back(std::move(a));
  }
  return out;
}

std::vector<double> build_pool(const PointCloud& plain, const AnchorSet& anchors,
                               PoolOrder order) {
  if (plain.size() != anchors.anchors.size())
    throw std::invalid_argument("build_pool: size mismatch");
  std::vector<double> pool;
  pool.reserve(2 * plain.size() * static_cast<std::size_t>(plain.dim));
  auto push = [&](const PointCloud& c) {
    for (const Point& p : c.pts)
      for (int i = 0; i < c.dim; ++i) pool.push_back(p.v[i]);
  };
  if (order == PoolOrder::PlainFirst) {
    push(plain);
    push(anchors.anchors);
  } else {
    push(anchors.anchors);
    push(plain);
  }
  return pool;
}

std::pair<PointCloud, PointCloud> split_pool(const std::vector<double>& pool,
                                             std::size_t n_points, int dim,
                                             PoolOrder order) {
  std::size_t half = n_points * static_cast<std::size_t>(dim);
  if (pool.size() != 2 * half)
    throw std::invalid_argument("split_pool: pool length mismatch");
  auto chunk = [&](std::size_t from) {
    PointCloud c;
    c.dim = dim;
    for (std::size_t j = 0; j < n_points; ++j) {
      Point p;
      p.dim = dim;
      for (int i = 0; i < dim; ++i)
        p.v[i] = pool[from + j * static_cast<std::size_t>(dim) +
                      static_cast<std::size_t>(i)];
      c.pts.push_back(p);
    }
    return c;
  };
  if (order == PoolOrder::PlainFirst) return {chunk(0), chunk(half)};
  return {chunk(half), chunk(0)};
}

std::vector<double> apply_plan(const std::vector<double>& pool,
                               const PermutationPlan& plan) {
  if (pool.size() != plan.pool_len)
    throw std::invalid_argument("apply_plan: pool length mismatch");
  plan.validate();
  auto src = plan.source_map();
  std::vector<double> out(pool.size());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = pool[src[i]];
  return out;
}

std::vector<double> invert_plan(const std::vector<double>& shuffled,
                                const PermutationPlan& plan) {
  if (shuffled.size() != plan.pool_len)
    throw std::invalid_argument("invert_plan: pool length mismatch");
  plan.validate();
  auto src = plan.source_map();
  std::vector<double> out(shuffled.size());
  for (std::size_t i = 0; i < out.size(); ++i) out[src[i]] = shuffled[i];
  return out;
}

PointCloud encrypt_points(const PointCloud& p_shuf, const PointCloud& o_shuf,
                          const AngleSet& angles, double psi, Variant variant,
                          const Conventions& conv) {
  if (p_shuf.size() != o_shuf.size() || p_shuf.size() != angles.angles.size())
    throw std::invalid_argument("encrypt_points: size mismatch");
  if (psi <= 0.0) throw std::invalid_argument("encrypt_points: psi <= 0");
  PointCloud out;
  out.dim = p_shuf.dim;
  for (std::size_t j = 0; j < p_shuf.size(); ++j) {
    RotationMatrix r = rotation_matrix(angles.angles[j], p_shuf.dim,
                                       conv.handedness, conv.compose);
    Point rotated = r.apply(p_shuf.pts[j] - o_shuf.pts[j]);
    Point c = (variant == Variant::Original)
                  ? psi * rotated + o_shuf.pts[j]
                  : psi * (rotated + o_shuf.pts[j]);
    out.pts.push_back(c);
  }
  return out;
}

namespace {

Keystream make_keystream(const CipherParams& params, std::size_t n_points) {
  if (!params.explicit_keystream.empty())
    return Keystream::from_states(params.explicit_keystream);
  return Keystream::generate(params.key, 2 * n_points);
}

PermutationPlan plan_for_round(const CipherParams& params, Keystream& ks,
                               std::size_t n_points, int round) {
  if (!params.explicit_perm.empty())
    return explicit_plan(params.explicit_perm, params.conv.perm_direction);
  return derived_plan(ks, n_points, params.dimension, round,
                      params.conv.perm_direction);
}

}  // namespace

EncryptTrace encrypt_pipeline(const PointCloud& plain,
                              const CipherParams& params) {
  if (plain.size() < 2)
    throw std::invalid_argument("encrypt_pipeline: need at least 2 points");
  if (plain.dim != params.dimension)
    throw std::invalid_argument("encrypt_pipeline: dimension mismatch");
  if (params.rounds != 1 && params.rounds != 2)
    throw std::invalid_argument("encrypt_pipeline: rounds must be 1 or 2");
  if (params.psi <= 0.0)
    throw std::invalid_argument("encrypt_pipeline: psi must be positive");

  EncryptTrace trace;
  trace.input = plain;
  trace.sphere = params.sphere_override ? *params.sphere_override
                                        : min_enclosing_sphere(plain);
  double psi_cap = params.variant == Variant::Original ? 1.0 / 9.0 : 1.0 / 12.0;
  if (params.psi > psi_cap)
    trace.warning = "psi outside the stable range (0, " +
                    std::to_string(psi_cap) + "]";

  std::size_t n = plain.size();
  Keystream ks = make_keystream(params, n);
  PointCloud current = plain;
  for (int round = 1; round <= params.rounds; ++round) {
    RoundTrace rt;
    rt.round = round;
    rt.anchors = gen_anchors(trace.sphere, ks, round, n, params.dimension);
    rt.angles = gen_angles(ks, round, n, params.dimension);
    rt.plan = plan_for_round(params, ks, n, round);
    auto pool = build_pool(current, rt.anchors, params.conv.pool_order);
    auto shuffled = apply_plan(pool, rt.plan);
    auto [p_shuf, o_shuf] =
        split_pool(shuffled, n, params.dimension, params.conv.pool_order);
    rt.p_shuffled = p_shuf;
    rt.o_shuffled = o_shuf;
    rt.cipher = encrypt_points(p_shuf, o_shuf, rt.angles, params.psi,
                               params.variant, params.conv);
    current = rt.cipher;
    trace.rounds.push_back(std::move(rt));
  }
  trace.output = current;
  std::size_t prefix = std::min<std::size_t>(ks.size(), 16);
  trace.keystream_prefix.assign(ks.states().begin(),
                                ks.states().begin() +
                                    static_cast<std::ptrdiff_t>(prefix));
  return trace;
}

const char* to_string(DecryptOutcome::Class c) {
  switch (c) {
    case DecryptOutcome::Class::Unique: return "unique";
    case DecryptOutcome::Class::Inconsistent: return "inconsistent";
    case DecryptOutcome::Class::Underdetermined: return "underdetermined";
  }
  return "?";
}

DecryptOutcome solve_round(const PointCloud& cipher, const AnchorSet& anchors,
                           const AngleSet& angles, const PermutationPlan& plan,
                           double psi, Variant variant,
                           const Conventions& conv) {
  if (psi == 0.0) throw std::invalid_argument("solve_round: psi = 0");
  plan.validate();
  int dim = cipher.dim;
  std::size_t n = cipher.size();
  std::size_t half = n * static_cast<std::size_t>(dim);
  if (plan.pool_len != 2 * half)
    throw std::invalid_argument("solve_round: plan does not fit the cloud");

  // pool positions of the unknown plaintext coordinates
  std::size_t plain_base =
      conv.pool_order == PoolOrder::PlainFirst ? 0 : half;
  std::size_t anchor_base = half - plain_base;
  auto src = plan.source_map();

  std::vector<double> anchor_flat;
  for (const Point& a : anchors.anchors.pts)
    for (int i = 0; i < dim; ++i) anchor_flat.push_back(a.v[i]);

  Eigen::MatrixXd A = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(half),
                                            static_cast<Eigen::Index>(half));
  Eigen::VectorXd b(static_cast<Eigen::Index>(half));

  // output positions of the P' and O' chunks follow the pool layout
  std::size_t p_out_base = plain_base;
  std::size_t o_out_base = anchor_base;

  for (std::size_t j = 0; j < n; ++j) {
    RotationMatrix r =
        rotation_matrix(angles.angles[j], dim, conv.handedness, conv.compose);
    for (int a = 0; a < dim; ++a) {
      std::size_t row = j * static_cast<std::size_t>(dim) +
                        static_cast<std::size_t>(a);
      double rhs = cipher.pts[j].v[a];
      for (int i = 0; i < dim; ++i) {
        // C = psi R P' + (I - psi R) O'        (original)
        // C = psi R P' + psi (I - R) O'        (modified)
        double cp = psi * r.m[a][i];
        double co = (variant == Variant::Original)
                        ? (a == i ? 1.0 : 0.0) - psi * r.m[a][i]
                        : psi * ((a == i ? 1.0 : 0.0) - r.m[a][i]);
        std::size_t slots[2] = {
            p_out_base + j * static_cast<std::size_t>(dim) +
                static_cast<std::size_t>(i),
            o_out_base + j * static_cast<std::size_t>(dim) +
                static_cast<std::size_t>(i)};
        double coeffs[2] = {cp, co};
        for (int t = 0; t < 2; ++t) {
          std::size_t pool_pos = src[slots[t]];
          if (pool_pos >= plain_base && pool_pos < plain_base + half) {
            A(static_cast<Eigen::Index>(row),
              static_cast<Eigen::Index>(pool_pos - plain_base)) += coeffs[t];
          } else {
            rhs -= coeffs[t] * anchor_flat[pool_pos - anchor_base];
          }
        }
      }
      b(static_cast<Eigen::Index>(row)) = rhs;
    }
  }

  Eigen::JacobiSVD<Eigen::MatrixXd> svd(A, Eigen::ComputeThinU |
                                               Eigen::ComputeThinV);
  double smax = svd.singularValues().size() ? svd.singularValues()(0) : 0.0;
  double tol = 1e-9 * smax;
  int rank = 0;
  for (Eigen::Index i = 0; i < svd.singularValues().size(); ++i)
    if (svd.singularValues()(i) > tol) ++rank;

  Eigen::MatrixXd aug(A.rows(), A.cols() + 1);
  aug << A, b;
  Eigen::JacobiSVD<Eigen::MatrixXd> svd_aug(aug);
  double smax_a = svd_aug.singularValues().size() ? svd_aug.singularValues()(0)
                                                  : 0.0;
  int aug_rank = 0;
  for (Eigen::Index i = 0; i < svd_aug.singularValues().size(); ++i)
    if (svd_aug.singularValues()(i) > 1e-9 * smax_a) ++aug_rank;

  svd.setThreshold(1e-9);
  Eigen::VectorXd x = svd.solve(b);
  double residual = (A * x - b).norm();

  DecryptOutcome out;
  out.rank = rank;
  out.augmented_rank = aug_rank;
  out.residual = residual;
  out.unknowns = static_cast<int>(half);
  out.system_a.resize(half, std::vector<double>(half));
  out.system_b.resize(half);
  for (std::size_t i = 0; i < half; ++i) {
    for (std::size_t j2 = 0; j2 < half; ++j2)
      out.system_a[i][j2] = A(static_cast<Eigen::Index>(i),
                              static_cast<Eigen::Index>(j2));
    out.system_b[i] = b(static_cast<Eigen::Index>(i));
  }

  if (rank == static_cast<int>(half) && residual <= 1e-6) {
    out.classification = DecryptOutcome::Class::Unique;
    PointCloud rec;
    rec.dim = dim;
    for (std::size_t j = 0; j < n; ++j) {
      Point p;
      p.dim = dim;
      for (int i = 0; i < dim; ++i)
        p.v[i] = x(static_cast<Eigen::Index>(j * static_cast<std::size_t>(dim) +
                                             static_cast<std::size_t>(i)));
      rec.pts.push_back(p);
    }
    out.solution = std::move(rec);
  } else if (residual > 1e-6) {
    out.classification = DecryptOutcome::Class::Inconsistent;
  } else {
    out.classification = DecryptOutcome::Class::Underdetermined;
  }
  return out;
}

DecryptOutcome decrypt_pipeline(const PointCloud& cipher,
                                const CipherParams& params) {
  if (!params.sphere_override)
    throw std::invalid_argument(
        "decrypt_pipeline: plaintext sphere (center, radius) is required");
  if (cipher.dim != params.dimension)
    throw std::invalid_argument("decrypt_pipeline: dimension mismatch");
  std::size_t n = cipher.size();
  Keystream ks = make_keystream(params, n);
  const BoundingSphere& sphere = *params.sphere_override;

  PointCloud current = cipher;
  DecryptOutcome out;
  for (int round = params.rounds; round >= 1; --round) {
    AnchorSet anchors = gen_anchors(sphere, ks, round, n, params.dimension);
    AngleSet angles = gen_angles(ks, round, n, params.dimension);
    PermutationPlan plan = plan_for_round(params, ks, n, round);
    out = solve_round(current, anchors, angles, plan, params.psi,
                      params.variant, params.conv);
    if (out.classification != DecryptOutcome::Class::Unique) return out;
    current = *out.solution;
  }
  return out;
}

}  // namespace pcs
