#include "keystream.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace pcs {

double chebyshev_next(double k, int degree) {
  if (std::abs(k) > 1.0)
    throw std::domain_error("chebyshev_next: |k| > 1");
  if (degree < 3)
    throw std::domain_error("chebyshev_next: degree must be >= 3");
  double r = std::cos(degree * std::acos(k));
  return std::clamp(r, -1.0, 1.0);
}

Keystream Keystream::generate(const ChaoticKey& key, std::size_t count) {
  if (key.degree < 3)
    throw std::domain_error("Keystream: degree must be >= 3");
  for (double k : key.k0)
    if (std::abs(k) > 1.0)
      throw std::domain_error("Keystream: seed component outside [-1,1]");
  Keystream ks;
  ks.key_ = key;
  ks.extend_to(count);
  return ks;
}

Keystream Keystream::from_states(std::vector<KeyState> states) {
  Keystream ks;
  ks.states_ = std::move(states);
  return ks;
}

void Keystream::extend_to(std::size_t count) {
  if (states_.size() >= count) return;
  if (!key_) throw std::out_of_range("Keystream: exhausted (no generating key)");
  KeyState cur = states_.empty() ? key_->k0 : states_.back();
  while (states_.size() < count) {
    KeyState next;
    for (std::size_t i = 0; i < 6; ++i)
      next[i] = chebyshev_next(cur[i], key_->degree);
    states_.push_back(next);
    cur = next;
  }
}

double Keystream::component(std::size_t j, std::size_t i) const {
  if (j == 0 || j > states_.size() || i >= 6)
    throw std::out_of_range("Keystream::component: index out of range");
  return states_[j - 1][i];
}

double Keystream::flat(std::size_t idx) {
  extend_to(idx / 6 + 1);
  return states_[idx / 6][idx % 6];
}

std::vector<std::size_t> derive_permutation(Keystream& ks,
                                            std::size_t block_len,
                                            std::size_t flat_offset) {
  if (block_len == 0)
    throw std::invalid_argument("derive_permutation: empty block");
  std::vector<double> vals(block_len);
  for (std::size_t i = 0; i < block_len; ++i)
    vals[i] = ks.flat(flat_offset + i);
  std::vector<std::size_t> perm(block_len);
  std::iota(perm.begin(), perm.end(), 0);
  std::stable_sort(perm.begin(), perm.end(),
                   [&](std::size_t a, std::size_t b) { return vals[a] < vals[b]; });
  return perm;
}

}  // namespace pcs
