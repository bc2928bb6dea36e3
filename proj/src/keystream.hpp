#pragma once

#include <array>
#include <cstddef>
#include <optional>
#include <vector>

namespace pcs {

using KeyState = std::array<double, 6>;

struct ChaoticKey {
  KeyState k0{};
  int degree{3};  // Chebyshev map degree, must be >= 3
};

// One application of the Chebyshev map, cos(D * acos(k)). The result is
// clamped into [-1,1] to absorb floating-point overshoot.
double chebyshev_next(double k, int degree);

// The iterated keystream K^1 .. K^count of 6-vectors. The seed K^0 is not
// part of the stored states. State indexing is 1-based (state j), flat
// indexing is 0-based over concatenated state components.
class Keystream {
 public:
  static Keystream generate(const ChaoticKey& key, std::size_t count);

  // Wraps explicitly supplied states (no key, not extendable).
  static Keystream from_states(std::vector<KeyState> states);

  const std::vector<KeyState>& states() const { return states_; }
  std::size_t size() const { return states_.size(); }

  // Component i (0-based) of state j (1-based).
  double component(std::size_t j, std::size_t i) const;

  // Flat scalar index over the concatenated states; extends the stream on
  // demand when a generating key is available, throws otherwise.
  double flat(std::size_t idx);

 private:
  std::vector<KeyState> states_;
  std::optional<ChaoticKey> key_;

  void extend_to(std::size_t count);
};

// Key-dependent bijection on {0..block_len-1}: argsort of block_len fresh
// stream scalars starting at flat_offset, ties broken by index.
std::vector<std::size_t> derive_permutation(Keystream& ks,
                                            std::size_t block_len,
                                            std::size_t flat_offset);

}  // namespace pcs
