#ifndef COMETH_CHECKPOINT_HPP_
#define COMETH_CHECKPOINT_HPP_

#include <cstdint>
#include <map>
#include <string>

#include "cometh/denoiser.hpp"

namespace cometh {

/**
 * Versioned binary checkpoint: config, named parameter tensors, and
 * (optionally) optimizer moments plus the step counter so training can
 * resume exactly. Round-trip is bit-exact; identical (config, seed) runs
 * produce byte-identical files.
 */
struct Checkpoint {
  DenoiserParams params;
  std::map<std::string, Matrix> adam_m;
  std::map<std::string, Matrix> adam_v;
  std::uint64_t step = 0;

  bool has_optimizer_state() const { return !adam_m.empty(); }
};

void save_checkpoint(const Checkpoint& ckpt, const std::string& path);
Checkpoint load_checkpoint(const std::string& path);

}  // namespace cometh

#endif  // COMETH_CHECKPOINT_HPP_
