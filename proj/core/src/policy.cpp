#include "cna/policy.hpp"

#include <cstdlib>
#include <stdexcept>
#include <string>

namespace cna {

void validate(const FairnessPolicy& policy) {
  if (!is_low_bit_mask(policy.threshold)) {
    throw std::invalid_argument("threshold must be of the form 2^k - 1");
  }
  if (!is_low_bit_mask(policy.shuffle_threshold)) {
    throw std::invalid_argument("shuffle_threshold must be of the form 2^k - 1");
  }
}

namespace {
bool read_u32_env(const char* name, uint32_t& out) {
  const char* v = std::getenv(name);
  if (!v || !*v) return false;
  out = static_cast<uint32_t>(std::stoul(v, nullptr, 0));
  return true;
}
}  // namespace

FairnessPolicy policy_from_env(FairnessPolicy base) {
  read_u32_env("CNA_THRESHOLD", base.threshold);
  read_u32_env("CNA_SHUFFLE_THRESHOLD", base.shuffle_threshold);
  read_u32_env("CNA_SEED", base.seed);
  return base;
}

FairnessPolicy& default_policy() {
  static FairnessPolicy policy;
  return policy;
}

}  // namespace cna
