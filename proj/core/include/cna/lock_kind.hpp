#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace cna {

enum class LockKind {
  kCna,      // "cna"
  kCnaOpt,   // "cna-opt": shuffle reduction enabled
  kMcs,      // "mcs"
  kTas,      // "tas"
  kTicket,   // "ticket"
  kWordMcs,  // "word-mcs": 32-bit word front end, MCS slow path
  kWordCna,  // "word-cna": 32-bit word front end, CNA slow path
};

std::optional<LockKind> parse_lock_kind(std::string_view name);
std::string_view lock_kind_name(LockKind kind);
const std::vector<std::string>& lock_kind_names();

}  // namespace cna
