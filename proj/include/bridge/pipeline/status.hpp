#pragma once

#include <string_view>

namespace bridge {

enum class FinalStatus { Success, Failure, ExtractedNoArtifact };

inline std::string_view to_string(FinalStatus s) {
  switch (s) {
    case FinalStatus::Success: return "Success";
    case FinalStatus::Failure: return "Failure";
    case FinalStatus::ExtractedNoArtifact: return "ExtractedNoArtifact";
  }
  return "?";
}

}  // namespace bridge
