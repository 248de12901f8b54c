#include <cmath>
#include <string>

#include "fsd/error.hpp"
#include "fsd/types.hpp"

namespace fsd {

void FsdParams::validate() const {
  if (!(std::isfinite(threshold) && threshold > 0.0 && threshold <= 2.0)) {
    throw Error(ErrorCode::kInvalidParams,
                "threshold must be in (0, 2], got " + std::to_string(threshold));
  }
  if (window == 0) throw Error(ErrorCode::kInvalidParams, "window must be positive");
  if (batch == 0) throw Error(ErrorCode::kInvalidParams, "batch must be positive");
  if (workers == 0) throw Error(ErrorCode::kInvalidParams, "workers must be positive");
  if (batch > window) {
    throw Error(ErrorCode::kInvalidParams, "batch (" + std::to_string(batch) +
                                               ") exceeds window (" + std::to_string(window) +
                                               ")");
  }
}

}  // namespace fsd
