#pragma once

#include <stdexcept>
#include <string>

namespace ccpnet {

// Base of every domain error. `name()` is stable and machine-readable; the
// CLI maps it into diagnostics and exit codes.
class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& msg) : std::runtime_error(msg) {}
  virtual const char* name() const noexcept { return "Error"; }
};

#define CCPNET_DEFINE_ERROR(TYPE)                                      \
  class TYPE : public Error {                                          \
   public:                                                             \
    explicit TYPE(const std::string& msg = #TYPE) : Error(msg) {}      \
    const char* name() const noexcept override { return #TYPE; }       \
  }

CCPNET_DEFINE_ERROR(DimensionMismatch);
CCPNET_DEFINE_ERROR(InvalidArgument);
CCPNET_DEFINE_ERROR(NonCommuting);
CCPNET_DEFINE_ERROR(ZeroConditioningEvent);
CCPNET_DEFINE_ERROR(NotCorrelated);
CCPNET_DEFINE_ERROR(DenominatorVanishes);
CCPNET_DEFINE_ERROR(DegenerateNesting);
CCPNET_DEFINE_ERROR(ZeroProjection);
CCPNET_DEFINE_ERROR(ProductState);
CCPNET_DEFINE_ERROR(NotFound);
CCPNET_DEFINE_ERROR(MalformedRegion);
CCPNET_DEFINE_ERROR(DegenerateBox);
CCPNET_DEFINE_ERROR(NotSpacelikeSeparated);
CCPNET_DEFINE_ERROR(NoValidSlab);
CCPNET_DEFINE_ERROR(RegionOutsideLattice);
CCPNET_DEFINE_ERROR(NoCorrelationFound);
CCPNET_DEFINE_ERROR(SchemaError);

#undef CCPNET_DEFINE_ERROR

}  // namespace ccpnet
