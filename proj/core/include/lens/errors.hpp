#pragma once

#include <stdexcept>
#include <string>

namespace lens {

struct Error : std::runtime_error {
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

#define LENS_DEFINE_ERROR(Name)                                    \
  struct Name : Error {                                            \
    explicit Name(const std::string& what) : Error(#Name ": " + what) {} \
  }

LENS_DEFINE_ERROR(ParseError);
LENS_DEFINE_ERROR(ValidationError);
LENS_DEFINE_ERROR(DegenerateSimplex);
LENS_DEFINE_ERROR(DegreeMismatch);
LENS_DEFINE_ERROR(UnsupportedDegree);
LENS_DEFINE_ERROR(MeshMismatch);
LENS_DEFINE_ERROR(SpaceMismatch);
LENS_DEFINE_ERROR(DimensionMismatch);
LENS_DEFINE_ERROR(SolverFailure);
LENS_DEFINE_ERROR(IncompatibleData);
LENS_DEFINE_ERROR(GaussViolation);
LENS_DEFINE_ERROR(NotInvariant);
LENS_DEFINE_ERROR(NotSymplectic);
LENS_DEFINE_ERROR(InvalidCut);
LENS_DEFINE_ERROR(EigensolveFailure);

#undef LENS_DEFINE_ERROR

}  // namespace lens
