#pragma once

#include <stdexcept>
#include <string>
#include <utility>

namespace sassdpr {

// Base of everything the library throws on a precondition or numerical failure.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

#define SASSDPR_ERROR(Name)                                   \
    struct Name : Error {                                     \
        explicit Name(const std::string& m) : Error(m) {}     \
    }

SASSDPR_ERROR(UnstableFilter);
SASSDPR_ERROR(DegreeError);
SASSDPR_ERROR(SingularLyapunov);
SASSDPR_ERROR(SingularTransform);
SASSDPR_ERROR(NotPositiveDefinite);
SASSDPR_ERROR(OrderError);
SASSDPR_ERROR(FrequencyError);
SASSDPR_ERROR(CompositionMismatch);
SASSDPR_ERROR(LengthMismatch);
SASSDPR_ERROR(TooShort);
SASSDPR_ERROR(NotFactorable);
SASSDPR_ERROR(WindowError);
SASSDPR_ERROR(ShapeError);
SASSDPR_ERROR(ParameterError);
SASSDPR_ERROR(EmptyGrid);

#undef SASSDPR_ERROR

// Iteration cap reached; `best` holds the best iterate seen.
template <class T>
struct NoConvergence : Error {
    NoConvergence(const std::string& m, T b) : Error(m), best(std::move(b)) {}
    T best;
};

}  // namespace sassdpr
