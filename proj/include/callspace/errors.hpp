#pragma once

#include <stdexcept>
#include <string>

namespace callspace {

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct InvalidCurve : Error { using Error::Error; };
struct NotConcave : Error { using Error::Error; };
struct NonConcaveInput : Error { using Error::Error; };
struct MeanExceedsOne : Error { using Error::Error; };
struct PriceBelowIntrinsic : Error { using Error::Error; };
struct UnknownFamily : Error { using Error::Error; };
struct QuadratureFailure : Error { using Error::Error; };
struct NotApplicable : Error { using Error::Error; };
struct NotInC1 : Error { using Error::Error; };

} // namespace callspace
