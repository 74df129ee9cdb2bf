#pragma once
#include <stdexcept>
#include <string>

namespace nutaxis {

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct NonpositiveField : Error { using Error::Error; };
struct PositivityViolation : Error { using Error::Error; };
struct NonFinite : Error { using Error::Error; };
struct StepCollapse : Error { using Error::Error; };
struct RangeError : Error { using Error::Error; };
struct BadScenario : Error { using Error::Error; };
struct DegenerateSample : Error { using Error::Error; };
struct ConfigError : Error { using Error::Error; };

} // namespace nutaxis
