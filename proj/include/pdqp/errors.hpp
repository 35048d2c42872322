// errors.hpp -- exception taxonomy shared by all pdqp modules.
#pragma once

#include <stdexcept>
#include <string>

namespace pdqp {

struct Error : std::runtime_error {
    explicit Error(const std::string &msg) : std::runtime_error(msg) {}
};

// state-core
struct NonUnitaryMatrix : Error { using Error::Error; };
struct UnknownRegister : Error { using Error::Error; };
struct ZeroProbabilityBranch : Error { using Error::Error; };
struct DimensionMismatch : Error { using Error::Error; };

// pdqp-engine
struct MalformedCircuit : Error { using Error::Error; };
struct RegisterSizeMismatch : Error { using Error::Error; };
struct QubitBudgetExceeded : Error { using Error::Error; };
struct ReweightNotStochastic : Error { using Error::Error; };
struct CopyOfEntangledRegister : Error { using Error::Error; };

// problems-oracles
struct SecondParallelQuery : Error { using Error::Error; };
struct InvalidParameters : Error { using Error::Error; };

// algorithms
struct NotPerfectSquare : Error { using Error::Error; };

// adversary-lab
struct EnumerationBudgetExceeded : Error { using Error::Error; };
struct InvalidScheme : Error { using Error::Error; };

// bench-cli
struct MissingState : Error { using Error::Error; };
struct BudgetCapReached : Error { using Error::Error; };

} // namespace pdqp
