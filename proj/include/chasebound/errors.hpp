#pragma once

#include <cstddef>
#include <cstdint>
#include <stdexcept>
#include <string>

namespace chasebound {

// An engine invariant was violated; never expected on valid inputs.
class InternalInvariantError : public std::logic_error {
public:
    using std::logic_error::logic_error;
};

// Instance enumeration would exceed the configured ceiling.
class InfeasibleError : public std::runtime_error {
public:
    InfeasibleError(std::uint64_t estimate, std::uint64_t ceiling)
        : std::runtime_error("instance enumeration infeasible: estimated " +
                             std::to_string(estimate) + " isomorphism classes exceeds ceiling " +
                             std::to_string(ceiling)),
          estimate_(estimate),
          ceiling_(ceiling) {}
    std::uint64_t estimate() const { return estimate_; }
    std::uint64_t ceiling() const { return ceiling_; }

private:
    std::uint64_t estimate_;
    std::uint64_t ceiling_;
};

}  // namespace chasebound
