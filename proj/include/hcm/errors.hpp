#pragma once

#include <stdexcept>
#include <string>

namespace hcm {

// Failure classes map onto disjoint CLI exit codes.
struct InputError : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct RangeError : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct RefusalError : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct ContractError : std::logic_error {
    using std::logic_error::logic_error;
};

inline int exit_code_for(const std::exception& e)
{
    if (dynamic_cast<const InputError*>(&e))
        return 2;
    if (dynamic_cast<const RangeError*>(&e))
        return 3;
    if (dynamic_cast<const RefusalError*>(&e))
        return 4;
    return 1;
}

}  // namespace hcm
